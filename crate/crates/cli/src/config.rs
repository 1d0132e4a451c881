use std::collections::BTreeMap;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use apnforge::diffspec::Caps;
use apnforge::field::{parse_hex_u64, DEFAULT_MAX_DEGREE};
use apnforge::Field;

use crate::error::CliError;

/// Environment variable consulted when `--modulus-table` is not given.
pub const MODULUS_TABLE_ENV: &str = "APNFORGE_MODULUS_TABLE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!(
                "unknown format {other:?} (expected json, csv or text)"
            )),
        }
    }
}

/// Inclusive `A..B` range; a bare `A` means `A..A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanArg(pub RangeInclusive<u32>);

impl FromStr for SpanArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid range bound {t:?} in {s:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(SpanArg(lo..=hi))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub m_range: RangeInclusive<u32>,
    pub n_range: RangeInclusive<u32>,
    /// Field degree -> modulus.
    pub modulus_overrides: BTreeMap<u32, u64>,
    pub caps: Caps,
    pub field_cap: u32,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m_range: 1..=6,
            n_range: 1..=12,
            modulus_overrides: BTreeMap::new(),
            caps: Caps::default(),
            field_cap: DEFAULT_MAX_DEGREE,
            format: None,
            out: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.m_range.is_empty() || self.n_range.is_empty() {
            return Err(CliError::Usage("m and n ranges must be non-empty".into()));
        }
        if *self.m_range.start() == 0 || *self.n_range.start() == 0 {
            return Err(CliError::Usage("m and n must be positive".into()));
        }
        if self.caps.spectrum < 2 || self.caps.ddt < 2 || self.field_cap < 2 {
            return Err(CliError::Usage(
                "caps must admit at least the field of degree 2".into(),
            ));
        }
        Ok(())
    }

    /// The field of the given degree, honoring modulus overrides.
    pub fn field(&self, degree: u32) -> Result<Field, CliError> {
        if degree > self.field_cap {
            return Err(CliError::Core(apnforge::Error::SizeLimit {
                what: "field degree",
                size: degree,
                cap: self.field_cap,
            }));
        }
        let field = match self.modulus_overrides.get(&degree) {
            Some(&modulus) => Field::with_modulus(degree, modulus)?,
            None => Field::with_cap(degree, self.field_cap)?,
        };
        Ok(field)
    }
}

/// Reads a JSON object mapping degree to hex modulus, e.g. `{"4": "19"}`.
pub fn load_modulus_table(path: &Path) -> Result<BTreeMap<u32, u64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_modulus_table(&text)
}

pub fn parse_modulus_table(text: &str) -> Result<BTreeMap<u32, u64>, CliError> {
    let raw: BTreeMap<String, String> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("modulus table: {e}")))?;
    let mut out = BTreeMap::new();
    for (degree, hex) in raw {
        let d: u32 = degree
            .parse()
            .map_err(|_| CliError::Usage(format!("modulus table: bad degree {degree:?}")))?;
        let modulus = parse_hex_u64(&hex)?;
        // reject bad entries up front rather than at first use
        Field::with_modulus(d, modulus)?;
        out.insert(d, modulus);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("1..6".parse::<SpanArg>().unwrap().0, 1..=6);
        assert_eq!("2..=4".parse::<SpanArg>().unwrap().0, 2..=4);
        assert_eq!("3".parse::<SpanArg>().unwrap().0, 3..=3);
        assert!("5..2".parse::<SpanArg>().is_err());
        assert!("a..2".parse::<SpanArg>().is_err());
    }

    #[test]
    fn modulus_table() {
        let t = parse_modulus_table(r#"{"4": "19", "2": "7"}"#).unwrap();
        assert_eq!(t.get(&4), Some(&0x19));
        assert!(parse_modulus_table(r#"{"4": "15"}"#).is_err());
        assert!(parse_modulus_table(r#"{"x": "7"}"#).is_err());
        assert!(parse_modulus_table("[]").is_err());

        let cfg = RunConfig {
            modulus_overrides: t,
            ..RunConfig::default()
        };
        assert_eq!(cfg.field(4).unwrap().modulus(), 0x19);
        assert_eq!(cfg.field(6).unwrap().modulus(), 0x43);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig {
            m_range: 0..=3,
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
        let cfg = RunConfig::default();
        assert!(matches!(cfg.field(26), Err(CliError::Core(_))));
    }
}
