//! The experiment entry points. Each returns an [`Outcome`] holding the exit
//! status and the rendered report; writing it out is left to the caller.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use apnforge::compat::CompatRow;
use apnforge::diffspec::{self, SpectrumSummary};
use apnforge::{
    closed_form_compatible, BcParams, BcParamsRecord, CompatContext, Element, FieldSpec,
    WitnessCase,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Exit};

pub const SCHEMA: u32 = 1;

/// Run metadata; carries nothing that varies between identical runs.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
}

impl Meta {
    fn current() -> Self {
        Meta {
            tool: "apnforge",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub body: String,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

fn pass_or_fail(ok: bool) -> Exit {
    if ok {
        Exit::Ok
    } else {
        Exit::CheckFailed
    }
}

#[derive(Serialize)]
struct SweepReport {
    schema: u32,
    meta: Meta,
    command: &'static str,
    all_agree: bool,
    rows: Vec<CompatRow>,
}

/// One compatibility row per `(m, n)`; fails unless brute force and the closed
/// form agree everywhere.
pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for m in cfg.m_range.clone() {
        let field = cfg.field(2 * m)?;
        // a full count is a second scan of the field; keep it to desk-scale fields
        let count_all = 2 * m <= cfg.caps.spectrum;
        for n in cfg.n_range.clone() {
            let ctx = CompatContext::with_field(field.clone(), m, n)?;
            rows.push(ctx.report(count_all));
        }
    }
    let all_agree = rows.iter().all(|r| r.agrees());
    let rows: Vec<CompatRow> = rows.iter().map(|r| r.to_row()).collect();
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Csv => csv_rows(&rows),
        Format::Json => json(&SweepReport {
            schema: SCHEMA,
            meta: Meta::current(),
            command: "sweep",
            all_agree,
            rows,
        }),
        Format::Text => return Err(CliError::Usage("sweep supports json or csv".into())),
    };
    Ok(Outcome {
        exit: pass_or_fail(all_agree),
        body,
    })
}

#[derive(Clone, Debug, Default)]
pub struct VerifyArgs {
    pub m: u32,
    pub n: u32,
    pub c: Option<String>,
    pub d: Option<String>,
    pub ddt_out: Option<PathBuf>,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CSource {
    /// First compatible `c` in canonical order.
    Search,
    /// `m | n`, where every `c` works; the least element is used.
    AnyC,
    Given,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyStatus {
    Ok,
    Failed,
    /// No compatible `c` exists and `m` does not divide `n`.
    CompatExcluded,
}

#[derive(Serialize)]
struct Verdicts {
    is_apn: bool,
    is_2k_to_one: bool,
    k: u32,
}

#[derive(Serialize)]
struct SpotCheck {
    seed: u64,
    samples: usize,
    mismatches: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    meta: Meta,
    command: &'static str,
    m: u32,
    n: u32,
    status: VerifyStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_source: Option<CSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<BcParamsRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_fiber_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_a_histogram_summary: Option<SpectrumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_sizes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdicts: Option<Verdicts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spot_check: Option<SpotCheck>,
}

/// Builds the hexanomial, runs both derivative routes and checks that every
/// nonzero derivative is `2^gcd(m, n)`-to-one.
pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let (m, n) = (args.m, args.n);
    if m == 0 || n == 0 {
        return Err(CliError::Usage("m and n must be positive".into()));
    }
    let field = cfg.field(2 * m)?;
    let (c, source) = match &args.c {
        Some(hex) => (field.parse_element(hex)?, CSource::Given),
        None if closed_form_compatible(m, n) => {
            let ctx = CompatContext::with_field(field.clone(), m, n)?;
            match ctx.find_c() {
                Some(c) => (c, CSource::Search),
                None => {
                    return Err(CliError::Core(apnforge::Error::RouteMismatch(format!(
                    "no compatible c found for ({m}, {n}) although the closed form says one exists"
                ))))
                }
            }
        }
        None if n % m == 0 => (Element::ZERO, CSource::AnyC),
        None => {
            let report = VerifyReport {
                schema: SCHEMA,
                meta: Meta::current(),
                command: "verify",
                m,
                n,
                status: VerifyStatus::CompatExcluded,
                c_source: None,
                params: None,
                expected_fiber_size: None,
                per_a_histogram_summary: None,
                kernel_sizes: None,
                verdicts: None,
                spot_check: None,
            };
            return Ok(Outcome {
                exit: Exit::CheckFailed,
                body: json(&report),
            });
        }
    };
    let params = match &args.d {
        Some(hex) => {
            let d = field.parse_element(hex)?;
            BcParams::new(field.clone(), m, n, c, d)?
        }
        None => BcParams::with_default_d(field.clone(), m, n, c)?,
    };

    let verification = diffspec::verify(&params, cfg.caps)?;
    let k = m.gcd(&n);
    let t = 1u64 << k;
    let is_2k_to_one = verification.is_t_to_one(t);
    let is_apn = verification.is_t_to_one(2);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let size = field.size() as u32;
    let mismatches = (0..args.samples)
        .filter(|_| {
            let a = Element::from_bits(rng.gen_range(1..size));
            let x = Element::from_bits(rng.gen_range(0..size));
            params.eval_ga(a, x).ok() != params.eval_ga_linear(a, x).ok()
        })
        .count();

    if let Some(path) = &args.ddt_out {
        let table = diffspec::ddt(&params, cfg.caps)?;
        let file = File::create(path).map_err(|e| CliError::io(path.clone(), e))?;
        table
            .write_csv(BufWriter::new(file))
            .map_err(|e| CliError::io(path.clone(), e))?;
    }

    let ok = is_2k_to_one && mismatches == 0;
    let report = VerifyReport {
        schema: SCHEMA,
        meta: Meta::current(),
        command: "verify",
        m,
        n,
        status: if ok {
            VerifyStatus::Ok
        } else {
            VerifyStatus::Failed
        },
        c_source: Some(source),
        params: Some(params.to_record()),
        expected_fiber_size: Some(t),
        per_a_histogram_summary: Some(verification.spectrum.summary()),
        kernel_sizes: Some(verification.distinct_kernel_sizes()),
        verdicts: Some(Verdicts {
            is_apn,
            is_2k_to_one,
            k,
        }),
        spot_check: Some(SpotCheck {
            seed: cfg.seed,
            samples: args.samples,
            mismatches,
        }),
    };
    Ok(Outcome {
        exit: pass_or_fail(ok),
        body: json(&report),
    })
}

#[derive(Serialize)]
struct WitnessRow {
    role: &'static str,
    element: String,
    g_value: String,
    vanishes: bool,
    in_subfield_r: bool,
    on_unit_circle: bool,
}

#[derive(Serialize)]
struct WitnessReport {
    schema: u32,
    meta: Meta,
    command: &'static str,
    m: u32,
    n: u32,
    y: String,
    primitive: bool,
    case: WitnessCase,
    rows: Vec<WitnessRow>,
}

/// Prints the explicit elements of `X_y ∩ Z` for one `y` and rechecks each.
pub fn witness(cfg: &RunConfig, m: u32, n: u32, y_hex: &str) -> Result<Outcome, CliError> {
    cfg.validate()?;
    if m == 0 || n == 0 {
        return Err(CliError::Usage("m and n must be positive".into()));
    }
    let field = cfg.field(2 * m)?;
    let ctx = CompatContext::with_field(field.clone(), m, n)?;
    let y = field
        .parse_element(y_hex)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let w = ctx
        .witnesses(y)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows = Vec::new();
    let labelled =
        w.c0.map(|e| ("c0", e))
            .into_iter()
            .chain([("y", w.y)])
            .chain(w.y_neg_s.map(|e| ("y^-s", e)));
    for (role, e) in labelled {
        let g = ctx.eval_gpoly(e, y);
        rows.push(WitnessRow {
            role,
            element: field.format_element(e),
            g_value: field.format_element(g),
            vanishes: g.is_zero(),
            in_subfield_r: field.in_subfield(e, m)?,
            on_unit_circle: ctx.on_unit_circle(e),
        });
    }
    let ok = rows.iter().all(|r| r.vanishes);
    let report = WitnessReport {
        schema: SCHEMA,
        meta: Meta::current(),
        command: "witness",
        m,
        n,
        y: field.format_element(y),
        primitive: field.has_order(y, ctx.r() + 1),
        case: w.case,
        rows,
    };
    let body = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => json(&report),
        Format::Csv => csv_rows(&report.rows),
        Format::Text => render_witness_text(&report),
    };
    Ok(Outcome {
        exit: pass_or_fail(ok),
        body,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_witness_text(r: &WitnessReport) -> String {
    let case = match r.case {
        WitnessCase::Generic => "y^(s-1) != 1, y^(s+1) != 1",
        WitnessCase::InverseFrobenius => "y^(s-1) != 1, y^(s+1) = 1",
        WitnessCase::FixedFrobenius => "y^(s-1) = 1",
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "m={} n={} y={} primitive: {} case: {}",
        r.m,
        r.n,
        r.y,
        yes_no(r.primitive),
        case
    );
    let _ = writeln!(
        out,
        "{:<6} {:>8} {:>8} {:>10} {:>8} {:>12}",
        "role", "element", "G(.,y)", "vanishes", "in F_r", "on mu_(r+1)"
    );
    for row in &r.rows {
        let _ = writeln!(
            out,
            "{:<6} {:>8} {:>8} {:>10} {:>8} {:>12}",
            row.role,
            row.element,
            row.g_value,
            yes_no(row.vanishes),
            yes_no(row.in_subfield_r),
            yes_no(row.on_unit_circle)
        );
    }
    out
}

#[derive(Serialize)]
struct EmpiricalRow {
    m: u32,
    n: u32,
    three_divides_m: bool,
    predicate: bool,
    exists_c: bool,
    found_c_hex: String,
    modulus_hex: String,
    search_size: u64,
}

#[derive(Serialize)]
struct EmpiricalReport {
    schema: u32,
    meta: Meta,
    command: &'static str,
    all_agree: bool,
    rows: Vec<EmpiricalRow>,
}

/// Compatibility of `(2^m, 2)` for `min_2m <= 2m <= max_2m`.
pub fn bc_empirical(cfg: &RunConfig, min_2m: u32, max_2m: u32) -> Result<Outcome, CliError> {
    cfg.validate()?;
    if max_2m > cfg.field_cap {
        return Err(CliError::Core(apnforge::Error::SizeLimit {
            what: "field degree",
            size: max_2m,
            cap: cfg.field_cap,
        }));
    }
    let lo = min_2m.div_ceil(2).max(1);
    let hi = max_2m / 2;
    if lo > hi {
        return Err(CliError::Usage(format!(
            "no m with {min_2m} <= 2m <= {max_2m}"
        )));
    }
    let mut rows = Vec::new();
    let mut all_agree = true;
    for m in lo..=hi {
        let ctx = CompatContext::with_field(cfg.field(2 * m)?, m, 1)?;
        let rep = ctx.report(false);
        all_agree &= rep.agrees();
        let row = rep.to_row();
        rows.push(EmpiricalRow {
            m,
            n: 1,
            three_divides_m: m % 3 == 0,
            predicate: row.predicate,
            exists_c: row.exists_c,
            found_c_hex: row.found_c_hex,
            modulus_hex: row.modulus_hex,
            search_size: row.search_size,
        });
    }
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Csv => csv_rows(&rows),
        Format::Json => json(&EmpiricalReport {
            schema: SCHEMA,
            meta: Meta::current(),
            command: "bc-empirical",
            all_agree,
            rows,
        }),
        Format::Text => return Err(CliError::Usage("bc-empirical supports json or csv".into())),
    };
    Ok(Outcome {
        exit: pass_or_fail(all_agree),
        body,
    })
}

/// The field realization used for a degree, as JSON.
pub fn field_info(cfg: &RunConfig, w: u32) -> Result<Outcome, CliError> {
    let field = cfg.field(w)?;
    let spec: FieldSpec = field.spec();
    Ok(Outcome {
        exit: Exit::Ok,
        body: json(&spec),
    })
}
