//! Differential spectra of the hexanomial.
//!
//! For each nonzero `a` the derivative `x -> F(x) + F(x + a)` is evaluated over
//! the whole field and its fiber sizes `N(a, b)` are histogrammed. A second,
//! independent route counts the kernel of the linearized `G_a`; since the
//! derivative is an affine image of `G_a`, every nonempty fiber must have
//! exactly `|Ker G_a|` elements. [`verify`] runs both and fails loudly if they
//! disagree.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::Element;
use crate::hexanomial::BcParams;

pub const DEFAULT_SPECTRUM_CAP: u32 = 16;
pub const DEFAULT_DDT_CAP: u32 = 12;

/// Largest field degrees (`2m`) accepted by the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub spectrum: u32,
    pub ddt: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            spectrum: DEFAULT_SPECTRUM_CAP,
            ddt: DEFAULT_DDT_CAP,
        }
    }
}

fn check_cap(p: &BcParams, cap: u32, what: &'static str) -> Result<()> {
    let degree = p.field().degree();
    if degree > cap {
        return Err(Error::SizeLimit {
            what,
            size: degree,
            cap,
        });
    }
    Ok(())
}

/// Fiber size -> number of `b` with that many preimages.
pub type FiberHistogram = BTreeMap<u64, u64>;

/// `F(x)` for every `x`, indexed by the bits of `x`.
pub fn value_table(p: &BcParams) -> Vec<Element> {
    let size = p.field().size() as u32;
    (0..size)
        .into_par_iter()
        .map(|x| p.eval_f(Element::from_bits(x)))
        .collect()
}

fn histogram(counts: &[u32]) -> FiberHistogram {
    let mut h = FiberHistogram::new();
    for &c in counts {
        *h.entry(c as u64).or_default() += 1;
    }
    h
}

/// Per-direction fiber histograms of the derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSpectrum {
    pub field_size: u64,
    /// One entry per nonzero `a`, in canonical order.
    pub histograms: Vec<(Element, FiberHistogram)>,
    pub max_count: u64,
}

/// Directions grouped by the set of fiber sizes they attain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub groups: Vec<FiberGroup>,
    pub max_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberGroup {
    pub fiber_sizes: Vec<u64>,
    pub directions: u64,
}

impl DerivativeSpectrum {
    /// Every nonempty fiber of every derivative has exactly `t` elements.
    pub fn is_t_to_one(&self, t: u64) -> bool {
        self.histograms
            .iter()
            .all(|(_, h)| h.keys().all(|&size| size == 0 || size == t))
    }

    pub fn all_even(&self) -> bool {
        self.histograms
            .iter()
            .all(|(_, h)| h.keys().all(|size| size % 2 == 0))
    }

    /// `sum_t t * hist[t]` equals the field size for every direction.
    pub fn fibers_partition_field(&self) -> bool {
        self.histograms
            .iter()
            .all(|(_, h)| h.iter().map(|(t, k)| t * k).sum::<u64>() == self.field_size)
    }

    pub fn summary(&self) -> SpectrumSummary {
        let mut groups: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (_, h) in &self.histograms {
            *groups.entry(h.keys().copied().collect()).or_default() += 1;
        }
        SpectrumSummary {
            groups: groups
                .into_iter()
                .map(|(fiber_sizes, directions)| FiberGroup {
                    fiber_sizes,
                    directions,
                })
                .collect(),
            max_count: self.max_count,
        }
    }
}

/// Histograms the fibers of `x -> F(x) + F(x + a)` for every nonzero `a`.
pub fn spectrum(p: &BcParams, caps: Caps) -> Result<DerivativeSpectrum> {
    check_cap(p, caps.spectrum, "spectrum field degree")?;
    let table = value_table(p);
    let size = table.len() as u32;
    let histograms: Vec<(Element, FiberHistogram)> = (1..size)
        .into_par_iter()
        .map(|a| {
            let mut counts = vec![0u32; size as usize];
            for x in 0..size {
                let b = table[x as usize] + table[(x ^ a) as usize];
                counts[b.bits() as usize] += 1;
            }
            (Element::from_bits(a), histogram(&counts))
        })
        .collect();
    let max_count = histograms
        .iter()
        .filter_map(|(_, h)| h.keys().next_back().copied())
        .max()
        .unwrap_or(0);
    Ok(DerivativeSpectrum {
        field_size: size as u64,
        histograms,
        max_count,
    })
}

/// `|Ker G_a|` for every nonzero `a`, by exhaustive scan of the linearized form.
pub fn kernel_sizes(p: &BcParams, caps: Caps) -> Result<Vec<(Element, u64)>> {
    check_cap(p, caps.spectrum, "spectrum field degree")?;
    let size = p.field().size() as u32;
    (1..size)
        .into_par_iter()
        .map(|a| {
            let a = Element::from_bits(a);
            Ok((a, p.kernel_ga(a)?.len() as u64))
        })
        .collect()
}

/// Both verification routes, already checked against each other.
#[derive(Clone, Debug)]
pub struct Verification {
    pub spectrum: DerivativeSpectrum,
    pub kernel_sizes: Vec<(Element, u64)>,
}

impl Verification {
    pub fn is_t_to_one(&self, t: u64) -> bool {
        let by_kernel = self.kernel_sizes.iter().all(|&(_, k)| k == t);
        debug_assert_eq!(by_kernel, self.spectrum.is_t_to_one(t));
        by_kernel
    }

    /// Distinct kernel sizes over all directions.
    pub fn distinct_kernel_sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.kernel_sizes.iter().map(|&(_, k)| k).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Runs the fiber histogram and the kernel scan and requires that, for every
/// direction, the nonzero fiber sizes are exactly `{|Ker G_a|}`.
pub fn verify(p: &BcParams, caps: Caps) -> Result<Verification> {
    let spectrum = spectrum(p, caps)?;
    let kernel_sizes = kernel_sizes(p, caps)?;
    for ((a, h), &(ka, k)) in spectrum.histograms.iter().zip(&kernel_sizes) {
        debug_assert_eq!(*a, ka);
        let nonzero: Vec<u64> = h.keys().copied().filter(|&t| t != 0).collect();
        if nonzero != [k] {
            return Err(Error::RouteMismatch(format!(
                "direction {}: fiber sizes {:?}, kernel size {}",
                p.field().format_element(*a),
                nonzero,
                k
            )));
        }
    }
    Ok(Verification {
        spectrum,
        kernel_sizes,
    })
}

/// Whether every nonzero derivative is `t`-to-one; `t` must be a power of two.
pub fn is_t_to_one(p: &BcParams, t: u64, caps: Caps) -> Result<bool> {
    if !t.is_power_of_two() {
        return invalid(format!("{t} is not a power of two"));
    }
    Ok(verify(p, caps)?.is_t_to_one(t))
}

pub fn is_apn(p: &BcParams, caps: Caps) -> Result<bool> {
    is_t_to_one(p, 2, caps)
}

/// Difference distribution table, `table[a][b] = N(a, b)`, row-major.
///
/// Row `a = 0` holds `N(0, 0) = 2^w` and zeros elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ddt {
    size: usize,
    counts: Vec<u32>,
}

impl Ddt {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: Element, b: Element) -> u32 {
        self.counts[a.bits() as usize * self.size + b.bits() as usize]
    }

    pub fn row(&self, a: Element) -> &[u32] {
        let start = a.bits() as usize * self.size;
        &self.counts[start..start + self.size]
    }

    /// Maximum entry over the rows `a != 0`.
    pub fn differential_uniformity(&self) -> u32 {
        self.counts[self.size..].iter().copied().max().unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for row in self.counts.chunks(self.size) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub fn ddt(p: &BcParams, caps: Caps) -> Result<Ddt> {
    check_cap(p, caps.ddt, "ddt field degree")?;
    let table = value_table(p);
    let size = table.len();
    let mut counts = vec![0u32; size * size];
    counts
        .par_chunks_mut(size)
        .enumerate()
        .for_each(|(a, row)| {
            for x in 0..size {
                let b = table[x] + table[x ^ a];
                row[b.bits() as usize] += 1;
            }
        });
    Ok(Ddt { size, counts })
}
