//! Compatibility of a pair `(r, s) = (2^m, 2^n)`.
//!
//! A constant `c` in GF(r^2) is compatible when
//! `G(c, y) = y^(s+1) + c y^s + c^r y + 1` has no root `y` on the unit circle
//! `mu_(r+1)`. The pair is compatible when such a `c` exists, which happens
//! exactly when `m > 1` and `n/m` is not an odd integer.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{format_modulus, Element, Field};

/// Closed-form compatibility criterion: `m > 1` and `n/m` is not an odd integer.
pub fn closed_form_compatible(m: u32, n: u32) -> bool {
    if m == 0 {
        return false;
    }
    let odd_multiple = n.is_multiple_of(m) && (n / m) % 2 == 1;
    m > 1 && !odd_multiple
}

/// Both sides of the divisibility criterion: whether `2^m + 1` divides
/// `2^n + 1`, and whether `n` is an odd multiple of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityCheck {
    pub divides: bool,
    pub odd_multiple: bool,
}

impl DivisibilityCheck {
    pub fn agrees(&self) -> bool {
        self.divides == self.odd_multiple
    }
}

/// Exact integer check for `1 <= m, n <= 126`.
pub fn divisibility_check(m: u32, n: u32) -> Result<DivisibilityCheck> {
    if m == 0 || n == 0 || m > 126 || n > 126 {
        return invalid(format!(
            "divisibility check needs 1 <= m, n <= 126, got ({m}, {n})"
        ));
    }
    let r1 = (1u128 << m) + 1;
    let s1 = (1u128 << n) + 1;
    Ok(DivisibilityCheck {
        divides: s1.is_multiple_of(r1),
        odd_multiple: n.is_multiple_of(m) && (n / m) % 2 == 1,
    })
}

/// Which of the witness constructions applies to a `y != 1` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// `y^(s-1) != 1` and `y^(s+1) != 1`: witnesses `c0`, `y`, `y^-s`.
    Generic,
    /// `y^(s-1) != 1`, `y^(s+1) = 1`: witnesses `c0`, `y`.
    InverseFrobenius,
    /// `y^(s-1) = 1`: witnesses `y`, `y^-s`.
    FixedFrobenius,
}

/// Explicit elements of `X_y ∩ (GF(r) ∪ mu_(r+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witnesses {
    pub case: WitnessCase,
    /// `(y^(s+1) + 1) / (y^s + y)`, present unless `y^s = y`.
    pub c0: Option<Element>,
    pub y: Element,
    /// `y^-s`, present unless `y^(s+1) = 1` (where it equals `y`).
    pub y_neg_s: Option<Element>,
}

impl Witnesses {
    pub fn elements(&self) -> Vec<Element> {
        self.c0
            .into_iter()
            .chain(std::iter::once(self.y))
            .chain(self.y_neg_s)
            .collect()
    }
}

/// One row of a compatibility sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub m: u32,
    pub n: u32,
    pub predicate: bool,
    pub exists_c: bool,
    pub found_c: Option<Element>,
    pub modulus: u64,
    pub search_size: u64,
    /// Observational: how many `c` in the field are compatible, when counted.
    pub compatible_count: Option<u64>,
}

/// Serialized [`CompatReport`] row; column order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatRow {
    pub m: u32,
    pub n: u32,
    pub predicate: bool,
    pub exists_c: bool,
    pub found_c_hex: String,
    pub modulus_hex: String,
    pub search_size: u64,
    pub compatible_count: Option<u64>,
}

impl CompatReport {
    pub fn agrees(&self) -> bool {
        self.predicate == self.exists_c
    }

    pub fn to_row(&self) -> CompatRow {
        let degree = 2 * self.m;
        let width = degree.div_ceil(4) as usize;
        CompatRow {
            m: self.m,
            n: self.n,
            predicate: self.predicate,
            exists_c: self.exists_c,
            found_c_hex: self
                .found_c
                .map(|c| format!("{:0width$x}", c.bits(), width = width))
                .unwrap_or_default(),
            modulus_hex: format_modulus(self.modulus, degree),
            search_size: self.search_size,
            compatible_count: self.compatible_count,
        }
    }
}

/// GF(r^2) together with `mu_(r+1)` and the exponents `m`, `n`.
#[derive(Clone, Debug)]
pub struct CompatContext {
    field: Field,
    m: u32,
    n: u32,
    circle: Vec<Element>,
}

impl CompatContext {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        let field = Field::new(2 * m.max(1))?;
        Self::with_field(field, m, n)
    }

    pub fn with_field(field: Field, m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("m and n must be positive");
        }
        if field.degree() != 2 * m {
            return invalid(format!(
                "field degree {} is not 2m = {}",
                field.degree(),
                2 * m
            ));
        }
        let circle = field.mu((1u64 << m) + 1)?;
        Ok(CompatContext {
            field,
            m,
            n,
            circle,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `r = 2^m`.
    pub fn r(&self) -> u64 {
        1u64 << self.m
    }

    /// `mu_(r+1)` in canonical order.
    pub fn unit_circle(&self) -> &[Element] {
        &self.circle
    }

    pub fn on_unit_circle(&self, y: Element) -> bool {
        self.circle.binary_search(&y).is_ok()
    }

    fn pow_r(&self, x: Element) -> Element {
        self.field.frobenius(x, self.m as i64)
    }

    fn pow_s(&self, x: Element) -> Element {
        self.field.frobenius(x, self.n as i64)
    }

    /// `G(c, y) = y^(s+1) + c y^s + c^r y + 1`.
    pub fn eval_gpoly(&self, c: Element, y: Element) -> Element {
        self.eval_with_cr(c, self.pow_r(c), y)
    }

    #[inline]
    fn eval_with_cr(&self, c: Element, cr: Element, y: Element) -> Element {
        let f = &self.field;
        let ys = self.pow_s(y);
        f.mul(ys, y) + f.mul(c, ys) + f.mul(cr, y) + Element::ONE
    }

    /// True iff `G(c, ·)` has no root on the unit circle.
    pub fn is_compatible_c(&self, c: Element) -> bool {
        let cr = self.pow_r(c);
        self.circle
            .iter()
            .all(|&y| !self.eval_with_cr(c, cr, y).is_zero())
    }

    /// The first compatible `c` in canonical order.
    pub fn find_c(&self) -> Option<Element> {
        let size = self.field.size() as u32;
        (0..size)
            .into_par_iter()
            .map(Element::from_bits)
            .find_first(|&c| self.is_compatible_c(c))
    }

    pub fn compatible_count(&self) -> u64 {
        let size = self.field.size() as u32;
        (0..size)
            .into_par_iter()
            .filter(|&c| self.is_compatible_c(Element::from_bits(c)))
            .count() as u64
    }

    /// Brute-force existence next to the closed-form criterion. Counting every
    /// compatible `c` costs a full scan of the field, so it is optional.
    pub fn report(&self, count_all: bool) -> CompatReport {
        let found_c = self.find_c();
        CompatReport {
            m: self.m,
            n: self.n,
            predicate: closed_form_compatible(self.m, self.n),
            exists_c: found_c.is_some(),
            found_c,
            modulus: self.field.modulus(),
            search_size: self.field.size(),
            compatible_count: count_all.then(|| self.compatible_count()),
        }
    }

    fn require_circle(&self, y: Element) -> Result<()> {
        if self.on_unit_circle(y) {
            Ok(())
        } else {
            invalid(format!(
                "{} is not an ({}+1)-th root of unity",
                self.field.format_element(y),
                self.r()
            ))
        }
    }

    /// `X_y = { a : G(a, y) = 0 }`.
    pub fn x_y(&self, y: Element) -> Result<BTreeSet<Element>> {
        self.require_circle(y)?;
        Ok(self
            .field
            .elements()
            .filter(|&a| self.eval_gpoly(a, y).is_zero())
            .collect())
    }

    /// `X`, the union of every `X_y` over the unit circle.
    pub fn union_x(&self) -> BTreeSet<Element> {
        self.field
            .elements()
            .filter(|&c| !self.is_compatible_c(c))
            .collect()
    }

    /// `GF(r) ∪ mu_(r+1)`.
    pub fn z_set(&self) -> BTreeSet<Element> {
        self.field
            .elements()
            .filter(|&x| self.pow_r(x) == x)
            .chain(self.circle.iter().copied())
            .collect()
    }

    /// The explicit elements of `X_y ∩ Z` for `y != 1` on the unit circle.
    pub fn witnesses(&self, y: Element) -> Result<Witnesses> {
        self.require_circle(y)?;
        if y == Element::ONE {
            return invalid("witnesses are defined for y != 1");
        }
        let f = &self.field;
        let ys = self.pow_s(y);
        let ys1 = f.mul(ys, y);
        let fixed = ys == y;
        let inverse = ys1 == Element::ONE;
        debug_assert!(!(fixed && inverse));
        let c0 = if fixed {
            None
        } else {
            Some(f.div(ys1 + Element::ONE, ys + y)?)
        };
        let y_neg_s = if inverse { None } else { Some(f.inv(ys)?) };
        let case = match (fixed, inverse) {
            (true, _) => WitnessCase::FixedFrobenius,
            (false, true) => WitnessCase::InverseFrobenius,
            (false, false) => WitnessCase::Generic,
        };
        Ok(Witnesses {
            case,
            c0,
            y,
            y_neg_s,
        })
    }

    /// Elements of the unit circle with multiplicative order exactly `r + 1`.
    pub fn primitive_circle_elements(&self) -> Vec<Element> {
        let n = self.r() + 1;
        self.circle
            .iter()
            .copied()
            .filter(|&z| self.field.has_order(z, n))
            .collect()
    }

    /// For nonzero `c`, the root `y = c^((r/2)(r-1))` of `G(c, ·)` on the unit
    /// circle that exists whenever `r + 1` divides `s + 1`.
    pub fn conjugate_root(&self, c: Element) -> Option<Element> {
        if c.is_zero() {
            return None;
        }
        let r = self.r() as u128;
        Some(self.field.pow(c, (r / 2) * (r - 1)))
    }
}
