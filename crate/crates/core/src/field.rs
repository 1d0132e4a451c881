//! Arithmetic in GF(2^w) using a polynomial basis.
//!
//! A [`Field`] is immutable once built and cheap to clone. Elements are plain
//! [`Element`] bit-vectors; the hot-path operations on `Field` take them
//! unchecked. [`FieldElement`] pairs a value with its field for callers that
//! want mixed-field operands rejected at runtime.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly;

/// Default upper bound on the extension degree accepted by [`Field::new`].
pub const DEFAULT_MAX_DEGREE: u32 = 24;

/// Hard limit imposed by the `u32` element representation.
pub const MAX_SUPPORTED_DEGREE: u32 = 31;

/// Fields up to this degree get log/exp tables.
const TABLE_MAX_DEGREE: u32 = 16;

/// A field element as a coefficient bit-vector: bit `i` is the coefficient of `X^i`.
///
/// The derived ordering is the canonical element order used for every
/// deterministic search in the crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    pub const fn from_bits(bits: u32) -> Self {
        Element(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Addition does not depend on the modulus.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        Element(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Element {
    fn add_assign(&mut self, rhs: Element) {
        self.0 ^= rhs.0;
    }
}

impl fmt::LowerHex for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Serialized form of a field: degree, modulus and generator as lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub w: u32,
    pub modulus: String,
    pub generator: String,
}

struct LogTables {
    log: Vec<u32>,
    // exp[i] = g^i for 0 <= i < 2 * (2^w - 1)
    exp: Vec<u32>,
}

struct Inner {
    degree: u32,
    modulus: u64,
    generator: Element,
    group_order: u64,
    order_factors: Vec<u64>,
    tables: Option<LogTables>,
}

/// A concrete realization of GF(2^w).
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

fn check_degree(degree: u32, cap: u32) -> Result<()> {
    if degree == 0 {
        return invalid("field degree must be positive");
    }
    let cap = cap.min(MAX_SUPPORTED_DEGREE);
    if degree > cap {
        return Err(Error::SizeLimit {
            what: "field degree",
            size: degree,
            cap,
        });
    }
    Ok(())
}

/// Lexicographically least irreducible polynomial of the given degree with a
/// nonzero constant term.
pub fn least_irreducible(degree: u32) -> u64 {
    let lead = 1u64 << degree;
    (0..lead)
        .map(|low| lead | low)
        .filter(|p| p & 1 == 1)
        .find(|&p| poly::is_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

fn mul_shift(a: u32, b: u32, degree: u32, modulus: u64) -> u32 {
    let top = 1u64 << degree;
    let mut a = a as u64;
    let mut b = b;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc as u32
}

impl Field {
    /// The field of degree `degree` over the least irreducible modulus, with the
    /// default degree cap.
    pub fn new(degree: u32) -> Result<Self> {
        Self::with_cap(degree, DEFAULT_MAX_DEGREE)
    }

    pub fn with_cap(degree: u32, cap: u32) -> Result<Self> {
        check_degree(degree, cap)?;
        Self::build(degree, least_irreducible(degree), None)
    }

    /// Builds the field over an explicit modulus, which must be irreducible of
    /// exactly `degree`.
    pub fn with_modulus(degree: u32, modulus: u64) -> Result<Self> {
        check_degree(degree, MAX_SUPPORTED_DEGREE)?;
        Self::build(degree, modulus, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        check_degree(spec.w, MAX_SUPPORTED_DEGREE)?;
        let modulus = parse_hex_u64(&spec.modulus)?;
        let generator = parse_hex_u64(&spec.generator)?;
        if generator >= 1u64 << spec.w {
            return Err(Error::Parse(spec.generator.clone()));
        }
        Self::build(spec.w, modulus, Some(Element(generator as u32)))
    }

    fn build(degree: u32, modulus: u64, generator: Option<Element>) -> Result<Self> {
        if poly::degree(modulus) != Some(degree) || !poly::is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { modulus, degree });
        }
        let group_order = (1u64 << degree) - 1;
        let order_factors = poly::prime_factors(group_order);
        let mut field = Inner {
            degree,
            modulus,
            generator: Element::ONE,
            group_order,
            order_factors,
            tables: None,
        };
        let probe = Field {
            inner: Arc::new(Inner {
                order_factors: field.order_factors.clone(),
                tables: None,
                ..field
            }),
        };
        let generator = match generator {
            Some(g) => {
                if probe.order_of(g) != Some(group_order) {
                    return invalid(format!(
                        "{:x} does not generate the multiplicative group",
                        g
                    ));
                }
                g
            }
            None => (1..=group_order as u32)
                .map(Element)
                .find(|&g| probe.order_of(g) == Some(group_order))
                .expect("the multiplicative group is cyclic"),
        };
        field.generator = generator;
        if degree <= TABLE_MAX_DEGREE {
            let n = group_order as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; n + 1];
            let mut cur = 1u32;
            for i in 0..n {
                exp[i] = cur;
                exp[i + n] = cur;
                log[cur as usize] = i as u32;
                cur = mul_shift(cur, generator.0, degree, modulus);
            }
            field.tables = Some(LogTables { log, exp });
        }
        Ok(Field {
            inner: Arc::new(field),
        })
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    pub fn generator(&self) -> Element {
        self.inner.generator
    }

    /// Number of elements, `2^w`.
    pub fn size(&self) -> u64 {
        1u64 << self.inner.degree
    }

    /// Order of the multiplicative group, `2^w - 1`.
    pub fn group_order(&self) -> u64 {
        self.inner.group_order
    }

    pub fn contains(&self, x: Element) -> bool {
        (x.0 as u64) < self.size()
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.size()).map(|b| Element(b as u32))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> + Clone {
        (1..self.size()).map(|b| Element(b as u32))
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        let value = Element(bits);
        if !self.contains(value) {
            return invalid(format!("{bits:#x} does not fit in {} bits", self.degree()));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        x + y
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        match &self.inner.tables {
            Some(t) => {
                if x.0 == 0 || y.0 == 0 {
                    Element::ZERO
                } else {
                    let i = t.log[x.0 as usize] as usize + t.log[y.0 as usize] as usize;
                    Element(t.exp[i])
                }
            }
            None => Element(mul_shift(x.0, y.0, self.inner.degree, self.inner.modulus)),
        }
    }

    #[inline]
    pub fn square(&self, x: Element) -> Element {
        self.mul(x, x)
    }

    pub fn inv(&self, x: Element) -> Result<Element> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.inner.tables {
            Some(t) => {
                let n = self.inner.group_order as usize;
                Element(t.exp[(n - t.log[x.0 as usize] as usize) % n])
            }
            None => self.pow(x, (self.inner.group_order - 1) as u128),
        })
    }

    pub fn div(&self, x: Element, y: Element) -> Result<Element> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`, with `0^0 = 1`. The exponent is reduced modulo `2^w - 1` for nonzero `x`.
    pub fn pow(&self, x: Element, e: u128) -> Element {
        if x.is_zero() {
            return if e == 0 { Element::ONE } else { Element::ZERO };
        }
        let order = self.inner.group_order as u128;
        let e = (e % order) as u64;
        if let Some(t) = &self.inner.tables {
            let l = t.log[x.0 as usize] as u128;
            return Element(t.exp[((l * e as u128) % order) as usize]);
        }
        let mut base = x;
        let mut e = e;
        let mut acc = Element::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `x^(2^t)`: the `t`-fold Frobenius. Negative `t` applies the inverse automorphism.
    pub fn frobenius(&self, x: Element, t: i64) -> Element {
        let w = self.inner.degree;
        let t = t.rem_euclid(w as i64) as u32;
        if t == 0 || x.0 <= 1 {
            return x;
        }
        match &self.inner.tables {
            // multiplying the discrete log by 2^t mod 2^w - 1 rotates it within w bits
            Some(tab) => {
                let l = tab.log[x.0 as usize] as u64;
                let mask = self.inner.group_order;
                let rotated = ((l << t) | (l >> (w - t))) & mask;
                Element(tab.exp[rotated as usize])
            }
            None => (0..t).fold(x, |acc, _| self.square(acc)),
        }
    }

    /// Membership in the subfield GF(2^sub), which requires `sub | w`.
    pub fn in_subfield(&self, x: Element, sub: u32) -> Result<bool> {
        if sub == 0 || !self.inner.degree.is_multiple_of(sub) {
            return invalid(format!(
                "subfield degree {sub} does not divide {}",
                self.inner.degree
            ));
        }
        Ok(self.frobenius(x, sub as i64) == x)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, x: Element) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut order = self.inner.group_order;
        for &p in &self.inner.order_factors {
            while order.is_multiple_of(p) && self.pow(x, (order / p) as u128) == Element::ONE {
                order /= p;
            }
        }
        Some(order)
    }

    /// Whether `z` has multiplicative order exactly `n`, checked through the
    /// prime divisors of `n`.
    pub fn has_order(&self, z: Element, n: u64) -> bool {
        if z.is_zero() || n == 0 || self.pow(z, n as u128) != Element::ONE {
            return false;
        }
        poly::prime_factors(n)
            .into_iter()
            .all(|p| self.pow(z, (n / p) as u128) != Element::ONE)
    }

    /// The group of `n`-th roots of unity, sorted in canonical order.
    pub fn mu(&self, n: u64) -> Result<Vec<Element>> {
        let order = self.inner.group_order;
        if n == 0 || !order.is_multiple_of(n) {
            return invalid(format!("{n} does not divide {order}"));
        }
        let step = (order / n) as u128;
        let g = self.inner.generator;
        let mut roots: Vec<Element> = (0..n as u128).map(|i| self.pow(g, step * i)).collect();
        roots.sort_unstable();
        roots.dedup();
        debug_assert_eq!(roots.len() as u64, n);
        Ok(roots)
    }

    /// Lowercase hex, zero-padded to `ceil(w/4)` digits.
    pub fn format_element(&self, x: Element) -> String {
        let width = self.inner.degree.div_ceil(4) as usize;
        format!("{:0width$x}", x.0, width = width)
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let v = parse_hex_u64(s)?;
        if v >= self.size() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Element(v as u32))
    }

    pub fn modulus_hex(&self) -> String {
        format_modulus(self.inner.modulus, self.inner.degree)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            w: self.inner.degree,
            modulus: self.modulus_hex(),
            generator: self.format_element(self.inner.generator),
        }
    }
}

/// Hex form of a degree-`degree` modulus, padded to `ceil((degree+1)/4)` digits.
pub fn format_modulus(modulus: u64, degree: u32) -> String {
    let width = (degree + 1).div_ceil(4) as usize;
    format!("{:0width$x}", modulus, width = width)
}

/// Parses lowercase or uppercase hex, with an optional `0x` prefix.
pub fn parse_hex_u64(s: &str) -> Result<u64> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if t.is_empty() {
        return Err(Error::Parse(s.to_string()));
    }
    u64::from_str_radix(t, 16).map_err(|_| Error::Parse(s.to_string()))
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.degree == other.inner.degree
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("w", &self.inner.degree)
            .field("modulus", &format_args!("{:#x}", self.inner.modulus))
            .field("generator", &format_args!("{:#x}", self.inner.generator.0))
            .finish()
    }
}

/// An element bound to its field. Binary operations reject operands from a
/// different field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Element,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Element {
        self.value
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: Element) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.value + other.value))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.with(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, t: i64) -> FieldElement {
        self.with(self.field.frobenius(self.value, t))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_element(self.value))
    }
}
