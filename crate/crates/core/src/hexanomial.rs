//! The hexanomial
//!
//! ```text
//! F(x) = x(x^s + x^r + c x^(rs)) + x^s(c^r x^r + d x^(rs)) + x^((s+1)r)
//! ```
//!
//! over GF(r^2) with `r = 2^m`, `s = 2^n`, and its derivative maps
//! `G_a(x) = F(ax) + F(ax + a) + F(a)`.
//!
//! Every power `x^(2^j)` is a Frobenius iterate, so no exponent is ever
//! materialized as an integer.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{parse_hex_u64, Element, Field};

/// One hexanomial instance: `(m, n, c, d)` over `GF(2^(2m))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcParams {
    m: u32,
    n: u32,
    field: Field,
    c: Element,
    d: Element,
}

/// JSON form of [`BcParams`]; elements and modulus are hex strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcParamsRecord {
    pub m: u32,
    pub n: u32,
    pub c: String,
    pub d: String,
    pub modulus: String,
}

/// The least element, in canonical order, that lies outside GF(2^m).
pub fn default_d(field: &Field, m: u32) -> Result<Element> {
    if m == 0 || field.degree() != 2 * m {
        return invalid(format!("field degree {} is not 2*{m}", field.degree()));
    }
    field
        .elements()
        .find(|&x| field.frobenius(x, m as i64) != x)
        .ok_or_else(|| Error::InvalidArgument("no element outside the subfield".into()))
}

impl BcParams {
    pub fn new(field: Field, m: u32, n: u32, c: Element, d: Element) -> Result<Self> {
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
        if !field.contains(c) || !field.contains(d) {
            return invalid("c and d must be elements of the field");
        }
        if field.in_subfield(d, m)? {
            return invalid(format!("d = {} lies in GF(2^{m})", field.format_element(d)));
        }
        Ok(BcParams { m, n, field, c, d })
    }

    /// Same as [`BcParams::new`] with `d` chosen by [`default_d`].
    pub fn with_default_d(field: Field, m: u32, n: u32, c: Element) -> Result<Self> {
        let d = default_d(&field, m)?;
        Self::new(field, m, n, c, d)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn c(&self) -> Element {
        self.c
    }

    pub fn d(&self) -> Element {
        self.d
    }

    /// `k = gcd(m, n)`.
    pub fn k(&self) -> u32 {
        self.m.gcd(&self.n)
    }

    /// `u = 2^k`, the size of the common subfield of GF(r) and GF(s).
    pub fn u(&self) -> u64 {
        1u64 << self.k()
    }

    #[inline]
    fn pow_r(&self, x: Element) -> Element {
        self.field.frobenius(x, self.m as i64)
    }

    #[inline]
    fn pow_s(&self, x: Element) -> Element {
        self.field.frobenius(x, self.n as i64)
    }

    #[inline]
    fn pow_rs(&self, x: Element) -> Element {
        self.field.frobenius(x, self.m as i64 + self.n as i64)
    }

    /// Evaluates `F(x)`.
    pub fn eval_f(&self, x: Element) -> Element {
        let f = &self.field;
        let xr = self.pow_r(x);
        let xs = self.pow_s(x);
        let xrs = self.pow_rs(x);
        let cr = self.pow_r(self.c);
        let first = f.mul(x, xs + xr + f.mul(self.c, xrs));
        let second = f.mul(xs, f.mul(cr, xr) + f.mul(self.d, xrs));
        let third = self.pow_r(f.mul(xs, x));
        first + second + third
    }

    /// `G_a(x) = F(ax) + F(ax + a) + F(a)`, by three evaluations of `F`.
    pub fn eval_ga(&self, a: Element, x: Element) -> Result<Element> {
        if a.is_zero() {
            return invalid("derivative direction a must be nonzero");
        }
        let ax = self.field.mul(a, x);
        Ok(self.eval_f(ax) + self.eval_f(ax + a) + self.eval_f(a))
    }

    /// Precomputes the six coefficients of the linearized form of `G_a`.
    pub fn derivative(&self, a: Element) -> Result<LinearizedDerivative<'_>> {
        if a.is_zero() {
            return invalid("derivative direction a must be nonzero");
        }
        let f = &self.field;
        let ar = self.pow_r(a);
        let as_ = self.pow_s(a);
        let ars = self.pow_rs(a);
        let cr = self.pow_r(self.c);
        let a_s1 = f.mul(as_, a);
        let coeffs = [
            a_s1,
            f.mul(ar, a),
            f.mul(self.c, f.mul(ars, a)),
            f.mul(cr, f.mul(ar, as_)),
            f.mul(self.d, f.mul(as_, ars)),
            self.pow_r(a_s1),
        ];
        Ok(LinearizedDerivative {
            params: self,
            coeffs,
        })
    }

    /// `G_a(x)` through the linearized expansion.
    pub fn eval_ga_linear(&self, a: Element, x: Element) -> Result<Element> {
        Ok(self.derivative(a)?.eval(x))
    }

    /// `{ x : G_a(x) = 0 }` by exhaustive scan.
    pub fn kernel_ga(&self, a: Element) -> Result<BTreeSet<Element>> {
        let g = self.derivative(a)?;
        Ok(self
            .field
            .elements()
            .filter(|&x| g.eval(x).is_zero())
            .collect())
    }

    pub fn to_record(&self) -> BcParamsRecord {
        BcParamsRecord {
            m: self.m,
            n: self.n,
            c: self.field.format_element(self.c),
            d: self.field.format_element(self.d),
            modulus: self.field.modulus_hex(),
        }
    }

    pub fn from_record(rec: &BcParamsRecord) -> Result<Self> {
        let field = Field::with_modulus(2 * rec.m, parse_hex_u64(&rec.modulus)?)?;
        let c = field.parse_element(&rec.c)?;
        let d = field.parse_element(&rec.d)?;
        Self::new(field, rec.m, rec.n, c, d)
    }
}

/// `G_a` in linearized form:
///
/// ```text
/// G_a(x) = a^(s+1)(x + x^s) + a^(r+1)(x + x^r) + c a^(rs+1)(x + x^(rs))
///        + c^r a^(r+s)(x^r + x^s) + d a^(s+rs)(x^s + x^(rs)) + a^((s+1)r)(x^(rs) + x^r)
/// ```
#[derive(Clone, Debug)]
pub struct LinearizedDerivative<'p> {
    params: &'p BcParams,
    coeffs: [Element; 6],
}

impl LinearizedDerivative<'_> {
    pub fn eval(&self, x: Element) -> Element {
        let p = self.params;
        let f = &p.field;
        let xr = p.pow_r(x);
        let xs = p.pow_s(x);
        let xrs = p.pow_rs(x);
        let [k0, k1, k2, k3, k4, k5] = self.coeffs;
        f.mul(k0, x + xs)
            + f.mul(k1, x + xr)
            + f.mul(k2, x + xrs)
            + f.mul(k3, xr + xs)
            + f.mul(k4, xs + xrs)
            + f.mul(k5, xrs + xr)
    }
}
