//! Polynomials over GF(2) packed into machine words (bit i is the coefficient of X^i),
//! plus the small amount of integer arithmetic the field code needs.

/// Degree of a nonzero packed polynomial.
pub fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product of two packed polynomials.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let a = a as u128;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem(a: u128, m: u64) -> u64 {
    let dm = degree(m).expect("modulus must be nonzero");
    let m = m as u128;
    let mut a = a;
    while a != 0 {
        let da = 127 - a.leading_zeros();
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a as u64
}

/// Irreducibility over GF(2) by trial division against every polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible(p: u64) -> bool {
    let Some(deg) = degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let half = deg / 2;
    for divisor in 2u64..(1u64 << (half + 1)) {
        if rem(p as u128, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clmul_small() {
        // (X+1)^2 = X^2+1
        assert_eq!(clmul(0b11, 0b11), 0b101);
        assert_eq!(clmul(0, 0b1011), 0);
    }

    #[test]
    fn irreducible_low_degrees() {
        let deg2: Vec<u64> = (4u64..8).filter(|&p| is_irreducible(p)).collect();
        assert_eq!(deg2, vec![0b111]);
        let deg3: Vec<u64> = (8u64..16).filter(|&p| is_irreducible(p)).collect();
        assert_eq!(deg3, vec![0b1011, 0b1101]);
        // X and X+1 are both irreducible of degree 1
        assert!(is_irreducible(0b10));
        assert!(is_irreducible(0b11));
        assert!(!is_irreducible(1));
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
        assert_eq!(prime_factors((1 << 24) - 1), vec![3, 5, 7, 13, 17, 241]);
        assert_eq!(prime_factors(65), vec![5, 13]);
    }
}
