use std::collections::BTreeSet;

use apnforge::diffspec::{self, Caps};
use apnforge::{
    closed_form_compatible, divisibility_check, BcParams, CompatContext, Element, Field,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn frobenius_respects_field_operations(w in 1u32..=24, a in any::<u32>(), b in any::<u32>(), t in -40i64..40) {
        let f = Field::new(w).unwrap();
        let mask = (f.size() - 1) as u32;
        let (a, b) = (Element::from_bits(a & mask), Element::from_bits(b & mask));
        prop_assert_eq!(f.frobenius(a + b, t), f.frobenius(a, t) + f.frobenius(b, t));
        prop_assert_eq!(f.frobenius(f.mul(a, b), t), f.mul(f.frobenius(a, t), f.frobenius(b, t)));
        prop_assert_eq!(f.frobenius(f.frobenius(a, t), -t), a);
    }

    #[test]
    fn pow_is_a_homomorphism(w in 1u32..=24, a in any::<u32>(), e1 in 0u64..1u64 << 40, e2 in 0u64..1u64 << 40) {
        let f = Field::new(w).unwrap();
        let a = Element::from_bits(a & (f.size() - 1) as u32);
        let lhs = f.pow(a, e1 as u128 + e2 as u128);
        let rhs = f.mul(f.pow(a, e1 as u128), f.pow(a, e2 as u128));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closed_form_matches_divisibility(m in 2u32..=64, n in 1u32..=64) {
        let d = divisibility_check(m, n).unwrap();
        prop_assert!(d.agrees());
        prop_assert_eq!(closed_form_compatible(m, n), !d.divides);
    }

    #[test]
    fn linearized_derivative_is_additive(m in 5u32..=9, n in 1u32..=20, c in any::<u32>(), a in any::<u32>(), x in any::<u32>(), z in any::<u32>()) {
        let field = Field::new(2 * m).unwrap();
        let mask = (field.size() - 1) as u32;
        let a = Element::from_bits((a & mask).max(1));
        let p = BcParams::with_default_d(field, m, n, Element::from_bits(c & mask)).unwrap();
        let g = p.derivative(a).unwrap();
        let (x, z) = (Element::from_bits(x & mask), Element::from_bits(z & mask));
        prop_assert_eq!(g.eval(x + z), g.eval(x) + g.eval(z));
        prop_assert_eq!(g.eval(x), p.eval_ga(a, x).unwrap());
    }
}

fn contexts(max_m: u32, max_n: u32) -> impl Iterator<Item = CompatContext> {
    (1..=max_m).flat_map(move |m| {
        let field = Field::new(2 * m).unwrap();
        (1..=max_n).map(move |n| CompatContext::with_field(field.clone(), m, n).unwrap())
    })
}

#[test]
fn conjugate_root_when_r_plus_one_divides_s_plus_one() {
    let mut applicable = 0;
    for ctx in contexts(5, 15) {
        let r1 = ctx.r() as u128 + 1;
        if !((1u128 << ctx.n()) + 1).is_multiple_of(r1) {
            continue;
        }
        applicable += 1;
        for c in ctx.field().nonzero_elements() {
            let y = ctx.conjugate_root(c).unwrap();
            assert!(ctx.on_unit_circle(y));
            assert!(ctx.eval_gpoly(c, y).is_zero());
        }
    }
    assert!(applicable >= 5);
}

#[test]
fn paired_roots_when_r_plus_one_divides_s_minus_one() {
    let mut applicable = 0;
    for ctx in contexts(5, 16) {
        let r = ctx.r();
        if !((1u128 << ctx.n()) - 1).is_multiple_of(r as u128 + 1) {
            continue;
        }
        applicable += 1;
        let f = ctx.field();
        for &y in ctx.unit_circle() {
            assert_eq!(ctx.x_y(y).unwrap(), ctx.x_y(f.inv(y).unwrap()).unwrap());
        }
        assert!(ctx.union_x().len() as u64 <= r * (1 + r / 2));
    }
    assert!(applicable >= 4);
}

#[test]
fn compatible_c_avoids_every_x_y() {
    for ctx in contexts(4, 8) {
        let union: BTreeSet<Element> = ctx
            .unit_circle()
            .iter()
            .flat_map(|&y| ctx.x_y(y).unwrap())
            .collect();
        for c in ctx.field().elements() {
            assert_eq!(ctx.is_compatible_c(c), !union.contains(&c));
        }
        for &y in ctx.unit_circle() {
            assert!(ctx.x_y(y).unwrap().len() as u64 <= ctx.r());
        }
    }
}

#[test]
fn kernels_are_subfield_subspaces() {
    for (m, n) in [(2u32, 1u32), (2, 2), (3, 3), (4, 2), (3, 1)] {
        let field = Field::new(2 * m).unwrap();
        let p = BcParams::with_default_d(field.clone(), m, n, field.generator()).unwrap();
        let k = p.k();
        let fu: Vec<Element> = field
            .elements()
            .filter(|&x| field.in_subfield(x, k).unwrap())
            .collect();
        for a in field.nonzero_elements() {
            let ker = p.kernel_ga(a).unwrap();
            assert!(fu.iter().all(|x| ker.contains(x)));
            for &x in &ker {
                for &z in &ker {
                    assert!(ker.contains(&(x + z)));
                }
                for &l in &fu {
                    assert!(ker.contains(&field.mul(l, x)));
                }
            }
        }
    }
}

#[test]
fn fibers_are_even_for_incompatible_c() {
    for (m, n) in [(2u32, 1u32), (2, 3), (3, 1), (3, 2)] {
        let ctx = CompatContext::new(m, n).unwrap();
        let bad: Vec<Element> = ctx
            .field()
            .elements()
            .filter(|&c| !ctx.is_compatible_c(c))
            .take(6)
            .collect();
        for c in bad {
            let p = BcParams::with_default_d(ctx.field().clone(), m, n, c).unwrap();
            let v = diffspec::verify(&p, Caps::default()).unwrap();
            assert!(v.spectrum.all_even());
            assert!(v.spectrum.fibers_partition_field());
        }
    }
}

#[test]
fn compatible_c_gives_u_to_one_small() {
    for m in 1..=5u32 {
        for n in 1..=6u32 {
            let ctx = CompatContext::new(m, n).unwrap();
            let u = 1u64 << num_integer::gcd(m, n);
            if let Some(c) = ctx.find_c() {
                let p = BcParams::with_default_d(ctx.field().clone(), m, n, c).unwrap();
                assert!(
                    diffspec::is_t_to_one(&p, u, Caps::default()).unwrap(),
                    "({m},{n})"
                );
            } else {
                // no compatible c only when m | n
                assert_eq!(n % m, 0);
            }
        }
    }
}
