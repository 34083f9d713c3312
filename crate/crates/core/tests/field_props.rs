use grm_core::field::{Field, FieldSpec};
use proptest::prelude::*;

/// Schoolbook product of two base-p digit vectors, reduced by a monic modulus.
fn poly_mul_mod(a: u32, b: u32, spec: &FieldSpec) -> u32 {
    let (p, n) = (spec.p, spec.n as usize);
    let digits = |mut x: u32| {
        (0..n)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect::<Vec<u32>>()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * n];
    for i in 0..n {
        for j in 0..n {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let lead = prod[k];
        if lead == 0 {
            continue;
        }
        for (i, &c) in spec.modulus.iter().enumerate() {
            let idx = k - n + i;
            prod[idx] = (prod[idx] + p * p - lead * c % p) % p;
        }
    }
    prod[..n].iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn digit_add(a: u32, b: u32, p: u32, n: u32) -> u32 {
    let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..n {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
    }
    out
}

const SMALL: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[test]
fn tables_agree_with_polynomial_arithmetic() {
    for q in [4u32, 8, 9, 16, 25, 27] {
        let f = Field::with_order(q).unwrap();
        let spec = f.spec().clone();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b) as u32, poly_mul_mod(a as u32, b as u32, &spec), "q={q} {a}*{b}");
                assert_eq!(f.add(a, b) as u32, digit_add(a as u32, b as u32, spec.p, spec.n), "q={q} {a}+{b}");
            }
        }
    }
}

#[test]
fn prime_fields_are_integers_mod_p() {
    for p in [2u32, 3, 5, 7, 11, 13] {
        let f = Field::with_order(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                assert_eq!(f.add(a as u16, b as u16) as u32, (a + b) % p);
                assert_eq!(f.mul(a as u16, b as u16) as u32, (a * b) % p);
            }
        }
    }
}

#[test]
fn field_axioms_exhaustive() {
    for q in SMALL {
        let f = Field::with_order(q).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.sub(a, a), 0);
            if a != 0 {
                let inv = f.inv(a).unwrap();
                assert_eq!(f.mul(a, inv), 1);
                assert_eq!(f.pow(a, (q - 2) as u64), inv);
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if b != 0 {
                    assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
                }
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn frobenius_is_additive_and_fixes_after_n_steps() {
    for q in SMALL.into_iter().chain([16, 25, 27, 32, 49]) {
        let f = Field::with_order(q).unwrap();
        let p = f.p() as u64;
        for a in f.elements() {
            assert_eq!(f.pow(a, q as u64), a);
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for q in SMALL.into_iter().chain([16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256]) {
        let f = Field::with_order(q).unwrap();
        let generator =
            f.nonzero().find(|&a| (1..q as u64 - 1).all(|k| f.pow(a, k) != 1) && f.pow(a, q as u64 - 1) == 1);
        assert!(generator.is_some(), "q={q}");
        // with primitive default moduli the element x itself generates
        if f.n() > 1 {
            assert_eq!(f.order(f.p() as u16).unwrap(), q - 1, "q={q}");
        }
    }
}

#[test]
fn division_by_zero_and_foreign_elements_are_errors() {
    let f = Field::with_order(9).unwrap();
    assert!(f.inv(0).is_err());
    assert!(f.div(3, 0).is_err());
    assert!(f.element(9).is_err());
    let g = Field::with_order(3).unwrap();
    let (a, b) = (f.element(1).unwrap(), g.element(1).unwrap());
    assert!(a.add(&b).is_err());
    assert!(a.mul(&b).is_err());
}

fn larger_fields() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![16u32, 25, 27, 32, 49, 64, 81, 121, 125, 169, 243, 256, 289, 343])
}

proptest! {
    #[test]
    fn random_axioms_in_larger_fields(q in larger_fields(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let f = Field::with_order(q).unwrap();
        let (a, b, c) = ((x % q) as u16, (y % q) as u16, (z % q) as u16);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.mul(a, b) as u32, poly_mul_mod(a as u32, b as u32, f.spec()));
    }

    #[test]
    fn spec_text_roundtrip(q in larger_fields()) {
        let spec = FieldSpec::for_order(q).unwrap();
        let parsed: FieldSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(parsed, spec);
    }
}
