use grm_core::field::Field;
use grm_core::geometry::{AffineMap, Space};
use grm_core::poly::{Degree, EvaluationTable, Monomial, ReducedPoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(q: u32, m: usize) -> Space {
    Space::new(Field::with_order(q).unwrap(), m).unwrap()
}

/// (q, m) with q^m small enough for dense tables in tests.
fn cells() -> impl Strategy<Value = (u32, usize)> {
    prop::sample::select(vec![
        (2u32, 1usize),
        (2, 3),
        (2, 4),
        (3, 1),
        (3, 2),
        (3, 3),
        (4, 1),
        (4, 2),
        (5, 2),
        (7, 1),
        (8, 1),
        (9, 1),
        (9, 2),
    ])
}

fn table_strategy() -> impl Strategy<Value = EvaluationTable> {
    cells().prop_flat_map(|(q, m)| {
        let sp = space(q, m);
        let size = sp.size();
        prop::collection::vec(0..q as u16, size).prop_map(move |v| EvaluationTable::new(&sp, v).unwrap())
    })
}

fn table_pair() -> impl Strategy<Value = (EvaluationTable, EvaluationTable)> {
    cells().prop_flat_map(|(q, m)| {
        let sp = space(q, m);
        let size = sp.size();
        let v = prop::collection::vec(0..q as u16, size);
        (v.clone(), v)
            .prop_map(move |(a, b)| (EvaluationTable::new(&sp, a).unwrap(), EvaluationTable::new(&sp, b).unwrap()))
    })
}

/// Lagrange form: f = Σ_a f(a) Π_i (1 - (x_i - a_i)^(q-1)).
fn lagrange(table: &EvaluationTable) -> ReducedPoly {
    let sp = table.space();
    let q = sp.q();
    let mut acc = ReducedPoly::zero(sp);
    for (idx, &value) in table.values().iter().enumerate() {
        if value == 0 {
            continue;
        }
        let a = sp.coords(idx);
        let mut term = ReducedPoly::constant(sp, value);
        for (axis, &ai) in a.iter().enumerate() {
            let shifted = ReducedPoly::linear(sp, axis, ai).unwrap();
            let mut power = ReducedPoly::constant(sp, 1);
            for _ in 0..q - 1 {
                power = power.mul(&shifted).unwrap();
            }
            let delta = ReducedPoly::constant(sp, 1).sub(&power).unwrap();
            term = term.mul(&delta).unwrap();
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

/// Algebraic normal form degree of a Boolean function via the Möbius transform.
fn boolean_degree(values: &[u16], m: usize) -> Option<u32> {
    let mut anf: Vec<u16> = values.to_vec();
    for bit in 0..m {
        for i in 0..anf.len() {
            if i & (1 << bit) != 0 {
                anf[i] ^= anf[i ^ (1 << bit)];
            }
        }
    }
    anf.iter().enumerate().filter(|(_, &c)| c == 1).map(|(i, _)| i.count_ones()).max()
}

proptest! {
    #[test]
    fn interpolation_roundtrip(t in table_strategy()) {
        let p = ReducedPoly::interpolate(&t);
        prop_assert_eq!(p.to_table(), t.clone());
        prop_assert_eq!(ReducedPoly::interpolate(&p.to_table()), p.clone());
        for (idx, &v) in t.values().iter().enumerate() {
            prop_assert_eq!(p.eval(&t.space().coords(idx)).unwrap(), v);
        }
    }

    #[test]
    fn interpolation_is_a_ring_homomorphism((a, b) in table_pair()) {
        let (pa, pb) = (ReducedPoly::interpolate(&a), ReducedPoly::interpolate(&b));
        prop_assert_eq!(ReducedPoly::interpolate(&a.add(&b).unwrap()), pa.add(&pb).unwrap());
        prop_assert_eq!(ReducedPoly::interpolate(&a.mul(&b).unwrap()), pa.mul(&pb).unwrap());
        prop_assert_eq!(ReducedPoly::interpolate(&a.sub(&b).unwrap()), pa.sub(&pb).unwrap());
    }

    #[test]
    fn text_roundtrip(t in table_strategy()) {
        let p = ReducedPoly::interpolate(&t);
        prop_assert_eq!(ReducedPoly::parse(t.space(), &p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(EvaluationTable::parse(t.space(), &t.to_string()).unwrap(), t.clone());
    }

    #[test]
    fn exponents_stay_reduced(t in table_strategy()) {
        let q = t.space().q() as u16;
        let p = ReducedPoly::interpolate(&t);
        for (mono, c) in p.terms() {
            prop_assert!(c != 0);
            prop_assert!(mono.exponents().iter().all(|&e| e < q));
        }
    }

    #[test]
    fn boolean_degree_matches_moebius(v in prop::collection::vec(0u16..2, 16)) {
        let sp = space(2, 4);
        // the Möbius transform indexes x1 as the lowest bit; flip to canonical order
        let canonical: Vec<u16> = (0..16).map(|i: usize| v[i.reverse_bits() >> (usize::BITS - 4)]).collect();
        let t = EvaluationTable::new(&sp, canonical).unwrap();
        let expected = boolean_degree(&v, 4).map_or(Degree::Bottom, Degree::Finite);
        prop_assert_eq!(ReducedPoly::interpolate(&t).degree(), expected);
    }

    #[test]
    fn affine_substitution_preserves_degree_and_weight(t in table_strategy(), seed in any::<u64>()) {
        let sp = t.space().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = AffineMap::random(&sp, &mut rng);
        let p = ReducedPoly::interpolate(&t);
        let image = p.affine_substitute(&tau).unwrap();
        prop_assert_eq!(image.degree(), p.degree());
        prop_assert_eq!(image.to_table().weight(), t.weight());
        prop_assert_eq!(image.to_table(), t.compose(&tau));
    }
}

#[test]
fn interpolation_matches_lagrange_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (q, m) in [(2u32, 3usize), (3, 2), (4, 2), (5, 1), (5, 2), (7, 1), (8, 1), (9, 1)] {
        let sp = space(q, m);
        for _ in 0..5 {
            let poly = ReducedPoly::random(&sp, &mut rng, m as u32 * (q - 1), 0.5);
            let t = poly.to_table();
            assert_eq!(lagrange(&t), poly, "q={q} m={m}");
            assert_eq!(ReducedPoly::interpolate(&t), poly);
        }
    }
}

#[test]
fn exhaustive_roundtrip_small_spaces() {
    for (q, m) in [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let sp = space(q, m);
        let n = sp.size() as u32;
        for code in 0..q.pow(n) {
            let vals: Vec<u16> = (0..n).map(|i| (code / q.pow(i) % q) as u16).collect();
            let t = EvaluationTable::new(&sp, vals).unwrap();
            assert_eq!(ReducedPoly::interpolate(&t).to_table(), t);
        }
    }
}

#[test]
fn monomial_basis_spans_degree_bounded_polynomials() {
    for (q, m) in [(2u32, 3usize), (3, 2), (4, 2)] {
        for r in 0..=m as u32 * (q - 1) {
            let basis = grm_core::poly::monomials_up_to(q, m, r);
            assert!(basis.iter().all(|mono| mono.degree() <= r));
            let all = grm_core::poly::monomials_up_to(q, m, m as u32 * (q - 1));
            assert_eq!(all.len(), (q as usize).pow(m as u32));
            let expected = all.iter().filter(|mono| mono.degree() <= r).count();
            assert_eq!(basis.len(), expected);
            assert!(basis.windows(2).all(|w| w[0] < w[1]));
        }
    }
    assert!(Monomial::one(2) < Monomial::new(vec![1, 0]));
    assert!(Monomial::new(vec![1, 0]) < Monomial::new(vec![0, 1]));
}

#[test]
fn printing_orders_terms_by_degree_then_variable() {
    let sp = space(3, 1);
    let t = EvaluationTable::parse(&sp, "1,0,0").unwrap();
    assert_eq!(ReducedPoly::interpolate(&t).to_string(), "1 + 2*x1^2");
    let sp = space(3, 3);
    let p = ReducedPoly::parse(&sp, "2*x1^2*x3 + x2 + 1").unwrap();
    assert_eq!(p.to_string(), "1 + x2 + 2*x1^2*x3");
    assert_eq!(ReducedPoly::zero(&sp).to_string(), "0");
}

#[test]
fn factorization_identities_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [2u32, 3, 4, 5, 7] {
        for m in 1..=3usize {
            let sp = space(q, m);
            for _ in 0..40 {
                let r = ReducedPoly::random(&sp, &mut rng, m as u32 * (q - 1), 0.5);
                for axis in 0..m {
                    for a in 0..q as u16 {
                        let lin = ReducedPoly::linear(&sp, axis, a).unwrap();
                        let p = lin.mul(&r).unwrap();
                        let quot = p.divide_linear(axis, a).unwrap();
                        assert_eq!(lin.mul(&quot).unwrap(), p);

                        let vanishing_everywhere = r.to_table().values().iter().all(|&v| v == 0);
                        if !vanishing_everywhere {
                            // a polynomial that is nonzero somewhere on x_axis = a cannot be divided
                            let on_plane = sp
                                .hyperplane_points(&grm_core::Hyperplane::new(&sp, unit(m, axis), a).unwrap())
                                .iter()
                                .any(|&i| r.to_table().values()[i] != 0);
                            if on_plane {
                                assert!(r.divide_linear(axis, a).is_err());
                            }
                        }
                    }
                }
            }
        }
    }
}

fn unit(m: usize, axis: usize) -> Vec<u16> {
    let mut v = vec![0; m];
    v[axis] = 1;
    v
}

#[test]
fn complement_factor_rejects_support_off_the_hyperplane() {
    let sp = space(3, 2);
    let p = ReducedPoly::parse(&sp, "x1").unwrap();
    assert!(p.complement_factor(0, 0).is_err());
    let indicator = ReducedPoly::hyperplane_indicator(&sp, 0, 2).unwrap();
    let sub = space(3, 1);
    let inner = ReducedPoly::parse(&sub, "1 + x1^2").unwrap();
    let p = indicator.mul(&inner.insert_variable(0).unwrap()).unwrap();
    assert_eq!(p.complement_factor(0, 2).unwrap(), inner);
    // supported on x1 = 2 only
    for (i, &v) in p.to_table().values().iter().enumerate() {
        if v != 0 {
            assert_eq!(sp.coords(i)[0], 2);
        }
    }
}
