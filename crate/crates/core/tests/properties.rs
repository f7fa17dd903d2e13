mod common;

use cm_forms::classification::{
    block_structures, factorization_bound_check, irrep_dims_upto, weyl_dim, RootSystem, RootType,
};
use cm_forms::io::{parse_poly, surface_from_json, surface_to_json};
use cm_forms::{NormalFormSurface, Polynomial64, Rational};
use common::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn polynomial_ring_laws(t in poly_triple()) {
        ring_laws(&t)?;
    }

    #[test]
    fn differentiation_and_grading(t in poly_triple()) {
        calculus_laws(&t)?;
    }

    #[test]
    fn conjugation(t in poly_triple()) {
        conjugation_laws(&t)?;
    }

    #[test]
    fn trace_operator(case in (poly_triple(), gaussian(), 0usize..64)) {
        trace_laws(&case)?;
    }

    #[test]
    fn infinitesimal_action_is_a_derivation(case in (lie_element(), (poly(3), poly(3)))) {
        derivation_law(&case)?;
    }

    #[test]
    fn kernel_vectors(case in matrix_case()) {
        kernel_laws(&case)?;
    }

    #[test]
    fn invariance_survives_conjugation(case in (0usize..INVARIANT_CASES.len(), prop::collection::vec(gaussian(), 6))) {
        conjugate_invariance(&case)?;
    }

    #[test]
    fn emitted_forms(case in emitted_case()) {
        emitted_form_laws(&case)?;
    }

    #[test]
    fn text_round_trip(p in (1usize..=3).prop_flat_map(poly)) {
        let text = p.to_text();
        let back: Polynomial = parse_poly(&text, p.n()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn document_round_trip(p in (1usize..=3).prop_flat_map(poly)) {
        let w = p.max_weight().unwrap_or(0);
        let s = NormalFormSurface::new(p.n(), w, p).unwrap();
        let back: NormalFormSurface<Rational> = surface_from_json(&surface_to_json(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn machine_word_scalars_agree(t in poly_triple()) {
        // the same ring operations over Ratio<i64>, compared through text
        let (a, b, _) = &t;
        let n = a.n();
        let a64: Polynomial64 = parse_poly(&a.to_text(), n).unwrap();
        let b64: Polynomial64 = parse_poly(&b.to_text(), n).unwrap();
        prop_assert_eq!((&a64 * &b64).to_text(), (a * b).to_text());
    }

    #[test]
    fn sl2_dimensions(m in 0i64..=40) {
        let a1 = RootSystem::new(RootType::A, 1).unwrap();
        prop_assert_eq!(weyl_dim(&a1, &[m]).unwrap().to_i64().unwrap(), m + 1);
    }

    #[test]
    fn weyl_dimension_monotone(labels in prop::collection::vec(0i64..=3, 3), bump in 0usize..3, ty in 0usize..4) {
        let t = [RootType::A, RootType::B, RootType::C, RootType::D][ty];
        let rs = RootSystem::new(t, 3).unwrap();
        let d = weyl_dim(&rs, &labels).unwrap();
        let mut up = labels.clone();
        up[bump] += 1;
        prop_assert!(weyl_dim(&rs, &up).unwrap() > d);
        let bound = d.to_u64().unwrap();
        prop_assert!(irrep_dims_upto(&rs, bound).contains(&bound));
    }

    #[test]
    fn block_structures_monotone(n in 1usize..=7, d in 0usize..=50) {
        let big = block_structures(n, d);
        let small = block_structures(n, d.saturating_sub(3));
        prop_assert!(big.iter().all(|p| small.contains(p)));
        for p in &big {
            prop_assert_eq!(p.iter().sum::<usize>(), n);
            prop_assert!(p.iter().map(|x| x * x).sum::<usize>() >= d);
        }
    }
}

type Polynomial = cm_forms::Polynomial;

/// Two-factor check `a² + b² ≤ n² − 2n` applied recursively to the larger
/// factor, as an independent route to the same bound.
fn two_factor_inductive(n: u64) -> bool {
    fn max_sum(n: u64) -> u64 {
        let mut best = n * n;
        for a in 2..n {
            if n.is_multiple_of(a) && a * a <= n {
                let b = n / a;
                best = best.max(a * a + max_sum(b)).max(b * b + max_sum(a));
            }
        }
        best
    }
    (4..=n).all(|m| {
        let mut worst = 0;
        for a in 2..m {
            if m.is_multiple_of(a) {
                worst = worst.max(a * a + max_sum(m / a));
            }
        }
        worst <= m * m - 2 * m
    })
}

#[test]
fn factorization_bound_matches_brute_force() {
    for n in 4..=60 {
        assert_eq!(factorization_bound_check(n), two_factor_inductive(n), "n = {n}");
    }
    assert!(factorization_bound_check(60));
}

#[test]
fn first_fundamental_weight_is_the_defining_representation() {
    let first = |t, r| {
        let rs = RootSystem::new(t, r).unwrap();
        let mut w = vec![0; r];
        w[0] = 1;
        weyl_dim(&rs, &w).unwrap().to_u64().unwrap()
    };
    for k in 2..=8u64 {
        assert_eq!(first(RootType::A, (k - 1) as usize), k);
    }
    for k in 1..=6u64 {
        assert_eq!(first(RootType::C, k as usize), 2 * k);
    }
    for k in 2..=6u64 {
        assert_eq!(first(RootType::B, k as usize), 2 * k + 1);
    }
    for k in 3..=6u64 {
        assert_eq!(first(RootType::D, k as usize), 2 * k);
    }
}

#[test]
fn positive_root_counts() {
    for r in 1..=6 {
        for t in [RootType::A, RootType::B, RootType::C] {
            let rs = RootSystem::new(t, r).unwrap();
            assert_eq!(rs.positive_roots.len(), rs.expected_positive_root_count());
        }
        if r >= 2 {
            let rs = RootSystem::new(RootType::D, r).unwrap();
            assert_eq!(rs.positive_roots.len(), rs.expected_positive_root_count());
        }
    }
}
