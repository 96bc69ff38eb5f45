//! Property tests for the polynomial algebra and the Newton polyhedron
//! invariants.

use proptest::prelude::*;
use restrix::newton::{build_polyhedron, distance, support, SupportSet};
use restrix::polyalg::{parse, LinearChange, Monomial, Polynomial};
use restrix::rat::{rat_int, Rat};

fn arb_polynomial() -> impl Strategy<Value = Polynomial> {
    let term = (
        prop::array::uniform3(0u32..=4),
        -50.0f64..50.0,
    );
    prop::collection::vec(term, 1..20).prop_map(|terms| {
        Polynomial::from_terms(
            3,
            terms
                .into_iter()
                .filter(|(e, c)| e.iter().sum::<u32>() <= 8 && *c != 0.0)
                .map(|(e, c)| Monomial { exponents: e.to_vec(), coefficient: c })
                .collect(),
        )
    })
}

fn arb_dyadic_polynomial() -> impl Strategy<Value = Polynomial> {
    let term = (prop::array::uniform3(0u32..=4), -800i32..800);
    prop::collection::vec(term, 1..20).prop_map(|terms| {
        Polynomial::from_terms(
            3,
            terms
                .into_iter()
                .filter(|(e, c)| e.iter().sum::<u32>() <= 8 && *c != 0)
                .map(|(e, c)| Monomial {
                    exponents: e.to_vec(),
                    coefficient: c as f64 / 16.0,
                })
                .collect(),
        )
    })
}

fn arb_rotation() -> impl Strategy<Value = LinearChange> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(a, b, c)| LinearChange::rotation_zyz(a, b, c))
}

fn arb_support() -> impl Strategy<Value = SupportSet> {
    prop::collection::vec(prop::array::uniform3(0i64..=8), 1..=10)
        .prop_filter_map("origin-only support", |pts| {
            SupportSet::from_points(pts.into_iter().filter(|p| *p != [0, 0, 0])).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_print_round_trip(p in arb_polynomial()) {
        let printed = p.to_string();
        let reparsed = parse(&printed, 3).unwrap();
        prop_assert_eq!(&reparsed, &p, "printed: {}", printed);
    }

    #[test]
    fn compose_evaluates_like_matrix_action(
        p in arb_polynomial(),
        a in arb_rotation(),
        x in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let composed = p.compose_linear(&a).unwrap();
        let lhs = composed.evaluate(&x).unwrap();
        let rhs = p.evaluate(&a.apply(&x)).unwrap();
        let coeff_mass: f64 = p.terms().iter().map(|t| t.coefficient.abs()).sum();
        let scale = 1.0 + coeff_mass + lhs.abs() + rhs.abs();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale,
            "lhs {} rhs {} scale {}", lhs, rhs, scale);
    }

    #[test]
    fn compose_is_associative(
        p in arb_polynomial(),
        a in arb_rotation(),
        b in arb_rotation(),
    ) {
        let two_step = p.compose_linear(&a).unwrap().compose_linear(&b).unwrap();
        let one_step = p.compose_linear(&a.compose(&b)).unwrap();
        let tol = 1e-10 * (1.0 + p.terms().iter().map(|t| t.coefficient.abs()).sum::<f64>());
        for t in one_step.terms() {
            let other = two_step
                .terms()
                .iter()
                .find(|u| u.exponents == t.exponents)
                .map(|u| u.coefficient)
                .unwrap_or(0.0);
            prop_assert!((t.coefficient - other).abs() <= tol);
        }
        for t in two_step.terms() {
            let other = one_step
                .terms()
                .iter()
                .find(|u| u.exponents == t.exponents)
                .map(|u| u.coefficient)
                .unwrap_or(0.0);
            prop_assert!((t.coefficient - other).abs() <= tol);
        }
    }

    #[test]
    fn gradient_is_linear(p in arb_dyadic_polynomial(), q in arb_dyadic_polynomial()) {
        // dyadic coefficients keep every step exact, so equality is bitwise
        let sum_grad = p.add(&q).gradient();
        let grad_sum: Vec<Polynomial> = p
            .gradient()
            .into_iter()
            .zip(q.gradient())
            .map(|(a, b)| a.add(&b))
            .collect();
        prop_assert_eq!(sum_grad, grad_sum);
    }

    #[test]
    fn distance_is_permutation_invariant(s in arb_support()) {
        let d = distance(&build_polyhedron(&s)).d;
        for perm in [[0usize, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let dp = distance(&build_polyhedron(&s.permuted(perm))).d;
            prop_assert_eq!(&dp, &d, "permutation {:?}", perm);
        }
    }

    #[test]
    fn interior_points_change_nothing(s in arb_support(), bump in prop::array::uniform3(0i64..=3)) {
        let np = build_polyhedron(&s);
        let dr = distance(&np);
        // a support point plus a non-negative offset stays inside
        let base = s.points()[0];
        let inside = [base[0] + bump[0], base[1] + bump[1], base[2] + bump[2]];
        let enlarged = SupportSet::from_points(
            s.points().iter().cloned().chain(std::iter::once(inside)),
        )
        .unwrap();
        let np2 = build_polyhedron(&enlarged);
        prop_assert_eq!(&np2.facets, &np.facets);
        prop_assert_eq!(&np2.vertices, &np.vertices);
        prop_assert_eq!(distance(&np2).d, dr.d);
    }

    #[test]
    fn extra_points_never_increase_distance(
        s in arb_support(),
        extra in prop::array::uniform3(0i64..=8),
    ) {
        prop_assume!(extra != [0, 0, 0]);
        let d_before = distance(&build_polyhedron(&s)).d;
        let enlarged = SupportSet::from_points(
            s.points().iter().cloned().chain(std::iter::once(extra)),
        )
        .unwrap();
        let d_after = distance(&build_polyhedron(&enlarged)).d;
        prop_assert!(d_after <= d_before);
    }

    #[test]
    fn facets_are_valid_and_diagonal_touches(s in arb_support()) {
        let np = build_polyhedron(&s);
        let dr = distance(&np);
        let mut tight = 0;
        for f in &np.facets {
            prop_assert!(f.normal.iter().all(|&a| a >= 0));
            for p in s.points() {
                let v: i64 = f.normal.iter().zip(p).map(|(a, k)| a * k).sum();
                prop_assert!(v >= f.offset);
            }
            let at_diag: Rat = f.normal.iter().map(|&a| rat_int(a) * dr.d.clone()).sum();
            prop_assert!(at_diag >= f.offset_rat());
            if at_diag == f.offset_rat() {
                tight += 1;
            }
        }
        prop_assert!(tight >= 1, "no facet tight at the diagonal point");
        for v in &np.vertices {
            let active = np
                .facets
                .iter()
                .filter(|f| f.normal.iter().zip(v).map(|(a, k)| a * k).sum::<i64>() == f.offset)
                .count();
            prop_assert!(active >= 3);
        }
        prop_assert!(dr.d > rat_int(0));
    }

    #[test]
    fn support_round_trip_from_polynomial(p in arb_polynomial()) {
        prop_assume!(!p.is_zero());
        if let Ok(s) = support(&p) {
            // every support point matches a term and vice versa (origin excluded)
            let nonconst: Vec<[i64; 3]> = p
                .terms()
                .iter()
                .map(|t| [t.exponents[0] as i64, t.exponents[1] as i64, t.exponents[2] as i64])
                .filter(|e| *e != [0, 0, 0])
                .collect();
            prop_assert_eq!(s.points().len(), nonconst.len());
            for k in nonconst {
                prop_assert!(s.points().contains(&k));
            }
        }
    }
}
