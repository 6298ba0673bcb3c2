use epicert_core::essential::{classify_m4, EssentialWitness};
use epicert_core::fundamental::{build_reduced, decide_pencil};
use epicert_core::io::{parse_input, serialize_input};
use epicert_core::linalg::RationalMatrix;
use epicert_core::numeric::FloatMatrix3;
use epicert_core::rational::ratio;
use epicert_core::{
    decide_essential, decide_fundamental, demazure_residuals, is_essential, Correspondence, CorrespondenceSet, DecideOptions,
    EssentialCandidate, EssentialCase, HomogeneousPoint, InputDocument, InputFormat, Pencil, Rational, Verdict, WitnessF,
};
use nalgebra::{Matrix3, Rotation3, Vector3};
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

fn point() -> impl Strategy<Value = HomogeneousPoint> {
    (rational(), rational()).prop_map(|(a, b)| HomogeneousPoint::new(a, b))
}

fn pairs(range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CorrespondenceSet> {
    prop::collection::vec((point(), point()), range)
        .prop_map(|v| CorrespondenceSet::new(v.into_iter().map(|(x, y)| Correspondence::new(x, y)).collect()).unwrap())
}

fn distinct(points: &[HomogeneousPoint]) -> bool {
    (0..points.len()).all(|i| (i + 1..points.len()).all(|j| points[i] != points[j]))
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-4i64..=4, 9).prop_map(|v| RationalMatrix::from_ints(&[[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]))
}

fn residual_f64(pairs: &CorrespondenceSet, f: &Matrix3<f64>) -> f64 {
    let f = f / f.amax();
    let unit = |p: &HomogeneousPoint| Vector3::from_iterator(p.coords().to_f64()).normalize();
    pairs.pairs().iter().map(|c| unit(&c.y).dot(&(f * unit(&c.x))).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn up_to_five_pairs_always_admit_a_fundamental_matrix(p in pairs(1..=5)) {
        let d = decide_fundamental(&p, &DecideOptions::default()).unwrap();
        prop_assert_eq!(d.verdict, Verdict::Exists);
        match d.witness.unwrap() {
            WitnessF::Exact { matrix } => {
                prop_assert_eq!(matrix.rank(), 2);
                prop_assert!(p.satisfies(&matrix));
            }
            WitnessF::Numeric { matrix, sigma_ratios, .. } => {
                prop_assert!(sigma_ratios[1] < 1e-9);
                prop_assert!(residual_f64(&p, &matrix.0) < 1e-8);
            }
        }
    }

    #[test]
    fn verdict_ignores_pair_order(p in pairs(1..=8), seed in any::<u64>()) {
        let n = p.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let opts = DecideOptions::default();
        let a = decide_fundamental(&p, &opts).unwrap();
        let b = decide_fundamental(&p.subset(&order), &opts).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(build_reduced(&p).rank, build_reduced(&p.subset(&order)).rank);
    }

    #[test]
    fn swapping_views_transposes_the_question(p in pairs(1..=8)) {
        let opts = DecideOptions::default();
        prop_assert_eq!(decide_fundamental(&p, &opts).unwrap().verdict, decide_fundamental(&p.swapped(), &opts).unwrap().verdict);
    }

    #[test]
    fn pencil_decisions_respect_a_grid_oracle(a in small_matrix(), b in small_matrix()) {
        let Ok(p) = Pencil::new(vec![a.clone(), b.clone()]) else { return Ok(()) };
        let d = decide_pencil(&p, &DecideOptions::default()).unwrap();
        let grid_has_rank_two = (-3i64..=3).any(|u| (-3i64..=3).any(|v| a.scale(&ratio(u, 1)).add(&b.scale(&ratio(v, 1))).rank() == 2));
        if grid_has_rank_two {
            prop_assert_eq!(d.verdict, Verdict::Exists);
        }
        match (d.verdict, d.witness) {
            (Verdict::NotExists, None) => prop_assert!(!grid_has_rank_two),
            (Verdict::Exists, Some(WitnessF::Exact { matrix })) => {
                prop_assert_eq!(matrix.rank(), 2);
                let span = RationalMatrix::from_rows(&[a.vectorize(), b.vectorize(), matrix.vectorize()]);
                prop_assert_eq!(span.rank(), 2);
            }
            (Verdict::Exists, Some(WitnessF::Numeric { sigma_ratios, .. })) => prop_assert!(sigma_ratios[1] < 1e-9 && sigma_ratios[0] > 1e-9),
            other => prop_assert!(false, "unexpected outcome {:?}", other),
        }
    }

    #[test]
    fn four_or_fewer_distinct_pairs_admit_an_essential_matrix(p in pairs(1..=4)) {
        prop_assume!(distinct(&p.x_points()) && distinct(&p.y_points()));
        let opts = DecideOptions::default();
        let d = decide_essential(&p, &opts).unwrap();
        prop_assert_eq!(d.verdict, Verdict::Exists);
        prop_assert!(d.verify(&p, &opts));
        if let Some(EssentialWitness::Essential { candidate, .. }) = &d.witness {
            prop_assert!(is_essential(candidate, 1e-9).unwrap());
        }
    }

    #[test]
    fn four_distinct_pairs_match_exactly_one_case(p in pairs(4..=4)) {
        prop_assume!(distinct(&p.x_points()) && distinct(&p.y_points()));
        let config = classify_m4(&p).unwrap();
        prop_assert!((1..=4).contains(&config.case));
        let d = decide_essential(&p, &DecideOptions::default()).unwrap();
        prop_assert_ne!(d.case, EssentialCase::HypothesisViolated);
    }

    #[test]
    fn demazure_agrees_with_singular_values(axis in prop::array::uniform3(-3.0f64..3.0), t in prop::array::uniform3(-1.0f64..1.0), s2 in 0.05f64..1.0) {
        let r = Rotation3::from_scaled_axis(Vector3::from(axis));
        let t = Vector3::from(t);
        prop_assume!(t.norm() > 1e-3);
        let e = EssentialCandidate::Numeric(FloatMatrix3(t.cross_matrix() * r.matrix()));
        prop_assert!(demazure_residuals(&e).vanish(1e-9));
        prop_assert!(is_essential(&e, 1e-9).unwrap());
        let unequal = EssentialCandidate::Numeric(FloatMatrix3(r.matrix() * Matrix3::from_diagonal(&Vector3::new(1.0, s2, 0.0))));
        let equal = (1.0 - s2).abs() < 1e-6;
        prop_assert_eq!(demazure_residuals(&unequal).vanish(1e-9), equal);
        prop_assert_eq!(is_essential(&unequal, 1e-9).unwrap(), equal);
    }

    #[test]
    fn exact_demazure_matches_is_essential(m in small_matrix()) {
        let e = EssentialCandidate::Exact(m);
        prop_assert_eq!(demazure_residuals(&e).vanish(0.0), is_essential(&e, 1e-9).unwrap());
    }

    #[test]
    fn input_documents_round_trip(p in pairs(1..=9), named in any::<bool>()) {
        let doc = InputDocument { name: named.then(|| "sample".to_string()), source: None, correspondences: p };
        for format in [InputFormat::Csv, InputFormat::Json] {
            prop_assert_eq!(&parse_input(&serialize_input(&doc, format), format).unwrap(), &doc);
        }
    }
}

/// Pairs with `yᵀ S x = 0` for the shift `S`: `y₂ = −y₁ x₂`.
fn on_shift(points: &[(i64, i64, i64)]) -> CorrespondenceSet {
    CorrespondenceSet::from_ints(&points.iter().map(|&(x1, x2, y1)| [x1, x2, y1, -y1 * x2]).collect::<Vec<_>>())
}

#[test]
fn eight_constraints_from_a_rank_two_matrix_recover_it() {
    let p = on_shift(&[(1, 2, 3), (-1, 4, 2), (5, 1, -3), (2, -2, 7), (0, 3, 1), (4, 5, -2), (-3, -1, 6), (6, 2, 5)]);
    assert_eq!(build_reduced(&p).rank, 8);
    let d = decide_fundamental(&p, &DecideOptions::default()).unwrap();
    assert_eq!(d.verdict, Verdict::Exists);
    let Some(WitnessF::Exact { matrix }) = d.witness else { panic!("exact witness expected") };
    assert_eq!(matrix, RationalMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]));
}

#[test]
fn eight_generic_pairs_leave_a_rank_three_point() {
    let p = CorrespondenceSet::from_ints(&[[3, 0, 2, 0], [9, 1, 5, 4], [1, 2, 9, 6], [8, 8, 2, 5], [4, 8, 1, 4], [7, 2, 6, 3], [0, 5, 3, 7], [2, 9, 8, 1]]);
    assert_eq!(build_reduced(&p).rank, 8);
    let d = decide_fundamental(&p, &DecideOptions::default()).unwrap();
    assert_eq!(d.verdict, Verdict::NotExists);
    assert_eq!(d.kernel[0].rank(), 3);
    assert!(p.satisfies(&d.kernel[0]));
    assert!(!d.kernel[0].det().is_zero());
}
