use fracnoise_core::carpet::{render_carpet, BitDepth, Mapping};
use fracnoise_core::evolution::{ProbabilityField, TimeGrid};
use fracnoise_core::fractal::{
    box_count, default_ladder, measure_scaling_sample, scaling_dimension_fit, self_affine_dimension, BoxCountParams,
    ScalingKind,
};
use fracnoise_core::io::{read_curve_tsv, write_curve_tsv};
use fracnoise_core::synth::{binomial_cascade, brownian_bridge, fbm};
use fracnoise_core::Curve;
use proptest::prelude::*;

fn unit_curve(ys: Vec<f64>) -> Curve {
    Curve::unit_spaced(0.0, ys, "").unwrap()
}

fn dimension_of(ys: Vec<f64>, a: f64) -> f64 {
    let c = unit_curve(ys);
    let p = BoxCountParams::for_curve(&c, 1.0, a).unwrap();
    self_affine_dimension(&c, &p).unwrap().dimension
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_monotone_in_b_and_a(ys in prop::collection::vec(-1.0f64..1.0, 65..400), a in 1e-4f64..0.5) {
        let c = unit_curve(ys);
        let ladder: Vec<u64> = std::iter::successors(Some(1u64), |b| Some(b * 2))
            .take_while(|&b| b as f64 <= c.span())
            .collect();
        let coarse = box_count(&c, &BoxCountParams::new(1.0, a, ladder.clone()).unwrap()).unwrap();
        let fine = box_count(&c, &BoxCountParams::new(1.0, a / 3.0, ladder).unwrap()).unwrap();
        for w in coarse.windows(2) {
            prop_assert!(w[1].1 <= w[0].1, "{coarse:?}");
        }
        for (c, f) in coarse.iter().zip(&fine) {
            prop_assert!(f.1 >= c.1);
        }
    }

    #[test]
    fn counts_invariant_under_joint_rescaling(
        ys in prop::collection::vec(-1.0f64..1.0, 40..300),
        a in 1e-3f64..0.3,
        k in -20i32..20,
    ) {
        let lambda = 2f64.powi(k);
        let c = unit_curve(ys.clone());
        let scaled = unit_curve(ys.iter().map(|y| y * lambda).collect());
        let bs = vec![1, 2, 3, 5, 8];
        let n1 = box_count(&c, &BoxCountParams::new(1.0, a, bs.clone()).unwrap()).unwrap();
        let n2 = box_count(&scaled, &BoxCountParams::new(1.0, a * lambda, bs).unwrap()).unwrap();
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn curve_tsv_round_trip(ys in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 2..50), start in -1e6f64..1e6) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        let c = Curve::unit_spaced(start, ys, "prop").unwrap();
        write_curve_tsv(&c, &path, &[], ("x", "y")).unwrap();
        prop_assert_eq!(read_curve_tsv(&path).unwrap(), c);
    }

    #[test]
    fn rendering_is_monotone(vals in prop::collection::vec(0.0f64..1.0, 24), which in 0usize..3) {
        let field = ProbabilityField::from_values(4, TimeGrid::integers(0, 5).unwrap(), vals).unwrap();
        let mapping = [Mapping::Linear, Mapping::Sqrt, Mapping::Log { floor: 1e-3 }][which];
        for depth in [BitDepth::Eight, BitDepth::Sixteen] {
            let img = render_carpet(&field, mapping, depth).unwrap();
            let cells: Vec<(f64, u16)> = (1..=4)
                .flat_map(|x| (0..6).map(move |k| (x, k)))
                .map(|(x, k)| (field.get(x, k), img.at(x, k)))
                .collect();
            for p in &cells {
                for q in &cells {
                    if p.0 >= q.0 {
                        prop_assert!(p.1 >= q.1);
                    }
                }
            }
        }
    }

    #[test]
    fn cascade_dimensions_are_ordered(p in 0.02f64..0.98) {
        let samples: Vec<_> = (4..=9)
            .map(|l| {
                let m = binomial_cascade(l, p).unwrap();
                measure_scaling_sample(&m, m.len(), 0.0).unwrap()
            })
            .collect();
        let d1 = scaling_dimension_fit(&samples, ScalingKind::D1).unwrap().dimension;
        let d2 = scaling_dimension_fit(&samples, ScalingKind::D2).unwrap().dimension;
        prop_assert!(d2 <= d1 + 1e-12 && d1 <= 1.0 + 1e-12, "D1={d1} D2={d2}");
        let q = 1.0 - p;
        prop_assert!((d1 + (p * p.log2() + q * q.log2())).abs() < 1e-9);
        prop_assert!((d2 + (p * p + q * q).log2()).abs() < 1e-9);
    }
}

#[test]
fn fbm_calibration() {
    for h in [0.25, 0.5, 0.75] {
        for seed in [1, 2, 3] {
            let y = fbm(1 << 15, h, seed).unwrap();
            let range = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - y.iter().cloned().fold(f64::INFINITY, f64::min);
            let d = dimension_of(y, range * 1e-7);
            assert!((d - (2.0 - h)).abs() <= 0.1, "H={h} seed={seed}: D={d}");
        }
    }
}

#[test]
fn brownian_bridge_dimension() {
    let y = brownian_bridge(1 << 15, 42).unwrap();
    let d = dimension_of(y, 1e-6);
    assert!((1.4..=1.6).contains(&d), "D={d}");
}

#[test]
fn smooth_curve_limit() {
    let n = 20000;
    let curves: Vec<Vec<f64>> = vec![
        (0..=n).map(|k| (k as f64 / n as f64).powi(2)).collect(),
        (0..=n).map(|k| (3.0 * k as f64 / n as f64).exp()).collect(),
        (0..=n).map(|k| (k as f64 / n as f64).sqrt()).collect(),
    ];
    for ys in curves {
        for a in [1e-5, 1e-7, 1e-9] {
            let d = dimension_of(ys.clone(), a);
            assert!((d - 1.0).abs() <= 0.05, "a={a}: D={d}");
        }
    }
}

#[test]
fn uniform_and_delta_measures_are_exact() {
    let sizes = [89usize, 144, 233, 377, 610, 987];
    let uni: Vec<_> = sizes
        .iter()
        .map(|&n| measure_scaling_sample(&vec![1.0 / n as f64; n], n, 0.0).unwrap())
        .collect();
    let del: Vec<_> = sizes
        .iter()
        .map(|&n| {
            let mut p = vec![0.0; n];
            p[0] = 1.0;
            measure_scaling_sample(&p, n, 0.0).unwrap()
        })
        .collect();
    for kind in [ScalingKind::D1, ScalingKind::D2] {
        assert!((scaling_dimension_fit(&uni, kind).unwrap().dimension - 1.0).abs() < 1e-12);
        assert_eq!(scaling_dimension_fit(&del, kind).unwrap().dimension, 0.0);
    }
}

#[test]
fn default_ladder_spans_two_octaves_below_half_span() {
    let l = default_ladder(20000.0);
    assert_eq!(l.first(), Some(&16));
    assert_eq!(l.last(), Some(&8192));
}
