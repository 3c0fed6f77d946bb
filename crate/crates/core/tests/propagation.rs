use fracnoise_core::evolution::{
    compute_field, evolve_at_time, mean_square_displacement, project_to_eigenbasis, return_probability_overlap,
    return_probability_series, TimeGrid,
};
use fracnoise_core::lattice::{
    analytic_eigensystem, quasiperiodic_potential, solve_tridiagonal_eigensystem, Chain, EigenSystem, InitialState,
    Recipe,
};
use fracnoise_core::oracle::oracle_evolve;
use num_complex::Complex64;
use proptest::prelude::*;

fn chain_strategy(max_n: usize) -> impl Strategy<Value = Chain> {
    (2..=max_n).prop_flat_map(|n| {
        prop_oneof![
            Just(Chain::zero(n).unwrap()),
            prop::collection::vec(-3.0f64..3.0, n).prop_map(|v| Chain::from_potential(v).unwrap()),
        ]
    })
}

fn state_for(n: usize, raw: &[(f64, f64)]) -> InitialState {
    let amps = raw.iter().take(n).map(|&(re, im)| Complex64::new(re, im)).collect();
    InitialState::from_amplitudes(amps, Recipe::SpatialUniform).unwrap()
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64).prop_filter("non-zero", |v| {
        v.iter().take(2).any(|&(a, b)| a.abs() + b.abs() > 1e-3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitarity_and_reversal(chain in chain_strategy(48), raw in amplitudes(), t in 0.0f64..500.0) {
        let n = chain.n_sites();
        let es = EigenSystem::for_chain(&chain).unwrap();
        let st = state_for(n, &raw);
        let co = project_to_eigenbasis(&st, &es).unwrap();
        let psi = evolve_at_time(&co, &es, t).unwrap();
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
        let back = co.advanced(&es, t).advanced(&es, -t);
        let psi0 = evolve_at_time(&back, &es, 0.0).unwrap();
        for (a, b) in psi0.iter().zip(st.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn spectral_matches_dense_exponential(chain in chain_strategy(16), raw in amplitudes(), t in 0.0f64..60.0) {
        let n = chain.n_sites();
        let es = EigenSystem::for_chain(&chain).unwrap();
        let st = state_for(n, &raw);
        let co = project_to_eigenbasis(&st, &es).unwrap();
        let spectral = evolve_at_time(&co, &es, t).unwrap();
        let dense = oracle_evolve(&chain, st.amplitudes(), t).unwrap();
        for (a, b) in spectral.iter().zip(&dense) {
            prop_assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn return_probability_routes_agree(chain in chain_strategy(20), raw in amplitudes(), dt in 0.05f64..3.0) {
        let n = chain.n_sites();
        let es = EigenSystem::for_chain(&chain).unwrap();
        let st = state_for(n, &raw);
        let co = project_to_eigenbasis(&st, &es).unwrap();
        let grid = TimeGrid::linear(0.0, dt, 70).unwrap();
        let a = return_probability_series(&co, &es, &grid).unwrap();
        let b = return_probability_overlap(&st, &co, &es, &grid).unwrap();
        for (x, y) in a.ordinate().iter().zip(b.ordinate()) {
            prop_assert!((x - y).abs() < 1e-10);
            prop_assert!((0.0..=1.0).contains(x));
        }
    }

    #[test]
    fn msd_matches_dense_exponential(chain in chain_strategy(16), raw in amplitudes(), origin_frac in 0.0f64..1.0) {
        let n = chain.n_sites();
        let origin = 1 + ((n - 1) as f64 * origin_frac).round() as usize;
        let es = EigenSystem::for_chain(&chain).unwrap();
        let st = state_for(n, &raw);
        let co = project_to_eigenbasis(&st, &es).unwrap();
        let grid = TimeGrid::linear(0.0, 0.7, 30).unwrap();
        let field = compute_field(&co, &es, &grid).unwrap();
        let msd = mean_square_displacement(&field, origin).unwrap();
        for (t, m) in msd.points() {
            let psi = oracle_evolve(&chain, st.amplitudes(), t).unwrap();
            let want: f64 = psi
                .iter()
                .enumerate()
                .map(|(i, a)| ((i + 1) as f64 - origin as f64).powi(2) * a.norm_sqr())
                .sum();
            prop_assert!((m - want).abs() < 1e-8, "t={t}: {m} vs {want}");
        }
        for k in 0..grid.len() {
            prop_assert!((field.slice(k).iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eigensolver_residuals(pot in prop::collection::vec(-4.0f64..4.0, 2..120)) {
        let chain = Chain::from_potential(pot).unwrap();
        let es = solve_tridiagonal_eigensystem(&chain).unwrap();
        let scale = chain.hamiltonian_norm().max(1.0);
        for j in 0..es.len() {
            let v = es.column(j);
            let hv = chain.apply_hamiltonian(&v);
            let r = hv.iter().zip(v.iter()).map(|(h, c)| (h - es.energies()[j] * c).abs()).fold(0.0, f64::max);
            prop_assert!(r <= 1e-8 * scale, "state {j}: residual {r}");
        }
        prop_assert!(es.energies().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn analytic_and_numeric_spectra_agree() {
    for n in [2, 3, 10, 101, 500] {
        let an = analytic_eigensystem(n).unwrap();
        let nu = solve_tridiagonal_eigensystem(&Chain::from_potential(vec![0.0; n]).unwrap()).unwrap();
        for k in 0..n {
            assert!((nu.energies()[k] - an.energies()[n - 1 - k]).abs() < 1e-10, "n={n} k={k}");
        }
    }
}

#[test]
#[allow(clippy::excessive_precision)]
fn quasiperiodic_potential_high_precision() {
    // 2 cos(2 pi x 610 / 987) evaluated at 40 digits
    let frozen = [
        (1, -1.474733859337368320967641),
        (2, 0.1748399558760888528837359),
        (17, -1.998288053542956166445435),
        (100, 0.6590557381678519012937534),
        (493, -0.724752468545386659335193),
        (494, -0.724752468545386659335193),
        (610, 1.999959474912174486936004),
        (986, -1.474733859337368320967641),
        (987, 2.0),
    ];
    let v = quasiperiodic_potential(610, 987).unwrap();
    for (x, want) in frozen {
        assert!((v[x - 1] - want).abs() < 1e-14, "x={x}: {}", v[x - 1]);
    }
}
