mod common;

use common::c;
use sigma_lcu::pauli::DEFAULT_PAULI_TOL;
use sigma_lcu::{
    decompose_pauli, heat_1d, poisson_1d, reconstruct, wave_1d, HeatParams, PdeSystem,
    SparseMatrix, WaveParams,
};

const GRID: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 3), (3, 4)];

fn check_reconstruction(sys: &PdeSystem) {
    let back = reconstruct(&sys.decomposition);
    if sys.matrix.is_integer_valued() {
        assert_eq!(back, sys.matrix);
    } else {
        assert!(back.frobenius_distance(&sys.matrix).unwrap() < 1e-12);
    }
}

#[test]
fn poisson_matches_hand_built_tridiagonal() {
    for s in 1..=7 {
        let n = 1usize << s;
        let mut trips = Vec::new();
        for i in 0..n {
            trips.push((i, i, c(2.0, 0.0)));
            if i > 0 {
                trips.push((i, i - 1, c(-1.0, 0.0)));
                trips.push((i - 1, i, c(-1.0, 0.0)));
            }
        }
        let oracle = SparseMatrix::from_triplets(s, trips).unwrap();
        let sys = poisson_1d(s).unwrap();
        assert_eq!(sys.matrix, oracle);
        assert_eq!(reconstruct(&sys.decomposition), oracle);
        assert_eq!(sys.decomposition.len(), 2 * s + 1);
    }
}

#[test]
fn heat_and_wave_grids_reconstruct_within_bounds() {
    for (s, t) in GRID {
        let heat = heat_1d(&HeatParams::neumann(s, t)).unwrap();
        check_reconstruction(&heat);
        assert!(heat.decomposition.len() <= (t + 1) + (4 * s + 6));
        let wave = wave_1d(&WaveParams::new(s, t)).unwrap();
        check_reconstruction(&wave);
        assert!(wave.decomposition.len() <= (t + 1) + 2 * (2 * (s + 1) + 4));
    }
}

#[test]
fn dyadic_heat_parameters_are_exact() {
    // dt = T/(n_t - 1) and dx = L/n_x chosen so alpha dt / dx^2 = 1.
    for (s, t) in GRID {
        let mut p = HeatParams::neumann(s, t);
        p.final_time = ((1 << t) - 1) as f64;
        p.length = (1 << s) as f64;
        let sys = heat_1d(&p).unwrap();
        assert_eq!(reconstruct(&sys.decomposition), sys.matrix);
    }
}

#[test]
fn pauli_counts_dominate_sigma_counts() {
    let mut systems: Vec<PdeSystem> = (4..=7).map(|s| poisson_1d(s).unwrap()).collect();
    for (s, t) in GRID {
        systems.push(heat_1d(&HeatParams::neumann(s, t)).unwrap());
        systems.push(wave_1d(&WaveParams::new(s, t)).unwrap());
    }
    for sys in systems {
        let p = decompose_pauli(&sys.matrix, DEFAULT_PAULI_TOL).unwrap();
        assert!(
            p.len() >= sys.decomposition.len(),
            "{:?} s={} t={}",
            sys.family,
            sys.s,
            sys.t
        );
        assert!(p.reconstruct().frobenius_distance(&sys.matrix).unwrap() < 1e-10);
    }
}

#[test]
fn poisson_pauli_ratio_grows() {
    let mut last = 0.0;
    for s in 4..=7 {
        let sys = poisson_1d(s).unwrap();
        let pauli = decompose_pauli(&sys.matrix, DEFAULT_PAULI_TOL)
            .unwrap()
            .len();
        let ratio = pauli as f64 / sys.decomposition.len() as f64;
        assert!(ratio > last);
        assert!(pauli >= (1 << s) / 2);
        last = ratio;
    }
}
