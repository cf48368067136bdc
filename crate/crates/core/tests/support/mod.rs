//! Test-only oracles that share no code path with the sparse simulator.

#![allow(dead_code)]

use hyperqnd_core::statecore::{BasisKet, BitString, Dof, PhotonState};
use num_complex::Complex64;

pub type Dense = Vec<Complex64>;
pub type Matrix = Vec<Vec<Complex64>>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Qubit order, most significant first: pol(A..), spa(A..).
pub fn dense_index(ket: &BasisKet) -> usize {
    let n = ket.n_photons();
    ((ket.pol_bits().value() as usize) << n) | ket.spa_bits().value() as usize
}

pub fn ket_of_index(n: usize, idx: usize) -> BasisKet {
    let mask = (1usize << n) - 1;
    BasisKet::new(
        BitString::new(n, (idx >> n) as u32).unwrap(),
        BitString::new(n, (idx & mask) as u32).unwrap(),
    )
    .unwrap()
}

pub fn to_dense(state: &PhotonState) -> Dense {
    let n = state.n_photons();
    let mut v = vec![c(0.0); 1 << (2 * n)];
    for (k, a) in state.iter() {
        v[dense_index(k)] = *a;
    }
    v
}

pub fn from_dense(n: usize, v: &Dense) -> PhotonState {
    PhotonState::from_terms(
        n,
        v.iter().enumerate().map(|(i, a)| (ket_of_index(n, i), *a)),
    )
    .unwrap()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn identity2() -> Matrix {
    vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]]
}

pub fn hadamard2() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(h), c(h)], vec![c(h), c(-h)]]
}

/// Qubit slot of `(photon, dof)` in the Kronecker order used by [`dense_index`].
pub fn slot(n: usize, photon: usize, dof: Dof) -> usize {
    match dof {
        Dof::Polarization => photon,
        Dof::Spatial => n + photon,
    }
}

/// Full `4^n × 4^n` operator with `gates[slot]` on each qubit.
pub fn full_operator(gates: &[Matrix]) -> Matrix {
    gates[1..]
        .iter()
        .fold(gates[0].clone(), |acc, g| kron(&acc, g))
}

pub fn single_qubit_operator(n: usize, photon: usize, dof: Dof, g: &Matrix) -> Matrix {
    let target = slot(n, photon, dof);
    let gates: Vec<Matrix> = (0..2 * n)
        .map(|q| if q == target { g.clone() } else { identity2() })
        .collect();
    full_operator(&gates)
}

/// Hadamard on every qubit: BS and WP on every photon.
pub fn readout_operator(n: usize) -> Matrix {
    full_operator(&vec![hadamard2(); 2 * n])
}

pub fn matvec(m: &Matrix, v: &Dense) -> Dense {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `erfc(x)` as `1 − (2/√π)∫₀ˣ e^{−t²} dt` by composite Simpson.
pub fn erfc_quadrature(x: f64) -> f64 {
    let steps = 20_000;
    let h = x / steps as f64;
    let f = |t: f64| (-t * t).exp();
    let mut acc = f(0.0) + f(x);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    1.0 - 2.0 / std::f64::consts::PI.sqrt() * acc * h / 3.0
}

/// Builds a state from `(pol, spa, amplitude)` literals.
pub fn state_of(n: usize, terms: &[(&str, &str, f64)]) -> PhotonState {
    PhotonState::from_terms(
        n,
        terms.iter().map(|(p, s, a)| {
            (
                BasisKet::new(p.parse().unwrap(), s.parse().unwrap()).unwrap(),
                c(*a),
            )
        }),
    )
    .unwrap()
}

/// Random normalized dense vector (seeded, uniform box then normalized).
pub fn random_dense(dim: usize, seed: u64) -> Dense {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let v: Dense = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}
