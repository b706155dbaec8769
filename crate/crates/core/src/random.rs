//! Seeded sampling of states, rotations and unitaries.
//!
//! Every sampler takes an explicit RNG. Batch routines derive one ChaCha
//! stream per sample index so results do not depend on evaluation order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::gbit::{BlochState, OrthogonalMap};
use crate::linalg::{determinant, CMatrix};

pub type SampleRng = ChaCha8Rng;

/// RNG for sample `stream` of a run seeded with `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(d, |_, _| rng.sample(StandardNormal))
}

/// Uniformly distributed point on the unit sphere `S^{d-1}`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = gaussian_vector(d, rng);
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> BlochState<f64> {
    BlochState::from_raw(random_unit_vector(d, rng))
}

/// Haar-random rotation in `SO(d)`.
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> OrthogonalMap<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if determinant(&q) < 0.0 {
        q.column_mut(0).neg_mut();
    }
    OrthogonalMap::from_raw(q)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in `C^n`.
pub fn random_state_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<Complex<f64>> {
    let v = DVector::from_fn(n, |_, _| complex_gaussian(rng));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / norm)
}

/// Arbitrary (not necessarily Hermitian) complex operator with Gaussian entries.
pub fn random_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary on `C^n` (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<f64> {
    let qr = random_operator(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}
