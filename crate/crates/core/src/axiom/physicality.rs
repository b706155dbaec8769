//! Physicality of candidate states against finite families of effects.

use rayon::prelude::*;
use serde::Serialize;

use crate::composite::{composite_prob, product_state, SubspaceBasis, TwoGbitState};
use crate::error::Result;
use crate::gbit::BlochState;
use crate::random::{random_pure_state, seeded_rng};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalityReport<T: Scalar> {
    pub min_probability: T,
    /// Index into the effect list of the minimizing effect.
    pub argmin: usize,
    /// The minimizing effect, present only when its probability is negative
    /// beyond the validity tolerance.
    pub violating_effect: Option<TwoGbitState<T>>,
}

impl<T: Scalar> PhysicalityReport<T> {
    pub fn is_physical(&self) -> bool {
        self.violating_effect.is_none()
    }
}

/// Smallest `P(psi, effect)` over `effects` (first index wins ties).
pub fn check_physicality<T: Scalar>(psi: &TwoGbitState<T>, effects: &[TwoGbitState<T>]) -> Result<PhysicalityReport<T>> {
    let probs: Vec<T> = effects.iter().map(|e| composite_prob(psi, e)).collect::<Result<_>>()?;
    let mut argmin = 0;
    for (k, p) in probs.iter().enumerate() {
        if *p < probs[argmin] {
            argmin = k;
        }
    }
    let min_probability = probs.get(argmin).copied().unwrap_or_else(T::one);
    let violating_effect = (min_probability < -T::validity_tol()).then(|| effects[argmin].clone());
    Ok(PhysicalityReport {
        min_probability,
        argmin,
        violating_effect,
    })
}

/// Bloch images of the Bell states `phi+`, `phi-`, `psi+`, `psi-`.
pub fn bell_states<T: Scalar>() -> [TwoGbitState<T>; 4] {
    let (o, m) = (T::one(), -T::one());
    [
        TwoGbitState::correlated_diagonal(&[o, m, o]),
        TwoGbitState::correlated_diagonal(&[m, o, o]),
        TwoGbitState::correlated_diagonal(&[o, o, m]),
        TwoGbitState::correlated_diagonal(&[m, m, m]),
    ]
}

/// The four subspace basis states, the Bell states (for `d = 3`), every
/// signed axis product `(+-e_i, +-e_j)`, and `random` seeded pure products.
pub fn effect_family(d: usize, random: usize, seed: u64) -> Vec<TwoGbitState<f64>> {
    let mut out: Vec<TwoGbitState<f64>> = SubspaceBasis::standard(d).states().to_vec();
    if d == 3 {
        out.extend(bell_states());
    }
    for i in 0..d {
        for j in 0..d {
            for (si, sj) in [(false, false), (false, true), (true, false), (true, true)] {
                let a = BlochState::basis(d, i);
                let b = BlochState::basis(d, j);
                let a = if si { a.orthogonal() } else { a };
                let b = if sj { b.orthogonal() } else { b };
                out.push(product_state(&a, &b).expect("same dimension"));
            }
        }
    }
    let sampled: Vec<TwoGbitState<f64>> = (0..random as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(seed, k);
            let a = random_pure_state(d, &mut rng);
            let b = random_pure_state(d, &mut rng);
            product_state(&a, &b).expect("same dimension")
        })
        .collect();
    out.extend(sampled);
    out
}
