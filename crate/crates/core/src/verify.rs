//! One-call aggregate of the property checks, for the command line.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::axiom::{inversion_entanglement_contradiction, single_flips};
use crate::composite::{
    composite_prob, lemma2_product_states_in_s12, lemma3_flip_maps_to_s34, local_transform, product_state,
    schmidt_decompose, TwoGbitState,
};
use crate::gbit::{axiom1_decomposable, ConvexStateSpace};
use crate::linalg::{determinant, identity_deviation, max_abs_diff};
use crate::mirror::mirror_w_inconsistency_exact;
use crate::quantum::{
    bloch_from_state_vector, lemma4_identity_check, partial_transpose_bloch, schmidt_circle, su2_to_so3,
    transition_probability, UnitaryMap,
};
use crate::random::{random_orthogonal, random_pure_state, random_state_vector, random_unitary, seeded_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    /// The check found the violation it is meant to exhibit.
    ExpectedFail,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

const SAMPLES: usize = 1000;

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
    Check { name, outcome, detail }
}

/// Largest value of `f` over `SAMPLES` seeded draws.
fn worst(seed: u64, salt: u64, f: impl Fn(&mut crate::random::SampleRng) -> f64 + Sync) -> f64 {
    (0..SAMPLES as u64)
        .into_par_iter()
        .map(|k| f(&mut seeded_rng(seed ^ salt.rotate_left(32), k)))
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

fn random_pure(rng: &mut crate::random::SampleRng) -> TwoGbitState<f64> {
    bloch_from_state_vector(&random_state_vector(4, rng)).expect("normalized")
}

pub fn verify_all(seed: u64) -> VerifyReport {
    let mut checks = Vec::new();

    let dev = worst(seed, 1, |rng| (random_pure(rng).normalization() - 3.0).abs());
    checks.push(check("normalization", dev < 1e-9, format!("max |N - 3| = {dev:.3e}")));

    let product_dev = worst(seed, 2, |rng| {
        let p = product_state(&random_pure_state(3, rng), &random_pure_state(3, rng)).expect("d = 3");
        (p.correlation_norm() - 1.0).abs()
    });
    let entangled_gap = -worst(seed, 3, |rng| {
        let a = rng.random_range(0.01..PI - 0.01);
        let r1 = random_orthogonal(3, rng);
        let r2 = random_orthogonal(3, rng);
        let psi = local_transform(&r1, &r2, &schmidt_circle(a).bloch).expect("d = 3");
        -(psi.correlation_norm() - 1.0)
    });
    checks.push(check(
        "lemma1-witness",
        product_dev < 1e-12 && entangled_gap > 1e-6,
        format!("products: max ||T|-1| = {product_dev:.3e}; entangled: min |T|-1 = {entangled_gap:.3e}"),
    ));

    let l2 = lemma2_product_states_in_s12(3, SAMPLES, seed);
    checks.push(check(
        "lemma2-products-in-s12",
        l2.passed(),
        format!("{} product states checked, {} violations", l2.checked, l2.violations.len()),
    ));

    let mut l3_ok = true;
    let states = [TwoGbitState::psi_qm(), TwoGbitState::psi_mqm(), schmidt_circle(0.7).bloch, schmidt_circle(2.1).bloch];
    for psi in &states {
        for g in single_flips(3) {
            l3_ok &= lemma3_flip_maps_to_s34(psi, &g.map()).unwrap_or(false);
        }
    }
    checks.push(check("lemma3-flips-to-s34", l3_ok, "single flips on S12 states".into()));

    let mut rng = seeded_rng(seed, 4);
    let l4 = (0..20)
        .map(|k| {
            let u = UnitaryMap::new(random_unitary(4, &mut rng)).expect("unitary");
            lemma4_identity_check(&u, 10, seed.wrapping_add(k)).expect("4x4")
        })
        .fold(0.0, f64::max);
    checks.push(check("lemma4-identity", l4 < 1e-12, format!("max deviation = {l4:.3e}")));

    let homo = worst(seed, 5, |rng| {
        let u1 = UnitaryMap::new(random_unitary(2, rng)).expect("unitary");
        let u2 = UnitaryMap::new(random_unitary(2, rng)).expect("unitary");
        let r12 = su2_to_so3(&u1.compose(&u2)).expect("2x2");
        let (r1, r2) = (su2_to_so3(&u1).expect("2x2"), su2_to_so3(&u2).expect("2x2"));
        let so3 = identity_deviation(&(r1.matrix().transpose() * r1.matrix())).max((determinant(r1.matrix()) - 1.0).abs());
        max_abs_diff(r12.matrix(), &(r1.matrix() * r2.matrix())).max(so3)
    });
    checks.push(check("su2-so3-homomorphism", homo < 1e-12, format!("max deviation = {homo:.3e}")));

    let oracle = worst(seed, 6, |rng| {
        let (a, b) = (random_state_vector(4, rng), random_state_vector(4, rng));
        let pa = bloch_from_state_vector(&a).expect("normalized");
        let pb = bloch_from_state_vector(&b).expect("normalized");
        (composite_prob(&pa, &pb).expect("d = 3") - transition_probability(&a, &b)).abs()
    });
    checks.push(check("oracle-equivalence", oracle < 1e-12, format!("max deviation = {oracle:.3e}")));

    let pt = worst(seed, 7, |rng| {
        let v = random_state_vector(4, rng);
        let rho = crate::quantum::DensityMatrix::from_pure(&v).expect("normalized");
        let psi = crate::quantum::bloch_from_density(&rho).expect("two qubits");
        let via_matrix = crate::quantum::bloch_from_density(&rho.partial_transpose(1).expect("two qubits")).expect("two qubits");
        via_matrix.max_abs_diff(&partial_transpose_bloch(&psi, 1).expect("d = 3"))
    });
    checks.push(check("partial-transpose-bloch-rule", pt < 1e-12, format!("max deviation = {pt:.3e}")));

    let schmidt = worst(seed, 8, |rng| {
        let psi = random_pure(rng);
        let s = schmidt_decompose(&psi);
        max_abs_diff(&s.reconstruct(), psi.t())
    });
    checks.push(check("schmidt-reconstruction", schmidt < 1e-9, format!("max deviation = {schmidt:.3e}")));

    let inversion = (0..100u64)
        .map(|k| {
            let psi = random_pure(&mut seeded_rng(seed ^ 9, k));
            let r = inversion_entanglement_contradiction(&psi).expect("pure");
            ((r.p_left - r.formula_left).abs() < 1e-12 && r.p_left < 0.0) as usize
        })
        .sum::<usize>();
    checks.push(check(
        "total-inversion-contradiction",
        inversion == 100,
        format!("{inversion}/100 entangled states give a negative probability"),
    ));

    let overlap = mirror_w_inconsistency_exact();
    checks.push(check(
        "mirror-w-negative-probability",
        overlap == num_rational::Rational64::new(-1, 6),
        format!("P = {overlap}"),
    ));

    let disc = ConvexStateSpace::<f64>::unit_disc();
    let disc_ok = (0..SAMPLES as u64).all(|k| {
        let mut rng = seeded_rng(seed ^ 10, k);
        let r = rng.random::<f64>().sqrt() * 0.999;
        let a = rng.random_range(0.0..2.0 * PI);
        axiom1_decomposable(&disc, [r * a.cos(), r * a.sin()], 1e-9).is_ok_and(|w| w.is_some())
    });
    checks.push(check("axiom1-disc", disc_ok, format!("{SAMPLES} interior states decompose")));

    let square = ConvexStateSpace::<f64>::square();
    let square_result = axiom1_decomposable(&square, [0.5, 0.5], 1e-9);
    let outcome = match square_result {
        Ok(None) => Outcome::ExpectedFail,
        _ => Outcome::Fail,
    };
    checks.push(Check {
        name: "axiom1-square",
        outcome,
        detail: "state (x1 + x2)/2 is no mixture of two distinguishable pure states".into(),
    });

    VerifyReport { seed, checks }
}
