//! The correlated (`S12`) and anticorrelated (`S34`) one-bit subspaces of
//! two generalized bits.

use rayon::prelude::*;
use serde::Serialize;

use super::{composite_prob, local_transform, product_state, TwoGbitState};
use crate::error::{Error, Result};
use crate::gbit::{BlochState, OrthogonalMap};
use crate::random::{random_pure_state, seeded_rng};
use crate::scalar::{abs, Scalar, SUBSPACE_TOL};

/// Product basis built on one axis `e`:
/// `psi1 = (e, e, e e^T)`, `psi2 = (-e, -e, e e^T)`,
/// `psi3 = (-e, e, -e e^T)`, `psi4 = (e, -e, -e e^T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T: Scalar> {
    states: [TwoGbitState<T>; 4],
}

impl<T: Scalar> SubspaceBasis<T> {
    /// Basis on the pure axis state `e`.
    pub fn on_axis(e: &BlochState<T>) -> Result<Self> {
        if !e.is_pure() {
            return Err(Error::NotPureDirection {
                norm_sq: e.norm_sq().as_f64(),
            });
        }
        let minus = e.orthogonal();
        Ok(Self {
            states: [
                product_state(e, e)?,
                product_state(&minus, &minus)?,
                product_state(&minus, e)?,
                product_state(e, &minus)?,
            ],
        })
    }

    /// Basis on the first coordinate axis.
    pub fn standard(d: usize) -> Self {
        Self::on_axis(&BlochState::basis(d, 0)).expect("basis vector is pure")
    }

    /// Basis state `psi_k`, `k` in `1..=4`.
    pub fn psi(&self, k: usize) -> &TwoGbitState<T> {
        assert!((1..=4).contains(&k), "basis index {k} outside 1..=4");
        &self.states[k - 1]
    }

    pub fn states(&self) -> &[TwoGbitState<T>; 4] {
        &self.states
    }

    pub fn d(&self) -> usize {
        self.states[0].d()
    }
}

fn overlaps<T: Scalar>(psi: &TwoGbitState<T>, basis: &SubspaceBasis<T>) -> Result<[T; 4]> {
    Ok([
        composite_prob(psi, basis.psi(1))?,
        composite_prob(psi, basis.psi(2))?,
        composite_prob(psi, basis.psi(3))?,
        composite_prob(psi, basis.psi(4))?,
    ])
}

/// `[P(psi,psi1) + P(psi,psi2) - 1, P(psi,psi3), P(psi,psi4)]`.
pub fn s12_residuals<T: Scalar>(psi: &TwoGbitState<T>, basis: &SubspaceBasis<T>) -> Result<[T; 3]> {
    let p = overlaps(psi, basis)?;
    Ok([p[0] + p[1] - T::one(), p[2], p[3]])
}

/// `[P(psi,psi3) + P(psi,psi4) - 1, P(psi,psi1), P(psi,psi2)]`.
pub fn s34_residuals<T: Scalar>(psi: &TwoGbitState<T>, basis: &SubspaceBasis<T>) -> Result<[T; 3]> {
    let p = overlaps(psi, basis)?;
    Ok([p[2] + p[3] - T::one(), p[0], p[1]])
}

fn within<T: Scalar>(r: Result<[T; 3]>, tol: T) -> bool {
    r.map(|r| r.iter().all(|v| abs(*v) <= tol)).unwrap_or(false)
}

/// Membership of a (pure) state in the correlated subspace spanned by
/// `psi1` and `psi2`. Dimension mismatches count as non-membership.
pub fn in_s12<T: Scalar>(psi: &TwoGbitState<T>, basis: &SubspaceBasis<T>, tol: T) -> bool {
    within(s12_residuals(psi, basis), tol)
}

/// Membership in the anticorrelated subspace spanned by `psi3` and `psi4`.
pub fn in_s34<T: Scalar>(psi: &TwoGbitState<T>, basis: &SubspaceBasis<T>, tol: T) -> bool {
    within(s34_residuals(psi, basis), tol)
}

/// Outcome of scanning product states for membership in `S12`.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub d: usize,
    pub checked: usize,
    pub members: usize,
    pub psi1_member: bool,
    pub psi2_member: bool,
    /// Product states found in `S12` that are neither `psi1` nor `psi2`.
    pub violations: Vec<TwoGbitState<f64>>,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.psi1_member && self.psi2_member
    }
}

/// Checks that the only product states in `S12` are `psi1` and `psi2`: every
/// signed axis pair `(+-e_i, +-e_j)` plus `random` uniformly sampled pure
/// product states.
pub fn lemma2_product_states_in_s12(d: usize, random: usize, seed: u64) -> Lemma2Report {
    assert!(d >= 1, "dimension must be positive");
    let basis = SubspaceBasis::<f64>::standard(d);
    let mut grid = Vec::with_capacity(4 * d * d);
    for i in 0..d {
        for j in 0..d {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut x = BlochState::basis(d, i);
                let mut y = BlochState::basis(d, j);
                if si < 0.0 {
                    x = x.orthogonal();
                }
                if sj < 0.0 {
                    y = y.orthogonal();
                }
                grid.push(product_state(&x, &y).expect("same dimension"));
            }
        }
    }
    let sampled: Vec<TwoGbitState<f64>> = (0..random as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(seed, k);
            let x = random_pure_state(d, &mut rng);
            let y = random_pure_state(d, &mut rng);
            product_state(&x, &y).expect("same dimension")
        })
        .collect();
    let states: Vec<&TwoGbitState<f64>> = grid.iter().chain(sampled.iter()).collect();

    let member_flags: Vec<bool> = states
        .par_iter()
        .map(|s| in_s12(s, &basis, SUBSPACE_TOL))
        .collect();
    let near = |s: &TwoGbitState<f64>, k: usize| s.max_abs_diff(basis.psi(k)) <= 1e-6;
    let mut report = Lemma2Report {
        d,
        checked: states.len(),
        members: 0,
        psi1_member: false,
        psi2_member: false,
        violations: Vec::new(),
    };
    for (s, member) in states.iter().zip(member_flags) {
        if !member {
            continue;
        }
        report.members += 1;
        if near(s, 1) {
            report.psi1_member = true;
        } else if near(s, 2) {
            report.psi2_member = true;
        } else {
            report.violations.push((*s).clone());
        }
    }
    report
}

/// Verifies that a flip `R` with `R e1 = -e1` maps a state of `S12` into `S34`
/// on either side: both `(R, 1) psi` and `(1, R) psi` must land in `S34`.
pub fn lemma3_flip_maps_to_s34<T: Scalar>(psi: &TwoGbitState<T>, r: &OrthogonalMap<T>) -> Result<bool> {
    let d = psi.d();
    if r.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: r.d(),
        });
    }
    let tol = T::validity_tol();
    let m = r.matrix();
    let sends_e1_to_minus_e1 =
        (0..d).all(|i| abs(m[(i, 0)] + if i == 0 { T::one() } else { T::zero() }) <= tol);
    if !sends_e1_to_minus_e1 {
        return Err(Error::NotAFlip);
    }
    let basis = SubspaceBasis::standard(d);
    let member_tol = T::tol(SUBSPACE_TOL);
    if !in_s12(psi, &basis, member_tol) {
        return Err(Error::NotInS12);
    }
    let id = OrthogonalMap::identity(d);
    let left = local_transform(r, &id, psi)?;
    let right = local_transform(&id, r, psi)?;
    Ok(in_s34(&left, &basis, member_tol) && in_s34(&right, &basis, member_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn membership_examples() {
        let basis = SubspaceBasis::<f64>::standard(3);
        assert!(in_s12(basis.psi(1), &basis, SUBSPACE_TOL));
        assert!(in_s12(basis.psi(2), &basis, SUBSPACE_TOL));
        assert!(!in_s12(basis.psi(3), &basis, SUBSPACE_TOL));
        assert!(in_s34(basis.psi(3), &basis, SUBSPACE_TOL));
        assert!(in_s12(&TwoGbitState::psi_qm(), &basis, SUBSPACE_TOL));
        assert!(in_s12(&TwoGbitState::psi_mqm(), &basis, SUBSPACE_TOL));
        assert!(in_s34(&TwoGbitState::singlet(), &basis, SUBSPACE_TOL));
    }

    #[test]
    fn basis_states_are_mutually_distinguishable() {
        let basis = SubspaceBasis::<Rational64>::standard(4);
        for a in 1..=4 {
            for b in 1..=4 {
                let p = composite_prob(basis.psi(a), basis.psi(b)).unwrap();
                let expected = if a == b { 1 } else { 0 };
                assert_eq!(p, Rational64::from_integer(expected));
            }
        }
    }

    #[test]
    fn off_axis_product_misses_s12_by_half() {
        let basis = SubspaceBasis::<Rational64>::standard(3);
        let e2 = BlochState::basis(3, 1);
        let p = product_state(&e2, &e2).unwrap();
        let r = s12_residuals(&p, &basis).unwrap();
        // P1 + P2 = (1 + x1 y1) / 2 = 1/2
        assert_eq!(r[0] + Rational64::from_integer(1), Rational64::new(1, 2));
        assert!(!in_s12(&p, &basis, Rational64::new(1, 10_000_000)));
    }

    #[test]
    fn lemma2_scan() {
        let report = lemma2_product_states_in_s12(3, 10_000, 5);
        assert_eq!(report.checked, 36 + 10_000);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.members, 2);
        let report = lemma2_product_states_in_s12(5, 500, 6);
        assert!(report.passed());
    }

    #[test]
    fn lemma3_examples() {
        let basis = SubspaceBasis::<f64>::standard(3);
        let flip12 = OrthogonalMap::coordinate_flip(3, &[0, 1]);
        assert!(lemma3_flip_maps_to_s34(basis.psi(1), &flip12).unwrap());
        let id = OrthogonalMap::identity(3);
        let img = local_transform(&flip12, &id, basis.psi(1)).unwrap();
        assert_eq!(&img, basis.psi(3));

        let flip12_q = OrthogonalMap::<Rational64>::coordinate_flip(3, &[0, 1]);
        let psi = TwoGbitState::<Rational64>::psi_qm();
        assert!(lemma3_flip_maps_to_s34(&psi, &flip12_q).unwrap());
        let img = local_transform(&flip12_q, &OrthogonalMap::identity(3), &psi).unwrap();
        assert_eq!(
            img,
            TwoGbitState::correlated_diagonal(&[-1, 1, 1].map(Rational64::from_integer))
        );
    }

    #[test]
    fn lemma3_preconditions() {
        let basis = SubspaceBasis::<f64>::standard(3);
        let flip12 = OrthogonalMap::coordinate_flip(3, &[0, 1]);
        assert_eq!(
            lemma3_flip_maps_to_s34(basis.psi(3), &flip12),
            Err(Error::NotInS12)
        );
        let not_flip = OrthogonalMap::coordinate_flip(3, &[1, 2]);
        assert_eq!(
            lemma3_flip_maps_to_s34(basis.psi(1), &not_flip),
            Err(Error::NotAFlip)
        );
    }
}
