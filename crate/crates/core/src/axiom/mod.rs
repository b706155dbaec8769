//! Executable forms of the two exclusion arguments: total inversion rules
//! out even `d`, and the flip constraints on the correlated subspace rule
//! out odd `d > 3`.

mod physicality;
mod search;

use rand::seq::index::sample;
use serde::Serialize;

use crate::composite::{composite_prob, local_transform, TwoGbitState};
use crate::error::{Error, Result};
use crate::gbit::OrthogonalMap;
use crate::linalg::norm_sq;
use crate::random::seeded_rng;
use crate::scalar::{abs, Scalar};

pub use physicality::{bell_states, check_physicality, effect_family, PhysicalityReport};
pub use search::{search_entangled_in_subspace, FeasibilityProblem, SearchConfig, SearchReport};

/// Largest `d` for which triple flips are enumerated exhaustively.
pub const EXHAUSTIVE_TRIPLES_MAX_D: usize = 7;

/// Coordinate sign flip through the correlation axis (index 0) and one or
/// three further axes. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipKind {
    Single(usize),
    Triple(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FlipGenerator {
    pub d: usize,
    pub kind: FlipKind,
}

impl FlipGenerator {
    pub fn single(d: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= d {
            return Err(Error::Malformed(format!("single flip axis {i} must lie in 1..{d}")));
        }
        Ok(Self { d, kind: FlipKind::Single(i) })
    }

    pub fn triple(d: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        if d < 4 {
            return Err(Error::UnsupportedDimension { d, reason: "triple flips need d >= 4" });
        }
        let mut idx = [j, k, l];
        idx.sort_unstable();
        if idx[0] == 0 || idx[2] >= d || idx[0] == idx[1] || idx[1] == idx[2] {
            return Err(Error::Malformed(format!(
                "triple flip axes {j}, {k}, {l} must be distinct and lie in 1..{d}"
            )));
        }
        Ok(Self { d, kind: FlipKind::Triple(idx[0], idx[1], idx[2]) })
    }

    /// Flipped coordinates, always starting with 0.
    pub fn coordinates(&self) -> Vec<usize> {
        match self.kind {
            FlipKind::Single(i) => vec![0, i],
            FlipKind::Triple(j, k, l) => vec![0, j, k, l],
        }
    }

    pub fn map<T: Scalar>(&self) -> OrthogonalMap<T> {
        OrthogonalMap::coordinate_flip(self.d, &self.coordinates())
    }

    pub fn is_triple(&self) -> bool {
        matches!(self.kind, FlipKind::Triple(..))
    }
}

pub fn single_flips(d: usize) -> Vec<FlipGenerator> {
    (1..d).map(|i| FlipGenerator { d, kind: FlipKind::Single(i) }).collect()
}

pub fn all_triple_flips(d: usize) -> Vec<FlipGenerator> {
    let mut out = Vec::new();
    for j in 1..d {
        for k in j + 1..d {
            for l in k + 1..d {
                out.push(FlipGenerator { d, kind: FlipKind::Triple(j, k, l) });
            }
        }
    }
    out
}

/// All triples for `d <= 7`; otherwise `cap` of them drawn without
/// replacement (sorted). The flag reports whether the set was capped.
pub fn triple_flips(d: usize, cap: usize, seed: u64) -> (Vec<FlipGenerator>, bool) {
    let all = all_triple_flips(d);
    if d <= EXHAUSTIVE_TRIPLES_MAX_D || all.len() <= cap {
        return (all, false);
    }
    let mut rng = seeded_rng(seed, u64::MAX);
    let mut picked: Vec<usize> = sample(&mut rng, all.len(), cap).into_vec();
    picked.sort_unstable();
    (picked.into_iter().map(|i| all[i]).collect(), true)
}

/// Residual of one flip condition on both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlipResidual<T> {
    pub generator: FlipGenerator,
    /// `sum over flipped r of (x_r^2 + |row r of T|^2) - 2`.
    pub x_side: T,
    /// Same with `y` and the columns of `T`.
    pub y_side: T,
}

fn row_weight<T: Scalar>(psi: &TwoGbitState<T>, r: usize) -> T {
    psi.x()[r] * psi.x()[r] + psi.t().row(r).iter().fold(T::zero(), |a, v| a + *v * *v)
}

fn column_weight<T: Scalar>(psi: &TwoGbitState<T>, c: usize) -> T {
    psi.y()[c] * psi.y()[c] + psi.t().column(c).iter().fold(T::zero(), |a, v| a + *v * *v)
}

pub fn flip_residuals_for<T: Scalar>(psi: &TwoGbitState<T>, generators: &[FlipGenerator]) -> Result<Vec<FlipResidual<T>>> {
    let d = psi.d();
    if d < 3 {
        return Err(Error::UnsupportedDimension { d, reason: "flip conditions need d >= 3" });
    }
    generators
        .iter()
        .map(|g| {
            if g.d != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.d });
            }
            let coords = g.coordinates();
            let x_side = coords.iter().fold(T::zero(), |a, &r| a + row_weight(psi, r)) - T::two();
            let y_side = coords.iter().fold(T::zero(), |a, &c| a + column_weight(psi, c)) - T::two();
            Ok(FlipResidual { generator: *g, x_side, y_side })
        })
        .collect()
}

/// Residuals for every single flip and, for `d >= 4`, every triple flip.
pub fn flip_constraints<T: Scalar>(psi: &TwoGbitState<T>) -> Result<Vec<FlipResidual<T>>> {
    let d = psi.d();
    let mut gens = single_flips(d);
    gens.extend(all_triple_flips(d));
    flip_residuals_for(psi, &gens)
}

/// Outcome of confronting a pure state with the total inversion `E = -1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport<T> {
    pub d: usize,
    /// `det E = (-1)^d`; `E` is a rotation only for even `d`.
    pub inversion_is_rotation: bool,
    /// `P(psi, (E,1) psi)`, evaluated directly.
    pub p_left: T,
    /// `P(psi, (1,E) psi)`, evaluated directly.
    pub p_right: T,
    /// `(|y|^2 - 1) / 2`.
    pub formula_left: T,
    /// `(|x|^2 - 1) / 2`.
    pub formula_right: T,
    pub entangled: bool,
    /// Some probability is negative, so `E` cannot be a valid local operation.
    pub contradiction: bool,
}

pub fn inversion_entanglement_contradiction<T: Scalar>(psi: &TwoGbitState<T>) -> Result<InversionReport<T>> {
    let d = psi.d();
    let tol = T::validity_tol();
    let n = psi.normalization();
    if abs(n - T::from_int(3)) > tol {
        return Err(Error::NotPureState { normalization: n.as_f64() });
    }
    let e = OrthogonalMap::total_inversion(d);
    let id = OrthogonalMap::identity(d);
    let p_left = composite_prob(psi, &local_transform(&e, &id, psi)?)?;
    let p_right = composite_prob(psi, &local_transform(&id, &e, psi)?)?;
    Ok(InversionReport {
        d,
        inversion_is_rotation: d.is_multiple_of(2),
        p_left,
        p_right,
        formula_left: T::half() * (norm_sq(psi.y()) - T::one()),
        formula_right: T::half() * (norm_sq(psi.x()) - T::one()),
        entangled: !psi.is_product(tol),
        contradiction: p_left < -tol || p_right < -tol,
    })
}

/// `(0, 0, diag[1, -1, 1, 0, ..., 0])`: the quantum maximally entangled
/// state placed in the first three axes of a `d >= 3` gbit pair.
pub fn embedded_maximally_entangled<T: Scalar>(d: usize) -> Result<TwoGbitState<T>> {
    if d < 3 {
        return Err(Error::UnsupportedDimension { d, reason: "embedding needs d >= 3" });
    }
    let mut diag = vec![T::zero(); d];
    diag[0] = T::one();
    diag[1] = -T::one();
    diag[2] = T::one();
    Ok(TwoGbitState::correlated_diagonal(&diag))
}

pub(crate) fn flip_sign_vector(d: usize, g: &FlipGenerator) -> Vec<f64> {
    let mut s = vec![1.0; d];
    for r in g.coordinates() {
        s[r] = -1.0;
    }
    s
}
