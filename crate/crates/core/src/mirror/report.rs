//! Full mirror pipeline with golden-value comparison.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{
    bell_correlation_tables, build_w_state, mirror_probe, mirror_w_inconsistency_exact, mirror_w_marginals,
    BellTables, ThreeGbitMarginals,
};
use crate::composite::composite_prob;
use crate::linalg::max_abs_diff;

const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MirrorReport {
    pub bell_tables: BellTables,
    pub w_marginals: ThreeGbitMarginals<f64>,
    pub mirror_w_marginals: ThreeGbitMarginals<f64>,
    /// `P((0,0,diag[-1,-1,1]), psi13)` on the mirror W state.
    pub overlap: f64,
    /// The same overlap in exact arithmetic, as a fraction.
    pub overlap_exact: String,
    /// Mismatches against the reference values; empty on success.
    pub deviations: Vec<String>,
}

impl MirrorReport {
    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }
}

fn diag(v: [f64; 3]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(&v))
}

fn compare_marginals(label: &str, m: &ThreeGbitMarginals<f64>, t12: [f64; 3], t13: [f64; 3], t23: [f64; 3], out: &mut Vec<String>) {
    let local = DVector::from_vec(vec![0.0, 0.0, 1.0 / 3.0]);
    for (name, v) in [("x", &m.x), ("y", &m.y), ("z", &m.z)] {
        let dev = (v - &local).amax();
        if dev > GOLDEN_TOL {
            out.push(format!("{label} {name}: deviation {dev:.3e} from (0, 0, 1/3)"));
        }
    }
    for (name, t, want) in [("T12", &m.t12, t12), ("T13", &m.t13, t13), ("T23", &m.t23, t23)] {
        let dev = max_abs_diff(t, &diag(want));
        if dev > GOLDEN_TOL {
            out.push(format!("{label} {name}: deviation {dev:.3e} from diag{want:?}"));
        }
    }
}

/// Runs the pipeline and checks it against the reference values. With
/// `inject_sign_error` the sign of `T13[0][0]` of the mirror W state is
/// flipped first, which must be caught.
pub fn mirror_report(inject_sign_error: bool) -> MirrorReport {
    let w = build_w_state().marginals;
    let mut mw = mirror_w_marginals();
    if inject_sign_error {
        mw.t13[(0, 0)] = -mw.t13[(0, 0)];
    }
    let psi13 = mw.pair(1, 3).expect("valid reduction");
    let overlap = composite_prob(&mirror_probe(), &psi13).expect("d = 3");
    let exact = mirror_w_inconsistency_exact();
    let tables = bell_correlation_tables();

    let mut deviations = Vec::new();
    let (a, b, c) = (2.0 / 3.0, -2.0 / 3.0, -1.0 / 3.0);
    compare_marginals("W", &w, [a, a, c], [a, a, c], [a, a, c], &mut deviations);
    compare_marginals("mirror W", &mw, [a, b, c], [a, a, c], [a, b, c], &mut deviations);
    if (overlap + 1.0 / 6.0).abs() > GOLDEN_TOL {
        deviations.push(format!("overlap {overlap} differs from -1/6"));
    }
    if exact != num_rational::Rational64::new(-1, 6) {
        deviations.push(format!("exact overlap {exact} differs from -1/6"));
    }
    let standard: Vec<[i8; 3]> = tables.standard.iter().map(|r| r.signs).collect();
    let mirror: Vec<[i8; 3]> = tables.mirror.iter().map(|r| r.signs).collect();
    if standard != [[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]] {
        deviations.push(format!("standard Bell signs {standard:?}"));
    }
    if mirror != [[1, 1, 1], [-1, -1, 1], [1, -1, -1], [-1, 1, -1]] {
        deviations.push(format!("mirror Bell signs {mirror:?}"));
    }

    MirrorReport {
        bell_tables: tables,
        w_marginals: w,
        mirror_w_marginals: mw,
        overlap,
        overlap_exact: exact.to_string(),
        deviations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let r = mirror_report(false);
        assert!(r.passed(), "{:?}", r.deviations);
        assert_eq!(r.overlap_exact, "-1/6");
    }

    #[test]
    fn injected_sign_error_is_caught() {
        let r = mirror_report(true);
        assert!(!r.passed());
        assert!(r.deviations.iter().any(|d| d.contains("T13")));
        assert!((r.overlap - 1.0 / 6.0).abs() < 1e-12);
    }
}
