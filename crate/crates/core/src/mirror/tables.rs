//! Correlation sign tables of the Bell states and their mirror images.

use std::fmt::Write;

use nalgebra::DMatrix;
use num_rational::Rational64;
use serde::Serialize;

use crate::linalg::creal;
use crate::quantum::{bloch_from_density, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BellRow {
    pub state: String,
    /// Signs of `T_xx`, `T_yy`, `T_zz`.
    pub signs: [i8; 3],
}

impl BellRow {
    pub fn sign_product(&self) -> i8 {
        self.signs.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BellTables {
    pub standard: Vec<BellRow>,
    pub mirror: Vec<BellRow>,
}

/// `|a> + s|b>` projector over `sqrt 2` normalization, exact.
fn bell_density(a: usize, b: usize, s: i64) -> DensityMatrix<Rational64> {
    let h = Rational64::new(1, 2);
    let mut m = DMatrix::from_element(4, 4, creal(Rational64::from_integer(0)));
    m[(a, a)] = creal(h);
    m[(b, b)] = creal(h);
    m[(a, b)] = creal(h * s);
    m[(b, a)] = creal(h * s);
    DensityMatrix::new(m).expect("projector")
}

fn row(name: &str, rho: &DensityMatrix<Rational64>) -> BellRow {
    let psi = bloch_from_density(rho).expect("two qubits");
    let sign = |v: Rational64| -> i8 {
        if v > Rational64::from_integer(0) {
            1
        } else if v < Rational64::from_integer(0) {
            -1
        } else {
            0
        }
    };
    BellRow {
        state: name.to_string(),
        signs: [0, 1, 2].map(|k| sign(psi.t()[(k, k)])),
    }
}

/// Computed exactly from the Bell projectors and their transposes on
/// subsystem 1.
pub fn bell_correlation_tables() -> BellTables {
    let states = [
        ("phi+", bell_density(0, 3, 1)),
        ("phi-", bell_density(0, 3, -1)),
        ("psi+", bell_density(1, 2, 1)),
        ("psi-", bell_density(1, 2, -1)),
    ];
    BellTables {
        standard: states.iter().map(|(n, rho)| row(n, rho)).collect(),
        mirror: states
            .iter()
            .map(|(n, rho)| row(n, &rho.partial_transpose(1).expect("two qubits")))
            .collect(),
    }
}

impl BellTables {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (title, rows) in [("quantum mechanics", &self.standard), ("mirror quantum mechanics", &self.mirror)] {
            writeln!(out, "{title}").unwrap();
            writeln!(out, "  state    x   y   z").unwrap();
            for r in rows.iter() {
                write!(out, "  {:<6}", r.state).unwrap();
                for s in r.signs {
                    write!(out, "  {}", if s > 0 { "+1" } else { "-1" }).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}
