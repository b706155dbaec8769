//! State files: reading for `prob`, named presets for `export`.

use std::path::Path;

use gbit_core::composite::SubspaceBasis;
use gbit_core::mirror::{build_w_state, mirror_probe, mirror_w_marginals};
use gbit_core::{Bloch, TwoGbit};
use serde_json::Value;

pub enum StateFile {
    Single(Bloch),
    Pair(TwoGbit),
}

impl StateFile {
    pub fn d(&self) -> usize {
        match self {
            StateFile::Single(s) => s.d(),
            StateFile::Pair(s) => s.d(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Single(_) => "gbit",
            StateFile::Pair(_) => "two-gbit",
        }
    }
}

pub fn read_state(path: &Path) -> Result<StateFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let pair = value.get("T").is_some() || value.get("y").is_some();
    let parsed = if pair {
        serde_json::from_value(value).map(StateFile::Pair)
    } else {
        serde_json::from_value(value).map(StateFile::Single)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

pub const PRESETS: &[&str] = &[
    "psi1", "psi2", "psi3", "psi4", "psi-qm", "psi-mqm", "singlet", "mirror-probe", "w-13", "mirror-w-13", "e1",
];

/// Named state as a JSON value; `d` applies to the subspace basis and `e1`.
pub fn preset(name: &str, d: usize) -> Result<Value, String> {
    let to_json = |v: Result<Value, serde_json::Error>| v.map_err(|e| e.to_string());
    let basis = || SubspaceBasis::<f64>::standard(d);
    match name {
        "psi1" | "psi2" | "psi3" | "psi4" => {
            let k = name[3..].parse::<usize>().expect("preset index");
            to_json(serde_json::to_value(basis().psi(k)))
        }
        "psi-qm" => to_json(serde_json::to_value(TwoGbit::psi_qm())),
        "psi-mqm" => to_json(serde_json::to_value(TwoGbit::psi_mqm())),
        "singlet" => to_json(serde_json::to_value(TwoGbit::singlet())),
        "mirror-probe" => to_json(serde_json::to_value(mirror_probe::<f64>())),
        "w-13" => to_json(serde_json::to_value(build_w_state().marginals.pair(1, 3).map_err(|e| e.to_string())?)),
        "mirror-w-13" => to_json(serde_json::to_value(mirror_w_marginals().pair(1, 3).map_err(|e| e.to_string())?)),
        "e1" => to_json(serde_json::to_value(Bloch::basis(d, 0))),
        _ => Err(format!("unknown state '{name}'; known: {}", PRESETS.join(", "))),
    }
}
