//! Acceptance run: every criterion at its stated tolerance and time budget.
//! Prints one `[PASS]`/`[FAIL]` line per criterion and exits non-zero if any fail.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gbit_core::axiom::inversion_entanglement_contradiction;
use gbit_core::composite::{composite_prob, local_transform, product_state};
use gbit_core::gbit::{axiom1_decomposable, ConvexStateSpace};
use gbit_core::linalg::CVector;
use gbit_core::mirror::{bell_correlation_tables, build_w_state, mirror_w_inconsistency, mirror_w_marginals};
use gbit_core::quantum::{bloch_from_state_vector, lemma4_deviation, schmidt_circle, su2_to_so3, UnitaryMap};
use gbit_core::random::{random_operator, random_orthogonal, random_pure_state, random_state_vector, random_unitary, seeded_rng};
use gbit_core::TwoGbit;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde_json::Value;

const SEED: u64 = 20_241;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run(n: usize, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(d) => (false, d),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] criterion {n:>2} {title}: {detail} ({:.2} s, budget {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

fn diag_err(m: &DMatrix<f64>, want: [f64; 3]) -> f64 {
    let mut err = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let w = if i == j { want[i] } else { 0.0 };
            err = err.max((m[(i, j)] - w).abs());
        }
    }
    err
}

fn vec_err(v: &DVector<f64>, want: [f64; 3]) -> f64 {
    v.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// `|<a|b>|^2` written out by hand.
fn overlap_sq(a: &CVector<f64>, b: &CVector<f64>) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    re * re + im * im
}

fn c1() -> Outcome {
    let p = mirror_w_inconsistency();
    ensure((p + 1.0 / 6.0).abs() < 1e-12, format!("P = {p:.15}"))
}

fn c2() -> Outcome {
    let (two, third) = (2.0 / 3.0, 1.0 / 3.0);
    let w = build_w_state().marginals;
    let m = mirror_w_marginals();
    let local = [0.0, 0.0, third];
    let plain = [two, two, -third];
    let mirrored = [two, -two, -third];
    let errs = [
        vec_err(&w.x, local),
        vec_err(&w.y, local),
        vec_err(&w.z, local),
        diag_err(&w.t12, plain),
        diag_err(&w.t13, plain),
        diag_err(&w.t23, plain),
        diag_err(&m.t12, mirrored),
        diag_err(&m.t23, mirrored),
        diag_err(&m.t13, plain),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    ensure(worst < 1e-12, format!("max deviation {worst:.2e}"))
}

fn c3() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let mut rng = seeded_rng(SEED, k);
        let psi = bloch_from_state_vector(&random_state_vector(4, &mut rng)).map_err(|e| e.to_string())?;
        let n: f64 = psi.x().norm_squared() + psi.y().norm_squared() + psi.t().norm_squared();
        worst = worst.max((n - 3.0).abs());
    }
    ensure(worst < 1e-9, format!("max |N - 3| = {worst:.2e} over 10^4 states"))
}

fn c4() -> Outcome {
    let mut product_dev = 0.0f64;
    let mut entangled_min = f64::INFINITY;
    for k in 0..10_000 {
        let mut rng = seeded_rng(SEED + 1, k);
        let p = product_state(&random_pure_state(3, &mut rng), &random_pure_state(3, &mut rng)).map_err(|e| e.to_string())?;
        product_dev = product_dev.max((p.t().norm() - 1.0).abs());

        let a = rng.random_range(0.01..PI - 0.01);
        let r1 = random_orthogonal(3, &mut rng);
        let r2 = random_orthogonal(3, &mut rng);
        let psi = local_transform(&r1, &r2, &schmidt_circle(a).bloch).map_err(|e| e.to_string())?;
        entangled_min = entangled_min.min(psi.t().norm());
    }
    ensure(
        product_dev < 1e-12 && entangled_min > 1.0 + 1e-6,
        format!("products max ||T|-1| = {product_dev:.2e}; entangled min |T| = {entangled_min:.9}"),
    )
}

fn c5() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let mut rng = seeded_rng(SEED + 2, k);
        let (a, b) = (random_state_vector(4, &mut rng), random_state_vector(4, &mut rng));
        let pa = bloch_from_state_vector(&a).map_err(|e| e.to_string())?;
        let pb = bloch_from_state_vector(&b).map_err(|e| e.to_string())?;
        let p = composite_prob(&pa, &pb).map_err(|e| e.to_string())?;
        worst = worst.max((p - overlap_sq(&a, &b)).abs());
    }
    ensure(worst < 1e-12, format!("max deviation {worst:.2e} over 10^4 pairs"))
}

fn c6() -> Outcome {
    let mut rng = seeded_rng(SEED + 3, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let u = UnitaryMap::new(random_unitary(4, &mut rng)).map_err(|e| e.to_string())?;
        let ops: Vec<_> = (0..10).map(|_| random_operator(4, &mut rng)).collect();
        worst = worst.max(lemma4_deviation(&u, &ops).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-12, format!("max deviation {worst:.2e} over 100 x 10"))
}

fn dcheck(d: usize) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gbit"))
        .args(["--format", "json", "dcheck", "--d", &d.to_string(), "--restarts", "50", "--seed", "0"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("gbit dcheck exited with {}", out.status));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn c7(d: usize) -> Outcome {
    let report = dcheck(d)?;
    let norm = report["max_T_norm"].as_f64().ok_or("missing max_T_norm")?;
    let residual = report["residual"].as_f64().ok_or("missing residual")?;
    let restarts = report["restarts"].as_u64().ok_or("missing restarts")?;
    let detail = format!("d={d}: max |T| = {norm:.9}, residual {residual:.2e}, {restarts} restarts");
    let ok = if d == 3 {
        (norm - 3f64.sqrt()).abs() < 1e-3
    } else {
        (norm - 1.0).abs() < 1e-3 && residual < 1e-6
    };
    ensure(ok && restarts >= 50, detail)
}

fn c8() -> Outcome {
    let mut worst = 0.0f64;
    let mut max_p = f64::NEG_INFINITY;
    for k in 0..100 {
        let mut rng = seeded_rng(SEED + 4, k);
        let psi: TwoGbit = bloch_from_state_vector(&random_state_vector(4, &mut rng)).map_err(|e| e.to_string())?;
        if psi.t().norm() <= 1.0 + 1e-6 {
            return Err(format!("sample {k} is not entangled"));
        }
        let r = inversion_entanglement_contradiction(&psi).map_err(|e| e.to_string())?;
        let formula = 0.5 * (psi.y().norm_squared() - 1.0);
        worst = worst.max((r.p_left - formula).abs());
        max_p = max_p.max(r.p_left);
    }
    ensure(
        worst < 1e-12 && max_p < 0.0,
        format!("formula deviation {worst:.2e}; largest P = {max_p:.4}"),
    )
}

fn c9() -> Outcome {
    let mut rng = seeded_rng(SEED + 5, 0);
    let (mut homo, mut so3) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let u1 = UnitaryMap::new(random_unitary(2, &mut rng)).map_err(|e| e.to_string())?;
        let u2 = UnitaryMap::new(random_unitary(2, &mut rng)).map_err(|e| e.to_string())?;
        let r = |u: &UnitaryMap<f64>| su2_to_so3(u).map(|m| m.matrix().clone()).map_err(|e| e.to_string());
        let (r1, r2, r12) = (r(&u1)?, r(&u2)?, r(&u1.compose(&u2))?);
        homo = homo.max((r12 - &r1 * &r2).amax());
        for m in [&r1, &r2] {
            let gram = m.transpose() * m - DMatrix::<f64>::identity(3, 3);
            so3 = so3.max(gram.amax()).max((m.determinant() - 1.0).abs());
        }
    }
    ensure(
        homo < 1e-12 && so3 < 1e-12,
        format!("homomorphism deviation {homo:.2e}; SO(3) deviation {so3:.2e}"),
    )
}

fn c10() -> Outcome {
    let tables = bell_correlation_tables();
    let row = |rows: &[gbit_core::mirror::BellRow], name: &str| {
        rows.iter().find(|r| r.state == name).map(|r| r.signs).ok_or(format!("no row {name}"))
    };
    let ok = tables.standard.len() == 4
        && tables.mirror.len() == 4
        && tables.standard.iter().all(|r| r.signs.iter().map(|&s| s as i32).product::<i32>() == -1)
        && tables.mirror.iter().all(|r| r.signs.iter().map(|&s| s as i32).product::<i32>() == 1)
        && row(&tables.standard, "phi+")? == [1, -1, 1]
        && row(&tables.mirror, "phi+")? == [1, 1, 1]
        && row(&tables.standard, "psi-")? == [-1, -1, -1];
    ensure(ok, "sign products -1 / +1; phi+ (1,-1,1), mirror phi+ (1,1,1), singlet (-1,-1,-1)".into())
}

fn c11() -> Outcome {
    let square = ConvexStateSpace::<f64>::square();
    let square_fails = matches!(axiom1_decomposable(&square, [0.5, 0.5], 1e-9), Ok(None));
    let disc = ConvexStateSpace::<f64>::unit_disc();
    let mut decomposed = 0;
    for k in 0..1000 {
        let mut rng = seeded_rng(SEED + 6, k);
        let r = rng.random::<f64>().sqrt() * 0.999;
        let a = rng.random_range(0.0..2.0 * PI);
        if let Ok(Some(_)) = axiom1_decomposable(&disc, [r * a.cos(), r * a.sin()], 1e-9) {
            decomposed += 1;
        }
    }
    ensure(
        square_fails && decomposed == 1000,
        format!("square midpoint decomposable: {}; disc {decomposed}/1000", !square_fails),
    )
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        run(1, "mirror-W negative probability", s(1), c1),
        run(2, "W and mirror-W marginals", s(1), c2),
        run(3, "normalization identity", s(5), c3),
        run(4, "entanglement witness", s(10), c4),
        run(5, "oracle equivalence", s(10), c5),
        run(6, "partial transpose conjugation identity", s(5), c6),
        run(7, "dimension exclusion search, d=3", s(300), || c7(3)),
        run(7, "dimension exclusion search, d=5", s(300), || c7(5)),
        run(7, "dimension exclusion search, d=7", s(300), || c7(7)),
        run(8, "even-d inversion contradiction", s(1), c8),
        run(9, "SU(2) to SO(3) homomorphism", s(1), c9),
        run(10, "Bell correlation sign tables", s(1), c10),
        run(11, "toy-world decomposability", s(1), c11),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} checks, {failed} failed", results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
