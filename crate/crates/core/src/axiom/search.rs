//! Multi-start quadratic-penalty search for entangled states that satisfy
//! the flip conditions inside the correlated subspace.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{flip_sign_vector, single_flips, triple_flips, FlipGenerator};
use crate::composite::TwoGbitState;
use crate::error::{Error, Result};
use crate::random::{gaussian_vector, seeded_rng};

/// Margin above `|T| = 1` that counts as an entangled optimum.
const ENTANGLED_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub outer_rounds: usize,
    pub initial_penalty: f64,
    pub inner_iterations: usize,
    /// Number of triple flips sampled when `d` is too large to enumerate them.
    pub triple_cap: usize,
    /// Also require `P(psi, a x b) >= 0` for all pure product effects.
    pub enforce_positivity: bool,
    pub feasibility_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 0,
            outer_rounds: 20,
            initial_penalty: 10.0,
            inner_iterations: 250,
            triple_cap: 200,
            enforce_positivity: true,
            feasibility_tol: 1e-6,
        }
    }
}

/// Constraint system over the flattened variables `(x, y, T)` (row-major `T`).
///
/// Equalities, in order: `P(psi, psi3)`, `P(psi, psi4)`, `N - 3`, then for
/// each generator `R` the pair `P(psi, (R,1) psi)`, `P(psi, (1,R) psi)`.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    pub d: usize,
    pub generators: Vec<FlipGenerator>,
    pub triples_capped: bool,
    pub enforce_positivity: bool,
    signs: Vec<Vec<f64>>,
}

/// Minimum over pure product effects, with its minimizer.
struct ProductMinimum {
    value: f64,
    u: DVector<f64>,
    v: DVector<f64>,
}

impl FeasibilityProblem {
    pub fn new(d: usize, config: &SearchConfig) -> Result<Self> {
        if d < 3 {
            return Err(Error::UnsupportedDimension { d, reason: "the search needs d >= 3" });
        }
        if d.is_multiple_of(2) {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "even d is already excluded by the total inversion",
            });
        }
        let mut generators = single_flips(d);
        let (triples, triples_capped) = triple_flips(d, config.triple_cap, config.seed);
        generators.extend(triples);
        let signs = generators.iter().map(|g| flip_sign_vector(d, g)).collect();
        Ok(Self {
            d,
            generators,
            triples_capped,
            enforce_positivity: config.enforce_positivity,
            signs,
        })
    }

    pub fn variable_count(&self) -> usize {
        2 * self.d + self.d * self.d
    }

    pub fn constraint_count(&self) -> usize {
        3 + 2 * self.generators.len()
    }

    pub fn single_count(&self) -> usize {
        self.generators.iter().filter(|g| !g.is_triple()).count()
    }

    pub fn triple_count(&self) -> usize {
        self.generators.len() - self.single_count()
    }

    fn t_index(&self, r: usize, c: usize) -> usize {
        2 * self.d + r * self.d + c
    }

    pub fn flatten(&self, psi: &TwoGbitState<f64>) -> DVector<f64> {
        let d = self.d;
        let mut z = DVector::zeros(self.variable_count());
        for i in 0..d {
            z[i] = psi.x()[i];
            z[d + i] = psi.y()[i];
            for j in 0..d {
                z[self.t_index(i, j)] = psi.t()[(i, j)];
            }
        }
        z
    }

    pub fn state(&self, z: &DVector<f64>) -> TwoGbitState<f64> {
        let d = self.d;
        TwoGbitState::from_raw(
            z.rows(0, d).into_owned(),
            z.rows(d, d).into_owned(),
            DMatrix::from_fn(d, d, |r, c| z[self.t_index(r, c)]),
        )
    }

    fn row_sq(&self, z: &DVector<f64>, r: usize) -> f64 {
        (0..self.d).map(|c| z[self.t_index(r, c)].powi(2)).sum()
    }

    fn col_sq(&self, z: &DVector<f64>, c: usize) -> f64 {
        (0..self.d).map(|r| z[self.t_index(r, c)].powi(2)).sum()
    }

    pub fn equalities(&self, z: &DVector<f64>) -> DVector<f64> {
        let d = self.d;
        let (x1, y1, t11) = (z[0], z[d], z[self.t_index(0, 0)]);
        let mut c = Vec::with_capacity(self.constraint_count());
        c.push(0.25 * (1.0 - x1 + y1 - t11));
        c.push(0.25 * (1.0 + x1 - y1 - t11));
        let n = z.norm_squared();
        c.push(n - 3.0);
        let xx: Vec<f64> = (0..d).map(|i| z[i] * z[i]).collect();
        let yy: Vec<f64> = (0..d).map(|i| z[d + i] * z[d + i]).collect();
        let rows: Vec<f64> = (0..d).map(|r| self.row_sq(z, r)).collect();
        let cols: Vec<f64> = (0..d).map(|c| self.col_sq(z, c)).collect();
        let sx: f64 = xx.iter().sum();
        let sy: f64 = yy.iter().sum();
        for s in &self.signs {
            let left: f64 = (0..d).map(|r| s[r] * (xx[r] + rows[r])).sum();
            let right: f64 = (0..d).map(|k| s[k] * (yy[k] + cols[k])).sum();
            c.push(0.25 * (1.0 + left + sy));
            c.push(0.25 * (1.0 + sx + right));
        }
        DVector::from_vec(c)
    }

    pub fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let d = self.d;
        let mut j = DMatrix::zeros(self.constraint_count(), self.variable_count());
        let t11 = self.t_index(0, 0);
        j[(0, 0)] = -0.25;
        j[(0, d)] = 0.25;
        j[(0, t11)] = -0.25;
        j[(1, 0)] = 0.25;
        j[(1, d)] = -0.25;
        j[(1, t11)] = -0.25;
        for k in 0..self.variable_count() {
            j[(2, k)] = 2.0 * z[k];
        }
        for (g, s) in self.signs.iter().enumerate() {
            let (left, right) = (3 + 2 * g, 4 + 2 * g);
            for i in 0..d {
                j[(left, i)] = 0.5 * s[i] * z[i];
                j[(left, d + i)] = 0.5 * z[d + i];
                j[(right, i)] = 0.5 * z[i];
                j[(right, d + i)] = 0.5 * s[i] * z[d + i];
            }
            for r in 0..d {
                for c in 0..d {
                    let k = self.t_index(r, c);
                    j[(left, k)] = 0.5 * s[r] * z[k];
                    j[(right, k)] = 0.5 * s[c] * z[k];
                }
            }
        }
        j
    }

    /// `min over unit u, v of (1 + u.x + v.y + u^T T v) / 4`, by alternating
    /// exact minimization from several starts.
    fn product_minimum(&self, z: &DVector<f64>) -> ProductMinimum {
        let d = self.d;
        let x = z.rows(0, d).into_owned();
        let y = z.rows(d, d).into_owned();
        let t = DMatrix::from_fn(d, d, |r, c| z[self.t_index(r, c)]);
        let unit = |v: DVector<f64>, fallback: &DVector<f64>| {
            let n = v.norm();
            if n > 1e-14 {
                v / n
            } else {
                fallback.clone()
            }
        };
        let e1 = DVector::from_fn(d, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let svd = t.clone().svd(true, true);
        let (uu, vt) = (svd.u.expect("left vectors"), svd.v_t.expect("right vectors"));
        let mut starts = vec![(unit(-&x, &e1), unit(-&y, &e1))];
        for k in 0..d.min(2) {
            let u = uu.column(k).into_owned();
            let v = vt.row(k).transpose();
            starts.push((u.clone(), -&v));
            starts.push((-u, v));
        }
        let value = |u: &DVector<f64>, v: &DVector<f64>| 0.25 * (1.0 + u.dot(&x) + v.dot(&y) + u.dot(&(&t * v)));
        let mut best: Option<ProductMinimum> = None;
        for (mut u, mut v) in starts {
            let mut current = value(&u, &v);
            for _ in 0..200 {
                v = unit(-(&y + t.tr_mul(&u)), &v);
                u = unit(-(&x + &t * &v), &u);
                let next = value(&u, &v);
                let done = current - next < 1e-15;
                current = next;
                if done {
                    break;
                }
            }
            if best.as_ref().is_none_or(|b| current < b.value) {
                best = Some(ProductMinimum { value: current, u, v });
            }
        }
        best.expect("at least one start")
    }

    fn positivity_violation(&self, z: &DVector<f64>) -> (f64, Option<ProductMinimum>) {
        if !self.enforce_positivity {
            return (0.0, None);
        }
        let m = self.product_minimum(z);
        ((-m.value).max(0.0), Some(m))
    }

    fn positivity_gradient(&self, m: &ProductMinimum) -> DVector<f64> {
        let d = self.d;
        let mut g = DVector::zeros(self.variable_count());
        for i in 0..d {
            g[i] = 0.25 * m.u[i];
            g[d + i] = 0.25 * m.v[i];
            for j in 0..d {
                g[self.t_index(i, j)] = 0.25 * m.u[i] * m.v[j];
            }
        }
        g
    }

    /// Largest equality violation, or positivity violation if larger.
    pub fn residual(&self, z: &DVector<f64>) -> f64 {
        let eq = self.equalities(z).amax();
        eq.max(self.positivity_violation(z).0)
    }

    fn objective(&self, z: &DVector<f64>) -> f64 {
        (2 * self.d..self.variable_count()).map(|k| z[k] * z[k]).sum()
    }

    /// `-|T|^2 + mu (sum c_i^2 + max(0, -p_min)^2)` and its gradient.
    fn penalized(&self, z: &DVector<f64>, mu: f64, positivity: bool) -> (f64, DVector<f64>) {
        let c = self.equalities(z);
        let j = self.jacobian(z);
        let mut grad = j.tr_mul(&c) * (2.0 * mu);
        for k in 2 * self.d..self.variable_count() {
            grad[k] -= 2.0 * z[k];
        }
        let mut value = -self.objective(z) + mu * c.norm_squared();
        if !positivity {
            return (value, grad);
        }
        if let (viol, Some(m)) = self.positivity_violation(z) {
            if viol > 0.0 {
                value += mu * viol * viol;
                grad -= self.positivity_gradient(&m) * (2.0 * mu * viol);
            }
        }
        (value, grad)
    }

    /// Gradient descent on the penalized objective with Armijo backtracking;
    /// trial steps start from the Barzilai-Borwein estimate. The positivity
    /// term joins in the second half of the rounds, once the equalities are
    /// nearly met.
    fn descend(&self, mut z: DVector<f64>, config: &SearchConfig) -> DVector<f64> {
        let mut mu = config.initial_penalty;
        for round in 0..config.outer_rounds {
            let positivity = 2 * round >= config.outer_rounds;
            let (mut f, mut g) = self.penalized(&z, mu, positivity);
            let mut alpha0 = 1.0 / (1.0 + mu);
            for _ in 0..config.inner_iterations {
                let gg = g.norm_squared();
                if gg < 1e-24 {
                    break;
                }
                let mut alpha = alpha0;
                let mut next = None;
                while alpha > 1e-18 {
                    let trial = &z - &g * alpha;
                    let (ft, gt) = self.penalized(&trial, mu, positivity);
                    if ft <= f - 1e-4 * alpha * gg {
                        next = Some((trial, ft, gt));
                        break;
                    }
                    alpha *= 0.5;
                }
                let Some((trial, ft, gt)) = next else {
                    break;
                };
                let s_k = &trial - &z;
                let y_k = &gt - &g;
                let sy = s_k.dot(&y_k);
                alpha0 = if sy > 0.0 { s_k.norm_squared() / sy } else { 2.0 * alpha };
                z = trial;
                f = ft;
                g = gt;
            }
            mu *= 2.0;
        }
        z
    }

    /// Equality residuals and Jacobian, plus the positivity row when the
    /// product-effect minimum is below `active`.
    fn active_system(&self, z: &DVector<f64>, active: f64) -> (DVector<f64>, DMatrix<f64>) {
        let mut c = self.equalities(z);
        let mut j = self.jacobian(z);
        if self.enforce_positivity {
            let m = self.product_minimum(z);
            if m.value < active {
                let rows = c.len();
                c = c.push(m.value.min(0.0));
                j = j.insert_row(rows, 0.0);
                j.row_mut(rows).copy_from(&self.positivity_gradient(&m).transpose());
            }
        }
        (c, j)
    }

    /// Gauss-Newton projection onto the constraint set (minimum-norm steps).
    fn polish(&self, mut z: DVector<f64>) -> DVector<f64> {
        for _ in 0..50 {
            let (c, j) = self.active_system(&z, 0.0);
            if c.amax() < 1e-14 {
                break;
            }
            let Ok(delta) = j.svd(true, true).solve(&c, 1e-12) else {
                break;
            };
            z -= delta;
        }
        z
    }

    /// Projected gradient ascent of `|T|^2` along the constraint set, each
    /// step followed by a projection back onto it.
    fn refine(&self, mut z: DVector<f64>, tol: f64) -> DVector<f64> {
        z = self.polish(z);
        if self.residual(&z) >= tol {
            return z;
        }
        let mut step = 0.1;
        for _ in 0..200 {
            let (_, j) = self.active_system(&z, 1e-9);
            let mut g = DVector::zeros(self.variable_count());
            for k in 2 * self.d..self.variable_count() {
                g[k] = 2.0 * z[k];
            }
            let Ok(normal) = j.clone().svd(true, true).solve(&(&j * &g), 1e-10) else {
                break;
            };
            let tangent = &g - normal;
            if tangent.norm() < 1e-12 {
                break;
            }
            let current = self.objective(&z);
            let mut accepted = false;
            while step > 1e-12 {
                let trial = self.polish(&z + &tangent * step);
                if self.objective(&trial) > current && self.residual(&trial) < tol {
                    z = trial;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
            step = (step * 2.0).min(1.0);
            if self.objective(&z) - current < 1e-15 {
                break;
            }
        }
        z
    }

    fn run_restart(&self, index: usize, config: &SearchConfig) -> RestartOutcome {
        let mut rng = seeded_rng(config.seed, index as u64);
        let z0 = gaussian_vector(self.variable_count(), &mut rng);
        let z0 = &z0 * (3f64.sqrt() / z0.norm());
        let z = self.refine(self.descend(z0, config), config.feasibility_tol);
        let residual = self.residual(&z);
        RestartOutcome {
            t_norm: self.objective(&z).sqrt(),
            residual,
            feasible: residual < config.feasibility_tol,
            z,
        }
    }
}

struct RestartOutcome {
    z: DVector<f64>,
    t_norm: f64,
    residual: f64,
    feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub d: usize,
    #[serde(rename = "max_T_norm")]
    pub max_t_norm: f64,
    pub residual: f64,
    pub best_state: TwoGbitState<f64>,
    pub restarts: usize,
    pub seed: u64,
    pub feasible_restarts: usize,
    pub constraint_count: usize,
    pub single_flips: usize,
    pub triple_flips: usize,
    pub triples_capped: bool,
    pub positivity_enforced: bool,
    pub entangled_states_exist: bool,
}

/// Maximizes `|T|` over pure states in the correlated subspace that are
/// orthogonal to all their flip images. Restarts run in parallel; the best
/// feasible restart wins, ties going to the lowest restart index.
pub fn search_entangled_in_subspace(d: usize, config: &SearchConfig) -> Result<SearchReport> {
    if config.restarts == 0 {
        return Err(Error::Malformed("at least one restart is required".into()));
    }
    let problem = FeasibilityProblem::new(d, config)?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|k| problem.run_restart(k, config))
        .collect();
    let feasible_restarts = outcomes.iter().filter(|o| o.feasible).count();
    let mut best = 0;
    for (k, o) in outcomes.iter().enumerate() {
        let b = &outcomes[best];
        let better = match (o.feasible, b.feasible) {
            (true, false) => true,
            (true, true) => o.t_norm > b.t_norm,
            (false, false) => o.residual < b.residual,
            (false, true) => false,
        };
        if k > 0 && better {
            best = k;
        }
    }
    let b = &outcomes[best];
    Ok(SearchReport {
        d,
        max_t_norm: b.t_norm,
        residual: b.residual,
        best_state: problem.state(&b.z),
        restarts: config.restarts,
        seed: config.seed,
        feasible_restarts,
        constraint_count: problem.constraint_count(),
        single_flips: problem.single_count(),
        triple_flips: problem.triple_count(),
        triples_capped: problem.triples_capped,
        positivity_enforced: problem.enforce_positivity,
        entangled_states_exist: b.feasible && b.t_norm > 1.0 + ENTANGLED_MARGIN,
    })
}
