//! Two-dimensional toy state spaces for the "mixture of two orthogonal
//! states" check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{abs, sqrt, Real};

/// A two-outcome measurement with outcome probabilities `(1 +/- r.s) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectPair<T> {
    pub direction: [T; 2],
}

impl<T: Real> EffectPair<T> {
    pub fn probabilities(&self, s: [T; 2]) -> (T, T) {
        let r = dot2(self.direction, s);
        (T::half() * (T::one() + r), T::half() * (T::one() - r))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape<T> {
    /// Convex polygon, vertices in counter-clockwise order.
    Polygon(Vec<[T; 2]>),
    /// Unit disc: every boundary point is pure and every antipodal pair is
    /// distinguished by some measurement.
    Disc,
}

/// Convex state space of a two-parameter system.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexStateSpace<T> {
    shape: Shape<T>,
    effects: Vec<EffectPair<T>>,
}

/// Witness for `state = eta * m + (1 - eta) * (-m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decomposition<T> {
    pub pure: [T; 2],
    pub eta: T,
}

fn dot2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

fn cross2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2<T: Real>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

impl<T: Real> ConvexStateSpace<T> {
    /// Polygonal state space. Vertices are the pure states; each effect must
    /// give probabilities in `[0, 1]` on every vertex.
    pub fn polygon(vertices: Vec<[T; 2]>, effects: Vec<EffectPair<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateStateSpace);
        }
        let n = T::from_usize(vertices.len()).unwrap();
        let cx = vertices.iter().fold(T::zero(), |a, v| a + v[0]) / n;
        let cy = vertices.iter().fold(T::zero(), |a, v| a + v[1]) / n;
        let mut vertices = vertices;
        vertices.sort_by(|a, b| {
            let ta = (a[1] - cy).atan2(a[0] - cx);
            let tb = (b[1] - cy).atan2(b[0] - cx);
            ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
        });
        let tol = T::validity_tol();
        for e in &effects {
            for v in &vertices {
                let (p, _) = e.probabilities(*v);
                if p < -tol || p > T::one() + tol {
                    return Err(Error::ProbabilityOutOfRange {
                        index: 0,
                        value: p.as_f64(),
                    });
                }
            }
        }
        Ok(Self {
            shape: Shape::Polygon(vertices),
            effects,
        })
    }

    /// Toy world whose pure states are `x1`, `x2` and their orthogonal
    /// partners, with only the two measurements distinguishing each pair.
    pub fn toy_world(x1: [T; 2], x2: [T; 2]) -> Result<Self> {
        let neg = |v: [T; 2]| [-v[0], -v[1]];
        Self::polygon(
            vec![x1, x2, neg(x1), neg(x2)],
            vec![EffectPair { direction: x1 }, EffectPair { direction: x2 }],
        )
    }

    /// The square toy world with `x1 = e1`, `x2 = e2`.
    pub fn square() -> Self {
        Self::toy_world([T::one(), T::zero()], [T::zero(), T::one()])
            .expect("square toy world is well formed")
    }

    pub fn unit_disc() -> Self {
        Self {
            shape: Shape::Disc,
            effects: Vec::new(),
        }
    }

    pub fn is_disc(&self) -> bool {
        matches!(self.shape, Shape::Disc)
    }

    /// Pure states (vertices); empty for the disc, whose pure set is the
    /// whole unit circle.
    pub fn vertices(&self) -> &[[T; 2]] {
        match &self.shape {
            Shape::Polygon(v) => v,
            Shape::Disc => &[],
        }
    }

    pub fn effects(&self) -> &[EffectPair<T>] {
        &self.effects
    }

    pub fn contains(&self, s: [T; 2], tol: T) -> bool {
        match &self.shape {
            Shape::Disc => dot2(s, s) <= (T::one() + tol) * (T::one() + tol),
            Shape::Polygon(v) => (0..v.len()).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                let edge = sub2(b, a);
                cross2(edge, sub2(s, a)) >= -tol * sqrt(dot2(edge, edge))
            }),
        }
    }

    /// Whether some measurement of the space perfectly distinguishes the
    /// pure state `m` from `-m`.
    fn distinguishes(&self, m: [T; 2], tol: T) -> bool {
        match self.shape {
            Shape::Disc => true,
            Shape::Polygon(_) => self
                .effects
                .iter()
                .any(|e| abs(abs(dot2(e.direction, m)) - T::one()) <= tol),
        }
    }
}

/// Looks for a pair of perfectly distinguishable pure states `{m, -m}` that
/// `state` is a mixture of. Returns the witness with `eta >= 1/2`, or `None`
/// if no such pair exists in the space.
pub fn axiom1_decomposable<T: Real>(
    space: &ConvexStateSpace<T>,
    state: [T; 2],
    tol: T,
) -> Result<Option<Decomposition<T>>> {
    if !space.contains(state, tol) {
        return Err(Error::OutsideStateSpace);
    }
    match &space.shape {
        Shape::Disc => {
            let r = sqrt(dot2(state, state));
            if r <= tol {
                return Ok(Some(Decomposition {
                    pure: [T::one(), T::zero()],
                    eta: T::half(),
                }));
            }
            let r_clamped = if r > T::one() { T::one() } else { r };
            Ok(Some(Decomposition {
                pure: [state[0] / r, state[1] / r],
                eta: T::half() * (T::one() + r_clamped),
            }))
        }
        Shape::Polygon(vertices) => {
            for &m in vertices {
                let antipode = [-m[0], -m[1]];
                let has_partner = vertices
                    .iter()
                    .any(|v| abs(v[0] - antipode[0]) <= tol && abs(v[1] - antipode[1]) <= tol);
                if !has_partner || !space.distinguishes(m, tol) {
                    continue;
                }
                let m2 = dot2(m, m);
                if abs(cross2(m, state)) > tol * sqrt(m2) {
                    continue;
                }
                let t = dot2(m, state) / m2;
                if t < -tol || t > T::one() + tol {
                    continue;
                }
                let eta = T::half() * (T::one() + t);
                return Ok(Some(Decomposition { pure: m, eta }));
            }
            Ok(None)
        }
    }
}
