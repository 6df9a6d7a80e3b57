//! Decision sets, regularizers, and losses for lazy online mirror descent.
//!
//! The agents run the time-varying regularizer `g_t = (√t/η)·g`, so the
//! mirror map depends on the dual accumulator only through `η·θ/√t`.
//!
//! * Simplex: `g(p) = ln d + Σ p_i ln p_i`, 1-strongly convex in L1, range
//!   `[0, ln d]`. The mirror map is the exponential-weights distribution.
//! * Ball of radius `R`: `g(x) = ½‖x‖²`, 1-strongly convex in L2, range
//!   `[0, R²/2]`. The mirror map is the Euclidean projection onto the ball.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Geometry {
    Simplex { dim: usize },
    Ball { dim: usize, radius: f64 },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Simplex { dim } if dim >= 1 => Ok(()),
            Geometry::Ball { dim, radius } if dim >= 1 && radius > 0.0 && radius.is_finite() => {
                Ok(())
            }
            _ => Err(Error::validation(format!(
                "geometry needs dim >= 1 and a positive finite radius: {self:?}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Geometry::Simplex { dim } | Geometry::Ball { dim, .. } => dim,
        }
    }

    /// `D`, the range of the regularizer over the decision set.
    pub fn range_bound(&self) -> f64 {
        match *self {
            Geometry::Simplex { dim } => (dim as f64).ln(),
            Geometry::Ball { radius, .. } => radius * radius / 2.0,
        }
    }

    /// `σ`, the strong-convexity modulus of the regularizer.
    pub fn strong_convexity(&self) -> f64 {
        1.0
    }

    /// Norm dual to the one the regularizer is strongly convex in.
    pub fn dual_norm(&self, v: &[f64]) -> f64 {
        match self {
            Geometry::Simplex { .. } => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Geometry::Ball { .. } => l2(v),
        }
    }

    /// Whether `x` lies in the decision set up to `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match *self {
            Geometry::Simplex { .. } => {
                x.iter().all(|&p| p >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            Geometry::Ball { radius, .. } => l2(x) <= radius + tol,
        }
    }

    /// Mirror step `∇g_t*(θ)` with `g_t = (√count/η)·g`.
    pub fn mirror_map(&self, theta: &[f64], eta: f64, count: u64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.mirror_map_into(theta, eta, count, &mut out)?;
        Ok(out)
    }

    pub fn mirror_map_into(
        &self,
        theta: &[f64],
        eta: f64,
        count: u64,
        out: &mut [f64],
    ) -> Result<()> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::validation(format!("learning rate must be positive, got {eta}")));
        }
        if count == 0 {
            return Err(Error::validation("mirror map needs a local count of at least 1"));
        }
        if theta.len() != self.dim() || out.len() != self.dim() {
            return Err(Error::validation(format!(
                "dual vector has dimension {}, decision set has {}",
                theta.len(),
                self.dim()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Numeric(format!("non-finite dual vector {theta:?}")));
        }
        let scale = eta / (count as f64).sqrt();
        match *self {
            Geometry::Simplex { .. } => {
                let max = theta.iter().fold(f64::NEG_INFINITY, |m, &t| m.max(t));
                let mut total = 0.0;
                for (o, &t) in out.iter_mut().zip(theta) {
                    *o = (scale * (t - max)).exp();
                    total += *o;
                }
                for o in out.iter_mut() {
                    *o /= total;
                }
            }
            Geometry::Ball { radius, .. } => {
                for (o, &t) in out.iter_mut().zip(theta) {
                    *o = scale * t;
                }
                let norm = l2(out);
                if norm > radius {
                    let shrink = radius / norm;
                    for o in out.iter_mut() {
                        *o *= shrink;
                    }
                }
            }
        }
        Ok(())
    }

    /// Euclidean projection onto the centered ball of `radius`.
    pub(crate) fn project_ball(radius: f64, x: &mut [f64]) {
        let norm = l2(x);
        if norm > radius {
            for v in x.iter_mut() {
                *v *= radius / norm;
            }
        }
    }
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One round's loss function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Loss {
    /// `x ↦ ⟨c, x⟩` on the simplex with `c ∈ [0,1]^d`.
    LinearSimplex { coefficients: Vec<f64> },
    /// `x ↦ ⟨g, x⟩` on a ball.
    LinearBall { gradient: Vec<f64> },
    /// `x ↦ ½‖x − target‖²` on a ball.
    QuadraticBall { target: Vec<f64> },
}

impl Loss {
    pub fn linear_simplex(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::validation(format!(
                "simplex loss coefficients must lie in [0, 1]: {coefficients:?}"
            )));
        }
        Ok(Loss::LinearSimplex { coefficients })
    }

    pub fn dim(&self) -> usize {
        match self {
            Loss::LinearSimplex { coefficients: v }
            | Loss::LinearBall { gradient: v }
            | Loss::QuadraticBall { target: v } => v.len(),
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Loss::QuadraticBall { .. })
    }

    /// Checks that this loss is defined on `geom`.
    pub fn check_compatible(&self, geom: &Geometry) -> Result<()> {
        if self.dim() != geom.dim() {
            return Err(Error::validation(format!(
                "loss has dimension {}, decision set has {}",
                self.dim(),
                geom.dim()
            )));
        }
        match (self, geom) {
            (Loss::LinearSimplex { coefficients }, Geometry::Simplex { .. }) => {
                if coefficients.iter().all(|c| (0.0..=1.0).contains(c)) {
                    Ok(())
                } else {
                    Err(Error::validation("simplex loss coefficients must lie in [0, 1]"))
                }
            }
            (Loss::LinearBall { .. } | Loss::QuadraticBall { .. }, Geometry::Ball { .. }) => Ok(()),
            _ => Err(Error::validation(format!(
                "loss {self:?} is not defined on {geom:?}"
            ))),
        }
    }

    /// Upper bound on the dual norm of the gradient over the decision set.
    pub fn gradient_bound(&self, geom: &Geometry) -> f64 {
        match (self, geom) {
            (Loss::LinearSimplex { coefficients }, _) => geom.dual_norm(coefficients),
            (Loss::LinearBall { gradient }, _) => geom.dual_norm(gradient),
            (Loss::QuadraticBall { target }, Geometry::Ball { radius, .. }) => radius + l2(target),
            (Loss::QuadraticBall { target }, Geometry::Simplex { .. }) => 1.0 + l2(target),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            Loss::LinearSimplex { coefficients: c } | Loss::LinearBall { gradient: c } => dot(c, x),
            Loss::QuadraticBall { target } => {
                0.5 * x.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            }
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(match self {
            Loss::LinearSimplex { coefficients: c } | Loss::LinearBall { gradient: c } => c.clone(),
            Loss::QuadraticBall { target } => x.iter().zip(target).map(|(a, b)| a - b).collect(),
        })
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "point has dimension {}, loss has {}",
                x.len(),
                self.dim()
            )))
        }
    }
}

/// `η = √(2σD)/L`.
pub fn tuned_eta(range: f64, sigma: f64, lipschitz: f64) -> Result<f64> {
    check_positive(&[("D", range), ("sigma", sigma), ("L", lipschitz)])?;
    Ok((2.0 * sigma * range).sqrt() / lipschitz)
}

/// `(D/η + ηL²/(2σ))·√(m·T)`.
pub fn theory_bound(
    range: f64,
    sigma: f64,
    lipschitz: f64,
    eta: f64,
    multiplier: f64,
    horizon: f64,
) -> Result<f64> {
    if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
        return Err(Error::validation(format!("L must be nonnegative and finite, got {lipschitz}")));
    }
    check_positive(&[
        ("D", range),
        ("sigma", sigma),
        ("eta", eta),
        ("multiplier", multiplier),
        ("T", horizon),
    ])?;
    Ok((range / eta + eta * lipschitz * lipschitz / (2.0 * sigma)) * (multiplier * horizon).sqrt())
}

fn check_positive(values: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in values {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::validation(format!("{name} must be positive and finite, got {v}")));
        }
    }
    Ok(())
}
