//! Decomposed double-well potentials `F = B̂ + π̂` and proliferation functions.
//!
//! `B̂` is the convex (possibly nonsmooth) part, `B = ∂B̂` its subdifferential
//! and `π = π̂'` the Lipschitz derivative of the smooth, possibly nonconvex
//! part. Multivalued graphs (the indicator of `[-1, 1]`) are replaced by their
//! Moreau–Yosida regularization at level `ε` wherever a single-valued map is
//! needed; the exact graph is only used through the minimum-modulus selection.

use crate::error::{Error, Result};
use crate::math;

/// Regularization level used when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Default `κ` for the logarithmic family.
pub const DEFAULT_KAPPA: f64 = 2.0;
/// Distance from `±1` at which the logarithmic terms are clamped.
pub const LOG_CLAMP: f64 = 1e-9;

/// Which `F = B̂ + π̂` split is used.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum PotentialFamily {
    /// `¼((r²−1)⁺)² + ¼((1−r²)⁺)²`.
    DoubleWell,
    /// `(1−r)ln(1−r) + (1+r)ln(1+r) + κ(1−r²)⁺` on `[−1, 1]`.
    Logarithmic { kappa: f64 },
    /// Indicator of `[−1, 1]` (Yosida-regularized at `epsilon`) plus `((1−r²)⁺)²`.
    RegularizedIndicator { epsilon: f64 },
    /// Indicator of `[−1, 1]` with `π(r) = −L r` on `[−1, 1]`.
    ///
    /// Outside the interval `π̂` continues as `L/2 (|r| − 2)²`, so `π̂ ≥ 0`,
    /// `π̂ ∈ C¹` and `|π'| ≤ L` everywhere.
    LinearObstacle { lipschitz: f64, epsilon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PotentialSpec {
    pub family: PotentialFamily,
}

impl PotentialSpec {
    pub fn new(family: PotentialFamily) -> Result<Self> {
        let spec = PotentialSpec { family };
        spec.validate()?;
        Ok(spec)
    }

    pub fn double_well() -> Self {
        PotentialSpec {
            family: PotentialFamily::DoubleWell,
        }
    }

    pub fn logarithmic(kappa: f64) -> Result<Self> {
        Self::new(PotentialFamily::Logarithmic { kappa })
    }

    pub fn regularized_indicator(epsilon: f64) -> Result<Self> {
        Self::new(PotentialFamily::RegularizedIndicator { epsilon })
    }

    pub fn linear_obstacle(lipschitz: f64, epsilon: f64) -> Result<Self> {
        Self::new(PotentialFamily::LinearObstacle { lipschitz, epsilon })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        match self.family {
            PotentialFamily::DoubleWell => Ok(()),
            PotentialFamily::Logarithmic { kappa } => {
                if kappa.is_finite() && kappa > 0.0 {
                    Ok(())
                } else {
                    bad("potential.kappa must be positive")
                }
            }
            PotentialFamily::RegularizedIndicator { epsilon } => {
                if epsilon.is_finite() && epsilon > 0.0 {
                    Ok(())
                } else {
                    bad("potential.epsilon must be positive")
                }
            }
            PotentialFamily::LinearObstacle { lipschitz, epsilon } => {
                if !(lipschitz.is_finite() && lipschitz >= 0.0) {
                    bad("potential.lipschitz must be nonnegative")
                } else if !(epsilon.is_finite() && epsilon > 0.0) {
                    bad("potential.epsilon must be positive")
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Lipschitz constant of `π` on the effective domain of `B̂`.
    pub fn lipschitz(&self) -> f64 {
        match self.family {
            // π' = 3r² − 1 on [−1, 1]
            PotentialFamily::DoubleWell => 2.0,
            PotentialFamily::Logarithmic { kappa } => 2.0 * kappa,
            // π' = 12r² − 4 on [−1, 1]
            PotentialFamily::RegularizedIndicator { .. } => 8.0,
            PotentialFamily::LinearObstacle { lipschitz, .. } => lipschitz,
        }
    }

    /// Whether `D(B̂) = ℝ`.
    pub fn has_full_domain(&self) -> bool {
        matches!(self.family, PotentialFamily::DoubleWell)
    }

    fn epsilon(&self) -> Option<f64> {
        match self.family {
            PotentialFamily::RegularizedIndicator { epsilon }
            | PotentialFamily::LinearObstacle { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }

    fn check_log_domain(&self, what: &'static str, r: f64) -> Result<()> {
        if !r.is_finite() {
            return Err(Error::Domain { what, value: r });
        }
        if matches!(self.family, PotentialFamily::Logarithmic { .. }) && r.abs() > 1.0 {
            return Err(Error::Domain { what, value: r });
        }
        Ok(())
    }

    /// Convex part `B̂(r)`; the Moreau–Yosida envelope for the indicator families.
    pub fn convex_energy(&self, r: f64) -> Result<f64> {
        self.check_log_domain("convex potential", r)?;
        Ok(self.convex_energy_clamped(r))
    }

    /// `B̂` without domain checks; logarithmic arguments are clamped into the open interval.
    pub fn convex_energy_clamped(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                let s = (r * r - 1.0).max(0.0);
                0.25 * s * s
            }
            PotentialFamily::Logarithmic { .. } => {
                let r = r.clamp(-1.0, 1.0);
                math::xlogx(1.0 - r) + math::xlogx(1.0 + r)
            }
            PotentialFamily::RegularizedIndicator { epsilon }
            | PotentialFamily::LinearObstacle { epsilon, .. } => {
                let d = r - r.clamp(-1.0, 1.0);
                d * d / (2.0 * epsilon)
            }
        }
    }

    /// Single-valued (regularized) subdifferential `B(r)`.
    pub fn convex_derivative(&self, r: f64) -> Result<f64> {
        self.check_log_domain("subdifferential", r)?;
        Ok(self.convex_derivative_clamped(r))
    }

    /// `B` as a total function, used inside Newton iterates.
    pub fn convex_derivative_clamped(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                if r.abs() > 1.0 {
                    r * (r * r - 1.0)
                } else {
                    0.0
                }
            }
            PotentialFamily::Logarithmic { .. } => {
                let r = clamp_log(r);
                math::ln((1.0 + r) / (1.0 - r))
            }
            PotentialFamily::RegularizedIndicator { epsilon }
            | PotentialFamily::LinearObstacle { epsilon, .. } => {
                (r - r.clamp(-1.0, 1.0)) / epsilon
            }
        }
    }

    /// Derivative of [`Self::convex_derivative_clamped`].
    pub fn convex_slope(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                if r.abs() > 1.0 {
                    3.0 * r * r - 1.0
                } else {
                    0.0
                }
            }
            PotentialFamily::Logarithmic { .. } => {
                let r = clamp_log(r);
                2.0 / (1.0 - r * r)
            }
            PotentialFamily::RegularizedIndicator { epsilon }
            | PotentialFamily::LinearObstacle { epsilon, .. } => {
                if r.abs() > 1.0 {
                    1.0 / epsilon
                } else {
                    0.0
                }
            }
        }
    }

    /// Minimum-modulus element `B⁰(r)` of the exact, unregularized graph.
    pub fn min_norm_selection(&self, r: f64) -> Result<f64> {
        let outside = |value| Error::Domain {
            what: "minimal section",
            value,
        };
        if !r.is_finite() {
            return Err(outside(r));
        }
        match self.family {
            PotentialFamily::DoubleWell => Ok(self.convex_derivative_clamped(r)),
            PotentialFamily::Logarithmic { .. } => {
                // ∂B̂(±1) is empty: the derivative blows up at the endpoints.
                if r.abs() >= 1.0 {
                    Err(outside(r))
                } else {
                    Ok(math::ln((1.0 + r) / (1.0 - r)))
                }
            }
            PotentialFamily::RegularizedIndicator { .. }
            | PotentialFamily::LinearObstacle { .. } => {
                if r.abs() <= 1.0 {
                    Ok(0.0)
                } else {
                    Err(outside(r))
                }
            }
        }
    }

    /// Whether `value ∈ B(r)` for the exact graph, up to `tol`.
    pub fn graph_contains(&self, r: f64, value: f64, tol: f64) -> bool {
        match self.family {
            PotentialFamily::RegularizedIndicator { .. }
            | PotentialFamily::LinearObstacle { .. } => {
                if r.abs() < 1.0 {
                    value.abs() <= tol
                } else if r == 1.0 {
                    value >= -tol
                } else if r == -1.0 {
                    value <= tol
                } else {
                    false
                }
            }
            _ => match self.min_norm_selection(r) {
                Ok(b) => (b - value).abs() <= tol,
                Err(_) => false,
            },
        }
    }

    /// Smooth part `π̂(r)`.
    pub fn smooth_energy(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                let s = (1.0 - r * r).max(0.0);
                0.25 * s * s
            }
            // extended past the domain so that π stays globally Lipschitz for Newton iterates
            PotentialFamily::Logarithmic { kappa } => kappa * (1.0 - r * r),
            PotentialFamily::RegularizedIndicator { .. } => {
                let s = (1.0 - r * r).max(0.0);
                s * s
            }
            PotentialFamily::LinearObstacle { lipschitz, .. } => {
                if r.abs() <= 1.0 {
                    lipschitz * (1.0 - 0.5 * r * r)
                } else {
                    let d = r.abs() - 2.0;
                    0.5 * lipschitz * d * d
                }
            }
        }
    }

    /// `π(r) = π̂'(r)`.
    pub fn smooth_force(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                if r.abs() < 1.0 {
                    -r * (1.0 - r * r)
                } else {
                    0.0
                }
            }
            PotentialFamily::Logarithmic { kappa } => -2.0 * kappa * r,
            PotentialFamily::RegularizedIndicator { .. } => {
                if r.abs() < 1.0 {
                    -4.0 * r * (1.0 - r * r)
                } else {
                    0.0
                }
            }
            PotentialFamily::LinearObstacle { lipschitz, .. } => {
                if r > 1.0 {
                    lipschitz * (r - 2.0)
                } else if r < -1.0 {
                    lipschitz * (r + 2.0)
                } else {
                    -lipschitz * r
                }
            }
        }
    }

    /// `π'(r)`, taking the one-sided value at kinks.
    pub fn smooth_force_slope(&self, r: f64) -> f64 {
        match self.family {
            PotentialFamily::DoubleWell => {
                if r.abs() < 1.0 {
                    3.0 * r * r - 1.0
                } else {
                    0.0
                }
            }
            PotentialFamily::Logarithmic { kappa } => -2.0 * kappa,
            PotentialFamily::RegularizedIndicator { .. } => {
                if r.abs() < 1.0 {
                    12.0 * r * r - 4.0
                } else {
                    0.0
                }
            }
            PotentialFamily::LinearObstacle { lipschitz, .. } => {
                if r.abs() > 1.0 {
                    lipschitz
                } else {
                    -lipschitz
                }
            }
        }
    }

    /// `F = B̂ + π̂` (regularized for the indicator families).
    pub fn energy(&self, r: f64) -> Result<f64> {
        Ok(self.convex_energy(r)? + self.smooth_energy(r))
    }

    /// `F` as a total function with logarithmic clamping.
    pub fn energy_clamped(&self, r: f64) -> f64 {
        self.convex_energy_clamped(r) + self.smooth_energy(r)
    }

    /// `sup |B⁰(r)| / (B̂(r) + 1)` over `samples` equally spaced points of `[lo, hi]`.
    ///
    /// A finite value is the constant `C_B` of the growth condition on the sampled range.
    pub fn growth_constant(&self, lo: f64, hi: f64, samples: usize) -> Result<f64> {
        if samples < 2 || !(hi > lo) {
            return Err(Error::InvalidConfig("growth_constant needs lo < hi and 2+ samples".into()));
        }
        let mut worst: f64 = 0.0;
        for k in 0..samples {
            let r = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            let b0 = self.min_norm_selection(r)?;
            let bhat = self.convex_energy(r)?;
            worst = worst.max(b0.abs() / (bhat + 1.0));
        }
        Ok(worst)
    }

    /// Regularization level, if the family is regularized.
    pub fn regularization(&self) -> Option<f64> {
        self.epsilon()
    }
}

fn clamp_log(r: f64) -> f64 {
    r.clamp(-1.0 + LOG_CLAMP, 1.0 - LOG_CLAMP)
}

/// Proliferation function `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Proliferation {
    Constant(f64),
    /// `scale · √F_cl(r)` for `|r| < 1`, zero elsewhere, with `F_cl(r) = ¼(r² − 1)²`.
    ClippedSqrtF { scale: f64 },
    /// `height · exp(−((r − center)/width)²)`.
    SmoothBump { center: f64, width: f64, height: f64 },
}

impl Proliferation {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Proliferation::Constant(v) => v.is_finite() && v >= 0.0,
            Proliferation::ClippedSqrtF { scale } => scale.is_finite() && scale >= 0.0,
            Proliferation::SmoothBump {
                center,
                width,
                height,
            } => center.is_finite() && width.is_finite() && width > 0.0 && height.is_finite() && height >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "proliferation must be nonnegative, bounded and Lipschitz".into(),
            ))
        }
    }

    pub fn rate(&self, r: f64) -> f64 {
        match *self {
            Proliferation::Constant(v) => v,
            Proliferation::ClippedSqrtF { scale } => 0.5 * scale * (1.0 - r * r).max(0.0),
            Proliferation::SmoothBump {
                center,
                width,
                height,
            } => {
                let z = (r - center) / width;
                height * math::exp(-z * z)
            }
        }
    }

    pub fn rate_slope(&self, r: f64) -> f64 {
        match *self {
            Proliferation::Constant(_) => 0.0,
            Proliferation::ClippedSqrtF { scale } => {
                if r.abs() < 1.0 {
                    -scale * r
                } else {
                    0.0
                }
            }
            Proliferation::SmoothBump {
                center,
                width,
                height,
            } => {
                let z = (r - center) / width;
                -2.0 * z / width * height * math::exp(-z * z)
            }
        }
    }

    /// `sup p`.
    pub fn bound(&self) -> f64 {
        match *self {
            Proliferation::Constant(v) => v,
            Proliferation::ClippedSqrtF { scale } => 0.5 * scale,
            Proliferation::SmoothBump { height, .. } => height,
        }
    }

    /// Lipschitz constant of `p`.
    pub fn lipschitz(&self) -> f64 {
        match *self {
            Proliferation::Constant(_) => 0.0,
            Proliferation::ClippedSqrtF { scale } => scale,
            // max |d/dz e^{−z²}| = √2 e^{−1/2}
            Proliferation::SmoothBump { width, height, .. } => {
                height * math::sqrt(2.0) * math::exp(-0.5) / width
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Proliferation::Constant(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_difference(f: impl Fn(f64) -> f64, r: f64) -> f64 {
        let h = 1e-6;
        (f(r + h) - f(r - h)) / (2.0 * h)
    }

    #[test]
    fn double_well_convex_part() {
        let dw = PotentialSpec::double_well();
        assert_eq!(dw.convex_energy(1.0).unwrap(), 0.0);
        // the convex branch vanishes on [−1, 1]; F(0) = ¼ sits in π̂
        assert_eq!(dw.convex_energy(0.0).unwrap(), 0.0);
        assert_eq!(dw.energy(0.0).unwrap(), 0.25);
        assert_eq!(dw.energy(1.0).unwrap(), 0.0);
    }

    #[test]
    fn indicator_envelope_matches_brute_force_prox() {
        let spec = PotentialSpec::regularized_indicator(0.1).unwrap();
        // min over y ∈ [−1, 1] of (r − y)²/(2ε), on a fine grid
        let r = 1.2;
        let brute = (0..=200_000)
            .map(|k| -1.0 + 2.0 * k as f64 / 200_000.0)
            .map(|y| (r - y) * (r - y) / 0.2)
            .fold(f64::INFINITY, f64::min);
        let env = spec.convex_energy(r).unwrap();
        assert!((env - 0.2).abs() < 1e-12);
        assert!((env - brute).abs() < 1e-9);
    }

    #[test]
    fn derivative_examples() {
        let dw = PotentialSpec::double_well();
        let oracle = central_difference(|r| dw.convex_energy(r).unwrap(), 0.0);
        assert!(oracle.abs() < 1e-12);
        assert_eq!(dw.convex_derivative(0.0).unwrap(), 0.0);

        let ind = PotentialSpec::regularized_indicator(0.1).unwrap();
        assert_eq!(ind.convex_derivative(0.5).unwrap(), 0.0);
        let b = ind.convex_derivative(1.2).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
        let fd = central_difference(|r| ind.convex_energy(r).unwrap(), 1.2);
        assert!((fd - 2.0).abs() < 1e-6);
    }

    #[test]
    fn min_norm_selection_examples() {
        let ind = PotentialSpec::regularized_indicator(DEFAULT_EPSILON).unwrap();
        assert_eq!(ind.min_norm_selection(0.9).unwrap(), 0.0);
        assert_eq!(ind.min_norm_selection(1.0).unwrap(), 0.0);
        assert!(matches!(ind.min_norm_selection(1.5), Err(Error::Domain { .. })));

        let dw = PotentialSpec::double_well();
        let fd = central_difference(|r| dw.convex_energy(r).unwrap(), 2.0);
        let b0 = dw.min_norm_selection(2.0).unwrap();
        assert!((b0 - 6.0).abs() < 1e-12);
        assert!((fd - b0).abs() < 1e-6);
        assert_eq!(dw.min_norm_selection(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn smooth_force_examples() {
        let dw = PotentialSpec::double_well();
        assert_eq!(dw.smooth_force(0.0), 0.0);
        for &r in &[-0.7, -0.2, 0.3, 0.8] {
            let fd = central_difference(|s| dw.smooth_energy(s), r);
            assert!((fd - dw.smooth_force(r)).abs() < 1e-8);
        }

        let lin = PotentialSpec::linear_obstacle(2.0, DEFAULT_EPSILON).unwrap();
        assert_eq!(lin.smooth_force(0.5), -1.0);
        assert_eq!(lin.smooth_force(0.0), 0.0);
        for &r in &[-3.0, -1.5, -0.5, 0.5, 1.5, 2.5] {
            let fd = central_difference(|s| lin.smooth_energy(s), r);
            assert!((fd - lin.smooth_force(r)).abs() < 1e-7, "r = {r}");
        }
        // C¹ at the junction
        assert!((lin.smooth_energy(1.0 - 1e-12) - lin.smooth_energy(1.0 + 1e-12)).abs() < 1e-10);
    }

    #[test]
    fn logarithmic_domain_errors() {
        let log = PotentialSpec::logarithmic(DEFAULT_KAPPA).unwrap();
        match log.convex_energy(1.5) {
            Err(Error::Domain { value, .. }) => assert_eq!(value, 1.5),
            other => panic!("expected a domain error, got {other:?}"),
        }
        assert!(log.convex_derivative(-1.01).is_err());
        assert!((log.convex_energy(1.0).unwrap() - 2.0 * core::f64::consts::LN_2).abs() < 1e-15);
        assert!(log.convex_derivative(1.0).unwrap().is_finite());
        assert!(log.min_norm_selection(1.0).is_err());
        assert!(log.convex_derivative_clamped(5.0).is_finite());
    }

    #[test]
    fn yosida_envelope_scales_like_inverse_epsilon() {
        let values: alloc::vec::Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&eps| PotentialSpec::regularized_indicator(eps).unwrap().convex_energy(1.5).unwrap())
            .collect();
        assert!(values[0] < values[1] && values[1] < values[2]);
        let scaled: alloc::vec::Vec<f64> = values
            .iter()
            .zip([1e-1, 1e-2, 1e-3])
            .map(|(v, eps)| v * eps)
            .collect();
        for s in &scaled[1..] {
            assert!((s / scaled[0] - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn double_well_growth_constant_is_moderate() {
        let c = PotentialSpec::double_well().growth_constant(-10.0, 10.0, 20_001).unwrap();
        assert!(c.is_finite() && c < 5.0, "C_B = {c}");
    }

    #[test]
    fn proliferation_examples() {
        assert_eq!(Proliferation::Constant(0.0).rate(0.3), 0.0);
        assert_eq!(Proliferation::Constant(0.7).rate(3.0), 0.7);
        assert_eq!(Proliferation::ClippedSqrtF { scale: 1.0 }.rate(2.0), 0.0);
        let p = Proliferation::ClippedSqrtF { scale: 1.0 };
        // √(¼(r²−1)²) = ½(1 − r²) inside
        assert!((p.rate(0.5) - 0.375).abs() < 1e-15);
        assert!(Proliferation::Constant(-1.0).validate().is_err());
        assert!(Proliferation::SmoothBump { center: 0.0, width: 0.0, height: 1.0 }.validate().is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PotentialSpec::regularized_indicator(0.0).is_err());
        assert!(PotentialSpec::logarithmic(-1.0).is_err());
        assert!(PotentialSpec::linear_obstacle(-2.0, 1e-3).is_err());
    }
}
