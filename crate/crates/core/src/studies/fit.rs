use crate::error::{Error, Result};
use crate::math;

/// Least-squares fit of `ln(error) = intercept + rate · ln(param)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateFit {
    pub rate: f64,
    /// Natural log of the fitted constant.
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_rate(pairs: &[(f64, f64)]) -> Result<RateFit> {
    if pairs.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: pairs.len(),
        });
    }
    if pairs.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::InvalidConfig("rate fit needs positive, finite pairs".into()));
    }
    let n = pairs.len() as f64;
    let xs = pairs.iter().map(|p| math::ln(p.0));
    let ys = pairs.iter().map(|p| math::ln(p.1));
    let mx = xs.clone().sum::<f64>() / n;
    let my = ys.clone().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("rate fit needs distinct parameters".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_res = (syy - rate * sxy).max(0.0);
    // a constant series is fitted exactly by a flat line
    let r2 = if syy <= 1e-300 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(RateFit { rate, intercept, r2 })
}
