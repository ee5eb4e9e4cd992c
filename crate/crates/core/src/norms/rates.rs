use crate::error::{Error, Result};
use crate::mild::Trajectory;
use crate::norms::mixed::derivative_lq_norm;

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(t, ||grad^k u(t)||_{L^q})` pairs that entered the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Least-squares fit of `y = intercept + slope * x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Slope of `log ||grad^k u(t)||_{L^q}` against `log t`.
///
/// The first and last two nodes are dropped; `window` further restricts the
/// fit to `t_lo <= t <= t_hi`. The retained nodes must span a decade.
pub fn smoothing_rate_fit(
    traj: &Trajectory,
    k: u32,
    q: f64,
    window: Option<(f64, f64)>,
) -> Result<RateFit> {
    let times = traj.times();
    if times.len() < 5 {
        return Err(Error::InsufficientDecade { span: 1.0 });
    }
    let (lo, hi) = window.unwrap_or((0.0, f64::INFINITY));
    let picked: Vec<usize> = (1..times.len() - 2)
        .filter(|&i| times[i] >= lo * (1.0 - 1e-12) && times[i] <= hi * (1.0 + 1e-12))
        .collect();
    let span = match (picked.first(), picked.last()) {
        (Some(&a), Some(&b)) => times[b] / times[a],
        _ => 1.0,
    };
    if picked.len() < 3 || span < 10.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientDecade { span });
    }
    let samples = picked
        .iter()
        .map(|&i| Ok((times[i], derivative_lq_norm(traj.state(i), k, q)?)))
        .collect::<Result<Vec<_>>>()?;
    if samples.iter().any(|&(_, g)| !(g > 0.0)) {
        return Err(Error::Degenerate("norm vanishes inside the rate window".into()));
    }
    let x: Vec<f64> = samples.iter().map(|(t, _)| t.ln()).collect();
    let y: Vec<f64> = samples.iter().map(|(_, g)| g.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&x, &y);
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        samples,
    })
}
