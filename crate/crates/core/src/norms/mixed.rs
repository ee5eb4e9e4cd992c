//! `||u||_{(p,q,m,n,delta)} = sum_{j<=m} sum_{k<=n}
//!  || t^{j+k/2} D_t^j grad^k u ||_{L^q_x L^p_t(0,delta)}`.

use crate::error::{Error, Result};
use crate::field::{multi_indices, SpectralField};
use crate::mild::{time_derivatives, Trajectory};

/// Tolerance on the scaling-line identity `2/p + d/q = 1`.
pub const SCALING_LINE_TOLERANCE: f64 = 1e-12;

/// The tuple `(p, q, m, n, delta)`; `p = f64::INFINITY` is the sup norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
    pub m: u32,
    pub n: u32,
    pub delta: f64,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, m: u32, n: u32, delta: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) || q.is_infinite() {
            return Err(Error::InvalidArgument(format!(
                "exponents must satisfy p >= 1 and finite q >= 1, got p={p}, q={q}"
            )));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "norm horizon must be positive, got {delta}"
            )));
        }
        Ok(Self { p, q, m, n, delta })
    }

    /// The critical space-time Lebesgue norm `L^{d+2}_{x,t}`.
    pub fn critical(dim: usize, delta: f64) -> Self {
        let e = dim as f64 + 2.0;
        Self {
            p: e,
            q: e,
            m: 0,
            n: 0,
            delta,
        }
    }

    /// `p in [d+2, inf]`, `q in [d, d+2]` and `2/p + d/q = 1`.
    pub fn check_scaling(&self, dim: usize) -> Result<()> {
        let d = dim as f64;
        let on_line = (2.0 / self.p + d / self.q - 1.0).abs() <= SCALING_LINE_TOLERANCE;
        let in_range = self.p >= d + 2.0 - SCALING_LINE_TOLERANCE
            && self.q >= d - SCALING_LINE_TOLERANCE
            && self.q <= d + 2.0 + SCALING_LINE_TOLERANCE;
        if on_line && in_range {
            Ok(())
        } else {
            Err(Error::ScalingLine {
                p: self.p,
                q: self.q,
                dim,
            })
        }
    }
}

/// The individual `(j, k)` terms of a weighted mixed norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTerms {
    pub m: u32,
    pub n: u32,
    /// Row-major in `(j, k)`.
    pub values: Vec<f64>,
}

impl NormTerms {
    pub fn get(&self, j: u32, k: u32) -> f64 {
        self.values[(j * (self.n + 1) + k) as usize]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Sum restricted to `j <= m`, `k <= n`.
    pub fn partial(&self, m: u32, n: u32) -> f64 {
        (0..=m.min(self.m))
            .flat_map(|j| (0..=n.min(self.n)).map(move |k| (j, k)))
            .map(|(j, k)| self.get(j, k))
            .sum()
    }
}

/// `sum_{|alpha| = order} || d^alpha f ||_{L^q}`.
pub fn derivative_lq_norm(f: &SpectralField, order: u32, q: f64) -> Result<f64> {
    let dim = f.domain().dim();
    multi_indices(dim, order)
        .iter()
        .map(|alpha| f.derivative(alpha)?.lebesgue_norm(q))
        .sum()
}

/// `|| t^w g(t) ||_{L^p(0, delta)}` from samples `g(t_i)` at the nodes.
///
/// Finite `p` uses a product rule: `g^p` is averaged over the two ends of
/// each cell (the first cell `(0, t_1]` uses `g(t_1)^p`) while `t^{wp}` is
/// integrated exactly. `p = inf` is the maximum of `t_i^w g(t_i)` over
/// nodes inside the horizon.
pub fn time_lp_norm(nodes: &[f64], values: &[f64], weight: f64, p: f64, delta: f64) -> f64 {
    assert_eq!(nodes.len(), values.len());
    let tol = delta * 1e-12;
    if p.is_infinite() {
        let mut best: f64 = 0.0;
        for (i, (&t, &g)) in nodes.iter().zip(values).enumerate() {
            if t <= delta + tol || i == 0 {
                best = best.max(t.powf(weight) * g);
            }
        }
        return best;
    }
    let wp = weight * p;
    let mut sum = 0.0;
    for i in 0..nodes.len() {
        let a = if i == 0 { 0.0 } else { nodes[i - 1] };
        if a >= delta - tol {
            break;
        }
        let b = nodes[i].min(delta);
        let cell = (b.powf(wp + 1.0) - a.powf(wp + 1.0)) / (wp + 1.0);
        let g = if i == 0 {
            values[0].powf(p)
        } else {
            0.5 * (values[i - 1].powf(p) + values[i].powf(p))
        };
        sum += g * cell;
    }
    sum.powf(1.0 / p)
}

pub(crate) fn check_horizon(traj: &Trajectory, delta: f64) -> Result<()> {
    let available = traj.grid().delta();
    if delta > available * (1.0 + 1e-12) {
        return Err(Error::Horizon {
            requested: delta,
            available,
        });
    }
    Ok(())
}

/// Number of leading nodes that touch `(0, delta]`.
pub(crate) fn active_nodes(traj: &Trajectory, delta: f64) -> usize {
    let nodes = traj.times();
    let tol = delta * 1e-12;
    let mut count = 0;
    for i in 0..nodes.len() {
        let start = if i == 0 { 0.0 } else { nodes[i - 1] };
        if start >= delta - tol {
            break;
        }
        count += 1;
    }
    count
}

pub fn weighted_mixed_norm(traj: &Trajectory, spec: &MixedNormSpec) -> Result<f64> {
    Ok(weighted_norm_terms(traj, spec)?.total())
}

/// All `(j, k)` terms; time derivatives come from the equation.
pub fn weighted_norm_terms(traj: &Trajectory, spec: &MixedNormSpec) -> Result<NormTerms> {
    spec.check_scaling(traj.domain().dim())?;
    check_horizon(traj, spec.delta)?;
    if spec.m == 0 {
        return weighted_norm_terms_from_levels(std::slice::from_ref(traj), spec);
    }
    let levels = time_derivatives(traj, spec.m as usize)?;
    weighted_norm_terms_from_levels(&levels, spec)
}

/// Terms from precomputed levels `D_t^0 u, ..., D_t^m u`.
pub fn weighted_norm_terms_from_levels(
    levels: &[Trajectory],
    spec: &MixedNormSpec,
) -> Result<NormTerms> {
    if levels.len() <= spec.m as usize {
        return Err(Error::InvalidArgument(format!(
            "{} derivative levels supplied, spec needs {}",
            levels.len(),
            spec.m + 1
        )));
    }
    let base = &levels[0];
    spec.check_scaling(base.domain().dim())?;
    check_horizon(base, spec.delta)?;
    let count = active_nodes(base, spec.delta);
    let nodes = &base.times()[..count];
    let mut values = Vec::with_capacity(((spec.m + 1) * (spec.n + 1)) as usize);
    for j in 0..=spec.m {
        let level = &levels[j as usize];
        for k in 0..=spec.n {
            let samples = level.states()[..count]
                .iter()
                .map(|s| derivative_lq_norm(s, k, spec.q))
                .collect::<Result<Vec<_>>>()?;
            let weight = j as f64 + 0.5 * k as f64;
            values.push(time_lp_norm(nodes, &samples, weight, spec.p, spec.delta));
        }
    }
    Ok(NormTerms {
        m: spec.m,
        n: spec.n,
        values,
    })
}
