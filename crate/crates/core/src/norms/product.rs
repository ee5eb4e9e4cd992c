use crate::error::{Error, Result};
use crate::field::{multi_indices, physical_lebesgue_norm, SpectralField};
use crate::mild::Trajectory;
use crate::norms::mixed::{active_nodes, check_horizon, time_lp_norm, MixedNormSpec};

/// Pointwise Euclidean length of the full tensor `grad^order f`.
fn derivative_magnitude(f: &SpectralField, order: u32) -> Result<Vec<f64>> {
    let len = f.domain().len();
    let mut sq = vec![0.0; len];
    for alpha in multi_indices(f.domain().dim(), order) {
        for comp in f.derivative(&alpha)?.to_physical() {
            for (acc, v) in sq.iter_mut().zip(comp) {
                *acc += v * v;
            }
        }
    }
    Ok(sq.into_iter().map(f64::sqrt).collect())
}

/// `|| t^{(sum n_j + k - 1)/2} prod_j |grad^{n_j} u| ||_{L^q_x L^p_t(0,delta)}`
/// for `k = orders.len()` factors.
pub fn product_norm(traj: &Trajectory, orders: &[u32], q: f64, p: f64, delta: f64) -> Result<f64> {
    let k = orders.len();
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "product norms take 2 or 3 factors, got {k}"
        )));
    }
    let spec = MixedNormSpec::new(p, q, 0, 0, delta)?;
    spec.check_scaling(traj.domain().dim())?;
    check_horizon(traj, delta)?;
    let count = active_nodes(traj, delta);
    let domain = traj.domain();
    let mut samples = Vec::with_capacity(count);
    for state in &traj.states()[..count] {
        let mut prod = vec![1.0; domain.len()];
        for &order in orders {
            for (acc, v) in prod.iter_mut().zip(derivative_magnitude(state, order)?) {
                *acc *= v;
            }
        }
        samples.push(physical_lebesgue_norm(domain, &[prod], q));
    }
    let weight = 0.5 * (orders.iter().sum::<u32>() as f64 + k as f64 - 1.0);
    Ok(time_lp_norm(&traj.times()[..count], &samples, weight, p, delta))
}
