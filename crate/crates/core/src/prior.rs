//! Unconditional (prior) moment flow.
//!
//! Averaging the posterior dynamics over all records removes the record terms
//! and leaves closed ODEs for the first and second moments of the
//! unconditional state under the linear force `F = hbar kappa x + m g`:
//!
//! ```text
//! d<X>/dt   = <P>/m
//! d<P>/dt   = hbar kappa <X> + m g
//! dVarX/dt  = 2 Cov / m
//! dCov/dt   = VarP / m + hbar kappa VarX
//! dVarP/dt  = 2 hbar kappa Cov + lambda hbar^2 / 2
//! ```
//!
//! The only measurement effect that survives the average is the momentum
//! heating `lambda hbar^2 / 2`.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

/// First and (symmetrized) second moments of the unconditional state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorMoments<T: Real> {
    pub mean_x: T,
    pub mean_p: T,
    pub var_x: T,
    pub var_p: T,
    /// Symmetrized covariance `<{X - <X>, P - <P>}>/2`.
    pub cov_xp: T,
}

impl<T: Real> PriorMoments<T> {
    /// Moments of a Gaussian packet with real width `sigma_q2` (minimal
    /// uncertainty, zero covariance).
    pub fn from_packet(q: T, p: T, sigma_q2: T, params: &ModelParams<T>) -> Result<Self> {
        if !(sigma_q2 > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "sigma_q2",
                reason: format!("must be positive, got {}", sigma_q2),
            });
        }
        let four = T::of(4.0);
        Ok(Self {
            mean_x: q,
            mean_p: p,
            var_x: sigma_q2,
            var_p: params.hbar * params.hbar / (four * sigma_q2),
            cov_xp: T::zero(),
        })
    }

    /// Uncertainty product `VarX VarP - Cov^2`; at least `hbar^2/4` for any
    /// physical state (Robertson-Schroedinger).
    pub fn uncertainty_product(&self) -> T {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp
    }
}

/// Right-hand side of the moment ODEs.
pub fn prior_rhs<T: Real>(m: &PriorMoments<T>, params: &ModelParams<T>) -> PriorMoments<T> {
    let two = T::of(2.0);
    let hk = params.hbar * params.kappa;
    PriorMoments {
        mean_x: m.mean_p / params.m,
        mean_p: hk * m.mean_x + params.m * params.g,
        var_x: two * m.cov_xp / params.m,
        cov_xp: m.var_p / params.m + hk * m.var_x,
        var_p: two * hk * m.cov_xp + params.lambda * params.hbar * params.hbar / two,
    }
}

fn axpy<T: Real>(m: &PriorMoments<T>, k: &PriorMoments<T>, h: T) -> PriorMoments<T> {
    PriorMoments {
        mean_x: m.mean_x + h * k.mean_x,
        mean_p: m.mean_p + h * k.mean_p,
        var_x: m.var_x + h * k.var_x,
        var_p: m.var_p + h * k.var_p,
        cov_xp: m.cov_xp + h * k.cov_xp,
    }
}

/// One classical RK4 step of the moment flow.
pub fn prior_rk4_step<T: Real>(
    m: &PriorMoments<T>,
    dt: T,
    params: &ModelParams<T>,
) -> PriorMoments<T> {
    let half = dt / T::of(2.0);
    let k1 = prior_rhs(m, params);
    let k2 = prior_rhs(&axpy(m, &k1, half), params);
    let k3 = prior_rhs(&axpy(m, &k2, half), params);
    let k4 = prior_rhs(&axpy(m, &k3, dt), params);
    let sixth = dt / T::of(6.0);
    let two = T::of(2.0);
    PriorMoments {
        mean_x: m.mean_x + sixth * (k1.mean_x + two * k2.mean_x + two * k3.mean_x + k4.mean_x),
        mean_p: m.mean_p + sixth * (k1.mean_p + two * k2.mean_p + two * k3.mean_p + k4.mean_p),
        var_x: m.var_x + sixth * (k1.var_x + two * k2.var_x + two * k3.var_x + k4.var_x),
        var_p: m.var_p + sixth * (k1.var_p + two * k2.var_p + two * k3.var_p + k4.var_p),
        cov_xp: m.cov_xp + sixth * (k1.cov_xp + two * k2.cov_xp + two * k3.cov_xp + k4.cov_xp),
    }
}

/// Integrates the moment flow, returning one entry per step including `t = 0`.
pub fn run_prior<T: Real>(
    init: &PriorMoments<T>,
    dt: T,
    t_final: T,
    params: &ModelParams<T>,
) -> Result<Vec<(T, PriorMoments<T>)>> {
    if !(dt > T::zero()) || t_final < dt {
        return Err(Error::Config(format!(
            "need dt > 0 and t_final >= dt, got dt = {}, t_final = {}",
            dt, t_final
        )));
    }
    let steps = (t_final / dt).round().to_usize().unwrap_or(1).max(1);
    let mut out = Vec::with_capacity(steps + 1);
    let mut m = *init;
    out.push((T::zero(), m));
    for k in 0..steps {
        m = prior_rk4_step(&m, dt, params);
        out.push((T::from_usize(k + 1).unwrap() * dt, m));
    }
    Ok(out)
}
