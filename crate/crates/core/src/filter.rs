//! Exact posterior dynamics within the Gaussian class: the width parameter
//! follows the deterministic Riccati flow while the posterior means obey
//! Hamilton-Langevin equations driven by the innovation
//! `dYt = dY - sqrt(2 lambda) q_hat dt`.
//!
//! The equivalent first-order form steps `w_hat = -omega q_hat + i p_hat / m`
//! driven by the raw record, `d w_hat = i (g + omega w_hat) dt
//! + sqrt(lambda/2) (hbar/m) dY`; the two parameterizations are algebraically
//! identical and [`filter_step_w`] exists as a cross-check.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::NoiseSource;
use crate::riccati::{dispersions, rk4_omega_step};
use crate::scalar::{cplx, Cplx, Real};
use crate::series::{MeasurementRecord, SeriesRow, TrajectorySeries};

/// Posterior Gaussian parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<T: Real> {
    pub q_hat: T,
    pub p_hat: T,
    /// Complex width parameter, `Re < 0`.
    pub omega: Cplx<T>,
    pub t: T,
}

impl<T: Real> GaussianState<T> {
    pub fn new(q_hat: T, p_hat: T, omega: Cplx<T>, t: T) -> Result<Self> {
        if !(omega.re < T::zero()) {
            return Err(Error::NonNormalizable { re: omega.re.as_f64() });
        }
        Ok(Self { q_hat, p_hat, omega, t })
    }

    /// State at `t = 0` from an initial packet width `sigma_q2`.
    pub fn from_packet(q: T, p: T, sigma_q2: T, params: &ModelParams<T>) -> Result<Self> {
        if !(sigma_q2 > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "sigma_q2",
                reason: format!("must be > 0, got {sigma_q2}"),
            });
        }
        let omega = cplx(-params.hbar / (T::of(2.0) * params.m * sigma_q2), T::zero());
        Self::new(q, p, omega, T::zero())
    }
}

/// `w_hat = -omega q_hat + (i/m) p_hat`.
pub fn w_from_qp<T: Real>(state: &GaussianState<T>, params: &ModelParams<T>) -> (Cplx<T>, Cplx<T>) {
    let w = -state.omega.scale(state.q_hat) + cplx(T::zero(), state.p_hat / params.m);
    (w, state.omega)
}

/// Inverse map: `q_hat = -Re w_hat / Re omega`, `p_hat = m Im[w_hat + omega q_hat]`.
pub fn qp_from_w<T: Real>(w_hat: Cplx<T>, omega: Cplx<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    if !(omega.re < T::zero()) {
        return Err(Error::NonNormalizable { re: omega.re.as_f64() });
    }
    let q_hat = -w_hat.re / omega.re;
    let p_hat = params.m * (w_hat + omega.scale(q_hat)).im;
    Ok((q_hat, p_hat))
}

/// Innovation transform `dYt = dY - sqrt(2 lambda) q_hat dt`.
pub fn innovation<T: Real>(d_y: T, q_hat: T, dt: T, params: &ModelParams<T>) -> T {
    d_y - (T::of(2.0) * params.lambda).sqrt() * q_hat * dt
}

/// One Euler-Maruyama step of the posterior means with a 4th-order
/// deterministic substep for the width. The position gain equals
/// `sqrt(2 lambda) tau_q2`.
pub fn filter_step<T: Real>(
    state: &GaussianState<T>,
    d_y: T,
    dt: T,
    params: &ModelParams<T>,
) -> Result<GaussianState<T>> {
    if !(state.omega.re < T::zero()) {
        return Err(Error::NonNormalizable { re: state.omega.re.as_f64() });
    }
    if !(dt > T::zero()) {
        return Err(Error::Config(format!("dt must be > 0, got {dt}")));
    }
    let d_yt = innovation(d_y, state.q_hat, dt, params);
    let half_lambda_sqrt = (params.lambda / T::of(2.0)).sqrt();
    let omega = state.omega;

    let dq = state.p_hat / params.m * dt
        - params.hbar / params.m * half_lambda_sqrt * d_yt / omega.re;
    let dp = (params.m * params.g + params.hbar * params.kappa * state.q_hat) * dt
        - params.hbar * half_lambda_sqrt * (omega.im / omega.re) * d_yt;

    let omega_next = rk4_omega_step(omega, dt, params);
    if !(omega_next.re < T::zero()) {
        return Err(Error::NonNormalizable { re: omega_next.re.as_f64() });
    }
    Ok(GaussianState {
        q_hat: state.q_hat + dq,
        p_hat: state.p_hat + dp,
        omega: omega_next,
        t: state.t + dt,
    })
}

/// The same step in the `w_hat` parameterization, driven by the raw record.
pub fn filter_step_w<T: Real>(
    state: &GaussianState<T>,
    d_y: T,
    dt: T,
    params: &ModelParams<T>,
) -> Result<GaussianState<T>> {
    let (w_hat, omega) = w_from_qp(state, params);
    let i = cplx(T::zero(), T::one());
    let drift = i * (cplx(params.g, T::zero()) + omega * w_hat);
    let gain = (params.lambda / T::of(2.0)).sqrt() * params.hbar / params.m;
    let w_next = w_hat + drift.scale(dt) + cplx(gain * d_y, T::zero());
    let omega_next = rk4_omega_step(omega, dt, params);
    let (q_hat, p_hat) = qp_from_w(w_next, omega_next, params)?;
    Ok(GaussianState { q_hat, p_hat, omega: omega_next, t: state.t + dt })
}

fn row_from_state<T: Real>(
    step: usize,
    state: &GaussianState<T>,
    d_y: Option<T>,
    params: &ModelParams<T>,
) -> Result<SeriesRow<T>> {
    let (tau_q2, tau_p2) = dispersions(state.omega, params)?;
    Ok(SeriesRow {
        step,
        t: state.t,
        q_hat: state.q_hat,
        p_hat: state.p_hat,
        tau_q2,
        tau_p2,
        d_y,
        norm_drift: None,
        fit_residual: None,
    })
}

/// Replays a measurement record through the filter. The series has one row
/// per increment plus the `t = 0` row.
pub fn run_filter<T: Real>(
    init: GaussianState<T>,
    record: &MeasurementRecord<T>,
    params: &ModelParams<T>,
) -> Result<TrajectorySeries<T>> {
    if record.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let mut series = TrajectorySeries::with_capacity(record.len() + 1);
    let mut state = init;
    series.rows.push(row_from_state(0, &state, None, params)?);
    for (k, &d_y) in record.increments.iter().enumerate() {
        state = filter_step(&state, d_y, record.dt, params).map_err(|e| match e {
            Error::NonNormalizable { .. } => Error::Instability { step: k + 1 },
            other => other,
        })?;
        series.rows.push(row_from_state(k + 1, &state, Some(d_y), params)?);
    }
    Ok(series)
}

/// Drives the filter with a synthetic record: the innovation increments are
/// the primitive Wiener increments, `dY = sqrt(2 lambda) q_hat dt + dW`.
pub fn run_filter_synthetic<T: Real, N: NoiseSource<T>>(
    init: GaussianState<T>,
    noise: &N,
    steps: usize,
    dt: T,
    params: &ModelParams<T>,
) -> Result<(TrajectorySeries<T>, MeasurementRecord<T>)> {
    if steps == 0 {
        return Err(Error::EmptyRecord);
    }
    let mut series = TrajectorySeries::with_capacity(steps + 1);
    let mut increments = Vec::with_capacity(steps);
    let mut state = init;
    series.rows.push(row_from_state(0, &state, None, params)?);
    let gain = (T::of(2.0) * params.lambda).sqrt();
    for k in 0..steps {
        let d_w = noise.increment(k as u64);
        let d_y = gain * state.q_hat * dt + d_w;
        increments.push(d_y);
        state = filter_step(&state, d_y, dt, params).map_err(|e| match e {
            Error::NonNormalizable { .. } => Error::Instability { step: k + 1 },
            other => other,
        })?;
        series.rows.push(row_from_state(k + 1, &state, Some(d_y), params)?);
    }
    let record = MeasurementRecord { dt, increments, provenance: noise.provenance() };
    Ok((series, record))
}
