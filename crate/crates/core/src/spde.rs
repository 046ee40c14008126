//! Direct grid integration of the nonlinear posterior wave equation
//!
//! `d psi = [ (i hbar / 2m) psi'' - ( (i/hbar) phi + (lambda/4)(x - q_hat)^2 ) psi ] dt
//!          + sqrt(lambda/2) (x - q_hat) psi dYt`
//!
//! driven by the innovation increments `dYt = dW` as the primitive Wiener
//! noise; the observable record is reconstructed as
//! `dY = sqrt(2 lambda) q_hat dt + dW`.
//!
//! Two schemes are provided. `EulerMaruyama` applies the local (potential and
//! measurement) terms as an explicit Ito step and the kinetic term with an
//! unconditionally stable Crank-Nicolson solve on Dirichlet boundaries; a
//! fully explicit kinetic step has purely imaginary spectrum and amplifies
//! round-off without bound, so the implicit kinetic treatment is normative
//! here. `SplitStep` is Strang splitting with the exact Fourier kinetic
//! propagator and an exact exponential local step whose Ito-to-exponential
//! correction `-(lambda/4)(x-q_hat)^2 dt` is included.
//!
//! The nonlinearity is explicit: `q_hat` in a step always comes from the
//! pre-step state.

use crate::error::{Error, Result};
use crate::fft;
use crate::model::{
    gaussian_log_fit, grid_moments, grid_moments_spectral, GridSpec, GridState, ModelParams,
    Moments,
};
use crate::noise::NoiseSource;
use crate::scalar::{cplx, Cplx, Real};
use crate::series::{MeasurementRecord, SeriesRow, TrajectorySeries};

/// Per-step norm drift above which the run is declared unstable. The drift of
/// a healthy step is not zero: the measurement weighting multiplies the norm
/// by `1 + lambda <(x - q_hat)^2> (dW^2 - dt) / 2 + O(dt^{3/2})` (the exact
/// flow cancels this only through the Ito identity `dY^2 = dt`), so the limit
/// is applied to the drift in excess of that predictable fluctuation.
const NORM_DRIFT_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpdeScheme {
    EulerMaruyama,
    SplitStep,
}

impl SpdeScheme {
    pub fn name(&self) -> &'static str {
        match self {
            SpdeScheme::EulerMaruyama => "em",
            SpdeScheme::SplitStep => "splitstep",
        }
    }
}

/// Grid-run configuration.
#[derive(Debug, Clone, Copy)]
pub struct SpdeConfig<T: Real> {
    pub grid: GridSpec<T>,
    pub dt: T,
    pub t_final: T,
    pub scheme: SpdeScheme,
    /// Renormalize after every step (default on).
    pub renormalize: bool,
    /// Keep the packet centered by shifting whole grid cells; exact only for
    /// translation-invariant dynamics (kappa = 0), rejected otherwise.
    pub recenter: bool,
    /// Sample the Gaussianity fit residual every this many steps (0 = never).
    pub residual_every: usize,
}

impl<T: Real> SpdeConfig<T> {
    pub fn new(grid: GridSpec<T>, dt: T, t_final: T, scheme: SpdeScheme) -> Self {
        Self {
            grid,
            dt,
            t_final,
            scheme,
            renormalize: true,
            recenter: false,
            residual_every: 0,
        }
    }

    pub fn validate(&self, params: &ModelParams<T>) -> Result<()> {
        if !(self.dt > T::zero()) || self.t_final < self.dt {
            return Err(Error::Config(format!(
                "need dt > 0 and t_final >= dt, got dt = {}, t_final = {}",
                self.dt, self.t_final
            )));
        }
        match self.scheme {
            SpdeScheme::EulerMaruyama => {
                let bound = T::of(0.5) * params.m * self.grid.dx() * self.grid.dx() / params.hbar;
                if self.dt > bound {
                    return Err(Error::Config(format!(
                        "euler-maruyama stability bound: dt = {} exceeds 0.5 m dx^2 / hbar = {}",
                        self.dt, bound
                    )));
                }
            }
            SpdeScheme::SplitStep => {
                if !self.grid.n.is_power_of_two() {
                    return Err(Error::Config(format!(
                        "split-step requires a power-of-two grid size, got {}",
                        self.grid.n
                    )));
                }
            }
        }
        if self.recenter && params.kappa != T::zero() {
            return Err(Error::Config(
                "recentering is exact only for kappa = 0 (translation-invariant force)".into(),
            ));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().to_usize().unwrap_or(1).max(1)
    }
}

/// Output of one grid step.
#[derive(Debug, Clone)]
pub struct StepResult<T: Real> {
    pub state: GridState<T>,
    /// `q_hat` of the pre-step state, used in the nonlinearity and the record.
    pub q_hat_used: T,
    /// Pre-renormalization norm deviation `|norm - 1|`.
    pub norm_drift: T,
}

/// Record increment from the posterior mean and the innovation increment.
pub fn synthesize_record<T: Real>(q_hat: T, d_w: T, dt: T, params: &ModelParams<T>) -> T {
    (T::of(2.0) * params.lambda).sqrt() * q_hat * dt + d_w
}

fn mean_position<T: Real>(state: &GridState<T>) -> T {
    let dx = state.grid.dx();
    let mut acc = T::zero();
    for (j, z) in state.psi.iter().enumerate() {
        acc += state.grid.node(j) * z.norm_sqr();
    }
    acc * dx
}

fn position_variance<T: Real>(state: &GridState<T>, q_hat: T) -> T {
    let dx = state.grid.dx();
    let mut acc = T::zero();
    for (j, z) in state.psi.iter().enumerate() {
        let d = state.grid.node(j) - q_hat;
        acc += d * d * z.norm_sqr();
    }
    acc * dx
}

/// Complex Thomas solve for the Crank-Nicolson kinetic step
/// `(1 + 2r) psi'_j - r (psi'_{j-1} + psi'_{j+1}) = rhs_j`, Dirichlet ends.
fn crank_nicolson_kinetic<T: Real>(psi: &mut [Cplx<T>], dt: T, params: &ModelParams<T>, dx: T) {
    let n = psi.len();
    let r = cplx(T::zero(), params.hbar * dt / (T::of(4.0) * params.m * dx * dx));
    let two = T::of(2.0);
    let diag = cplx(T::one(), T::zero()) + r.scale(two);
    let rhs_diag = cplx(T::one(), T::zero()) - r.scale(two);

    let zero = cplx(T::zero(), T::zero());
    let mut rhs = vec![zero; n];
    for j in 0..n {
        let left = if j > 0 { psi[j - 1] } else { zero };
        let right = if j + 1 < n { psi[j + 1] } else { zero };
        rhs[j] = rhs_diag * psi[j] + r * (left + right);
    }

    // forward sweep
    let mut c_prime = vec![zero; n];
    let mut d_prime = vec![zero; n];
    let off = -r;
    c_prime[0] = off / diag;
    d_prime[0] = rhs[0] / diag;
    for j in 1..n {
        let denom = diag - off * c_prime[j - 1];
        c_prime[j] = off / denom;
        d_prime[j] = (rhs[j] - off * d_prime[j - 1]) / denom;
    }
    psi[n - 1] = d_prime[n - 1];
    for j in (0..n - 1).rev() {
        psi[j] = d_prime[j] - c_prime[j] * psi[j + 1];
    }
}

/// Exact Fourier kinetic propagator over time `tau` (periodic, power-of-two n).
fn spectral_kinetic<T: Real>(psi: &mut Vec<Cplx<T>>, tau: T, params: &ModelParams<T>, grid: &GridSpec<T>) {
    let n = psi.len();
    let l = grid.length();
    fft::fft(psi);
    let coef = params.hbar * tau / (T::of(2.0) * params.m);
    for (k, z) in psi.iter_mut().enumerate() {
        let kv = fft::wavenumber(k, n, l);
        let phase = -coef * kv * kv;
        *z = *z * cplx(phase.cos(), phase.sin());
    }
    fft::ifft(psi);
}

fn finish_step<T: Real>(
    mut state: GridState<T>,
    q_hat_used: T,
    weighting_scale: T,
    renormalize: bool,
) -> Result<StepResult<T>> {
    let norm = state.norm();
    let drift = (norm - T::one()).abs();
    if !drift.is_finite() || drift > T::of(NORM_DRIFT_LIMIT) + weighting_scale {
        return Err(Error::NormDriftExceeded { step: 0, drift: drift.as_f64() });
    }
    if renormalize {
        state.renormalize();
    }
    state.check_boundary()?;
    Ok(StepResult { state, q_hat_used, norm_drift: drift })
}

fn em_step_with_qhat<T: Real, P: Fn(T) -> T>(
    state: &GridState<T>,
    q_hat: T,
    d_w: T,
    dt: T,
    potential: &P,
    params: &ModelParams<T>,
    renormalize: bool,
) -> Result<StepResult<T>> {
    let grid = state.grid;
    let quarter_lambda = params.lambda / T::of(4.0);
    let b_coef = (params.lambda / T::of(2.0)).sqrt();
    let inv_hbar = T::one() / params.hbar;
    let one = cplx(T::one(), T::zero());

    let mut psi: Vec<Cplx<T>> = state
        .psi
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let x = grid.node(j);
            let d = x - q_hat;
            let a = cplx(-quarter_lambda * d * d, -potential(x) * inv_hbar);
            let b = b_coef * d;
            *z * (one + a.scale(dt) + cplx(b * d_w, T::zero()))
        })
        .collect();
    crank_nicolson_kinetic(&mut psi, dt, params, grid.dx());
    let scale = params.lambda * position_variance(state, q_hat) * (d_w * d_w + dt);
    finish_step(GridState { grid, psi }, q_hat, scale, renormalize)
}

fn split_step_with_qhat<T: Real, P: Fn(T) -> T>(
    state: &GridState<T>,
    q_hat: T,
    d_w: T,
    dt: T,
    potential: &P,
    params: &ModelParams<T>,
    renormalize: bool,
) -> Result<StepResult<T>> {
    let grid = state.grid;
    let half = dt / T::of(2.0);
    let half_lambda = params.lambda / T::of(2.0);
    let b_coef = half_lambda.sqrt();
    let inv_hbar = T::one() / params.hbar;

    let mut psi = state.psi.clone();
    spectral_kinetic(&mut psi, half, params, &grid);
    for (j, z) in psi.iter_mut().enumerate() {
        let x = grid.node(j);
        let d = x - q_hat;
        // Ito-consistent exponent: (a - b^2/2) dt + b dW
        let exponent = cplx(
            -half_lambda * d * d * dt + b_coef * d * d_w,
            -potential(x) * inv_hbar * dt,
        );
        *z = *z * exponent.exp();
    }
    spectral_kinetic(&mut psi, half, params, &grid);
    let scale = params.lambda * position_variance(state, q_hat) * (d_w * d_w + dt);
    finish_step(GridState { grid, psi }, q_hat, scale, renormalize)
}

/// One Euler-Maruyama step (explicit local terms, Crank-Nicolson kinetic).
pub fn spde_step<T: Real, P: Fn(T) -> T>(
    state: &GridState<T>,
    d_w: T,
    dt: T,
    potential: &P,
    params: &ModelParams<T>,
) -> Result<StepResult<T>> {
    let q_hat = mean_position(state);
    em_step_with_qhat(state, q_hat, d_w, dt, potential, params, true)
}

/// One Strang split step (half kinetic, exact exponential local step with the
/// Ito correction, half kinetic, renormalize).
pub fn split_step_substeps<T: Real, P: Fn(T) -> T>(
    state: &GridState<T>,
    d_w: T,
    dt: T,
    potential: &P,
    params: &ModelParams<T>,
) -> Result<StepResult<T>> {
    let q_hat = mean_position(state);
    split_step_with_qhat(state, q_hat, d_w, dt, potential, params, true)
}

/// A full trajectory plus its synthesized record.
#[derive(Debug, Clone)]
pub struct SpdeOutput<T: Real> {
    pub series: TrajectorySeries<T>,
    pub record: MeasurementRecord<T>,
    pub final_state: GridState<T>,
}

/// Failure carrying the partial series up to the failing step.
#[derive(Debug)]
pub struct SpdeRunError<T: Real> {
    pub step: usize,
    pub error: Error,
    pub partial: SpdeOutput<T>,
}

impl<T: Real> std::fmt::Display for SpdeRunError<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "grid run failed at step {}: {}", self.step, self.error)
    }
}

impl<T: Real> std::error::Error for SpdeRunError<T> {}

fn series_moments<T: Real>(state: &GridState<T>, params: &ModelParams<T>) -> Result<Moments<T>> {
    // spectral momentum overlaps when available: they avoid the O(dx^2)
    // central-difference deficit in tau_p2 that would otherwise push the
    // reported uncertainty product below hbar^2/4
    if state.psi.len().is_power_of_two() {
        grid_moments_spectral(state, params)
    } else {
        grid_moments(state, params)
    }
}

/// Integrates one trajectory. The series has one row per step plus `t = 0`;
/// on failure the partial series up to the failing step is returned inside
/// the error.
pub fn run_spde<T: Real, N: NoiseSource<T>, P: Fn(T) -> T>(
    init: &GridState<T>,
    noise: &N,
    config: &SpdeConfig<T>,
    potential: &P,
    params: &ModelParams<T>,
) -> std::result::Result<SpdeOutput<T>, SpdeRunError<T>> {
    let fail_at = |step: usize, error: Error, series: TrajectorySeries<T>, increments: Vec<T>, state: GridState<T>, noise: &N| {
        SpdeRunError {
            step,
            error,
            partial: SpdeOutput {
                series,
                record: MeasurementRecord {
                    dt: config.dt,
                    increments,
                    provenance: noise.provenance(),
                },
                final_state: state,
            },
        }
    };

    let steps = config.steps();
    let mut series = TrajectorySeries::with_capacity(steps + 1);
    let mut increments: Vec<T> = Vec::with_capacity(steps);
    let mut state = init.clone();
    let mut offset = T::zero();
    let dx = config.grid.dx();

    let setup = config
        .validate(params)
        .and_then(|_| state.check_boundary())
        .and_then(|_| series_moments(&state, params));
    let moments = match setup {
        Ok(m) => m,
        Err(e) => return Err(fail_at(0, e, series, increments, state, noise)),
    };

    let sample_residual = |k: usize| config.residual_every > 0 && k % config.residual_every == 0;
    let residual_at = |state: &GridState<T>, k: usize| -> Option<T> {
        if sample_residual(k) {
            gaussian_log_fit(state, params).ok().map(|f| f.residual)
        } else {
            None
        }
    };

    series.rows.push(SeriesRow {
        step: 0,
        t: T::zero(),
        q_hat: moments.q_hat + offset,
        p_hat: moments.p_hat,
        tau_q2: moments.tau_q2,
        tau_p2: moments.tau_p2,
        d_y: None,
        norm_drift: None,
        fit_residual: residual_at(&state, 0),
    });

    let mut q_hat_local = moments.q_hat;
    for k in 0..steps {
        let d_w = noise.increment(k as u64);
        let d_y = synthesize_record(q_hat_local + offset, d_w, config.dt, params);
        increments.push(d_y);

        let stepped = match config.scheme {
            SpdeScheme::EulerMaruyama => em_step_with_qhat(
                &state, q_hat_local, d_w, config.dt, potential, params, config.renormalize,
            ),
            SpdeScheme::SplitStep => split_step_with_qhat(
                &state, q_hat_local, d_w, config.dt, potential, params, config.renormalize,
            ),
        };
        let result = match stepped {
            Ok(r) => r,
            Err(e) => {
                let e = match e {
                    Error::NormDriftExceeded { drift, .. } => {
                        Error::NormDriftExceeded { step: k + 1, drift }
                    }
                    other => other,
                };
                return Err(fail_at(k + 1, e, series, increments, state, noise));
            }
        };
        state = result.state;

        if config.recenter {
            let cells = (mean_position(&state) / dx).round();
            if cells != T::zero() {
                let s = cells.to_isize().unwrap_or(0);
                shift_cells(&mut state.psi, s);
                offset += cells * dx;
            }
        }

        let moments = match series_moments(&state, params) {
            Ok(m) => m,
            Err(e) => return Err(fail_at(k + 1, e, series, increments, state, noise)),
        };
        q_hat_local = moments.q_hat;
        series.rows.push(SeriesRow {
            step: k + 1,
            t: T::from_usize(k + 1).unwrap() * config.dt,
            q_hat: moments.q_hat + offset,
            p_hat: moments.p_hat,
            tau_q2: moments.tau_q2,
            tau_p2: moments.tau_p2,
            d_y: Some(d_y),
            norm_drift: Some(result.norm_drift),
            fit_residual: residual_at(&state, k + 1),
        });
    }

    Ok(SpdeOutput {
        series,
        record: MeasurementRecord {
            dt: config.dt,
            increments,
            provenance: noise.provenance(),
        },
        final_state: state,
    })
}

/// Shifts samples by `s` whole cells (positive `s` moves content toward
/// lower indices), filling with zeros.
fn shift_cells<T: Real>(psi: &mut [Cplx<T>], s: isize) {
    let n = psi.len() as isize;
    let zero = cplx(T::zero(), T::zero());
    if s == 0 {
        return;
    }
    if s > 0 {
        for j in 0..n {
            let src = j + s;
            psi[j as usize] = if src < n { psi[src as usize] } else { zero };
        }
    } else {
        for j in (0..n).rev() {
            let src = j + s;
            psi[j as usize] = if src >= 0 { psi[src as usize] } else { zero };
        }
    }
}

/// Recommended domain for a scenario: `[q - 10 sigma_max, q + 10 sigma_max]`
/// where `sigma_max` covers both the initial and the stationary width.
pub fn recommended_domain<T: Real>(q: T, sigma_q2: T, params: &ModelParams<T>) -> (T, T) {
    let sigma_inf2 = crate::riccati::asymptotic_dispersions(params)
        .map(|(tq, _)| tq)
        .unwrap_or(sigma_q2);
    let sigma_max = sigma_q2.max(sigma_inf2).sqrt();
    let pad = T::of(10.0) * sigma_max;
    (q - pad, q + pad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::innovation;
    use crate::model::{gaussian_packet_with_omega, gaussian_wavefunction, quadratic_potential};
    use crate::noise::{NoiseStream, ZeroNoise};
    use crate::riccati::{alpha, dispersions, omega_closed_form};
    use approx::assert_relative_eq;

    fn unit_params(kappa: f64, lambda: f64) -> ModelParams<f64> {
        ModelParams::new(1.0, 1.0, kappa, 0.0, lambda).unwrap()
    }

    #[test]
    fn record_round_trip() {
        let p = unit_params(0.0, 2.0);
        // q_hat = 1, lambda = 2, dt = 0.01, dW = 0.03 -> dY = 0.02 + 0.03
        let d_y = synthesize_record(1.0, 0.03, 0.01, &p);
        assert_relative_eq!(d_y, 0.05, epsilon = 1e-15);
        assert_relative_eq!(innovation(d_y, 1.0, 0.01, &p), 0.03, epsilon = 1e-15);
        // lambda = 0 -> dY = dW
        let p0 = unit_params(0.0, 0.0);
        assert_eq!(synthesize_record(1.0, 0.07, 0.01, &p0), 0.07);
    }

    #[test]
    fn em_stability_bound_is_enforced() {
        let p = unit_params(0.0, 1.0);
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let config = SpdeConfig::new(grid, 1e-3, 1.0, SpdeScheme::EulerMaruyama);
        assert!(matches!(config.validate(&p), Err(Error::Config(_))));
        let config = SpdeConfig::new(grid, 4e-4, 1.0, SpdeScheme::EulerMaruyama);
        assert!(config.validate(&p).is_ok());
    }

    #[test]
    fn splitstep_requires_power_of_two() {
        let p = unit_params(0.0, 1.0);
        let grid = GridSpec::new(-8.0, 8.0, 500).unwrap();
        let config = SpdeConfig::new(grid, 1e-3, 1.0, SpdeScheme::SplitStep);
        assert!(matches!(config.validate(&p), Err(Error::Config(_))));
    }

    #[test]
    fn free_spreading_matches_riccati_oracle() {
        // lambda = 0, phi = 0: pure Schroedinger spreading; tau_q2 follows the
        // free Riccati limit, tau_q2(1) = 1.25 for sigma_q2 = 1
        let p = unit_params(0.0, 0.0);
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 1.0, &grid, &p).unwrap();
        let config = SpdeConfig::new(grid, 1e-4, 1.0, SpdeScheme::EulerMaruyama);
        let phi = |_x: f64| 0.0;
        let out = run_spde(&init, &ZeroNoise, &config, &phi, &p).unwrap();
        let last = out.series.last().unwrap();
        let omega_exact = omega_closed_form(1.0, cplx(-0.5, 0.0), &p).unwrap();
        let (tau_q2_exact, _) = dispersions(omega_exact, &p).unwrap();
        assert_relative_eq!(tau_q2_exact, 1.25, epsilon = 1e-12);
        assert!((last.tau_q2 - tau_q2_exact).abs() < 1e-4, "tau_q2 = {}", last.tau_q2);
    }

    #[test]
    fn stationary_packet_is_invariant_with_zero_innovation() {
        // omega = i alpha, q = p = 0, dW = 0: parameters unchanged within O(dt^2)
        let p = unit_params(0.0, 2.0);
        let ia = cplx(0.0, 1.0) * alpha(&p); // -1 + i
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let init = gaussian_packet_with_omega(0.0, 0.0, ia, &grid, &p).unwrap();
        let phi = quadratic_potential(&p);
        let dt = 1e-4;
        for step_fn in [spde_step::<f64, _>, split_step_substeps::<f64, _>] {
            let result = step_fn(&init, 0.0, dt, &|x| phi.value(x), &p).unwrap();
            let fit = gaussian_log_fit(&result.state, &p).unwrap();
            assert!((fit.omega - ia).norm() < 1e-4, "omega moved: {:?}", fit.omega);
            assert!(fit.q_fit.abs() < 1e-6, "q moved: {}", fit.q_fit);
            assert!(fit.p_fit.abs() < 1e-4, "p moved: {}", fit.p_fit);
        }
    }

    #[test]
    fn gaussianity_is_preserved_under_measurement() {
        let p = unit_params(0.0, 2.0);
        let grid = GridSpec::new(-8.0, 8.0, 256).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 1.0, &grid, &p).unwrap();
        let mut config = SpdeConfig::new(grid, 5e-4, 0.5, SpdeScheme::SplitStep);
        config.residual_every = 100;
        config.recenter = true;
        let phi = |_x: f64| 0.0;
        let noise = NoiseStream::new(17, 0, config.dt);
        let out = run_spde(&init, &noise, &config, &phi, &p).unwrap();
        let mut sampled = 0;
        for row in &out.series.rows {
            if let Some(res) = row.fit_residual {
                assert!(res <= 1e-3, "step {}: residual {res}", row.step);
                sampled += 1;
            }
        }
        assert!(sampled > 5);
    }

    #[test]
    fn width_tracks_closed_form_riccati() {
        // the fitted omega follows the deterministic width flow regardless of noise
        let p = unit_params(0.0, 2.0);
        let grid = GridSpec::new(-8.0, 8.0, 256).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 0.6, &grid, &p).unwrap();
        let mut config = SpdeConfig::new(grid, 5e-4, 1.0, SpdeScheme::SplitStep);
        config.recenter = true;
        let phi = |_x: f64| 0.0;
        let noise = NoiseStream::new(3, 1, config.dt);
        let out = run_spde(&init, &noise, &config, &phi, &p).unwrap();
        let fit = gaussian_log_fit(&out.final_state, &p).unwrap();
        let omega0 = cplx(-1.0 / (2.0 * 0.6), 0.0);
        let exact = omega_closed_form(1.0, omega0, &p).unwrap();
        assert!(
            (fit.omega - exact).norm() / exact.norm() < 1e-2,
            "fit {:?} vs exact {:?}",
            fit.omega,
            exact
        );
    }

    #[test]
    fn runs_are_deterministic() {
        let p = unit_params(0.0, 2.0);
        let grid = GridSpec::new(-8.0, 8.0, 128).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 1.0, &grid, &p).unwrap();
        let config = SpdeConfig::new(grid, 1e-3, 0.2, SpdeScheme::SplitStep);
        let phi = |_x: f64| 0.0;
        let noise = NoiseStream::new(42, 7, config.dt);
        let a = run_spde(&init, &noise, &config, &phi, &p).unwrap();
        let b = run_spde(&init, &noise, &config, &phi, &p).unwrap();
        for (ra, rb) in a.series.rows.iter().zip(&b.series.rows) {
            assert_eq!(ra.q_hat, rb.q_hat);
            assert_eq!(ra.tau_q2, rb.tau_q2);
        }
        assert_eq!(a.record.increments, b.record.increments);
    }

    #[test]
    fn split_step_conserves_energy_without_measurement() {
        // lambda = 0 harmonic oscillator: <H> drift stays below 1e-6 over t = 1
        let p = unit_params(-1.0, 0.0);
        let grid = GridSpec::new(-10.0, 10.0, 512).unwrap();
        let init = gaussian_wavefunction(0.8, 0.0, 0.7, &grid, &p).unwrap();
        let phi = quadratic_potential(&p);
        let config = SpdeConfig::new(grid, 5e-4, 1.0, SpdeScheme::SplitStep);
        let out = run_spde(&init, &ZeroNoise, &config, &|x| phi.value(x), &p).unwrap();

        let energy = |state: &GridState<f64>| -> f64 {
            let m = grid_moments_spectral(state, &p).unwrap();
            let p2 = m.tau_p2 + m.p_hat * m.p_hat;
            let dx = state.grid.dx();
            let pot: f64 = state
                .psi
                .iter()
                .enumerate()
                .map(|(j, z)| phi.value(state.grid.node(j)) * z.norm_sqr())
                .sum::<f64>()
                * dx;
            p2 / (2.0 * p.m) + pot
        };
        let e0 = energy(&init);
        let e1 = energy(&out.final_state);
        assert!(
            ((e1 - e0) / e0).abs() < 1e-6,
            "energy drifted from {e0} to {e1}"
        );
    }

    #[test]
    fn schemes_agree_pathwise() {
        // same-noise comparison: max |q_hat difference| <= 5 sqrt(dt) over t = 1
        let p = unit_params(0.0, 2.0);
        let grid = GridSpec::new(-8.0, 8.0, 512).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 1.0, &grid, &p).unwrap();
        let dt = 1e-4;
        let phi = |_x: f64| 0.0;
        let noise = NoiseStream::new(8, 0, dt);
        let config_em = SpdeConfig::new(grid, dt, 1.0, SpdeScheme::EulerMaruyama);
        let config_ss = SpdeConfig::new(grid, dt, 1.0, SpdeScheme::SplitStep);
        let em = run_spde(&init, &noise, &config_em, &phi, &p).unwrap();
        let ss = run_spde(&init, &noise, &config_ss, &phi, &p).unwrap();
        let mut max_diff: f64 = 0.0;
        for (a, b) in em.series.rows.iter().zip(&ss.series.rows) {
            max_diff = max_diff.max((a.q_hat - b.q_hat).abs());
        }
        assert!(max_diff <= 5.0 * dt.sqrt(), "max diff = {max_diff}");
    }

    #[test]
    fn boundary_hit_returns_partial_series() {
        // a fast packet slams into the wall; the error carries the prefix
        let p = unit_params(0.0, 0.0);
        let grid = GridSpec::new(-4.0, 4.0, 128).unwrap();
        let init = gaussian_wavefunction(0.0, 6.0, 0.25, &grid, &p).unwrap();
        let config = SpdeConfig::new(grid, 1e-3, 2.0, SpdeScheme::SplitStep);
        let phi = |_x: f64| 0.0;
        let err = run_spde(&init, &ZeroNoise, &config, &phi, &p).unwrap_err();
        assert!(matches!(err.error, Error::BoundaryViolation { .. }));
        assert!(err.step > 0);
        assert_eq!(err.partial.series.rows.len(), err.step);
        assert_eq!(err.partial.record.increments.len(), err.step);
    }

    #[test]
    fn recentering_keeps_a_drifting_packet_on_grid() {
        // uniform field, kappa = 0: recentering is exact up to a global phase
        let p = ModelParams::new(1.0, 1.0, 0.0, 3.0, 0.0).unwrap();
        // domain wide enough for free spreading: tau_q2(2) = 0.5 + 4/(4*0.5) = 2.5
        let grid = GridSpec::new(-16.0, 16.0, 512).unwrap();
        let init = gaussian_wavefunction(0.0, 0.0, 0.5, &grid, &p).unwrap();
        let phi = quadratic_potential(&p);
        let mut config = SpdeConfig::new(grid, 5e-4, 2.0, SpdeScheme::SplitStep);
        config.recenter = true;
        let out = run_spde(&init, &ZeroNoise, &config, &|x| phi.value(x), &p).unwrap();
        // classical kinematics: q(t) = g t^2 / 2 = 6 at t = 2
        let last = out.series.last().unwrap();
        assert_relative_eq!(last.q_hat, 6.0, epsilon = 1e-2);
        assert_relative_eq!(last.p_hat, 6.0, epsilon = 1e-2);
    }

    #[test]
    fn recentering_rejected_for_kappa() {
        let p = unit_params(-1.0, 1.0);
        let grid = GridSpec::new(-8.0, 8.0, 256).unwrap();
        let mut config = SpdeConfig::new(grid, 1e-3, 1.0, SpdeScheme::SplitStep);
        config.recenter = true;
        assert!(matches!(config.validate(&p), Err(Error::Config(_))));
    }
}
