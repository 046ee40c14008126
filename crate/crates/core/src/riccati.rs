//! The complex width parameter `omega(t)`: Riccati flow, closed form,
//! dispersions and their stationary limits.
//!
//! The flow is `d omega/dt = i (hbar*kappa/m + omega^2) - hbar*lambda/m`,
//! whose stationary point is `i*alpha` with
//! `alpha = sqrt(hbar/m) * sqrt(kappa + i*lambda)` on the branch with
//! `Im(alpha) >= 0` (the only branch giving a normalizable stationary packet).

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::{cplx, Cplx, Real};

/// One sample of the width flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaState<T: Real> {
    pub t: T,
    pub omega: Cplx<T>,
}

/// `alpha = sqrt(hbar/m) * sqrt(kappa + i*lambda)`, principal square root
/// (which has `Im >= 0` for `lambda >= 0`).
pub fn alpha<T: Real>(params: &ModelParams<T>) -> Cplx<T> {
    let root = cplx(params.kappa, params.lambda).sqrt();
    root.scale((params.hbar / params.m).sqrt())
}

/// Right-hand side of the width flow.
pub fn riccati_rhs<T: Real>(omega: Cplx<T>, params: &ModelParams<T>) -> Cplx<T> {
    let i = cplx(T::zero(), T::one());
    let hk_over_m = cplx(params.hbar * params.kappa / params.m, T::zero());
    i * (hk_over_m + omega * omega) - cplx(params.hbar * params.lambda / params.m, T::zero())
}

/// Closed-form solution of the width flow at time `t` from `omega0`.
///
/// Written with `E = exp(-2 alpha t)` instead of `tanh` so the stationary
/// branch decays cleanly; the `alpha -> 0` degeneracy (kappa = lambda = 0)
/// switches to the free-spreading limit `omega0 / (1 - i omega0 t)`.
pub fn omega_closed_form<T: Real>(
    t: T,
    omega0: Cplx<T>,
    params: &ModelParams<T>,
) -> Result<Cplx<T>> {
    if !(omega0.re < T::zero()) {
        return Err(Error::NonNormalizable { re: omega0.re.as_f64() });
    }
    let a = alpha(params);
    let i = cplx(T::zero(), T::one());
    if a.norm() * t < T::of(1e-6) {
        // free-spreading reduction
        let den = cplx(T::one(), T::zero()) - i * omega0.scale(t);
        return Ok(omega0 / den);
    }
    let ia = i * a;
    let e = (-a.scale(T::of(2.0) * t)).exp();
    let one = cplx(T::one(), T::zero());
    let num = omega0 * (one + e) + ia * (one - e);
    let den = ia * (one + e) + omega0 * (one - e);
    let scale = ia.norm() + omega0.norm();
    if den.norm() < T::epsilon() * T::of(1e2) * scale {
        return Err(Error::Singularity { t: t.as_f64() });
    }
    Ok(ia * num / den)
}

/// Classical 4th-order fixed-step advance of the width flow over `dt`.
pub fn rk4_omega_step<T: Real>(omega: Cplx<T>, dt: T, params: &ModelParams<T>) -> Cplx<T> {
    let half = dt / T::of(2.0);
    let k1 = riccati_rhs(omega, params);
    let k2 = riccati_rhs(omega + k1.scale(half), params);
    let k3 = riccati_rhs(omega + k2.scale(half), params);
    let k4 = riccati_rhs(omega + k3.scale(dt), params);
    omega + (k1 + (k2 + k3).scale(T::of(2.0)) + k4).scale(dt / T::of(6.0))
}

/// Integrates the width flow numerically; the returned series includes
/// `t = 0` and every step.
pub fn integrate_omega<T: Real>(
    omega0: Cplx<T>,
    dt: T,
    t_final: T,
    params: &ModelParams<T>,
) -> Result<Vec<OmegaState<T>>> {
    if !(dt > T::zero()) || t_final < dt {
        return Err(Error::Config(format!(
            "need dt > 0 and t_final >= dt, got dt = {dt}, t_final = {t_final}"
        )));
    }
    let steps = (t_final / dt).round().to_usize().unwrap_or(0).max(1);
    let mut series = Vec::with_capacity(steps + 1);
    let mut omega = omega0;
    series.push(OmegaState { t: T::zero(), omega });
    let guard = T::of(1e12);
    for k in 0..steps {
        omega = rk4_omega_step(omega, dt, params);
        if !omega.re.is_finite() || !omega.im.is_finite() || omega.norm() > guard {
            return Err(Error::Instability { step: k + 1 });
        }
        series.push(OmegaState {
            t: T::from_usize(k + 1).unwrap() * dt,
            omega,
        });
    }
    Ok(series)
}

/// Posterior dispersions for width parameter `omega` (Re < 0):
/// `tau_q2 = -hbar / (2 m Re omega)`, `tau_p2 = -hbar m |omega|^2 / (2 Re omega)`.
pub fn dispersions<T: Real>(omega: Cplx<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    if !(omega.re < T::zero()) {
        return Err(Error::NonNormalizable { re: omega.re.as_f64() });
    }
    let denom = T::of(2.0) * omega.re;
    let tau_q2 = -params.hbar / (params.m * denom);
    let tau_p2 = -params.hbar * params.m * omega.norm_sqr() / denom;
    Ok((tau_q2, tau_p2))
}

/// Stationary dispersions
/// `tau_q2(inf) = sqrt(hbar/2m) [sqrt(kappa^2+lambda^2) - kappa]^{-1/2}`,
/// `tau_p2(inf) = sqrt(hbar^3 m / 2) [(kappa^2+lambda^2)/(sqrt(kappa^2+lambda^2)-kappa)]^{1/2}`.
///
/// Defined for `lambda > 0`, or `lambda = 0` with `kappa < 0` (the unobserved
/// oscillator, whose limit is the ground-state width).
pub fn asymptotic_dispersions<T: Real>(params: &ModelParams<T>) -> Result<(T, T)> {
    if params.lambda <= T::zero() && params.kappa >= T::zero() {
        return Err(Error::NoStationaryLimit);
    }
    let s = (params.kappa * params.kappa + params.lambda * params.lambda).sqrt();
    let gap = s - params.kappa;
    let tau_q2 = (params.hbar / (T::of(2.0) * params.m)).sqrt() / gap.sqrt();
    let tau_p2 =
        (params.hbar.powi(3) * params.m / T::of(2.0)).sqrt() * (s * s / gap).sqrt();
    Ok((tau_q2, tau_p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(kappa: f64, lambda: f64) -> ModelParams<f64> {
        ModelParams::new(1.0, 1.0, kappa, 0.0, lambda).unwrap()
    }

    #[test]
    fn alpha_branch() {
        // (2i)^{1/2} on the principal branch is 1 + i
        let a = alpha(&params(0.0, 2.0));
        assert!((a - cplx(1.0, 1.0)).norm() < 1e-14);
        // real positive radicand
        let a = alpha(&params(1.0, 0.0));
        assert!((a - cplx(1.0, 0.0)).norm() < 1e-14);
        // (-1)^{1/2} with the Im >= 0 branch is i
        let a = alpha(&params(-1.0, 0.0));
        assert!((a - cplx(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rhs_fixed_point() {
        let p = params(0.0, 2.0);
        let ia = cplx(0.0, 1.0) * alpha(&p);
        assert!(riccati_rhs(ia, &p).norm() < 1e-14);
        // and on a non-unit-scale parameter set
        let p = ModelParams::new(3.0, 2.0, -1.7, 0.4, 0.9).unwrap();
        let ia = cplx(0.0, 1.0) * alpha(&p);
        assert!(riccati_rhs(ia, &p).norm() < 1e-14);
    }

    #[test]
    fn rhs_values() {
        // omega = -1, kappa = 0, lambda = 0 -> i
        let r = riccati_rhs(cplx(-1.0, 0.0), &params(0.0, 0.0));
        assert!((r - cplx(0.0, 1.0)).norm() < 1e-15);
        // omega = -1, kappa = -1, lambda = 1 -> i(-1+1) - 1 = -1
        let r = riccati_rhs(cplx(-1.0, 0.0), &params(-1.0, 1.0));
        assert!((r - cplx(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_fixed_point() {
        let p = params(-1.0, 1.0);
        let ia = cplx(0.0, 1.0) * alpha(&p);
        for t in [0.0, 0.5, 3.0, 20.0] {
            let w = omega_closed_form(t, ia, &p).unwrap();
            assert!((w - ia).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn closed_form_free_spreading() {
        // kappa = lambda = 0, omega0 = -1/2: omega(t) = -0.5/(1 + 0.5 i t)
        let p = params(0.0, 0.0);
        let w = omega_closed_form(2.0, cplx(-0.5, 0.0), &p).unwrap();
        assert!((w - cplx(-0.25, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn closed_form_attractor() {
        // kappa = 0, lambda = 2: omega -> i alpha = -1 + i
        let p = params(0.0, 2.0);
        let w = omega_closed_form(8.0, cplx(-0.5, 0.0), &p).unwrap();
        assert!((w - cplx(-1.0, 1.0)).norm() < 1e-6);
    }

    #[test]
    fn integrator_matches_closed_form() {
        let p = params(-1.0, 1.0);
        let omega0 = cplx(-0.5, 0.0);
        let series = integrate_omega(omega0, 1e-3, 5.0, &p).unwrap();
        for s in &series {
            let exact = omega_closed_form(s.t, omega0, &p).unwrap();
            assert!((s.omega - exact).norm() < 1e-8, "t = {}", s.t);
        }
    }

    #[test]
    fn integrator_fixed_point_is_constant() {
        let p = params(0.0, 2.0);
        let ia = cplx(0.0, 1.0) * alpha(&p);
        let series = integrate_omega(ia, 1e-2, 2.0, &p).unwrap();
        for s in &series {
            assert!((s.omega - ia).norm() < 1e-12);
        }
    }

    #[test]
    fn integrator_is_fourth_order() {
        let p = params(-2.0, 0.5);
        let omega0 = cplx(-1.5, 0.4);
        let max_err = |dt: f64| -> f64 {
            integrate_omega(omega0, dt, 2.0, &p)
                .unwrap()
                .iter()
                .map(|s| (s.omega - omega_closed_form(s.t, omega0, &p).unwrap()).norm())
                .fold(0.0, f64::max)
        };
        let e1 = max_err(4e-3);
        let e2 = max_err(2e-3);
        assert!(e1 / e2 >= 8.0, "ratio = {}", e1 / e2);
    }

    #[test]
    fn closed_form_satisfies_the_flow() {
        // central finite difference of the closed form vs the rhs
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..100 {
            let p = params(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
            let omega0 = cplx(rng.gen_range(-2.0..-0.1), rng.gen_range(-1.0..1.0));
            let t = rng.gen_range(0.1..3.0);
            let h = 1e-6;
            let wp = omega_closed_form(t + h, omega0, &p).unwrap();
            let wm = omega_closed_form(t - h, omega0, &p).unwrap();
            let fd = (wp - wm).scale(1.0 / (2.0 * h));
            let w = omega_closed_form(t, omega0, &p).unwrap();
            assert!((fd - riccati_rhs(w, &p)).norm() < 1e-5);
        }
    }

    #[test]
    fn flow_preserves_normalizability_and_attracts() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let p = params(rng.gen_range(-3.0..3.0), rng.gen_range(0.5..3.0));
            let omega0 = cplx(rng.gen_range(-2.0..-0.1), rng.gen_range(-1.0..1.0));
            let ia = cplx(0.0, 1.0) * alpha(&p);
            // the approach to i*alpha has rate 2 Re alpha; probe on that scale
            let rate = alpha(&p).re;
            let mut prev_dist = f64::INFINITY;
            for k in 0..=20 {
                let t = (4.0 + 0.5 * k as f64) / rate;
                let w = omega_closed_form(t, omega0, &p).unwrap();
                assert!(w.re < 0.0, "Re omega must stay negative");
                let d = (w - ia).norm();
                assert!(
                    d <= prev_dist * 1.001 + 1e-14,
                    "distance to i*alpha must shrink (t = {t})"
                );
                prev_dist = d;
            }
            // transient times as well: normalizability along the whole flow
            for k in 1..=40 {
                let w = omega_closed_form(0.1 * k as f64, omega0, &p).unwrap();
                assert!(w.re < 0.0);
            }
            let w = omega_closed_form(20.0 / rate, omega0, &p).unwrap();
            let (tq, tp) = dispersions(w, &p).unwrap();
            let (tq_inf, tp_inf) = asymptotic_dispersions(&p).unwrap();
            assert_relative_eq!(tq, tq_inf, max_relative = 1e-6);
            assert_relative_eq!(tp, tp_inf, max_relative = 1e-6);
        }
    }

    #[test]
    fn dispersion_values() {
        let p = params(0.0, 0.0);
        // real omega: minimal uncertainty
        let (tq, tp) = dispersions(cplx(-1.0, 0.0), &p).unwrap();
        assert_relative_eq!(tq, 0.5);
        assert_relative_eq!(tp, 0.5);
        assert_relative_eq!(tq * tp, 0.25);
        // |omega|^2 = 2
        let (tq, tp) = dispersions(cplx(-1.0, 1.0), &p).unwrap();
        assert_relative_eq!(tq, 0.5);
        assert_relative_eq!(tp, 1.0);
        assert!(matches!(
            dispersions(cplx(1.0, 0.0), &p),
            Err(Error::NonNormalizable { .. })
        ));
    }

    #[test]
    fn heisenberg_identity() {
        // tau_q2 * tau_p2 = (hbar^2/4)(1 + (Im/Re)^2)
        let p = ModelParams::new(1.4, 0.6, 0.0, 0.0, 0.0).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let w = cplx(rng.gen_range(-3.0..-0.01), rng.gen_range(-3.0..3.0));
            let (tq, tp) = dispersions(w, &p).unwrap();
            let ratio = w.im / w.re;
            let expect = p.hbar * p.hbar / 4.0 * (1.0 + ratio * ratio);
            assert_relative_eq!(tq * tp, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn asymptotics() {
        // free particle, lambda = 2: tau_q2(inf) = (1/4)^{1/2} = 0.5
        let (tq, _) = asymptotic_dispersions(&params(0.0, 2.0)).unwrap();
        assert_relative_eq!(tq, 0.5, epsilon = 1e-12);
        // oscillator with lambda -> 0+: unobserved ground-state width
        let (tq, _) = asymptotic_dispersions(&params(-1.0, 1e-12)).unwrap();
        assert_relative_eq!(tq, 0.5, epsilon = 1e-9);
        // watchdog case (a): narrower than the ground state
        let (tq, _) = asymptotic_dispersions(&params(-1.0, 1.0)).unwrap();
        assert_relative_eq!(tq, 0.45508986056222733, epsilon = 1e-12);
        assert!(tq < 0.5);
        assert!(matches!(
            asymptotic_dispersions(&params(0.0, 0.0)),
            Err(Error::NoStationaryLimit)
        ));
        assert!(matches!(
            asymptotic_dispersions(&params(1.0, 0.0)),
            Err(Error::NoStationaryLimit)
        ));
    }

    #[test]
    fn asymptotics_match_stationary_point() {
        for (kappa, lambda) in [(0.0, 2.0), (-1.0, 1.0), (1.0, 1.0), (3.0, 0.2), (-1.0, 0.0)] {
            let p = ModelParams::new(1.7, 0.9, kappa, 0.0, lambda).unwrap();
            let ia = cplx(0.0, 1.0) * alpha(&p);
            let (tq_s, tp_s) = dispersions(ia, &p).unwrap();
            let (tq_inf, tp_inf) = asymptotic_dispersions(&p).unwrap();
            assert_relative_eq!(tq_s, tq_inf, epsilon = 1e-12);
            assert_relative_eq!(tp_s, tp_inf, epsilon = 1e-12);
        }
    }

    #[test]
    fn divergence_is_reported() {
        // Re omega0 > 0 blows up under the flow for lambda = 0, kappa > 0
        let p = params(4.0, 0.0);
        let res = integrate_omega(cplx(5e11, 0.0), 0.5, 5.0, &p);
        assert!(matches!(res, Err(Error::Instability { .. })));
    }
}
