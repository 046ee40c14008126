//! Scenario parameters, spatial grid, Gaussian packet construction and
//! moment/fit extraction from grid states.
//!
//! Conventions: the linear force is `F(x) = hbar*kappa*x + m*g`, realized by
//! the quadratic potential `phi(x) = -hbar*kappa*x^2/2 - m*g*x` (integration
//! constant fixed to zero; only `phi'` matters dynamically). The global phase
//! of a wavefunction is never tracked.

use crate::error::{Error, Result};
use crate::fft;
use crate::scalar::{cplx, Cplx, Real};

/// Relative amplitude below which `ln psi` is treated as noise-dominated.
pub const FIT_AMPLITUDE_THRESHOLD: f64 = 1e-6;

/// Minimum node count for a meaningful quadratic log-fit.
pub const MIN_FIT_NODES: usize = 8;

/// Physical constants defining one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T: Real> {
    /// Particle mass, > 0.
    pub m: T,
    /// Action quantum, > 0.
    pub hbar: T,
    /// Stiffness over hbar, `kappa = k/hbar`; its sign selects the watchdog case.
    pub kappa: T,
    /// Uniform acceleration.
    pub g: T,
    /// Measurement accuracy, >= 0 (0 is the unobserved limit).
    pub lambda: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(m: T, hbar: T, kappa: T, g: T, lambda: T) -> Result<Self> {
        let check_finite = |field: &'static str, v: T| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite, got {v}"),
                })
            }
        };
        check_finite("m", m)?;
        check_finite("hbar", hbar)?;
        check_finite("kappa", kappa)?;
        check_finite("g", g)?;
        check_finite("lambda", lambda)?;
        if m <= T::zero() {
            return Err(Error::InvalidParameter {
                field: "m",
                reason: format!("must be > 0, got {m}"),
            });
        }
        if hbar <= T::zero() {
            return Err(Error::InvalidParameter {
                field: "hbar",
                reason: format!("must be > 0, got {hbar}"),
            });
        }
        if lambda < T::zero() {
            return Err(Error::InvalidParameter {
                field: "lambda",
                reason: format!("must be >= 0, got {lambda}"),
            });
        }
        Ok(Self { m, hbar, kappa, g, lambda })
    }
}

/// Uniform spatial grid with nodes `x_j = x_min + j*dx`, `j = 0..n-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T: Real> {
    pub x_min: T,
    pub x_max: T,
    pub n: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(x_min: T, x_max: T, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidParameter {
                field: "grid",
                reason: format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidParameter {
                field: "grid.n",
                reason: format!("need even n >= 16, got {n}"),
            });
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize(self.n).unwrap()
    }

    pub fn length(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn node(&self, j: usize) -> T {
        self.x_min + T::from_usize(j).unwrap() * self.dx()
    }
}

/// Complex wavefunction samples on a [`GridSpec`], unit L2 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState<T: Real> {
    pub grid: GridSpec<T>,
    pub psi: Vec<Cplx<T>>,
}

impl<T: Real> GridState<T> {
    /// Discrete L2 norm, `sqrt(sum |psi_j|^2 dx)`.
    pub fn norm(&self) -> T {
        let dx = self.grid.dx();
        (self.psi.iter().map(|z| z.norm_sqr()).sum::<T>() * dx).sqrt()
    }

    /// Rescales to unit norm; returns the pre-renormalization norm.
    pub fn renormalize(&mut self) -> T {
        let norm = self.norm();
        let inv = T::one() / norm;
        for z in self.psi.iter_mut() {
            *z = z.scale(inv);
        }
        norm
    }

    pub fn max_amplitude(&self) -> T {
        self.psi
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Ratio of the edge amplitude to the peak amplitude.
    pub fn boundary_ratio(&self) -> T {
        let peak = self.max_amplitude();
        if peak == T::zero() {
            return T::one();
        }
        let edge = self.psi[0].norm().max(self.psi[self.psi.len() - 1].norm());
        edge / peak
    }

    /// Errors when the packet has reached the edge of the domain.
    pub fn check_boundary(&self) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > T::of(FIT_AMPLITUDE_THRESHOLD) {
            Err(Error::BoundaryViolation { ratio: ratio.as_f64() })
        } else {
            Ok(())
        }
    }

    fn check_normalized(&self) -> Result<()> {
        let drift = (self.norm() - T::one()).abs();
        let tol = T::epsilon() * T::of(1e4);
        if drift > tol {
            Err(Error::NormInvariant { drift: drift.as_f64() })
        } else {
            Ok(())
        }
    }
}

/// Posterior means and dispersions extracted from a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T: Real> {
    pub q_hat: T,
    pub p_hat: T,
    pub tau_q2: T,
    pub tau_p2: T,
}

/// `phi(x) = a x^2 + b x` with `a = -hbar*kappa/2`, `b = -m*g`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPotential<T: Real> {
    a: T,
    b: T,
}

impl<T: Real> QuadraticPotential<T> {
    pub fn value(&self, x: T) -> T {
        (self.a * x + self.b) * x
    }

    /// `phi'(x) = -(hbar*kappa*x + m*g)`, analytic.
    pub fn derivative(&self, x: T) -> T {
        T::of(2.0) * self.a * x + self.b
    }
}

/// Potential of the linear-force scenario.
pub fn quadratic_potential<T: Real>(params: &ModelParams<T>) -> QuadraticPotential<T> {
    QuadraticPotential {
        a: -params.hbar * params.kappa / T::of(2.0),
        b: -params.m * params.g,
    }
}

/// Gaussian wave packet with mean position `q`, mean momentum `p` and
/// position variance `sigma_q2`, sampled and renormalized on the grid.
pub fn gaussian_wavefunction<T: Real>(
    q: T,
    p: T,
    sigma_q2: T,
    grid: &GridSpec<T>,
    params: &ModelParams<T>,
) -> Result<GridState<T>> {
    if !(sigma_q2 > T::zero()) || !sigma_q2.is_finite() {
        return Err(Error::InvalidParameter {
            field: "sigma_q2",
            reason: format!("must be finite and > 0, got {sigma_q2}"),
        });
    }
    // initial width parameter is real: omega(0) = -hbar / (2 m sigma_q2)
    let omega = cplx(-params.hbar / (T::of(2.0) * params.m * sigma_q2), T::zero());
    gaussian_packet_with_omega(q, p, omega, grid, params)
}

/// Gaussian packet with a general complex width parameter `omega` (Re < 0):
/// `psi(x) ~ exp{ m*omega*(x-q)^2 / (2 hbar) + i p x / hbar }`.
pub fn gaussian_packet_with_omega<T: Real>(
    q: T,
    p: T,
    omega: Cplx<T>,
    grid: &GridSpec<T>,
    params: &ModelParams<T>,
) -> Result<GridState<T>> {
    if !(omega.re < T::zero()) {
        return Err(Error::NonNormalizable { re: omega.re.as_f64() });
    }
    let half_m_over_hbar = params.m / (T::of(2.0) * params.hbar);
    let inv_hbar = T::one() / params.hbar;
    let psi: Vec<Cplx<T>> = (0..grid.n)
        .map(|j| {
            let x = grid.node(j);
            let d = x - q;
            let exponent = omega.scale(half_m_over_hbar * d * d) + cplx(T::zero(), p * x * inv_hbar);
            exponent.exp()
        })
        .collect();
    let mut state = GridState { grid: *grid, psi };
    state.check_boundary()?;
    state.renormalize();
    Ok(state)
}

/// Means and dispersions by grid overlaps; derivatives are second-order
/// central differences with zero (Dirichlet) ghost values.
pub fn grid_moments<T: Real>(state: &GridState<T>, params: &ModelParams<T>) -> Result<Moments<T>> {
    state.check_normalized()?;
    let dx = state.grid.dx();
    let n = state.psi.len();
    let psi = &state.psi;

    let mut x_mean = T::zero();
    let mut x2_mean = T::zero();
    let mut p_mean = T::zero();
    let mut p2_mean = T::zero();
    let inv_2dx = T::one() / (T::of(2.0) * dx);
    let inv_dx2 = T::one() / (dx * dx);
    let zero = cplx(T::zero(), T::zero());
    for j in 0..n {
        let x = state.grid.node(j);
        let w = psi[j].norm_sqr();
        x_mean += x * w;
        x2_mean += x * x * w;
        let left = if j > 0 { psi[j - 1] } else { zero };
        let right = if j + 1 < n { psi[j + 1] } else { zero };
        let d1 = (right - left).scale(inv_2dx);
        let d2 = (right - psi[j].scale(T::of(2.0)) + left).scale(inv_dx2);
        let conj = psi[j].conj();
        p_mean += (conj * d1).im;
        p2_mean -= (conj * d2).re;
    }
    let hbar = params.hbar;
    let q_hat = x_mean * dx;
    let p_hat = hbar * p_mean * dx;
    let tau_q2 = x2_mean * dx - q_hat * q_hat;
    let tau_p2 = hbar * hbar * p2_mean * dx - p_hat * p_hat;
    Ok(Moments { q_hat, p_hat, tau_q2, tau_p2 })
}

/// Means and dispersions with spectral momentum overlaps (requires a
/// power-of-two grid). Position moments are identical to [`grid_moments`];
/// the momentum overlaps avoid the O(dx^2) central-difference bias.
pub fn grid_moments_spectral<T: Real>(
    state: &GridState<T>,
    params: &ModelParams<T>,
) -> Result<Moments<T>> {
    if !state.psi.len().is_power_of_two() {
        return Err(Error::Config(
            "spectral moments require a power-of-two grid size".into(),
        ));
    }
    state.check_normalized()?;
    let dx = state.grid.dx();
    let n = state.psi.len();
    let l = state.grid.length();

    let mut x_mean = T::zero();
    let mut x2_mean = T::zero();
    for j in 0..n {
        let x = state.grid.node(j);
        let w = state.psi[j].norm_sqr();
        x_mean += x * w;
        x2_mean += x * x * w;
    }
    let q_hat = x_mean * dx;
    let tau_q2 = x2_mean * dx - q_hat * q_hat;

    let mut spectrum = state.psi.clone();
    fft::fft(&mut spectrum);
    let mut total = T::zero();
    let mut k_mean = T::zero();
    let mut k2_mean = T::zero();
    for (k, z) in spectrum.iter().enumerate() {
        let w = z.norm_sqr();
        let kv = fft::wavenumber(k, n, l);
        total += w;
        k_mean += kv * w;
        k2_mean += kv * kv * w;
    }
    let hbar = params.hbar;
    let p_hat = hbar * k_mean / total;
    let tau_p2 = hbar * hbar * k2_mean / total - p_hat * p_hat;
    Ok(Moments { q_hat, p_hat, tau_q2, tau_p2 })
}

/// Result of fitting `hbar * ln(psi)` to a complex quadratic in `x`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianFit<T: Real> {
    /// Complex width parameter recovered from the quadratic coefficient.
    pub omega: Cplx<T>,
    pub q_fit: T,
    pub p_fit: T,
    /// RMS of the fit error relative to the RMS of `hbar * ln|psi|` over
    /// the fit nodes. Large values flag a non-Gaussian state.
    pub residual: T,
}

/// Least-squares fit of `hbar * ln(psi)` to `c0 + c1 x + c2 x^2` over nodes
/// with `|psi| > 1e-6 * max|psi|`, with the phase unwrapped along the grid.
/// The constant term (global phase and normalization) is discarded.
pub fn gaussian_log_fit<T: Real>(state: &GridState<T>, params: &ModelParams<T>) -> Result<GaussianFit<T>> {
    state.check_normalized()?;
    let peak = state.max_amplitude();
    let threshold = peak * T::of(FIT_AMPLITUDE_THRESHOLD);
    let nodes: Vec<usize> = (0..state.psi.len())
        .filter(|&j| state.psi[j].norm() > threshold)
        .collect();
    if nodes.len() < MIN_FIT_NODES {
        return Err(Error::DegenerateSupport { found: nodes.len(), need: MIN_FIT_NODES });
    }

    let hbar = params.hbar;
    let two_pi = T::of(2.0) * T::PI();
    let pi = T::PI();

    // T_j = hbar (ln r_j + i theta_j), phase unwrapped across the fit nodes
    let mut xs = Vec::with_capacity(nodes.len());
    let mut re = Vec::with_capacity(nodes.len());
    let mut im = Vec::with_capacity(nodes.len());
    let mut prev_raw = T::zero();
    let mut offset = T::zero();
    for (i, &j) in nodes.iter().enumerate() {
        let z = state.psi[j];
        let r = z.norm();
        let theta_raw = z.im.atan2(z.re);
        if i > 0 {
            let mut d = theta_raw - prev_raw;
            while d > pi {
                d -= two_pi;
            }
            while d <= -pi {
                d += two_pi;
            }
            offset = offset + d - (theta_raw - prev_raw);
        }
        prev_raw = theta_raw;
        xs.push(state.grid.node(j));
        re.push(hbar * r.ln());
        im.push(hbar * (theta_raw + offset));
    }

    // center the abscissa for conditioning
    let count = T::from_usize(xs.len()).unwrap();
    let x_bar = xs.iter().copied().sum::<T>() / count;
    let u: Vec<T> = xs.iter().map(|&x| x - x_bar).collect();

    let mut s = [T::zero(); 5];
    for &ui in &u {
        let mut p = T::one();
        for sk in s.iter_mut() {
            *sk += p;
            p = p * ui;
        }
    }
    let a = [
        [s[0], s[1], s[2]],
        [s[1], s[2], s[3]],
        [s[2], s[3], s[4]],
    ];
    let rhs_of = |y: &[T]| -> [T; 3] {
        let mut b = [T::zero(); 3];
        for (&ui, &yi) in u.iter().zip(y) {
            b[0] += yi;
            b[1] += ui * yi;
            b[2] += ui * ui * yi;
        }
        b
    };
    let c_re = solve3(a, rhs_of(&re)).ok_or(Error::DegenerateSupport {
        found: nodes.len(),
        need: MIN_FIT_NODES,
    })?;
    let c_im = solve3(a, rhs_of(&im)).ok_or(Error::DegenerateSupport {
        found: nodes.len(),
        need: MIN_FIT_NODES,
    })?;

    // translate back: T = d0 + d1 u + d2 u^2, u = x - x_bar
    let d1 = cplx(c_re[1], c_im[1]);
    let d2 = cplx(c_re[2], c_im[2]);
    let c1 = d1 - d2.scale(T::of(2.0) * x_bar);
    let c2 = d2;

    let omega = c2.scale(T::of(2.0) / params.m);
    let q_fit = if c2.re != T::zero() {
        -c1.re / (T::of(2.0) * c2.re)
    } else {
        T::zero()
    };
    let p_fit = c1.im + T::of(2.0) * c2.im * q_fit;

    let mut err2 = T::zero();
    let mut base2 = T::zero();
    for i in 0..u.len() {
        let fit_re = c_re[0] + u[i] * (c_re[1] + u[i] * c_re[2]);
        let fit_im = c_im[0] + u[i] * (c_im[1] + u[i] * c_im[2]);
        let er = re[i] - fit_re;
        let ei = im[i] - fit_im;
        err2 += er * er + ei * ei;
        base2 += re[i] * re[i];
    }
    let residual = (err2 / base2.max(T::epsilon())).sqrt();

    Ok(GaussianFit { omega, q_fit, p_fit, residual })
}

/// Gaussian elimination with partial pivoting for a 3x3 system.
fn solve3<T: Real>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() == T::zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [T::zero(); 3];
    for col in (0..3).rev() {
        let mut acc = b[col];
        for k in (col + 1)..3 {
            acc = acc - a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}
