//! Command-line front end: single runs, stationary-width tables, ensembles,
//! and convergence studies, with bit-exact CSV/manifest export.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qzeno::filter::{run_filter_synthetic, GaussianState};
use qzeno::model::{
    gaussian_wavefunction, grid_moments, quadratic_potential, GridSpec, ModelParams,
};
use qzeno::noise::{NoiseSource, NoiseStream, RecordProvenance};
use qzeno::prior::{run_prior, PriorMoments};
use qzeno::report::{series_to_csv, RunManifest};
use qzeno::riccati::{integrate_omega, omega_closed_form};
use qzeno::scalar::cplx;
use qzeno::series::{MeasurementRecord, SeriesRow, TrajectorySeries};
use qzeno::spde::{run_spde, SpdeConfig, SpdeScheme};
use rayon::prelude::*;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(name = "qzeno", version, about = "Continuously observed quantum particle simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and export CSV + manifest
    Simulate(SimulateArgs),
    /// Print the stationary posterior widths and the watchdog comparison
    Stationary(StationaryArgs),
    /// Run many trajectories and aggregate against the prior moments
    Ensemble(EnsembleArgs),
    /// Step-size / grid refinement study with fitted convergence order
    Converge(ConvergeArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Engine {
    Spde,
    Filter,
    Prior,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Spde => "spde",
            Engine::Filter => "filter",
            Engine::Prior => "prior",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Em,
    Splitstep,
}

impl Scheme {
    fn to_spde(self) -> SpdeScheme {
        match self {
            Scheme::Em => SpdeScheme::EulerMaruyama,
            Scheme::Splitstep => SpdeScheme::SplitStep,
        }
    }
}

#[derive(Args)]
struct PhysicsArgs {
    /// Particle mass
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Action quantum
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Stiffness over hbar (force F = hbar kappa x + m g)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    kappa: f64,
    /// Uniform acceleration
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    g: f64,
    /// Measurement accuracy
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl PhysicsArgs {
    fn params(&self) -> Result<ModelParams<f64>, qzeno::Error> {
        ModelParams::new(self.m, self.hbar, self.kappa, self.g, self.lambda)
    }
}

#[derive(Args)]
struct InitArgs {
    /// Initial position mean
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q0: f64,
    /// Initial momentum mean
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    p0: f64,
    /// Initial position variance
    #[arg(long = "sigma-q2", default_value_t = 1.0)]
    sigma_q2: f64,
}

#[derive(Args)]
struct NumericsArgs {
    /// Time step
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Horizon
    #[arg(long = "t-final", default_value_t = 1.0)]
    t_final: f64,
    /// Base RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid size (spde engine)
    #[arg(long = "grid-n", default_value_t = 512)]
    grid_n: usize,
    /// Grid left edge (spde engine)
    #[arg(long = "x-min", default_value_t = -8.0, allow_hyphen_values = true)]
    x_min: f64,
    /// Grid right edge (spde engine)
    #[arg(long = "x-max", default_value_t = 8.0, allow_hyphen_values = true)]
    x_max: f64,
    /// Grid integration scheme (spde engine)
    #[arg(long, value_enum, default_value_t = Scheme::Splitstep)]
    scheme: Scheme,
    /// Export every k-th step
    #[arg(long = "sample-every", default_value_t = 1)]
    sample_every: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Engine::Filter)]
    engine: Engine,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    init: InitArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Output CSV path; the manifest is written alongside as <out>.manifest
    #[arg(long, default_value = "trajectory.csv")]
    out: String,
}

#[derive(Args)]
struct StationaryArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long, value_enum, default_value_t = Engine::Filter)]
    engine: Engine,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    init: InitArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Number of trajectories
    #[arg(long, default_value_t = 1000)]
    trajectories: usize,
    /// Output CSV path for the aggregates
    #[arg(long, default_value = "ensemble.csv")]
    out: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConvergeEngine {
    Filter,
    Riccati,
    Spde,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, value_enum, default_value_t = ConvergeEngine::Filter)]
    engine: ConvergeEngine,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    init: InitArgs,
    #[command(flatten)]
    numerics: NumericsArgs,
    /// Number of refinement levels (>= 3)
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Independent noise realizations averaged in the filter study
    #[arg(long, default_value_t = 10)]
    trajectories: usize,
}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn base_manifest(physics: &PhysicsArgs, start: f64) -> RunManifest {
    let mut m = RunManifest::new();
    m.push("command", std::env::args().collect::<Vec<_>>().join(" "));
    m.push("start_time_unix", format!("{start:.3}"));
    m.push_float("m", physics.m);
    m.push_float("hbar", physics.hbar);
    m.push_float("kappa", physics.kappa);
    m.push_float("g", physics.g);
    m.push_float("lambda", physics.lambda);
    m
}

fn push_numerics(m: &mut RunManifest, n: &NumericsArgs, init: &InitArgs) {
    m.push_float("q0", init.q0);
    m.push_float("p0", init.p0);
    m.push_float("sigma_q2", init.sigma_q2);
    m.push_float("dt", n.dt);
    m.push_float("t_final", n.t_final);
    m.push("seed", n.seed);
    m.push("grid_n", n.grid_n);
    m.push_float("x_min", n.x_min);
    m.push_float("x_max", n.x_max);
    m.push("scheme", n.scheme.to_spde().name());
    m.push("sample_every", n.sample_every);
}

fn sampled(series: &TrajectorySeries<f64>, every: usize) -> TrajectorySeries<f64> {
    let every = every.max(1);
    let last = series.rows.len().saturating_sub(1);
    TrajectorySeries {
        rows: series
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| i % every == 0 || *i == last)
            .map(|(_, r)| *r)
            .collect(),
    }
}

fn write_outputs(
    out: &str,
    csv: &str,
    manifest: &mut RunManifest,
    status: &str,
) -> std::io::Result<()> {
    manifest.push("status", status);
    manifest.push("end_time_unix", format!("{:.3}", now_unix()));
    std::fs::write(out, csv)?;
    std::fs::write(format!("{out}.manifest"), manifest.render())
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

/// One trajectory of the requested engine with the stream for `index`.
fn single_trajectory(
    engine: Engine,
    params: &ModelParams<f64>,
    init: &InitArgs,
    n: &NumericsArgs,
    index: u64,
) -> Result<(TrajectorySeries<f64>, Option<MeasurementRecord<f64>>), String> {
    let steps = (n.t_final / n.dt).round().max(1.0) as usize;
    match engine {
        Engine::Filter => {
            let state = GaussianState::from_packet(init.q0, init.p0, init.sigma_q2, params)
                .map_err(|e| e.to_string())?;
            let noise = NoiseStream::new(n.seed, index, n.dt);
            let (series, record) = run_filter_synthetic(state, &noise, steps, n.dt, params)
                .map_err(|e| e.to_string())?;
            Ok((series, Some(record)))
        }
        Engine::Prior => {
            let m0 = PriorMoments::from_packet(init.q0, init.p0, init.sigma_q2, params)
                .map_err(|e| e.to_string())?;
            let flow = run_prior(&m0, n.dt, n.t_final, params).map_err(|e| e.to_string())?;
            let rows = flow
                .iter()
                .enumerate()
                .map(|(step, (t, m))| SeriesRow {
                    step,
                    t: *t,
                    q_hat: m.mean_x,
                    p_hat: m.mean_p,
                    tau_q2: m.var_x,
                    tau_p2: m.var_p,
                    d_y: None,
                    norm_drift: None,
                    fit_residual: None,
                })
                .collect();
            Ok((TrajectorySeries { rows }, None))
        }
        Engine::Spde => {
            let grid = GridSpec::new(n.x_min, n.x_max, n.grid_n).map_err(|e| e.to_string())?;
            let state = gaussian_wavefunction(init.q0, init.p0, init.sigma_q2, &grid, params)
                .map_err(|e| e.to_string())?;
            let mut config = SpdeConfig::new(grid, n.dt, n.t_final, n.scheme.to_spde());
            config.recenter = params.kappa == 0.0;
            config.residual_every = n.sample_every.max(1);
            let phi = quadratic_potential(params);
            let noise = NoiseStream::new(n.seed, index, n.dt);
            let out = run_spde(&state, &noise, &config, &|x| phi.value(x), params)
                .map_err(|e| e.to_string())?;
            Ok((out.series, Some(out.record)))
        }
    }
}

fn cmd_simulate(args: &SimulateArgs) -> ExitCode {
    let start = now_unix();
    let params = match args.physics.params() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let mut manifest = base_manifest(&args.physics, start);
    manifest.push("engine", args.engine.name());
    push_numerics(&mut manifest, &args.numerics, &args.init);

    // spde failures carry a partial series worth exporting
    let (series, status) = if args.engine == Engine::Spde {
        let grid = match GridSpec::new(args.numerics.x_min, args.numerics.x_max, args.numerics.grid_n)
        {
            Ok(g) => g,
            Err(e) => return usage_error(e),
        };
        let state = match gaussian_wavefunction(
            args.init.q0,
            args.init.p0,
            args.init.sigma_q2,
            &grid,
            &params,
        ) {
            Ok(s) => s,
            Err(e) => return usage_error(e),
        };
        let mut config = SpdeConfig::new(
            grid,
            args.numerics.dt,
            args.numerics.t_final,
            args.numerics.scheme.to_spde(),
        );
        config.recenter = params.kappa == 0.0;
        config.residual_every = args.numerics.sample_every.max(1);
        if let Err(e) = config.validate(&params) {
            return usage_error(e);
        }
        let phi = quadratic_potential(&params);
        let noise = NoiseStream::new(args.numerics.seed, 0, args.numerics.dt);
        match run_spde(&state, &noise, &config, &|x| phi.value(x), &params) {
            Ok(out) => (out.series, Ok(())),
            Err(e) => {
                let msg = e.to_string();
                (e.partial.series, Err(msg))
            }
        }
    } else {
        match single_trajectory(args.engine, &params, &args.init, &args.numerics, 0) {
            Ok((series, _)) => (series, Ok(())),
            Err(e) => return run_error(e),
        }
    };

    let csv = series_to_csv(&sampled(&series, args.numerics.sample_every));
    let status_str = match &status {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("failed: {e}"),
    };
    if let Err(io) = write_outputs(&args.out, &csv, &mut manifest, &status_str) {
        return run_error(format!("writing {}: {io}", args.out));
    }
    match status {
        Ok(()) => {
            println!("wrote {} ({} rows)", args.out, csv.lines().count() - 1);
            ExitCode::SUCCESS
        }
        Err(e) => run_error(format!("{e} (partial output written to {})", args.out)),
    }
}

fn cmd_stationary(args: &StationaryArgs) -> ExitCode {
    let params = match args.physics.params() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    match qzeno::riccati::asymptotic_dispersions(&params) {
        Ok((tau_q2, tau_p2)) => {
            println!("tau_q2_inf: {:.16e}", tau_q2);
            println!("tau_p2_inf: {:.16e}", tau_p2);
            println!("uncertainty_product: {:.16e}", tau_q2 * tau_p2);
            if params.kappa < 0.0 {
                // unobserved oscillator ground width hbar/(2 m w), w = sqrt(-hbar kappa / m)
                let w_osc = (-params.hbar * params.kappa / params.m).sqrt();
                let ground = params.hbar / (2.0 * params.m * w_osc);
                println!("unobserved_ground_width: {:.16e}", ground);
                println!(
                    "watchdog: {}",
                    if tau_q2 < ground { "narrowed" } else { "not narrowed" }
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => run_error(format!(
            "{e}: no stationary posterior width for lambda = {}, kappa = {} \
             (unobserved non-binding dynamics spreads forever)",
            params.lambda, params.kappa
        )),
    }
}

fn cmd_ensemble(args: &EnsembleArgs) -> ExitCode {
    let start = now_unix();
    let params = match args.physics.params() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    if args.trajectories < 2 {
        return usage_error("--trajectories must be >= 2");
    }
    if args.engine == Engine::Prior {
        return usage_error("ensemble requires a stochastic engine (filter or spde)");
    }
    let every = args.numerics.sample_every.max(1);

    // per-trajectory sampled (q_hat, tau_q2); distinct trajectory_index per
    // stream keeps all noise disjoint by construction
    let results: Vec<Result<Vec<(f64, f64)>, String>> = (0..args.trajectories)
        .into_par_iter()
        .map(|i| {
            single_trajectory(args.engine, &params, &args.init, &args.numerics, i as u64).map(
                |(series, _)| {
                    sampled(&series, every)
                        .rows
                        .iter()
                        .map(|r| (r.q_hat, r.tau_q2))
                        .collect()
                },
            )
        })
        .collect();

    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_err())
        .map(|(i, _)| i)
        .collect();
    for &i in &failed {
        if let Err(e) = &results[i] {
            eprintln!("trajectory {i} failed: {e}");
        }
    }
    if failed.len() * 10 > args.trajectories {
        return run_error(format!(
            "{} of {} trajectories failed (> 10%)",
            failed.len(),
            args.trajectories
        ));
    }
    let ok: Vec<&Vec<(f64, f64)>> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let m_eff = ok.len();

    let prior0 = match PriorMoments::from_packet(args.init.q0, args.init.p0, args.init.sigma_q2, &params)
    {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let prior_flow = match run_prior(&prior0, args.numerics.dt, args.numerics.t_final, &params) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let steps = prior_flow.len() - 1;
    let sampled_steps: Vec<usize> = (0..=steps).filter(|k| k % every == 0 || *k == steps).collect();

    let mut csv = String::from(
        "t,mean_q,var_q,mean_tau_q2,total_var,prior_mean_x,prior_var_x,z_mean,z_var\n",
    );
    let mut max_abs_z: f64 = 0.0;
    for (row_idx, &k) in sampled_steps.iter().enumerate() {
        let (t, prior) = prior_flow[k];
        let qs: Vec<f64> = ok.iter().map(|v| v[row_idx].0).collect();
        let mean_q = qs.iter().sum::<f64>() / m_eff as f64;
        let var_q =
            qs.iter().map(|q| (q - mean_q).powi(2)).sum::<f64>() / (m_eff as f64 - 1.0);
        let mean_tau = ok.iter().map(|v| v[row_idx].1).sum::<f64>() / m_eff as f64;
        let total_var = mean_tau + var_q;

        let se_mean = (var_q / m_eff as f64).sqrt();
        let se_var = var_q * (2.0 / (m_eff as f64 - 1.0)).sqrt();
        let z_mean = if se_mean > 0.0 { (mean_q - prior.mean_x) / se_mean } else { 0.0 };
        let z_var = if se_var > 0.0 { (total_var - prior.var_x) / se_var } else { 0.0 };
        if t > 0.0 {
            max_abs_z = max_abs_z.max(z_mean.abs()).max(z_var.abs());
        }
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            t, mean_q, var_q, mean_tau, total_var, prior.mean_x, prior.var_x, z_mean, z_var
        ));
    }

    let mut manifest = base_manifest(&args.physics, start);
    manifest.push("engine", args.engine.name());
    push_numerics(&mut manifest, &args.numerics, &args.init);
    manifest.push("trajectories", args.trajectories);
    manifest.push("failed_trajectories", failed.len());
    if let Err(io) = write_outputs(&args.out, &csv, &mut manifest, "ok") {
        return run_error(format!("writing {}: {io}", args.out));
    }
    println!(
        "wrote {} ({} trajectories, {} failed, max |z| = {:.3})",
        args.out,
        m_eff,
        failed.len(),
        max_abs_z
    );
    ExitCode::SUCCESS
}

/// Least-squares slope of ln(err) against ln(dt).
fn fitted_order(levels: &[(f64, f64)]) -> f64 {
    let n = levels.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, e) in levels {
        let x = h.ln();
        let y = e.max(f64::MIN_POSITIVE).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn report_levels(label: &str, levels: &[(f64, f64)]) -> (f64, bool) {
    for &(h, e) in levels {
        println!("{label}: h = {h:.6e}  error = {e:.6e}");
    }
    let order = fitted_order(levels);
    let monotone = levels.windows(2).all(|w| w[1].1 <= w[0].1);
    println!("{label}: fitted order = {order:.3}");
    if !monotone {
        println!("{label}: WARNING error not monotone across levels");
    }
    (order, monotone)
}

fn cmd_converge(args: &ConvergeArgs) -> ExitCode {
    let params = match args.physics.params() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    if args.levels < 3 {
        return usage_error("--levels must be >= 3");
    }
    let n = &args.numerics;
    match args.engine {
        ConvergeEngine::Riccati => {
            let omega0 = cplx(-params.hbar / (2.0 * params.m * args.init.sigma_q2), 0.0);
            let mut levels = Vec::new();
            for j in 0..args.levels {
                let dt = n.dt / (1u32 << j) as f64;
                let series = match integrate_omega(omega0, dt, n.t_final, &params) {
                    Ok(s) => s,
                    Err(e) => return run_error(e),
                };
                let mut sup: f64 = 0.0;
                for s in &series {
                    let exact = match omega_closed_form(s.t, omega0, &params) {
                        Ok(v) => v,
                        Err(e) => return run_error(e),
                    };
                    sup = sup.max((s.omega - exact).norm());
                }
                levels.push((dt, sup));
            }
            let (order, monotone) = report_levels("riccati", &levels);
            if !monotone || order < 3.5 {
                return run_error(format!("riccati order check failed (order = {order:.3})"));
            }
            ExitCode::SUCCESS
        }
        ConvergeEngine::Spde => {
            // spatial order on an analytic packet: grid moments vs closed form
            let mut levels = Vec::new();
            for j in 0..args.levels {
                let grid_n = n.grid_n << j;
                let grid = match GridSpec::new(n.x_min, n.x_max, grid_n) {
                    Ok(g) => g,
                    Err(e) => return usage_error(e),
                };
                let state = match gaussian_wavefunction(
                    args.init.q0,
                    args.init.p0,
                    args.init.sigma_q2,
                    &grid,
                    &params,
                ) {
                    Ok(s) => s,
                    Err(e) => return usage_error(e),
                };
                let m = match grid_moments(&state, &params) {
                    Ok(m) => m,
                    Err(e) => return run_error(e),
                };
                let exact_tau_p2 = params.hbar * params.hbar / (4.0 * args.init.sigma_q2);
                let err = (m.tau_p2 - exact_tau_p2).abs()
                    + (m.p_hat - args.init.p0).abs()
                    + (m.tau_q2 - args.init.sigma_q2).abs();
                levels.push((grid.dx(), err));
            }
            let (order, monotone) = report_levels("spde-spatial", &levels);
            if !monotone || order < 1.5 {
                return run_error(format!("spatial order check failed (order = {order:.3})"));
            }
            ExitCode::SUCCESS
        }
        ConvergeEngine::Filter => {
            // strong self-refinement: coarse increments are sums of fine ones
            let init = match GaussianState::from_packet(
                args.init.q0,
                args.init.p0,
                args.init.sigma_q2,
                &params,
            ) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let ref_factor = 1usize << args.levels;
            let dt_ref = n.dt / ref_factor as f64;
            let steps_ref = (n.t_final / dt_ref).round() as usize;
            let mut sums = vec![0.0; args.levels];
            for traj in 0..args.trajectories.max(1) {
                let noise = NoiseStream::new(n.seed, traj as u64, dt_ref);
                let fine: Vec<f64> = (0..steps_ref).map(|k| noise.increment(k as u64)).collect();
                let run_at = |window: usize| -> Result<f64, qzeno::Error> {
                    let dt = dt_ref * window as f64;
                    let record = MeasurementRecord {
                        dt,
                        increments: fine
                            .chunks(window)
                            .map(|c| c.iter().sum::<f64>())
                            .collect(),
                        provenance: RecordProvenance::External,
                    };
                    // the record is the primitive data here; its coarse-level
                    // increments are exactly the windowed sums of the fine ones
                    let series = qzeno::filter::run_filter(init, &record, &params)?;
                    Ok(series.last().unwrap().q_hat)
                };
                let q_ref = match run_at(1) {
                    Ok(v) => v,
                    Err(e) => return run_error(e),
                };
                for j in 0..args.levels {
                    // level j runs at dt = n.dt / 2^j with window-summed increments
                    let window = ref_factor >> j;
                    match run_at(window) {
                        Ok(q) => sums[j] += (q - q_ref).abs(),
                        Err(e) => return run_error(e),
                    }
                }
            }
            let mut levels = Vec::new();
            for (j, sum) in sums.iter().enumerate() {
                let dt = n.dt / (1u32 << j) as f64;
                levels.push((dt, sum / args.trajectories.max(1) as f64));
            }
            let (order, monotone) = report_levels("filter", &levels);
            if !monotone || order < 0.45 {
                return run_error(format!("strong order check failed (order = {order:.3})"));
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Stationary(args) => cmd_stationary(args),
        Command::Ensemble(args) => cmd_ensemble(args),
        Command::Converge(args) => cmd_converge(args),
    }
}
