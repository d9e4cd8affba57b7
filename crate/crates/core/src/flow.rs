//! Time integration of the parabolic Monge–Ampère potential equation
//!     du/dt = log(det(g̃ + ddbar u) / det g̃) + c u + f
//! with classical fourth-order Runge–Kutta on the method-of-lines system,
//! positivity guarding at every stage, and monitor sampling at a fixed
//! cadence. Trajectories run at c = 0 (on the torus c g̃ is not ddbar-exact,
//! so no Ricci potential exists for c != 0); nonzero c stays available to
//! the frozen-time residual operations.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::connection::ChristoffelField;
use crate::error::KrfError;
use crate::field::ScalarField;
use crate::grid::{make_grid, GridSpec};
use crate::metric::MetricField;
use crate::monitor::{self, MonitorRecord};
use crate::spectral;

/// Initial/reference potential descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// amplitude * cos(2 pi x_axis), axis over the 2n real coordinates
    Cosine { amplitude: f64, axis: usize },
    BandLimited { k: usize, amplitude: f64, seed: u64 },
}

impl PotentialSpec {
    pub fn build(&self, spec: &GridSpec) -> Result<ScalarField, KrfError> {
        match *self {
            PotentialSpec::Zero => Ok(ScalarField::zeros(spec)),
            PotentialSpec::Cosine { amplitude, axis } => {
                if axis >= spec.axes() {
                    return Err(KrfError::InvalidConfig("cosine axis out of range"));
                }
                Ok(ScalarField::from_fn(spec, |p| {
                    let theta = 2.0 * core::f64::consts::PI * spec.coord(p, axis);
                    Complex64::new(amplitude * libm::cos(theta), 0.0)
                }))
            }
            PotentialSpec::BandLimited { k, amplitude, seed } => {
                spectral::random_bandlimited(spec, k, amplitude, seed)
            }
        }
    }
}

/// Flow run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub n: usize,
    pub n_res: usize,
    pub c: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_fixed: Option<f64>,
    /// steps between monitor records / snapshots
    pub cadence: usize,
    pub margin: f64,
    pub initial: PotentialSpec,
    pub reference: PotentialSpec,
    pub k_max: usize,
    pub m_max: usize,
}

impl FlowConfig {
    pub fn validate(&self) -> Result<(), KrfError> {
        if !(self.t_end > 0.0) {
            return Err(KrfError::InvalidConfig("t_end must be positive"));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(KrfError::InvalidConfig("cfl must lie in (0, 1]"));
        }
        if self.cadence == 0 {
            return Err(KrfError::InvalidConfig("cadence must be at least 1"));
        }
        if self.k_max > 2 {
            return Err(KrfError::InvalidConfig("k_max is capped at 2"));
        }
        if self.m_max > 3 {
            return Err(KrfError::InvalidConfig("m_max is capped at 3"));
        }
        if let Some(dt) = self.dt_fixed {
            if !(dt > 0.0) {
                return Err(KrfError::InvalidConfig("dt_fixed must be positive"));
            }
        }
        Ok(())
    }
}

/// Immutable spatial context of one run.
pub struct FlowContext {
    pub spec: GridSpec,
    pub phi0: ScalarField,
    pub g_ref: MetricField,
    pub log_det_ref: Vec<f64>,
    pub f: ScalarField,
    pub sup_f: f64,
    pub c: f64,
    pub margin: f64,
}

/// Snapshot of the potential state at one sample time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub u: ScalarField,
    pub w: ScalarField,
}

/// Flow state: time, potential, velocity cache and assembled metric.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub u: ScalarField,
    pub w: ScalarField,
    pub g: MetricField,
    pub steps: u64,
    pub last_dt: f64,
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    ReachedTEnd,
    PositivityLoss {
        point: usize,
        eigenvalue: f64,
        stage: usize,
        t: f64,
    },
    NanDetected {
        t: f64,
    },
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::PositivityLoss { .. } => "positivity_loss",
            Termination::NanDetected { .. } => "nan_detected",
        }
    }
}

/// Everything a completed (or broken-down) run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<MonitorRecord>,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    pub steps: u64,
    pub sup_f: f64,
    pub custom_f: bool,
}

/// Ricci potential of the reference metric: f = log det g̃ normalized to
/// zero mean, so that ddbar f = -Ric(g̃). Only c = 0 admits this potential
/// on the torus.
pub fn ricci_potential(g_ref: &MetricField, c: f64) -> Result<ScalarField, KrfError> {
    if c != 0.0 {
        return Err(KrfError::NonexactClass);
    }
    let logdet = g_ref.log_det();
    let mean = spectral::integrate(&logdet).re;
    Ok(logdet.map(|v| Complex64::new(v.re - mean, 0.0)))
}

/// Right side of the Monge–Ampère equation at potential u, together with
/// the assembled metric. Admissibility failures propagate.
pub fn ma_rhs(u: &ScalarField, ctx: &FlowContext) -> Result<(ScalarField, MetricField), KrfError> {
    let phi = ctx.phi0.add(u);
    let g = MetricField::from_potential(&phi, None, ctx.margin)?;
    let w = ScalarField::from_fn(&ctx.spec, |q| {
        Complex64::new(libm::log(g.det()[q]) - ctx.log_det_ref[q], 0.0)
            + ctx.c * u.values()[q]
            + ctx.f.values()[q]
    });
    Ok((w, g))
}

/// Heat-stability step bound dt = cfl / (Lambda (pi N)^2), Lambda the grid
/// maximum of the largest inverse-metric eigenvalue.
pub fn stable_dt(g: &MetricField, cfl: f64) -> f64 {
    let lambda = g.max_inverse_eigenvalue();
    let n_res = g.spec().res() as f64;
    let pi_n = core::f64::consts::PI * n_res;
    cfl / (lambda * pi_n * pi_n)
}

/// One classical RK4 step. The state's cached w doubles as the first stage.
/// No spectral filtering is applied: the nonlinearity is pointwise (log det),
/// band-limited data stays effectively band-limited under stable steps, and
/// filtering would perturb the two-path identity residuals.
pub fn step(state: &FlowState, dt: f64, ctx: &FlowContext) -> Result<FlowState, KrfError> {
    if !(dt > 0.0) {
        return Err(KrfError::InvalidConfig("dt must be positive"));
    }
    let tag = |e: KrfError, stage: usize| match e {
        KrfError::PositivityLoss {
            point, eigenvalue, ..
        } => KrfError::PositivityLoss {
            point,
            eigenvalue,
            stage,
        },
        other => other,
    };
    let k1 = &state.w;
    let (k2, _) = ma_rhs(&state.u.add(&k1.scale(0.5 * dt)), ctx).map_err(|e| tag(e, 1))?;
    let (k3, _) = ma_rhs(&state.u.add(&k2.scale(0.5 * dt)), ctx).map_err(|e| tag(e, 2))?;
    let (k4, _) = ma_rhs(&state.u.add(&k3.scale(dt)), ctx).map_err(|e| tag(e, 3))?;
    let incr = k1
        .add(&k2.scale(2.0))
        .add(&k3.scale(2.0))
        .add(&k4)
        .scale(dt / 6.0);
    let u_new = state.u.add(&incr);
    let (w_new, g_new) = ma_rhs(&u_new, ctx).map_err(|e| tag(e, 4))?;
    Ok(FlowState {
        t: state.t + dt,
        u: u_new,
        w: w_new,
        g: g_new,
        steps: state.steps + 1,
        last_dt: dt,
    })
}

/// Build the spatial context of a run (grid, reference metric, driving
/// potential). `f_override` replaces the Ricci potential when supplied.
pub fn build_context(
    config: &FlowConfig,
    f_override: Option<ScalarField>,
) -> Result<(FlowContext, bool), KrfError> {
    config.validate()?;
    if config.c != 0.0 {
        return Err(KrfError::InvalidConfig(
            "flow trajectories support c = 0 only",
        ));
    }
    let spec = make_grid(config.n, config.n_res)?;
    let phi0 = config.reference.build(&spec)?;
    let g_ref = MetricField::from_potential(&phi0, None, config.margin)?;
    let log_det_ref = g_ref.det().iter().map(|&d| libm::log(d)).collect();
    let custom_f = f_override.is_some();
    let f = match f_override {
        Some(f) => f,
        None => ricci_potential(&g_ref, config.c)?,
    };
    let sup_f = f.max_abs();
    Ok((
        FlowContext {
            spec,
            phi0,
            g_ref,
            log_det_ref,
            f,
            sup_f,
            c: config.c,
            margin: config.margin,
        },
        custom_f,
    ))
}

/// Integrate from t = 0 to t_end or breakdown, emitting records and
/// snapshots every `cadence` steps. Breakdown is a reported outcome, never
/// a silent error.
pub fn run(config: &FlowConfig) -> Result<RunOutcome, KrfError> {
    run_with(config, None)
}

pub fn run_with(
    config: &FlowConfig,
    f_override: Option<ScalarField>,
) -> Result<RunOutcome, KrfError> {
    let (ctx, custom_f) = build_context(config, f_override)?;
    let base = MetricField::flat(&ctx.spec);
    let gamma_base = ChristoffelField::flat(&ctx.spec);

    let u0 = config.initial.build(&ctx.spec)?;
    let state0 = match ma_rhs(&u0, &ctx) {
        Ok((w, g)) => FlowState {
            t: 0.0,
            u: u0,
            w,
            g,
            steps: 0,
            last_dt: 0.0,
        },
        Err(KrfError::PositivityLoss {
            point, eigenvalue, ..
        }) => {
            // inadmissible initial data: surfaced as an immediate breakdown
            return Ok(RunOutcome {
                records: Vec::new(),
                snapshots: Vec::new(),
                termination: Termination::PositivityLoss {
                    point,
                    eigenvalue,
                    stage: 0,
                    t: 0.0,
                },
                steps: 0,
                sup_f: ctx.sup_f,
                custom_f,
            });
        }
        Err(e) => return Err(e),
    };
    Ok(integrate(config, &ctx, state0, custom_f, &base, &gamma_base))
}

/// Continue a run from an existing state (checkpoint resume). Records are
/// appended to `records_so_far`.
pub fn resume(
    config: &FlowConfig,
    ctx: &FlowContext,
    state: FlowState,
    records_so_far: Vec<MonitorRecord>,
) -> RunOutcome {
    let base = MetricField::flat(&ctx.spec);
    let gamma_base = ChristoffelField::flat(&ctx.spec);
    let mut outcome = integrate_from(config, ctx, state, false, &base, &gamma_base, false);
    let mut records = records_so_far;
    records.extend(outcome.records.drain(..));
    outcome.records = records;
    outcome
}

fn integrate(
    config: &FlowConfig,
    ctx: &FlowContext,
    state0: FlowState,
    custom_f: bool,
    base: &MetricField,
    gamma_base: &ChristoffelField,
) -> RunOutcome {
    integrate_from(config, ctx, state0, custom_f, base, gamma_base, true)
}

#[allow(clippy::too_many_arguments)]
fn integrate_from(
    config: &FlowConfig,
    ctx: &FlowContext,
    state0: FlowState,
    custom_f: bool,
    base: &MetricField,
    gamma_base: &ChristoffelField,
    record_initial: bool,
) -> RunOutcome {
    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut state = state0;
    let eps = 1e-12 * config.t_end;

    let sample = |state: &FlowState, records: &mut Vec<MonitorRecord>, snaps: &mut Vec<Snapshot>| {
        records.push(monitor::compute_record(
            state.t,
            &state.g,
            base,
            gamma_base,
            &state.w,
            config.k_max,
            config.m_max,
        ));
        snaps.push(Snapshot {
            t: state.t,
            u: state.u.clone(),
            w: state.w.clone(),
        });
    };

    if record_initial {
        sample(&state, &mut records, &mut snapshots);
    }

    let termination = loop {
        if state.t >= config.t_end - eps {
            break Termination::ReachedTEnd;
        }
        let mut dt = config
            .dt_fixed
            .unwrap_or_else(|| stable_dt(&state.g, config.cfl));
        if state.t + dt > config.t_end {
            dt = config.t_end - state.t;
        }
        match step(&state, dt, ctx) {
            Ok(next) => state = next,
            Err(KrfError::PositivityLoss {
                point,
                eigenvalue,
                stage,
            }) => {
                break Termination::PositivityLoss {
                    point,
                    eigenvalue,
                    stage,
                    t: state.t,
                };
            }
            Err(_) => {
                break Termination::NanDetected { t: state.t };
            }
        }
        if !state.u.is_finite() || !state.w.is_finite() {
            break Termination::NanDetected { t: state.t };
        }
        if state.steps % config.cadence as u64 == 0 || state.t >= config.t_end - eps {
            sample(&state, &mut records, &mut snapshots);
        }
    };

    RunOutcome {
        records,
        snapshots,
        termination,
        steps: state.steps,
        sup_f: ctx.sup_f,
        custom_f,
    }
}
