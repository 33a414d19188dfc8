//! Configuration ingestion, pipeline orchestration and report emission.
//!
//! A run executes the stages in order (hypotheses, symmetry, hyperbolicity,
//! coupling, compensating matrix, dissipativity sweep, decay measurement);
//! when a stage fails, the remaining ones are marked blocked rather than run
//! on invalid premises. Reports serialize to JSON with a stable field order,
//! so identical configurations reproduce byte-identical output apart from the
//! timestamp.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coupling::{
    check_genuine_coupling, compensating_inviscid, compensating_viscous, CompensatingMatrix,
    CouplingVerdict, DEFAULT_COUPLING_TOL,
};
use crate::decay::{decay_trace, pointwise_bound, DecayTrace, InitialData, PointwiseBound, QuadratureSpec};
use crate::dispersion::{dispersion_eigenvalues, scan, verify_bound, DispersionCurve, GridSpacing};
use crate::eos::{self, check_hypotheses, FluidModel, HypothesisReport, SampleBox, TransportCoeff};
use crate::linalg::{symmetric_eigenvalues, symmetry_residual, Vec4};
use crate::matrices::{assemble, symmetrize, StateVector};
use crate::spectral::{char_speeds_closed_form, char_speeds_eigen, quadratic_coefficients, strict_hyperbolicity_gap};

/// Format a double with 17 significant digits ('.' decimal, no locale), so
/// CSV round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

/// Which physical case(s) to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Viscous,
    Inviscid,
    Both,
}

/// Base state, equilibrium unless `q` is set explicitly.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
    #[serde(default)]
    pub q: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiGridSpec {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
    pub spacing: GridSpacing,
}

impl Default for XiGridSpec {
    fn default() -> Self {
        XiGridSpec {
            xi_min: 1e-3,
            xi_max: 1e3,
            n: 200,
            spacing: GridSpacing::Log,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySpec {
    pub t_max: f64,
    pub xi_cut: f64,
    pub n_xi: usize,
    pub l_list: Vec<u32>,
    /// Gaussian amplitude of the initial bump.
    pub v0: [f64; 4],
    /// Gaussian width of the initial bump.
    pub width: f64,
}

impl Default for DecaySpec {
    fn default() -> Self {
        DecaySpec {
            t_max: 1000.0,
            xi_cut: 8.0,
            n_xi: 16000,
            l_list: vec![0, 1],
            v0: [1.0, 0.0, 0.0, 0.0],
            width: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub coupling_tol: f64,
    pub hypothesis_samples: usize,
    pub speed_match_abs: f64,
    pub energy_residual_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            coupling_tol: DEFAULT_COUPLING_TOL,
            hypothesis_samples: 1000,
            speed_match_abs: 1e-9,
            energy_residual_max: 1e-5,
        }
    }
}

fn default_seed() -> u64 {
    0
}

/// Complete description of one verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: FluidModel,
    pub state: StateSpec,
    pub case: Case,
    #[serde(default)]
    pub xi_grid: XiGridSpec,
    #[serde(default)]
    pub decay: DecaySpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(bytes: &[u8]) -> Result<Self, RunError> {
        let config: RunConfig =
            serde_json::from_slice(bytes).map_err(|e| config_err(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.model
            .validate()
            .map_err(|e| config_err(e.to_string()))?;
        let s = &self.state;
        if !(s.rho > 0.0 && s.theta > 0.0) {
            return Err(config_err("state requires rho > 0 and theta > 0"));
        }
        let nu = self.model.nu_at(s.rho, s.theta);
        match self.case {
            Case::Viscous | Case::Both if !(nu > 0.0) => {
                return Err(config_err(format!(
                    "case requires nu > 0 at the state, got nu = {nu}"
                )));
            }
            Case::Inviscid if nu != 0.0 => {
                return Err(config_err(format!(
                    "case inviscid requires nu = 0 at the state, got nu = {nu}"
                )));
            }
            _ => {}
        }
        if !(self.decay.t_max > 0.0 && self.decay.width > 0.0 && self.decay.xi_cut > 0.0) {
            return Err(config_err("decay spec requires positive t_max, width, xi_cut"));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization of the config, excluding
    /// `output_dir` (where artifacts land does not change what was verified).
    pub fn sha256(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = None;
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The concrete `(label, model)` pairs this config asks to verify.
    ///
    /// `both` runs the configured model as the viscous case and a copy with
    /// the viscosity forced to the constant zero as the inviscid case.
    pub fn resolved_cases(&self) -> Vec<(&'static str, FluidModel)> {
        let inviscid_model = || {
            let mut m = self.model.clone();
            m.nu = TransportCoeff::constant(0.0);
            m
        };
        match self.case {
            Case::Viscous => vec![("viscous", self.model.clone())],
            Case::Inviscid => vec![("inviscid", self.model.clone())],
            Case::Both => vec![
                ("viscous", self.model.clone()),
                ("inviscid", inviscid_model()),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Passed,
    Failed,
    Blocked,
    Skipped,
}

/// One pipeline stage: verdict, optional failure detail, optional numbers.
#[derive(Debug, Clone, Serialize)]
pub struct Stage<T: Serialize> {
    pub status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
}

impl<T: Serialize> Stage<T> {
    fn passed(data: T) -> Self {
        Stage {
            status: StageStatus::Passed,
            detail: None,
            data: Some(data),
        }
    }

    fn failed(detail: impl Into<String>, data: Option<T>) -> Self {
        Stage {
            status: StageStatus::Failed,
            detail: Some(detail.into()),
            data,
        }
    }

    fn blocked() -> Self {
        Stage {
            status: StageStatus::Blocked,
            detail: None,
            data: None,
        }
    }

    fn skipped() -> Self {
        Stage {
            status: StageStatus::Skipped,
            detail: None,
            data: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.status == StageStatus::Passed
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryData {
    pub residual_a0h: f64,
    pub residual_a1h: f64,
    pub residual_bh: f64,
    pub residual_l: f64,
    pub a0h_min_eig: f64,
    pub a0h_cond: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicityData {
    pub b_tilde: f64,
    pub c_tilde: f64,
    pub discriminant: f64,
    pub speeds: [f64; 4],
    pub c_slow: f64,
    pub c_fast: f64,
    pub gap: f64,
    /// Largest absolute difference between closed-form and eigensolver speeds.
    pub eigen_max_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DissipativityData {
    pub k_sharp: f64,
    pub dissipative: bool,
    pub max_re: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_xi: Option<f64>,
    pub bound_ok: bool,
    pub min_slack: f64,
    /// Distance of the `xi = 0` spectrum from `{0, 0, 0, -1/tau}`.
    pub xi_zero_error: f64,
    pub pointwise: PointwiseBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayData {
    pub l_list: Vec<u32>,
    pub fitted_slopes: Vec<f64>,
    pub energy_residual: f64,
    pub m_monotone: bool,
    pub envelope_ok: bool,
    pub slopes_in_window: bool,
}

/// All stage verdicts for one case.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub nu: f64,
    pub hypotheses: Stage<HypothesisReport>,
    pub symmetry: Stage<SymmetryData>,
    pub hyperbolicity: Stage<HyperbolicityData>,
    pub coupling: Stage<CouplingVerdict>,
    pub compensating: Stage<CompensatingMatrix>,
    pub dissipativity: Stage<DissipativityData>,
    pub decay: Stage<DecayData>,
    pub pass: bool,
}

impl CaseReport {
    fn recompute_pass(&mut self) {
        let run = |s: StageStatus| s == StageStatus::Passed || s == StageStatus::Skipped;
        self.pass = run(self.hypotheses.status)
            && run(self.symmetry.status)
            && run(self.hyperbolicity.status)
            && run(self.coupling.status)
            && run(self.compensating.status)
            && run(self.dissipativity.status)
            && run(self.decay.status)
            // a run where everything was skipped proves nothing
            && self.hypotheses.status == StageStatus::Passed;
    }
}

/// Stages, in pipeline order; used to truncate a run for the focused
/// subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StageId {
    Hypotheses,
    Symmetry,
    Hyperbolicity,
    Coupling,
    Compensating,
    Dissipativity,
    Decay,
}

/// One case's report plus the raw curves for CSV emission.
pub struct CaseOutput {
    pub report: CaseReport,
    pub curve: Option<DispersionCurve>,
    pub trace: Option<DecayTrace>,
}

/// Top-level report of a run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub schema_version: u32,
    pub config_sha256: String,
    pub timestamp_unix: u64,
    pub cases: Vec<CaseReport>,
    pub overall_pass: bool,
}

/// Expected log-log slope window for the decaying norm `|∂_x^l U|`.
pub fn slope_window(l: u32) -> Option<(f64, f64)> {
    match l {
        0 => Some((-0.35, -0.15)),
        1 => Some((-0.90, -0.60)),
        _ => None,
    }
}

/// Run the pipeline for one concrete case, stopping after `stop`.
pub fn run_case(config: &RunConfig, label: &str, model: &FluidModel, stop: StageId) -> CaseOutput {
    let s = config.state;
    let nu = model.nu_at(s.rho, s.theta);
    let mut out = CaseOutput {
        report: CaseReport {
            case: label.to_string(),
            nu,
            hypotheses: Stage::skipped(),
            symmetry: Stage::skipped(),
            hyperbolicity: Stage::skipped(),
            coupling: Stage::skipped(),
            compensating: Stage::skipped(),
            dissipativity: Stage::skipped(),
            decay: Stage::skipped(),
            pass: false,
        },
        curve: None,
        trace: None,
    };
    let report = &mut out.report;

    // hypotheses over a box spanning half to twice the base state
    let sample_box = SampleBox {
        rho_min: 0.5 * s.rho,
        rho_max: 2.0 * s.rho,
        theta_min: 0.5 * s.theta,
        theta_max: 2.0 * s.theta,
    };
    report.hypotheses =
        match check_hypotheses(model, &sample_box, config.tolerances.hypothesis_samples, config.seed)
        {
            Ok(h) if h.all_pass => Stage::passed(h),
            Ok(h) => {
                let failing: Vec<&str> = h
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name)
                    .collect();
                Stage::failed(format!("hypotheses violated: {}", failing.join(", ")), Some(h))
            }
            Err(e) => Stage::failed(e.to_string(), None),
        };
    let mut blocked = !report.hypotheses.ok();

    // matrix assembly + symmetrization
    let mut system = None;
    report.symmetry = if blocked || stop < StageId::Symmetry {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        match StateVector::new(s.rho, s.u, s.theta, s.q)
            .and_then(|state| assemble(&state, model))
            .and_then(|sm| symmetrize(&sm, model).map(|ss| (sm, ss)))
        {
            Ok((sm, ss)) => {
                let a0h_eigs = symmetric_eigenvalues(&ss.a0h);
                let data = SymmetryData {
                    residual_a0h: symmetry_residual(&ss.a0h),
                    residual_a1h: symmetry_residual(&ss.a1h),
                    residual_bh: symmetry_residual(&ss.bh),
                    residual_l: symmetry_residual(&ss.l),
                    a0h_min_eig: a0h_eigs[0],
                    a0h_cond: ss.a0h_cond(),
                };
                system = Some((sm, ss));
                if data.a0h_min_eig > 0.0 {
                    Stage::passed(data)
                } else {
                    Stage::failed("A0h is not positive definite", Some(data))
                }
            }
            Err(e) => Stage::failed(e.to_string(), None),
        }
    };
    blocked |= report.symmetry.status == StageStatus::Failed;

    // strict hyperbolicity
    report.hyperbolicity = if blocked || stop < StageId::Hyperbolicity || system.is_none() {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        let (sm, _) = system.as_ref().unwrap();
        let state = sm.at_state;
        let closed = char_speeds_closed_form(&state, model);
        match closed {
            Ok(cs) => {
                let (b_tilde, c_tilde) =
                    quadratic_coefficients(&state, model).expect("state already validated");
                let eigen_max_err = match char_speeds_eigen(sm) {
                    Ok(zs) => zs
                        .iter()
                        .zip(cs.zeta.iter())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0_f64, f64::max),
                    Err(_) => f64::INFINITY,
                };
                let data = HyperbolicityData {
                    b_tilde,
                    c_tilde,
                    discriminant: cs.discriminant,
                    speeds: cs.zeta,
                    c_slow: cs.c_slow,
                    c_fast: cs.c_fast,
                    gap: strict_hyperbolicity_gap(&cs),
                    eigen_max_err,
                };
                if data.discriminant > 0.0
                    && data.gap > 0.0
                    && data.eigen_max_err <= config.tolerances.speed_match_abs
                {
                    Stage::passed(data)
                } else {
                    Stage::failed("strict hyperbolicity not certified", Some(data))
                }
            }
            Err(e) => Stage::failed(e.to_string(), None),
        }
    };
    blocked |= report.hyperbolicity.status == StageStatus::Failed;

    // genuine coupling
    report.coupling = if blocked || stop < StageId::Coupling || system.is_none() {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        let (_, ss) = system.as_ref().unwrap();
        match check_genuine_coupling(ss, config.tolerances.coupling_tol) {
            Ok(v) if v.genuinely_coupled => Stage::passed(v),
            Ok(v) => Stage::failed(
                format!("kernel overlap {:.3e} below tolerance", v.min_kernel_overlap),
                Some(v),
            ),
            Err(e) => Stage::failed(e.to_string(), None),
        }
    };
    blocked |= report.coupling.status == StageStatus::Failed;

    // compensating matrix
    let mut comp = None;
    report.compensating = if blocked || stop < StageId::Compensating || system.is_none() {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        let (sm, ss) = system.as_ref().unwrap();
        let state = sm.at_state;
        let built = eos::evaluate(model, state.rho, state.theta)
            .map_err(|e| e.to_string())
            .and_then(|t| {
                if t.nu > 0.0 {
                    compensating_viscous(ss, &state, &t, None).map_err(|e| e.to_string())
                } else {
                    compensating_inviscid(ss, &state, &t, model.tau, None).map_err(|e| e.to_string())
                }
            });
        match built {
            Ok(k) => {
                // the viscous construction is only positive semi-definite
                // (structural kernel); the inviscid one must be strict
                let ka1 = k.k * ss.a1h;
                let scale = (0.5 * (ka1 + ka1.transpose()) + ss.bh + ss.l).norm();
                let eig_ok = match k.construction {
                    crate::coupling::Construction::Viscous => {
                        k.diagnostics.min_eig_sym >= -1e-12 * (1.0 + scale)
                    }
                    crate::coupling::Construction::Inviscid => k.diagnostics.min_eig_sym > 0.0,
                };
                let ok = eig_ok && k.diagnostics.skew_residual <= 1e-12;
                comp = Some(k.clone());
                if ok {
                    Stage::passed(k)
                } else {
                    Stage::failed("compensating matrix diagnostics out of bounds", Some(k))
                }
            }
            Err(e) => Stage::failed(e, None),
        }
    };
    blocked |= report.compensating.status == StageStatus::Failed;

    let data = InitialData::gaussian(
        Vec4::new(
            config.decay.v0[0],
            config.decay.v0[1],
            config.decay.v0[2],
            config.decay.v0[3],
        ),
        config.decay.width,
    )
    .expect("width validated");

    // dissipativity sweep and pointwise bound
    let mut k_sharp = None;
    report.dissipativity = if blocked || stop < StageId::Dissipativity || system.is_none() {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        let (_, ss) = system.as_ref().unwrap();
        let g = config.xi_grid;
        match scan(ss, g.xi_min, g.xi_max, g.n, g.spacing) {
            Ok(curve) => {
                let (bound_ok, min_slack) = verify_bound(&curve, curve.k_sharp);
                let xi_zero = dispersion_eigenvalues(ss, 0.0);
                let mut expected = [0.0, 0.0, 0.0, -1.0 / model.tau];
                expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let xi_zero_error = xi_zero
                    .iter()
                    .zip(expected.iter())
                    .map(|(z, e)| (z - num_complex::Complex64::from(*e)).norm())
                    .fold(0.0_f64, f64::max);
                let pw = pointwise_bound(ss, &data, curve.k_sharp, 50, 50, 100.0);
                let max_re = curve.max_re.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let d = DissipativityData {
                    k_sharp: curve.k_sharp,
                    dissipative: curve.dissipative,
                    max_re,
                    offending_xi: curve.offending_xi,
                    bound_ok,
                    min_slack,
                    xi_zero_error,
                    pointwise: pw,
                };
                let ok = d.dissipative
                    && d.k_sharp > 0.0
                    && d.bound_ok
                    && d.xi_zero_error <= 1e-10
                    && d.pointwise.violations == 0;
                k_sharp = Some(curve.k_sharp);
                out.curve = Some(curve);
                if ok {
                    Stage::passed(d)
                } else {
                    Stage::failed("dissipativity sweep failed", Some(d))
                }
            }
            Err(e) => Stage::failed(e.to_string(), None),
        }
    };
    blocked |= report.dissipativity.status == StageStatus::Failed;

    // decay rates
    report.decay = if blocked
        || stop < StageId::Decay
        || system.is_none()
        || comp.is_none()
        || k_sharp.is_none()
    {
        if blocked { Stage::blocked() } else { Stage::skipped() }
    } else {
        let (_, ss) = system.as_ref().unwrap();
        let quad = QuadratureSpec {
            xi_cut: config.decay.xi_cut,
            n_xi: config.decay.n_xi,
        };
        match decay_trace(
            ss,
            comp.as_ref().unwrap(),
            &data,
            config.decay.t_max,
            quad,
            &config.decay.l_list,
            k_sharp.unwrap(),
        ) {
            Ok(trace) => {
                let slopes_in_window = trace
                    .l_list
                    .iter()
                    .zip(trace.fitted_slopes.iter())
                    .all(|(&l, &slope)| match slope_window(l) {
                        Some((lo, hi)) => (lo..=hi).contains(&slope),
                        None => true,
                    });
                let d = DecayData {
                    l_list: trace.l_list.clone(),
                    fitted_slopes: trace.fitted_slopes.clone(),
                    energy_residual: trace.energy_residual,
                    m_monotone: trace.m_monotone,
                    envelope_ok: trace.envelope_ok,
                    slopes_in_window,
                };
                let ok = d.energy_residual <= config.tolerances.energy_residual_max
                    && d.m_monotone
                    && d.envelope_ok
                    && d.slopes_in_window;
                out.trace = Some(trace);
                if ok {
                    Stage::passed(d)
                } else {
                    Stage::failed("decay measurement out of bounds", Some(d))
                }
            }
            Err(e) => Stage::failed(e.to_string(), None),
        }
    };

    out.report.recompute_pass();
    out
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Execute all configured cases, write artifacts, return the report.
pub fn run(config: &RunConfig) -> Result<VerificationReport, RunError> {
    config.validate()?;
    let mut cases = Vec::new();
    let mut outputs = Vec::new();
    for (label, model) in config.resolved_cases() {
        let out = run_case(config, label, &model, StageId::Decay);
        cases.push(out.report.clone());
        outputs.push((label, out));
    }
    let overall_pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
    let report = VerificationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: SCHEMA_VERSION,
        config_sha256: config.sha256(),
        timestamp_unix: now_unix(),
        cases,
        overall_pass,
    };
    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), report_json(&report)?)?;
        for (label, out) in &outputs {
            if let Some(curve) = &out.curve {
                std::fs::write(
                    dir.join(format!("dispersion_{label}.csv")),
                    crate::dispersion::curve_to_csv(curve),
                )?;
            }
            if let Some(trace) = &out.trace {
                std::fs::write(
                    dir.join(format!("decay_{label}.csv")),
                    crate::decay::trace_to_csv(trace),
                )?;
            }
        }
    }
    Ok(report)
}

/// Pretty JSON with a trailing newline.
pub fn report_json(report: &VerificationReport) -> Result<String, RunError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| config_err(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
