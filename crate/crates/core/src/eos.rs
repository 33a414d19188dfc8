//! Fluid models: equation of state, transport coefficients and the
//! structural hypotheses they must satisfy.
//!
//! Two closed-form families are supported: the ideal gas with Boyle's law
//! `p = R rho theta`, `e = R theta / (gamma - 1)`, and a separable power law
//! `p = A rho^alpha theta^beta` with constant heat capacity `e_theta = c_v`.
//! Transport coefficients (thermal conductivity `kappa`, combined viscosity
//! `nu`) are constant or power laws of `(rho, theta)`. All derivatives are
//! analytic; `e_rho` always comes from the thermodynamic identity
//! `e_rho = (p - theta p_theta) / rho^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EosError {
    #[error("state out of domain: rho = {rho}, theta = {theta} (need rho > 0, theta > 0)")]
    Domain { rho: f64, theta: f64 },
    #[error("invalid sample box: {0}")]
    InvalidBox(String),
    #[error("invalid model parameter: {0}")]
    InvalidModel(String),
}

/// Pressure / internal-energy closure.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EosKind {
    /// `p = R rho theta`, `e = R theta / (gamma - 1)`.
    IdealGas { r: f64, gamma: f64 },
    /// `p = a rho^alpha theta^beta`, `e = c_v theta`.
    PowerLaw {
        a: f64,
        alpha: f64,
        beta: f64,
        c_v: f64,
    },
}

/// A transport coefficient as a function of `(rho, theta)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransportCoeff {
    Constant { value: f64 },
    /// `a rho^alpha theta^beta`.
    PowerLaw { a: f64, alpha: f64, beta: f64 },
}

impl TransportCoeff {
    pub fn constant(value: f64) -> Self {
        TransportCoeff::Constant { value }
    }

    pub fn eval(&self, rho: f64, theta: f64) -> f64 {
        match self {
            TransportCoeff::Constant { value } => *value,
            TransportCoeff::PowerLaw { a, alpha, beta } => {
                a * rho.powf(*alpha) * theta.powf(*beta)
            }
        }
    }
}

/// A complete fluid model: equation of state, transport coefficients and the
/// thermal relaxation time `tau`. Immutable after construction.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FluidModel {
    pub eos: EosKind,
    pub kappa: TransportCoeff,
    pub nu: TransportCoeff,
    pub tau: f64,
}

impl FluidModel {
    pub fn new(
        eos: EosKind,
        kappa: TransportCoeff,
        nu: TransportCoeff,
        tau: f64,
    ) -> Result<Self, EosError> {
        let model = FluidModel { eos, kappa, nu, tau };
        model.validate()?;
        Ok(model)
    }

    /// Ideal gas with constant transport coefficients.
    pub fn ideal_gas(r: f64, gamma: f64, kappa: f64, nu: f64, tau: f64) -> Result<Self, EosError> {
        Self::new(
            EosKind::IdealGas { r, gamma },
            TransportCoeff::constant(kappa),
            TransportCoeff::constant(nu),
            tau,
        )
    }

    /// Parameter sanity independent of any sampled state.
    pub fn validate(&self) -> Result<(), EosError> {
        let bad = |msg: &str| Err(EosError::InvalidModel(msg.to_string()));
        match &self.eos {
            EosKind::IdealGas { r, gamma } => {
                if !(*r > 0.0) {
                    return bad("ideal gas requires R > 0");
                }
                if !(*gamma > 1.0) {
                    return bad("ideal gas requires gamma > 1");
                }
            }
            EosKind::PowerLaw { a, c_v, .. } => {
                if !(*a > 0.0) {
                    return bad("power law requires amplitude A > 0");
                }
                if !(*c_v > 0.0) {
                    return bad("power law requires c_v > 0");
                }
            }
        }
        if !(self.tau > 0.0) {
            return bad("relaxation time tau must be positive");
        }
        Ok(())
    }

    /// Combined viscosity at a point; `None` in the `nu` slot is not allowed,
    /// an inviscid fluid uses a constant zero coefficient.
    pub fn nu_at(&self, rho: f64, theta: f64) -> f64 {
        self.nu.eval(rho, theta)
    }

    pub fn kappa_at(&self, rho: f64, theta: f64) -> f64 {
        self.kappa.eval(rho, theta)
    }
}

/// Pointwise evaluation of the equation of state and transport coefficients
/// at one `(rho, theta)`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct ThermoEval {
    pub p: f64,
    pub p_rho: f64,
    pub p_theta: f64,
    pub e: f64,
    pub e_theta: f64,
    /// Always `(p - theta * p_theta) / rho^2`.
    pub e_rho: f64,
    pub kappa: f64,
    pub nu: f64,
}

/// Evaluate the model at one admissible point, with analytic derivatives.
pub fn evaluate(model: &FluidModel, rho: f64, theta: f64) -> Result<ThermoEval, EosError> {
    if !(rho > 0.0) || !(theta > 0.0) || !rho.is_finite() || !theta.is_finite() {
        return Err(EosError::Domain { rho, theta });
    }
    let (p, p_rho, p_theta, e, e_theta) = match &model.eos {
        EosKind::IdealGas { r, gamma } => {
            let p = r * rho * theta;
            (p, r * theta, r * rho, r * theta / (gamma - 1.0), r / (gamma - 1.0))
        }
        EosKind::PowerLaw { a, alpha, beta, c_v } => {
            let p = a * rho.powf(*alpha) * theta.powf(*beta);
            let p_rho = alpha * p / rho;
            let p_theta = beta * p / theta;
            (p, p_rho, p_theta, c_v * theta, *c_v)
        }
    };
    let e_rho = (p - theta * p_theta) / (rho * rho);
    Ok(ThermoEval {
        p,
        p_rho,
        p_theta,
        e,
        e_theta,
        e_rho,
        kappa: model.kappa_at(rho, theta),
        nu: model.nu_at(rho, theta),
    })
}

/// Rectangle in the `(rho, theta)` quadrant over which hypotheses are sampled.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SampleBox {
    pub rho_min: f64,
    pub rho_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl SampleBox {
    fn validate(&self) -> Result<(), EosError> {
        if !(self.rho_min > 0.0 && self.theta_min > 0.0) {
            return Err(EosError::InvalidBox(
                "box must lie in the open quadrant rho > 0, theta > 0".into(),
            ));
        }
        if !(self.rho_max >= self.rho_min && self.theta_max >= self.theta_min) {
            return Err(EosError::InvalidBox("box bounds must be ordered".into()));
        }
        Ok(())
    }
}

/// One sampled inequality: pass/fail with the worst value and where it occurred.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub pass: bool,
    pub worst_value: f64,
    pub at_rho: f64,
    pub at_theta: f64,
}

/// Sampled verification of `p > 0`, `p_rho > 0`, `p_theta > 0`, `e_theta > 0`,
/// `kappa > 0` and `nu >= 0` over a box.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    pub all_pass: bool,
    pub n_samples: usize,
}

/// Sample the hypotheses on `n_samples` seeded-uniform points of the box.
pub fn check_hypotheses(
    model: &FluidModel,
    sample_box: &SampleBox,
    n_samples: usize,
    seed: u64,
) -> Result<HypothesisReport, EosError> {
    sample_box.validate()?;
    if n_samples == 0 {
        return Err(EosError::InvalidBox("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (name, strict) pairs; strict means the inequality is > 0, else >= 0.
    let specs: [(&'static str, bool); 6] = [
        ("p > 0", true),
        ("p_rho > 0", true),
        ("p_theta > 0", true),
        ("e_theta > 0", true),
        ("kappa > 0", true),
        ("nu >= 0", false),
    ];
    let mut worst = [(f64::INFINITY, 0.0_f64, 0.0_f64); 6];
    for _ in 0..n_samples {
        let rho = rng.gen_range(sample_box.rho_min..=sample_box.rho_max);
        let theta = rng.gen_range(sample_box.theta_min..=sample_box.theta_max);
        let t = evaluate(model, rho, theta)?;
        let vals = [t.p, t.p_rho, t.p_theta, t.e_theta, t.kappa, t.nu];
        for (i, v) in vals.iter().enumerate() {
            if *v < worst[i].0 {
                worst[i] = (*v, rho, theta);
            }
        }
    }
    let checks: Vec<HypothesisCheck> = specs
        .iter()
        .zip(worst.iter())
        .map(|((name, strict), (value, rho, theta))| HypothesisCheck {
            name,
            pass: if *strict { *value > 0.0 } else { *value >= 0.0 },
            worst_value: *value,
            at_rho: *rho,
            at_theta: *theta,
        })
        .collect();
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(HypothesisReport {
        checks,
        all_pass,
        n_samples,
    })
}
