//! Characteristic speeds and strict hyperbolicity.
//!
//! The characteristic polynomial of the first-order part factors through a
//! quadratic in `m^2` (with `m = u - zeta`):
//!
//! ```text
//! m^4 + b m^2 + c = 0,
//! b = -(rho^2 e_theta tau)^{-1} (rho kappa + rho^2 p_rho e_theta tau + theta p_theta^2 tau),
//! c =  (rho^2 e_theta tau)^{-1} rho p_rho kappa,
//! ```
//!
//! whose two positive roots `m_-^2 < m_+^2` give the slow and fast sound
//! speeds and the four speeds `u -+ c_fast, u -+ c_slow`. A brute-force
//! generalized eigensolve of `A1 v = zeta A0 v` serves as the independent
//! oracle.

use serde::Serialize;
use thiserror::Error;

use crate::eos::{self, EosError, FluidModel, ThermoEval};
use crate::linalg::{Mat4, Vec4};
use crate::matrices::{MatrixError, StateVector, SystemMatrices};

/// Imaginary parts above this magnitude flag loss of hyperbolicity in the
/// eigensolve oracle.
pub const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("hyperbolicity lost: discriminant = {0} <= 0")]
    NonPositiveDiscriminant(f64),
    #[error("hyperbolicity lost: eigenvalue with imaginary part {0:.3e}")]
    ComplexEigenvalue(f64),
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The four characteristic speeds together with the quadratic-in-`m^2` data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CharSpeeds {
    /// Sorted speeds `u - c_fast < u - c_slow < u + c_slow < u + c_fast`.
    pub zeta: [f64; 4],
    pub m2_minus: f64,
    pub m2_plus: f64,
    pub discriminant: f64,
    pub c_slow: f64,
    pub c_fast: f64,
}

/// The discriminant in its factored (manifestly positive) algebraic form.
pub fn discriminant_factored(t: &ThermoEval, state: &StateVector, tau: f64) -> f64 {
    let rho = state.rho;
    let theta = state.theta;
    let thermal = t.kappa / (rho * t.e_theta * tau);
    let cross = theta * t.p_theta * t.p_theta / (rho * rho * t.e_theta);
    let a = t.p_rho - thermal;
    a * a + cross * (2.0 * t.p_rho + 2.0 * thermal + cross)
}

/// Characteristic speeds from the closed-form quadratic in `m^2`.
pub fn char_speeds_closed_form(
    state: &StateVector,
    model: &FluidModel,
) -> Result<CharSpeeds, SpectralError> {
    state.check_domain()?;
    let t = eos::evaluate(model, state.rho, state.theta)?;
    let tau = model.tau;
    let rho = state.rho;
    let theta = state.theta;
    let denom = rho * rho * t.e_theta * tau;
    let b = -(rho * t.kappa + rho * rho * t.p_rho * t.e_theta * tau
        + theta * t.p_theta * t.p_theta * tau)
        / denom;
    let c = rho * t.p_rho * t.kappa / denom;
    let disc = b * b - 4.0 * c;
    if disc <= 0.0 {
        return Err(SpectralError::NonPositiveDiscriminant(disc));
    }
    let sqrt_disc = disc.sqrt();
    let m2_minus = 0.5 * (b.abs() - sqrt_disc);
    let m2_plus = 0.5 * (b.abs() + sqrt_disc);
    if m2_minus <= 0.0 {
        return Err(SpectralError::NonPositiveDiscriminant(m2_minus));
    }
    let c_slow = m2_minus.sqrt();
    let c_fast = m2_plus.sqrt();
    let u = state.u;
    Ok(CharSpeeds {
        zeta: [u - c_fast, u - c_slow, u + c_slow, u + c_fast],
        m2_minus,
        m2_plus,
        discriminant: disc,
        c_slow,
        c_fast,
    })
}

/// The quadratic coefficients `(b, c)` of the closed form, exposed for
/// cross-checks against frozen reference values.
pub fn quadratic_coefficients(
    state: &StateVector,
    model: &FluidModel,
) -> Result<(f64, f64), SpectralError> {
    let t = eos::evaluate(model, state.rho, state.theta)?;
    let denom = state.rho * state.rho * t.e_theta * model.tau;
    let b = -(state.rho * t.kappa
        + state.rho * state.rho * t.p_rho * t.e_theta * model.tau
        + state.theta * t.p_theta * t.p_theta * model.tau)
        / denom;
    let c = state.rho * t.p_rho * t.kappa / denom;
    Ok((b, c))
}

/// Brute-force oracle: real eigenvalues of the pencil `A1 v = zeta A0 v`,
/// sorted ascending.
///
/// `A0` is diagonal positive, so the pencil is reduced by the congruence
/// `A0^{-1/2} A1 A0^{-1/2}` (a similarity-equivalent balancing) and solved as
/// a standard dense eigenproblem.
pub fn char_speeds_eigen(sm: &SystemMatrices) -> Result<[f64; 4], SpectralError> {
    let d = [sm.a0[(0, 0)], sm.a0[(1, 1)], sm.a0[(2, 2)], sm.a0[(3, 3)]];
    if d.iter().any(|x| *x <= 0.0) {
        return Err(SpectralError::Matrix(MatrixError::Domain {
            rho: sm.at_state.rho,
            theta: sm.at_state.theta,
        }));
    }
    let half_inv = Mat4::from_diagonal(&Vec4::new(
        1.0 / d[0].sqrt(),
        1.0 / d[1].sqrt(),
        1.0 / d[2].sqrt(),
        1.0 / d[3].sqrt(),
    ));
    let w = half_inv * sm.a1 * half_inv;
    let eig = w.complex_eigenvalues();
    let mut out = [0.0_f64; 4];
    for (i, z) in eig.iter().enumerate() {
        if z.im.abs() > IMAG_TOL {
            return Err(SpectralError::ComplexEigenvalue(z.im));
        }
        out[i] = z.re;
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Minimum gap between consecutive sorted speeds; strictly hyperbolic iff > 0.
pub fn strict_hyperbolicity_gap(cs: &CharSpeeds) -> f64 {
    let z = &cs.zeta;
    (z[1] - z[0]).min(z[2] - z[1]).min(z[3] - z[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::assemble;
    use approx::assert_relative_eq;

    fn unit_model() -> FluidModel {
        FluidModel::ideal_gas(1.0, 1.4, 1.0, 0.0, 1.0).unwrap()
    }

    fn unit_state() -> StateVector {
        StateVector::new(1.0, 0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn unit_state_reference_values() {
        let (b, c) = quadratic_coefficients(&unit_state(), &unit_model()).unwrap();
        assert_relative_eq!(b, -1.8, max_relative = 1e-14);
        assert_relative_eq!(c, 0.4, max_relative = 1e-14);
        let cs = char_speeds_closed_form(&unit_state(), &unit_model()).unwrap();
        assert_relative_eq!(cs.discriminant, 1.64, max_relative = 1e-13);
        assert_relative_eq!(cs.m2_plus, 1.540_312_4, max_relative = 1e-6);
        assert_relative_eq!(cs.m2_minus, 0.259_687_6, max_relative = 1e-6);
        let expected = [-1.241_097, -0.509_596, 0.509_596, 1.241_097];
        for (z, e) in cs.zeta.iter().zip(expected) {
            assert_relative_eq!(*z, e, epsilon = 1e-5);
        }
    }

    #[test]
    fn galilean_shift_moves_all_speeds() {
        let model = unit_model();
        let base = char_speeds_closed_form(&unit_state(), &model).unwrap();
        let shifted_state = StateVector::new(1.0, 2.0, 1.0, 0.0).unwrap();
        let shifted = char_speeds_closed_form(&shifted_state, &model).unwrap();
        for (a, b) in base.zeta.iter().zip(shifted.zeta.iter()) {
            assert_relative_eq!(a + 2.0, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_eigensolve_at_unit_state() {
        let model = unit_model();
        let cs = char_speeds_closed_form(&unit_state(), &model).unwrap();
        let sm = assemble(&unit_state(), &model).unwrap();
        let eig = char_speeds_eigen(&sm).unwrap();
        for (a, b) in cs.zeta.iter().zip(eig.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectrum_symmetric_for_zero_velocity() {
        let model = unit_model();
        let sm = assemble(&unit_state(), &model).unwrap();
        let eig = char_speeds_eigen(&sm).unwrap();
        assert_relative_eq!(eig[0], -eig[3], epsilon = 1e-12);
        assert_relative_eq!(eig[1], -eig[2], epsilon = 1e-12);
    }

    #[test]
    fn generalized_eigenvalues_scale_invariant() {
        let model = unit_model();
        let mut sm = assemble(&unit_state(), &model).unwrap();
        let base = char_speeds_eigen(&sm).unwrap();
        sm.a0 *= 2.0;
        sm.a1 *= 2.0;
        let scaled = char_speeds_eigen(&sm).unwrap();
        for (a, b) in base.iter().zip(scaled.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn thermal_limit_recovers_mechanical_sound_speed() {
        // p_theta -> 0 decouples pressure from temperature: the two branches
        // tend to the mechanical speed sqrt(p_rho) and the thermal wave speed
        // sqrt(kappa/(rho e_theta tau)); sending kappa -> 0 as well collapses
        // the thermal branch and only sqrt(p_rho) survives.
        let power_law = |kappa: f64| {
            FluidModel::new(
                crate::eos::EosKind::PowerLaw {
                    a: 1.0,
                    alpha: 1.0,
                    beta: 1e-9,
                    c_v: 2.5,
                },
                crate::eos::TransportCoeff::constant(kappa),
                crate::eos::TransportCoeff::constant(0.0),
                1.0,
            )
            .unwrap()
        };
        let cs = char_speeds_closed_form(&unit_state(), &power_law(1.0)).unwrap();
        let c_mech = eos::evaluate(&power_law(1.0), 1.0, 1.0)
            .unwrap()
            .p_rho
            .sqrt();
        assert_relative_eq!(cs.c_fast, c_mech, max_relative = 1e-6);
        assert_relative_eq!(cs.c_slow, 0.4_f64.sqrt(), max_relative = 1e-6);

        let cs = char_speeds_closed_form(&unit_state(), &power_law(1e-12)).unwrap();
        assert_relative_eq!(cs.c_fast, c_mech, max_relative = 1e-6);
        assert!(cs.c_slow < 1e-5);
    }

    #[test]
    fn mechanical_limit_gives_thermal_wave_speed() {
        // p_rho, p_theta -> 0: c_slow -> 0, c_fast -> sqrt(kappa/(rho e_theta tau))
        let model = FluidModel::new(
            crate::eos::EosKind::PowerLaw {
                a: 1e-10,
                alpha: 1.0,
                beta: 1.0,
                c_v: 2.5,
            },
            crate::eos::TransportCoeff::constant(1.0),
            crate::eos::TransportCoeff::constant(0.0),
            1.0,
        )
        .unwrap();
        let cs = char_speeds_closed_form(&unit_state(), &model).unwrap();
        assert!(cs.c_slow < 1e-4);
        assert_relative_eq!(cs.c_fast, 0.4_f64.sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn gap_at_unit_state() {
        let cs = char_speeds_closed_form(&unit_state(), &unit_model()).unwrap();
        let gap = strict_hyperbolicity_gap(&cs);
        assert_relative_eq!(gap, 0.731_501, epsilon = 1e-5);
        assert!(gap > 0.0);
    }

    #[test]
    fn degenerate_speeds_report_zero_gap() {
        let cs = CharSpeeds {
            zeta: [-1.0, 0.0, 0.0, 1.0],
            m2_minus: 0.0,
            m2_plus: 1.0,
            discriminant: 1.0,
            c_slow: 0.0,
            c_fast: 1.0,
        };
        assert_eq!(strict_hyperbolicity_gap(&cs), 0.0);
    }

    #[test]
    fn discriminant_forms_agree() {
        let model = unit_model();
        let state = StateVector::new(2.3, -1.0, 0.7, 0.4).unwrap();
        let cs = char_speeds_closed_form(&state, &model).unwrap();
        let t = eos::evaluate(&model, state.rho, state.theta).unwrap();
        let alt = discriminant_factored(&t, &state, model.tau);
        assert_relative_eq!(cs.discriminant, alt, max_relative = 1e-12);
    }
}
