//! Assembly of the quasi-linear system matrices at a state and their
//! symmetrized counterparts.
//!
//! At a state `U = (rho, u, theta, q)` the system reads
//! `A0 U_t + A1 U_x = B U_xx + Q(U)` up to higher-order terms, with
//!
//! ```text
//! A0 = diag(1, rho, rho e_theta, tau)
//! A1 = [ u      rho        0              0    ]
//!      [ p_rho  rho u      p_theta        0    ]
//!      [ 0      theta p_theta  rho u e_theta  1 ]
//!      [ 0      0          kappa          tau u ]
//! B  = single entry nu at (1,1),   Q = (0,0,0,-q),   D = d_U Q = diag(0,0,0,-1).
//! ```
//!
//! The diagonal positive symmetrizer `S = diag(p_rho/rho, 1, 1/theta,
//! 1/(kappa theta))` turns `(A0, A1, B, D)` into symmetric matrices; the
//! products are verified entrywise on every call.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{self, EosError, FluidModel, ThermoEval};
use crate::linalg::{symmetry_residual, Mat4, Vec4};

/// Default threshold on `|q|` under which a state counts as an equilibrium.
pub const DEFAULT_EQUILIBRIUM_TOL: f64 = 1e-12;

/// Symmetry residual beyond which `symmetrize` reports an assembly bug.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("state out of the admissible set: rho = {rho}, theta = {theta}")]
    Domain { rho: f64, theta: f64 },
    #[error(transparent)]
    Eos(#[from] EosError),
    #[error("symmetrized product deviates from symmetry by {residual:.3e} in {which}")]
    Symmetry { which: &'static str, residual: f64 },
}

/// The state vector `U = (rho, u, theta, q)` with `rho > 0`, `theta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateVector {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
    pub q: f64,
}

impl StateVector {
    pub fn new(rho: f64, u: f64, theta: f64, q: f64) -> Result<Self, MatrixError> {
        let s = StateVector { rho, u, theta, q };
        s.check_domain()?;
        Ok(s)
    }

    pub fn check_domain(&self) -> Result<(), MatrixError> {
        let ok = self.rho > 0.0
            && self.theta > 0.0
            && self.rho.is_finite()
            && self.u.is_finite()
            && self.theta.is_finite()
            && self.q.is_finite();
        if ok {
            Ok(())
        } else {
            Err(MatrixError::Domain {
                rho: self.rho,
                theta: self.theta,
            })
        }
    }
}

/// Whether `U` lies on the equilibrium manifold (zero heat flux) up to `tol`.
pub fn is_equilibrium(state: &StateVector, tol: f64) -> bool {
    state.q.abs() <= tol
}

/// The assembled quasi-linear system at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    pub a0: Mat4,
    pub a1: Mat4,
    pub b: Mat4,
    pub d: Mat4,
    pub q_vec: Vec4,
    pub at_state: StateVector,
}

/// Assemble `(A0, A1, B, Q, D)` at `U`.
pub fn assemble(state: &StateVector, model: &FluidModel) -> Result<SystemMatrices, MatrixError> {
    state.check_domain()?;
    let t = eos::evaluate(model, state.rho, state.theta)?;
    Ok(assemble_from_thermo(state, &t, model.tau))
}

/// Assembly from an already evaluated `ThermoEval` (shared with `symmetrize`).
pub fn assemble_from_thermo(state: &StateVector, t: &ThermoEval, tau: f64) -> SystemMatrices {
    let (rho, u, theta, q) = (state.rho, state.u, state.theta, state.q);
    let a0 = Mat4::from_diagonal(&Vec4::new(1.0, rho, rho * t.e_theta, tau));
    let a1 = Mat4::new(
        u,
        rho,
        0.0,
        0.0, //
        t.p_rho,
        rho * u,
        t.p_theta,
        0.0, //
        0.0,
        theta * t.p_theta,
        rho * u * t.e_theta,
        1.0, //
        0.0,
        0.0,
        t.kappa,
        tau * u,
    );
    let mut b = Mat4::zeros();
    b[(1, 1)] = t.nu;
    let d = Mat4::from_diagonal(&Vec4::new(0.0, 0.0, 0.0, -1.0));
    let q_vec = Vec4::new(0.0, 0.0, 0.0, -q);
    SystemMatrices {
        a0,
        a1,
        b,
        d,
        q_vec,
        at_state: *state,
    }
}

/// The symmetrized system `(S, A0h, A1h, Bh, L)` with `L = -S D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSystem {
    pub s: Mat4,
    pub a0h: Mat4,
    pub a1h: Mat4,
    pub bh: Mat4,
    pub l: Mat4,
}

impl SymmetricSystem {
    /// Exact inverse of the diagonal `A0h`.
    pub fn a0h_inv(&self) -> Mat4 {
        Mat4::from_diagonal(&Vec4::new(
            1.0 / self.a0h[(0, 0)],
            1.0 / self.a0h[(1, 1)],
            1.0 / self.a0h[(2, 2)],
            1.0 / self.a0h[(3, 3)],
        ))
    }

    /// Condition number of the diagonal `A0h`.
    pub fn a0h_cond(&self) -> f64 {
        let d = [
            self.a0h[(0, 0)],
            self.a0h[(1, 1)],
            self.a0h[(2, 2)],
            self.a0h[(3, 3)],
        ];
        let max = d.iter().fold(f64::MIN, |a, b| a.max(*b));
        let min = d.iter().fold(f64::MAX, |a, b| a.min(*b));
        max / min
    }
}

/// Multiply by the symmetrizer and verify symmetry of every product.
pub fn symmetrize(sm: &SystemMatrices, model: &FluidModel) -> Result<SymmetricSystem, MatrixError> {
    let state = &sm.at_state;
    let t = eos::evaluate(model, state.rho, state.theta)?;
    let s = Mat4::from_diagonal(&Vec4::new(
        t.p_rho / state.rho,
        1.0,
        1.0 / state.theta,
        1.0 / (t.kappa * state.theta),
    ));
    let a0h = s * sm.a0;
    let a1h = s * sm.a1;
    let bh = s * sm.b;
    let l = -(s * sm.d);
    let scale = 1.0_f64
        .max(crate::linalg::entry_inf_norm(&a1h))
        .max(crate::linalg::entry_inf_norm(&a0h));
    for (which, m) in [("S*A0", &a0h), ("S*A1", &a1h), ("S*B", &bh), ("-S*D", &l)] {
        let residual = symmetry_residual(m);
        if residual > SYMMETRY_TOL * scale {
            return Err(MatrixError::Symmetry { which, residual });
        }
    }
    Ok(SymmetricSystem { s, a0h, a1h, bh, l })
}
