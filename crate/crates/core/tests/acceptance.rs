//! Acceptance gate: the ten criteria the laboratory must certify, one
//! pass/fail line each (visible with `cargo test --test acceptance -- --nocapture`,
//! or in full on failure).

use std::process::Command;

use nalgebra::Matrix4;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dissiplab::coupling::{
    check_genuine_coupling, compensating_inviscid, compensating_viscous, viscous_delta_bounds,
    CouplingError, DEFAULT_COUPLING_TOL,
};
use dissiplab::decay::{
    energy_balance_residual, lyapunov_check, pointwise_bound, decay_trace, sample_trajectory,
    InitialData, QuadratureSpec,
};
use dissiplab::dispersion::{dispersion_eigenvalues, scan, verify_bound, GridSpacing};
use dissiplab::eos::{self, FluidModel};
use dissiplab::linalg::{symmetric_eigenvalues, symmetry_residual, Vec4};
use dissiplab::matrices::{assemble, symmetrize, StateVector, SymmetricSystem};
use dissiplab::spectral::{
    char_speeds_closed_form, char_speeds_eigen, discriminant_factored, quadratic_coefficients,
};
use num_complex::Complex64;

const N_STATES: usize = 1000;
const SEED: u64 = 0x5eed;

fn model(nu: f64) -> FluidModel {
    FluidModel::ideal_gas(1.0, 1.4, 1.0, nu, 1.0).unwrap()
}

fn unit_state() -> StateVector {
    StateVector::new(1.0, 0.0, 1.0, 0.0).unwrap()
}

fn sample_states(n: usize, seed: u64, equilibrium: bool) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let rho = rng.gen_range(0.1..=10.0);
            let u = rng.gen_range(-5.0..=5.0);
            let theta = rng.gen_range(0.1..=10.0);
            let q = if equilibrium { 0.0 } else { rng.gen_range(-2.0..=2.0) };
            StateVector::new(rho, u, theta, q).unwrap()
        })
        .collect()
}

fn reference_system(nu: f64) -> SymmetricSystem {
    let m = model(nu);
    symmetrize(&assemble(&unit_state(), &m).unwrap(), &m).unwrap()
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn record(&mut self, number: u32, name: &str, result: Result<(), String>) {
        match result {
            Ok(()) => println!("criterion {number:2} {name}: pass"),
            Err(why) => {
                println!("criterion {number:2} {name}: FAIL ({why})");
                self.failures.push(format!("criterion {number} {name}: {why}"));
            }
        }
    }

    /// A criterion whose literal wording is mathematically unattainable: the
    /// line reports the honest failure; the gate instead enforces the exact
    /// characterization of what does hold.
    fn record_unattainable(
        &mut self,
        number: u32,
        name: &str,
        why_unattainable: &str,
        characterization: Result<(), String>,
    ) {
        println!("criterion {number:2} {name}: fail as specified ({why_unattainable})");
        match characterization {
            Ok(()) => println!(
                "criterion {number:2} {name}: sharp characterization verified instead"
            ),
            Err(why) => {
                println!("criterion {number:2} {name}: characterization FAILED ({why})");
                self.failures.push(format!("criterion {number} {name}: {why}"));
            }
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "acceptance failures:\n{}",
            self.failures.join("\n")
        );
    }
}

fn criterion_1() -> Result<(), String> {
    let m = model(0.0);
    for state in sample_states(N_STATES, SEED, false) {
        let cs = char_speeds_closed_form(&state, &m).map_err(|e| e.to_string())?;
        if !(cs.discriminant > 0.0) {
            return Err(format!("discriminant {} not positive at {state:?}", cs.discriminant));
        }
        let t = eos::evaluate(&m, state.rho, state.theta).map_err(|e| e.to_string())?;
        let factored = discriminant_factored(&t, &state, m.tau);
        let rel = (cs.discriminant - factored).abs() / factored.abs();
        if rel > 1e-12 {
            return Err(format!("discriminant forms differ by {rel:.3e} at {state:?}"));
        }
        let sm = assemble(&state, &m).map_err(|e| e.to_string())?;
        let eig = char_speeds_eigen(&sm).map_err(|e| e.to_string())?;
        let err = eig
            .iter()
            .zip(cs.zeta.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        if err > 1e-9 {
            return Err(format!("closed form vs eigensolve differ by {err:.3e} at {state:?}"));
        }
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    let m = model(0.0);
    let state = unit_state();
    let (b, c) = quadratic_coefficients(&state, &m).map_err(|e| e.to_string())?;
    let cs = char_speeds_closed_form(&state, &m).map_err(|e| e.to_string())?;
    let checks = [
        ("b_tilde", b, -1.8, 1e-12),
        ("c_tilde", c, 0.4, 1e-12),
        ("discriminant", cs.discriminant, 1.64, 1e-12),
        ("slow speed", cs.c_slow, 0.509596, 1e-5),
        ("fast speed", cs.c_fast, 1.241097, 1e-5),
    ];
    for (name, got, want, tol) in checks {
        if (got - want).abs() > tol {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    let speeds = [-cs.c_fast, -cs.c_slow, cs.c_slow, cs.c_fast];
    for (z, s) in cs.zeta.iter().zip(speeds.iter()) {
        if (z - s).abs() > 1e-12 {
            return Err(format!("speed quadruple {:?} not symmetric", cs.zeta));
        }
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let m = model(nu);
        for state in sample_states(N_STATES, SEED, false) {
            let ss = symmetrize(&assemble(&state, &m).map_err(|e| e.to_string())?, &m)
                .map_err(|e| e.to_string())?;
            let scale = |m: &Matrix4<f64>| m.norm().max(1.0);
            for (name, mat) in [("A0h", &ss.a0h), ("A1h", &ss.a1h), ("Bh", &ss.bh), ("L", &ss.l)] {
                let r = symmetry_residual(mat) / scale(mat);
                if r > 1e-12 {
                    return Err(format!("{name} symmetry residual {r:.3e} at {state:?}"));
                }
            }
            if !(symmetric_eigenvalues(&ss.a0h)[0] > 0.0) {
                return Err(format!("A0h not positive definite at {state:?}"));
            }
            for (name, mat) in [("Bh", &ss.bh), ("L", &ss.l)] {
                if symmetric_eigenvalues(mat)[0] < -1e-14 {
                    return Err(format!("{name} has negative eigenvalue at {state:?}"));
                }
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let m = model(nu);
        for state in sample_states(N_STATES, SEED, false) {
            let ss = symmetrize(&assemble(&state, &m).map_err(|e| e.to_string())?, &m)
                .map_err(|e| e.to_string())?;
            let v = check_genuine_coupling(&ss, DEFAULT_COUPLING_TOL).map_err(|e| e.to_string())?;
            if !v.genuinely_coupled || v.min_kernel_overlap <= 1e-8 {
                return Err(format!(
                    "kernel overlap {:.3e} at {state:?} (nu = {nu})",
                    v.min_kernel_overlap
                ));
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    for state in sample_states(100, SEED ^ 0xc0de, true) {
        let mv = model(0.1);
        let tv = eos::evaluate(&mv, state.rho, state.theta).map_err(|e| e.to_string())?;
        let ssv = symmetrize(&assemble(&state, &mv).map_err(|e| e.to_string())?, &mv)
            .map_err(|e| e.to_string())?;
        let kv = compensating_viscous(&ssv, &state, &tv, None).map_err(|e| e.to_string())?;
        let mi = model(0.0);
        let ti = eos::evaluate(&mi, state.rho, state.theta).map_err(|e| e.to_string())?;
        let ssi = symmetrize(&assemble(&state, &mi).map_err(|e| e.to_string())?, &mi)
            .map_err(|e| e.to_string())?;
        let ki = compensating_inviscid(&ssi, &state, &ti, mi.tau, None).map_err(|e| e.to_string())?;
        for (name, k, ss) in [("viscous", &kv, &ssv), ("inviscid", &ki, &ssi)] {
            let skew_scale = (k.k * ss.a0h).norm().max(1.0);
            if k.diagnostics.skew_residual > 1e-12 * skew_scale {
                return Err(format!(
                    "{name} skew residual {:.3e} at {state:?}",
                    k.diagnostics.skew_residual
                ));
            }
        }
        // the inviscid construction must be strictly positive definite
        if !(ki.diagnostics.min_eig_sym > 0.0) {
            return Err(format!(
                "inviscid min eig {:.3e} at {state:?}",
                ki.diagnostics.min_eig_sym
            ));
        }
        // the viscous construction is positive semi-definite with its one
        // structural null direction (-p_theta, 0, p_rho, 0), exactly
        let ka1 = kv.k * ssv.a1h;
        let sym = 0.5 * (ka1 + ka1.transpose()) + ssv.bh + ssv.l;
        let scale = sym.norm().max(1.0);
        if kv.diagnostics.min_eig_sym < -1e-12 * scale {
            return Err(format!(
                "viscous form indefinite ({:.3e}) at {state:?}",
                kv.diagnostics.min_eig_sym
            ));
        }
        let kernel = Vec4::new(-tv.p_theta, 0.0, tv.p_rho, 0.0).normalize();
        if (sym * kernel).norm() > 1e-10 * scale {
            return Err(format!("viscous kernel direction not annihilated at {state:?}"));
        }
        let eigs = symmetric_eigenvalues(&sym);
        if !(eigs[1] > 1e-10 * kv.delta) {
            return Err(format!(
                "viscous form rank-deficient beyond the structural kernel at {state:?}: {eigs:?}"
            ));
        }
    }
    // unit-state regression of the viscous delta selection
    let mv = model(0.1);
    let state = unit_state();
    let tv = eos::evaluate(&mv, 1.0, 1.0).map_err(|e| e.to_string())?;
    let ssv = symmetrize(&assemble(&state, &mv).map_err(|e| e.to_string())?, &mv)
        .map_err(|e| e.to_string())?;
    let (b1, b2) = viscous_delta_bounds(&state, &tv);
    if (b2 - 0.0625).abs() > 1e-12 || (b1 - 5.0).abs() > 1e-12 {
        return Err(format!("delta bounds ({b1}, {b2}), expected (5, 0.0625)"));
    }
    let kv = compensating_viscous(&ssv, &state, &tv, None).map_err(|e| e.to_string())?;
    if (kv.delta - 0.03125).abs() > 1e-12 {
        return Err(format!("auto delta {} != 0.03125", kv.delta));
    }
    match compensating_viscous(&ssv, &state, &tv, Some(0.2)) {
        Err(CouplingError::DeltaTooLarge { .. }) => Ok(()),
        other => Err(format!("delta = 0.2 not rejected: {other:?}")),
    }
}

fn criterion_6() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let ss = reference_system(nu);
        let curve = scan(&ss, 1e-3, 1e3, 200, GridSpacing::Log).map_err(|e| e.to_string())?;
        if !curve.dissipative {
            return Err(format!("not dissipative at xi = {:?} (nu = {nu})", curve.offending_xi));
        }
        if !(curve.k_sharp > 0.0) {
            return Err(format!("k_sharp = {} (nu = {nu})", curve.k_sharp));
        }
        let (ok, slack) = verify_bound(&curve, curve.k_sharp);
        if !ok || slack.abs() > 1e-12 * (1.0 + curve.k_sharp) {
            return Err(format!("bound check ok = {ok}, slack = {slack:.3e} (nu = {nu})"));
        }
        let mut eig = dispersion_eigenvalues(&ss, 0.0).to_vec();
        eig.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        let expected = [0.0, 0.0, 0.0, -1.0];
        for (z, e) in eig.iter().zip(expected.iter()) {
            if (z - Complex64::from(*e)).norm() > 1e-10 {
                return Err(format!("xi = 0 spectrum {eig:?} (nu = {nu})"));
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let ss = reference_system(nu);
        let m = model(nu);
        let state = unit_state();
        let data = InitialData::gaussian(Vec4::new(1.0, 0.0, 0.0, 0.0), 1.0).unwrap();
        let xi = 1.0;
        let u0 = data.u0hat(xi);
        let dt = 1e-3;
        let r1 = energy_balance_residual(&ss, xi, &sample_trajectory(&ss, xi, &u0, dt, 10.0), dt);
        if r1 > 1e-5 {
            return Err(format!("energy residual {r1:.3e} (nu = {nu})"));
        }
        let r2 = energy_balance_residual(
            &ss,
            xi,
            &sample_trajectory(&ss, xi, &u0, dt / 2.0, 10.0),
            dt / 2.0,
        );
        let ratio = r1 / r2;
        if !(3.5..=4.5).contains(&ratio) {
            return Err(format!("convergence ratio {ratio} (nu = {nu})"));
        }
        let t = eos::evaluate(&m, 1.0, 1.0).map_err(|e| e.to_string())?;
        let k = if nu > 0.0 {
            compensating_viscous(&ss, &state, &t, None).map_err(|e| e.to_string())?
        } else {
            compensating_inviscid(&ss, &state, &t, m.tau, None).map_err(|e| e.to_string())?
        };
        for probe_xi in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let traj = sample_trajectory(&ss, probe_xi, &u0.normalize(), 0.05, 40.0);
            let check = lyapunov_check(&ss, &k, probe_xi, k.delta, &traj)
                .map_err(|e| e.to_string())?;
            if !check.passed() {
                return Err(format!("M functional fails at xi = {probe_xi} (nu = {nu}): {check:?}"));
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let ss = reference_system(nu);
        let curve = scan(&ss, 1e-3, 1e3, 200, GridSpacing::Log).map_err(|e| e.to_string())?;
        let data = InitialData::gaussian(Vec4::new(1.0, 0.0, 0.0, 0.0), 1.0).unwrap();
        let pw = pointwise_bound(&ss, &data, curve.k_sharp, 50, 50, 100.0);
        if pw.violations != 0 {
            return Err(format!(
                "{} lattice violations, worst margin {:.3e} (nu = {nu})",
                pw.violations, pw.worst_margin
            ));
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    for nu in [0.1, 0.0] {
        let ss = reference_system(nu);
        let m = model(nu);
        let state = unit_state();
        let t = eos::evaluate(&m, 1.0, 1.0).map_err(|e| e.to_string())?;
        let k = if nu > 0.0 {
            compensating_viscous(&ss, &state, &t, None).map_err(|e| e.to_string())?
        } else {
            compensating_inviscid(&ss, &state, &t, m.tau, None).map_err(|e| e.to_string())?
        };
        let curve = scan(&ss, 1e-3, 1e3, 200, GridSpacing::Log).map_err(|e| e.to_string())?;
        let data = InitialData::gaussian(Vec4::new(1.0, 0.0, 0.0, 0.0), 1.0).unwrap();
        let trace = decay_trace(
            &ss,
            &k,
            &data,
            1000.0,
            QuadratureSpec { xi_cut: 8.0, n_xi: 16000 },
            &[0, 1],
            curve.k_sharp,
        )
        .map_err(|e| e.to_string())?;
        let windows = [(-0.35, -0.15), (-0.90, -0.60)];
        for ((l, slope), (lo, hi)) in trace.l_list.iter().zip(trace.fitted_slopes.iter()).zip(windows) {
            if !(lo..=hi).contains(slope) {
                return Err(format!("l = {l} slope {slope} outside [{lo}, {hi}] (nu = {nu})"));
            }
        }
        if !trace.envelope_ok {
            return Err(format!("envelope violated (nu = {nu})"));
        }
    }
    Ok(())
}

fn criterion_10() -> Result<(), String> {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/ideal_gas_inviscid.json");
    let bin = env!("CARGO_BIN_EXE_dissiplab");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut artifacts: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for run in 0..2 {
        let dir = tmp.path().join(format!("run{run}"));
        let status = Command::new(bin)
            .args(["verify-all", "--config", config, "--output"])
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!(
                "verify-all exited with {:?}: {}",
                status.status.code(),
                String::from_utf8_lossy(&status.stderr)
            ));
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .map_err(|e| e.to_string())?
            .map(|entry| {
                let entry = entry.unwrap();
                let name = entry.file_name().to_string_lossy().into_owned();
                let mut bytes = std::fs::read(entry.path()).unwrap();
                if name == "report.json" {
                    // the timestamp is the one intentionally varying field
                    let text = String::from_utf8(bytes).unwrap();
                    bytes = text
                        .lines()
                        .filter(|l| !l.contains("\"timestamp_unix\""))
                        .collect::<Vec<_>>()
                        .join("\n")
                        .into_bytes();
                }
                (name, bytes)
            })
            .collect();
        files.sort();
        artifacts.push(files);
    }
    if artifacts[0].len() != 3 {
        return Err(format!(
            "expected report + 2 CSVs, found {:?}",
            artifacts[0].iter().map(|(n, _)| n).collect::<Vec<_>>()
        ));
    }
    if artifacts[0] != artifacts[1] {
        let differing: Vec<&String> = artifacts[0]
            .iter()
            .zip(artifacts[1].iter())
            .filter(|(a, b)| a != b)
            .map(|(a, _)| &a.0)
            .collect();
        return Err(format!("artifacts differ between runs: {differing:?}"));
    }
    Ok(())
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();
    gate.record(1, "characteristic-speed oracle equivalence", criterion_1());
    gate.record(2, "reference-state regression", criterion_2());
    gate.record(3, "symmetrization residuals and definiteness", criterion_3());
    gate.record(4, "genuine coupling", criterion_4());
    gate.record_unattainable(
        5,
        "compensating matrices",
        "min_eig_sym > 0 cannot hold for the viscous construction: its \
         density/temperature block is the rank-one form \
         (delta/rho)(p_rho x1 + p_theta x3)^2, so [K A1h]^s + Bh + L \
         annihilates (-p_theta, 0, p_rho, 0) for every delta",
        criterion_5(),
    );
    gate.record(6, "strict dissipativity sweep", criterion_6());
    gate.record(7, "energy identities", criterion_7());
    gate.record(8, "pointwise Fourier bound", criterion_8());
    gate.record(9, "decay rates", criterion_9());
    gate.record(10, "determinism", criterion_10());
    gate.finish();
}
