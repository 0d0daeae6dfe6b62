//! Quantum and classical mutual information and quantum discord for the
//! symmetric X-state family.
//!
//! For these states both marginals are maximally mixed, and the minimal
//! average conditional entropy over projective measurements is attained
//! along sigma_Z or sigma_X, selected by comparing `u = 2(w + z)` against
//! `v = |4a - 1|`:
//!
//! - `u <= v`: measure sigma_Z, conditional entropy `h((1 + v)/2)`;
//! - `u >= v`: measure sigma_X, conditional entropy `h((1 + u)/2)`.
//!
//! [`discord_closed`] evaluates that criterion; [`discord_brute`] minimizes
//! the conditional entropy over a dense Bloch-sphere grid with
//! golden-section refinement and serves as the independent oracle.

use crate::error::{Error, Result};
use crate::qcore::{binary_entropy, DensityMatrix, MeasurementDirection, Outcome, Qubit};
use crate::xstate::{canonicalize, entanglement_of_formation, ApparatusParams, XStateParams};
use serde::Serialize;

/// Which projective measurement minimizes the average conditional entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// sigma_Z strictly optimal (`u < v`).
    Z,
    /// sigma_X strictly optimal (`u > v`).
    X,
    /// `|u - v| <= 1e-12`: the conditional entropy is measurement
    /// independent (Werner and Werner-like lines).
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Z => write!(f, "Z"),
            Branch::X => write!(f, "X"),
            Branch::Degenerate => write!(f, "degenerate"),
        }
    }
}

/// The branch criterion values of a canonical X-state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordDiagnostics {
    /// `u = 2(w + z)`.
    pub u: f64,
    /// `v = |4a - 1|`.
    pub v: f64,
    pub branch: Branch,
}

const BRANCH_TIE_TOL: f64 = 1e-12;

fn branch_of(u: f64, v: f64) -> Branch {
    if (u - v).abs() <= BRANCH_TIE_TOL {
        Branch::Degenerate
    } else if u < v {
        Branch::Z
    } else {
        Branch::X
    }
}

impl XStateParams {
    /// Branch criterion values `(u, v)` and the selected measurement.
    pub fn diagnostics(&self) -> DiscordDiagnostics {
        let u = 2.0 * (self.w() + self.z());
        let v = (4.0 * self.a() - 1.0).abs();
        DiscordDiagnostics {
            u,
            v,
            branch: branch_of(u, v),
        }
    }

    /// von Neumann entropy from the closed eigenvalues {a+-w, b+-z}.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|&l| if l > 0.0 { -l * l.log2() } else { 0.0 })
            .sum()
    }
}

/// Total mutual information `I = S(rho_s) + S(rho_p) - S(rho_sp)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> f64 {
    let s_s = rho.partial_trace(Qubit::Polarization).entropy();
    let s_p = rho.partial_trace(Qubit::Path).entropy();
    (s_s + s_p - rho.entropy()).clamp(0.0, 2.0)
}

/// Probability-weighted conditional entropy of the path qubit after
/// measuring the polarization qubit along `direction`:
/// `sum over +- of p(o) S(rho_p | o)`. Branches with probability below
/// 1e-12 contribute zero (the `p log p -> 0` limit).
pub fn avg_conditional_entropy(rho: &DensityMatrix, direction: &MeasurementDirection) -> f64 {
    Outcome::BOTH
        .iter()
        .map(|&o| match rho.conditional(direction, o) {
            Ok((p, state)) => p * state.entropy(),
            Err(Error::DegenerateOutcome { .. }) => 0.0,
            Err(e) => unreachable!("conditional state of a valid input: {e}"),
        })
        .sum()
}

/// Minimal average conditional entropy of a canonical X-state:
/// `h((1+v)/2)` on the sigma_Z branch, `h((1+u)/2)` on the sigma_X branch.
pub fn min_conditional_entropy_closed(params: &XStateParams) -> f64 {
    let d = params.diagnostics();
    let arg = match d.branch {
        Branch::Z | Branch::Degenerate => d.v,
        Branch::X => d.u,
    };
    binary_entropy(0.5 * (1.0 + arg)).expect("u, v lie in [0, 1]")
}

/// Closed-form quantum discord of a canonical symmetric X-state, in bits,
/// together with the branch diagnostics.
pub fn discord_closed(params: &XStateParams) -> (f64, DiscordDiagnostics) {
    let diagnostics = params.diagnostics();
    let d = 1.0 - params.entropy() + min_conditional_entropy_closed(params);
    (d.clamp(0.0, 1.0), diagnostics)
}

/// Closed-form classical mutual information `J = S(rho_p) - min cond.
/// entropy = 1 - min(S_Z, S_X)` (the marginals of the family are
/// maximally mixed).
pub fn classical_information_closed(params: &XStateParams) -> f64 {
    (1.0 - min_conditional_entropy_closed(params)).clamp(0.0, 1.0)
}

/// Resolution of the brute-force measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Inclusive polar samples over [0, pi].
    pub theta_steps: usize,
    /// Azimuthal samples over [0, 2*pi).
    pub phi_steps: usize,
    /// Golden-section refinement stops below this angular width (radians).
    pub refine_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            theta_steps: 181,
            phi_steps: 360,
            refine_tol: 1e-6,
        }
    }
}

impl GridSpec {
    /// Coarser grid for the accessible-information search, where exact
    /// axis candidates are evaluated separately anyway.
    pub fn coarse() -> Self {
        Self {
            theta_steps: 91,
            phi_steps: 180,
            refine_tol: 1e-6,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimizer on [lo, hi]; the grid pre-search guarantees a
/// bracket around a local minimum.
fn golden_section_min(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    f: &mut impl FnMut(f64) -> f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

fn direction_at(theta: f64, phi: f64) -> MeasurementDirection {
    let theta = theta.clamp(0.0, std::f64::consts::PI);
    let mut phi = phi.rem_euclid(std::f64::consts::TAU);
    if phi >= std::f64::consts::TAU {
        phi = 0.0;
    }
    MeasurementDirection::new(theta, phi).expect("angles normalized into range")
}

/// Minimizes `objective(theta, phi)` over the Bloch sphere: dense grid,
/// then alternating per-coordinate golden-section refinement around the
/// best cell. Returns the minimizing direction and value.
pub(crate) fn minimize_over_directions(
    grid: &GridSpec,
    mut objective: impl FnMut(f64, f64) -> f64,
) -> (MeasurementDirection, f64) {
    let t_steps = grid.theta_steps.max(2);
    let p_steps = grid.phi_steps.max(1);
    let dt = std::f64::consts::PI / (t_steps - 1) as f64;
    let dp = std::f64::consts::TAU / p_steps as f64;

    let mut best = (0.0f64, 0.0f64);
    let mut best_val = f64::INFINITY;
    for i in 0..t_steps {
        let theta = i as f64 * dt;
        // At the poles the azimuth is redundant.
        let p_count = if i == 0 || i == t_steps - 1 { 1 } else { p_steps };
        for j in 0..p_count {
            let phi = j as f64 * dp;
            let val = objective(theta, phi);
            if val < best_val {
                best_val = val;
                best = (theta, phi);
            }
        }
    }

    // Alternating coordinate refinement within one grid cell each way.
    let (mut theta, mut phi) = best;
    for _ in 0..3 {
        let (t, _) = golden_section_min(
            (theta - dt).max(0.0),
            (theta + dt).min(std::f64::consts::PI),
            grid.refine_tol,
            &mut |x| objective(x, phi),
        );
        theta = t;
        let (p, _) = golden_section_min(phi - dp, phi + dp, grid.refine_tol, &mut |x| {
            objective(theta, x.rem_euclid(std::f64::consts::TAU))
        });
        phi = p.rem_euclid(std::f64::consts::TAU);
    }
    let val = objective(theta, phi);
    if val <= best_val {
        best_val = val;
        best = (theta, phi);
    }
    (direction_at(best.0, best.1), best_val)
}

/// Quantum discord by direct minimization over projective measurements of
/// the polarization qubit: `D = S(rho_p) - S(rho_sp) + min avg conditional
/// entropy`. Independent oracle for [`discord_closed`]; works for any
/// two-qubit state, not just the X family.
pub fn discord_brute(rho: &DensityMatrix, grid: &GridSpec) -> (f64, MeasurementDirection) {
    let (direction, min_cond) = minimize_over_directions(grid, |theta, phi| {
        avg_conditional_entropy(rho, &direction_at(theta, phi))
    });
    let d = rho.partial_trace(Qubit::Path).entropy() - rho.entropy() + min_cond;
    (d.max(0.0), direction)
}

/// Optimal-measurement classification of an apparatus state via
/// `u = kappa_h R + kappa_v T` and `v = |2R - 1|`. The degenerate set
/// contains the Werner line `R = 1/(2 - kappa_h)` and the Werner-like
/// line `R = 1/(2 + kappa_h)`.
pub fn optimal_measurement_region(params: &ApparatusParams) -> Branch {
    let u = params.kappa_h() * params.r() + params.kappa_v() * params.t();
    let v = (2.0 * params.r() - 1.0).abs();
    branch_of(u, v)
}

/// All correlation measures of one symmetric X-state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    /// Marginal entropy of the polarization qubit (bits).
    pub s_s: f64,
    /// Marginal entropy of the path qubit (bits).
    pub s_p: f64,
    /// Joint entropy (bits).
    pub s_sp: f64,
    /// Total mutual information `I` (bits).
    pub mutual_information: f64,
    /// Classical mutual information `J` (bits).
    pub classical_information: f64,
    /// Quantum discord `D` (bits).
    pub discord: f64,
    /// Wootters concurrence.
    pub concurrence: f64,
    /// Entanglement of formation (bits).
    pub entanglement_of_formation: f64,
    pub diagnostics: DiscordDiagnostics,
}

/// Full closed-form correlation report of a symmetric X-state (accepts
/// complex coherences; they canonicalize away). Non-X or asymmetric
/// inputs are rejected; use [`discord_brute`] for those.
pub fn correlation_report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    let params = canonicalize(rho)?;
    let s_s = rho.partial_trace(Qubit::Polarization).entropy();
    let s_p = rho.partial_trace(Qubit::Path).entropy();
    let s_sp = rho.entropy();
    let (discord, diagnostics) = discord_closed(&params);
    let classical = classical_information_closed(&params);
    let concurrence = params.concurrence();
    Ok(CorrelationReport {
        s_s,
        s_p,
        s_sp,
        mutual_information: (s_s + s_p - s_sp).clamp(0.0, 2.0),
        classical_information: classical,
        discord,
        concurrence,
        entanglement_of_formation: entanglement_of_formation(concurrence)?,
        diagnostics,
    })
}
