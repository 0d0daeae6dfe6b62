//! Self-contained verification suite: analytic extrema, oracle
//! equivalences, consumption bounds, Monte Carlo limits, and runtime
//! budgets, each reported as a named pass/fail check with its worst
//! measured deviation.
//!
//! The checks are pure functions so the CLI (`verify` subcommand) and the
//! acceptance test suite share one implementation; everything random is
//! seeded, so two runs in the same environment print identical reports.

use crate::correlations::{correlation_report, discord_brute, discord_closed, GridSpec};
use crate::protocol::{
    advantage, encode_ensemble, post_encoding_correlations, EncodingDistribution,
};
use crate::qcore::DensityMatrix;
use crate::sweep::{
    peak_cut_advantage_without_entanglement, peak_discord_without_concurrence, sweep_prepared,
    Axis, SweepParam, SweepSpec,
};
use crate::transactions::{run_transactions, Strategy, TransactionConfig};
use crate::xstate::{concurrence_spin_flip, prepared_state, ApparatusParams, XStateParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

/// Default seed of the randomized checks.
pub const DEFAULT_SEED: u64 = 7;

/// One named verification result.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst measured deviation across the check's assertions.
    pub measured: f64,
    /// Tolerance of the worst assertion.
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// One printable line: `PASS name: worst 1.2e-13 (tol 1e-9) — detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {}: worst {:.3e} (tol {:.1e}) — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

/// Accumulates labelled `deviation <= tolerance` assertions.
struct CheckBuilder {
    name: &'static str,
    passed: bool,
    worst_ratio: f64,
    measured: f64,
    tolerance: f64,
    parts: Vec<String>,
}

impl CheckBuilder {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            worst_ratio: -1.0,
            measured: 0.0,
            tolerance: f64::INFINITY,
            parts: Vec::new(),
        }
    }

    fn assert_le(&mut self, label: &str, deviation: f64, tolerance: f64) {
        let ok = deviation <= tolerance;
        self.passed &= ok;
        let ratio = if tolerance > 0.0 {
            deviation / tolerance
        } else if deviation <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.measured = deviation;
            self.tolerance = tolerance;
        }
        if !ok {
            self.parts.push(format!("{label}: {deviation:.3e} > {tolerance:.1e}"));
        }
    }

    fn note(&mut self, text: String) {
        self.parts.push(text);
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.passed,
            measured: self.measured,
            tolerance: self.tolerance,
            detail: if self.parts.is_empty() {
                "all assertions hold".into()
            } else {
                self.parts.join("; ")
            },
        }
    }
}

/// Criterion 1: the fully reflected, fully coherent source is a Bell
/// state with C = E = D = 1 and I = 2.
pub fn bell_extremum() -> Check {
    let mut check = CheckBuilder::new("bell_extremum");
    let rho = ApparatusParams::new(1.0, 1.0, 0.0)
        .expect("valid parameters")
        .state();
    let rep = correlation_report(&rho).expect("apparatus states are symmetric X-states");
    check.assert_le("concurrence", (rep.concurrence - 1.0).abs(), 1e-9);
    check.assert_le(
        "entanglement of formation",
        (rep.entanglement_of_formation - 1.0).abs(),
        1e-9,
    );
    check.assert_le("discord", (rep.discord - 1.0).abs(), 1e-9);
    check.assert_le("mutual information", (rep.mutual_information - 2.0).abs(), 1e-9);
    check.finish()
}

/// Criterion 2: the discord peak without entanglement is exactly 1/3 at
/// (R, kappa_h) = (1/3, 1); the default grid plus refinement localizes it
/// to 1e-3 in both parameters.
pub fn discord_without_entanglement() -> Check {
    let mut check = CheckBuilder::new("discord_without_entanglement");
    let params = ApparatusParams::new(1.0 / 3.0, 1.0, 0.0)
        .expect("valid parameters")
        .canonical_params();
    check.assert_le("concurrence at the point", params.concurrence(), 0.0);
    let (d, _) = discord_closed(&params);
    check.assert_le("discord at the point", (d - 1.0 / 3.0).abs(), 1e-9);

    let peak = peak_discord_without_concurrence(&SweepSpec::prepared_default())
        .expect("default spec is valid");
    check.assert_le("peak value", (peak.value - 1.0 / 3.0).abs(), 1e-6);
    check.assert_le("peak R", (peak.at.0 - 1.0 / 3.0).abs(), 1e-3);
    check.assert_le("peak kappa_h", (peak.at.1 - 1.0).abs(), 1e-3);
    check.finish()
}

/// Criterion 3: uniform encoding turns the advantage into the initial
/// discord, the Holevo information into the initial mutual information,
/// the accessible information into the initial classical information, and
/// the average state into the maximally mixed one.
pub fn optimal_encoding_identities() -> Check {
    let mut check = CheckBuilder::new("optimal_encoding_identities");
    let uniform = EncodingDistribution::uniform();
    let mut worst = [0.0f64; 4];
    for i in 0..50 {
        let r = i as f64 / 49.0;
        let rho = prepared_state(r).expect("R in range");
        let rep = correlation_report(&rho).expect("prepared states are canonical");
        let adv = advantage(&rho, &uniform).expect("prepared states are symmetric");
        worst[0] = worst[0].max((adv.delta_i - rep.discord).abs());
        worst[1] = worst[1].max((adv.i_q - rep.mutual_information).abs());
        worst[2] = worst[2].max((adv.i_c - rep.classical_information).abs());
        worst[3] = worst[3].max(
            encode_ensemble(&rho, &uniform).max_abs_diff(&DensityMatrix::maximally_mixed()),
        );
    }
    check.assert_le("dI vs D over 50 R", worst[0], 1e-9);
    check.assert_le("Iq vs I over 50 R", worst[1], 1e-9);
    check.assert_le("Ic vs J over 50 R", worst[2], 1e-9);
    check.assert_le("average state vs 1/4 identity", worst[3], 1e-12);
    check.finish()
}

/// Criterion 4: the one-Pauli cut (p1 = p2 = 1/2) peaks, over the
/// entanglement-free region, at 3(2 - log2 3)/4 within 1e-6, at R within
/// 1e-3 of 1/2, where the advantage equals the discord consumption.
pub fn one_pauli_peak() -> Check {
    let mut check = CheckBuilder::new("one_pauli_peak");
    let axis = Axis::full(SweepParam::Reflection, 201).expect("static axis");
    let peak = peak_cut_advantage_without_entanglement(0.5, &axis).expect("p1 = 1/2 is legal");
    let target = 3.0 * (2.0 - 3f64.log2()) / 4.0;
    check.assert_le("peak value", (peak.value - target).abs(), 1e-6);
    check.assert_le("peak location vs R = 1/2", (peak.at.0 - 0.5).abs(), 1e-3);

    let dist = EncodingDistribution::quasi_optimal(0.5).expect("p1 = 1/2 is legal");
    let at_peak = advantage(&prepared_state(peak.at.0).expect("in range"), &dist)
        .expect("prepared states are symmetric");
    check.assert_le(
        "axes search vs full search at the peak",
        (at_peak.delta_i - peak.value).abs(),
        1e-9,
    );
    check.assert_le(
        "advantage vs discord consumption at the peak",
        (at_peak.delta_i - at_peak.delta_d).abs(),
        1e-9,
    );
    check.finish()
}

/// Criterion 5: the consumption sandwich `dD - J(rho~) <= dI <= dD` holds
/// for 1000 seeded-random (R, distribution) pairs.
pub fn consumption_bounds(seed: u64) -> Check {
    let mut check = CheckBuilder::new("consumption_bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_lower = 0.0f64;
    let mut worst_upper = 0.0f64;
    for _ in 0..1000 {
        let r: f64 = rng.random_range(0.0..=1.0);
        let dist = random_distribution(&mut rng);
        let adv = advantage(&prepared_state(r).expect("in range"), &dist)
            .expect("prepared states are symmetric");
        worst_lower = worst_lower.max(-adv.lower_slack);
        worst_upper = worst_upper.max(-adv.upper_slack);
    }
    check.assert_le("lower bound violation over 1000 samples", worst_lower, 1e-9);
    check.assert_le("upper bound violation over 1000 samples", worst_upper, 1e-9);
    check.finish()
}

/// Criterion 6a: closed-form discord against the brute-force projective
/// minimization on 200 seeded-random canonical X-states.
pub fn discord_oracle(seed: u64) -> Check {
    let mut check = CheckBuilder::new("discord_oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let grid = GridSpec::default();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let params = random_canonical(&mut rng);
        let (closed, _) = discord_closed(&params);
        let (brute, _) = discord_brute(&params.assemble(), &grid);
        worst = worst.max((closed - brute).abs());
    }
    check.assert_le("closed vs brute discord over 200 states", worst, 2e-4);
    check.finish()
}

/// Criterion 6b: the family's concurrence against the general spin-flip
/// construction on 200 seeded-random canonical X-states.
pub fn concurrence_oracle(seed: u64) -> Check {
    let mut check = CheckBuilder::new("concurrence_oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let params = random_canonical(&mut rng);
        let direct = params.concurrence();
        let oracle = concurrence_spin_flip(&params.assemble());
        worst = worst.max((direct - oracle).abs());
    }
    check.assert_le("closed vs spin-flip concurrence over 200 states", worst, 1e-9);
    check.finish()
}

/// Criterion 7: every quasi-optimal encoding consumes all discord.
pub fn quasi_optimal_consumption(seed: u64) -> Check {
    let mut check = CheckBuilder::new("quasi_optimal_consumption");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r: f64 = rng.random_range(0.0..=1.0);
        let p1: f64 = rng.random_range(0.0..=0.5);
        let dist = EncodingDistribution::quasi_optimal(p1).expect("p1 in range");
        let rho = prepared_state(r).expect("in range");
        let rep = correlation_report(&encode_ensemble(&rho, &dist))
            .expect("averaged state stays in the family");
        worst = worst.max(rep.discord);
        let closed = post_encoding_correlations(&dist, r).expect("ordering holds");
        worst = worst.max(closed.discord);
    }
    check.assert_le("post-encoding discord over 100 samples", worst, 1e-9);
    check.finish()
}

/// Criterion 8: the superdense limit. Joint decoding at R = 1 is
/// error-free, the Holevo information is exactly two bits, and the local
/// strategy learns nothing about the phase bit.
pub fn superdense_limit(seed: u64) -> Check {
    let mut check = CheckBuilder::new("superdense_limit");
    let uniform = EncodingDistribution::uniform();
    let joint = run_transactions(&TransactionConfig {
        r: 1.0,
        dist: uniform,
        shots: 10_000,
        seed,
        strategy: Strategy::Joint,
    })
    .expect("valid config");
    check.assert_le("joint failure rate at R = 1", 1.0 - joint.success_rate, 0.0);

    let i_q = crate::protocol::holevo(&prepared_state(1.0).expect("in range"), &uniform);
    check.assert_le("Holevo vs 2 bits", (i_q - 2.0).abs(), 1e-12);

    let local = run_transactions(&TransactionConfig {
        r: 1.0,
        dist: uniform,
        shots: 100_000,
        seed,
        strategy: Strategy::local_detector_basis(),
    })
    .expect("valid config");
    let three_sigma = 3.0 * (0.25f64 / 100_000.0).sqrt();
    check.assert_le(
        "local b2 accuracy vs coin flip",
        (local.per_bit_accuracy.1 - 0.5).abs(),
        three_sigma,
    );
    check.finish()
}

/// Criterion 9: discord vanishes along the fully transmitted edge
/// (R = 0, kappa_v = 0) and the fully decohered edge
/// (kappa_h = kappa_v = 0), 101 samples each.
pub fn vanishing_discord() -> Check {
    let mut check = CheckBuilder::new("vanishing_discord");
    let mut worst = 0.0f64;
    for i in 0..101 {
        let x = i as f64 / 100.0;
        let (d, _) = discord_closed(
            &ApparatusParams::new(0.0, x, 0.0)
                .expect("valid parameters")
                .canonical_params(),
        );
        worst = worst.max(d);
        let (d, _) = discord_closed(
            &ApparatusParams::new(x, 0.0, 0.0)
                .expect("valid parameters")
                .canonical_params(),
        );
        worst = worst.max(d);
    }
    check.assert_le("discord on the vanishing edges", worst, 1e-12);
    check.finish()
}

/// Criterion 10: runtime budgets. The default 201x201 apparatus sweep
/// stays under 60 s single-threaded and the full verification suite under
/// 5 minutes; `suite_elapsed` is the time the other checks took.
pub fn performance(suite_elapsed: std::time::Duration) -> Check {
    let mut check = CheckBuilder::new("performance");
    let started = Instant::now();
    let rows = sweep_prepared(&SweepSpec::prepared_default(), 0.0).expect("default spec");
    let sweep_seconds = started.elapsed().as_secs_f64();
    check.note(format!("default sweep: {} rows in {sweep_seconds:.3} s", rows.len()));
    check.assert_le("default sweep seconds", sweep_seconds, 60.0);
    let total = suite_elapsed.as_secs_f64() + started.elapsed().as_secs_f64();
    check.note(format!("suite total: {total:.1} s"));
    check.assert_le("verification suite seconds", total, 300.0);
    check.finish()
}

/// Runs the whole suite in criterion order.
pub fn run_all(seed: u64) -> Vec<Check> {
    let started = Instant::now();
    let mut checks = vec![
        bell_extremum(),
        discord_without_entanglement(),
        optimal_encoding_identities(),
        one_pauli_peak(),
        consumption_bounds(seed),
        discord_oracle(seed),
        concurrence_oracle(seed),
        quasi_optimal_consumption(seed),
        superdense_limit(seed),
        vanishing_discord(),
    ];
    checks.push(performance(started.elapsed()));
    checks
}

fn random_canonical(rng: &mut impl Rng) -> XStateParams {
    let a: f64 = rng.random_range(0.0..=0.5);
    let w: f64 = rng.random_range(0.0..=a);
    let z: f64 = rng.random_range(0.0..=(0.5 - a));
    XStateParams::new(a, w, z).expect("sampled inside the cone")
}

fn random_distribution(rng: &mut impl Rng) -> EncodingDistribution {
    let mut p = [0.0f64; 4];
    let mut total = 0.0;
    for v in p.iter_mut() {
        *v = -rng.random_range(0.0f64..1.0).max(1e-12).ln();
        total += *v;
    }
    for v in p.iter_mut() {
        *v /= total;
    }
    p[3] = 1.0 - p[0] - p[1] - p[2];
    EncodingDistribution::new(p).expect("normalized simplex point")
}
