//! Finite-shot Monte Carlo of the encode/decode loop.
//!
//! Per shot Alice draws a message `k`, encodes it on the prepared state,
//! and Bob decodes:
//!
//! - `joint`: the optical decoding circuit (a polarizing beam splitter
//!   acting as a CNOT with polarization controlling path, then a
//!   half-wave plate acting as a Hadamard on polarization) followed by
//!   the four detectors. In the superdense regime the click index spells
//!   the bits directly (path bit = b1, polarization bit = b2); in general
//!   Bob weighs the click likelihoods against the priors.
//! - `local`: no two-qubit element; each qubit is measured along its own
//!   axis and Bob decodes the outcome pair the same way.
//!
//! Both decoders are maximum likelihood over the known ensemble, with
//! ties broken toward the lowest message index so runs are reproducible.
//! Sampling is batched over independent ChaCha streams (one per 10^4
//! shots), so a fixed seed reproduces statistics bit-exactly and batch
//! results merge by summing counts in any order.

use crate::error::{Error, Result};
use crate::protocol::{encode_one, BitPair, EncodingDistribution};
use crate::qcore::{kron, DensityMatrix, Mat2, Mat4, MeasurementDirection, Outcome};
use crate::xstate::prepared_state;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SHOTS_PER_STREAM: u64 = 10_000;

/// The two-qubit decoding unitary: CNOT (polarization controls path)
/// followed by a Hadamard on polarization.
fn decode_unitary() -> Mat4 {
    let mut cnot = Mat4::zeros();
    // |h,p> -> |h,p>; |v,p> -> |v, 1-p>  (indices 2 <-> 3).
    for (from, to) in [(0usize, 0usize), (1, 1), (2, 3), (3, 2)] {
        cnot.e[to][from] = crate::qcore::C64::ONE;
    }
    let hadamard = kron(
        crate::qcore::LocalUnitary::hadamard().mat(),
        &Mat2::identity(),
    );
    hadamard.mul(&cnot)
}

/// Runs the encoded state through the decoding optics.
pub fn decode_circuit(rho: &DensityMatrix) -> DensityMatrix {
    rho.conjugated_by(&decode_unitary())
        .expect("decoding circuit is unitary")
}

/// Click probabilities of the four detectors D_h0, D_h1, D_v0, D_v1: the
/// diagonal of the state in the fixed basis.
pub fn detector_probabilities(rho: &DensityMatrix) -> [f64; 4] {
    [
        rho.at(0, 0).re,
        rho.at(1, 1).re,
        rho.at(2, 2).re,
        rho.at(3, 3).re,
    ]
}

/// The circuit's message identification in the superdense regime: after
/// decoding an encoded Bell state, detector index `2*s + p` reveals the
/// message with the path bit carrying `b1` and the polarization bit `b2`.
/// The maximum-likelihood decoder reduces to this table whenever the
/// clicks are unambiguous (in particular at R = 1).
pub fn decoder_table() -> [BitPair; 4] {
    let mut table = [BitPair { b1: 0, b2: 0 }; 4];
    for (click, slot) in table.iter_mut().enumerate() {
        *slot = BitPair {
            b1: (click & 1) as u8,
            b2: (click >> 1) as u8,
        };
    }
    table
}

/// Bob's decoding strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Full decoding circuit plus detectors.
    Joint,
    /// Local projective measurements on each qubit, maximum-likelihood
    /// decoding of the outcome pair.
    Local {
        m_s: MeasurementDirection,
        m_p: MeasurementDirection,
    },
}

impl Strategy {
    /// The local strategy with both qubits read in the detector basis
    /// (no wave plates inserted): sigma_Z on polarization and path.
    pub fn local_detector_basis() -> Self {
        Strategy::Local {
            m_s: MeasurementDirection::z_axis(),
            m_p: MeasurementDirection::z_axis(),
        }
    }
}

/// One Monte Carlo run description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransactionConfig {
    /// Beam-splitter reflection coefficient of the prepared state.
    pub r: f64,
    pub dist: EncodingDistribution,
    pub shots: u64,
    pub seed: u64,
    pub strategy: Strategy,
}

/// Empirical statistics of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationStats {
    pub shots: u64,
    /// Fraction of shots with `k* = k`.
    pub success_rate: f64,
    /// Fraction of shots with correct `b1` and correct `b2`.
    pub per_bit_accuracy: (f64, f64),
    /// Plug-in mutual information between `K` and `K*` (bits).
    pub empirical_mutual_info: f64,
    /// `counts[k-1][k*-1]` tallies; rows sum to the drawn `k` counts.
    pub counts: [[u64; 4]; 4],
    /// Raw measurement-outcome tallies: detector clicks for the joint
    /// strategy, `(o_s, o_p)` sign pairs (index `2*o_s + o_p`, 0 = plus)
    /// for the local one.
    pub outcome_counts: [u64; 4],
}

impl EstimationStats {
    /// Raw outcome frequencies (clicks or sign pairs).
    pub fn outcome_frequencies(&self) -> [f64; 4] {
        let mut freq = [0.0; 4];
        for (f, &n) in freq.iter_mut().zip(&self.outcome_counts) {
            *f = n as f64 / self.shots as f64;
        }
        freq
    }
}

/// Cumulative distribution with the final bucket pinned at 1 so rounding
/// can never leave a draw unassigned.
fn cdf(p: &[f64; 4]) -> [f64; 4] {
    let total: f64 = p.iter().map(|&x| x.max(0.0)).sum();
    let mut acc = 0.0;
    let mut out = [0.0; 4];
    for i in 0..4 {
        acc += p[i].max(0.0) / total;
        out[i] = acc;
    }
    out[3] = 1.0;
    out
}

fn draw(cdf: &[f64; 4], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(3)
}

/// Per-message outcome distributions plus the outcome -> bits decoder.
struct ShotTables {
    k_cdf: [f64; 4],
    outcome_cdf: [[f64; 4]; 4],
    decoded: [BitPair; 4],
}

impl ShotTables {
    fn build(config: &TransactionConfig) -> Result<Self> {
        let rho = prepared_state(config.r)?;
        let members: Vec<DensityMatrix> = BitPair::ALL
            .iter()
            .map(|&b| encode_one(&rho, b))
            .collect();
        let priors = config.dist.probabilities();

        let outcomes: Vec<[f64; 4]> = match config.strategy {
            Strategy::Joint => members
                .iter()
                .map(|m| detector_probabilities(&decode_circuit(m)))
                .collect(),
            Strategy::Local { m_s, m_p } => {
                // Outcome index 2*o_s + o_p with 0 = Plus, 1 = Minus.
                let mut projectors = Vec::with_capacity(4);
                for o_s in Outcome::BOTH {
                    for o_p in Outcome::BOTH {
                        projectors.push(kron(&m_s.projector(o_s), &m_p.projector(o_p)));
                    }
                }
                members
                    .iter()
                    .map(|m| {
                        let mut p = [0.0; 4];
                        for (o, proj) in projectors.iter().enumerate() {
                            p[o] = proj.mul(m.mat()).trace().re.max(0.0);
                        }
                        p
                    })
                    .collect()
            }
        };

        // Maximum-likelihood decoding, ties toward the lowest k.
        let mut decoded = [BitPair { b1: 0, b2: 0 }; 4];
        for (o, slot) in decoded.iter_mut().enumerate() {
            let mut best_k = 0;
            let mut best = f64::NEG_INFINITY;
            for k in 0..4 {
                let likelihood = priors[k] * outcomes[k][o];
                if likelihood > best {
                    best = likelihood;
                    best_k = k;
                }
            }
            *slot = BitPair::ALL[best_k];
        }

        Ok(Self {
            k_cdf: cdf(&priors),
            outcome_cdf: [
                cdf(&outcomes[0]),
                cdf(&outcomes[1]),
                cdf(&outcomes[2]),
                cdf(&outcomes[3]),
            ],
            decoded,
        })
    }
}

/// Plug-in mutual information of the (k, k*) tallies, `0 log 0 := 0`,
/// no bias correction.
fn empirical_mutual_info(counts: &[[u64; 4]; 4], shots: u64) -> f64 {
    let n = shots as f64;
    let mut row = [0.0f64; 4];
    let mut col = [0.0f64; 4];
    for i in 0..4 {
        for j in 0..4 {
            row[i] += counts[i][j] as f64;
            col[j] += counts[i][j] as f64;
        }
    }
    let mut info = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let joint = counts[i][j] as f64 / n;
            if joint > 0.0 {
                info += joint * (joint * n * n / (row[i] * col[j])).log2();
            }
        }
    }
    info.clamp(0.0, 2.0)
}

/// Runs the configured number of transactions and tallies Bob's guesses.
/// Identical configurations produce bit-identical statistics; shot
/// batches use independent seeded streams and merge by summation.
pub fn run_transactions(config: &TransactionConfig) -> Result<EstimationStats> {
    if config.shots == 0 {
        return Err(Error::InvalidConfig {
            reason: "shots must be >= 1".into(),
        });
    }
    if !(0.0..=1.0).contains(&config.r) {
        return Err(Error::InvalidConfig {
            reason: format!("R = {} outside [0, 1]", config.r),
        });
    }
    let tables = ShotTables::build(config)?;

    let mut counts = [[0u64; 4]; 4];
    let mut outcome_counts = [0u64; 4];
    let batches = config.shots.div_ceil(SHOTS_PER_STREAM);
    for batch in 0..batches {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(batch);
        let in_batch = SHOTS_PER_STREAM.min(config.shots - batch * SHOTS_PER_STREAM);
        for _ in 0..in_batch {
            let k = draw(&tables.k_cdf, rng.random::<f64>());
            let outcome = draw(&tables.outcome_cdf[k], rng.random::<f64>());
            let guess = tables.decoded[outcome];
            counts[k][guess.k() - 1] += 1;
            outcome_counts[outcome] += 1;
        }
    }

    let n = config.shots as f64;
    let mut successes = 0u64;
    let mut b1_hits = 0u64;
    let mut b2_hits = 0u64;
    for (i, row) in counts.iter().enumerate() {
        let sent = BitPair::ALL[i];
        for (j, &c) in row.iter().enumerate() {
            let got = BitPair::ALL[j];
            if i == j {
                successes += c;
            }
            if sent.b1 == got.b1 {
                b1_hits += c;
            }
            if sent.b2 == got.b2 {
                b2_hits += c;
            }
        }
    }

    Ok(EstimationStats {
        shots: config.shots,
        success_rate: successes as f64 / n,
        per_bit_accuracy: (b1_hits as f64 / n, b2_hits as f64 / n),
        empirical_mutual_info: empirical_mutual_info(&counts, config.shots),
        counts,
        outcome_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{accessible_info, encode_ensemble, holevo};
    use crate::qcore::test_support::bell_psi_plus;
    use approx::assert_abs_diff_eq;

    #[test]
    fn decode_bell_state_to_basis_state() {
        let out = decode_circuit(&bell_psi_plus());
        assert_abs_diff_eq!(out.at(0, 0).re, 1.0, epsilon = 1e-12);
        for i in 1..4 {
            assert_abs_diff_eq!(out.at(i, i).re, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn decode_maximally_mixed_is_fixed() {
        let out = decode_circuit(&DensityMatrix::maximally_mixed());
        assert!(out.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-12);
    }

    #[test]
    fn decode_separates_all_four_encoded_bell_states() {
        // Each encoded Bell state lands on a distinct detector whose index
        // decodes back to the encoded bits via the fixed table.
        let bell = bell_psi_plus();
        let table = decoder_table();
        let mut seen = [false; 4];
        for bits in BitPair::ALL {
            let clicks = detector_probabilities(&decode_circuit(&encode_one(&bell, bits)));
            let on: Vec<usize> = (0..4).filter(|&i| clicks[i] > 0.5).collect();
            assert_eq!(on.len(), 1, "not a single detector for {bits:?}");
            assert_abs_diff_eq!(clicks[on[0]], 1.0, epsilon = 1e-12);
            assert_eq!(table[on[0]], bits);
            seen[on[0]] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn detector_probability_examples() {
        let clicks = detector_probabilities(&decode_circuit(&bell_psi_plus()));
        assert_abs_diff_eq!(clicks[0], 1.0, epsilon = 1e-12);
        let flat = detector_probabilities(&DensityMatrix::maximally_mixed());
        for p in flat {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
        // Golden value: the prepared state at R = 1/3 splits as
        // (1/3, 1/3, 0, 1/3) after the circuit.
        let clicks = detector_probabilities(&decode_circuit(&prepared_state(1.0 / 3.0).unwrap()));
        let third = 1.0 / 3.0;
        for (got, want) in clicks.iter().zip([third, third, 0.0, third]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        // Probabilities always sum to one.
        assert_abs_diff_eq!(clicks.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    fn joint_config(r: f64, shots: u64, seed: u64) -> TransactionConfig {
        TransactionConfig {
            r,
            dist: EncodingDistribution::uniform(),
            shots,
            seed,
            strategy: Strategy::Joint,
        }
    }

    #[test]
    fn superdense_limit_is_error_free() {
        let stats = run_transactions(&joint_config(1.0, 10_000, 7)).unwrap();
        assert_eq!(stats.success_rate, 1.0);
        assert_eq!(stats.per_bit_accuracy, (1.0, 1.0));
        // Error-free decoding pins I(K; K*) at the empirical entropy of
        // the drawn messages, which fluctuates just below 2 bits.
        assert!(stats.empirical_mutual_info > 1.99);
    }

    #[test]
    fn ml_decoding_reduces_to_the_click_table_at_full_reflection() {
        // At R = 1 (uniform priors) every message fires its own detector,
        // so decoded message frequencies equal the click frequencies under
        // the superdense identification.
        let stats = run_transactions(&joint_config(1.0, 20_000, 29)).unwrap();
        let table = decoder_table();
        for click in 0..4 {
            let k_star = table[click].k() - 1;
            let decoded: u64 = stats.counts.iter().map(|row| row[k_star]).sum();
            assert_eq!(decoded, stats.outcome_counts[click]);
        }
    }

    #[test]
    fn single_message_always_decodes() {
        for strategy in [Strategy::Joint, Strategy::local_detector_basis()] {
            let config = TransactionConfig {
                r: 0.4,
                dist: EncodingDistribution::single(BitPair::new(0, 0).unwrap()),
                shots: 2_000,
                seed: 3,
                strategy,
            };
            let stats = run_transactions(&config).unwrap();
            assert_eq!(stats.success_rate, 1.0);
        }
    }

    #[test]
    fn identical_seeds_reproduce_bit_exactly() {
        let config = joint_config(1.0 / 3.0, 50_000, 42);
        let a = run_transactions(&config).unwrap();
        let b = run_transactions(&config).unwrap();
        assert_eq!(a, b);
        let c = run_transactions(&joint_config(1.0 / 3.0, 50_000, 43)).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn confusion_matrix_rows_sum_to_shots() {
        let stats = run_transactions(&joint_config(0.6, 30_000, 5)).unwrap();
        let total: u64 = stats.counts.iter().flatten().sum();
        assert_eq!(total, 30_000);
    }

    #[test]
    fn click_frequencies_converge_to_detector_probabilities() {
        // Empirical click frequency within 4/sqrt(shots) = 0.013 per
        // outcome at 1e5 shots.
        let r = 1.0 / 3.0;
        let config = joint_config(r, 100_000, 11);
        let stats = run_transactions(&config).unwrap();
        let rho = prepared_state(r).unwrap();
        let averaged = decode_circuit(&encode_ensemble(&rho, &config.dist));
        let theory = detector_probabilities(&averaged);
        let freq = stats.outcome_frequencies();
        for click in 0..4 {
            assert!(
                (freq[click] - theory[click]).abs() < 0.013,
                "click {click}: {} vs {}",
                freq[click],
                theory[click]
            );
        }
    }

    #[test]
    fn joint_information_respects_the_holevo_ceiling() {
        for r in [0.2, 1.0 / 3.0, 0.7, 1.0] {
            let config = joint_config(r, 100_000, 13);
            let stats = run_transactions(&config).unwrap();
            let iq = holevo(&prepared_state(r).unwrap(), &config.dist);
            assert!(
                stats.empirical_mutual_info <= iq + 0.02,
                "R={r}: {} > {}",
                stats.empirical_mutual_info,
                iq
            );
        }
    }

    #[test]
    fn local_information_respects_the_accessible_ceiling() {
        for r in [1.0 / 3.0, 0.6, 1.0] {
            let config = TransactionConfig {
                strategy: Strategy::local_detector_basis(),
                ..joint_config(r, 100_000, 17)
            };
            let stats = run_transactions(&config).unwrap();
            let (ic, _) = accessible_info(&prepared_state(r).unwrap(), &config.dist);
            assert!(
                stats.empirical_mutual_info <= ic + 0.02,
                "R={r}: {} > {}",
                stats.empirical_mutual_info,
                ic
            );
        }
    }

    #[test]
    fn local_strategy_cannot_see_the_phase_bit() {
        // With uniform priors the detector-basis outcomes carry nothing
        // about b2, so its accuracy is a coin flip (within 3 sigma).
        let sigma3 = 3.0 * (0.25f64 / 100_000.0).sqrt();
        for r in [0.3, 0.65, 1.0] {
            let config = TransactionConfig {
                strategy: Strategy::local_detector_basis(),
                ..joint_config(r, 100_000, 19)
            };
            let stats = run_transactions(&config).unwrap();
            assert!(
                (stats.per_bit_accuracy.1 - 0.5).abs() <= sigma3,
                "R={r}: b2 accuracy {}",
                stats.per_bit_accuracy.1
            );
        }
    }

    #[test]
    fn joint_beats_local_on_the_path_bit() {
        // Three-sigma band for the difference of two binomial rates.
        let sigma3 = 3.0 * (2.0 * 0.25f64 / 100_000.0).sqrt();
        for r in [0.3, 0.7, 1.0] {
            let joint = run_transactions(&joint_config(r, 100_000, 23)).unwrap();
            let local = run_transactions(&TransactionConfig {
                strategy: Strategy::local_detector_basis(),
                ..joint_config(r, 100_000, 23)
            })
            .unwrap();
            assert!(
                joint.per_bit_accuracy.0 >= local.per_bit_accuracy.0 - sigma3,
                "R={r}: joint b1 {} < local b1 {}",
                joint.per_bit_accuracy.0,
                local.per_bit_accuracy.0
            );
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = joint_config(0.5, 0, 1);
        assert!(matches!(
            run_transactions(&config),
            Err(Error::InvalidConfig { .. })
        ));
        config.shots = 10;
        config.r = 1.5;
        assert!(matches!(
            run_transactions(&config),
            Err(Error::InvalidConfig { .. })
        ));
    }
}
