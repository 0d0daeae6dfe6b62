//! The two-bit Pauli encoding protocol and its information budget.
//!
//! Per transaction Alice draws `k = (b1, b2)` from a distribution `p_k`
//! and applies `U_k = sigma_X^b1 sigma_Z^b2` to the polarization qubit of
//! a shared symmetric X-state. Bob receives the ensemble average
//! `rho~ = sum_k p_k (U_k x 1) rho (U_k x 1)†`.
//!
//! - [`holevo`]: `I_q = S(rho~) - S(rho)`, the ceiling on what any
//!   decoding can learn about `k` (every member state shares the spectrum
//!   of `rho`, which collapses the general Holevo expression to this
//!   difference; [`holevo_ensemble_form`] keeps the general expression as
//!   a cross-check).
//! - [`accessible_info`]: `I_c`, the best a fixed projective measurement
//!   of one qubit plus classical processing of the other can do.
//! - [`advantage`]: `dI = I_q - I_c`, with the discord-consumption
//!   sandwich `dD - J(rho~) <= dI <= dD` evaluated as slack fields.

use crate::correlations::{
    avg_conditional_entropy, classical_information_closed, discord_closed, Branch, GridSpec,
};
use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, LocalUnitary, MeasurementDirection};
use crate::xstate::{canonicalize, XStateParams};
use serde::Serialize;

/// One two-bit message, ordered `k = 1..4` as (0,0), (0,1), (1,0), (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BitPair {
    pub b1: u8,
    pub b2: u8,
}

impl BitPair {
    pub fn new(b1: u8, b2: u8) -> Result<Self> {
        if b1 > 1 || b2 > 1 {
            return Err(Error::InvalidParams {
                reason: format!("bits must be 0 or 1, got ({b1}, {b2})"),
            });
        }
        Ok(Self { b1, b2 })
    }

    pub const ALL: [BitPair; 4] = [
        BitPair { b1: 0, b2: 0 },
        BitPair { b1: 0, b2: 1 },
        BitPair { b1: 1, b2: 0 },
        BitPair { b1: 1, b2: 1 },
    ];

    /// Message index `k` in 1..=4.
    pub fn k(&self) -> usize {
        1 + (2 * self.b1 + self.b2) as usize
    }

    /// Inverse of [`BitPair::k`].
    pub fn from_k(k: usize) -> Result<Self> {
        if !(1..=4).contains(&k) {
            return Err(Error::InvalidParams {
                reason: format!("message index k = {k} outside 1..=4"),
            });
        }
        Ok(Self::ALL[k - 1])
    }
}

/// Alice's distribution over the four messages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodingDistribution {
    p: [f64; 4],
}

impl EncodingDistribution {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        for (i, &v) in p.iter().enumerate() {
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::InvalidParams {
                    reason: format!("p{} = {v} outside [0, 1]", i + 1),
                });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams {
                reason: format!("probabilities sum to {sum}, not 1"),
            });
        }
        let mut p = p;
        for v in p.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self { p })
    }

    pub fn uniform() -> Self {
        Self { p: [0.25; 4] }
    }

    /// All probability on one message.
    pub fn single(bits: BitPair) -> Self {
        let mut p = [0.0; 4];
        p[bits.k() - 1] = 1.0;
        Self { p }
    }

    /// The one-parameter family `p1 = p2`, `p3 = p4 = (1 - 2 p1)/2` with
    /// `p1` in [0, 1/2]. It consumes all discord while leaving classical
    /// correlation behind.
    pub fn quasi_optimal(p1: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p1) {
            return Err(Error::OutOfRange {
                name: "p1",
                value: p1,
                min: 0.0,
                max: 0.5,
            });
        }
        let rest = 0.5 - p1;
        Self::new([p1, p1, rest, rest])
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    /// Probability of message `k` (1..=4).
    pub fn p(&self, k: usize) -> f64 {
        self.p[k - 1]
    }
}

/// The encoding unitary `U_k = sigma_X^b1 sigma_Z^b2`:
/// identity, sigma_Z, sigma_X, sigma_X sigma_Z for k = 1..4.
pub fn pauli_unitary(bits: BitPair) -> LocalUnitary {
    let u = LocalUnitary::identity();
    let u = if bits.b2 == 1 {
        LocalUnitary::pauli_z().then_after(&u)
    } else {
        u
    };
    if bits.b1 == 1 {
        LocalUnitary::pauli_x().then_after(&u)
    } else {
        u
    }
}

/// One encoded member state `(U_k x 1) rho (U_k x 1)†`.
pub fn encode_one(rho: &DensityMatrix, bits: BitPair) -> DensityMatrix {
    rho.apply_local(&pauli_unitary(bits), &LocalUnitary::identity())
}

/// The ensemble average Bob receives, `rho~ = sum_k p_k rho_k`.
pub fn encode_ensemble(rho: &DensityMatrix, dist: &EncodingDistribution) -> DensityMatrix {
    let mut sum = crate::qcore::Mat4::zeros();
    for bits in BitPair::ALL {
        let p = dist.p(bits.k());
        if p == 0.0 {
            continue;
        }
        sum = sum.add(&encode_one(rho, bits).mat().scale(p));
    }
    DensityMatrix::from_mat(sum).expect("convex mixture of encoded states is a state")
}

/// Holevo information of the encoding ensemble, `I_q = S(rho~) - S(rho)`,
/// in bits.
pub fn holevo(rho: &DensityMatrix, dist: &EncodingDistribution) -> f64 {
    (encode_ensemble(rho, dist).entropy() - rho.entropy()).clamp(0.0, 2.0)
}

/// The general ensemble form `S(rho~) - sum_k p_k S(rho_k)`. Coincides
/// with [`holevo`] here because unitary encoding preserves the spectrum;
/// kept as a guard on that reduction.
pub fn holevo_ensemble_form(rho: &DensityMatrix, dist: &EncodingDistribution) -> f64 {
    let avg: f64 = BitPair::ALL
        .iter()
        .map(|&b| dist.p(b.k()) * encode_one(rho, b).entropy())
        .sum();
    (encode_ensemble(rho, dist).entropy() - avg).clamp(0.0, 2.0)
}

/// How hard [`accessible_info`] searches for the best measurement axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementSearch {
    /// Evaluate only the three Pauli axes (exact on this family; the full
    /// search validates that).
    Axes,
    /// Axes plus a dense grid with golden-section refinement.
    Full(GridSpec),
}

impl Default for MeasurementSearch {
    fn default() -> Self {
        MeasurementSearch::Full(GridSpec::coarse())
    }
}

struct EncodingEnsemble {
    average: DensityMatrix,
    members: Vec<(f64, DensityMatrix)>,
}

impl EncodingEnsemble {
    fn build(rho: &DensityMatrix, dist: &EncodingDistribution) -> Self {
        let members: Vec<(f64, DensityMatrix)> = BitPair::ALL
            .iter()
            .filter(|b| dist.p(b.k()) > 0.0)
            .map(|&b| (dist.p(b.k()), encode_one(rho, b)))
            .collect();
        Self {
            average: encode_ensemble(rho, dist),
            members,
        }
    }

    fn swapped(&self) -> Self {
        Self {
            average: self.average.swap_qubits(),
            members: self
                .members
                .iter()
                .map(|(p, m)| (*p, m.swap_qubits()))
                .collect(),
        }
    }

    /// The information extracted about `k` by measuring the polarization
    /// qubit along `direction` and keeping the conditional path states:
    /// average conditional entropy of the mixture minus the mean of the
    /// members' average conditional entropies.
    fn extracted_info(&self, direction: &MeasurementDirection) -> f64 {
        let mixture = avg_conditional_entropy(&self.average, direction);
        let members: f64 = self
            .members
            .iter()
            .map(|(p, m)| p * avg_conditional_entropy(m, direction))
            .sum();
        mixture - members
    }

    fn maximize(&self, search: MeasurementSearch) -> (f64, MeasurementDirection) {
        let axes = [
            MeasurementDirection::z_axis(),
            MeasurementDirection::x_axis(),
            MeasurementDirection::y_axis(),
        ];
        let mut best_dir = axes[0];
        let mut best = f64::NEG_INFINITY;
        for axis in axes {
            let value = self.extracted_info(&axis);
            if value > best {
                best = value;
                best_dir = axis;
            }
        }
        if let MeasurementSearch::Full(grid) = search {
            let (dir, neg) = crate::correlations::minimize_over_directions(&grid, |theta, phi| {
                let dir = MeasurementDirection::new(
                    theta.clamp(0.0, std::f64::consts::PI),
                    phi.rem_euclid(std::f64::consts::TAU),
                )
                .expect("normalized angles");
                -self.extracted_info(&dir)
            });
            if -neg > best {
                best = -neg;
                best_dir = dir;
            }
        }
        (best.max(0.0), best_dir)
    }

    /// Which axis wins the restriction to sigma_Z vs sigma_X.
    fn axis_branch(&self) -> Branch {
        let fz = self.extracted_info(&MeasurementDirection::z_axis());
        let fx = self.extracted_info(&MeasurementDirection::x_axis());
        if (fz - fx).abs() <= 1e-12 {
            Branch::Degenerate
        } else if fz > fx {
            Branch::Z
        } else {
            Branch::X
        }
    }
}

/// Locally accessible information `I_c` (bits) and the measurement
/// direction attaining it, using the default full search.
pub fn accessible_info(
    rho: &DensityMatrix,
    dist: &EncodingDistribution,
) -> (f64, MeasurementDirection) {
    accessible_info_with(rho, dist, MeasurementSearch::default())
}

/// [`accessible_info`] with an explicit search strategy.
pub fn accessible_info_with(
    rho: &DensityMatrix,
    dist: &EncodingDistribution,
    search: MeasurementSearch,
) -> (f64, MeasurementDirection) {
    EncodingEnsemble::build(rho, dist).maximize(search)
}

/// `I_c` when Bob measures the path qubit instead and processes the
/// polarization qubit classically. Equal to [`accessible_info`] on
/// symmetric X-states.
pub fn accessible_info_measuring_path(
    rho: &DensityMatrix,
    dist: &EncodingDistribution,
    search: MeasurementSearch,
) -> (f64, MeasurementDirection) {
    EncodingEnsemble::build(rho, dist).swapped().maximize(search)
}

/// Information budget of one encoding run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageReport {
    /// Holevo information `I_q` (bits).
    pub i_q: f64,
    /// Locally accessible information `I_c` (bits).
    pub i_c: f64,
    /// Quantum advantage `dI = I_q - I_c` (bits).
    pub delta_i: f64,
    /// Discord before encoding (bits).
    pub d_before: f64,
    /// Discord of the averaged post-encoding state (bits).
    pub d_after: f64,
    /// Discord consumption `dD = D_before - D_after` (bits).
    pub delta_d: f64,
    /// Classical mutual information left in `rho~` (bits).
    pub j_after: f64,
    /// `dI - (dD - J(rho~))`; non-negative when the lower consumption
    /// bound holds.
    pub lower_slack: f64,
    /// `dD - dI`; non-negative when the upper consumption bound holds.
    pub upper_slack: f64,
    /// The measurement attaining `I_c`.
    pub optimal_local_measurement: MeasurementDirection,
    /// Whether sigma_Z or sigma_X wins the axis restriction for `I_c`.
    pub ic_branch: Branch,
}

/// Full advantage analysis of encoding `dist` on the symmetric X-state
/// `rho` (the closed discord forms require the family, so other inputs
/// are rejected). Uses the default measurement search.
pub fn advantage(rho: &DensityMatrix, dist: &EncodingDistribution) -> Result<AdvantageReport> {
    advantage_with(rho, dist, MeasurementSearch::default())
}

/// [`advantage`] with an explicit measurement-search strategy.
pub fn advantage_with(
    rho: &DensityMatrix,
    dist: &EncodingDistribution,
    search: MeasurementSearch,
) -> Result<AdvantageReport> {
    let before = canonicalize(rho)?;
    let ensemble = EncodingEnsemble::build(rho, dist);
    let after = canonicalize(&ensemble.average)?;

    let i_q = (ensemble.average.entropy() - rho.entropy()).clamp(0.0, 2.0);
    let (i_c, optimal_local_measurement) = ensemble.maximize(search);
    let delta_i = i_q - i_c;

    let (d_before, _) = discord_closed(&before);
    let (d_after, _) = discord_closed(&after);
    let delta_d = d_before - d_after;
    let j_after = classical_information_closed(&after);

    Ok(AdvantageReport {
        i_q,
        i_c,
        delta_i,
        d_before,
        d_after,
        delta_d,
        j_after,
        lower_slack: delta_i - (delta_d - j_after),
        upper_slack: delta_d - delta_i,
        optimal_local_measurement,
        ic_branch: ensemble.axis_branch(),
    })
}

/// Whether an encoding is optimal in the consumption sense: it drives the
/// average state to one with no mutual information left. Checked directly
/// as `I(rho~) <= tol` rather than by any parameter pattern.
pub fn is_optimal_encoding(rho: &DensityMatrix, dist: &EncodingDistribution, tol: f64) -> bool {
    crate::correlations::mutual_information(&encode_ensemble(rho, dist)) <= tol
}

/// Closed-form post-encoding correlations of the prepared-state family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostEncodingCorrelations {
    pub concurrence: f64,
    pub discord: f64,
    /// Branch criterion `u = 2(w~ + z~) = (2(p1 + p3) - 1) R`.
    pub u: f64,
    /// Branch criterion `v = |4a~ - 1| = |(p1 + p2 - p3 - p4)(1 - 2R)|`.
    pub v: f64,
}

/// Concurrence and discord of the averaged state after encoding `dist` on
/// the prepared state at reflection `r`, from the closed forms of the
/// family. Requires the positive-coherence ordering `p1 >= p2`,
/// `p3 >= p4`.
pub fn post_encoding_correlations(
    dist: &EncodingDistribution,
    r: f64,
) -> Result<PostEncodingCorrelations> {
    let [p1, p2, p3, p4] = dist.probabilities();
    if p1 < p2 - 1e-12 || p3 < p4 - 1e-12 {
        return Err(Error::ConventionViolated { p1, p2, p3, p4 });
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParams {
            reason: format!("R = {r} outside [0, 1]"),
        });
    }
    let t = 1.0 - r;
    let concurrence = 0f64
        .max((2.0 * p1 - 1.0) * r - (p1 + p2) * t)
        .max((2.0 * p3 - 1.0) * r - (p3 + p4) * t);

    let params = XStateParams::new(
        0.5 * ((p1 + p2) * r + (p3 + p4) * t),
        0.5 * (p1 - p2) * r,
        0.5 * (p3 - p4) * r,
    )?;
    let (discord, diag) = discord_closed(&params);
    Ok(PostEncodingCorrelations {
        concurrence,
        discord,
        u: diag.u,
        v: diag.v,
    })
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::Rng;

    /// Random point of the probability simplex (normalized exponentials).
    pub fn random_distribution(rng: &mut impl Rng) -> EncodingDistribution {
        let mut p = [0.0f64; 4];
        let mut total = 0.0;
        for v in p.iter_mut() {
            *v = -rng.random_range(0.0f64..1.0).max(1e-12).ln();
            total += *v;
        }
        for v in p.iter_mut() {
            *v /= total;
        }
        // Absorb the rounding drift into the last slot.
        p[3] = 1.0 - p[0] - p[1] - p[2];
        EncodingDistribution::new(p).unwrap()
    }

    /// Random distribution obeying the positive-coherence ordering.
    pub fn random_ordered_distribution(rng: &mut impl Rng) -> EncodingDistribution {
        let mut p = random_distribution(rng).probabilities();
        if p[0] < p[1] {
            p.swap(0, 1);
        }
        if p[2] < p[3] {
            p.swap(2, 3);
        }
        EncodingDistribution::new(p).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::correlations::{correlation_report, mutual_information};
    use crate::qcore::test_support::bell_psi_plus;
    use crate::qcore::C64;
    use crate::xstate::prepared_state;
    use crate::xstate::test_support::random_canonical;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 3 (2 - log2 3) / 4, the one-Pauli advantage ceiling.
    const ONE_PAULI_MAX: f64 = 0.3112781244591329;

    #[test]
    fn bit_pair_ordering() {
        assert_eq!(BitPair::new(0, 0).unwrap().k(), 1);
        assert_eq!(BitPair::new(0, 1).unwrap().k(), 2);
        assert_eq!(BitPair::new(1, 0).unwrap().k(), 3);
        assert_eq!(BitPair::new(1, 1).unwrap().k(), 4);
        for k in 1..=4 {
            assert_eq!(BitPair::from_k(k).unwrap().k(), k);
        }
        assert!(BitPair::new(2, 0).is_err());
        assert!(BitPair::from_k(5).is_err());
    }

    #[test]
    fn pauli_unitary_table() {
        let eye = pauli_unitary(BitPair::new(0, 0).unwrap());
        assert!(eye.mat().max_abs_diff(LocalUnitary::identity().mat()) < 1e-15);
        let z = pauli_unitary(BitPair::new(0, 1).unwrap());
        assert!(z.mat().max_abs_diff(LocalUnitary::pauli_z().mat()) < 1e-15);
        let x = pauli_unitary(BitPair::new(1, 0).unwrap());
        assert!(x.mat().max_abs_diff(LocalUnitary::pauli_x().mat()) < 1e-15);
        // sigma_X sigma_Z = [[0, -1], [1, 0]].
        let xz = pauli_unitary(BitPair::new(1, 1).unwrap());
        assert_abs_diff_eq!(xz.mat().at(0, 1).re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xz.mat().at(1, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xz.mat().at(0, 0).norm(), 0.0, epsilon = 1e-15);
    }

    /// The post-encoding matrix of the prepared state in closed form:
    /// diagonal (1 -+ s1 (T - R))/4, corners s2 (1 + s1) R / 4, inner
    /// coherences s2 (1 - s1) R / 4 with s_i = (-1)^b_i.
    fn encoded_prepared(r: f64, bits: BitPair) -> [[f64; 4]; 4] {
        let t = 1.0 - r;
        let s1 = if bits.b1 == 0 { 1.0 } else { -1.0 };
        let s2 = if bits.b2 == 0 { 1.0 } else { -1.0 };
        let d_outer = (1.0 - s1 * (t - r)) / 4.0;
        let d_inner = (1.0 + s1 * (t - r)) / 4.0;
        let corner = s2 * (1.0 + s1) * r / 4.0;
        let inner = s2 * (1.0 - s1) * r / 4.0;
        [
            [d_outer, 0.0, 0.0, corner],
            [0.0, d_inner, inner, 0.0],
            [0.0, inner, d_inner, 0.0],
            [corner, 0.0, 0.0, d_outer],
        ]
    }

    #[test]
    fn encode_one_matches_closed_form_entrywise() {
        for r in [0.0, 0.3, 0.5, 0.77, 1.0] {
            let rho = prepared_state(r).unwrap();
            for bits in BitPair::ALL {
                let got = encode_one(&rho, bits);
                let want = encoded_prepared(r, bits);
                for i in 0..4 {
                    for j in 0..4 {
                        assert!(
                            (got.at(i, j) - C64::new(want[i][j], 0.0)).norm() < 1e-12,
                            "entry ({i},{j}) for R={r}, bits={bits:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn encode_one_examples() {
        let rho = prepared_state(0.6).unwrap();
        // Identity encoding.
        assert!(encode_one(&rho, BitPair::new(0, 0).unwrap()).max_abs_diff(&rho) < 1e-15);
        // sigma_Z flips the corner sign, diagonal untouched.
        let z = encode_one(&rho, BitPair::new(0, 1).unwrap());
        assert_abs_diff_eq!(z.at(0, 3).re, -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(z.at(0, 0).re, 0.3, epsilon = 1e-15);
        // sigma_X swaps the diagonal blocks and moves the coherence inward.
        let x = encode_one(&rho, BitPair::new(1, 0).unwrap());
        assert_abs_diff_eq!(x.at(0, 0).re, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(x.at(1, 1).re, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(x.at(1, 2).re, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(x.at(0, 3).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_ensemble_is_maximally_mixed() {
        for r in [0.0, 0.25, 2.0 / 3.0, 1.0] {
            let avg =
                encode_ensemble(&prepared_state(r).unwrap(), &EncodingDistribution::uniform());
            assert!(avg.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-12);
        }
    }

    #[test]
    fn single_message_ensemble_is_the_input() {
        let rho = prepared_state(0.4).unwrap();
        let d = EncodingDistribution::single(BitPair::new(0, 0).unwrap());
        assert!(encode_ensemble(&rho, &d).max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn one_pauli_ensemble_at_half_reflection_is_maximally_mixed() {
        let d = EncodingDistribution::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        let avg = encode_ensemble(&prepared_state(0.5).unwrap(), &d);
        assert!(avg.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-12);
    }

    #[test]
    fn ensemble_matches_averaged_state_formula() {
        // rho~ has diagonal ((p1+p2)R + (p3+p4)T, ...)/2 and coherences
        // (p1-p2)R/2, (p3-p4)R/2.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let t = 1.0 - r;
            let d = random_distribution(&mut rng);
            let [p1, p2, p3, p4] = d.probabilities();
            let avg = encode_ensemble(&prepared_state(r).unwrap(), &d);
            let outer = 0.5 * ((p1 + p2) * r + (p3 + p4) * t);
            let inner = 0.5 * ((p1 + p2) * t + (p3 + p4) * r);
            assert_abs_diff_eq!(avg.at(0, 0).re, outer, epsilon = 1e-12);
            assert_abs_diff_eq!(avg.at(1, 1).re, inner, epsilon = 1e-12);
            assert_abs_diff_eq!(avg.at(3, 0).re, 0.5 * (p1 - p2) * r, epsilon = 1e-12);
            assert_abs_diff_eq!(avg.at(2, 1).re, 0.5 * (p3 - p4) * r, epsilon = 1e-12);
        }
    }

    #[test]
    fn ensemble_preserves_symmetric_x_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let rho = random_canonical(&mut rng).assemble();
            let d = random_distribution(&mut rng);
            // canonicalize re-checks X shape and the symmetric diagonal;
            // the DensityMatrix constructor enforced trace/PSD already.
            assert!(canonicalize(&encode_ensemble(&rho, &d)).is_ok());
        }
    }

    #[test]
    fn holevo_examples() {
        assert_abs_diff_eq!(
            holevo(&bell_psi_plus(), &EncodingDistribution::uniform()),
            2.0,
            epsilon = 1e-12
        );
        let single = EncodingDistribution::single(BitPair::new(0, 0).unwrap());
        assert_abs_diff_eq!(
            holevo(&prepared_state(0.7).unwrap(), &single),
            0.0,
            epsilon = 1e-12
        );
        let one_pauli = EncodingDistribution::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            holevo(&prepared_state(0.5).unwrap(), &one_pauli),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn holevo_forms_coincide() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let rho = random_canonical(&mut rng).assemble();
            let d = random_distribution(&mut rng);
            assert_abs_diff_eq!(
                holevo(&rho, &d),
                holevo_ensemble_form(&rho, &d),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn accessible_info_of_single_message_is_zero() {
        let d = EncodingDistribution::single(BitPair::new(1, 0).unwrap());
        let (ic, _) = accessible_info(&prepared_state(0.8).unwrap(), &d);
        assert_abs_diff_eq!(ic, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn accessible_info_on_maximally_mixed_input_is_zero() {
        let (ic, _) = accessible_info(
            &DensityMatrix::maximally_mixed(),
            &EncodingDistribution::uniform(),
        );
        assert_abs_diff_eq!(ic, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn accessible_info_one_pauli_at_half_reflection() {
        let d = EncodingDistribution::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        let (ic, dir) = accessible_info(&prepared_state(0.5).unwrap(), &d);
        assert_abs_diff_eq!(ic, 0.5 - ONE_PAULI_MAX, epsilon = 1e-9);
        // The x axis is the optimal measurement here.
        assert!(dir.bloch()[2].abs() < 1e-6);
    }

    #[test]
    fn advantage_examples() {
        let uniform = EncodingDistribution::uniform();
        let r1 = advantage(&prepared_state(1.0).unwrap(), &uniform).unwrap();
        assert_abs_diff_eq!(r1.delta_i, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r1.i_q, 2.0, epsilon = 1e-9);

        let r13 = advantage(&prepared_state(1.0 / 3.0).unwrap(), &uniform).unwrap();
        assert_abs_diff_eq!(r13.delta_i, 1.0 / 3.0, epsilon = 1e-9);

        let one_pauli = EncodingDistribution::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        let rc = advantage(&prepared_state(0.5).unwrap(), &one_pauli).unwrap();
        assert_abs_diff_eq!(rc.delta_i, ONE_PAULI_MAX, epsilon = 1e-9);
    }

    #[test]
    fn uniform_encoding_identities() {
        // dI = D, I_q = I, I_c = J, and the average is maximally mixed.
        let uniform = EncodingDistribution::uniform();
        for i in 0..=10 {
            let r = i as f64 / 10.0;
            let rho = prepared_state(r).unwrap();
            let rep = correlation_report(&rho).unwrap();
            let adv = advantage(&rho, &uniform).unwrap();
            assert_abs_diff_eq!(adv.delta_i, rep.discord, epsilon = 1e-9);
            assert_abs_diff_eq!(adv.i_q, rep.mutual_information, epsilon = 1e-9);
            assert_abs_diff_eq!(adv.i_c, rep.classical_information, epsilon = 1e-9);
            assert!(
                encode_ensemble(&rho, &uniform).max_abs_diff(&DensityMatrix::maximally_mixed())
                    < 1e-12
            );
        }
    }

    #[test]
    fn consumption_bounds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let d = random_distribution(&mut rng);
            let adv = advantage(&prepared_state(r).unwrap(), &d).unwrap();
            assert!(adv.lower_slack >= -1e-9, "lower bound violated: {adv:?}");
            assert!(adv.upper_slack >= -1e-9, "upper bound violated: {adv:?}");
            assert!(adv.i_c >= -1e-9 && adv.i_c <= adv.i_q + 1e-9 && adv.i_q <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn quasi_optimal_consumes_all_discord() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..50 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let p1: f64 = rng.random_range(0.0..=0.5);
            let d = EncodingDistribution::quasi_optimal(p1).unwrap();
            let rho = prepared_state(r).unwrap();
            let adv = advantage(&rho, &d).unwrap();
            assert_abs_diff_eq!(adv.d_after, 0.0, epsilon = 1e-9);
            // I(rho~) = J(rho~): all remaining correlation is classical.
            let avg = encode_ensemble(&rho, &d);
            assert_abs_diff_eq!(mutual_information(&avg), adv.j_after, epsilon = 1e-9);
        }
    }

    #[test]
    fn accessible_info_is_symmetric_under_measured_qubit_exchange() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for _ in 0..15 {
            let rho = random_canonical(&mut rng).assemble();
            let d = random_distribution(&mut rng);
            let (on_s, _) = accessible_info_with(&rho, &d, MeasurementSearch::default());
            let (on_p, _) = accessible_info_measuring_path(&rho, &d, MeasurementSearch::default());
            assert_abs_diff_eq!(on_s, on_p, epsilon = 1e-9);
        }
    }

    #[test]
    fn axis_candidates_match_the_full_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let rho = random_canonical(&mut rng).assemble();
            let d = random_distribution(&mut rng);
            let (axes, _) = accessible_info_with(&rho, &d, MeasurementSearch::Axes);
            let (full, _) = accessible_info_with(&rho, &d, MeasurementSearch::default());
            assert!(
                (full - axes).abs() <= 1e-6,
                "grid departs from axes: axes={axes}, full={full}"
            );
        }
    }

    #[test]
    fn post_encoding_uniform_is_uncorrelated() {
        let out = post_encoding_correlations(&EncodingDistribution::uniform(), 0.8).unwrap();
        assert_abs_diff_eq!(out.concurrence, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.discord, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn post_encoding_quasi_optimal_has_no_discord() {
        for p1 in [0.0, 0.2, 0.35, 0.5] {
            let d = EncodingDistribution::quasi_optimal(p1).unwrap();
            for r in [0.1, 0.5, 0.9] {
                let out = post_encoding_correlations(&d, r).unwrap();
                assert_abs_diff_eq!(out.discord, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(out.u, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn post_encoding_single_message_recovers_pre_encoding_values() {
        let d = EncodingDistribution::single(BitPair::new(0, 0).unwrap());
        for r in [0.0, 0.3, 0.5, 0.77, 1.0] {
            let out = post_encoding_correlations(&d, r).unwrap();
            let pre = correlation_report(&prepared_state(r).unwrap()).unwrap();
            assert_abs_diff_eq!(out.u, pre.diagnostics.u, epsilon = 1e-12);
            assert_abs_diff_eq!(out.v, pre.diagnostics.v, epsilon = 1e-12);
            assert_abs_diff_eq!(out.discord, pre.discord, epsilon = 1e-12);
            assert_abs_diff_eq!(out.concurrence, pre.concurrence, epsilon = 1e-12);
            // u = R on this family.
            assert_abs_diff_eq!(out.u, r, epsilon = 1e-15);
        }
    }

    #[test]
    fn post_encoding_closed_form_matches_the_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for _ in 0..50 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let d = random_ordered_distribution(&mut rng);
            let closed = post_encoding_correlations(&d, r).unwrap();
            let report =
                correlation_report(&encode_ensemble(&prepared_state(r).unwrap(), &d)).unwrap();
            assert_abs_diff_eq!(closed.discord, report.discord, epsilon = 1e-9);
            assert_abs_diff_eq!(closed.concurrence, report.concurrence, epsilon = 1e-9);
            assert_abs_diff_eq!(closed.u, report.diagnostics.u, epsilon = 1e-9);
            assert_abs_diff_eq!(closed.v, report.diagnostics.v, epsilon = 1e-9);
        }
    }

    #[test]
    fn post_encoding_rejects_misordered_distributions() {
        let d = EncodingDistribution::new([0.1, 0.4, 0.3, 0.2]).unwrap();
        assert!(matches!(
            post_encoding_correlations(&d, 0.5),
            Err(Error::ConventionViolated { .. })
        ));
    }

    #[test]
    fn optimal_encoding_is_detected_directly() {
        // Uniform encoding wipes out all mutual information at every R.
        assert!(is_optimal_encoding(
            &prepared_state(0.7).unwrap(),
            &EncodingDistribution::uniform(),
            1e-9
        ));
        // At R = T, a lopsided distribution still leaves the corner
        // coherence (p1 - p2) R / 2 behind, so it is NOT optimal even
        // though the diagonal is flat.
        let lopsided = EncodingDistribution::new([0.5, 0.0, 0.25, 0.25]).unwrap();
        assert!(!is_optimal_encoding(
            &prepared_state(0.5).unwrap(),
            &lopsided,
            1e-9
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(EncodingDistribution::new([0.5, 0.5, 0.1, -0.1]).is_err());
        assert!(EncodingDistribution::new([0.3, 0.3, 0.3, 0.3]).is_err());
        assert!(EncodingDistribution::quasi_optimal(0.6).is_err());
        let q = EncodingDistribution::quasi_optimal(0.1).unwrap();
        assert_eq!(q.probabilities(), [0.1, 0.1, 0.4, 0.4]);
    }
}
