//! Fixed-size complex matrix algebra and entropy primitives for the
//! two-qubit (4x4) and one-qubit (2x2) Hermitian operators used everywhere
//! else in the crate.
//!
//! The two qubits are the photon polarization (labelled `s`) and the
//! interferometer path (labelled `p`). The basis order is fixed as
//! {|h0>, |h1>, |v0>, |v1>} with polarization as the first tensor factor,
//! so the flat index of |s,p> is `2*s + p`.
//!
//! Everything here is a pure function of its inputs; all types are plain
//! `Copy` values and safe to share between threads.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

pub type C64 = Complex64;

/// Tolerance for Hermiticity and unit-trace checks.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues above this (negative) floor count as non-negative.
pub const PSD_TOL: f64 = -1e-10;
/// Jacobi sweep convergence threshold on the off-diagonal Frobenius norm.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex square matrix of compile-time dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<const N: usize> {
    pub(crate) e: [[C64; N]; N],
}

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        Self {
            e: [[C64::ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.e[i][i] = C64::ONE;
        }
        m
    }

    pub fn from_rows(e: [[C64; N]; N]) -> Self {
        Self { e }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.e[i][j]
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.e[i][i]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for v in row.iter_mut() {
                *v = v.conj();
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= k;
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.e[i][k];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..N {
                    m.e[i][j] += a * rhs.e[k][j];
                }
            }
        }
        m
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.e[i][j] - rhs.e[i][j]).norm());
            }
        }
        d
    }

    /// Largest deviation from Hermitian symmetry, `max |m[i][j] - conj(m[j][i])|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..N {
            for j in i..N {
                d = d.max((self.e[i][j] - self.e[j][i].conj()).norm());
            }
        }
        d
    }

    fn check_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitian { deviation: dev });
        }
        Ok(())
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += self.e[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Cyclic Jacobi diagonalization of a Hermitian matrix.
    ///
    /// Returns eigenvalues sorted descending and, in the columns of the
    /// second value, the matching orthonormal eigenvectors. Each rotation
    /// first removes the phase of the pivot entry and then applies the
    /// classic 2x2 symmetric Schur rotation, so the accumulated transform
    /// stays unitary. Converges when the off-diagonal Frobenius norm drops
    /// below 1e-13 (quadratic convergence; a handful of sweeps for 4x4).
    fn jacobi_eigh(&self) -> ([f64; N], Self) {
        let mut a = *self;
        let mut v = Self::identity();
        for _ in 0..JACOBI_MAX_SWEEPS {
            if a.off_diagonal_norm() < JACOBI_OFF_TOL {
                break;
            }
            for p in 0..N {
                for q in (p + 1)..N {
                    let beta = a.e[p][q];
                    let m = beta.norm();
                    if m == 0.0 {
                        continue;
                    }
                    // Phase factor that makes the pivot real, then the
                    // rotation angle from the real symmetric 2x2 block.
                    let phase = beta / m;
                    let tau = (a.e[q][q].re - a.e[p][p].re) / (2.0 * m);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let cos = 1.0 / (1.0 + t * t).sqrt();
                    let sin = t * cos;

                    let mut u = Self::identity();
                    u.e[p][p] = c(cos, 0.0);
                    u.e[p][q] = c(sin, 0.0);
                    u.e[q][p] = -phase.conj() * sin;
                    u.e[q][q] = phase.conj() * cos;

                    a = u.adjoint().mul(&a).mul(&u);
                    // The pivot is zero by construction; drop the rounding dust.
                    a.e[p][q] = C64::ZERO;
                    a.e[q][p] = C64::ZERO;
                    v = v.mul(&u);
                }
            }
        }
        let mut order: [usize; N] = [0; N];
        for (i, slot) in order.iter_mut().enumerate() {
            *slot = i;
        }
        order.sort_by(|&i, &j| a.e[j][j].re.partial_cmp(&a.e[i][i].re).unwrap());
        let mut eigs = [0.0f64; N];
        let mut vecs = Self::zeros();
        for (rank, &idx) in order.iter().enumerate() {
            eigs[rank] = a.e[idx][idx].re;
            for row in 0..N {
                vecs.e[row][rank] = v.e[row][idx];
            }
        }
        (eigs, vecs)
    }
}

/// Kronecker product of two one-qubit operators, first factor = polarization.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.e[2 * i + k][2 * j + l] = a.e[i][j] * b.e[k][l];
                }
            }
        }
    }
    m
}

/// Eigenvalues of a 2x2 Hermitian matrix by the closed quadratic form,
/// sorted descending.
pub fn hermitian_eigenvalues2(m: &Mat2) -> Result<[f64; 2]> {
    m.check_hermitian()?;
    let mean = 0.5 * (m.e[0][0].re + m.e[1][1].re);
    let half_gap = 0.5 * (m.e[0][0].re - m.e[1][1].re);
    let radius = (half_gap * half_gap + m.e[0][1].norm_sqr()).sqrt();
    Ok([mean + radius, mean - radius])
}

/// Eigenvalues of a 4x4 Hermitian matrix by cyclic Jacobi rotations,
/// sorted descending.
pub fn hermitian_eigenvalues4(m: &Mat4) -> Result<[f64; 4]> {
    m.check_hermitian()?;
    Ok(m.jacobi_eigh().0)
}

/// Full eigendecomposition of a 4x4 Hermitian matrix: descending
/// eigenvalues plus the matching eigenvectors as matrix columns.
pub fn hermitian_eigh4(m: &Mat4) -> Result<([f64; 4], Mat4)> {
    m.check_hermitian()?;
    Ok(m.jacobi_eigh())
}

/// Shannon entropy of a coin with bias `x`, in bits. `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-HERMITICITY_TOL..=1.0 + HERMITICITY_TOL).contains(&x) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            min: 0.0,
            max: 1.0,
        });
    }
    let x = x.clamp(0.0, 1.0);
    Ok(plogp(x) + plogp(1.0 - x))
}

/// One term of the entropy sum, `-p log2 p`, with `0 log 0 := 0`.
#[inline]
fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Entropy from an eigenvalue list. Values in [-1e-10, 0) are clamped to
/// zero so that rank-deficient states evaluate cleanly; the result is
/// clamped into `[0, cap]` to shed rounding dust at the extremes.
fn entropy_from_eigenvalues(eigs: &[f64], cap: f64) -> f64 {
    let s: f64 = eigs.iter().map(|&l| plogp(l.max(0.0))).sum();
    s.clamp(0.0, cap)
}

/// Which tensor factor of the two-qubit system to keep or act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Qubit {
    /// The photon polarization, first tensor factor (`s`).
    Polarization,
    /// The interferometer path, second tensor factor (`p`).
    Path,
}

/// Outcome label of a two-valued projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// A projective measurement axis on the Bloch sphere.
///
/// `theta` is the polar angle in [0, pi], `phi` the azimuthal angle in
/// [0, 2*pi); the projectors are `(1 +/- n.sigma)/2` for the unit vector
/// `n = (sin t cos f, sin t sin f, cos t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementDirection {
    theta: f64,
    phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                min: 0.0,
                max: std::f64::consts::PI,
            });
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: 0.0,
                max: std::f64::consts::TAU,
            });
        }
        Ok(Self { theta, phi })
    }

    pub fn z_axis() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn x_axis() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        }
    }

    pub fn y_axis() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_2,
            phi: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit Bloch vector of the measurement axis.
    pub fn bloch(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// Rank-1 projector `(1 +/- n.sigma)/2`.
    pub fn projector(&self, outcome: Outcome) -> Mat2 {
        let [nx, ny, nz] = self.bloch();
        let s = outcome.sign();
        Mat2::from_rows([
            [c(0.5 * (1.0 + s * nz), 0.0), c(0.5 * s * nx, -0.5 * s * ny)],
            [c(0.5 * s * nx, 0.5 * s * ny), c(0.5 * (1.0 - s * nz), 0.0)],
        ])
    }
}

/// A one-qubit unitary, validated as `U U† = 1` within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    m: Mat2,
}

impl LocalUnitary {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        let m = Mat2::from_rows(entries);
        let dev = m.mul(&m.adjoint()).max_abs_diff(&Mat2::identity());
        if dev > HERMITICITY_TOL {
            return Err(Error::NonUnitary { deviation: dev });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Mat2::identity() }
    }

    pub fn pauli_x() -> Self {
        Self {
            m: Mat2::from_rows([[C64::ZERO, C64::ONE], [C64::ONE, C64::ZERO]]),
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            m: Mat2::from_rows([[C64::ZERO, c(0.0, -1.0)], [c(0.0, 1.0), C64::ZERO]]),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            m: Mat2::from_rows([[C64::ONE, C64::ZERO], [C64::ZERO, -C64::ONE]]),
        }
    }

    /// The half-wave-plate action at pi/8: |h> -> (|h>+|v>)/sqrt(2),
    /// |v> -> (|h>-|v>)/sqrt(2).
    pub fn hadamard() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            m: Mat2::from_rows([[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]]),
        }
    }

    /// Composition `self * rhs` (apply `rhs` first).
    pub fn then_after(&self, rhs: &Self) -> Self {
        Self { m: self.m.mul(&rhs.m) }
    }

    pub fn mat(&self) -> &Mat2 {
        &self.m
    }
}

/// A validated one-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    m: Mat2,
}

impl QubitState {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        Self::from_mat(Mat2::from_rows(entries))
    }

    pub(crate) fn from_mat(m: Mat2) -> Result<Self> {
        m.check_hermitian()?;
        let tr = m.trace().re;
        if (tr - 1.0).abs() > HERMITICITY_TOL {
            return Err(Error::InvalidState {
                reason: format!("trace = {tr} is not 1"),
            });
        }
        let eigs = hermitian_eigenvalues2(&m)?;
        if eigs[1] < PSD_TOL {
            return Err(Error::InvalidState {
                reason: format!("negative eigenvalue {}", eigs[1]),
            });
        }
        Ok(Self { m })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat2::identity().scale(0.5),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.m.e[i][j]
    }

    pub fn mat(&self) -> &Mat2 {
        &self.m
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues2(&self.m).expect("validated at construction")
    }

    /// von Neumann entropy in bits, in [0, 1].
    pub fn entropy(&self) -> f64 {
        entropy_from_eigenvalues(&self.eigenvalues(), 1.0)
    }

    /// Bloch vector `(tr(rho sigma_x), tr(rho sigma_y), tr(rho sigma_z))`.
    pub fn bloch(&self) -> [f64; 3] {
        [
            2.0 * self.m.e[0][1].re,
            -2.0 * self.m.e[0][1].im,
            self.m.e[0][0].re - self.m.e[1][1].re,
        ]
    }
}

/// A validated two-qubit density matrix in the fixed
/// {|h0>, |h1>, |v0>, |v1>} basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Mat4,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues >= -1e-10).
    pub fn new(entries: [[C64; 4]; 4]) -> Result<Self> {
        Self::from_mat(Mat4::from_rows(entries))
    }

    pub(crate) fn from_mat(m: Mat4) -> Result<Self> {
        m.check_hermitian()?;
        let tr = m.trace().re;
        if (tr - 1.0).abs() > HERMITICITY_TOL {
            return Err(Error::InvalidState {
                reason: format!("trace = {tr} is not 1"),
            });
        }
        let eigs = m.jacobi_eigh().0;
        if eigs[3] < PSD_TOL {
            return Err(Error::InvalidState {
                reason: format!("negative eigenvalue {}", eigs[3]),
            });
        }
        Ok(Self { m })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat4::identity().scale(0.25),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.m.e[i][j]
    }

    pub fn mat(&self) -> &Mat4 {
        &self.m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.max_abs_diff(&other.m)
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        self.m.jacobi_eigh().0
    }

    /// von Neumann entropy in bits, in [0, 2].
    pub fn entropy(&self) -> f64 {
        entropy_from_eigenvalues(&self.eigenvalues(), 2.0)
    }

    /// Reduced state of one qubit.
    pub fn partial_trace(&self, keep: Qubit) -> QubitState {
        let mut m = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let mut sum = C64::ZERO;
                for t in 0..2 {
                    let (row, col) = match keep {
                        Qubit::Polarization => (2 * i + t, 2 * j + t),
                        Qubit::Path => (2 * t + i, 2 * t + j),
                    };
                    sum += self.m.e[row][col];
                }
                m.e[i][j] = sum;
            }
        }
        QubitState::from_mat(m).expect("partial trace of a valid state is valid")
    }

    /// Conjugation by a product of one-qubit unitaries,
    /// `(U_s x U_p) rho (U_s x U_p)†`.
    pub fn apply_local(&self, u_s: &LocalUnitary, u_p: &LocalUnitary) -> DensityMatrix {
        let u = kron(u_s.mat(), u_p.mat());
        self.conjugated_by(&u)
            .expect("unitary conjugation preserves state validity")
    }

    /// Conjugation by an arbitrary (already unitary) 4x4 matrix.
    pub(crate) fn conjugated_by(&self, u: &Mat4) -> Result<DensityMatrix> {
        DensityMatrix::from_mat(u.mul(&self.m).mul(&u.adjoint()))
    }

    /// Probability of `outcome` when measuring the polarization qubit
    /// along `direction`.
    pub fn outcome_probability(&self, direction: &MeasurementDirection, outcome: Outcome) -> f64 {
        let op = kron(&direction.projector(outcome), &Mat2::identity());
        op.mul(&self.m).trace().re
    }

    /// Projective measurement of the polarization qubit along `direction`:
    /// returns the outcome probability and the conditional path state.
    ///
    /// Fails with `DegenerateOutcome` when the probability is below 1e-12;
    /// callers average entropies treat such a branch as contributing zero.
    pub fn conditional(
        &self,
        direction: &MeasurementDirection,
        outcome: Outcome,
    ) -> Result<(f64, QubitState)> {
        let op = kron(&direction.projector(outcome), &Mat2::identity());
        let prod = op.mul(&self.m);
        let p = prod.trace().re;
        if p < 1e-12 {
            return Err(Error::DegenerateOutcome { probability: p });
        }
        // Tr_s[(P x 1) rho] is Hermitian because P is a projector.
        let mut m = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = (prod.e[i][j] + prod.e[2 + i][2 + j]) / p;
            }
        }
        // Shed the rounding skew so downstream validation stays exact.
        let sym = m.add(&m.adjoint()).scale(0.5);
        Ok((p, QubitState::from_mat(sym)?))
    }

    /// The same state with the roles of polarization and path exchanged.
    pub fn swap_qubits(&self) -> DensityMatrix {
        const PERM: [usize; 4] = [0, 2, 1, 3];
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = self.m.e[PERM[i]][PERM[j]];
            }
        }
        DensityMatrix { m }
    }
}
