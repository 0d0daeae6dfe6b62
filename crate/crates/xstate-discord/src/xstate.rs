//! The symmetric two-qubit X-state family, its optical-apparatus
//! parameterization, and closed-form entanglement measures.
//!
//! A symmetric X-state in the {|h0>, |h1>, |v0>, |v1>} basis is
//!
//! ```text
//!         [ a   0   0   w* ]
//!   rho = [ 0   b   z*  0  ]        b = 1/2 - a
//!         [ 0   z   b   0  ]
//!         [ w   0   0   a  ]
//! ```
//!
//! with outer coherence `w` (|h0> <-> |v1>) and inner coherence `z`
//! (|h1> <-> |v0>). Local sigma_Z rotations absorb coherence phases
//! without touching any correlation measure, so the canonical form keeps
//! `w` and `z` real and non-negative: `0 <= w <= a`, `0 <= z <= b`.
//!
//! The optical source produces this family directly: a beam splitter with
//! reflection coefficient `R` splits the photon over two incoherent paths,
//! and path delays suppress the h/v coherences by factors
//! `kappa = exp(-tau/tau_c)`.

use crate::error::{Error, Result};
use crate::qcore::{
    binary_entropy, hermitian_eigh4, kron, C64, CMat, DensityMatrix, LocalUnitary, Mat2, Mat4,
};
use serde::Serialize;

/// Entries smaller than this count as structural zeros when recognizing
/// X-shaped matrices. All states here are constructed, not measured.
const X_SHAPE_TOL: f64 = 1e-12;

#[inline]
fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Canonical parameters (a, w, z) of a symmetric X-state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStateParams {
    a: f64,
    w: f64,
    z: f64,
}

impl XStateParams {
    /// Requires `a` in [0, 1/2], `0 <= w <= a` and `0 <= z <= b` with
    /// `b = 1/2 - a`; anything else leaves the positivity cone.
    pub fn new(a: f64, w: f64, z: f64) -> Result<Self> {
        let slack = X_SHAPE_TOL;
        if !(-slack..=0.5 + slack).contains(&a) {
            return Err(Error::InvalidParams {
                reason: format!("a = {a} outside [0, 1/2]"),
            });
        }
        let a = a.clamp(0.0, 0.5);
        let b = 0.5 - a;
        if !(-slack..=a + slack).contains(&w) {
            return Err(Error::InvalidParams {
                reason: format!("w = {w} outside [0, a = {a}]"),
            });
        }
        if !(-slack..=b + slack).contains(&z) {
            return Err(Error::InvalidParams {
                reason: format!("z = {z} outside [0, b = {b}]"),
            });
        }
        Ok(Self {
            a,
            w: w.clamp(0.0, a),
            z: z.clamp(0.0, b),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The repeated inner diagonal weight, `b = 1/2 - a`.
    pub fn b(&self) -> f64 {
        0.5 - self.a
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Builds the density matrix with diagonal (a, b, b, a), corner
    /// coherences `w` and inner coherences `z`.
    pub fn assemble(&self) -> DensityMatrix {
        let (a, b, w, z) = (self.a, self.b(), self.w, self.z);
        DensityMatrix::new([
            [c(a, 0.0), C64::ZERO, C64::ZERO, c(w, 0.0)],
            [C64::ZERO, c(b, 0.0), c(z, 0.0), C64::ZERO],
            [C64::ZERO, c(z, 0.0), c(b, 0.0), C64::ZERO],
            [c(w, 0.0), C64::ZERO, C64::ZERO, c(a, 0.0)],
        ])
        .expect("canonical parameters give a valid state")
    }

    /// Wootters concurrence of the family, `2 max[0, w - b, z - a]`.
    pub fn concurrence(&self) -> f64 {
        2.0 * 0f64.max(self.w - self.b()).max(self.z - self.a)
    }

    /// Eigenvalues {a + w, a - w, b + z, b - z}, sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut eigs = [
            self.a + self.w,
            self.a - self.w,
            self.b() + self.z,
            self.b() - self.z,
        ];
        eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
        eigs
    }
}

/// Optical knobs of the X-state source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApparatusParams {
    r: f64,
    kappa_h: f64,
    kappa_v: f64,
}

impl ApparatusParams {
    /// `r` is the beam-splitter reflection coefficient; `kappa_h`,
    /// `kappa_v` the coherence factors of the horizontal and vertical
    /// components of path |0>. All live in [0, 1].
    pub fn new(r: f64, kappa_h: f64, kappa_v: f64) -> Result<Self> {
        for (name, value) in [("R", r), ("kappa_h", kappa_h), ("kappa_v", kappa_v)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidParams {
                    reason: format!("{name} = {value} outside [0, 1]"),
                });
            }
        }
        Ok(Self { r, kappa_h, kappa_v })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Transmission coefficient, `T = 1 - R`.
    pub fn t(&self) -> f64 {
        1.0 - self.r
    }

    pub fn kappa_h(&self) -> f64 {
        self.kappa_h
    }

    pub fn kappa_v(&self) -> f64 {
        self.kappa_v
    }

    /// The source state as produced by the optics: diagonal
    /// (R, T, T, R)/2 with corner coherences -+ i R kappa_h / 2 and inner
    /// coherences -+ i T kappa_v / 2.
    pub fn state(&self) -> DensityMatrix {
        let (r, t) = (self.r, self.t());
        let wh = 0.5 * r * self.kappa_h;
        let zv = 0.5 * t * self.kappa_v;
        DensityMatrix::new([
            [c(0.5 * r, 0.0), C64::ZERO, C64::ZERO, c(0.0, -wh)],
            [C64::ZERO, c(0.5 * t, 0.0), c(0.0, -zv), C64::ZERO],
            [C64::ZERO, c(0.0, zv), c(0.5 * t, 0.0), C64::ZERO],
            [c(0.0, wh), C64::ZERO, C64::ZERO, c(0.5 * r, 0.0)],
        ])
        .expect("apparatus parameters give a valid state")
    }

    /// Canonical X-state parameters of the source state:
    /// `(R/2, R kappa_h / 2, T kappa_v / 2)`.
    pub fn canonical_params(&self) -> XStateParams {
        XStateParams::new(
            0.5 * self.r,
            0.5 * self.r * self.kappa_h,
            0.5 * self.t() * self.kappa_v,
        )
        .expect("apparatus parameters map into the canonical cone")
    }
}

/// Coherence factor left after delaying one polarization component by
/// `tau` against a photon coherence time `tau_c`: `exp(-tau/tau_c)`.
pub fn kappa_from_delay(tau: f64, tau_c: f64) -> Result<f64> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidTime {
            reason: format!("delay tau = {tau} must be >= 0"),
        });
    }
    if !tau_c.is_finite() || tau_c <= 0.0 {
        return Err(Error::InvalidTime {
            reason: format!("coherence time tau_c = {tau_c} must be > 0"),
        });
    }
    Ok((-tau / tau_c).exp())
}

/// Reduces an arbitrary symmetric X-state to canonical parameters
/// (a, |w|, |z|).
///
/// The reduction amounts to a local rotation `exp(i phi_s sigma_Z / 2) (x)
/// exp(i phi_p sigma_Z / 2)` with the phases chosen to turn both
/// coherences real and positive (for the apparatus state this is the
/// quarter-turn `exp(i pi/4 sigma_Z) (x) 1`), so every correlation
/// measure of the input and of `result.assemble()` agrees.
///
/// Rejects matrices with support off the X shape (`NotXState`) and
/// X-states whose diagonal is not of the (a, b, b, a) form
/// (`NotSymmetric`).
pub fn canonicalize(rho: &DensityMatrix) -> Result<XStateParams> {
    const X_POSITIONS: [(usize, usize); 8] = [
        (0, 0),
        (1, 1),
        (2, 2),
        (3, 3),
        (0, 3),
        (3, 0),
        (1, 2),
        (2, 1),
    ];
    for i in 0..4 {
        for j in 0..4 {
            if X_POSITIONS.contains(&(i, j)) {
                continue;
            }
            let magnitude = rho.at(i, j).norm();
            if magnitude > X_SHAPE_TOL {
                return Err(Error::NotXState {
                    row: i,
                    col: j,
                    magnitude,
                });
            }
        }
    }
    let outer_gap = (rho.at(0, 0) - rho.at(3, 3)).norm();
    let inner_gap = (rho.at(1, 1) - rho.at(2, 2)).norm();
    let deviation = outer_gap.max(inner_gap);
    if deviation > X_SHAPE_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    let a = 0.5 * (rho.at(0, 0).re + rho.at(3, 3).re);
    XStateParams::new(a, rho.at(3, 0).norm(), rho.at(2, 1).norm())
}

/// Entanglement of formation as a function of concurrence,
/// `E = h((1 + sqrt(1 - C^2)) / 2)` in bits.
pub fn entanglement_of_formation(concurrence: f64) -> Result<f64> {
    if !(0.0..=1.0 + X_SHAPE_TOL).contains(&concurrence) {
        return Err(Error::OutOfRange {
            name: "concurrence",
            value: concurrence,
            min: 0.0,
            max: 1.0,
        });
    }
    let csq = (concurrence * concurrence).min(1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - csq).sqrt()))
}

/// The pre-encoding state used throughout the protocol analysis: the
/// apparatus state at `kappa_h = 1`, `kappa_v = 0`, already rotated to its
/// canonical real form (diagonal (R, T, T, R)/2, corners R/2).
pub fn prepared_state(r: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParams {
            reason: format!("R = {r} outside [0, 1]"),
        });
    }
    Ok(XStateParams::new(0.5 * r, 0.5 * r, 0.0)?.assemble())
}

/// Wootters concurrence of an arbitrary two-qubit state by the spin-flip
/// construction: with `rho_f = (sigma_y x sigma_y) conj(rho) (sigma_y x
/// sigma_y)` and mu_i the descending eigenvalues of `sqrt(rho) rho_f
/// sqrt(rho)`, the concurrence is `max(0, sqrt(mu_1) - sqrt(mu_2) -
/// sqrt(mu_3) - sqrt(mu_4))`.
///
/// Serves as the independent general-state oracle for
/// [`XStateParams::concurrence`].
pub fn concurrence_spin_flip(rho: &DensityMatrix) -> f64 {
    let sy = Mat2::from_rows([[C64::ZERO, c(0.0, -1.0)], [c(0.0, 1.0), C64::ZERO]]);
    let syy = kron(&sy, &sy);
    let flipped = syy.mul(&rho.mat().conj()).mul(&syy);

    let (eigs, vecs) = hermitian_eigh4(rho.mat()).expect("density matrix is Hermitian");
    let mut sqrt_rho = CMat::<4>::zeros();
    for k in 0..4 {
        let root = eigs[k].max(0.0).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho.e[i][j] += root * vecs.e[i][k] * vecs.e[j][k].conj();
            }
        }
    }
    let product: Mat4 = sqrt_rho.mul(&flipped).mul(&sqrt_rho);
    // Symmetrize away the rounding skew before the Hermitian solver.
    let sym = product.add(&product.adjoint()).scale(0.5);
    let mu = hermitian_eigh4(&sym).expect("symmetrized product is Hermitian").0;
    let roots: Vec<f64> = mu.iter().map(|&m| m.max(0.0).sqrt()).collect();
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// The quarter-turn polarization rotation that maps the apparatus state
/// onto its canonical real form.
pub fn quarter_turn_rotation() -> LocalUnitary {
    let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    LocalUnitary::new([[phase, C64::ZERO], [C64::ZERO, phase.conj()]])
        .expect("diagonal phase matrix is unitary")
}
