//! Two-qubit X-state construction, validation and Bloch parametrization.
//!
//! An X state has nonzero entries only on the diagonal and the anti-diagonal
//! of its 4x4 density matrix. Seven real numbers describe it completely: the
//! Bloch coefficients `r`, `s`, `c3` and the complex pair `c1`, `c2`. All of
//! the closed-form machinery in this crate works on that parametrization.

use num_complex::Complex64 as C64;
use rand::Rng;
use thiserror::Error;

use crate::mat::{kron, Mat2, Mat4, ZERO};

/// Absolute magnitude below which a forbidden (non-X) entry counts as zero.
pub const TOL_ZERO: f64 = 1e-9;
/// Hermiticity tolerance for raw input matrices.
pub const TOL_HERM: f64 = 1e-9;
/// Unit-trace tolerance.
pub const TOL_TRACE: f64 = 1e-9;
/// Positivity slack: diagonals and 2x2 block determinants may undershoot
/// zero by this much before the state is rejected.
pub const TOL_PSD: f64 = 1e-10;
/// Round-trip tolerance between the matrix and Bloch representations.
pub const TOL_ROUNDTRIP: f64 = 1e-12;
/// Agreement tolerance between the closed-form spectrum and a dense
/// Hermitian eigensolve.
pub const TOL_EIG: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XStateError {
    #[error("matrix is not X-shaped: entry ({row},{col}) has magnitude {magnitude:.3e}")]
    NotXShaped { row: usize, col: usize, magnitude: f64 },
    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("state is not positive semidefinite: {what}")]
    NotPositive { what: String },
}

/// A validated two-qubit X-state density matrix. The conjugate entries
/// rho41 = conj(rho14) and rho32 = conj(rho23) are implied, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XDensityMatrix {
    diag: [f64; 4],
    rho14: C64,
    rho23: C64,
}

/// Bloch parameters of an X state, with the transverse coherence scale `b`
/// cached at construction.
///
/// `b^2` is the largest value of `z1^2|c1|^2 + z2^2|c2|^2 + 2 z1 z2 (a1 b2 - a2 b1)`
/// over unit vectors (z1, z2) — the top eigenvalue of the 2x2 coherence form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochX {
    pub r: f64,
    pub s: f64,
    pub c3: f64,
    pub c1: C64,
    pub c2: C64,
    b: f64,
}

/// The four eigenvalues of an X state in the closed-form labeling:
/// lambda_{1,2} pair with 1+c3, lambda_{3,4} with 1-c3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumX {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
}

impl SpectrumX {
    pub fn as_array(&self) -> [f64; 4] {
        [self.lambda1, self.lambda2, self.lambda3, self.lambda4]
    }

    pub fn sorted_descending(&self) -> [f64; 4] {
        let mut v = self.as_array();
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        v
    }
}

/// Validates a raw 4x4 complex matrix as an X state. Checks, in order:
/// X sparsity, Hermiticity, unit trace and positivity of the two 2x2 blocks.
/// Tiny negative diagonal entries (within [`TOL_PSD`]) are clamped to zero.
pub fn validate_density(m: &Mat4) -> Result<XDensityMatrix, XStateError> {
    const FORBIDDEN: [(usize, usize); 8] = [
        (0, 1),
        (0, 2),
        (1, 0),
        (1, 3),
        (2, 0),
        (2, 3),
        (3, 1),
        (3, 2),
    ];
    for (row, col) in FORBIDDEN {
        let magnitude = m.0[row][col].norm();
        if magnitude > TOL_ZERO {
            return Err(XStateError::NotXShaped { row, col, magnitude });
        }
    }
    let deviation = m.max_abs_diff(&m.adjoint());
    if deviation > TOL_HERM {
        return Err(XStateError::NotHermitian { deviation });
    }
    let diag_raw = [m.0[0][0].re, m.0[1][1].re, m.0[2][2].re, m.0[3][3].re];
    let trace: f64 = diag_raw.iter().sum();
    if (trace - 1.0).abs() > TOL_TRACE {
        return Err(XStateError::TraceNotOne { trace });
    }
    let mut diag = [0.0; 4];
    for (k, &d) in diag_raw.iter().enumerate() {
        if d < -TOL_PSD {
            return Err(XStateError::NotPositive {
                what: format!("diagonal entry rho{}{} = {d:.3e}", k + 1, k + 1),
            });
        }
        diag[k] = d.max(0.0);
    }
    // Hermiticity is already checked; average the conjugate pair so the
    // stored coherence is exact.
    let rho14 = 0.5 * (m.0[0][3] + m.0[3][0].conj());
    let rho23 = 0.5 * (m.0[1][2] + m.0[2][1].conj());
    if diag[0] * diag[3] < rho14.norm_sqr() - TOL_PSD {
        return Err(XStateError::NotPositive {
            what: format!(
                "outer block: rho11*rho44 = {:.6e} < |rho14|^2 = {:.6e}",
                diag[0] * diag[3],
                rho14.norm_sqr()
            ),
        });
    }
    if diag[1] * diag[2] < rho23.norm_sqr() - TOL_PSD {
        return Err(XStateError::NotPositive {
            what: format!(
                "inner block: rho22*rho33 = {:.6e} < |rho23|^2 = {:.6e}",
                diag[1] * diag[2],
                rho23.norm_sqr()
            ),
        });
    }
    Ok(XDensityMatrix { diag, rho14, rho23 })
}

impl XDensityMatrix {
    /// Builds the state from its six independent entries, running the same
    /// checks as [`validate_density`].
    pub fn new(diag: [f64; 4], rho14: C64, rho23: C64) -> Result<Self, XStateError> {
        let mut m = Mat4::zero();
        for (k, d) in diag.iter().enumerate() {
            m.0[k][k] = C64::new(*d, 0.0);
        }
        m.0[0][3] = rho14;
        m.0[3][0] = rho14.conj();
        m.0[1][2] = rho23;
        m.0[2][1] = rho23.conj();
        validate_density(&m)
    }

    pub fn rho11(&self) -> f64 {
        self.diag[0]
    }
    pub fn rho22(&self) -> f64 {
        self.diag[1]
    }
    pub fn rho33(&self) -> f64 {
        self.diag[2]
    }
    pub fn rho44(&self) -> f64 {
        self.diag[3]
    }
    pub fn diag(&self) -> [f64; 4] {
        self.diag
    }
    pub fn rho14(&self) -> C64 {
        self.rho14
    }
    pub fn rho23(&self) -> C64 {
        self.rho23
    }

    /// The full 4x4 matrix with the implied conjugate entries filled in.
    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::zero();
        for (k, d) in self.diag.iter().enumerate() {
            m.0[k][k] = C64::new(*d, 0.0);
        }
        m.0[0][3] = self.rho14;
        m.0[3][0] = self.rho14.conj();
        m.0[1][2] = self.rho23;
        m.0[2][1] = self.rho23.conj();
        m
    }

    /// The linear map onto Bloch parameters.
    pub fn bloch(&self) -> BlochX {
        let [p11, p22, p33, p44] = self.diag;
        BlochX::new(
            p11 - p44 + p22 - p33,
            p11 - p44 - p22 + p33,
            p11 + p44 - p22 - p33,
            2.0 * (self.rho23 + self.rho14),
            2.0 * (self.rho23 - self.rho14),
        )
    }
}

impl BlochX {
    pub fn new(r: f64, s: f64, c3: f64, c1: C64, c2: C64) -> Self {
        let b = b_squared(c1, c2).sqrt();
        BlochX { r, s, c3, c1, c2, b }
    }

    /// All Bloch parameters zero: the maximally mixed state I/4.
    pub fn zero() -> Self {
        BlochX::new(0.0, 0.0, 0.0, ZERO, ZERO)
    }

    /// Werner state a|psi-><psi-| + (1-a)/4 I: r = s = 0, c1 = c2 = c3 = -a.
    pub fn werner(a: f64) -> Self {
        let c = C64::new(-a, 0.0);
        BlochX::new(0.0, 0.0, -a, c, c)
    }

    /// Bell-diagonal state with real correlation coefficients.
    pub fn bell_diagonal(c1: f64, c2: f64, c3: f64) -> Self {
        BlochX::new(0.0, 0.0, c3, C64::new(c1, 0.0), C64::new(c2, 0.0))
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn b_squared(&self) -> f64 {
        self.b * self.b
    }

    /// Inverse of [`XDensityMatrix::bloch`]; fails with `NotPositive` when the
    /// seven parameters do not describe a state.
    pub fn to_density(&self) -> Result<XDensityMatrix, XStateError> {
        let diag = [
            0.25 * (1.0 + self.c3 + self.r + self.s),
            0.25 * (1.0 - self.c3 + self.r - self.s),
            0.25 * (1.0 - self.c3 - self.r + self.s),
            0.25 * (1.0 + self.c3 - self.r - self.s),
        ];
        let rho14 = 0.25 * (self.c1 - self.c2);
        let rho23 = 0.25 * (self.c1 + self.c2);
        XDensityMatrix::new(diag, rho14, rho23)
    }

    /// The 4x4 matrix assembled from the Pauli expansion directly. Used by
    /// tests as an independent route to [`Self::to_density`].
    pub fn to_matrix_pauli(&self) -> Mat4 {
        let id = Mat2::identity();
        let s1 = Mat2::pauli(1);
        let s2 = Mat2::pauli(2);
        let s3 = Mat2::pauli(3);
        let mut m = kron(&id, &id);
        m = m.add(&kron(&s3, &s3).scale(C64::new(self.c3, 0.0)));
        m = m.add(&kron(&s1, &s1).scale(C64::new(self.c1.re, 0.0)));
        m = m.add(&kron(&s2, &s2).scale(C64::new(self.c2.re, 0.0)));
        m = m.add(&kron(&id, &s3).scale(C64::new(self.s, 0.0)));
        m = m.add(&kron(&s3, &id).scale(C64::new(self.r, 0.0)));
        m = m.add(&kron(&s1, &s2).scale(C64::new(self.c2.im, 0.0)));
        m = m.add(&kron(&s2, &s1).scale(C64::new(-self.c1.im, 0.0)));
        m.scale(C64::new(0.25, 0.0))
    }

    /// Closed-form spectrum. lambda_{1,2} = (1 + c3 +- |(r+s, c1-c2)|)/4,
    /// lambda_{3,4} = (1 - c3 +- |(r-s, c1+c2)|)/4.
    pub fn spectrum(&self) -> SpectrumX {
        let u_plus = ((self.r + self.s).powi(2) + (self.c1 - self.c2).norm_sqr()).sqrt();
        let u_minus = ((self.r - self.s).powi(2) + (self.c1 + self.c2).norm_sqr()).sqrt();
        let clamp = |x: f64| if x < 0.0 && x > -TOL_PSD { 0.0 } else { x };
        SpectrumX {
            lambda1: clamp(0.25 * (1.0 + self.c3 + u_plus)),
            lambda2: clamp(0.25 * (1.0 + self.c3 - u_plus)),
            lambda3: clamp(0.25 * (1.0 - self.c3 + u_minus)),
            lambda4: clamp(0.25 * (1.0 - self.c3 - u_minus)),
        }
    }

    /// Marginal Bloch z-components: rho_A = diag((1+r)/2, (1-r)/2) and
    /// rho_B = diag((1+s)/2, (1-s)/2).
    pub fn marginals(&self) -> (f64, f64) {
        (self.r, self.s)
    }
}

/// The coherence scale: (|c1|^2 + |c2|^2 + sqrt((|c1|^2-|c2|^2)^2 + 4k^2))/2
/// with k = a1 b2 - a2 b1.
fn b_squared(c1: C64, c2: C64) -> f64 {
    let n1 = c1.norm_sqr();
    let n2 = c2.norm_sqr();
    let cross = c1.re * c2.im - c2.re * c1.im;
    0.5 * (n1 + n2 + ((n1 - n2).powi(2) + 4.0 * cross * cross).sqrt())
}

/// Signed cross term a1*b2 - a2*b1 of the coherence form.
pub fn coherence_cross(c1: C64, c2: C64) -> f64 {
    c1.re * c2.im - c2.re * c1.im
}

/// Samples a valid X state: diagonal from a flat simplex, coherences bounded
/// by the block determinants, uniform phases. Valid by construction.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> XDensityMatrix {
    let mut diag = [0.0f64; 4];
    let mut total = 0.0;
    for d in diag.iter_mut() {
        *d = -(rng.gen_range(1e-12..1.0f64)).ln();
        total += *d;
    }
    for d in diag.iter_mut() {
        *d /= total;
    }
    let mag14 = (diag[0] * diag[3]).sqrt() * rng.gen_range(0.0..1.0);
    let mag23 = (diag[1] * diag[2]).sqrt() * rng.gen_range(0.0..1.0);
    let ph14 = rng.gen_range(0.0..std::f64::consts::TAU);
    let ph23 = rng.gen_range(0.0..std::f64::consts::TAU);
    let rho14 = C64::from_polar(mag14, ph14);
    let rho23 = C64::from_polar(mag23, ph23);
    XDensityMatrix::new(diag, rho14, rho23).expect("sampler produces valid states")
}

/// Example 2's density matrix: diag(0.437, 0.154, 0.037, 0.372), rho14 = 0.1.
pub fn example_two() -> XDensityMatrix {
    XDensityMatrix::new([0.437, 0.154, 0.037, 0.372], C64::new(0.1, 0.0), ZERO).unwrap()
}

/// Example 3's density matrix: diag(0.0783, 0.125, 0.125, 0.6717), rho23 = 0.1.
pub fn example_three() -> XDensityMatrix {
    XDensityMatrix::new([0.0783, 0.125, 0.125, 0.6717], ZERO, C64::new(0.1, 0.0)).unwrap()
}

/// The maximally mixed state I/4.
pub fn maximally_mixed() -> XDensityMatrix {
    XDensityMatrix::new([0.25; 4], ZERO, ZERO).unwrap()
}
