//! Operator-level brute force, independent of every closed form in this
//! crate.
//!
//! Measurement bases are parameterized by SU(2) elements, the weak operator
//! pair is built from rotated projectors, conditional states come from
//! explicit 4x4 sandwiches and partial traces, and the minimal conditional
//! entropy is found by exhaustive search over a deterministic direction grid.
//! Tests use this module to pin down sign conventions and to validate the
//! one-variable reduction end to end.

use thiserror::Error;

use crate::mat::{kron, partial_trace_b, Mat2, Mat4, I};
use crate::weakmeas::{ConditionalOutcome, TOL_DEG};
use crate::xstate::{BlochX, XDensityMatrix};
use num_complex::Complex64 as C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what}")]
    DomainError { what: String },
    #[error("SU(2) parameters have norm {norm}, expected 1")]
    NotUnit { norm: f64 },
    #[error("branch {branch} has probability {p:.3e} <= {TOL_DEG:e}")]
    DegenerateBranch { branch: char, p: f64 },
}

/// A special-unitary V = t I + i (y1 s1 + y2 s2 + y3 s3) with unit parameter
/// norm. The derived direction (z1, z2, z) is the Bloch axis of the rotated
/// measurement basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Element {
    pub t: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl SU2Element {
    pub fn new(t: f64, y1: f64, y2: f64, y3: f64) -> Result<Self, OracleError> {
        let norm = (t * t + y1 * y1 + y2 * y2 + y3 * y3).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(OracleError::NotUnit { norm });
        }
        Ok(SU2Element { t, y1, y2, y3 })
    }

    pub fn identity() -> Self {
        SU2Element { t: 1.0, y1: 0.0, y2: 0.0, y3: 0.0 }
    }

    /// Canonical lift of a direction to SU(2), on the y2 = 0 branch:
    /// y1 = sqrt((1-z)/2), y3 = z1/(2 y1), t = z2/(2 y1). The branch is
    /// singular at z = 1, where the identity is the lift; the input is
    /// normalized first (a zero vector lifts to the identity).
    pub fn from_direction(z1: f64, z2: f64, z: f64) -> Self {
        let norm = (z1 * z1 + z2 * z2 + z * z).sqrt();
        if norm < 1e-12 {
            return SU2Element::identity();
        }
        let (z1, z2, z) = (z1 / norm, z2 / norm, z / norm);
        let y1 = (0.5 * (1.0 - z)).max(0.0).sqrt();
        if y1 < 1e-8 {
            return SU2Element::identity();
        }
        let mut v = SU2Element { t: z2 / (2.0 * y1), y1, y2: 0.0, y3: z1 / (2.0 * y1) };
        // Renormalize away the rounding from the division.
        let n = (v.t * v.t + v.y1 * v.y1 + v.y3 * v.y3).sqrt();
        v.t /= n;
        v.y1 /= n;
        v.y3 /= n;
        v
    }

    pub fn matrix(&self) -> Mat2 {
        let s1 = Mat2::pauli(1);
        let s2 = Mat2::pauli(2);
        let s3 = Mat2::pauli(3);
        let mut m = Mat2::identity().scale(C64::new(self.t, 0.0));
        m = m.add(&s1.scale(I * self.y1));
        m = m.add(&s2.scale(I * self.y2));
        m = m.add(&s3.scale(I * self.y3));
        m
    }

    /// V^dag sigma_i V for i = 1, 2, 3, computed by matrix products.
    pub fn conjugated_paulis(&self) -> [Mat2; 3] {
        let v = self.matrix();
        let vd = v.adjoint();
        [1, 2, 3].map(|i| vd.mul(&Mat2::pauli(i)).mul(&v))
    }

    /// The rotation coefficients of V^dag sigma_i V in closed form:
    /// row i holds the sigma_1, sigma_2, sigma_3 components.
    pub fn rotation_closed_form(&self) -> [[f64; 3]; 3] {
        let (t, y1, y2, y3) = (self.t, self.y1, self.y2, self.y3);
        [
            [
                t * t + y1 * y1 - y2 * y2 - y3 * y3,
                2.0 * (t * y3 + y1 * y2),
                2.0 * (-t * y2 + y1 * y3),
            ],
            [
                2.0 * (y1 * y2 - t * y3),
                t * t + y2 * y2 - y3 * y3 - y1 * y1,
                2.0 * (t * y1 + y2 * y3),
            ],
            [
                2.0 * (t * y2 + y1 * y3),
                2.0 * (y2 * y3 - t * y1),
                t * t + y3 * y3 - y1 * y1 - y2 * y2,
            ],
        ]
    }

    /// The measurement direction (z1, z2, z): the third column of the
    /// rotation, i.e. the Bloch axis of V sigma_3 V^dag.
    pub fn direction(&self) -> (f64, f64, f64) {
        let (t, y1, y2, y3) = (self.t, self.y1, self.y2, self.y3);
        (
            2.0 * (-t * y2 + y1 * y3),
            2.0 * (t * y1 + y2 * y3),
            t * t + y3 * y3 - y1 * y1 - y2 * y2,
        )
    }
}

/// The weak measurement operator pair P(+-x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakOperatorPair {
    pub p_plus: Mat2,
    pub p_minus: Mat2,
}

impl WeakOperatorPair {
    /// max |P(x)^2 + P(-x)^2 - I|.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.p_plus.mul(&self.p_plus).add(&self.p_minus.mul(&self.p_minus));
        sum.max_abs_diff(&Mat2::identity())
    }

    /// Deviation of P(x) P(-x) from its closed-form value
    /// sqrt(1 - tanh^2 x)/2 I. The product vanishes only in the projective
    /// limit; at x = 0 it is I/2.
    pub fn pair_product_defect(&self, x: f64) -> f64 {
        let t = x.tanh();
        let expected = Mat2::identity().scale(C64::new(0.5 * (1.0 - t * t).sqrt(), 0.0));
        self.p_plus.mul(&self.p_minus).max_abs_diff(&expected)
    }
}

/// Builds P(+-x) = sqrt((1 -+ tanh x)/2) Pi_0 + sqrt((1 +- tanh x)/2) Pi_1
/// from the rotated projectors Pi_i = V |i><i| V^dag. At x = 0 both equal
/// I/sqrt(2); as x grows, P(x) -> Pi_1 and P(-x) -> Pi_0.
pub fn weak_operators(v: &SU2Element, x: f64) -> Result<WeakOperatorPair, OracleError> {
    if x < 0.0 || !x.is_finite() {
        return Err(OracleError::DomainError { what: format!("strength x = {x} must be >= 0") });
    }
    let t = x.tanh();
    let vm = v.matrix();
    let outer_col = |c: usize| {
        let mut m = Mat2::zero();
        for r in 0..2 {
            for q in 0..2 {
                m.0[r][q] = vm.0[r][c] * vm.0[q][c].conj();
            }
        }
        m
    };
    let pi0 = outer_col(0);
    let pi1 = outer_col(1);
    let lo = (0.5 * (1.0 - t)).sqrt();
    let hi = (0.5 * (1.0 + t)).sqrt();
    Ok(WeakOperatorPair {
        p_plus: pi0.scale(C64::new(lo, 0.0)).add(&pi1.scale(C64::new(hi, 0.0))),
        p_minus: pi0.scale(C64::new(hi, 0.0)).add(&pi1.scale(C64::new(lo, 0.0))),
    })
}

/// Conditional outcome plus the explicit normalized 2x2 conditional states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectConditional {
    pub outcome: ConditionalOutcome,
    pub state_plus: Mat2,
    pub state_minus: Mat2,
}

fn branch_sandwich(rho: &Mat4, p_op: &Mat2) -> (f64, Mat2) {
    let m = kron(&Mat2::identity(), p_op);
    let t = m.mul(rho).mul(&m);
    (t.trace().re, partial_trace_b(&t))
}

/// Applies I (x) P(+-x), takes the partial trace over B and normalizes.
pub fn conditional_state_direct(
    dm: &XDensityMatrix,
    v: &SU2Element,
    x: f64,
) -> Result<DirectConditional, OracleError> {
    let pair = weak_operators(v, x)?;
    let rho = dm.to_matrix();
    let (p_plus, unnorm_plus) = branch_sandwich(&rho, &pair.p_plus);
    let (p_minus, unnorm_minus) = branch_sandwich(&rho, &pair.p_minus);
    if p_plus <= TOL_DEG {
        return Err(OracleError::DegenerateBranch { branch: '+', p: p_plus });
    }
    if p_minus <= TOL_DEG {
        return Err(OracleError::DegenerateBranch { branch: '-', p: p_minus });
    }
    let inv = |p: f64| C64::new(1.0 / p, 0.0);
    let state_plus = unnorm_plus.scale(inv(p_plus));
    let state_minus = unnorm_minus.scale(inv(p_minus));
    let (lam_pp, lam_pn) = state_plus.eigvals_hermitian();
    let (lam_mp, lam_mn) = state_minus.eigvals_hermitian();
    Ok(DirectConditional {
        outcome: ConditionalOutcome {
            p_plus,
            p_minus,
            lam_plus_pos: lam_pp,
            lam_plus_neg: lam_pn,
            lam_minus_pos: lam_mp,
            lam_minus_neg: lam_mn,
        },
        state_plus,
        state_minus,
    })
}

/// The conditional states in closed form (for cross-checks): the +x branch is
/// [(1 - s z tanh x) I + (r - c3 z tanh x) s3
///  - tanh x ((z1 a1 + z2 b2) s1 + (z2 a2 - z1 b1) s2)] / (2 (1 - s z tanh x)),
///
/// and the -x branch is its x -> -x image.
pub fn conditional_state_closed_form(
    p: &BlochX,
    z1: f64,
    z2: f64,
    z: f64,
    x: f64,
) -> (Mat2, Mat2) {
    let build = |t: f64| {
        let denom = 2.0 * (1.0 - p.s * z * t);
        let coef3 = p.r - p.c3 * z * t;
        let coef1 = -t * (z1 * p.c1.re + z2 * p.c2.im);
        let coef2 = -t * (z2 * p.c2.re - z1 * p.c1.im);
        let mut m = Mat2::identity().scale(C64::new(1.0 - p.s * z * t, 0.0));
        m = m.add(&Mat2::pauli(3).scale(C64::new(coef3, 0.0)));
        m = m.add(&Mat2::pauli(1).scale(C64::new(coef1, 0.0)));
        m = m.add(&Mat2::pauli(2).scale(C64::new(coef2, 0.0)));
        m.scale(C64::new(1.0 / denom, 0.0))
    };
    let t = x.tanh();
    (build(t), build(-t))
}

/// Deterministic Fibonacci-sphere directions: n points with even latitude
/// spacing and golden-angle longitude steps.
pub fn fibonacci_directions(n: usize) -> impl Iterator<Item = (f64, f64, f64)> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n).map(move |k| {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let radius = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden_angle * k as f64;
        (radius * phi.cos(), radius * phi.sin(), z)
    })
}

/// The direction-grid sizes searched at a given resolution: the Fibonacci
/// grid with resolution^2 points plus the coarser power-of-two ladder, so the
/// searched set only grows with resolution and grid minima shrink
/// monotonically.
fn ladder(resolution: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> =
        [16usize, 32, 64, 128].iter().filter(|&&r| r < resolution).map(|&r| r * r).collect();
    sizes.push(resolution * resolution);
    sizes
}

/// Averaged conditional entropy of a branch pair with the limit convention
/// for degenerate branches.
fn averaged_conditional_entropy(rho: &Mat4, pair: &WeakOperatorPair) -> f64 {
    let mut total = 0.0;
    for op in [&pair.p_plus, &pair.p_minus] {
        let (p, unnorm) = branch_sandwich(rho, op);
        if p > TOL_DEG {
            let (hi, lo) = unnorm.eigvals_hermitian();
            let gap = ((hi - lo) / p).clamp(0.0, 1.0);
            total += p * crate::entropy::entropic_e(gap).unwrap();
        }
    }
    total
}

/// Exhaustive minimization of S(A|{P^B(x)}) over the direction grid.
/// Returns the grid minimum and its (canonically lifted) argmin; ties go to
/// the lowest grid index. The result is an upper bound on the true minimum
/// and converges to it as the resolution grows.
pub fn brute_force_min_conditional_entropy(
    dm: &XDensityMatrix,
    x: f64,
    resolution: usize,
) -> Result<(f64, SU2Element), OracleError> {
    if resolution < 16 {
        return Err(OracleError::DomainError {
            what: format!("resolution {resolution} must be >= 16"),
        });
    }
    if x < 0.0 || !x.is_finite() {
        return Err(OracleError::DomainError { what: format!("strength x = {x} must be >= 0") });
    }
    let rho = dm.to_matrix();
    let mut best = f64::INFINITY;
    let mut best_v = SU2Element::identity();
    for n in ladder(resolution) {
        for (z1, z2, z) in fibonacci_directions(n) {
            let v = SU2Element::from_direction(z1, z2, z);
            let pair = weak_operators(&v, x)?;
            let s = averaged_conditional_entropy(&rho, &pair);
            if s < best {
                best = s;
                best_v = v;
            }
        }
    }
    Ok((best, best_v))
}
