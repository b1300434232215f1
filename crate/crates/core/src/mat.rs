//! Minimal fixed-size complex linear algebra: 2x2 and 4x4 matrices, Kronecker
//! products, partial traces and a Jacobi eigensolver for Hermitian 4x4
//! matrices. Everything here is hand-rolled on purpose — the matrices are tiny
//! and the operator-level oracle must not share code with the closed-form
//! paths it validates.

use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

/// A 4x4 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Mat2([[C64::new(a, 0.0), ZERO], [ZERO, C64::new(b, 0.0)]])
    }

    /// Pauli matrices sigma_1, sigma_2, sigma_3.
    pub fn pauli(i: usize) -> Self {
        match i {
            1 => Mat2([[ZERO, ONE], [ONE, ZERO]]),
            2 => Mat2([[ZERO, -I], [I, ZERO]]),
            3 => Mat2([[ONE, ZERO], [ZERO, -ONE]]),
            _ => panic!("pauli index must be 1, 2 or 3"),
        }
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c] * k;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat2) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += other.0[r][c];
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat2) -> Self {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = ZERO;
                for k in 0..2 {
                    acc += self.0[r][k] * other.0[k][c];
                }
                out.0[r][c] = acc;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut m = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, larger first.
    pub fn eigvals_hermitian(&self) -> (f64, f64) {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b2 = self.0[0][1].norm_sqr();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b2).sqrt();
        (mean + disc, mean - disc)
    }
}

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut out = Mat4::zero();
        for k in 0..4 {
            out.0[k][k] = ONE;
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Mat4::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[r][c] * k;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat4) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] += other.0[r][c];
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat4) -> Self {
        let mut out = Mat4::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.0[r][k] * other.0[k][c];
                }
                out.0[r][c] = acc;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Mat4::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut m = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                m = m.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of a Hermitian 4x4 matrix via cyclic complex Jacobi
    /// rotations. Returned in descending order.
    pub fn eigvals_hermitian(&self) -> [f64; 4] {
        let mut a = *self;
        // Symmetrize away rounding noise so the rotations stay unitary.
        let adj = a.adjoint();
        for r in 0..4 {
            for c in 0..4 {
                a.0[r][c] = 0.5 * (a.0[r][c] + adj.0[r][c]);
            }
        }
        for _sweep in 0..64 {
            let mut off = 0.0f64;
            for r in 0..4 {
                for c in (r + 1)..4 {
                    off = off.max(a.0[r][c].norm());
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..4 {
                for q in (p + 1)..4 {
                    let apq = a.0[p][q];
                    let mag = apq.norm();
                    if mag < 1e-18 {
                        continue;
                    }
                    // Absorb the phase into row/column q so the pivot is
                    // real, then apply a real rotation.
                    let phase = apq / mag;
                    for k in 0..4 {
                        a.0[q][k] *= phase;
                        a.0[k][q] *= phase.conj();
                    }
                    let app = a.0[p][p].re;
                    let aqq = a.0[q][q].re;
                    let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
                    let c = theta.cos();
                    let s = theta.sin();
                    for k in 0..4 {
                        let rp = a.0[p][k] * c + a.0[q][k] * s;
                        let rq = -a.0[p][k] * s + a.0[q][k] * c;
                        a.0[p][k] = rp;
                        a.0[q][k] = rq;
                    }
                    for k in 0..4 {
                        let cp = a.0[k][p] * c + a.0[k][q] * s;
                        let cq = -a.0[k][p] * s + a.0[k][q] * c;
                        a.0[k][p] = cp;
                        a.0[k][q] = cq;
                    }
                }
            }
        }
        let mut vals = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re, a.0[3][3].re];
        vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
        vals
    }
}

/// Kronecker product `a (x) b` of two single-qubit operators.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zero();
    for ra in 0..2 {
        for ca in 0..2 {
            for rb in 0..2 {
                for cb in 0..2 {
                    out.0[2 * ra + rb][2 * ca + cb] = a.0[ra][ca] * b.0[rb][cb];
                }
            }
        }
    }
    out
}

/// Partial trace over the second (B) qubit: (tr_B M)_{ij} = sum_k M_{ik,jk}.
pub fn partial_trace_b(m: &Mat4) -> Mat2 {
    let mut out = Mat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = m.0[2 * i][2 * j] + m.0[2 * i + 1][2 * j + 1];
        }
    }
    out
}

/// Partial trace over the first (A) qubit.
pub fn partial_trace_a(m: &Mat4) -> Mat2 {
    let mut out = Mat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = m.0[i][j] + m.0[2 + i][2 + j];
        }
    }
    out
}
