//! The quadratic curvature term of Hamilton's identity for Einstein metrics,
//! `ΔRm + Q(Rm) = 2λ Rm`, and the sign constraints it forces at extremum points.
//!
//! Laplacian terms are never evaluated: at a minimum of a curvature quantity
//! they have a sign, which turns the identity into an algebraic inequality.

use nalgebra::Matrix6;

use crate::berger::{BergerForm, HalfSpectra};
use crate::error::{Error, Result};
use crate::tensor::{RiemannTensor4, BIVECTOR_BASIS, DIM};

/// `B_ijkl = Σ_{m,p} R_imjp R_kmlp` in an orthonormal frame.
pub fn quadratic_tensor(rm: &RiemannTensor4) -> [[[[f64; 4]; 4]; 4]; 4] {
    let c = rm.components();
    let mut b = [[[[0.0; 4]; 4]; 4]; 4];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut s = 0.0;
                    for m in 0..DIM {
                        for p in 0..DIM {
                            s += c[i][m][j][p] * c[k][m][l][p];
                        }
                    }
                    b[i][j][k][l] = s;
                }
            }
        }
    }
    b
}

fn combination(b: &[[[[f64; 4]; 4]; 4]; 4], i: usize, j: usize, k: usize, l: usize) -> f64 {
    b[i][j][k][l] - b[i][j][l][k] + b[i][k][j][l] - b[i][l][j][k]
}

/// `2(B_ijkl − B_ijlk + B_ikjl − B_iljk)`, the quadratic term `Q(Rm)_ijkl`.
/// Indices are 0-based.
pub fn b_combination(rm: &RiemannTensor4, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
    if let Some(&index) = [i, j, k, l].iter().find(|&&x| x >= DIM) {
        return Err(Error::IndexOutOfRange { index });
    }
    Ok(2.0 * combination(&quadratic_tensor(rm), i, j, k, l))
}

/// `Q(Rm)/2` viewed as a symmetric form on 2-forms, in the bivector basis.
/// On an eigenvector of the curvature operator in `Λ±` with eigenvalue `x`
/// it evaluates to `x² + 2yz`, where `y, z` are the other two eigenvalues on
/// the same half.
pub fn quadratic_operator(rm: &RiemannTensor4) -> Matrix6<f64> {
    let b = quadratic_tensor(rm);
    Matrix6::from_fn(|r, c| {
        let (i, j) = BIVECTOR_BASIS[r];
        let (k, l) = BIVECTOR_BASIS[c];
        combination(&b, i, j, k, l)
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticTerms {
    /// `Q(Rm)` at `(e1,e2,e1,e2)`, `(e1,e3,e1,e3)`, `(e1,e4,e1,e4)`.
    pub q_12: f64,
    pub q_13: f64,
    pub q_14: f64,
    /// `lamᵢ² + 2 lamⱼ lamₖ` on the self-dual eigenvectors.
    pub q_plus: [f64; 3],
    pub q_minus: [f64; 3],
}

fn pair_term(x: [f64; 3], i: usize) -> f64 {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    x[i] * x[i] + 2.0 * x[j] * x[k]
}

pub fn quadratic_terms(bf: &BergerForm) -> QuadraticTerms {
    let (a, b) = (bf.a(), bf.b());
    let q = |i: usize| 2.0 * (pair_term(a, i) + b[i] * b[i] + 2.0 * b[(i + 1) % 3] * b[(i + 2) % 3]);
    let (lam, mu) = (bf.lam(), bf.mu());
    QuadraticTerms {
        q_12: q(0),
        q_13: q(1),
        q_14: q(2),
        q_plus: std::array::from_fn(|i| pair_term(lam, i)),
        q_minus: std::array::from_fn(|i| pair_term(mu, i)),
    }
}

/// `λa₁ − (a₁² + b₁² + 2(a₂a₃ + b₂b₃))`. Nonnegative wherever the sectional
/// curvature attains its global minimum.
pub fn stationarity_margin_min_k(bf: &BergerForm) -> f64 {
    let (a, b) = (bf.a(), bf.b());
    bf.lambda() * a[0] - (a[0] * a[0] + b[0] * b[0] + 2.0 * (a[1] * a[2] + b[1] * b[2]))
}

/// `λ(mu₁ − lam₃) − (mu₁² + 2mu₂mu₃ − lam₃² − 2lam₁lam₂)`. Nonnegative where
/// `λ − lam₃ + mu₁` attains its global minimum.
pub fn stationarity_margin_three_sum(hs: &HalfSpectra) -> f64 {
    let (l, m) = (hs.lam, hs.mu);
    hs.lambda() * (m[0] - l[2]) - (pair_term(m, 0) - pair_term(l, 2))
}

/// The same constraint with the two halves exchanged (`λ − mu₃ + lam₁`).
pub fn stationarity_margin_three_sum_mirror(hs: &HalfSpectra) -> f64 {
    stationarity_margin_three_sum(&hs.swapped())
}
