//! Algebraic curvature tensors on a four-dimensional inner product space.
//!
//! Everything here is expressed in an orthonormal frame with 0-based indices.
//! The sign convention is `K(e_i, e_j) = R(i, j, i, j)`, so the unit round
//! sphere has `R(0, 1, 0, 1) = 1`.
//!
//! Two-forms use the ordered basis
//! `(e1∧e2, e1∧e3, e1∧e4, e3∧e4, e4∧e2, e2∧e3)` with every element of unit
//! norm. With this ordering the Hodge star swaps the first and second halves
//! of the basis, and a Berger-form operator is literally `(A B; B A)`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix3, Matrix4, Matrix6, Vector4};

use crate::error::{Error, Result};

pub const DIM: usize = 4;

/// Default tolerance for symmetry and Einstein checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Ordered 2-form basis as 0-based index pairs.
pub const BIVECTOR_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Position of `e_i ∧ e_j` in [`BIVECTOR_BASIS`] together with the sign relating
/// the two. `None` when `i == j`.
pub fn bivector_index(i: usize, j: usize) -> Option<(usize, f64)> {
    BIVECTOR_BASIS.iter().enumerate().find_map(|(alpha, &(p, q))| {
        if (i, j) == (p, q) {
            Some((alpha, 1.0))
        } else if (i, j) == (q, p) {
            Some((alpha, -1.0))
        } else {
            None
        }
    })
}

/// Coefficients of `x ∧ y` in the ordered 2-form basis.
pub fn wedge(x: &Vector4<f64>, y: &Vector4<f64>) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (alpha, &(p, q)) in BIVECTOR_BASIS.iter().enumerate() {
        out[alpha] = x[p] * y[q] - x[q] * y[p];
    }
    out
}

pub type Components = [[[[f64; DIM]; DIM]; DIM]; DIM];

/// Riemann curvature tensor components `R(i, j, k, l)` in an orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannTensor4 {
    c: Components,
}

impl RiemannTensor4 {
    pub fn zero() -> Self {
        Self {
            c: [[[[0.0; DIM]; DIM]; DIM]; DIM],
        }
    }

    /// Constant sectional curvature `k`.
    pub fn constant_curvature(k: f64) -> Self {
        let mut c = [[[[0.0; DIM]; DIM]; DIM]; DIM];
        for (i, ci) in c.iter_mut().enumerate() {
            for (j, cj) in ci.iter_mut().enumerate() {
                for (kk, ck) in cj.iter_mut().enumerate() {
                    for (l, v) in ck.iter_mut().enumerate() {
                        *v = k * (delta(i, kk) * delta(j, l) - delta(i, l) * delta(j, kk));
                    }
                }
            }
        }
        Self { c }
    }

    /// Validates a raw component array against all curvature-tensor symmetries.
    pub fn from_components(c: Components, tol: f64) -> Result<Self> {
        let rm = Self { c };
        rm.validate(tol)?;
        Ok(rm)
    }

    /// Builds the tensor whose curvature operator is `op`.
    ///
    /// Fails when `op` is not symmetric or breaks the first Bianchi identity,
    /// which in dimension four is the single condition that the diagonal of the
    /// upper-right block sums to zero.
    pub fn from_operator(op: &CurvatureOperator6, tol: f64) -> Result<Self> {
        let bianchi = op.bianchi_residual();
        if bianchi.abs() > tol {
            return Err(Error::Symmetry {
                symmetry: "first Bianchi identity",
                residual: bianchi.abs(),
                tol,
            });
        }
        Ok(Self::from_matrix_unchecked(op.matrix()))
    }

    pub(crate) fn from_matrix_unchecked(m: &Matrix6<f64>) -> Self {
        let mut c = [[[[0.0; DIM]; DIM]; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                let Some((alpha, s1)) = bivector_index(i, j) else {
                    continue;
                };
                for k in 0..DIM {
                    for l in 0..DIM {
                        if let Some((beta, s2)) = bivector_index(k, l) {
                            c[i][j][k][l] = s1 * s2 * m[(alpha, beta)];
                        }
                    }
                }
            }
        }
        Self { c }
    }

    pub(crate) fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut c = [[[[0.0; DIM]; DIM]; DIM]; DIM];
        for (i, ci) in c.iter_mut().enumerate() {
            for (j, cj) in ci.iter_mut().enumerate() {
                for (k, ck) in cj.iter_mut().enumerate() {
                    for (l, v) in ck.iter_mut().enumerate() {
                        *v = f(i, j, k, l);
                    }
                }
            }
        }
        Self { c }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.c[i][j][k][l]
    }

    pub fn components(&self) -> &Components {
        &self.c
    }

    /// Largest violation of antisymmetry, pair symmetry and first Bianchi, by kind.
    pub fn symmetry_residuals(&self) -> [(&'static str, f64); 3] {
        let mut anti = 0.0f64;
        let mut pair = 0.0f64;
        let mut bianchi = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let r = self.c[i][j][k][l];
                        anti = anti
                            .max((r + self.c[j][i][k][l]).abs())
                            .max((r + self.c[i][j][l][k]).abs());
                        pair = pair.max((r - self.c[k][l][i][j]).abs());
                        bianchi = bianchi
                            .max((r + self.c[i][k][l][j] + self.c[i][l][j][k]).abs());
                    }
                }
            }
        }
        [
            ("antisymmetry", anti),
            ("pair symmetry", pair),
            ("first Bianchi identity", bianchi),
        ]
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        for (symmetry, residual) in self.symmetry_residuals() {
            if residual > tol || residual.is_nan() {
                return Err(Error::Symmetry {
                    symmetry,
                    residual,
                    tol,
                });
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `R(x, y, z, w)` for arbitrary vectors.
    pub fn eval(&self, x: &Vector4<f64>, y: &Vector4<f64>, z: &Vector4<f64>, w: &Vector4<f64>) -> f64 {
        let mut s = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..DIM {
                    for l in 0..DIM {
                        s += xy * z[k] * w[l] * self.c[i][j][k][l];
                    }
                }
            }
        }
        s
    }

    /// Sectional curvature of the plane spanned by `u` and `v`.
    ///
    /// Returns `None` for (numerically) parallel vectors.
    pub fn sectional_curvature(&self, u: &Vector4<f64>, v: &Vector4<f64>) -> Option<f64> {
        let area2 = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
        if area2 <= 1e-24 {
            return None;
        }
        Some(self.eval(u, v, u, v) / area2)
    }

    /// Components in the rotated frame `e'_a = Σ_i q[(i, a)] e_i`.
    pub fn rotated(&self, q: &Matrix4<f64>) -> Self {
        // one index at a time keeps this at 4·4⁵ multiplications
        let mut cur = self.c;
        for slot in 0..4 {
            let mut next = [[[[0.0; DIM]; DIM]; DIM]; DIM];
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        for l in 0..DIM {
                            let idx = [i, j, k, l];
                            let mut s = 0.0;
                            for m in 0..DIM {
                                let mut src = idx;
                                src[slot] = m;
                                s += q[(m, idx[slot])] * cur[src[0]][src[1]][src[2]][src[3]];
                            }
                            next[i][j][k][l] = s;
                        }
                    }
                }
            }
            cur = next;
        }
        Self { c: cur }
    }

    pub fn ricci(&self) -> SymmetricForm2 {
        ricci_contract(self)
    }

    pub fn scalar(&self) -> f64 {
        ricci_contract(self).trace()
    }

    pub fn operator(&self) -> CurvatureOperator6 {
        to_operator(self)
    }
}

impl Add for RiemannTensor4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j, k, l| self.c[i][j][k][l] + rhs.c[i][j][k][l])
    }
}

impl Sub for RiemannTensor4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j, k, l| self.c[i][j][k][l] - rhs.c[i][j][k][l])
    }
}

impl Mul<f64> for RiemannTensor4 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::from_fn(|i, j, k, l| s * self.c[i][j][k][l])
    }
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Symmetric bilinear form on the tangent space (metric, Ricci, traceless Ricci).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricForm2(Matrix4<f64>);

impl SymmetricForm2 {
    pub fn new(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let residual = (m - m.transpose()).amax();
        if residual > tol || residual.is_nan() {
            return Err(Error::Symmetry {
                symmetry: "symmetric form",
                residual,
                tol,
            });
        }
        Ok(Self(m))
    }

    /// The metric in an orthonormal frame.
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Self(Matrix4::from_diagonal(&Vector4::from(d)))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn traceless(&self) -> Self {
        Self(self.0 - Matrix4::identity() * (self.trace() / DIM as f64))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

/// `Ric(j, l) = Σ_i R(i, j, i, l)`.
pub fn ricci_contract(rm: &RiemannTensor4) -> SymmetricForm2 {
    let mut m = Matrix4::zeros();
    for j in 0..DIM {
        for l in 0..DIM {
            m[(j, l)] = (0..DIM).map(|i| rm.get(i, j, i, l)).sum();
        }
    }
    SymmetricForm2(m)
}

/// Kulkarni–Nomizu product
/// `(h ⊙ k)(i,j,k,l) = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il`.
pub fn kulkarni_nomizu(h: &SymmetricForm2, k: &SymmetricForm2) -> RiemannTensor4 {
    let (h, k) = (&h.0, &k.0);
    RiemannTensor4::from_fn(|i, j, p, q| {
        h[(i, p)] * k[(j, q)] + h[(j, q)] * k[(i, p)] - h[(i, q)] * k[(j, p)] - h[(j, p)] * k[(i, q)]
    })
}

/// `Rm = W + ½ Ric̊ ⊙ g + R/24 g ⊙ g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardDecomposition {
    pub weyl: RiemannTensor4,
    pub ric_part: RiemannTensor4,
    pub scalar_part: RiemannTensor4,
    pub scalar: f64,
}

impl StandardDecomposition {
    pub fn reconstruct(&self) -> RiemannTensor4 {
        self.weyl + self.ric_part + self.scalar_part
    }
}

pub fn standard_decompose(rm: &RiemannTensor4) -> StandardDecomposition {
    let g = SymmetricForm2::identity();
    let ric = ricci_contract(rm);
    let scalar = ric.trace();
    let n = DIM as f64;
    let ric_part = kulkarni_nomizu(&ric.traceless(), &g) * (1.0 / (n - 2.0));
    let scalar_part = kulkarni_nomizu(&g, &g) * (scalar / (2.0 * n * (n - 1.0)));
    let weyl = *rm - ric_part - scalar_part;
    StandardDecomposition {
        weyl,
        ric_part,
        scalar_part,
        scalar,
    }
}

/// The curvature operator on 2-forms in the ordered basis [`BIVECTOR_BASIS`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureOperator6(Matrix6<f64>);

impl CurvatureOperator6 {
    pub fn new(m: Matrix6<f64>, tol: f64) -> Result<Self> {
        let residual = (m - m.transpose()).amax();
        if residual > tol || residual.is_nan() {
            return Err(Error::Symmetry {
                symmetry: "operator symmetry",
                residual,
                tol,
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix6<f64>) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `R₁₂₃₄ + R₁₃₄₂ + R₁₄₂₃`, zero for a genuine curvature operator.
    pub fn bianchi_residual(&self) -> f64 {
        self.0[(0, 3)] + self.0[(1, 4)] + self.0[(2, 5)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 6] {
        let ev = self.0.symmetric_eigenvalues();
        let mut out = [0.0; 6];
        out.copy_from_slice(ev.as_slice());
        out.sort_by(f64::total_cmp);
        out
    }

    /// Matrix of the Hodge star in the ordered basis.
    pub fn hodge_star() -> Matrix6<f64> {
        let mut s = Matrix6::zeros();
        for i in 0..3 {
            s[(i, i + 3)] = 1.0;
            s[(i + 3, i)] = 1.0;
        }
        s
    }

    /// Largest entry of `[𝔯, ⋆]`.
    pub fn star_commutator(&self) -> f64 {
        let s = Self::hodge_star();
        (self.0 * s - s * self.0).amax()
    }

    fn block(&self, r: usize, c: usize) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(3 * r, 3 * c).into_owned()
    }
}

/// Matrix entries `⟨𝔯(e_i∧e_j), e_k∧e_l⟩ = R(i, j, k, l)`.
pub fn to_operator(rm: &RiemannTensor4) -> CurvatureOperator6 {
    let mut m = Matrix6::zeros();
    for (alpha, &(i, j)) in BIVECTOR_BASIS.iter().enumerate() {
        for (beta, &(k, l)) in BIVECTOR_BASIS.iter().enumerate() {
            m[(alpha, beta)] = rm.get(i, j, k, l);
        }
    }
    // symmetrize away rounding so downstream eigen-solvers see an exact symmetric matrix
    CurvatureOperator6((m + m.transpose()) * 0.5)
}

/// Curvature operator in the self-dual / anti-self-dual splitting.
///
/// Self-dual basis `(e12+e34)/√2, (e13+e42)/√2, (e14+e23)/√2`; the
/// anti-self-dual one uses minus signs. Reversing the orientation swaps
/// `w_plus` and `w_minus`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityBlocks {
    pub scalar: f64,
    pub w_plus: Matrix3<f64>,
    pub w_minus: Matrix3<f64>,
    /// Rows indexed by the self-dual basis, columns by the anti-self-dual one.
    pub off_diag: Matrix3<f64>,
}

impl DualityBlocks {
    /// `R/12 + W⁺`.
    pub fn half_plus(&self) -> Matrix3<f64> {
        self.w_plus + Matrix3::identity() * (self.scalar / 12.0)
    }

    /// `R/12 + W⁻`.
    pub fn half_minus(&self) -> Matrix3<f64> {
        self.w_minus + Matrix3::identity() * (self.scalar / 12.0)
    }

    pub fn einstein_residual(&self) -> f64 {
        self.off_diag.amax()
    }

    /// Back to the fixed 2-form basis.
    pub fn to_operator(&self) -> CurvatureOperator6 {
        let (p, m, o) = (self.half_plus(), self.half_minus(), self.off_diag);
        let mut out = Matrix6::zeros();
        out.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(&((p + m + o + o.transpose()) * 0.5));
        out.fixed_view_mut::<3, 3>(0, 3)
            .copy_from(&((p - m - o + o.transpose()) * 0.5));
        out.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&((p - m + o - o.transpose()) * 0.5));
        out.fixed_view_mut::<3, 3>(3, 3)
            .copy_from(&((p + m - o - o.transpose()) * 0.5));
        CurvatureOperator6(out)
    }
}

pub fn duality_blocks(op: &CurvatureOperator6) -> DualityBlocks {
    let (m11, m12, m21, m22) = (op.block(0, 0), op.block(0, 1), op.block(1, 0), op.block(1, 1));
    let plus = (m11 + m12 + m21 + m22) * 0.5;
    let minus = (m11 - m12 - m21 + m22) * 0.5;
    let off_diag = (m11 - m12 + m21 - m22) * 0.5;
    let scalar = 2.0 * op.trace();
    let shift = Matrix3::identity() * (scalar / 12.0);
    DualityBlocks {
        scalar,
        w_plus: plus - shift,
        w_minus: minus - shift,
        off_diag,
    }
}

/// Einstein constant `λ = R/4` when `max |Ric − λg| ≤ tol`.
pub fn is_einstein(rm: &RiemannTensor4, tol: f64) -> Option<f64> {
    let ric = ricci_contract(rm);
    let lambda = ric.trace() / DIM as f64;
    let residual = (ric.0 - Matrix4::identity() * lambda).amax();
    (residual <= tol).then_some(lambda)
}

/// Largest entry of the traceless Ricci tensor.
pub fn einstein_residual(rm: &RiemannTensor4) -> f64 {
    ricci_contract(rm).traceless().0.amax()
}
