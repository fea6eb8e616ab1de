//! Berger normal form of an Einstein curvature operator.
//!
//! In a suitable orthonormal frame an Einstein operator is `(A B; B A)` with
//! `A = diag(a)`, `B = diag(b)`. The half operators `R/12 + W±` then have
//! eigenvalues `lam = a + b` and `mu = a − b`, both ascending.

use nalgebra::{Matrix3, Matrix6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{
    duality_blocks, to_operator, CurvatureOperator6, DualityBlocks, RiemannTensor4, DEFAULT_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BergerForm {
    a: [f64; 3],
    b: [f64; 3],
    lambda: f64,
}

impl BergerForm {
    /// Checks every admissibility constraint at `tol`, scaled by `max(1, λ)`.
    pub fn new(a: [f64; 3], b: [f64; 3], lambda: f64, tol: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveLambda { lambda });
        }
        let bf = Self { a, b, lambda };
        if let Some((constraint, excess)) = bf.worst_violation(tol * lambda.max(1.0)) {
            return Err(Error::InvalidBerger { constraint, excess });
        }
        Ok(bf)
    }

    /// Builds the form from ascending half spectra of equal sum.
    pub fn from_half_spectra(lam: [f64; 3], mu: [f64; 3], tol: f64) -> Result<Self> {
        let lambda = (lam.iter().sum::<f64>() + mu.iter().sum::<f64>()) / 2.0;
        let a = [0, 1, 2].map(|i| (lam[i] + mu[i]) / 2.0);
        let b = [0, 1, 2].map(|i| (lam[i] - mu[i]) / 2.0);
        Self::new(a, b, lambda, tol)
    }

    /// No admissibility checks; for optimizer constraint evaluation.
    pub(crate) fn from_parts_unchecked(a: [f64; 3], b: [f64; 3], lambda: f64) -> Self {
        Self { a, b, lambda }
    }

    /// Round sphere with `Ric = λ g`.
    pub fn round_sphere(lambda: f64) -> Self {
        let t = lambda / 3.0;
        Self {
            a: [t; 3],
            b: [0.0; 3],
            lambda,
        }
    }

    /// Fubini–Study metric with `Ric = λ g`.
    pub fn complex_projective_plane(lambda: f64) -> Self {
        let s = lambda / 6.0;
        Self {
            a: [s, s, 4.0 * s],
            b: [-s, -s, 2.0 * s],
            lambda,
        }
    }

    /// Product of two round 2-spheres with `Ric = λ g`.
    pub fn product_of_spheres(lambda: f64) -> Self {
        Self {
            a: [0.0, 0.0, lambda],
            b: [0.0; 3],
            lambda,
        }
    }

    pub fn a(&self) -> [f64; 3] {
        self.a
    }

    pub fn b(&self) -> [f64; 3] {
        self.b
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Every entry multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a: self.a.map(|x| x * c),
            b: self.b.map(|x| x * c),
            lambda: self.lambda * c,
        }
    }

    /// The same form rescaled to `λ = 1`.
    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.lambda)
    }

    pub fn lam(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.a[i] + self.b[i])
    }

    pub fn mu(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.a[i] - self.b[i])
    }

    /// The six operator eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 6] {
        let (lam, mu) = (self.lam(), self.mu());
        let mut ev = [lam[0], lam[1], lam[2], mu[0], mu[1], mu[2]];
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// All constraint residuals as `(name, amount by which it fails)`; negative
    /// or zero means satisfied.
    pub fn constraint_excesses(&self) -> [(&'static str, f64); 7] {
        let (a, b, lambda) = (self.a, self.b, self.lambda);
        [
            ("a1 <= a2", a[0] - a[1]),
            ("a2 <= a3", a[1] - a[2]),
            ("a1 + a2 + a3 = lambda", (a.iter().sum::<f64>() - lambda).abs()),
            ("b1 + b2 + b3 = 0", b.iter().sum::<f64>().abs()),
            ("|b2 - b1| <= a2 - a1", (b[1] - b[0]).abs() - (a[1] - a[0])),
            ("|b3 - b1| <= a3 - a1", (b[2] - b[0]).abs() - (a[2] - a[0])),
            ("|b3 - b2| <= a3 - a2", (b[2] - b[1]).abs() - (a[2] - a[1])),
        ]
    }

    fn worst_violation(&self, tol: f64) -> Option<(&'static str, f64)> {
        self.constraint_excesses()
            .into_iter()
            .filter(|(_, excess)| *excess > tol || excess.is_nan())
            .reduce(|worst, c| if c.1.total_cmp(&worst.1).is_gt() { c } else { worst })
    }

    pub fn is_admissible(&self, tol: f64) -> bool {
        self.lambda > 0.0 && self.worst_violation(tol).is_none()
    }

    pub fn operator(&self) -> CurvatureOperator6 {
        berger_to_operator(self)
    }

    /// The curvature tensor in the Berger frame.
    pub fn tensor(&self) -> RiemannTensor4 {
        // b1 + b2 + b3 = 0 makes the Bianchi check exact up to rounding
        RiemannTensor4::from_matrix_unchecked(berger_to_operator(self).matrix())
    }

    /// Extracts the form from an arbitrary Einstein tensor.
    pub fn from_tensor(rm: &RiemannTensor4, tol: f64) -> Result<Self> {
        extract_berger(&duality_blocks(&to_operator(rm)), tol)
    }
}

/// Eigenvalues of `R/12 + W⁺` (`lam`) and `R/12 + W⁻` (`mu`), each ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfSpectra {
    pub lam: [f64; 3],
    pub mu: [f64; 3],
}

impl HalfSpectra {
    /// Common trace `λ` of the two half operators.
    pub fn lambda(&self) -> f64 {
        (self.lam.iter().sum::<f64>() + self.mu.iter().sum::<f64>()) / 2.0
    }

    pub fn swapped(&self) -> Self {
        Self {
            lam: self.mu,
            mu: self.lam,
        }
    }
}

fn sorted_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let sym = (m + m.transpose()) * 0.5;
    let ev = sym.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2]];
    out.sort_by(f64::total_cmp);
    out
}

/// Berger form of an Einstein operator from its duality blocks.
///
/// The i-th smallest eigenvalue of `R/12 + W⁺` is paired with the i-th
/// smallest of `R/12 + W⁻`; that is the only pairing with both `a + b` and
/// `a − b` ascending.
pub fn extract_berger(blocks: &DualityBlocks, tol: f64) -> Result<BergerForm> {
    let residual = blocks.einstein_residual();
    if residual > tol || residual.is_nan() {
        return Err(Error::NotEinstein { residual, tol });
    }
    let lam = sorted_eigenvalues(&blocks.half_plus());
    let mu = sorted_eigenvalues(&blocks.half_minus());
    let lambda = blocks.scalar / 4.0;
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda { lambda });
    }
    let a = [0, 1, 2].map(|i| (lam[i] + mu[i]) / 2.0);
    let b = [0, 1, 2].map(|i| (lam[i] - mu[i]) / 2.0);
    BergerForm::new(a, b, lambda, tol.max(DEFAULT_TOL))
}

/// `(A B; B A)` with `A = diag(a)`, `B = diag(b)`.
pub fn berger_to_operator(bf: &BergerForm) -> CurvatureOperator6 {
    let mut m = Matrix6::zeros();
    for i in 0..3 {
        m[(i, i)] = bf.a[i];
        m[(i + 3, i + 3)] = bf.a[i];
        m[(i, i + 3)] = bf.b[i];
        m[(i + 3, i)] = bf.b[i];
    }
    CurvatureOperator6::from_matrix_unchecked(m)
}

pub fn half_spectra(bf: &BergerForm) -> HalfSpectra {
    HalfSpectra {
        lam: bf.lam(),
        mu: bf.mu(),
    }
}

/// Deterministic stream of admissible Berger forms.
///
/// `lam` and `mu` are independent ascending triples, uniform on the plane
/// `{sum = λ}` restricted to the box `[−box_scale·λ, box_scale·λ]³`. Any such
/// pair gives an admissible form, so no sample is ever rejected downstream.
#[derive(Clone, Debug)]
pub struct BergerSampler {
    rng: ChaCha8Rng,
    lambda: f64,
    box_scale: f64,
}

impl BergerSampler {
    pub const DEFAULT_BOX_SCALE: f64 = 2.0;

    pub fn new(seed: u64, lambda: f64) -> Self {
        Self::with_box(seed, lambda, Self::DEFAULT_BOX_SCALE)
    }

    pub fn with_box(seed: u64, lambda: f64, box_scale: f64) -> Self {
        assert!(lambda > 0.0, "sampler needs a positive Einstein constant");
        assert!(box_scale >= 1.0, "box must contain the simplex centre");
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            lambda,
            box_scale,
        }
    }

    fn triple(&mut self) -> [f64; 3] {
        let h = self.box_scale * self.lambda;
        loop {
            let x = self.rng.gen_range(-h..=h);
            let y = self.rng.gen_range(-h..=h);
            let z = self.lambda - x - y;
            if z.abs() <= h {
                let mut t = [x, y, z];
                t.sort_by(f64::total_cmp);
                return t;
            }
        }
    }
}

impl Iterator for BergerSampler {
    type Item = BergerForm;

    fn next(&mut self) -> Option<BergerForm> {
        let lam = self.triple();
        let mu = self.triple();
        let a = [0, 1, 2].map(|i| (lam[i] + mu[i]) / 2.0);
        let b = [0, 1, 2].map(|i| (lam[i] - mu[i]) / 2.0);
        Some(BergerForm {
            a,
            b,
            lambda: self.lambda,
        })
    }
}

pub fn sample_admissible(seed: u64, lambda: f64, count: usize) -> Vec<BergerForm> {
    BergerSampler::new(seed, lambda).take(count).collect()
}
