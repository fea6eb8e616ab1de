// Independent reference computations for the integration tests. Nothing here
// calls the library's own closed forms.
#![allow(dead_code)]

use einstein4::tensor::{Components, RiemannTensor4};
use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = r.gen_range(f64::EPSILON..1.0);
    let v: f64 = r.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn random_vector(r: &mut ChaCha8Rng) -> Vector4<f64> {
    Vector4::from_fn(|_, _| gaussian(r))
}

/// Haar-ish random rotation from Gram-Schmidt on Gaussian columns.
pub fn random_rotation(r: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut q = Matrix4::zeros();
    for c in 0..4 {
        let mut v = random_vector(r);
        for p in 0..c {
            let col = q.column(p).clone_owned();
            v -= col * col.dot(&v);
        }
        q.set_column(c, &v.normalize());
    }
    if q.determinant() < 0.0 {
        let flipped = -q.column(0);
        q.set_column(0, &flipped);
    }
    q
}

pub fn random_symmetric(r: &mut ChaCha8Rng) -> Matrix4<f64> {
    let m = Matrix4::from_fn(|_, _| r.gen_range(-1.0..1.0));
    (m + m.transpose()) * 0.5
}

/// `R(u,v,u,v)` straight from the component array.
pub fn contract(c: &Components, u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s += c[i][j][k][l] * u[i] * v[j] * u[k] * v[l];
                }
            }
        }
    }
    s
}

fn orthonormal_frame(u: Vector4<f64>, v: Vector4<f64>) -> Matrix4<f64> {
    let mut basis: Vec<Vector4<f64>> = Vec::new();
    for cand in [u, v, Vector4::x(), Vector4::y(), Vector4::z(), Vector4::w()] {
        let mut w = cand;
        for b in &basis {
            w -= b * b.dot(&w);
        }
        if w.norm() > 1e-6 && basis.len() < 4 {
            basis.push(w.normalize());
        }
    }
    Matrix4::from_columns(&basis)
}

/// Sectional curvature of the plane spanned by the first two frame columns.
fn frame_k(c: &Components, f: &Matrix4<f64>) -> f64 {
    contract(c, &f.column(0).clone_owned(), &f.column(1).clone_owned())
}

fn givens(f: &Matrix4<f64>, p: usize, q: usize, t: f64) -> Matrix4<f64> {
    let mut g = *f;
    let (s, co) = t.sin_cos();
    let (cp, cq) = (f.column(p).clone_owned(), f.column(q).clone_owned());
    g.set_column(p, &(cp * co + cq * s));
    g.set_column(q, &(cq * co - cp * s));
    g
}

/// Local descent of `sign * K` by rotations mixing the plane with its complement.
fn polish(c: &Components, mut f: Matrix4<f64>, sign: f64) -> f64 {
    let mut best = sign * frame_k(c, &f);
    let mut step = 0.1;
    while step > 1e-10 {
        let mut improved = false;
        for (p, q) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            for t in [step, -step] {
                let g = givens(&f, p, q, t);
                let val = sign * frame_k(c, &g);
                if val < best {
                    best = val;
                    f = g;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    sign * best
}

/// Min and max sectional curvature: `planes` random planes, then local
/// polishing from the three best samples on each side.
pub fn sectional_extremes(rm: &RiemannTensor4, planes: usize, seed: u64) -> (f64, f64) {
    let c = rm.components();
    let mut r = rng(seed);
    let mut samples: Vec<(f64, Matrix4<f64>)> = (0..planes)
        .map(|_| {
            let f = orthonormal_frame(random_vector(&mut r), random_vector(&mut r));
            (frame_k(c, &f), f)
        })
        .collect();
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    let lo = samples[..3].iter().map(|s| polish(c, s.1, 1.0)).fold(f64::INFINITY, f64::min);
    let hi = samples[planes - 3..]
        .iter()
        .map(|s| polish(c, s.1, -1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Minimum sum over all `k`-element subsets, by enumeration.
pub fn min_subset_sum(values: &[f64; 6], k: usize) -> f64 {
    (0u32..64)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..6).filter(|i| m >> i & 1 == 1).map(|i| values[i]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Root of a sign-changing continuous function on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Σ_m Σ_p R(i,m,j,p) R(k,m,l,p)` straight from components.
pub fn hamilton_b(c: &Components, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let mut s = 0.0;
    for m in 0..4 {
        for p in 0..4 {
            s += c[i][m][j][p] * c[k][m][l][p];
        }
    }
    s
}

/// The combination `2(B_ijkl − B_ijlk + B_ikjl − B_iljk)`.
pub fn hamilton_combination(c: &Components, i: usize, j: usize, k: usize, l: usize) -> f64 {
    2.0 * (hamilton_b(c, i, j, k, l) - hamilton_b(c, i, j, l, k) + hamilton_b(c, i, k, j, l)
        - hamilton_b(c, i, l, j, k))
}

/// Eigenvalues of a Berger operator are `a_i ± b_i`.
pub fn berger_spectrum(a: [f64; 3], b: [f64; 3]) -> [f64; 6] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
