//! Isotropic curvature searched directly over orthonormal four-frames.
//!
//! For a frame `(e_i, e_j, e_k, e_l)` the isotropic quantity is
//! `R_ikik + R_ilil + R_jkjk + R_jljl − 2 R_ijkl`. Frames come from a
//! low-discrepancy cover of `SO(4)` (a shifted Halton sequence pushed through
//! a pair of unit quaternions), the 24 coordinate permutations, and a final
//! Givens-rotation descent from the best sample. Reflections and role swaps
//! are handled by evaluating all three pairings with both signs of the
//! `R_ijkl` term.
//!
//! For an Einstein operator the minimum equals `2 · min(lam₁+lam₂, mu₁+mu₂)`.

use std::f64::consts::TAU;

use nalgebra::{Matrix4, Matrix6, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ConditionMargin;
use crate::tensor::{to_operator, wedge, RiemannTensor4};

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// Where the smallest isotropic value was found.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMinimum {
    pub value: f64,
    pub frame: Matrix4<f64>,
    pub pairing: [usize; 4],
    /// `true` when the `+2 R_ijkl` sign attains the minimum.
    pub flipped: bool,
    /// Sample index, `None` once the descent has moved the frame.
    pub sample: Option<usize>,
}

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while n > 0 {
        r += f * (n % base) as f64;
        n /= base;
        f *= inv;
    }
    r
}

fn unit_quaternion(u: [f64; 3]) -> [f64; 4] {
    let (s1, s2) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
    [
        s1 * (TAU * u[1]).sin(),
        s1 * (TAU * u[1]).cos(),
        s2 * (TAU * u[2]).sin(),
        s2 * (TAU * u[2]).cos(),
    ]
}

fn quat_mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    [
        p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
        p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
        p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
        p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
    ]
}

/// The rotation `x ↦ p x q̄` as a matrix.
fn rotation_from_quaternions(p: [f64; 4], q: [f64; 4]) -> Matrix4<f64> {
    let qbar = [q[0], -q[1], -q[2], -q[3]];
    let mut m = Matrix4::zeros();
    for col in 0..4 {
        let mut e = [0.0; 4];
        e[col] = 1.0;
        let img = quat_mul(quat_mul(p, e), qbar);
        for row in 0..4 {
            m[(row, col)] = img[row];
        }
    }
    m
}

fn sample_frame(index: usize, shift: &[f64; 6]) -> Matrix4<f64> {
    let n = index as u64 + 1;
    let u: [f64; 6] = std::array::from_fn(|d| (radical_inverse(n, HALTON_BASES[d]) + shift[d]).fract());
    rotation_from_quaternions(unit_quaternion([u[0], u[1], u[2]]), unit_quaternion([u[3], u[4], u[5]]))
}

fn permutation_frames() -> Vec<Matrix4<f64>> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        out.push(Matrix4::from_fn(|r, col| if p[col] == r { 1.0 } else { 0.0 }));
                    }
                }
            }
        }
    }
    out
}

/// Smallest isotropic value over the three pairings and both signs.
fn isotropic_min(op: &Matrix6<f64>, frame: &Matrix4<f64>) -> (f64, [usize; 4], bool) {
    let cols: [Vector4<f64>; 4] = std::array::from_fn(|i| frame.column(i).into_owned());
    let mut w = [[[0.0; 6]; 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            w[i][j] = wedge(&cols[i], &cols[j]);
            w[j][i] = w[i][j].map(|x| -x);
        }
    }
    let form = |x: &[f64; 6], y: &[f64; 6]| {
        let mut s = 0.0;
        for r in 0..6 {
            if x[r] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for c in 0..6 {
                row += op[(r, c)] * y[c];
            }
            s += x[r] * row;
        }
        s
    };
    let mut best = (f64::INFINITY, PAIRINGS[0], false);
    for p in PAIRINGS {
        let [i, j, k, l] = p;
        let lhs = form(&w[i][k], &w[i][k])
            + form(&w[i][l], &w[i][l])
            + form(&w[j][k], &w[j][k])
            + form(&w[j][l], &w[j][l]);
        let term = form(&w[i][j], &w[k][l]);
        for (value, flipped) in [(lhs - 2.0 * term, false), (lhs + 2.0 * term, true)] {
            if value < best.0 {
                best = (value, p, flipped);
            }
        }
    }
    best
}

fn givens(p: usize, q: usize, angle: f64) -> Matrix4<f64> {
    let mut g = Matrix4::identity();
    let (s, c) = angle.sin_cos();
    g[(p, p)] = c;
    g[(q, q)] = c;
    g[(p, q)] = -s;
    g[(q, p)] = s;
    g
}

fn descend(op: &Matrix6<f64>, start: FrameMinimum) -> FrameMinimum {
    let mut best = start;
    let mut step = 0.05;
    let mut rounds = 0;
    while step > 1e-9 && rounds < 20_000 {
        rounds += 1;
        let mut improved = false;
        for p in 0..4 {
            for q in (p + 1)..4 {
                for angle in [step, -step] {
                    let frame = best.frame * givens(p, q, angle);
                    let (value, pairing, flipped) = isotropic_min(op, &frame);
                    if value < best.value {
                        best = FrameMinimum {
                            value,
                            frame,
                            pairing,
                            flipped,
                            sample: None,
                        };
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Minimum isotropic value over sampled frames, deterministic in `seed` and
/// independent of the rayon thread count.
pub fn frame_minimum(rm: &RiemannTensor4, samples: usize, seed: u64) -> FrameMinimum {
    let op = *to_operator(rm).matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 6] = std::array::from_fn(|_| rng.gen::<f64>());
    let perms = permutation_frames();
    let total = perms.len() + samples;

    let frame_at = |idx: usize| {
        if idx < perms.len() {
            perms[idx]
        } else {
            sample_frame(idx - perms.len(), &shift)
        }
    };
    let (value, idx) = (0..total)
        .into_par_iter()
        .map(|idx| (isotropic_min(&op, &frame_at(idx)).0, idx))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |x, y| match x.0.total_cmp(&y.0) {
                std::cmp::Ordering::Less => x,
                std::cmp::Ordering::Greater => y,
                std::cmp::Ordering::Equal => {
                    if x.1 <= y.1 {
                        x
                    } else {
                        y
                    }
                }
            },
        );
    let frame = frame_at(idx);
    let (_, pairing, flipped) = isotropic_min(&op, &frame);
    descend(
        &op,
        FrameMinimum {
            value,
            frame,
            pairing,
            flipped,
            sample: Some(idx),
        },
    )
}

/// Isotropic-curvature margin from the frame definition, in the raw units of
/// `R_ikik + R_ilil + R_jkjk + R_jljl − 2R_ijkl` (twice the closed-form margin
/// for Einstein operators).
pub fn pic_margin_frames(rm: &RiemannTensor4, samples: usize, seed: u64) -> ConditionMargin {
    let min = frame_minimum(rm, samples, seed);
    let [i, j, k, l] = min.pairing.map(|x| x + 1);
    let origin = match min.sample {
        Some(s) if s < 24 => format!("permutation frame {s}"),
        Some(s) => format!("sample {}", s - 24),
        None => "refined frame".to_string(),
    };
    ConditionMargin {
        name: "pic (frames)".into(),
        margin: min.value,
        witness: format!(
            "{origin}, roles (i,j,k,l) = ({i},{j},{k},{l}), {} sign",
            if min.flipped { "+2R_ijkl" } else { "-2R_ijkl" }
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::berger::BergerForm;

    #[test]
    fn sampled_frames_are_rotations() {
        let shift = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        for idx in [0, 1, 17, 1000] {
            let q = sample_frame(idx, &shift);
            assert!((q.transpose() * q - Matrix4::identity()).amax() < 1e-14);
            assert!((q.determinant() - 1.0).abs() < 1e-14);
        }
        assert_eq!(permutation_frames().len(), 24);
    }

    #[test]
    fn halton_first_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn round_sphere_is_constant_over_frames() {
        let rm = RiemannTensor4::constant_curvature(1.0 / 3.0);
        let op = *to_operator(&rm).matrix();
        let shift = [0.3; 6];
        for idx in 0..50 {
            let (v, _, _) = isotropic_min(&op, &sample_frame(idx, &shift));
            assert!((v - 4.0 / 3.0).abs() < 1e-13);
        }
        assert!((pic_margin_frames(&rm, 200, 1).margin - 4.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_spaces_reach_zero() {
        for bf in [BergerForm::complex_projective_plane(1.0), BergerForm::product_of_spheres(1.0)] {
            let m = pic_margin_frames(&bf.tensor(), 1000, 5).margin;
            assert!(m.abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn thread_count_does_not_change_the_result() {
        let bf = BergerForm::from_half_spectra([-0.3, 0.5, 0.8], [0.0, 0.4, 0.6], 1e-12).unwrap();
        let q = sample_frame(7, &[0.9, 0.1, 0.4, 0.7, 0.2, 0.5]);
        let rm = bf.tensor().rotated(&q);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| frame_minimum(&rm, 5000, 11))
        };
        assert_eq!(run(1), run(4));
    }
}
