//! The constrained minimizations behind the sectional-curvature and
//! half-curvature bounds, all with `λ = 1`.
//!
//! Boxes are `[-3, 3]` throughout. That is no restriction for Berger
//! variables: `a₁ ≤ 1/3 ≤ a₃`, `|b₁| ≤ 1/3 − a₁`, and the stationarity or
//! positivity constraints keep every problem's feasible region inside
//! `a₁ ≥ −1`, hence `a₃ = 1 − a₁ − a₂ ≤ 3` and `|bᵢ| ≤ 2`.
//!
//! Problems whose feasible set is a thin sliver around the stationarity
//! surface are gridded over eigenvalue gaps instead (see [`gap_problem`]):
//! a coarse grid over raw Berger entries spends almost every point on the
//! Berger inequalities and misses the sliver entirely.

use crate::berger::{BergerForm, HalfSpectra};
use crate::hamilton::{stationarity_margin_min_k, stationarity_margin_three_sum, stationarity_margin_three_sum_mirror};
use crate::predicates::k_smallest_sum;

use super::engine::OptimizationProblem;

pub const BOX: f64 = 3.0;

/// Strict 3-positivity is imposed as `margin >= THREE_POSITIVE_MARGIN`; the
/// closed cone also contains `S² × S²` with `a₁ = 0`.
pub const THREE_POSITIVE_MARGIN: f64 = 1e-4;

/// `(14 − √19)/12`, the upper sectional bound in the pinching step.
pub fn pinching_upper() -> f64 {
    (14.0 - 19f64.sqrt()) / 12.0
}

/// `(5 − √19)/12`, the lower sectional bound it forces.
pub fn pinching_lower() -> f64 {
    (5.0 - 19f64.sqrt()) / 12.0
}

/// Lower curve `(2k − 1)/(5k² + 14k + 11)` in the ratio `k = a₂/a₁`.
pub fn three_positive_lower_curve(k: f64) -> f64 {
    (2.0 * k - 1.0) / (5.0 * k * k + 14.0 * k + 11.0)
}

/// Upper curve `(4k − √(8k² − 8k + 1))/(8k² + 8k − 1)`.
pub fn three_positive_upper_curve(k: f64) -> f64 {
    (4.0 * k - (8.0 * k * k - 8.0 * k + 1.0).sqrt()) / (8.0 * k * k + 8.0 * k - 1.0)
}

/// The other root `(4k + √(8k² − 8k + 1))/(8k² + 8k − 1)`.
pub fn three_positive_other_root(k: f64) -> f64 {
    (4.0 * k + (8.0 * k * k - 8.0 * k + 1.0).sqrt()) / (8.0 * k * k + 8.0 * k - 1.0)
}

/// `½(2L + 1 − √(12L² + 4L + 1))`, the lower bound for the smallest half-Weyl
/// eigenvalue when the largest is `L`.
pub fn half_weyl_analytic(l: f64) -> f64 {
    0.5 * (2.0 * l + 1.0 - (12.0 * l * l + 4.0 * l + 1.0).sqrt())
}

fn bf(v: &[f64]) -> BergerForm {
    BergerForm::from_parts_unchecked([v[0], v[1], v[2]], [v[3], v[4], v[5]], 1.0)
}

fn bf_gap(v: &[f64]) -> BergerForm {
    BergerForm::from_parts_unchecked([v[10], v[11], v[12]], [v[13], v[14], v[15]], 1.0)
}

fn hs(v: &[f64]) -> HalfSpectra {
    HalfSpectra {
        lam: [v[0], v[1], v[2]],
        mu: [v[3], v[4], v[5]],
    }
}

/// Variables `a1, a2, a3, b1, b2, b3` with the trace conditions substituted
/// and the Berger inequalities `|bⱼ − bᵢ| ≤ aⱼ − aᵢ` as constraints.
pub fn berger_problem(name: &str) -> OptimizationProblem {
    OptimizationProblem::new(name)
        .var("a1", -BOX, BOX)
        .var("a2", -BOX, BOX)
        .affine("a3", 1.0, &[("a1", -1.0), ("a2", -1.0)], -BOX, BOX)
        .var("b1", -BOX, BOX)
        .var("b2", -BOX, BOX)
        .affine("b3", 0.0, &[("b1", -1.0), ("b2", -1.0)], -BOX, BOX)
        .constraint("|b2 - b1| <= a2 - a1", |v| v[1] - v[0] - (v[4] - v[3]).abs())
        .constraint("|b3 - b1| <= a3 - a1", |v| v[2] - v[0] - (v[5] - v[3]).abs())
        .constraint("|b3 - b2| <= a3 - a2", |v| v[2] - v[1] - (v[5] - v[4]).abs())
}

/// Ascending triples with sum 1 written as `(t, t + p, t + p + q)` with
/// `p, q >= 0`, so the ordering and trace conditions hold by construction.
/// Free variables `pl, ql, pm, qm`; then `lam1..3, mu1..3` and the Berger
/// entries `a1..3, b1..3` (indices 4..16). Every Berger inequality holds
/// identically.
pub fn gap_problem(name: &str) -> OptimizationProblem {
    let third = 1.0 / 3.0;
    let mut p = OptimizationProblem::new(name)
        .var("pl", 0.0, 2.0 * BOX)
        .var("ql", 0.0, 2.0 * BOX)
        .var("pm", 0.0, 2.0 * BOX)
        .var("qm", 0.0, 2.0 * BOX);
    for (x, gp, gq) in [("lam", "pl", "ql"), ("mu", "pm", "qm")] {
        p = p
            .affine(&format!("{x}1"), third, &[(gp, -2.0 * third), (gq, -third)], -BOX, BOX)
            .affine(&format!("{x}2"), third, &[(gp, third), (gq, -third)], -BOX, BOX)
            .affine(&format!("{x}3"), third, &[(gp, third), (gq, 2.0 * third)], -BOX, BOX);
    }
    for i in 1..=3 {
        let (l, m) = (format!("lam{i}"), format!("mu{i}"));
        p = p.affine(&format!("a{i}"), 0.0, &[(&l, 0.5), (&m, 0.5)], -BOX, BOX);
    }
    for i in 1..=3 {
        let (l, m) = (format!("lam{i}"), format!("mu{i}"));
        p = p.affine(&format!("b{i}"), 0.0, &[(&l, 0.5), (&m, -0.5)], -BOX, BOX);
    }
    p
}

/// Full assignment of [`gap_problem`] for ascending `lam`, `mu` with sum 1.
pub fn gap_point(lam: [f64; 3], mu: [f64; 3]) -> Vec<f64> {
    let mut v = vec![lam[1] - lam[0], lam[2] - lam[1], mu[1] - mu[0], mu[2] - mu[1]];
    v.extend(lam);
    v.extend(mu);
    v.extend((0..3).map(|i| (lam[i] + mu[i]) / 2.0));
    v.extend((0..3).map(|i| (lam[i] - mu[i]) / 2.0));
    v
}

/// Variables `lam1..3, mu1..3`, each triple ascending with sum 1.
pub fn half_spectra_problem(name: &str) -> OptimizationProblem {
    OptimizationProblem::new(name)
        .var("lam1", -BOX, BOX)
        .var("lam2", -BOX, BOX)
        .affine("lam3", 1.0, &[("lam1", -1.0), ("lam2", -1.0)], -BOX, BOX)
        .var("mu1", -BOX, BOX)
        .var("mu2", -BOX, BOX)
        .affine("mu3", 1.0, &[("mu1", -1.0), ("mu2", -1.0)], -BOX, BOX)
        .constraint("lam1 <= lam2", |v| v[1] - v[0])
        .constraint("lam2 <= lam3", |v| v[2] - v[1])
        .constraint("mu1 <= mu2", |v| v[4] - v[3])
        .constraint("mu2 <= mu3", |v| v[5] - v[4])
}

pub fn lower_curve_problem() -> OptimizationProblem {
    OptimizationProblem::new("min over 1 <= k <= 4 of (2k-1)/(5k^2+14k+11)")
        .var("k", 1.0, 4.0)
        .minimize(|v| three_positive_lower_curve(v[0]))
}

/// `min a₁` over 3-positive forms at a global sectional minimum.
pub fn three_positive_problem(margin: f64) -> OptimizationProblem {
    gap_problem("3-positive: min a1")
        .constraint("3-positive margin >= delta", move |v| k_smallest_sum(&bf_gap(v), 3) - margin)
        .constraint("stationarity at min K", |v| stationarity_margin_min_k(&bf_gap(v)))
        .minimize(|v| v[10])
}

/// The inequalities the 4-positive argument actually uses: the stationarity
/// inequality with the `b`-terms bounded below by `−½(a₃ − a₂)²`, together
/// with `a₂ ≥ −a₁` and `a₃ ≤ 1`.
pub fn four_positive_chain_problem() -> OptimizationProblem {
    OptimizationProblem::new("4-positive: min a1 (b-terms bounded)")
        .var("a1", -BOX, BOX)
        .var("a2", -BOX, BOX)
        .affine("a3", 1.0, &[("a1", -1.0), ("a2", -1.0)], -BOX, BOX)
        .constraint("a1 <= a2", |v| v[1] - v[0])
        .constraint("a2 <= a3", |v| v[2] - v[1])
        .constraint("a1 + a2 >= 0", |v| v[0] + v[1])
        .constraint("a3 <= 1", |v| 1.0 - v[2])
        .constraint("a1 >= a1^2 + 2a2a3 - (a3-a2)^2/2", |v| {
            let (a1, a2, a3) = (v[0], v[1], v[2]);
            a1 - (a1 * a1 + 2.0 * a2 * a3 - 0.5 * (a3 - a2) * (a3 - a2))
        })
        .minimize(|v| v[0])
}

/// All Berger variables, `a₁ + a₂ ≥ 0`, and optionally the exact
/// stationarity inequality.
pub fn four_positive_problem(stationarity: bool) -> OptimizationProblem {
    let name = if stationarity {
        "4-positive: min a1 (all Berger variables)"
    } else {
        "4-positive: min a1 (no stationarity)"
    };
    let p = berger_problem(name).constraint("a1 + a2 >= 0", |v| v[0] + v[1]);
    let p = if stationarity {
        p.constraint("stationarity at min K", |v| stationarity_margin_min_k(&bf(v)))
    } else {
        p
    };
    p.minimize(|v| v[0])
}

pub fn pinching_step1_problem() -> OptimizationProblem {
    let upper = pinching_upper();
    gap_problem("pinching step 1: min a1")
        .constraint("a3 <= (14-sqrt19)/12", move |v| upper - v[12])
        .constraint("stationarity at min K", |v| stationarity_margin_min_k(&bf_gap(v)))
        .minimize(|v| v[10])
}

/// Minimize `1 + mu₁ − lam₃`, or with `mirror` the swapped `1 + lam₁ − mu₃`.
pub fn pinching_step2_problem(mirror: bool) -> OptimizationProblem {
    let (upper, lower) = (2.0 * pinching_upper(), 2.0 * pinching_lower());
    let name = if mirror {
        "pinching step 2 (mirror): min 1 + lam1 - mu3"
    } else {
        "pinching step 2: min 1 + mu1 - lam3"
    };
    let p = half_spectra_problem(name)
        .constraint("lam3 + mu3 <= (14-sqrt19)/6", move |v| upper - v[2] - v[5])
        .constraint("lam1 + mu1 >= (5-sqrt19)/6", move |v| v[0] + v[3] - lower);
    if mirror {
        p.constraint("stationarity at min of 1 + lam1 - mu3", |v| {
            stationarity_margin_three_sum_mirror(&hs(v))
        })
        .minimize(|v| 1.0 + v[0] - v[5])
    } else {
        p.constraint("stationarity at min of 1 + mu1 - lam3", |v| stationarity_margin_three_sum(&hs(v)))
            .minimize(|v| 1.0 + v[3] - v[2])
    }
}

/// Smallest half-Weyl eigenvalue `w1` with the largest fixed at `l` and
/// `w2 = −l − w1`, subject to `(1/3 + w₁)² + 2(1/3 + w₂)(1/3 + l) ≤ 1/3 + w₁`.
/// With `ordered` the constraint `w1 <= w2` is added as well.
pub fn half_weyl_problem(l: f64, ordered: bool) -> OptimizationProblem {
    let name = if ordered {
        format!("half Weyl: min w1 at w3 = {l} (ordered)")
    } else {
        format!("half Weyl: min w1 at w3 = {l}")
    };
    let third = 1.0 / 3.0;
    // traceless with largest eigenvalue l puts w1 in [-2l, l]; for l < 0 the
    // reversed box is kept so the constraints report infeasibility
    let p = OptimizationProblem::new(name)
        .var("w1", (-2.0 * l).min(l), (-2.0 * l).max(l))
        .affine("w2", -l, &[("w1", -1.0)], -BOX, BOX)
        .constraint("w1 <= w3", move |v| l - v[0])
        .constraint("w2 <= w3", move |v| l - v[1])
        .constraint("stationarity at min of lam1", move |v| {
            let x = third + v[0];
            x - (x * x + 2.0 * (third + v[1]) * (third + l))
        });
    let p = if ordered {
        p.constraint("w1 <= w2", |v| v[1] - v[0])
    } else {
        p
    };
    p.minimize(|v| v[0])
}
