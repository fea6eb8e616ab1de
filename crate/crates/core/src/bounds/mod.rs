//! Quantitative bounds reproduced by constrained minimization.

mod engine;
mod problems;

use std::fmt;
use std::str::FromStr;

pub use engine::{
    minimize, EngineConfig, OptimizationProblem, OptimizationResult, DEFAULT_DEPTH, DEFAULT_FEAS_TOL, DEFAULT_GRID,
};
pub use problems::*;

use crate::error::{Error, Result};

/// The half-Weyl problem is one-dimensional; the extra rounds are cheap and
/// needed for `1e-6` agreement with the closed form.
pub const HALF_WEYL_DEPTH: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct ThreePositiveBound {
    /// `min (2k−1)/(5k²+14k+11)` over `k ∈ [1, 4]`.
    pub curve_min: OptimizationResult,
    pub lower_at_4: f64,
    /// Where the upper curve drops below the lower one; the admissible
    /// window is `[1, crossing]`.
    pub crossing: f64,
    /// `min ((2k+1)·r(k) − 1)` for the discarded root `r(k)` over `k > 1`;
    /// positive means that branch forces `a₂ > a₃`.
    pub other_root_gap: OptimizationResult,
    /// Direct minimization of `a₁` over all Berger variables.
    pub direct: OptimizationResult,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourPositiveBound {
    pub chain: OptimizationResult,
    pub full: OptimizationResult,
    pub without_stationarity: OptimizationResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PinchingStep2 {
    pub direct: OptimizationResult,
    pub mirror: OptimizationResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfWeylBound {
    pub l: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub result: OptimizationResult,
    /// Whether the minimizer also satisfies `w1 <= w2` (to `1e-6`). The
    /// stationarity set in `w1` is an interval, so this decides whether the
    /// fully ordered problem is feasible at all.
    pub ordered_feasible: bool,
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
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

/// Lower bound for `K` under 3-positivity, by the `k = a₂/a₁` curves and by
/// direct search.
pub fn three_positive_bound(cfg: EngineConfig) -> Result<ThreePositiveBound> {
    let curve_min = minimize(&lower_curve_problem(), cfg.grid, cfg.depth)?;
    let gap = |k: f64| three_positive_upper_curve(k) - three_positive_lower_curve(k);
    // first sign change on a fine scan, then bisection
    let n = 3000;
    let ks: Vec<f64> = (0..=n).map(|i| 1.0 + 3.0 * i as f64 / n as f64).collect();
    let crossing = ks
        .windows(2)
        .find(|w| gap(w[0]) > 0.0 && gap(w[1]) <= 0.0)
        .map_or(f64::NAN, |w| bisect(gap, w[0], w[1]));
    let other = OptimizationProblem::new("discarded root: min (2k+1) r(k) - 1 over k > 1")
        .var("k", 1.001, 100.0)
        .minimize(|v| (2.0 * v[0] + 1.0) * three_positive_other_root(v[0]) - 1.0);
    let other_root_gap = minimize(&other, cfg.grid, cfg.depth)?;
    let direct = minimize(&three_positive_problem(THREE_POSITIVE_MARGIN), cfg.grid, cfg.depth)?;
    Ok(ThreePositiveBound {
        curve_min,
        lower_at_4: three_positive_lower_curve(4.0),
        crossing,
        other_root_gap,
        direct,
        margin: THREE_POSITIVE_MARGIN,
    })
}

/// Lower bound for `K` under 4-positivity.
pub fn four_positive_bound(cfg: EngineConfig) -> Result<FourPositiveBound> {
    Ok(FourPositiveBound {
        chain: minimize(&four_positive_chain_problem(), cfg.grid, cfg.depth)?,
        full: minimize(&four_positive_problem(true), cfg.grid, cfg.depth)?,
        without_stationarity: minimize(&four_positive_problem(false), cfg.grid, cfg.depth)?,
    })
}

pub fn pinching_step1(cfg: EngineConfig) -> Result<OptimizationResult> {
    minimize(&pinching_step1_problem(), cfg.grid, cfg.depth)
}

pub fn pinching_step2(cfg: EngineConfig) -> Result<PinchingStep2> {
    Ok(PinchingStep2 {
        direct: minimize(&pinching_step2_problem(false), cfg.grid, cfg.depth)?,
        mirror: minimize(&pinching_step2_problem(true), cfg.grid, cfg.depth)?,
    })
}

pub fn half_weyl_bound_with(l: f64, cfg: EngineConfig) -> Result<HalfWeylBound> {
    let result = minimize(&half_weyl_problem(l, false), cfg.grid, cfg.depth)?;
    let (w1, w2) = (result.best_value, result.get("w2").unwrap_or(f64::NAN));
    let ordered_feasible = w2 - w1 >= -1e-6;
    Ok(HalfWeylBound {
        l,
        numeric: result.best_value,
        analytic: half_weyl_analytic(l),
        result,
        ordered_feasible,
    })
}

/// `(numeric, analytic)` lower bounds for the smallest half-Weyl eigenvalue.
pub fn half_weyl_bound(l: f64) -> Result<(f64, f64)> {
    let r = half_weyl_bound_with(
        l,
        EngineConfig {
            grid: DEFAULT_GRID,
            depth: HALF_WEYL_DEPTH,
        },
    )?;
    Ok((r.numeric, r.analytic))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundGroup {
    ThreePositive,
    FourPositive,
    Pinching,
    HalfWeyl,
}

impl BoundGroup {
    pub const ALL: [BoundGroup; 4] = [Self::ThreePositive, Self::FourPositive, Self::Pinching, Self::HalfWeyl];

    pub fn id(self) -> &'static str {
        match self {
            Self::ThreePositive => "three-positive",
            Self::FourPositive => "four-positive",
            Self::Pinching => "pinching",
            Self::HalfWeyl => "half-weyl",
        }
    }
}

impl fmt::Display for BoundGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BoundGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound group `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relation {
    /// `|value − target| <= tol`
    Within(f64),
    /// `value >= target − tol`
    AtLeast(f64),
    /// `value <= target + tol`
    AtMost(f64),
    /// `value > target`
    Above,
}

impl Relation {
    pub fn holds(self, value: f64, target: f64) -> bool {
        match self {
            Relation::Within(tol) => (value - target).abs() <= tol,
            Relation::AtLeast(tol) => value >= target - tol,
            Relation::AtMost(tol) => value <= target + tol,
            Relation::Above => value > target,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Within(tol) => write!(f, "within {tol:e}"),
            Relation::AtLeast(tol) => write!(f, ">= target - {tol:e}"),
            Relation::AtMost(tol) => write!(f, "<= target + {tol:e}"),
            Relation::Above => f.write_str("> target"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub group: BoundGroup,
    pub name: String,
    pub target_label: String,
    pub target: f64,
    pub relation: Relation,
    pub value: Option<f64>,
    pub passed: bool,
    pub result: Option<OptimizationResult>,
    pub error: Option<Error>,
}

impl BoundCheck {
    fn value(group: BoundGroup, name: &str, value: f64, target_label: &str, target: f64, relation: Relation) -> Self {
        Self {
            group,
            name: name.into(),
            target_label: target_label.into(),
            target,
            relation,
            value: Some(value),
            passed: relation.holds(value, target),
            result: None,
            error: None,
        }
    }

    fn optimum(
        group: BoundGroup,
        name: &str,
        result: &OptimizationResult,
        target_label: &str,
        target: f64,
        relation: Relation,
    ) -> Self {
        Self {
            result: Some(result.clone()),
            ..Self::value(group, name, result.best_value, target_label, target, relation)
        }
    }

    fn failed(group: BoundGroup, name: &str, err: Error) -> Self {
        Self {
            group,
            name: name.into(),
            target_label: String::new(),
            target: f64::NAN,
            relation: Relation::Above,
            value: None,
            passed: false,
            result: None,
            error: Some(err),
        }
    }

    pub fn gap(&self) -> Option<f64> {
        self.value.map(|v| (v - self.target).abs())
    }
}

/// Values of `L` checked by default: 50 equally spaced points in `[0, 1]`.
pub fn half_weyl_grid() -> Vec<f64> {
    (0..50).map(|i| i as f64 / 49.0).collect()
}

fn three_positive_checks(cfg: EngineConfig) -> Vec<BoundCheck> {
    use BoundGroup::ThreePositive as G;
    let r = match three_positive_bound(cfg) {
        Ok(r) => r,
        Err(e) => return vec![BoundCheck::failed(G, "3-positive bound", e)],
    };
    let k_at_min = r.curve_min.get("k").unwrap_or(f64::NAN);
    vec![
        BoundCheck::optimum(
            G,
            "min over k in [1,4] of (2k-1)/(5k^2+14k+11)",
            &r.curve_min,
            "1/30",
            1.0 / 30.0,
            Relation::Within(1e-9),
        ),
        BoundCheck::value(G, "argmin k", k_at_min, "1", 1.0, Relation::Within(1e-9)),
        BoundCheck::value(G, "lower curve at k = 4", r.lower_at_4, "7/147", 7.0 / 147.0, Relation::Within(1e-12)),
        BoundCheck::value(G, "curves cross at k", r.crossing, "4", 4.0, Relation::AtMost(0.0)),
        BoundCheck::optimum(
            G,
            "discarded root forces a2 > a3 for k > 1",
            &r.other_root_gap,
            "0",
            0.0,
            Relation::Above,
        ),
        BoundCheck::optimum(
            G,
            "min a1 over 3-positive forms (margin >= 1e-4)",
            &r.direct,
            "1/30",
            1.0 / 30.0,
            Relation::AtLeast(1e-3),
        ),
    ]
}

fn four_positive_checks(cfg: EngineConfig) -> Vec<BoundCheck> {
    use BoundGroup::FourPositive as G;
    let target = 4.0 - 17f64.sqrt();
    let r = match four_positive_bound(cfg) {
        Ok(r) => r,
        Err(e) => return vec![BoundCheck::failed(G, "4-positive bound", e)],
    };
    vec![
        BoundCheck::optimum(
            G,
            "min a1, b-terms bounded by -(a3-a2)^2/2",
            &r.chain,
            "4-sqrt17",
            target,
            Relation::Within(1e-3),
        ),
        BoundCheck::optimum(
            G,
            "min a1, all Berger variables",
            &r.full,
            "4-sqrt17",
            target,
            Relation::AtLeast(0.0),
        ),
        BoundCheck::optimum(
            G,
            "min a1 without stationarity",
            &r.without_stationarity,
            "-1/3",
            -1.0 / 3.0,
            Relation::AtMost(1e-3),
        ),
    ]
}

fn pinching_checks(cfg: EngineConfig) -> Vec<BoundCheck> {
    use BoundGroup::Pinching as G;
    let mut out = Vec::new();
    match pinching_step1(cfg) {
        Ok(r) => out.push(BoundCheck::optimum(
            G,
            "step 1: min a1 with a3 <= (14-sqrt19)/12",
            &r,
            "(5-sqrt19)/12",
            pinching_lower(),
            Relation::Within(1e-3),
        )),
        Err(e) => out.push(BoundCheck::failed(G, "step 1", e)),
    }
    match pinching_step2(cfg) {
        Ok(r) => {
            out.push(BoundCheck::optimum(
                G,
                "step 2: min 1 + mu1 - lam3",
                &r.direct,
                "0",
                0.0,
                Relation::AtLeast(1e-4),
            ));
            out.push(BoundCheck::optimum(
                G,
                "step 2 mirror: min 1 + lam1 - mu3",
                &r.mirror,
                "0",
                0.0,
                Relation::AtLeast(1e-4),
            ));
        }
        Err(e) => out.push(BoundCheck::failed(G, "step 2", e)),
    }
    out
}

fn half_weyl_checks(cfg: EngineConfig, l: Option<f64>) -> Vec<BoundCheck> {
    use BoundGroup::HalfWeyl as G;
    let cfg = EngineConfig {
        depth: cfg.depth.max(HALF_WEYL_DEPTH),
        ..cfg
    };
    if let Some(l) = l {
        return match half_weyl_bound_with(l, cfg) {
            Ok(r) => vec![BoundCheck::optimum(
                G,
                &format!("min w1 at w3 = {l}"),
                &r.result,
                "(2L+1-sqrt(12L^2+4L+1))/2",
                r.analytic,
                Relation::Within(1e-6),
            )],
            Err(e) => vec![BoundCheck::failed(G, &format!("min w1 at w3 = {l}"), e)],
        };
    }
    let mut worst_gap = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    for l in half_weyl_grid() {
        match half_weyl_bound_with(l, cfg) {
            Ok(r) => {
                worst_gap = worst_gap.max((r.numeric - r.analytic).abs());
                if l > 0.0 {
                    worst_margin = worst_margin.min(r.analytic - (1.0 - 3f64.sqrt()) * l);
                }
            }
            Err(e) => return vec![BoundCheck::failed(G, &format!("min w1 at w3 = {l}"), e)],
        }
    }
    let cp2 = [-1.0 / 3.0, -1.0 / 3.0];
    let cp2_stationarity = half_weyl_problem(2.0 / 3.0, true)
        .evaluate(&cp2)
        .1
        .into_iter()
        .find(|(n, _)| n.starts_with("stationarity"))
        .map_or(f64::NAN, |(_, m)| m);
    vec![
        BoundCheck::value(
            G,
            "max |numeric - analytic| over 50 values of w3 in [0,1]",
            worst_gap,
            "0",
            0.0,
            Relation::Within(1e-6),
        ),
        BoundCheck::value(
            G,
            "min over w3 > 0 of analytic - (1-sqrt3) w3",
            worst_margin,
            "0",
            0.0,
            Relation::Above,
        ),
        BoundCheck::value(
            G,
            "analytic bound at w3 = 2/3",
            half_weyl_analytic(2.0 / 3.0),
            "-1/3",
            -1.0 / 3.0,
            Relation::Within(1e-9),
        ),
        BoundCheck::value(
            G,
            "stationarity slack of (-1/3, -1/3, 2/3)",
            cp2_stationarity,
            "0",
            0.0,
            Relation::Within(1e-9),
        ),
    ]
}

/// Every check of the selected groups. Engine failures become failed checks
/// carrying the error rather than aborting the run.
pub fn verify(groups: &[BoundGroup], cfg: EngineConfig, half_weyl_l: Option<f64>) -> Vec<BoundCheck> {
    let mut out = Vec::new();
    for &g in groups {
        out.extend(match g {
            BoundGroup::ThreePositive => three_positive_checks(cfg),
            BoundGroup::FourPositive => four_positive_checks(cfg),
            BoundGroup::Pinching => pinching_checks(cfg),
            BoundGroup::HalfWeyl => half_weyl_checks(cfg, half_weyl_l),
        });
    }
    out
}
