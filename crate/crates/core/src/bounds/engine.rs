//! Exhaustive grid search with local refinement.
//!
//! Variables are either free (gridded over their box) or affine in earlier
//! variables, which is how equality constraints are eliminated. A point is
//! feasible when every margin, including the boxes of the affine variables,
//! is at least `-feas_tol`.

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
const MAX_VARS: usize = 16;
const SHRINK: f64 = 0.25;

type Func = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub grid: usize,
    pub depth: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            depth: DEFAULT_DEPTH,
        }
    }
}

#[derive(Clone, Debug)]
struct Variable {
    name: String,
    lo: f64,
    hi: f64,
    /// `None` for free variables, otherwise `constant + coeffs · free`.
    affine: Option<(f64, Vec<f64>)>,
}

#[derive(Clone)]
pub struct OptimizationProblem {
    name: String,
    vars: Vec<Variable>,
    free: Vec<usize>,
    constraints: Vec<(String, Func)>,
    objective: Option<Func>,
    feas_tol: f64,
    invalid: Option<String>,
}

impl std::fmt::Debug for OptimizationProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OptimizationProblem")
            .field("name", &self.name)
            .field("variables", &self.variable_names())
            .field("constraints", &self.constraint_names())
            .finish()
    }
}

impl OptimizationProblem {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            vars: Vec::new(),
            free: Vec::new(),
            constraints: Vec::new(),
            objective: None,
            feas_tol: DEFAULT_FEAS_TOL,
            invalid: None,
        }
    }

    fn fail(mut self, msg: String) -> Self {
        self.invalid.get_or_insert(msg);
        self
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// A free variable gridded over `[lo, hi]`.
    pub fn var(mut self, name: &str, lo: f64, hi: f64) -> Self {
        if !(lo <= hi) {
            return self.fail(format!("empty box for `{name}`"));
        }
        if self.index_of(name).is_some() {
            return self.fail(format!("duplicate variable `{name}`"));
        }
        if self.free.len() == MAX_VARS {
            return self.fail(format!("more than {MAX_VARS} free variables"));
        }
        self.free.push(self.vars.len());
        self.vars.push(Variable {
            name: name.into(),
            lo,
            hi,
            affine: None,
        });
        self
    }

    /// A variable fixed to `constant + Σ coeff · var` over earlier variables,
    /// constrained to `[lo, hi]`.
    pub fn affine(mut self, name: &str, constant: f64, terms: &[(&str, f64)], lo: f64, hi: f64) -> Self {
        if self.index_of(name).is_some() {
            return self.fail(format!("duplicate variable `{name}`"));
        }
        if self.vars.len() == MAX_VARS {
            return self.fail(format!("more than {MAX_VARS} variables"));
        }
        let nfree = self.free.len();
        let mut c0 = constant;
        let mut coeffs = vec![0.0; nfree];
        for &(other, w) in terms {
            let Some(idx) = self.index_of(other) else {
                return self.fail(format!("`{name}` refers to unknown variable `{other}`"));
            };
            match &self.vars[idx].affine {
                None => {
                    let slot = self.free.iter().position(|&f| f == idx).unwrap();
                    coeffs[slot] += w;
                }
                Some((k, cs)) => {
                    c0 += w * k;
                    for (slot, c) in cs.iter().enumerate() {
                        coeffs[slot] += w * c;
                    }
                }
            }
        }
        self.vars.push(Variable {
            name: name.into(),
            lo,
            hi,
            affine: Some((c0, coeffs)),
        });
        self
    }

    /// Feasible iff `margin(v) >= -feas_tol`, with `v` in declaration order.
    pub fn constraint(mut self, name: &str, margin: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.constraints.push((name.into(), Arc::new(margin)));
        self
    }

    pub fn minimize(mut self, objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.objective = Some(Arc::new(objective));
        self
    }

    pub fn feas_tol(mut self, tol: f64) -> Self {
        self.feas_tol = tol;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn constraint_names(&self) -> Vec<&str> {
        self.constraints.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    fn expand(&self, x: &[f64], out: &mut [f64; MAX_VARS]) {
        let mut next_free = 0;
        for (i, v) in self.vars.iter().enumerate() {
            out[i] = match &v.affine {
                None => {
                    next_free += 1;
                    x[next_free - 1]
                }
                Some((c0, cs)) => c0 + cs.iter().zip(x).map(|(c, xi)| c * xi).sum::<f64>(),
            };
        }
    }

    fn value_at(&self, x: &[f64]) -> Option<f64> {
        let mut full = [0.0; MAX_VARS];
        self.expand(x, &mut full);
        let v = &full[..self.vars.len()];
        for (var, &value) in self.vars.iter().zip(v) {
            if var.affine.is_some() && (value < var.lo - self.feas_tol || value > var.hi + self.feas_tol) {
                return None;
            }
        }
        for (_, c) in &self.constraints {
            let m = c(v);
            if !(m >= -self.feas_tol) {
                return None;
            }
        }
        let f = self.objective.as_ref()?(v);
        f.is_finite().then_some(f)
    }

    /// Objective and every margin (box constraints of affine variables
    /// included) at a full assignment given in declaration order.
    pub fn evaluate(&self, full: &[f64]) -> (f64, Vec<(String, f64)>) {
        let mut margins = Vec::new();
        for (var, &value) in self.vars.iter().zip(full) {
            margins.push((format!("{} >= {}", var.name, var.lo), value - var.lo));
            margins.push((format!("{} <= {}", var.name, var.hi), var.hi - value));
        }
        for (name, c) in &self.constraints {
            margins.push((name.clone(), c(full)));
        }
        let f = self.objective.as_ref().map_or(f64::NAN, |o| o(full));
        (f, margins)
    }

    pub fn is_feasible(&self, full: &[f64]) -> bool {
        self.evaluate(full).1.iter().all(|(_, m)| *m >= -self.feas_tol)
    }

    fn validate(&self, grid: usize) -> Result<()> {
        if let Some(msg) = &self.invalid {
            return Err(Error::InvalidProblem(msg.clone()));
        }
        if self.objective.is_none() {
            return Err(Error::InvalidProblem(format!("{}: no objective", self.name)));
        }
        if self.free.is_empty() {
            return Err(Error::InvalidProblem(format!("{}: no free variables", self.name)));
        }
        if grid < 8 {
            return Err(Error::InvalidProblem(format!("grid must be at least 8, got {grid}")));
        }
        let points = (grid as f64).powi(self.free.len() as i32);
        if points > 1e10 {
            return Err(Error::InvalidProblem(format!("{}: {points:.0} grid points is too many", self.name)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult {
    pub problem: String,
    pub best_value: f64,
    /// Full assignment in declaration order, affine variables included.
    pub minimizer: Vec<(String, f64)>,
    /// Largest grid spacing of the last round.
    pub grid_resolution: f64,
    pub refinement_depth: usize,
    pub feasible_points_evaluated: u64,
    pub points_evaluated: u64,
}

impl OptimizationResult {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.minimizer.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn values(&self) -> Vec<f64> {
        self.minimizer.iter().map(|&(_, v)| v).collect()
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    index: usize,
    feasible: u64,
}

impl Best {
    const NONE: Best = Best {
        value: f64::INFINITY,
        index: usize::MAX,
        feasible: 0,
    };

    fn merge(self, other: Best) -> Best {
        let keep_self = match self.value.total_cmp(&other.value) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.index <= other.index,
        };
        let winner = if keep_self { self } else { other };
        Best {
            feasible: self.feasible + other.feasible,
            ..winner
        }
    }
}

struct Lattice {
    lo: Vec<f64>,
    step: Vec<f64>,
    n: usize,
}

impl Lattice {
    fn new(bounds: &[(f64, f64)], n: usize) -> Self {
        Self {
            lo: bounds.iter().map(|b| b.0).collect(),
            step: bounds.iter().map(|b| (b.1 - b.0) / (n - 1) as f64).collect(),
            n,
        }
    }

    fn len(&self) -> usize {
        self.n.pow(self.lo.len() as u32)
    }

    fn point(&self, mut index: usize, out: &mut [f64]) {
        for d in 0..self.lo.len() {
            let i = index % self.n;
            index /= self.n;
            // hit the upper endpoint exactly
            out[d] = if i == self.n - 1 {
                self.lo[d] + self.step[d] * (self.n - 1) as f64
            } else {
                self.lo[d] + self.step[d] * i as f64
            };
        }
    }

    fn resolution(&self) -> f64 {
        self.step.iter().cloned().fold(0.0, f64::max)
    }
}

fn scan(problem: &OptimizationProblem, lattice: &Lattice) -> Best {
    let dim = problem.free.len();
    (0..lattice.len())
        .into_par_iter()
        .fold(
            || Best::NONE,
            |acc, index| {
                let mut x = [0.0; MAX_VARS];
                lattice.point(index, &mut x[..dim]);
                match problem.value_at(&x[..dim]) {
                    Some(value) => acc.merge(Best {
                        value,
                        index,
                        feasible: 1,
                    }),
                    None => acc,
                }
            },
        )
        .reduce(|| Best::NONE, Best::merge)
}

/// Grid search over the free variables followed by `depth` rounds of
/// re-gridding around the incumbent, each round a quarter the width of the
/// previous one. Deterministic regardless of thread count.
pub fn minimize(problem: &OptimizationProblem, grid: usize, depth: usize) -> Result<OptimizationResult> {
    problem.validate(grid)?;
    let dim = problem.free.len();
    let bounds: Vec<(f64, f64)> = problem.free.iter().map(|&i| (problem.vars[i].lo, problem.vars[i].hi)).collect();

    let lattice = Lattice::new(&bounds, grid);
    let mut points = lattice.len() as u64;
    let first = scan(problem, &lattice);
    if first.feasible == 0 {
        return Err(Error::Infeasible {
            problem: problem.name.clone(),
            resolution: lattice.resolution(),
            evaluated: points,
        });
    }
    let mut feasible = first.feasible;
    let mut best_value = first.value;
    let mut best_x = vec![0.0; dim];
    lattice.point(first.index, &mut best_x);
    let mut resolution = lattice.resolution();
    let mut half: Vec<f64> = lattice.step.iter().map(|s| 2.0 * s).collect();

    for _ in 0..depth {
        let local: Vec<(f64, f64)> = (0..dim)
            .map(|d| {
                let (lo, hi) = bounds[d];
                ((best_x[d] - half[d]).max(lo), (best_x[d] + half[d]).min(hi))
            })
            .collect();
        let lattice = Lattice::new(&local, grid);
        points += lattice.len() as u64;
        let round = scan(problem, &lattice);
        feasible += round.feasible;
        if round.feasible > 0 && round.value < best_value {
            best_value = round.value;
            lattice.point(round.index, &mut best_x);
        }
        resolution = lattice.resolution();
        for h in &mut half {
            *h *= SHRINK;
        }
    }

    let mut full = [0.0; MAX_VARS];
    problem.expand(&best_x, &mut full);
    Ok(OptimizationResult {
        problem: problem.name.clone(),
        best_value,
        minimizer: problem
            .vars
            .iter()
            .zip(full)
            .map(|(v, x)| (v.name.clone(), x))
            .collect(),
        grid_resolution: resolution,
        refinement_depth: depth,
        feasible_points_evaluated: feasible,
        points_evaluated: points,
    })
}
