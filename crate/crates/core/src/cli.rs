//! The `einstein4` command line.
//!
//! Exit codes: 0 success, 1 failed assertion or check, 2 bad input
//! (parse, symmetry, invalid Berger data, unknown names, io), 3 input that is
//! not Einstein or has `λ <= 0`, 4 optimization with no feasible point.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::berger::{half_spectra, BergerForm, BergerSampler};
use crate::bounds::{verify, BoundCheck, BoundGroup, EngineConfig, DEFAULT_DEPTH, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::hamilton::quadratic_terms;
use crate::input::{self, Curvature, InputDocument};
use crate::predicates::{
    pic_margin_closed, sectional_range, implication_report, Condition, ImplicationKind, Verdict, NOT_EVALUATED,
    TABLE_ARROWS,
};
use crate::report::{matrix, num, nums, Report};
use crate::tensor::{
    duality_blocks, einstein_residual, is_einstein, ricci_contract, standard_decompose, to_operator,
    RiemannTensor4, DEFAULT_TOL,
};

const AFTER_HELP: &str = "\
Input files are TOML with `format_version = 1` and exactly one of
  [berger]   lambda, a = [a1, a2, a3], b = [b1, b2, b3]
  [riemann]  components = [{ indices = [i, j, k, l], value = x }, ...]
Riemann indices are 1-based and R(i,j,i,j) is the sectional curvature of the
e_i, e_j plane. Unlisted components follow from the curvature symmetries or
are zero. Reports are given at Einstein constant 1; the original constant and
the rescaling factor are reported alongside.

Exit codes: 0 ok, 1 assertion or check failed, 2 invalid input,
3 not Einstein or non-positive Einstein constant, 4 no feasible point.";

#[derive(Debug, Parser)]
#[command(name = "einstein4", version, about = "Curvature algebra of Einstein four-manifolds", after_help = AFTER_HELP)]
pub struct Cli {
    /// Numerical tolerance [default: 1e-9, or the input document's `tol`]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sampling commands
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub machine: bool,
    /// Grid points per variable for optimizations
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Refinement rounds for optimizations
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard, duality and Berger decompositions of an input file
    Decompose(InputArgs),
    /// Margins of every curvature condition and the pointwise implications
    Check(CheckArgs),
    /// Run the numerical bound checks
    VerifyBounds(VerifyArgs),
    /// Print random admissible Berger forms as input documents
    Sample(SampleArgs),
    /// Count counterexamples to each implication between conditions over random forms
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub path: PathBuf,
    /// Fail (exit 1) unless this condition's margin exceeds the tolerance
    #[arg(long = "assert", value_name = "CONDITION")]
    pub assert: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, three-positive, four-positive, pinching or half-weyl
    #[arg(long, default_value = "all")]
    pub which: String,
    /// Check the half-Weyl bound at this single largest eigenvalue only
    #[arg(long, allow_negative_numbers = true)]
    pub lam3: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Number of documents to print
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Keep only forms satisfying this condition
    #[arg(long)]
    pub condition: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotEinstein { .. } | Error::NonPositiveLambda { .. } => 3,
        Error::Infeasible { .. } => 4,
        _ => 2,
    }
}

/// Draws per requested document before `sample --condition` gives up.
const MAX_DRAWS_PER_DOC: usize = 10_000;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    stderr: text,
                    code,
                    ..Default::default()
                }
            };
        }
    };
    match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => error_outcome(&Error::Io(e.to_string())),
        },
        None => dispatch(&cli),
    }
}

fn error_outcome(e: &Error) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: exit_code(e),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(cli, &a.path).map(|r| (r, 0)),
        Command::Check(a) => cmd_check(cli, &a.path, a.assert.as_deref()),
        Command::VerifyBounds(a) => cmd_verify_bounds(cli, &a.which, a.lam3),
        Command::Sample(a) => {
            return match cmd_sample(cli, a.count, a.condition.as_deref()) {
                Ok(stdout) => Outcome {
                    stdout,
                    ..Default::default()
                },
                Err(e) => error_outcome(&e),
            }
        }
        Command::Table(a) => cmd_table(cli, a.samples),
    };
    match result {
        Ok((report, code)) => Outcome {
            stdout: report.render(cli.machine),
            stderr: String::new(),
            code,
        },
        Err(e) => error_outcome(&e),
    }
}

/// Input curvature at `λ = 1`, with the original constant.
struct Loaded {
    kind: &'static str,
    tol: f64,
    lambda: f64,
    tensor: RiemannTensor4,
    form: BergerForm,
}

fn load(path: &Path, cli_tol: Option<f64>) -> Result<Loaded> {
    let doc = input::read(path)?;
    let tol = cli_tol.or(doc.tol).unwrap_or(DEFAULT_TOL);
    let cur = doc.curvature(Some(tol))?;
    let (lambda, tensor, form) = match &cur {
        Curvature::Berger(bf) => (bf.lambda(), bf.tensor(), *bf),
        Curvature::Riemann(rm) => {
            let lambda = is_einstein(rm, tol).ok_or(Error::NotEinstein {
                residual: einstein_residual(rm),
                tol,
            })?;
            if !(lambda > 0.0) {
                return Err(Error::NonPositiveLambda { lambda });
            }
            (lambda, *rm, BergerForm::from_tensor(rm, tol)?)
        }
    };
    Ok(Loaded {
        kind: cur.kind(),
        tol,
        lambda,
        tensor: tensor * (1.0 / lambda),
        form: form.normalized(),
    })
}

fn input_section(path: &Path, l: &Loaded) -> Value {
    json!({
        "path": path.display().to_string(),
        "kind": l.kind,
        "tol": num(l.tol),
        "lambda": num(l.lambda),
        "rescale": num(1.0 / l.lambda),
    })
}

fn cmd_decompose(cli: &Cli, path: &Path) -> Result<Report> {
    let l = load(path, cli.tol)?;
    let rm = &l.tensor;
    let sd = standard_decompose(rm);
    let weyl_trace = ricci_contract(&sd.weyl).matrix().amax();
    let op = to_operator(rm);
    let blocks = duality_blocks(&op);
    let hs = half_spectra(&l.form);
    let q = quadratic_terms(&l.form);
    let (kmin, kmax) = sectional_range(&l.form);
    let mut r = Report::new("decompose");
    r.set("input", input_section(path, &l))
        .set(
            "standard",
            json!({
                "scalar": num(sd.scalar),
                "weyl_max_abs": num(sd.weyl.max_abs()),
                "weyl_trace_max_abs": num(weyl_trace),
                "traceless_ricci_part_max_abs": num(sd.ric_part.max_abs()),
                "einstein_residual": num(einstein_residual(rm)),
            }),
        )
        .set(
            "duality",
            json!({
                "scalar": num(blocks.scalar),
                "w_plus": matrix(&blocks.w_plus),
                "w_minus": matrix(&blocks.w_minus),
                "off_diagonal_max_abs": num(blocks.einstein_residual()),
            }),
        )
        .set("berger", json!({ "a": nums(&l.form.a()), "b": nums(&l.form.b()) }))
        .set("half_spectra", json!({ "lam": nums(&hs.lam), "mu": nums(&hs.mu) }))
        .set("operator_eigenvalues", nums(&op.eigenvalues()))
        .set("sectional_range", nums(&[kmin, kmax]))
        .set(
            "quadratic_terms",
            json!({
                "q_12": num(q.q_12),
                "q_13": num(q.q_13),
                "q_14": num(q.q_14),
                "q_plus": nums(&q.q_plus),
                "q_minus": nums(&q.q_minus),
            }),
        );
    Ok(r)
}

fn verdict_id(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Vacuous => "vacuous",
        Verdict::Violated => "violated",
    }
}

fn cmd_check(cli: &Cli, path: &Path, assert: Option<&str>) -> Result<(Report, i32)> {
    let condition = assert.map(str::parse::<Condition>).transpose()?;
    let l = load(path, cli.tol)?;
    let rep = implication_report(&l.form, l.tol);
    let pic = pic_margin_closed(&l.form);
    let (kmin, kmax) = sectional_range(&l.form);
    let margins: Vec<Value> = rep
        .margins
        .iter()
        .map(|&(c, m)| {
            json!({
                "condition": c.id(),
                "description": c.description(),
                "margin": num(m),
                "holds": m > l.tol,
            })
        })
        .collect();
    let verdicts: Vec<Value> = rep
        .verdicts
        .iter()
        .map(|v| json!({ "arrow": v.implication.to_string(), "verdict": verdict_id(v.verdict) }))
        .collect();
    let mut r = Report::new("check");
    r.set("input", input_section(path, &l))
        .set("margins", margins)
        .set("sectional_range", nums(&[kmin, kmax]))
        .set("pic_witness", pic.witness)
        .set("pointwise_implications", verdicts)
        .set("not_evaluated", json!(NOT_EVALUATED));
    let mut code = if rep.verdicts.iter().any(|v| v.verdict == Verdict::Violated) {
        1
    } else {
        0
    };
    if let Some(c) = condition {
        let m = rep.margin(c);
        let passed = m > l.tol;
        r.set(
            "assert",
            json!({ "condition": c.id(), "margin": num(m), "passed": passed }),
        );
        if !passed {
            code = 1;
        }
    }
    Ok((r, code))
}

fn parse_groups(which: &str) -> Result<Vec<BoundGroup>> {
    if which == "all" {
        return Ok(BoundGroup::ALL.to_vec());
    }
    which.split(',').map(|s| s.trim().parse()).collect()
}

fn check_value(c: &BoundCheck) -> Value {
    let mut m = Map::new();
    m.insert("group".into(), c.group.id().into());
    m.insert("name".into(), c.name.clone().into());
    if let Some(e) = &c.error {
        m.insert("status".into(), "FAIL".into());
        m.insert("error".into(), e.to_string().into());
        return Value::Object(m);
    }
    m.insert("target".into(), c.target_label.clone().into());
    m.insert("target_value".into(), num(c.target));
    m.insert("relation".into(), c.relation.to_string().into());
    m.insert("value".into(), c.value.map_or(Value::Null, num));
    m.insert("gap".into(), c.gap().map_or(Value::Null, num));
    m.insert("status".into(), if c.passed { "PASS" } else { "FAIL" }.into());
    if let Some(res) = &c.result {
        let minimizer: Map<String, Value> = res.minimizer.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
        m.insert(
            "optimization".into(),
            json!({
                "problem": res.problem,
                "best_value": num(res.best_value),
                "minimizer": minimizer,
                "grid_resolution": num(res.grid_resolution),
                "refinement_depth": res.refinement_depth,
                "feasible_points_evaluated": res.feasible_points_evaluated,
                "points_evaluated": res.points_evaluated,
            }),
        );
    }
    Value::Object(m)
}

fn cmd_verify_bounds(cli: &Cli, which: &str, lam3: Option<f64>) -> Result<(Report, i32)> {
    let groups = parse_groups(which)?;
    if lam3.is_some() && !groups.contains(&BoundGroup::HalfWeyl) {
        return Err(Error::Parse("--lam3 applies to the half-weyl group only".into()));
    }
    let cfg = EngineConfig {
        grid: cli.grid,
        depth: cli.depth,
    };
    let checks = verify(&groups, cfg, lam3);
    let passed = checks.iter().filter(|c| c.passed).count();
    let infeasible = checks
        .iter()
        .any(|c| matches!(c.error, Some(Error::Infeasible { .. })));
    let mut r = Report::new("verify-bounds");
    r.set(
        "groups",
        Value::Array(groups.iter().map(|g| g.id().into()).collect()),
    )
    .set("grid", cfg.grid)
    .set("depth", cfg.depth);
    if let Some(l) = lam3 {
        r.set("lam3", num(l));
    }
    r.set("checks", checks.iter().map(check_value).collect::<Vec<_>>())
        .set("passed", passed)
        .set("failed", checks.len() - passed);
    let code = if infeasible {
        4
    } else if passed < checks.len() {
        1
    } else {
        0
    };
    Ok((r, code))
}

fn cmd_sample(cli: &Cli, count: usize, condition: Option<&str>) -> Result<String> {
    if count == 0 {
        return Err(Error::Parse("--count must be at least 1".into()));
    }
    let condition = condition.map(str::parse::<Condition>).transpose()?;
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let mut sampler = BergerSampler::new(cli.seed, 1.0);
    let mut docs = Vec::with_capacity(count);
    let mut drawn = 0usize;
    while docs.len() < count && drawn < count * MAX_DRAWS_PER_DOC {
        let bf = sampler.next().expect("sampler is infinite");
        drawn += 1;
        if condition.is_none_or(|c| c.holds(&bf, tol)) {
            docs.push(InputDocument::from_berger(&bf));
        }
    }
    let label = condition.map_or("none", Condition::id);
    let mut out = String::new();
    if cli.machine {
        for d in &docs {
            out.push_str(&serde_json::to_string(&input::normalize(d)).expect("documents serialize"));
            out.push('\n');
        }
        out.push_str(&json!({ "condition": label, "accepted": docs.len(), "drawn": drawn }).to_string());
        out.push('\n');
    } else {
        for (i, d) in docs.iter().enumerate() {
            if i > 0 {
                out.push_str(input::SEPARATOR);
                out.push('\n');
            }
            out.push_str(&input::emit(d));
        }
        out.push_str(&format!(
            "# condition {label}: accepted {} of {drawn} drawn\n",
            docs.len()
        ));
    }
    Ok(out)
}

type Counts = Vec<[u64; 13]>;

fn cmd_table(cli: &Cli, samples: usize) -> Result<(Report, i32)> {
    if samples == 0 {
        return Err(Error::Parse("--samples must be at least 1".into()));
    }
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let forms: Vec<BergerForm> = BergerSampler::new(cli.seed, 1.0).take(samples).collect();
    let n = Condition::ALL.len();
    // integer counts, so the reduction order does not matter
    let counts: Counts = forms
        .par_iter()
        .fold(
            || vec![[0u64; 13]; n],
            |mut acc, bf| {
                let holds = Condition::ALL.map(|c| c.holds(bf, tol));
                for i in 0..n {
                    if holds[i] {
                        for j in 0..n {
                            if !holds[j] {
                                acc[i][j] += 1;
                            }
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![[0u64; 13]; n],
            |mut x, y| {
                for (rx, ry) in x.iter_mut().zip(&y) {
                    for (a, b) in rx.iter_mut().zip(ry) {
                        *a += b;
                    }
                }
                x
            },
        );
    let index = |c: Condition| Condition::ALL.iter().position(|&k| k == c).unwrap();
    let satisfied: Vec<Value> = Condition::ALL
        .iter()
        .map(|&c| {
            let k = forms.iter().filter(|bf| c.holds(bf, tol)).count();
            json!({ "condition": c.id(), "count": k })
        })
        .collect();
    let mut violated = false;
    let arrows: Vec<Value> = TABLE_ARROWS
        .iter()
        .map(|imp| {
            let v = counts[index(imp.antecedent)][index(imp.consequent)];
            let status = match imp.kind {
                ImplicationKind::Pointwise if v == 0 => "ok",
                ImplicationKind::Pointwise => {
                    violated = true;
                    "VIOLATED"
                }
                ImplicationKind::Global => "global, see verify-bounds",
            };
            json!({
                "arrow": imp.to_string(),
                "kind": match imp.kind {
                    ImplicationKind::Pointwise => "pointwise",
                    ImplicationKind::Global => "global",
                },
                "counterexamples": v,
                "status": status,
            })
        })
        .collect();
    let mut r = Report::new("table");
    r.set("samples", samples)
        .set("seed", cli.seed)
        .set("tol", num(tol))
        .set("conditions", json!(Condition::ALL.map(Condition::id)))
        .set("satisfied", satisfied)
        .set("counterexamples_note", "row holds and column fails")
        .set("counterexamples", json!(counts))
        .set("arrows", arrows)
        .set("not_evaluated", json!(NOT_EVALUATED));
    Ok((r, i32::from(violated)))
}
