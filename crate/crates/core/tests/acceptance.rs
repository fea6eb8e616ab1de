// Acceptance criteria 1-10. Prints PASS/FAIL per criterion and exits nonzero
// if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use einstein4::berger::{sample_admissible, BergerForm, BergerSampler};
use einstein4::bounds::{
    four_positive_bound, half_weyl_analytic, half_weyl_bound_with, half_weyl_grid, lower_curve_problem, minimize,
    pinching_step1, pinching_step2, EngineConfig, DEFAULT_DEPTH, DEFAULT_GRID, HALF_WEYL_DEPTH,
};
use einstein4::hamilton::b_combination;
use einstein4::input;
use einstein4::predicates::{k_positive_margin, pic_margin_closed, implication_report, Condition};
use einstein4::tensor::{
    duality_blocks, kulkarni_nomizu, ricci_contract, standard_decompose, to_operator, RiemannTensor4, SymmetricForm2,
};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let t = start.elapsed();
    o.detail = format!("{} [{:.2} s]", o.detail, t.as_secs_f64());
    if let Some(limit) = limit {
        if t > limit {
            o.passed = false;
            o.detail = format!("{} exceeds {} s", o.detail, limit.as_secs());
        }
    }
    o
}

fn default_cfg() -> EngineConfig {
    EngineConfig {
        grid: DEFAULT_GRID,
        depth: DEFAULT_DEPTH,
    }
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for (n, bf) in sample_admissible(101, 1.0, 1000).iter().enumerate() {
        // vary λ so the identity is not only checked at λ = 1
        let bf = bf.scaled(0.5 + (n % 7) as f64 * 0.5);
        let rm = bf.tensor();
        let (a, b) = (bf.a(), bf.b());
        for (i, l) in [(0usize, 1usize), (1, 2), (2, 3)] {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let expected = 2.0 * (a[i] * a[i] + b[i] * b[i] + 2.0 * a[j] * a[k] + 2.0 * b[j] * b[k]);
            let got = b_combination(&rm, 0, l, 0, l).unwrap();
            let oracle = common::hamilton_combination(rm.components(), 0, l, 0, l);
            worst = worst.max((got - expected).abs()).max((oracle - expected).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max deviation {worst:.2e} over 1000 forms"))
}

fn criterion_2() -> Outcome {
    let r = match minimize(&lower_curve_problem(), DEFAULT_GRID, DEFAULT_DEPTH) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let k = r.get("k").unwrap_or(f64::NAN);
    // dense scan of the curve
    let f = |k: f64| (2.0 * k - 1.0) / (5.0 * k * k + 14.0 * k + 11.0);
    let (scan_k, scan_v) = (0..=300_000)
        .map(|i| 1.0 + 3.0 * i as f64 / 300_000.0)
        .map(|k| (k, f(k)))
        .fold((f64::NAN, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let ok = (r.best_value - 1.0 / 30.0).abs() <= 1e-9 && (k - 1.0).abs() <= 1e-9 && scan_k == 1.0;
    outcome(
        ok,
        format!("min {:.12} at k = {k} (scan: {scan_v:.12} at k = {scan_k})", r.best_value),
    )
}

fn criterion_3() -> Outcome {
    let target = common::bisect(|x| x * x - 8.0 * x - 1.0, -1.0, 0.0);
    match four_positive_bound(default_cfg()) {
        Ok(r) => {
            let gap = (r.chain.best_value - target).abs();
            outcome(
                gap <= 1e-3,
                format!(
                    "best {:.7} vs root {target:.7}, gap {gap:.2e} (full Berger problem: {:.7})",
                    r.chain.best_value, r.full.best_value
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_4() -> Outcome {
    // (5 - sqrt 19)/12 as the root of 12x^2 - 10x + 1/2 = 0 below 1/2
    let target = common::bisect(|x| 12.0 * x * x - 10.0 * x + 0.5, 0.0, 0.2);
    let s1 = match pinching_step1(default_cfg()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let s2 = match pinching_step2(default_cfg()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let gap = (s1.best_value - target).abs();
    let ok = gap <= 1e-3 && s2.direct.best_value >= -1e-4 && s2.mirror.best_value >= -1e-4;
    outcome(
        ok,
        format!(
            "step 1 {:.7} vs {target:.7} (gap {gap:.2e}); step 2 {:.2e}, mirror {:.2e}",
            s1.best_value, s2.direct.best_value, s2.mirror.best_value
        ),
    )
}

fn criterion_5() -> Outcome {
    let cfg = EngineConfig {
        grid: DEFAULT_GRID,
        depth: HALF_WEYL_DEPTH,
    };
    let mut worst_gap = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    for l in half_weyl_grid() {
        match half_weyl_bound_with(l, cfg) {
            Ok(r) => {
                worst_gap = worst_gap.max((r.numeric - r.analytic).abs());
                if l > 0.0 {
                    worst_margin = worst_margin.min(r.numeric - (1.0 - 3f64.sqrt()) * l);
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let w = match half_weyl_bound_with(2.0 / 3.0, cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let witness = (w.numeric + 1.0 / 3.0).abs().max((half_weyl_analytic(2.0 / 3.0) + 1.0 / 3.0).abs());
    let ok = worst_gap <= 1e-6 && worst_margin > 0.0 && witness <= 1e-9 && w.ordered_feasible;
    outcome(
        ok,
        format!(
            "max |numeric - analytic| {worst_gap:.2e}; min margin over (1-sqrt3)L {worst_margin:.4}; \
             witness error {witness:.2e}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = common::rng(606);
    let forms: Vec<BergerForm> = BergerSampler::new(6, 1.0).take(100_000).collect();
    let mut violations = [0usize; 7];
    for bf in &forms {
        let (a, b) = (bf.a(), bf.b());
        let m = |k| k_positive_margin(bf, k).unwrap().margin;
        if a[0] > 1.0 / 12.0 + 1e-12 && m(3) <= 0.0 {
            violations[0] += 1;
        }
        if m(2) > 1e-12 && pic_margin_closed(bf).margin <= 0.0 {
            violations[1] += 1;
        }
        let closed = (a[0] + a[1]).min(1.0 + a[0] + b[0]).min(1.0 + a[0] - b[0]);
        if m(4).abs() > 1e-12 && closed.abs() > 1e-12 && (m(4) > 0.0) != (closed > 0.0) {
            violations[2] += 1;
        }
        if m(4) > 1e-12 && a[2] >= 1.0 {
            violations[3] += 1;
        }
        let delta: f64 = r.gen_range(-1.0..1.0 / 3.0);
        if a[0] >= delta && a[2] > 1.0 - 2.0 * delta + 1e-12 {
            violations[4] += 1;
        }
        if b[1].abs() > (a[2] - a[0]) / 3.0 + 1e-12 {
            violations[5] += 1;
        }
        let c: f64 = r.gen_range(0.1..10.0);
        let scaled = bf.scaled(c);
        let six = k_positive_margin(&scaled, 6).unwrap().margin;
        if (six - 2.0 * scaled.lambda()).abs() > 1e-12 * c || !(six > 0.0) {
            violations[6] += 1;
        }
    }
    outcome(
        violations.iter().all(|&v| v == 0),
        format!("violations per implication {violations:?} over {} forms", forms.len()),
    )
}

fn criterion_7() -> Outcome {
    let mut worst_k = 0.0f64;
    for bf in BergerSampler::new(77, 1.0).take(10_000) {
        let spectrum = common::berger_spectrum(bf.a(), bf.b());
        for k in 1..=6 {
            let got = k_positive_margin(&bf, k).unwrap().margin;
            worst_k = worst_k.max((got - common::min_subset_sum(&spectrum, k)).abs());
        }
    }
    let mut forms = vec![
        BergerForm::round_sphere(1.0),
        BergerForm::complex_projective_plane(1.0),
        BergerForm::product_of_spheres(1.0),
    ];
    forms.extend(BergerSampler::new(78, 1.0).take(20));
    let mut r = common::rng(79);
    let mut worst_sec = 0.0f64;
    for (n, bf) in forms.iter().enumerate() {
        let rm = bf.tensor().rotated(&common::random_rotation(&mut r));
        let (lo, hi) = common::sectional_extremes(&rm, 10_000, 1000 + n as u64);
        let a = bf.a();
        worst_sec = worst_sec.max((lo - a[0]).abs()).max((hi - a[2]).abs());
    }
    outcome(
        worst_k <= 1e-12 && worst_sec <= 1e-6,
        format!("k-sum deviation {worst_k:.2e}; sectional range deviation {worst_sec:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let tol = 1e-9;
    let mut failures = Vec::new();
    let s4 = implication_report(&BergerForm::round_sphere(1.0), tol);
    for (c, m) in &s4.margins {
        if *m <= tol {
            failures.push(format!("S4 {c} margin {m}"));
        }
    }
    let cp2 = BergerForm::complex_projective_plane(1.0);
    let rep = implication_report(&cp2, tol);
    let expect = |failures: &mut Vec<String>, what: &str, got: f64, want: f64| {
        if (got - want).abs() > tol {
            failures.push(format!("{what}: {got} (expected {want})"));
        }
    };
    expect(&mut failures, "CP2 3-positive", rep.margin(Condition::ThreePositive), 1.0 / 3.0);
    expect(&mut failures, "CP2 2-positive", rep.margin(Condition::TwoPositive), 0.0);
    expect(&mut failures, "CP2 pic", rep.margin(Condition::Pic), 0.0);
    expect(&mut failures, "CP2 min K", cp2.a()[0], 1.0 / 6.0);
    expect(&mut failures, "CP2 max K", cp2.a()[2], 2.0 / 3.0);
    // S2xS2 enters as a component document
    let text = "format_version = 1\n[riemann]\ncomponents = [\n  { indices = [1, 4, 1, 4], value = 1.0 },\n  { indices = [2, 3, 2, 3], value = 1.0 },\n]\n";
    match input::parse(text).and_then(|d| d.curvature(None)).and_then(|c| BergerForm::from_tensor(&c.tensor(), tol)) {
        Ok(bf) => {
            let rep = implication_report(&bf, tol);
            expect(&mut failures, "S2xS2 4-positive", rep.margin(Condition::FourPositive), 0.0);
            expect(&mut failures, "S2xS2 K<1", rep.margin(Condition::SectionalBelowOne), 0.0);
        }
        Err(e) => failures.push(format!("S2xS2: {e}")),
    }
    let detail = if failures.is_empty() {
        "S4, CP2 and S2xS2 margins exact".to_string()
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_9() -> Outcome {
    let mut r = common::rng(909);
    let (mut std_err, mut dual_err, mut weyl_trace, mut berger_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        // generic algebraic curvature tensor as a sum of Kulkarni-Nomizu products
        let mut rm = RiemannTensor4::zero();
        for _ in 0..3 {
            let h = SymmetricForm2::new(common::random_symmetric(&mut r), 1e-12).unwrap();
            let k = SymmetricForm2::new(common::random_symmetric(&mut r), 1e-12).unwrap();
            rm = rm + kulkarni_nomizu(&h, &k);
        }
        let sd = standard_decompose(&rm);
        std_err = std_err.max((sd.reconstruct() - rm).max_abs());
        weyl_trace = weyl_trace.max(ricci_contract(&sd.weyl).matrix().amax());
        let op = to_operator(&rm);
        dual_err = dual_err.max((duality_blocks(&op).to_operator().matrix() - op.matrix()).amax());
    }
    for bf in BergerSampler::new(910, 1.0).take(1000) {
        let rm = bf.tensor().rotated(&common::random_rotation(&mut r));
        match BergerForm::from_tensor(&rm, 1e-9) {
            Ok(back) => {
                for i in 0..3 {
                    berger_err = berger_err
                        .max((back.a()[i] - bf.a()[i]).abs())
                        .max((back.b()[i] - bf.b()[i]).abs());
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let worst = std_err.max(dual_err).max(weyl_trace).max(berger_err);
    outcome(
        worst <= 1e-10,
        format!(
            "standard {std_err:.1e}, duality {dual_err:.1e}, Berger {berger_err:.1e}, Weyl trace {weyl_trace:.1e}"
        ),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_einstein4"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    match out.status.code() {
        Some(0) => Ok(out.stdout),
        c => Err(format!("{args:?} exited with {c:?}: {}", String::from_utf8_lossy(&out.stderr))),
    }
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for cmd in [&["table"][..], &["verify-bounds", "--which", "all"][..]] {
        let runs: Result<Vec<Vec<u8>>, String> = [["--threads", "1"], ["--threads", "8"], ["--threads", "8"]]
            .iter()
            .map(|t| run_cli(&[t.as_slice(), cmd].concat()))
            .collect();
        match runs {
            Ok(r) => {
                let same = r[0] == r[1] && r[1] == r[2];
                ok &= same;
                notes.push(format!(
                    "{}: {}",
                    cmd[0],
                    if same { "identical" } else { "DIFFERENT" }
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(e);
            }
        }
    }
    outcome(ok, format!("{} (threads 1, 8, 8)", notes.join("; ")))
}

fn main() {
    let s = Duration::from_secs;
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 10] = [
        ("Hamilton identity in Berger form", Some(s(5)), criterion_1),
        ("min over k of the lower curve", Some(s(1)), criterion_2),
        ("4-positive sectional bound", Some(s(60)), criterion_3),
        ("pinching steps 1 and 2", Some(s(120)), criterion_4),
        ("half-Weyl bound", Some(s(30)), criterion_5),
        ("pointwise implications", Some(s(30)), criterion_6),
        ("closed forms vs brute force", None, criterion_7),
        ("boundary classification", None, criterion_8),
        ("decomposition round trips", None, criterion_9),
        ("determinism", None, criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, limit, f)) in criteria.into_iter().enumerate() {
        let o = timed(limit, f);
        println!("criterion {:>2} {}: {name}: {}", n + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
