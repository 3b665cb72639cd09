//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any failure not listed in `KNOWN_FAILURES`, or when a listed
//! one starts passing.
//!
//! Criteria 4 to 10 run the reproduction configs under
//! `configs/acceptance/` through the harness; criterion 12 reruns all of
//! them through the CLI and compares the files byte for byte.

use bh_lab::harness::{self, read_reports, Command, RunOptions, TraceRecord};
use bh_lab::inequalities::{
    blei_sides, constant_profile, verify_helson, BleiExponent, Effort, InequalityReport, MArray, StepKind, Verdict,
};
use bh_lab::multiindex::lemmas::{self, LemmaCheck};
use bh_lab::multiindex::{divisor_weight_bound, enumerate_alphas, MultiIndex};
use bh_lab::norms::{
    certified_sup, l2_coeff_norm, sup_norm_lower, sup_norm_upper, torus_l1_grid, torus_l2_grid, SearchOptions,
    DEFAULT_COST_CAP,
};
use bh_lab::poly::{
    derive_seed, random_polynomial, AnalyticPolynomial, CoefficientKind, EnsembleSpec, HomogeneousPolynomial, Support,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

/// Criteria expected to fail, with the reason printed next to them.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    9,
    "the m=100 target 0.9772 is not the value of the stated formula, which is 0.97228",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Suite {
    configs: PathBuf,
    out: PathBuf,
}

impl Suite {
    fn config(&self, name: &str) -> PathBuf {
        self.configs.join(format!("{name}.json"))
    }

    /// Runs a reproduction config in process; outputs go to `out/<name>`.
    fn run(&self, command: Command, name: &str, expect_violations: bool) -> harness::RunSummary {
        let summary = harness::run(&RunOptions {
            command,
            config: self.config(name),
            seed: None,
            out: Some(self.out.join(name)),
            expect_violations,
        })
        .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            summary.exit_code(expect_violations),
            0,
            "{name}: unexpected exit status"
        );
        summary
    }

    fn reports(&self, name: &str) -> Vec<InequalityReport> {
        read_reports(&self.out.join(name).join("reports.jsonl")).unwrap()
    }
}

fn count_verdicts(reports: &[InequalityReport]) -> String {
    let mut counts = BTreeMap::new();
    for r in reports {
        *counts.entry(r.verdict.as_str()).or_insert(0) += 1;
    }
    counts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn no_violations(name: &str, reports: &[InequalityReport], expected: usize) -> Outcome {
    let violations = reports.iter().filter(|r| r.is_violation()).count();
    outcome(
        violations == 0 && reports.len() == expected,
        format!(
            "{name}: {} instances, {violations} violations ({})",
            reports.len(),
            count_verdicts(reports)
        ),
    )
}

fn lemma_summary(checks: &[LemmaCheck]) -> (bool, String) {
    let pass = checks.iter().all(LemmaCheck::passed);
    let parts: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {}/{}", c.name, c.cases - c.failures, c.cases))
        .collect();
    (pass, parts.join(", "))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let checks = vec![
        lemmas::partition_identity(6, 5),
        lemmas::bijection(6, 5),
        lemmas::insertion_growth(5, 4),
        lemmas::divisor_monotonicity(5, 4),
    ];
    let (pass, detail) = lemma_summary(&checks);
    let elapsed = start.elapsed();
    outcome(
        pass && elapsed < Duration::from_secs(10),
        format!("{detail} in {elapsed:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let (pass, detail) = lemma_summary(&[lemmas::divisor_cross_check(1_000_000)]);
    outcome(pass, detail)
}

/// Largest `∏ (a_r + 1)` over `a_1 + … + a_parts = m`, by exhaustive recursion.
fn brute_max_product(m: u32, parts: u32) -> u128 {
    if parts == 1 {
        return m as u128 + 1;
    }
    (0..=m)
        .map(|a| (a as u128 + 1) * brute_max_product(m - a, parts - 1))
        .max()
        .unwrap()
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in 1..=40u32 {
        for big in 1..=6u32 {
            cases += 1;
            let brute = brute_max_product(m, big);
            // brute ≤ (m/M + 1)^M  ⇔  brute · M^M ≤ (m + M)^M, in integers
            let holds = brute * (big as u128).pow(big) <= ((m + big) as u128).pow(big);
            let lib = divisor_weight_bound(m, big).map(|b| b.integer_max);
            if !holds || lib != Ok(brute) {
                failures.push(format!("m={m} M={big}: brute {brute} lib {lib:?}"));
            }
        }
    }
    let at_4_2 = brute_max_product(4, 2);
    let equality = at_4_2 == 9 && at_4_2 * 4 == 36;
    let mut detail = format!(
        "{cases} (m, M) pairs, {} failures; (m=4, M=2) max {at_4_2} vs bound 9",
        failures.len()
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first failure {first:?}"));
    }
    outcome(failures.is_empty() && equality, detail)
}

fn criterion_4(s: &Suite) -> Outcome {
    let start = Instant::now();
    s.run(Command::Blei, "blei", false);
    let reports = s.reports("blei");
    let elapsed = start.elapsed();
    let base = no_violations("random arrays", &reports, 2000);
    let all_verified = reports.iter().all(|r| r.verdict == Verdict::Verified);

    let ones = MArray::from_fn(2, 2, |_| Complex64::new(1.0, 0.0)).unwrap();
    let (lhs, rhs) = blei_sides(&ones, BleiExponent::Standard).unwrap();
    let equality = (lhs - 4.0).abs() < 1e-12 && (rhs - 4.0).abs() < 1e-12;
    outcome(
        base.pass && all_verified && equality && elapsed < Duration::from_secs(60),
        format!("{}; all-ones (2,2): {lhs} vs {rhs}; {elapsed:.2?}", base.detail),
    )
}

fn criterion_5(s: &Suite) -> Outcome {
    s.run(Command::Verify, "helson", false);
    let base = no_violations("helson", &s.reports("helson"), 200);

    let f = AnalyticPolynomial::from_terms(
        1,
        [
            (MultiIndex::new(vec![0]), Complex64::new(1.0, 0.0)),
            (MultiIndex::new(vec![1]), Complex64::new(1.0, 0.0)),
        ],
    )
    .unwrap();
    let effort = Effort {
        grid: Some(4096),
        ..Effort::default()
    };
    let rhs = verify_helson(&f, &effort).unwrap().rhs_base.value;
    let direct = torus_l1_grid(&f, 4096, DEFAULT_COST_CAP).unwrap().value;
    let err = (rhs - 4.0 / PI).abs();
    outcome(
        base.pass && err < 1e-6 && rhs == direct,
        format!("{}; 1 + w1 at K=4096: {rhs:.10} (|err| {err:.1e})", base.detail),
    )
}

fn criterion_6(s: &Suite) -> Outcome {
    s.run(Command::Verify, "bayart", false);
    no_violations("bayart", &s.reports("bayart"), 200)
}

fn criterion_7(s: &Suite) -> Outcome {
    let start = Instant::now();
    s.run(Command::Verify, "main_theorem", false);
    let elapsed = start.elapsed();
    let main = s.reports("main_theorem");
    let base = no_violations("m in {4,5,6}", &main, 300);

    s.run(Command::Verify, "small_m_probes", true);
    let probes = s.reports("small_m_probes");
    let closed_form = 2.0 / 3f64.cbrt();
    let z3 = &probes[0];
    let ratio = z3.ratio.unwrap_or(f64::NAN);
    let z3_ok = z3.verdict == Verdict::ViolatedEstimates && (ratio - closed_form).abs() < 1e-12;
    let m2_ok = probes[1..].iter().all(|r| r.m == 2 && r.verdict == Verdict::Degenerate);

    // the CLI exit status separates the documented probes from regressions
    let cli = |extra: &[&str]| {
        let out = s.out.join("small_m_probes_cli");
        std::process::Command::new(env!("CARGO_BIN_EXE_bh-lab"))
            .args(["verify", "--config"])
            .arg(s.config("small_m_probes"))
            .arg("--out")
            .arg(&out)
            .args(extra)
            .output()
            .unwrap()
            .status
            .code()
    };
    let exits = (cli(&[]), cli(&["--expect-violations"]));
    outcome(
        base.pass && z3_ok && m2_ok && exits == (Some(1), Some(0)) && elapsed < Duration::from_secs(300),
        format!(
            "{}; z1^3 ratio {ratio:.10} {}; m=2 degenerate: {m2_ok}; exit codes plain/expect {exits:?}; {elapsed:.2?}",
            base.detail,
            z3.verdict.as_str()
        ),
    )
}

fn criterion_8(s: &Suite) -> Outcome {
    s.run(Command::Verify, "corollary", false);
    let reports = s.reports("corollary");
    let m1 = reports.iter().filter(|r| r.max_vars == Some(1)).count();
    let mut o = no_violations("corollary", &reports, 200);
    o.detail = format!("{} (M=1: {m1}, M=2: {})", o.detail, reports.len() - m1);
    o.pass &= m1 == 100;
    o
}

fn criterion_9(s: &Suite) -> Outcome {
    s.run(Command::Constants, "constants", false);
    let ratios: Vec<(u32, f64)> = [50u32, 100, 200, 400]
        .iter()
        .map(|&m| (m, constant_profile(m).unwrap().ratio_to_asymptote))
        .collect();
    let r = |m: u32| ratios.iter().find(|x| x.0 == m).unwrap().1;
    let at_100 = (r(100) - 0.9772).abs() <= 5e-4;
    let at_200 = (r(200) - 0.9844).abs() <= 5e-4;
    let monotone = ratios.windows(2).all(|w| w[1].1 > w[0].1);

    // the emitted table carries the same numbers
    let mut csv = csv::Reader::from_path(s.out.join("constants/constants.csv")).unwrap();
    let col = csv
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "ratio_to_asymptote")
        .unwrap();
    let table_ok = csv.records().map(Result::unwrap).all(|rec| {
        let m: u32 = rec[0].parse().unwrap();
        rec[col].parse::<f64>().unwrap() == constant_profile(m).unwrap().ratio_to_asymptote
    });
    outcome(
        at_100 && at_200 && monotone && table_ok,
        format!(
            "m=100: {:.7} (target 0.9772 ± 5e-4: {}); m=200: {:.7} (target 0.9844 ± 5e-4: {}); monotone on 50..400: {monotone}",
            r(100),
            pass_word(at_100),
            r(200),
            pass_word(at_200)
        ),
    )
}

fn criterion_10(s: &Suite) -> Outcome {
    s.run(Command::Trace, "trace", false);
    let text = std::fs::read_to_string(s.out.join("trace/trace.jsonl")).unwrap();
    let records: Vec<TraceRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let mut worst_identity: f64 = 0.0;
    let mut broken = 0;
    for t in &records {
        let stages = &t.report.stages;
        if t.report.first_failure.is_some() || !stages.iter().all(|s| s.holds) {
            broken += 1;
        }
        for w in stages.windows(2) {
            if w[1].step == StepKind::Identity {
                let rel = (w[1].value - w[0].value).abs() / w[0].value.abs().max(f64::MIN_POSITIVE);
                worst_identity = worst_identity.max(rel);
            }
        }
    }
    let degrees_ok = records.iter().all(|t| matches!(t.report.m, 3 | 4) && t.report.n <= 3);
    outcome(
        records.len() == 50 && broken == 0 && worst_identity <= 1e-12 && degrees_ok,
        format!(
            "{} chains, {broken} broken; worst identity mismatch {worst_identity:.1e}",
            records.len()
        ),
    )
}

fn criterion_11() -> Outcome {
    let kinds = [
        CoefficientKind::Steinhaus,
        CoefficientKind::Rademacher,
        CoefficientKind::ComplexGaussian,
    ];
    let opts = SearchOptions::default();
    let mut sandwich_failures = 0;
    let mut worst_parseval: f64 = 0.0;
    for t in 0..100u64 {
        let n = 1 + (t % 3) as usize;
        let m = 1 + ((t / 3) % 4) as u32;
        let p = random_polynomial(&EnsembleSpec {
            kind: kinds[(t % 3) as usize],
            support: Support::Full,
            seed: derive_seed(11, t),
            n,
            m,
        })
        .unwrap();
        let lower = sup_norm_lower(&p, &opts).value;
        let second = certified_sup(&p, 1e-4, DEFAULT_COST_CAP).unwrap().value;
        let k = (2.0 * (m as usize * n) as f64 * PI).ceil() as usize;
        let first = sup_norm_upper(&p, k).unwrap().value;
        if !(lower <= second && lower <= first) {
            sandwich_failures += 1;
        }
        let grid = torus_l2_grid(&p, 2 * m as usize + 1, DEFAULT_COST_CAP).unwrap().value;
        let coeff = l2_coeff_norm(&p).value;
        worst_parseval = worst_parseval.max((grid - coeff).abs() / coeff);
    }

    let mut monomials = 0;
    let mut worst_monomial: f64 = 0.0;
    for n in 1..=3 {
        for m in 1..=4 {
            for alpha in enumerate_alphas(m, n) {
                let p = HomogeneousPolynomial::monomial(alpha, Complex64::new(1.0, 0.0));
                let lower = sup_norm_lower(&p, &opts).value;
                let upper = certified_sup(&p, 5e-7, DEFAULT_COST_CAP).unwrap().value;
                worst_monomial = worst_monomial.max((lower - 1.0).abs()).max((upper - 1.0).abs());
                monomials += 1;
            }
        }
    }
    outcome(
        sandwich_failures == 0 && worst_monomial <= 1e-6 && worst_parseval <= 1e-10,
        format!(
            "100 instances, {sandwich_failures} sandwich failures; {monomials} monomials within {worst_monomial:.1e} of 1; \
             worst Parseval relative error {worst_parseval:.1e}"
        ),
    )
}

const RUNS: &[(&str, &str)] = &[
    ("lemmas", "lemmas"),
    ("blei", "blei"),
    ("helson", "verify"),
    ("bayart", "verify"),
    ("main_theorem", "verify"),
    ("small_m_probes", "verify"),
    ("corollary", "verify"),
    ("constants", "constants"),
    ("trace", "trace"),
];

fn criterion_12(s: &Suite) -> Outcome {
    s.run(Command::Lemmas, "lemmas", false);
    let rerun = s.out.join("rerun");
    let mut compared = 0;
    let mut differing = Vec::new();
    for (name, command) in RUNS {
        let out = rerun.join(name);
        let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_bh-lab"));
        cmd.args([*command, "--config"])
            .arg(s.config(name))
            .arg("--out")
            .arg(&out)
            .env("BH_LAB_THREADS", "3");
        // only the probes are expected to contain violations
        if *name == "small_m_probes" {
            cmd.arg("--expect-violations");
        }
        let code = cmd.output().unwrap().status.code();
        if code != Some(0) {
            differing.push(format!("{name}: exit {code:?}"));
        }
        for entry in std::fs::read_dir(s.out.join(name)).unwrap() {
            let a = entry.unwrap().path();
            let b = out.join(a.file_name().unwrap());
            compared += 1;
            if std::fs::read(&a).ok() != std::fs::read(&b).ok() {
                differing.push(display(&b));
            }
        }
    }
    outcome(
        differing.is_empty() && compared >= 15,
        format!(
            "{compared} files from {} configs compared, differing: {differing:?}",
            RUNS.len()
        ),
    )
}

fn display(p: &Path) -> String {
    p.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

type Criterion = Box<dyn Fn(&Suite) -> Outcome>;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/acceptance");
    let tmp = tempfile::tempdir().unwrap();
    let suite = Suite {
        configs: root,
        out: tmp.path().to_path_buf(),
    };
    let criteria: Vec<(u32, &str, Criterion)> = vec![
        (1, "combinatorial oracles", Box::new(|_| criterion_1())),
        (2, "divisor weight cross-check", Box::new(|_| criterion_2())),
        (3, "composition bound", Box::new(|_| criterion_3())),
        (4, "blei, standard exponent", Box::new(criterion_4)),
        (5, "helson verifier", Box::new(criterion_5)),
        (6, "bayart verifier", Box::new(criterion_6)),
        (7, "weighted inequality scan and probes", Box::new(criterion_7)),
        (8, "bounded-variable corollary", Box::new(criterion_8)),
        (9, "constant asymptote", Box::new(criterion_9)),
        (10, "proof-chain tracer", Box::new(criterion_10)),
        (11, "sup-norm sandwich", Box::new(|_| criterion_11())),
        (12, "determinism", Box::new(criterion_12)),
    ];
    let mut unexpected = Vec::new();
    for (id, title, check) in &criteria {
        let start = Instant::now();
        let o = check(&suite);
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == *id);
        let note = match (o.pass, known) {
            (false, Some((_, why))) => format!(" [expected failure: {why}]"),
            (true, Some(_)) => {
                unexpected.push(*id);
                " [listed as expected failure but passed]".to_string()
            }
            (false, None) => {
                unexpected.push(*id);
                String::new()
            }
            (true, None) => String::new(),
        };
        println!(
            "criterion {id:>2} {} {title}: {} ({:.1?}){note}",
            pass_word(o.pass),
            o.detail,
            start.elapsed()
        );
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
