use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anlattice::audit::{self, symbolic, Classification};
use anlattice::generate::{self, canonical_an, gap_basis, ScrambleRecipe};
use anlattice::hypotheses::{check_all, HypothesisError, Witness, DEFAULT_BUDGET};
use anlattice::linalg::{BasisChange, IntMatrix, IntVector};
use anlattice::normalize::{extract_basis, normalize, normalize_all_choices, twin_basis, TraceStep};
use anlattice::{read_set, write_set, NormalizeError, VectorSet};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "anlattice", version, about = "Recognize and normalize minimal-vector families of A_n")]
struct Cli {
    /// Write results to FILE instead of standard output.
    #[arg(short = 'o', long = "output", value_name = "FILE", global = true)]
    output: Option<PathBuf>,
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of n-subsets enumerated by determinant scans.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,
    /// Print the normalizer's intermediate steps on standard error.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the canonical family of rank N, optionally in another basis.
    Gen {
        n: usize,
        /// Scramble with a random unimodular basis change, given as SEED:STEPS.
        #[arg(long, value_name = "SEED:STEPS")]
        scramble: Option<ScrambleRecipe>,
        /// Express the family in the split frame with parameter R (applied before --scramble).
        #[arg(long, value_name = "R")]
        gap: Option<usize>,
    },
    /// Evaluate the five recognition hypotheses.
    Check {
        /// Vector-set file, or - for standard input.
        file: PathBuf,
    },
    /// Find a basis in which the family is canonical.
    Normalize {
        file: PathBuf,
        /// 1-based position in the half-system of the vector used as e1.
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        e1: Option<u64>,
        /// Run once for every choice of e1 and report each outcome.
        #[arg(long, conflicts_with = "e1")]
        all_choices: bool,
    },
    /// Check the structural lemmas on a family.
    Audit {
        file: PathBuf,
        #[arg(long, value_enum)]
        lemma: Option<Lemma>,
        /// 1-based half-system position of e1 for the twin and table checks (default: all).
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        e1: Option<u64>,
    },
    /// Reproduce the pair count of the split-frame example for given N and R.
    Counterexample { n: usize, r: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    /// Characteristic determinants bounded by K.
    #[value(name = "6.1.5", alias = "minor-bound")]
    MinorBound,
    /// No forbidden pairs or triples.
    #[value(name = "6.1.6", alias = "forbidden")]
    Forbidden,
    /// At most n-1 twin systems.
    #[value(name = "6.1.7", alias = "twins")]
    Twins,
    /// Exactly one entry per index pair in the classification table.
    #[value(name = "4.2", alias = "table")]
    Table,
}

impl Lemma {
    const ALL: [Lemma; 4] = [Lemma::MinorBound, Lemma::Forbidden, Lemma::Twins, Lemma::Table];

    fn label(self) -> &'static str {
        match self {
            Lemma::MinorBound => "6.1.5",
            Lemma::Forbidden => "6.1.6",
            Lemma::Twins => "6.1.7",
            Lemma::Table => "4.2",
        }
    }
}

/// Outcome categories and their exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Rejected = 1,
    Internal = 2,
    Io = 3,
}

struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure { status: Status::Io, message: message.into() }
    }

    fn rejected(message: impl Into<String>) -> Self {
        Failure { status: Status::Rejected, message: message.into() }
    }
}

/// What a command produced: text or JSON for the output stream, plus status.
struct Report {
    text: String,
    json: Value,
    status: Status,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Io as u8 } else { Status::Ok as u8 });
        }
    };
    let result = match &cli.command {
        Command::Gen { n, scramble, gap } => cmd_gen(*n, *scramble, *gap),
        Command::Check { file } => cmd_check(file, cli.budget),
        Command::Normalize { file, e1, all_choices } => cmd_normalize(file, *e1, *all_choices, cli.trace),
        Command::Audit { file, lemma, e1 } => cmd_audit(file, *lemma, *e1, cli.budget),
        Command::Counterexample { n, r } => cmd_counterexample(*n, *r),
    };
    match result {
        Ok(report) => {
            let body = if cli.json {
                let mut s = serde_json::to_string(&report.json).expect("JSON values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            if let Err(e) = emit(cli.output.as_deref(), &body) {
                eprintln!("error: {e}");
                return ExitCode::from(Status::Io as u8);
            }
            ExitCode::from(report.status as u8)
        }
        Err(f) => {
            if cli.json {
                let obj = json!({ "error": f.message, "exit": f.status as u8 });
                println!("{}", serde_json::to_string(&obj).expect("JSON values serialize"));
            }
            eprintln!("{}", f.message);
            ExitCode::from(f.status as u8)
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, body.as_bytes())
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

fn load(path: &Path) -> Result<VectorSet, Failure> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    read_set(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn vec_json(v: &IntVector) -> Value {
    json!(v.coords())
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!(m.to_rows())
}

fn set_json(s: &VectorSet) -> Value {
    Value::Array(s.iter().map(vec_json).collect())
}

fn cmd_gen(n: usize, scramble: Option<ScrambleRecipe>, gap: Option<usize>) -> Result<Report, Failure> {
    let mut set = canonical_an(n).map_err(|e| Failure::io(e.to_string()))?;
    if let Some(r) = gap {
        let b = gap_basis(n, r).map_err(|e| Failure::io(e.to_string()))?;
        set = set.transform(&b).map_err(|e| Failure::io(e.to_string()))?;
    }
    let mut basis = None;
    if let Some(recipe) = scramble {
        let (s, u) = generate::scramble(&set, recipe).map_err(|e| Failure::io(e.to_string()))?;
        set = s;
        basis = Some(matrix_json(u.matrix()));
    }
    Ok(Report {
        text: write_set(&set),
        json: json!({
            "command": "gen",
            "n": n,
            "gap": gap,
            "scramble": scramble.map(|r| r.to_string()),
            "scramble_basis": basis,
            "vectors": set_json(&set),
        }),
        status: Status::Ok,
    })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::ZeroVector(v) => json!({ "kind": "zero", "vector": vec_json(v) }),
        Witness::Unpaired(v) => json!({ "kind": "unpaired", "vector": vec_json(v) }),
        Witness::Rank { achieved, required } => {
            json!({ "kind": "rank", "achieved": achieved, "required": required })
        }
        Witness::Cardinality { achieved, required } => {
            json!({ "kind": "count", "achieved": achieved, "required": required })
        }
        Witness::Subset(g) => json!({
            "kind": "subset",
            "det": g.det,
            "vectors": g.vectors.iter().map(vec_json).collect::<Vec<_>>(),
        }),
    }
}

fn hypothesis_failure(e: HypothesisError) -> Failure {
    match e {
        HypothesisError::BudgetExceeded { .. } => Failure::rejected(format!("BudgetExceeded: {e}")),
        other => Failure::io(other.to_string()),
    }
}

fn cmd_check(file: &Path, budget: u64) -> Result<Report, Failure> {
    let set = load(file)?;
    let report = check_all(&set, set.dim(), budget).map_err(hypothesis_failure)?;
    let mut text = String::new();
    let mut entries = Vec::new();
    for r in report.iter() {
        let k = r.hypothesis.number();
        match &r.witness {
            None => text.push_str(&format!("hyp{k} PASS\n")),
            Some(w) => text.push_str(&format!("hyp{k} FAIL {w}\n")),
        }
        entries.push(json!({
            "hypothesis": k,
            "name": format!("{:?}", r.hypothesis),
            "passed": r.passed(),
            "witness": r.witness.as_ref().map(witness_json),
        }));
    }
    let status = if report.all_pass() { Status::Ok } else { Status::Rejected };
    Ok(Report {
        text,
        json: json!({
            "command": "check",
            "n": set.dim(),
            "count": set.len(),
            "accepted": report.all_pass(),
            "hypotheses": entries,
        }),
        status,
    })
}

fn normalize_failure(e: &NormalizeError) -> Failure {
    let status = if e.is_internal() { Status::Internal } else { Status::Rejected };
    Failure { status, message: format!("{}: {e}", e.name()) }
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

fn trace_text(trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for step in trace {
        match step {
            TraceStep::ChoseE1 { index, vector } => match index {
                Some(k) => out.push_str(&format!("e1 = [{vector}] (half-system position {})\n", k + 1)),
                None => out.push_str(&format!("e1 = [{vector}]\n")),
            },
            TraceStep::TwinClasses(twins) => {
                out.push_str(&format!("twin systems: {}\n", twins.len()));
                for t in twins {
                    out.push_str(&format!("  {{[{}], [{}]}}\n", t.x, t.partner));
                }
            }
            TraceStep::Table(c) => {
                out.push_str("classification:\n");
                out.push_str(&indent(&c.to_string()));
            }
            TraceStep::Substitution { j, new } => {
                out.push_str(&format!("e{0} <- e1 - e{0} = [{new}]\n", j + 1));
            }
        }
    }
    out
}

fn trace_json(trace: &[TraceStep]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|step| match step {
                TraceStep::ChoseE1 { index, vector } => {
                    json!({ "step": "e1", "position": index.map(|k| k + 1), "vector": vec_json(vector) })
                }
                TraceStep::TwinClasses(twins) => json!({
                    "step": "twins",
                    "systems": twins.iter().map(|t| json!([vec_json(&t.x), vec_json(&t.partner)])).collect::<Vec<_>>(),
                }),
                TraceStep::Table(c) => json!({ "step": "table", "rows": c.to_string().lines().collect::<Vec<_>>() }),
                TraceStep::Substitution { j, new } => {
                    json!({ "step": "substitution", "index": j + 1, "vector": vec_json(new) })
                }
            })
            .collect(),
    )
}

fn matrix_text(m: &IntMatrix) -> String {
    m.to_string()
}

fn cmd_normalize(file: &Path, e1: Option<u64>, all: bool, trace: bool) -> Result<Report, Failure> {
    let set = load(file)?;
    if all {
        return normalize_every_choice(&set);
    }
    let index = e1.map(|k| usize::try_from(k - 1).unwrap_or(usize::MAX));
    let res = normalize(&set, index).map_err(|e| normalize_failure(&e))?;
    if trace {
        eprint!("{}", trace_text(&res.trace));
    }
    let mut text = matrix_text(res.basis.matrix());
    text.push_str(&write_set(&res.normalized));
    let mut obj = json!({
        "command": "normalize",
        "n": set.dim(),
        "basis": matrix_json(res.basis.matrix()),
        "normalized": set_json(&res.normalized),
    });
    if trace {
        obj["trace"] = trace_json(&res.trace);
    }
    Ok(Report { text, json: obj, status: Status::Ok })
}

fn normalize_every_choice(set: &VectorSet) -> Result<Report, Failure> {
    let half = set.half_system().map_err(|e| normalize_failure(&e.into()))?;
    let runs = normalize_all_choices(set);
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut status = Status::Ok;
    for (k, (run, e1)) in runs.iter().zip(half.iter()).enumerate() {
        match run {
            Ok(res) => {
                text.push_str(&format!("choice {} e1=[{e1}] OK\n", k + 1));
                entries.push(json!({ "position": k + 1, "e1": vec_json(e1), "ok": true, "basis": matrix_json(res.basis.matrix()) }));
            }
            Err(e) => {
                let f = normalize_failure(e);
                status = status.max(f.status);
                text.push_str(&format!("choice {} e1=[{e1}] FAIL {}\n", k + 1, f.message));
                entries
                    .push(json!({ "position": k + 1, "e1": vec_json(e1), "ok": false, "error": f.message }));
            }
        }
    }
    let ok = runs.iter().filter(|r| r.is_ok()).count();
    text.push_str(&format!("choices={} ok={ok}\n", runs.len()));
    Ok(Report {
        text,
        json: json!({ "command": "normalize", "n": set.dim(), "choices": entries, "ok": ok }),
        status,
    })
}

/// Identity when every `e_i` is in the set, otherwise a basis extracted from it.
fn audit_basis(set: &VectorSet) -> Result<BasisChange, String> {
    let n = set.dim();
    if (0..n).all(|i| set.contains(&IntVector::unit(n, i))) {
        return Ok(BasisChange::identity(n));
    }
    extract_basis(set).map_err(|e| format!("{}: {e}", e.name()))
}

struct LemmaOutcome {
    lines: Vec<String>,
    json: Value,
    passed: bool,
}

fn cmd_audit(file: &Path, lemma: Option<Lemma>, e1: Option<u64>, budget: u64) -> Result<Report, Failure> {
    let set = load(file)?;
    let lemmas = match lemma {
        Some(l) => vec![l],
        None => Lemma::ALL.to_vec(),
    };
    let positions: Vec<usize> = match (e1, set.half_system()) {
        (Some(k), Ok(h)) => {
            let k = usize::try_from(k - 1).unwrap_or(usize::MAX);
            if k >= h.len() {
                return Err(Failure::rejected(format!(
                    "E1IndexOutOfRange: position {} of {}",
                    k + 1,
                    h.len()
                )));
            }
            vec![k]
        }
        (None, Ok(h)) => (0..h.len()).collect(),
        (_, Err(e)) if lemmas.iter().any(|l| matches!(l, Lemma::Twins | Lemma::Table)) => {
            return Err(Failure::rejected(format!("InvalidInput: {e}")));
        }
        (_, Err(_)) => Vec::new(),
    };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all_pass = true;
    for l in lemmas {
        let out = match l {
            Lemma::MinorBound => audit_minor_bound(&set, budget),
            Lemma::Forbidden => audit_forbidden(&set),
            Lemma::Twins => audit_twins(&set, &positions),
            Lemma::Table => audit_table(&set, &positions),
        }
        .map_err(|e| Failure::rejected(format!("{} {e}", l.label())))?;
        all_pass &= out.passed;
        for line in &out.lines {
            text.push_str(line);
            text.push('\n');
        }
        results.push(json!({ "lemma": l.label(), "passed": out.passed, "report": out.json }));
    }
    Ok(Report {
        text,
        json: json!({ "command": "audit", "n": set.dim(), "passed": all_pass, "lemmas": results }),
        status: if all_pass { Status::Ok } else { Status::Rejected },
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn audit_minor_bound(set: &VectorSet, budget: u64) -> Result<LemmaOutcome, String> {
    let basis = audit_basis(set)?;
    let rep = audit::check_minor_bound(set, &basis, budget).map_err(|e| e.to_string())?;
    let mut line = format!("6.1.5 K={} maxminor={} {}", rep.k, rep.max_minor, pass(rep.passed()));
    let witness = rep.violation.as_ref().or(rep.exceeds_k.as_ref());
    if let Some(w) = witness {
        let rows: Vec<String> = w.rows.iter().map(|r| (r + 1).to_string()).collect();
        let vs: Vec<String> = w.vectors.iter().map(symbolic).collect();
        line.push_str(&format!(" minor={} rows=({}) vectors={}", w.value, rows.join(","), vs.join(",")));
    }
    Ok(LemmaOutcome {
        lines: vec![line],
        json: json!({
            "basis": matrix_json(basis.matrix()),
            "k": rep.k,
            "max_minor": rep.max_minor,
            "minors_checked": rep.minors_checked,
            "witness": witness.map(|w| json!({
                "rows": w.rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
                "vectors": w.vectors.iter().map(vec_json).collect::<Vec<_>>(),
                "value": w.value,
            })),
        }),
        passed: rep.passed(),
    })
}

fn audit_forbidden(set: &VectorSet) -> Result<LemmaOutcome, String> {
    let basis = audit_basis(set)?;
    let pairs = audit::find_forbidden_pairs(set, &basis).map_err(|e| e.to_string())?;
    let triples = audit::find_forbidden_triples(set, &basis).map_err(|e| e.to_string())?;
    let passed = pairs.is_empty() && triples.is_empty();
    let mut lines = Vec::new();
    if passed {
        lines.push("6.1.6 pairs=0 triples=0 PASS".to_string());
    }
    for p in &pairs {
        lines.push(format!(
            "6.1.6 FAIL pair (i,j)=({},{}) minor={} x={} y={}",
            p.coords.0 + 1,
            p.coords.1 + 1,
            p.minor,
            symbolic(&p.x),
            symbolic(&p.y)
        ));
    }
    for t in &triples {
        let (a, b, c) = t.coords;
        lines.push(format!("6.1.6 FAIL triple (i,j,k)=({},{},{})", a + 1, b + 1, c + 1));
    }
    Ok(LemmaOutcome {
        lines,
        json: json!({
            "basis": matrix_json(basis.matrix()),
            "pairs": pairs.iter().map(|p| json!({
                "coords": [p.coords.0 + 1, p.coords.1 + 1],
                "x": vec_json(&p.x),
                "y": vec_json(&p.y),
                "minor": p.minor,
            })).collect::<Vec<_>>(),
            "triples": triples.iter().map(|t| json!({
                "coords": [t.coords.0 + 1, t.coords.1 + 1, t.coords.2 + 1],
                "vectors": t.vectors.iter().map(vec_json).collect::<Vec<_>>(),
                "det": t.det,
            })).collect::<Vec<_>>(),
        }),
        passed,
    })
}

fn audit_twins(set: &VectorSet, positions: &[usize]) -> Result<LemmaOutcome, String> {
    let half = set.half_system().map_err(|e| e.to_string())?;
    let bound = set.dim() - 1;
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    let mut passed = true;
    for &k in positions {
        let e1 = &half.as_slice()[k];
        let twins = audit::twin_systems(set, e1).map_err(|e| e.to_string())?;
        let ok = twins.len() <= bound;
        passed &= ok;
        lines.push(format!("6.1.7 e1=[{e1}] twins={} {}", twins.len(), pass(ok)));
        entries.push(json!({ "position": k + 1, "e1": vec_json(e1), "twins": twins.len(), "bound": bound }));
    }
    Ok(LemmaOutcome { lines, json: Value::Array(entries), passed })
}

fn audit_table(set: &VectorSet, positions: &[usize]) -> Result<LemmaOutcome, String> {
    let half = set.half_system().map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    let mut passed = true;
    for &k in positions {
        let e1 = &half.as_slice()[k];
        let table: Result<Classification, String> = twin_basis(set, e1)
            .map_err(|e| format!("{}: {e}", e.name()))
            .and_then(|(_, b)| audit::classify(set, &b).map_err(|e| e.to_string()));
        match table {
            Ok(c) => {
                let ok = c.accepted();
                passed &= ok;
                lines.push(format!("4.2 e1=[{e1}] {}", pass(ok)));
                lines.extend(c.to_string().lines().map(|l| format!("  {l}")));
                entries.push(json!({
                    "position": k + 1,
                    "e1": vec_json(e1),
                    "passed": ok,
                    "rows": c.to_string().lines().collect::<Vec<_>>(),
                }));
            }
            Err(msg) => {
                passed = false;
                lines.push(format!("4.2 e1=[{e1}] FAIL {msg}"));
                entries.push(json!({ "position": k + 1, "e1": vec_json(e1), "passed": false, "error": msg }));
            }
        }
    }
    Ok(LemmaOutcome { lines, json: Value::Array(entries), passed })
}

fn cmd_counterexample(n: usize, r: usize) -> Result<Report, Failure> {
    let rep = audit::counterexample(n, r).map_err(|e| Failure::io(e.to_string()))?;
    let mut text = String::from("basis\n");
    text.push_str(&matrix_text(rep.basis.matrix()));
    text.push_str(&format!("kept_pairs={}\n", rep.kept_pairs));
    text.push_str(&format!("modified_pairs={}\n", rep.modified_pairs));
    text.push_str(&format!("expected_modified_pairs={}\n", rep.expected_modified));
    let twins: Vec<String> =
        rep.twins.iter().map(|t| format!("{{{}, {}}}", symbolic(&t.x), symbolic(&t.partner))).collect();
    text.push_str(&format!("twins={} {}\n", rep.twins.len(), twins.join(" ")));
    text.push_str(&format!("{}\n", pass(rep.reproduced())));
    Ok(Report {
        text,
        json: json!({
            "command": "counterexample",
            "n": n,
            "r": r,
            "basis": matrix_json(rep.basis.matrix()),
            "kept_pairs": rep.kept_pairs,
            "modified_pairs": rep.modified_pairs,
            "expected_modified_pairs": rep.expected_modified,
            "twins": twins,
            "reproduced": rep.reproduced(),
        }),
        status: if rep.reproduced() { Status::Ok } else { Status::Rejected },
    })
}
