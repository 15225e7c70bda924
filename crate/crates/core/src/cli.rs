//! Command-line front end. [`run`] takes its streams as arguments so that
//! tests can drive it without spawning a process.
//!
//! Exit codes: 0 success (or "yes"), 1 a check failed (or "no"), 2 bad
//! input, 3 undecided.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{ArgGroup, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ckalg::{validate, CkComplex, CkMatrix};
use crate::classify::{ck_iso, ext_w_pointed_iso, toeplitz_iso, toeplitz_triple, IsoVerdict, Question};
use crate::corpus;
use crate::diagrams::strong_duality_report;
use crate::error::{Error, Result};
use crate::fgab::{canonical_marked_display, pointed_iso_exists, Decision, MarkedGroup, SearchConfig};
use crate::intmat::IntMatrix;
use crate::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ckdual", version, about = "K-theory invariants and duality checks for Cuntz-Krieger matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the six invariant groups of a matrix.
    Invariants {
        /// Matrix file, or "-" for stdin.
        path: String,
        /// Transpose the input first, so the Toeplitz data describe T_M itself.
        #[arg(long)]
        transpose: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check every exact sequence, ladder square and unit identity for A and its transpose.
    Verify {
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide an isomorphism question for two matrices.
    #[command(group(ArgGroup::new("question").required(true).args(["toeplitz", "ck", "extw"])))]
    Iso {
        a: String,
        b: String,
        #[arg(long)]
        toeplitz: bool,
        #[arg(long)]
        ck: bool,
        #[arg(long)]
        extw: bool,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the reference example triples and verdicts.
    PaperExamples {
        #[arg(long)]
        json: bool,
    },
    /// Run the duality checks over all (n <= 3) or sampled matrices of one size.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        size: u64,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// A named 0-1 matrix as read from a file.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct MatrixDocument {
    #[serde(default)]
    pub name: Option<String>,
    pub matrix: Vec<Vec<i64>>,
}

impl MatrixDocument {
    /// Structured input when the first non-blank byte is `{`, otherwise
    /// rows of space-separated entries with an optional `# name` line.
    pub fn parse(text: &str) -> Result<Self> {
        let doc = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            Self::parse_plain(text)?
        };
        doc.check()?;
        Ok(doc)
    }

    fn parse_plain(text: &str) -> Result<Self> {
        let mut name = None;
        let mut matrix = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if matrix.is_empty() && name.is_none() {
                    name = Some(rest.trim().to_string());
                }
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("line {}: {t:?} is not an integer", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            matrix.push(row);
        }
        Ok(MatrixDocument { name, matrix })
    }

    fn check(&self) -> Result<()> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(Error::Parse("no matrix rows".into()));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Parse(format!("matrix is not square: row {i} has {} entries, expected {n}", row.len())));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| x != 0 && x != 1) {
                return Err(Error::Parse(format!("entry ({i}, {j}) = {} is not 0 or 1", row[j])));
            }
        }
        Ok(())
    }

    pub fn to_ck(&self) -> Result<CkMatrix> {
        validate(&IntMatrix::from_rows(&self.matrix))
    }
}

struct Input {
    source: String,
    doc: MatrixDocument,
    digest: String,
}

impl Input {
    fn json(&self) -> Value {
        json!({"source": self.source, "name": self.doc.name, "sha256": self.digest})
    }

    fn label(&self) -> String {
        self.doc.name.clone().unwrap_or_else(|| self.source.clone())
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<Input> {
    let mut bytes = Vec::new();
    if path == "-" {
        stdin.read_to_end(&mut bytes).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse(format!("{path}: not UTF-8")))?;
    Ok(Input {
        source: path.to_string(),
        doc: MatrixDocument::parse(&text)?,
        digest: hex::encode(Sha256::digest(&bytes)),
    })
}

fn matrix_json(a: &CkMatrix) -> Value {
    json::matrix(a.matrix())
}

fn report(command: &str, flags: Value, inputs: &[&Input], results: Value, pass: bool) -> Value {
    json!({
        "command": command,
        "flags": flags,
        "inputs": inputs.iter().map(|i| i.json()).collect::<Vec<_>>(),
        "results": results,
        "pass": pass,
    })
}

fn emit_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Parse(format!("write failed: {e}"));
    match cmd {
        Command::Invariants { path, transpose, json } => {
            let input = read_input(&path, stdin)?;
            let a = input.doc.to_ck()?;
            let a = if transpose { a.transpose() } else { a };
            let results = invariants_json(&a)?;
            if json {
                let flags = json!({"transpose": transpose});
                emit_json(out, &report("invariants", flags, &[&input], results, true)).map_err(io)?;
            } else {
                write_invariants_text(out, &input.label(), transpose, &a).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { path, json } => {
            let input = read_input(&path, stdin)?;
            let a = input.doc.to_ck()?;
            let rep = strong_duality_report(&a)?;
            if json {
                let results = json!({
                    "matrix": matrix_json(&a),
                    "report": serde_json::to_value(&rep).expect("report serializes"),
                });
                emit_json(out, &report("verify", json!({}), &[&input], results, rep.pass)).map_err(io)?;
            } else {
                writeln!(out, "{}: {} checks, {}", input.label(), rep.checks.len(), if rep.pass { "pass" } else { "FAIL" })
                    .map_err(io)?;
                for c in rep.failures() {
                    writeln!(out, "  {} {:?} at {}: {}", c.diagram, c.kind, c.location, c.witness.as_deref().unwrap_or(""))
                        .map_err(io)?;
                }
            }
            Ok(if rep.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Iso { a, b, toeplitz, ck, extw, json } => {
            let question = match (toeplitz, ck, extw) {
                (true, _, _) => Question::ToeplitzIso,
                (_, true, _) => Question::CkIso,
                _ => Question::ExtWPointedIso,
            };
            let ia = read_input(&a, stdin)?;
            let ib = read_input(&b, stdin)?;
            let cfg = SearchConfig::from_env()?;
            let v = decide(question, &ia.doc.to_ck()?, &ib.doc.to_ck()?, &cfg)?;
            let code = match v.decision {
                Decision::Yes(_) => EXIT_OK,
                Decision::No => EXIT_FAIL,
                Decision::Unknown(_) => EXIT_UNKNOWN,
            };
            if json {
                let flags = json!({"question": question.label()});
                emit_json(out, &report("iso", flags, &[&ia, &ib], verdict_json(&v), v.decision.is_yes())).map_err(io)?;
            } else {
                let extra = match &v.decision {
                    Decision::Unknown(why) => format!(" ({why})"),
                    _ => String::new(),
                };
                writeln!(out, "{}: {}{extra}", question.label(), v.decision.label()).map_err(io)?;
            }
            Ok(code)
        }
        Command::PaperExamples { json } => {
            let cfg = SearchConfig::from_env()?;
            let (lines, pass) = reference_examples(&ReferenceTable::builtin(), &cfg)?;
            if json {
                let results = Value::Array(lines.iter().map(ExampleLine::json).collect());
                emit_json(out, &report("paper-examples", json!({}), &[], results, pass)).map_err(io)?;
            } else {
                for l in &lines {
                    writeln!(out, "[{}] {}: expected {}, computed {}", if l.pass { "ok" } else { "MISMATCH" }, l.label, l.expected, l.computed)
                        .map_err(io)?;
                }
            }
            Ok(if pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Enumerate { size, limit, seed, json } => {
            let cfg = SearchConfig::from_env()?;
            let summary = corpus::run(size as usize, limit, seed, &cfg)?;
            if json {
                let flags = json!({"size": size, "limit": limit, "seed": seed});
                let results = serde_json::to_value(&summary).expect("summary serializes");
                emit_json(out, &report("enumerate", flags, &[], results, summary.pass())).map_err(io)?;
            } else {
                writeln!(
                    out,
                    "size {}: {} matrices, {} pass duality checks; transpose consistency {}/{} pairs",
                    summary.size, summary.matrices, summary.passed, summary.pairs_consistent, summary.pairs_checked
                )
                .map_err(io)?;
            }
            Ok(if summary.pass() { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

pub fn decide(q: Question, a: &CkMatrix, b: &CkMatrix, cfg: &SearchConfig) -> Result<IsoVerdict> {
    match q {
        Question::ToeplitzIso => toeplitz_iso(a, b, cfg),
        Question::CkIso => ck_iso(a, b, cfg),
        Question::ExtWPointedIso => ext_w_pointed_iso(a, b, cfg),
    }
}

fn verdict_json(v: &IsoVerdict) -> Value {
    let mut out = json!({
        "question": v.question.label(),
        "criterion": v.criterion(),
        "matrices": [matrix_json(&v.inputs.0), matrix_json(&v.inputs.1)],
        "decision": v.decision.label(),
    });
    match &v.decision {
        Decision::Yes(h) => out["witness"] = json::matrix(h.matrix()),
        Decision::Unknown(why) => out["reason"] = Value::from(why.as_str()),
        Decision::No => {}
    }
    out
}

pub fn invariants_json(a: &CkMatrix) -> Result<Value> {
    let inv = CkComplex::new(a)?.invariants()?;
    Ok(json!({
        "matrix": matrix_json(a),
        "ext_w": json::marked_group(&inv.ext_w),
        "ext_s": json::marked_group(&inv.ext_s),
        "k0_toeplitz": json::marked_group(&inv.k0_toeplitz),
        "k1_toeplitz": json::group(&inv.k1_toeplitz),
        "k0_ck": json::marked_group(&inv.k0_ck),
        "k1_ck": json::group(&inv.k1_ck),
    }))
}

fn write_invariants_text(out: &mut dyn Write, label: &str, transpose: bool, a: &CkMatrix) -> std::io::Result<()> {
    let inv = CkComplex::new(a)
        .and_then(|c| c.invariants())
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    let t = if transpose { " (transposed)" } else { "" };
    writeln!(out, "{label}{t}: N = {}", a.n())?;
    let marked = |m: &MarkedGroup| canonical_marked_display(m).to_string();
    writeln!(out, "  ext_w        {}", marked(&inv.ext_w))?;
    writeln!(out, "  ext_s        {}", marked(&inv.ext_s))?;
    writeln!(out, "  k0_toeplitz  {}", marked(&inv.k0_toeplitz))?;
    writeln!(out, "  k1_toeplitz  {}", inv.k1_toeplitz)?;
    writeln!(out, "  k0_ck        {}", marked(&inv.k0_ck))?;
    writeln!(out, "  k1_ck        {}", inv.k1_ck)
}

/// A matrix from the reference table, possibly transposed.
#[derive(Clone, Debug)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<i64>>,
}

impl NamedMatrix {
    fn new(name: &str, rows: &[&[i64]]) -> Self {
        NamedMatrix {
            name: name.into(),
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    fn t(&self) -> Self {
        let n = self.rows.len();
        NamedMatrix {
            name: format!("{}^t", self.name),
            rows: (0..n).map(|i| (0..n).map(|j| self.rows[j][i]).collect()).collect(),
        }
    }

    pub fn ck(&self) -> Result<CkMatrix> {
        CkMatrix::from_rows(&self.rows)
    }
}

/// Expected K₀ triple `(free_rank, torsion, [e₀], [1])` of a matrix.
#[derive(Clone, Debug)]
pub struct TripleCase {
    pub matrix: NamedMatrix,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub marks: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct VerdictCase {
    pub question: Question,
    pub a: NamedMatrix,
    pub b: NamedMatrix,
    pub expect_yes: bool,
}

#[derive(Clone, Debug)]
pub struct ReferenceTable {
    pub triples: Vec<TripleCase>,
    pub verdicts: Vec<VerdictCase>,
}

impl ReferenceTable {
    /// The worked reference examples with their stated answers.
    pub fn builtin() -> Self {
        let b = NamedMatrix::new("B", &[&[1, 1], &[1, 1]]);
        let bm = NamedMatrix::new("B-", &[&[1, 1, 0, 0], &[1, 1, 1, 0], &[0, 1, 1, 1], &[0, 0, 1, 1]]);
        let f = NamedMatrix::new("F", &[&[1, 1], &[1, 0]]);
        let c = NamedMatrix::new("C", &[&[1, 1, 1], &[1, 1, 1], &[1, 0, 1]]);
        let d = NamedMatrix::new("D", &[&[0, 1, 1], &[1, 1, 1], &[1, 0, 1]]);
        let a = NamedMatrix::new("A", &[&[1, 1, 1], &[1, 1, 1], &[1, 0, 0]]);
        let z = |m: &NamedMatrix, e0: i64, one: i64| TripleCase {
            matrix: m.clone(),
            free_rank: 1,
            torsion: vec![],
            marks: vec![vec![e0], vec![one]],
        };
        let triples = vec![
            z(&b, 1, 0),
            z(&bm, 1, -1),
            z(&f, 1, -2),
            z(&c, 1, -1),
            z(&d, 1, 0),
            z(&a, 2, -2),
            TripleCase {
                matrix: a.t(),
                free_rank: 1,
                torsion: vec![2],
                marks: vec![vec![1, 0], vec![-1, 1]],
            },
        ];
        let toe = |x: &NamedMatrix, y: &NamedMatrix, yes: bool| VerdictCase {
            question: Question::ToeplitzIso,
            a: x.clone(),
            b: y.clone(),
            expect_yes: yes,
        };
        let mut verdicts = vec![
            toe(&b, &d.t(), true),
            toe(&bm, &c.t(), true),
            toe(&f, &b, false),
            toe(&f, &bm, false),
            toe(&f, &c.t(), false),
            toe(&f, &d.t(), false),
        ];
        let five = [&b, &bm, &f, &c, &d];
        for i in 0..five.len() {
            for j in i + 1..five.len() {
                verdicts.push(VerdictCase {
                    question: Question::CkIso,
                    a: five[i].clone(),
                    b: five[j].clone(),
                    expect_yes: true,
                });
            }
        }
        verdicts.push(toe(&a, &a.t(), false));
        verdicts.push(VerdictCase {
            question: Question::CkIso,
            a: a.clone(),
            b: a.t(),
            expect_yes: false,
        });
        ReferenceTable { triples, verdicts }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleLine {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl ExampleLine {
    fn json(&self) -> Value {
        json!({"label": self.label, "expected": self.expected, "computed": self.computed, "pass": self.pass})
    }
}

/// Recomputes every row of `table`. A triple row passes when the computed
/// triple is pointed-isomorphic to the expected literal; a verdict row when
/// the decision matches.
pub fn reference_examples(table: &ReferenceTable, cfg: &SearchConfig) -> Result<(Vec<ExampleLine>, bool)> {
    let mut lines = Vec::new();
    for t in &table.triples {
        let computed = toeplitz_triple(&t.matrix.ck()?, false)?;
        let marks: Vec<&[i64]> = t.marks.iter().map(Vec::as_slice).collect();
        let expected = MarkedGroup::literal(t.free_rank, &t.torsion, &marks)?;
        let d = pointed_iso_exists(&computed, &expected, cfg)?;
        lines.push(ExampleLine {
            label: format!("triple {}", t.matrix.name),
            expected: canonical_marked_display(&expected).to_string(),
            computed: canonical_marked_display(&computed).to_string(),
            pass: d.is_yes(),
        });
    }
    for v in &table.verdicts {
        let d = decide(v.question, &v.a.ck()?, &v.b.ck()?, cfg)?.decision;
        lines.push(ExampleLine {
            label: format!("{} {} vs {}", v.question.label(), v.a.name, v.b.name),
            expected: if v.expect_yes { "yes" } else { "no" }.into(),
            computed: d.label().into(),
            pass: d.is_yes() == v.expect_yes && !d.is_unknown(),
        });
    }
    let pass = lines.iter().all(|l| l.pass);
    Ok((lines, pass))
}
