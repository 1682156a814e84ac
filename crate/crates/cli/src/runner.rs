//! Runs scripts as fixtures: executes commands, compares expectations and
//! applies the soundness gate.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use tensorcoh::checks::{Hypothesis, Verdict};

use crate::corpus::Fixture;
use crate::dsl::{Provenance, Script, Span, StmtKind};
use crate::session::{Options, Session};

/// One line of the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub fixture: String,
    pub check: String,
    pub hypotheses: Vec<Hypothesis>,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: Verdict,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub line: usize,
    pub check: String,
    pub path: String,
    pub expected: Value,
    pub got: Option<Value>,
    pub tag: Provenance,
}

#[derive(Debug, Clone)]
pub struct FixtureRun {
    pub id: String,
    pub anchors: Vec<String>,
    pub records: Vec<Record>,
    /// Measured value of every expectation, keyed by the expectation's key.
    pub outputs: Map<String, Value>,
    pub mismatches: Vec<Mismatch>,
    /// Proven statements the engine found false.
    pub soundness: Vec<String>,
    /// Failures matched by a `known-discrepancy` line.
    pub discrepancies: Vec<String>,
    pub csv: Vec<String>,
}

impl FixtureRun {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.soundness.is_empty()
    }

    /// Human-readable lines for every problem, naming fixture, line and check.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = self.soundness.clone();
        for m in &self.mismatches {
            let got = m.got.as_ref().map_or("nothing".to_string(), Value::to_string);
            out.push(format!(
                "{} line {}: {} {}: expected {} ({}), got {got}",
                self.id,
                m.line,
                m.check,
                m.path,
                m.expected,
                m.tag.keyword()
            ));
        }
        out
    }
}

/// Anything that stops a script before it produces results.
#[derive(Debug, Clone)]
pub struct InputError {
    pub source: String,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.source, self.message)
    }
}

impl std::error::Error for InputError {}

pub fn run_script(id: &str, source: &str, script: &Script, opts: &Options) -> Result<FixtureRun, InputError> {
    let input_err = |span: Span, message: String| InputError { source: source.to_string(), message: format!("{span}: {message}") };
    let mut session = Session::new(opts.clone());
    let mut records: Vec<Record> = Vec::new();
    // Whether the record at the same index is judged by expectations alone.
    let mut plain: Vec<bool> = Vec::new();
    let mut outputs = Map::new();
    let mut mismatches = Vec::new();
    let mut soundness = Vec::new();
    let mut discrepancies = Vec::new();
    let mut csv = Vec::new();
    let mut last: Option<(usize, Value)> = None;

    for stmt in &script.stmts {
        if let StmtKind::Expect(e) = &stmt.kind {
            let Some((idx, output)) = &last else {
                return Err(input_err(stmt.span, "`expect` needs a preceding command".into()));
            };
            let got = e.lookup(output).cloned();
            let rec = &mut records[*idx];
            if got.as_ref() != Some(&e.value) {
                mismatches.push(Mismatch {
                    line: stmt.span.line,
                    check: rec.check.clone(),
                    path: e.path.join("."),
                    expected: e.value.clone(),
                    got: got.clone(),
                    tag: e.tag,
                });
                if plain[*idx] {
                    rec.verdict = Verdict::Fails;
                }
            }
            if plain[*idx] {
                if let Value::Object(o) = &mut rec.rhs {
                    o.insert(e.path.join("."), e.value.clone());
                }
            }
            outputs.insert(e.key(), got.unwrap_or(Value::Null));
            continue;
        }
        let Some(out) = session.execute(stmt).map_err(|e| input_err(e.span, e.message))? else {
            continue;
        };
        let record = match &out.report {
            Some(r) => {
                if r.is_soundness_failure() {
                    match script.known_discrepancy(&r.check) {
                        Some(note) => discrepancies.push(format!("{}: {note}", r.check)),
                        None => soundness.push(format!(
                            "{id} line {}: {} fails: lhs {} rhs {}",
                            out.span.line, r.check, r.lhs, r.rhs
                        )),
                    }
                }
                Record {
                    fixture: id.to_string(),
                    check: r.check.clone(),
                    hypotheses: r.hypotheses.clone(),
                    lhs: r.lhs.clone(),
                    rhs: r.rhs.clone(),
                    verdict: r.verdict,
                    millis: r.millis,
                }
            }
            None => Record {
                fixture: id.to_string(),
                check: out.name.clone(),
                hypotheses: Vec::new(),
                lhs: strip_table(&out.output),
                rhs: Value::Object(Map::new()),
                verdict: Verdict::Holds,
                millis: out.millis,
            },
        };
        plain.push(out.report.is_none());
        records.push(record);
        csv.extend(out.csv);
        last = Some((records.len() - 1, out.output));
    }
    Ok(FixtureRun {
        id: id.to_string(),
        anchors: script.anchors().map(str::to_string).collect(),
        records,
        outputs,
        mismatches,
        soundness,
        discrepancies,
        csv,
    })
}

/// Drops the text Betti table from record payloads; it stays available to
/// expectations.
fn strip_table(v: &Value) -> Value {
    match v {
        Value::Object(o) if o.contains_key("table") => {
            let mut o = o.clone();
            o.remove("table");
            Value::Object(o)
        }
        _ => v.clone(),
    }
}

pub fn run_fixture(f: &Fixture, opts: &Options) -> Result<FixtureRun, InputError> {
    let script = f.parse()?;
    run_script(&f.id, &f.source, &script, opts)
}

/// Result of a whole corpus run.
#[derive(Debug)]
pub struct CorpusRun {
    /// Completed fixtures in corpus order, truncated after the first
    /// soundness failure.
    pub fixtures: Vec<FixtureRun>,
    pub aborted: Option<String>,
}

impl CorpusRun {
    pub fn passed(&self) -> bool {
        self.aborted.is_none() && self.fixtures.iter().all(FixtureRun::passed)
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.fixtures.iter().flat_map(|f| &f.records)
    }

    /// One line per fixture plus a totals line.
    pub fn summary(&self) -> String {
        let width = self.fixtures.iter().map(|f| f.id.len()).max().unwrap_or(7).max(7);
        let mut s = format!("{:width$}  {:>6}  {:>8}  status\n", "fixture", "checks", "expected");
        for f in &self.fixtures {
            let expected = f.outputs.len();
            let status = if !f.soundness.is_empty() {
                "UNSOUND".to_string()
            } else if !f.mismatches.is_empty() {
                format!("MISMATCH ({})", f.mismatches.len())
            } else if !f.discrepancies.is_empty() {
                "ok (known discrepancy)".to_string()
            } else {
                "ok".to_string()
            };
            s.push_str(&format!("{:width$}  {:>6}  {:>8}  {status}\n", f.id, f.records.len(), expected));
        }
        let ok = self.fixtures.iter().filter(|f| f.passed()).count();
        s.push_str(&format!("{ok}/{} fixtures passed\n", self.fixtures.len()));
        if let Some(a) = &self.aborted {
            s.push_str(&format!("aborted: {a}\n"));
        }
        s
    }
}

/// Runs fixtures concurrently and merges them in the given order.
pub fn run_corpus(fixtures: &[Fixture], opts: &Options) -> Result<CorpusRun, InputError> {
    let runs: Vec<Result<FixtureRun, InputError>> = fixtures.par_iter().map(|f| run_fixture(f, opts)).collect();
    let mut out = CorpusRun { fixtures: Vec::new(), aborted: None };
    for run in runs {
        let run = run?;
        let unsound = run.soundness.first().cloned();
        out.fixtures.push(run);
        if let Some(msg) = unsound {
            out.aborted = Some(msg);
            break;
        }
    }
    Ok(out)
}
