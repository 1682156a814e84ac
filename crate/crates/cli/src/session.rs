//! Executes session statements against the algebra engine.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use tensorcoh::checks::{self, depth_sequence, CheckInput, CheckReport, Operand, RingFacts};
use tensorcoh::ideal::Ideal;
use tensorcoh::invariants::{self as inv, InvariantReport};
use tensorcoh::matrix::GradedMap;
use tensorcoh::module::GradedModule;
use tensorcoh::ops;
use tensorcoh::quotient::QuotientRing;
use tensorcoh::resolution::{self, Over, ProjDim, Resolution};
use tensorcoh::{AmbientRing, GroundField, MonomialOrder, Polynomial};

use crate::dsl::{Arg, Certificate, Command, Expr, ModuleDef, PolyText, RingDef, Span, Stmt, StmtKind};
use crate::explore;

/// Run-wide settings that scripts cannot override.
#[derive(Debug, Clone)]
pub struct Options {
    /// Characteristic for rings that do not name one.
    pub field_char: Option<u32>,
    /// Default length for `resolve` and `depthseq` when the script gives none.
    pub bound: Option<usize>,
    /// Default seed for `explore`.
    pub seed: Option<u64>,
    pub generator_cap: usize,
    /// Record wall-clock times; off for byte-stable output.
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            field_char: None,
            bound: None,
            seed: None,
            generator_cap: checks::DEFAULT_GENERATOR_CAP,
            timing: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SessionError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for SessionError {}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub span: Span,
    /// Canonical text of the command.
    pub command: String,
    /// Check id, or the command keyword.
    pub name: String,
    pub output: Value,
    pub report: Option<CheckReport>,
    pub csv: Option<String>,
    pub millis: u64,
}

#[derive(Clone)]
enum Binding {
    Ring { ring: Arc<QuotientRing>, used: bool },
    Ideal(Ideal),
    Module(Operand),
}

pub struct Session {
    env: HashMap<String, Binding>,
    opts: Options,
}

type SResult<T> = std::result::Result<T, String>;

fn engine<T>(r: tensorcoh::Result<T>) -> SResult<T> {
    r.map_err(|e| e.to_string())
}

impl Session {
    pub fn new(opts: Options) -> Self {
        Session { env: HashMap::new(), opts }
    }

    /// Runs a statement; commands return their outcome. Headers and
    /// expectations are ignored here.
    pub fn execute(&mut self, stmt: &Stmt) -> Result<Option<Outcome>, SessionError> {
        let at = |message: String| SessionError { span: stmt.span, message };
        match &stmt.kind {
            StmtKind::Ring { name, def } => {
                let ring = self.ring(def).map_err(at)?;
                self.env.insert(name.clone(), Binding::Ring { ring, used: false });
            }
            StmtKind::Ideal { name, gens, ring } => {
                let base = self.use_ring(ring).map_err(at)?;
                let gens = polys(&base, gens).map_err(|e| SessionError { span: e.0, message: e.1 })?;
                let ideal = engine(Ideal::new(&base, gens)).map_err(at)?;
                self.env.insert(name.clone(), Binding::Ideal(ideal));
            }
            StmtKind::Module { name, def } => {
                let op = self.module(def).map_err(|e| match e {
                    Located::At(span, message) => SessionError { span, message },
                    Located::Here(message) => at(message),
                })?;
                self.env.insert(name.clone(), Binding::Module(op));
            }
            StmtKind::Certify { name, property } => self.certify(name, *property).map_err(at)?,
            StmtKind::Command(c) => {
                let start = Instant::now();
                let (output, report, csv) = self.command(c).map_err(at)?;
                let millis = if self.opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
                let report = report.map(|mut r| {
                    if !self.opts.timing {
                        r.millis = 0;
                    }
                    r
                });
                let output = match &report {
                    Some(r) => serde_json::to_value(r).expect("reports serialize"),
                    None => output,
                };
                return Ok(Some(Outcome {
                    span: stmt.span,
                    command: c.to_string(),
                    name: c.name().to_string(),
                    output,
                    report,
                    csv,
                    millis,
                }));
            }
            StmtKind::Fixture(_) | StmtKind::Anchor(_) | StmtKind::KnownDiscrepancy { .. } | StmtKind::Expect(_) => {}
        }
        Ok(None)
    }

    fn ring(&mut self, def: &RingDef) -> SResult<Arc<QuotientRing>> {
        match def {
            RingDef::Poly { p, vars, weights } => {
                let field = match p.or(self.opts.field_char) {
                    Some(p) => engine(GroundField::new(p))?,
                    None => GroundField::default(),
                };
                let w = weights.clone().unwrap_or_else(|| vec![1; vars.len()]);
                let s = engine(AmbientRing::with_weights(field, vars, &w, MonomialOrder::Grevlex))?;
                Ok(QuotientRing::polynomial(&s))
            }
            RingDef::Quotient { ambient, ideal } => {
                let base = self.use_ring(ambient)?;
                let Some(Binding::Ideal(i)) = self.env.get(ideal) else {
                    return Err(format!("`{ideal}` is not an ideal"));
                };
                let mut gens = base.generators().to_vec();
                gens.extend(i.generators().iter().cloned());
                engine(QuotientRing::new(base.ambient(), gens))
            }
        }
    }

    /// Looks up a ring and marks it as having dependents.
    fn use_ring(&mut self, name: &str) -> SResult<Arc<QuotientRing>> {
        match self.env.get_mut(name) {
            Some(Binding::Ring { ring, used }) => {
                *used = true;
                Ok(ring.clone())
            }
            _ => Err(format!("`{name}` is not a ring")),
        }
    }

    fn certify(&mut self, name: &str, property: Certificate) -> SResult<()> {
        let Some(binding) = self.env.get_mut(name) else {
            return Err(format!("undefined name `{name}`"));
        };
        match (property, binding) {
            (Certificate::Domain, Binding::Ring { ring, used }) => {
                if *used {
                    return Err(format!("certify `{name}` as a domain before building objects over it"));
                }
                *ring = ring.certify_domain();
                Ok(())
            }
            (Certificate::Normal, Binding::Ring { ring, .. }) => {
                let facts = RingFacts::new(ring);
                if !engine(facts.is_normal())? {
                    return Err(format!("`{name}` is certified normal but fails the normality test"));
                }
                Ok(())
            }
            (Certificate::IsolatedSingularity, Binding::Ring { ring, .. }) => {
                let facts = RingFacts::new(ring);
                if !engine(facts.has_isolated_singularity())? {
                    return Err(format!("`{name}` is certified to have an isolated singularity, but its singular locus is larger"));
                }
                Ok(())
            }
            (Certificate::Buchsbaum, Binding::Module(op)) => {
                if engine(inv::is_quasi_buchsbaum(&op.module))? == Some(false) {
                    return Err(format!("`{name}` is certified Buchsbaum but is not quasi-Buchsbaum"));
                }
                op.buchsbaum = true;
                Ok(())
            }
            (Certificate::Buchsbaum, Binding::Ideal(i)) => {
                let op = engine(Operand::from_ideal(i.clone()))?;
                if engine(inv::is_quasi_buchsbaum(&op.module))? == Some(false) {
                    return Err(format!("`{name}` is certified Buchsbaum but is not quasi-Buchsbaum"));
                }
                *self.env.get_mut(name).expect("present") = Binding::Module(op.with_buchsbaum(true));
                Ok(())
            }
            (p, _) => Err(format!("`{}` does not apply to `{name}`", p.keyword())),
        }
    }

    fn module(&mut self, def: &ModuleDef) -> Result<Operand, Located> {
        match def {
            ModuleDef::Coker { ring, rows, twists } => {
                let base = self.use_ring(ring).map_err(Located::Here)?;
                let mut entries = Vec::new();
                for row in rows {
                    entries.push(polys(&base, row).map_err(|(s, m)| Located::At(s, m))?);
                }
                let (src, tgt) = match twists {
                    Some((gens, rels)) => (rels.clone(), gens.clone()),
                    None => GradedMap::infer_twists(&entries)
                        .map_err(|e| Located::Here(format!("degree-incompatible matrix: {e}")))?,
                };
                let map = GradedMap::new(&base, src, tgt, &entries)
                    .map_err(|e| Located::Here(format!("degree-incompatible matrix: {e}")))?;
                Ok(Operand::new(GradedModule::coker(map)))
            }
            ModuleDef::Ideal { gens, ring } => {
                let base = self.use_ring(ring).map_err(Located::Here)?;
                let gens = polys(&base, gens).map_err(|(s, m)| Located::At(s, m))?;
                let ideal = engine(Ideal::new(&base, gens)).map_err(Located::Here)?;
                engine(Operand::from_ideal(ideal)).map_err(Located::Here)
            }
            ModuleDef::Expr(e) => self.eval(e).map_err(Located::Here),
        }
    }

    fn binding(&self, name: &str) -> SResult<&Binding> {
        self.env.get(name).ok_or_else(|| format!("undefined name `{name}`"))
    }

    fn eval(&mut self, e: &Expr) -> SResult<Operand> {
        match e {
            Expr::Name(n) => match self.binding(n)?.clone() {
                Binding::Ring { .. } => {
                    let base = self.use_ring(n)?;
                    Ok(Operand::new(GradedModule::free(&base, vec![0])))
                }
                Binding::Ideal(i) => engine(Operand::from_ideal(i)),
                Binding::Module(op) => Ok(op),
            },
            Expr::Tensor(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                Ok(Operand::new(engine(ops::tensor(&a.module, &b.module))?))
            }
            Expr::Dual(a) => Ok(Operand::new(engine(ops::dual(&self.eval(a)?.module))?)),
            Expr::Call(f, args) if f == "maximal" => {
                let base = self.ring_arg(&args[0])?;
                engine(Operand::from_ideal(Ideal::maximal(&base)))
            }
            Expr::Call(f, args) => self.call(f, args).map(Operand::new),
        }
    }

    fn call(&mut self, f: &str, args: &[Arg]) -> SResult<GradedModule> {
        let m = match f {
            "dual" => ops::dual(&self.module_arg(&args[0])?),
            "tensor" => ops::tensor(&self.module_arg(&args[0])?, &self.module_arg(&args[1])?),
            "power" => ops::tensor_power(&self.module_arg(&args[0])?, int_arg(&args[1])?),
            "syz" => resolution::syzygy(&self.module_arg(&args[0])?, int_arg(&args[1])?, Over::Quotient),
            "sum" => self.module_arg(&args[0])?.direct_sum(&self.module_arg(&args[1])?),
            "twist" => Ok(self.module_arg(&args[0])?.twist(int_arg(&args[1])?)),
            "sat" | "gamma" => {
                let m = self.module_arg(&args[0])?;
                let sat = engine(ops::saturate(&m, &Ideal::maximal(m.base())))?;
                Ok(if f == "sat" { sat.quotient } else { sat.torsion })
            }
            "torsion" => ops::torsion(&self.module_arg(&args[0])?),
            "hom" => ops::hom(&self.module_arg(&args[0])?, &self.module_arg(&args[1])?),
            "ext" => ops::ext(int_arg(&args[0])?, &self.module_arg(&args[1])?, &self.module_arg(&args[2])?),
            "tor" => ops::tor(int_arg(&args[0])?, &self.module_arg(&args[1])?, &self.module_arg(&args[2])?),
            "transpose" => resolution::transpose(&self.module_arg(&args[0])?),
            "residue" => Ok(GradedModule::residue_field(&self.ring_arg(&args[0])?)),
            "maximal" => GradedModule::maximal_ideal(&self.ring_arg(&args[0])?),
            "free" => {
                let base = self.ring_arg(&args[0])?;
                let Arg::List(tw) = &args[1] else {
                    return Err("`free` takes a list of twists".into());
                };
                let tw = tw.iter().map(|&t| i32::try_from(t).map_err(|_| "twist out of range".to_string()));
                Ok(GradedModule::free(&base, tw.collect::<SResult<_>>()?))
            }
            "canonical" => inv::canonical(&self.ring_arg(&args[0])?),
            "quotient" => match &args[0] {
                Arg::Expr(Expr::Name(n)) => match self.binding(n)? {
                    Binding::Ideal(i) => i.quotient_module(),
                    Binding::Module(Operand { ideal: Some(i), .. }) => i.quotient_module(),
                    _ => return Err(format!("`quotient` needs an ideal, `{n}` is not one")),
                },
                _ => return Err("`quotient` needs an ideal name".into()),
            },
            _ => return Err(format!("unknown function `{f}`")),
        };
        engine(m)
    }

    fn module_arg(&mut self, a: &Arg) -> SResult<GradedModule> {
        match a {
            Arg::Expr(e) => Ok(self.eval(e)?.module),
            _ => Err("expected a module argument".into()),
        }
    }

    fn ring_arg(&mut self, a: &Arg) -> SResult<Arc<QuotientRing>> {
        match a {
            Arg::Expr(Expr::Name(n)) => self.use_ring(n),
            _ => Err("expected a ring name".into()),
        }
    }

    fn ideal(&self, name: &Option<String>) -> SResult<Option<Ideal>> {
        match name {
            None => Ok(None),
            Some(n) => match self.binding(n)? {
                Binding::Ideal(i) => Ok(Some(i.clone())),
                _ => Err(format!("`{n}` is not an ideal")),
            },
        }
    }

    fn command(&mut self, c: &Command) -> SResult<(Value, Option<CheckReport>, Option<String>)> {
        match c {
            Command::Invariants { target, r } => {
                let m = self.eval(target)?.module;
                let rep = engine(InvariantReport::compute(&m, *r))?;
                Ok((serde_json::to_value(rep).expect("reports serialize"), None, None))
            }
            Command::H { target, from, to } => {
                let m = self.eval(target)?.module;
                let d = m.base().dim();
                let last = to.unwrap_or(*from);
                if last > d {
                    return Err(format!("local cohomology index {last} exceeds dim R = {d}"));
                }
                let values = (*from..=last).map(|i| engine(inv::h(&m, i))).collect::<SResult<Vec<_>>>()?;
                let h = if to.is_some() { json!(values) } else { json!(values[0]) };
                Ok((json!({ "h": h }), None, None))
            }
            Command::Length { target } => {
                let m = self.eval(target)?.module;
                Ok((json!({ "length": engine(inv::length(&m))? }), None, None))
            }
            Command::Resolve { target, bound } => {
                let m = self.eval(target)?.module;
                let b = bound.or(self.opts.bound).unwrap_or(m.base().nvars() + 1);
                let res = engine(Resolution::compute(&m, Over::Quotient, b))?;
                let pd = match res.pd() {
                    ProjDim::Exact(p) => json!(p),
                    ProjDim::AtLeast(p) => json!({ "at_least": p }),
                };
                let betti = res.betti();
                let out = json!({ "betti": betti.totals(), "pd": pd, "table": betti.to_string() });
                Ok((out, None, None))
            }
            Command::Check { id, m, n, ideal, r } => {
                let mut input = CheckInput::new(self.eval(m)?);
                if let Some(n) = n {
                    input = input.with_n(self.eval(n)?);
                }
                if let Some(a) = self.ideal(ideal)? {
                    input = input.with_ideal(a);
                }
                if let Some(r) = r {
                    input = input.with_r(*r);
                }
                let report = engine(checks::run(id, &input))?;
                Ok((Value::Null, Some(report), None))
            }
            Command::DepthSeq { target, n, ideal } => {
                let m = self.eval(target)?;
                let a = self.ideal(ideal)?;
                let nmax = n.or(self.opts.bound).unwrap_or(4);
                let seq = engine(depth_sequence(&m, a.as_ref(), nmax, self.opts.generator_cap))?;
                let mut report = seq.report.clone();
                report.lhs = json!({
                    "depths": seq.values,
                    "grades": seq.grades,
                    "stabilization": seq.stabilization,
                    "truncated": seq.truncated,
                });
                Ok((Value::Null, Some(report), None))
            }
            Command::Explore { id, trials, seed, vars } => {
                let seed = seed.or(self.opts.seed).unwrap_or(0);
                let field = match self.opts.field_char {
                    Some(p) => engine(GroundField::new(p))?,
                    None => GroundField::default(),
                };
                let run = explore::explore(id, *trials, seed, *vars, field).map_err(|e| e.to_string())?;
                let out = json!({ "rows": run.rows.len(), "max_ratio": run.max_ratio() });
                Ok((out, None, Some(run.csv()?)))
            }
        }
    }
}

enum Located {
    At(Span, String),
    Here(String),
}

fn int_arg<T: TryFrom<i64>>(a: &Arg) -> SResult<T> {
    match a {
        Arg::Int(i) => T::try_from(*i).map_err(|_| format!("argument {i} out of range")),
        _ => Err("expected an integer argument".into()),
    }
}

/// Parses entries over the ring's ambient, reporting the entry position.
fn polys(base: &Arc<QuotientRing>, texts: &[PolyText]) -> Result<Vec<Polynomial>, (Span, String)> {
    texts
        .iter()
        .map(|t| {
            let p = Polynomial::parse(base.ambient(), &t.text).map_err(|e| (t.span, e.to_string()))?;
            if !p.is_homogeneous() {
                return Err((t.span, format!("entry `{}` is not homogeneous", t.text)));
            }
            Ok(p)
        })
        .collect()
}
