//! Syntax tree of session scripts.

use serde_json::Value;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl Script {
    /// Value of the `fixture` header, if any.
    pub fn fixture_id(&self) -> Option<&str> {
        self.stmts.iter().find_map(|s| match &s.kind {
            StmtKind::Fixture(id) => Some(id.as_str()),
            _ => None,
        })
    }

    pub fn anchors(&self) -> impl Iterator<Item = &str> {
        self.stmts.iter().filter_map(|s| match &s.kind {
            StmtKind::Anchor(a) => Some(a.as_str()),
            _ => None,
        })
    }

    /// Note attached to a check whose failure on this fixture is expected.
    pub fn known_discrepancy(&self, check: &str) -> Option<&str> {
        self.stmts.iter().find_map(|s| match &s.kind {
            StmtKind::KnownDiscrepancy { check: c, note } if c == check => Some(note.as_str()),
            _ => None,
        })
    }
}

/// A statement with its position. Equality ignores the position.
#[derive(Debug, Clone)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Fixture(String),
    Anchor(String),
    KnownDiscrepancy { check: String, note: String },
    Ring { name: String, def: RingDef },
    Ideal { name: String, gens: Vec<PolyText>, ring: String },
    Module { name: String, def: ModuleDef },
    Certify { name: String, property: Certificate },
    Command(Command),
    Expect(Expectation),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RingDef {
    Poly { p: Option<u32>, vars: Vec<String>, weights: Option<Vec<u32>> },
    Quotient { ambient: String, ideal: String },
}

/// Source text of a polynomial entry. Equality ignores the position.
#[derive(Debug, Clone)]
pub struct PolyText {
    pub text: String,
    pub span: Span,
}

impl PartialEq for PolyText {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleDef {
    /// Cokernel of a matrix; twists are (generator degrees, relation degrees).
    Coker { ring: String, rows: Vec<Vec<PolyText>>, twists: Option<(Vec<i32>, Vec<i32>)> },
    Ideal { gens: Vec<PolyText>, ring: String },
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String),
    Tensor(Box<Expr>, Box<Expr>),
    Dual(Box<Expr>),
    Call(String, Vec<Arg>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Expr(Expr),
    Int(i64),
    List(Vec<i64>),
}

/// Built-in module constructors: name and accepted argument shapes.
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("dual", "M"),
    ("tensor", "M, N"),
    ("power", "M, n"),
    ("syz", "M, i"),
    ("sum", "M, N"),
    ("twist", "M, a"),
    ("sat", "M"),
    ("torsion", "M"),
    ("gamma", "M"),
    ("hom", "M, N"),
    ("ext", "i, M, N"),
    ("tor", "i, M, N"),
    ("transpose", "M"),
    ("residue", "R"),
    ("maximal", "R"),
    ("free", "R, [twists]"),
    ("canonical", "R"),
    ("quotient", "I"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Domain,
    Buchsbaum,
    Normal,
    IsolatedSingularity,
}

impl Certificate {
    pub const ALL: [Certificate; 4] =
        [Certificate::Domain, Certificate::Buchsbaum, Certificate::Normal, Certificate::IsolatedSingularity];

    pub fn keyword(self) -> &'static str {
        match self {
            Certificate::Domain => "domain",
            Certificate::Buchsbaum => "buchsbaum",
            Certificate::Normal => "normal",
            Certificate::IsolatedSingularity => "isolated-singularity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Invariants { target: Expr, r: Option<usize> },
    H { target: Expr, from: usize, to: Option<usize> },
    Length { target: Expr },
    Resolve { target: Expr, bound: Option<usize> },
    Check { id: String, m: Expr, n: Option<Expr>, ideal: Option<String>, r: Option<usize> },
    DepthSeq { target: Expr, n: Option<usize>, ideal: Option<String> },
    Explore { id: String, trials: usize, seed: Option<u64>, vars: Option<usize> },
}

impl Command {
    pub fn name(&self) -> &str {
        match self {
            Command::Invariants { .. } => "invariants",
            Command::H { .. } => "h",
            Command::Length { .. } => "length",
            Command::Resolve { .. } => "resolve",
            Command::Check { id, .. } => id,
            Command::DepthSeq { .. } => "depthseq",
            Command::Explore { .. } => "explore",
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Stated in the source literature.
    Stated,
    /// Follows from a one-line argument.
    Trivial,
    /// Computed once by an independent oracle, audited, then frozen.
    Frozen,
}

impl Provenance {
    pub fn keyword(self) -> &'static str {
        match self {
            Provenance::Stated => "stated",
            Provenance::Trivial => "trivial",
            Provenance::Frozen => "frozen",
        }
    }
}

/// `expect <path> = <json> <tag>`, checked against the previous command.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub path: Vec<String>,
    pub value: Value,
    pub tag: Provenance,
}

impl Expectation {
    /// Key under which the measured value is published.
    pub fn key(&self) -> String {
        match self.path.last() {
            Some(last) if last.parse::<usize>().is_err() => last.clone(),
            _ => self.path.join("."),
        }
    }

    /// Looks the path up in a command output.
    pub fn lookup<'a>(&self, mut v: &'a Value) -> Option<&'a Value> {
        for seg in &self.path {
            v = match v {
                Value::Array(a) => a.get(seg.parse::<usize>().ok()?)?,
                Value::Object(o) => o.get(seg)?,
                _ => return None,
            };
        }
        Some(v)
    }
}
