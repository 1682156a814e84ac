//! Executable registry of inequalities, vanishing statements, closed
//! formulas and freeness criteria about local cohomology of tensor products.
//!
//! Every check verifies (or records as certified) its hypotheses, computes
//! both sides and returns a [`CheckReport`].

mod bounds;
mod context;
mod depth_seq;
mod formulas;
mod freeness;
mod vanishing;
mod yoshida;

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::invariants::Count;
use crate::module::GradedModule;

pub use context::RingFacts;
pub use depth_seq::{depth_sequence, DepthSequence};
pub use yoshida::yoshida_report;

/// A module argument together with what the caller knows about it.
#[derive(Debug, Clone)]
pub struct Operand {
    pub module: GradedModule,
    /// The ideal, when the module was built as an ideal.
    pub ideal: Option<Ideal>,
    /// Caller-supplied Buchsbaum certificate.
    pub buchsbaum: bool,
}

impl Operand {
    pub fn new(module: GradedModule) -> Self {
        Operand {
            module,
            ideal: None,
            buchsbaum: false,
        }
    }

    pub fn from_ideal(ideal: Ideal) -> Result<Self> {
        Ok(Operand {
            module: ideal.as_module()?,
            ideal: Some(ideal),
            buchsbaum: false,
        })
    }

    pub fn with_buchsbaum(mut self, b: bool) -> Self {
        self.buchsbaum = b;
        self
    }
}

/// Arguments of a registry check. `a` defaults to the maximal ideal.
#[derive(Debug, Clone)]
pub struct CheckInput {
    pub m: Operand,
    pub n: Option<Operand>,
    pub a: Option<Ideal>,
    pub r: Option<usize>,
}

impl CheckInput {
    pub fn new(m: Operand) -> Self {
        CheckInput {
            m,
            n: None,
            a: None,
            r: None,
        }
    }

    pub fn with_n(mut self, n: Operand) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_ideal(mut self, a: Ideal) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = Some(r);
        self
    }

    fn n(&self) -> Result<&Operand> {
        self.n
            .as_ref()
            .ok_or_else(|| Error::Undefined("this check needs a second module".into()))
    }

    fn ideal(&self) -> Ideal {
        self.a
            .clone()
            .unwrap_or_else(|| Ideal::maximal(self.m.module.base()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    Verified,
    Certified,
    Violated,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HypothesesViolated,
    Undecidable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HypothesesViolated => "hypotheses-violated",
            Verdict::Undecidable => "undecidable",
        })
    }
}

/// Outcome of one registry check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub hypotheses: Vec<Hypothesis>,
    pub relation: String,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: Verdict,
    pub millis: u64,
}

impl CheckReport {
    /// Whether a failure here means the engine contradicts a proven statement.
    pub fn is_soundness_failure(&self) -> bool {
        self.verdict == Verdict::Fails && find(&self.check).is_some_and(|s| s.proven)
    }
}

/// Collects hypothesis outcomes while a check runs.
#[derive(Debug, Default)]
pub(crate) struct Hyps(Vec<Hypothesis>);

impl Hyps {
    pub fn verified(&mut self, name: &str, ok: bool) -> bool {
        let status = if ok {
            HypothesisStatus::Verified
        } else {
            HypothesisStatus::Violated
        };
        self.0.push(Hypothesis {
            name: name.into(),
            status,
        });
        ok
    }

    pub fn certified(&mut self, name: &str, ok: bool) -> bool {
        let status = if ok {
            HypothesisStatus::Certified
        } else {
            HypothesisStatus::Violated
        };
        self.0.push(Hypothesis {
            name: name.into(),
            status,
        });
        ok
    }

    /// Records a hypothesis whose test may be inconclusive.
    pub fn decided(&mut self, name: &str, d: crate::invariants::Decision) {
        use crate::invariants::Decision::*;
        let status = match d {
            Yes => HypothesisStatus::Verified,
            No => HypothesisStatus::Violated,
            Unknown => HypothesisStatus::Unknown,
        };
        self.0.push(Hypothesis {
            name: name.into(),
            status,
        });
    }

    /// Runs a test that may be unavailable (e.g. needs a domain); errors count as unknown.
    pub fn try_verified(&mut self, name: &str, r: Result<bool>) -> bool {
        match r {
            Ok(b) => self.verified(name, b),
            Err(_) => {
                self.0.push(Hypothesis {
                    name: name.into(),
                    status: HypothesisStatus::Unknown,
                });
                false
            }
        }
    }

    fn status(&self) -> Option<Verdict> {
        if self
            .0
            .iter()
            .any(|h| h.status == HypothesisStatus::Violated)
        {
            Some(Verdict::HypothesesViolated)
        } else if self.0.iter().any(|h| h.status == HypothesisStatus::Unknown) {
            Some(Verdict::Undecidable)
        } else {
            None
        }
    }

    pub fn all_hold(&self) -> bool {
        self.status().is_none()
    }

    /// Final report: when hypotheses fail, the comparison outcome is
    /// recorded in the values but does not decide the verdict.
    pub fn report(
        self,
        id: &str,
        relation: &str,
        lhs: Value,
        rhs: Value,
        holds: bool,
    ) -> CheckReport {
        let verdict = self.status().unwrap_or(if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        });
        CheckReport {
            check: id.into(),
            hypotheses: self.0,
            relation: relation.into(),
            lhs,
            rhs,
            verdict,
            millis: 0,
        }
    }

    pub fn undecidable(self, id: &str, relation: &str, lhs: Value, rhs: Value) -> CheckReport {
        let verdict = self.status().unwrap_or(Verdict::Undecidable);
        CheckReport {
            check: id.into(),
            hypotheses: self.0,
            relation: relation.into(),
            lhs,
            rhs,
            verdict,
            millis: 0,
        }
    }
}

pub(crate) fn count_json(c: Count) -> Value {
    serde_json::to_value(c).expect("counts serialize")
}

/// Registry families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bound,
    Vanishing,
    Formula,
    Freeness,
    Depth,
    Report,
}

/// Static description of a registry entry.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSpec {
    pub id: &'static str,
    pub family: Family,
    pub statement: &'static str,
    pub anchor: &'static str,
    pub hypotheses: &'static [&'static str],
    /// Whether the statement is a theorem (a failure is then an engine bug).
    pub proven: bool,
}

macro_rules! spec {
    ($id:literal, $fam:ident, $stmt:literal, $anchor:literal, [$($h:literal),*]) => {
        CheckSpec { id: $id, family: Family::$fam, statement: $stmt, anchor: $anchor, hypotheses: &[$($h),*], proven: true }
    };
    ($id:literal, $fam:ident, $stmt:literal, $anchor:literal, [$($h:literal),*], unproven) => {
        CheckSpec { id: $id, family: Family::$fam, statement: $stmt, anchor: $anchor, hypotheses: &[$($h),*], proven: false }
    };
}

pub static REGISTRY: &[CheckSpec] = &[
    spec!("lemma-0", Bound, "h0(M⊗N) <= l(M) mu(N)", "finite-length factor bound", ["M has finite length"]),
    spec!("lemma-red", Bound, "h0(M⊗N) <= h0(M) mu(N) + h0(N) mu(N) + h0(M'⊗N'), M' = M/H0(M)", "reduction to positive depth", []),
    spec!("prop-vector", Bound, "h0(M⊗N) <= sum_i beta_i(M) h^i(N)", "Betti-weighted bound over generalized CM rings",
        ["R equidimensional", "R generalized Cohen-Macaulay", "N locally free on the punctured spectrum", "N has constant rank", "pd M < depth R"]),
    spec!("prop-cvector", Bound, "h0(M⊗N) <= d hdeg(M) hdeg(N), or (d+1) hdeg(M) hdeg(N) - 1 when pd M = d", "cohomological-degree bound over regular rings",
        ["R regular", "N locally free on the punctured spectrum"]),
    spec!("cor-1d", Bound, "h0(M⊗N) < (d+1) hdeg(M) hdeg(N)", "low-dimensional regular rings",
        ["R regular", "d = 1, or d = 2 and M torsion-free, or d = 3 and M reflexive", "M, N nonzero"]),
    spec!("cor-jac", Bound, "h0(M⊗N) <= hdeg(M) hdeg(N)(2 + deg(R) l(R/J)) - rank(M) rank(N) deg(R) l(R/J)", "Jacobian bound in dimension one",
        ["R domain", "dim R = 1", "R/J has finite length"]),
    spec!("prop-v5", Bound, "h0(M⊗N) <= beta_2(N) l(D(M*))", "Gorenstein isolated singularity, maximal CM factor",
        ["R Gorenstein", "R has an isolated singularity", "M maximal Cohen-Macaulay"]),
    spec!("prop-buchs", Bound, "h0(M⊗N) < 3 hdeg(M) hdeg(N); <= 2 hdeg(M) hdeg(N) when depth N > 0", "perfect of projective dimension one against Buchsbaum",
        ["R Cohen-Macaulay", "dim R > 1", "M perfect", "pd M = 1", "N Buchsbaum", "dim N = dim R", "M, N nonzero"]),
    spec!("fact-3ht", Bound, "h0(M⊗N) < 16 hdeg(M) hdeg(N)", "torsion-free modules over a 3-dimensional regular ring",
        ["R regular", "dim R = 3", "M torsion-free", "N torsion-free", "M, N nonzero"]),
    spec!("prop-vector2", Bound, "h^i(M⊗N) <= sum_j beta_j(M) h^{i+j}(N) for i < dim M", "higher Betti-weighted bound",
        ["R Cohen-Macaulay", "M perfect", "N locally free on the punctured spectrum", "N has constant rank"]),
    spec!("vasc-81", Bound, "h0(M⊗M) <= d((d-1) deg(M) + l(R/I_n(phi)))^2", "presentation-shaped sharpness question",
        ["R regular", "M has a presentation 0 -> R^n -> R^(n+d-1)", "I_n(phi) is m-primary"]),
    spec!("g-vanish", Vanishing, "H^0_a .. H^r_a (M⊗N) = 0", "grade-sum vanishing",
        ["pd M < infinity", "M or N locally free off V(a)", "grade(a,M) + grade(a,N) >= d + r + 1", "0 <= r < d"]),
    spec!("gc-vanish", Vanishing, "H^0_a .. H^r_a (M⊗N) = 0", "grade-sum vanishing, both of finite projective dimension",
        ["depth R > 0", "pd M < infinity", "pd N < infinity", "M or N locally free off V(a)", "grade(a,M) + grade(a,N) >= depth R + r + 1", "0 <= r < depth R"]),
    spec!("gor-ht2", Vanishing, "h0(I⊗I) = 0", "height-two Gorenstein ideal", ["R regular", "dim R > 2", "I Gorenstein of height 2"]),
    spec!("f-m2", Formula, "h0(m⊗m) = 1", "maximal ideal of a regular surface", ["R regular", "dim R = 2", "M is the maximal ideal"]),
    spec!("f-param", Formula, "h0(I⊗I) = hdeg(R/I) = l(R/I)", "parameter ideal of a CM surface",
        ["R Cohen-Macaulay", "R domain", "dim R = 2", "I generated by a system of parameters"]),
    spec!("f-claimA", Formula, "h0(I⊗m) = beta_2(R/I), h1(I⊗m) = mu(I) + l(R/I), h^i(I⊗m) = 0 for 2 <= i < dim R", "m-primary ideal against the maximal ideal",
        ["R Cohen-Macaulay", "dim R >= 2", "I m-primary"]),
    spec!("f-55i", Formula, "h^i(m⊗m) = C(d,2), d+1, 0, .., 0 for i < d", "tensor square of the first syzygy of k",
        ["R regular", "dim R >= 2", "M is the maximal ideal"]),
    spec!("f-55ii", Formula, "h^i(M⊗M*) = 0, 1, d, 0, .., 0, d for i < d and m kills each of them", "last syzygy of k against its dual",
        ["R regular", "dim R > 3", "M is the (d-1)-st syzygy of k"]),
    spec!("f-54", Formula, "mu(m*) = 1 and h2(m⊗m*) = 0", "maximal ideal when depth R >= 3", ["depth R >= 3", "M is the maximal ideal"]),
    spec!("f-kan", Formula, "h^i(w⊗w*) != 0 iff i <= 1 or i = d", "canonical module at an isolated Gorenstein singularity",
        ["R Cohen-Macaulay", "dim R > 1", "R not Gorenstein", "R Gorenstein on the punctured spectrum"]),
    spec!("f-tor1", Formula, "Tor_1(w, w) != 0", "type-two canonical module, Tor side",
        ["R Cohen-Macaulay", "dim R > 1", "R not Gorenstein", "R Gorenstein on the punctured spectrum", "type R = 2"]),
    spec!("f-tach", Formula, "Ext^1(w, R) = 0 iff R Gorenstein; here Ext^1(w, R) != 0", "type-two canonical module, Ext side",
        ["R Cohen-Macaulay", "R domain", "type R = 2"]),
    spec!("f-dualpair", Formula, "h^j(A⊗B) = h^(d+1-j)(A*⊗B*) for 2 <= j <= d-1", "duality pairing of vector bundles",
        ["R regular", "dim R >= 3", "A locally free on the punctured spectrum", "B locally free on the punctured spectrum"]),
    spec!("f-bv", Formula, "l(Ext^i(L,N)) = h^(i+1)(N⊗L*) for 1 <= i <= depth N - 2", "Ext of a vector bundle as local cohomology",
        ["L locally free on the punctured spectrum", "depth N >= 3"]),
    spec!("free-2au", Freeness, "h0(M⊗M) = 0 iff M free", "torsion-free modules over a regular surface",
        ["R regular", "dim R = 2", "M nonzero torsion-free"]),
    spec!("free-t2", Freeness, "M⊗M torsion-free => M free", "depth-two rings", ["depth R = 2", "M torsion-free", "pd M < infinity"]),
    spec!("free-t3", Freeness, "M⊗M⊗M torsion-free => M free", "reflexive modules over 3-dimensional CM rings",
        ["R Cohen-Macaulay", "dim R = 3", "M reflexive", "pd M < infinity"]),
    spec!("free-hyp2", Freeness, "M⊗M torsion-free => M free", "two-dimensional normal hypersurface",
        ["R hypersurface", "dim R = 2", "R normal"]),
    spec!("free-518", Freeness, "H^r_a(M^(d-r)) = 0 => M free", "Serre condition and tensor powers over regular rings",
        ["R regular", "M locally free off V(a)", "M satisfies (S_r)"]),
    spec!("free-laun", Freeness, "H^0_a(M⊗M*) = H^1_a(M⊗M*) = 0 => M free", "vanishing against the dual",
        ["grade(a, M) > 0", "M locally free off V(a)"]),
    spec!("free-sph1", Freeness, "grade(a,M) + grade(a,M*) >= dim R + 2 => M free", "grade sum against the dual",
        ["pd M < infinity", "M locally free off V(a)"]),
    spec!("sph-equiv", Freeness, "depth M + depth M* = dim R + 1  <=>  M⊗M* torsion-free  <=>  M is pd-spherical", "spherical modules over hypersurfaces",
        ["R hypersurface", "M torsion-free", "M has constant rank", "1 <= pd M < infinity", "M locally free on the punctured spectrum"]),
    spec!("refl-516", Freeness, "M⊗N torsion-free => M or N reflexive", "reflexivity from torsion-free tensor products",
        ["R hypersurface", "M, N have constant rank", "pd M, pd N < infinity", "M, N locally free on the punctured spectrum"]),
    spec!("depth-seq", Depth, "depth(M^i) for i = 1..n against the grade, projective-dimension-one and maximal-ideal predictions", "depth of tensor powers", []),
    spec!("yoshida", Report, "h^i(M⊗N) compared with sum_j beta_j(M) h^{i+j}(N) for i < dim M", "perfect against Buchsbaum comparison table",
        ["R Cohen-Macaulay", "M perfect", "N Buchsbaum", "dim N = dim R", "pd M <= depth N"]),
];

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

/// Runs one registry check by id.
pub fn run(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let spec = find(id).ok_or_else(|| Error::Undefined(format!("unknown check `{id}`")))?;
    let start = Instant::now();
    let mut report = match spec.family {
        Family::Bound => bounds::run(id, input)?,
        Family::Vanishing => vanishing::run(id, input)?,
        Family::Formula => formulas::run(id, input)?,
        Family::Freeness => freeness::run(id, input)?,
        Family::Depth => {
            depth_sequence(
                &input.m,
                input.a.as_ref(),
                input.r.unwrap_or(4),
                DEFAULT_GENERATOR_CAP,
            )?
            .report
        }
        Family::Report => yoshida_report(&input.m, input.n()?)?,
    };
    report.millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Default cap on the number of generators of a tensor power.
pub const DEFAULT_GENERATOR_CAP: usize = 20_000;
