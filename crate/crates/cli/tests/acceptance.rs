//! Acceptance gate: twelve criteria at zero tolerance, one PASS/FAIL line each.
//!
//! A criterion is a list of named sub-items plus a time limit. Sub-items that
//! are known to fail are listed in `KNOWN_FAILURES` together with the reason;
//! they still print FAIL, and the test only errors when the set of failures
//! differs from that list.

use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Result};
use serde_json::{json, Value};
use tensorcoh::checks::{self, depth_sequence, CheckInput, Operand, Verdict, DEFAULT_GENERATOR_CAP};
use tensorcoh::ideal::Ideal;
use tensorcoh::invariants::{self as inv, Count};
use tensorcoh::module::GradedModule;
use tensorcoh::ops;
use tensorcoh::quotient::QuotientRing;
use tensorcoh::resolution::{Over, Resolution};
use tensorcoh::sample::{SampleConfig, Sampler};
use tensorcoh::{AmbientRing, GroundField, Polynomial};
use tensorcoh_cli::corpus;
use tensorcoh_cli::dsl;
use tensorcoh_cli::explore::explore;
use tensorcoh_cli::runner::{self, FixtureRun};
use tensorcoh_cli::session::Options;

/// (criterion, sub-item, reason).
const KNOWN_FAILURES: &[(usize, &str, &str)] = &[(
    9,
    "Ext^1(w,R) != 0",
    "Ext^1(w,R) is zero on the cubic Veronese although the ring is not Gorenstein; \
     hand-checked, so the nonvanishing claim does not hold on this ring",
)];

type Items = Vec<(String, bool)>;

struct Outcome {
    n: usize,
    title: &'static str,
    items: Items,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn in_time(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed <= l)
    }

    fn passed(&self) -> bool {
        self.in_time() && self.items.iter().all(|(_, ok)| *ok)
    }
}

fn criterion(n: usize, title: &'static str, limit: Option<u64>, f: impl FnOnce() -> Result<Items>) -> Outcome {
    let start = Instant::now();
    let items = f().unwrap_or_else(|e| vec![(format!("error: {e:#}"), false)]);
    Outcome { n, title, items, elapsed: start.elapsed(), limit: limit.map(Duration::from_secs) }
}

fn item(name: impl Into<String>, ok: bool) -> (String, bool) {
    (name.into(), ok)
}

fn script(text: &str) -> Result<FixtureRun> {
    let parsed = dsl::parse(text).map_err(|e| anyhow!("{e}"))?;
    let opts = Options { timing: false, ..Options::default() };
    Ok(runner::run_script("acceptance", "inline", &parsed, &opts)?)
}

fn ring(vars: &[&str]) -> Arc<QuotientRing> {
    QuotientRing::polynomial(&AmbientRing::new(GroundField::default(), vars).unwrap())
}

fn ideal(r: &Arc<QuotientRing>, gens: &[&str]) -> Ideal {
    let g = gens.iter().map(|e| Polynomial::parse(r.ambient(), e).unwrap()).collect();
    Ideal::new(r, g).unwrap()
}

fn fin(c: Count) -> Option<u64> {
    c.finite()
}

fn main() {
    let outcomes = vec![
        criterion(1, "Koszul Betti numbers of k, n = 2..5", None, koszul),
        criterion(2, "h0(m⊗m) = 1 over k[x,y], duality and saturation", Some(5), maximal_square),
        criterion(3, "(h0,h1,h2) of m⊗m over k[x,y,z] = (3,4,0)", Some(30), claim_a),
        criterion(4, "last syzygy of k against its dual, d = 4", Some(600), last_syzygy),
        criterion(5, "(x^2,y^3): h0(I⊗I) = l(R/I) = l(torsion) = 6", Some(30), parameter_square),
        criterion(6, "(x,y) in k[x,y,z]: h0(I⊗I) = 0", Some(10), height_two),
        criterion(7, "depth sequences", Some(300), depth_sequences),
        criterion(8, "quadric cone, I = (x,u)", Some(600), quadric_cone),
        criterion(9, "canonical module of the cubic Veronese", Some(600), veronese),
        criterion(10, "randomized property suites", Some(900), properties),
        criterion(11, "hdeg validation gates", None, hdeg_gates),
        criterion(12, "grade-sum vanishing on the corpus", None, vanishing),
    ];

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let limit = o.limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!("{status} {:>2}. {} ({:.2}s{limit})", o.n, o.title, o.elapsed.as_secs_f64());
        for (name, ok) in &o.items {
            let known = KNOWN_FAILURES.iter().find(|k| k.0 == o.n && k.1 == name);
            match (ok, known) {
                (true, None) => {}
                (false, Some(k)) => println!("       FAIL {name} (known: {})", k.2),
                (false, None) => {
                    println!("       FAIL {name}");
                    unexpected.push(format!("{}: {name}", o.n));
                }
                (true, Some(_)) => {
                    println!("       PASS {name} (listed as a known failure)");
                    unexpected.push(format!("{}: {name} now passes", o.n));
                }
            }
        }
        if !o.in_time() {
            unexpected.push(format!("{}: over time", o.n));
        }
    }
    for k in KNOWN_FAILURES {
        let present = outcomes.iter().any(|o| o.n == k.0 && o.items.iter().any(|(name, _)| name == k.1));
        assert!(present, "known failure {}: {} is not evaluated", k.0, k.1);
    }
    assert!(unexpected.is_empty(), "unexpected acceptance results: {unexpected:?}");
}

fn koszul() -> Result<Items> {
    let names = ["x1", "x2", "x3", "x4", "x5"];
    let mut items = Vec::new();
    for n in 2..=5 {
        let start = Instant::now();
        let r = ring(&names[..n]);
        let res = Resolution::compute(&GradedModule::residue_field(&r), Over::Quotient, n + 1)?;
        let mut binom = 1usize;
        let mut ok = true;
        for i in 0..=n {
            ok &= res.betti().total(i) == binom;
            binom = binom * (n - i) / (i + 1);
        }
        ok &= res.betti().total(n + 1) == 0;
        items.push(item(format!("n = {n} binomial"), ok));
        items.push(item(format!("n = {n} under 1s"), start.elapsed() < Duration::from_secs(1)));
    }
    Ok(items)
}

fn maximal_square() -> Result<Items> {
    let r = ring(&["x", "y"]);
    let m = GradedModule::maximal_ideal(&r)?;
    let mm = ops::tensor(&m, &m)?;
    let run = script("ring S = poly(vars=[x, y])\nmodule m = maximal(S)\ncheck f-m2 m\n")?;
    Ok(vec![
        item("duality route = 1", inv::h(&mm, 0)? == Count::Finite(1)),
        item("saturation route = 1", inv::h0_sat(&mm)? == 1),
        item("f-m2 holds with both routes", run.records[0].verdict == Verdict::Holds && run.records[0].lhs == json!({"h0": 1, "h0_saturation": 1})),
    ])
}

fn claim_a() -> Result<Items> {
    let run = script("ring S = poly(vars=[x, y, z])\nmodule m = maximal(S)\nh m ⊗ m 0..2\ncheck f-claimA m\ncheck f-55i m\n")?;
    Ok(vec![
        item("h = (3,4,0)", run.records[0].lhs == json!({"h": [3, 4, 0]})),
        item("f-claimA holds", run.records[1].verdict == Verdict::Holds),
        item("f-55i holds", run.records[2].verdict == Verdict::Holds),
    ])
}

fn last_syzygy() -> Result<Items> {
    let r = ring(&["x1", "x2", "x3", "x4"]);
    let m = tensorcoh::resolution::syzygy(&GradedModule::residue_field(&r), 3, Over::Quotient)?;
    let t = ops::tensor(&m, &ops::dual(&m)?)?;
    let h: Vec<Option<u64>> = (0..4).map(|i| inv::h(&t, i).map(fin)).collect::<tensorcoh::Result<_>>()?;
    let killed = inv::local_cohomology_killed_by_maximal(&t)?;
    Ok(vec![
        item("h = (0,1,4,4)", h == [Some(0), Some(1), Some(4), Some(4)]),
        item("m kills H^i for i < 4", killed.iter().take(4).all(|&k| k)),
        item("quasi-Buchsbaum", inv::is_quasi_buchsbaum(&t)? == Some(true)),
    ])
}

fn parameter_square() -> Result<Items> {
    let r = ring(&["x", "y"]);
    let i = ideal(&r, &["x^2", "y^3"]);
    let im = i.as_module()?;
    let t = ops::tensor(&im, &im)?;
    let tors = ops::torsion(&t)?;
    Ok(vec![
        item("h0(I⊗I) = 6", inv::h(&t, 0)? == Count::Finite(6)),
        item("l(R/I) = 6", inv::length(&i.quotient_module()?)? == Count::Finite(6)),
        item("l(torsion(I⊗I)) = 6", inv::length(&tors)? == Count::Finite(6)),
    ])
}

fn height_two() -> Result<Items> {
    let run = script("ring S = poly(vars=[x, y, z])\nmodule I = ideal (x, y) in S\nh I ⊗ I 0\ncheck gor-ht2 I\n")?;
    Ok(vec![
        item("h0(I⊗I) = 0", run.records[0].lhs == json!({"h": 0})),
        item("gor-ht2 holds", run.records[1].verdict == Verdict::Holds),
    ])
}

fn depth_sequences() -> Result<Items> {
    let seq = |op: Operand, n: usize| -> Result<Vec<Option<usize>>> {
        Ok(depth_sequence(&op, None, n, DEFAULT_GENERATOR_CAP)?.values)
    };
    let r2 = ring(&["x", "y"]);
    let r3 = ring(&["x", "y", "z"]);
    let pd_one = seq(Operand::from_ideal(ideal(&r2, &["x^2", "y^3"]))?, 4)?;
    let m2 = seq(Operand::from_ideal(Ideal::maximal(&r2))?, 3)?;
    let m3 = seq(Operand::from_ideal(Ideal::maximal(&r3))?, 3)?;
    let param = seq(Operand::new(ideal(&r2, &["x"]).quotient_module()?), 3)?;
    Ok(vec![
        item("(x^2,y^3): (1,0,0,0)", pd_one == [Some(1), Some(0), Some(0), Some(0)]),
        item("m over k[x,y]: 0 at i = 2,3", m2[1..] == [Some(0), Some(0)]),
        item("m over k[x,y,z]: 0 at i = 2,3", m3[1..] == [Some(0), Some(0)]),
        item("k[x,y]/(x): (1,1,1)", param == [Some(1), Some(1), Some(1)]),
    ])
}

fn quadric_cone() -> Result<Items> {
    let run = script(
        "ring S = poly(vars=[x, y, u, v])\nideal F = (x*y - u*v) in S\nring R = S / F\ncertify R domain\n\
         module I = ideal (x, u) in R\nh I ⊗ I* 1..2\ninvariants I*\n",
    )?;
    let h = &run.records[0].lhs["h"];
    Ok(vec![
        item("h2(I⊗I*) = 0", h[1] == json!(0)),
        item("I* not free", run.records[1].lhs["flags"]["free"] == json!(false)),
        item("h1(I⊗I*) != 0", h[0].as_u64().is_some_and(|v| v > 0)),
        item("h1(I⊗I*) = 1 (frozen)", h[0] == json!(1)),
    ])
}

fn veronese() -> Result<Items> {
    let run = script(
        "ring S = poly(vars=[a, b, c, d])\nideal V = (a*c - b^2, a*d - b*c, b*d - c^2) in S\nring R = S / V\n\
         certify R domain\nmodule w = canonical(R)\ninvariants w\nh w ⊗ w* 0..2\nlength tor(1, w, w)\nlength ext(1, w, R)\n",
    )?;
    let nonzero = |v: &Value| v != &json!(0);
    let h = run.records[1].lhs["h"].as_array().cloned().unwrap_or_default();
    Ok(vec![
        item("type 2", run.records[0].lhs["mu"] == json!(2)),
        item("2-dimensional CM", run.records[0].lhs["dim"] == json!(2) && run.records[0].lhs["depth"] == json!(2)),
        item("h0, h1, h2 of w⊗w* nonzero", h.len() == 3 && h.iter().all(nonzero)),
        item("l(Tor_1(w,w)) > 0", run.records[2].lhs["length"].as_u64().is_some_and(|v| v > 0)),
        item("Ext^1(w,R) != 0", nonzero(&run.records[3].lhs["length"])),
    ])
}

fn properties() -> Result<Items> {
    const CASES: u64 = 50;
    let rings: Vec<_> = (1..=3).map(|n| Sampler::ring(GroundField::default(), n)).collect::<tensorcoh::Result<_>>()?;
    let mut ok = [true; 6];
    let mut smp = Sampler::new(0xacce, SampleConfig::default());
    for _ in 0..CASES {
        let n = smp.nvars();
        let r = &rings[n - 1];
        let s = smp.module(r)?;
        let m = &s.module;
        ok[0] &= inv::h(m, 0)? == Count::Finite(inv::h0_sat(m)?);
        if !m.is_zero()? {
            let depth = inv::depth(m)?;
            ok[1] &= depth == n - inv::pd_ambient(m)? && inv::grade(&Ideal::maximal(r), m)? == Count::Finite(depth as u64);
        }
        let h = inv::h_vector(m)?;
        if let Some(d) = inv::dim(m)? {
            ok[2] &= h[d + 1..].iter().all(|c| c.is_zero());
        }
        let f = smp.finite_length(r)?;
        let hf = inv::h_vector(&f.module)?;
        ok[2] &= hf[0] == inv::length(&f.module)? && hf[1..].iter().all(|c| c.is_zero());
        if inv::dim(m)? == Some(n) {
            ok[3] &= inv::serre_sr(m, 1)? == inv::is_torsion_free(m)?;
        }
        let other = smp.module(r)?;
        let lemma = checks::run("lemma-0", &CheckInput::new(Operand::new(f.module.clone())).with_n(Operand::new(m.clone())))?;
        ok[4] &= lemma.verdict == Verdict::Holds;
        let vector = checks::run("prop-vector", &CheckInput::new(Operand::new(m.clone())).with_n(Operand::new(other.module)))?;
        ok[4] &= vector.verdict != Verdict::Fails;
    }
    for id in ["lemma-0", "lemma-red", "prop-vector", "prop-cvector", "cor-1d", "fact-3ht", "vasc-81"] {
        let run = explore(id, CASES as usize, 11, None, GroundField::default());
        ok[5] &= run.is_ok_and(|r| r.rows.len() == CASES as usize);
    }
    Ok(vec![
        item("h0 duality = saturation", ok[0]),
        item("grade(m,M) = depth = n - pd", ok[1]),
        item("h^i = 0 above dim, h0 = l in dim 0", ok[2]),
        item("S_1 = torsion-free at full dimension", ok[3]),
        item("finite-length and Betti-weighted bounds never violated", ok[4]),
        item("explorer soundness gate on seven bounds", ok[5]),
    ])
}

/// Modules from the corpus fixtures.
fn corpus_modules() -> Result<Vec<(String, GradedModule)>> {
    let r2 = ring(&["x", "y"]);
    let r3 = ring(&["x", "y", "z"]);
    let r4 = ring(&["x1", "x2", "x3", "x4"]);
    let s = AmbientRing::new(GroundField::default(), &["a", "b", "c", "d"])?;
    let eqs = ["a*c-b^2", "a*d-b*c", "b*d-c^2"].iter().map(|e| Polynomial::parse(&s, e)).collect::<tensorcoh::Result<_>>()?;
    let ver = QuotientRing::new(&s, eqs)?.certify_domain();
    let q = AmbientRing::new(GroundField::default(), &["x", "y", "u", "v"])?;
    let cone = QuotientRing::new(&q, vec![Polynomial::parse(&q, "x*y-u*v")?])?.certify_domain();
    let k3 = GradedModule::residue_field(&r3);
    let m2 = GradedModule::maximal_ideal(&r2)?;
    let m3 = GradedModule::maximal_ideal(&r3)?;
    let i = ideal(&r2, &["x^2", "y^3"]).as_module()?;
    Ok(vec![
        ("k over k[x,y,z]".into(), k3.clone()),
        ("m over k[x,y]".into(), m2.clone()),
        ("m over k[x,y,z]".into(), m3.clone()),
        ("m⊗m over k[x,y]".into(), ops::tensor(&m2, &m2)?),
        ("m⊗m over k[x,y,z]".into(), ops::tensor(&m3, &m3)?),
        ("(x^2,y^3)".into(), i.clone()),
        ("(x^2,y^3)⊗(x^2,y^3)".into(), ops::tensor(&i, &i)?),
        ("k[x,y]/(x^2,y^3)".into(), ideal(&r2, &["x^2", "y^3"]).quotient_module()?),
        ("k[x,y,z]/(x)".into(), ideal(&r3, &["x"]).quotient_module()?),
        ("Syz_2(k), 4 variables".into(), tensorcoh::resolution::syzygy(&GradedModule::residue_field(&r4), 2, Over::Quotient)?),
        ("Syz_3(k), 4 variables".into(), tensorcoh::resolution::syzygy(&GradedModule::residue_field(&r4), 3, Over::Quotient)?),
        ("canonical module of the Veronese".into(), inv::canonical(&ver)?),
        ("(x,u) on the quadric cone".into(), ideal(&cone, &["x", "u"]).as_module()?),
        ("k[x,y,z]/(x^2, xy)".into(), ideal(&r3, &["x^2", "x*y"]).quotient_module()?),
    ])
}

fn hdeg_gates() -> Result<Items> {
    let mut cm = true;
    let mut dim0 = true;
    let mut mixed = true;
    let mut mu = true;
    let mut counts = [0usize; 3];
    for (name, m) in corpus_modules()? {
        if m.is_zero()? {
            continue;
        }
        let hd = inv::hdeg(&m)?;
        let ok = inv::mu(&m)? as u64 <= hd;
        mu &= ok;
        if inv::dim(&m)? == Some(0) {
            counts[1] += 1;
            dim0 &= Count::Finite(hd) == inv::length(&m)?;
        } else if inv::is_cohen_macaulay(&m)? {
            counts[0] += 1;
            cm &= hd == inv::degree(&m)?;
        }
        let gamma = inv::h0_sat(&m)?;
        if gamma > 0 && inv::dim(&m)? != Some(0) {
            counts[2] += 1;
            let sat = ops::saturate(&m, &Ideal::maximal(m.base()))?;
            let ok = inv::hdeg(&sat.quotient)? == hd - gamma;
            if !ok {
                println!("       hdeg(M/Γ) identity fails on {name}");
            }
            mixed &= ok;
        }
    }
    Ok(vec![
        item(format!("hdeg = deg on {} CM modules", counts[0]), cm && counts[0] > 0),
        item(format!("hdeg = l on {} finite-length modules", counts[1]), dim0 && counts[1] > 0),
        item(format!("hdeg(M/Γ) = hdeg(M) - l(Γ) on {} mixed modules", counts[2]), mixed && counts[2] > 0),
        item("mu <= hdeg on every corpus module", mu),
    ])
}

fn vanishing() -> Result<Items> {
    let opts = Options { timing: false, ..Options::default() };
    let run = runner::run_corpus(&corpus::builtin(), &opts)?;
    let mut verified = 0;
    let mut all_vanish = true;
    let mut violation_shown = false;
    for r in run.records().filter(|r| r.check == "g-vanish" || r.check == "gc-vanish") {
        match r.verdict {
            Verdict::Holds => {
                verified += 1;
                let zero = match r.lhs.get("h") {
                    Some(h) => h.as_array().is_some_and(|a| a.iter().all(|v| v == &json!(0))),
                    // Decided by grade for a general ideal.
                    None => true,
                };
                all_vanish &= zero;
            }
            Verdict::Fails => all_vanish = false,
            Verdict::HypothesesViolated if r.fixture == "g-vanish-pd-infinite" => {
                violation_shown = r.lhs["h"][0].as_u64().is_some_and(|v| v > 0);
            }
            _ => {}
        }
    }
    Ok(vec![
        item(format!("H^0..H^r vanish on {verified} verified instances"), all_vanish && verified > 0),
        item("infinite pd instance has h0 != 0", violation_shown),
    ])
}
