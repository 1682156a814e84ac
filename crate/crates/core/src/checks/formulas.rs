//! Closed formulas for local cohomology lengths, checked with exact equality.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::invariants::{self as inv, Count};
use crate::module::GradedModule;
use crate::ops;
use crate::resolution::{syzygy, Over, Resolution};

use super::context::{self as cx, RingFacts};
use super::{CheckInput, CheckReport, Hyps, Operand};

pub(super) fn run(id: &str, input: &CheckInput) -> Result<CheckReport> {
    match id {
        "f-m2" => maximal_square_surface(id, input),
        "f-param" => parameter_square(id, input),
        "f-claimA" => primary_against_maximal(id, input),
        "f-55i" => maximal_square(id, input),
        "f-55ii" => last_syzygy_dual(id, input),
        "f-54" => maximal_dual(id, input),
        "f-kan" => canonical_pattern(id, input),
        "f-tor1" => canonical_tor(id, input),
        "f-tach" => canonical_ext(id, input),
        "f-dualpair" => dual_pairing(id, input),
        "f-bv" => ext_as_cohomology(id, input),
        _ => Err(Error::Undefined(format!("`{id}` is not a formula"))),
    }
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Same Hilbert series and the same graded Betti numbers over the ambient
/// ring: the isomorphism-candidate test used to recognize named modules.
pub fn same_shape(a: &GradedModule, b: &GradedModule) -> Result<bool> {
    let (a, b) = (a.minimize()?, b.minimize()?);
    if a.hilbert_series()? != b.hilbert_series()? {
        return Ok(false);
    }
    Ok(a.ambient_resolution()?.betti() == b.ambient_resolution()?.betti())
}

fn is_maximal_ideal(op: &Operand) -> Result<bool> {
    let base = op.module.base();
    let max = Ideal::maximal(base);
    match &op.ideal {
        Some(i) => Ok(i.contains_ideal(&max)? && max.contains_ideal(i)?),
        None => same_shape(&op.module, &max.as_module()?),
    }
}

fn h_list(m: &GradedModule, range: std::ops::Range<usize>) -> Result<Vec<Count>> {
    range.map(|i| inv::h(m, i)).collect()
}

fn finite(values: &[u64]) -> Vec<Count> {
    values.iter().map(|&v| Count::Finite(v)).collect()
}

fn domain(hy: &mut Hyps, name: &str, m: &GradedModule) -> bool {
    let base = m.base();
    if base.is_polynomial_ring() {
        hy.verified(name, true)
    } else {
        hy.certified(name, base.is_domain())
    }
}

fn maximal_square_surface(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R = 2", facts.dim() == 2);
    hy.verified("M is the maximal ideal", is_maximal_ideal(&input.m)?);
    let t = ops::tensor(m, m)?;
    let by_duality = cx::h0(&t)?;
    let by_saturation = inv::h0_sat(&t)?;
    let lhs = json!({ "h0": by_duality, "h0_saturation": by_saturation });
    Ok(hy.report(
        id,
        "=",
        lhs,
        json!({ "h0": 1 }),
        by_duality == 1 && by_saturation == 1,
    ))
}

fn parameter_square(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    domain(&mut hy, "R domain", m);
    hy.verified("dim R = 2", facts.dim() == 2);
    let param = match &input.m.ideal {
        Some(i) => i.as_module()?.mu()? == facts.dim() && i.is_m_primary()? && !i.is_unit()?,
        None => false,
    };
    hy.verified("I generated by a system of parameters", param);
    let lhs = cx::h0_tensor(m, m)?;
    let Some(i) = input.m.ideal.as_ref().filter(|_| param) else {
        return Ok(hy.report(id, "=", json!(lhs), Value::Null, false));
    };
    let q = i.quotient_module()?;
    let hd = inv::hdeg(&q)?;
    let len = cx::finite_length(&q)?;
    let rhs = json!({ "hdeg": hd, "length": len });
    Ok(hy.report(id, "=", json!(lhs), rhs, Some(lhs) == len && lhs == hd))
}

fn primary_against_maximal(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let base = m.base();
    let facts = RingFacts::new(base);
    let d = facts.dim();
    let mut hy = Hyps::default();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    hy.verified("dim R >= 2", d >= 2);
    let primary = match &input.m.ideal {
        Some(i) => i.is_m_primary()? && !i.is_unit()?,
        None => false,
    };
    hy.verified("I m-primary", primary);
    let t = ops::tensor(m, &GradedModule::maximal_ideal(base)?)?;
    let lhs = h_list(&t, 0..d)?;
    let Some(i) = input.m.ideal.as_ref().filter(|_| primary) else {
        return Ok(hy.report(id, "=", json!(lhs), Value::Null, false));
    };
    let q = i.quotient_module()?;
    let beta2 = Resolution::compute(&q, Over::Quotient, 2)?.betti().total(2) as u64;
    let len = cx::finite_length(&q)?.unwrap_or(0);
    let mut rhs = vec![beta2, m.mu()? as u64 + len];
    rhs.resize(d, 0);
    let rhs = finite(&rhs);
    Ok(hy.report(id, "=", json!(lhs), json!(rhs), lhs == rhs))
}

fn maximal_square(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let d = facts.dim();
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R >= 2", d >= 2);
    hy.verified("M is the maximal ideal", is_maximal_ideal(&input.m)?);
    let lhs = h_list(&ops::tensor(m, m)?, 0..d)?;
    let mut rhs = vec![binom(d, 2), d as u64 + 1];
    rhs.resize(d.max(2), 0);
    rhs.truncate(d);
    let rhs = finite(&rhs);
    Ok(hy.report(id, "=", json!(lhs), json!(rhs), lhs == rhs))
}

fn last_syzygy_dual(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let base = m.base();
    let facts = RingFacts::new(base);
    let d = facts.dim();
    let mut hy = Hyps::default();
    let regular = hy.verified("R regular", facts.is_regular());
    hy.verified("dim R > 3", d > 3);
    let shape = regular
        && d > 1
        && same_shape(
            m,
            &syzygy(&GradedModule::residue_field(base), d - 1, Over::Quotient)?,
        )?;
    hy.verified("M is the (d-1)-st syzygy of k", shape);
    let t = ops::tensor(m, &ops::dual(m)?)?;
    let hs = h_list(&t, 0..d)?;
    let killed = inv::local_cohomology_killed_by_maximal(&t)?;
    let lhs = json!({ "h": hs, "killed_by_maximal": killed });
    let mut expected = vec![0u64; d];
    if d > 3 {
        expected[1] = 1;
        expected[2] = d as u64;
        expected[d - 1] = d as u64;
    }
    let expected = finite(&expected);
    let rhs = json!({ "h": expected, "killed_by_maximal": vec![true; d] });
    Ok(hy.report(
        id,
        "=",
        lhs,
        rhs,
        hs == expected && killed.iter().all(|&k| k),
    ))
}

fn maximal_dual(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("depth R >= 3", facts.depth()? >= 3);
    hy.verified("M is the maximal ideal", is_maximal_ideal(&input.m)?);
    let md = ops::dual(m)?;
    let mu = md.mu()?;
    let h2 = inv::h(&ops::tensor(m, &md)?, 2)?;
    let lhs = json!({ "mu_dual": mu, "h2": h2 });
    Ok(hy.report(
        id,
        "=",
        lhs,
        json!({ "mu_dual": 1, "h2": 0 }),
        mu == 1 && h2.is_zero(),
    ))
}

/// Shared hypotheses of the canonical-module statements; returns `omega` when
/// the ring is Cohen-Macaulay.
fn canonical_setup(hy: &mut Hyps, facts: &RingFacts) -> Result<Option<GradedModule>> {
    let cm = hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    hy.verified("dim R > 1", facts.dim() > 1);
    if !cm {
        return Ok(None);
    }
    hy.verified("R not Gorenstein", facts.is_gorenstein()? == Some(false));
    // an isolated singularity is regular, hence Gorenstein, off the maximal ideal
    hy.try_verified(
        "R Gorenstein on the punctured spectrum",
        facts.has_isolated_singularity(),
    );
    Ok(Some(inv::canonical(facts.base())?))
}

fn canonical_pattern(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let facts = RingFacts::new(input.m.module.base());
    let d = facts.dim();
    let mut hy = Hyps::default();
    let Some(w) = canonical_setup(&mut hy, &facts)? else {
        return Ok(hy.report(id, "nonzero pattern", Value::Null, Value::Null, false));
    };
    let t = ops::tensor(&w, &ops::dual(&w)?)?;
    let hs = h_list(&t, 0..d + 1)?;
    let measured: Vec<bool> = hs.iter().map(|c| !c.is_zero()).collect();
    let expected: Vec<bool> = (0..=d).map(|i| i <= 1 || i == d).collect();
    let lhs = json!({ "h": hs, "nonzero": measured });
    Ok(hy.report(
        id,
        "nonzero pattern",
        lhs,
        json!({ "nonzero": expected }),
        measured == expected,
    ))
}

fn canonical_tor(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let facts = RingFacts::new(input.m.module.base());
    let mut hy = Hyps::default();
    let Some(w) = canonical_setup(&mut hy, &facts)? else {
        return Ok(hy.report(id, "> 0", Value::Null, json!(0), false));
    };
    hy.verified("type R = 2", w.mu()? == 2);
    let len = inv::length(&ops::tor(1, &w, &w)?)?;
    Ok(hy.report(id, "> 0", json!(len), json!(0), !len.is_zero()))
}

fn canonical_ext(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    let cm = hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    domain(&mut hy, "R domain", m);
    if !cm {
        return Ok(hy.report(id, "iff", Value::Null, Value::Null, false));
    }
    let w = inv::canonical(facts.base())?;
    hy.verified("type R = 2", w.mu()? == 2);
    let e = ops::ext(1, &w, &GradedModule::free(facts.base(), vec![0]))?;
    let vanishes = e.is_zero()?;
    let gorenstein = facts.is_gorenstein()? == Some(true);
    let lhs = json!({ "ext1_length": inv::length(&e)?, "ext1_zero": vanishes });
    let rhs = json!({ "gorenstein": gorenstein });
    Ok(hy.report(
        id,
        "ext1_zero iff gorenstein",
        lhs,
        rhs,
        vanishes == gorenstein,
    ))
}

fn dual_pairing(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (a, b) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(a.base());
    let d = facts.dim();
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R >= 3", d >= 3);
    cx::locally_free_punctured(&mut hy, "A locally free on the punctured spectrum", a);
    cx::locally_free_punctured(&mut hy, "B locally free on the punctured spectrum", b);
    let t = ops::tensor(a, b)?;
    let td = ops::tensor(&ops::dual(a)?, &ops::dual(b)?)?;
    let js = 2..d.max(2);
    let lhs = js
        .clone()
        .map(|j| inv::h(&t, j))
        .collect::<Result<Vec<_>>>()?;
    let rhs = js
        .map(|j| inv::h(&td, d + 1 - j))
        .collect::<Result<Vec<_>>>()?;
    Ok(hy.report(id, "= per j", json!(lhs), json!(rhs), lhs == rhs))
}

fn ext_as_cohomology(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (l, n) = (&input.m.module, &input.n()?.module);
    let mut hy = Hyps::default();
    cx::locally_free_punctured(&mut hy, "L locally free on the punctured spectrum", l);
    let depth = if n.is_zero()? { 0 } else { inv::depth(n)? };
    hy.verified("depth N >= 3", depth >= 3);
    let t = ops::tensor(n, &ops::dual(l)?)?;
    let top = depth.saturating_sub(2);
    let lhs = (1..=top)
        .map(|i| inv::length(&ops::ext(i, l, n)?))
        .collect::<Result<Vec<_>>>()?;
    let rhs = (1..=top)
        .map(|i| inv::h(&t, i + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(hy.report(id, "= per i", json!(lhs), json!(rhs), lhs == rhs))
}
