//! Upper bounds for `h^0(M ⊗ N)` and its higher analogues.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariants::{self as inv, Count};
use crate::module::GradedModule;
use crate::ops;
use crate::resolution::{transpose, Over, Resolution};

use super::context::{self as cx, RingFacts};
use super::{count_json, CheckInput, CheckReport, Hyps};

pub(super) fn run(id: &str, input: &CheckInput) -> Result<CheckReport> {
    match id {
        "lemma-0" => lemma_finite_length(id, input),
        "lemma-red" => lemma_reduction(id, input),
        "prop-vector" => betti_weighted(id, input),
        "prop-cvector" => hdeg_regular(id, input),
        "cor-1d" => low_dimension(id, input),
        "cor-jac" => jacobian(id, input),
        "prop-v5" => gorenstein_mcm(id, input),
        "prop-buchs" => perfect_buchsbaum(id, input),
        "fact-3ht" => three_dim_torsion_free(id, input),
        "prop-vector2" => higher_betti_weighted(id, input),
        "vasc-81" => presentation_shaped(id, input),
        _ => Err(Error::Undefined(format!("`{id}` is not a bound"))),
    }
}

/// `sum_i w_i c_i` with infinity absorbing any nonzero weight.
fn weighted(weights: &[usize], counts: &[Count]) -> Count {
    let mut total = 0u64;
    for (&w, &c) in weights.iter().zip(counts) {
        match c {
            Count::Finite(v) => total += w as u64 * v,
            Count::Infinite if w > 0 => return Count::Infinite,
            Count::Infinite => {}
        }
    }
    Count::Finite(total)
}

fn h_range(m: &GradedModule, from: usize, len: usize) -> Result<Vec<Count>> {
    (from..from + len).map(|i| inv::h(m, i)).collect()
}

fn nonzero(hy: &mut Hyps, m: &GradedModule, n: &GradedModule) -> Result<bool> {
    Ok(hy.verified("M, N nonzero", !m.is_zero()? && !n.is_zero()?))
}

fn lemma_finite_length(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let mut hy = Hyps::default();
    let lm = cx::finite_length(m)?;
    hy.verified("M has finite length", lm.is_some());
    let lhs = cx::h0_tensor(m, n)?;
    let mu_n = n.mu()? as u64;
    let rhs = lm.map(|l| l * mu_n);
    Ok(hy.report(
        id,
        "<=",
        json!(lhs),
        json!(rhs),
        rhs.is_some_and(|r| lhs <= r),
    ))
}

fn lemma_reduction(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let hy = Hyps::default();
    let lhs = cx::h0_tensor(m, n)?;
    let mu_n = n.mu()? as u64;
    let (mt, nt) = (cx::unmixed_part(m)?, cx::unmixed_part(n)?);
    let first = cx::h0(m)? * mu_n + cx::h0_tensor(&mt, n)?;
    let second = cx::h0(m)? * mu_n + cx::h0(n)? * mu_n + cx::h0_tensor(&mt, &nt)?;
    Ok(hy.report(
        id,
        "<= each",
        json!(lhs),
        json!([first, second]),
        lhs <= first && lhs <= second,
    ))
}

fn betti_weighted(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R equidimensional", facts.is_equidimensional()?);
    hy.verified("R generalized Cohen-Macaulay", facts.is_generalized_cm()?);
    cx::locally_free_punctured(&mut hy, "N locally free on the punctured spectrum", n);
    cx::constant_rank(&mut hy, "N has constant rank", n);
    let pd = cx::pd_over_base(m, &facts)?;
    hy.verified(
        "pd M < depth R",
        pd.is_some_and(|p| p < facts.depth().unwrap_or(0)),
    );
    let lhs = cx::h0_tensor(m, n)?;
    let Some(p) = pd else {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    };
    let betti = cx::betti_over_base(m, p)?;
    let rhs = weighted(&betti, &h_range(n, 0, p + 1)?);
    Ok(hy.report(
        id,
        "<=",
        json!(lhs),
        count_json(rhs),
        Count::Finite(lhs) <= rhs,
    ))
}

fn hdeg_regular(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    let regular = hy.verified("R regular", facts.is_regular());
    cx::locally_free_punctured(&mut hy, "N locally free on the punctured spectrum", n);
    let lhs = cx::h0_tensor(m, n)?;
    if !regular {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    }
    let d = facts.dim() as i64;
    let prod = (inv::hdeg(m)? * inv::hdeg(n)?) as i64;
    let rhs = if (inv::pd_ambient(m)? as i64) < d {
        d * prod
    } else {
        (d + 1) * prod - 1
    };
    Ok(hy.report(id, "<=", json!(lhs), json!(rhs), lhs as i64 <= rhs))
}

fn low_dimension(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    let d = facts.dim();
    let shape = match d {
        1 => true,
        2 => inv::is_torsion_free(m)?,
        3 => inv::is_reflexive(m)?,
        _ => false,
    };
    hy.verified(
        "d = 1, or d = 2 and M torsion-free, or d = 3 and M reflexive",
        shape,
    );
    nonzero(&mut hy, m, n)?;
    let lhs = cx::h0_tensor(m, n)?;
    let rhs = (d as u64 + 1) * inv::hdeg(m)? * inv::hdeg(n)?;
    Ok(hy.report(id, "<", json!(lhs), json!(rhs), lhs < rhs))
}

fn jacobian(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let base = m.base();
    let mut hy = Hyps::default();
    let domain = hy.certified("R domain", base.is_domain());
    let one_dim = hy.verified("dim R = 1", base.dim() == 1);
    let lhs = cx::h0_tensor(m, n)?;
    if !(domain && one_dim) {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    }
    let j = inv::jacobian_ideal(base)?;
    let lj = cx::finite_length(&j.quotient_module()?)?;
    hy.verified("R/J has finite length", lj.is_some());
    let Some(lj) = lj else {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    };
    let deg_r = base.hilbert_series().degree()? as i64;
    let c = deg_r * lj as i64;
    let hh = (inv::hdeg(m)? * inv::hdeg(n)?) as i64;
    let rr = (inv::rank(m)? * inv::rank(n)?) as i64;
    let rhs = hh * (2 + c) - rr * c;
    Ok(hy.report(id, "<=", json!(lhs), json!(rhs), (lhs as i64) <= rhs))
}

fn gorenstein_mcm(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R Gorenstein", facts.is_gorenstein()? == Some(true));
    hy.verified(
        "R has an isolated singularity",
        facts.has_isolated_singularity()?,
    );
    let mcm = !m.is_zero()? && inv::depth(m)? == facts.dim();
    hy.verified("M maximal Cohen-Macaulay", mcm);
    let lhs = cx::h0_tensor(m, n)?;
    if !hy.all_hold() {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    }
    let beta2 = Resolution::compute(n, Over::Quotient, 2)?.betti().total(2) as u64;
    let transpose_len = inv::length(&transpose(&ops::dual(m)?)?)?;
    let rhs = match transpose_len {
        Count::Finite(l) => Count::Finite(beta2 * l),
        Count::Infinite if beta2 == 0 => Count::Finite(0),
        Count::Infinite => Count::Infinite,
    };
    Ok(hy.report(
        id,
        "<=",
        json!(lhs),
        count_json(rhs),
        Count::Finite(lhs) <= rhs,
    ))
}

fn perfect_buchsbaum(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, nop) = (&input.m.module, input.n()?);
    let n = &nop.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    let d = facts.dim();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    hy.verified("dim R > 1", d > 1);
    let (perfect, pd) = cx::is_perfect(m, &facts)?;
    hy.verified("M perfect", perfect);
    hy.verified("pd M = 1", pd == Some(1));
    cx::buchsbaum(&mut hy, "N Buchsbaum", nop)?;
    hy.verified("dim N = dim R", inv::dim(n)? == Some(d));
    nonzero(&mut hy, m, n)?;
    let lhs = cx::h0_tensor(m, n)?;
    let hh = inv::hdeg(m)? * inv::hdeg(n)?;
    let positive_depth = !n.is_zero()? && inv::depth(n)? > 0;
    if positive_depth {
        Ok(hy.report(id, "<=", json!(lhs), json!(2 * hh), lhs <= 2 * hh))
    } else {
        Ok(hy.report(id, "<", json!(lhs), json!(3 * hh), lhs < 3 * hh))
    }
}

fn three_dim_torsion_free(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R = 3", facts.dim() == 3);
    hy.verified("M torsion-free", inv::is_torsion_free(m)?);
    hy.verified("N torsion-free", inv::is_torsion_free(n)?);
    nonzero(&mut hy, m, n)?;
    let lhs = cx::h0_tensor(m, n)?;
    let bound = 16 * inv::hdeg(m)? * inv::hdeg(n)?;
    let ratio = if bound == 0 {
        Value::Null
    } else {
        json!(lhs as f64 / bound as f64)
    };
    Ok(hy.report(
        id,
        "<",
        json!(lhs),
        json!({ "bound": bound, "ratio": ratio }),
        lhs < bound,
    ))
}

fn higher_betti_weighted(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    let (perfect, pd) = cx::is_perfect(m, &facts)?;
    hy.verified("M perfect", perfect);
    cx::locally_free_punctured(&mut hy, "N locally free on the punctured spectrum", n);
    cx::constant_rank(&mut hy, "N has constant rank", n);
    let t = ops::tensor(m, n)?;
    let dm = inv::dim(m)?.unwrap_or(0);
    let lhs = h_range(&t, 0, dm)?;
    let Some(p) = pd.filter(|_| perfect) else {
        return Ok(hy.report(id, "<= per i", json!(lhs), Value::Null, false));
    };
    let betti = cx::betti_over_base(m, p)?;
    let rhs: Vec<Count> = (0..dm)
        .map(|i| Ok(weighted(&betti, &h_range(n, i, p + 1)?)))
        .collect::<Result<_>>()?;
    let holds = lhs.iter().zip(&rhs).all(|(l, r)| l <= r);
    Ok(hy.report(id, "<= per i", json!(lhs), json!(rhs), holds))
}

fn presentation_shaped(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = input.m.module.minimize()?;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    let d = facts.dim();
    hy.verified("R regular", facts.is_regular());
    let gens = m.num_generators();
    let rels = m.presentation().ncols();
    let shaped = rels > 0 && gens == rels + d - 1 && inv::pd_ambient(&m)? == 1;
    hy.verified("M has a presentation 0 -> R^n -> R^(n+d-1)", shaped);
    let lhs = cx::h0_tensor(&m, &m)?;
    if !shaped {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    }
    let fit = ops::fitting(&m, d - 1)?;
    let primary = hy.verified("I_n(phi) is m-primary", fit.is_m_primary()?);
    if !primary {
        return Ok(hy.report(id, "<=", json!(lhs), Value::Null, false));
    }
    let lf = cx::finite_length(&fit.quotient_module()?)?.unwrap_or(0);
    let inner = (d as u64 - 1) * inv::degree(&m)? + lf;
    let rhs = d as u64 * inner * inner;
    Ok(hy.report(id, "<=", json!(lhs), json!(rhs), lhs <= rhs))
}
