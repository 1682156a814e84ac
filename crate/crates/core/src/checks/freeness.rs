//! Criteria deducing freeness (or reflexivity) from torsion-freeness and
//! vanishing of tensor products. A criterion holds on an instance when its
//! premise fails or its conclusion holds.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::invariants::{self as inv, Count, Decision};
use crate::module::GradedModule;
use crate::ops;

use super::context::{self as cx, RingFacts};
use super::vanishing::low_vanishing;
use super::{CheckInput, CheckReport, Hyps};

pub(super) fn run(id: &str, input: &CheckInput) -> Result<CheckReport> {
    match id {
        "free-2au" => surface_equivalence(id, input),
        "free-t2" => depth_two(id, input),
        "free-t3" => cube(id, input),
        "free-hyp2" => normal_surface(id, input),
        "free-518" => serre_power(id, input),
        "free-laun" => dual_vanishing(id, input),
        "free-sph1" => dual_grade_sum(id, input),
        "sph-equiv" => spherical(id, input),
        "refl-516" => reflexive_factor(id, input),
        _ => Err(Error::Undefined(format!(
            "`{id}` is not a freeness criterion"
        ))),
    }
}

const IMPLIES: &str = "premise implies conclusion";

/// Report for "premise => conclusion" with a possibly undecided premise.
fn implication(
    hy: Hyps,
    id: &str,
    premise: Option<bool>,
    detail: Value,
    conclusion: bool,
) -> CheckReport {
    let lhs = json!({ "premise": premise, "detail": detail });
    let rhs = json!({ "conclusion": conclusion });
    match premise {
        Some(p) => hy.report(id, IMPLIES, lhs, rhs, !p || conclusion),
        None if conclusion => hy.report(id, IMPLIES, lhs, rhs, true),
        None => hy.undecidable(id, IMPLIES, lhs, rhs),
    }
}

fn pd_finite(
    hy: &mut Hyps,
    name: &str,
    m: &GradedModule,
    facts: &RingFacts,
) -> Result<Option<usize>> {
    let pd = cx::pd_over_base(m, facts)?;
    hy.verified(name, pd.is_some());
    Ok(pd)
}

fn surface_equivalence(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R = 2", facts.dim() == 2);
    hy.verified(
        "M nonzero torsion-free",
        !m.is_zero()? && inv::is_torsion_free(m)?,
    );
    let h0 = cx::h0_tensor(m, m)?;
    let free = inv::is_free(m)?;
    let lhs = json!({ "h0": h0 });
    Ok(hy.report(
        id,
        "h0 = 0 iff free",
        lhs,
        json!({ "free": free }),
        (h0 == 0) == free,
    ))
}

fn depth_two(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("depth R = 2", facts.depth()? == 2);
    hy.verified("M torsion-free", inv::is_torsion_free(m)?);
    pd_finite(&mut hy, "pd M < infinity", m, &facts)?;
    let premise = inv::is_torsion_free(&ops::tensor(m, m)?)?;
    Ok(implication(
        hy,
        id,
        Some(premise),
        json!("M⊗M torsion-free"),
        inv::is_free(m)?,
    ))
}

fn cube(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    hy.verified("dim R = 3", facts.dim() == 3);
    hy.verified("M reflexive", inv::is_reflexive(m)?);
    pd_finite(&mut hy, "pd M < infinity", m, &facts)?;
    let premise = inv::is_torsion_free(&ops::tensor_power(m, 3)?)?;
    Ok(implication(
        hy,
        id,
        Some(premise),
        json!("M⊗M⊗M torsion-free"),
        inv::is_free(m)?,
    ))
}

fn normal_surface(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R hypersurface", facts.is_hypersurface()?);
    hy.verified("dim R = 2", facts.dim() == 2);
    let normal = facts.is_normal()?;
    if facts.base().is_domain() && !facts.is_regular() {
        hy.certified("R normal", normal);
    } else {
        hy.verified("R normal", normal);
    }
    let premise = inv::is_torsion_free(&ops::tensor(m, m)?)?;
    Ok(implication(
        hy,
        id,
        Some(premise),
        json!("M⊗M torsion-free"),
        inv::is_free(m)?,
    ))
}

/// `H^r_a(t) = 0`: decided by lengths for `m`-primary `a`, otherwise by
/// `grade(a, t)` (greater than `r`: vanishes; equal: does not; smaller: unknown).
fn single_vanishing(t: &GradedModule, a: &Ideal, r: usize) -> Result<(Option<bool>, Value)> {
    if a.is_m_primary()? && !a.is_unit()? {
        let h = inv::h(t, r)?;
        return Ok((Some(h.is_zero()), json!({ "h": h })));
    }
    let g = inv::grade(a, t)?;
    let r = Count::Finite(r as u64);
    let decided = if g > r {
        Some(true)
    } else if g == r {
        Some(false)
    } else {
        None
    };
    Ok((decided, json!({ "grade": g })))
}

fn serre_power(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let a = input.ideal();
    let facts = RingFacts::new(m.base());
    let d = facts.dim();
    let r = input.r.unwrap_or(1).min(d);
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.decided("M locally free off V(a)", cx::locally_free_off(m, &a)?);
    hy.verified("M satisfies (S_r)", inv::serre_sr(m, r)?);
    let power = if d == r {
        GradedModule::free(m.base(), vec![0])
    } else {
        ops::tensor_power(m, d - r)?
    };
    let (premise, detail) = single_vanishing(&power, &a, r)?;
    let detail = json!({ "r": r, "power": d - r, "value": detail });
    Ok(implication(hy, id, premise, detail, inv::is_free(m)?))
}

fn dual_vanishing(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let a = input.ideal();
    let mut hy = Hyps::default();
    hy.verified("grade(a, M) > 0", inv::grade(&a, m)? > Count::Finite(0));
    hy.decided("M locally free off V(a)", cx::locally_free_off(m, &a)?);
    let t = ops::tensor(m, &ops::dual(m)?)?;
    let (detail, vanish) = low_vanishing(&t, &a, 1)?;
    Ok(implication(hy, id, Some(vanish), detail, inv::is_free(m)?))
}

fn dual_grade_sum(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let a = input.ideal();
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    pd_finite(&mut hy, "pd M < infinity", m, &facts)?;
    hy.decided("M locally free off V(a)", cx::locally_free_off(m, &a)?);
    let gm = inv::grade(&a, m)?;
    let gd = inv::grade(&a, &ops::dual(m)?)?;
    let sum = match (gm, gd) {
        (Count::Finite(x), Count::Finite(y)) => Count::Finite(x + y),
        _ => Count::Infinite,
    };
    let premise = sum >= Count::Finite(facts.dim() as u64 + 2);
    let detail = json!({ "grade_m": gm, "grade_dual": gd, "dim_r": facts.dim() });
    Ok(implication(hy, id, Some(premise), detail, inv::is_free(m)?))
}

fn spherical(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R hypersurface", facts.is_hypersurface()?);
    hy.verified("M torsion-free", inv::is_torsion_free(m)?);
    cx::constant_rank(&mut hy, "M has constant rank", m);
    let pd = cx::pd_over_base(m, &facts)?;
    hy.verified("1 <= pd M < infinity", pd.is_some_and(|p| p >= 1));
    cx::locally_free_punctured(&mut hy, "M locally free on the punctured spectrum", m);
    let md = ops::dual(m)?;
    let depth_sum = inv::depth(m)? + if md.is_zero()? { 0 } else { inv::depth(&md)? };
    let first = depth_sum == facts.dim() + 1;
    let second = inv::is_torsion_free(&ops::tensor(m, &md)?)?;
    let Some(p) = pd.filter(|&p| p >= 1) else {
        let lhs = json!({ "depth_sum_is_dim_plus_one": first, "tensor_with_dual_torsion_free": second, "depth_sum": depth_sum });
        return Ok(hy.report(
            id,
            "all agree",
            lhs,
            json!({ "agree": true }),
            first == second,
        ));
    };
    let ring = GradedModule::free(m.base(), vec![0]);
    let mut third = true;
    for i in 1..p {
        if !ops::ext(i, m, &ring)?.is_zero()? {
            third = false;
            break;
        }
    }
    let lhs = json!({ "depth_sum_is_dim_plus_one": first, "tensor_with_dual_torsion_free": second, "spherical": third, "pd": p, "depth_sum": depth_sum });
    let agree = first == second && second == third;
    Ok(hy.report(id, "all agree", lhs, json!({ "agree": true }), agree))
}

fn reflexive_factor(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R hypersurface", facts.is_hypersurface()?);
    if m.base().is_domain() {
        hy.verified("M, N have constant rank", true);
    } else {
        hy.decided("M, N have constant rank", Decision::Unknown);
    }
    let finite = cx::pd_over_base(m, &facts)?.is_some() && cx::pd_over_base(n, &facts)?.is_some();
    hy.verified("pd M, pd N < infinity", finite);
    let lf = |x: &GradedModule| -> Result<bool> {
        Ok(inv::is_free(x)? || inv::is_locally_free_punctured(x)?)
    };
    hy.try_verified(
        "M, N locally free on the punctured spectrum",
        lf(m).and_then(|a| Ok(a && lf(n)?)),
    );
    let premise = inv::is_torsion_free(&ops::tensor(m, n)?)?;
    let conclusion = inv::is_reflexive(m)? || inv::is_reflexive(n)?;
    Ok(implication(
        hy,
        id,
        Some(premise),
        json!("M⊗N torsion-free"),
        conclusion,
    ))
}
