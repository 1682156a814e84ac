//! Vanishing of low local cohomology of tensor products.

use serde_json::json;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::invariants::{self as inv, Count, Decision};
use crate::module::GradedModule;
use crate::ops;

use super::context::{self as cx, RingFacts};
use super::{CheckInput, CheckReport, Hyps};

pub(super) fn run(id: &str, input: &CheckInput) -> Result<CheckReport> {
    match id {
        "g-vanish" => grade_sum(id, input, false),
        "gc-vanish" => grade_sum(id, input, true),
        "gor-ht2" => height_two(id, input),
        _ => Err(Error::Undefined(format!("`{id}` is not a vanishing check"))),
    }
}

fn add(a: Count, b: Count) -> Count {
    match (a, b) {
        (Count::Finite(x), Count::Finite(y)) => Count::Finite(x + y),
        _ => Count::Infinite,
    }
}

/// Decides `H^0_a = .. = H^r_a = 0` on `t`. For `m`-primary `a` the
/// lengths are reported, otherwise `grade(a, t)`, which is the least `i`
/// with `H^i_a(t) != 0`.
pub(super) fn low_vanishing(
    t: &GradedModule,
    a: &Ideal,
    r: usize,
) -> Result<(serde_json::Value, bool)> {
    if a.is_m_primary()? && !a.is_unit()? {
        let hs: Vec<Count> = (0..=r).map(|i| inv::h(t, i)).collect::<Result<_>>()?;
        let ok = hs.iter().all(|c| c.is_zero());
        return Ok((json!({ "h": hs }), ok));
    }
    let g = inv::grade(a, t)?;
    Ok((json!({ "grade": g }), g >= Count::Finite(r as u64 + 1)))
}

/// One of the two factors is locally free off `V(a)`.
pub(super) fn either_locally_free(
    m: &GradedModule,
    n: &GradedModule,
    a: &Ideal,
) -> Result<Decision> {
    let dm = cx::locally_free_off(m, a)?;
    if dm == Decision::Yes {
        return Ok(dm);
    }
    let dn = cx::locally_free_off(n, a)?;
    Ok(match (dm, dn) {
        (_, Decision::Yes) => Decision::Yes,
        (Decision::No, Decision::No) => Decision::No,
        _ => Decision::Unknown,
    })
}

fn grade_sum(id: &str, input: &CheckInput, both_finite: bool) -> Result<CheckReport> {
    let (m, n) = (&input.m.module, &input.n()?.module);
    let a = input.ideal();
    let r = input.r.unwrap_or(0);
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    let d = if both_finite {
        let depth = facts.depth()?;
        hy.verified("depth R > 0", depth > 0);
        depth
    } else {
        facts.dim()
    };
    hy.verified("pd M < infinity", cx::pd_over_base(m, &facts)?.is_some());
    if both_finite {
        hy.verified("pd N < infinity", cx::pd_over_base(n, &facts)?.is_some());
    }
    hy.decided(
        "M or N locally free off V(a)",
        either_locally_free(m, n, &a)?,
    );
    let sum = add(inv::grade(&a, m)?, inv::grade(&a, n)?);
    let (grade_name, r_name) = if both_finite {
        (
            "grade(a,M) + grade(a,N) >= depth R + r + 1",
            "0 <= r < depth R",
        )
    } else {
        ("grade(a,M) + grade(a,N) >= d + r + 1", "0 <= r < d")
    };
    hy.verified(grade_name, sum >= Count::Finite((d + r + 1) as u64));
    hy.verified(r_name, r < d);
    let t = ops::tensor(m, n)?;
    let (lhs, vanish) = low_vanishing(&t, &a, r)?;
    Ok(hy.report(
        id,
        "vanish through r",
        lhs,
        json!({ "r": r, "grade_sum": sum }),
        vanish,
    ))
}

fn height_two(id: &str, input: &CheckInput) -> Result<CheckReport> {
    let m = &input.m.module;
    let facts = RingFacts::new(m.base());
    let mut hy = Hyps::default();
    hy.verified("R regular", facts.is_regular());
    hy.verified("dim R > 2", facts.dim() > 2);
    let gorenstein = match &input.m.ideal {
        Some(i) => i.as_module()?.mu()? == 2 && i.height()? == Some(2),
        None => false,
    };
    hy.verified("I Gorenstein of height 2", gorenstein);
    let lhs = cx::h0_tensor(m, m)?;
    Ok(hy.report(id, "=", json!(lhs), json!(0), lhs == 0))
}
