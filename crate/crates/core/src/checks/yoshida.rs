//! Per-degree comparison of `h^i(M⊗N)` with the Betti-weighted sums, for
//! perfect `M` and Buchsbaum `N`. Equality is reported, never asserted.

use serde_json::json;

use crate::error::Result;
use crate::invariants::{self as inv, Count};
use crate::ops;

use super::context::{self as cx, RingFacts};
use super::{CheckReport, Hyps, Operand};

pub fn yoshida_report(m: &Operand, n: &Operand) -> Result<CheckReport> {
    let (mm, nn) = (&m.module, &n.module);
    let facts = RingFacts::new(mm.base());
    let mut hy = Hyps::default();
    hy.verified("R Cohen-Macaulay", facts.is_cohen_macaulay()?);
    let (perfect, pd) = cx::is_perfect(mm, &facts)?;
    hy.verified("M perfect", perfect);
    cx::buchsbaum(&mut hy, "N Buchsbaum", n)?;
    hy.verified("dim N = dim R", inv::dim(nn)? == Some(facts.dim()));
    let depth_n = if nn.is_zero()? { 0 } else { inv::depth(nn)? };
    hy.verified("pd M <= depth N", pd.is_some_and(|p| p <= depth_n));
    let Some(p) = pd.filter(|_| perfect) else {
        return Ok(hy.report("yoshida", "table", json!(null), json!(null), false));
    };
    // the bound side is a theorem when N is locally free of constant rank
    let bound_applies =
        nn.base().is_domain() && (inv::is_free(nn)? || inv::is_locally_free_punctured(nn)?);
    let betti = cx::betti_over_base(mm, p)?;
    let t = ops::tensor(mm, nn)?;
    let dm = inv::dim(mm)?.unwrap_or(0);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut status = Vec::new();
    for i in 0..dm {
        let l = inv::h(&t, i)?;
        let mut total = Count::Finite(0);
        for (j, &b) in betti.iter().enumerate() {
            total = match (total, inv::h(nn, i + j)?) {
                (Count::Finite(x), Count::Finite(y)) => Count::Finite(x + b as u64 * y),
                (t, _) if b == 0 => t,
                _ => Count::Infinite,
            };
        }
        status.push(if l == total {
            "equality"
        } else if l < total {
            "inequality"
        } else {
            "bound-violated"
        });
        lhs.push(l);
        rhs.push(total);
    }
    let violated = status.contains(&"bound-violated");
    let lhs = json!({ "h": lhs, "status": status, "bound_is_theorem": bound_applies });
    Ok(hy.report(
        "yoshida",
        "table",
        lhs,
        json!({ "sum": rhs }),
        !(violated && bound_applies),
    ))
}
