//! Depths of tensor powers `M, M⊗M, M⊗M⊗M, ...` against the known predictions.

use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::ideal::Ideal;
use crate::invariants::{self as inv, Count};
use crate::module::GradedModule;
use crate::ops;

use super::context::{self as cx, RingFacts};
use super::formulas::same_shape;
use super::{CheckReport, Hypothesis, HypothesisStatus, Operand, Verdict};

/// One prediction about the sequence and whether it matched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub id: &'static str,
    pub applies: bool,
    /// Predicted value per power (`None` where the statement says nothing).
    pub predicted: Vec<Option<u64>>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthSequence {
    /// `depth(M^{⊗i})` for `i = 1..`; `None` for a zero power.
    pub values: Vec<Option<usize>>,
    /// `grade(a, M^{⊗i})` when an ideal was given.
    pub grades: Option<Vec<Count>>,
    /// First index (1-based) from which the computed values are constant.
    pub stabilization: usize,
    /// Set when a power exceeded the generator cap; the sequence stops there.
    pub truncated: bool,
    pub predictions: Vec<Prediction>,
    pub report: CheckReport,
}

fn stabilization(values: &[Option<usize>]) -> usize {
    let mut idx = values.len().max(1);
    while idx > 1 && values[idx - 2] == values[values.len() - 1] {
        idx -= 1;
    }
    idx
}

/// Compares predicted lower bounds (`at_least`) or exact values.
fn compare(values: &[Option<usize>], predicted: &[Option<u64>], at_least: bool) -> bool {
    values.iter().zip(predicted).all(|(v, p)| match (v, p) {
        (_, None) => true,
        (Some(v), Some(p)) if at_least => *v as u64 >= *p,
        (Some(v), Some(p)) => *v as u64 == *p,
        (None, Some(_)) => at_least,
    })
}

fn grades_as_values(g: &[Count]) -> Vec<Option<usize>> {
    g.iter()
        .map(|c| Some(c.finite().map_or(usize::MAX, |v| v as usize)))
        .collect()
}

pub fn depth_sequence(
    m: &Operand,
    a: Option<&Ideal>,
    nmax: usize,
    cap: usize,
) -> Result<DepthSequence> {
    let module = m.module.minimize()?;
    let base = module.base().clone();
    let facts = RingFacts::new(&base);
    let nmax = nmax.max(1);
    let depth_of = |x: &GradedModule| -> Result<Option<usize>> {
        if x.is_zero()? {
            Ok(None)
        } else {
            inv::depth(x).map(Some)
        }
    };

    let mut powers = vec![module.clone()];
    let mut truncated = false;
    while powers.len() < nmax {
        let last = powers.last().unwrap();
        if last
            .num_generators()
            .saturating_mul(module.num_generators())
            > cap
        {
            truncated = true;
            break;
        }
        powers.push(ops::tensor(last, &module)?);
    }
    let values: Vec<Option<usize>> = powers.iter().map(depth_of).collect::<Result<_>>()?;
    let grades = match a {
        Some(a) => Some(
            powers
                .iter()
                .map(|p| inv::grade(a, p))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let len = values.len();
    let depth_r = facts.depth()? as i64;
    let dim_r = facts.dim() as i64;
    let pd = cx::pd_over_base(&module, &facts)?;
    let maximal = Ideal::maximal(&base);
    let a_eff = a.cloned().unwrap_or_else(|| maximal.clone());
    let lf_punctured =
        inv::is_free(&module)? || (base.is_domain() && inv::is_locally_free_punctured(&module)?);
    let lf_off_a = cx::locally_free_off(&module, &a_eff)? == inv::Decision::Yes;
    let mut predictions = Vec::new();

    // grade(a, M^i) >= d - i pd(M) for i > 1
    {
        let applies = lf_off_a && pd.is_some();
        let p = pd.unwrap_or(0) as i64;
        let predicted: Vec<Option<u64>> = (1..=len as i64)
            .map(|i| (i > 1).then(|| (dim_r - i * p).max(0) as u64))
            .collect();
        let observed = match &grades {
            Some(g) => grades_as_values(g),
            None => values.clone(),
        };
        let holds = compare(&observed, &predicted, true);
        predictions.push(Prediction {
            id: "grade-bound",
            applies,
            predicted,
            holds,
        });
    }
    // projective dimension one: depth = max(0, depth R - i)
    {
        let applies = lf_punctured && pd == Some(1);
        let predicted = (1..=len as i64)
            .map(|i| Some((depth_r - i).max(0) as u64))
            .collect::<Vec<_>>();
        let holds = compare(&values, &predicted, false);
        predictions.push(Prediction {
            id: "depth-pd-one",
            applies,
            predicted,
            holds,
        });
    }
    // projective dimension p: depth = depth R - i p for i <= depth R / p
    {
        let p = pd.unwrap_or(0) as i64;
        let applies = lf_punctured && p >= 1;
        let predicted = (1..=len as i64)
            .map(|i| (p >= 1 && i * p <= depth_r).then(|| (depth_r - i * p) as u64))
            .collect::<Vec<_>>();
        let holds = compare(&values, &predicted, false);
        predictions.push(Prediction {
            id: "depth-pd-p",
            applies,
            predicted,
            holds,
        });
    }
    // the maximal ideal: depth 1 over a DVR, else 0, from the second power on
    {
        let is_max = match &m.ideal {
            Some(i) => i.contains_ideal(&maximal)? && maximal.contains_ideal(i)?,
            None => same_shape(&module, &maximal.as_module()?)?,
        };
        let applies = is_max && depth_r > 0;
        let dvr = facts.is_regular() && dim_r == 1;
        let predicted = (1..=len)
            .map(|i| (i >= 2).then_some(u64::from(dvr)))
            .collect::<Vec<_>>();
        let holds = compare(&values, &predicted, false);
        predictions.push(Prediction {
            id: "depth-maximal-ideal",
            applies,
            predicted,
            holds,
        });
    }
    // m-primary ideals of a hypersurface of dimension > 1: depth 0 from the second power on
    {
        let primary = match &m.ideal {
            Some(i) => i.is_m_primary()? && !i.is_unit()?,
            None => false,
        };
        let applies = primary && dim_r > 1 && facts.is_hypersurface()?;
        let predicted = (1..=len).map(|i| (i >= 2).then_some(0)).collect::<Vec<_>>();
        let holds = compare(&values, &predicted, false);
        predictions.push(Prediction {
            id: "depth-primary-hypersurface",
            applies,
            predicted,
            holds,
        });
    }
    // R / (part of a system of parameters) over a CM ring: constant depth
    {
        let applies = module.mu()? == 1 && facts.is_cohen_macaulay()? && {
            let ann = ops::annihilator(&module)?;
            let mu = ann.as_module()?.mu()?;
            ann.height()?.is_some_and(|h| h > 0 && mu == h)
        };
        let first = values[0].map(|v| v as u64);
        let predicted = vec![first; len];
        let holds = compare(&values, &predicted, false);
        predictions.push(Prediction {
            id: "depth-parameter-quotient",
            applies,
            predicted,
            holds,
        });
    }

    let stab = stabilization(&values);
    let hypotheses = predictions
        .iter()
        .map(|p| Hypothesis {
            name: format!("{} applies", p.id),
            status: if p.applies {
                HypothesisStatus::Verified
            } else {
                HypothesisStatus::Violated
            },
        })
        .collect();
    let applicable: Vec<&Prediction> = predictions.iter().filter(|p| p.applies).collect();
    let verdict = if applicable.is_empty() {
        Verdict::HypothesesViolated
    } else if applicable.iter().all(|p| p.holds) {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let report = CheckReport {
        check: "depth-seq".into(),
        hypotheses,
        relation: "matches applicable predictions".into(),
        lhs: json!({ "depths": values, "grades": grades, "stabilization": stab, "truncated": truncated }),
        rhs: json!(applicable
            .iter()
            .map(|p| json!({ "id": p.id, "predicted": p.predicted, "holds": p.holds }))
            .collect::<Vec<_>>()),
        verdict,
        millis: 0,
    };
    Ok(DepthSequence {
        values,
        grades,
        stabilization: stab,
        truncated,
        predictions,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::stabilization;

    #[test]
    fn stabilization_index() {
        assert_eq!(stabilization(&[Some(1), Some(0), Some(0), Some(0)]), 2);
        assert_eq!(stabilization(&[Some(1), Some(1)]), 1);
        assert_eq!(stabilization(&[Some(2)]), 1);
        assert_eq!(stabilization(&[Some(2), Some(1)]), 2);
    }
}
