//! Sharpness explorer: evaluates a registry bound on seeded random
//! monomial instances and tabulates lhs/rhs.

use std::sync::Arc;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::Value;
use tensorcoh::checks::{self, CheckInput, Family, Operand, Verdict};
use tensorcoh::quotient::QuotientRing;
use tensorcoh::sample::{Sample, SampleConfig, Sampler};
use tensorcoh::GroundField;

#[derive(Debug, Clone)]
pub struct Row {
    pub instance_id: usize,
    pub description: String,
    pub lhs: Value,
    pub rhs: Value,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct Exploration {
    pub id: String,
    pub rows: Vec<Row>,
}

impl Exploration {
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    pub fn csv(&self) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| e.to_string();
        w.write_record(["instance_id", "description", "lhs", "rhs", "ratio"]).map_err(io)?;
        for r in &self.rows {
            let ratio = r.ratio.map(|x| format!("{x:.6}")).unwrap_or_default();
            w.write_record([r.instance_id.to_string(), r.description.clone(), r.lhs.to_string(), r.rhs.to_string(), ratio])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

struct Instance {
    description: String,
    input: CheckInput,
}

/// Samples `trials` instances for bound `id` and evaluates them in parallel.
/// A violated proven bound is an error.
pub fn explore(id: &str, trials: usize, seed: u64, vars: Option<usize>, field: GroundField) -> Result<Exploration> {
    let Some(spec) = checks::find(id) else {
        bail!("unknown check `{id}`");
    };
    if spec.family != Family::Bound {
        bail!("`{id}` is not a bound; the explorer samples bounds only");
    }
    let config = SampleConfig::default();
    if vars.is_some_and(|v| v == 0 || v > 5) {
        bail!("vars must be between 1 and 5");
    }
    let rings: Vec<Arc<QuotientRing>> =
        (1..=5).map(|n| Sampler::ring(field, n)).collect::<tensorcoh::Result<_>>()?;
    let mut sampler = Sampler::new(seed, config);
    let mut instances = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = match (vars, id) {
            (Some(v), _) => v,
            (None, "vasc-81") => 2,
            (None, _) => sampler.nvars(),
        };
        let base = &rings[n - 1];
        instances.push(match id {
            "vasc-81" => single(sampler.column_presentation(base)?),
            "lemma-0" => pair(sampler.finite_length(base)?, sampler.module(base)?),
            _ => pair(sampler.module(base)?, sampler.module(base)?),
        });
    }
    let results: Vec<tensorcoh::Result<checks::CheckReport>> =
        instances.par_iter().map(|inst| checks::run(id, &inst.input)).collect();
    let mut rows = Vec::with_capacity(trials);
    for (i, (inst, rep)) in instances.into_iter().zip(results).enumerate() {
        let rep = rep?;
        if rep.is_soundness_failure() {
            bail!(
                "{id} violated on instance {} ({}): lhs {} rhs {}",
                i + 1,
                inst.description,
                rep.lhs,
                rep.rhs
            );
        }
        let description = match rep.verdict {
            Verdict::Holds | Verdict::Fails => inst.description,
            v => format!("{} [{v}]", inst.description),
        };
        rows.push(Row {
            instance_id: i + 1,
            description,
            ratio: ratio(&rep.lhs, &rep.rhs),
            lhs: rep.lhs,
            rhs: rep.rhs,
            verdict: rep.verdict,
        });
    }
    Ok(Exploration { id: id.to_string(), rows })
}

fn single(m: Sample) -> Instance {
    Instance { description: m.description, input: CheckInput::new(Operand::new(m.module)) }
}

fn pair(m: Sample, n: Sample) -> Instance {
    Instance {
        description: format!("M = {}; N = {}", m.description, n.description),
        input: CheckInput::new(Operand::new(m.module)).with_n(Operand::new(n.module)),
    }
}

/// lhs/rhs, maximized over componentwise bounds; `None` when undefined.
pub fn ratio(lhs: &Value, rhs: &Value) -> Option<f64> {
    let max = |it: &mut dyn Iterator<Item = Option<f64>>| it.flatten().reduce(f64::max);
    match (lhs, rhs) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64()?, b.as_f64()?);
            if b == 0.0 {
                (a == 0.0).then_some(0.0)
            } else {
                Some(a / b)
            }
        }
        (Value::Array(a), Value::Array(b)) => max(&mut a.iter().zip(b).map(|(x, y)| ratio(x, y))),
        (l, Value::Array(b)) => max(&mut b.iter().map(|y| ratio(l, y))),
        (l, Value::Object(o)) => ratio(l, o.get("bound")?),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn ratios() {
        assert_eq!(ratio(&json!(1), &json!(8)), Some(0.125));
        assert_eq!(ratio(&json!(0), &json!(0)), Some(0.0));
        assert_eq!(ratio(&json!(2), &json!([4, 8])), Some(0.5));
        assert_eq!(ratio(&json!([1, 3]), &json!([2, 3])), Some(1.0));
        assert_eq!(ratio(&json!("infinite"), &json!(3)), None);
    }
}
