//! Truncated minimal graded free resolutions and Betti tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{HilbertSeries, LaurentPoly};
use crate::matrix::GradedMap;
use crate::module::GradedModule;
use crate::quotient::QuotientRing;

/// Which ring a resolution is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Over {
    /// The ambient polynomial ring `S`.
    Ambient,
    /// The module's own base ring `R = S/I`.
    Quotient,
}

/// Projective dimension: exact when the resolution terminated, otherwise a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjDim {
    Exact(usize),
    AtLeast(usize),
}

impl ProjDim {
    pub fn exact(&self) -> Option<usize> {
        match self {
            ProjDim::Exact(p) => Some(*p),
            ProjDim::AtLeast(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ProjDim::Exact(_))
    }
}

impl fmt::Display for ProjDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjDim::Exact(p) => write!(f, "{p}"),
            ProjDim::AtLeast(b) => write!(f, ">= {b}"),
        }
    }
}

impl Serialize for ProjDim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProjDim::Exact(p) => s.serialize_u64(*p as u64),
            ProjDim::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// `... -> F_2 -> F_1 -> F_0 -> M -> 0` up to a homological bound.
#[derive(Debug, Clone)]
pub struct Resolution {
    module: GradedModule,
    over: Over,
    base: Arc<QuotientRing>,
    /// `maps[i]` is the differential `F_{i+1} -> F_i`.
    maps: Vec<GradedMap>,
    bound: usize,
    terminated: bool,
}

impl Resolution {
    /// Resolves `m` (minimized first) over the requested ring, computing
    /// `F_0 .. F_bound`.
    pub fn compute(m: &GradedModule, over: Over, bound: usize) -> Result<Resolution> {
        if bound == 0 {
            return Err(Error::Range(
                "the truncation bound must be at least 1".into(),
            ));
        }
        let target = match over {
            Over::Ambient => m.over_ambient()?,
            Over::Quotient => m.clone(),
        };
        let min = target.minimize()?;
        let base = min.base().clone();
        let mut maps = vec![min.presentation().clone()];
        let mut terminated = min.num_generators() == 0 || maps[0].ncols() == 0;
        while !terminated && maps.len() < bound {
            let next = maps.last().unwrap().kernel()?;
            terminated = next.ncols() == 0;
            maps.push(next);
        }
        // F_bound may be the last nonzero module; it is zero when d_bound has no columns
        Ok(Resolution {
            module: min,
            over,
            base,
            maps,
            bound,
            terminated,
        })
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn over(&self) -> Over {
        self.over
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The differentials `d_1, d_2, ...` with `d_i : F_i -> F_{i-1}`.
    pub fn maps(&self) -> &[GradedMap] {
        &self.maps
    }

    /// `d_i : F_i -> F_{i-1}` for `1 <= i`; zero past the end of a terminated resolution.
    pub fn differential(&self, i: usize) -> Result<GradedMap> {
        if i == 0 {
            return Err(Error::Range("differentials start at d_1".into()));
        }
        if i <= self.maps.len() {
            return Ok(self.maps[i - 1].clone());
        }
        if self.terminated {
            return Ok(GradedMap::zero(
                &self.base,
                Vec::new(),
                self.free_twists(i - 1)?,
            ));
        }
        Err(Error::Range(format!(
            "d_{i} lies beyond the computed bound {}",
            self.bound
        )))
    }

    /// Twists of `F_i`.
    pub fn free_twists(&self, i: usize) -> Result<Vec<i32>> {
        if i == 0 {
            return Ok(self.maps[0].target().to_vec());
        }
        if i <= self.maps.len() {
            return Ok(self.maps[i - 1].source().to_vec());
        }
        if self.terminated {
            return Ok(Vec::new());
        }
        Err(Error::Range(format!(
            "F_{i} lies beyond the computed bound {}",
            self.bound
        )))
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for i in 0..=self.maps.len().min(self.bound) {
            if let Ok(tw) = self.free_twists(i) {
                for t in tw {
                    *entries.entry((i, t)).or_insert(0) += 1;
                }
            }
        }
        BettiTable {
            entries,
            bound: self.bound,
            terminated: self.terminated,
        }
    }

    pub fn pd(&self) -> ProjDim {
        if self.terminated {
            let top = (0..=self.maps.len())
                .rev()
                .find(|&i| self.free_twists(i).is_ok_and(|t| !t.is_empty()));
            ProjDim::Exact(top.unwrap_or(0))
        } else {
            ProjDim::AtLeast(self.bound)
        }
    }

    /// `Syz_i(M)`: the image of `d_i`, presented by `d_{i+1}`. `Syz_0 = M`.
    pub fn syzygy(&self, i: usize) -> Result<GradedModule> {
        if i == 0 {
            return Ok(self.module.clone());
        }
        let next = self.differential(i + 1)?;
        Ok(GradedModule::coker(next))
    }

    /// Alternating sum of the Betti numbers as a Hilbert-series numerator.
    pub fn euler_numerator(&self) -> LaurentPoly {
        let mut num = LaurentPoly::zero();
        for ((i, j), &b) in &self.betti().entries {
            let term = LaurentPoly::monomial(b as i64, *j);
            num = if i % 2 == 0 {
                num.add(&term)
            } else {
                num.sub(&term)
            };
        }
        num
    }

    /// Hilbert series read off a terminated resolution over the ambient ring.
    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        if !self.terminated || self.over != Over::Ambient {
            return Err(Error::Unsupported(
                "needs a terminated resolution over the ambient ring".into(),
            ));
        }
        Ok(HilbertSeries::new(
            self.euler_numerator(),
            self.base.weights().to_vec(),
        ))
    }
}

/// `beta_{i,j}`: the number of summands `R(-j)` in `F_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i32), usize>,
    bound: usize,
    terminated: bool,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `beta_i`.
    pub fn total(&self, i: usize) -> usize {
        self.entries
            .range((i, i32::MIN)..=(i, i32::MAX))
            .map(|(_, &b)| b)
            .sum()
    }

    /// `(beta_0, beta_1, ...)` up to the last computed nonzero module.
    pub fn totals(&self) -> Vec<usize> {
        let top = self.entries.keys().map(|k| k.0).max().map_or(0, |t| t + 1);
        (0..top).map(|i| self.total(i)).collect()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i32), usize> {
        &self.entries
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// JSON object keyed `"i,j"`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|((i, j), b)| (format!("{i},{j}"), serde_json::Value::from(*b)))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for BettiTable {
    /// Staircase layout: column `i`, row `j - i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let totals = self.totals();
        if totals.is_empty() {
            return writeln!(f, "zero module");
        }
        let rows: Vec<i32> = {
            let mut r: Vec<i32> = self.entries.keys().map(|&(i, j)| j - i as i32).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let width = self
            .entries
            .values()
            .chain(totals.iter())
            .map(|b| b.to_string().len())
            .max()
            .unwrap_or(1)
            .max(totals.len().to_string().len());
        let label = rows
            .iter()
            .map(|r| format!("{r}:").len())
            .max()
            .unwrap_or(0)
            .max("total:".len());
        write!(f, "{:>label$}", "")?;
        for i in 0..totals.len() {
            write!(f, " {i:>width$}")?;
        }
        writeln!(f)?;
        write!(f, "{:>label$}", "total:")?;
        for b in &totals {
            write!(f, " {b:>width$}")?;
        }
        writeln!(f)?;
        for r in rows {
            write!(f, "{:>label$}", format!("{r}:"))?;
            for i in 0..totals.len() {
                let b = self.get(i, r + i as i32);
                if b == 0 {
                    write!(f, " {:>width$}", ".")?;
                } else {
                    write!(f, " {b:>width$}")?;
                }
            }
            writeln!(f)?;
        }
        if !self.terminated {
            writeln!(f, "(truncated at homological degree {})", self.bound)?;
        }
        Ok(())
    }
}

/// Resolves with the default bound `dim S + 1` when `bound` is `None`.
pub fn resolve(m: &GradedModule, over: Over, bound: Option<usize>) -> Result<Resolution> {
    let b = bound.unwrap_or(m.base().nvars() + 1);
    if over == Over::Ambient && b > m.base().nvars() {
        return m.ambient_resolution().cloned();
    }
    Resolution::compute(m, over, b)
}

pub fn betti(m: &GradedModule, over: Over, bound: Option<usize>) -> Result<BettiTable> {
    Ok(resolve(m, over, bound)?.betti())
}

pub fn pd(m: &GradedModule, over: Over, bound: Option<usize>) -> Result<ProjDim> {
    Ok(resolve(m, over, bound)?.pd())
}

/// `Syz_i(M)` over the requested ring.
pub fn syzygy(m: &GradedModule, i: usize, over: Over) -> Result<GradedModule> {
    if i == 0 {
        return m.minimize();
    }
    Resolution::compute(m, over, i + 1)?.syzygy(i)
}

/// Auslander transpose: the cokernel of the dual of a minimal presentation.
pub fn transpose(m: &GradedModule) -> Result<GradedModule> {
    let p = m.minimize()?.presentation().transpose();
    Ok(GradedModule::coker(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::ring::{AmbientRing, Polynomial};

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn koszul_betti_numbers() {
        for n in 1..=5 {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let s = AmbientRing::new(GroundField::default(), &names).unwrap();
            let r = QuotientRing::polynomial(&s);
            let k = GradedModule::residue_field(&r);
            let res = resolve(&k, Over::Ambient, None).unwrap();
            assert!(res.is_terminated());
            let totals: Vec<usize> = res.betti().totals();
            assert_eq!(totals, (0..=n).map(|i| binom(n, i)).collect::<Vec<_>>());
            assert_eq!(res.pd(), ProjDim::Exact(n));
            for w in res.maps().windows(2) {
                assert!(w[0].compose(&w[1]).unwrap().is_zero());
            }
            assert_eq!(res.hilbert_series().unwrap().length(), Some(1));
        }
    }

    #[test]
    fn periodic_resolution_over_hypersurface() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        let p = |t: &str| Polynomial::parse(&s, t).unwrap();
        let r = QuotientRing::new(&s, vec![p("x*y")]).unwrap();
        let m = GradedModule::cyclic(&r, &[p("x")]).unwrap();
        let res = resolve(&m, Over::Quotient, Some(5)).unwrap();
        assert!(!res.is_terminated());
        assert_eq!(res.betti().totals(), vec![1, 1, 1, 1, 1, 1]);
        let expect = ["x", "y", "x", "y", "x"];
        for (d, e) in res.maps().iter().zip(expect) {
            assert_eq!(d.entry(0, 0), p(e));
        }
        assert_eq!(
            pd(&m, Over::Quotient, Some(6)).unwrap(),
            ProjDim::AtLeast(6)
        );
        assert_eq!(pd(&m, Over::Quotient, Some(6)).unwrap().to_string(), ">= 6");
    }

    #[test]
    fn ideal_and_transpose() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        let p = |t: &str| Polynomial::parse(&s, t).unwrap();
        let r = QuotientRing::polynomial(&s);
        let i = GradedModule::ideal(&r, &[p("x^2"), p("y^3")]).unwrap();
        let res = resolve(&i, Over::Ambient, None).unwrap();
        assert_eq!(res.betti().totals(), vec![2, 1]);
        assert_eq!(res.pd(), ProjDim::Exact(1));
        let q = GradedModule::cyclic(&r, &[p("x")]).unwrap();
        let t = transpose(&q).unwrap();
        assert_eq!(t.presentation().entry(0, 0), p("x"));
        let free = GradedModule::free(&r, vec![0, 1]);
        assert!(transpose(&free).unwrap().is_zero().unwrap());
        assert!(syzygy(&free, 0, Over::Ambient).unwrap().mu().unwrap() == 2);
    }

    #[test]
    fn betti_text_and_json() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        let r = QuotientRing::polynomial(&s);
        let k = GradedModule::residue_field(&r);
        let b = betti(&k, Over::Ambient, None).unwrap();
        assert_eq!(b.to_json().to_string(), r#"{"0,0":1,"1,1":2,"2,2":1}"#);
        let text = b.to_string();
        assert!(text.contains("total: 1 2 1"), "{text}");
    }
}
