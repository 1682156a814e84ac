//! Numerical invariants and predicates of graded modules.
//!
//! Local cohomology lengths come from graded local duality:
//! `H^i_m(M)` has finite length iff `Ext^{n-i}_S(M, S)` does, and then the
//! two lengths agree.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::matrix::GradedMap;
use crate::module::GradedModule;
use crate::ops::{self, Biduality};
use crate::quotient::QuotientRing;
use crate::resolution::ProjDim;
use crate::ring::Polynomial;
use crate::vector::{VTerm, Vector};

/// A natural number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(v) => Some(v),
            Count::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Count::Finite(0)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(v) => s.serialize_u64(*v),
            Count::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A three-valued answer for tests that are only complete on part of their domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }
}

/// Krull dimension, `None` for the zero module.
pub fn dim(m: &GradedModule) -> Result<Option<usize>> {
    Ok(m.hilbert_series()?.dim())
}

/// Multiplicity: the numerator of the reduced Hilbert series at `t = 1`.
pub fn degree(m: &GradedModule) -> Result<u64> {
    m.hilbert_series()?.degree()
}

pub fn length(m: &GradedModule) -> Result<Count> {
    Ok(match m.hilbert_series()?.length() {
        Some(l) => Count::Finite(l),
        None => Count::Infinite,
    })
}

pub fn mu(m: &GradedModule) -> Result<usize> {
    m.mu()
}

/// `deg(M) / deg(R)` when `dim M = dim R`, else 0.
pub fn rank(m: &GradedModule) -> Result<usize> {
    let base = m.base();
    if !base.is_domain() {
        return Err(Error::Unsupported(
            "rank needs a base ring certified to be a domain".into(),
        ));
    }
    if dim(m)? != Some(base.dim()) {
        return Ok(0);
    }
    let dm = degree(m)?;
    let dr = base.hilbert_series().degree()?;
    if dm % dr != 0 {
        return Err(Error::Internal(format!(
            "multiplicity {dm} is not a multiple of deg R = {dr}"
        )));
    }
    Ok((dm / dr) as usize)
}

/// Projective dimension over the ambient polynomial ring.
pub fn pd_ambient(m: &GradedModule) -> Result<usize> {
    let m = m.minimize()?;
    match m.ambient_resolution()?.pd() {
        ProjDim::Exact(p) => Ok(p),
        ProjDim::AtLeast(b) => Err(Error::Internal(format!(
            "resolution over the polynomial ring did not stop by step {b}"
        ))),
    }
}

/// `depth M = n - pd_S M`.
pub fn depth(m: &GradedModule) -> Result<usize> {
    let m = m.minimize()?;
    if m.is_zero()? {
        return Err(Error::Undefined("depth of the zero module".into()));
    }
    Ok(m.base().nvars() - pd_ambient(&m)?)
}

/// `grade(a, M)`: `c - max{i : H_i(a; M) != 0}` over the `c` generators of
/// `a`, or infinite when `M = aM`.
pub fn grade(a: &Ideal, m: &GradedModule) -> Result<Count> {
    let m = m.minimize()?;
    let base = m.base();
    base.same_ring(a.base())?;
    if ops::tensor(&m, &a.quotient_module()?)?.is_zero()? {
        return Ok(Count::Infinite);
    }
    let gens = a.generators();
    let c = gens.len();
    for i in (1..=c).rev() {
        if !ops::koszul_homology(&m, gens, i)?.is_zero()? {
            return Ok(Count::Finite((c - i) as u64));
        }
    }
    Ok(Count::Finite(c as u64))
}

fn ambient_dual(m: &GradedModule, q: usize) -> Result<GradedModule> {
    Ok(m.ambient_duals()?[q].clone())
}

/// Dimension of `Ext^q_S(M, S)` as an `i64`, with `-1` for the zero module.
pub fn ext_dim(m: &GradedModule, q: usize) -> Result<i64> {
    let m = m.minimize()?;
    Ok(dim(&ambient_dual(&m, q)?)?.map_or(-1, |d| d as i64))
}

/// `h^i(M) = length H^i_m(M)`.
pub fn h(m: &GradedModule, i: usize) -> Result<Count> {
    let m = m.minimize()?;
    let n = m.base().nvars();
    match dim(&m)? {
        None => return Ok(Count::Finite(0)),
        Some(d) if i > d => return Ok(Count::Finite(0)),
        _ => {}
    }
    let e = ambient_dual(&m, n - i)?;
    length(&e)
}

/// `h^0 .. h^{dim R}`.
pub fn h_vector(m: &GradedModule) -> Result<Vec<Count>> {
    (0..=m.base().dim()).map(|i| h(m, i)).collect()
}

/// `length H^0_m(M)` computed by saturation instead of duality.
pub fn h0_sat(m: &GradedModule) -> Result<u64> {
    let sat = ops::saturate(m, &Ideal::maximal(m.base()))?;
    length(&sat.torsion)?
        .finite()
        .ok_or_else(|| Error::Internal("the m-torsion submodule has infinite length".into()))
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Cohomological degree:
/// `hdeg M = deg M + sum_{j=1}^{d} C(d-1, j-1) hdeg Ext^{n-d+j}_S(M, S)`,
/// and `length M` in dimension 0.
pub fn hdeg(m: &GradedModule) -> Result<u64> {
    let m = m.minimize()?;
    let d = match dim(&m)? {
        None => return Ok(0),
        Some(0) => {
            return length(&m)?
                .finite()
                .ok_or_else(|| Error::Internal("dimension 0 with infinite length".into()))
        }
        Some(d) => d,
    };
    let n = m.base().nvars();
    let mut total = degree(&m)?;
    for j in 1..=d {
        let e = ambient_dual(&m, n - d + j)?;
        if e.is_zero()? {
            continue;
        }
        total += binom(d - 1, j - 1) * hdeg(&e)?;
    }
    Ok(total)
}

fn ring_module(base: &Arc<QuotientRing>) -> GradedModule {
    GradedModule::free(base, vec![0])
}

pub fn is_cohen_macaulay(m: &GradedModule) -> Result<bool> {
    let m = m.minimize()?;
    if m.is_zero()? {
        return Ok(true);
    }
    Ok(Some(depth(&m)?) == dim(&m)?)
}

/// `omega_R = Ext^{n-d}_S(R, S(-sigma))`, as an `R`-module.
pub fn canonical(base: &Arc<QuotientRing>) -> Result<GradedModule> {
    let r = ring_module(base);
    if !is_cohen_macaulay(&r)? {
        return Err(Error::Unsupported(
            "the canonical module is only computed for Cohen-Macaulay rings".into(),
        ));
    }
    let n = base.nvars();
    let e = ambient_dual(&r, n - base.dim())?;
    let sigma = base.ambient().sigma();
    e.twist(-sigma).restrict_to(base)?.minimize()
}

/// Cohen-Macaulay type `mu(omega_R)`.
pub fn cm_type(base: &Arc<QuotientRing>) -> Result<usize> {
    canonical(base)?.mu()
}

pub fn is_gorenstein(base: &Arc<QuotientRing>) -> Result<bool> {
    Ok(cm_type(base)? == 1)
}

/// `I + (c x c minors of the Jacobian of the defining equations)`, read in `R`.
pub fn jacobian_ideal(base: &Arc<QuotientRing>) -> Result<Ideal> {
    let c = base.codim();
    if c == 0 {
        return Ok(Ideal::unit(base));
    }
    let n = base.nvars();
    let rows: Vec<Vec<Polynomial>> = base
        .generators()
        .iter()
        .map(|g| (0..n).map(|v| g.derivative(v)).collect())
        .collect();
    let rows: Vec<Vec<Polynomial>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .collect();
    if rows.len() < c {
        return Ideal::new(base, Vec::new());
    }
    let minors = ops::minors(&rows, c)?;
    Ideal::new(base, minors)
}

pub fn is_free(m: &GradedModule) -> Result<bool> {
    Ok(m.minimize()?.presentation().ncols() == 0)
}

pub fn is_torsion_free(m: &GradedModule) -> Result<bool> {
    Biduality::new(m)?.is_injective()
}

pub fn is_reflexive(m: &GradedModule) -> Result<bool> {
    let b = Biduality::new(m)?;
    Ok(b.is_injective()? && b.is_surjective()?)
}

/// Whether `M_p` is free for every non-maximal homogeneous prime `p`:
/// `Fitt_rank(M)` must be `m`-primary.
pub fn is_locally_free_punctured(m: &GradedModule) -> Result<bool> {
    let rho = rank(m)?;
    ops::fitting(m, rho)?.is_m_primary()
}

/// Whether `M_p` is free for every prime `p` not containing `a`, i.e.
/// `V(Fitt_rank M) ⊆ V(a)`. Complete when `a` is `m`-primary; otherwise each
/// generator `g` of `a` is tested for `g^t ∈ Fitt` with `t <= 20`, and a
/// dimension comparison can refute.
pub fn is_locally_free_off(m: &GradedModule, a: &Ideal) -> Result<Decision> {
    if a.is_m_primary()? {
        return Ok(Decision::from_bool(is_locally_free_punctured(m)?));
    }
    let rho = rank(m)?;
    let fit = ops::fitting(m, rho)?;
    let dim_fit = fit.quotient_dim()?;
    let dim_a = a.quotient_dim()?;
    if let (Some(df), Some(da)) = (dim_fit, dim_a) {
        if df > da {
            return Ok(Decision::No);
        }
    }
    let gb = fit.ambient_basis()?;
    for g in a.generators() {
        let mut p = g.clone();
        let mut found = false;
        for _ in 0..20 {
            if crate::groebner::normal_form_poly(&p, &gb).is_zero() {
                found = true;
                break;
            }
            p = p.mul(g)?;
        }
        if !found {
            return Ok(Decision::Unknown);
        }
    }
    Ok(Decision::Yes)
}

/// Serre's condition `(S_r)` via `dim Ext^i_S(M, S) <= n - i - r` for all
/// `i > n - dim M`.
pub fn serre_sr(m: &GradedModule, r: usize) -> Result<bool> {
    let m = m.minimize()?;
    let n = m.base().nvars();
    let d = match dim(&m)? {
        None => return Ok(true),
        Some(d) => d,
    };
    for i in n - d + 1..=n {
        let e = ext_dim(&m, i)?;
        if e >= 0 && e > n as i64 - i as i64 - r as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every generator of a module over the polynomial ring is killed by every variable.
fn killed_by_maximal(e: &GradedModule) -> Result<bool> {
    let e = e.minimize()?;
    let base = e.base();
    for j in 0..e.num_generators() {
        for v in 0..base.nvars() {
            let x = VTerm {
                coef: 1,
                mono: base.ambient().var_monomial(v),
                pos: j as u32,
            };
            if !e.is_zero_element(&Vector { terms: vec![x] })? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Quasi-Buchsbaum test for generalized Cohen-Macaulay modules: every
/// `H^i_m(M)`, `i < dim M`, is killed by `m`. `None` when some such `H^i`
/// has infinite length.
pub fn is_quasi_buchsbaum(m: &GradedModule) -> Result<Option<bool>> {
    let m = m.minimize()?;
    let n = m.base().nvars();
    let d = match dim(&m)? {
        None => return Ok(Some(true)),
        Some(d) => d,
    };
    let mut all = true;
    for i in 0..d {
        let e = ambient_dual(&m, n - i)?;
        if length(&e)? == Count::Infinite {
            return Ok(None);
        }
        all &= killed_by_maximal(&e)?;
    }
    Ok(Some(all))
}

/// Whether each `H^i_m(M)` for `i < dim M` is annihilated by `m`, listed per `i`.
pub fn local_cohomology_killed_by_maximal(m: &GradedModule) -> Result<Vec<bool>> {
    let m = m.minimize()?;
    let n = m.base().nvars();
    let d = dim(&m)?.unwrap_or(0);
    (0..d)
        .map(|i| killed_by_maximal(&ambient_dual(&m, n - i)?))
        .collect()
}

/// Rank value for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankValue {
    Value(usize),
    NonDomain,
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankValue::Value(v) => s.serialize_u64(*v as u64),
            RankValue::NonDomain => s.serialize_str("undefined: non-domain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub free: bool,
    pub torsion_free: Option<bool>,
    pub reflexive: Option<bool>,
    pub locally_free_punctured: Option<bool>,
    pub serre: Option<(usize, bool)>,
    pub quasi_buchsbaum: Option<bool>,
}

/// Every invariant of one module. Fields that need a domain are `None` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub dim: Option<usize>,
    pub depth: Option<usize>,
    pub pd: usize,
    pub mu: usize,
    pub length: Count,
    pub deg: u64,
    pub rank: RankValue,
    pub h: Vec<Count>,
    pub hdeg: u64,
    pub flags: Flags,
}

impl InvariantReport {
    /// Builds the report; `serre_r` selects which `(S_r)` to test.
    pub fn compute(m: &GradedModule, serre_r: Option<usize>) -> Result<Self> {
        let m = m.minimize()?;
        let domain = m.base().is_domain();
        let zero = m.is_zero()?;
        let dom = |f: &dyn Fn() -> Result<bool>| -> Result<Option<bool>> {
            if domain {
                f().map(Some)
            } else {
                Ok(None)
            }
        };
        let flags = Flags {
            free: is_free(&m)?,
            torsion_free: dom(&|| is_torsion_free(&m))?,
            reflexive: dom(&|| is_reflexive(&m))?,
            locally_free_punctured: dom(&|| is_locally_free_punctured(&m))?,
            serre: serre_r
                .map(|r| serre_sr(&m, r).map(|b| (r, b)))
                .transpose()?,
            quasi_buchsbaum: is_quasi_buchsbaum(&m)?,
        };
        Ok(InvariantReport {
            dim: dim(&m)?,
            depth: if zero { None } else { Some(depth(&m)?) },
            pd: pd_ambient(&m)?,
            mu: m.mu()?,
            length: length(&m)?,
            deg: degree(&m)?,
            rank: if domain {
                RankValue::Value(rank(&m)?)
            } else {
                RankValue::NonDomain
            },
            h: h_vector(&m)?,
            hdeg: hdeg(&m)?,
            flags,
        })
    }
}

/// Inclusion `R(-d) -> F0` of a single element, for building submodules.
pub fn element_map(m: &GradedModule, v: &[Polynomial]) -> Result<GradedMap> {
    let base = m.base();
    let rows: Vec<Vec<Polynomial>> = v.iter().map(|p| vec![p.clone()]).collect();
    let mut deg = None;
    for (j, p) in v.iter().enumerate() {
        if let Some(d) = p.homogeneous_degree() {
            let dd = d as i32 + m.generator_degrees()[j];
            if deg.is_some_and(|e| e != dd) {
                return Err(Error::Structural("element is not homogeneous".into()));
            }
            deg = Some(dd);
        }
    }
    GradedMap::new(
        base,
        vec![deg.unwrap_or(0)],
        m.generator_degrees().to_vec(),
        &rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::ring::AmbientRing;

    fn setup(vars: &[&str]) -> (Arc<QuotientRing>, impl Fn(&str) -> Polynomial) {
        let s = AmbientRing::new(GroundField::default(), vars).unwrap();
        let r = QuotientRing::polynomial(&s).certify_domain();
        (r, move |t: &str| Polynomial::parse(&s, t).unwrap())
    }

    #[test]
    fn basic_numbers() {
        let (r, p) = setup(&["x", "y"]);
        let q = GradedModule::cyclic(&r, &[p("x^2"), p("x*y"), p("y^2")]).unwrap();
        assert_eq!(length(&q).unwrap(), Count::Finite(3));
        let q = GradedModule::cyclic(&r, &[p("x^2"), p("y^3")]).unwrap();
        assert_eq!(length(&q).unwrap(), Count::Finite(6));
        let s = ring_module(&r);
        assert_eq!((degree(&s).unwrap(), dim(&s).unwrap()), (1, Some(2)));
        let m = GradedModule::maximal_ideal(&r).unwrap();
        assert_eq!(rank(&m).unwrap(), 1);
        assert_eq!(rank(&GradedModule::residue_field(&r)).unwrap(), 0);
    }

    #[test]
    fn depth_and_grade() {
        let (r, p) = setup(&["x", "y", "z"]);
        let q = GradedModule::cyclic(&r, &[p("x")]).unwrap();
        assert_eq!(depth(&q).unwrap(), 2);
        let s = ring_module(&r);
        let a = Ideal::new(&r, vec![p("x"), p("y")]).unwrap();
        assert_eq!(grade(&a, &s).unwrap(), Count::Finite(2));
        assert_eq!(grade(&Ideal::maximal(&r), &q).unwrap(), Count::Finite(2));
        assert_eq!(
            grade(&a, &GradedModule::cyclic(&r, &[p("x"), p("y")]).unwrap()).unwrap(),
            Count::Finite(0)
        );
        assert_eq!(grade(&Ideal::unit(&r), &s).unwrap(), Count::Infinite);
    }

    #[test]
    fn local_cohomology() {
        let (r, _) = setup(&["x", "y"]);
        let m = GradedModule::maximal_ideal(&r).unwrap();
        let t = ops::tensor(&m, &m).unwrap();
        assert_eq!(h(&t, 0).unwrap(), Count::Finite(1));
        assert_eq!(h0_sat(&t).unwrap(), 1);
        assert_eq!(h(&m, 1).unwrap(), Count::Finite(1));
        let s = ring_module(&r);
        assert_eq!(
            h_vector(&s).unwrap()[..2],
            [Count::Finite(0), Count::Finite(0)]
        );
    }

    #[test]
    fn hdeg_identities() {
        let (r, p) = setup(&["x", "y"]);
        let q = GradedModule::cyclic(&r, &[p("x")]).unwrap();
        assert_eq!(hdeg(&q).unwrap(), 1);
        let m = GradedModule::maximal_ideal(&r).unwrap();
        let k = GradedModule::residue_field(&r);
        assert_eq!(
            hdeg(&m.direct_sum(&k).unwrap()).unwrap(),
            hdeg(&m).unwrap() + 1
        );
        let mixed = GradedModule::cyclic(&r, &[p("x^2"), p("x*y")]).unwrap();
        let sat = ops::saturate(&mixed, &Ideal::maximal(&r)).unwrap();
        let gamma = length(&sat.torsion).unwrap().finite().unwrap();
        assert_eq!(hdeg(&sat.quotient).unwrap(), hdeg(&mixed).unwrap() - gamma);
    }

    #[test]
    fn canonical_and_jacobian() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y", "u", "v"]).unwrap();
        let p = |t: &str| Polynomial::parse(&s, t).unwrap();
        let r = QuotientRing::new(&s, vec![p("x*y - u*v")]).unwrap();
        assert!(is_gorenstein(&r).unwrap());
        let j = jacobian_ideal(&r).unwrap();
        assert!(j.contains_ideal(&Ideal::maximal(&r)).unwrap());
        let poly = QuotientRing::polynomial(&s);
        let w = canonical(&poly).unwrap();
        assert_eq!(w.generator_degrees(), &[4]);
        assert!(jacobian_ideal(&poly).unwrap().is_unit().unwrap());
    }

    #[test]
    fn predicates() {
        let (r, p) = setup(&["x", "y"]);
        let m = GradedModule::maximal_ideal(&r).unwrap();
        assert!(serre_sr(&m, 1).unwrap());
        assert!(!serre_sr(&m, 2).unwrap());
        assert!(is_torsion_free(&m).unwrap() && !is_reflexive(&m).unwrap());
        let i = GradedModule::ideal(&r, &[p("x^2"), p("y^3")]).unwrap();
        assert!(is_locally_free_punctured(&i).unwrap());
        assert!(!is_free(&i).unwrap());
        assert_eq!(is_quasi_buchsbaum(&m).unwrap(), Some(true));
    }
}
