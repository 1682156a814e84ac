//! Finitely presented graded modules `coker(F1 -> F0)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::hilbert::HilbertSeries;
use crate::kernel::ImageBasis;
use crate::matrix::GradedMap;
use crate::monomial::Monomial;
use crate::quotient::QuotientRing;
use crate::resolution::{Over, Resolution};
use crate::ring::Polynomial;
use crate::vector::{Bag, VTerm, Vector};

struct Inner {
    pres: GradedMap,
    is_minimal: bool,
    minimal: OnceLock<GradedModule>,
    ambient_res: OnceLock<Resolution>,
    ambient_duals: OnceLock<Vec<GradedModule>>,
    basis: OnceLock<ImageBasis>,
    hilbert: OnceLock<HilbertSeries>,
}

/// A graded module given as the cokernel of its presentation matrix.
///
/// Clones share the underlying presentation and its write-once caches.
#[derive(Clone)]
pub struct GradedModule(Arc<Inner>);

impl GradedModule {
    pub fn coker(pres: GradedMap) -> Self {
        Self::build(pres, false)
    }

    fn build(pres: GradedMap, is_minimal: bool) -> Self {
        GradedModule(Arc::new(Inner {
            pres,
            is_minimal,
            minimal: OnceLock::new(),
            ambient_res: OnceLock::new(),
            ambient_duals: OnceLock::new(),
            basis: OnceLock::new(),
            hilbert: OnceLock::new(),
        }))
    }

    pub fn free(base: &Arc<QuotientRing>, twists: Vec<i32>) -> Self {
        Self::coker(GradedMap::zero(base, Vec::new(), twists))
    }

    pub fn zero(base: &Arc<QuotientRing>) -> Self {
        Self::free(base, Vec::new())
    }

    /// `R / (gens)`.
    pub fn cyclic(base: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Self> {
        let gens: Vec<Polynomial> = gens
            .iter()
            .map(|g| base.normal_form(g))
            .filter(|g| !g.is_zero())
            .collect();
        let src = degrees(&gens)?;
        Ok(Self::coker(GradedMap::new(base, src, vec![0], &[gens])?))
    }

    /// The ideal `(gens)` as a module: the image of the row `(gens)`.
    pub fn ideal(base: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Self> {
        let gens: Vec<Polynomial> = gens
            .iter()
            .map(|g| base.normal_form(g))
            .filter(|g| !g.is_zero())
            .collect();
        let src = degrees(&gens)?;
        let row = GradedMap::new(base, src, vec![0], &[gens])?;
        Self::image(&row)
    }

    /// `im(map)`, generated by the columns of `map`.
    pub fn image(map: &GradedMap) -> Result<Self> {
        let keep = map.minimal_columns()?;
        let m = map.select_columns(&keep);
        Ok(Self::coker(m.kernel()?))
    }

    /// The residue field `R/m`.
    pub fn residue_field(base: &Arc<QuotientRing>) -> Self {
        let vars: Vec<Polynomial> = (0..base.nvars())
            .map(|i| Polynomial::var(base.ambient(), i))
            .collect();
        Self::cyclic(base, &vars).expect("variables are homogeneous")
    }

    /// The homogeneous maximal ideal `m` as a module.
    pub fn maximal_ideal(base: &Arc<QuotientRing>) -> Result<Self> {
        let vars: Vec<Polynomial> = (0..base.nvars())
            .map(|i| Polynomial::var(base.ambient(), i))
            .collect();
        Self::ideal(base, &vars)
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        self.0.pres.base()
    }

    pub fn presentation(&self) -> &GradedMap {
        &self.0.pres
    }

    /// Degrees of the generators of the stored presentation.
    pub fn generator_degrees(&self) -> &[i32] {
        self.0.pres.target()
    }

    pub fn num_generators(&self) -> usize {
        self.0.pres.nrows()
    }

    /// Same module with a presentation free of unit entries and with a
    /// minimal set of monic relations.
    pub fn minimize(&self) -> Result<GradedModule> {
        if self.0.is_minimal {
            return Ok(self.clone());
        }
        if let Some(m) = self.0.minimal.get() {
            return Ok(m.clone());
        }
        let m = GradedModule::build(prune(&self.0.pres)?, true);
        Ok(self.0.minimal.get_or_init(|| m).clone())
    }

    pub fn is_minimal(&self) -> bool {
        self.0.is_minimal
    }

    /// Minimal number of generators.
    pub fn mu(&self) -> Result<usize> {
        Ok(self.minimize()?.num_generators())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.mu()? == 0)
    }

    pub(crate) fn image_basis(&self) -> Result<&ImageBasis> {
        if let Some(b) = self.0.basis.get() {
            return Ok(b);
        }
        let b = self.0.pres.image_basis()?;
        Ok(self.0.basis.get_or_init(|| b))
    }

    pub fn hilbert_series(&self) -> Result<&HilbertSeries> {
        if let Some(h) = self.0.hilbert.get() {
            return Ok(h);
        }
        let h = self
            .image_basis()?
            .cokernel_series(self.generator_degrees(), self.base().weights());
        Ok(self.0.hilbert.get_or_init(|| h))
    }

    /// Whether `v` (in the generators' free module) is zero in the module.
    pub(crate) fn is_zero_element(&self, v: &Vector) -> Result<bool> {
        Ok(self.image_basis()?.contains(self.base(), v))
    }

    /// The full minimal free resolution over the ambient polynomial ring.
    pub fn ambient_resolution(&self) -> Result<&Resolution> {
        if let Some(r) = self.0.ambient_res.get() {
            return Ok(r);
        }
        let r = Resolution::compute(self, Over::Ambient, self.base().nvars() + 1)?;
        Ok(self.0.ambient_res.get_or_init(|| r))
    }

    /// `Ext^q_S(M, S)` over the ambient polynomial ring `S`, for `q = 0..=n`.
    pub fn ambient_duals(&self) -> Result<&[GradedModule]> {
        if let Some(d) = self.0.ambient_duals.get() {
            return Ok(d);
        }
        let d = crate::ops::ambient_duals(self)?;
        Ok(self.0.ambient_duals.get_or_init(|| d))
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        Ok(GradedModule::coker(self.0.pres.direct_sum(&other.0.pres)?))
    }

    /// `M(a)`: the degree-`d` part of the result is the degree-`(a + d)` part of `M`.
    pub fn twist(&self, a: i32) -> GradedModule {
        let p = &self.0.pres;
        let src = p.source().iter().map(|s| s - a).collect();
        let tgt = p.target().iter().map(|t| t - a).collect();
        GradedModule::coker(GradedMap::from_columns(
            p.base(),
            src,
            tgt,
            p.columns().to_vec(),
        ))
    }

    /// The same module regarded over the ambient polynomial ring.
    pub fn over_ambient(&self) -> Result<GradedModule> {
        let base = self.base();
        let s = base.ambient_quotient();
        let p = self.0.pres.change_base(&s)?;
        if base.is_polynomial_ring() {
            return Ok(GradedModule::coker(p));
        }
        let tw = p.target().to_vec();
        let mut cols = Vec::new();
        let mut src = Vec::new();
        for (j, &t) in tw.iter().enumerate() {
            for g in base.generators() {
                cols.push(Vector {
                    terms: g
                        .terms()
                        .iter()
                        .map(|&(c, m)| VTerm {
                            coef: c,
                            mono: m,
                            pos: j as u32,
                        })
                        .collect(),
                });
                src.push(t + g.homogeneous_degree().unwrap_or(0) as i32);
            }
        }
        let extra = GradedMap::from_columns(&s, src, tw, cols);
        Ok(GradedModule::coker(p.concat(&extra)?))
    }

    /// `M ⊗_S R` for a module over the ambient ring and a quotient `R` of it.
    pub fn restrict_to(&self, base: &Arc<QuotientRing>) -> Result<GradedModule> {
        Ok(GradedModule::coker(self.0.pres.change_base(base)?))
    }

    /// Structural equality of presentations (not module isomorphism).
    pub fn same_presentation(&self, other: &GradedModule) -> bool {
        self.0.pres == other.0.pres
    }
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedModule({self})")
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.0.pres;
        write!(f, "coker {p} twists {:?} -> {:?}", p.target(), p.source())
    }
}

fn degrees(gens: &[Polynomial]) -> Result<Vec<i32>> {
    gens.iter()
        .map(|g| {
            g.homogeneous_degree()
                .map(|d| d as i32)
                .ok_or_else(|| Error::Unsupported(format!("{g} is not homogeneous")))
        })
        .collect()
}

/// Eliminates unit entries (lowest row, then lowest column first), then keeps a
/// minimal monic subset of the remaining relations.
fn prune(pres: &GradedMap) -> Result<GradedMap> {
    let base = pres.base();
    let field = base.field();
    let order = base.term_order();
    let mut cur = pres.clone();
    while let Some((j, i)) = cur.unit_entry() {
        let cols = cur.columns();
        let pivot = &cols[i];
        let c = pivot
            .terms
            .iter()
            .find(|t| t.pos as usize == j && t.mono.is_one())
            .unwrap()
            .coef;
        let cinv = field.inv(c);
        let mut src = Vec::with_capacity(cols.len() - 1);
        let mut out = Vec::with_capacity(cols.len() - 1);
        for (l, col) in cols.iter().enumerate() {
            if l == i {
                continue;
            }
            let mut bag = Bag::default();
            bag.add_scaled(field, 1, &Monomial::ONE, col);
            for t in col.terms.iter().filter(|t| t.pos as usize == j) {
                bag.add_scaled(field, field.neg(field.mul(t.coef, cinv)), &t.mono, pivot);
            }
            let v = bag.into_vector(field, order);
            let v = v.remap(field, order, |p| match (p as usize).cmp(&j) {
                std::cmp::Ordering::Less => Some(p),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(p - 1),
            });
            src.push(cur.source()[l]);
            out.push(v);
        }
        let mut tgt = cur.target().to_vec();
        tgt.remove(j);
        cur = GradedMap::from_columns(base, src, tgt, out);
    }
    let keep = cur.minimal_columns()?;
    Ok(cur.select_columns(&keep).monic_columns())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::ring::AmbientRing;

    fn setup(vars: &[&str]) -> (Arc<QuotientRing>, impl Fn(&str) -> Polynomial) {
        let s = AmbientRing::new(GroundField::default(), vars).unwrap();
        let r = QuotientRing::polynomial(&s);
        (r, move |t: &str| Polynomial::parse(&s, t).unwrap())
    }

    #[test]
    fn minimize_examples() {
        let (r, p) = setup(&["x", "y"]);
        let unit =
            GradedModule::coker(GradedMap::new(&r, vec![0], vec![0], &[vec![p("1")]]).unwrap());
        assert!(unit.is_zero().unwrap());

        // coker [[x, 1], [0, y]]: the unit pivot removes the first generator,
        // leaving coker [[x*y]] on a generator of degree -1
        let rows = vec![vec![p("x"), p("1")], vec![p("0"), p("y")]];
        let (src, tgt) = GradedMap::infer_twists(&rows).unwrap();
        let m = GradedModule::coker(GradedMap::new(&r, src, tgt, &rows).unwrap())
            .minimize()
            .unwrap();
        assert_eq!(m.num_generators(), 1);
        assert_eq!(m.generator_degrees(), &[-1]);
        assert_eq!(m.presentation().entry(0, 0), p("x*y"));

        let xy = GradedModule::coker(
            GradedMap::new(&r, vec![1, 1], vec![0], &[vec![p("x"), p("y")]]).unwrap(),
        );
        let min = xy.minimize().unwrap();
        assert!(min.same_presentation(&xy));
    }

    #[test]
    fn hilbert_series_of_modules() {
        let (r, p) = setup(&["x", "y"]);
        let q = GradedModule::cyclic(&r, &[p("x^2"), p("y^3")]).unwrap();
        assert_eq!(q.hilbert_series().unwrap().length(), Some(6));
        let m = GradedModule::maximal_ideal(&r).unwrap();
        assert_eq!(m.mu().unwrap(), 2);
        let hs = m.hilbert_series().unwrap();
        assert_eq!(hs.hilbert_function(0), 0);
        assert_eq!(hs.hilbert_function(1), 2);
        assert_eq!(hs.hilbert_function(3), 4);
        let k = GradedModule::residue_field(&r);
        assert_eq!(k.hilbert_series().unwrap().length(), Some(1));
        assert_eq!(k.twist(-2).hilbert_series().unwrap().hilbert_function(2), 1);
    }
}
