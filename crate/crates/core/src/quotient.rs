//! Quotients `R = S/I` of the ambient ring by homogeneous ideals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::GroundField;
use crate::groebner::{buchberger, normal_form_poly};
use crate::hilbert::{monomial_numerator, HilbertSeries};
use crate::monomial::Monomial;
use crate::ring::{AmbientRing, Polynomial};
use crate::vector::{Accumulator, ModuleOrder, TermOrder, VTerm, Vector};

/// A graded quotient ring with its cached Gröbner basis and Krull dimension.
#[derive(Clone)]
pub struct QuotientRing {
    ambient: Arc<AmbientRing>,
    gens: Vec<Polynomial>,
    gb: Vec<Polynomial>,
    gb_vectors: Vec<Vector>,
    hilbert: HilbertSeries,
    dim: usize,
    domain: bool,
    order: TermOrder,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        *self.ambient == *other.ambient && self.gb == other.gb && self.order == other.order
    }
}
impl Eq for QuotientRing {}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientRing({self})")
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[{}]", self.ambient.names().join(","))?;
        if !self.gens.is_empty() {
            let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

impl QuotientRing {
    /// The polynomial ring itself, `I = 0`.
    pub fn polynomial(ambient: &Arc<AmbientRing>) -> Arc<Self> {
        Arc::new(Self::build(
            ambient,
            Vec::new(),
            Vec::new(),
            ModuleOrder::default(),
        ))
    }

    pub fn new(ambient: &Arc<AmbientRing>, gens: Vec<Polynomial>) -> Result<Arc<Self>> {
        Self::with_module_order(ambient, gens, ModuleOrder::default())
    }

    pub fn with_module_order(
        ambient: &Arc<AmbientRing>,
        gens: Vec<Polynomial>,
        module: ModuleOrder,
    ) -> Result<Arc<Self>> {
        for g in &gens {
            if **g.ring() != **ambient {
                return Err(Error::Structural(
                    "ideal generator from a different ring".into(),
                ));
            }
            if !g.is_homogeneous() {
                return Err(Error::Unsupported(format!(
                    "inhomogeneous ideal generator {g}"
                )));
            }
        }
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let gb = if gens.is_empty() {
            Vec::new()
        } else {
            buchberger(&gens)?
        };
        if gb
            .iter()
            .any(|g| g.leading_monomial().is_some_and(|m| m.is_one()))
        {
            return Err(Error::Structural(
                "the defining ideal is the unit ideal".into(),
            ));
        }
        Ok(Arc::new(Self::build(ambient, gens, gb, module)))
    }

    fn build(
        ambient: &Arc<AmbientRing>,
        gens: Vec<Polynomial>,
        gb: Vec<Polynomial>,
        module: ModuleOrder,
    ) -> Self {
        let leads: Vec<Monomial> = gb.iter().filter_map(|g| g.leading_monomial()).collect();
        let hilbert = HilbertSeries::new(
            monomial_numerator(&leads, ambient.weights()),
            ambient.weights().to_vec(),
        );
        let dim = hilbert.dim().unwrap_or(0);
        let gb_vectors = gb
            .iter()
            .map(|g| Vector {
                terms: g
                    .terms()
                    .iter()
                    .map(|&(c, m)| VTerm {
                        coef: c,
                        mono: m,
                        pos: 0,
                    })
                    .collect(),
            })
            .collect();
        QuotientRing {
            ambient: ambient.clone(),
            domain: gens.is_empty(),
            gens,
            gb,
            gb_vectors,
            hilbert,
            dim,
            order: TermOrder::new(ambient.order(), module),
        }
    }

    /// Returns a copy whose defining ideal is declared prime. Primality is not
    /// decided by the engine; callers vouch for it.
    pub fn certify_domain(self: &Arc<Self>) -> Arc<Self> {
        let mut r = (**self).clone();
        r.domain = true;
        Arc::new(r)
    }

    /// The ambient polynomial ring as a quotient ring with the same module order.
    pub fn ambient_quotient(&self) -> Arc<Self> {
        Arc::new(Self::build(
            &self.ambient,
            Vec::new(),
            Vec::new(),
            self.order.module,
        ))
    }

    pub fn ambient(&self) -> &Arc<AmbientRing> {
        &self.ambient
    }

    pub fn field(&self) -> &GroundField {
        self.ambient.field()
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn weights(&self) -> &[u32] {
        self.ambient.weights()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.gb
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.gb.is_empty()
    }

    pub fn is_domain(&self) -> bool {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Codimension of the defining ideal in the ambient ring.
    pub fn codim(&self) -> usize {
        self.nvars() - self.dim
    }

    pub fn hilbert_series(&self) -> &HilbertSeries {
        &self.hilbert
    }

    pub fn term_order(&self) -> &TermOrder {
        &self.order
    }

    pub fn module_order(&self) -> ModuleOrder {
        self.order.module
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form_poly(f, &self.gb)
    }

    /// Normal form of a vector modulo `I` times the free module.
    pub(crate) fn reduce_vector(&self, v: &Vector) -> Vector {
        if self.gb.is_empty() || v.is_zero() {
            return v.clone();
        }
        let field = self.field();
        let mut acc = Accumulator::new(field, &self.order);
        acc.add_scaled(1, &Monomial::ONE, v, 0);
        let mut out = Vec::new();
        while let Some(t) = acc.pop() {
            let hit = self
                .gb_vectors
                .iter()
                .find(|g| g.terms[0].mono.divides(&t.mono));
            match hit {
                Some(g) => {
                    let q = g.terms[0].mono.quotient_of(&t.mono);
                    acc.add_scaled_at(field.neg(t.coef), &q, g, 1, t.pos);
                }
                None => out.push(t),
            }
        }
        Vector { terms: out }
    }

    /// `I * e_j` for every basis element of a free module of the given rank.
    pub(crate) fn ambient_vectors(&self, rank: usize) -> Vec<Vector> {
        let mut out = Vec::with_capacity(rank * self.gb.len());
        for j in 0..rank as u32 {
            for g in &self.gb_vectors {
                out.push(Vector {
                    terms: g.terms.iter().map(|t| VTerm { pos: j, ..*t }).collect(),
                });
            }
        }
        out
    }

    pub fn same_ring(&self, other: &QuotientRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Structural(
                "objects live over different rings".into(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y", "u", "v"]).unwrap();
        let f = Polynomial::parse(&s, "x*y - u*v").unwrap();
        let r = QuotientRing::new(&s, vec![f]).unwrap();
        assert_eq!(r.dim(), 3);
        assert_eq!(r.codim(), 1);
        assert_eq!(r.hilbert_series().degree().unwrap(), 2);
        assert!(!r.is_domain());
        assert!(r.certify_domain().is_domain());
        assert_eq!(QuotientRing::polynomial(&s).dim(), 4);
    }

    #[test]
    fn rejects_bad_ideals() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        assert!(QuotientRing::new(&s, vec![Polynomial::parse(&s, "x + 1").unwrap()]).is_err());
        assert!(QuotientRing::new(&s, vec![Polynomial::parse(&s, "1").unwrap()]).is_err());
    }
}
