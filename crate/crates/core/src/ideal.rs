//! Homogeneous ideals of a quotient ring.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::groebner::{buchberger, normal_form_poly};
use crate::module::GradedModule;
use crate::quotient::QuotientRing;
use crate::ring::Polynomial;

/// An ideal of `R`, stored by generators in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct Ideal {
    base: Arc<QuotientRing>,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(base: &Arc<QuotientRing>, gens: Vec<Polynomial>) -> Result<Self> {
        let mut out: Vec<Polynomial> = Vec::new();
        for g in gens {
            if **g.ring() != **base.ambient() {
                return Err(crate::Error::Structural(
                    "ideal generator from a different ring".into(),
                ));
            }
            if !g.is_homogeneous() {
                return Err(crate::Error::Unsupported(format!("{g} is not homogeneous")));
            }
            let g = base.normal_form(&g);
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Ideal {
            base: base.clone(),
            gens: out,
        })
    }

    pub fn maximal(base: &Arc<QuotientRing>) -> Self {
        let gens = (0..base.nvars())
            .map(|i| Polynomial::var(base.ambient(), i))
            .collect();
        Ideal::new(base, gens).expect("variables are homogeneous")
    }

    pub fn unit(base: &Arc<QuotientRing>) -> Self {
        Ideal {
            base: base.clone(),
            gens: vec![Polynomial::constant(base.ambient(), 1)],
        }
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Gröbner basis over the ambient ring of the preimage `J + I`.
    pub fn ambient_basis(&self) -> Result<Vec<Polynomial>> {
        let mut all = self.gens.clone();
        all.extend(self.base.generators().iter().cloned());
        if all.is_empty() {
            return Ok(Vec::new());
        }
        buchberger(&all)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self
            .ambient_basis()?
            .iter()
            .any(|g| g.leading_monomial().is_some_and(|m| m.is_one())))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(normal_form_poly(f, &self.ambient_basis()?).is_zero())
    }

    /// `R/J`.
    pub fn quotient_module(&self) -> Result<GradedModule> {
        GradedModule::cyclic(&self.base, &self.gens)
    }

    /// `dim R/J`, `None` for the unit ideal.
    pub fn quotient_dim(&self) -> Result<Option<usize>> {
        Ok(self.quotient_module()?.hilbert_series()?.dim())
    }

    /// Height in `R`, computed as `dim R - dim R/J` (the corpus rings are
    /// equidimensional and catenary).
    pub fn height(&self) -> Result<Option<usize>> {
        Ok(self.quotient_dim()?.map(|d| self.base.dim() - d))
    }

    /// Whether the ideal is primary to the homogeneous maximal ideal (or the unit ideal).
    pub fn is_m_primary(&self) -> Result<bool> {
        Ok(self.quotient_dim()?.is_none_or(|d| d == 0))
    }

    pub fn as_module(&self) -> Result<GradedModule> {
        GradedModule::ideal(&self.base, &self.gens)
    }

    pub fn pow(&self, e: u32) -> Result<Ideal> {
        let mut cur = vec![Polynomial::constant(self.base.ambient(), 1)];
        for _ in 0..e {
            let mut next = Vec::new();
            for a in &cur {
                for g in &self.gens {
                    next.push(a.mul(g)?);
                }
            }
            cur = next;
        }
        Ideal::new(&self.base, cur)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.base.same_ring(&other.base)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.base, g)
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        let gb = self.ambient_basis()?;
        Ok(other
            .gens
            .iter()
            .all(|g| normal_form_poly(g, &gb).is_zero()))
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}
