//! Engine-backed linear algebra on graded maps: kernels, minimal column
//! subsets and Gröbner bases of images.

use crate::error::Result;
use crate::groebner::{compute, normal_form, reduce_basis, BasisIndex, Frame, GbOutput, Options};
use crate::hilbert::{monomial_numerator, HilbertSeries, LaurentPoly};
use crate::matrix::GradedMap;
use crate::quotient::QuotientRing;
use crate::vector::Vector;

/// A Gröbner basis (over the ambient ring) of `im(map) + I * F`.
#[derive(Debug, Clone)]
pub(crate) struct ImageBasis {
    basis: Vec<Vector>,
    index: BasisIndex,
}

impl ImageBasis {
    pub(crate) fn normal_form(&self, base: &QuotientRing, v: &Vector) -> Vector {
        normal_form(base.field(), base.term_order(), &self.basis, &self.index, v)
    }

    pub(crate) fn contains(&self, base: &QuotientRing, v: &Vector) -> bool {
        self.normal_form(base, v).is_zero()
    }

    /// Hilbert series of the cokernel `F / (im + I F)`.
    pub(crate) fn cokernel_series(&self, twists: &[i32], weights: &[u32]) -> HilbertSeries {
        let mut num = LaurentPoly::zero();
        for (p, &tw) in twists.iter().enumerate() {
            let leads: Vec<_> = self.index.leads(p).copied().collect();
            num = num.add(&monomial_numerator(&leads, weights).shift(tw));
        }
        HilbertSeries::new(num, weights.to_vec())
    }
}

impl GradedMap {
    pub(crate) fn run_engine(&self, track: bool) -> Result<GbOutput> {
        let base = self.base();
        let frame = Frame {
            field: base.field(),
            order: base.term_order(),
            weights: base.weights(),
            twists: self.target(),
        };
        let ambient = base.ambient_vectors(self.nrows());
        compute(
            frame,
            self.columns(),
            &ambient,
            Options {
                track,
                ..Options::default()
            },
        )
    }

    /// Minimal generators of the kernel over the base ring, as the columns of
    /// a map into the source of `self`.
    pub fn kernel(&self) -> Result<GradedMap> {
        let base = self.base();
        let out = self.run_engine(true)?;
        let mut cols = Vec::new();
        let mut degs = Vec::new();
        for rel in out.syzygies.iter().chain(&out.redundancies) {
            let v = base.reduce_vector(rel);
            if let Some(d) = v.degree(self.source()) {
                cols.push(v);
                degs.push(d);
            }
        }
        let k = GradedMap::from_columns(base, degs, self.source().to_vec(), cols);
        let keep = k.minimal_columns()?;
        Ok(k.select_columns(&keep).monic_columns())
    }

    /// Indices of a minimal subset of columns generating the image modulo `I`.
    pub fn minimal_columns(&self) -> Result<Vec<usize>> {
        let mut acc = self.run_engine(false)?.accepted;
        acc.sort_unstable();
        Ok(acc)
    }

    pub(crate) fn image_basis(&self) -> Result<ImageBasis> {
        let base = self.base();
        let out = self.run_engine(false)?;
        let basis = reduce_basis(base.field(), base.term_order(), self.nrows(), out.basis);
        let index = BasisIndex::new(self.nrows(), &basis);
        Ok(ImageBasis { basis, index })
    }

    /// Scales every column to a monic leading coefficient.
    pub fn monic_columns(mut self) -> GradedMap {
        let field = *self.base().field();
        for c in self.columns_mut() {
            c.make_monic(&field);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::ring::{AmbientRing, Polynomial};
    use std::sync::Arc;

    #[test]
    fn kernel_examples() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y", "z"]).unwrap();
        let p = |t: &str| Polynomial::parse(&s, t).unwrap();
        let r = QuotientRing::polynomial(&s);
        let xy = GradedMap::new(&r, vec![1, 1], vec![0], &[vec![p("x"), p("y")]]).unwrap();
        let k = xy.kernel().unwrap();
        assert_eq!(k.ncols(), 1);
        assert!(xy.compose(&k).unwrap().is_zero());
        assert_eq!(k.source(), &[2]);

        let xyz =
            GradedMap::new(&r, vec![1, 1, 1], vec![0], &[vec![p("x"), p("y"), p("z")]]).unwrap();
        let k = xyz.kernel().unwrap();
        assert_eq!(k.ncols(), 3);
        assert!(xyz.compose(&k).unwrap().is_zero());

        // ann(x) in k[x,y]/(xy) is (y)
        let s2 = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        let q = QuotientRing::new(&s2, vec![Polynomial::parse(&s2, "x*y").unwrap()]).unwrap();
        let x = GradedMap::new(
            &q,
            vec![1],
            vec![0],
            &[vec![Polynomial::parse(&s2, "x").unwrap()]],
        )
        .unwrap();
        let k = x.kernel().unwrap();
        assert_eq!(k.ncols(), 1);
        assert_eq!(k.entry(0, 0), Polynomial::parse(&s2, "y").unwrap());
        let _ = Arc::clone(&q);
    }

    #[test]
    fn redundant_and_zero_columns_enter_the_kernel() {
        let s = AmbientRing::new(GroundField::default(), &["x", "y"]).unwrap();
        let p = |t: &str| Polynomial::parse(&s, t).unwrap();
        let r = QuotientRing::polynomial(&s);
        let m = GradedMap::new(
            &r,
            vec![1, 1, 1],
            vec![0],
            &[vec![p("x"), p("2*x"), p("0")]],
        )
        .unwrap();
        let k = m.kernel().unwrap();
        assert_eq!(k.ncols(), 2);
        assert!(m.compose(&k).unwrap().is_zero());
    }
}
