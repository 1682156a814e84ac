//! Degree-preserving maps between graded free modules.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::quotient::QuotientRing;
use crate::ring::Polynomial;
use crate::vector::{Bag, VTerm, Vector};

/// A matrix of homogeneous entries from `⊕ R(-source[i])` to `⊕ R(-target[j])`.
///
/// Entry `(j, i)` is zero or of degree `source[i] - target[j]`; columns are
/// kept in normal form modulo the defining ideal.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    base: Arc<QuotientRing>,
    source: Vec<i32>,
    target: Vec<i32>,
    cols: Vec<Vector>,
}

impl GradedMap {
    /// Builds a map from a row-major matrix of polynomials (one row per target summand).
    pub fn new(
        base: &Arc<QuotientRing>,
        source: Vec<i32>,
        target: Vec<i32>,
        rows: &[Vec<Polynomial>],
    ) -> Result<Self> {
        if rows.len() != target.len() || rows.iter().any(|r| r.len() != source.len()) {
            return Err(Error::Structural(format!(
                "matrix shape does not match {} target and {} source twists",
                target.len(),
                source.len()
            )));
        }
        let mut cols = Vec::with_capacity(source.len());
        for i in 0..source.len() {
            let mut terms = Vec::new();
            for (j, row) in rows.iter().enumerate() {
                let f = &row[i];
                if **f.ring() != **base.ambient() {
                    return Err(Error::Structural(
                        "matrix entry from a different ring".into(),
                    ));
                }
                if f.is_zero() {
                    continue;
                }
                let want = source[i] - target[j];
                match f.homogeneous_degree() {
                    Some(d) if d as i32 == want => {}
                    Some(d) => {
                        return Err(Error::Structural(format!(
                            "entry ({}, {}) = {f} has degree {d}, expected {want}",
                            j + 1,
                            i + 1
                        )))
                    }
                    None => {
                        return Err(Error::Unsupported(format!(
                            "entry ({}, {}) = {f} is not homogeneous",
                            j + 1,
                            i + 1
                        )))
                    }
                }
                terms.extend(f.terms().iter().map(|&(c, m)| VTerm {
                    coef: c,
                    mono: m,
                    pos: j as u32,
                }));
            }
            let v = Vector::from_terms(base.field(), base.term_order(), terms);
            cols.push(base.reduce_vector(&v));
        }
        Ok(GradedMap {
            base: base.clone(),
            source,
            target,
            cols,
        })
    }

    /// Twists that make a matrix of homogeneous entries degree-compatible:
    /// in each connected block of nonzero entries the first row gets twist 0.
    pub fn infer_twists(rows: &[Vec<Polynomial>]) -> Result<(Vec<i32>, Vec<i32>)> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Structural("ragged matrix".into()));
        }
        let mut tgt: Vec<Option<i32>> = vec![None; nrows];
        let mut src: Vec<Option<i32>> = vec![None; ncols];
        for i in 0..ncols {
            if rows.iter().all(|r| r[i].is_zero()) {
                return Err(Error::Structural(format!(
                    "column {} is zero; give twists explicitly",
                    i + 1
                )));
            }
        }
        let deg = |j: usize, i: usize| -> Result<Option<i32>> {
            let f = &rows[j][i];
            if f.is_zero() {
                return Ok(None);
            }
            f.homogeneous_degree()
                .map(|d| Some(d as i32))
                .ok_or_else(|| {
                    Error::Unsupported(format!(
                        "entry ({}, {}) = {f} is not homogeneous",
                        j + 1,
                        i + 1
                    ))
                })
        };
        for start in 0..nrows {
            if tgt[start].is_some() {
                continue;
            }
            tgt[start] = Some(0);
            let mut stack = vec![(true, start)];
            while let Some((is_row, k)) = stack.pop() {
                if is_row {
                    let t = tgt[k].unwrap();
                    for i in 0..ncols {
                        if let Some(d) = deg(k, i)? {
                            match src[i] {
                                None => {
                                    src[i] = Some(t + d);
                                    stack.push((false, i));
                                }
                                Some(s) if s != t + d => {
                                    return Err(Error::Structural(format!(
                                        "no twists make entry ({}, {}) degree-compatible",
                                        k + 1,
                                        i + 1
                                    )))
                                }
                                _ => {}
                            }
                        }
                    }
                } else {
                    let s = src[k].unwrap();
                    for j in 0..nrows {
                        if let Some(d) = deg(j, k)? {
                            match tgt[j] {
                                None => {
                                    tgt[j] = Some(s - d);
                                    stack.push((true, j));
                                }
                                Some(t) if t != s - d => {
                                    return Err(Error::Structural(format!(
                                        "no twists make entry ({}, {}) degree-compatible",
                                        j + 1,
                                        k + 1
                                    )))
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        Ok((
            src.into_iter().map(|s| s.unwrap()).collect(),
            tgt.into_iter().map(|t| t.unwrap()).collect(),
        ))
    }

    /// Trusted constructor: columns are reduced modulo the ideal here.
    pub(crate) fn from_columns(
        base: &Arc<QuotientRing>,
        source: Vec<i32>,
        target: Vec<i32>,
        cols: Vec<Vector>,
    ) -> Self {
        debug_assert_eq!(source.len(), cols.len());
        let cols = cols.iter().map(|c| base.reduce_vector(c)).collect();
        GradedMap {
            base: base.clone(),
            source,
            target,
            cols,
        }
    }

    pub fn zero(base: &Arc<QuotientRing>, source: Vec<i32>, target: Vec<i32>) -> Self {
        let cols = vec![Vector::zero(); source.len()];
        GradedMap {
            base: base.clone(),
            source,
            target,
            cols,
        }
    }

    pub fn identity(base: &Arc<QuotientRing>, twists: Vec<i32>) -> Self {
        let cols = (0..twists.len())
            .map(|j| Vector {
                terms: vec![VTerm {
                    coef: 1,
                    mono: Monomial::ONE,
                    pos: j as u32,
                }],
            })
            .collect();
        GradedMap {
            base: base.clone(),
            source: twists.clone(),
            target: twists,
            cols,
        }
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    pub fn source(&self) -> &[i32] {
        &self.source
    }

    pub fn target(&self) -> &[i32] {
        &self.target
    }

    pub fn nrows(&self) -> usize {
        self.target.len()
    }

    pub fn ncols(&self) -> usize {
        self.source.len()
    }

    pub(crate) fn columns(&self) -> &[Vector] {
        &self.cols
    }

    pub(crate) fn columns_mut(&mut self) -> &mut [Vector] {
        &mut self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn entry(&self, row: usize, col: usize) -> Polynomial {
        let terms = self.cols[col]
            .terms
            .iter()
            .filter(|t| t.pos as usize == row)
            .map(|t| (t.coef, t.mono))
            .collect();
        Polynomial::from_terms(self.base.ambient(), terms)
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        let ring = self.base.ambient();
        let mut rows: Vec<Vec<Vec<(u32, Monomial)>>> =
            vec![vec![Vec::new(); self.ncols()]; self.nrows()];
        for (i, c) in self.cols.iter().enumerate() {
            for t in &c.terms {
                rows[t.pos as usize][i].push((t.coef, t.mono));
            }
        }
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|terms| Polynomial::from_terms(ring, terms))
                    .collect()
            })
            .collect()
    }

    /// Position `(row, col)` of a nonzero constant entry: lowest row index
    /// first, then lowest column index.
    pub fn unit_entry(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, c) in self.cols.iter().enumerate() {
            for t in &c.terms {
                if t.mono.is_one() {
                    let j = t.pos as usize;
                    if best.is_none_or(|(bj, bi)| j < bj || (j == bj && i < bi)) {
                        best = Some((j, i));
                    }
                }
            }
        }
        best
    }

    /// The dual map `Hom(target, R) -> Hom(source, R)`.
    pub fn transpose(&self) -> GradedMap {
        let mut cols: Vec<Vec<VTerm>> = vec![Vec::new(); self.nrows()];
        for (i, c) in self.cols.iter().enumerate() {
            for t in &c.terms {
                cols[t.pos as usize].push(VTerm {
                    pos: i as u32,
                    ..*t
                });
            }
        }
        let field = self.base.field();
        let order = self.base.term_order();
        GradedMap {
            base: self.base.clone(),
            source: self.target.iter().map(|t| -t).collect(),
            target: self.source.iter().map(|s| -s).collect(),
            cols: cols
                .into_iter()
                .map(|terms| Vector::from_terms(field, order, terms))
                .collect(),
        }
    }

    /// Image of a vector of the source module.
    pub(crate) fn apply(&self, v: &Vector) -> Vector {
        let field = self.base.field();
        let mut bag = Bag::default();
        for t in &v.terms {
            bag.add_scaled(field, t.coef, &t.mono, &self.cols[t.pos as usize]);
        }
        self.base
            .reduce_vector(&bag.into_vector(field, self.base.term_order()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        self.base.same_ring(&other.base)?;
        if other.target != self.source {
            return Err(Error::Structural(
                "composition of maps with mismatched free modules".into(),
            ));
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Ok(GradedMap {
            base: self.base.clone(),
            source: other.source.clone(),
            target: self.target.clone(),
            cols,
        })
    }

    /// Columns of `self` followed by those of `other` (same target).
    pub fn concat(&self, other: &GradedMap) -> Result<GradedMap> {
        self.base.same_ring(&other.base)?;
        if self.target != other.target {
            return Err(Error::Structural(
                "concatenated maps must share their target".into(),
            ));
        }
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(GradedMap {
            base: self.base.clone(),
            source,
            target: self.target.clone(),
            cols,
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GradedMap) -> Result<GradedMap> {
        self.base.same_ring(&other.base)?;
        let shift = self.nrows() as u32;
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let mut target = self.target.clone();
        target.extend_from_slice(&other.target);
        let mut cols = self.cols.clone();
        let field = self.base.field();
        let order = self.base.term_order();
        for c in &other.cols {
            cols.push(c.remap(field, order, |p| Some(p + shift)));
        }
        Ok(GradedMap {
            base: self.base.clone(),
            source,
            target,
            cols,
        })
    }

    /// Kronecker product: basis `e_i ⊗ f_k` is indexed `i * rank(g) + k`.
    pub fn kron(&self, other: &GradedMap) -> Result<GradedMap> {
        self.base.same_ring(&other.base)?;
        let field = self.base.field();
        let order = self.base.term_order();
        let pair = |a: &[i32], b: &[i32]| -> Vec<i32> {
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x + y))
                .collect()
        };
        let q = other.nrows() as u32;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for s in &a.terms {
                    for t in &b.terms {
                        terms.push(VTerm {
                            coef: field.mul(s.coef, t.coef),
                            mono: s.mono.mul(&t.mono),
                            pos: s.pos * q + t.pos,
                        });
                    }
                }
                cols.push(
                    self.base
                        .reduce_vector(&Vector::from_terms(field, order, terms)),
                );
            }
        }
        Ok(GradedMap {
            base: self.base.clone(),
            source: pair(&self.source, &other.source),
            target: pair(&self.target, &other.target),
            cols,
        })
    }

    /// Keeps the listed columns.
    pub fn select_columns(&self, keep: &[usize]) -> GradedMap {
        GradedMap {
            base: self.base.clone(),
            source: keep.iter().map(|&i| self.source[i]).collect(),
            target: self.target.clone(),
            cols: keep.iter().map(|&i| self.cols[i].clone()).collect(),
        }
    }

    /// Same matrix over another ring with the same ambient (entries re-reduced).
    pub fn change_base(&self, base: &Arc<QuotientRing>) -> Result<GradedMap> {
        if **base.ambient() != **self.base.ambient() {
            return Err(Error::Structural(
                "base change needs a common ambient ring".into(),
            ));
        }
        let cols = if base.term_order() == self.base.term_order() {
            self.cols.clone()
        } else {
            let field = base.field();
            self.cols
                .iter()
                .map(|c| Vector::from_terms(field, base.term_order(), c.terms.clone()))
                .collect()
        };
        Ok(GradedMap::from_columns(
            base,
            self.source.clone(),
            self.target.clone(),
            cols,
        ))
    }
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedMap({:?} -> {:?}, {self})",
            self.source, self.target
        )
    }
}

impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (j, row) in self.rows().iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (i, e) in row.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::ring::AmbientRing;

    fn setup() -> (Arc<QuotientRing>, impl Fn(&str) -> Polynomial) {
        let s = AmbientRing::new(GroundField::default(), &["x", "y", "z"]).unwrap();
        let r = QuotientRing::polynomial(&s);
        (r, move |t: &str| Polynomial::parse(&s, t).unwrap())
    }

    #[test]
    fn degree_checks_and_inference() {
        let (r, p) = setup();
        let rows = vec![vec![p("x"), p("y^2")], vec![p("z"), p("0")]];
        let (src, tgt) = GradedMap::infer_twists(&rows).unwrap();
        assert_eq!(tgt, vec![0, 0]);
        assert_eq!(src, vec![1, 2]);
        assert!(GradedMap::new(&r, src, tgt, &rows).is_ok());
        assert!(GradedMap::new(&r, vec![1, 1], vec![0, 0], &rows).is_err());
        let bad = vec![vec![p("x"), p("y")], vec![p("z"), p("y^2")]];
        assert!(GradedMap::infer_twists(&bad).is_err());
        assert!(GradedMap::infer_twists(&[vec![p("x + 1")]]).is_err());
    }

    #[test]
    fn transpose_compose_kron() {
        let (r, p) = setup();
        let a = GradedMap::new(&r, vec![1, 1], vec![0], &[vec![p("x"), p("y")]]).unwrap();
        let koszul =
            GradedMap::new(&r, vec![2], vec![1, 1], &[vec![p("-y")], vec![p("x")]]).unwrap();
        assert!(a.compose(&koszul).unwrap().is_zero());
        let t = a.transpose();
        assert_eq!(t.source(), &[0]);
        assert_eq!(t.target(), &[-1, -1]);
        assert_eq!(t.entry(1, 0), p("y"));
        let k = a.kron(&a).unwrap();
        assert_eq!(k.ncols(), 4);
        assert_eq!(k.entry(0, 3), p("y^2"));
        assert_eq!(k.source(), &[2, 2, 2, 2]);
    }
}
