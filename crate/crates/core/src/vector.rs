//! Sparse homogeneous vectors in graded free modules over the ambient ring.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::field::GroundField;
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};

/// How basis positions interact with the monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModuleOrder {
    /// Compare positions first; a larger index is larger.
    #[default]
    PositionOverTerm,
    /// Compare monomials first, positions break ties.
    TermOverPosition,
}

/// A term order on `S^r`. Only homogeneous vectors are ever compared, so the
/// twists of the free module never enter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TermOrder {
    pub monomial: MonomialOrder,
    pub module: ModuleOrder,
}

pub(crate) type SortKey = [u32; MAX_VARS + 2];

impl TermOrder {
    pub fn new(monomial: MonomialOrder, module: ModuleOrder) -> Self {
        TermOrder { monomial, module }
    }

    #[inline]
    pub fn cmp(&self, a: (&Monomial, u32), b: (&Monomial, u32)) -> Ordering {
        match self.module {
            ModuleOrder::PositionOverTerm => {
                a.1.cmp(&b.1).then_with(|| self.monomial.cmp(a.0, b.0))
            }
            ModuleOrder::TermOverPosition => {
                self.monomial.cmp(a.0, b.0).then_with(|| a.1.cmp(&b.1))
            }
        }
    }

    /// An array key whose lexicographic order agrees with [`TermOrder::cmp`].
    pub(crate) fn key(&self, m: &Monomial, pos: u32) -> SortKey {
        let mut k = [0u32; MAX_VARS + 2];
        let (mono_at, pos_at) = match self.module {
            ModuleOrder::PositionOverTerm => (1, 0),
            ModuleOrder::TermOverPosition => (0, MAX_VARS + 1),
        };
        k[pos_at] = pos;
        let e = m.exponents();
        match self.monomial {
            MonomialOrder::Grevlex => {
                k[mono_at] = m.degree();
                for i in 0..MAX_VARS - 1 {
                    k[mono_at + 1 + i] = u32::MAX - e[MAX_VARS - 1 - i] as u32;
                }
                // the first variable is implied by degree and the others
            }
            MonomialOrder::Lex => {
                for i in 0..MAX_VARS {
                    k[mono_at + i] = e[i] as u32;
                }
            }
        }
        k
    }
}

/// One term `coef * mono * e_pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VTerm {
    pub coef: u32,
    pub mono: Monomial,
    pub pos: u32,
}

/// Terms sorted strictly descending in some [`TermOrder`], no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    pub(crate) terms: Vec<VTerm>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    pub fn from_terms(field: &GroundField, order: &TermOrder, mut terms: Vec<VTerm>) -> Self {
        terms.sort_by(|a, b| order.cmp((&b.mono, b.pos), (&a.mono, a.pos)));
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono && last.pos == t.pos => {
                    last.coef = field.add(last.coef, t.coef);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0);
        Vector { terms: out }
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Degree in a free module with the given twists, if nonzero.
    pub fn degree(&self, twists: &[i32]) -> Option<i32> {
        self.lead()
            .map(|t| t.mono.degree() as i32 + twists[t.pos as usize])
    }

    pub fn is_homogeneous(&self, twists: &[i32]) -> bool {
        match self.degree(twists) {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|t| t.mono.degree() as i32 + twists[t.pos as usize] == d),
        }
    }

    pub fn scale(&self, field: &GroundField, c: u32) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    coef: field.mul(t.coef, c),
                    ..*t
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, field: &GroundField, c: u32, m: &Monomial) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| VTerm {
                    coef: field.mul(t.coef, c),
                    mono: t.mono.mul(m),
                    pos: t.pos,
                })
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one; returns the factor used.
    pub fn make_monic(&mut self, field: &GroundField) -> u32 {
        match self.terms.first() {
            Some(t) if t.coef != 1 => {
                let c = field.inv(t.coef);
                for t in &mut self.terms {
                    t.coef = field.mul(t.coef, c);
                }
                c
            }
            _ => 1,
        }
    }

    /// `self + c*m*g` by merging.
    pub fn add_scaled(
        &self,
        field: &GroundField,
        order: &TermOrder,
        c: u32,
        m: &Monomial,
        g: &Vector,
    ) -> Vector {
        if c == 0 || g.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &g.terms;
        while i < a.len() && j < b.len() {
            let bm = b[j].mono.mul(m);
            match order.cmp((&a[i].mono, a[i].pos), (&bm, b[j].pos)) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(VTerm {
                        coef: field.mul(b[j].coef, c),
                        mono: bm,
                        pos: b[j].pos,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field.add(a[i].coef, field.mul(b[j].coef, c));
                    if s != 0 {
                        out.push(VTerm { coef: s, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push(VTerm {
                coef: field.mul(t.coef, c),
                mono: t.mono.mul(m),
                pos: t.pos,
            });
        }
        Vector { terms: out }
    }

    pub fn add(&self, field: &GroundField, order: &TermOrder, g: &Vector) -> Vector {
        self.add_scaled(field, order, 1, &Monomial::ONE, g)
    }

    pub fn sub(&self, field: &GroundField, order: &TermOrder, g: &Vector) -> Vector {
        self.add_scaled(field, order, field.neg(1), &Monomial::ONE, g)
    }

    /// Renumbers positions through `map`; terms mapped to `None` are dropped.
    pub fn remap(
        &self,
        field: &GroundField,
        order: &TermOrder,
        map: impl Fn(u32) -> Option<u32>,
    ) -> Vector {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| map(t.pos).map(|p| VTerm { pos: p, ..*t }))
            .collect();
        Vector::from_terms(field, order, terms)
    }
}

/// Bitmask of the variables occurring in a monomial, for fast divisibility rejection.
#[inline]
pub(crate) fn support_mask(m: &Monomial) -> u32 {
    let mut mask = 0;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            mask |= 1 << i;
        }
    }
    mask
}

/// Heap entry ordered by its key alone; the key determines the term.
struct HeapItem {
    key: SortKey,
    mono: Monomial,
    pos: u32,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Sparse accumulator for reductions: a hash map of coefficients plus a
/// max-heap of keys so the largest live term is found quickly.
pub(crate) struct Accumulator<'a> {
    field: &'a GroundField,
    order: &'a TermOrder,
    coefs: FxHashMap<(Monomial, u32), u32>,
    heap: BinaryHeap<HeapItem>,
}

impl<'a> Accumulator<'a> {
    pub(crate) fn new(field: &'a GroundField, order: &'a TermOrder) -> Self {
        Accumulator {
            field,
            order,
            coefs: FxHashMap::default(),
            heap: BinaryHeap::new(),
        }
    }

    pub(crate) fn add_term(&mut self, coef: u32, mono: Monomial, pos: u32) {
        if coef == 0 {
            return;
        }
        match self.coefs.entry((mono, pos)) {
            Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v = self.field.add(*v, coef);
            }
            Entry::Vacant(e) => {
                e.insert(coef);
                self.heap.push(HeapItem {
                    key: self.order.key(&mono, pos),
                    mono,
                    pos,
                });
            }
        }
    }

    /// Adds `c*m*g`, skipping the first `skip` terms of `g`.
    pub(crate) fn add_scaled(&mut self, c: u32, m: &Monomial, g: &Vector, skip: usize) {
        for t in &g.terms[skip..] {
            self.add_term(self.field.mul(t.coef, c), t.mono.mul(m), t.pos);
        }
    }

    /// Adds `c*m*g` with every term moved to position `pos`.
    pub(crate) fn add_scaled_at(
        &mut self,
        c: u32,
        m: &Monomial,
        g: &Vector,
        skip: usize,
        pos: u32,
    ) {
        for t in &g.terms[skip..] {
            self.add_term(self.field.mul(t.coef, c), t.mono.mul(m), pos);
        }
    }

    /// Removes and returns the largest term with nonzero coefficient.
    pub(crate) fn pop(&mut self) -> Option<VTerm> {
        while let Some(HeapItem { mono, pos, .. }) = self.heap.pop() {
            let c = self.coefs.remove(&(mono, pos)).unwrap_or(0);
            if c != 0 {
                return Some(VTerm { coef: c, mono, pos });
            }
        }
        None
    }

    pub(crate) fn drain_into(mut self, out: &mut Vec<VTerm>) {
        while let Some(t) = self.pop() {
            out.push(t);
        }
    }
}

/// Unordered accumulator used for representation vectors.
#[derive(Default)]
pub(crate) struct Bag {
    coefs: FxHashMap<(Monomial, u32), u32>,
}

impl Bag {
    pub(crate) fn add_scaled(&mut self, field: &GroundField, c: u32, m: &Monomial, g: &Vector) {
        for t in &g.terms {
            let e = self.coefs.entry((t.mono.mul(m), t.pos)).or_insert(0);
            *e = field.add(*e, field.mul(t.coef, c));
        }
    }

    pub(crate) fn into_vector(self, field: &GroundField, order: &TermOrder) -> Vector {
        let terms = self
            .coefs
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((mono, pos), coef)| VTerm { coef, mono, pos })
            .collect();
        Vector::from_terms(field, order, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: [u16; 3]) -> Monomial {
        Monomial::from_exponents(&e, &[1, 1, 1])
    }

    #[test]
    fn keys_agree_with_comparison() {
        let ms = [
            mono([2, 0, 0]),
            mono([1, 1, 0]),
            mono([0, 1, 1]),
            mono([0, 0, 2]),
            mono([1, 0, 1]),
        ];
        for monomial in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            for module in [ModuleOrder::PositionOverTerm, ModuleOrder::TermOverPosition] {
                let ord = TermOrder::new(monomial, module);
                for a in &ms {
                    for b in &ms {
                        for (p, q) in [(0, 0), (0, 1), (1, 0)] {
                            assert_eq!(
                                ord.cmp((a, p), (b, q)),
                                ord.key(a, p).cmp(&ord.key(b, q)),
                                "{monomial:?} {module:?} {a:?} {b:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn merge_cancels() {
        let k = GroundField::default();
        let ord = TermOrder::default();
        let v = Vector::from_terms(
            &k,
            &ord,
            vec![
                VTerm {
                    coef: 1,
                    mono: mono([1, 0, 0]),
                    pos: 0,
                },
                VTerm {
                    coef: 2,
                    mono: mono([0, 1, 0]),
                    pos: 1,
                },
            ],
        );
        assert!(v.sub(&k, &ord, &v).is_zero());
        assert_eq!(v.lead().unwrap().pos, 1);
    }
}
