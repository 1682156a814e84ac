//! Degree-by-degree Buchberger engine for homogeneous submodules of graded
//! free modules, with optional tracking of syzygies among the inputs.
//!
//! Relations of a quotient ring enter as "ambient" vectors: they take part in
//! the Gröbner basis but carry no coordinates, so tracked syzygies are
//! relations modulo the quotient's ideal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::GroundField;
use crate::monomial::Monomial;
use crate::ring::{AmbientRing, Polynomial};
use crate::vector::{support_mask, Accumulator, Bag, TermOrder, VTerm, Vector};

/// Everything the engine needs to know about the ambient free module.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame<'a> {
    pub field: &'a GroundField,
    pub order: &'a TermOrder,
    pub weights: &'a [u32],
    pub twists: &'a [i32],
}

#[derive(Debug, Clone)]
struct Elem {
    vec: Vector,
    rep: Vector,
    lead: Monomial,
    pos: u32,
    mask: u32,
    single_pos: bool,
}

#[derive(Debug, Clone)]
struct Pair {
    deg: i32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Result of one engine run.
#[derive(Debug, Clone, Default)]
pub(crate) struct GbOutput {
    /// A Gröbner basis of the submodule spanned by inputs and ambient vectors.
    pub basis: Vec<Vector>,
    /// Indices of the inputs that form a minimal generating set modulo the ambient part.
    pub accepted: Vec<usize>,
    /// Generators of the relations among the accepted inputs, in coordinates
    /// indexed by input position (tracked runs only).
    pub syzygies: Vec<Vector>,
    /// For each rejected input `k`, a relation `e_k - sum a_i e_i` expressing it
    /// through accepted inputs (tracked runs only). Together with `syzygies`
    /// these generate all relations among the inputs.
    pub redundancies: Vec<Vector>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Options {
    pub track: bool,
    pub full_reduce: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            track: false,
            full_reduce: true,
        }
    }
}

struct Engine<'a> {
    frame: Frame<'a>,
    opts: Options,
    elems: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
    syzygies: Vec<Vector>,
}

impl<'a> Engine<'a> {
    fn degree_of(&self, m: &Monomial, pos: u32) -> i32 {
        m.degree() as i32 + self.frame.twists[pos as usize]
    }

    fn find_divisor(&self, t: &VTerm) -> Option<usize> {
        let mask = support_mask(&t.mono);
        self.by_pos[t.pos as usize].iter().copied().find(|&k| {
            let e = &self.elems[k];
            e.mask & !mask == 0 && e.lead.divides(&t.mono)
        })
    }

    fn reduce(&self, mut acc: Accumulator<'_>, mut rep: Option<&mut Bag>) -> Vector {
        let field = self.frame.field;
        let mut out = Vec::new();
        while let Some(t) = acc.pop() {
            match self.find_divisor(&t) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = g.lead.quotient_of(&t.mono);
                    let c = field.neg(t.coef);
                    acc.add_scaled(c, &q, &g.vec, 1);
                    if let Some(bag) = rep.as_deref_mut() {
                        bag.add_scaled(field, c, &q, &g.rep);
                    }
                }
                None => {
                    out.push(t);
                    if !self.opts.full_reduce {
                        acc.drain_into(&mut out);
                        break;
                    }
                }
            }
        }
        Vector { terms: out }
    }

    fn insert(&mut self, mut vec: Vector, rep: Vector) {
        let field = self.frame.field;
        let c = vec.make_monic(field);
        let rep = rep.scale(field, c);
        let lt = *vec.lead().expect("nonzero");
        let single_pos = vec.terms.iter().all(|t| t.pos == lt.pos);
        let t = self.elems.len();
        let elem = Elem {
            lead: lt.mono,
            pos: lt.pos,
            mask: support_mask(&lt.mono),
            vec,
            rep,
            single_pos,
        };
        self.update_pairs(t, &elem);
        self.by_pos[elem.pos as usize].push(t);
        self.elems.push(elem);
    }

    /// Gebauer–Möller update of the pair set for a new basis element.
    fn update_pairs(&mut self, t: usize, new: &Elem) {
        let weights = self.frame.weights;
        let lcm_of = |a: &Monomial| a.lcm(&new.lead, weights);

        // B criterion on existing pairs.
        let elems = &self.elems;
        self.pairs.retain(|p| {
            let (ei, ej) = (&elems[p.i], &elems[p.j]);
            if ei.pos != new.pos || !new.lead.divides(&p.lcm) {
                return true;
            }
            lcm_of(&ei.lead) == p.lcm || lcm_of(&ej.lead) == p.lcm
        });

        let mut cands: Vec<(Monomial, usize, bool)> = self.by_pos[new.pos as usize]
            .iter()
            .map(|&i| {
                let e = &self.elems[i];
                let coprime = !self.opts.track
                    && e.single_pos
                    && new.single_pos
                    && e.lead.is_coprime(&new.lead);
                (lcm_of(&e.lead), i, coprime)
            })
            .collect();

        // M criterion: drop pairs whose lcm is properly divisible by another's.
        let snapshot: Vec<Monomial> = cands.iter().map(|c| c.0).collect();
        cands.retain(|c| !snapshot.iter().any(|l| *l != c.0 && l.divides(&c.0)));

        // F criterion plus the product criterion on each equal-lcm class.
        cands.sort_by(|a, b| {
            self.frame
                .order
                .cmp((&a.0, 0), (&b.0, 0))
                .then(a.1.cmp(&b.1))
        });
        let mut k = 0;
        while k < cands.len() {
            let mut end = k + 1;
            while end < cands.len() && cands[end].0 == cands[k].0 {
                end += 1;
            }
            let any_coprime = cands[k..end].iter().any(|c| c.2);
            if !any_coprime {
                let (lcm, i, _) = cands[k];
                let deg = self.degree_of(&lcm, new.pos);
                self.pairs.push(Pair { deg, lcm, i, j: t });
            }
            k = end;
        }
    }

    fn process_pair(&mut self, p: &Pair) {
        let field = self.frame.field;
        let (gi, gj) = (&self.elems[p.i], &self.elems[p.j]);
        let ui = gi.lead.quotient_of(&p.lcm);
        let uj = gj.lead.quotient_of(&p.lcm);
        let mut acc = Accumulator::new(field, self.frame.order);
        acc.add_scaled(1, &ui, &gi.vec, 1);
        acc.add_scaled(field.neg(1), &uj, &gj.vec, 1);
        let mut bag = self.opts.track.then(|| {
            let mut b = Bag::default();
            b.add_scaled(field, 1, &ui, &gi.rep);
            b.add_scaled(field, field.neg(1), &uj, &gj.rep);
            b
        });
        let r = self.reduce(acc, bag.as_mut());
        let rep = bag
            .map(|b| b.into_vector(field, self.frame.order))
            .unwrap_or_default();
        if r.is_zero() {
            if self.opts.track && !rep.is_zero() {
                self.syzygies.push(rep);
            }
        } else {
            self.insert(r, rep);
        }
    }
}

/// Runs the engine. Inputs must be homogeneous in the frame's twists.
pub(crate) fn compute(
    frame: Frame<'_>,
    inputs: &[Vector],
    ambient: &[Vector],
    opts: Options,
) -> Result<GbOutput> {
    for v in inputs.iter().chain(ambient) {
        if !v.is_homogeneous(frame.twists) {
            return Err(Error::Unsupported(
                "the engine only handles homogeneous data".into(),
            ));
        }
    }
    let mut inp: Vec<(i32, usize)> = inputs
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.degree(frame.twists).map(|d| (d, k)))
        .collect();
    inp.sort();
    let mut amb: Vec<(i32, usize)> = ambient
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.degree(frame.twists).map(|d| (d, k)))
        .collect();
    amb.sort();

    let mut eng = Engine {
        frame,
        opts,
        elems: Vec::new(),
        by_pos: vec![Vec::new(); frame.twists.len()],
        pairs: Vec::new(),
        syzygies: Vec::new(),
    };
    let mut accepted = Vec::new();
    let mut redundancies = Vec::new();
    if opts.track {
        for (k, v) in inputs.iter().enumerate() {
            if v.is_zero() {
                redundancies.push(Vector {
                    terms: vec![VTerm {
                        coef: 1,
                        mono: Monomial::ONE,
                        pos: k as u32,
                    }],
                });
            }
        }
    }
    let (mut ii, mut ai) = (0, 0);
    let field = frame.field;
    let order = frame.order;
    loop {
        let d = [
            eng.pairs.iter().map(|p| p.deg).min(),
            amb.get(ai).map(|x| x.0),
            inp.get(ii).map(|x| x.0),
        ]
        .into_iter()
        .flatten()
        .min();
        let Some(d) = d else { break };

        let (mut now, rest): (Vec<Pair>, Vec<Pair>) = eng.pairs.drain(..).partition(|p| p.deg == d);
        eng.pairs = rest;
        now.sort_by(|a, b| {
            order
                .cmp((&a.lcm, 0), (&b.lcm, 0))
                .then(a.i.cmp(&b.i))
                .then(a.j.cmp(&b.j))
        });
        for p in &now {
            eng.process_pair(p);
        }

        while ai < amb.len() && amb[ai].0 == d {
            let v = &ambient[amb[ai].1];
            let mut acc = Accumulator::new(field, order);
            acc.add_scaled(1, &Monomial::ONE, v, 0);
            // ambient vectors are zero in the quotient, so reducing one to zero
            // through tracked elements exposes a relation modulo the ideal
            let mut bag = eng.opts.track.then(Bag::default);
            let r = eng.reduce(acc, bag.as_mut());
            let rep = bag.map(|b| b.into_vector(field, order)).unwrap_or_default();
            if !r.is_zero() {
                eng.insert(r, rep);
            } else if !rep.is_zero() {
                eng.syzygies.push(rep);
            }
            ai += 1;
        }

        while ii < inp.len() && inp[ii].0 == d {
            let k = inp[ii].1;
            let slot = k as u32;
            let mut acc = Accumulator::new(field, order);
            acc.add_scaled(1, &Monomial::ONE, &inputs[k], 0);
            let mut bag = eng.opts.track.then(|| {
                let mut b = Bag::default();
                b.add_scaled(
                    field,
                    1,
                    &Monomial::ONE,
                    &Vector {
                        terms: vec![VTerm {
                            coef: 1,
                            mono: Monomial::ONE,
                            pos: slot,
                        }],
                    },
                );
                b
            });
            let r = eng.reduce(acc, bag.as_mut());
            let rep = bag.map(|b| b.into_vector(field, order)).unwrap_or_default();
            if !r.is_zero() {
                accepted.push(k);
                eng.insert(r, rep);
            } else if eng.opts.track {
                redundancies.push(rep);
            }
            ii += 1;
        }
    }

    Ok(GbOutput {
        basis: eng.elems.into_iter().map(|e| e.vec).collect(),
        accepted,
        syzygies: eng.syzygies,
        redundancies,
    })
}

/// Normal form of `v` with respect to `basis`, which must be a Gröbner basis
/// with monic leading terms for the result to be canonical.
pub(crate) fn normal_form(
    field: &GroundField,
    order: &TermOrder,
    basis: &[Vector],
    index: &BasisIndex,
    v: &Vector,
) -> Vector {
    let mut acc = Accumulator::new(field, order);
    acc.add_scaled(1, &Monomial::ONE, v, 0);
    let mut out = Vec::new();
    while let Some(t) = acc.pop() {
        match index.find(&t) {
            Some(k) => {
                let g = &basis[k];
                let lt = g.lead().unwrap();
                let q = lt.mono.quotient_of(&t.mono);
                let c = field.neg(field.mul(t.coef, field.inv(lt.coef)));
                acc.add_scaled(c, &q, g, 1);
            }
            None => out.push(t),
        }
    }
    Vector { terms: out }
}

/// Leading-term lookup table for a fixed basis.
#[derive(Debug, Clone, Default)]
pub(crate) struct BasisIndex {
    by_pos: Vec<Vec<(Monomial, u32, usize)>>,
}

impl BasisIndex {
    pub(crate) fn new(rank: usize, basis: &[Vector]) -> Self {
        let mut by_pos = vec![Vec::new(); rank];
        for (k, g) in basis.iter().enumerate() {
            if let Some(t) = g.lead() {
                by_pos[t.pos as usize].push((t.mono, support_mask(&t.mono), k));
            }
        }
        BasisIndex { by_pos }
    }

    pub(crate) fn find(&self, t: &VTerm) -> Option<usize> {
        let mask = support_mask(&t.mono);
        self.by_pos[t.pos as usize]
            .iter()
            .find(|(m, mm, _)| mm & !mask == 0 && m.divides(&t.mono))
            .map(|e| e.2)
    }

    /// Leading monomials in position `p`.
    pub(crate) fn leads(&self, p: usize) -> impl Iterator<Item = &Monomial> {
        self.by_pos[p].iter().map(|e| &e.0)
    }
}

/// Keeps only elements whose leads are minimal and fully reduces each, making it monic.
pub(crate) fn reduce_basis(
    field: &GroundField,
    order: &TermOrder,
    rank: usize,
    basis: Vec<Vector>,
) -> Vec<Vector> {
    let mut basis: Vec<Vector> = basis.into_iter().filter(|v| !v.is_zero()).collect();
    basis.sort_by(|a, b| {
        let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
        order.cmp((&x.mono, x.pos), (&y.mono, y.pos))
    });
    let mut kept: Vec<Vector> = Vec::new();
    for g in basis {
        let lt = *g.lead().unwrap();
        let dup = kept.iter().any(|h| {
            let l = h.lead().unwrap();
            l.pos == lt.pos && l.mono.divides(&lt.mono)
        });
        if !dup {
            kept.push(g);
        }
    }
    let index = BasisIndex::new(rank, &kept);
    let mut out = Vec::with_capacity(kept.len());
    for g in &kept {
        let lt = *g.lead().unwrap();
        let tail = Vector {
            terms: g.terms[1..].to_vec(),
        };
        // the lead of g is divisible only by g itself, so reducing the tail
        // against the whole basis is safe
        let r = normal_form(field, order, &kept, &index, &tail);
        let mut terms = vec![lt];
        terms.extend(r.terms);
        let mut v = Vector { terms };
        v.make_monic(field);
        out.push(v);
    }
    out
}

fn poly_to_vector(f: &Polynomial) -> Vector {
    Vector {
        terms: f
            .terms()
            .iter()
            .map(|&(c, m)| VTerm {
                coef: c,
                mono: m,
                pos: 0,
            })
            .collect(),
    }
}

fn vector_to_poly(ring: &Arc<AmbientRing>, v: &Vector) -> Polynomial {
    Polynomial::from_sorted(ring, v.terms.iter().map(|t| (t.coef, t.mono)).collect())
}

fn common_ring<'a>(
    polys: impl IntoIterator<Item = &'a Polynomial>,
) -> Result<Option<Arc<AmbientRing>>> {
    let mut ring: Option<Arc<AmbientRing>> = None;
    for f in polys {
        match &ring {
            None => ring = Some(f.ring().clone()),
            Some(r) if **r == **f.ring() => {}
            Some(_) => {
                return Err(Error::Structural(
                    "polynomials belong to different rings".into(),
                ))
            }
        }
    }
    Ok(ring)
}

/// Multivariate division: the remainder of `f` by `divisors`, tried in the given order.
pub fn reduce(f: &Polynomial, divisors: &[Polynomial]) -> Result<Polynomial> {
    common_ring(std::iter::once(f).chain(divisors))?;
    let ring = f.ring();
    let field = ring.field();
    let mut p = f.clone();
    let mut rem: Vec<(u32, Monomial)> = Vec::new();
    while let Some(&(c, m)) = p.terms().first() {
        let hit = divisors
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|l| l.divides(&m)));
        match hit {
            Some(g) => {
                let (lc, lm) = g.terms()[0];
                let q = lm.quotient_of(&m);
                let s = field.neg(field.mul(c, field.inv(lc)));
                p = p.combine(s, q, g);
            }
            None => {
                rem.push((c, m));
                p = Polynomial::from_sorted(ring, p.terms()[1..].to_vec());
            }
        }
    }
    Ok(Polynomial::from_sorted(ring, rem))
}

/// The reduced monic Gröbner basis of the ideal spanned by `gens`, sorted by
/// increasing degree and decreasing leading term within a degree.
pub fn buchberger(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(ring) = common_ring(gens)? else {
        return Err(Error::Structural(
            "buchberger needs at least one generator".into(),
        ));
    };
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::Unsupported(
            "the engine only handles homogeneous generators".into(),
        ));
    }
    let order = TermOrder::new(ring.order(), Default::default());
    let frame = Frame {
        field: ring.field(),
        order: &order,
        weights: ring.weights(),
        twists: &[0],
    };
    let inputs: Vec<Vector> = gens.iter().map(poly_to_vector).collect();
    let out = compute(frame, &inputs, &[], Options::default())?;
    let reduced = reduce_basis(ring.field(), &order, 1, out.basis);
    let mut polys: Vec<Polynomial> = reduced.iter().map(|v| vector_to_poly(&ring, v)).collect();
    polys.sort_by(|a, b| {
        let (x, y) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        x.degree()
            .cmp(&y.degree())
            .then_with(|| ring.order().cmp(&y, &x))
    });
    Ok(polys)
}

/// Normal form of `f` modulo an ideal given by its Gröbner basis.
pub fn normal_form_poly(f: &Polynomial, gb: &[Polynomial]) -> Polynomial {
    if gb.is_empty() || f.is_zero() {
        return f.clone();
    }
    let ring = f.ring();
    let order = TermOrder::new(ring.order(), Default::default());
    let basis: Vec<Vector> = gb.iter().map(poly_to_vector).collect();
    let index = BasisIndex::new(1, &basis);
    vector_to_poly(
        ring,
        &normal_form(ring.field(), &order, &basis, &index, &poly_to_vector(f)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;

    fn ring() -> Arc<AmbientRing> {
        AmbientRing::new(GroundField::default(), &["x", "y", "z"]).unwrap()
    }

    fn p(r: &Arc<AmbientRing>, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn division_examples() {
        let r = ring();
        assert!(reduce(&p(&r, "x^2*y"), &[p(&r, "x^2")]).unwrap().is_zero());
        assert_eq!(
            reduce(&p(&r, "x^2*y + y^3"), &[p(&r, "x^2")]).unwrap(),
            p(&r, "y^3")
        );
        // xy^2 - y(xy + y^2) = -y^3, which no leading term divides
        assert_eq!(
            reduce(&p(&r, "x*y^2"), &[p(&r, "x^2"), p(&r, "x*y + y^2")]).unwrap(),
            p(&r, "-y^3")
        );
    }

    #[test]
    fn buchberger_examples() {
        let r = ring();
        assert_eq!(
            buchberger(&[p(&r, "x"), p(&r, "y")]).unwrap(),
            vec![p(&r, "x"), p(&r, "y")]
        );
        let gb = buchberger(&[p(&r, "x^2"), p(&r, "x*y + y^2")]).unwrap();
        assert_eq!(gb, vec![p(&r, "x^2"), p(&r, "x*y + y^2"), p(&r, "y^3")]);
        assert_eq!(buchberger(&gb).unwrap(), gb);
        assert_eq!(
            buchberger(&[p(&r, "x*y - z^2")]).unwrap(),
            vec![p(&r, "x*y - z^2")]
        );
        assert!(matches!(
            buchberger(&[p(&r, "x + 1")]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn tracked_syzygies_of_koszul_inputs() {
        let r = ring();
        let order = TermOrder::default();
        let frame = Frame {
            field: r.field(),
            order: &order,
            weights: r.weights(),
            twists: &[0],
        };
        let inputs: Vec<Vector> = ["x", "y", "z", "x + y"]
            .iter()
            .map(|s| poly_to_vector(&p(&r, s)))
            .collect();
        let out = compute(
            frame,
            &inputs,
            &[],
            Options {
                track: true,
                full_reduce: true,
            },
        )
        .unwrap();
        assert_eq!(out.accepted, vec![0, 1, 2]);
        assert_eq!(out.syzygies.len(), 3);
        assert_eq!(out.redundancies.len(), 1);
        for s in out.syzygies.iter().chain(&out.redundancies) {
            // sum of coordinate * generator must vanish
            let mut acc = Polynomial::zero(&r);
            for t in s.terms() {
                let g = vector_to_poly(&r, &inputs[t.pos as usize]);
                acc = acc.combine(t.coef, t.mono, &g);
            }
            assert!(acc.is_zero());
        }
    }
}
