//! The ambient polynomial ring `S = k[x_1..x_n]` and its polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::GroundField;
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};

/// A graded polynomial ring over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbientRing {
    names: Vec<String>,
    weights: Vec<u32>,
    field: GroundField,
    order: MonomialOrder,
}

impl AmbientRing {
    /// Standard-graded ring with grevlex order.
    pub fn new<S: AsRef<str>>(field: GroundField, names: &[S]) -> Result<Arc<Self>> {
        let weights = vec![1; names.len()];
        Self::with_weights(field, names, &weights, MonomialOrder::Grevlex)
    }

    pub fn with_weights<S: AsRef<str>>(
        field: GroundField,
        names: &[S],
        weights: &[u32],
        order: MonomialOrder,
    ) -> Result<Arc<Self>> {
        if names.len() > MAX_VARS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_VARS} variables are supported"
            )));
        }
        if names.len() != weights.len() {
            return Err(Error::Structural(
                "one weight per variable is required".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(Error::Structural(
                "variable degrees must be positive".into(),
            ));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if !is_identifier(a) {
                return Err(Error::Structural(format!("invalid variable name `{a}`")));
            }
            if names[..i].contains(a) {
                return Err(Error::Structural(format!("duplicate variable name `{a}`")));
            }
        }
        Ok(Arc::new(AmbientRing {
            names,
            weights: weights.to_vec(),
            field,
            order,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> &GroundField {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// True when every variable has degree one.
    pub fn is_standard_graded(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    /// Sum of the variable degrees; `S(-sigma)` is the canonical module of `S`.
    pub fn sigma(&self) -> i32 {
        self.weights.iter().map(|&w| w as i32).sum()
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        Monomial::from_exponents(exps, &self.weights)
    }

    pub fn var_monomial(&self, i: usize) -> Monomial {
        Monomial::var(i, self.weights[i])
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn write_monomial(&self, m: &Monomial, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for i in 0..self.nvars() {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(&self.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A polynomial in an [`AmbientRing`]: terms sorted strictly descending, no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<AmbientRing>,
    terms: Vec<(u32, Monomial)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.ring == *other.ring
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<AmbientRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<AmbientRing>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        let terms = if c == 0 {
            vec![]
        } else {
            vec![(c, Monomial::ONE)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<AmbientRing>, i: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(1, ring.var_monomial(i))],
        }
    }

    pub fn monomial(ring: &Arc<AmbientRing>, c: u32, m: Monomial) -> Self {
        let terms = if c == 0 { vec![] } else { vec![(c, m)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from unsorted terms, combining duplicates.
    pub fn from_terms(ring: &Arc<AmbientRing>, mut terms: Vec<(u32, Monomial)>) -> Self {
        let ord = ring.order;
        terms.sort_by(|a, b| ord.cmp(&b.1, &a.1));
        let f = ring.field;
        let mut out: Vec<(u32, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = f.add(last.0, c),
                _ => out.push((c, m)),
            }
            if let Some(last) = out.last() {
                if last.0 == 0 {
                    out.pop();
                }
            }
        }
        out.retain(|t| t.0 != 0);
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Trusted constructor; `terms` must already be sorted and nonzero.
    pub(crate) fn from_sorted(ring: &Arc<AmbientRing>, terms: Vec<(u32, Monomial)>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(ring: &Arc<AmbientRing>, text: &str) -> Result<Self> {
        PolyParser {
            ring,
            src: text.as_bytes(),
            pos: 0,
        }
        .parse()
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(u32, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.1)
    }

    pub fn leading_coefficient(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    /// Weighted degree when the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.1.degree();
        self.terms.iter().all(|t| t.1.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::Structural(
                "polynomials belong to different rings".into(),
            ))
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.combine(1, Monomial::ONE, other))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.combine(self.ring.field.neg(1), Monomial::ONE, other))
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(c, m)| (f.neg(c), m)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let f = self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(a, m)| (f.mul(a, c), m)).collect(),
        }
    }

    pub fn mul_term(&self, c: u32, m: Monomial) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let f = self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|&(a, n)| (f.mul(a, c), n.mul(&m)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut acc = Polynomial::zero(&self.ring);
        for &(c, m) in &other.terms {
            acc = acc.combine(c, m, self);
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ring, 1);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `self + c*m*g`, merging sorted term lists.
    pub(crate) fn combine(&self, c: u32, m: Monomial, g: &Polynomial) -> Polynomial {
        let f = self.ring.field;
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < g.terms.len() {
            let next_g = g.terms.get(j).map(|&(b, n)| (f.mul(b, c), n.mul(&m)));
            match (self.terms.get(i), next_g) {
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b);
                    j += 1;
                }
                (Some(&a), Some(b)) => match ord.cmp(&a.1, &b.1) {
                    Ordering::Greater => {
                        out.push(a);
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(b);
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = f.add(a.0, b.0);
                        if s != 0 {
                            out.push((s, a.1));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (None, None) => unreachable!(),
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(c) if c != 1 => self.scale(self.ring.field.inv(c)),
            _ => self.clone(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = self.ring.field;
        let w = self.ring.weights.clone();
        let terms = self
            .terms
            .iter()
            .filter(|t| t.1.exp(i) > 0)
            .filter_map(|&(c, m)| {
                let e = m.exp(i);
                let coef = f.mul(c, f.from_i64(e as i64));
                if coef == 0 {
                    return None;
                }
                let mut exps: Vec<u16> = m.exponents()[..w.len()].to_vec();
                exps[i] -= 1;
                Some((coef, Monomial::from_exponents(&exps, &w)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = self.ring.field;
        for (k, &(c, m)) in self.terms.iter().enumerate() {
            let s = field.to_signed(c);
            let (neg, a) = (s < 0, s.unsigned_abs());
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                self.ring.write_monomial(&m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct PolyParser<'a> {
    ring: &'a Arc<AmbientRing>,
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn parse(mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(p)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let mut acc = self.product()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.power()?;
                    acc = acc.mul(&t)?;
                }
                // implicit multiplication: `2x`, `x y`, `(x)(y)`
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                    let t = self.power()?;
                    acc = acc.mul(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            if e > u16::MAX as u64 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("integer overflow"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let p = self.ring.field.characteristic() as u64;
                Ok(Polynomial::constant(self.ring, (n % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}`")))
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<AmbientRing> {
        AmbientRing::new(GroundField::default(), &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let r = ring();
        let f = Polynomial::parse(&r, "x^2*y - 3*z^3 + 2 x y z").unwrap();
        assert_eq!(f.to_string(), "x^2*y + 2*x*y*z - 3*z^3");
        assert!(f.is_homogeneous());
        let g = Polynomial::parse(&r, "x + 1").unwrap();
        assert!(!g.is_homogeneous());
        assert!(Polynomial::parse(&r, "x + w").is_err());
    }

    #[test]
    fn arithmetic() {
        let r = ring();
        let a = Polynomial::parse(&r, "x + y").unwrap();
        let b = Polynomial::parse(&r, "x - y").unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p, Polynomial::parse(&r, "x^2 - y^2").unwrap());
        assert!(a.sub(&a).unwrap().is_zero());
        assert_eq!(
            a.pow(2),
            Polynomial::parse(&r, "x^2 + 2*x*y + y^2").unwrap()
        );
    }

    #[test]
    fn derivatives() {
        let r = ring();
        let f = Polynomial::parse(&r, "x^2 - y^3").unwrap();
        assert_eq!(f.derivative(0), Polynomial::parse(&r, "2*x").unwrap());
        assert_eq!(f.derivative(1), Polynomial::parse(&r, "-3*y^2").unwrap());
    }

    #[test]
    fn rejects_bad_rings() {
        let k = GroundField::default();
        assert!(AmbientRing::new(k, &["x", "x"]).is_err());
        assert!(AmbientRing::new(k, &["x", "1y"]).is_err());
        assert!(AmbientRing::with_weights(k, &["x"], &[0], MonomialOrder::Grevlex).is_err());
    }
}
