//! Hilbert series of graded modules, computed from leading-term monomial ideals.

use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// An integer Laurent polynomial `sum coeffs[k] t^(low + k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i64, e: i32) -> Self {
        LaurentPoly {
            low: e,
            coeffs: vec![c],
        }
        .normalized()
    }

    pub fn from_coeffs(low: i32, coeffs: Vec<i64>) -> Self {
        LaurentPoly { low, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            return LaurentPoly::default();
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, e: i32) -> i64 {
        if e < self.low {
            return 0;
        }
        self.coeffs
            .get((e - self.low) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.low + k as i32, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin(other, -1)
    }

    fn lin(&self, other: &Self, s: i64) -> Self {
        if self.is_zero() {
            return other.scale(s);
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let coeffs = (low..=high)
            .map(|e| self.coeff(e) + s * other.coeff(e))
            .collect();
        LaurentPoly { low, coeffs }.normalized()
    }

    pub fn scale(&self, s: i64) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
        .normalized()
    }

    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            low: self.low + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly {
            low: self.low + other.low,
            coeffs,
        }
        .normalized()
    }

    /// Multiplies by `1 - t^w`.
    pub fn mul_one_minus(&self, w: u32) -> Self {
        self.sub(&self.shift(w as i32))
    }

    /// Exact division by `1 - t^w`, or `None` when it does not divide.
    pub fn div_one_minus(&self, w: u32) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let w = w as usize;
        let n = self.coeffs.len();
        if n <= w {
            return None;
        }
        // q_k = a_k + q_{k-w}; degree of q is n - 1 - w
        let mut q = vec![0i64; n - w];
        for k in 0..n - w {
            q[k] = self.coeffs[k] + if k >= w { q[k - w] } else { 0 };
        }
        let back = LaurentPoly {
            low: self.low,
            coeffs: q.clone(),
        }
        .mul_one_minus(w as u32);
        (back == *self).then(|| {
            LaurentPoly {
                low: self.low,
                coeffs: q,
            }
            .normalized()
        })
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Multiplicity of `t = 1` as a root, and the cofactor.
    pub fn split_at_one(&self) -> (usize, LaurentPoly) {
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval_one() == 0 {
            p = p.div_one_minus(1).expect("t = 1 is a root");
            k += 1;
        }
        (k, p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, a) = (c < 0, c.unsigned_abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (a, e) {
                (a, 0) => write!(f, "{a}")?,
                (1, 1) => f.write_str("t")?,
                (1, e) => write!(f, "t^{e}")?,
                (a, 1) => write!(f, "{a}*t")?,
                (a, e) => write!(f, "{a}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `numerator / prod_v (1 - t^{w_v})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    numerator: LaurentPoly,
    weights: Vec<u32>,
}

impl HilbertSeries {
    pub fn new(numerator: LaurentPoly, weights: Vec<u32>) -> Self {
        HilbertSeries { numerator, weights }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        HilbertSeries::new(self.numerator.add(&other.numerator), self.weights.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        HilbertSeries::new(self.numerator.sub(&other.numerator), self.weights.clone())
    }

    pub fn shift(&self, e: i32) -> Self {
        HilbertSeries::new(self.numerator.shift(e), self.weights.clone())
    }

    /// Krull dimension, `None` for the zero module.
    pub fn dim(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let (k, _) = self.numerator.split_at_one();
        Some(self.weights.len() - k)
    }

    /// Multiplicity. Only defined here for standard-graded rings.
    pub fn degree(&self) -> Result<u64> {
        if self.weights.iter().any(|&w| w != 1) {
            return Err(Error::Unsupported(
                "multiplicity is only computed for standard gradings".into(),
            ));
        }
        if self.is_zero() {
            return Ok(0);
        }
        let (_, q) = self.numerator.split_at_one();
        let e = q.eval_one();
        if e <= 0 {
            return Err(Error::Internal(format!("non-positive multiplicity {e}")));
        }
        Ok(e as u64)
    }

    /// The series as a Laurent polynomial when the module has finite length.
    pub fn as_polynomial(&self) -> Option<LaurentPoly> {
        let mut p = self.numerator.clone();
        for &w in &self.weights {
            p = p.div_one_minus(w)?;
        }
        Some(p)
    }

    /// Length when finite.
    pub fn length(&self) -> Option<u64> {
        match self.dim() {
            None => Some(0),
            Some(0) => Some(self.as_polynomial()?.eval_one() as u64),
            Some(_) => None,
        }
    }

    /// Value of the Hilbert function in degree `d`.
    pub fn hilbert_function(&self, d: i32) -> i64 {
        if self.numerator.is_zero() || d < self.numerator.low() {
            return 0;
        }
        let span = (d - self.numerator.low()) as usize;
        // power series of prod 1/(1 - t^w) up to t^span
        let mut series = vec![0i64; span + 1];
        series[0] = 1;
        for &w in &self.weights {
            let w = w as usize;
            for k in w..=span {
                series[k] += series[k - w];
            }
        }
        (0..=span)
            .map(|k| self.numerator.coeff(self.numerator.low() + k as i32) * series[span - k])
            .sum()
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/", self.numerator)?;
        let mut first = true;
        for &w in &self.weights {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if w == 1 {
                f.write_str("(1 - t)")?;
            } else {
                write!(f, "(1 - t^{w})")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of `HS(S/J)` over `prod (1 - t^{w_v})` for the monomial ideal `J`.
pub fn monomial_numerator(gens: &[Monomial], weights: &[u32]) -> LaurentPoly {
    numerator_rec(minimalize(gens.to_vec()), weights)
}

fn numerator_rec(gens: Vec<Monomial>, weights: &[u32]) -> LaurentPoly {
    if gens.is_empty() {
        return LaurentPoly::one();
    }
    if gens.iter().any(|g| g.is_one()) {
        return LaurentPoly::zero();
    }
    let n = weights.len();
    let is_pure = |g: &Monomial| (0..n).filter(|&i| g.exp(i) > 0).count() == 1;
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut p = LaurentPoly::one();
        for g in &gens {
            p = p.mul_one_minus(g.degree());
        }
        return p;
    }
    // pivot on x_i^e for the variable most common among mixed generators
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| !is_pure(g)).collect();
    let var = (0..n)
        .max_by_key(|&i| {
            (
                mixed.iter().filter(|g| g.exp(i) > 0).count(),
                std::cmp::Reverse(i),
            )
        })
        .unwrap();
    let mut exps: Vec<u16> = mixed
        .iter()
        .map(|g| g.exp(var))
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let mut pe = vec![0u16; n];
    pe[var] = e;
    let pivot = Monomial::from_exponents(&pe, weights);

    let mut with = gens.clone();
    with.push(pivot);
    let colon: Vec<Monomial> = gens.iter().map(|g| g.colon(&pivot, weights)).collect();
    let a = numerator_rec(minimalize(with), weights);
    let b = numerator_rec(minimalize(colon), weights);
    a.add(&b.shift(pivot.degree() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e, &vec![1; e.len()])
    }

    #[test]
    fn division_by_one_minus_t() {
        let p = LaurentPoly::from_coeffs(0, vec![1, -2, 1]);
        assert_eq!(
            p.div_one_minus(1),
            Some(LaurentPoly::from_coeffs(0, vec![1, -1]))
        );
        assert_eq!(
            LaurentPoly::from_coeffs(0, vec![1, 1]).div_one_minus(1),
            None
        );
        assert_eq!(p.split_at_one().0, 2);
    }

    #[test]
    fn artinian_quotients() {
        let w = [1, 1];
        // (x^2, y^3): standard monomials 1, x, y, xy, y^2, xy^2
        let hs = HilbertSeries::new(
            monomial_numerator(&[m(&[2, 0]), m(&[0, 3])], &w),
            w.to_vec(),
        );
        assert_eq!(hs.dim(), Some(0));
        assert_eq!(hs.length(), Some(6));
        // (x, y)^2
        let hs = HilbertSeries::new(
            monomial_numerator(&[m(&[2, 0]), m(&[1, 1]), m(&[0, 2])], &w),
            w.to_vec(),
        );
        assert_eq!(hs.length(), Some(3));
        assert_eq!(hs.hilbert_function(1), 2);
    }

    #[test]
    fn dimension_and_degree() {
        let w = [1, 1, 1];
        let s = HilbertSeries::new(LaurentPoly::one(), w.to_vec());
        assert_eq!(s.dim(), Some(3));
        assert_eq!(s.degree().unwrap(), 1);
        assert_eq!(s.hilbert_function(2), 6);
        // x*y: two planes
        let hs = HilbertSeries::new(monomial_numerator(&[m(&[1, 1, 0])], &w), w.to_vec());
        assert_eq!(hs.dim(), Some(2));
        assert_eq!(hs.degree().unwrap(), 2);
        // (xy, xz, yz): three coordinate axes
        let hs = HilbertSeries::new(
            monomial_numerator(&[m(&[1, 1, 0]), m(&[1, 0, 1]), m(&[0, 1, 1])], &w),
            w.to_vec(),
        );
        assert_eq!(hs.dim(), Some(1));
        assert_eq!(hs.degree().unwrap(), 3);
    }

    #[test]
    fn brute_force_agreement() {
        // count standard monomials of J = (x^2 y, x y^3, y^2 z^2, x z^3) degree by degree
        let w = [1, 1, 1];
        let gens = [m(&[2, 1, 0]), m(&[1, 3, 0]), m(&[0, 2, 2]), m(&[1, 0, 3])];
        let hs = HilbertSeries::new(monomial_numerator(&gens, &w), w.to_vec());
        for d in 0..9u16 {
            let mut count = 0;
            for a in 0..=d {
                for b in 0..=d - a {
                    let mono = m(&[a, b, d - a - b]);
                    if !gens.iter().any(|g| g.divides(&mono)) {
                        count += 1;
                    }
                }
            }
            assert_eq!(hs.hilbert_function(d as i32), count, "degree {d}");
        }
    }
}
