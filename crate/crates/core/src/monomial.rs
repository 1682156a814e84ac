//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

/// Maximum number of ring variables supported by the packed exponent layout.
pub const MAX_VARS: usize = 8;

/// A monomial `x^e` together with its weighted degree.
///
/// Unused exponent slots are zero, so comparisons never need the ring's
/// variable count.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    exps: [u16; MAX_VARS],
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m{:?}", self.exps)
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        deg: 0,
        exps: [0; MAX_VARS],
    };

    pub fn from_exponents(exps: &[u16], weights: &[u32]) -> Monomial {
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = e;
            m.deg += e as u32 * weights[i];
        }
        m
    }

    /// The variable `x_i` with weight `w`.
    pub fn var(i: usize, w: u32) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m.deg = w;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += other.exps[i];
        }
        m.deg += other.deg;
        m
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        m
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let mut m = Monomial::ONE;
        for i in 0..weights.len() {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            m.deg += m.exps[i] as u32 * weights[i];
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// `self : other` for monomial ideals, i.e. `self / gcd(self, other)`.
    pub fn colon(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let mut m = Monomial::ONE;
        for i in 0..weights.len() {
            m.exps[i] = self.exps[i].saturating_sub(other.exps[i]);
            m.deg += m.exps[i] as u32 * weights[i];
        }
        m
    }
}

/// Monomial orders. Both refine divisibility and respect multiplication.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Weighted-degree reverse lexicographic order.
    #[default]
    Grevlex,
    /// Pure lexicographic order, `x_0 > x_1 > ...`.
    Lex,
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: [u32; 3] = [1, 1, 1];

    fn m(e: [u16; 3]) -> Monomial {
        Monomial::from_exponents(&e, &W)
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::Grevlex;
        // x > y > z in degree one
        assert_eq!(o.cmp(&m([1, 0, 0]), &m([0, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m([0, 1, 0]), &m([0, 0, 1])), Ordering::Greater);
        // xz < y^2 in grevlex
        assert_eq!(o.cmp(&m([1, 0, 1]), &m([0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m([0, 0, 3]), &m([1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_basics() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m([1, 0, 0]), &m([0, 5, 5])), Ordering::Greater);
    }

    #[test]
    fn orders_respect_multiplication_and_divisibility() {
        let mons: Vec<Monomial> = (0..3u16)
            .flat_map(|a| (0..3u16).flat_map(move |b| (0..3u16).map(move |c| m([a, b, c]))))
            .collect();
        for o in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            for a in &mons {
                for b in &mons {
                    if a.divides(b) && a != b {
                        assert_eq!(o.cmp(a, b), Ordering::Less);
                    }
                    for c in mons.iter().step_by(5) {
                        assert_eq!(o.cmp(a, b), o.cmp(&a.mul(c), &b.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn lcm_and_quotient() {
        let a = m([2, 1, 0]);
        let b = m([1, 3, 1]);
        let l = a.lcm(&b, &W);
        assert_eq!(l, m([2, 3, 1]));
        assert!(a.divides(&l) && b.divides(&l));
        assert_eq!(a.quotient_of(&l), m([0, 2, 1]));
        assert_eq!(a.colon(&b, &W), m([1, 0, 0]));
    }
}
