//! Ring-class tests and module helpers shared by the registry checks.

use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::ideal::Ideal;
use crate::invariants::{self as inv, Count, Decision};
use crate::module::GradedModule;
use crate::ops;
use crate::quotient::QuotientRing;
use crate::resolution::{Over, Resolution};

use super::{Hyps, Operand};

/// Lazily computed facts about a base ring `R = S/I`.
#[derive(Debug)]
pub struct RingFacts {
    base: Arc<QuotientRing>,
    ring: GradedModule,
    depth: OnceLock<usize>,
    hypersurface: OnceLock<bool>,
    isolated: OnceLock<bool>,
    gorenstein: OnceLock<Option<bool>>,
}

impl RingFacts {
    pub fn new(base: &Arc<QuotientRing>) -> Self {
        RingFacts {
            base: base.clone(),
            ring: GradedModule::free(base, vec![0]),
            depth: OnceLock::new(),
            hypersurface: OnceLock::new(),
            isolated: OnceLock::new(),
            gorenstein: OnceLock::new(),
        }
    }

    pub fn base(&self) -> &Arc<QuotientRing> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn is_regular(&self) -> bool {
        self.base.is_polynomial_ring()
    }

    pub fn depth(&self) -> Result<usize> {
        if let Some(&d) = self.depth.get() {
            return Ok(d);
        }
        let d = inv::depth(&self.ring)?;
        Ok(*self.depth.get_or_init(|| d))
    }

    pub fn is_cohen_macaulay(&self) -> Result<bool> {
        Ok(self.depth()? == self.dim())
    }

    /// `h^i(R)` finite for every `i < dim R`.
    pub fn is_generalized_cm(&self) -> Result<bool> {
        for i in 0..self.dim() {
            if inv::h(&self.ring, i)? == Count::Infinite {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// No associated prime of `R` of dimension in `1..dim R`; implies equidimensional.
    pub fn is_equidimensional(&self) -> Result<bool> {
        let n = self.base.nvars();
        for i in 1..self.dim() {
            if inv::ext_dim(&self.ring, n - i)? >= i as i64 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Regular, or a polynomial ring modulo one equation.
    pub fn is_hypersurface(&self) -> Result<bool> {
        if let Some(&b) = self.hypersurface.get() {
            return Ok(b);
        }
        let b = self.is_regular() || self.ring.ambient_resolution()?.betti().total(1) == 1;
        Ok(*self.hypersurface.get_or_init(|| b))
    }

    /// The Jacobian ideal is `m`-primary.
    pub fn has_isolated_singularity(&self) -> Result<bool> {
        if let Some(&b) = self.isolated.get() {
            return Ok(b);
        }
        let b = self.is_regular() || inv::jacobian_ideal(&self.base)?.is_m_primary()?;
        Ok(*self.isolated.get_or_init(|| b))
    }

    /// `None` when `R` is not Cohen-Macaulay (no canonical module is computed then).
    pub fn is_gorenstein(&self) -> Result<Option<bool>> {
        if let Some(&b) = self.gorenstein.get() {
            return Ok(b);
        }
        let b = if self.is_cohen_macaulay()? {
            Some(inv::is_gorenstein(&self.base)?)
        } else {
            None
        };
        Ok(*self.gorenstein.get_or_init(|| b))
    }

    /// Certified domain, `(S_2)` and `(R_1)` through the Jacobian ideal.
    pub fn is_normal(&self) -> Result<bool> {
        if self.is_regular() {
            return Ok(true);
        }
        if !self.base.is_domain() || !inv::serre_sr(&self.ring, 2)? {
            return Ok(false);
        }
        let singular = inv::jacobian_ideal(&self.base)?.quotient_dim()?;
        Ok(singular.is_none_or(|s| s + 2 <= self.dim()))
    }
}

/// Projective dimension over the base ring; `None` when infinite.
/// Finite projective dimension is at most `depth R`, so resolving one step
/// further decides it.
pub fn pd_over_base(m: &GradedModule, facts: &RingFacts) -> Result<Option<usize>> {
    if facts.is_regular() {
        return inv::pd_ambient(m).map(Some);
    }
    let res = Resolution::compute(m, Over::Quotient, facts.depth()? + 1)?;
    Ok(res.pd().exact())
}

/// Betti numbers over the base ring up to a finite projective dimension.
pub fn betti_over_base(m: &GradedModule, pd: usize) -> Result<Vec<usize>> {
    let res = Resolution::compute(m, Over::Quotient, pd + 1)?;
    let b = res.betti();
    Ok((0..=pd).map(|i| b.total(i)).collect())
}

pub fn h0(m: &GradedModule) -> Result<u64> {
    inv::h(m, 0)?
        .finite()
        .ok_or_else(|| crate::error::Error::Internal("h^0 is always finite".into()))
}

pub fn h0_tensor(m: &GradedModule, n: &GradedModule) -> Result<u64> {
    h0(&ops::tensor(m, n)?)
}

/// `M / H^0_m(M)`.
pub fn unmixed_part(m: &GradedModule) -> Result<GradedModule> {
    Ok(ops::saturate(m, &Ideal::maximal(m.base()))?.quotient)
}

/// Length of a module known to have finite length.
pub fn finite_length(m: &GradedModule) -> Result<Option<u64>> {
    Ok(inv::length(m)?.finite())
}

/// Rank when the base is a certified domain; the rank hypothesis otherwise
/// holds only for modules with a free localization of constant rank, which
/// is recorded as unknown.
pub fn constant_rank(hyps: &mut Hyps, name: &str, m: &GradedModule) {
    if m.base().is_domain() {
        hyps.verified(name, true);
    } else {
        hyps.decided(name, Decision::Unknown);
    }
}

/// Records "locally free on the punctured spectrum" (needs a domain for the rank).
pub fn locally_free_punctured(hyps: &mut Hyps, name: &str, m: &GradedModule) -> bool {
    if inv::is_free(m).unwrap_or(false) {
        return hyps.verified(name, true);
    }
    hyps.try_verified(name, inv::is_locally_free_punctured(m))
}

/// Records "locally free off V(a)".
pub fn locally_free_off(m: &GradedModule, a: &Ideal) -> Result<Decision> {
    if inv::is_free(m)? {
        return Ok(Decision::Yes);
    }
    if !m.base().is_domain() {
        return Ok(Decision::Unknown);
    }
    inv::is_locally_free_off(m, a)
}

/// The Buchsbaum hypothesis: verified for Cohen-Macaulay modules, certified
/// when the operand carries a certificate not refuted by the
/// quasi-Buchsbaum test, violated otherwise.
pub fn buchsbaum(hyps: &mut Hyps, name: &str, n: &Operand) -> Result<bool> {
    if inv::is_cohen_macaulay(&n.module)? {
        return Ok(hyps.verified(name, true));
    }
    if n.buchsbaum {
        let ok = inv::is_quasi_buchsbaum(&n.module)? != Some(false);
        return Ok(hyps.certified(name, ok));
    }
    Ok(hyps.certified(name, false))
}

/// `pd M = dim R - dim M` with `pd M` finite.
pub fn is_perfect(m: &GradedModule, facts: &RingFacts) -> Result<(bool, Option<usize>)> {
    let pd = pd_over_base(m, facts)?;
    let Some(dm) = inv::dim(m)? else {
        return Ok((false, pd));
    };
    Ok((pd.is_some_and(|p| p + dm == facts.dim()), pd))
}
