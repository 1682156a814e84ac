//! Seeded random monomial modules for property tests and the bound explorer.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ideal::Ideal;
use crate::matrix::GradedMap;
use crate::module::GradedModule;
use crate::quotient::QuotientRing;
use crate::ring::{AmbientRing, Polynomial};
use crate::GroundField;

const NAMES: [&str; 5] = ["x", "y", "z", "u", "v"];

/// Size caps for sampled objects.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub nvars: usize,
    pub max_gens: usize,
    pub max_degree: u16,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            nvars: 3,
            max_gens: 5,
            max_degree: 6,
        }
    }
}

/// A sampled module with a human-readable description.
#[derive(Clone, Debug)]
pub struct Sample {
    pub module: GradedModule,
    pub description: String,
}

pub struct Sampler {
    rng: ChaCha8Rng,
    config: SampleConfig,
}

impl Sampler {
    pub fn new(seed: u64, config: SampleConfig) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    pub fn config(&self) -> SampleConfig {
        self.config
    }

    /// Polynomial ring on the first `nvars` of x, y, z, u, v.
    pub fn ring(field: GroundField, nvars: usize) -> Result<Arc<QuotientRing>> {
        let s = AmbientRing::new(field, &NAMES[..nvars.min(NAMES.len())])?;
        Ok(QuotientRing::polynomial(&s))
    }

    /// Random number of variables in `1..=nvars`.
    pub fn nvars(&mut self) -> usize {
        self.rng.gen_range(1..=self.config.nvars)
    }

    fn monomial(&mut self, ring: &Arc<AmbientRing>) -> Polynomial {
        let n = ring.nvars();
        let deg = self.rng.gen_range(1..=self.config.max_degree);
        let mut exps = vec![0u16; n];
        for _ in 0..deg {
            exps[self.rng.gen_range(0..n)] += 1;
        }
        Polynomial::monomial(ring, 1, ring.monomial(&exps))
    }

    fn pure_power(&mut self, ring: &Arc<AmbientRing>, i: usize) -> Polynomial {
        let mut exps = vec![0u16; ring.nvars()];
        exps[i] = self.rng.gen_range(1..=self.config.max_degree);
        Polynomial::monomial(ring, 1, ring.monomial(&exps))
    }

    /// Nonzero monomial generators, at most `max_gens` of them.
    pub fn monomials(&mut self, base: &Arc<QuotientRing>) -> Vec<Polynomial> {
        let k = self.rng.gen_range(1..=self.config.max_gens);
        (0..k).map(|_| self.monomial(base.ambient())).collect()
    }

    /// Monomial ideal containing a pure power of every variable.
    pub fn primary_monomials(&mut self, base: &Arc<QuotientRing>) -> Vec<Polynomial> {
        let n = base.nvars();
        let mut gens: Vec<Polynomial> =
            (0..n).map(|i| self.pure_power(base.ambient(), i)).collect();
        let extra = self
            .rng
            .gen_range(0..=self.config.max_gens.saturating_sub(n));
        gens.extend((0..extra).map(|_| self.monomial(base.ambient())));
        gens
    }

    pub fn monomial_ideal(&mut self, base: &Arc<QuotientRing>) -> Result<Ideal> {
        let gens = self.monomials(base);
        Ideal::new(base, gens)
    }

    /// `R/I` or `I` for a random monomial ideal `I`.
    pub fn module(&mut self, base: &Arc<QuotientRing>) -> Result<Sample> {
        let gens = self.monomials(base);
        let list = join(&gens);
        if self.rng.gen_bool(0.5) {
            Ok(Sample {
                module: GradedModule::cyclic(base, &gens)?,
                description: format!("R/({list})"),
            })
        } else {
            Ok(Sample {
                module: GradedModule::ideal(base, &gens)?,
                description: format!("({list})"),
            })
        }
    }

    /// `R/I` with `I` primary to the maximal ideal.
    pub fn finite_length(&mut self, base: &Arc<QuotientRing>) -> Result<Sample> {
        let gens = self.primary_monomials(base);
        let description = format!("R/({})", join(&gens));
        Ok(Sample {
            module: GradedModule::cyclic(base, &gens)?,
            description,
        })
    }

    /// Cokernel of one column of pure powers in shuffled order, so the module has
    /// `dim R` generators, one relation, and the ideal of entries is primary.
    pub fn column_presentation(&mut self, base: &Arc<QuotientRing>) -> Result<Sample> {
        let mut entries: Vec<Polynomial> = (0..base.nvars())
            .map(|i| self.pure_power(base.ambient(), i))
            .collect();
        entries.shuffle(&mut self.rng);
        let rows: Vec<Vec<Polynomial>> = entries.iter().map(|e| vec![e.clone()]).collect();
        let (src, tgt) = GradedMap::infer_twists(&rows)?;
        let map = GradedMap::new(base, src, tgt, &rows)?;
        Ok(Sample {
            module: GradedModule::coker(map),
            description: format!("coker [{}]^T", join(&entries)),
        })
    }
}

fn join(gens: &[Polynomial]) -> String {
    gens.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let r = Sampler::ring(GroundField::default(), 3).unwrap();
        let mut a = Sampler::new(9, SampleConfig::default());
        let mut b = Sampler::new(9, SampleConfig::default());
        for _ in 0..10 {
            assert_eq!(
                a.module(&r).unwrap().description,
                b.module(&r).unwrap().description
            );
        }
    }

    #[test]
    fn column_presentation_is_primary() {
        let r = Sampler::ring(GroundField::default(), 2).unwrap();
        let mut s = Sampler::new(1, SampleConfig::default());
        let m = s.column_presentation(&r).unwrap().module;
        assert_eq!(m.num_generators(), 2);
        assert_eq!(m.presentation().ncols(), 1);
    }
}
