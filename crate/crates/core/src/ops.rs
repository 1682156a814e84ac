//! Module constructions: homology of complexes of presented modules, tensor
//! products, Hom and duals, biduality, torsion, Fitting ideals, annihilators,
//! saturation, Koszul complexes, Tor and Ext.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::matrix::GradedMap;
use crate::module::GradedModule;
use crate::monomial::Monomial;
use crate::quotient::QuotientRing;
use crate::resolution::{Over, Resolution};
use crate::ring::Polynomial;
use crate::vector::{VTerm, Vector};

/// Keeps the first `k` coordinates of every column, dropping columns that vanish.
fn project(map: &GradedMap, k: usize) -> GradedMap {
    let base = map.base();
    let mut cols = Vec::new();
    let mut src = Vec::new();
    for (i, c) in map.columns().iter().enumerate() {
        let v = Vector {
            terms: c
                .terms
                .iter()
                .filter(|t| (t.pos as usize) < k)
                .copied()
                .collect(),
        };
        if !v.is_zero() {
            cols.push(v);
            src.push(map.source()[i]);
        }
    }
    GradedMap::from_columns(base, src, map.target()[..k].to_vec(), cols)
}

/// Generators of `{y : psi(y) in im(pz)}` as columns into the source of `psi`.
pub fn preimage(psi: &GradedMap, pz: Option<&GradedMap>) -> Result<GradedMap> {
    match pz {
        Some(p) if p.ncols() > 0 => Ok(project(&psi.concat(p)?.kernel()?, psi.ncols())),
        _ => psi.kernel(),
    }
}

/// `(im gens + im rels) / im rels`, generated by the columns of `gens`.
pub fn subquotient(gens: &GradedMap, rels: Option<&GradedMap>) -> Result<GradedModule> {
    let pres = match rels {
        Some(r) if r.ncols() > 0 => project(&gens.concat(r)?.kernel()?, gens.ncols()),
        _ => gens.kernel()?,
    };
    GradedModule::coker(pres).minimize()
}

/// Homology `ker(psi) / im(phi)` at a spot `Y = coker(py)` of a complex of
/// presented modules, where `psi` lands in `Z = coker(pz)`. All maps are
/// given on the free modules covering `X`, `Y`, `Z`.
pub fn homology(
    base: &Arc<QuotientRing>,
    gy: &[i32],
    phi: Option<&GradedMap>,
    psi: Option<&GradedMap>,
    py: Option<&GradedMap>,
    pz: Option<&GradedMap>,
) -> Result<GradedModule> {
    let rels = match (phi.filter(|m| m.ncols() > 0), py.filter(|m| m.ncols() > 0)) {
        (Some(a), Some(b)) => Some(a.concat(b)?),
        (Some(a), None) => Some(a.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    };
    match psi.filter(|m| m.nrows() > 0) {
        None => {
            let pres = rels.unwrap_or_else(|| GradedMap::zero(base, Vec::new(), gy.to_vec()));
            GradedModule::coker(pres).minimize()
        }
        Some(psi) => {
            let k = preimage(psi, pz)?;
            subquotient(&k, rels.as_ref())
        }
    }
}

fn check_same_base(m: &GradedModule, n: &GradedModule) -> Result<()> {
    m.base().same_ring(n.base())
}

/// `M ⊗ N`, minimized.
pub fn tensor(m: &GradedModule, n: &GradedModule) -> Result<GradedModule> {
    check_same_base(m, n)?;
    let (m, n) = (m.minimize()?, n.minimize()?);
    let base = m.base();
    let a = m.presentation();
    let b = n.presentation();
    let id_f0 = GradedMap::identity(base, a.target().to_vec());
    let id_g0 = GradedMap::identity(base, b.target().to_vec());
    let pres = a.kron(&id_g0)?.concat(&id_f0.kron(b)?)?;
    GradedModule::coker(pres).minimize()
}

/// `M^{⊗n}` for `n >= 1`.
pub fn tensor_power(m: &GradedModule, n: usize) -> Result<GradedModule> {
    if n == 0 {
        return Ok(GradedModule::free(m.base(), vec![0]));
    }
    let mut acc = m.minimize()?;
    for _ in 1..n {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

/// `Hom_R(M, N)`.
pub fn hom(m: &GradedModule, n: &GradedModule) -> Result<GradedModule> {
    check_same_base(m, n)?;
    let (m, n) = (m.minimize()?, n.minimize()?);
    let base = m.base();
    let a = m.presentation();
    let b = n.presentation();
    let f0_dual: Vec<i32> = a.target().iter().map(|t| -t).collect();
    let f1_dual: Vec<i32> = a.source().iter().map(|t| -t).collect();
    let id_g0 = GradedMap::identity(base, b.target().to_vec());
    let psi = a.transpose().kron(&id_g0)?;
    let py = GradedMap::identity(base, f0_dual.clone()).kron(b)?;
    let pz = GradedMap::identity(base, f1_dual).kron(b)?;
    let gy = psi.source().to_vec();
    homology(base, &gy, None, Some(&psi), Some(&py), Some(&pz))
}

/// `M* = Hom_R(M, R)`.
pub fn dual(m: &GradedModule) -> Result<GradedModule> {
    hom(m, &GradedModule::free(m.base(), vec![0]))
}

/// The biduality morphism `M -> M**` in explicit coordinates.
#[derive(Debug, Clone)]
pub struct Biduality {
    module: GradedModule,
    /// Relations among the generators of `M*` (functionals, columns in `F0*`).
    dual_rels: GradedMap,
    /// `F0 -> E*`: the evaluation map on generators, the transpose of the dual generators.
    eval: GradedMap,
}

impl Biduality {
    pub fn new(m: &GradedModule) -> Result<Self> {
        if !m.base().is_domain() {
            return Err(Error::Unsupported(
                "biduality needs a base ring certified to be a domain".into(),
            ));
        }
        let module = m.minimize()?;
        let a = module.presentation();
        let dual_gens = if a.ncols() == 0 {
            let tw: Vec<i32> = a.target().iter().map(|t| -t).collect();
            GradedMap::identity(m.base(), tw)
        } else {
            a.transpose().kernel()?
        };
        let dual_rels = dual_gens.kernel()?;
        let eval = dual_gens.transpose();
        Ok(Biduality {
            module,
            dual_rels,
            eval,
        })
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn evaluation(&self) -> &GradedMap {
        &self.eval
    }

    /// `M*` presented on the chosen functionals.
    pub fn dual_module(&self) -> GradedModule {
        GradedModule::coker(self.dual_rels.clone())
    }

    /// Generators of the kernel of the evaluation map on `F0`.
    fn eval_kernel(&self) -> Result<GradedMap> {
        self.eval.kernel()
    }

    /// `ker(M -> M**)`, the torsion submodule.
    pub fn kernel(&self) -> Result<GradedModule> {
        let k = self.eval_kernel()?;
        subquotient(&k, Some(self.module.presentation()))
    }

    /// `coker(M -> M**)`.
    pub fn cokernel(&self) -> Result<GradedModule> {
        let lt = self.dual_rels.transpose();
        let base = self.module.base();
        let gy = self.eval.target().to_vec();
        homology(
            base,
            &gy,
            Some(&self.eval),
            Some(&lt).filter(|m| m.nrows() > 0),
            None,
            None,
        )
    }

    pub fn is_injective(&self) -> Result<bool> {
        let k = self.eval_kernel()?;
        for c in k.columns() {
            if !self.module.is_zero_element(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel()?.is_zero()
    }

    /// `M / torsion`, the image of the evaluation map.
    pub fn image(&self) -> Result<GradedModule> {
        GradedModule::coker(self.eval_kernel()?).minimize()
    }
}

pub fn eval_map(m: &GradedModule) -> Result<Biduality> {
    Biduality::new(m)
}

pub fn torsion(m: &GradedModule) -> Result<GradedModule> {
    Biduality::new(m)?.kernel()
}

/// Fitting ideal `Fitt_r(M)`: the `(g - r)`-minors of a minimal presentation
/// with `g` generators.
pub fn fitting(m: &GradedModule, r: usize) -> Result<Ideal> {
    let m = m.minimize()?;
    let base = m.base();
    let a = m.presentation();
    let g = a.nrows();
    if r >= g {
        return Ok(Ideal::unit(base));
    }
    let k = g - r;
    if k > a.ncols() {
        return Ideal::new(base, Vec::new());
    }
    let rows = a.rows();
    let minors = all_minors(&rows, k, 200_000)?;
    Ideal::new(base, minors)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `k x k` minors by Laplace expansion along rows, memoized over column subsets.
pub(crate) fn minors(rows: &[Vec<Polynomial>], k: usize) -> Result<Vec<Polynomial>> {
    all_minors(rows, k, 200_000)
}

fn all_minors(rows: &[Vec<Polynomial>], k: usize, cap: usize) -> Result<Vec<Polynomial>> {
    let (nr, nc) = (rows.len(), rows[0].len());
    if binom(nr, k).saturating_mul(binom(nc, k)) > cap {
        return Err(Error::Unsupported(format!(
            "too many {k}-minors of a {nr}x{nc} matrix"
        )));
    }
    let ring = rows[0][0].ring().clone();
    let mut out = Vec::new();
    for rs in subsets(nr, k) {
        // level t: determinant of rows rs[..t] against each t-subset of columns
        let mut level: std::collections::HashMap<Vec<usize>, Polynomial> =
            (0..nc).map(|c| (vec![c], rows[rs[0]][c].clone())).collect();
        for t in 1..k {
            let mut next = std::collections::HashMap::new();
            for cs in subsets(nc, t + 1) {
                let mut det = Polynomial::zero(&ring);
                for (p, &c) in cs.iter().enumerate() {
                    let e = &rows[rs[t]][c];
                    if e.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cs.iter().copied().filter(|&x| x != c).collect();
                    let sub = &level[&rest];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = e.mul(sub)?;
                    det = if (p + t) % 2 == 0 {
                        det.add(&term)?
                    } else {
                        det.sub(&term)?
                    };
                }
                next.insert(cs, det);
            }
            level = next;
        }
        out.extend(level.into_values().filter(|d| !d.is_zero()));
    }
    out.sort_by_key(|a| a.to_string());
    out.dedup();
    Ok(out)
}

/// Maps `R(-d) -> F0^{copies}` sending `1` to generator `j` of copy `j`, with
/// the copies twisted so the map has degree zero. Used for annihilators.
fn generator_diagonal(m: &GradedModule) -> (GradedMap, GradedMap) {
    let base = m.base();
    let a = m.presentation();
    let tw = a.target();
    let g = tw.len();
    let mut target = Vec::with_capacity(g * g);
    let mut rel_src = Vec::new();
    let mut rel_cols = Vec::new();
    for j in 0..g {
        for &t in tw {
            target.push(t - tw[j]);
        }
        for (i, c) in a.columns().iter().enumerate() {
            rel_src.push(a.source()[i] - tw[j]);
            rel_cols.push(Vector {
                terms: c
                    .terms
                    .iter()
                    .map(|t| VTerm {
                        pos: t.pos + (j * g) as u32,
                        ..*t
                    })
                    .collect(),
            });
        }
    }
    let col = Vector {
        terms: (0..g)
            .map(|j| VTerm {
                coef: 1,
                mono: Monomial::ONE,
                pos: (j * g + j) as u32,
            })
            .collect(),
    };
    let psi = GradedMap::from_columns(base, vec![0], target.clone(), vec![col]);
    let rels = GradedMap::from_columns(base, rel_src, target, rel_cols);
    (psi, rels)
}

/// `ann(M) = (0 :_R M)`.
pub fn annihilator(m: &GradedModule) -> Result<Ideal> {
    let m = m.minimize()?;
    let base = m.base();
    if m.num_generators() == 0 {
        return Ok(Ideal::unit(base));
    }
    let (psi, rels) = generator_diagonal(&m);
    let k = preimage(&psi, Some(&rels))?;
    let gens = k
        .columns()
        .iter()
        .map(|c| {
            Polynomial::from_terms(
                base.ambient(),
                c.terms.iter().map(|t| (t.coef, t.mono)).collect(),
            )
        })
        .collect();
    Ideal::new(base, gens)
}

/// Columns generating `(N :_{F0} a)` for a submodule `N ⊇ im(A)` of `F0`
/// given by generators.
fn colon_step(m: &GradedModule, n_gens: &GradedMap, a: &Ideal) -> Result<GradedMap> {
    let base = m.base();
    let tw = m.generator_degrees();
    let g = tw.len();
    let mut target = Vec::new();
    let mut rel_src = Vec::new();
    let mut rel_cols = Vec::new();
    let mut psi_cols = vec![Vec::new(); g];
    for (k, f) in a.generators().iter().enumerate() {
        let d = f.homogeneous_degree().unwrap_or(0) as i32;
        for &t in tw {
            target.push(t - d);
        }
        for (i, c) in n_gens.columns().iter().enumerate() {
            rel_src.push(n_gens.source()[i] - d);
            rel_cols.push(Vector {
                terms: c
                    .terms
                    .iter()
                    .map(|t| VTerm {
                        pos: t.pos + (k * g) as u32,
                        ..*t
                    })
                    .collect(),
            });
        }
        for (j, col) in psi_cols.iter_mut().enumerate() {
            col.extend(f.terms().iter().map(|&(c, mono)| VTerm {
                coef: c,
                mono,
                pos: (k * g + j) as u32,
            }));
        }
    }
    let field = base.field();
    let order = base.term_order();
    let psi_cols = psi_cols
        .into_iter()
        .map(|t| Vector::from_terms(field, order, t))
        .collect();
    let psi = GradedMap::from_columns(base, tw.to_vec(), target.clone(), psi_cols);
    let rels = GradedMap::from_columns(base, rel_src, target, rel_cols);
    preimage(&psi, Some(&rels))
}

/// Result of saturating a module at an ideal.
#[derive(Debug, Clone)]
pub struct Saturation {
    /// `H^0_a(M) = (0 :_M a^∞)`.
    pub torsion: GradedModule,
    /// `M / H^0_a(M)`.
    pub quotient: GradedModule,
    /// Number of colon steps until the chain stabilized.
    pub steps: usize,
}

/// `(0 :_M a^∞)` by iterating `N -> (N :_{F0} a)` from `N = im(A)` until stable.
pub fn saturate(m: &GradedModule, a: &Ideal) -> Result<Saturation> {
    let m = m.minimize()?;
    let base = m.base();
    let pres = m.presentation().clone();
    if a.is_zero() {
        return Ok(Saturation {
            torsion: GradedModule::zero(base),
            quotient: m,
            steps: 0,
        });
    }
    let mut cur = pres.clone();
    let mut steps = 0;
    loop {
        let next = colon_step(&m, &cur, a)?;
        let cur_mod = GradedModule::coker(cur.clone());
        let grew = next.columns().iter().try_fold(false, |acc, c| {
            Ok::<_, Error>(acc || !cur_mod.is_zero_element(c)?)
        })?;
        steps += 1;
        if !grew {
            break;
        }
        let all = cur.concat(&next)?;
        let keep = all.minimal_columns()?;
        cur = all.select_columns(&keep);
    }
    let torsion = subquotient(&cur, Some(&pres))?;
    let quotient = GradedModule::coker(cur).minimize()?;
    Ok(Saturation {
        torsion,
        quotient,
        steps,
    })
}

/// Koszul complex `0 -> K_c -> ... -> K_1 -> K_0 -> 0` on homogeneous
/// elements; returns `d_1 .. d_c`. `K_i` has the `i`-subsets as basis in
/// lexicographic order and `d(e_S) = sum_p (-1)^p f_{s_p} e_{S - s_p}`.
pub fn koszul(base: &Arc<QuotientRing>, seq: &[Polynomial]) -> Result<Vec<GradedMap>> {
    let c = seq.len();
    let mut degs = Vec::with_capacity(c);
    for f in seq {
        if !f.is_zero() && !f.is_homogeneous() {
            return Err(Error::Unsupported(format!("{f} is not homogeneous")));
        }
        degs.push(f.homogeneous_degree().unwrap_or(0) as i32);
    }
    let field = base.field();
    let order = base.term_order();
    let mut maps = Vec::with_capacity(c);
    for i in 1..=c {
        let src_sets = subsets(c, i);
        let tgt_sets = subsets(c, i - 1);
        let index = |s: &[usize]| tgt_sets.iter().position(|t| t == s).unwrap() as u32;
        let src: Vec<i32> = src_sets
            .iter()
            .map(|s| s.iter().map(|&k| degs[k]).sum())
            .collect();
        let tgt: Vec<i32> = tgt_sets
            .iter()
            .map(|s| s.iter().map(|&k| degs[k]).sum())
            .collect();
        let mut cols = Vec::with_capacity(src_sets.len());
        for s in &src_sets {
            let mut terms = Vec::new();
            for (p, &k) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != k).collect();
                let pos = index(&rest);
                let f = if p % 2 == 0 {
                    seq[k].clone()
                } else {
                    seq[k].neg()
                };
                terms.extend(
                    f.terms()
                        .iter()
                        .map(|&(coef, mono)| VTerm { coef, mono, pos }),
                );
            }
            cols.push(Vector::from_terms(field, order, terms));
        }
        maps.push(GradedMap::from_columns(base, src, tgt, cols));
    }
    Ok(maps)
}

/// `H_i(f; M)`, Koszul homology of `M` on the sequence `f`.
pub fn koszul_homology(m: &GradedModule, seq: &[Polynomial], i: usize) -> Result<GradedModule> {
    let m = m.minimize()?;
    let base = m.base();
    let c = seq.len();
    if i > c {
        return Ok(GradedModule::zero(base));
    }
    let k = koszul(base, seq)?;
    let b = m.presentation();
    let id_g0 = GradedMap::identity(base, b.target().to_vec());
    let twists_k = |j: usize| -> Vec<i32> {
        if j == 0 {
            vec![0]
        } else {
            k[j - 1].source().to_vec()
        }
    };
    let ki = GradedMap::identity(base, twists_k(i));
    let gy = ki.kron(&id_g0)?.source().to_vec();
    let phi = if i < c {
        Some(k[i].kron(&id_g0)?)
    } else {
        None
    };
    let psi = if i > 0 {
        Some(k[i - 1].kron(&id_g0)?)
    } else {
        None
    };
    let py = ki.kron(b)?;
    let pz = if i > 0 {
        Some(GradedMap::identity(base, twists_k(i - 1)).kron(b)?)
    } else {
        None
    };
    homology(
        base,
        &gy,
        phi.as_ref(),
        psi.as_ref(),
        Some(&py),
        pz.as_ref(),
    )
}

/// `Tor_i^R(A, B)` via a resolution of `A`.
pub fn tor(i: usize, a: &GradedModule, b: &GradedModule) -> Result<GradedModule> {
    check_same_base(a, b)?;
    let res = Resolution::compute(a, Over::Quotient, i + 1)?;
    tor_with(&res, i, b)
}

pub(crate) fn tor_with(res: &Resolution, i: usize, b: &GradedModule) -> Result<GradedModule> {
    let base = res.base().clone();
    let b = b.minimize()?;
    let pb = b.presentation();
    let id_g0 = GradedMap::identity(&base, pb.target().to_vec());
    let fi = GradedMap::identity(&base, res.free_twists(i)?);
    let gy = fi.kron(&id_g0)?.source().to_vec();
    let phi = res.differential(i + 1)?.kron(&id_g0)?;
    let psi = if i > 0 {
        Some(res.differential(i)?.kron(&id_g0)?)
    } else {
        None
    };
    let py = fi.kron(pb)?;
    let pz = if i > 0 {
        Some(GradedMap::identity(&base, res.free_twists(i - 1)?).kron(pb)?)
    } else {
        None
    };
    homology(&base, &gy, Some(&phi), psi.as_ref(), Some(&py), pz.as_ref())
}

/// `Ext^i_R(A, B)` via a resolution of `A`.
pub fn ext(i: usize, a: &GradedModule, b: &GradedModule) -> Result<GradedModule> {
    check_same_base(a, b)?;
    let res = Resolution::compute(a, Over::Quotient, i + 1)?;
    ext_with(&res, i, b)
}

pub(crate) fn ext_with(res: &Resolution, i: usize, b: &GradedModule) -> Result<GradedModule> {
    let base = res.base().clone();
    let b = b.minimize()?;
    let pb = b.presentation();
    let id_g0 = GradedMap::identity(&base, pb.target().to_vec());
    let dual = |t: Vec<i32>| -> Vec<i32> { t.into_iter().map(|x| -x).collect() };
    let fi = GradedMap::identity(&base, dual(res.free_twists(i)?));
    let gy = fi.kron(&id_g0)?.source().to_vec();
    let phi = if i > 0 {
        Some(res.differential(i)?.transpose().kron(&id_g0)?)
    } else {
        None
    };
    let psi = res.differential(i + 1)?.transpose().kron(&id_g0)?;
    let py = fi.kron(pb)?;
    let pz = GradedMap::identity(&base, dual(res.free_twists(i + 1)?)).kron(pb)?;
    homology(&base, &gy, phi.as_ref(), Some(&psi), Some(&py), Some(&pz))
}

/// `Ext^q_S(M, S)` over the ambient polynomial ring for `q = 0..=n`.
pub fn ambient_duals(m: &GradedModule) -> Result<Vec<GradedModule>> {
    let res = m.ambient_resolution()?;
    let base = res.base().clone();
    let n = base.nvars();
    let dual = |t: Vec<i32>| -> Vec<i32> { t.into_iter().map(|x| -x).collect() };
    let mut out = Vec::with_capacity(n + 1);
    for q in 0..=n {
        let gy = dual(res.free_twists(q)?);
        let phi = if q > 0 {
            Some(res.differential(q)?.transpose())
        } else {
            None
        };
        let psi = res.differential(q + 1)?.transpose();
        out.push(homology(&base, &gy, phi.as_ref(), Some(&psi), None, None)?);
    }
    Ok(out)
}

/// The relation matrix of the ideal's generators, for presenting ideals by hand.
pub fn ideal_module(base: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<GradedModule> {
    GradedModule::ideal(base, gens)
}
