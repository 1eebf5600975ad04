//! Witness assembly for Cartesian products.
//!
//! `Θ(A,F,L)` is the collection of index sets `M = {t(1)<…<t(m)}` for
//! which some `a(1..m+1)` lands every `f ∈ F` in `A ∩ σ(L)`. The
//! constructions below need a two-sided identity `e`; instances must be
//! built with [`PsgInstance::adjoin_identity`] (or be products of such).

use itertools::Itertools;
use thiserror::Error;

use crate::bits;
use crate::jcr::{self, Check, JcrError, Witness};
use crate::outcome::{Bounds, SearchOutcome};
use crate::psg::{ElemId, PsgInstance};
use crate::ramsey::{self, BlockSeq, RamseyError};
use crate::sequences::{self, SeqPrefix};
use crate::set::ElemSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("instance has no two-sided identity")]
    NoIdentity,
    #[error("instance is not a product")]
    NotAProduct,
    #[error("factors of the product differ")]
    FactorsDiffer,
    #[error("witness is invalid for the derived family: {0}")]
    WitnessInvalid(String),
    #[error("projected witness is invalid: {0}")]
    ProjectionWitnessInvalid(String),
    #[error("no R ⊆ [1..{q}] lies in both Θ sets")]
    NoCommonR { q: usize },
    #[error("radius for the {0} factor is unavailable within the bounds")]
    RadiusUnavailable(&'static str),
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error(transparent)]
    Jcr(#[from] JcrError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
}

/// Tries to show `M ∈ Θ(A,F,L)`: the canonical-least `a`-tuple with `t = M`.
pub fn theta_contains(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    m_set: &[usize],
) -> Result<SearchOutcome<Vec<ElemId>>, ProductError> {
    if m_set.is_empty() {
        return Err(ProductError::EmptyIndexSet);
    }
    let mut t = m_set.to_vec();
    t.sort_unstable();
    t.dedup();
    Ok(match jcr::witness_with_t(psg, a, l, fam, &t)? {
        Some(w) => SearchOutcome::Found(w.a),
        None => SearchOutcome::BoundExhausted(
            Bounds::new().with("m", t.len()).with("universe", psg.len()),
        ),
    })
}

/// `g_f(n) = ∏_{i∈H(n)} f(i)`, that is `f(b(n,1))*e*f(b(n,2))*…*e*f(b(n,α_n))`.
pub fn block_family(
    psg: &PsgInstance,
    fam: &[SeqPrefix],
    h: &BlockSeq,
) -> Result<Vec<SeqPrefix>, ProductError> {
    fam.iter()
        .map(|f| {
            let vals = h
                .blocks()
                .iter()
                .map(|&b| {
                    let idx: Vec<usize> =
                        bits::members(b).into_iter().map(|x| x as usize).collect();
                    f.fp(psg, &idx)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ProductError::WitnessInvalid(e.to_string()))?;
            SeqPrefix::new(psg, vals).map_err(|e| ProductError::WitnessInvalid(e.to_string()))
        })
        .collect()
}

/// Rewrites a witness for the block family `{g_f}` as a witness for `F`
/// itself: `M = ⋃_j H(t(j))`, and `c(i)` is `a(j)` when `s(i)` opens the
/// block `H(t(j))`, `e` otherwise, with `c(p+1) = a(m+1)`. The two
/// interleaved products agree element for element.
pub fn theta_block_transform(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    h: &BlockSeq,
    w: &Witness,
) -> Result<(Vec<ElemId>, Vec<usize>), ProductError> {
    let e = psg.identity().ok_or(ProductError::NoIdentity)?;
    let g = block_family(psg, fam, h)?;
    match jcr::witness_check(psg, a, l, &g, w)? {
        Check::Ok => {}
        fail => return Err(ProductError::WitnessInvalid(format!("{fail:?}"))),
    }
    let mut c = Vec::new();
    let mut m_set = Vec::new();
    for (j, &t) in w.t.iter().enumerate() {
        for (i, x) in bits::members(h.blocks()[t - 1]).into_iter().enumerate() {
            c.push(if i == 0 { w.a[j] } else { e });
            m_set.push(x as usize);
        }
    }
    c.push(*w.a.last().unwrap());
    let cw = Witness::new(c, m_set)?;
    for (f, gf) in fam.iter().zip(&g) {
        if cw.product(psg, f) != w.product(psg, gf) {
            return Err(ProductError::WitnessInvalid(
                "block rewrite changed a product".into(),
            ));
        }
    }
    Ok((cw.a, cw.t))
}

/// `π₁[X] ∪ π₂[X]` for ids of `S×S`, deduplicated and sorted.
fn both_projections(prod: &PsgInstance, xs: &[ElemId]) -> Vec<ElemId> {
    xs.iter()
        .flat_map(|&x| {
            let (a, b) = prod.unpair(x);
            [a, b]
        })
        .sorted()
        .dedup()
        .collect()
}

fn projection(prod: &PsgInstance, xs: &[ElemId], left: bool) -> Vec<ElemId> {
    xs.iter()
        .map(|&x| {
            let (a, b) = prod.unpair(x);
            if left {
                a
            } else {
                b
            }
        })
        .sorted()
        .dedup()
        .collect()
}

/// Projected pool `{π₁∘f} ∪ {π₂∘f}` of a pool over `S×S`, duplicates removed
/// (first occurrence kept).
pub fn projected_pool(
    prod: &PsgInstance,
    fam: &[SeqPrefix],
) -> Result<Vec<SeqPrefix>, ProductError> {
    let mut out: Vec<SeqPrefix> = Vec::new();
    for f in fam {
        let (p, q) = sequences::project_prefix(prod, f).map_err(|_| ProductError::NotAProduct)?;
        for g in [p, q] {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn same_factors(prod: &PsgInstance) -> Result<&PsgInstance, ProductError> {
    let (l, r) = (
        prod.left().ok_or(ProductError::NotAProduct)?,
        prod.right().ok_or(ProductError::NotAProduct)?,
    );
    if std::sync::Arc::ptr_eq(l, r) || l.describe() == r.describe() {
        Ok(l)
    } else {
        Err(ProductError::FactorsDiffer)
    }
}

/// Diagonal witness `b(i) = (a(i), a(i))` in `S×S` from a witness `w` for
/// the projected pool into `A ∩ σ(π₁[L] ∪ π₂[L])`.
pub fn a_times_a_transfer(
    prod: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    w: &Witness,
) -> Result<Witness, ProductError> {
    let base = same_factors(prod)?;
    let g = projected_pool(prod, fam)?;
    let m = both_projections(prod, l);
    match jcr::witness_check(base, a, &m, &g, w)? {
        Check::Ok => {}
        fail => return Err(ProductError::ProjectionWitnessInvalid(format!("{fail:?}"))),
    }
    let b: Vec<ElemId> = w.a.iter().map(|&x| prod.pair_id(x, x)).collect();
    let out = Witness::new(b, w.t.clone())?;
    let aa = prod.product_set(a, a);
    match jcr::witness_check(prod, &aa, l, fam, &out)? {
        Check::Ok => Ok(out),
        fail => Err(ProductError::WitnessInvalid(format!(
            "diagonal witness: {fail:?}"
        ))),
    }
}

/// Search bounds for [`product_cr_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductBounds {
    pub m_max: usize,
    pub r_max: usize,
    /// Largest `q` the finite-unions search may try.
    pub q_max: usize,
}

impl Default for ProductBounds {
    fn default() -> Self {
        ProductBounds {
            m_max: jcr::DEFAULT_M_MAX,
            r_max: jcr::DEFAULT_R_MAX,
            q_max: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
    pub witness: Witness,
    pub left: Vec<ElemId>,
    pub right: Vec<ElemId>,
    pub u: usize,
    pub v: usize,
    pub q: usize,
    pub bounds: Bounds,
}

/// Assembles `c(i) = (a(i), b(i))` from `a ∈` witnesses of `R ∈ Θ₁` and
/// `b ∈` witnesses of `R ∈ Θ₂`, with `R ⊆ [1..q]` the first common index set
/// by size, then lexicographically.
#[allow(clippy::too_many_arguments)]
pub fn product_cr_witness(
    prod: &PsgInstance,
    a: &ElemSet,
    b: &ElemSet,
    k: usize,
    l: &[ElemId],
    fam: &[SeqPrefix],
    bounds: ProductBounds,
) -> Result<ProductWitness, ProductError> {
    let (s, t) = (
        prod.left().ok_or(ProductError::NotAProduct)?,
        prod.right().ok_or(ProductError::NotAProduct)?,
    );
    if s.identity().is_none() || t.identity().is_none() {
        return Err(ProductError::NoIdentity);
    }
    let mut g = Vec::new();
    let mut h = Vec::new();
    for f in fam {
        let (p, q) = sequences::project_prefix(prod, f).map_err(|_| ProductError::NotAProduct)?;
        g.push(p);
        h.push(q);
    }
    let shortest = fam.iter().map(|f| f.len()).min().unwrap_or(0);
    let r_max = bounds.r_max.min(shortest);
    let l1 = projection(prod, l, true);
    let l2 = projection(prod, l, false);
    let u = jcr::k_cr_radius(s, a, k, &l1, &g, bounds.m_max, r_max)?
        .radius
        .ok_or(ProductError::RadiusUnavailable("left"))?;
    let v = jcr::k_cr_radius(t, b, k, &l2, &h, bounds.m_max, r_max)?
        .radius
        .ok_or(ProductError::RadiusUnavailable("right"))?;
    let q = ramsey::ip_star_intersection_q(u, v, bounds.q_max)?;
    let top = q.min(shortest);
    let out_bounds = Bounds::new()
        .with("k", k)
        .with("m_max", bounds.m_max)
        .with("r_max", r_max)
        .with("q", q)
        .with("pool", fam.len());
    for size in 1..=top {
        for r_set in (1..=top).combinations(size) {
            let left = match theta_contains(s, a, &l1, &g, &r_set)? {
                SearchOutcome::Found(x) => x,
                _ => continue,
            };
            let right = match theta_contains(t, b, &l2, &h, &r_set)? {
                SearchOutcome::Found(x) => x,
                _ => continue,
            };
            let c: Vec<ElemId> = left
                .iter()
                .zip(&right)
                .map(|(&x, &y)| prod.pair_id(x, y))
                .collect();
            let witness = Witness::new(c, r_set)?;
            let ab = prod.product_set(a, b);
            match jcr::witness_check(prod, &ab, l, fam, &witness)? {
                Check::Ok => {}
                fail => {
                    return Err(ProductError::WitnessInvalid(format!(
                        "assembled witness: {fail:?}"
                    )))
                }
            }
            return Ok(ProductWitness {
                witness,
                left,
                right,
                u,
                v,
                q,
                bounds: out_bounds,
            });
        }
    }
    Err(ProductError::NoCommonR { q })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::psg::Element;

    fn adjoined_disjoint(n: u32) -> (Arc<PsgInstance>, Arc<PsgInstance>) {
        let base = Arc::new(PsgInstance::finset_disjoint(n).unwrap());
        let e = Arc::new(PsgInstance::adjoin_identity(&base).unwrap());
        (base, e)
    }

    fn sid(e: &PsgInstance, members: &[u32]) -> ElemId {
        e.id_of(&Element::SmallSet(members.to_vec())).unwrap()
    }

    fn seq(e: &PsgInstance, lists: &[&[u32]]) -> SeqPrefix {
        SeqPrefix::new(e, lists.iter().map(|m| sid(e, m)).collect()).unwrap()
    }

    #[test]
    fn theta_examples() {
        let (_, e) = adjoined_disjoint(10);
        let all = ElemSet::full(e.len());
        let l = [sid(&e, &[1])];
        let f = vec![seq(&e, &[&[2], &[3]])];
        let a = theta_contains(&e, &all, &l, &f, &[1])
            .unwrap()
            .into_found()
            .unwrap();
        assert_eq!(a.len(), 2);
        let empty = ElemSet::empty(e.len());
        assert!(!theta_contains(&e, &empty, &l, &f, &[1]).unwrap().is_found());
        let short = vec![seq(&e, &[&[2]])];
        assert!(theta_contains(&e, &all, &l, &short, &[1, 2]).is_err());
    }

    #[test]
    fn block_transform_examples() {
        let (_, e) = adjoined_disjoint(8);
        let id = e.identity().unwrap();
        let all = ElemSet::full(e.len());
        let l = [sid(&e, &[1])];
        let f = vec![seq(&e, &[&[2], &[3], &[4]])];

        let h = BlockSeq::singletons(2);
        let w = Witness::new(vec![sid(&e, &[5]), sid(&e, &[6])], vec![2]).unwrap();
        let (c, m) = theta_block_transform(&e, &all, &l, &f, &h, &w).unwrap();
        assert_eq!((c, m), (w.a.clone(), vec![2]));

        let h = BlockSeq::new(vec![0b11, 0b100]).unwrap();
        let w = Witness::new(vec![sid(&e, &[5]), sid(&e, &[6])], vec![1]).unwrap();
        let (c, m) = theta_block_transform(&e, &all, &l, &f, &h, &w).unwrap();
        assert_eq!(m, vec![1, 2]);
        assert_eq!(c, vec![sid(&e, &[5]), id, sid(&e, &[6])]);

        let bad = Witness::new(vec![sid(&e, &[2]), sid(&e, &[6])], vec![1]).unwrap();
        assert!(matches!(
            theta_block_transform(&e, &all, &l, &f, &h, &bad),
            Err(ProductError::WitnessInvalid(_))
        ));
    }

    #[test]
    fn a_times_a_examples() {
        let (_, e) = adjoined_disjoint(6);
        let p = PsgInstance::product(&e, &e).unwrap();
        let all = ElemSet::full(e.len());
        let f = seq(&e, &[&[2], &[3]]);
        let g = seq(&e, &[&[4], &[5]]);
        let pf = vec![sequences::pair_prefixes(&p, &f, &g).unwrap()];
        let l = [p.pair_id(sid(&e, &[1]), sid(&e, &[1]))];
        let pool = projected_pool(&p, &pf).unwrap();
        assert_eq!(pool.len(), 2);
        let m = [sid(&e, &[1])];
        let cr = jcr::k_cr_radius(&e, &all, 2, &m, &pool, 2, 2).unwrap();
        let w = cr.per_family[0].1.clone();
        let out = a_times_a_transfer(&p, &all, &l, &pf, &w).unwrap();
        for (x, y) in out.a.iter().zip(&w.a) {
            assert_eq!(p.unpair(*x), (*y, *y));
        }
        let bad = Witness::new(vec![sid(&e, &[2]), sid(&e, &[6])], vec![1]).unwrap();
        assert!(matches!(
            a_times_a_transfer(&p, &all, &l, &pf, &bad),
            Err(ProductError::ProjectionWitnessInvalid(_))
        ));
    }

    #[test]
    fn product_assembly() {
        let (_, s) = adjoined_disjoint(5);
        let base = Arc::new(PsgInstance::finset_ordered_range(5).unwrap());
        let t = Arc::new(PsgInstance::adjoin_identity(&base).unwrap());
        let p = PsgInstance::product(&s, &t).unwrap();
        let tid = |m: &[u32]| t.id_of(base.element(base.set_id(m).unwrap())).unwrap();
        let f = seq(&s, &[&[2], &[3], &[4]]);
        let g = SeqPrefix::new(&t, vec![tid(&[2]), tid(&[3]), tid(&[4])]).unwrap();
        let pf = vec![sequences::pair_prefixes(&p, &f, &g).unwrap()];
        let l = [p.pair_id(sid(&s, &[1]), tid(&[1]))];
        let (a, b) = (ElemSet::full(s.len()), ElemSet::full(t.len()));
        let pw = product_cr_witness(&p, &a, &b, 1, &l, &pf, ProductBounds::default()).unwrap();
        let ab = p.product_set(&a, &b);
        assert!(jcr::witness_check(&p, &ab, &l, &pf, &pw.witness)
            .unwrap()
            .is_ok());
        assert_eq!(pw.q, 1);

        let none = ElemSet::empty(t.len());
        assert!(product_cr_witness(&p, &a, &none, 1, &l, &pf, ProductBounds::default()).is_err());
    }
}
