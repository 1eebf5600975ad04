//! J / CR / k-CR witnesses: checking, search, the uniform-index properties
//! (†) and (‡), and the constructive witness transformations.
//!
//! A witness `(m, a(1..m+1), t(1..m))` for a family `F` of prefixes, a set
//! `A` and a nonempty `L` makes every interleaved product
//! `a(1)*f(t(1))*a(2)*…*a(m)*f(t(m))*a(m+1)` (left to right) defined and
//! a member of `A ∩ σ(L)`.
//!
//! Infinite families of adequate sequences are replaced by explicit finite
//! pools of prefixes; all radii are pool-relative.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use num_rational::Rational64;
use rayon::prelude::*;
use thiserror::Error;

use crate::outcome::{Bounds, Proof, SearchOutcome};
use crate::psg::{ElemId, Element, Family, PsgInstance};
use crate::sequences::{self, SeqPrefix};
use crate::set::ElemSet;

pub const DEFAULT_M_MAX: usize = 3;
pub const DEFAULT_R_MAX: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JcrError {
    #[error("prefix #{member} has length {len}, witness needs {need}")]
    PrefixTooShort {
        member: usize,
        len: usize,
        need: usize,
    },
    #[error("pool member #{member} has length {len}, radius {r} needs at least that many terms")]
    PoolNotRClosed { member: usize, len: usize, r: usize },
    #[error("L must be nonempty")]
    EmptyL,
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("no a in σ(L) with every f(t) in σ(L*a)")]
    NoSuitableA,
    #[error("σ(P) is empty at this truncation")]
    NoSuitableA2,
    #[error("composition {0} is undefined")]
    UndefinedComposition(&'static str),
    #[error("instance is not commutative")]
    NotCommutative,
    #[error("product is undefined: {0}")]
    UndefinedProduct(String),
    #[error("no prefix of length {0} with finite products in σ(M)")]
    NoHSequence(usize),
    #[error("witness does not satisfy its precondition: {0}")]
    WitnessInvalid(String),
    #[error("index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// `(m, a(1..m+1), t(1..m))`. Indices in `t` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub a: Vec<ElemId>,
    pub t: Vec<usize>,
}

impl Witness {
    pub fn new(a: Vec<ElemId>, t: Vec<usize>) -> Result<Self, JcrError> {
        if t.is_empty() {
            return Err(JcrError::MalformedWitness("m must be at least 1".into()));
        }
        if a.len() != t.len() + 1 {
            return Err(JcrError::MalformedWitness(format!(
                "{} a-entries for m={}",
                a.len(),
                t.len()
            )));
        }
        if t[0] == 0 || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(JcrError::MalformedWitness(
                "t must be strictly increasing and positive".into(),
            ));
        }
        Ok(Witness { a, t })
    }

    pub fn m(&self) -> usize {
        self.t.len()
    }

    pub fn max_t(&self) -> usize {
        *self.t.last().unwrap()
    }

    /// The interleaved product for `f`, or `None` at the first undefined step.
    pub fn product(&self, psg: &PsgInstance, f: &SeqPrefix) -> Option<ElemId> {
        let mut v = self.a[0];
        for (j, &t) in self.t.iter().enumerate() {
            v = psg.op(v, f.at(t))?;
            v = psg.op(v, self.a[j + 1])?;
        }
        Some(v)
    }

    pub fn show(&self, psg: &PsgInstance) -> String {
        let t: Vec<String> = self.t.iter().map(|t| t.to_string()).collect();
        format!(
            "m={}; a={}; t=[{}]",
            self.m(),
            psg.show_all(&self.a),
            t.join(",")
        )
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| format!("#{}", x.0)).collect();
        let t: Vec<String> = self.t.iter().map(|t| t.to_string()).collect();
        write!(
            f,
            "m={}; a=[{}]; t=[{}]",
            self.m(),
            a.join(","),
            t.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    /// Undefined at multiplication step `step` (1-based, counting every `*`).
    Undefined {
        step: usize,
    },
    NotInA(ElemId),
    NotInSigmaL(ElemId),
}

/// Result of [`witness_check`]: `Ok` or the first failing family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Ok,
    Fails { member: usize, reason: FailReason },
}

impl Check {
    pub fn is_ok(&self) -> bool {
        matches!(self, Check::Ok)
    }
}

/// `A ∩ σ(L)`.
pub fn goal_set(psg: &PsgInstance, a: &ElemSet, l: &[ElemId]) -> Result<ElemSet, JcrError> {
    let sl = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    Ok(sl.intersection(a))
}

fn check_closed(fam: &[SeqPrefix], r: usize) -> Result<(), JcrError> {
    match fam.iter().position(|f| f.len() < r) {
        Some(i) => Err(JcrError::PoolNotRClosed {
            member: i,
            len: fam[i].len(),
            r,
        }),
        None => Ok(()),
    }
}

/// Evaluates `w` on every member of `fam` against `A ∩ σ(L)`.
pub fn witness_check(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    w: &Witness,
) -> Result<Check, JcrError> {
    if l.is_empty() {
        return Err(JcrError::EmptyL);
    }
    if let Some(i) = fam.iter().position(|f| f.len() < w.max_t()) {
        return Err(JcrError::PrefixTooShort {
            member: i,
            len: fam[i].len(),
            need: w.max_t(),
        });
    }
    for (i, f) in fam.iter().enumerate() {
        let mut v = w.a[0];
        let mut step = 0;
        for (j, &t) in w.t.iter().enumerate() {
            for y in [f.at(t), w.a[j + 1]] {
                step += 1;
                match psg.op(v, y) {
                    Some(next) => v = next,
                    None => {
                        return Ok(Check::Fails {
                            member: i,
                            reason: FailReason::Undefined { step },
                        })
                    }
                }
            }
        }
        if !a.contains(v) {
            return Ok(Check::Fails {
                member: i,
                reason: FailReason::NotInA(v),
            });
        }
        if !psg.in_sigma(v, l) {
            return Ok(Check::Fails {
                member: i,
                reason: FailReason::NotInSigmaL(v),
            });
        }
    }
    Ok(Check::Ok)
}

/// Depth-first search for the `a`-tuple of a witness with fixed `t`.
///
/// If `v*x ∈ σ(L)` then `v ∈ σ(L)` (for `l ∈ L`, `l*(v*x)` defined forces
/// `l*v` defined), so every left partial product of a witness lies in
/// `σ(L)`. That prunes every intermediate value, not just the last.
struct TupleSearch<'a> {
    psg: &'a PsgInstance,
    sigma_l: &'a ElemSet,
    goal: &'a ElemSet,
    fam: &'a [SeqPrefix],
    t: &'a [usize],
    dead: HashSet<(usize, Vec<ElemId>)>,
}

impl TupleSearch<'_> {
    fn run(mut self) -> Option<Vec<ElemId>> {
        let mut a = Vec::with_capacity(self.t.len() + 1);
        let firsts: Vec<ElemId> = self.sigma_l.iter().collect();
        for x in firsts {
            let Some(vals) = self.advance(None, x, 0) else {
                continue;
            };
            a.push(x);
            if self.dfs(&vals, 1, &mut a) {
                return Some(a);
            }
            a.pop();
        }
        None
    }

    /// Values after multiplying by `x` and then by `f(t(step+1))`.
    fn advance(&self, vals: Option<&[ElemId]>, x: ElemId, step: usize) -> Option<Vec<ElemId>> {
        let psg = self.psg;
        let t = self.t[step];
        self.fam
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let v = match vals {
                    None => x,
                    Some(vs) => psg.op(vs[i], x).filter(|v| self.sigma_l.contains(*v))?,
                };
                psg.op(v, f.at(t)).filter(|v| self.sigma_l.contains(*v))
            })
            .collect()
    }

    fn dfs(&mut self, vals: &[ElemId], step: usize, a: &mut Vec<ElemId>) -> bool {
        let psg = self.psg;
        if step == self.t.len() {
            let last = psg.ids().find(|&x| {
                vals.iter()
                    .all(|&v| psg.op(v, x).is_some_and(|p| self.goal.contains(p)))
            });
            return match last {
                Some(x) => {
                    a.push(x);
                    true
                }
                None => false,
            };
        }
        let key = (step, vals.to_vec());
        if self.dead.contains(&key) {
            return false;
        }
        for x in psg.ids() {
            let Some(next) = self.advance(Some(vals), x, step) else {
                continue;
            };
            a.push(x);
            if self.dfs(&next, step + 1, a) {
                return true;
            }
            a.pop();
        }
        self.dead.insert(key);
        false
    }
}

/// Largest element of `⋃L` for ordered-union instances.
fn ordered_max(psg: &PsgInstance, ids: &[ElemId]) -> Option<Rational64> {
    ids.iter()
        .map(|&x| match psg.element(x) {
            Element::RatSet(v) => v.last().copied(),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .and_then(|v| v.into_iter().max())
}

fn ordered_min(psg: &PsgInstance, x: ElemId) -> Option<Rational64> {
    match psg.element(x) {
        Element::RatSet(v) => v.first().copied(),
        _ => None,
    }
}

/// Certifies that no witness with `t(1) <= r` exists, for any `m`.
fn certify_empty(
    psg: &PsgInstance,
    sigma_l: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    r: usize,
) -> Option<Proof> {
    if let Family::FinSetOrderedUnion { .. } = psg.family() {
        // Need max ⋃L < min a(1) <= max a(1) < min f(t(1)) for every f.
        let lmax = ordered_max(psg, l)?;
        let closed = (1..=r).all(|t1| {
            fam.iter()
                .filter_map(|f| ordered_min(psg, f.at(t1)))
                .min()
                .is_some_and(|m| m <= lmax)
        });
        if closed {
            return Some(Proof::OrderedInterval { radius: r });
        }
    }
    let open = sigma_l.iter().any(|a1| {
        (1..=r).any(|t1| {
            fam.iter()
                .all(|f| psg.op(a1, f.at(t1)).is_some_and(|v| sigma_l.contains(v)))
        })
    });
    (!open).then_some(Proof::OpeningScan {
        radius: r,
        universe: psg.len(),
    })
}

/// `t`-tuples with `max t = top` and `m <= m_max`, by `m` then lexicographically.
fn tuples_with_max(top: usize, m_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 1..=m_max.min(top) {
        for mut c in (1..top).combinations(m - 1) {
            c.push(top);
            out.push(c);
        }
    }
    out
}

/// Searches for a witness with `max t <= r` and `m <= m_max`, in canonical
/// order: `max t`, then `m`, then `t`, then `a` lexicographically. A `Found`
/// result therefore has the least possible `max t`.
pub fn witness_search(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    r: usize,
    m_max: usize,
) -> Result<SearchOutcome<Witness>, JcrError> {
    if fam.is_empty() {
        return Err(JcrError::EmptyFamily);
    }
    check_closed(fam, r)?;
    let sigma_l = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    let goal = sigma_l.intersection(a);
    if let Some(proof) = certify_empty(psg, &sigma_l, l, fam, r) {
        return Ok(SearchOutcome::ProvenEmpty(proof));
    }
    if !goal.is_empty() {
        for top in 1..=r {
            let tuples = tuples_with_max(top, m_max);
            let hit = tuples.par_iter().find_map_first(|t| {
                TupleSearch {
                    psg,
                    sigma_l: &sigma_l,
                    goal: &goal,
                    fam,
                    t,
                    dead: HashSet::new(),
                }
                .run()
                .map(|a| Witness { a, t: t.clone() })
            });
            if let Some(w) = hit {
                let verdict = witness_check(psg, a, l, fam, &w)?;
                assert!(
                    verdict.is_ok(),
                    "search produced a witness that fails its check: {verdict:?}"
                );
                return Ok(SearchOutcome::Found(w));
            }
        }
    }
    Ok(SearchOutcome::BoundExhausted(
        Bounds::new().with("r", r).with("m_max", m_max),
    ))
}

/// The canonical-least `a`-tuple for a fixed index tuple `t`, if any.
pub fn witness_with_t(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    t: &[usize],
) -> Result<Option<Witness>, JcrError> {
    if fam.is_empty() {
        return Err(JcrError::EmptyFamily);
    }
    let probe = Witness::new(vec![ElemId(0); t.len() + 1], t.to_vec())?;
    if let Some(i) = fam.iter().position(|f| f.len() < probe.max_t()) {
        return Err(JcrError::PrefixTooShort {
            member: i,
            len: fam[i].len(),
            need: probe.max_t(),
        });
    }
    let sigma_l = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    let goal = sigma_l.intersection(a);
    if goal.is_empty() {
        return Ok(None);
    }
    let found = TupleSearch {
        psg,
        sigma_l: &sigma_l,
        goal: &goal,
        fam,
        t,
        dead: HashSet::new(),
    }
    .run();
    Ok(found.map(|a| Witness { a, t: t.to_vec() }))
}

/// Result of [`k_cr_radius`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrRadiusResult {
    /// Least radius that serves every subfamily, if any does within `r_max`.
    pub radius: Option<usize>,
    /// Witness per maximal subfamily (pool indices, increasing). Smaller
    /// subfamilies are served by the witness of any superset.
    pub per_family: Vec<(Vec<usize>, Witness)>,
    /// First subfamily without a witness and the outcome that says so.
    pub failure: Option<(Vec<usize>, SearchOutcome<Witness>)>,
    pub bounds: Bounds,
}

/// Subfamilies of the pool that need checking: all of size `min(k, |pool|)`.
/// A witness works for every subfamily of the family it was found for.
pub fn maximal_subfamilies(pool_len: usize, k: usize) -> Vec<Vec<usize>> {
    (0..pool_len).combinations(k.min(pool_len)).collect()
}

fn pick(pool: &[SeqPrefix], idx: &[usize]) -> Vec<SeqPrefix> {
    idx.iter().map(|&i| pool[i].clone()).collect()
}

/// Least `r <= r_max` such that every subfamily of at most `k` pool members
/// has a witness with `max t <= r` into `A ∩ σ(L)`.
#[allow(clippy::too_many_arguments)]
pub fn k_cr_radius(
    psg: &PsgInstance,
    a: &ElemSet,
    k: usize,
    l: &[ElemId],
    pool: &[SeqPrefix],
    m_max: usize,
    r_max: usize,
) -> Result<CrRadiusResult, JcrError> {
    if pool.is_empty() || k == 0 {
        return Err(JcrError::EmptyFamily);
    }
    check_closed(pool, r_max)?;
    let bounds = Bounds::new()
        .with("k", k)
        .with("m_max", m_max)
        .with("r_max", r_max)
        .with("pool", pool.len());
    let mut per_family = Vec::new();
    for idx in maximal_subfamilies(pool.len(), k) {
        match witness_search(psg, a, l, &pick(pool, &idx), r_max, m_max)? {
            SearchOutcome::Found(w) => per_family.push((idx, w)),
            other => {
                return Ok(CrRadiusResult {
                    radius: None,
                    per_family,
                    failure: Some((idx, other)),
                    bounds,
                })
            }
        }
    }
    let radius = per_family.iter().map(|(_, w)| w.max_t()).max();
    Ok(CrRadiusResult {
        radius,
        per_family,
        failure: None,
        bounds,
    })
}

/// Result of [`dagger_radius`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerResult {
    pub radius: Option<usize>,
    /// Least common index per maximal subfamily.
    pub indices: Vec<(Vec<usize>, usize)>,
    /// Closed-form upper bound `kd+1` for the disjoint-union family.
    pub guaranteed: Option<usize>,
    pub bounds: Bounds,
}

/// Bit `t-1` set when `f(t) ∈ σ(L)`, for `t <= r_max`.
fn good_indices(sigma_l: &ElemSet, f: &SeqPrefix, r_max: usize) -> u64 {
    (1..=r_max.min(64))
        .filter(|&t| sigma_l.contains(f.at(t)))
        .fold(0u64, |m, t| m | (1 << (t - 1)))
}

/// `|⋃L|` for the disjoint-union family.
fn union_size(psg: &PsgInstance, l: &[ElemId]) -> Option<usize> {
    let mut m = 0u64;
    for &x in l {
        m |= psg.mask_of(x)?;
    }
    Some(m.count_ones() as usize)
}

/// Least `r <= r_max` such that each subfamily of at most `k` pool members
/// has a common `t <= r` with every `f(t) ∈ σ(L)`.
///
/// In the disjoint-union family the blocks of a valid prefix are pairwise
/// disjoint, so each member meets `⋃L` at no more than `d = |⋃L|` indices
/// and `kd+1` indices always contain a common good one.
pub fn dagger_radius(
    psg: &PsgInstance,
    k: usize,
    l: &[ElemId],
    pool: &[SeqPrefix],
    r_max: usize,
) -> Result<DaggerResult, JcrError> {
    if pool.is_empty() || k == 0 {
        return Err(JcrError::EmptyFamily);
    }
    check_closed(pool, r_max)?;
    let sigma_l = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    let guaranteed = match psg.family() {
        Family::FinSetDisjointUnion { .. } => union_size(psg, l).map(|d| k * d + 1),
        _ => None,
    };
    let good: Vec<u64> = pool
        .iter()
        .map(|f| good_indices(&sigma_l, f, r_max))
        .collect();
    let bounds = Bounds::new()
        .with("k", k)
        .with("r_max", r_max)
        .with("pool", pool.len());
    let mut indices = Vec::new();
    for idx in maximal_subfamilies(pool.len(), k) {
        let common = idx.iter().fold(u64::MAX, |m, &i| m & good[i]);
        if common == 0 {
            return Ok(DaggerResult {
                radius: None,
                indices,
                guaranteed,
                bounds,
            });
        }
        indices.push((idx, common.trailing_zeros() as usize + 1));
    }
    let radius = indices.iter().map(|&(_, t)| t).max();
    Ok(DaggerResult {
        radius,
        indices,
        guaranteed,
        bounds,
    })
}

/// From a common index `t`: `a` is the least element of `σ(L)` with every
/// `f(t) ∈ σ(L*a)`, and `a(2)` the least element of
/// `σ({x*a*f(t) : x∈L, f∈F})`. Returns `(m=1, (a, a(2)), (t))`.
pub fn dagger_to_witness(
    psg: &PsgInstance,
    l: &[ElemId],
    fam: &[SeqPrefix],
    t: usize,
) -> Result<Witness, JcrError> {
    if fam.is_empty() {
        return Err(JcrError::EmptyFamily);
    }
    if let Some(f) = fam.iter().find(|f| t == 0 || t > f.len()) {
        return Err(JcrError::IndexOutOfRange(t, f.len()));
    }
    let sigma_l = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    let a = sigma_l
        .iter()
        .find(|&a| {
            let la: Vec<ElemId> = l.iter().map(|&x| psg.op(x, a).unwrap()).collect();
            fam.iter().all(|f| psg.in_sigma(f.at(t), &la))
        })
        .ok_or(JcrError::NoSuitableA)?;
    let mut p: Vec<ElemId> = l
        .iter()
        .flat_map(|&x| {
            let xa = psg.op(x, a).unwrap();
            fam.iter().map(move |f| psg.op(xa, f.at(t)).unwrap())
        })
        .collect();
    p.sort_unstable();
    p.dedup();
    let a2 = psg
        .ids()
        .find(|&y| psg.in_sigma(y, &p))
        .ok_or(JcrError::NoSuitableA2)?;
    Ok(Witness {
        a: vec![a, a2],
        t: vec![t],
    })
}

/// Least `r <= r_max` with `f(r) ∈ σ(L)` for every pool member.
pub fn has_ddagger(
    psg: &PsgInstance,
    l: &[ElemId],
    pool: &[SeqPrefix],
    r_max: usize,
) -> Result<Option<usize>, JcrError> {
    if pool.is_empty() {
        return Err(JcrError::EmptyFamily);
    }
    check_closed(pool, r_max)?;
    let sigma_l = psg.sigma(l).map_err(|_| JcrError::EmptyL)?;
    Ok((1..=r_max).find(|&r| pool.iter().all(|f| sigma_l.contains(f.at(r)))))
}

/// Turns a witness into `σ(H)` into one into `A ∩ σ(L)` by
/// `b(1) = s*a(1)`, `b(m+1) = a(m+1)*x`, `b(j) = a(j)` otherwise.
#[allow(clippy::too_many_arguments)]
pub fn ps_to_1cr_witness(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    h: &[ElemId],
    fam: &[SeqPrefix],
    s: ElemId,
    x: ElemId,
    w: &Witness,
) -> Result<Witness, JcrError> {
    if !h.contains(&s) {
        return Err(JcrError::WitnessInvalid("s is not in H".into()));
    }
    let mut b = w.a.clone();
    b[0] = psg
        .op(s, w.a[0])
        .ok_or(JcrError::UndefinedComposition("s*a(1)"))?;
    let last = b.len() - 1;
    b[last] = psg
        .op(w.a[last], x)
        .ok_or(JcrError::UndefinedComposition("a(m+1)*x"))?;
    let into_h = witness_check(psg, &ElemSet::full(psg.len()), h, fam, w)?;
    if !into_h.is_ok() {
        return Err(JcrError::WitnessInvalid(format!(
            "not a witness into σ(H): {into_h:?}"
        )));
    }
    let out = Witness {
        a: b,
        t: w.t.clone(),
    };
    match witness_check(psg, a, l, fam, &out)? {
        Check::Ok => Ok(out),
        fail => Err(JcrError::WitnessInvalid(format!(
            "s*T*x misses A∩σ(L): {fail:?}"
        ))),
    }
}

/// `b = ∏ a(j)` and `H = {t(1),…,t(m)}`; in a commutative instance
/// `b * ∏_{t∈H} f(t)` equals the interleaved product.
pub fn normalize_commutative(
    psg: &PsgInstance,
    w: &Witness,
    fam: &[SeqPrefix],
) -> Result<(ElemId, Vec<usize>), JcrError> {
    if !psg.is_commutative() {
        return Err(JcrError::NotCommutative);
    }
    let b = psg
        .product_of(&w.a)
        .ok_or_else(|| JcrError::UndefinedProduct("∏ a(j)".into()))?;
    for (i, f) in fam.iter().enumerate() {
        if f.len() < w.max_t() {
            return Err(JcrError::PrefixTooShort {
                member: i,
                len: f.len(),
                need: w.max_t(),
            });
        }
        let lhs = f
            .fp(psg, &w.t)
            .ok()
            .and_then(|p| psg.op(b, p))
            .ok_or_else(|| JcrError::UndefinedProduct(format!("b*FP for member #{i}")))?;
        if w.product(psg, f) != Some(lhs) {
            return Err(JcrError::UndefinedProduct(format!(
                "interleaved product for member #{i}"
            )));
        }
    }
    Ok((b, w.t.clone()))
}

/// The auxiliary prefix `h` of length `r` with `FP(h) ⊆ σ(M)`, where `M`
/// holds every finite product of every pool member over `[1..r]`.
pub fn commutative_aux(
    psg: &PsgInstance,
    fam: &[SeqPrefix],
    r: usize,
) -> Result<SeqPrefix, JcrError> {
    if fam.is_empty() {
        return Err(JcrError::EmptyFamily);
    }
    check_closed(fam, r)?;
    let mut m: Vec<ElemId> = fam.iter().flat_map(|f| f.truncate(r).fp_set(psg)).collect();
    m.sort_unstable();
    m.dedup();
    let target = psg.sigma(&m).map_err(|_| JcrError::EmptyFamily)?;
    sequences::find_fp_sequence(psg, &target, r)
        .into_found()
        .ok_or(JcrError::NoHSequence(r))
}

/// `g_f(j) = f(j)*h(j)` for `j <= len(h)`.
pub fn shifted_family(
    psg: &PsgInstance,
    fam: &[SeqPrefix],
    h: &SeqPrefix,
) -> Result<Vec<SeqPrefix>, JcrError> {
    check_closed(fam, h.len())?;
    fam.iter()
        .map(|f| {
            let vals = (1..=h.len())
                .map(|j| psg.op(f.at(j), h.at(j)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| JcrError::UndefinedProduct("f(j)*h(j)".into()))?;
            SeqPrefix::new(psg, vals).map_err(|e| JcrError::UndefinedProduct(e.to_string()))
        })
        .collect()
}

/// Witness `(b, h(t(1)), …, h(t(m)))` with `t = H`, whose interleaved
/// product for `f` is `b * ∏_{t∈H} g_f(t)` with `g_f = f*h`.
pub fn lift_commutative(
    psg: &PsgInstance,
    b: ElemId,
    h_idx: &[usize],
    fam: &[SeqPrefix],
    h: &SeqPrefix,
) -> Result<Witness, JcrError> {
    if !psg.is_commutative() {
        return Err(JcrError::NotCommutative);
    }
    let mut idx = h_idx.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&bad) = idx.iter().find(|&&t| t == 0 || t > h.len()) {
        return Err(JcrError::IndexOutOfRange(bad, h.len()));
    }
    let mut a = vec![b];
    a.extend(idx.iter().map(|&t| h.at(t)));
    let w = Witness::new(a, idx.clone())?;
    let g = shifted_family(psg, fam, h)?;
    for (i, (f, gf)) in fam.iter().zip(&g).enumerate() {
        let expect = gf
            .fp(psg, &idx)
            .ok()
            .and_then(|p| psg.op(b, p))
            .ok_or_else(|| JcrError::UndefinedProduct(format!("b*∏g_f for member #{i}")))?;
        if w.product(psg, f) != Some(expect) {
            return Err(JcrError::UndefinedProduct(format!(
                "lifted product for member #{i}"
            )));
        }
    }
    Ok(w)
}

/// Radii for `A1 ∪ A2`, `A1` and `A2`. Exploratory; no claim attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub union_radius: Option<usize>,
    pub part1_radius: Option<usize>,
    pub part2_radius: Option<usize>,
    pub bounds: Bounds,
}

#[allow(clippy::too_many_arguments)]
pub fn partition_regularity_probe(
    psg: &PsgInstance,
    a1: &ElemSet,
    a2: &ElemSet,
    k: usize,
    l: &[ElemId],
    pool: &[SeqPrefix],
    m_max: usize,
    r_max: usize,
) -> Result<ProbeReport, JcrError> {
    let mut union = a1.clone();
    union.union_with(a2);
    let u = k_cr_radius(psg, &union, k, l, pool, m_max, r_max)?;
    let p1 = k_cr_radius(psg, a1, k, l, pool, m_max, r_max)?;
    let p2 = k_cr_radius(psg, a2, k, l, pool, m_max, r_max)?;
    Ok(ProbeReport {
        union_radius: u.radius,
        part1_radius: p1.radius,
        part2_radius: p2.radius,
        bounds: u.bounds,
    })
}
