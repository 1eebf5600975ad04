//! Finite prefixes of sequences whose increasing-index finite products are
//! all defined, and searches for them.
//!
//! Indices are 1-based throughout, as are index sets passed as slices.

use rayon::prelude::*;
use thiserror::Error;

use crate::bits;
use crate::outcome::{Bounds, SearchOutcome};
use crate::psg::{ElemId, PsgInstance};
use crate::set::ElemSet;

/// Longest prefix [`validate_prefix`] accepts by default.
pub const DEFAULT_LENGTH_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {index} out of range for prefix of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("prefix length {len} exceeds cap {cap}")]
    LengthCapExceeded { len: usize, cap: usize },
    #[error("prefix is empty")]
    EmptyPrefix,
    #[error("product over index set {0:?} is undefined")]
    UndefinedProduct(Vec<usize>),
    #[error("prefixes have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("instance is not a product")]
    NotAProduct,
    #[error("element #{0} is not in the universe")]
    ForeignElement(u32),
}

/// A validated prefix `f(1..r)`: every `∏_{t∈H} f(t)` in increasing order is defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeqPrefix {
    values: Vec<ElemId>,
}

/// Outcome of [`validate_prefix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    /// Least failing index set (size first, then lexicographic).
    Violation(Vec<usize>),
}

impl SeqPrefix {
    pub fn new(psg: &PsgInstance, values: Vec<ElemId>) -> Result<Self, SeqError> {
        match validate_prefix(psg, &values, DEFAULT_LENGTH_CAP)? {
            Validation::Ok => Ok(SeqPrefix { values }),
            Validation::Violation(h) => Err(SeqError::UndefinedProduct(h)),
        }
    }

    /// Skips validation; callers must guarantee all finite products are defined.
    pub(crate) fn new_unchecked(values: Vec<ElemId>) -> Self {
        SeqPrefix { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ElemId] {
        &self.values
    }

    /// `f(t)` for 1-based `t`.
    pub fn at(&self, t: usize) -> ElemId {
        self.values[t - 1]
    }

    /// The first `r` terms.
    pub fn truncate(&self, r: usize) -> SeqPrefix {
        SeqPrefix {
            values: self.values[..r.min(self.len())].to_vec(),
        }
    }

    /// `∏_{t∈H} f(t)` in increasing order of `H`.
    pub fn fp(&self, psg: &PsgInstance, h: &[usize]) -> Result<ElemId, SeqError> {
        if h.is_empty() {
            return Err(SeqError::EmptyIndexSet);
        }
        let mut idx = h.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&t| t == 0 || t > self.len()) {
            return Err(SeqError::IndexOutOfRange {
                index: bad,
                len: self.len(),
            });
        }
        let items: Vec<ElemId> = idx.iter().map(|&t| self.at(t)).collect();
        psg.product_of(&items)
            .ok_or(SeqError::UndefinedProduct(idx))
    }

    /// All finite products, deduplicated, in canonical order.
    pub fn fp_set(&self, psg: &PsgInstance) -> Vec<ElemId> {
        let mut out: Vec<ElemId> = subset_products(psg, &self.values)
            .into_iter()
            .flatten()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn show(&self, psg: &PsgInstance) -> String {
        psg.show_all(&self.values)
    }
}

/// `prods[mask]` is the increasing-order product over `mask` (bit `i` is
/// index `i+1`), shared along the highest-bit recursion.
fn subset_products(psg: &PsgInstance, values: &[ElemId]) -> Vec<Option<ElemId>> {
    let r = values.len();
    let mut prods = vec![None; 1usize << r];
    for mask in 1usize..(1 << r) {
        let hi = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << hi);
        prods[mask] = if rest == 0 {
            Some(values[hi])
        } else {
            prods[rest].and_then(|p| psg.op(p, values[hi]))
        };
    }
    prods
}

/// Checks every nonempty index set of `values`; reports the least failing one.
pub fn validate_prefix(
    psg: &PsgInstance,
    values: &[ElemId],
    cap: usize,
) -> Result<Validation, SeqError> {
    if values.is_empty() {
        return Err(SeqError::EmptyPrefix);
    }
    if values.len() > cap || values.len() > 30 {
        return Err(SeqError::LengthCapExceeded {
            len: values.len(),
            cap,
        });
    }
    if let Some(bad) = values.iter().find(|v| !psg.contains_id(**v)) {
        return Err(SeqError::ForeignElement(bad.0));
    }
    let prods = subset_products(psg, values);
    let worst = prods
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, p)| p.is_none())
        .map(|(m, _)| m as u64)
        .min_by(|&a, &b| bits::size_lex_cmp(a, b));
    Ok(match worst {
        None => Validation::Ok,
        Some(m) => {
            Validation::Violation(bits::members(m).into_iter().map(|x| x as usize).collect())
        }
    })
}

/// Incremental state for growing a prefix: the distinct finite products so far.
struct FpState {
    products: Vec<ElemId>,
    seen: ElemSet,
}

impl FpState {
    fn seeded(psg: &PsgInstance, seed: &[ElemId]) -> Self {
        let mut seen = ElemSet::empty(psg.len());
        let mut products = Vec::new();
        if !seed.is_empty() {
            for p in subset_products(psg, seed).into_iter().flatten() {
                if !seen.contains(p) {
                    seen.insert(p);
                    products.push(p);
                }
            }
        }
        FpState { products, seen }
    }

    /// New products created by appending `x`, or `None` if one is undefined
    /// or falls outside `target`.
    fn extension(
        &self,
        psg: &PsgInstance,
        x: ElemId,
        target: Option<&ElemSet>,
    ) -> Option<Vec<ElemId>> {
        let inside = |v: ElemId| target.is_none_or(|t| t.contains(v));
        if !inside(x) {
            return None;
        }
        let mut fresh = vec![x];
        for &p in &self.products {
            let v = psg.op(p, x)?;
            if !inside(v) {
                return None;
            }
            fresh.push(v);
        }
        Some(fresh)
    }

    fn push(&mut self, fresh: &[ElemId]) -> Vec<ElemId> {
        let mut added = Vec::new();
        for &v in fresh {
            if !self.seen.contains(v) {
                self.seen.insert(v);
                self.products.push(v);
                added.push(v);
            }
        }
        added
    }

    fn pop(&mut self, added: &[ElemId]) {
        for &v in added {
            self.seen.remove(v);
        }
        self.products.truncate(self.products.len() - added.len());
    }
}

fn extend_dfs(
    psg: &PsgInstance,
    state: &mut FpState,
    chosen: &mut Vec<ElemId>,
    remaining: usize,
    target: Option<&ElemSet>,
) -> bool {
    if remaining == 0 {
        return true;
    }
    for x in psg.ids() {
        if let Some(fresh) = state.extension(psg, x, target) {
            let added = state.push(&fresh);
            chosen.push(x);
            if extend_dfs(psg, state, chosen, remaining - 1, target) {
                return true;
            }
            chosen.pop();
            state.pop(&added);
        }
    }
    false
}

/// Canonical-least `k` new terms appended to `seed` such that every new
/// finite product is defined (and lies in `target`, when given). The top
/// level branches run in parallel; the result does not depend on scheduling.
fn extend_canonical(
    psg: &PsgInstance,
    seed: &[ElemId],
    k: usize,
    target: Option<&ElemSet>,
) -> Option<Vec<ElemId>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let root = FpState::seeded(psg, seed);
    let firsts: Vec<(ElemId, Vec<ElemId>)> = psg
        .ids()
        .filter_map(|x| root.extension(psg, x, target).map(|f| (x, f)))
        .collect();
    firsts.par_iter().find_map_first(|(x, fresh)| {
        let mut state = FpState {
            products: root.products.clone(),
            seen: root.seen.clone(),
        };
        state.push(fresh);
        let mut chosen = vec![*x];
        extend_dfs(psg, &mut state, &mut chosen, k - 1, target).then_some(chosen)
    })
}

/// Canonical-least length-`n` prefix with every finite product in `target`.
pub fn find_fp_sequence(psg: &PsgInstance, target: &ElemSet, n: usize) -> SearchOutcome<SeqPrefix> {
    match extend_canonical(psg, &[], n, Some(target)) {
        Some(values) => SearchOutcome::Found(SeqPrefix::new_unchecked(values)),
        None => SearchOutcome::BoundExhausted(Bounds::new().with("length", n)),
    }
}

/// Appends `k` terms to `f` so that all finite products stay defined (and
/// every new product lies in `target` when given). Candidates for each new
/// term are exactly the elements of `σ(M)`, `M` the finite products so far.
pub fn extend_prefix(
    psg: &PsgInstance,
    f: &SeqPrefix,
    k: usize,
    target: Option<&ElemSet>,
) -> SearchOutcome<SeqPrefix> {
    match extend_canonical(psg, f.values(), k, target) {
        Some(tail) => {
            let mut values = f.values().to_vec();
            values.extend(tail);
            SearchOutcome::Found(SeqPrefix::new_unchecked(values))
        }
        None => {
            SearchOutcome::BoundExhausted(Bounds::new().with("length", f.len()).with("extra", k))
        }
    }
}

/// `h(n) = (f(n), g(n))` in the product instance `prod`.
pub fn pair_prefixes(
    prod: &PsgInstance,
    f: &SeqPrefix,
    g: &SeqPrefix,
) -> Result<SeqPrefix, SeqError> {
    if prod.left().is_none() {
        return Err(SeqError::NotAProduct);
    }
    if f.len() != g.len() {
        return Err(SeqError::LengthMismatch(f.len(), g.len()));
    }
    let values = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(&a, &b)| prod.pair_id(a, b))
        .collect();
    // Componentwise definedness makes the pair valid whenever both parts are.
    Ok(SeqPrefix::new_unchecked(values))
}

/// `(π₁∘h, π₂∘h)` for a prefix over a product instance.
pub fn project_prefix(
    prod: &PsgInstance,
    h: &SeqPrefix,
) -> Result<(SeqPrefix, SeqPrefix), SeqError> {
    if prod.left().is_none() {
        return Err(SeqError::NotAProduct);
    }
    let (a, b): (Vec<ElemId>, Vec<ElemId>) = h.values().iter().map(|&v| prod.unpair(v)).unzip();
    Ok((SeqPrefix::new_unchecked(a), SeqPrefix::new_unchecked(b)))
}
