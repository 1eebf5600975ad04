//! Finite partial semigroups.
//!
//! A [`PsgInstance`] owns an enumerated universe in canonical order and a
//! partial operation on it. Elements are addressed by [`ElemId`], the
//! position of the element in that order, so id order is canonical order.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::Rational64;
use thiserror::Error;

use crate::bits;
use crate::set::ElemSet;

/// Default bound on universe size; larger instances are rejected.
pub const DEFAULT_UNIVERSE_CAP: usize = 1 << 16;

/// Position of an element in its instance's canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl ElemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Element payloads. The derived order (kind first, then lexicographic) is
/// the canonical order used for every tie-break in the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Nonempty set of positive integers, strictly increasing.
    SmallSet(Vec<u32>),
    /// Nonempty set of rationals, strictly increasing.
    RatSet(Vec<Rational64>),
    /// Located word: `(position, symbol)` pairs with increasing positions.
    Word(Vec<(u32, char)>),
    Pair(Box<Element>, Box<Element>),
    Atom(u32),
    /// The adjoined two-sided identity `e`.
    IdentityMark,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::SmallSet(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Element::RatSet(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Element::Word(ws) => {
                let parts: Vec<String> = ws.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Element::Pair(a, b) => write!(f, "({a},{b})"),
            Element::Atom(x) => write!(f, "{x}"),
            Element::IdentityMark => write!(f, "e"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsgError {
    #[error("element {0} is not in the universe")]
    ElementNotInUniverse(String),
    #[error("sigma of an empty family is undefined")]
    EmptyFamily,
    #[error("instance already has a two-sided identity")]
    AlreadyHasIdentity,
    #[error("universe of {size} elements exceeds cap {cap}")]
    UniverseTooLarge { size: u128, cap: usize },
    #[error("table is not associative at ({0},{1},{2})")]
    NotAssociative(u32, u32, u32),
    #[error("invalid instance parameters: {0}")]
    InvalidParameters(String),
}

/// Family of an instance together with its defining parameters.
#[derive(Clone, Debug)]
pub enum Family {
    ExplicitTable {
        size: u32,
    },
    /// `P_f([1..n])` with union defined on disjoint sets.
    FinSetDisjointUnion {
        n: u32,
    },
    /// `P_f(D)` with union defined when `max F < min G`.
    FinSetOrderedUnion {
        points: Vec<Rational64>,
    },
    /// Partial maps `[1..n] -> alphabet` composed when domains are order-separated.
    LocatedWords {
        alphabet: Vec<char>,
        n: u32,
    },
    Product(Arc<PsgInstance>, Arc<PsgInstance>),
    IdentityAdjoined(Arc<PsgInstance>),
}

#[derive(Debug)]
enum Kernel {
    Table(Vec<Option<u32>>),
    Masks {
        masks: Vec<u64>,
        by_mask: Vec<u32>,
        ordered: bool,
    },
    Words {
        doms: Vec<u64>,
        syms: Vec<u64>,
        by_key: HashMap<(u64, u64), u32>,
    },
    Product {
        right_len: u32,
    },
    Identity {
        base_len: u32,
    },
}

/// A finite partial semigroup. Immutable after construction.
#[derive(Debug)]
pub struct PsgInstance {
    family: Family,
    elements: Vec<Element>,
    index: HashMap<Element, ElemId>,
    kernel: Kernel,
    commutative: OnceLock<bool>,
}

fn check_cap(size: u128, cap: usize) -> Result<(), PsgError> {
    if size > cap as u128 {
        Err(PsgError::UniverseTooLarge { size, cap })
    } else {
        Ok(())
    }
}

/// Nonempty subsets of an `n`-point ground set, as masks in lexicographic order.
fn lex_masks(n: u32) -> Vec<u64> {
    let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
    masks.sort_by(|&a, &b| bits::lex_cmp(a, b));
    masks
}

fn mask_kernel(masks: &[u64], n: u32, ordered: bool) -> Kernel {
    let mut by_mask = vec![u32::MAX; 1usize << n];
    for (i, &m) in masks.iter().enumerate() {
        by_mask[m as usize] = i as u32;
    }
    Kernel::Masks {
        masks: masks.to_vec(),
        by_mask,
        ordered,
    }
}

impl PsgInstance {
    fn assemble(family: Family, elements: Vec<Element>, kernel: Kernel) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), ElemId(i as u32)))
            .collect();
        PsgInstance {
            family,
            elements,
            index,
            kernel,
            commutative: OnceLock::new(),
        }
    }

    /// Explicit table on atoms `0..size`; `entries` is row-major with `None`
    /// for undefined products. Non-associative tables are rejected.
    pub fn from_table(size: u32, entries: Vec<Option<u32>>) -> Result<Self, PsgError> {
        Self::from_table_with_cap(size, entries, DEFAULT_UNIVERSE_CAP)
    }

    pub fn from_table_with_cap(
        size: u32,
        entries: Vec<Option<u32>>,
        cap: usize,
    ) -> Result<Self, PsgError> {
        check_cap(size as u128, cap)?;
        if size == 0 {
            return Err(PsgError::InvalidParameters(
                "table needs at least one atom".into(),
            ));
        }
        let n = size as usize;
        if entries.len() != n * n {
            return Err(PsgError::InvalidParameters(format!(
                "table of size {size} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().flatten().find(|&&v| v >= size) {
            return Err(PsgError::InvalidParameters(format!(
                "table entry {bad} out of range"
            )));
        }
        let elements = (0..size).map(Element::Atom).collect();
        let inst = Self::assemble(
            Family::ExplicitTable { size },
            elements,
            Kernel::Table(entries),
        );
        if let Some((x, y, z)) = inst.associativity_violation() {
            return Err(PsgError::NotAssociative(x.0, y.0, z.0));
        }
        Ok(inst)
    }

    /// The cyclic group `Z_n` as a total table.
    pub fn cyclic_group(n: u32) -> Result<Self, PsgError> {
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| Some((i + j) % n)))
            .collect();
        Self::from_table(n, entries)
    }

    pub fn finset_disjoint(n: u32) -> Result<Self, PsgError> {
        Self::finset_disjoint_with_cap(n, DEFAULT_UNIVERSE_CAP)
    }

    pub fn finset_disjoint_with_cap(n: u32, cap: usize) -> Result<Self, PsgError> {
        if n == 0 || n > 32 {
            return Err(PsgError::InvalidParameters(format!(
                "ground set size {n} not in 1..=32"
            )));
        }
        check_cap((1u128 << n) - 1, cap)?;
        let masks = lex_masks(n);
        let elements = masks
            .iter()
            .map(|&m| Element::SmallSet(bits::members(m)))
            .collect();
        let kernel = mask_kernel(&masks, n, false);
        Ok(Self::assemble(
            Family::FinSetDisjointUnion { n },
            elements,
            kernel,
        ))
    }

    /// Ordered union over the given points; duplicates are merged.
    pub fn finset_ordered(points: Vec<Rational64>) -> Result<Self, PsgError> {
        Self::finset_ordered_with_cap(points, DEFAULT_UNIVERSE_CAP)
    }

    pub fn finset_ordered_with_cap(
        mut points: Vec<Rational64>,
        cap: usize,
    ) -> Result<Self, PsgError> {
        points.sort();
        points.dedup();
        let n = points.len() as u32;
        if n == 0 || n > 32 {
            return Err(PsgError::InvalidParameters(format!(
                "{n} points not in 1..=32"
            )));
        }
        check_cap((1u128 << n) - 1, cap)?;
        let masks = lex_masks(n);
        let elements = masks
            .iter()
            .map(|&m| {
                Element::RatSet(
                    bits::members(m)
                        .iter()
                        .map(|&i| points[i as usize - 1])
                        .collect(),
                )
            })
            .collect();
        let kernel = mask_kernel(&masks, n, true);
        Ok(Self::assemble(
            Family::FinSetOrderedUnion { points },
            elements,
            kernel,
        ))
    }

    /// Ordered union over the integer points `1..=n`.
    pub fn finset_ordered_range(n: u32) -> Result<Self, PsgError> {
        Self::finset_ordered((1..=n as i64).map(Rational64::from_integer).collect())
    }

    pub fn located_words(alphabet: Vec<char>, n: u32) -> Result<Self, PsgError> {
        Self::located_words_with_cap(alphabet, n, DEFAULT_UNIVERSE_CAP)
    }

    pub fn located_words_with_cap(
        mut alphabet: Vec<char>,
        n: u32,
        cap: usize,
    ) -> Result<Self, PsgError> {
        alphabet.sort();
        alphabet.dedup();
        let k = alphabet.len() as u32;
        if k == 0 || k > 15 || n == 0 || n > 16 {
            return Err(PsgError::InvalidParameters(format!(
                "alphabet size {k} not in 1..=15 or positions {n} not in 1..=16"
            )));
        }
        check_cap((k as u128 + 1).pow(n) - 1, cap)?;
        // Symbols are packed 4 bits per position, storing index+1.
        let mut raw: Vec<(u64, u64)> = Vec::new();
        let total = (k as u64 + 1).pow(n);
        for code in 1..total {
            let (mut c, mut dom, mut syms) = (code, 0u64, 0u64);
            for pos in 0..n {
                let digit = c % (k as u64 + 1);
                c /= k as u64 + 1;
                if digit > 0 {
                    dom |= 1 << pos;
                    syms |= digit << (4 * pos);
                }
            }
            raw.push((dom, syms));
        }
        let to_word = |dom: u64, syms: u64| -> Vec<(u32, char)> {
            bits::members(dom)
                .into_iter()
                .map(|p| {
                    let d = (syms >> (4 * (p - 1))) & 0xf;
                    (p, alphabet[d as usize - 1])
                })
                .collect()
        };
        type Keyed = (Vec<(u32, char)>, u64, u64);
        let mut words: Vec<Keyed> = raw
            .into_iter()
            .map(|(d, s)| (to_word(d, s), d, s))
            .collect();
        words.sort();
        let mut by_key = HashMap::with_capacity(words.len());
        let mut doms = Vec::with_capacity(words.len());
        let mut syms = Vec::with_capacity(words.len());
        let mut elements = Vec::with_capacity(words.len());
        for (i, (w, d, s)) in words.into_iter().enumerate() {
            by_key.insert((d, s), i as u32);
            doms.push(d);
            syms.push(s);
            elements.push(Element::Word(w));
        }
        Ok(Self::assemble(
            Family::LocatedWords { alphabet, n },
            elements,
            Kernel::Words { doms, syms, by_key },
        ))
    }

    /// Cartesian product with the componentwise operation.
    pub fn product(left: &Arc<PsgInstance>, right: &Arc<PsgInstance>) -> Result<Self, PsgError> {
        Self::product_with_cap(left, right, DEFAULT_UNIVERSE_CAP)
    }

    pub fn product_with_cap(
        left: &Arc<PsgInstance>,
        right: &Arc<PsgInstance>,
        cap: usize,
    ) -> Result<Self, PsgError> {
        check_cap(left.len() as u128 * right.len() as u128, cap)?;
        let mut elements = Vec::with_capacity(left.len() * right.len());
        for a in &left.elements {
            for b in &right.elements {
                elements.push(Element::Pair(Box::new(a.clone()), Box::new(b.clone())));
            }
        }
        Ok(Self::assemble(
            Family::Product(left.clone(), right.clone()),
            elements,
            Kernel::Product {
                right_len: right.len() as u32,
            },
        ))
    }

    /// Adjoins a two-sided identity `e`, placed last in canonical order.
    pub fn adjoin_identity(base: &Arc<PsgInstance>) -> Result<Self, PsgError> {
        Self::adjoin_identity_with_cap(base, DEFAULT_UNIVERSE_CAP)
    }

    pub fn adjoin_identity_with_cap(base: &Arc<PsgInstance>, cap: usize) -> Result<Self, PsgError> {
        if base.identity().is_some() {
            return Err(PsgError::AlreadyHasIdentity);
        }
        check_cap(base.len() as u128 + 1, cap)?;
        let mut elements = base.elements.clone();
        elements.push(Element::IdentityMark);
        Ok(Self::assemble(
            Family::IdentityAdjoined(base.clone()),
            elements,
            Kernel::Identity {
                base_len: base.len() as u32,
            },
        ))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + Clone {
        (0..self.elements.len() as u32).map(ElemId)
    }

    pub fn element(&self, id: ElemId) -> &Element {
        &self.elements[id.index()]
    }

    pub fn id_of(&self, e: &Element) -> Result<ElemId, PsgError> {
        self.index
            .get(e)
            .copied()
            .ok_or_else(|| PsgError::ElementNotInUniverse(e.to_string()))
    }

    pub fn contains_id(&self, id: ElemId) -> bool {
        id.index() < self.elements.len()
    }

    fn check_id(&self, id: ElemId) -> Result<(), PsgError> {
        if self.contains_id(id) {
            Ok(())
        } else {
            Err(PsgError::ElementNotInUniverse(format!("#{}", id.0)))
        }
    }

    /// Short description of the family, e.g. `finset-disjoint(N=6)`.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::ExplicitTable { size } => format!("table(n={size})"),
            Family::FinSetDisjointUnion { n } => format!("finset-disjoint(N={n})"),
            Family::FinSetOrderedUnion { points } => {
                let ps: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                format!("finset-ordered(D=[{}])", ps.join(","))
            }
            Family::LocatedWords { alphabet, n } => {
                let a: String = alphabet.iter().collect();
                format!("words(alphabet={a},N={n})")
            }
            Family::Product(l, r) => format!("product({},{})", l.describe(), r.describe()),
            Family::IdentityAdjoined(b) => format!("identity({})", b.describe()),
        }
    }

    /// The partial operation on ids, unchecked. Ids must belong to `self`.
    #[inline]
    pub fn op(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        match &self.kernel {
            Kernel::Table(t) => t[x.index() * self.elements.len() + y.index()].map(ElemId),
            Kernel::Masks {
                masks,
                by_mask,
                ordered,
            } => {
                let (a, b) = (masks[x.index()], masks[y.index()]);
                let ok = if *ordered {
                    bits::ordered_before(a, b)
                } else {
                    a & b == 0
                };
                ok.then(|| ElemId(by_mask[(a | b) as usize]))
            }
            Kernel::Words { doms, syms, by_key } => {
                let (da, db) = (doms[x.index()], doms[y.index()]);
                if !bits::ordered_before(da, db) {
                    return None;
                }
                let key = (da | db, syms[x.index()] | syms[y.index()]);
                Some(ElemId(by_key[&key]))
            }
            Kernel::Product { right_len } => {
                let (l, r) = match &self.family {
                    Family::Product(l, r) => (l, r),
                    _ => unreachable!(),
                };
                let (x1, x2) = (x.0 / right_len, x.0 % right_len);
                let (y1, y2) = (y.0 / right_len, y.0 % right_len);
                let a = l.op(ElemId(x1), ElemId(y1))?;
                let b = r.op(ElemId(x2), ElemId(y2))?;
                Some(ElemId(a.0 * right_len + b.0))
            }
            Kernel::Identity { base_len } => {
                if x.0 == *base_len {
                    Some(y)
                } else if y.0 == *base_len {
                    Some(x)
                } else {
                    match &self.family {
                        Family::IdentityAdjoined(b) => b.op(x, y),
                        _ => unreachable!(),
                    }
                }
            }
        }
    }

    /// `x * y`, or `None` when undefined.
    pub fn apply(&self, x: ElemId, y: ElemId) -> Result<Option<ElemId>, PsgError> {
        self.check_id(x)?;
        self.check_id(y)?;
        Ok(self.op(x, y))
    }

    /// Left-to-right product of a nonempty list; `None` as soon as a step is undefined.
    pub fn product_of(&self, items: &[ElemId]) -> Option<ElemId> {
        let (first, rest) = items.split_first()?;
        rest.iter().try_fold(*first, |acc, &y| self.op(acc, y))
    }

    /// `φ(a) = {b : a*b defined}`.
    pub fn phi(&self, a: ElemId) -> Result<ElemSet, PsgError> {
        self.check_id(a)?;
        Ok(ElemSet::from_ids(
            self.len(),
            self.ids().filter(|&b| self.op(a, b).is_some()),
        ))
    }

    /// `σ(F) = ⋂_{a∈F} φ(a)`.
    pub fn sigma(&self, family: &[ElemId]) -> Result<ElemSet, PsgError> {
        if family.is_empty() {
            return Err(PsgError::EmptyFamily);
        }
        for &a in family {
            self.check_id(a)?;
        }
        Ok(ElemSet::from_ids(
            self.len(),
            self.ids().filter(|&b| self.in_sigma(b, family)),
        ))
    }

    /// `b ∈ σ(F)`, unchecked.
    #[inline]
    pub fn in_sigma(&self, b: ElemId, family: &[ElemId]) -> bool {
        family.iter().all(|&a| self.op(a, b).is_some())
    }

    /// Two-sided identity, when the instance was built with one adjoined
    /// (directly or in both factors of a product).
    pub fn identity(&self) -> Option<ElemId> {
        match (&self.family, &self.kernel) {
            (Family::IdentityAdjoined(_), Kernel::Identity { base_len }) => Some(ElemId(*base_len)),
            (Family::Product(l, r), _) => {
                let (a, b) = (l.identity()?, r.identity()?);
                Some(self.pair_id(a, b))
            }
            _ => None,
        }
    }

    /// Whether `x*y` and `y*x` agree (including definedness) for all pairs.
    pub fn is_commutative(&self) -> bool {
        *self.commutative.get_or_init(|| match &self.family {
            Family::FinSetDisjointUnion { .. } => true,
            Family::FinSetOrderedUnion { points } => points.len() <= 1,
            Family::LocatedWords { n, .. } => *n <= 1,
            Family::Product(l, r) => l.is_commutative() && r.is_commutative(),
            Family::IdentityAdjoined(b) => b.is_commutative(),
            Family::ExplicitTable { .. } => self
                .ids()
                .all(|x| self.ids().all(|y| y < x || self.op(x, y) == self.op(y, x))),
        })
    }

    /// First triple (in canonical order) where partial associativity fails.
    /// Exhaustive, so only meant for small universes.
    pub fn associativity_violation(&self) -> Option<(ElemId, ElemId, ElemId)> {
        for x in self.ids() {
            for y in self.ids() {
                let xy = self.op(x, y);
                for z in self.ids() {
                    let left = xy.and_then(|v| self.op(v, z));
                    let right = self.op(y, z).and_then(|v| self.op(x, v));
                    if left != right {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn left(&self) -> Option<&Arc<PsgInstance>> {
        match &self.family {
            Family::Product(l, _) => Some(l),
            _ => None,
        }
    }

    pub fn right(&self) -> Option<&Arc<PsgInstance>> {
        match &self.family {
            Family::Product(_, r) => Some(r),
            _ => None,
        }
    }

    /// Id of the pair `(a, b)` in a product instance.
    pub fn pair_id(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.kernel {
            Kernel::Product { right_len } => ElemId(a.0 * right_len + b.0),
            _ => panic!("pair_id on a non-product instance"),
        }
    }

    /// Components of a pair id in a product instance.
    pub fn unpair(&self, id: ElemId) -> (ElemId, ElemId) {
        match &self.kernel {
            Kernel::Product { right_len } => (ElemId(id.0 / right_len), ElemId(id.0 % right_len)),
            _ => panic!("unpair on a non-product instance"),
        }
    }

    /// `A × B` as a subset of this product instance.
    pub fn product_set(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.len());
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.pair_id(x, y));
            }
        }
        out
    }

    /// Ground-set mask of a set element, for the two finite-set families.
    pub fn mask_of(&self, id: ElemId) -> Option<u64> {
        match &self.kernel {
            Kernel::Masks { masks, .. } => Some(masks[id.index()]),
            _ => None,
        }
    }

    /// Element of a finite-set family with the given ground-set mask.
    pub fn id_of_mask(&self, mask: u64) -> Option<ElemId> {
        match &self.kernel {
            Kernel::Masks { by_mask, .. } => by_mask
                .get(mask as usize)
                .filter(|&&i| i != u32::MAX)
                .map(|&i| ElemId(i)),
            _ => None,
        }
    }

    /// Id of the small set with the given members (disjoint-union family,
    /// or ordered union whose points are exactly `1..=n`).
    pub fn set_id(&self, members: &[u32]) -> Option<ElemId> {
        match &self.family {
            Family::FinSetDisjointUnion { .. } => {
                self.id_of(&Element::SmallSet(members.to_vec())).ok()
            }
            Family::FinSetOrderedUnion { .. } => self
                .id_of(&Element::RatSet(
                    members
                        .iter()
                        .map(|&m| Rational64::from_integer(m as i64))
                        .collect(),
                ))
                .ok(),
            _ => None,
        }
    }

    /// Displays an id as its element literal.
    pub fn show(&self, id: ElemId) -> String {
        self.element(id).to_string()
    }

    pub fn show_all(&self, ids: &[ElemId]) -> String {
        let parts: Vec<String> = ids.iter().map(|&i| self.show(i)).collect();
        format!("[{}]", parts.join(","))
    }

    /// Smallest family size `b <= b_max` with some `σ(F) = ∅`, and the
    /// lexicographically least such `F`.
    pub fn adequacy_defect(&self, b_max: usize) -> AdequacyReport {
        for size in 1..=b_max.min(self.len()) {
            let all = ElemSet::full(self.len());
            let mut prefix = Vec::with_capacity(size);
            if let Some(w) = self.defect_dfs(size, 0, &all, &mut prefix) {
                return AdequacyReport::Defect { size, witness: w };
            }
        }
        AdequacyReport::AllNonempty { b_max }
    }

    fn defect_dfs(
        &self,
        size: usize,
        start: usize,
        sigma: &ElemSet,
        prefix: &mut Vec<ElemId>,
    ) -> Option<Vec<ElemId>> {
        for x in start..self.len() {
            if self.len() - x < size - prefix.len() {
                break;
            }
            let x = ElemId(x as u32);
            let narrowed = ElemSet::from_ids(
                self.len(),
                sigma.iter().filter(|&b| self.op(x, b).is_some()),
            );
            // Families of size < `size` all have nonempty σ here, so an
            // element that does not shrink σ cannot complete a defect.
            if !prefix.is_empty() && narrowed.len() == sigma.len() {
                continue;
            }
            prefix.push(x);
            if prefix.len() == size {
                if narrowed.is_empty() {
                    return Some(prefix.clone());
                }
            } else if let Some(w) = self.defect_dfs(size, x.index() + 1, &narrowed, prefix) {
                return Some(w);
            }
            prefix.pop();
        }
        None
    }
}

/// Result of [`PsgInstance::adequacy_defect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdequacyReport {
    AllNonempty { b_max: usize },
    Defect { size: usize, witness: Vec<ElemId> },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &PsgInstance, m: &[u32]) -> ElemId {
        s.set_id(m).unwrap()
    }

    #[test]
    fn disjoint_union_rule() {
        let s = PsgInstance::finset_disjoint(6).unwrap();
        assert_eq!(s.len(), 63);
        let r = s.apply(set(&s, &[1, 2]), set(&s, &[3])).unwrap();
        assert_eq!(r, Some(set(&s, &[1, 2, 3])));
        assert_eq!(s.apply(set(&s, &[1, 2]), set(&s, &[2, 3])).unwrap(), None);
    }

    #[test]
    fn ordered_union_rule() {
        let s = PsgInstance::finset_ordered_range(4).unwrap();
        assert_eq!(s.apply(set(&s, &[1, 3]), set(&s, &[2])).unwrap(), None);
        assert_eq!(
            s.apply(set(&s, &[1]), set(&s, &[2, 4])).unwrap(),
            Some(set(&s, &[1, 2, 4]))
        );
    }

    #[test]
    fn foreign_ids_are_rejected() {
        let s = PsgInstance::finset_disjoint(2).unwrap();
        assert!(matches!(
            s.apply(ElemId(0), ElemId(99)),
            Err(PsgError::ElementNotInUniverse(_))
        ));
        assert!(s.phi(ElemId(3)).is_err());
    }

    #[test]
    fn phi_examples() {
        let s = PsgInstance::finset_disjoint(3).unwrap();
        assert_eq!(
            s.phi(set(&s, &[1, 2])).unwrap().to_vec(),
            vec![set(&s, &[3])]
        );
        assert!(s.phi(set(&s, &[1, 2, 3])).unwrap().is_empty());
        let o = PsgInstance::finset_ordered_range(3).unwrap();
        assert_eq!(o.phi(set(&o, &[2])).unwrap().to_vec(), vec![set(&o, &[3])]);
    }

    #[test]
    fn sigma_examples() {
        let s = PsgInstance::finset_disjoint(6).unwrap();
        let sig = s.sigma(&[set(&s, &[1, 2]), set(&s, &[2, 3])]).unwrap();
        assert_eq!(sig.len(), 7);
        for id in sig.iter() {
            let m = s.mask_of(id).unwrap();
            assert_eq!(m & 0b111, 0);
        }
        assert_eq!(s.sigma(&[]), Err(PsgError::EmptyFamily));
        let a = set(&s, &[4]);
        assert_eq!(s.sigma(&[a]).unwrap(), s.phi(a).unwrap());

        let o = PsgInstance::finset_ordered_range(5).unwrap();
        let sig = o.sigma(&[set(&o, &[1])]).unwrap();
        for id in o.ids() {
            let min = bits::min_elem(o.mask_of(id).unwrap());
            assert_eq!(sig.contains(id), min > 1);
        }
    }

    #[test]
    fn adequacy_defects() {
        let s = PsgInstance::finset_disjoint(4).unwrap();
        assert_eq!(
            s.adequacy_defect(2),
            AdequacyReport::Defect {
                size: 1,
                witness: vec![set(&s, &[1, 2, 3, 4])]
            }
        );
        let o = PsgInstance::finset_ordered_range(3).unwrap();
        assert_eq!(
            o.adequacy_defect(1),
            AdequacyReport::Defect {
                size: 1,
                witness: vec![set(&o, &[1, 2, 3])]
            }
        );
        let z3 = PsgInstance::cyclic_group(3).unwrap();
        assert_eq!(
            z3.adequacy_defect(3),
            AdequacyReport::AllNonempty { b_max: 3 }
        );
    }

    #[test]
    fn identity_adjunction() {
        let base = Arc::new(PsgInstance::finset_disjoint(3).unwrap());
        let s = Arc::new(PsgInstance::adjoin_identity(&base).unwrap());
        let e = s.identity().unwrap();
        let x = s.id_of(&Element::SmallSet(vec![1, 2])).unwrap();
        assert_eq!(s.apply(e, x).unwrap(), Some(x));
        assert_eq!(s.apply(x, e).unwrap(), Some(x));
        assert!(s.phi(e).unwrap().is_full());
        assert_eq!(
            PsgInstance::adjoin_identity(&s).unwrap_err(),
            PsgError::AlreadyHasIdentity
        );
        assert_eq!(s.associativity_violation(), None);
        // e sorts after every base element.
        assert_eq!(e.index(), s.len() - 1);
    }

    #[test]
    fn product_examples() {
        let z3 = Arc::new(PsgInstance::cyclic_group(3).unwrap());
        let p = PsgInstance::product(&z3, &z3).unwrap();
        let x = p.pair_id(ElemId(1), ElemId(2));
        let y = p.pair_id(ElemId(2), ElemId(2));
        assert_eq!(p.op(x, y), Some(p.pair_id(ElemId(0), ElemId(1))));
        assert_eq!(p.show(x), "(1,2)");

        let u = Arc::new(PsgInstance::finset_disjoint(3).unwrap());
        let o = Arc::new(PsgInstance::finset_ordered_range(3).unwrap());
        let p = PsgInstance::product(&u, &o).unwrap();
        let pr = |a: &[u32], b: &[u32]| p.pair_id(u.set_id(a).unwrap(), o.set_id(b).unwrap());
        assert_eq!(
            p.op(pr(&[1], &[1]), pr(&[2], &[2])),
            Some(pr(&[1, 2], &[1, 2]))
        );
        assert_eq!(
            p.op(pr(&[1], &[2]), pr(&[2], &[3])),
            Some(pr(&[1, 2], &[2, 3]))
        );
        assert_eq!(p.op(pr(&[1], &[2]), pr(&[1], &[3])), None);
    }

    #[test]
    fn words_compose_when_order_separated() {
        let w = PsgInstance::located_words(vec!['a', 'b'], 3).unwrap();
        assert_eq!(w.len(), 26);
        let x = w.id_of(&Element::Word(vec![(1, 'a')])).unwrap();
        let y = w.id_of(&Element::Word(vec![(2, 'b'), (3, 'a')])).unwrap();
        let xy = w.op(x, y).unwrap();
        assert_eq!(w.show(xy), "{1:a,2:b,3:a}");
        assert_eq!(w.op(y, x), None);
        assert_eq!(w.associativity_violation(), None);
    }

    #[test]
    fn non_associative_table_rejected() {
        // x*y = y+1 mod 2 is not associative.
        let entries = vec![Some(1), Some(0), Some(1), Some(0)];
        assert!(matches!(
            PsgInstance::from_table(2, entries),
            Err(PsgError::NotAssociative(..))
        ));
    }

    #[test]
    fn universe_cap_is_enforced() {
        assert!(matches!(
            PsgInstance::finset_disjoint_with_cap(10, 100),
            Err(PsgError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn commutativity_detection() {
        assert!(PsgInstance::cyclic_group(4).unwrap().is_commutative());
        assert!(PsgInstance::finset_disjoint(3).unwrap().is_commutative());
        assert!(!PsgInstance::finset_ordered_range(3)
            .unwrap()
            .is_commutative());
        let left_zero =
            PsgInstance::from_table(2, vec![Some(0), Some(0), Some(1), Some(1)]).unwrap();
        assert!(!left_zero.is_commutative());
    }
}
