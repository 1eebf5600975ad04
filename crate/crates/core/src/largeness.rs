//! Bounded checkers for thick, syndetic, piecewise syndetic, č-piecewise
//! syndetic, `IP_r` and `IP_r*` sets.
//!
//! All verdicts are for the combinatorial characterizations of these
//! notions, adapted to partial operations (`x ∈ σ(F)`,
//! `t⁻¹A = {s ∈ φ(t) : t*s ∈ A}`), with every universal quantifier cut off
//! at an explicit bound. Nothing here says anything about ultrafilters.
//!
//! Families `F` with `σ(F) = ∅` cannot host any `x` and are skipped and
//! counted. A verdict reached with every family skipped is flagged vacuous.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::outcome::{Bounds, SearchOutcome};
use crate::psg::{ElemId, PsgInstance};
use crate::sequences::{self, SeqPrefix};
use crate::set::ElemSet;

/// Label carried by every report.
pub const REPORT_HEADER: &str = "combinatorial characterization, bounded";

pub const DEFAULT_B: usize = 3;
pub const DEFAULT_G: usize = 3;
pub const DEFAULT_H: usize = 3;
pub const DEFAULT_T: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notion {
    Thick,
    Syndetic,
    PiecewiseSyndetic,
    CPiecewiseSyndetic,
    IpR,
    IpRStar,
}

impl Notion {
    pub fn name(self) -> &'static str {
        match self {
            Notion::Thick => "thick",
            Notion::Syndetic => "syndetic",
            Notion::PiecewiseSyndetic => "ps",
            Notion::CPiecewiseSyndetic => "cps",
            Notion::IpR => "ipr",
            Notion::IpRStar => "iprstar",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family together with the canonical-least admissible `x` for it.
pub type FamilyChoice = (Vec<ElemId>, ElemId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LargenessWitness {
    None,
    /// Every checked family mapped to its `x`.
    Translations(Vec<FamilyChoice>),
    /// A family with nonempty `σ` admitting no `x`.
    Blocker(Vec<ElemId>),
    /// A covering set of translates (syndetic).
    Cover(Vec<ElemId>),
    /// `G` (or `H`) plus the per-family `x` choices.
    CoverAndTranslations(Vec<ElemId>, Vec<FamilyChoice>),
    Prefix(SeqPrefix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargenessReport {
    pub notion: Notion,
    pub verdict: bool,
    /// Families skipped because their `σ` is empty.
    pub skipped: u64,
    /// True when the verdict holds only because every family was skipped.
    pub vacuous: bool,
    pub bounds: Bounds,
    pub witness: LargenessWitness,
}

/// `t⁻¹A = {s ∈ φ(t) : t*s ∈ A}`.
pub fn translate(psg: &PsgInstance, a: &ElemSet, t: ElemId) -> ElemSet {
    ElemSet::from_ids(
        psg.len(),
        psg.ids()
            .filter(|&s| psg.op(t, s).is_some_and(|v| a.contains(v))),
    )
}

/// `⋃_{t∈G} t⁻¹A`.
pub fn translate_union(psg: &PsgInstance, a: &ElemSet, g: &[ElemId]) -> ElemSet {
    let mut out = ElemSet::empty(psg.len());
    for &t in g {
        out.union_with(&translate(psg, a, t));
    }
    out
}

enum Scan {
    Holds {
        map: Vec<FamilyChoice>,
        checked: u64,
        skipped: u64,
    },
    Blocked(Vec<ElemId>),
}

struct ScanState<'a, P> {
    psg: &'a PsgInstance,
    keep: &'a P,
    b: usize,
    fam: Vec<ElemId>,
    map: Vec<FamilyChoice>,
    checked: u64,
    skipped: u64,
}

impl<P: Fn(ElemId, ElemId) -> bool> ScanState<'_, P> {
    fn visit(&mut self, f: ElemId, sigma: &ElemSet, cand: &ElemSet) -> Option<Vec<ElemId>> {
        let psg = self.psg;
        let nsigma = ElemSet::from_ids(psg.len(), sigma.iter().filter(|&x| psg.op(f, x).is_some()));
        self.fam.push(f);
        let blocked = if nsigma.is_empty() {
            // Supersets have empty σ too.
            self.skipped += 1;
            None
        } else {
            let ncand = ElemSet::from_ids(
                psg.len(),
                cand.iter()
                    .filter(|&x| nsigma.contains(x) && (self.keep)(f, x)),
            );
            self.checked += 1;
            match ncand.first() {
                None => Some(self.fam.clone()),
                Some(x) => {
                    self.map.push((self.fam.clone(), x));
                    if self.fam.len() < self.b {
                        self.descend(f.index() + 1, &nsigma, &ncand)
                    } else {
                        None
                    }
                }
            }
        };
        self.fam.pop();
        blocked
    }

    fn descend(&mut self, start: usize, sigma: &ElemSet, cand: &ElemSet) -> Option<Vec<ElemId>> {
        for f in start..self.psg.len() {
            if let Some(blk) = self.visit(ElemId(f as u32), sigma, cand) {
                return Some(blk);
            }
        }
        None
    }
}

/// For every family `F` (ids increasing, `1 <= |F| <= b`) with nonempty
/// `σ(F)`, looks for the least `x ∈ σ(F)` with `keep(f, x)` for all `f ∈ F`.
/// Families are visited depth first in lexicographic order; the first
/// failing one is returned.
fn scan_families<P>(psg: &PsgInstance, b: usize, keep: &P) -> Scan
where
    P: Fn(ElemId, ElemId) -> bool + Sync,
{
    let full = ElemSet::full(psg.len());
    // per first element: the families that hold with their counts, or a failing family
    type Branch = Result<(Vec<FamilyChoice>, u64, u64), Vec<ElemId>>;
    let branches: Vec<Branch> = psg
        .ids()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|f| {
            let mut st = ScanState {
                psg,
                keep,
                b,
                fam: Vec::with_capacity(b),
                map: Vec::new(),
                checked: 0,
                skipped: 0,
            };
            match st.visit(f, &full, &full) {
                Some(blk) => Err(blk),
                None => Ok((st.map, st.checked, st.skipped)),
            }
        })
        .collect();
    let (mut map, mut checked, mut skipped) = (Vec::new(), 0, 0);
    for br in branches {
        match br {
            Err(blk) => return Scan::Blocked(blk),
            Ok((m, c, s)) => {
                map.extend(m);
                checked += c;
                skipped += s;
            }
        }
    }
    Scan::Holds {
        map,
        checked,
        skipped,
    }
}

fn thick_scan(psg: &PsgInstance, a: &ElemSet, b: usize) -> Scan {
    scan_families(psg, b, &|f, x| psg.op(f, x).is_some_and(|v| a.contains(v)))
}

/// Thick at bound `b`: every `F` with `1 <= |F| <= b` has `x ∈ σ(F)` with `F*x ⊆ A`.
pub fn is_thick(psg: &PsgInstance, a: &ElemSet, b: usize) -> LargenessReport {
    let bounds = Bounds::new().with("b", b).with("universe", psg.len());
    match thick_scan(psg, a, b) {
        Scan::Blocked(f) => LargenessReport {
            notion: Notion::Thick,
            verdict: false,
            skipped: 0,
            vacuous: false,
            bounds,
            witness: LargenessWitness::Blocker(f),
        },
        Scan::Holds {
            map,
            checked,
            skipped,
        } => LargenessReport {
            notion: Notion::Thick,
            verdict: true,
            skipped,
            vacuous: checked == 0,
            bounds,
            witness: LargenessWitness::Translations(map),
        },
    }
}

/// Enumerates `G` by size, then lexicographically, skipping any `t` whose
/// translate adds nothing to the current cover (the smaller `G` has the same
/// union and was already tried). Stops at the first `G` accepted by `test`.
fn search_covers<T>(
    translates: &[ElemSet],
    g_max: usize,
    mut test: impl FnMut(&[ElemId], &ElemSet) -> Option<T>,
) -> Option<(Vec<ElemId>, T)> {
    fn dfs<T>(
        translates: &[ElemSet],
        size: usize,
        start: usize,
        chosen: &mut Vec<ElemId>,
        cover: &ElemSet,
        test: &mut dyn FnMut(&[ElemId], &ElemSet) -> Option<T>,
    ) -> Option<T> {
        for t in start..translates.len() {
            if translates.len() - t < size - chosen.len() {
                break;
            }
            if translates[t].is_subset(cover) {
                continue;
            }
            let mut next = cover.clone();
            next.union_with(&translates[t]);
            chosen.push(ElemId(t as u32));
            let hit = if chosen.len() == size {
                test(chosen, &next)
            } else {
                dfs(translates, size, t + 1, chosen, &next, test)
            };
            if hit.is_some() {
                return hit;
            }
            chosen.pop();
        }
        None
    }
    let n = translates.first().map_or(0, |t| t.universe_len());
    for size in 1..=g_max.min(translates.len()) {
        let mut chosen = Vec::with_capacity(size);
        if let Some(v) = dfs(
            translates,
            size,
            0,
            &mut chosen,
            &ElemSet::empty(n),
            &mut test,
        ) {
            return Some((chosen, v));
        }
    }
    None
}

fn all_translates(psg: &PsgInstance, a: &ElemSet) -> Vec<ElemSet> {
    psg.ids()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| translate(psg, a, t))
        .collect()
}

/// Syndetic at bound `g_max`: some `G` with `|G| <= g_max` has
/// `⋃_{t∈G} t⁻¹A` equal to the whole universe.
pub fn is_syndetic(psg: &PsgInstance, a: &ElemSet, g_max: usize) -> LargenessReport {
    let bounds = Bounds::new().with("g", g_max).with("universe", psg.len());
    let translates = all_translates(psg, a);
    let mut total = ElemSet::empty(psg.len());
    translates.iter().for_each(|t| total.union_with(t));
    let found = if total.is_full() {
        search_covers(&translates, g_max, |_, cover| cover.is_full().then_some(()))
    } else {
        None
    };
    LargenessReport {
        notion: Notion::Syndetic,
        verdict: found.is_some(),
        skipped: 0,
        vacuous: false,
        bounds,
        witness: found.map_or(LargenessWitness::None, |(g, _)| LargenessWitness::Cover(g)),
    }
}

/// Piecewise syndetic at bounds `(g_max, b)`: some `G` with `|G| <= g_max`
/// makes `⋃_{t∈G} t⁻¹A` thick at bound `b`.
pub fn is_piecewise_syndetic(
    psg: &PsgInstance,
    a: &ElemSet,
    g_max: usize,
    b: usize,
) -> LargenessReport {
    let bounds = Bounds::new()
        .with("g", g_max)
        .with("b", b)
        .with("universe", psg.len());
    let translates = all_translates(psg, a);
    let mut total = ElemSet::empty(psg.len());
    translates.iter().for_each(|t| total.union_with(t));
    // Thickness is monotone, so if the union of all translates is not
    // thick no G can work.
    let feasible = g_max > 0 && matches!(thick_scan(psg, &total, b), Scan::Holds { .. });
    let mut failed: HashSet<ElemSet> = HashSet::new();
    let found = if feasible {
        search_covers(&translates, g_max, |_, cover| {
            if failed.contains(cover) {
                return None;
            }
            match thick_scan(psg, cover, b) {
                Scan::Holds {
                    map,
                    checked,
                    skipped,
                } => Some((map, checked, skipped)),
                Scan::Blocked(_) => {
                    failed.insert(cover.clone());
                    None
                }
            }
        })
    } else {
        None
    };
    match found {
        Some((g, (map, checked, skipped))) => LargenessReport {
            notion: Notion::PiecewiseSyndetic,
            verdict: true,
            skipped,
            vacuous: checked == 0,
            bounds,
            witness: LargenessWitness::CoverAndTranslations(g, map),
        },
        None => LargenessReport {
            notion: Notion::PiecewiseSyndetic,
            verdict: false,
            skipped: 0,
            vacuous: false,
            bounds,
            witness: LargenessWitness::None,
        },
    }
}

/// č-piecewise syndetic at bounds `(h_max, t_max)`: some `H` with
/// `|H| <= h_max` such that every `T` with `1 <= |T| <= t_max` has
/// `x ∈ σ(T)` with `(T∩σ(H))*x ⊆ ⋃_{s∈H} s⁻¹A`.
pub fn is_c_piecewise_syndetic(
    psg: &PsgInstance,
    a: &ElemSet,
    h_max: usize,
    t_max: usize,
) -> LargenessReport {
    let bounds = Bounds::new()
        .with("h", h_max)
        .with("t", t_max)
        .with("universe", psg.len());
    let translates = all_translates(psg, a);
    for size in 1..=h_max.min(psg.len()) {
        for h in psg.ids().combinations(size) {
            let Ok(sig_h) = psg.sigma(&h) else { continue };
            let mut cover = ElemSet::empty(psg.len());
            h.iter()
                .for_each(|s| cover.union_with(&translates[s.index()]));
            let keep = |f: ElemId, x: ElemId| {
                !sig_h.contains(f) || psg.op(f, x).is_some_and(|v| cover.contains(v))
            };
            if let Scan::Holds {
                map,
                checked,
                skipped,
            } = scan_families(psg, t_max, &keep)
            {
                return LargenessReport {
                    notion: Notion::CPiecewiseSyndetic,
                    verdict: true,
                    skipped,
                    vacuous: checked == 0,
                    bounds,
                    witness: LargenessWitness::CoverAndTranslations(h, map),
                };
            }
        }
    }
    LargenessReport {
        notion: Notion::CPiecewiseSyndetic,
        verdict: false,
        skipped: 0,
        vacuous: false,
        bounds,
        witness: LargenessWitness::None,
    }
}

/// A length-`r` prefix with all finite products in `A`.
pub fn find_ip_r(psg: &PsgInstance, a: &ElemSet, r: usize) -> SearchOutcome<SeqPrefix> {
    sequences::find_fp_sequence(psg, a, r)
}

/// `IP_r*`: no length-`r` prefix has all its finite products outside `A`.
pub fn is_ip_r_star(psg: &PsgInstance, a: &ElemSet, r: usize) -> LargenessReport {
    let bounds = Bounds::new().with("r", r).with("universe", psg.len());
    let avoid = find_ip_r(psg, &a.complement(), r);
    let (verdict, witness) = match avoid {
        SearchOutcome::Found(f) => (false, LargenessWitness::Prefix(f)),
        _ => (true, LargenessWitness::None),
    };
    LargenessReport {
        notion: Notion::IpRStar,
        verdict,
        skipped: 0,
        vacuous: false,
        bounds,
        witness,
    }
}

/// Report form of [`find_ip_r`].
pub fn ip_r_report(psg: &PsgInstance, a: &ElemSet, r: usize) -> LargenessReport {
    let bounds = Bounds::new().with("r", r).with("universe", psg.len());
    let (verdict, witness) = match find_ip_r(psg, a, r) {
        SearchOutcome::Found(f) => (true, LargenessWitness::Prefix(f)),
        _ => (false, LargenessWitness::None),
    };
    LargenessReport {
        notion: Notion::IpR,
        verdict,
        skipped: 0,
        vacuous: false,
        bounds,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_where(psg: &PsgInstance, p: impl Fn(ElemId) -> bool) -> ElemSet {
        ElemSet::from_ids(psg.len(), psg.ids().filter(|&x| p(x)))
    }

    #[test]
    fn thick_examples() {
        let u = PsgInstance::finset_disjoint(3).unwrap();
        let r = is_thick(&u, &ElemSet::empty(u.len()), 1);
        assert!(!r.verdict);

        let z3 = PsgInstance::cyclic_group(3).unwrap();
        assert!(is_thick(&z3, &ElemSet::full(3), 3).verdict);

        // Sets containing 6 are thick at b=1 (x = {6} works whenever 6 is
        // free, otherwise F*x already contains 6). Sets avoiding 6 are not.
        let u6 = PsgInstance::finset_disjoint(6).unwrap();
        let with6 = set_where(&u6, |x| u6.mask_of(x).unwrap() & (1 << 5) != 0);
        assert!(is_thick(&u6, &with6, 1).verdict);
        let r = is_thick(&u6, &with6.complement(), 1);
        assert!(!r.verdict);
        match r.witness {
            // {1,...,5} only composes with {6}.
            LargenessWitness::Blocker(f) => {
                assert_eq!(f, vec![u6.set_id(&[1, 2, 3, 4, 5]).unwrap()])
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn vacuous_flag() {
        let o = PsgInstance::finset_ordered_range(1).unwrap();
        let r = is_thick(&o, &ElemSet::empty(o.len()), 1);
        assert!(r.verdict && r.vacuous);
        assert_eq!(r.skipped, 1);
    }

    #[test]
    fn syndetic_examples() {
        let z3 = PsgInstance::cyclic_group(3).unwrap();
        let zero = ElemSet::from_ids(3, [ElemId(0)]);
        let r = is_syndetic(&z3, &zero, 3);
        assert!(r.verdict);
        assert_eq!(
            r.witness,
            LargenessWitness::Cover(vec![ElemId(0), ElemId(1), ElemId(2)])
        );

        let u = PsgInstance::finset_disjoint(4).unwrap();
        assert!(!is_syndetic(&u, &ElemSet::full(u.len()), 4).verdict);
        assert!(!is_syndetic(&z3, &ElemSet::empty(3), 1).verdict);
    }

    #[test]
    fn piecewise_syndetic_examples() {
        let z3 = PsgInstance::cyclic_group(3).unwrap();
        let zero = ElemSet::from_ids(3, [ElemId(0)]);
        assert!(is_piecewise_syndetic(&z3, &zero, 3, 3).verdict);
        assert!(!is_piecewise_syndetic(&z3, &ElemSet::empty(3), 3, 3).verdict);

        let one = ElemSet::from_ids(3, [ElemId(1)]);
        assert!(is_syndetic(&z3, &one, 3).verdict);
        assert!(is_piecewise_syndetic(&z3, &one, 3, 2).verdict);
    }

    #[test]
    fn cps_examples() {
        let z3 = PsgInstance::cyclic_group(3).unwrap();
        let zero = ElemSet::from_ids(3, [ElemId(0)]);
        assert!(is_c_piecewise_syndetic(&z3, &zero, 3, 3).verdict);
        assert!(!is_c_piecewise_syndetic(&z3, &ElemSet::empty(3), 3, 3).verdict);
        let r = is_c_piecewise_syndetic(&z3, &ElemSet::full(3), 1, 3);
        assert!(r.verdict);
        assert!(
            matches!(r.witness, LargenessWitness::CoverAndTranslations(ref h, _) if h.len() == 1)
        );
    }

    #[test]
    fn ip_examples() {
        let o = PsgInstance::finset_ordered_range(6).unwrap();
        let f = find_ip_r(&o, &ElemSet::full(o.len()), 3)
            .into_found()
            .unwrap();
        assert_eq!(f.show(&o), "[{1},{2},{3}]");

        let z2 = PsgInstance::cyclic_group(2).unwrap();
        let f = find_ip_r(&z2, &ElemSet::from_ids(2, [ElemId(0)]), 5)
            .into_found()
            .unwrap();
        assert_eq!(f.values(), &[ElemId(0); 5]);

        let o2 = PsgInstance::finset_ordered_range(2).unwrap();
        assert!(!find_ip_r(&o2, &ElemSet::full(o2.len()), 3).is_found());

        assert!(is_ip_r_star(&o, &ElemSet::full(o.len()), 4).verdict);
        let r = is_ip_r_star(&z2, &ElemSet::from_ids(2, [ElemId(1)]), 2);
        assert!(!r.verdict);
        assert!(
            matches!(r.witness, LargenessWitness::Prefix(ref p) if p.values() == [ElemId(0), ElemId(0)])
        );

        let with1 = set_where(&o, |x| o.mask_of(x).unwrap() & 1 != 0);
        let r = is_ip_r_star(&o, &with1, 2);
        assert!(!r.verdict);
        match r.witness {
            LargenessWitness::Prefix(p) => assert_eq!(p.show(&o), "[{2},{3}]"),
            w => panic!("unexpected witness {w:?}"),
        }
    }
}
