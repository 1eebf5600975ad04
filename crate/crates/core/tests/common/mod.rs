//! Generators and brute-force oracles shared by the integration tests.
//!
//! The oracles only touch `PsgInstance::op` and plain loops; none of them
//! call the search or checker code they are compared against.

#![allow(dead_code)]

use std::collections::HashSet;

use crich::jcr::Witness;
use crich::ramsey::Coloring;
use crich::{ElemId, ElemSet, Element, PsgInstance, SeqPrefix};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------------------
// total tables

fn table(n: u32, f: impl Fn(u32, u32) -> u32) -> PsgInstance {
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| Some(f(i, j)))
        .collect();
    PsgInstance::from_table(n, entries).expect("generated table is associative")
}

/// A random total semigroup on at most `max_n` atoms, drawn from a handful
/// of associative shapes.
pub fn random_total_table<R: Rng>(rng: &mut R, max_n: u32) -> PsgInstance {
    let n = rng.gen_range(2..=max_n);
    match rng.gen_range(0..8) {
        0 => table(n, |i, j| (i + j) % n),
        1 => table(n, |i, j| (i * j) % n),
        2 => table(n, |i, _| i),
        3 => table(n, |_, j| j),
        4 => table(n, |i, j| i.max(j)),
        5 => table(n, |i, j| i.min(j)),
        6 => {
            // rectangular band on I×J, atoms i*cols+j
            let rows = rng.gen_range(1..=n.min(4));
            let cols = (n / rows).max(1);
            table(rows * cols, move |x, y| (x / cols) * cols + y % cols)
        }
        _ => {
            // truncated addition: x+y capped at n-1
            table(n, |i, j| (i + j).min(n - 1))
        }
    }
}

/// Random subset of the universe, each element kept with probability `p`.
pub fn random_set<R: Rng>(rng: &mut R, psg: &PsgInstance, p: f64) -> ElemSet {
    ElemSet::from_ids(psg.len(), psg.ids().filter(|_| rng.gen_bool(p)))
}

// ---------------------------------------------------------------------------
// disjoint-block pools in the disjoint-union family

/// A prefix of `len` pairwise disjoint nonempty subsets of `[1..n]`. Points
/// are shuffled and dealt into blocks; some points may stay unused.
pub fn disjoint_block_prefix<R: Rng>(
    rng: &mut R,
    psg: &PsgInstance,
    n: u32,
    len: usize,
) -> SeqPrefix {
    let points: Vec<u32> = (1..=n).collect();
    disjoint_block_prefix_in(rng, psg, &points, len)
}

/// As [`disjoint_block_prefix`], drawing only from `points`. Works in any
/// instance whose elements include the small sets used.
pub fn disjoint_block_prefix_in<R: Rng>(
    rng: &mut R,
    psg: &PsgInstance,
    points: &[u32],
    len: usize,
) -> SeqPrefix {
    assert!(len <= points.len());
    let mut points = points.to_vec();
    points.shuffle(rng);
    let mut blocks: Vec<Vec<u32>> = points[..len].iter().map(|&p| vec![p]).collect();
    for &p in &points[len..] {
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..len);
            blocks[i].push(p);
        }
    }
    let vals = blocks.into_iter().map(|b| small_set(psg, b)).collect();
    SeqPrefix::new(psg, vals).expect("disjoint blocks form a valid prefix")
}

/// Id of the small set with these members (any order).
pub fn small_set(psg: &PsgInstance, mut members: Vec<u32>) -> ElemId {
    members.sort_unstable();
    psg.id_of(&Element::SmallSet(members))
        .expect("small set is a member")
}

/// Id of the rational set with these integer members (any order).
pub fn int_set(psg: &PsgInstance, mut members: Vec<i64>) -> ElemId {
    members.sort_unstable();
    let v = members.into_iter().map(Rational64::from_integer).collect();
    psg.id_of(&Element::RatSet(v))
        .expect("rational set is a member")
}

/// An ordered-union prefix: `len` blocks cut from a random increasing
/// selection of `[1..n]`.
pub fn ordered_block_prefix<R: Rng>(
    rng: &mut R,
    psg: &PsgInstance,
    n: i64,
    len: usize,
) -> SeqPrefix {
    let mut pts: Vec<i64> = (1..=n).collect();
    pts.shuffle(rng);
    let take = rng.gen_range(len..=n as usize);
    let mut pts = pts[..take].to_vec();
    pts.sort_unstable();
    let mut cuts: Vec<usize> = (1..take).collect();
    cuts.shuffle(rng);
    let mut cuts = cuts[..len - 1].to_vec();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(take);
    let vals = bounds
        .windows(2)
        .map(|w| int_set(psg, pts[w[0]..w[1]].to_vec()))
        .collect();
    SeqPrefix::new(psg, vals).expect("ordered blocks form a valid prefix")
}

/// `L` with `|⋃L| = d`: `d` random points split into 1..=d nonempty sets.
pub fn random_l<R: Rng>(rng: &mut R, psg: &PsgInstance, n: u32, d: usize) -> Vec<ElemId> {
    let mut points: Vec<u32> = (1..=n).collect();
    points.shuffle(rng);
    let points = &points[..d];
    let parts = rng.gen_range(1..=d);
    let mut sets: Vec<Vec<u32>> = vec![Vec::new(); parts];
    for (i, &p) in points.iter().enumerate() {
        let slot = if i < parts {
            i
        } else {
            rng.gen_range(0..parts)
        };
        sets[slot].push(p);
    }
    sets.iter_mut().for_each(|s| s.sort_unstable());
    let mut l: Vec<ElemId> = sets.iter().map(|s| psg.set_id(s).unwrap()).collect();
    l.sort_unstable();
    l.dedup();
    l
}

// ---------------------------------------------------------------------------
// elementary oracles

/// `σ(F)` by direct scan.
pub fn brute_sigma(psg: &PsgInstance, fam: &[ElemId]) -> Vec<ElemId> {
    psg.ids()
        .filter(|&b| fam.iter().all(|&a| psg.op(a, b).is_some()))
        .collect()
}

/// Left-to-right product, `None` if any step is undefined.
pub fn brute_product(psg: &PsgInstance, xs: &[ElemId]) -> Option<ElemId> {
    let mut it = xs.iter();
    let mut v = *it.next()?;
    for &x in it {
        v = psg.op(v, x)?;
    }
    Some(v)
}

/// Nonempty subsets of `[1..r]` as 1-based index lists, size first then lex.
pub fn index_sets(r: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << r))
        .map(|m| (0..r).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Least index set (size, then lex) whose product is undefined.
pub fn brute_first_violation(psg: &PsgInstance, values: &[ElemId]) -> Option<Vec<usize>> {
    index_sets(values.len()).into_iter().find(|h| {
        let items: Vec<ElemId> = h.iter().map(|&t| values[t - 1]).collect();
        brute_product(psg, &items).is_none()
    })
}

/// All finite products of `values`, or `None` if one is undefined.
pub fn brute_fp(psg: &PsgInstance, values: &[ElemId]) -> Option<Vec<ElemId>> {
    index_sets(values.len())
        .into_iter()
        .map(|h| {
            let items: Vec<ElemId> = h.iter().map(|&t| values[t - 1]).collect();
            brute_product(psg, &items)
        })
        .collect()
}

/// Calls `visit` on every length-`r` tuple over the universe.
pub fn for_each_tuple(
    psg: &PsgInstance,
    r: usize,
    mut visit: impl FnMut(&[ElemId]) -> bool,
) -> bool {
    let n = psg.len();
    let mut idx = vec![0usize; r];
    loop {
        let tuple: Vec<ElemId> = idx.iter().map(|&i| ElemId(i as u32)).collect();
        if visit(&tuple) {
            return true;
        }
        let mut p = r;
        loop {
            if p == 0 {
                return false;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Some length-`r` tuple with every finite product defined and in `a`.
pub fn brute_ip_r(psg: &PsgInstance, a: &ElemSet, r: usize) -> bool {
    for_each_tuple(psg, r, |t| {
        brute_fp(psg, t).is_some_and(|fp| fp.iter().all(|&x| a.contains(x)))
    })
}

/// Every valid length-`r` tuple has a finite product in `a`.
pub fn brute_ip_r_star(psg: &PsgInstance, a: &ElemSet, r: usize) -> bool {
    !for_each_tuple(psg, r, |t| {
        brute_fp(psg, t).is_some_and(|fp| fp.iter().all(|&x| !a.contains(x)))
    })
}

/// Interleaved product `a(1)*f(t(1))*…*a(m+1)` evaluated step by step.
pub fn interleave(psg: &PsgInstance, a: &[ElemId], t: &[usize], f: &SeqPrefix) -> Option<ElemId> {
    let mut v = a[0];
    for (j, &tj) in t.iter().enumerate() {
        v = psg.op(v, f.values()[tj - 1])?;
        v = psg.op(v, a[j + 1])?;
    }
    Some(v)
}

/// Independent witness check against `A ∩ σ(L)`.
pub fn brute_witness_ok(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    w: &Witness,
) -> bool {
    let sl = brute_sigma(psg, l);
    fam.iter().all(|f| {
        w.t.iter().all(|&t| t <= f.len())
            && interleave(psg, &w.a, &w.t, f).is_some_and(|v| a.contains(v) && sl.contains(&v))
    })
}

/// Strictly increasing tuples over `[1..r]` of length `1..=m_max`.
pub fn increasing_tuples(r: usize, m_max: usize) -> Vec<Vec<usize>> {
    index_sets(r)
        .into_iter()
        .filter(|h| h.len() <= m_max)
        .collect()
}

/// Exhaustive witness existence by reachable value tuples: after each
/// step the set of simultaneously reachable `(v_f)_f` over every choice of
/// the `a`-entries so far. Equivalent to trying every `a`-tuple.
pub fn brute_witness_exists(
    psg: &PsgInstance,
    a: &ElemSet,
    l: &[ElemId],
    fam: &[SeqPrefix],
    r: usize,
    m_max: usize,
) -> bool {
    let sl: HashSet<ElemId> = brute_sigma(psg, l).into_iter().collect();
    increasing_tuples(r, m_max).into_iter().any(|t| {
        let mut states: HashSet<Vec<ElemId>> = psg.ids().map(|x| vec![x; fam.len()]).collect();
        for &tj in &t {
            let stepped: HashSet<Vec<ElemId>> = states
                .iter()
                .filter_map(|s| {
                    s.iter()
                        .zip(fam)
                        .map(|(&v, f)| psg.op(v, f.values()[tj - 1]))
                        .collect::<Option<Vec<_>>>()
                })
                .collect();
            states = stepped
                .iter()
                .flat_map(|s| {
                    psg.ids().filter_map(move |x| {
                        s.iter().map(|&v| psg.op(v, x)).collect::<Option<Vec<_>>>()
                    })
                })
                .collect();
        }
        states
            .iter()
            .any(|s| s.iter().all(|v| a.contains(*v) && sl.contains(v)))
    })
}

// ---------------------------------------------------------------------------
// largeness oracles on total tables (at most 64 atoms, bitmask form)

fn mask_of(a: &ElemSet) -> u64 {
    a.iter().fold(0, |m, x| m | 1 << x.0)
}

/// `t⁻¹A` as a mask.
fn translate_mask(psg: &PsgInstance, a: u64, t: usize) -> u64 {
    (0..psg.len())
        .filter(|&s| {
            psg.op(ElemId(t as u32), ElemId(s as u32))
                .is_some_and(|v| a >> v.0 & 1 == 1)
        })
        .fold(0, |m, s| m | 1 << s)
}

/// Thick: every nonempty `F` has some `x` with `F*x ⊆ A`.
pub fn oracle_thick_mask(psg: &PsgInstance, a: u64) -> bool {
    let n = psg.len();
    // good[x]: the f with f*x ∈ A. F*x ⊆ A iff F ⊆ good[x].
    let good: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&f| {
                    psg.op(ElemId(f as u32), ElemId(x as u32))
                        .is_some_and(|v| a >> v.0 & 1 == 1)
                })
                .fold(0, |m, f| m | 1 << f)
        })
        .collect();
    (1u64..(1 << n)).all(|f| good.iter().any(|&g| f & !g == 0))
}

pub fn oracle_thick(psg: &PsgInstance, a: &ElemSet) -> bool {
    oracle_thick_mask(psg, mask_of(a))
}

/// Syndetic: some nonempty `G` with `⋃_{t∈G} t⁻¹A = S`.
pub fn oracle_syndetic(psg: &PsgInstance, a: &ElemSet) -> bool {
    let n = psg.len();
    let am = mask_of(a);
    let tr: Vec<u64> = (0..n).map(|t| translate_mask(psg, am, t)).collect();
    let full = (1u64 << n) - 1;
    (1u64..(1 << n)).any(|g| {
        (0..n)
            .filter(|&t| g >> t & 1 == 1)
            .fold(0, |u, t| u | tr[t])
            == full
    })
}

/// Piecewise syndetic: some nonempty `G` with `⋃_{t∈G} t⁻¹A` thick.
pub fn oracle_piecewise_syndetic(psg: &PsgInstance, a: &ElemSet) -> bool {
    let n = psg.len();
    let am = mask_of(a);
    let tr: Vec<u64> = (0..n).map(|t| translate_mask(psg, am, t)).collect();
    let mut seen: HashSet<u64> = HashSet::new();
    (1u64..(1 << n)).any(|g| {
        let u = (0..n)
            .filter(|&t| g >> t & 1 == 1)
            .fold(0, |u, t| u | tr[t]);
        seen.insert(u) && oracle_thick_mask(psg, u)
    })
}

// ---------------------------------------------------------------------------
// finite-unions colorings

/// Every ordered `s`-tuple of blocks in `P_f([r])`, as the list of its
/// finite unions.
pub fn fu_systems(r: usize, s: usize) -> Vec<Vec<u64>> {
    fn rec(r: usize, s: usize, lo: u32, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if blocks.len() == s {
            let fu = (1u64..(1 << s))
                .map(|f| {
                    (0..s)
                        .filter(|&j| f >> j & 1 == 1)
                        .fold(0, |u, j| u | blocks[j])
                })
                .collect();
            out.push(fu);
            return;
        }
        for b in 1u64..(1 << r) {
            if b & ((1u64 << lo) - 1) == 0 {
                blocks.push(b);
                rec(r, s, 64 - b.leading_zeros(), blocks, out);
                blocks.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(r, s, 0, &mut Vec::new(), &mut out);
    out
}

/// Whether `c` has a monochromatic `IP_s` system, by scanning all of them.
pub fn brute_has_mono(c: &Coloring, s: usize) -> bool {
    fu_systems(c.r(), s)
        .iter()
        .any(|fu| fu.iter().all(|&u| c.color(u) == c.color(fu[0])))
}

/// Exhaustive count of 2-colorings of `P_f([r])` with no monochromatic
/// `IP_s`. Colorings are bit strings over cells `1..2^r`, cell `m` at bit `m-1`.
pub fn count_good_two_colorings(r: usize, s: usize) -> u64 {
    let cells = (1usize << r) - 1;
    assert!(cells <= 31);
    let systems: Vec<u32> = fu_systems(r, s)
        .iter()
        .map(|fu| fu.iter().fold(0u32, |m, &u| m | 1 << (u - 1)))
        .collect();
    (0u32..(1u32 << cells))
        .filter(|&c| systems.iter().all(|&m| c & m != 0 && c & m != m))
        .count() as u64
}
