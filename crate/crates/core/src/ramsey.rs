//! Finite-unions Ramsey search on `P_f([r])`.
//!
//! Sets of positive integers up to 64 are `u64` masks (bit `i` is `i+1`).
//! Colors are `0..k`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits;
use crate::outcome::Bounds;

/// Largest `r` the coloring search accepts (`2^r - 1` cells).
pub const MAX_R: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamseyError {
    #[error("blocks must be nonempty and satisfy max B(i) < min B(i+1)")]
    NotOrdered,
    #[error("r={0} is outside 1..={MAX_R}")]
    RadiusOutOfRange(usize),
    #[error("s and k must be at least 1")]
    ZeroParameter,
    #[error("no monochromatic IP_{s} structure among {r} blocks; r is below the threshold")]
    RTooSmall { r: usize, s: usize },
    #[error("coloring mismatch on union {0}")]
    TransferMismatch(String),
    #[error("no threshold found up to r={0}")]
    BoundExhausted(usize),
}

/// Blocks `B(1) < B(2) < …` with `max B(i) < min B(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSeq {
    blocks: Vec<u64>,
}

impl BlockSeq {
    pub fn new(blocks: Vec<u64>) -> Result<Self, RamseyError> {
        let ok = blocks.iter().all(|&b| b != 0)
            && blocks.windows(2).all(|w| bits::ordered_before(w[0], w[1]));
        if ok {
            Ok(BlockSeq { blocks })
        } else {
            Err(RamseyError::NotOrdered)
        }
    }

    /// `⟨{1}, {2}, …, {r}⟩`.
    pub fn singletons(r: usize) -> Self {
        BlockSeq {
            blocks: (0..r).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `⋃_{j∈F} B(j)` for an index mask `F` (bit `j` is block `j+1`).
    pub fn union_of(&self, index_mask: u64) -> u64 {
        bits::members(index_mask)
            .into_iter()
            .fold(0, |u, j| u | self.blocks[j as usize - 1])
    }

    /// All `2^s - 1` finite unions, in size-then-lexicographic order of index sets.
    pub fn finite_unions(&self) -> Vec<u64> {
        bits::index_sets_size_lex(self.len() as u32)
            .into_iter()
            .map(|f| self.union_of(f))
            .collect()
    }
}

impl fmt::Display for BlockSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|&b| bits::fmt_mask(b)).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

/// Cells of `P_f([r])` ordered by maximum, then lexicographically.
pub fn canonical_cells(r: usize) -> Vec<u64> {
    let mut cells: Vec<u64> = (1..(1u64 << r)).collect();
    cells.sort_by(|&a, &b| {
        bits::max_elem(a)
            .cmp(&bits::max_elem(b))
            .then(bits::lex_cmp(a, b))
    });
    cells
}

/// A total `k`-coloring of `P_f([r])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    r: usize,
    k: u8,
    by_mask: Vec<u8>,
}

impl Coloring {
    pub fn from_fn(r: usize, k: u8, color: impl Fn(u64) -> u8) -> Self {
        let mut by_mask = vec![0u8; 1usize << r];
        for m in 1..(1u64 << r) {
            by_mask[m as usize] = color(m);
        }
        Coloring { r, k, by_mask }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn color(&self, mask: u64) -> u8 {
        self.by_mask[mask as usize]
    }

    /// Colors of the cells in canonical order.
    pub fn cell_colors(&self) -> Vec<(u64, u8)> {
        canonical_cells(self.r)
            .into_iter()
            .map(|c| (c, self.color(c)))
            .collect()
    }

    /// One `subset:color` line per cell, cells in canonical order.
    pub fn certificate_lines(&self) -> Vec<String> {
        self.cell_colors()
            .into_iter()
            .map(|(c, col)| format!("{}:{}", bits::fmt_mask(c), col))
            .collect()
    }

    /// Inverse of [`Coloring::certificate_lines`].
    pub fn parse_certificate(r: usize, k: u8, lines: &[&str]) -> Option<Coloring> {
        let mut by_mask = vec![u8::MAX; 1usize << r];
        by_mask[0] = 0;
        for line in lines {
            let (set, col) = line.rsplit_once(':')?;
            let body = set.trim().strip_prefix('{')?.strip_suffix('}')?;
            let members: Option<Vec<u32>> =
                body.split(',').map(|x| x.trim().parse().ok()).collect();
            let mask = bits::from_members(members?);
            let col: u8 = col.trim().parse().ok()?;
            if mask == 0 || mask >= (1 << r) || col >= k {
                return None;
            }
            by_mask[mask as usize] = col;
        }
        by_mask
            .iter()
            .all(|&c| c != u8::MAX)
            .then_some(Coloring { r, k, by_mask })
    }
}

/// Nonempty subsets of `{lo+1..r}`, lexicographic.
fn blocks_above(lo: u32, r: usize) -> Vec<u64> {
    let ground: u64 = ((1u64 << r) - 1) & !((1u64 << lo) - 1);
    let mut out: Vec<u64> = (1..(1u64 << r)).filter(|&m| m & !ground == 0).collect();
    out.sort_by(|&a, &b| bits::lex_cmp(a, b));
    out
}

/// First (in lexicographic order of block tuples) `s`-tuple of ordered
/// blocks whose finite unions all share a color, or `None` after scanning
/// all of them.
pub fn find_mono_ip(c: &Coloring, s: usize) -> Option<BlockSeq> {
    if s == 0 {
        return Some(BlockSeq { blocks: Vec::new() });
    }
    let above: Vec<Vec<u64>> = (0..=c.r as u32).map(|lo| blocks_above(lo, c.r)).collect();
    fn dfs(
        c: &Coloring,
        above: &[Vec<u64>],
        s: usize,
        color: u8,
        unions: &mut Vec<u64>,
        blocks: &mut Vec<u64>,
    ) -> bool {
        if blocks.len() == s {
            return true;
        }
        let lo = blocks.last().map_or(0, |&b| bits::max_elem(b));
        for &b in &above[lo as usize] {
            if c.color(b) != color || unions.iter().any(|&u| c.color(u | b) != color) {
                continue;
            }
            let before = unions.len();
            for i in 0..before {
                unions.push(unions[i] | b);
            }
            unions.push(b);
            blocks.push(b);
            if dfs(c, above, s, color, unions, blocks) {
                return true;
            }
            blocks.pop();
            unions.truncate(before);
        }
        false
    }
    for &b1 in &above[0] {
        let color = c.color(b1);
        let mut unions = vec![b1];
        let mut blocks = vec![b1];
        if dfs(c, &above, s, color, &mut unions, &mut blocks) {
            return Some(BlockSeq { blocks });
        }
    }
    None
}

/// Per-cell constraint lists: a tuple of ordered blocks is registered at
/// the canonical position of its last finite union and stores the
/// positions of the others.
struct Layout {
    cells: Vec<u64>,
    checks: Vec<Vec<Vec<u32>>>,
}

impl Layout {
    fn new(r: usize, s: usize) -> Self {
        let cells = canonical_cells(r);
        let mut pos = vec![0u32; 1usize << r];
        for (i, &c) in cells.iter().enumerate() {
            pos[c as usize] = i as u32;
        }
        let mut checks = vec![Vec::new(); cells.len()];
        let above: Vec<Vec<u64>> = (0..=r as u32).map(|lo| blocks_above(lo, r)).collect();
        let mut blocks = Vec::with_capacity(s);
        Self::collect(&above, s, &mut blocks, &pos, &mut checks);
        Layout { cells, checks }
    }

    fn collect(
        above: &[Vec<u64>],
        s: usize,
        blocks: &mut Vec<u64>,
        pos: &[u32],
        checks: &mut [Vec<Vec<u32>>],
    ) {
        if blocks.len() == s {
            let seq = BlockSeq {
                blocks: blocks.clone(),
            };
            let mut ps: Vec<u32> = seq
                .finite_unions()
                .iter()
                .map(|&u| pos[u as usize])
                .collect();
            ps.sort_unstable();
            let last = ps.pop().unwrap();
            checks[last as usize].push(ps);
            return;
        }
        let lo = blocks.last().map_or(0, |&b| bits::max_elem(b));
        for &b in &above[lo as usize] {
            blocks.push(b);
            Self::collect(above, s, blocks, pos, checks);
            blocks.pop();
        }
    }

    fn consistent(&self, colors: &[u8], at: usize) -> bool {
        let c = colors[at];
        self.checks[at]
            .iter()
            .all(|others| others.iter().any(|&p| colors[p as usize] != c))
    }

    /// Extends `colors` (a consistent prefix) to a full good coloring, or
    /// exhausts. Each cell takes a color at most one above the largest used
    /// so far, which removes color permutations.
    fn dfs(&self, colors: &mut Vec<u8>, used: u8, k: u8, nodes: &mut u64) -> bool {
        let at = colors.len();
        if at == self.cells.len() {
            return true;
        }
        for c in 0..k.min(used + 1) {
            *nodes += 1;
            colors.push(c);
            if self.consistent(colors, at) && self.dfs(colors, used.max(c + 1), k, nodes) {
                return true;
            }
            colors.pop();
        }
        false
    }

    /// Consistent assignments of the first `depth` cells, in canonical order.
    fn roots(&self, depth: usize, k: u8, nodes: &mut u64) -> Vec<(Vec<u8>, u8)> {
        let mut level = vec![(Vec::new(), 0u8)];
        for at in 0..depth.min(self.cells.len()) {
            let mut next = Vec::new();
            for (colors, used) in level {
                for c in 0..k.min(used + 1) {
                    *nodes += 1;
                    let mut v = colors.clone();
                    v.push(c);
                    if self.consistent(&v, at) {
                        next.push((v, used.max(c + 1)));
                    }
                }
            }
            level = next;
        }
        level
    }
}

/// Outcome of a good-coloring search at one `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodColoringSearch {
    pub r: usize,
    /// The canonical-least good coloring, if any.
    pub good: Option<Coloring>,
    /// Assignments tried; reported only when the search exhausts.
    pub nodes: Option<u64>,
}

/// Searches for a `k`-coloring of `P_f([r])` with no monochromatic `IP_s`.
pub fn search_good_coloring(r: usize, s: usize, k: u8) -> Result<GoodColoringSearch, RamseyError> {
    if s == 0 || k == 0 {
        return Err(RamseyError::ZeroParameter);
    }
    if r == 0 || r > MAX_R {
        return Err(RamseyError::RadiusOutOfRange(r));
    }
    let layout = Layout::new(r, s);
    let mut root_nodes = 0;
    let roots = layout.roots(8, k, &mut root_nodes);
    let results: Vec<(Option<Vec<u8>>, u64)> = roots
        .into_par_iter()
        .map(|(mut colors, used)| {
            let mut nodes = 0;
            let ok = layout.dfs(&mut colors, used, k, &mut nodes);
            (ok.then_some(colors), nodes)
        })
        .collect();
    let found = results.iter().find_map(|(c, _)| c.clone());
    let nodes = root_nodes + results.iter().map(|(_, n)| n).sum::<u64>();
    Ok(match found {
        Some(colors) => {
            let mut by_mask = vec![0u8; 1usize << r];
            for (cell, col) in layout.cells.iter().zip(colors) {
                by_mask[*cell as usize] = col;
            }
            GoodColoringSearch {
                r,
                good: Some(Coloring { r, k, by_mask }),
                nodes: None,
            }
        }
        None => GoodColoringSearch {
            r,
            good: None,
            nodes: Some(nodes),
        },
    })
}

/// Result of [`fu_ramsey_number`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuRamsey {
    /// Least `r` forcing a monochromatic `IP_s`, when found within `r_max`.
    pub r: Option<usize>,
    /// Good coloring at `r - 1` (or at `r_max` when no threshold was found);
    /// `None` when `r = 1`.
    pub good: Option<Coloring>,
    /// Nodes explored by the exhausting search at `r`.
    pub nodes: Option<u64>,
    pub bounds: Bounds,
}

/// Least `r <= r_max` such that every `k`-coloring of `P_f([r])` has a
/// monochromatic `IP_s`. Good colorings restrict to smaller `r`, so the
/// first `r` without one is the answer.
pub fn fu_ramsey_number(s: usize, k: u8, r_max: usize) -> Result<FuRamsey, RamseyError> {
    if s == 0 || k == 0 {
        return Err(RamseyError::ZeroParameter);
    }
    let bounds = Bounds::new().with("s", s).with("k", k).with("r_max", r_max);
    let mut good = None;
    for r in 1..=r_max.min(MAX_R) {
        let res = search_good_coloring(r, s, k)?;
        match res.good {
            Some(c) => good = Some(c),
            None => {
                return Ok(FuRamsey {
                    r: Some(r),
                    good,
                    nodes: res.nodes,
                    bounds,
                })
            }
        }
    }
    Ok(FuRamsey {
        r: None,
        good,
        nodes: None,
        bounds,
    })
}

/// Finds `s` blocks, each a union of blocks of `h`, whose finite unions all
/// get the same color under `c`.
pub fn transfer_coloring(
    h: &BlockSeq,
    c: impl Fn(u64) -> u8,
    k: u8,
    s: usize,
) -> Result<BlockSeq, RamseyError> {
    let r = h.len();
    if r == 0 || r > MAX_R {
        return Err(RamseyError::RadiusOutOfRange(r));
    }
    let d = Coloring::from_fn(r, k, |f| c(h.union_of(f)));
    let f_blocks = find_mono_ip(&d, s).ok_or(RamseyError::RTooSmall { r, s })?;
    let k_blocks = BlockSeq::new(f_blocks.blocks().iter().map(|&f| h.union_of(f)).collect())?;
    let target = c(k_blocks.blocks()[0]);
    for (f_union, k_union) in f_blocks
        .finite_unions()
        .into_iter()
        .zip(k_blocks.finite_unions())
    {
        if d.color(f_union) != c(k_union) || c(k_union) != target {
            return Err(RamseyError::TransferMismatch(bits::fmt_mask(k_union)));
        }
    }
    Ok(k_blocks)
}

/// `q` with the property that any two-colored `IP_q` set contains a
/// monochromatic `IP_max(r,s)`: the finite-unions number for `(max(r,s), 2)`.
pub fn ip_star_intersection_q(r: usize, s: usize, r_max: usize) -> Result<usize, RamseyError> {
    fu_ramsey_number(r.max(s), 2, r_max)?
        .r
        .ok_or(RamseyError::BoundExhausted(r_max))
}
