//! Small helpers for subsets of `[1..64]` stored as `u64` masks.
//!
//! Bit `i` stands for the positive integer `i + 1`.

use std::cmp::Ordering;

/// Compares two masks as increasing lists of their members, lexicographically.
///
/// A proper prefix sorts first, so `{1} < {1,2} < {1,3} < {2}`.
pub fn lex_cmp(mut a: u64, mut b: u64) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Size first, then [`lex_cmp`]. This is the canonical order on index sets.
pub fn size_lex_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| lex_cmp(a, b))
}

/// Largest member (1-based). Panics on the empty mask.
pub fn max_elem(mask: u64) -> u32 {
    assert!(mask != 0, "max of empty set");
    64 - mask.leading_zeros()
}

/// Smallest member (1-based). Panics on the empty mask.
pub fn min_elem(mask: u64) -> u32 {
    assert!(mask != 0, "min of empty set");
    mask.trailing_zeros() + 1
}

/// Members in increasing order, 1-based.
pub fn members(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// Builds a mask from 1-based members. Members must lie in `1..=64`.
pub fn from_members<I: IntoIterator<Item = u32>>(items: I) -> u64 {
    items.into_iter().fold(0u64, |m, x| {
        debug_assert!((1..=64).contains(&x));
        m | (1u64 << (x - 1))
    })
}

/// `max(a) < min(b)`; both masks nonempty.
#[inline]
pub fn ordered_before(a: u64, b: u64) -> bool {
    63 - a.leading_zeros() < b.trailing_zeros()
}

/// Formats a mask as a set literal such as `{1,3}`.
pub fn fmt_mask(mask: u64) -> String {
    let parts: Vec<String> = members(mask).iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// All nonempty subsets of `[1..r]` as masks, in size-then-lex order.
pub fn index_sets_size_lex(r: u32) -> Vec<u64> {
    assert!(r < 64);
    let mut all: Vec<u64> = (1..(1u64 << r)).collect();
    all.sort_by(|&a, &b| size_lex_cmp(a, b));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_matches_vec_order() {
        let mut masks: Vec<u64> = (1..64).collect();
        masks.sort_by(|&a, &b| lex_cmp(a, b));
        let lists: Vec<Vec<u32>> = masks.iter().map(|&m| members(m)).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
    }

    #[test]
    fn min_max_and_order() {
        let m = from_members([2, 5, 7]);
        assert_eq!(min_elem(m), 2);
        assert_eq!(max_elem(m), 7);
        assert!(ordered_before(from_members([1, 2]), from_members([3])));
        assert!(!ordered_before(from_members([1, 3]), from_members([2])));
        assert_eq!(fmt_mask(m), "{2,5,7}");
    }

    #[test]
    fn size_lex_puts_small_sets_first() {
        let order = index_sets_size_lex(3);
        let lists: Vec<Vec<u32>> = order.iter().map(|&m| members(m)).collect();
        assert_eq!(
            lists,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }
}
