//! Exact set-system searches over `u128` masks shared by the brute-force
//! backends: maximum disjoint subfamily and minimum hitting set.

use std::collections::HashMap;

/// Indices of a maximum pairwise-disjoint subfamily of `masks`, or of
/// `min(limit, optimum)` of them when only `limit` are wanted.
pub(crate) fn max_disjoint(masks: &[u128], limit: usize) -> Vec<usize> {
    struct Packer<'a> {
        masks: &'a [u128],
        memo: HashMap<u128, usize>,
    }
    impl Packer<'_> {
        fn live(&self, avail: u128) -> Vec<usize> {
            (0..self.masks.len()).filter(|&i| self.masks[i] & !avail == 0).collect()
        }

        // Best count inside `avail`, capped at `cap` (cached values are exact
        // or at least `cap`, which is all any caller asks about).
        fn best(&mut self, avail: u128, cap: usize) -> usize {
            if cap == 0 {
                return 0;
            }
            if let Some(&n) = self.memo.get(&avail) {
                return n;
            }
            let live = self.live(avail);
            let union = live.iter().fold(0u128, |a, &i| a | self.masks[i]);
            let n = if union == 0 {
                0
            } else {
                let low = union & union.wrapping_neg();
                let mut n = 0;
                for &i in &live {
                    if self.masks[i] & low != 0 {
                        n = n.max(1 + self.best(avail & !self.masks[i], cap - 1));
                        if n >= cap {
                            break;
                        }
                    }
                }
                if n < cap {
                    n = n.max(self.best(avail & !low, cap));
                }
                n
            };
            let n = n.min(cap);
            // a capped value is only safe to reuse under the same or a lower cap
            if n < cap {
                self.memo.insert(avail, n);
            }
            n
        }
    }

    let mut p = Packer { masks, memo: HashMap::new() };
    let full = masks.iter().fold(0u128, |a, m| a | m);
    let target = p.best(full, limit);
    let mut chosen = Vec::with_capacity(target);
    let mut avail = full;
    while chosen.len() < target {
        let need = target - chosen.len();
        let live = p.live(avail);
        let union = live.iter().fold(0u128, |a, &i| a | masks[i]);
        let low = union & union.wrapping_neg();
        let pick = live
            .iter()
            .copied()
            .find(|&i| masks[i] & low != 0 && 1 + p.best(avail & !masks[i], need - 1) >= need);
        match pick {
            Some(i) => {
                chosen.push(i);
                avail &= !masks[i];
            }
            None => avail &= !low,
        }
    }
    chosen
}

/// A minimum set of bits meeting every mask, found by iterative deepening
/// and branching on the smallest unmet mask. `None` if more than `limit`
/// bits would be needed.
pub(crate) fn min_hitting_set(masks: &[u128], limit: usize) -> Option<u128> {
    // Disjoint unmet masks each need their own bit.
    fn lower_bound(masks: &[u128], hit: u128) -> usize {
        let mut taken = 0u128;
        let mut n = 0;
        for &m in masks {
            if m & hit == 0 && m & taken == 0 {
                taken |= m;
                n += 1;
            }
        }
        n
    }
    fn go(masks: &[u128], hit: u128, left: usize) -> Option<u128> {
        let open = masks.iter().filter(|&&m| m & hit == 0).min_by_key(|m| m.count_ones());
        let Some(&m) = open else { return Some(hit) };
        if left == 0 || lower_bound(masks, hit) > left {
            return None;
        }
        let mut rest = m;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            rest &= !b;
            if let Some(found) = go(masks, hit | b, left - 1) {
                return Some(found);
            }
        }
        None
    }
    (0..=limit.min(masks.len())).find_map(|size| go(masks, 0, size))
}

/// Sorts by size and drops every mask containing an earlier one.
pub(crate) fn minimal_masks<T>(mut items: Vec<(u128, T)>) -> Vec<(u128, T)> {
    items.sort_by_key(|(m, _)| (m.count_ones(), *m));
    let mut kept: Vec<(u128, T)> = Vec::new();
    for (m, t) in items {
        if !kept.iter().any(|(k, _)| k & m == *k) {
            kept.push((m, t));
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_and_hitting() {
        // a triangle of pairwise-overlapping sets plus one disjoint set
        let masks = [0b0011, 0b0110, 0b0101, 0b1000];
        assert_eq!(max_disjoint(&masks, usize::MAX).len(), 2);
        assert_eq!(max_disjoint(&masks, 1).len(), 1);
        let hit = min_hitting_set(&masks, 10).unwrap();
        assert_eq!(hit.count_ones(), 3);
        assert!(masks.iter().all(|m| m & hit != 0));
        assert_eq!(min_hitting_set(&masks, 2), None);
        assert_eq!(min_hitting_set(&[], 0), Some(0));
    }

    #[test]
    fn minimal_drops_supersets() {
        let kept = minimal_masks(vec![(0b111, 'a'), (0b011, 'b'), (0b100, 'c'), (0b011, 'd')]);
        let masks: Vec<u128> = kept.iter().map(|(m, _)| *m).collect();
        assert_eq!(masks, vec![0b100, 0b011]);
    }

    #[test]
    fn capped_memo_does_not_undercount() {
        // ask with a small cap first inside the search, then the full value
        let masks: Vec<u128> = (0..6).map(|i| 1u128 << i).collect();
        assert_eq!(max_disjoint(&masks, 3).len(), 3);
        assert_eq!(max_disjoint(&masks, usize::MAX).len(), 6);
    }
}
