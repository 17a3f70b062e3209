use std::collections::BTreeSet;

use crate::graph::Graph;

const MAX_N: usize = 8;

#[inline]
fn bit(u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    1 << (b * (b - 1) / 2 + a)
}

fn has(mask: u64, u: usize, v: usize) -> bool {
    mask & bit(u, v) != 0
}

/// Colour refinement starting from degrees; colours are ranks of sorted
/// signatures, so they do not depend on the labelling.
fn refine(n: usize, mask: u64) -> Vec<usize> {
    let mut colour: Vec<usize> = (0..n).map(|u| (0..n).filter(|&v| v != u && has(mask, u, v)).count()).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut nb: Vec<usize> = (0..n).filter(|&v| v != u && has(mask, u, v)).map(|v| colour[v]).collect();
                nb.sort_unstable();
                (colour[u], nb)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let rank: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank.binary_search(&s).expect("present")).collect();
        let before = colour.iter().collect::<BTreeSet<_>>().len();
        let after = rank.len();
        colour = next;
        if after == before {
            return colour;
        }
    }
}

/// Smallest edge bitmask over relabellings that keep refined colour classes
/// in colour order. Two graphs are isomorphic iff their forms are equal.
pub fn canonical_form(n: usize, mask: u64) -> u64 {
    assert!(n <= MAX_N);
    let colour = refine(n, mask);
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&v| colour[v]);
    // slot i may hold any vertex with colour equal to colour[slots[i]]
    let slot_colour: Vec<usize> = slots.iter().map(|&v| colour[v]).collect();
    let mut placed = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut best = u64::MAX;
    fn rec(
        i: usize,
        n: usize,
        mask: u64,
        colour: &[usize],
        slot_colour: &[usize],
        placed: &mut [usize],
        used: &mut [bool],
        best: &mut u64,
    ) {
        if i == n {
            let mut m = 0u64;
            for a in 0..n {
                for b in a + 1..n {
                    if has(mask, placed[a], placed[b]) {
                        m |= bit(a, b);
                    }
                }
            }
            *best = (*best).min(m);
            return;
        }
        for v in 0..n {
            if !used[v] && colour[v] == slot_colour[i] {
                used[v] = true;
                placed[i] = v;
                rec(i + 1, n, mask, colour, slot_colour, placed, used, best);
                used[v] = false;
            }
        }
    }
    rec(0, n, mask, &colour, &slot_colour, &mut placed, &mut used, &mut best);
    best
}

fn to_graph(n: usize, mask: u64) -> Graph {
    let mut e = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if has(mask, a, b) {
                e.push((a, b));
            }
        }
    }
    Graph::new(n, e).expect("enumerated graphs are connected")
}

/// One representative of every connected graph on `n` vertices up to
/// isomorphism, for `1 <= n <= 8`.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// adding a vertex with a nonempty neighbourhood to each smaller graph
/// reaches all of them.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=MAX_N).contains(&n));
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for &mask in &level {
            for nb in 1u64..(1 << (size - 1)) {
                let mut m = mask;
                for u in 0..size - 1 {
                    if nb >> u & 1 == 1 {
                        m |= bit(u, size - 1);
                    }
                }
                next.insert(canonical_form(size, m));
            }
        }
        level = next;
    }
    level.into_iter().map(|m| to_graph(n, m)).collect()
}
