#![allow(dead_code)]

use rigidkit::io::read_graph6;
use rigidkit::{Edge, Graph};

pub const ROUNDTRIP: &str = include_str!("../data/reference_roundtrip.tsv");
pub const ATLAS: &str = include_str!("../data/atlas.g6");

/// Unlabeled graphs on n = 0..=7 vertices.
pub const UNLABELED: [u64; 8] = [1, 1, 2, 4, 11, 34, 156, 1044];
/// Connected labeled graphs on n = 0..=7 vertices.
pub const CONNECTED_LABELED: [u64; 8] = [1, 1, 1, 4, 38, 728, 26704, 1866256];

/// `(graph6, n, edges)` rows written by the reference encoder.
pub fn reference_rows() -> Vec<(String, usize, Vec<Edge>)> {
    ROUNDTRIP
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let mut cols = l.split('\t');
            let g6 = cols.next().unwrap().to_string();
            let n = cols.next().unwrap().parse().unwrap();
            let edges = cols
                .next()
                .unwrap_or("")
                .split(',')
                .filter(|e| !e.is_empty())
                .map(|e| {
                    let (u, v) = e.split_once('-').unwrap();
                    (u.parse().unwrap(), v.parse().unwrap())
                })
                .collect();
            (g6, n, edges)
        })
        .collect()
}

pub fn atlas() -> Vec<Graph> {
    read_graph6(ATLAS, "atlas.g6").unwrap()
}

/// Size of the automorphism group, by trying every vertex permutation.
pub fn automorphisms(g: &Graph) -> u64 {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        if g.edges().iter().all(|&(u, v)| g.has_edge(perm[u], perm[v])) {
            count += 1;
        }
        // Next permutation in lexicographic order.
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { return count };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Per vertex count: unlabeled classes, labeled graphs and connected
/// labeled graphs, summing `n! / |Aut|` over the atlas.
pub fn atlas_counts() -> Vec<(u64, u64, u64)> {
    let mut out = vec![(0, 0, 0); 8];
    for g in atlas() {
        let labeled = factorial(g.n()) / automorphisms(&g);
        let row = &mut out[g.n()];
        row.0 += 1;
        row.1 += labeled;
        if g.is_connected() {
            row.2 += labeled;
        }
    }
    out
}
