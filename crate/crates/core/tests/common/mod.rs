#![allow(dead_code)]

use std::collections::BTreeSet;

use matching_arrangement::Graph;

/// Small named graphs used across the integration suites.
pub fn fixtures() -> Vec<(&'static str, Graph)> {
    let g = |v: usize, e: &[(usize, usize)]| Graph::new(v, e.to_vec()).unwrap();
    vec![
        ("single edge", g(2, &[(0, 1)])),
        ("two disjoint edges", g(4, &[(0, 1), (2, 3)])),
        ("P3", g(3, &[(0, 1), (1, 2)])),
        ("K3", g(3, &[(0, 1), (1, 2), (0, 2)])),
        ("P4", g(4, &[(0, 1), (1, 2), (2, 3)])),
        ("star K1,3", g(4, &[(0, 1), (0, 2), (0, 3)])),
        ("C4", g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("paw", g(4, &[(0, 1), (1, 2), (2, 0), (2, 3)])),
        ("P3 + edge", g(5, &[(0, 1), (1, 2), (3, 4)])),
        ("diamond", g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])),
        ("C5", g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])),
    ]
}

/// Sorted edge list of the lexicographically smallest relabeling.
fn canonical_form(vertices: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..vertices).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut relabeled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
        // next permutation
        let Some(i) = (1..vertices).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..vertices).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap_or_default()
}

/// Every connected graph with `1..=max_edges` edges, one per isomorphism
/// class, grown edge by edge from a single edge.
pub fn connected_graphs(max_edges: usize) -> Vec<Graph> {
    let mut level: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    level.insert((2, vec![(0, 1)]));
    let mut all: Vec<(usize, Vec<(usize, usize)>)> = level.iter().cloned().collect();
    for _ in 1..max_edges {
        let mut next = BTreeSet::new();
        for (v, edges) in &level {
            let present: BTreeSet<(usize, usize)> = edges.iter().cloned().collect();
            for a in 0..*v {
                // to a new vertex
                let mut grown = edges.clone();
                grown.push((a, *v));
                next.insert((*v + 1, canonical_form(*v + 1, &grown)));
                for b in a + 1..*v {
                    if !present.contains(&(a, b)) {
                        let mut grown = edges.clone();
                        grown.push((a, b));
                        next.insert((*v, canonical_form(*v, &grown)));
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all.into_iter().map(|(v, e)| Graph::new(v, e).unwrap()).collect()
}

pub fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("[{}]", edges.join(" "))
}
