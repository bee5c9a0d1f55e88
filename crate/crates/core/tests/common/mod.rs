//! Independent reference implementations shared by the integration tests.
//! Nothing here calls the search or construction code it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use group_magic::{ConstructReport, Construction, Graph};
use petgraph::graph::UnGraph;

/// Mixed-radix arithmetic on `Z_{n1} x ... x Z_{nk}` with elements indexed
/// lexicographically, last coordinate fastest.
pub struct Arith {
    pub factors: Vec<u64>,
    pub elements: Vec<Vec<u64>>,
    pub add: Vec<usize>,
    pub neg: Vec<usize>,
}

impl Arith {
    pub fn new(factors: &[u64]) -> Self {
        let mut elements = vec![Vec::new()];
        for &n in factors {
            elements = elements
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    (0..n).map(move |r| {
                        let mut e = prefix.clone();
                        e.push(r);
                        e
                    })
                })
                .collect();
        }
        let index = |e: &[u64]| e.iter().zip(factors).fold(0usize, |acc, (&r, &n)| acc * n as usize + r as usize);
        let size = elements.len();
        let mut add = vec![0; size * size];
        for (x, ex) in elements.iter().enumerate() {
            for (y, ey) in elements.iter().enumerate() {
                let s: Vec<u64> = ex.iter().zip(ey).zip(factors).map(|((a, b), n)| (a + b) % n).collect();
                add[x * size + y] = index(&s);
            }
        }
        let neg = elements
            .iter()
            .map(|e| index(&e.iter().zip(factors).map(|(a, n)| (n - a) % n).collect::<Vec<_>>()))
            .collect();
        Arith {
            factors: factors.to_vec(),
            elements,
            add,
            neg,
        }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Every bijection `V(h) -> group` with constant neighborhood sums, found by
/// walking all `n!` permutations (Heap's algorithm) with no pruning at all.
/// Each solution lists the label residues vertex by vertex.
pub fn unpruned_solutions(h: &Graph, factors: &[u64]) -> BTreeSet<Vec<Vec<u64>>> {
    let arith = Arith::new(factors);
    let n = h.n();
    assert_eq!(n, arith.size(), "order must match vertex count");
    let size = n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut weight = vec![0usize; n];
    for v in 0..n {
        for &u in h.neighbors(v) {
            weight[v] = arith.add[weight[v] * size + perm[u]];
        }
    }
    let mut found = BTreeSet::new();
    let mut record = |perm: &[usize], weight: &[usize]| {
        if weight.iter().all(|&w| w == weight[0]) {
            found.insert(perm.iter().map(|&e| arith.elements[e].clone()).collect());
        }
    };
    record(&perm, &weight);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            let (a, b) = (j, i);
            // labels of a and b trade places: a gains d, b loses d
            let d = arith.add[perm[b] * size + arith.neg[perm[a]]];
            let minus_d = arith.neg[d];
            for &u in h.neighbors(a) {
                weight[u] = arith.add[weight[u] * size + d];
            }
            for &u in h.neighbors(b) {
                weight[u] = arith.add[weight[u] * size + minus_d];
            }
            perm.swap(a, b);
            record(&perm, &weight);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    found
}

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut p = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..g.n()).map(|_| p.add_node(())).collect();
    for (u, v) in g.edges() {
        p.add_edge(nodes[u], nodes[v], ());
    }
    p
}

fn invariant(g: &Graph) -> Vec<(usize, Vec<usize>, usize)> {
    let mut per_vertex: Vec<_> = (0..g.n())
        .map(|v| {
            let nbrs = g.neighbors(v);
            let mut nd: Vec<usize> = nbrs.iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            let triangles = nbrs
                .iter()
                .enumerate()
                .map(|(i, &a)| nbrs[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count())
                .sum();
            (nbrs.len(), nd, triangles)
        })
        .collect();
    per_vertex.sort();
    per_vertex
}

/// One representative of every isomorphism class of simple graphs on `n`
/// vertices, built by adding a vertex to each class on `n - 1` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for size in 1..=n {
        let mut buckets: HashMap<Vec<(usize, Vec<usize>, usize)>, Vec<(Graph, UnGraph<(), ()>)>> = HashMap::new();
        let mut next = Vec::new();
        for base in &level {
            let old = size - 1;
            for mask in 0u32..(1 << old) {
                let edges = base
                    .edges()
                    .chain((0..old).filter(|&u| mask & (1 << u) != 0).map(|u| (u, old)));
                let g = Graph::from_edges(size, edges).unwrap();
                let bucket = buckets.entry(invariant(&g)).or_default();
                let pg = to_petgraph(&g);
                if bucket.iter().any(|(_, rep)| petgraph::algo::is_isomorphic(rep, &pg)) {
                    continue;
                }
                bucket.push((g.clone(), pg));
                next.push(g);
            }
        }
        level = next;
    }
    level
}

/// Magic constant predicted by each template's closed form, in the
/// coordinates of the emitted labeling: the complement A first, then the
/// 2-part (`Z_{2^a}`, `Z4` or `Z2 x Z2`).
pub fn closed_form_magic(report: &ConstructReport) -> Vec<u64> {
    let labeling = report.labeling().expect("constructed");
    let factors = labeling.group().factors();
    let base = labeling.base_graph();
    let k = factors.len();
    let mut mu = vec![0u64; k];
    let last = factors[k - 1];
    let deg_mod = |m: u64| -> u64 {
        let residues: BTreeSet<u64> = base.degrees().iter().map(|&d| d as u64 % m).collect();
        assert_eq!(residues.len(), 1, "degrees are not constant mod {m}");
        *residues.iter().next().unwrap()
    };
    match report.construction.expect("constructed") {
        Construction::C4Cyclic2 => mu[k - 1] = (last - deg_mod(last)) % last,
        Construction::C4Z2Z2 => {
            let c = deg_mod(2);
            mu[k - 2] = c;
            mu[k - 1] = c;
        }
        Construction::C4Tripartite => mu[k - 1] = 2,
        Construction::C4BipartiteZ2Z2 => mu[k - 1] = 1,
        Construction::C8Z2Z2 => {}
        Construction::C8Z4 => {
            let c2 = deg_mod(4) / 2;
            mu[k - 1] = 2 * c2 % 4;
        }
        Construction::C8Cyclic2 => {
            let c_alpha = deg_mod(last) / 2;
            mu[k - 1] = (last - 2 * c_alpha % last) % last;
        }
    }
    mu
}

/// Labels of a constructed report as residue vectors in product-vertex order.
pub fn residues(report: &ConstructReport) -> Vec<Vec<u64>> {
    report
        .labeling()
        .expect("constructed")
        .labels()
        .iter()
        .map(|e| e.residues().to_vec())
        .collect()
}

/// Exact number of partitions of each `e <= max` (Euler's pentagonal
/// recurrence).
pub fn partition_numbers(max: usize) -> Vec<u64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for n in 1..=max {
        let mut total = 0i64;
        for k in 1.. {
            let k = k as i64;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                total += sign * p[n - g2];
            }
        }
        p[n] = total;
    }
    p.into_iter().map(|x| x as u64).collect()
}

/// Number of Abelian groups of order `n`: product of partition numbers of
/// the prime exponents.
pub fn abelian_group_count(n: u64) -> u64 {
    let p = partition_numbers(64);
    let mut rest = n;
    let mut count = 1;
    let mut d = 2;
    while d * d <= rest {
        let mut e = 0;
        while rest % d == 0 {
            rest /= d;
            e += 1;
        }
        count *= p[e];
        d += 1;
    }
    count
}
