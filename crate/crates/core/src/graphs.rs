//! Simple undirected graphs, the named generators, and direct products with
//! cycles.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid generator {0:?}: {1}")]
    Generator(String, String),
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("cycle length must be at least 3, got {0}")]
    CycleTooShort(usize),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.finish();
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.adj.len();
        for vertex in [u, v] {
            if vertex >= n {
                return Err(GraphError::VertexOutOfRange { vertex, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// Parses the edge-list format: first line `n`, then one `u v` per
    /// nonempty line.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(GraphError::EdgeList {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| GraphError::EdgeList {
            line,
            message: format!("expected vertex count, got {header:?}"),
        })?;
        let mut g = Graph::empty(n);
        for (line, text) in lines {
            let fields: Vec<&str> = text.split_whitespace().collect();
            let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[u, v]) => g.add_edge(u, v).map_err(|e| GraphError::EdgeList {
                    line,
                    message: e.to_string(),
                })?,
                _ => {
                    return Err(GraphError::EdgeList {
                        line,
                        message: format!("expected \"u v\", got {text:?}"),
                    })
                }
            }
        }
        g.finish();
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// The common residue of all degrees modulo `modulus`, if there is one.
    pub fn degree_residue_class(&self, modulus: usize) -> Option<usize> {
        assert!(modulus >= 1, "modulus must be positive");
        let mut residues = self.adj.iter().map(|l| l.len() % modulus);
        let first = residues.next().unwrap_or(0);
        residues.all(|r| r == first).then_some(first)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![None; self.n()];
        for start in 0..self.n() {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let s = side[u].unwrap();
                for &v in &self.adj[u] {
                    match side[v] {
                        None => {
                            side[v] = Some(!s);
                            queue.push_back(v);
                        }
                        Some(t) if t == s => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Direct product with the cycle C_k. Vertex `(i, j)` gets index
    /// `i * k + j`; `(i, j) ~ (i', j')` iff `i ~ i'` and `j' = j +- 1 (mod k)`.
    pub fn direct_product_with_cycle(&self, k: usize) -> Result<Graph, GraphError> {
        if k < 3 {
            return Err(GraphError::CycleTooShort(k));
        }
        let mut adj = vec![Vec::new(); self.n() * k];
        for (i, list) in self.adj.iter().enumerate() {
            for j in 0..k {
                let here = &mut adj[i * k + j];
                for &other in list {
                    here.push(other * k + (j + k - 1) % k);
                    here.push(other * k + (j + 1) % k);
                }
                here.sort_unstable();
            }
        }
        Ok(Graph { adj })
    }
}

/// A vertex `(i, j)` of `G x C_k`: `i` in G, `j` the cycle position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductVertex {
    pub i: usize,
    pub j: usize,
}

impl ProductVertex {
    pub fn new(i: usize, j: usize) -> Self {
        ProductVertex { i, j }
    }

    pub fn index(self, k: usize) -> usize {
        self.i * k + self.j
    }

    pub fn from_index(index: usize, k: usize) -> Self {
        ProductVertex {
            i: index / k,
            j: index % k,
        }
    }
}

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Largest `p` with `2^p | n`.
pub fn two_adic_valuation(n: u64) -> u32 {
    assert!(n >= 1, "valuation of zero is undefined");
    n.trailing_zeros()
}

/// Named graph families, written as `cycle:5`, `complete:4`,
/// `bipartite:1,9`, `tripartite:1,1,3`, `petersen`, `circulant:10;1,2`,
/// `path:4` and `empty:3`.
///
/// Multipartite graphs number their classes consecutively: the first class
/// is `0..p`, the next `p..p+q`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GeneratorSpec {
    Cycle(usize),
    Complete(usize),
    Bipartite(usize, usize),
    Tripartite(usize, usize, usize),
    Petersen,
    Circulant(usize, Vec<usize>),
    Path(usize),
    Empty(usize),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Graph {
        match *self {
            GeneratorSpec::Cycle(n) => {
                Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
            }
            GeneratorSpec::Complete(n) => complete_multipartite(&vec![1; n]),
            GeneratorSpec::Bipartite(m, n) => complete_multipartite(&[m, n]),
            GeneratorSpec::Tripartite(p, q, t) => complete_multipartite(&[p, q, t]),
            GeneratorSpec::Petersen => {
                let outer = (0..5).map(|v| (v, (v + 1) % 5));
                let spokes = (0..5).map(|v| (v, v + 5));
                let inner = (0..5).map(|v| (v + 5, (v + 2) % 5 + 5));
                Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
            }
            GeneratorSpec::Circulant(n, ref jumps) => {
                let mut edges = Vec::new();
                for v in 0..n {
                    for &s in jumps {
                        let w = (v + s) % n;
                        // s = n/2 produces each chord twice
                        if 2 * s != n || v < w {
                            edges.push((v, w));
                        }
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            }
            GeneratorSpec::Path(n) => {
                Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
            }
            GeneratorSpec::Empty(n) => Graph::empty(n),
        }
    }

    /// Part sizes for complete multipartite families.
    pub fn parts(&self) -> Option<Vec<usize>> {
        match *self {
            GeneratorSpec::Bipartite(m, n) => Some(vec![m, n]),
            GeneratorSpec::Tripartite(p, q, t) => Some(vec![p, q, t]),
            _ => None,
        }
    }

    /// Vertex count without building the graph.
    pub fn vertex_count(&self) -> usize {
        match *self {
            GeneratorSpec::Cycle(n)
            | GeneratorSpec::Complete(n)
            | GeneratorSpec::Circulant(n, _)
            | GeneratorSpec::Path(n)
            | GeneratorSpec::Empty(n) => n,
            GeneratorSpec::Bipartite(m, n) => m + n,
            GeneratorSpec::Tripartite(p, q, t) => p + q + t,
            GeneratorSpec::Petersen => 10,
        }
    }
}

/// Complete multipartite graph with consecutively numbered classes.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let mut class = Vec::new();
    for (c, &size) in parts.iter().enumerate() {
        class.extend(std::iter::repeat_n(c, size));
    }
    let n = class.len();
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let class_ref = &class;
    Graph::from_edges(n, edges.filter(|&(u, v)| class_ref[u] != class_ref[v])).unwrap()
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
            GeneratorSpec::Bipartite(m, n) => write!(f, "bipartite:{m},{n}"),
            GeneratorSpec::Tripartite(p, q, t) => write!(f, "tripartite:{p},{q},{t}"),
            GeneratorSpec::Petersen => write!(f, "petersen"),
            GeneratorSpec::Circulant(n, jumps) => {
                let jumps: Vec<String> = jumps.iter().map(|s| s.to_string()).collect();
                write!(f, "circulant:{n};{}", jumps.join(","))
            }
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Empty(n) => write!(f, "empty:{n}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |why: &str| GraphError::Generator(s.to_string(), why.to_string());
        let numbers = |text: &str| -> Result<Vec<usize>, GraphError> {
            text.split(',')
                .map(|x| {
                    if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                        Err(err("parameters must be non-negative integers"))
                    } else {
                        x.parse().map_err(|_| err("parameter too large"))
                    }
                })
                .collect()
        };
        let (kind, args) = match s.split_once(':') {
            Some((kind, args)) => (kind, Some(args)),
            None => (s, None),
        };
        let spec = match (kind, args) {
            ("petersen", None) => GeneratorSpec::Petersen,
            ("cycle", Some(a)) => match numbers(a)?[..] {
                [n] if n >= 3 => GeneratorSpec::Cycle(n),
                [_] => return Err(err("cycle length must be at least 3")),
                _ => return Err(err("expected cycle:N")),
            },
            ("complete", Some(a)) => match numbers(a)?[..] {
                [n] if n >= 1 => GeneratorSpec::Complete(n),
                _ => return Err(err("expected complete:N with N >= 1")),
            },
            ("path", Some(a)) => match numbers(a)?[..] {
                [n] if n >= 1 => GeneratorSpec::Path(n),
                _ => return Err(err("expected path:N with N >= 1")),
            },
            ("empty", Some(a)) => match numbers(a)?[..] {
                [n] if n >= 1 => GeneratorSpec::Empty(n),
                _ => return Err(err("expected empty:N with N >= 1")),
            },
            ("bipartite", Some(a)) => match numbers(a)?[..] {
                [m, n] if m >= 1 && n >= 1 => GeneratorSpec::Bipartite(m, n),
                _ => return Err(err("expected bipartite:M,N with parts >= 1")),
            },
            ("tripartite", Some(a)) => match numbers(a)?[..] {
                [p, q, t] if p >= 1 && q >= 1 && t >= 1 => GeneratorSpec::Tripartite(p, q, t),
                _ => return Err(err("expected tripartite:P,Q,T with parts >= 1")),
            },
            ("circulant", Some(a)) => {
                let (n, jumps) = a.split_once(';').ok_or_else(|| err("expected circulant:N;S1,S2,..."))?;
                let n = match numbers(n)?[..] {
                    [n] if n >= 3 => n,
                    _ => return Err(err("circulant order must be at least 3")),
                };
                let mut jumps = numbers(jumps)?;
                if jumps.iter().any(|&s| s == 0 || 2 * s > n) {
                    return Err(err("jumps must lie in 1..=n/2"));
                }
                let before = jumps.len();
                jumps.sort_unstable();
                jumps.dedup();
                if jumps.len() != before {
                    return Err(err("repeated jump"));
                }
                GeneratorSpec::Circulant(n, jumps)
            }
            _ => return Err(err("unknown generator")),
        };
        Ok(spec)
    }
}

impl Serialize for GeneratorSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Graph {
        s.parse::<GeneratorSpec>().unwrap().generate()
    }

    #[test]
    fn cycle_four() {
        let c4 = gen("cycle:4");
        assert_eq!(c4.n(), 4);
        let edges: Vec<_> = c4.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn star_degrees() {
        let star = gen("bipartite:1,9");
        assert_eq!(star.degree(0), 9);
        assert!((1..10).all(|v| star.degree(v) == 1));
    }

    #[test]
    fn tripartite_degrees() {
        assert_eq!(gen("tripartite:1,1,3").degrees(), vec![4, 4, 2, 2, 2]);
    }

    #[test]
    fn petersen_and_circulant_are_regular() {
        let p = gen("petersen");
        assert_eq!(p.edge_count(), 15);
        assert_eq!(p.degree_residue_class(8), Some(3));
        let c = gen("circulant:6;1,2");
        assert!(c.degrees().iter().all(|&d| d == 4));
        let d = gen("circulant:6;3");
        assert!(d.degrees().iter().all(|&d| d == 1));
        assert_eq!(gen("complete:4").degrees(), vec![3; 4]);
        assert_eq!(gen("path:3").degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn generator_errors() {
        for bad in [
            "cycle:2",
            "cycle:",
            "bipartite:0,3",
            "tripartite:1,2",
            "circulant:6;4",
            "circulant:6;1,1",
            "circulant:6",
            "wheel:5",
            "petersen:3",
            "complete:0",
        ] {
            assert!(bad.parse::<GeneratorSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn generator_display_round_trip() {
        for s in ["cycle:5", "complete:4", "bipartite:1,9", "tripartite:1,1,3", "petersen", "circulant:10;1,2", "path:2", "empty:3"] {
            assert_eq!(s.parse::<GeneratorSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn degree_residue_examples() {
        assert_eq!(gen("bipartite:1,9").degree_residue_class(8), Some(1));
        assert_eq!(gen("bipartite:1,5").degree_residue_class(8), None);
        assert_eq!(gen("bipartite:1,5").degree_residue_class(4), Some(1));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(two_adic_valuation(10), 1);
        assert_eq!(two_adic_valuation(12), 2);
        assert_eq!(two_adic_valuation(7), 0);
    }

    #[test]
    fn product_components() {
        let k2c4 = gen("complete:2").direct_product_with_cycle(4).unwrap();
        let sizes: Vec<usize> = k2c4.components().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 4]);
        assert!(k2c4.degrees().iter().all(|&d| d == 2));

        let c3c4 = gen("cycle:3").direct_product_with_cycle(4).unwrap();
        assert_eq!(c3c4.components().len(), 1);
        assert_eq!(c3c4.n(), 12);
        assert_eq!(c3c4.edge_count(), 24);
        assert!(c3c4.degrees().iter().all(|&d| d == 4));

        assert_eq!(Graph::empty(3).components().len(), 3);
    }

    #[test]
    fn bipartite_times_c4_is_two_doubled_copies() {
        let prod = gen("bipartite:1,2").direct_product_with_cycle(4).unwrap();
        let comps = prod.components();
        assert_eq!(comps.len(), 2);
        let k24 = complete_multipartite(&[2, 4]);
        for comp in comps {
            let sub: Vec<usize> = comp.iter().map(|&v| prod.degree(v)).collect();
            let mut expected = k24.degrees();
            let mut got = sub.clone();
            expected.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, expected);
            let edges = comp
                .iter()
                .flat_map(|&u| comp.iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| u < v && prod.has_edge(u, v))
                .count();
            assert_eq!(edges, k24.edge_count());
        }
    }

    #[test]
    fn product_adjacency_rule() {
        let g = gen("path:3");
        let k = 5;
        let prod = g.direct_product_with_cycle(k).unwrap();
        for a in 0..prod.n() {
            for b in 0..prod.n() {
                let (x, y) = (ProductVertex::from_index(a, k), ProductVertex::from_index(b, k));
                let cyc = (x.j + 1) % k == y.j || (y.j + 1) % k == x.j;
                assert_eq!(prod.has_edge(a, b), g.has_edge(x.i, y.i) && cyc);
            }
        }
        assert!(g.direct_product_with_cycle(2).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::parse_edge_list("3\n0 1\n\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(
            Graph::parse_edge_list("3\n0 1\n1 0\n"),
            Err(GraphError::EdgeList { line: 3, .. })
        ));
        assert!(Graph::parse_edge_list("3\n0 0\n").is_err());
        assert!(Graph::parse_edge_list("3\n0 3\n").is_err());
        assert!(Graph::parse_edge_list("3\n0 1 2\n").is_err());
        assert!(Graph::parse_edge_list("").is_err());
    }
}
