//! Labelings of `G x C_k` by group elements, vertex weights, and the
//! distance magic check.
//!
//! Weights are always summed over the adjacency of the explicitly built
//! product graph, so the verifier shares no arithmetic shortcuts with the
//! constructions it audits.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{Element, GroupError, GroupSpec};
use crate::graphs::{GeneratorSpec, Graph, GraphError, ProductVertex};

/// Offending vertices reported by [`VerifyReport`] are capped at this many.
pub const MAX_OFFENDERS: usize = 32;

#[derive(Debug, Error)]
pub enum LabelingError {
    #[error("malformed labeling: {0}")]
    Malformed(String),
    #[error("element out of range at vertex {vertex}: {source}")]
    ElementOutOfRange {
        vertex: ProductVertex,
        #[source]
        source: GroupError,
    },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(ProductVertex),
    #[error("vertex {0} is outside the product graph")]
    VertexOutOfRange(ProductVertex),
    #[error("incomplete labeling: vertex {0} has no label")]
    Incomplete(ProductVertex),
    #[error("size mismatch: graph has {vertices} vertices, group has order {order}")]
    SizeMismatch { vertices: usize, order: u64 },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// How the base graph is written in a labeling file: a generator string or
/// an inline edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Generator(GeneratorSpec),
    EdgeList { n: usize, edges: Vec<[usize; 2]> },
}

impl GraphSource {
    pub fn from_graph(g: &Graph) -> Self {
        GraphSource::EdgeList {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        match self {
            GraphSource::Generator(spec) => Ok(spec.generate()),
            GraphSource::EdgeList { n, edges } => {
                Graph::from_edges(*n, edges.iter().map(|&[u, v]| (u, v)))
            }
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Generator(spec) => write!(f, "{spec}"),
            GraphSource::EdgeList { n, edges } => {
                write!(f, "edge list ({n} vertices, {} edges)", edges.len())
            }
        }
    }
}

/// A complete assignment of group elements to the vertices of `G x C_k`,
/// stored by linear index `i * k + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    group: GroupSpec,
    source: GraphSource,
    base_graph: Graph,
    cycle_len: usize,
    labels: Vec<Element>,
    canonical_positions: Option<Vec<usize>>,
}

impl Labeling {
    pub fn new(
        source: GraphSource,
        cycle_len: usize,
        group: GroupSpec,
        labels: Vec<Element>,
    ) -> Result<Self, LabelingError> {
        let base_graph = source.build()?;
        let expected = base_graph.n() * cycle_len;
        if labels.len() != expected {
            return Err(LabelingError::LabelCount {
                expected,
                got: labels.len(),
            });
        }
        for (index, x) in labels.iter().enumerate() {
            group
                .check(x)
                .map_err(|source| LabelingError::ElementOutOfRange {
                    vertex: ProductVertex::from_index(index, cycle_len),
                    source,
                })?;
        }
        Ok(Labeling {
            group,
            source,
            base_graph,
            cycle_len,
            labels,
            canonical_positions: None,
        })
    }

    /// Records, for each coordinate of this labeling's group, the position of
    /// the matching factor in the canonical form.
    pub fn with_canonical_positions(mut self, positions: Vec<usize>) -> Self {
        debug_assert_eq!(positions.len(), self.group.rank());
        self.canonical_positions = Some(positions);
        self
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn base_graph(&self) -> &Graph {
        &self.base_graph
    }

    pub fn source(&self) -> &GraphSource {
        &self.source
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn canonical_positions(&self) -> Option<&[usize]> {
        self.canonical_positions.as_deref()
    }

    pub fn label(&self, v: ProductVertex) -> &Element {
        &self.labels[v.index(self.cycle_len)]
    }

    pub fn product_graph(&self) -> Graph {
        self.base_graph
            .direct_product_with_cycle(self.cycle_len)
            .expect("cycle length validated at construction")
    }

    /// Sum of the labels on the open neighborhood of `v` in the product.
    pub fn weight(&self, v: ProductVertex) -> Element {
        let product = self.product_graph();
        neighborhood_sum(&product, &self.group, &self.labels, v.index(self.cycle_len))
    }

    pub fn weights(&self) -> Vec<Element> {
        let product = self.product_graph();
        (0..product.n())
            .map(|v| neighborhood_sum(&product, &self.group, &self.labels, v))
            .collect()
    }

    pub fn verify(&self) -> Result<VerifyReport, LabelingError> {
        verify_on_graph(&self.product_graph(), &self.group, &self.labels)
    }

    /// The labeling `x -> -f(x)`.
    pub fn negated(&self) -> Labeling {
        let mut out = self.clone();
        for x in &mut out.labels {
            *x = self.group.neg_unchecked(x);
        }
        out
    }

    /// Same labeling with residues moved to canonical factor positions.
    /// Without recorded positions the group must already be canonical.
    pub fn to_canonical(&self) -> Labeling {
        let Some(positions) = &self.canonical_positions else {
            assert!(self.group.is_canonical(), "no canonical positions recorded");
            return self.clone();
        };
        let canonical = self.group.canonical();
        let permute = |x: &Element| {
            let mut r = vec![0; x.residues().len()];
            for (c, &p) in positions.iter().enumerate() {
                r[p] = x.residues()[c];
            }
            Element::new(r)
        };
        Labeling {
            group: canonical,
            source: self.source.clone(),
            base_graph: self.base_graph.clone(),
            cycle_len: self.cycle_len,
            labels: self.labels.iter().map(permute).collect(),
            canonical_positions: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("labeling serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("labeling serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, LabelingError> {
        let file: LabelingFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self, LabelingError> {
        let file: LabelingFile = serde_json::from_value(value)?;
        Self::from_file(file)
    }

    fn to_file(&self) -> LabelingFile {
        LabelingFile {
            graph: self.source.clone(),
            cycle: self.cycle_len,
            group: self.group.clone(),
            canonical_group: self
                .canonical_positions
                .as_ref()
                .map(|_| self.group.canonical()),
            canonical_positions: self.canonical_positions.clone(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .map(|(index, e)| {
                    let v = ProductVertex::from_index(index, self.cycle_len);
                    LabelEntry {
                        v: [v.i, v.j],
                        e: e.clone(),
                    }
                })
                .collect(),
        }
    }

    fn from_file(file: LabelingFile) -> Result<Self, LabelingError> {
        if file.cycle < 3 {
            return Err(GraphError::CycleTooShort(file.cycle).into());
        }
        let base = file.graph.build()?;
        let k = file.cycle;
        let mut slots: Vec<Option<Element>> = vec![None; base.n() * k];
        for entry in file.labels {
            let v = ProductVertex::new(entry.v[0], entry.v[1]);
            if v.i >= base.n() || v.j >= k {
                return Err(LabelingError::VertexOutOfRange(v));
            }
            file.group
                .check(&entry.e)
                .map_err(|source| LabelingError::ElementOutOfRange { vertex: v, source })?;
            let slot = &mut slots[v.index(k)];
            if slot.is_some() {
                return Err(LabelingError::DuplicateVertex(v));
            }
            *slot = Some(entry.e);
        }
        let labels = slots
            .into_iter()
            .enumerate()
            .map(|(index, s)| s.ok_or(LabelingError::Incomplete(ProductVertex::from_index(index, k))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut labeling = Labeling::new(file.graph, k, file.group, labels)?;
        if let Some(positions) = file.canonical_positions {
            let mut sorted = positions.clone();
            sorted.sort_unstable();
            if sorted != (0..labeling.group.rank()).collect::<Vec<_>>() {
                return Err(LabelingError::Malformed(
                    "canonical_positions must be a permutation of the coordinates".into(),
                ));
            }
            let canonical = labeling.group.canonical();
            let aligned = positions
                .iter()
                .enumerate()
                .all(|(c, &p)| canonical.factors().get(p) == Some(&labeling.group.factors()[c]));
            if !aligned {
                return Err(LabelingError::Malformed(
                    "canonical_positions do not match the canonical factors".into(),
                ));
            }
            labeling.canonical_positions = Some(positions);
        }
        Ok(labeling)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelingFile {
    graph: GraphSource,
    cycle: usize,
    group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical_group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical_positions: Option<Vec<usize>>,
    labels: Vec<LabelEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelEntry {
    v: [usize; 2],
    e: Element,
}

/// Outcome of checking a labeling for the distance magic property.
///
/// `offending_vertices` are linear vertex indices: duplicated labels when the
/// map is not a bijection, otherwise vertices whose weight differs from the
/// most common weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub is_bijection: bool,
    pub is_constant_weight: bool,
    pub magic_constant: Option<Element>,
    pub offending_vertices: Vec<usize>,
}

impl VerifyReport {
    pub fn is_magic(&self) -> bool {
        self.magic_constant.is_some()
    }
}

fn neighborhood_sum(h: &Graph, group: &GroupSpec, labels: &[Element], v: usize) -> Element {
    let mut acc = group.zero();
    for &u in h.neighbors(v) {
        group.add_assign_unchecked(&mut acc, &labels[u]);
    }
    acc
}

/// Checks an arbitrary graph labeled vertex-by-vertex. The magic constant
/// is global, also across components.
pub fn verify_on_graph(
    h: &Graph,
    group: &GroupSpec,
    labels: &[Element],
) -> Result<VerifyReport, LabelingError> {
    if h.n() as u64 != group.order() {
        return Err(LabelingError::SizeMismatch {
            vertices: h.n(),
            order: group.order(),
        });
    }
    if labels.len() != h.n() {
        return Err(LabelingError::LabelCount {
            expected: h.n(),
            got: labels.len(),
        });
    }
    let mut offending = Vec::new();
    let mut first_use: HashMap<&Element, usize> = HashMap::new();
    for (v, x) in labels.iter().enumerate() {
        group.check(x).map_err(|source| LabelingError::ElementOutOfRange {
            vertex: ProductVertex::new(v, 0),
            source,
        })?;
        if first_use.insert(x, v).is_some() {
            offending.push(v);
        }
    }
    let is_bijection = offending.is_empty();

    let weights: Vec<Element> = (0..h.n())
        .map(|v| neighborhood_sum(h, group, labels, v))
        .collect();
    let mut counts: HashMap<&Element, usize> = HashMap::new();
    for w in &weights {
        *counts.entry(w).or_default() += 1;
    }
    let is_constant_weight = counts.len() <= 1;
    if is_bijection && !is_constant_weight {
        let common = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(w, _)| *w)
            .unwrap();
        offending = (0..h.n()).filter(|&v| &weights[v] != common).collect();
    }
    offending.truncate(MAX_OFFENDERS);
    let magic_constant = (is_bijection && is_constant_weight)
        .then(|| weights.first().cloned().unwrap_or_else(|| group.zero()));
    Ok(VerifyReport {
        is_bijection,
        is_constant_weight,
        magic_constant,
        offending_vertices: offending,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn source(s: &str) -> GraphSource {
        GraphSource::Generator(s.parse().unwrap())
    }

    /// K2 x C4 labeled by Z8 with i*4+j -> a hand-checked magic labeling:
    /// the product is two 4-cycles, each weight is the sum of an antipodal
    /// pair of the other cycle.
    fn k2_z8() -> Labeling {
        // vertex (i,j) -> index i*4+j. Components: {(0,0),(1,1),(0,2),(1,3)}
        // and {(0,1),(1,0),(0,3),(1,2)}. Pairs (0,j),(0,j+2) and (1,j),(1,j+2)
        // must each sum to the same constant.
        let labels = [0, 1, 7, 6, 2, 3, 5, 4].map(|r| Element::new(vec![r]));
        Labeling::new(source("complete:2"), 4, g("8"), labels.to_vec()).unwrap()
    }

    #[test]
    fn hand_labeling_is_magic() {
        let report = k2_z8().verify().unwrap();
        assert!(report.is_bijection && report.is_constant_weight);
        assert_eq!(report.magic_constant, Some(Element::new(vec![7])));
    }

    #[test]
    fn isolated_vertex_has_zero_weight() {
        let labels: Vec<Element> = g("2x2").elements().collect();
        let l = Labeling::new(source("complete:1"), 4, g("2x2"), labels).unwrap();
        assert!(l.weight(ProductVertex::new(0, 2)).is_zero());
        assert_eq!(l.verify().unwrap().magic_constant, Some(g("2x2").zero()));
    }

    #[test]
    fn swapped_labels_break_magic() {
        let mut l = k2_z8();
        l.labels.swap(0, 1);
        let report = l.verify().unwrap();
        assert!(report.is_bijection);
        assert!(!report.is_constant_weight);
        assert_eq!(report.magic_constant, None);
        assert!(!report.offending_vertices.is_empty());
    }

    #[test]
    fn duplicate_label_is_not_bijection() {
        let mut l = k2_z8();
        l.labels[3] = l.labels[2].clone();
        let report = l.verify().unwrap();
        assert!(!report.is_bijection);
        assert_eq!(report.offending_vertices, vec![3]);
        assert_eq!(report.magic_constant, None);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let labels: Vec<Element> = (0..8).map(|r| Element::new(vec![r])).collect();
        let l = Labeling::new(source("complete:2"), 4, g("9"), labels).unwrap();
        assert!(matches!(l.verify(), Err(LabelingError::SizeMismatch { vertices: 8, order: 9 })));
    }

    #[test]
    fn negation_flips_the_constant() {
        let l = k2_z8();
        let neg = l.negated().verify().unwrap();
        assert_eq!(neg.magic_constant, Some(Element::new(vec![1])));
    }

    #[test]
    fn json_round_trip() {
        let l = k2_z8();
        let back = Labeling::from_json_str(&l.to_json_string()).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.weights(), l.weights());
    }

    #[test]
    fn inline_edge_list_source() {
        let l = k2_z8();
        let inline = Labeling::new(
            GraphSource::from_graph(l.base_graph()),
            4,
            g("8"),
            l.labels().to_vec(),
        )
        .unwrap();
        let text = inline.to_json_string();
        assert!(text.contains("\"edges\""));
        let back = Labeling::from_json_str(&text).unwrap();
        assert_eq!(back.verify().unwrap(), l.verify().unwrap());
    }

    fn json_with_labels(labels: &str) -> String {
        format!(r#"{{"graph":"complete:1","cycle":4,"group":"4","labels":[{labels}]}}"#)
    }

    #[test]
    fn deserialize_errors() {
        let full = r#"{"v":[0,0],"e":[0]},{"v":[0,1],"e":[1]},{"v":[0,2],"e":[2]},{"v":[0,3],"e":[3]}"#;
        assert!(Labeling::from_json_str(&json_with_labels(full)).is_ok());

        let missing = r#"{"v":[0,0],"e":[0]},{"v":[0,1],"e":[1]},{"v":[0,2],"e":[2]}"#;
        let err = Labeling::from_json_str(&json_with_labels(missing)).unwrap_err();
        assert!(err.to_string().contains("incomplete"), "{err}");

        let out_of_range = r#"{"v":[0,0],"e":[0]},{"v":[0,1],"e":[1]},{"v":[0,2],"e":[4]},{"v":[0,3],"e":[3]}"#;
        let err = Labeling::from_json_str(&json_with_labels(out_of_range)).unwrap_err();
        assert!(err.to_string().contains("element out of range"), "{err}");

        let duplicate = r#"{"v":[0,0],"e":[0]},{"v":[0,0],"e":[1]},{"v":[0,2],"e":[2]},{"v":[0,3],"e":[3]}"#;
        let err = Labeling::from_json_str(&json_with_labels(duplicate)).unwrap_err();
        assert!(matches!(err, LabelingError::DuplicateVertex(_)));

        let outside = r#"{"v":[1,0],"e":[0]}"#;
        assert!(matches!(
            Labeling::from_json_str(&json_with_labels(outside)),
            Err(LabelingError::VertexOutOfRange(_))
        ));
        assert!(Labeling::from_json_str("{").is_err());
    }

    #[test]
    fn canonical_positions_permute_coordinates() {
        // group written as (A, Z4) = Z3 x Z4; canonical form is 4x3
        let grp = g("3x4");
        let labels: Vec<Element> = grp.elements().collect();
        let l = Labeling::new(source("cycle:3"), 4, grp, labels)
            .unwrap()
            .with_canonical_positions(vec![1, 0]);
        let c = l.to_canonical();
        assert_eq!(c.group(), &g("4x3"));
        assert_eq!(c.labels()[1], Element::new(vec![1, 0]));
        let back = Labeling::from_json_str(&l.to_json_string()).unwrap();
        assert_eq!(back.canonical_positions(), Some(&[1, 0][..]));
    }
}
