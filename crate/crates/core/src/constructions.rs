//! Explicit distance magic labelings of `G x C4` and `G x C8`, and the
//! dispatchers that pick one from the structure of the group.
//!
//! Every construction works in coordinates `(A, two-part)`: the group is
//! split as `A x Z_{2^alpha}` or `A x Z2 x Z2`, the elements of A are indexed
//! `a_0, a_1, ...` in the lexicographic order of A's canonical form, and the
//! labeling's group is written with A's factors first. The recorded
//! canonical positions map these coordinates back onto the canonical form.
//!
//! No labeling leaves this module unverified: each constructor runs the
//! verifier and compares the magic constant with its closed form, and a
//! mismatch is returned as [`ConstructError::Defect`].

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{Element, GroupSpec};
use crate::graphs::{two_adic_valuation, GeneratorSpec, Graph, GraphError};
use crate::labeling::{GraphSource, Labeling, LabelingError};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("construction {construction} produced an invalid labeling: {detail}")]
    Defect {
        construction: Construction,
        detail: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
}

/// Which labeling template produced (or was asked to produce) a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Construction {
    /// `G x C4` over `A x Z_{2^alpha}`, degrees constant mod `2^alpha`.
    #[serde(rename = "lemma21")]
    C4Cyclic2,
    /// `G x C4` over `A x Z2 x Z2`, degrees of one parity.
    #[serde(rename = "lemma22")]
    C4Z2Z2,
    /// `K_{p,q,t} x C4` with odd parts.
    #[serde(rename = "obs24")]
    C4Tripartite,
    /// `K_{m,n} x C4`, m odd and n even, over `A x Z2 x Z2`.
    #[serde(rename = "lemma28")]
    C4BipartiteZ2Z2,
    /// `G x C8` over `A x Z2 x Z2`, even degrees.
    #[serde(rename = "lemma31")]
    C8Z2Z2,
    /// `G x C8` over `A x Z4`.
    #[serde(rename = "thm32c2")]
    C8Z4,
    /// `G x C8` over `A x Z_{2^alpha}`, alpha >= 3.
    #[serde(rename = "thm32c3")]
    C8Cyclic2,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::C4Cyclic2,
        Construction::C4Z2Z2,
        Construction::C4Tripartite,
        Construction::C4BipartiteZ2Z2,
        Construction::C8Z2Z2,
        Construction::C8Z4,
        Construction::C8Cyclic2,
    ];

    /// The identifier used in report files.
    pub fn id(self) -> &'static str {
        match self {
            Construction::C4Cyclic2 => "lemma21",
            Construction::C4Z2Z2 => "lemma22",
            Construction::C4Tripartite => "obs24",
            Construction::C4BipartiteZ2Z2 => "lemma28",
            Construction::C8Z2Z2 => "lemma31",
            Construction::C8Z4 => "thm32c2",
            Construction::C8Cyclic2 => "thm32c3",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.id() == id)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Corrections applied to printed templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Erratum {
    /// The C8 / `Z2 x Z2` template needs a group of order 8n, not 4n.
    E1,
    /// Its case selector ranges over the cycle position, not the vertex.
    E2,
    /// The bipartite template's element indices collide; the free elements
    /// are assigned injectively instead.
    E3,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Constructed { labeling: Labeling, magic: Element },
    NotCovered { reason: String },
    PreconditionFailed { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructReport {
    /// `None` when a dispatcher found no applicable template.
    pub construction: Option<Construction>,
    /// The group as requested.
    pub group: GroupSpec,
    pub outcome: Outcome,
    pub errata: Vec<Erratum>,
    /// How elements were assigned when it departs from plain `a_0, a_1, ...`.
    pub element_order: Option<String>,
}

impl ConstructReport {
    fn precondition(construction: Construction, group: &GroupSpec, reason: impl Into<String>) -> Self {
        ConstructReport {
            construction: Some(construction),
            group: group.clone(),
            outcome: Outcome::PreconditionFailed {
                reason: reason.into(),
            },
            errata: Vec::new(),
            element_order: None,
        }
    }

    pub fn is_constructed(&self) -> bool {
        matches!(self.outcome, Outcome::Constructed { .. })
    }

    pub fn labeling(&self) -> Option<&Labeling> {
        match &self.outcome {
            Outcome::Constructed { labeling, .. } => Some(labeling),
            _ => None,
        }
    }

    pub fn magic(&self) -> Option<&Element> {
        match &self.outcome {
            Outcome::Constructed { magic, .. } => Some(magic),
            _ => None,
        }
    }

    pub fn outcome_name(&self) -> &'static str {
        match self.outcome {
            Outcome::Constructed { .. } => "constructed",
            Outcome::NotCovered { .. } => "not_covered",
            Outcome::PreconditionFailed { .. } => "precondition_failed",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::NotCovered { reason } | Outcome::PreconditionFailed { reason } => Some(reason),
            Outcome::Constructed { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "outcome": self.outcome_name(),
            "construction": self.construction.map(Construction::id),
            "group": self.group.to_string(),
            "errata": self.errata,
            "labeling": self.labeling().map(Labeling::to_json),
            "magic": self.magic(),
            "reason": self.reason(),
            "element_order": self.element_order,
        })
    }
}

impl From<GeneratorSpec> for GraphSource {
    fn from(spec: GeneratorSpec) -> Self {
        GraphSource::Generator(spec)
    }
}

impl From<&Graph> for GraphSource {
    fn from(g: &Graph) -> Self {
        GraphSource::from_graph(g)
    }
}

/// A split of the canonical form into A and the chosen 2-primary factors.
struct Frame {
    a: GroupSpec,
    a_elements: Vec<Element>,
    work: GroupSpec,
    positions: Vec<usize>,
}

impl Frame {
    fn new(canonical: &GroupSpec, two_positions: &[usize]) -> Self {
        let a_positions: Vec<usize> = (0..canonical.rank())
            .filter(|p| !two_positions.contains(p))
            .collect();
        let a = canonical.permuted(&a_positions);
        let mut positions = a_positions;
        positions.extend_from_slice(two_positions);
        let work = canonical.permuted(&positions);
        Frame {
            a_elements: a.elements().collect(),
            a,
            work,
            positions,
        }
    }

    fn cyclic(group: &GroupSpec, alpha: u32) -> Option<Self> {
        let (position, _) = group.split_cyclic_two_factor(alpha)?;
        Some(Self::new(&group.canonical(), &[position]))
    }

    fn z2z2(group: &GroupSpec) -> Option<Self> {
        let canonical = group.canonical();
        let twos: Vec<usize> = (0..canonical.rank())
            .filter(|&p| canonical.factors()[p] == 2)
            .collect();
        if twos.len() < 2 {
            return None;
        }
        Some(Self::new(&canonical, &twos[twos.len() - 2..]))
    }

    fn elem(&self, a: &Element, tail: &[u64]) -> Element {
        let mut r = a.residues().to_vec();
        r.extend_from_slice(tail);
        Element::new(r)
    }

    fn neg_a(&self, a: &Element) -> Element {
        self.a.neg_unchecked(a)
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        self.work.add_unchecked(x, y)
    }

    fn sub(&self, x: &Element, y: &Element) -> Element {
        self.work.add_unchecked(x, &self.work.neg_unchecked(y))
    }

    fn zero_a_with(&self, tail: &[u64]) -> Element {
        self.elem(&self.a.zero(), tail)
    }
}

struct Draft<'a> {
    construction: Construction,
    requested: &'a GroupSpec,
    source: GraphSource,
    cycle_len: usize,
    frame: Frame,
    labels: Vec<Element>,
    expected_magic: Element,
    errata: Vec<Erratum>,
    element_order: Option<String>,
}

impl Draft<'_> {
    fn finish(self) -> Result<ConstructReport, ConstructError> {
        let defect = |detail: String| ConstructError::Defect {
            construction: self.construction,
            detail,
        };
        let labeling = Labeling::new(self.source, self.cycle_len, self.frame.work, self.labels)
            .map_err(|e| defect(e.to_string()))?
            .with_canonical_positions(self.frame.positions);
        let report = labeling.verify()?;
        let Some(magic) = report.magic_constant else {
            return Err(defect(format!(
                "bijection: {}, constant weight: {}, offenders: {:?}",
                report.is_bijection, report.is_constant_weight, report.offending_vertices
            )));
        };
        if magic != self.expected_magic {
            return Err(defect(format!(
                "magic constant {magic} differs from closed form {}",
                self.expected_magic
            )));
        }
        Ok(ConstructReport {
            construction: Some(self.construction),
            group: self.requested.clone(),
            outcome: Outcome::Constructed { labeling, magic },
            errata: self.errata,
            element_order: self.element_order,
        })
    }
}

fn order_is(group: &GroupSpec, expected: usize) -> Result<(), String> {
    if group.order() == expected as u64 {
        Ok(())
    } else {
        Err(format!(
            "group {group} has order {}, the product needs order {expected}",
            group.order()
        ))
    }
}

macro_rules! require {
    ($cond:expr, $construction:expr, $group:expr, $($why:tt)+) => {
        if !$cond {
            return Ok(ConstructReport::precondition($construction, $group, format!($($why)+)));
        }
    };
}

macro_rules! require_ok {
    ($res:expr, $construction:expr, $group:expr) => {
        if let Err(why) = $res {
            return Ok(ConstructReport::precondition($construction, $group, why));
        }
    };
}

/// `G x C4` over `A x Z_{2^alpha}` (alpha >= 2, `2^(alpha-2) | n`, degrees
/// constant mod `2^alpha`). Magic constant `(0, -c)`.
pub fn c4_cyclic2(
    graph: impl Into<GraphSource>,
    group: &GroupSpec,
    alpha: u32,
) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C4Cyclic2;
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    require_ok!(order_is(group, 4 * n), kind, group);
    require!(alpha >= 2, kind, group, "needs alpha >= 2, got {alpha}");
    let Some(frame) = Frame::cyclic(group, alpha) else {
        return Ok(ConstructReport::precondition(
            kind,
            group,
            format!("{group} has no cyclic factor of order 2^{alpha}"),
        ));
    };
    let modulus = 1u64 << alpha;
    let block = 1usize << (alpha - 2);
    require!(n % block == 0, kind, group, "2^{} does not divide n = {n}", alpha - 2);
    let Some(c) = g.degree_residue_class(modulus as usize) else {
        return Ok(ConstructReport::precondition(
            kind,
            group,
            format!("degrees are not all congruent mod {modulus}"),
        ));
    };

    let half = modulus / 2;
    let complement = frame.zero_a_with(&[modulus - 1]);
    let mut labels = vec![frame.work.zero(); 4 * n];
    for i in 0..n {
        for j in 0..2 {
            let low = frame.elem(&frame.a_elements[i / block], &[(2 * i as u64 + j as u64) % half]);
            labels[4 * i + j + 2] = frame.sub(&complement, &low);
            labels[4 * i + j] = low;
        }
    }
    let expected_magic = frame.zero_a_with(&[(modulus - c as u64 % modulus) % modulus]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 4,
        frame,
        labels,
        expected_magic,
        errata: Vec::new(),
        element_order: None,
    }
    .finish()
}

fn z2z2_rows(frame: &Frame, a: &Element) -> [Element; 4] {
    let minus = frame.neg_a(a);
    [
        frame.elem(a, &[0, 0]),
        frame.elem(a, &[1, 0]),
        frame.elem(&minus, &[1, 1]),
        frame.elem(&minus, &[0, 1]),
    ]
}

/// `G x C4` over `A x Z2 x Z2` when all degrees share a parity `c`.
/// Magic constant `(0, c, c)`.
pub fn c4_z2z2(graph: impl Into<GraphSource>, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C4Z2Z2;
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    require_ok!(order_is(group, 4 * n), kind, group);
    let Some(frame) = Frame::z2z2(group) else {
        return Ok(ConstructReport::precondition(kind, group, format!("{group} has no Z2 x Z2 summand")));
    };
    let Some(c) = g.degree_residue_class(2) else {
        return Ok(ConstructReport::precondition(kind, group, "degrees have mixed parity"));
    };
    let labels = frame.a_elements[..n]
        .iter()
        .flat_map(|a| z2z2_rows(&frame, a))
        .collect();
    let c = c as u64;
    let expected_magic = frame.zero_a_with(&[c, c]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 4,
        frame,
        labels,
        expected_magic,
        errata: Vec::new(),
        element_order: None,
    }
    .finish()
}

/// Dispatcher for `G x C4`: with `n = 2^p (2k+1)` and degrees
/// constant mod `2^(p+2)`, every group of order 4n is handled, by the
/// `Z2 x Z2` template when that summand exists and otherwise by the cyclic
/// template on the largest 2-primary factor.
pub fn c4_dispatch(graph: impl Into<GraphSource>, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    let failed = |reason: String| ConstructReport {
        construction: None,
        group: group.clone(),
        outcome: Outcome::PreconditionFailed { reason },
        errata: Vec::new(),
        element_order: None,
    };
    if let Err(why) = order_is(group, 4 * n) {
        return Ok(failed(why));
    }
    let p = two_adic_valuation(n as u64);
    let modulus = 1usize << (p + 2);
    if g.degree_residue_class(modulus).is_none() {
        return Ok(failed(format!(
            "n = {n} = 2^{p} * odd, but degrees are not all congruent mod {modulus}"
        )));
    }
    if group.has_z2_z2_summand() {
        return c4_z2z2(source, group);
    }
    let largest = group.two_primary_factors()[0];
    c4_cyclic2(source, group, largest.trailing_zeros())
}

/// `K_{p,q,t} x C4` with all parts odd, over any group of order
/// `4(p+q+t)`. The `Z4` case has magic constant `(0, 2)`.
pub fn c4_tripartite(p: usize, q: usize, t: usize, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C4Tripartite;
    let parts = [p, q, t];
    require!(parts.iter().all(|s| s % 2 == 1), kind, group, "parts ({p},{q},{t}) must all be odd");
    let total = p + q + t;
    require_ok!(order_is(group, 4 * total), kind, group);
    let source = GraphSource::Generator(GeneratorSpec::Tripartite(p, q, t));
    if group.has_z2_z2_summand() {
        let mut report = c4_z2z2(source, group)?;
        report.element_order = Some("Z2 x Z2 case handled by lemma22 (all degrees even)".into());
        return Ok(report);
    }
    let Some(frame) = Frame::cyclic(group, 2) else {
        return Ok(ConstructReport::precondition(kind, group, format!("{group} is neither A x Z4 nor A x Z2 x Z2")));
    };

    // two of three odd sizes agree mod 4; they go first
    let (x, y, u) = if p % 4 == q % 4 {
        (0, 1, 2)
    } else if p % 4 == t % 4 {
        (0, 2, 1)
    } else {
        (1, 2, 0)
    };
    let offsets = [0, p, p + q];
    let lead = parts[x];
    let last_sum = if parts[u] % 4 == lead % 4 { 1 } else { 3 };

    let mut labels = vec![frame.work.zero(); 4 * total];
    let mut next = 0;
    for (class, pair_sum) in [(x, 1), (y, 1), (u, last_sum)] {
        for member in 0..parts[class] {
            let vertex = offsets[class] + member;
            let a = &frame.a_elements[next];
            next += 1;
            let minus = frame.neg_a(a);
            labels[4 * vertex] = frame.elem(a, &[0]);
            labels[4 * vertex + 1] = frame.elem(a, &[2]);
            labels[4 * vertex + 2] = frame.elem(&minus, &[pair_sum]);
            labels[4 * vertex + 3] = frame.elem(&minus, &[(pair_sum + 2) % 4]);
        }
    }
    let names = ["first", "second", "third"];
    let element_order = (x, y, u) != (0, 1, 2);
    let expected_magic = frame.zero_a_with(&[2]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 4,
        frame,
        labels,
        expected_magic,
        errata: Vec::new(),
        element_order: element_order.then(|| {
            format!(
                "classes taken in order {}, {}, {} (sizes {}, {}, {})",
                names[x], names[y], names[u], parts[x], parts[y], parts[u]
            )
        }),
    }
    .finish()
}

/// `K_{m,n} x C4` with m odd and n even over `A x Z2 x Z2`; magic constant
/// `(0, 0, 1)`. Rows for `x_0`, `y_0` and `y_1` are special; every other row
/// takes its own free element of A.
pub fn c4_bipartite_z2z2(m: usize, n: usize, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C4BipartiteZ2Z2;
    require!(m % 2 == 1 && n % 2 == 0 && n > 0, kind, group, "needs m odd and n even, got ({m},{n})");
    require_ok!(order_is(group, 4 * (m + n)), kind, group);
    let Some(frame) = Frame::z2z2(group) else {
        return Ok(ConstructReport::precondition(kind, group, format!("{group} has no Z2 x Z2 summand")));
    };
    let source = GraphSource::Generator(GeneratorSpec::Bipartite(m, n));
    let zero = frame.a.zero();
    // |A| = m + n is odd, so b != -b
    let b = frame.a_elements[1].clone();
    let minus_b = frame.neg_a(&b);
    let mut free = frame
        .a_elements
        .iter()
        .filter(|&a| *a != zero && *a != b && *a != minus_b);

    let mut labels = Vec::with_capacity(4 * (m + n));
    labels.extend([
        frame.elem(&zero, &[0, 0]),
        frame.elem(&zero, &[1, 0]),
        frame.elem(&zero, &[0, 1]),
        frame.elem(&zero, &[1, 1]),
    ]);
    for _ in 1..m {
        labels.extend(z2z2_rows(&frame, free.next().unwrap()));
    }
    labels.extend([
        frame.elem(&b, &[1, 0]),
        frame.elem(&b, &[0, 0]),
        frame.elem(&minus_b, &[1, 0]),
        frame.elem(&minus_b, &[1, 1]),
    ]);
    labels.extend([
        frame.elem(&minus_b, &[0, 0]),
        frame.elem(&minus_b, &[0, 1]),
        frame.elem(&b, &[0, 1]),
        frame.elem(&b, &[1, 1]),
    ]);
    for _ in 2..n {
        labels.extend(z2z2_rows(&frame, free.next().unwrap()));
    }
    debug_assert!(free.next().is_none());
    let element_order = format!(
        "x_0 uses 0; y_0 uses b = {b}, y_1 uses -b = {minus_b}; the remaining elements of A \
         in lexicographic order go to x_1..x_{{m-1}} then y_2..y_{{n-1}}"
    );
    let expected_magic = frame.zero_a_with(&[0, 1]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 4,
        frame,
        labels,
        expected_magic,
        errata: vec![Erratum::E3],
        element_order: Some(element_order),
    }
    .finish()
}

/// Labels of `G x C8` from a first-quarter rule (positions 0, 1), a shift
/// for positions 4, 5, and the complement `pair - f(j - 2)` elsewhere.
fn c8_fill(frame: &Frame, n: usize, low: impl Fn(usize, usize) -> Element, shift: &Element, pair: &Element) -> Vec<Element> {
    let mut labels = vec![frame.work.zero(); 8 * n];
    for i in 0..n {
        let row = &mut labels[8 * i..8 * i + 8];
        for j in 0..2 {
            row[j] = low(i, j);
            row[j + 4] = frame.add(shift, &row[j]);
        }
        for j in [2, 3, 6, 7] {
            row[j] = frame.sub(pair, &row[j - 2]);
        }
    }
    labels
}

fn even_degrees(g: &Graph) -> bool {
    g.degrees().iter().all(|d| d % 2 == 0)
}

/// `G x C8` over `A x Z2 x Z2` with |A| = 2n and all degrees even; magic
/// constant zero.
pub fn c8_z2z2(graph: impl Into<GraphSource>, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C8Z2Z2;
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    require_ok!(order_is(group, 8 * n), kind, group);
    let Some(frame) = Frame::z2z2(group) else {
        return Ok(ConstructReport::precondition(kind, group, format!("{group} has no Z2 x Z2 summand")));
    };
    require!(even_degrees(&g), kind, group, "some vertex has odd degree");
    let labels = c8_fill(
        &frame,
        n,
        |i, j| frame.elem(&frame.a_elements[2 * i + j], &[0, 0]),
        &frame.zero_a_with(&[0, 1]),
        &frame.zero_a_with(&[1, 1]),
    );
    let expected_magic = frame.work.zero();
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 8,
        frame,
        labels,
        expected_magic,
        errata: vec![Erratum::E1, Erratum::E2],
        element_order: None,
    }
    .finish()
}

/// `G x C8` over `A x Z4` with degrees congruent to an even `2c` mod 4;
/// magic constant `(0, 2c)`.
pub fn c8_z4(graph: impl Into<GraphSource>, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C8Z4;
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    require_ok!(order_is(group, 8 * n), kind, group);
    let Some(frame) = Frame::cyclic(group, 2) else {
        return Ok(ConstructReport::precondition(kind, group, format!("{group} has no cyclic factor of order 4")));
    };
    require!(even_degrees(&g), kind, group, "some vertex has odd degree");
    let Some(r) = g.degree_residue_class(4) else {
        return Ok(ConstructReport::precondition(kind, group, "degrees are not all congruent mod 4"));
    };
    let labels = c8_fill(
        &frame,
        n,
        |i, j| frame.elem(&frame.a_elements[2 * i + j], &[0]),
        &frame.zero_a_with(&[2]),
        &frame.zero_a_with(&[3]),
    );
    let expected_magic = frame.zero_a_with(&[r as u64]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 8,
        frame,
        labels,
        expected_magic,
        errata: Vec::new(),
        element_order: None,
    }
    .finish()
}

/// `G x C8` over `A x Z_{2^alpha}` (alpha >= 3, `2^(alpha-3) | n`) with
/// degrees congruent to an even `2c` mod `2^alpha`; magic constant
/// `(0, -2c)`. A degree congruence that fails only modulo `2^alpha` is
/// reported as not covered rather than as a failed precondition.
pub fn c8_cyclic2(
    graph: impl Into<GraphSource>,
    group: &GroupSpec,
    alpha: u32,
) -> Result<ConstructReport, ConstructError> {
    let kind = Construction::C8Cyclic2;
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    require_ok!(order_is(group, 8 * n), kind, group);
    require!(alpha >= 3, kind, group, "needs alpha >= 3, got {alpha}");
    let Some(frame) = Frame::cyclic(group, alpha) else {
        return Ok(ConstructReport::precondition(
            kind,
            group,
            format!("{group} has no cyclic factor of order 2^{alpha}"),
        ));
    };
    let block = 1usize << (alpha - 3);
    require!(n % block == 0, kind, group, "2^{} does not divide n = {n}", alpha - 3);
    require!(even_degrees(&g), kind, group, "some vertex has odd degree");
    let modulus = 1u64 << alpha;
    let Some(r) = g.degree_residue_class(modulus as usize) else {
        return Ok(ConstructReport {
            construction: Some(kind),
            group: group.clone(),
            outcome: Outcome::NotCovered {
                reason: format!("degrees are even but not all congruent mod {modulus}"),
            },
            errata: Vec::new(),
            element_order: None,
        });
    };
    let quarter = modulus / 4;
    let labels = c8_fill(
        &frame,
        n,
        |i, j| frame.elem(&frame.a_elements[i / block], &[(2 * i as u64 + j as u64) % quarter]),
        &frame.zero_a_with(&[modulus / 2]),
        &frame.zero_a_with(&[modulus - 1]),
    );
    let expected_magic = frame.zero_a_with(&[(modulus - r as u64) % modulus]);
    Draft {
        construction: kind,
        requested: group,
        source,
        cycle_len: 8,
        frame,
        labels,
        expected_magic,
        errata: Vec::new(),
        element_order: None,
    }
    .finish()
}

/// Dispatcher for `G x C8` with all degrees even. Tries the
/// `Z2 x Z2` template, then the cyclic template on each 2-primary factor of
/// order at least 8 (largest first) whose degree congruence holds, then the
/// `Z4` template. Anything left is reported as not covered.
pub fn c8_dispatch(graph: impl Into<GraphSource>, group: &GroupSpec) -> Result<ConstructReport, ConstructError> {
    let source = graph.into();
    let g = source.build()?;
    let n = g.n();
    let report = |outcome| ConstructReport {
        construction: None,
        group: group.clone(),
        outcome,
        errata: Vec::new(),
        element_order: None,
    };
    if let Err(reason) = order_is(group, 8 * n) {
        return Ok(report(Outcome::PreconditionFailed { reason }));
    }
    if !even_degrees(&g) {
        return Ok(report(Outcome::PreconditionFailed {
            reason: "some vertex has odd degree".into(),
        }));
    }
    if group.has_z2_z2_summand() {
        return c8_z2z2(source, group);
    }
    let mut orders = group.two_primary_factors();
    orders.dedup();
    for &order in orders.iter().filter(|&&o| o >= 8) {
        let alpha = order.trailing_zeros();
        if n % (1usize << (alpha - 3)) == 0 && g.degree_residue_class(order as usize).is_some() {
            return c8_cyclic2(source, group, alpha);
        }
    }
    if orders.contains(&4) && g.degree_residue_class(4).is_some() {
        return c8_z4(source, group);
    }
    Ok(report(Outcome::NotCovered {
        reason: format!(
            "{group}: no Z2 x Z2 summand, no cyclic 2-factor whose degree congruence holds, \
             and no usable Z4 factor"
        ),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn gen(s: &str) -> GraphSource {
        GraphSource::Generator(s.parse().unwrap())
    }

    fn e(v: &[u64]) -> Element {
        Element::new(v.to_vec())
    }

    fn constructed(report: &ConstructReport) -> &Element {
        assert!(report.is_constructed(), "{:?}", report.outcome);
        let labeling = report.labeling().unwrap();
        assert_eq!(labeling.verify().unwrap().magic_constant.as_ref(), report.magic());
        report.magic().unwrap()
    }

    fn precondition_failed(report: &ConstructReport) {
        assert!(
            matches!(report.outcome, Outcome::PreconditionFailed { .. }),
            "{:?}",
            report.outcome
        );
    }

    #[test]
    fn cyclic2_c4_examples() {
        let r = c4_cyclic2(gen("complete:2"), &g("4x2"), 2).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 3]));
        assert_eq!(r.labeling().unwrap().group(), &g("2x4"));
        let r = c4_cyclic2(gen("bipartite:1,9"), &g("8x5"), 3).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 7]));
        precondition_failed(&c4_cyclic2(gen("bipartite:1,5"), &g("8x3"), 3).unwrap());
        precondition_failed(&c4_cyclic2(gen("complete:2"), &g("2x2x2"), 1).unwrap());
        precondition_failed(&c4_cyclic2(gen("complete:2"), &g("4x2"), 3).unwrap());
        // order 16 = 4 * 4 with Z16: needs 2^2 | n = 4
        assert!(c4_cyclic2(gen("complete:4"), &g("16"), 4).unwrap().is_constructed());
    }

    /// For j in {0,1} the low half `i -> (i / 2^(alpha-2), (2i+j) mod 2^(alpha-1))`
    /// hits every (a-index, residue) pair once.
    #[test]
    fn cyclic2_low_half_is_injective() {
        for alpha in 2..=4u32 {
            let block = 1usize << (alpha - 2);
            let half = 1usize << (alpha - 1);
            for n in (block..=64).step_by(block) {
                let mut seen = std::collections::HashSet::new();
                for i in 0..n {
                    for j in 0..2 {
                        assert!(seen.insert((i / block, (2 * i + j) % half)));
                    }
                }
                assert_eq!(seen.len(), 2 * n);
                assert_eq!(seen.len(), (n / block) * half);
            }
        }
    }

    #[test]
    fn z2z2_c4_examples() {
        assert_eq!(constructed(&c4_z2z2(gen("complete:3"), &g("2x2x3")).unwrap()), &e(&[0, 0, 0]));
        assert_eq!(constructed(&c4_z2z2(gen("complete:2"), &g("2x2x2")).unwrap()), &e(&[0, 1, 1]));
        precondition_failed(&c4_z2z2(gen("bipartite:1,2"), &g("2x2x3")).unwrap());
        precondition_failed(&c4_z2z2(gen("complete:3"), &g("4x3")).unwrap());
    }

    #[test]
    fn c4_dispatch_examples() {
        for grp in crate::abelian::enumerate_groups(40) {
            for graph in ["bipartite:1,9", "petersen"] {
                let r = c4_dispatch(gen(graph), &grp).unwrap();
                constructed(&r);
            }
        }
        let r = c4_dispatch(gen("bipartite:1,5"), &g("24")).unwrap();
        precondition_failed(&r);
        assert_eq!(r.construction, None);
        precondition_failed(&c4_dispatch(gen("complete:3"), &g("8")).unwrap());
    }

    #[test]
    fn tripartite_examples() {
        let r = c4_tripartite(1, 1, 3, &g("4x5")).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 2]));
        assert_eq!(r.element_order, None);
        let r = c4_tripartite(1, 3, 3, &g("4x7")).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 2]));
        assert!(r.element_order.is_some());
        let r = c4_tripartite(1, 1, 3, &g("2x2x5")).unwrap();
        assert_eq!(r.construction, Some(Construction::C4Z2Z2));
        assert_eq!(constructed(&r), &e(&[0, 0, 0]));
        precondition_failed(&c4_tripartite(1, 2, 3, &g("24")).unwrap());
        precondition_failed(&c4_tripartite(1, 1, 3, &g("24")).unwrap());
        for (p, q, t) in [(3, 1, 1), (1, 3, 1), (3, 3, 1), (3, 1, 3), (5, 3, 1), (1, 5, 7)] {
            let grp = GroupSpec::cyclic(4 * (p + q + t) as u64).unwrap();
            assert_eq!(constructed(&c4_tripartite(p, q, t, &grp).unwrap()), &e(&[0, 2]), "{p},{q},{t}");
        }
    }

    #[test]
    fn bipartite_examples() {
        let r = c4_bipartite_z2z2(1, 2, &g("2x2x3")).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 0, 1]));
        assert_eq!(r.errata, vec![Erratum::E3]);
        assert_eq!(constructed(&c4_bipartite_z2z2(3, 2, &g("2x2x5")).unwrap()), &e(&[0, 0, 1]));
        assert_eq!(constructed(&c4_bipartite_z2z2(5, 6, &g("2x2x11")).unwrap()), &e(&[0, 0, 1]));
        assert_eq!(constructed(&c4_bipartite_z2z2(3, 6, &g("2x2x3x3")).unwrap()), &e(&[0, 0, 0, 1]));
        precondition_failed(&c4_bipartite_z2z2(1, 2, &g("4x3")).unwrap());
        precondition_failed(&c4_bipartite_z2z2(2, 1, &g("2x2x3")).unwrap());
    }

    #[test]
    fn c8_examples() {
        let r = c8_z2z2(gen("cycle:3"), &g("2x2x2x3")).unwrap();
        assert_eq!(constructed(&r), &e(&[0, 0, 0, 0]));
        assert_eq!(r.errata, vec![Erratum::E1, Erratum::E2]);
        constructed(&c8_z2z2(gen("bipartite:2,2"), &g("2x2x2x2x2")).unwrap());
        precondition_failed(&c8_z2z2(gen("complete:4"), &g("2x2x8")).unwrap());

        assert_eq!(constructed(&c8_z4(gen("cycle:3"), &g("4x2x3")).unwrap()), &e(&[0, 0, 2]));
        constructed(&c8_z4(gen("bipartite:2,18"), &g("4x2x2x2x5")).unwrap());
        precondition_failed(&c8_z4(gen("complete:2"), &g("4x4")).unwrap());

        assert_eq!(constructed(&c8_cyclic2(gen("cycle:3"), &g("8x3"), 3).unwrap()), &e(&[0, 6]));
        assert_eq!(
            constructed(&c8_cyclic2(gen("bipartite:2,18"), &g("8x4x5"), 3).unwrap()),
            &e(&[0, 0, 6])
        );
        let r = c8_cyclic2(gen("bipartite:2,18"), &g("32x5"), 5).unwrap();
        assert!(matches!(r.outcome, Outcome::NotCovered { .. }), "{:?}", r.outcome);
    }

    #[test]
    fn c8_dispatch_examples() {
        for grp in crate::abelian::enumerate_groups(24) {
            constructed(&c8_dispatch(gen("cycle:3"), &grp).unwrap());
        }
        for grp in crate::abelian::enumerate_groups(160) {
            let r = c8_dispatch(gen("bipartite:2,18"), &grp).unwrap();
            if grp == g("32x5") {
                assert!(matches!(r.outcome, Outcome::NotCovered { .. }));
                assert_eq!(r.construction, None);
            } else {
                constructed(&r);
            }
        }
        precondition_failed(&c8_dispatch(gen("complete:4"), &g("32")).unwrap());
        precondition_failed(&c8_dispatch(gen("cycle:3"), &g("12")).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r = c4_bipartite_z2z2(1, 2, &g("2x2x3")).unwrap();
        let v = r.to_json();
        assert_eq!(v["outcome"], "constructed");
        assert_eq!(v["construction"], "lemma28");
        assert_eq!(v["errata"], json!(["E3"]));
        assert_eq!(v["magic"], json!([0, 0, 1]));
        let back = Labeling::from_json(v["labeling"].clone()).unwrap();
        assert_eq!(&back, r.labeling().unwrap());

        let r = c8_dispatch(gen("bipartite:2,18"), &g("32x5")).unwrap();
        let v = r.to_json();
        assert_eq!(v["outcome"], "not_covered");
        assert!(v["labeling"].is_null());
        assert!(v["construction"].is_null());
    }

    #[test]
    fn construction_ids_round_trip() {
        for c in Construction::ALL {
            assert_eq!(Construction::from_id(c.id()), Some(c));
            assert_eq!(serde_json::to_value(c).unwrap(), json!(c.id()));
        }
    }
}
