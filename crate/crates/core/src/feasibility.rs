//! Necessary conditions and non-existence certificates.
//!
//! All inequalities are decided in exact integer arithmetic. A bound of the
//! form `m >= (sqrt(2(s*n+1)^2 - 1) - 1)/s - n` is rewritten as
//! `(s*m + s*n + 1)^2 >= 2(s*n+1)^2 - 1`, both sides being positive.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{Element, GroupSpec};
use crate::graphs::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("group {group} has order {got}, expected {expected}")]
    WrongOrder {
        group: GroupSpec,
        expected: u64,
        got: u64,
    },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionKind {
    OddRegular,
    InvolutionSum,
    AcgCondition,
    C8Necessary,
}

/// A reason a labeling cannot exist, with enough data to recheck it by hand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub detail: String,
    pub witness: Value,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

/// Magic constant `r(n+1)/2` of an r-regular distance magic graph on n
/// vertices, kept as a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegularMagic {
    pub numerator: u64,
    pub denominator: u64,
    /// False when r is odd: then neither a 1..n labeling nor a Z_n labeling
    /// exists.
    pub feasible: bool,
}

impl RegularMagic {
    pub fn as_integer(&self) -> Option<u64> {
        (self.denominator == 1).then_some(self.numerator)
    }
}

impl fmt::Display for RegularMagic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

pub fn regular_magic_constant(r: u64, n: u64) -> RegularMagic {
    assert!(n >= 1, "graph must have a vertex");
    let twice = r * (n + 1);
    let (numerator, denominator) = if twice % 2 == 0 { (twice / 2, 1) } else { (twice, 2) };
    RegularMagic {
        numerator,
        denominator,
        feasible: r % 2 == 0,
    }
}

/// Fires on an r-regular graph with r odd.
pub fn odd_regular_obstruction(g: &Graph) -> Option<Obstruction> {
    let degrees = g.degrees();
    let r = *degrees.first()?;
    if r % 2 == 0 || degrees.iter().any(|&d| d != r) {
        return None;
    }
    let magic = regular_magic_constant(r as u64, g.n() as u64);
    Some(Obstruction {
        kind: ObstructionKind::OddRegular,
        detail: format!("graph is {r}-regular on {} vertices with r odd", g.n()),
        witness: json!({ "r": r, "n": g.n(), "mu": magic.to_string() }),
    })
}

fn check_bipartite_c4(m: usize, n: usize, group: &GroupSpec) -> Result<(), FeasibilityError> {
    if m % 2 == 0 || n % 2 == 1 || n == 0 {
        return Err(FeasibilityError::Domain(format!(
            "needs m odd and n even, got m = {m}, n = {n}"
        )));
    }
    let expected = 4 * (m + n) as u64;
    if group.order() != expected {
        return Err(FeasibilityError::WrongOrder {
            group: group.clone(),
            expected,
            got: group.order(),
        });
    }
    Ok(())
}

/// Solves `4x = target` coordinatewise; `None` if there is no solution.
fn quarter(group: &GroupSpec, target: &Element) -> Option<Element> {
    let mut out = Vec::with_capacity(group.rank());
    for (&t, &modulus) in target.residues().iter().zip(group.factors()) {
        out.push((0..modulus).find(|&x| (4 * x) % modulus == t)?);
    }
    Some(Element::new(out))
}

/// In a magic labeling of `K_{m,n} x C4` (m odd, n even) four disjoint
/// pair sums each equal the magic constant, so `4 * mu` is the sum of all
/// elements. Fires when that sum is not a multiple of 4 in the group; for a
/// group with one involution the sum is that involution.
pub fn involution_obstruction_bipartite_c4(
    m: usize,
    n: usize,
    group: &GroupSpec,
) -> Result<Option<Obstruction>, FeasibilityError> {
    check_bipartite_c4(m, n, group)?;
    let total = group.sum_all();
    if quarter(group, &total).is_some() {
        return Ok(None);
    }
    let involutions = group.involutions();
    let detail = if involutions.len() == 1 {
        format!(
            "{group} has exactly one involution {}; 4*mu would have to equal it, and 4x = {} has no solution",
            involutions[0], total
        )
    } else {
        format!("4*mu would have to equal the element sum {total}, which is not a multiple of 4")
    };
    Ok(Some(Obstruction {
        kind: ObstructionKind::InvolutionSum,
        detail,
        witness: json!({
            "group": group.to_string(),
            "sum_all": total,
            "involutions": involutions,
        }),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Existence {
    Exists,
    NotExists,
}

/// For m odd and n even, `K_{m,n} x C4` has a labeling over the group
/// exactly when the group has a `Z2 x Z2` summand.
pub fn bipartite_c4_characterization(
    m: usize,
    n: usize,
    group: &GroupSpec,
) -> Result<Existence, FeasibilityError> {
    check_bipartite_c4(m, n, group)?;
    Ok(if group.has_z2_z2_summand() {
        Existence::Exists
    } else {
        Existence::NotExists
    })
}

/// Both conditions of a bipartite-times-cycle bound, with the two sides of
/// the squared inequality kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BipartiteBound {
    pub m: u64,
    pub n: u64,
    pub scale: u64,
    pub parity_ok: bool,
    /// `(s*m + s*n + 1)^2`
    pub lhs: u128,
    /// `2(s*n + 1)^2 - 1`
    pub rhs: u128,
}

impl BipartiteBound {
    fn new(m: u64, n: u64, scale: u64) -> Self {
        assert!(1 <= m && m <= n, "needs 1 <= m <= n, got m = {m}, n = {n}");
        let a = (scale as u128) * (m as u128 + n as u128) + 1;
        let b = (scale as u128) * n as u128 + 1;
        BipartiteBound {
            m,
            n,
            scale,
            parity_ok: (m + n) % 2 == 0,
            lhs: a * a,
            rhs: 2 * b * b - 1,
        }
    }

    pub fn inequality_ok(&self) -> bool {
        self.lhs >= self.rhs
    }

    pub fn holds(&self) -> bool {
        self.parity_ok && self.inequality_ok()
    }

    fn obstruction(&self, kind: ObstructionKind) -> Option<Obstruction> {
        if self.holds() {
            return None;
        }
        let detail = if !self.parity_ok {
            format!("m + n = {} is odd", self.m + self.n)
        } else {
            format!(
                "({s}m+{s}n+1)^2 = {} < 2({s}n+1)^2-1 = {}",
                self.lhs,
                self.rhs,
                s = self.scale
            )
        };
        Some(Obstruction {
            kind,
            detail,
            witness: serde_json::to_value(self).expect("bound serializes"),
        })
    }
}

pub fn acg_condition(m: u64, n: u64) -> BipartiteBound {
    BipartiteBound::new(m, n, 8)
}

pub fn c8_condition(m: u64, n: u64) -> BipartiteBound {
    BipartiteBound::new(m, n, 16)
}

/// Whether `K_{m,n} x C4` has a (1..4(m+n)) distance magic labeling,
/// `1 <= m <= n`.
pub fn acg_c4_distance_magic(m: u64, n: u64) -> bool {
    acg_condition(m, n).holds()
}

/// Necessary condition for `K_{m,n} x C8` to be distance magic,
/// `1 <= m <= n`. False certifies non-existence; true certifies nothing.
pub fn c8_necessary(m: u64, n: u64) -> bool {
    c8_condition(m, n).holds()
}

pub fn acg_obstruction(m: u64, n: u64) -> Option<Obstruction> {
    acg_condition(m, n).obstruction(ObstructionKind::AcgCondition)
}

pub fn c8_obstruction(m: u64, n: u64) -> Option<Obstruction> {
    c8_condition(m, n).obstruction(ObstructionKind::C8Necessary)
}
