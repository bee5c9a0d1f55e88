//! Finite Abelian groups written as products of cyclic groups.
//!
//! A [`GroupSpec`] keeps the factor list exactly as it was supplied and does
//! arithmetic componentwise on those factors. [`GroupSpec::canonical`] gives
//! the primary decomposition (prime-power factors, primes ascending, exponents
//! descending within a prime), which is what isomorphism tests and the
//! labeling constructions work with.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group spec {0:?}: {1}")]
    Parse(String, &'static str),
    #[error("cyclic factor must be at least 2, got {0}")]
    FactorTooSmall(u64),
    #[error("element has {got} coordinates, group has {expected} factors")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element out of range: residue {residue} at position {position} is not below {modulus}")]
    OutOfRange {
        position: usize,
        residue: u64,
        modulus: u64,
    },
    #[error("group order overflows u64")]
    Overflow,
}

/// A residue vector, one coordinate per cyclic factor of its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn new(residues: Vec<u64>) -> Self {
        Element(residues)
    }

    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn into_residues(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.pad(&format!("({})", inner.join(",")))
    }
}

/// An ordered product Z_{n_1} x ... x Z_{n_t}. The empty product is the
/// trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupSpec {
    factors: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(GroupError::FactorTooSmall(bad));
        }
        factors
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(GroupError::Overflow)?;
        Ok(GroupSpec { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(vec![n])
        }
    }

    pub fn trivial() -> Self {
        GroupSpec { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Primary decomposition with primes ascending and, within a prime,
    /// exponents descending: `[2,6]` becomes `[2,2,3]`, `[12]` becomes `[4,3]`.
    pub fn canonical(&self) -> GroupSpec {
        let mut powers: Vec<(u64, u32)> = self
            .factors
            .iter()
            .flat_map(|&n| factorize(n))
            .collect();
        powers.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        GroupSpec {
            factors: powers.into_iter().map(|(p, e)| p.pow(e)).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    pub fn is_isomorphic(&self, other: &GroupSpec) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    pub fn check(&self, x: &Element) -> Result<(), GroupError> {
        if x.0.len() != self.rank() {
            return Err(GroupError::DimensionMismatch {
                expected: self.rank(),
                got: x.0.len(),
            });
        }
        for (position, (&residue, &modulus)) in x.0.iter().zip(&self.factors).enumerate() {
            if residue >= modulus {
                return Err(GroupError::OutOfRange {
                    position,
                    residue,
                    modulus,
                });
            }
        }
        Ok(())
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<Element, GroupError> {
        let x = Element(residues);
        self.check(&x)?;
        Ok(x)
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: &Element) -> Result<Element, GroupError> {
        self.check(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, &self.neg_unchecked(y)))
    }

    /// `k * x`.
    pub fn scale(&self, x: &Element, k: u64) -> Result<Element, GroupError> {
        self.check(x)?;
        Ok(Element(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&r, &n)| mul_mod(r, k % n, n))
                .collect(),
        ))
    }

    pub(crate) fn add_unchecked(&self, x: &Element, y: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub(crate) fn add_assign_unchecked(&self, acc: &mut Element, y: &Element) {
        for ((a, &b), &n) in acc.0.iter_mut().zip(&y.0).zip(&self.factors) {
            *a = (*a + b) % n;
        }
    }

    pub(crate) fn neg_unchecked(&self, x: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        )
    }

    /// All elements in lexicographic order of their residue vectors; the
    /// first one is zero.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            group: self,
            next: Some(self.zero()),
        }
    }

    /// Position of `x` in [`GroupSpec::elements`] order (mixed radix, last
    /// factor fastest).
    pub fn index_of(&self, x: &Element) -> Result<usize, GroupError> {
        self.check(x)?;
        Ok(x.0
            .iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&r, &n)| acc * n + r) as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Option<Element> {
        if index as u64 >= self.order() {
            return None;
        }
        let mut residues = vec![0; self.rank()];
        for (slot, &n) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = index as u64 % n;
            index /= n as usize;
        }
        Some(Element(residues))
    }

    /// Nonzero elements of order two.
    pub fn involutions(&self) -> Vec<Element> {
        // 2x = 0 forces each coordinate to be 0 or n/2 (n even).
        let choices: Vec<Vec<u64>> = self
            .factors
            .iter()
            .map(|&n| if n % 2 == 0 { vec![0, n / 2] } else { vec![0] })
            .collect();
        let mut out = vec![Vec::new()];
        for options in &choices {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    options.iter().map(move |&r| {
                        let mut v = prefix.clone();
                        v.push(r);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(Element)
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Sum of every element of the group.
    pub fn sum_all(&self) -> Element {
        // Z_n sums to n/2 for even n and to 0 for odd n; each coordinate of
        // the product sum is (|G| / n) times that.
        let order = self.order();
        Element(
            self.factors
                .iter()
                .map(|&n| {
                    let per_factor = if n % 2 == 0 { n / 2 } else { 0 };
                    mul_mod(per_factor, (order / n) % n, n)
                })
                .collect(),
        )
    }

    /// Locates a primary factor of order exactly `2^alpha` in the canonical
    /// form. Returns its position there and the canonical complement A with
    /// `canonical ~ Z_{2^alpha} x A`.
    pub fn split_cyclic_two_factor(&self, alpha: u32) -> Option<(usize, GroupSpec)> {
        if alpha == 0 {
            return None;
        }
        let target = 1u64.checked_shl(alpha)?;
        let canonical = self.canonical();
        let position = canonical.factors.iter().position(|&n| n == target)?;
        let mut rest = canonical.factors.clone();
        rest.remove(position);
        Some((position, GroupSpec { factors: rest }))
    }

    /// True iff the group is Z_2 x Z_2 x A for some A.
    pub fn has_z2_z2_summand(&self) -> bool {
        self.canonical().factors.iter().filter(|&&n| n == 2).count() >= 2
    }

    /// Orders `2^alpha` of the cyclic 2-primary factors, largest first.
    pub fn two_primary_factors(&self) -> Vec<u64> {
        self.canonical()
            .factors
            .into_iter()
            .filter(|n| n.is_power_of_two())
            .collect()
    }

    /// Sub-product on the given canonical positions (kept in the order given).
    pub(crate) fn permuted(&self, positions: &[usize]) -> GroupSpec {
        GroupSpec {
            factors: positions.iter().map(|&p| self.factors[p]).collect(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.pad("1");
        }
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        f.pad(&parts.join("x"))
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// `"4x2x5"` or a bare order such as `"40"` (cyclic); `"1"` is trivial.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |why| GroupError::Parse(s.to_string(), why);
        if s.is_empty() {
            return Err(err("empty"));
        }
        let parts: Vec<&str> = s.split('x').collect();
        let mut factors = Vec::with_capacity(parts.len());
        for part in &parts {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("factors must be decimal integers joined by 'x'"));
            }
            factors.push(part.parse::<u64>().map_err(|_| err("factor too large"))?);
        }
        if factors == [1] {
            return Ok(GroupSpec::trivial());
        }
        GroupSpec::new(factors)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub struct Elements<'a> {
    group: &'a GroupSpec,
    next: Option<Element>,
}

impl Iterator for Elements<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (r, &n) in succ.0.iter_mut().zip(&self.group.factors).rev() {
            *r += 1;
            if *r < n {
                carried = false;
                break;
            }
            *r = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// One representative per isomorphism class of Abelian groups of the given
/// order, each in canonical form.
pub fn enumerate_groups(order: u64) -> Vec<GroupSpec> {
    assert!(order >= 1, "group order must be positive");
    let mut out = vec![Vec::new()];
    for (p, e) in factorize(order) {
        let choices: Vec<Vec<u64>> = partitions(e)
            .into_iter()
            .map(|parts| parts.into_iter().map(|k| p.pow(k)).collect())
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|factors| GroupSpec { factors }).collect()
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer partitions of `n` with parts in non-increasing order, listed
/// from `[n]` down to `[1, 1, ..., 1]`.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn e(v: &[u64]) -> Element {
        Element::new(v.to_vec())
    }

    #[test]
    fn add_examples() {
        assert_eq!(g("4x3").add(&e(&[3, 2]), &e(&[2, 2])).unwrap(), e(&[1, 1]));
        assert_eq!(g("2x2").add(&e(&[1, 1]), &e(&[1, 1])).unwrap(), e(&[0, 0]));
        assert_eq!(g("12").add(&e(&[7]), &e(&[9])).unwrap(), e(&[4]));
    }

    #[test]
    fn add_rejects_wrong_dimension() {
        assert_eq!(
            g("4x3").add(&e(&[1]), &e(&[1, 1])),
            Err(GroupError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            g("4x3").neg(&e(&[4, 0])),
            Err(GroupError::OutOfRange { position: 0, .. })
        ));
    }

    #[test]
    fn neg_examples() {
        assert_eq!(g("5").neg(&e(&[2])).unwrap(), e(&[3]));
        assert_eq!(g("4x3").neg(&e(&[0, 0])).unwrap(), e(&[0, 0]));
        assert_eq!(g("2x2x3").neg(&e(&[1, 0, 2])).unwrap(), e(&[1, 0, 1]));
    }

    #[test]
    fn enumerate_elements_examples() {
        let z3: Vec<_> = g("3").elements().collect();
        assert_eq!(z3, vec![e(&[0]), e(&[1]), e(&[2])]);
        let v4: Vec<_> = g("2x2").elements().collect();
        assert_eq!(v4, vec![e(&[0, 0]), e(&[0, 1]), e(&[1, 0]), e(&[1, 1])]);
        assert_eq!(g("4x5").elements().count(), 20);
        let trivial: Vec<_> = GroupSpec::trivial().elements().collect();
        assert_eq!(trivial, vec![e(&[])]);
    }

    #[test]
    fn index_round_trip() {
        let grp = g("4x2x5");
        for (k, x) in grp.elements().enumerate() {
            assert_eq!(grp.index_of(&x).unwrap(), k);
            assert_eq!(grp.element_at(k).unwrap(), x);
        }
        assert_eq!(grp.element_at(40), None);
    }

    #[test]
    fn enumerate_groups_examples() {
        let eight: Vec<String> = enumerate_groups(8).iter().map(|g| g.to_string()).collect();
        assert_eq!(eight, ["8", "4x2", "2x2x2"]);
        let forty: Vec<String> = enumerate_groups(40).iter().map(|g| g.to_string()).collect();
        assert_eq!(forty, ["8x5", "4x2x5", "2x2x2x5"]);
        assert_eq!(enumerate_groups(1), vec![GroupSpec::trivial()]);
    }

    #[test]
    fn involution_examples() {
        assert_eq!(g("4x5").involutions(), vec![e(&[2, 0])]);
        assert_eq!(g("12").involutions(), vec![e(&[6])]);
        assert!(g("3").involutions().is_empty());
        assert_eq!(g("2x4x6").involutions().len(), 7);
    }

    #[test]
    fn sum_all_examples() {
        assert_eq!(g("12").sum_all(), e(&[6]));
        assert_eq!(g("3").sum_all(), e(&[0]));
        assert_eq!(g("2x2").sum_all(), e(&[0, 0]));
    }

    #[test]
    fn split_examples() {
        assert_eq!(g("8x5").split_cyclic_two_factor(3), Some((0, g("5"))));
        assert_eq!(g("4x2x5").split_cyclic_two_factor(3), None);
        assert_eq!(g("2x2x2x5").split_cyclic_two_factor(1), Some((0, g("2x2x5"))));
        assert_eq!(g("40").split_cyclic_two_factor(3), Some((0, g("5"))));
    }

    #[test]
    fn z2_z2_summand_examples() {
        assert!(g("2x2x3").has_z2_z2_summand());
        assert!(!g("4x2").has_z2_z2_summand());
        assert!(!g("4x4").has_z2_z2_summand());
        assert!(g("6x2").has_z2_z2_summand());
    }

    /// `[4,2]` is not `Z2 x Z2 x A` for any A of order 2; the only candidate
    /// is A = Z2 and Z2^3 differs from Z4 x Z2.
    #[test]
    fn z2_z2_summand_by_candidate_search() {
        for (spec, expected) in [("4x2", false), ("4x4", false), ("2x2x3", true), ("8x2x2", true)] {
            let grp = g(spec);
            let found = enumerate_groups(grp.order() / 4).into_iter().any(|a| {
                let mut f = vec![2, 2];
                f.extend_from_slice(a.factors());
                GroupSpec::new(f).unwrap().is_isomorphic(&grp)
            });
            assert_eq!(found, expected, "{spec}");
            assert_eq!(grp.has_z2_z2_summand(), expected, "{spec}");
        }
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(g("2x6").canonical(), g("2x2x3"));
        assert_eq!(g("12").canonical(), g("4x3"));
        assert!(!g("2x6").is_isomorphic(&g("12")));
        assert!(g("6").is_isomorphic(&g("3x2")));
        assert_eq!(g("2x4").canonical(), g("4x2"));
        let c = g("60x18").canonical();
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn parse_rules() {
        assert_eq!(g("4x2x5").factors(), &[4, 2, 5]);
        assert_eq!(g("40").factors(), &[40]);
        assert_eq!(g("1"), GroupSpec::trivial());
        for bad in ["", "4 x2", "4x", "x4", "4X2", "4x1", "0", "-4", "4x 2"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad:?}");
        }
        assert_eq!(g("4x2x5").to_string(), "4x2x5");
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }
}
