//! Ordered abelian groups of the form Λ = ℚᵏ with lexicographic order.
//!
//! Every group that appears in this crate is a finite lexicographic power of
//! the rationals: position 1 is the most significant coordinate, and
//! comparison, addition and rational scaling are all exact. These are exactly
//! the finite Hahn products over ℚ, which is enough to express every
//! epimorphism (truncation to an initial segment of positions) and every
//! order-preserving monomorphism (a scaled injection into deeper positions)
//! that the base-change machinery needs.
//!
//! The convex subgroups of Λ form a chain: level ℓ denotes the subgroup of
//! elements whose leading (most significant nonzero) position is ≥ ℓ. The
//! quotient of two adjacent levels is an archimedean group ≅ ℚ, and
//! [`standard_part`] reads off the image of an element in such a layer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors raised by group-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("operation requires a nonzero group element")]
    ZeroElement,
    #[error("element lies outside the convex subgroup M_g")]
    NotInSubgroup,
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
    #[error("malformed morphism: {0}")]
    BadMorphism(String),
}

/// Parses an exact rational from a `"p/q"` (or bare `"p"`) literal.
pub fn parse_rational(s: &str) -> Result<BigRational, GroupError> {
    let bad = || GroupError::BadRational(s.to_string());
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = numer.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = denom.trim().parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// Formats a rational as the canonical `"p/q"` literal (always reduced,
/// denominator positive, `/1` kept explicit).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// An element of Λ = ℚᵏ with lexicographic order, position 1 most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupValue {
    coords: Vec<BigRational>,
}

impl GroupValue {
    pub fn new(coords: Vec<BigRational>) -> Self {
        GroupValue { coords }
    }

    pub fn zero(rank: usize) -> Self {
        GroupValue {
            coords: vec![BigRational::zero(); rank],
        }
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        GroupValue {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.sign(), Ordering::Greater)
    }

    /// Sign of the value: the sign of its most significant nonzero entry.
    pub fn sign(&self) -> Ordering {
        for c in &self.coords {
            if c.is_positive() {
                return Ordering::Greater;
            }
            if c.is_negative() {
                return Ordering::Less;
            }
        }
        Ordering::Equal
    }

    /// Lexicographic absolute value.
    pub fn abs(&self) -> GroupValue {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Componentwise multiplication by an exact rational scalar.
    pub fn scale(&self, scalar: &BigRational) -> GroupValue {
        GroupValue {
            coords: self.coords.iter().map(|c| c * scalar).collect(),
        }
    }

    /// Smallest position (1-based) carrying a nonzero entry; `Infinity` for 0.
    pub fn leading_index(&self) -> LeadingIndex {
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                return LeadingIndex::Position(i + 1);
            }
        }
        LeadingIndex::Infinity
    }

    /// Total-order comparison; errors when the ranks differ.
    pub fn compare(&self, other: &GroupValue) -> Result<Ordering, GroupError> {
        if self.rank() != other.rank() {
            return Err(GroupError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for GroupValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.rank() != other.rank() {
            return None;
        }
        Some(self.coords.cmp(&other.coords))
    }
}

impl fmt::Debug for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! pointwise {
    ($lhs:expr, $rhs:expr, $op:tt) => {{
        assert_eq!($lhs.rank(), $rhs.rank(), "group value rank mismatch");
        GroupValue {
            coords: $lhs
                .coords
                .iter()
                .zip($rhs.coords.iter())
                .map(|(a, b)| a $op b)
                .collect(),
        }
    }};
}

impl Add for &GroupValue {
    type Output = GroupValue;
    fn add(self, rhs: &GroupValue) -> GroupValue {
        pointwise!(self, rhs, +)
    }
}

impl Sub for &GroupValue {
    type Output = GroupValue;
    fn sub(self, rhs: &GroupValue) -> GroupValue {
        pointwise!(self, rhs, -)
    }
}

impl Neg for &GroupValue {
    type Output = GroupValue;
    fn neg(self) -> GroupValue {
        GroupValue {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Serialize for GroupValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coords.iter().map(format_rational).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coords = strings
            .iter()
            .map(|s| parse_rational(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupValue { coords })
    }
}

/// Leading position of a group element, with +∞ reserved for zero so that
/// membership tests for the chain of convex subgroups read uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LeadingIndex {
    Position(usize),
    Infinity,
}

/// A convex subgroup of ℚᵏ: all elements whose leading index is ≥ `level`.
///
/// Level 1 is the whole group, level k+1 the trivial subgroup. These are the
/// only convex subgroups of a lexicographic power, and they are exactly the
/// kernels of the truncation epimorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvexSubgroup {
    level: usize,
}

impl ConvexSubgroup {
    pub fn new(level: usize) -> Self {
        ConvexSubgroup { level }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn contains(&self, value: &GroupValue) -> bool {
        value.leading_index() >= LeadingIndex::Position(self.level)
    }
}

/// The pair M_g ⊇ N_g of convex subgroups attached to a nonzero g: elements
/// whose leading index is ≥ (resp. >) that of g. The quotient M_g/N_g is the
/// archimedean layer at g's leading position.
pub fn convex_subgroups(g: &GroupValue) -> Result<(ConvexSubgroup, ConvexSubgroup), GroupError> {
    match g.leading_index() {
        LeadingIndex::Infinity => Err(GroupError::ZeroElement),
        LeadingIndex::Position(p) => Ok((ConvexSubgroup::new(p), ConvexSubgroup::new(p + 1))),
    }
}

/// Image of `a` in the archimedean layer M_g/N_g ≅ ℚ: the entry of `a` at
/// g's leading position. Requires a ∈ M_g.
pub fn standard_part(a: &GroupValue, g: &GroupValue) -> Result<BigRational, GroupError> {
    if a.rank() != g.rank() {
        return Err(GroupError::RankMismatch {
            left: a.rank(),
            right: g.rank(),
        });
    }
    let p = match g.leading_index() {
        LeadingIndex::Infinity => return Err(GroupError::ZeroElement),
        LeadingIndex::Position(p) => p,
    };
    if a.leading_index() < LeadingIndex::Position(p) {
        return Err(GroupError::NotInSubgroup);
    }
    Ok(a.coords[p - 1].clone())
}

/// Order epimorphism ℚᵏ ↠ ℚˢ: truncation to the `keep` most significant
/// positions. Its kernel is the convex subgroup of level `keep + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiMorphism {
    pub source_rank: usize,
    pub keep: usize,
}

impl EpiMorphism {
    pub fn new(keep: usize, source_rank: usize) -> Result<Self, GroupError> {
        if keep > source_rank {
            return Err(GroupError::BadMorphism(format!(
                "cannot keep {keep} positions of a rank-{source_rank} group"
            )));
        }
        Ok(EpiMorphism { keep, source_rank })
    }

    pub fn identity(rank: usize) -> Self {
        EpiMorphism {
            keep: rank,
            source_rank: rank,
        }
    }

    pub fn target_rank(&self) -> usize {
        self.keep
    }

    pub fn kernel(&self) -> ConvexSubgroup {
        ConvexSubgroup::new(self.keep + 1)
    }

    pub fn apply(&self, a: &GroupValue) -> Result<GroupValue, GroupError> {
        if a.rank() != self.source_rank {
            return Err(GroupError::RankMismatch {
                left: a.rank(),
                right: self.source_rank,
            });
        }
        Ok(GroupValue::new(a.coords[..self.keep].to_vec()))
    }

    /// Members of the kernel, i.e. values e maps to zero.
    pub fn in_kernel(&self, a: &GroupValue) -> bool {
        self.kernel().contains(a)
    }
}

/// Shorthand for [`EpiMorphism::new`]: the quotient by the convex subgroup of
/// level s+1, realized as truncation to the s most significant positions.
pub fn quotient_epi(keep: usize, source_rank: usize) -> Result<EpiMorphism, GroupError> {
    EpiMorphism::new(keep, source_rank)
}

/// Serde helpers mapping `Vec<BigRational>` to/from `"p/q"` string arrays.
pub mod rational_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse_rational(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect()
    }
}

/// Order monomorphism ℚʳ ↪ ℚᵏ: source position i lands at target position
/// `positions[i]` scaled by the positive rational `scales[i]`. Positions are
/// strictly increasing, which together with positive scales makes the map
/// order-preserving for the lexicographic orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoMorphism {
    pub source_rank: usize,
    pub target_rank: usize,
    /// 1-based target positions, strictly increasing.
    pub positions: Vec<usize>,
    #[serde(with = "rational_strings")]
    pub scales: Vec<BigRational>,
}

impl MonoMorphism {
    pub fn new(
        source_rank: usize,
        target_rank: usize,
        positions: Vec<usize>,
        scales: Vec<BigRational>,
    ) -> Result<Self, GroupError> {
        if positions.len() != source_rank || scales.len() != source_rank {
            return Err(GroupError::BadMorphism(
                "injection spec length must equal the source rank".into(),
            ));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GroupError::BadMorphism(
                "injection positions must be strictly increasing".into(),
            ));
        }
        if positions.iter().any(|&p| p == 0 || p > target_rank) {
            return Err(GroupError::BadMorphism(
                "injection position out of target range".into(),
            ));
        }
        if scales.iter().any(|s| !s.is_positive()) {
            return Err(GroupError::BadMorphism(
                "injection scales must be positive".into(),
            ));
        }
        Ok(MonoMorphism {
            source_rank,
            target_rank,
            positions,
            scales,
        })
    }

    pub fn identity(rank: usize) -> Self {
        MonoMorphism {
            source_rank: rank,
            target_rank: rank,
            positions: (1..=rank).collect(),
            scales: vec![BigRational::one(); rank],
        }
    }

    pub fn apply(&self, a: &GroupValue) -> Result<GroupValue, GroupError> {
        if a.rank() != self.source_rank {
            return Err(GroupError::RankMismatch {
                left: a.rank(),
                right: self.source_rank,
            });
        }
        let mut coords = vec![BigRational::zero(); self.target_rank];
        for ((&pos, scale), value) in self
            .positions
            .iter()
            .zip(self.scales.iter())
            .zip(a.coords.iter())
        {
            coords[pos - 1] = value * scale;
        }
        Ok(GroupValue::new(coords))
    }
}

/// A morphism of lexicographic groups: an epimorphism, a monomorphism, or an
/// epimorphism followed by a monomorphism (the general case).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupMorphism {
    Epi(EpiMorphism),
    Mono(MonoMorphism),
    Composite(EpiMorphism, MonoMorphism),
}

impl GroupMorphism {
    pub fn composite(epi: EpiMorphism, mono: MonoMorphism) -> Result<Self, GroupError> {
        if mono.source_rank != epi.target_rank() {
            return Err(GroupError::BadMorphism(format!(
                "cannot compose: epi target rank {} vs mono source rank {}",
                epi.target_rank(),
                mono.source_rank
            )));
        }
        Ok(GroupMorphism::Composite(epi, mono))
    }

    pub fn source_rank(&self) -> usize {
        match self {
            GroupMorphism::Epi(e) => e.source_rank,
            GroupMorphism::Mono(m) => m.source_rank,
            GroupMorphism::Composite(e, _) => e.source_rank,
        }
    }

    pub fn target_rank(&self) -> usize {
        match self {
            GroupMorphism::Epi(e) => e.target_rank(),
            GroupMorphism::Mono(m) => m.target_rank,
            GroupMorphism::Composite(_, m) => m.target_rank,
        }
    }

    pub fn apply(&self, a: &GroupValue) -> Result<GroupValue, GroupError> {
        match self {
            GroupMorphism::Epi(e) => e.apply(a),
            GroupMorphism::Mono(m) => m.apply(a),
            GroupMorphism::Composite(e, m) => m.apply(&e.apply(a)?),
        }
    }

    /// Factors the morphism as an epimorphism followed by a monomorphism,
    /// filling in identities for the pure cases.
    pub fn decompose(&self) -> (EpiMorphism, MonoMorphism) {
        match self {
            GroupMorphism::Epi(e) => (e.clone(), MonoMorphism::identity(e.target_rank())),
            GroupMorphism::Mono(m) => (EpiMorphism::identity(m.source_rank), m.clone()),
            GroupMorphism::Composite(e, m) => (e.clone(), m.clone()),
        }
    }
}
