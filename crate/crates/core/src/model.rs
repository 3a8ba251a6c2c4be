//! The model apartment 𝔸(R, Λ): points with Λ-coordinates over the simple
//! roots, the Λ-valued Weyl-invariant metric, the full affine Weyl group,
//! and exact convex geometry built from half-apartments.
//!
//! A point is the formal sum Σ λ_α·α with λ_α ∈ Λ; the metric is
//! d(x, y) = Σ_{β ∈ R⁺} |⟨y − x, β∨⟩|.
//! Convex sets are finite intersections of half-apartments
//! {x : ⟨x, β∨⟩ ≥ k} with k ∈ Λ ∪ {−∞}; emptiness and set containment are
//! decided exactly by variable elimination (see [`crate::linear`]), never by
//! sampling. Weyl simplices carry a base point and a direction — a spherical
//! Weyl element together with the subset of fundamental walls kept as
//! inequalities — and directions are compared through a canonical form of
//! their rational cone, which makes parallelism a data comparison.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linear::{feasible_point, LinearConstraint};
use crate::ordered::GroupValue;
use crate::roots::{RootSystem, RootSystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("point has {got} coordinates, model space has rank {expected}")]
    PointRank { expected: usize, got: usize },
    #[error("group value rank {got} does not match the declared rank {expected}")]
    GroupRank { expected: usize, got: usize },
    #[error(transparent)]
    Root(#[from] RootSystemError),
    #[error("germ base point lies outside the convex set")]
    BaseOutsideSet,
    #[error("point already lies in the convex set")]
    PointInsideSet,
    #[error("convex set is empty")]
    EmptySet,
    #[error("operation needs a nonempty list of points")]
    EmptyInput,
    #[error("simplices have different dimensions ({0} vs {1})")]
    TypeMismatch(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A model space 𝔸(R, Λ): a root system plus the rank of Λ = ℚᵏ.
#[derive(Clone)]
pub struct ModelSpace {
    rs: Arc<RootSystem>,
    group_rank: usize,
}

impl fmt::Debug for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModelSpace({}{}, rank {})",
            self.rs.label, self.rs.rank, self.group_rank
        )
    }
}

impl ModelSpace {
    pub fn new(rs: Arc<RootSystem>, group_rank: usize) -> Self {
        ModelSpace { rs, group_rank }
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    pub fn roots_arc(&self) -> Arc<RootSystem> {
        Arc::clone(&self.rs)
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn group_rank(&self) -> usize {
        self.group_rank
    }

    /// Same root system, different coefficient group rank.
    pub fn with_group_rank(&self, group_rank: usize) -> ModelSpace {
        ModelSpace {
            rs: Arc::clone(&self.rs),
            group_rank,
        }
    }

    pub fn origin(&self) -> Point {
        Point::zero(self)
    }

    pub fn check_point(&self, p: &Point) -> Result<(), ModelError> {
        if p.coords.len() != self.rank() {
            return Err(ModelError::PointRank {
                expected: self.rank(),
                got: p.coords.len(),
            });
        }
        for c in &p.coords {
            if c.rank() != self.group_rank {
                return Err(ModelError::GroupRank {
                    expected: self.group_rank,
                    got: c.rank(),
                });
            }
        }
        Ok(())
    }

    /// ⟨x, β∨⟩ ∈ Λ, linearly extended over the simple-root coordinates.
    pub fn pairing(&self, x: &Point, root: usize) -> GroupValue {
        let table = &self.rs.roots()[root].pairing;
        let mut acc = GroupValue::zero(self.group_rank);
        for (coeff, lambda) in table.iter().zip(x.coords.iter()) {
            if *coeff != 0 {
                acc = &acc + &lambda.scale(&BigRational::from_integer((*coeff).into()));
            }
        }
        acc
    }

    /// The aW-invariant metric d(x, y) = Σ_{β ∈ R⁺} |⟨y − x, β∨⟩|.
    pub fn distance(&self, x: &Point, y: &Point) -> GroupValue {
        let diff = y - x;
        let mut acc = GroupValue::zero(self.group_rank);
        for (idx, root) in self.rs.roots().iter().enumerate() {
            if root.positive {
                acc = &acc + &self.pairing(&diff, idx).abs();
            }
        }
        acc
    }
}

/// A point of the model space: one Λ-coordinate per simple root.
#[derive(Clone, PartialEq, Eq)]
pub struct Point {
    coords: Vec<GroupValue>,
}

impl Point {
    pub fn new(coords: Vec<GroupValue>) -> Self {
        Point { coords }
    }

    pub fn zero(ms: &ModelSpace) -> Self {
        Point {
            coords: vec![GroupValue::zero(ms.group_rank()); ms.rank()],
        }
    }

    pub fn coords(&self) -> &[GroupValue] {
        &self.coords
    }

    pub fn scale(&self, scalar: &BigRational) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c.scale(scalar)).collect(),
        }
    }

    /// x + t·v for a rational direction vector v.
    pub fn translate_rational(&self, direction: &[BigRational], t: &GroupValue) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(direction.iter())
                .map(|(c, d)| c + &t.scale(d))
                .collect(),
        }
    }
}

impl std::ops::Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.coords)
    }
}

/// An element of the full affine Weyl group W = sW ⋉ T with T = 𝔸:
/// x ↦ w̄·x + t.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub weyl: usize,
    pub translation: Point,
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap(w={}, t={:?})", self.weyl, self.translation)
    }
}

impl AffineMap {
    pub fn identity(ms: &ModelSpace) -> Self {
        AffineMap {
            weyl: 0,
            translation: Point::zero(ms),
        }
    }

    pub fn from_translation(t: Point) -> Self {
        AffineMap {
            weyl: 0,
            translation: t,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.weyl == 0 && self.translation.coords.iter().all(GroupValue::is_zero)
    }

    /// Linear action of the spherical part only.
    pub fn linear_apply(&self, ms: &ModelSpace, x: &Point) -> Point {
        apply_weyl_linear(ms, self.weyl, x)
    }

    pub fn apply(&self, ms: &ModelSpace, x: &Point) -> Point {
        &self.linear_apply(ms, x) + &self.translation
    }

    /// Composition self ∘ other (apply `other` first).
    pub fn compose(&self, ms: &ModelSpace, other: &AffineMap) -> AffineMap {
        AffineMap {
            weyl: ms.roots().compose(self.weyl, other.weyl),
            translation: &apply_weyl_linear(ms, self.weyl, &other.translation)
                + &self.translation,
        }
    }

    pub fn inverse(&self, ms: &ModelSpace) -> AffineMap {
        let inv = ms.roots().inverse_of(self.weyl);
        let t = apply_weyl_linear(ms, inv, &self.translation);
        AffineMap {
            weyl: inv,
            translation: Point {
                coords: t.coords.iter().map(|c| -c).collect(),
            },
        }
    }
}

fn apply_weyl_linear(ms: &ModelSpace, weyl: usize, x: &Point) -> Point {
    let m = &ms.roots().weyl(weyl).matrix;
    let n = ms.rank();
    let coords = (0..n)
        .map(|i| {
            let mut acc = GroupValue::zero(ms.group_rank());
            for j in 0..n {
                let e = m.at(i, j);
                if !e.is_zero() {
                    acc = &acc + &x.coords[j].scale(e);
                }
            }
            acc
        })
        .collect();
    Point { coords }
}

/// Offset of a half-apartment: an element of Λ or −∞ (the whole apartment).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Offset {
    NegInf,
    Finite(GroupValue),
}

/// The half-apartment {x : ⟨x, β∨⟩ ≥ k}; `root` indexes into the root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfApartment {
    pub root: usize,
    pub offset: Offset,
}

impl HalfApartment {
    pub fn new(root: usize, offset: GroupValue) -> Self {
        HalfApartment {
            root,
            offset: Offset::Finite(offset),
        }
    }

    pub fn whole(root: usize) -> Self {
        HalfApartment {
            root,
            offset: Offset::NegInf,
        }
    }
}

/// A finite intersection of half-apartments. The constraint list is not
/// canonicalized; set equality is always decided semantically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConvexSet {
    pub constraints: Vec<HalfApartment>,
}

impl ConvexSet {
    pub fn whole() -> Self {
        ConvexSet {
            constraints: Vec::new(),
        }
    }

    pub fn new(constraints: Vec<HalfApartment>) -> Self {
        ConvexSet { constraints }
    }

    pub fn intersect(&self, other: &ConvexSet) -> ConvexSet {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        ConvexSet { constraints }
    }

    pub fn contains(&self, ms: &ModelSpace, p: &Point) -> bool {
        self.constraints.iter().all(|h| match &h.offset {
            Offset::NegInf => true,
            Offset::Finite(k) => ms.pairing(p, h.root) >= *k,
        })
    }

    /// Compiles the finite constraints to the elimination solver's form.
    pub fn compile(&self, ms: &ModelSpace) -> Vec<LinearConstraint> {
        self.constraints
            .iter()
            .filter_map(|h| match &h.offset {
                Offset::NegInf => None,
                Offset::Finite(k) => {
                    let coeffs = ms.roots().roots()[h.root]
                        .pairing
                        .iter()
                        .map(|&c| BigRational::from_integer(c.into()))
                        .collect();
                    Some(LinearConstraint::new(coeffs, k.clone()))
                }
            })
            .collect()
    }

    /// A point satisfying every constraint, when one exists.
    pub fn witness(&self, ms: &ModelSpace) -> Option<Point> {
        feasible_point(&self.compile(ms), ms.rank(), ms.group_rank()).map(Point::new)
    }

    pub fn is_empty(&self, ms: &ModelSpace) -> bool {
        self.witness(ms).is_none()
    }

    /// Semantic containment self ⊆ other.
    pub fn subset_of(&self, ms: &ModelSpace, other: &ConvexSet) -> bool {
        let base = self.compile(ms);
        for h in &other.constraints {
            let Offset::Finite(k) = &h.offset else {
                continue;
            };
            let coeffs: Vec<BigRational> = ms.roots().roots()[h.root]
                .pairing
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect();
            let mut system = base.clone();
            system.push(LinearConstraint::new(coeffs, k.clone()).negated());
            if feasible_point(&system, ms.rank(), ms.group_rank()).is_some() {
                return false;
            }
        }
        true
    }

    pub fn set_eq(&self, ms: &ModelSpace, other: &ConvexSet) -> bool {
        self.subset_of(ms, other) && other.subset_of(ms, self)
    }

    /// Whether the set is all of 𝔸.
    pub fn is_whole(&self, ms: &ModelSpace) -> bool {
        ConvexSet::whole().subset_of(ms, self)
    }

    /// Image under an affine map: {m(x) : x ∈ self}, again a convex set.
    pub fn image(&self, ms: &ModelSpace, m: &AffineMap) -> ConvexSet {
        let constraints = self
            .constraints
            .iter()
            .map(|h| {
                let root = ms.roots().apply_to_root(m.weyl, h.root);
                let offset = match &h.offset {
                    Offset::NegInf => Offset::NegInf,
                    Offset::Finite(k) => {
                        Offset::Finite(&k.clone() + &ms.pairing(&m.translation, root))
                    }
                };
                HalfApartment { root, offset }
            })
            .collect();
        ConvexSet { constraints }
    }

    /// Preimage under an affine map: {x : m(x) ∈ self}.
    pub fn preimage(&self, ms: &ModelSpace, m: &AffineMap) -> ConvexSet {
        let inv = ms.roots().inverse_of(m.weyl);
        let constraints = self
            .constraints
            .iter()
            .map(|h| {
                let root = ms.roots().apply_to_root(inv, h.root);
                let offset = match &h.offset {
                    Offset::NegInf => Offset::NegInf,
                    Offset::Finite(k) => {
                        Offset::Finite(&k.clone() - &ms.pairing(&m.translation, h.root))
                    }
                };
                HalfApartment { root, offset }
            })
            .collect();
        ConvexSet { constraints }
    }
}

/// Λ-convex hull: for every root β, keep ⟨x, β∨⟩ ≥ min over the inputs.
pub fn convex_hull(ms: &ModelSpace, points: &[Point]) -> Result<ConvexSet, ModelError> {
    if points.is_empty() {
        return Err(ModelError::EmptyInput);
    }
    let mut constraints = Vec::new();
    for idx in 0..ms.roots().roots().len() {
        let min = points
            .iter()
            .map(|p| ms.pairing(p, idx))
            .min_by(|a, b| a.partial_cmp(b).expect("equal ranks"))
            .expect("nonempty list");
        constraints.push(HalfApartment::new(idx, min));
    }
    Ok(ConvexSet { constraints })
}

/// The direction of a Weyl simplex: a spherical Weyl element together with
/// the set of fundamental walls retained as inequalities. Two directions are
/// the same simplex type iff their rational cones agree; the cone's
/// normalized generator set is the canonical form used for comparison.
#[derive(Clone)]
pub struct Direction {
    pub weyl: usize,
    pub face: BTreeSet<usize>,
    canon: Vec<Vec<BigRational>>,
}

impl PartialEq for Direction {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}
impl Eq for Direction {}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction(w={}, face={:?})", self.weyl, self.face)
    }
}

fn normalize_ray(mut v: Vec<BigRational>) -> Vec<BigRational> {
    if let Some(first) = v.iter().find(|c| !c.is_zero()) {
        let scale = first.abs();
        for c in &mut v {
            *c = &*c / &scale;
        }
    }
    v
}

impl Direction {
    /// `face` holds 0-based simple-root indices kept as inequalities.
    pub fn new(ms: &ModelSpace, weyl: usize, face: BTreeSet<usize>) -> Self {
        let mut canon: Vec<Vec<BigRational>> = face
            .iter()
            .map(|&i| {
                let omega = ms.roots().fundamental_weight(i).to_vec();
                normalize_ray(ms.roots().weyl(weyl).matrix.mul_vec(&omega))
            })
            .collect();
        canon.sort();
        Direction { weyl, face, canon }
    }

    /// Full chamber direction.
    pub fn chamber(ms: &ModelSpace, weyl: usize) -> Self {
        Direction::new(ms, weyl, (0..ms.rank()).collect())
    }

    pub fn dim(&self) -> usize {
        self.face.len()
    }

    /// Unnormalized cone generators w̄·ωᵢ for i in the face.
    pub fn generators(&self, ms: &ModelSpace) -> Vec<Vec<BigRational>> {
        self.face
            .iter()
            .map(|&i| {
                ms.roots()
                    .weyl(self.weyl)
                    .matrix
                    .mul_vec(ms.roots().fundamental_weight(i))
            })
            .collect()
    }

    /// Image of the direction under the linear part of a Weyl element.
    pub fn mapped(&self, ms: &ModelSpace, weyl: usize) -> Direction {
        Direction::new(
            ms,
            ms.roots().compose(weyl, self.weyl),
            self.face.clone(),
        )
    }

    /// The direction of the opposite cone −C, found among Weyl directions.
    pub fn opposite(&self, ms: &ModelSpace) -> Direction {
        let mut target: Vec<Vec<BigRational>> = self
            .generators(ms)
            .into_iter()
            .map(|g| normalize_ray(g.into_iter().map(|c| -c).collect()))
            .collect();
        target.sort();
        let dim = self.dim();
        for w in 0..ms.roots().weyl_group().len() {
            for face in subsets_of_size(ms.rank(), dim) {
                let cand = Direction::new(ms, w, face);
                if cand.canon == target {
                    return cand;
                }
            }
        }
        unreachable!("the opposite of a Weyl cone is a Weyl cone");
    }

    /// Minimal-length representative (w̄, face) of this cone in enumeration
    /// order, for deterministic reporting.
    pub fn canonical(&self, ms: &ModelSpace) -> (usize, BTreeSet<usize>) {
        if self.dim() == ms.rank() {
            // chambers: sW acts simply transitively, self is already canonical
            return (self.weyl, self.face.clone());
        }
        let dim = self.dim();
        for w in 0..ms.roots().weyl_group().len() {
            for face in subsets_of_size(ms.rank(), dim) {
                let cand = Direction::new(ms, w, face);
                if cand.canon == self.canon {
                    return (w, cand.face);
                }
            }
        }
        unreachable!("a direction matches itself");
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if current.len() == k {
            out.push(current.iter().copied().collect());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// A Weyl simplex: base point plus direction; denotes base + w̄·(face of Cf).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylSimplex {
    pub base: Point,
    pub direction: Direction,
}

impl WeylSimplex {
    pub fn new(base: Point, direction: Direction) -> Self {
        WeylSimplex { base, direction }
    }

    /// The simplex as a constraint set: walls in the face stay inequalities,
    /// the others become equalities (a pair of opposite half-apartments).
    pub fn to_convex(&self, ms: &ModelSpace) -> ConvexSet {
        let mut constraints = Vec::new();
        let w = self.direction.weyl;
        for i in 0..ms.rank() {
            let mut e = vec![0i64; ms.rank()];
            e[i] = 1;
            let alpha = ms.roots().root_index(&e).expect("simple root");
            let beta = ms.roots().apply_to_root(w, alpha);
            let offset = ms.pairing(&self.base, beta);
            constraints.push(HalfApartment::new(beta, offset.clone()));
            if !self.direction.face.contains(&i) {
                // equality: add the reverse inequality through the negative root
                let neg: Vec<i64> = ms.roots().roots()[beta].coords.iter().map(|c| -c).collect();
                let neg_idx = ms.roots().root_index(&neg).expect("negative of a root");
                constraints.push(HalfApartment::new(neg_idx, -&offset));
            }
        }
        ConvexSet { constraints }
    }

    pub fn contains(&self, ms: &ModelSpace, p: &Point) -> bool {
        self.to_convex(ms).contains(ms, p)
    }
}

/// The germ of a Weyl simplex at its base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    pub base: Point,
    pub direction: Direction,
}

impl Germ {
    pub fn new(base: Point, direction: Direction) -> Self {
        Germ { base, direction }
    }

    pub fn simplex(&self) -> WeylSimplex {
        WeylSimplex {
            base: self.base.clone(),
            direction: self.direction.clone(),
        }
    }
}

/// Whether the germ lies in K: every constraint must hold at the base with
/// strict margin, or hold with equality while all cone generators of the
/// germ's direction pair nonnegatively with the constraint root. This is the
/// exact form of the ε-ball criterion; no ε is ever materialized.
pub fn germ_in_convex(ms: &ModelSpace, germ: &Germ, k: &ConvexSet) -> Result<bool, ModelError> {
    if !k.contains(ms, &germ.base) {
        return Err(ModelError::BaseOutsideSet);
    }
    let generators = germ.direction.generators(ms);
    for h in &k.constraints {
        let Offset::Finite(offset) = &h.offset else {
            continue;
        };
        let value = ms.pairing(&germ.base, h.root);
        if value > *offset {
            continue;
        }
        // equality case: the cone must not leave the half-apartment
        for g in &generators {
            if ms.roots().pairing_rational(g, h.root).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether K's recession cone admits the full chamber of direction w̄:
/// every finite constraint root must be positive after w̄⁻¹.
pub fn direction_in_recession(ms: &ModelSpace, weyl: usize, k: &ConvexSet) -> bool {
    k.constraints.iter().all(|h| match h.offset {
        Offset::NegInf => true,
        Offset::Finite(_) => ms.roots().is_positive_after(weyl, h.root),
    })
}

/// Whether two simplices are parallel: same dimension and identical
/// direction cone (w̄ compared up to the face stabilizer via canonical form).
pub fn parallel(s1: &WeylSimplex, s2: &WeylSimplex) -> Result<bool, ModelError> {
    if s1.direction.dim() != s2.direction.dim() {
        return Err(ModelError::TypeMismatch(
            s1.direction.dim(),
            s2.direction.dim(),
        ));
    }
    Ok(s1.direction == s2.direction)
}

/// For x ∉ K, finds y ∈ K and a Weyl simplex S based at y containing x with
/// S ∩ K = {y}.
///
/// Follows the constructive argument behind the exit-simplex lemma: take a
/// minimal-dimension Weyl simplex T based at x that meets K, then walk the
/// witness point within T ∩ K along admissible one-dimensional germ
/// directions of the opposite cone until none remains. Each step strictly
/// shrinks the admissible set, so at most dim(T) moves happen. The
/// postcondition S ∩ K = {y} is re-verified by exact emptiness checks.
pub fn exit_simplex(
    ms: &ModelSpace,
    k: &ConvexSet,
    x: &Point,
) -> Result<(Point, WeylSimplex), ModelError> {
    if k.contains(ms, x) {
        return Err(ModelError::PointInsideSet);
    }
    if k.is_empty(ms) {
        return Err(ModelError::EmptySet);
    }

    // minimal-dimension simplex based at x meeting K
    let mut found: Option<(Direction, ConvexSet, Point)> = None;
    'outer: for dim in 1..=ms.rank() {
        let mut seen = Vec::new();
        for w in 0..ms.roots().weyl_group().len() {
            for face in subsets_of_size(ms.rank(), dim) {
                let dir = Direction::new(ms, w, face);
                if seen.contains(&dir) {
                    continue;
                }
                let simplex = WeylSimplex::new(x.clone(), dir.clone());
                let cut = simplex.to_convex(ms).intersect(k);
                if let Some(p) = cut.witness(ms) {
                    found = Some((dir.clone(), cut, p));
                    break 'outer;
                }
                seen.push(dir);
            }
        }
    }
    let (dir, cut, mut current) = found.ok_or_else(|| {
        ModelError::Internal("no Weyl simplex based at x meets the nonempty set K".into())
    })?;

    // walk within T ∩ K: as long as some 1-dimensional germ of the opposite
    // cone at `current` stays inside, move to the far end of that segment
    let generators = dir.generators(ms);
    let gen_list: Vec<(usize, Vec<BigRational>)> =
        dir.face.iter().copied().zip(generators).collect();
    let mut steps = 0usize;
    loop {
        if steps > ms.rank() + 1 {
            return Err(ModelError::Internal(
                "exit simplex walk failed to terminate".into(),
            ));
        }
        steps += 1;

        // active constraints of T ∩ K at `current`
        let mut admissible: Option<&Vec<BigRational>> = None;
        'gens: for (_, g) in &gen_list {
            for h in &cut.constraints {
                let Offset::Finite(offset) = &h.offset else {
                    continue;
                };
                if ms.pairing(&current, h.root) == *offset
                    && ms.roots().pairing_rational(g, h.root).is_positive()
                {
                    continue 'gens;
                }
            }
            admissible = Some(g);
            break;
        }
        let Some(g) = admissible else {
            break;
        };

        // largest t with current − t·g still in T ∩ K
        let mut best: Option<GroupValue> = None;
        for h in &cut.constraints {
            let Offset::Finite(offset) = &h.offset else {
                continue;
            };
            let slope = ms.roots().pairing_rational(g, h.root);
            if slope.is_positive() {
                let margin = &ms.pairing(&current, h.root) - offset;
                let bound = margin.scale(&(BigRational::from_integer(1.into()) / slope));
                if best.as_ref().map_or(true, |b| bound < *b) {
                    best = Some(bound);
                }
            }
        }
        let t = best.ok_or_else(|| {
            ModelError::Internal("germ ray is unbounded inside T ∩ K".into())
        })?;
        let neg: Vec<BigRational> = g.iter().map(|c| -c).collect();
        current = current.translate_rational(&neg, &t);
    }

    let y = current;
    let simplex = WeylSimplex::new(y.clone(), dir.opposite(ms));

    // verify S ∩ K = {y} exactly
    debug_assert!(simplex.contains(ms, x), "exit simplex contains x");
    if !punctured_intersection_empty(ms, &simplex, k, &y) {
        return Err(ModelError::Internal(
            "exit simplex intersects K beyond its base".into(),
        ));
    }
    Ok((y, simplex))
}

/// Exact check that S ∩ K contains no point other than y: the simple-root
/// pairings separate points, so it is enough that the system
/// S ∩ K ∩ {⟨·, αᵢ∨⟩ ≷ ⟨y, αᵢ∨⟩} is infeasible for every i and both signs.
pub fn punctured_intersection_empty(
    ms: &ModelSpace,
    s: &WeylSimplex,
    k: &ConvexSet,
    y: &Point,
) -> bool {
    let base = s.to_convex(ms).intersect(k).compile(ms);
    for i in 0..ms.rank() {
        let mut e = vec![0i64; ms.rank()];
        e[i] = 1;
        let alpha = ms.roots().root_index(&e).expect("simple root");
        let coeffs: Vec<BigRational> = ms.roots().roots()[alpha]
            .pairing
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let value = ms.pairing(y, alpha);
        for sign in [1i64, -1] {
            let mut system = base.clone();
            let signed: Vec<BigRational> = coeffs
                .iter()
                .map(|c| c * BigRational::from_integer(sign.into()))
                .collect();
            let rhs = if sign == 1 { value.clone() } else { -&value };
            system.push(LinearConstraint::strict(signed, rhs));
            if feasible_point(&system, ms.rank(), ms.group_rank()).is_some() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootType;

    fn space(label: RootType, rank: usize, group_rank: usize) -> ModelSpace {
        ModelSpace::new(Arc::new(RootSystem::build(label, rank).unwrap()), group_rank)
    }

    fn pt(ms: &ModelSpace, coords: &[&[i64]]) -> Point {
        let _ = ms;
        Point::new(coords.iter().map(|c| GroupValue::from_ints(c)).collect())
    }

    #[test]
    fn a1_distance_doubles() {
        let ms = space(RootType::A, 1, 1);
        let x = pt(&ms, &[&[0]]);
        let y = pt(&ms, &[&[3]]);
        assert_eq!(ms.distance(&x, &y), GroupValue::from_ints(&[6]));
        assert_eq!(ms.distance(&y, &y), GroupValue::from_ints(&[0]));
    }

    #[test]
    fn a2_distance_anchor() {
        let ms = space(RootType::A, 2, 1);
        let origin = ms.origin();
        let alpha1 = pt(&ms, &[&[1], &[0]]);
        assert_eq!(ms.distance(&origin, &alpha1), GroupValue::from_ints(&[4]));
    }

    #[test]
    fn affine_reflection_with_lex_offset() {
        // reflection about ⟨x, α∨⟩ = (1,0): x ↦ r_α·x + (1,0)α sends 0 to (1,0)α
        let ms = space(RootType::A, 1, 2);
        let r = ms.roots().weyl_from_word(&[1]).unwrap();
        let m = AffineMap {
            weyl: r,
            translation: pt(&ms, &[&[1, 0]]),
        };
        let image = m.apply(&ms, &ms.origin());
        assert_eq!(image, pt(&ms, &[&[1, 0]]));
        // the hyperplane point (1/2, 0)α is fixed
        let half = Point::new(vec![GroupValue::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::zero(),
        ])]);
        assert_eq!(m.apply(&ms, &half), half);
    }

    #[test]
    fn distance_is_weyl_invariant_on_samples() {
        let ms = space(RootType::A, 2, 2);
        let x = pt(&ms, &[&[1, -2], &[0, 3]]);
        let y = pt(&ms, &[&[-1, 5], &[2, 2]]);
        let d = ms.distance(&x, &y);
        for w in 0..ms.roots().weyl_group().len() {
            let m = AffineMap {
                weyl: w,
                translation: pt(&ms, &[&[3, 1], &[-2, 7]]),
            };
            assert_eq!(ms.distance(&m.apply(&ms, &x), &m.apply(&ms, &y)), d);
        }
    }

    #[test]
    fn emptiness_examples() {
        let ms = space(RootType::A, 1, 1);
        let alpha = ms.roots().root_index(&[1]).unwrap();
        let neg = ms.roots().root_index(&[-1]).unwrap();
        let k = ConvexSet::new(vec![
            HalfApartment::new(alpha, GroupValue::from_ints(&[0])),
            HalfApartment::new(alpha, GroupValue::from_ints(&[-1])),
        ]);
        let w = k.witness(&ms).unwrap();
        assert!(k.contains(&ms, &w));

        // ⟨x, α∨⟩ ≥ 1 together with ⟨x, α∨⟩ ≤ −1
        let empty = ConvexSet::new(vec![
            HalfApartment::new(alpha, GroupValue::from_ints(&[1])),
            HalfApartment::new(neg, GroupValue::from_ints(&[1])),
        ]);
        assert!(empty.is_empty(&ms));
    }

    #[test]
    fn hull_examples() {
        let ms = space(RootType::A, 1, 1);
        let origin = ms.origin();
        let two = pt(&ms, &[&[2]]);
        let three = pt(&ms, &[&[3]]);
        let hull = convex_hull(&ms, &[origin.clone(), two.clone()]).unwrap();
        assert!(hull.contains(&ms, &origin));
        assert!(hull.contains(&ms, &two));
        assert!(hull.contains(&ms, &pt(&ms, &[&[1]])));
        assert!(!hull.contains(&ms, &three));

        let single = convex_hull(&ms, &[two.clone()]).unwrap();
        assert!(single.contains(&ms, &two));
        assert!(!single.contains(&ms, &origin));

        let ms2 = space(RootType::A, 2, 1);
        let a1 = pt(&ms2, &[&[1], &[0]]);
        let hull2 = convex_hull(&ms2, &[ms2.origin(), a1.clone()]).unwrap();
        let mid = a1.scale(&BigRational::new(1.into(), 2.into()));
        assert!(hull2.contains(&ms2, &mid));
        assert!(convex_hull(&ms, &[]).is_err());
    }

    #[test]
    fn hull_is_stable_under_adding_members() {
        let ms = space(RootType::A, 2, 2);
        let pts = vec![
            ms.origin(),
            pt(&ms, &[&[2, 0], &[0, 1]]),
            pt(&ms, &[&[1, 1], &[1, 0]]),
        ];
        let hull = convex_hull(&ms, &pts).unwrap();
        let mid = pts[1].scale(&BigRational::new(1.into(), 2.into()));
        assert!(hull.contains(&ms, &mid));
        let mut more = pts.clone();
        more.push(mid);
        let hull2 = convex_hull(&ms, &more).unwrap();
        assert_eq!(hull, hull2);
    }

    #[test]
    fn germ_membership_examples() {
        let ms = space(RootType::A, 1, 1);
        let alpha = ms.roots().root_index(&[1]).unwrap();
        let whole = ConvexSet::whole();
        let plus = Germ::new(ms.origin(), Direction::chamber(&ms, 0));
        let r = ms.roots().weyl_from_word(&[1]).unwrap();
        let minus = Germ::new(ms.origin(), Direction::chamber(&ms, r));
        assert!(germ_in_convex(&ms, &plus, &whole).unwrap());
        assert!(germ_in_convex(&ms, &minus, &whole).unwrap());

        let k = ConvexSet::new(vec![HalfApartment::new(alpha, GroupValue::from_ints(&[0]))]);
        assert!(germ_in_convex(&ms, &plus, &k).unwrap());
        assert!(!germ_in_convex(&ms, &minus, &k).unwrap());

        let outside = Germ::new(pt(&ms, &[&[-1]]), Direction::chamber(&ms, 0));
        assert_eq!(
            germ_in_convex(&ms, &outside, &k),
            Err(ModelError::BaseOutsideSet)
        );
    }

    #[test]
    fn a2_chamber_germ_on_wall() {
        // K = {⟨x, α₁∨⟩ ≥ 0}, chamber germ at 0 with w̄ = r_{α₂} stays inside
        let ms = space(RootType::A, 2, 1);
        let a1 = ms.roots().root_index(&[1, 0]).unwrap();
        let k = ConvexSet::new(vec![HalfApartment::new(a1, GroupValue::from_ints(&[0]))]);
        let r2 = ms.roots().weyl_from_word(&[2]).unwrap();
        let germ = Germ::new(ms.origin(), Direction::chamber(&ms, r2));
        assert!(germ_in_convex(&ms, &germ, &k).unwrap());
        // while the opposite chamber leaves immediately
        let r1 = ms.roots().weyl_from_word(&[1]).unwrap();
        let germ2 = Germ::new(ms.origin(), Direction::chamber(&ms, r1));
        assert!(!germ_in_convex(&ms, &germ2, &k).unwrap());
    }

    #[test]
    fn recession_examples() {
        let ms = space(RootType::A, 1, 1);
        let alpha = ms.roots().root_index(&[1]).unwrap();
        let whole = ConvexSet::whole();
        let k = ConvexSet::new(vec![HalfApartment::new(alpha, GroupValue::from_ints(&[0]))]);
        let r = ms.roots().weyl_from_word(&[1]).unwrap();
        assert!(direction_in_recession(&ms, 0, &whole));
        assert!(direction_in_recession(&ms, r, &whole));
        assert!(direction_in_recession(&ms, 0, &k));
        assert!(!direction_in_recession(&ms, r, &k));

        let ms2 = space(RootType::A, 2, 1);
        let a1 = ms2.roots().root_index(&[1, 0]).unwrap();
        let k2 = ConvexSet::new(vec![HalfApartment::new(a1, GroupValue::from_ints(&[0]))]);
        let passing = (0..ms2.roots().weyl_group().len())
            .filter(|&w| direction_in_recession(&ms2, w, &k2))
            .count();
        assert_eq!(passing, 3);
    }

    #[test]
    fn recession_distributes_over_intersection() {
        let ms = space(RootType::A, 2, 1);
        let a1 = ms.roots().root_index(&[1, 0]).unwrap();
        let a2 = ms.roots().root_index(&[0, 1]).unwrap();
        let k1 = ConvexSet::new(vec![HalfApartment::new(a1, GroupValue::from_ints(&[0]))]);
        let k2 = ConvexSet::new(vec![HalfApartment::new(a2, GroupValue::from_ints(&[-3]))]);
        let both = k1.intersect(&k2);
        for w in 0..ms.roots().weyl_group().len() {
            assert_eq!(
                direction_in_recession(&ms, w, &both),
                direction_in_recession(&ms, w, &k1) && direction_in_recession(&ms, w, &k2)
            );
        }
    }

    #[test]
    fn parallel_examples() {
        let ms = space(RootType::A, 1, 1);
        let r = ms.roots().weyl_from_word(&[1]).unwrap();
        let ray_plus = WeylSimplex::new(ms.origin(), Direction::chamber(&ms, 0));
        let translated = WeylSimplex::new(pt(&ms, &[&[5]]), Direction::chamber(&ms, 0));
        let ray_minus = WeylSimplex::new(ms.origin(), Direction::chamber(&ms, r));
        assert!(parallel(&ray_plus, &translated).unwrap());
        assert!(!parallel(&ray_plus, &ray_minus).unwrap());

        let ms2 = space(RootType::A, 2, 1);
        let r1 = ms2.roots().weyl_from_word(&[1]).unwrap();
        let c_id = WeylSimplex::new(ms2.origin(), Direction::chamber(&ms2, 0));
        let c_r1 = WeylSimplex::new(ms2.origin(), Direction::chamber(&ms2, r1));
        assert!(!parallel(&c_id, &c_r1).unwrap());

        let point = WeylSimplex::new(ms2.origin(), Direction::new(&ms2, 0, BTreeSet::new()));
        assert!(parallel(&c_id, &point).is_err());
    }

    #[test]
    fn exit_simplex_a1() {
        // K = {⟨x, α∨⟩ ≤ 0}, x = α: exit at y = 0 along the +α ray
        let ms = space(RootType::A, 1, 1);
        let neg = ms.roots().root_index(&[-1]).unwrap();
        let k = ConvexSet::new(vec![HalfApartment::new(neg, GroupValue::from_ints(&[0]))]);
        let x = pt(&ms, &[&[1]]);
        let (y, s) = exit_simplex(&ms, &k, &x).unwrap();
        assert_eq!(y, ms.origin());
        assert!(s.contains(&ms, &x));
        assert_eq!(s.direction, Direction::chamber(&ms, 0));
        assert_eq!(exit_simplex(&ms, &k, &ms.origin()), Err(ModelError::PointInsideSet));
    }

    #[test]
    fn exit_simplex_a2_point_target() {
        let ms = space(RootType::A, 2, 1);
        let k = convex_hull(&ms, &[ms.origin()]).unwrap();
        let x = pt(&ms, &[&[1], &[0]]);
        let (y, s) = exit_simplex(&ms, &k, &x).unwrap();
        assert_eq!(y, ms.origin());
        assert!(s.contains(&ms, &x));
        assert!(punctured_intersection_empty(&ms, &s, &k, &y));
    }

    #[test]
    fn exit_simplex_a2_half_apartment() {
        let ms = space(RootType::A, 2, 1);
        let neg1 = ms.roots().root_index(&[-1, 0]).unwrap();
        let k = ConvexSet::new(vec![HalfApartment::new(neg1, GroupValue::from_ints(&[0]))]);
        let x = pt(&ms, &[&[1], &[0]]);
        let (y, s) = exit_simplex(&ms, &k, &x).unwrap();
        assert!(k.contains(&ms, &y));
        assert!(s.contains(&ms, &x));
        assert!(punctured_intersection_empty(&ms, &s, &k, &y));
    }

    #[test]
    fn convex_image_and_preimage_agree() {
        let ms = space(RootType::A, 2, 2);
        let a1 = ms.roots().root_index(&[1, 0]).unwrap();
        let k = ConvexSet::new(vec![HalfApartment::new(a1, GroupValue::from_ints(&[1, -2]))]);
        let m = AffineMap {
            weyl: ms.roots().weyl_from_word(&[1, 2]).unwrap(),
            translation: pt(&ms, &[&[2, 0], &[0, 5]]),
        };
        let image = k.image(&ms, &m);
        let back = image.preimage(&ms, &m);
        assert!(back.set_eq(&ms, &k));
        // image membership matches pointwise
        for coords in [[0i64, 0], [3, 1], [-1, 4]] {
            let p = pt(&ms, &[&[coords[0], 0], &[coords[1], 0]]);
            assert_eq!(k.contains(&ms, &p), image.contains(&ms, &m.apply(&ms, &p)));
        }
    }
}
