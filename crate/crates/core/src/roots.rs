//! Crystallographic root systems and their finite spherical Weyl groups.
//!
//! Everything is computed in simple-root coordinates: a root is an integer
//! vector over the basis B = (α₁, …, αₙ), a Weyl element is an exact rational
//! matrix acting on those coordinates, and the coroot pairing ⟨x, β∨⟩ of an
//! arbitrary point against an arbitrary root reduces to an integer vector of
//! Cartan pairings per root. Restricting to the crystallographic types
//! A, B, C, D and G₂ keeps every scalar in ℚ.
//!
//! Positive roots and the Weyl group are both enumerated by breadth-first
//! closure over the simple reflections
//! rᵢ: αⱼ ↦ αⱼ − ⟨αⱼ, αᵢ∨⟩ αᵢ,
//! which at the supported ranks (≤ 4) is a few hundred matrices at most.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unsupported root system {0}")]
    UnsupportedType(String),
    #[error("vector {0:?} is not a root of this system")]
    UnknownRoot(Vec<i64>),
}

/// Dynkin type label of the supported crystallographic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    G2,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootType::A => write!(f, "A"),
            RootType::B => write!(f, "B"),
            RootType::C => write!(f, "C"),
            RootType::D => write!(f, "D"),
            RootType::G2 => write!(f, "G2"),
        }
    }
}

/// Dense square matrix over exact rationals, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub n: usize,
    entries: Vec<BigRational>,
}

impl Mat {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        Mat { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let entries = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(entries.len(), n * n);
        Mat { n, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let term = a * rhs.at(k, j);
                    entries[i * n + j] += term;
                }
            }
        }
        Mat { n, entries }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<BigRational> {
        let rv: Vec<BigRational> = v
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        self.mul_vec(&rv)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// One root: its simple-root coordinates, the expansion of its coroot over
/// the simple coroots, and the precomputed pairing vector
/// `pairing[j] = ⟨αⱼ, β∨⟩` used to evaluate ⟨x, β∨⟩ on arbitrary points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub coords: Vec<i64>,
    pub coroot: Vec<i64>,
    pub pairing: Vec<i64>,
    pub positive: bool,
}

/// An element of the spherical Weyl group: an exact matrix in simple-root
/// coordinates together with a reduced word over the simple reflections
/// (1-based generator indices) recording how it was reached.
#[derive(Clone)]
pub struct WeylElement {
    pub index: usize,
    pub matrix: Mat,
    pub inverse: Mat,
    pub word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}
impl Eq for WeylElement {}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.word)
    }
}

/// A crystallographic root system with its Weyl group fully enumerated.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub label: RootType,
    pub rank: usize,
    /// cartan[i][j] = ⟨αᵢ, αⱼ∨⟩
    pub cartan: Vec<Vec<i64>>,
    roots: Vec<Root>,
    root_lookup: HashMap<Vec<i64>, usize>,
    weyl: Vec<WeylElement>,
    /// Generators ωᵢ of the fundamental chamber: ⟨ωᵢ, αⱼ∨⟩ = δᵢⱼ.
    fundamental_cone: Vec<Vec<BigRational>>,
}

fn cartan_matrix(label: RootType, rank: usize) -> Result<Vec<Vec<i64>>, RootSystemError> {
    let unsupported = || RootSystemError::UnsupportedType(format!("{label}{rank}"));
    let chain = |n: usize| {
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            c[i][i] = 2;
            if i + 1 < n {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        c
    };
    // Ranks above 4 add nothing the geometry here needs; keep the
    // enumerations tiny and reject them.
    match label {
        RootType::A => {
            if rank < 1 || rank > 4 {
                return Err(unsupported());
            }
            Ok(chain(rank))
        }
        RootType::B => {
            if rank < 2 || rank > 4 {
                return Err(unsupported());
            }
            // α_rank is the short root: ⟨α_{n-1}, α_n∨⟩ = -2.
            let mut c = chain(rank);
            c[rank - 2][rank - 1] = -2;
            Ok(c)
        }
        RootType::C => {
            if rank < 2 || rank > 4 {
                return Err(unsupported());
            }
            // α_rank is the long root: ⟨α_n, α_{n-1}∨⟩ = -2.
            let mut c = chain(rank);
            c[rank - 1][rank - 2] = -2;
            Ok(c)
        }
        RootType::D => {
            if rank < 3 || rank > 4 {
                return Err(unsupported());
            }
            let mut c = chain(rank);
            // fork: α_rank attaches to α_{rank-2} instead of α_{rank-1}
            c[rank - 1][rank - 2] = 0;
            c[rank - 2][rank - 1] = 0;
            c[rank - 1][rank - 3] = -1;
            c[rank - 3][rank - 1] = -1;
            Ok(c)
        }
        RootType::G2 => {
            if rank != 2 {
                return Err(unsupported());
            }
            // α₁ long, α₂ short
            Ok(vec![vec![2, -3], vec![-1, 2]])
        }
    }
}

impl RootSystem {
    /// Builds the root system of the given type and rank: positive roots,
    /// coroot expansions, pairing table and the full Weyl group.
    pub fn build(label: RootType, rank: usize) -> Result<Self, RootSystemError> {
        let cartan = cartan_matrix(label, rank)?;

        // Closure of the simple roots under the simple reflections. Each
        // item tracks (root coords, coroot coords); both transform by the
        // same reflection recursion.
        let mut roots: Vec<Root> = Vec::new();
        let mut lookup: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for i in 0..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            queue.push((e.clone(), e));
        }
        while let Some((coords, coroot)) = queue.pop() {
            if lookup.contains_key(&coords) {
                continue;
            }
            let positive = coords.iter().all(|&c| c >= 0);
            let pairing: Vec<i64> = (0..rank)
                .map(|j| (0..rank).map(|m| coroot[m] * cartan[j][m]).sum())
                .collect();
            lookup.insert(coords.clone(), roots.len());
            roots.push(Root {
                coords: coords.clone(),
                coroot: coroot.clone(),
                pairing,
                positive,
            });
            for i in 0..rank {
                // r_i(β) = β - ⟨β, α_i∨⟩ α_i ; r_i(β∨) = β∨ - ⟨α_i, β∨⟩ α_i∨
                let pair_root: i64 = (0..rank).map(|j| coords[j] * cartan[j][i]).sum();
                let pair_coroot: i64 = (0..rank).map(|m| coroot[m] * cartan[i][m]).sum();
                let mut rc = coords.clone();
                rc[i] -= pair_root;
                let mut rcv = coroot.clone();
                rcv[i] -= pair_coroot;
                if !lookup.contains_key(&rc) {
                    queue.push((rc, rcv));
                }
            }
        }

        // stable order: positives first, then by coordinates
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by_key(|&i| (!roots[i].positive, roots[i].coords.clone()));
        let roots: Vec<Root> = order.into_iter().map(|i| roots[i].clone()).collect();
        let root_lookup: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.coords.clone(), i))
            .collect();

        // simple reflection matrices
        let generators: Vec<Mat> = (0..rank)
            .map(|i| {
                let mut rows = Vec::with_capacity(rank);
                for m in 0..rank {
                    let mut row = vec![BigRational::zero(); rank];
                    if m == i {
                        for (j, entry) in row.iter_mut().enumerate() {
                            let delta = if j == i { 1 } else { 0 };
                            *entry = BigRational::from_integer(BigInt::from(delta - cartan[j][i]));
                        }
                    } else {
                        row[m] = BigRational::one();
                    }
                    rows.push(row);
                }
                Mat::from_rows(rows)
            })
            .collect();

        // breadth-first enumeration of the Weyl group, identity first
        let mut weyl: Vec<WeylElement> = vec![WeylElement {
            index: 0,
            matrix: Mat::identity(rank),
            inverse: Mat::identity(rank),
            word: Vec::new(),
        }];
        let mut seen: HashMap<Vec<BigRational>, usize> = HashMap::new();
        seen.insert(weyl[0].matrix.entries.clone(), 0);
        let mut head = 0;
        while head < weyl.len() {
            let current = weyl[head].clone();
            for (i, g) in generators.iter().enumerate() {
                let matrix = current.matrix.mul(g);
                if seen.contains_key(&matrix.entries) {
                    continue;
                }
                let inverse = g.mul(&current.inverse);
                let mut word = current.word.clone();
                word.push(i + 1);
                seen.insert(matrix.entries.clone(), weyl.len());
                weyl.push(WeylElement {
                    index: weyl.len(),
                    matrix,
                    inverse,
                    word,
                });
            }
            head += 1;
        }

        // fundamental chamber generators: solve ⟨ω_i, α_j∨⟩ = δ_ij,
        // i.e. Σ_m (ω_i)_m cartan[m][j] = δ_ij
        let fundamental_cone = (0..rank)
            .map(|i| {
                let mut rhs = vec![BigRational::zero(); rank];
                rhs[i] = BigRational::one();
                solve_transposed(&cartan, rhs)
            })
            .collect();

        Ok(RootSystem {
            label,
            rank,
            cartan,
            roots,
            root_lookup,
            weyl,
            fundamental_cone,
        })
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.positive)
    }

    pub fn root_index(&self, coords: &[i64]) -> Result<usize, RootSystemError> {
        self.root_lookup
            .get(coords)
            .copied()
            .ok_or_else(|| RootSystemError::UnknownRoot(coords.to_vec()))
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.root_lookup.contains_key(coords)
    }

    /// All Weyl elements, identity first, in breadth-first word order.
    pub fn weyl_group(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn weyl(&self, index: usize) -> &WeylElement {
        &self.weyl[index]
    }

    pub fn identity(&self) -> &WeylElement {
        &self.weyl[0]
    }

    /// Index of the product w₁·w₂ in the enumeration.
    pub fn compose(&self, w1: usize, w2: usize) -> usize {
        let m = self.weyl[w1].matrix.mul(&self.weyl[w2].matrix);
        self.find_weyl(&m).expect("weyl group closed under product")
    }

    pub fn inverse_of(&self, w: usize) -> usize {
        self.find_weyl(&self.weyl[w].inverse)
            .expect("weyl group closed under inverse")
    }

    pub fn find_weyl(&self, matrix: &Mat) -> Option<usize> {
        self.weyl.iter().position(|w| &w.matrix == matrix)
    }

    /// Finds the element of the Weyl group given by a word over the simple
    /// reflections (1-based indices).
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<usize, RootSystemError> {
        let mut m = Mat::identity(self.rank);
        for &i in word {
            if i == 0 || i > self.rank {
                return Err(RootSystemError::UnsupportedType(format!(
                    "reflection index {i} out of range"
                )));
            }
            m = m.mul(&self.reflection_matrix(i - 1));
        }
        Ok(self.find_weyl(&m).expect("word lands in enumerated group"))
    }

    fn reflection_matrix(&self, i: usize) -> Mat {
        let rank = self.rank;
        let mut rows = Vec::with_capacity(rank);
        for m in 0..rank {
            let mut row = vec![BigRational::zero(); rank];
            if m == i {
                for (j, entry) in row.iter_mut().enumerate() {
                    let delta = if j == i { 1 } else { 0 };
                    *entry = BigRational::from_integer(BigInt::from(delta - self.cartan[j][i]));
                }
            } else {
                row[m] = BigRational::one();
            }
            rows.push(row);
        }
        Mat::from_rows(rows)
    }

    /// Image w·β of a root under a Weyl element, as a root index.
    pub fn apply_to_root(&self, w: usize, root: usize) -> usize {
        let image = self.weyl[w].matrix.mul_int_vec(&self.roots[root].coords);
        let coords: Vec<i64> = image
            .iter()
            .map(|r| {
                assert!(r.is_integer(), "weyl image of a root has integer coords");
                int_to_i64(r.to_integer())
            })
            .collect();
        self.root_index(&coords).expect("weyl image is a root")
    }

    /// Whether w⁻¹β is a positive root.
    pub fn is_positive_after(&self, w: usize, root: usize) -> bool {
        let image = self.weyl[w].inverse.mul_int_vec(&self.roots[root].coords);
        let coords: Vec<i64> = image.iter().map(|r| int_to_i64(r.to_integer())).collect();
        self.roots[self.root_index(&coords).expect("weyl image is a root")].positive
    }

    /// Rational pairing ⟨x, β∨⟩ for a point with rational coordinates.
    pub fn pairing_rational(&self, x: &[BigRational], root: usize) -> BigRational {
        self.roots[root]
            .pairing
            .iter()
            .zip(x.iter())
            .map(|(&c, v)| v * BigRational::from_integer(BigInt::from(c)))
            .sum()
    }

    /// Generator ωᵢ (i zero-based) of the fundamental chamber.
    pub fn fundamental_weight(&self, i: usize) -> &[BigRational] {
        &self.fundamental_cone[i]
    }
}

fn int_to_i64(v: BigInt) -> i64 {
    use num_traits::ToPrimitive;
    v.to_i64().expect("root coordinates fit in i64")
}

/// Solves Σ_m x_m a[m][j] = rhs_j by Gaussian elimination (exact).
fn solve_transposed(a: &[Vec<i64>], rhs: Vec<BigRational>) -> Vec<BigRational> {
    let n = rhs.len();
    // build transposed system M x = rhs with M[j][m] = a[m][j]
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|col| BigRational::from_integer(BigInt::from(a[col][j])))
                .collect()
        })
        .collect();
    let mut b = rhs;
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("cartan matrix is invertible");
        m.swap(col, pivot);
        b.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..n {
                    let t = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - t;
                }
                let t = &factor * &b[col];
                b[r] = &b[r] - t;
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_single_positive_root() {
        let rs = RootSystem::build(RootType::A, 1).unwrap();
        let pos: Vec<_> = rs.positive_roots().collect();
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].pairing, vec![2]);
        assert_eq!(rs.weyl_group().len(), 2);
    }

    #[test]
    fn a2_positive_roots_and_pairings() {
        let rs = RootSystem::build(RootType::A, 2).unwrap();
        let pos: Vec<Vec<i64>> = rs.positive_roots().map(|r| r.coords.clone()).collect();
        assert_eq!(pos, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        // ⟨α₁, α₂∨⟩ = -1
        let a2 = rs.root_index(&[0, 1]).unwrap();
        let a1 = rs.root_index(&[1, 0]).unwrap();
        let a12 = rs.root_index(&[1, 1]).unwrap();
        assert_eq!(rs.roots()[a1].pairing[1], -1);
        assert_eq!(rs.roots()[a2].pairing[0], -1);
        // ⟨α₁, (α₁+α₂)∨⟩ = 2 - 1 = 1
        assert_eq!(rs.roots()[a12].pairing[0], 1);
        assert_eq!(rs.weyl_group().len(), 6);
    }

    #[test]
    fn classical_orders_by_enumeration() {
        let cases = [
            (RootType::A, 3, 24, 6),
            (RootType::B, 2, 8, 4),
            (RootType::B, 3, 48, 9),
            (RootType::C, 3, 48, 9),
            (RootType::D, 4, 192, 12),
            (RootType::G2, 2, 12, 6),
        ];
        for (label, rank, order, npos) in cases {
            let rs = RootSystem::build(label, rank).unwrap();
            assert_eq!(rs.weyl_group().len(), order, "|W({label}{rank})|");
            assert_eq!(rs.positive_roots().count(), npos, "|R+({label}{rank})|");
            assert_eq!(rs.roots().len(), 2 * npos);
        }
    }

    #[test]
    fn weyl_matrices_permute_roots() {
        let rs = RootSystem::build(RootType::B, 2).unwrap();
        for w in 0..rs.weyl_group().len() {
            let mut images: Vec<usize> = (0..rs.roots().len())
                .map(|r| rs.apply_to_root(w, r))
                .collect();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len(), rs.roots().len());
        }
    }

    #[test]
    fn group_closure_and_inverses() {
        let rs = RootSystem::build(RootType::A, 2).unwrap();
        let n = rs.weyl_group().len();
        for i in 0..n {
            for j in 0..n {
                let _ = rs.compose(i, j); // panics if not closed
            }
            let inv = rs.inverse_of(i);
            assert_eq!(rs.compose(i, inv), 0);
        }
    }

    #[test]
    fn reflection_negates_its_root() {
        let rs = RootSystem::build(RootType::A, 1).unwrap();
        let alpha = rs.root_index(&[1]).unwrap();
        let r = rs.weyl_from_word(&[1]).unwrap();
        assert!(!rs.is_positive_after(r, alpha));
        assert!(rs.is_positive_after(0, alpha));
    }

    #[test]
    fn a2_reflection_keeps_highest_root_positive() {
        let rs = RootSystem::build(RootType::A, 2).unwrap();
        let r1 = rs.weyl_from_word(&[1]).unwrap();
        let high = rs.root_index(&[1, 1]).unwrap();
        // r₁(α₁+α₂) = α₂ ∈ R⁺
        assert!(rs.is_positive_after(r1, high));
    }

    #[test]
    fn fundamental_weights_pair_as_kronecker() {
        for (label, rank) in [(RootType::A, 2), (RootType::G2, 2), (RootType::B, 3)] {
            let rs = RootSystem::build(label, rank).unwrap();
            for i in 0..rank {
                let omega = rs.fundamental_weight(i).to_vec();
                for j in 0..rank {
                    let mut e = vec![0i64; rank];
                    e[j] = 1;
                    let idx = rs.root_index(&e).unwrap();
                    let pairing = rs.pairing_rational(&omega, idx);
                    let expected = if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    };
                    assert_eq!(pairing, expected);
                }
            }
        }
    }

    #[test]
    fn unsupported_types_rejected() {
        assert!(RootSystem::build(RootType::G2, 3).is_err());
        assert!(RootSystem::build(RootType::D, 2).is_err());
        assert!(RootSystem::build(RootType::A, 9).is_err());
    }
}
