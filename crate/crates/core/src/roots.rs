//! Root data: Cartan matrices, weights in fundamental-weight coordinates,
//! the dominance order and upward-closed subsets of the weight lattice.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{HrError, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, Field, Rat};

/// An integral weight, stored as `⟨μ, α_i∨⟩` for each simple root.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Cartan data with `cartan[i][j] = ⟨α_j, α_i∨⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    type_label: String,
    cartan: Vec<Vec<i64>>,
    inverse: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RootSystemJson {
    type_label: String,
    cartan: Vec<Vec<i64>>,
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootSystemJson { type_label: self.type_label.clone(), cartan: self.cartan.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RootSystemJson::deserialize(d)?;
        RootSystem::new(&raw.type_label, raw.cartan).map_err(serde::de::Error::custom)
    }
}

impl RootSystem {
    pub fn new(type_label: &str, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 {
            return Err(HrError::InvalidCartan("rank must be positive".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                return Err(HrError::InvalidCartan("matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(HrError::InvalidCartan(format!("diagonal entry {i} is {a}")));
                }
                if i != j && a > 0 {
                    return Err(HrError::InvalidCartan(format!("positive entry at ({i},{j})")));
                }
                if i != j && (a == 0) != (cartan[j][i] == 0) {
                    return Err(HrError::InvalidCartan(format!("zero pattern broken at ({i},{j})")));
                }
            }
        }
        let m = Matrix::from_rows(cartan.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect());
        let inverse = m
            .inverse(Field::Rational)
            .ok_or_else(|| HrError::InvalidCartan("matrix is singular".into()))?;
        Ok(RootSystem { type_label: type_label.to_string(), cartan, inverse })
    }

    pub fn a1() -> Self {
        Self::new("A1", vec![vec![2]]).unwrap()
    }

    pub fn a2() -> Self {
        Self::new("A2", vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    pub fn b2() -> Self {
        Self::new("B2", vec![vec![2, -2], vec![-1, 2]]).unwrap()
    }

    pub fn g2() -> Self {
        Self::new("G2", vec![vec![2, -1], vec![-3, 2]]).unwrap()
    }

    /// Block-diagonal product of root systems.
    pub fn product(parts: &[RootSystem]) -> Self {
        let n: usize = parts.iter().map(RootSystem::rank).sum();
        let mut cartan = vec![vec![0; n]; n];
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    cartan[off + i][off + j] = p.cartan[i][j];
                }
            }
            off += p.rank();
        }
        let label: Vec<&str> = parts.iter().map(|p| p.type_label.as_str()).collect();
        Self::new(&label.join("x"), cartan).expect("product of valid Cartan matrices")
    }

    /// Parses labels such as `A2`, `B2`, `G2` or `A1xA1`.
    pub fn from_label(label: &str) -> Result<Self> {
        let parts = label
            .split(['x', 'X', '*'])
            .map(|p| match p.trim() {
                "A1" => Ok(Self::a1()),
                "A2" => Ok(Self::a2()),
                "B2" | "C2" => Ok(Self::b2()),
                "G2" => Ok(Self::g2()),
                other => Err(HrError::Format(format!("unknown root system type '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.len() == 1 {
            return Ok(parts.into_iter().next().unwrap());
        }
        Ok(Self::product(&parts))
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn type_label(&self) -> &str {
        &self.type_label
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(HrError::IndexOutOfRange { index: i, rank: self.rank() });
        }
        Ok(())
    }

    fn check_weight(&self, mu: &Weight) -> Result<()> {
        if mu.rank() != self.rank() {
            return Err(HrError::DimensionMismatch(format!(
                "weight {mu} has {} coordinates, rank is {}",
                mu.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// `⟨μ, α_i∨⟩` for a zero-based simple root index.
    pub fn pairing(&self, mu: &Weight, i: usize) -> Result<i64> {
        self.check_index(i)?;
        self.check_weight(mu)?;
        Ok(mu.0[i])
    }

    /// The simple root `α_j` in fundamental coordinates (column `j` of the Cartan matrix).
    pub fn simple_root(&self, j: usize) -> Weight {
        Weight((0..self.rank()).map(|i| self.cartan[i][j]).collect())
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// Coordinates of `μ` in the basis of simple roots.
    pub fn root_coords(&self, mu: &Weight) -> Vec<Rat> {
        let v: Vec<Rat> = mu.0.iter().map(|&x| rat(x)).collect();
        self.inverse.mul_vec(&v, Field::Rational)
    }

    /// Nonnegative integer simple-root coordinates of `μ`, if it is a sum of simple roots.
    pub fn positive_root_combination(&self, mu: &Weight) -> Option<Vec<u32>> {
        self.root_coords(mu)
            .into_iter()
            .map(|c| {
                if c.is_integer() && !c.is_negative() {
                    u32::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// `λ ≤ μ` in the dominance order.
    pub fn leq(&self, lambda: &Weight, mu: &Weight) -> bool {
        self.positive_root_combination(&(mu - lambda)).is_some()
    }

    pub fn lt(&self, lambda: &Weight, mu: &Weight) -> bool {
        lambda != mu && self.leq(lambda, mu)
    }

    /// Number of simple roots in `λ − μ`, when `μ ≤ λ`.
    pub fn height_between(&self, lambda: &Weight, mu: &Weight) -> Option<u32> {
        self.positive_root_combination(&(lambda - mu)).map(|c| c.iter().sum())
    }

    /// `s_i(μ) = μ − ⟨μ, α_i∨⟩ α_i`.
    pub fn reflect(&self, mu: &Weight, i: usize) -> Weight {
        let alpha = self.simple_root(i);
        mu - &alpha.scale(mu.0[i])
    }

    /// The dominant element of the Weyl orbit of `μ`.
    pub fn dominant_conjugate(&self, mu: &Weight) -> Weight {
        let mut w = mu.clone();
        while let Some(i) = w.0.iter().position(|&x| x < 0) {
            w = self.reflect(&w, i);
        }
        w
    }

    /// The antidominant element of the Weyl orbit of `μ`; for dominant `λ` this is `w0(λ)`.
    pub fn antidominant_conjugate(&self, mu: &Weight) -> Weight {
        let mut w = mu.clone();
        while let Some(i) = w.0.iter().position(|&x| x > 0) {
            w = self.reflect(&w, i);
        }
        w
    }

    /// Height of `λ − w0(λ)`, the depth of the lowest weight of `L(λ)` below `λ`.
    pub fn longest_depth(&self, lambda: &Weight) -> u32 {
        let low = self.antidominant_conjugate(lambda);
        self.height_between(lambda, &low).expect("lowest weight lies below λ")
    }

    pub fn upset_contains(&self, set: &UpSet, mu: &Weight) -> bool {
        set.generators.iter().any(|g| self.leq(g, mu))
    }
}

/// An upward-closed subset of the weight lattice, given by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpSet {
    pub generators: Vec<Weight>,
}

impl UpSet {
    pub fn new(generators: Vec<Weight>) -> Self {
        UpSet { generators }
    }

    pub fn empty() -> Self {
        UpSet::default()
    }

    pub fn principal(mu: Weight) -> Self {
        UpSet { generators: vec![mu] }
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        let mut generators = self.generators.clone();
        for g in &other.generators {
            if !generators.contains(g) {
                generators.push(g.clone());
            }
        }
        UpSet { generators }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| format!(">={g}")).collect();
        write!(f, "{{{}}}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight(c.to_vec())
    }

    #[test]
    fn pairing_examples() {
        let a2 = RootSystem::a2();
        assert_eq!(a2.pairing(&w(&[1, 0]), 1).unwrap(), 0);
        assert_eq!(a2.pairing(&w(&[2, -1]), 0).unwrap(), 2);
        assert_eq!(a2.pairing(&w(&[1, 1]), 0).unwrap(), 1);
        assert!(matches!(a2.pairing(&w(&[1, 1]), 2), Err(HrError::IndexOutOfRange { .. })));
        assert_eq!(a2.simple_root(0), w(&[2, -1]));
    }

    #[test]
    fn leq_examples() {
        let a1 = RootSystem::a1();
        assert!(a1.leq(&w(&[0]), &w(&[2])));
        assert!(!a1.leq(&w(&[0]), &w(&[1])));
        let a2 = RootSystem::a2();
        assert!(a2.leq(&w(&[0, 0]), &w(&[1, 1])));
        assert!(!a2.leq(&w(&[0, 1]), &w(&[1, 0])));
        assert!(!a2.leq(&w(&[1, 0]), &w(&[0, 1])));
    }

    #[test]
    fn upset_examples() {
        let a2 = RootSystem::a2();
        assert!(a2.upset_contains(&UpSet::principal(w(&[0, 0])), &w(&[1, 1])));
        assert!(!a2.upset_contains(&UpSet::empty(), &w(&[5, 5])));
        assert!(!a2.upset_contains(&UpSet::principal(w(&[1, 0])), &w(&[0, 1])));
    }

    #[test]
    fn invalid_cartan_rejected() {
        assert!(RootSystem::new("x", vec![vec![2, 1], vec![-1, 2]]).is_err());
        assert!(RootSystem::new("x", vec![vec![2, 0], vec![-1, 2]]).is_err());
        assert!(RootSystem::new("x", vec![vec![2, -2], vec![-2, 2]]).is_err());
        assert!(RootSystem::new("x", vec![]).is_err());
        assert!(RootSystem::new("x", vec![vec![3]]).is_err());
    }

    #[test]
    fn lowest_weights() {
        let a2 = RootSystem::a2();
        assert_eq!(a2.antidominant_conjugate(&w(&[2, 1])), w(&[-1, -2]));
        assert_eq!(a2.longest_depth(&w(&[1, 1])), 4);
        let b2 = RootSystem::b2();
        assert_eq!(b2.longest_depth(&w(&[1, 1])), 7);
        assert_eq!(RootSystem::a1().longest_depth(&w(&[3])), 3);
        let prod = RootSystem::from_label("A1xA1").unwrap();
        assert_eq!(prod.rank(), 2);
        assert_eq!(prod.longest_depth(&w(&[1, 1])), 2);
    }
}
