use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::lp::{LinearSystem, Relation};
use crate::exactla::rational::{i64_to_rational_vec, rat, RatMatrix, Rational};
use crate::exactla::{smith_normal_form, IntMatrix};

/// A rational polyhedral cone given by lattice generators. `ray_indices`
/// records which rays of the ambient fan the generators are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    pub ray_indices: Vec<usize>,
    pub generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn new(ambient_dim: usize, ray_indices: Vec<usize>, generators: Vec<Vec<i64>>) -> Self {
        assert_eq!(ray_indices.len(), generators.len());
        debug_assert!(generators.iter().all(|g| g.len() == ambient_dim));
        Cone {
            ambient_dim,
            ray_indices,
            generators,
        }
    }

    /// Cone on the given generators, indexed `0..k`.
    pub fn from_generators(ambient_dim: usize, generators: Vec<Vec<i64>>) -> Self {
        let idx = (0..generators.len()).collect();
        Cone::new(ambient_dim, idx, generators)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Generators as the columns of an `ambient_dim × k` matrix.
    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_dim, &self.generators)
    }

    pub fn dim(&self) -> usize {
        self.generator_matrix().rank()
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Index of the sublattice spanned by the generators in its saturation.
    pub fn multiplicity(&self) -> Result<BigInt> {
        if !self.is_simplicial() {
            return Err(Error::MultiplicityUndefined);
        }
        Ok(smith_normal_form(&self.generator_matrix())
            .invariant_factors()
            .iter()
            .product())
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_ok_and(|m| m.is_one())
    }

    /// Sum of the generators; lies in the relative interior of a pointed cone.
    pub fn interior_witness(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.ambient_dim];
        for g in &self.generators {
            for (a, b) in w.iter_mut().zip(g) {
                *a += *b;
            }
        }
        w
    }

    fn rational_generators(&self) -> RatMatrix {
        RatMatrix::from_int(&self.generator_matrix())
    }

    /// Coefficients of `x` in the generators of a simplicial cone, or `None`
    /// when `x` is outside the linear span. Errors on non-simplicial cones.
    pub fn coefficients(&self, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if !self.is_simplicial() {
            return Err(Error::Unsupported(
                "coefficients in a non-simplicial cone are not unique".into(),
            ));
        }
        Ok(self.rational_generators().solve(x))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.iter().all(Zero::is_zero) {
            return true;
        }
        if self.generators.is_empty() {
            return false;
        }
        if self.is_simplicial() {
            return match self.rational_generators().solve(x) {
                Some(lambda) => lambda.iter().all(|l| !l.is_negative()),
                None => false,
            };
        }
        let k = self.generators.len();
        let mut sys = LinearSystem::new(k).all_nonnegative();
        for (i, xi) in x.iter().enumerate() {
            let row = self.generators.iter().map(|g| rat(g[i])).collect();
            sys.add(row, Relation::Equal, xi.clone());
        }
        sys.feasible_point().is_some()
    }

    pub fn contains_lattice_point(&self, x: &[i64]) -> bool {
        self.contains(&i64_to_rational_vec(x))
    }

    /// Whether the cone contains no line.
    pub fn is_pointed(&self) -> bool {
        if self.generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return false;
        }
        if self.is_simplicial() {
            return true;
        }
        let mut sys = LinearSystem::new(self.ambient_dim);
        for g in &self.generators {
            sys.add(i64_to_rational_vec(g), Relation::GreaterEq, rat(1));
        }
        sys.feasible_point().is_some()
    }

    /// Facets as sorted sets of ray indices. For a one-dimensional cone the
    /// only facet is the origin (empty set).
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let k = self.generators.len();
        if k == 0 {
            return Vec::new();
        }
        if self.is_simplicial() {
            return (0..k)
                .map(|skip| {
                    let mut f: Vec<usize> = (0..k)
                        .filter(|&i| i != skip)
                        .map(|i| self.ray_indices[i])
                        .collect();
                    f.sort_unstable();
                    f
                })
                .collect();
        }
        self.facets_by_enumeration()
            .into_iter()
            .map(|local| {
                let mut f: Vec<usize> = local.iter().map(|&i| self.ray_indices[i]).collect();
                f.sort_unstable();
                f
            })
            .collect()
    }

    /// Facet enumeration for non-simplicial cones: work in coordinates of
    /// the linear span, try every hyperplane through `d - 1` independent
    /// generators and keep the supporting ones.
    fn facets_by_enumeration(&self) -> Vec<Vec<usize>> {
        let coords = self.span_coordinates();
        let d = coords.first().map_or(0, Vec::len);
        let k = coords.len();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        if d == 0 {
            return Vec::new();
        }
        if d == 1 {
            // Non-simplicial one-dimensional cone: several generators on one ray.
            found.insert(Vec::new());
            return found.into_iter().collect();
        }
        for subset in combinations(k, d - 1) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| coords[i].clone()).collect();
            let m = RatMatrix::from_columns(d, &rows).transpose();
            if m.rank() != d - 1 {
                continue;
            }
            let normal = m.nullspace().remove(0);
            let values: Vec<Rational> = coords
                .iter()
                .map(|c| c.iter().zip(&normal).fold(Rational::zero(), |a, (x, y)| a + x * y))
                .collect();
            let nonneg = values.iter().all(|v| !v.is_negative());
            let nonpos = values.iter().all(|v| !v.is_positive());
            if nonneg || nonpos {
                let facet: Vec<usize> = (0..k).filter(|&i| values[i].is_zero()).collect();
                found.insert(facet);
            }
        }
        found.into_iter().collect()
    }

    /// Coordinates of each generator in a basis of the linear span chosen
    /// among the generators.
    fn span_coordinates(&self) -> Vec<Vec<Rational>> {
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for g in &self.generators {
            let mut trial = basis.clone();
            trial.push(g.clone());
            if IntMatrix::from_columns(self.ambient_dim, &trial).rank() == trial.len() {
                basis = trial;
            }
        }
        let b = RatMatrix::from_int(&IntMatrix::from_columns(self.ambient_dim, &basis));
        self.generators
            .iter()
            .map(|g| b.solve(&i64_to_rational_vec(g)).expect("generator lies in its span"))
            .collect()
    }

    /// Ray indices of the smallest face containing `x`, or `None` when `x`
    /// is outside the cone.
    pub fn minimal_face(&self, x: &[Rational]) -> Option<Vec<usize>> {
        if !self.contains(x) {
            return None;
        }
        if self.is_simplicial() {
            let lambda = self.rational_generators().solve(x)?;
            let mut face: Vec<usize> = lambda
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_positive())
                .map(|(i, _)| self.ray_indices[i])
                .collect();
            face.sort_unstable();
            return Some(face);
        }
        let mut face: BTreeSet<usize> = self.ray_indices.iter().copied().collect();
        for facet in self.facets() {
            let sub = self.subcone(&facet);
            if sub.contains(x) {
                face = face.intersection(&facet.iter().copied().collect()).copied().collect();
            }
        }
        Some(face.into_iter().collect())
    }

    /// The cone spanned by a subset of this cone's rays (given by ray index).
    pub fn subcone(&self, rays: &[usize]) -> Cone {
        let mut idx = Vec::new();
        let mut gens = Vec::new();
        for (i, g) in self.ray_indices.iter().zip(&self.generators) {
            if rays.contains(i) {
                idx.push(*i);
                gens.push(g.clone());
            }
        }
        Cone::new(self.ambient_dim, idx, gens)
    }

    /// For a full-dimensional simplicial cone, the inverse of the generator
    /// matrix: `inverse · x` gives the coefficients of `x`.
    pub fn chart(&self) -> Option<RatMatrix> {
        if self.generators.len() != self.ambient_dim {
            return None;
        }
        self.rational_generators().inverse()
    }
}

/// All `r`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn gcd_i64(v: &[i64]) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    v.iter().fold(0, |g, &x| gcd(g, x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_i64(v) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(gens: &[&[i64]]) -> Cone {
        Cone::from_generators(gens[0].len(), gens.iter().map(|g| g.to_vec()).collect())
    }

    #[test]
    fn multiplicities() {
        assert_eq!(cone(&[&[1, 0], &[0, 1]]).multiplicity().unwrap(), BigInt::from(1));
        assert_eq!(cone(&[&[1, 0], &[-1, -2]]).multiplicity().unwrap(), BigInt::from(2));
        assert_eq!(cone(&[&[0, 1], &[-1, -2]]).multiplicity().unwrap(), BigInt::from(1));
        assert_eq!(
            cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).multiplicity(),
            Err(Error::MultiplicityUndefined)
        );
        // non-full-dimensional: (1,1,0),(1,-1,0) spans a sublattice of index 2
        assert_eq!(cone(&[&[1, 1, 0], &[1, -1, 0]]).multiplicity().unwrap(), BigInt::from(2));
    }

    #[test]
    fn membership() {
        let c = cone(&[&[1, 0], &[1, 2]]);
        assert!(c.contains_lattice_point(&[1, 1]));
        assert!(c.contains_lattice_point(&[2, 2]));
        assert!(!c.contains_lattice_point(&[0, 1]));
        let square = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert!(!square.is_simplicial());
        assert!(square.contains_lattice_point(&[0, 0, 1]));
        assert!(!square.contains_lattice_point(&[2, 0, 1]));
    }

    #[test]
    fn pointedness() {
        assert!(!cone(&[&[1, 0], &[-1, 0], &[0, 1]]).is_pointed());
        assert!(cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]).is_pointed());
    }

    #[test]
    fn square_cone_facets() {
        let square = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = square.facets();
        assert_eq!(f, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert_eq!(
            square.minimal_face(&i64_to_rational_vec(&[1, 1, 2])),
            Some(vec![0, 1])
        );
        assert_eq!(
            square.minimal_face(&i64_to_rational_vec(&[0, 0, 1])),
            Some(vec![0, 1, 2, 3])
        );
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(1, 2).is_empty());
    }
}
