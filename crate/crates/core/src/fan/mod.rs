//! Fans: validation, smoothness and completeness predicates, constructions
//! and resolution of singularities.

mod cone;
pub mod construct;
pub mod resolve;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::lp::{LinearSystem, Relation};
use crate::exactla::rational::{i64_to_rational_vec, rat, RatMatrix, Rational};
use crate::exactla::IntMatrix;

pub use cone::{combinations, gcd_i64, is_primitive, Cone};
pub use construct::{
    hirzebruch_fan, product_fan, projective_space_fan, projectivized_split_bundle_fan,
    star_subdivision,
};
pub use resolve::{resolve, resolve_with_trace, ResolutionTrace};

/// Default seed for the sampled completeness cross-check.
pub const DEFAULT_SAMPLE_SEED: u64 = 0x746f_7269_6366_616e;
/// Number of random directions tested by the completeness cross-check.
pub const COMPLETENESS_SAMPLES: usize = 128;

/// A fan in `N ≅ Z^dim`: primitive ray generators and maximal cones given as
/// sets of ray indices.
///
/// Construction only checks shapes (ray lengths, index ranges); the
/// geometric invariants are checked by [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Cone index sets are sorted and deduplicated; the order of cones is kept.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::MalformedFan(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            let mut cone = cone;
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::MalformedFan(format!(
                    "cone {c} refers to ray {bad}, but there are only {} rays",
                    rays.len()
                )));
            }
            cone.sort_unstable();
            cone.dedup();
            cones.push(cone);
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, c: usize) -> Cone {
        let idx = self.max_cones[c].clone();
        let gens = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new(self.dim, idx, gens)
    }

    /// Cone spanned by an arbitrary set of ray indices.
    pub fn cone_on(&self, rays: &[usize]) -> Cone {
        let mut idx = rays.to_vec();
        idx.sort_unstable();
        let gens = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new(self.dim, idx, gens)
    }

    pub fn cones(&self) -> impl Iterator<Item = Cone> + '_ {
        (0..self.max_cones.len()).map(|c| self.cone(c))
    }

    /// `dim × #rays` matrix whose columns are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rays)
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Same fan with rays sorted lexicographically and cones sorted.
    pub fn canonical(&self) -> Fan {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut new_index = vec![0; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let mut cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut c: Vec<usize> = c.iter().map(|&i| new_index[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        Fan {
            dim: self.dim,
            rays,
            max_cones: cones,
        }
    }

    /// Equality up to the order of rays and cones.
    pub fn same_fan(&self, other: &Fan) -> bool {
        self.canonical() == other.canonical()
    }

    /// Applies a lattice map to every ray, replacing each image by the
    /// primitive vector on its ray. The map must be injective over Q.
    pub fn transformed(&self, map: &IntMatrix) -> Result<Fan> {
        if map.cols() != self.dim || map.rows() != self.dim || map.determinant() == 0.into() {
            return Err(Error::IncompatibleLattices(
                "transform must be an invertible square matrix".into(),
            ));
        }
        let mut rays = Vec::with_capacity(self.rays.len());
        for r in &self.rays {
            let img = map.apply_i64(r);
            let img = crate::exactla::matrix::to_i64_vec(&img).ok_or(Error::Overflow)?;
            let g = gcd_i64(&img);
            rays.push(img.into_iter().map(|x| x / g).collect());
        }
        Fan::new(self.dim, rays, self.max_cones.clone())
    }

    /// Maximal cones containing a given point.
    pub fn cones_containing(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.max_cones.len())
            .filter(|&c| self.cone(c).contains(x))
            .collect()
    }

    pub fn in_support(&self, x: &[Rational]) -> bool {
        (0..self.max_cones.len()).any(|c| self.cone(c).contains(x))
    }

    /// Number of maximal cones containing each ray.
    pub fn ray_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.rays.len()];
        for c in &self.max_cones {
            for &i in c {
                deg[i] += 1;
            }
        }
        deg
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones().all(|c| c.is_simplicial())
    }

    /// Every cone simplicial with multiplicity one.
    pub fn is_smooth(&self) -> bool {
        self.cones().all(|c| c.is_smooth())
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_report(DEFAULT_SAMPLE_SEED).is_complete()
    }

    /// Ridge criterion plus a sampled containment cross-check.
    pub fn completeness_report(&self, seed: u64) -> CompletenessReport {
        let ridge = self.ridge_criterion();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cones: Vec<Cone> = self.cones().collect();
        let charts: Vec<Option<RatMatrix>> = cones.iter().map(Cone::chart).collect();
        let mut uncovered = None;
        let mut sampled = 0;
        while sampled < COMPLETENESS_SAMPLES && self.dim > 0 {
            let v: Vec<i64> = (0..self.dim).map(|_| rng.gen_range(-1000..=1000)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            sampled += 1;
            let q = i64_to_rational_vec(&v);
            let covered = cones.iter().zip(&charts).any(|(c, chart)| match chart {
                Some(inv) => inv.apply(&q).iter().all(|l| *l >= rat(0)),
                None => c.contains(&q),
            });
            if !covered {
                uncovered = Some(v);
                break;
            }
        }
        CompletenessReport {
            ridge_criterion: ridge,
            sampled,
            uncovered,
        }
    }

    /// Pure full-dimensional, every ridge in exactly two maximal cones, and
    /// the ridge adjacency graph is connected.
    fn ridge_criterion(&self) -> bool {
        if self.dim == 0 {
            return !self.max_cones.is_empty();
        }
        if self.max_cones.is_empty() {
            return false;
        }
        let cones: Vec<Cone> = self.cones().collect();
        if cones.iter().any(|c| c.dim() != self.dim) {
            return false;
        }
        let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, c) in cones.iter().enumerate() {
            for f in c.facets() {
                ridges.entry(f).or_default().push(ci);
            }
        }
        let mut adjacency = vec![Vec::new(); cones.len()];
        for owners in ridges.values() {
            if owners.len() != 2 {
                return false;
            }
            adjacency[owners[0]].push(owners[1]);
            adjacency[owners[1]].push(owners[0]);
        }
        let mut seen = vec![false; cones.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &adjacency[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Ridges (codimension-one faces of maximal cones) with the maximal
    /// cones that contain them.
    pub fn walls(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for c in 0..self.max_cones.len() {
            for f in self.cone(c).facets() {
                walls.entry(f).or_default().push(c);
            }
        }
        walls
    }

    /// All cones of the fan (faces of maximal cones), as ray index sets.
    pub fn all_cones(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = self.max_cones.clone();
        while let Some(c) = frontier.pop() {
            if !out.insert(c.clone()) {
                continue;
            }
            for f in self.cone_on(&c).facets() {
                if !out.contains(&f) {
                    frontier.push(f);
                }
            }
        }
        out
    }
}

/// Outcome of the completeness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub ridge_criterion: bool,
    pub sampled: usize,
    /// A direction not covered by any maximal cone, if one was found.
    pub uncovered: Option<Vec<i64>>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.ridge_criterion && self.uncovered.is_none()
    }

    /// Whether the exact criterion and the sampling agree.
    pub fn consistent(&self) -> bool {
        !(self.ridge_criterion && self.uncovered.is_some())
    }
}

/// Free-function forms of the predicates.
pub fn is_smooth(f: &Fan) -> bool {
    f.is_smooth()
}

pub fn is_simplicial(f: &Fan) -> bool {
    f.is_simplicial()
}

pub fn is_complete(f: &Fan) -> bool {
    f.is_complete()
}

pub fn cone_multiplicity(c: &Cone) -> Result<num_bigint::BigInt> {
    c.multiplicity()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanDefect {
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    NotPointed { cone: usize },
    NotMaximal { cone: usize, contained_in: usize },
    /// The two cones meet outside a common face; `witness` is a point of
    /// the intersection outside the cone on their shared rays.
    BadIntersection {
        first: usize,
        second: usize,
        witness: Option<Vec<Rational>>,
    },
}

impl std::fmt::Display for FanDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FanDefect::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            FanDefect::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            FanDefect::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} coincide")
            }
            FanDefect::NotPointed { cone } => write!(f, "cone {cone} is not pointed"),
            FanDefect::NotMaximal { cone, contained_in } => {
                write!(f, "cone {cone} is contained in cone {contained_in}")
            }
            FanDefect::BadIntersection { first, second, .. } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub defects: Vec<FanDefect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks every fan invariant and reports all violations found.
pub fn validate_fan(f: &Fan) -> ValidationReport {
    let mut defects = Vec::new();
    for (i, r) in f.rays.iter().enumerate() {
        if r.iter().all(|&x| x == 0) {
            defects.push(FanDefect::ZeroRay { ray: i });
        } else if !is_primitive(r) {
            defects.push(FanDefect::NonPrimitiveRay { ray: i });
        }
        if let Some(j) = f.rays[..i].iter().position(|s| s == r) {
            defects.push(FanDefect::DuplicateRay { first: j, second: i });
        }
    }
    let cones: Vec<Cone> = f.cones().collect();
    let pointed: Vec<bool> = cones.iter().map(Cone::is_pointed).collect();
    for (c, &p) in pointed.iter().enumerate() {
        if !p {
            defects.push(FanDefect::NotPointed { cone: c });
        }
    }
    for a in 0..cones.len() {
        for b in 0..cones.len() {
            if a != b && is_subset(&f.max_cones[a], &f.max_cones[b]) {
                // Equal index sets are reported once.
                if f.max_cones[a] != f.max_cones[b] || a > b {
                    defects.push(FanDefect::NotMaximal {
                        cone: a,
                        contained_in: b,
                    });
                }
            }
        }
    }
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            if !(pointed[a] && pointed[b]) {
                continue;
            }
            if !meet_in_common_face(f, &f.max_cones[a], &f.max_cones[b]) {
                defects.push(FanDefect::BadIntersection {
                    first: a,
                    second: b,
                    witness: intersection_witness(f, &f.max_cones[a], &f.max_cones[b]),
                });
            }
        }
    }
    ValidationReport { defects }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i))
}

/// Two cones meet in the cone on their common rays, and that cone is a face
/// of both, iff some functional is positive on the rays only in the first,
/// negative on the rays only in the second and zero on the shared rays.
fn meet_in_common_face(f: &Fan, a: &[usize], b: &[usize]) -> bool {
    let mut sys = LinearSystem::new(f.dim);
    for &i in a {
        let row = i64_to_rational_vec(&f.rays[i]);
        if b.contains(&i) {
            sys.add(row, Relation::Equal, rat(0));
        } else {
            sys.add(row, Relation::GreaterEq, rat(1));
        }
    }
    for &j in b {
        if !a.contains(&j) {
            sys.add(i64_to_rational_vec(&f.rays[j]), Relation::LessEq, rat(-1));
        }
    }
    sys.feasible_point().is_some()
}

/// Dual certificate of a bad intersection: a point of both cones that does
/// not lie in the cone on their common rays.
fn intersection_witness(f: &Fan, a: &[usize], b: &[usize]) -> Option<Vec<Rational>> {
    let only_a: Vec<usize> = a.iter().copied().filter(|i| !b.contains(i)).collect();
    let only_b: Vec<usize> = b.iter().copied().filter(|i| !a.contains(i)).collect();
    let common: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
    let nvars = only_a.len() + only_b.len() + common.len();
    let mut sys = LinearSystem::new(nvars);
    for v in 0..only_a.len() + only_b.len() {
        sys.set_nonnegative(v);
    }
    for k in 0..f.dim {
        let mut row = Vec::with_capacity(nvars);
        row.extend(only_a.iter().map(|&i| rat(f.rays[i][k])));
        row.extend(only_b.iter().map(|&i| rat(-f.rays[i][k])));
        row.extend(common.iter().map(|&i| rat(f.rays[i][k])));
        sys.add(row, Relation::Equal, rat(0));
    }
    let mut norm = vec![rat(1); only_a.len() + only_b.len()];
    norm.extend(std::iter::repeat_n(rat(0), common.len()));
    sys.add(norm, Relation::Equal, rat(1));
    let sol = sys.feasible_point()?;
    let mut x = vec![rat(0); f.dim];
    for (t, &i) in only_a.iter().enumerate() {
        for k in 0..f.dim {
            x[k] += &sol[t] * rat(f.rays[i][k]);
        }
    }
    let offset = only_a.len() + only_b.len();
    for (t, &i) in common.iter().enumerate() {
        let nu = &sol[offset + t];
        if *nu > rat(0) {
            for k in 0..f.dim {
                x[k] += nu * rat(f.rays[i][k]);
            }
        }
    }
    Some(x)
}
