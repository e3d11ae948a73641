//! Resolution of singularities by triangulation and stellar subdivision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{star_subdivision, Cone, Fan};
use crate::exactla::rational::Rational;
use crate::exactla::smith_normal_form;

/// Per-step record of a resolution: the multiplicities of the maximal
/// cones (sorted in decreasing order) before each subdivision, the points
/// inserted, and the final fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub triangulated: Fan,
    pub multiplicities: Vec<Vec<BigInt>>,
    pub inserted: Vec<Vec<i64>>,
    pub result: Fan,
}

/// Smooth refinement of `fan` with the same support.
pub fn resolve(fan: &Fan) -> Fan {
    resolve_with_trace(fan).result
}

pub fn resolve_with_trace(fan: &Fan) -> ResolutionTrace {
    let triangulated = triangulate(fan);
    let mut current = triangulated.clone();
    let mut multiplicities = vec![multiplicity_profile(&current)];
    let mut inserted = Vec::new();
    loop {
        let worst = current
            .cones()
            .enumerate()
            .map(|(i, c)| (i, c.multiplicity().expect("triangulated fan is simplicial")))
            .filter(|(_, m)| !m.is_one())
            .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)));
        let Some((c, _)) = worst else {
            break;
        };
        let point = shallowest_interior_point(&current.cone(c));
        current = star_subdivision(&current, &point)
            .expect("parallelepiped points are primitive and lie in the cone");
        inserted.push(point);
        multiplicities.push(multiplicity_profile(&current));
    }
    ResolutionTrace {
        triangulated,
        multiplicities,
        inserted,
        result: current,
    }
}

/// Multiplicities of all maximal cones, largest first.
pub fn multiplicity_profile(fan: &Fan) -> Vec<BigInt> {
    let mut m: Vec<BigInt> = fan
        .cones()
        .map(|c| c.multiplicity().unwrap_or_else(|_| BigInt::zero()))
        .collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Replaces every non-simplicial maximal cone by its pulling triangulation,
/// always pulling the lexicographically least ray first. The global order
/// makes the triangulations of neighbouring cones agree on shared faces.
pub fn triangulate(fan: &Fan) -> Fan {
    if fan.is_simplicial() {
        return fan.clone();
    }
    let mut cones = Vec::new();
    for c in fan.cones() {
        for simplex in pulling_triangulation(fan, &c) {
            if !cones.contains(&simplex) {
                cones.push(simplex);
            }
        }
    }
    Fan::new(fan.dim(), fan.rays().to_vec(), cones).expect("same rays, valid indices")
}

fn pulling_triangulation(fan: &Fan, cone: &Cone) -> Vec<Vec<usize>> {
    if cone.is_simplicial() {
        return vec![cone.ray_indices.clone()];
    }
    let apex = *cone
        .ray_indices
        .iter()
        .min_by(|&&a, &&b| fan.ray(a).cmp(fan.ray(b)))
        .expect("non-simplicial cones have rays");
    let mut out = Vec::new();
    for facet in cone.facets() {
        if facet.contains(&apex) {
            continue;
        }
        for mut simplex in pulling_triangulation(fan, &fan.cone_on(&facet)) {
            simplex.push(apex);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    out
}

/// Nonzero lattice point `Σ λ_i u_i` with all `λ_i ∈ [0, 1)` and minimal
/// `Σ λ_i`; ties go to the lexicographically smallest point.
///
/// With `U·G·V = D` the Smith form of the generator matrix, the lattice
/// points of the span modulo the generators are represented by
/// `λ = V·(c / d)` for `0 ≤ c_i < d_i`; reducing `λ` mod 1 lands in the
/// fundamental parallelepiped.
pub fn shallowest_interior_point(cone: &Cone) -> Vec<i64> {
    parallelepiped_points(cone)
        .into_iter()
        .filter(|(_, p)| p.iter().any(|&x| x != 0))
        .min_by(|(sa, pa), (sb, pb)| sa.cmp(sb).then_with(|| pa.cmp(pb)))
        .map(|(_, p)| p)
        .expect("cone of multiplicity > 1 has a nonzero parallelepiped point")
}

/// All lattice points of the half-open fundamental parallelepiped of a
/// simplicial cone, paired with their coefficient sums.
pub fn parallelepiped_points(cone: &Cone) -> Vec<(Rational, Vec<i64>)> {
    let g = cone.generator_matrix();
    let k = g.cols();
    let snf = smith_normal_form(&g);
    let d = snf.invariant_factors();
    assert_eq!(d.len(), k, "parallelepiped of a non-simplicial cone");
    let bounds: Vec<u64> = d.iter().map(|x| x.to_u64().expect("small multiplicity")).collect();
    let mut out = Vec::new();
    let mut c = vec![0u64; k];
    loop {
        let ratio: Vec<Rational> = c
            .iter()
            .zip(&d)
            .map(|(&ci, di)| BigRational::new(BigInt::from(ci), di.clone()))
            .collect();
        let lambda: Vec<Rational> = (0..k)
            .map(|i| {
                let s = (0..k).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(snf.right.get(i, j).clone()) * &ratio[j]
                });
                &s - s.floor()
            })
            .collect();
        let sum = lambda.iter().fold(Rational::zero(), |a, l| a + l);
        let point: Vec<i64> = (0..g.rows())
            .map(|r| {
                let x = (0..k).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(g.get(r, j).clone()) * &lambda[j]
                });
                debug_assert!(x.is_integer());
                x.to_integer().to_i64().expect("coordinate fits")
            })
            .collect();
        out.push((sum, point));

        // odometer over 0 <= c_i < d_i
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            c[i] += 1;
            if c[i] < bounds[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}
