//! Toric morphisms: lattice maps compatible with fans.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::matrix::to_i64_vec;
use crate::exactla::rational::{primitive_on_ray, to_rational_vec, RatMatrix};
use crate::exactla::{kernel_basis, smith_normal_form, IntMatrix};
use crate::fan::{Cone, Fan};
use crate::recognize::is_projective_space;

/// Source ray indices.
pub type RaySet = BTreeSet<usize>;

/// A lattice map `A: N → N'` (an `n' × n` matrix) between the lattices of
/// two fans. Compatibility with the fans is not enforced on construction;
/// see [`check_compatibility`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricMorphism {
    source: Fan,
    target: Fan,
    map: IntMatrix,
}

impl ToricMorphism {
    pub fn new(source: Fan, target: Fan, map: IntMatrix) -> Result<Self> {
        if map.rows() != target.dim() || map.cols() != source.dim() {
            return Err(Error::MalformedMorphism(format!(
                "matrix is {}x{}, expected {}x{}",
                map.rows(),
                map.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(ToricMorphism { source, target, map })
    }

    pub fn identity(fan: &Fan) -> Self {
        ToricMorphism {
            source: fan.clone(),
            target: fan.clone(),
            map: IntMatrix::identity(fan.dim()),
        }
    }

    /// Identity lattice map between two fans in the same lattice.
    pub fn identity_between(source: &Fan, target: &Fan) -> Self {
        ToricMorphism {
            source: source.clone(),
            target: target.clone(),
            map: IntMatrix::identity(source.dim()),
        }
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn map(&self) -> &IntMatrix {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ToricMorphism) -> Result<ToricMorphism> {
        if !self.target.same_fan(&next.source) {
            return Err(Error::MalformedMorphism(
                "target of the first map is not the source of the second".into(),
            ));
        }
        ToricMorphism::new(self.source.clone(), next.target.clone(), &next.map * &self.map)
    }

    pub fn image_of_ray(&self, i: usize) -> Vec<BigInt> {
        self.map.apply_i64(self.source.ray(i))
    }

    /// Lattice rank of `A` equals `n'` and both fans are complete.
    pub fn is_surjective(&self) -> bool {
        self.map.rank() == self.target.dim() && self.source.is_complete() && self.target.is_complete()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    /// First maximal source cone whose image lies in no target cone.
    pub offending_cone: Option<usize>,
}

/// Index of a maximal target cone containing every given point.
fn target_cone_containing(target: &Fan, points: &[Vec<BigInt>]) -> Option<usize> {
    let pts: Vec<_> = points.iter().map(|p| to_rational_vec(p)).collect();
    (0..target.max_cones().len()).find(|&c| {
        let cone = target.cone(c);
        pts.iter().all(|p| cone.contains(p))
    })
}

/// Every maximal source cone must map into a single target cone. Tested on
/// the images of the generators together with the image of the interior
/// witness.
pub fn check_compatibility(m: &ToricMorphism) -> Compatibility {
    for (c, cone) in m.source.cones().enumerate() {
        let mut images: Vec<Vec<BigInt>> = (0..cone.generators.len())
            .map(|i| m.map.apply_i64(&cone.generators[i]))
            .collect();
        images.push(m.map.apply_i64(&cone.interior_witness()));
        if target_cone_containing(&m.target, &images).is_none() {
            return Compatibility {
                compatible: false,
                offending_cone: Some(c),
            };
        }
    }
    Compatibility {
        compatible: true,
        offending_cone: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericFiniteness {
    pub finite: bool,
    /// `|det A|` when the map is generically finite.
    pub index: Option<BigInt>,
}

pub fn is_generically_finite(m: &ToricMorphism) -> Result<GenericFiniteness> {
    if !m.source.is_complete() || !m.target.is_complete() {
        return Err(Error::SurjectivityUndecided(
            "both fans must be complete".into(),
        ));
    }
    if m.source.dim() != m.target.dim() {
        return Ok(GenericFiniteness {
            finite: false,
            index: None,
        });
    }
    let det = m.map.determinant();
    Ok(if det.is_zero() {
        GenericFiniteness {
            finite: false,
            index: None,
        }
    } else {
        GenericFiniteness {
            finite: true,
            index: Some(det.abs()),
        }
    })
}

fn j_hypotheses(m: &ToricMorphism) -> Result<()> {
    if !check_compatibility(m).compatible {
        return Err(Error::JUndefined("morphism is not compatible with the fans".into()));
    }
    if !m.source.is_complete() || !m.target.is_complete() {
        return Err(Error::JUndefined("both fans must be complete".into()));
    }
    if m.map.rank() != m.target.dim() {
        return Err(Error::JUndefined("lattice map is not surjective over Q".into()));
    }
    Ok(())
}

/// Rays whose divisors map onto divisors of the target.
///
/// Uses the on-a-ray test when the map is generically finite and the
/// general rank formula otherwise.
pub fn j_of(m: &ToricMorphism) -> Result<RaySet> {
    j_hypotheses(m)?;
    if is_generically_finite(m)?.finite {
        Ok(j_on_target_rays(m))
    } else {
        Ok(j_rank_formula(m))
    }
}

/// `ρ ∈ J` iff the image of `N_Q / Q·e_ρ` in `N'_Q / span(σ')` has
/// dimension `n' − 1`, where `σ'` is the smallest target cone containing
/// `A·e_ρ`.
pub fn j_of_by_rank_formula(m: &ToricMorphism) -> Result<RaySet> {
    j_hypotheses(m)?;
    Ok(j_rank_formula(m))
}

/// `ρ ∈ J` iff `A·e_ρ` lies on a ray of the target fan. Valid for
/// generically finite maps only.
pub fn j_of_by_target_rays(m: &ToricMorphism) -> Result<RaySet> {
    j_hypotheses(m)?;
    if !is_generically_finite(m)?.finite {
        return Err(Error::JUndefined("map is not generically finite".into()));
    }
    Ok(j_on_target_rays(m))
}

fn minimal_target_face(m: &ToricMorphism, y: &[BigInt]) -> Vec<usize> {
    let y = to_rational_vec(y);
    for cone in m.target.cones() {
        if let Some(face) = cone.minimal_face(&y) {
            return face;
        }
    }
    unreachable!("target fan is complete")
}

fn j_rank_formula(m: &ToricMorphism) -> RaySet {
    let np = m.target.dim();
    (0..m.source.num_rays())
        .filter(|&r| {
            let y = m.image_of_ray(r);
            let face = minimal_target_face(m, &y);
            let g = m.target.cone_on(&face).generator_matrix();
            let quotient_rank = m.map.hstack(&g).rank() - g.rank();
            quotient_rank + 1 == np
        })
        .collect()
}

fn j_on_target_rays(m: &ToricMorphism) -> RaySet {
    (0..m.source.num_rays())
        .filter(|&r| {
            let y = m.image_of_ray(r);
            if y.iter().all(Zero::is_zero) {
                return false;
            }
            let Some(p) = primitive_on_ray(&to_rational_vec(&y)) else {
                return false;
            };
            to_i64_vec(&p).is_some_and(|p| m.target.ray_index(&p).is_some())
        })
        .collect()
}

/// Whether the rays in `J` span `N_Q`. Requires a complete source and a
/// surjective, generically finite map.
pub fn lemma1_check(m: &ToricMorphism) -> Result<bool> {
    if !m.source.is_complete() || !m.target.is_complete() {
        return Err(Error::SpanCheckHypotheses("both fans must be complete".into()));
    }
    if !check_compatibility(m).compatible {
        return Err(Error::SpanCheckHypotheses("morphism is not compatible".into()));
    }
    if !is_generically_finite(m)?.finite {
        return Err(Error::SpanCheckHypotheses("map is not generically finite".into()));
    }
    let j: Vec<usize> = j_of(m)?.into_iter().collect();
    Ok(m.source.ray_matrix().select_columns(&j).rank() == m.source.dim())
}

/// A generically finite morphism split as a refinement followed by a
/// finite map that is bijective on cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinFactorization {
    pub middle: Fan,
    /// Identity lattice map from the source fan to `middle`.
    pub connected_part: ToricMorphism,
    /// The original lattice map from `middle` to the target fan.
    pub finite_part: ToricMorphism,
}

pub fn stein_factor(m: &ToricMorphism) -> Result<SteinFactorization> {
    let gf = is_generically_finite(m)
        .map_err(|e| Error::FactorizationUnsupported(e.to_string()))?;
    if !gf.finite {
        return Err(Error::FactorizationUnsupported(
            "map is not generically finite".into(),
        ));
    }
    if !check_compatibility(m).compatible {
        return Err(Error::FactorizationUnsupported("morphism is not compatible".into()));
    }
    let inv = RatMatrix::from_int(&m.map).inverse().expect("determinant is nonzero");
    let mut rays = Vec::with_capacity(m.target.num_rays());
    for u in m.target.rays() {
        let pre = inv.apply(&crate::exactla::rational::i64_to_rational_vec(u));
        let p = primitive_on_ray(&pre).expect("preimage of a ray is nonzero");
        rays.push(to_i64_vec(&p).ok_or(Error::Overflow)?);
    }
    let middle = Fan::new(m.source.dim(), rays, m.target.max_cones().to_vec())?;
    let connected_part = ToricMorphism::new(
        m.source.clone(),
        middle.clone(),
        IntMatrix::identity(m.source.dim()),
    )?;
    let finite_part = ToricMorphism::new(middle.clone(), m.target.clone(), m.map.clone())?;
    Ok(SteinFactorization {
        middle,
        connected_part,
        finite_part,
    })
}

/// Fiber data of a morphism recognised as a projectivised split bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleData {
    /// Fiber dimension.
    pub k: usize,
    /// Fan of the fiber in kernel coordinates.
    pub fiber_fan: Fan,
    /// `n × k` matrix whose columns are a basis of `ker A`.
    pub kernel_basis: IntMatrix,
}

/// Recognises split projective-space bundles by a sufficient criterion:
/// `A` is onto as a lattice map, the rays in `ker A` form the fan of `P^k`,
/// every maximal cone maps onto a maximal target cone and meets the kernel
/// in a maximal fiber cone, and there are `k + 1` source cones over each
/// target cone.
pub fn is_split_bundle_morphism(m: &ToricMorphism) -> Option<BundleData> {
    let n = m.source.dim();
    let np = m.target.dim();
    if n <= np || !check_compatibility(m).compatible {
        return None;
    }
    let snf = smith_normal_form(&m.map);
    if snf.rank() != np || snf.invariant_factors().iter().any(|d| *d != BigInt::from(1)) {
        return None;
    }
    let k = n - np;
    let basis = kernel_basis(&m.map);
    let kmat = IntMatrix::from_columns(n, &basis);
    let chart = RatMatrix::from_int(&kmat);

    let fiber_rays: Vec<usize> = (0..m.source.num_rays())
        .filter(|&r| m.image_of_ray(r).iter().all(Zero::is_zero))
        .collect();
    let mut fiber_coords = Vec::with_capacity(fiber_rays.len());
    for &r in &fiber_rays {
        let x = chart.solve(&crate::exactla::rational::i64_to_rational_vec(m.source.ray(r)))?;
        let x: Option<Vec<i64>> = x
            .iter()
            .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
            .collect();
        fiber_coords.push(x?);
    }

    let mut fiber_cones: Vec<Vec<usize>> = Vec::new();
    for sigma in m.source.max_cones() {
        let in_fiber: Vec<usize> = sigma
            .iter()
            .filter_map(|r| fiber_rays.iter().position(|f| f == r))
            .collect();
        if in_fiber.len() != k {
            return None;
        }
        let images: Vec<Vec<BigInt>> = sigma
            .iter()
            .filter(|r| !fiber_rays.contains(r))
            .map(|&r| m.image_of_ray(r))
            .collect();
        let t = target_cone_containing(&m.target, &images)?;
        let tcone = m.target.cone(t);
        if tcone.dim() != np {
            return None;
        }
        let image_cone = Cone::from_generators(
            np,
            images.iter().map(|v| to_i64_vec(v)).collect::<Option<Vec<_>>>()?,
        );
        if !tcone.generators.iter().all(|g| image_cone.contains_lattice_point(g)) {
            return None;
        }
        let mut fc = in_fiber;
        fc.sort_unstable();
        if !fiber_cones.contains(&fc) {
            fiber_cones.push(fc);
        }
    }
    if m.source.max_cones().len() != m.target.max_cones().len() * (k + 1) {
        return None;
    }
    let fiber_fan = Fan::new(k, fiber_coords, fiber_cones).ok()?;
    is_projective_space(&fiber_fan)?;
    Some(BundleData {
        k,
        fiber_fan,
        kernel_basis: kmat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch_fan, product_fan, projective_space_fan, star_subdivision};

    fn p2() -> Fan {
        projective_space_fan(2).unwrap()
    }

    fn blowdown() -> ToricMorphism {
        let bl = star_subdivision(&p2(), &[1, 1]).unwrap();
        ToricMorphism::new(bl, p2(), IntMatrix::identity(2)).unwrap()
    }

    fn scaling(f: &Fan, k: i64) -> ToricMorphism {
        let a = IntMatrix::identity(f.dim()).scaled(&BigInt::from(k));
        ToricMorphism::new(f.clone(), f.clone(), a).unwrap()
    }

    fn projection_p1xp1() -> ToricMorphism {
        let p1 = projective_space_fan(1).unwrap();
        let x = product_fan(&p1, &p1).unwrap();
        ToricMorphism::new(x, p1, IntMatrix::from_rows(2, &[[1i64, 0]])).unwrap()
    }

    #[test]
    fn shape_is_checked() {
        let e = ToricMorphism::new(p2(), p2(), IntMatrix::identity(3)).unwrap_err();
        assert!(matches!(e, Error::MalformedMorphism(_)));
    }

    #[test]
    fn compatibility_examples() {
        assert!(check_compatibility(&blowdown()).compatible);
        assert!(check_compatibility(&scaling(&p2(), 2)).compatible);
        let p1 = projective_space_fan(1).unwrap();
        let q = product_fan(&p1, &p1).unwrap();
        let m = ToricMorphism::new(q.clone(), p2(), IntMatrix::identity(2)).unwrap();
        let c = check_compatibility(&m);
        assert!(!c.compatible);
        let bad = q.cone(c.offending_cone.unwrap());
        assert!(bad.generators.contains(&vec![-1, 0]) && bad.generators.contains(&vec![0, -1]));
    }

    #[test]
    fn generic_finiteness_examples() {
        let g = is_generically_finite(&blowdown()).unwrap();
        assert!(g.finite && g.index == Some(BigInt::from(1)));
        let g = is_generically_finite(&scaling(&p2(), 2)).unwrap();
        assert_eq!(g.index, Some(BigInt::from(4)));
        assert!(!is_generically_finite(&projection_p1xp1()).unwrap().finite);
    }

    #[test]
    fn incomplete_fans_leave_surjectivity_undecided() {
        let cone = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        let m = ToricMorphism::identity(&cone);
        assert!(matches!(is_generically_finite(&m), Err(Error::SurjectivityUndecided(_))));
        assert!(matches!(j_of(&m), Err(Error::JUndefined(_))));
    }

    #[test]
    fn j_examples() {
        let id = ToricMorphism::identity(&p2());
        assert_eq!(j_of(&id).unwrap(), (0..3).collect());
        let b = blowdown();
        let j = j_of(&b).unwrap();
        let vecs: BTreeSet<Vec<i64>> = j.iter().map(|&r| b.source().ray(r).to_vec()).collect();
        let expected: BTreeSet<Vec<i64>> =
            [vec![1, 0], vec![0, 1], vec![-1, -1]].into_iter().collect();
        assert_eq!(vecs, expected);
        assert_eq!(j_of(&scaling(&p2(), 2)).unwrap(), (0..3).collect());
    }

    #[test]
    fn rank_formula_agrees_with_fast_path() {
        for m in [blowdown(), scaling(&p2(), 3), ToricMorphism::identity(&p2())] {
            assert_eq!(j_of_by_rank_formula(&m).unwrap(), j_of_by_target_rays(&m).unwrap());
        }
    }

    #[test]
    fn j_of_a_projection() {
        // P^1 × P^1 → P^1: the two fiber-direction rays map to zero; the
        // other two map onto points of P^1, which are divisors there.
        let m = projection_p1xp1();
        let j = j_of(&m).unwrap();
        let vecs: BTreeSet<Vec<i64>> = j.iter().map(|&r| m.source().ray(r).to_vec()).collect();
        assert_eq!(vecs, [vec![1, 0], vec![-1, 0]].into_iter().collect());
    }

    #[test]
    fn span_check_examples() {
        assert!(lemma1_check(&blowdown()).unwrap());
        assert!(lemma1_check(&ToricMorphism::identity(&hirzebruch_fan(2).unwrap())).unwrap());
        assert!(matches!(
            lemma1_check(&projection_p1xp1()),
            Err(Error::SpanCheckHypotheses(_))
        ));
    }

    #[test]
    fn stein_of_blowdown_and_scaling() {
        let s = stein_factor(&blowdown()).unwrap();
        assert_eq!(s.middle, p2());
        assert_eq!(s.finite_part.map(), &IntMatrix::identity(2));
        let s = stein_factor(&scaling(&p2(), 2)).unwrap();
        assert_eq!(s.middle, p2());
        assert_eq!(s.connected_part, ToricMorphism::identity(&p2()));
        assert_eq!(
            is_generically_finite(&s.finite_part).unwrap().index,
            Some(BigInt::from(4))
        );
    }

    #[test]
    fn stein_of_composite() {
        let m = blowdown().then(&scaling(&p2(), 2)).unwrap();
        let s = stein_factor(&m).unwrap();
        assert!(s.connected_part.source().num_rays() > s.middle.num_rays());
        assert_eq!(s.connected_part.then(&s.finite_part).unwrap(), m);
        let j: BTreeSet<Vec<i64>> =
            j_of(&m).unwrap().iter().map(|&r| m.source().ray(r).to_vec()).collect();
        let mid: BTreeSet<Vec<i64>> = s.middle.rays().iter().cloned().collect();
        assert_eq!(j, mid);
        assert!(matches!(
            stein_factor(&projection_p1xp1()),
            Err(Error::FactorizationUnsupported(_))
        ));
    }

    #[test]
    fn bundle_examples() {
        let b = is_split_bundle_morphism(&projection_p1xp1()).unwrap();
        assert_eq!(b.k, 1);
        assert_eq!(b.fiber_fan.num_rays(), 2);
        for a in 0..4 {
            let fa = hirzebruch_fan(a).unwrap();
            let p1 = projective_space_fan(1).unwrap();
            let m = ToricMorphism::new(fa, p1, IntMatrix::from_rows(2, &[[1i64, 0]])).unwrap();
            assert_eq!(is_split_bundle_morphism(&m).map(|b| b.k), Some(1), "F_{a}");
        }
        assert!(is_split_bundle_morphism(&blowdown()).is_none());
        assert!(is_split_bundle_morphism(&ToricMorphism::identity(&p2())).is_none());
    }

    #[test]
    fn composition_preserves_compatibility() {
        let m = blowdown().then(&scaling(&p2(), 3)).unwrap();
        assert!(check_compatibility(&m).compatible);
    }
}
