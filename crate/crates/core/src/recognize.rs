//! Recognisers for projective spaces, projectivity, products and fiber
//! products, and the toric instances of the two structure theorems.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classes::picard_rank;
use crate::error::{Error, Result};
use crate::exactla::lp::{LinearSystem, Relation};
use crate::exactla::matrix::to_i64_vec;
use crate::exactla::rational::{i64_to_rational_vec, rat, RatMatrix, Rational};
use crate::exactla::{kernel_basis, IntMatrix};
use crate::fan::construct::{fiber_product_fan, FiberProduct};
use crate::fan::{projective_space_fan, Fan};
use crate::morphism::{check_compatibility, is_split_bundle_morphism, ToricMorphism};

/// Unimodular matrix carrying a fan onto the standard fan of `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnWitness {
    pub matrix: IntMatrix,
}

impl PnWitness {
    pub fn verify(&self, f: &Fan) -> bool {
        let Ok(std) = projective_space_fan(f.dim()) else {
            return false;
        };
        self.matrix.determinant().abs().is_one()
            && f.transformed(&self.matrix).is_ok_and(|g| g.same_fan(&std))
    }
}

/// Detects the fan of `P^n` up to a change of lattice basis.
pub fn is_projective_space(f: &Fan) -> Option<PnWitness> {
    let n = f.dim();
    if n == 0 || f.num_rays() != n + 1 || f.max_cones().len() != n + 1 {
        return None;
    }
    let cones: BTreeSet<&Vec<usize>> = f.max_cones().iter().collect();
    if cones.len() != n + 1 || cones.iter().any(|c| c.len() != n) {
        return None;
    }
    if !f.is_smooth() || !f.is_complete() {
        return None;
    }
    let first = f.cone(0);
    let inv = RatMatrix::from_int(&first.generator_matrix()).inverse()?;
    let w = inv.to_int()?;
    let rest = (0..=n).find(|r| !first.ray_indices.contains(r))?;
    let image = w.apply_i64(f.ray(rest));
    if image.iter().any(|x| *x != BigInt::from(-1)) {
        return None;
    }
    Some(PnWitness { matrix: w })
}

/// Strictly convex piecewise-linear support data: values `a_ρ` on the rays
/// and one linear functional `m_σ` per maximal cone with `⟨m_σ, u_ρ⟩ = a_ρ`
/// on the rays of `σ` and `⟨m_σ, u_ρ'⟩ > a_ρ'` for the opposite ray of each
/// wall of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexSupportCertificate {
    pub values: Vec<Rational>,
    pub functionals: Vec<Vec<Rational>>,
}

fn dot(m: &[Rational], u: &[i64]) -> Rational {
    m.iter().zip(u).fold(Rational::zero(), |acc, (a, &b)| acc + a * rat(b))
}

impl ConvexSupportCertificate {
    /// Checks every defining equation and wall inequality by substitution.
    pub fn verify(&self, f: &Fan) -> bool {
        if self.values.len() != f.num_rays() || self.functionals.len() != f.max_cones().len() {
            return false;
        }
        for (m, sigma) in self.functionals.iter().zip(f.max_cones()) {
            if m.len() != f.dim() || sigma.iter().any(|&r| dot(m, f.ray(r)) != self.values[r]) {
                return false;
            }
        }
        for cones in f.walls().values() {
            for &s in cones {
                for &t in cones {
                    if s == t {
                        continue;
                    }
                    for &r in &f.max_cones()[t] {
                        if f.max_cones()[s].contains(&r) {
                            continue;
                        }
                        if dot(&self.functionals[s], f.ray(r)) <= self.values[r] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Searches for a strictly convex support function by exact LP.
///
/// The values on the first maximal cone are fixed to zero; strict wall
/// inequalities are imposed with unit slack, which loses nothing because
/// the feasible set is a cone.
pub fn is_projective(f: &Fan) -> Result<Option<ConvexSupportCertificate>> {
    if !f.is_simplicial() {
        return Err(Error::Unsupported("projectivity test needs a simplicial fan".into()));
    }
    let n = f.dim();
    let nr = f.num_rays();
    let mut charts = Vec::with_capacity(f.max_cones().len());
    for c in f.cones() {
        if c.generators.len() != n {
            return Err(Error::Unsupported(
                "projectivity test needs full-dimensional maximal cones".into(),
            ));
        }
        charts.push(c.chart().expect("simplicial full-dimensional cone"));
    }
    // ⟨m_σ, u⟩ = Σ_i λ_i a_{σ_i} with λ = G_σ⁻¹ u.
    let coeffs = |s: usize, u: &[i64]| -> Vec<Rational> {
        let lambda = charts[s].apply(&i64_to_rational_vec(u));
        let mut row = vec![Rational::zero(); nr];
        for (l, &r) in lambda.iter().zip(&f.max_cones()[s]) {
            row[r] += l;
        }
        row
    };
    let mut sys = LinearSystem::new(nr);
    if let Some(first) = f.max_cones().first() {
        for &r in first {
            let mut row = vec![Rational::zero(); nr];
            row[r] = rat(1);
            sys.add(row, Relation::Equal, Rational::zero());
        }
    }
    for cones in f.walls().values() {
        for &s in cones {
            for &t in cones {
                if s == t {
                    continue;
                }
                for &r in &f.max_cones()[t] {
                    if f.max_cones()[s].contains(&r) {
                        continue;
                    }
                    let mut row = coeffs(s, f.ray(r));
                    row[r] -= rat(1);
                    sys.add(row, Relation::GreaterEq, rat(1));
                }
            }
        }
    }
    let Some(values) = sys.feasible_point() else {
        return Ok(None);
    };
    let functionals = f
        .max_cones()
        .iter()
        .enumerate()
        .map(|(s, sigma)| {
            // m_σ = G_σ^{-T} a_σ
            let a: Vec<Rational> = sigma.iter().map(|&r| values[r].clone()).collect();
            charts[s].transpose().apply(&a)
        })
        .collect();
    let cert = ConvexSupportCertificate {
        values,
        functionals,
    };
    debug_assert!(cert.verify(f));
    Ok(Some(cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem1Verdict {
    Confirmed(PnWitness),
    Refuted,
}

/// For a surjective map from a complete toric variety onto a smooth
/// projective target of Picard rank one, checks that the target is `P^n`.
/// Every violated hypothesis is reported.
pub fn theorem1_toric_verify(m: &ToricMorphism) -> Result<Theorem1Verdict> {
    let (x, y) = (m.source(), m.target());
    let mut violations = Vec::new();
    if !x.is_complete() {
        violations.push("source not complete".to_string());
    }
    let y_complete = y.is_complete();
    if !y_complete {
        violations.push("target not complete".to_string());
    }
    if !y.is_smooth() {
        violations.push("target not smooth".to_string());
    }
    if y_complete && y.is_simplicial() && matches!(is_projective(y), Ok(None)) {
        violations.push("target not projective".to_string());
    }
    match picard_rank(y) {
        Ok(1) => {}
        Ok(r) => violations.push(format!("target Picard rank is {r}, expected 1")),
        Err(e) => violations.push(format!("target Picard rank undefined: {e}")),
    }
    let compatible = check_compatibility(m).compatible;
    if !compatible {
        violations.push("morphism not compatible with the fans".to_string());
    }
    if m.map().rank() != y.dim() {
        violations.push("morphism not surjective".to_string());
    }
    if !violations.is_empty() {
        return Err(Error::Hypotheses(violations));
    }
    Ok(match is_projective_space(y) {
        Some(w) => Theorem1Verdict::Confirmed(w),
        None => Theorem1Verdict::Refuted,
    })
}

/// Basis (as columns) of the saturation of the span of the given vectors.
fn saturated_span(n: usize, vectors: &[Vec<i64>]) -> IntMatrix {
    let m = IntMatrix::from_columns(n, vectors);
    if m.rank() == n {
        return IntMatrix::identity(n);
    }
    let left = kernel_basis(&m.transpose());
    let annihilator = IntMatrix::from_rows(n, &left);
    IntMatrix::from_columns(n, &kernel_basis(&annihilator))
}

fn coordinates_in(basis: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    let x = RatMatrix::from_int(basis).solve(&i64_to_rational_vec(v))?;
    x.iter()
        .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
        .collect()
}

/// A decomposition `N = N_1 ⊕ N_2` under which the fan is a product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub first_rays: Vec<usize>,
    pub second_rays: Vec<usize>,
    /// Columns form a basis of `N_1`.
    pub first_basis: IntMatrix,
    pub second_basis: IntMatrix,
    /// Factor fans in the coordinates of the two bases.
    pub first_fan: Fan,
    pub second_fan: Fan,
}

pub const MAX_PRODUCT_SEARCH_RAYS: usize = 16;

/// Exhaustive search over ray partitions for a product decomposition.
pub fn is_product(f: &Fan) -> Result<Option<Splitting>> {
    let nr = f.num_rays();
    if nr > MAX_PRODUCT_SEARCH_RAYS {
        return Err(Error::SearchTooLarge(format!(
            "{nr} rays, at most {MAX_PRODUCT_SEARCH_RAYS} supported"
        )));
    }
    let n = f.dim();
    if n < 2 || nr < 2 {
        return Ok(None);
    }
    let cones: BTreeSet<Vec<usize>> = f.max_cones().iter().cloned().collect();
    // Ray 0 always goes to the first part.
    for mask in 0u32..(1u32 << (nr - 1)) - 1 {
        let in_first = |r: usize| r == 0 || mask & (1 << (r - 1)) != 0;
        let s1: Vec<usize> = (0..nr).filter(|&r| in_first(r)).collect();
        let s2: Vec<usize> = (0..nr).filter(|&r| !in_first(r)).collect();
        let v1: Vec<Vec<i64>> = s1.iter().map(|&r| f.ray(r).to_vec()).collect();
        let v2: Vec<Vec<i64>> = s2.iter().map(|&r| f.ray(r).to_vec()).collect();
        let r1 = IntMatrix::from_columns(n, &v1).rank();
        let r2 = IntMatrix::from_columns(n, &v2).rank();
        if r1 + r2 != n || r1 == 0 || r2 == 0 {
            continue;
        }
        let parts1: BTreeSet<Vec<usize>> = cones
            .iter()
            .map(|c| c.iter().copied().filter(|&r| in_first(r)).collect())
            .collect();
        let parts2: BTreeSet<Vec<usize>> = cones
            .iter()
            .map(|c| c.iter().copied().filter(|&r| !in_first(r)).collect())
            .collect();
        if parts1.len() * parts2.len() != cones.len() {
            continue;
        }
        let all_products = parts1.iter().all(|a| {
            parts2.iter().all(|b| {
                let mut c: Vec<usize> = a.iter().chain(b).copied().collect();
                c.sort_unstable();
                cones.contains(&c)
            })
        });
        if !all_products {
            continue;
        }
        let b1 = saturated_span(n, &v1);
        let b2 = saturated_span(n, &v2);
        if !b1.hstack(&b2).determinant().abs().is_one() {
            continue;
        }
        let factor = |basis: &IntMatrix, rays: &[usize], parts: &BTreeSet<Vec<usize>>| {
            let coords: Vec<Vec<i64>> = rays
                .iter()
                .map(|&r| coordinates_in(basis, f.ray(r)).expect("ray lies in its own span"))
                .collect();
            let local: Vec<Vec<usize>> = parts
                .iter()
                .map(|c| c.iter().map(|r| rays.binary_search(r).unwrap()).collect())
                .collect();
            Fan::new(basis.cols(), coords, local)
        };
        let first_fan = factor(&b1, &s1, &parts1)?;
        let second_fan = factor(&b2, &s2, &parts2)?;
        return Ok(Some(Splitting {
            first_rays: s1,
            second_rays: s2,
            first_basis: b1,
            second_basis: b2,
            first_fan,
            second_fan,
        }));
    }
    Ok(None)
}

fn degree_signature(f: &Fan) -> (Vec<usize>, Vec<usize>) {
    let mut deg = f.ray_degrees();
    deg.sort_unstable();
    let mut sizes: Vec<usize> = f.max_cones().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    (deg, sizes)
}

/// A unimodular `T` with `T·a = b` (rays onto rays, cones onto cones), found
/// by trying every ordered image of one full-dimensional simplicial cone of
/// `a`, pruned by ray degrees.
pub fn fan_isomorphism(a: &Fan, b: &Fan) -> Result<Option<IntMatrix>> {
    let n = a.dim();
    if n != b.dim()
        || a.num_rays() != b.num_rays()
        || a.max_cones().len() != b.max_cones().len()
        || degree_signature(a) != degree_signature(b)
    {
        return Ok(None);
    }
    let Some(anchor) = a
        .cones()
        .find(|c| c.generators.len() == n && c.is_simplicial())
    else {
        return Err(Error::Unsupported(
            "isomorphism search needs a full-dimensional simplicial cone".into(),
        ));
    };
    let inv = RatMatrix::from_int(&anchor.generator_matrix())
        .inverse()
        .expect("simplicial full-dimensional cone");
    let deg_a = a.ray_degrees();
    let deg_b = b.ray_degrees();
    let index_b: HashMap<&[i64], usize> =
        b.rays().iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let cones_b: BTreeSet<Vec<usize>> = b.max_cones().iter().cloned().collect();

    for tau in b.max_cones() {
        if tau.len() != n {
            continue;
        }
        for perm in tau.iter().copied().permutations(n) {
            if anchor
                .ray_indices
                .iter()
                .zip(&perm)
                .any(|(&i, &j)| deg_a[i] != deg_b[j])
            {
                continue;
            }
            let images: Vec<Vec<i64>> = perm.iter().map(|&j| b.ray(j).to_vec()).collect();
            let h = RatMatrix::from_int(&IntMatrix::from_columns(n, &images));
            let t = h.mul(&inv);
            let Some(t) = t.to_int() else {
                continue;
            };
            if !t.determinant().abs().is_one() {
                continue;
            }
            let mut sigma = Vec::with_capacity(a.num_rays());
            let mut ok = true;
            for (i, r) in a.rays().iter().enumerate() {
                let img = to_i64_vec(&t.apply_i64(r));
                match img.and_then(|v| index_b.get(v.as_slice()).copied()) {
                    Some(j) if deg_a[i] == deg_b[j] => sigma.push(j),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let all = a.max_cones().iter().all(|c| {
                let mut img: Vec<usize> = c.iter().map(|&i| sigma[i]).collect();
                img.sort_unstable();
                cones_b.contains(&img)
            });
            if all {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem2Verdict {
    FiberProductConfirmed {
        /// Common quotient maps `N_Y → Z` and `N_Z → Z` onto the lattice of
        /// `P^1`.
        to_base: (IntMatrix, IntMatrix),
        fiber_product: FiberProduct,
        /// Unimodular map from the lattice of X onto the fiber product lattice.
        isomorphism: IntMatrix,
    },
    NoToricWitness(String),
}

/// Given two different split-bundle structures `f: X → Y`, `g: X → Z` with
/// `dim Y + dim Z = dim X + 1`, looks for a common quotient `Y → P^1 ← Z`
/// and checks that X is the fiber product.
pub fn theorem2_toric_verify(
    x: &Fan,
    f: &ToricMorphism,
    g: &ToricMorphism,
) -> Result<Theorem2Verdict> {
    let n = x.dim();
    let mut violations = Vec::new();
    if !f.source().same_fan(x) {
        violations.push("first morphism does not start at X".to_string());
    }
    if !g.source().same_fan(x) {
        violations.push("second morphism does not start at X".to_string());
    }
    let bf = is_split_bundle_morphism(f);
    let bg = is_split_bundle_morphism(g);
    if bf.is_none() {
        violations.push("first morphism is not a split-bundle morphism".to_string());
    }
    if bg.is_none() {
        violations.push("second morphism is not a split-bundle morphism".to_string());
    }
    if let (Some(a), Some(b)) = (&bf, &bg) {
        if a.kernel_basis == b.kernel_basis {
            violations.push("the two bundle structures coincide".to_string());
        }
    }
    let (dy, dz) = (f.target().dim(), g.target().dim());
    if dy + dz != n + 1 {
        violations.push(format!(
            "wrong dimension sum: dim Y + dim Z = {}, expected {}",
            dy + dz,
            n + 1
        ));
    }
    if !violations.is_empty() {
        return Err(Error::Hypotheses(violations));
    }
    let (bf, bg) = (bf.unwrap(), bg.unwrap());

    let kernels: Vec<Vec<BigInt>> = bf
        .kernel_basis
        .column_vectors()
        .into_iter()
        .chain(bg.kernel_basis.column_vectors())
        .collect();
    let ell = kernel_basis(&IntMatrix::from_rows(n, &kernels));
    if ell.len() != 1 {
        return Ok(Theorem2Verdict::NoToricWitness(format!(
            "the fiber directions leave a quotient of rank {}, not 1",
            ell.len()
        )));
    }
    let ell = &ell[0];
    let quotient = |m: &ToricMorphism| -> Option<IntMatrix> {
        // ℓ = p·A  ⇔  Aᵀ pᵀ = ℓᵀ
        let at = RatMatrix::from_int(&m.map().transpose());
        let p = at.solve(&crate::exactla::rational::to_rational_vec(ell))?;
        let p = RatMatrix::from_columns(p.len(), &[p]).transpose().to_int()?;
        Some(p)
    };
    let (Some(py), Some(pz)) = (quotient(f), quotient(g)) else {
        return Ok(Theorem2Verdict::NoToricWitness(
            "the common quotient does not factor through both targets".into(),
        ));
    };
    let c = projective_space_fan(1)?;
    let my = ToricMorphism::new(f.target().clone(), c.clone(), py.clone())?;
    let mz = ToricMorphism::new(g.target().clone(), c, pz.clone())?;
    if !check_compatibility(&my).compatible || !check_compatibility(&mz).compatible {
        return Ok(Theorem2Verdict::NoToricWitness(
            "no toric map from the bundle bases onto P^1".into(),
        ));
    }
    let fp = match fiber_product_fan(&my, &mz) {
        Ok(fp) => fp,
        Err(e) => return Ok(Theorem2Verdict::NoToricWitness(e.to_string())),
    };
    match fan_isomorphism(x, &fp.fan)? {
        Some(t) => Ok(Theorem2Verdict::FiberProductConfirmed {
            to_base: (py, pz),
            fiber_product: fp,
            isomorphism: t,
        }),
        None => Ok(Theorem2Verdict::NoToricWitness(
            "X is not isomorphic to the fiber product".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch_fan, product_fan, star_subdivision};

    fn p(n: usize) -> Fan {
        projective_space_fan(n).unwrap()
    }

    fn weighted_p112() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    #[test]
    fn standard_projective_space_has_identity_witness() {
        let w = is_projective_space(&p(3)).unwrap();
        assert_eq!(w.matrix, IntMatrix::identity(3));
        assert!(w.verify(&p(3)));
    }

    #[test]
    fn transformed_plane_is_recognised() {
        let t = IntMatrix::from_rows(2, &[[2i64, 1], [1, 1]]);
        let f = p(2).transformed(&t).unwrap();
        let w = is_projective_space(&f).unwrap();
        assert!(w.verify(&f));
        assert!(is_projective_space(&hirzebruch_fan(1).unwrap()).is_none());
        assert!(is_projective_space(&weighted_p112()).is_none());
    }

    #[test]
    fn projective_line_certificate() {
        let cert = is_projective(&p(1)).unwrap().unwrap();
        assert!(cert.verify(&p(1)));
    }

    #[test]
    fn surfaces_and_blowups_are_projective() {
        for f in [
            p(2),
            hirzebruch_fan(3).unwrap(),
            weighted_p112(),
            star_subdivision(&p(3), &[1, 1, 0]).unwrap(),
        ] {
            let cert = is_projective(&f).unwrap().expect("projective");
            assert!(cert.verify(&f));
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let f = p(2);
        let mut cert = is_projective(&f).unwrap().unwrap();
        cert.values[1] += rat(100);
        assert!(!cert.verify(&f));
    }

    #[test]
    fn non_simplicial_is_unsupported() {
        let f = Fan::new(
            2,
            vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        );
        // A 2-dim cone on three rays is never simplicial.
        let f = f.unwrap();
        assert!(matches!(is_projective(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn theorem1_instances() {
        let bl = star_subdivision(&p(2), &[1, 1]).unwrap();
        let m = ToricMorphism::new(bl, p(2), IntMatrix::identity(2)).unwrap();
        assert!(matches!(theorem1_toric_verify(&m), Ok(Theorem1Verdict::Confirmed(_))));
        let three = IntMatrix::identity(3).scaled(&BigInt::from(3));
        let m = ToricMorphism::new(p(3), p(3), three).unwrap();
        assert!(matches!(theorem1_toric_verify(&m), Ok(Theorem1Verdict::Confirmed(_))));
    }

    #[test]
    fn theorem1_rejects_singular_target() {
        let y = weighted_p112();
        let m = ToricMorphism::identity_between(&crate::fan::resolve(&y), &y);
        match theorem1_toric_verify(&m) {
            Err(Error::Hypotheses(v)) => assert_eq!(v, vec!["target not smooth".to_string()]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn products_are_found() {
        let sp = is_product(&product_fan(&p(1), &p(2)).unwrap()).unwrap().unwrap();
        let dims = [sp.first_fan.dim(), sp.second_fan.dim()];
        assert!(dims == [1, 2] || dims == [2, 1]);
        assert!(is_product(&p(2)).unwrap().is_none());
        let f1p1 = product_fan(&hirzebruch_fan(1).unwrap(), &p(1)).unwrap();
        let sp = is_product(&f1p1).unwrap().unwrap();
        let (a, b) = if sp.first_fan.dim() == 2 {
            (&sp.first_fan, &sp.second_fan)
        } else {
            (&sp.second_fan, &sp.first_fan)
        };
        assert!(fan_isomorphism(a, &hirzebruch_fan(1).unwrap()).unwrap().is_some());
        assert!(fan_isomorphism(b, &p(1)).unwrap().is_some());
    }

    #[test]
    fn isomorphism_search() {
        let t = IntMatrix::from_rows(2, &[[1i64, 3], [0, 1]]);
        let f = hirzebruch_fan(2).unwrap();
        let g = f.transformed(&t).unwrap();
        let iso = fan_isomorphism(&f, &g).unwrap().unwrap();
        assert!(f.transformed(&iso).unwrap().same_fan(&g));
        assert!(fan_isomorphism(&hirzebruch_fan(1).unwrap(), &hirzebruch_fan(2).unwrap())
            .unwrap()
            .is_none());
        assert!(fan_isomorphism(&hirzebruch_fan(0).unwrap(), &hirzebruch_fan(2).unwrap())
            .unwrap()
            .is_none());
    }

    fn to_p1(f: Fan) -> ToricMorphism {
        ToricMorphism::new(f, p(1), IntMatrix::from_rows(2, &[[1i64, 0]])).unwrap()
    }

    fn fiber_product_instance(a: i64, b: i64) -> (Fan, ToricMorphism, ToricMorphism) {
        let fp = fiber_product_fan(
            &to_p1(hirzebruch_fan(a).unwrap()),
            &to_p1(hirzebruch_fan(b).unwrap()),
        )
        .unwrap();
        let x = fp.fan.clone();
        let f = ToricMorphism::new(x.clone(), hirzebruch_fan(a).unwrap(), fp.to_first).unwrap();
        let g = ToricMorphism::new(x.clone(), hirzebruch_fan(b).unwrap(), fp.to_second).unwrap();
        (x, f, g)
    }

    #[test]
    fn fiber_product_of_hirzebruch_surfaces() {
        for (a, b) in [(1, 0), (2, 1)] {
            let (x, f, g) = fiber_product_instance(a, b);
            assert_eq!(x.dim(), 3);
            assert_eq!(x.num_rays(), 6);
            assert!(matches!(
                theorem2_toric_verify(&x, &f, &g),
                Ok(Theorem2Verdict::FiberProductConfirmed { .. })
            ));
        }
    }

    #[test]
    fn theorem2_dimension_gate() {
        let x = product_fan(&p(1), &p(1)).unwrap();
        let f = ToricMorphism::new(x.clone(), p(1), IntMatrix::from_rows(2, &[[1i64, 0]])).unwrap();
        let g = ToricMorphism::new(x.clone(), p(1), IntMatrix::from_rows(2, &[[0i64, 1]])).unwrap();
        match theorem2_toric_verify(&x, &f, &g) {
            Err(Error::Hypotheses(v)) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].starts_with("wrong dimension sum"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
