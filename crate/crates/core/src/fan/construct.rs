//! Standard fans and fan operations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{combinations, is_primitive, Fan};
use crate::error::{Error, Result};
use crate::exactla::rational::{i64_to_rational_vec, to_rational_vec, RatMatrix};
use crate::exactla::{kernel_basis, IntMatrix};
use crate::morphism::{is_split_bundle_morphism, ToricMorphism};

/// Fan of `P^n`: rays `e_1, …, e_n, -(e_1 + … + e_n)`, maximal cones all
/// `n`-subsets of rays.
pub fn projective_space_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::MalformedFan("projective space needs n >= 1".into()));
    }
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    Fan::new(n, rays, combinations(n + 1, n))
}

/// Fan of the Hirzebruch surface `F_a`: rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch_fan(a: i64) -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
}

/// Product fan on `N_1 ⊕ N_2`. Rays of the first factor come first.
pub fn product_fan(first: &Fan, second: &Fan) -> Result<Fan> {
    let (n1, n2) = (first.dim(), second.dim());
    let mut rays = Vec::with_capacity(first.num_rays() + second.num_rays());
    for r in first.rays() {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(0, n2));
        rays.push(v);
    }
    for r in second.rays() {
        let mut v = vec![0; n1];
        v.extend_from_slice(r);
        rays.push(v);
    }
    let offset = first.num_rays();
    let mut cones = Vec::new();
    for c1 in first.max_cones() {
        for c2 in second.max_cones() {
            let mut c = c1.clone();
            c.extend(c2.iter().map(|&i| i + offset));
            cones.push(c);
        }
    }
    Fan::new(n1 + n2, rays, cones)
}

/// Stellar subdivision at a primitive lattice vector `v` of the support.
/// Every maximal cone containing `v` is replaced by the cones over its
/// facets not containing `v`, joined with the new ray. Subdividing at an
/// existing ray returns the fan unchanged.
pub fn star_subdivision(fan: &Fan, v: &[i64]) -> Result<Fan> {
    if v.len() != fan.dim() {
        return Err(Error::IncompatibleLattices(format!(
            "vector has {} coordinates, fan has rank {}",
            v.len(),
            fan.dim()
        )));
    }
    if !is_primitive(v) {
        return Err(Error::NotPrimitive(v.to_vec()));
    }
    if fan.ray_index(v).is_some() {
        return Ok(fan.clone());
    }
    let q = i64_to_rational_vec(v);
    let containing = fan.cones_containing(&q);
    if containing.is_empty() {
        return Err(Error::NotInSupport(v.to_vec()));
    }
    let new_ray = fan.num_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(v.to_vec());
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut seen = BTreeSet::new();
    for (c, cone_rays) in fan.max_cones().iter().enumerate() {
        if !containing.contains(&c) {
            if seen.insert(cone_rays.clone()) {
                cones.push(cone_rays.clone());
            }
            continue;
        }
        let cone = fan.cone(c);
        for facet in cone.facets() {
            if cone.subcone(&facet).contains(&q) {
                continue;
            }
            let mut nc = facet.clone();
            nc.push(new_ray);
            nc.sort_unstable();
            if seen.insert(nc.clone()) {
                cones.push(nc);
            }
        }
    }
    Fan::new(fan.dim(), rays, cones)
}

/// Fan of `P(O ⊕ L_1 ⊕ … ⊕ L_k)` over `base`, where `L_j` is the
/// equivariant line bundle of the divisor `Σ_ρ twists[j][ρ] D_ρ`.
///
/// The lattice is `N_base ⊕ Z^k`. Base ray `u_ρ` lifts to
/// `(u_ρ, twists[0][ρ], …, twists[k-1][ρ])`; the fiber rays are
/// `f_1, …, f_k` (standard basis of `Z^k`) and `f_0 = -(f_1 + … + f_k)`.
/// Rays are listed as lifted base rays, then `f_1, …, f_k`, then `f_0`.
pub fn projectivized_split_bundle_fan(base: &Fan, twists: &[Vec<i64>]) -> Result<Fan> {
    let k = twists.len();
    if k == 0 {
        return Err(Error::MalformedTwists("at least one twist is required".into()));
    }
    if let Some((j, t)) = twists.iter().enumerate().find(|(_, t)| t.len() != base.num_rays()) {
        return Err(Error::MalformedTwists(format!(
            "twist {j} has {} entries, base has {} rays",
            t.len(),
            base.num_rays()
        )));
    }
    let nb = base.dim();
    let mut rays = Vec::with_capacity(base.num_rays() + k + 1);
    for (rho, u) in base.rays().iter().enumerate() {
        let mut v = u.clone();
        v.extend(twists.iter().map(|t| t[rho]));
        rays.push(v);
    }
    for j in 0..k {
        let mut v = vec![0; nb + k];
        v[nb + j] = 1;
        rays.push(v);
    }
    let mut last = vec![0; nb];
    last.extend(std::iter::repeat_n(-1, k));
    rays.push(last);

    let fiber_start = base.num_rays();
    let mut cones = Vec::new();
    for sigma in base.max_cones() {
        for omit in 0..=k {
            let mut c = sigma.clone();
            c.extend((0..=k).filter(|&j| j != omit).map(|j| fiber_start + j));
            cones.push(c);
        }
    }
    Fan::new(nb + k, rays, cones)
}

/// A fiber product fan together with its projections to the two factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProduct {
    pub fan: Fan,
    /// Lattice map to the first factor's lattice.
    pub to_first: IntMatrix,
    /// Lattice map to the second factor's lattice.
    pub to_second: IntMatrix,
}

/// Fiber product of two split-bundle morphisms `f: Y → C` and `g: Z → C`
/// onto the same one-dimensional fan.
///
/// The lattice is `N_Y ×_{N_C} N_Z` (the saturated kernel of
/// `[A_f | -A_g]`); its maximal cones are `(σ × τ) ∩ N_X` for maximal cones
/// `σ`, `τ` over the same ray of `C`.
pub fn fiber_product_fan(f: &ToricMorphism, g: &ToricMorphism) -> Result<FiberProduct> {
    if !f.target().same_fan(g.target()) {
        return Err(Error::IncompatibleLattices(
            "the two morphisms have different targets".into(),
        ));
    }
    let base = f.target();
    if base.dim() != 1 || !base.is_complete() {
        return Err(Error::IncompatibleLattices(
            "fiber products are supported over the fan of P^1 only".into(),
        ));
    }
    for (name, m) in [("first", f), ("second", g)] {
        if is_split_bundle_morphism(m).is_none() {
            return Err(Error::IncompatibleLattices(format!(
                "{name} morphism is not a split-bundle morphism"
            )));
        }
    }
    let (ny, nz) = (f.source().dim(), g.source().dim());
    let stacked = f.map().hstack(&g.map().scaled(&BigInt::from(-1)));
    let basis = kernel_basis(&stacked);
    let nx = basis.len();
    let basis_matrix = IntMatrix::from_columns(ny + nz, &basis);
    let chart = RatMatrix::from_int(&basis_matrix);

    // Scalar position of each ray image along the base ray containing it.
    let heights = |m: &ToricMorphism, ray: &[i64], base_ray: &[i64]| -> BigInt {
        let img = m.map().apply_i64(ray);
        &img[0] * BigInt::from(base_ray[0].signum())
    };
    let base_cone_of = |m: &ToricMorphism, cone: &[usize]| -> Option<usize> {
        let imgs: Vec<Vec<BigInt>> = cone
            .iter()
            .map(|&i| m.map().apply_i64(m.source().ray(i)))
            .collect();
        (0..base.max_cones().len()).find(|&c| {
            let bc = base.cone(c);
            imgs.iter().all(|y| bc.contains(&to_rational_vec(y)))
        })
    };

    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let add_ray = |v: Vec<BigInt>, rays: &mut Vec<Vec<i64>>| -> Result<usize> {
        let g = crate::exactla::matrix::content(&v);
        let v: Vec<BigInt> = v.into_iter().map(|x| x / &g).collect();
        let x = chart
            .solve(&to_rational_vec(&v))
            .expect("generator lies in the fiber product lattice");
        let x: Vec<i64> = x
            .iter()
            .map(|q| q.to_integer().to_i64())
            .collect::<Option<_>>()
            .ok_or(Error::Overflow)?;
        Ok(match rays.iter().position(|r| *r == x) {
            Some(i) => i,
            None => {
                rays.push(x);
                rays.len() - 1
            }
        })
    };

    for sigma in f.source().max_cones() {
        let Some(gs) = base_cone_of(f, sigma) else {
            return Err(Error::IncompatibleLattices("first morphism is not compatible".into()));
        };
        for tau in g.source().max_cones() {
            let Some(gt) = base_cone_of(g, tau) else {
                return Err(Error::IncompatibleLattices(
                    "second morphism is not compatible".into(),
                ));
            };
            if gs != gt {
                continue;
            }
            let base_ray = base.ray(base.max_cones()[gs][0]).to_vec();
            let alpha: Vec<BigInt> = sigma
                .iter()
                .map(|&i| heights(f, f.source().ray(i), &base_ray))
                .collect();
            let beta: Vec<BigInt> = tau
                .iter()
                .map(|&j| heights(g, g.source().ray(j), &base_ray))
                .collect();
            let mut cone = Vec::new();
            for (a, &i) in alpha.iter().zip(sigma) {
                if a.is_zero() {
                    let mut v: Vec<BigInt> = f.source().ray(i).iter().map(|&x| x.into()).collect();
                    v.extend(std::iter::repeat_n(BigInt::zero(), nz));
                    cone.push(add_ray(v, &mut rays)?);
                }
            }
            for (b, &j) in beta.iter().zip(tau) {
                if b.is_zero() {
                    let mut v = vec![BigInt::zero(); ny];
                    v.extend(g.source().ray(j).iter().map(|&x| BigInt::from(x)));
                    cone.push(add_ray(v, &mut rays)?);
                }
            }
            for (a, &i) in alpha.iter().zip(sigma) {
                for (b, &j) in beta.iter().zip(tau) {
                    if !(a.is_positive() && b.is_positive()) {
                        continue;
                    }
                    let mut v: Vec<BigInt> =
                        f.source().ray(i).iter().map(|&x| b * BigInt::from(x)).collect();
                    v.extend(g.source().ray(j).iter().map(|&x| a * BigInt::from(x)));
                    cone.push(add_ray(v, &mut rays)?);
                }
            }
            cones.push(cone);
        }
    }
    let fan = Fan::new(nx, rays, cones)?;
    let top: Vec<usize> = (0..ny).collect();
    let bottom: Vec<usize> = (ny..ny + nz).collect();
    Ok(FiberProduct {
        fan,
        to_first: basis_matrix.select_rows(&top),
        to_second: basis_matrix.select_rows(&bottom),
    })
}
