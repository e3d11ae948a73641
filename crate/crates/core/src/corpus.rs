//! Deterministic generators of fans and morphisms for property runs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactla::IntMatrix;
use crate::fan::{
    combinations, gcd_i64, hirzebruch_fan, product_fan, projective_space_fan,
    projectivized_split_bundle_fan, star_subdivision, Fan,
};
use crate::morphism::ToricMorphism;

/// Random element of `GL(n, Z)`: a signed permutation followed by
/// `steps` elementary row operations with multipliers in `[-2, 2]`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        m.set(i, j, BigInt::from(s));
    }
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(-2i64..=2);
        if k != 0 {
            m.add_row_multiple(i, j, &BigInt::from(k));
        }
    }
    m
}

/// Star subdivision at the sum of the generators of a random face (of
/// dimension at least two) of a random maximal cone. On a smooth fan this
/// is the blowup of an orbit closure and stays smooth.
pub fn random_blowup<R: Rng>(rng: &mut R, f: &Fan) -> Fan {
    let c = rng.gen_range(0..f.max_cones().len());
    let cone = &f.max_cones()[c];
    let size = rng.gen_range(2..=cone.len().max(2)).min(cone.len());
    let mut face = cone.clone();
    face.shuffle(rng);
    face.truncate(size);
    let mut v = vec![0i64; f.dim()];
    for &r in &face {
        for (a, b) in v.iter_mut().zip(f.ray(r)) {
            *a += b;
        }
    }
    let g = gcd_i64(&v);
    let v: Vec<i64> = v.into_iter().map(|x| x / g).collect();
    star_subdivision(f, &v).expect("sum of a face lies in the support")
}

pub fn blowup_chain<R: Rng>(rng: &mut R, f: &Fan, steps: usize) -> Vec<Fan> {
    let mut out = vec![f.clone()];
    for _ in 0..steps {
        let next = random_blowup(rng, out.last().unwrap());
        out.push(next);
    }
    out
}

/// Compares primitive plane vectors by angle in `[0, 2π)`.
fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let half = |v: &[i64]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

/// Complete two-dimensional fan whose rays are the given directions, taken
/// in angular order. `None` when two consecutive rays are at least `π`
/// apart.
pub fn surface_fan(mut rays: Vec<Vec<i64>>) -> Option<Fan> {
    rays.sort_by(|a, b| angle_cmp(a, b));
    rays.dedup();
    let k = rays.len();
    if k < 3 {
        return None;
    }
    for i in 0..k {
        let (a, b) = (&rays[i], &rays[(i + 1) % k]);
        if a[0] * b[1] - a[1] * b[0] <= 0 {
            return None;
        }
    }
    let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    Fan::new(2, rays, cones).ok()
}

/// Random complete surface fan with `k` primitive rays of max-norm at
/// most `bound`.
pub fn random_surface_fan<R: Rng>(rng: &mut R, k: usize, bound: i64) -> Fan {
    loop {
        let mut rays = Vec::with_capacity(k);
        while rays.len() < k {
            let v = vec![rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)];
            if v != [0, 0] && gcd_i64(&v) == 1 && !rays.contains(&v) {
                rays.push(v);
            }
        }
        if let Some(f) = surface_fan(rays) {
            return f;
        }
    }
}

/// Image of a fan under a non-unimodular injective map, rays primitivised.
/// The result is again a fan (the map is a linear isomorphism over Q), in
/// general singular.
pub fn sheared_fan(f: &Fan, map: &IntMatrix) -> Fan {
    f.transformed(map).expect("invertible map")
}

/// Random singular complete fan of dimension 2 or 3.
pub fn random_singular_fan<R: Rng>(rng: &mut R, dim: usize) -> Fan {
    loop {
        let f = match dim {
            2 => {
                let k = rng.gen_range(3..=6);
                random_surface_fan(rng, k, 4)
            }
            3 => {
                let steps = rng.gen_range(0..=2);
                let base = blowup_chain(rng, &projective_space_fan(3).unwrap(), steps)
                    .pop()
                    .unwrap();
                let mut t = random_unimodular(rng, 3, 4);
                let d = rng.gen_range(2i64..=3);
                let row = rng.gen_range(0..3);
                for j in 0..3 {
                    let x = t.get(row, j) * d;
                    t.set(row, j, x);
                }
                sheared_fan(&base, &t)
            }
            _ => panic!("singular fans are generated in dimension 2 or 3"),
        };
        if !f.is_smooth() {
            return f;
        }
    }
}

/// Fan of the weighted projective plane `P(1, q1, q2)`: rays `u_0 = -(q1, q2)`,
/// `u_1 = e_1`, `u_2 = e_2`, so that `u_0 + q1 u_1 + q2 u_2 = 0`.
pub fn weighted_projective_plane(q: [i64; 3]) -> Fan {
    assert_eq!(q[0], 1, "first weight must be 1");
    let rays = vec![vec![-q[1], -q[2]], vec![1, 0], vec![0, 1]];
    Fan::new(2, rays, combinations(3, 2)).unwrap()
}

/// Smooth complete fans used for the sequence checks: projective spaces,
/// Hirzebruch surfaces, products, blowup chains and split bundles.
pub fn smooth_complete_corpus<R: Rng>(rng: &mut R) -> Vec<(String, Fan)> {
    let mut out = Vec::new();
    let p = |n| projective_space_fan(n).unwrap();
    for n in 1..=4 {
        out.push((format!("P^{n}"), p(n)));
    }
    for a in 0..=3 {
        out.push((format!("F_{a}"), hirzebruch_fan(a).unwrap()));
    }
    out.push(("P^1 x P^1".into(), product_fan(&p(1), &p(1)).unwrap()));
    out.push(("P^1 x P^2".into(), product_fan(&p(1), &p(2)).unwrap()));
    out.push(("P^2 x P^2".into(), product_fan(&p(2), &p(2)).unwrap()));
    out.push(("P^1 x P^3".into(), product_fan(&p(1), &p(3)).unwrap()));
    let p1p1 = product_fan(&p(1), &p(1)).unwrap();
    out.push(("P^1 x P^1 x P^1".into(), product_fan(&p1p1, &p(1)).unwrap()));
    out.push(("F_1 x P^1".into(), product_fan(&hirzebruch_fan(1).unwrap(), &p(1)).unwrap()));
    out.push(("F_2 x F_1".into(), product_fan(&hirzebruch_fan(2).unwrap(), &hirzebruch_fan(1).unwrap()).unwrap()));
    for (base, n) in [("P^2", 2usize), ("P^3", 3), ("P^2", 2), ("P^3", 3), ("P^4", 4)] {
        let steps = rng.gen_range(1..=5);
        let chain = blowup_chain(rng, &p(n), steps);
        out.push((format!("{base} blown up {steps} times"), chain.last().unwrap().clone()));
    }
    for steps in 1..=5 {
        let chain = blowup_chain(rng, &hirzebruch_fan(1).unwrap(), steps);
        out.push((format!("F_1 blown up {steps} times"), chain.last().unwrap().clone()));
    }
    for twists in [vec![vec![0, 1]], vec![vec![0, 2], vec![0, 1]], vec![vec![0, 3], vec![0, 0]]] {
        let f = projectivized_split_bundle_fan(&p(1), &twists).unwrap();
        out.push((format!("P(O + ...) over P^1, twists {twists:?}"), f));
    }
    for twists in [vec![vec![0, 0, 1]], vec![vec![0, 1, 1]], vec![vec![0, 0, 2], vec![0, 1, 0]]] {
        let f = projectivized_split_bundle_fan(&p(2), &twists).unwrap();
        out.push((format!("P(O + ...) over P^2, twists {twists:?}"), f));
    }
    out
}

/// Blowup chain on `P^n` followed by scaling by `k`: a generically finite
/// surjective morphism of degree `k^n` composed with a birational one.
pub fn random_finite_morphism<R: Rng>(rng: &mut R, max_dim: usize) -> ToricMorphism {
    let n = rng.gen_range(1..=max_dim);
    let pn = projective_space_fan(n).unwrap();
    let steps = if n == 1 { 0 } else { rng.gen_range(0..=5) };
    let source = blowup_chain(rng, &pn, steps).pop().unwrap();
    let k = rng.gen_range(1i64..=3);
    let map = IntMatrix::identity(n).scaled(&BigInt::from(k));
    ToricMorphism::new(source, pn, map).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::validate_fan;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for _ in 0..20 {
                let t = random_unimodular(&mut rng, n, 8);
                assert_eq!(t.determinant().magnitude(), &1u32.into());
            }
        }
    }

    #[test]
    fn surface_fans_are_valid_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let f = random_surface_fan(&mut rng, 5, 3);
            assert!(validate_fan(&f).is_valid());
            assert!(f.is_complete());
        }
    }

    #[test]
    fn blowups_stay_smooth() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chain = blowup_chain(&mut rng, &projective_space_fan(3).unwrap(), 4);
        for (i, f) in chain.iter().enumerate() {
            assert_eq!(f.num_rays(), 4 + i);
            assert!(f.is_smooth());
        }
    }

    #[test]
    fn singular_fans_are_singular() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [2, 3] {
            let f = random_singular_fan(&mut rng, dim);
            assert!(!f.is_smooth());
            assert!(validate_fan(&f).is_valid());
        }
    }

    #[test]
    fn weighted_plane() {
        let f = weighted_projective_plane([1, 1, 2]);
        assert!(!f.is_smooth());
        assert!(f.is_complete());
    }
}
