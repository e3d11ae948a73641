//! Divisor classes, curve classes and the two exact sequences attached to
//! a fan:
//!
//! ```text
//! 0 → M → Div_T → Cl → 0
//! 0 → N_1 → ⊕_ρ Z[ρ] → N → 0
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{
    cokernel_invariants, kernel_basis, smith_normal_form, CokernelInvariants, IntMatrix,
};
use crate::fan::Fan;

/// `n × #rays` matrix with the ray generators as columns: the map
/// `⊕_ρ Z[ρ] → N`.
pub fn ray_matrix(f: &Fan) -> IntMatrix {
    f.ray_matrix()
}

/// `M → Div_T`, `m ↦ (⟨m, u_ρ⟩)_ρ`: the transpose of the ray matrix.
pub fn character_map(f: &Fan) -> IntMatrix {
    f.ray_matrix().transpose()
}

/// Class group as the cokernel of `M → Div_T`.
pub fn divisor_class_group(f: &Fan) -> Result<CokernelInvariants> {
    let m = character_map(f);
    if m.rank() != f.dim() {
        return Err(Error::NotLeftExact);
    }
    Ok(cokernel_invariants(&m))
}

/// A curve class recorded by its intersection numbers with the `D_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveClass {
    pub intersections: Vec<BigInt>,
}

/// Saturated basis of the relations among the rays (the kernel of the ray
/// matrix). Each relation `Σ c_ρ u_ρ = 0` is the curve class with `Z·D_ρ = c_ρ`.
pub fn curve_class_space(f: &Fan) -> Vec<CurveClass> {
    kernel_basis(&f.ray_matrix())
        .into_iter()
        .map(|intersections| CurveClass { intersections })
        .collect()
}

/// Rank of the Picard group: the dimension of the space of `T`-Cartier
/// divisors (ray values that are linear on every maximal cone) minus `n`.
pub fn picard_rank(f: &Fan) -> Result<usize> {
    let n = f.dim();
    if f.ray_matrix().rank() != n {
        return Err(Error::NotLeftExact);
    }
    // a|σ must lie in the image of G_σᵀ, i.e. be killed by every linear
    // relation among the generators of σ.
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for cone in f.cones() {
        for rel in kernel_basis(&cone.generator_matrix()) {
            let mut row = vec![BigInt::zero(); f.num_rays()];
            for (c, &r) in rel.iter().zip(&cone.ray_indices) {
                row[r] += c;
            }
            rows.push(row);
        }
    }
    let constrained = if rows.is_empty() {
        0
    } else {
        IntMatrix::from_rows(f.num_rays(), &rows).rank()
    };
    Ok(f.num_rays() - constrained - n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Inexact { stage: String },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub n: usize,
    pub ray_count: usize,
    pub class_free_rank: usize,
    pub class_torsion: Vec<BigInt>,
    pub curve_space_rank: usize,
    pub exact_divisor_seq: Exactness,
    pub exact_dual_seq: Exactness,
}

impl SequenceReport {
    pub fn is_exact(&self) -> bool {
        self.exact_divisor_seq.is_exact() && self.exact_dual_seq.is_exact()
    }
}

/// Builds both sequences and checks them stage by stage. Failures are
/// recorded in the verdicts, never raised.
pub fn verify_sequences(f: &Fan) -> SequenceReport {
    let n = f.dim();
    let ray_count = f.num_rays();
    let rays = f.ray_matrix();
    let chars = rays.transpose();
    let snf = smith_normal_form(&chars);
    let factors = snf.invariant_factors();
    let rank = factors.len();
    let class_free_rank = ray_count - rank;
    let class_torsion: Vec<BigInt> = factors.iter().filter(|d| !d.is_one()).cloned().collect();

    let exact_divisor_seq = if rank != n {
        Exactness::Inexact {
            stage: "M → Div_T is not injective".into(),
        }
    } else if !quotient_kills_characters(&snf.left, &chars, &factors) {
        Exactness::Inexact {
            stage: "M → Div_T → Cl is not zero".into(),
        }
    } else if rank + class_free_rank != ray_count {
        Exactness::Inexact {
            stage: "ranks of M and Cl do not add up to #rays".into(),
        }
    } else {
        Exactness::Exact
    };

    let curves = kernel_basis(&rays);
    let curve_space_rank = curves.len();
    let exact_dual_seq = if rays.rank() != n {
        Exactness::Inexact {
            stage: "⊕ Z[ρ] → N is not surjective over Q".into(),
        }
    } else if curves
        .iter()
        .any(|z| rays.apply(z).iter().any(|x| !x.is_zero()))
    {
        Exactness::Inexact {
            stage: "ray matrix does not vanish on N_1".into(),
        }
    } else if curve_space_rank + n != ray_count {
        Exactness::Inexact {
            stage: "ranks of N_1 and N do not add up to #rays".into(),
        }
    } else {
        Exactness::Exact
    };

    SequenceReport {
        n,
        ray_count,
        class_free_rank,
        class_torsion,
        curve_space_rank,
        exact_divisor_seq,
        exact_dual_seq,
    }
}

/// With `U·A·V = D`, the quotient map `Z^rows → coker A` is `x ↦ U·x` taken
/// modulo `d_i` in the first `rank` coordinates. Checks it vanishes on `A`.
fn quotient_kills_characters(u: &IntMatrix, a: &IntMatrix, factors: &[BigInt]) -> bool {
    let ua = u * a;
    (0..ua.rows()).all(|i| {
        ua.row(i).iter().all(|x| match factors.get(i) {
            Some(d) => x.is_multiple_of(d),
            None => x.is_zero(),
        })
    })
}

/// An element of the class group: free coordinates followed by torsion
/// coordinates (each reduced modulo its invariant factor).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

/// Class of the divisor `Σ a_ρ D_ρ`.
///
/// Free coordinates are the intersection numbers with the curve basis of
/// [`curve_class_space`]; torsion coordinates come from the Smith form of
/// the character map.
pub fn divisor_class(f: &Fan, a: &[BigInt]) -> Result<ClassElement> {
    let chars = character_map(f);
    if chars.rank() != f.dim() {
        return Err(Error::NotLeftExact);
    }
    let free = curve_class_space(f)
        .iter()
        .map(|z| z.intersections.iter().zip(a).map(|(c, x)| c * x).sum())
        .collect();
    let snf = smith_normal_form(&chars);
    let ua = snf.left.apply(a);
    let torsion = snf
        .invariant_factors()
        .iter()
        .zip(&ua)
        .filter(|(d, _)| !d.is_one())
        .map(|(d, x)| x.mod_floor(d))
        .collect();
    Ok(ClassElement { free, torsion })
}

/// The classes `[D_ρ]`, one per ray, of the line bundles into which the
/// potential sheaf of a smooth complete toric variety splits. Their number
/// is `n + ρ(X)`.
pub fn euler_jaczewski_summands(f: &Fan) -> Result<Vec<ClassElement>> {
    let mut missing = Vec::new();
    if !f.is_smooth() {
        missing.push("not smooth");
    }
    if !f.is_complete() {
        missing.push("not complete");
    }
    if !missing.is_empty() {
        return Err(Error::JaczewskiHypotheses(missing.join(", ")));
    }
    (0..f.num_rays())
        .map(|r| {
            let mut e = vec![BigInt::zero(); f.num_rays()];
            e[r] = BigInt::one();
            divisor_class(f, &e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch_fan, product_fan, projective_space_fan};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
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
    fn class_groups() {
        let g = divisor_class_group(&projective_space_fan(2).unwrap()).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
        let g = divisor_class_group(&hirzebruch_fan(3).unwrap()).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (2, 0));
        let g = divisor_class_group(&weighted_p112()).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
    }

    #[test]
    fn class_group_with_torsion() {
        // The 2x2 minors of the character map have gcd 2: class group Z ⊕ Z/2.
        let f = Fan::new(
            2,
            vec![vec![1, 0], vec![-1, 2], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let g = divisor_class_group(&f).unwrap();
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, ints(&[2]));
    }

    #[test]
    fn rays_not_spanning() {
        let f = Fan::new(2, vec![vec![1, 0]], vec![vec![0]]).unwrap();
        assert_eq!(divisor_class_group(&f), Err(Error::NotLeftExact));
        let r = verify_sequences(&f);
        assert!(!r.exact_divisor_seq.is_exact());
    }

    #[test]
    fn curve_classes() {
        let c = curve_class_space(&projective_space_fan(2).unwrap());
        assert_eq!(c, vec![CurveClass { intersections: ints(&[1, 1, 1]) }]);
        let p1 = projective_space_fan(1).unwrap();
        assert_eq!(curve_class_space(&product_fan(&p1, &p1).unwrap()).len(), 2);
        let affine = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(curve_class_space(&affine).is_empty());
    }

    #[test]
    fn sequences_of_standard_fans() {
        let r = verify_sequences(&projective_space_fan(4).unwrap());
        assert!(r.is_exact());
        assert_eq!((r.ray_count, r.n, r.class_free_rank), (5, 4, 1));
        let r = verify_sequences(&hirzebruch_fan(2).unwrap());
        assert!(r.is_exact());
        assert_eq!((r.ray_count, r.class_free_rank, r.curve_space_rank), (4, 2, 2));
    }

    #[test]
    fn picard_ranks() {
        assert_eq!(picard_rank(&projective_space_fan(3).unwrap()), Ok(1));
        assert_eq!(picard_rank(&hirzebruch_fan(1).unwrap()), Ok(2));
        assert_eq!(picard_rank(&weighted_p112()), Ok(1));
    }

    #[test]
    fn picard_rank_of_a_non_simplicial_fan() {
        // Fan over the faces of a cube: six square cones. Cartier divisors
        // are linear on each square, which leaves rank 1.
        let mut rays = Vec::new();
        for x in [-1i64, 1] {
            for y in [-1i64, 1] {
                for z in [-1i64, 1] {
                    rays.push(vec![x, y, z]);
                }
            }
        }
        let mut cones = Vec::new();
        for axis in 0..3 {
            for sign in [-1i64, 1] {
                cones.push((0..8).filter(|&i| rays[i][axis] == sign).collect::<Vec<usize>>());
            }
        }
        let f = Fan::new(3, rays, cones).unwrap();
        assert_eq!(picard_rank(&f), Ok(1));
        assert_eq!(divisor_class_group(&f).unwrap().free_rank, 5);
    }

    #[test]
    fn summands() {
        let s = euler_jaczewski_summands(&projective_space_fan(2).unwrap()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|c| c.free == ints(&[1]) && c.torsion.is_empty()));

        let p1 = projective_space_fan(1).unwrap();
        let q = product_fan(&p1, &p1).unwrap();
        let s = euler_jaczewski_summands(&q).unwrap();
        let free: Vec<Vec<BigInt>> = s.into_iter().map(|c| c.free).collect();
        assert_eq!(free, vec![ints(&[1, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[0, 1])]);

        assert!(matches!(
            euler_jaczewski_summands(&weighted_p112()),
            Err(Error::JaczewskiHypotheses(_))
        ));
    }

    #[test]
    fn summands_add_up_to_the_boundary_class() {
        let f = hirzebruch_fan(2).unwrap();
        let s = euler_jaczewski_summands(&f).unwrap();
        let ones = vec![BigInt::one(); f.num_rays()];
        let total = divisor_class(&f, &ones).unwrap();
        let mut sum = vec![BigInt::zero(); total.free.len()];
        for c in &s {
            for (a, b) in sum.iter_mut().zip(&c.free) {
                *a += b;
            }
        }
        assert_eq!(sum, total.free);
    }
}
