//! Smith and Hermite normal forms, saturated kernels and cokernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `left · A · right = diagonal`, with `left` and `right` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows().min(self.diagonal.cols());
        (0..k)
            .map(|i| self.diagonal.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Free rank and torsion coefficients of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl CokernelInvariants {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Position of a nonzero entry of minimal absolute value in the lower-right
/// block starting at `(t, t)`. `(t, t)` wins ties.
fn min_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    if !d.get(t, t).is_zero() {
        best = Some(((t, t), d.get(t, t).abs()));
    }
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form with transforms. Pivots are chosen by minimal absolute
/// value to limit entry growth.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_pivot(&d, t) else {
                return SmithDecomposition {
                    left,
                    diagonal: d,
                    right,
                };
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }

            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot))
            });
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row_multiple(t, i, &one);
                left.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    SmithDecomposition {
        left,
        diagonal: d,
        right,
    }
}

/// Row-style Hermite normal form of a matrix. Zero rows are dropped; pivots
/// are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot_row = (r..m)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by_key(|&i| h.get(i, col).abs());
            let Some(p) = pivot_row else {
                break;
            };
            h.swap_rows(r, p);
            let pivot = h.get(r, col).clone();
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = -h.get(i, col).div_floor(&pivot);
                h.add_row_multiple(i, r, &q);
                done &= h.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, col).is_zero() {
            continue;
        }
        if h.get(r, col).is_negative() {
            h.negate_row(r);
        }
        let pivot = h.get(r, col).clone();
        for i in 0..r {
            let q = -h.get(i, col).div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    h.select_rows(&keep)
}

/// Basis of the saturated integer kernel `{v ∈ Z^cols : A v = 0}`, in
/// Hermite normal form (so the output is canonical).
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let n = a.cols();
    if r == n {
        return Vec::new();
    }
    // Trailing columns of the right transform span ker(D), hence V·ker(D) = ker(A);
    // they are part of a unimodular matrix, so the span is saturated.
    let cols: Vec<usize> = (r..n).collect();
    let basis = snf.right.select_columns(&cols).transpose();
    hermite_normal_form(&basis).row_vectors()
}

/// Cokernel `Z^rows / A·Z^cols` as free rank plus torsion coefficients.
pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let factors = smith_normal_form(a).invariant_factors();
    CokernelInvariants {
        free_rank: a.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Whether the rows of `a` span a saturated sublattice (all invariant
/// factors equal to one).
pub fn rows_saturated(a: &IntMatrix) -> bool {
    smith_normal_form(a)
        .invariant_factors()
        .iter()
        .all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::matrix::to_bigint_vec;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows[0].len(), rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        to_bigint_vec(v)
    }

    fn check_decomposition(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.left * a) * &s.right, s.diagonal);
        assert!(s.left.determinant().abs().is_one());
        assert!(s.right.determinant().abs().is_one());
        for i in 0..s.diagonal.rows() {
            for j in 0..s.diagonal.cols() {
                if i != j {
                    assert!(s.diagonal.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check_decomposition(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, IntMatrix::identity(3));
        assert_eq!(s.invariant_factors(), ints(&[1, 1, 1]));
    }

    #[test]
    fn two_by_two_example() {
        let s = check_decomposition(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.invariant_factors(), ints(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let s = check_decomposition(&IntMatrix::zeros(2, 3));
        assert!(s.diagonal.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) is not in Smith form; the answer is diag(1, 6).
        let s = check_decomposition(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 6]));
    }

    #[test]
    fn kernel_identity_is_empty() {
        assert!(kernel_basis(&IntMatrix::identity(4)).is_empty());
    }

    #[test]
    fn kernel_of_p2_rays() {
        let k = kernel_basis(&m(&[&[1, 0, -1], &[0, 1, -1]]));
        assert_eq!(k, vec![ints(&[1, 1, 1])]);
    }

    #[test]
    fn kernel_of_hirzebruch_rays() {
        for a in 0..4 {
            let k = kernel_basis(&m(&[&[1, 0, -1, 0], &[0, 1, a, -1]]));
            assert_eq!(k, vec![ints(&[1, 0, 1, a]), ints(&[0, 1, 0, 1])]);
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // Rational kernel is spanned by (1, 1) but the integer
        // multiple (2, 2) must not appear.
        let k = kernel_basis(&m(&[&[2, -2]]));
        assert_eq!(k, vec![ints(&[1, 1])]);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel_invariants(&IntMatrix::identity(3)),
            CokernelInvariants { free_rank: 0, torsion: vec![] }
        );
        assert_eq!(
            cokernel_invariants(&m(&[&[2]])),
            CokernelInvariants { free_rank: 0, torsion: ints(&[2]) }
        );
        let p2 = m(&[&[1, 0, -1], &[0, 1, -1]]).transpose();
        assert_eq!(
            cokernel_invariants(&p2),
            CokernelInvariants { free_rank: 1, torsion: vec![] }
        );
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = m(&[&[3, 1, 2], &[1, 0, 1]]);
        let b = m(&[&[4, 1, 3], &[-1, 0, -1]]);
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
        assert_eq!(hermite_normal_form(&a), m(&[&[1, 0, 1], &[0, 1, -1]]));
    }
}
