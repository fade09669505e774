//! Exact null spaces of rational matrices by Gaussian elimination.

use num_traits::{One, Zero};

use super::Rational;

/// Reduce `rows` to reduced row echelon form in place and return the pivot
/// column indices in order.
fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].clone().recip();
        for v in rows[r][c..].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = rows[r][j].clone() * f.clone();
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the null space of the matrix whose rows are `rows` (each of
/// length `ncols`). One basis vector per free column, each with a 1 in its
/// free position.
pub fn kernel_basis(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    for row in &rows {
        assert_eq!(row.len(), ncols, "ragged matrix row");
    }
    let pivots = rref(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_int;

    fn m(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter()
            .map(|row| row.iter().map(|&c| rat_int(c)).collect())
            .collect()
    }

    fn mat_vec(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn full_rank_square_matrix_has_trivial_kernel() {
        let rows = m(&[&[1, 2], &[3, 4]]);
        assert!(kernel_basis(rows, 2).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let rows = m(&[&[0, 0, 0]]);
        let basis = kernel_basis(rows, 3);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn one_relation_drops_one_dimension() {
        // x + y + z = 0
        let rows = m(&[&[1, 1, 1]]);
        let basis = kernel_basis(rows.clone(), 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(mat_vec(&rows, v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn dependent_rows_do_not_shrink_the_kernel() {
        let rows = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let basis = kernel_basis(rows.clone(), 3);
        assert_eq!(basis.len(), 1);
        assert!(mat_vec(&rows, &basis[0]).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn no_rows_means_identity_kernel() {
        let basis = kernel_basis(Vec::new(), 2);
        assert_eq!(basis.len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn kernel_vectors_annihilate_and_rank_nullity_holds(
                data in proptest::collection::vec(
                    proptest::collection::vec(-5i64..=5, 4),
                    1..5,
                ),
            ) {
                let rows: Vec<Vec<Rational>> = data
                    .iter()
                    .map(|r| r.iter().map(|&c| rat_int(c)).collect())
                    .collect();
                let basis = kernel_basis(rows.clone(), 4);
                for v in &basis {
                    prop_assert!(mat_vec(&rows, v).iter().all(|c| c.is_zero()));
                }
                let mut reduced = rows.clone();
                let rank = rref(&mut reduced, 4).len();
                prop_assert_eq!(rank + basis.len(), 4);
            }
        }
    }
}
