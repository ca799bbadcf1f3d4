use crate::skew::{SkewMatrix, SkewPoly};

/// A diagonal form `U F W = D` reached by elementary row and column
/// operations over the skew Laurent ring.
///
/// Only the column transform `W` is kept: it carries kernel points of `D`
/// to kernel points of `F`. The nonzero diagonal entries come first.
#[derive(Debug, Clone)]
pub struct OreDiagonal {
    pub diagonal: Vec<SkewPoly>,
    pub column_transform: SkewMatrix,
    pub rank: usize,
}

impl OreDiagonal {
    /// Sum of the spans of the nonzero diagonal entries, i.e. `log_p |pi_0|`.
    pub fn etale_log_size(&self) -> u64 {
        self.diagonal.iter().filter_map(SkewPoly::span).sum()
    }
}

fn min_span_entry(a: &SkewMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if let Some(s) = a.get(i, j).span() {
                if best.is_none_or(|(b, _, _)| s < b) {
                    best = Some((s, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Diagonalizes `F`. Each pivot is an entry of least span (`M - m`), which
/// strictly drops whenever a division leaves a remainder, so this ends.
pub fn ore_diagonalize(f: &SkewMatrix) -> OreDiagonal {
    let field = f.field().clone();
    let mut a = f.clone();
    let mut w = SkewMatrix::identity(&field, f.cols());
    let steps = f.rows().min(f.cols());
    let mut rank = 0;
    for t in 0..steps {
        loop {
            let row_clear = (t + 1..a.cols()).all(|j| a.get(t, j).is_zero());
            let col_clear = (t + 1..a.rows()).all(|i| a.get(i, t).is_zero());
            if !a.get(t, t).is_zero() && row_clear && col_clear {
                break;
            }
            let Some((i, j)) = min_span_entry(&a, t) else {
                break;
            };
            a.swap_rows(t, i);
            a.swap_cols(t, j);
            w.swap_cols(t, j);
            let pivot = a.get(t, t).clone();
            // columns: a(t, j) = pivot * q + r, then col_j -= col_t * q
            for j in t + 1..a.cols() {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, _) = a.get(t, j).right_divrem(&pivot);
                for i in 0..a.rows() {
                    let v = a.get(i, j) - &(a.get(i, t) * &q);
                    a.set(i, j, v);
                }
                for i in 0..w.rows() {
                    let v = w.get(i, j) - &(w.get(i, t) * &q);
                    w.set(i, j, v);
                }
            }
            // rows: a(i, t) = q * pivot + r, then row_i -= q * row_t
            for i in t + 1..a.rows() {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, _) = a.get(i, t).left_divrem(&pivot);
                for j in 0..a.cols() {
                    let v = a.get(i, j) - &(&q * a.get(t, j));
                    a.set(i, j, v);
                }
            }
        }
        if a.get(t, t).is_zero() {
            break;
        }
        rank += 1;
    }
    let diagonal = (0..steps).map(|t| a.get(t, t).clone()).collect();
    OreDiagonal { diagonal, column_transform: w, rank }
}

/// Rank of `F` over the skew field of fractions.
pub fn ore_rank(f: &SkewMatrix) -> usize {
    ore_diagonalize(f).rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::skew::parse_matrix;

    #[test]
    fn rank_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(ore_rank(&parse_matrix(&f3, "[F - 1, 0; 0, F + 1]").unwrap()), 2);
        assert_eq!(ore_rank(&SkewMatrix::zeros(&f3, 2, 3)), 0);
        assert_eq!(ore_rank(&parse_matrix(&f3, "[F, F^2; 1, F]").unwrap()), 1);
    }

    #[test]
    fn transform_kills_trailing_columns() {
        let f9 = Field::standard(3, 2).unwrap();
        let m = parse_matrix(&f9, "[F, F^2, (t)*F^-1; 1, F, F^-1 + 1]").unwrap();
        let od = ore_diagonalize(&m);
        assert_eq!(od.rank, 2);
        let fw = m.mul(&od.column_transform);
        for i in 0..fw.rows() {
            assert!(fw.get(i, 2).is_zero());
        }
    }

    #[test]
    fn spans_are_preserved_for_diagonal_input() {
        let f2 = Field::prime(2).unwrap();
        let m = parse_matrix(&f2, "[F^2 + 1, 0; 0, F + 1]").unwrap();
        let od = ore_diagonalize(&m);
        assert_eq!(od.etale_log_size(), 3);
    }
}
