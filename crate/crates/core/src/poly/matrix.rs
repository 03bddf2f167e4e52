use super::IntPoly;

/// Square matrix of integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<Vec<IntPoly>>,
}

/// Orders up to this use Laplace expansion; larger ones use Bareiss elimination.
pub const COFACTOR_MAX_ORDER: usize = 5;

impl PolyMatrix {
    /// Panics if `rows` is not square.
    pub fn new(rows: Vec<Vec<IntPoly>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        PolyMatrix { rows }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> IntPoly) -> Self {
        PolyMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<IntPoly>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let n = self.order();
        Self::from_fn(n, |i, j| self.rows[j][i].clone())
    }

    /// Matrix with row `r` and column `c` deleted.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        PolyMatrix {
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != r)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn determinant(&self) -> IntPoly {
        if self.order() <= COFACTOR_MAX_ORDER {
            self.determinant_cofactor()
        } else {
            self.determinant_bareiss()
        }
    }

    /// Laplace expansion along the first row. The empty matrix has determinant 1.
    pub fn determinant_cofactor(&self) -> IntPoly {
        match self.order() {
            0 => IntPoly::one(),
            1 => self.rows[0][0].clone(),
            2 => {
                &(&self.rows[0][0] * &self.rows[1][1]) - &(&self.rows[0][1] * &self.rows[1][0])
            }
            n => {
                let mut acc = IntPoly::zero();
                for j in 0..n {
                    let a = &self.rows[0][j];
                    if a.is_zero() {
                        continue;
                    }
                    let term = a * &self.minor(0, j).determinant_cofactor();
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Fraction-free Gaussian elimination; every division is exact in `Z[z]`.
    pub fn determinant_bareiss(&self) -> IntPoly {
        let n = self.order();
        if n == 0 {
            return IntPoly::one();
        }
        let mut m = self.rows.clone();
        let mut negate = false;
        let mut prev = IntPoly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return IntPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }

    /// Sum of all entries of the adjugate, as a sum of signed cofactors.
    /// The 1x1 adjugate is `[1]` and the empty matrix contributes 0.
    pub fn adjugate_sum(&self) -> IntPoly {
        let n = self.order();
        if n == 0 {
            return IntPoly::zero();
        }
        let mut acc = IntPoly::zero();
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).determinant();
                acc = if (i + j) % 2 == 0 { &acc + &c } else { &acc - &c };
            }
        }
        acc
    }

    /// Same quantity via the rank-one update `det(M + J) - det(M)`, where `J`
    /// is the all-ones matrix.
    pub fn adjugate_sum_rank_one(&self) -> IntPoly {
        let n = self.order();
        if n == 0 {
            return IntPoly::zero();
        }
        let one = IntPoly::one();
        let shifted = Self::from_fn(n, |i, j| &self.rows[i][j] + &one);
        &shifted.determinant_bareiss() - &self.determinant_bareiss()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn aaa_aba() -> PolyMatrix {
        PolyMatrix::new(vec![vec![p(&[1, 1, 1]), p(&[1])], vec![p(&[1]), p(&[1, 0, 1])]])
    }

    #[test]
    fn determinant_and_adjugate_of_small_matrices() {
        let m = aaa_aba();
        assert_eq!(m.determinant(), p(&[0, 1, 2, 1, 1]));
        assert_eq!(m.adjugate_sum(), p(&[0, 1, 2]));
        assert_eq!(m.adjugate_sum_rank_one(), p(&[0, 1, 2]));

        let one = PolyMatrix::new(vec![vec![p(&[3, 0, 1])]]);
        assert_eq!(one.determinant(), p(&[3, 0, 1]));
        assert_eq!(one.adjugate_sum(), IntPoly::one());
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let m = PolyMatrix::new(vec![
            vec![p(&[]), p(&[1]), p(&[0, 1])],
            vec![p(&[1]), p(&[]), p(&[2])],
            vec![p(&[0, 1]), p(&[1, 1]), p(&[])],
        ]);
        assert_eq!(m.determinant_bareiss(), m.determinant_cofactor());
    }
}
