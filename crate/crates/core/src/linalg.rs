//! Dense exact linear algebra over a [`Field`].

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r][c..].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = field.sub(x, &field.mul(&factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{v : A v = 0}` of a matrix with `ncols` columns.
pub fn nullspace<F: Field>(field: &F, a: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut rows: Vec<Vec<F::Elem>> = a.to_vec();
    let pivots = rref(field, &mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(&rows[r][free]);
        }
        basis.push(v);
    }
    basis
}

pub fn rank<F: Field>(field: &F, a: &[Vec<F::Elem>], ncols: usize) -> usize {
    let mut rows = a.to_vec();
    rref(field, &mut rows, ncols).len()
}

pub fn mat_vec<F: Field>(field: &F, a: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|row| dot(field, row, v)).collect()
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

/// Square matrix used for linear coordinate changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMatrix<F: Field> {
    rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> LinearMatrix<F> {
    pub fn from_rows(_field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(Self { rows })
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(field: &F, cols: &[Vec<F::Elem>]) -> Result<Self> {
        let n = cols.len();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| field.zero())).collect())
            .collect();
        if let Some(bad) = cols.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(Self { rows })
    }

    /// Like [`LinearMatrix::from_rows`] but rejects singular input.
    pub fn coordinate_change(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = Self::from_rows(field, rows)?;
        if !m.is_invertible(field) {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self::permutation(field, &(0..n).collect::<Vec<_>>())
    }

    /// `(M x)_i = x_{perm[i]}`.
    pub fn permutation(field: &F, perm: &[usize]) -> Self {
        let n = perm.len();
        let rows = perm
            .iter()
            .map(|&j| {
                let mut r = vec![field.zero(); n];
                r[j] = field.one();
                r
            })
            .collect();
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.rows[i][j]
    }

    pub fn apply(&self, field: &F, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(mat_vec(field, &self.rows, v))
    }

    pub fn mul(&self, field: &F, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(field.zero(), |acc, k| {
                            field.add(&acc, &field.mul(&self.rows[i][k], &other.rows[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { rows })
    }

    pub fn is_invertible(&self, field: &F) -> bool {
        rank(field, &self.rows, self.dim()) == self.dim()
    }

    pub fn inverse(&self, field: &F) -> Result<Self> {
        let n = self.dim();
        let mut aug: Vec<Vec<F::Elem>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
                row
            })
            .collect();
        let pivots = rref(field, &mut aug, n);
        if pivots.len() != n {
            return Err(Error::SingularMatrix);
        }
        Ok(Self {
            rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    pub fn determinant(&self, field: &F) -> F::Elem {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut det = field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !field.is_zero(&a[i][c])) else {
                return field.zero();
            };
            if p != c {
                a.swap(p, c);
                det = field.neg(&det);
            }
            det = field.mul(&det, &a[c][c]);
            let inv = field.inv(&a[c][c]).expect("nonzero pivot");
            for i in c + 1..n {
                if field.is_zero(&a[i][c]) {
                    continue;
                }
                let factor = field.mul(&a[i][c], &inv);
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(f: &Rationals, rows: &[&[i64]]) -> Vec<Vec<num_rational::BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn nullspace_small_cases() {
        let f = Rationals;
        let id = LinearMatrix::identity(&f, 3);
        assert!(nullspace(&f, id.rows(), 3).is_empty());
        let zero = ints(&f, &[&[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(nullspace(&f, &zero, 4).len(), 4);
        let ns = nullspace(&f, &ints(&f, &[&[1, 1]]), 2);
        assert_eq!(ns, ints(&f, &[&[-1, 1]]));
    }

    #[test]
    fn random_kernels_are_exact() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..50 {
            let (m, n) = (1 + trial % 7, 1 + (trial * 3) % 9);
            let a: Vec<Vec<u64>> = (0..m)
                .map(|_| (0..n).map(|_| f.random(&mut rng) % 4).collect())
                .collect();
            let ns = nullspace(&f, &a, n);
            assert_eq!(ns.len(), n - rank(&f, &a, n));
            for v in &ns {
                assert!(mat_vec(&f, &a, v).iter().all(|x| *x == 0));
            }
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let f = Rationals;
        let m = LinearMatrix::from_rows(&f, ints(&f, &[&[2, 1], &[7, 4]])).unwrap();
        assert_eq!(m.determinant(&f), f.one());
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv).unwrap(), LinearMatrix::identity(&f, 2));
        let s = LinearMatrix::from_rows(&f, ints(&f, &[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(s.inverse(&f), Err(Error::SingularMatrix));
        assert!(LinearMatrix::coordinate_change(&f, s.rows().to_vec()).is_err());
        assert!(LinearMatrix::from_rows(&f, ints(&f, &[&[1, 2]])).is_err());
    }

    #[test]
    fn permutation_matrix() {
        let f = Rationals;
        let p = LinearMatrix::permutation(&f, &[2, 0, 1]);
        let v = ints(&f, &[&[5, 6, 7]]).remove(0);
        assert_eq!(p.apply(&f, &v).unwrap(), ints(&f, &[&[7, 5, 6]]).remove(0));
    }
}
