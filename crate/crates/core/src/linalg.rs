//! Dense matrices and exact Gaussian elimination over any [`Field`].

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::{ExtElem, Fq};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type MatrixFq = Matrix<Fq>;
pub type MatrixExt = Matrix<ExtElem>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(rows: usize, cols: &[Vec<E>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("column length differs from row count".into()));
        }
        let data = (0..rows).flat_map(|i| cols.iter().map(move |c| c[i].clone())).collect();
        Ok(Matrix { rows, cols: cols.len(), data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let data = (0..self.rows).flat_map(|r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn map<F, T>(&self, f: F) -> Matrix<T>
    where
        F: Fn(&E) -> T,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Matrix::filled(n, n, field.zero());
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }
}

/// Row-major working copy used by the elimination routines.
fn working_rows<E: Clone>(m: &Matrix<E>) -> Vec<Vec<E>> {
    m.to_rows()
}

/// Rank by inversion-free elimination: `row_j ← p·row_j − c·row_pivot`.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = working_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !field.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            if field.is_zero(&a[r][col]) {
                continue;
            }
            let c = a[r][col].clone();
            for k in col..cols {
                let lhs = field.mul(&pivot, &a[r][k]);
                let rhs = field.mul(&c, &a[rank][k]);
                a[r][k] = field.sub(&lhs, &rhs);
            }
        }
        rank += 1;
    }
    rank
}

pub fn is_full_column_rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> bool {
    m.cols() <= m.rows() && rank(field, m) == m.cols()
}

pub fn determinant<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.rows();
    let mut a = working_rows(m);
    let mut det = field.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !field.is_zero(&a[r][col])) else {
            return Ok(field.zero());
        };
        if p != col {
            a.swap(col, p);
            det = field.neg(&det);
        }
        let pivot = a[col][col].clone();
        det = field.mul(&det, &pivot);
        let inv = field.inv(&pivot).expect("pivot nonzero");
        for r in col + 1..n {
            if field.is_zero(&a[r][col]) {
                continue;
            }
            let factor = field.mul(&a[r][col], &inv);
            for k in col..n {
                let t = field.mul(&factor, &a[col][k]);
                a[r][k] = field.sub(&a[r][k], &t);
            }
        }
    }
    Ok(det)
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = working_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&a[i][col])) else {
            continue;
        };
        a.swap(r, p);
        let inv = field.inv(&a[r][col]).expect("pivot nonzero");
        for k in col..cols {
            a[r][k] = field.mul(&a[r][k], &inv);
        }
        for i in 0..rows {
            if i == r || field.is_zero(&a[i][col]) {
                continue;
            }
            let factor = a[i][col].clone();
            for k in col..cols {
                let t = field.mul(&factor, &a[r][k]);
                a[i][k] = field.sub(&a[i][k], &t);
            }
        }
        pivots.push(col);
        r += 1;
    }
    (Matrix::from_rows(a).unwrap_or_else(|_| Matrix::filled(rows, cols, field.zero())), pivots)
}

/// Unique `x` with `m·x = b`; errors if `m` lacks full column rank or the
/// system is inconsistent.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let n = m.cols();
    let aug: Vec<Vec<F::Elem>> = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let aug = if aug.is_empty() { Matrix::filled(0, n + 1, field.zero()) } else { Matrix::from_rows(aug)? };
    let (red, pivots) = rref(field, &aug);
    if pivots.contains(&n) {
        return Err(Error::Singular);
    }
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    Ok((0..n).map(|i| red.get(i, n).clone()).collect())
}

pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.rows();
    let aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend((0..n).map(|c| if c == r { field.one() } else { field.zero() }));
            row
        })
        .collect();
    if n == 0 {
        return Ok(Matrix::filled(0, 0, field.zero()));
    }
    let (red, pivots) = rref(field, &Matrix::from_rows(aug)?);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(red.select_columns(&cols))
}

pub fn mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let mut out = Matrix::filled(a.rows(), b.cols(), field.zero());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = field.zero();
            for k in 0..a.cols() {
                let t = field.mul(a.get(i, k), b.get(k, j));
                acc = field.add(&acc, &t);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

pub fn mul_vec<F: Field>(field: &F, a: &Matrix<F::Elem>, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if a.cols() != x.len() {
        return Err(Error::Dimension("vector length".into()));
    }
    Ok((0..a.rows())
        .map(|i| {
            a.row(i).iter().zip(x).fold(field.zero(), |acc, (m, v)| {
                let t = field.mul(m, v);
                field.add(&acc, &t)
            })
        })
        .collect())
}

/// Basis of the right nullspace, one vector per free column.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (red, pivots) = rref(field, m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); m.cols()];
            v[f] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(red.get(row, f));
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    #[test]
    fn rank_and_det_over_f4() {
        let f = FieldCtx::new(2, 2).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(rank(&f, &m), 2);
        // det = 2 - 1 = 3 (x + 1) in characteristic 2
        assert_eq!(determinant(&f, &m).unwrap(), 3);
        let singular = Matrix::from_rows(vec![vec![2, 3], vec![1, f.mul(3, f.inv(2).unwrap())]]).unwrap();
        assert_eq!(rank(&f, &singular), 1);
        assert_eq!(determinant(&f, &singular).unwrap(), 0);
    }

    #[test]
    fn solve_and_inverse() {
        let f = FieldCtx::new(5, 1).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 2]]).unwrap();
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mul(&f, &m, &inv).unwrap(), Matrix::identity(&f, 3));
        let x = vec![3, 1, 4];
        let b = mul_vec(&f, &m, &x).unwrap();
        assert_eq!(solve(&f, &m, &b).unwrap(), x);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = FieldCtx::new(3, 1).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let ns = nullspace(&f, &m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mul_vec(&f, &m, &v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn non_square_errors() {
        let f = FieldCtx::new(2, 1).unwrap();
        let m = Matrix::filled(2, 3, 1u32);
        assert_eq!(determinant(&f, &m), Err(Error::NotSquare));
        assert_eq!(inverse(&f, &m), Err(Error::NotSquare));
    }
}
