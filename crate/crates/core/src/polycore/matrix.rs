//! Dense matrices over any [`Scalar`] ring, with fraction-free determinant
//! and characteristic polynomial algorithms.

use std::fmt;

use num_traits::Zero;

use super::rational::{qi, Q};
use super::unipoly::UniPoly;
use super::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Self::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.cols == 0 {
            return Err(Error::Dimension("empty inner dimension".into()));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.get(i, 0).times(rhs.get(0, j));
            for k in 1..self.cols {
                acc = acc.plus(&self.get(i, k).times(rhs.get(k, j)));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols || self.cols == 0 {
            return Err(Error::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).times(&v[0]);
                for k in 1..self.cols {
                    acc = acc.plus(&self.get(i, k).times(&v[k]));
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        if self.rows == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows {
            acc = acc.plus(self.get(i, i));
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Coefficients of `det(tI - A)`, lowest degree first, by Berkowitz's
    /// division-free algorithm.
    pub fn charpoly_berkowitz(&self) -> Result<Vec<T>> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let one = self.get(0, 0).one_like();
        // p holds coefficients highest degree first.
        let mut p = vec![one.clone(), self.get(0, 0).negate()];
        for k in 1..n {
            let a = self.get(k, k);
            let r: Vec<T> = (0..k).map(|j| self.get(k, j).clone()).collect();
            let mut c: Vec<T> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let mut col = vec![one.clone(), a.negate()];
            for _ in 0..k {
                col.push(dot(&r, &c).negate());
                c = (0..k)
                    .map(|i| {
                        let row: Vec<T> = (0..k).map(|j| self.get(i, j).clone()).collect();
                        dot(&row, &c)
                    })
                    .collect();
            }
            let zero = one.zero_like();
            let mut next = vec![zero; k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, pj) in p.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        *slot = slot.plus(&col[i - j].times(pj));
                    }
                }
            }
            p = next;
        }
        p.reverse();
        Ok(p)
    }

    /// Division-free determinant.
    pub fn det_berkowitz(&self) -> Result<T> {
        let cp = self.charpoly_berkowitz()?;
        let c0 = cp[0].clone();
        Ok(if self.rows.is_multiple_of(2) { c0 } else { c0.negate() })
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = a[0].times(&b[0]);
    for i in 1..a.len() {
        acc = acc.plus(&a[i].times(&b[i]));
    }
    acc
}

impl Matrix<Q> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| qi(0))
    }

    pub fn eye(n: usize) -> Self {
        Self::identity(n, &qi(1))
    }

    /// Fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<Q> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(qi(1));
        }
        let mut a = self.data.clone();
        let mut sign = 1i64;
        let mut prev = qi(1);
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(qi(0));
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(&a[n * n - 1] * qi(sign))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![qi(0); self.cols];
                v[f] = qi(1);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                qi(1)
            } else {
                qi(0)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn charpoly(&self) -> Result<UniPoly> {
        Ok(UniPoly::new(self.charpoly_berkowitz()?))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::multipoly::{MultiPoly, Var, VarSet};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
            .unwrap()
    }

    fn qvar() -> (std::sync::Arc<VarSet>, MultiPoly) {
        let vs = VarSet::new(vec![Var {
            name: "q".into(),
            laurent: true,
        }]);
        let q = MultiPoly::var(&vs, 0);
        (vs, q)
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::eye(2).det().unwrap(), qi(1));
        assert_eq!(qm(&[&[1, 2], &[0, 0]]).det().unwrap(), qi(0));
        assert_eq!(qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).det().unwrap(), qi(-5));
        assert!(matches!(
            Matrix::<Q>::zeros(2, 3).det(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn symbolic_gram_determinant() {
        let (vs, q) = qvar();
        let z = MultiPoly::zero(&vs);
        let three = MultiPoly::constant(&vs, qi(3));
        let tq = q.scale(&qi(3));
        let m = Matrix::from_rows(vec![
            vec![three, z.clone(), z.clone()],
            vec![z.clone(), z.clone(), tq.clone()],
            vec![z.clone(), tq, z],
        ])
        .unwrap();
        assert_eq!(m.det_berkowitz().unwrap(), q.pow(2).scale(&qi(-27)));
    }

    #[test]
    fn charpoly_examples() {
        let c = qm(&[&[7]]).charpoly().unwrap();
        assert_eq!(c, UniPoly::from_ints(&[-7, 1]));

        let (vs, q) = qvar();
        let m = Matrix::from_rows(vec![
            vec![MultiPoly::zero(&vs), q.clone()],
            vec![MultiPoly::one(&vs), MultiPoly::zero(&vs)],
        ])
        .unwrap();
        let cp = m.charpoly_berkowitz().unwrap();
        assert_eq!(cp, vec![q.negate(), MultiPoly::zero(&vs), MultiPoly::one(&vs)]);

        let j = qm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(j.charpoly().unwrap(), UniPoly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn berkowitz_matches_bareiss() {
        let m = qm(&[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        assert_eq!(m.det().unwrap(), m.det_berkowitz().unwrap());
    }

    #[test]
    fn inverse_rank_nullspace() {
        let m = qm(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert_eq!(m.inverse().unwrap(), m);
        let s = qm(&[&[1, 2], &[2, 4]]);
        assert!(matches!(s.inverse(), Err(Error::Singular)));
        assert_eq!(s.rank(), 1);
        let ns = s.nullspace();
        assert_eq!(ns, vec![vec![qi(-2), qi(1)]]);
    }
}
