//! Dense rational matrices of arbitrary size.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::padic::{Prime, Valuation, ValuedRational};

/// A row-major matrix over Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ValuedRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![ValuedRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ValuedRational::one());
        }
        m
    }

    pub fn scalar(n: usize, s: &ValuedRational) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ValuedRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<ValuedRational>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension("ragged matrix columns".into()));
        }
        let mut m = QMatrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
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

    pub fn get(&self, i: usize, j: usize) -> &ValuedRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: ValuedRational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row_vecs(&self) -> Vec<Vec<ValuedRational>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<ValuedRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn scale(&self, s: &ValuedRational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, o: &QMatrix) -> Result<QMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn try_mul(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let cur = out.get(i, j) + &(x * o.get(k, j));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ValuedRational]) -> Vec<ValuedRational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// `self ⊗ o` with block `(i, j)` equal to `self[i][j] · o`.
    pub fn kron(&self, o: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn det(&self) -> Result<ValuedRational> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.row_vecs();
        let mut det = ValuedRational::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Ok(ValuedRational::zero());
            };
            if piv != c {
                m.swap(piv, c);
                det = -det;
            }
            det *= &m[c][c];
            let inv = m[c][c].recip()?;
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                for k in c..n {
                    let v = &m[r][k] - &(&f * &m[c][k]);
                    m[r][k] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.row_vecs();
        let mut inv = QMatrix::identity(n).row_vecs();
        for c in 0..n {
            let piv = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::Singular)?;
            m.swap(piv, c);
            inv.swap(piv, c);
            let s = m[c][c].recip()?;
            for k in 0..n {
                m[c][k] = &m[c][k] * &s;
                inv[c][k] = &inv[c][k] * &s;
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for k in 0..n {
                    m[r][k] = &m[r][k] - &(&f * &m[c][k]);
                    inv[r][k] = &inv[r][k] - &(&f * &inv[c][k]);
                }
            }
        }
        QMatrix::from_rows(inv)
    }

    pub fn min_valuation(&self, p: Prime) -> Valuation {
        self.data
            .iter()
            .map(|x| x.valuation(p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn is_integral(&self, p: Prime) -> bool {
        self.min_valuation(p).is_nonnegative()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_vecs()
            .iter()
            .map(|r| r.iter().map(ValuedRational::to_fraction_string).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<QMatrix> {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl Mul<&QMatrix> for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.try_mul(o).expect("compatible shapes")
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}
