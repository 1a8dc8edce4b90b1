//! Dense matrices over a finite field, row-major.

use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.cols];
        vec_mul_into(f, v, self, &mut out);
        out
    }

    /// Applies `x -> x^(p^e)` entrywise.
    pub fn frobenius(&self, f: &Field, e: u32) -> Matrix {
        if e == 0 {
            return self.clone();
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.frob(a, e)).collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: FieldElement) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn stack(&self, other: &Matrix) -> Matrix {
        if self.rows == 0 {
            return other.clone();
        }
        if other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }
}

#[inline]
pub(crate) fn vec_mul_into(f: &Field, v: &[FieldElement], m: &Matrix, out: &mut [FieldElement]) {
    debug_assert_eq!(v.len(), m.rows);
    out.iter_mut().for_each(|x| *x = FieldElement::ZERO);
    for (k, &a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let row = m.row(k);
        for (o, &b) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(a, b));
        }
    }
}

/// Reduces `m` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv_nz(m.get(r, c));
        for j in 0..cols {
            m.set(r, j, f.mul(m.get(r, j), inv));
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.data.truncate(r * cols);
    m.rows = r;
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Rank of a small set of row vectors; used in hot loops.
pub fn rank_of_rows(f: &Field, rows: &[&[FieldElement]]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let mut data: Vec<FieldElement> = Vec::with_capacity(rows.len() * cols);
    for r in rows {
        data.extend_from_slice(r);
    }
    let mut m = Matrix { rows: rows.len(), cols, data };
    rref(f, &mut m).len()
}

/// Basis (in RREF) of `{ x : m x^T = 0 }`.
pub fn nullspace(f: &Field, m: &Matrix) -> Matrix {
    let cols = m.cols;
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zeros(free.len(), cols);
    for (k, &fc) in free.iter().enumerate() {
        out.set(k, fc, FieldElement::ONE);
        for (r, &pc) in pivots.iter().enumerate() {
            out.set(k, pc, f.neg(work.get(r, fc)));
        }
    }
    rref(f, &mut out);
    out
}

pub fn inverse(f: &Field, m: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, n + i, FieldElement::ONE);
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j));
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: &[u32]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::from_order(7).unwrap();
        let m = Matrix::from_rows(&[fe(&[1, 2, 3]), fe(&[0, 1, 4]), fe(&[5, 6, 0])]);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        let singular = Matrix::from_rows(&[fe(&[1, 2]), fe(&[2, 4])]);
        assert!(inverse(&f, &singular).is_none());
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let f = Field::from_order(5).unwrap();
        let m = Matrix::from_rows(&[fe(&[1, 1, 1, 1, 1]), fe(&[0, 1, 2, 3, 4])]);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.rows, 3);
        assert!(m.mul(&f, &ns.transpose()).is_zero());
    }
}
