//! Dense matrices and subspaces over a finite field.
//!
//! Vectors are rows, matching the convention `im M = {uM}` and
//! `ker M = {u : uM = 0}` used throughout the crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Clone)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Mat {}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Mat { field: field.clone(), rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from element indices. Panics on ragged input or
    /// out-of-range indices.
    pub fn from_indices(field: &Field, rows: &[&[u32]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::from_fn(field, rows.len(), cols, |i, j| field.elem(rows[i][j]))
    }

    /// Matrix whose rows are the given vectors, all of length `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<FieldElement>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Entries as element indices, row by row.
    pub fn to_indices(&self) -> Vec<Vec<u32>> {
        self.rows_iter().map(|r| r.iter().map(|e| e.index()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: FieldElement) -> Mat {
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f.mul(c, e)).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        Mat::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// `[self; other]`.
    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// 2x2 block matrix `[a, b; c, d]`.
    pub fn block(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        a.hcat(b).vcat(&c.hcat(d))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(vi, m));
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = f.mul(inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows spanning `{u : uM = 0}`, in reduced echelon form.
    pub fn left_kernel(&self) -> Mat {
        // u M = 0  <=>  M^T u^T = 0: a right null space of M^T.
        let t = self.transpose();
        let (r, pivots) = t.rref();
        let n = t.cols;
        let f = &self.field;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![FieldElement::ZERO; n];
            v[fc] = FieldElement::ONE;
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(pi, fc));
            }
            basis.push(v);
        }
        Mat::from_rows(f, n, &basis).rref().0
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_rows(self)
    }

    pub fn kernel_space(&self) -> Subspace {
        Subspace::from_rows(&self.left_kernel())
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::usage("inverse of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hcat(&Mat::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        Ok(r.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    fn check_compatible(&self, other: &Mat) {
        assert!(
            std::sync::Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field,
            "mixed field contexts"
        );
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Mat {
    type Output = Mat;

    fn mul(self, rhs: &Mat) -> Mat {
        self.check_compatible(rhs);
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;

    fn add(self, rhs: &Mat) -> Mat {
        self.check_compatible(rhs);
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sum dimension mismatch");
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;

    fn sub(self, rhs: &Mat) -> Mat {
        self + &(-rhs)
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
        }
    }
}

pub fn vec_add(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

pub fn dot(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Hamming weight of a vector.
pub fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

/// A subspace of `F^n`, kept as a reduced echelon basis so that equality is
/// structural.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in F^{}: {:?})", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn from_rows(m: &Mat) -> Self {
        let (r, pivots) = m.rref();
        let basis = r.submatrix(0..pivots.len(), 0..m.ncols());
        Subspace { ambient: m.ncols(), basis }
    }

    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(field, 0, ambient) }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(field, ambient) }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let row = Mat::from_rows(self.field(), self.ambient, &[v.to_vec()]);
        self.basis.vcat(&row).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.rows_iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_rows(&self.basis.vcat(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field(), self.ambient);
        }
        // (a, b) with aU + bV = 0 gives aU in U ∩ V.
        let stacked = self.basis.vcat(&other.basis);
        let kernel = stacked.left_kernel();
        let coeffs = kernel.submatrix(0..kernel.nrows(), 0..self.dim());
        Subspace::from_rows(&(&coeffs * &self.basis))
    }

    /// True when `self ∩ other = {0}`.
    pub fn is_independent_of(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim() + other.dim()
    }

    /// Orthogonal complement under the standard bilinear form.
    pub fn orthogonal(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.field(), self.ambient);
        }
        Subspace::from_rows(&self.basis.transpose().left_kernel())
    }

    /// `{v M : v in self}`.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        if self.is_zero() {
            return Subspace::zero(self.field(), m.ncols());
        }
        Subspace::from_rows(&(&self.basis * m))
    }

    /// All `q^dim` vectors of the subspace, in coefficient order.
    pub fn vectors(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field();
        let q = f.q() as usize;
        let d = self.dim();
        let total = q.pow(d as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![FieldElement::ZERO; d];
        for mut idx in 0..total {
            for c in coeffs.iter_mut().rev() {
                *c = f.elem((idx % q) as u32);
                idx /= q;
            }
            if d == 0 {
                out.push(vec![FieldElement::ZERO; self.ambient]);
            } else {
                out.push(self.basis.vec_mul(&coeffs));
            }
        }
        out
    }
}
