//! Polynomial matrices over `GF(q)[D]`: encoders and their structural
//! properties.
//!
//! Row modules are compared through the row Hermite normal form, which is
//! unique for a full-row-rank generator of a submodule of `F[D]^n`.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Mat;
use crate::poly::Poly;

/// Largest code length handled.
pub const MAX_LENGTH: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

/// Numerical invariants of a code given by an encoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeProfile {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    /// Row degrees of a minimal encoder, positive ones first; `None` when the
    /// encoder is not basic.
    pub forney_indices: Option<Vec<usize>>,
    /// Number of positive Forney indices.
    pub r: usize,
    pub is_basic: bool,
    pub is_minimal: bool,
}

/// `left · G · right = [diag(invariant factors) | 0]` with unimodular
/// `left` and `right`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: PolyMatrix,
    pub invariant_factors: Vec<Poly>,
    pub right: PolyMatrix,
}

impl PolyMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        PolyMatrix { field: field.clone(), rows, cols, entries: vec![Poly::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { field: field.clone(), rows, cols, entries }
    }

    /// Builds from nested coefficient lists (ascending in `D`, element indices).
    pub fn from_indices(field: &Field, rows: &[Vec<Vec<u32>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::usage("encoder rows have different lengths"));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            for entry in row {
                let coeffs = entry.iter().map(|&c| field.try_elem(c)).collect::<Result<Vec<_>>>()?;
                entries.push(Poly::new(field, coeffs));
            }
        }
        Ok(PolyMatrix { field: field.clone(), rows: rows.len(), cols, entries })
    }

    /// Constant polynomial matrix.
    pub fn from_const(m: &Mat) -> Self {
        let f = m.field();
        Self::from_fn(f, m.nrows(), m.ncols(), |i, j| Poly::constant(f, m.get(i, j)))
    }

    pub fn to_indices(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().map(|p| p.coeffs().iter().map(|c| c.index()).collect()).collect()
            })
            .collect()
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Degree of row `i`; `None` for a zero row.
    pub fn row_degree(&self, i: usize) -> Option<usize> {
        self.row(i).iter().filter_map(Poly::degree).max()
    }

    /// Row degrees, with zero rows reported as 0.
    pub fn row_degrees(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_degree(i).unwrap_or(0)).collect()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    /// Coefficient matrix of `D^t`.
    pub fn coefficient(&self, t: usize) -> Mat {
        Mat::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).coeff(t))
    }

    /// Row `i` contributes its coefficient vector of degree `deg g_i`.
    pub fn highest_row_coefficients(&self) -> Mat {
        let degs = self.row_degrees();
        Mat::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).coeff(degs[i]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        Self::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> PolyMatrix {
        Self::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += factor · row[src]`.
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &Poly) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + &(factor * self.get(src, j));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += factor · col[src]`.
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &Poly) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + &(factor * self.get(i, src));
            self.set(i, dst, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: FieldElement) {
        for j in 0..self.cols {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return Poly::one(f);
        }
        let mut m = self.clone();
        let mut prev = Poly::one(f);
        let mut negate = false;
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Poly::zero(f);
                };
                m.swap_rows(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                    let v = num.exact_div(&prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, k, Poly::zero(f));
            }
            prev = m.get(k, k).clone();
        }
        let det = m.get(n - 1, n - 1).clone();
        if negate {
            -&det
        } else {
            det
        }
    }

    /// All maximal (`k × k`) minors with their column sets, in lexicographic order.
    pub fn maximal_minors(&self) -> Vec<(Vec<usize>, Poly)> {
        combinations(self.cols, self.rows)
            .into_iter()
            .map(|cols| {
                let d = self.select_cols(&cols).determinant();
                (cols, d)
            })
            .collect()
    }

    fn check_shape(&self) -> Result<()> {
        if self.rows == 0 {
            return Err(Error::usage("encoder has no rows"));
        }
        if self.cols > MAX_LENGTH {
            return Err(Error::Resource(format!("code length {} exceeds {MAX_LENGTH}", self.cols)));
        }
        if self.rows > self.cols {
            return Err(Error::Structural(format!(
                "{}x{} matrix cannot have full row rank",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    fn nonzero_minors(&self) -> Result<Vec<Poly>> {
        self.check_shape()?;
        let minors: Vec<Poly> =
            self.maximal_minors().into_iter().map(|(_, m)| m).filter(|m| !m.is_zero()).collect();
        if minors.is_empty() {
            return Err(Error::Structural("matrix does not have full row rank".into()));
        }
        Ok(minors)
    }

    /// Maximal degree of the full-size minors.
    pub fn code_degree(&self) -> Result<usize> {
        Ok(self.nonzero_minors()?.iter().filter_map(Poly::degree).max().unwrap_or(0))
    }

    /// True iff the full-size minors have a constant gcd, i.e. a polynomial
    /// right inverse exists.
    pub fn is_basic(&self) -> Result<bool> {
        let minors = self.nonzero_minors()?;
        let g = minors.iter().fold(Poly::zero(&self.field), |acc, m| acc.gcd(m));
        Ok(g.is_unit())
    }

    pub fn is_minimal(&self) -> Result<bool> {
        if !self.is_basic()? {
            return Err(Error::precondition("minimality is only defined for basic encoders"));
        }
        Ok(self.row_degrees().iter().sum::<usize>() == self.code_degree()?)
    }

    /// Reduces a basic encoder to a minimal one generating the same module.
    ///
    /// While the highest-row-coefficient matrix is rank deficient, a row of
    /// largest degree taking part in a dependency is replaced by a
    /// combination with `D`-shifted rows that lowers its degree.
    pub fn minimal_reduction(&self) -> Result<PolyMatrix> {
        if !self.is_basic()? {
            return Err(Error::precondition("minimal reduction requires a basic encoder"));
        }
        let f = self.field.clone();
        let mut g = self.clone();
        loop {
            let degs = g.row_degrees();
            let dep = g.highest_row_coefficients().left_kernel();
            if dep.nrows() == 0 {
                return Ok(g);
            }
            let c = dep.row(0);
            let pivot = (0..g.rows)
                .filter(|&i| !c[i].is_zero())
                .max_by_key(|&i| (degs[i], std::cmp::Reverse(i)))
                .expect("kernel vector is nonzero");
            let inv = f.inv(c[pivot])?;
            for i in 0..g.rows {
                if i == pivot || c[i].is_zero() {
                    continue;
                }
                let factor = Poly::monomial(&f, f.mul(c[i], inv), degs[pivot] - degs[i]);
                g.add_row_multiple(pivot, i, &factor);
            }
            if g.row_degree(pivot).is_none() {
                return Err(Error::Structural("row reduction produced a zero row".into()));
            }
        }
    }

    /// Row Hermite normal form: echelon, monic pivots, entries above each
    /// pivot reduced modulo it, zero rows dropped.
    pub fn hermite_form(&self) -> PolyMatrix {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.rows {
                break;
            }
            loop {
                let best = (r..m.rows)
                    .filter(|&i| !m.get(i, c).is_zero())
                    .min_by_key(|&i| m.get(i, c).degree());
                let Some(best) = best else { break };
                m.swap_rows(r, best);
                let mut clean = true;
                for i in r + 1..m.rows {
                    if m.get(i, c).is_zero() {
                        continue;
                    }
                    let (quot, rem) = m.get(i, c).div_rem(m.get(r, c)).expect("pivot nonzero");
                    m.add_row_multiple(i, r, &-&quot);
                    clean &= rem.is_zero();
                }
                if clean {
                    break;
                }
            }
            if r == m.rows || m.get(r, c).is_zero() {
                continue;
            }
            let inv = self.field.inv(m.get(r, c).lead()).expect("nonzero lead");
            m.scale_row(r, inv);
            for i in 0..r {
                let (quot, _) = m.get(i, c).div_rem(m.get(r, c)).expect("pivot nonzero");
                if !quot.is_zero() {
                    m.add_row_multiple(i, r, &-&quot);
                }
            }
            r += 1;
        }
        m.select_rows(&(0..r).collect::<Vec<_>>())
    }

    /// True when both matrices generate the same row module.
    pub fn same_row_module(&self, other: &PolyMatrix) -> bool {
        self.cols == other.cols && self.hermite_form() == other.hermite_form()
    }

    /// Smith decomposition by elementary row and column operations.
    pub fn smith_decomposition(&self) -> SmithDecomposition {
        let f = self.field.clone();
        let (k, n) = (self.rows, self.cols);
        let mut m = self.clone();
        let mut left = PolyMatrix::identity(&f, k);
        let mut right = PolyMatrix::identity(&f, n);
        let mut factors = Vec::new();
        for t in 0..k.min(n) {
            loop {
                let mut best: Option<(usize, usize, usize)> = None;
                for i in t..k {
                    for j in t..n {
                        if let Some(d) = m.get(i, j).degree() {
                            if best.is_none_or(|b| d < b.2) {
                                best = Some((i, j, d));
                            }
                        }
                    }
                }
                let Some((bi, bj, _)) = best else {
                    return SmithDecomposition { left, invariant_factors: factors, right };
                };
                m.swap_rows(t, bi);
                left.swap_rows(t, bi);
                m.swap_cols(t, bj);
                right.swap_cols(t, bj);
                let mut done = true;
                for i in t + 1..k {
                    if m.get(i, t).is_zero() {
                        continue;
                    }
                    let (quot, rem) = m.get(i, t).div_rem(m.get(t, t)).expect("pivot nonzero");
                    let neg = -&quot;
                    m.add_row_multiple(i, t, &neg);
                    left.add_row_multiple(i, t, &neg);
                    done &= rem.is_zero();
                }
                for j in t + 1..n {
                    if m.get(t, j).is_zero() {
                        continue;
                    }
                    let (quot, rem) = m.get(t, j).div_rem(m.get(t, t)).expect("pivot nonzero");
                    let neg = -&quot;
                    m.add_col_multiple(j, t, &neg);
                    right.add_col_multiple(j, t, &neg);
                    done &= rem.is_zero();
                }
                if !done {
                    continue;
                }
                // The pivot must divide every remaining entry.
                let offender = (t + 1..k).find(|&i| {
                    (t + 1..n).any(|j| !m.get(i, j).div_rem(m.get(t, t)).expect("pivot nonzero").1.is_zero())
                });
                match offender {
                    Some(i) => {
                        let one = Poly::one(&f);
                        m.add_row_multiple(t, i, &one);
                        left.add_row_multiple(t, i, &one);
                    }
                    None => break,
                }
            }
            let inv = f.inv(m.get(t, t).lead()).expect("nonzero pivot");
            m.scale_row(t, inv);
            left.scale_row(t, inv);
            factors.push(m.get(t, t).clone());
        }
        SmithDecomposition { left, invariant_factors: factors, right }
    }

    /// A minimal basic encoder of the dual module `{w : G w^T = 0}`.
    pub fn dual_encoder(&self) -> Result<PolyMatrix> {
        let (k, n) = (self.rows, self.cols);
        if !self.is_basic()? {
            return Err(Error::precondition("dual encoder requires a basic encoder"));
        }
        if k == n {
            return Err(Error::precondition("a code with k = n has no dual of positive dimension"));
        }
        let smith = self.smith_decomposition();
        if smith.invariant_factors.len() != k || !smith.invariant_factors.iter().all(Poly::is_unit) {
            return Err(Error::invariant("basic encoder has non-trivial invariant factors"));
        }
        let kernel = smith.right.select_cols(&(k..n).collect::<Vec<_>>()).transpose();
        let dual = kernel.minimal_reduction()?;
        if !(self * &dual.transpose()).is_zero() {
            return Err(Error::invariant("dual encoder is not orthogonal to G"));
        }
        if !dual.is_minimal()? || dual.code_degree()? != self.code_degree()? {
            return Err(Error::invariant("dual encoder is not minimal of the same degree"));
        }
        Ok(dual)
    }

    /// Row-wise `D^{deg g_i} g_i(1/D)` of a minimal encoder.
    pub fn reciprocal(&self) -> Result<PolyMatrix> {
        if !self.is_minimal()? {
            return Err(Error::precondition("reciprocal matrix requires a minimal encoder"));
        }
        let degs = self.row_degrees();
        Ok(Self::from_fn(&self.field, self.rows, self.cols, |i, j| self.get(i, j).reciprocal(degs[i])))
    }

    pub fn profile(&self) -> Result<CodeProfile> {
        let delta = self.code_degree()?;
        let is_basic = self.is_basic()?;
        let (is_minimal, forney_indices) = if is_basic {
            let minimal = self.row_degrees().iter().sum::<usize>() == delta;
            let reduced = if minimal { self.clone() } else { self.minimal_reduction()? };
            let mut degs = reduced.row_degrees();
            // Stable: positive indices first, original order otherwise.
            let mut ordered: Vec<usize> = degs.iter().copied().filter(|&d| d > 0).collect();
            ordered.extend(degs.drain(..).filter(|&d| d == 0));
            (minimal, Some(ordered))
        } else {
            (false, None)
        };
        let r = forney_indices.as_ref().map_or(0, |v| v.iter().filter(|&&d| d > 0).count());
        Ok(CodeProfile { n: self.cols, k: self.rows, delta, forney_indices, r, is_basic, is_minimal })
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;

    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "polynomial matrix product dimension mismatch");
        let f = &self.field;
        PolyMatrix::from_fn(f, self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Poly::zero(f), |acc, l| &acc + &(self.get(i, l) * rhs.get(l, j)))
        })
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, p) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p:?}")?;
            }
        }
        write!(f, "]")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn f3() -> Field {
        FieldContext::prime(3).unwrap()
    }

    fn pm(f: &Field, rows: &[&[&[u32]]]) -> PolyMatrix {
        let rows: Vec<Vec<Vec<u32>>> =
            rows.iter().map(|r| r.iter().map(|e| e.to_vec()).collect()).collect();
        PolyMatrix::from_indices(f, &rows).unwrap()
    }

    pub(crate) fn example_g(f: &Field) -> PolyMatrix {
        pm(f, &[&[&[1, 0, 1], &[2, 1], &[0]], &[&[1], &[0], &[2]]])
    }

    pub(crate) fn example_g_hat(f: &Field) -> PolyMatrix {
        pm(f, &[&[&[2, 1], &[2, 0, 2], &[2, 1]]])
    }

    /// Cofactor expansion along the first row.
    fn laplace_det(m: &PolyMatrix) -> Poly {
        let n = m.nrows();
        let f = m.field();
        if n == 0 {
            return Poly::one(f);
        }
        let mut acc = Poly::zero(f);
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = laplace_det(&m.select_rows(&rows).select_cols(&cols));
            let term = m.get(0, j) * &minor;
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn example_degrees_and_minors() {
        let f = f3();
        let g = example_g(&f);
        let minors: Vec<Poly> = g.maximal_minors().into_iter().map(|(_, m)| m).collect();
        // columns (0,1): (1+D²)·0 - (2+D)·1 = 1+2D; (0,2): 2(1+D²) = 2+2D²; (1,2): 2(2+D) = 1+2D
        assert_eq!(minors[0], Poly::from_indices(&f, &[1, 2]));
        assert_eq!(minors[1], Poly::from_indices(&f, &[2, 0, 2]));
        assert_eq!(minors[2], Poly::from_indices(&f, &[1, 2]));
        assert_eq!(g.code_degree().unwrap(), 2);
        assert_eq!(example_g_hat(&f).code_degree().unwrap(), 2);
        let constant = pm(&f, &[&[&[1], &[0]], &[&[2], &[1]]]);
        assert_eq!(constant.code_degree().unwrap(), 0);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let f = f3();
        let m = pm(
            &f,
            &[
                &[&[1, 2], &[0, 1], &[2], &[1, 1, 1]],
                &[&[0], &[1, 0, 2], &[1, 1], &[2]],
                &[&[2, 2], &[1], &[0, 0, 1], &[1, 2]],
                &[&[1], &[2, 1], &[0], &[0, 1]],
            ],
        );
        assert_eq!(m.determinant(), laplace_det(&m));
        let singular = pm(&f, &[&[&[1, 1], &[2]], &[&[2, 2], &[1]]]);
        assert!(singular.determinant().is_zero());
    }

    #[test]
    fn basic_and_minimal_flags() {
        let f = f3();
        let g = example_g(&f);
        assert!(g.is_basic().unwrap());
        assert!(g.is_minimal().unwrap());
        assert!(!pm(&f, &[&[&[0, 1]]]).is_basic().unwrap());
        assert!(pm(&f, &[&[&[1], &[0, 1]], &[&[0], &[1]]]).is_basic().unwrap());
        let non_min = pm(&f, &[&[&[1, 0, 1], &[2, 1], &[0]], &[&[1, 0, 1], &[2, 1], &[2]]]);
        assert!(non_min.is_basic().unwrap());
        assert!(!non_min.is_minimal().unwrap());
        assert!(matches!(pm(&f, &[&[&[0, 1]]]).is_minimal(), Err(Error::Precondition(_))));
        let deficient = pm(&f, &[&[&[1], &[2]], &[&[2], &[1]]]);
        assert!(matches!(deficient.code_degree(), Err(Error::Structural(_))));
    }

    #[test]
    fn minimal_reduction_examples() {
        let f = f3();
        let non_min = pm(&f, &[&[&[1, 0, 1], &[2, 1], &[0]], &[&[1, 0, 1], &[2, 1], &[2]]]);
        let red = non_min.minimal_reduction().unwrap();
        assert_eq!(red.row_degrees().iter().sum::<usize>(), 2);
        assert!(red.same_row_module(&non_min));
        assert_eq!(red.code_degree().unwrap(), 2);

        let g = example_g(&f);
        assert_eq!(g.minimal_reduction().unwrap(), g);

        let lower = pm(&f, &[&[&[1], &[0]], &[&[0, 1], &[1]]]);
        assert_eq!(lower.minimal_reduction().unwrap(), PolyMatrix::identity(&f, 2));
    }

    #[test]
    fn dual_encoder_examples() {
        let f = f3();
        let g = example_g(&f);
        let dual = g.dual_encoder().unwrap();
        assert_eq!(dual.nrows(), 1);
        assert!((&g * &dual.transpose()).is_zero());
        assert!(dual.same_row_module(&example_g_hat(&f)));

        let g = pm(&f, &[&[&[1], &[0], &[0]], &[&[0], &[1], &[0]]]);
        let dual = g.dual_encoder().unwrap();
        assert!(dual.get(0, 0).is_zero() && dual.get(0, 1).is_zero());
        assert!(dual.get(0, 2).is_unit());

        let square = PolyMatrix::identity(&f, 2);
        assert!(matches!(square.dual_encoder(), Err(Error::Precondition(_))));
        assert!(matches!(pm(&f, &[&[&[0, 1], &[0, 1]]]).dual_encoder(), Err(Error::Precondition(_))));
    }

    #[test]
    fn reciprocal_examples() {
        let f = f3();
        assert_eq!(
            example_g_hat(&f).reciprocal().unwrap(),
            pm(&f, &[&[&[0, 1, 2], &[2, 0, 2], &[0, 1, 2]]])
        );
        assert_eq!(
            example_g(&f).reciprocal().unwrap(),
            pm(&f, &[&[&[1, 0, 1], &[0, 1, 2], &[0]], &[&[1], &[0], &[2]]])
        );
        let constant = pm(&f, &[&[&[1], &[2]]]);
        assert_eq!(constant.reciprocal().unwrap(), constant);
        let non_min = pm(&f, &[&[&[1, 0, 1], &[2, 1], &[0]], &[&[1, 0, 1], &[2, 1], &[2]]]);
        assert!(matches!(non_min.reciprocal(), Err(Error::Precondition(_))));
    }

    #[test]
    fn smith_of_basic_is_identity_block() {
        let f = f3();
        let g = example_g(&f);
        let s = g.smith_decomposition();
        assert!(s.invariant_factors.iter().all(|p| p == &Poly::one(&f)));
        let prod = &(&s.left * &g) * &s.right;
        let expected = PolyMatrix::from_fn(&f, 2, 3, |i, j| {
            if i == j {
                Poly::one(&f)
            } else {
                Poly::zero(&f)
            }
        });
        assert_eq!(prod, expected);
        // Unimodular transforms have unit determinants.
        assert!(s.left.determinant().is_unit());
        assert!(s.right.determinant().is_unit());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }
}
