//! Controller canonical form of a minimal encoder.
//!
//! The state of row `i` (a block of `δᵢ` coordinates) holds the last `δᵢ`
//! inputs of that row, most recent first, so that
//! `x_{t+1} = x_t A + u_t B` and `v_t = x_t C + u_t E`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{vec_add, Mat, Subspace};
use crate::poly::Poly;
use crate::polymat::{CodeProfile, PolyMatrix};

#[derive(Clone, Debug)]
pub struct CcfRealization {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub e: Mat,
    pub profile: CodeProfile,
    /// Row `i` of `encoder` is row `permutation[i]` of the input matrix.
    pub permutation: Vec<usize>,
    /// The encoder with positive-degree rows first.
    pub encoder: PolyMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct CcfJson {
    pub delta: usize,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub forney_indices: Vec<usize>,
    pub permutation: Vec<usize>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<u32>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<u32>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<u32>>,
}

/// Builds the CCF of a minimal basic encoder.
pub fn build_ccf(g: &PolyMatrix) -> Result<CcfRealization> {
    if !g.is_minimal()? {
        return Err(Error::precondition("controller canonical form requires a minimal encoder"));
    }
    let f = g.field().clone();
    let degs = g.row_degrees();
    let mut permutation: Vec<usize> = (0..g.nrows()).filter(|&i| degs[i] > 0).collect();
    permutation.extend((0..g.nrows()).filter(|&i| degs[i] == 0));
    let encoder = g.select_rows(&permutation);
    let forney: Vec<usize> = permutation.iter().map(|&i| degs[i]).collect();
    let (k, n) = (g.nrows(), g.ncols());
    let delta: usize = forney.iter().sum();
    let r = forney.iter().filter(|&&d| d > 0).count();

    let mut a = Mat::zeros(&f, delta, delta);
    let mut b = Mat::zeros(&f, k, delta);
    let mut c = Mat::zeros(&f, delta, n);
    let mut offset = 0;
    for (i, &d) in forney.iter().enumerate().take(r) {
        b.set(i, offset, FieldElement::ONE);
        for j in 0..d {
            if j + 1 < d {
                a.set(offset + j, offset + j + 1, FieldElement::ONE);
            }
            for col in 0..n {
                c.set(offset + j, col, encoder.get(i, col).coeff(j + 1));
            }
        }
        offset += d;
    }
    let e = encoder.coefficient(0);

    let profile = CodeProfile {
        n,
        k,
        delta,
        forney_indices: Some(forney.clone()),
        r,
        is_basic: true,
        is_minimal: true,
    };
    let ccf = CcfRealization { a, b, c, e, profile, permutation, encoder };

    // G = E + Σ B A^{i-1} C D^i
    let max_deg = forney.iter().copied().max().unwrap_or(0);
    let mut power = Mat::identity(&f, delta);
    for i in 1..=max_deg + 1 {
        let term = &(&ccf.b * &power) * &ccf.c;
        if term != ccf.encoder.coefficient(i) {
            return Err(Error::invariant(format!("CCF power series differs at degree {i}")));
        }
        power = &power * &ccf.a;
    }
    Ok(ccf)
}

impl CcfRealization {
    pub fn field(&self) -> &Field {
        self.e.field()
    }

    pub fn delta(&self) -> usize {
        self.profile.delta
    }

    pub fn k(&self) -> usize {
        self.profile.k
    }

    pub fn n(&self) -> usize {
        self.profile.n
    }

    pub fn r(&self) -> usize {
        self.profile.r
    }

    pub fn forney_indices(&self) -> &[usize] {
        self.profile.forney_indices.as_deref().unwrap_or(&[])
    }

    /// One transition: `(xA + uB, xC + uE)`.
    pub fn step(&self, x: &[FieldElement], u: &[FieldElement]) -> Result<(Vec<FieldElement>, Vec<FieldElement>)> {
        if x.len() != self.delta() || u.len() != self.k() {
            return Err(Error::usage(format!(
                "expected state of length {} and input of length {}",
                self.delta(),
                self.k()
            )));
        }
        Ok(self.step_unchecked(x, u))
    }

    pub(crate) fn step_unchecked(&self, x: &[FieldElement], u: &[FieldElement]) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let f = self.field();
        let next = vec_add(f, &self.a.vec_mul(x), &self.b.vec_mul(u));
        let out = vec_add(f, &self.c.vec_mul(x), &self.e.vec_mul(u));
        (next, out)
    }

    /// Runs the state equations from the zero state for `horizon + 1`
    /// steps and returns the output vectors `v_0, …, v_horizon`.
    ///
    /// `u` refers to the rows of [`CcfRealization::encoder`].
    pub fn encode_series(&self, u: &[Poly], horizon: usize) -> Result<Vec<Vec<FieldElement>>> {
        if u.len() != self.k() {
            return Err(Error::usage(format!("expected {} input polynomials", self.k())));
        }
        let max_in = u.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let max_row = self.forney_indices().iter().copied().max().unwrap_or(0);
        if horizon < max_in + max_row {
            return Err(Error::usage(format!("horizon must be at least {}", max_in + max_row)));
        }
        let mut x = vec![FieldElement::ZERO; self.delta()];
        let mut out = Vec::with_capacity(horizon + 1);
        for t in 0..=horizon {
            let ut: Vec<FieldElement> = u.iter().map(|p| p.coeff(t)).collect();
            let (next, v) = self.step_unchecked(&x, &ut);
            out.push(v);
            x = next;
        }
        Ok(out)
    }

    /// Block anti-diagonal reversal matrix: each state block is reversed.
    pub fn r_matrix(&self) -> Mat {
        let f = self.field();
        let mut r = Mat::zeros(f, self.delta(), self.delta());
        let mut offset = 0;
        for &d in self.forney_indices() {
            for j in 0..d {
                r.set(offset + j, offset + d - 1 - j, FieldElement::ONE);
            }
            offset += d;
        }
        r
    }

    /// `L = [R Aᵀ, R Bᵀ; B R, I − B Bᵀ]`, mapping `[C; E]` to the
    /// coefficient rows of the reversed encoder.
    pub fn l_matrix(&self) -> Mat {
        let f = self.field();
        let r = self.r_matrix();
        let at = self.a.transpose();
        let bt = self.b.transpose();
        let lower_right = &Mat::identity(f, self.k()) - &(&self.b * &bt);
        Mat::block(&(&r * &at), &(&r * &bt), &(&self.b * &r), &lower_right)
    }

    /// Constant codewords: the span of the degree-zero rows.
    pub fn c_const(&self) -> Subspace {
        let rows: Vec<usize> = (self.r()..self.k()).collect();
        Subspace::from_rows(&self.e.select_rows(&rows))
    }

    /// All coefficient vectors of codewords: the row space of `[C; E]`.
    pub fn c_coeff(&self) -> Subspace {
        Subspace::from_rows(&self.c.vcat(&self.e))
    }

    pub fn to_json(&self) -> CcfJson {
        CcfJson {
            delta: self.delta(),
            k: self.k(),
            n: self.n(),
            r: self.r(),
            forney_indices: self.forney_indices().to_vec(),
            permutation: self.permutation.clone(),
            a: self.a.to_indices(),
            b: self.b.to_indices(),
            c: self.c.to_indices(),
            e: self.e.to_indices(),
        }
    }
}

/// Codeword coefficients of `u·G` by direct polynomial multiplication.
pub fn encode_poly(g: &PolyMatrix, u: &[Poly]) -> Vec<Poly> {
    let f = g.field();
    (0..g.ncols())
        .map(|j| u.iter().enumerate().fold(Poly::zero(f), |acc, (i, ui)| &acc + &(ui * g.get(i, j))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn f3() -> Field {
        FieldContext::prime(3).unwrap()
    }

    fn example(f: &Field) -> PolyMatrix {
        PolyMatrix::from_indices(f, &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1], vec![0], vec![2]]])
            .unwrap()
    }

    fn v(f: &Field, xs: &[u32]) -> Vec<FieldElement> {
        xs.iter().map(|&x| f.elem(x)).collect()
    }

    #[test]
    fn example_ccf() {
        let f = f3();
        let ccf = build_ccf(&example(&f)).unwrap();
        assert_eq!(ccf.a, Mat::from_indices(&f, &[&[0, 1], &[0, 0]]));
        assert_eq!(ccf.b, Mat::from_indices(&f, &[&[1, 0], &[0, 0]]));
        assert_eq!(ccf.c, Mat::from_indices(&f, &[&[0, 1, 0], &[1, 0, 0]]));
        assert_eq!(ccf.e, Mat::from_indices(&f, &[&[1, 2, 0], &[1, 0, 2]]));
        assert_eq!(ccf.permutation, vec![0, 1]);

        let dual = PolyMatrix::from_indices(&f, &[vec![vec![2, 1], vec![2, 0, 2], vec![2, 1]]]).unwrap();
        let dccf = build_ccf(&dual).unwrap();
        assert_eq!(dccf.b, Mat::from_indices(&f, &[&[1, 0]]));
        assert_eq!(dccf.c, Mat::from_indices(&f, &[&[1, 0, 1], &[0, 2, 0]]));
        assert_eq!(dccf.e, Mat::from_indices(&f, &[&[2, 2, 2]]));
    }

    #[test]
    fn rows_are_sorted_stably() {
        let f = f3();
        let g = PolyMatrix::from_indices(&f, &[vec![vec![1], vec![0], vec![2]], vec![vec![1, 0, 1], vec![2, 1], vec![0]]])
            .unwrap();
        let ccf = build_ccf(&g).unwrap();
        assert_eq!(ccf.permutation, vec![1, 0]);
        assert_eq!(ccf.encoder, example(&f));
    }

    #[test]
    fn constant_code_has_empty_state() {
        let f = f3();
        let g = PolyMatrix::from_indices(&f, &[vec![vec![1], vec![2], vec![0]]]).unwrap();
        let ccf = build_ccf(&g).unwrap();
        assert_eq!(ccf.delta(), 0);
        assert_eq!((ccf.a.nrows(), ccf.b.ncols(), ccf.c.nrows()), (0, 0, 0));
        assert_eq!(ccf.e, Mat::from_indices(&f, &[&[1, 2, 0]]));
    }

    #[test]
    fn step_examples() {
        let f = f3();
        let ccf = build_ccf(&example(&f)).unwrap();
        let (next, out) = ccf.step(&v(&f, &[1, 2]), &v(&f, &[0, 0])).unwrap();
        assert_eq!((next, out), (v(&f, &[0, 1]), v(&f, &[2, 1, 0])));
        let (next, out) = ccf.step(&v(&f, &[1, 2]), &v(&f, &[0, 1])).unwrap();
        assert_eq!((next, out), (v(&f, &[0, 1]), v(&f, &[0, 1, 2])));
        let (next, out) = ccf.step(&v(&f, &[0, 0]), &v(&f, &[0, 0])).unwrap();
        assert_eq!((next, out), (v(&f, &[0, 0]), v(&f, &[0, 0, 0])));
        assert!(matches!(ccf.step(&v(&f, &[1]), &v(&f, &[0, 0])), Err(Error::Usage(_))));
    }

    #[test]
    fn encode_series_matches_product() {
        let f = f3();
        let g = example(&f);
        let ccf = build_ccf(&g).unwrap();
        let inputs = [
            vec![Poly::one(&f), Poly::zero(&f)],
            vec![Poly::zero(&f), Poly::one(&f)],
            vec![Poly::zero(&f), Poly::zero(&f)],
            vec![Poly::from_indices(&f, &[2, 1, 0, 1]), Poly::from_indices(&f, &[0, 2, 1])],
        ];
        for u in &inputs {
            let series = ccf.encode_series(u, 6).unwrap();
            let direct = encode_poly(&g, u);
            for (t, vt) in series.iter().enumerate() {
                let expect: Vec<FieldElement> = direct.iter().map(|p| p.coeff(t)).collect();
                assert_eq!(vt, &expect, "t = {t}");
            }
        }
        let series = ccf.encode_series(&inputs[1], 2).unwrap();
        assert_eq!(series, vec![v(&f, &[1, 0, 2]), v(&f, &[0, 0, 0]), v(&f, &[0, 0, 0])]);
        assert!(ccf.encode_series(&inputs[3], 4).is_err());
    }

    #[test]
    fn reversal_matrices() {
        let f = f3();
        let ccf = build_ccf(&example(&f)).unwrap();
        assert_eq!(ccf.r_matrix(), Mat::from_indices(&f, &[&[0, 1], &[1, 0]]));
        let l = ccf.l_matrix();
        assert_eq!(&l * &l.transpose(), Mat::identity(&f, 4));
    }

    #[test]
    fn non_minimal_rejected() {
        let f = f3();
        let g = PolyMatrix::from_indices(
            &f,
            &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1, 0, 1], vec![2, 1], vec![2]]],
        )
        .unwrap();
        assert!(matches!(build_ccf(&g), Err(Error::Precondition(_))));
    }
}
