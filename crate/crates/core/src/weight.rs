//! Weight enumerators and the MacWilliams transform.

use std::fmt;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{dot, weight, Mat, Subspace};

/// Coefficient ring for [`WeightPoly`].
pub trait Ring:
    Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    fn from_int(v: &BigInt) -> Self;
}

impl Ring for i64 {
    fn from_int(v: &BigInt) -> Self {
        v.to_i64().expect("integer does not fit in i64")
    }
}

impl Ring for BigInt {
    fn from_int(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Ring for BigRational {
    fn from_int(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

/// Polynomial in the weight variable `W`, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> WeightPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        WeightPoly { coeffs }
    }

    pub fn zero() -> Self {
        WeightPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        WeightPoly { coeffs: vec![R::one()] }
    }

    /// `c·W^d`.
    pub fn monomial(c: R, d: usize) -> Self {
        let mut coeffs = vec![R::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> WeightPoly<S> {
        WeightPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Converts coefficientwise, failing if any coefficient does not convert.
    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Option<S>) -> Option<WeightPoly<S>> {
        Some(WeightPoly::new(self.coeffs.iter().map(f).collect::<Option<Vec<_>>>()?))
    }
}

impl<R: Ring> Default for WeightPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl WeightPoly<i64> {
    /// Value at `W = 1`, the number of vectors counted.
    pub fn total(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn to_rational(&self) -> WeightPoly<BigRational> {
        self.map(|&c| BigRational::from_integer(BigInt::from(c)))
    }
}

impl WeightPoly<BigRational> {
    /// Integer-coefficient version if every coefficient is an integer.
    pub fn to_integer(&self) -> Option<WeightPoly<i64>> {
        self.try_map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<R: Ring> fmt::Debug for WeightPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|c| format!("{c:?}")))
    }
}

impl<R: Ring> WeightPoly<R> {
    /// Human-readable form such as `1+2W^2`, with coefficients formatted by `show`.
    pub fn render(&self, show: impl Fn(&R) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = show(c);
            let mono = match i {
                0 => String::new(),
                1 => "W".into(),
                _ => format!("W^{i}"),
            };
            terms.push(match (i, s.as_str()) {
                (0, _) => s,
                (_, "1") => mono,
                (_, "-1") => format!("-{mono}"),
                _ if s.contains(['+', ' ']) || s[1..].contains('-') => format!("({s}){mono}"),
                _ => format!("{s}{mono}"),
            });
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if t.starts_with('-') {
                out.push_str(t);
            } else {
                out.push('+');
                out.push_str(t);
            }
        }
        out
    }
}

impl fmt::Display for WeightPoly<i64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|c| c.to_string()))
    }
}

impl fmt::Display for WeightPoly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|c| c.to_string()))
    }
}

/// `Σ_j α_j W^j` where `α_j` counts the vectors of weight `j`.
pub fn weight_enumerator<'a>(vectors: impl IntoIterator<Item = &'a [FieldElement]>) -> WeightPoly<i64> {
    let mut counts: Vec<i64> = Vec::new();
    for v in vectors {
        let w = weight(v);
        if counts.len() <= w {
            counts.resize(w + 1, 0);
        }
        counts[w] += 1;
    }
    WeightPoly::new(counts)
}

pub fn subspace_enumerator(s: &Subspace) -> WeightPoly<i64> {
    let vs = s.vectors();
    weight_enumerator(vs.iter().map(|v| v.as_slice()))
}

/// The polynomials `(1−W)^j (1+(q−1)W)^{n−j}` for `j = 0..=n`.
pub fn macwilliams_kernel(n: usize, q: u64) -> Vec<WeightPoly<BigInt>> {
    let minus = WeightPoly::new(vec![BigInt::one(), -BigInt::one()]);
    let plus = WeightPoly::new(vec![BigInt::one(), BigInt::from(q - 1)]);
    let pow = |p: &WeightPoly<BigInt>, e: usize| (0..e).fold(WeightPoly::one(), |acc, _| acc.mul(p));
    (0..=n).map(|j| pow(&minus, j).mul(&pow(&plus, n - j))).collect()
}

/// `H(f) = Σ α_j (1−W)^j (1+(q−1)W)^{n−j}`.
pub fn mw_transform<R: Ring>(f: &WeightPoly<R>, n: usize, q: u64) -> Result<WeightPoly<R>> {
    mw_transform_with(f, &macwilliams_kernel(n, q))
}

/// [`mw_transform`] with a precomputed [`macwilliams_kernel`].
pub fn mw_transform_with<R: Ring>(f: &WeightPoly<R>, kernel: &[WeightPoly<BigInt>]) -> Result<WeightPoly<R>> {
    let n = kernel.len() - 1;
    if f.degree().is_some_and(|d| d > n) {
        return Err(Error::precondition(format!("polynomial degree exceeds length {n}")));
    }
    let mut out = vec![R::zero(); n + 1];
    for (j, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (i, c) in kernel[j].coeffs().iter().enumerate() {
            out[i] = out[i].clone() + a.clone() * R::from_int(c);
        }
    }
    Ok(WeightPoly::new(out))
}

/// Outcome of comparing a block code's dual enumerator with the transform.
#[derive(Clone, Debug, Serialize)]
pub struct BlockMacWilliamsReport {
    pub n: usize,
    pub k: usize,
    pub we_code: Vec<i64>,
    pub we_dual: Vec<i64>,
    pub transformed: Vec<String>,
    pub holds: bool,
}

/// Largest `q^n` for which the dual is enumerated by brute force.
pub const BLOCK_BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Checks `we(C⊥) = q^{−k} H(we(C))` with `C⊥` found by enumerating `F^n`.
pub fn block_macwilliams_check(basis: &Mat) -> Result<BlockMacWilliamsReport> {
    let f = basis.field();
    let n = basis.ncols();
    let q = f.q() as u64;
    if q.checked_pow(n as u32).is_none_or(|t| t > BLOCK_BRUTE_FORCE_LIMIT) {
        return Err(Error::Resource(format!("q^n exceeds {BLOCK_BRUTE_FORCE_LIMIT}")));
    }
    let code = Subspace::from_rows(basis);
    let k = code.dim();
    let we_code = subspace_enumerator(&code);

    let mut dual_counts = vec![0i64; n + 1];
    let full = Subspace::full(f, n);
    for v in full.vectors() {
        if code.basis().rows_iter().all(|row| dot(f, row, &v).is_zero()) {
            dual_counts[weight(&v)] += 1;
        }
    }
    let we_dual = WeightPoly::new(dual_counts);

    let scale = BigRational::new(BigInt::one(), BigInt::from(q).pow(k as u32));
    let transformed = mw_transform(&we_code.to_rational(), n, q)?.scale(&scale);
    let holds = transformed == we_dual.to_rational();
    Ok(BlockMacWilliamsReport {
        n,
        k,
        we_code: we_code.coeffs().to_vec(),
        we_dual: we_dual.coeffs().to_vec(),
        transformed: transformed.coeffs().iter().map(|c| c.to_string()).collect(),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn enumerator_examples() {
        let f = FieldContext::prime(3).unwrap();
        let vs: Vec<Vec<FieldElement>> =
            [[2, 1, 0], [0, 1, 2], [1, 1, 1]].iter().map(|v| v.iter().map(|&x| f.elem(x)).collect()).collect();
        let we = weight_enumerator(vs.iter().map(|v| v.as_slice()));
        assert_eq!(we, WeightPoly::new(vec![0, 0, 2, 1]));
        assert_eq!(we.to_string(), "2W^2+W^3");
        let zero = [FieldElement::ZERO];
        assert_eq!(weight_enumerator([&zero[..]]), WeightPoly::one());
        assert_eq!(subspace_enumerator(&Subspace::full(&f, 1)), WeightPoly::new(vec![1, 2]));
    }

    #[test]
    fn transform_of_example_polynomials() {
        let fs = [
            vec![rat(1, 3), rat(2, 1), rat(4, 1), rat(8, 3)],
            vec![rat(1, 3), rat(1, 1), rat(0, 1), rat(-4, 3)],
            vec![rat(1, 3), rat(0, 1), rat(-1, 1), rat(2, 3)],
            vec![rat(1, 3), rat(-1, 1), rat(1, 1), rat(-1, 3)],
        ];
        for (i, c) in fs.iter().enumerate() {
            let h = mw_transform(&WeightPoly::new(c.clone()), 3, 3).unwrap();
            assert_eq!(h, WeightPoly::monomial(rat(9, 1), i), "f{}", i + 1);
        }
        let one = mw_transform(&WeightPoly::<BigInt>::one(), 3, 3).unwrap();
        assert_eq!(one, WeightPoly::new([1, 6, 12, 8].map(BigInt::from).to_vec()));
        let too_long = WeightPoly::<BigInt>::monomial(BigInt::one(), 4);
        assert!(matches!(mw_transform(&too_long, 3, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn block_identity_small_codes() {
        let f2 = FieldContext::prime(2).unwrap();
        let rep = Mat::from_indices(&f2, &[&[1, 1, 1]]);
        let report = block_macwilliams_check(&rep).unwrap();
        assert!(report.holds);
        assert_eq!(report.we_dual, vec![1, 0, 3]);
        let zero = Mat::zeros(&f2, 0, 1);
        let report = block_macwilliams_check(&zero).unwrap();
        assert!(report.holds);
        assert_eq!(report.we_dual, vec![1, 1]);
    }

    #[test]
    fn rendering() {
        let p = WeightPoly::new(vec![rat(1, 3), rat(-1, 1), rat(0, 1), rat(8, 3)]);
        assert_eq!(p.to_string(), "1/3-W+8/3W^3");
        assert_eq!(WeightPoly::<i64>::zero().to_string(), "0");
    }
}
