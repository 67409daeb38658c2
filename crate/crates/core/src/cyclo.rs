//! Exact arithmetic in the cyclotomic field `Q(ζ_p)`, the additive
//! character matrix `K_{X,Y} = ζ^{τ(XYᵀ)}` and the similarity transform
//! `Γ = q^{−δ} K Λᵀ K̄`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::wam::{StateIndexer, StateMatrix, Wam};
use crate::weight::{Ring, WeightPoly};

/// Element of `Q(ζ_p)` in the basis `1, ζ, …, ζ^{p−2}`.
///
/// Rational elements carry `p = 0`, so they combine with elements of any
/// cyclotomic field and compare equal regardless of where they came from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloRational {
    p: u32,
    coeffs: Vec<BigRational>,
}

impl CycloRational {
    fn canonical(p: u32, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let p = if coeffs.len() <= 1 { 0 } else { p };
        CycloRational { p, coeffs }
    }

    /// Reduces `Σ v_t ζ^t` (`t < p`) using `ζ^{p−1} = −(1 + … + ζ^{p−2})`.
    pub fn from_powers(p: u32, v: &[BigRational]) -> Self {
        assert!(v.len() <= p as usize, "more powers than the order of ζ");
        let top = if v.len() == p as usize { v[p as usize - 1].clone() } else { BigRational::zero() };
        let coeffs = (0..p as usize - 1)
            .map(|i| v.get(i).cloned().unwrap_or_else(BigRational::zero) - &top)
            .collect();
        Self::canonical(p, coeffs)
    }

    /// `Σ counts[t] ζ^t / denom`.
    pub fn from_counts(p: u32, counts: &[i64], denom: &BigInt) -> Self {
        assert!(counts.len() <= p as usize, "more powers than the order of ζ");
        let top = if counts.len() == p as usize { counts[p as usize - 1] } else { 0 };
        let mut reduced: Vec<i64> = (0..p as usize - 1).map(|i| counts.get(i).copied().unwrap_or(0) - top).collect();
        while reduced.last() == Some(&0) {
            reduced.pop();
        }
        let coeffs = reduced.into_iter().map(|c| BigRational::new(BigInt::from(c), denom.clone())).collect();
        Self::canonical(p, coeffs)
    }

    pub fn rational(r: BigRational) -> Self {
        Self::canonical(0, vec![r])
    }

    /// `ζ^e` in `Q(ζ_p)`.
    pub fn zeta_pow(p: u32, e: u64) -> Self {
        let mut v = vec![BigRational::zero(); p as usize];
        v[(e % p as u64) as usize] = BigRational::one();
        Self::from_powers(p, &v)
    }

    /// The order `p` of `ζ`, or 0 for a rational element.
    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Coordinates in the basis `1, ζ, …`; trailing zeros omitted.
    pub fn coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn common_prime(&self, other: &Self) -> u32 {
        match (self.p, other.p) {
            (0, p) | (p, 0) => p,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed cyclotomic fields Q(ζ_{a}) and Q(ζ_{b})"),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Self {
        if self.p == 0 {
            return self.clone();
        }
        let p = self.p as usize;
        let mut v = vec![BigRational::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(p - i) % p] = c.clone();
        }
        Self::from_powers(self.p, &v)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::canonical(self.p, self.coeffs.iter().map(|c| c * r).collect())
    }
}

impl Zero for CycloRational {
    fn zero() -> Self {
        CycloRational { p: 0, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for CycloRational {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl Add for CycloRational {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        let p = self.common_prime(&other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
        Self::canonical(p, (0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }
}

impl Sub for CycloRational {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl Neg for CycloRational {
    type Output = Self;

    fn neg(self) -> Self {
        CycloRational { p: self.p, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for CycloRational {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let p = self.common_prime(&other);
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.p == 0 {
            return other.scale(&self.coeffs[0]);
        }
        if other.p == 0 {
            return self.scale(&other.coeffs[0]);
        }
        let pu = p as usize;
        let mut v = vec![BigRational::zero(); pu];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[(i + j) % pu] += a * b;
            }
        }
        Self::from_powers(p, &v)
    }
}

impl Ring for CycloRational {
    fn from_int(v: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(v.clone()))
    }
}

impl fmt::Debug for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let body = match (i, s.as_str()) {
                (0, _) => s.clone(),
                (1, "1") => "z".into(),
                (1, "-1") => "-z".into(),
                (1, _) => format!("{s}z"),
                (_, "1") => format!("z^{i}"),
                (_, "-1") => format!("-z^{i}"),
                _ => format!("{s}z^{i}"),
            };
            if !first && !body.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Largest `q^δ` for which [`CharacterMatrix::new`] verifies orthogonality.
pub const ORTHOGONALITY_CHECK_LIMIT: usize = 256;

/// Unnormalized character matrix, stored as exponents of `ζ`.
#[derive(Clone, Debug)]
pub struct CharacterMatrix {
    field: Field,
    states: StateIndexer,
    exps: Vec<u32>,
}

impl CharacterMatrix {
    pub fn new(field: &Field, delta: usize) -> Result<Self> {
        let states = StateIndexer::new(field, delta)?;
        let size = states.size();
        let vectors: Vec<Vec<FieldElement>> = (0..size).map(|i| states.vector(i)).collect();
        let exps: Vec<u32> = (0..size)
            .into_par_iter()
            .flat_map_iter(|x| {
                let vx = &vectors[x];
                vectors.iter().map(move |vy| {
                    let d = vx.iter().zip(vy).fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
                    field.trace(d)
                })
            })
            .collect();
        let k = CharacterMatrix { field: field.clone(), states, exps };
        if size <= ORTHOGONALITY_CHECK_LIMIT && !k.is_orthogonal() {
            return Err(Error::invariant("character matrix is not orthogonal"));
        }
        Ok(k)
    }

    pub fn size(&self) -> usize {
        self.states.size()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `τ(XYᵀ)`.
    pub fn exponent(&self, x: usize, y: usize) -> u32 {
        self.exps[x * self.size() + y]
    }

    pub fn entry(&self, x: usize, y: usize) -> CycloRational {
        CycloRational::zeta_pow(self.field.p(), self.exponent(x, y) as u64)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..x).all(|y| self.exponent(x, y) == self.exponent(y, x)))
    }

    /// `K K̄ᵀ = q^δ I`, decided by counting exponent differences: an entry
    /// `Σ_t c_t ζ^t` vanishes exactly when all `c_t` are equal.
    pub fn is_orthogonal(&self) -> bool {
        let n = self.size();
        let p = self.field.p() as usize;
        (0..n).into_par_iter().all(|x| {
            let mut counts = vec![0usize; p];
            for z in 0..n {
                counts.iter_mut().for_each(|c| *c = 0);
                for y in 0..n {
                    let e = (self.exponent(x, y) as usize + p - self.exponent(z, y) as usize) % p;
                    counts[e] += 1;
                }
                let ok = if x == z {
                    counts[0] == n
                } else {
                    counts.iter().all(|&c| c == counts[0])
                };
                if !ok {
                    return false;
                }
            }
            true
        })
    }

    /// Position of each state `Z` in the radix-`p` transform output: the
    /// digit at `j + s(δ−1−i)` is `τ(α^j Z_i)`.
    fn dual_positions(&self) -> Vec<usize> {
        let f = &self.field;
        let (p, s) = (f.p() as usize, f.s() as usize);
        let delta = self.states.delta();
        let alpha_pows: Vec<FieldElement> = (0..s).map(|j| f.pow(f.alpha(), j as u64)).collect();
        (0..self.size())
            .map(|z| {
                let v = self.states.vector(z);
                let mut idx = 0usize;
                for (i, &zi) in v.iter().enumerate() {
                    for (j, &aj) in alpha_pows.iter().enumerate() {
                        let d = j + s * (delta - 1 - i);
                        idx += f.trace(f.mul(aj, zi)) as usize * p.pow(d as u32);
                    }
                }
                idx
            })
            .collect()
    }
}

/// Bound on the estimated work of [`conjugate_wam`].
pub const MAX_TRANSFORM_WORK: u64 = 1 << 36;

/// `Γ = q^{−δ} K Λᵀ K̄`.
pub fn conjugate_wam(wam: &Wam, k: &CharacterMatrix) -> Result<StateMatrix<CycloRational>> {
    transform(wam, k, true)
}

/// `q^{−δ} K Λ K̄`, the variant used for sequence-space duality.
pub fn conjugate_wam_untransposed(wam: &Wam, k: &CharacterMatrix) -> Result<StateMatrix<CycloRational>> {
    transform(wam, k, false)
}

/// Row `X` of the result is built in two passes. First
/// `t_b = Σ_a ζ^{τ(Xa)} Λ_{b,a}` (or `Λ_{a,b}` untransposed), then
/// `Γ_{X,Z} = q^{−δ} Σ_b t_b ζ^{−τ(bZ)}`. Writing `b` in its base-`p`
/// digits turns the second sum into a radix-`p` DFT over `F_p^{sδ}`.
/// Values live in `Z[ζ]` as `p` integer slots, multiplication by `ζ^e`
/// being a rotation.
fn transform(wam: &Wam, k: &CharacterMatrix, transposed: bool) -> Result<StateMatrix<CycloRational>> {
    let f = k.field();
    let size = k.size();
    if wam.size() != size || wam.q != f.q() {
        return Err(Error::usage("WAM and character matrix have different state spaces"));
    }
    let p = f.p() as usize;
    let digits = f.s() as usize * wam.delta;
    let n_coeffs = wam.entries().filter_map(|(_, _, w)| w.degree()).max().map_or(0, |d| d + 1);
    let work = (size as u64)
        .saturating_mul(size as u64)
        .saturating_mul(digits.max(1) as u64)
        .saturating_mul((p * p) as u64)
        .saturating_mul(n_coeffs as u64);
    if work > MAX_TRANSFORM_WORK {
        return Err(Error::Resource(format!("character transform work {work} exceeds {MAX_TRANSFORM_WORK}")));
    }
    let source = if transposed { wam.clone() } else { wam.transpose() };
    let positions = k.dual_positions();
    let denom = BigInt::from(size);

    let rows: Vec<Vec<(usize, WeightPoly<CycloRational>)>> = (0..size)
        .into_par_iter()
        .map(|x| {
            let mut out: Vec<Vec<CycloRational>> = vec![Vec::new(); size];
            let mut buf = vec![0i64; size * p];
            let mut scratch = vec![0i64; p * p];
            for w in 0..n_coeffs {
                buf.iter_mut().for_each(|v| *v = 0);
                for b in 0..size {
                    for (a, poly) in source.row(b) {
                        let c = poly.coeff(w);
                        if c != 0 {
                            buf[b * p + k.exponent(x, *a) as usize] += c;
                        }
                    }
                }
                dft_conj(&mut buf, &mut scratch, p, digits);
                for (z, &pos) in positions.iter().enumerate() {
                    let slots = &buf[pos * p..(pos + 1) * p];
                    let value = CycloRational::from_counts(p as u32, slots, &denom);
                    if !value.is_zero() || !out[z].is_empty() {
                        out[z].resize(w, CycloRational::zero());
                        out[z].push(value);
                    }
                }
            }
            out.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty())
                .map(|(z, c)| (z, WeightPoly::new(c)))
                .collect()
        })
        .collect();
    Ok(StateMatrix::from_rows(wam.delta, wam.q, rows))
}

/// In-place `T(γ) = Σ_β t_β ζ^{−⟨β,γ⟩}` over `digits` base-`p` digits,
/// each entry being `p` consecutive slots of `buf`.
fn dft_conj(buf: &mut [i64], scratch: &mut [i64], p: usize, digits: usize) {
    let len = buf.len() / p;
    let mut stride = 1;
    for _ in 0..digits {
        for base in 0..len {
            if (base / stride) % p != 0 {
                continue;
            }
            scratch.iter_mut().for_each(|v| *v = 0);
            for gamma in 0..p {
                let dst = &mut scratch[gamma * p..(gamma + 1) * p];
                for beta in 0..p {
                    let src = (base + beta * stride) * p;
                    let shift = (beta * gamma) % p;
                    // multiply by ζ^{−shift}: slot i moves to i − shift
                    for i in 0..p {
                        dst[(i + p - shift) % p] += buf[src + i];
                    }
                }
            }
            for gamma in 0..p {
                let dst = (base + gamma * stride) * p;
                buf[dst..dst + p].copy_from_slice(&scratch[gamma * p..(gamma + 1) * p]);
            }
        }
        stride *= p;
    }
}

/// Checks `Γ K = K Λᵀ` (or `K Λ` when `transposed` is false) exactly.
pub fn check_intertwining(gamma: &StateMatrix<CycloRational>, wam: &Wam, k: &CharacterMatrix, transposed: bool) -> bool {
    let size = k.size();
    let p = k.field().p();
    let source = if transposed { wam.clone() } else { wam.transpose() };
    (0..size).into_par_iter().all(|x| {
        (0..size).all(|y| {
            let mut lhs = WeightPoly::<CycloRational>::zero();
            for (z, g) in gamma.row(x) {
                let kz = CycloRational::zeta_pow(p, k.exponent(*z, y) as u64);
                lhs = lhs.add(&g.scale(&kz));
            }
            let mut rhs = WeightPoly::<CycloRational>::zero();
            for (a, poly) in source.row(y) {
                let kx = CycloRational::zeta_pow(p, k.exponent(x, *a) as u64);
                rhs = rhs.add(&poly.map(|&c| CycloRational::from_int(&BigInt::from(c))).scale(&kx));
            }
            lhs == rhs
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccf::build_ccf;
    use crate::field::FieldContext;
    use crate::polymat::PolyMatrix;
    use crate::wam::compute_wam;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_relations() {
        let z = CycloRational::zeta_pow(3, 1);
        let z2 = z.clone() * z.clone();
        assert_eq!(z2, CycloRational::zeta_pow(3, 2));
        let sum = CycloRational::one() + z.clone() + z2.clone();
        assert!(sum.is_zero());
        assert_eq!(z.clone() * z2.clone(), CycloRational::one());
        assert_eq!(z.conj(), z2);
        assert_eq!(CycloRational::zeta_pow(2, 1), CycloRational::rational(rat(-1, 1)));
        assert!(CycloRational::zeta_pow(2, 1).is_rational());
        assert!(!z.is_rational());
        let z5 = CycloRational::zeta_pow(5, 1);
        let x = z5.clone() + CycloRational::rational(rat(1, 2));
        assert_eq!(x.clone() * x.conj(), x.conj() * x.clone());
        assert_eq!(z5.clone() * z5.conj(), CycloRational::one());
        assert_eq!(z.to_string(), "z");
        assert_eq!(z2.to_string(), "-1-z");
    }

    #[test]
    fn small_character_matrices() {
        let f2 = FieldContext::prime(2).unwrap();
        let k = CharacterMatrix::new(&f2, 1).unwrap();
        assert_eq!(k.entry(1, 1), CycloRational::rational(rat(-1, 1)));
        assert_eq!(k.entry(0, 1), CycloRational::one());
        let f3 = FieldContext::prime(3).unwrap();
        let k0 = CharacterMatrix::new(&f3, 0).unwrap();
        assert_eq!(k0.size(), 1);
        assert_eq!(k0.entry(0, 0), CycloRational::one());
        let k = CharacterMatrix::new(&f3, 2).unwrap();
        // Row (1,1) of the example: 1 ζ ζ² ζ ζ² 1 ζ² 1 ζ
        let row: Vec<u32> = (0..9).map(|y| k.exponent(4, y)).collect();
        assert_eq!(row, vec![0, 1, 2, 1, 2, 0, 2, 0, 1]);
        assert!(k.is_symmetric() && k.is_orthogonal());
        let f4 = FieldContext::new(2, 2, None).unwrap();
        assert!(CharacterMatrix::new(&f4, 2).unwrap().is_orthogonal());
    }

    /// Dense `q^{−δ} K M K̄` by explicit cyclotomic products.
    fn naive(wam: &Wam, k: &CharacterMatrix, transposed: bool) -> Vec<Vec<WeightPoly<CycloRational>>> {
        let n = k.size();
        let lift = |x: usize, y: usize| {
            let e = if transposed { wam.entry(y, x) } else { wam.entry(x, y) };
            e.map(|&c| CycloRational::from_int(&BigInt::from(c)))
        };
        let scale = CycloRational::rational(rat(1, n as i64));
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|z| {
                        let mut acc = WeightPoly::zero();
                        for y in 0..n {
                            for b in 0..n {
                                let c = k.entry(x, y) * k.entry(b, z).conj() * scale.clone();
                                acc = acc.add(&lift(y, b).scale(&c));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    fn example_wam(f: &Field) -> Wam {
        let g = PolyMatrix::from_indices(f, &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1], vec![0], vec![2]]])
            .unwrap();
        compute_wam(&build_ccf(&g).unwrap()).unwrap()
    }

    #[test]
    fn fast_transform_matches_dense_product() {
        let f = FieldContext::prime(3).unwrap();
        let wam = example_wam(&f);
        let k = CharacterMatrix::new(&f, 2).unwrap();
        for transposed in [true, false] {
            let fast = transform(&wam, &k, transposed).unwrap();
            let slow = naive(&wam, &k, transposed);
            for (x, row) in slow.iter().enumerate() {
                for (z, e) in row.iter().enumerate() {
                    assert_eq!(&fast.entry(x, z), e, "({x},{z})");
                }
            }
            assert!(check_intertwining(&fast, &wam, &k, transposed));
        }
    }

    #[test]
    fn extension_field_transform() {
        let f4 = FieldContext::new(2, 2, None).unwrap();
        let g = PolyMatrix::from_indices(&f4, &[vec![vec![1, 2], vec![1], vec![3, 1]]]).unwrap();
        let wam = compute_wam(&build_ccf(&g).unwrap()).unwrap();
        let k = CharacterMatrix::new(&f4, 1).unwrap();
        let fast = conjugate_wam(&wam, &k).unwrap();
        let slow = naive(&wam, &k, true);
        for (x, row) in slow.iter().enumerate() {
            for (z, e) in row.iter().enumerate() {
                assert_eq!(&fast.entry(x, z), e);
            }
        }
    }

    #[test]
    fn trivial_state_space() {
        let f = FieldContext::prime(3).unwrap();
        let g = PolyMatrix::from_indices(&f, &[vec![vec![1], vec![2], vec![0]]]).unwrap();
        let wam = compute_wam(&build_ccf(&g).unwrap()).unwrap();
        let k = CharacterMatrix::new(&f, 0).unwrap();
        let gamma = conjugate_wam(&wam, &k).unwrap();
        assert_eq!(gamma.entry(0, 0), wam.entry(0, 0).map(|&c| CycloRational::from_int(&BigInt::from(c))));
    }
}
