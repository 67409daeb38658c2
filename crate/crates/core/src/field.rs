//! Finite fields GF(p^s) with an explicit coefficient-vector encoding.
//!
//! An element `a = a_0 + a_1 α + ... + a_{s-1} α^{s-1}` is stored as its
//! index `a_0 + a_1 p + ... + a_{s-1} p^{s-1}`. The index is the canonical
//! total order used everywhere states are enumerated: `index(0) = 0`,
//! `index(1) = 1`, and for prime fields the index is the residue itself.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Shared handle to a field. Contexts are immutable once built.
pub type Field = Arc<FieldContext>;

/// A field element, identified by its index in `0..q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^s) defined by a monic irreducible modulus of degree `s` over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    p: u32,
    s: u32,
    q: u32,
    /// Ascending coefficients, length `s + 1`, monic. Empty for prime fields.
    modulus: Vec<u32>,
}

impl FieldContext {
    /// Builds GF(p^s). When `modulus` is `None` and `s > 1`, the first
    /// primitive monic irreducible polynomial in index order is used.
    pub fn new(p: u32, s: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::usage(format!("characteristic {p} is not prime")));
        }
        if s == 0 {
            return Err(Error::usage("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(s).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let Some(q) = q else {
            return Err(Error::Resource(format!(
                "field size {p}^{s} exceeds {MAX_FIELD_SIZE}"
            )));
        };
        let q = q as u32;
        if s == 1 {
            if let Some(m) = modulus {
                if !m.is_empty() {
                    return Err(Error::usage("modulus must be absent for a prime field"));
                }
            }
            return Ok(Arc::new(FieldContext { p, s, q, modulus: Vec::new() }));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != s as usize + 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::usage(format!(
                        "modulus must have {} coefficients in [0, {p})",
                        s + 1
                    )));
                }
                if m[s as usize] != 1 {
                    return Err(Error::usage("modulus must be monic"));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::usage(format!("modulus {m:?} is reducible over GF({p})")));
                }
                m
            }
            None => default_modulus(p, s),
        };
        Ok(Arc::new(FieldContext { p, s, q, modulus }))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Ascending modulus coefficients; `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.s == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given index. Panics when out of range.
    pub fn elem(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "element index {index} out of range for GF({})", self.q);
        FieldElement(index)
    }

    pub fn try_elem(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::usage(format!("element index {index} not in GF({})", self.q)))
        }
    }

    /// Image of an integer under the prime-field embedding.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    /// Checks that `a` can belong to this field.
    pub fn check(&self, a: FieldElement) -> Result<()> {
        self.try_elem(a.0).map(|_| ())
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Coefficients `a_0, ..., a_{s-1}` of `a` over GF(p).
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.s)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c % self.p;
        }
        FieldElement(idx)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.s == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.s == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.s == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let p = self.p as u64;
        let s = self.s as usize;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // Reduce with α^s = -(m_0 + ... + m_{s-1} α^{s-1}).
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..s].iter().enumerate() {
                let t = &mut prod[top - s + i];
                *t = (*t + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..s].iter().map(|&d| d as u32).collect();
        self.from_coeffs(&digits)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Trace onto the prime field, `a + a^p + ... + a^{p^{s-1}}`, as a residue mod p.
    pub fn trace(&self, a: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut frob = a;
        for _ in 0..self.s {
            acc = self.add(acc, frob);
            frob = self.pow(frob, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace left the prime field");
        acc.0
    }

    /// Generator `α` of the power basis (the class of `x`); 1 for prime fields.
    pub fn alpha(&self) -> FieldElement {
        if self.s == 1 {
            FieldElement::ONE
        } else {
            FieldElement(self.p)
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{}) mod {:?}", self.p, self.s, self.modulus)
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); ascending coefficients.
fn poly_rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p = p as u64;
    while r.len() > dm {
        let top = r.pop().unwrap() % p;
        if top == 0 {
            continue;
        }
        let base = r.len() - dm;
        for (i, &mi) in m[..dm].iter().enumerate() {
            r[base + i] = (r[base + i] + (p - top) * mi as u64) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                divisor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            divisor.push(1);
            if poly_rem_mod_p(m, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, s: u32) -> Vec<u32> {
    let count = (p as u64).pow(s);
    let q = count;
    let factors = prime_factors(q - 1);
    for low in 0..count {
        let mut m = Vec::with_capacity(s as usize + 1);
        let mut v = low;
        for _ in 0..s {
            m.push((v % p as u64) as u32);
            v /= p as u64;
        }
        m.push(1);
        if m[0] == 0 || !is_irreducible(&m, p) {
            continue;
        }
        let ctx = FieldContext { p, s, q: q as u32, modulus: m.clone() };
        let x = ctx.alpha();
        if factors.iter().all(|&l| ctx.pow(x, (q - 1) / l) != FieldElement::ONE) {
            return m;
        }
    }
    unreachable!("every finite field has a primitive element")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        FieldContext::new(2, 2, Some(vec![1, 1, 1])).unwrap()
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldContext::prime(3).unwrap();
        let two = f.elem(2);
        assert_eq!(f.add(two, two), f.elem(1));
        assert_eq!(f.inv(two).unwrap(), two);
        assert_eq!(f.neg(f.one()), two);
        assert!(matches!(f.inv(f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn gf4_alpha_squared() {
        let f = gf4();
        let alpha = f.elem(2);
        // α² = α + 1, whose index is 1 + 2 = 3.
        assert_eq!(f.mul(alpha, alpha), f.elem(3));
    }

    #[test]
    fn trace_values() {
        let f3 = FieldContext::prime(3).unwrap();
        assert_eq!(f3.trace(f3.elem(2)), 2);
        let f = gf4();
        // α + α² = α + (α + 1) = 1
        assert_eq!(f.trace(f.elem(2)), 1);
        assert_eq!(f.trace(f.zero()), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FieldContext::new(4, 1, None).is_err());
        assert!(FieldContext::new(2, 2, Some(vec![1, 0, 1])).is_err());
        assert!(FieldContext::new(2, 2, Some(vec![1, 1, 0])).is_err());
        assert!(FieldContext::new(3, 1, Some(vec![0, 1])).is_err());
        assert!(matches!(FieldContext::new(2, 17, None), Err(Error::Resource(_))));
        assert!(gf4().try_elem(4).is_err());
    }

    #[test]
    fn default_moduli_are_primitive_and_irreducible() {
        assert_eq!(FieldContext::new(2, 2, None).unwrap().modulus().unwrap(), &[1, 1, 1]);
        assert_eq!(FieldContext::new(2, 3, None).unwrap().modulus().unwrap(), &[1, 1, 0, 1]);
        let f9 = FieldContext::new(3, 2, None).unwrap();
        assert_eq!(f9.modulus().unwrap(), &[2, 1, 1]);
    }

    fn small_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for p in [2u32, 3, 5, 7, 11, 13] {
            let mut s = 1;
            while (p as u64).pow(s) <= 64 {
                out.push(FieldContext::new(p, s, None).unwrap());
                s += 1;
            }
        }
        out
    }

    #[test]
    fn exhaustive_field_axioms_and_trace() {
        for f in small_fields() {
            let els: Vec<_> = f.elements().collect();
            let mut trace_hits = vec![false; f.p() as usize];
            for &a in &els {
                trace_hits[f.trace(a) as usize] = true;
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one(), "{f}");
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                for c in 0..f.p() {
                    let c = f.elem(c);
                    assert_eq!(f.trace(f.mul(c, a)), f.mul(c, f.elem(f.trace(a))).index());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
                    let p = f.p() as u64;
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
            assert!(trace_hits.iter().all(|&h| h), "trace not surjective on {f}");
        }
    }

    #[test]
    fn index_is_a_bijection() {
        for f in small_fields() {
            let mut seen = vec![false; f.q() as usize];
            for a in f.elements() {
                let back = f.from_coeffs(&f.coeffs(a));
                assert_eq!(back, a);
                seen[a.index() as usize] = true;
            }
            assert!(seen.into_iter().all(|s| s));
            assert_eq!(f.zero().index(), 0);
            assert_eq!(f.one().index(), 1);
        }
    }
}
