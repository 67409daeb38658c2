//! Seeded generation of random encoders and block codes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

pub type CodeRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> CodeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const MAX_ATTEMPTS: usize = 500;

fn random_element(rng: &mut impl Rng, f: &Field) -> FieldElement {
    f.elem(rng.gen_range(0..f.q()))
}

fn random_nonzero(rng: &mut impl Rng, f: &Field) -> FieldElement {
    f.elem(rng.gen_range(1..f.q()))
}

/// A polynomial of degree at most `d`; the top coefficient is nonzero when
/// `exact` is set.
pub fn random_poly(rng: &mut impl Rng, f: &Field, d: usize, exact: bool) -> Poly {
    let mut c: Vec<FieldElement> = (0..=d).map(|_| random_element(rng, f)).collect();
    if exact {
        c[d] = random_nonzero(rng, f);
    }
    Poly::new(f, c)
}

/// A random full-rank `k×n` matrix.
pub fn random_block_code(rng: &mut impl Rng, f: &Field, k: usize, n: usize) -> Result<Mat> {
    if k > n {
        return Err(Error::Structural(format!("cannot have rank {k} in length {n}")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let m = Mat::from_fn(f, k, n, |_, _| random_element(rng, f));
        if m.rank() == k {
            return Ok(m);
        }
    }
    Err(Error::Resource("no full-rank matrix found".into()))
}

/// A minimal basic `k×n` encoder with the given row degrees.
pub fn random_encoder(rng: &mut impl Rng, f: &Field, n: usize, degrees: &[usize]) -> Result<PolyMatrix> {
    let k = degrees.len();
    if k == 0 || k > n {
        return Err(Error::Structural(format!("cannot build a {k}x{n} encoder")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let g = PolyMatrix::from_fn(f, k, n, |i, _| random_poly(rng, f, degrees[i], false));
        if g.row_degrees() != degrees {
            continue;
        }
        if g.highest_row_coefficients().rank() == k && g.is_basic()? {
            return Ok(g);
        }
    }
    Err(Error::Resource(format!("no minimal basic encoder found with row degrees {degrees:?}")))
}

/// Random row degrees summing to `delta`, in random order.
pub fn random_degrees(rng: &mut impl Rng, k: usize, delta: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for _ in 0..delta {
        d[rng.gen_range(0..k)] += 1;
    }
    d.shuffle(rng);
    d
}

/// Parameters drawn for a random code: `1 ≤ k < n ≤ max_n` and a degree
/// with `q^δ ≤ max_states`.
pub fn random_code(rng: &mut impl Rng, f: &Field, max_n: usize, max_states: usize) -> Result<PolyMatrix> {
    let max_n = max_n.max(2);
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(1..n);
    let mut max_delta = 0;
    while (f.q() as usize).pow(max_delta as u32 + 1) <= max_states {
        max_delta += 1;
    }
    let delta = rng.gen_range(0..=max_delta);
    let degrees = random_degrees(rng, k, delta);
    random_encoder(rng, f, n, &degrees)
}

/// A unimodular `U` for which `U G` has the same row degrees as `G` and is
/// again minimal: `U_ij` has degree at most `dᵢ − dⱼ` (0 when `constant`)
/// and vanishes when `dⱼ > dᵢ`, and the blocks of equal degree are
/// invertible constants.
pub fn random_degree_preserving_unimodular(
    rng: &mut impl Rng,
    f: &Field,
    degrees: &[usize],
    constant: bool,
) -> PolyMatrix {
    let k = degrees.len();
    let mut classes: Vec<usize> = degrees.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut u = PolyMatrix::zeros(f, k, k);
    for &d in &classes {
        let idx: Vec<usize> = (0..k).filter(|&i| degrees[i] == d).collect();
        let block = loop {
            let m = Mat::from_fn(f, idx.len(), idx.len(), |_, _| random_element(rng, f));
            if m.is_invertible() {
                break m;
            }
        };
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                u.set(i, j, Poly::constant(f, block.get(a, b)));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if degrees[j] < degrees[i] {
                let d = if constant { 0 } else { degrees[i] - degrees[j] };
                u.set(i, j, random_poly(rng, f, d, false));
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    #[test]
    fn encoders_have_requested_shape() {
        let f = FieldContext::prime(2).unwrap();
        let mut rng = seeded_rng(7);
        for degrees in [vec![1, 2], vec![0, 3], vec![2]] {
            let g = random_encoder(&mut rng, &f, 4, &degrees).unwrap();
            assert_eq!(g.row_degrees(), degrees);
            assert!(g.is_minimal().unwrap());
        }
    }

    #[test]
    fn unimodular_factor_preserves_module_and_degrees() {
        let f = FieldContext::prime(3).unwrap();
        let mut rng = seeded_rng(11);
        let degrees = vec![2, 0, 1];
        let g = random_encoder(&mut rng, &f, 4, &degrees).unwrap();
        let u = random_degree_preserving_unimodular(&mut rng, &f, &degrees, false);
        assert!(u.determinant().is_unit());
        let h = &u * &g;
        assert_eq!(h.row_degrees(), degrees);
        assert!(h.is_minimal().unwrap());
        assert!(h.same_row_module(&g));
    }

    #[test]
    fn same_seed_same_code() {
        let f = FieldContext::prime(5).unwrap();
        let a = random_code(&mut seeded_rng(3), &f, 4, 125).unwrap();
        let b = random_code(&mut seeded_rng(3), &f, 4, 125).unwrap();
        assert_eq!(a.to_indices(), b.to_indices());
    }
}
