//! Weight adjacency matrices and the transition spaces of a CCF.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ccf::CcfRealization;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{vec_add, weight, Mat, Subspace};
use crate::weight::{Ring, WeightPoly};

/// Default bound on the number of states `q^δ`.
pub const DEFAULT_MAX_STATES: usize = 1024;

/// Bound on the number of transitions `q^{δ+k}` enumerated by [`compute_wam`].
pub const MAX_TRANSITIONS: u64 = 1 << 26;

/// Largest `|GL_δ(F_q)|` searched by [`wams_equivalent`].
pub const MAX_GL_ORDER: u64 = 100_000;

/// State bound, overridable through `CCDUAL_MAX_STATES`.
pub fn max_states() -> usize {
    std::env::var("CCDUAL_MAX_STATES").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_STATES)
}

/// Checks `q^δ` against [`max_states`] and returns it.
pub fn check_state_envelope(q: u32, delta: usize) -> Result<usize> {
    let limit = max_states();
    match (q as u64).checked_pow(delta as u32) {
        Some(size) if size <= limit as u64 => Ok(size as usize),
        _ => Err(Error::Resource(format!("q^delta = {q}^{delta} exceeds the state limit {limit}"))),
    }
}

/// Lexicographic bijection `F_q^δ ↔ {0, …, q^δ − 1}`, leftmost coordinate
/// most significant.
#[derive(Clone, Debug)]
pub struct StateIndexer {
    field: Field,
    delta: usize,
    size: usize,
}

impl StateIndexer {
    pub fn new(field: &Field, delta: usize) -> Result<Self> {
        let size = check_state_envelope(field.q(), delta)?;
        Ok(StateIndexer { field: field.clone(), delta, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn index(&self, x: &[FieldElement]) -> usize {
        let q = self.field.q() as usize;
        x.iter().fold(0, |acc, e| acc * q + e.index() as usize)
    }

    pub fn vector(&self, mut idx: usize) -> Vec<FieldElement> {
        let q = self.field.q() as usize;
        let mut v = vec![FieldElement::ZERO; self.delta];
        for slot in v.iter_mut().rev() {
            *slot = self.field.elem((idx % q) as u32);
            idx /= q;
        }
        v
    }

    /// `index(X) ↦ index(XP)` for all states.
    pub fn permutation(&self, p: &Mat) -> Vec<usize> {
        (0..self.size).map(|i| self.index(&p.vec_mul(&self.vector(i)))).collect()
    }
}

/// Square matrix indexed by states with weight-polynomial entries; only
/// nonzero entries are stored, each row sorted by column.
#[derive(Clone, PartialEq, Debug)]
pub struct StateMatrix<R: Ring> {
    pub delta: usize,
    pub q: u32,
    rows: Vec<Vec<(usize, WeightPoly<R>)>>,
}

/// The weight adjacency matrix.
pub type Wam = StateMatrix<i64>;

impl<R: Ring> StateMatrix<R> {
    /// Builds from per-row entry lists; zero entries are dropped.
    pub fn from_rows(delta: usize, q: u32, rows: Vec<Vec<(usize, WeightPoly<R>)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, p)| !p.is_zero());
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        StateMatrix { delta, q, rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, WeightPoly<R>)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&WeightPoly<R>> {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |(c, _)| *c).ok().map(|pos| &row[pos].1)
    }

    /// Entry with zero for absent positions.
    pub fn entry(&self, i: usize, j: usize) -> WeightPoly<R> {
        self.get(i, j).cloned().unwrap_or_else(WeightPoly::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &WeightPoly<R>)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, p)| (i, *j, p)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.size()];
        for (i, j, p) in self.entries() {
            rows[j].push((i, p.clone()));
        }
        Self::from_rows(self.delta, self.q, rows)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&WeightPoly<R>) -> WeightPoly<S>) -> StateMatrix<S> {
        StateMatrix::from_rows(
            self.delta,
            self.q,
            self.rows.iter().map(|r| r.iter().map(|(j, p)| (*j, f(p))).collect()).collect(),
        )
    }
}

/// `Λ_{X,Y} = we{XC + uE : u ∈ F^k, Y = XA + uB}`.
pub fn compute_wam(ccf: &CcfRealization) -> Result<Wam> {
    let f = ccf.field();
    let (delta, k, n) = (ccf.delta(), ccf.k(), ccf.n());
    let states = StateIndexer::new(f, delta)?;
    let q = f.q() as u64;
    let transitions = q.checked_pow((delta + k) as u32).filter(|&t| t <= MAX_TRANSITIONS);
    if transitions.is_none() {
        return Err(Error::Resource(format!("q^(delta+k) exceeds {MAX_TRANSITIONS} transitions")));
    }
    let inputs = StateIndexer { field: f.clone(), delta: k, size: q.pow(k as u32) as usize };
    let input_terms: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = (0..inputs.size())
        .map(|i| {
            let u = inputs.vector(i);
            (ccf.b.vec_mul(&u), ccf.e.vec_mul(&u))
        })
        .collect();

    let rows: Vec<Vec<(usize, WeightPoly<i64>)>> = (0..states.size())
        .into_par_iter()
        .map(|xi| {
            let x = states.vector(xi);
            let xa = ccf.a.vec_mul(&x);
            let xc = ccf.c.vec_mul(&x);
            let mut acc: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
            for (ub, ue) in &input_terms {
                let y = states.index(&vec_add(f, &xa, ub));
                let w = weight(&vec_add(f, &xc, ue));
                acc.entry(y).or_insert_with(|| vec![0; n + 1])[w] += 1;
            }
            acc.into_iter().map(|(y, c)| (y, WeightPoly::new(c))).collect()
        })
        .collect();
    Ok(StateMatrix::from_rows(delta, f.q(), rows))
}

/// `Δ` (state pairs admitting a transition) and `Ω` (pairs admitting a
/// transition whose output lies in `C_const`), as subspaces of `F^{2δ}`.
#[derive(Clone, Debug)]
pub struct SubspacePair {
    pub delta: Subspace,
    pub omega: Subspace,
}

/// `[I, A; 0, B]`, mapping `(X, u)` to `(X, XA + uB)`.
fn transition_map(ccf: &CcfRealization) -> Mat {
    let f = ccf.field();
    let d = ccf.delta();
    Mat::block(&Mat::identity(f, d), &ccf.a, &Mat::zeros(f, ccf.k(), d), &ccf.b)
}

/// Largest `q^{δ+k}` for which `Ω` is also found by enumerating transitions.
pub const OMEGA_BRUTE_FORCE_LIMIT: u64 = 1 << 16;

pub fn transition_spaces(ccf: &CcfRealization) -> Result<SubspacePair> {
    let f = ccf.field();
    let (d, k) = (ccf.delta(), ccf.k());
    let t = transition_map(ccf);
    let delta = Subspace::from_rows(&t);

    // Ω from its definition: XC + YBᵀE ∈ C_const with Y = XA + uB.
    let bte = &ccf.b.transpose() * &ccf.e;
    let cconst = ccf.c_const();
    let stacked = (&ccf.c + &(&ccf.a * &bte)).vcat(&(&ccf.b * &bte)).vcat(cconst.basis());
    let ker = stacked.left_kernel();
    let xu = ker.submatrix(0..ker.nrows(), 0..d + k);
    let omega = Subspace::from_rows(&(&xu * &t));

    // Zero-output transitions: XC + uE = 0.
    let ker0 = ccf.c.vcat(&ccf.e).left_kernel();
    let omega0 = Subspace::from_rows(&(&ker0 * &t));
    if omega != omega0 {
        return Err(Error::invariant("Omega differs from the zero-output transition space"));
    }

    let q = f.q() as u64;
    if q.checked_pow((d + k) as u32).is_some_and(|n| n <= OMEGA_BRUTE_FORCE_LIMIT) {
        let inputs = StateIndexer { field: f.clone(), delta: d + k, size: q.pow((d + k) as u32) as usize };
        let pairs = StateIndexer { field: f.clone(), delta: 2 * d, size: 0 };
        let mut found = std::collections::BTreeSet::new();
        for i in 0..inputs.size() {
            let xu = inputs.vector(i);
            let (x, u) = xu.split_at(d);
            let (y, v) = ccf.step_unchecked(x, u);
            if v.iter().all(|c| c.is_zero()) {
                let pair: Vec<FieldElement> = x.iter().chain(y.iter()).copied().collect();
                if !omega.contains(&pair) {
                    return Err(Error::invariant("zero-output transition outside Omega"));
                }
                found.insert(pairs.index(&pair));
            }
        }
        if found.len() as u64 != q.pow(omega.dim() as u32) {
            return Err(Error::invariant("zero-output transitions do not cover Omega"));
        }
    }
    Ok(SubspacePair { delta, omega })
}

/// `Δ⁻ = {(0, Y) : Y ∈ im A}`.
pub fn delta_minus(a: &Mat) -> Subspace {
    let f = a.field();
    let d = a.nrows();
    Subspace::from_rows(&Mat::zeros(f, d, d).hcat(a))
}

/// `{(XAᵀ, −XAᵀA)}`, the orthogonal complement of `Δ`.
pub fn delta_perp_formula(a: &Mat) -> Subspace {
    let at = a.transpose();
    Subspace::from_rows(&at.hcat(&-&(&at * a)))
}

/// `out(X, Y) = m(XP, YP)`.
pub fn conjugate_by_state_iso<R: Ring>(m: &StateMatrix<R>, p: &Mat) -> Result<StateMatrix<R>> {
    let f = p.field();
    if p.nrows() != m.delta || p.ncols() != m.delta || f.q() != m.q {
        return Err(Error::usage("state isomorphism does not match the matrix"));
    }
    if !p.is_invertible() {
        return Err(Error::precondition("state isomorphism is singular"));
    }
    let states = StateIndexer::new(f, m.delta)?;
    let perm = states.permutation(p);
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    let rows = perm.iter().map(|&src| m.row(src).iter().map(|(c, w)| (inv[*c], w.clone())).collect()).collect();
    Ok(StateMatrix::from_rows(m.delta, m.q, rows))
}

/// Order of `GL_δ(F_q)`, or `None` on overflow.
pub fn gl_order(q: u64, delta: usize) -> Option<u64> {
    let qd = q.checked_pow(delta as u32)?;
    (0..delta).try_fold(1u64, |acc, i| acc.checked_mul(qd - q.pow(i as u32)))
}

/// Searches `GL_δ(F_q)` for `P` with `m1(X, Y) = m2(XP, YP)` for all states.
///
/// Rows of `P` are chosen one at a time; after fixing the images of the
/// first `i` unit vectors every pair of states supported on those
/// coordinates is compared, which prunes most branches early.
pub fn wams_equivalent<R: Ring>(m1: &StateMatrix<R>, m2: &StateMatrix<R>, field: &Field) -> Result<Option<Mat>> {
    if m1.delta != m2.delta || m1.q != m2.q || field.q() != m1.q {
        return Ok(None);
    }
    let d = m1.delta;
    let q = field.q() as u64;
    if gl_order(q, d).is_none_or(|o| o > MAX_GL_ORDER) {
        return Err(Error::Resource(format!("|GL_{d}(F_{q})| exceeds {MAX_GL_ORDER}")));
    }
    if m1.entry(0, 0) != m2.entry(0, 0) {
        return Ok(None);
    }
    let states = StateIndexer::new(field, d)?;
    let mut chosen: Vec<Vec<FieldElement>> = Vec::new();
    Ok(search(m1, m2, &states, field, &mut chosen))
}

fn search<R: Ring>(
    m1: &StateMatrix<R>,
    m2: &StateMatrix<R>,
    states: &StateIndexer,
    field: &Field,
    chosen: &mut Vec<Vec<FieldElement>>,
) -> Option<Mat> {
    let d = m1.delta;
    if chosen.len() == d {
        return Some(Mat::from_rows(field, d, chosen));
    }
    for cand in 1..states.size() {
        let row = states.vector(cand);
        chosen.push(row);
        let partial = Mat::from_rows(field, d, chosen);
        if partial.rank() == chosen.len() && consistent(m1, m2, states, field, chosen) {
            if let Some(p) = search(m1, m2, states, field, chosen) {
                return Some(p);
            }
        }
        chosen.pop();
    }
    None
}

/// Compares all pairs supported on the first `chosen.len()` coordinates,
/// where at least one of the pair involves the most recently chosen row.
fn consistent<R: Ring>(
    m1: &StateMatrix<R>,
    m2: &StateMatrix<R>,
    states: &StateIndexer,
    field: &Field,
    chosen: &[Vec<FieldElement>],
) -> bool {
    let d = m1.delta;
    let t = chosen.len();
    let q = field.q() as usize;
    let sub = q.pow(t as u32);
    let image = |c: &[FieldElement]| -> usize {
        let mut acc = vec![FieldElement::ZERO; d];
        for (ci, row) in c.iter().zip(chosen) {
            if !ci.is_zero() {
                let scaled: Vec<FieldElement> = row.iter().map(|&r| field.mul(*ci, r)).collect();
                acc = vec_add(field, &acc, &scaled);
            }
        }
        states.index(&acc)
    };
    let embed = |j: usize| -> (usize, Vec<FieldElement>) {
        let mut v = StateIndexer { field: field.clone(), delta: t, size: sub }.vector(j);
        let coords = v.clone();
        v.resize(d, FieldElement::ZERO);
        (states.index(&v), coords)
    };
    let points: Vec<(usize, usize, bool)> = (0..sub)
        .map(|j| {
            let (idx, coords) = embed(j);
            (idx, image(&coords), !coords[t - 1].is_zero())
        })
        .collect();
    for &(x, xp, xnew) in &points {
        for &(y, yp, ynew) in &points {
            if (xnew || ynew) && m1.get(x, y) != m2.get(xp, yp) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccf::build_ccf;
    use crate::field::FieldContext;
    use crate::polymat::PolyMatrix;

    fn example_ccf() -> CcfRealization {
        let f = FieldContext::prime(3).unwrap();
        let g = PolyMatrix::from_indices(&f, &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1], vec![0], vec![2]]])
            .unwrap();
        build_ccf(&g).unwrap()
    }

    #[test]
    fn indexer_order() {
        let f = FieldContext::prime(3).unwrap();
        let s = StateIndexer::new(&f, 2).unwrap();
        let v: Vec<Vec<u32>> = (0..4).map(|i| s.vector(i).iter().map(|e| e.index()).collect()).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0]]);
        for i in 0..9 {
            assert_eq!(s.index(&s.vector(i)), i);
        }
    }

    #[test]
    fn example_entry_six_two() {
        let wam = compute_wam(&example_ccf()).unwrap();
        assert_eq!(wam.entry(5, 1), WeightPoly::new(vec![0, 0, 2, 1]));
        assert_eq!(wam.entry(0, 0), WeightPoly::new(vec![1, 0, 2]));
        assert_eq!(wam.nnz(), 27);
    }

    #[test]
    fn example_spaces() {
        let ccf = example_ccf();
        let sp = transition_spaces(&ccf).unwrap();
        assert_eq!((sp.delta.dim(), sp.omega.dim()), (3, 1));
        assert_eq!(ccf.c_const().dim(), 1);
        assert_eq!(ccf.c_coeff().dim(), 3);
    }

    #[test]
    fn conjugation_is_a_group_action() {
        let ccf = example_ccf();
        let f = ccf.field().clone();
        let wam = compute_wam(&ccf).unwrap();
        let p = Mat::from_indices(&f, &[&[1, 1], &[1, 2]]);
        let there = conjugate_by_state_iso(&wam, &p).unwrap();
        let back = conjugate_by_state_iso(&there, &p.inverse().unwrap()).unwrap();
        assert_eq!(back, wam);
        assert_eq!(conjugate_by_state_iso(&wam, &Mat::identity(&f, 2)).unwrap(), wam);
        let found = wams_equivalent(&there, &wam, &f).unwrap().unwrap();
        assert_eq!(conjugate_by_state_iso(&wam, &found).unwrap(), there);
        let singular = Mat::from_indices(&f, &[&[1, 1], &[1, 1]]);
        assert!(matches!(conjugate_by_state_iso(&wam, &singular), Err(Error::Precondition(_))));
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), Some(6));
        assert_eq!(gl_order(3, 2), Some(48));
        assert_eq!(gl_order(5, 0), Some(1));
    }
}
