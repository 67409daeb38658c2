//! The MacWilliams identity between the WAMs of a code and its dual,
//! together with the state-space isomorphism `P` that realizes it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::ccf::{build_ccf, CcfRealization};
use crate::cyclo::{conjugate_wam, CharacterMatrix, CycloRational};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::polymat::PolyMatrix;
use crate::wam::{
    compute_wam, conjugate_by_state_iso, delta_minus, delta_perp_formula, transition_spaces, StateIndexer,
    StateMatrix, SubspacePair, Wam,
};
use crate::weight::{macwilliams_kernel, mw_transform_with, WeightPoly};

/// Outcome of a single named identity.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: Some(detail.into()) }
    }
}

/// CCFs of a code and of its dual.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub primal: CcfRealization,
    pub dual: CcfRealization,
}

impl DualPair {
    /// Builds the pair from a minimal basic `G`; the dual encoder is
    /// computed when not supplied, and validated when it is.
    pub fn new(g: &PolyMatrix, g_hat: Option<&PolyMatrix>) -> Result<Self> {
        let primal = build_ccf(g)?;
        let dual_encoder = match g_hat {
            None => primal.encoder.dual_encoder()?,
            Some(h) => {
                validate_dual(&primal.encoder, h)?;
                h.clone()
            }
        };
        let dual = build_ccf(&dual_encoder)?;
        if dual.delta() != primal.delta() {
            return Err(Error::precondition("dual encoder has a different degree"));
        }
        Ok(DualPair { primal, dual })
    }

    pub fn from_ccfs(primal: CcfRealization, dual: CcfRealization) -> Result<Self> {
        validate_dual(&primal.encoder, &dual.encoder)?;
        Ok(DualPair { primal, dual })
    }

    /// The same pair seen from the dual code.
    pub fn swapped(&self) -> DualPair {
        DualPair { primal: self.dual.clone(), dual: self.primal.clone() }
    }

    pub fn delta(&self) -> usize {
        self.primal.delta()
    }
}

fn validate_dual(g: &PolyMatrix, h: &PolyMatrix) -> Result<()> {
    if **g.field() != **h.field() {
        return Err(Error::usage("encoder and dual encoder use different fields"));
    }
    if h.ncols() != g.ncols() || h.nrows() + g.nrows() != g.ncols() {
        return Err(Error::precondition(format!(
            "dual encoder must be {}x{}",
            g.ncols() - g.nrows(),
            g.ncols()
        )));
    }
    if !(g * &h.transpose()).is_zero() {
        return Err(Error::precondition("G times the transposed dual encoder is not zero"));
    }
    if !h.is_minimal()? {
        return Err(Error::precondition("dual encoder is not minimal"));
    }
    Ok(())
}

/// `S₀ = BᵀE` and `Sᵢ = BᵀB A^{i−1} C`, stored for `i ≤ len − 1`.
#[derive(Clone, Debug)]
pub struct SMatrixFamily {
    pub s: Vec<Mat>,
}

impl SMatrixFamily {
    pub fn get(&self, i: usize) -> &Mat {
        &self.s[i]
    }
}

pub fn s_matrices(ccf: &CcfRealization, upto: usize) -> SMatrixFamily {
    let bt = ccf.b.transpose();
    let btb = &bt * &ccf.b;
    let mut s = vec![&bt * &ccf.e];
    let mut power = Mat::identity(ccf.field(), ccf.delta());
    for _ in 1..=upto {
        s.push(&(&btb * &power) * &ccf.c);
        power = &power * &ccf.a;
    }
    SMatrixFamily { s }
}

/// `Σ_{i=1}^{m−1} Σ_{j ∈ js(i)} (Âᵀ)^{i−1} Ŝ_j S_{m−j}ᵀ A^{m−i−1}`.
fn n_term(
    s_hat: &SMatrixFamily,
    s: &SMatrixFamily,
    ahat_t_pows: &[Mat],
    a_pows: &[Mat],
    m: usize,
    js: impl Fn(usize) -> std::ops::Range<usize>,
) -> Mat {
    let d = a_pows[0].nrows();
    let mut acc = Mat::zeros(a_pows[0].field(), d, d);
    for i in 1..m {
        for j in js(i) {
            let t = &(&(&ahat_t_pows[i - 1] * s_hat.get(j)) * &s.get(m - j).transpose()) * &a_pows[m - i - 1];
            acc = &acc + &t;
        }
    }
    acc
}

fn powers(a: &Mat, upto: usize) -> Vec<Mat> {
    let mut out = vec![Mat::identity(a.field(), a.nrows())];
    for i in 1..=upto {
        out.push(&out[i - 1] * a);
    }
    out
}

/// `N`, `N̂` and `N̂ᵀ` as computed by the re-indexed sum.
#[derive(Clone, Debug)]
pub struct NMatrices {
    pub n: Mat,
    pub n_hat: Mat,
    pub n_hat_t_reindexed: Mat,
}

/// The finite sums defining `N` and `N̂`, truncated at `m < 2δ`; the
/// `m = 2δ` terms are computed as well and must vanish.
pub fn n_matrix(pair: &DualPair) -> Result<NMatrices> {
    let (p, d) = (&pair.primal, &pair.dual);
    let delta = pair.delta();
    let top = 2 * delta;
    let s = s_matrices(p, top.max(1));
    let s_hat = s_matrices(d, top.max(1));
    let a_pows = powers(&p.a, top.max(1));
    let ahat_pows = powers(&d.a, top.max(1));
    let at_pows: Vec<Mat> = a_pows.iter().map(Mat::transpose).collect();
    let ahat_t_pows: Vec<Mat> = ahat_pows.iter().map(Mat::transpose).collect();

    let zero = Mat::zeros(p.field(), delta, delta);
    let (mut n, mut n_hat, mut n_hat_t) = (zero.clone(), zero.clone(), zero.clone());
    for m in 2..=top {
        let t1 = n_term(&s_hat, &s, &ahat_t_pows, &a_pows, m, |i| 0..i);
        let t2 = n_term(&s, &s_hat, &at_pows, &ahat_pows, m, |i| 0..i);
        let t3 = n_term(&s_hat, &s, &ahat_t_pows, &a_pows, m, |i| i + 1..m + 1);
        if m == top {
            if !(t1.is_zero() && t2.is_zero() && t3.is_zero()) {
                return Err(Error::invariant("N-sum term at m = 2δ does not vanish"));
            }
        } else {
            n = &n + &t1;
            n_hat = &n_hat + &t2;
            n_hat_t = &n_hat_t + &t3;
        }
    }
    if n_hat.transpose() != n_hat_t {
        return Err(Error::invariant("the two expressions for the transposed dual N disagree"));
    }
    Ok(NMatrices { n, n_hat, n_hat_t_reindexed: n_hat_t })
}

/// `M₀`, `M₁`, `M₂`, their sum and `P = ĈEᵀB − NA`.
#[derive(Clone, Debug)]
pub struct MMatrices {
    pub m0: Mat,
    pub m1: Mat,
    pub m2: Mat,
    pub m: Mat,
    pub p: Mat,
}

pub fn m_matrices(pair: &DualPair, nm: &NMatrices) -> MMatrices {
    let (pr, du) = (&pair.primal, &pair.dual);
    let f = pr.field();
    let delta = pair.delta();
    let zero = Mat::zeros(f, delta, delta);
    let ct = pr.c.transpose();
    let chat_et_b = &(&du.c * &pr.e.transpose()) * &pr.b;
    let m0 = Mat::block(&(&du.c * &ct), &chat_et_b, &(&(&du.b.transpose() * &du.e) * &ct), &zero);
    let na = &nm.n * &pr.a;
    let m1 = Mat::block(&nm.n, &-&na, &zero, &zero);
    let nht = nm.n_hat.transpose();
    let m2 = Mat::block(&nht, &zero, &-&(&du.a.transpose() * &nht), &zero);
    let m = &(&m0 + &m1) + &m2;
    let p = &chat_et_b - &na;
    MMatrices { m0, m1, m2, m, p }
}

/// Identities relating the two CCFs through `S`, `N` and `M`.
pub fn algebraic_checks(pair: &DualPair, nm: &NMatrices, mm: &MMatrices) -> Vec<Check> {
    let (pr, du) = (&pair.primal, &pair.dual);
    let delta = pair.delta();
    let f = pr.field();
    let mut checks = Vec::new();
    let upto = (4 * delta).max(1);
    let s = s_matrices(pr, upto);
    let s_hat = s_matrices(du, upto);

    let a1 = (0..=4 * delta).all(|m| {
        let mut acc = Mat::zeros(f, delta, delta);
        for i in 0..=m {
            acc = &acc + &(s_hat.get(i) * &s.get(m - i).transpose());
        }
        acc.is_zero()
    });
    checks.push(Check::new("sum_i S_hat_i S_{m-i}^T = 0 for m <= 4 delta", a1));

    let a2 = |c: &CcfRealization, fam: &SMatrixFamily| {
        let at = c.a.transpose();
        let mut acc = Mat::zeros(f, c.delta(), c.n());
        let mut pw = Mat::identity(f, c.delta());
        for i in 1..=2 * c.delta() {
            acc = &acc + &(&pw * fam.get(i));
            pw = &pw * &at;
        }
        acc == c.c
    };
    checks.push(Check::new("C = sum (A^T)^(i-1) S_i", a2(pr, &s)));
    checks.push(Check::new("C_hat = sum (A_hat^T)^(i-1) S_hat_i", a2(du, &s_hat)));
    checks.push(Check::new("S_i = 0 for i > delta", (delta + 1..=upto).all(|i| s.get(i).is_zero())));

    let nht = nm.n_hat.transpose();
    let ct = pr.c.transpose();
    checks.push(Check::new("N + N_hat^T = -C_hat C^T", &nm.n + &nht == -&(&du.c * &ct)));
    let lhs = &(&du.c * &s.get(0).transpose()) + &(s_hat.get(0) * &ct);
    let rhs = &(&nm.n * &pr.a) + &(&du.a.transpose() * &nht);
    checks.push(Check::new("C_hat S_0^T + S_hat_0 C^T = N A + A_hat^T N_hat^T", lhs == rhs));
    checks.push(Check::new("N A A^T = N", &(&nm.n * &pr.a) * &pr.a.transpose() == nm.n));

    let zero = Mat::zeros(f, delta, delta);
    let expected_m = Mat::block(&zero, &mm.p, &-&mm.p, &zero);
    checks.push(Check::new("M0 + M1 + M2 = [0, P; -P, 0]", mm.m == expected_m));
    checks.push(Check::new("P invertible", mm.p.is_invertible()));
    checks
}

fn subspace_eq(name: &str, a: &Subspace, b: &Subspace) -> Check {
    if a == b {
        Check::new(name, true)
    } else {
        Check::with_detail(name, false, format!("{:?} vs {:?}", a.basis(), b.basis()))
    }
}

fn direct_sum_is(name: &str, x: &Subspace, y: &Subspace, target: &Subspace) -> Check {
    let direct = x.intersection(y).is_zero();
    let sum = x.sum(y);
    if direct && &sum == target {
        Check::new(name, true)
    } else {
        Check::with_detail(
            name,
            false,
            format!("direct = {direct}, dim sum = {}, dim target = {}", sum.dim(), target.dim()),
        )
    }
}

/// Subspace identities for the transition spaces and the kernels and
/// images of `M₀`, `M₁`, `M₂` (all acting on row vectors).
pub fn structural_subspace_report(pair: &DualPair, mm: &MMatrices) -> Result<Vec<Check>> {
    let (pr, du) = (&pair.primal, &pair.dual);
    let f = pr.field();
    let delta = pair.delta();
    let (r, r_hat) = (pr.r(), du.r());
    let sp: SubspacePair = transition_spaces(pr)?;
    let sp_hat: SubspacePair = transition_spaces(du)?;
    let full = Subspace::full(f, 2 * delta);
    let mut checks = Vec::new();

    for (label, s, c, other_r) in [("", &sp, pr, r_hat), ("dual ", &sp_hat, du, r)] {
        checks.push(Check::new(format!("{label}dim Delta = delta + r"), s.delta.dim() == delta + c.r()));
        checks.push(Check::new(format!("{label}dim Omega = delta - r_other"), s.omega.dim() == delta - other_r));
        checks.push(Check::new(format!("{label}Omega within Delta"), s.omega.is_subspace_of(&s.delta)));
        checks.push(subspace_eq(
            &format!("{label}Delta^perp = {{(X A^T, -X A^T A)}}"),
            &s.delta.orthogonal(),
            &delta_perp_formula(&c.a),
        ));
        checks.push(direct_sum_is(&format!("{label}Delta + Delta^- = F"), &s.delta, &delta_minus(&c.a), &full));
    }

    let dm_hat = delta_minus(&du.a);
    let ker_m0 = mm.m0.kernel_space();
    let ker_m1 = mm.m1.kernel_space();
    let ker_m2 = mm.m2.kernel_space();
    let im_m0 = mm.m0.row_space();
    let im_m1 = mm.m1.row_space();
    let im_m2 = mm.m2.row_space();
    let delta_perp = sp.delta.orthogonal();
    let omega_perp = sp.omega.orthogonal();
    let delta_star = ker_m1.intersection(&sp_hat.delta);

    checks.push(direct_sum_is("ker M0 = Omega_hat + Delta_hat^-", &sp_hat.omega, &dm_hat, &ker_m0));
    checks.push(direct_sum_is("ker M1 = Delta_hat^* + Delta_hat^-", &delta_star, &dm_hat, &ker_m1));
    checks.push(subspace_eq("ker M2 = Delta_hat", &ker_m2, &sp_hat.delta));
    checks.push(direct_sum_is("Delta_hat = Delta_hat^* + Omega_hat", &delta_star, &sp_hat.omega, &sp_hat.delta));
    checks.push(subspace_eq("im M1 = Delta^perp", &im_m1, &delta_perp));
    checks.push(direct_sum_is("F = Omega^perp + im M2", &omega_perp, &im_m2, &full));
    checks.push(Check::new("im M0 within Omega^perp", im_m0.is_subspace_of(&omega_perp)));
    checks.push(direct_sum_is("Omega^perp = im M0 + Delta^perp", &im_m0, &delta_perp, &omega_perp));
    checks.push(Check::new("rank M1 = delta - r", mm.m1.rank() == delta - r));
    checks.push(Check::new("Delta_hat within ker M2", sp_hat.delta.is_subspace_of(&ker_m2)));
    Ok(checks)
}

/// Largest `|K|` for which σ-orbits are also followed one vector at a time.
pub const SIGMA_BRUTE_FORCE_LIMIT: u64 = 4096;

/// Properties of `σ: K → F^δ`, `X ↦ Y` with `(X, Y) ∈ Ω`, where
/// `K = ker CÊᵀB̂`.
pub fn sigma_map_report(pair: &DualPair) -> Result<Vec<Check>> {
    let (pr, du) = (&pair.primal, &pair.dual);
    let f = pr.field();
    let delta = pair.delta();
    let r_hat = du.r();
    let map = &(&pr.c * &du.e.transpose()) * &du.b;
    let k_space = map.kernel_space();
    let mut checks = vec![
        Check::new("rank C E_hat^T B_hat = r_hat", map.rank() == r_hat),
        Check::new("dim K = delta - r_hat", k_space.dim() == delta - r_hat),
    ];

    let omega = transition_spaces(pr)?.omega;
    let ob = omega.basis();
    let xs = ob.submatrix(0..ob.nrows(), 0..delta);
    let ys = ob.submatrix(0..ob.nrows(), delta..2 * delta);
    checks.push(Check::new("projection of Omega to X is injective", xs.rank() == ob.nrows()));
    checks.push(subspace_eq("K = X-projection of Omega", &k_space, &Subspace::from_rows(&xs)));
    checks.push(Check::new("sigma injective", ys.rank() == ob.nrows()));
    if xs.rank() != ob.nrows() {
        return Ok(checks);
    }

    // σ(c·xs) = c·ys. Shrink V ⊆ K to {X ∈ V : σ(X) ∈ V} until stable.
    let sigma_rows = |v: &Mat| -> Mat {
        // Coordinates of each row of v in the basis xs.
        let coords = solve_rows(&xs, v);
        &coords * &ys
    };
    let mut v = k_space.basis().clone();
    loop {
        if v.nrows() == 0 {
            break;
        }
        let images = sigma_rows(&v);
        let ker = images.vcat(&v).left_kernel();
        let c = ker.submatrix(0..ker.nrows(), 0..v.nrows());
        let next = Subspace::from_rows(&(&c * &v));
        if next.dim() == v.nrows() {
            break;
        }
        v = next.basis().clone();
    }
    checks.push(Check::new("no nonzero sigma-invariant subspace of K", v.nrows() == 0));

    let q = f.q() as u64;
    let size = q.pow(k_space.dim() as u32);
    if size <= SIGMA_BRUTE_FORCE_LIMIT {
        let limit = q.pow(delta as u32);
        let mut all_exit = true;
        for x in k_space.vectors() {
            let mut cur = x;
            let mut steps = 0u64;
            while !cur.iter().all(|c| c.is_zero()) && k_space.contains(&cur) {
                if steps > limit {
                    all_exit = false;
                    break;
                }
                let m = Mat::from_rows(f, delta, std::slice::from_ref(&cur));
                cur = sigma_rows(&m).row(0).to_vec();
                steps += 1;
            }
        }
        checks.push(Check::new("every sigma orbit leaves K or reaches 0", all_exit));
    }
    Ok(checks)
}

/// Solves `c · basis = v` row by row for a full-row-rank `basis` whose
/// row space contains every row of `v`.
fn solve_rows(basis: &Mat, v: &Mat) -> Mat {
    let f = basis.field();
    let b = basis.nrows();
    let mut out = Mat::zeros(f, v.nrows(), b);
    for i in 0..v.nrows() {
        let stacked = basis.vcat(&v.select_rows(&[i]));
        let ker = stacked.left_kernel();
        let row = (0..ker.nrows()).find(|&r| !ker.get(r, b).is_zero()).expect("vector lies in the span");
        let inv = f.inv(ker.get(row, b)).expect("nonzero");
        for j in 0..b {
            out.set(i, j, f.neg(f.mul(ker.get(row, j), inv)));
        }
    }
    out
}

/// Position and values of the first entry where two state matrices differ.
#[derive(Clone, Debug, Serialize)]
pub struct EntryFailure {
    pub x: usize,
    pub y: usize,
    pub expected: String,
    pub found: String,
}

/// Failure to turn a transformed entry into a weight enumerator.
#[derive(Clone, Debug)]
pub struct IntegralityFailure {
    pub x: usize,
    pub y: usize,
    pub value: String,
}

/// `q^{−k} H(Γ)` entrywise; every entry must come out as a polynomial with
/// nonnegative integer coefficients.
///
/// Entries of `q^δ Γ` that are rational are integers, and those go through
/// integer arithmetic; anything else is transformed over the cyclotomic field.
pub fn macwilliams_image(
    gamma: &StateMatrix<CycloRational>,
    n: usize,
    q: u64,
    k: usize,
) -> Result<std::result::Result<Wam, IntegralityFailure>> {
    let kernel = macwilliams_kernel(n, q);
    let q_delta = BigInt::from(q).pow(gamma.delta as u32);
    let q_k = BigInt::from(q).pow(k as u32);
    let denom = &q_delta * &q_k;
    let scale = CycloRational::rational(BigRational::new(BigInt::one(), q_k));
    let to_count = |v: &BigInt| -> Option<i64> {
        (!v.is_negative() && (v % &denom).is_zero()).then(|| (v / &denom).to_i64()).flatten()
    };
    let transform = |x: usize, y: usize, g: &WeightPoly<CycloRational>| {
        let fail = |value: String| IntegralityFailure { x, y, value };
        let scaled = g.try_map(|c| {
            let r = c.as_rational()? * BigRational::from_integer(q_delta.clone());
            r.is_integer().then(|| r.to_integer())
        });
        if let Some(int_poly) = scaled {
            let h = mw_transform_with(&int_poly, &kernel).map_err(|e| fail(e.to_string()))?;
            return h.try_map(to_count).ok_or_else(|| fail(format!("{h:?} / {denom}")));
        }
        let h = mw_transform_with(g, &kernel).map_err(|e| fail(e.to_string()))?.scale(&scale);
        h.try_map(|c| {
            let r = c.as_rational()?;
            (r.is_integer() && !r.is_negative()).then(|| r.to_integer().to_i64()).flatten()
        })
        .ok_or_else(|| fail(format!("{h:?}")))
    };
    let rows: Vec<std::result::Result<Vec<(usize, WeightPoly<i64>)>, IntegralityFailure>> = (0..gamma.size())
        .into_par_iter()
        .map(|x| gamma.row(x).iter().map(|(y, g)| Ok((*y, transform(x, *y, g)?))).collect())
        .collect();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        match r {
            Ok(row) => out.push(row),
            Err(fail) => return Ok(Err(fail)),
        }
    }
    Ok(Ok(StateMatrix::from_rows(gamma.delta, gamma.q, out)))
}

/// Compares two state matrices entrywise; returns the number of differing
/// entries and the first one in row-major order.
pub fn compare_state_matrices(expected: &Wam, found: &Wam) -> (u64, Option<EntryFailure>) {
    let mut mismatches = 0u64;
    let mut first = None;
    for x in 0..expected.size() {
        let mut cols: Vec<usize> =
            expected.row(x).iter().map(|(c, _)| *c).chain(found.row(x).iter().map(|(c, _)| *c)).collect();
        cols.sort_unstable();
        cols.dedup();
        for y in cols {
            let (e, f) = (expected.entry(x, y), found.entry(x, y));
            if e != f {
                mismatches += 1;
                if first.is_none() {
                    first = Some(EntryFailure { x, y, expected: e.to_string(), found: f.to_string() });
                }
            }
        }
    }
    (mismatches, first)
}

/// Everything established while verifying the identity for a dual pair.
#[derive(Clone, Debug)]
pub struct DualityCertificate {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub r: usize,
    pub r_hat: usize,
    pub permutation: Vec<usize>,
    pub dual_permutation: Vec<usize>,
    pub n_matrix: Mat,
    pub n_hat: Mat,
    pub m0: Mat,
    pub m1: Mat,
    pub m2: Mat,
    pub m: Mat,
    pub p: Mat,
    pub checks: Vec<Check>,
    pub entries_checked: u64,
    pub mismatches: u64,
    pub first_failure: Option<EntryFailure>,
    pub passed: bool,
}

/// Verifies `Λ̂_{X,Y} = Φ_{XP,YP}` with `Φ = q^{−k} H(q^{−δ} K Λᵀ K̄)` for
/// every pair of states.
pub fn verify_macwilliams(g: &PolyMatrix, g_hat: Option<&PolyMatrix>) -> Result<DualityCertificate> {
    verify_pair(&DualPair::new(g, g_hat)?)
}

pub fn verify_pair(pair: &DualPair) -> Result<DualityCertificate> {
    let (pr, du) = (&pair.primal, &pair.dual);
    let f = pr.field().clone();
    let delta = pair.delta();
    StateIndexer::new(&f, delta)?;
    let nm = n_matrix(pair)?;
    let mm = m_matrices(pair, &nm);
    let mut checks = algebraic_checks(pair, &nm, &mm);
    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(Error::invariant(format!("identity failed: {}", bad.name)));
    }
    checks.extend(structural_subspace_report(pair, &mm)?);
    checks.extend(sigma_map_report(pair)?);

    let wam = compute_wam(pr)?;
    let dual_wam = compute_wam(du)?;
    let k_mat = CharacterMatrix::new(&f, delta)?;
    let gamma = conjugate_wam(&wam, &k_mat)?;
    let total = (dual_wam.size() as u64).pow(2);
    let (mismatches, first_failure) = match macwilliams_image(&gamma, pr.n(), f.q() as u64, pr.k())? {
        Ok(phi) => {
            let moved = conjugate_by_state_iso(&phi, &mm.p)?;
            compare_state_matrices(&dual_wam, &moved)
        }
        Err(fail) => (
            1,
            Some(EntryFailure {
                x: fail.x,
                y: fail.y,
                expected: "polynomial with nonnegative integer coefficients".into(),
                found: fail.value,
            }),
        ),
    };
    let passed = mismatches == 0 && checks.iter().all(|c| c.passed);
    Ok(DualityCertificate {
        q: f.q(),
        n: pr.n(),
        k: pr.k(),
        delta,
        r: pr.r(),
        r_hat: du.r(),
        permutation: pr.permutation.clone(),
        dual_permutation: du.permutation.clone(),
        n_matrix: nm.n,
        n_hat: nm.n_hat,
        m0: mm.m0,
        m1: mm.m1,
        m2: mm.m2,
        m: mm.m,
        p: mm.p,
        checks,
        entries_checked: total,
        mismatches,
        first_failure,
        passed,
    })
}
