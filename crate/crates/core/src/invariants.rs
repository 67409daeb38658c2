//! Structural properties of a CCF, its WAM and a dual pair, reported as
//! named checks. These back `ccode check-invariants` and the property tests.

use num_bigint::BigInt;

use crate::ccf::CcfRealization;
use crate::duality::{algebraic_checks, m_matrices, n_matrix, sigma_map_report, structural_subspace_report, Check, DualPair};
use crate::error::Result;
use crate::linalg::{Mat, Subspace};
use crate::wam::{transition_spaces, StateIndexer, Wam};
use crate::weight::{mw_transform, subspace_enumerator, BLOCK_BRUTE_FORCE_LIMIT};

/// Identities satisfied by the matrices of any CCF.
pub fn ccf_checks(ccf: &CcfRealization) -> Vec<Check> {
    let f = ccf.field();
    let (k, r) = (ccf.k(), ccf.r());
    let (a, b, c, e) = (&ccf.a, &ccf.b, &ccf.c, &ccf.e);
    let (at, bt) = (a.transpose(), b.transpose());
    let mut out = vec![
        Check::new("A B^T = 0", (a * &bt).is_zero()),
        Check::new("B B^T B = B", &(b * &bt) * b == *b),
        Check::new("A A^T A = A", &(a * &at) * a == *a),
    ];

    let unit_rows = |from: usize, to: usize| {
        Subspace::from_rows(&Mat::from_fn(f, to - from, k, |i, j| if j == from + i { f.one() } else { f.zero() }))
    };
    out.push(Check::new("im B^T = im (I_r, 0)", bt.row_space() == unit_rows(0, r)));
    out.push(Check::new("ker B = im (0, I_{k-r})", b.kernel_space() == unit_rows(r, k)));
    out.push(Check::new("im A and im B meet in 0", a.row_space().intersection(&b.row_space()).is_zero()));

    let c_const = ccf.c_const();
    let ker_b_e = b.kernel_space().image_under(e);
    out.push(Check::new("C_const = (ker B) E", ker_b_e == c_const));
    let bte = (&bt * e).row_space();
    let direct = bte.intersection(&c_const).is_zero() && bte.sum(&c_const) == e.row_space();
    out.push(Check::new("im E = im B^T E + C_const (direct)", direct));

    let ker_a = a.kernel_space();
    out.push(Check::new("ker A and ker C meet in 0", ker_a.intersection(&c.kernel_space()).is_zero()));
    out.push(Check::new("(ker A) C and C_const meet in 0", ker_a.image_under(c).intersection(&c_const).is_zero()));
    out.push(Check::new("rank E = k", e.rank() == k));
    out
}

/// Properties of a WAM that follow from its definition.
pub fn wam_checks(ccf: &CcfRealization, wam: &Wam) -> Result<Vec<Check>> {
    let f = ccf.field();
    let q = f.q() as i64;
    let (k, r) = (ccf.k() as u32, ccf.r() as u32);
    let delta_space = transition_spaces(ccf)?.delta;
    let states = StateIndexer::new(f, ccf.delta())?;

    let per_row = (0..wam.size()).all(|x| wam.row(x).len() as i64 == q.pow(r));
    let entry_mass = wam.entries().all(|(_, _, w)| w.total() == q.pow(k - r));
    let row_mass = (0..wam.size()).all(|x| wam.row(x).iter().map(|(_, w)| w.total()).sum::<i64>() == q.pow(k));
    let support_in_delta = wam.entries().all(|(x, y, _)| {
        let mut v = states.vector(x);
        v.extend(states.vector(y));
        delta_space.contains(&v)
    });
    let support_size = wam.nnz() as u64 == (q as u64).pow(delta_space.dim() as u32);

    let l00 = wam.entry(0, 0);
    let dominated = l00.sub(&subspace_enumerator(&ccf.c_const())).coeffs().iter().all(|&c| c >= 0);
    Ok(vec![
        Check::new("support of the WAM = Delta", support_in_delta && support_size),
        Check::new("q^r nonzero entries per row", per_row),
        Check::new("each nonzero entry at W=1 is q^(k-r)", entry_mass),
        Check::new("each row at W=1 sums to q^k", row_mass),
        Check::new("Lambda_00 has constant term >= 1", l00.coeff(0) >= 1),
        Check::new("Lambda_00 dominates we(C_const)", dominated),
    ])
}

/// Dimensions of the constant and coefficient codes of a dual pair, their
/// orthogonality and the block MacWilliams identity relating them.
pub fn block_code_checks(pair: &DualPair) -> Result<Vec<Check>> {
    let (pr, du) = (&pair.primal, &pair.dual);
    let (n, k, r, r_hat) = (pr.n(), pr.k(), pr.r(), du.r());
    let c_coeff = pr.c_coeff();
    let c_hat_const = du.c_const();
    let mut out = vec![
        Check::new("dim C_const = k - r", pr.c_const().dim() == k - r),
        Check::new("dim C_hat_const = n - k - r_hat", c_hat_const.dim() == n - k - r_hat),
        Check::new("dim C_coeff = k + r_hat", c_coeff.dim() == k + r_hat),
        Check::new("dim C_hat_coeff = n - k + r", du.c_coeff().dim() == n - k + r),
        Check::new("C_coeff^perp = C_hat_const", c_coeff.orthogonal() == c_hat_const),
        Check::new("C_hat_coeff^perp = C_const", du.c_coeff().orthogonal() == pr.c_const()),
    ];
    let q = pr.field().q() as u64;
    let size = (q as f64).powi(c_coeff.dim() as i32);
    if size <= BLOCK_BRUTE_FORCE_LIMIT as f64 {
        let lhs = subspace_enumerator(&c_hat_const).map(|&c| BigInt::from(c) * BigInt::from(q).pow(c_coeff.dim() as u32));
        let rhs = mw_transform(&subspace_enumerator(&c_coeff).map(|&c| BigInt::from(c)), n, q)?;
        out.push(Check::new("q^(k+r_hat) we(C_hat_const) = H(we(C_coeff))", lhs == rhs));
    } else {
        out.push(Check::with_detail(
            "q^(k+r_hat) we(C_hat_const) = H(we(C_coeff))",
            true,
            "skipped: coefficient code too large to enumerate",
        ));
    }
    Ok(out)
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("{prefix}{}", c.name);
        c
    })
}

/// Every structural check for a dual pair, without the main identity.
pub fn check_invariants(pair: &DualPair, wams: Option<(&Wam, &Wam)>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    out.extend(prefixed("ccf: ", ccf_checks(&pair.primal)));
    out.extend(prefixed("dual ccf: ", ccf_checks(&pair.dual)));
    if let Some((w, w_hat)) = wams {
        out.extend(prefixed("wam: ", wam_checks(&pair.primal, w)?));
        out.extend(prefixed("dual wam: ", wam_checks(&pair.dual, w_hat)?));
    }
    out.extend(prefixed("block: ", block_code_checks(pair)?));
    let nm = n_matrix(pair)?;
    let mm = m_matrices(pair, &nm);
    out.extend(prefixed("pair: ", algebraic_checks(pair, &nm, &mm)));
    out.extend(prefixed("subspaces: ", structural_subspace_report(pair, &mm)?));
    out.extend(prefixed("sigma: ", sigma_map_report(pair)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::polymat::PolyMatrix;
    use crate::wam::compute_wam;

    #[test]
    fn example_passes_everything() {
        let f = FieldContext::prime(3).unwrap();
        let g = PolyMatrix::from_indices(&f, &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1], vec![0], vec![2]]])
            .unwrap();
        let pair = DualPair::new(&g, None).unwrap();
        let w = compute_wam(&pair.primal).unwrap();
        let wh = compute_wam(&pair.dual).unwrap();
        for c in check_invariants(&pair, Some((&w, &wh))).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
