//! The identity in sequence-space form: the WAM of a code against the WAM
//! of the reversal of its dual.

use crate::ccf::{build_ccf, CcfRealization};
use crate::cyclo::{conjugate_wam_untransposed, CharacterMatrix};
use crate::duality::{
    algebraic_checks, compare_state_matrices, m_matrices, macwilliams_image, n_matrix, Check, DualPair,
    EntryFailure,
};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::polymat::PolyMatrix;
use crate::wam::{compute_wam, conjugate_by_state_iso, Wam};

/// CCF of the reversed code, with `[C′; E′] = L [C; E]`.
///
/// The result is compared against the CCF built directly from the
/// reciprocal encoder; the two must agree matrix for matrix.
pub fn reversal_ccf(ccf: &CcfRealization) -> Result<CcfRealization> {
    let f = ccf.field();
    let l = ccf.l_matrix();
    if &l * &l.transpose() != Mat::identity(f, ccf.delta() + ccf.k()) {
        return Err(Error::invariant("L is not orthogonal"));
    }
    let ce = &l * &ccf.c.vcat(&ccf.e);
    let c_rev = ce.submatrix(0..ccf.delta(), 0..ccf.n());
    let e_rev = ce.submatrix(ccf.delta()..ccf.delta() + ccf.k(), 0..ccf.n());

    let direct = build_ccf(&ccf.encoder.reciprocal()?)?;
    let identity: Vec<usize> = (0..ccf.k()).collect();
    if direct.permutation != identity || direct.a != ccf.a || direct.b != ccf.b {
        return Err(Error::invariant("reversed encoder has a different state structure"));
    }
    if direct.c != c_rev || direct.e != e_rev {
        return Err(Error::invariant("reversed CCF disagrees with the reciprocal encoder"));
    }
    Ok(direct)
}

/// Checks `Λ′_{X,Y} = Λ_{YR,XR}` for the WAM `Λ′` of the reversed code.
pub fn reversal_wam_check(wam: &Wam, reversed: &Wam, r: &Mat) -> Result<(u64, Option<EntryFailure>)> {
    let moved = conjugate_by_state_iso(&wam.transpose(), r)?;
    Ok(compare_state_matrices(reversed, &moved))
}

#[derive(Clone, Debug)]
pub struct SequenceCertificate {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub r_matrix: Mat,
    pub l_matrix: Mat,
    pub c_reversed: Mat,
    pub e_reversed: Mat,
    /// Encoder of the reversed dual, rows sorted as in its CCF.
    pub reversed_dual: PolyMatrix,
    pub p_tilde: Mat,
    pub q_matrix: Mat,
    pub checks: Vec<Check>,
    pub entries_checked: u64,
    pub mismatches: u64,
    pub first_failure: Option<EntryFailure>,
    pub passed: bool,
}

/// Verifies `Λ̃_{XQ,YQ} = q^{−k} H(q^{−δ} K Λ K̄)_{X,Y}`, where `Λ̃` is the
/// WAM of the reversed dual and `Q = R P̃^{−1}`.
pub fn verify_sequence_macwilliams(g: &PolyMatrix) -> Result<SequenceCertificate> {
    let ccf = build_ccf(g)?;
    let f = ccf.field().clone();
    let delta = ccf.delta();
    let rev = reversal_ccf(&ccf)?;
    let dual = ccf.encoder.dual_encoder()?;
    let tilde_encoder = dual.reciprocal()?;
    let mut checks = vec![Check::new(
        "reversed dual = dual of reversed code",
        tilde_encoder.same_row_module(&rev.encoder.dual_encoder()?),
    )];
    let tilde = build_ccf(&tilde_encoder)?;

    let r = ccf.r_matrix();
    checks.push(Check::new("R = R^T = R^-1", r == r.transpose() && &r * &r == Mat::identity(&f, delta)));
    checks.push(Check::new("R A^T R = A", &(&r * &ccf.a.transpose()) * &r == ccf.a));

    let pair = DualPair::from_ccfs(rev.clone(), tilde.clone())?;
    let nm = n_matrix(&pair)?;
    let mm = m_matrices(&pair, &nm);
    let alg = algebraic_checks(&pair, &nm, &mm);
    if let Some(bad) = alg.iter().find(|c| !c.passed) {
        return Err(Error::invariant(format!("identity failed for the reversed pair: {}", bad.name)));
    }
    checks.extend(alg);
    let p_inv = mm.p.inverse().map_err(|_| Error::invariant("P for the reversed pair is singular"))?;
    let q_matrix = &r * &p_inv;

    let wam = compute_wam(&ccf)?;
    let wam_rev = compute_wam(&rev)?;
    let (rev_bad, _) = reversal_wam_check(&wam, &wam_rev, &r)?;
    checks.push(Check::new("WAM of reversed code is the R-conjugated transpose", rev_bad == 0));

    let wam_tilde = compute_wam(&tilde)?;
    let k_mat = CharacterMatrix::new(&f, delta)?;
    let gamma = conjugate_wam_untransposed(&wam, &k_mat)?;
    let total = (wam.size() as u64).pow(2);
    let (mismatches, first_failure) = match macwilliams_image(&gamma, ccf.n(), f.q() as u64, ccf.k())? {
        Ok(psi) => {
            let moved = conjugate_by_state_iso(&wam_tilde, &q_matrix)?;
            compare_state_matrices(&psi, &moved)
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
    Ok(SequenceCertificate {
        q: f.q(),
        n: ccf.n(),
        k: ccf.k(),
        delta,
        r_matrix: r,
        l_matrix: ccf.l_matrix(),
        c_reversed: rev.c,
        e_reversed: rev.e,
        reversed_dual: tilde.encoder,
        p_tilde: mm.p,
        q_matrix,
        checks,
        entries_checked: total,
        mismatches,
        first_failure,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn example() -> PolyMatrix {
        let f = FieldContext::prime(3).unwrap();
        PolyMatrix::from_indices(&f, &[vec![vec![1, 0, 1], vec![2, 1], vec![0]], vec![vec![1], vec![0], vec![2]]])
            .unwrap()
    }

    #[test]
    fn reversal_of_example() {
        let ccf = build_ccf(&example()).unwrap();
        let f = ccf.field().clone();
        let rev = reversal_ccf(&ccf).unwrap();
        // G' = [1 + D², D + 2D², 0; 1, 0, 2]
        assert_eq!(rev.c, Mat::from_indices(&f, &[&[0, 1, 0], &[1, 2, 0]]));
        assert_eq!(rev.e, Mat::from_indices(&f, &[&[1, 0, 0], &[1, 0, 2]]));
    }

    #[test]
    fn sequence_identity_example() {
        let cert = verify_sequence_macwilliams(&example()).unwrap();
        for c in &cert.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(cert.passed, "{:?}", cert.first_failure);
        assert_eq!(cert.entries_checked, 81);
    }
}
