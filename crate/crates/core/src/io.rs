//! JSON formats for encoders, WAMs and verification certificates.
//!
//! Field elements are written as their integer indices and polynomials as
//! coefficient lists ascending in the variable.

use serde::{Deserialize, Serialize};

use crate::duality::{Check, DualityCertificate, EntryFailure};
use crate::error::{Error, Result};
use crate::field::{Field, FieldContext};
use crate::polymat::PolyMatrix;
use crate::sequence::SequenceCertificate;
use crate::wam::{StateMatrix, Wam};
use crate::weight::WeightPoly;

pub const STATE_ORDER: &str = "lex-msb-left";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub s: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn of(field: &Field) -> Self {
        FieldSpec { p: field.p(), s: field.s(), modulus: field.modulus().map(<[u32]>::to_vec) }
    }

    pub fn build(&self) -> Result<Field> {
        FieldContext::new(self.p, self.s, self.modulus.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncoderFile {
    pub field: FieldSpec,
    pub k: usize,
    pub n: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<Vec<u32>>>,
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let msg = e.to_string();
        let msg = msg.strip_suffix(&format!(" at line {line} column {column}")).unwrap_or(&msg);
        Error::Parse(format!("line {line}, column {column}: {msg}"))
    })
}

pub fn parse_encoder(text: &str) -> Result<PolyMatrix> {
    let file: EncoderFile = parse_json(text)?;
    let field = file.field.build()?;
    if file.g.len() != file.k || file.g.iter().any(|row| row.len() != file.n) {
        return Err(Error::Structural(format!("G does not have shape {}x{}", file.k, file.n)));
    }
    PolyMatrix::from_indices(&field, &file.g)
}

pub fn encoder_file(g: &PolyMatrix) -> EncoderFile {
    EncoderFile { field: FieldSpec::of(g.field()), k: g.nrows(), n: g.ncols(), g: g.to_indices() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WamFile {
    pub delta: usize,
    pub q: u32,
    pub order: String,
    pub entries: Vec<(usize, usize, Vec<i64>)>,
}

pub fn wam_file(wam: &Wam) -> WamFile {
    WamFile {
        delta: wam.delta,
        q: wam.q,
        order: STATE_ORDER.into(),
        entries: wam.entries().map(|(i, j, w)| (i, j, w.coeffs().to_vec())).collect(),
    }
}

pub fn parse_wam(text: &str) -> Result<Wam> {
    let file: WamFile = parse_json(text)?;
    if file.order != STATE_ORDER {
        return Err(Error::Parse(format!("unsupported state order {:?}", file.order)));
    }
    let size = (file.q as usize)
        .checked_pow(file.delta as u32)
        .filter(|&s| s <= crate::wam::max_states())
        .ok_or_else(|| Error::Resource(format!("{}^{} states exceed the envelope", file.q, file.delta)))?;
    let mut rows: Vec<Vec<(usize, WeightPoly<i64>)>> = vec![Vec::new(); size];
    for (i, j, c) in file.entries {
        if i >= size || j >= size {
            return Err(Error::Structural(format!("entry ({i}, {j}) outside a {size}x{size} matrix")));
        }
        let w = WeightPoly::new(c);
        if w.is_zero() {
            continue;
        }
        if rows[i].iter().any(|(col, _)| *col == j) {
            return Err(Error::Structural(format!("entry ({i}, {j}) given twice")));
        }
        rows[i].push((j, w));
    }
    Ok(StateMatrix::from_rows(file.delta, file.q, rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityCertificateFile {
    pub verdict: &'static str,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub r: usize,
    pub r_hat: usize,
    pub permutation: Vec<usize>,
    pub dual_permutation: Vec<usize>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<u32>>,
    #[serde(rename = "N")]
    pub n_matrix: Vec<Vec<u32>>,
    #[serde(rename = "N_hat")]
    pub n_hat: Vec<Vec<u32>>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<u32>>,
    pub entries_checked: u64,
    pub entries_matched: u64,
    pub first_failure: Option<EntryFailure>,
    pub checks: Vec<Check>,
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn duality_certificate_file(c: &DualityCertificate) -> DualityCertificateFile {
    DualityCertificateFile {
        verdict: verdict(c.passed),
        q: c.q,
        n: c.n,
        k: c.k,
        delta: c.delta,
        r: c.r,
        r_hat: c.r_hat,
        permutation: c.permutation.clone(),
        dual_permutation: c.dual_permutation.clone(),
        p: c.p.to_indices(),
        n_matrix: c.n_matrix.to_indices(),
        n_hat: c.n_hat.to_indices(),
        m: c.m.to_indices(),
        entries_checked: c.entries_checked,
        entries_matched: c.entries_checked - c.mismatches,
        first_failure: c.first_failure.clone(),
        checks: c.checks.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceCertificateFile {
    pub verdict: &'static str,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    #[serde(rename = "R")]
    pub r: Vec<Vec<u32>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<u32>>,
    #[serde(rename = "C_reversed")]
    pub c_reversed: Vec<Vec<u32>>,
    #[serde(rename = "E_reversed")]
    pub e_reversed: Vec<Vec<u32>>,
    pub reversed_dual: Vec<Vec<Vec<u32>>>,
    #[serde(rename = "P_tilde")]
    pub p_tilde: Vec<Vec<u32>>,
    #[serde(rename = "Q")]
    pub q_matrix: Vec<Vec<u32>>,
    pub entries_checked: u64,
    pub entries_matched: u64,
    pub first_failure: Option<EntryFailure>,
    pub checks: Vec<Check>,
}

pub fn sequence_certificate_file(c: &SequenceCertificate) -> SequenceCertificateFile {
    SequenceCertificateFile {
        verdict: verdict(c.passed),
        q: c.q,
        n: c.n,
        k: c.k,
        delta: c.delta,
        r: c.r_matrix.to_indices(),
        l: c.l_matrix.to_indices(),
        c_reversed: c.c_reversed.to_indices(),
        e_reversed: c.e_reversed.to_indices(),
        reversed_dual: c.reversed_dual.to_indices(),
        p_tilde: c.p_tilde.to_indices(),
        q_matrix: c.q_matrix.to_indices(),
        entries_checked: c.entries_checked,
        entries_matched: c.entries_checked - c.mismatches,
        first_failure: c.first_failure.clone(),
        checks: c.checks.clone(),
    }
}
