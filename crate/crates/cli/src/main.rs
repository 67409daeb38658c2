//! `ccode`: analyses and duality checks for convolutional codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use ccdual::duality::{Check, DualPair};
use ccdual::invariants::check_invariants;
use ccdual::io::{
    duality_certificate_file, encoder_file, parse_encoder, sequence_certificate_file, wam_file, FieldSpec,
};
use ccdual::weight::{subspace_enumerator, BLOCK_BRUTE_FORCE_LIMIT};
use ccdual::{build_ccf, compute_wam, mw_transform, Error, PolyMatrix, StateIndexer, Wam, WeightPoly};

#[derive(Debug, Parser)]
#[command(name = "ccode", version, about = "Weight adjacency matrices and MacWilliams duality for convolutional codes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the parallel kernels. Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parameters of an encoder: n, k, degree, Forney indices, flags and
    /// the weight enumerators of its constant and coefficient codes.
    Info { encoder: PathBuf },
    /// Controller canonical form (A, B, C, E) of a minimal encoder.
    Ccf { encoder: PathBuf },
    /// Weight adjacency matrix.
    Wam { encoder: PathBuf },
    /// A minimal basic encoder of the dual code.
    Dual { encoder: PathBuf },
    /// MacWilliams transform of a weight enumerator given by its coefficients.
    MwTransform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Comma-separated coefficients, lowest degree first; each an integer or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Verify the MacWilliams identity between the WAMs of a code and its dual.
    VerifyMacwilliams {
        encoder: PathBuf,
        /// Dual encoder; computed when omitted.
        #[arg(long)]
        dual: Option<PathBuf>,
    },
    /// Verify the identity against the reversed dual (sequence-space dual).
    VerifySequence { encoder: PathBuf },
    /// Run the structural checks on a code and its dual.
    CheckInvariants {
        encoder: PathBuf,
        #[arg(long)]
        dual: Option<PathBuf>,
    },
}

/// What a command produced, and whether it counts as a pass.
struct Outcome {
    json: Value,
    pretty: String,
    passed: bool,
}

impl Outcome {
    fn ok(json: Value, pretty: String) -> Self {
        Outcome { json, pretty, passed: true }
    }
}

fn read_encoder(path: &Path) -> ccdual::Result<PolyMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    parse_encoder(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn matrix_text(rows: &[Vec<u32>]) -> String {
    let inner: Vec<String> =
        rows.iter().map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
    format!("[{}]", inner.join("; "))
}

fn checks_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        out.push_str(&format!("  {mark} {}", c.name));
        if let Some(d) = &c.detail {
            out.push_str(&format!(" ({d})"));
        }
        out.push('\n');
    }
    out
}

fn info(path: &Path) -> ccdual::Result<Outcome> {
    let g = read_encoder(path)?;
    let profile = g.profile()?;
    // Constant and coefficient codes are read off a minimal encoder of the same code.
    let minimal = if profile.is_minimal {
        Some(g.clone())
    } else if profile.is_basic {
        Some(g.minimal_reduction()?)
    } else {
        None
    };
    let (mut we_const, mut we_coeff) = (None, None);
    if let Some(m) = &minimal {
        let ccf = build_ccf(m)?;
        we_const = Some(subspace_enumerator(&ccf.c_const()).to_string());
        let coeff = ccf.c_coeff();
        if (ccf.field().q() as f64).powi(coeff.dim() as i32) <= BLOCK_BRUTE_FORCE_LIMIT as f64 {
            we_coeff = Some(subspace_enumerator(&coeff).to_string());
        }
    }
    let json = json!({
        "field": FieldSpec::of(g.field()),
        "n": profile.n,
        "k": profile.k,
        "delta": profile.delta,
        "forney_indices": profile.forney_indices,
        "row_degrees": g.row_degrees(),
        "basic": profile.is_basic,
        "minimal": profile.is_minimal,
        "we_const": we_const,
        "we_coeff": we_coeff,
    });
    let show = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
    let pretty = format!(
        "field       GF({})\nn, k        {}, {}\ndegree      {}\nforney      {}\nbasic       {}\nminimal     {}\nwe(C_const) {}\nwe(C_coeff) {}\n",
        g.field().q(),
        profile.n,
        profile.k,
        profile.delta,
        profile.forney_indices.map_or("-".into(), |f| format!("{f:?}")),
        profile.is_basic,
        profile.is_minimal,
        show(&we_const),
        show(&we_coeff),
    );
    Ok(Outcome::ok(json, pretty))
}

fn ccf(path: &Path) -> ccdual::Result<Outcome> {
    let ccf = build_ccf(&read_encoder(path)?)?;
    let j = ccf.to_json();
    let pretty = format!(
        "delta {}  k {}  n {}  r {}\nforney {:?}\npermutation {:?}\nA = {}\nB = {}\nC = {}\nE = {}\n",
        j.delta,
        j.k,
        j.n,
        j.r,
        j.forney_indices,
        j.permutation,
        matrix_text(&j.a),
        matrix_text(&j.b),
        matrix_text(&j.c),
        matrix_text(&j.e)
    );
    Ok(Outcome::ok(json!(&j), pretty))
}

fn wam_pretty(wam: &Wam, states: &StateIndexer) -> String {
    let label = |i: usize| {
        let v: Vec<String> = states.vector(i).iter().map(|e| e.index().to_string()).collect();
        format!("({})", v.join(","))
    };
    let mut out = format!("{} states, {} nonzero entries\n", wam.size(), wam.nnz());
    for (x, y, w) in wam.entries() {
        out.push_str(&format!("{} -> {}: {}\n", label(x), label(y), w));
    }
    out
}

fn wam(path: &Path) -> ccdual::Result<Outcome> {
    let ccf = build_ccf(&read_encoder(path)?)?;
    let wam = compute_wam(&ccf)?;
    let states = StateIndexer::new(ccf.field(), ccf.delta())?;
    Ok(Outcome::ok(json!(&wam_file(&wam)), wam_pretty(&wam, &states)))
}

fn dual(path: &Path) -> ccdual::Result<Outcome> {
    let g = read_encoder(path)?;
    let h = g.dual_encoder()?;
    Ok(Outcome::ok(json!(&encoder_file(&h)), format!("{h:?}\n")))
}

fn rational_text(r: &BigRational) -> String {
    r.to_string()
}

fn mw(n: usize, q: u64, poly: &str) -> ccdual::Result<Outcome> {
    let coeffs = poly
        .split(',')
        .map(|s| s.trim().parse::<BigRational>().map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}"))))
        .collect::<ccdual::Result<Vec<_>>>()?;
    if q < 2 {
        return Err(Error::Usage("q must be at least 2".into()));
    }
    let f = WeightPoly::new(coeffs);
    let h = mw_transform(&f, n, q)?;
    let json = json!({
        "n": n,
        "q": q,
        "input": f.coeffs().iter().map(rational_text).collect::<Vec<_>>(),
        "output": h.coeffs().iter().map(rational_text).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(json, format!("{h}\n")))
}

fn dual_pair(encoder: &Path, dual: Option<&Path>) -> ccdual::Result<DualPair> {
    let g = read_encoder(encoder)?;
    let h = dual.map(read_encoder).transpose()?;
    DualPair::new(&g, h.as_ref())
}

fn verify_macwilliams(encoder: &Path, dual: Option<&Path>) -> ccdual::Result<Outcome> {
    let cert = ccdual::duality::verify_pair(&dual_pair(encoder, dual)?)?;
    let file = duality_certificate_file(&cert);
    let mut pretty = format!(
        "{}: {} of {} entries agree\nP = {}\nN = {}\n",
        file.verdict,
        file.entries_matched,
        file.entries_checked,
        matrix_text(&file.p),
        matrix_text(&file.n_matrix)
    );
    if let Some(fail) = &file.first_failure {
        pretty.push_str(&format!("first mismatch at ({}, {}): expected {}, found {}\n", fail.x, fail.y, fail.expected, fail.found));
    }
    pretty.push_str(&checks_text(&file.checks));
    Ok(Outcome { json: json!(&file), pretty, passed: cert.passed })
}

fn verify_sequence(encoder: &Path) -> ccdual::Result<Outcome> {
    let cert = ccdual::verify_sequence_macwilliams(&read_encoder(encoder)?)?;
    let file = sequence_certificate_file(&cert);
    let mut pretty = format!(
        "{}: {} of {} entries agree\nR = {}\nP~ = {}\nQ = {}\n",
        file.verdict,
        file.entries_matched,
        file.entries_checked,
        matrix_text(&file.r),
        matrix_text(&file.p_tilde),
        matrix_text(&file.q_matrix)
    );
    if let Some(fail) = &file.first_failure {
        pretty.push_str(&format!("first mismatch at ({}, {}): expected {}, found {}\n", fail.x, fail.y, fail.expected, fail.found));
    }
    pretty.push_str(&checks_text(&file.checks));
    Ok(Outcome { json: json!(&file), pretty, passed: cert.passed })
}

fn invariants(encoder: &Path, dual: Option<&Path>) -> ccdual::Result<Outcome> {
    let pair = dual_pair(encoder, dual)?;
    let w = compute_wam(&pair.primal)?;
    let wh = compute_wam(&pair.dual)?;
    let checks = check_invariants(&pair, Some((&w, &wh)))?;
    let passed = checks.iter().all(|c| c.passed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let json = json!({
        "verdict": if passed { "PASS" } else { "FAIL" },
        "checks": checks,
    });
    let pretty = format!("{} checks, {failed} failed\n{}", checks.len(), checks_text(&checks));
    Ok(Outcome { json, pretty, passed })
}

/// Pretty JSON in which arrays holding only scalars, or only such arrays,
/// stay on one line, so matrices and polynomial lists read naturally.
fn render_json(v: &Value, indent: usize) -> String {
    let flat = |v: &Value| !v.is_array() && !v.is_object();
    let compact = match v {
        Value::Array(items) => items.iter().all(|i| flat(i) || i.as_array().is_some_and(|a| a.iter().all(flat))),
        _ => !v.is_object(),
    };
    if compact {
        return v.to_string();
    }
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|i| format!("{pad}{}", render_json(i, indent + 1))).collect();
            format!("[\n{}\n{close}]", parts.join(",\n"))
        }
        Value::Object(map) if map.is_empty() => "{}".into(),
        Value::Object(map) => {
            let parts: Vec<String> = map
                .iter()
                .map(|(k, val)| format!("{pad}{}: {}", Value::String(k.clone()), render_json(val, indent + 1)))
                .collect();
            format!("{{\n{}\n{close}}}", parts.join(",\n"))
        }
        _ => v.to_string(),
    }
}

fn run(cli: &Cli) -> ccdual::Result<Outcome> {
    match &cli.command {
        Command::Info { encoder } => info(encoder),
        Command::Ccf { encoder } => ccf(encoder),
        Command::Wam { encoder } => wam(encoder),
        Command::Dual { encoder } => dual(encoder),
        Command::MwTransform { n, q, poly } => mw(*n, *q, poly),
        Command::VerifyMacwilliams { encoder, dual } => verify_macwilliams(encoder, dual.as_deref()),
        Command::VerifySequence { encoder } => verify_sequence(encoder),
        Command::CheckInvariants { encoder, dual } => invariants(encoder, dual.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("ccode: cannot start {jobs} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e @ Error::InvariantViolation(_)) => {
            eprintln!("ccode: {e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("ccode: {e}");
            return ExitCode::from(2);
        }
    };
    let mut text = match cli.format {
        Format::Json => render_json(&outcome.json, 0),
        Format::Pretty => outcome.pretty,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("ccode: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
