//! `jkpencil` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jkpencil::exactalg::rational::format_rational;
use jkpencil::exactalg::{Matrix, Rational};
use jkpencil::geometry::Involutivity;
use jkpencil::invsub::{
    direct_sum_subspace, enumerate_invariant_subspaces, invariant_subspace_count, is_invariant, HeightProfile,
    HeightTuple, InvSubError, Verdict,
};
use jkpencil::jk::{jk_basis, jk_invariants, report_json, JkError, Mode};
use jkpencil::pencil::{PencilError, SkewPencil};
use jkpencil::selftest::{self, Config, CriterionResult};
use jkpencil::turiel::{
    check_forms, check_frames, integrability_verdict, product_verdicts, DistributionSpec, Factor, TurielError,
    TurielSignature, TurielVerdict,
};

#[derive(Parser, Debug)]
#[command(
    name = "jkpencil",
    version,
    about = "Jordan–Kronecker invariants, invariant subspaces and Turiel normal forms"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to FILE instead of standard output.
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// JK invariants of a pencil file, with a canonical basis when one exists over ℚ.
    Decompose {
        file: PathBuf,
        /// Report quadratic classes as real blocks.
        #[arg(long)]
        real: bool,
    },
    /// Invariant subspaces of the nilpotent pencil with the given chain heights.
    Subspaces {
        /// Distinct heights, descending, e.g. 3,1.
        #[arg(long, value_delimiter = ',', required = true)]
        heights: Vec<usize>,
        /// Multiplicity of each height; all ones when omitted.
        #[arg(long, value_delimiter = ',')]
        mults: Option<Vec<usize>>,
        /// List every invariant subspace (the default).
        #[arg(long, conflicts_with_all = ["count", "check"])]
        enumerate: bool,
        /// Print only the number of invariant subspaces.
        #[arg(long, conflicts_with = "check")]
        count: bool,
        /// Test one height tuple against random automorphisms.
        #[arg(long, value_name = "TUPLE")]
        check: Option<String>,
        /// Random automorphisms per subspace.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also test every enumerated subspace against random automorphisms.
        #[arg(long)]
        verify: bool,
    },
    /// Identity checks on the normal form of a signature.
    Turiel {
        /// Block heights k_1 ≥ … ≥ k_n, e.g. 2,1.
        #[arg(long)]
        signature: String,
        #[arg(long, value_enum, default_value_t = Check::All)]
        check: Check,
    },
    /// Integrability verdicts for invariant distributions of a normal form.
    Distribution {
        #[arg(long)]
        signature: String,
        /// A height tuple, or ker:K / im:L; every tuple when omitted.
        #[arg(long)]
        tuple: Option<String>,
    },
    /// Product of normal forms and constant factors, with verdicts for every
    /// combination of factor distributions.
    Product {
        /// Factors such as turiel:1,1 or flat:0:2,3:1.
        #[arg(required = true, value_name = "SPEC")]
        specs: Vec<String>,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Full-size sweeps instead of the quick ones.
        #[arg(long)]
        full: bool,
        /// Run only these criteria, e.g. 1,5.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Forms,
    Frames,
    All,
}

#[derive(Debug)]
enum Failure {
    Malformed(String),
    Precondition(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Malformed(m) | Failure::Precondition(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<PencilError> for Failure {
    fn from(e: PencilError) -> Self {
        match e {
            PencilError::DegenerateB => Failure::Precondition(e.to_string()),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

impl From<JkError> for Failure {
    fn from(e: JkError) -> Self {
        match e {
            JkError::Pencil(p) => p.into(),
            JkError::NotRationallyRealizable(_) => Failure::Precondition(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<InvSubError> for Failure {
    fn from(e: InvSubError) -> Self {
        match e {
            InvSubError::BadProfile(_) => Failure::Malformed(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<TurielError> for Failure {
    fn from(e: TurielError) -> Self {
        match e {
            TurielError::BadSignature(_) | TurielError::NotFlat(_) => Failure::Malformed(e.to_string()),
            TurielError::Geom(_) => Failure::Internal(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

/// A finished report. A report with `failed` set is still printed, then the
/// process exits with status 3.
struct Report {
    text: String,
    json: Value,
    failed: Option<String>,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, failed: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let report = match &cli.command {
        Command::Decompose { file, real } => decompose(file, *real)?,
        Command::Subspaces { heights, mults, count, check, trials, seed, verify, .. } => {
            let mults = mults.clone().unwrap_or_else(|| vec![1; heights.len()]);
            let h = HeightProfile::new(heights.clone(), mults)?;
            match check {
                Some(t) => check_tuple(&h, &parse_tuple(t, "--check")?, *trials, *seed)?,
                None => subspaces(&h, *count, verify.then_some((*trials, *seed)))?,
            }
        }
        Command::Turiel { signature, check } => turiel(&parse_signature(signature)?, *check)?,
        Command::Distribution { signature, tuple } => distribution(&parse_signature(signature)?, tuple.as_deref())?,
        Command::Product { specs } => product(specs)?,
        Command::Selftest { seed, full, only } => run_selftest(*seed, *full, only)?,
    };
    let mut body = if cli.json {
        serde_json::to_string_pretty(&report.json).map_err(|e| Failure::Internal(e.to_string()))?
    } else {
        report.text
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Malformed(format!("--output: cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    match report.failed {
        Some(m) => Err(Failure::Internal(m)),
        None => Ok(()),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("JKPENCIL_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Malformed(format!("JKPENCIL_THREADS: expected a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Internal(e.to_string()))
}

fn parse_signature(s: &str) -> Result<TurielSignature, Failure> {
    s.parse().map_err(|e: TurielError| Failure::Malformed(format!("--signature: {e}")))
}

fn parse_tuple(s: &str, flag: &str) -> Result<HeightTuple, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map(HeightTuple)
        .map_err(|_| Failure::Malformed(format!("{flag}: cannot parse {s:?} as a comma-separated height tuple")))
}

fn matrix_json(m: &Matrix<Rational>) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_text(m: &Matrix<Rational>) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            let r: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  [{}]\n", r.join(" "))
        })
        .collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn decompose(file: &PathBuf, real: bool) -> Result<Report, Failure> {
    let src = fs::read_to_string(file).map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
    let p = SkewPencil::from_json(&src)?;
    let mode = if real { Mode::Real } else { Mode::Complex };
    let inv = jk_invariants(&p, mode)?;
    let mut json = report_json(&inv, mode);
    let mut text = format!("dimension: {}\nblocks: {inv}\nrealizable over Q: {}\n", p.dim(), yes(inv.realizable()));
    let basis = if inv.realizable() { Some(jk_basis(&p)?) } else { None };
    json["basis"] = match &basis {
        Some(d) => matrix_json(&d.c),
        None => Value::Null,
    };
    if let Some(d) = basis {
        text += "canonical basis (columns):\n";
        text += &matrix_text(&d.c);
    }
    Ok(Report::ok(text, json))
}

fn profile_json(h: &HeightProfile) -> Value {
    json!({"heights": h.heights(), "mults": h.mults()})
}

fn subspaces(h: &HeightProfile, count_only: bool, verify: Option<(usize, u64)>) -> Result<Report, Failure> {
    if count_only {
        let n = invariant_subspace_count(h);
        let mut json = profile_json(h);
        json["count"] = json!(n);
        return Ok(Report::ok(n.to_string(), json));
    }
    let tuples = enumerate_invariant_subspaces(h);
    let verdicts = match verify {
        None => None,
        Some((trials, seed)) => {
            let d = jk_basis(&h.canonical())?;
            let vs = tuples
                .iter()
                .map(|t| Ok(is_invariant(&direct_sum_subspace(h, t)?, &d, trials, seed)?))
                .collect::<Result<Vec<Verdict>, Failure>>()?;
            Some(vs)
        }
    };
    let dims: Vec<usize> = tuples.iter().map(|t| subspace_dim(h, t)).collect();
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        let mut row = vec![t.to_string(), dims[i].to_string()];
        let mut item = json!({"tuple": t.0, "dimension": dims[i]});
        if let Some(vs) = &verdicts {
            row.push(yes(vs[i].is_invariant()).to_string());
            item["consistent"] = json!(vs[i].is_invariant());
        }
        rows.push(row);
        items.push(item);
    }
    let header: &[&str] = if verdicts.is_some() { &["tuple", "dim", "consistent"] } else { &["tuple", "dim"] };
    let mut text = table(header, &rows);
    writeln!(text, "count: {}", tuples.len()).unwrap();
    let mut json = profile_json(h);
    json["count"] = json!(tuples.len());
    json["subspaces"] = json!(items);
    let failed = verdicts
        .filter(|vs| !vs.iter().all(Verdict::is_invariant))
        .map(|_| "an enumerated subspace failed the automorphism check".to_string());
    Ok(Report { text, json, failed })
}

fn subspace_dim(h: &HeightProfile, t: &HeightTuple) -> usize {
    h.mults().iter().zip(&t.0).map(|(l, m)| 2 * l * m).sum()
}

fn check_tuple(h: &HeightProfile, t: &HeightTuple, trials: usize, seed: u64) -> Result<Report, Failure> {
    if !t.in_range(h) {
        return Err(Failure::Precondition(format!(
            "--check: tuple {t} needs one entry per height with 0 ≤ m_i ≤ k_i for heights {:?}",
            h.heights()
        )));
    }
    let d = jk_basis(&h.canonical())?;
    let w = direct_sum_subspace(h, t)?;
    let verdict = is_invariant(&w, &d, trials, seed)?;
    let admissible = t.satisfies(h);
    let mut text = format!("tuple: {t}\ndimension: {}\nadmissible: {}\n", w.dim(), yes(admissible));
    let mut json = profile_json(h);
    json["tuple"] = json!(t.0);
    json["dimension"] = json!(w.dim());
    json["admissible"] = json!(admissible);
    match &verdict {
        Verdict::InvariantConsistent { trials } => {
            writeln!(text, "verdict: invariant-consistent ({trials} trials)").unwrap();
            json["verdict"] = json!("invariant-consistent");
            json["trials"] = json!(trials);
        }
        Verdict::NotInvariant { witness, trial } => {
            match trial {
                Some(i) => writeln!(text, "verdict: not invariant (moved by automorphism trial {i})").unwrap(),
                None => writeln!(text, "verdict: not invariant (moved by the recursion operator)").unwrap(),
            }
            text += "witness:\n";
            text += &matrix_text(witness);
            json["verdict"] = json!("not-invariant");
            json["trial"] = json!(trial);
            json["witness"] = matrix_json(witness);
        }
    }
    let failed = (verdict.is_invariant() != admissible)
        .then(|| format!("automorphism check disagrees with the chain constraints for {t}"));
    Ok(Report { text, json, failed })
}

fn turiel(sig: &TurielSignature, check: Check) -> Result<Report, Failure> {
    let mut text = format!("signature: {sig}\ndimension: {}\n", sig.dim());
    let mut json = json!({"signature": sig.ks(), "dimension": sig.dim()});
    let mut passed = true;
    if check != Check::Frames {
        let f = check_forms(sig)?;
        passed &= f.all();
        text += &format!(
            "omega0 nondegenerate: {}\nd omega0 = 0: {}\nd omega1 = 0: {}\nNijenhuis torsion zero: {}\nrecursion operator matches: {}\n",
            yes(f.nondegenerate0),
            yes(f.closed0),
            yes(f.closed1),
            yes(f.nijenhuis_zero),
            yes(f.endomorphism_matches)
        );
        json["forms"] = serde_json::to_value(&f).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    if check != Check::Forms {
        let f = check_frames(sig);
        passed &= f.all();
        text += &format!(
            "Gram matrix of omega0 canonical: {}\nGram matrix of omega1 canonical: {}\nchains shifted by P - lambda: {}\ngamma_1 = 0: {}\n",
            yes(f.gram_omega0),
            yes(f.gram_omega1),
            yes(f.chains),
            yes(f.gamma1_zero)
        );
        json["frames"] = serde_json::to_value(&f).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    json["passed"] = json!(passed);
    writeln!(text, "passed: {}", yes(passed)).unwrap();
    let failed = (!passed).then(|| format!("identity check failed for signature {sig}"));
    Ok(Report { text, json, failed })
}

fn distribution_spec(sig: &TurielSignature, t: &str) -> Result<DistributionSpec, Failure> {
    let number = |s: &str, flag: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Malformed(format!("--tuple: cannot parse {flag} exponent {s:?}")))
    };
    let top = sig.ks()[0] + 1;
    let spec = if let Some(k) = t.strip_prefix("ker:") {
        DistributionSpec::ker_im(sig, number(k, "ker")?, 0)
    } else if let Some(l) = t.strip_prefix("im:") {
        DistributionSpec::ker_im(sig, top, number(l, "im")?)
    } else {
        DistributionSpec::new(sig, parse_tuple(t, "--tuple")?)
    };
    Ok(spec?)
}

fn verdict_row(v: &TurielVerdict) -> Vec<String> {
    let word = |b: bool| if b { "integrable" } else { "non-integrable" }.to_string();
    let witness = match (&v.paper_witness, &v.computed) {
        (Some(w), _) => format!("[u_{0}, v_{0}] = {1}", w.s, w.bracket.format()),
        (None, Involutivity::Witness { i, j, bracket }) => format!("[X_{i}, X_{j}] = {}", bracket.format()),
        (None, Involutivity::Involutive) => "-".to_string(),
    };
    vec![v.tuple.to_string(), v.dim.to_string(), word(v.predicted_integrable), word(v.integrable()), witness]
}

fn distribution(sig: &TurielSignature, tuple: Option<&str>) -> Result<Report, Failure> {
    let specs = match tuple {
        Some(t) => vec![distribution_spec(sig, t)?],
        None => DistributionSpec::all(sig),
    };
    let verdicts = specs.iter().map(|d| integrability_verdict(sig, d)).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = verdicts.iter().map(verdict_row).collect();
    let mut text = format!("signature: {sig}\n");
    text += &table(&["tuple", "dim", "predicted", "computed", "witness"], &rows);
    let json = json!({
        "signature": sig.ks(),
        "rows": verdicts.iter().map(TurielVerdict::to_json).collect::<Vec<_>>(),
    });
    let bad: Vec<String> = verdicts.iter().filter(|v| !v.agrees()).map(|v| v.tuple.to_string()).collect();
    let failed =
        (!bad.is_empty()).then(|| format!("computed verdict disagrees with the prediction for {}", bad.join(" ")));
    Ok(Report { text, json, failed })
}

fn product(specs: &[String]) -> Result<Report, Failure> {
    let factors = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.parse::<Factor>().map_err(|e| Failure::Malformed(format!("SPEC {}: {e}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let r = product_verdicts(&factors)?;
    let mut text = String::new();
    for (f, st) in factors.iter().zip(&r.factors) {
        writeln!(text, "factor {f}: {}", st.chart.names().join(" ")).unwrap();
    }
    writeln!(text, "dimension: {}", r.product.chart.dim()).unwrap();
    let mut header: Vec<String> = (0..factors.len()).map(|i| format!("factor {}", (b'a' + i as u8) as char)).collect();
    header.extend(["dim", "factors integrable", "product integrable"].map(String::from));
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            let mut cells = row.labels.clone();
            cells.push(row.dimension.to_string());
            cells.push(row.components.iter().map(|&b| yes(b)).collect::<Vec<_>>().join(","));
            cells.push(yes(row.computed).to_string());
            cells
        })
        .collect();
    text += &table(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows);
    let json = json!({
        "factors": factors.iter().zip(&r.factors).map(|(f, st)| json!({
            "spec": f.to_string(),
            "coordinates": st.chart.names(),
        })).collect::<Vec<_>>(),
        "dimension": r.product.chart.dim(),
        "rows": r.rows.iter().map(|row| json!({
            "labels": row.labels,
            "dimension": row.dimension,
            "components": row.components,
            "computed": row.computed,
            "agrees": row.agrees(),
        })).collect::<Vec<_>>(),
    });
    let failed = (!r.rows.iter().all(|row| row.agrees()))
        .then(|| "a product verdict differs from the conjunction of its factors".to_string());
    Ok(Report { text, json, failed })
}

fn secs(d: Duration) -> f64 {
    (d.as_secs_f64() * 1000.0).round() / 1000.0
}

fn run_selftest(seed: u64, full: bool, only: &[u8]) -> Result<Report, Failure> {
    if let Some(bad) = only.iter().find(|&&i| !(1..=9).contains(&i)) {
        return Err(Failure::Malformed(format!("--only: criterion {bad} does not exist (expected 1 to 9)")));
    }
    let cfg = if full { Config::full(seed) } else { Config::quick(seed) };
    let results: Vec<CriterionResult> =
        if only.is_empty() { selftest::run_all(&cfg) } else { only.iter().map(|&i| selftest::run(i, &cfg)).collect() };
    let text: String = results.iter().map(|r| format!("{r}\n")).collect();
    let json = json!({
        "seed": seed,
        "full": full,
        "results": results.iter().map(|r| json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
            "seconds": secs(r.elapsed),
            "limit_seconds": r.limit.map(|l| l.as_secs()),
        })).collect::<Vec<_>>(),
    });
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let failed = (!failed.is_empty()).then(|| format!("criteria failed: {}", failed.join(", ")));
    Ok(Report { text, json, failed })
}
