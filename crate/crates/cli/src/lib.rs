//! Command-line front end for `hurwitz-tau`.
//!
//! [`run`] parses arguments, dispatches to the library and writes data to
//! `out` and diagnostics to `err`. Exit codes: 0 on success, 1 when a
//! verification fails or a computation hits a singular case, 2 on usage
//! errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use hurwitz_tau::algebra::{fmt_rational, int, parse_rational, rat, Rational};
use hurwitz_tau::analytic::{
    calibrate, check_recursion, check_spectral, check_spectral_ode, phi_k, tau_det_rep,
    tau_wronskian, IdentityReport, Representation, CALIBRATION_EXPONENT_PER_FUNCTION,
    DEFAULT_QUANTUM_TERMS,
};
use hurwitz_tau::characters::CharacterTable;
use hurwitz_tau::hurwitz::{
    hurwitz_number, hurwitz_oracle, riemann_hurwitz, ProfileTuple, ORACLE_MAX_SHEETS,
};
use hurwitz_tau::partitions::{enumerate_partitions, parse_profile_list, Partition};
use hurwitz_tau::tau_series::{extract_h, tau_double_table, tau_single_table};
use hurwitz_tau::weights::{weighted_hurwitz_terms, WeightGen};
use hurwitz_tau::Error;

#[derive(Parser, Debug)]
#[command(
    name = "hurwitz-tau",
    version,
    about = "Exact Hurwitz numbers and tau-function checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classical Hurwitz number for a list of ramification profiles.
    Hurwitz(HurwitzArgs),
    /// Weighted double (or single) Hurwitz number H^d_G(mu, nu).
    Weighted(WeightedArgs),
    /// Power-sum coefficients of the tau-function, as (mu, nu, d, H) rows.
    TauCoeffs(TauArgs),
    /// Character table of S_n.
    Chartable(ChartArgs),
    /// Coefficients of the adapted basis element phi_k.
    Phi(PhiArgs),
    /// Run a verification suite and print one row per check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Trivial,
    Finite,
    Rational,
    Quantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Hurwitz,
    Series,
    Analytic,
    All,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Weight generating function family.
    #[arg(long = "gen", value_enum)]
    kind: GenKind,
    /// Comma-separated c parameters, e.g. "1,1/3".
    #[arg(long = "c", default_value = "", allow_hyphen_values = true)]
    c: String,
    /// Comma-separated d parameters (rational family only).
    #[arg(long = "d", default_value = "", allow_hyphen_values = true)]
    d: String,
    /// Quantum parameter q with 0 < |q| < 1.
    #[arg(long = "q", allow_hyphen_values = true)]
    q: Option<String>,
    /// Number of extra factors kept when H_q is evaluated at a number.
    #[arg(long = "m", default_value_t = DEFAULT_QUANTUM_TERMS)]
    m: usize,
}

#[derive(Args, Debug)]
struct HurwitzArgs {
    /// Sheet count N.
    #[arg(long = "n")]
    n: usize,
    /// Profiles as comma-joined bracket groups, e.g. "[2],[2]".
    #[arg(long)]
    profiles: String,
    #[arg(long = "out", alias = "format", value_enum, default_value = "json")]
    out: Format,
}

#[derive(Args, Debug)]
struct WeightedArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Degree d (total colength of the weighted branch points).
    #[arg(long)]
    deg: usize,
    #[arg(long)]
    mu: String,
    /// Second profile; defaults to (1^N), giving the single Hurwitz number.
    #[arg(long)]
    nu: Option<String>,
    /// Include every contributing profile tuple.
    #[arg(long)]
    trace: bool,
    #[arg(long = "out", alias = "format", value_enum, default_value = "json")]
    out: Format,
}

#[derive(Args, Debug)]
struct TauArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Order D in beta beyond |mu|.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    /// Emit the single-variable specialization (mu, d, H) instead.
    #[arg(long)]
    single: bool,
    #[arg(long = "out", alias = "format", value_enum, default_value = "csv")]
    out: Format,
}

#[derive(Args, Debug)]
struct ChartArgs {
    #[arg(long = "n")]
    n: usize,
    #[arg(long = "out", alias = "format", value_enum, default_value = "csv")]
    out: Format,
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long = "k")]
    k: i64,
    /// Truncation order J.
    #[arg(long, default_value_t = 10)]
    order: usize,
    #[arg(long = "out", alias = "format", value_enum, default_value = "json")]
    out: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// beta for the analytic suite; 2/7 by default, 3/10 for quantum G.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, default_value_t = 6)]
    kmax: i64,
    /// Truncation order J for the recursion and spectral checks.
    #[arg(long, default_value_t = 25)]
    order: usize,
    /// Truncation order for the determinant checks.
    #[arg(long, default_value_t = 12)]
    det_order: usize,
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    #[arg(long, default_value_t = 3)]
    deg: usize,
    #[arg(long = "out", alias = "format", value_enum, default_value = "csv")]
    out: Format,
}

#[derive(Debug)]
enum CliError {
    Usage {
        message: String,
        position: Option<usize>,
    },
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(message) => CliError::Usage {
                message,
                position: None,
            },
            other => CliError::Lib(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage {
        message: message.into(),
        position: None,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_rational_flag(flag: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| CliError::Usage {
        message: format!("--{flag} {s:?}: {e}"),
        position: Some(e.position),
    })
}

/// Comma-separated rationals; error positions refer to the whole string.
fn parse_rational_list(flag: &str, s: &str) -> CliResult<Vec<Rational>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for item in s.split(',') {
        let r = parse_rational(item).map_err(|e| CliError::Usage {
            message: format!(
                "--{flag} {s:?}: {} at position {}",
                e.message,
                offset + e.position
            ),
            position: Some(offset + e.position),
        })?;
        out.push(r);
        offset += item.len() + 1;
    }
    Ok(out)
}

fn build_gen(args: &GenArgs) -> CliResult<WeightGen> {
    let c = parse_rational_list("c", &args.c)?;
    let d = parse_rational_list("d", &args.d)?;
    let only = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(usage(msg)) };
    match args.kind {
        GenKind::Trivial => {
            only(
                c.is_empty() && d.is_empty() && args.q.is_none(),
                "--gen trivial takes no parameters",
            )?;
            Ok(WeightGen::Trivial)
        }
        GenKind::Finite => {
            only(
                d.is_empty() && args.q.is_none(),
                "--gen finite takes only --c",
            )?;
            Ok(WeightGen::finite_product(c))
        }
        GenKind::Rational => {
            only(
                args.q.is_none(),
                "--gen rational takes --c and --d, not --q",
            )?;
            Ok(WeightGen::rational(c, d)?)
        }
        GenKind::Quantum => {
            only(c.is_empty() && d.is_empty(), "--gen quantum takes only --q")?;
            let q = args
                .q
                .as_deref()
                .ok_or_else(|| usage("--gen quantum requires --q"))?;
            Ok(WeightGen::quantum(parse_rational_flag("q", q)?)?)
        }
    }
}

fn quantum_terms(gen: &WeightGen, args: &GenArgs) -> Option<usize> {
    matches!(gen, WeightGen::Quantum { .. }).then_some(args.m)
}

fn parse_partition(flag: &str, s: &str) -> CliResult<Partition> {
    s.parse::<Partition>()
        .map_err(|e| usage(format!("--{flag}: {}", strip_code(&e))))
}

fn strip_code(e: &Error) -> String {
    match e {
        Error::Usage(m) => m.clone(),
        other => other.to_string(),
    }
}

fn parts_json(p: &Partition) -> Value {
    json!(p.parts())
}

fn parts_text(p: &Partition) -> String {
    p.to_string()
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `rows` under `header`: CSV (header line always present) or a JSON
/// array of objects whose keys follow the header order. Array cells are
/// written to CSV in their compact JSON form.
pub fn emit_table(
    out: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<Value>],
    format: Format,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(header).map_err(std::io::Error::other)?;
            for row in rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                w.write_record(&cells).map_err(std::io::Error::other)?;
            }
            w.flush()
        }
        Format::Json => {
            let objects: Vec<Value> = rows
                .iter()
                .map(|row| {
                    Value::Object(
                        header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| (k.to_string(), v.clone()))
                            .collect(),
                    )
                })
                .collect();
            serde_json::to_writer(&mut *out, &objects)?;
            writeln!(out)
        }
    }
}

#[derive(Serialize)]
struct HurwitzOutput {
    #[serde(rename = "N")]
    n: usize,
    profiles: Vec<Vec<usize>>,
    #[serde(rename = "H")]
    h: String,
    d: usize,
    chi: i64,
}

fn cmd_hurwitz(a: &HurwitzArgs, out: &mut dyn Write) -> CliResult<()> {
    let profiles = parse_profile_list(&a.profiles)
        .map_err(|e| usage(format!("--profiles: {}", strip_code(&e))))?;
    let pt = ProfileTuple::new(a.n, profiles)?;
    let h = hurwitz_number(&pt)?;
    let (chi, _genus) = riemann_hurwitz(&pt);
    let record = HurwitzOutput {
        n: a.n,
        profiles: pt.profiles().iter().map(|p| p.parts().to_vec()).collect(),
        h: fmt_rational(&h),
        d: pt.total_colength(),
        chi,
    };
    match a.out {
        Format::Json => write_json(out, &record),
        Format::Csv => {
            let row = vec![
                json!(record.n),
                Value::String(
                    pt.profiles()
                        .iter()
                        .map(parts_text)
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                json!(record.h),
                json!(record.d),
                json!(record.chi),
            ];
            Ok(emit_table(
                out,
                &["N", "profiles", "H", "d", "chi"],
                &[row],
                Format::Csv,
            )?)
        }
    }
}

#[derive(Serialize)]
struct TermOutput {
    profiles: Vec<Vec<usize>>,
    dual_profiles: Vec<Vec<usize>>,
    arrangements: String,
    weight: String,
    hurwitz: String,
}

#[derive(Serialize)]
struct WeightedOutput {
    gen: &'static str,
    d: usize,
    mu: Vec<usize>,
    nu: Vec<usize>,
    #[serde(rename = "H")]
    h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<TermOutput>>,
}

fn cmd_weighted(a: &WeightedArgs, out: &mut dyn Write) -> CliResult<()> {
    let gen = build_gen(&a.gen)?;
    let mu = parse_partition("mu", &a.mu)?;
    let nu = match &a.nu {
        Some(s) => parse_partition("nu", s)?,
        None => Partition::identity(mu.weight()),
    };
    let terms = weighted_hurwitz_terms(&gen, a.deg, &mu, &nu)?;
    let h: Rational = terms.iter().map(|t| t.value()).sum();
    let to_lists = |ps: &[Partition]| ps.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>();
    let record = WeightedOutput {
        gen: gen.name(),
        d: a.deg,
        mu: mu.parts().to_vec(),
        nu: nu.parts().to_vec(),
        h: fmt_rational(&h),
        terms: a.trace.then(|| {
            terms
                .iter()
                .map(|t| TermOutput {
                    profiles: to_lists(&t.profiles),
                    dual_profiles: to_lists(&t.dual_profiles),
                    arrangements: t.arrangements.to_string(),
                    weight: fmt_rational(&t.weight),
                    hurwitz: fmt_rational(&t.hurwitz),
                })
                .collect()
        }),
    };
    match a.out {
        Format::Json => write_json(out, &record),
        Format::Csv => {
            if a.trace {
                let rows: Vec<Vec<Value>> = terms
                    .iter()
                    .map(|t| {
                        let join = |ps: &[Partition]| {
                            ps.iter().map(parts_text).collect::<Vec<_>>().join(",")
                        };
                        vec![
                            json!(join(&t.profiles)),
                            json!(join(&t.dual_profiles)),
                            json!(t.arrangements.to_string()),
                            json!(fmt_rational(&t.weight)),
                            json!(fmt_rational(&t.hurwitz)),
                        ]
                    })
                    .collect();
                Ok(emit_table(
                    out,
                    &[
                        "profiles",
                        "dual_profiles",
                        "arrangements",
                        "weight",
                        "hurwitz",
                    ],
                    &rows,
                    Format::Csv,
                )?)
            } else {
                let row = vec![
                    json!(record.gen),
                    json!(a.deg),
                    json!(parts_text(&mu)),
                    json!(parts_text(&nu)),
                    json!(record.h),
                ];
                Ok(emit_table(
                    out,
                    &["gen", "d", "mu", "nu", "H"],
                    &[row],
                    Format::Csv,
                )?)
            }
        }
    }
}

fn partition_cell(p: &Partition, format: Format) -> Value {
    match format {
        Format::Json => parts_json(p),
        Format::Csv => Value::String(parts_text(p)),
    }
}

fn cmd_tau(a: &TauArgs, out: &mut dyn Write) -> CliResult<()> {
    let gen = build_gen(&a.gen)?;
    if a.single {
        let table = tau_single_table(&gen, a.order, a.nmax)?;
        let mut rows = Vec::new();
        for n in 0..=a.nmax {
            for mu in enumerate_partitions(n) {
                for d in 0..=a.order {
                    rows.push(vec![
                        partition_cell(&mu, a.out),
                        json!(d),
                        json!(fmt_rational(&table.entry(&mu, d))),
                    ]);
                }
            }
        }
        return Ok(emit_table(out, &["mu", "d", "H"], &rows, a.out)?);
    }
    let table = tau_double_table(&gen, a.order, a.nmax)?;
    let rows: Vec<Vec<Value>> = table
        .rows()
        .iter()
        .map(|(mu, nu, d, h)| {
            vec![
                partition_cell(mu, a.out),
                partition_cell(nu, a.out),
                json!(d),
                json!(fmt_rational(h)),
            ]
        })
        .collect();
    Ok(emit_table(out, &["mu", "nu", "d", "H"], &rows, a.out)?)
}

fn cmd_chartable(a: &ChartArgs, out: &mut dyn Write) -> CliResult<()> {
    let table = CharacterTable::get(a.n)?;
    let ps = table.partitions();
    match a.out {
        Format::Csv => {
            let mut header = vec!["lambda".to_string()];
            header.extend(ps.iter().map(parts_text));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<Value>> = ps
                .iter()
                .enumerate()
                .map(|(i, lam)| {
                    let mut row = vec![Value::String(parts_text(lam))];
                    row.extend(table.row(i).iter().map(|&v| json!(v)));
                    row
                })
                .collect();
            Ok(emit_table(out, &header_refs, &rows, Format::Csv)?)
        }
        Format::Json => {
            let values: Vec<&[i64]> = (0..ps.len()).map(|i| table.row(i)).collect();
            let record = json!({
                "n": a.n,
                "partitions": ps.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
                "values": values,
            });
            write_json(out, &record)
        }
    }
}

#[derive(Serialize)]
struct PhiOutput {
    k: i64,
    lead_exp: i64,
    beta: String,
    order: usize,
    coeffs: Vec<String>,
}

fn cmd_phi(a: &PhiArgs, out: &mut dyn Write) -> CliResult<()> {
    let gen = build_gen(&a.gen)?;
    let beta = parse_rational_flag("beta", &a.beta)?;
    let phi = phi_k(&gen, &beta, a.k, a.order, quantum_terms(&gen, &a.gen))?;
    match a.out {
        Format::Json => write_json(
            out,
            &PhiOutput {
                k: phi.k(),
                lead_exp: phi.lead_exp(),
                beta: fmt_rational(&beta),
                order: phi.order(),
                coeffs: phi.coeffs().iter().map(fmt_rational).collect(),
            },
        ),
        Format::Csv => {
            let rows: Vec<Vec<Value>> = phi
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| vec![json!(phi.lead_exp() + j as i64), json!(fmt_rational(c))])
                .collect();
            Ok(emit_table(out, &["exponent", "coeff"], &rows, Format::Csv)?)
        }
    }
}

struct Check {
    suite: &'static str,
    check: String,
    params: String,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(
        suite: &'static str,
        check: impl Into<String>,
        params: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            suite,
            check: check.into(),
            params: params.into(),
            status: if passed { "pass" } else { "fail" },
            detail: detail.into(),
        }
    }

    fn error(
        suite: &'static str,
        check: impl Into<String>,
        params: impl Into<String>,
        e: &Error,
    ) -> Self {
        Check {
            suite,
            check: check.into(),
            params: params.into(),
            status: "error",
            detail: format!("{}: {}", e.code(), strip_code(e)),
        }
    }
}

fn identity_check(
    suite: &'static str,
    params: String,
    r: hurwitz_tau::Result<IdentityReport>,
    name: &str,
) -> Check {
    match r {
        Ok(r) => {
            let detail = match r.tolerance {
                Some(t) => format!(
                    "through order {}, max |residual| {:.3e} (tolerance {t:e})",
                    r.checked_through, r.max_abs
                ),
                None => format!(
                    "through order {}, {} nonzero residuals",
                    r.checked_through,
                    r.residuals.len()
                ),
            };
            Check::new(suite, name, params, r.passed(), detail)
        }
        Err(e) => Check::error(suite, name, params, &e),
    }
}

fn verify_hurwitz(nmax: usize, checks: &mut Vec<Check>) {
    let top = nmax.min(ORACLE_MAX_SHEETS);
    let mut cases = 0;
    let mut bad = 0;
    let mut failure = None;
    for n in 1..=top {
        let ps = enumerate_partitions(n);
        let mut tuples: Vec<Vec<Partition>> = vec![Vec::new()];
        for _ in 0..3 {
            tuples = tuples
                .iter()
                .flat_map(|t| {
                    ps.iter().map(move |p| {
                        let mut t = t.clone();
                        t.push(p.clone());
                        t
                    })
                })
                .collect();
            for t in &tuples {
                let pt = match ProfileTuple::new(n, t.clone()) {
                    Ok(pt) => pt,
                    Err(e) => {
                        failure.get_or_insert(e);
                        continue;
                    }
                };
                match (hurwitz_number(&pt), hurwitz_oracle(&pt)) {
                    (Ok(a), Ok(b)) => {
                        cases += 1;
                        if a != b {
                            bad += 1;
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        failure.get_or_insert(e);
                    }
                }
            }
        }
    }
    let params = format!("N<={top}");
    checks.push(match failure {
        Some(e) => Check::error("hurwitz", "character_sum_vs_oracle", params, &e),
        None => Check::new(
            "hurwitz",
            "character_sum_vs_oracle",
            params,
            bad == 0,
            format!("{cases} tuples, {bad} mismatches"),
        ),
    });
}

fn verify_series(gen: &WeightGen, nmax: usize, deg: usize, checks: &mut Vec<Check>) {
    let params = format!("gen={} nmax={nmax} deg={deg}", gen.name());
    let tables =
        tau_double_table(gen, deg, nmax).and_then(|t| Ok((t, tau_single_table(gen, deg, nmax)?)));
    let (double, single) = match tables {
        Ok(t) => t,
        Err(e) => {
            checks.push(Check::error("series", "tau_tables", params, &e));
            return;
        }
    };
    let mut cases = 0;
    let mut bad = 0;
    let mut ortho_bad = 0;
    let mut single_bad = 0;
    let mut failure = None;
    for n in 0..=nmax {
        let ps = enumerate_partitions(n);
        for mu in &ps {
            for nu in &ps {
                for d in 0..=deg {
                    let lhs = extract_h(&double, d, mu, nu);
                    let rhs = hurwitz_tau::weights::weighted_hurwitz(gen, d, mu, nu);
                    match (lhs, rhs) {
                        (Ok(a), Ok(b)) => {
                            cases += 1;
                            if a != b {
                                bad += 1;
                            }
                            if d == 0 {
                                let expect = if mu == nu {
                                    Rational::new(1.into(), mu.z())
                                } else {
                                    int(0)
                                };
                                if a != expect {
                                    ortho_bad += 1;
                                }
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            failure.get_or_insert(e);
                        }
                    }
                }
            }
            let id = Partition::identity(n);
            for d in 0..=deg {
                match extract_h(&double, d, mu, &id) {
                    Ok(v) if v == single.entry(mu, d) => {}
                    Ok(_) => single_bad += 1,
                    Err(e) => {
                        failure.get_or_insert(e);
                    }
                }
            }
        }
    }
    if let Some(e) = failure {
        checks.push(Check::error("series", "tau_vs_weighted", params, &e));
        return;
    }
    checks.push(Check::new(
        "series",
        "tau_vs_weighted",
        params.clone(),
        bad == 0,
        format!("{cases} (mu,nu,d) cases, {bad} mismatches"),
    ));
    checks.push(Check::new(
        "series",
        "d0_orthogonality",
        params.clone(),
        ortho_bad == 0,
        format!("{ortho_bad} mismatches"),
    ));
    checks.push(Check::new(
        "series",
        "single_specialization",
        params,
        single_bad == 0,
        format!("{single_bad} mismatches"),
    ));
}

fn verify_analytic(gen: &WeightGen, beta: &Rational, a: &VerifyArgs, checks: &mut Vec<Check>) {
    let qt = quantum_terms(gen, &a.gen);
    let b = fmt_rational(beta);
    let base = format!("gen={} beta={b}", gen.name());
    let rational_like = !matches!(gen, WeightGen::Quantum { .. });
    let has_zero_c = match gen {
        WeightGen::Rational { c, .. } | WeightGen::FiniteProduct { c } => {
            c.iter().any(|x| x == &int(0))
        }
        _ => false,
    };
    match phi_k(gen, beta, 1, 0, qt) {
        Ok(p) => checks.push(Check::new(
            "analytic",
            "phi1_constant_term",
            base.clone(),
            p.coeff(0) == int(1),
            format!("value {}", fmt_rational(&p.coeff(0))),
        )),
        Err(e) => checks.push(Check::error(
            "analytic",
            "phi1_constant_term",
            base.clone(),
            &e,
        )),
    }
    for k in 2..=a.kmax {
        let params = format!("{base} k={k} J={}", a.order);
        checks.push(identity_check(
            "analytic",
            params.clone(),
            check_recursion(gen, beta, k, a.order, qt),
            "recursion",
        ));
        checks.push(identity_check(
            "analytic",
            params.clone(),
            check_spectral(gen, beta, k, a.order, qt),
            "spectral_curve",
        ));
        if rational_like && !has_zero_c {
            checks.push(identity_check(
                "analytic",
                params,
                check_spectral_ode(gen, beta, k, a.order),
                "spectral_ode",
            ));
        }
    }
    let points = [rat(1, 100), rat(1, 200), rat(-1, 300)];
    for n in 1..=3usize {
        let params = format!("{base} n={n} J={}", a.det_order);
        for (form, name) in [
            (Representation::Determinant, "det_calibration"),
            (Representation::Wronskian, "wronskian_calibration"),
        ] {
            match calibrate(gen, beta, n, a.det_order, qt, form) {
                Ok(c) => {
                    let expect = CALIBRATION_EXPONENT_PER_FUNCTION * n as i64;
                    let ok =
                        c.beta_exponent == Some(expect) && c.sign == form.sign(n) && c.consistent;
                    let exponent = c
                        .beta_exponent
                        .map_or("none".to_string(), |e| e.to_string());
                    checks.push(Check::new(
                        "analytic",
                        name,
                        params.clone(),
                        ok,
                        format!(
                            "beta exponent {exponent}, sign {}, series agreement through degree {}: {}",
                            c.sign, c.guaranteed_degree, c.consistent
                        ),
                    ));
                }
                Err(e) => checks.push(Check::error("analytic", name, params.clone(), &e)),
            }
        }
        let x = &points[..n];
        match tau_det_rep(gen, beta, x, a.det_order, qt)
            .and_then(|d| Ok((d, tau_wronskian(gen, beta, x, a.det_order, qt)?)))
        {
            Ok((d, w)) => checks.push(Check::new(
                "analytic",
                "det_equals_wronskian",
                params,
                d.value == w.value,
                format!("tau = {}", short_rational(&d.value)),
            )),
            Err(e) => checks.push(Check::error("analytic", "det_equals_wronskian", params, &e)),
        }
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<bool> {
    let gen = build_gen(&a.gen)?;
    let beta = match &a.beta {
        Some(s) => parse_rational_flag("beta", s)?,
        None if matches!(gen, WeightGen::Quantum { .. }) => rat(3, 10),
        None => rat(2, 7),
    };
    if a.kmax < 2 {
        return Err(usage("--kmax must be at least 2"));
    }
    let mut checks = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Hurwitz {
        verify_hurwitz(a.nmax, &mut checks);
    }
    if all || a.suite == Suite::Series {
        verify_series(&gen, a.nmax, a.deg, &mut checks);
    }
    if all || a.suite == Suite::Analytic {
        verify_analytic(&gen, &beta, a, &mut checks);
    }
    let rows: Vec<Vec<Value>> = checks
        .iter()
        .map(|c| {
            vec![
                json!(c.suite),
                json!(c.check),
                json!(c.params),
                json!(c.status),
                json!(c.detail),
            ]
        })
        .collect();
    emit_table(
        out,
        &["suite", "check", "params", "status", "detail"],
        &rows,
        a.out,
    )?;
    Ok(checks.iter().all(|c| c.status == "pass"))
}

fn report_error(err: &mut dyn Write, code: &str, message: &str, position: Option<usize>) {
    let mut body = serde_json::Map::new();
    body.insert("code".into(), json!(code));
    body.insert("message".into(), json!(message));
    if let Some(p) = position {
        body.insert("position".into(), json!(p));
    }
    let _ = writeln!(err, "{}", json!({ "error": body }));
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            report_error(err, "usage", first, None);
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Hurwitz(a) => cmd_hurwitz(a, out).map(|_| true),
        Command::Weighted(a) => cmd_weighted(a, out).map(|_| true),
        Command::TauCoeffs(a) => cmd_tau(a, out).map(|_| true),
        Command::Chartable(a) => cmd_chartable(a, out).map(|_| true),
        Command::Phi(a) => cmd_phi(a, out).map(|_| true),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Usage { message, position }) => {
            report_error(err, "usage", &message, position);
            2
        }
        Err(CliError::Lib(e)) => {
            report_error(err, e.code(), &strip_code(&e), None);
            if matches!(e, Error::ScaleGuard(_)) {
                2
            } else {
                1
            }
        }
        Err(CliError::Io(m)) => {
            report_error(err, "io", &m, None);
            1
        }
    }
}

/// Exact value when it is short, otherwise a decimal approximation.
fn short_rational(r: &Rational) -> String {
    let exact = fmt_rational(r);
    if exact.len() <= 40 {
        return exact;
    }
    match r.to_f64() {
        Some(v) if v.is_finite() => format!("{v:.12e} (approx)"),
        _ => format!("{} digits (approx)", exact.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["hurwitz-tau"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn list_positions_are_global() {
        match parse_rational_list("c", "1,1/0") {
            Err(CliError::Usage { position, .. }) => assert_eq!(position, Some(4)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_rational_list("c", "1,-1/3").unwrap(),
            vec![int(1), rat(-1, 3)]
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        emit_table(&mut buf, &["mu", "nu", "d", "H"], &[], Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mu,nu,d,H\n");
    }

    #[test]
    fn one_row_table() {
        let mut buf = Vec::new();
        let row = vec![json!("[2,1]"), json!(1), json!("3/4")];
        emit_table(&mut buf, &["mu", "d", "H"], &[row], Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mu,d,H\n\"[2,1]\",1,3/4\n");
    }

    #[test]
    fn generator_flag_combinations() {
        let (code, _, err) =
            run_str(&["weighted", "--gen", "quantum", "--deg", "1", "--mu", "[2]"]);
        assert_eq!(code, 2);
        assert!(err.contains("requires --q"));
        let (code, _, _) = run_str(&[
            "weighted", "--gen", "trivial", "--c", "1", "--deg", "1", "--mu", "[2]",
        ]);
        assert_eq!(code, 2);
        let (code, _, err) = run_str(&[
            "weighted", "--gen", "rational", "--d", "0", "--deg", "1", "--mu", "[2]",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("\"code\":\"usage\""));
    }

    #[test]
    fn singular_phi_is_reported() {
        let (code, _, err) = run_str(&[
            "phi", "--gen", "rational", "--c", "1", "--d", "1/3", "--beta", "1", "--k", "1",
            "--order", "5",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("singular_parameter"), "{err}");
    }
}
