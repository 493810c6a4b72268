//! Command-line front end. Every command prints one JSON report; the exit
//! code is 0 when all checks pass, 1 when a mathematical check fails and 2
//! for usage or configuration errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::certificate::{Certificate, Check};
use crate::cyclotomic::{build_cyclotomic_scheme, verify_cyclotomic, CycloField, CyclotomicSpec};
use crate::elliptic::{
    build_elliptic_scheme, build_fusion_scheme, fusion_report, is_prime, verify_elliptic, verify_fusion_pseudocyclic,
    verify_strong_sums,
};
use crate::error::{Error, Result};
use crate::fields::{BinaryField, PrimeField};
use crate::permpoly::{check_proof_identities, permpoly_report, PermPolySpec};
use crate::scheme::{DesignMode, SchemeTable};
use crate::spectra::{
    adjacency_cross_check, check_pseudocyclic_spectral, eigenmatrix_with_tolerance, pseudocyclic_agreement,
    ADJACENCY_LIMIT, ASSERT_TOLERANCE,
};
use crate::srg::{certify_srg, conic_vertex_count_erratum, fusion_srg_params, tensor_srg, CertifyMode, SRGraph, BITSET_LIMIT};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_SEED: u64 = 0x5EED;
const DEFAULT_DESIGN_PAIRS: usize = 10_000;
const DEFAULT_SRG_PAIRS: usize = 100_000;
/// Largest field on which `field` enumerates every element.
const FIELD_ENUMERATION_LIMIT: u32 = 20;

#[derive(Debug, Parser)]
#[command(name = "conic-schemes", version, about = "Construct and certify pseudocyclic association schemes over GF(2^m)")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CONIC_SCHEMES_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Describe GF(2^m) and check its basic invariants.
    Field(FieldArgs),
    /// Elliptic scheme on the exterior lines to a conic.
    Elliptic {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Fusion of the elliptic scheme along Frobenius orbits.
    Fusion {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Permutation polynomials H_{α,γ}.
    Permpoly {
        #[command(subcommand)]
        action: PermpolyAction,
    },
    /// Cyclotomic schemes over F_p or GF(2^m).
    Cyclotomic {
        #[command(subcommand)]
        action: CycloAction,
    },
    /// Eigenmatrices and multiplicities of a scheme.
    Spectra(SpectraArgs),
    /// Latin-square-type strongly regular graphs.
    Srg {
        #[command(subcommand)]
        action: SrgAction,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum SchemeAction {
    /// Build the scheme and emit its intersection numbers.
    Build(FieldArgs),
    /// Run the full verification suite.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum PermpolyAction {
    /// Exhaustively check H_{α,γ} (all four (α,γ) unless both are given).
    Check(PermpolyArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum CycloAction {
    Build(CycloArgs),
    Verify(CycloArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum SrgAction {
    /// Build the product graph of a pseudocyclic scheme and certify it.
    Build {
        #[command(flatten)]
        scheme: SchemeSelect,
        #[command(flatten)]
        mode: ModeArgs,
        /// Also export the graph as an edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Certify a graph read from an edge list.
    Certify {
        #[arg(long)]
        edges: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Args, Serialize)]
struct FieldArgs {
    /// Extension degree of GF(2^m).
    #[arg(long)]
    m: u32,
    /// Defining polynomial as an integer (0x.., 0b.. or decimal).
    #[arg(long, value_parser = parse_modulus)]
    modulus: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Args, Serialize)]
struct ModeArgs {
    /// Exhaustive or sampled verification (default depends on size).
    #[arg(long, visible_alias = "certify", value_enum)]
    mode: Option<Mode>,
    /// Number of sampled pairs in sampled mode.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct PermpolyArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1), requires = "gamma")]
    alpha: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1), requires = "alpha")]
    gamma: Option<u8>,
    #[arg(long, value_parser = parse_modulus)]
    modulus: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
struct CycloArgs {
    /// Odd prime p for F_p.
    #[arg(long, required_unless_present = "m", conflicts_with = "m")]
    p: Option<u64>,
    /// Degree m for GF(2^m).
    #[arg(long)]
    m: Option<u32>,
    /// Number of cosets.
    #[arg(long)]
    e: usize,
    #[arg(long, value_parser = parse_modulus, requires = "m")]
    modulus: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SchemeKind {
    Elliptic,
    Fusion,
    Cyclotomic,
}

#[derive(Debug, Args, Serialize)]
struct SchemeSelect {
    #[arg(long, value_enum, default_value = "elliptic")]
    scheme: SchemeKind,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long, value_parser = parse_modulus)]
    modulus: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
struct SpectraArgs {
    #[command(flatten)]
    scheme: SchemeSelect,
    /// Numerical tolerance for spectral assertions.
    #[arg(long, default_value_t = ASSERT_TOLERANCE)]
    tolerance: f64,
}

fn parse_modulus(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let parsed = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(h, 16)
    } else if let Some(b) = s.strip_prefix("0b").or_else(|| s.strip_prefix("0B")) {
        u64::from_str_radix(b, 2)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("invalid modulus {s:?}: {e}"))
}

/// The one JSON document every command emits.
pub fn report_bundle(config: Value, certificates: &[Certificate], data: Option<Value>) -> Value {
    let mut checks = Vec::new();
    let mut metadata = Map::new();
    for cert in certificates {
        for c in cert.checks() {
            let mut c = c.clone();
            c.name = format!("{}/{}", cert.subject(), c.name);
            checks.push(c);
        }
        if !cert.metadata().is_empty() {
            metadata.insert(cert.subject().to_string(), Value::Object(cert.metadata().clone()));
        }
    }
    let pass = certificates.iter().all(Certificate::passed);
    let mut out = json!({
        "tool_version": TOOL_VERSION,
        "config": config,
        "pass": pass,
        "checks": checks,
    });
    if !metadata.is_empty() {
        out["metadata"] = Value::Object(metadata);
    }
    if let Some(d) = data {
        out["data"] = d;
    }
    out
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads(cli.threads);
    match run(&cli) {
        Ok(report) => {
            let pass = report["pass"].as_bool().unwrap_or(false);
            match write_report(&report, cli.out.as_ref()) {
                Ok(()) => i32::from(!pass),
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotAScheme { .. } => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads.filter(|&n| n > 0) {
        // fails only if a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) {}

fn write_report(report: &Value, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the parsed command and returns its report.
pub fn run(cli: &Cli) -> Result<Value> {
    let config = json!({ "command": serde_json::to_value(&cli.command)?, "seed": cli.seed });
    let (certs, data) = match &cli.command {
        Command::Field(a) => field_cmd(a)?,
        Command::Elliptic { action } => elliptic_cmd(action, cli.seed)?,
        Command::Fusion { action } => fusion_cmd(action, cli.seed)?,
        Command::Permpoly { action: PermpolyAction::Check(a) } => permpoly_cmd(a)?,
        Command::Cyclotomic { action } => cyclotomic_cmd(action)?,
        Command::Spectra(a) => spectra_cmd(a, cli.seed)?,
        Command::Srg { action } => srg_cmd(action, cli.seed)?,
    };
    Ok(report_bundle(config, &certs, data))
}

type Outcome = (Vec<Certificate>, Option<Value>);

fn binary_field(m: u32, modulus: Option<u64>) -> Result<BinaryField> {
    BinaryField::new(m, modulus)
}

fn design_mode(mode: &ModeArgs, seed: u64) -> DesignMode {
    match mode.mode {
        Some(Mode::Exact) => DesignMode::Exhaustive,
        Some(Mode::Sampled) => DesignMode::Sampled { pairs: mode.samples.unwrap_or(DEFAULT_DESIGN_PAIRS), seed },
        None => DesignMode::Auto,
    }
}

fn table_value(table: &SchemeTable) -> Result<Value> {
    Ok(serde_json::from_str(&table.to_json())?)
}

fn field_cmd(a: &FieldArgs) -> Result<Outcome> {
    let f = binary_field(a.m, a.modulus)?;
    let q = f.q();
    let g = f.primitive_element();
    let mut cert = Certificate::new(format!("field_m{}", a.m));
    cert.push(Check::new("modulus_irreducible", "GF(2^m) = F_2[x]/(f), f irreducible", true, true, true));
    let frob = f.frobenius_pow(g, f.m());
    cert.push(Check::equal("frobenius_order_m", "x ↦ x^(2^m) is the identity", g, frob));
    let fermat = f.pow(g, q - 1);
    cert.push(Check::equal("multiplicative_order", "g^(q-1) = 1", 1, fermat));
    let mut data = json!({
        "m": f.m(),
        "q": q,
        "modulus": f.modulus(),
        "modulus_binary": format!("{:b}", f.modulus()),
        "primitive_element": g,
        "min_trace_one": f.min_trace_one(),
    });
    if f.m() <= FIELD_ENUMERATION_LIMIT {
        let t1 = f.elements().filter(|&x| f.trace(x) == 1).count() as u64;
        cert.push(Check::equal("trace_spheres_balanced", "|T_0| = |T_1| = q/2", q / 2, t1));
        let mut x = 1;
        let mut order = 0u64;
        loop {
            x = f.mul(x, g);
            order += 1;
            if x == 1 {
                break;
            }
        }
        cert.push(Check::equal("primitive_element_order", "g generates F_q*", q - 1, order));
        data["trace_sphere_sizes"] = json!([q - t1, t1]);
    }
    Ok((vec![cert], Some(data)))
}

fn elliptic_cmd(action: &SchemeAction, seed: u64) -> Result<Outcome> {
    match action {
        SchemeAction::Build(a) => {
            let f = binary_field(a.m, a.modulus)?;
            let scheme = build_elliptic_scheme(&f)?;
            let axioms = scheme.table().verify_axioms();
            let data = json!({ "labels": scheme.labels(), "table": table_value(scheme.table())? });
            Ok((vec![axioms], Some(data)))
        }
        SchemeAction::Verify { field, mode } => {
            let f = binary_field(field.m, field.modulus)?;
            let scheme = build_elliptic_scheme(&f)?;
            let mut certs = vec![verify_elliptic(&scheme, design_mode(mode, seed))];
            if f.m() % 2 == 1 && f.m() >= 3 {
                certs.push(verify_strong_sums(&f)?);
            }
            Ok((certs, None))
        }
    }
}

fn fusion_cmd(action: &SchemeAction, seed: u64) -> Result<Outcome> {
    match action {
        SchemeAction::Build(a) => {
            let f = binary_field(a.m, a.modulus)?;
            let fusion = build_fusion_scheme(&f)?;
            let axioms = fusion.table().verify_axioms();
            let data = json!({ "orbits": fusion.partition().orbits, "table": table_value(fusion.table())? });
            Ok((vec![axioms], Some(data)))
        }
        SchemeAction::Verify { field, mode } => {
            let f = binary_field(field.m, field.modulus)?;
            let fusion = build_fusion_scheme(&f)?;
            let design = design_mode(mode, seed);
            let cert = if f.m() % 2 == 1 && is_prime(f.m()) {
                verify_fusion_pseudocyclic(&fusion, design)?
            } else {
                fusion_report(&fusion, design, None)
            };
            Ok((vec![cert], None))
        }
    }
}

fn permpoly_cmd(a: &PermpolyArgs) -> Result<Outcome> {
    let f = binary_field(a.m, a.modulus)?;
    let base = PermPolySpec::new(a.m, a.k, 0, 0)?;
    let specs = match (a.alpha, a.gamma) {
        (Some(al), Some(ga)) => vec![base.with_bits(al, ga)],
        _ => [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(al, ga)| base.with_bits(al, ga)).collect(),
    };
    let mut certs = Vec::new();
    let mut reports = Vec::new();
    for spec in &specs {
        let (report, cert) = permpoly_report(spec, &f)?;
        reports.push(report);
        certs.push(cert);
    }
    certs.push(check_proof_identities(&base, &f)?);
    Ok((certs, Some(serde_json::to_value(reports)?)))
}

fn cyclo_spec(a: &CycloArgs) -> Result<CyclotomicSpec> {
    match (a.p, a.m) {
        (Some(p), None) => CyclotomicSpec::new(CycloField::Prime(PrimeField::new(p)?), a.e),
        (None, Some(m)) => CyclotomicSpec::new(CycloField::Binary(BinaryField::new(m, a.modulus)?), a.e),
        _ => Err(Error::Precondition("give exactly one of --p and --m".into())),
    }
}

fn cyclotomic_cmd(action: &CycloAction) -> Result<Outcome> {
    match action {
        CycloAction::Build(a) => {
            let spec = cyclo_spec(a)?;
            let scheme = build_cyclotomic_scheme(&spec)?;
            let data = json!({ "f": spec.f(), "cosets": spec.cosets(), "table": table_value(&scheme)? });
            Ok((vec![scheme.verify_axioms()], Some(data)))
        }
        CycloAction::Verify(a) => Ok((vec![verify_cyclotomic(&cyclo_spec(a)?)?], None)),
    }
}

struct Selected {
    table: SchemeTable,
    /// (q, m) for the conic schemes
    conic: Option<(u64, u64)>,
    kind: SchemeKind,
}

fn select_scheme(s: &SchemeSelect) -> Result<Selected> {
    let need_m = || s.m.ok_or_else(|| Error::Precondition("--m is required for this scheme".into()));
    match s.scheme {
        SchemeKind::Elliptic => {
            let f = binary_field(need_m()?, s.modulus)?;
            let conic = Some((f.q(), f.m() as u64));
            Ok(Selected { table: build_elliptic_scheme(&f)?.table().clone(), conic, kind: s.scheme })
        }
        SchemeKind::Fusion => {
            let f = binary_field(need_m()?, s.modulus)?;
            let conic = Some((f.q(), f.m() as u64));
            Ok(Selected { table: build_fusion_scheme(&f)?.table().clone(), conic, kind: s.scheme })
        }
        SchemeKind::Cyclotomic => {
            let e = s.e.ok_or_else(|| Error::Precondition("--e is required for cyclotomic schemes".into()))?;
            let spec = cyclo_spec(&CycloArgs { p: s.p, m: s.m, e, modulus: s.modulus })?;
            Ok(Selected { table: build_cyclotomic_scheme(&spec)?, conic: None, kind: s.scheme })
        }
    }
}

fn spectra_cmd(a: &SpectraArgs, seed: u64) -> Result<Outcome> {
    let sel = select_scheme(&a.scheme)?;
    let params = sel.table.params();
    let spectrum = eigenmatrix_with_tolerance(params, seed, a.tolerance)?;
    let mut structural = Certificate::new("spectrum");
    structural.extend(spectrum.verify(params));
    if sel.table.n_points() <= ADJACENCY_LIMIT {
        structural.push(adjacency_cross_check(&sel.table, &spectrum)?);
    }
    structural.push(pseudocyclic_agreement(params, seed));
    let mut certs = vec![structural];
    if params.check_pseudocyclic().passed() {
        certs.push(check_pseudocyclic_spectral(params, seed));
    }
    Ok((certs, Some(spectrum.to_json())))
}

fn srg_cmd(action: &SrgAction, seed: u64) -> Result<Outcome> {
    match action {
        SrgAction::Build { scheme, mode, edges } => {
            let sel = select_scheme(scheme)?;
            let mut g = tensor_srg(&sel.table)?;
            if let Some((q, _)) = sel.conic {
                g.note("erratum", conic_vertex_count_erratum(q));
            }
            let cmode = srg_mode(mode, &g, seed);
            let mut cert = certify_srg(&g, cmode)?;
            if let (SchemeKind::Fusion, Some((q, m))) = (sel.kind, sel.conic) {
                if m % 2 == 1 && is_prime(m as u32) {
                    let closed = fusion_srg_params(q, m)?;
                    cert.push(Check::equal("fusion_closed_form", "fusion SRG parameters in terms of q, m", closed, g.claimed()));
                }
            }
            if let Some(path) = edges {
                g.write_edge_list(BufWriter::new(File::create(path)?))?;
            }
            Ok((vec![cert], Some(json!({ "claimed": g.claimed() }))))
        }
        SrgAction::Certify { edges, mode } => {
            let g = SRGraph::from_edge_list(BufReader::new(File::open(edges)?), None)?;
            let cert = certify_srg(&g, srg_mode(mode, &g, seed))?;
            Ok((vec![cert], Some(json!({ "claimed": g.claimed() }))))
        }
    }
}

fn srg_mode(mode: &ModeArgs, g: &SRGraph, seed: u64) -> CertifyMode {
    let sampled = CertifyMode::Sampled { pairs: mode.samples.unwrap_or(DEFAULT_SRG_PAIRS), seed };
    match mode.mode {
        Some(Mode::Exact) => CertifyMode::Exact,
        Some(Mode::Sampled) => sampled,
        None if g.v() <= BITSET_LIMIT && !g.is_lazy() => CertifyMode::Exact,
        None => sampled,
    }
}
