mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geoshare::access::{threshold_basis, AccessDescriptor, AccessStructure, ParticipantSet};
use geoshare::array::{array_from_columns, generate_array, RepresentativeArray};
use geoshare::field::{FieldSpec, Repr};
use geoshare::geometry::{
    baer_structure, conic_arc, construct_harc, construct_parc, harc_bound_check, parc_bound_check, scheme_from_harc,
    scheme_from_parc, GeometryError, HierarchicalArc, PencilArc,
};
use geoshare::scheme::{
    deal, reconstruct, threshold_generator, verify_char, verify_definitional, verify_vector_array,
    verify_vector_columns, GeneratorMatrix, Reconstruction, Scheme, SchemeError, Share, VerificationReport,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use io::{read_array, read_json, read_shares, to_pretty, write_text, RawScheme, ShareFile};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "geoshare", version, about = "Ideal secret sharing schemes from arcs in finite projective planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a conic, parc, harc or Baer structure.
    #[command(subcommand)]
    Construct(Construct),
    /// Build a verified scheme file.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Check a scheme file, or an array against an access structure.
    Verify(VerifyArgs),
    /// Split a secret into shares.
    Deal(DealArgs),
    /// Recover a secret, or the exact key distribution, from shares.
    Reconstruct(ReconstructArgs),
    /// Exhaustive size searches in PG(2, q).
    #[command(subcommand)]
    Bounds(Bounds),
    /// Write the representative array of a scheme.
    #[command(subcommand)]
    Export(Export),
}

#[derive(Args)]
struct Out {
    /// Output file; standard output if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construct {
    /// The conic of PG(2, q), with its nucleus for even q.
    Conic {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        out: Out,
    },
    /// A parc of PG(2, q^2): variant 26, 27 or 28 for odd q, 31 or 32 for even q.
    Parc {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        variant: u32,
        #[command(flatten)]
        out: Out,
    },
    /// The harc of PG(2, q^2) built on a Baer subplane.
    Harc {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        out: Out,
    },
    /// Verify the Baer subplane structures of PG(2, q^2) and report counts.
    Baer {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Parallel scheme from a parc file.
    FromParc {
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Hierarchical scheme from a harc file.
    FromHarc {
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Shamir (t, n) threshold scheme over GF(q).
    Threshold {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Scheme from a generator file and an access descriptor file.
    Explicit {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        access: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Vector,
    Definitional,
    Char,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scheme file.
    #[arg(required_unless_present = "array", conflicts_with_all = ["array", "access"])]
    scheme: Option<PathBuf>,
    /// Array file (CSV or JSON) to check instead of a scheme.
    #[arg(long, requires = "access")]
    array: Option<PathBuf>,
    /// Access descriptor or basis file for --array.
    #[arg(long, requires = "array")]
    access: Option<PathBuf>,
    /// Field order for CSV arrays without a field line.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value = "all")]
    mode: Mode,
    /// Check every subset instead of the basis and maximal unauthorized sets.
    #[arg(long)]
    exhaustive: bool,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct DealArgs {
    scheme: PathBuf,
    /// Secret, as a field element repr.
    #[arg(long)]
    secret: Repr,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for one share file per participant.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    scheme: PathBuf,
    /// Share files, each holding one share or a list.
    #[arg(required = true)]
    shares: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Bounds {
    /// Largest parc for the pencil through (0, 1, 0).
    Parc {
        #[arg(long)]
        q: u32,
    },
    /// Largest harc for the line z = 0.
    Harc {
        #[arg(long)]
        q: u32,
    },
}

#[derive(Subcommand)]
enum Export {
    Csv {
        scheme: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    Json {
        scheme: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

/// Exit codes: 2 usage or malformed input, 3 failed verification or
/// construction, 4 inconsistent data.
enum Failure {
    Usage(anyhow::Error),
    Failed(anyhow::Error),
    Inconsistent(anyhow::Error),
}

type CmdResult = Result<(), Failure>;

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn failed<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Failed(e.into())
}

/// Writes the object to `out` (summary JSON on stdout) or to stdout.
fn emit(out: &Out, object: &impl serde::Serialize, summary: Value) -> CmdResult {
    let text = to_pretty(object);
    match &out.output {
        Some(path) => {
            write_text(path, &text).map_err(usage)?;
            let mut s = summary;
            s["file"] = json!(path.display().to_string());
            print!("{}", to_pretty(&s));
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn field(q: u32) -> Result<FieldSpec, Failure> {
    FieldSpec::of_order(q).map_err(usage)
}

fn geometry_failure(e: GeometryError) -> Failure {
    match e {
        GeometryError::UnsupportedOrder(_)
        | GeometryError::ParityMismatch { .. }
        | GeometryError::UnknownVariant(_)
        | GeometryError::TooLarge(_) => usage(e),
        other => failed(other),
    }
}

fn parc_summary(p: &PencilArc) -> Value {
    json!({"kind": "parc", "field": p.spec(), "points": p.points().len(), "profile": p.nonzero_profile(),
           "regular": p.regular_type()})
}

fn harc_summary(h: &HierarchicalArc) -> Value {
    json!({"kind": "harc", "field": h.spec(), "k1": h.k1().len(), "k2": h.k2().len(), "total": h.total()})
}

fn construct(cmd: Construct) -> CmdResult {
    match cmd {
        Construct::Conic { q, out } => {
            let f = field(q)?;
            let points = conic_arc(&f);
            eprintln!("conic of PG(2, {q}): {}-arc", points.len());
            let obj = json!({"kind": "conic", "field": f, "ambient_dim": 2, "points": points, "size": points.len()});
            emit(&out, &obj, json!({"kind": "conic", "size": points.len()}))
        }
        Construct::Parc { q, variant, out } => {
            let p = construct_parc(q, variant).map_err(geometry_failure)?;
            eprintln!("variant {variant} parc of PG(2, {}): {} points, profile {:?}", q * q, p.points().len(), p.nonzero_profile());
            emit(&out, &p, parc_summary(&p))
        }
        Construct::Harc { q, out } => {
            let h = construct_harc(q).map_err(geometry_failure)?;
            eprintln!("harc of PG(2, {}): k1 = {}, k2 = {}", q * q, h.k1().len(), h.k2().len());
            emit(&out, &h, harc_summary(&h))
        }
        Construct::Baer { q, out } => {
            let b = baer_structure(q).map_err(geometry_failure)?;
            let s = b.summary().map_err(geometry_failure)?;
            eprintln!(
                "PG(2, {}): Baer subplane of {} points; Θ(S) {} points / {} lines; Θ*(S) {} / {}",
                q * q,
                s.subplane_points,
                s.theta_points,
                s.theta_lines,
                s.theta_star_points,
                s.theta_star_lines
            );
            emit(&out, &s, json!({"kind": "baer", "q": q, "verified": true}))
        }
    }
}

fn scheme_summary(s: &Scheme) -> Value {
    json!({"participants": s.generator().m(), "k": s.generator().k(), "field": s.spec(),
           "basis_sets": s.gamma().basis().len(), "verified": s.is_verified()})
}

/// Writes a verified scheme; an unverified one goes to stderr with exit 3.
fn emit_scheme(out: &Out, s: &Scheme) -> CmdResult {
    if !s.is_verified() {
        eprint!("{}", to_pretty(s.report()));
        return Err(failed(anyhow!("scheme failed verification")));
    }
    eprintln!("verified scheme: {} participants, k = {}", s.generator().m(), s.generator().k());
    emit(out, s, scheme_summary(s))
}

fn scheme_cmd(cmd: SchemeCmd) -> CmdResult {
    match cmd {
        SchemeCmd::FromParc { input, out } => {
            let parc: PencilArc = read_json(&input).map_err(usage)?;
            emit_scheme(&out, &scheme_from_parc(&parc).map_err(failed)?)
        }
        SchemeCmd::FromHarc { input, out } => {
            let harc: HierarchicalArc = read_json(&input).map_err(usage)?;
            emit_scheme(&out, &scheme_from_harc(&harc).map_err(failed)?)
        }
        SchemeCmd::Threshold { q, t, n, out } => {
            let f = field(q)?;
            let g = threshold_generator(&f, t, n).map_err(usage)?;
            let gamma = threshold_basis(t, n).map_err(usage)?;
            emit_scheme(&out, &Scheme::new(g, gamma).map_err(usage)?)
        }
        SchemeCmd::Explicit { generator, access, out } => {
            let g: GeneratorMatrix = read_json(&generator).map_err(usage)?;
            let d: AccessDescriptor = read_json(&access).map_err(usage)?;
            let gamma = d.build().map_err(usage)?;
            emit_scheme(&out, &Scheme::new(g, gamma).map_err(usage)?)
        }
    }
}

fn run_modes(
    mode: Mode,
    exhaustive: bool,
    gamma: &AccessStructure,
    vector: impl FnOnce() -> Result<VerificationReport, SchemeError>,
    array: impl FnOnce() -> anyhow::Result<RepresentativeArray>,
) -> Result<Value, Failure> {
    let mut reports = serde_json::Map::new();
    let mut verdicts = Vec::new();
    if matches!(mode, Mode::Vector | Mode::All) {
        let r = vector().map_err(usage)?;
        verdicts.push(r.pass);
        reports.insert("vector".into(), serde_json::to_value(&r).unwrap());
    }
    if matches!(mode, Mode::Definitional | Mode::Char | Mode::All) {
        let m = array().map_err(usage)?;
        if matches!(mode, Mode::Definitional | Mode::All) {
            let r = verify_definitional(&m, gamma, exhaustive).map_err(usage)?;
            verdicts.push(r.pass);
            reports.insert("definitional".into(), serde_json::to_value(&r).unwrap());
        }
        if matches!(mode, Mode::Char | Mode::All) {
            let r = verify_char(&m, gamma, exhaustive).map_err(usage)?;
            verdicts.push(r.pass);
            reports.insert("char".into(), serde_json::to_value(&r).unwrap());
        }
    }
    let pass = verdicts.iter().all(|&p| p);
    let agree = verdicts.iter().all(|&p| p == verdicts[0]);
    Ok(json!({"pass": pass, "agree": agree, "reports": reports}))
}

fn verify(args: VerifyArgs) -> CmdResult {
    let report = if let Some(path) = &args.scheme {
        let raw: RawScheme = read_json(path).map_err(usage)?;
        raw.check_shape().map_err(usage)?;
        let gamma = raw.access.build().map_err(usage)?;
        let mut labels = vec!["D".to_string()];
        labels.extend(raw.labels());
        run_modes(
            args.mode,
            args.exhaustive,
            &gamma,
            || verify_vector_columns(&raw.field, &raw.dealer, &raw.participants, &gamma),
            || {
                let mut cols: Vec<&[Repr]> = vec![&raw.dealer];
                cols.extend(raw.participants.iter().map(Vec::as_slice));
                Ok(array_from_columns(&raw.field, labels, &cols)?)
            },
        )?
    } else {
        let spec = args.q.map(field).transpose()?;
        let m = read_array(args.array.as_deref().unwrap(), spec.as_ref()).map_err(usage)?;
        let d: AccessDescriptor = read_json(args.access.as_deref().unwrap()).map_err(usage)?;
        let gamma = d.build().map_err(usage)?;
        run_modes(args.mode, args.exhaustive, &gamma, || verify_vector_array(&m, &gamma), || Ok(m.clone()))?
    };
    let pass = report["pass"].as_bool().unwrap();
    let text = to_pretty(&report);
    match &args.out.output {
        Some(p) => write_text(p, &text).map_err(usage)?,
        None => print!("{text}"),
    }
    for (name, r) in report["reports"].as_object().unwrap() {
        let fails = r["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == json!(false)).count();
        eprintln!("{name}: {} ({fails} failing checks)", if r["pass"] == json!(true) { "PASS" } else { "FAIL" });
    }
    if pass {
        Ok(())
    } else {
        Err(failed(anyhow!("verification failed")))
    }
}

fn load_scheme(path: &Path) -> Result<Scheme, Failure> {
    let s: Scheme = read_json(path).map_err(usage)?;
    if !s.is_verified() {
        return Err(failed(anyhow!("{} does not pass verification", path.display())));
    }
    Ok(s)
}

fn deal_cmd(args: DealArgs) -> CmdResult {
    let s = load_scheme(&args.scheme)?;
    let secret = s.spec().element(args.secret).map_err(usage)?;
    let seed = args.seed.unwrap_or_else(|| {
        eprintln!("warning: no --seed given, using the fixed seed {DEFAULT_SEED}; shares are predictable");
        DEFAULT_SEED
    });
    let shares = deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(failed)?;
    let files: Vec<ShareFile> = shares
        .iter()
        .map(|sh| ShareFile {
            label: s.generator().labels()[sh.index].clone(),
            index: sh.index,
            value: sh.value.repr(),
            field: s.spec().clone(),
        })
        .collect();
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(usage)?;
        for f in &files {
            write_text(&dir.join(format!("{}.json", f.label)), &to_pretty(f)).map_err(usage)?;
        }
        eprintln!("wrote {} share files to {}", files.len(), dir.display());
    }
    print!("{}", to_pretty(&files));
    Ok(())
}

fn reconstruct_cmd(args: ReconstructArgs) -> CmdResult {
    let s = load_scheme(&args.scheme)?;
    let mut shares = Vec::new();
    for path in &args.shares {
        for f in read_shares(path).map_err(usage)? {
            if f.field != *s.spec() {
                return Err(usage(anyhow!("share {} is over {}, the scheme over {}", f.label, f.field, s.spec())));
            }
            let value = s.spec().element(f.value).map_err(usage)?;
            shares.push(Share { index: f.index, value });
        }
    }
    let set = ParticipantSet::from_indices(shares.iter().map(|x| x.index)).map_err(usage)?;
    let authorized = s.gamma().is_authorized(set).map_err(usage)?;
    let result = match reconstruct(&s, &shares, authorized) {
        Ok(r) => r,
        Err(SchemeError::InconsistentShares) => {
            return Err(Failure::Inconsistent(anyhow!("shares are inconsistent with every distribution rule")))
        }
        Err(e) => return Err(usage(e)),
    };
    let labels: Vec<&String> = shares.iter().map(|x| &s.generator().labels()[x.index]).collect();
    let out = match result {
        Reconstruction::Secret(k) => {
            eprintln!("secret {k} from {labels:?}");
            json!({"authorized": true, "participants": labels, "secret": k.repr()})
        }
        Reconstruction::Ambiguous { matching_rules, per_key } => {
            eprintln!("{labels:?} is unauthorized: {matching_rules} rules match, spread over {} keys", per_key.len());
            let dist: Vec<Value> = per_key.iter().map(|(k, n)| json!({"key": k.repr(), "rules": n})).collect();
            json!({"authorized": false, "participants": labels, "matching_rules": matching_rules, "distribution": dist})
        }
    };
    print!("{}", to_pretty(&out));
    Ok(())
}

fn bounds(cmd: Bounds) -> CmdResult {
    let start = Instant::now();
    let report = match cmd {
        Bounds::Parc { q } => parc_bound_check(q),
        Bounds::Harc { q } => harc_bound_check(q),
    }
    .map_err(geometry_failure)?;
    let elapsed = start.elapsed();
    eprintln!(
        "{} in PG(2, {}): largest {} (bound {}), {} search nodes, {:.2?}",
        report.kind, report.q, report.max_found, report.bound, report.nodes, elapsed
    );
    let mut v = serde_json::to_value(&report).unwrap();
    v["elapsed_ms"] = json!(elapsed.as_secs_f64() * 1000.0);
    v["confirmed"] = json!(report.confirmed());
    print!("{}", to_pretty(&v));
    if report.confirmed() {
        Ok(())
    } else {
        Err(failed(anyhow!("maximum {} differs from the bound {}", report.max_found, report.bound)))
    }
}

fn export(cmd: Export) -> CmdResult {
    let (path, out, csv) = match cmd {
        Export::Csv { scheme, out } => (scheme, out, true),
        Export::Json { scheme, out } => (scheme, out, false),
    };
    let s: Scheme = read_json(&path).map_err(usage)?;
    let m = generate_array(s.generator()).map_err(failed)?;
    let text = if csv { io::array_to_csv(&m).map_err(usage)? } else { to_pretty(&m) };
    eprintln!("array: {} rows x {} columns", m.n_rows(), m.n_cols());
    match &out.output {
        Some(p) => write_text(p, &text).map_err(usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(c) => construct(c),
        Command::Scheme(c) => scheme_cmd(c),
        Command::Verify(a) => verify(a),
        Command::Deal(a) => deal_cmd(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::Bounds(c) => bounds(c),
        Command::Export(c) => export(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, e) = match f {
                Failure::Usage(e) => (2, e),
                Failure::Failed(e) => (3, e),
                Failure::Inconsistent(e) => (4, e),
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
