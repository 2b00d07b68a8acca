use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ualg::algebra::{make_chain_lattice, make_ujm_reduct, FiniteAlgebra, ProductAlgebra};
use ualg::claims::{certify_identity, certify_level, certify_search, LevelExpectation, TripleSource};
use ualg::constructions::{
    build_b, coordinates, example31_build, run_section3_induction, verify_induction, verify_prop41, SharpnessParams,
};
use ualg::fixtures::{load_fixtures, FIXTURE_FAMILIES};
use ualg::free::{Caps, DEFAULT_COORD_CAP};
use ualg::identity::{Family, IdentityParams};
use ualg::recheck::recheck;
use ualg::search::{AbsorptionPreset, ChainPreset};
use ualg::toolkit::{run_toolkit, ArityTerm, Construction};
use ualg::{Certificate, Error, Exec, Term};

const EXIT_VERIFIED: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_INVALID: u8 = 3;

/// Finite-algebra workbench: sharpness witnesses for congruence identities
/// and Maltsev-condition searches, with re-checkable certificates.
#[derive(Parser, Debug)]
#[command(name = "ualg", version)]
struct Cli {
    /// Replay the evidence of a certificate file instead of running a command.
    #[arg(long, value_name = "CERT")]
    recheck: Option<PathBuf>,

    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Where to write the certificate or built object (stdout if absent).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    /// Run every engine on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// Element cap for closures and free algebras.
    #[arg(long, global = true, env = "UALG_CAP", default_value_t = 2_000_000)]
    cap: usize,

    /// Coordinate cap for free-algebra realizations.
    #[arg(long, global = true, default_value_t = DEFAULT_COORD_CAP)]
    coord_cap: usize,
}

impl Global {
    fn exec(&self) -> Exec {
        if self.sequential { Exec::Sequential } else { Exec::Parallel }
    }

    fn caps(&self) -> Caps {
        Caps { coords: self.coord_cap, elements: self.cap }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an algebra or construction and write it as JSON.
    Build {
        #[command(subcommand)]
        what: BuildTarget,
    },
    /// Verify a construction end to end.
    Verify {
        #[command(subcommand)]
        what: VerifyTarget,
    },
    /// Check a congruence identity on a constructed or supplied triple.
    Check {
        #[command(subcommand)]
        what: CheckTarget,
    },
    /// Least length of a term chain in the variety generated by the input.
    Level {
        #[arg(long)]
        scheme: ChainPreset,
        #[command(flatten)]
        input: AlgebraInput,
        #[arg(long, default_value_t = 40)]
        max_level: usize,
        /// Expected level, or `none` when no chain exists.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Search for a single term satisfying an absorption scheme.
    Search {
        /// nu, lone-dissent, half-nu, dissent-unanimity or maltsev.
        #[arg(long)]
        scheme: String,
        /// Arity for nu and lone-dissent, m for half-nu and dissent-unanimity.
        #[arg(long)]
        arity: Option<usize>,
        #[command(flatten)]
        input: AlgebraInput,
        #[arg(long, value_enum, default_value_t = Expect::Found)]
        expect: Expect,
    },
    /// Composite terms built from lone-dissent terms.
    Toolkit {
        #[command(subcommand)]
        what: ToolkitTarget,
    },
}

#[derive(Subcommand, Debug)]
enum BuildTarget {
    /// Chain lattice with `size` elements.
    Chain {
        #[arg(long)]
        size: usize,
    },
    /// Reduct of a chain to its m-ary j-th order statistic.
    Ujm {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        chain_size: usize,
    },
    /// Direct product of the input algebras as one table algebra.
    Product {
        #[command(flatten)]
        input: AlgebraInput,
        #[arg(long, default_value_t = 1 << 22)]
        table_cap: usize,
    },
    /// The good elements B(m,q), with a coordinate sidecar file.
    B {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
    /// The ambient product P(m,q) and its coordinates.
    P {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
    /// Every level of the descending construction.
    Lemma22 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
    /// The top-removed cube, closed for the (m−1)-fold power of N^{2,m}.
    Example31 {
        #[arg(long)]
        m: usize,
    },
    /// List the fixture families, or write the algebras of one fixture.
    Fixtures {
        #[arg(long)]
        key: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    /// The identity failures in B(m,q) at (a,d).
    Sharpness {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
    /// The identity failure at every level of the descending construction.
    Induction {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CheckTarget {
    Identity(IdentityArgs),
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    exponent: Option<usize>,
    #[arg(long, value_enum, default_value_t = Source::Sharpness)]
    source: Source,
    /// JSON file with `alpha`, `beta`, `gamma` block labels (and optionally
    /// `algebra`) for `--source partitions`.
    #[arg(long)]
    partitions: Option<PathBuf>,
    /// Only test the distinguished pair (a,d) of the construction.
    #[arg(long)]
    pair: bool,
    #[arg(long, value_enum)]
    expect: Option<IdentityExpect>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Source {
    Sharpness,
    Induction,
    Partitions,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IdentityExpect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Expect {
    Found,
    Absent,
}

#[derive(Subcommand, Debug)]
enum ToolkitTarget {
    LoneDissent(ToolkitArgs),
}

#[derive(Args, Debug)]
struct ToolkitArgs {
    #[command(flatten)]
    input: AlgebraInput,
    #[arg(long, value_enum)]
    construction: ConstructionArg,
    /// Operation name or JSON term for d.
    #[arg(long)]
    d: String,
    /// Operation name or JSON term for e.
    #[arg(long)]
    e: Option<String>,
    /// Number of nested copies for the power construction.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionArg {
    Power,
    Pair,
    Maltsev,
    Nu,
    Coprime,
}

#[derive(Args, Debug, Clone)]
struct AlgebraInput {
    /// Fixture key such as N:2:4, Nm:5, I:4, sum:3:4 or ld2; join with `+`.
    #[arg(long)]
    fixture: Option<String>,
    /// Algebra JSON file; may be repeated.
    #[arg(long)]
    algebra: Vec<PathBuf>,
}

impl AlgebraInput {
    fn load(&self) -> anyhow::Result<Vec<FiniteAlgebra>> {
        let mut gens = match &self.fixture {
            Some(f) => load_fixtures(f)?,
            None => Vec::new(),
        };
        for p in &self.algebra {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            gens.push(FiniteAlgebra::from_json(&text)?);
        }
        if gens.is_empty() {
            return Err(Error::invalid("give --fixture or --algebra").into());
        }
        if let Some(b) = gens.iter().skip(1).find(|b| !gens[0].similar(b)) {
            return Err(Error::Dissimilar(format!("{} and {}", gens[0].label(), b.label())).into());
        }
        Ok(gens)
    }
}

/// What a command produced.
enum Output {
    Certificate(Certificate),
    Object(Value),
}

/// Writes `text` next to `path` and renames it into place.
fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".coords.json");
    PathBuf::from(s)
}

fn emit(global: &Global, text: &str) -> anyhow::Result<()> {
    match &global.out {
        Some(p) => write_atomic(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_term(alg: &FiniteAlgebra, s: &str) -> anyhow::Result<ArityTerm> {
    if s.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(s).context("term JSON")?;
        let t = Term::from_json(&v)?;
        let arity = t.var_bound();
        Ok(ArityTerm::new(t, arity)?)
    } else {
        Ok(ArityTerm::basic(alg, s)?)
    }
}

fn build(global: &Global, what: &BuildTarget) -> anyhow::Result<Output> {
    let exec = global.exec();
    let v = match what {
        BuildTarget::Chain { size } => serde_json::to_value(make_chain_lattice(*size)?)?,
        BuildTarget::Ujm { j, m, chain_size } => serde_json::to_value(make_ujm_reduct(*chain_size, *j, *m)?)?,
        BuildTarget::Product { input, table_cap } => {
            let gens = input.load()?;
            let (alg, ix) = ualg::algebra::direct_product(&gens, *table_cap)?;
            json!({"algebra": alg, "indexing": ix})
        }
        BuildTarget::B { m, q } => {
            let p = SharpnessParams::new(*m, *q)?;
            let w = build_b(p, exec)?;
            let coords = json!({"m": m, "q": q, "coordinates": w.coords});
            if let Some(out) = &global.out {
                write_atomic(&sidecar(out), &serde_json::to_string_pretty(&coords)?)?;
            }
            json!({
                "m": m,
                "q": q,
                "size": w.size(),
                "boxes": w.boxes,
                "elements": (0..w.size()).map(|b| w.tuple(b)).collect::<Vec<_>>(),
                "a": w.tuple(w.a),
                "d": w.tuple(w.d),
                "mid": w.mid.iter().map(|&c| w.tuple(c)).collect::<Vec<_>>(),
            })
        }
        BuildTarget::P { m, q } => {
            let p = SharpnessParams::new(*m, *q)?;
            let coords = coordinates(&p);
            let factors: Vec<FiniteAlgebra> = coords
                .iter()
                .map(|c| make_ujm_reduct(c.size, level_of(&c.role), *m))
                .collect::<ualg::Result<_>>()?;
            let prod = ProductAlgebra::new(factors.clone())?;
            json!({"m": m, "q": q, "coordinates": coords, "size": prod.indexing().total(), "factors": factors})
        }
        BuildTarget::Lemma22 { m, q } => {
            let states = run_section3_induction(*m, *q, exec)?;
            json!(states
                .iter()
                .map(|s| json!({
                    "j": s.j,
                    "step": s.step,
                    "factors": s.a3_factors.iter().map(|f| f.label().to_string()).collect::<Vec<_>>(),
                    "boxes": s.f,
                    "size": s.elements.len(),
                    "witness_tuples": s.witness_tuples(),
                }))
                .collect::<Vec<_>>())
        }
        BuildTarget::Example31 { m } => {
            let ex = example31_build(*m, exec)?;
            let ix = ex.algebra.indexing();
            json!({
                "m": m,
                "size": ex.subset.len(),
                "elements": ex.subset.iter().map(|&e| ix.decode(e)).collect::<Vec<_>>(),
                "removed": ix.decode(ex.top),
            })
        }
        BuildTarget::Fixtures { key: None } => json!(FIXTURE_FAMILIES
            .iter()
            .map(|(k, d)| json!({"key": k, "description": d}))
            .collect::<Vec<_>>()),
        BuildTarget::Fixtures { key: Some(k) } => serde_json::to_value(load_fixtures(k)?)?,
    };
    Ok(Output::Object(v))
}

fn level_of(role: &ualg::constructions::CoordRole) -> usize {
    use ualg::constructions::CoordRole;
    match role {
        CoordRole::PairFirst { level } | CoordRole::PairSecond { level } | CoordRole::Half { level } => *level,
        CoordRole::Last => 2,
    }
}

fn run(global: &Global, cmd: &Command) -> anyhow::Result<Output> {
    let exec = global.exec();
    let caps = global.caps();
    Ok(match cmd {
        Command::Build { what } => return build(global, what),
        Command::Verify { what: VerifyTarget::Sharpness { m, q } } => {
            let p = SharpnessParams::new(*m, *q)?;
            let cert = verify_prop41(p, exec)?;
            if let Some(out) = &global.out {
                let coords = json!({"m": m, "q": q, "coordinates": coordinates(&p)});
                write_atomic(&sidecar(out), &serde_json::to_string_pretty(&coords)?)?;
            }
            Output::Certificate(cert)
        }
        Command::Verify { what: VerifyTarget::Induction { m, q } } => Output::Certificate(verify_induction(*m, *q, exec)?),
        Command::Check { what: CheckTarget::Identity(a) } => {
            let params = IdentityParams { m: a.m, q: a.q, j: a.j, n: a.n, exponent: a.exponent };
            let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Error::invalid(format!("--{name} is required for this source")));
            let src = match a.source {
                Source::Sharpness => TripleSource::Sharpness { m: need(a.m, "m")?, q: need(a.q, "q")? },
                Source::Induction => TripleSource::Induction { m: need(a.m, "m")?, q: need(a.q, "q")?, j: need(a.j, "j")? },
                Source::Partitions => {
                    let path = a.partitions.as_ref().ok_or_else(|| Error::invalid("--partitions is required"))?;
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let mut v: Value = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("partitions JSON: {e}")))?;
                    v["source"] = json!("partitions");
                    serde_json::from_value(v).map_err(|e| Error::invalid(format!("partitions JSON: {e}")))?
                }
            };
            let expect = a.expect.map(|e| matches!(e, IdentityExpect::Holds));
            Output::Certificate(certify_identity(&src, a.family, params, a.pair, expect, exec)?)
        }
        Command::Level { scheme, input, max_level, expect } => {
            let expect = match expect.as_deref() {
                None => None,
                Some("none") => Some(LevelExpectation::Absent),
                Some(n) => Some(LevelExpectation::Exactly(
                    n.parse().map_err(|_| Error::invalid(format!("--expect {n:?} is neither a number nor `none`")))?,
                )),
            };
            Output::Certificate(certify_level(&input.load()?, *scheme, *max_level, expect, caps, exec)?)
        }
        Command::Search { scheme, arity, input, expect } => {
            let preset = AbsorptionPreset::parse(scheme, *arity)?;
            Output::Certificate(certify_search(&input.load()?, preset, *expect == Expect::Found, caps, exec)?)
        }
        Command::Toolkit { what: ToolkitTarget::LoneDissent(a) } => {
            let gens = a.input.load()?;
            let d = parse_term(&gens[0], &a.d)?;
            let e = a.e.as_deref().map(|s| parse_term(&gens[0], s)).transpose()?;
            let construction = match a.construction {
                ConstructionArg::Power => Construction::Power { k: a.k },
                ConstructionArg::Pair => Construction::Pair,
                ConstructionArg::Maltsev => Construction::Maltsev,
                ConstructionArg::Nu => Construction::Nu,
                ConstructionArg::Coprime => Construction::Coprime,
            };
            Output::Certificate(run_toolkit(&gens, construction, &d, e.as_ref(), caps, exec)?)
        }
    })
}

fn exit_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_cap() => EXIT_CAP,
        Some(Error::Verification { .. }) => EXIT_REFUTED,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_VERIFIED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result: anyhow::Result<u8> = (|| {
        if let Some(path) = &cli.recheck {
            if cli.command.is_some() {
                return Err(Error::invalid("--recheck cannot be combined with a command").into());
            }
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cert = Certificate::from_json(&text)?;
            let report = recheck(&cert)?;
            for c in &report.checks {
                eprintln!("ok: {c}");
            }
            eprintln!("recheck passed ({} certificate)", report.kind);
            return Ok(EXIT_VERIFIED);
        }
        let Some(cmd) = &cli.command else {
            return Err(Error::invalid("no command given (see --help)").into());
        };
        match run(&cli.global, cmd)? {
            Output::Object(v) => {
                emit(&cli.global, &serde_json::to_string_pretty(&v)?)?;
                Ok(EXIT_VERIFIED)
            }
            Output::Certificate(cert) => {
                emit(&cli.global, &cert.to_json_pretty())?;
                let verdict = if cert.is_verified() { "verified" } else { "refuted" };
                eprintln!("{verdict}: {}", cert.claim);
                Ok(if cert.is_verified() { EXIT_VERIFIED } else { EXIT_REFUTED })
            }
        }
    })();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_for(&e))
        }
    }
}
