//! `hrqss`: deal, reconstruct, verify and cost hybrid quantum secret sharing
//! schemes from the command line.

mod bundle;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use hrqss::qudit::{fidelity, StateVector};
use hrqss::scheme::{cost_hqss, cost_hrqss, cost_min, cost_table, hqss_params, Family, SchemeFamily, SchemeSpec};
use hrqss::verify::{verify_scheme, Route, VerifyOptions};
use hrqss::Error;

use bundle::{read_amplitude_file, ShareBundleFile};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_PARAM: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_FORBIDDEN: u8 = 4;
const EXIT_QUANTUM_SHORT: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "hrqss", version, about = "Hybrid ramp quantum secret sharing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Deal a secret and write every player's share to a bundle file.
    Deal(DealArgs),
    /// Reconstruct the secret from a subset of a bundle's shares.
    Reconstruct(ReconstructArgs),
    /// Exhaustively check a scheme's access structure.
    Verify(VerifyArgs),
    /// Quantum communication cost of the hybrid constructions.
    Cost(CostArgs),
}

#[derive(Args, Debug, Clone)]
struct SchemeArgs {
    /// hqss, hrqss, nn, n1n, cgl or ramp.
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: usize,
    /// Number of players holding a quantum share (hrqss).
    #[arg(long)]
    nqr: Option<usize>,
    /// Secret qudit dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Ramp gap L (ramp).
    #[arg(long)]
    l: Option<usize>,
    /// Classical ramp scheme for n1n (rcss4, rcss6, rcss6-fixed, direct-key).
    #[arg(long)]
    rcss: Option<String>,
    /// Deliberately broken variant (direct-key, overclaim).
    #[arg(long)]
    sabotage: Option<String>,
}

impl SchemeArgs {
    fn spec(&self) -> hrqss::Result<SchemeSpec> {
        let need_k = || self.k.ok_or_else(|| Error::param(format!("--k is required for {}", self.scheme)));
        let d = self.d.unwrap_or(2);
        let mut spec = match Family::parse(&self.scheme)? {
            Family::Hqss => SchemeSpec::hqss(need_k()?, self.n, d),
            Family::Hrqss => {
                let n_qr = self.nqr.ok_or_else(|| Error::param("--nqr is required for hrqss"))?;
                SchemeSpec::hrqss(need_k()?, self.n, n_qr, d)
            }
            Family::Nn => {
                if self.k.is_some_and(|k| k != self.n) {
                    return Err(Error::param("nn schemes have k = n"));
                }
                SchemeSpec::nn(self.n, d)
            }
            Family::N1n => {
                if self.k.is_some_and(|k| k + 1 != self.n) {
                    return Err(Error::param("n1n schemes have k = n − 1"));
                }
                if self.d.is_some_and(|d| d != 2) {
                    return Err(Error::param("n1n schemes share qubits (d = 2)"));
                }
                SchemeSpec::n1n(self.n)
            }
            Family::Cgl => SchemeSpec::cgl(need_k()?, self.n, d),
            Family::Ramp => {
                let l = self.l.ok_or_else(|| Error::param("--l is required for ramp"))?;
                SchemeSpec::ramp(need_k()?, l, self.n, d)
            }
        };
        if let Some(r) = &self.rcss {
            spec = spec.with_rcss(r.clone());
        }
        if let Some(s) = &self.sabotage {
            spec = spec.with_sabotage(s.clone());
        }
        Ok(spec)
    }
}

#[derive(Args, Debug)]
struct DealArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Computational basis index, or a JSON file of [re, im] amplitude pairs.
    #[arg(long)]
    secret: String,
    #[arg(long)]
    seed: u64,
    /// Bundle file to write; defaults to bundle.json.
    #[arg(long, default_value = "bundle.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated 1-based players, e.g. 1,2,3.
    #[arg(long, value_parser = parse_subset)]
    subset: PlayerSet,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Factored,
    Naive,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    #[arg(long, value_enum, default_value_t = RouteArg::Factored)]
    route: RouteArg,
    /// Seed for sampled authorized-subset randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CostArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Secret dimension d_s.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// List every admissible number of quantum shares.
    #[arg(long)]
    sweep_nqr: bool,
}

#[derive(Clone, Debug)]
struct PlayerSet(Vec<usize>);

fn parse_subset(s: &str) -> Result<PlayerSet, String> {
    let players: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("'{p}' is not a player number")))
        .collect::<Result<_, _>>()?;
    if players.iter().any(|&p| p == 0) {
        return Err("players are numbered from 1".into());
    }
    Ok(PlayerSet(players))
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::EnumerationGuard { .. } => EXIT_GUARD,
        Error::InsufficientShares { .. } => EXIT_FORBIDDEN,
        Error::InsufficientQuantumShares { .. } => EXIT_QUANTUM_SHORT,
        Error::Recovery(_) | Error::NotInCodeSpace(_) => EXIT_FAIL,
        _ => EXIT_PARAM,
    }
}

fn read_secret(arg: &str, family: &dyn SchemeFamily) -> hrqss::Result<StateVector> {
    let space = family.secret_space();
    match arg.parse::<usize>() {
        Ok(index) => StateVector::basis(space, index),
        Err(_) => read_amplitude_file(std::path::Path::new(arg), space),
    }
}

fn deal(args: &DealArgs) -> hrqss::Result<u8> {
    let family = args.scheme.spec()?.build()?;
    let secret = read_secret(&args.secret, family.as_ref())?;
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let dealt = family.deal(&secret, &mut rng)?;
    ShareBundleFile::from_dealt(&dealt, args.seed).write(&args.out)?;

    let desc = family.descriptor();
    println!("dealt {} with seed {} to {}", desc.label(), args.seed, args.out.display());
    for (b, (size, bound)) in dealt.bundles.iter().zip(desc.shares.iter().zip(desc.bound_report())) {
        let qudits = if b.quantum_dims.is_empty() {
            "no quantum share".to_string()
        } else {
            format!("{} qudit(s) of dim {:?}", b.quantum_dims.len(), b.quantum_dims)
        };
        println!(
            "  player {}: {qudits} ({} qubits) + {} classical value(s) ({} bits); bound {}",
            b.player,
            report::num(size.log2_dq),
            b.classical.len(),
            report::num(size.log2_dc),
            bound.name()
        );
    }
    let total: f64 = desc.shares.iter().map(|s| s.log2_dq).sum();
    println!("quantum communication Q = {} qubits", report::num(total));
    let spec = &desc.spec;
    let d_s = (desc.log2_ds).exp2();
    match spec.family {
        Family::Hqss => {
            let (k_q, n_q) = hqss_params(spec.k, spec.n)?;
            println!("inner threshold code ({k_q},{n_q}); Q formula {} qubits", report::num(cost_hqss(spec.k, spec.n, d_s)?));
        }
        Family::Hrqss => {
            let n_qr = spec.n_qr.unwrap_or(spec.n);
            println!("Q formula {} qubits", report::num(cost_hrqss(spec.k, spec.n, n_qr, d_s)?));
        }
        _ => {}
    }
    if matches!(spec.family, Family::Hqss | Family::Hrqss) {
        println!("minimum over ramp sweeps {} qubits", report::num(cost_min(spec.k, spec.n, d_s)?));
    }
    Ok(EXIT_PASS)
}

fn reconstruct(args: &ReconstructArgs) -> hrqss::Result<u8> {
    let file = ShareBundleFile::read(&args.input)?;
    let family = file.scheme.build()?;
    let dealt = file.to_dealt(family.as_ref())?;
    let mut sorted = args.subset.0.clone();
    sorted.sort_unstable();
    let label = report::subset(&sorted);
    let rho = match family.reconstruct(&dealt, &args.subset.0) {
        Ok(rho) => rho,
        Err(e @ (Error::InsufficientShares { .. } | Error::InsufficientQuantumShares { .. })) => {
            let kind = if matches!(e, Error::InsufficientShares { .. }) { "forbidden" } else { "insufficient quantum shares" };
            println!("subset {label}: {kind}: {e}");
            return Ok(exit_for(&e));
        }
        Err(e) => return Err(e),
    };
    let f = fidelity(&dealt.secret, &rho)?;
    let ok = f >= 1.0 - args.tolerance;
    println!("subset {label}: fidelity {f:.12} ({})", if ok { "recovered" } else { "below tolerance" });
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn verify(args: &VerifyArgs) -> hrqss::Result<u8> {
    if !(args.tolerance > 0.0 && args.tolerance < 1.0) {
        return Err(Error::param(format!("tolerance must lie in (0, 1), got {}", args.tolerance)));
    }
    let family = args.scheme.spec()?.build()?;
    let opts = VerifyOptions {
        tolerance: args.tolerance,
        route: match args.route {
            RouteArg::Factored => Route::Factored,
            RouteArg::Naive => Route::Naive,
        },
        seed: args.seed,
        ..VerifyOptions::default()
    };
    let r = verify_scheme(family.as_ref(), &opts)?;
    match args.report {
        ReportFormat::Text => print!("{}", report::text(&r)),
        ReportFormat::Structured => print!("{}", report::structured(&r)),
    }
    Ok(if r.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cost(args: &CostArgs) -> hrqss::Result<u8> {
    let rows = cost_table(args.k, args.n, args.d as f64)?;
    let rows = if args.sweep_nqr { rows } else { rows.into_iter().take(1).collect() };
    print!("{}", report::cost(args.k, args.n, args.d, &rows, cost_min(args.k, args.n, args.d as f64)?));
    Ok(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Deal(a) => deal(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Verify(a) => verify(a),
        Command::Cost(a) => cost(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
