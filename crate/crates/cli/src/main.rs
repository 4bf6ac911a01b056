use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nashenc::encoders::{encode, parse_witness, write_witness, EncodingWitness, Method};
use nashenc::game::{deserialize_game, serialize_game, Game};
use nashenc::polysys::{capacity_3p, capacity_np, degree_profile, formats_1d, parse_system, PolySystem};
use nashenc::rational::{parse_number, to_f64, Rational};
use nashenc::verify::{
    check_points, cluster_points, grid_completeness, local_degree, parse_points, roots_in_unit_interval,
};
use nashenc::Error;

#[derive(Parser)]
#[command(
    name = "nashenc",
    version,
    about = "Encode polynomial systems as normal-form games and check the result"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree table and the size of each encoding.
    Info { system: PathBuf },
    /// Build a game and its witness.
    Encode(EncodeArgs),
    /// Check a game at points of the variety.
    Verify(VerifyArgs),
    /// Real roots in (0,1) of a univariate system.
    Roots {
        system: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding number of a planar map around a circle.
    Degree(DegreeArgs),
}

#[derive(Args)]
struct EncodeArgs {
    system: PathBuf,
    /// 3p, np or 1d.
    #[arg(long, default_value = "3p")]
    method: String,
    /// Move the variety into the box before encoding.
    #[arg(long)]
    normalize: bool,
    /// Let auxiliary players carry the equations when there are more
    /// equations than unknowns (np only).
    #[arg(long)]
    reduce_players: bool,
    /// Game file; the witness goes to `<out>.witness`.
    #[arg(long)]
    out: PathBuf,
    /// Points that must replay to totally mixed profiles.
    #[arg(long)]
    check_points: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    game: PathBuf,
    witness: PathBuf,
    /// Points file, one point per line.
    points: Option<PathBuf>,
    /// Residual tolerance, rational or decimal.
    #[arg(long, default_value = "0")]
    tol: String,
    /// Also scan the first coordinate on this many interior grid points.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DegreeArgs {
    system: PathBuf,
    /// Circle center as `x,y`.
    #[arg(long, default_value = "0,0")]
    center: String,
    #[arg(long, default_value = "1/2")]
    radius: String,
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

enum Failure {
    /// Bad input: unreadable file, parse error, bad flag value.
    Input(String),
    /// Well-formed input that did not check out.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::ZeroEquation { .. }
            | Error::DimensionMismatch { .. } => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn in_file<T>(path: &Path, r: nashenc::Result<T>) -> CliResult<T> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_system(path: &Path) -> CliResult<PolySystem> {
    let sys = in_file(path, parse_system(&read(path)?))?;
    if let Some(j) = sys.polys().iter().position(|p| p.total_degree() == 0) {
        return Err(Error::ConstantEquation { index: j + 1 }.into());
    }
    Ok(sys)
}

fn load_game(path: &Path) -> CliResult<Game> {
    in_file(path, deserialize_game(&read(path)?))
}

fn load_witness(path: &Path) -> CliResult<EncodingWitness> {
    in_file(path, parse_witness(&read(path)?))
}

fn parse_tol(text: &str) -> CliResult<Rational> {
    match parse_number(text) {
        Some(t) if t >= Rational::from_integer(0.into()) => Ok(t),
        _ => Err(Failure::Input(format!(
            "tolerance must be a non-negative number, got `{text}`"
        ))),
    }
}

fn fmt_tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_info(path: &Path) -> CliResult<()> {
    let sys = load_system(path)?;
    let profile = degree_profile(&sys);
    let c3 = capacity_3p(&profile);
    let cn = capacity_np(&profile);
    println!("n={} m={}", sys.n(), sys.m());
    for (j, row) in profile.per_equation.iter().enumerate() {
        let degs: Vec<String> = row.iter().map(u32::to_string).collect();
        println!("eq{}: {}", j + 1, degs.join(" "));
    }
    let one_d = if sys.n() == 1 && sys.m() == 1 {
        fmt_tuple(&formats_1d(profile.max as usize))
    } else {
        "n/a".into()
    };
    println!(
        "D={} D'={} 3p:{} np:{} players 1d:{}",
        c3.d,
        cn.d_prime,
        fmt_tuple(&c3.formats),
        cn.players,
        one_d
    );
    Ok(())
}

fn cmd_encode(args: &EncodeArgs) -> CliResult<()> {
    let method: Method = args.method.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
    let sys = load_system(&args.system)?;
    let (game, witness) = encode(&sys, method, args.normalize, args.reduce_players)?;
    if let Some(p) = &args.check_points {
        let points = in_file(p, parse_points(&read(p)?))?;
        for x in &points {
            let replay = match &witness.normalization {
                Some(_) => witness
                    .replay_f64(&x.iter().map(to_f64).collect::<Vec<_>>())
                    .map(|_| ()),
                None => witness.replay(x).map(|_| ()),
            };
            replay?;
        }
    }
    write(&args.out, &serialize_game(&game))?;
    let mut wpath = args.out.clone().into_os_string();
    wpath.push(".witness");
    write(Path::new(&wpath), &write_witness(&witness))?;
    let formats: Vec<usize> = game.strategy_counts().to_vec();
    println!("{} players, formats {}", formats.len(), fmt_tuple(&formats));
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<bool> {
    let tol = parse_tol(&args.tol)?;
    let game = load_game(&args.game)?;
    let witness = load_witness(&args.witness)?;
    if game.strategy_counts() != witness.formats.as_slice() {
        return Err(Failure::Input(format!(
            "game formats {} do not match witness formats {}",
            fmt_tuple(game.strategy_counts()),
            fmt_tuple(&witness.formats)
        )));
    }
    let points = match &args.points {
        Some(p) => in_file(p, parse_points(&read(p)?))?,
        None => Vec::new(),
    };
    let report = check_points(&game, &witness, &points, &tol)?;
    let mut text = report.to_text();
    if let Some(g) = args.grid {
        if g < 2 {
            return Err(Failure::Input("grid resolution must be at least 2".into()));
        }
        let base = vec![0.5; witness.dim()];
        let hits = grid_completeness(&game, &witness, 0, &base, g, to_f64(&tol))?;
        let clusters = cluster_points(&hits, 2.0 / (g as f64 + 1.0));
        text.push_str(&format!("grid {g}: {} cluster(s)\n", clusters.len()));
        for c in &clusters {
            text.push_str(&format!("  {:.16e}\n", c[c.len() / 2]));
        }
    }
    emit(args.out.as_deref(), &text)?;
    Ok(report.all_pass())
}

fn cmd_roots(path: &Path, out: Option<&Path>) -> CliResult<()> {
    let sys = load_system(path)?;
    let coeffs = sys.univariate_coeffs()?;
    let roots = roots_in_unit_interval(&coeffs)?;
    emit(out, &roots.to_text())
}

fn parse_f64(text: &str, what: &str) -> CliResult<f64> {
    parse_number(text.trim())
        .map(|r| to_f64(&r))
        .ok_or_else(|| Failure::Input(format!("bad {what} `{text}`")))
}

fn cmd_degree(args: &DegreeArgs) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    if sys.n() != 2 || sys.m() != 2 {
        return Err(Failure::Input(format!(
            "degree needs two equations in two unknowns, got {} in {}",
            sys.m(),
            sys.n()
        )));
    }
    let (cx, cy) = args
        .center
        .split_once(',')
        .ok_or_else(|| Failure::Input(format!("center must be `x,y`, got `{}`", args.center)))?;
    let center = [parse_f64(cx, "center")?, parse_f64(cy, "center")?];
    let radius = parse_f64(&args.radius, "radius")?;
    let p = sys.polys();
    println!("{}", local_degree((&p[0], &p[1]), center, radius, args.samples)?);
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Info { system } => cmd_info(system).map(|_| true),
        Command::Encode(args) => cmd_encode(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Roots { system, out } => cmd_roots(system, out.as_deref()).map(|_| true),
        Command::Degree(args) => cmd_degree(args).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
