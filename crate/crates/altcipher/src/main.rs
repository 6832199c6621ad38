use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use altcipher::experiments::{run_amplifier, run_collapse, run_expand, run_general_collapse, ExperimentResult, Setup};
use altcipher::report;
use altcipher::runner::{effective_q, run_comparison, run_scenario};
use altcipher::scenario::{parse_scenario, Comparison, DistSpec, Scenario};
use altcipher::spec::{parse_perm, parse_rational, parse_vector, GroupSpec};
use altcipher_core::majorization::{compare, hlp_witness, Relation};
use altcipher_core::metrics::all_metrics;
use altcipher_core::{product, ExactDist, Permutation, Rational};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "altcipher", version, about = "Exact security comparisons of ciphers over finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CosetArgs {
    /// Ambient group, e.g. sym(3). Defaults to the symmetric group of pi's degree.
    #[arg(long)]
    group: Option<GroupSpec>,
    /// Subgroup H, e.g. gen([[1,0,2]]).
    #[arg(long)]
    subgroup: GroupSpec,
    /// Permutation pi as an image array, e.g. [0,2,1].
    #[arg(long, value_parser = parse_perm)]
    pi: Permutation,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Highest data complexity q to compare at.
    #[arg(long)]
    q_max: Option<usize>,
    /// Show one row per plaintext tuple.
    #[arg(long)]
    per_tuple: bool,
    /// Write the check table as CSV ("-" for stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every comparison and experiment in a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// X, Z uniform on H and Y fixed at pi: XYZ against XZ.
    Expand(CosetArgs),
    /// X, Z uniform on pi H and Y fixed at pi^-1: XZ against XYZ.
    Collapse(CosetArgs),
    /// The collapse iterated over several rounds.
    GeneralCollapse {
        #[command(flatten)]
        args: CosetArgs,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Uniform on Sym(2^n) inside Sym(2^n+1), with pi = +1 mod 2^n+1.
    Amplifier {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the law of a product of ciphers; the last factor acts first.
    Convolve {
        /// Ambient group for inline constructors.
        #[arg(long, required_unless_present = "scenario")]
        group: Option<GroupSpec>,
        /// Resolve factors as names defined in this scenario.
        #[arg(long, conflicts_with = "group")]
        scenario: Option<PathBuf>,
        /// Cipher names, or JSON constructors such as '{"uniform_on": "sym(3)"}' or '[0,2,1]'.
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// Decide majorization between two vectors.
    ///
    /// Exit status: 0 equal up to permutation, 3 x strictly below y,
    /// 4 x strictly above y, 5 incomparable, 6 different totals, 2 usage error.
    Majorize {
        x: PathBuf,
        y: PathBuf,
        /// Print a doubly stochastic matrix and its Birkhoff terms.
        #[arg(long)]
        witness: bool,
    },
    /// Entropy, guesswork and distance to uniform of a distribution.
    Metrics {
        dist: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        alpha: Option<Rational>,
        #[arg(long)]
        renyi: Option<f64>,
    },
    /// Compare the scenario's pairs at data complexity 0..=Q.
    Compare {
        scenario: PathBuf,
        #[arg(long)]
        q_max: usize,
        #[arg(long)]
        per_tuple: bool,
        /// Compare LEFT,RIGHT instead of the scenario's list.
        #[arg(long)]
        pair: Option<String>,
        /// Write q,tuple,metric,value_left,value_right,verdict rows ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    parse_scenario(&read_input(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(text: String, csv: Option<(&Path, String)>) -> Result<(), Failure> {
    match csv {
        Some((p, body)) if p == Path::new("-") => print!("{body}"),
        Some((p, body)) => {
            fs::write(p, body).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            print!("{text}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(results: &[ExperimentResult], output: &OutputArgs) -> Outcome {
    let csv = output.csv.as_deref().map(|p| (p, report::to_csv(results)));
    emit(report::to_text(results, output.per_tuple), csv)?;
    Ok(if results.iter().all(ExperimentResult::passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn setup(args: &CosetArgs) -> Result<Setup, Failure> {
    let group = args.group.clone().unwrap_or(GroupSpec::Sym(args.pi.degree()));
    Ok(Setup::from_specs(&group, &args.subgroup, &args.pi)?)
}

fn majorize_exit(r: Relation) -> u8 {
    match r {
        Relation::EqualUpToPermutation => 0,
        Relation::StrictlyBelow | Relation::Below => 3,
        Relation::StrictlyAbove | Relation::Above => 4,
        Relation::Incomparable => 5,
        Relation::NormMismatch => 6,
    }
}

fn print_witness(lower: &[Rational], upper: &[Rational], label: &str) -> Result<(), Failure> {
    let n = lower.len().max(upper.len());
    let pad = |v: &[Rational]| {
        let mut v = v.to_vec();
        v.resize(n, Rational::from_integer(0.into()));
        v
    };
    let w = hlp_witness(&pad(lower), &pad(upper))?;
    println!("matrix\t{label}");
    for row in &w.matrix {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("{}", cells.join(" "));
    }
    println!("birkhoff\t{} terms", w.decomposition.len());
    for (weight, p) in &w.decomposition {
        println!("{weight}\t{p}");
    }
    Ok(())
}

fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Run { scenario, output } => {
            let s = load_scenario(&scenario)?;
            let results = run_scenario(&s, output.q_max)?;
            finish(&results, &output)
        }
        Command::Expand(args) => finish(&[run_expand(&setup(&args)?, args.output.q_max)?], &args.output),
        Command::Collapse(args) => finish(&[run_collapse(&setup(&args)?, args.output.q_max)?], &args.output),
        Command::GeneralCollapse { args, rounds } => finish(&[run_general_collapse(&setup(&args)?, rounds)?], &args.output),
        Command::Amplifier { n, output } => finish(&[run_amplifier(n)?], &output),
        Command::Convolve { group, scenario, factors } => {
            let dists: Vec<ExactDist> = match (scenario, group) {
                (Some(path), _) => {
                    let s = load_scenario(&path)?;
                    factors
                        .iter()
                        .map(|n| s.distribution(n).cloned().ok_or_else(|| Failure(format!("undefined cipher {n:?}"))))
                        .collect::<Result<_, _>>()?
                }
                (None, Some(spec)) => {
                    let g = spec.build()?;
                    factors
                        .iter()
                        .map(|f| Ok(DistSpec::parse(f)?.build(&g)?))
                        .collect::<Result<_, Failure>>()?
                }
                (None, None) => return Err(Failure("convolve needs --group or --scenario".into())),
            };
            let refs: Vec<&ExactDist> = dists.iter().collect();
            let law = product(&refs)?;
            for i in law.support() {
                println!("{}\t{}", law.group().element(i), law.mass(i));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Majorize { x, y, witness } => {
            let (xv, yv) = (parse_vector(&read_input(&x)?)?, parse_vector(&read_input(&y)?)?);
            let verdict = compare(&xv, &yv);
            println!("verdict\t{}", verdict.relation.name());
            if let Some((over, under)) = verdict.witness_prefix {
                println!("prefix_x_above\t{over}");
                println!("prefix_x_below\t{under}");
            }
            if witness {
                if verdict.relation.is_below() {
                    print_witness(&xv, &yv, "D y = x")?;
                } else if verdict.relation.is_above() {
                    print_witness(&yv, &xv, "D x = y")?;
                } else {
                    eprintln!("no witness: the vectors are not comparable");
                }
            }
            Ok(ExitCode::from(majorize_exit(verdict.relation)))
        }
        Command::Metrics { dist, alpha, renyi } => {
            let x = parse_vector(&read_input(&dist)?)?;
            for m in all_metrics(&x, alpha.as_ref(), renyi)? {
                println!("{}\t{}", m.kind, m.value);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { scenario, q_max, per_tuple, pair, csv } => {
            let s = load_scenario(&scenario)?;
            if q_max > s.message_count {
                return Err(Failure(format!("--q-max {q_max} exceeds message_count {}", s.message_count)));
            }
            let pairs = match pair {
                Some(p) => {
                    let (l, r) = p.split_once(',').ok_or_else(|| Failure("--pair expects LEFT,RIGHT".into()))?;
                    for n in [l, r] {
                        if s.distribution(n).is_none() {
                            return Err(Failure(format!("undefined cipher {n:?}")));
                        }
                    }
                    vec![Comparison { left: l.into(), right: r.into(), expect: None }]
                }
                None => s.comparisons.clone(),
            };
            if pairs.is_empty() {
                return Err(Failure("the scenario defines no comparisons; use --pair LEFT,RIGHT".into()));
            }
            if csv.is_some() && pairs.len() > 1 {
                return Err(Failure("--csv needs a single comparison; select one with --pair".into()));
            }
            let q = effective_q(&s, Some(q_max));
            let results = pairs.iter().map(|c| run_comparison(&s, c, q)).collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            for (c, r) in pairs.iter().zip(&results) {
                text.push_str(&r.comparison.as_ref().expect("comparison").to_text(per_tuple));
                if let Some(e) = c.expect {
                    let verdict = if r.passed() { "pass" } else { "fail" };
                    text.push_str(&format!("expected {} no less secure: {verdict}\n", e.name()));
                }
            }
            let body = csv.as_deref().map(|p| (p, report::comparison_csv(results[0].comparison.as_ref().expect("comparison"), per_tuple)));
            emit(text, body)?;
            Ok(if results.iter().all(ExperimentResult::passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
