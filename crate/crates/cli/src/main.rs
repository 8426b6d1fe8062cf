use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use powmon::arith::{QPoint2, Rat};
use powmon::atomicity::{accp_chain_explore, p_accp_chain_explore};
use powmon::mcd::{mcd, mcd_in_p};
use powmon::monoid::{AnyMonoid, Monoid, MonoidSpec};
use powmon::powmon::{divides_in_p, is_p_atom, p_factorize, sum_all, FinSet};
use powmon::verify::{emit_report, run_verify_suite, Format, VerifyOptions};
use powmon::{Budget, Element, Error, DEFAULT_BUDGET};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Exact computation in finitary power monoids.
#[derive(Parser, Debug)]
#[command(name = "powmon", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Monoid spec file.
    #[arg(long, global = true, env = "POWMON_SPEC", conflicts_with = "gens")]
    spec: Option<PathBuf>,
    /// Inline generators, e.g. "2, 3" or "(0,1), (1/5,10/3)".
    #[arg(long, global = true, allow_hyphen_values = true)]
    gens: Option<String>,
    /// Search-node allowance per query.
    #[arg(long, global = true, env = "POWMON_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Depth of a truncated family, overriding the spec.
    #[arg(long, global = true, env = "POWMON_DEPTH")]
    depth: Option<u32>,
    /// Sampling bound for verification suites.
    #[arg(long, global = true, env = "POWMON_BOUND")]
    bound: Option<Rat>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "POWMON_WORKERS")]
    workers: Option<usize>,
    /// text or json-lines.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Output path; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sumset of two or more set literals.
    Sumset {
        #[arg(required = true, num_args = 2..)]
        sets: Vec<String>,
    },
    /// Atoms of the monoid.
    Atoms,
    /// Whether an element lies in the monoid.
    Member { element: String },
    /// All factorizations of an element into atoms.
    Factorize { element: String },
    /// Divisibility of elements, or of set literals in the power monoid.
    Divides { divisor: String, target: String },
    /// Whether a set is an atom of the power monoid.
    PAtom { set: String },
    /// A factorization of a set into power-monoid atoms.
    PFactorize { set: String },
    /// Maximal common divisors: of the elements of one set, or of a family
    /// of sets in the power monoid.
    Mcd {
        #[arg(required = true)]
        sets: Vec<String>,
        /// Treat a single set as a one-member family in the power monoid.
        #[arg(long)]
        power: bool,
    },
    /// A descending divisor chain from an element or a set.
    Chain {
        start: String,
        #[arg(long, default_value_t = 64)]
        maxlen: usize,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, env = "POWMON_SEED", default_value_t = 0)]
        seed: u64,
        /// Include wall time in the report.
        #[arg(long)]
        timings: bool,
    },
}

/// Result of a query command: text lines, a JSON payload and an exit code.
struct Outcome {
    lines: Vec<String>,
    result: Value,
    code: u8,
}

impl Outcome {
    fn ok(lines: Vec<String>, result: Value) -> Self {
        Outcome {
            lines,
            result,
            code: 0,
        }
    }

    fn verdict(holds: bool, lines: Vec<String>, result: Value) -> Self {
        Outcome {
            lines,
            result,
            code: if holds { 0 } else { EXIT_FAIL },
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::Truncation { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("powmon: cannot start {n} workers: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("powmon: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("powmon: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn load_spec(g: &Global) -> Result<Option<MonoidSpec>, Failure> {
    let text = match (&g.spec, &g.gens) {
        (Some(path), _) => fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(gens)) => format!("gens {gens}"),
        (None, None) => return Ok(None),
    };
    let mut spec = MonoidSpec::parse(&text)?;
    if let (Some(depth), Some(fam)) = (g.depth, spec.family.as_mut()) {
        fam.depth = depth;
    }
    Ok(Some(spec))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    let spec = load_spec(g)?;
    if let Command::Verify {
        suite,
        seed,
        timings,
    } = &cli.command
    {
        let opts = VerifyOptions {
            spec,
            budget: g.budget,
            depth: g.depth,
            bound: g.bound.clone(),
            seed: *seed,
            timings: *timings,
        };
        let report = run_verify_suite(suite, &opts).map_err(|e| match e {
            Error::InvalidInput(m) => Failure::Usage(m),
            e => Failure::Lib(e),
        })?;
        emit_report(&report, &g.out, g.format)?;
        return Ok(report.exit_code() as u8);
    }
    let outcome = if let Command::Sumset { sets } = &cli.command {
        sumset_cmd(sets)?
    } else {
        let spec = spec.ok_or_else(|| {
            Failure::Usage("this command needs a monoid: pass --spec FILE or --gens LIST".into())
        })?;
        let mut budget = Budget::new(g.budget);
        match spec.build()? {
            AnyMonoid::Rank1(m) => query(&cli.command, &m, &mut budget)?,
            AnyMonoid::Rank2(m) => query(&cli.command, &m, &mut budget)?,
        }
    };
    write_outcome(&cli.command, &outcome, g)?;
    Ok(outcome.code)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Sumset { .. } => "sumset",
        Command::Atoms => "atoms",
        Command::Member { .. } => "member",
        Command::Factorize { .. } => "factorize",
        Command::Divides { .. } => "divides",
        Command::PAtom { .. } => "p-atom",
        Command::PFactorize { .. } => "p-factorize",
        Command::Mcd { .. } => "mcd",
        Command::Chain { .. } => "chain",
        Command::Verify { .. } => "verify",
    }
}

fn write_outcome(cmd: &Command, outcome: &Outcome, g: &Global) -> Result<(), Failure> {
    let mut text = String::new();
    match g.format {
        Format::Text => {
            for l in &outcome.lines {
                text.push_str(l);
                text.push('\n');
            }
        }
        Format::JsonLines => {
            let v = json!({ "command": command_name(cmd), "result": outcome.result });
            text.push_str(&v.to_string());
            text.push('\n');
        }
    }
    let io = |e: std::io::Error| Failure::Lib(Error::Io(format!("{}: {e}", g.out)));
    if g.out == "-" {
        std::io::stdout().write_all(text.as_bytes()).map_err(io)
    } else {
        fs::write(&g.out, text).map_err(io)
    }
}

fn strings<T: Display>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn is_set_literal(s: &str) -> bool {
    s.trim_start().starts_with('{')
}

fn sumset_cmd(args: &[String]) -> Result<Outcome, Failure> {
    fn total<E: Element>(args: &[String]) -> Result<FinSet<E>, Error> {
        let sets = args
            .iter()
            .map(|a| a.parse::<FinSet<E>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(sum_all(&sets))
    }
    let planar = args.iter().any(|a| a.contains('('));
    let s = if planar {
        total::<QPoint2>(args)?.to_string()
    } else {
        total::<Rat>(args)?.to_string()
    };
    Ok(Outcome::ok(vec![s.clone()], json!(s)))
}

fn query<M: Monoid>(cmd: &Command, m: &M, budget: &mut Budget) -> Result<Outcome, Failure> {
    let elem = |s: &str| s.parse::<M::Elem>();
    let set = |s: &str| s.parse::<FinSet<M::Elem>>();
    Ok(match cmd {
        Command::Atoms => {
            let atoms = strings(m.atoms());
            let mut lines = atoms.clone();
            if m.is_truncated() {
                lines.push("(truncation: atoms of the listed generators only)".into());
            }
            Outcome::ok(
                lines,
                json!({ "atoms": atoms, "truncated": m.is_truncated() }),
            )
        }
        Command::Member { element } => {
            let b = elem(element)?;
            let yes = m.member(&b, budget)?;
            let word = if yes { "member" } else { "not a member" };
            Outcome::verdict(
                yes,
                vec![format!("{b}: {word}")],
                json!({ "element": b.to_string(), "member": yes }),
            )
        }
        Command::Factorize { element } => {
            let b = elem(element)?;
            let zs = m.factorizations(&b, budget)?;
            if zs.is_empty() {
                return Err(Error::InvalidInput(format!("{b} is not in the monoid")).into());
            }
            let fs = strings(&zs);
            let lens: Vec<u64> = zs.iter().map(|z| z.length()).collect();
            let mut lines: Vec<String> = zs
                .iter()
                .map(|z| format!("{b} = {z}  (length {})", z.length()))
                .collect();
            lines.push(format!("{} factorizations", zs.len()));
            Outcome::ok(
                lines,
                json!({ "element": b.to_string(), "factorizations": fs, "lengths": lens }),
            )
        }
        Command::Divides { divisor, target } => {
            if is_set_literal(divisor) || is_set_literal(target) {
                let (s, t) = (set(divisor)?, set(target)?);
                let w = divides_in_p(&s, &t, m, budget)?;
                let line = match &w {
                    Some(d) => format!("{s} divides {t}: {s} + {d} = {t}"),
                    None => format!("{s} does not divide {t}"),
                };
                let wit = w.as_ref().map(ToString::to_string);
                Outcome::verdict(
                    w.is_some(),
                    vec![line],
                    json!({ "divides": w.is_some(), "witness": wit }),
                )
            } else {
                let (d, b) = (elem(divisor)?, elem(target)?);
                let yes = m.divides(&d, &b, budget)?;
                let line = if yes {
                    format!("{d} divides {b}: {b} - {d} = {} is a member", b.sub(&d))
                } else {
                    format!("{d} does not divide {b}")
                };
                Outcome::verdict(yes, vec![line], json!({ "divides": yes }))
            }
        }
        Command::PAtom { set: s } => {
            let s = set(s)?;
            let v = is_p_atom(&s, m, budget)?;
            let line = match &v.witness {
                None => format!("{s} is an atom"),
                Some(d) => format!("{s} is not an atom: {d}"),
            };
            let wit = v.witness.as_ref().map(ToString::to_string);
            Outcome::verdict(
                v.is_atom,
                vec![line],
                json!({ "atom": v.is_atom, "witness": wit }),
            )
        }
        Command::PFactorize { set: s } => {
            let s = set(s)?;
            let parts = p_factorize(&s, m, budget)?;
            let ps = strings(&parts);
            let line = if ps.is_empty() {
                format!("{s} = (empty sum)")
            } else {
                format!("{s} = {}", ps.join(" + "))
            };
            Outcome::ok(vec![line], json!({ "set": s.to_string(), "parts": ps }))
        }
        Command::Mcd { sets, power } => {
            if sets.len() == 1 && !power {
                let s = set(&sets[0])?;
                let ds = strings(mcd(&s, m, budget)?);
                let mut lines = vec![format!("mcd {s}: {}", ds.join(", "))];
                if m.is_truncated() {
                    lines.push("(within the truncation)".into());
                }
                Outcome::ok(lines, json!({ "mcd": ds, "truncated": m.is_truncated() }))
            } else {
                let family = sets.iter().map(|s| set(s)).collect::<Result<Vec<_>, _>>()?;
                let ds = strings(mcd_in_p(&family, m, budget)?);
                let lines = vec![format!(
                    "mcd {}: {}",
                    strings(&family).join(" "),
                    ds.join(", ")
                )];
                Outcome::ok(lines, json!({ "mcd": ds, "truncated": m.is_truncated() }))
            }
        }
        Command::Chain { start, maxlen } => {
            let (line, links, stabilized) = if is_set_literal(start) {
                let c = p_accp_chain_explore(&set(start)?, m, *maxlen, budget)?;
                (c.to_string(), strings(&c.chain), c.stabilized)
            } else {
                let c = accp_chain_explore(&elem(start)?, m, *maxlen, budget)?;
                (c.to_string(), strings(&c.chain), c.stabilized)
            };
            let lines = vec![line, format!("length {}", links.len() - 1)];
            Outcome::ok(lines, json!({ "chain": links, "stabilized": stabilized }))
        }
        Command::Sumset { .. } | Command::Verify { .. } => unreachable!("handled before dispatch"),
    })
}
