//! `curveta`: generators of complete ideals from clusters of infinitely near
//! points, with integral closures, multiplier ideals and valuation filtrations.
//!
//! Exit status is 0 on success, 1 on a domain error and 2 on a usage or
//! parse error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use curveta_core::applications::{self, FiltrationStep, JumpingTable};
use curveta_core::cluster::parse_rational;
use curveta_core::generators::{zariski_factor, GeneratorEngine};
use curveta_core::io::{
    self, filtration_rows, ideal_out, ContactsOut, DivisorOut, FactorOut, GensOut, JumpRow, MonomialOut,
    MultsOut, TreeOut, VerifyOut,
};
use curveta_core::oracle::{self, parse::parse_poly};
use curveta_core::{Cluster, Divisor, Error, GeneratorTree, MaximalContactSet, Monomial, MonomialIdeal};

#[derive(Parser, Debug)]
#[command(name = "curveta", version, about = "Monomial generators of complete ideals from clusters")]
struct Cli {
    /// Output format; `dot` applies only to `gens`/`closure` with `--tree`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,
    /// Worker threads for the library's internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct Pair {
    cluster: PathBuf,
    divisor: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Antinef closure of a divisor, in all three bases.
    Unload(Pair),
    /// Zariski factorization of the antinef closure.
    Factor(Pair),
    /// Maximal contact elements with their equisingularity data.
    Contacts {
        cluster: PathBuf,
        #[arg(long)]
        explicit: bool,
    },
    /// Generators of `H_D`.
    Gens {
        #[command(flatten)]
        input: Pair,
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        tree: bool,
    },
    /// Integral closure of an ideal given by its pullback divisor.
    Closure {
        #[command(flatten)]
        input: Pair,
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        tree: bool,
    },
    /// Multiplier ideal at one exponent.
    Mult {
        #[command(flatten)]
        input: Pair,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        explicit: bool,
    },
    /// Jumping numbers below `--max` with their multiplier ideals.
    Jumps {
        #[command(flatten)]
        input: Pair,
        #[arg(long, default_value = "1")]
        max: String,
        #[arg(long)]
        explicit: bool,
    },
    /// Valuation filtration of one divisorial valuation.
    Filtration {
        cluster: PathBuf,
        #[arg(long)]
        point: usize,
        #[arg(long)]
        upto: i64,
        #[arg(long)]
        explicit: bool,
    },
    /// Oracle membership of a polynomial in `H_D`.
    Verify {
        #[command(flatten)]
        input: Pair,
        #[arg(long)]
        poly: String,
    },
    /// Oracle multiplicities and values of a polynomial.
    Mults {
        cluster: PathBuf,
        #[arg(long)]
        poly: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Failure::Usage(format!("parse error: {msg}")),
            other => Failure::Domain(other),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_cluster(path: &Path) -> Run<Cluster> {
    Ok(io::parse_cluster(&read(path)?)?)
}

fn load_pair(p: &Pair) -> Run<(Cluster, Divisor)> {
    let c = load_cluster(&p.cluster)?;
    let d = io::parse_divisor(&read(&p.divisor)?, &c)?;
    Ok((c, d))
}

fn contacts(c: &Cluster, explicit: bool) -> Run<MaximalContactSet> {
    Ok(if explicit {
        MaximalContactSet::explicit(c)?
    } else {
        MaximalContactSet::new(c)?
    })
}

fn rational(s: &str, flag: &str) -> Run<num::BigRational> {
    parse_rational(s).map_err(|_| Failure::Usage(format!("--{flag}: cannot parse {s:?} as a rational")))
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn require_text_or_json(format: Format) -> Run<()> {
    if format == Format::Dot {
        return Err(Failure::Usage("--output dot needs `gens` or `closure` with --tree".into()));
    }
    Ok(())
}

fn monomial_lines(out: &mut String, gens: &[MonomialOut]) {
    for g in gens {
        let _ = write!(out, "  {:<16} v = {}", g.monomial, vector(&g.values));
        if let Some(p) = &g.poly {
            let _ = write!(out, "  = {p}");
        }
        out.push('\n');
    }
}

fn generators_text(ideal: &MonomialIdeal) -> String {
    let names: Vec<String> = ideal.generators().iter().map(Monomial::to_string).collect();
    format!("({})", names.join(", "))
}

fn dot_label(s: &MaximalContactSet) -> impl Fn(usize, u32) -> String + '_ {
    move |dead_end, power| {
        let Some(e) = s.dead_end(dead_end) else {
            return format!("p{dead_end}^{power}");
        };
        match Monomial::var(s, e.var).map(|m| m.pow(power)) {
            Ok(m) if s.has_polynomials() => m.specialize_factored(s).unwrap_or_else(|_| m.to_string()),
            Ok(m) => m.to_string(),
            Err(_) => format!("{}^{power}", e.var),
        }
    }
}

fn gens(input: &Pair, explicit: bool, tree: bool, closure: bool, format: Format) -> Run<String> {
    if format == Format::Dot && !tree {
        return Err(Failure::Usage("--output dot needs --tree".into()));
    }
    let (c, d) = load_pair(input)?;
    let s = contacts(&c, explicit)?;
    let d = d.unload(&c)?;
    let ideal = if closure {
        applications::integral_closure(&c, &d, &s)?
    } else {
        GeneratorEngine::new(&c, &s).ideal(&d)?
    };
    let t: Option<GeneratorTree> = if tree {
        Some(GeneratorEngine::new(&c, &s).tree(&d)?)
    } else {
        None
    };
    let poly_source = explicit.then_some(&s);
    let out = GensOut {
        divisor: (&d).into(),
        augmented: s.is_augmented(),
        generators: ideal_out(&ideal, poly_source)?,
        tree: t.as_ref().map(TreeOut::from),
    };
    Ok(match format {
        Format::Json => io::to_json(&out),
        Format::Dot => t.expect("checked above").to_dot(&dot_label(&s)),
        Format::Text => {
            let mut text = format!("D = {}\n", vector(d.values()));
            if out.augmented {
                text.push_str("auxiliary smooth elements g0, g1 added\n");
            }
            let _ = writeln!(text, "{} generators:", out.generators.len());
            monomial_lines(&mut text, &out.generators);
            if let Some(t) = &t {
                let _ = writeln!(text, "tree: {} nodes, {} edges", t.nodes.len(), t.edges.len());
            }
            text
        }
    })
}

fn jumps_text(table: &JumpingTable) -> String {
    let mut text = String::from("lambda\tdivisor\tideal\n");
    for e in &table.entries {
        let _ = writeln!(text, "{}\t{}\t{}", e.lambda, vector(e.divisor.values()), generators_text(&e.ideal));
    }
    text
}

fn filtration_text(steps: &[FiltrationStep]) -> Run<String> {
    let mut text = String::from("i\tdivisor\tideal\n");
    for row in filtration_rows(steps, None)? {
        let range = if row.first == row.last {
            row.first.to_string()
        } else {
            format!("{}-{}", row.first, row.last)
        };
        let names: Vec<&str> = row.generators.iter().map(|g| g.monomial.as_str()).collect();
        let _ = writeln!(text, "{range}\t{}\t({})", vector(&row.divisor), names.join(", "));
    }
    Ok(text)
}

fn run(cli: &Cli) -> Run<String> {
    let format = cli.output;
    match &cli.command {
        Command::Unload(p) => {
            require_text_or_json(format)?;
            let (c, d) = load_pair(p)?;
            let u = d.unload(&c)?;
            let out = DivisorOut::from(&u);
            Ok(match format {
                Format::Json => io::to_json(&out),
                _ => format!(
                    "values   {}\nmults    {}\nexcesses {}\n",
                    vector(&out.values),
                    vector(&out.mults),
                    vector(&out.excesses)
                ),
            })
        }
        Command::Factor(p) => {
            require_text_or_json(format)?;
            let (c, d) = load_pair(p)?;
            let u = d.unload(&c)?;
            let out = FactorOut {
                divisor: (&u).into(),
                factors: zariski_factor(&u)?,
            };
            Ok(match format {
                Format::Json => io::to_json(&out),
                _ => {
                    let parts: Vec<String> = out.factors.iter().map(|(p, k)| format!("B_{p}^{k}")).collect();
                    let product = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
                    format!("D = {}\nD = {product}\n", vector(&out.divisor.values))
                }
            })
        }
        Command::Contacts { cluster, explicit } => {
            require_text_or_json(format)?;
            let c = load_cluster(cluster)?;
            let s = contacts(&c, *explicit)?;
            let out = ContactsOut::new(&s, *explicit);
            Ok(match format {
                Format::Json => io::to_json(&out),
                _ => {
                    let mut text = format!("smooth pair {}, {}\n", out.smooth_pair.0, out.smooth_pair.1);
                    for e in &out.elements {
                        let _ = writeln!(
                            text,
                            "{}: multiplicities {}, n = {}, characteristic exponents {}, semigroup {}",
                            e.var,
                            vector(&e.sequence),
                            e.n,
                            vector(&e.char_exponents),
                            vector(&e.semigroup)
                        );
                        if let Some(p) = &e.poly {
                            let _ = writeln!(text, "  {} = {p}", e.var);
                        }
                    }
                    text
                }
            })
        }
        Command::Gens { input, explicit, tree } => gens(input, *explicit, *tree, false, format),
        Command::Closure { input, explicit, tree } => gens(input, *explicit, *tree, true, format),
        Command::Mult { input, lambda, explicit } => {
            require_text_or_json(format)?;
            let lambda = rational(lambda, "lambda")?;
            let (c, f) = load_pair(input)?;
            let s = contacts(&c, *explicit)?;
            let (d, ideal) = applications::multiplier_ideal(&c, &f, &lambda, &s)?;
            let entry = applications::JumpingEntry { lambda, divisor: d, ideal };
            let row = JumpRow::new(&entry, explicit.then_some(&s))?;
            Ok(match format {
                Format::Json => io::to_json(&row),
                _ => {
                    let mut text = format!("lambda = {}\nD = {}\n", row.lambda, vector(&row.divisor));
                    monomial_lines(&mut text, &row.generators);
                    text
                }
            })
        }
        Command::Jumps { input, max, explicit } => {
            require_text_or_json(format)?;
            let max = rational(max, "max")?;
            let (c, f) = load_pair(input)?;
            let s = contacts(&c, *explicit)?;
            let table = applications::jumping_numbers(&c, &f, &max, &s)?;
            Ok(match format {
                Format::Json => {
                    let rows = table
                        .entries
                        .iter()
                        .map(|e| JumpRow::new(e, explicit.then_some(&s)))
                        .collect::<curveta_core::Result<Vec<_>>>()?;
                    io::to_json(&rows)
                }
                _ => jumps_text(&table),
            })
        }
        Command::Filtration { cluster, point, upto, explicit } => {
            require_text_or_json(format)?;
            let c = load_cluster(cluster)?;
            let s = contacts(&c, *explicit)?;
            let steps = applications::valuation_filtration(&c, *point, *upto, &s)?;
            Ok(match format {
                Format::Json => io::to_json(&filtration_rows(&steps, explicit.then_some(&s))?),
                _ => filtration_text(&steps)?,
            })
        }
        Command::Verify { input, poly } => {
            require_text_or_json(format)?;
            let (c, d) = load_pair(input)?;
            let f = parse_poly(poly)?;
            let d = d.unload(&c)?;
            let member = oracle::member_poly(&f, &d, &c)?;
            let values = if f.is_zero() { vec![] } else { oracle::values(&f, &c)? };
            let out = VerifyOut {
                poly: f.to_string(),
                values,
                divisor: d.values().to_vec(),
                member,
            };
            Ok(match format {
                Format::Json => io::to_json(&out),
                _ => format!(
                    "f = {}\nv(f) = {}\nD    = {}\nmember: {}\n",
                    out.poly,
                    vector(&out.values),
                    vector(&out.divisor),
                    if member { "yes" } else { "no" }
                ),
            })
        }
        Command::Mults { cluster, poly } => {
            require_text_or_json(format)?;
            let c = load_cluster(cluster)?;
            let f = parse_poly(poly)?;
            let out = MultsOut {
                poly: f.to_string(),
                mults: oracle::multiplicities(&f, &c)?,
                values: oracle::values(&f, &c)?,
            };
            Ok(match format {
                Format::Json => io::to_json(&out),
                _ => format!(
                    "f = {}\ne(f) = {}\nv(f) = {}\n",
                    out.poly,
                    vector(&out.mults),
                    vector(&out.values)
                ),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: could not configure {n} threads");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: curveta <COMMAND> [ARGS] (see --help)");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
