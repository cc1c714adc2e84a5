use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use macp::chart::sample_cell;
use macp::complex::{order_complex, SimplicialComplex};
use macp::error::Error;
use macp::flags::{enumerate_macp12, flag_lower_interval, iota_embed, iota_relative, nu, sample_flag_cell, FlagOM};
use macp::homology::report;
use macp::macp::{enumerate_macp2, lower_interval, Comparator};
use macp::om::{mu, Rank2OM};
use macp::poset::Poset;
use macp::rational::{format_q, parse_q, q, Matrix, Q};
use macp::verify::{run_suite, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "macp", version, about = "Rank-2 oriented matroids and the MacPhersonian posets")]
struct Cli {
    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Write MacP(2,n), or MacP(1,2,n) with --flags, as a poset file.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        flags: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a property suite and print a JSON report.
    Verify {
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = macp::rao::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The oriented matroid of a 2 x n matrix.
    Om {
        /// JSON array of rows; entries are integers or "p/q" strings.
        #[arg(long, conflicts_with = "file")]
        matrix: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// The flag of a 1 x n row inside the row space of a 2 x n matrix.
    Flag {
        #[arg(long)]
        y: String,
        #[arg(long)]
        x: String,
    },
    /// Deterministic points of the cell of an oriented matroid or flag.
    Sample {
        #[arg(long, conflicts_with_all = ["flag", "file"])]
        om: Option<String>,
        #[arg(long, conflicts_with = "file")]
        flag: Option<String>,
        /// File holding an oriented matroid or flag string.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// GF(2) homology of the proper part of a lower interval, or of a complex file.
    Homology {
        #[arg(long, conflicts_with_all = ["flag", "complex"])]
        om: Option<String>,
        #[arg(long, conflicts_with = "complex")]
        flag: Option<String>,
        /// JSON list of maximal faces as vertex-index arrays.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// The embedding of a flag into MacP(2, n+1).
    Embed {
        #[arg(long)]
        flag: String,
        /// Normalize relative to this flag below `flag` instead of by argument.
        #[arg(long)]
        base: Option<String>,
    },
}

/// Exit codes: 0 pass, 1 property failure, 2 resource limit, 3 parse error, 4 mathematical error.
enum Failure {
    Property(String),
    Err(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Err(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::LimitExceeded { .. } | Error::BudgetExceeded(_) => 2,
        _ => 4,
    }
}

fn parse_err(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn parse_entry(v: &Value) -> Result<Q, Error> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(x) => x.as_i64().map(q).ok_or_else(|| parse_err("entry", x)),
        other => Err(parse_err("entry", other)),
    }
}

fn parse_row(v: &Value) -> Result<Vec<Q>, Error> {
    v.as_array().ok_or_else(|| parse_err("row", v))?.iter().map(parse_entry).collect()
}

fn parse_matrix(s: &str) -> Result<Matrix, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err("matrix", e))?;
    v.as_array().ok_or_else(|| parse_err("matrix", s))?.iter().map(parse_row).collect()
}

fn row_json(r: &[Q]) -> Value {
    Value::Array(r.iter().map(|x| Value::String(format_q(x))).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|r| row_json(r)).collect())
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), e))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| parse_err(&p.display().to_string(), e)),
        None => {
            let mut so = std::io::stdout().lock();
            writeln!(so, "{text}").map_err(|e| parse_err("stdout", e))
        }
    }
}

fn poset_json(elements: &[String], poset: &Poset, heights: &[usize], n: usize, flags: bool) -> Value {
    let mut f_vector = vec![0usize; heights.iter().max().map_or(0, |h| h + 1)];
    for &h in heights {
        f_vector[h] += 1;
    }
    json!({
        "header": { "n": n, "flags": flags, "count": elements.len(), "f_vector": f_vector },
        "elements": elements,
        "hasse": poset.hasse_edges().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        "bottom": poset.bottom(),
        "top": poset.top(),
    })
}

fn dot(elements: &[String], poset: &Poset) -> String {
    let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
    for (i, e) in elements.iter().enumerate() {
        s.push_str(&format!("  {i} [label=\"{e}\"];\n"));
    }
    for (a, b) in poset.hasse_edges() {
        s.push_str(&format!("  {a} -> {b};\n"));
    }
    s.push('}');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { n, flags, out, format } => {
            let (elements, poset, heights): (Vec<String>, Poset, Vec<usize>) = if flags {
                let p = enumerate_macp12(n)?;
                (p.elements.iter().map(ToString::to_string).collect(), p.poset, p.heights)
            } else {
                let p = enumerate_macp2(n)?;
                (p.elements.iter().map(ToString::to_string).collect(), p.poset, p.heights)
            };
            let text = match format {
                Format::Json => poset_json(&elements, &poset, &heights, n, flags).to_string(),
                Format::Text => elements.join("\n"),
                Format::Dot => dot(&elements, &poset),
            };
            emit(&out, &text)?;
        }
        Command::Verify { suite, n, budget, seed, samples, out, format } => {
            let opts = VerifyOptions { budget, seed, samples, ..VerifyOptions::default() };
            let r = run_suite(suite, n, &opts)?;
            let text = match format {
                Format::Text => format!(
                    "{} n={} {} checked={} failures={}",
                    r.suite,
                    r.n,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.checked,
                    r.failure_count
                ),
                _ => serde_json::to_string_pretty(&r).expect("serializable"),
            };
            emit(&out, &text)?;
            if !r.passed {
                return Err(Failure::Property(format!("{} failed", r.suite)));
            }
        }
        Command::Om { matrix, file } => {
            let text = match (matrix, file) {
                (Some(m), _) => m,
                (None, Some(f)) => read(&f)?,
                (None, None) => return Err(parse_err("om", "give --matrix or --file").into()),
            };
            println!("{}", mu(&parse_matrix(&text)?)?);
        }
        Command::Flag { y, x } => {
            let yv: Value = serde_json::from_str(&y).map_err(|e| parse_err("y", e))?;
            let y = parse_row(&yv)?;
            println!("{}", nu(&y, &parse_matrix(&x)?)?);
        }
        Command::Sample { om, flag, file, count, seed } => {
            let text = match (om, flag, file) {
                (Some(s), _, _) | (None, Some(s), _) => s,
                (None, None, Some(f)) => read(&f)?.trim().to_string(),
                _ => return Err(parse_err("sample", "give --om, --flag or --file").into()),
            };
            if text.starts_with("flag;") {
                let f: FlagOM = text.parse()?;
                let points = sample_flag_cell(&f, count, seed);
                for (y, x) in &points {
                    if nu(y, x)? != f {
                        return Err(Failure::Property("sample left the flag cell".into()));
                    }
                }
                let v: Vec<Value> = points.iter().map(|(y, x)| json!({ "y": row_json(y), "x": matrix_json(x) })).collect();
                println!("{}", Value::Array(v));
            } else {
                let m: Rank2OM = text.parse()?;
                let points = sample_cell(&m, count, seed);
                for x in &points {
                    if mu(x)? != m {
                        return Err(Failure::Property("sample left the cell".into()));
                    }
                }
                println!("{}", Value::Array(points.iter().map(matrix_json).collect()));
            }
        }
        Command::Homology { om, flag, complex } => {
            let k = match (om, flag, complex) {
                (Some(s), _, _) => {
                    let m: Rank2OM = s.parse()?;
                    let li = lower_interval(&m, Comparator::Covector);
                    order_complex(&li.poset.proper_part().poset)
                }
                (None, Some(s), _) => {
                    let f: FlagOM = s.parse()?;
                    order_complex(&flag_lower_interval(&f).poset.proper_part().poset)
                }
                (None, None, Some(path)) => {
                    let facets: Vec<Vec<u32>> =
                        serde_json::from_str(&read(&path)?).map_err(|e| parse_err("complex", e))?;
                    let nv = facets.iter().flatten().max().map_or(0, |&v| v as usize + 1);
                    SimplicialComplex::from_facets(nv, &facets)
                }
                _ => return Err(parse_err("homology", "give --om, --flag or --complex").into()),
            };
            println!("{}", serde_json::to_string(&report(&k)).expect("serializable"));
        }
        Command::Embed { flag, base } => {
            let f: FlagOM = flag.parse()?;
            let e = match base {
                Some(b) => iota_relative(&f, &b.parse()?)?,
                None => iota_embed(&f)?,
            };
            println!("{e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("property failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
