//! Command-line front end: every verb renders either an aligned text table
//! or a JSON document carrying the same fields.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use starfree::automata::Automaton;
use starfree::families::{self, FamilyId, FamilyTag};
use starfree::langops::{self, BoolOp};
use starfree::monotonicity::classify;
use starfree::search::{self, SearchConfig};
use starfree::transform::{PartialTransformation, Transform, Transformation};
use starfree::{verify, Dfa, Error, Semigroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "starfree", version, about = "Aperiodic semigroups, star-free languages and monotonic automata")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the search (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Position of an automaton's language in the monotonicity hierarchy.
    Classify { file: PathBuf },
    /// Quotient, syntactic and monoid complexity.
    Report { file: PathBuf },
    /// Closure of a list of transformations such as `[1,1,2]` or `[2,_,3]`.
    Closure {
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Emit the automaton of a generator family (A, B, Bprime, C).
    Family { tag: FamilyTag, n: usize },
    /// Language operation over automaton files; prints the minimal result.
    Op {
        #[arg(value_enum)]
        verb: OpVerb,
        file: PathBuf,
        /// Second automaton for binary operations; letters of the word for `quotient`.
        rest: Vec<String>,
    },
    /// Exhaustive search for the largest aperiodic semigroup on k generators.
    Search {
        n: usize,
        k: usize,
        #[arg(long)]
        override_budget: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Pairwise conflict table of non-trivial aperiodic transformations.
    Conflicts { n: usize },
    /// The counting rows f(n), g(n-1), h(n), (n+1)^(n-1).
    Tables {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Run the verification sweep; exits 1 on any failure.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpVerb {
    Union,
    Intersect,
    Difference,
    Xor,
    Concat,
    Star,
    Complement,
    Quotient,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Lib(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            Failure::Lib(Error::OutOfRange { .. }) => EXIT_USAGE,
            Failure::Lib(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

/// Output of one verb: rendered text plus the status it exits with.
struct Output {
    body: String,
    status: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, status: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            let _ = out.write_all(output.body.as_bytes());
            output.status
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Classify { file } => cmd_classify(&load(file)?, fmt),
        Command::Report { file } => cmd_report(&load(file)?, fmt),
        Command::Closure { generators } => cmd_closure(generators, fmt),
        Command::Family { tag, n } => {
            let automaton = families::build(FamilyId::new(*tag, *n)?)?;
            Ok(Output::ok(automaton.to_json() + "\n"))
        }
        Command::Op { verb, file, rest } => cmd_op(*verb, file, rest),
        Command::Search { n, k, override_budget, checkpoint } => {
            let config = SearchConfig {
                workers: cli.workers,
                override_budget: *override_budget,
                checkpoint: checkpoint.clone(),
            };
            cmd_search(*n, *k, &config, fmt)
        }
        Command::Conflicts { n } => cmd_conflicts(*n, fmt),
        Command::Tables { max_n } => cmd_tables(*max_n, fmt),
        Command::Verify => cmd_verify(cli.workers, fmt),
    }
}

fn load(path: &Path) -> Result<Dfa, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Automaton::from_json(&text)?.into_dfa())
}

fn json_out(value: &impl Serialize) -> Output {
    Output::ok(serde_json::to_string_pretty(value).expect("serializable") + "\n")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Left-justified two-column rows.
fn rows(pairs: &[(String, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in pairs {
        let pad = width - k.chars().count();
        let _ = writeln!(s, "{k}{:pad$}  {v}", "", pad = pad);
    }
    s
}

fn cmd_classify(dfa: &Dfa, fmt: Format) -> Result<Output, Failure> {
    let c = classify(dfa)?;
    if fmt == Format::Json {
        let mut value = serde_json::to_value(&c).expect("serializable");
        value["summary"] = json!(c.summary());
        return Ok(json_out(&value));
    }
    let witness = |o: &Option<starfree::OrderWitness>| o.as_ref().map(|w| format!("  order {w}")).unwrap_or_default();
    let constants = if c.constant_letters.is_empty() { "-".to_string() } else { c.constant_letters.join(",") };
    let body = rows(&[
        ("monotonic".into(), format!("{}{}", yes(c.monotonic), witness(&c.monotonic_order))),
        ("partially monotonic".into(), format!("{}{}", yes(c.partially_monotonic), witness(&c.partial_order))),
        (
            "nearly monotonic".into(),
            format!("{}{}  constants {constants}", yes(c.nearly_monotonic), witness(&c.nearly_order)),
        ),
        ("star-free".into(), yes(c.star_free).into()),
        ("summary".into(), c.summary().into()),
    ]);
    Ok(Output::ok(body))
}

fn cmd_report(dfa: &Dfa, fmt: Format) -> Result<Output, Failure> {
    let r = dfa.complexity_report()?;
    if fmt == Format::Json {
        return Ok(json_out(&r));
    }
    let body = rows(&[
        ("κ".into(), r.kappa.to_string()),
        ("σ".into(), r.sigma.to_string()),
        ("μ".into(), r.mu.to_string()),
    ]);
    Ok(Output::ok(body))
}

fn cmd_closure(texts: &[String], fmt: Format) -> Result<Output, Failure> {
    if texts.iter().any(|t| t.contains('_')) {
        let gens = texts.iter().map(|t| t.parse::<PartialTransformation>()).collect::<Result<Vec<_>, _>>()?;
        closure_output(&Semigroup::generate(&gens)?, fmt)
    } else {
        let gens = texts.iter().map(|t| t.parse::<Transformation>()).collect::<Result<Vec<_>, _>>()?;
        closure_output(&Semigroup::generate(&gens)?, fmt)
    }
}

fn closure_output<T: Transform + Serialize>(s: &Semigroup<T>, fmt: Format) -> Result<Output, Failure> {
    // generators are named t1, t2, ... in witness words
    let word = |i: usize| s.witness(i).iter().map(|g| format!("t{}", g + 1)).collect::<Vec<_>>().join(" ");
    if fmt == Format::Json {
        let elements: Vec<Value> = s
            .elements()
            .iter()
            .enumerate()
            .map(|(i, t)| json!({ "element": t, "word": word(i) }))
            .collect();
        return Ok(json_out(&json!({
            "size": s.len(),
            "aperiodic": s.is_aperiodic(),
            "identity": s.contains_identity(),
            "elements": elements,
        })));
    }
    let mut pairs = vec![
        ("size".to_string(), s.len().to_string()),
        ("aperiodic".to_string(), yes(s.is_aperiodic()).to_string()),
        ("identity".to_string(), yes(s.contains_identity()).to_string()),
    ];
    pairs.extend(s.elements().iter().enumerate().map(|(i, t)| (t.to_string(), word(i))));
    Ok(Output::ok(rows(&pairs)))
}

fn cmd_op(verb: OpVerb, file: &Path, rest: &[String]) -> Result<Output, Failure> {
    let a = load(file)?;
    let binary = |op: &dyn Fn(&Dfa, &Dfa) -> starfree::Result<Dfa>| -> Result<Dfa, Failure> {
        match rest {
            [other] => Ok(op(&a, &load(Path::new(other))?)?),
            _ => Err(Failure::Usage(format!("`op {verb:?}` takes exactly two automaton files").to_lowercase())),
        }
    };
    let unary = || -> Result<(), Failure> {
        if rest.is_empty() {
            Ok(())
        } else {
            Err(Failure::Usage("unary operation takes one automaton file".into()))
        }
    };
    let result = match verb {
        OpVerb::Union => binary(&|x, y| langops::boolean_op(x, y, BoolOp::Union))?,
        OpVerb::Intersect => binary(&|x, y| langops::boolean_op(x, y, BoolOp::Intersection))?,
        OpVerb::Difference => binary(&|x, y| langops::boolean_op(x, y, BoolOp::Difference))?,
        OpVerb::Xor => binary(&|x, y| langops::boolean_op(x, y, BoolOp::SymmetricDifference))?,
        OpVerb::Concat => binary(&langops::concat)?,
        OpVerb::Star => {
            unary()?;
            langops::star(&a)
        }
        OpVerb::Complement => {
            unary()?;
            langops::complement(&a)
        }
        OpVerb::Quotient => {
            let word = split_word(&a, rest);
            let word: Vec<&str> = word.iter().map(String::as_str).collect();
            langops::left_quotient(&a, &word)?
        }
    };
    Ok(Output::ok(Automaton::Dfa(result).to_json() + "\n"))
}

/// Each argument is one letter, except that an argument which is not a
/// letter is split into characters (`aba` for `a b a`).
fn split_word(a: &Dfa, rest: &[String]) -> Vec<String> {
    let known = |s: &str| a.alphabet().iter().any(|l| l == s);
    rest.iter()
        .flat_map(|arg| {
            if known(arg) {
                vec![arg.clone()]
            } else {
                arg.chars().map(String::from).collect()
            }
        })
        .collect()
}

fn cmd_search(n: usize, k: usize, config: &SearchConfig, fmt: Format) -> Result<Output, Failure> {
    let r = search::max_aperiodic(n, k, config)?;
    let status = match r.matches_reference() {
        Some(true) => "verified",
        Some(false) => "MISMATCH",
        None => "unverified",
    };
    let code = if r.matches_reference() == Some(false) { EXIT_MISMATCH } else { EXIT_OK };
    if fmt == Format::Json {
        let mut value = serde_json::to_value(&r).expect("serializable");
        value["status"] = json!(status);
        return Ok(Output { status: code, ..json_out(&value) });
    }
    let gens: Vec<String> = r.best_generators.iter().map(|t| t.to_string()).collect();
    let body = rows(&[
        ("n".into(), r.n.to_string()),
        ("k".into(), r.k.to_string()),
        ("best size".into(), r.best_size.to_string()),
        ("generators".into(), gens.join(" ")),
        ("explored".into(), r.explored.to_string()),
        ("reference".into(), r.reference.map_or("-".into(), |v| v.to_string())),
        ("status".into(), status.into()),
    ]);
    Ok(Output { body, status: code })
}

/// `[3,1,2]` as `312`; falls back to the bracketed form past degree 9.
fn compact(t: &Transformation) -> String {
    let v = t.to_vec();
    if v.len() <= 9 {
        v.iter().map(|x| x.to_string()).collect()
    } else {
        t.to_string()
    }
}

fn cmd_conflicts(n: usize, fmt: Format) -> Result<Output, Failure> {
    let g = search::conflict_graph(n)?;
    let independent = if g.nodes.len() <= search::MAX_INDEPENDENT_NODES {
        Some(search::max_conflict_free(&g)?)
    } else {
        None
    };
    let products: Vec<Vec<Transformation>> =
        g.nodes.iter().map(|x| g.nodes.iter().map(|y| x.product(y)).collect()).collect();

    if fmt == Format::Json {
        return Ok(json_out(&json!({
            "n": n,
            "nodes": g.nodes,
            "edges": g.edges,
            "products": products,
            "max_conflict_free": independent.as_ref().map(|s| s.iter().map(|&i| &g.nodes[i]).collect::<Vec<_>>()),
            "bound": independent.as_ref().map(|s| g.derived_bound(s.len())),
        })));
    }

    let names: Vec<String> = g.nodes.iter().map(compact).collect();
    let width = names.iter().map(String::len).max().unwrap_or(1) + 1;
    let mut s = String::new();
    let _ = writeln!(s, "nodes {}, conflicting pairs {}; * marks a product with a cycle", g.nodes.len(), g.edges.len());
    let _ = write!(s, "{:width$}", "", width = width);
    for name in &names {
        let _ = write!(s, " {name:>width$}", width = width);
    }
    s.push('\n');
    for (i, row) in products.iter().enumerate() {
        let _ = write!(s, "{:>width$}", names[i], width = width);
        for p in row {
            let cell = format!("{}{}", compact(p), if p.is_aperiodic() { "" } else { "*" });
            let _ = write!(s, " {cell:>width$}", width = width);
        }
        s.push('\n');
    }
    if let Some(set) = &independent {
        let members: Vec<&str> = set.iter().map(|&i| names[i].as_str()).collect();
        let _ = writeln!(s, "max conflict-free {}: {}", set.len(), members.join(" "));
        let _ = writeln!(s, "bound {}", g.derived_bound(set.len()));
    }
    Ok(Output::ok(s))
}

fn cmd_tables(max_n: usize, fmt: Format) -> Result<Output, Failure> {
    if max_n == 0 || max_n > families::MAX_COUNT_N {
        return Err(Error::OutOfRange { what: "table width", value: max_n }.into());
    }
    let cols: Vec<usize> = (1..=max_n).collect();
    let row = |f: &dyn Fn(usize) -> Option<u64>| cols.iter().map(|&n| f(n)).collect::<Vec<_>>();
    let table: Vec<(&str, &str, Vec<Option<u64>>)> = vec![
        ("f", "f(n)", row(&|n| families::f(n).ok())),
        ("g", "g(n-1)", row(&|n| if n >= 2 { families::g(n - 1).ok() } else { None })),
        ("h", "h(n)", row(&|n| families::h(n).ok())),
        ("aperiodic", "(n+1)^(n-1)", row(&|n| families::aperiodic_count(n).ok())),
    ];
    if fmt == Format::Json {
        let mut doc = serde_json::Map::new();
        doc.insert("n".into(), json!(cols));
        for (key, _, values) in &table {
            doc.insert((*key).into(), json!(values));
        }
        return Ok(json_out(&Value::Object(doc)));
    }
    let cell = |v: &Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    let label_width = table.iter().map(|(_, l, _)| l.len()).max().unwrap_or(1);
    let width = table.iter().flat_map(|(_, _, vs)| vs.iter().map(|v| cell(v).len())).max().unwrap_or(1);
    let mut s = String::new();
    let _ = write!(s, "{:<label_width$}", "n", label_width = label_width);
    for n in &cols {
        let _ = write!(s, "  {n:>width$}", width = width);
    }
    s.push('\n');
    for (_, label, values) in &table {
        let _ = write!(s, "{label:<label_width$}", label_width = label_width);
        for v in values {
            let _ = write!(s, "  {:>width$}", cell(v), width = width);
        }
        s.push('\n');
    }
    Ok(Output::ok(s))
}

fn cmd_verify(workers: usize, fmt: Format) -> Result<Output, Failure> {
    let checks = verify::sweep(workers);
    let passed = checks.iter().all(|c| c.passed);
    let status = if passed { EXIT_OK } else { EXIT_MISMATCH };
    if fmt == Format::Json {
        return Ok(Output { status, ..json_out(&json!({ "passed": passed, "checks": checks })) });
    }
    let mut s = String::new();
    for c in &checks {
        let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(s, "{} checks, {failed} failed", checks.len());
    Ok(Output { body: s, status })
}
