//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a semantic negative (rule not applicable, law
//! violated, derivations not independent), 2 bad input or usage.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::category::DEFAULT_HOM_LIMIT;
use crate::codec::{
    decode_base, decode_map, decode_rule, derivation_diagram, encode_derivation, encode_map, encode_rule,
    read_derivation, Codec, Diagram, Labels,
};
use crate::dot::{render_diagram, render_object, Draw};
use crate::dpo::{
    apply, compose_concurrent, derivation_overlap, find_matches, gluing_check, parallel_independent,
    sequential_independent, Derivation, GluingReport, Rewriting,
};
use crate::error::CatError;
use crate::finset::FinSetCat;
use crate::multigraph::MultigraphCat;
use crate::presheaf::PresheafCat;
use crate::sampler::Sampler;
use crate::simplegraph::SimpleGraphCat;
use crate::slice::Slice;
use crate::suite::{level_of, recheck, run_suite, Law, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "adhesive", version, about = "Double-pushout rewriting and adhesivity checks")]
pub struct Cli {
    /// finset, multigraph, simplegraph, typed:<type-graph-file> or presheaf:<base-file>
    #[arg(long, short = 'c', global = true, default_value = "multigraph")]
    pub category: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a rule to a host and write the derivation.
    Apply(ApplyArgs),
    /// Run law suites and write a JSON report.
    Check(CheckArgs),
    /// Print a payload as Graphviz DOT.
    Render {
        file: PathBuf,
    },
    /// Decide parallel or sequential independence of two derivations.
    Independence {
        first: PathBuf,
        second: PathBuf,
    },
    /// Compose two consecutive derivations into one rule.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Re-run the check behind a counterexample payload; exit 1 if it still fails.
    Recheck {
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub rule: PathBuf,
    #[arg(long)]
    pub host: PathBuf,
    /// `auto`, a match index, or a file with a morphism from the left side into the host.
    #[arg(long = "match", default_value = "auto")]
    pub selector: String,
    /// Only consider injective matches.
    #[arg(long)]
    pub monic: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the derivation as DOT.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// A law name, or `all` to classify the instance.
    #[arg(long, default_value = "all")]
    pub law: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iterations per law.
    #[arg(long, env = "ADHESIVE_BUDGET", default_value_t = 100)]
    pub iters: usize,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, default_value_t = 3)]
    pub probes: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Negative(String),
    /// Exit 2.
    Input(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<CatError> for Failure {
    fn from(e: CatError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

pub trait Instance: Sampler + Draw + Rewriting + Sync {}

impl<T: Sampler + Draw + Rewriting + Sync> Instance for T {}

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Host elements named by their serialized identifiers.
fn describe_gluing<C: Codec>(cat: &C, report: &GluingReport, labels: &Labels) -> String {
    let sorts = cat.sort_names();
    let name = |e: &crate::dpo::Element| {
        let s = sorts.iter().position(|n| *n == e.sort);
        match s.and_then(|s| labels[s].get(e.index)) {
            Some(id) => format!("{} {id}", e.sort),
            None => format!("{} #{}", e.sort, e.index),
        }
    };
    let list = |xs: &[crate::dpo::Element]| xs.iter().map(name).collect::<Vec<_>>().join(", ");
    let mut parts = Vec::new();
    if !report.dangling.is_empty() {
        parts.push(format!("dangling: {}", list(&report.dangling)));
    }
    if !report.identified.is_empty() {
        parts.push(format!("identified: {}", list(&report.identified)));
    }
    format!("gluing conditions fail; {}", parts.join("; "))
}

fn cmd_apply<C: Instance>(cat: &C, args: &ApplyArgs) -> Outcome {
    let lr = decode_rule(cat, &read_json(&args.rule)?)?;
    let (host, host_labels) = cat.decode_object(&read_json(&args.host)?)?;
    let left = cat.target(lr.rule.l());
    let matching = match args.selector.as_str() {
        "auto" => {
            let all = find_matches(cat, &lr.rule, &host, args.monic, DEFAULT_HOM_LIMIT)?;
            let mut first_report = None;
            let mut chosen = None;
            for m in all {
                let report = gluing_check(cat, &lr.rule, &m.morphism)?;
                if report.ok() {
                    chosen = Some(m.morphism);
                    break;
                }
                first_report.get_or_insert(report);
            }
            match (chosen, first_report) {
                (Some(m), _) => m,
                (None, Some(r)) => return Err(Failure::Negative(describe_gluing(cat, &r, &host_labels))),
                (None, None) => return Err(Failure::Negative("the rule has no match in the host".into())),
            }
        }
        sel => {
            let m = match sel.parse::<usize>() {
                Ok(i) => find_matches(cat, &lr.rule, &host, args.monic, DEFAULT_HOM_LIMIT)?
                    .into_iter()
                    .nth(i)
                    .map(|m| m.morphism)
                    .ok_or_else(|| Failure::Negative(format!("there is no match number {i}")))?,
                Err(_) => decode_map(cat, &read_json(Path::new(sel))?, (&left, &lr.left), (&host, &host_labels))?,
            };
            let report = gluing_check(cat, &lr.rule, &m)?;
            if !report.ok() {
                return Err(Failure::Negative(describe_gluing(cat, &report, &host_labels)));
            }
            m
        }
    };
    let d = apply(cat, &lr.rule, &matching).map_err(|e| match e {
        CatError::Gluing(r) => Failure::Negative(describe_gluing(cat, &r, &host_labels)),
        e => e.into(),
    })?;
    let diagram = derivation_diagram(cat, &d, Some((&lr.left, &lr.interface, &lr.right)), Some(&host_labels));
    if let Some(p) = &args.dot {
        write_out(Some(p), &render_diagram(cat, &diagram))?;
    }
    write_out(args.out.as_deref(), &pretty(&encode_derivation(cat, &diagram, lr.rule.linear())))
}

fn cmd_check<C: Instance>(cat: &C, args: &CheckArgs) -> Outcome {
    let cfg = SuiteConfig {
        seed: args.seed,
        iters: args.iters,
        max_size: args.max_size,
        probes: args.probes,
    };
    let report = if args.law == "all" {
        let mut r = run_suite(cat, &Law::ALL, &cfg)?;
        r.level = Some(level_of(&r));
        r
    } else {
        let law: Law = args.law.parse().map_err(|e: CatError| Failure::Input(e.to_string()))?;
        run_suite(cat, &[law], &cfg)?
    };
    let text = pretty(&serde_json::to_value(&report).expect("reports serialize"));
    write_out(args.report.as_deref(), &text)?;
    for l in &report.laws {
        eprintln!(
            "{}: {} passed, {} failed, {} skipped, {} exhausted",
            l.law, l.passed, l.failed, l.skipped, l.exhausted
        );
    }
    if let Some(level) = report.level {
        eprintln!("level: {level}");
    }
    match report.failures() {
        0 => Ok(()),
        n => Err(Failure::Negative(format!("{n} law violations"))),
    }
}

fn cmd_render<C: Instance>(cat: &C, file: &Path) -> Outcome {
    let v = read_json(file)?;
    let text = if v.get("kind").is_some() {
        render_diagram(cat, &Diagram::decode(cat, &v)?)
    } else if v.get("interface").is_some() {
        let lr = decode_rule(cat, &v)?;
        let d = Diagram::new("rule")
            .with_object("L", cat.target(lr.rule.l()), lr.left)
            .with_object("K", cat.source(lr.rule.l()), lr.interface)
            .with_object("R", cat.target(lr.rule.r()), lr.right)
            .with_morphism(cat, "l", "K", "L", lr.rule.l().clone())
            .with_morphism(cat, "r", "K", "R", lr.rule.r().clone());
        render_diagram(cat, &d)
    } else {
        let (a, labels) = cat.decode_object(&v)?;
        render_object(cat, &a, &labels)
    };
    write_out(None, &text)
}

fn load_derivation<C: Instance>(cat: &C, path: &Path) -> std::result::Result<(Derivation<C::Mor>, Diagram<C>), Failure> {
    let v = read_json(path)?;
    let d = Diagram::decode(cat, &v)?;
    let linear = v.get("linear").and_then(Value::as_bool).unwrap_or(false);
    Ok((read_derivation(cat, &d, linear)?, d))
}

fn cmd_independence<C: Instance>(cat: &C, first: &Path, second: &Path) -> Outcome {
    let (d1, _) = load_derivation(cat, first)?;
    let (d2, _) = load_derivation(cat, second)?;
    let (mode, independent) = if d1.host(cat) == d2.host(cat) {
        ("parallel", parallel_independent(cat, &d1, &d2, DEFAULT_HOM_LIMIT)?.is_some())
    } else if d1.result(cat) == d2.host(cat) {
        ("sequential", sequential_independent(cat, &d1, &d2, DEFAULT_HOM_LIMIT)?.is_some())
    } else {
        return Err(Failure::Input(
            "derivations neither share a host nor follow one another".into(),
        ));
    };
    write_out(None, &pretty(&json!({ "mode": mode, "independent": independent })))?;
    if independent {
        Ok(())
    } else {
        Err(Failure::Negative(format!("not {mode} independent")))
    }
}

fn cmd_compose<C: Instance>(cat: &C, first: &Path, second: &Path, out: Option<&Path>) -> Outcome {
    let (d1, g1) = load_derivation(cat, first)?;
    let (d2, _) = load_derivation(cat, second)?;
    let (overlap, h) = derivation_overlap(cat, &d1, &d2)?;
    let cr = compose_concurrent(cat, &d1.rule, &d2.rule, &overlap).map_err(|e| match e {
        CatError::Precondition(m) => Failure::Negative(m),
        e => e.into(),
    })?;
    let m = crate::dpo::concurrent_match(cat, &cr, &d1, &h).map_err(|e| match e {
        CatError::Precondition(m) => Failure::Negative(m),
        e => e.into(),
    })?;
    let mut v = encode_rule(cat, &cr.rule);
    let left = cat.target(cr.rule.l());
    let left_labels = crate::codec::default_labels(cat, &left);
    if let Value::Object(map) = &mut v {
        map.insert("match".into(), Value::Object(encode_map(cat, &m, &left_labels, g1.labels("X")?)));
    }
    write_out(out, &pretty(&v))
}

fn cmd_recheck<C: Instance>(cat: &C, file: &Path) -> Outcome {
    let v = read_json(file)?;
    if recheck(cat, &v)? {
        Err(Failure::Negative("the counterexample still fails".into()))
    } else {
        eprintln!("the check passes on this payload");
        Ok(())
    }
}

fn run_command<C: Instance>(cat: &C, command: &Command) -> Outcome {
    match command {
        Command::Apply(a) => cmd_apply(cat, a),
        Command::Check(a) => cmd_check(cat, a),
        Command::Render { file } => cmd_render(cat, file),
        Command::Independence { first, second } => cmd_independence(cat, first, second),
        Command::Compose { first, second, out } => cmd_compose(cat, first, second, out.as_deref()),
        Command::Recheck { file } => cmd_recheck(cat, file),
    }
}

fn dispatch(category: &str, command: &Command) -> Outcome {
    match category.split_once(':') {
        None => match category {
            "finset" => run_command(&FinSetCat, command),
            "multigraph" => run_command(&MultigraphCat, command),
            "simplegraph" => run_command(&SimpleGraphCat, command),
            other => Err(Failure::Input(format!(
                "unknown category `{other}`; expected finset, multigraph, simplegraph, typed:<file> or presheaf:<file>"
            ))),
        },
        Some(("typed", file)) => {
            let v = read_json(Path::new(file))?;
            if v.get("adj").is_some() {
                let (over, labels) = SimpleGraphCat.decode_object(&v)?;
                run_command(&Slice::labelled(SimpleGraphCat, over, labels), command)
            } else {
                let (over, labels) = MultigraphCat.decode_object(&v)?;
                run_command(&Slice::labelled(MultigraphCat, over, labels), command)
            }
        }
        Some(("presheaf", file)) => {
            let base = decode_base(&read_json(Path::new(file))?)?;
            run_command(&PresheafCat::new(base), command)
        }
        Some((kind, _)) => Err(Failure::Input(format!("unknown category kind `{kind}`"))),
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.category, &cli.command) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Negative(m) | Failure::Input(m) => eprintln!("error: {m}"),
            }
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_category_is_an_input_error() {
        let cmd = Command::Render { file: "x.json".into() };
        assert_eq!(dispatch("sets", &cmd).unwrap_err().code(), 2);
    }
}
