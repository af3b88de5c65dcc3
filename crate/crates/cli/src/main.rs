//! `blockset`: build families, decide matching and blocking properties, shift,
//! and check the graph edge bound from the command line.
//!
//! Exit codes: 0 when the checked property holds or the object was produced,
//! 1 when it fails (the report carries a counterexample), 2 on usage, input or
//! domain errors.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use blockset::constructions::{size_e, ConstructionKind, ConstructionSpec};
use blockset::graph_prop::{
    build_fig1, build_fig2, cover_b, edge_bound, exhaustive_verify, exhaustive_verify_with,
    hall_witness, sampled_verify, Graph, PropInstance,
};
use blockset::matching::{find_perfect_matching, min_blocking_size};
use blockset::search::{extremal_search, maximality_check, SearchBudget};
use blockset::shifting::{is_meaningful, potential, shift, shift_closure};
use blockset::{Error, SetFamily, Vertex};

use report::{Report, Verdict};

#[derive(Parser)]
#[command(
    name = "blockset",
    version,
    about = "Families without perfect matchings and small blocking sets"
)]
struct Cli {
    /// Emit JSON reports instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an explicit family
    Construct(ConstructArgs),
    /// Decide a property of a family file
    Verify(VerifyArgs),
    /// Apply one shift or shift to a fixpoint
    Shift(ShiftArgs),
    /// Graph instances with special vertices and cells
    Prop {
        #[command(subcommand)]
        command: PropCommand,
    },
    /// Find a deficient subset of a target set in a graph
    Hall(HallArgs),
    /// Search for the largest family satisfying both constraints
    Search(SearchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "E", alias = "e")]
    E,
    Eprime3,
    Kleitman,
    AugE2,
}

impl From<Kind> for ConstructionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::E => ConstructionKind::E,
            Kind::Eprime3 => ConstructionKind::Eprime3,
            Kind::Kleitman => ConstructionKind::Kleitman,
            Kind::AugE2 => ConstructionKind::AugmentedE2,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    kind: Kind,
    #[arg(short)]
    k: u32,
    #[arg(short)]
    n: u32,
    /// Ignored by `kleitman`
    #[arg(short, default_value_t = 1)]
    b: u32,
    /// Write the family file here instead of embedding it in the report
    #[arg(short)]
    o: Option<PathBuf>,
    /// Also write the construction parameters and blocks as JSON
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("check").required(true).args(["perfect_matching", "min_blocking", "maximal"])))]
struct VerifyArgs {
    /// Report a perfect matching if one exists
    #[arg(long)]
    perfect_matching: bool,
    /// Smallest blocking set of size at most CAP
    #[arg(long, value_name = "CAP")]
    min_blocking: Option<usize>,
    /// Whether every missing set creates a perfect matching
    #[arg(long)]
    maximal: bool,
    file: PathBuf,
}

#[derive(Args)]
struct ShiftArgs {
    file: PathBuf,
    #[arg(long, requires = "y", conflicts_with = "closure")]
    x: Option<Vertex>,
    #[arg(long, requires = "x")]
    y: Option<Vertex>,
    /// Shift until no allowed meaningful shift is left
    #[arg(long, requires = "b", required_unless_present = "x")]
    closure: bool,
    /// Blocking sets below this size must not appear
    #[arg(short)]
    b: Option<usize>,
    /// Write the resulting family here
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PropCommand {
    /// The extremal layout with one special vertex per cell
    BuildFig1 {
        #[arg(short)]
        b: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// The second extremal layout for 3-cells
    BuildFig2 {
        #[arg(short)]
        b: u32,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Validate an instance file and test the edge bound on it
    Check { file: PathBuf },
    /// Check the edge bound on every small instance, or on random ones
    Exhaust {
        #[arg(short)]
        b: u32,
        #[arg(short)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        exterior: u32,
        #[arg(long)]
        workers: Option<usize>,
        /// Sample this many random instances instead of enumerating
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct HallArgs {
    /// A 2-uniform family file
    file: PathBuf,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    target: Vec<Vertex>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, required = true)]
    extremal: bool,
    #[arg(short)]
    k: u32,
    #[arg(short)]
    n: u32,
    #[arg(short)]
    b: u32,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized restarts, or the node limit of an exhaustive run (0 = none)
    #[arg(long)]
    budget: Option<u64>,
    /// Accepted for symmetry with `prop exhaust`; the search is sequential
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(report.verdict.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Report, Error> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Shift(a) => shift_cmd(a),
        Command::Prop { command } => prop(command),
        Command::Hall(a) => hall(a),
        Command::Search(a) => search(a),
    }
}

fn read_family(path: &Path) -> Result<SetFamily, Error> {
    SetFamily::parse_any(&read(path)?)
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn sets_json(f: &SetFamily) -> Value {
    serde_json::to_value(f.sets()).expect("sets serialize")
}

/// Writes the family to `out` and records the path, or embeds the family.
fn place_family(data: &mut Value, f: &SetFamily, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            write(path, &f.to_text())?;
            data["output"] = json!(path.display().to_string());
        }
        None => data["family"] = sets_json(f),
    }
    Ok(())
}

fn construct(a: ConstructArgs) -> Result<Report, Error> {
    let spec = ConstructionSpec::new(a.kind.into(), a.k, a.n, a.b)?;
    let f = spec.build()?;
    let mut data = json!({
        "kind": spec.kind,
        "k": spec.k,
        "n": spec.n,
        "b": spec.b,
        "size": f.len(),
    });
    if let Ok(formula) = size_e(spec.k, spec.n, spec.b) {
        data["size_e"] = json!(formula.to_string());
    }
    place_family(&mut data, &f, a.o.as_deref())?;
    if let Some(path) = a.spec {
        write(&path, &(serde_json::to_string_pretty(&spec)? + "\n"))?;
    }
    Ok(Report::new(
        "construct",
        "explicit construction",
        Verdict::Holds,
        data,
    ))
}

fn verify(a: VerifyArgs) -> Result<Report, Error> {
    let f = read_family(&a.file)?;
    let base = json!({"n": f.n(), "k": f.k(), "size": f.len()});
    if a.perfect_matching {
        let mut data = base;
        return Ok(match find_perfect_matching(&f)? {
            None => {
                data["perfect_matching"] = Value::Null;
                Report::new(
                    "verify --perfect-matching",
                    "perfect-matching check",
                    Verdict::Holds,
                    data,
                )
            }
            Some(m) => {
                data["perfect_matching"] = json!(m);
                Report::new(
                    "verify --perfect-matching",
                    "perfect-matching check",
                    Verdict::Fails,
                    data,
                )
                .witness(json!(m))
            }
        });
    }
    if let Some(cap) = a.min_blocking {
        let mut data = base;
        data["cap"] = json!(cap);
        let report = match min_blocking_size(&f, cap)? {
            Some((size, w)) => {
                data["min"] = json!(size);
                data["witness"] = json!(w.vertices);
                Report::new(
                    "verify --min-blocking",
                    "minimum blocking set",
                    Verdict::Holds,
                    data,
                )
                .witness(json!(w.vertices))
            }
            None => {
                data["min"] = Value::Null;
                Report::new(
                    "verify --min-blocking",
                    "minimum blocking set",
                    Verdict::Holds,
                    data,
                )
            }
        };
        return Ok(report);
    }
    let mut data = base;
    Ok(match maximality_check(&f)? {
        None => {
            data["missing_sets"] = json!(f.missing_sets().len());
            Report::new("verify --maximal", "maximality check", Verdict::Holds, data)
        }
        Some(s) => {
            data["extendable_by"] = json!(s);
            Report::new("verify --maximal", "maximality check", Verdict::Fails, data)
                .witness(json!(s))
        }
    })
}

fn shift_cmd(a: ShiftArgs) -> Result<Report, Error> {
    let f = read_family(&a.file)?;
    if let (Some(x), Some(y)) = (a.x, a.y) {
        let meaningful = is_meaningful(&f, x, y)?;
        let g = shift(&f, x, y)?;
        let mut data = json!({
            "x": x,
            "y": y,
            "meaningful": meaningful,
            "potential_before": potential(&f),
            "potential_after": potential(&g),
        });
        place_family(&mut data, &g, a.o.as_deref())?;
        return Ok(Report::new("shift", "single shift", Verdict::Holds, data));
    }
    let b = a.b.expect("clap enforces -b with --closure");
    let trace = shift_closure(&f, b)?;
    let mut data = json!({
        "b": b,
        "steps": trace.steps,
        "permutation": trace.permutation,
        "shifted_region": trace.shifted_region,
        "relabel_policy": trace.relabel_policy,
    });
    place_family(&mut data, &trace.final_family, a.o.as_deref())?;
    Ok(Report::new(
        "shift --closure",
        "constrained shift closure",
        Verdict::Holds,
        data,
    ))
}

fn place_instance(data: &mut Value, inst: &PropInstance, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            write(path, &inst.to_text())?;
            data["output"] = json!(path.display().to_string());
        }
        None => data["instance"] = json!(inst),
    }
    Ok(())
}

fn prop(command: PropCommand) -> Result<Report, Error> {
    match command {
        PropCommand::BuildFig1 { b, k, o } => {
            let inst = build_fig1(b, k)?;
            let mut data =
                json!({"b": b, "k": k, "edges": inst.edge_count(), "edge_bound": edge_bound(b, k)});
            place_instance(&mut data, &inst, o.as_deref())?;
            Ok(Report::new(
                "prop build-fig1",
                "single-special extremal layout",
                Verdict::Holds,
                data,
            ))
        }
        PropCommand::BuildFig2 { b, o } => {
            let inst = build_fig2(b)?;
            let mut data =
                json!({"b": b, "k": 3, "edges": inst.edge_count(), "edge_bound": edge_bound(b, 3)});
            place_instance(&mut data, &inst, o.as_deref())?;
            Ok(Report::new(
                "prop build-fig2",
                "shared-neighbour extremal layout",
                Verdict::Holds,
                data,
            ))
        }
        PropCommand::Check { file } => prop_check(&file),
        PropCommand::Exhaust {
            b,
            k,
            exterior,
            workers,
            samples,
            seed,
        } => {
            let report = match (samples, workers) {
                (Some(samples), _) => sampled_verify(b, k, exterior, samples, seed.unwrap_or(0))?,
                (None, Some(w)) => exhaustive_verify_with(b, k, exterior, w)?,
                (None, None) => exhaustive_verify(b, k, exterior)?,
            };
            let verdict = if report.holds() {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            let mut data = serde_json::to_value(&report)?;
            data["equality_classes"] = json!(report.classification.len());
            data["labels"] = json!(report.labels());
            data.as_object_mut()
                .expect("report is an object")
                .remove("violations");
            let mut out = Report::new(
                "prop exhaust",
                "edge bound on small instances",
                verdict,
                data,
            );
            for v in &report.violations {
                out = out.witness(json!(v));
            }
            Ok(out)
        }
    }
}

fn prop_check(file: &Path) -> Result<Report, Error> {
    let inst = PropInstance::parse_text(&read(file)?)?;
    let problems = inst.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|p| p.to_string()).collect();
        return Err(Error::Domain(format!(
            "invalid instance: {}",
            list.join("; ")
        )));
    }
    let bound = edge_bound(inst.b, inst.k);
    let mut data =
        json!({"b": inst.b, "k": inst.k, "edges": inst.edge_count(), "edge_bound": bound});
    let label = "edge bound on one instance";
    Ok(match cover_b(&inst)? {
        Some(m) => {
            data["covering"] = json!(m);
            Report::new("prop check", label, Verdict::Holds, data)
        }
        None => {
            data["covering"] = Value::Null;
            if inst.edge_count() as u64 <= bound {
                Report::new("prop check", label, Verdict::Holds, data)
            } else {
                Report::new("prop check", label, Verdict::Fails, data).witness(json!(inst))
            }
        }
    })
}

fn hall(a: HallArgs) -> Result<Report, Error> {
    let g = Graph::from_family(&read_family(&a.file)?)?;
    let label = "deficient subset";
    match hall_witness(&g, &a.target) {
        Ok(w) => {
            let data = json!({
                "target": a.target,
                "set": w.set,
                "neighborhood": w.neighborhood,
                "matching": w.matching,
            });
            Ok(Report::new("hall", label, Verdict::Holds, data).witness(json!(w.set)))
        }
        Err(Error::Coverable { matching }) => {
            let data = json!({"target": a.target, "covering": matching});
            Ok(Report::new("hall", label, Verdict::Fails, data).witness(json!(matching)))
        }
        Err(e) => Err(e),
    }
}

fn search(a: SearchArgs) -> Result<Report, Error> {
    debug_assert!(a.extremal);
    let _ = a.workers;
    let budget = match a.mode {
        Mode::Exhaustive => SearchBudget {
            node_cap: a.budget.unwrap_or(0),
            ..SearchBudget::exhaustive()
        },
        Mode::Randomized => SearchBudget::randomized(a.budget.unwrap_or(20), a.seed),
    };
    let r = extremal_search(a.k, a.n, a.b, budget)?;
    let mut data = json!({
        "k": a.k,
        "n": a.n,
        "b": a.b,
        "mode": budget.mode,
        "seed": a.seed,
        "max_size": r.max_size,
        "exact": r.exact,
        "family": sets_json(&r.witness),
    });
    if let Ok(formula) = size_e(a.k, a.n, a.b) {
        data["size_e"] = json!(formula.to_string());
    }
    let verdict = if r.exact {
        Verdict::Holds
    } else {
        Verdict::Indeterminate
    };
    Ok(Report::new(
        "search --extremal",
        "extremal family search",
        verdict,
        data,
    ))
}
