use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intervalfo::cliquewidth::{build_cw_expression, describe, eval_cw_expression, hard_family, CwExpression};
use intervalfo::ef::{equivalent_rank_d, trees_ef_equivalent};
use intervalfo::interpret::{gadget_fo, gadget_mso, write_gadget};
use intervalfo::interval::{build_graph, parse_rep, write_rep, Graph};
use intervalfo::kernel::{kernelize, modelcheck, modelcheck_direct, KernelConfig, DEFAULT_K_WORK};
use intervalfo::logic::{parse_formula, Dialect, RelStructure};
use intervalfo::numerics::{fmt_rational, parse_rational, DEFAULT_LK_BUDGET, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "intervalfo", version, about = "First-order model checking on interval graphs with restricted lengths")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Comparison tolerance for approximate lengths
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Starting per-rank removal threshold of the kernel
    #[arg(long, global = true, default_value_t = DEFAULT_K_WORK)]
    k_work: usize,
    /// Budget for enumerating sums of lengths
    #[arg(long, global = true, default_value_t = DEFAULT_LK_BUDGET)]
    lk_budget: u128,
    /// Budget for rank-type computations
    #[arg(long, global = true, default_value_t = intervalfo::ef::DEFAULT_TYPE_BUDGET)]
    type_budget: u64,
    /// Recheck every kernel removal on small graphs
    #[arg(long, global = true)]
    paranoid: bool,
    /// Recorded in reports; no command draws random numbers
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (or file prefix for `gadget`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shrink a representation while keeping its rank-d theory
    Kernelize {
        rep: PathBuf,
        #[arg(long)]
        d: u32,
    },
    /// Decide a first-order sentence on the graph of a representation
    Modelcheck {
        rep: PathBuf,
        formula: PathBuf,
        /// Evaluate on the full graph
        #[arg(long)]
        no_kernel: bool,
    },
    #[command(subcommand)]
    Cw(CwCmd),
    /// Build an interval gadget that interprets a graph
    Gadget {
        #[arg(value_parser = ["fo", "mso"])]
        kind: String,
        graph: PathBuf,
        /// Length band `[1, 1 + eps]` for `fo`
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
    /// The two-length family of growing clique-width
    Hardfamily { q: String, n: usize },
    #[command(subcommand)]
    Ef(EfCmd),
    /// Check a representation file
    Validate { rep: PathBuf },
}

#[derive(Subcommand)]
enum CwCmd {
    /// k-expression for a rational representation
    Build { rep: PathBuf },
    /// Graph of a k-expression
    Eval { expr: PathBuf },
}

#[derive(Subcommand)]
enum EfCmd {
    /// Rank-d equivalence through the game
    Equiv {
        a: PathBuf,
        b: PathBuf,
        d: u32,
    },
    /// Rank-d equivalence through minimized EF-trees
    Tree {
        a: PathBuf,
        b: PathBuf,
        d: u32,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn kernel_config(run: &RunConfig, d: u32) -> KernelConfig {
    KernelConfig {
        k_work: run.k_work,
        tol: run.tol,
        lk_budget: run.lk_budget,
        type_budget: run.type_budget,
        paranoid: run.paranoid,
        ..KernelConfig::new(d)
    }
}

fn check_config(run: &RunConfig) -> Result<(), Failure> {
    if !(run.tol > 0.0 && run.tol.is_finite()) {
        return Err(Failure(format!("--tol must be positive, got {}", run.tol)));
    }
    if run.k_work == 0 || run.lk_budget == 0 || run.type_budget == 0 {
        return Err(Failure("budgets and --k-work must be positive".into()));
    }
    Ok(())
}

fn config_line(run: &RunConfig) -> String {
    format!(
        "config: tol={:e} k_work={} lk_budget={} type_budget={} paranoid={} seed={}",
        run.tol, run.k_work, run.lk_budget, run.type_budget, run.paranoid, run.seed
    )
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let run = &cli.run;
    check_config(run)?;
    match cli.cmd {
        Cmd::Kernelize { rep, d } => {
            let r = parse_rep(&read(&rep)?)?;
            let (kernel, report) = kernelize(&r, &kernel_config(run, d))?;
            emit(&run.out, &write_rep(&kernel))?;
            eprintln!("{}\n{report}", config_line(run));
            Ok(if report.guarantee_met { 0 } else { 2 })
        }
        Cmd::Modelcheck { rep, formula, no_kernel } => {
            let r = parse_rep(&read(&rep)?)?;
            let f = parse_formula(&read(&formula)?, Dialect::Fo)?;
            if no_kernel {
                let v = modelcheck_direct(&r, &f, run.tol)?;
                emit(&run.out, &format!("{v}\n"))?;
                eprintln!("{}\nno kernel", config_line(run));
                Ok(0)
            } else {
                let (v, report) = modelcheck(&r, &f, &kernel_config(run, 0))?;
                emit(&run.out, &format!("{v}\n"))?;
                eprintln!("{}\n{report}", config_line(run));
                Ok(if report.guarantee_met { 0 } else { 2 })
            }
        }
        Cmd::Cw(CwCmd::Build { rep }) => {
            let r = parse_rep(&read(&rep)?)?;
            let c = build_cw_expression(&r, run.tol)?;
            emit(&run.out, &format!("{}\n", c.expression.to_text()))?;
            eprintln!("{}", describe(&c));
            Ok(0)
        }
        Cmd::Cw(CwCmd::Eval { expr }) => {
            let e = CwExpression::parse(&read(&expr)?)?;
            let lg = eval_cw_expression(&e)?;
            emit(&run.out, &lg.graph.to_text())?;
            Ok(0)
        }
        Cmd::Gadget { kind, graph, eps } => {
            let g = Graph::parse(&read(&graph)?)?;
            let out = if kind == "fo" {
                let (e, _) = parse_rational(&eps).ok_or_else(|| Failure(format!("bad --eps `{eps}`")))?;
                gadget_fo(&g, &e)?
            } else {
                gadget_mso(&g)?
            };
            let (rep, interp, map) = write_gadget(&out);
            match &run.out {
                Some(prefix) => {
                    let with = |ext: &str| {
                        let mut p = prefix.clone().into_os_string();
                        p.push(ext);
                        PathBuf::from(p)
                    };
                    for (ext, text) in [(".rep", &rep), (".interp", &interp), (".map", &map)] {
                        let p = with(ext);
                        fs::write(&p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
                    }
                }
                None => print!("{rep}{interp}{map}"),
            }
            eprintln!("gadget {kind}: {} vertices for {} vertices, {} edges", out.rep.len(), g.n(), g.edge_count());
            Ok(0)
        }
        Cmd::Hardfamily { q, n } => {
            let (rep, seq) = hard_family(&q, n, run.tol)?;
            emit(&run.out, &write_rep(&rep))?;
            let terms: Vec<String> = seq
                .terms
                .iter()
                .map(|(c, qe)| format!("{}{}", rep.lengths.fmt_coord(c), if *qe { "*" } else { "" }))
                .collect();
            eprintln!("sequence: {}", terms.join(", "));
            Ok(0)
        }
        Cmd::Ef(cmd) => {
            let (a, b, d, tree) = match cmd {
                EfCmd::Equiv { a, b, d } => (a, b, d, false),
                EfCmd::Tree { a, b, d } => (a, b, d, true),
            };
            let sa = RelStructure::parse(&read(&a)?)?;
            let sb = RelStructure::parse(&read(&b)?)?;
            let eq = if tree { trees_ef_equivalent(&sa, &sb, d)? } else { equivalent_rank_d(&sa, &sb, d)? };
            emit(&run.out, if eq { "equivalent\n" } else { "not equivalent\n" })?;
            Ok(0)
        }
        Cmd::Validate { rep } => {
            let r = parse_rep(&read(&rep)?)?;
            r.validate(run.tol)?;
            let g = build_graph(&r, run.tol)?;
            let lengths: Vec<String> = r
                .lengths
                .symbols()
                .iter()
                .map(|s| format!("{}={}{}", s.name, fmt_rational(&s.value), if s.exact { "" } else { "~" }))
                .collect();
            emit(
                &run.out,
                &format!("ok: {} vertices, {} edges, lengths {}\n", r.len(), g.edge_count(), lengths.join(" ")),
            )?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
