//! Command-line front end: solvers, compilers, the gadget verifier, DOT
//! export and the play server.

pub mod server;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use arck_core::arck::{decode_position, encode_position, solve_with, SolverConfig};
use arck_core::arck_compile::{
    compile_b2cl_to_arck_with, encode_trace, pad_variables, red_budget, ArcKCompileOptions, RedComponentLowering,
};
use arck_core::cl::{decode_instance, encode_instance, solve_cl, validate_instance, ClInstance};
use arck_core::cl_compile::{
    compile_poscnf_to_b2cl, to_builder_blocker, to_misere_play, to_normal_play, ClTrace, CompilationParams,
};
use arck_core::gadgets::{Backend, GadgetKind};
use arck_core::graph::{self, Embedding};
use arck_core::poscnf::{parse_formula, solve_poscnf, PosCnfGame, Side};
use arck_core::verify::verify_matrix;
use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "arck", version, about = "Misere partizan Arc Kayles: solvers, reductions and a play server")]
pub struct Cli {
    /// Reserved. Every operation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an Arc Kayles position.
    SolveArck {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Solve a constraint-logic instance.
    SolveCl {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Solve a PosCNF game.
    SolvePoscnf {
        #[arg(long = "in")]
        input: PathBuf,
        /// Side that moves first.
        #[arg(long, value_enum, default_value = "true")]
        first: FirstSide,
    },
    /// Compile a formula or an instance and write the results to a directory.
    Compile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long, value_enum, default_value = "standard")]
        variant: Variant,
        #[arg(long, value_enum, default_value = "general")]
        backend: BackendArg,
        /// Rotation-system JSON for the arck lowering.
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// Trace JSON from an earlier `--to b2cl` run; needed to apply a
        /// variant to a b2cl input.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "allow")]
        odd_variables: OddVariables,
        #[arg(long, value_enum, default_value = "isolated")]
        red_components: RedComponents,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check gadget truth tables, red balance and line-graph planarity.
    Verify {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Print a position, instance or graph file as Graphviz DOT.
    Export {
        #[arg(long, required = true)]
        dot: bool,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Serve a single game session over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        position: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FirstSide {
    True,
    False,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Poscnf,
    B2cl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    B2cl,
    Arck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Standard,
    Bbb2cl,
    Npb2cl,
    Mpb2cl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OddVariables {
    /// Fail on an odd number of Variable gadgets.
    Reject,
    /// Lower an odd count with ⌊n/2⌋ pair extras.
    Allow,
    /// Add an unused dummy variable first.
    Pad,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RedComponents {
    Isolated,
    Omit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BackendArg {
    General,
    Cartesian,
    Triangular,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::General => Backend::General,
            BackendArg::Cartesian => Backend::Cartesian,
            BackendArg::Triangular => Backend::Triangular,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    Interface,
    Goal,
    Variable,
    WireEven,
    WireOdd,
    And,
    Or,
    Fanout,
    Choice,
}

impl From<KindArg> for GadgetKind {
    fn from(k: KindArg) -> GadgetKind {
        match k {
            KindArg::Interface => GadgetKind::Interface,
            KindArg::Goal => GadgetKind::Goal,
            KindArg::Variable => GadgetKind::Variable,
            KindArg::WireEven => GadgetKind::WireEven,
            KindArg::WireOdd => GadgetKind::WireOdd,
            KindArg::And => GadgetKind::And,
            KindArg::Or => GadgetKind::Or,
            KindArg::Fanout => GadgetKind::Fanout,
            KindArg::Choice => GadgetKind::Choice,
        }
    }
}

/// Trace file written next to a compiled b2cl instance.
#[derive(Serialize, Deserialize)]
pub struct B2clTraceFile {
    pub trace: ClTrace,
    pub params: CompilationParams,
}

/// Prints `msg` and the synopsis, then exits with status 2.
pub fn usage(msg: &str) -> ! {
    let msg = msg.trim_end();
    eprintln!("{msg}");
    if !msg.contains("Usage:") {
        eprintln!("\n{}", Cli::command().render_usage());
    }
    std::process::exit(2)
}

/// Parses the command line. Help and version requests exit 0, anything
/// else clap rejects is a usage error.
pub fn parse() -> Cli {
    Cli::try_parse().unwrap_or_else(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => e.exit(),
        _ => usage(&e.render().to_string()),
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    files.push(path.display().to_string());
    Ok(())
}

fn print(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON output"));
}

fn apply_variant(
    std: &ClInstance,
    trace: &ClTrace,
    params: &CompilationParams,
    variant: Variant,
) -> Result<(ClInstance, ClTrace)> {
    if variant == Variant::Standard {
        return Ok((std.clone(), trace.clone()));
    }
    let (bb, bt) = to_builder_blocker(std, trace, params)?;
    Ok(match variant {
        Variant::Bbb2cl => (bb, bt),
        Variant::Npb2cl => to_normal_play(&bb, &bt, params)?,
        Variant::Mpb2cl => to_misere_play(&bb, &bt, params)?,
        Variant::Standard => unreachable!(),
    })
}

/// Runs one command. `Err` means a domain error (exit 1).
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveArck { input } => {
            let pos = decode_position(&read(&input)?)?;
            let r = solve_with(&pos, &SolverConfig { parallel: true, ..SolverConfig::default() })?;
            print(&r);
        }
        Command::SolveCl { input } => {
            let inst = decode_instance(&read(&input)?)?;
            print(&solve_cl(&inst)?);
        }
        Command::SolvePoscnf { input, first } => {
            let f = parse_formula(&read(&input)?)?;
            let side = match first {
                FirstSide::True => Side::True,
                FirstSide::False => Side::False,
            };
            print(&solve_poscnf(&PosCnfGame::new(f, side)));
        }
        Command::Compile {
            input,
            from,
            to,
            variant,
            backend,
            embedding,
            trace,
            odd_variables,
            red_components,
            out,
        } => {
            if from == Source::B2cl && to == Target::B2cl && variant != Variant::Standard && trace.is_none() {
                usage("--from b2cl --to b2cl with a variant needs --trace");
            }
            if to == Target::B2cl && embedding.is_some() {
                usage("--embedding only applies to --to arck");
            }
            let text = read(&input)?;
            let (inst, cl_trace) = match from {
                Source::Poscnf => {
                    let (std, t, params) = compile_poscnf_to_b2cl(&parse_formula(&text)?);
                    let (inst, t) = apply_variant(&std, &t, &params, variant)?;
                    (inst, Some(B2clTraceFile { trace: t, params }))
                }
                Source::B2cl => {
                    let inst = decode_instance(&text)?;
                    match &trace {
                        Some(p) if variant != Variant::Standard => {
                            let file: B2clTraceFile = serde_json::from_str(&read(p)?)?;
                            let (inst, t) = apply_variant(&inst, &file.trace, &file.params, variant)?;
                            (inst, Some(B2clTraceFile { trace: t, params: file.params }))
                        }
                        _ => (inst, None),
                    }
                }
            };
            let report = validate_instance(&inst);
            if !report.is_valid() {
                bail!("compiled instance does not validate: {report:?}");
            }
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut files = Vec::new();
            match to {
                Target::B2cl => {
                    write(&out, "instance.json", &encode_instance(&inst), &mut files)?;
                    if let Some(t) = cl_trace {
                        write(&out, "trace.json", &serde_json::to_string_pretty(&t)?, &mut files)?;
                    }
                    print(&json!({ "files": files, "variant": inst.variant, "edges": inst.edges.len() }));
                }
                Target::Arck => {
                    let emb: Option<Embedding> = match &embedding {
                        Some(p) => Some(serde_json::from_str(&read(p)?)?),
                        None => None,
                    };
                    let inst = match odd_variables {
                        OddVariables::Pad => pad_variables(&inst),
                        _ => inst,
                    };
                    let options = ArcKCompileOptions {
                        red_components: match red_components {
                            RedComponents::Isolated => RedComponentLowering::Isolated,
                            RedComponents::Omit => RedComponentLowering::Omit,
                        },
                        allow_odd_variables: matches!(odd_variables, OddVariables::Allow),
                    };
                    let (pos, t) = compile_b2cl_to_arck_with(&inst, backend.into(), emb.as_ref(), &options)?;
                    let budget = red_budget(&t)?;
                    write(&out, "position.json", &encode_position(&pos), &mut files)?;
                    write(&out, "trace.json", &encode_trace(&t), &mut files)?;
                    write(&out, "budget.json", &serde_json::to_string_pretty(&budget)?, &mut files)?;
                    print(&json!({
                        "files": files,
                        "gadgets": t.instances.len(),
                        "edges": pos.graph.edge_count(),
                        "balanced": budget.balanced,
                    }));
                }
            }
        }
        Command::Verify { kind, backend } => {
            let filter = (kind.is_some() || backend.is_some()).then(|| (kind.map(Into::into), backend.map(Into::into)));
            let report = verify_matrix(filter)?;
            eprint!("{report}");
            print(&report);
            if !report.passed() {
                bail!("gadget verification failed");
            }
        }
        Command::Export { dot: _, input } => {
            let text = read(&input)?;
            let dot = if let Ok(pos) = decode_position(&text) {
                graph::to_dot(&pos.graph)
            } else if let Ok(inst) = decode_instance(&text) {
                arck_core::cl::to_dot(&inst)
            } else {
                graph::to_dot(&graph::decode(&text).context("input is not a position, instance or graph")?)
            };
            print!("{dot}");
        }
        Command::Serve { port, position } => {
            let pos = match &position {
                Some(p) => Some(decode_position(&read(p)?)?),
                None => None,
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
                eprintln!("serving on http://{}", listener.local_addr()?);
                axum::serve(listener, server::router(pos)).await?;
                Ok::<_, anyhow::Error>(())
            })?;
        }
    }
    Ok(())
}
