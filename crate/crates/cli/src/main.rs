//! Command-line front end for symtree.
//!
//! Exit codes: 0 success or valid input, 1 internal error, 2 unreadable or
//! malformed input, 3 invalid relation or metric, 4 not realizable.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod report;

use report::{Failure, Outcome};

#[derive(Parser)]
#[command(
    name = "symtree",
    version,
    about = "Rare-event relations and symbolic ternary metrics on trees"
)]
struct Cli {
    /// Write data here instead of standard output.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the zero/single-1 relation of an edge-labeled tree.
    DeriveRelation {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_enum, default_value = "sym")]
        mode: ModeArg,
    },
    /// Derive the ternary map of a dated tree.
    DeriveTernary {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
    },
    /// Validate a relation file.
    CheckRelation {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Validate a ternary map file.
    CheckTernary {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Also require every constant 4-set to be resolved.
        #[arg(long)]
        require_binary: bool,
    },
    /// Rebuild the minimally resolved tree explaining a relation.
    ReconstructRelation {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Emit every binary tree explaining the relation.
        #[arg(long)]
        all_binary: bool,
        /// With --all-binary, accept a degree-2 root for two components.
        #[arg(long)]
        allow_degree2_root: bool,
        /// Root of a directed reconstruction: `hub` or a source taxon.
        #[arg(long, value_name = "ROOT")]
        root: Option<String>,
    },
    /// Rebuild the dated tree realizing a ternary map.
    ReconstructTernary {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// List the quartets displayed by a tree or generated by a ternary map.
    Quartets(QuartetSource),
    /// Rebuild a tree from its quartet system.
    QuartetTree {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// List the admissible roots of a relation with unknown directions.
    Roots {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Exhaustive enumeration for small instances.
    Dev {
        #[command(subcommand)]
        command: DevCommand,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct QuartetSource {
    #[arg(long, value_name = "FILE")]
    tree: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    ternary: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DevCommand {
    #[command(subcommand)]
    Enumerate(Enumerate),
}

#[derive(Subcommand)]
enum Enumerate {
    /// Phylogenetic trees on a taxa set.
    Trees {
        #[arg(long, value_delimiter = ',', required = true)]
        taxa: Vec<String>,
        #[arg(long)]
        count: bool,
    },
    /// All 0/1 labelings of a tree.
    Labelings {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        count: bool,
    },
    /// All datings of a tree over a color alphabet.
    Datings {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        colors: Vec<String>,
        #[arg(long)]
        discriminating: bool,
        #[arg(long)]
        count: bool,
    },
    /// Every small labeled tree explaining a relation.
    Explainers {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Vertex bound; defaults to 2n+2.
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Also admit one unrooted degree-2 vertex.
        #[arg(long)]
        relaxed: bool,
        #[arg(long)]
        count: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sym,
    Dir,
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let res = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    res.map_err(|e| Failure::Syntax(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command) -> Outcome {
    let text = |p: &Path| read_input(p);
    let result = match cmd {
        Command::DeriveRelation { tree, mode } => {
            text(&tree).and_then(|t| report::derive_relation(&t, matches!(mode, ModeArg::Dir)))
        }
        Command::DeriveTernary { tree } => text(&tree).and_then(|t| report::derive_ternary(&t)),
        Command::CheckRelation { input } => text(&input).and_then(|t| report::check_relation(&t)),
        Command::CheckTernary {
            input,
            require_binary,
        } => text(&input).and_then(|t| report::check_ternary(&t, require_binary)),
        Command::ReconstructRelation {
            input,
            all_binary,
            allow_degree2_root,
            root,
        } => text(&input).and_then(|t| {
            report::reconstruct_relation(&t, all_binary, allow_degree2_root, root.as_deref())
        }),
        Command::ReconstructTernary { input } => {
            text(&input).and_then(|t| report::reconstruct_ternary(&t))
        }
        Command::Quartets(src) => match (src.tree, src.ternary) {
            (Some(p), _) => text(&p).and_then(|t| report::quartets_of_tree(&t)),
            (None, Some(p)) => text(&p).and_then(|t| report::quartets_of_ternary(&t)),
            (None, None) => Err(Failure::Syntax("need --tree or --ternary".into())),
        },
        Command::QuartetTree { input } => text(&input).and_then(|t| report::quartet_tree(&t)),
        Command::Roots { input } => text(&input).and_then(|t| report::roots(&t)),
        Command::Dev {
            command: DevCommand::Enumerate(e),
        } => match e {
            Enumerate::Trees { taxa, count } => report::enumerate_trees(&taxa, count),
            Enumerate::Labelings { tree, count } => {
                text(&tree).and_then(|t| report::enumerate_labelings(&t, count))
            }
            Enumerate::Datings {
                tree,
                colors,
                discriminating,
                count,
            } => text(&tree)
                .and_then(|t| report::enumerate_datings(&t, &colors, discriminating, count)),
            Enumerate::Explainers {
                input,
                max_vertices,
                relaxed,
                count,
            } => text(&input)
                .and_then(|t| report::enumerate_explainers(&t, max_vertices, relaxed, count)),
        },
    };
    match result {
        Ok(o) => o,
        Err(f) => f.into_outcome(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = dispatch(cli.command);
    let mut stderr = io::stderr().lock();
    for line in &outcome.diagnostics {
        let _ = writeln!(stderr, "{line}");
    }
    let written = match &cli.output {
        Some(p) => fs::write(p, &outcome.data),
        None => io::stdout().lock().write_all(outcome.data.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code)
}
