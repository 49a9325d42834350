//! `divseries`: Poincaré series of divisorial filtrations from the command line.
//!
//! Exit status is 0 on success, 1 when a check disagrees or finds a
//! violation, 2 on invalid input and 3 when an order cannot be certified.
//! On every nonzero status each output line starts with `ERROR: `.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "divseries", version, about = "Exact Poincaré series of divisorial filtrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OrderArgs {
    /// Truncation order (total degree).
    #[arg(long, env = "DIVSERIES_ORDER", default_value_t = 20)]
    order: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poincaré series of a 2-dimensional cone under a weight vector.
    ToricPoincare {
        /// Cyclic quotient cone spanned by (1,0) and (q,n).
        #[arg(long, num_args = 2, value_names = ["N", "Q"], conflicts_with = "cone")]
        cyclic: Option<Vec<i64>>,
        /// Cone file: {"cyclic": [n, q]} or {"gen1": [a, b], "gen2": [c, d]}.
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Weight vector a,b; repeat for a multi-index filtration.
        #[arg(long, value_parser = commands::parse_weight, conflicts_with = "m")]
        weight: Vec<[i64; 2]>,
        /// Shorthand for --weight 1,M.
        #[arg(long)]
        m: Option<i64>,
        #[command(flatten)]
        order: OrderArgs,
        /// Write the enumerated series in golden format.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Topological series Z_o of a plumbing graph.
    Zo {
        /// Graph file: {"vertices": [...], "edges": [[i, j]], "arrows": {"v": k}}.
        #[arg(conflicts_with = "cyclic")]
        graph: Option<PathBuf>,
        /// Hirzebruch-Jung chain of the cyclic quotient, arrow on vertex 0.
        #[arg(long, num_args = 2, value_names = ["N", "Q"])]
        cyclic: Option<Vec<i64>>,
        /// Blow up this many times at the arrow.
        #[arg(long, default_value_t = 0)]
        blowups: u32,
        /// Specialize every other variable to 1, keeping this one.
        #[arg(long)]
        reduce: Option<String>,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Order of a polynomial along the exceptional divisor of a blow-up chain.
    BlowupVal {
        #[arg(long)]
        poly: String,
        /// The quadric cone xy - z^2 with M extra blow-ups.
        #[arg(long, conflicts_with_all = ["script", "branch"])]
        quadric: Option<u32>,
        /// Script file of blowup and change steps.
        #[arg(long, conflicts_with = "branch")]
        script: Option<PathBuf>,
        /// Dimension for a script file given as a bare list of steps.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Plane branch file: {"coords": [[[k, c], ...], ...], "precision": p}.
        #[arg(long, requires = "m")]
        branch: Option<PathBuf>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Poincaré series of the quadric cone after M extra blow-ups.
    HypPoincare {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Stabilization of the filtrations and convergence of their series.
    Converge {
        #[arg(long, num_args = 2, value_names = ["N", "Q"], conflicts_with_all = ["quadric", "branch"])]
        toric: Option<Vec<i64>>,
        #[arg(long, conflicts_with = "branch")]
        quadric: bool,
        #[arg(long)]
        branch: Option<PathBuf>,
        #[command(flatten)]
        order: OrderArgs,
        /// Largest family member; defaults to the order.
        #[arg(long)]
        mmax: Option<u32>,
        /// Print every sandwich line, not only the failing ones.
        #[arg(long)]
        verbose: bool,
    },
    /// Expand a rational expression such as "(1 + t)/(1 - t)^2".
    Expand {
        expr: String,
        /// Comma separated variable names.
        #[arg(long, default_value = "t")]
        vars: String,
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::ToricPoincare {
            cyclic,
            cone,
            weight,
            m,
            order,
            output,
        } => commands::toric_poincare(cyclic, cone, weight, m, order.order, output),
        Command::Zo {
            graph,
            cyclic,
            blowups,
            reduce,
            order,
            output,
        } => commands::zo(graph, cyclic, blowups, reduce, order.order, output),
        Command::BlowupVal {
            poly,
            quadric,
            script,
            dim,
            branch,
            m,
        } => commands::blowup_val(&poly, quadric, script, dim, branch, m),
        Command::HypPoincare { m, order, output } => commands::hyp_poincare(m, order.order, output),
        Command::Converge {
            toric,
            quadric,
            branch,
            order,
            mmax,
            verbose,
        } => commands::converge(toric, quadric, branch, order.order, mmax, verbose),
        Command::Expand {
            expr,
            vars,
            order,
            output,
        } => commands::expand(&expr, &vars, order.order, output),
    }
}

fn emit(text: &str, status: u8) -> ExitCode {
    if status == 0 {
        print!("{text}");
    } else {
        for line in text.lines() {
            println!("ERROR: {line}");
        }
    }
    ExitCode::from(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return emit(&e.to_string(), 2),
    };
    match run(cli) {
        Ok(out) => emit(&out.text, out.status),
        Err(e) => emit(&e.message, e.status),
    }
}
