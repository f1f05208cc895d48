use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "wgl", version, about = "comparison-game solver and sorting toolbox")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Solver-facing knobs shared by several subcommands. Defaults come from
/// the built-in configuration, overridden by the file named in WGL_CONFIG,
/// overridden by explicit flags.
#[derive(Args, Debug, Clone)]
pub struct SolverOpts {
    /// Adjacency for reintroductions: any | successor
    #[arg(long)]
    pub adjacency: Option<String>,
    /// Allow a reintroduction chain before answering a tap
    #[arg(long)]
    pub reintro_on_remove: bool,
    /// Disable symmetry reduction
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    pub node_cap: Option<usize>,
    #[arg(long)]
    pub time_cap_millis: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output format: json | csv | dot | text
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide the winner for one parameter point and print the result
    Solve {
        #[arg(long)]
        k: u8,
        /// Comma-separated factor cardinalities, e.g. 2,2
        #[arg(long)]
        factors: String,
        #[command(flatten)]
        opts: SolverOpts,
    },
    /// Solve a grid of parameter points and print a winner table
    Sweep {
        /// Range of box budgets, e.g. 1..3 (inclusive) or a single number
        #[arg(long)]
        k: String,
        /// Semicolon-separated factor families, e.g. "2;2,2;2,2,2"
        #[arg(long)]
        factors: String,
        #[command(flatten)]
        opts: SolverOpts,
    },
    /// Witness synthesis from winning strategies
    Witness {
        #[command(subcommand)]
        command: WitnessCommand,
    },
    /// Sorting pipeline operations on eventually constant sequences
    Sort {
        #[command(subcommand)]
        command: SortCommand,
    },
    /// The finite-stage priority construction
    Diag {
        #[command(subcommand)]
        command: DiagCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// Simulate the reduction extracted from a Player 2 win
    P2 {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        factors: String,
        /// Input level tree (JSON file)
        #[arg(long)]
        tree: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        opts: SolverOpts,
    },
    /// Build an adversarial input from a Player 1 win
    P1 {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        factors: String,
        /// Opponent table (JSON file)
        #[arg(long)]
        opponent: String,
        /// Outer table (JSON file)
        #[arg(long)]
        outer: Option<String>,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        opts: SolverOpts,
    },
}

#[derive(Subcommand, Debug)]
pub enum SortCommand {
    /// Sort one eventually constant sequence
    Eval {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        tail: u8,
    },
    /// Partial sort of a finite string below a symbol
    Usort {
        #[arg(long)]
        eta: String,
        #[arg(long)]
        u: u8,
        /// Alphabet size (defaults to the largest symbol + 1)
        #[arg(long)]
        k: Option<u8>,
    },
    /// Skip zeros, decrement, and report the zero count
    Strip {
        #[arg(long)]
        d: u8,
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        tail: u8,
    },
    /// Sort a binary sequence through the connected-component problem
    ViaFcc {
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        tail: u8,
    },
    /// Split a sequence into binary components and recombine
    Product {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long)]
        tail: u8,
    },
    /// Encode a graph instance for sorting and decode the component of 0
    Fcc {
        /// Edge-list file
        #[arg(long)]
        graph: String,
    },
    /// Convex choice in dimension one through sorting
    Xc1 {
        /// Interval stream file: one "a b" rational pair per line
        #[arg(long)]
        intervals: String,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DiagCommand {
    /// Run the stage construction and check its invariants
    Run {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        alpha: String,
        /// Monotone table file (JSON list of {input, tail, output})
        #[arg(long)]
        phi: String,
        #[arg(long)]
        stages: usize,
        /// Dump the full stage history as JSON
        #[arg(long)]
        dump: bool,
    },
}
