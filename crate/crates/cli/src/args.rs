use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "preclude",
    version,
    about = "Matching preclusion numbers with exact rationals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional matching preclusion number, cross-checked across pipelines.
    Mpf {
        #[command(flatten)]
        graph: GraphArgs,
        /// auto, all, or one pipeline name.
        #[arg(long, default_value = "auto")]
        method: String,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Matching preclusion number with a minimum deletion set.
    Mp {
        #[command(flatten)]
        graph: GraphArgs,
        /// auto (both pipelines), enumeration, or hitting_search.
        #[arg(long, default_value = "auto")]
        method: String,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Largest k-factor of a bipartite graph against the floor of mp_f.
    Kfactor {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Builds g □ h and compares the product formula, direct pipelines and the lower bound.
    Product {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        h: HGraphArgs,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Writes a generated graph in edge-list format.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs every cross-pipeline invariant over the built-in corpus.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Random graphs per even order above 6.
        #[arg(long, default_value_t = 150)]
        sample: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Generator family (gk, complete_bipartite, complete, cycle, path, hypercube,
    /// random_regular_bipartite, random_tree, random_bipartite, random_connected).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Order, side size, cycle length or hypercube dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Second side size.
    #[arg(long)]
    pub m: Option<usize>,
    /// Degree.
    #[arg(long)]
    pub r: Option<usize>,
    /// Edge percentage for random families.
    #[arg(long)]
    pub p: Option<usize>,
    /// Explicit comma-separated parameter list, overriding the named flags.
    #[arg(long, value_delimiter = ',')]
    pub params: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct HGraphArgs {
    #[arg(long = "h-input", conflicts_with = "h_family")]
    pub h_input: Option<PathBuf>,
    #[arg(long = "h-family")]
    pub h_family: Option<String>,
    #[arg(long = "h-k")]
    pub h_k: Option<usize>,
    #[arg(long = "h-n")]
    pub h_n: Option<usize>,
    #[arg(long = "h-m")]
    pub h_m: Option<usize>,
    #[arg(long = "h-r")]
    pub h_r: Option<usize>,
    #[arg(long = "h-p")]
    pub h_p: Option<usize>,
    #[arg(long = "h-params", value_delimiter = ',')]
    pub h_params: Option<Vec<usize>>,
    #[arg(long = "h-seed")]
    pub h_seed: Option<u64>,
}

impl HGraphArgs {
    pub fn as_graph_args(&self) -> GraphArgs {
        GraphArgs {
            input: self.h_input.clone(),
            family: self.h_family.clone(),
            k: self.h_k,
            n: self.h_n,
            m: self.h_m,
            r: self.h_r,
            p: self.h_p,
            params: self.h_params.clone(),
            seed: self.h_seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CapArgs {
    #[arg(long, default_value_t = preclude_core::matching::DEFAULT_MATCHING_CAP, value_parser = positive)]
    pub matching_cap: usize,
    #[arg(long, default_value_t = preclude_core::graph::DEFAULT_ODD_CUT_CAP, value_parser = positive)]
    pub oddcut_cap: usize,
    /// Largest |A|+|B| searched exhaustively by the closed forms.
    #[arg(long, default_value_t = 24, value_parser = positive)]
    pub subset_cap: usize,
}

impl CapArgs {
    pub fn limits(&self) -> preclude_core::Limits {
        preclude_core::Limits {
            matching_cap: self.matching_cap,
            odd_cut_cap: self.oddcut_cap,
            subset_cap: self.subset_cap.min(40),
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}
