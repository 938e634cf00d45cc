use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "macc", version, about = "Multiaccess coded caching from t-designs and t-GDDs")]
pub struct Cli {
    /// Output format; each command picks a default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for file contents and random demands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or load a block design and optionally verify its tag.
    Design(DesignCmd),
    /// Build or load a group divisible design.
    Gdd(GddCmd),
    /// Build or load an orthogonal array.
    Oa(OaCmd),
    /// Build or load a PDA and verify it.
    Pda(PdaCmd),
    /// Build the three arrays of a multiaccess scheme.
    Scheme(SchemeCmd),
    /// Place, deliver and decode on synthetic files.
    Simulate(SimulateCmd),
    /// Emit comparison tables and curve data.
    Tables(TablesCmd),
    /// Verify the claims of a JSON object.
    Verify(VerifyCmd),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct DesignCmd {
    /// Catalog name, e.g. fano-7-3-1.
    #[arg(long, group = "source")]
    pub catalog: Option<String>,
    /// All L-subsets of [Γ], given as Γ,L.
    #[arg(long, group = "source", value_parser = parse_list::<2>)]
    pub complete: Option<[u32; 2]>,
    /// JSON file.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Verify the design's tag and fail if it does not hold.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct GddCmd {
    /// Transversal t-GDD with all t-blocks, given as m,q,t.
    #[arg(long, group = "source", value_parser = parse_list::<3>)]
    pub transversal: Option<[u32; 3]>,
    /// Dual of the zero-sum OA(m,q,m−1), given as m,q.
    #[arg(long, group = "source", value_parser = parse_list::<2>)]
    pub dual_parity: Option<[u32; 2]>,
    /// JSON file.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct OaCmd {
    /// All q^m vectors, given as m,q.
    #[arg(long, group = "source", value_parser = parse_list::<2>)]
    pub trivial: Option<[u32; 2]>,
    /// Zero-sum vectors of length m, given as m,q.
    #[arg(long, group = "source", value_parser = parse_list::<2>)]
    pub parity: Option<[u32; 2]>,
    /// Evaluations of polynomials of degree < s over prime q, given as m,q,s.
    #[arg(long, group = "source", value_parser = parse_list::<3>)]
    pub linear: Option<[u32; 3]>,
    /// Catalog name, e.g. example-3-2-2.
    #[arg(long, group = "source")]
    pub catalog: Option<String>,
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct PdaCmd {
    /// Coded caching PDA with K users and t-subset rows, given as K,t.
    #[arg(long, group = "source", value_parser = parse_list::<2>)]
    pub mn: Option<[u32; 2]>,
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OaKind {
    /// Trivial OA when s=m, zero-sum OA when s=m−1.
    Trivial,
    Parity,
    Linear,
    /// The three-column binary example array.
    Example,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("topology").required(true)))]
pub struct Topology {
    /// Catalog design.
    #[arg(long, group = "topology")]
    pub design: Option<String>,
    /// Complete design Γ,L.
    #[arg(long, group = "topology", value_parser = parse_list::<2>)]
    pub complete: Option<[u32; 2]>,
    /// Design JSON file.
    #[arg(long, group = "topology")]
    pub design_file: Option<PathBuf>,
    /// Transversal GDD m,q,t.
    #[arg(long, group = "topology", value_parser = parse_list::<3>)]
    pub gdd_transversal: Option<[u32; 3]>,
    /// Dual of the zero-sum OA(m,q,m−1), with t = m−1.
    #[arg(long, group = "topology", value_parser = parse_list::<2>)]
    pub gdd_dual_parity: Option<[u32; 2]>,
    /// GDD JSON file; needs --t.
    #[arg(long, group = "topology")]
    pub gdd_file: Option<PathBuf>,
    /// Nodes cached per packet (design schemes).
    #[arg(long)]
    pub mu_gamma: Option<u32>,
    /// OA used for GDD placement.
    #[arg(long, value_enum)]
    pub oa: Option<OaKind>,
    /// OA JSON file used for GDD placement.
    #[arg(long, conflicts_with = "oa")]
    pub oa_file: Option<PathBuf>,
    /// OA strength.
    #[arg(long)]
    pub s: Option<u32>,
    /// Strength t for a GDD read from file.
    #[arg(long)]
    pub t: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SchemeCmd {
    #[command(flatten)]
    pub topology: Topology,
    /// Write the JSON bundle here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plain,
    Mds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemandArg {
    /// d = (1, …, K).
    Distinct,
    /// Seeded uniform demands.
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    #[command(flatten)]
    pub topology: Topology,
    /// Number of files N; defaults to K.
    #[arg(long)]
    pub files: Option<usize>,
    #[arg(long, default_value_t = macc::simulator::DEFAULT_PACKET_LEN)]
    pub packet_len: usize,
    #[arg(long, value_enum, default_value = "plain")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "distinct")]
    pub demands: DemandArg,
    /// Demand vectors to run in random mode.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Write the binary transcript of the first run here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Table4,
    Fig3,
    Fig4,
}

#[derive(Debug, Args)]
pub struct TablesCmd {
    #[arg(value_enum)]
    pub which: Which,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    pub path: PathBuf,
}

fn parse_list<const N: usize>(s: &str) -> Result<[u32; N], String> {
    let values: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<u32>| format!("expected {N} comma-separated integers, got {}", v.len()))
}
