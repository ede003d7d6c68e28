//! Command-line arguments and the validated job configuration built from them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use somass_core::census::{OracleBudget, DEFAULT_ORACLE_AMBIENT};
use somass_core::lifting::MatrixMap;
use somass_core::verify::Grid;
use somass_core::Family;

#[derive(Parser, Debug)]
#[command(name = "somass", version, about = "Count, enumerate and classify self-orthogonal codes over Z/p^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,

    /// Output format (default: text, or json for classify).
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,

    /// Worker threads (default: available parallelism). Never changes results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,

    /// Largest ambient size p^(2n) the exhaustive oracle will sweep.
    #[arg(long, global = true, env = "SOMASS_ORACLE_BUDGET", default_value_t = DEFAULT_ORACLE_AMBIENT)]
    pub budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    /// Code family: so, self-dual, even-one, even-pm1, type2-one, type2-pm1.
    #[arg(long, default_value = "so", value_parser = parse_family)]
    pub family: Family,

    /// The prime p (codes live over Z/p^2).
    #[arg(short = 'p', default_value_t = 2)]
    pub p: u64,

    /// Code length.
    #[arg(short = 'n')]
    pub n: Option<usize>,

    /// Residue dimension.
    #[arg(long)]
    pub k1: Option<usize>,

    /// Torsion dimension minus residue dimension.
    #[arg(long)]
    pub k2: Option<usize>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: somass_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Closed-form number of codes in a family.
    Mass(#[command(flatten)] Params),

    /// List codes, one generator matrix per block.
    Enumerate {
        #[command(flatten)]
        params: Params,

        /// All codes with the residue (and torsion) read from matrix files.
        #[arg(long, requires = "residue", conflicts_with = "oracle")]
        lifts: bool,

        /// Residue code generator matrix file, `-` for stdin.
        #[arg(long)]
        residue: Option<String>,

        /// Torsion code generator matrix file (default: the residue).
        #[arg(long)]
        torsion: Option<String>,

        /// Use the exhaustive sweep instead of the constructive enumerators.
        #[arg(long)]
        oracle: bool,
    },

    /// Equivalence classes of a family, certified by the mass identity.
    Classify {
        #[command(flatten)]
        params: Params,

        /// Take the family from the exhaustive sweep.
        #[arg(long)]
        oracle: bool,
    },

    /// Run consistency checks; exit 0 iff all pass.
    Verify {
        /// The acceptance grid.
        #[arg(long, value_enum, conflicts_with_all = ["worked_example", "map"])]
        grid: Option<GridArg>,

        /// The length-4 worked example over Z/9.
        #[arg(long)]
        worked_example: bool,

        /// Image/kernel check of one matrix map on random full-rank matrices.
        #[arg(long, value_enum, requires_all = ["m", "n"])]
        map: Option<MapArg>,

        /// The prime for --map.
        #[arg(short = 'p', default_value_t = 2)]
        p: u64,

        /// Rows of A for --map.
        #[arg(short = 'm')]
        m: Option<usize>,

        /// Columns of A for --map.
        #[arg(short = 'n')]
        n: Option<usize>,

        /// Random matrices per configuration for --map.
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Tsv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridArg {
    Small,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapArg {
    /// A N^t + N A^t.
    Psi,
    /// A N^t + N A^t + Diag(A N^t), p = 2.
    Phi,
    /// Phi together with the row sums of N, p = 2.
    PhiAlpha,
}

#[derive(Debug, Clone)]
pub enum Mode {
    Lifts { residue: String, torsion: Option<String> },
    Oracle,
    Family,
}

#[derive(Debug, Clone)]
pub enum VerifyMode {
    Grid(Grid),
    WorkedExample,
    Maps {
        map: Option<MatrixMap>,
        m: usize,
        n: usize,
        trials: usize,
    },
}

#[derive(Debug, Clone)]
pub enum Command {
    Mass,
    Enumerate { mode: Mode },
    Classify { oracle: bool },
    Verify { mode: VerifyMode },
}

/// Everything a job needs, validated.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: Command,
    pub family: Family,
    pub p: u64,
    pub n: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub budget: OracleBudget,
    pub format: OutputFormat,
    pub workers: Option<usize>,
    pub seed: u64,
}

impl JobConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        if cli.budget == 0 {
            return Err("--budget must be positive".into());
        }
        if cli.workers == Some(0) {
            return Err("--workers must be positive".into());
        }
        let default_format = match cli.command {
            CliCommand::Classify { .. } => OutputFormat::Json,
            _ => OutputFormat::Text,
        };
        let mut cfg = JobConfig {
            command: Command::Mass,
            family: Family::SelfOrthogonal,
            p: 2,
            n: None,
            k1: None,
            k2: None,
            budget: OracleBudget { max_ambient: cli.budget },
            format: cli.format.unwrap_or(default_format),
            workers: cli.workers,
            seed: cli.seed,
        };
        let take = |cfg: &mut JobConfig, p: Params| {
            cfg.family = p.family;
            cfg.p = p.p;
            cfg.n = p.n;
            cfg.k1 = p.k1;
            cfg.k2 = p.k2;
        };
        match cli.command {
            CliCommand::Mass(p) => take(&mut cfg, p),
            CliCommand::Enumerate { params, lifts, residue, torsion, oracle } => {
                take(&mut cfg, params);
                let mode = if lifts {
                    Mode::Lifts {
                        residue: residue.ok_or("--lifts needs --residue")?,
                        torsion,
                    }
                } else if residue.is_some() || torsion.is_some() {
                    return Err("--residue/--torsion are only used with --lifts".into());
                } else if oracle {
                    Mode::Oracle
                } else {
                    Mode::Family
                };
                cfg.command = Command::Enumerate { mode };
            }
            CliCommand::Classify { params, oracle } => {
                take(&mut cfg, params);
                cfg.command = Command::Classify { oracle };
            }
            CliCommand::Verify { grid, worked_example, map, p, m, n, trials } => {
                cfg.p = p;
                let mode = if let Some(map) = map {
                    if trials == 0 {
                        return Err("--trials must be positive".into());
                    }
                    VerifyMode::Maps {
                        map: Some(match map {
                            MapArg::Psi => MatrixMap::Psi,
                            MapArg::Phi => MatrixMap::Phi,
                            MapArg::PhiAlpha => MatrixMap::PhiAlpha,
                        }),
                        m: m.ok_or("--map needs -m")?,
                        n: n.ok_or("--map needs -n")?,
                        trials,
                    }
                } else if worked_example {
                    VerifyMode::WorkedExample
                } else {
                    VerifyMode::Grid(match grid.unwrap_or(GridArg::Small) {
                        GridArg::Small => Grid::Small,
                        GridArg::Full => Grid::Full,
                    })
                };
                cfg.command = Command::Verify { mode };
            }
        }
        Ok(cfg)
    }
}
