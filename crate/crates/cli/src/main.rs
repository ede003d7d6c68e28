mod config;
mod output;

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use somass_core::census::{self, oracle_enumerate, OraclePredicate};
use somass_core::equivalence::{classify, family_members, FamilySource};
use somass_core::lifting::{even_lifts_with_one, even_lifts_with_pm1, so_lifts};
use somass_core::verify::{self, CheckReport};
use somass_core::{CodeZp2, Error, Family, FpCode, MatrixText};

use config::{Cli, Command, JobConfig, Mode};

/// Process exit statuses.
mod exit {
    pub const OK: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const UNCERTIFIED: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const BUDGET: u8 = 69;
}

fn error_status(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => exit::BUDGET,
        Error::Parse { .. } | Error::Shape(_) | Error::Precondition(_) => exit::DATA,
        Error::InvalidModulus(_) | Error::Domain(_) => exit::USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match JobConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(exit::USAGE);
        }
    };
    if let Some(w) = cfg.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: cannot start {w} workers: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }
    let mut out = io::stdout().lock();
    let status = match run(&cfg, &mut out) {
        Ok(s) => s,
        Err(RunError::Core(e)) => {
            eprintln!("error: {e}");
            error_status(&e)
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            exit::USAGE
        }
        Err(RunError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => exit::OK,
        Err(RunError::Io(e)) => {
            eprintln!("error: {e}");
            exit::DATA
        }
    };
    let _ = out.flush();
    ExitCode::from(status)
}

enum RunError {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Io(e.into())
    }
}

type Run<T> = std::result::Result<T, RunError>;

fn run(cfg: &JobConfig, out: &mut dyn Write) -> Run<u8> {
    match &cfg.command {
        Command::Mass => cmd_mass(cfg, out),
        Command::Enumerate { mode } => cmd_enumerate(cfg, mode, out),
        Command::Classify { oracle } => cmd_classify(cfg, *oracle, out),
        Command::Verify { mode } => cmd_verify(cfg, mode, out),
    }
}

fn need_n(cfg: &JobConfig) -> Run<usize> {
    cfg.n.ok_or_else(|| RunError::Usage("-n is required".into()))
}

fn cmd_mass(cfg: &JobConfig, out: &mut dyn Write) -> Run<u8> {
    let report = census::mass(cfg.family, cfg.p, need_n(cfg)?, cfg.k1, cfg.k2)?;
    output::mass(cfg.format, &report, out)?;
    Ok(exit::OK)
}

fn read_matrix(path: &str) -> Run<MatrixText> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| RunError::Usage(format!("cannot read {path}: {e}")))?
    };
    Ok(MatrixText::parse(&text)?)
}

fn write_codes(codes: impl Iterator<Item = CodeZp2>, out: &mut dyn Write) -> Run<u64> {
    let mut count = 0u64;
    for c in codes {
        if count > 0 {
            writeln!(out)?;
        }
        write!(out, "{}", MatrixText::from_matrix(c.gens()))?;
        count += 1;
    }
    if count > 0 {
        writeln!(out)?;
    }
    writeln!(out, "# count {count}")?;
    Ok(count)
}

fn cmd_enumerate(cfg: &JobConfig, mode: &Mode, out: &mut dyn Write) -> Run<u8> {
    match mode {
        Mode::Lifts { residue, torsion } => {
            let c1: FpCode = read_matrix(residue)?.to_fp_code()?;
            let c2 = match torsion {
                Some(t) => read_matrix(t)?.to_fp_code()?,
                None => c1.clone(),
            };
            match cfg.family {
                Family::SelfOrthogonal => {
                    write_codes(so_lifts(&c1, &c2)?.codes(), out)?;
                }
                Family::EvenWithOne => {
                    write_codes(even_lifts_with_one(&c1, &c2)?.codes(), out)?;
                }
                Family::EvenWithPm1 => {
                    write_codes(even_lifts_with_pm1(&c1, &c2)?.into_iter(), out)?;
                }
                f => {
                    return Err(RunError::Usage(format!(
                        "--lifts needs a fixed-type family (so, even-one, even-pm1), not {f}"
                    )))
                }
            }
        }
        Mode::Oracle => {
            let n = need_n(cfg)?;
            let t = match (cfg.k1, cfg.k2) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => return Err(RunError::Usage("give both --k1 and --k2 or neither".into())),
            };
            let codes = oracle_enumerate(cfg.p, n, OraclePredicate::for_family(cfg.family), t, cfg.budget)?;
            write_codes(codes.into_iter(), out)?;
        }
        Mode::Family => {
            let n = need_n(cfg)?;
            let codes = family_members(cfg.family, cfg.p, n, cfg.k1, cfg.k2, FamilySource::Lifting)?;
            write_codes(codes.into_iter(), out)?;
        }
    }
    Ok(exit::OK)
}

fn cmd_classify(cfg: &JobConfig, oracle: bool, out: &mut dyn Write) -> Run<u8> {
    let source = if oracle {
        FamilySource::Oracle(cfg.budget)
    } else {
        FamilySource::Lifting
    };
    let res = classify(cfg.p, need_n(cfg)?, cfg.family, cfg.k1, cfg.k2, source)?;
    output::classification(cfg.format, &res, out)?;
    Ok(if res.certified { exit::OK } else { exit::UNCERTIFIED })
}

fn print_checks(cfg: &JobConfig, checks: &[CheckReport], out: &mut dyn Write) -> Run<u8> {
    output::checks(cfg.format, checks, out)?;
    // Timings vary between runs, so they stay off stdout.
    for c in checks {
        eprintln!("criterion {}: {:.1}s", c.id, c.elapsed.as_secs_f64());
    }
    Ok(if checks.iter().all(|c| c.passed()) {
        exit::OK
    } else {
        exit::MISMATCH
    })
}

fn cmd_verify(cfg: &JobConfig, mode: &config::VerifyMode, out: &mut dyn Write) -> Run<u8> {
    use config::VerifyMode;
    let checks = match mode {
        VerifyMode::Grid(grid) => verify::run_all(*grid, cfg.budget, cfg.seed)?,
        VerifyMode::WorkedExample => vec![verify::check_worked_example()?],
        VerifyMode::Maps { map, m, n, trials } => {
            vec![verify::check_map_config(cfg.p, *m, *n, *map, *trials, cfg.seed)?]
        }
    };
    print_checks(cfg, &checks, out)
}
