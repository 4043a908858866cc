//! Command-line front end: `construct`, `verify` and `simulate`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::claims::{run_all, verify_code, ClaimConfig};
use crate::codes::{text::to_text, CodeName};
use crate::error::{Error, Result};
use crate::sim::{run_cer, Constellation, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "perfect-stbc", version, about = "Perfect space-time block codes: construction, verification, simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and print its description and generator matrix.
    Construct {
        /// golden, 2x2, 2x2:<p>, 3x3, 4x4, 6x6 or 2x2:17-broken
        code: String,
        /// Prime for the 2x2 family (with code `2x2`).
        #[arg(long)]
        p: Option<u64>,
        /// Write the description to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the algebraic claims for one code, or every acceptance criterion.
    Verify {
        /// A code name or `all`.
        target: String,
        /// Symbol box radius for the minimum-determinant search.
        #[arg(long, default_value_t = 1)]
        radius: i64,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Cap on determinant evaluations for exhaustive search.
        #[arg(long, default_value_t = crate::verify::DEFAULT_BUDGET)]
        budget: u128,
        /// Random vectors when the box is too large to enumerate.
        #[arg(long, default_value_t = 1_000_000)]
        random_vectors: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Codeword error rate versus Eb/N0, written as CSV.
    Simulate {
        #[arg(long)]
        code: String,
        /// qam4, qam8, qam16, qam64, hex4, hex8 or hex16
        #[arg(long)]
        constellation: String,
        /// Comma-separated Eb/N0 values in dB.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        ebn0: Vec<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_codewords: u64,
        #[arg(long, default_value_t = 100)]
        target_errors: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Process exit status for a finished command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

fn parse_code(code: &str, p: Option<u64>) -> Result<CodeName> {
    match (code.trim().to_ascii_lowercase().as_str(), p) {
        ("2x2", Some(p)) => Ok(if p == 5 { CodeName::Golden } else { CodeName::TwoByTwo(p) }),
        ("2x2", None) => Err(Error::InvalidArgument("code 2x2 needs --p <prime>".into())),
        (_, Some(_)) => Err(Error::InvalidArgument("--p only applies to code 2x2".into())),
        (_, None) => code.parse(),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Run a parsed command; errors are printed and mapped to exit codes.
pub fn run(cli: Cli) -> Exit {
    match execute(cli) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnknownCode(_) | Error::UnknownConstellation(_) | Error::InvalidArgument(_) => Exit::Usage,
                _ => Exit::Failure,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<Exit> {
    match cli.command {
        Command::Construct { code, p, out } => {
            let name = parse_code(&code, p)?;
            let spec = name.build().map_err(|e| match e {
                Error::UnsupportedPrime { p: 17, reason } => Error::UnsupportedPrime {
                    p: 17,
                    reason: format!("{reason}; request 2x2:17-broken for the non-perfect comparison code"),
                },
                other => other,
            })?;
            emit(&to_text(&spec), out.as_ref())?;
            Ok(Exit::Success)
        }
        Command::Verify { target, radius, report, budget, random_vectors, seed } => {
            if radius < 1 {
                return Err(Error::InvalidArgument("--radius must be at least 1".into()));
            }
            let cfg = ClaimConfig { radius, budget, random_vectors, seed, ..ClaimConfig::default() };
            let (text, passed) = if target.trim().eq_ignore_ascii_case("all") {
                let mut text = String::new();
                let mut passed = true;
                for c in run_all(&cfg) {
                    println!("{}", c.line());
                    text.push_str(&c.line());
                    text.push('\n');
                    passed &= c.passed;
                }
                (text, passed)
            } else {
                let r = verify_code(target.parse()?, &cfg)?;
                print!("{}", r.text);
                (r.text, r.passed)
            };
            if let Some(path) = report {
                fs::write(path, &text)?;
            }
            Ok(if passed { Exit::Success } else { Exit::Failure })
        }
        Command::Simulate { code, constellation, ebn0, seed, max_codewords, target_errors, out, threads } => {
            let spec = code.parse::<CodeName>()?.build()?;
            let constellation: Constellation = constellation.parse()?;
            let cfg = SimConfig {
                spec: Arc::new(spec),
                constellation,
                ebn0_db: ebn0,
                max_codewords,
                target_errors,
                seed,
            };
            cfg.validate()?;
            let result = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                    .install(|| run_cer(&cfg))?,
                None => run_cer(&cfg)?,
            };
            result.write_csv(fs::File::create(&out)?)?;
            for p in &result.points {
                println!("Eb/N0 {} dB: {} errors in {} codewords (CER {:.3e})", p.ebn0_db, p.errors, p.sent, p.cer);
            }
            Ok(Exit::Success)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_parsing() {
        assert_eq!(parse_code("2x2", Some(13)).unwrap(), CodeName::TwoByTwo(13));
        assert_eq!(parse_code("2x2", Some(5)).unwrap(), CodeName::Golden);
        assert_eq!(parse_code("golden", None).unwrap(), CodeName::Golden);
        assert!(parse_code("2x2", None).is_err());
        assert!(parse_code("3x3", Some(7)).is_err());
        assert!(matches!(parse_code("5x5", None), Err(Error::UnknownCode(_))));
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_snr_list() {
        let cli = Cli::try_parse_from([
            "perfect-stbc", "simulate", "--code", "golden", "--constellation", "qam4", "--ebn0", "-2,0,2.5", "--seed",
            "1", "--out", "x.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Simulate { ebn0, .. } => assert_eq!(ebn0, vec![-2.0, 0.0, 2.5]),
            _ => panic!(),
        }
    }
}
