use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypercert_core::census::{run_census, Check, CensusConfig};
use hypercert_core::codim::codim_report;
use hypercert_core::{
    analyze_point, check_membership, parse_hypersurface, parse_point, Budget, Envelope, Error, Field, Hypersurface,
    MembershipOptions, Polynomial, Record,
};

mod render;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "hypercert", version, about = "Certify general-position conditions for degree-M hypersurfaces in P^M")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budgets {
    /// Gröbner step budget.
    #[arg(long = "budget-groebner", default_value_t = Budget::default().steps)]
    groebner: u64,
    /// Point enumeration budget.
    #[arg(long = "budget-enum", default_value_t = hypercert_core::enumerate::DEFAULT_ENUM_BUDGET)]
    enumeration: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one point and run the conditions that apply to it.
    Classify {
        file: PathBuf,
        /// Point as a0:a1:…:aM.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long)]
        json: bool,
    },
    /// Check the conditions defining the good family.
    CheckMembership {
        file: PathBuf,
        /// Point to check, as a0:a1:…:aM; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        /// Enumerate every rational singular point (finite fields only).
        #[arg(long = "all-Fp-points")]
        all_fp_points: bool,
        /// For M = 5 over F_p, search for planes and singular lines.
        #[arg(long = "m5-checks")]
        m5_checks: bool,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form codimension bounds.
    CodimTables {
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Random census of degree-M forms over F_p.
    Census {
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of g, r, r1, planes, lines.
        #[arg(long, value_delimiter = ',', default_values_t = [Check::G, Check::R])]
        checks: Vec<Check>,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &PathBuf) -> Result<Hypersurface, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_hypersurface(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn classify<F: Field>(f: &Polynomial<F>, point: &str, budget: Budget, json: bool) -> Result<u8, Error> {
    let o = parse_point(f.field(), f.nvars(), point)?;
    let a = analyze_point(f, &o, budget)?;
    let record = a.record();
    if json {
        outln!("{}", Envelope::new(Record::Point(record)).to_json());
    } else {
        out!("{}", render::point(&record));
        for w in &a.violations {
            outln!("violation: {} ({})", w.condition, w.detail);
        }
        for r in &a.inconclusive {
            outln!("inconclusive: {r}");
        }
    }
    Ok(if !a.violations.is_empty() {
        EXIT_VIOLATION
    } else if !a.inconclusive.is_empty() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn run(cli: Cli) -> Result<u8, String> {
    let err = |e: Error| e.to_string();
    match cli.command {
        Command::Classify { file, point, budgets, json } => {
            let budget = Budget::new(budgets.groebner);
            let result = match load(&file)? {
                Hypersurface::Rational(f) => classify(&f, &point, budget, json),
                Hypersurface::Prime(f) => classify(&f, &point, budget, json),
            };
            match result {
                Err(e) if e.is_budget() => {
                    eprintln!("inconclusive: {e}");
                    Ok(EXIT_INCONCLUSIVE)
                }
                other => other.map_err(err),
            }
        }
        Command::CheckMembership { file, point, all_fp_points, m5_checks, budgets, json } => {
            let h = load(&file)?;
            let opts = MembershipOptions {
                points: point,
                all_fp_points,
                m5_checks,
                groebner_budget: Budget::new(budgets.groebner),
                enum_budget: budgets.enumeration,
            };
            let report = check_membership(&h, &opts).map_err(err)?;
            let code = report.verdict.exit_code() as u8;
            if json {
                outln!("{}", Envelope::new(Record::Membership(report)).to_json());
            } else {
                out!("{}", render::membership(&report));
            }
            Ok(code)
        }
        Command::CodimTables { m, json } => {
            let report = codim_report(m).map_err(err)?;
            if json {
                outln!("{}", Envelope::new(Record::Codim(report)).to_json());
            } else {
                out!("{}", render::codim(&report));
            }
            Ok(EXIT_OK)
        }
        Command::Census { m, p, samples, seed, checks, budgets, json } => {
            let mut config = CensusConfig::new(m, p, samples, seed);
            config.checks = checks.into_iter().collect();
            config.groebner_budget = budgets.groebner;
            config.enum_budget = budgets.enumeration;
            let report = run_census(&config).map_err(err)?;
            if json {
                outln!("{}", Envelope::new(Record::Census(report)).to_json());
            } else {
                out!("{}", render::census(&report));
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
