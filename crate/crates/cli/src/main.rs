//! `dihedral`: experiments on dihedral weight-one theta series.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Format, RunConfig};

const DEFAULT_SEED: u64 = 0x5eed_d1e0;

#[derive(Debug, Parser)]
#[command(name = "dihedral", version, about = "Dihedral weight-one forms from class group characters")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduced forms, class number and structure of `Cl(−q)`.
    Classgroup {
        #[arg(long)]
        q: u64,
    },
    /// Theta coefficients `c_1 … c_N` as `n,re,im,exact_repr`.
    Theta {
        #[arg(long)]
        q: u64,
        /// Character index, or `all` for every non-real character.
        #[arg(long, default_value = "1")]
        psi: String,
        #[arg(long, default_value_t = 100)]
        n: u64,
    },
    /// Hecke identities and Ramanujan bounds over the dihedral basis.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        /// Adds 1 to `c_n` of the first basis element before checking.
        #[arg(long, hide = true)]
        corrupt: Option<u64>,
    },
    /// Zero density of `c_p` against the theoretical `β`.
    Density {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "all")]
        psi: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
    /// Nonvanishing counts at `x = 2^j` and the fitted exponent.
    Wirsing {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "1")]
        psi: String,
        #[arg(long, default_value_t = 1 << 20)]
        n: u64,
    },
    /// Class numbers and dihedral dimensions for all levels up to `qmax`.
    Dimension {
        #[arg(long)]
        qmax: u64,
    },
    /// Averaged `c_p` distribution: empirical and theoretical moments.
    Satotate {
        #[arg(long)]
        qmax: u64,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Linear Hecke relations for a finite trace set.
    Relations {
        /// `tetrahedral`, `octahedral`, `icosahedral` or `custom`.
        #[arg(long, default_value = "icosahedral")]
        kind: String,
        /// Custom trace set: elements of `Q(ζ_120)` as `exp:coeff;…`, separated by commas.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 1)]
        a: i64,
    },
}

impl Cli {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig {
            command: String::new(),
            q: None,
            qmax: None,
            psi: None,
            n: None,
            kind: None,
            s: None,
            a: None,
            corrupt: None,
            seed: self.common.seed,
            format: self.common.format.name().to_string(),
            out: self.common.out.as_ref().map(|p| p.display().to_string()),
        };
        match &self.command {
            Command::Classgroup { q } => {
                c.command = "classgroup".into();
                c.q = Some(*q);
            }
            Command::Theta { q, psi, n } => {
                c.command = "theta".into();
                (c.q, c.psi, c.n) = (Some(*q), Some(psi.clone()), Some(*n));
            }
            Command::Verify { q, n, corrupt } => {
                c.command = "verify".into();
                (c.q, c.n, c.corrupt) = (Some(*q), Some(*n), *corrupt);
            }
            Command::Density { q, psi, n } => {
                c.command = "density".into();
                (c.q, c.psi, c.n) = (Some(*q), Some(psi.clone()), Some(*n));
            }
            Command::Wirsing { q, psi, n } => {
                c.command = "wirsing".into();
                (c.q, c.psi, c.n) = (Some(*q), Some(psi.clone()), Some(*n));
            }
            Command::Dimension { qmax } => {
                c.command = "dimension".into();
                c.qmax = Some(*qmax);
            }
            Command::Satotate { qmax, n } => {
                c.command = "satotate".into();
                (c.qmax, c.n) = (Some(*qmax), Some(*n));
            }
            Command::Relations { kind, s, a } => {
                c.command = "relations".into();
                (c.kind, c.s, c.a) = (Some(kind.clone()), s.clone(), Some(*a));
            }
        }
        c
    }
}

fn run(cli: &Cli) -> commands::CmdResult {
    match &cli.command {
        Command::Classgroup { q } => commands::classgroup(*q),
        Command::Theta { q, psi, n } => commands::theta(*q, psi, *n),
        Command::Verify { q, n, corrupt } => commands::verify(*q, *n, *corrupt),
        Command::Density { q, psi, n } => commands::density(*q, psi, *n),
        Command::Wirsing { q, psi, n } => commands::wirsing(*q, psi, *n),
        Command::Dimension { qmax } => commands::dimension(*qmax),
        Command::Satotate { qmax, n } => commands::satotate(*qmax, *n),
        Command::Relations { kind, s, a } => commands::relations(kind, s.as_deref(), *a, cli.common.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match pool.install(|| run(&cli)) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let config = cli.config();
    let bytes = match report.render(&config, cli.common.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::Write::write_all(&mut std::io::stdout().lock(), &bytes),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("FAIL: {f}");
        }
        ExitCode::from(1)
    }
}
