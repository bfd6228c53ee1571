use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use endodyn_cli::batch::{json_lines, run_batch, summary};
use endodyn_cli::commands::{Command, Options, EXIT_INVALID};
use endodyn_cli::generate::{write_corpus, CorpusSpec, GenerateError};
use endodyn_cli::problem::Kind;
use endodyn_cli::{run_file, wire, Record};

#[derive(Parser)]
#[command(
    name = "endodyn",
    version,
    about = "Exact dynamics of abelian-variety endomorphisms, cone maps and lattice isometries"
)]
struct Cli {
    /// Write the JSON record(s) to PATH (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    file: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Degree, amplified/PCD/dense-orbit verdicts, entropy, spectral radius and witnesses.
    ClassifyAbelian(Input),
    /// Number of periodic points of period dividing N.
    FixCount {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        period: u64,
    },
    /// Fixed points of f^N on the n-torsion, by Smith form and by enumeration.
    TorsionOracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        period: u64,
        #[arg(long)]
        level: u64,
    },
    /// Entropy class of a lattice isometry with its exact witness.
    ClassifyLattice {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = endodyn::hyperlattice::DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Contract fixed extremal rays until the cone map is amplified.
    DescendCone(Input),
    /// Root location summary of an integer polynomial.
    PolyAnalyze(Input),
    /// Salem verdict and irreducibility certificate.
    SalemCheck(Input),
    /// Run every *.json problem in DIR with the default command for its kind.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Write a seeded corpus of problem files.
    GenerateCorpus {
        kind: KindArg,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        /// JSON file holding a Gram matrix (lattice corpora only).
        #[arg(long)]
        gram: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Abelian,
    Lattice,
    Cone,
    Poly,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Abelian => Kind::Abelian,
            KindArg::Lattice => Kind::Lattice,
            KindArg::Cone => Kind::Cone,
            KindArg::Poly => Kind::Poly,
        }
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn emit_json(path: &Path, text: &str) -> Result<(), String> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn single(cli: &Cli, cmd: Command, file: &Path, opts: Options) -> ExitCode {
    let record: Record = run_file(file, Some(cmd), &opts, None);
    let to_stdout = cli.json.as_deref() == Some(Path::new("-"));
    if let Some(path) = &cli.json {
        if let Err(e) = emit_json(path, &(record.json_line() + "\n")) {
            eprintln!("error: {e}");
            return exit(EXIT_INVALID);
        }
    }
    match &record.outcome {
        Ok(o) if !to_stdout => print!("{}", o.render()),
        Ok(_) => {}
        Err(f) => {
            eprintln!("error: {}", f.message);
            if !f.detail.is_null() {
                eprintln!("detail: {}", wire::canonical(&f.detail));
            }
        }
    }
    exit(record.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options { verbose: cli.verbose, ..Options::default() };
    match &cli.cmd {
        Cmd::ClassifyAbelian(i) => single(&cli, Command::ClassifyAbelian, &i.file, opts),
        Cmd::FixCount { input, period } => {
            opts.period = *period;
            single(&cli, Command::FixCount, &input.file, opts)
        }
        Cmd::TorsionOracle { input, period, level } => {
            opts.period = *period;
            opts.level = Some(*level);
            single(&cli, Command::TorsionOracle, &input.file, opts)
        }
        Cmd::ClassifyLattice { input, max_degree } => {
            opts.max_degree = *max_degree;
            single(&cli, Command::ClassifyLattice, &input.file, opts)
        }
        Cmd::DescendCone(i) => single(&cli, Command::DescendCone, &i.file, opts),
        Cmd::PolyAnalyze(i) => single(&cli, Command::PolyAnalyze, &i.file, opts),
        Cmd::SalemCheck(i) => single(&cli, Command::SalemCheck, &i.file, opts),
        Cmd::Batch { dir, parallel } => {
            let records = match run_batch(dir, (*parallel).max(1), &opts) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit(EXIT_INVALID);
                }
            };
            let lines = json_lines(&records);
            match &cli.json {
                Some(p) => {
                    if let Err(e) = emit_json(p, &lines) {
                        eprintln!("error: {e}");
                        return exit(EXIT_INVALID);
                    }
                    if p != Path::new("-") {
                        print!("{}", summary(&records));
                    }
                }
                None => {
                    print!("{lines}");
                    eprint!("{}", summary(&records));
                }
            }
            // worst failure code, 0 iff every file succeeded
            exit(records.iter().map(Record::exit_code).max().unwrap_or(0))
        }
        Cmd::GenerateCorpus { kind, count, seed, out, dim, bound, gram } => {
            let gram = match gram {
                None => None,
                Some(p) => match read_gram(p) {
                    Ok(g) => Some(g),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return exit(EXIT_INVALID);
                    }
                },
            };
            let spec = CorpusSpec { kind: (*kind).into(), count: *count, seed: *seed, dim: *dim, bound: *bound, gram };
            match write_corpus(&spec, out) {
                Ok(paths) => {
                    println!("wrote {} files to {}", paths.len(), out.display());
                    exit(0)
                }
                Err(e @ GenerateError::Invalid(_)) | Err(e @ GenerateError::Io { .. }) => {
                    eprintln!("error: {e}");
                    exit(EXIT_INVALID)
                }
            }
        }
    }
}

fn read_gram(p: &Path) -> Result<endodyn::linalg::IntMatrix, String> {
    let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?;
    let m = v.get("gram").unwrap_or(&v);
    wire::parse_int_matrix(m, "gram").map_err(|e| format!("{}: {}", p.display(), e.locate(&text)))
}
