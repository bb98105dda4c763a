//! `gp` — command-line front end for the graph-product reduction calculus.
//!
//! Exit codes: 0 success / true / no counterexamples, 1 false or a
//! counterexample, 2 usage or input error, 3 resource cap exceeded.

mod input;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gp_core::certificates::{
    parse_certificate, render_certificate, sequence_certificate, verify_certificate,
    CertificateError,
};
use gp_core::engine::{reduce, render_trace, weight_of_sequence};
use gp_core::isofunctions::{g_of, iso_bound, IsoError};
use gp_core::oracles::{OracleError, ProductOracles, SearchCaps};
use gp_core::presentations::{validate_presentation, GraphProductPresentation};
use gp_core::thue::{check_almost_confluence, check_huet_criterion, verify_resolution_cases, BoundedUniverse, ConfluenceReport};
use gp_core::words::alpha;

#[derive(Parser)]
#[command(name = "gp", about = "word problem, reduction traces, and area certificates for graph products", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct UniverseArgs {
    /// Presentation file
    file: PathBuf,
    /// Norm cap of the bounded universe
    #[arg(long = "max-norm")]
    max_norm: usize,
    /// Syllable content length cap
    #[arg(long = "max-syll")]
    max_syll: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a presentation file and list the combined relators
    Validate { file: PathBuf },
    /// Decide whether a word is the identity of the product
    Solve {
        file: PathBuf,
        /// Space-separated letters
        #[arg(long)]
        word: String,
    },
    /// Reduce a word to the empty word, optionally printing the move trace
    Reduce {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        trace: bool,
    },
    /// Emit a conjugated-relator certificate for a null word
    Cert {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Write the certificate here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Area-search word length cap, as a multiple of the target length
        #[arg(long = "cap-len")]
        cap_len: Option<usize>,
        /// Area-search state cap
        #[arg(long = "cap-states")]
        cap_states: Option<usize>,
    },
    /// Verify a certificate file by free-group arithmetic
    Verify {
        file: PathBuf,
        /// Certificate path, or - for stdin
        #[arg(long)]
        cert: PathBuf,
    },
    /// Check almost confluence over a bounded universe
    Confluence {
        #[command(flatten)]
        universe: UniverseArgs,
        /// Only assert about words up to this norm (default max-norm / 2)
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check the critical-peak criterion over a bounded universe
    Huet {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Re-verify the six critical-pair resolution cases
    Cases {
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Evaluate the isoperimetric bound g(n) + n^2
    Isobound {
        file: PathBuf,
        #[arg(short)]
        n: u64,
    },
}

/// Failures carry the exit code they map to.
enum Failure {
    /// Usage or input problems: exit 2.
    Input(String),
    /// Search or arithmetic caps: exit 3.
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Resource(m) => m,
        }
    }
}

fn classify_oracle(e: OracleError) -> Failure {
    match e {
        OracleError::AreaCapExceeded { .. } => Failure::Resource(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn classify_cert(e: CertificateError) -> Failure {
    match e {
        CertificateError::Oracle(o) => classify_oracle(o),
        CertificateError::Engine(gp_core::engine::EngineError::Oracle(o)) => classify_oracle(o),
        other => Failure::Input(other.to_string()),
    }
}

fn load(
    path: &PathBuf,
    caps: SearchCaps,
) -> Result<(GraphProductPresentation, ProductOracles), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc = input::parse_document(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let presentation =
        validate_presentation(&doc.raw).map_err(|e| Failure::Input(e.to_string()))?;
    let specs = doc
        .backends
        .iter()
        .map(|(&v, b)| (gp_core::presentations::VertexId(v), b.clone()))
        .collect();
    let oracles = ProductOracles::new(&presentation, &specs, caps).map_err(classify_oracle)?;
    Ok((presentation, oracles))
}

fn parse_word(
    p: &GraphProductPresentation,
    text: &str,
) -> Result<gp_core::words::LetterWord, Failure> {
    p.parse_letter_word(text)
        .map_err(|e| Failure::Input(e.to_string()))
}

fn print_confluence(report: &ConfluenceReport, p: &GraphProductPresentation) -> ExitCode {
    println!("checked: {}", report.pairs_checked);
    println!("counterexamples: {}", report.counterexamples.len());
    for (x, y) in &report.counterexamples {
        println!("counterexample: {} {}", p.render_word(x), p.render_word(y));
    }
    if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn budget_for(universe: &UniverseArgs, budget: Option<usize>) -> Result<usize, Failure> {
    let default = universe.max_norm / 2;
    let b = budget.unwrap_or(default);
    if b > default {
        return Err(Failure::Input(format!(
            "budget {b} exceeds max-norm/2 = {default}; boundary truncation would not be covered"
        )));
    }
    Ok(b)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { file } => {
            let (p, _) = load(&file, SearchCaps::default())?;
            println!("valid: true");
            println!("vertices: {}", p.vertex_count());
            println!("edges: {}", p.graph().edges().len());
            println!("relators: {}", p.combined_relators().len());
            for (i, r) in p.combined_relators().iter().enumerate() {
                println!("relator {i}: {}", p.render_letters(r));
            }
            println!("f: {}", p.f());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file, word } => {
            let (p, oracles) = load(&file, SearchCaps::default())?;
            let w = parse_word(&p, &word)?;
            let identity = gp_core::engine::is_identity_in_product(&w, &p, &oracles)
                .map_err(|e| Failure::Input(e.to_string()))?;
            println!("identity: {identity}");
            Ok(if identity { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Reduce { file, word, trace } => {
            let (p, oracles) = load(&file, SearchCaps::default())?;
            let w = parse_word(&p, &word)?;
            match reduce(&alpha(&p, &w), &p, &oracles)
                .map_err(|e| Failure::Input(e.to_string()))?
            {
                Some(seq) => {
                    if trace {
                        print!(
                            "{}",
                            render_trace(&seq, &p, &oracles, p.f())
                                .map_err(|e| Failure::Input(e.to_string()))?
                        );
                    }
                    let weight = weight_of_sequence(&seq, &p, &oracles, p.f())
                        .map_err(|e| Failure::Input(e.to_string()))?;
                    println!("steps: {}", seq.len());
                    println!("weight: {weight}");
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("identity: false");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Cert { file, word, output, cap_len, cap_states } => {
            let default = SearchCaps::default();
            let caps = SearchCaps {
                len_multiplier: cap_len.unwrap_or(default.len_multiplier),
                max_states: cap_states.unwrap_or(default.max_states),
            };
            let (p, oracles) = load(&file, caps)?;
            let w = parse_word(&p, &word)?;
            match reduce(&alpha(&p, &w), &p, &oracles)
                .map_err(|e| Failure::Input(e.to_string()))?
            {
                Some(seq) => {
                    let cert = sequence_certificate(&seq, &p, &oracles).map_err(classify_cert)?;
                    let text = render_certificate(&cert, &p);
                    match output {
                        Some(path) => fs::write(&path, text)
                            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                        None => print!("{text}"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("identity: false");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Verify { file, cert } => {
            let (p, _) = load(&file, SearchCaps::default())?;
            let text = if cert.as_os_str() == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
                buf
            } else {
                fs::read_to_string(&cert)
                    .map_err(|e| Failure::Input(format!("{}: {e}", cert.display())))?
            };
            let parsed = parse_certificate(&text, &p).map_err(classify_cert)?;
            let ok = verify_certificate(&parsed, &p).map_err(classify_cert)?;
            println!("verified: {ok}");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Confluence { universe, budget } => {
            let budget = budget_for(&universe, budget)?;
            let (p, oracles) = load(&universe.file, SearchCaps::default())?;
            let u = BoundedUniverse::new(&p, &oracles, universe.max_norm, universe.max_syll)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let report = check_almost_confluence(&u, budget);
            Ok(print_confluence(&report, &p))
        }
        Command::Huet { universe, budget } => {
            let budget = budget_for(&universe, budget)?;
            let (p, oracles) = load(&universe.file, SearchCaps::default())?;
            let u = BoundedUniverse::new(&p, &oracles, universe.max_norm, universe.max_syll)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let report = check_huet_criterion(&u, budget);
            Ok(print_confluence(&report, &p))
        }
        Command::Cases { universe } => {
            let (p, oracles) = load(&universe.file, SearchCaps::default())?;
            let u = BoundedUniverse::new(&p, &oracles, universe.max_norm, universe.max_syll)
                .map_err(|e| Failure::Input(e.to_string()))?;
            let reports = verify_resolution_cases(&u).map_err(|e| Failure::Input(e.to_string()))?;
            let mut clean = true;
            for r in &reports {
                println!("case={} instances={} failures={}", r.case_id, r.instances, r.failures.len());
                for f in &r.failures {
                    println!("failure: {f}");
                    clean = false;
                }
            }
            Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Isobound { file, n } => {
            if n > 4096 {
                return Err(Failure::Input(format!(
                    "n = {n} is too large for the exact composition maximum"
                )));
            }
            let (p, _) = load(&file, SearchCaps::default())?;
            let f = p.f();
            let classify_iso = |e: IsoError| match e {
                IsoError::Overflow => Failure::Resource(e.to_string()),
                other => Failure::Input(other.to_string()),
            };
            let g = g_of(f, n).map_err(classify_iso)?;
            let bound = iso_bound(f, n).map_err(classify_iso)?;
            println!("f: {f}");
            println!("g: {g}");
            println!("bound: {bound}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the pipe closes downstream (e.g. `gp huet ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("gp: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
