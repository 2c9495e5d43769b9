//! `proofdesk` command line: the same engine as the service, without it.

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use proofdesk_core::advisor::{goal_symbols, AdvisorModel};
use proofdesk_core::article::parse_article;
use proofdesk_core::formula::tptp::parse_tptp;
use proofdesk_core::formula::NamedFormula;
use proofdesk_core::problem::{functor_type_axioms, generate_all, DirSink, LibraryStore};
use proofdesk_core::prover::{load_system_db, prove_formulas, run_external, Limits, ProverKind, ProverSystem};
use proofdesk_core::verifier::{collect_obligations, verify_article};

use crate::http::{router, AppState};
use crate::service::{Config, Service};

#[derive(Parser)]
#[command(name = "proofdesk", version, about = "Check articles, generate ATP problems, run provers, suggest premises")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify an article and print one line per obligation.
    Verify {
        file: PathBuf,
        /// Directory of installed library articles.
        #[arg(long)]
        library: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the full report as JSON instead of the text log.
        #[arg(long)]
        json: bool,
    },
    /// Write one TPTP problem per obligation under DIR/<article>/problems.
    GenProblems {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Run a prover on a TPTP problem.
    Prove {
        problem: PathBuf,
        #[arg(long, default_value = "mini-e")]
        system: String,
        /// CPU limit in seconds; defaults to the system's own.
        #[arg(long)]
        cpu: Option<f64>,
        /// Prover system database.
        #[arg(long)]
        systems: Option<PathBuf>,
    },
    /// Suggest premises for one obligation of an article.
    Advise {
        file: PathBuf,
        #[arg(long)]
        obligation: String,
        #[arg(short, default_value_t = 20)]
        k: usize,
        #[arg(long, default_value = "advisor.model")]
        model: PathBuf,
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "proofdesk-work")]
        workdir: PathBuf,
        #[arg(long)]
        systems: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn library(dir: Option<&Path>) -> Result<LibraryStore, String> {
    match dir {
        Some(d) => LibraryStore::load_dir(d).map_err(|e| e.to_string()),
        None => Ok(LibraryStore::new()),
    }
}

fn workers(n: Option<usize>) -> usize {
    n.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn verify(file: &Path, lib: Option<&Path>, n: Option<usize>, json: bool) -> Result<ExitCode, String> {
    let text = read(file)?;
    let article = parse_article(&text).map_err(|e| format!("{}:{e}", file.display()))?;
    let lib = library(lib)?;
    let report = verify_article(&article, &lib, workers(n));
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    } else {
        print!("{}", report.text_log());
        for e in &report.errors {
            eprintln!("error: {e}");
        }
        for i in &report.items {
            for e in &i.errors {
                eprintln!("{}: {e}", i.label);
            }
        }
    }
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn gen_problems(file: &Path, out: &Path, lib: Option<&Path>) -> Result<ExitCode, String> {
    let text = read(file)?;
    let article = parse_article(&text).map_err(|e| format!("{}:{e}", file.display()))?;
    let lib = library(lib)?;
    let (obligations, unresolved) = collect_obligations(&article, &lib);
    for e in &unresolved {
        eprintln!("error: {e}");
    }
    let mut sink = DirSink::new(out, &article.name).map_err(|e| format!("{}: {e}", out.display()))?;
    let log = generate_all(&obligations, &lib, &functor_type_axioms(&article), &mut sink);
    for line in &log.lines {
        println!("{line}");
    }
    if let Some(reason) = &log.aborted {
        return Err(format!("generation stopped: {reason}"));
    }
    Ok(if log.failed.is_empty() && unresolved.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn systems(db: Option<&Path>) -> Result<Vec<ProverSystem>, String> {
    match db {
        Some(p) => load_system_db(p).map_err(|e| e.to_string()),
        None => Ok(vec![ProverSystem::internal()]),
    }
}

fn prove(problem: &Path, system: &str, cpu: Option<f64>, db: Option<&Path>) -> Result<ExitCode, String> {
    let systems = systems(db)?;
    let sys = systems
        .iter()
        .find(|s| s.name == system)
        .ok_or_else(|| format!("unknown prover system `{system}`"))?;
    let limits = Limits::default().with_cpu(cpu.unwrap_or(sys.default_cpu));
    let result = match sys.kind {
        ProverKind::Internal => {
            let stmts = parse_tptp(&read(problem)?).map_err(|e| format!("{}: {e}", problem.display()))?;
            let mut axioms = Vec::new();
            let mut conjecture = None;
            for s in stmts {
                let nf = NamedFormula::new(s.name, s.formula);
                if s.role == "conjecture" {
                    conjecture = Some(nf);
                } else {
                    axioms.push(nf);
                }
            }
            prove_formulas(&axioms, conjecture.as_ref(), &limits)
        }
        ProverKind::External => {
            let out = problem.with_extension(format!("{}.out", sys.name));
            run_external(sys, problem, &limits, &out)
        }
    };
    let name = problem.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
    println!("% SZS status {} for {name}", result.status.name());
    if let Some(used) = &result.used_axioms {
        println!("% used axioms: {}", used.join(", "));
    }
    println!("% cpu {} ms, wall {} ms", result.cpu_millis, result.wall_millis);
    Ok(if result.status.is_answer() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn advise(file: &Path, oid: &str, k: usize, model: &Path, lib: Option<&Path>) -> Result<ExitCode, String> {
    if k == 0 {
        return Err("k must be positive".into());
    }
    let text = read(file)?;
    let article = parse_article(&text).map_err(|e| format!("{}:{e}", file.display()))?;
    let lib = library(lib)?;
    let (obligations, _) = collect_obligations(&article, &lib);
    let o = obligations
        .iter()
        .find(|o| o.id == oid)
        .ok_or_else(|| format!("no obligation `{oid}` in {}", file.display()))?;
    let model = if model.exists() {
        AdvisorModel::load(model).map_err(|e| e.to_string())?
    } else {
        eprintln!("warning: {} not found; using an empty model", model.display());
        AdvisorModel::default()
    };
    for h in model.suggest_hints(&goal_symbols(&o.conjecture, &o.scope), k).ranked {
        println!("{}\t{:.6}", h.name, h.score);
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(port: u16, host: &str, workdir: PathBuf, db: Option<&Path>, n: Option<usize>) -> Result<ExitCode, String> {
    let mut config = Config::new(workdir).with_systems(systems(db)?);
    config.workers = workers(n);
    let addr: SocketAddr = format!("{host}:{port}").parse().map_err(|e| format!("bad address: {e}"))?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async move {
        let (service, pending) = Service::open(config).map_err(|e| e.to_string())?;
        let state = AppState::new(service);
        for job in pending {
            state.spawn_rest(job, true);
        }
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| format!("{addr}: {e}"))?;
        eprintln!("proofdesk listening on http://{addr}");
        axum::serve(listener, router(state)).await.map_err(|e| e.to_string())?;
        Ok(ExitCode::SUCCESS)
    })
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            file,
            library,
            workers,
            json,
        } => verify(&file, library.as_deref(), workers, json),
        Command::GenProblems { file, output, library } => gen_problems(&file, &output, library.as_deref()),
        Command::Prove {
            problem,
            system,
            cpu,
            systems,
        } => prove(&problem, &system, cpu, systems.as_deref()),
        Command::Advise {
            file,
            obligation,
            k,
            model,
            library,
        } => advise(&file, &obligation, k, &model, library.as_deref()),
        Command::Serve {
            port,
            workdir,
            systems,
            workers,
            host,
        } => serve(port, &host, workdir, systems.as_deref(), workers),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("proofdesk: {e}");
            ExitCode::from(2)
        }
    }
}
