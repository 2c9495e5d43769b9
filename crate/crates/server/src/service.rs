//! The article-job engine behind the HTTP layer: per-job workspaces, the
//! parse → verify → generate pipeline, prover dispatch, hints, library
//! installation and restart recovery.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use proofdesk_core::advisor::{goal_symbols, harvest, train, AdvisorModel, HintList, TrainingExample};
use proofdesk_core::article::{parse_article, render_model, Article};
use proofdesk_core::formula::tptp::parse_tptp;
use proofdesk_core::formula::NamedFormula;
use proofdesk_core::problem::{
    export_article, export_items, functor_type_axioms, generate_all, generate_problem, scope_type_axioms, timestamp,
    DirSink, ExportKind, ExportedItem, LibraryStore, ProblemSink, TptpProblem,
};
use proofdesk_core::prover::{prove_formulas, run_external, Limits, ProverKind, ProverSystem, RunResult, SzsStatus};
use proofdesk_core::verifier::{collect_obligations, verify_article, Obligation, VerificationReport};
use proofdesk_core::write_atomic;

/// Largest accepted article.
pub const MAX_SOURCE_BYTES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobState {
    Received,
    Parsed,
    Verified,
    Generating,
    Ready,
    Failed,
}

impl JobState {
    pub fn name(self) -> &'static str {
        match self {
            JobState::Received => "received",
            JobState::Parsed => "parsed",
            JobState::Verified => "verified",
            JobState::Generating => "generating",
            JobState::Ready => "ready",
            JobState::Failed => "failed",
        }
    }
}

/// The persisted part of a job, `job.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobMeta {
    pub id: String,
    pub name: Option<String>,
    /// Article name, once parsed.
    pub article: Option<String>,
    pub state: JobState,
    pub reason: Option<String>,
    /// State name to the time it was entered.
    pub timestamps: BTreeMap<String, String>,
}

/// What verification produced; immutable once built.
#[derive(Debug)]
pub struct JobData {
    pub article: Article,
    pub report: VerificationReport,
    pub obligations: Vec<Obligation>,
    pub local: Vec<ExportedItem>,
    pub render_json: String,
}

#[derive(Debug)]
pub struct JobHandle {
    pub id: String,
    pub dir: PathBuf,
    meta: Mutex<JobMeta>,
    data: Mutex<Option<Arc<JobData>>>,
    runs: Mutex<Vec<(String, RunResult)>>,
}

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("no article job `{0}`")]
    UnknownJob(String),
    #[error("no obligation `{0}`")]
    UnknownObligation(String),
    #[error("no library item `{0}`")]
    UnknownItem(String),
    #[error("{message}")]
    Conflict { message: String, state: JobState },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Internal(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ServiceError + '_ {
    move |source| ServiceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("service documents serialize")
}

impl JobHandle {
    fn new(id: String, dir: PathBuf, meta: JobMeta) -> Self {
        JobHandle {
            id,
            dir,
            meta: Mutex::new(meta),
            data: Mutex::new(None),
            runs: Mutex::new(Vec::new()),
        }
    }

    pub fn meta(&self) -> JobMeta {
        self.meta.lock().unwrap().clone()
    }

    pub fn state(&self) -> JobState {
        self.meta.lock().unwrap().state
    }

    pub fn data(&self) -> Option<Arc<JobData>> {
        self.data.lock().unwrap().clone()
    }

    pub fn log_path(&self) -> PathBuf {
        self.dir.join("log.txt")
    }

    pub fn problem_path(&self, obligation: &str) -> PathBuf {
        self.dir.join("problems").join(format!("{obligation}.p"))
    }

    /// Appends a line that already carries its timestamp.
    fn append_raw(&self, line: &str) -> io::Result<()> {
        let _guard = self.meta.lock().unwrap();
        let mut f = OpenOptions::new().create(true).append(true).open(self.log_path())?;
        writeln!(f, "{line}")
    }

    pub fn log(&self, event: &str) -> io::Result<()> {
        self.append_raw(&format!("{} {event}", timestamp()))
    }

    fn save_meta(&self, meta: &JobMeta) -> io::Result<()> {
        write_atomic(&self.dir.join("job.json"), to_json(meta).as_bytes())
    }

    /// Moves forward to `to`; earlier or equal states are left alone.
    fn advance(&self, to: JobState) -> io::Result<()> {
        let mut meta = self.meta.lock().unwrap();
        if meta.state >= to {
            return Ok(());
        }
        let ts = timestamp();
        meta.state = to;
        meta.timestamps.insert(to.name().to_string(), ts.clone());
        self.save_meta(&meta)?;
        let mut f = OpenOptions::new().create(true).append(true).open(self.log_path())?;
        writeln!(f, "{ts} state {}", to.name())
    }

    fn fail(&self, reason: &str) -> io::Result<()> {
        let mut meta = self.meta.lock().unwrap();
        let ts = timestamp();
        meta.state = JobState::Failed;
        meta.reason = Some(reason.to_string());
        meta.timestamps.insert(JobState::Failed.name().to_string(), ts.clone());
        self.save_meta(&meta)?;
        let mut f = OpenOptions::new().create(true).append(true).open(self.log_path())?;
        writeln!(f, "{ts} failed: {reason}")
    }
}

/// Writes problems through a `DirSink` and mirrors generation lines into
/// the job log.
struct JobSink<'a> {
    dir: DirSink,
    job: &'a JobHandle,
}

impl ProblemSink for JobSink<'_> {
    fn accept(&mut self, problem: &TptpProblem, ts: &str) -> io::Result<()> {
        self.dir.accept(problem, ts)
    }

    fn log(&mut self, line: &str) -> io::Result<()> {
        self.dir.log(line)?;
        self.job.append_raw(line)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub workdir: PathBuf,
    /// Every system the service may run; the internal one is always there.
    pub systems: Vec<ProverSystem>,
    /// System used when a prove request names none.
    pub primary: String,
    pub workers: usize,
    /// Larger articles are parsed and verified in the background.
    pub sync_limit: usize,
}

impl Config {
    pub fn new(workdir: impl Into<PathBuf>) -> Self {
        Config {
            workdir: workdir.into(),
            systems: vec![ProverSystem::internal()],
            primary: ProverSystem::internal().name,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            sync_limit: 64 * 1024,
        }
    }

    pub fn with_systems(mut self, systems: Vec<ProverSystem>) -> Self {
        for s in systems {
            if !self.systems.iter().any(|t| t.name == s.name) {
                self.systems.push(s);
            }
        }
        self
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct ProveRequest {
    pub system: Option<String>,
    pub cpu: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInfo {
    pub name: String,
    pub kind: Option<ExportKind>,
    pub title: String,
    pub anchor: String,
}

/// The explanation box payload of one prover run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub article: String,
    pub obligation: String,
    pub system: String,
    pub status: String,
    pub message: Option<String>,
    pub references: Vec<ReferenceInfo>,
    pub cpu_millis: u64,
    pub wall_millis: u64,
    pub raw_output: Option<String>,
    pub hints_available: bool,
    /// Status of re-proving from the used references alone.
    pub self_check: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObligationEntry {
    pub id: String,
    pub item: String,
    pub step: usize,
    pub status: String,
    pub millis: u64,
    pub refs: Vec<String>,
    pub generated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HintsDocument {
    pub obligation: String,
    pub goal_symbols: BTreeSet<String>,
    pub ranked: Vec<proofdesk_core::advisor::Hint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LibraryEntry {
    pub name: String,
    pub kind: ExportKind,
    pub article: String,
    pub title: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LibraryItemDocument {
    pub name: String,
    pub kind: ExportKind,
    pub article: String,
    pub source: String,
    pub title: String,
    pub formula: String,
    pub tptp: String,
    pub typed_symbol: Option<String>,
    pub anchor: String,
    /// Declaration inside the article's render model.
    pub declaration: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstallDocument {
    pub article: String,
    pub items: Vec<String>,
    pub training_examples: usize,
}

pub struct Service {
    pub config: Config,
    library: RwLock<Arc<LibraryStore>>,
    advisor: RwLock<Arc<AdvisorModel>>,
    jobs: Mutex<BTreeMap<String, Arc<JobHandle>>>,
    install: Mutex<()>,
}

impl Service {
    fn jobs_dir(&self) -> PathBuf {
        self.config.workdir.join("jobs")
    }

    fn library_dir(&self) -> PathBuf {
        self.config.workdir.join("library")
    }

    fn training_dir(&self) -> PathBuf {
        self.config.workdir.join("training")
    }

    fn model_path(&self) -> PathBuf {
        self.config.workdir.join("advisor.model")
    }

    /// Opens (or creates) a workspace. Returns the service and the jobs
    /// that were interrupted before reaching Ready or Failed.
    pub fn open(config: Config) -> Result<(Arc<Service>, Vec<Arc<JobHandle>>), ServiceError> {
        let svc = Service {
            config,
            library: RwLock::new(Arc::new(LibraryStore::new())),
            advisor: RwLock::new(Arc::new(AdvisorModel::default())),
            jobs: Mutex::new(BTreeMap::new()),
            install: Mutex::new(()),
        };
        for d in [svc.jobs_dir(), svc.library_dir(), svc.training_dir()] {
            fs::create_dir_all(&d).map_err(io_err(&d))?;
        }
        let lib = LibraryStore::load_dir(&svc.library_dir()).map_err(|e| ServiceError::Internal(e.to_string()))?;
        *svc.library.write().unwrap() = Arc::new(lib);
        svc.retrain()?;
        let pending = svc.recover()?;
        Ok((Arc::new(svc), pending))
    }

    pub fn library(&self) -> Arc<LibraryStore> {
        self.library.read().unwrap().clone()
    }

    pub fn advisor(&self) -> Arc<AdvisorModel> {
        self.advisor.read().unwrap().clone()
    }

    /// Rebuilds the model from every `training/*.json` file, or loads
    /// `advisor.model` when there are none.
    pub fn retrain(&self) -> Result<(), ServiceError> {
        let dir = self.training_dir();
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(io_err(&dir))?
            .flatten()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let model = if files.is_empty() {
            let path = self.model_path();
            if path.exists() {
                AdvisorModel::load(&path).map_err(|e| ServiceError::Internal(e.to_string()))?
            } else {
                AdvisorModel::default()
            }
        } else {
            let mut examples: Vec<TrainingExample> = Vec::new();
            for f in &files {
                let text = fs::read_to_string(f).map_err(io_err(f))?;
                let mut ex: Vec<TrainingExample> =
                    serde_json::from_str(&text).map_err(|e| ServiceError::Internal(format!("{}: {e}", f.display())))?;
                examples.append(&mut ex);
            }
            let m = train(&examples);
            m.save(&self.model_path()).map_err(|e| ServiceError::Internal(e.to_string()))?;
            m
        };
        *self.advisor.write().unwrap() = Arc::new(model);
        Ok(())
    }

    fn recover(&self) -> Result<Vec<Arc<JobHandle>>, ServiceError> {
        let jobs_dir = self.jobs_dir();
        let mut pending = Vec::new();
        let mut entries: Vec<PathBuf> = fs::read_dir(&jobs_dir)
            .map_err(io_err(&jobs_dir))?
            .flatten()
            .map(|e| e.path())
            .filter(|p| p.join("job.json").exists())
            .collect();
        entries.sort();
        for dir in entries {
            let path = dir.join("job.json");
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let Ok(meta) = serde_json::from_str::<JobMeta>(&text) else {
                continue;
            };
            let job = Arc::new(JobHandle::new(meta.id.clone(), dir.clone(), meta.clone()));
            match meta.state {
                JobState::Ready | JobState::Failed => {
                    if let Some(data) = self.load_data(&job) {
                        *job.data.lock().unwrap() = Some(Arc::new(data));
                    } else if meta.state == JobState::Ready {
                        job.fail("workspace is incomplete").map_err(io_err(&dir))?;
                    }
                }
                _ => {
                    job.log("resumed after restart").map_err(io_err(&dir))?;
                    pending.push(job.clone());
                }
            }
            self.jobs.lock().unwrap().insert(job.id.clone(), job);
        }
        Ok(pending)
    }

    fn load_data(&self, job: &JobHandle) -> Option<JobData> {
        let read = |name: &str| fs::read_to_string(job.dir.join(name)).ok();
        let article = parse_article(&read("source.mfl")?).ok()?;
        let report: VerificationReport = serde_json::from_str(&read("report.json")?).ok()?;
        let obligations: Vec<Obligation> = serde_json::from_str(&read("obligations.json")?).ok()?;
        let render_json = read("render.json")?;
        let local = functor_type_axioms(&article);
        Some(JobData {
            article,
            report,
            obligations,
            local,
            render_json,
        })
    }

    pub fn job(&self, id: &str) -> Result<Arc<JobHandle>, ServiceError> {
        self.jobs
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownJob(id.to_string()))
    }

    /// Creates a job in state Received.
    pub fn create_job(&self, text: &str, name: Option<String>) -> Result<Arc<JobHandle>, ServiceError> {
        if text.trim().is_empty() {
            return Err(ServiceError::BadRequest("empty article".into()));
        }
        if text.len() > MAX_SOURCE_BYTES {
            return Err(ServiceError::BadRequest(format!(
                "article is {} bytes; the limit is {MAX_SOURCE_BYTES}",
                text.len()
            )));
        }
        let id = uuid::Uuid::new_v4().simple().to_string();
        let dir = self.jobs_dir().join(&id);
        fs::create_dir_all(dir.join("runs")).map_err(io_err(&dir))?;
        write_atomic(&dir.join("source.mfl"), text.as_bytes()).map_err(io_err(&dir))?;
        let ts = timestamp();
        let meta = JobMeta {
            id: id.clone(),
            name,
            article: None,
            state: JobState::Received,
            reason: None,
            timestamps: [(JobState::Received.name().to_string(), ts.clone())].into(),
        };
        let job = Arc::new(JobHandle::new(id.clone(), dir.clone(), meta.clone()));
        job.save_meta(&meta).map_err(io_err(&dir))?;
        job.append_raw(&format!("{ts} state received")).map_err(io_err(&dir))?;
        self.jobs.lock().unwrap().insert(id, job.clone());
        Ok(job)
    }

    /// Parses and verifies. Returns false when the job failed.
    pub fn run_front(&self, job: &JobHandle) -> bool {
        match self.front(job) {
            Ok(ok) => ok,
            Err(e) => {
                let _ = job.fail(&e.to_string());
                false
            }
        }
    }

    fn front(&self, job: &JobHandle) -> Result<bool, ServiceError> {
        let src_path = job.dir.join("source.mfl");
        let text = fs::read_to_string(&src_path).map_err(io_err(&src_path))?;
        let article = match parse_article(&text) {
            Ok(a) => a,
            Err(e) => {
                job.fail(&format!("parse error at {e}"))
                    .map_err(io_err(&job.dir))?;
                return Ok(false);
            }
        };
        {
            let mut meta = job.meta.lock().unwrap();
            meta.article = Some(article.name.clone());
        }
        job.advance(JobState::Parsed).map_err(io_err(&job.dir))?;
        let lib = self.library();
        let report = verify_article(&article, &lib, self.config.workers);
        let (obligations, _) = collect_obligations(&article, &lib);
        let render = render_model(&article, Some(&report), &lib);
        let render_json = to_json(&render);
        for (name, body) in [
            ("report.json", to_json(&report)),
            ("obligations.json", to_json(&obligations)),
            ("render.json", render_json.clone()),
        ] {
            let p = job.dir.join(name);
            write_atomic(&p, body.as_bytes()).map_err(io_err(&p))?;
        }
        for line in report.text_log().lines() {
            job.log(&format!("checked {line}")).map_err(io_err(&job.dir))?;
        }
        for e in &report.errors {
            job.log(&format!("error {e}")).map_err(io_err(&job.dir))?;
        }
        let local = functor_type_axioms(&article);
        *job.data.lock().unwrap() = Some(Arc::new(JobData {
            article,
            report,
            obligations,
            local,
            render_json,
        }));
        job.advance(JobState::Verified).map_err(io_err(&job.dir))?;
        Ok(true)
    }

    /// Writes every problem, then marks the job Ready.
    pub fn run_generation(&self, job: &JobHandle) {
        if let Err(e) = self.generation(job) {
            let _ = job.fail(&e.to_string());
        }
    }

    fn generation(&self, job: &JobHandle) -> Result<(), ServiceError> {
        let Some(data) = job.data() else {
            return Ok(());
        };
        if job.state() == JobState::Failed {
            return Ok(());
        }
        job.advance(JobState::Generating).map_err(io_err(&job.dir))?;
        let lib = self.library();
        let dir = DirSink::new(job.dir.parent().unwrap_or(&job.dir), &job.id).map_err(io_err(&job.dir))?;
        let mut sink = JobSink { dir, job };
        let log = generate_all(&data.obligations, &lib, &data.local, &mut sink);
        if let Some(reason) = log.aborted {
            job.fail(&format!("problem generation stopped: {reason}"))
                .map_err(io_err(&job.dir))?;
            return Ok(());
        }
        job.advance(JobState::Ready).map_err(io_err(&job.dir))?;
        Ok(())
    }

    /// Runs whatever is left of the pipeline of an interrupted job.
    pub fn resume(&self, job: &JobHandle) {
        if self.run_front(job) {
            self.run_generation(job);
        }
    }

    fn verified_data(&self, job: &JobHandle) -> Result<Arc<JobData>, ServiceError> {
        job.data().ok_or_else(|| {
            let state = job.state();
            ServiceError::Conflict {
                message: format!("article is not verified yet (state {})", state.name()),
                state,
            }
        })
    }

    pub fn render_json(&self, id: &str) -> Result<String, ServiceError> {
        let job = self.job(id)?;
        Ok(self.verified_data(&job)?.render_json.clone())
    }

    pub fn log_text(&self, id: &str) -> Result<String, ServiceError> {
        let job = self.job(id)?;
        let path = job.log_path();
        fs::read_to_string(&path).map_err(io_err(&path))
    }

    pub fn obligations(&self, id: &str) -> Result<Vec<ObligationEntry>, ServiceError> {
        let job = self.job(id)?;
        let data = self.verified_data(&job)?;
        Ok(data
            .report
            .obligations
            .iter()
            .map(|o| ObligationEntry {
                id: o.id.clone(),
                item: o.item.clone(),
                step: o.step,
                status: o.status.name().to_string(),
                millis: o.millis,
                refs: o.refs.clone(),
                generated: job.problem_path(&o.id).exists(),
            })
            .collect())
    }

    fn obligation<'d>(&self, data: &'d JobData, oid: &str) -> Result<&'d Obligation, ServiceError> {
        data.obligations
            .iter()
            .find(|o| o.id == oid)
            .ok_or_else(|| ServiceError::UnknownObligation(oid.to_string()))
    }

    pub fn problem_text(&self, id: &str, oid: &str) -> Result<String, ServiceError> {
        let job = self.job(id)?;
        let data = self.verified_data(&job)?;
        self.obligation(&data, oid)?;
        fs::read_to_string(job.problem_path(oid)).map_err(|_| ServiceError::Conflict {
            message: format!("problem `{oid}` is not yet generated"),
            state: job.state(),
        })
    }

    fn system(&self, name: Option<&str>) -> Result<&ProverSystem, ServiceError> {
        let name = name.unwrap_or(&self.config.primary);
        self.config
            .systems
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| ServiceError::BadRequest(format!("unknown prover system `{name}`")))
    }

    fn reference(&self, job: &JobHandle, data: &JobData, o: &Obligation, name: &str) -> ReferenceInfo {
        let lib = self.library();
        let local_items = export_items(&data.article);
        let scope = scope_type_axioms(o);
        let found = o
            .explicit_refs
            .iter()
            .chain(&local_items)
            .chain(&scope)
            .find(|i| i.name == name)
            .cloned()
            .or_else(|| lib.get(name).cloned());
        match found {
            Some(item) => {
                let anchor = if item.article == data.article.name {
                    match item.kind {
                        ExportKind::FunctorType => format!("#func-{}", item.source),
                        ExportKind::ConstantType => format!("#item-{}", o.item),
                        ExportKind::Step => format!("#step-{}", item.source),
                        ExportKind::Theorem | ExportKind::Definition => format!("#item-{}", item.source),
                    }
                } else {
                    format!("/library/{}", item.name)
                };
                ReferenceInfo {
                    name: name.to_string(),
                    kind: Some(item.kind),
                    title: item.title(),
                    anchor,
                }
            }
            None => ReferenceInfo {
                name: name.to_string(),
                kind: None,
                title: name.to_string(),
                anchor: format!("/articles/{}/obligations/{}/problem", job.id, o.id),
            },
        }
    }

    /// Runs one prover on a generated problem.
    pub fn prove(&self, id: &str, oid: &str, req: &ProveRequest) -> Result<Explanation, ServiceError> {
        let job = self.job(id)?;
        let data = self.verified_data(&job)?;
        let o = self.obligation(&data, oid)?.clone();
        let sys = self.system(req.system.as_deref())?.clone();
        let cpu = match req.cpu {
            Some(c) if !(c.is_finite() && c > 0.0) => {
                return Err(ServiceError::BadRequest(format!("invalid cpu limit {c}")));
            }
            Some(c) => c,
            None => sys.default_cpu,
        };
        let problem = job.problem_path(oid);
        let text = fs::read_to_string(&problem).map_err(|_| ServiceError::Conflict {
            message: format!("problem `{oid}` is not yet generated"),
            state: job.state(),
        })?;
        let out_path = {
            let mut runs = job.runs.lock().unwrap();
            let seq = runs.iter().filter(|(o, r)| *o == oid && r.system == sys.name).count() + 1;
            let path = job.dir.join("runs").join(format!("{oid}.{}.{seq}.out", sys.name));
            // reserve the sequence number before the run
            runs.push((
                oid.to_string(),
                RunResult {
                    system: sys.name.clone(),
                    status: SzsStatus::GaveUp,
                    cpu_millis: 0,
                    wall_millis: 0,
                    used_axioms: None,
                    raw_output_path: Some(path.clone()),
                    output: String::new(),
                },
            ));
            path
        };
        let limits = Limits::default().with_cpu(cpu);
        let statements = parse_tptp(&text).map_err(|e| ServiceError::Internal(e.to_string()))?;
        let (axioms, conjecture): (Vec<NamedFormula>, Option<NamedFormula>) = {
            let mut ax = Vec::new();
            let mut conj = None;
            for s in statements {
                let nf = NamedFormula::new(s.name, s.formula);
                if s.role == "conjecture" {
                    conj = Some(nf);
                } else {
                    ax.push(nf);
                }
            }
            (ax, conj)
        };
        let result = match sys.kind {
            ProverKind::Internal => {
                let mut r = prove_formulas(&axioms, conjecture.as_ref(), &limits);
                r.system = sys.name.clone();
                write_atomic(&out_path, r.output.as_bytes()).map_err(io_err(&out_path))?;
                r.raw_output_path = Some(out_path.clone());
                r
            }
            ProverKind::External => run_external(&sys, &problem, &limits, &out_path),
        };
        {
            let mut runs = job.runs.lock().unwrap();
            if let Some(slot) = runs.iter_mut().find(|(_, r)| r.raw_output_path.as_deref() == Some(out_path.as_path())) {
                slot.1 = result.clone();
            }
        }
        let self_check = match (&result.status, &result.used_axioms) {
            (SzsStatus::Theorem, Some(used)) => {
                let keep: BTreeSet<&String> = used.iter().collect();
                let kept: Vec<NamedFormula> = axioms.iter().filter(|a| keep.contains(&a.name)).cloned().collect();
                Some(prove_formulas(&kept, conjecture.as_ref(), &Limits::default()).status.name().to_string())
            }
            _ => None,
        };
        let references = result
            .used_axioms
            .iter()
            .flatten()
            .filter(|n| **n != o.id)
            .map(|n| self.reference(&job, &data, &o, n))
            .collect();
        let file = out_path.file_name().map(|f| f.to_string_lossy().to_string()).unwrap_or_default();
        let _ = job.log(&format!(
            "prove {oid} {} {} {}ms",
            sys.name,
            result.status.name(),
            result.wall_millis
        ));
        Ok(Explanation {
            article: data.article.name.clone(),
            obligation: oid.to_string(),
            system: sys.name.clone(),
            status: result.status.name().to_string(),
            message: match &result.status {
                SzsStatus::Error(m) => Some(m.clone()),
                _ => None,
            },
            references,
            cpu_millis: result.cpu_millis,
            wall_millis: result.wall_millis,
            raw_output: Some(format!("/articles/{}/runs/{file}", job.id)),
            hints_available: result.status != SzsStatus::Theorem,
            self_check,
        })
    }

    /// Raw prover output of one run.
    pub fn run_output(&self, id: &str, file: &str) -> Result<String, ServiceError> {
        let job = self.job(id)?;
        if file.contains('/') || file.starts_with('.') {
            return Err(ServiceError::BadRequest(format!("bad run file `{file}`")));
        }
        fs::read_to_string(job.dir.join("runs").join(file)).map_err(|_| ServiceError::UnknownItem(file.to_string()))
    }

    /// Top-k premises for an obligation among the library and the items
    /// before it in its own article.
    pub fn hints(&self, id: &str, oid: &str, k: Option<usize>) -> Result<HintsDocument, ServiceError> {
        let k = k.unwrap_or(20);
        if k == 0 {
            return Err(ServiceError::BadRequest("k must be positive".into()));
        }
        let job = self.job(id)?;
        let data = self.verified_data(&job)?;
        let o = self.obligation(&data, oid)?;
        let start = Instant::now();
        let goal = goal_symbols(&o.conjecture, &o.scope);
        let lib = self.library();
        let mut local: BTreeSet<String> = data.local.iter().map(|i| i.name.clone()).collect();
        let exported = export_items(&data.article);
        for (item, e) in data.article.items.iter().zip(&exported) {
            if item.label == o.item {
                break;
            }
            local.insert(e.name.clone());
        }
        let hints: HintList = self
            .advisor()
            .suggest_hints_among(&goal, k, |p| local.contains(p) || lib.get(p).is_some());
        let _ = job.log(&format!(
            "hints {oid} {} in {}us",
            hints.ranked.len(),
            start.elapsed().as_micros()
        ));
        Ok(HintsDocument {
            obligation: oid.to_string(),
            goal_symbols: goal,
            ranked: hints.ranked,
        })
    }

    pub fn library_list(&self) -> Vec<LibraryEntry> {
        self.library()
            .items()
            .map(|i| LibraryEntry {
                name: i.name.clone(),
                kind: i.kind,
                article: i.article.clone(),
                title: i.title(),
            })
            .collect()
    }

    pub fn library_item(&self, name: &str) -> Result<LibraryItemDocument, ServiceError> {
        let lib = self.library();
        let i = lib.get(name).ok_or_else(|| ServiceError::UnknownItem(name.to_string()))?;
        let declaration = match i.kind {
            ExportKind::FunctorType => format!("#func-{}", i.source),
            _ => format!("#item-{}", i.source),
        };
        Ok(LibraryItemDocument {
            name: i.name.clone(),
            kind: i.kind,
            article: i.article.clone(),
            source: i.source.clone(),
            title: i.title(),
            formula: proofdesk_core::article::formula_to_mfl(&i.formula),
            tptp: proofdesk_core::formula::tptp::formula_to_tptp(&i.formula),
            typed_symbol: i.typed_symbol.clone(),
            anchor: format!("/library/{}", i.name),
            declaration,
        })
    }

    /// Exports a verified article into the library and retrains the
    /// advisor with its harvest.
    pub fn install(&self, id: &str, force: bool) -> Result<InstallDocument, ServiceError> {
        let job = self.job(id)?;
        let data = self.verified_data(&job)?;
        let state = job.state();
        if state == JobState::Failed {
            return Err(ServiceError::Conflict {
                message: "article job failed".into(),
                state,
            });
        }
        let _guard = self.install.lock().unwrap();
        let items = export_article(&data.article, &data.report, force).map_err(|e| ServiceError::Conflict {
            message: e.to_string(),
            state,
        })?;
        let names: Vec<String> = items.iter().map(|i| i.name.clone()).collect();
        let old = self.library();
        let mut lib = (*old).clone();
        lib.add_article(&data.article.name, items).map_err(|e| ServiceError::Conflict {
            message: e.to_string(),
            state,
        })?;
        lib.save_article(&self.library_dir(), &data.article.name)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let problems: Vec<TptpProblem> = data
            .obligations
            .iter()
            .filter_map(|o| generate_problem(o, &old, &data.local).ok())
            .collect();
        let runs: Vec<(String, RunResult)> = job.runs.lock().unwrap().clone();
        let examples = harvest(&data.report, &data.obligations, &problems, &runs);
        let path = self.training_dir().join(format!("{}.json", data.article.name));
        write_atomic(&path, to_json(&examples).as_bytes()).map_err(io_err(&path))?;
        *self.library.write().unwrap() = Arc::new(lib);
        self.retrain()?;
        let _ = job.log(&format!("installed {} items, {} training examples", names.len(), examples.len()));
        Ok(InstallDocument {
            article: data.article.name.clone(),
            items: names,
            training_examples: examples.len(),
        })
    }
}
