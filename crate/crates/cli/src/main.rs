use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::{Arc, Mutex};

use clap::{Parser, Subcommand, ValueEnum};
use semprobe::encoder::{protocol, BackendSpec, EmbeddingCache, Gateway};
use semprobe::probe::{self, ProbeTask, ProbeTaskName};
use semprobe::run::{self, RunConfig, RunError};
use semprobe::textperturb::{self, PerturbationKind, Sentence, StopWords};
use semprobe::{corpus, LexicalDatabase};

#[derive(Parser)]
#[command(name = "semprobe", version, about = "Perturbation criteria and probes for sentence encoders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Synonym,
    Antonym,
    Jumble,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment grid described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config field, e.g. `--set master_seed=3` or `--set datasets.0.path=x.tsv`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Perturb sentences from a JSONL file of `{"id", "text"}` records.
    Perturb {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// WordNet database directory (synonym and antonym only).
        #[arg(long)]
        wordnet: Option<PathBuf>,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Embed sentences through a backend, filling the cache.
    Encode {
        /// Backend spec as inline JSON or a path to a JSON file.
        #[arg(long)]
        backend: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Vectors as JSONL; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate a logistic-regression probe on one task.
    Probe {
        #[arg(long)]
        task: String,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        backend: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
    },
    /// Re-render tables and figures from the reports in a run directory.
    Report {
        #[arg(long)]
        from: PathBuf,
    },
    /// Serve the mock encoder over the stdio JSON-lines protocol.
    ServeMock {
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "mock")]
        name: String,
    },
}

fn config_err(e: impl std::fmt::Display) -> RunError {
    RunError::Config(e.to_string())
}

fn data_err(e: impl std::fmt::Display) -> RunError {
    RunError::Data(e.to_string())
}

fn parse_set(s: &str) -> Result<(String, String), RunError> {
    s.split_once('=')
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .ok_or_else(|| RunError::Config(format!("--set {s:?} is not KEY=VALUE")))
}

fn parse_backend(arg: &str) -> Result<BackendSpec, RunError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| RunError::Config(format!("{arg}: {e}")))?
    };
    let mut spec: BackendSpec = serde_json::from_str(&text).map_err(|e| RunError::Config(format!("backend: {e}")))?;
    if let semprobe::BackendKind::CacheFile { path } = &mut spec.kind {
        if path.is_relative() && !arg.trim_start().starts_with('{') {
            *path = Path::new(arg).parent().unwrap_or(Path::new("")).join(&*path);
        }
    }
    spec.validate().map_err(config_err)?;
    Ok(spec)
}

fn read_sentences(path: &Path) -> Result<Vec<Sentence>, RunError> {
    let file = fs::File::open(path).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(data_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let s: Sentence = serde_json::from_str(&line)
            .map_err(|e| RunError::Data(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(s);
    }
    Ok(out)
}

fn open_out(path: &Path) -> Result<BufWriter<fs::File>, RunError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| RunError::Data(format!("{}: {e}", path.display())))
}

fn gateway(spec: BackendSpec, cache: Option<&Path>) -> Result<(Gateway, Arc<Mutex<EmbeddingCache>>), RunError> {
    let cache = Arc::new(Mutex::new(match cache {
        Some(p) => EmbeddingCache::load(p)?,
        None => EmbeddingCache::default(),
    }));
    Ok((Gateway::new(spec, Arc::clone(&cache))?, cache))
}

fn save_cache(cache: &Arc<Mutex<EmbeddingCache>>, path: Option<&Path>) -> Result<(), RunError> {
    if let Some(p) = path {
        cache.lock().expect("cache lock").save(p)?;
    }
    Ok(())
}

fn cmd_run(config: &Path, set: &[String]) -> Result<(), RunError> {
    let overrides = set.iter().map(|s| parse_set(s)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = RunConfig::load(config, &overrides)?;
    if let Some(cache) = std::env::var_os("SEMPROBE_CACHE") {
        cfg.cache_path = Some(PathBuf::from(cache));
    }
    let summary = run::run(&cfg)?;
    let done = serde_json::json!({
        "output_dir": summary.output_dir,
        "config_hash": summary.manifest.config_hash,
        "reports": summary.reports.len(),
        "probes": summary.probes.len(),
    });
    println!("{done}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_perturb(
    kind: Kind,
    n: usize,
    input: &Path,
    out: &Path,
    wordnet: Option<&Path>,
    stopwords: Option<&Path>,
    seed: u64,
) -> Result<(), RunError> {
    let kind = match kind {
        Kind::Synonym => PerturbationKind::Synonym { n },
        Kind::Antonym => PerturbationKind::Antonym,
        Kind::Jumble => PerturbationKind::Jumble { n },
    };
    let db = match wordnet {
        Some(dir) => LexicalDatabase::load(dir).map_err(data_err)?,
        None if matches!(kind, PerturbationKind::Jumble { .. }) => LexicalDatabase::default(),
        None => return Err(RunError::Config("--wordnet is required for synonym and antonym".into())),
    };
    let stop = match stopwords {
        Some(p) => StopWords::from_file(p).map_err(|e| RunError::Data(format!("{}: {e}", p.display())))?,
        None => StopWords::english(),
    };
    let sentences = read_sentences(input)?;
    let mut w = open_out(out)?;
    let (mut written, mut skipped) = (0usize, 0usize);
    for s in &sentences {
        match textperturb::perturb(s, kind, &db, &stop, textperturb::sentence_seed(seed, s)) {
            Ok(rec) => {
                writeln!(w, "{}", rec.to_json_line()).map_err(data_err)?;
                written += 1;
            }
            Err(textperturb::PerturbError::InvalidCount(c)) => {
                return Err(RunError::Config(format!("--n {c} is not a valid count")))
            }
            Err(_) => skipped += 1,
        }
    }
    w.flush().map_err(data_err)?;
    println!("{}", serde_json::json!({"written": written, "skipped": skipped}));
    Ok(())
}

fn cmd_encode(backend: &str, input: &Path, cache: Option<&Path>, out: Option<&Path>) -> Result<(), RunError> {
    let spec = parse_backend(backend)?;
    let sentences = read_sentences(input)?;
    let (g, shared) = gateway(spec, cache)?;
    let texts: Vec<String> = sentences.iter().map(|s| s.text.clone()).collect();
    let vectors = if texts.is_empty() { Vec::new() } else { g.encode_batch(&texts)? };
    save_cache(&shared, cache)?;
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(open_out(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for (s, v) in sentences.iter().zip(&vectors) {
        let line = serde_json::json!({"id": s.id, "encoder_id": v.encoder_id, "vector": v.values});
        writeln!(w, "{line}").map_err(data_err)?;
    }
    w.flush().map_err(data_err)
}

fn cmd_probe(
    task: &str,
    data: &Path,
    backend: &str,
    cache: Option<&Path>,
    seed: u64,
    lambdas: Option<Vec<f64>>,
) -> Result<(), RunError> {
    let name = ProbeTaskName::parse(task).ok_or_else(|| RunError::Config(format!("unknown task {task:?}")))?;
    let task = ProbeTask::new(name);
    let spec = parse_backend(backend)?;
    let samples = corpus::load_probe_samples(data, &task)?;
    let (g, shared) = gateway(spec, cache)?;
    let lambdas = lambdas.unwrap_or_else(probe::default_lambdas);
    let result = probe::cross_validate(&task, &samples, &g, &lambdas, seed);
    save_cache(&shared, cache)?;
    let result = result?;
    println!("{}", serde_json::to_string_pretty(&result).expect("serializable"));
    Ok(())
}

fn cmd_report(from: &Path) -> Result<(), RunError> {
    run::report_from_dir(from)?;
    let problems = run::verify_manifest(from)?;
    if !problems.is_empty() {
        return Err(RunError::Data(format!("artifact tree inconsistent: {}", problems.join("; "))));
    }
    Ok(())
}

fn cmd_serve_mock(dim: usize, seed: u64, name: &str) -> Result<(), RunError> {
    if dim == 0 {
        return Err(RunError::Config("--dim must be positive".into()));
    }
    let stdin = io::stdin().lock();
    let stdout = io::stdout().lock();
    protocol::serve(stdin, stdout, name, dim, |texts| {
        Ok(semprobe::encoder::mock_encode(texts, dim, seed))
    })
    .map_err(|e| RunError::Backend(e.to_string()))
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { config, set } => cmd_run(&config, &set),
        Command::Perturb {
            kind,
            n,
            input,
            out,
            wordnet,
            stopwords,
            seed,
        } => cmd_perturb(kind, n, &input, &out, wordnet.as_deref(), stopwords.as_deref(), seed),
        Command::Encode {
            backend,
            input,
            cache,
            out,
        } => cmd_encode(&backend, &input, cache.as_deref(), out.as_deref()),
        Command::Probe {
            task,
            data,
            backend,
            cache,
            seed,
            lambdas,
        } => cmd_probe(&task, &data, &backend, cache.as_deref(), seed, lambdas),
        Command::Report { from } => cmd_report(&from),
        Command::ServeMock { dim, seed, name } => cmd_serve_mock(dim, seed, &name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!("{report}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
