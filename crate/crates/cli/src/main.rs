//! Command-line front end: encode databases into oracle circuits, run
//! Grover searches and similarity searches on the built-in simulator,
//! benchmark the synthesis methods, and simulate circuit files.
//!
//! Machine-readable output goes to stdout (or --out); logs and warnings go
//! to stderr. The exit code is 0 only when all requested work completed.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qoracle::bench::{emit_report, run_suite, ReportFormat, SuiteConfig};
use qoracle::circuit::Circuit;
use qoracle::oracle::{
    build_grover, default_contrast, dice_coefficient, encode_database, encode_labeled, Database,
    EncodedDatabase, Entry, Label, SearchReport, TagKind,
};
use qoracle::phase::Method;
use qoracle::sim;

#[derive(Parser)]
#[command(
    name = "qoracle",
    about = "Grover oracle compiler and simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a database file into an oracle-ready circuit.
    Encode(EncodeArgs),
    /// Run a full Grover search for a query on the simulator.
    Search(SearchArgs),
    /// Run a similarity search and emit the index histogram.
    Similarity(SimilarityArgs),
    /// Benchmark synthesis methods over random databases.
    Bench(BenchArgs),
    /// Simulate a circuit file and dump the output distribution.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EntryType {
    Int,
    Str,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TagFlag {
    Exact,
    Hamming,
    Dice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ContrastFlag {
    Default,
    None,
}

#[derive(Args)]
struct EncodeArgs {
    /// Database file: JSON array, NDJSON, or fixture [{"entry","label"}].
    #[arg(long)]
    input: PathBuf,
    /// Label size in bits; defaults to log2 of the padded entry count.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "auto")]
    method: String,
    /// Where to write the circuit JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write lowered OpenQASM 2.0 here.
    #[arg(long)]
    qasm: Option<PathBuf>,
    #[arg(long = "as", value_enum)]
    as_type: Option<EntryType>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, value_enum, default_value = "exact")]
    tag: TagFlag,
    /// Number of Grover iterations, or "auto".
    #[arg(long, default_value = "auto")]
    iterations: String,
    #[arg(long, value_enum, default_value = "none")]
    contrast: ContrastFlag,
    #[arg(long, env = "QORACLE_MAX_QUBITS", default_value_t = sim::DEFAULT_QUBIT_CAP)]
    max_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "as", value_enum)]
    as_type: Option<EntryType>,
}

#[derive(Args)]
struct SimilarityArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, value_enum, default_value = "hamming")]
    tag: TagFlag,
    #[arg(long, value_enum, default_value = "default")]
    contrast: ContrastFlag,
    #[arg(long, default_value = "auto")]
    iterations: String,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, env = "QORACLE_MAX_QUBITS", default_value_t = sim::DEFAULT_QUBIT_CAP)]
    max_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "as", value_enum)]
    as_type: Option<EntryType>,
}

#[derive(Args)]
struct BenchArgs {
    /// Sizes: comma list and/or inclusive ranges of powers of two
    /// ("4..64" or "4,8,16").
    #[arg(long, default_value = "4..1024")]
    sizes: String,
    /// Comma-separated methods.
    #[arg(long, default_value = "phase-tolerant,phase-tolerant-htsp,gray")]
    methods: String,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Skip simulator verification of the synthesized circuits.
    #[arg(long, default_value_t = false)]
    no_verify: bool,
    #[arg(long, env = "QORACLE_MAX_QUBITS", default_value_t = 20)]
    max_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file overriding the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit JSON produced by `encode`.
    #[arg(long)]
    input: PathBuf,
    /// Initial basis state (default all zeros).
    #[arg(long, default_value_t = 0)]
    initial: u64,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, env = "QORACLE_MAX_QUBITS", default_value_t = sim::DEFAULT_QUBIT_CAP)]
    max_qubits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A parsed database file: plain entries or an explicit fixture labeling.
enum Loaded {
    Plain(Database),
    Fixture(Vec<(Entry, u64)>, usize),
}

impl Loaded {
    fn len(&self) -> usize {
        match self {
            Loaded::Plain(db) => db.len(),
            Loaded::Fixture(pairs, _) => pairs.len(),
        }
    }

    fn all_ints(&self) -> bool {
        let entries: Box<dyn Iterator<Item = &Entry>> = match self {
            Loaded::Plain(db) => Box::new(db.entries.iter()),
            Loaded::Fixture(pairs, _) => Box::new(pairs.iter().map(|(e, _)| e)),
        };
        let mut any = false;
        for e in entries {
            any = true;
            if !matches!(e, Entry::Int(_)) {
                return false;
            }
        }
        any
    }
}

fn value_to_entry(value: &serde_json::Value, as_type: Option<EntryType>) -> Result<Entry> {
    match (value, as_type) {
        (serde_json::Value::String(s), Some(EntryType::Int)) => Ok(Entry::Int(
            s.parse()
                .with_context(|| format!("{s:?} is not an integer"))?,
        )),
        (serde_json::Value::String(s), _) => Ok(Entry::Str(s.clone())),
        (serde_json::Value::Number(n), Some(EntryType::Str)) => Ok(Entry::Str(n.to_string())),
        (serde_json::Value::Number(n), _) => Ok(Entry::Int(
            n.as_i64()
                .ok_or_else(|| anyhow!("{n} is not a 64-bit integer"))?,
        )),
        (other, _) => bail!("unsupported entry {other}"),
    }
}

fn load_database(path: &PathBuf, as_type: Option<EntryType>) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(&text)?;
        if values.is_empty() {
            bail!("database file is empty");
        }
        if values.iter().all(|v| v.is_object()) {
            // Fixture format: [{"entry": ..., "label": "0101"}].
            let mut pairs = Vec::new();
            let mut k = None;
            for v in &values {
                let entry = value_to_entry(
                    v.get("entry")
                        .ok_or_else(|| anyhow!("fixture item without entry"))?,
                    as_type,
                )?;
                let label_text = v
                    .get("label")
                    .and_then(|l| l.as_str())
                    .ok_or_else(|| anyhow!("fixture item without label"))?;
                let label = Label::from_bitstring(label_text)?;
                match k {
                    None => k = Some(label.k),
                    Some(k) if k != label.k => bail!("fixture labels have mixed widths"),
                    _ => {}
                }
                pairs.push((entry, label.value));
            }
            return Ok(Loaded::Fixture(pairs, k.expect("nonempty")));
        }
        let entries = values
            .iter()
            .map(|v| value_to_entry(v, as_type))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Loaded::Plain(Database::new(entries)?));
    }
    // NDJSON: one JSON value (or raw string) per line.
    let mut entries = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let entry = match serde_json::from_str::<serde_json::Value>(line) {
            Ok(v) => value_to_entry(&v, as_type)?,
            Err(_) => value_to_entry(&serde_json::Value::String(line.to_string()), as_type)?,
        };
        entries.push(entry);
    }
    Ok(Loaded::Plain(Database::new(entries)?))
}

fn default_k(loaded: &Loaded, flag: Option<usize>) -> usize {
    match loaded {
        Loaded::Fixture(_, k) => *k,
        Loaded::Plain(db) => {
            flag.unwrap_or_else(|| db.len().next_power_of_two().max(2).trailing_zeros() as usize)
        }
    }
}

fn encode(loaded: &Loaded, k: usize, method: Method) -> Result<EncodedDatabase> {
    Ok(match loaded {
        Loaded::Plain(db) => encode_database(db, k, method)?,
        Loaded::Fixture(pairs, _) => encode_labeled(pairs, k, method)?,
    })
}

fn parse_query(raw: &str, loaded: &Loaded, as_type: Option<EntryType>) -> Entry {
    let as_int = match as_type {
        Some(EntryType::Int) => true,
        Some(EntryType::Str) => false,
        None => loaded.all_ints(),
    };
    if as_int {
        if let Ok(i) = raw.parse::<i64>() {
            return Entry::Int(i);
        }
    }
    Entry::Str(raw.to_string())
}

fn parse_iterations(raw: &str) -> Result<Option<usize>> {
    if raw == "auto" {
        return Ok(None);
    }
    Ok(Some(
        raw.parse()
            .context("iterations must be a count or 'auto'")?,
    ))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn tag_for<'a>(
    tag: TagFlag,
    contrast: ContrastFlag,
    enc: &EncodedDatabase,
    query_label: u64,
    measure: &'a mut Option<Box<dyn Fn(u64) -> f64>>,
) -> Result<TagKind<'a>> {
    Ok(match tag {
        TagFlag::Exact => TagKind::Exact,
        TagFlag::Hamming => TagKind::Hamming,
        TagFlag::Dice => {
            let k = enc.k;
            if k > 12 {
                bail!("dice tag needs k <= 12 (got {k})");
            }
            let query = Label::new(query_label, k)?;
            *measure = Some(Box::new(move |y: u64| {
                dice_coefficient(&query, &Label::new(y, k).expect("k checked")).expect("same k")
            }));
            TagKind::Advanced {
                measure: measure.as_ref().expect("just set"),
                contrast: match contrast {
                    ContrastFlag::Default => Some(&default_contrast),
                    ContrastFlag::None => None,
                },
            }
        }
    })
}

struct SearchSpec {
    method: Method,
    tag: TagFlag,
    contrast: ContrastFlag,
    iterations: Option<usize>,
    max_qubits: usize,
}

fn run_search_like(
    loaded: &Loaded,
    k: usize,
    query: &Entry,
    spec: &SearchSpec,
) -> Result<(SearchReport, Vec<String>)> {
    let enc = encode(loaded, k, spec.method)?;
    let query_label = enc.labeling.label_of(query, enc.k)?;
    let mut measure_slot: Option<Box<dyn Fn(u64) -> f64>> = None;
    let tag_kind = tag_for(
        spec.tag,
        spec.contrast,
        &enc,
        query_label.value,
        &mut measure_slot,
    )?;
    let grover = build_grover(&enc, query, &tag_kind, spec.iterations)?;
    let state = sim::run_capped(&grover.circuit, None, spec.max_qubits)?;
    let dist = sim::measure_distribution(&state, qoracle::oracle::INDEX_REGISTER)?;
    let mut warnings = grover.warnings.clone();
    let n = dist.len() as f64;
    if dist.iter().copied().fold(0.0, f64::max) < 1.5 / n {
        warnings.push("no winner: distribution is near uniform".into());
    }
    Ok((
        SearchReport::from_distribution(dist, grover.iterations, grover.estimated_m),
        warnings,
    ))
}

fn cmd_encode(args: EncodeArgs) -> Result<()> {
    let loaded = load_database(&args.input, args.as_type)?;
    let k = default_k(&loaded, args.k);
    let method: Method = args.method.parse()?;
    let enc = encode(&loaded, k, method)?;
    let lowered = enc.circuit.lower()?;
    let metrics = lowered.metrics()?;
    if let Some(qasm_path) = &args.qasm {
        fs::write(qasm_path, lowered.to_qasm2()?)?;
        eprintln!("wrote {}", qasm_path.display());
    }
    write_output(&args.out, &enc.circuit.to_json()?)?;
    let stats = serde_json::json!({
        "entries": loaded.len(),
        "k": enc.k,
        "index_qubits": enc.n_index,
        "ancillas": enc.ancillas,
        "method": enc.method.to_string(),
        "padded": enc.padded,
        "metrics": metrics,
    });
    eprintln!("{}", serde_json::to_string_pretty(&stats)?);
    Ok(())
}

fn cmd_search(args: SearchArgs) -> Result<()> {
    let loaded = load_database(&args.input, args.as_type)?;
    let k = default_k(&loaded, args.k);
    let query = parse_query(&args.query, &loaded, args.as_type);
    let spec = SearchSpec {
        method: args.method.parse()?,
        tag: args.tag,
        contrast: args.contrast,
        iterations: parse_iterations(&args.iterations)?,
        max_qubits: args.max_qubits,
    };
    let (report, warnings) = run_search_like(&loaded, k, &query, &spec)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    write_output(&args.out, &serde_json::to_string_pretty(&report)?)
}

fn cmd_similarity(args: SimilarityArgs) -> Result<()> {
    let loaded = load_database(&args.input, args.as_type)?;
    let k = default_k(&loaded, args.k);
    let query = parse_query(&args.query, &loaded, args.as_type);
    let tag = match args.tag {
        TagFlag::Exact => bail!("similarity needs --tag hamming or dice"),
        other => other,
    };
    let spec = SearchSpec {
        method: args.method.parse()?,
        tag,
        contrast: args.contrast,
        iterations: parse_iterations(&args.iterations)?,
        max_qubits: args.max_qubits,
    };
    let (report, warnings) = run_search_like(&loaded, k, &query, &spec)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let content = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)?,
        "csv" => {
            let mut out = String::from("index,p\n");
            for (i, p) in report.probabilities.iter().enumerate() {
                out.push_str(&format!("{i},{p}\n"));
            }
            out
        }
        other => bail!("similarity format must be json or csv (got {other})"),
    };
    write_output(&args.out, &content)
}

fn parse_sizes(raw: &str) -> Result<Vec<usize>> {
    let mut sizes = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.parse()?;
            let hi: usize = hi.parse()?;
            let mut s = lo.next_power_of_two().max(lo);
            while s <= hi {
                sizes.push(s);
                s *= 2;
            }
        } else if !part.is_empty() {
            sizes.push(part.parse()?);
        }
    }
    if sizes.is_empty() {
        bail!("no sizes given");
    }
    Ok(sizes)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let mut cfg = SuiteConfig {
        sizes: parse_sizes(&args.sizes)?,
        methods: args
            .methods
            .split(',')
            .map(|m| m.trim().to_string())
            .filter(|m| !m.is_empty())
            .collect(),
        trials: args.trials,
        base_seed: args.seed,
        verify_qubit_cap: args.max_qubits,
        verify: !args.no_verify,
    };
    let mut format = args.format.clone();
    let mut out = args.out.clone();
    if let Some(path) = &args.config {
        // The config file carries the suite fields plus optional "format"
        // and "out" keys; SuiteConfig ignores the extras.
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).context("parsing benchmark config")?;
        if let Some(f) = value.get("format").and_then(|v| v.as_str()) {
            format = f.to_string();
        }
        if let Some(o) = value.get("out").and_then(|v| v.as_str()) {
            out = Some(PathBuf::from(o));
        }
        cfg = serde_json::from_value(value).context("parsing benchmark config")?;
    }
    let format: ReportFormat = format.parse()?;
    eprintln!(
        "benchmarking sizes {:?} methods {:?} trials {}",
        cfg.sizes, cfg.methods, cfg.trials
    );
    let result = run_suite(&cfg)?;
    write_output(&out, &emit_report(&result, format)?)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)?;
    let circuit = Circuit::from_json(&text)?;
    let state = sim::run_capped(&circuit, Some(args.initial), args.max_qubits)?;
    let probs = state.probabilities();
    let width = circuit.num_qubits();
    let content = match args.format.as_str() {
        "json" => {
            let items: Vec<serde_json::Value> = probs
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    serde_json::json!({
                        "index": i,
                        "bitstring": format!("{i:0width$b}"),
                        "probability": p,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&items)?
        }
        "csv" => {
            let mut out = String::from("index,bitstring,probability\n");
            for (i, p) in probs.iter().enumerate() {
                out.push_str(&format!("{i},{i:0width$b},{p}\n"));
            }
            out
        }
        other => bail!("simulate format must be json or csv (got {other})"),
    };
    write_output(&args.out, &content)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Search(args) => cmd_search(args),
        Command::Similarity(args) => cmd_similarity(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
