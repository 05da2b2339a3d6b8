//! The `erogers` command line. Each subcommand parses its flags, calls one
//! library operation and renders the result; no computation happens here.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{self, theorem_bounds};
use crate::clique::{find_clique, max_clique_free_subset, DEFAULT_NODE_BUDGET};
use crate::coloring::{covering_threshold_experiment, estimate_clique_probability, Coloring};
use crate::error::Error;
use crate::exact::{self, f_exact, ramsey_number, verify_upper_witness, DEFAULT_ENUMERATION_BUDGET};
use crate::extraction::extract_witness;
use crate::hypergraph::KUniformHypergraph;
use crate::packing::{exact_max_packing, greedy_packing};
use crate::vertex_set::VertexSet;

const SCHEMA_HELP: &str = "\
JSON output (default) is one object with stable keys:
  command        subcommand name
  parameters     every parameter that affects the result, seed resolved
  <payload>      result fields of the subcommand, at top level
  certificates   witness vertex lists backing the result
  manifest       {subcommand, parameters, seed, version, checksums}
checksums hold SHA-256 of the payload+certificates JSON (\"result\"), of CSV
output (\"csv\") and of any --graph-out / --dump-coloring file.
CSV output (--format csv) is available for probability, threshold, exact,
ramsey and bounds; its manifest goes to PATH.manifest.json, or to stderr when
writing to stdout.
Exit status: 0 success, 1 domain error or failed check, 2 usage or I/O error.";

#[derive(Parser, Debug)]
#[command(name = "erogers", version, about = "Erdős–Rogers constructions, extractions and exact values", after_help = SCHEMA_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a coloring and build its K_{s+1}-free k-graph.
    Construct(ConstructArgs),
    /// Estimate the probability that a fixed s-set becomes a clique.
    Probability(ProbabilityArgs),
    /// Smallest w at which sampled w-subsets all contain K_s.
    Threshold(ThresholdArgs),
    /// Partial Steiner packing of s-subsets of [0, n).
    Packing(PackingArgs),
    /// Homogeneous-sequence extraction of a K_s-free set from a 3-graph.
    Extract(ExtractArgs),
    /// Exact f_{s,t}^{(k)}(n) by exhaustive enumeration.
    Exact(ExactArgs),
    /// Smallest n with f_{k,t}^{(k)}(n) >= u.
    Ramsey(RamseyArgs),
    /// Evaluate the asymptotic bound curves with unit constants.
    Bounds(BoundsArgs),
    /// Check that a k-graph is K_t-free with every u-subset containing K_s.
    VerifyWitness(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Seed {
    Fixed(u64),
    Random,
}

impl FromStr for Seed {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "random" {
            return Ok(Seed::Random);
        }
        s.parse()
            .map(Seed::Fixed)
            .map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Fixed(v) => write!(f, "{v}"),
            Seed::Random => f.write_str("random"),
        }
    }
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(v) => v,
            Seed::Random => rand::random(),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value = "0")]
    #[serde(skip)]
    seed: Seed,
    /// Check the result for K_{s+1} with the exact clique search.
    #[arg(long)]
    verify: bool,
    /// Also write the hypergraph file here.
    #[arg(long)]
    #[serde(skip)]
    graph_out: Option<PathBuf>,
    /// Write the coloring, one `v_1 … v_{k-1} color` line per subset.
    #[arg(long)]
    #[serde(skip)]
    dump_coloring: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ProbabilityArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value = "0")]
    #[serde(skip)]
    seed: Seed,
}

#[derive(Args, Debug, Serialize)]
struct ThresholdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value = "0")]
    #[serde(skip)]
    seed: Seed,
}

#[derive(Args, Debug, Serialize)]
struct PackingArgs {
    /// Ground set size; the ground set is [0, n).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    /// Exhaustive maximum instead of the lexicographic greedy packing.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug, Serialize)]
struct ExtractArgs {
    #[arg(long)]
    #[serde(skip)]
    input: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug, Serialize)]
struct ExactArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    /// Also write the minimizer in the hypergraph file format.
    #[arg(long)]
    #[serde(skip)]
    graph_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RamseyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    u: usize,
    /// Largest n tried.
    #[arg(long = "n")]
    n_max: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// One or more vertex counts, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    #[serde(skip)]
    input: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    u: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    parameters: Value,
    seed: Option<u64>,
    version: &'static str,
    checksums: BTreeMap<String, String>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn io_failure(what: &str, path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("cannot {what} {}: {e}", path.display()))
}

/// Everything a subcommand produced, before it is written anywhere.
struct Outcome {
    subcommand: &'static str,
    parameters: Value,
    seed: Option<u64>,
    payload: Value,
    certificates: Value,
    csv: Option<Vec<u8>>,
    files: Vec<(&'static str, PathBuf, String)>,
    log: Vec<String>,
    /// A requested check ran and failed.
    check_failed: bool,
}

impl Outcome {
    fn new(subcommand: &'static str, args: &impl Serialize, payload: Value, certificates: Value) -> Self {
        Outcome {
            subcommand,
            parameters: serde_json::to_value(args).expect("arguments serialize"),
            seed: None,
            payload,
            certificates,
            csv: None,
            files: Vec::new(),
            log: Vec::new(),
            check_failed: false,
        }
    }

    fn with_seed(mut self, seed: u64) -> Self {
        self.parameters["seed"] = json!(seed);
        self.seed = Some(seed);
        self
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing CSV to memory");
    buf
}

fn read_graph(path: &Path) -> Result<KUniformHypergraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure("read", path, e))?;
    Ok(KUniformHypergraph::parse(&text)?)
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

fn execute(command: &Command, format: Format) -> Result<Outcome, Failure> {
    let csv_ok = matches!(
        command,
        Command::Probability(_) | Command::Threshold(_) | Command::Exact(_) | Command::Ramsey(_) | Command::Bounds(_)
    );
    if format == Format::Csv && !csv_ok {
        return Err(Failure::Usage("--format csv is not available for this subcommand".into()));
    }
    match command {
        Command::Construct(a) => {
            let seed = a.seed.resolve();
            let chi = Coloring::sample(a.n, a.k, a.s, seed)?;
            let g = chi.build_hypergraph();
            let text = g.serialize();
            let mut verification = Value::Null;
            let mut out_log = Vec::new();
            let mut failed = false;
            if a.verify {
                let clique = find_clique(&g, a.s + 1)?;
                failed = clique.is_some();
                out_log.push(format!(
                    "freeness verification (no K_{}): {}",
                    a.s + 1,
                    if failed { "FAIL" } else { "PASS" }
                ));
                verification = json!({ "clique_order": a.s + 1, "clique_free": !failed, "clique": clique });
            }
            let payload = json!({
                "n": g.n(),
                "k": g.k(),
                "colors": chi.color_count(),
                "edge_count": g.edge_count(),
                "hypergraph": text,
                "verification": verification,
            });
            let certificates = json!({ "forbidden_clique": verification.get("clique").cloned().unwrap_or(Value::Null) });
            let mut out = Outcome::new("construct", a, payload, certificates).with_seed(seed);
            if let Some(p) = &a.graph_out {
                out.files.push(("graph", p.clone(), text));
            }
            if let Some(p) = &a.dump_coloring {
                out.files.push(("coloring", p.clone(), chi.dump()));
            }
            out.log = out_log;
            out.check_failed = failed;
            Ok(out)
        }
        Command::Probability(a) => {
            let seed = a.seed.resolve();
            let est = estimate_clique_probability(a.k, a.s, a.trials, seed)?;
            let mut out = Outcome::new("probability", a, to_value(&est), json!({})).with_seed(seed);
            if format == Format::Csv {
                #[derive(Serialize)]
                struct Row {
                    k: usize,
                    s: usize,
                    trials: u64,
                    successes: u64,
                    estimate: f64,
                    exact_numerator: Option<u64>,
                    exact_denominator: Option<u64>,
                    exact: Option<f64>,
                }
                let row = Row {
                    k: est.k,
                    s: est.s,
                    trials: est.trials,
                    successes: est.successes,
                    estimate: est.estimate,
                    exact_numerator: est.exact.as_ref().map(|e| e.numerator),
                    exact_denominator: est.exact.as_ref().map(|e| e.denominator),
                    exact: est.exact.as_ref().map(|e| e.value),
                };
                out.csv = Some(csv_bytes(|buf| {
                    let mut w = csv::Writer::from_writer(buf);
                    w.serialize(row)?;
                    w.flush()
                }));
            }
            Ok(out)
        }
        Command::Threshold(a) => {
            let seed = a.seed.resolve();
            let res = covering_threshold_experiment(a.n, a.k, a.s, a.samples, seed)?;
            let certificates = json!({ "failing_subset": res.failing_subset });
            let mut out = Outcome::new("threshold", a, to_value(&res), certificates).with_seed(seed);
            if format == Format::Csv {
                #[derive(Serialize)]
                struct Row {
                    n: usize,
                    k: usize,
                    s: usize,
                    w: usize,
                    tested: usize,
                    containing: usize,
                    w_star: usize,
                }
                out.csv = Some(csv_bytes(|buf| {
                    let mut w = csv::Writer::from_writer(buf);
                    for l in &res.levels {
                        w.serialize(Row {
                            n: res.n,
                            k: res.k,
                            s: res.s,
                            w: l.w,
                            tested: l.tested,
                            containing: l.containing,
                            w_star: res.w_star,
                        })?;
                    }
                    w.flush()
                }));
            }
            Ok(out)
        }
        Command::Packing(a) => {
            let ground = VertexSet::full(a.n);
            let p = if a.exact {
                exact_max_packing(&ground, a.s, a.k, a.budget)?
            } else {
                greedy_packing(&ground, a.s, a.k)?
            };
            let violation = p.verify().err();
            let failed = violation.is_some() || !p.determinants_disjoint();
            let payload = json!({
                "size": p.size(),
                "optimal": p.optimal,
                "members": p.members,
                "valid": violation.is_none(),
                "violation": violation,
                "determinants_disjoint": p.determinants_disjoint(),
                "density_ratio": p.density_ratio(),
            });
            let certificates = json!({ "members": p.members });
            let mut out = Outcome::new("packing", a, payload, certificates);
            out.check_failed = failed;
            Ok(out)
        }
        Command::Extract(a) => {
            let g = read_graph(&a.input)?;
            let trace = extract_witness(&g, a.s, a.t, a.budget)?;
            let certificates = json!({
                "sequence": trace.sequence,
                "witness": trace.witness.as_ref().map(|w| &w.vertices),
                "forbidden_clique": trace.forbidden_clique,
            });
            let mut out = Outcome::new("extract", a, to_value(&trace), certificates);
            out.parameters["input_sha256"] = json!(sha256_hex(g.serialize().as_bytes()));
            Ok(out)
        }
        Command::Exact(a) => {
            let rec = f_exact(a.k, a.s, a.t, a.n, a.budget)?;
            let inner = max_clique_free_subset(&rec.minimizer, a.s, DEFAULT_NODE_BUDGET)?;
            let text = rec.minimizer.serialize();
            let payload = json!({
                "k": rec.k,
                "s": rec.s,
                "t": rec.t,
                "n": rec.n,
                "f": rec.value,
                "graphs_scanned": rec.graphs_scanned,
                "minimizer": text,
            });
            let certificates = json!({ "minimizer_clique_free_subset": inner.witness.to_vec() });
            let mut out = Outcome::new("exact", a, payload, certificates);
            if format == Format::Csv {
                out.csv = Some(csv_bytes(|buf| exact::write_csv(std::slice::from_ref(&rec), buf)));
            }
            if let Some(p) = &a.graph_out {
                out.files.push(("graph", p.clone(), text));
            }
            Ok(out)
        }
        Command::Ramsey(a) => {
            let res = ramsey_number(a.k, a.t, a.u, a.n_max, a.budget)?;
            let payload = json!({ "k": res.k, "t": res.t, "u": res.u, "r": res.r, "rows": res.rows });
            let mut out = Outcome::new("ramsey", a, payload, json!({}));
            if format == Format::Csv {
                out.csv = Some(csv_bytes(|buf| res.write_csv(buf)));
            }
            Ok(out)
        }
        Command::Bounds(a) => {
            let reports = a
                .n
                .iter()
                .map(|&n| theorem_bounds(n, a.k, a.s, a.t))
                .collect::<Result<Vec<_>, _>>()?;
            let payload = json!({ "reports": reports, "constants_note": bounds::CONSTANTS_NOTE });
            let mut out = Outcome::new("bounds", a, payload, json!({}));
            if format == Format::Csv {
                out.csv = Some(csv_bytes(|buf| bounds::write_csv(&reports, buf)));
            }
            Ok(out)
        }
        Command::VerifyWitness(a) => {
            let g = read_graph(&a.input)?;
            let verdict = verify_upper_witness(&g, a.s, a.t, a.u, a.budget)?;
            let holds = verdict.holds();
            let payload = json!({ "holds": holds, "verdict": verdict });
            let mut out = Outcome::new("verify-witness", a, payload, to_value(&verdict));
            out.parameters["input_sha256"] = json!(sha256_hex(g.serialize().as_bytes()));
            out.log.push(format!("witness verification: {}", if holds { "PASS" } else { "FAIL" }));
            out.check_failed = !holds;
            Ok(out)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| io_failure("write", path, e))
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn emit(outcome: Outcome, cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let mut checksums = BTreeMap::new();
    let result_doc = json!({ "result": outcome.payload, "certificates": outcome.certificates });
    checksums.insert("result".to_string(), sha256_hex(result_doc.to_string().as_bytes()));
    for (role, path, text) in &outcome.files {
        write_file(path, text.as_bytes())?;
        checksums.insert(role.to_string(), sha256_hex(text.as_bytes()));
    }
    if let Some(csv) = &outcome.csv {
        checksums.insert("csv".to_string(), sha256_hex(csv));
    }
    let manifest = RunManifest {
        subcommand: outcome.subcommand,
        parameters: outcome.parameters.clone(),
        seed: outcome.seed,
        version: env!("CARGO_PKG_VERSION"),
        checksums,
    };
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));

    let (primary, manifest_doc) = match outcome.csv {
        Some(csv) if cli.format == Format::Csv => {
            let manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            (csv, Some(manifest_text))
        }
        _ => {
            let mut doc = serde_json::Map::new();
            doc.insert("command".into(), json!(outcome.subcommand));
            doc.insert("parameters".into(), outcome.parameters);
            if let Value::Object(fields) = result_doc["result"].clone() {
                doc.extend(fields);
            }
            doc.insert("certificates".into(), result_doc["certificates"].clone());
            doc.insert("manifest".into(), to_value(&manifest));
            let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("document serializes") + "\n";
            (text.into_bytes(), None)
        }
    };
    match &cli.output {
        Some(path) => {
            write_file(path, &primary)?;
            if let Some(m) = manifest_doc {
                write_file(&manifest_path(path), m.as_bytes())?;
            }
        }
        None => {
            stdout.write_all(&primary).map_err(io)?;
            if let Some(m) = manifest_doc {
                stderr.write_all(m.as_bytes()).map_err(io)?;
            }
        }
    }
    for line in &outcome.log {
        writeln!(stderr, "{line}").map_err(io)?;
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be positive".into())),
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, cli.format)),
            Err(e) => Err(Failure::Usage(format!("cannot start {threads} threads: {e}"))),
        },
        None => execute(&cli.command, cli.format),
    };

    let failed_check = matches!(&result, Ok(o) if o.check_failed);
    match result.and_then(|outcome| emit(outcome, &cli, stdout, stderr)) {
        Ok(()) if failed_check => 1,
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.name());
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
