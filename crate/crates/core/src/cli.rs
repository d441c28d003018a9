//! Command dispatch and report emission for the `cohomolab` binary.
//!
//! JSON output is an envelope `{command, config, report, timings}`; the
//! `report` part is deterministic given the inputs and configuration, and
//! wall-clock timings live outside it. CSV output has a fixed column order
//! per command. Exit codes: 0 when every verdict holds, 2 when a
//! mathematical verdict fails, 1 on input, usage or resource errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::augmentation::{les_verify, simplicial_report, vanishing_proof_path, IdealModel};
use crate::complexes::{sniper_demo, ComplexDump};
use crate::corpus::{resolve_action, resolve_group, Corpus, Manifest};
use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, is_commutative_transitive, Group};
use crate::hochschild::{hochschild_complex, DEFAULT_MEMORY_CAP};
use crate::scalars::{FieldTag, PrimeField, Rationals};
use crate::shapiro::{assemble_resolution, disintegration_report, dualize_resolution, StageTiming, TransversalChoice};

/// Schema of the JSON envelope.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Parser)]
#[command(name = "cohomolab", version, about = "Exact Hochschild cohomology of finite group algebras")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Coefficient field: q, f2, f3, f5, ...
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    pub field: FieldTag,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_degree: usize,
    /// Largest matrix (rows x columns) any single map may have.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_CAP as u64, value_parser = parse_cap)]
    pub memory_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Seed for randomized transversals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the central complex of the command as JSON to this path.
    #[arg(long, global = true)]
    pub dump_complex: Option<PathBuf>,
    /// Pick coset representatives at random (seeded by --seed).
    #[arg(long, global = true)]
    pub random_transversal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Conjugacy classes with sizes, representatives and centralizer orders.
    Classes { group: String },
    /// Whether every non-identity element has an abelian centralizer.
    Ct { group: String },
    /// Cohomology with k(S)' coefficients: brute force against stabilizers.
    Disintegrate { group: String, action: String },
    /// H^n(A, k_eps), H^n(A, A') and H^n(A, I') with the triviality verdict.
    SimplicialTriviality { group: String },
    /// Exactness of the sequence induced by k_eps -> A' -> I'.
    LesVerify { group: String },
    /// Each link of the vanishing argument for H^n(A, I').
    ProofPath { group: String },
    /// Norm of the forced splitting of the "divide by n" maps, n <= N.
    Sniper { n: usize },
    /// Corpus listing and golden-report checks.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CorpusCommand {
    /// Groups and actions in the corpus.
    List,
    /// Recompute every golden report and compare checksums.
    Check,
    /// Print the manifest with freshly computed checksums.
    Golden,
}

fn parse_field(s: &str) -> std::result::Result<FieldTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cap(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("memory cap must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Resolved configuration, echoed in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub field: FieldTag,
    pub max_degree: usize,
    pub memory_cap: u64,
    pub output: OutputFormat,
    pub seed: u64,
    pub random_transversal: bool,
}

impl From<&ConfigArgs> for RunConfig {
    fn from(a: &ConfigArgs) -> Self {
        RunConfig {
            field: a.field,
            max_degree: a.max_degree,
            memory_cap: a.memory_cap,
            output: a.output,
            seed: a.seed,
            random_transversal: a.random_transversal,
        }
    }
}

impl RunConfig {
    fn cap(&self) -> u128 {
        u128::from(self.memory_cap)
    }

    fn transversal(&self) -> TransversalChoice {
        if self.random_transversal {
            TransversalChoice::Random(self.seed)
        } else {
            TransversalChoice::Smallest
        }
    }
}

/// Runs `body` with `$f` bound to the field named by `$tag`.
macro_rules! with_field {
    ($tag:expr, $f:ident => $body:expr) => {
        match $tag {
            FieldTag::Rationals => {
                let $f = &Rationals;
                $body
            }
            FieldTag::PrimeField(p) => {
                let $f = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

/// Rows under a fixed header, shared by the CSV and text renderings.
#[derive(Debug, Clone)]
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn by_degree(header: &[&'static str], columns: &[&[usize]]) -> Self {
        let mut t = Table::new(header);
        let len = columns.iter().map(|c| c.len()).max().unwrap_or(0);
        for n in 0..len {
            let mut row = vec![n.to_string()];
            row.extend(columns.iter().map(|c| c.get(n).map_or_else(String::new, usize::to_string)));
            t.push(row);
        }
        t
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| self.rows.iter().map(|r| r[i].len()).chain([self.header[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(self.header.clone());
        for r in &self.rows {
            s += &line(r.iter().map(String::as_str).collect());
        }
        s
    }
}

/// Result of one command before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: String,
    pub config: RunConfig,
    pub report: Value,
    pub timings: Vec<StageTiming>,
    table: Table,
    summary: Vec<String>,
    /// Every mathematical verdict the command asserts holds.
    pub ok: bool,
    dump: Option<ComplexDump>,
}

impl Outcome {
    /// The envelope without timings, as a compact string.
    pub fn canonical(&self) -> String {
        json!({"command": self.command, "config": self.config, "report": self.report}).to_string()
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn envelope(&self) -> Value {
        json!({
            "command": self.command,
            "config": self.config,
            "report": self.report,
            "timings": self.timings,
        })
    }

    pub fn render(&self) -> Result<String> {
        Ok(match self.config.output {
            OutputFormat::Json => serde_json::to_string_pretty(&self.envelope()).expect("serializable envelope") + "\n",
            OutputFormat::Csv => self.table.to_csv()?,
            OutputFormat::Text => {
                let mut s = self.summary.join("\n");
                if !s.is_empty() {
                    s.push('\n');
                }
                if !self.table.rows.is_empty() {
                    s.push('\n');
                    s += &self.table.to_text();
                }
                if !self.timings.is_empty() {
                    s.push('\n');
                    for t in &self.timings {
                        s += &format!("{:<22}{:.6} s\n", t.stage, t.seconds);
                    }
                }
                s
            }
        })
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn names(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

struct Builder {
    command: String,
    config: RunConfig,
    started: Instant,
}

impl Builder {
    fn finish(self, report: Value, table: Table, summary: Vec<String>, ok: bool) -> Outcome {
        let seconds = self.started.elapsed().as_secs_f64();
        Outcome {
            command: self.command,
            config: self.config,
            report,
            timings: vec![StageTiming { stage: "total".into(), seconds }],
            table,
            summary,
            ok,
            dump: None,
        }
    }
}

fn classes(g: &Arc<Group>, b: Builder) -> Outcome {
    let cls = conjugacy_classes(g);
    let mut table = Table::new(&["class", "size", "representative", "centralizer_order"]);
    let mut list = Vec::new();
    for (i, c) in cls.iter().enumerate() {
        let rep = c[0];
        let cent = g.order() / c.len();
        table.push(vec![i.to_string(), c.len().to_string(), rep.to_string(), cent.to_string()]);
        list.push(json!({
            "class": i,
            "size": c.len(),
            "representative": rep,
            "centralizer_order": cent,
            "elements": c,
        }));
    }
    let report = json!({
        "group": g.name(),
        "order": g.order(),
        "class_count": cls.len(),
        "classes": list,
    });
    let summary = vec![format!("{}: order {}, {} conjugacy classes", g.name(), g.order(), cls.len())];
    b.finish(report, table, summary, true)
}

fn ct(g: &Arc<Group>, b: Builder) -> Outcome {
    let (verdict, witness) = is_commutative_transitive(g);
    let cell =
        |f: fn(&crate::groups::CtWitness) -> usize| witness.as_ref().map_or_else(String::new, |w| f(w).to_string());
    let mut table = Table::new(&["group", "commutative_transitive", "witness_x", "witness_a", "witness_b"]);
    table.push(vec![g.name().to_string(), verdict.to_string(), cell(|w| w.x), cell(|w| w.a), cell(|w| w.b)]);
    let report = json!({
        "group": g.name(),
        "commutative_transitive": verdict,
        "witness": witness.map(|w| json!({"x": w.x, "a": w.a, "b": w.b})),
    });
    let summary = vec![match witness {
        None => format!("{}: commutative-transitive", g.name()),
        Some(w) => format!(
            "{}: not commutative-transitive; the centralizer of {} contains {} and {}, which do not commute",
            g.name(),
            w.x,
            w.a,
            w.b
        ),
    }];
    b.finish(report, table, summary, true)
}

fn execute_in(cli: &Cli, corpus: &Corpus) -> Result<Outcome> {
    let config = RunConfig::from(&cli.config);
    let cap = config.cap();
    let max_degree = config.max_degree;
    let wants_dump = cli.config.dump_complex.is_some();
    let b = |command: &str| Builder { command: command.to_string(), config: config.clone(), started: Instant::now() };
    let no_dump = |command: &str| -> Result<()> {
        if wants_dump {
            return Err(Error::Usage(format!("--dump-complex is not available for '{command}'")));
        }
        Ok(())
    };
    match &cli.command {
        Command::Classes { group } => {
            no_dump("classes")?;
            Ok(classes(&resolve_group(corpus, group)?, b("classes")))
        }
        Command::Ct { group } => {
            no_dump("ct")?;
            Ok(ct(&resolve_group(corpus, group)?, b("ct")))
        }
        Command::Disintegrate { group, action } => {
            let g = resolve_group(corpus, group)?;
            let action = resolve_action(corpus, action, &g)?;
            let choice = config.transversal();
            let (report, dump) = with_field!(config.field, f => {
                let report = disintegration_report(&action, f, max_degree, cap, choice)?;
                let dump = if wants_dump {
                    let res = assemble_resolution(&action, f, max_degree + 1, cap, choice)?;
                    Some(dualize_resolution(&res, cap)?.complex.to_dump())
                } else {
                    None
                };
                (report, dump)
            });
            let table = Table::by_degree(
                &["degree", "oracle", "fast_path", "resolution"],
                &[&report.oracle, &report.fast_path, &report.resolution],
            );
            let ok = report.equal && report.isometric != Some(false);
            let mut summary = vec![
                format!(
                    "{} acting on {} points over {}: {} orbits, stabilizer orders {}",
                    report.group,
                    action.set_size(),
                    report.field,
                    report.orbit_count,
                    names(&report.stabilizer_orders)
                ),
                format!("oracle = fast path = resolution: {}", report.equal),
                format!("splitting homotopy max norm: {}", report.split_max_norm),
            ];
            let seconds = |stage: &str| report.timings.iter().find(|t| t.stage == stage).map(|t| t.seconds);
            if let (Some(o), Some(f)) = (seconds("oracle"), seconds("fast path")) {
                if f > 0.0 {
                    summary.push(format!("fast path speedup over oracle: {:.1}x", o / f));
                }
            }
            let timings = report.timings.clone();
            let mut value = to_value(&report);
            value.as_object_mut().expect("object").remove("timings");
            let mut out = b("disintegrate").finish(value, table, summary, ok);
            out.timings = timings;
            out.dump = dump;
            Ok(out)
        }
        Command::SimplicialTriviality { group } => {
            let g = resolve_group(corpus, group)?;
            let start = b("simplicial-triviality");
            let (report, dump) = with_field!(config.field, f => (
                simplicial_report(&g, f, max_degree, cap)?,
                ideal_dump(&g, f, max_degree, cap, wants_dump)?,
            ));
            let table = Table::by_degree(
                &["degree", "trivial_coefficients", "regular_dual", "ideal_dual"],
                &[&report.trivial_coefficients, &report.regular_dual, &report.ideal_dual],
            );
            let ok = report.modular || report.consistent;
            let summary = vec![
                format!("{} over {}: {}", report.group, report.field, report.verdict),
                format!("commutative-transitive: {}", report.commutative_transitive),
                format!(
                    "H^n(A, I') = 0: {}; phi* iso on H^n(A, k_eps) -> H^n(A, A'): {}; consistent: {}",
                    report.ideal_vanishes, report.phi_star_iso, report.consistent
                ),
            ];
            let mut out = start.finish(to_value(&report), table, summary, ok);
            out.dump = dump;
            Ok(out)
        }
        Command::LesVerify { group } => {
            let g = resolve_group(corpus, group)?;
            let start = b("les-verify");
            let (report, dump) = with_field!(config.field, f => (
                les_verify(&g, f, max_degree, cap)?,
                ideal_dump(&g, f, max_degree, cap, wants_dump)?,
            ));
            let table = Table::by_degree(
                &["degree", "h_x", "h_y", "h_z", "rank_phi", "rank_rho", "rank_connecting"],
                &[&report.h_x, &report.h_y, &report.h_z, &report.rank_phi, &report.rank_rho, &report.rank_connecting],
            );
            let exact = report.nodes.iter().all(|n| n.exact);
            let ok = exact && report.degree_zero_surjective;
            let summary = vec![
                format!("{} over {}: exact at all {} nodes: {}", report.group, report.field, report.nodes.len(), exact),
                format!("every central functional on I extends to a trace: {}", report.degree_zero_surjective),
            ];
            let mut out = start.finish(to_value(&report), table, summary, ok);
            out.dump = dump;
            Ok(out)
        }
        Command::ProofPath { group } => {
            no_dump("proof-path")?;
            let g = resolve_group(corpus, group)?;
            let start = b("proof-path");
            let report = with_field!(config.field, f => vanishing_proof_path(&g, f, max_degree, cap)?);
            let table = Table::by_degree(
                &["degree", "ideal_dual", "oracle", "fast_path"],
                &[&report.ideal_dims, &report.oracle_dims, &report.fast_path_dims],
            );
            let applies = report.field == FieldTag::Rationals && report.stabilizers_abelian;
            let ok = !applies || (report.stabilizers_vanish && report.ideal_vanishes);
            let summary = vec![
                format!(
                    "{} over {}: commutative-transitive {}, stabilizers abelian {}",
                    report.group, report.field, report.commutative_transitive, report.stabilizers_abelian
                ),
                format!(
                    "theta iso {}, splitting iso {}, stabilizers vanish {}, H^n(A, I') = 0: {}",
                    report.theta_isomorphism,
                    report.splitting_isomorphism,
                    report.stabilizers_vanish,
                    report.ideal_vanishes
                ),
            ];
            Ok(start.finish(to_value(&report), table, summary, ok))
        }
        Command::Sniper { n } => {
            no_dump("sniper")?;
            let start = b("sniper");
            let report = sniper_demo(*n)?;
            let mut table =
                Table::new(&["n", "forward_norm", "inverse_norm", "sum_of_cokernels", "max_differential_norm"]);
            table.push(vec![
                report.n.to_string(),
                report.forward_norm.clone(),
                report.inverse_norm.clone(),
                report.sum_of_cokernels.to_string(),
                report.max_differential_norm.clone(),
            ]);
            let ok = report.inverse_norm == n.to_string();
            let summary = vec![format!(
                "N = {}: every cokernel vanishes and ||F|| = {}, but the forced splitting has norm {}",
                report.n, report.forward_norm, report.inverse_norm
            )];
            Ok(start.finish(to_value(&report), table, summary, ok))
        }
        Command::Corpus { command } => {
            no_dump("corpus")?;
            corpus_command(*command, corpus, b("corpus"))
        }
    }
}

fn ideal_dump<F: crate::scalars::Field>(
    g: &Arc<Group>,
    field: &F,
    max_degree: usize,
    cap: u128,
    wanted: bool,
) -> Result<Option<ComplexDump>> {
    if !wanted {
        return Ok(None);
    }
    let ideal = IdealModel::new(g, field)?;
    Ok(Some(hochschild_complex(ideal.dual_bimodule(), max_degree, cap)?.to_dump()))
}

/// Command lines whose reports are pinned for a corpus entry.
pub fn golden_keys(corpus: &Corpus, name: &str) -> Result<Vec<String>> {
    let e = corpus.entry(name).ok_or_else(|| Error::Usage(format!("no corpus entry '{name}'")))?;
    let order = corpus.group(&e.group)?.order();
    let mut keys = vec![format!("classes {}", e.group), format!("ct {}", e.group)];
    if order <= 8 {
        keys.push(format!("simplicial-triviality {} --field q --max-degree 2", e.group));
        keys.push(format!("les-verify {} --field f2 --max-degree 2", e.group));
    }
    for a in &e.actions {
        keys.push(format!("disintegrate {} {a} --field f2 --max-degree 2", e.group));
    }
    Ok(keys)
}

/// Runs the command line `key` against `corpus` and hashes its report.
pub fn golden_digest(corpus: &Corpus, key: &str) -> Result<String> {
    let args = std::iter::once("cohomolab").chain(key.split_whitespace()).chain(["--output", "json"]);
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    Ok(execute_in(&cli, corpus)?.digest())
}

fn corpus_command(command: CorpusCommand, corpus: &Corpus, b: Builder) -> Result<Outcome> {
    match command {
        CorpusCommand::List => {
            let mut table = Table::new(&["name", "order", "actions"]);
            let mut entries = Vec::new();
            for e in corpus.entries() {
                let order = corpus.group(&e.group)?.order();
                table.push(vec![e.name.clone(), order.to_string(), e.actions.join(" ")]);
                entries.push(json!({"name": e.name, "order": order, "actions": e.actions}));
            }
            let summary = vec![format!("{} groups", entries.len())];
            Ok(b.finish(json!({"entries": entries}), table, summary, true))
        }
        CorpusCommand::Check => {
            corpus.validate()?;
            let mut table = Table::new(&["key", "expected", "actual", "matches"]);
            let mut mismatches = Vec::new();
            let mut checked = 0usize;
            for e in corpus.entries() {
                for (key, expected) in &e.golden {
                    let actual = golden_digest(corpus, key)?;
                    checked += 1;
                    let matches = &actual == expected;
                    if !matches {
                        mismatches.push(json!({"key": key, "expected": expected, "actual": actual}));
                    }
                    table.push(vec![key.clone(), expected.clone(), actual, matches.to_string()]);
                }
            }
            let ok = mismatches.is_empty();
            let summary = vec![format!("{checked} golden reports checked, {} mismatched", mismatches.len())];
            Ok(b.finish(json!({"checked": checked, "mismatches": mismatches}), table, summary, ok))
        }
        CorpusCommand::Golden => {
            let mut manifest: Manifest = corpus.manifest().clone();
            let mut table = Table::new(&["key", "digest"]);
            for e in &mut manifest.entries {
                e.golden.clear();
                for key in golden_keys(corpus, &e.name)? {
                    let d = golden_digest(corpus, &key)?;
                    table.push(vec![key.clone(), d.clone()]);
                    e.golden.insert(key, d);
                }
            }
            let summary = vec![format!("{} golden reports", table.rows.len())];
            Ok(b.finish(to_value(&manifest), table, summary, true))
        }
    }
}

/// Runs a parsed command against the corpus selected by the environment.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    execute_in(cli, &Corpus::load()?)
}

/// Parses and runs a whitespace-separated command line (without the program
/// name). Complexes are not dumped; use the binary for that.
pub fn execute_line(line: &str) -> Result<Outcome> {
    let args = std::iter::once("cohomolab").chain(line.split_whitespace());
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    if cli.config.dump_complex.is_some() {
        return Err(Error::Usage("--dump-complex needs the command-line binary".into()));
    }
    execute(&cli)
}

fn exit_code(e: &Error) -> i32 {
    if e.is_verdict_failure() {
        2
    } else {
        1
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if let (Some(path), Some(dump)) = (&cli.config.dump_complex, &outcome.dump) {
        let text = serde_json::to_string_pretty(dump).expect("serializable dump");
        if let Err(e) = std::fs::write(path, text + "\n") {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    match outcome.render() {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    }
    if outcome.ok {
        0
    } else {
        let _ = writeln!(err, "verdict failed: {}", outcome.command);
        2
    }
}
