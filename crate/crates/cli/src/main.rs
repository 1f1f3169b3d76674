use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use corefud::align::MatchPolicy;
use corefud::baselines::{run_baseline, Rule};
use corefud::conllu::{parse_file, write_file, Corpus};
use corefud::metrics::{evaluate, DatasetInput, EvalOptions, Metric};
use corefud::model::CorefDoc;
use corefud::stats;
use corefud::transforms::Transform;
use corefud::Error;

mod report;

#[derive(Parser)]
#[command(name = "corefud", version, about = "Score, validate and transform CorefUD coreference files")]
struct Cli {
    /// Worker threads for document-level parallelism (default: all cores).
    #[arg(long, short = 'j', global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score response files against key files.
    Score(ScoreArgs),
    /// Check that files parse and their coreference layers are well formed.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Entity and mention statistics.
    Stats(StatsArgs),
    /// Rewrite the coreference layer.
    Transform(TransformArgs),
    /// Run the rule-based predictors.
    Baseline(BaselineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Args)]
struct ScoreArgs {
    /// KEY RESPONSE, as a shorthand for -k KEY -r RESPONSE.
    #[arg(num_args = 0..=2, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Key file, one per dataset.
    #[arg(short = 'k', long = "key")]
    keys: Vec<PathBuf>,
    /// Response file, paired with the key file at the same position.
    #[arg(short = 'r', long = "response")]
    responses: Vec<PathBuf>,
    /// Named response set `NAME:FILE[,FILE…]`; repeat for several systems.
    #[arg(long = "system", value_name = "NAME:FILES")]
    systems: Vec<String>,
    #[arg(long = "match", value_enum, default_value = "partial")]
    policy: PolicyArg,
    #[arg(long)]
    keep_singletons: bool,
    /// Comma-separated subset of muc,bcub,ceafe,conll,blanc,lea,mor,zero.
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<Metric>,
    #[arg(long, value_name = "UPOS")]
    upos_filter: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    per_doc: bool,
    /// Also write the report to this file.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Partial,
    Exact,
    Head,
}

impl From<PolicyArg> for MatchPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Partial => MatchPolicy::Partial,
            PolicyArg::Exact => MatchPolicy::Exact,
            PolicyArg::Head => MatchPolicy::Head,
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Count mentions of singleton entities too.
    #[arg(long)]
    include_singletons: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Comma-separated: reduce-to-head, merge-same-span, conservative-head-reduce, remove-singletons.
    #[arg(long, value_delimiter = ',', required = true)]
    ops: Vec<Transform>,
    /// Output file (single input only; default stdout).
    #[arg(short = 'o', long, conflicts_with = "out_dir")]
    output: Option<PathBuf>,
    /// Directory for outputs, named after the inputs.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Comma-separated: propn-lemma, pronoun-gender.
    #[arg(long, value_delimiter = ',', required = true)]
    rules: Vec<Rule>,
    /// Apply propn-lemma only to these datasets (file stems); default all.
    #[arg(long, value_delimiter = ',')]
    propn_datasets: Option<Vec<String>>,
    /// Drop existing coreference annotation before running the rules.
    #[arg(long)]
    strip: bool,
    #[arg(short = 'o', long, conflicts_with = "out_dir")]
    output: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Failure carrying its exit code: 2 for bad input, 3 for key/response pairing.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Pairing(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            log::warn!("could not configure {n} workers: {e}");
        }
    }
    let result = match cli.command {
        Command::Score(a) => cmd_score(a),
        Command::Validate { files } => cmd_validate(&files),
        Command::Stats(a) => cmd_stats(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Baseline(a) => cmd_baseline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_corpus(path: &Path) -> Result<Corpus, Failure> {
    let bytes =
        fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_file(&bytes).map_err(|source| {
        Failure::from(Error::Parse {
            path: path.display().to_string(),
            source,
        })
    })
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<Corpus>, Failure> {
    paths.par_iter().map(|p| read_corpus(p)).collect()
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::input(e.to_string()))
        }
    }
}

fn cmd_score(a: ScoreArgs) -> Result<(), Failure> {
    let mut keys = a.keys.clone();
    let mut responses = a.responses.clone();
    match a.files.len() {
        0 => {}
        2 => {
            keys.insert(0, a.files[0].clone());
            responses.insert(0, a.files[1].clone());
        }
        _ => return Err(Failure::input("positional files must be KEY RESPONSE")),
    }
    let mut systems: Vec<(String, Vec<PathBuf>)> = Vec::new();
    if !responses.is_empty() {
        systems.push(("response".to_string(), responses));
    }
    for s in &a.systems {
        let (name, files) = s
            .split_once(':')
            .ok_or_else(|| Failure::input(format!("--system expects NAME:FILES, got `{s}`")))?;
        systems.push((name.to_string(), files.split(',').map(PathBuf::from).collect()));
    }
    if keys.is_empty() || systems.is_empty() {
        return Err(Failure::input("need at least one key and one response file"));
    }
    for (name, files) in &systems {
        if files.len() != keys.len() {
            return Err(Failure::input(format!(
                "{name}: {} response files for {} key files",
                files.len(),
                keys.len()
            )));
        }
    }

    let opts = EvalOptions {
        policy: a.policy.into(),
        keep_singletons: a.keep_singletons,
        metrics: if a.metrics.is_empty() {
            Metric::ALL.into_iter().collect()
        } else {
            a.metrics.iter().copied().collect::<BTreeSet<_>>()
        },
        upos_filter: a.upos_filter.clone(),
        per_doc: a.per_doc,
    };
    let key_corpora = read_all(&keys)?;
    let names: Vec<String> = keys.iter().map(|p| dataset_name(p)).collect();
    let mut reports = Vec::new();
    for (sys, files) in &systems {
        let resp_corpora = read_all(files)?;
        let inputs: Vec<DatasetInput> = names
            .iter()
            .zip(&key_corpora)
            .zip(&resp_corpora)
            .map(|((name, key), response)| DatasetInput {
                name,
                key,
                response,
            })
            .collect();
        reports.push((sys.clone(), evaluate(&inputs, &opts)?));
    }

    let text = match a.format {
        Format::Text => report::text(&reports, &opts),
        Format::Json => report::json(&reports, &opts),
        Format::Tsv => report::tsv(&reports, &opts),
    };
    print!("{text}");
    if let Some(p) = &a.output {
        write_out(Some(p), text.as_bytes())?;
    }
    Ok(())
}

fn cmd_validate(files: &[PathBuf]) -> Result<(), Failure> {
    let mut failed = None;
    for path in files {
        let outcome = read_corpus(path).and_then(|corpus| {
            let entities: usize = corpus
                .documents
                .par_iter()
                .map(|d| CorefDoc::build(d).map(|l| l.entities().len()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::from(Error::from(e)))?
                .into_iter()
                .sum();
            Ok((corpus.documents.len(), entities))
        });
        match outcome {
            Ok((docs, entities)) => {
                println!("{}: OK ({docs} documents, {entities} entities)", path.display())
            }
            Err(f) => {
                eprintln!("{}", f.message);
                failed = Some(f);
            }
        }
    }
    match failed {
        Some(f) => Err(Failure {
            code: f.code,
            message: "validation failed".into(),
        }),
        None => Ok(()),
    }
}

fn cmd_stats(a: StatsArgs) -> Result<(), Failure> {
    let corpora = read_all(&a.files)?;
    let mut rows = Vec::new();
    for (path, corpus) in a.files.iter().zip(&corpora) {
        let per_doc = corpus
            .documents
            .par_iter()
            .map(|d| CorefDoc::build(d).map(|l| stats::collect(&l, a.include_singletons)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::from(Error::from(e)))?;
        let mut total = stats::StatsCounts::default();
        for c in &per_doc {
            total += c;
        }
        rows.push((dataset_name(path), total));
    }
    let out = match a.format {
        Format::Text => report::stats_text(&rows),
        Format::Tsv => report::stats_tsv(&rows),
        Format::Json => report::stats_json(&rows),
    };
    print!("{out}");
    Ok(())
}

fn output_paths(
    files: &[PathBuf],
    output: &Option<PathBuf>,
    out_dir: &Option<PathBuf>,
) -> Result<Vec<Option<PathBuf>>, Failure> {
    match (output, out_dir) {
        (Some(o), None) if files.len() == 1 => Ok(vec![Some(o.clone())]),
        (Some(_), None) => Err(Failure::input("-o takes a single input; use --out-dir")),
        (None, Some(dir)) => {
            fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            Ok(files
                .iter()
                .map(|f| Some(dir.join(f.file_name().unwrap_or_default())))
                .collect())
        }
        (None, None) if files.len() == 1 => Ok(vec![None]),
        _ => Err(Failure::input("several inputs need --out-dir")),
    }
}

/// Rewrite each document's layer with `f`; documents left unchanged keep their bytes.
fn rewrite(
    corpus: &Corpus,
    f: &(dyn Fn(&mut CorefDoc) -> bool + Sync),
) -> Result<Corpus, Failure> {
    let documents = corpus
        .documents
        .par_iter()
        .map(|d| {
            let mut layer = CorefDoc::build(d)?;
            if f(&mut layer) {
                layer.to_document()
            } else {
                Ok(d.clone())
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::from(Error::from(e)))?;
    Ok(Corpus {
        documents,
        ..corpus.clone()
    })
}

fn cmd_transform(a: TransformArgs) -> Result<(), Failure> {
    let outputs = output_paths(&a.files, &a.output, &a.out_dir)?;
    for (path, out) in a.files.iter().zip(outputs) {
        let corpus = read_corpus(path)?;
        let ops = a.ops.clone();
        let result = rewrite(&corpus, &move |layer: &mut CorefDoc| {
            ops.iter().fold(false, |changed, op| op.apply(layer) || changed)
        })?;
        write_out(out.as_deref(), &write_file(&result))?;
    }
    Ok(())
}

fn cmd_baseline(a: BaselineArgs) -> Result<(), Failure> {
    let outputs = output_paths(&a.files, &a.output, &a.out_dir)?;
    for (path, out) in a.files.iter().zip(outputs) {
        let corpus = read_corpus(path)?;
        let name = dataset_name(path);
        let propn = a
            .propn_datasets
            .as_ref()
            .map_or(true, |list| list.iter().any(|d| *d == name));
        let rules = a.rules.clone();
        let strip = a.strip;
        let result = rewrite(&corpus, &move |layer: &mut CorefDoc| {
            let mut changed = false;
            if strip && !layer.entities().is_empty() {
                *layer = layer.without_mentions();
                changed = true;
            }
            run_baseline(layer, &rules, propn) || changed
        })?;
        write_out(out.as_deref(), &write_file(&result))?;
    }
    Ok(())
}
