use std::collections::BTreeSet;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::Serialize;

use resample::bootstrap::{self, ResamplingVector};
use resample::csv_io::{self, Schema};
use resample::enrichment::{self, EaseMode, EnrichmentResult, EnrichmentTable};
use resample::jackknife::{self, Reference};
use resample::permutation::{self, Alternative};
use resample::simulation::{self, SimulationConfig};
use resample::{Arity, Dataset, Estimator, Observations, SeededStream, Statistic};

use crate::args::*;
use crate::error::CliError;
use crate::output::{self, num};

type Out = Result<String, CliError>;

pub fn dispatch(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::Jack(a) => jack(g, a),
        Command::Boot(a) => boot(g, a),
        Command::Perm(a) => perm(g, a),
        Command::Enrich(a) => enrich(g, a),
        Command::Simulate(SimulateCommand::UniformMax(a)) => uniform_max(g, a),
        Command::Enumerate(a) => enumerate(g, a),
    }
}

fn format_or(g: &GlobalArgs, default: Format) -> Format {
    g.format.unwrap_or(default)
}

fn parse_stat(name: &str) -> Result<Statistic, CliError> {
    Ok(name.parse::<Statistic>()?)
}

fn load(path: &Path, stat: Statistic) -> Result<Dataset, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path.display(), e))?;
    let schema = match stat.arity() {
        Arity::Univariate => Schema::OneColumn,
        Arity::Paired => Schema::TwoColumn,
    };
    Ok(csv_io::load_csv(file, schema)?)
}

/// Runs `$body` with `$data` bound to the concrete sample type.
macro_rules! with_data {
    ($dataset:expr, |$data:ident| $body:expr) => {
        match $dataset {
            Dataset::Univariate($data) => $body,
            Dataset::Paired($data) => $body,
        }
    };
}

// ---------------------------------------------------------------- jack

#[derive(Serialize)]
struct JackConfig<'a> {
    input: &'a Path,
    statistic: Statistic,
    n: usize,
    d: usize,
    level: Option<f64>,
    reference: Option<Reference>,
    null_value: Option<f64>,
    format: Format,
}

#[derive(Serialize)]
struct JackOutput {
    #[serde(flatten)]
    report: jackknife::JackknifeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    inference: Option<jackknife::PseudovalueInference>,
}

fn jack(g: &GlobalArgs, a: &JackArgs) -> Out {
    let stat = parse_stat(&a.stat)?;
    if let Some(level) = a.level {
        if !(level > 0.0 && level < 1.0) {
            return Err(CliError::Validation(format!("--level must lie in (0, 1), got {level}")));
        }
    }
    let dataset = load(&a.input, stat)?;
    let n = dataset.len();
    let d = match a.d.as_str() {
        "auto" => jackknife::default_d(n),
        s => s
            .parse::<usize>()
            .map_err(|_| CliError::Validation(format!("--d must be a positive integer or `auto`, got `{s}`")))?,
    };
    if d > 1 && a.level.is_some() {
        return Err(CliError::Validation("pseudovalue intervals are defined for d = 1 only".into()));
    }
    let reference = match a.reference {
        ReferenceArg::T => Reference::StudentT,
        ReferenceArg::Normal => Reference::Normal,
    };
    let format = format_or(g, Format::Json);
    let config = JackConfig {
        input: &a.input,
        statistic: stat,
        n,
        d,
        level: a.level,
        reference: a.level.map(|_| reference),
        null_value: a.null_value,
        format,
    };

    if d != 1 {
        let report = with_data!(&dataset, |data| jackknife::delete_d(data, &stat, d))?;
        return match format {
            Format::Json => output::json("jack", &config, &report),
            Format::Csv => output::csv(
                &["subset", "replicate"],
                report
                    .replicates
                    .iter()
                    .enumerate()
                    .map(|(i, r)| vec![i.to_string(), num(*r)]),
            ),
        };
    }

    let (report, inference) = with_data!(&dataset, |data| jack_delete1(data, stat, a, reference))?;
    match format {
        Format::Json => output::json("jack", &config, &JackOutput { report, inference }),
        Format::Csv => output::csv(
            &["index", "replicate", "pseudovalue"],
            report
                .replicates
                .iter()
                .zip(&report.pseudovalues)
                .enumerate()
                .map(|(i, (r, p))| vec![i.to_string(), num(*r), num(*p)]),
        ),
    }
}

fn jack_delete1<D>(
    data: &D,
    stat: Statistic,
    a: &JackArgs,
    reference: Reference,
) -> resample::Result<(jackknife::JackknifeReport, Option<jackknife::PseudovalueInference>)>
where
    D: Observations,
    Statistic: Estimator<D>,
{
    let report = jackknife::jackknife(data, &stat)?;
    let inference = a
        .level
        .map(|level| jackknife::pseudovalue_inference(data, &stat, level, reference, a.null_value))
        .transpose()?;
    Ok((report, inference))
}

// ---------------------------------------------------------------- boot

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum BootMode {
    MonteCarlo,
    Exact,
    Theorem,
}

#[derive(Serialize)]
struct BootConfig<'a> {
    input: &'a Path,
    statistic: Statistic,
    n: usize,
    mode: BootMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stream: Option<u64>,
    format: Format,
}

#[derive(Serialize)]
struct ExactMoments {
    resamples: String,
    mean: f64,
    variance: f64,
    se: f64,
}

#[derive(Serialize)]
struct TheoremRecord {
    lhs: f64,
    rhs: f64,
    ratio: Option<f64>,
    closed_form: f64,
    n: usize,
    statistic: Statistic,
}

fn boot(g: &GlobalArgs, a: &BootArgs) -> Out {
    let stat = parse_stat(&a.stat)?;
    let dataset = load(&a.input, stat)?;
    let n = dataset.len();
    let format = format_or(g, Format::Json);
    let mode = if a.verify_theorem {
        BootMode::Theorem
    } else if a.exact {
        BootMode::Exact
    } else {
        BootMode::MonteCarlo
    };
    let sampled = matches!(mode, BootMode::MonteCarlo);
    let config = BootConfig {
        input: &a.input,
        statistic: stat,
        n,
        mode,
        b: sampled.then_some(a.b),
        seed: sampled.then_some(g.seed),
        stream: sampled.then_some(a.stream),
        format,
    };

    match config.mode {
        BootMode::MonteCarlo => {
            let stream = SeededStream::new(g.seed, a.stream);
            let report = with_data!(&dataset, |data| bootstrap::bootstrap_se(data, &stat, a.b, stream))?;
            match format {
                Format::Json => output::json("boot", &config, &report),
                Format::Csv => output::csv(
                    &["resample", "value"],
                    report
                        .replicate_values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| vec![i.to_string(), num(*v)]),
                ),
            }
        }
        BootMode::Exact => {
            let (mean, variance) = with_data!(&dataset, |data| bootstrap::exact_bootstrap_moments(data, &stat))?;
            let report = ExactMoments {
                resamples: bootstrap::exact_bootstrap_count(n as u64)
                    .map(|c| c.to_string())
                    .unwrap_or_default(),
                mean,
                variance,
                se: variance.sqrt(),
            };
            match format {
                Format::Json => output::json("boot", &config, &report),
                Format::Csv => output::csv(
                    &["resamples", "mean", "variance", "se"],
                    [vec![report.resamples.clone(), num(mean), num(variance), num(report.se)]],
                ),
            }
        }
        BootMode::Theorem => {
            let check = with_data!(&dataset, |data| bootstrap::verify_hyperplane_theorem(data, &stat))?;
            let report = TheoremRecord {
                lhs: check.lhs,
                rhs: check.rhs,
                ratio: check.ratio,
                closed_form: check.closed_form,
                n: check.n,
                statistic: stat,
            };
            match format {
                Format::Json => output::json("boot", &config, &report),
                Format::Csv => output::csv(
                    &["statistic", "n", "lhs", "rhs", "ratio", "closed_form"],
                    [vec![
                        stat.to_string(),
                        n.to_string(),
                        num(report.lhs),
                        num(report.rhs),
                        report.ratio.map(num).unwrap_or_default(),
                        num(report.closed_form),
                    ]],
                ),
            }
        }
    }
}

// ---------------------------------------------------------------- perm

#[derive(Serialize)]
struct PermConfig<'a> {
    input: &'a Path,
    statistic: Statistic,
    n: usize,
    mode: PermMode,
    alternative: Alternative,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stream: Option<u64>,
    format: Format,
}

fn perm(g: &GlobalArgs, a: &PermArgs) -> Out {
    let stat = parse_stat(&a.stat)?;
    if stat.arity() != Arity::Paired {
        return Err(CliError::Validation(format!(
            "permutation tests need a paired statistic; `{stat}` is univariate"
        )));
    }
    let Dataset::Paired(data) = load(&a.input, stat)? else {
        unreachable!("paired statistics load two columns");
    };
    let alternative = match a.alternative {
        AlternativeArg::TwoSided => Alternative::TwoSided,
        AlternativeArg::Greater => Alternative::Greater,
        AlternativeArg::Less => Alternative::Less,
    };
    let format = format_or(g, Format::Json);
    let mc = a.mode == PermMode::Mc;
    let config = PermConfig {
        input: &a.input,
        statistic: stat,
        n: data.len(),
        mode: a.mode,
        alternative,
        b: mc.then_some(a.b),
        seed: mc.then_some(g.seed),
        stream: mc.then_some(a.stream),
        format,
    };
    let report = if mc {
        permutation::mc_permutation_test(&data, stat, a.b, SeededStream::new(g.seed, a.stream), alternative)?
    } else {
        permutation::exact_permutation_test(&data, stat, alternative)?
    };
    match format {
        Format::Json => output::json("perm", &config, &report),
        Format::Csv => output::csv(
            &["statistic", "r_obs", "mode", "draws", "extreme", "p_value"],
            [vec![
                stat.to_string(),
                num(report.r_obs),
                if mc { "monte_carlo" } else { "exact" }.to_string(),
                report.draws.to_string(),
                report.extreme.to_string(),
                num(report.p_value),
            ]],
        ),
    }
}

// ---------------------------------------------------------------- enrich

#[derive(Serialize)]
struct EnrichConfig<'a> {
    population: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    category_file: Option<&'a Path>,
    #[serde(skip_serializing_if = "Option::is_none")]
    category_dir: Option<&'a Path>,
    #[serde(skip_serializing_if = "Option::is_none")]
    list_file: Option<&'a Path>,
    mode: EaseMode,
    format: Format,
}

#[derive(Serialize)]
struct EnrichReport {
    results: Vec<EnrichmentResult>,
}

fn read_genes(path: &Path) -> Result<BTreeSet<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    Ok(enrichment::parse_gene_list(&text))
}

fn category_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir.display(), e))? {
        let path = entry.map_err(|e| CliError::io(dir.display(), e))?.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::Validation(format!("no category files in {}", dir.display())));
    }
    Ok(files)
}

fn category_name(path: &Path) -> String {
    path.file_stem()
        .or(path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn enrich(g: &GlobalArgs, a: &EnrichArgs) -> Out {
    let mode = if a.strict_m { EaseMode::Strict } else { EaseMode::Standard };
    let format = format_or(g, Format::Json);
    let config = EnrichConfig {
        population: a.population,
        category_file: a.category_file.as_deref(),
        category_dir: a.category_dir.as_deref(),
        list_file: a.list_file.as_deref(),
        mode,
        format,
    };

    let mut results = Vec::new();
    if let (Some(k_cat), Some(m), Some(k)) = (a.category_size, a.list_size, a.overlap) {
        let table = EnrichmentTable::new(a.population, k_cat, m, k)?;
        results.push(enrichment::score("table", table, mode)?);
    } else {
        let list_path = a.list_file.as_deref().ok_or_else(|| {
            CliError::Validation("give --list-file, or --category-size/--list-size/--overlap".into())
        })?;
        let list = read_genes(list_path)?;
        let categories = match (&a.category_file, &a.category_dir) {
            (Some(file), None) => vec![file.clone()],
            (None, Some(dir)) => category_files(dir)?,
            _ => {
                return Err(CliError::Validation(
                    "give exactly one of --category-file or --category-dir".into(),
                ))
            }
        };
        for path in &categories {
            let genes = read_genes(path)?;
            let table = EnrichmentTable::from_sets(a.population, &genes, &list)?;
            results.push(enrichment::score(category_name(path), table, mode)?);
        }
        enrichment::rank(&mut results);
    }

    match format {
        Format::Json => output::json("enrich", &config, &EnrichReport { results }),
        Format::Csv => output::csv(
            &["category", "population", "category_size", "list_size", "overlap", "fisher_p", "ease"],
            results.iter().map(|r| {
                vec![
                    r.name.clone(),
                    r.table.population.to_string(),
                    r.table.category.to_string(),
                    r.table.list.to_string(),
                    r.table.overlap.to_string(),
                    num(r.fisher_p),
                    num(r.ease),
                ]
            }),
        ),
    }
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimulateConfig<'a> {
    experiment: &'a str,
    #[serde(flatten)]
    config: SimulationConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    replications_csv: Option<&'a Path>,
    format: Format,
}

const REPLICATION_HEADER: [&str; 6] = [
    "rep",
    "sample_max",
    "jackknife_max",
    "abs_bias_max",
    "abs_bias_jack",
    "jack_better",
];

fn replication_rows(reps: &[simulation::Replication]) -> impl Iterator<Item = Vec<String>> + '_ {
    reps.iter().map(|r| {
        vec![
            r.rep.to_string(),
            num(r.sample_max),
            num(r.jackknife_max),
            num(r.abs_bias_max),
            num(r.abs_bias_jack),
            u8::from(r.jack_better).to_string(),
        ]
    })
}

fn uniform_max(g: &GlobalArgs, a: &UniformMaxArgs) -> Out {
    let config = SimulationConfig {
        theta: a.theta,
        n: a.n,
        reps: a.reps,
        seed: g.seed,
    };
    config.validate()?;
    let format = format_or(g, Format::Json);
    let reps = simulation::uniform_max_replications(&config)?;
    let report = simulation::summarize(&config, &reps);

    if let Some(path) = &a.replications_csv {
        let text = output::csv(&REPLICATION_HEADER, replication_rows(&reps))?;
        fs::write(path, text).map_err(|e| CliError::io(path.display(), e))?;
    }

    let echo = SimulateConfig {
        experiment: "uniform-max",
        config,
        replications_csv: a.replications_csv.as_deref(),
        format,
    };
    match format {
        Format::Json => output::json("simulate", &echo, &report),
        Format::Csv => output::csv(&REPLICATION_HEADER, replication_rows(&reps)),
    }
}

// ---------------------------------------------------------------- enumerate

#[derive(Serialize)]
struct EnumerateConfig {
    n: usize,
    format: Format,
}

#[derive(Serialize)]
struct EnumerateReport {
    count: String,
    vectors: Vec<ResamplingVector>,
}

fn enumerate(g: &GlobalArgs, a: &EnumerateArgs) -> Out {
    let format = format_or(g, Format::Csv);
    let vectors = bootstrap::enumerate_resampling_vectors(a.n)?;
    match format {
        Format::Csv => {
            let mut header: Vec<String> = (1..=a.n).map(|i| format!("c{i}")).collect();
            header.push("probability".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            output::csv(
                &header,
                vectors.map(|v| {
                    let mut row: Vec<String> = v.counts.iter().map(u32::to_string).collect();
                    row.push(num(v.probability));
                    row
                }),
            )
        }
        Format::Json => {
            let vectors: Vec<_> = vectors.collect();
            let report = EnumerateReport {
                count: vectors.len().to_string(),
                vectors,
            };
            output::json("enumerate", &EnumerateConfig { n: a.n, format }, &report)
        }
    }
}
