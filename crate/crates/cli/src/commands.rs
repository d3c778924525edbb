use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use scenval_core::experiments::{
    correlated_line, mr_table, run_harness, run_nnc_null, sigma_schedule, ExperimentSpec, GeneratorKind,
    GeneratorSpec, HarnessConfig, HarnessPoint, MrTableCell, Source, Statistic, TABLE_RHOS, TABLE_SIZES,
};
use scenval_core::sampling::sample as draw_sample;
use scenval_core::theory::{self, QCheckRow};
use scenval_core::{memorizing_ratio, nnc, Density, Label, MeasureParams, PointSet, Role, SeedPath};

use crate::error::{CliError, CliResult};
use crate::io::{read_points, write_points};
use crate::output::{emit, json, num, opt, CsvTable, METHODOLOGY, SCHEMA_VERSION};
use crate::{Format, Mode, OutputArgs};

/// Noise of the default correlated-line training set.
const LINE_NOISE: f64 = 0.1;
/// Largest tolerated gap between closed-form and quadrature Q(s).
const Q_CHECK_TOL: f64 = 1e-6;

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn density_arg(s: &str) -> Result<Density, String> {
    s.parse::<Density>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Empirical scenarios, one point per CSV row.
    #[arg(long)]
    empirical: PathBuf,
    /// Generated scenarios with the same number of rows and columns.
    #[arg(long)]
    generated: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct NncSection {
    value: f64,
    t1: f64,
    t2: f64,
    expected_t: f64,
    k: usize,
    mode: &'static str,
}

#[derive(Serialize)]
struct MrSection {
    value: f64,
    rho: f64,
    memorized_count: usize,
    m: usize,
    mr_limit: f64,
}

#[derive(Serialize)]
struct Diagnostics {
    /// Queries whose k-th neighbor was tied with an excluded candidate.
    tie_count: usize,
}

#[derive(Serialize)]
struct ValidateReport {
    schema_version: u32,
    command: &'static str,
    empirical: String,
    generated: String,
    m: usize,
    d: usize,
    nnc: NncSection,
    mr: MrSection,
    diagnostics: Diagnostics,
    methodology: &'static str,
    reproduce: String,
}

pub fn validate(a: ValidateArgs) -> CliResult<()> {
    let params = MeasureParams::new(a.k, a.rho).map_err(|e| CliError::core("parameters", e))?;
    let e = read_points(&a.empirical, Label::Empirical)?;
    let g = read_points(&a.generated, Label::Generated)?;
    let context = format!("{} vs {}", a.empirical.display(), a.generated.display());
    let shape = |err| CliError::core(context.clone(), err);
    params.validate_for(e.len()).map_err(shape)?;
    let n = nnc(&e, &g, a.k, a.mode.expectation()).map_err(shape)?;
    let r = memorizing_ratio(&e, &g, a.rho).map_err(shape)?;

    let format = a.out.format.unwrap_or(Format::Json);
    let reproduce = format!(
        "scenval validate --empirical {} --generated {} --k {} --rho {} --mode {} --format {}",
        a.empirical.display(),
        a.generated.display(),
        a.k,
        a.rho,
        a.mode.name(),
        format.name()
    );
    let report = ValidateReport {
        schema_version: SCHEMA_VERSION,
        command: "validate",
        empirical: a.empirical.display().to_string(),
        generated: a.generated.display().to_string(),
        m: e.len(),
        d: e.dim(),
        nnc: NncSection {
            value: n.nnc,
            t1: n.t1,
            t2: n.t2,
            expected_t: n.expected_t,
            k: a.k,
            mode: a.mode.name(),
        },
        mr: MrSection {
            value: r.mr,
            rho: a.rho,
            memorized_count: r.memorized_count(),
            m: e.len(),
            mr_limit: r.mr_limit,
        },
        diagnostics: Diagnostics {
            tie_count: n.tie_count,
        },
        methodology: METHODOLOGY,
        reproduce,
    };
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut t = CsvTable::new(
                &format!("schema_version={SCHEMA_VERSION} reproduce=\"{}\"", report.reproduce),
                &[
                    "m", "d", "k", "mode", "t1", "t2", "expected_t", "nnc", "rho", "mr", "mr_limit",
                    "memorized_count", "tie_count",
                ],
            );
            t.row(&[
                report.m.to_string(),
                report.d.to_string(),
                a.k.to_string(),
                a.mode.name().into(),
                num(n.t1),
                num(n.t2),
                num(n.expected_t),
                num(n.nnc),
                num(a.rho),
                num(r.mr),
                num(r.mr_limit),
                r.memorized_count().to_string(),
                n.tie_count.to_string(),
            ]);
            t.finish()
        }
    };
    emit(a.out.output.as_deref(), &body)
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Repetitions per cell.
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_SIZES.to_vec())]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_RHOS.to_vec())]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct TableReport<'a, T> {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    repetitions: usize,
    rows: &'a [T],
    methodology: &'static str,
    reproduce: String,
}

pub fn table1(a: Table1Args) -> CliResult<()> {
    if a.sizes.is_empty() || a.rhos.is_empty() {
        return Err(CliError::Usage("sizes and rhos must be nonempty".into()));
    }
    let seed = resolve_seed(a.seed);
    let format = a.out.format.unwrap_or(Format::Csv);
    let reproduce = format!(
        "scenval table1 --reps {} --seed {seed} --sizes {} --rhos {} --d {} --format {}",
        a.reps,
        join(&a.sizes),
        join(&a.rhos),
        a.d,
        format.name()
    );
    let cells = mr_table(&Density::ALL, &a.sizes, &a.rhos, a.d, a.reps, seed)
        .map_err(|e| CliError::core("table1", e))?;
    let body = match format {
        Format::Json => json(&TableReport {
            schema_version: SCHEMA_VERSION,
            command: "table1",
            seed,
            repetitions: a.reps,
            rows: &cells,
            methodology: METHODOLOGY,
            reproduce,
        }),
        Format::Csv => table1_csv(&cells, &reproduce, seed, a.reps),
    };
    emit(a.out.output.as_deref(), &body)
}

fn table1_csv(cells: &[MrTableCell], reproduce: &str, seed: u64, reps: usize) -> String {
    let mut t = CsvTable::new(
        &format!("table1 seed={seed} reps={reps} reproduce=\"{reproduce}\""),
        &["density", "d", "m", "rho", "reps", "mean", "std_err", "theoretical"],
    );
    for c in cells {
        t.row(&[
            c.density.name().into(),
            c.d.to_string(),
            c.m.to_string(),
            num(c.rho),
            c.repetitions.to_string(),
            num(c.mean),
            opt(c.std_err),
            num(c.theoretical),
        ]);
    }
    t.finish()
}

#[derive(Debug, Args)]
pub struct NncArgs {
    #[arg(long, default_value = "normal", value_parser = density_arg)]
    density: Density,
    /// Law of the generated sample; defaults to `--density`.
    #[arg(long, value_parser = density_arg)]
    generated_density: Option<Density>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 1000, 5000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct NncRow {
    m: usize,
    repetitions: usize,
    mean: f64,
    std_dev: Option<f64>,
    std_err: Option<f64>,
    reference: f64,
}

pub fn nnc_convergence(a: NncArgs) -> CliResult<()> {
    if a.sizes.is_empty() {
        return Err(CliError::Usage("sizes must be nonempty".into()));
    }
    let seed = resolve_seed(a.seed);
    let generated = a.generated_density.unwrap_or(a.density);
    let format = a.out.format.unwrap_or(Format::Csv);
    let reproduce = format!(
        "scenval nnc-convergence --density {} --generated-density {generated} --d {} --k {} --sizes {} --reps {} --seed {seed} --mode {} --format {}",
        a.density,
        a.d,
        a.k,
        join(&a.sizes),
        a.reps,
        a.mode.name(),
        format.name()
    );
    let mut rows = Vec::new();
    for &m in &a.sizes {
        let spec = ExperimentSpec {
            generated_density: Some(generated),
            d: a.d,
            k: a.k,
            mode: a.mode.expectation(),
            repetitions: a.reps,
            ..ExperimentSpec::new(a.density, m, Statistic::Nnc, seed)
        };
        let r = run_nnc_null(&spec).map_err(|e| CliError::core(format!("nnc-convergence m={m}"), e))?;
        rows.push(NncRow {
            m,
            repetitions: a.reps,
            mean: r.mean,
            std_dev: r.std_dev,
            std_err: r.std_err,
            reference: r.reference,
        });
    }
    let body = match format {
        Format::Json => json(&TableReport {
            schema_version: SCHEMA_VERSION,
            command: "nnc-convergence",
            seed,
            repetitions: a.reps,
            rows: &rows,
            methodology: METHODOLOGY,
            reproduce,
        }),
        Format::Csv => {
            let mut t = CsvTable::new(
                &format!("nnc-convergence seed={seed} reproduce=\"{reproduce}\""),
                &["m", "reps", "mean", "std_dev", "std_err", "reference"],
            );
            for r in &rows {
                t.row(&[
                    r.m.to_string(),
                    r.repetitions.to_string(),
                    num(r.mean),
                    opt(r.std_dev),
                    opt(r.std_err),
                    num(r.reference),
                ]);
            }
            t.finish()
        }
    };
    emit(a.out.output.as_deref(), &body)
}

#[derive(Debug, Args)]
pub struct HarnessArgs {
    /// Training set CSV; defaults to a seeded correlated-line sample.
    #[arg(long)]
    training: Option<PathBuf>,
    /// Size of the default training set.
    #[arg(long, default_value_t = 500)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Comma-separated generators: `jitter:S`, `memorizer:S`, `breaker`,
    /// `true` (the correlated-line law) or `true:DENSITY`. Overrides the
    /// geometric sigma schedule.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 2.0)]
    sigma_start: f64,
    #[arg(long, default_value_t = 0.05)]
    sigma_end: f64,
    #[arg(long, default_value_t = 12)]
    steps: usize,
    /// Generator draws per step.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parses a `--schedule` value into generator kinds.
pub fn parse_schedule(text: &str) -> CliResult<Vec<GeneratorKind>> {
    let bad = |item: &str, why: &str| CliError::Usage(format!("schedule item '{item}': {why}"));
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (name, arg) = match item.split_once(':') {
                Some((n, a)) => (n.trim(), Some(a.trim())),
                None => (item, None),
            };
            let sigma = || -> CliResult<f64> {
                arg.ok_or_else(|| bad(item, "missing sigma"))?
                    .parse::<f64>()
                    .map_err(|_| bad(item, "sigma is not a number"))
            };
            match name {
                "jitter" => Ok(GeneratorKind::JitterResampler { sigma: sigma()? }),
                "memorizer" => Ok(GeneratorKind::Memorizer {
                    jitter_sigma: if arg.is_some() { sigma()? } else { 0.0 },
                }),
                "breaker" => Ok(GeneratorKind::IndependenceBreaker),
                "true" => Ok(GeneratorKind::TrueSampler {
                    source: match arg {
                        None => Source::CorrelatedLine { noise: LINE_NOISE },
                        Some(d) => Source::Product(density_arg(d).map_err(|e| bad(item, &e))?),
                    },
                }),
                _ => Err(bad(item, "unknown generator")),
            }
        })
        .collect()
}

pub fn harness(a: HarnessArgs) -> CliResult<()> {
    let seed = resolve_seed(a.seed);
    let root = SeedPath::new(seed);
    let training: PointSet = match &a.training {
        Some(path) => read_points(path, Label::Empirical)?,
        None => correlated_line(2, a.m, LINE_NOISE, root.experiment("harness/training").role(Role::Training))
            .map_err(|e| CliError::core("training set", e))?,
    };
    let m = training.len();
    let step_seed = root.experiment("harness/generators");
    let schedule: Vec<GeneratorSpec> = match &a.schedule {
        Some(text) => parse_schedule(text)?
            .into_iter()
            .enumerate()
            .map(|(i, kind)| GeneratorSpec {
                kind,
                m,
                seed: step_seed.step(i as u64),
            })
            .collect(),
        None => sigma_schedule(a.sigma_start, a.sigma_end, a.steps, m, step_seed)
            .map_err(|e| CliError::core("schedule", e))?,
    };
    if schedule.is_empty() {
        return Err(CliError::Usage("empty schedule".into()));
    }
    let config = HarnessConfig {
        k: a.k,
        rho: a.rho,
        mode: a.mode.expectation(),
        repetitions: a.reps,
    };
    let points = run_harness(&training, &schedule, config).map_err(|e| CliError::core("harness", e))?;

    let format = a.out.format.unwrap_or(Format::Csv);
    let source = match &a.training {
        Some(p) => format!("--training {}", p.display()),
        None => format!("--m {}", a.m),
    };
    let plan = match &a.schedule {
        Some(s) => format!("--schedule \"{s}\""),
        None => format!(
            "--sigma-start {} --sigma-end {} --steps {}",
            a.sigma_start, a.sigma_end, a.steps
        ),
    };
    let reproduce = format!(
        "scenval harness {source} --k {} --rho {} --mode {} {plan} --reps {} --seed {seed} --format {}",
        a.k,
        a.rho,
        a.mode.name(),
        a.reps,
        format.name()
    );
    let body = match format {
        Format::Json => json(&TableReport {
            schema_version: SCHEMA_VERSION,
            command: "harness",
            seed,
            repetitions: a.reps,
            rows: &points,
            methodology: METHODOLOGY,
            reproduce,
        }),
        Format::Csv => harness_csv(&points, &reproduce, seed),
    };
    emit(a.out.output.as_deref(), &body)
}

fn harness_csv(points: &[HarnessPoint], reproduce: &str, seed: u64) -> String {
    let mut t = CsvTable::new(
        &format!("harness seed={seed} reproduce=\"{reproduce}\""),
        &["step", "generator", "sigma", "nnc", "mr", "nnc_se", "mr_se"],
    );
    for p in points {
        t.row(&[
            p.step.to_string(),
            p.tag.clone(),
            opt(p.sigma),
            num(p.nnc),
            num(p.mr),
            opt(p.nnc_se),
            opt(p.mr_se),
        ]);
    }
    t.finish()
}

#[derive(Debug, Args)]
pub struct QCheckArgs {
    #[command(flatten)]
    out: OutputArgs,
}

pub fn q_check(a: QCheckArgs) -> CliResult<()> {
    let rows = theory::q_check_grid().map_err(|e| CliError::core("q-check", e))?;
    let format = a.out.format.unwrap_or(Format::Csv);
    let reproduce = format!("scenval q-check --format {}", format.name());
    let body = match format {
        Format::Json => json(&TableReport {
            schema_version: SCHEMA_VERSION,
            command: "q-check",
            seed: 0,
            repetitions: 1,
            rows: &rows,
            methodology: METHODOLOGY,
            reproduce,
        }),
        Format::Csv => q_check_csv(&rows, &reproduce),
    };
    emit(a.out.output.as_deref(), &body)?;
    let worst = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    if worst > Q_CHECK_TOL {
        return Err(CliError::Numerical(format!(
            "closed form and quadrature differ by {worst:e} (tolerance {Q_CHECK_TOL:e})"
        )));
    }
    Ok(())
}

fn q_check_csv(rows: &[QCheckRow], reproduce: &str) -> String {
    let mut t = CsvTable::new(
        &format!("q-check tolerance={Q_CHECK_TOL} reproduce=\"{reproduce}\""),
        &["density", "d", "rho", "s", "closed_form", "quadrature", "abs_diff"],
    );
    for r in rows {
        t.row(&[
            r.density.name().into(),
            r.d.to_string(),
            num(r.rho),
            r.s.to_string(),
            num(r.closed_form),
            num(r.quadrature),
            num(r.abs_diff),
        ]);
    }
    t.finish()
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value = "normal", value_parser = density_arg)]
    density: Density,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 500)]
    m: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn sample(a: SampleArgs) -> CliResult<()> {
    let seed = resolve_seed(a.seed);
    let path = SeedPath::new(seed).experiment("sample").role(Role::Empirical);
    let points = draw_sample(a.density, a.d, a.m, path, Label::Empirical).map_err(|e| CliError::core("sample", e))?;
    let mut buf = format!(
        "# sample density={} d={} m={} seed={seed}\n",
        a.density, a.d, a.m
    )
    .into_bytes();
    write_points(&mut buf, &points)?;
    emit(a.output.as_deref(), std::str::from_utf8(&buf).expect("ascii output"))
}
