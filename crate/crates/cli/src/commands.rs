use std::fmt;
use std::io::{self, Read};

use serde::Serialize;

use impartial::analysis::correlation::example_graph;
use impartial::analysis::ratio::ratio as ratio_report;
use impartial::analysis::{self, CheckMode, CorrelationReport, Estimate};
use impartial::generators::{lower_bound_size, random_graph};
use impartial::mechanisms::{self, perm_tally, ExactConfig, MechanismId};
use impartial::{fmt_decimal, fmt_rational, Error, FamilySpec, NominationGraph, PartialNominationGraph, Rational};

use crate::output::{self, Format, RunConfig};
use crate::{Cli, Command, GraphInput, Verify};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Input(_)) => 2,
            CliError::Core(Error::Capacity { .. }) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    cfg: ExactConfig,
    seed: Option<u64>,
    format: Option<Format>,
    base: RunConfig,
}

impl Ctx {
    fn seed(&self, why: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::Usage(format!("{why} needs --seed (or IMPARTIAL_SEED)")))
    }

    fn config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            ..self.base.clone()
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

pub fn run(cli: &Cli) -> CliResult<bool> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs {j}: {e}")))?;
    }
    let cfg = match cli.cap {
        Some(c) => ExactConfig::default().with_cap(c),
        None => ExactConfig::default(),
    };
    let ctx = Ctx {
        cfg,
        seed: cli.seed,
        format: cli.format,
        base: RunConfig {
            seed: cli.seed,
            format: cli.format,
            jobs: cli.jobs,
            cap: cli.cap,
            ..RunConfig::default()
        },
    };
    match &cli.command {
        Command::Gen { spec, n } => gen(&ctx, spec, *n),
        Command::Eval {
            mechanism,
            mech,
            input,
            exact: _,
            samples,
        } => {
            let id = mechanism.or(*mech).expect("clap requires one of them");
            eval(&ctx, id, input, *samples)
        }
        Command::Verify(v) => verify(&ctx, v),
        Command::Figure3 { delta_max } => figure3(&ctx, *delta_max),
        Command::WorstCase { mech, n } => worst_case(&ctx, *mech, *n),
    }
}

fn parse_graph_text(text: &str) -> CliResult<PartialNominationGraph> {
    let body: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    Ok(body.join(" ").parse()?)
}

/// The graph named by `--family` or `--graph`, if either was given.
fn read_graph(input: &GraphInput) -> CliResult<Option<PartialNominationGraph>> {
    if let Some(spec) = &input.family {
        let spec: FamilySpec = spec.parse()?;
        return Ok(Some(spec.build()?.as_partial()));
    }
    let Some(path) = &input.graph else { return Ok(None) };
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    parse_graph_text(&text).map(Some)
}

fn total(g: &PartialNominationGraph, why: &str) -> CliResult<NominationGraph> {
    g.to_total()
        .ok_or_else(|| CliError::Usage(format!("{why} needs every vertex to nominate someone")))
}

fn gen(ctx: &Ctx, spec: &[String], n: Option<usize>) -> CliResult<bool> {
    let mut config = ctx.config("gen");
    let g = if spec.is_empty() {
        let n =
            n.ok_or_else(|| CliError::Usage("gen needs a family spec, or --n with --seed for a random graph".into()))?;
        config.n = Some(n);
        random_graph(n, ctx.seed("a random graph")?)?
    } else {
        let spec: FamilySpec = spec.join(" ").parse()?;
        config.family = Some(spec.to_string());
        spec.build()?
    };
    match ctx.format {
        None => {
            println!("# {} config {}", output::header(), config.summary());
            println!("{g}");
        }
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Gen {
                graph: String,
                n: usize,
                targets: Vec<usize>,
                indegrees: Vec<usize>,
            }
            let r = Gen {
                graph: g.to_string(),
                n: g.n(),
                targets: g.targets(),
                indegrees: g.indegrees(),
            };
            output::json(&config, None, &r)?;
        }
        Some(Format::Csv) => {
            let deg = g.indegrees();
            let rows: Vec<Vec<String>> = g
                .targets()
                .iter()
                .enumerate()
                .map(|(v, t)| vec![(v + 1).to_string(), t.to_string(), deg[v].to_string()])
                .collect();
            output::csv(&config, None, &["vertex", "target", "indegree"], &rows)?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct Frequency {
    vertex: String,
    count: u64,
    frequency: f64,
    ci_low: f64,
    ci_high: f64,
}

#[derive(Serialize)]
struct SampledEval {
    graph: String,
    mechanism: MechanismId,
    samples: u64,
    seed: u64,
    frequencies: Vec<Frequency>,
    ratio: Estimate,
}

#[derive(Serialize)]
struct ExactEval {
    #[serde(flatten)]
    report: analysis::RatioReport,
    decimal: Vec<String>,
    ratio_decimal: String,
}

#[derive(Serialize)]
struct PartialEval {
    graph: String,
    mechanism: MechanismId,
    #[serde(serialize_with = "impartial::distribution::serialize_rational")]
    nobody: Rational,
    distribution: impartial::SelectionDistribution,
    decimal: Vec<String>,
}

fn eval(ctx: &Ctx, id: MechanismId, input: &GraphInput, samples: Option<u64>) -> CliResult<bool> {
    let g = match read_graph(input)? {
        Some(g) => g,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            parse_graph_text(&s)?
        }
    };
    let mut config = ctx.config("eval");
    config.mechanism = Some(id.to_string());
    config.graph = Some(g.to_string());
    config.family = input
        .family
        .as_deref()
        .map(|f| f.parse::<FamilySpec>().map(|s| s.to_string()))
        .transpose()?;
    config.samples = samples;
    let fmt = ctx.format();

    if let Some(k) = samples {
        if k == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        let seed = ctx.seed("sampling")?;
        let g = total(&g, "sampling")?;
        let counts = analysis::sample_counts(id, &g, k, seed);
        let est = analysis::estimate_ratio(id, &g, k, seed)?;
        let freq = |vertex: String, count: u64| {
            let f = count as f64 / k as f64;
            let h = output_sigmas() * (f * (1.0 - f) / k as f64).sqrt();
            Frequency {
                vertex,
                count,
                frequency: f,
                ci_low: f - h,
                ci_high: f + h,
            }
        };
        let mut frequencies: Vec<Frequency> = counts
            .counts
            .iter()
            .enumerate()
            .map(|(v, &c)| freq((v + 1).to_string(), c))
            .collect();
        frequencies.push(freq("none".into(), counts.none));
        let r = SampledEval {
            graph: g.to_string(),
            mechanism: id,
            samples: k,
            seed,
            frequencies,
            ratio: est,
        };
        match fmt {
            Format::Json => output::json(&config, None, &r)?,
            Format::Csv => {
                let mut rows: Vec<Vec<String>> = r
                    .frequencies
                    .iter()
                    .map(|f| {
                        vec![
                            f.vertex.clone(),
                            f.count.to_string(),
                            f.frequency.to_string(),
                            f.ci_low.to_string(),
                            f.ci_high.to_string(),
                        ]
                    })
                    .collect();
                rows.push(vec![
                    "ratio".into(),
                    String::new(),
                    r.ratio.mean.to_string(),
                    r.ratio.low.to_string(),
                    r.ratio.high.to_string(),
                ]);
                output::csv(
                    &config,
                    None,
                    &["vertex", "count", "frequency", "ci_low", "ci_high"],
                    &rows,
                )?;
            }
        }
        return Ok(true);
    }

    let decimals = |d: &impartial::SelectionDistribution| d.probs().iter().map(fmt_decimal).collect::<Vec<_>>();
    let rows_of = |d: &impartial::SelectionDistribution| {
        let mut rows: Vec<Vec<String>> = d
            .probs()
            .iter()
            .enumerate()
            .map(|(v, p)| vec![(v + 1).to_string(), fmt_rational(p), fmt_decimal(p)])
            .collect();
        let none = d.deficit();
        rows.push(vec!["none".into(), fmt_rational(&none), fmt_decimal(&none)]);
        rows
    };
    let header = ["vertex", "probability", "probability_decimal"];
    match g.to_total() {
        Some(t) => {
            let report = ratio_report(id, &t, &ctx.cfg)?;
            match fmt {
                Format::Json => {
                    let r = ExactEval {
                        decimal: decimals(&report.distribution),
                        ratio_decimal: fmt_decimal(&report.ratio),
                        report,
                    };
                    output::json(&config, None, &r)?;
                }
                Format::Csv => {
                    let mut rows = rows_of(&report.distribution);
                    rows.push(vec![
                        "ratio".into(),
                        fmt_rational(&report.ratio),
                        fmt_decimal(&report.ratio),
                    ]);
                    output::csv(&config, None, &header, &rows)?;
                }
            }
        }
        None => {
            let d = mechanisms::exact_partial(id, &g, &ctx.cfg)?;
            match fmt {
                Format::Json => {
                    let r = PartialEval {
                        graph: g.to_string(),
                        mechanism: id,
                        nobody: d.deficit(),
                        decimal: decimals(&d),
                        distribution: d,
                    };
                    output::json(&config, None, &r)?;
                }
                Format::Csv => output::csv(&config, None, &header, &rows_of(&d))?,
            }
        }
    }
    Ok(true)
}

fn output_sigmas() -> f64 {
    analysis::montecarlo::SIGMAS
}

fn emit<T: Serialize>(
    ctx: &Ctx,
    config: &RunConfig,
    passed: bool,
    r: &T,
    pairs: Vec<(&str, String)>,
) -> CliResult<bool> {
    match ctx.format() {
        Format::Json => output::json(config, Some(passed), r)?,
        Format::Csv => output::csv_pairs(config, Some(passed), &pairs)?,
    }
    Ok(passed)
}

#[derive(Serialize)]
struct CorrelationBatch {
    n: usize,
    graphs: u64,
    first_seed: u64,
    pairs: usize,
    vacuous: usize,
    violations: usize,
    failures: Vec<CorrelationReport>,
}

fn verify(ctx: &Ctx, v: &Verify) -> CliResult<bool> {
    match v {
        Verify::Impartial { mech, n, samples } => {
            let mut config = ctx.config("verify impartial");
            config.mechanism = Some(mech.to_string());
            config.n = Some(*n);
            config.samples = *samples;
            let mode = match samples {
                Some(k) => CheckMode::Sampled {
                    graphs: *k,
                    seed: ctx.seed("sampled impartiality check")?,
                },
                None => CheckMode::Exhaustive,
            };
            let r = analysis::check_impartial(*mech, *n, mode, &ctx.cfg)?;
            let pairs = vec![
                ("mechanism", r.mechanism.clone()),
                ("n", n.to_string()),
                ("graphs", r.graphs.to_string()),
                ("deviations", r.deviations.to_string()),
                (
                    "counterexample",
                    r.counterexample
                        .as_ref()
                        .map(|c| format!("{} vertex {} -> {}", c.graph, c.vertex, c.new_target))
                        .unwrap_or_default(),
                ),
            ];
            emit(ctx, &config, r.passed(), &r, pairs)
        }
        Verify::Bounds { mech, n } => {
            let mut config = ctx.config("verify bounds");
            config.mechanism = Some(mech.to_string());
            config.n = Some(*n);
            let r = analysis::check_bounds(*mech, *n, &ctx.cfg)?;
            let mut pairs = vec![
                ("graphs", r.sweep.graphs.to_string()),
                ("min_ratio", fmt_rational(&r.sweep.min.ratio)),
                ("min_ratio_decimal", fmt_decimal(&r.sweep.min.ratio)),
                ("witness", r.sweep.min.graph.to_string()),
                ("violations", r.violations.len().to_string()),
            ];
            if let Some(first) = r.violations.first() {
                pairs.push((
                    "first_violation",
                    format!("{} under {}", first.witness.graph, first.rule),
                ));
            }
            emit(ctx, &config, r.passed(), &r, pairs)
        }
        Verify::Correlation { input, n, count } => {
            let mut config = ctx.config("verify correlation");
            if let Some(count) = count {
                let seed = ctx.seed("random graphs")?;
                config.n = Some(*n);
                config = config.with("count", count);
                let mut batch = CorrelationBatch {
                    n: *n,
                    graphs: *count,
                    first_seed: seed,
                    pairs: 0,
                    vacuous: 0,
                    violations: 0,
                    failures: Vec::new(),
                };
                for k in 0..*count {
                    let g = random_graph(*n, seed.wrapping_add(k))?;
                    let r = analysis::verify_correlation_lemma(&g, None, &ctx.cfg)?;
                    batch.pairs += r.pairs.len();
                    batch.vacuous += r
                        .pairs
                        .iter()
                        .filter(|p| p.outcome == analysis::correlation::PairOutcome::Vacuous)
                        .count();
                    batch.violations += r.violations();
                    if !r.passed() {
                        batch.failures.push(r);
                    }
                }
                let passed = batch.failures.is_empty();
                let pairs = vec![
                    ("graphs", batch.graphs.to_string()),
                    ("pairs", batch.pairs.to_string()),
                    ("vacuous", batch.vacuous.to_string()),
                    ("violations", batch.violations.to_string()),
                ];
                return emit(ctx, &config, passed, &batch, pairs);
            }
            let g = match read_graph(input)? {
                Some(g) => total(&g, "the correlation check")?,
                None => example_graph(),
            };
            config.graph = Some(g.to_string());
            let r = analysis::verify_correlation_lemma(&g, None, &ctx.cfg)?;
            let pairs = vec![
                ("graph", g.to_string()),
                ("delta", r.delta.to_string()),
                ("top", r.top.to_string()),
                ("pairs", r.pairs.len().to_string()),
                ("violations", r.violations().to_string()),
                ("uniform_a", r.uniform_a.to_string()),
            ];
            emit(ctx, &config, r.passed(), &r, pairs)
        }
        Verify::UbChain { mech, n } => {
            let mut config = ctx.config("verify ub-chain");
            config.mechanism = Some(mech.to_string());
            config.n = Some(*n);
            let r = analysis::verify_ub_chain(*mech, *n, &ctx.cfg)?;
            let mut pairs: Vec<(&str, String)> = r
                .checks
                .iter()
                .map(|c| {
                    (
                        "check",
                        format!("{}: {}", c.name, if c.holds { "holds" } else { "FAILS" }),
                    )
                })
                .collect();
            pairs.push(("min_family_ratio", fmt_rational(&r.min_family_ratio)));
            pairs.push(("upper_bound", fmt_rational(&r.upper_bound)));
            emit(ctx, &config, r.passed(), &r, pairs)
        }
        Verify::Tightness { delta, nprime, samples } => {
            let mut config = ctx.config("verify tightness");
            config = config.with("delta", delta).with(
                "nprime",
                nprime.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            );
            let sampled = nprime.iter().any(|&np| lower_bound_size(*delta, np) > ctx.cfg.perm_cap);
            let seed = if sampled {
                config.samples = Some(*samples);
                ctx.seed("sampled rows")?
            } else {
                0
            };
            let r = analysis::tightness_scan(*delta, nprime.iter().copied(), *samples, seed, &ctx.cfg)?;
            let passed = r.exact_decreasing && r.exact_above_alpha;
            match ctx.format() {
                Format::Json => output::json(&config, Some(passed), &r)?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = r
                        .rows
                        .iter()
                        .map(|row| {
                            let (exact, exact_dec) = row
                                .exact
                                .as_ref()
                                .map(|x| (fmt_rational(x), fmt_decimal(x)))
                                .unwrap_or_default();
                            let (mean, low, high) = row
                                .estimate
                                .as_ref()
                                .map(|e| (e.mean.to_string(), e.low.to_string(), e.high.to_string()))
                                .unwrap_or_default();
                            vec![
                                row.nprime.to_string(),
                                row.n.to_string(),
                                exact,
                                exact_dec,
                                mean,
                                low,
                                high,
                            ]
                        })
                        .collect();
                    output::csv(
                        &config,
                        Some(passed),
                        &["nprime", "n", "exact", "exact_decimal", "estimate", "ci_low", "ci_high"],
                        &rows,
                    )?;
                }
            }
            Ok(passed)
        }
        Verify::Lemma3 { n, input } => {
            #[derive(Serialize)]
            struct Lemma3 {
                graphs: u64,
                runs: u64,
                violations: u64,
            }
            let mut config = ctx.config("verify lemma3");
            let r = match (read_graph(input)?, n) {
                (Some(g), _) => {
                    config.graph = Some(g.to_string());
                    let t = perm_tally(&g, &ctx.cfg)?;
                    Lemma3 {
                        graphs: 1,
                        runs: t.runs,
                        violations: t.max_left_violations,
                    }
                }
                (None, Some(n)) => {
                    config.n = Some(*n);
                    let s = analysis::worst_case(MechanismId::Perm, *n, &ctx.cfg)?;
                    Lemma3 {
                        graphs: s.graphs,
                        runs: s.runs.perm_runs,
                        violations: s.runs.max_left_violations,
                    }
                }
                (None, None) => return Err(CliError::Usage("lemma3 needs --n, --graph or --family".into())),
            };
            let pairs = vec![
                ("graphs", r.graphs.to_string()),
                ("runs", r.runs.to_string()),
                ("violations", r.violations.to_string()),
            ];
            emit(ctx, &config, r.violations == 0, &r, pairs)
        }
    }
}

fn figure3(ctx: &Ctx, delta_max: usize) -> CliResult<bool> {
    let config = ctx.config("figure3").with("delta_max", delta_max);
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let body = analysis::figure3_csv(delta_max)?;
            print!("# {}\n# config {}\n{body}", output::header(), config.summary());
        }
        Format::Json => {
            let rows = analysis::mix_alpha_table(delta_max)?;
            output::json(&config, None, &rows)?;
        }
    }
    Ok(true)
}

fn worst_case(ctx: &Ctx, id: MechanismId, n: usize) -> CliResult<bool> {
    let mut config = ctx.config("worst-case");
    config.mechanism = Some(id.to_string());
    config.n = Some(n);
    let r = analysis::worst_case(id, n, &ctx.cfg)?;
    match ctx.format() {
        Format::Json => output::json(&config, None, &r)?,
        Format::Csv => {
            let mut rows = vec![vec![
                "all".to_string(),
                r.graphs.to_string(),
                fmt_rational(&r.min.ratio),
                fmt_decimal(&r.min.ratio),
                r.min.graph.to_string(),
            ]];
            rows.extend(r.per_delta.iter().map(|(d, s)| {
                vec![
                    d.to_string(),
                    s.graphs.to_string(),
                    fmt_rational(&s.min.ratio),
                    fmt_decimal(&s.min.ratio),
                    s.min.graph.to_string(),
                ]
            }));
            output::csv(
                &config,
                None,
                &["delta", "graphs", "min_ratio", "min_ratio_decimal", "witness"],
                &rows,
            )?;
        }
    }
    Ok(true)
}
