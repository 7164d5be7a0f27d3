use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use packcell::entropy::{
    entropy_estimate, exact_entropy, gamma_experiment, partition_entropy, ConvergenceRow, EmpiricalPointSet,
    PiecewiseConstantDensity, SamplingMode,
};
use packcell::packing::random_critical_packing;
use packcell::proof_checks::{
    check_case3_inequality, check_claim1, check_g_monotone, check_lemma_alpha_extremes, check_oa2_bound,
    AlphaExtremesReport, Case3Report, Claim1Report, GMonotoneReport, Oa2Report, SweepSpec,
};
use packcell::{density, CellComplex, Error, Packing, Point, ValidationReport, Window, HEXAGONAL_DENSITY};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::input::{parse_list, read_points, PackingFile};
use crate::{Cli, CliError, Command, GenerateMode, ProveCheck};

/// Slack on the coverage bound.
const BOUND_TOL: f64 = 1e-9;
const SLOPE_TOL: f64 = -1e-9;
const CASE3_TOL: f64 = -1e-12;
const CLAIM1_XS: [f64; 4] = [0.0, 0.05, 0.1, 0.155];

#[derive(Serialize)]
struct Report<'a, T> {
    command: &'a [String],
    seed: u64,
    #[serde(flatten)]
    body: T,
}

struct Ctx {
    echo: Vec<String>,
    seed: u64,
}

impl Ctx {
    fn emit<T: Serialize>(&self, body: T, out: Option<&Path>) -> Result<(), CliError> {
        let report = Report {
            command: &self.echo,
            seed: self.seed,
            body,
        };
        let value = serde_json::to_value(&report).map_err(|e| CliError::Domain(e.to_string()))?;
        if has_null(&value) {
            // Non-finite floats serialize as null.
            return Err(CliError::Domain("report contains a non-finite number".into()));
        }
        let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Domain(e.to_string()))?;
        text.push('\n');
        write_text(out, &text)
    }
}

fn has_null(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Array(a) => a.iter().any(has_null),
        Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli, echo: Vec<String>) -> Result<(), CliError> {
    let ctx = Ctx { echo, seed: cli.seed };
    match &cli.command {
        Command::Validate { packing, out } => validate(&ctx, packing, out.as_deref()),
        Command::Cells { packing, window, out } => cells(&ctx, packing, window.map(|w| w.0), out.as_deref()),
        Command::Density {
            packing,
            window,
            shrink,
            out,
        } => density_table(&ctx, packing, window.map(|w| w.0), *shrink, out.as_deref()),
        Command::Random { n, window, out } => random(&ctx, *n as usize, window.0, out.as_deref()),
        Command::Entropy {
            points,
            generate,
            domain,
            schedule,
            levels,
            out,
            report,
        } => entropy(
            &ctx,
            EntropyArgs {
                points: points.clone(),
                generate: *generate,
                domain: domain.0,
                schedule,
                levels: levels.as_deref(),
                out: out.as_deref(),
                report: report.as_deref(),
            },
        ),
        Command::Prove {
            check,
            grid,
            trials,
            outside_regime,
            out,
        } => prove(&ctx, *check, *grid, *trials, *outside_regime, out.as_deref()),
    }
}

fn domain_error(e: Error) -> CliError {
    CliError::Domain(e.to_string())
}

fn load(path: &Path) -> Result<(Packing, Option<Window>), CliError> {
    let file = PackingFile::read(path)?;
    Ok((file.packing()?, file.window()?))
}

#[derive(Serialize)]
struct ValidateBody<'a> {
    discs: usize,
    #[serde(flatten)]
    report: &'a ValidationReport,
}

fn validate(ctx: &Ctx, path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (packing, _) = load(path)?;
    let report = packing.validate();
    ctx.emit(
        ValidateBody {
            discs: packing.len(),
            report: &report,
        },
        out,
    )?;
    if report.valid {
        Ok(())
    } else {
        Err(CliError::Domain(format!("{} violating pairs", report.violations.len())))
    }
}

fn ensure_valid(packing: &Packing) -> Result<(), CliError> {
    let report = packing.validate();
    if report.valid {
        return Ok(());
    }
    let first = &report.violations[0];
    Err(CliError::Domain(format!(
        "packing violates the inflation condition at {} pairs, first ({}, {})",
        report.violations.len(),
        first.i,
        first.j
    )))
}

#[derive(Serialize)]
struct CellEntry {
    index: usize,
    center: Point,
    radius: f64,
    vertices: Vec<[f64; 2]>,
    area: f64,
    coverage_ratio: f64,
    artificially_bounded: bool,
}

#[derive(Serialize)]
struct CellsBody {
    window: Window,
    bound: f64,
    interior_cells: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_interior_ratio: Option<f64>,
    within_bound: bool,
    cells: Vec<CellEntry>,
}

fn cells(ctx: &Ctx, path: &Path, window: Option<Window>, out: Option<&Path>) -> Result<(), CliError> {
    let (packing, file_window) = load(path)?;
    ensure_valid(&packing)?;
    let window = window.or(file_window).unwrap_or_else(|| packing.bounding_window());
    let complex = CellComplex::new(&packing, &window).map_err(domain_error)?;
    let entries = complex
        .cells()
        .into_iter()
        .map(|c| {
            let disc = packing.discs()[c.index];
            Ok(CellEntry {
                index: c.index,
                center: disc.center,
                radius: disc.radius,
                vertices: c.region.vertices().iter().map(|v| [v.x, v.y]).collect(),
                area: c.region.area(),
                coverage_ratio: c.coverage(&disc).map_err(domain_error)?,
                artificially_bounded: c.artificially_bounded,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let interior: Vec<f64> = entries
        .iter()
        .filter(|c| !c.artificially_bounded)
        .map(|c| c.coverage_ratio)
        .collect();
    let max_interior_ratio = interior.iter().copied().reduce(f64::max);
    let within_bound = max_interior_ratio.is_none_or(|m| m <= HEXAGONAL_DENSITY + BOUND_TOL);
    ctx.emit(
        CellsBody {
            window,
            bound: HEXAGONAL_DENSITY,
            interior_cells: interior.len(),
            max_interior_ratio,
            within_bound,
            cells: entries,
        },
        out,
    )?;
    if within_bound {
        Ok(())
    } else {
        Err(CliError::Domain("an interior cell exceeds the coverage bound".into()))
    }
}

#[derive(Serialize)]
struct DensityRow {
    factor: f64,
    window: Window,
    extent: f64,
    area: f64,
    density: f64,
}

#[derive(Serialize)]
struct DensityBody {
    bound: f64,
    rows: Vec<DensityRow>,
}

fn density_table(ctx: &Ctx, path: &Path, window: Option<Window>, k: u32, out: Option<&Path>) -> Result<(), CliError> {
    let (packing, file_window) = load(path)?;
    ensure_valid(&packing)?;
    let window = window.or(file_window).unwrap_or_else(|| packing.bounding_window());
    let rows = (0..k)
        .map(|s| {
            let factor = f64::from(s + 1) / f64::from(k);
            let w = window.shrunk(factor);
            Ok(DensityRow {
                factor,
                window: w,
                extent: w.extent(),
                area: w.area(),
                density: density(&packing, &w).map_err(domain_error)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    ctx.emit(
        DensityBody {
            bound: HEXAGONAL_DENSITY,
            rows,
        },
        out,
    )
}

fn random(ctx: &Ctx, n: usize, window: Window, out: Option<&Path>) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let packing = random_critical_packing(n, &window, &mut rng).map_err(domain_error)?;
    let file = PackingFile::from_packing(&packing, Some(window));
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| CliError::Domain(e.to_string()))?;
    text.push('\n');
    write_text(out, &text)
}

struct EntropyArgs<'a> {
    points: Option<PathBuf>,
    generate: Option<GenerateMode>,
    domain: Window,
    schedule: &'a str,
    levels: Option<&'a str>,
    out: Option<&'a Path>,
    report: Option<&'a Path>,
}

#[derive(Serialize)]
struct EntropyBody<'a> {
    source: &'a str,
    domain: Window,
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<Vec<f64>>,
    rows: Vec<ConvergenceRow>,
}

fn entropy(ctx: &Ctx, args: EntropyArgs) -> Result<(), CliError> {
    let (source, levels, rows) = match (&args.points, args.generate) {
        (Some(path), _) => {
            let points = read_points(path)?;
            if points.len() < 2 {
                return Err(CliError::Domain(Error::TooFewPoints.to_string()));
            }
            let x = EmpiricalPointSet::new(points, args.domain).map_err(|e| CliError::Input(e.to_string()))?;
            // Reference measure: uniform on the domain.
            let exact = -x.domain().area().ln();
            let estimator = entropy_estimate(&x).map_err(domain_error)?;
            let partition = partition_entropy(&x).map_err(domain_error)?;
            let row = ConvergenceRow {
                n: x.len(),
                placed: x.len(),
                estimator,
                partition_entropy: partition,
                exact_entropy: exact,
                gap: estimator - exact,
                partition_gap: partition - exact,
            };
            ("points", None, vec![row])
        }
        (None, Some(mode)) => {
            let Window::Rect { xmin, ymin, xmax, ymax } = args.domain else {
                return Err(CliError::Input("generated point sets need a rect domain".into()));
            };
            let (lo, hi) = (Point::new(xmin, ymin), Point::new(xmax, ymax));
            let schedule = parse_list::<usize>(args.schedule).map_err(CliError::Input)?;
            if schedule.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::Input("schedule must be strictly increasing".into()));
            }
            let levels = args.levels.map(parse_list::<f64>).transpose().map_err(CliError::Input)?;
            let rho = match &levels {
                Some(l) => PiecewiseConstantDensity::vertical_strips(lo, hi, l),
                None => PiecewiseConstantDensity::uniform(lo, hi),
            }
            .map_err(|e| CliError::Input(e.to_string()))?;
            let mode = match mode {
                GenerateMode::Iid => SamplingMode::Iid,
                GenerateMode::Hexagonal => SamplingMode::Hexagonal,
                GenerateMode::SquareGrid => SamplingMode::SquareGrid,
            };
            exact_entropy(&rho).map_err(|e| CliError::Input(e.to_string()))?;
            let rows = gamma_experiment(&rho, &schedule, mode, ctx.seed).map_err(domain_error)?;
            let source = match mode {
                SamplingMode::Iid => "iid",
                SamplingMode::Hexagonal => "hexagonal",
                SamplingMode::SquareGrid => "square-grid",
            };
            (source, levels, rows)
        }
        (None, None) => return Err(CliError::Input("either --points or --generate is required".into())),
    };

    if let Some(path) = args.out {
        write_table(path, &rows)?;
    }
    ctx.emit(
        EntropyBody {
            source,
            domain: args.domain,
            levels,
            rows,
        },
        args.report,
    )
}

fn write_table(path: &Path, rows: &[ConvergenceRow]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Domain(e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["N", "estimator", "partition_entropy", "exact_entropy", "gap"]).map_err(io)?;
    for r in rows {
        w.serialize((r.placed, r.estimator, r.partition_entropy, r.exact_entropy, r.gap)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Default)]
struct ProveBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<GMonotoneReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    claim1: Option<Vec<Claim1Report>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<AlphaExtremesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cos2: Option<Case3Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oa2: Option<Oa2Report>,
    failed: Vec<&'static str>,
    passed: bool,
}

fn prove(
    ctx: &Ctx,
    check: ProveCheck,
    grid: usize,
    trials: usize,
    outside_regime: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let wants = |c: ProveCheck| check == ProveCheck::All || check == c;
    let input = |e: Error| CliError::Input(e.to_string());
    let mut body = ProveBody::default();

    if wants(ProveCheck::G) {
        let spec = if outside_regime {
            SweepSpec::outside_regime(grid)
        } else {
            SweepSpec::regime(grid)
        };
        let r = check_g_monotone(&spec).map_err(input)?;
        if r.in_regime && r.min_slope < SLOPE_TOL {
            body.failed.push("g");
        }
        body.g = Some(r);
    }
    if wants(ProveCheck::Claim1) {
        let reports = CLAIM1_XS
            .iter()
            .enumerate()
            .map(|(i, &x)| check_claim1(x, trials, ctx.seed.wrapping_add(i as u64)))
            .collect::<packcell::Result<Vec<_>>>()
            .map_err(input)?;
        if reports.iter().any(|r| r.violations > 0 || !r.endpoints_feasible) {
            body.failed.push("claim1");
        }
        body.claim1 = Some(reports);
    }
    if wants(ProveCheck::Alpha) {
        let r = check_lemma_alpha_extremes();
        if !(r.matches_bounds && r.margin > 0.0) {
            body.failed.push("alpha");
        }
        body.alpha = Some(r);
    }
    if wants(ProveCheck::Cos2) {
        let r = check_case3_inequality(grid.saturating_mul(grid)).map_err(input)?;
        if r.min_margin < CASE3_TOL {
            body.failed.push("cos2");
        }
        body.cos2 = Some(r);
    }
    if wants(ProveCheck::Oa2) {
        let r = check_oa2_bound(trials, ctx.seed);
        if r.violations > 0 || r.contrapositive_violations > 0 {
            body.failed.push("oa2");
        }
        body.oa2 = Some(r);
    }

    body.passed = body.failed.is_empty();
    let failed = body.failed.join(", ");
    ctx.emit(body, out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("margins below tolerance: {failed}")))
    }
}
