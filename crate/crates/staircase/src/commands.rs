use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use staircase_core::curves::{
    build_dyadic_slope_sequence, classify_sequence, slope_band_check, Classification, CurveSpec, PolygonalCurve,
    SequenceLabel, SequencePair,
};
use staircase_core::engine::{apply_bilinear, lp_norm, norm_probe, probe_pair, ProbeConfig, SampledFunction};
use staircase_core::intervals::{check_hypothesis, concave_chain, convex_chain, ChainRow, Hypothesis};
use staircase_core::symbols::{
    decomposition_check, epigraph_symbol, exponential_paraproduct_symbols, hyp2_rewrite_check, polygonal_from_curve,
    sample_symbol, staircase_symbol, FrequencyGrid, IdentityReport, Rect, SymbolSpec,
};
use staircase_core::whitney::{
    build_cover, coarse_rects, edge_interval_collections, enumerate_whitney_cubes, model_sum_eval, partition_check,
    space_intervals, Box3, CoverParams, ModelConfig, ModelGroup, MollifierParams, DEFAULT_LIMIT,
};
use staircase_core::intervals::Interval;

use crate::config::{self, Loaded};
use crate::output::{function_rows, pgm, read_function_csv, svg, Sink};
use crate::CliError;

/// Failed checks of a subcommand; files are written regardless.
pub type Failures = Vec<String>;

/// A value, or the error that prevented computing it, as `{"error": ...}`.
#[derive(Serialize)]
#[serde(untagged)]
enum Checked<T> {
    Value(T),
    Failed { error: String },
}

impl<T> From<Result<T, String>> for Checked<T> {
    fn from(r: Result<T, String>) -> Self {
        match r {
            Ok(v) => Self::Value(v),
            Err(error) => Self::Failed { error },
        }
    }
}

fn core(e: staircase_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn sequence(run: &Loaded, steps: usize) -> Result<(CurveSpec, SequencePair), CliError> {
    let curve = config::curve(&run.cfg)?;
    let seq = build_dyadic_slope_sequence(&curve, steps).map_err(core)?;
    Ok((curve, seq))
}

#[derive(Serialize)]
struct ClassificationOut {
    labels: Vec<String>,
    ratio_q: f64,
    min_step_ratio: f64,
    max_step_ratio: f64,
    convex_failures: Vec<usize>,
    concave_failures: Vec<usize>,
}

fn classification(r: staircase_core::Result<Classification>) -> Result<ClassificationOut, String> {
    r.map(|c| ClassificationOut {
        labels: c
            .labels()
            .iter()
            .map(|l| match l {
                SequenceLabel::Convex => "convex",
                SequenceLabel::Concave => "concave",
                SequenceLabel::Arithmetic => "arithmetic",
                SequenceLabel::Lacunary(_) => "lacunary",
            })
            .map(String::from)
            .collect(),
        ratio_q: c.ratio_q,
        min_step_ratio: c.min_step_ratio,
        max_step_ratio: c.max_step_ratio,
        convex_failures: c.convex_failures,
        concave_failures: c.concave_failures,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct BandOut {
    position: usize,
    lo: f64,
    hi: f64,
    inf_slope: f64,
    sup_slope: f64,
    band_ok: bool,
}

#[derive(Serialize)]
struct SequenceRow {
    position: usize,
    index: u32,
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct AnalyzeOut {
    curve: String,
    truncation: usize,
    first_index: u32,
    direction: &'static str,
    a: Vec<f64>,
    b: Vec<f64>,
    a_inf: Option<f64>,
    b_inf: Option<f64>,
    b_over_a: Vec<f64>,
    classification: Checked<ClassificationOut>,
    /// Classification of `a_j - a_0`, the sequence of the curve moved so that `a_0 = 0`.
    classification_normalized: Checked<ClassificationOut>,
    slope_bands: Vec<BandOut>,
}

pub fn analyze(run: &Loaded, sink: &mut Sink) -> Result<Failures, CliError> {
    let j = run.cfg.sequence.j;
    let (curve, seq) = sequence(run, j)?;
    let (a, b) = (seq.a(), seq.b());
    let shifted = SequencePair::new(a.iter().map(|x| x - a[0]).collect(), b.to_vec(), seq.first_index()).map_err(core)?;
    let slope_bands = (0..j)
        .map(|k| {
            let (lo, hi) = (a[k].min(a[k + 1]), a[k].max(a[k + 1]));
            let band = slope_band_check(&curve, lo, hi).map_err(core)?;
            Ok(BandOut { position: k, lo, hi, inf_slope: band.inf_slope, sup_slope: band.sup_slope, band_ok: band.band_ok })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = AnalyzeOut {
        curve: curve.name(),
        truncation: j,
        first_index: seq.first_index(),
        direction: seq.direction().as_str(),
        a: a.to_vec(),
        b: b.to_vec(),
        a_inf: seq.a_inf().filter(|x| x.is_finite()),
        b_inf: seq.b_inf(),
        b_over_a: a.iter().zip(b).map(|(x, y)| y / x).collect(),
        classification: classification(classify_sequence(&seq)).into(),
        classification_normalized: classification(classify_sequence(&shifted)).into(),
        slope_bands,
    };
    let rows: Vec<SequenceRow> =
        (0..=j).map(|k| SequenceRow { position: k, index: seq.index(k), a: a[k], b: b[k] }).collect();
    sink.json("analyze.json", "analyze", run, &report)?;
    sink.csv("sequence.csv", run, &rows)?;
    Ok(Vec::new())
}

#[derive(Serialize)]
struct IntervalRow {
    position: usize,
    lo: f64,
    hi: f64,
    closure: &'static str,
    color: usize,
}

#[derive(Serialize)]
struct ChainRowOut {
    position: usize,
    lhs: f64,
    middle: f64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct ChainOut {
    rows: Vec<ChainRowOut>,
    holds: bool,
}

fn chain_out(rows: Vec<ChainRow>) -> ChainOut {
    ChainOut {
        holds: rows.iter().all(|r| r.holds()),
        rows: rows
            .iter()
            .map(|r| ChainRowOut { position: r.position, lhs: r.lhs, middle: r.middle, rhs: r.rhs, holds: r.holds() })
            .collect(),
    }
}

#[derive(Serialize)]
struct CheckHypOut {
    hypothesis: &'static str,
    #[serde(rename = "J")]
    j: usize,
    n: usize,
    n_doubled: usize,
    stable: bool,
    per_color_lacunary: Vec<bool>,
    per_color_ratio: Vec<f64>,
    intervals: Vec<IntervalRow>,
    /// Convex chained estimate for hyp1, concave one for hyp2.
    chain: Checked<ChainOut>,
}

pub fn check_hyp(run: &Loaded, sink: &mut Sink) -> Result<Failures, CliError> {
    let j = run.cfg.sequence.j;
    let which = config::hypothesis(&run.cfg)?;
    let (_, seq) = sequence(run, 2 * j)?;
    let rep = check_hypothesis(&seq, which, j).map_err(core)?;
    let short = seq.truncated(j).map_err(core)?;
    let chain = match which {
        Hypothesis::Hyp1 => Ok(convex_chain(&short)),
        Hypothesis::Hyp2 => concave_chain(&short),
    }
    .map(chain_out)
    .map_err(|e| e.to_string())
    .into();
    let intervals: Vec<IntervalRow> = rep
        .collection
        .items
        .iter()
        .zip(&rep.collection.positions)
        .zip(&rep.coloring.assignment)
        .map(|((iv, &position), &color)| IntervalRow {
            position,
            lo: iv.lo(),
            hi: iv.hi(),
            closure: iv.closure().as_str(),
            color,
        })
        .collect();
    let mut failures = Vec::new();
    if !rep.stable {
        failures.push(format!("n changed from {} to {} when J doubled", rep.n, rep.n_doubled));
    }
    sink.csv("intervals.csv", run, &intervals)?;
    sink.json(
        "check_hyp.json",
        "check-hyp",
        run,
        CheckHypOut {
            hypothesis: which.as_str(),
            j,
            n: rep.n,
            n_doubled: rep.n_doubled,
            stable: rep.stable,
            per_color_lacunary: rep.per_color_lacunary,
            per_color_ratio: rep.per_color_ratio,
            intervals,
            chain,
        },
    )?;
    Ok(failures)
}

fn window(run: &Loaded) -> Result<Option<Rect>, CliError> {
    run.cfg.symbol.window.map(|w| Rect::new(w[0], w[1], w[2], w[3]).map_err(core)).transpose()
}

/// The symbol named in `[symbol] kind`.
pub fn build_symbol(run: &Loaded) -> Result<SymbolSpec, CliError> {
    let j = run.cfg.sequence.j;
    let (curve, seq) = sequence(run, j)?;
    let sym = match run.cfg.symbol.kind.as_str() {
        "staircase" => staircase_symbol(&seq).map_err(core)?,
        "epigraph" => {
            let (a0, aj) = (seq.a()[0], seq.a()[j]);
            epigraph_symbol(&curve, Interval::closed(a0.min(aj), a0.max(aj)).map_err(core)?)
        }
        "polygonal" => polygonal_from_curve(PolygonalCurve::from_sequence(&seq).map_err(core)?),
        "exponential" => {
            let (m1, m2, m3) = exponential_paraproduct_symbols(j).map_err(core)?;
            SymbolSpec::sum(vec![m1, m2, m3])
        }
        "ones" => SymbolSpec::ones(),
        other => return Err(CliError::Config(format!("unknown symbol kind `{other}`"))),
    };
    Ok(sym)
}

#[derive(Serialize)]
struct IdentityOut {
    points: usize,
    mismatches: usize,
    interior_mismatches: usize,
    line_mismatches: usize,
    max_per_line: usize,
    exact: bool,
}

impl From<IdentityReport> for IdentityOut {
    fn from(r: IdentityReport) -> Self {
        Self {
            points: r.points,
            mismatches: r.mismatches,
            interior_mismatches: r.interior_mismatches,
            line_mismatches: r.line_mismatches,
            max_per_line: r.max_per_line,
            exact: r.exact(),
        }
    }
}

#[derive(Serialize)]
struct SymbolOut {
    kind: String,
    nx: usize,
    ny: usize,
    window: [f64; 4],
    ones: usize,
    /// Epigraph = staircase + boundary pieces, for curve-derived kinds.
    decomposition: Option<Checked<IdentityOut>>,
    hyp2_rewrite: Option<Checked<IdentityOut>>,
}

pub fn symbol(run: &Loaded, sink: &mut Sink) -> Result<Failures, CliError> {
    let s = &run.cfg.symbol;
    let sym = build_symbol(run)?;
    let bm = sample_symbol(&sym, &FrequencyGrid { nx: s.nx, ny: s.ny, window: window(run)? })
        .map_err(|e| CliError::Config(format!("{e}; set [symbol] window for unbounded symbols")))?;
    let mut failures = Vec::new();
    let (decomposition, hyp2_rewrite) = if matches!(s.kind.as_str(), "staircase" | "epigraph") {
        let (curve, seq) = sequence(run, run.cfg.sequence.j)?;
        let mut check = |name: &str, r: staircase_core::Result<IdentityReport>| {
            let r = r.map(IdentityOut::from).map_err(|e| e.to_string());
            if let Ok(o) = &r {
                if !o.exact {
                    failures.push(format!("{name}: {} interior mismatches", o.interior_mismatches));
                }
            }
            Some(Checked::from(r))
        };
        (
            check("decomposition", decomposition_check(&curve, &seq, s.nx, s.ny)),
            check("hyp2 rewrite", hyp2_rewrite_check(&seq, s.nx, s.ny)),
        )
    } else {
        (None, None)
    };
    let w = bm.window;
    sink.bytes("symbol.pgm", &pgm(&bm, run))?;
    sink.json(
        "symbol.json",
        "symbol",
        run,
        SymbolOut {
            kind: s.kind.clone(),
            nx: s.nx,
            ny: s.ny,
            window: [w.xi_lo, w.xi_hi, w.eta_lo, w.eta_hi],
            ones: bm.values.iter().filter(|&&v| v == 1.0).count(),
            decomposition,
            hyp2_rewrite,
        },
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct ApplyOut {
    symbol: String,
    n: usize,
    period: f64,
    output_n: usize,
    l2_f: f64,
    l2_g: f64,
    l2_out: f64,
}

pub fn apply(run: &Loaded, sink: &mut Sink, f: Option<&Path>, g: Option<&Path>) -> Result<Failures, CliError> {
    let pick = |flag: Option<&Path>, cfg: &Option<std::path::PathBuf>, name: &str| -> Result<std::path::PathBuf, CliError> {
        match (flag, cfg) {
            (Some(p), _) => Ok(p.to_path_buf()),
            (None, Some(p)) => Ok(run.resolve(p)),
            (None, None) => Err(CliError::Config(format!("apply needs an input file for {name}"))),
        }
    };
    let (fp, gp) = (pick(f, &run.cfg.apply.f, "f")?, pick(g, &run.cfg.apply.g, "g")?);
    let (n, period) = (run.cfg.grid.n, run.cfg.grid.l);
    let load = |p: &Path| -> Result<SampledFunction, CliError> {
        let z = read_function_csv(p)?;
        if z.len() != n {
            return Err(CliError::Config(format!("{} has {} samples, grid N is {n}", p.display(), z.len())));
        }
        SampledFunction::new(z, period).map_err(core)
    };
    let (fs, gs) = (load(&fp)?, load(&gp)?);
    let sym = build_symbol(run)?;
    let out = apply_bilinear(&sym, &fs, &gs).map_err(core)?;
    let l2 = |x: &SampledFunction| lp_norm(x, 2.0).map_err(core);
    let report = ApplyOut {
        symbol: run.cfg.symbol.kind.clone(),
        n,
        period,
        output_n: out.len(),
        l2_f: l2(&fs)?,
        l2_g: l2(&gs)?,
        l2_out: l2(&out)?,
    };
    sink.csv("output.csv", run, &function_rows(out.samples()))?;
    sink.json("apply.json", "apply", run, report)?;
    Ok(Vec::new())
}

#[derive(Serialize)]
struct ProbeRowOut {
    p1: f64,
    p2: f64,
    p3: f64,
    #[serde(rename = "N")]
    n: usize,
    trial_family: &'static str,
    max_ratio: f64,
    argmax_trial: usize,
}

#[derive(Serialize)]
struct GrowthOut {
    p1: f64,
    p2: f64,
    p3: f64,
    first: f64,
    last: f64,
    factor: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ProbeOut {
    symbol: String,
    trials: usize,
    resolutions: Vec<usize>,
    band: f64,
    threshold: f64,
    growth: Vec<GrowthOut>,
    pass: bool,
    witnesses: Vec<String>,
}

pub fn probe(run: &Loaded, sink: &mut Sink) -> Result<Failures, CliError> {
    let p = &run.cfg.probe;
    let sym = build_symbol(run)?;
    let triples = config::triples(&run.cfg)?;
    let cfg = ProbeConfig::new(p.trials, p.resolutions.clone(), run.seed, p.band);
    let rep = norm_probe(&sym, &triples, &cfg).map_err(core)?;
    let rows: Vec<ProbeRowOut> = rep
        .rows
        .iter()
        .map(|r| ProbeRowOut {
            p1: r.triple.p1(),
            p2: r.triple.p2(),
            p3: r.triple.p3(),
            n: r.n,
            trial_family: r.family.as_str(),
            max_ratio: r.max_ratio,
            argmax_trial: r.argmax_trial,
        })
        .collect();
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    let top = *p.resolutions.iter().max().unwrap_or(&0);
    let growth: Vec<GrowthOut> = rep
        .growth
        .iter()
        .map(|g| GrowthOut {
            p1: g.triple.p1(),
            p2: g.triple.p2(),
            p3: g.triple.p3(),
            first: g.first,
            last: g.last,
            factor: g.factor,
            pass: g.factor < p.threshold,
        })
        .collect();
    sink.csv("probe.csv", run, &rows)?;
    for (g, out) in rep.growth.iter().zip(&growth) {
        if out.pass {
            continue;
        }
        failures.push(format!("growth {} at ({}, {}, {}) exceeds {}", g.factor, out.p1, out.p2, out.p3, p.threshold));
        if let Some(w) = rep.witness(&g.triple, top) {
            let (f, gg) = probe_pair(&sym, &cfg, top, w.family, w.argmax_trial).map_err(core)?;
            let stem = format!("witness_{}_{}_{}", out.p1, out.p2, out.p3);
            for (name, x) in [("f", &f), ("g", &gg)] {
                let file = format!("{stem}_{name}.csv");
                sink.csv(&file, run, &function_rows(x.samples()))?;
                witnesses.push(file);
            }
        }
    }
    sink.json(
        "probe.json",
        "probe",
        run,
        ProbeOut {
            symbol: run.cfg.symbol.kind.clone(),
            trials: p.trials,
            resolutions: p.resolutions.clone(),
            band: p.band,
            threshold: p.threshold,
            pass: failures.is_empty(),
            growth,
            witnesses,
        },
    )?;
    Ok(failures)
}

#[derive(Serialize)]
struct CoverOut {
    j: usize,
    slope: f64,
    rects: usize,
    scales: (i32, i32),
    cover_ok: bool,
    containment_ok: bool,
    samples_checked: usize,
    unresolved: usize,
    uncovered: Vec<(f64, f64)>,
    containment_failures: Vec<usize>,
}

#[derive(Serialize)]
struct RectRow {
    j: usize,
    scale: i32,
    xi_lo: f64,
    xi_hi: f64,
    eta_lo: f64,
    eta_hi: f64,
    k_lo: f64,
    k_hi: f64,
}

#[derive(Serialize)]
struct PartitionOut {
    j0: u32,
    deviation: Checked<f64>,
}

#[derive(Serialize)]
struct ModelOut {
    groups: Vec<usize>,
    rects_per_group: usize,
    n: usize,
    period: f64,
    model_value: f64,
    adjoint_value: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct CubeOut {
    j: usize,
    scale: i32,
    window_half_width: f64,
    cubes: usize,
    /// Cubes times the `2^{B}` space intervals of scale `j_P = 1`.
    multitiles: usize,
}

#[derive(Serialize)]
struct WhitneyOut {
    c0: u32,
    alpha: f64,
    base: u32,
    diagonal: String,
    covers: Vec<CoverOut>,
    cubes: Vec<Checked<CubeOut>>,
    max_overlap: [usize; 3],
    local_overlap: [Vec<usize>; 3],
    overlap_non_increasing: bool,
    partition: Vec<PartitionOut>,
    model_sum: Option<ModelOut>,
    tolerance: f64,
}

/// Grid of the model-sum evaluation: fine enough for the coarsest rectangles.
const MODEL_N: usize = 4096;
const MODEL_PERIOD: f64 = 1024.0;
const PARTITION_N: usize = 4096;
const PARTITION_PERIOD: f64 = 2.0;

fn random_function(rng: &mut ChaCha8Rng, n: usize, period: f64) -> Result<SampledFunction, CliError> {
    let c: Vec<Complex64> =
        (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI))).collect();
    SampledFunction::from_coefficients(&c, period).map_err(core)
}

pub fn whitney(run: &Loaded, sink: &mut Sink) -> Result<Failures, CliError> {
    let w = &run.cfg.whitney;
    let (_, seq) = sequence(run, (w.j_max + 2).max(run.cfg.sequence.j))?;
    let poly = PolygonalCurve::from_sequence(&seq).map_err(core)?;
    let params = CoverParams {
        c0: w.c0,
        alpha: w.alpha,
        lattice_shift: w.lattice_shift,
        depth: w.depth,
        samples: w.samples,
        limit: DEFAULT_LIMIT,
    };
    let reports = (0..=w.j_max).map(|j| build_cover(&poly, j, &params).map_err(core)).collect::<Result<Vec<_>, _>>()?;
    let mut failures = Vec::new();
    for r in &reports {
        if !r.cover_ok || !r.containment_ok {
            failures.push(format!("cover of T_{}: cover_ok={} containment_ok={}", r.j, r.cover_ok, r.containment_ok));
        }
    }
    let edges = edge_interval_collections(&reports.iter().map(|r| r.rects.clone()).collect::<Vec<_>>(), w.alpha)
        .map_err(core)?;
    let overlap_non_increasing = edges.local_overlap.iter().all(|v| v.windows(2).all(|p| p[1] <= p[0]));
    if !overlap_non_increasing {
        failures.push("edge interval overlap increases with j".into());
    }

    let model = config::diagonal(&run.cfg)?;
    let per_interval = space_intervals(w.base, 1).map_err(core)?;
    let cubes: Vec<Checked<CubeOut>> = reports
        .iter()
        .map(|r| {
            // a quarter of the triangle's width at the coarsest cover scale keeps the count small
            let half = 0.25 * (poly.vertex(r.j).0 - poly.vertex(r.j + 1).0).abs();
            let window = Box3 { lo: [-half; 3], hi: [half; 3] };
            let scale = r.scales.1;
            enumerate_whitney_cubes(w.c0, window, (scale, scale), w.lattice_shift, model, DEFAULT_LIMIT)
                .map(|q| CubeOut {
                    j: r.j,
                    scale,
                    window_half_width: half,
                    cubes: q.len(),
                    multitiles: q.len() * per_interval,
                })
                .map_err(|e| e.to_string())
                .into()
        })
        .collect();

    let moll = MollifierParams { base: w.base, kernel_width: w.kernel_width };
    let mut partition = Vec::new();
    for &j0 in &w.partition_scales {
        let dev = partition_check(j0, &moll, PARTITION_PERIOD, PARTITION_N).map_err(|e| e.to_string());
        match &dev {
            Ok(d) if *d <= w.tolerance => {}
            Ok(d) => failures.push(format!("partition of unity at j0={j0}: deviation {d}")),
            Err(e) => failures.push(format!("partition of unity at j0={j0}: {e}")),
        }
        partition.push(PartitionOut { j0, deviation: dev.into() });
    }

    let model_sum = if w.model_groups.is_empty() {
        None
    } else {
        let groups = w
            .model_groups
            .iter()
            .map(|&j| match reports.get(j) {
                Some(r) => Ok(ModelGroup { j, rects: coarse_rects(r, w.model_rects) }),
                None => Err(CliError::Config(format!("model group {j} exceeds j_max {}", w.j_max))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
        let f = random_function(&mut rng, MODEL_N, MODEL_PERIOD)?;
        let g = random_function(&mut rng, MODEL_N, MODEL_PERIOD)?;
        let h = random_function(&mut rng, MODEL_N, MODEL_PERIOD)?;
        let cfg = ModelConfig { alpha: w.alpha, omega3_pieces: 3, mollifier: moll, space_scale: 1 };
        let r = model_sum_eval(&f, &g, &h, &groups, &poly, &cfg).map_err(core)?;
        if !(r.deviation <= w.tolerance) {
            failures.push(format!("model sum deviation {}", r.deviation));
        }
        Some(ModelOut {
            groups: w.model_groups.clone(),
            rects_per_group: w.model_rects,
            n: MODEL_N,
            period: MODEL_PERIOD,
            model_value: r.model_value,
            adjoint_value: r.adjoint_value,
            deviation: r.deviation,
        })
    };

    // the finest scales hold almost all rectangles; export only the coarsest ones
    let exported: Vec<_> = reports
        .iter()
        .flat_map(|r| r.rects.iter().filter(|t| t.square.scale > r.scales.1 - w.export_scales as i32).copied())
        .collect();
    let rows: Vec<RectRow> = exported
        .iter()
        .map(|t| {
            let k = t.k_interval();
            RectRow {
                j: t.j,
                scale: t.square.scale,
                xi_lo: t.xi.0,
                xi_hi: t.xi.1,
                eta_lo: t.eta.0,
                eta_hi: t.eta.1,
                k_lo: k.lo(),
                k_hi: k.hi(),
            }
        })
        .collect();
    let vertices: Vec<(f64, f64)> = (0..=w.j_max + 1).map(|k| poly.vertex(k)).collect();
    let covers = reports
        .iter()
        .map(|r| CoverOut {
            j: r.j,
            slope: poly.slope(r.j),
            rects: r.rects.len(),
            scales: r.scales,
            cover_ok: r.cover_ok,
            containment_ok: r.containment_ok,
            samples_checked: r.samples_checked,
            unresolved: r.unresolved,
            uncovered: r.uncovered.clone(),
            containment_failures: r.containment_failures.clone(),
        })
        .collect();
    sink.csv("rects.csv", run, &rows)?;
    sink.bytes("rects.svg", &svg(&exported, &vertices, run))?;
    sink.json(
        "whitney.json",
        "whitney",
        run,
        WhitneyOut {
            c0: w.c0,
            alpha: w.alpha,
            base: w.base,
            diagonal: w.diagonal.clone(),
            covers,
            cubes,
            max_overlap: edges.max_overlap,
            local_overlap: edges.local_overlap,
            overlap_non_increasing,
            partition,
            model_sum,
            tolerance: w.tolerance,
        },
    )?;
    Ok(failures)
}
