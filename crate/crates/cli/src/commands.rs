//! Subcommand implementations. Each builds an [`AnalysisReport`] plus any
//! extra files; writing and printing happen in `main`.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use zeroclass::carleson::sup_box_ratio;
use zeroclass::counterexample::{
    measured_block_energies, uniform_betas, PrefixObservation, MAX_ENERGY_BLOCK,
};
use zeroclass::numerics::fit::loglog_slope;
use zeroclass::profile::DEFAULT_DECAY_RATIO;
use zeroclass::report::{details, GridInfo};
use zeroclass::sufficient::half_plane_grid;
use zeroclass::system_file::{read_measure, read_system, system_to_json, Builtin};
use zeroclass::weiss::{b2_profile_with, default_grids, weiss_m_profile_with};
use zeroclass::{
    admissibility_constant, analytic_alpha_bound, assemble, basis_gram, block_energy,
    blow_up_sequence, check_zwart_bound, classify, k_profile, sector_bound, sharpness_profile,
    spectrum_in_region, zwart_summability, AnalysisReport, ClassifyOptions, DiagonalSystem, Error,
    GeometricGrid, GrowthFunction, MProfile, PointMeasure, Result, SectorRegion, Summability,
    Table, TauProfile, VerdictEntry,
};

use crate::args::*;

/// Largest block count accepted by `counterexample`.
const MAX_BLOCKS: usize = 256;

pub struct Outcome {
    pub out: PathBuf,
    pub report: AnalysisReport,
    pub extra: Vec<(String, String)>,
    /// Lines printed after the verdicts.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(out: &OutArgs, report: AnalysisReport) -> Self {
        Self {
            out: out.out.clone(),
            report,
            extra: Vec::new(),
            notes: Vec::new(),
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::Weiss(a) => weiss(a),
        Command::B2(a) => b2(a),
        Command::Carleson(a) => carleson(a),
        Command::Sufficient(SufficientCommand::Zwart(a)) => zwart(a),
        Command::Sufficient(SufficientCommand::Analytic(a)) => analytic(a),
        Command::Sufficient(SufficientCommand::Sector(a)) => sector(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Builtin(a) => builtin(a),
    }
}

/// Prefixes I/O errors with the offending path.
fn with_path<T>(path: &Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    })
}

fn load_system(path: &Path) -> Result<DiagonalSystem> {
    with_path(path, read_system(path))
}

fn load_measure(path: &Path) -> Result<PointMeasure> {
    with_path(path, read_measure(path))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Serialized name of a unit enum variant.
fn label(v: impl serde::Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::from("unknown"),
    }
}

fn report_for(command: &str, system: &DiagonalSystem) -> AnalysisReport {
    let mut report = AnalysisReport::new(command, system.label());
    report.provenance.modes = Some(system.len());
    report.provenance.truncation = system.truncation_note().map(str::to_string);
    report
}

fn grid_info(variable: &str, grid: &GeometricGrid, points: usize) -> GridInfo {
    GridInfo::geometric(variable, grid.min, grid.max, grid.per_decade, points)
}

fn grid_or(text: Option<&str>, fallback: GeometricGrid) -> Result<GeometricGrid> {
    text.map_or(Ok(fallback), GeometricGrid::parse)
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome> {
    let system = load_system(&a.system)?;
    let profile = k_profile(&system, &a.etas, a.threshold)?;
    let mut report = report_for("analyze", &system);
    let mut table = Table::new(["eta", "K"]);
    for s in &profile.samples {
        table.push(vec![s.eta, s.k])?;
    }
    report.add_table("k_profile", table);
    report.add_verdict(
        "k_profile",
        VerdictEntry {
            verdict: label(profile.verdict),
            heuristic: profile.heuristic,
            grid: GridInfo::explicit("eta", &a.etas),
            details: details(json!({ "ratio": profile.ratio, "threshold": profile.threshold })),
        },
    );
    report.set_summary("K_first", profile.samples[0].k)?;
    report.set_summary("K_last", profile.samples.last().map(|s| s.k))?;
    report.set_summary("ratio", profile.ratio)?;
    report.set_parameter("etas", &a.etas)?;
    report.set_parameter("threshold", a.threshold)?;
    Ok(Outcome::new(&a.out, report))
}

fn m_table(profile: &MProfile) -> Result<Table> {
    let mut table = Table::new(["r", "m", "omega"]);
    for s in &profile.samples {
        table.push(vec![s.r, s.m, s.omega])?;
    }
    Ok(table)
}

fn m_verdict(profile: &MProfile, grid: GridInfo) -> VerdictEntry {
    VerdictEntry {
        verdict: label(profile.verdict),
        heuristic: profile.heuristic,
        grid,
        details: details(json!({
            "trend": profile.trend,
            "threshold": profile.threshold,
            "uniform_bound": profile.uniform_bound,
            "diagnostics": profile.diagnostics,
        })),
    }
}

fn tau_table(profile: &TauProfile) -> Result<Table> {
    let mut table = Table::new(["tau", "K", "omega"]);
    for s in &profile.samples {
        table.push(vec![s.tau, s.k, s.omega])?;
    }
    Ok(table)
}

fn tau_verdict(profile: &TauProfile, grid: GridInfo) -> VerdictEntry {
    VerdictEntry {
        verdict: label(profile.verdict),
        heuristic: profile.heuristic,
        grid,
        details: details(json!({
            "trend": profile.trend,
            "threshold": profile.threshold,
            "uniform_bound": profile.uniform_bound,
            "diagnostics": profile.diagnostics,
        })),
    }
}

fn weiss(a: &WeissArgs) -> Result<Outcome> {
    let system = load_system(&a.system)?;
    let grid = grid_or(a.r_grid.as_deref(), default_grids(&system).0)?;
    let rs = grid.points();
    let profile = weiss_m_profile_with(&system, &rs, a.threshold)?;
    let mut report = report_for("weiss", &system);
    report.add_table("m_profile", m_table(&profile)?);
    report.add_verdict(
        "m_profile",
        m_verdict(&profile, grid_info("r", &grid, rs.len())),
    );
    report.set_summary("uniform_bound", profile.uniform_bound)?;
    report.set_summary("decay_ratio", profile.trend.ratio)?;
    report.set_parameter("r_grid", grid)?;
    report.set_parameter("threshold", a.threshold)?;
    Ok(Outcome::new(&a.out, report))
}

fn b2(a: &B2Args) -> Result<Outcome> {
    let system = load_system(&a.system)?;
    let grid = grid_or(a.tau_grid.as_deref(), default_grids(&system).1)?;
    let taus = grid.points();
    let profile = b2_profile_with(&system, &taus, a.threshold)?;
    let mut report = report_for("b2", &system);
    report.add_table("b2_profile", tau_table(&profile)?);
    report.add_verdict(
        "b2_profile",
        tau_verdict(&profile, grid_info("tau", &grid, taus.len())),
    );
    report.set_summary("uniform_bound", profile.uniform_bound)?;
    report.set_summary("decay_ratio", profile.trend.ratio)?;
    report.set_parameter("tau_grid", grid)?;
    report.set_parameter("threshold", a.threshold)?;
    Ok(Outcome::new(&a.out, report))
}

fn carleson(a: &CarlesonArgs) -> Result<Outcome> {
    let (measure, mut report) = match (&a.measure, &a.system) {
        (Some(path), _) => {
            let measure = load_measure(path)?;
            let label = path.file_stem().map_or_else(
                || "measure".to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            (measure, AnalysisReport::new("carleson", label))
        }
        (None, Some(path)) => {
            let system = load_system(path)?;
            (system.to_point_measure(), report_for("carleson", &system))
        }
        (None, None) => return Err(invalid("carleson needs --measure or --system")),
    };
    report.set_summary("atoms", measure.atoms().len())?;
    report.set_summary("total_mass", measure.total_mass())?;

    if !a.r.is_empty() {
        if let Some(r) = a.r.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(invalid(format!("box sides must be positive, got {r}")));
        }
        let mut table = Table::new(["r", "h"]);
        let mut notes = Vec::new();
        for &r in &a.r {
            let h = sup_box_ratio(&measure, r);
            table.push(vec![r, h])?;
            notes.push(format!("h({r}) = {h}"));
        }
        report.add_table("box_ratio", table);
        report.set_parameter("r", &a.r)?;
        let mut outcome = Outcome::new(&a.out, report);
        outcome.notes = notes;
        return Ok(outcome);
    }

    let r_grid = GeometricGrid::parse(&a.r_grid)?;
    let small_grid = GeometricGrid::parse(&a.small_grid)?;
    let (rs, small) = (r_grid.points(), small_grid.points());
    let options = ClassifyOptions {
        epsilon: a.epsilon,
        cap: a.cap,
        decay_threshold: a.threshold,
    };
    let profile = classify(&measure, &rs, &small, options)?;
    let mut table = Table::new(["r", "h"]);
    for s in &profile.samples {
        table.push(vec![s.r, s.h])?;
    }
    report.add_table("box_ratio", table);
    let mut table = Table::new(["r", "h"]);
    for s in &profile.small_box_samples {
        table.push(vec![s.r, s.h])?;
    }
    report.add_table("small_box_ratio", table);
    report.add_verdict(
        "carleson",
        VerdictEntry {
            verdict: label(profile.classification),
            heuristic: profile.heuristic,
            grid: grid_info("r", &r_grid, rs.len()),
            details: details(json!({
                "max_ratio": profile.max_ratio,
                "trend": profile.trend,
                "escape_ratio": profile.escape_ratio,
                "measure_extent": profile.measure_extent,
                "options": profile.options,
                "small_box_grid": grid_info("r", &small_grid, small.len()),
            })),
        },
    );
    report.set_summary("max_ratio", profile.max_ratio)?;
    report.set_parameter("r_grid", r_grid)?;
    report.set_parameter("small_grid", small_grid)?;
    report.set_parameter("options", options)?;
    Ok(Outcome::new(&a.out, report))
}

fn zwart(a: &ZwartArgs) -> Result<Outcome> {
    let g = GrowthFunction::log_power(a.log_power)?;
    let result = zwart_summability(&g, a.base, a.n_max, a.tail_tolerance)?;
    let mut report = AnalysisReport::new("sufficient zwart", g.description());
    let mut table = Table::new(["n", "g", "term", "partial_sum"]);
    let mut partial = 0.0;
    for n in 0..result.terms_used {
        let gv = g.eval(a.base.powi(n as i32));
        let term = 1.0 / (gv * gv);
        partial += term;
        table.push(vec![n as f64, gv, term, partial])?;
    }
    report.add_table("zwart_terms", table);
    let ns: Vec<f64> = (0..result.terms_used).map(|n| n as f64).collect();
    report.add_verdict(
        "zwart_summability",
        VerdictEntry {
            verdict: label(result.verdict),
            heuristic: result.heuristic,
            grid: GridInfo::explicit("n", &ns),
            details: details(&result),
        },
    );
    report.set_summary("partial_sum", result.partial_sum)?;
    report.set_summary("tail_slope", result.tail_slope)?;
    report.set_parameter("log_power", a.log_power)?;
    report.set_parameter("base", a.base)?;
    report.set_parameter("n_max", a.n_max)?;
    report.set_parameter("tail_tolerance", a.tail_tolerance)?;

    if let (Some(path), Some(m)) = (&a.system, a.m) {
        let system = load_system(path)?;
        report.system_label = system.label().to_string();
        report.provenance.modes = Some(system.len());
        report.provenance.truncation = system.truncation_note().map(str::to_string);
        let grid = GeometricGrid::parse(&a.r_grid)?;
        let rs = grid.points();
        let bound = check_zwart_bound(&system, m, &g, &half_plane_grid(&rs, &a.omegas))?;
        report.add_verdict(
            "zwart_bound",
            VerdictEntry {
                verdict: if bound.holds { "holds" } else { "violated" }.to_string(),
                heuristic: true,
                grid: grid_info("re_s", &grid, rs.len()),
                details: details(json!({ "report": bound, "omegas": a.omegas })),
            },
        );
        report.set_summary("smallest_m", bound.smallest_m)?;
        let sufficient = bound.holds && result.verdict == Summability::Converges;
        report.set_summary("zero_class_sufficient", sufficient)?;
        report.set_parameter("m", m)?;
        report.set_parameter("r_grid", grid)?;
        report.set_parameter("omegas", &a.omegas)?;
    }
    Ok(Outcome::new(&a.out, report))
}

/// Measured `K_η` of an optional system, checked against `bounds`.
fn compare_with_system(
    report: &mut AnalysisReport,
    system: Option<&DiagonalSystem>,
    etas: &[f64],
    bounds: &[f64],
    bound_name: &str,
) -> Result<Table> {
    let mut columns = vec!["eta", "bound"];
    if system.is_some() {
        columns.push("K");
    }
    let mut table = Table::new(columns);
    let mut worst = 0.0f64;
    for (&eta, &bound) in etas.iter().zip(bounds) {
        match system {
            Some(sys) => {
                let k = admissibility_constant(sys, eta)?;
                worst = worst.max(k / bound);
                table.push(vec![eta, bound, k])?;
            }
            None => table.push(vec![eta, bound])?,
        }
    }
    if system.is_some() {
        report.add_verdict(
            &format!("{bound_name}_check"),
            VerdictEntry {
                verdict: if worst <= 1.0 { "holds" } else { "violated" }.to_string(),
                heuristic: false,
                grid: GridInfo::explicit("eta", etas),
                details: details(json!({ "max_K_over_bound": worst })),
            },
        );
    }
    Ok(table)
}

fn check_etas(etas: &[f64]) -> Result<()> {
    if etas.is_empty() || etas.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(invalid(
            "horizons must be a nonempty list of positive numbers",
        ));
    }
    Ok(())
}

fn analytic(a: &AnalyticArgs) -> Result<Outcome> {
    check_etas(&a.etas)?;
    let bounds = a
        .etas
        .iter()
        .map(|&eta| analytic_alpha_bound(a.s_norm, a.m, a.alpha, eta))
        .collect::<Result<Vec<f64>>>()?;
    let system = a.system.as_deref().map(load_system).transpose()?;
    let mut report = match &system {
        Some(s) => report_for("sufficient analytic", s),
        None => AnalysisReport::new("sufficient analytic", "analytic bound"),
    };
    let table = compare_with_system(
        &mut report,
        system.as_ref(),
        &a.etas,
        &bounds,
        "analytic_bound",
    )?;
    report.add_table("analytic_bound", table);
    // The bound is a power η^{1/2−α} with α < 1/2, so it tends to zero.
    report.add_verdict(
        "analytic_bound",
        VerdictEntry {
            verdict: "zero-class".to_string(),
            heuristic: false,
            grid: GridInfo::explicit("eta", &a.etas),
            details: details(json!({ "exponent": 0.5 - a.alpha })),
        },
    );
    report.set_parameter("s_norm", a.s_norm)?;
    report.set_parameter("m", a.m)?;
    report.set_parameter("alpha", a.alpha)?;
    report.set_parameter("etas", &a.etas)?;
    Ok(Outcome::new(&a.out, report))
}

fn sector(a: &SectorArgs) -> Result<Outcome> {
    check_etas(&a.etas)?;
    let region = SectorRegion::new(a.a, a.b, a.beta)?;
    let bounds = a
        .etas
        .iter()
        .map(|&eta| sector_bound(&region, a.alpha, eta, a.c2))
        .collect::<Result<Vec<f64>>>()?;
    let system = a.system.as_deref().map(load_system).transpose()?;
    let mut report = match &system {
        Some(s) => report_for("sufficient sector", s),
        None => AnalysisReport::new("sufficient sector", "sector bound"),
    };
    let inside = system.as_ref().map(|s| spectrum_in_region(s, &region));
    let table = compare_with_system(
        &mut report,
        system.as_ref(),
        &a.etas,
        &bounds,
        "sector_bound",
    )?;
    report.add_table("sector_bound", table);
    let verdict = if inside == Some(false) {
        "not-applicable"
    } else {
        "zero-class"
    };
    report.add_verdict(
        "sector_bound",
        VerdictEntry {
            verdict: verdict.to_string(),
            heuristic: false,
            grid: GridInfo::explicit("eta", &a.etas),
            details: details(json!({
                "alpha_limit": region.alpha_limit(),
                "spectrum_in_region": inside,
            })),
        },
    );
    report.set_parameter("region", region)?;
    report.set_parameter("alpha", a.alpha)?;
    report.set_parameter("c2", a.c2)?;
    report.set_parameter("etas", &a.etas)?;
    Ok(Outcome::new(&a.out, report))
}

fn counterexample(a: &CounterexampleArgs) -> Result<Outcome> {
    if a.max_n == 0 || a.max_n > MAX_BLOCKS {
        return Err(invalid(format!("--max-n must lie in 1..={MAX_BLOCKS}")));
    }
    let grid = GeometricGrid::new(a.r_min, a.r_max, a.per_decade)?;
    let rs = grid.points();
    let ns: Vec<usize> = (1..=a.max_n).collect();
    let blocks = blow_up_sequence(a.beta, &ns)?;
    let energy_size = a.max_n.min(MAX_ENERGY_BLOCK);
    let basis = basis_gram(a.beta, energy_size)?;

    let mut report = AnalysisReport::new("counterexample", format!("blow-up beta={}", a.beta));
    report.provenance.modes = Some(a.max_n);
    let mut table = Table::new(["N", "c_N", "energy_ratio"]);
    for b in &blocks {
        let ratio = if b.n <= energy_size {
            block_energy(b.n, a.beta, &basis)? / b.x_norm_sq
        } else {
            f64::NAN
        };
        table.push(vec![b.n as f64, b.c_n, ratio])?;
    }
    report.add_table("blocks", table);

    let fit: Vec<(f64, f64)> = blocks
        .iter()
        .filter(|b| b.n >= 4)
        .map(|b| (b.n as f64, b.c_n))
        .collect();
    let c_n_exponent = if fit.len() >= 3 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
        loglog_slope(&xs, &ys)
    } else {
        None
    };
    report.set_summary("c_N_exponent", c_n_exponent)?;

    let assembled = assemble(a.alpha, blocks, &uniform_betas(a.max_n), &rs)?;
    let mut table = Table::new(["r", "M_r"]);
    for s in &assembled.samples {
        table.push(vec![s.r, s.m_r])?;
    }
    report.add_table("assembled", table);
    let ms: Vec<f64> = assembled.samples.iter().map(|s| s.m_r).collect();
    let trend = zeroclass::profile::tail_trend(
        &rs,
        &ms,
        zeroclass::profile::Toward::Large,
        zeroclass::profile::RATIO_DECADES,
    );
    report.add_verdict(
        "assembled_m",
        VerdictEntry {
            verdict: label(zeroclass::MVerdict::from_trend(&trend, DEFAULT_DECAY_RATIO)),
            heuristic: true,
            grid: grid_info("r", &grid, rs.len()),
            details: details(json!({
                "trend": trend,
                "threshold": DEFAULT_DECAY_RATIO,
                "decay_ratio": assembled.decay_ratio,
            })),
        },
    );
    report.set_summary("kappa", assembled.kappa)?;
    report.set_summary("decay_ratio", assembled.decay_ratio)?;
    report.set_summary("energy_lower_bounds", &assembled.energy_lower_bounds)?;
    let prefix_basis = (a.max_n <= MAX_ENERGY_BLOCK).then_some(&basis);
    if let Some(basis) = prefix_basis {
        let energies: Vec<Option<f64>> = measured_block_energies(&assembled, basis)?;
        report.set_summary("block_energies", energies)?;
    }

    let sharp = sharpness_profile(a.beta, a.alpha, &rs)?;
    let mut table = Table::new(["r", "bound"]);
    for s in &sharp.samples {
        table.push(vec![s.r, s.bound])?;
    }
    report.add_table("sharpness", table);
    report.set_summary("gamma", sharp.gamma)?;
    report.set_summary("fitted_exponent", sharp.fitted_exponent)?;
    report.set_summary("fit_shift", sharp.shift)?;
    report.set_summary("naive_exponent", sharp.naive_exponent)?;

    if let Some(basis) = prefix_basis {
        let obs = PrefixObservation::new(&assembled, basis)?;
        let top = 4f64.powi(a.max_n as i32);
        let m_grid = GeometricGrid::new(1e-2, top * 1e3, a.per_decade)?;
        let tau_grid = GeometricGrid::new(1e-3 / top, 10.0, a.per_decade)?;
        let (mr, taus) = (m_grid.points(), tau_grid.points());
        let m = obs.m_profile(&mr, DEFAULT_DECAY_RATIO)?;
        let t = obs.b2_profile(&taus, DEFAULT_DECAY_RATIO)?;
        report.add_table("prefix_m", m_table(&m)?);
        report.add_table("prefix_b2", tau_table(&t)?);
        report.add_verdict("prefix_m", m_verdict(&m, grid_info("r", &m_grid, mr.len())));
        report.add_verdict(
            "prefix_b2",
            tau_verdict(&t, grid_info("tau", &tau_grid, taus.len())),
        );
        report.set_summary(
            "prefix_verdicts_agree",
            m.verdict.is_decaying() == t.verdict.is_decaying(),
        )?;
    }

    report.set_parameter("beta", a.beta)?;
    report.set_parameter("alpha", a.alpha)?;
    report.set_parameter("max_n", a.max_n)?;
    report.set_parameter("r_grid", grid)?;
    Ok(Outcome::new(&a.out, report))
}

fn builtin(a: &BuiltinArgs) -> Result<Outcome> {
    let kind = match a.kind {
        BuiltinKind::Heat => Builtin::Heat,
        BuiltinKind::Wave => Builtin::Wave,
    };
    let system = kind.build(a.modes)?;
    let mut report = report_for("builtin", &system);
    report.set_summary("spectral_scale", system.spectral_scale())?;
    report.set_summary("total_weight", system.total_weight())?;
    report.set_parameter("kind", label(kind))?;
    report.set_parameter("modes", a.modes)?;
    let mut outcome = Outcome::new(&a.out, report);
    let mut json = system_to_json(&system);
    json.push('\n');
    outcome.extra.push(("system.json".to_string(), json));
    Ok(outcome)
}
