//! Subcommand execution. Files are written only after all numbers for them
//! are computed.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use dimerspin::analysis::{annotate_steps, ground_state_magnetization};
use dimerspin::{
    critical_field, detect_plateaus, entanglement_onset, run_sweep, GridAxis, PreparedChain,
    Strategy, SweepGrid, SweepRequest,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;
use crate::output::{format_g12, write_grid, write_plot_script};

/// Largest disagreement `--verify` tolerates between the grid and a fresh
/// dense evaluation.
pub const VERIFY_TOL: f64 = 1e-8;

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        Command::Point | Command::Sweep => {
            let grid = compute_grid(config)?;
            verify(config, &grid)?;
            write_grid_outputs(config, &grid, config.out.as_deref())
        }
        Command::Plateaus => plateaus(config),
        Command::Spectrum => spectrum(config),
        Command::Figures => figures(config),
    }
}

/// Evaluates the grid described by `config` and checks the domain invariants.
pub fn compute_grid(config: &RunConfig) -> Result<SweepGrid, CliError> {
    let axes = config
        .axes
        .iter()
        .map(|a| GridAxis::linspace(a.param, a.min, a.max, a.steps))
        .collect::<Result<Vec<_>, _>>()?;
    let req = SweepRequest::new(config.spec.clone(), config.kbt, axes, config.pairs.clone())
        .with_threads(config.threads)
        .with_strategy(config.strategy);
    let grid = run_sweep(&req)?;
    for p in 0..grid.n_points() {
        for slot in 0..grid.pairs.len() {
            let c = grid.concurrence(p, slot);
            if !(0.0..=1.0).contains(&c) {
                return Err(CliError::Numerical(format!(
                    "concurrence {c} outside [0, 1] at grid point {p}"
                )));
            }
        }
    }
    Ok(grid)
}

/// Re-evaluates `config.verify` seeded random points on the dense path.
fn verify(config: &RunConfig, grid: &SweepGrid) -> Result<(), CliError> {
    if config.verify == 0 {
        return Ok(());
    }
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut worst = 0.0f64;
    for _ in 0..config.verify {
        let p = rng.random_range(0..grid.n_points());
        let point = grid.point(p);
        let chain = PreparedChain::with_strategy(&point.spec, Strategy::Dense)?;
        for (slot, pair) in grid.pairs.iter().enumerate() {
            let fresh = chain
                .pair_concurrence(point.spec.b, point.kt, pair.index)?
                .c;
            let diff = (fresh - grid.concurrence(p, slot)).abs();
            worst = worst.max(diff);
            if diff > VERIFY_TOL {
                return Err(CliError::Numerical(format!(
                    "grid point {p} pair {}: {} vs dense {fresh}",
                    pair.index,
                    grid.concurrence(p, slot)
                )));
            }
        }
    }
    eprintln!(
        "verified {} points, worst deviation {worst:e}",
        config.verify
    );
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn io_at(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// Path of the gnuplot script accompanying `data`.
pub fn script_path(data: &Path) -> PathBuf {
    data.with_extension("gp")
}

fn write_grid_outputs(
    config: &RunConfig,
    grid: &SweepGrid,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let Some(path) = out else {
        return write_grid(grid, config.format, io::stdout().lock()).map_err(CliError::from);
    };
    write_grid(grid, config.format, create(path)?).map_err(io_at(path))?;
    if config.emit_plot {
        let script = script_path(path);
        let data_name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        write_plot_script(grid, &data_name, config.format, create(&script)?)?;
    }
    Ok(())
}

fn open_output(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &config.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn plateaus(config: &RunConfig) -> Result<(), CliError> {
    let grid = compute_grid(config)?;
    let b = &grid.axes[0].values;
    let jumps = if config.spec.theta == 0.0 {
        ground_state_magnetization(&config.spec, b)?.1
    } else {
        Vec::new()
    };
    let sep = config.format.separator();
    let mut rows = vec![[
        "pair_index",
        "pair_kind",
        "record",
        "b_start",
        "b_end",
        "value",
        "spread",
        "nearest_jump",
    ]
    .map(String::from)];
    for (slot, pair) in grid.pairs.iter().enumerate() {
        let c = grid.series(slot);
        let report = detect_plateaus(b, &c, config.plateau_tol, config.min_width)?;
        let head = [pair.index.to_string(), pair.kind.to_string()];
        for p in &report.plateaus {
            rows.push(row(
                &head,
                "plateau",
                p.b_start,
                p.b_end,
                Some(p.mean),
                Some(p.max_deviation),
                None,
            ));
        }
        for (step, plateaus) in annotate_steps(&report.steps, &jumps)
            .iter()
            .zip(report.plateaus.windows(2))
        {
            let signed = plateaus[1].mean - plateaus[0].mean;
            let loc = step.step.location;
            rows.push(row(
                &head,
                "step",
                loc,
                loc,
                Some(signed),
                None,
                step.nearest_jump,
            ));
        }
        if let Ok(bc) = critical_field(b, &c, config.zero_tol) {
            rows.push(row(&head, "critical_field", bc, bc, None, None, None));
        }
        if let Some(onset) = entanglement_onset(b, &c, config.zero_tol) {
            rows.push(row(&head, "onset", onset, onset, None, None, None));
        }
    }
    for jump in &jumps {
        rows.push(row(
            &[String::new(), String::new()],
            "magnetization_jump",
            *jump,
            *jump,
            None,
            None,
            None,
        ));
    }
    let mut w = open_output(config)?;
    for r in rows {
        writeln!(w, "{}", r.join(&sep.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn row(
    head: &[String; 2],
    record: &str,
    b_start: f64,
    b_end: f64,
    value: Option<f64>,
    spread: Option<f64>,
    jump: Option<f64>,
) -> [String; 8] {
    let opt = |x: Option<f64>| x.map(format_g12).unwrap_or_default();
    [
        head[0].clone(),
        head[1].clone(),
        record.to_owned(),
        format_g12(b_start),
        format_g12(b_end),
        opt(value),
        opt(spread),
        opt(jump),
    ]
}

fn spectrum(config: &RunConfig) -> Result<(), CliError> {
    let chain = PreparedChain::with_strategy(&config.spec, config.strategy)?;
    let b = config.spec.b;
    let decomp = chain.decomposition();
    let mut levels: Vec<(f64, Option<i32>)> =
        match decomp.sector_labels().filter(|_| chain.serves_any_field()) {
            Some(labels) => decomp
                .eigenvalues()
                .iter()
                .zip(labels)
                .map(|(&e, &m)| (e + b * m as f64, Some(m)))
                .collect(),
            None => decomp.eigenvalues().iter().map(|&e| (e, None)).collect(),
        };
    levels.sort_by(|x, y| x.0.total_cmp(&y.0));
    let sep = config.format.separator();
    let mut w = open_output(config)?;
    writeln!(w, "index{sep}energy{sep}magnetization")?;
    for (k, (e, m)) in levels.iter().enumerate() {
        let m = m.map(|m| m.to_string()).unwrap_or_default();
        writeln!(w, "{k}{sep}{}{sep}{m}", format_g12(*e))?;
    }
    w.flush()?;
    Ok(())
}

fn figures(config: &RunConfig) -> Result<(), CliError> {
    let root = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("figures"));
    for fig in &config.figures {
        let fc = fig.config(config);
        fc.spec.validate()?;
        let grid = compute_grid(&fc)?;
        let ext = match fc.format {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        };
        let data = root.join(fig.as_str()).join(format!("{fig}.{ext}"));
        write_grid_outputs(&fc, &grid, Some(&data))?;
        eprintln!("{fig}: {} points -> {}", grid.n_points(), data.display());
    }
    Ok(())
}
