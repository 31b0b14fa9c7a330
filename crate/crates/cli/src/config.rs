//! Command-line and config-file parsing into a validated [`RunConfig`].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dimerspin::{Boundary, ChainSpec, Model, Strategy, SweepParam};

use crate::error::CliError;
use crate::figures::Figure;

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "DIMERSPIN_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "dimerspin",
    version,
    about = "Thermal pairwise entanglement of dimerized Heisenberg chains"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Concurrence of the tracked pairs at a single parameter point.
    Point(Flags),
    /// Concurrence over a 1-D or 2-D parameter grid.
    Sweep(Flags),
    /// Staircase, critical field and onset analysis of a field sweep.
    Plateaus(Flags),
    /// Energy levels of one chain.
    Spectrum(Flags),
    /// Runs the preset figure sweeps, one directory per figure.
    Figures(FigureFlags),
}

#[derive(Args, Debug, Default, Clone)]
struct FigureFlags {
    /// fig1 … fig8, or `all`.
    #[arg(value_name = "FIGURE", required = true)]
    which: Vec<String>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Number of sites.
    #[arg(long)]
    n: Option<usize>,
    /// Exchange constant.
    #[arg(long)]
    j: Option<f64>,
    /// Dimerization strength in [0, 1].
    #[arg(long)]
    delta: Option<f64>,
    /// Field strength.
    #[arg(long)]
    b: Option<f64>,
    /// Field tilt from the z axis; accepts `pi/4` style values.
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    /// closed or open.
    #[arg(long)]
    boundary: Option<Boundary>,
    /// xxx or xx.
    #[arg(long)]
    model: Option<Model>,
    /// Temperature k_B T; 0 selects the ground state.
    #[arg(long)]
    kbt: Option<f64>,

    #[arg(long)]
    b_min: Option<f64>,
    #[arg(long)]
    b_max: Option<f64>,
    #[arg(long)]
    b_steps: Option<usize>,
    #[arg(long)]
    kbt_min: Option<f64>,
    #[arg(long)]
    kbt_max: Option<f64>,
    #[arg(long)]
    kbt_steps: Option<usize>,
    #[arg(long)]
    delta_min: Option<f64>,
    #[arg(long)]
    delta_max: Option<f64>,
    #[arg(long)]
    delta_steps: Option<usize>,
    #[arg(long, value_parser = parse_angle)]
    theta_min: Option<f64>,
    #[arg(long, value_parser = parse_angle)]
    theta_max: Option<f64>,
    #[arg(long)]
    theta_steps: Option<usize>,

    /// Bond to track (repeatable); 1 is strong, 2 is weak.
    #[arg(long = "pair")]
    pairs: Vec<usize>,
    /// Output file (directory for `figures`); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or tsv.
    #[arg(long)]
    format: Option<Format>,
    /// Also write a gnuplot script next to the output.
    #[arg(long)]
    emit_plot: bool,
    /// Worker threads, 0 = one per core.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the random cross-check sample of `--verify`.
    #[arg(long)]
    seed: Option<u64>,
    /// Re-evaluate this many random grid points on the dense path and fail
    /// if any disagrees.
    #[arg(long)]
    verify: Option<usize>,
    /// auto, dense, sectored or symmetric.
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    plateau_tol: Option<f64>,
    #[arg(long)]
    min_width: Option<usize>,
    #[arg(long)]
    zero_tol: Option<f64>,
    /// File of `key=value` lines using the flag names; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let Some(rest) = t
        .strip_suffix("pi")
        .map(str::to_owned)
        .or_else(|| t.split_once("pi/").map(|(k, d)| format!("{k}/{d}")))
    else {
        return t
            .parse::<f64>()
            .map_err(|e| format!("invalid angle `{s}`: {e}"));
    };
    // `k*pi`, `kpi`, `pi/d`, `k*pi/d`.
    let (k, d) = match rest.split_once('/') {
        Some((k, d)) => (k.to_owned(), d.to_owned()),
        None => (rest, "1".to_owned()),
    };
    let k = k.trim_end_matches('*');
    let k = if k.is_empty() {
        1.0
    } else {
        k.parse::<f64>()
            .map_err(|e| format!("invalid angle `{s}`: {e}"))?
    };
    let d = d
        .parse::<f64>()
        .map_err(|e| format!("invalid angle `{s}`: {e}"))?;
    Ok(k * PI / d)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            _ => Err(format!("unknown format `{s}` (expected csv or tsv)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Point,
    Sweep,
    Plateaus,
    Spectrum,
    Figures,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Point => "point",
            Command::Sweep => "sweep",
            Command::Plateaus => "plateaus",
            Command::Spectrum => "spectrum",
            Command::Figures => "figures",
        }
    }
}

/// A varying parameter: `steps` values from `min` to `max` inclusive.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AxisSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    /// Range used for flags the user left out.
    pub fn default_for(param: SweepParam) -> Self {
        let (min, max, steps) = match param {
            SweepParam::B => (0.0, 5.0, 400),
            SweepParam::Kt => (0.05, 2.0, 40),
            SweepParam::Delta => (0.0, 1.0, 21),
            SweepParam::Theta => (0.0, PI / 2.0, 13),
        };
        Self {
            param,
            min,
            max,
            steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec: ChainSpec,
    pub kbt: f64,
    /// Varying parameters, first axis slowest.
    pub axes: Vec<AxisSpec>,
    pub pairs: Vec<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub emit_plot: bool,
    pub threads: usize,
    pub seed: u64,
    pub verify: usize,
    pub strategy: Strategy,
    pub plateau_tol: f64,
    pub min_width: usize,
    pub zero_tol: f64,
    pub figures: Vec<Figure>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Point,
            spec: ChainSpec::default(),
            kbt: 0.1,
            axes: Vec::new(),
            pairs: vec![1],
            out: None,
            format: Format::Csv,
            emit_plot: false,
            threads: 0,
            seed: 0,
            verify: 0,
            strategy: Strategy::Auto,
            plateau_tol: dimerspin::analysis::DEFAULT_PLATEAU_TOL,
            min_width: dimerspin::analysis::DEFAULT_MIN_WIDTH,
            zero_tol: dimerspin::analysis::ZERO_TOL,
            figures: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn axis(&self, param: SweepParam) -> Option<&AxisSpec> {
        self.axes.iter().find(|a| a.param == param)
    }

    /// Flags that reproduce this configuration through [`parse_config`].
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec!["dimerspin".to_owned(), self.command.as_str().to_owned()];
        a.extend(self.figures.iter().map(|f| f.as_str().to_owned()));
        let mut flag = |name: &str, value: String| {
            a.push(format!("--{name}"));
            a.push(value);
        };
        let s = &self.spec;
        flag("n", s.n_sites.to_string());
        flag("j", s.j.to_string());
        flag("boundary", s.boundary.to_string());
        flag("model", s.model.to_string());
        for (param, value) in [
            (SweepParam::Delta, s.delta),
            (SweepParam::B, s.b),
            (SweepParam::Theta, s.theta),
            (SweepParam::Kt, self.kbt),
        ] {
            match self.axis(param) {
                Some(ax) => {
                    flag(&format!("{param}-min"), ax.min.to_string());
                    flag(&format!("{param}-max"), ax.max.to_string());
                    flag(&format!("{param}-steps"), ax.steps.to_string());
                }
                None => flag(param.as_str(), value.to_string()),
            }
        }
        for p in &self.pairs {
            flag("pair", p.to_string());
        }
        if let Some(out) = &self.out {
            flag("out", out.display().to_string());
        }
        flag("format", self.format.as_str().to_owned());
        flag("threads", self.threads.to_string());
        flag("seed", self.seed.to_string());
        flag("verify", self.verify.to_string());
        flag("strategy", self.strategy.to_string());
        flag("plateau-tol", self.plateau_tol.to_string());
        flag("min-width", self.min_width.to_string());
        flag("zero-tol", self.zero_tol.to_string());
        if self.emit_plot {
            a.push("--emit-plot".to_owned());
        }
        // Axis order is significant; the parser orders axes by first flag.
        let order: Vec<String> = self
            .axes
            .iter()
            .map(|ax| format!("--{}-min", ax.param))
            .collect();
        reorder_axis_flags(&mut a, &order);
        a
    }
}

/// Moves the `--x-min/--x-max/--x-steps` triples to the end of `args`, in
/// `order`.
fn reorder_axis_flags(args: &mut Vec<String>, order: &[String]) {
    let mut tail = Vec::new();
    for min_flag in order {
        let stem = min_flag.trim_end_matches("-min");
        for suffix in ["-min", "-max", "-steps"] {
            let name = format!("{stem}{suffix}");
            if let Some(i) = args.iter().position(|x| *x == name) {
                let value = args.remove(i + 1);
                args.remove(i);
                tail.push(name);
                tail.push(value);
            }
        }
    }
    args.extend(tail);
}

/// Parses `argv` (program name first), merging any `--config` file beneath
/// the explicit flags.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    let (command, flags, which) = match cli.command {
        CliCommand::Point(f) => (Command::Point, f, Vec::new()),
        CliCommand::Sweep(f) => (Command::Sweep, f, Vec::new()),
        CliCommand::Plateaus(f) => (Command::Plateaus, f, Vec::new()),
        CliCommand::Spectrum(f) => (Command::Spectrum, f, Vec::new()),
        CliCommand::Figures(f) => (Command::Figures, f.flags, f.which),
    };
    let axis_order = axis_order(&argv);
    let flags = match &flags.config {
        Some(path) => merge(flags.clone(), read_config_file(path)?),
        None => flags,
    };
    build(command, flags, which, &axis_order)
}

/// Axes in the order their flags first appear on the command line.
fn axis_order(argv: &[std::ffi::OsString]) -> Vec<SweepParam> {
    let mut order = Vec::new();
    for arg in argv {
        let arg = arg.to_string_lossy();
        for param in SweepParam::ALL {
            let prefix = format!("--{param}-");
            if arg.starts_with(&prefix) && !order.contains(&param) {
                order.push(param);
            }
        }
    }
    order
}

fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut argv = vec!["dimerspin".to_owned(), "sweep".to_owned()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                lineno + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if key == "config" {
            return Err(CliError::Usage(format!(
                "{}: nested `config` is not allowed",
                path.display()
            )));
        }
        match key {
            "emit-plot" => match value {
                "true" | "1" | "yes" => argv.push("--emit-plot".into()),
                "false" | "0" | "no" => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}: emit-plot expects true or false",
                        path.display()
                    )))
                }
            },
            "pair" => {
                for p in value.split(',') {
                    argv.push("--pair".into());
                    argv.push(p.trim().into());
                }
            }
            _ => {
                argv.push(format!("--{key}"));
                argv.push(value.into());
            }
        }
    }
    match Cli::try_parse_from(&argv) {
        Ok(Cli {
            command: CliCommand::Sweep(f),
        }) => Ok(f),
        Ok(_) => unreachable!("config files are parsed as sweep flags"),
        Err(e) => Err(CliError::Usage(format!(
            "in {}: {}",
            path.display(),
            e.render()
        ))),
    }
}

/// Fills every flag missing from `cli` with the file's value.
fn merge(cli: Flags, file: Flags) -> Flags {
    macro_rules! pick {
        ($($f:ident),*) => { Flags { $($f: cli.$f.or(file.$f),)* pairs: if cli.pairs.is_empty() { file.pairs } else { cli.pairs }, emit_plot: cli.emit_plot || file.emit_plot } };
    }
    pick!(
        n,
        j,
        delta,
        b,
        theta,
        boundary,
        model,
        kbt,
        b_min,
        b_max,
        b_steps,
        kbt_min,
        kbt_max,
        kbt_steps,
        delta_min,
        delta_max,
        delta_steps,
        theta_min,
        theta_max,
        theta_steps,
        out,
        format,
        threads,
        seed,
        verify,
        strategy,
        plateau_tol,
        min_width,
        zero_tol,
        config
    )
}

fn build(
    command: Command,
    f: Flags,
    which: Vec<String>,
    order: &[SweepParam],
) -> Result<RunConfig, CliError> {
    let defaults = RunConfig::default();
    let d = &defaults.spec;
    let spec = ChainSpec {
        n_sites: f.n.unwrap_or(d.n_sites),
        j: f.j.unwrap_or(d.j),
        delta: f.delta.unwrap_or(d.delta),
        b: f.b.unwrap_or(d.b),
        theta: f.theta.unwrap_or(d.theta),
        boundary: f.boundary.unwrap_or(d.boundary),
        model: f.model.unwrap_or(d.model),
    };

    let ranges = [
        (SweepParam::B, f.b_min, f.b_max, f.b_steps, f.b.is_some()),
        (
            SweepParam::Kt,
            f.kbt_min,
            f.kbt_max,
            f.kbt_steps,
            f.kbt.is_some(),
        ),
        (
            SweepParam::Delta,
            f.delta_min,
            f.delta_max,
            f.delta_steps,
            f.delta.is_some(),
        ),
        (
            SweepParam::Theta,
            f.theta_min,
            f.theta_max,
            f.theta_steps,
            f.theta.is_some(),
        ),
    ];
    let mut axes = Vec::new();
    for (param, min, max, steps, scalar) in ranges {
        if min.is_none() && max.is_none() && steps.is_none() {
            continue;
        }
        if scalar {
            return Err(CliError::Usage(format!(
                "--{param} conflicts with --{param}-min/--{param}-max/--{param}-steps"
            )));
        }
        let def = AxisSpec::default_for(param);
        let ax = AxisSpec {
            param,
            min: min.unwrap_or(def.min),
            max: max.unwrap_or(def.max),
            steps: steps.unwrap_or(def.steps),
        };
        if ax.steps == 0 {
            return Err(CliError::Usage(format!(
                "--{param}-steps must be at least 1"
            )));
        }
        if ax.steps > 1 && !(ax.min < ax.max) {
            return Err(CliError::Usage(format!(
                "--{param}-min must be below --{param}-max"
            )));
        }
        axes.push(ax);
    }
    axes.sort_by_key(|a| {
        order
            .iter()
            .position(|p| *p == a.param)
            .unwrap_or(usize::MAX)
    });
    if axes.len() > 2 {
        let names: Vec<String> = axes.iter().map(|a| format!("--{}-*", a.param)).collect();
        return Err(CliError::Usage(format!(
            "at most 2 varying axes are allowed, got {}: {}",
            axes.len(),
            names.join(", ")
        )));
    }

    let threads = match f.threads {
        Some(t) => t,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|_| {
                CliError::Usage(format!("{THREADS_ENV}=`{v}` is not a thread count"))
            })?,
            _ => 0,
        },
    };

    let figures = expand_figures(&which)?;
    let config = RunConfig {
        command,
        spec,
        kbt: f.kbt.unwrap_or(defaults.kbt),
        axes,
        pairs: if f.pairs.is_empty() {
            defaults.pairs.clone()
        } else {
            f.pairs
        },
        out: f.out,
        format: f.format.unwrap_or_default(),
        emit_plot: f.emit_plot,
        threads,
        seed: f.seed.unwrap_or(defaults.seed),
        verify: f.verify.unwrap_or(0),
        strategy: f.strategy.unwrap_or_default(),
        plateau_tol: f.plateau_tol.unwrap_or(defaults.plateau_tol),
        min_width: f.min_width.unwrap_or(defaults.min_width),
        zero_tol: f.zero_tol.unwrap_or(defaults.zero_tol),
        figures,
    };
    validate(&config)?;
    Ok(config)
}

fn expand_figures(which: &[String]) -> Result<Vec<Figure>, CliError> {
    let mut out = Vec::new();
    for w in which {
        if w.eq_ignore_ascii_case("all") {
            out.extend(Figure::ALL);
        } else {
            out.push(w.parse().map_err(CliError::Usage)?);
        }
    }
    out.dedup();
    Ok(out)
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    match c.command {
        Command::Point | Command::Spectrum if !c.axes.is_empty() => {
            return Err(CliError::Usage(format!(
                "`{}` takes no axis flags; use `sweep`",
                c.command.as_str()
            )))
        }
        Command::Plateaus if c.axes.len() != 1 || c.axes[0].param != SweepParam::B => {
            return Err(CliError::Usage(
                "`plateaus` needs exactly one varying axis, --b-min/--b-max/--b-steps".into(),
            ))
        }
        Command::Sweep if c.emit_plot && c.axes.is_empty() => {
            return Err(CliError::Usage(
                "--emit-plot: nothing to plot without a varying axis".into(),
            ))
        }
        Command::Point | Command::Plateaus | Command::Spectrum if c.emit_plot => {
            return Err(CliError::Usage(format!(
                "--emit-plot is not supported by `{}`",
                c.command.as_str()
            )))
        }
        _ => {}
    }
    if c.emit_plot && c.out.is_none() && c.command != Command::Figures {
        return Err(CliError::Usage(
            "--emit-plot needs --out so the script can reference the data".into(),
        ));
    }
    if !(c.kbt >= 0.0) || !c.kbt.is_finite() {
        return Err(CliError::Usage(format!(
            "--kbt must be non-negative, got {}",
            c.kbt
        )));
    }
    if c.pairs.contains(&0) {
        return Err(CliError::Usage("--pair indices start at 1".into()));
    }
    if c.command != Command::Figures {
        c.spec
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for &p in &c.pairs {
            c.spec
                .pair(p)
                .map_err(|e| CliError::Usage(format!("--pair {p}: {e}")))?;
        }
    }
    Ok(())
}
