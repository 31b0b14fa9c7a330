//! Delimited-text tables and gnuplot scripts.

use std::io::{self, Write};

use dimerspin::{SweepGrid, SweepParam};

use crate::config::Format;
use crate::error::CliError;

pub const GRID_HEADER: [&str; 13] = [
    "n",
    "boundary",
    "model",
    "delta",
    "theta",
    "j",
    "kbt",
    "b",
    "pair_index",
    "site_a",
    "site_b",
    "pair_kind",
    "concurrence",
];

/// `x` with 12 significant digits, formatted like C's `%.12g`.
pub fn format_g12(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        trim_zeros(format!("{:.*}", (P - 1 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

/// One row per grid point per tracked pair, grid points in axis order.
pub fn write_grid<W: Write>(grid: &SweepGrid, format: Format, mut w: W) -> io::Result<()> {
    let sep = format.separator();
    let mut line = String::new();
    writeln!(w, "{}", GRID_HEADER.join(&sep.to_string()))?;
    for p in 0..grid.n_points() {
        let point = grid.point(p);
        let s = &point.spec;
        for (slot, pair) in grid.pairs.iter().enumerate() {
            line.clear();
            let fields = [
                s.n_sites.to_string(),
                s.boundary.to_string(),
                s.model.to_string(),
                format_g12(s.delta),
                format_g12(s.theta),
                format_g12(s.j),
                format_g12(point.kt),
                format_g12(s.b),
                pair.index.to_string(),
                pair.site_a.to_string(),
                pair.site_b.to_string(),
                pair.kind.to_string(),
                format_g12(grid.concurrence(p, slot)),
            ];
            for (k, f) in fields.iter().enumerate() {
                if k > 0 {
                    line.push(sep);
                }
                line.push_str(f);
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
    }
    w.flush()
}

fn column(param: SweepParam) -> usize {
    match param {
        SweepParam::Delta => 4,
        SweepParam::Theta => 5,
        SweepParam::Kt => 7,
        SweepParam::B => 8,
    }
}

fn label(param: SweepParam) -> &'static str {
    match param {
        SweepParam::B => "B",
        SweepParam::Kt => "k_BT",
        SweepParam::Delta => "δ",
        SweepParam::Theta => "θ",
    }
}

/// Gnuplot script rendering `data_file` (a table from [`write_grid`]): one
/// curve per pair for a 1-D grid, one surface per pair for a 2-D grid.
pub fn write_plot_script<W: Write>(
    grid: &SweepGrid,
    data_file: &str,
    format: Format,
    mut w: W,
) -> Result<(), CliError> {
    let axes = &grid.axes;
    if axes.is_empty() {
        return Err(CliError::Usage(
            "nothing to plot: the grid has no varying axis".into(),
        ));
    }
    let sep = match format {
        Format::Csv => ",",
        Format::Tsv => "\\t",
    };
    let s = &grid.template;
    let mut out = String::new();
    out.push_str(&format!(
        "# {data_file}: N={} {} {} chain\n",
        s.n_sites, s.boundary, s.model
    ));
    out.push_str("set encoding utf8\n");
    out.push_str(&format!("set datafile separator \"{sep}\"\n"));
    out.push_str("set grid\n");
    let x = axes[0].param;
    out.push_str(&format!("set xlabel \"{}\"\n", label(x)));
    let multi = grid.pairs.len() > 1;
    match axes.get(1) {
        None => {
            out.push_str("set ylabel \"C\"\nset yrange [0:1.05]\n");
            if multi {
                out.push_str(&format!("set multiplot layout {},1\n", grid.pairs.len()));
            }
            for pair in &grid.pairs {
                out.push_str(&format!(
                    "set title \"pair {} ({}, sites {}-{})\"\n",
                    pair.index, pair.kind, pair.site_a, pair.site_b
                ));
                out.push_str(&format!(
                    "plot \"{data_file}\" skip 1 using {}:(${} == {} ? $13 : 1/0) with linespoints pointtype 7 pointsize 0.4 notitle\n",
                    column(x),
                    9,
                    pair.index
                ));
            }
        }
        Some(y) => {
            let y = y.param;
            out.push_str(&format!("set ylabel \"{}\"\nset zlabel \"C\"\n", label(y)));
            out.push_str("set zrange [0:1.05]\nset view 60,30\nset palette rgbformulae 33,13,10\n");
            if multi {
                out.push_str(&format!("set multiplot layout {},1\n", grid.pairs.len()));
            }
            for pair in &grid.pairs {
                out.push_str(&format!(
                    "set title \"pair {} ({}, sites {}-{})\"\n",
                    pair.index, pair.kind, pair.site_a, pair.site_b
                ));
                out.push_str(&format!(
                    "splot \"{data_file}\" skip 1 using {}:{}:($9 == {} ? $13 : 1/0) with points pointtype 7 pointsize 0.5 palette notitle\n",
                    column(x),
                    column(y),
                    pair.index
                ));
            }
        }
    }
    if multi {
        out.push_str("unset multiplot\n");
    }
    w.write_all(out.as_bytes())?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_printf() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.1, "0.1"),
            (0.2, "0.2"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1.5e-300, "1.5e-300"),
            (-2.5, "-2.5"),
            (0.8661702459123456, "0.866170245912"),
            (999999999999.5, "1e+12"),
            (std::f64::consts::PI / 4.0, "0.785398163397"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g12(x), s, "{x:e}");
        }
    }
}
