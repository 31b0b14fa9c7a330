//! Command-line front end: configuration, CSV/TSV emission, gnuplot scripts
//! and figure replicas.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod run;

pub use config::{parse_config, AxisSpec, Command, Format, RunConfig};
pub use error::CliError;
pub use figures::Figure;
pub use output::{format_g12, write_grid, write_plot_script};
pub use run::execute;
