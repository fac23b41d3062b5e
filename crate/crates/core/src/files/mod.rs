//! Persisted formats: configuration files, JSON-lines reports, SVG
//! pictures and complex literals.

pub mod config;
pub mod literal;
pub mod report;
pub mod svg;

pub use config::{config_from_str, config_to_string, read_config, write_config, ConfigFile};
pub use literal::parse_complex;
pub use report::{read_report, Environment, ReportHeader, ReportWriter};
pub use svg::{render_svg, RenderOptions, Zoom};
