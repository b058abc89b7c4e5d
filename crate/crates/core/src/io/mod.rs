//! File formats and human-readable output.

pub mod csv;
pub mod report;
pub mod svg;

pub use self::csv::{parse_csv, read_dataset, write_csv};
pub use report::{build_report, ReportDocument};
pub use svg::render_svg;
