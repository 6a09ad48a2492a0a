//! Reproduction of the comparison table and eigenfunction figures, plus the
//! invariant suite.

mod figure;
mod report;
mod table;
mod validate;

pub use figure::{build_figure, figure_files, FigureKind, Level, PlotBundle, StateTrace, AMPLITUDE_FRACTION};
pub use report::{emit_report, methods_in, parse_json_report, JsonReport, ReportFormat};
pub use table::{build_table, Flag, Method, MethodEntry, SpectrumRow, TableOptions};
pub use validate::{validate_all, Check, ValidateOptions, ValidationReport};
