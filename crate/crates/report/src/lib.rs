//! Plain-language chart summaries, vector line charts and the PDF report.

pub mod chart;
pub mod error;
pub mod fonts;
pub mod format;
pub mod nlg;
pub mod pdf;

pub use chart::{render_chart, ChartDrawing, ChartInput, ChartStyle, DrawCommand, Trace, TraceRole};
pub use error::{ReportError, Result};
pub use nlg::{generate_summary, NlgSummary, SummaryInput, Templates, PLACEHOLDERS};
pub use pdf::{compose_pdf, compose_pdf_with_layout, page_count, Cell, PageLayout, ReportSpec, DEFAULT_ATTRIBUTION};
