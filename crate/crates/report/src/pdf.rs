//! Multi-page A4 report composition.

use agroweather_core::{AttributeId, GeoPoint, ReferenceKind, SeasonSpec};
use chrono::{DateTime, Datelike, Timelike, Utc};
use pdf_writer::{Content, Date, Finish, Name, Pdf, Rect, Ref, Str, TextStr};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::chart::{ChartDrawing, ChartStyle, Color, DrawCommand, Stroke};
use crate::error::{ReportError, Result};
use crate::fonts::{text_width, win_ansi, wrap};
use crate::format::{long_date, one_decimal, two_decimals};
use crate::nlg::NlgSummary;

pub const MAX_ATTRIBUTES: usize = 18;
pub const CHARTS_PER_PAGE: usize = 6;
pub const DEFAULT_ATTRIBUTION: &str =
    "Weather data: SILO gridded climate data, Queensland Government, licensed under CC BY 4.0.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSpec {
    pub point: GeoPoint,
    pub season: SeasonSpec,
    pub attributes: Vec<AttributeId>,
    #[serde(default)]
    pub comparison: bool,
    /// Draw current minus reference instead of both traces.
    #[serde(default)]
    pub difference: bool,
    #[serde(default)]
    pub reference: ReferenceKind,
    pub generated_at: DateTime<Utc>,
    /// Data-source attribution printed in the header.
    #[serde(default)]
    pub attribution: Option<String>,
}

impl ReportSpec {
    pub fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(ReportError::InvalidSpec("attribute list is empty".into()));
        }
        if self.attributes.len() > MAX_ATTRIBUTES {
            return Err(ReportError::InvalidSpec(format!(
                "{} attributes requested, at most {MAX_ATTRIBUTES} allowed",
                self.attributes.len()
            )));
        }
        let mut seen = HashSet::new();
        for a in &self.attributes {
            if !seen.insert(*a) {
                return Err(ReportError::InvalidSpec(format!("duplicate attribute {}", a.code())));
            }
        }
        if !self.point.is_finite() {
            return Err(ReportError::InvalidSpec("coordinates must be finite".into()));
        }
        self.season
            .validate()
            .map_err(|e| ReportError::InvalidSpec(e.to_string()))
    }

    pub fn page_count(&self) -> usize {
        page_count(self.attributes.len())
    }
}

pub fn page_count(n_charts: usize) -> usize {
    n_charts.div_ceil(CHARTS_PER_PAGE)
}

/// A4 portrait geometry in points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageLayout {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub header_height: f64,
    pub footer_height: f64,
    pub column_gap: f64,
    pub row_gap: f64,
    pub chart_height: f64,
}

impl Default for PageLayout {
    fn default() -> Self {
        Self {
            width: 595.28,
            height: 841.89,
            margin: 15.0 * 72.0 / 25.4,
            header_height: 62.0,
            footer_height: 14.0,
            column_gap: 12.0,
            row_gap: 10.0,
            chart_height: 140.0,
        }
    }
}

/// Position of one chart cell on its page; `x`/`y` is the bottom-left corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub page: usize,
    pub column: usize,
    pub row: usize,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl PageLayout {
    pub fn cell_width(&self) -> f64 {
        (self.width - 2.0 * self.margin - self.column_gap) / 2.0
    }

    pub fn cell_height(&self) -> f64 {
        let grid = self.height - 2.0 * self.margin - self.header_height - self.footer_height;
        (grid - 2.0 * self.row_gap) / 3.0
    }

    /// Chart style sized to fill the chart part of one cell.
    pub fn chart_style(&self, difference_mode: bool) -> ChartStyle {
        ChartStyle {
            width: self.cell_width().floor(),
            height: self.chart_height,
            difference_mode,
            title: None,
        }
    }

    /// Cells for `n` charts: two columns of three, first column filled top
    /// to bottom before the second.
    pub fn cells(&self, n: usize) -> Vec<Cell> {
        let (w, h) = (self.cell_width(), self.cell_height());
        let grid_top = self.height - self.margin - self.header_height;
        (0..n)
            .map(|index| {
                let slot = index % CHARTS_PER_PAGE;
                let (column, row) = (slot / 3, slot % 3);
                Cell {
                    index,
                    page: index / CHARTS_PER_PAGE,
                    column,
                    row,
                    x: self.margin + column as f64 * (w + self.column_gap),
                    y: grid_top - (row + 1) as f64 * h - row as f64 * self.row_gap,
                    width: w,
                    height: h,
                }
            })
            .collect()
    }
}

const SUMMARY_SIZES: [f64; 5] = [7.0, 6.5, 6.0, 5.5, 5.0];

/// Writes the report. `charts` and `summaries` must run parallel to
/// `spec.attributes`.
pub fn compose_pdf(spec: &ReportSpec, charts: &[ChartDrawing], summaries: &[NlgSummary]) -> Result<Vec<u8>> {
    compose_pdf_with_layout(spec, charts, summaries, &PageLayout::default())
}

pub fn compose_pdf_with_layout(
    spec: &ReportSpec,
    charts: &[ChartDrawing],
    summaries: &[NlgSummary],
    layout: &PageLayout,
) -> Result<Vec<u8>> {
    spec.validate()?;
    let n = spec.attributes.len();
    if charts.len() != n || summaries.len() != n {
        return Err(ReportError::InvalidSpec(format!(
            "{n} attributes but {} charts and {} summaries",
            charts.len(),
            summaries.len()
        )));
    }
    for (a, s) in spec.attributes.iter().zip(summaries) {
        if *a != s.attribute {
            return Err(ReportError::InvalidSpec(format!(
                "summary for {} found where {} was expected",
                s.attribute.code(),
                a.code()
            )));
        }
    }
    let cells = layout.cells(n);
    let pages = page_count(n);
    let mut contents: Vec<Content> = (0..pages).map(|_| Content::new()).collect();
    for (page, content) in contents.iter_mut().enumerate() {
        let mut w = Writer { content, layout };
        w.header(spec)?;
        w.footer(page + 1, pages)?;
    }
    for ((cell, chart), summary) in cells.iter().zip(charts).zip(summaries) {
        let mut w = Writer { content: &mut contents[cell.page], layout };
        w.cell(cell, chart, summary, spec.attributes[cell.index])?;
    }

    let mut pdf = Pdf::new();
    pdf.set_version(1, 4);
    let catalog_id = Ref::new(1);
    let tree_id = Ref::new(2);
    let font_id = Ref::new(3);
    let info_id = Ref::new(4);
    let page_ids: Vec<Ref> = (0..pages).map(|i| Ref::new(5 + 2 * i as i32)).collect();

    pdf.catalog(catalog_id).pages(tree_id);
    pdf.pages(tree_id).kids(page_ids.iter().copied()).count(pages as i32);
    let media = Rect::new(0.0, 0.0, layout.width as f32, layout.height as f32);
    for (i, content) in contents.into_iter().enumerate() {
        let content_id = Ref::new(page_ids[i].get() + 1);
        let mut page = pdf.page(page_ids[i]);
        page.media_box(media).parent(tree_id).contents(content_id);
        page.resources().fonts().pair(Name(b"F1"), font_id);
        page.finish();
        pdf.stream(content_id, &content.finish());
    }
    pdf.type1_font(font_id)
        .base_font(Name(b"Helvetica"))
        .encoding_predefined(Name(b"WinAnsiEncoding"));
    let t = spec.generated_at;
    pdf.document_info(info_id)
        .title(TextStr("Agro-climatic weather report"))
        .producer(TextStr("agroweather"))
        .creation_date(
            Date::new(t.year().clamp(0, 9999) as u16)
                .month(t.month() as u8)
                .day(t.day() as u8)
                .hour(t.hour() as u8)
                .minute(t.minute() as u8)
                .second(t.second().min(59) as u8)
                .utc_offset_hour(0)
                .utc_offset_minute(0),
        );
    Ok(pdf.finish())
}

struct Writer<'a> {
    content: &'a mut Content,
    layout: &'a PageLayout,
}

impl Writer<'_> {
    fn check(&self, what: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> Result<()> {
        let l = self.layout;
        let ok = [x0, y0, x1, y1].iter().all(|v| v.is_finite())
            && x0 >= 0.0
            && y0 >= 0.0
            && x1 <= l.width
            && y1 <= l.height;
        if ok {
            Ok(())
        } else {
            Err(ReportError::Layout(format!(
                "{what} spans ({x0:.1}, {y0:.1})-({x1:.1}, {y1:.1}) outside the page"
            )))
        }
    }

    fn text(&mut self, x: f64, y: f64, size: f64, color: Color, text: &str) -> Result<()> {
        self.check("text", x, y - size * 0.25, x + text_width(text, size), y + size * 0.75)?;
        let bytes = win_ansi(text);
        self.content
            .begin_text()
            .set_font(Name(b"F1"), size as f32)
            .set_fill_rgb(color.0, color.1, color.2)
            .next_line(x as f32, y as f32)
            .show(Str(&bytes))
            .end_text();
        Ok(())
    }

    fn stroke_style(&mut self, s: &Stroke) {
        self.content
            .set_stroke_rgb(s.color.0, s.color.1, s.color.2)
            .set_line_width(s.width as f32);
        match s.dash {
            Some([on, off]) => self.content.set_dash_pattern([on as f32, off as f32], 0.0),
            None => self.content.set_dash_pattern([], 0.0),
        };
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &Stroke) -> Result<()> {
        let Some(&(x0, y0)) = points.first() else {
            return Ok(());
        };
        for &(x, y) in points {
            self.check("line", x, y, x, y)?;
        }
        self.stroke_style(stroke);
        self.content.move_to(x0 as f32, y0 as f32);
        for &(x, y) in &points[1..] {
            self.content.line_to(x as f32, y as f32);
        }
        self.content.stroke();
        Ok(())
    }

    fn header(&mut self, spec: &ReportSpec) -> Result<()> {
        let l = *self.layout;
        let left = l.margin;
        let top = l.height - l.margin;
        let width = l.width - 2.0 * l.margin;
        self.text(left, top - 14.0, 14.0, Color::TEXT, "Agro-climatic weather report")?;
        let mut line2 = format!(
            "Location: {}, {}    Day-zero: {}    Season: {} days, base {} °C",
            two_decimals(spec.point.latitude),
            two_decimals(spec.point.longitude),
            long_date(spec.season.day_zero),
            spec.season.length_days,
            one_decimal(spec.season.t_base),
        );
        if spec.comparison {
            line2.push_str(&format!("    Compared with: {}", spec.reference.describe()));
        }
        self.text(left, top - 27.0, 8.0, Color::TEXT, &crate::chart::truncate(&line2, 8.0, width))?;
        let generated = format!("Generated: {}", spec.generated_at.format("%Y-%m-%d %H:%M:%S UTC"));
        self.text(left, top - 38.0, 8.0, Color::TEXT, &generated)?;
        let attribution = spec.attribution.as_deref().unwrap_or(DEFAULT_ATTRIBUTION);
        let lines = wrap(attribution, 6.5, width);
        if lines.len() > 2 {
            return Err(ReportError::Layout("attribution text does not fit the header".into()));
        }
        for (i, line) in lines.iter().enumerate() {
            self.text(left, top - 48.0 - 7.5 * i as f64, 6.5, Color::AXIS, line)?;
        }
        let rule = top - l.header_height + 4.0;
        self.polyline(
            &[(left, rule), (l.width - l.margin, rule)],
            &Stroke { color: Color::AXIS, width: 0.5, dash: None },
        )
    }

    fn footer(&mut self, page: usize, pages: usize) -> Result<()> {
        let l = *self.layout;
        let label = format!("Page {page} of {pages}");
        let x = l.width - l.margin - text_width(&label, 7.0);
        self.text(x, l.margin + 2.0, 7.0, Color::AXIS, &label)
    }

    fn cell(&mut self, cell: &Cell, chart: &ChartDrawing, summary: &NlgSummary, attribute: AttributeId) -> Result<()> {
        if chart.width > cell.width + 1e-9 || chart.height > cell.height + 1e-9 {
            return Err(ReportError::Layout(format!(
                "chart for {} is {:.1}x{:.1} but the cell is {:.1}x{:.1}",
                attribute.code(),
                chart.width,
                chart.height,
                cell.width,
                cell.height
            )));
        }
        let (bx0, by0, bx1, by1) = chart.geometry_bounds();
        if bx0 < 0.0 || by0 < 0.0 || bx1 > chart.width || by1 > chart.height {
            return Err(ReportError::Layout(format!(
                "chart for {} draws outside its own {:.1}x{:.1} box",
                attribute.code(),
                chart.width,
                chart.height
            )));
        }

        let ox = cell.x;
        let oy = cell.y + cell.height - chart.height;
        for cmd in &chart.commands {
            match cmd {
                DrawCommand::Polyline { points, stroke } => {
                    let pts: Vec<_> = points.iter().map(|&(x, y)| (x + ox, y + oy)).collect();
                    self.polyline(&pts, stroke)?;
                }
                DrawCommand::Rect { x, y, width, height, stroke } => {
                    self.check("rect", x + ox, y + oy, x + ox + width, y + oy + height)?;
                    self.stroke_style(stroke);
                    self.content
                        .rect((x + ox) as f32, (y + oy) as f32, *width as f32, *height as f32)
                        .stroke();
                }
                DrawCommand::Text { x, y, size, text, color } => {
                    self.text(x + ox, y + oy, *size, *color, text)?;
                }
            }
        }

        let text_top = oy - 4.0;
        let available = text_top - cell.y;
        let body = summary.text();
        for size in SUMMARY_SIZES {
            let leading = size * 1.2;
            let lines = wrap(&body, size, cell.width);
            if lines.len() as f64 * leading <= available {
                for (i, line) in lines.iter().enumerate() {
                    self.text(cell.x, text_top - size - leading * i as f64, size, Color::TEXT, line)?;
                }
                return Ok(());
            }
        }
        Err(ReportError::Layout(format!(
            "summary for {} does not fit beneath its chart",
            attribute.code()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn page_count_law() {
        assert_eq!(page_count(1), 1);
        assert_eq!(page_count(6), 1);
        assert_eq!(page_count(7), 2);
        assert_eq!(page_count(18), 3);
    }

    #[test]
    fn cells_fill_column_major() {
        let l = PageLayout::default();
        let cells = l.cells(7);
        let order: Vec<_> = cells.iter().map(|c| (c.page, c.column, c.row)).collect();
        assert_eq!(
            order,
            vec![(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0), (0, 1, 1), (0, 1, 2), (1, 0, 0)]
        );
        assert!(cells[0].y > cells[1].y && cells[1].y > cells[2].y);
        assert!(cells[3].x > cells[0].x);
        assert_eq!(cells[6].x, cells[0].x);
        assert_eq!(cells[6].y, cells[0].y);
    }

    #[test]
    fn cells_inside_margins() {
        let l = PageLayout::default();
        for c in l.cells(6) {
            assert!(c.x >= l.margin - 1e-9);
            assert!(c.y >= l.margin + l.footer_height - 1e-9);
            assert!(c.x + c.width <= l.width - l.margin + 1e-9);
            assert!(c.y + c.height <= l.height - l.margin - l.header_height + 1e-9);
        }
        assert!(l.chart_style(false).width <= l.cell_width());
        assert!(l.chart_height < l.cell_height());
    }
}
