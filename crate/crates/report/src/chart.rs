//! Resolution-independent line charts, expressed as drawing commands in a
//! chart-local coordinate space (points, origin bottom-left, y up).

use agroweather_core::{ComparisonResult, DerivedSeries};
use serde::Serialize;

use crate::error::{ReportError, Result};
use crate::fonts::text_width;
use crate::format::one_decimal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Color(pub f32, pub f32, pub f32);

impl Color {
    pub const AXIS: Color = Color(0.35, 0.35, 0.35);
    pub const TEXT: Color = Color(0.1, 0.1, 0.1);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stroke {
    pub color: Color,
    pub width: f64,
    /// On/off dash lengths; solid when absent.
    pub dash: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DrawCommand {
    Polyline { points: Vec<(f64, f64)>, stroke: Stroke },
    Rect { x: f64, y: f64, width: f64, height: f64, stroke: Stroke },
    /// Text with its left baseline at (x, y).
    Text { x: f64, y: f64, size: f64, text: String, color: Color },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceRole {
    Current,
    Reference,
    Difference,
}

impl TraceRole {
    fn stroke(self) -> Stroke {
        match self {
            TraceRole::Current => Stroke { color: Color(0.12, 0.39, 0.71), width: 1.0, dash: None },
            TraceRole::Reference => Stroke { color: Color(0.90, 0.49, 0.13), width: 1.0, dash: Some([3.0, 2.0]) },
            TraceRole::Difference => Stroke { color: Color(0.17, 0.55, 0.24), width: 1.0, dash: None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub role: TraceRole,
    pub label: String,
    /// Unbroken runs of points; missing days split a trace.
    pub segments: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartStyle {
    pub width: f64,
    pub height: f64,
    pub difference_mode: bool,
    /// Defaults to the attribute's display name and unit.
    pub title: Option<String>,
}

impl Default for ChartStyle {
    fn default() -> Self {
        Self {
            width: 248.0,
            height: 140.0,
            difference_mode: false,
            title: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ChartInput<'a> {
    Series(&'a DerivedSeries),
    Comparison(&'a ComparisonResult),
}

impl<'a> ChartInput<'a> {
    fn primary(&self) -> &'a DerivedSeries {
        match self {
            ChartInput::Series(s) => s,
            ChartInput::Comparison(c) => &c.current,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Area {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn top(&self) -> f64 {
        self.y + self.height
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartDrawing {
    pub width: f64,
    pub height: f64,
    pub plot: Area,
    pub x_domain: (f64, f64),
    pub y_domain: (f64, f64),
    pub traces: Vec<Trace>,
    pub commands: Vec<DrawCommand>,
}

impl ChartDrawing {
    pub fn x_of(&self, index: f64) -> f64 {
        let (lo, hi) = self.x_domain;
        self.plot.x + (index - lo) / (hi - lo) * self.plot.width
    }

    pub fn y_of(&self, value: f64) -> f64 {
        let (lo, hi) = self.y_domain;
        self.plot.y + (value - lo) / (hi - lo) * self.plot.height
    }

    /// Bounding box of all geometry as (min_x, min_y, max_x, max_y).
    pub fn geometry_bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |x: f64, y: f64| {
            b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
        };
        for c in &self.commands {
            match c {
                DrawCommand::Polyline { points, .. } => points.iter().for_each(|&(x, y)| add(x, y)),
                DrawCommand::Rect { x, y, width, height, .. } => {
                    add(*x, *y);
                    add(x + width, y + height);
                }
                DrawCommand::Text { x, y, size, text, .. } => {
                    // descenders reach roughly a quarter em below the baseline
                    add(*x, y - size * 0.25);
                    add(x + text_width(text, *size), y + size * 0.75);
                }
            }
        }
        b
    }
}

const TITLE_SIZE: f64 = 8.0;
const LABEL_SIZE: f64 = 5.5;

/// Lays out a line chart for a single series or a comparison. Comparisons
/// draw current and reference traces, or only their difference when
/// `style.difference_mode` is set.
pub fn render_chart(input: ChartInput<'_>, style: &ChartStyle) -> Result<ChartDrawing> {
    let primary = input.primary();
    if primary.is_empty() {
        return Err(ReportError::EmptySeries);
    }
    let sources: Vec<(TraceRole, String, &DerivedSeries)> = match input {
        ChartInput::Series(s) => vec![(TraceRole::Current, "Current season".into(), s)],
        ChartInput::Comparison(c) if style.difference_mode => vec![(
            TraceRole::Difference,
            format!("Current minus {}", c.reference_kind.describe()),
            &c.difference,
        )],
        ChartInput::Comparison(c) => vec![
            (TraceRole::Current, "Current season".into(), &c.current),
            (TraceRole::Reference, capitalize(&c.reference_kind.describe()), &c.reference),
        ],
    };

    let n = primary.len();
    let x_domain = (0.0, (n.max(2) - 1) as f64);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in sources.iter().flat_map(|s| s.2.values.iter().flatten()) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if style.difference_mode && matches!(input, ChartInput::Comparison(_)) {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    let y_domain = if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    };

    let plot = Area {
        x: 32.0,
        y: 20.0,
        width: style.width - 32.0 - 6.0,
        height: style.height - 20.0 - 26.0,
    };
    if plot.width <= 0.0 || plot.height <= 0.0 {
        return Err(ReportError::Layout(format!(
            "chart size {}x{} leaves no room to plot",
            style.width, style.height
        )));
    }
    let mut drawing = ChartDrawing {
        width: style.width,
        height: style.height,
        plot,
        x_domain,
        y_domain,
        traces: Vec::new(),
        commands: Vec::new(),
    };

    let title = style
        .title
        .clone()
        .unwrap_or_else(|| format!("{} ({})", primary.attribute.display_name(), primary.unit));
    drawing.commands.push(text(plot.x, style.height - 9.0, TITLE_SIZE, &truncate(&title, TITLE_SIZE, style.width - plot.x - 2.0)));

    let axis = Stroke { color: Color::AXIS, width: 0.5, dash: None };
    drawing.commands.push(DrawCommand::Rect {
        x: plot.x,
        y: plot.y,
        width: plot.width,
        height: plot.height,
        stroke: axis,
    });

    for value in [y_domain.0, (y_domain.0 + y_domain.1) / 2.0, y_domain.1] {
        let label = one_decimal(value);
        let y = drawing.y_of(value);
        drawing.commands.push(DrawCommand::Polyline { points: vec![(plot.x - 2.0, y), (plot.x, y)], stroke: axis });
        let x = (plot.x - 3.0 - text_width(&label, LABEL_SIZE)).max(0.0);
        drawing.commands.push(text(x, y - LABEL_SIZE * 0.35, LABEL_SIZE, &label));
    }
    drawing.commands.push(text(1.0, plot.top() - 14.0, LABEL_SIZE, &truncate(&primary.unit, LABEL_SIZE, plot.x - 4.0)));

    let last = n.saturating_sub(1);
    let mut x_ticks = vec![0, last / 2, last];
    x_ticks.dedup();
    for index in x_ticks {
        let label = index.to_string();
        let x = drawing.x_of(index as f64);
        drawing.commands.push(DrawCommand::Polyline { points: vec![(x, plot.y - 2.0), (x, plot.y)], stroke: axis });
        let w = text_width(&label, LABEL_SIZE);
        let left = (x - w / 2.0).clamp(0.0, style.width - w);
        drawing.commands.push(text(left, plot.y - 8.0, LABEL_SIZE, &label));
    }
    let caption = "Days from day-zero";
    let cw = text_width(caption, LABEL_SIZE);
    drawing.commands.push(text(plot.x + (plot.width - cw) / 2.0, 3.0, LABEL_SIZE, caption));

    if style.difference_mode && matches!(input, ChartInput::Comparison(_)) {
        let y = drawing.y_of(0.0);
        drawing.commands.push(DrawCommand::Polyline {
            points: vec![(plot.x, y), (plot.right(), y)],
            stroke: Stroke { color: Color::AXIS, width: 0.4, dash: Some([1.5, 1.5]) },
        });
    }

    let mut legend_x = plot.x;
    let legend_y = style.height - 19.0;
    for (role, label, series) in sources {
        let stroke = role.stroke();
        let segments = segments(&drawing, series);
        for seg in &segments {
            drawing.commands.push(DrawCommand::Polyline { points: seg.clone(), stroke });
        }
        drawing.commands.push(DrawCommand::Polyline {
            points: vec![(legend_x, legend_y + 2.0), (legend_x + 10.0, legend_y + 2.0)],
            stroke,
        });
        let label = truncate(&label, LABEL_SIZE, style.width - legend_x - 14.0);
        drawing.commands.push(text(legend_x + 13.0, legend_y, LABEL_SIZE, &label));
        legend_x += 13.0 + text_width(&label, LABEL_SIZE) + 8.0;
        drawing.traces.push(Trace { role, label, segments });
    }

    Ok(drawing)
}

fn segments(drawing: &ChartDrawing, series: &DerivedSeries) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for (i, v) in series.values.iter().enumerate() {
        match v {
            Some(v) => current.push((drawing.x_of(i as f64), drawing.y_of(*v))),
            None if !current.is_empty() => out.push(std::mem::take(&mut current)),
            None => {}
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    // isolated days get a short tick so they stay visible
    for seg in &mut out {
        if let [(x, y)] = seg[..] {
            let half = 0.75;
            *seg = vec![
                ((x - half).max(drawing.plot.x), y),
                ((x + half).min(drawing.plot.right()), y),
            ];
        }
    }
    out
}

fn text(x: f64, y: f64, size: f64, s: &str) -> DrawCommand {
    DrawCommand::Text { x, y, size, text: s.to_string(), color: Color::TEXT }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

pub(crate) fn truncate(s: &str, size: f64, max_width: f64) -> String {
    if text_width(s, size) <= max_width {
        return s.to_string();
    }
    let mut out = String::new();
    for ch in s.chars() {
        let candidate = format!("{out}{ch}…");
        if text_width(&candidate, size) > max_width {
            break;
        }
        out.push(ch);
    }
    format!("{out}…")
}
