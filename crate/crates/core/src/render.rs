//! Deterministic ASCII and SVG depictions of Newton polygons.
//!
//! All geometry is transformed in exact rational arithmetic; pixel
//! coordinates are quantized to exactly three decimals (round half to even)
//! at the very last step. Rendering the same spec twice therefore yields
//! byte-identical output on every platform.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{BigInt, BigRational, Prime};
use crate::polygon::{LowerBoundRegion, NewtonPolygon, Vertex};

/// Stroke style of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
    Bold,
}

impl LineStyle {
    fn name(self) -> &'static str {
        match self {
            LineStyle::Solid => "solid",
            LineStyle::Dashed => "dashed",
            LineStyle::Bold => "bold",
        }
    }
}

/// One polygon or region boundary to draw.
#[derive(Debug, Clone)]
pub struct Layer {
    pub label: String,
    pub style: LineStyle,
    vertices: Vec<Vertex>,
}

impl Layer {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
}

/// What to draw: layers plus axis/size configuration.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    layers: Vec<Layer>,
    prime: Option<Prime>,
    svg_width: u32,
    svg_height: u32,
    ascii_cols: usize,
    ascii_rows: usize,
    x_ticks: Option<Vec<i64>>,
    y_ticks: Option<Vec<i64>>,
}

/// Rejections raised while assembling or rendering a plot.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("nothing to render: the plot has no layers")]
    EmptySpec,
    #[error("prime mismatch: plot renders {plot}, layer uses {layer}")]
    PrimeMismatch { plot: Prime, layer: Prime },
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self::new()
    }
}

impl PlotSpec {
    pub fn new() -> Self {
        PlotSpec {
            layers: Vec::new(),
            prime: None,
            svg_width: 480,
            svg_height: 360,
            ascii_cols: 72,
            ascii_rows: 24,
            x_ticks: None,
            y_ticks: None,
        }
    }

    pub fn set_svg_size(&mut self, width: u32, height: u32) -> &mut Self {
        self.svg_width = width.max(64);
        self.svg_height = height.max(64);
        self
    }

    pub fn set_ascii_size(&mut self, cols: usize, rows: usize) -> &mut Self {
        self.ascii_cols = cols.max(16);
        self.ascii_rows = rows.max(8);
        self
    }

    /// Overrides the automatic ticks; positions outside the data span are
    /// dropped at render time.
    pub fn set_ticks(&mut self, x: Vec<i64>, y: Vec<i64>) -> &mut Self {
        self.x_ticks = Some(x);
        self.y_ticks = Some(y);
        self
    }

    /// Adds a polygon layer; all polygon layers must share one prime.
    pub fn add_polygon(
        &mut self,
        polygon: &NewtonPolygon,
        style: LineStyle,
        label: impl Into<String>,
    ) -> Result<&mut Self, RenderError> {
        match &self.prime {
            Some(p) if p != polygon.prime() => {
                return Err(RenderError::PrimeMismatch {
                    plot: p.clone(),
                    layer: polygon.prime().clone(),
                })
            }
            _ => self.prime = Some(polygon.prime().clone()),
        }
        self.layers.push(Layer {
            label: label.into(),
            style,
            vertices: polygon.vertices().to_vec(),
        });
        Ok(self)
    }

    /// Adds a prime-agnostic region layer.
    pub fn add_region(
        &mut self,
        region: &LowerBoundRegion,
        style: LineStyle,
        label: impl Into<String>,
    ) -> &mut Self {
        self.layers.push(Layer {
            label: label.into(),
            style,
            vertices: region.vertices().to_vec(),
        });
        self
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn prime(&self) -> Option<&Prime> {
        self.prime.as_ref()
    }

    fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.layers.iter().flat_map(|l| l.vertices.iter());
        let first = it.next()?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.x, first.x, first.y, first.y);
        for v in it {
            x0 = x0.min(v.x);
            x1 = x1.max(v.x);
            y0 = y0.min(v.y);
            y1 = y1.max(v.y);
        }
        // degenerate spans get a unit of breathing room
        if x0 == x1 {
            x0 -= 1;
            x1 += 1;
        }
        if y0 == y1 {
            y0 -= 1;
            y1 += 1;
        }
        Some((x0, x1, y0, y1))
    }

    fn ticks_in(&self, lo: i64, hi: i64, vertical: bool) -> Vec<i64> {
        let explicit = if vertical { &self.y_ticks } else { &self.x_ticks };
        match explicit {
            Some(ts) => {
                let mut ts: Vec<i64> = ts.iter().copied().filter(|t| (lo..=hi).contains(t)).collect();
                ts.sort_unstable();
                ts.dedup();
                ts
            }
            None => {
                // every integer when the span is small, else ~8 even steps
                let span = hi - lo;
                let step = (span / 8).max(1);
                (lo..=hi).step_by(step as usize).collect()
            }
        }
    }
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats with exactly three decimals, rounding half to even.
fn fmt3(q: &BigRational) -> String {
    let scaled = q * rational(1000);
    let floor = scaled.floor().to_integer();
    let fraction = &scaled - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let milli: BigInt = match fraction.cmp(&half) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    };
    let sign = if milli.is_negative() { "-" } else { "" };
    let abs = milli.abs();
    let (int, rem) = abs.div_rem(&BigInt::from(1000));
    format!("{sign}{int}.{:03}", rem.to_u64().expect("remainder below 1000"))
}

/// Rounds a rational to the nearest integer, half to even.
fn round_to_i64(q: &BigRational) -> i64 {
    let floor = q.floor().to_integer();
    let fraction = q - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rounded = match fraction.cmp(&half) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    };
    rounded.to_i64().expect("grid coordinates are small")
}

struct SvgFrame {
    width: u32,
    height: u32,
    x_min: i64,
    y_min: i64,
    sx: BigRational,
    sy: BigRational,
    margin_left: i64,
    margin_bottom: i64,
}

impl SvgFrame {
    fn new(width: u32, height: u32, bounds: (i64, i64, i64, i64)) -> Self {
        let (x0, x1, y0, y1) = bounds;
        let (ml, mr, mt, mb) = (48i64, 16i64, 20i64, 36i64);
        let sx = BigRational::new(
            BigInt::from(width as i64 - ml - mr),
            BigInt::from(x1 - x0),
        );
        let sy = BigRational::new(
            BigInt::from(height as i64 - mt - mb),
            BigInt::from(y1 - y0),
        );
        SvgFrame {
            width,
            height,
            x_min: x0,
            y_min: y0,
            sx,
            sy,
            margin_left: ml,
            margin_bottom: mb,
        }
    }

    fn x(&self, x: i64) -> BigRational {
        rational(self.margin_left) + rational(x - self.x_min) * &self.sx
    }

    fn y(&self, y: i64) -> BigRational {
        rational(self.height as i64 - self.margin_bottom) - rational(y - self.y_min) * &self.sy
    }
}

/// Escapes the handful of XML-significant characters in labels.
fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders the spec as standalone SVG 1.1 text.
pub fn render_svg(spec: &PlotSpec) -> Result<String, RenderError> {
    let bounds = spec.bounds().ok_or(RenderError::EmptySpec)?;
    let frame = SvgFrame::new(spec.svg_width, spec.svg_height, bounds);
    let (x0, x1, y0, y1) = bounds;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="11">"##,
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="white"/>"##);

    // axes along the left and bottom edges of the data window
    let axis_y = frame.y(y0);
    let axis_x = frame.x(x0);
    let _ = writeln!(
        svg,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#777" stroke-width="1"/>"##,
        fmt3(&(frame.x(x0) - rational(6))),
        fmt3(&axis_y),
        fmt3(&(frame.x(x1) + rational(6))),
        fmt3(&axis_y),
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#777" stroke-width="1"/>"##,
        fmt3(&axis_x),
        fmt3(&(frame.y(y1) - rational(6))),
        fmt3(&axis_x),
        fmt3(&(frame.y(y0) + rational(6))),
    );
    for t in spec.ticks_in(x0, x1, false) {
        let tx = frame.x(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}" stroke="#777" stroke-width="1"/>"##,
            x = fmt3(&tx),
            y1 = fmt3(&axis_y),
            y2 = fmt3(&(&axis_y + rational(4))),
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{y}" text-anchor="middle" fill="#444">{t}</text>"##,
            x = fmt3(&tx),
            y = fmt3(&(&axis_y + rational(16))),
        );
    }
    for t in spec.ticks_in(y0, y1, true) {
        let ty = frame.y(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#777" stroke-width="1"/>"##,
            x1 = fmt3(&(&axis_x - rational(4))),
            x2 = fmt3(&axis_x),
            y = fmt3(&ty),
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{y}" text-anchor="end" fill="#444">{t}</text>"##,
            x = fmt3(&(&axis_x - rational(8))),
            y = fmt3(&(&ty + rational(4))),
        );
    }

    for layer in &spec.layers {
        let (stroke_width, dash) = match layer.style {
            LineStyle::Solid => ("1.5", ""),
            LineStyle::Dashed => ("1.5", r##" stroke-dasharray="6 4""##),
            LineStyle::Bold => ("3", ""),
        };
        if layer.vertices.len() >= 2 {
            let points: Vec<String> = layer
                .vertices
                .iter()
                .map(|v| format!("{},{}", fmt3(&frame.x(v.x)), fmt3(&frame.y(v.y))))
                .collect();
            let _ = writeln!(
                svg,
                r##"<polyline fill="none" stroke="black" stroke-width="{stroke_width}"{dash} points="{}"/>"##,
                points.join(" ")
            );
        }
        for v in &layer.vertices {
            let _ = writeln!(
                svg,
                r##"<circle cx="{}" cy="{}" r="3" fill="black"/>"##,
                fmt3(&frame.x(v.x)),
                fmt3(&frame.y(v.y)),
            );
        }
        for w in layer.vertices.windows(2) {
            let slope = BigRational::new(BigInt::from(w[1].y - w[0].y), BigInt::from(w[1].x - w[0].x));
            let mid_x = (frame.x(w[0].x) + frame.x(w[1].x)) / rational(2);
            let mid_y = (frame.y(w[0].y) + frame.y(w[1].y)) / rational(2) - rational(5);
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" text-anchor="middle" fill="#222">{}</text>"##,
                fmt3(&mid_x),
                fmt3(&mid_y),
                xml_escape(&slope.to_string()),
            );
        }
    }

    // legend, top left, one line per layer
    for (i, layer) in spec.layers.iter().enumerate() {
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" fill="#222">{} ({})</text>"##,
            fmt3(&rational(frame.margin_left + 6)),
            fmt3(&rational(14 + 13 * i as i64)),
            xml_escape(&layer.label),
            layer.style.name(),
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders the spec as a fixed-width character grid.
///
/// Vertices are `*`; segments use `/`, `\`, `-` and `_` approximations.
/// Dashed layers draw every other column, bold layers double-strike.
pub fn render_ascii(spec: &PlotSpec) -> Result<String, RenderError> {
    let (x0, x1, y0, y1) = spec.bounds().ok_or(RenderError::EmptySpec)?;
    let cols = spec.ascii_cols;
    let rows = spec.ascii_rows;
    let mut grid = vec![vec![' '; cols]; rows];

    let span_x = rational(x1 - x0);
    let span_y = rational(y1 - y0);
    let col_of = |x: &BigRational| -> usize {
        let t = (x - rational(x0)) * rational(cols as i64 - 1) / &span_x;
        round_to_i64(&t).clamp(0, cols as i64 - 1) as usize
    };
    let row_of = |y: &BigRational| -> usize {
        let t = (y - rational(y0)) * rational(rows as i64 - 1) / &span_y;
        (rows as i64 - 1 - round_to_i64(&t)).clamp(0, rows as i64 - 1) as usize
    };

    for layer in &spec.layers {
        for w in layer.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ca = col_of(&rational(a.x));
            let cb = col_of(&rational(b.x));
            let rise = b.y - a.y;
            let mut previous_row: Option<usize> = None;
            for c in ca..=cb {
                // exact y of the segment at this column's data coordinate
                let t = if cb == ca {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::from(c as i64 - ca as i64), BigInt::from(cb as i64 - ca as i64))
                };
                let y = rational(a.y) + t * rational(rise);
                let r = row_of(&y);
                let glyph = if rise == 0 {
                    '-'
                } else if previous_row == Some(r) {
                    '_'
                } else if rise > 0 {
                    '/'
                } else {
                    '\\'
                };
                previous_row = Some(r);
                let draw = match layer.style {
                    LineStyle::Dashed => (c - ca) % 2 == 0,
                    _ => true,
                };
                if draw {
                    grid[r][c] = glyph;
                    if layer.style == LineStyle::Bold && r + 1 < rows {
                        grid[r + 1][c] = glyph;
                    }
                }
            }
        }
    }
    // vertices always win over segment glyphs
    for layer in &spec.layers {
        for v in &layer.vertices {
            let c = col_of(&rational(v.x));
            let r = row_of(&rational(v.y));
            grid[r][c] = '*';
        }
    }

    let mut out = String::new();
    match spec.prime() {
        Some(p) => {
            let _ = writeln!(out, "x: {x0}..{x1}  y: {y0}..{y1}  p = {p}");
        }
        None => {
            let _ = writeln!(out, "x: {x0}..{x1}  y: {y0}..{y1}");
        }
    }
    for row in &grid {
        let line: String = row.iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    for layer in &spec.layers {
        let _ = writeln!(out, "{} ({})", layer.label, layer.style.name());
    }
    Ok(out)
}
