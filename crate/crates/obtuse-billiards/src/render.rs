//! Standalone SVG rendering of tessellations, unfoldings, and folded
//! orbits.
//!
//! Everything is computed in scaled coordinates and drawn through the
//! true-metric map `(x, y) ↦ (x, y·√3)` (with the vertical flipped for
//! screen coordinates), so angles on screen are the true angles: the
//! six incline classes render at 0°, 30°, 60°, 90°, 120°, 150°.
//! Output is deterministic: identical inputs produce byte-identical
//! files, with all coordinates printed at fixed precision.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::fence::contact_value;
use crate::geometry::InclineClass;
use crate::orbit::{
    alignment_extent, default_max_bounces, launch, unfold_trace, DirectionPair, Offset,
};
use crate::rat::{rint, to_f64};
use crate::tessellation::{ShapeId, Tessellation};

/// Which layers to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    /// Tessellation + the straightened ray with crossing ticks.
    Unfold,
    /// Fundamental polygon + the folded orbit polyline.
    Fold,
    /// Both layers on one canvas.
    Both,
}

impl RenderMode {
    pub fn parse(s: &str) -> Option<RenderMode> {
        match s.to_ascii_lowercase().as_str() {
            "unfold" => Some(RenderMode::Unfold),
            "fold" => Some(RenderMode::Fold),
            "both" => Some(RenderMode::Both),
            _ => None,
        }
    }

    fn unfolds(self) -> bool {
        matches!(self, RenderMode::Unfold | RenderMode::Both)
    }

    fn folds(self) -> bool {
        matches!(self, RenderMode::Fold | RenderMode::Both)
    }
}

/// A fully specified render request.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub shape: ShapeId,
    pub a: Offset,
    pub d: DirectionPair,
    pub mode: RenderMode,
    /// Horizontal extent override for the unfolding layer (the rise, for
    /// the vertical pair). Defaults to twice the alignment extent, which
    /// covers one full period cycle on the obtuse shapes.
    pub t_max: Option<u64>,
}

/// Stroke color of one incline class (shared by tessellation lines and
/// crossing ticks).
fn class_color(class: InclineClass) -> &'static str {
    match class {
        InclineClass::H0 => "#9467bd",
        InclineClass::D30 => "#2ca02c",
        InclineClass::D60 => "#1f77b4",
        InclineClass::V90 => "#8c564b",
        InclineClass::D120 => "#17becf",
        InclineClass::D150 => "#bcbd22",
    }
}

/// Scaled-coordinate implicit form `cx·x + cy·y = offset` of a class.
fn class_coefficients(class: InclineClass) -> (f64, f64) {
    match class {
        InclineClass::H0 => (0.0, 1.0),
        InclineClass::D30 => (-1.0 / 3.0, 1.0),
        InclineClass::D60 => (-1.0, 1.0),
        InclineClass::V90 => (1.0, 0.0),
        InclineClass::D120 => (1.0, 1.0),
        InclineClass::D150 => (1.0 / 3.0, 1.0),
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
const PX_PER_UNIT: f64 = 90.0;

/// Fixed-precision coordinate formatting; `-0.00` is normalized so the
/// output is a pure function of the drawn geometry.
fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Scaled-coordinate bounding box, grown point by point.
#[derive(Clone, Copy, Debug)]
struct Bounds {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Bounds {
    fn empty() -> Bounds {
        Bounds {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        }
    }

    fn add(&mut self, x: f64, y: f64) {
        self.x0 = self.x0.min(x);
        self.x1 = self.x1.max(x);
        self.y0 = self.y0.min(y);
        self.y1 = self.y1.max(y);
    }

    fn grown(mut self, margin: f64) -> Bounds {
        self.x0 -= margin;
        self.x1 += margin;
        self.y0 -= margin;
        self.y1 += margin;
        self
    }
}

/// Maps scaled coordinates to SVG pixels: true-metric stretch, then a
/// vertical flip into screen orientation.
struct Canvas {
    bounds: Bounds,
    out: String,
}

impl Canvas {
    fn new(bounds: Bounds) -> Canvas {
        Canvas {
            bounds,
            out: String::new(),
        }
    }

    fn width(&self) -> f64 {
        (self.bounds.x1 - self.bounds.x0) * PX_PER_UNIT
    }

    fn height(&self) -> f64 {
        (self.bounds.y1 - self.bounds.y0) * SQRT3 * PX_PER_UNIT
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.bounds.x0) * PX_PER_UNIT,
            (self.bounds.y1 - y) * SQRT3 * PX_PER_UNIT,
        )
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let (x1, y1) = self.map(a.0, a.1);
        let (x2, y2) = self.map(b.0, b.1);
        self.out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style}/>\n",
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2)
        ));
    }

    fn circle(&mut self, p: (f64, f64), r: f64, style: &str) {
        let (cx, cy) = self.map(p.0, p.1);
        self.out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {style}/>\n",
            fmt(cx),
            fmt(cy),
            fmt(r)
        ));
    }

    fn path(&mut self, points: &[(f64, f64)], close: bool, style: &str) {
        if points.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let (px, py) = self.map(x, y);
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd} {} {} ", fmt(px), fmt(py)));
        }
        if close {
            d.push('Z');
        }
        self.out
            .push_str(&format!("<path d=\"{}\" {style}/>\n", d.trim_end()));
    }

    fn group(&mut self, id: &str) {
        self.out.push_str(&format!("<g id=\"{id}\">\n"));
    }

    fn end_group(&mut self) {
        self.out.push_str("</g>\n");
    }
}

/// Intersect the line `cx·x + cy·y = c` with the bounds rectangle,
/// returning the clipped segment's endpoints (scaled coordinates).
fn clip_line(coeff: (f64, f64), c: f64, b: &Bounds) -> Option<((f64, f64), (f64, f64))> {
    let (cx, cy) = coeff;
    let eps = 1e-9;
    let mut hits: Vec<(f64, f64)> = Vec::new();
    let mut consider = |x: f64, y: f64| {
        let inside = x >= b.x0 - eps && x <= b.x1 + eps && y >= b.y0 - eps && y <= b.y1 + eps;
        let duplicate = hits
            .iter()
            .any(|&(hx, hy)| (hx - x).abs() < eps && (hy - y).abs() < eps);
        if inside && !duplicate {
            hits.push((x, y));
        }
    };
    if cy.abs() > eps {
        // Crossings with the vertical borders x = x0, x1.
        consider(b.x0, (c - cx * b.x0) / cy);
        consider(b.x1, (c - cx * b.x1) / cy);
    }
    if cx.abs() > eps {
        // Crossings with the horizontal borders y = y0, y1.
        consider((c - cy * b.y0) / cx, b.y0);
        consider((c - cy * b.y1) / cx, b.y1);
    }
    if hits.len() < 2 {
        return None;
    }
    // Farthest pair (a diagonal line can graze a corner and produce 3).
    let mut best = (hits[0], hits[1]);
    let mut best_d = -1.0;
    for i in 0..hits.len() {
        for j in (i + 1)..hits.len() {
            let d = (hits[i].0 - hits[j].0).powi(2) + (hits[i].1 - hits[j].1).powi(2);
            if d > best_d {
                best_d = d;
                best = (hits[i], hits[j]);
            }
        }
    }
    Some(best)
}

fn point_f64(p: &crate::geometry::ScaledPoint) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

/// Render the request to SVG text. The unfolding layer traces the
/// straightened ray with per-class crossing ticks and, on shapes with a
/// fence calculus, contact ticks colored by barrier membership; the
/// fold layer draws the orbit polyline inside the fundamental polygon.
/// Orbits need not be periodic — singular and truncated traces draw the
/// strikes they reached.
pub fn render(tess: &Tessellation, spec: &RenderSpec) -> Result<String> {
    let a = &spec.a;
    let d = &spec.d;
    let (x, y) = (d.x(), d.y());

    // Folded orbit (also used in Both mode).
    let orbit = if spec.mode.folds() {
        Some(launch(tess, a, d, default_max_bounces(d))?)
    } else {
        None
    };
    let orbit_points: Vec<(f64, f64)> = orbit
        .as_ref()
        .and_then(|r| r.bounce_points.as_ref())
        .map(|pts| {
            // The polyline starts at the launch point; the kite's mirror
            // convention launches offsets a > 0 from the reflected start.
            let a0 = to_f64(a.value());
            let start = if tess.shape == ShapeId::Kite && a0 > 0.0 {
                (-a0, 0.0)
            } else {
                (a0, 0.0)
            };
            std::iter::once(start)
                .chain(pts.iter().map(point_f64))
                .collect()
        })
        .unwrap_or_default();

    // Unfolded ray and its crossings.
    let extent = spec.t_max.unwrap_or_else(|| 2 * alignment_extent(tess, d));
    let trace = if spec.mode.unfolds() {
        Some(unfold_trace(tess, a, d, &rint(extent as i64))?)
    } else {
        None
    };
    let a0 = to_f64(a.value());
    let ray: Option<((f64, f64), (f64, f64))> = spec.mode.unfolds().then(|| {
        if x == 0 {
            ((a0, 0.0), (a0, extent as f64))
        } else {
            let t = extent as f64;
            ((a0, 0.0), (a0 + t, t * y as f64 / x as f64))
        }
    });

    // Viewport: polygon, plus whatever the active layers reach.
    let mut bounds = Bounds::empty();
    for p in &tess.fundamental_polygon {
        let (px, py) = point_f64(p);
        bounds.add(px, py);
    }
    if let Some((s, e)) = ray {
        bounds.add(s.0, s.1);
        bounds.add(e.0, e.1);
    }
    for &(px, py) in &orbit_points {
        bounds.add(px, py);
    }
    let bounds = bounds.grown(0.75);

    let mut canvas = Canvas::new(bounds);

    // Layer: tessellation lines, one stroke style per incline class.
    canvas.group("tessellation");
    for family in &tess.families {
        let coeff = class_coefficients(family.class);
        let start = to_f64(&family.start);
        let step = to_f64(&family.step);
        // Offset range covering the viewport: evaluate the functional on
        // the corners.
        let corners = [
            (bounds.x0, bounds.y0),
            (bounds.x0, bounds.y1),
            (bounds.x1, bounds.y0),
            (bounds.x1, bounds.y1),
        ];
        let values: Vec<f64> = corners
            .iter()
            .map(|&(cx, cy)| coeff.0 * cx + coeff.1 * cy)
            .collect();
        let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let k0 = ((vmin - start) / step).ceil() as i64;
        let k1 = ((vmax - start) / step).floor() as i64;
        let style = format!(
            "stroke=\"{}\" stroke-width=\"0.8\" opacity=\"0.45\"",
            class_color(family.class)
        );
        for k in k0..=k1 {
            let c = start + k as f64 * step;
            if let Some((p, q)) = clip_line(coeff, c, &bounds) {
                canvas.line(p, q, &style);
            }
        }
    }
    canvas.end_group();

    // Layer: fundamental polygon.
    canvas.group("polygon");
    let poly: Vec<(f64, f64)> = tess.fundamental_polygon.iter().map(point_f64).collect();
    canvas.path(
        &poly,
        true,
        "fill=\"none\" stroke=\"#111111\" stroke-width=\"2.5\"",
    );
    canvas.end_group();

    // Layer: unfolding segment with crossing ticks and fence contacts.
    if let (Some(trace), Some((s, e))) = (&trace, ray) {
        canvas.group("unfolding");
        canvas.line(s, e, "stroke=\"#d62728\" stroke-width=\"1.8\"");
        for crossing in &trace.crossings {
            let p = point_f64(&crossing.point);
            if crossing.is_vertex_hit {
                canvas.circle(
                    p,
                    5.0,
                    "fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\"",
                );
            } else {
                let style = format!("fill=\"{}\"", class_color(crossing.line.class));
                canvas.circle(p, 3.0, &style);
            }
        }
        canvas.end_group();

        // Fence contacts: the integer-time stations of the straightened
        // ray, colored by barrier membership of the contact value.
        if let (Some(barrier), true) = (&tess.barrier, x >= 1) {
            canvas.group("fence");
            let af = to_f64(a.value());
            let i0 = af.floor() as i64 + 1;
            let i1 = (extent as f64 + af).floor() as i64;
            for i in i0..=i1 {
                let c = contact_value(a, d, i);
                let on_barrier = barrier.contains(&c);
                let t = i as f64 - af;
                let p = (i as f64, t * y as f64 / x as f64);
                let style = if on_barrier {
                    "fill=\"#d62728\" stroke=\"#d62728\" stroke-width=\"1\""
                } else {
                    "fill=\"#2ca02c\" stroke=\"#2ca02c\" stroke-width=\"1\""
                };
                canvas.circle(p, 4.0, style);
            }
            canvas.end_group();
        }
    }

    // Layer: folded orbit polyline.
    if !orbit_points.is_empty() {
        canvas.group("orbit");
        canvas.path(
            &orbit_points,
            false,
            "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-linejoin=\"round\"",
        );
        for &p in &orbit_points {
            canvas.circle(p, 2.5, "fill=\"#d62728\"");
        }
        canvas.end_group();
    }

    // Layer: polygon vertices.
    canvas.group("vertices");
    for p in &poly {
        canvas.circle(*p, 3.5, "fill=\"#111111\"");
    }
    canvas.end_group();

    let w = fmt(canvas.width());
    let h = fmt(canvas.height());
    let body = canvas.out;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str("<!-- obtuse-billiards render v1 -->\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "<desc>{} billiard, direction ({}, {}), offset {}</desc>\n",
        tess.shape,
        x,
        y,
        a.value()
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#fcfcf7\"/>\n");
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write SVG text to a file, removing the partial file on error.
pub fn write_svg(text: &str, path: &Path) -> Result<()> {
    let outcome = fs::write(path, text).map_err(Into::into);
    if outcome.is_err() {
        let _ = fs::remove_file(path);
    }
    outcome
}
