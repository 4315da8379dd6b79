//! Triangles `Δ(c,a)` cut out by solution values, the exact tiling verifier,
//! extraction of a pointed bitrade from a dissection, and SVG output.
//!
//! Coordinates: a row value is the line `y = r̄`, a column value the line
//! `x = c̄`, and a symbol value the line `x + y = s̄`. The dissected
//! triangle is `Σ = {x ≥ 0, y ≥ 0, x + y ≤ 1}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{format_rational, rat, Rational};
use crate::bitrade::{Bitrade, BitradeError, Role, Triple};
use crate::system::{PointedBitrade, Solution, SystemError};

pub type Point = (Rational, Rational);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Upright,
    Inverted,
    Degenerate,
}

/// The triangle bounded by `y = lines[0]`, `x = lines[1]` and
/// `x + y = lines[2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleGeom {
    /// Delta position of the triple inducing the triangle, when known.
    pub source: Option<usize>,
    pub lines: [Rational; 3],
    pub corners: [Point; 3],
    pub orientation: Orientation,
}

impl TriangleGeom {
    pub fn from_lines(source: Option<usize>, y: Rational, x: Rational, s: Rational) -> Self {
        let corners = [(x.clone(), y.clone()), (x.clone(), &s - &x), (&s - &y, y.clone())];
        let excess = &s - &x - &y;
        let orientation = if excess.is_positive() {
            Orientation::Upright
        } else if excess.is_negative() {
            Orientation::Inverted
        } else {
            Orientation::Degenerate
        };
        TriangleGeom { source, lines: [y, x, s], corners, orientation }
    }

    pub fn is_degenerate(&self) -> bool {
        self.orientation == Orientation::Degenerate
    }

    pub fn area(&self) -> Rational {
        let e = &self.lines[2] - &self.lines[0] - &self.lines[1];
        &e * &e / rat(2, 1)
    }

    pub fn is_contained(&self) -> bool {
        self.corners.iter().all(in_sigma)
    }

    /// Closed range of the functional `y`, `x` or `x + y` over the triangle.
    fn range(&self, f: Role) -> (Rational, Rational) {
        let vals = self.corners.iter().map(|p| functional(f, p));
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for v in vals {
            if lo.as_ref().is_none_or(|l| &v < l) {
                lo = Some(v.clone());
            }
            if hi.as_ref().is_none_or(|h| &v > h) {
                hi = Some(v);
            }
        }
        (lo.expect("three corners"), hi.expect("three corners"))
    }

    /// Interiors intersect. Every side normal is one of the three
    /// functionals, so a separating axis exists among them exactly when
    /// the interiors are disjoint.
    pub fn overlaps(&self, other: &TriangleGeom) -> bool {
        if self.is_degenerate() || other.is_degenerate() {
            return false;
        }
        Role::ALL.iter().all(|&f| {
            let (a0, a1) = self.range(f);
            let (b0, b1) = other.range(f);
            a1 > b0 && b1 > a0
        })
    }

    /// The three sides as (line, closed parameter interval). Horizontal and
    /// antidiagonal lines are parametrised by `x`, vertical lines by `y`.
    fn sides(&self) -> [(LineKey, (Rational, Rational)); 3] {
        let [p0, p1, p2] = &self.corners;
        let sorted = |a: &Rational, b: &Rational| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        [
            (LineKey(Role::Row, self.lines[0].clone()), sorted(&p0.0, &p2.0)),
            (LineKey(Role::Col, self.lines[1].clone()), sorted(&p0.1, &p1.1)),
            (LineKey(Role::Sym, self.lines[2].clone()), sorted(&p1.0, &p2.0)),
        ]
    }

    pub fn centroid(&self) -> Point {
        let three = rat(3, 1);
        let sx = self.corners.iter().fold(Rational::zero(), |a, p| a + &p.0);
        let sy = self.corners.iter().fold(Rational::zero(), |a, p| a + &p.1);
        (sx / &three, sy / three)
    }
}

fn functional(f: Role, p: &Point) -> Rational {
    match f {
        Role::Row => p.1.clone(),
        Role::Col => p.0.clone(),
        Role::Sym => &p.0 + &p.1,
    }
}

fn in_sigma(p: &Point) -> bool {
    !p.0.is_negative() && !p.1.is_negative() && &p.0 + &p.1 <= Rational::one()
}

fn is_sigma_vertex(p: &Point) -> bool {
    let (zero, one) = (Rational::zero(), Rational::one());
    (p.0 == zero && p.1 == zero) || (p.0 == one && p.1 == zero) || (p.0 == zero && p.1 == one)
}

/// A dissecting line: its direction (row = horizontal, col = vertical,
/// sym = antidiagonal) and value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct LineKey(Role, Rational);

/// One triangle per delta triple, in canonical delta order.
pub fn triangles(t: &Bitrade, sol: &Solution) -> Vec<TriangleGeom> {
    t.delta()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            TriangleGeom::from_lines(
                Some(i),
                sol.values[0][c.row()].clone(),
                sol.values[1][c.col()].clone(),
                sol.values[2][c.sym()].clone(),
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentCount {
    pub direction: Role,
    pub value: String,
    pub segments: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DissectionReport {
    pub triangles: usize,
    pub contained: bool,
    pub non_degenerate: bool,
    pub pairwise_disjoint: bool,
    /// First pair of triangle indices whose interiors meet.
    pub overlap: Option<(usize, usize)>,
    pub area_total: String,
    pub is_dissection: bool,
    pub is_separated_dissection: bool,
    pub segment_counts: Vec<SegmentCount>,
    pub valence_six: Vec<(String, String)>,
}

/// Exact checks on a triangle list.
pub fn verify_dissection(tris: &[TriangleGeom]) -> DissectionReport {
    let contained = tris.iter().all(TriangleGeom::is_contained);
    let non_degenerate = tris.iter().all(|t| !t.is_degenerate());
    let overlap = (0..tris.len())
        .flat_map(|i| (i + 1..tris.len()).map(move |j| (i, j)))
        .find(|&(i, j)| tris[i].overlaps(&tris[j]));
    let area = tris.iter().fold(Rational::zero(), |a, t| a + t.area());
    let is_dissection = !tris.is_empty() && contained && non_degenerate && overlap.is_none() && area == rat(1, 2);

    let mut by_line: BTreeMap<LineKey, Vec<(Rational, Rational)>> = BTreeMap::new();
    for t in tris.iter().filter(|t| !t.is_degenerate()) {
        for (key, iv) in t.sides() {
            by_line.entry(key).or_default().push(iv);
        }
    }
    let segment_counts: Vec<SegmentCount> = by_line
        .into_iter()
        .map(|(LineKey(direction, value), mut ivs)| {
            ivs.sort();
            let mut segments = 0;
            let mut end: Option<Rational> = None;
            for (lo, hi) in ivs {
                match &end {
                    Some(e) if &lo <= e => {
                        if &hi > e {
                            end = Some(hi);
                        }
                    }
                    _ => {
                        segments += 1;
                        end = Some(hi);
                    }
                }
            }
            SegmentCount { direction, value: format_rational(&value), segments }
        })
        .collect();

    let valence_six: Vec<(String, String)> = corner_valences(tris)
        .into_iter()
        .filter(|&(_, v)| v == 6)
        .map(|(p, _)| (format_rational(&p.0), format_rational(&p.1)))
        .collect();
    let is_separated_dissection =
        is_dissection && valence_six.is_empty() && segment_counts.iter().all(|s| s.segments == 1);

    DissectionReport {
        triangles: tris.len(),
        contained,
        non_degenerate,
        pairwise_disjoint: overlap.is_none(),
        overlap,
        area_total: format_rational(&area),
        is_dissection,
        is_separated_dissection,
        segment_counts,
        valence_six,
    }
}

/// Number of triangles having each point as a corner.
fn corner_valences(tris: &[TriangleGeom]) -> BTreeMap<Point, usize> {
    let mut count: BTreeMap<Point, usize> = BTreeMap::new();
    for t in tris.iter().filter(|t| !t.is_degenerate()) {
        for p in &t.corners {
            *count.entry(p.clone()).or_default() += 1;
        }
    }
    count
}

/// A verified dissection together with the pointed bitrade it came from.
#[derive(Clone, Debug)]
pub struct Dissection {
    pub source: PointedBitrade,
    pub triangles: Vec<TriangleGeom>,
    pub report: DissectionReport,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DissectError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("solution is not separated: {0} and {1} share a value")]
    NotSeparatedSolution(String, String),
    #[error("separated solution failed verification; counterexample: {dump}")]
    VerificationFailed { dump: String },
}

/// Solves, demands a separated solution and verifies the resulting
/// triangles. A failed verification is reported with a JSON dump.
pub fn dissect(p: &PointedBitrade) -> Result<Dissection, DissectError> {
    let t = &p.bitrade;
    let sol = p.solve()?;
    if let Some((x, y)) = sol.first_collision() {
        return Err(DissectError::NotSeparatedSolution(t.name(x).to_string(), t.name(y).to_string()));
    }
    let tris = triangles(t, &sol);
    let report = verify_dissection(&tris);
    if !report.is_dissection || !report.is_separated_dissection {
        let dump = serde_json::json!({
            "bitrade": crate::io::BitradeDoc::from_bitrade(t),
            "pivot": t.triple_names(&p.pivot_triple()),
            "report": report,
        });
        return Err(DissectError::VerificationFailed { dump: dump.to_string() });
    }
    Ok(Dissection { source: p.clone(), triangles: tris, report })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("vertex ({0}, {1}) has valence six")]
    ValenceSix(String, String),
    #[error("not a dissection of the unit triangle")]
    NotADissection,
    #[error("vertex ({0}, {1}) does not lie on dissecting lines of all three directions")]
    StrayVertex(String, String),
    #[error("extracted triples are not a bitrade: {0}")]
    Invalid(#[from] BitradeError),
}

/// Reads a pointed bitrade off a dissection: labels are the dissecting
/// lines, delta triples are the triangles, star triples are the vertices
/// not on a corner of `Σ` plus the outer triple, which becomes the pivot.
/// Labels are named `r0, r1, …` (and `c…`, `s…`) in increasing order of
/// line value.
pub fn extract_bitrade(tris: &[TriangleGeom]) -> Result<PointedBitrade, ExtractError> {
    let report = verify_dissection(tris);
    if let Some((x, y)) = report.valence_six.first() {
        return Err(ExtractError::ValenceSix(x.clone(), y.clone()));
    }
    if !report.is_dissection {
        return Err(ExtractError::NotADissection);
    }
    let lines: [BTreeSet<Rational>; 3] = Role::ALL.map(|r| tris.iter().map(|t| t.lines[r.index()].clone()).collect());
    let index: [HashMap<Rational, usize>; 3] =
        Role::ALL.map(|r| lines[r.index()].iter().cloned().enumerate().map(|(i, v)| (v, i)).collect());
    let prefix = ["r", "c", "s"];
    let names: [Vec<String>; 3] =
        Role::ALL.map(|r| (0..lines[r.index()].len()).map(|i| format!("{}{i}", prefix[r.index()])).collect());

    let lookup = |y: &Rational, x: &Rational, s: &Rational| -> Option<Triple> {
        Some(Triple::new(*index[0].get(y)?, *index[1].get(x)?, *index[2].get(s)?))
    };
    let delta: Vec<Triple> = tris
        .iter()
        .map(|t| lookup(&t.lines[0], &t.lines[1], &t.lines[2]).expect("triangle lines are dissecting lines"))
        .collect();
    let mut star = Vec::new();
    for p in corner_valences(tris).keys() {
        if is_sigma_vertex(p) {
            continue;
        }
        let s = &p.0 + &p.1;
        let triple = lookup(&p.1, &p.0, &s)
            .ok_or_else(|| ExtractError::StrayVertex(format_rational(&p.0), format_rational(&p.1)))?;
        star.push(triple);
    }
    let pivot = lookup(&Rational::zero(), &Rational::zero(), &Rational::one()).ok_or(ExtractError::NotADissection)?;
    star.push(pivot);
    let bitrade = Bitrade::from_parts(names, star, delta)?;
    Ok(PointedBitrade::new(bitrade, pivot).expect("outer triple is a star triple"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvgOptions {
    pub equilateral: bool,
    pub side_px: u32,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { equilateral: true, side_px: 400, labels: true }
    }
}

/// Decimal rendering with 9 significant digits, trailing zeros trimmed.
/// Magnitudes below `1e-9` are projection noise and print as `0`.
pub fn format_sig9(v: f64) -> String {
    if v.abs() < 1e-9 || !v.is_finite() {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Plane coordinates, optionally under `(x, y) ↦ (y/2 + x, √3·y/2)`.
pub fn project(p: &Point, equilateral: bool) -> (f64, f64) {
    let x = p.0.to_f64().expect("finite rational");
    let y = p.1.to_f64().expect("finite rational");
    if equilateral {
        (y / 2.0 + x, 3f64.sqrt() * y / 2.0)
    } else {
        (x, y)
    }
}

/// Renders triangles as SVG polygons. `labels[i]`, when given, is printed
/// at the centroid of triangle `i`.
pub fn triangles_svg(tris: &[TriangleGeom], labels: Option<&[String]>, opts: SvgOptions) -> String {
    let side = f64::from(opts.side_px);
    let unit_h = if opts.equilateral { 3f64.sqrt() / 2.0 } else { 1.0 };
    let (w, h) = (side, unit_h * side);
    let screen = |p: &Point| {
        let (x, y) = project(p, opts.equilateral);
        format!("{},{}", format_sig9(x * side), format_sig9((unit_h - y) * side))
    };
    let outer = [(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1)), (rat(0, 1), rat(1, 1))];
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        format_sig9(w),
        format_sig9(h)
    );
    let pts = |ps: &[Point]| ps.iter().map(&screen).collect::<Vec<_>>().join(" ");
    let _ = writeln!(
        out,
        "  <polygon class=\"outer\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        pts(&outer)
    );
    for t in tris {
        let _ = writeln!(
            out,
            "  <polygon class=\"{}\" points=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            match t.orientation {
                Orientation::Upright => "upright",
                Orientation::Inverted => "inverted",
                Orientation::Degenerate => "degenerate",
            },
            pts(&t.corners),
            if t.orientation == Orientation::Inverted { "#d9d9d9" } else { "#ffffff" }
        );
    }
    if let (true, Some(labels)) = (opts.labels, labels) {
        for (t, label) in tris.iter().zip(labels) {
            let (x, y) = project(&t.centroid(), opts.equilateral);
            let _ = writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                format_sig9(x * side),
                format_sig9((unit_h - y) * side),
                format_sig9(side / 40.0),
                escape(label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn to_svg(d: &Dissection, opts: SvgOptions) -> String {
    let t = &d.source.bitrade;
    let labels: Vec<String> =
        d.triangles.iter().map(|tri| tri.source.map(|i| t.format_triple(&t.delta()[i])).unwrap_or_default()).collect();
    triangles_svg(&d.triangles, Some(&labels), opts)
}
