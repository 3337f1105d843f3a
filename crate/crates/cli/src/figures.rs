//! SVG renderings of disc collections, family curves and hit coloring.

use std::fmt::Write;

use esetlab::curve_geometry::{meets, Branch, CurveFamily};
use esetlab::disc_sets::{gen_cantor_rset, gen_example1, gen_example2, gen_horocycle_lset, gen_random};
use esetlab::measure::vertical_projection;
use esetlab::{Ambient, ComplexPoint, DiscCollection, Gauge};

use crate::CliResult;

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 30.0;
const MIN_PX: f64 = 1.5;

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn fit(lo: ComplexPoint, hi: ComplexPoint) -> Self {
        let sx = (W - 2.0 * PAD) / (hi.re - lo.re).max(1e-12);
        let sy = (H - 2.0 * PAD) / (hi.im - lo.im).max(1e-12);
        let scale = sx.min(sy);
        Frame { x0: lo.re, y0: hi.im, scale }
    }

    fn px(&self, z: ComplexPoint) -> (f64, f64) {
        (PAD + (z.re - self.x0) * self.scale, PAD + (self.y0 - z.im) * self.scale)
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    writeln!(s, r#"<text x="{PAD}" y="18" font-family="sans-serif" font-size="13">{title}</text>"#).unwrap();
    s
}

fn polyline(s: &mut String, f: &Frame, pts: &[ComplexPoint], color: &str) {
    if pts.len() < 2 {
        return;
    }
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = f.px(*p);
        write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" }).unwrap();
    }
    writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1"/>"#).unwrap();
}

fn circle(s: &mut String, f: &Frame, c: ComplexPoint, r: f64, fill: &str) {
    let (x, y) = f.px(c);
    let rp = (r * f.scale).max(MIN_PX);
    writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{rp:.2}" fill="{fill}" fill-opacity="0.6" stroke="none"/>"#).unwrap();
}

fn bounds(col: &DiscCollection) -> (ComplexPoint, ComplexPoint) {
    match col.ambient {
        Ambient::UnitDisc => (ComplexPoint::new(-1.05, -1.05), ComplexPoint::new(1.05, 1.05)),
        Ambient::Plane => {
            let mut lo = ComplexPoint::new(f64::INFINITY, f64::INFINITY);
            let mut hi = -lo;
            for d in &col.discs {
                lo.re = lo.re.min(d.center.re - d.radius);
                lo.im = lo.im.min(d.center.im - d.radius);
                hi.re = hi.re.max(d.center.re + d.radius);
                hi.im = hi.im.max(d.center.im + d.radius);
            }
            if !lo.re.is_finite() {
                return (ComplexPoint::new(0.0, -1.0), ComplexPoint::new(1.0, 1.0));
            }
            lo.re = lo.re.min(0.0);
            lo.im = lo.im.min(0.0);
            (lo, hi)
        }
    }
}

/// Points of one family curve inside the plot window.
fn curve_points(fam: &CurveFamily, lo: ComplexPoint, hi: ComplexPoint) -> Vec<Vec<ComplexPoint>> {
    let signs: &[f64] = match fam.branch {
        Branch::Upper => &[1.0],
        Branch::Lower => &[-1.0],
        Branch::Both => &[1.0, -1.0],
    };
    let n = 400;
    let g = &fam.gauge;
    let frame = fam.frame();
    signs
        .iter()
        .map(|&sign| match fam.ambient() {
            Ambient::Plane => {
                let start = g.curve_start().max(1e-9);
                let end = hi.re.abs().max(hi.im.abs()).max(lo.re.abs()).max(lo.im.abs()) * 1.5;
                (0..=n)
                    .map(|i| start + (end - start) * i as f64 / n as f64)
                    .map(|x| ComplexPoint::new(x, sign * fam.c * g.value(x)) * frame)
                    .filter(|p| p.re >= lo.re && p.re <= hi.re && p.im >= lo.im && p.im <= hi.im)
                    .collect()
            }
            Ambient::UnitDisc => (1..n)
                .filter_map(|i| {
                    let u = i as f64 / n as f64;
                    let rho = 1.0 - u;
                    let t = fam.c * g.value(u);
                    let cos = (1.0 + rho * rho - t * t) / (2.0 * rho);
                    (cos.abs() <= 1.0).then(|| ComplexPoint::from_polar(rho, sign * cos.acos()) * frame)
                })
                .collect(),
        })
        .collect()
}

/// Collection with optional family curves; discs met by a drawn curve are red.
pub fn collection(col: &DiscCollection, curves: &[(CurveFamily, Vec<usize>)]) -> String {
    let (lo, hi) = bounds(col);
    let f = Frame::fit(lo, hi);
    let mut s = header(&format!("{} discs, gauge {}", col.len(), col.gauge));
    if col.ambient == Ambient::UnitDisc {
        let (x, y) = f.px(ComplexPoint::new(0.0, 0.0));
        writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="none" stroke="#888888"/>"##, f.scale).unwrap();
    }
    let hit: std::collections::BTreeSet<usize> = curves.iter().flat_map(|(_, h)| h.iter().copied()).collect();
    for (i, d) in col.discs.iter().enumerate() {
        circle(&mut s, &f, d.center, d.radius, if hit.contains(&i) { "#d62728" } else { "#1f77b4" });
    }
    for (fam, _) in curves {
        for branch in curve_points(fam, lo, hi) {
            polyline(&mut s, &f, &branch, "#2ca02c");
        }
    }
    s.push_str("</svg>\n");
    s
}

fn with_hits(col: &DiscCollection, fam: CurveFamily) -> (CurveFamily, Vec<usize>) {
    let hits = col.discs.iter().enumerate().filter(|(_, d)| meets(&fam, d)).map(|(i, _)| i).collect();
    (fam, hits)
}

fn cantor_figure() -> CliResult<String> {
    let col = gen_cantor_rset(6, None)?;
    let (lo, hi) = (ComplexPoint::new(-0.05, -0.2), ComplexPoint::new(1.05, 1.4));
    let f = Frame::fit(lo, hi);
    let mut s = header("Cantor R-set, 6 levels, with its projection");
    for d in &col.discs {
        circle(&mut s, &f, d.center, d.radius, "#1f77b4");
    }
    for &(a, b) in vertical_projection(&col).intervals() {
        polyline(&mut s, &f, &[ComplexPoint::new(a, -0.1), ComplexPoint::new(b, -0.1)], "#d62728");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// The five figures: Cantor set, the ray and line examples, a random K-set with
/// curves, and the horocycle collection.
pub fn all() -> CliResult<Vec<(&'static str, String)>> {
    let mut out = vec![("figure1_cantor", cantor_figure()?)];

    let e1 = gen_example1(3, 4)?;
    let rays: Vec<_> = (1..=3)
        .map(|n| CurveFamily::plane(Gauge::identity(), 0.0, (1.0 / n as f64).tan(), Branch::Upper))
        .collect::<esetlab::Result<_>>()?;
    let curves: Vec<_> = rays.into_iter().map(|fam| with_hits(&e1, fam)).collect();
    out.push(("figure2_example1", collection(&e1, &curves)));

    let e2 = gen_example2(3, 4)?;
    let lines: Vec<_> = (1..=3)
        .map(|n| CurveFamily::plane(Gauge::constant(), 0.0, 1.0 / n as f64, Branch::Upper))
        .collect::<esetlab::Result<_>>()?;
    let curves: Vec<_> = lines.into_iter().map(|fam| with_hits(&e2, fam)).collect();
    out.push(("figure3_example2", collection(&e2, &curves)));

    let g = Gauge::concave_power(0.5)?;
    let rnd = gen_random(Ambient::Plane, g, 60, 0.5, 1.0, 7)?;
    let curves: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&c| CurveFamily::plane(g, 0.0, c, Branch::Both).map(|fam| with_hits(&rnd, fam)))
        .collect::<esetlab::Result<_>>()?;
    out.push(("figure4_random", collection(&rnd, &curves)));

    let horo = gen_horocycle_lset(200)?;
    let curves: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&c| {
            CurveFamily::unit(horo.gauge, ComplexPoint::new(1.0, 0.0), c, Branch::Both).map(|fam| with_hits(&horo, fam))
        })
        .collect::<esetlab::Result<_>>()?;
    out.push(("figure5_horocycle", collection(&horo, &curves)));
    Ok(out)
}
