//! Deterministic SVG drawings of rank 2 root systems.
//!
//! Vectors are expressed in the simple-root basis and placed in the plane
//! through a Cholesky factor of the base gram, so angles and length ratios are
//! faithful whatever the ambient dimension.

use std::fmt::Write as _;

use thiserror::Error;

use crate::root_systems::{RootSystem, Vector};
use crate::scalar::to_f64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("only rank 2 systems can be drawn, got rank {0}")]
    NotPlanar(usize),
    #[error("overlay root {0} is outside the plane of the base system")]
    OutsidePlane(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Side of the square canvas in pixels.
    pub size: u32,
    /// Fraction of the half-width taken by the longest root.
    pub extent: f64,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 400, extent: 0.7, labels: true }
    }
}

const BASE_COLOR: &str = "#222222";
const OVERLAY_COLOR: &str = "#d6336c";
const CHAMBER_FILL: &str = "#9ec5fe";

struct Plane {
    u1: (f64, f64),
    u2: (f64, f64),
}

impl Plane {
    fn new(rs: &RootSystem) -> Self {
        let g = rs.base_gram();
        let (g11, g12, g22) = (to_f64(&g[(0, 0)]), to_f64(&g[(0, 1)]), to_f64(&g[(1, 1)]));
        let a = g11.sqrt();
        Plane { u1: (a, 0.0), u2: (g12 / a, (g22 - g12 * g12 / g11).sqrt()) }
    }

    fn place(&self, c: &[crate::Rational]) -> (f64, f64) {
        let (c1, c2) = (to_f64(&c[0]), to_f64(&c[1]));
        (c1 * self.u1.0 + c2 * self.u2.0, c1 * self.u1.1 + c2 * self.u2.1)
    }
}

/// Fixed precision with negative zero folded, so output bytes are stable.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn arrow(out: &mut String, from: (f64, f64), to: (f64, f64), marker: &str, color: &str) {
    let _ = writeln!(
        out,
        r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2" marker-end="url(#{marker})"/>"#,
        num(from.0),
        num(from.1),
        num(to.0),
        num(to.1)
    );
}

/// Draws `base` with its walls, roots and fundamental chamber, and the roots
/// and walls of `overlay` (a sub-system in the same ambient space) on top.
pub fn render_rank2(base: &RootSystem, overlay: Option<&RootSystem>, opts: &RenderOptions) -> Result<String, RenderError> {
    if base.rank() != 2 {
        return Err(RenderError::NotPlanar(base.rank()));
    }
    let plane = Plane::new(base);
    let coords = |v: &Vector| -> Result<(f64, f64), RenderError> {
        base.base_coords(v)
            .map(|c| plane.place(&c))
            .ok_or_else(|| RenderError::OutsidePlane(format!("{:?}", v.iter().map(ToString::to_string).collect::<Vec<_>>())))
    };
    let base_pts: Vec<(f64, f64)> = base.roots().iter().map(coords).collect::<Result<_, _>>()?;
    let overlay_pts: Vec<(f64, f64)> = match overlay {
        Some(o) => o.roots().iter().map(coords).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let longest = base_pts.iter().chain(&overlay_pts).map(|p| p.0.hypot(p.1)).fold(0.0, f64::max);
    let half = f64::from(opts.size) / 2.0;
    let scale = half * opts.extent / longest;
    let screen = |p: (f64, f64)| (half + p.0 * scale, half - p.1 * scale);
    let centre = (half, half);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = opts.size
    );
    out.push_str("  <defs>\n");
    for (id, color) in [("base-head", BASE_COLOR), ("overlay-head", OVERLAY_COLOR)] {
        let _ = writeln!(
            out,
            r#"    <marker id="{id}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker>"#
        );
    }
    out.push_str("  </defs>\n");
    let _ = writeln!(out, r#"  <rect width="{s}" height="{s}" fill="white"/>"#, s = opts.size);

    // C_0 is spanned by the columns of the inverse base gram
    let gi = base.base_gram().inverse().expect("a base is linearly independent");
    let rays: Vec<(f64, f64)> = (0..2)
        .map(|j| {
            let p = plane.place(&[gi[(0, j)].clone(), gi[(1, j)].clone()]);
            let len = p.0.hypot(p.1);
            (p.0 / len * half * 2.0, p.1 / len * half * 2.0)
        })
        .collect();
    let (r1, r2) = (screen(rays[0]), screen(rays[1]));
    let _ = writeln!(
        out,
        r#"  <polygon class="chamber" points="{},{} {},{} {},{}" fill="{CHAMBER_FILL}" fill-opacity="0.5"/>"#,
        num(centre.0),
        num(centre.1),
        num(r1.0),
        num(r1.1),
        num(r2.0),
        num(r2.1)
    );

    let wall = |out: &mut String, p: (f64, f64), color: &str, dash: &str| {
        let len = p.0.hypot(p.1);
        let d = (-p.1 / len * half * 2.0, p.0 / len * half * 2.0);
        let (a, b) = (screen(d), screen((-d.0, -d.1)));
        let _ = writeln!(
            out,
            r#"  <line class="wall" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="1"{dash}/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    };
    for p in &base_pts[..base.num_positive()] {
        wall(&mut out, *p, "#888888", "");
    }
    if let Some(o) = overlay {
        for p in &overlay_pts[..o.num_positive()] {
            wall(&mut out, *p, OVERLAY_COLOR, r#" stroke-dasharray="6,4""#);
        }
    }
    for p in &base_pts {
        arrow(&mut out, centre, screen(*p), "base-head", BASE_COLOR);
    }
    for p in &overlay_pts {
        arrow(&mut out, centre, screen(*p), "overlay-head", OVERLAY_COLOR);
    }
    if opts.labels {
        for (k, &i) in base.simple_indices().iter().enumerate() {
            let (x, y) = screen(base_pts[i]);
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" font-family="serif" font-size="14" fill="{BASE_COLOR}">α{}</text>"#,
                num(x + 6.0),
                num(y - 6.0),
                k + 1
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::Tag;
    use crate::weyl_extension::preset;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn a2_has_six_arrows_and_three_walls() {
        let a2 = RootSystem::standard(Tag::A, 2).unwrap();
        let svg = render_rank2(&a2, None, &RenderOptions::default()).unwrap();
        assert_eq!(count(&svg, "url(#base-head)"), 6);
        assert_eq!(count(&svg, "url(#overlay-head)"), 0);
        assert_eq!(count(&svg, r#"class="wall""#), 3);
        assert_eq!(count(&svg, r#"class="chamber""#), 1);
        assert_eq!(svg, render_rank2(&a2, None, &RenderOptions::default()).unwrap());
    }

    #[test]
    fn a2_overlay_in_g2() {
        let pair = preset("a2-in-g2").unwrap().build().unwrap();
        let svg = render_rank2(pair.ambient(), Some(pair.sub()), &RenderOptions::default()).unwrap();
        assert_eq!(count(&svg, "url(#base-head)"), 12);
        assert_eq!(count(&svg, "url(#overlay-head)"), 6);
        assert!(svg.contains(OVERLAY_COLOR) && svg.contains(BASE_COLOR));
    }

    #[test]
    fn non_planar_input_is_rejected() {
        let a3 = RootSystem::standard(Tag::A, 3).unwrap();
        assert_eq!(render_rank2(&a3, None, &RenderOptions::default()), Err(RenderError::NotPlanar(3)));
    }
}
