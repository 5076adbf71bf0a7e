//! SVG snapshots of the cobweb cell in the Beltrami–Cayley–Klein model
//! centered at `Q`.

use std::fmt::Write as _;

use crate::cell::CobwebCell;
use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Projection {
    #[default]
    Xy,
    Xz,
    Yz,
}

impl Projection {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "xy" => Some(Self::Xy),
            "xz" => Some(Self::Xz),
            "yz" => Some(Self::Yz),
            _ => None,
        }
    }

    fn axes(self) -> (usize, usize) {
        match self {
            Self::Xy => (0, 1),
            Self::Xz => (0, 2),
            Self::Yz => (1, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Xy => "xy",
            Self::Xz => "xz",
            Self::Yz => "yz",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    pub projection: Projection,
    /// Width and height in pixels.
    pub size: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { projection: Projection::Xy, size: 600 }
    }
}

/// Klein-model coordinates of a point in the frame centered at `Q`.
pub fn klein_coordinates(frame_inverse: &Mat4<f64>, x: &Vec4<f64>) -> Result<[f64; 3]> {
    let c = *frame_inverse * *x;
    if c[3].abs() < 1e-300 {
        return Err(Error::NonInterior);
    }
    Ok([c[0] / c[3], c[1] / c[3], c[2] / c[3]])
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders the cell's edges, `Q`, and the axis `F03 F12`, orthographically
/// projected onto a coordinate plane of the Klein ball.
pub fn render_svg(cell: &CobwebCell<f64>, options: &SvgOptions) -> Result<String> {
    let t = &cell.orthoscheme;
    let frame = t.frame_at_q();
    let inv = frame.inverse().ok_or(Error::SingularMatrix { det: frame.det() })?;
    let (i, j) = options.projection.axes();
    let size = options.size.max(16) as f64;
    let half = size / 2.0;
    let radius = half * 0.95;
    let screen = |x: &Vec4<f64>| -> Result<(String, String)> {
        let k = klein_coordinates(&inv, x)?;
        Ok((fmt_coord(half + radius * k[i]), fmt_coord(half - radius * k[j])))
    };

    let mut out = String::new();
    let w = options.size.max(16);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#
    );
    let _ = writeln!(out, "<title>Cw{} projection {}</title>", t.symbol, options.projection.name());
    let _ = writeln!(
        out,
        "<style>.edge{{stroke:#1f3a93;stroke-width:1}}.axis{{stroke:#c0392b;stroke-dasharray:4 3}}.absolute{{fill:none;stroke:#888}}</style>"
    );
    let _ = writeln!(
        out,
        r#"<circle class="absolute" cx="{c}" cy="{c}" r="{r}"/>"#,
        c = fmt_coord(half),
        r = fmt_coord(radius)
    );
    let _ = writeln!(out, r#"<g id="edges">"#);
    for e in &cell.edges {
        let (x1, y1) = screen(&cell.vertices[e.vertices[0]].x)?;
        let (x2, y2) = screen(&cell.vertices[e.vertices[1]].x)?;
        let _ = writeln!(out, r#"<line class="edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let f03 = t.f03()?;
    let (x1, y1) = screen(&f03.x)?;
    let (x2, y2) = screen(&t.f12.x)?;
    let _ = writeln!(out, r#"<line class="axis" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    let (qx, qy) = screen(&t.q.x)?;
    let _ = writeln!(out, r##"<circle class="q" cx="{qx}" cy="{qy}" r="3" fill="#c0392b"/>"##);
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::SchlafliTriple;
    use crate::orthoscheme::realize;

    fn cell() -> CobwebCell<f64> {
        CobwebCell::build(&realize(SchlafliTriple::cobweb(3).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn q_at_center_and_vertices_inside() {
        let c = cell();
        let inv = c.orthoscheme.frame_at_q().inverse().unwrap();
        let q = klein_coordinates(&inv, &c.orthoscheme.q.x).unwrap();
        assert!(q.iter().all(|v| v.abs() < 1e-12));
        for v in &c.vertices {
            let k = klein_coordinates(&inv, &v.x).unwrap();
            assert!(k.iter().map(|x| x * x).sum::<f64>() < 1.0);
        }
    }

    #[test]
    fn edge_count_and_determinism() {
        let c = cell();
        for p in [Projection::Xy, Projection::Xz, Projection::Yz] {
            let o = SvgOptions { projection: p, size: 400 };
            let a = render_svg(&c, &o).unwrap();
            assert_eq!(a.matches(r#"<line class="edge""#).count(), 78);
            assert_eq!(a, render_svg(&c, &o).unwrap());
        }
    }
}
