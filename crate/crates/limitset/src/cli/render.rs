//! Deterministic SVG rendering of rank-2 samples: the Furstenberg sample
//! as points in the unit square of canonical boundary angles, and the
//! projective sample as tick marks on a horizontal theta segment.

use super::fmt::fmt_sig12;
use super::CliError;
use crate::limitsets::samplers::{DirectionSample, FurstenbergSample};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug)]
pub struct RenderLayout {
    pub size: f64,
    pub margin: f64,
    pub square: f64,
    pub point_radius: f64,
}

impl Default for RenderLayout {
    fn default() -> Self {
        RenderLayout {
            size: 800.0,
            margin: 60.0,
            square: 600.0,
            point_radius: 2.5,
        }
    }
}

/// Render both samples into one SVG 1.1 document with a fixed 800x800
/// viewBox. Point order follows the samples' deterministic sort.
pub fn render_svg(
    furstenberg: &FurstenbergSample,
    projective: &DirectionSample,
    layout: &RenderLayout,
) -> Result<String, CliError> {
    for (tuple, _) in &furstenberg.points {
        if tuple.len() != 2 {
            return Err(CliError::Computation(format!(
                "rendering supports rank 2 only, sample has rank {}",
                tuple.len()
            )));
        }
    }
    for (d, _) in &projective.points {
        if d.coords.len() != 2 {
            return Err(CliError::Computation(format!(
                "rendering supports rank 2 only, sample has rank {}",
                d.coords.len()
            )));
        }
    }
    let m = layout.margin;
    let s = layout.square;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}">"#,
        fmt_sig12(layout.size),
        fmt_sig12(layout.size)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        fmt_sig12(m),
        fmt_sig12(m),
        fmt_sig12(s),
        fmt_sig12(s)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="16">alpha1</text>"#,
        fmt_sig12(m + s / 2.0 - 24.0),
        fmt_sig12(m + s + 28.0)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="16" transform="rotate(-90 {} {})">alpha2</text>"#,
        fmt_sig12(m - 28.0),
        fmt_sig12(m + s / 2.0 + 24.0),
        fmt_sig12(m - 28.0),
        fmt_sig12(m + s / 2.0 + 24.0)
    )
    .unwrap();
    for (tuple, _) in &furstenberg.points {
        let x = m + s * tuple[0].angle();
        let y = m + s * (1.0 - tuple[1].angle());
        writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#,
            fmt_sig12(x),
            fmt_sig12(y),
            fmt_sig12(layout.point_radius)
        )
        .unwrap();
    }
    // theta segment below the square
    let seg_y = m + s + 60.0;
    writeln!(
        svg,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
        fmt_sig12(m),
        fmt_sig12(seg_y),
        fmt_sig12(m + s),
        fmt_sig12(seg_y)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="16">theta</text>"#,
        fmt_sig12(m + s / 2.0 - 20.0),
        fmt_sig12(seg_y + 32.0)
    )
    .unwrap();
    for (d, _) in &projective.points {
        let x = m + s * d.theta();
        writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            fmt_sig12(x),
            fmt_sig12(seg_y - 8.0),
            fmt_sig12(x),
            fmt_sig12(seg_y + 8.0)
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}
