//! Power-spectrum heatmaps as SVG text.

use std::fmt::Write;

use mdgsp::io::fmt_f64;
use mdgsp::transform::Spectrum2D;

use crate::viridis::VIRIDIS;

const MARGIN_LEFT: usize = 72;
const MARGIN_BOTTOM: usize = 56;
const MARGIN_TOP: usize = 24;
const MARGIN_RIGHT: usize = 16;
const MAX_TICKS: usize = 16;

fn color(t: f64) -> &'static str {
    let i = (t * 256.0).floor();
    VIRIDIS[if i.is_nan() || i < 0.0 {
        0
    } else {
        (i as usize).min(255)
    }]
}

fn tick_stride(n: usize) -> usize {
    n.div_ceil(MAX_TICKS).max(1)
}

/// Rows are `λ1` (smallest at the bottom), columns are `λ2`; the color is
/// power divided by the largest power.
pub fn heatmap_svg(s: &Spectrum2D) -> String {
    let power = s.power();
    let (n1, n2) = s.shape();
    let cell = (480 / n1.max(n2).max(1)).clamp(4, 40);
    let (w, h) = (n2 * cell, n1 * cell);
    let (width, height) = (MARGIN_LEFT + w + MARGIN_RIGHT, MARGIN_TOP + h + MARGIN_BOTTOM);
    let peak = power.max();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(out, "<title>2-D GFT power, peak {}</title>", fmt_f64(peak));
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for k1 in 0..n1 {
        let y = MARGIN_TOP + (n1 - 1 - k1) * cell;
        for k2 in 0..n2 {
            let x = MARGIN_LEFT + k2 * cell;
            let t = if peak > 0.0 { power[(k1, k2)] / peak } else { 0.0 };
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{}"/>"#,
                color(t)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    for k2 in (0..n2).step_by(tick_stride(n2)) {
        let x = MARGIN_LEFT + k2 * cell + cell / 2;
        let y = MARGIN_TOP + h + 4;
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" transform="rotate(60 {x} {y})">{:.3}</text>"#,
            s.lambda2[k2]
        );
    }
    for k1 in (0..n1).step_by(tick_stride(n1)) {
        let y = MARGIN_TOP + (n1 - 1 - k1) * cell + cell / 2 + 3;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" text-anchor="end">{:.3}</text>"#,
            MARGIN_LEFT - 4,
            s.lambda1[k1]
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">λ2</text>"#,
        MARGIN_LEFT + w / 2,
        height - 4
    );
    let _ = writeln!(
        out,
        r#"<text x="12" y="{}" text-anchor="middle" transform="rotate(-90 12 {})">λ1</text>"#,
        MARGIN_TOP + h / 2,
        MARGIN_TOP + h / 2
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdgsp::C64;
    use nalgebra::DMatrix;

    fn spectrum(values: &[f64], n1: usize, n2: usize) -> Spectrum2D {
        let coeffs = DMatrix::from_row_slice(n1, n2, values).map(|v| C64::new(v, 0.0));
        Spectrum2D::new(
            coeffs,
            (0..n1).map(|k| k as f64).collect(),
            (0..n2).map(|k| 0.5 * k as f64).collect(),
        )
        .unwrap()
    }

    #[test]
    fn colors_span_the_table() {
        assert_eq!(color(0.0), VIRIDIS[0]);
        assert_eq!(color(1.0), VIRIDIS[255]);
        assert_eq!(color(0.5), VIRIDIS[128]);
        assert_eq!(color(f64::NAN), VIRIDIS[0]);
    }

    #[test]
    fn one_rect_per_cell_and_deterministic() {
        let s = spectrum(&[2.0, 0.0, 0.0, 1.0, 0.0, 0.0], 2, 3);
        let a = heatmap_svg(&s);
        assert_eq!(a, heatmap_svg(&s));
        assert_eq!(a.matches("<rect").count(), 6 + 1);
        assert_eq!(a.matches(VIRIDIS[255]).count(), 1);
        assert!(a.contains(">1.000</text>"));
        assert!(a.contains(">0.500</text>"));
    }

    #[test]
    fn zero_spectrum_renders() {
        let s = spectrum(&[0.0; 4], 2, 2);
        assert_eq!(heatmap_svg(&s).matches(VIRIDIS[0]).count(), 4);
    }

    #[test]
    fn ticks_thin_out_on_large_grids() {
        assert_eq!(tick_stride(10), 1);
        assert_eq!(tick_stride(64), 4);
    }
}
