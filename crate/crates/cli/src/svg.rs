//! Standalone monochrome SVG of a sweep raster.
//!
//! The plot area is a nested `<svg>` whose viewBox is exactly
//! `params × axis` cells, so one user unit is one grid cell. Allowed cells in
//! each parameter column are merged into vertical runs, one `<rect>` per run.
//! The axis grows upward.

use std::fmt::Write as _;

use kpb_core::SweepGrid;

const PLOT_W: usize = 600;
const PLOT_H: usize = 600;
const MARGIN_L: usize = 70;
const MARGIN_R: usize = 20;
const MARGIN_T: usize = 30;
const MARGIN_B: usize = 50;

fn label(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render(grid: &SweepGrid, param_name: &str) -> String {
    let rows = grid.rows();
    let cols = grid.cols();
    let width = MARGIN_L + PLOT_W + MARGIN_R;
    let height = MARGIN_T + PLOT_H + MARGIN_B;
    let mut out = String::new();

    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{} family, allowed bands</text>"#,
        MARGIN_L + PLOT_W / 2,
        escape(grid.family.name())
    );
    let _ = writeln!(
        out,
        r#"<svg x="{MARGIN_L}" y="{MARGIN_T}" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {rows} {cols}" preserveAspectRatio="none" shape-rendering="crispEdges" data-params="{rows}" data-axis="{cols}">"#
    );
    let _ = writeln!(out, r#"<g fill="black">"#);
    for i in 0..rows {
        let mut j = 0;
        while j < cols {
            if !grid.allowed(i, j) {
                j += 1;
                continue;
            }
            let start = j;
            while j < cols && grid.allowed(i, j) {
                j += 1;
            }
            // axis index `start` sits at the bottom
            let y = cols - j;
            let _ = writeln!(
                out,
                r#"<rect x="{i}" y="{y}" width="1" height="{}"/>"#,
                j - start
            );
        }
    }
    let _ = writeln!(out, "</g>\n</svg>");

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    let bottom = MARGIN_T + PLOT_H;
    let text = |out: &mut String, x: usize, y: usize, anchor: &str, body: String| {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            escape(&body)
        );
    };
    if let (Some(first), Some(last)) = (grid.params.first(), grid.params.last()) {
        text(&mut out, MARGIN_L, bottom + 16, "start", label(*first));
        text(
            &mut out,
            MARGIN_L + PLOT_W,
            bottom + 16,
            "end",
            label(*last),
        );
    }
    text(
        &mut out,
        MARGIN_L + PLOT_W / 2,
        bottom + 36,
        "middle",
        param_name.to_owned(),
    );
    if let (Some(first), Some(last)) = (grid.axis.first(), grid.axis.last()) {
        text(&mut out, MARGIN_L - 6, bottom, "end", label(*first));
        text(&mut out, MARGIN_L - 6, MARGIN_T + 10, "end", label(*last));
    }
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        MARGIN_T + PLOT_H / 2,
        MARGIN_T + PLOT_H / 2,
        grid.mode.label()
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use kpb_core::{AxisMode, FamilyKind, LatticeParams};

    use super::*;

    fn grid() -> SweepGrid {
        SweepGrid::compute(
            FamilyKind::Delta,
            vec![-2.0, 0.0, 2.0],
            kpb_core::sweep::linspace(-5.0, 30.0, 50),
            AxisMode::Energy,
            &LatticeParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn self_contained_and_sized_to_grid() {
        let svg = render(&grid(), "v");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"viewBox="0 0 3 50""#));
        assert!(svg.contains(r#"data-params="3" data-axis="50""#));
        assert!(!svg.contains("href"));
    }

    #[test]
    fn runs_cover_exactly_the_allowed_cells() {
        let g = grid();
        let svg = render(&g, "v");
        let mut covered = 0usize;
        for line in svg
            .lines()
            .filter(|l| l.starts_with(r#"<rect x=""#) && l.contains(r#"" width="1" "#))
        {
            let h: usize = line
                .split("height=\"")
                .nth(1)
                .and_then(|s| s.split('"').next())
                .unwrap()
                .parse()
                .unwrap();
            covered += h;
        }
        let allowed = (0..g.rows())
            .flat_map(|i| (0..g.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| g.allowed(i, j))
            .count();
        assert_eq!(covered, allowed);
    }

    #[test]
    fn tick_labels_are_compact() {
        assert_eq!(label(-25.0), "-25");
        assert_eq!(label(1.23456), "1.235");
        assert_eq!(label(-0.0001), "0");
    }
}
