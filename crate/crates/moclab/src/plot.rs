//! SVG rendering of scenario curves.
//!
//! Plots are rebuilt from the CSV artifacts rather than live data so the
//! `plot` subcommand can re-render any previously written scenario
//! directory. Output bytes are a pure function of the CSV contents: fixed
//! canvas, fixed palette, coordinates rounded to two decimals, and no
//! timestamps or environment-dependent content.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 48.0;

struct ModulusRow {
    t: f64,
    s: f64,
    w_raw: f64,
    w_envelope: f64,
}

struct ComparisonRow {
    t: f64,
    s: f64,
    phi: f64,
    w_envelope: f64,
}

fn read_csv(path: &Path, want_header: &str) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().trim();
    if header != want_header {
        return Err(Error::MalformedData(format!(
            "{}: expected header `{want_header}`, found `{header}`",
            path.display()
        )));
    }
    let cols = want_header.split(',').count();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| {
                    Error::MalformedData(format!(
                        "{} line {}: `{f}` is not a number",
                        path.display(),
                        i + 2
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if fields.len() != cols {
            return Err(Error::MalformedData(format!(
                "{} line {}: expected {cols} columns, found {}",
                path.display(),
                i + 2,
                fields.len()
            )));
        }
        rows.push(fields);
    }
    Ok(rows)
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    if points.is_empty() {
        return String::new();
    }
    let mut attr = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            attr.push(' ');
        }
        let _ = write!(attr, "{},{}", px(*x), px(*y));
    }
    format!("<polyline fill=\"none\" {style} points=\"{attr}\"/>\n")
}

struct Frame {
    s_max: f64,
    y_min: f64,
    y_span: f64,
}

impl Frame {
    fn map(&self, s: f64, v: f64) -> (f64, f64) {
        let x = MARGIN_L + (s / self.s_max) * (WIDTH - MARGIN_L - MARGIN_R);
        let y = HEIGHT - MARGIN_B - ((v - self.y_min) / self.y_span) * (HEIGHT - MARGIN_T - MARGIN_B);
        (x, y)
    }
}

fn render_checkpoint(
    t: f64,
    modulus: &[&ModulusRow],
    comparison: &[&ComparisonRow],
    frame: &Frame,
) -> String {
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes.
    let (x0, y0) = frame.map(0.0, frame.y_min);
    let (x1, _) = frame.map(frame.s_max, frame.y_min);
    let (_, y1) = frame.map(0.0, frame.y_min + frame.y_span);
    let _ = write!(
        svg,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(x0),
        px(y0),
        px(x1),
        px(y0)
    );
    let _ = write!(
        svg,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        px(x0),
        px(y0),
        px(x0),
        px(y1)
    );
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">curves at t = {t}</text>\n",
        px(MARGIN_L)
    );
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">s</text>\n",
        px((WIDTH - MARGIN_R + MARGIN_L) / 2.0),
        px(HEIGHT - 12.0)
    );
    // Axis extents as text so the plot is self-describing.
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">0</text>\n\
         <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{:.4}</text>\n\
         <text x=\"8\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{:.4}</text>\n\
         <text x=\"8\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">{:.4}</text>\n",
        px(x0),
        px(HEIGHT - 30.0),
        px(x1 - 30.0),
        px(HEIGHT - 30.0),
        frame.s_max,
        px(y0),
        frame.y_min,
        px(y1 + 10.0),
        frame.y_min + frame.y_span,
    );

    let raw: Vec<(f64, f64)> = modulus.iter().map(|r| frame.map(r.s, r.w_raw)).collect();
    let env: Vec<(f64, f64)> = modulus
        .iter()
        .map(|r| frame.map(r.s, r.w_envelope))
        .collect();
    let phi: Vec<(f64, f64)> = comparison.iter().map(|r| frame.map(r.s, r.phi)).collect();
    svg.push_str(&polyline(&raw, "stroke=\"#999999\" stroke-width=\"1\""));
    svg.push_str(&polyline(&env, "stroke=\"#1f77b4\" stroke-width=\"1.5\""));
    svg.push_str(&polyline(
        &phi,
        "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"",
    ));
    // Legend.
    let legend = [
        ("w_raw", "#999999"),
        ("w_envelope", "#1f77b4"),
        ("phi", "#d62728"),
    ];
    for (i, (name, color)) in legend.iter().enumerate() {
        let y = MARGIN_T + 16.0 * i as f64;
        let _ = write!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{name}</text>\n",
            px(WIDTH - 180.0),
            px(y),
            px(WIDTH - 150.0),
            px(y),
            px(WIDTH - 142.0),
            px(y + 4.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Render one SVG per checkpoint from a scenario's CSV artifacts, returning
/// the written paths. Checkpoints and their order come from
/// `comparison.csv`; `modulus.csv` supplies the raw and envelope curves.
pub fn emit_scenario_plots(dir: &Path) -> Result<Vec<PathBuf>> {
    let mpath = dir.join("modulus.csv");
    let cpath = dir.join("comparison.csv");
    let modulus: Vec<ModulusRow> = read_csv(&mpath, "t,s,w_raw,w_envelope")?
        .into_iter()
        .map(|f| ModulusRow {
            t: f[0],
            s: f[1],
            w_raw: f[2],
            w_envelope: f[3],
        })
        .collect();
    let comparison: Vec<ComparisonRow> = read_csv(&cpath, "t,s,phi,w_envelope,margin")?
        .into_iter()
        .map(|f| ComparisonRow {
            t: f[0],
            s: f[1],
            phi: f[2],
            w_envelope: f[3],
        })
        .collect();

    // Checkpoint times in file order (first occurrence wins).
    let mut times: Vec<f64> = Vec::new();
    for r in &comparison {
        if !times.iter().any(|&t| t == r.t) {
            times.push(r.t);
        }
    }
    for r in &modulus {
        if !times.iter().any(|&t| t == r.t) {
            times.push(r.t);
        }
    }

    // Shared frame across checkpoints so decay is visible between files.
    let mut s_max = 0.0f64;
    let mut y_min = 0.0f64;
    let mut y_max = 0.0f64;
    for r in &modulus {
        s_max = s_max.max(r.s);
        y_min = y_min.min(r.w_raw.min(r.w_envelope));
        y_max = y_max.max(r.w_raw.max(r.w_envelope));
    }
    for r in &comparison {
        s_max = s_max.max(r.s);
        y_min = y_min.min(r.phi.min(r.w_envelope));
        y_max = y_max.max(r.phi.max(r.w_envelope));
    }
    let frame = Frame {
        s_max: if s_max > 0.0 { s_max } else { 1.0 },
        y_min,
        y_span: if y_max > y_min { y_max - y_min } else { 1.0 },
    };

    let mut written = Vec::new();
    for (k, &t) in times.iter().enumerate() {
        let mrows: Vec<&ModulusRow> = modulus.iter().filter(|r| r.t == t).collect();
        let crows: Vec<&ComparisonRow> = comparison.iter().filter(|r| r.t == t).collect();
        let svg = render_checkpoint(t, &mrows, &crows, &frame);
        let path = dir.join(format!("plot-{k}.svg"));
        std::fs::write(&path, svg).map_err(|e| Error::io(path.display().to_string(), e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) {
        std::fs::write(dir.join(name), text).unwrap();
    }

    #[test]
    fn renders_one_svg_per_checkpoint_deterministically() {
        let tmp = tempfile::tempdir().unwrap();
        write(
            tmp.path(),
            "modulus.csv",
            "t,s,w_raw,w_envelope\n0,0.1,0.05,0.05\n0,0.2,0.09,0.09\n0.5,0.1,0.03,0.03\n0.5,0.2,0.05,0.05\n",
        );
        write(
            tmp.path(),
            "comparison.csv",
            "t,s,phi,w_envelope,margin\n0,0.1,0.06,0.05,-0.01\n0,0.2,0.1,0.09,-0.01\n0.5,0.1,0.04,0.03,-0.01\n0.5,0.2,0.06,0.05,-0.01\n",
        );
        let first = emit_scenario_plots(tmp.path()).unwrap();
        assert_eq!(first.len(), 2);
        let bytes: Vec<Vec<u8>> = first.iter().map(|p| std::fs::read(p).unwrap()).collect();
        assert!(bytes[0].starts_with(b"<svg"));
        let again = emit_scenario_plots(tmp.path()).unwrap();
        for (p, b) in again.iter().zip(&bytes) {
            assert_eq!(&std::fs::read(p).unwrap(), b, "plot bytes must be stable");
        }
        // Curves are ordered phi above envelope above raw in the fixture,
        // and all three polylines are present.
        let text = String::from_utf8(bytes[0].clone()).unwrap();
        assert_eq!(text.matches("<polyline").count(), 3);
        assert!(!text.contains("NaN"));
    }

    #[test]
    fn all_zero_curves_still_render() {
        let tmp = tempfile::tempdir().unwrap();
        write(
            tmp.path(),
            "modulus.csv",
            "t,s,w_raw,w_envelope\n0,0.1,0,0\n0,0.2,0,0\n",
        );
        write(
            tmp.path(),
            "comparison.csv",
            "t,s,phi,w_envelope,margin\n0,0.1,0,0,0\n0,0.2,0,0,0\n",
        );
        let files = emit_scenario_plots(tmp.path()).unwrap();
        assert_eq!(files.len(), 1);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.contains("</svg>"));
    }

    #[test]
    fn malformed_csv_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        write(tmp.path(), "modulus.csv", "t,s,w_raw,w_envelope\n0,0.1,x,0\n");
        write(
            tmp.path(),
            "comparison.csv",
            "t,s,phi,w_envelope,margin\n",
        );
        let err = emit_scenario_plots(tmp.path()).unwrap_err();
        assert!(matches!(err, Error::MalformedData(_)));

        write(tmp.path(), "modulus.csv", "t,s,w_raw,w_envelope\n");
        write(tmp.path(), "comparison.csv", "t,s,w_envelope,margin\n");
        let err = emit_scenario_plots(tmp.path()).unwrap_err();
        assert!(matches!(err, Error::MalformedData(_)), "missing phi column");
    }
}
