//! `dada plotdata`: merge trace CSVs into one long-format CSV plus a minimal
//! static SVG (log-log best value vs oracle calls) for quick inspection. The
//! CSV is the contract, the SVG a convenience.

use anyhow::{bail, Context, Result};
use std::fs;
use std::path::{Path, PathBuf};

use dada::solvers::TRACE_CSV_HEADER;

struct Series {
    label: String,
    /// Best value per oracle call (residuals when f* was supplied).
    values: Vec<f64>,
}

fn label_of(path: &Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    stem.strip_prefix("trace_").unwrap_or(stem).to_string()
}

fn parse_trace(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading trace {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRACE_CSV_HEADER => {}
        Some(header) => bail!(
            "schema mismatch in {}: header {header:?}, expected {TRACE_CSV_HEADER:?}",
            path.display()
        ),
        None => bail!("empty trace file {}", path.display()),
    }
    let mut best = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut cols = line.split(',');
        let value = cols
            .nth(2)
            .with_context(|| format!("{}: row {i} lacks a best_f column", path.display()))?;
        best.push(value.parse::<f64>().with_context(|| {
            format!("{}: row {i}: best_f {value:?} is not a number", path.display())
        })?);
    }
    Ok(best)
}

pub fn execute(traces: &[PathBuf], out: &Path, fstar: Option<f64>) -> Result<()> {
    if traces.is_empty() {
        bail!("no trace files given");
    }
    let mut series = Vec::with_capacity(traces.len());
    for path in traces {
        let mut values = parse_trace(path)?;
        if let Some(f) = fstar {
            for v in values.iter_mut() {
                *v -= f;
            }
        }
        series.push(Series { label: label_of(path), values });
    }

    let column = if fstar.is_some() { "best_f_minus_fstar" } else { "best_f" };
    let mut csv = format!("solver,k,{column}\n");
    for s in &series {
        for (k, v) in s.values.iter().enumerate() {
            csv.push_str(&format!("{},{},{}\n", s.label, k, v));
        }
    }
    fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?;

    let svg_path = out.with_extension("svg");
    fs::write(&svg_path, render_svg(&series, fstar.is_some()))
        .with_context(|| format!("writing {}", svg_path.display()))?;
    Ok(())
}

const PALETTE: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 54.0;

/// Values are clamped to 1e-16 before taking logs so exactly-solved runs stay
/// plottable.
fn render_svg(series: &[Series], residuals: bool) -> String {
    let floor = 1e-16f64;
    let mut xmax = 1.0f64;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        xmax = xmax.max(s.values.len() as f64);
        for &v in &s.values {
            let v = v.max(floor);
            ymin = ymin.min(v);
            ymax = ymax.max(v);
        }
    }
    let (lx_max, ly_min, ly_max) = (xmax.log10(), ymin.log10().floor(), ymax.log10().ceil());
    let ly_span = (ly_max - ly_min).max(1.0);
    let sx = |calls: f64| MARGIN + (calls.log10() / lx_max.max(1e-9)) * (W - 2.0 * MARGIN);
    let sy = |v: f64| H - MARGIN - ((v.log10() - ly_min) / ly_span) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    if !residuals {
        svg.push_str("<!-- no f* supplied; plotting raw best_f -->\n");
    }
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<g stroke=\"#333\" stroke-width=\"1\">\
         <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\"/><line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\"/></g>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    ));
    // Decade ticks.
    let mut dec = 0i64;
    while (dec as f64) <= lx_max {
        let x = sx(10f64.powi(dec as i32));
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#999\"/>\
             <text x=\"{x}\" y=\"{ty}\" font-size=\"11\" text-anchor=\"middle\">1e{dec}</text>\n",
            y0 = H - MARGIN,
            y1 = H - MARGIN + 5.0,
            ty = H - MARGIN + 18.0
        ));
        dec += 1;
    }
    let mut dec = ly_min as i64;
    while (dec as f64) <= ly_max {
        let y = sy(10f64.powi(dec as i32));
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"#999\"/>\
             <text x=\"{tx}\" y=\"{ty}\" font-size=\"11\" text-anchor=\"end\">1e{dec}</text>\n",
            x0 = MARGIN - 5.0,
            x1 = MARGIN,
            tx = MARGIN - 8.0,
            ty = y + 4.0
        ));
        dec += (ly_span / 6.0).ceil() as i64;
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| format!("{:.2},{:.2}", sx((k + 1) as f64), sy(v.max(floor))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            s.label,
            x = W - MARGIN + 4.0 - MARGIN.min(40.0),
            y = MARGIN + 16.0 * i as f64
        ));
    }
    let ylabel = if residuals { "best f - f*" } else { "best f" };
    svg.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">oracle calls</text>\
         <text x=\"14\" y=\"{my}\" font-size=\"12\" transform=\"rotate(-90 14 {my})\" text-anchor=\"middle\">{ylabel}</text>\n</svg>\n",
        x = W / 2.0,
        y = H - 12.0,
        my = H / 2.0
    ));
    svg
}
