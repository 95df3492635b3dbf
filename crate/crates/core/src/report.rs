//! Serialized forms of a [`SpectrumReport`]: JSON, CSV and an SVG band diagram.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Backend;
use crate::spectrum::{Band, ClosedGapCertificate, ExactEnergy, GapRecord, GapStatus, SpectrumReport};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed report: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?} (expected json or csv)")),
        }
    }
}

pub fn to_json(report: &SpectrumReport) -> String {
    serde_json::to_string_pretty(report).expect("serializable")
}

pub fn from_json(s: &str) -> Result<SpectrumReport, ReportError> {
    Ok(serde_json::from_str(s)?)
}

pub fn render(report: &SpectrumReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

/// One CSV row; `record` is `meta`, `band`, `gap` or `closed`.
#[derive(Debug, Default, Serialize, Deserialize)]
struct Row {
    record: String,
    index: usize,
    lo: Option<String>,
    hi: Option<String>,
    status: Option<String>,
    energy: Option<String>,
    sign: Option<i8>,
    residual: Option<String>,
    /// Ascending coefficients joined by `;`.
    factor: Option<String>,
    exact_lo: Option<String>,
    exact_hi: Option<String>,
    exact_value: Option<String>,
}

/// Floats are written in shortest round-trip form.
fn num(x: f64) -> Option<String> {
    Some(format!("{x:?}"))
}

fn parse_num(s: &Option<String>) -> Option<f64> {
    s.as_deref().and_then(|t| t.parse().ok())
}

/// The `meta` row carries the period in `index` and the backend in
/// `status`; the closed-gap count is the number of `closed` rows.
pub fn to_csv(report: &SpectrumReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let backend = serde_json::to_value(report.backend).expect("serializable");
    let mut rows = vec![Row {
        record: "meta".into(),
        index: report.period,
        status: backend.as_str().map(str::to_string),
        ..Row::default()
    }];
    for b in &report.bands {
        rows.push(Row { record: "band".into(), index: b.index, lo: num(b.lo), hi: num(b.hi), ..Row::default() });
    }
    for g in &report.gaps {
        let status = match g.status {
            GapStatus::Open => "open",
            GapStatus::Closed => "closed",
        };
        rows.push(Row {
            record: "gap".into(),
            index: g.index,
            lo: num(g.lo),
            hi: num(g.hi),
            status: Some(status.into()),
            ..Row::default()
        });
    }
    for c in &report.closed_gaps {
        let ex = c.exact.as_ref();
        rows.push(Row {
            record: "closed".into(),
            index: c.gap_index,
            energy: num(c.energy),
            sign: Some(c.sign),
            residual: num(c.residual),
            factor: ex.map(|e| e.factor.join(";")),
            exact_lo: ex.map(|e| e.lo.clone()),
            exact_hi: ex.map(|e| e.hi.clone()),
            exact_value: ex.and_then(|e| e.value.clone()),
            ..Row::default()
        });
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn from_csv(s: &str) -> Result<SpectrumReport, ReportError> {
    let mut rd = csv::Reader::from_reader(s.as_bytes());
    let mut meta = None;
    let (mut bands, mut gaps, mut closed) = (Vec::new(), Vec::new(), Vec::new());
    let missing = |what: &str, r: &Row| ReportError::Malformed(format!("{} row {} lacks {what}", r.record, r.index));
    for row in rd.deserialize::<Row>() {
        let r = row?;
        match r.record.as_str() {
            "meta" => {
                let b = r.status.clone().ok_or_else(|| missing("backend", &r))?;
                let backend: Backend = serde_json::from_value(serde_json::Value::String(b))?;
                meta = Some((r.index, backend));
            }
            "band" => bands.push(Band {
                index: r.index,
                lo: parse_num(&r.lo).ok_or_else(|| missing("lo", &r))?,
                hi: parse_num(&r.hi).ok_or_else(|| missing("hi", &r))?,
            }),
            "gap" => gaps.push(GapRecord {
                index: r.index,
                lo: parse_num(&r.lo).ok_or_else(|| missing("lo", &r))?,
                hi: parse_num(&r.hi).ok_or_else(|| missing("hi", &r))?,
                status: match r.status.as_deref() {
                    Some("open") => GapStatus::Open,
                    Some("closed") => GapStatus::Closed,
                    _ => return Err(missing("status", &r)),
                },
            }),
            "closed" => {
                let exact = match (&r.factor, &r.exact_lo, &r.exact_hi) {
                    (Some(f), Some(lo), Some(hi)) => Some(ExactEnergy {
                        factor: f.split(';').map(str::to_string).collect(),
                        lo: lo.clone(),
                        hi: hi.clone(),
                        value: r.exact_value.clone(),
                    }),
                    _ => None,
                };
                closed.push(ClosedGapCertificate {
                    energy: parse_num(&r.energy).ok_or_else(|| missing("energy", &r))?,
                    sign: r.sign.ok_or_else(|| missing("sign", &r))?,
                    residual: parse_num(&r.residual).ok_or_else(|| missing("residual", &r))?,
                    gap_index: r.index,
                    exact,
                })
            }
            other => return Err(ReportError::Malformed(format!("unknown record {other:?}"))),
        }
    }
    let (period, backend) = meta.ok_or_else(|| ReportError::Malformed("no meta row".into()))?;
    Ok(SpectrumReport { period, backend, bands, gaps, closed_gap_count: closed.len(), closed_gaps: closed })
}

/// Static band diagram: energy axis, one rectangle per band, and a diamond
/// with a dashed marker at each closed gap.
pub fn to_svg(report: &SpectrumReport) -> String {
    const W: f64 = 800.0;
    const H: f64 = 160.0;
    const PAD: f64 = 40.0;
    let edges = report.edges();
    let (lo, hi) = match (edges.first(), edges.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (-1.0, 1.0),
    };
    let margin = 0.05 * (hi - lo).max(1e-9);
    let (lo, hi) = (lo - margin, hi + margin);
    let x = |e: f64| PAD + (e - lo) / (hi - lo) * (W - 2.0 * PAD);
    let axis_y = H - PAD;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="20">period {} ({}), closed gaps: {}</text>"#,
        report.period,
        match report.backend {
            Backend::Exact => "exact",
            Backend::Float => "float",
        },
        report.closed_gap_count
    );
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{axis_y}" x2="{:.3}" y2="{axis_y}" stroke="black"/>"#,
        W - PAD
    );
    for (i, b) in report.bands.iter().enumerate() {
        let fill = if i % 2 == 0 { "#4a78b5" } else { "#7fa6d6" };
        let (x0, x1) = (x(b.lo), x(b.hi));
        let _ = writeln!(
            s,
            r#"<rect class="band" x="{x0:.3}" y="{:.3}" width="{:.3}" height="40" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
            axis_y - 60.0,
            (x1 - x0).max(0.5)
        );
    }
    for c in &report.closed_gaps {
        let cx = x(c.energy);
        let cy = axis_y - 40.0;
        let _ = writeln!(
            s,
            r##"<line x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{axis_y}" stroke="#c0392b" stroke-dasharray="3,2"/>"##,
            cy - 30.0
        );
        let _ = writeln!(
            s,
            r##"<path class="closed-gap" d="M {cx:.3} {:.3} L {:.3} {cy:.3} L {cx:.3} {:.3} L {:.3} {cy:.3} Z" fill="#c0392b"/>"##,
            cy - 7.0,
            cx + 7.0,
            cy + 7.0,
            cx - 7.0
        );
        let label = c.exact_value().map(str::to_string).unwrap_or_else(|| format!("{:.6}", c.energy));
        let _ = writeln!(s, r#"<text x="{cx:.3}" y="{:.3}" text-anchor="middle">{label}</text>"#, cy - 34.0);
    }
    for e in [edges.first(), edges.last()].into_iter().flatten() {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{e:.4}</text>"#,
            x(*e),
            axis_y + 16.0
        );
    }
    s.push_str("</svg>\n");
    s
}
