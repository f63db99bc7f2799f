//! Deterministic serialization: floats at 17 significant digits, JSON with
//! fixed key order, CSV with fixed columns, self-contained SVG log-log plots,
//! and content hashing for the run manifest. Two runs of the same config must
//! produce byte-identical files, so nothing here consults the clock, the
//! locale, or map iteration order.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

/// Fixed 17-significant-digit scientific rendering; round-trips every finite f64.
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "refusing to serialize non-finite value");
    format!("{:.16e}", x)
}

/// Minimal JSON emitter with caller-controlled key order.
pub struct JsonWriter {
    buf: String,
    stack: Vec<bool>, // per open scope: has at least one element been written
}

impl JsonWriter {
    pub fn new() -> Self {
        JsonWriter { buf: String::new(), stack: Vec::new() }
    }

    fn comma(&mut self) {
        if let Some(started) = self.stack.last_mut() {
            if *started {
                self.buf.push(',');
            }
            *started = true;
        }
    }

    pub fn begin_object(&mut self) -> &mut Self {
        self.comma();
        self.buf.push('{');
        self.stack.push(false);
        self
    }

    pub fn end_object(&mut self) -> &mut Self {
        self.stack.pop();
        self.buf.push('}');
        self
    }

    pub fn begin_array(&mut self) -> &mut Self {
        self.comma();
        self.buf.push('[');
        self.stack.push(false);
        self
    }

    pub fn end_array(&mut self) -> &mut Self {
        self.stack.pop();
        self.buf.push(']');
        self
    }

    pub fn key(&mut self, k: &str) -> &mut Self {
        self.comma();
        write!(self.buf, "{}:", json_string(k)).unwrap();
        // the value that follows must not emit another comma
        if let Some(started) = self.stack.last_mut() {
            *started = false;
        }
        self
    }

    pub fn value_f64(&mut self, v: f64) -> &mut Self {
        self.comma();
        write!(self.buf, "{}", json_f64(v)).unwrap();
        self
    }

    pub fn value_u64(&mut self, v: u64) -> &mut Self {
        self.comma();
        write!(self.buf, "{v}").unwrap();
        self
    }

    pub fn value_bool(&mut self, v: bool) -> &mut Self {
        self.comma();
        write!(self.buf, "{v}").unwrap();
        self
    }

    pub fn value_str(&mut self, v: &str) -> &mut Self {
        self.comma();
        write!(self.buf, "{}", json_string(v)).unwrap();
        self
    }

    pub fn field_f64(&mut self, k: &str, v: f64) -> &mut Self {
        self.key(k).value_f64(v)
    }

    pub fn field_u64(&mut self, k: &str, v: u64) -> &mut Self {
        self.key(k).value_u64(v)
    }

    pub fn field_bool(&mut self, k: &str, v: bool) -> &mut Self {
        self.key(k).value_bool(v)
    }

    pub fn field_str(&mut self, k: &str, v: &str) -> &mut Self {
        self.key(k).value_str(v)
    }

    pub fn finish(mut self) -> String {
        self.buf.push('\n');
        self.buf
    }
}

/// JSON number rendering: finite floats at 17 significant digits.
pub fn json_f64(v: f64) -> String {
    fmt_f64(v)
}

pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// CSV table with a fixed header; all numeric cells at 17 significant digits.
pub struct CsvWriter {
    buf: String,
    columns: usize,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        CsvWriter { buf, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[f64]) {
        assert_eq!(cells.len(), self.columns, "csv row width mismatch");
        let rendered: Vec<String> = cells.iter().map(|&c| fmt_f64(c)).collect();
        self.buf.push_str(&rendered.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

/// One data series of a log-log plot.
pub struct SvgSeries<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

/// Self-contained SVG log-log scatter/line plot. Points with non-positive
/// coordinates are skipped (they have no logarithm to plot).
pub fn svg_loglog(title: &str, xlabel: &str, ylabel: &str, series: &[SvgSeries]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in series {
        for &(x, y) in s.points {
            if x > 0.0 && y > 0.0 {
                pts.push((x.log10(), y.log10()));
            }
        }
    }
    let (mut x0, mut x1, mut y0, mut y1) = (-1.0, 1.0, -1.0, 1.0);
    if !pts.is_empty() {
        x0 = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        x1 = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if x1 - x0 < 1e-9 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-9 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let padx = 0.05 * (x1 - x0);
        let pady = 0.08 * (y1 - y0);
        x0 -= padx;
        x1 += padx;
        y0 -= pady;
        y1 += pady;
    }
    let sx = |lx: f64| ML + (lx - x0) / (x1 - x0) * (W - ML - MR);
    let sy = |ly: f64| H - MB - (ly - y0) / (y1 - y0) * (H - MB - MT);

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    )
    .unwrap();
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    write!(
        svg,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"monospace\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        xml_escape(title)
    )
    .unwrap();
    // axes
    write!(
        svg,
        "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB
    )
    .unwrap();
    write!(svg, "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>\n", H - MB)
        .unwrap();
    // decade ticks
    let mut dec = x0.ceil() as i64;
    while (dec as f64) <= x1 {
        let px = sx(dec as f64);
        write!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n<text x=\"{px:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">1e{dec}</text>\n",
            H - MB,
            H - MB + 5.0,
            H - MB + 18.0
        )
        .unwrap();
        dec += 1;
    }
    let mut dec = y0.ceil() as i64;
    while (dec as f64) <= y1 {
        let py = sy(dec as f64);
        write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{ML}\" y2=\"{py:.1}\" stroke=\"black\"/>\n<text x=\"{:.1}\" y=\"{py:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">1e{dec}</text>\n",
            ML - 5.0,
            ML - 8.0
        )
        .unwrap();
        dec += 1;
    }
    write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        ML + (W - ML - MR) / 2.0,
        H - 12.0,
        xml_escape(xlabel)
    )
    .unwrap();
    write!(
        svg,
        "<text x=\"16\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        MT + (H - MB - MT) / 2.0,
        MT + (H - MB - MT) / 2.0,
        xml_escape(ylabel)
    )
    .unwrap();
    for (i, s) in series.iter().enumerate() {
        let color = palette[i % palette.len()];
        let mut path = String::new();
        for (m, &(x, y)) in s.points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).enumerate() {
            let (px, py) = (sx(x.log10()), sy(y.log10()));
            write!(path, "{}{px:.2},{py:.2}", if m == 0 { "M" } else { " L" }).unwrap();
            write!(svg, "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\"/>\n").unwrap();
        }
        write!(svg, "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n")
            .unwrap();
        write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - MR - 180.0,
            MT + 16.0 * (i as f64 + 1.0),
            xml_escape(s.label)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
