//! CSV tables with `#` metadata lines.

use std::io::Write;

/// Every command's result: a table, metadata lines and a human-readable report.
#[derive(Debug, Clone)]
pub struct Output {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    /// Extra `# key: value` lines after the standard ones.
    pub meta: Vec<(String, String)>,
    /// Lines printed to stderr.
    pub report: Vec<String>,
    /// Low-confidence result: written, but the process exits with code 4.
    pub flagged: bool,
}

impl Output {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new(), meta: Vec::new(), report: Vec::new(), flagged: false }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn write_csv(&self, w: &mut impl Write, standard_meta: &[(&str, String)]) -> std::io::Result<()> {
        for (k, v) in standard_meta {
            writeln!(w, "# {k}: {v}")?;
        }
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

pub const SIGNIFICANT_DIGITS: usize = 12;

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 12 significant digits, positional for exponents in [−5, 12), scientific otherwise.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&e) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - e).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{e}", trim_zeros(mantissa))
    }
}

pub fn bits(nats: f64) -> String {
    num(nats / std::f64::consts::LN_2)
}

pub fn int(x: impl std::fmt::Display) -> String {
    x.to_string()
}

pub fn blank() -> String {
    String::new()
}
