//! Number formatting, sample ranges and CSV assembly.

use std::fmt::Write as _;
use std::str::FromStr;

/// `v` to 6 significant digits, `%g`-style: fixed notation for moderate
/// exponents, scientific otherwise, trailing zeros dropped.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    // round first so that e.g. 999999.7 picks the exponent of 1e6
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to the 6 digits it would print with.
pub fn round6(v: f64) -> f64 {
    sig6(v).parse().unwrap_or(v)
}

/// Inclusive `start:stop:step` sample range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn samples(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step * (1.0 + 1e-12)).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected start:stop:step, got '{s}'"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{t}' is not a finite number"))
        };
        let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
        if stop < start {
            return Err(format!("empty range: stop {stop} is below start {start}"));
        }
        if step <= 0.0 {
            return Err(format!("step must be positive, got {step}"));
        }
        Ok(Range { start, stop, step })
    }
}

/// Comma-separated values as text; every number goes through [`sig6`].
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut csv = Csv::default();
        csv.line(header.iter().map(|h| h.as_ref().to_string()));
        csv
    }

    pub fn row(&mut self, values: &[f64]) {
        self.line(values.iter().map(|&v| sig6(v)));
    }

    pub fn line(&mut self, fields: impl IntoIterator<Item = String>) {
        let fields: Vec<String> = fields.into_iter().collect();
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}
