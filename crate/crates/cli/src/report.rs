//! Plain-text reports, CSV tables and number formatting.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::CliError;

/// Twelve significant digits, `inf` for infinities, trailing zeros cut.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let dec = (11 - exp).max(0) as usize;
        let s = format!("{v:.dec$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (m, e) = s.split_once('e').expect("exponent");
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        format!("{m}e{e}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub scene_hash: Option<String>,
    pub tolerances: BTreeMap<String, String>,
    pub rows: Vec<(String, String)>,
    pub tables: Vec<(String, Vec<String>, Vec<Vec<String>>)>,
    pub verdict: Option<bool>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn tol(&mut self, k: &str, v: f64) -> &mut Self {
        self.tolerances.insert(k.into(), num(v));
        self
    }

    pub fn row(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.rows.push((k.into(), v.to_string()));
        self
    }

    pub fn val(&mut self, k: &str, v: f64) -> &mut Self {
        self.row(k, num(v))
    }

    pub fn table(&mut self, title: &str, header: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.tables.push((title.into(), header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    pub fn verdict(&mut self, pass: bool) -> &mut Self {
        self.verdict = Some(pass);
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(h) = &self.scene_hash {
            let _ = writeln!(s, "scene-sha256: {h}");
        }
        for (k, v) in &self.tolerances {
            let _ = writeln!(s, "tol.{k}: {v}");
        }
        for (k, v) in &self.rows {
            let _ = writeln!(s, "{k}: {v}");
        }
        for (title, header, rows) in &self.tables {
            let _ = writeln!(s, "[{title}]");
            let _ = writeln!(s, "{}", header.join("\t"));
            for r in rows {
                let _ = writeln!(s, "{}", r.join("\t"));
            }
        }
        if let Some(v) = self.verdict {
            let _ = writeln!(s, "verdict: {}", if v { "PASS" } else { "FAIL" });
        }
        s
    }
}

/// CSV with a header row of point names and one row per point.
pub fn matrix_csv(names: &[String], m: &[Vec<f64>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec![String::new()];
    head.extend(names.iter().cloned());
    w.write_record(&head).map_err(|e| CliError::Io(e.to_string()))?;
    for (n, row) in names.iter().zip(m) {
        let mut rec = vec![n.clone()];
        rec.extend(row.iter().map(|v| num(*v)));
        w.write_record(&rec).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(2f64.sqrt()), "1.41421356237");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(12.5), "12.5");
        assert_eq!(num(1e-9), "1e-9");
        assert_eq!(num(-0.25), "-0.25");
        assert_eq!(num(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn csv_layout() {
        let s = matrix_csv(&["a".into(), "b".into()], &[vec![0.0, 1.5], vec![1.5, 0.0]]).unwrap();
        assert_eq!(s, ",a,b\na,0,1.5\nb,1.5,0\n");
    }
}
