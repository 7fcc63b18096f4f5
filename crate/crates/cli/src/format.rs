//! Number formatting and plain-text tables.

use std::io::{self, Write};

use serde_json::{Number, Value};

/// Formats a real with 12 significant digits in the style of C's `%.12g`:
/// fixed notation for exponents in [-4, 12), scientific otherwise, trailing
/// zeros removed.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A JSON number carrying exactly the value [`fmt_real`] prints.
pub fn json_real(v: f64) -> Value {
    let rounded: f64 = fmt_real(v).parse().unwrap_or(v);
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn json_opt_real(v: Option<f64>) -> Value {
    v.map_or(Value::Null, json_real)
}

/// Right-aligned columns separated by two spaces.
pub fn write_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&mut header.iter().copied()))?;
    for row in rows {
        writeln!(out, "{}", line(&mut row.iter().map(String::as_str)))?;
    }
    Ok(())
}

/// `key  value` lines with the keys padded to a common width.
pub fn write_pairs(out: &mut dyn Write, pairs: &[(&str, String)]) -> io::Result<()> {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in pairs {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(1.625), "1.625");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(0.1 + 0.2), "0.3");
        assert_eq!(fmt_real(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_real(123456.7890123456), "123456.789012");
        assert_eq!(fmt_real(1e-5), "1e-5");
        assert_eq!(fmt_real(0.0001), "0.0001");
        assert_eq!(fmt_real(1.5e12), "1.5e12");
        assert_eq!(fmt_real(999999999999.6), "1e12");
        assert_eq!(fmt_real(9.9999999999996), "10");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(f64::INFINITY), "inf");
    }

    #[test]
    fn json_reals_match_text() {
        assert_eq!(json_real(2.0 / 3.0).to_string(), "0.666666666667");
        assert_eq!(json_real(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(json_real(f64::NAN), Value::Null);
    }

    #[test]
    fn table_alignment() {
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            &["i", "value"],
            &[
                vec!["0".into(), "1.5".into()],
                vec!["10".into(), "2".into()],
            ],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            " i  value\n 0    1.5\n10      2\n"
        );
    }
}
