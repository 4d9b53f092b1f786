//! Fixed float formatting for reproducible output: 17 significant digits in
//! JSON, 12 in CSV.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// `x` with `digits` significant digits, positional when the exponent is
/// moderate and scientific otherwise; trailing zeros are dropped.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim(mant), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim(&format!("{:.*}", decimals, x)).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        let text = fmt_sig(value, 17);
        // Keep integral values recognisable as floats.
        if text.contains(['.', 'e']) {
            writer.write_all(text.as_bytes())
        } else {
            write!(writer, "{text}.0")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with every float written to 17 significant digits.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, SigFormatter);
    value.serialize(&mut ser).expect("serializable value");
    String::from_utf8(out).expect("utf-8 output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(fmt_sig(-0.75, 12), "-0.75");
        assert_eq!(fmt_sig(1e-9, 12), "1e-9");
        assert_eq!(fmt_sig(123456.0, 12), "123456");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(2.5e15, 12), "2.5e15");
    }

    #[test]
    fn json_floats() {
        let v = serde_json::json!({"x": 0.1, "y": [1.0, -2.5], "n": 3});
        let s = to_json_string(&v);
        assert_eq!(s, r#"{"n":3,"x":0.10000000000000001,"y":[1.0,-2.5]}"#);
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }
}
