//! JSON output with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON, one document, trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(
            to_json(&[0.1, -2.0, 1e-300]),
            "[1.0000000000000001e-1,-2.0000000000000000e0,1.0000000000000000e-300]\n"
        );
        let back: Vec<f64> = serde_json::from_str(&to_json(&[0.1, std::f64::consts::PI])).unwrap();
        assert_eq!(back, vec![0.1, std::f64::consts::PI]);
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_json(&f64::NAN), "null\n");
    }
}
