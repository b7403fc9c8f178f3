//! CSV emission: `,` separator, LF line ends, floats with 17 significant
//! digits so every value parses back to the same `f64`.

use std::fmt::Write as _;

/// Formats a float as `d.dddddddddddddddde±x`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    text: String,
    rows: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text, rows: 0 }
    }

    pub fn row(&mut self, cells: &[String]) {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            let _ = write!(self.text, "{cell}");
        }
        self.text.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -25.0, std::f64::consts::PI, 1e-300, 123456.789e10] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.row(&["1".into(), float(0.5)]);
        assert_eq!(t.rows(), 1);
        assert_eq!(t.into_string(), "a,b\n1,5.0000000000000000e-1\n");
    }
}
