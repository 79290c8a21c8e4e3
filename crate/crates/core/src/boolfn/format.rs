//! `bf:v1 n=<arity> tt=<hex>` lines. The hex string is the whole table read
//! as one integer, most significant digit first, so entry 0 is the low bit of
//! the last nibble. It always has `max(1, 2ⁿ/4)` digits.

use std::fmt;
use std::str::FromStr;

use super::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{expect_field, fields};

const MAGIC: &str = "bf:v1";

fn hex_digits(arity: usize) -> usize {
    if arity < 2 {
        1
    } else {
        1 << (arity - 2)
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{MAGIC} n={} tt=", self.arity)?;
        if self.arity >= 6 {
            for w in self.words.iter().rev() {
                write!(f, "{w:016x}")?;
            }
            Ok(())
        } else {
            write!(f, "{:0width$x}", self.words[0], width = hex_digits(self.arity))
        }
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<BooleanFunction> {
    let line = line.trim_end();
    let f = fields(line);
    match f.first() {
        Some(&(_, k, _)) if k == MAGIC => {}
        Some(&(col, k, _)) => {
            return Err(Error::parse(lineno, col, format!("expected `{MAGIC}`, found `{k}`")))
        }
        None => return Err(Error::parse(lineno, 1, "empty function line")),
    }
    let (col, n) = expect_field(&f, 1, "n", lineno)?;
    let arity: usize = n
        .parse()
        .map_err(|_| Error::parse(lineno, col + 2, format!("bad arity `{n}`")))?;
    if arity == 0 {
        return Err(Error::parse(lineno, col + 2, "arity 0 is not supported"));
    }
    if arity > BooleanFunction::MAX_ARITY {
        return Err(Error::parse(
            lineno,
            col + 2,
            format!("arity {arity} exceeds the maximum of {}", BooleanFunction::MAX_ARITY),
        ));
    }
    let (col, tt) = expect_field(&f, 2, "tt", lineno)?;
    let tt_col = col + 3;
    if let Some(&(col, k, _)) = f.get(3) {
        return Err(Error::parse(lineno, col, format!("unexpected field `{k}`")));
    }
    let digits = hex_digits(arity);
    if tt.len() != digits {
        return Err(Error::parse(
            lineno,
            tt_col,
            format!("expected {digits} hex digits for arity {arity}, found {}", tt.len()),
        ));
    }
    if let Some(pos) = tt.find(|c: char| !c.is_ascii_hexdigit()) {
        return Err(Error::parse(lineno, tt_col + pos, "invalid hex digit"));
    }
    let mut words = Vec::new();
    let bytes = tt.as_bytes();
    let mut end = bytes.len();
    while end > 0 {
        let start = end.saturating_sub(16);
        let chunk = std::str::from_utf8(&bytes[start..end]).expect("ascii");
        words.push(u64::from_str_radix(chunk, 16).expect("validated hex"));
        end = start;
    }
    BooleanFunction::from_words(arity, words)
        .map_err(|_| Error::parse(lineno, tt_col, "table has bits beyond 2^n entries"))
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_line(s, 1)
    }
}

/// Parses every function in a file, skipping blank lines and `#` comments.
pub fn parse_functions(text: &str) -> Result<Vec<BooleanFunction>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_line(l, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Family;
    use proptest::prelude::*;

    #[test]
    fn known_lines() {
        let and2 = Family::And2.build().unwrap();
        assert_eq!(and2.to_string(), "bf:v1 n=2 tt=8");
        let sort = Family::Sort.build().unwrap();
        assert_eq!(sort.to_string(), "bf:v1 n=4 tt=d18b");
        let id = BooleanFunction::from_fn(1, |x| x == 1).unwrap();
        assert_eq!(id.to_string(), "bf:v1 n=1 tt=2");
        assert_eq!("bf:v1 n=4 tt=d18b".parse::<BooleanFunction>().unwrap(), sort);
    }

    #[test]
    fn parse_errors_have_positions() {
        let cases = [
            ("bf:v2 n=2 tt=8", 1),
            ("bf:v1 n=x tt=8", 9),
            ("bf:v1 n=0 tt=1", 9),
            ("bf:v1 n=2 tt=88", 14),
            ("bf:v1 n=4 tt=81g1", 16),
            ("bf:v1 n=1 tt=4", 14),
            ("bf:v1 n=2 tt=8 extra=1", 16),
        ];
        for (line, column) in cases {
            match line.parse::<BooleanFunction>() {
                Err(Error::Parse { column: c, .. }) => assert_eq!(c, column, "{line}"),
                other => panic!("{line}: {other:?}"),
            }
        }
        let text = "# corpus\nbf:v1 n=2 tt=8\n\nbf:v1 n=2 tt=zz\n";
        match parse_functions(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn large_round_trip() {
        let h = Family::AppendixH { k: 1 }.build().unwrap();
        let s = h.to_string();
        assert_eq!(s.len(), "bf:v1 n=12 tt=".len() + 1024);
        assert_eq!(s.parse::<BooleanFunction>().unwrap(), h);
    }

    proptest! {
        #[test]
        fn round_trip(arity in 1usize..=10, seed in any::<u64>()) {
            let f = BooleanFunction::from_fn(arity, |x| {
                (x.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed).count_ones() % 2 == 1
            }).unwrap();
            let back: BooleanFunction = f.to_string().parse().unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
