//! Truth-table files.
//!
//! ```text
//! n=3
//! 96
//! ```
//!
//! Line 1 is `n=<int>`. Line 2 holds `ceil(2^n / 4)` lowercase hex digits of
//! the integer `Σ f(i) 2^i`, most significant digit first and zero-padded, so
//! the last digit carries points 0..=3 with point 0 in its lowest bit. Points
//! are read as little-endian integers (coordinate 1 is bit 0). The example
//! is `x1 + x2 + x3`. Parsing also accepts uppercase digits and a missing
//! final newline; writing always produces the canonical form.

use linvar_core::boolfn::BooleanFunction;
use linvar_core::f2::MAX_AMBIENT_DIM;

use crate::error::{CliError, Result};

fn digits_for(n: usize) -> usize {
    ((1usize << n) + 3) / 4
}

pub fn write_table(f: &BooleanFunction) -> String {
    let n = f.n();
    let digits = digits_for(n);
    let mut hex = String::with_capacity(digits + 8);
    for j in (0..digits).rev() {
        let nibble = (0..4u64)
            .map(|b| 4 * j as u64 + b)
            .filter(|x| *x < f.size() as u64 && f.get(*x))
            .fold(0u32, |acc, x| acc | 1 << (x % 4));
        hex.push(char::from_digit(nibble, 16).expect("nibble"));
    }
    format!("n={n}\n{hex}\n")
}

pub fn parse_table(text: &str) -> Result<BooleanFunction> {
    let bad = |msg: String| CliError::Input(format!("truth table: {msg}"));
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines: Vec<&str> = body.split('\n').collect();
    if lines.len() != 2 {
        return Err(bad(format!("expected 2 lines, found {}", lines.len())));
    }
    let n: usize = lines[0]
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("first line must be n=<int>, got {:?}", lines[0])))?;
    if n > MAX_AMBIENT_DIM {
        return Err(linvar_core::Error::TooLarge { dim: n, max: MAX_AMBIENT_DIM }.into());
    }
    let hex = lines[1];
    let digits = digits_for(n);
    if hex.chars().count() != digits {
        return Err(bad(format!("expected {digits} hex digits for n={n}, found {}", hex.chars().count())));
    }
    let mut f = BooleanFunction::zeros(n)?;
    for (pos, c) in hex.chars().enumerate() {
        let nibble = c.to_digit(16).ok_or_else(|| bad(format!("invalid hex digit {c:?} at position {}", pos + 1)))?;
        let j = digits - 1 - pos;
        for b in 0..4u64 {
            if (nibble >> b) & 1 == 1 {
                let x = 4 * j as u64 + b;
                if x >= f.size() as u64 {
                    return Err(bad(format!("digit {c:?} sets points beyond 2^{n}")));
                }
                f.set(x, true);
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example() {
        let f = parse_table("n=3\n96\n").unwrap();
        for x in 0u64..8 {
            assert_eq!(f.get(x), x.count_ones() % 2 == 1);
        }
        assert_eq!(write_table(&f), "n=3\n96\n");
    }

    #[test]
    fn tiny_dimensions() {
        assert_eq!(write_table(&BooleanFunction::constant(0, true).unwrap()), "n=0\n1\n");
        assert_eq!(write_table(&BooleanFunction::constant(1, true).unwrap()), "n=1\n3\n");
        assert!(parse_table("n=1\n4\n").is_err());
        assert!(parse_table("n=0\n2").is_err());
    }

    #[test]
    fn lenient_input() {
        let f = parse_table("n=4\nBEEF").unwrap();
        assert_eq!(write_table(&f), "n=4\nbeef\n");
    }

    #[test]
    fn malformed() {
        assert!(parse_table("n=3\n9\n").is_err());
        assert!(parse_table("m=3\n96\n").is_err());
        assert!(parse_table("n=3\n9g\n").is_err());
        assert!(parse_table("n=3\n96\n\n").is_err());
        assert!(parse_table("n=30\n0\n").is_err());
    }
}
