use std::collections::BTreeSet;

use linvar_core::boolfn::{anf_monomials, from_monomials, BooleanFunction};
use linvar_core::f2::MAX_AMBIENT_DIM;

use crate::error::{CliError, Result};

/// Tokens with their 1-based character offset in the input.
#[derive(Debug, PartialEq)]
enum Token {
    One,
    Var(usize),
    Plus,
    Times,
}

fn syntax(pos: usize, msg: &str) -> CliError {
    CliError::Input(format!("ANF syntax error at position {pos}: {msg}"))
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let pos = i + 1;
        match chars[i] {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((pos, Token::Plus));
                i += 1;
            }
            '*' => {
                out.push((pos, Token::Times));
                i += 1;
            }
            '1' => {
                out.push((pos, Token::One));
                i += 1;
            }
            'x' | 'X' => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(syntax(pos, "expected a variable index after 'x'"));
                }
                let digits: String = chars[start..end].iter().collect();
                let index = digits.parse().map_err(|_| syntax(pos, "variable index too large"))?;
                out.push((pos, Token::Var(index)));
                i = end;
            }
            c => return Err(syntax(pos, &format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

/// Parses a sum of monomials such as `x1*x2 + x3 + 1` into a function of `n` variables.
///
/// Repeated monomials cancel and repeated factors are idempotent. A lone `0`
/// is the zero function, matching what [`format_anf`] prints.
pub fn parse_anf(text: &str, n: usize) -> Result<BooleanFunction> {
    if n > MAX_AMBIENT_DIM {
        return Err(linvar_core::Error::TooLarge { dim: n, max: MAX_AMBIENT_DIM }.into());
    }
    if text.trim() == "0" {
        return Ok(BooleanFunction::zeros(n)?);
    }
    let tokens = tokenize(text)?;
    let end = text.chars().count() + 1;
    if tokens.is_empty() {
        return Err(syntax(end, "empty expression"));
    }
    let mut monomials: BTreeSet<u64> = BTreeSet::new();
    let mut iter = tokens.into_iter().peekable();
    loop {
        let mut mask = 0u64;
        loop {
            match iter.next() {
                Some((_, Token::One)) => {}
                Some((pos, Token::Var(i))) => {
                    if i == 0 || i > n {
                        return Err(CliError::Input(format!(
                            "variable x{i} at position {pos} is out of range 1..={n}"
                        )));
                    }
                    mask |= 1 << (i - 1);
                }
                Some((pos, _)) => return Err(syntax(pos, "expected '1' or a variable")),
                None => return Err(syntax(end, "expected '1' or a variable")),
            }
            match iter.peek() {
                Some((_, Token::Times)) => {
                    iter.next();
                }
                _ => break,
            }
        }
        if !monomials.remove(&mask) {
            monomials.insert(mask);
        }
        match iter.next() {
            None => break,
            Some((_, Token::Plus)) => {}
            Some((pos, _)) => return Err(syntax(pos, "expected '+' or '*'")),
        }
    }
    let monomials: Vec<u64> = monomials.into_iter().collect();
    Ok(from_monomials(n, &monomials)?)
}

/// The algebraic normal form of `f` in the syntax accepted by [`parse_anf`]; `0` when empty.
pub fn format_anf(f: &BooleanFunction) -> String {
    let terms: Vec<String> = anf_monomials(f)
        .into_iter()
        .map(|m| {
            if m == 0 {
                return "1".to_string();
            }
            (0..64)
                .filter(|i| (m >> i) & 1 == 1)
                .map(|i| format!("x{}", i + 1))
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f = parse_anf("x1*x2 + x3", 3).unwrap();
        assert!(f.get(0b011));
        assert!(f.get(0b100));
        assert!(!f.get(0b111));
        assert_eq!(parse_anf("1", 2).unwrap(), BooleanFunction::constant(2, true).unwrap());
    }

    #[test]
    fn whitespace_and_cancellation() {
        let a = parse_anf(" x1 *x2+x2 + x2 ", 2).unwrap();
        assert_eq!(a, parse_anf("x1*x2", 2).unwrap());
        assert_eq!(parse_anf("x1*x1", 2).unwrap(), parse_anf("x1", 2).unwrap());
        assert_eq!(parse_anf("1 + 1", 3).unwrap(), BooleanFunction::zeros(3).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_anf("x1 + + x2", 2).unwrap_err().to_string();
        assert!(e.contains("position 6"), "{e}");
        let e = parse_anf("x1*y", 2).unwrap_err().to_string();
        assert!(e.contains("position 4"), "{e}");
        assert!(parse_anf("x3", 2).unwrap_err().to_string().contains("out of range"));
        assert!(parse_anf("x0", 2).is_err());
        assert!(parse_anf("", 2).is_err());
        assert!(parse_anf("x1 +", 2).is_err());
        assert!(parse_anf("x", 2).is_err());
    }

    #[test]
    fn formatting_round_trips() {
        let f = parse_anf("1 + x2 + x1*x3", 3).unwrap();
        assert_eq!(format_anf(&f), "1 + x2 + x1*x3");
        assert_eq!(format_anf(&BooleanFunction::zeros(2).unwrap()), "0");
    }
}
