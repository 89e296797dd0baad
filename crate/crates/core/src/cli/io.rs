//! Plain-text series files.
//!
//! ```text
//! p 101
//! n 3
//! 0 1 100   # coefficients, index 0 first
//! ```
//!
//! `#` starts a comment running to the end of the line. Coefficients may
//! span several lines and are reduced modulo `p` on load.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ring::PrimeField;
use crate::series::Series;

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &line[s..i],
                        line: lineno + 1,
                        column: s + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
    }
    tokens
}

fn parse_err(tok: Option<&Token<'_>>, last_line: usize, message: impl Into<String>) -> Error {
    let (line, column) = tok.map_or((last_line, 1), |t| (t.line, t.column));
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_unsigned(tok: &Token<'_>) -> Result<u128> {
    if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(Some(tok), 0, format!("expected a decimal integer, found '{}'", tok.text)));
    }
    tok.text
        .parse::<u128>()
        .map_err(|_| parse_err(Some(tok), 0, "integer too large"))
}

/// Reads a decimal integer of any size (optionally negative) modulo p.
fn parse_coefficient(field: &PrimeField, tok: &Token<'_>) -> Result<u64> {
    let (neg, digits) = match tok.text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.text),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(Some(tok), 0, format!("expected a decimal coefficient, found '{}'", tok.text)));
    }
    let mut acc = 0u64;
    for b in digits.bytes() {
        acc = field.add(field.mul(acc, field.reduce(10)), field.reduce((b - b'0') as u64));
    }
    Ok(if neg { field.neg(acc) } else { acc })
}

pub fn parse_series_file(text: &str) -> Result<Series> {
    let tokens = tokenize(text);
    let last_line = text.lines().count().max(1);
    let mut it = tokens.iter().peekable();

    let mut header = |key: &str| -> Result<u128> {
        match it.next() {
            Some(t) if t.text == key => {}
            other => return Err(parse_err(other, last_line, format!("expected '{key}' header"))),
        }
        let value = it
            .next()
            .ok_or_else(|| parse_err(None, last_line, format!("missing value for '{key}'")))?;
        parse_unsigned(value)
    };
    let p = header("p")?;
    let n = header("n")?;
    let field = PrimeField::from_u128(p)?;
    let n = usize::try_from(n)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| parse_err(None, last_line, "length must be a positive integer"))?;

    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let tok = it.next().ok_or_else(|| {
            parse_err(None, last_line, format!("expected {n} coefficients, found {}", coeffs.len()))
        })?;
        coeffs.push(parse_coefficient(&field, tok)?);
    }
    if let Some(extra) = it.next() {
        return Err(parse_err(Some(extra), last_line, format!("more than {n} coefficients")));
    }
    Series::new(field, coeffs)
}

pub fn format_series_file(s: &Series) -> String {
    let mut out = String::new();
    writeln!(out, "p {}", s.field().modulus()).unwrap();
    writeln!(out, "n {}", s.len()).unwrap();
    let body: Vec<String> = s.coeffs().iter().map(u64::to_string).collect();
    out.push_str(&body.join(" "));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_direct() {
        let s = parse_series_file("p 101\nn 3\n0 1 100").unwrap();
        assert_eq!(s.field().modulus(), 101);
        assert_eq!(s.coeffs(), &[0, 1, 100]);
    }

    #[test]
    fn reduces_and_skips_comments() {
        let s = parse_series_file("# header\np 101 # prime\nn 3\n0 1\n102\n").unwrap();
        assert_eq!(s.coeffs(), &[0, 1, 1]);
        let big = parse_series_file("p 101\nn 2\n-1 100000000000000000000000000000001").unwrap();
        // 10^32 + 1 mod 101: 10^2 = -1, so 10^32 = 1
        assert_eq!(big.coeffs(), &[100, 2]);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(parse_series_file("p 100\nn 1\n0").unwrap_err(), Error::NotPrime(100));
        assert!(matches!(
            parse_series_file("p 18446744073709551629\nn 1\n0").unwrap_err(),
            Error::ModulusTooLarge(_)
        ));
    }

    #[test]
    fn reports_positions() {
        match parse_series_file("p 101\nn 3\n0 x 1").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 3)),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_series_file("p 101\nn 3\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_series_file("p 101\nn 1\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_series_file("n 1\np 101\n0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_series_file("p 101\nn 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn format_is_exact() {
        let s = parse_series_file("p 101\nn 3\n0 1 100").unwrap();
        assert_eq!(format_series_file(&s), "p 101\nn 3\n0 1 100\n");
    }
}
