use num_complex::Complex64;

use crate::error::{CheeseError, Result};

fn number(s: &str, whole: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| CheeseError::Parse(format!("malformed complex literal {whole:?}")))?;
    if !v.is_finite() {
        return Err(CheeseError::Parse(format!("non-finite complex literal {whole:?}")));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`, each part in decimal or scientific
/// notation. `i` alone and `-i` are accepted.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CheeseError::Parse("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(number(&s, text)?, 0.0));
    };
    // the sign that starts the imaginary part, skipping exponent signs
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => number(other, text)?,
    };
    let re = if re.is_empty() { 0.0 } else { number(re, text)? };
    Ok(Complex64::new(re, im))
}
