//! Complex literals of the form `a+bi`, `a-bi`, `a` or `bi`.

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("'{s}' is not a complex literal of the form a+bi");
    let real = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite());
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return real(&t).map(|re| Complex64::new(re, 0.0)).ok_or_else(bad);
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    match (real(re), real(im)) {
        (Some(a), Some(b)) => Ok(Complex64::new(a, b)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_complex("1+0i").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("0.5-2i").unwrap(), Complex64::new(0.5, -2.0));
        assert_eq!(parse_complex("-1e-3+2.5e1i").unwrap(), Complex64::new(-1e-3, 25.0));
        assert_eq!(parse_complex("1.5e-2").unwrap(), Complex64::new(0.015, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("nan+0i").is_err());
    }
}
