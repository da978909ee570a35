//! Hypersurface files: a header line `M=<int> field=Q|Fp:<p>` followed by the
//! polynomial text. Lines starting with `#` are comments.

use crate::error::{Error, Result};
use crate::expansion::ProjectivePoint;
use crate::field::{Field, PrimeField, Rationals};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Hypersurface {
    Rational(Polynomial<Rationals>),
    Prime(Polynomial<PrimeField>),
}

impl Hypersurface {
    pub fn m(&self) -> usize {
        match self {
            Hypersurface::Rational(f) => f.nvars() - 1,
            Hypersurface::Prime(f) => f.nvars() - 1,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Hypersurface::Rational(_) => FieldSpec::Rationals,
            Hypersurface::Prime(f) => FieldSpec::Prime(f.field().modulus()),
        }
    }
}

fn header_error(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

pub fn parse_header(line: &str) -> Result<(usize, FieldSpec)> {
    let mut m = None;
    let mut field = None;
    for part in line.split_whitespace() {
        let (key, value) = part.split_once('=').ok_or_else(|| header_error(format!("expected key=value, got {part:?}")))?;
        match key {
            "M" => m = Some(value.parse::<usize>().map_err(|_| header_error(format!("bad M {value:?}")))?),
            "field" => {
                field = Some(match value {
                    "Q" => FieldSpec::Rationals,
                    v => {
                        let p = v
                            .strip_prefix("Fp:")
                            .and_then(|p| p.parse::<u64>().ok())
                            .ok_or_else(|| header_error(format!("field must be Q or Fp:<p>, got {v:?}")))?;
                        PrimeField::new(p)?;
                        FieldSpec::Prime(p)
                    }
                })
            }
            other => return Err(header_error(format!("unknown header key {other:?}"))),
        }
    }
    match (m, field) {
        (Some(m), Some(field)) => Ok((m, field)),
        _ => Err(header_error("header must give M=<int> and field=Q|Fp:<p>")),
    }
}

fn check_form<F: Field>(f: Polynomial<F>, m: usize) -> Result<Polynomial<F>> {
    if f.is_zero() || !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if f.degree() != m as i64 {
        return Err(Error::InvalidArgument(format!("header says M = {m} but the form has degree {}", f.degree())));
    }
    Ok(f)
}

/// Parses a whole hypersurface file; polynomial parse positions are byte
/// offsets into the file.
pub fn parse_hypersurface(text: &str) -> Result<Hypersurface> {
    let mut offset = 0;
    let mut header = None;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        offset += line.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        header = Some(parse_header(trimmed)?);
        break;
    }
    let (m, field) = header.ok_or_else(|| header_error("missing header line"))?;
    if m < 1 {
        return Err(header_error("M must be positive"));
    }
    let body: String = text[offset..]
        .split_inclusive('\n')
        .map(|l| if l.trim_start().starts_with('#') { " ".repeat(l.len()) } else { l.replace('\n', " ") })
        .collect();
    let shift = |e: Error| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
        other => other,
    };
    match field {
        FieldSpec::Rationals => {
            let f = Polynomial::parse(&Rationals, m + 1, &body).map_err(shift)?;
            Ok(Hypersurface::Rational(check_form(f, m)?))
        }
        FieldSpec::Prime(p) => {
            let f = Polynomial::parse(&PrimeField::new(p)?, m + 1, &body).map_err(shift)?;
            Ok(Hypersurface::Prime(check_form(f, m)?))
        }
    }
}

/// Parses `a0:a1:…:aM`, optionally in parentheses; entries are integers or
/// fractions `n/d`.
pub fn parse_point<F: Field>(field: &F, nvars: usize, text: &str) -> Result<ProjectivePoint<F>> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(':').map(str::trim).collect();
    if parts.len() != nvars {
        return Err(Error::LengthMismatch { expected: nvars, got: parts.len() });
    }
    let mut coords = Vec::with_capacity(nvars);
    let mut pos = 0;
    for part in parts {
        let bad = || Error::Parse { pos, msg: format!("bad coordinate {part:?}") };
        let (num, den) = match part.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (part, "1"),
        };
        let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
        let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
        coords.push(field.from_fraction(&num, &den).ok_or_else(bad)?);
        pos += part.len() + 1;
    }
    ProjectivePoint::new(field, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_forms() {
        assert_eq!(parse_header("M=5 field=Q").unwrap(), (5, FieldSpec::Rationals));
        assert_eq!(parse_header("field=Fp:11  M=6").unwrap(), (6, FieldSpec::Prime(11)));
        assert!(parse_header("M=5").is_err());
        assert!(parse_header("M=5 field=Fp:9").is_err());
        assert!(parse_header("M=5 field=R").is_err());
        assert!(parse_header("M=x field=Q").is_err());
    }

    #[test]
    fn parses_files() {
        let text = "# Fermat\nM=5 field=Fp:11\nx0^5 + x1^5 + x2^5\n# tail\n + x3^5 + x4^5 + x5^5\n";
        let h = parse_hypersurface(text).unwrap();
        assert_eq!(h.m(), 5);
        assert_eq!(h.field(), FieldSpec::Prime(11));
        match h {
            Hypersurface::Prime(f) => assert_eq!(f.num_terms(), 6),
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_hypersurface("M=5 field=Q\nx0^4*x1 + x2^5 + ) "), Err(Error::Parse { .. })));
        match parse_hypersurface("M=5 field=Q\nx0^5 + @") {
            Err(Error::Parse { pos, .. }) => assert!(pos >= 12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_hypersurface("M=5 field=Q\nx0^4 + x1^4"), Err(Error::InvalidArgument(_))));
        assert!(matches!(parse_hypersurface("M=5 field=Q\nx0^5 + x1^4"), Err(Error::NotHomogeneous)));
        assert!(parse_hypersurface("").is_err());
    }

    #[test]
    fn points() {
        let o = parse_point(&Rationals, 3, "(1:-1/2:0)").unwrap();
        assert_eq!(o.coords()[1], Rationals.from_fraction(&(-1).into(), &2.into()).unwrap());
        let k = PrimeField::new(7).unwrap();
        assert_eq!(parse_point(&k, 3, "1:-1:1/2").unwrap().coords(), &[1, 6, 4]);
        assert!(parse_point(&k, 3, "1:0").is_err());
        assert!(parse_point(&k, 3, "0:0:0").is_err());
        assert!(parse_point(&k, 3, "1:x:0").is_err());
    }
}
