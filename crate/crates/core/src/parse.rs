//! Text syntax for polynomials: `3*x0^2*x4 - x1*x2^4 + 7`, `-1/2*x3`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }
}

pub fn parse_polynomial<F: Field>(field: &F, nvars: usize, text: &str) -> Result<Polynomial<F>> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let mut terms: Vec<(Monomial, F::Elem)> = Vec::new();
    if cur.peek().is_none() {
        return cur.err("empty polynomial");
    }
    let mut first = true;
    loop {
        let mut negative = false;
        match cur.peek() {
            Some(b'+') if !first => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                negative = true;
            }
            None => break,
            Some(_) if first => {}
            Some(c) => return cur.err(format!("expected '+' or '-', found '{}'", c as char)),
        }
        first = false;
        let (num, den, exps) = parse_term(&mut cur, nvars)?;
        let num = if negative { -num } else { num };
        let Some(c) = field.from_fraction(&num, &den) else {
            return cur.err(format!("denominator {den} is not invertible in {}", field.kind()));
        };
        terms.push((Monomial::new(&exps), c));
    }
    Ok(Polynomial::from_terms(field, nvars, terms))
}

fn parse_term(cur: &mut Cursor<'_>, nvars: usize) -> Result<(BigInt, BigInt, Vec<u16>)> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut exps = vec![0u16; nvars];
    loop {
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = cur.digits()?.parse().expect("digits parse");
                num *= n;
                if cur.peek() == Some(b'/') {
                    cur.pos += 1;
                    let d: BigInt = cur.digits()?.parse().expect("digits parse");
                    den *= d;
                }
            }
            Some(b'x') => {
                cur.pos += 1;
                let at = cur.pos;
                let idx: usize = cur.digits()?.parse().map_err(|_| Error::Parse { pos: at, msg: "bad variable index".into() })?;
                if idx >= nvars {
                    return Err(Error::Parse { pos: at, msg: format!("variable x{idx} out of range (x0..x{})", nvars - 1) });
                }
                let mut e: u32 = 1;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    let at = cur.pos;
                    e = cur.digits()?.parse().map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
                }
                let total = exps[idx] as u32 + e;
                if total > u16::MAX as u32 {
                    return cur.err("exponent too large");
                }
                exps[idx] = total as u16;
            }
            Some(c) => return cur.err(format!("unexpected '{}'", c as char)),
            None => return cur.err("unexpected end of input"),
        }
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok((num, den, exps))
}
