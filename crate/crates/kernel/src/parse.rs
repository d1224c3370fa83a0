//! Polynomial parser.
//!
//! Grammar: sums and differences of products; `*` is optional between
//! factors, `^` takes a non-negative integer exponent, and an identifier that
//! is not a variable name is split into variable names when that is
//! unambiguous by greedy longest match (`xy` reads as `x*y`).

use crate::error::KernelError;
use crate::field;
use crate::poly::Polynomial;
use crate::ring::RingRef;

pub fn parse_polynomial(ring: &RingRef, input: &str) -> Result<Polynomial, KernelError> {
    let mut p = Parser {
        ring,
        src: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty polynomial"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    ring: &'a RingRef,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> KernelError {
        KernelError::Parse {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, KernelError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            if self.peek() == Some(b'+') {
                self.pos += 1;
            }
            self.term()?
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, KernelError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, KernelError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, KernelError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<Polynomial, KernelError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let c = field::from_i64((n % self.ring.prime() as u64) as i64, self.ring.prime());
                Ok(Polynomial::constant(self.ring, c as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.identifier(ident, start)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    fn identifier(&self, ident: &str, start: usize) -> Result<Polynomial, KernelError> {
        if let Some(i) = self.ring.var_index(ident) {
            return Ok(Polynomial::var(self.ring, i));
        }
        let mut acc = Polynomial::one(self.ring);
        let mut rest = ident;
        while !rest.is_empty() {
            let best = self
                .ring
                .names()
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            let Some((i, name)) = best else {
                return Err(KernelError::Parse {
                    offset: start,
                    message: format!("unknown variable in '{ident}'"),
                });
            };
            rest = &rest[name.len()..];
            let digits = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
            let mut v = Polynomial::var(self.ring, i);
            if digits > 0 {
                let e: u32 = rest[..digits].parse().map_err(|_| KernelError::Parse {
                    offset: start,
                    message: "exponent too large".into(),
                })?;
                v = v.pow(e);
                rest = &rest[digits..];
            }
            acc = acc.mul(&v);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(101, vec!["x".into(), "y".into(), "z1".into()]).unwrap()
    }

    #[test]
    fn accepts_common_spellings() {
        let r = ring();
        let a = parse_polynomial(&r, "x^2*y - 3*x + 2").unwrap();
        let b = parse_polynomial(&r, "x^2 y -3x+2").unwrap();
        let c = parse_polynomial(&r, "(x)(x y) - 3 x + 2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_polynomial(&r, "xy").unwrap(), parse_polynomial(&r, "x*y").unwrap());
        assert_eq!(
            parse_polynomial(&r, "z1^2").unwrap().to_string(),
            "z1^2"
        );
        assert_eq!(parse_polynomial(&r, "-(x+y)^2").unwrap().to_string(), "-x^2 - 2*x*y - y^2");
        assert_eq!(parse_polynomial(&r, "202").unwrap().to_string(), "0");
    }

    #[test]
    fn rejects_garbage() {
        let r = ring();
        for bad in ["", "x +", "w", "x^", "(x", "x)"] {
            assert!(matches!(parse_polynomial(&r, bad), Err(KernelError::Parse { .. })), "{bad}");
        }
    }
}
