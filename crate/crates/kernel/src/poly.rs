use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::KernelError;
use crate::field;
use crate::monomial::Monomial;
use crate::ring::{PolyRing, RingRef};

/// Sparse polynomial over `F_p`, terms sorted in descending monomial order.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.ring == *other.ring
    }
}
impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &RingRef, c: i64) -> Self {
        let c = field::from_i64(c, ring.prime());
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), 1)
    }

    pub fn term(ring: &RingRef, m: Monomial, c: u32) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let c = c % ring.prime();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn monomial(ring: &RingRef, m: Monomial) -> Self {
        Self::term(ring, m, 1)
    }

    /// Build from unsorted, possibly repeated terms.
    pub fn from_terms(ring: &RingRef, terms: Vec<(Monomial, u32)>) -> Self {
        let p = ring.prime();
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = field::add(*e, c % p, p);
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms must already be sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Weighted degree if every term has the same weighted degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Largest weighted degree of a term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| self.ring.degree(m)).max()
    }

    pub fn same_ring(&self, other: &Polynomial) -> Result<(), KernelError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(KernelError::RingMismatch)
        }
    }

    pub fn monic(&self) -> Polynomial {
        let lc = self.lead_coeff();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        self.scale(field::inv(lc, self.ring.prime()))
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let p = self.ring.prime();
        let c = c % p;
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field::mul(*a, c, p)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        let p = self.ring.prime();
        if c.is_multiple_of(p) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), field::mul(*a, c, p)))
                .collect(),
        }
    }

    /// `self + c * other`, by sorted merge.
    pub fn add_scaled(&self, other: &Polynomial, c: u32) -> Polynomial {
        let p = self.ring.prime();
        let c = c % p;
        if c == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match self.ring.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), field::mul(b[j].1, c, p)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field::add(a[i].1, field::mul(b[j].1, c, p), p);
                    if s != 0 {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, x)| (m.clone(), field::mul(*x, c, p))));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add_scaled(other, self.ring.prime() - 1)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.prime() - 1)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let p = self.ring.prime();
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut acc: HashMap<Monomial, u32> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(0);
                *e = field::add(*e, field::mul(*c1, *c2, p), p);
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| self.ring.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Ring homomorphism into `target`, sending variable `i` to `images[i]`.
    pub fn substitute(&self, target: &RingRef, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut out = Polynomial::zero(target);
        let mut powers: HashMap<(usize, u16), Polynomial> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, *c as i64);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u32))
                    .clone();
                t = t.mul(&pw);
            }
            out = out.add(&t);
        }
        out
    }

    /// Re-express in a ring with the same variables under a different order
    /// or a superset of variables placed at `positions`.
    pub fn embed(&self, target: &RingRef, positions: &[usize]) -> Polynomial {
        assert_eq!(positions.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; target.nvars()];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[positions[i]] = x;
                }
                (Monomial::from_exponents(&e), *c)
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Inverse of `embed`: drop variables not listed; `None` if a dropped
    /// variable occurs.
    pub fn restrict(&self, target: &RingRef, positions: &[usize]) -> Option<Polynomial> {
        assert_eq!(positions.len(), target.nvars());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponents();
            let kept: u32 = positions.iter().map(|&i| e[i] as u32).sum();
            if kept != m.total_degree() {
                return None;
            }
            let ex: Vec<u16> = positions.iter().map(|&i| e[i]).collect();
            terms.push((Monomial::from_exponents(&ex), *c));
        }
        Some(Polynomial::from_terms(target, terms))
    }

    pub fn uses_variable(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[i] > 0)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let p = self.ring.prime();
        let lm = divisor.lead_monomial()?;
        let lc_inv = field::inv(divisor.lead_coeff(), p);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = lm.quotient_of(&m)?;
            let qc = field::mul(c, lc_inv, p);
            rem = rem.add_scaled(&divisor.mul_term(&q, qc), p - 1);
            quot.push((q, qc));
        }
        Some(Polynomial::from_sorted(&self.ring, quot))
    }

    pub fn to_string_with(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let p = self.ring.prime();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = field::to_signed(*c, p);
            let (neg, abs) = (s < 0, s.unsigned_abs());
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if abs != 1 {
                    write!(f, "{abs}*")?;
                }
                let mut s = String::new();
                self.ring.fmt_monomial(m, &mut s)?;
                f.write_str(&s)?;
            }
        }
        Ok(())
    }
}

impl PolyRing {
    /// Convenience for tests and reports: parse in this ring.
    pub fn parse(self: &RingRef, s: &str) -> Result<Polynomial, KernelError> {
        crate::parse::parse_polynomial(self, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring();
        let f = r.parse("x^2 - 3*x*y + 1").unwrap();
        let g = r.parse("x + y").unwrap();
        assert_eq!(f.to_string(), "x^2 - 3*x*y + 1");
        let prod = f.mul(&g);
        assert_eq!(prod.to_string(), "x^3 - 2*x^2*y - 3*x*y^2 + x + y");
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert!(prod.add(&Polynomial::one(&r)).exact_div(&g).is_none());
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn homogeneity() {
        let r = ring();
        assert_eq!(r.parse("x^2 + x*y").unwrap().homogeneous_degree(), Some(2));
        assert!(!r.parse("x^2 + y").unwrap().is_homogeneous());
    }

    #[test]
    fn substitution() {
        let r = ring();
        let f = r.parse("x*y + y^2").unwrap();
        let img = [r.parse("x + y").unwrap(), r.parse("y").unwrap()];
        assert_eq!(f.substitute(&r, &img).to_string(), "x*y + 2*y^2");
    }
}
