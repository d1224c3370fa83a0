use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::KernelError;
use crate::groebner::{groebner_basis, PolyReducer};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// Length of a quotient, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Colength::Finite(_))
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{n}"),
            Colength::Infinite => f.write_str("infinite"),
        }
    }
}

/// Ideal of a polynomial ring, with its reduced Groebner basis computed
/// once on demand.
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
    reducer: OnceLock<Arc<PolyReducer>>,
    colength: OnceLock<Colength>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let out = Ideal::unchecked(&self.ring, self.gens.clone());
        if let Some(gb) = self.gb.get() {
            let _ = out.gb.set(gb.clone());
        }
        if let Some(r) = self.reducer.get() {
            let _ = out.reducer.set(r.clone());
        }
        if let Some(c) = self.colength.get() {
            let _ = out.colength.set(*c);
        }
        out
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.groebner() == other.groebner()
    }
}
impl Eq for Ideal {}

impl Ideal {
    fn unchecked(ring: &RingRef, gens: Vec<Polynomial>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
            reducer: OnceLock::new(),
            colength: OnceLock::new(),
        }
    }

    pub fn new(ring: &RingRef, gens: Vec<Polynomial>) -> Result<Self, KernelError> {
        for g in &gens {
            g.same_ring(&Polynomial::zero(ring))?;
        }
        Ok(Self::unchecked(ring, gens))
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Self, KernelError> {
        let gens = gens
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::unchecked(ring, gens))
    }

    /// Ideal whose generators are already a reduced Groebner basis.
    pub(crate) fn from_reduced_gb(ring: &RingRef, gb: Vec<Polynomial>) -> Self {
        let out = Self::unchecked(ring, gb.clone());
        let _ = out.gb.set(gb);
        out
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::from_reduced_gb(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Self {
        Self::from_reduced_gb(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal generated by all variables.
    pub fn maximal(ring: &RingRef) -> Self {
        let gens: Vec<_> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        Self::new(ring, gens).expect("same ring")
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn groebner(&self) -> &[Polynomial] {
        self.gb
            .get_or_init(|| groebner_basis(&self.ring, &self.gens).expect("checked ring"))
    }

    pub fn reducer(&self) -> &PolyReducer {
        self.reducer
            .get_or_init(|| Arc::new(PolyReducer::new(&self.ring, self.groebner())))
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.reducer().normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &Ideal) -> bool {
        self.groebner() == other.groebner()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().iter().any(|g| g.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Generators homogeneous for the ring weights.
    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.groebner()
            .iter()
            .filter_map(|g| g.lead_monomial().cloned())
            .collect()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::unchecked(&self.ring, gens)
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Self::unchecked(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let a = self.minimal_gens();
        let b = other.minimal_gens();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for f in &a {
            for g in &b {
                gens.push(f.mul(g));
            }
        }
        Self::unchecked(&self.ring, gens)
    }

    /// A small generating set: the reduced basis when it is shorter.
    fn minimal_gens(&self) -> Vec<Polynomial> {
        match self.gb.get() {
            Some(gb) if gb.len() <= self.gens.len() => gb.clone(),
            _ => self.gens.clone(),
        }
    }

    pub fn power(&self, n: u32) -> Ideal {
        let mut acc = Self::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self);
            acc.groebner();
        }
        acc
    }

    pub fn scale(&self, f: &Polynomial) -> Ideal {
        Self::unchecked(&self.ring, self.gens.iter().map(|g| g.mul(f)).collect())
    }

    /// Intersection by elimination of a tag variable.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let ext = self.ring.elimination_extension(&[("t", 1)]);
        let pos: Vec<usize> = (1..=self.ring.nvars()).collect();
        let t = Polynomial::var(&ext, 0);
        let one_minus_t = Polynomial::one(&ext).sub(&t);
        let mut gens = Vec::new();
        for f in self.minimal_gens() {
            gens.push(f.embed(&ext, &pos).mul(&t));
        }
        for g in other.minimal_gens() {
            gens.push(g.embed(&ext, &pos).mul(&one_minus_t));
        }
        let gb = groebner_basis(&ext, &gens).expect("same ring");
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|g| !g.uses_variable(0))
            .map(|g| g.restrict(&self.ring, &pos).expect("t-free"))
            .collect();
        Self::from_reduced_gb(&self.ring, kept)
    }

    /// `(self : f)`.
    pub fn colon_element(&self, f: &Polynomial) -> Ideal {
        if f.is_zero() || self.contains(f) {
            return Self::unit(&self.ring);
        }
        let principal = Self::unchecked(&self.ring, vec![f.clone()]);
        let meet = self.intersect(&principal);
        let gens = meet
            .gens
            .iter()
            .map(|g| g.exact_div(f).expect("element of (f) is divisible by f"))
            .collect();
        Self::unchecked(&self.ring, gens)
    }

    /// `(self : other)`.
    pub fn colon(&self, other: &Ideal) -> Ideal {
        let mut acc = Self::unit(&self.ring);
        for g in other.minimal_gens() {
            let c = self.colon_element(&g);
            acc = if acc.is_unit() { c } else { acc.intersect(&c) };
        }
        acc
    }

    /// `(self : other^infinity)` by iterated colon.
    pub fn saturate(&self, other: &Ideal) -> Ideal {
        let mut cur = self.clone();
        loop {
            let next = cur.colon(other);
            if next.same_ideal(&cur) {
                return cur;
            }
            cur = next;
        }
    }

    /// Intersection with the subring on the variables not listed in `vars`.
    /// Returns the subring and the eliminated ideal.
    pub fn eliminate(&self, vars: &[usize]) -> (RingRef, Ideal) {
        let n = self.ring.nvars();
        let keep: Vec<usize> = (0..n).filter(|i| !vars.contains(i)).collect();
        let mut order: Vec<usize> = vars.to_vec();
        order.extend(&keep);
        let names: Vec<String> = order.iter().map(|&i| self.ring.names()[i].clone()).collect();
        let weights: Vec<u32> = order.iter().map(|&i| self.ring.weights()[i]).collect();
        let ext = crate::ring::PolyRing::with_weights(
            self.ring.prime() as u64,
            names,
            weights,
            crate::ring::MonomialOrder::Elimination { block: vars.len() },
        )
        .expect("valid ring");
        let sub = crate::ring::PolyRing::with_weights(
            self.ring.prime() as u64,
            keep.iter().map(|&i| self.ring.names()[i].clone()).collect(),
            keep.iter().map(|&i| self.ring.weights()[i]).collect(),
            crate::ring::MonomialOrder::DegRevLex,
        )
        .expect("valid ring");
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let gens: Vec<_> = self.gens.iter().map(|g| g.embed(&ext, &position)).collect();
        let gb = groebner_basis(&ext, &gens).expect("same ring");
        let back: Vec<usize> = (vars.len()..n).collect();
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter_map(|g| g.restrict(&sub, &back))
            .collect();
        let ideal = Self::new(&sub, kept).expect("same ring");
        (sub, ideal)
    }

    /// Number of standard monomials, or infinite.
    pub fn colength(&self) -> Colength {
        *self.colength.get_or_init(|| {
            let leads = self.lead_monomials();
            colength_of_leads(self.ring.nvars(), &leads)
        })
    }

    /// Standard monomials in ascending order, when finitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let leads = self.lead_monomials();
        if !colength_of_leads(self.ring.nvars(), &leads).is_finite() {
            return None;
        }
        let mut out = Vec::new();
        walk_standard(self.ring.nvars(), &leads, |m| out.push(m.clone()));
        out.sort_by(|a, b| self.ring.cmp(a, b));
        Some(out)
    }

    /// Krull dimension of the quotient ring; `None` for the unit ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let leads = self.lead_monomials();
        let n = self.ring.nvars();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads
                .iter()
                .all(|m| m.support().any(|i| mask & (1 << i) == 0));
            if independent {
                best = size;
            }
        }
        Some(best)
    }
}

/// Colength of a monomial ideal given by generators.
pub fn colength_of_leads(nvars: usize, leads: &[Monomial]) -> Colength {
    for i in 0..nvars {
        if !leads
            .iter()
            .any(|m| m.pure_power().map(|(j, _)| j == i).unwrap_or(false) || m.is_one())
        {
            return Colength::Infinite;
        }
    }
    let mut count = 0u64;
    walk_standard(nvars, leads, |_| count += 1);
    Colength::Finite(count)
}

/// Visit every monomial outside the monomial ideal; the caller guarantees
/// there are finitely many.
fn walk_standard(nvars: usize, leads: &[Monomial], mut visit: impl FnMut(&Monomial)) {
    let mut stack = vec![(Monomial::one(nvars), 0usize)];
    while let Some((m, start)) = stack.pop() {
        if leads.iter().any(|l| l.divides(&m)) {
            continue;
        }
        visit(&m);
        for v in start..nvars {
            stack.push((m.mul_var(v), v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn operations() {
        let r = ring();
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let y = Ideal::parse(&r, &["y"]).unwrap();
        assert!(x.intersect(&y).same_ideal(&Ideal::parse(&r, &["x*y"]).unwrap()));
        let xy = Ideal::parse(&r, &["x*y"]).unwrap();
        assert!(xy.colon(&x).same_ideal(&y));
        let m = Ideal::maximal(&r);
        assert!(m.power(2).same_ideal(&Ideal::parse(&r, &["x^2", "x*y", "y^2"]).unwrap()));
        assert!(m.power(0).is_unit());
        let i = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        assert!(i.saturate(&m).same_ideal(&x));
    }

    #[test]
    fn colengths() {
        let r = ring();
        assert_eq!(Ideal::maximal(&r).colength(), Colength::Finite(1));
        assert_eq!(Ideal::parse(&r, &["x^2", "y^2"]).unwrap().colength(), Colength::Finite(4));
        assert_eq!(Ideal::parse(&r, &["x"]).unwrap().colength(), Colength::Infinite);
        assert_eq!(Ideal::unit(&r).colength(), Colength::Finite(0));
        assert_eq!(Ideal::parse(&r, &["x"]).unwrap().dimension(), Some(1));
    }

    #[test]
    fn elimination() {
        let r = PolyRing::new(32003, vec!["t".into(), "x".into(), "y".into()]).unwrap();
        // twisted parametrisation x = t^2, y = t^3
        let i = Ideal::parse(&r, &["x - t^2", "y - t^3"]).unwrap();
        let (sub, e) = i.eliminate(&[0]);
        assert_eq!(sub.names(), &["x".to_string(), "y".to_string()]);
        assert!(e.same_ideal(&Ideal::parse(&sub, &["y^2 - x^3"]).unwrap()));
    }
}
