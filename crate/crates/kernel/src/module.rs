//! Submodules of free modules `S^rank`, syzygies and cofactor lifts.

use std::sync::OnceLock;

use crate::error::KernelError;
use crate::groebner::{buchberger, from_evec, to_evec, EVec, Reducer};
use crate::ideal::{colength_of_leads, Colength, Ideal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// Element of a free module, one polynomial per coordinate.
pub type FreeElement = Vec<Polynomial>;

pub struct Submodule {
    ring: RingRef,
    rank: usize,
    gens: Vec<FreeElement>,
    gb: OnceLock<Reducer>,
}

impl Clone for Submodule {
    fn clone(&self) -> Self {
        Submodule {
            ring: self.ring.clone(),
            rank: self.rank,
            gens: self.gens.clone(),
            gb: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for Submodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Submodule(rank {}, {} generators)", self.rank, self.gens.len())
    }
}

fn is_zero_element(v: &FreeElement) -> bool {
    v.iter().all(|c| c.is_zero())
}

impl Submodule {
    pub fn new(ring: &RingRef, rank: usize, gens: Vec<FreeElement>) -> Result<Self, KernelError> {
        for g in &gens {
            if g.len() != rank {
                return Err(KernelError::Structural(format!(
                    "element of rank {} in a module of rank {rank}",
                    g.len()
                )));
            }
            for c in g {
                c.same_ring(&Polynomial::zero(ring))?;
            }
        }
        Ok(Submodule {
            ring: ring.clone(),
            rank,
            gens: gens.into_iter().filter(|g| !is_zero_element(g)).collect(),
            gb: OnceLock::new(),
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[FreeElement] {
        &self.gens
    }

    fn reducer(&self) -> &Reducer {
        self.gb.get_or_init(|| {
            let input = self.gens.iter().map(|g| to_evec(&self.ring, g)).collect();
            Reducer::new(&self.ring, buchberger(&self.ring, input))
        })
    }

    /// Reduced Groebner basis, position-over-term.
    pub fn groebner(&self) -> Vec<FreeElement> {
        self.reducer()
            .elements()
            .iter()
            .map(|v| from_evec(&self.ring, self.rank, v))
            .collect()
    }

    pub fn normal_form(&self, v: &FreeElement) -> FreeElement {
        let r = self.reducer().reduce(to_evec(&self.ring, v), true);
        from_evec(&self.ring, self.rank, &r)
    }

    pub fn contains(&self, v: &FreeElement) -> bool {
        is_zero_element(&self.normal_form(v))
    }

    /// Leading monomials of the basis, grouped by position.
    pub fn leads_by_position(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.rank];
        for g in self.reducer().elements() {
            let t = g.lead();
            out[t.pos as usize].push(t.mono.clone());
        }
        out
    }

    /// Length of `S^rank / self`.
    pub fn colength(&self) -> Colength {
        let mut total = 0;
        for leads in self.leads_by_position() {
            match colength_of_leads(self.ring.nvars(), &leads) {
                Colength::Finite(n) => total += n,
                Colength::Infinite => return Colength::Infinite,
            }
        }
        Colength::Finite(total)
    }

    /// Standard monomials per position (ascending within a position), when
    /// the quotient has finite length.
    pub fn standard_monomials(&self) -> Option<Vec<(usize, Monomial)>> {
        let mut out = Vec::new();
        for (pos, leads) in self.leads_by_position().into_iter().enumerate() {
            let ideal = crate::ideal::Ideal::new(
                &self.ring,
                leads.into_iter().map(|m| Polynomial::monomial(&self.ring, m)).collect(),
            )
            .expect("same ring");
            out.extend(ideal.standard_monomials()?.into_iter().map(|m| (pos, m)));
        }
        Some(out)
    }

    /// Generators of the module of relations among `self.gens()`.
    pub fn syzygies(&self) -> Submodule {
        let k = self.gens.len();
        let (basis, _) = self.tagged_basis();
        let syz: Vec<FreeElement> = basis
            .iter()
            .filter(|v| v.terms.iter().all(|t| t.pos as usize >= self.rank))
            .map(|v| from_evec(&self.ring, self.rank + k, v)[self.rank..].to_vec())
            .collect();
        Submodule {
            ring: self.ring.clone(),
            rank: k,
            gens: syz,
            gb: OnceLock::new(),
        }
    }

    /// Basis of the module generated by `(g_i | e_i)`.
    fn tagged_basis(&self) -> (Vec<EVec>, usize) {
        let k = self.gens.len();
        let input = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut v = g.clone();
                for j in 0..k {
                    v.push(if i == j {
                        Polynomial::one(&self.ring)
                    } else {
                        Polynomial::zero(&self.ring)
                    });
                }
                to_evec(&self.ring, &v)
            })
            .collect();
        (buchberger(&self.ring, input), k)
    }

    /// Cofactors `c` with `v = sum c_i gens[i]`, or `None` if `v` is not in
    /// the submodule.
    pub fn lift(&self, v: &FreeElement) -> Option<Vec<Polynomial>> {
        let (basis, k) = self.tagged_basis();
        let reducer = Reducer::new(&self.ring, basis);
        let mut w = v.clone();
        w.extend((0..k).map(|_| Polynomial::zero(&self.ring)));
        let r = reducer.reduce(to_evec(&self.ring, &w), true);
        if r.terms.iter().any(|t| (t.pos as usize) < self.rank) {
            return None;
        }
        let full = from_evec(&self.ring, self.rank + k, &r);
        Some(full[self.rank..].iter().map(|c| c.neg()).collect())
    }
}

/// Cofactors expressing `f` in terms of `gens`, or `None` if `f` is not in
/// the ideal they generate.
pub fn lift_polynomial(f: &Polynomial, gens: &[Polynomial]) -> Option<Vec<Polynomial>> {
    let ring = f.ring();
    let m = Submodule::new(ring, 1, gens.iter().map(|g| vec![g.clone()]).collect()).ok()?;
    // zero generators were dropped; map cofactors back
    let c = m.lift(&vec![f.clone()])?;
    let mut out = Vec::with_capacity(gens.len());
    let mut it = c.into_iter();
    for g in gens {
        out.push(if g.is_zero() {
            Polynomial::zero(ring)
        } else {
            it.next().expect("one cofactor per generator")
        });
    }
    Some(out)
}

/// Length of `u / w` for ideals `w ⊆ u`, from the presentation of `u / w`
/// as `S^k` modulo the preimage of `w` under the generators of `u`.
pub fn subquotient_length(u: &Ideal, w: &Ideal) -> Result<Colength, KernelError> {
    if !u.contains_ideal(w) {
        return Err(KernelError::Precondition(
            "subquotient needs the smaller ideal inside the larger".into(),
        ));
    }
    let ring = u.ring();
    let ugens: Vec<Polynomial> = u.groebner().to_vec();
    let k = ugens.len();
    if k == 0 {
        return Ok(Colength::Finite(0));
    }
    let mut all: Vec<FreeElement> = ugens.iter().map(|g| vec![g.clone()]).collect();
    all.extend(w.groebner().iter().map(|g| vec![g.clone()]));
    let syz = Submodule::new(ring, 1, all)?.syzygies();
    let pre: Vec<FreeElement> = syz.gens().iter().map(|s| s[..k].to_vec()).collect();
    Ok(Submodule::new(ring, k, pre)?.colength())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn syzygies_of_regular_sequence() {
        let r = ring();
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        let m = Submodule::new(&r, 1, vec![vec![x.clone()], vec![y.clone()]]).unwrap();
        let s = m.syzygies();
        assert_eq!(s.gens().len(), 1);
        let g = &s.gens()[0];
        assert!(g[0].mul(&x).add(&g[1].mul(&y)).is_zero());
    }

    #[test]
    fn lift_recovers_cofactors() {
        let r = ring();
        let gens = vec![r.parse("x^2").unwrap(), r.parse("y^2").unwrap()];
        let f = r.parse("x^2 + y^3").unwrap();
        let c = lift_polynomial(&f, &gens).unwrap();
        assert_eq!(c[0].mul(&gens[0]).add(&c[1].mul(&gens[1])), f);
        assert!(lift_polynomial(&r.parse("x*y").unwrap(), &gens).is_none());
    }

    #[test]
    fn subquotients() {
        let r = ring();
        let m = Ideal::maximal(&r);
        let m2 = m.power(2);
        assert_eq!(subquotient_length(&m, &m2), Ok(Colength::Finite(2)));
        assert_eq!(subquotient_length(&m, &m), Ok(Colength::Finite(0)));
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let xm = Ideal::parse(&r, &["x^2", "x*y"]).unwrap();
        assert_eq!(subquotient_length(&x, &xm), Ok(Colength::Finite(1)));
        assert!(subquotient_length(&m2, &m).is_err());
    }

    #[test]
    fn module_colength() {
        let r = ring();
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        let z = Polynomial::zero(&r);
        // S^2 / (x e1, y e1, x^2 e2, y e2) has length 1 + 2
        let m = Submodule::new(
            &r,
            2,
            vec![
                vec![x.clone(), z.clone()],
                vec![y.clone(), z.clone()],
                vec![z.clone(), x.mul(&x)],
                vec![z.clone(), y.clone()],
            ],
        )
        .unwrap();
        assert_eq!(m.colength(), Colength::Finite(3));
        assert_eq!(m.standard_monomials().unwrap().len(), 3);
    }
}
