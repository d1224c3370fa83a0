//! The graded-local ring `A = k[x_1..x_n]/J` at `m = (x_1..x_n)` and
//! m-primary ideals in it.
//!
//! Ideals of `A` are stored as ideals of the ambient polynomial ring that
//! contain `J`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use annvv_kernel::{
    monomial::monomials_of_degree, resolve_quotient, Colength, Ideal, Monomial, MonomialOrder,
    PolyRing, Polynomial, RingRef,
};

use crate::error::{CoreError, Result};

/// Default number of cached powers per ideal.
pub const POWER_CACHE_BOUND: u32 = 12;

const MAX_WEIGHT: u32 = 12;

#[derive(Debug)]
pub struct LocalRing {
    ring: RingRef,
    relations: Ideal,
    dim: usize,
    depth: usize,
    warnings: Vec<String>,
}

pub type LocalRingRef = Arc<LocalRing>;

/// Smallest positive weights making every polynomial weighted-homogeneous,
/// searched by increasing maximum weight.
fn infer_weights(nvars: usize, rels: &[Polynomial]) -> Option<Vec<u32>> {
    let homogeneous = |w: &[u32]| {
        rels.iter().all(|f| {
            let mut d = f.terms().iter().map(|(m, _)| m.weighted_degree(w));
            let first = d.next();
            d.all(|e| Some(e) == first)
        })
    };
    for top in 1..=MAX_WEIGHT {
        let mut w = vec![1u32; nvars];
        loop {
            if w.contains(&top) && homogeneous(&w) {
                return Some(w);
            }
            // odometer over [1, top]^n
            let mut i = 0;
            loop {
                if i == nvars {
                    if nvars == 0 && homogeneous(&w) {
                        return Some(w);
                    }
                    break;
                }
                if w[i] < top {
                    w[i] += 1;
                    break;
                }
                w[i] = 1;
                i += 1;
            }
            if i == nvars {
                break;
            }
        }
    }
    None
}

/// Build and validate `k[vars]/(relations)` over `F_p`.
pub fn build_ring(p: u64, vars: &[&str], relations: &[&str]) -> Result<LocalRingRef> {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let plain = PolyRing::new(p, names.clone())?;
    let rels = relations
        .iter()
        .map(|s| plain.parse(s))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for (f, src) in rels.iter().zip(relations) {
        if f.terms().iter().any(|(m, _)| m.is_one()) {
            return Err(CoreError::InhomogeneousRelation(src.to_string()));
        }
    }
    let weights = infer_weights(names.len(), &rels).ok_or_else(|| {
        CoreError::InhomogeneousRelation(
            rels.iter()
                .zip(relations)
                .find(|(f, _)| !f.is_homogeneous())
                .map(|(_, s)| s.to_string())
                .unwrap_or_default(),
        )
    })?;
    let ring = PolyRing::with_weights(p, names, weights, MonomialOrder::DegRevLex)?;
    let all: Vec<usize> = (0..ring.nvars()).collect();
    let rels: Vec<Polynomial> = rels.iter().map(|f| f.embed(&ring, &all)).collect();
    let relations = Ideal::new(&ring, rels)?;
    if relations.is_unit() {
        return Err(CoreError::Precondition("relations generate the unit ideal".into()));
    }
    let dim = relations.dimension().expect("proper ideal");
    let pd = resolve_quotient(&relations)?.length();
    let depth = ring.nvars() - pd;
    let mut warnings = Vec::new();
    if depth != dim {
        warnings.push(format!(
            "ring is not Cohen-Macaulay (dim {dim}, depth {depth}); theorem checks do not apply"
        ));
    }
    Ok(Arc::new(LocalRing {
        ring,
        relations,
        dim,
        depth,
        warnings,
    }))
}

impl LocalRing {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_cohen_macaulay(&self) -> bool {
        self.dim == self.depth
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        Ok(self.ring.parse(s)?)
    }

    /// The ideal of `A` generated by `gens`, i.e. `(gens) + J` upstairs.
    pub fn ideal(&self, gens: &[Polynomial]) -> Ideal {
        Ideal::new(&self.ring, gens.to_vec())
            .expect("same ring")
            .sum(&self.relations)
    }

    pub fn maximal_ideal(&self) -> Ideal {
        Ideal::maximal(&self.ring).sum(&self.relations)
    }

    /// Whether `f` is zero in `A`.
    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.relations.contains(f)
    }
}

/// Three-way classification of an ideal of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MPrimaryVerdict {
    Unit,
    MPrimary { n: u32, colength: u64 },
    NotMPrimary,
}

impl MPrimaryVerdict {
    pub fn is_m_primary(self) -> bool {
        matches!(self, MPrimaryVerdict::MPrimary { .. })
    }

    /// m-primary or the unit ideal.
    pub fn is_finite_colength(self) -> bool {
        !matches!(self, MPrimaryVerdict::NotMPrimary)
    }
}

/// Smallest `N` with `m^N ⊆ ideal`, searched up to `bound`.
fn smallest_power_inside(ideal: &Ideal, bound: u32) -> Option<u32> {
    let ring = ideal.ring();
    (1..=bound).find(|&n| {
        monomials_of_degree(ring.nvars(), n)
            .into_iter()
            .all(|m: Monomial| ideal.contains(&Polynomial::monomial(ring, m)))
    })
}

/// Classify an ideal of `A` (given upstairs, containing `J`).
pub fn is_m_primary(ideal: &Ideal) -> MPrimaryVerdict {
    if ideal.is_unit() {
        return MPrimaryVerdict::Unit;
    }
    match ideal.colength() {
        Colength::Infinite => MPrimaryVerdict::NotMPrimary,
        Colength::Finite(c) => {
            let n = smallest_power_inside(ideal, c as u32 + 1)
                .expect("finite colength bounds the nilpotency index");
            MPrimaryVerdict::MPrimary { n, colength: c }
        }
    }
}

/// A validated m-primary ideal of `A` with cached powers.
pub struct MPrimaryIdeal {
    ring: LocalRingRef,
    gens: Vec<Polynomial>,
    ideal: Ideal,
    colength: u64,
    n_index: u32,
    cache_bound: u32,
    powers: Mutex<BTreeMap<u32, Ideal>>,
}

impl std::fmt::Debug for MPrimaryIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MPrimaryIdeal({})", self.display_gens())
    }
}

/// Declare the ideal of `A` generated by `gens` and validate it.
pub fn declare_ideal(ring: &LocalRingRef, gens: Vec<Polynomial>) -> Result<MPrimaryIdeal> {
    let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !ring.is_zero(g)).collect();
    let ideal = ring.ideal(&gens);
    let shown = format!(
        "({})",
        gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
    );
    match is_m_primary(&ideal) {
        MPrimaryVerdict::MPrimary { n, colength } => Ok(MPrimaryIdeal {
            ring: ring.clone(),
            gens,
            ideal,
            colength,
            n_index: n,
            cache_bound: POWER_CACHE_BOUND,
            powers: Mutex::new(BTreeMap::new()),
        }),
        _ => Err(CoreError::NotMPrimary(shown)),
    }
}

/// Parse generators and declare the ideal.
pub fn declare_ideal_str(ring: &LocalRingRef, gens: &[&str]) -> Result<MPrimaryIdeal> {
    let gens = gens
        .iter()
        .map(|s| ring.parse(s))
        .collect::<Result<Vec<_>>>()?;
    declare_ideal(ring, gens)
}

impl MPrimaryIdeal {
    pub fn local_ring(&self) -> &LocalRingRef {
        &self.ring
    }

    pub fn ring(&self) -> &RingRef {
        self.ring.ring()
    }

    /// Generators as declared (relations excluded).
    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// The ideal upstairs, relations included.
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn colength(&self) -> u64 {
        self.colength
    }

    /// Smallest `N` with `m^N ⊆ I`.
    pub fn n_index(&self) -> u32 {
        self.n_index
    }

    pub fn with_cache_bound(mut self, bound: u32) -> Self {
        self.cache_bound = bound;
        self
    }

    pub fn display_gens(&self) -> String {
        format!(
            "({})",
            self.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
        )
    }

    /// Generators homogeneous for the ring weights.
    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// Common degree of the generators when they are homogeneous of one
    /// degree.
    pub fn generator_degree(&self) -> Option<u32> {
        let mut d = self.gens.iter().map(|g| g.homogeneous_degree());
        let first = d.next()??;
        d.all(|e| e == Some(first)).then_some(first)
    }

    /// `I^n + J`.
    pub fn power(&self, n: u32) -> Ideal {
        if n == 0 {
            return Ideal::unit(self.ring());
        }
        if n == 1 {
            return self.ideal.clone();
        }
        if let Some(p) = self.powers.lock().unwrap().get(&n) {
            return p.clone();
        }
        let (start, mut acc) = {
            let cache = self.powers.lock().unwrap();
            match cache.range(..n).next_back() {
                Some((&k, p)) => (k, p.clone()),
                None => (1, self.ideal.clone()),
            }
        };
        for k in start + 1..=n {
            let prev = acc.groebner().to_vec();
            let mut gens = Vec::with_capacity(prev.len() * self.gens.len());
            for f in &prev {
                for g in &self.gens {
                    gens.push(f.mul(g));
                }
            }
            gens.extend(self.ring.relations().gens().iter().cloned());
            acc = Ideal::new(self.ring(), gens).expect("same ring");
            acc.groebner();
            let mut cache = self.powers.lock().unwrap();
            if k <= self.cache_bound {
                cache.insert(k, acc.clone());
            } else {
                // keep only the most recent power beyond the bound
                let stale: Vec<u32> = cache.range(self.cache_bound + 1..).map(|(&j, _)| j).collect();
                for j in stale {
                    cache.remove(&j);
                }
                cache.insert(k, acc.clone());
            }
        }
        acc
    }

    /// A fresh declaration of `I^l`, with its own validation and caches.
    pub fn declare_power(&self, l: u32) -> Result<MPrimaryIdeal> {
        let gens: Vec<Polynomial> = if l == 1 {
            self.gens.clone()
        } else {
            let mut acc = vec![Polynomial::one(self.ring())];
            for _ in 0..l {
                let mut next = Vec::new();
                for a in &acc {
                    for g in &self.gens {
                        let f = a.mul(g);
                        if !next.contains(&f) {
                            next.push(f);
                        }
                    }
                }
                acc = next;
            }
            acc
        };
        declare_ideal(&self.ring, gens)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.ideal.contains(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_for_binomials() {
        let r = PolyRing::new(101, vec!["x".into(), "y".into()]).unwrap();
        let f = r.parse("y^3 - x^4").unwrap();
        assert_eq!(infer_weights(2, &[f]), Some(vec![3, 4]));
        assert_eq!(infer_weights(2, &[]), Some(vec![1, 1]));
        let g = r.parse("x^2 + y").unwrap();
        assert_eq!(infer_weights(2, &[g]), Some(vec![1, 2]));
        let h = r.parse("x^2 + x").unwrap();
        assert_eq!(infer_weights(2, &[h]), None);
    }

    #[test]
    fn power_cache_matches_direct_products() {
        let a = build_ring(101, &["x", "y"], &[]).unwrap();
        let i = declare_ideal_str(&a, &["x^2", "x*y + y^2"]).unwrap().with_cache_bound(2);
        for n in 1..=4 {
            assert!(i.power(n).same_ideal(&i.ideal().power(n)), "n = {n}");
        }
        assert!(i.power(3).same_ideal(&i.ideal().power(3)));
    }
}
