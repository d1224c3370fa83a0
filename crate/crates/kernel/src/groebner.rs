//! Buchberger's algorithm over submodules of free modules, with the
//! Gebauer–Moeller pair criteria and sugar selection.
//!
//! Module elements are compared position-over-term: a smaller position
//! index is larger. Ideals are rank-one submodules.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::error::KernelError;
use crate::field;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingRef;

pub(crate) type Key = SmallVec<[u32; 12]>;

#[derive(Clone, Debug)]
pub(crate) struct ETerm {
    pub key: Key,
    pub pos: u32,
    pub mono: Monomial,
    pub coeff: u32,
}

/// Module element with terms sorted by descending key.
#[derive(Clone, Debug, Default)]
pub(crate) struct EVec {
    pub terms: Vec<ETerm>,
}

impl EVec {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &ETerm {
        &self.terms[0]
    }

    fn monic(mut self, p: u32) -> EVec {
        if let Some(t) = self.terms.first() {
            if t.coeff != 1 {
                let inv = field::inv(t.coeff, p);
                for t in &mut self.terms {
                    t.coeff = field::mul(t.coeff, inv, p);
                }
            }
        }
        self
    }
}

pub(crate) fn term_key(ring: &RingRef, pos: u32, m: &Monomial) -> Key {
    let mut k = Key::new();
    k.push(u32::MAX - pos);
    k.extend(ring.sort_key(m));
    k
}

pub(crate) fn to_evec(ring: &RingRef, comps: &[Polynomial]) -> EVec {
    let mut terms = Vec::new();
    for (pos, f) in comps.iter().enumerate() {
        for (m, c) in f.terms() {
            terms.push(ETerm {
                key: term_key(ring, pos as u32, m),
                pos: pos as u32,
                mono: m.clone(),
                coeff: *c,
            });
        }
    }
    // components are already sorted and positions are visited in key order
    EVec { terms }
}

pub(crate) fn from_evec(ring: &RingRef, rank: usize, v: &EVec) -> Vec<Polynomial> {
    let mut comps: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); rank];
    for t in &v.terms {
        comps[t.pos as usize].push((t.mono.clone(), t.coeff));
    }
    comps
        .into_iter()
        .map(|terms| Polynomial::from_sorted(ring, terms))
        .collect()
}

fn weighted_sugar(ring: &RingRef, v: &EVec) -> u32 {
    v.terms.iter().map(|t| ring.degree(&t.mono)).max().unwrap_or(0)
}

/// Reduction of module elements modulo a fixed list of monic elements.
pub(crate) struct Reducer {
    ring: RingRef,
    leads: Vec<(u32, Monomial)>,
    basis: Vec<EVec>,
}

impl Reducer {
    pub fn new(ring: &RingRef, basis: Vec<EVec>) -> Self {
        let leads = basis
            .iter()
            .map(|g| (g.lead().pos, g.lead().mono.clone()))
            .collect();
        Reducer {
            ring: ring.clone(),
            leads,
            basis,
        }
    }

    pub fn elements(&self) -> &[EVec] {
        &self.basis
    }

    fn divisor(&self, pos: u32, m: &Monomial, skip: Option<usize>) -> Option<usize> {
        self.leads
            .iter()
            .enumerate()
            .position(|(i, (p, l))| *p == pos && Some(i) != skip && l.divides(m))
    }

    pub fn reduce(&self, v: EVec, full: bool) -> EVec {
        self.reduce_skipping(v, full, None)
    }

    fn reduce_skipping(&self, v: EVec, full: bool, skip: Option<usize>) -> EVec {
        reduce_with(&self.ring, v, full, |pos, m| {
            self.divisor(pos, m, skip).map(|i| &self.basis[i])
        })
    }
}

/// Core reduction loop: `find` returns a monic reducer for a term.
fn reduce_with<'a, F>(
    ring: &RingRef,
    v: EVec,
    full: bool,
    find: F,
) -> EVec
where
    F: Fn(u32, &Monomial) -> Option<&'a EVec>,
{
    let p = ring.prime();
    let mut acc: BTreeMap<Key, (u32, Monomial, u32)> = v
        .terms
        .into_iter()
        .map(|t| (t.key, (t.pos, t.mono, t.coeff)))
        .collect();
    let mut out: Vec<ETerm> = Vec::new();
    while let Some((key, (pos, mono, c))) = acc.pop_last() {
        match find(pos, &mono) {
            Some(g) => {
                let q = g.lead().mono.quotient_of(&mono).expect("divisor");
                let f = field::neg(c, p);
                for t in &g.terms[1..] {
                    let nm = t.mono.mul(&q);
                    let nk = term_key(ring, t.pos, &nm);
                    let delta = field::mul(f, t.coeff, p);
                    match acc.entry(nk) {
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let s = field::add(e.get().2, delta, p);
                            if s == 0 {
                                e.remove();
                            } else {
                                e.get_mut().2 = s;
                            }
                        }
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert((t.pos, nm, delta));
                        }
                    }
                }
            }
            None => {
                out.push(ETerm {
                    key,
                    pos,
                    mono,
                    coeff: c,
                });
                if !full {
                    out.extend(acc.into_iter().rev().map(|(key, (pos, mono, coeff))| ETerm {
                        key,
                        pos,
                        mono,
                        coeff,
                    }));
                    break;
                }
            }
        }
    }
    EVec { terms: out }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    key: Key,
    sugar: u32,
}

struct State<'r> {
    ring: &'r RingRef,
    rank1: bool,
    basis: Vec<EVec>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn lead(&self, i: usize) -> (&Monomial, u32) {
        let t = self.basis[i].lead();
        (&t.mono, t.pos)
    }

    fn reduce(&self, v: EVec) -> EVec {
        let basis = &self.basis;
        let active = &self.active;
        reduce_with(
            self.ring,
            v,
            true,
            |pos, m| {
                (0..basis.len())
                    .find(|&i| {
                        active[i] && basis[i].lead().pos == pos && basis[i].lead().mono.divides(m)
                    })
                    .map(|i| &basis[i])
            },
        )
    }

    fn insert(&mut self, h: EVec, sugar: u32) {
        let hi = self.basis.len();
        let (hm, hp) = (h.lead().mono.clone(), h.lead().pos);
        self.basis.push(h);
        self.sugar.push(sugar);
        self.active.push(true);

        // candidate pairs with the new element
        let mut cand: Vec<(usize, Monomial, bool)> = Vec::new();
        for i in 0..hi {
            if !self.active[i] {
                continue;
            }
            let (m, p) = self.lead(i);
            if p != hp {
                continue;
            }
            cand.push((i, m.lcm(&hm), self.rank1 && m.is_coprime(&hm)));
        }
        // chain criterion among candidates
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a != b && keep[b] && cand[b].1 != cand[a].1 && cand[b].1.divides(&cand[a].1) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // one pair per lcm; drop the class when the product criterion applies
        let mut new_pairs: Vec<(usize, Monomial)> = Vec::new();
        let mut seen: Vec<Monomial> = Vec::new();
        for a in 0..cand.len() {
            if !keep[a] || seen.contains(&cand[a].1) {
                continue;
            }
            let l = &cand[a].1;
            seen.push(l.clone());
            let class: Vec<usize> = (0..cand.len())
                .filter(|&b| keep[b] && &cand[b].1 == l)
                .collect();
            if class.iter().any(|&b| cand[b].2) {
                continue;
            }
            new_pairs.push((cand[a].0, l.clone()));
        }
        // criterion B on old pairs
        let old = std::mem::take(&mut self.pairs);
        for pr in old {
            let (pi, pp) = self.lead(pr.i);
            let pj = self.lead(pr.j).0;
            if pp == hp && hm.divides(&pr.lcm) && pi.lcm(&hm) != pr.lcm && pj.lcm(&hm) != pr.lcm {
                continue;
            }
            self.pairs.push(pr);
        }
        // elements whose lead is divisible by the new lead become redundant
        for i in 0..hi {
            if self.active[i] {
                let (m, p) = self.lead(i);
                if p == hp && hm.divides(m) {
                    self.active[i] = false;
                }
            }
        }
        for (i, lcm) in new_pairs {
            let s = self.pair_sugar(i, hi, &lcm);
            self.pairs.push(Pair {
                i,
                j: hi,
                key: term_key(self.ring, hp, &lcm),
                lcm,
                sugar: s,
            });
        }
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let d = self.ring.degree(lcm);
        let si = self.sugar[i] + d - self.ring.degree(self.lead(i).0);
        let sj = self.sugar[j] + d - self.ring.degree(self.lead(j).0);
        si.max(sj)
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let idx = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.sugar.cmp(&pb.sugar).then_with(|| pa.key.cmp(&pb.key))
        })?;
        Some(self.pairs.swap_remove(idx))
    }

    fn spoly(&self, pr: &Pair) -> EVec {
        let p = self.ring.prime();
        let mut acc: BTreeMap<Key, (u32, Monomial, u32)> = BTreeMap::new();
        for (idx, sign) in [(pr.i, 1u32), (pr.j, p - 1)] {
            let g = &self.basis[idx];
            let q = g.lead().mono.quotient_of(&pr.lcm).expect("lcm");
            for t in &g.terms[1..] {
                let nm = t.mono.mul(&q);
                let k = term_key(self.ring, t.pos, &nm);
                let c = field::mul(t.coeff, sign, p);
                let e = acc.entry(k).or_insert((t.pos, nm, 0));
                e.2 = field::add(e.2, c, p);
            }
        }
        EVec {
            terms: acc
                .into_iter()
                .rev()
                .filter(|(_, v)| v.2 != 0)
                .map(|(key, (pos, mono, coeff))| ETerm {
                    key,
                    pos,
                    mono,
                    coeff,
                })
                .collect(),
        }
    }
}

/// Reduced Groebner basis of the submodule generated by `input`, sorted by
/// ascending leading term.
pub(crate) fn buchberger(ring: &RingRef, input: Vec<EVec>) -> Vec<EVec> {
    let p = ring.prime();
    let mut input: Vec<EVec> = input.into_iter().filter(|v| !v.is_zero()).collect();
    if input.iter().all(|v| v.terms.len() == 1) {
        return minimal_monomial_basis(input);
    }
    let rank1 = input.iter().all(|v| v.terms.iter().all(|t| t.pos == 0));
    input.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    let mut st = State {
        ring,
        rank1,
        basis: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for v in input {
        let s = weighted_sugar(ring, &v);
        let h = st.reduce(v);
        if !h.is_zero() {
            st.insert(h.monic(p), s);
        }
    }
    while let Some(pr) = st.next_pair() {
        let s = st.spoly(&pr);
        let h = st.reduce(s);
        if !h.is_zero() {
            st.insert(h.monic(p), pr.sugar);
        }
    }
    let kept: Vec<EVec> = st
        .basis
        .into_iter()
        .zip(st.active)
        .filter(|(_, a)| *a)
        .map(|(g, _)| g)
        .collect();
    interreduce(ring, kept)
}

fn minimal_monomial_basis(input: Vec<EVec>) -> Vec<EVec> {
    let mut v: Vec<EVec> = input;
    v.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    let mut out: Vec<EVec> = Vec::new();
    for mut g in v {
        let t = g.lead();
        let redundant = out.iter().any(|h| {
            let u = h.lead();
            u.pos == t.pos && u.mono.divides(&t.mono)
        });
        if !redundant {
            g.terms[0].coeff = 1;
            out.push(g);
        }
    }
    // a later monomial can never divide an earlier one of smaller key
    out
}

fn interreduce(ring: &RingRef, kept: Vec<EVec>) -> Vec<EVec> {
    let p = ring.prime();
    let reducer = Reducer::new(ring, kept);
    let mut out: Vec<EVec> = (0..reducer.basis.len())
        .map(|i| {
            reducer
                .reduce_skipping(reducer.basis[i].clone(), true, Some(i))
                .monic(p)
        })
        .collect();
    out.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    out
}

fn check_ring(ring: &RingRef, gens: &[Polynomial]) -> Result<(), KernelError> {
    for g in gens {
        if !std::sync::Arc::ptr_eq(g.ring(), ring) && **g.ring() != **ring {
            return Err(KernelError::RingMismatch);
        }
    }
    Ok(())
}

/// Reduced Groebner basis of the ideal generated by `gens` in `ring`.
pub fn groebner_basis(ring: &RingRef, gens: &[Polynomial]) -> Result<Vec<Polynomial>, KernelError> {
    check_ring(ring, gens)?;
    let input = gens.iter().map(|g| to_evec(ring, std::slice::from_ref(g))).collect();
    Ok(buchberger(ring, input)
        .iter()
        .map(|v| from_evec(ring, 1, v).pop().unwrap())
        .collect())
}

/// Fully reduced normal form of `f` modulo a Groebner basis.
pub fn normal_form(f: &Polynomial, gb: &[Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let basis = gb
        .iter()
        .map(|g| to_evec(&ring, std::slice::from_ref(&g.monic())))
        .collect();
    PolyReducer::from_evecs(&ring, basis).normal_form(f)
}

/// Reusable normal-form map for a fixed ideal Groebner basis.
pub struct PolyReducer {
    ring: RingRef,
    inner: Reducer,
}

impl PolyReducer {
    pub fn new(ring: &RingRef, gb: &[Polynomial]) -> Self {
        let basis = gb
            .iter()
            .map(|g| to_evec(ring, std::slice::from_ref(&g.monic())))
            .collect();
        Self::from_evecs(ring, basis)
    }

    fn from_evecs(ring: &RingRef, basis: Vec<EVec>) -> Self {
        PolyReducer {
            ring: ring.clone(),
            inner: Reducer::new(ring, basis),
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let v = self.inner.reduce(to_evec(&self.ring, std::slice::from_ref(f)), true);
        from_evec(&self.ring, 1, &v).pop().unwrap()
    }

    /// Leading monomials of the basis.
    pub fn leads(&self) -> impl Iterator<Item = &Monomial> {
        self.inner.leads.iter().map(|(_, m)| m)
    }

    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.inner.divisor(0, m, None).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    fn gb(r: &RingRef, gens: &[&str]) -> Vec<String> {
        let g: Vec<_> = gens.iter().map(|s| r.parse(s).unwrap()).collect();
        groebner_basis(r, &g).unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn small_bases() {
        let r = ring();
        assert_eq!(gb(&r, &["x^2", "y^2"]), vec!["y^2", "x^2"]);
        assert_eq!(gb(&r, &["x", "x"]), vec!["x"]);
        assert_eq!(gb(&r, &["x*y", "y^2 - x^3"]), vec!["x*y", "y^3", "x^3 - y^2"]);
        assert_eq!(gb(&r, &["x + 1", "x"]), vec!["1"]);
        assert!(gb(&r, &["0"]).is_empty());
    }

    #[test]
    fn normal_forms() {
        let r = ring();
        let g: Vec<_> = ["x*y", "y^2 - x^3"].iter().map(|s| r.parse(s).unwrap()).collect();
        let g = groebner_basis(&r, &g).unwrap();
        assert!(normal_form(&r.parse("x^2*y + y^4").unwrap(), &g).is_zero());
        assert_eq!(normal_form(&r.parse("x^4 + x").unwrap(), &g).to_string(), "x");
    }

    #[test]
    fn mixed_rings_rejected() {
        let r = ring();
        let s = PolyRing::new(101, vec!["x".into(), "y".into()]).unwrap();
        let f = s.parse("x").unwrap();
        assert_eq!(groebner_basis(&r, &[f]), Err(KernelError::RingMismatch));
    }
}
