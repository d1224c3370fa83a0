//! Minimal graded free resolutions of homogeneous modules.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::KernelError;
use crate::ideal::Ideal;
use crate::linalg::{Echelon, Insert};
use crate::module::{FreeElement, Submodule};
use crate::monomial::Monomial;
use crate::ring::RingRef;

/// Graded Betti numbers `beta_{i,j}`: homological degree `i`, internal
/// degree `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, u32), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: u32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((h, _), _)| *h == i)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.length()).map(|i| self.total(i)).collect()
    }

    /// Length of the resolution, i.e. the projective dimension.
    pub fn length(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u32, usize)> + '_ {
        self.entries.iter().map(|((i, j), n)| (*i, *j, *n))
    }

    fn add(&mut self, i: usize, j: u32) {
        *self.entries.entry((i, j)).or_insert(0) += 1;
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|((i, j), n)| format!("b{i},{j}={n}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn element_degree(ring: &RingRef, v: &FreeElement, shifts: &[u32]) -> Result<u32, KernelError> {
    let mut deg = None;
    for (pos, c) in v.iter().enumerate() {
        for (m, _) in c.terms() {
            let d = ring.degree(m) + shifts[pos];
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(KernelError::Unsupported(
                        "minimal resolutions need homogeneous input".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    deg.ok_or_else(|| KernelError::Structural("zero element has no degree".into()))
}

/// Minimal generators of a homogeneous submodule, with their degrees.
fn minimize(
    ring: &RingRef,
    rank: usize,
    gens: &[FreeElement],
    shifts: &[u32],
) -> Result<Vec<(FreeElement, u32)>, KernelError> {
    let mut graded: Vec<(FreeElement, u32)> = Vec::new();
    for g in gens {
        if g.iter().all(|c| c.is_zero()) {
            continue;
        }
        graded.push((g.clone(), element_degree(ring, g, shifts)?));
    }
    graded.sort_by_key(|(_, d)| *d);
    let mut kept: Vec<(FreeElement, u32)> = Vec::new();
    let mut i = 0;
    while i < graded.len() {
        let d = graded[i].1;
        let mut j = i;
        while j < graded.len() && graded[j].1 == d {
            j += 1;
        }
        let lower = Submodule::new(ring, rank, kept.iter().map(|(g, _)| g.clone()).collect())?;
        let nfs: Vec<FreeElement> = graded[i..j]
            .iter()
            .map(|(g, _)| if kept.is_empty() { g.clone() } else { lower.normal_form(g) })
            .collect();
        let mut cols: HashMap<(usize, Monomial), usize> = HashMap::new();
        for v in &nfs {
            for (pos, c) in v.iter().enumerate() {
                for (m, _) in c.terms() {
                    let n = cols.len();
                    cols.entry((pos, m.clone())).or_insert(n);
                }
            }
        }
        let mut ech = Echelon::new(ring.prime(), cols.len(), false);
        for (k, v) in nfs.iter().enumerate() {
            let mut dense = vec![0u32; cols.len()];
            for (pos, c) in v.iter().enumerate() {
                for (m, a) in c.terms() {
                    dense[cols[&(pos, m.clone())]] = *a;
                }
            }
            if matches!(ech.insert(dense), Insert::Independent(_)) {
                kept.push(graded[i + k].clone());
            }
        }
        i = j;
    }
    Ok(kept)
}

/// Betti table of the cokernel of `sub` inside `S^rank` with generator
/// degrees `shifts`.
pub fn resolve_cokernel(sub: &Submodule, shifts: &[u32]) -> Result<BettiTable, KernelError> {
    let ring = sub.ring().clone();
    if shifts.len() != sub.rank() {
        return Err(KernelError::Structural("one shift per free generator".into()));
    }
    let mut table = BettiTable::default();
    for &s in shifts {
        table.add(0, s);
    }
    let mut rank = sub.rank();
    let mut shifts = shifts.to_vec();
    let mut gens = sub.gens().to_vec();
    let mut i = 1;
    loop {
        let min = minimize(&ring, rank, &gens, &shifts)?;
        if min.is_empty() {
            return Ok(table);
        }
        if i == 1 && Submodule::new(&ring, rank, gens.clone())?.colength() == crate::Colength::Finite(0) {
            return Err(KernelError::Precondition("the module to resolve is zero".into()));
        }
        for (_, d) in &min {
            table.add(i, *d);
        }
        let m = Submodule::new(&ring, rank, min.iter().map(|(g, _)| g.clone()).collect())?;
        let syz = m.syzygies();
        shifts = min.iter().map(|(_, d)| *d).collect();
        rank = min.len();
        gens = syz.gens().to_vec();
        i += 1;
    }
}

/// Betti table of `S / ideal`.
pub fn resolve_quotient(ideal: &Ideal) -> Result<BettiTable, KernelError> {
    let ring = ideal.ring();
    let sub = Submodule::new(ring, 1, ideal.gens().iter().map(|g| vec![g.clone()]).collect())?;
    resolve_cokernel(&sub, &[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn residue_field() {
        let r = ring();
        let b = resolve_quotient(&Ideal::maximal(&r)).unwrap();
        assert_eq!(b.totals(), vec![1, 2, 1]);
        assert_eq!(b.get(2, 2), 1);
    }

    #[test]
    fn square_of_maximal() {
        let r = ring();
        let b = resolve_quotient(&Ideal::maximal(&r).power(2)).unwrap();
        assert_eq!(b.totals(), vec![1, 3, 2]);
    }

    #[test]
    fn hypersurface_and_inhomogeneous() {
        let r = ring();
        let b = resolve_quotient(&Ideal::parse(&r, &["x^2 + x*y"]).unwrap()).unwrap();
        assert_eq!(b.totals(), vec![1, 1]);
        let bad = Ideal::parse(&r, &["x^2 + y"]).unwrap();
        assert!(matches!(resolve_quotient(&bad), Err(KernelError::Unsupported(_))));
    }
}
