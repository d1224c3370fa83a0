//! Modules of finite length as explicit vector spaces with variable
//! actions: quotient algebras `S/P` for ideals of finite colength, linear
//! maps between them, homology of short complexes, and annihilators by the
//! Buchberger–Moeller method.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::KernelError;
use crate::field;
use crate::groebner::Key;
use crate::ideal::Ideal;
use crate::linalg::{kernel, Echelon, Insert};
use crate::module::{FreeElement, Submodule};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// Sparse vector as sorted `(index, coefficient)` pairs, no zeros.
pub type SparseVec = Vec<(usize, u32)>;

fn axpy_sparse(p: u32, acc: &mut [u32], c: u32, v: &SparseVec) {
    for &(i, a) in v {
        acc[i] = ((acc[i] as u64 + c as u64 * a as u64) % p as u64) as u32;
    }
}

pub fn to_sparse(v: &[u32]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vec<u32> {
    let mut out = vec![0; dim];
    for &(i, c) in v {
        out[i] = c;
    }
    out
}

/// Linear map given by the images of the source basis vectors.
#[derive(Clone, Debug)]
pub struct LinearMap {
    pub src_dim: usize,
    pub tgt_dim: usize,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn zero(src_dim: usize, tgt_dim: usize) -> Self {
        LinearMap {
            src_dim,
            tgt_dim,
            cols: vec![Vec::new(); src_dim],
        }
    }

    pub fn apply(&self, p: u32, v: &SparseVec) -> SparseVec {
        let mut acc = vec![0u32; self.tgt_dim];
        for &(j, c) in v {
            axpy_sparse(p, &mut acc, c, &self.cols[j]);
        }
        to_sparse(&acc)
    }

    /// `other ∘ self`.
    pub fn then(&self, p: u32, other: &LinearMap) -> LinearMap {
        LinearMap {
            src_dim: self.src_dim,
            tgt_dim: other.tgt_dim,
            cols: self.cols.iter().map(|c| other.apply(p, c)).collect(),
        }
    }

    /// Block matrix from a grid of blocks; `blocks[r][c]` maps source block
    /// `c` to target block `r`, `None` meaning zero.
    pub fn from_blocks(
        src_dims: &[usize],
        tgt_dims: &[usize],
        blocks: &[Vec<Option<&LinearMap>>],
    ) -> LinearMap {
        let src_off: Vec<usize> = offsets(src_dims);
        let tgt_off: Vec<usize> = offsets(tgt_dims);
        let src_dim: usize = src_dims.iter().sum();
        let tgt_dim: usize = tgt_dims.iter().sum();
        let mut cols: Vec<SparseVec> = vec![Vec::new(); src_dim];
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    for (j, col) in b.cols.iter().enumerate() {
                        cols[src_off[c] + j].extend(col.iter().map(|&(i, a)| (tgt_off[r] + i, a)));
                    }
                }
            }
        }
        for c in &mut cols {
            c.sort_by_key(|t| t.0);
        }
        LinearMap {
            src_dim,
            tgt_dim,
            cols,
        }
    }

    pub fn rank(&self, p: u32) -> usize {
        let zero = LinearMap::zero(0, self.src_dim);
        Homology::new(p, &zero, self).boundary_free_rank()
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for d in dims {
        out.push(acc);
        acc += d;
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Component {
    indices: Vec<usize>,
    echelon: Echelon,
    boundary_rank: usize,
    /// global homology index of each representative, by echelon index
    rep_offset: usize,
    reps: usize,
    kernel_dim: usize,
}

/// Homology at the middle of `X --f--> Y --g--> Z`, computed independently
/// on the connected blocks of the two maps.
pub struct Homology {
    p: u32,
    mid_dim: usize,
    comps: Vec<Component>,
    comp_of: Vec<usize>,
    local: Vec<usize>,
    reps: Vec<SparseVec>,
}

impl Homology {
    pub fn new(p: u32, f: &LinearMap, g: &LinearMap) -> Self {
        let n = g.src_dim;
        assert_eq!(f.tgt_dim, n, "composable maps");
        let mut uf = UnionFind((0..n).collect());
        let mut first_hit: HashMap<usize, usize> = HashMap::new();
        for (j, col) in g.cols.iter().enumerate() {
            for &(t, _) in col {
                match first_hit.get(&t) {
                    Some(&k) => uf.union(j, k),
                    None => {
                        first_hit.insert(t, j);
                    }
                }
            }
        }
        for col in &f.cols {
            for w in col.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..n {
            let r = uf.find(j);
            groups.entry(r).or_default().push(j);
        }
        let mut comp_of = vec![0; n];
        let mut local = vec![0; n];
        let mut boundaries: Vec<Vec<&SparseVec>> = vec![Vec::new(); groups.len()];
        let groups: Vec<Vec<usize>> = groups.into_values().collect();
        for (c, idx) in groups.iter().enumerate() {
            for (l, &j) in idx.iter().enumerate() {
                comp_of[j] = c;
                local[j] = l;
            }
        }
        for col in &f.cols {
            if let Some(&(j, _)) = col.first() {
                boundaries[comp_of[j]].push(col);
            }
        }
        let mut comps = Vec::with_capacity(groups.len());
        let mut reps = Vec::new();
        for (c, idx) in groups.into_iter().enumerate() {
            let dim = idx.len();
            // kernel of g on this block
            let mut tgt_local: HashMap<usize, usize> = HashMap::new();
            for &j in &idx {
                for &(t, _) in &g.cols[j] {
                    let k = tgt_local.len();
                    tgt_local.entry(t).or_insert(k);
                }
            }
            let images: Vec<Vec<u32>> = idx
                .iter()
                .map(|&j| {
                    let mut v = vec![0u32; tgt_local.len()];
                    for &(t, a) in &g.cols[j] {
                        v[tgt_local[&t]] = a;
                    }
                    v
                })
                .collect();
            let cycles = kernel(p, tgt_local.len(), &images);
            let mut ech = Echelon::new(p, dim, true);
            for b in &boundaries[c] {
                let mut v = vec![0u32; dim];
                for &(j, a) in b.iter() {
                    v[local[j]] = a;
                }
                ech.insert(v);
            }
            let boundary_rank = ech.rank();
            let rep_offset = reps.len();
            for z in &cycles {
                if let Insert::Independent(_) = ech.insert(z.clone()) {
                    reps.push(
                        z.iter()
                            .enumerate()
                            .filter(|(_, &a)| a != 0)
                            .map(|(l, &a)| (idx[l], a))
                            .collect(),
                    );
                }
            }
            let nreps = ech.rank() - boundary_rank;
            comps.push(Component {
                indices: idx,
                echelon: ech,
                boundary_rank,
                rep_offset,
                reps: nreps,
                kernel_dim: cycles.len(),
            });
        }
        Homology {
            p,
            mid_dim: n,
            comps,
            comp_of,
            local,
            reps,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.comps.iter().map(|c| c.kernel_dim).sum()
    }

    fn boundary_free_rank(&self) -> usize {
        self.mid_dim - self.kernel_dim()
    }

    /// Cycles representing a basis of the homology.
    pub fn representatives(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Homology coordinates of a cycle.
    pub fn coordinates(&self, cycle: &SparseVec) -> Result<Vec<u32>, KernelError> {
        let mut out = vec![0u32; self.reps.len()];
        let mut pieces: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
        for &(j, a) in cycle {
            pieces.entry(self.comp_of[j]).or_default().push((self.local[j], a));
        }
        for (c, piece) in pieces {
            let comp = &self.comps[c];
            let mut v = vec![0u32; comp.indices.len()];
            for (l, a) in piece {
                v[l] = a;
            }
            let combo = comp.echelon.reduce(&mut v);
            if v.iter().any(|&x| x != 0) {
                return Err(KernelError::Precondition("vector is not a cycle".into()));
            }
            for k in 0..comp.reps {
                if let Some(&a) = combo.get(comp.boundary_rank + k) {
                    out[comp.rep_offset + k] = a;
                }
            }
        }
        Ok(out)
    }

    /// The homology as a module, given the action of each variable on the
    /// middle space (which must commute with both maps).
    pub fn module(&self, actions: &[LinearMap]) -> Result<FiniteModule, KernelError> {
        let mut acts = Vec::with_capacity(actions.len());
        for a in actions {
            let mut cols = Vec::with_capacity(self.reps.len());
            for r in &self.reps {
                let img = a.apply(self.p, r);
                cols.push(to_sparse(&self.coordinates(&img)?));
            }
            acts.push(cols);
        }
        Ok(FiniteModule {
            p: self.p,
            dim: self.reps.len(),
            actions: acts,
        })
    }
}

/// Finite-dimensional module over the ambient polynomial ring, given by the
/// action of each variable.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub p: u32,
    pub dim: usize,
    /// `actions[i][j]`: image of basis vector `j` under variable `i`.
    pub actions: Vec<Vec<SparseVec>>,
}

impl FiniteModule {
    pub fn direct_sum(parts: &[&FiniteModule]) -> FiniteModule {
        let p = parts[0].p;
        let nvars = parts[0].actions.len();
        let dims: Vec<usize> = parts.iter().map(|m| m.dim).collect();
        let off = offsets(&dims);
        let mut actions = vec![Vec::new(); nvars];
        for (k, m) in parts.iter().enumerate() {
            for (i, act) in m.actions.iter().enumerate() {
                for col in act {
                    actions[i].push(col.iter().map(|&(r, a)| (off[k] + r, a)).collect());
                }
            }
        }
        FiniteModule {
            p,
            dim: dims.iter().sum(),
            actions,
        }
    }

    pub fn act(&self, var: usize, v: &[u32]) -> Vec<u32> {
        let mut acc = vec![0u32; self.dim];
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                axpy_sparse(self.p, &mut acc, c, &self.actions[var][j]);
            }
        }
        acc
    }

    /// Basis vectors completing `m·M` to `M`; they generate `M` when every
    /// variable acts nilpotently.
    pub fn generators(&self) -> Vec<Vec<u32>> {
        let mut ech = Echelon::new(self.p, self.dim, false);
        for act in &self.actions {
            for col in act {
                ech.insert(to_dense(col, self.dim));
            }
        }
        let mut out = Vec::new();
        for k in 0..self.dim {
            let mut e = vec![0u32; self.dim];
            e[k] = 1;
            if let Insert::Independent(_) = ech.insert(e.clone()) {
                out.push(e);
            }
        }
        out
    }

    /// Annihilator of the whole module.
    pub fn annihilator(&self, ring: &RingRef) -> Ideal {
        let gens = self.generators();
        self.annihilator_of(ring, &gens)
    }

    /// Annihilator of the submodule generated by `gens`, as a reduced
    /// Groebner basis in `ring`.
    pub fn annihilator_of(&self, ring: &RingRef, gens: &[Vec<u32>]) -> Ideal {
        let p = self.p;
        let n = ring.nvars();
        assert_eq!(n, self.actions.len(), "one action per variable");
        let width = self.dim * gens.len();
        let apply = |var: usize, v: &[u32]| -> Vec<u32> {
            let mut out = Vec::with_capacity(width);
            for block in v.chunks(self.dim.max(1)) {
                out.extend(self.act(var, block));
            }
            out
        };
        let mut ech = Echelon::new(p, width, true);
        let mut standard: Vec<Monomial> = Vec::new();
        let mut vectors: HashMap<Monomial, Vec<u32>> = HashMap::new();
        let mut leads: Vec<Monomial> = Vec::new();
        let mut basis: Vec<Polynomial> = Vec::new();
        let mut queue: BTreeMap<Key, Monomial> = BTreeMap::new();
        let one = Monomial::one(n);
        queue.insert(ring.sort_key(&one).into_iter().collect(), one);
        if width == 0 {
            return Ideal::unit(ring);
        }
        while let Some((_, m)) = queue.pop_first() {
            if leads.iter().any(|l| l.divides(&m)) {
                continue;
            }
            let v = if m.is_one() {
                gens.concat()
            } else {
                let i = (0..n)
                    .find(|&i| {
                        m.exponents()[i] > 0
                            && vectors.contains_key(&Monomial::var(n, i).quotient_of(&m).unwrap())
                    })
                    .expect("divisors of a standard monomial are standard");
                let prev = &vectors[&Monomial::var(n, i).quotient_of(&m).unwrap()];
                apply(i, prev)
            };
            match ech.insert(v.clone()) {
                Insert::Independent(_) => {
                    standard.push(m.clone());
                    vectors.insert(m.clone(), v);
                    for i in 0..n {
                        let next = m.mul_var(i);
                        queue.insert(ring.sort_key(&next).into_iter().collect(), next);
                    }
                }
                Insert::Dependent(combo) => {
                    let mut terms = vec![(m.clone(), 1u32)];
                    for (k, &c) in combo.iter().enumerate() {
                        if c != 0 {
                            terms.push((standard[k].clone(), field::neg(c, p)));
                        }
                    }
                    leads.push(m.clone());
                    basis.push(Polynomial::from_terms(ring, terms));
                }
            }
        }
        basis.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
        Ideal::from_reduced_gb(ring, basis)
    }
}

/// `S/P` for an ideal `P` of finite colength, with the standard monomials
/// of its Groebner basis as vector-space basis.
pub struct QuotientAlgebra {
    ring: RingRef,
    ideal: Ideal,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    mult: Vec<Vec<SparseVec>>,
    memo: Mutex<HashMap<Monomial, SparseVec>>,
}

impl QuotientAlgebra {
    pub fn new(ideal: &Ideal) -> Result<Self, KernelError> {
        let ring = ideal.ring().clone();
        let basis = ideal.standard_monomials().ok_or_else(|| {
            KernelError::Precondition("quotient algebra needs finite colength".into())
        })?;
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let reducer = ideal.reducer();
        let mut mult = Vec::with_capacity(ring.nvars());
        for v in 0..ring.nvars() {
            let mut cols = Vec::with_capacity(basis.len());
            for s in &basis {
                let m = s.mul_var(v);
                let col = match index.get(&m) {
                    Some(&k) => vec![(k, 1)],
                    None => {
                        let nf = reducer.normal_form(&Polynomial::monomial(&ring, m));
                        let mut c: SparseVec =
                            nf.terms().iter().map(|(t, a)| (index[t], *a)).collect();
                        c.sort_by_key(|t| t.0);
                        c
                    }
                };
                cols.push(col);
            }
            mult.push(cols);
        }
        Ok(QuotientAlgebra {
            ring,
            ideal: ideal.clone(),
            basis,
            index,
            mult,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn variable_action(&self, v: usize) -> LinearMap {
        LinearMap {
            src_dim: self.dim(),
            tgt_dim: self.dim(),
            cols: self.mult[v].clone(),
        }
    }

    pub fn monomial_coords(&self, m: &Monomial) -> SparseVec {
        if let Some(&k) = self.index.get(m) {
            return vec![(k, 1)];
        }
        if let Some(v) = self.memo.lock().unwrap().get(m) {
            return v.clone();
        }
        let i = m.exponents().iter().position(|&e| e > 0).expect("non-constant");
        let prev = self.monomial_coords(&Monomial::var(m.nvars(), i).quotient_of(m).unwrap());
        let mut acc = vec![0u32; self.dim()];
        for &(j, c) in &prev {
            axpy_sparse(self.ring.prime(), &mut acc, c, &self.mult[i][j]);
        }
        let out = to_sparse(&acc);
        self.memo.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    pub fn coords(&self, f: &Polynomial) -> SparseVec {
        let mut acc = vec![0u32; self.dim()];
        for (m, c) in f.terms() {
            axpy_sparse(self.ring.prime(), &mut acc, *c, &self.monomial_coords(m));
        }
        to_sparse(&acc)
    }

    pub fn element(&self, v: &SparseVec) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            v.iter().map(|&(i, c)| (self.basis[i].clone(), c)).collect(),
        )
    }

    /// Multiplication by `f` from `src` into `self`; well defined when
    /// `f` times the ideal of `src` lies in the ideal of `self`.
    pub fn multiplication_from(&self, src: &QuotientAlgebra, f: &Polynomial) -> LinearMap {
        let cols = src
            .basis
            .iter()
            .map(|s| {
                let mut acc = vec![0u32; self.dim()];
                for (m, c) in f.terms() {
                    axpy_sparse(self.ring.prime(), &mut acc, *c, &self.monomial_coords(&m.mul(s)));
                }
                to_sparse(&acc)
            })
            .collect();
        LinearMap {
            src_dim: src.dim(),
            tgt_dim: self.dim(),
            cols,
        }
    }

    pub fn module(&self) -> FiniteModule {
        FiniteModule {
            p: self.ring.prime(),
            dim: self.dim(),
            actions: self.mult.clone(),
        }
    }

    /// `(P : f)` computed inside `S/P`.
    pub fn colon(&self, f: &Polynomial) -> Ideal {
        let g = to_dense(&self.coords(f), self.dim());
        self.module().annihilator_of(&self.ring, &[g])
    }
}

/// `S^rank / N` for a submodule `N` of finite colength, with the standard
/// monomials `(position, monomial)` as basis.
pub struct ModuleQuotient {
    sub: Submodule,
    basis: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl ModuleQuotient {
    pub fn new(sub: Submodule) -> Result<Self, KernelError> {
        let basis = sub.standard_monomials().ok_or_else(|| {
            KernelError::Precondition("module quotient needs finite length".into())
        })?;
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        Ok(ModuleQuotient { sub, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(usize, Monomial)] {
        &self.basis
    }

    pub fn submodule(&self) -> &Submodule {
        &self.sub
    }

    pub fn coords(&self, v: &FreeElement) -> SparseVec {
        let nf = self.sub.normal_form(v);
        let mut out: SparseVec = Vec::new();
        for (pos, c) in nf.iter().enumerate() {
            for (m, a) in c.terms() {
                out.push((self.index[&(pos, m.clone())], *a));
            }
        }
        out.sort_by_key(|t| t.0);
        out
    }

    /// Basis element `k` as a free-module element.
    pub fn element(&self, k: usize) -> FreeElement {
        let ring = self.sub.ring();
        let (pos, m) = &self.basis[k];
        (0..self.sub.rank())
            .map(|i| {
                if i == *pos {
                    Polynomial::monomial(ring, m.clone())
                } else {
                    Polynomial::zero(ring)
                }
            })
            .collect()
    }

    pub fn module(&self) -> FiniteModule {
        let ring = self.sub.ring();
        let actions = (0..ring.nvars())
            .map(|v| {
                (0..self.dim())
                    .map(|k| {
                        let (pos, m) = &self.basis[k];
                        let shifted = m.mul_var(v);
                        match self.index.get(&(*pos, shifted.clone())) {
                            Some(&j) => vec![(j, 1)],
                            None => {
                                let mut e = vec![Polynomial::zero(ring); self.sub.rank()];
                                e[*pos] = Polynomial::monomial(ring, shifted);
                                self.coords(&e)
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        FiniteModule {
            p: ring.prime(),
            dim: self.dim(),
            actions,
        }
    }
}

/// Intersection of ideals of finite colength, as the annihilator of
/// `(1, .., 1)` in the direct sum of the quotients.
pub fn intersect_finite(ideals: &[&Ideal]) -> Result<Ideal, KernelError> {
    let ring = ideals
        .first()
        .ok_or_else(|| KernelError::Precondition("empty intersection".into()))?
        .ring()
        .clone();
    let algs = ideals
        .iter()
        .map(|i| QuotientAlgebra::new(i))
        .collect::<Result<Vec<_>, _>>()?;
    let mods: Vec<FiniteModule> = algs.iter().map(|a| a.module()).collect();
    let refs: Vec<&FiniteModule> = mods.iter().collect();
    let sum = FiniteModule::direct_sum(&refs);
    let mut g = Vec::with_capacity(sum.dim);
    let one = Polynomial::one(&ring);
    for a in &algs {
        g.extend(to_dense(&a.coords(&one), a.dim()));
    }
    Ok(sum.annihilator_of(&ring, &[g]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;

    fn ring() -> RingRef {
        PolyRing::new(32003, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn quotient_algebra_basics() {
        let r = ring();
        let i = Ideal::parse(&r, &["x^2", "y^2"]).unwrap();
        let q = QuotientAlgebra::new(&i).unwrap();
        assert_eq!(q.dim(), 4);
        let f = r.parse("x*y + x^3").unwrap();
        assert_eq!(q.element(&q.coords(&f)).to_string(), "x*y");
        assert!(q.colon(&r.parse("x").unwrap()).same_ideal(&Ideal::parse(&r, &["x", "y^2"]).unwrap()));
    }

    #[test]
    fn annihilator_matches_generic_colon() {
        let r = ring();
        let i = Ideal::parse(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]).unwrap();
        let q = QuotientAlgebra::new(&i).unwrap();
        let f = r.parse("x^2 + 3*x*y - y^2").unwrap();
        assert!(q.colon(&f).same_ideal(&i.colon_element(&f)));
        assert!(q.module().annihilator(&r).same_ideal(&i));
    }

    #[test]
    fn module_quotient_action() {
        let r = ring();
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        let z = Polynomial::zero(&r);
        // S^2 / (x e1 - y e2, m^2 e1, m^2 e2)
        let mut gens = vec![vec![x.clone(), y.neg()]];
        for g in Ideal::maximal(&r).power(2).gens() {
            gens.push(vec![g.clone(), z.clone()]);
            gens.push(vec![z.clone(), g.clone()]);
        }
        let q = ModuleQuotient::new(Submodule::new(&r, 2, gens).unwrap()).unwrap();
        assert_eq!(q.dim(), 5);
        let ann = q.module().annihilator(&r);
        assert!(ann.same_ideal(&Ideal::maximal(&r).power(2)));
    }

    #[test]
    fn finite_intersection() {
        let r = ring();
        let a = Ideal::parse(&r, &["x^2", "y"]).unwrap();
        let b = Ideal::parse(&r, &["x", "y^3"]).unwrap();
        let c = intersect_finite(&[&a, &b]).unwrap();
        assert!(c.same_ideal(&a.intersect(&b)));
    }

    #[test]
    fn homology_of_koszul_on_residue_field() {
        // k -> k^2 -> k with zero maps: homology is everything in the middle
        let p = 101;
        let f = LinearMap::zero(1, 2);
        let g = LinearMap::zero(2, 1);
        let h = Homology::new(p, &f, &g);
        assert_eq!(h.dim(), 2);
        let f = LinearMap {
            src_dim: 1,
            tgt_dim: 2,
            cols: vec![vec![(0, 1), (1, 1)]],
        };
        let h = Homology::new(p, &f, &g);
        assert_eq!(h.dim(), 1);
        assert_eq!(h.coordinates(&vec![(0, 1), (1, 1)]).unwrap(), vec![0]);
        assert!(h.coordinates(&vec![(0, 1)]).unwrap()[0] != 0);
    }
}
