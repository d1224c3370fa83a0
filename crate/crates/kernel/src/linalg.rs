//! Dense linear algebra over `F_p`.

use crate::field;

/// Row echelon form built incrementally. With tracking enabled, every row
/// remembers its expression in the independent vectors inserted so far.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    combos: Option<Vec<Vec<u32>>>,
}

/// Outcome of inserting a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// Became basis vector number `.0`.
    Independent(usize),
    /// Equals the given combination of earlier basis vectors (empty when
    /// tracking is off).
    Dependent(Vec<u32>),
}

impl Echelon {
    pub fn new(p: u32, ncols: usize, track: bool) -> Self {
        Echelon {
            p,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: track.then(Vec::new),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` in place; returns the combination of basis vectors that
    /// was removed (empty without tracking).
    pub fn reduce(&self, v: &mut [u32]) -> Vec<u32> {
        let p = self.p;
        let mut combo = vec![0u32; if self.combos.is_some() { self.rows.len() } else { 0 }];
        for (k, row) in self.rows.iter().enumerate() {
            let c = v[self.pivots[k]];
            if c == 0 {
                continue;
            }
            let f = field::neg(c, p);
            for (x, &r) in v.iter_mut().zip(row).skip(self.pivots[k]) {
                if r != 0 {
                    *x = ((*x as u64 + f as u64 * r as u64) % p as u64) as u32;
                }
            }
            if let Some(combos) = &self.combos {
                for (acc, &b) in combo.iter_mut().zip(&combos[k]) {
                    if b != 0 {
                        *acc = ((*acc as u64 + c as u64 * b as u64) % p as u64) as u32;
                    }
                }
            }
        }
        combo
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn insert(&mut self, mut v: Vec<u32>) -> Insert {
        debug_assert_eq!(v.len(), self.ncols);
        let p = self.p;
        let combo = self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return Insert::Dependent(combo);
        };
        let inv = field::inv(v[piv], p);
        for x in v.iter_mut().skip(piv) {
            *x = field::mul(*x, inv, p);
        }
        let idx = self.rows.len();
        if let Some(combos) = &mut self.combos {
            // new row = (e_idx - combo) / pivot
            let mut c: Vec<u32> = combo.iter().map(|&a| field::mul(field::neg(a, p), inv, p)).collect();
            c.push(inv);
            combos.push(c);
        }
        self.rows.push(v);
        self.pivots.push(piv);
        Insert::Independent(idx)
    }
}

/// Basis of the kernel of the map sending basis vector `j` to `images[j]`.
pub fn kernel(p: u32, ncols: usize, images: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut ech = Echelon::new(p, ncols, true);
    let mut basis_src: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        match ech.insert(img.clone()) {
            Insert::Independent(_) => basis_src.push(j),
            Insert::Dependent(c) => {
                let mut k = vec![0u32; images.len()];
                k[j] = 1;
                for (b, &cb) in c.iter().enumerate() {
                    if cb != 0 {
                        k[basis_src[b]] = field::neg(cb, p);
                    }
                }
                out.push(k);
            }
        }
    }
    out
}

/// Rank of a list of vectors.
pub fn rank(p: u32, ncols: usize, vectors: &[Vec<u32>]) -> usize {
    let mut ech = Echelon::new(p, ncols, false);
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}
