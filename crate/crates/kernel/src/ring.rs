use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::KernelError;
use crate::field;
use crate::monomial::Monomial;

/// Global monomial orders supported by the engine.
///
/// Both are built from weighted degree-reverse-lexicographic comparison;
/// `Elimination` compares the first `block` variables first, so every
/// Groebner basis under it restricts to one of the elimination ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    DegRevLex,
    Elimination { block: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    prime: u32,
    names: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
}

pub type RingRef = Arc<PolyRing>;

impl PolyRing {
    pub fn new(prime: u64, names: Vec<String>) -> Result<RingRef, KernelError> {
        let w = vec![1; names.len()];
        Self::with_weights(prime, names, w, MonomialOrder::DegRevLex)
    }

    pub fn with_weights(
        prime: u64,
        names: Vec<String>,
        weights: Vec<u32>,
        order: MonomialOrder,
    ) -> Result<RingRef, KernelError> {
        let prime = field::check_prime(prime)?;
        if weights.len() != names.len() || weights.contains(&0) {
            return Err(KernelError::Structural(
                "weights must be positive, one per variable".into(),
            ));
        }
        if let MonomialOrder::Elimination { block } = order {
            if block > names.len() {
                return Err(KernelError::Structural("elimination block too large".into()));
            }
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(KernelError::Structural(format!("bad variable name '{n}'")));
            }
        }
        Ok(Arc::new(PolyRing {
            prime,
            names,
            weights,
            order,
        }))
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.weights)
    }

    /// Same variables and weights, different order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(PolyRing {
            order,
            ..self.clone()
        })
    }

    /// Ring with `extra` variables prepended and eliminated first.
    pub fn elimination_extension(&self, extra: &[(&str, u32)]) -> RingRef {
        let mut names: Vec<String> = extra.iter().map(|(n, _)| n.to_string()).collect();
        let mut weights: Vec<u32> = extra.iter().map(|(_, w)| *w).collect();
        for (n, w) in self.names.iter().zip(&self.weights) {
            let mut name = n.clone();
            while names.contains(&name) {
                name.push('_');
            }
            names.push(name);
            weights.push(*w);
        }
        Arc::new(PolyRing {
            prime: self.prime,
            names,
            weights,
            order: MonomialOrder::Elimination { block: extra.len() },
        })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::DegRevLex => self.cmp_block(a, b, 0, self.nvars()),
            MonomialOrder::Elimination { block } => self
                .cmp_block(a, b, 0, block)
                .then_with(|| self.cmp_block(a, b, block, self.nvars())),
        }
    }

    /// Key whose lexicographic order agrees with `cmp`.
    pub fn sort_key(&self, m: &Monomial) -> SmallVec<[u32; 12]> {
        let mut key = SmallVec::new();
        match self.order {
            MonomialOrder::DegRevLex => self.push_block_key(m, 0, self.nvars(), &mut key),
            MonomialOrder::Elimination { block } => {
                self.push_block_key(m, 0, block, &mut key);
                self.push_block_key(m, block, self.nvars(), &mut key);
            }
        }
        key
    }

    fn push_block_key(&self, m: &Monomial, lo: usize, hi: usize, key: &mut SmallVec<[u32; 12]>) {
        let e = &m.0[lo..hi];
        key.push(e.iter().zip(&self.weights[lo..hi]).map(|(&e, &w)| e as u32 * w).sum());
        key.extend(e.iter().rev().map(|&x| u32::MAX - x as u32));
    }

    fn cmp_block(&self, a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        let (ea, eb) = (&a.0[lo..hi], &b.0[lo..hi]);
        let w = &self.weights[lo..hi];
        let da: u32 = ea.iter().zip(w).map(|(&e, &w)| e as u32 * w).sum();
        let db: u32 = eb.iter().zip(w).map(|(&e, &w)| e as u32 * w).sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..ea.len()).rev() {
            if ea[i] != eb[i] {
                return eb[i].cmp(&ea[i]);
            }
        }
        Ordering::Equal
    }

    pub fn fmt_monomial(&self, m: &Monomial, f: &mut dyn fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(&self.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}
