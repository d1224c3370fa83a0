//! Estimates of the graded pieces of `H^i_{R_+}(L)` for `L = ⊕ A/I^{n+1}`,
//! as colimits of Koszul cohomology of `u^t` on finite windows, and the
//! ideals `q_i(I)` built from them.
//!
//! Everything here is experimental: a piece is reported only when its
//! dimension and annihilator agree for consecutive Koszul powers.

use std::collections::HashMap;

use annvv_kernel::{field, intersect_finite, Homology, Ideal, LinearMap};

use crate::error::{CoreError, Result};
use crate::local_model::{is_m_primary, MPrimaryIdeal, MPrimaryVerdict};
use crate::superficial::{
    sample_superficial_sequence, LSeriesWindow, SuperficialConfig, SuperficialSequence,
    VvModuleReport,
};

#[derive(Clone, Debug)]
pub struct LcConfig {
    /// Largest Koszul power tried.
    pub t_max: u32,
    /// Consecutive powers that must agree.
    pub agree: u32,
    /// Zero pieces required after the support before the scan stops.
    pub zero_tail: u32,
    /// Highest degree scanned; default `2N + 2`.
    pub n_cap: Option<i64>,
    /// Lowest degree scanned; default `-d`.
    pub n_min: Option<i64>,
}

impl Default for LcConfig {
    fn default() -> Self {
        LcConfig {
            t_max: 6,
            agree: 2,
            zero_tail: 3,
            n_cap: None,
            n_min: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceStatus {
    Stable,
    Zero,
    Unstable,
}

#[derive(Clone, Debug)]
pub struct CohomologyPieceEstimate {
    pub i: usize,
    pub n: i64,
    pub dim: Option<usize>,
    pub annihilator: Option<Ideal>,
    /// Koszul power at which agreement started.
    pub onset_t: Option<u32>,
    /// Dimension per power tried.
    pub dims_by_t: Vec<(u32, usize)>,
    pub status: PieceStatus,
}

/// The window of `L` together with cached powers of the `u_i`.
pub struct LcContext<'a> {
    pub ideal: &'a MPrimaryIdeal,
    pub sequence: SuperficialSequence,
    pub window: LSeriesWindow,
    powers: HashMap<(usize, i64, u32), LinearMap>,
}

/// `L` on degrees `0..=n_max` with the action of a sampled maximal
/// superficial sequence; the actions must commute.
pub fn build_l_window<'a>(ideal: &'a MPrimaryIdeal, n_max: u32, seed: u64) -> Result<LcContext<'a>> {
    let d = ideal.local_ring().dim();
    let sequence = sample_superficial_sequence(ideal, d, seed, &SuperficialConfig::default())?;
    let window = LSeriesWindow::build(ideal, &sequence.elements(), n_max)?;
    if !window.actions_commute() {
        return Err(CoreError::Precondition("actions of u on L do not commute".into()));
    }
    Ok(LcContext {
        ideal,
        sequence,
        window,
        powers: HashMap::new(),
    })
}

impl LcContext<'_> {
    fn prime(&self) -> u32 {
        self.ideal.ring().prime()
    }

    /// `u_j^t : L_m -> L_{m+t}`; `None` when the source is zero.
    fn power(&mut self, j: usize, m: i64, t: u32) -> Option<LinearMap> {
        if m < 0 {
            return None;
        }
        if let Some(p) = self.powers.get(&(j, m, t)) {
            return Some(p.clone());
        }
        let p = self.prime();
        let mut acc = self.window.actions[j][m as usize].clone();
        for k in 1..t {
            acc = acc.then(p, &self.window.actions[j][m as usize + k as usize]);
        }
        self.powers.insert((j, m, t), acc.clone());
        Some(acc)
    }

    /// Subsets of `0..d` of size `k`, in lexicographic order.
    fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for j in start..d {
                cur.push(j);
                rec(j + 1, d, k, cur, out);
                cur.pop();
            }
        }
        rec(0, d, k, &mut cur, &mut out);
        out
    }

    /// Koszul differential `C^k_n -> C^{k+1}_n` for `u^t`.
    fn differential(&mut self, k: usize, n: i64, t: u32) -> LinearMap {
        let d = self.window.elements.len();
        let p = self.prime();
        let src = Self::subsets(d, k);
        let tgt = Self::subsets(d, k + 1);
        let ms = n + k as i64 * t as i64;
        let src_dims = vec![self.window.dim(ms); src.len()];
        let tgt_dims = vec![self.window.dim(ms + t as i64); tgt.len()];
        if k + 1 > d || src.is_empty() {
            return LinearMap::zero(src_dims.iter().sum(), tgt_dims.iter().sum());
        }
        let mut store: Vec<Vec<Option<LinearMap>>> = vec![vec![None; src.len()]; tgt.len()];
        for (c, s) in src.iter().enumerate() {
            for j in 0..d {
                if s.contains(&j) || src_dims[c] == 0 {
                    continue;
                }
                let mut sup = s.clone();
                sup.push(j);
                sup.sort_unstable();
                let r = tgt.iter().position(|x| *x == sup).expect("subset");
                let before = s.iter().filter(|&&e| e < j).count();
                let mut m = self.power(j, ms, t).expect("nonzero source");
                if before % 2 == 1 {
                    for col in &mut m.cols {
                        for e in col.iter_mut() {
                            e.1 = field::neg(e.1, p);
                        }
                    }
                }
                store[r][c] = Some(m);
            }
        }
        let blocks: Vec<Vec<Option<&LinearMap>>> =
            store.iter().map(|row| row.iter().map(|b| b.as_ref()).collect()).collect();
        LinearMap::from_blocks(&src_dims, &tgt_dims, &blocks)
    }

    /// Highest degree of `L` touched by `H^i(u^t)_n`.
    pub fn reach(&self, i: usize, n: i64, t: u32) -> i64 {
        let d = self.window.elements.len();
        n + (i + 1).min(d) as i64 * t as i64
    }

    /// `H^i(u^t; L)_n` with its annihilator when nonzero.
    pub fn koszul_cohomology(&mut self, i: usize, n: i64, t: u32) -> Result<(usize, Option<Ideal>)> {
        let need = self.reach(i, n, t);
        if need > self.window.n_max as i64 {
            self.window.extend(self.ideal, need as u32)?;
        }
        let p = self.prime();
        let d = self.window.elements.len();
        let incoming = if i == 0 {
            let tgt = self.window.dim(n);
            LinearMap::zero(0, tgt)
        } else {
            self.differential(i - 1, n, t)
        };
        let outgoing = if i >= d {
            LinearMap::zero(incoming.tgt_dim, 0)
        } else {
            self.differential(i, n, t)
        };
        let h = Homology::new(p, &incoming, &outgoing);
        let dim = h.dim();
        if dim == 0 {
            return Ok((0, None));
        }
        let m = n + i as i64 * t as i64;
        let count = Self::subsets(d, i).len();
        let degrees = vec![m; count];
        let ring = self.ideal.ring().clone();
        let actions: Vec<LinearMap> = (0..ring.nvars())
            .map(|v| self.window.variable_action(&degrees, v))
            .collect();
        let module = h.module(&actions)?;
        Ok((dim, Some(module.annihilator(&ring))))
    }

    /// Colimit estimate of `H^i_{R_+}(L)_n`.
    pub fn cohomology_piece(&mut self, i: usize, n: i64, cfg: &LcConfig) -> Result<CohomologyPieceEstimate> {
        let d = self.window.elements.len();
        if i >= d {
            return Err(CoreError::Precondition(format!("index {i} must be below dim A = {d}")));
        }
        let mut dims_by_t = Vec::new();
        let mut prev: Option<(usize, Option<Ideal>)> = None;
        let mut run = 1;
        let mut onset: Option<u32> = None;
        for t in 1..=cfg.t_max {
            let cur = self.koszul_cohomology(i, n, t)?;
            dims_by_t.push((t, cur.0));
            let same = prev.as_ref().is_some_and(|(pd, pa)| {
                *pd == cur.0
                    && match (pa, &cur.1) {
                        (None, None) => true,
                        (Some(a), Some(b)) => a.same_ideal(b),
                        _ => false,
                    }
            });
            if same {
                run += 1;
            } else {
                run = 1;
                onset = Some(t);
            }
            if run >= cfg.agree {
                let status = if cur.0 == 0 { PieceStatus::Zero } else { PieceStatus::Stable };
                return Ok(CohomologyPieceEstimate {
                    i,
                    n,
                    dim: Some(cur.0),
                    annihilator: cur.1,
                    onset_t: onset,
                    dims_by_t,
                    status,
                });
            }
            prev = Some(cur);
        }
        Ok(CohomologyPieceEstimate {
            i,
            n,
            dim: None,
            annihilator: None,
            onset_t: None,
            dims_by_t,
            status: PieceStatus::Unstable,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QStatus {
    Stable,
    Unstable,
}

#[derive(Clone, Debug)]
pub struct QEstimate {
    pub i: usize,
    /// Degrees scanned, lowest and highest.
    pub scanned: (i64, i64),
    /// Degrees with a nonzero piece.
    pub support: Vec<i64>,
    pub pieces: Vec<CohomologyPieceEstimate>,
    pub ideal: Option<Ideal>,
    pub verdict: Option<MPrimaryVerdict>,
    pub status: QStatus,
    /// A nonzero piece sits at the lowest scanned degree, so lower degrees
    /// may contribute.
    pub lower_edge_nonzero: bool,
}

/// `q_i(I)`: intersection of the annihilators of the nonzero pieces.
pub fn q_estimate(ctx: &mut LcContext<'_>, i: usize, cfg: &LcConfig) -> Result<QEstimate> {
    let d = ctx.window.elements.len() as i64;
    let big_n = ctx.ideal.n_index() as i64;
    let cap = cfg.n_cap.unwrap_or(2 * big_n + 2);
    let mut pieces = Vec::new();
    let mut zeros = 0;
    let mut stable = true;
    let mut tail_found = false;
    let low = cfg.n_min.unwrap_or(-d);
    let mut n = low;
    while n <= cap {
        let piece = ctx.cohomology_piece(i, n, cfg)?;
        match piece.status {
            PieceStatus::Zero => zeros += 1,
            PieceStatus::Stable => zeros = 0,
            PieceStatus::Unstable => {
                zeros = 0;
                stable = false;
            }
        }
        pieces.push(piece);
        if zeros >= cfg.zero_tail && n >= big_n {
            tail_found = true;
            break;
        }
        n += 1;
    }
    let scanned = (low, n.min(cap));
    let support: Vec<i64> = pieces
        .iter()
        .filter(|p| p.status == PieceStatus::Stable)
        .map(|p| p.n)
        .collect();
    let lower_edge_nonzero = support.first() == Some(&low);
    if !stable || !tail_found {
        return Ok(QEstimate {
            i,
            scanned,
            support,
            pieces,
            ideal: None,
            verdict: None,
            status: QStatus::Unstable,
            lower_edge_nonzero,
        });
    }
    let anns: Vec<&Ideal> = pieces.iter().filter_map(|p| p.annihilator.as_ref()).collect();
    let ideal = if anns.is_empty() {
        Ideal::unit(ctx.ideal.ring())
    } else {
        intersect_finite(&anns)?
    };
    let verdict = is_m_primary(&ideal);
    Ok(QEstimate {
        i,
        scanned,
        support,
        pieces,
        ideal: Some(ideal),
        verdict: Some(verdict),
        status: QStatus::Stable,
        lower_edge_nonzero,
    })
}

/// `q_0 ... q_{r-1}` (plus `J`) when every factor is stable.
pub fn q_product(ideal: &MPrimaryIdeal, qs: &[QEstimate]) -> Option<Ideal> {
    let mut acc = Ideal::unit(ideal.ring());
    for q in qs {
        acc = acc.product(q.ideal.as_ref()?);
    }
    Some(acc.sum(ideal.local_ring().relations()))
}

#[derive(Clone, Debug)]
pub struct QProductRow {
    pub seed: u64,
    pub contained: bool,
    /// Generators of the product outside `ann V`.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct QProductCheck {
    pub r: usize,
    pub product: Option<Ideal>,
    pub rows: Vec<QProductRow>,
    /// Reason the check was skipped.
    pub skipped: Option<String>,
}

impl QProductCheck {
    pub fn passed(&self) -> bool {
        self.skipped.is_none() && self.rows.iter().all(|r| r.contained)
    }
}

/// Check `q_0 ... q_{r-1} ⊆ ann V_I(x)` for each sampled sequence.
pub fn q_product_check(
    ideal: &MPrimaryIdeal,
    qs: &[QEstimate],
    r: usize,
    samples: &[(u64, &VvModuleReport)],
) -> QProductCheck {
    if qs.len() < r || qs[..r].iter().any(|q| q.status != QStatus::Stable) {
        return QProductCheck {
            r,
            product: None,
            rows: Vec::new(),
            skipped: Some("some q_i with i < r did not stabilize".into()),
        };
    }
    let product = q_product(ideal, &qs[..r]).expect("stable");
    let mut rows = Vec::new();
    for (seed, rep) in samples {
        let Some(ann) = rep.annihilator.as_ref() else {
            rows.push(QProductRow {
                seed: *seed,
                contained: false,
                witnesses: vec!["VV report not stabilized".into()],
            });
            continue;
        };
        let witnesses: Vec<String> = product
            .groebner()
            .iter()
            .filter(|g| !ann.contains(g))
            .map(|g| g.to_string())
            .collect();
        rows.push(QProductRow {
            seed: *seed,
            contained: witnesses.is_empty(),
            witnesses,
        });
    }
    QProductCheck {
        r,
        product: Some(product),
        rows,
        skipped: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_model::{build_ring, declare_ideal_str};

    #[test]
    fn window_of_maximal_ideal() {
        let a = build_ring(32003, &["x", "y"], &[]).unwrap();
        let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
        let ctx = build_l_window(&m, 4, 1).unwrap();
        assert_eq!(ctx.window.dim(0), 1);
        for n in 0..=4 {
            assert_eq!(ctx.window.dim(n) as u64, m.power(n as u32 + 1).colength().finite().unwrap());
        }
        let p = m.ring().prime();
        assert_eq!(ctx.window.actions[0][0].rank(p), 1);
    }

    #[test]
    fn regular_case_has_no_torsion() {
        let a = build_ring(32003, &["x", "y"], &[]).unwrap();
        let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
        let mut ctx = build_l_window(&m, 4, 1).unwrap();
        let q0 = q_estimate(&mut ctx, 0, &LcConfig::default()).unwrap();
        assert_eq!(q0.status, QStatus::Stable);
        assert!(q0.support.is_empty());
        assert!(q0.ideal.unwrap().is_unit());
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(LcContext::subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(LcContext::subsets(2, 0), vec![Vec::<usize>::new()]);
    }
}
