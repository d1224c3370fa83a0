//! Monte-Carlo estimates of `a_r(I)` and the scan over powers of `I`.

use annvv_core::lc_estimator::{build_l_window, q_estimate, LcConfig, QEstimate, QStatus};
use annvv_core::local_model::{is_m_primary, MPrimaryIdeal, MPrimaryVerdict};
use annvv_core::superficial::{
    derive_seed, sample_superficial_sequence, vv_annihilator, vv_module, SuperficialConfig,
    VvConfig, VvModuleReport,
};
use annvv_core::{CoreError, Result};
use annvv_kernel::{intersect_finite, Ideal};
use sha2::{Digest, Sha256};
use rayon::prelude::*;

/// Samples without shrinkage that count as stabilized.
pub const STABILIZATION_WINDOW: usize = 8;

/// Short digest of a reduced Groebner basis.
pub fn fingerprint(ideal: &Ideal) -> String {
    let mut h = Sha256::new();
    for g in ideal.groebner() {
        h.update(g.to_string().as_bytes());
        h.update(b";");
    }
    hex::encode(&h.finalize()[..8])
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub sample: usize,
    pub seed: u64,
    pub vanished: bool,
    pub annihilator: Ideal,
    pub running: Ideal,
    pub fingerprint: String,
    /// The running ideal is contained in the previous one.
    pub descending: bool,
}

#[derive(Clone, Debug)]
pub struct ArEstimate {
    pub r: usize,
    pub samples: usize,
    pub seed: u64,
    pub trace: Vec<TraceStep>,
    pub ideal: Ideal,
    pub verdict: MPrimaryVerdict,
    /// First sample after which the intersection did not shrink for
    /// `STABILIZATION_WINDOW` samples.
    pub stabilized_at: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct EstimateConfig {
    pub superficial: SuperficialConfig,
    pub vv: VvConfig,
}

/// Intersect `ann V_I(x)` over `samples` sampled sequences of length `r`.
pub fn ar_estimate(
    ideal: &MPrimaryIdeal,
    r: usize,
    samples: usize,
    seed: u64,
    cfg: &EstimateConfig,
) -> Result<ArEstimate> {
    let d = ideal.local_ring().dim();
    if r == 0 || r > d {
        return Err(CoreError::Precondition(format!("r = {r} must lie in 1..={d}")));
    }
    let sampled: Vec<Result<(u64, VvModuleReport, Ideal)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let s = derive_seed(seed, k as u64);
            let seq = sample_superficial_sequence(ideal, r, s, &cfg.superficial)?;
            let rep = vv_module(&seq.elements(), ideal, &cfg.vv)?;
            let (ann, _) = vv_annihilator(&rep, s)?;
            Ok((s, rep, ann))
        })
        .collect();
    let mut running = Ideal::unit(ideal.ring());
    let mut trace: Vec<TraceStep> = Vec::with_capacity(samples);
    for (k, sample) in sampled.into_iter().enumerate() {
        let (s, rep, ann) = sample?;
        let next = if running.is_unit() {
            ann.clone()
        } else if ann.is_unit() {
            running.clone()
        } else {
            intersect_finite(&[&running, &ann])?
        };
        let descending = running.contains_ideal(&next);
        trace.push(TraceStep {
            sample: k + 1,
            seed: s,
            vanished: rep.is_zero(),
            fingerprint: fingerprint(&next),
            annihilator: ann,
            running: next.clone(),
            descending,
        });
        running = next;
    }
    let stabilized_at = stabilization_index(&trace);
    let mut warnings = Vec::new();
    if trace.iter().all(|t| t.vanished) {
        warnings.push(format!(
            "every sampled V vanished: depth G >= {r}, so the unit ideal is expected"
        ));
    }
    if stabilized_at.is_none() {
        warnings.push(format!(
            "intersection still shrinking within the last {STABILIZATION_WINDOW} samples"
        ));
    }
    let verdict = is_m_primary(&running);
    Ok(ArEstimate {
        r,
        samples,
        seed,
        trace,
        ideal: running,
        verdict,
        stabilized_at,
        warnings,
    })
}

fn stabilization_index(trace: &[TraceStep]) -> Option<usize> {
    let mut last_change = 0;
    for (k, step) in trace.iter().enumerate() {
        let changed = k == 0 || step.fingerprint != trace[k - 1].fingerprint;
        if changed {
            last_change = k;
        }
    }
    (trace.len() - last_change > STABILIZATION_WINDOW).then_some(last_change + 1)
}

/// `q_i(I)` for `i = 0..count`.
pub fn q_estimates(ideal: &MPrimaryIdeal, count: usize, seed: u64, cfg: &LcConfig) -> Result<Vec<QEstimate>> {
    let mut ctx = build_l_window(ideal, 2, seed)?;
    (0..count).map(|i| q_estimate(&mut ctx, i, cfg)).collect()
}

/// `q_0 ... q_{r-1} + J`, when those estimates are stable.
pub fn q_product(ideal: &MPrimaryIdeal, qs: &[QEstimate]) -> Option<Ideal> {
    annvv_core::lc_estimator::q_product(ideal, qs)
}

#[derive(Clone, Debug)]
pub struct PowerRow {
    pub l: u32,
    pub ar: std::result::Result<ArEstimate, String>,
    pub qs: std::result::Result<Vec<QEstimate>, String>,
    /// `q_i(I) ⊆ q_i(I^l)` per `i`; `None` when either side is unstable.
    pub veronese: Vec<Option<bool>>,
    /// `∩_{l' ≤ l} a_r(I^{l'})` over the rows that succeeded.
    pub running: Option<Ideal>,
    pub running_verdict: Option<MPrimaryVerdict>,
    /// The running intersection contains `q_0(I) ... q_{r-1}(I)`.
    pub running_contains_product: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct PowersScanReport {
    pub r: usize,
    pub l_max: u32,
    pub rows: Vec<PowerRow>,
    /// `a_r(I^l) = a_r(I^{l-1})` for `l = 2..=l_max`.
    pub tail_constant: Vec<Option<bool>>,
    /// `q_i(I^l) ⊆ q_i(I^{l'})` for `l | l'`: `(i, l, l', holds)`.
    pub divisibility: Vec<(usize, u32, u32, bool)>,
    /// Per `i`, the powers whose `q_i` contains every other scanned `q_i`.
    pub maximal: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct PowersConfig {
    pub samples: usize,
    pub estimate: EstimateConfig,
    pub lc: LcConfig,
}

impl Default for PowersConfig {
    fn default() -> Self {
        PowersConfig {
            samples: 8,
            estimate: EstimateConfig::default(),
            lc: LcConfig::default(),
        }
    }
}

/// Run the estimates on `I^l` for `l = 1..=l_max`.
pub fn powers_scan(
    ideal: &MPrimaryIdeal,
    r: usize,
    l_max: u32,
    seed: u64,
    cfg: &PowersConfig,
) -> Result<PowersScanReport> {
    if l_max < 2 {
        return Err(CoreError::Precondition("powers scan needs l_max >= 2".into()));
    }
    let d = ideal.local_ring().dim();
    let mut rows: Vec<PowerRow> = Vec::new();
    let mut running: Option<Ideal> = None;
    let mut base_q: Option<Vec<QEstimate>> = None;
    for l in 1..=l_max {
        let row_seed = derive_seed(seed, 0x5eed_0000 + l as u64);
        let power = ideal.declare_power(l);
        let (ar, qs) = match &power {
            Ok(p) => (
                ar_estimate(p, r, cfg.samples, row_seed, &cfg.estimate).map_err(|e| e.to_string()),
                q_estimates(p, d, row_seed, &cfg.lc).map_err(|e| e.to_string()),
            ),
            Err(e) => (Err(e.to_string()), Err(e.to_string())),
        };
        if l == 1 {
            base_q = qs.as_ref().ok().cloned();
        }
        let veronese = match (&base_q, &qs) {
            (Some(b), Ok(q)) => b
                .iter()
                .zip(q)
                .map(|(qi, ql)| match (&qi.ideal, &ql.ideal) {
                    (Some(a), Some(c)) => Some(c.contains_ideal(a)),
                    _ => None,
                })
                .collect(),
            _ => vec![None; d],
        };
        if let Ok(a) = &ar {
            running = Some(match running.take() {
                None => a.ideal.clone(),
                Some(prev) if prev.is_unit() => a.ideal.clone(),
                Some(prev) if a.ideal.is_unit() => prev,
                Some(prev) => intersect_finite(&[&prev, &a.ideal])?,
            });
        }
        let running_verdict = running.as_ref().map(is_m_primary);
        let product = base_q
            .as_ref()
            .filter(|b| b.len() >= r && b[..r].iter().all(|q| q.status == QStatus::Stable))
            .and_then(|b| q_product(ideal, &b[..r]));
        let running_contains_product = match (&running, &product) {
            (Some(run), Some(p)) => Some(run.contains_ideal(p)),
            _ => None,
        };
        rows.push(PowerRow {
            l,
            ar,
            qs,
            veronese,
            running: running.clone(),
            running_verdict,
            running_contains_product,
        });
    }
    let tail_constant = (1..rows.len())
        .map(|k| match (&rows[k - 1].ar, &rows[k].ar) {
            (Ok(a), Ok(b)) => Some(a.ideal.same_ideal(&b.ideal)),
            _ => None,
        })
        .collect();
    let q_of = |row: &PowerRow, i: usize| -> Option<Ideal> {
        row.qs.as_ref().ok().and_then(|q| q.get(i)).and_then(|q| q.ideal.clone())
    };
    let mut divisibility = Vec::new();
    let mut maximal = Vec::new();
    for i in 0..d {
        for a in &rows {
            for b in &rows {
                if b.l > a.l && b.l % a.l == 0 {
                    if let (Some(x), Some(y)) = (q_of(a, i), q_of(b, i)) {
                        divisibility.push((i, a.l, b.l, y.contains_ideal(&x)));
                    }
                }
            }
        }
        let all: Vec<(u32, Ideal)> = rows.iter().filter_map(|row| q_of(row, i).map(|q| (row.l, q))).collect();
        maximal.push(
            all.iter()
                .filter(|(_, q)| all.iter().all(|(_, o)| q.contains_ideal(o)))
                .map(|(l, _)| *l)
                .collect(),
        );
    }
    Ok(PowersScanReport {
        r,
        l_max,
        rows,
        tail_constant,
        divisibility,
        maximal,
    })
}
