//! Property checks run by `verify-all`, one function per property.

use serde_json::{json, Value};

use annvv_core::blowup::{depth_assoc_graded, is_g_regular_sequence, DepthStrategy};
use annvv_core::lc_estimator::{q_product_check, QStatus};
use annvv_core::local_model::{MPrimaryIdeal, MPrimaryVerdict};
use annvv_core::superficial::{
    derive_seed, koszul_h1_check, sample_superficial_sequence, vv_module, SuperficialSequence,
    VvModuleReport,
};
use annvv_core::CoreError;
use annvv_kernel::Ideal;

use crate::commands::{status_of_error, RunConfig};
use crate::estimate::{ar_estimate, powers_scan, q_estimates, q_product, ArEstimate};
use crate::report::{ideal_json, verdict_json, Status};

/// Sequences sampled per check.
pub const CHECK_SAMPLES: usize = 3;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    fn new(name: &'static str, status: Status, detail: Value) -> Check {
        Check { name, status, detail }
    }

    fn error(name: &'static str, e: &CoreError) -> Check {
        Check::new(name, status_of_error(e), json!({ "error": e.to_string() }))
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "status": self.status, "detail": self.detail })
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Sampled maximal sequences with the VV report of every prefix.
pub struct Samples {
    pub runs: Vec<(u64, SuperficialSequence, Vec<VvModuleReport>)>,
}

pub fn samples(i: &MPrimaryIdeal, cfg: &RunConfig, count: usize) -> annvv_core::Result<Samples> {
    let d = i.local_ring().dim();
    let mut runs = Vec::new();
    for k in 0..count {
        let s = derive_seed(cfg.seed, 0xc4ec_0000 + k as u64);
        let seq = sample_superficial_sequence(i, d, s, &cfg.superficial())?;
        let mut reps = Vec::new();
        for r in 1..=d {
            let rep = vv_module(&seq.elements()[..r], i, &cfg.vv())?;
            if !rep.is_stabilized() {
                return Err(CoreError::Unstabilized {
                    cap: rep.last_degree(),
                    seed: s,
                });
            }
            reps.push(rep);
        }
        runs.push((s, seq, reps));
    }
    Ok(Samples { runs })
}

/// Both depth oracles agree; returns the depth when they do.
pub fn check_depth(i: &MPrimaryIdeal, cfg: &RunConfig) -> (Check, Option<usize>) {
    match depth_assoc_graded(i, DepthStrategy::Both, cfg.seed) {
        Ok(d) => (
            Check::new(
                "depth-oracles-agree",
                Status::Pass,
                json!({
                    "depth": d.depth,
                    "vv": d.vv.as_ref().map(|v| v.depth),
                    "resolution": d.resolution.as_ref().map(|r| r.depth),
                }),
            ),
            Some(d.depth),
        ),
        Err(CoreError::DepthMismatch { vv, resolution }) => (
            Check::new(
                "depth-oracles-agree",
                Status::Fail,
                json!({ "vv": vv, "resolution": resolution }),
            ),
            None,
        ),
        Err(e) => (Check::error("depth-oracles-agree", &e), None),
    }
}

/// `V_I(x) = 0` exactly when the initial forms are G-regular, and exactly
/// when `r <= depth G`.
pub fn check_vv_criterion(i: &MPrimaryIdeal, s: &Samples, depth: Option<usize>) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (seed, seq, reps) in &s.runs {
        for rep in reps {
            let xs = &seq.elements()[..rep.r];
            let g = match is_g_regular_sequence(xs, i) {
                Ok(g) => g,
                Err(e) => return Check::error("vv-criterion", &e),
            };
            let agree = rep.is_zero() == g.regular;
            let depth_ok = depth.map(|d| rep.is_zero() == (rep.r <= d));
            ok &= agree && depth_ok != Some(false);
            rows.push(json!({
                "seed": seed,
                "r": rep.r,
                "vv_zero": rep.is_zero(),
                "g_regular": g.regular,
                "witness_degree": g.steps.iter().find_map(|st| st.witness),
                "matches_depth": depth_ok,
            }));
        }
    }
    Check::new("vv-criterion", pass_if(ok), json!(rows))
}

/// Koszul `H_1` of `u = x t` on `L` matches `V` degree by degree.
pub fn check_koszul(i: &MPrimaryIdeal, s: &Samples, cfg: &RunConfig) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (seed, seq, reps) in &s.runs {
        for rep in reps {
            let n_max = cfg.nmax.unwrap_or(rep.last_degree());
            let k = match koszul_h1_check(&seq.prefix(rep.r), i, rep, n_max) {
                Ok(k) => k,
                Err(e) => return Check::error("koszul-h1", &e),
            };
            let good = k.agree
                && k.filter_regular_ok
                && k.torsion_tail_zero
                && k.regular_when_zero != Some(false);
            ok &= good;
            rows.push(json!({
                "seed": seed,
                "r": rep.r,
                "h1": k.degrees.iter().map(|d| d.h1_dim).collect::<Vec<_>>(),
                "vv": k.degrees.iter().map(|d| d.vv_length).collect::<Vec<_>>(),
                "annihilators_agree": k.degrees.iter().all(|d| d.annihilators_agree != Some(false)),
                "uncertified": k.uncertified,
                "filter_regular": k.filter_regular_ok,
                "torsion_tail_zero": k.torsion_tail_zero,
                "regular_when_zero": k.regular_when_zero,
            }));
        }
    }
    Check::new("koszul-h1", pass_if(ok), json!(rows))
}

/// For `r > depth G`, every sampled `ann V` is m-primary and kills each piece.
pub fn check_annihilators(i: &MPrimaryIdeal, s: &Samples, depth: Option<usize>) -> Check {
    let Some(depth) = depth else {
        return Check::new("ann-m-primary", Status::Skipped, json!("depth unknown"));
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for (seed, _, reps) in &s.runs {
        for rep in reps.iter().filter(|r| r.r > depth) {
            let verdict = rep.verdict.expect("stabilized");
            let m_primary = matches!(verdict, MPrimaryVerdict::MPrimary { .. });
            let ann = rep.annihilator.as_ref().expect("stabilized");
            let kills = rep.pieces.iter().filter(|p| p.length > 0).all(|p| {
                let w = Ideal::new(i.ring(), p.w_gens.clone()).expect("same ring");
                ann.groebner()
                    .iter()
                    .all(|a| p.u_gens.iter().all(|u| w.contains(&a.mul(u))))
            });
            ok &= m_primary && kills;
            rows.push(json!({
                "seed": seed,
                "r": rep.r,
                "verdict": verdict_json(verdict),
                "kills_pieces": kills,
            }));
        }
    }
    if rows.is_empty() {
        return Check::new("ann-m-primary", Status::Skipped, json!("depth G equals dim A"));
    }
    Check::new("ann-m-primary", pass_if(ok), json!(rows))
}

/// The sample-intersection estimate of `a_r` for every `r > depth G`.
pub fn check_ar(i: &MPrimaryIdeal, cfg: &RunConfig, depth: Option<usize>) -> (Check, Vec<ArEstimate>) {
    let d = i.local_ring().dim();
    let Some(depth) = depth.filter(|&x| x < d) else {
        return (Check::new("ar-m-primary", Status::Skipped, json!("not depth-deficient")), Vec::new());
    };
    let mut rows = Vec::new();
    let mut out = Vec::new();
    let mut ok = true;
    for r in depth + 1..=d {
        let a = match ar_estimate(i, r, cfg.samples, cfg.seed, &cfg.estimate()) {
            Ok(a) => a,
            Err(e) => return (Check::error("ar-m-primary", &e), out),
        };
        let descending = a.trace.iter().all(|t| t.descending);
        let m_primary = matches!(a.verdict, MPrimaryVerdict::MPrimary { .. });
        ok &= descending && m_primary;
        rows.push(json!({
            "r": a.r,
            "samples": a.samples,
            "verdict": verdict_json(a.verdict),
            "ideal": ideal_json(&a.ideal),
            "stabilized_at": a.stabilized_at,
            "descending": descending,
        }));
        out.push(a);
    }
    (Check::new("ar-m-primary", pass_if(ok), json!(rows)), out)
}

/// `q_0 ... q_{r-1} ⊆ ann V_I(x)` for every sample, and inside the `a_r`
/// estimate.
pub fn check_q_product(i: &MPrimaryIdeal, s: &Samples, cfg: &RunConfig, ar: &[ArEstimate]) -> Check {
    let d = i.local_ring().dim();
    let qs = match q_estimates(i, d, cfg.seed, &cfg.lc()) {
        Ok(q) => q,
        Err(e) => return Check::error("q-product", &e),
    };
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for r in 1..=d {
        let reports: Vec<(u64, &VvModuleReport)> =
            s.runs.iter().map(|(seed, _, reps)| (*seed, &reps[r - 1])).collect();
        let c = q_product_check(i, &qs, r, &reports);
        if c.skipped.is_some() {
            status = status.worst(Status::Unstable);
        } else if !c.passed() {
            status = Status::Fail;
        }
        rows.push(json!({
            "r": r,
            "product": c.product.as_ref().map(ideal_json),
            "contained": c.rows.iter().map(|row| row.contained).collect::<Vec<_>>(),
            "witnesses": c.rows.iter().flat_map(|row| row.witnesses.clone()).collect::<Vec<_>>(),
            "skipped": c.skipped,
        }));
    }
    let mut in_estimate = Vec::new();
    for a in ar {
        let stable = qs[..a.r].iter().all(|q| q.status == QStatus::Stable);
        let inside = stable.then(|| {
            let p = q_product(i, &qs[..a.r]).expect("stable");
            a.ideal.contains_ideal(&p)
        });
        if inside == Some(false) {
            status = Status::Fail;
        }
        in_estimate.push(json!({ "r": a.r, "contained": inside }));
    }
    Check::new(
        "q-product",
        status,
        json!({
            "q": qs.iter().map(|q| json!({
                "i": q.i,
                "stable": q.status == QStatus::Stable,
                "ideal": q.ideal.as_ref().map(ideal_json),
                "lower_edge_nonzero": q.lower_edge_nonzero,
            })).collect::<Vec<_>>(),
            "per_r": rows,
            "inside_ar_estimate": in_estimate,
        }),
    )
}

/// Veronese containments and the running intersection over powers.
pub fn check_powers(i: &MPrimaryIdeal, cfg: &RunConfig, depth: Option<usize>) -> Check {
    let d = i.local_ring().dim();
    let deficient = depth.is_some_and(|x| x < d);
    let r = match depth {
        Some(x) if x < d => x + 1,
        _ => d,
    };
    let mut pc = cfg.powers();
    if !deficient {
        pc.samples = pc.samples.min(2);
    }
    let rep = match powers_scan(i, r, cfg.lmax, cfg.seed, &pc) {
        Ok(rep) => rep,
        Err(e) => return Check::error("powers", &e),
    };
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for row in &rep.rows {
        if row.ar.is_err() || row.qs.is_err() {
            status = status.worst(Status::Unstable);
        }
        for v in &row.veronese {
            match v {
                Some(false) => status = Status::Fail,
                None => status = status.worst(Status::Unstable),
                Some(true) => {}
            }
        }
        if deficient {
            match row.running_contains_product {
                Some(false) => status = Status::Fail,
                None => status = status.worst(Status::Unstable),
                Some(true) => {}
            }
            if !matches!(row.running_verdict, Some(MPrimaryVerdict::MPrimary { .. })) {
                status = status.worst(if row.running_verdict.is_none() {
                    Status::Unstable
                } else {
                    Status::Fail
                });
            }
        }
        rows.push(json!({
            "l": row.l,
            "veronese": row.veronese,
            "running_verdict": row.running_verdict.map(verdict_json),
            "running_contains_q_product": row.running_contains_product,
            "errors": [row.ar.as_ref().err(), row.qs.as_ref().err()],
        }));
    }
    if rep.divisibility.iter().any(|x| !x.3) {
        status = Status::Fail;
    }
    Check::new(
        "powers",
        status,
        json!({
            "r": r,
            "depth_deficient": deficient,
            "rows": rows,
            "divisibility": rep.divisibility.iter().map(|(i, a, b, h)| json!([i, a, b, h])).collect::<Vec<_>>(),
            "tail_constant": rep.tail_constant,
        }),
    )
}

/// Every check, in a fixed order.
pub fn verify_ideal(i: &MPrimaryIdeal, cfg: &RunConfig) -> Vec<Check> {
    let (depth_check, depth) = check_depth(i, cfg);
    let mut out = vec![depth_check];
    let s = match samples(i, cfg, CHECK_SAMPLES) {
        Ok(s) => s,
        Err(e) => {
            out.push(Check::error("sampling", &e));
            return out;
        }
    };
    out.push(check_vv_criterion(i, &s, depth));
    out.push(check_koszul(i, &s, cfg));
    out.push(check_annihilators(i, &s, depth));
    let (ar_check, ar) = check_ar(i, cfg, depth);
    out.push(ar_check);
    out.push(check_q_product(i, &s, cfg, &ar));
    out.push(check_powers(i, cfg, depth));
    out
}
