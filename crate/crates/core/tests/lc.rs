use annvv_core::lc_estimator::*;
use annvv_core::local_model::{build_ring, declare_ideal_str, MPrimaryVerdict};
use annvv_core::superficial::{
    sample_superficial_sequence, vv_module, SuperficialConfig, VvConfig, VvModuleReport,
};
use annvv_kernel::Ideal;

fn reports(
    i: &annvv_core::local_model::MPrimaryIdeal,
    r: usize,
    seeds: &[u64],
) -> Vec<(u64, VvModuleReport)> {
    seeds
        .iter()
        .map(|&s| {
            let seq = sample_superficial_sequence(i, r, s, &SuperficialConfig::default()).unwrap();
            (s, vv_module(&seq.elements(), i, &VvConfig::default()).unwrap())
        })
        .collect()
}

#[test]
fn window_dimensions_are_colengths() {
    let a = build_ring(32003, &["x", "y"], &["y^3 - x^4"]).unwrap();
    let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
    let ctx = build_l_window(&m, 6, 3).unwrap();
    for n in 0..=6 {
        assert_eq!(ctx.window.dim(n) as u64, m.power(n as u32 + 1).colength().finite().unwrap());
    }
    assert!(ctx.window.actions_commute());
}

#[test]
fn depth_zero_ideal_has_m_primary_q0_inside_every_annihilator() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^4", "x^3*y", "x*y^3", "y^4"]).unwrap();
    let mut ctx = build_l_window(&i, 4, 1).unwrap();
    let cfg = LcConfig::default();
    let q0 = q_estimate(&mut ctx, 0, &cfg).unwrap();
    assert_eq!(q0.status, QStatus::Stable);
    assert!(matches!(q0.verdict, Some(MPrimaryVerdict::MPrimary { .. })));
    let q = q0.ideal.clone().unwrap();
    for p in &q0.pieces {
        if let Some(ann) = &p.annihilator {
            assert!(ann.contains_ideal(&q));
        }
    }
    // high-degree vanishing
    let last: Vec<_> = q0.pieces.iter().rev().take(3).collect();
    assert!(last.iter().all(|p| p.status == PieceStatus::Zero));

    let reps = reports(&i, 1, &[1, 2, 3]);
    let samples: Vec<(u64, &VvModuleReport)> = reps.iter().map(|(s, r)| (*s, r)).collect();
    let check = q_product_check(&i, &[q0], 1, &samples);
    assert!(check.passed(), "{:?}", check.rows);
}

#[test]
fn depth_one_ideal_product_of_q0_q1() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^3", "x^2*y", "y^3"]).unwrap();
    let mut ctx = build_l_window(&i, 4, 1).unwrap();
    let cfg = LcConfig::default();
    let q0 = q_estimate(&mut ctx, 0, &cfg).unwrap();
    let q1 = q_estimate(&mut ctx, 1, &cfg).unwrap();
    assert!(q0.ideal.as_ref().unwrap().is_unit());
    assert_eq!(q1.status, QStatus::Stable);
    assert!(q1.lower_edge_nonzero);
    let reps = reports(&i, 2, &[4, 5]);
    let samples: Vec<(u64, &VvModuleReport)> = reps.iter().map(|(s, r)| (*s, r)).collect();
    let check = q_product_check(&i, &[q0, q1], 2, &samples);
    assert!(check.passed(), "{:?}", check.rows);
}

#[test]
fn regular_cases_give_unit_ideals() {
    let a = build_ring(32003, &["x", "y", "z"], &["x*z - y^2"]).unwrap();
    let m = declare_ideal_str(&a, &["x", "y", "z"]).unwrap();
    let mut ctx = build_l_window(&m, 3, 1).unwrap();
    for i in 0..2 {
        let q = q_estimate(&mut ctx, i, &LcConfig::default()).unwrap();
        assert!(q.ideal.unwrap().is_unit());
    }
}

#[test]
fn unstable_pieces_are_never_reported() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^3", "x^2*y", "y^3"]).unwrap();
    let mut ctx = build_l_window(&i, 4, 1).unwrap();
    // a single Koszul power cannot agree with anything
    let cfg = LcConfig { t_max: 1, ..LcConfig::default() };
    let p = ctx.cohomology_piece(1, -1, &cfg).unwrap();
    assert_eq!(p.status, PieceStatus::Unstable);
    assert!(p.dim.is_none() && p.annihilator.is_none());
    let q = q_estimate(&mut ctx, 1, &cfg).unwrap();
    assert_eq!(q.status, QStatus::Unstable);
    assert!(q.ideal.is_none());
    assert!(ctx.cohomology_piece(2, 0, &LcConfig::default()).is_err());
}

#[test]
fn product_of_m_primary_ideals_is_m_primary() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let p = Ideal::parse(a.ring(), &["x^2", "y"]).unwrap();
    let q = Ideal::parse(a.ring(), &["x", "y^3"]).unwrap();
    assert!(annvv_core::local_model::is_m_primary(&p.product(&q)).is_m_primary());
}
