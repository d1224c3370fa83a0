use annvv_core::blowup::is_g_regular_sequence;
use annvv_core::local_model::{build_ring, declare_ideal_str, MPrimaryIdeal, MPrimaryVerdict};
use annvv_core::superficial::*;
use annvv_kernel::{subquotient_length, Ideal, Polynomial};
use proptest::prelude::*;

fn gapped() -> MPrimaryIdeal {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    declare_ideal_str(&a, &["x^4", "x^3*y", "x*y^3", "y^4"]).unwrap()
}

/// `ℓ((I^{n+1} ∩ (x)) / x I^n)` through elimination and a syzygy presentation.
fn piece_length_oracle(i: &MPrimaryIdeal, xs: &[Polynomial], n: u32) -> u64 {
    let j = i.local_ring().relations();
    let big = i.ideal().power(n + 1).sum(j);
    let xid = Ideal::new(i.ring(), xs.to_vec()).unwrap().sum(j);
    let u = big.intersect(&xid);
    let low = i.ideal().power(n);
    let mut w = Vec::new();
    for x in xs {
        for g in low.groebner() {
            w.push(x.mul(g));
        }
    }
    let w = Ideal::new(i.ring(), w).unwrap().sum(j);
    subquotient_length(&u, &w).unwrap().finite().unwrap()
}

#[test]
fn piece_lengths_match_subquotient_oracle() {
    let i = gapped();
    let seq = sample_superficial_sequence(&i, 1, 21, &SuperficialConfig::default()).unwrap();
    let xs = seq.elements();
    let rep = vv_module(&xs, &i, &VvConfig::default()).unwrap();
    assert!(rep.is_stabilized());
    assert!(!rep.is_zero());
    for p in &rep.pieces {
        assert_eq!(p.length, piece_length_oracle(&i, &xs, p.n), "degree {}", p.n);
    }
}

#[test]
fn piece_lengths_on_curve_pairs() {
    let a = build_ring(32003, &["x", "y", "z"], &["x*z - y^2"]).unwrap();
    let i = declare_ideal_str(&a, &["x^2", "y", "z^2"]).unwrap();
    let seq = sample_superficial_sequence(&i, 2, 2, &SuperficialConfig::default()).unwrap();
    let xs = seq.elements();
    let rep = vv_module(&xs, &i, &VvConfig::default()).unwrap();
    for p in rep.pieces.iter().take(4) {
        assert_eq!(p.length, piece_length_oracle(&i, &xs, p.n), "degree {}", p.n);
    }
}

#[test]
fn annihilator_kills_every_piece() {
    let i = gapped();
    let seq = sample_superficial_sequence(&i, 1, 5, &SuperficialConfig::default()).unwrap();
    let rep = vv_module(&seq.elements(), &i, &VvConfig::default()).unwrap();
    let (ann, verdict) = vv_annihilator(&rep, 5).unwrap();
    let MPrimaryVerdict::MPrimary { n, .. } = verdict else {
        panic!("expected an m-primary annihilator, got {verdict:?}");
    };
    let m = Ideal::maximal(i.ring());
    assert!(ann.contains_ideal(&m.power(n)));
    for p in rep.pieces.iter().filter(|p| p.length > 0) {
        let w = Ideal::new(i.ring(), p.w_gens.clone()).unwrap();
        for a in ann.groebner() {
            for u in &p.u_gens {
                assert!(w.contains(&a.mul(u)), "degree {}", p.n);
            }
        }
        let u = Ideal::new(i.ring(), p.u_gens.clone()).unwrap();
        assert!(u.contains_ideal(&w));
    }
}

#[test]
fn non_generic_generator_fails_with_colon_witness() {
    let i = gapped();
    let x4 = i.ring().parse("x^4").unwrap();
    let cfg = SuperficialConfig::default();
    match verify_superficial(&x4, &i, &[], &cfg) {
        Ok(c) => assert!(c.c.is_some() || c.onset > 1),
        Err(VerifyError::NoStabilization { offending, .. }) => assert!(!offending.is_empty()),
        Err(e) => panic!("unexpected {e}"),
    }
    // (I^2 : x^4) is strictly larger than I
    let colon = i.power(2).colon_element(&x4);
    assert!(colon.contains_ideal(i.ideal()));
    assert!(!i.ideal().contains_ideal(&colon));
}

#[test]
fn koszul_window_marks_degrees_beyond_it() {
    let i = gapped();
    let seq = sample_superficial_sequence(&i, 1, 8, &SuperficialConfig::default()).unwrap();
    let rep = vv_module(&seq.elements(), &i, &VvConfig::default()).unwrap();
    let k = koszul_h1_check(&seq, &i, &rep, 3).unwrap();
    assert_eq!(k.degrees.len(), 3);
    assert!(k.agree);
    assert!(!k.uncertified.is_empty());
}

#[test]
fn regular_sequence_has_zero_h1_and_injective_actions() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^2", "y^2"]).unwrap();
    let seq = sample_superficial_sequence(&i, 2, 8, &SuperficialConfig::default()).unwrap();
    let rep = vv_module(&seq.elements(), &i, &VvConfig::default()).unwrap();
    let k = koszul_h1_check(&seq, &i, &rep, rep.last_degree()).unwrap();
    assert!(k.degrees.iter().all(|d| d.h1_dim == 0));
    assert_eq!(k.regular_when_zero, Some(true));
    assert!(k.torsion_tail_zero);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, .. ProptestConfig::default() })]

    #[test]
    fn vv_vanishing_matches_g_regularity(seed in any::<u64>(), which in 0usize..3) {
        let a = build_ring(32003, &["x", "y"], &[]).unwrap();
        let gens: &[&str] = match which {
            0 => &["x^4", "x^3*y", "x*y^3", "y^4"],
            1 => &["x^3", "x^2*y", "y^3"],
            _ => &["x^2", "x*y^2", "y^3"],
        };
        let i = declare_ideal_str(&a, gens).unwrap();
        let seq = sample_superficial_sequence(&i, 2, seed, &SuperficialConfig::default()).unwrap();
        for r in 1..=2 {
            let xs = &seq.elements()[..r];
            let v = vv_module(xs, &i, &VvConfig::default()).unwrap();
            prop_assert!(v.is_stabilized());
            let g = is_g_regular_sequence(xs, &i).unwrap();
            prop_assert_eq!(v.is_zero(), g.regular);
            let (_, verdict) = vv_annihilator(&v, seed).unwrap();
            prop_assert!(verdict.is_m_primary() || verdict == MPrimaryVerdict::Unit);
        }
    }

    #[test]
    fn sampled_elements_satisfy_certificate_invariants(seed in any::<u64>()) {
        let i = gapped();
        let seq = sample_superficial_sequence(&i, 2, seed, &SuperficialConfig::default()).unwrap();
        for (k, step) in seq.steps.iter().enumerate() {
            let prior = &seq.elements()[..k];
            let x = &step.element;
            prop_assert!(i.ideal().add_generators(prior).contains(x));
            prop_assert!(!i.power(2).add_generators(prior).contains(x));
            let c = &step.certificate;
            prop_assert!(c.plain[(c.onset as usize - 1)..].iter().all(|&b| b));
        }
    }
}
