use annvv_core::blowup::*;
use annvv_core::local_model::{build_ring, declare_ideal_str};
use annvv_core::superficial::{sample_superficial_sequence, vv_module, SuperficialConfig, VvConfig};
use annvv_kernel::Ideal;

#[test]
fn rees_of_squares() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^2", "y^2"]).unwrap();
    let r = rees_presentation(&i).unwrap();
    let want = Ideal::parse(&r.ambient, &["x^2*T2 - y^2*T1"]).unwrap();
    assert!(r.defining_ideal.same_ideal(&want));
}

#[test]
fn graded_ring_of_quartic_curve() {
    let a = build_ring(32003, &["x", "y"], &["y^3 - x^4"]).unwrap();
    let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
    let g = assoc_graded_presentation(&m, 6).unwrap();
    let (sub, t_only) = g.ideal.eliminate(&[0, 1]);
    let want = Ideal::parse(&sub, &["T2^3"]).unwrap();
    assert!(t_only.same_ideal(&want), "{t_only}");
    assert_eq!(g.hilbert.iter().map(|h| h.1).collect::<Vec<_>>(), vec![1, 2, 3, 3, 3, 3, 3]);
}

#[test]
fn graded_ring_of_regular_sequence() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^2", "y^2"]).unwrap();
    let g = assoc_graded_presentation(&i, 5).unwrap();
    // (A/I)[T1, T2]: 4 * (n + 1)
    for (n, h) in &g.hilbert {
        assert_eq!(*h, 4 * (*n as u64 + 1));
    }
}

#[test]
fn initial_forms() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
    let gm = assoc_graded_presentation(&m, 2).unwrap();
    let f = a.parse("x^2").unwrap();
    assert_eq!(initial_form(&f, &m, &gm).unwrap().order, 2);

    let i = declare_ideal_str(&a, &["x^2", "y^2"]).unwrap();
    let gi = assoc_graded_presentation(&i, 2).unwrap();
    let u = a.parse("x + y").unwrap();
    assert_eq!(initial_form(&u, &i, &gi).unwrap().order, 0);
    let f = a.parse("x^2 + y^3").unwrap();
    let form = initial_form(&f, &i, &gi).unwrap();
    assert_eq!(form.order, 1);
    // y^3 is not in I^2, so its contribution survives in I/I^2
    let amb = gi.ambient();
    let want = gi.ideal.normal_form(&amb.parse("T1 + y*T2").unwrap());
    assert_eq!(form.representative, want);
    assert!(initial_form(&a.parse("0").unwrap(), &i, &gi).is_err());
}

#[test]
fn depth_oracles_agree() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    for (gens, want) in [
        (&["x", "y"][..], 2),
        (&["x^2", "y^2"][..], 2),
        (&["x^4", "x^3*y", "x*y^3", "y^4"][..], 0),
    ] {
        let i = declare_ideal_str(&a, gens).unwrap();
        let d = depth_assoc_graded(&i, DepthStrategy::Both, 5).unwrap();
        assert_eq!(d.depth, want, "{gens:?}");
    }
}

#[test]
fn vv_criterion_on_gapped_ideal() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^4", "x^3*y", "x*y^3", "y^4"]).unwrap();
    let seq = sample_superficial_sequence(&i, 1, 9, &SuperficialConfig::default()).unwrap();
    let cert = is_g_regular_sequence(&seq.elements(), &i).unwrap();
    assert!(!cert.regular);
    assert!(cert.steps[0].witness.is_some());
    let v = vv_module(&seq.elements(), &i, &VvConfig::default()).unwrap();
    assert!(!v.is_zero());
}

#[test]
fn vv_criterion_on_squares() {
    let a = build_ring(32003, &["x", "y"], &[]).unwrap();
    let i = declare_ideal_str(&a, &["x^2", "y^2"]).unwrap();
    let seq = sample_superficial_sequence(&i, 2, 4, &SuperficialConfig::default()).unwrap();
    assert!(is_g_regular_sequence(&seq.elements(), &i).unwrap().regular);
    assert!(vv_module(&seq.elements(), &i, &VvConfig::default()).unwrap().is_zero());
}
