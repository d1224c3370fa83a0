//! Rees algebra and associated graded ring presentations, initial forms,
//! regularity of initial forms, and the depth of `G_I(A)`.

use annvv_kernel::monomial::monomials_of_degree;
use annvv_kernel::{
    lift_polynomial, resolve_quotient, BettiTable, Ideal, Monomial, MonomialOrder, PolyRing,
    Polynomial, RingRef,
};

use crate::error::{CoreError, Result};
use crate::local_model::MPrimaryIdeal;
use crate::superficial::{
    colength_with, derive_seed, sample_superficial_sequence, vv_module, SuperficialConfig,
    VvConfig,
};

/// `R(I) = k[x, T] / Q` with `T_j ↦ f_j t`.
#[derive(Clone, Debug)]
pub struct ReesPresentation {
    /// `k[x_1..x_n, T_1..T_s]`; the `x` come first.
    pub ambient: RingRef,
    pub base_vars: usize,
    pub generators: Vec<Polynomial>,
    pub defining_ideal: Ideal,
}

impl ReesPresentation {
    pub fn t_vars(&self) -> usize {
        self.generators.len()
    }

    /// Image of a polynomial of `A`'s ambient ring in `k[x, T]`.
    pub fn lift_base(&self, f: &Polynomial) -> Polynomial {
        let pos: Vec<usize> = (0..self.base_vars).collect();
        f.embed(&self.ambient, &pos)
    }

    pub fn t_degree(&self, m: &Monomial) -> u32 {
        m.exponents()[self.base_vars..].iter().map(|&e| e as u32).sum()
    }
}

fn ambient_ring(ideal: &MPrimaryIdeal) -> RingRef {
    let base = ideal.ring();
    let mut names: Vec<String> = base.names().to_vec();
    let mut weights: Vec<u32> = base.weights().to_vec();
    let top = ideal
        .gens()
        .iter()
        .map(|g| g.degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    for (j, g) in ideal.gens().iter().enumerate() {
        let mut name = format!("T{}", j + 1);
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
        let d = g.homogeneous_degree().unwrap_or(top);
        weights.push(d + 1);
    }
    PolyRing::with_weights(base.prime() as u64, names, weights, MonomialOrder::DegRevLex)
        .expect("valid ring")
}

/// Presentation of the Rees algebra by eliminating `t` from `(T_j - f_j t) + J`.
pub fn rees_presentation(ideal: &MPrimaryIdeal) -> Result<ReesPresentation> {
    let base = ideal.ring();
    let n = base.nvars();
    let s = ideal.gens().len();
    let ambient = ambient_ring(ideal);
    let ext = ambient.elimination_extension(&[("t", 1)]);
    let shift: Vec<usize> = (1..=n).collect();
    let t = Polynomial::var(&ext, 0);
    let mut gens = Vec::with_capacity(s + ideal.local_ring().relations().gens().len());
    for (j, f) in ideal.gens().iter().enumerate() {
        let tj = Polynomial::var(&ext, 1 + n + j);
        gens.push(tj.sub(&f.embed(&ext, &shift).mul(&t)));
    }
    for r in ideal.local_ring().relations().gens() {
        gens.push(r.embed(&ext, &shift));
    }
    let big = Ideal::new(&ext, gens)?;
    let back: Vec<usize> = (1..=n + s).collect();
    let kept: Vec<Polynomial> = big
        .groebner()
        .iter()
        .filter_map(|g| g.restrict(&ambient, &back))
        .collect();
    let q = Ideal::new(&ambient, kept)?;
    let pres = ReesPresentation {
        ambient,
        base_vars: n,
        generators: ideal.gens().to_vec(),
        defining_ideal: q,
    };
    check_substitution(&pres, ideal)?;
    Ok(pres)
}

/// Every generator of `Q` must vanish under `T_j ↦ f_j t` modulo `J`.
fn check_substitution(pres: &ReesPresentation, ideal: &MPrimaryIdeal) -> Result<()> {
    let base = ideal.ring();
    let n = base.nvars();
    let target = base.elimination_extension(&[("t", 1)]);
    let shift: Vec<usize> = (1..=n).collect();
    let t = Polynomial::var(&target, 0);
    let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&target, i + 1)).collect();
    for f in &pres.generators {
        images.push(f.embed(&target, &shift).mul(&t));
    }
    let rel: Vec<Polynomial> = ideal
        .local_ring()
        .relations()
        .gens()
        .iter()
        .map(|r| r.embed(&target, &shift))
        .collect();
    let jt = Ideal::new(&target, rel)?;
    for g in pres.defining_ideal.gens() {
        if !jt.contains(&g.substitute(&target, &images)) {
            return Err(CoreError::Precondition(format!(
                "Rees relation {g} does not vanish under substitution"
            )));
        }
    }
    Ok(())
}

/// `G_I(A) = k[x, T] / (Q + I + J)`.
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    pub rees: ReesPresentation,
    pub ideal: Ideal,
    /// `(n, dim G_n)` for `n = 0..=bound`, each matched against colengths.
    pub hilbert: Vec<(u32, u64)>,
}

impl GradedPresentation {
    pub fn ambient(&self) -> &RingRef {
        &self.rees.ambient
    }

    /// `dim_k G_n` by counting standard monomials of T-degree `n`.
    pub fn hilbert_value(&self, base_standard: &[Monomial], n: u32) -> u64 {
        let nb = self.rees.base_vars;
        let s = self.rees.t_vars();
        let red = self.ideal.reducer();
        let mut count = 0;
        for tm in monomials_of_degree(s, n) {
            for xm in base_standard {
                let mut e: Vec<u16> = xm.exponents().to_vec();
                e.truncate(nb);
                e.extend_from_slice(tm.exponents());
                if !red.is_reducible(&Monomial::from_exponents(&e)) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Present `G_I(A)` and check its Hilbert function through `bound`.
pub fn assoc_graded_presentation(ideal: &MPrimaryIdeal, bound: u32) -> Result<GradedPresentation> {
    let rees = rees_presentation(ideal)?;
    let mut gens: Vec<Polynomial> = rees.defining_ideal.gens().to_vec();
    for f in ideal.ideal().gens() {
        gens.push(rees.lift_base(f));
    }
    let g_ideal = Ideal::new(&rees.ambient, gens)?;
    let mut pres = GradedPresentation {
        rees,
        ideal: g_ideal,
        hilbert: Vec::new(),
    };
    let base_standard = ideal
        .ideal()
        .standard_monomials()
        .expect("m-primary ideal has finitely many standard monomials");
    for n in 0..=bound {
        let h = pres.hilbert_value(&base_standard, n);
        let expected = colength_with(ideal, n + 1, &[]) - colength_with(ideal, n, &[]);
        if h != expected {
            return Err(CoreError::Precondition(format!(
                "Hilbert function of G is {h} in degree {n}, expected {expected}"
            )));
        }
        pres.hilbert.push((n, h));
    }
    Ok(pres)
}

#[derive(Clone, Debug)]
pub struct InitialForm {
    pub element: Polynomial,
    pub order: u32,
    /// Class of `a` in `I^v / I^{v+1}` as a normal form in the `G` presentation.
    pub representative: Polynomial,
}

/// Orders beyond this are treated as a failure to separate `a` from 0.
const MAX_ORDER: u32 = 64;

/// `I`-adic order of `a` and its initial form in `G`.
pub fn initial_form(a: &Polynomial, ideal: &MPrimaryIdeal, g: &GradedPresentation) -> Result<InitialForm> {
    if ideal.local_ring().is_zero(a) {
        return Err(CoreError::Precondition("initial form of zero is undefined".into()));
    }
    let mut v = 0;
    while ideal.power(v + 1).contains(a) {
        v += 1;
        if v > MAX_ORDER {
            return Err(CoreError::Precondition(format!("order of {a} exceeds {MAX_ORDER}")));
        }
    }
    let s = ideal.gens().len();
    let nb = g.rees.base_vars;
    let exps = monomials_of_degree(s, v);
    let mut products: Vec<Polynomial> = exps
        .iter()
        .map(|e| {
            e.exponents()
                .iter()
                .zip(ideal.gens())
                .fold(Polynomial::one(ideal.ring()), |acc, (&k, f)| acc.mul(&f.pow(k as u32)))
        })
        .collect();
    products.extend(ideal.local_ring().relations().gens().iter().cloned());
    let cof = lift_polynomial(a, &products).expect("a lies in I^v + J");
    let amb = g.ambient();
    let mut rep = Polynomial::zero(amb);
    for (e, c) in exps.iter().zip(&cof) {
        let mut te = vec![0u16; nb];
        te.extend_from_slice(e.exponents());
        let tmon = Polynomial::monomial(amb, Monomial::from_exponents(&te));
        rep = rep.add(&g.rees.lift_base(c).mul(&tmon));
    }
    Ok(InitialForm {
        element: a.clone(),
        order: v,
        representative: g.ideal.normal_form(&rep),
    })
}

/// One degree of the regularity test for `a_i^*` on `G / (a_1^*..a_{i-1}^*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityDegree {
    pub n: u32,
    /// `dim` of the quotient of `G` in degree `n`.
    pub source: u64,
    /// `dim` of the image of multiplication by `a_i^*` into degree `n + 1`.
    pub image: u64,
}

#[derive(Clone, Debug)]
pub struct RegularityStep {
    pub index: usize,
    pub bound: u32,
    pub degrees: Vec<RegularityDegree>,
    /// First degree where multiplication fails to be injective.
    pub witness: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct GRegularityCertificate {
    pub regular: bool,
    pub steps: Vec<RegularityStep>,
}

/// `I^{n+1} + sum_{j<i} a_j I^{n-1} + J` (with `P_0 = I + J`).
fn prior_ideal(ideal: &MPrimaryIdeal, prior: &[Polynomial], n: u32) -> Ideal {
    if n == 0 {
        return ideal.ideal().clone();
    }
    let mut acc = ideal.power(n + 1);
    if !prior.is_empty() {
        let lower = ideal.power(n - 1);
        let mut extra = Vec::new();
        for a in prior {
            for g in lower.groebner() {
                extra.push(a.mul(g));
            }
        }
        acc = acc.add_generators(&extra);
    }
    acc
}

fn colen(i: &Ideal) -> u64 {
    i.colength().finite().expect("m-primary")
}

/// Whether the initial forms of `elements` (all of order 1) are a regular
/// sequence on `G_I(A)`, checked degree by degree.
pub fn is_g_regular_sequence(
    elements: &[Polynomial],
    ideal: &MPrimaryIdeal,
) -> Result<GRegularityCertificate> {
    for a in elements {
        if !ideal.ideal().contains(a) || ideal.power(2).contains(a) {
            return Err(CoreError::Unsupported(format!(
                "initial form of {a} does not have degree one"
            )));
        }
    }
    let d = ideal.local_ring().dim() as u32;
    let cap = 3 * ideal.n_index() + 10;
    let floor = ideal.n_index() + elements.len() as u32;
    let mut steps = Vec::new();
    let mut regular = true;
    for i in 0..elements.len() {
        let prior = &elements[..i];
        let remaining = d.saturating_sub(i as u32);
        let mut degrees = Vec::new();
        let mut hilbert: Vec<i64> = Vec::new();
        let mut stable_at = None;
        let mut witness = None;
        let mut n = 0;
        loop {
            let p_n = prior_ideal(ideal, prior, n);
            let p_next = prior_ideal(ideal, prior, n + 1);
            let source = colen(&p_n) - colength_with(ideal, n, &[]);
            let mut extra = Vec::new();
            for g in ideal.power(n).groebner() {
                extra.push(elements[i].mul(g));
            }
            let image = colen(&p_next) - colen(&p_next.add_generators(&extra));
            if source != image && witness.is_none() {
                witness = Some(n);
            }
            degrees.push(RegularityDegree { n, source, image });
            hilbert.push(source as i64);
            if stable_at.is_none() && difference_vanishes(&hilbert, remaining as usize) {
                stable_at = Some(n);
            }
            let bound = stable_at.map(|s| (s + 2).max(floor));
            if bound.is_some_and(|b| n >= b) || n >= cap {
                steps.push(RegularityStep {
                    index: i + 1,
                    bound: n,
                    degrees,
                    witness,
                });
                break;
            }
            n += 1;
        }
        if witness.is_some() {
            regular = false;
            break;
        }
    }
    Ok(GRegularityCertificate { regular, steps })
}

/// The `k`-th difference of `h` vanishes on its last three entries.
fn difference_vanishes(h: &[i64], k: usize) -> bool {
    let mut v = h.to_vec();
    for _ in 0..k {
        if v.len() < 2 {
            return false;
        }
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v.len() >= 3 && v[v.len() - 3..].iter().all(|&x| x == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthStrategy {
    Vv,
    Resolution,
    Both,
}

impl std::str::FromStr for DepthStrategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vv" => Ok(DepthStrategy::Vv),
            "resolution" => Ok(DepthStrategy::Resolution),
            "both" => Ok(DepthStrategy::Both),
            _ => Err(format!("unknown strategy '{s}' (expected vv, resolution or both)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VvDepthCertificate {
    pub depth: usize,
    /// `(seed, prefix length, total length of V)` for every sequence tried.
    pub trials: Vec<(u64, usize, u64)>,
}

#[derive(Clone, Debug)]
pub struct ResolutionCertificate {
    pub depth: usize,
    pub ambient_vars: usize,
    pub projective_dimension: usize,
    pub betti: BettiTable,
}

#[derive(Clone, Debug)]
pub struct DepthReport {
    pub depth: usize,
    pub vv: Option<VvDepthCertificate>,
    pub resolution: Option<ResolutionCertificate>,
}

/// Samples used at a vanishing/non-vanishing boundary.
pub const BOUNDARY_SAMPLES: usize = 5;

fn depth_by_vv(ideal: &MPrimaryIdeal, seed: u64) -> Result<VvDepthCertificate> {
    let d = ideal.local_ring().dim();
    let scfg = SuperficialConfig::default();
    let vcfg = VvConfig::default();
    let mut trials = Vec::new();
    let mut depth = 0;
    let first = sample_superficial_sequence(ideal, d, seed, &scfg)?;
    for r in 1..=d {
        let mut vanished = false;
        for k in 0..BOUNDARY_SAMPLES {
            let (s, seq) = if k == 0 {
                (seed, first.prefix(r))
            } else {
                let s = derive_seed(seed, 0x7f00 + k as u64);
                (s, sample_superficial_sequence(ideal, r, s, &scfg)?)
            };
            let rep = vv_module(&seq.elements(), ideal, &vcfg)?;
            if !rep.is_stabilized() {
                return Err(CoreError::Unstabilized {
                    cap: rep.last_degree(),
                    seed: s,
                });
            }
            trials.push((s, r, rep.total_length));
            if rep.is_zero() {
                vanished = true;
                break;
            }
        }
        if !vanished {
            break;
        }
        depth = r;
    }
    Ok(VvDepthCertificate { depth, trials })
}

fn depth_by_resolution(ideal: &MPrimaryIdeal) -> Result<ResolutionCertificate> {
    if !ideal.is_homogeneous() {
        return Err(CoreError::Unsupported(
            "resolution oracle needs homogeneous generators".into(),
        ));
    }
    let g = assoc_graded_presentation(ideal, 2)?;
    let betti = resolve_quotient(&g.ideal)?;
    let pd = betti.length();
    let vars = g.ambient().nvars();
    Ok(ResolutionCertificate {
        depth: vars - pd,
        ambient_vars: vars,
        projective_dimension: pd,
        betti,
    })
}

/// `depth G_I(A)` by the chosen oracle(s).
pub fn depth_assoc_graded(
    ideal: &MPrimaryIdeal,
    strategy: DepthStrategy,
    seed: u64,
) -> Result<DepthReport> {
    if !ideal.local_ring().is_cohen_macaulay() {
        return Err(CoreError::Precondition("ring is not Cohen-Macaulay".into()));
    }
    let vv = match strategy {
        DepthStrategy::Vv | DepthStrategy::Both => Some(depth_by_vv(ideal, seed)?),
        DepthStrategy::Resolution => None,
    };
    let res = match strategy {
        DepthStrategy::Resolution | DepthStrategy::Both => Some(depth_by_resolution(ideal)?),
        DepthStrategy::Vv => None,
    };
    let depth = match (&vv, &res) {
        (Some(a), Some(b)) if a.depth != b.depth => {
            return Err(CoreError::DepthMismatch {
                vv: a.depth,
                resolution: b.depth,
            })
        }
        (Some(a), _) => a.depth,
        (None, Some(b)) => b.depth,
        (None, None) => unreachable!(),
    };
    Ok(DepthReport {
        depth,
        vv,
        resolution: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_model::{build_ring, declare_ideal_str};

    #[test]
    fn rees_of_maximal_ideal() {
        let a = build_ring(32003, &["x", "y"], &[]).unwrap();
        let m = declare_ideal_str(&a, &["x", "y"]).unwrap();
        let r = rees_presentation(&m).unwrap();
        let want = Ideal::parse(&r.ambient, &["x*T2 - y*T1"]).unwrap();
        assert!(r.defining_ideal.same_ideal(&want));
    }

    #[test]
    fn rees_of_principal_ideal_is_polynomial() {
        let a = build_ring(32003, &["x"], &[]).unwrap();
        let i = declare_ideal_str(&a, &["x"]).unwrap();
        let r = rees_presentation(&i).unwrap();
        assert!(r.defining_ideal.is_zero());
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("both".parse::<DepthStrategy>(), Ok(DepthStrategy::Both));
        assert!("other".parse::<DepthStrategy>().is_err());
    }

    #[test]
    fn difference_test() {
        assert!(difference_vanishes(&[1, 2, 3, 4, 5], 2));
        assert!(!difference_vanishes(&[1, 2, 4, 8], 1));
        assert!(difference_vanishes(&[3, 1, 0, 0, 0], 0));
    }
}
