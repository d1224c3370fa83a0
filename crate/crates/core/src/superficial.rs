//! Superficial sequences, the Valabrega–Valla module `V_I(x)` and the
//! Koszul `H_1` cross-check.

use std::collections::HashMap;

use annvv_kernel::{
    field, intersect_finite, FreeElement, Homology, Ideal, LinearMap, ModuleQuotient,
    Polynomial, QuotientAlgebra, Submodule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::local_model::{is_m_primary, MPrimaryIdeal, MPrimaryVerdict};

/// Length of `A / (I^n + X)` where `X` is generated by `extra`.
pub fn colength_with(ideal: &MPrimaryIdeal, n: u32, extra: &[Polynomial]) -> u64 {
    if n == 0 {
        return 0;
    }
    ideal
        .power(n)
        .add_generators(extra)
        .colength()
        .finite()
        .expect("powers of an m-primary ideal have finite colength")
}

/// Mix a base seed with a stream index (splitmix64 finaliser).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SuperficialConfig {
    /// Highest degree checked; default `2N + 6`.
    pub n_max: Option<u32>,
    pub resample_cap: usize,
    /// Consecutive degrees the plain colon equality must hold at the top.
    pub min_tail: u32,
}

impl Default for SuperficialConfig {
    fn default() -> Self {
        SuperficialConfig {
            n_max: None,
            resample_cap: 16,
            min_tail: 3,
        }
    }
}

impl SuperficialConfig {
    pub fn n_max_for(&self, ideal: &MPrimaryIdeal) -> u32 {
        self.n_max.unwrap_or(2 * ideal.n_index() + 6)
    }
}

/// Evidence that `x` is superficial for `I` (modulo earlier elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n_max: u32,
    /// First degree from which `(I^{n+1} : x) = I^n` held through `n_max`.
    pub onset: u32,
    /// `c` used for the intersected form below the onset, if needed.
    pub c: Option<u32>,
    /// Plain colon equality per degree `1..=n_max`.
    pub plain: Vec<bool>,
    /// Degrees verified in the intersected form.
    pub intersected: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    NotInIdeal,
    InSquare,
    /// Equality never stabilized; offending degrees with their colon ideals.
    NoStabilization {
        plain: Vec<bool>,
        offending: Vec<(u32, String)>,
    },
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::NotInIdeal => f.write_str("candidate is not in I"),
            VerifyError::InSquare => f.write_str("candidate lies in I^2"),
            VerifyError::NoStabilization { offending, .. } => {
                f.write_str("colon equality did not stabilize")?;
                for (n, c) in offending {
                    write!(f, "; (I^{}:x) = {c}", n + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// Check that `x` is superficial for the image of `I` in `A/(prior)`.
pub fn verify_superficial(
    x: &Polynomial,
    ideal: &MPrimaryIdeal,
    prior: &[Polynomial],
    cfg: &SuperficialConfig,
) -> std::result::Result<Certificate, VerifyError> {
    let in_i = ideal.ideal().add_generators(prior);
    if !in_i.contains(x) {
        return Err(VerifyError::NotInIdeal);
    }
    if ideal.power(2).add_generators(prior).contains(x) {
        return Err(VerifyError::InSquare);
    }
    let n_max = cfg.n_max_for(ideal);
    let mut with_x = prior.to_vec();
    with_x.push(x.clone());
    let mut cache: HashMap<u32, u64> = HashMap::new();
    let mut base = |n: u32| *cache.entry(n).or_insert_with(|| colength_with(ideal, n, prior));
    let plain: Vec<bool> = (1..=n_max)
        .map(|n| {
            let a = base(n);
            let b = base(n + 1);
            let c = colength_with(ideal, n + 1, &with_x);
            a + c == b
        })
        .collect();
    let tail = plain.iter().rev().take_while(|&&ok| ok).count() as u32;
    let general_ok = |n: u32, c: u32| -> bool {
        let big = ideal.power(n + 1).add_generators(prior);
        let colon = QuotientAlgebra::new(&big)
            .expect("finite colength")
            .colon(x);
        let ic = ideal.power(c).add_generators(prior);
        let meet = intersect_finite(&[&colon, &ic]).expect("finite colength");
        meet.same_ideal(&ideal.power(n).add_generators(prior))
    };
    let colon_of = |n: u32| -> String {
        let big = ideal.power(n + 1).add_generators(prior);
        QuotientAlgebra::new(&big).expect("finite colength").colon(x).to_string()
    };
    let top = ideal.n_index().max(1);
    if tail >= cfg.min_tail {
        let onset = n_max - tail + 1;
        if onset == 1 {
            return Ok(Certificate {
                n_max,
                onset,
                c: None,
                plain,
                intersected: Vec::new(),
            });
        }
        for c in 1..=top {
            let degrees: Vec<u32> = (c..onset).collect();
            if degrees.iter().all(|&n| general_ok(n, c)) {
                return Ok(Certificate {
                    n_max,
                    onset,
                    c: Some(c),
                    plain,
                    intersected: degrees,
                });
            }
        }
        let offending = (top..onset).map(|n| (n, colon_of(n))).collect();
        return Err(VerifyError::NoStabilization { plain, offending });
    }
    // no plain onset: the intersected form must carry the whole window
    for c in 1..=top {
        let degrees: Vec<u32> = (c..=n_max).collect();
        if degrees.iter().all(|&n| general_ok(n, c)) {
            return Ok(Certificate {
                n_max,
                onset: c,
                c: Some(c),
                plain,
                intersected: degrees,
            });
        }
    }
    let offending = plain
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .take(3)
        .map(|(k, _)| (k as u32 + 1, colon_of(k as u32 + 1)))
        .collect();
    Err(VerifyError::NoStabilization { plain, offending })
}

#[derive(Clone, Debug)]
pub struct SuperficialCandidate {
    pub element: Polynomial,
    /// Coefficients on the declared generators of `I`.
    pub coefficients: Vec<u32>,
    /// Seed of the draw that produced this candidate.
    pub seed: u64,
    /// Draws rejected before this one at the same step.
    pub rejected: usize,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct SuperficialSequence {
    pub seed: u64,
    pub steps: Vec<SuperficialCandidate>,
}

impl SuperficialSequence {
    pub fn elements(&self) -> Vec<Polynomial> {
        self.steps.iter().map(|s| s.element.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn prefix(&self, r: usize) -> SuperficialSequence {
        SuperficialSequence {
            seed: self.seed,
            steps: self.steps[..r].to_vec(),
        }
    }
}

/// A random `k`-combination of the generators of `I`.
pub fn random_combination(ideal: &MPrimaryIdeal, seed: u64) -> (Polynomial, Vec<u32>) {
    let ring = ideal.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<u32> = ideal.gens().iter().map(|_| rng.gen_range(0..ring.prime())).collect();
    let mut x = Polynomial::zero(ring);
    for (g, &c) in ideal.gens().iter().zip(&coeffs) {
        x = x.add_scaled(g, c);
    }
    (x, coeffs)
}

/// Sample `r` elements, each superficial modulo the earlier ones.
pub fn sample_superficial_sequence(
    ideal: &MPrimaryIdeal,
    r: usize,
    seed: u64,
    cfg: &SuperficialConfig,
) -> Result<SuperficialSequence> {
    let a = ideal.local_ring();
    if r > a.dim() {
        return Err(CoreError::Precondition(format!(
            "sequence length {r} exceeds dim A = {}",
            a.dim()
        )));
    }
    let mut steps: Vec<SuperficialCandidate> = Vec::with_capacity(r);
    for step in 0..r {
        let prior: Vec<Polynomial> = steps.iter().map(|s| s.element.clone()).collect();
        let mut failures = Vec::new();
        let mut found = None;
        for attempt in 0..cfg.resample_cap {
            let s = derive_seed(seed, ((step as u64) << 32) | attempt as u64);
            let (x, coefficients) = random_combination(ideal, s);
            match verify_superficial(&x, ideal, &prior, cfg) {
                Ok(certificate) => {
                    found = Some(SuperficialCandidate {
                        element: x,
                        coefficients,
                        seed: s,
                        rejected: attempt,
                        certificate,
                    });
                    break;
                }
                Err(e) => failures.push(format!("{x}: {e}")),
            }
        }
        match found {
            Some(c) => steps.push(c),
            None => {
                return Err(CoreError::Sampling {
                    step: step + 1,
                    attempts: cfg.resample_cap,
                    failures,
                })
            }
        }
    }
    Ok(SuperficialSequence { seed, steps })
}

#[derive(Clone, Debug)]
pub struct VvConfig {
    /// Consecutive zero pieces required.
    pub window: u32,
    /// Hard cap on the degree; default `3N + 10`.
    pub cap: Option<u32>,
}

impl Default for VvConfig {
    fn default() -> Self {
        VvConfig {
            window: 3,
            cap: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VvPiece {
    pub n: u32,
    pub length: u64,
    /// Generators of `U_n = I^{n+1} ∩ (x)` (nonzero pieces only).
    pub u_gens: Vec<Polynomial>,
    /// Generators of `W_n = x I^n` (nonzero pieces only).
    pub w_gens: Vec<Polynomial>,
    /// `(W_n : U_n)` for nonzero pieces.
    pub annihilator: Option<Ideal>,
    pub verdict: Option<MPrimaryVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VvStatus {
    Stabilized { degree: u32 },
    Unstabilized { cap: u32 },
}

#[derive(Clone, Debug)]
pub struct VvModuleReport {
    pub r: usize,
    pub pieces: Vec<VvPiece>,
    pub total_length: u64,
    pub status: VvStatus,
    /// Intersection of the piece annihilators (unit when every piece is 0).
    pub annihilator: Option<Ideal>,
    pub verdict: Option<MPrimaryVerdict>,
}

impl VvModuleReport {
    pub fn is_zero(&self) -> bool {
        self.total_length == 0
    }

    pub fn is_stabilized(&self) -> bool {
        matches!(self.status, VvStatus::Stabilized { .. })
    }

    pub fn length(&self, n: u32) -> Option<u64> {
        self.pieces.iter().find(|p| p.n == n).map(|p| p.length)
    }

    pub fn last_degree(&self) -> u32 {
        self.pieces.last().map(|p| p.n).unwrap_or(0)
    }
}

/// `{c : sum c_i x_i ∈ J}` as generators in `S^r`.
fn relation_module(ideal: &MPrimaryIdeal, xs: &[Polynomial]) -> Vec<FreeElement> {
    let ring = ideal.ring();
    let r = xs.len();
    let mut gens: Vec<FreeElement> = xs.iter().map(|x| vec![x.clone()]).collect();
    gens.extend(ideal.local_ring().relations().gens().iter().map(|j| vec![j.clone()]));
    Submodule::new(ring, 1, gens)
        .expect("same ring")
        .syzygies()
        .gens()
        .iter()
        .map(|s| s[..r].to_vec())
        .filter(|s| s.iter().any(|c| !c.is_zero()))
        .collect()
}

/// `S^r / (I^n S^r + Z)`, presenting `(x) / x I^n`.
fn piece_presentation(ideal: &MPrimaryIdeal, r: usize, z: &[FreeElement], n: u32) -> Submodule {
    let ring = ideal.ring();
    let mut gens = z.to_vec();
    for g in ideal.power(n).groebner() {
        for pos in 0..r {
            let mut v = vec![Polynomial::zero(ring); r];
            v[pos] = g.clone();
            gens.push(v);
        }
    }
    Submodule::new(ring, r, gens).expect("same ring")
}

struct PieceDetail {
    u_gens: Vec<Polynomial>,
    w_gens: Vec<Polynomial>,
    annihilator: Ideal,
    dim: usize,
}

fn piece_detail(
    ideal: &MPrimaryIdeal,
    xs: &[Polynomial],
    presentation: Submodule,
    n: u32,
) -> Result<PieceDetail> {
    let ring = ideal.ring();
    let p = ring.prime();
    let m = ModuleQuotient::new(presentation)?;
    let target = QuotientAlgebra::new(&ideal.power(n + 1))?;
    // psi: e_pos * mono -> x_pos * mono in A / I^{n+1}
    let images: Vec<Vec<u32>> = m
        .basis()
        .iter()
        .map(|(pos, mono)| {
            let f = xs[*pos].mul(&Polynomial::monomial(ring, mono.clone()));
            annvv_kernel::finite::to_dense(&target.coords(&f), target.dim())
        })
        .collect();
    let kernel = annvv_kernel::linalg::kernel(p, target.dim(), &images);
    let module = m.module();
    let annihilator = module.annihilator_of(ring, &kernel);
    let mut w_gens = Vec::new();
    for x in xs {
        for g in ideal.power(n).groebner() {
            w_gens.push(x.mul(g));
        }
    }
    let mut u_gens = w_gens.clone();
    for k in &kernel {
        let mut f = Polynomial::zero(ring);
        for (idx, &c) in k.iter().enumerate() {
            if c != 0 {
                let (pos, mono) = &m.basis()[idx];
                f = f.add_scaled(&xs[*pos].mul(&Polynomial::monomial(ring, mono.clone())), c);
            }
        }
        u_gens.push(f);
    }
    Ok(PieceDetail {
        u_gens,
        w_gens,
        annihilator,
        dim: kernel.len(),
    })
}

/// Compute the pieces of `V_I(x)` until a vanishing window holds.
pub fn vv_module(seq: &[Polynomial], ideal: &MPrimaryIdeal, cfg: &VvConfig) -> Result<VvModuleReport> {
    let r = seq.len();
    if r == 0 {
        return Err(CoreError::Precondition("empty sequence".into()));
    }
    let n_idx = ideal.n_index();
    let floor = n_idx + r as u32;
    let cap = cfg.cap.unwrap_or(3 * n_idx + 10);
    let z = relation_module(ideal, seq);
    let mut pieces = Vec::new();
    let mut zeros = 0u32;
    let mut status = VvStatus::Unstabilized { cap };
    for n in 1..=cap {
        let pres = piece_presentation(ideal, r, &z, n);
        let left = pres
            .colength()
            .finite()
            .ok_or_else(|| CoreError::Precondition("x I^n has infinite colength in (x)".into()))?;
        let right = colength_with(ideal, n + 1, &[]) - colength_with(ideal, n + 1, seq);
        let length = left.checked_sub(right).ok_or_else(|| {
            CoreError::Precondition(format!("negative piece length in degree {n}"))
        })?;
        if length == 0 {
            zeros += 1;
            pieces.push(VvPiece {
                n,
                length,
                u_gens: Vec::new(),
                w_gens: Vec::new(),
                annihilator: None,
                verdict: None,
            });
        } else {
            zeros = 0;
            let d = piece_detail(ideal, seq, pres, n)?;
            if d.dim as u64 != length {
                return Err(CoreError::Precondition(format!(
                    "piece {n}: kernel dimension {} differs from length {length}",
                    d.dim
                )));
            }
            let verdict = is_m_primary(&d.annihilator);
            pieces.push(VvPiece {
                n,
                length,
                u_gens: d.u_gens,
                w_gens: d.w_gens,
                annihilator: Some(d.annihilator),
                verdict: Some(verdict),
            });
        }
        if zeros >= cfg.window && n >= floor {
            status = VvStatus::Stabilized {
                degree: n + 1 - cfg.window,
            };
            break;
        }
    }
    let total_length = pieces.iter().map(|p| p.length).sum();
    let (annihilator, verdict) = if matches!(status, VvStatus::Stabilized { .. }) {
        let anns: Vec<&Ideal> = pieces.iter().filter_map(|p| p.annihilator.as_ref()).collect();
        let ann = if anns.is_empty() {
            Ideal::unit(ideal.ring())
        } else if anns.iter().all(|a| a.colength().is_finite()) {
            intersect_finite(&anns)?
        } else {
            anns.iter()
                .skip(1)
                .fold(anns[0].clone(), |acc, a| acc.intersect(a))
        };
        let v = is_m_primary(&ann);
        (Some(ann), Some(v))
    } else {
        (None, None)
    };
    Ok(VvModuleReport {
        r,
        pieces,
        total_length,
        status,
        annihilator,
        verdict,
    })
}

/// `ann_A V_I(x)` with its verdict; fails on an unstabilized report.
pub fn vv_annihilator(report: &VvModuleReport, seed: u64) -> Result<(Ideal, MPrimaryVerdict)> {
    match (&report.status, &report.annihilator, report.verdict) {
        (VvStatus::Stabilized { .. }, Some(a), Some(v)) => Ok((a.clone(), v)),
        (VvStatus::Unstabilized { cap }, _, _) => Err(CoreError::Unstabilized { cap: *cap, seed }),
        _ => Err(CoreError::Precondition("report lacks an annihilator".into())),
    }
}

/// The pieces `L_n = A / I^{n+1}` for `n = 0..=n_max` with the action of a
/// sequence `x` as degree-one maps `u_i = x_i t`.
pub struct LSeriesWindow {
    pub n_max: u32,
    pub pieces: Vec<QuotientAlgebra>,
    /// `actions[i][n]`: `u_i : L_n -> L_{n+1}`.
    pub actions: Vec<Vec<LinearMap>>,
    pub elements: Vec<Polynomial>,
}

impl LSeriesWindow {
    pub fn build(ideal: &MPrimaryIdeal, elements: &[Polynomial], n_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(CoreError::Precondition("window needs n_max >= 1".into()));
        }
        let mut w = LSeriesWindow {
            n_max: 0,
            pieces: vec![QuotientAlgebra::new(&ideal.power(1))?],
            actions: vec![Vec::new(); elements.len()],
            elements: elements.to_vec(),
        };
        w.extend(ideal, n_max)?;
        Ok(w)
    }

    /// Grow the window up to degree `n_max`.
    pub fn extend(&mut self, ideal: &MPrimaryIdeal, n_max: u32) -> Result<()> {
        while self.n_max < n_max {
            let n = self.n_max as usize;
            let next = QuotientAlgebra::new(&ideal.power(n as u32 + 2))?;
            for (i, x) in self.elements.iter().enumerate() {
                self.actions[i].push(next.multiplication_from(&self.pieces[n], x));
            }
            self.pieces.push(next);
            self.n_max += 1;
        }
        Ok(())
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < 0 || n > self.n_max as i64 {
            0
        } else {
            self.pieces[n as usize].dim()
        }
    }

    /// Whether `u_i u_j = u_j u_i` on every piece of the window.
    pub fn actions_commute(&self) -> bool {
        let p = self.pieces[0].ring().prime();
        let r = self.actions.len();
        for i in 0..r {
            for j in i + 1..r {
                for n in 0..self.n_max as usize - 1 {
                    let a = self.actions[i][n].then(p, &self.actions[j][n + 1]);
                    let b = self.actions[j][n].then(p, &self.actions[i][n + 1]);
                    if a.cols != b.cols {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Action of ring variable `v` on a direct sum of pieces.
    pub fn variable_action(&self, degrees: &[i64], v: usize) -> LinearMap {
        let dims: Vec<usize> = degrees.iter().map(|&n| self.dim(n)).collect();
        let maps: Vec<Option<LinearMap>> = degrees
            .iter()
            .map(|&n| (self.dim(n) > 0).then(|| self.pieces[n as usize].variable_action(v)))
            .collect();
        let blocks: Vec<Vec<Option<&LinearMap>>> = (0..degrees.len())
            .map(|r| {
                (0..degrees.len())
                    .map(|c| if r == c { maps[c].as_ref() } else { None })
                    .collect()
            })
            .collect();
        LinearMap::from_blocks(&dims, &dims, &blocks)
    }

    /// Multiplication by `x_i^t` from `L_n` to `L_{n+t}`.
    pub fn power_action(&self, i: usize, n: i64, t: u32) -> Option<LinearMap> {
        let tgt = n + t as i64;
        if n < 0 || tgt > self.n_max as i64 {
            return None;
        }
        let f = self.elements[i].pow(t);
        Some(self.pieces[tgt as usize].multiplication_from(&self.pieces[n as usize], &f))
    }
}

#[derive(Clone, Debug)]
pub struct KoszulDegree {
    pub n: u32,
    pub h1_dim: usize,
    pub vv_length: Option<u64>,
    pub dims_agree: bool,
    /// Annihilators compared on nonzero pieces.
    pub annihilators_agree: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct KoszulReport {
    pub n_max: u32,
    pub degrees: Vec<KoszulDegree>,
    /// Degrees outside the window, not reported.
    pub uncertified: Vec<u32>,
    /// `dim ker(u_1 : L_n -> L_{n+1})` for `n` from the onset on.
    pub filter_regular: Vec<(u32, usize)>,
    pub filter_regular_ok: bool,
    /// `H_1` vanishes on the top three degrees of the window.
    pub torsion_tail_zero: bool,
    /// When `H_1` vanishes everywhere: injectivity of each `u_i` on
    /// `L / (u_1..u_{i-1}) L` across the window.
    pub regular_when_zero: Option<bool>,
    pub agree: bool,
}

fn koszul_h1_degree(
    w: &LSeriesWindow,
    n: u32,
    want_module: bool,
) -> Result<(usize, Option<Ideal>)> {
    let ring = w.pieces[0].ring().clone();
    let p = ring.prime();
    let r = w.elements.len();
    let n = n as i64;
    let d0 = w.dim(n);
    let d1 = w.dim(n - 1);
    let d2 = w.dim(n - 2);
    // d1: L_{n-1}^r -> L_n
    let maps1: Vec<Option<&LinearMap>> = (0..r)
        .map(|i| (d1 > 0).then(|| &w.actions[i][(n - 1) as usize]))
        .collect();
    let one = LinearMap::from_blocks(&vec![d1; r], &[d0], &[maps1]);
    // d2: L_{n-2}^{pairs} -> L_{n-1}^r, e_i ^ e_j -> x_i e_j - x_j e_i
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let neg: Vec<Option<LinearMap>> = (0..r)
        .map(|i| {
            (d2 > 0).then(|| {
                let m = &w.actions[i][(n - 2) as usize];
                LinearMap {
                    src_dim: m.src_dim,
                    tgt_dim: m.tgt_dim,
                    cols: m
                        .cols
                        .iter()
                        .map(|c| c.iter().map(|&(k, a)| (k, field::neg(a, p))).collect())
                        .collect(),
                }
            })
        })
        .collect();
    let blocks: Vec<Vec<Option<&LinearMap>>> = (0..r)
        .map(|row| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    if d2 == 0 {
                        None
                    } else if row == j {
                        Some(&w.actions[i][(n - 2) as usize])
                    } else if row == i {
                        neg[j].as_ref()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let two = LinearMap::from_blocks(&vec![d2; pairs.len()], &vec![d1; r], &blocks);
    let h = Homology::new(p, &two, &one);
    let dim = h.dim();
    if dim == 0 || !want_module {
        return Ok((dim, None));
    }
    let degrees = vec![n - 1; r];
    let actions: Vec<LinearMap> = (0..ring.nvars()).map(|v| w.variable_action(&degrees, v)).collect();
    let module = h.module(&actions)?;
    Ok((dim, Some(module.annihilator(&ring))))
}

/// Compare `H_1(u; L)` with `V_I(x)` degree by degree on a window.
pub fn koszul_h1_check(
    seq: &SuperficialSequence,
    ideal: &MPrimaryIdeal,
    vv: &VvModuleReport,
    n_max: u32,
) -> Result<KoszulReport> {
    let xs = seq.elements();
    let w = LSeriesWindow::build(ideal, &xs, n_max)?;
    let mut degrees = Vec::new();
    for n in 1..=n_max {
        let vv_piece = vv.pieces.iter().find(|p| p.n == n);
        let want = vv_piece.map(|p| p.length > 0).unwrap_or(false);
        let (h1_dim, ann) = koszul_h1_degree(&w, n, want)?;
        let vv_length = vv_piece.map(|p| p.length);
        let dims_agree = vv_length.map(|l| l == h1_dim as u64).unwrap_or(true);
        let annihilators_agree = match (ann, vv_piece.and_then(|p| p.annihilator.as_ref())) {
            (Some(a), Some(b)) => Some(a.same_ideal(b)),
            _ => None,
        };
        degrees.push(KoszulDegree {
            n,
            h1_dim,
            vv_length,
            dims_agree,
            annihilators_agree,
        });
    }
    let p = ideal.ring().prime();
    let onset = seq.steps[0].certificate.onset;
    let mut filter_regular = Vec::new();
    for n in onset.saturating_sub(1)..n_max {
        let m = &w.actions[0][n as usize];
        filter_regular.push((n, m.src_dim - m.rank(p)));
    }
    let filter_regular_ok = filter_regular.iter().all(|(_, k)| *k == 0);
    let torsion_tail_zero = degrees.iter().rev().take(3).all(|d| d.h1_dim == 0);
    let regular_when_zero = if degrees.iter().all(|d| d.h1_dim == 0) {
        let mut ok = true;
        for i in 0..xs.len() {
            let prior = &xs[..i];
            let mut with = prior.to_vec();
            with.push(xs[i].clone());
            for k in 0..n_max {
                let a = colength_with(ideal, k + 1, prior);
                let b = colength_with(ideal, k + 2, prior);
                let c = colength_with(ideal, k + 2, &with);
                ok &= a + c == b;
            }
        }
        Some(ok)
    } else {
        None
    };
    let agree = degrees
        .iter()
        .all(|d| d.dims_agree && d.annihilators_agree.unwrap_or(true));
    Ok(KoszulReport {
        n_max,
        degrees,
        uncertified: vv.pieces.iter().map(|p| p.n).filter(|&n| n > n_max).collect(),
        filter_regular,
        filter_regular_ok,
        torsion_tail_zero,
        regular_when_zero,
        agree,
    })
}
