//! Acceptance suite. Each test prints one PASS/FAIL line with its elapsed
//! time against a fixed limit. A lock keeps the tests sequential so the
//! limits measure one criterion at a time.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command as Proc;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use annvv_core::local_model::{MPrimaryIdeal, MPrimaryVerdict};
use annvv_experiments::checks::{
    check_annihilators, check_ar, check_depth, check_koszul, check_powers, check_q_product,
    check_vv_criterion, samples, CHECK_SAMPLES,
};
use annvv_experiments::report::Status;
use annvv_experiments::{Corpus, RunConfig};
use annvv_kernel::monomial::monomials_of_degree;
use annvv_kernel::{groebner_basis, Colength, Ideal, Monomial, PolyRing, Polynomial, RingRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

static SEQUENTIAL: Mutex<()> = Mutex::new(());

const CORPUS_FILES: [&str; 3] = ["plane", "quartic", "cone"];

fn corpus_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.toml"))
}

fn corpus() -> Vec<(String, Corpus)> {
    CORPUS_FILES
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(corpus_path(f)).expect("corpus file");
            (f.to_string(), Corpus::parse(&text).expect("corpus parses"))
        })
        .collect()
}

fn entries() -> Vec<(String, MPrimaryIdeal)> {
    corpus()
        .into_iter()
        .flat_map(|(f, c)| {
            c.ideals
                .into_iter()
                .map(move |(n, i)| (format!("{f}/{n}"), i))
        })
        .collect()
}

fn criterion(id: &str, title: &str, limit_secs: u64, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SEQUENTIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(limit_secs);
    let pass = outcome.is_ok() && in_time;
    let detail = match &outcome {
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    let line = format!(
        "[acceptance] {id} {} {title} ({:.1}s, limit {limit_secs}s) {detail}{}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if in_time { "" } else { " [time limit exceeded]" },
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "{line}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- C1 oracles

fn ring(names: &[&str]) -> RingRef {
    PolyRing::new(32003, names.iter().map(|s| s.to_string()).collect()).unwrap()
}

/// Textbook division by a list, written against the public polynomial API.
fn naive_remainder(f: &Polynomial, g: &[Polynomial]) -> Polynomial {
    let r = f.ring().clone();
    let p = r.prime();
    let mut f = f.clone();
    let mut rem = Polynomial::zero(&r);
    while !f.is_zero() {
        let (m, c) = f.terms()[0].clone();
        match g.iter().find(|h| h.lead_monomial().unwrap().divides(&m)) {
            Some(h) => {
                let q = h.lead_monomial().unwrap().quotient_of(&m).unwrap();
                let a = (c as u64 * annvv_kernel::field::inv(h.lead_coeff(), p) as u64 % p as u64) as u32;
                f = f.sub(&h.mul_term(&q, a));
            }
            None => {
                let t = Polynomial::term(&r, m, c);
                rem = rem.add(&t);
                f = f.sub(&t);
            }
        }
    }
    rem
}

fn is_groebner(g: &[Polynomial]) -> bool {
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let (a, b) = (g[i].lead_monomial().unwrap(), g[j].lead_monomial().unwrap());
            let l = a.lcm(b);
            let s = g[i]
                .monic()
                .mul_term(&a.quotient_of(&l).unwrap(), 1)
                .sub(&g[j].monic().mul_term(&b.quotient_of(&l).unwrap(), 1));
            if !naive_remainder(&s, g).is_zero() {
                return false;
            }
        }
    }
    true
}

fn random_poly(r: &RingRef, rng: &mut ChaCha8Rng, terms: usize, maxdeg: u16) -> Polynomial {
    let t = (0..terms)
        .map(|_| {
            let e: Vec<u16> = (0..r.nvars()).map(|_| rng.gen_range(0..=maxdeg)).collect();
            (Monomial::from_exponents(&e), rng.gen_range(1..r.prime()))
        })
        .collect();
    Polynomial::from_terms(r, t)
}

fn random_instance(rings: &[RingRef], rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = &rings[rng.gen_range(0..rings.len())];
    let k = rng.gen_range(1..=3);
    let gens: Vec<Polynomial> = (0..k).map(|_| random_poly(r, rng, 3, 2)).collect();
    let i = Ideal::new(r, gens.clone()).map_err(|e| e.to_string())?;
    let gb = i.groebner().to_vec();
    let context = || format!("gens {:?}", gens.iter().map(|g| g.to_string()).collect::<Vec<_>>());
    ensure(is_groebner(&gb), || format!("S-pair oracle rejects basis, {}", context()))?;
    ensure(groebner_basis(r, &gb).map_err(|e| e.to_string())? == gb, || {
        format!("basis not idempotent, {}", context())
    })?;
    ensure(gens.iter().all(|g| naive_remainder(g, &gb).is_zero()), || {
        format!("generator outside basis span, {}", context())
    })?;
    for _ in 0..3 {
        let mut combo = Polynomial::zero(r);
        for g in &gens {
            combo = combo.add(&random_poly(r, rng, 2, 2).mul(g));
        }
        ensure(i.contains(&combo), || format!("combination not a member, {}", context()))?;
        let q = random_poly(r, rng, 3, 3);
        ensure(i.contains(&q) == naive_remainder(&q, &gb).is_zero(), || {
            format!("membership of {q} disagrees with division, {}", context())
        })?;
    }
    Ok(())
}

/// Colength of a monomial ideal by direct enumeration of standard monomials.
fn brute_colength(nvars: usize, gens: &[Vec<u16>]) -> Colength {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Colength::Finite(0);
    }
    let mut bounds = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let pure = gens
            .iter()
            .filter(|g| (0..nvars).all(|w| w == v || g[w] == 0))
            .map(|g| g[v])
            .min();
        match pure {
            Some(b) => bounds.push(b),
            None => return Colength::Infinite,
        }
    }
    let mut count = 0;
    let mut e = vec![0u16; nvars];
    loop {
        if !gens.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == nvars {
                return Colength::Finite(count);
            }
            e[k] += 1;
            if e[k] < bounds[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

fn monomial_ideal(r: &RingRef, gens: &[Vec<u16>]) -> Ideal {
    Ideal::new(
        r,
        gens.iter()
            .map(|e| Polynomial::monomial(r, Monomial::from_exponents(e)))
            .collect(),
    )
    .unwrap()
}

/// Every ideal of k[x,y] generated in degree <= `top`: one minimal generator
/// `x^a y^h(a)` per column, with `h` non-increasing inside the triangle.
fn plane_monomial_ideals(top: u16) -> Vec<Vec<Vec<u16>>> {
    fn go(a: u16, top: u16, bound: Option<u16>, cur: &mut Vec<Vec<u16>>, out: &mut Vec<Vec<Vec<u16>>>) {
        if a > top {
            out.push(cur.clone());
            return;
        }
        let mut options: Vec<Option<u16>> = (0..=top - a).map(Some).collect();
        options.push(None);
        for h in options {
            if let Some(b) = bound {
                match h {
                    Some(h) if h <= b => {}
                    _ => continue,
                }
            }
            let next = h.filter(|&h| h + a < top);
            if let Some(h) = h {
                cur.push(vec![a, h]);
            }
            go(a + 1, top, next, cur, out);
            if h.is_some() {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, top, None, &mut Vec::new(), &mut out);
    out
}

fn monomial_colengths() -> Result<usize, String> {
    let mut checked = 0;
    let r1 = ring(&["x"]);
    for a in 0..=8u16 {
        let gens = vec![vec![a]];
        ensure(monomial_ideal(&r1, &gens).colength() == brute_colength(1, &gens), || {
            format!("colength of (x^{a})")
        })?;
        checked += 1;
    }
    let r2 = ring(&["x", "y"]);
    let all = plane_monomial_ideals(8);
    ensure(all.len() == 16796, || format!("enumerated {} plane ideals", all.len()))?;
    for gens in &all {
        if gens.is_empty() {
            continue;
        }
        let (got, want) = (monomial_ideal(&r2, gens).colength(), brute_colength(2, gens));
        ensure(got == want, || format!("colength of {gens:?}: {got:?} vs {want:?}"))?;
        checked += 1;
    }
    let r3 = ring(&["x", "y", "z"]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a11);
    for _ in 0..3000 {
        let mut gens: Vec<Vec<u16>> = Vec::new();
        for v in 0..3 {
            if rng.gen_bool(0.8) {
                let mut e = vec![0u16; 3];
                e[v] = rng.gen_range(1..=8);
                gens.push(e);
            }
        }
        for _ in 0..rng.gen_range(0..=4) {
            let d = rng.gen_range(1..=8u32);
            let ms = monomials_of_degree(3, d);
            gens.push(ms[rng.gen_range(0..ms.len())].exponents().to_vec());
        }
        if gens.is_empty() {
            continue;
        }
        let (got, want) = (monomial_ideal(&r3, &gens).colength(), brute_colength(3, &gens));
        ensure(got == want, || format!("colength of {gens:?}: {got:?} vs {want:?}"))?;
        checked += 1;
    }
    Ok(checked)
}

#[test]
fn c1_kernel_soundness() {
    criterion("C1", "kernel soundness", 60, || {
        let rings = [ring(&["x", "y"]), ring(&["x", "y", "z"])];
        let mut rng = ChaCha8Rng::seed_from_u64(0xc1);
        for k in 0..200 {
            random_instance(&rings, &mut rng).map_err(|e| format!("instance {k}: {e}"))?;
        }
        let n = monomial_colengths()?;
        Ok(format!("200 random instances, {n} monomial ideals"))
    });
}

// ------------------------------------------------------------ C2 to C6

fn deficient(i: &MPrimaryIdeal, depth: usize) -> bool {
    depth < i.local_ring().dim()
}

#[test]
fn c2_vv_criterion_and_depth_oracles() {
    criterion("C2", "VV criterion and depth oracles", 300, || {
        let cfg = RunConfig::default();
        let mut depths = std::collections::BTreeMap::new();
        let mut sequences = 0;
        for (name, i) in entries() {
            let (c, depth) = check_depth(&i, &cfg);
            ensure(c.status == Status::Pass, || format!("{name}: depth oracles {}", c.detail))?;
            let depth = depth.expect("depth when oracles agree");
            depths.insert(name.clone(), depth);
            let s = samples(&i, &cfg, CHECK_SAMPLES).map_err(|e| format!("{name}: {e}"))?;
            let c = check_vv_criterion(&i, &s, Some(depth));
            ensure(c.status == Status::Pass, || format!("{name}: {}", c.detail))?;
            sequences += s.runs.iter().map(|r| r.2.len()).sum::<usize>();
        }
        let expected = [
            ("plane/maximal", 2),
            ("plane/squares", 2),
            ("plane/quartic_gap", 0),
            ("quartic/maximal", 1),
        ];
        for (name, d) in expected {
            ensure(depths.get(name) == Some(&d), || format!("{name}: depth {:?}, expected {d}", depths.get(name)))?;
        }
        let spanned: std::collections::BTreeSet<usize> = depths.values().copied().collect();
        ensure(depths.len() >= 6 && spanned.len() == 3, || format!("corpus depths {depths:?}"))?;
        Ok(format!("{} pairs, depths {spanned:?}, {sequences} sequences", depths.len()))
    });
}

#[test]
fn c3_koszul_h1_equals_vv() {
    criterion("C3", "Koszul H_1 equals V degreewise", 300, || {
        let cfg = RunConfig::default();
        let mut degrees = 0;
        let mut nonzero = 0;
        for (name, i) in entries() {
            let s = samples(&i, &cfg, CHECK_SAMPLES).map_err(|e| format!("{name}: {e}"))?;
            let c = check_koszul(&i, &s, &cfg);
            ensure(c.status == Status::Pass, || format!("{name}: {}", c.detail))?;
            for row in c.detail.as_array().expect("rows") {
                let h1 = row["h1"].as_array().expect("h1");
                degrees += h1.len();
                nonzero += h1.iter().filter(|v| v.as_u64() != Some(0)).count();
            }
        }
        ensure(nonzero > 0, || "no nonzero degree was compared".into())?;
        Ok(format!("{degrees} certified degrees, {nonzero} nonzero"))
    });
}

#[test]
fn c4_annihilators_m_primary() {
    criterion("C4", "ann V and a_r estimate m-primary below depth", 600, || {
        let cfg = RunConfig::default();
        let mut estimates = Vec::new();
        for (name, i) in entries() {
            let (_, depth) = check_depth(&i, &cfg);
            let depth = depth.ok_or_else(|| format!("{name}: depth unknown"))?;
            if !deficient(&i, depth) {
                continue;
            }
            let s = samples(&i, &cfg, CHECK_SAMPLES).map_err(|e| format!("{name}: {e}"))?;
            let c = check_annihilators(&i, &s, Some(depth));
            ensure(c.status == Status::Pass, || format!("{name}: {}", c.detail))?;
            let (c, ar) = check_ar(&i, &cfg, Some(depth));
            ensure(c.status == Status::Pass, || format!("{name}: {}", c.detail))?;
            for a in &ar {
                ensure(a.samples == 32, || format!("{name}: {} samples", a.samples))?;
                match a.verdict {
                    MPrimaryVerdict::MPrimary { n, .. } => estimates.push(format!("{name} r={} N={n}", a.r)),
                    v => return Err(format!("{name}: a_{} estimate {v:?}", a.r)),
                }
            }
        }
        ensure(estimates.len() >= 3, || format!("only {estimates:?}"))?;
        Ok(estimates.join(", "))
    });
}

#[test]
fn c5_q_product_inside_annihilators() {
    criterion("C5", "q-product inside ann V and a_r estimate", 600, || {
        let cfg = RunConfig::default();
        let mut checked = 0;
        for (name, i) in entries() {
            let (_, depth) = check_depth(&i, &cfg);
            let s = samples(&i, &cfg, CHECK_SAMPLES).map_err(|e| format!("{name}: {e}"))?;
            let (_, ar) = check_ar(&i, &cfg, depth);
            let c = check_q_product(&i, &s, &cfg, &ar);
            ensure(!c.status.is_failure(), || format!("{name}: {}", c.detail))?;
            let inside = c.detail["inside_ar_estimate"].as_array().expect("rows");
            ensure(inside.iter().all(|r| r["contained"] != Value::Bool(false)), || {
                format!("{name}: {}", c.detail)
            })?;
            checked += c.detail["per_r"]
                .as_array()
                .expect("rows")
                .iter()
                .filter(|r| r["skipped"].is_null())
                .map(|r| r["contained"].as_array().map_or(0, |v| v.len()))
                .sum::<usize>();
            checked += inside.iter().filter(|r| r["contained"] == Value::Bool(true)).count();
        }
        ensure(checked > 0, || "no containment was checked".into())?;
        Ok(format!("{checked} containments verified"))
    });
}

#[test]
fn c6_powers_program() {
    criterion("C6", "Veronese containments and running intersection", 900, || {
        let cfg = RunConfig::default();
        let mut deficient_rows = 0;
        for (name, i) in entries() {
            let (_, depth) = check_depth(&i, &cfg);
            let c = check_powers(&i, &cfg, depth);
            ensure(c.status == Status::Pass, || format!("{name}: {}", c.detail))?;
            let rows = c.detail["rows"].as_array().expect("rows");
            ensure(rows.len() == 3, || format!("{name}: {} rows", rows.len()))?;
            if c.detail["depth_deficient"] == Value::Bool(true) {
                deficient_rows += rows.len();
            }
        }
        ensure(deficient_rows > 0, || "no depth-deficient entry".into())?;
        Ok(format!("l <= 3, {deficient_rows} depth-deficient rows"))
    });
}

// ------------------------------------------------------------------- C7

fn annvv(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_annvv"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Objects marked unstable must not carry values. An entry's `ideal` is its
/// declared name, hence the string exemption.
fn honest(v: &Value, path: &str) -> Result<(), String> {
    match v {
        Value::Object(map) => {
            if map.get("status").and_then(Value::as_str) == Some("unstable") {
                for key in ["result", "ideal", "dim", "verdict", "annihilator", "module"] {
                    if map.get(key).is_some_and(|x| !x.is_null() && !x.is_string()) {
                        return Err(format!("{path}: unstable object carries '{key}'"));
                    }
                }
            }
            map.iter().try_for_each(|(k, x)| honest(x, &format!("{path}.{k}")))
        }
        Value::Array(xs) => xs
            .iter()
            .enumerate()
            .try_for_each(|(k, x)| honest(x, &format!("{path}[{k}]"))),
        _ => Ok(()),
    }
}

fn report_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_string_lossy();
            !name.starts_with("manifest") && (name.ends_with(".json") || name.ends_with(".csv"))
        })
        .collect();
    files.sort();
    files
}

#[test]
fn c7_honesty_and_replay() {
    criterion("C7", "honest instability and byte-identical replay", 900, || {
        let root = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = root.path().to_str().unwrap().to_string();
        let mut runs: Vec<(String, PathBuf)> = Vec::new();
        let mut jobs: Vec<(&str, &str)> = Vec::new();
        for f in CORPUS_FILES {
            for c in ["gb", "depth-g", "vv", "ann", "ar", "q"] {
                jobs.push((c, f));
            }
        }
        jobs.push(("powers", "quartic"));
        jobs.push(("verify-all", "quartic"));
        for (command, file) in jobs {
            let input = corpus_path(file);
            let (code, stdout, stderr) =
                annvv(&[command, input.to_str().unwrap(), "--out", &out, "--format", "both"]);
            ensure(code == 0, || format!("{command} {file}: exit {code}: {stderr}"))?;
            runs.push((format!("{command} {file}"), PathBuf::from(stdout.trim())));
        }
        let input = corpus_path("plane");
        let (code, stdout, _) = annvv(&["vv", input.to_str().unwrap(), "--out", &out, "--window", "100"]);
        ensure(code == 3, || format!("exhausted window exit code {code}"))?;
        let unstable_dir = PathBuf::from(stdout.trim());
        let report: Value =
            serde_json::from_slice(&std::fs::read(unstable_dir.join("vv.json")).unwrap()).unwrap();
        for e in report["entries"].as_array().unwrap() {
            ensure(e["status"] == "unstable" && e["result"].is_null(), || {
                format!("exhausted window entry {e}")
            })?;
        }
        ensure(!unstable_dir.join("vv.csv").exists(), || "csv written without request".into())?;
        runs.push(("vv plane --window 100".into(), unstable_dir));

        let mut files = 0;
        for (label, dir) in &runs {
            ensure(!dir.join("INCOMPLETE").exists(), || format!("{label}: incomplete marker"))?;
            for f in report_files(dir) {
                if f.extension().is_some_and(|e| e == "json") {
                    let v: Value = serde_json::from_slice(&std::fs::read(&f).unwrap())
                        .map_err(|e| format!("{}: {e}", f.display()))?;
                    honest(&v, label)?;
                }
            }
            let (code, stdout, stderr) = annvv(&["replay", dir.to_str().unwrap()]);
            ensure(code == 0 && !stdout.contains("DIFFERS"), || {
                format!("{label}: replay exit {code}: {stdout}{stderr}")
            })?;
            files += stdout.lines().count();
        }

        let (_, tampered) = &runs[0];
        let target = tampered.join("gb.json");
        let mut bytes = std::fs::read(&target).unwrap();
        bytes.extend_from_slice(b" ");
        std::fs::write(&target, bytes).unwrap();
        let (code, stdout, _) = annvv(&["replay", tampered.to_str().unwrap()]);
        ensure(code == 1 && stdout.contains("DIFFERS"), || format!("tampered replay exit {code}"))?;

        Ok(format!("{} runs, {files} report files replayed identically", runs.len()))
    });
}
