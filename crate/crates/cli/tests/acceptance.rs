//! Acceptance criteria, run with `cargo test -p deltahull-cli --test acceptance`.
//! Prints one `[PASS]` or `[FAIL]` line per criterion and exits nonzero on
//! any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use deltahull::budget::Budgets;
use deltahull::deep::near_tight_rows;
use deltahull::generators::{generate, generate_suite, Family, InstanceRng, InstanceSpec, SuiteSpec};
use deltahull::hull::{hull_vertices, IntegerHull, LatticePointSet};
use deltahull::linalg::hnf_decompose;
use deltahull::lp::{lp_solve, LinearProgram, LpResult};
use deltahull::matrix::{IntMatrix, RatMatrix};
use deltahull::polyhedron::Polyhedron;
use deltahull::subdet::delta;
use deltahull::theory::bounds::{brass, erdos_furedi, xi};
use deltahull::theory::{gamma_bruteforce, is_convex_independent, verify_instance, GammaSource, VerificationReport};
use deltahull_oracles::{
    check_hnf_shape, check_lp_claim, cofactor_det, gamma_2d, gift_wrap, mat_mul, rational_rank, Lp, LpClaim,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect())
        .collect()
}

fn from_i128(rows: &[Vec<i128>]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

struct Corpus {
    reports: Vec<VerificationReport>,
    random: usize,
}

fn corpus() -> Result<Corpus, String> {
    // Three-dimensional instances with m = 8 can exceed the default face budget.
    let b = Budgets {
        face_vertices: 64,
        ..Budgets::default()
    };
    let mut specs = Vec::new();
    for (n, m) in (3..=8).map(|m| (2, m)).chain((4..=8).map(|m| (3, m))) {
        specs.push(format!("random:n={n},m={m},bound=3,count=10,seed={}", 100 * n + m));
    }
    let random = specs.len() * 10;
    for scale in 1..=3 {
        specs.push(format!("hypercube:n=2,scale={scale}"));
        specs.push(format!("hypercube:n=3,scale={scale}"));
        specs.push(format!("scaled-simplex:n=2,scale={scale}"));
        specs.push(format!("scaled-simplex:n=3,scale={scale}"));
        specs.push(format!("dilated-triangle:n=2,scale={scale}"));
    }
    let mut instances = Vec::new();
    for s in &specs {
        let suite: SuiteSpec = s.parse().map_err(|e| format!("{s}: {e}"))?;
        instances.extend(generate_suite(&suite, &b).map_err(|e| format!("{s}: {e}"))?);
    }
    let mut named: Vec<(String, Polyhedron)> = instances.into_iter().map(|g| (g.id, g.polyhedron)).collect();
    // Diamond prism, the smallest corpus member with n = 3 and Δ = 2.
    let prism = Polyhedron::from_i64(
        &[&[1, 1, 0], &[1, -1, 0], &[-1, 1, 0], &[-1, -1, 0], &[0, 0, 1], &[0, 0, -1]],
        &[2, 2, 2, 2, 1, 0],
    )
    .map_err(|e| e.to_string())?;
    named.push(("diamond-prism".into(), prism));
    let reports = named
        .par_iter()
        .map(|(id, p)| verify_instance(id, p, None, &b).map_err(|e| format!("{id}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Corpus { reports, random })
}

fn theorem1(c: &Corpus) -> Outcome {
    let faces: usize = c.reports.iter().map(|r| r.theorem1.len()).sum();
    let bad: Vec<String> = c
        .reports
        .iter()
        .flat_map(|r| r.theorem1.iter().filter(|f| !f.passed()).map(move |f| format!("{} face {}", r.id, f.face)))
        .collect();
    let pointwise = c.reports.iter().flat_map(|r| &r.theorem1).filter(|f| !f.pointwise_ok).count();
    ensure(c.random >= 100, || format!("only {} random instances", c.random))?;
    ensure(bad.is_empty(), || format!("{} violations, first {}", bad.len(), bad[0]))?;
    Ok(format!(
        "{} instances ({} random), {faces} faces, 0 violations, {pointwise} pointwise rank failures",
        c.reports.len(),
        c.random
    ))
}

fn main_bound(c: &Corpus) -> Outcome {
    let bad: Vec<&str> = c.reports.iter().filter(|r| !r.corollary1.prop3_ok).map(|r| r.id.as_str()).collect();
    ensure(bad.is_empty(), || format!("bound exceeded on {bad:?}"))?;
    for r in &c.reports {
        let bound = BigInt::from(2) * binomial(r.m, r.n) * r.delta.pow(r.n as u32 - 1);
        ensure(r.corollary1.main_bound == bound, || format!("{}: bound {}", r.id, r.corollary1.main_bound))?;
        let ratio = BigRational::new(BigInt::from(r.vertices.len()), bound);
        ensure(r.corollary1.ratio == ratio, || format!("{}: ratio", r.id))?;
    }
    let max = c.reports.iter().map(|r| &r.corollary1.ratio).max().unwrap();
    let mean: f64 = c.reports.iter().map(|r| r.corollary1.ratio.to_f64().unwrap()).sum::<f64>() / c.reports.len() as f64;
    Ok(format!("max ratio {max}, mean ratio {mean:.4}"))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn lemma1(c: &Corpus) -> Outcome {
    let mut exact = std::collections::BTreeSet::new();
    let mut brass_used = 0;
    for r in &c.reports {
        let l = &r.lemma1;
        ensure(l.ok && l.vertex_count <= l.beta * l.gamma.to_usize().unwrap(), || format!("{} fails", r.id))?;
        let golden = match (r.n, r.delta.to_u64().unwrap()) {
            (2, 1) => Some(1),
            (2, 2) => Some(4),
            (2, 3) => Some(6),
            (3, 2) => Some(8),
            _ => None,
        };
        let want = match (golden, l.gamma_source) {
            (Some(g), GammaSource::Exact) => BigInt::from(g),
            (Some(_), GammaSource::Brass) => return Err(format!("{}: Brass used where γ is exact", r.id)),
            (None, GammaSource::Exact) => {
                let d = r.delta.to_u64().unwrap();
                BigInt::from(gamma_bruteforce(r.n, d, &Budgets::default()).map_err(|e| e.to_string())?.value)
            }
            (None, GammaSource::Brass) => brass(r.n, &r.delta),
        };
        ensure(l.gamma == want, || format!("{}: γ {} expected {want}", r.id, l.gamma))?;
        if golden.is_some() {
            exact.insert((r.n, r.delta.to_u64().unwrap()));
        } else if l.gamma_source == GammaSource::Brass {
            brass_used += 1;
        }
    }
    ensure(exact.len() == 4, || format!("exact pairs seen: {exact:?}"))?;
    Ok(format!(
        "{} instances, exact γ on {exact:?}, Brass on {brass_used}",
        c.reports.len()
    ))
}

fn gamma_goldens() -> Outcome {
    let b = Budgets::default();
    let g = |n, d| gamma_bruteforce(n, d, &b).map_err(|e| e.to_string());
    for d in 2..=6 {
        ensure(g(1, d)?.value == 2, || format!("γ(1,{d})"))?;
    }
    let g22 = g(2, 2)?;
    let g23 = g(2, 3)?;
    let g32 = g(3, 2)?;
    ensure(g22.value == 4 && g22.value == gamma_2d(2), || format!("γ(2,2) = {}", g22.value))?;
    ensure(g32.value == 8, || format!("γ(3,2) = {}", g32.value))?;
    ensure(g23.value <= 6 && g23.value == gamma_2d(3), || format!("γ(2,3) = {}", g23.value))?;
    for r in [&g22, &g23, &g32] {
        ensure(is_convex_independent(&r.witness).unwrap(), || "witness not independent".into())?;
    }
    let checks = [(1, 2, 2), (1, 3, 2), (2, 2, g22.value), (2, 3, g23.value), (3, 2, g32.value)];
    for (n, d, v) in checks {
        let d = BigInt::from(d);
        let lower = erdos_furedi(n, &d);
        if lower >= BigRational::one() {
            ensure(BigRational::from_integer(v.into()) >= lower, || format!("γ({n},{d}) below {lower}"))?;
        }
        ensure(BigInt::from(v) <= brass(n, &d), || format!("γ({n},{d}) above Brass"))?;
    }
    Ok(format!("γ(1,2..6)=2 γ(2,2)={} γ(2,3)={} γ(3,2)={}", g22.value, g23.value, g32.value))
}

fn xi_values() -> Outcome {
    for m in 3..=10 {
        let v = xi(2, m).map_err(|e| e.to_string())?;
        ensure(v == BigInt::from(m), || format!("ξ(2,{m}) = {v}"))?;
    }
    let b = Budgets::default();
    let cube = generate(&InstanceSpec::new(Family::Hypercube, 3), &b).map_err(|e| e.to_string())?;
    let count = cube.real_vertices(&b).map_err(|e| e.to_string())?.len();
    let x36 = xi(3, 6).map_err(|e| e.to_string())?;
    ensure(x36 == BigInt::from(8) && x36 == BigInt::from(count), || format!("ξ(3,6) = {x36}, cube {count}"))?;
    let x47 = xi(4, 7).map_err(|e| e.to_string())?;
    // Even n: 7/5 * C(5, 2) = 14.
    ensure(x47 == BigInt::from(14), || format!("ξ(4,7) = {x47}"))?;
    Ok("ξ(2,3..10)=m, ξ(3,6)=8=cube vertices, ξ(4,7)=14".into())
}

fn unimodular() -> Outcome {
    let b = Budgets::default();
    let mut found = 0;
    let mut vertices = 0;
    for seed in 0..2000u64 {
        let n = 2 + (seed % 2) as usize;
        let spec = InstanceSpec {
            m: Some(n + 1 + (seed % 4) as usize),
            entry_bound: 1,
            seed,
            ..InstanceSpec::new(Family::Random, n)
        };
        let p = generate(&spec, &b).map_err(|e| e.to_string())?;
        if delta(p.a(), &b).map_err(|e| e.to_string())? != BigInt::one() {
            continue;
        }
        let real = p.real_vertices(&b).map_err(|e| e.to_string())?;
        let mut integral: Vec<_> = real.iter().filter_map(|v| v.integer_point()).collect();
        integral.sort();
        integral.dedup();
        let hull = IntegerHull::compute(&p, &b).map_err(|e| e.to_string())?;
        ensure(hull.vertices == integral, || format!("{}: hull differs", spec.id()))?;
        for v in &hull.vertices {
            let slack = p.slack(v);
            let tight: Vec<usize> = (0..slack.len()).filter(|&i| slack[i].is_zero()).collect();
            ensure(near_tight_rows(&p, v, &BigInt::one()) == tight, || format!("{}: near-tight set", spec.id()))?;
        }
        vertices += hull.vertices.len();
        found += 1;
        if found == 25 {
            break;
        }
    }
    ensure(found >= 20, || format!("only {found} Δ=1 instances"))?;
    Ok(format!("{found} Δ=1 instances, {vertices} vertices"))
}

fn random_matrix(rng: &mut InstanceRng, rows: usize, cols: usize) -> Vec<Vec<i128>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.uniform(-9, 9) as i128).collect())
        .collect()
}

// Copies, negations and zero rows push the rank down without leaving [-9, 9].
fn mixed_rank_matrix(rng: &mut InstanceRng) -> Vec<Vec<i128>> {
    let rows = rng.uniform(1, 6) as usize;
    let cols = rng.uniform(1, 6) as usize;
    let free = rng.uniform(0, rows as i64) as usize;
    let mut m = random_matrix(rng, free, cols);
    while m.len() < rows {
        let row = match rng.uniform(0, 2) {
            0 if !m.is_empty() => m[rng.uniform(0, m.len() as i64 - 1) as usize].clone(),
            1 if !m.is_empty() => m[rng.uniform(0, m.len() as i64 - 1) as usize].iter().map(|x| -x).collect(),
            _ => vec![0; cols],
        };
        m.push(row);
    }
    m
}

fn hnf_suite() -> Outcome {
    let mut rng = InstanceRng::new(7);
    let mut ranks = BTreeMap::new();
    for case in 0..500 {
        let m = mixed_rank_matrix(&mut rng);
        let d = hnf_decompose(&from_i128(&m));
        let h = to_i128(&d.padded_h());
        let q = to_i128(&d.q);
        ensure(mat_mul(&h, &q) == m, || format!("case {case}: HQ != M"))?;
        ensure(cofactor_det(&q).abs() == 1, || format!("case {case}: det Q"))?;
        check_hnf_shape(&to_i128(&d.h), d.rank).map_err(|e| format!("case {case}: {e}"))?;
        ensure(d.rank == rational_rank(&m), || format!("case {case}: rank"))?;
        *ranks.entry(d.rank).or_insert(0) += 1;
    }
    let mut full = 0;
    while full < 100 {
        let n = rng.uniform(1, 6) as usize;
        let m = random_matrix(&mut rng, n, n);
        let det = cofactor_det(&m).abs();
        if det == 0 {
            continue;
        }
        let d = hnf_decompose(&from_i128(&m));
        let max = to_i128(&d.h).iter().flatten().map(|x| x.abs()).max().unwrap();
        ensure(max <= det, || format!("‖H‖ = {max} > Δ = {det}"))?;
        full += 1;
    }
    Ok(format!("500 matrices, ranks {ranks:?}; {full} full-rank with ‖H‖ ≤ Δ"))
}

fn planar_hulls() -> Outcome {
    let mut rng = InstanceRng::new(8);
    let mut total = 0;
    for case in 0..50 {
        let k = rng.uniform(1, 30) as usize;
        let pts: Vec<(i128, i128)> = (0..k).map(|_| (rng.uniform(0, 9) as i128, rng.uniform(0, 9) as i128)).collect();
        let set = LatticePointSet::new(pts.iter().map(|&(x, y)| vec![x.into(), y.into()]).collect());
        let got: Vec<(i128, i128)> = hull_vertices(&set)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|v| (v[0].to_i128().unwrap(), v[1].to_i128().unwrap()))
            .collect();
        let want = gift_wrap(&pts);
        ensure(got == want, || format!("case {case}: {got:?} vs {want:?}"))?;
        total += got.len();
    }
    Ok(format!("50 sets, {total} hull vertices"))
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn lp_certificates() -> Outcome {
    let mut rng = InstanceRng::new(9);
    let mut tally = BTreeMap::new();
    for case in 0..200 {
        let n = rng.uniform(1, 4) as usize;
        let m = rng.uniform(0, 5) as usize;
        let k = rng.uniform(0, 2) as usize;
        let mut row = |len: usize, lo: i64, hi: i64| -> Vec<BigRational> { (0..len).map(|_| q(rng.uniform(lo, hi))).collect() };
        let c = row(n, -4, 4);
        let g: Vec<Vec<BigRational>> = (0..m).map(|_| row(n, -4, 4)).collect();
        let h = row(m, -6, 6);
        let e: Vec<Vec<BigRational>> = (0..k).map(|_| row(n, -4, 4)).collect();
        let f = row(k, -6, 6);
        let maximize = rng.uniform(0, 1) == 1;
        let nonneg: Vec<bool> = (0..n).map(|_| rng.uniform(0, 1) == 1).collect();
        let mat = |rows: &[Vec<BigRational>]| {
            RatMatrix::from_vec(rows.len(), n, rows.iter().flatten().cloned().collect()).unwrap()
        };
        let mut lp = LinearProgram::new(n).with_ineq(mat(&g), h.clone()).with_eq(mat(&e), f.clone());
        lp = if maximize { lp.maximize(c.clone()) } else { lp.minimize(c.clone()) };
        lp.nonnegative = nonneg.clone();
        let r = lp_solve(&lp).map_err(|e| format!("case {case}: {e}"))?;
        let claim = match r.clone() {
            LpResult::Optimal { point, value, dual } => LpClaim::Optimal { x: point, value, y: dual.ineq, z: dual.eq },
            LpResult::Infeasible { farkas } => LpClaim::Infeasible { y: farkas.ineq, z: farkas.eq },
            LpResult::Unbounded { point, ray } => LpClaim::Unbounded { x: point, d: ray },
        };
        let plain = Lp { maximize, c, g, h, e, f, nonneg };
        check_lp_claim(&plain, &claim).map_err(|e| format!("case {case}: {e}"))?;
        ensure(r.verify(&lp), || format!("case {case}: self-check"))?;
        *tally.entry(format!("{:?}", r.status())).or_insert(0) += 1;
    }
    Ok(format!("200 LPs {tally:?}"))
}

fn prop2(c: &Corpus) -> Outcome {
    let mut literal = Vec::new();
    let mut derived = 0;
    let mut vertices = 0;
    for r in &c.reports {
        for v in &r.corollary1.vertices {
            vertices += 1;
            if !v.prop2_literal_ok {
                literal.push(format!("{} at {:?} ({} > {})", r.id, v.vertex.iter().map(|x| x.to_string()).collect::<Vec<_>>(), v.supp_literal, r.corollary1.supp_limit));
            }
            if !v.prop2_derived_ok {
                derived += 1;
            }
        }
    }
    for line in &literal {
        println!("    literal Δ-1 failure: {line}");
    }
    ensure(derived == 0, || format!("{derived} derived-form failures"))?;
    Ok(format!(
        "{vertices} vertices: threshold Δ passes all, threshold Δ-1 fails {} ({:.2}%)",
        literal.len(),
        100.0 * literal.len() as f64 / vertices as f64
    ))
}

fn determinism() -> Outcome {
    let args = [
        "verify",
        "--suite",
        "random:n=2,m=6,count=20",
        "--suite",
        "random:n=3,m=6,count=10",
        "--suite",
        "dilated-triangle:n=2,scale=2",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let run = |jobs: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_deltahull"))
            .args(args)
            .args(["--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        Ok(out.stdout)
    };
    let first = run("8")?;
    let second = run("8")?;
    let serial = run("1")?;
    ensure(first == second, || "repeated runs differ".into())?;
    ensure(first == serial, || "--jobs 1 and --jobs 8 differ".into())?;
    Ok(format!("{} identical bytes across 3 runs", first.len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let with_corpus = |f: fn(&Corpus) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(format!("corpus: {e}")),
        }
    };
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("Theorem 1 on every face", Box::new(|| with_corpus(theorem1))),
        ("main vertex bound", Box::new(|| with_corpus(main_bound))),
        ("Lemma 1 with exact γ", Box::new(|| with_corpus(lemma1))),
        ("γ goldens", Box::new(gamma_goldens)),
        ("ξ formula", Box::new(xi_values)),
        ("Δ = 1 degeneration", Box::new(unimodular)),
        ("HNF properties", Box::new(hnf_suite)),
        ("planar hull oracle", Box::new(planar_hulls)),
        ("LP certificates", Box::new(lp_certificates)),
        ("support bound thresholds", Box::new(|| with_corpus(prop2))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
