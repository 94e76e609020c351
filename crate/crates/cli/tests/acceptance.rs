//! Acceptance suite: prints PASS/FAIL per criterion and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use fatpoint::cohomology::{h0, profile, FatPointScheme, PointModel};
use fatpoint::cremona::normal_form;
use fatpoint::lattice::{apply_word, canonical_class, reflect, DivisorClass, WeylWord};
use fatpoint::maxrank::{
    campanella_table, classify, conjectural_uniform_bounds, l1_criterion, odd_convergents, pell_solutions,
    umrp_status, FailureKind,
};
use fatpoint::oracle::{mu_rank, sample_points, verify, OracleConfig};
use fatpoint::resolution::{betti_table, s_general};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration) -> Check {
    ensure(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fatpoint")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn degree_map(v: &Value) -> BTreeMap<i64, i64> {
    v.as_object()
        .into_iter()
        .flatten()
        .map(|(k, x)| (k.parse().unwrap(), x.as_i64().unwrap()))
        .collect()
}

fn model(r: usize) -> PointModel {
    PointModel::for_points(r, None)
}

fn resolution_of_205() -> Check {
    let start = Instant::now();
    let v = cli(&["betti", "-r", "8", "-m", "205", "--json"])?;
    let elapsed = start.elapsed();
    let res = &v["result"];
    let gens = degree_map(&res["generators"]);
    let syz = degree_map(&res["syzygies"]);
    let want_gens = BTreeMap::from([(579, 10), (580, 201), (581, 208), (582, 16)]);
    let want_syz = BTreeMap::from([(581, 138), (582, 216), (583, 80)]);
    ensure(gens == want_gens, || format!("generators {gens:?}"))?;
    ensure(syz == want_syz, || format!("syzygies {syz:?}"))?;
    ensure(res["regularity"].as_i64() == Some(582), || format!("regularity {}", res["regularity"]))?;
    within(Duration::from_secs(1), elapsed)
}

fn generator_bounds_of_205() -> Check {
    let z = FatPointScheme::uniform(8, 205, PointModel::General).unwrap();
    let table = campanella_table(&z).map_err(|e| e.to_string())?;
    let betti = betti_table(&z).map_err(|e| e.to_string())?;
    for b in &table {
        let nu = betti.nu(b.degree);
        ensure(b.lower <= nu && nu <= b.upper, || format!("ν_{} = {nu} outside [{}, {}]", b.degree, b.lower, b.upper))?;
    }
    let got: Vec<(i64, i64)> = table.iter().map(|b| (b.lower, b.upper)).collect();
    let want = vec![(10, 10), (201, 210), (70, 280), (0, 79)];
    ensure(got == want, || format!("bounds {got:?}, expected {want:?}"))
}

fn expected_equal_degree_failures() -> BTreeSet<(usize, i64)> {
    let mut s = BTreeSet::new();
    s.extend((3..=7).map(|l| (7, 3 * l)));
    s.extend((9..=16).map(|l| (8, 6 * l)));
    s.extend((6..=13).map(|l| (8, 6 * l + 1)));
    s
}

fn equal_degree_classification() -> Check {
    let start = Instant::now();
    let mut found = BTreeSet::new();
    for r in 1..=9 {
        let s = umrp_status(r, 120, &model(r)).map_err(|e| e.to_string())?;
        found.extend(s.failures.iter().filter(|f| f.alpha == f.beta).map(|f| (r, f.m)));
    }
    let elapsed = start.elapsed();
    let want = expected_equal_degree_failures();
    ensure(found == want, || {
        let extra: Vec<_> = found.difference(&want).collect();
        let missing: Vec<_> = want.difference(&found).collect();
        format!("extra {extra:?}, missing {missing:?}")
    })?;
    within(Duration::from_secs(10), elapsed)
}

fn uniform_failure_degrees() -> Check {
    let want = expected_equal_degree_failures();
    for r in 1..=9 {
        let s = umrp_status(r, 50, &model(r)).map_err(|e| e.to_string())?;
        match r {
            1 | 4 | 9 => ensure(s.failures.is_empty(), || format!("r = {r}: failures {:?}", s.failures))?,
            7 | 8 => {
                for &(_, m) in want.iter().filter(|(rr, m)| *rr == r && *m <= 50) {
                    ensure(
                        s.failures.iter().any(|f| f.m == m && f.degree == f.beta && f.kind == FailureKind::Intrinsic),
                        || format!("r = {r}, m = {m}: no failure at β"),
                    )?;
                }
            }
            _ => {
                for f in &s.failures {
                    ensure(f.degree < f.beta && f.kind == FailureKind::Forced, || format!("r = {r}: {f:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn low_point_thresholds() -> Check {
    for (r, first) in [(2usize, 2i64), (3, 3), (5, 3)] {
        let s = umrp_status(r, 20, &model(r)).map_err(|e| e.to_string())?;
        let failing: BTreeSet<i64> = s.failures.iter().map(|f| f.m).collect();
        let want: BTreeSet<i64> = (first..=20).collect();
        ensure(failing == want, || format!("r = {r}: failing m {failing:?}"))?;
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    for r in 1..=9 {
        for m in 1..=5 {
            let z = FatPointScheme::uniform(r, m, model(r)).unwrap();
            let cfg = OracleConfig { seed: (r * 10) as u64 + m as u64, ..OracleConfig::default() };
            let rep = verify(&z, &cfg).map_err(|e| format!("r = {r}, m = {m}: {e}"))?;
            ensure(!rep.hilbert_only, || format!("r = {r}, m = {m}: closed form incomplete"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..20u64 {
        let r = rng.gen_range(1..=5);
        let mut m: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=4)).collect();
        m[0] = m[0].max(1);
        let z = FatPointScheme::general(m.clone()).unwrap();
        let cfg = OracleConfig { seed: 1000 + k, ..OracleConfig::default() };
        verify(&z, &cfg).map_err(|e| format!("{m:?}: {e}"))?;
    }
    within(Duration::from_secs(120), start.elapsed())
}

fn failure_witness_by_ranks() -> Check {
    let start = Instant::now();
    let cfg = OracleConfig { seed: 7, ..OracleConfig::default() };
    let pts = sample_points(7, &cfg).map_err(|e| e.to_string())?;
    let mu = mu_rank(&[9; 7], 24, &pts, cfg.prime).map_err(|e| e.to_string())?;
    ensure((mu.kernel, mu.cokernel) == (1, 7), || format!("ker {} coker {}", mu.kernel, mu.cokernel))?;
    within(Duration::from_secs(30), start.elapsed())
}

fn eight_point_recursion() -> Check {
    let s_of = |k: i64| -> Result<i64, String> {
        let (s, t) = (k.div_euclid(6), k.rem_euclid(6));
        let f = DivisorClass::uniform(8, 17 * s + 3 * t, k).unwrap();
        s_general(&f, &PointModel::General).map(|mu| mu.s).map_err(|e| e.to_string())
    };
    for s in 3..=20 {
        let a = s_of(6 * s)? - s_of(6 * (s - 3) + 1)?;
        let b = s_of(6 * s + 1)? - s_of(6 * (s - 3) + 2)?;
        ensure((a, b) == (32, 16), || format!("s = {s}: differences {a}, {b}"))?;
    }
    Ok(())
}

fn weyl_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..10_000 {
        let r = rng.gen_range(3..=9);
        let d = rng.gen_range(-5..40);
        let m: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..15)).collect();
        let f = DivisorClass::from_i64(d, &m).unwrap();
        let g = DivisorClass::from_i64(rng.gen_range(-5..40), &(0..r).map(|_| rng.gen_range(-3..15)).collect::<Vec<_>>()).unwrap();
        let i = rng.gen_range(0..r);
        let (fi, gi) = (reflect(&f, i).unwrap(), reflect(&g, i).unwrap());
        ensure(fi.dot(&gi) == f.dot(&g), || format!("#{trial}: form not preserved by s{i}"))?;
        ensure(reflect(&fi, i).unwrap() == f, || format!("#{trial}: s{i}² ≠ id"))?;
        let k = canonical_class(r).unwrap();
        ensure(reflect(&k, i).unwrap() == k, || format!("#{trial}: s{i} moves K"))?;
        let model = model(r);
        if d <= 20 {
            ensure(h0(&f, &model) == h0(&fi, &model), || format!("#{trial}: h0 changes under s{i} for {f}"))?;
        }
        let letters: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..r)).collect();
        let word = WeylWord::new(letters, r).unwrap();
        let seed = DivisorClass::from_i64(rng.gen_range(0..30), &{
            let mut v: Vec<i64> = (0..r).map(|_| rng.gen_range(0..6)).collect();
            v.shuffle(&mut rng);
            v
        })
        .unwrap();
        let nf = normal_form(&seed);
        let moved = apply_word(&seed, &word).unwrap();
        if nf.mults().iter().all(|x| *x >= BigInt::from(0)) && nf.degree() >= &BigInt::from(0) {
            ensure(normal_form(&moved) == nf, || format!("#{trial}: normal form of {seed} changes under {word}"))?;
        }
    }
    Ok(())
}

fn number_theory() -> Check {
    let pell = pell_solutions(10, 4).map_err(|e| e.to_string())?;
    ensure(pell[0] == (BigInt::from(19), BigInt::from(6)), || format!("first Pell pair {:?}", pell[0]))?;
    for (b, m) in &pell {
        ensure(b * b - BigInt::from(10) * m * m == BigInt::from(1), || format!("({b}, {m}) fails"))?;
    }
    let conv = odd_convergents(1, 3, 2).map_err(|e| e.to_string())?;
    let pairs: Vec<(BigInt, BigInt)> = conv.iter().map(|c| (c.p.clone(), c.q.clone())).collect();
    ensure(
        pairs == vec![(BigInt::from(11), BigInt::from(3)), (BigInt::from(119), BigInt::from(33))],
        || format!("convergents {pairs:?}"),
    )?;
    for (p, q) in &pairs {
        ensure(p * p - BigInt::from(13) * q * q == BigInt::from(4), || format!("{p}/{q} fails"))?;
    }
    ensure(l1_criterion(10, 6, 21), || "l1 criterion rejects (10, 6, 21)".into())
}

fn conjectural_honesty() -> Check {
    for r in [10usize, 11, 13, 16] {
        for m in 1..=6 {
            let z = FatPointScheme::uniform(r, m, model(r)).unwrap();
            let p = profile(&z).map_err(|e| e.to_string())?;
            ensure(p.conjectural, || format!("profile r = {r} m = {m}"))?;
            if let Ok(rep) = classify(&z) {
                ensure(rep.conjectural, || format!("report r = {r} m = {m}"))?;
            }
            if let Ok(t) = betti_table(&z) {
                ensure(t.conjectural, || format!("betti r = {r} m = {m}"))?;
            }
            ensure(conjectural_uniform_bounds(r, m).unwrap().conjectural, || format!("bounds r = {r} m = {m}"))?;
        }
        if let Ok(s) = umrp_status(r, 6, &model(r)) {
            ensure(s.conjectural, || format!("scan r = {r}"))?;
        }
    }
    for args in [
        vec!["hilbert", "-r", "10", "-m", "3", "--json"],
        vec!["maxrank", "-r", "12", "-m", "2", "--json"],
        vec!["scan", "-r", "10", "--m-max", "8", "--json"],
        vec!["orbit", "--seed", "4;1,1,1,1,1,1,1,1,1,1", "--bound", "6", "--json"],
    ] {
        let v = cli(&args)?;
        ensure(v["conjectural"] == Value::Bool(true), || format!("{args:?} not marked conjectural"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("resolution of 205 points on 8", resolution_of_205),
        ("generator bounds for 205 points on 8", generator_bounds_of_205),
        ("equal-degree failures for r ≤ 9, m ≤ 120", equal_degree_classification),
        ("failure degrees for m ≤ 50", uniform_failure_degrees),
        ("uniform failure thresholds for r = 2, 3, 5", low_point_thresholds),
        ("oracle agrees with closed forms", oracle_equivalence),
        ("kernel and cokernel of μ24 for 9 on 7", failure_witness_by_ranks),
        ("eight-point cokernel recursion", eight_point_recursion),
        ("Weyl group properties", weyl_properties),
        ("Pell, convergents and the l1 criterion", number_theory),
        ("conjectural outputs are flagged", conjectural_honesty),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS {:>2}  {name}  ({t:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}  {name}  ({t:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
