use fatpoint::cohomology::{profile, FatPointScheme, PointModel};
use fatpoint::lattice::DivisorClass;
use fatpoint::maxrank::{campanella_bounds, classify, RankStatus};
use fatpoint::oracle::{mu_rank, sample_points, verify, OracleConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(seed: u64) -> OracleConfig {
    OracleConfig { seed, ..OracleConfig::default() }
}

fn model(r: usize) -> PointModel {
    PointModel::for_points(r, None)
}

#[test]
fn uniform_schemes_up_to_nine_points() {
    for r in 1..=9 {
        for m in 1..=5 {
            let z = FatPointScheme::uniform(r, m, model(r)).unwrap();
            let rep = verify(&z, &cfg(r as u64 * 100 + m as u64)).unwrap();
            assert!(!rep.hilbert_only, "r={r} m={m}");
        }
    }
}

#[test]
fn random_tuples_up_to_five_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..20 {
        let r = rng.gen_range(1..=5);
        let mut m: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=4)).collect();
        m[0] = m[0].max(1);
        let z = FatPointScheme::general(m.clone()).unwrap();
        let rep = verify(&z, &cfg(k)).unwrap();
        assert!(rep.matched, "{m:?}");
    }
}

#[test]
fn kernel_bounds_contain_oracle_kernel() {
    let c = cfg(5);
    for r in 1..=8 {
        let pts = sample_points(r, &c).unwrap();
        for m in 1..=4 {
            let z = FatPointScheme::uniform(r, m, PointModel::General).unwrap();
            let p = profile(&z).unwrap();
            for d in p.alpha..=p.tau + 1 {
                let f = DivisorClass::uniform(r, d, m).unwrap();
                let b = campanella_bounds(&f, 1, &PointModel::General).unwrap();
                let mu = mu_rank(z.mults(), d, &pts, c.prime).unwrap();
                assert!(b.lower <= mu.kernel && mu.kernel <= b.upper, "r={r} m={m} d={d}: {b:?} vs {mu:?}");
            }
        }
    }
}

#[test]
fn failure_families_show_in_raw_ranks() {
    let c = cfg(11);
    let families = (3..=7).map(|l| (7, 3 * l)).chain((9..=16).map(|l| (8, 6 * l))).chain((6..=13).map(|l| (8, 6 * l + 1)));
    let mut checked = 0;
    for (r, m) in families {
        let z = FatPointScheme::uniform(r, m, PointModel::General).unwrap();
        let p = profile(&z).unwrap();
        if p.alpha > 30 {
            continue;
        }
        let rep = classify(&z).unwrap();
        let pts = sample_points(r, &c).unwrap();
        let mu = mu_rank(z.mults(), p.beta, &pts, c.prime).unwrap();
        assert!(mu.kernel > 0 && mu.cokernel > 0, "r={r} m={m}: {mu:?}");
        assert_eq!(rep.per_degree[&p.beta].status, RankStatus::Fails);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn seven_points_of_multiplicity_nine() {
    let c = cfg(3);
    let pts = sample_points(7, &c).unwrap();
    let mu = mu_rank(&[9; 7], 24, &pts, c.prime).unwrap();
    assert_eq!((mu.kernel, mu.cokernel), (1, 7));
}
