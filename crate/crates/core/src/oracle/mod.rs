//! Brute-force check of the closed forms: interpolation matrices at random
//! points over a prime field give `dim I(Z)_d` and the rank of each
//! multiplication map directly.

pub mod field;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::{hilbert_function, profile, FatPointScheme};
use crate::error::{Error, Result};
use crate::resolution::{betti_table, s_general, syzygies_by_balance, BettiTable, MuDims};
use field::{is_prime, Matrix, PrimeField};

pub const DEFAULT_PRIME: u64 = 1_000_003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub prime: u64,
    pub seed: u64,
    /// Largest degree the oracle will build matrices for.
    pub max_degree: i64,
    /// Fresh point samples tried after a disagreement.
    pub resample_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { prime: DEFAULT_PRIME, seed: 0, max_degree: 60, resample_limit: 5 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime >= 1 << 62 || !is_prime(self.prime) {
            return Err(Error::Config(format!("{} is not a prime below 2^62", self.prime)));
        }
        if self.max_degree < 0 || self.prime as i128 <= self.max_degree as i128 + 1 {
            return Err(Error::Config(format!(
                "prime {} must exceed the maximum degree {} plus one",
                self.prime, self.max_degree
            )));
        }
        Ok(())
    }

    fn with_attempt(&self, attempt: usize) -> OracleConfig {
        let seed = self.seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        OracleConfig { seed, ..*self }
    }
}

/// A point `[x : y : 1]` of the affine chart `z ≠ 0`.
pub type Point = [u64; 3];

fn det3(f: &PrimeField, a: &Point, b: &Point, c: &Point) -> u64 {
    let m = Matrix::from_rows(3, vec![a.to_vec(), b.to_vec(), c.to_vec()]);
    if m.rank(f) == 3 {
        1
    } else {
        0
    }
}

fn on_common_conic(f: &PrimeField, pts: &[&Point]) -> bool {
    let rows = pts
        .iter()
        .map(|p| {
            let (x, y) = (p[0], p[1]);
            vec![f.mul(x, x), f.mul(x, y), f.mul(y, y), x, y, 1]
        })
        .collect();
    Matrix::from_rows(6, rows).rank(f) < 6
}

fn general_enough(f: &PrimeField, pts: &[Point]) -> bool {
    let r = pts.len();
    for i in 0..r {
        for j in (i + 1)..r {
            if pts[i] == pts[j] {
                return false;
            }
            for k in (j + 1)..r {
                if det3(f, &pts[i], &pts[j], &pts[k]) == 0 {
                    return false;
                }
            }
        }
    }
    if (6..=12).contains(&r) {
        let mut idx = [0usize, 1, 2, 3, 4, 5];
        loop {
            let six: Vec<&Point> = idx.iter().map(|&i| &pts[i]).collect();
            if on_common_conic(f, &six) {
                return false;
            }
            let Some(k) = (0..6).rev().find(|&k| idx[k] < r - 6 + k) else {
                break;
            };
            idx[k] += 1;
            for t in (k + 1)..6 {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    true
}

/// `r` points with no three collinear and (for `6 ≤ r ≤ 12`) no six on a
/// conic, drawn deterministically from `cfg.seed`.
pub fn sample_points(r: usize, cfg: &OracleConfig) -> Result<Vec<Point>> {
    cfg.validate()?;
    if (cfg.prime as u128) <= r as u128 {
        return Err(Error::Config(format!("prime {} is too small for {r} points", cfg.prime)));
    }
    let f = PrimeField::new(cfg.prime);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let attempts = cfg.resample_limit.max(1) * 20;
    for _ in 0..attempts {
        let pts: Vec<Point> = (0..r).map(|_| [rng.gen_range(0..cfg.prime), rng.gen_range(0..cfg.prime), 1]).collect();
        if general_enough(&f, &pts) {
            return Ok(pts);
        }
    }
    Err(Error::Degeneracy { attempts })
}

/// Exponent pairs `(a, b)` of the degree-`d` monomials `x^a y^b z^(d−a−b)`.
fn monomials(d: i64) -> Vec<(usize, usize)> {
    let d = d as usize;
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for a in 0..=d {
        for b in 0..=(d - a) {
            out.push((a, b));
        }
    }
    out
}

fn monomial_index(d: usize, a: usize, b: usize) -> usize {
    // Monomials with first exponent below `a` come first.
    a * (d + 1) - a * (a.saturating_sub(1)) / 2 + b
}

fn binomials(n: usize, f: &PrimeField) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1 % f.modulus();
        for j in 1..=i {
            t[i][j] = f.add(t[i - 1][j - 1], if j < i { t[i - 1][j] } else { 0 });
        }
    }
    t
}

fn check_characteristic(p: u64, d: i64) -> Result<()> {
    if (p as i128) <= d as i128 {
        return Err(Error::Characteristic { p, degree: d });
    }
    Ok(())
}

/// Vanishing conditions of order `< mi` at each point on degree-`d` forms:
/// one row per Taylor coefficient `∂x^i ∂y^j / i! j!` with `i + j < mi`,
/// one column per monomial.
pub fn conditions_matrix(mults: &[i64], d: i64, points: &[Point], p: u64) -> Result<Matrix> {
    if mults.len() != points.len() {
        return Err(Error::Dimension { left: mults.len(), right: points.len() });
    }
    check_characteristic(p, d)?;
    let f = PrimeField::new(p);
    let monos = monomials(d.max(0));
    if d < 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let du = d as usize;
    let binom = binomials(du, &f);
    let mut rows = Vec::new();
    for (pt, &m) in points.iter().zip(mults) {
        let (x, y) = (pt[0], pt[1]);
        let xp: Vec<u64> = (0..=du).scan(1 % p, |acc, _| { let v = *acc; *acc = f.mul(*acc, x); Some(v) }).collect();
        let yp: Vec<u64> = (0..=du).scan(1 % p, |acc, _| { let v = *acc; *acc = f.mul(*acc, y); Some(v) }).collect();
        for i in 0..m.max(0) as usize {
            for j in 0..(m as usize - i) {
                let row = monos
                    .iter()
                    .map(|&(a, b)| {
                        if a < i || b < j {
                            0
                        } else {
                            f.mul(f.mul(binom[a][i], xp[a - i]), f.mul(binom[b][j], yp[b - j]))
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    Ok(Matrix::from_rows(monos.len(), rows))
}

/// `dim I(Z)_d` at the given points.
pub fn ideal_dim(mults: &[i64], d: i64, points: &[Point], p: u64) -> Result<i64> {
    if d < 0 {
        return Ok(0);
    }
    let m = conditions_matrix(mults, d, points, p)?;
    Ok((m.cols() - m.rank(&PrimeField::new(p))) as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuRank {
    pub degree: i64,
    /// `dim I_d`.
    pub source: i64,
    /// `dim I_{d+1}`.
    pub target: i64,
    pub rank: i64,
    pub kernel: i64,
    pub cokernel: i64,
}

/// Rank of `I_d ⊗ ⟨x, y, z⟩ → I_{d+1}` at the given points.
pub fn mu_rank(mults: &[i64], d: i64, points: &[Point], p: u64) -> Result<MuRank> {
    check_characteristic(p, d + 1)?;
    let target = ideal_dim(mults, d + 1, points, p)?;
    if d < 0 {
        return Ok(MuRank { degree: d, source: 0, target, rank: 0, kernel: 0, cokernel: target });
    }
    let f = PrimeField::new(p);
    let basis = conditions_matrix(mults, d, points, p)?.nullspace(&f);
    let src = monomials(d);
    let du = d as usize + 1;
    let width = (du + 1) * (du + 2) / 2;
    let mut rows = Vec::with_capacity(3 * basis.len());
    for v in &basis {
        for shift in [(1, 0), (0, 1), (0, 0)] {
            let mut row = vec![0u64; width];
            for (k, &(a, b)) in src.iter().enumerate() {
                if v[k] != 0 {
                    row[monomial_index(du, a + shift.0, b + shift.1)] = v[k];
                }
            }
            rows.push(row);
        }
    }
    let rank = Matrix::from_rows(width, rows).rank(&f) as i64;
    let source = basis.len() as i64;
    Ok(MuRank { degree: d, source, target, rank, kernel: 3 * source - rank, cokernel: target - rank })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDegree {
    pub degree: i64,
    pub dim: i64,
    pub rank_mu: i64,
    /// Minimal generators in degree `degree + 1`.
    pub nu_next: i64,
    pub kernel: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub scheme: FatPointScheme,
    pub prime: u64,
    pub seed: u64,
    pub points: Vec<Point>,
    pub resamples: usize,
    pub per_degree: Vec<OracleDegree>,
}

fn check_degree_guard(cfg: &OracleConfig, top: i64) -> Result<()> {
    if top > cfg.max_degree {
        return Err(Error::Config(format!(
            "degree {top} exceeds the oracle's maximum degree {}",
            cfg.max_degree
        )));
    }
    Ok(())
}

/// Oracle data for degrees `lo ≤ d ≤ hi` at one sample of points.
pub fn run_oracle(z: &FatPointScheme, lo: i64, hi: i64, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    check_degree_guard(cfg, hi + 1)?;
    let points = sample_points(z.r(), cfg)?;
    oracle_at(z, lo, hi, cfg, points, 0)
}

fn oracle_at(z: &FatPointScheme, lo: i64, hi: i64, cfg: &OracleConfig, points: Vec<Point>, resamples: usize) -> Result<OracleResult> {
    let mut per_degree = Vec::new();
    for d in lo..=hi {
        let mu = mu_rank(z.mults(), d, &points, cfg.prime)?;
        per_degree.push(OracleDegree { degree: d, dim: mu.source, rank_mu: mu.rank, nu_next: mu.cokernel, kernel: mu.kernel });
    }
    Ok(OracleResult { scheme: z.clone(), prime: cfg.prime, seed: cfg.seed, points, resamples, per_degree })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Side {
    pub dim: i64,
    pub nu: Option<i64>,
    pub kernel: Option<i64>,
    pub cokernel: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub degree: i64,
    pub closed: Side,
    pub oracle: Side,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub scheme: FatPointScheme,
    pub prime: u64,
    pub seed: u64,
    pub attempts: usize,
    /// Closed forms only supplied Hilbert function values.
    pub hilbert_only: bool,
    pub rows: Vec<VerifyRow>,
    pub matched: bool,
    pub conjectural: bool,
}

impl VerifyReport {
    pub fn mismatches(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| !r.matches).map(|r| r.degree).collect()
    }

    pub fn into_result(self) -> Result<VerifyReport> {
        if self.matched {
            return Ok(self);
        }
        let detail: Vec<String> = self
            .rows
            .iter()
            .filter(|r| !r.matches)
            .map(|r| format!("degree {}: closed {:?} vs oracle {:?}", r.degree, r.closed, r.oracle))
            .collect();
        Err(Error::Verification(detail.join("; ")))
    }
}

struct ClosedSide {
    dims: BTreeMap<i64, i64>,
    nu: Option<BTreeMap<i64, i64>>,
    mu: Option<BTreeMap<i64, (i64, i64)>>,
}

fn closed_side(z: &FatPointScheme, lo: i64, hi: i64) -> Result<ClosedSide> {
    let mut dims = BTreeMap::new();
    for d in lo..=hi {
        dims.insert(d, hilbert_function(z, d)?);
    }
    let table = match betti_table(z) {
        Ok(t) => Some(t),
        Err(Error::ClosedFormGap(_)) => None,
        Err(e) => return Err(e),
    };
    let Some(table) = table else {
        return Ok(ClosedSide { dims, nu: None, mu: None });
    };
    let nu = (lo..=hi).map(|d| (d, table.nu(d))).collect();
    let mut mu = BTreeMap::new();
    for d in lo..=hi {
        let m = s_general(&z.class_at(d), &z.model())?;
        mu.insert(d, (m.r, m.s));
    }
    Ok(ClosedSide { dims, nu: Some(nu), mu: Some(mu) })
}

/// Compares closed forms with the oracle for `α − 1 ≤ d ≤ τ + 2`. A
/// disagreement triggers fresh point samples, up to `cfg.resample_limit`;
/// the returned report records whether agreement was reached.
pub fn verify_report(z: &FatPointScheme, cfg: &OracleConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let p = profile(z)?;
    let (lo, hi) = (p.alpha - 1, p.tau + 2);
    check_degree_guard(cfg, hi + 1)?;
    let closed = closed_side(z, lo, hi)?;
    let mut last = None;
    for attempt in 0..=cfg.resample_limit {
        let c = cfg.with_attempt(attempt);
        let points = sample_points(z.r(), &c)?;
        let oracle = oracle_at(z, lo - 1, hi, &c, points, attempt)?;
        let od: BTreeMap<i64, &OracleDegree> = oracle.per_degree.iter().map(|o| (o.degree, o)).collect();
        let rows: Vec<VerifyRow> = (lo..=hi)
            .map(|d| {
                let o = od[&d];
                let o_nu = od[&(d - 1)].nu_next;
                let closed_row = Side {
                    dim: closed.dims[&d],
                    nu: closed.nu.as_ref().map(|n| n[&d]),
                    kernel: closed.mu.as_ref().map(|m| m[&d].0),
                    cokernel: closed.mu.as_ref().map(|m| m[&d].1),
                };
                let oracle_row = Side { dim: o.dim, nu: Some(o_nu), kernel: Some(o.kernel), cokernel: Some(o.nu_next) };
                let matches = closed_row.dim == oracle_row.dim
                    && closed_row.nu.is_none_or(|v| Some(v) == oracle_row.nu)
                    && closed_row.kernel.is_none_or(|v| Some(v) == oracle_row.kernel)
                    && closed_row.cokernel.is_none_or(|v| Some(v) == oracle_row.cokernel);
                VerifyRow { degree: d, closed: closed_row, oracle: oracle_row, matches }
            })
            .collect();
        let matched = rows.iter().all(|r| r.matches);
        let report = VerifyReport {
            scheme: z.clone(),
            prime: c.prime,
            seed: c.seed,
            attempts: attempt + 1,
            hilbert_only: closed.nu.is_none(),
            rows,
            matched,
            conjectural: z.is_conjectural(),
        };
        if matched {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one attempt"))
}

/// Like [`verify_report`], but a persistent disagreement is an error.
pub fn verify(z: &FatPointScheme, cfg: &OracleConfig) -> Result<VerifyReport> {
    verify_report(z, cfg)?.into_result()
}

/// A Betti table whose generator counts come from oracle ranks rather than
/// closed forms. Syzygies follow from the Hilbert function as usual.
pub fn betti_by_oracle(z: &FatPointScheme, cfg: &OracleConfig) -> Result<BettiTable> {
    cfg.validate()?;
    let p = profile(z)?;
    check_degree_guard(cfg, p.tau + 1)?;
    let points = sample_points(z.r(), cfg)?;
    let mut generators = BTreeMap::new();
    let mut mu = Vec::new();
    for t in (p.alpha - 1)..=p.tau {
        let m = mu_rank(z.mults(), t, &points, cfg.prime)?;
        if m.cokernel > 0 {
            generators.insert(t + 1, m.cokernel);
        }
        mu.push(MuDims::from_cokernel(t, m.source, m.target, m.cokernel)?);
    }
    let hilbert = |t: i64| if t < 0 { Ok(0) } else { hilbert_function(z, t) };
    let syzygies = syzygies_by_balance(&generators, hilbert, p.alpha, p.tau + 2, p.tau + 5)?;
    let omega = generators.keys().next_back().copied().unwrap_or(p.alpha);
    Ok(BettiTable {
        scheme: z.clone(),
        alpha: p.alpha,
        beta: p.beta,
        tau: p.tau,
        omega,
        regularity: p.regularity,
        generators,
        syzygies,
        mu,
        conjectural: p.conjectural,
    })
}
