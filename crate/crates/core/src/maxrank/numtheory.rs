//! Pell equations, odd convergents of `√r`, and the arithmetic criteria
//! that decide when the kernel bounds force maximal rank.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// The first `count` positive solutions of `b² − r·m² = 1`, by increasing `m`.
pub fn pell_solutions(r: u64, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    if r < 2 {
        return Err(Error::domain(format!("need r ≥ 2, got {r}")));
    }
    let a0 = isqrt(r);
    if a0 * a0 == r {
        return Err(Error::domain(format!("{r} is a perfect square")));
    }
    let rb = BigInt::from(r);
    let (mut h2, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k2, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (b1, m1) = loop {
        let h = BigInt::from(a) * &h1 + &h2;
        let k = BigInt::from(a) * &k1 + &k2;
        if &h * &h - &rb * &k * &k == BigInt::one() {
            break (h, k);
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        m = d * a - m;
        d = (r - m * m) / d;
        a = (a0 + m) / d;
    };
    let mut out = Vec::with_capacity(count);
    let (mut b, mut mm) = (b1.clone(), m1.clone());
    for _ in 0..count {
        out.push((b.clone(), mm.clone()));
        let nb = &b1 * &b + &rb * &m1 * &mm;
        let nm = &b1 * &mm + &m1 * &b;
        b = nb;
        mm = nm;
    }
    Ok(out)
}

/// An odd convergent `p/q > √r` with `p² − r·q² = 4c²`, with its position in
/// the raw convergent sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddConvergent {
    pub index: usize,
    #[serde(serialize_with = "crate::lattice::json::big")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::lattice::json::big")]
    pub q: BigInt,
}

/// Convergents of `ca + 2c/(a + 1/(a + 1/(a + ⋯)))`, which equals `√r` with
/// `r = (ca)² + 4c²`, kept when both terms are odd and `p² − r·q² = 4c²`.
pub fn odd_convergents(c: u64, a: u64, count: usize) -> Result<Vec<OddConvergent>> {
    if c == 0 || a == 0 || c.is_multiple_of(2) || a.is_multiple_of(2) {
        return Err(Error::domain(format!("c and a must be positive and odd, got c = {c}, a = {a}")));
    }
    let r = BigInt::from(c * a) * BigInt::from(c * a) + BigInt::from(4 * c * c);
    if r <= BigInt::from(9) {
        return Err(Error::domain(format!("need r > 9, got {r}")));
    }
    let target = BigInt::from(4 * c * c);
    let two = BigInt::from(2);
    let ab = BigInt::from(a);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(c * a));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    let limit = 64 + 16 * count;
    for index in 1..=limit {
        if out.len() == count {
            break;
        }
        let num = if index == 1 { BigInt::from(2 * c) } else { BigInt::one() };
        let np = &ab * &p + &num * &p_prev;
        let nq = &ab * &q + &num * &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
        let odd = |x: &BigInt| (x % &two) == BigInt::one();
        if odd(&p) && odd(&q) && &p * &p - &r * &q * &q == target {
            out.push(OddConvergent { index, p: p.clone(), q: q.clone() });
        }
    }
    Ok(out)
}

fn binom2(n: i128) -> i128 {
    n * (n - 1) / 2
}

/// `x < C(x+1, 2) − r·C(m+1, 2) + m ≤ x + m`.
pub fn l1_criterion(r: u64, m: u64, x: u64) -> bool {
    let (r, m, x) = (r as i128, m as i128, x as i128);
    let v = binom2(x + 1) - r * binom2(m + 1) + m;
    x < v && v <= x + m
}

/// `0 < C(x+2, 2) − r·C(m+1, 2) ≤ m + 1`.
pub fn q1_criterion(r: u64, m: u64, x: u64) -> bool {
    let (r, m, x) = (r as i128, m as i128, x as i128);
    let v = binom2(x + 2) - r * binom2(m + 1);
    0 < v && v <= m + 1
}

/// Sufficient condition for the maximal rank property on nine general points
/// with multiplicities `m1 ≥ ⋯ ≥ m9 ≥ 0`.
pub fn nine_point_criterion(m: &[i64]) -> Result<bool> {
    if m.len() != 9 {
        return Err(Error::Dimension { left: m.len(), right: 9 });
    }
    if m.windows(2).any(|w| w[0] < w[1]) || m[8] < 0 {
        return Err(Error::domain("multiplicities must be nonnegative and sorted descending"));
    }
    let (top, bottom) = (m[0] as i128, m[8] as i128);
    if top == bottom {
        return Ok(true);
    }
    let sum: i128 = m.iter().map(|&x| x as i128).sum();
    Ok(bottom >= 20 * (top - bottom + 1).pow(2) && sum.rem_euclid(3) != 2)
}
