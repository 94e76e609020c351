//! Exceptional curves, nefness, effectivity, Zariski decompositions and the
//! uniform slope thresholds.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cohomology::{h0, PointModel};
use crate::error::{Error, Result};
use crate::lattice::{chamber_reduce, clamp_amount, nine_point_cubic, DivisorClass};

/// Shapes `(d; m...)` of the (−1)-curves on at most eight general points,
/// up to reordering. Multiplicity −1 stands for the exceptional curve itself.
const EXCEPTIONAL_SHAPES: [(i64, &[i64]); 7] = [
    (0, &[-1]),
    (1, &[1, 1]),
    (2, &[1, 1, 1, 1, 1]),
    (3, &[2, 1, 1, 1, 1, 1, 1]),
    (4, &[2, 2, 2, 1, 1, 1, 1, 1]),
    (5, &[2, 2, 2, 2, 2, 2, 1, 1]),
    (6, &[3, 2, 2, 2, 2, 2, 2, 2]),
];

/// The finite set of (−1)-classes on `1 ≤ r ≤ 8` general points.
#[derive(Clone, Debug)]
pub struct ExceptionalClassSet {
    pub r: usize,
    pub classes: Vec<DivisorClass>,
}

/// Distinct permutations of a multiset, in lexicographic order.
fn distinct_permutations(mut v: Vec<i64>) -> Vec<Vec<i64>> {
    v.sort_unstable();
    let mut out = vec![v.clone()];
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return out;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
}

fn build_exceptional(r: usize) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    for (d, shape) in EXCEPTIONAL_SHAPES {
        if shape.len() > r {
            continue;
        }
        let mut padded = shape.to_vec();
        padded.resize(r, 0);
        for m in distinct_permutations(padded) {
            out.push(DivisorClass::from_i64(d, &m).expect("r ≥ 1"));
        }
    }
    out.sort();
    out
}

pub fn exceptional_classes(r: usize) -> Result<ExceptionalClassSet> {
    if !(1..=8).contains(&r) {
        return Err(Error::Unsupported(format!(
            "the (−1)-classes form a finite set only for 1 ≤ r ≤ 8, got r = {r}"
        )));
    }
    Ok(ExceptionalClassSet { r, classes: exceptional_slice(r).to_vec() })
}

fn exceptional_slice(r: usize) -> &'static [DivisorClass] {
    static CACHE: [OnceLock<Vec<DivisorClass>>; 8] = [const { OnceLock::new() }; 8];
    CACHE[r - 1].get_or_init(|| build_exceptional(r))
}

/// Nef test. For `r ≤ 8`: nonnegative against `e0` and every (−1)-class
/// (and `e0 − e1` when `r = 1`). For `r ≥ 9`: the chamber reduction uses
/// no clamp and ends at nonnegative degree; conjectural when `r ≥ 10`.
pub fn is_nef(f: &DivisorClass, _model: &PointModel) -> bool {
    let r = f.r();
    if r <= 8 {
        if f.degree().is_negative() {
            return false;
        }
        if r == 1 && f.degree() < f.mult(1) {
            return false;
        }
        exceptional_slice(r).iter().all(|e| !f.dot(e).is_negative())
    } else {
        let t = chamber_reduce(f);
        t.ends_nonnegative() && t.clamp_count() == 0
    }
}

/// Effectivity, with closed forms for uniform classes on `r ≤ 9` points.
pub fn is_effective(f: &DivisorClass, model: &PointModel) -> bool {
    let r = f.r();
    if f.is_uniform() && !f.mult(1).is_negative() && r <= 9 {
        let d = f.degree();
        let m = f.mult(1);
        if d.is_negative() {
            return false;
        }
        let eps = effective_slope(r).expect("1 ≤ r ≤ 9");
        return Ratio::from_integer(d.clone()) >= big_ratio(&eps) * m;
    }
    h0(f, model).is_positive()
}

fn big_ratio(x: &Ratio<i64>) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// `F = H + N` with `H` nef and `N` the fixed part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiDecomposition {
    pub class: DivisorClass,
    pub nef_part: DivisorClass,
    pub fixed_part: DivisorClass,
    /// Fixed components with multiplicities, in canonical order.
    #[serde(serialize_with = "crate::lattice::json::weighted")]
    pub components: Vec<(DivisorClass, BigInt)>,
}

impl ZariskiDecomposition {
    pub fn has_fixed_part(&self) -> bool {
        !self.fixed_part.is_zero()
    }
}

/// Zariski decomposition of an effective class.
///
/// For `r ≤ 8` the (−1)-curves meeting `F` negatively are subtracted until
/// none remain. For `r ≥ 3` the same result is read off the chamber
/// reduction: each clamp contributes the pulled-back exceptional class,
/// and a final multiple of the anticanonical cubic contributes its part
/// that the pencil structure cannot move.
pub fn zariski_decompose(f: &DivisorClass, model: &PointModel) -> Result<ZariskiDecomposition> {
    if f.r() <= 8 {
        zariski_by_exceptionals(f, model)
    } else {
        zariski_by_reduction(f, model)
    }
}

pub(crate) fn zariski_by_exceptionals(f: &DivisorClass, model: &PointModel) -> Result<ZariskiDecomposition> {
    let r = f.r();
    if !h0(f, model).is_positive() {
        return Err(Error::domain(format!("{f} is not effective")));
    }
    let mut h = f.clone();
    let mut parts: BTreeMap<DivisorClass, BigInt> = BTreeMap::new();
    let classes = exceptional_slice(r);
    loop {
        let mut changed = false;
        for e in classes {
            let k = h.dot(e);
            if k.is_negative() {
                let c = -k;
                h -= &(&c * e);
                *parts.entry(e.clone()).or_insert_with(BigInt::zero) += c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(finish(f, h, parts))
}

pub(crate) fn zariski_by_reduction(f: &DivisorClass, model: &PointModel) -> Result<ZariskiDecomposition> {
    let r = f.r();
    if r < 3 {
        return Err(Error::Unsupported("reduction-based decomposition needs r ≥ 3".into()));
    }
    if !h0(f, model).is_positive() {
        return Err(Error::domain(format!("{f} is not effective")));
    }
    let trace = chamber_reduce(f);
    let mut fixed = DivisorClass::zero(r)?;
    let mut parts: BTreeMap<DivisorClass, BigInt> = BTreeMap::new();
    for (k, step) in trace.steps.iter().enumerate() {
        if let Some((index, amount)) = clamp_amount(&step.op) {
            let e = trace.pull_back(k, &DivisorClass::exceptional(r, index)?);
            fixed += &(&amount * &e);
            *parts.entry(e).or_insert_with(BigInt::zero) += amount;
        }
    }
    if let Some(s) = cubic_multiple(&trace.output) {
        let order = if r == 9 { model.order() } else { None };
        let moving = match order {
            Some(l) => {
                let l = BigInt::from(l);
                let (a, _) = s.div_rem(&l);
                a * l
            }
            None => BigInt::zero(),
        };
        let stuck = &s - &moving;
        if stuck.is_positive() {
            let cubic = trace.pull_back(trace.steps.len(), &nine_point_cubic(r)?);
            fixed += &(&stuck * &cubic);
            *parts.entry(cubic).or_insert_with(BigInt::zero) += stuck;
        }
    }
    let h = f - &fixed;
    Ok(finish(f, h, parts))
}

/// `Some(s)` when `y = s·(3e0 − e1 − … − e9)` with `s > 0` and all further
/// multiplicities zero.
pub(crate) fn cubic_multiple(y: &DivisorClass) -> Option<BigInt> {
    if y.r() < 9 {
        return None;
    }
    let s = y.mult(1).clone();
    if !s.is_positive() || *y.degree() != BigInt::from(3) * &s {
        return None;
    }
    let m = y.mults();
    (m[..9].iter().all(|x| *x == s) && m[9..].iter().all(Zero::is_zero)).then_some(s)
}

fn finish(f: &DivisorClass, h: DivisorClass, parts: BTreeMap<DivisorClass, BigInt>) -> ZariskiDecomposition {
    let fixed = f - &h;
    ZariskiDecomposition {
        class: f.clone(),
        nef_part: h,
        fixed_part: fixed,
        components: parts.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

/// Uniform slopes on `r ≤ 9` general points: `d·e0 − m·Σei` is effective
/// iff `d ≥ ε·m` and nef iff `d ≥ η·m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformThresholds {
    pub r: usize,
    #[serde(serialize_with = "crate::lattice::json::ratio")]
    pub effective: Ratio<i64>,
    #[serde(serialize_with = "crate::lattice::json::ratio")]
    pub nef: Ratio<i64>,
}

pub fn effective_slope(r: usize) -> Result<Ratio<i64>> {
    let (n, d) = match r {
        1 | 2 => (1, 1),
        3 => (3, 2),
        4 | 5 => (2, 1),
        6 => (12, 5),
        7 => (21, 8),
        8 => (48, 17),
        9 => (3, 1),
        _ => return Err(Error::Unsupported(format!("no closed-form slope for r = {r}"))),
    };
    Ok(Ratio::new(n, d))
}

pub fn nef_slope(r: usize) -> Result<Ratio<i64>> {
    let (n, d) = match r {
        1 => (1, 1),
        2..=4 => (2, 1),
        5 | 6 => (5, 2),
        7 => (8, 3),
        8 => (17, 6),
        9 => (3, 1),
        _ => return Err(Error::Unsupported(format!("no closed-form slope for r = {r}"))),
    };
    Ok(Ratio::new(n, d))
}

pub fn thresholds(r: usize) -> Result<UniformThresholds> {
    Ok(UniformThresholds { r, effective: effective_slope(r)?, nef: nef_slope(r)? })
}

fn ceil_times(slope: Ratio<i64>, m: i64) -> i64 {
    (slope * Ratio::from_integer(m)).ceil().to_integer()
}

/// Least degree with a nonzero uniform system `d·e0 − m·Σei`.
/// Beyond nine points the answer rests on the conjectural dimension count.
pub fn uniform_alpha_degree(r: usize, m: i64, model: &PointModel) -> Result<i64> {
    check_uniform(r, m)?;
    if r <= 9 {
        return Ok(ceil_times(effective_slope(r)?, m));
    }
    let pred = |d: i64| -> Result<bool> {
        Ok(h0(&DivisorClass::uniform(r, d, m)?, model).is_positive())
    };
    least_true(m, pred)
}

/// Least degree whose uniform class is nef.
pub fn uniform_beta_degree(r: usize, m: i64, model: &PointModel) -> Result<i64> {
    check_uniform(r, m)?;
    if r <= 9 {
        return Ok(ceil_times(nef_slope(r)?, m));
    }
    let pred = |d: i64| -> Result<bool> { Ok(is_nef(&DivisorClass::uniform(r, d, m)?, model)) };
    least_true(m, pred)
}

fn check_uniform(r: usize, m: i64) -> Result<()> {
    if r == 0 {
        return Err(Error::domain("need at least one point"));
    }
    if m < 0 {
        return Err(Error::domain(format!("multiplicity must be nonnegative, got {m}")));
    }
    Ok(())
}

/// Least `d ≥ lo` with `pred(d)`, for a predicate that is monotone in `d`.
pub(crate) fn least_true(lo: i64, mut pred: impl FnMut(i64) -> Result<bool>) -> Result<i64> {
    if pred(lo)? {
        return Ok(lo);
    }
    let mut step: i64 = 1;
    let mut bad = lo;
    let mut good = loop {
        let cand = lo.checked_add(step).ok_or_else(|| Error::Overflow("degree search".into()))?;
        if pred(cand)? {
            break cand;
        }
        bad = cand;
        step = step.checked_mul(2).ok_or_else(|| Error::Overflow("degree search".into()))?;
    };
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if pred(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}
