//! Kernel and cokernel dimensions of the multiplication maps
//! `I_t ⊗ R_1 → I_{t+1}`, generator counts, and the two-step minimal free
//! resolution recovered from them.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cohomology::{big_to_i64, h0, h0_i64, h1, profile, FatPointScheme, PointModel};
use crate::cones::{is_nef, zariski_decompose};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::maxrank::campanella::campanella_bounds;

/// Dimensions attached to `μ: H0(F) ⊗ H0(e0) → H0(F + e0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuDims {
    pub degree: i64,
    pub h0_f: i64,
    pub h0_f_plus: i64,
    /// `dim coker μ`.
    pub s: i64,
    /// `dim ker μ`.
    pub r: i64,
}

impl MuDims {
    pub(crate) fn from_cokernel(degree: i64, h0_f: i64, h0_f_plus: i64, s: i64) -> Result<Self> {
        let r = s + 3 * h0_f - h0_f_plus;
        if s < 0 || r < 0 {
            return Err(Error::Verification(format!(
                "negative kernel or cokernel in degree {degree}: S = {s}, R = {r}"
            )));
        }
        Ok(MuDims { degree, h0_f, h0_f_plus, s, r })
    }

    pub fn rank(&self) -> i64 {
        self.h0_f_plus - self.s
    }

    pub fn is_injective(&self) -> bool {
        self.r == 0
    }

    pub fn is_surjective(&self) -> bool {
        self.s == 0
    }

    pub fn has_maximal_rank(&self) -> bool {
        self.r == 0 || self.s == 0
    }
}

fn max_rank_value(f: &DivisorClass, model: &PointModel) -> Result<i64> {
    let plus = h0_i64(&(f + &DivisorClass::e0(f.r())?), model)?;
    Ok((plus - 3 * h0_i64(f, model)?).max(0))
}

/// `dim coker μ` for the nef uniform class `d·e0 − m·Σei` on `r ≤ 9` points.
///
/// On nine points the value is given for every `t = d − 3m`, including the
/// non-nef `t < 0`.
pub fn s_nef_uniform(r: usize, m: i64, d: i64, model: &PointModel) -> Result<i64> {
    let f = DivisorClass::uniform(r, d, m)?;
    if r == 9 {
        let t = d - 3 * m;
        let a = match model.order() {
            Some(l) => m.div_euclid(l as i64),
            None => 0,
        };
        return Ok(match t {
            t if t > 0 => 0,
            0 => 3 * m - 3 * a,
            -1 => a + 1,
            _ => 0,
        });
    }
    if r > 9 {
        return Err(Error::Unsupported(format!("no closed form for uniform classes on r = {r} points")));
    }
    if !is_nef(&f, model) {
        return Err(Error::domain(format!("{f} is not nef")));
    }
    if r <= 5 || m == 0 {
        return Ok(0);
    }
    match r {
        7 if m % 3 == 0 && d == 8 * (m / 3) && m / 3 >= 3 => Ok(7),
        8 if m % 6 == 0 && d == 17 * (m / 6) && m / 6 >= 9 => Ok(48),
        8 if m % 6 == 1 && d == 17 * (m / 6) + 3 && m / 6 >= 6 => Ok(16),
        _ => max_rank_value(&f, model),
    }
}

/// `dim coker μ` for a nef class, after discarding points of multiplicity 0.
fn s_nef(h: &DivisorClass, model: &PointModel) -> Result<i64> {
    let Some(hr) = h.without_zero_points() else {
        return Ok(0);
    };
    if h.is_zero() {
        return Ok(0);
    }
    let r = hr.r();
    let order = if h.r() == 9 { model.order() } else { None };
    let sub_model = PointModel::for_points(r, order);
    if r <= 5 {
        return Ok(0);
    }
    if r <= 9 {
        if hr.is_uniform() {
            return s_nef_uniform(r, big_to_i64(hr.mult(1))?, hr.degree_i64()?, &sub_model);
        }
        return Err(Error::ClosedFormGap(format!(
            "the cokernel for the non-uniform nef class {hr} on {r} points"
        )));
    }
    s_nef_expected(&hr, &sub_model)
}

/// Beyond nine points: vanishing of `h1(H − e0)` forces surjectivity;
/// otherwise the kernel bounds must pin the kernel dimension.
fn s_nef_expected(h: &DivisorClass, model: &PointModel) -> Result<i64> {
    let e0 = DivisorClass::e0(h.r())?;
    if h1(&(h - &e0), model)?.is_zero() {
        return Ok(0);
    }
    let b = campanella_bounds(h, 1, model)?;
    if b.lower == b.upper {
        let plus = h0_i64(&(h + &e0), model)?;
        return Ok(b.lower - 3 * b.h + plus);
    }
    Err(Error::ClosedFormGap(format!("the cokernel for {h}: kernel bounds [{}, {}] do not meet", b.lower, b.upper)))
}

/// Kernel and cokernel dimensions for any class, via its Zariski decomposition
/// `F = H + N`: `S(F) = h0(F + e0) − h0(H + e0) + S(H)`, and `S(F) = h0(F + e0)`
/// when `F` is not effective.
pub fn s_general(f: &DivisorClass, model: &PointModel) -> Result<MuDims> {
    let degree = f.degree_i64()?;
    let e0 = DivisorClass::e0(f.r())?;
    let h = h0(f, model);
    let plus = h0_i64(&(f + &e0), model)?;
    if !h.is_positive() {
        return MuDims::from_cokernel(degree, 0, plus, plus);
    }
    let z = zariski_decompose(f, model)?;
    let nef_plus = h0_i64(&(&z.nef_part + &e0), model)?;
    let s = plus - nef_plus + s_nef(&z.nef_part, model)?;
    MuDims::from_cokernel(degree, big_to_i64(&h)?, plus, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub scheme: FatPointScheme,
    pub alpha: i64,
    pub beta: i64,
    pub tau: i64,
    /// Largest generator degree.
    pub omega: i64,
    pub regularity: i64,
    /// Minimal generators by degree (nonzero entries only).
    pub generators: BTreeMap<i64, i64>,
    /// First syzygies by degree (nonzero entries only).
    pub syzygies: BTreeMap<i64, i64>,
    /// Multiplication-map data for `α − 1 ≤ t ≤ τ`.
    pub mu: Vec<MuDims>,
    pub conjectural: bool,
}

pub(crate) fn plane_dim(k: i64) -> i64 {
    if k < 0 {
        0
    } else {
        (k + 1) * (k + 2) / 2
    }
}

/// First syzygies from the generator counts by matching Hilbert functions.
/// Scans to `last` and fails if a count is negative or anything shows up past `tail`.
pub(crate) fn syzygies_by_balance(
    generators: &BTreeMap<i64, i64>,
    hilbert: impl Fn(i64) -> Result<i64>,
    first: i64,
    tail: i64,
    last: i64,
) -> Result<BTreeMap<i64, i64>> {
    let mut out = BTreeMap::new();
    for t in first..=last {
        let free: i64 = generators.iter().filter(|(&s, _)| s <= t).map(|(&s, &n)| n * plane_dim(t - s)).sum();
        let earlier: i64 = out.iter().map(|(&s, &b): (&i64, &i64)| b * plane_dim(t - s)).sum();
        let b = free - hilbert(t)? - earlier;
        if b < 0 || (t > tail && b != 0) {
            return Err(Error::Verification(format!("syzygy balance broke in degree {t}: {b}")));
        }
        if b != 0 {
            out.insert(t, b);
        }
    }
    Ok(out)
}

pub fn betti_table(z: &FatPointScheme) -> Result<BettiTable> {
    let p = profile(z)?;
    let model = z.model();
    let mut generators = BTreeMap::new();
    let mut mu = Vec::new();
    for t in (p.alpha - 1)..=p.tau {
        let dims = s_general(&z.class_at(t), &model)?;
        if dims.s > 0 {
            generators.insert(t + 1, dims.s);
        }
        mu.push(dims);
    }
    let hilbert = |t: i64| -> Result<i64> {
        if t < 0 {
            return Ok(0);
        }
        big_to_i64(&h0(&z.class_at(t), &model))
    };
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

impl BettiTable {
    pub fn nu(&self, t: i64) -> i64 {
        self.generators.get(&t).copied().unwrap_or(0)
    }

    pub fn total_generators(&self) -> i64 {
        self.generators.values().sum()
    }
}
