//! Dimensions of linear systems, Hilbert functions and the degree profile
//! (α, β, τ) of a fat point scheme.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::{cubic_multiple, least_true, zariski_decompose};
use crate::error::{Error, Result};
use crate::lattice::{chamber_reduce, to_i64, DivisorClass};

/// Where the points sit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointModel {
    /// General points, at most eight of them.
    General,
    /// Nine points on a smooth plane cubic. `order` is the order of
    /// `O(3)` minus the points in the Picard group of the cubic
    /// (`None` for infinite order, which is the general case).
    Cubic { order: Option<u64> },
    /// Ten or more general points. Dimensions come from the expected
    /// dimension of the chamber class and are conjectural.
    Conjectural,
}

impl PointModel {
    pub fn cubic(order: Option<u64>) -> Self {
        PointModel::Cubic { order }
    }

    /// The model matching `r` points; `order` only matters for `r = 9`.
    pub fn for_points(r: usize, order: Option<u64>) -> Self {
        match r {
            0..=8 => PointModel::General,
            9 => PointModel::Cubic { order },
            _ => PointModel::Conjectural,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            PointModel::Cubic { order } => *order,
            _ => None,
        }
    }

    pub fn is_conjectural(&self) -> bool {
        matches!(self, PointModel::Conjectural)
    }

    pub fn check(&self, r: usize) -> Result<()> {
        let ok = match self {
            PointModel::General => (1..=8).contains(&r),
            PointModel::Cubic { order } => r == 9 && *order != Some(0),
            PointModel::Conjectural => r >= 10,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("point model {self} does not apply to r = {r}")))
        }
    }
}

impl fmt::Display for PointModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointModel::General => write!(f, "general"),
            PointModel::Cubic { order: Some(l) } => write!(f, "cubic(order {l})"),
            PointModel::Cubic { order: None } => write!(f, "cubic(infinite order)"),
            PointModel::Conjectural => write!(f, "general(conjectural)"),
        }
    }
}

/// Fat points `m1·p1 + … + mr·pr`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FatPointScheme {
    mults: Vec<i64>,
    model: PointModel,
}

impl FatPointScheme {
    pub fn new(mults: Vec<i64>, model: PointModel) -> Result<Self> {
        if mults.is_empty() {
            return Err(Error::domain("a fat point scheme needs at least one point"));
        }
        if let Some(bad) = mults.iter().find(|&&m| m < 0) {
            return Err(Error::domain(format!("multiplicities must be nonnegative, got {bad}")));
        }
        model.check(mults.len())?;
        Ok(FatPointScheme { mults, model })
    }

    /// The default model for `r` points.
    pub fn general(mults: Vec<i64>) -> Result<Self> {
        let model = PointModel::for_points(mults.len(), None);
        Self::new(mults, model)
    }

    pub fn uniform(r: usize, m: i64, model: PointModel) -> Result<Self> {
        Self::new(vec![m; r], model)
    }

    pub fn r(&self) -> usize {
        self.mults.len()
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn model(&self) -> PointModel {
        self.model
    }

    pub fn is_uniform(&self) -> bool {
        self.mults.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_conjectural(&self) -> bool {
        self.model.is_conjectural()
    }

    /// `F_d = d·e0 − Σ mi·ei`.
    pub fn class_at(&self, d: i64) -> DivisorClass {
        DivisorClass::from_i64(d, &self.mults).expect("r ≥ 1")
    }

    /// Degree of the scheme, `Σ mi(mi+1)/2`.
    pub fn length(&self) -> i64 {
        self.mults.iter().map(|m| m * (m + 1) / 2).sum()
    }
}

impl fmt::Display for FatPointScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mults.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}] on {}", parts.join(","), self.model)
    }
}

/// Euler characteristic `(F² − K·F)/2 + 1`.
pub fn chi(f: &DivisorClass) -> BigInt {
    let d = f.degree();
    let mut twice = d * (d + BigInt::from(3));
    for m in f.mults() {
        twice -= m * (m + BigInt::one());
    }
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    half + BigInt::one()
}

/// Dimension of the complete linear system of `F`, computed from its
/// chamber reduction.
pub fn h0(f: &DivisorClass, model: &PointModel) -> BigInt {
    let y = chamber_reduce(f).output;
    if y.degree().is_negative() {
        return BigInt::zero();
    }
    if let Some(s) = cubic_multiple(&y) {
        let a = match (y.r(), model.order()) {
            (9, Some(l)) => s.div_floor(&BigInt::from(l)),
            _ => BigInt::zero(),
        };
        return a + BigInt::one();
    }
    let c = chi(&y);
    if y.r() >= 10 && c.is_negative() {
        BigInt::zero()
    } else {
        c
    }
}

/// `h0(F) − χ(F)`, valid for `d ≥ −2` where `h2` vanishes.
pub fn h1(f: &DivisorClass, model: &PointModel) -> Result<BigInt> {
    if *f.degree() < BigInt::from(-2) {
        return Err(Error::Unsupported(format!("h1 needs degree ≥ −2, got {}", f.degree())));
    }
    Ok(h0(f, model) - chi(f))
}

/// `dim I(Z)_d`.
pub fn hilbert_function(z: &FatPointScheme, d: i64) -> Result<i64> {
    if d < 0 {
        return Ok(0);
    }
    to_i64(&h0(&z.class_at(d), &z.model()))
}

/// Degree profile of a fat point scheme.
///
/// `alpha` is the least degree with a nonzero form, `beta` the least degree
/// whose system has no fixed part and at least a pencil, `tau` the least
/// `t ≥ α − 1` with `h1 = 0` (so the regularity is `τ + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertProfile {
    pub scheme: FatPointScheme,
    pub alpha: i64,
    pub beta: i64,
    pub tau: i64,
    pub regularity: i64,
    /// `dim I(Z)_d` for `α − 1 ≤ d ≤ τ + 2`.
    pub values: BTreeMap<i64, i64>,
    pub conjectural: bool,
}

pub fn alpha(z: &FatPointScheme) -> Result<i64> {
    let lo = z.mults().iter().copied().max().unwrap_or(0);
    let model = z.model();
    least_true(lo, |d| Ok(h0(&z.class_at(d), &model).is_positive()))
}

pub fn beta(z: &FatPointScheme, alpha: i64) -> Result<i64> {
    let model = z.model();
    least_true(alpha, |d| {
        let f = z.class_at(d);
        if h0(&f, &model) < BigInt::from(2) {
            return Ok(false);
        }
        Ok(!zariski_decompose(&f, &model)?.has_fixed_part())
    })
}

pub fn tau(z: &FatPointScheme, alpha: i64) -> Result<i64> {
    let model = z.model();
    least_true(alpha - 1, |t| Ok(h1(&z.class_at(t), &model)?.is_zero()))
}

pub fn profile(z: &FatPointScheme) -> Result<HilbertProfile> {
    let a = alpha(z)?;
    let b = beta(z, a)?;
    let t = tau(z, a)?;
    let mut values = BTreeMap::new();
    for d in (a - 1)..=(t + 2) {
        values.insert(d, hilbert_function(z, d)?);
    }
    Ok(HilbertProfile {
        scheme: z.clone(),
        alpha: a,
        beta: b,
        tau: t,
        regularity: t + 1,
        values,
        conjectural: z.is_conjectural(),
    })
}

/// Number of conditions imposed in degree `d`: `C(d+2,2) − dim I_d`.
pub fn conditions_imposed(z: &FatPointScheme, d: i64) -> Result<i64> {
    let total = if d < 0 { 0 } else { (d + 1) * (d + 2) / 2 };
    Ok(total - hilbert_function(z, d)?)
}

pub(crate) fn h0_i64(f: &DivisorClass, model: &PointModel) -> Result<i64> {
    to_i64(&h0(f, model))
}

pub(crate) fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}
