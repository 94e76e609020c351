//! Maximal-rank classification of the multiplication maps, abnormal-class
//! witnesses, kernel bounds, and the arithmetic beyond nine points.

pub mod campanella;
pub mod numtheory;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{h0_i64, profile, FatPointScheme, PointModel};
use crate::cones::{least_true, uniform_alpha_degree, zariski_decompose};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::resolution::{s_general, MuDims};

pub use campanella::{campanella_bounds, campanella_table, CampanellaBounds, GeneratorBounds};
pub use numtheory::{l1_criterion, nine_point_criterion, odd_convergents, pell_solutions, q1_criterion, OddConvergent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankStatus {
    #[serde(rename = "injective")]
    Injective,
    #[serde(rename = "surjective")]
    Surjective,
    #[serde(rename = "bijective")]
    Bijective,
    #[serde(rename = "FAILS")]
    Fails,
}

impl RankStatus {
    pub fn of(mu: &MuDims) -> Self {
        match (mu.r == 0, mu.s == 0) {
            (true, true) => RankStatus::Bijective,
            (true, false) => RankStatus::Injective,
            (false, true) => RankStatus::Surjective,
            (false, false) => RankStatus::Fails,
        }
    }
}

/// Whether a failure sits below `β` (where a common factor of all forms
/// already obstructs maximal rank) or at or above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Forced,
    Intrinsic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    #[serde(rename = "R")]
    pub r: i64,
    #[serde(rename = "S")]
    pub s: i64,
    pub status: RankStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxRankReport {
    pub scheme: FatPointScheme,
    pub alpha: i64,
    pub beta: i64,
    pub tau: i64,
    pub per_degree: BTreeMap<i64, DegreeEntry>,
    pub has_mrp: bool,
    pub first_failure: Option<i64>,
    pub failures: Vec<(i64, FailureKind)>,
    pub conjectural: bool,
}

/// Classifies `μ_t` for `α ≤ t ≤ τ + 1`; outside that range it is trivially
/// injective (zero source) or surjective (no new generators).
pub fn classify(z: &FatPointScheme) -> Result<MaxRankReport> {
    let p = profile(z)?;
    let model = z.model();
    let mut per_degree = BTreeMap::new();
    let mut failures = Vec::new();
    for t in p.alpha..=(p.tau + 1) {
        let mu = s_general(&z.class_at(t), &model)?;
        let status = RankStatus::of(&mu);
        if status == RankStatus::Fails {
            let kind = if t < p.beta { FailureKind::Forced } else { FailureKind::Intrinsic };
            failures.push((t, kind));
        }
        per_degree.insert(t, DegreeEntry { r: mu.r, s: mu.s, status });
    }
    Ok(MaxRankReport {
        scheme: z.clone(),
        alpha: p.alpha,
        beta: p.beta,
        tau: p.tau,
        has_mrp: failures.is_empty(),
        first_failure: failures.first().map(|f| f.0),
        failures,
        per_degree,
        conjectural: p.conjectural,
    })
}

pub fn classify_uniform(r: usize, m: i64, model: &PointModel) -> Result<MaxRankReport> {
    if m < 1 {
        return Err(Error::domain(format!("need m ≥ 1, got {m}")));
    }
    classify(&FatPointScheme::uniform(r, m, *model)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniformFailure {
    pub m: i64,
    pub degree: i64,
    pub alpha: i64,
    pub beta: i64,
    pub kind: FailureKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UmrpSummary {
    pub r: usize,
    pub m_max: i64,
    pub failures: Vec<UniformFailure>,
    /// No failure in any degree for `m ≤ m_max`.
    pub umrp: bool,
    /// No failure at or above `β` for `m ≤ m_max`.
    pub restricted_umrp: bool,
    pub conjectural: bool,
}

/// Scans uniform schemes `m·(p1 + ⋯ + pr)` for `1 ≤ m ≤ m_max`.
pub fn umrp_status(r: usize, m_max: i64, model: &PointModel) -> Result<UmrpSummary> {
    let reports: Vec<Result<MaxRankReport>> =
        (1..=m_max).into_par_iter().map(|m| classify_uniform(r, m, model)).collect();
    let mut failures = Vec::new();
    for (m, rep) in (1..=m_max).zip(reports) {
        let rep = rep?;
        for &(degree, kind) in &rep.failures {
            failures.push(UniformFailure { m, degree, alpha: rep.alpha, beta: rep.beta, kind });
        }
    }
    Ok(UmrpSummary {
        r,
        m_max,
        umrp: failures.is_empty(),
        restricted_umrp: failures.iter().all(|f| f.kind == FailureKind::Forced),
        failures,
        conjectural: model.is_conjectural(),
    })
}

/// A uniform class `E` with `E² < 0`, and a degree/multiplicity pair where
/// `a·e0 + b·E` has a fixed part while `(a+1)·e0 + b·E` does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbnormalWitness {
    pub class: DivisorClass,
    pub a: i64,
    pub b: i64,
    /// Degree `a + b·deg E` of the failing system.
    pub n: i64,
    /// Multiplicity `b·mult E`.
    pub m: i64,
}

fn abnormal_class(r: usize) -> Option<(i64, i64)> {
    match r {
        2 => Some((1, 1)),
        3 => Some((3, 2)),
        5 => Some((2, 1)),
        6 => Some((12, 5)),
        7 => Some((21, 8)),
        8 => Some((48, 17)),
        _ => None,
    }
}

pub fn abnormal_witness(r: usize) -> Result<Option<AbnormalWitness>> {
    if !(1..=9).contains(&r) {
        return Err(Error::Unsupported(format!("abnormal witnesses are tabulated for r ≤ 9, got {r}")));
    }
    let Some((de, me)) = abnormal_class(r) else {
        return Ok(None);
    };
    let model = PointModel::for_points(r, None);
    let fixed = |a: i64, b: i64| -> Result<bool> {
        let f = DivisorClass::uniform(r, a + b * de, b * me)?;
        Ok(zariski_decompose(&f, &model)?.has_fixed_part())
    };
    for b in 1..=64 {
        let first_free = least_true(1, |a| Ok(!fixed(a, b)?))?;
        if first_free >= 2 {
            let a = first_free - 1;
            return Ok(Some(AbnormalWitness {
                class: DivisorClass::uniform(r, de, me)?,
                a,
                b,
                n: a + b * de,
                m: b * me,
            }));
        }
    }
    Ok(None)
}

/// Maximal-rank verdict from the kernel bounds beyond nine points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsVerdict {
    /// A single section, so the map is trivially injective.
    Trivial,
    Forced,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjecturalBounds {
    pub r: usize,
    pub m: i64,
    pub alpha: i64,
    pub h: i64,
    pub l1: i64,
    pub q1: i64,
    pub lower: i64,
    pub upper: i64,
    /// `max(0, 2h − α − 2)`.
    pub expected_kernel: i64,
    pub pinned: bool,
    pub verdict: BoundsVerdict,
    pub conjectural: bool,
}

/// Kernel bounds in degree `α` for `m·(p1 + ⋯ + pr)` with `r ≥ 10`,
/// computed from expected dimensions.
pub fn conjectural_uniform_bounds(r: usize, m: i64) -> Result<ConjecturalBounds> {
    if r < 10 || m < 1 {
        return Err(Error::domain(format!("need r ≥ 10 and m ≥ 1, got r = {r}, m = {m}")));
    }
    let model = PointModel::Conjectural;
    let alpha = uniform_alpha_degree(r, m, &model)?;
    let f = DivisorClass::uniform(r, alpha, m)?;
    let e0 = DivisorClass::e0(r)?;
    let e1 = DivisorClass::exceptional(r, 1)?;
    let h = h0_i64(&f, &model)?;
    let l1 = h0_i64(&(&f - &(&e0 - &e1)), &model)?;
    let q1 = h0_i64(&(&f - &e1), &model)?;
    let h_plus = h0_i64(&(&f + &e0), &model)?;
    let lower = l1.max(3 * h - h_plus);
    let upper = l1 + q1;
    let pinned = lower == upper;
    let verdict = if h == 1 {
        BoundsVerdict::Trivial
    } else if q1 == 0 || (l1 > 0 && pinned) {
        BoundsVerdict::Forced
    } else {
        BoundsVerdict::Undetermined
    };
    Ok(ConjecturalBounds {
        r,
        m,
        alpha,
        h,
        l1,
        q1,
        lower,
        upper,
        expected_kernel: (2 * h - alpha - 2).max(0),
        pinned,
        verdict,
        conjectural: true,
    })
}
