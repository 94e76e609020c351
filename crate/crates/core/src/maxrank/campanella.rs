//! Two-sided bounds on the kernel of the multiplication map, obtained by
//! splitting the linear forms through a chosen point.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cohomology::{h0, h0_i64, h1, hilbert_function, profile, FatPointScheme, PointModel};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;

/// Bounds `lower ≤ dim ker μ ≤ upper` for `μ: H0(F) ⊗ H0(e0) → H0(F + e0)`,
/// with `l = h0(F − (e0 − ei))` and `q = h0(F − ei)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampanellaBounds {
    pub class: DivisorClass,
    pub index: usize,
    pub h: i64,
    pub l: i64,
    pub q: i64,
    pub h_plus: i64,
    pub lower: i64,
    pub upper: i64,
    /// `h1(F) = h1(F − (e0 − ei)) = h1(F − ei) = 0`, in which case the
    /// upper bound equals `2h − d − 2` and the map is surjective.
    pub exact: bool,
}

impl CampanellaBounds {
    pub fn pinned(&self) -> bool {
        self.lower == self.upper
    }

    /// The same bounds transported to `dim coker μ`.
    pub fn cokernel_bounds(&self) -> (i64, i64) {
        let shift = self.h_plus - 3 * self.h;
        (self.lower + shift, self.upper + shift)
    }
}

pub fn campanella_bounds(f: &DivisorClass, i: usize, model: &PointModel) -> Result<CampanellaBounds> {
    let r = f.r();
    if i == 0 || i > r {
        return Err(Error::domain(format!("point index {i} outside 1..={r}")));
    }
    if f.mults().iter().any(|m| !m.is_positive()) {
        return Err(Error::domain(format!("kernel bounds need every multiplicity positive, got {f}")));
    }
    let hb = h0(f, model);
    if hb.is_zero() {
        return Err(Error::domain(format!("{f} is not effective")));
    }
    let e0 = DivisorClass::e0(r)?;
    let ei = DivisorClass::exceptional(r, i)?;
    let pencil = &e0 - &ei;
    let h = h0_i64(f, model)?;
    let l = h0_i64(&(f - &pencil), model)?;
    let q = h0_i64(&(f - &ei), model)?;
    let h_plus = h0_i64(&(f + &e0), model)?;
    let exact = h1(f, model)?.is_zero()
        && h1(&(f - &pencil), model)?.is_zero()
        && h1(&(f - &ei), model)?.is_zero();
    Ok(CampanellaBounds {
        class: f.clone(),
        index: i,
        h,
        l,
        q,
        h_plus,
        lower: l.max(3 * h - h_plus),
        upper: l + q,
        exact,
    })
}

/// Bounds on the number of minimal generators in degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorBounds {
    pub degree: i64,
    pub lower: i64,
    pub upper: i64,
}

/// Generator bounds in every degree `α ≤ t ≤ τ + 1` that depend only on the
/// Hilbert function `h(t) = dim I(Z)_t`: the count is exact in degree `α`,
/// and above it `max(0, Δ³h(t)) ≤ ν_t ≤ Δ²h(t) − 1`.
pub fn campanella_table(z: &FatPointScheme) -> Result<Vec<GeneratorBounds>> {
    let p = profile(z)?;
    let h = |t: i64| -> Result<i64> { if t < p.alpha { Ok(0) } else { hilbert_function(z, t) } };
    let mut out = Vec::new();
    for t in p.alpha..=(p.tau + 1).max(p.alpha) {
        if t == p.alpha {
            let n = h(t)?;
            out.push(GeneratorBounds { degree: t, lower: n, upper: n });
            continue;
        }
        let (h0, h1, h2, h3) = (h(t)?, h(t - 1)?, h(t - 2)?, h(t - 3)?);
        let second = h0 - 2 * h1 + h2;
        let third = second - (h1 - 2 * h2 + h3);
        out.push(GeneratorBounds { degree: t, lower: third.max(0), upper: second - 1 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::betti_table;

    #[test]
    fn bounds_for_205_on_8() {
        let g = PointModel::General;
        let z = FatPointScheme::uniform(8, 205, g).unwrap();
        let table = campanella_table(&z).unwrap();
        let got: Vec<(i64, i64, i64)> = table.iter().map(|b| (b.degree, b.lower, b.upper)).collect();
        assert_eq!(got, vec![(579, 10, 10), (580, 201, 210), (581, 70, 280), (582, 0, 80)]);
        let betti = betti_table(&z).unwrap();
        for b in &table {
            let nu = betti.nu(b.degree);
            assert!(b.lower <= nu && nu <= b.upper, "{b:?} vs {nu}");
        }
        for mu in betti.mu.iter().filter(|mu| mu.h0_f > 0) {
            let f = DivisorClass::uniform(8, mu.degree, 205).unwrap();
            let b = campanella_bounds(&f, 1, &g).unwrap();
            assert!(b.lower <= mu.r && mu.r <= b.upper, "{b:?} vs {mu:?}");
        }
        assert!(campanella_bounds(&DivisorClass::uniform(8, 578, 205).unwrap(), 1, &g).is_err());
    }

    #[test]
    fn tables_contain_generator_counts() {
        let cases: Vec<(Vec<i64>, PointModel)> = vec![
            (vec![3; 5], PointModel::General),
            (vec![3; 7], PointModel::General),
            (vec![4; 8], PointModel::General),
            (vec![5, 3, 2, 2, 1], PointModel::General),
            (vec![2; 9], PointModel::cubic(None)),
            (vec![6; 9], PointModel::cubic(Some(2))),
            (vec![1; 4], PointModel::General),
        ];
        for (m, model) in cases {
            let z = FatPointScheme::new(m, model).unwrap();
            let betti = betti_table(&z).unwrap();
            for b in campanella_table(&z).unwrap() {
                let nu = betti.nu(b.degree);
                assert!(b.lower <= nu && nu <= b.upper, "{z:?}: {b:?} vs {nu}");
            }
        }
    }

    #[test]
    fn guards() {
        let g = PointModel::General;
        assert!(campanella_bounds(&DivisorClass::from_i64(3, &[1, 0]).unwrap(), 1, &g).is_err());
        assert!(campanella_bounds(&DivisorClass::from_i64(3, &[1, 1]).unwrap(), 3, &g).is_err());
    }
}
