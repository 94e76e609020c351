//! Weyl orbits, Cremona equivalence of fat point schemes, and injectivity
//! certificates along orbits.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cohomology::{alpha, beta, FatPointScheme, PointModel};
use crate::cones::is_nef;
use crate::error::{Error, Result};
use crate::lattice::{chamber_reduce, nine_point_cubic, reflect, DivisorClass, WeylWord};

/// Default cap on the number of classes an orbit enumeration may hold.
pub const DEFAULT_ORBIT_CAP: usize = 500_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitElement {
    pub word: WeylWord,
    pub class: DivisorClass,
}

/// Orbit elements of degree at most `bound`, reachable through such elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSlice {
    pub seed: DivisorClass,
    #[serde(serialize_with = "crate::lattice::json::big")]
    pub bound: BigInt,
    pub elements: Vec<OrbitElement>,
}

fn simple_roots(r: usize) -> Vec<usize> {
    let first = if r >= 3 { 0 } else { 1 };
    (first..r).collect()
}

pub fn orbit_bounded(g: &DivisorClass, bound: &BigInt, model: &PointModel) -> Result<OrbitSlice> {
    orbit_bounded_capped(g, bound, model, DEFAULT_ORBIT_CAP)
}

/// Breadth-first closure of `g` under the simple reflections, keeping
/// classes of degree at most `bound`. Each class keeps its shortest word.
pub fn orbit_bounded_capped(g: &DivisorClass, bound: &BigInt, model: &PointModel, cap: usize) -> Result<OrbitSlice> {
    if !is_nef(g, model) {
        return Err(Error::domain(format!("orbit seeds must be nef, got {g}")));
    }
    if g.degree() > bound {
        return Err(Error::domain(format!("bound {bound} is below the seed degree {}", g.degree())));
    }
    let roots = simple_roots(g.r());
    let mut seen: HashMap<DivisorClass, WeylWord> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone(), WeylWord::identity());
    queue.push_back(g.clone());
    while let Some(x) = queue.pop_front() {
        let word = seen[&x].clone();
        for &i in &roots {
            let y = reflect(&x, i)?;
            if y.degree() > bound || seen.contains_key(&y) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::Config(format!("orbit enumeration exceeded {cap} classes")));
            }
            seen.insert(y.clone(), word.then(i));
            queue.push_back(y);
        }
    }
    let mut elements: Vec<OrbitElement> =
        seen.into_iter().map(|(class, word)| OrbitElement { word, class }).collect();
    elements.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(OrbitSlice { seed: g.clone(), bound: bound.clone(), elements })
}

/// Whether the Weyl orbit of `g` is infinite: always for `r ≥ 10` and a
/// nonzero class, and for `r = 9` unless `g` is a multiple of `−K`.
pub fn orbit_is_infinite(g: &DivisorClass) -> bool {
    match g.r() {
        r if r < 9 => false,
        9 => {
            let s = g.mult(1);
            !(g.mults().iter().all(|m| m == s) && *g.degree() == BigInt::from(3) * s)
        }
        _ => !g.is_zero(),
    }
}

/// Smallest `i ≥ 1` with `G² < mi` and `G² < d − mi` for `wG = (d; m)`.
/// Such an index shows that the multiplication map is injective.
pub fn mrp_certificate(wg: &DivisorClass, g_squared: &BigInt) -> Option<usize> {
    let d = wg.degree();
    wg.mults()
        .iter()
        .position(|m| g_squared < m && *g_squared < d - m)
        .map(|k| k + 1)
}

/// An element of the sublattice spanned by `e_i − e_{i+1}`, `1 ≤ i ≤ 8`:
/// degree zero, supported on the first nine points, coefficients summing to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TranslationVector {
    v: DivisorClass,
}

impl TranslationVector {
    pub fn new(v: DivisorClass) -> Result<Self> {
        if v.r() < 9 {
            return Err(Error::domain(format!("translations need r ≥ 9, got {}", v.r())));
        }
        let m = v.mults();
        let sum: BigInt = m[..9].iter().sum();
        if !v.degree().is_zero() || !sum.is_zero() || m[9..].iter().any(|x| !x.is_zero()) {
            return Err(Error::domain(format!("{v} is not in the root span of e1 − e2, …, e8 − e9")));
        }
        Ok(TranslationVector { v })
    }

    /// `Σ ci·(e_i − e_{i+1})` on `r ≥ 9` points.
    pub fn from_root_coefficients(r: usize, c: &[i64; 8]) -> Result<Self> {
        let mut m = vec![0i64; r.max(9)];
        for (i, &ci) in c.iter().enumerate() {
            m[i] -= ci;
            m[i + 1] += ci;
        }
        Self::new(DivisorClass::from_i64(0, &m)?)
    }

    pub fn class(&self) -> &DivisorClass {
        &self.v
    }
}

/// `τ_v(G) = G + (G·H)v − ½(2G·v + (G·H)v²)H` with `H = 3e0 − e1 − ⋯ − e9`.
pub fn tau_v(g: &DivisorClass, v: &TranslationVector) -> Result<DivisorClass> {
    let r = g.r();
    if r != v.v.r() {
        return Err(Error::Dimension { left: r, right: v.v.r() });
    }
    let h9 = nine_point_cubic(r)?;
    let gh = g.dot(&h9);
    let twice = BigInt::from(2) * g.dot(&v.v) + &gh * v.v.square();
    if !(&twice % 2i32).is_zero() {
        return Err(Error::domain("translation does not give an integral class"));
    }
    let half = twice / 2i32;
    Ok(&(g + &(&gh * &v.v)) - &(&half * &h9))
}

/// Exact test of `√(−v²) > 2 + √(24·d/(G·H)) + 2G²/(G·H)` where `d = G·e0`.
pub fn tau_v_mrp_bound(g: &DivisorClass, v: &TranslationVector) -> Result<bool> {
    let r = g.r();
    if r != v.v.r() {
        return Err(Error::Dimension { left: r, right: v.v.r() });
    }
    let gh = g.dot(&nine_point_cubic(r)?);
    if !gh.is_positive() {
        return Err(Error::domain(format!("need G·(3e0 − e1 − ⋯ − e9) > 0, got {gh}")));
    }
    if g.degree().is_negative() {
        return Err(Error::domain("need a nonnegative degree"));
    }
    let a = -v.v.square();
    // Multiply through by G·H: √X − √Y > C.
    let x = &gh * &gh * &a;
    let y = BigInt::from(24) * g.degree() * &gh;
    let c = BigInt::from(2) * &gh + BigInt::from(2) * g.square();
    let four_c2 = BigInt::from(4) * &c * &c;
    if !c.is_negative() {
        let d = &x - &c * &c - &y;
        Ok(d.is_positive() && &d * &d > &four_c2 * &y)
    } else {
        let e = &y - &x - &c * &c;
        Ok(e.is_negative() || &four_c2 * &x > &e * &e)
    }
}

/// Whether the classes of two schemes in their β degrees lie in one Weyl orbit.
pub fn cremona_equivalent(z1: &FatPointScheme, z2: &FatPointScheme) -> Result<bool> {
    if z1.r() != z2.r() {
        return Err(Error::Dimension { left: z1.r(), right: z2.r() });
    }
    if z1.model() != z2.model() {
        return Err(Error::domain("schemes use different point models"));
    }
    let f1 = z1.class_at(beta(z1, alpha(z1)?)?);
    let f2 = z2.class_at(beta(z2, alpha(z2)?)?);
    Ok(normal_form(&f1) == normal_form(&f2))
}

/// Representative of the Weyl orbit of a class that reduces without clamps.
pub fn normal_form(f: &DivisorClass) -> DivisorClass {
    if f.r() < 3 {
        return f.sorted();
    }
    chamber_reduce(f).output
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedElement {
    pub word: WeylWord,
    pub class: DivisorClass,
    pub certificate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCertification {
    pub seed: DivisorClass,
    #[serde(serialize_with = "crate::lattice::json::big")]
    pub bound: BigInt,
    pub elements: Vec<CertifiedElement>,
    /// Elements without a certificate, in increasing degree.
    pub exceptions: Vec<DivisorClass>,
    pub infinite_orbit: bool,
}

impl OrbitCertification {
    pub fn uncertified_fraction(&self) -> f64 {
        if self.elements.is_empty() {
            return 0.0;
        }
        self.exceptions.len() as f64 / self.elements.len() as f64
    }
}

pub fn certify_orbit(g: &DivisorClass, bound: &BigInt, model: &PointModel) -> Result<OrbitCertification> {
    let slice = orbit_bounded(g, bound, model)?;
    let g2 = g.square();
    let elements: Vec<CertifiedElement> = slice
        .elements
        .into_iter()
        .map(|e| CertifiedElement { certificate: mrp_certificate(&e.class, &g2), word: e.word, class: e.class })
        .collect();
    let mut exceptions: Vec<DivisorClass> =
        elements.iter().filter(|e| e.certificate.is_none()).map(|e| e.class.clone()).collect();
    exceptions.sort();
    Ok(OrbitCertification {
        seed: g.clone(),
        bound: bound.clone(),
        elements,
        exceptions,
        infinite_orbit: orbit_is_infinite(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h0;
    use crate::lattice::{apply_word, canonical_class};
    use crate::maxrank::campanella_bounds;
    use proptest::prelude::*;

    fn c(d: i64, m: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(d, m).unwrap()
    }

    #[test]
    fn finite_orbits_below_nine() {
        let g = PointModel::General;
        let e0 = DivisorClass::e0(8).unwrap();
        let big = BigInt::from(1000);
        let orbit = orbit_bounded(&e0, &big, &g).unwrap();
        assert_eq!(orbit.elements.len(), 17280);
        for e in &orbit.elements {
            assert_eq!(apply_word(&e0, &e.word).unwrap(), e.class);
            assert_eq!(e.class.square(), BigInt::from(1));
        }
        let e0 = DivisorClass::e0(3).unwrap();
        assert_eq!(orbit_bounded(&e0, &big, &g).unwrap().elements.len(), 2);
    }

    #[test]
    fn anticanonical_orbit_is_a_point() {
        let k = canonical_class(9).unwrap();
        let minus_k = -&k;
        let orbit = orbit_bounded(&minus_k, &BigInt::from(500), &PointModel::cubic(None)).unwrap();
        assert_eq!(orbit.elements.len(), 1);
        assert!(!orbit_is_infinite(&minus_k));
        assert!(orbit_is_infinite(&c(4, &[1; 9])));
        assert!(orbit_is_infinite(&c(4, &[1; 10])));
        assert!(!orbit_is_infinite(&c(4, &[1; 8])));
    }

    #[test]
    fn orbit_is_closed_and_grows() {
        let g = c(4, &[1; 10]);
        let model = PointModel::Conjectural;
        let mut last = 0;
        for bound in [5, 6, 8] {
            let orbit = orbit_bounded(&g, &BigInt::from(bound), &model).unwrap();
            let set: std::collections::HashSet<_> = orbit.elements.iter().map(|e| e.class.clone()).collect();
            for e in &orbit.elements {
                for i in 0..10 {
                    let y = reflect(&e.class, i).unwrap();
                    if *y.degree() <= BigInt::from(bound) {
                        assert!(set.contains(&y));
                    }
                }
            }
            assert!(orbit.elements.len() > last);
            last = orbit.elements.len();
        }
        assert!(orbit_bounded(&c(3, &[2, 2]), &BigInt::from(10), &PointModel::General).is_err());
    }

    #[test]
    fn certificates() {
        assert_eq!(mrp_certificate(&c(10, &[3, 3, 3]), &BigInt::from(3)), None);
        let g = c(4, &[1; 10]);
        let g2 = g.square();
        assert_eq!(g2, BigInt::from(6));
        // Quadratic transformations at the three smallest multiplicities
        // raise the degree and the multiplicities.
        let mut x = g.clone();
        for _ in 0..8 {
            let mut perm: Vec<usize> = (0..10).collect();
            perm.sort_by(|&a, &b| x.mult(a + 1).cmp(x.mult(b + 1)));
            x = reflect(&x.permuted(&perm), 0).unwrap();
        }
        let i = mrp_certificate(&x, &g2).expect("certificate");
        assert!(g2 < *x.mult(i) && g2 < x.degree() - x.mult(i));
        let b = campanella_bounds(&x, i, &PointModel::Conjectural).unwrap();
        assert_eq!((b.l, b.q), (0, 0));
    }

    #[test]
    fn tau_examples() {
        let g = c(4, &[1; 10]);
        let zero = TranslationVector::from_root_coefficients(10, &[0; 8]).unwrap();
        assert_eq!(tau_v(&g, &zero).unwrap(), g);
        assert!(!tau_v_mrp_bound(&g, &zero).unwrap());
        let mut eventually = false;
        for n in 1..200 {
            let v = TranslationVector::from_root_coefficients(10, &[n, 0, 0, 0, 0, 0, 0, 0]).unwrap();
            let holds = tau_v_mrp_bound(&g, &v).unwrap();
            if holds {
                eventually = true;
                let t = tau_v(&g, &v).unwrap();
                assert!(mrp_certificate(&t, &g.square()).is_some());
            }
        }
        assert!(eventually);
        assert!(TranslationVector::new(c(0, &[1, 0, 0, 0, 0, 0, 0, 0, 0])).is_err());
        assert!(tau_v_mrp_bound(&c(0, &[0; 9]), &TranslationVector::from_root_coefficients(9, &[1; 8]).unwrap()).is_err());
    }

    #[test]
    fn equivalence() {
        let m = PointModel::cubic(None);
        let z = FatPointScheme::uniform(9, 3, m).unwrap();
        assert!(cremona_equivalent(&z, &z).unwrap());
        let z1 = FatPointScheme::new(vec![3, 2, 2, 1, 1, 1, 1, 1, 1], m).unwrap();
        let z2 = FatPointScheme::new(vec![1, 2, 1, 3, 1, 1, 2, 1, 1], m).unwrap();
        assert!(cremona_equivalent(&z1, &z2).unwrap());
        let g = PointModel::General;
        let a = FatPointScheme::new(vec![2, 2, 2], g).unwrap();
        let b = FatPointScheme::new(vec![1, 1, 1], g).unwrap();
        assert!(!cremona_equivalent(&a, &b).unwrap());
        let one = FatPointScheme::new(vec![1], g).unwrap();
        assert!(cremona_equivalent(&a, &one).is_err());
    }

    fn nef_seed() -> impl Strategy<Value = DivisorClass> {
        (3usize..=11, 0i64..12, proptest::collection::vec(0i64..5, 11)).prop_map(|(r, extra, m)| {
            let mut m = m[..r].to_vec();
            m.sort_unstable_by(|a, b| b.cmp(a));
            let top: i64 = m.iter().take(3).sum();
            c(top + extra, &m)
        })
    }

    proptest! {
        #[test]
        fn normal_forms_are_orbit_invariants(g in nef_seed(), word in proptest::collection::vec(0usize..11, 0..15)) {
            let r = g.r();
            let w = WeylWord::new(word.into_iter().map(|i| i % r).collect(), r).unwrap();
            let wg = apply_word(&g, &w).unwrap();
            prop_assert_eq!(normal_form(&wg), normal_form(&g));
            let model = PointModel::for_points(r, None);
            if r <= 9 {
                prop_assert_eq!(h0(&wg, &model), h0(&g, &model));
            }
        }

        #[test]
        fn tau_is_an_isometric_homomorphism(
            g in proptest::collection::vec(-4i64..8, 11),
            gp in proptest::collection::vec(-4i64..8, 11),
            a in proptest::array::uniform8(-3i64..4),
            b in proptest::array::uniform8(-3i64..4),
        ) {
            let g = c(g[0].abs() * 3, &g[1..]);
            let gp = c(gp[0], &gp[1..]);
            let va = TranslationVector::from_root_coefficients(10, &a).unwrap();
            let vb = TranslationVector::from_root_coefficients(10, &b).unwrap();
            let sum = TranslationVector::new(va.class() + vb.class()).unwrap();
            let ta = tau_v(&g, &va).unwrap();
            prop_assert_eq!(ta.dot(&tau_v(&gp, &va).unwrap()), g.dot(&gp));
            prop_assert_eq!(tau_v(&g, &sum).unwrap(), tau_v(&tau_v(&g, &vb).unwrap(), &va).unwrap());
            if a != b {
                let probe = c(7, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
                prop_assert_ne!(tau_v(&probe, &va).unwrap(), tau_v(&probe, &vb).unwrap());
            }
        }
    }
}
