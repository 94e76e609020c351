//! Divisor classes on the plane blown up at `r` points, the intersection
//! form, and the action of the Weyl group generated by the simple roots.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The class `d·e0 − m1·e1 − … − mr·er`, stored as `(d; m1, …, mr)`.
///
/// The derived ordering (degree first, then multiplicities
/// lexicographically) is the canonical order used for sorted output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    d: BigInt,
    m: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(d: BigInt, m: Vec<BigInt>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::domain("a divisor class needs at least one point"));
        }
        Ok(DivisorClass { d, m })
    }

    pub fn from_i64(d: i64, m: &[i64]) -> Result<Self> {
        Self::new(BigInt::from(d), m.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `d·e0 − m·(e1 + … + er)`.
    pub fn uniform(r: usize, d: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        Self::new(d.into(), vec![m; r])
    }

    pub fn zero(r: usize) -> Result<Self> {
        Self::uniform(r, 0, 0)
    }

    pub fn e0(r: usize) -> Result<Self> {
        Self::uniform(r, 1, 0)
    }

    /// The exceptional class `ei`, `1 ≤ i ≤ r`.
    pub fn exceptional(r: usize, i: usize) -> Result<Self> {
        if i == 0 || i > r {
            return Err(Error::domain(format!("exceptional index {i} outside 1..={r}")));
        }
        let mut x = Self::zero(r)?;
        x.m[i - 1] = BigInt::from(-1);
        Ok(x)
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    pub fn mults(&self) -> &[BigInt] {
        &self.m
    }

    /// Multiplicity at point `i`, 1-based.
    pub fn mult(&self, i: usize) -> &BigInt {
        &self.m[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(Zero::is_zero)
    }

    pub fn is_uniform(&self) -> bool {
        self.m.windows(2).all(|w| w[0] == w[1])
    }

    /// Intersection with a class on the same number of points.
    ///
    /// # Panics
    /// If the point counts differ; use [`intersect`] for a checked version.
    pub fn dot(&self, other: &DivisorClass) -> BigInt {
        assert_eq!(self.r(), other.r(), "intersecting classes on different blow-ups");
        let mut acc = &self.d * &other.d;
        for (a, b) in self.m.iter().zip(&other.m) {
            acc -= a * b;
        }
        acc
    }

    pub fn square(&self) -> BigInt {
        self.dot(self)
    }

    /// Sum of the three largest multiplicities (fewer if `r < 3`).
    pub fn top_three(&self) -> BigInt {
        let mut sorted: Vec<&BigInt> = self.m.iter().collect();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        sorted.into_iter().take(3).sum()
    }

    /// The class with multiplicities in descending order.
    pub fn sorted(&self) -> DivisorClass {
        let mut m = self.m.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        DivisorClass { d: self.d.clone(), m }
    }

    /// Applies `new[k] = old[perm[k]]` to the multiplicities.
    pub fn permuted(&self, perm: &[usize]) -> DivisorClass {
        DivisorClass {
            d: self.d.clone(),
            m: perm.iter().map(|&j| self.m[j].clone()).collect(),
        }
    }

    /// Drops points of multiplicity zero. Returns `None` when nothing is left.
    pub fn without_zero_points(&self) -> Option<DivisorClass> {
        let m: Vec<BigInt> = self.m.iter().filter(|x| !x.is_zero()).cloned().collect();
        if m.is_empty() {
            None
        } else {
            Some(DivisorClass { d: self.d.clone(), m })
        }
    }

    pub fn with_degree(&self, d: impl Into<BigInt>) -> DivisorClass {
        DivisorClass { d: d.into(), m: self.m.clone() }
    }

    pub fn degree_i64(&self) -> Result<i64> {
        to_i64(&self.d)
    }

    pub fn mults_i64(&self) -> Result<Vec<i64>> {
        self.m.iter().map(to_i64).collect()
    }

    fn check_same_r(&self, other: &DivisorClass) -> Result<()> {
        if self.r() == other.r() {
            Ok(())
        } else {
            Err(Error::Dimension { left: self.r(), right: other.r() })
        }
    }
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d)?;
        for (k, x) in self.m.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " {x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `d;m1,m2,...` (spaces and surrounding parentheses allowed).
impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (d, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::domain(format!("expected `d;m1,...,mr`, got `{s}`")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::domain(format!("not an integer: `{}`", t.trim())))
        };
        let m = rest.split(',').map(parse).collect::<Result<Vec<_>>>()?;
        DivisorClass::new(parse(d)?, m)
    }
}

fn number(x: &BigInt) -> serde_json::Number {
    x.to_string().parse().expect("decimal integers are valid JSON numbers")
}

/// `serialize_with` helpers emitting big integers as plain JSON numbers.
pub mod json {
    use num_bigint::BigInt;
    use num_rational::Ratio;
    use serde::ser::SerializeSeq;
    use serde::{Serialize, Serializer};

    use super::{number, DivisorClass};

    pub fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        number(x).serialize(s)
    }

    pub fn weighted<S: Serializer>(v: &[(DivisorClass, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (c, k) in v {
            seq.serialize_element(&(c, number(k)))?;
        }
        seq.end()
    }

    /// `"p/q"`, or `"p"` when integral.
    pub fn ratio<S: Serializer>(x: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    d: serde_json::Number,
    m: Vec<serde_json::Number>,
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassRepr { d: number(&self.d), m: self.m.iter().map(number).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ClassRepr::deserialize(de)?;
        let big = |n: &serde_json::Number| {
            n.to_string().parse::<BigInt>().map_err(|_| D::Error::custom(format!("not an integer: {n}")))
        };
        let m = repr.m.iter().map(big).collect::<std::result::Result<Vec<_>, _>>()?;
        DivisorClass::new(big(&repr.d)?, m).map_err(D::Error::custom)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.r(), rhs.r());
        DivisorClass {
            d: &self.d + &rhs.d,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.r(), rhs.r());
        DivisorClass {
            d: &self.d - &rhs.d,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl AddAssign<&DivisorClass> for DivisorClass {
    fn add_assign(&mut self, rhs: &DivisorClass) {
        assert_eq!(self.r(), rhs.r());
        self.d += &rhs.d;
        for (a, b) in self.m.iter_mut().zip(&rhs.m) {
            *a += b;
        }
    }
}

impl SubAssign<&DivisorClass> for DivisorClass {
    fn sub_assign(&mut self, rhs: &DivisorClass) {
        assert_eq!(self.r(), rhs.r());
        self.d -= &rhs.d;
        for (a, b) in self.m.iter_mut().zip(&rhs.m) {
            *a -= b;
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { d: -&self.d, m: self.m.iter().map(|x| -x).collect() }
    }
}

impl Mul<&DivisorClass> for &BigInt {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass { d: self * &rhs.d, m: rhs.m.iter().map(|x| self * x).collect() }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        &BigInt::from(self) * rhs
    }
}

/// Checked intersection product.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<BigInt> {
    a.check_same_r(b)?;
    Ok(a.dot(b))
}

/// `K = −3e0 + e1 + … + er`, i.e. `(−3; −1, …, −1)`.
pub fn canonical_class(r: usize) -> Result<DivisorClass> {
    DivisorClass::uniform(r, -3, -1)
}

/// `−K` restricted to the first nine points, zero elsewhere: `3e0 − e1 − … − e9`.
pub fn nine_point_cubic(r: usize) -> Result<DivisorClass> {
    if r < 9 {
        return Err(Error::domain(format!("the nine-point cubic class needs r ≥ 9, got {r}")));
    }
    let mut m = vec![BigInt::zero(); r];
    for x in m.iter_mut().take(9) {
        *x = BigInt::one();
    }
    DivisorClass::new(BigInt::from(3), m)
}

fn check_root_index(r: usize, i: usize) -> Result<()> {
    if i >= r.max(1) {
        return Err(Error::domain(format!("root index {i} outside 0..{r}")));
    }
    if i == 0 && r < 3 {
        return Err(Error::domain(format!("the quadratic root needs at least 3 points, got {r}")));
    }
    Ok(())
}

/// Simple root `i`: `e0 − e1 − e2 − e3` for `i = 0`, `e_i − e_{i+1}` otherwise.
pub fn root(r: usize, i: usize) -> Result<DivisorClass> {
    check_root_index(r, i)?;
    let mut x = DivisorClass::zero(r)?;
    if i == 0 {
        x.d = BigInt::one();
        for k in 0..3 {
            x.m[k] = BigInt::one();
        }
    } else {
        x.m[i - 1] = BigInt::from(-1);
        x.m[i] = BigInt::one();
    }
    Ok(x)
}

/// Quadratic transformation at the first three points. Below three points
/// the class is padded with zero multiplicities and truncated afterwards.
fn cremona(x: &DivisorClass) -> DivisorClass {
    let r = x.r();
    let mut m = x.m.clone();
    m.resize(r.max(3), BigInt::zero());
    let k = &x.d - &m[0] - &m[1] - &m[2];
    for v in m.iter_mut().take(3) {
        *v += &k;
    }
    m.truncate(r);
    DivisorClass { d: &x.d + &k, m }
}

/// Reflection `x ↦ x + (x·ρ)ρ` in simple root `i`.
pub fn reflect(x: &DivisorClass, i: usize) -> Result<DivisorClass> {
    check_root_index(x.r(), i)?;
    if i == 0 {
        Ok(cremona(x))
    } else {
        let mut y = x.clone();
        y.m.swap(i - 1, i);
        Ok(y)
    }
}

/// A word in the simple reflections, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord {
    letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(letters: Vec<usize>, r: usize) -> Result<Self> {
        for &i in &letters {
            check_root_index(r, i)?;
        }
        Ok(WeylWord { letters })
    }

    pub fn identity() -> Self {
        WeylWord::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn then(&self, i: usize) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.push(i);
        WeylWord { letters }
    }

    /// The inverse word (reflections are involutions).
    pub fn inverse(&self) -> WeylWord {
        WeylWord { letters: self.letters.iter().rev().copied().collect() }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

pub fn apply_word(x: &DivisorClass, w: &WeylWord) -> Result<DivisorClass> {
    let mut y = x.clone();
    for &i in &w.letters {
        y = reflect(&y, i)?;
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ReductionOp {
    /// Reorders multiplicities so that `new[k] = old[permutation[k]]`.
    Sort { permutation: Vec<usize> },
    /// Quadratic transformation at the three leading points.
    Cremona,
    /// Removes a negative multiplicity at point `index` (1-based),
    /// splitting off `amount` copies of that exceptional curve.
    Clamp { index: usize, amount: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub op: ReductionOp,
    /// The class after this step.
    pub class: DivisorClass,
}

/// Record of a reduction into the fundamental chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub input: DivisorClass,
    pub steps: Vec<ReductionStep>,
    pub output: DivisorClass,
}

impl ReductionTrace {
    pub fn cremona_steps(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.op, ReductionOp::Cremona)).count()
    }

    pub fn clamp_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.op, ReductionOp::Clamp { .. })).count()
    }

    /// The reduced class has nonnegative degree, i.e. the input is effective
    /// whenever the chamber class is.
    pub fn ends_nonnegative(&self) -> bool {
        !self.output.d.is_negative()
    }

    /// Re-applies every step to the input and checks it reaches `output`.
    pub fn replay(&self) -> DivisorClass {
        let mut cur = self.input.clone();
        for step in &self.steps {
            cur = apply_op(&cur, &step.op);
        }
        cur
    }

    /// Pulls `v`, written in the coordinates reached after the first
    /// `upto` steps, back to the coordinates of the input.
    /// Clamp steps are skipped; the quadratic step is only linear for `r ≥ 3`.
    pub fn pull_back(&self, upto: usize, v: &DivisorClass) -> DivisorClass {
        let mut cur = v.clone();
        for step in self.steps[..upto].iter().rev() {
            match &step.op {
                ReductionOp::Sort { permutation } => {
                    let mut m = cur.m.clone();
                    for (k, &j) in permutation.iter().enumerate() {
                        m[j] = cur.m[k].clone();
                    }
                    cur.m = m;
                }
                ReductionOp::Cremona => cur = cremona(&cur),
                ReductionOp::Clamp { .. } => {}
            }
        }
        cur
    }
}

fn apply_op(x: &DivisorClass, op: &ReductionOp) -> DivisorClass {
    match op {
        ReductionOp::Sort { permutation } => x.permuted(permutation),
        ReductionOp::Cremona => cremona(x),
        ReductionOp::Clamp { index, .. } => {
            let mut y = x.clone();
            y.m[index - 1] = BigInt::zero();
            y
        }
    }
}

fn descending_permutation(m: &[BigInt]) -> Option<Vec<usize>> {
    if m.windows(2).all(|w| w[0] >= w[1]) {
        return None;
    }
    let mut perm: Vec<usize> = (0..m.len()).collect();
    perm.sort_by(|&a, &b| m[b].cmp(&m[a]));
    Some(perm)
}

/// Reduces `x` to the fundamental chamber by sorting, quadratic
/// transformations while `d < m1 + m2 + m3`, and clamping negative
/// multiplicities. Stops early once the degree turns negative.
pub fn chamber_reduce(x: &DivisorClass) -> ReductionTrace {
    let mut cur = x.clone();
    let mut steps = Vec::new();
    loop {
        if let Some(permutation) = descending_permutation(&cur.m) {
            cur = cur.permuted(&permutation);
            steps.push(ReductionStep { op: ReductionOp::Sort { permutation }, class: cur.clone() });
        }
        if cur.d.is_negative() {
            break;
        }
        if cur.d < cur.top_three() {
            cur = cremona(&cur);
            steps.push(ReductionStep { op: ReductionOp::Cremona, class: cur.clone() });
            continue;
        }
        let negative: Vec<usize> = (0..cur.r()).filter(|&k| cur.m[k].is_negative()).collect();
        if negative.is_empty() {
            break;
        }
        for k in negative {
            let amount = -&cur.m[k];
            cur.m[k] = BigInt::zero();
            steps.push(ReductionStep {
                op: ReductionOp::Clamp { index: k + 1, amount: amount.to_string() },
                class: cur.clone(),
            });
        }
    }
    ReductionTrace { input: x.clone(), steps, output: cur }
}

/// Amount removed by a clamp step.
pub fn clamp_amount(op: &ReductionOp) -> Option<(usize, BigInt)> {
    match op {
        ReductionOp::Clamp { index, amount } => {
            Some((*index, amount.parse().expect("clamp amounts are written as integers")))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(d: i64, m: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(d, m).unwrap()
    }

    fn reflect_by_formula(x: &DivisorClass, i: usize) -> DivisorClass {
        let rho = root(x.r(), i).unwrap();
        let k = x.dot(&rho);
        x + &(&k * &rho)
    }

    #[test]
    fn canonical_and_roots() {
        let k = canonical_class(9).unwrap();
        assert_eq!(k.square(), BigInt::from(0));
        assert_eq!(canonical_class(8).unwrap().square(), BigInt::from(1));
        for r in 3..12 {
            let k = canonical_class(r).unwrap();
            for i in 0..r {
                let rho = root(r, i).unwrap();
                assert_eq!(rho.square(), BigInt::from(-2));
                assert_eq!(rho.dot(&k), BigInt::from(0));
            }
        }
        assert!(root(2, 0).is_err());
        assert!(root(2, 1).is_ok());
        assert!(root(3, 3).is_err());
    }

    #[test]
    fn cremona_example() {
        let x = c(4, &[2, 2, 2, 1]);
        assert_eq!(reflect(&x, 0).unwrap(), c(2, &[0, 0, 0, 1]));
        assert_eq!(reflect(&x, 0).unwrap(), reflect_by_formula(&x, 0));
    }

    #[test]
    fn intersect_mismatch() {
        assert_eq!(
            intersect(&c(1, &[0]), &c(1, &[0, 0])),
            Err(Error::Dimension { left: 1, right: 2 })
        );
    }

    #[test]
    fn parse_and_display() {
        let x: DivisorClass = "5; 2, 2, 1".parse().unwrap();
        assert_eq!(x, c(5, &[2, 2, 1]));
        assert_eq!(x.to_string(), "(5; 2, 2, 1)");
        assert_eq!(x.to_string().parse::<DivisorClass>().unwrap(), x);
        assert!("5".parse::<DivisorClass>().is_err());
    }

    #[test]
    fn json_round_trip_big() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = DivisorClass::new(big.clone(), vec![big.clone(), BigInt::from(-3)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, format!("{{\"d\":{big},\"m\":[{big},-3]}}"));
        let back: DivisorClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn reduce_small_cases() {
        // Two points of multiplicity 2 in degree 3: the line through them splits off.
        let t = chamber_reduce(&c(3, &[2, 2]));
        assert!(t.ends_nonnegative());
        assert_eq!(t.replay(), t.output);
        let t = chamber_reduce(&c(3, &[2, 2, 2]));
        assert!(t.ends_nonnegative());
        assert!(t.output.is_zero());
        let t = chamber_reduce(&c(3, &[2, 2, 2, 2]));
        assert!(!t.ends_nonnegative());
        // Nine double points in degree 6 reduce to twice the cubic.
        let t = chamber_reduce(&DivisorClass::uniform(9, 6, 2).unwrap());
        assert_eq!(t.output, DivisorClass::uniform(9, 6, 2).unwrap());
        assert_eq!(t.steps.len(), 0);
    }

    fn class_strategy() -> impl Strategy<Value = DivisorClass> {
        (1usize..=12)
            .prop_flat_map(|r| (-20i64..60, proptest::collection::vec(-8i64..25, r)))
            .prop_map(|(d, m)| c(d, &m))
    }

    proptest! {
        #[test]
        fn reflections_match_formula_and_preserve_form(x in class_strategy(), y_seed in -5i64..5) {
            let r = x.r();
            let y = DivisorClass::uniform(r, y_seed, 1).unwrap();
            let first = if r >= 3 { 0 } else { 1 };
            for i in first..r {
                let sx = reflect(&x, i).unwrap();
                prop_assert_eq!(&sx, &reflect_by_formula(&x, i));
                prop_assert_eq!(reflect(&sx, i).unwrap(), x.clone());
                prop_assert_eq!(sx.dot(&reflect(&y, i).unwrap()), x.dot(&y));
                let k = canonical_class(r).unwrap();
                prop_assert_eq!(sx.dot(&k), x.dot(&k));
            }
        }

        #[test]
        fn reduction_invariants(x in class_strategy()) {
            let t = chamber_reduce(&x);
            let y = &t.output;
            prop_assert_eq!(t.replay(), y.clone());
            prop_assert!(y.degree().is_negative() || *y.degree() >= y.top_three());
            prop_assert!(t.cremona_steps() as i64 <= x.degree().max(&BigInt::zero()).to_i64().unwrap() + 1);
            let mut last = x.degree().clone();
            for s in &t.steps {
                if matches!(s.op, ReductionOp::Cremona) {
                    prop_assert!(*s.class.degree() < last);
                }
                last = s.class.degree().clone();
            }
            if !y.degree().is_negative() {
                prop_assert!(y.mults().iter().all(|v| !v.is_negative()));
            }
        }

        #[test]
        fn words_act_as_isometries(x in class_strategy(), word in proptest::collection::vec(0usize..12, 0..12)) {
            let r = x.r();
            let first = if r >= 3 { 0 } else { 1 };
            if first >= r { return Ok(()); }
            let letters: Vec<usize> = word.into_iter().map(|i| first + i % (r - first)).collect();
            let w = WeylWord::new(letters, r).unwrap();
            let wx = apply_word(&x, &w).unwrap();
            prop_assert_eq!(wx.square(), x.square());
            prop_assert_eq!(apply_word(&wx, &w.inverse()).unwrap(), x);
        }

        #[test]
        fn pull_back_inverts_the_linear_steps(x in class_strategy()) {
            prop_assume!(x.r() >= 3);
            let t = chamber_reduce(&x);
            if t.clamp_count() == 0 {
                prop_assert_eq!(t.pull_back(t.steps.len(), &t.output), x);
            }
        }
    }
}
