//! Exterior algebra of a 7-dimensional oriented vector space with a diagonal
//! metric.
//!
//! Blades are 7-bit masks: bit `i` set means `η_{i+1}` is a factor. Forms are
//! sparse maps from blades to coefficients and may mix degrees; operations
//! that need a single degree (Hodge star, inner product) check for it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const DIM: usize = 7;

/// Wedge product of distinct coframe elements, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);
    pub const VOLUME: Blade = Blade(0x7f);

    pub fn from_bits(bits: u8) -> Self {
        assert!(bits < 1 << DIM, "blade index out of range");
        Blade(bits)
    }

    /// Blade from zero-based coframe indices; `None` if an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u8;
        for &i in indices {
            assert!(i < DIM, "coframe index out of range");
            if bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(Blade(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Zero-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn complement(self) -> Blade {
        Blade(!self.0 & 0x7f)
    }

    /// Sign and blade of `self ∧ other`, `None` if they share a factor.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((swaps % 2 == 1, Blade(self.0 | other.0)))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let digits = text
            .trim()
            .trim_start_matches("eta")
            .trim_start_matches('η')
            .trim_start_matches('e');
        if digits == "1" && text.trim() == "1" {
            return Ok(Blade::SCALAR);
        }
        let mut indices = Vec::new();
        for c in digits.chars() {
            match c.to_digit(10) {
                Some(d @ 1..=7) => indices.push(d as usize - 1),
                _ => return Err(Error::Parse(format!("bad blade {text:?}"))),
            }
        }
        Blade::from_indices(&indices).ok_or_else(|| Error::Parse(format!("repeated index in {text:?}")))
    }
}

impl Ord for Blade {
    /// Grade first, then lexicographic in the index list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "η")?;
        for i in self.indices() {
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    /// The zero form, compatible with every degree.
    Zero,
    Homogeneous(usize),
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            _ => Err(Error::Parse(format!("orientation must be ±1, got {sign}"))),
        }
    }
}

/// Diagonal metric: `(w_1 η_1, …, w_7 η_7)` is an orthonormal coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    weights: [S; DIM],
    inverse: [S; DIM],
    orientation: Orientation,
}

impl<S: Scalar> Metric<S> {
    pub fn new(weights: [S; DIM], orientation: Orientation) -> Result<Self> {
        if weights.iter().any(|w| w.is_zero() || w.to_f64() <= 0.0) {
            return Err(Error::Config("metric weights must be positive".into()));
        }
        let inverse = weights.clone().map(|w| w.inv().expect("nonzero weight"));
        Ok(Metric {
            weights,
            inverse,
            orientation,
        })
    }

    pub fn unit() -> Self {
        Self::new(std::array::from_fn(|_| S::one()), Orientation::Positive).expect("unit weights")
    }

    /// Weights `(s, s, s, 1, 1, 1, 1)`: the first three directions scaled by `s`.
    pub fn squashed(s: S) -> Result<Self> {
        Self::new(
            std::array::from_fn(|i| if i < 3 { s.clone() } else { S::one() }),
            Orientation::Positive,
        )
    }

    pub fn weights(&self) -> &[S; DIM] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &S {
        &self.weights[i]
    }

    pub fn inverse_weight(&self, i: usize) -> &S {
        &self.inverse[i]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// `|η_I|² = Π_{i∈I} w_i⁻²`.
    pub fn blade_norm_sq(&self, blade: Blade) -> S {
        blade.indices().into_iter().fold(S::one(), |acc, i| {
            acc * self.inverse[i].clone() * self.inverse[i].clone()
        })
    }

    /// Riemannian volume form `± w_1⋯w_7 η_{1…7}`.
    pub fn volume(&self) -> Form<S> {
        let w = self.weights.iter().fold(S::one(), |acc, w| acc * w.clone());
        Form::blade(Blade::VOLUME, w * S::from_i64(self.orientation.sign()))
    }

    /// `g(u, v) = Σ w_i² u_i v_i` for vectors in the frame dual to `η`.
    pub fn vector_inner(&self, u: &[S], v: &[S]) -> S {
        (0..DIM).fold(S::zero(), |acc, i| {
            acc + self.weights[i].clone() * self.weights[i].clone() * u[i].clone() * v[i].clone()
        })
    }
}

/// Element of the exterior algebra, possibly of mixed degree.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> Default for Form<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero() -> Self {
        Form { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::blade(Blade::SCALAR, c)
    }

    pub fn blade(blade: Blade, coeff: S) -> Self {
        let mut f = Self::zero();
        f.add_term(blade, coeff);
        f
    }

    /// `η_{i j …}` from one-based indices, as written in formulas.
    pub fn eta(indices: &[usize]) -> Self {
        let zero_based: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        let mut sorted = zero_based.clone();
        sorted.sort_unstable();
        let Some(blade) = Blade::from_indices(&zero_based) else {
            return Self::zero();
        };
        let sign = permutation_is_odd(&zero_based);
        Self::blade(blade, if sign { -S::one() } else { S::one() })
    }

    /// Sum of `(coeff, one-based indices)` terms.
    pub fn from_terms(terms: &[(i64, &[usize])]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (c, idx)| {
            acc + Self::eta(idx).scale(&S::from_i64(*c))
        })
    }

    pub fn add_term(&mut self, blade: Blade, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&blade) {
            Some(existing) => existing + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(blade, sum);
        }
    }

    pub fn coefficient(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> Degree {
        let mut grades = self.terms.keys().map(|b| b.grade());
        let Some(first) = grades.next() else {
            return Degree::Zero;
        };
        if grades.all(|g| g == first) {
            Degree::Homogeneous(first)
        } else {
            Degree::Mixed
        }
    }

    fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.dedup();
        g
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, c.clone() * k.clone());
        }
        out
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        let mut out = Form::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    /// Degree-`k` part.
    pub fn grade_project(&self, k: usize) -> Self {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((negative, blade)) = a.wedge(*b) {
                    let c = x.clone() * y.clone();
                    out.add_term(blade, if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// `e_i ⨼ self` for the frame vector dual to `η_{i+1}`.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            if !b.contains(i) {
                continue;
            }
            let below = (b.bits() & ((1u8 << i) - 1)).count_ones();
            let rest = Blade::from_bits(b.bits() & !(1 << i));
            out.add_term(rest, if below % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// `v ⨼ self` for a vector with frame coordinates `v`.
    pub fn interior(&self, v: &[S]) -> Self {
        assert_eq!(v.len(), DIM, "vector must have 7 components");
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .fold(Self::zero(), |acc, (i, x)| acc + self.interior_basis(i).scale(x))
    }

    /// `self(e_{i_1}, …, e_{i_k})` for zero-based frame indices in any order.
    pub fn evaluate(&self, indices: &[usize]) -> S {
        match Blade::from_indices(indices) {
            None => S::zero(),
            Some(b) => {
                let c = self.coefficient(b);
                if permutation_is_odd(indices) {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Hodge star with respect to `metric`; rejects mixed degrees.
    pub fn hodge(&self, metric: &Metric<S>) -> Result<Self> {
        if self.degree() == Degree::Mixed {
            return Err(Error::MixedDegree(self.grades()));
        }
        let o = S::from_i64(metric.orientation().sign());
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            let comp = b.complement();
            let (negative, _) = b.wedge(comp).expect("complementary blades");
            let mut k = c.clone() * o.clone();
            for i in b.indices() {
                k = k * metric.inverse_weight(i).clone();
            }
            for j in comp.indices() {
                k = k * metric.weight(j).clone();
            }
            out.add_term(comp, if negative { -k } else { k });
        }
        Ok(out)
    }

    /// Inner product induced by the metric, unit blades of the orthonormal
    /// coframe being orthonormal.
    pub fn inner(&self, other: &Self, metric: &Metric<S>) -> Result<S> {
        match (self.degree(), other.degree()) {
            (Degree::Mixed, _) => return Err(Error::MixedDegree(self.grades())),
            (_, Degree::Mixed) => return Err(Error::MixedDegree(other.grades())),
            (Degree::Homogeneous(a), Degree::Homogeneous(b)) if a != b => return Err(Error::DegreeMismatch(a, b)),
            _ => {}
        }
        Ok(self
            .terms
            .iter()
            .fold(S::zero(), |acc, (b, x)| match other.terms.get(b) {
                Some(y) => acc + x.clone() * y.clone() * metric.blade_norm_sq(*b),
                None => acc,
            }))
    }

    pub fn norm_sq(&self, metric: &Metric<S>) -> Result<S> {
        self.inner(self, metric)
    }

    /// Natural action of an endomorphism `A` (matrix in the frame `e_i`) as a
    /// derivation: `(A·α)(Y_1, …, Y_k) = −Σ α(…, A Y_r, …)`.
    ///
    /// A connection map `Λ(X)` acting this way gives `∇_X α` for invariant `α`.
    pub fn endomorphism_action(&self, a: &Matrix<S>) -> Self {
        assert!(a.rows() == DIM && a.cols() == DIM, "expected a 7x7 matrix");
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            let idx = b.indices();
            for (r, &i) in idx.iter().enumerate() {
                let rest = Blade::from_bits(b.bits() & !(1 << i));
                for l in 0..DIM {
                    let entry = &a[(i, l)];
                    if entry.is_zero() || rest.contains(l) {
                        continue;
                    }
                    // η_l sits at slot r; move it to its sorted slot
                    let pos = (rest.bits() & ((1u8 << l) - 1)).count_ones() as usize;
                    let odd = pos.abs_diff(r) % 2 == 1;
                    let k = -(c.clone() * entry.clone());
                    out.add_term(Blade::from_bits(rest.bits() | (1 << l)), if odd { -k } else { k });
                }
            }
        }
        out
    }

    /// `{degree → {blade → coefficient}}` with string keys and values.
    pub fn to_json_map(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let mut out: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.grade().to_string())
                .or_default()
                .insert(b.to_string(), c.to_string());
        }
        out
    }

    pub fn from_json_map(map: &BTreeMap<String, BTreeMap<String, String>>) -> Result<Self> {
        let mut out = Self::zero();
        for (degree, blades) in map {
            let degree: usize = degree
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree key {degree:?}")))?;
            for (blade, coeff) in blades {
                let b = Blade::parse(blade)?;
                if b.grade() != degree {
                    return Err(Error::Parse(format!("blade {blade} listed under degree {degree}")));
                }
                out.add_term(b, S::parse(coeff)?);
            }
        }
        Ok(out)
    }
}

fn permutation_is_odd(seq: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let c = c.to_string();
                match c.as_str() {
                    "1" => b.to_string(),
                    "-1" => format!("-{b}"),
                    _ => format!("({c})·{b}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{self}]")
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;

    fn add(mut self, rhs: Form<S>) -> Form<S> {
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;

    fn add(self, rhs: &Form<S>) -> Form<S> {
        self.clone() + rhs.clone()
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;

    fn neg(self) -> Form<S> {
        Form {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;

    fn sub(self, rhs: Form<S>) -> Form<S> {
        self + (-rhs)
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;

    fn sub(self, rhs: &Form<S>) -> Form<S> {
        self.clone() - rhs.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;
    use num_rational::BigRational;

    type F = Form<Surd>;

    fn eta(idx: &[usize]) -> F {
        F::eta(idx)
    }

    #[test]
    fn basis_wedge_and_nilpotency() {
        assert_eq!(eta(&[1]).wedge(&eta(&[2])), eta(&[1, 2]));
        assert_eq!(eta(&[2]).wedge(&eta(&[1])), -eta(&[1, 2]));
        assert!(eta(&[1]).wedge(&eta(&[1])).is_zero());
        assert_eq!(eta(&[3, 1, 2]), eta(&[1, 2, 3]));
        assert_eq!(eta(&[2, 1, 3]), -eta(&[1, 2, 3]));
    }

    #[test]
    fn interior_basics() {
        assert_eq!(eta(&[1, 2, 3]).interior_basis(0), eta(&[2, 3]));
        assert_eq!(eta(&[1, 2, 3]).interior_basis(1), -eta(&[1, 3]));
        assert!(eta(&[2, 3]).interior_basis(0).is_zero());
    }

    #[test]
    fn hodge_unit_metric() {
        let g = Metric::<Surd>::unit();
        assert_eq!(eta(&[1, 2, 3, 4, 5, 6, 7]).hodge(&g).unwrap(), F::constant(Surd::one()));
        assert_eq!(eta(&[1, 2, 3]).hodge(&g).unwrap(), eta(&[4, 5, 6, 7]));
        let f1 = eta(&[1, 2, 3]);
        assert_eq!(f1.wedge(&f1.hodge(&g).unwrap()), g.volume());
    }

    #[test]
    fn hodge_squashed_metric() {
        let t = BigRational::new(1.into(), 5.into());
        let s = Surd::sqrt(&t).unwrap();
        let g = Metric::squashed(s.clone()).unwrap();
        let s3 = s.clone() * s.clone() * s.clone();
        let unit3 = eta(&[1, 2, 3]).scale(&s3);
        assert_eq!(unit3.hodge(&g).unwrap(), eta(&[4, 5, 6, 7]));
        assert_eq!(unit3.norm_sq(&g).unwrap(), Surd::one());
    }

    #[test]
    fn hodge_rejects_mixed() {
        let mixed = F::constant(Surd::one()) + eta(&[1, 2]);
        assert!(matches!(mixed.hodge(&Metric::unit()), Err(Error::MixedDegree(_))));
        assert_eq!(mixed.grade_project(2), eta(&[1, 2]));
        assert_eq!(mixed.grade_project(0) + mixed.grade_project(2), mixed);
    }

    #[test]
    fn inner_degree_mismatch() {
        let g = Metric::<Surd>::unit();
        assert!(matches!(
            eta(&[1]).inner(&eta(&[1, 2]), &g),
            Err(Error::DegreeMismatch(1, 2))
        ));
        assert_eq!(eta(&[1]).inner(&F::zero(), &g).unwrap(), Surd::zero());
    }

    #[test]
    fn endomorphism_action_on_covectors() {
        // rotation e1 -> e2, e2 -> -e1 acts on η1 by (A·η1)(Y) = -η1(AY)
        let mut a = Matrix::<Surd>::zeros(7, 7);
        a[(1, 0)] = Surd::one();
        a[(0, 1)] = -Surd::one();
        assert_eq!(eta(&[1]).endomorphism_action(&a), eta(&[2]));
        assert_eq!(eta(&[2]).endomorphism_action(&a), -eta(&[1]));
        assert!(eta(&[1, 2]).endomorphism_action(&a).is_zero());
        assert_eq!(eta(&[1, 3]).endomorphism_action(&a), eta(&[2, 3]));
    }

    #[test]
    fn json_roundtrip() {
        let f = eta(&[1, 2, 3]) - eta(&[1, 4, 5]).scale(&Surd::frac(1, 2));
        let back = F::from_json_map(&f.to_json_map()).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.to_json_map()["3"]["η145"], "-1/2");
    }

    #[test]
    fn blade_parse_and_order() {
        assert_eq!(Blade::parse("η135").unwrap(), Blade::from_indices(&[0, 2, 4]).unwrap());
        assert!(Blade::parse("η18").is_err());
        assert!(Blade::parse("η11").is_err());
        assert!(Blade::parse("η12").unwrap() < Blade::parse("η123").unwrap());
        assert!(Blade::parse("η127").unwrap() < Blade::parse("η134").unwrap());
    }
}
