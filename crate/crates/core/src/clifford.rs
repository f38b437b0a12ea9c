//! Real Clifford algebra Cl(7) on the 8-dimensional real spin module.
//!
//! Generators satisfy `γ_i γ_j + γ_j γ_i = −2δ_ij` and are antisymmetric, so
//! vectors act skew-symmetrically and 3-forms symmetrically. All generators
//! are signed permutation matrices, which keeps form actions exact and cheap.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, Metric, DIM};
use crate::linalg::{Matrix, SpanBasis};
use crate::scalar::Scalar;

pub const SPIN_DIM: usize = 8;

/// Sign fixed so that the spinor of a G2-form induces that same form.
pub const INDUCED_FORM_SIGN: i64 = -1;

/// `γ e_c = ±e_{target[c]}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedPerm {
    target: [u8; SPIN_DIM],
    negative: [bool; SPIN_DIM],
}

impl SignedPerm {
    fn identity() -> Self {
        SignedPerm {
            target: std::array::from_fn(|i| i as u8),
            negative: [false; SPIN_DIM],
        }
    }

    /// `self ∘ other`.
    fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let mut out = SignedPerm::identity();
        for c in 0..SPIN_DIM {
            let mid = other.target[c] as usize;
            out.target[c] = self.target[mid];
            out.negative[c] = other.negative[c] ^ self.negative[mid];
        }
        out
    }

    fn negated(&self) -> SignedPerm {
        SignedPerm {
            target: self.target,
            negative: self.negative.map(|n| !n),
        }
    }

    fn from_dense(m: &[[i8; SPIN_DIM]; SPIN_DIM]) -> SignedPerm {
        let mut out = SignedPerm::identity();
        for c in 0..SPIN_DIM {
            let rows: Vec<usize> = (0..SPIN_DIM).filter(|&r| m[r][c] != 0).collect();
            assert_eq!(rows.len(), 1, "not a signed permutation");
            out.target[c] = rows[0] as u8;
            out.negative[c] = m[rows[0]][c] < 0;
        }
        out
    }

    fn apply_into<S: Scalar>(&self, coeff: &S, psi: &[S], out: &mut [S]) {
        for c in 0..SPIN_DIM {
            if psi[c].is_zero() {
                continue;
            }
            let v = coeff.clone() * psi[c].clone();
            let r = self.target[c] as usize;
            out[r] = if self.negative[c] {
                out[r].clone() - v
            } else {
                out[r].clone() + v
            };
        }
    }

    fn to_matrix<S: Scalar>(&self) -> Matrix<S> {
        let mut m = Matrix::zeros(SPIN_DIM, SPIN_DIM);
        for c in 0..SPIN_DIM {
            m[(self.target[c] as usize, c)] = if self.negative[c] { -S::one() } else { S::one() };
        }
        m
    }
}

/// Vector in the real spin module.
#[derive(Clone, PartialEq)]
pub struct Spinor<S>(Vec<S>);

impl<S: Scalar> Spinor<S> {
    pub fn new(components: Vec<S>) -> Self {
        assert_eq!(components.len(), SPIN_DIM, "spinors have 8 components");
        Spinor(components)
    }

    pub fn zero() -> Self {
        Spinor(vec![S::zero(); SPIN_DIM])
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> S {
        crate::linalg::dot(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn scale(&self, k: &S) -> Self {
        Spinor(self.0.iter().map(|x| x.clone() * k.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Spinor(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Spinor(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(S::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(S::abs_f64).fold(0.0, f64::max)
    }

    /// Unit spinor in the direction of `self`, first nonzero component positive.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm_sq().sqrt()?;
        let lead = self.0.iter().find(|x| !x.is_zero())?;
        let norm = if lead.to_f64() < 0.0 { -norm } else { norm };
        Some(self.scale(&norm.inv()?))
    }

    /// `λ` with `other = λ·self`, if the two are proportional.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        let n = self.norm_sq();
        let lambda = other.dot(self).div(&n)?;
        other.sub(&self.scale(&lambda)).is_zero().then_some(lambda)
    }
}

impl<S: Scalar> fmt::Debug for Spinor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "Spinor[{}]", parts.join(", "))
    }
}

/// Subspace of the spin module with an explicit basis.
#[derive(Clone)]
pub struct SpinorSubspace<S> {
    pub basis: Vec<Spinor<S>>,
}

impl<S: Scalar> fmt::Debug for SpinorSubspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.basis).finish()
    }
}

impl<S: Scalar> SpinorSubspace<S> {
    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    fn span(&self) -> SpanBasis<S> {
        let mut span = SpanBasis::new(SPIN_DIM);
        for v in &self.basis {
            span.insert(v.components());
        }
        span
    }

    pub fn contains(&self, psi: &Spinor<S>) -> bool {
        self.span().contains(psi.components())
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v))
    }

    pub fn direct_sum(parts: &[&Self]) -> Self {
        SpinorSubspace {
            basis: parts.iter().flat_map(|p| p.basis.iter().cloned()).collect(),
        }
    }
}

/// Σ = Σ1 ⊕ Σ3 ⊕ Σ4 with Σ1 = RΨ0, Σ3 = T^v·Ψ0, Σ4 = T^h·Ψ0.
#[derive(Clone)]
pub struct SpinorSplitting<S> {
    pub sigma1: SpinorSubspace<S>,
    pub sigma3: SpinorSubspace<S>,
    pub sigma4: SpinorSubspace<S>,
}

impl<S: Scalar> SpinorSplitting<S> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.sigma1.dim(), self.sigma3.dim(), self.sigma4.dim())
    }
}

/// The standard G2 3-form in the adapted coframe:
/// `η123 − η145 − η167 − η246 + η257 − η347 − η356`.
pub fn standard_g2_form<S: Scalar>() -> Form<S> {
    Form::from_terms(&[
        (1, &[1, 2, 3]),
        (-1, &[1, 4, 5]),
        (-1, &[1, 6, 7]),
        (-1, &[2, 4, 6]),
        (1, &[2, 5, 7]),
        (-1, &[3, 4, 7]),
        (-1, &[3, 5, 6]),
    ])
}

/// Seven anticommuting generators acting on R⁸.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    gammas: [SignedPerm; DIM],
    blades: Vec<SignedPerm>,
}

// Tensor factors: J is the 2x2 rotation, K = diag(1,-1), L the swap.
const FACTORS: [&str; DIM] = ["IIJ", "IJK", "JIL", "JKK", "JLK", "KJL", "LJL"];

fn factor(c: char) -> [[i8; 2]; 2] {
    match c {
        'I' => [[1, 0], [0, 1]],
        'J' => [[0, -1], [1, 0]],
        'K' => [[1, 0], [0, -1]],
        'L' => [[0, 1], [1, 0]],
        _ => unreachable!(),
    }
}

fn tensor_generator(word: &str) -> SignedPerm {
    let mut m = [[0i8; SPIN_DIM]; SPIN_DIM];
    let f: Vec<[[i8; 2]; 2]> = word.chars().map(factor).collect();
    for r in 0..SPIN_DIM {
        for c in 0..SPIN_DIM {
            let bit = |x: usize, k: usize| (x >> (2 - k)) & 1;
            m[r][c] = (0..3).map(|k| f[k][bit(r, k)][bit(c, k)]).product();
        }
    }
    SignedPerm::from_dense(&m)
}

impl CliffordRep {
    /// Generators from threefold tensor products of real 2x2 matrices,
    /// oriented so that the standard G2-form acts with eigenvalue −7.
    pub fn build() -> Self {
        let rep = Self::from_generators(FACTORS.map(tensor_generator));
        if rep.omega_has_eigenvalue(-7) {
            rep
        } else {
            rep.negated()
        }
    }

    /// Unoriented tensor-product generators.
    pub fn tensor_construction() -> Self {
        Self::from_generators(FACTORS.map(tensor_generator))
    }

    fn from_generators(gammas: [SignedPerm; DIM]) -> Self {
        let blades = (0..1u8 << DIM)
            .map(|bits| {
                Blade::from_bits(bits)
                    .indices()
                    .iter()
                    .fold(SignedPerm::identity(), |acc, &i| acc.compose(&gammas[i]))
            })
            .collect();
        CliffordRep { gammas, blades }
    }

    /// The other irreducible representation: all generators negated.
    pub fn negated(&self) -> Self {
        Self::from_generators(self.gammas.map(|g| g.negated()))
    }

    fn omega_has_eigenvalue(&self, lambda: i64) -> bool {
        let m = self.form_matrix::<crate::scalar::Surd>(&standard_g2_form(), &Metric::unit());
        let shifted = m.sub(&Matrix::identity(SPIN_DIM).scale(&crate::scalar::Surd::integer(lambda)));
        shifted.kernel().len() == 1
    }

    pub fn gamma<S: Scalar>(&self, i: usize) -> Matrix<S> {
        self.gammas[i].to_matrix()
    }

    /// Matrix of `γ_{i_1} ⋯ γ_{i_k}` for the blade `η_{i_1 … i_k}`.
    pub fn blade_matrix<S: Scalar>(&self, blade: Blade) -> Matrix<S> {
        self.blades[blade.bits() as usize].to_matrix()
    }

    /// `γ_1 γ_2 ⋯ γ_7` as a multiple of the identity, if it is one.
    pub fn volume_element_sign(&self) -> Option<i64> {
        let vol = self.blades[Blade::VOLUME.bits() as usize];
        let scalar =
            (0..SPIN_DIM).all(|c| vol.target[c] as usize == c) && vol.negative.iter().all(|&n| n == vol.negative[0]);
        scalar.then(|| if vol.negative[0] { -1 } else { 1 })
    }

    /// Clifford action of a form written in the coframe `η`; blade `η_I`
    /// acts as `(Π_{i∈I} w_i⁻¹) γ_I` in the orthonormal frame of `metric`.
    pub fn form_matrix<S: Scalar>(&self, form: &Form<S>, metric: &Metric<S>) -> Matrix<S> {
        let mut m = Matrix::<S>::zeros(SPIN_DIM, SPIN_DIM);
        for (b, c) in form.terms() {
            let k = b
                .indices()
                .into_iter()
                .fold(c.clone(), |acc, i| acc * metric.inverse_weight(i).clone());
            let op = &self.blades[b.bits() as usize];
            for col in 0..SPIN_DIM {
                let r = op.target[col] as usize;
                let v = if op.negative[col] { -k.clone() } else { k.clone() };
                m[(r, col)] = m[(r, col)].clone() + v;
            }
        }
        m
    }

    /// `form · ψ` with the unit metric.
    pub fn act<S: Scalar>(&self, form: &Form<S>, psi: &Spinor<S>) -> Spinor<S> {
        self.act_in(form, psi, &Metric::unit())
    }

    pub fn act_in<S: Scalar>(&self, form: &Form<S>, psi: &Spinor<S>, metric: &Metric<S>) -> Spinor<S> {
        let mut out = vec![S::zero(); SPIN_DIM];
        for (b, c) in form.terms() {
            let k = b
                .indices()
                .into_iter()
                .fold(c.clone(), |acc, i| acc * metric.inverse_weight(i).clone());
            self.blades[b.bits() as usize].apply_into(&k, psi.components(), &mut out);
        }
        Spinor(out)
    }

    /// `X · ψ` for a vector with coordinates in the frame dual to `η`.
    pub fn vector_act<S: Scalar>(&self, v: &[S], psi: &Spinor<S>, metric: &Metric<S>) -> Spinor<S> {
        let mut out = vec![S::zero(); SPIN_DIM];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                self.gammas[i].apply_into(&(x.clone() * metric.weight(i).clone()), psi.components(), &mut out);
            }
        }
        Spinor(out)
    }

    /// `e_i · ψ` for the i-th vector of the orthonormal frame.
    pub fn unit_vector_act<S: Scalar>(&self, i: usize, psi: &Spinor<S>) -> Spinor<S> {
        let mut out = vec![S::zero(); SPIN_DIM];
        self.gammas[i].apply_into(&S::one(), psi.components(), &mut out);
        Spinor(out)
    }

    /// Spin lift `σ(A) = ¼ Σ_{i,j} A_{ji} γ_i γ_j` of an antisymmetric matrix
    /// in an orthonormal frame, normalized so that `[σ(A), X·] = (AX)·`.
    pub fn spin_lift<S: Scalar>(&self, a: &Matrix<S>) -> Result<Matrix<S>> {
        if a.rows() != DIM || !a.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        let mut m = Matrix::zeros(SPIN_DIM, SPIN_DIM);
        let half = S::frac(1, 2);
        for i in 0..DIM {
            for j in i + 1..DIM {
                let c = &a[(j, i)];
                if c.is_zero() {
                    continue;
                }
                let b = Blade::from_indices(&[i, j]).expect("distinct");
                m = m.add(&self.blade_matrix::<S>(b).scale(&(c.clone() * half.clone())));
            }
        }
        Ok(m)
    }

    /// Unit kernel vector of `ω + 7`, which must be one-dimensional.
    pub fn canonical_spinor<S: Scalar>(&self, omega: &Form<S>, metric: &Metric<S>) -> Result<Spinor<S>> {
        let eig = eigenspace(&self.form_matrix(omega, metric), &S::from_i64(-7));
        if eig.len() != 1 {
            return Err(Error::EigenvalueNotSimple {
                eigenvalue: -7,
                multiplicity: eig.len(),
            });
        }
        Spinor::new(eig.into_iter().next().expect("one vector"))
            .normalized()
            .ok_or_else(|| Error::NotUnitSpinor("norm not representable".into()))
    }

    /// The 3-form with coefficients `ε (γ_i γ_j γ_k ψ, ψ)` in the orthonormal
    /// coframe of `metric`, rewritten in the coframe `η`.
    pub fn induced_g2_form<S: Scalar>(&self, psi: &Spinor<S>, metric: &Metric<S>) -> Result<Form<S>> {
        let n = psi.norm_sq();
        if !(n.clone() - S::one()).is_zero() {
            return Err(Error::NotUnitSpinor(n.to_string()));
        }
        let eps = S::from_i64(INDUCED_FORM_SIGN);
        let mut form = Form::zero();
        for bits in 0..1u8 << DIM {
            let b = Blade::from_bits(bits);
            if b.grade() != 3 {
                continue;
            }
            let mut image = vec![S::zero(); SPIN_DIM];
            self.blades[bits as usize].apply_into(&S::one(), psi.components(), &mut image);
            let c = Spinor(image).dot(psi) * eps.clone();
            let c = b.indices().into_iter().fold(c, |acc, i| acc * metric.weight(i).clone());
            form.add_term(b, c);
        }
        Ok(form)
    }

    /// `Σ1 = RΨ0`, `Σ3 = {X·Ψ0 : X vertical}`, `Σ4 = {X·Ψ0 : X horizontal}`.
    pub fn split_spinor_module<S: Scalar>(&self, psi0: &Spinor<S>, vertical: &[usize]) -> SpinorSplitting<S> {
        let along = |idx: Vec<usize>| SpinorSubspace {
            basis: idx.into_iter().map(|i| self.unit_vector_act(i, psi0)).collect(),
        };
        SpinorSplitting {
            sigma1: SpinorSubspace {
                basis: vec![psi0.clone()],
            },
            sigma3: along(vertical.to_vec()),
            sigma4: along((0..DIM).filter(|i| !vertical.contains(i)).collect()),
        }
    }

    /// Spinors with `4 T² ψ = value · ψ`, where `value = 2 Scal + |T|²`.
    pub fn casimir_condition_eigenspace<S: Scalar>(
        &self,
        torsion: &Form<S>,
        value: &S,
        metric: &Metric<S>,
    ) -> SpinorSubspace<S> {
        let t = self.form_matrix(torsion, metric);
        let four_t_sq = t.mul(&t).scale(&S::from_i64(4));
        SpinorSubspace {
            basis: eigenspace(&four_t_sq, value).into_iter().map(Spinor::new).collect(),
        }
    }
}

/// Kernel of `M − λ`.
pub fn eigenspace<S: Scalar>(m: &Matrix<S>, lambda: &S) -> Vec<Vec<S>> {
    m.sub(&Matrix::identity(m.rows()).scale(lambda)).kernel()
}

/// Transfers an endomorphism given in the frame `e_i` (dual to `η`) to the
/// orthonormal frame `e_i / w_i`.
pub fn to_orthonormal<S: Scalar>(a: &Matrix<S>, metric: &Metric<S>) -> Matrix<S> {
    Matrix::from_fn(DIM, DIM, |r, c| {
        a[(r, c)].clone() * metric.weight(r).clone() * metric.inverse_weight(c).clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;

    fn rep() -> CliffordRep {
        CliffordRep::build()
    }

    #[test]
    fn anticommutation_relations() {
        let r = rep();
        for i in 0..DIM {
            for j in 0..DIM {
                let gi = r.gamma::<Surd>(i);
                let gj = r.gamma::<Surd>(j);
                let anti = gi.mul(&gj).add(&gj.mul(&gi));
                let expected = if i == j {
                    Matrix::identity(SPIN_DIM).scale(&Surd::integer(-2))
                } else {
                    Matrix::zeros(SPIN_DIM, SPIN_DIM)
                };
                assert_eq!(anti, expected, "pair ({i},{j})");
            }
            assert!(r.gamma::<Surd>(i).is_antisymmetric());
        }
    }

    #[test]
    fn gamma_squares_to_minus_one() {
        let g = rep().gamma::<Surd>(0);
        assert_eq!(g.mul(&g), Matrix::identity(8).scale(&Surd::integer(-1)));
    }

    #[test]
    fn volume_element_is_central() {
        // recorded sign of γ1⋯γ7 in the oriented representation
        assert_eq!(rep().volume_element_sign(), Some(1));
        assert_eq!(rep().negated().volume_element_sign(), Some(-1));
    }

    #[test]
    fn standard_form_spectrum() {
        let r = rep();
        let m = r.form_matrix::<Surd>(&standard_g2_form(), &Metric::unit());
        assert_eq!(eigenspace(&m, &Surd::integer(-7)).len(), 1);
        assert_eq!(eigenspace(&m, &Surd::integer(1)).len(), 7);
        let n = r.negated().form_matrix::<Surd>(&standard_g2_form(), &Metric::unit());
        assert_eq!(eigenspace(&n, &Surd::integer(7)).len(), 1);
    }

    #[test]
    fn canonical_spinor_is_unit_and_rejects_non_g2() {
        let r = rep();
        let g = Metric::unit();
        let omega = standard_g2_form::<Surd>();
        let psi = r.canonical_spinor(&omega, &g).unwrap();
        assert_eq!(psi.norm_sq(), Surd::one());
        assert_eq!(r.act(&omega, &psi), psi.scale(&Surd::integer(-7)));
        let perturbed = omega + Form::eta(&[1, 2]);
        assert!(matches!(
            r.canonical_spinor(&perturbed, &g),
            Err(Error::EigenvalueNotSimple { .. })
        ));
    }

    #[test]
    fn spin_lift_of_elementary_rotation() {
        // rotation e1 -> e2 lifts to ½γ1γ2
        let r = rep();
        let mut a = Matrix::<Surd>::zeros(7, 7);
        a[(1, 0)] = Surd::one();
        a[(0, 1)] = -Surd::one();
        let half_g12 = r.gamma::<Surd>(0).mul(&r.gamma(1)).scale(&Surd::frac(1, 2));
        assert_eq!(r.spin_lift(&a).unwrap(), half_g12);
        // equivariance: [σ(A), e1·] = (A e1)· = e2·
        let s = r.spin_lift(&a).unwrap();
        assert_eq!(s.commutator(&r.gamma(0)), r.gamma(1));
        let mut bad = a.clone();
        bad[(0, 1)] = Surd::one();
        assert!(matches!(r.spin_lift(&bad), Err(Error::NotAntisymmetric)));
    }

    #[test]
    fn induced_form_calibration_and_unit_check() {
        let r = rep();
        let g = Metric::unit();
        let omega = standard_g2_form::<Surd>();
        let psi = r.canonical_spinor(&omega, &g).unwrap();
        assert_eq!(r.induced_g2_form(&psi, &g).unwrap(), omega);
        let doubled = psi.scale(&Surd::integer(2));
        assert!(matches!(r.induced_g2_form(&doubled, &g), Err(Error::NotUnitSpinor(_))));
    }

    #[test]
    fn vector_action_squares_to_minus_norm() {
        let r = rep();
        let g = Metric::unit();
        let psi = Spinor::new((1..=8).map(Surd::integer).collect());
        let v: Vec<Surd> = [1, -2, 0, 3, 0, 0, 1].map(Surd::integer).to_vec();
        let twice = r.vector_act(&v, &r.vector_act(&v, &psi, &g), &g);
        let n = g.vector_inner(&v, &v);
        assert_eq!(twice, psi.scale(&-n));
    }
}
