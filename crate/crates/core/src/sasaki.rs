//! The 7-sphere as `Sp(2)/Sp(1)` with its 3-Sasakian structure, the canonical
//! G2-structure and the squashed family `g^s`.
//!
//! Every identity is exposed as a [`CheckDef`]: a named statement paired
//! with a function computing its residual on a model.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Signed;

use crate::clifford::{eigenspace, standard_g2_form, to_orthonormal, CliffordRep, Spinor, SpinorSubspace, SPIN_DIM};
use crate::coset::{ConnectionMap, CosetSpace, CurvatureData};
use crate::error::{Error, Result};
use crate::exterior::{Form, Metric, Orientation, DIM};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Vertical directions `ξ1, ξ2, ξ3` as zero-based frame indices.
pub const VERTICAL: [usize; 3] = [0, 1, 2];
pub const HORIZONTAL: [usize; 4] = [3, 4, 5, 6];

pub const LABELS: [&str; 10] = ["ξ1", "ξ2", "ξ3", "e4", "e5", "e6", "e7", "ζ1", "ζ2", "ζ3"];

type Quat = [i64; 4];
type QMat = [[Quat; 2]; 2];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn unit(k: usize) -> Quat {
    let mut q = [0; 4];
    q[k] = 1;
    q
}

fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let mut c = [[[0; 4]; 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            for k in 0..2 {
                let p = qmul(a[r][k], b[k][col]);
                for (x, y) in c[r][col].iter_mut().zip(p) {
                    *x += y;
                }
            }
        }
    }
    c
}

/// Basis of `sp(2)`: `ξ_α = diag(u_α, 0)`, `e_{4+q} = [[0, q], [−q̄, 0]]`
/// for `q = 1, i, j, k`, and `ζ_α = diag(0, u_α)`.
fn sp2_basis(idx: usize) -> QMat {
    let zero = [0; 4];
    match idx {
        0..=2 => [[unit(idx + 1), zero], [zero, zero]],
        3..=6 => {
            let q = unit(idx - 3);
            [[zero, q], [qconj(q).map(|x| -x), zero]]
        }
        7..=9 => [[zero, zero], [zero, unit(idx - 6)]],
        _ => unreachable!("sp(2) has dimension 10"),
    }
}

fn sp2_coords(m: &QMat) -> [i64; 10] {
    debug_assert_eq!(m[0][0][0], 0);
    debug_assert_eq!(m[1][1][0], 0);
    debug_assert_eq!(m[1][0], qconj(m[0][1]).map(|x| -x));
    let mut c = [0; 10];
    c[..3].copy_from_slice(&m[0][0][1..]);
    c[3..7].copy_from_slice(&m[0][1]);
    c[7..].copy_from_slice(&m[1][1][1..]);
    c
}

/// Structure constants of `sp(2)` in the basis above; `h = span{ζ_α}`.
pub fn sp2_structure_constants() -> Vec<i64> {
    let n = 10;
    let mut consts = vec![0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (sp2_basis(a), sp2_basis(b));
            let xy = qmat_mul(&x, &y);
            let yx = qmat_mul(&y, &x);
            let mut br = xy;
            for r in 0..2 {
                for c in 0..2 {
                    for k in 0..4 {
                        br[r][c][k] -= yx[r][c][k];
                    }
                }
            }
            for (c, v) in sp2_coords(&br).into_iter().enumerate() {
                consts[(a * n + b) * n + c] = v;
            }
        }
    }
    consts
}

/// `Sp(2)/Sp(1)` with coframe weights `(s, s, s, 1, 1, 1, 1)`.
pub fn sphere_coset<S: Scalar>(s: &S) -> Result<CosetSpace<S>> {
    let consts = sp2_structure_constants().into_iter().map(S::from_i64).collect();
    let weights = (0..DIM).map(|i| if i < 3 { s.clone() } else { S::one() }).collect();
    CosetSpace::new(
        LABELS.map(String::from).to_vec(),
        consts,
        vec![7, 8, 9],
        weights,
        Orientation::Positive,
    )
}

/// Orthogonal decomposition of a 3-form into `Λ³_1 ⊕ Λ³_7 ⊕ Λ³_27`.
#[derive(Clone, Debug, PartialEq)]
pub struct G2TypeSplit<S: Scalar> {
    /// `τ_1 = p1 · ω`.
    pub p1: S,
    pub p7: Form<S>,
    pub p27: Form<S>,
}

/// Splits `τ` relative to the G2-form `ω`; `Λ³_7 = {*(α ∧ ω)}`.
pub fn type_split<S: Scalar>(tau: &Form<S>, omega: &Form<S>, metric: &Metric<S>) -> Result<G2TypeSplit<S>> {
    let p1 = tau
        .inner(omega, metric)?
        .div(&omega.norm_sq(metric)?)
        .ok_or_else(|| Error::Config("ω has zero norm".into()))?;
    let seven: Vec<Form<S>> = (1..=DIM)
        .map(|i| Form::eta(&[i]).wedge(omega).hodge(metric))
        .collect::<Result<_>>()?;
    let gram = Matrix::from_fn(DIM, DIM, |i, j| seven[i].inner(&seven[j], metric).expect("3-forms"));
    let rhs: Vec<S> = seven.iter().map(|v| tau.inner(v, metric)).collect::<Result<_>>()?;
    let coeffs = gram
        .solve(&rhs)
        .ok_or_else(|| Error::Config("Λ³_7 spanning set is degenerate".into()))?;
    let p7 = seven
        .iter()
        .zip(&coeffs)
        .fold(Form::zero(), |acc, (v, c)| acc + v.scale(c));
    let p27 = tau - &(omega.scale(&p1) + p7.clone());
    Ok(G2TypeSplit { p1, p7, p27 })
}

/// `T = −*dω + (1/6)(dω, *ω)·ω` for a cocalibrated G2-structure.
pub fn characteristic_torsion<S: Scalar>(
    space: &CosetSpace<S>,
    omega: &Form<S>,
    metric: &Metric<S>,
) -> Result<Form<S>> {
    let star = omega.hodge(metric)?;
    if !space.d_invariant(&star)?.is_zero() {
        return Err(Error::NotCocalibrated);
    }
    let d = space.d_invariant(omega)?;
    let pairing = d.inner(&star, metric)?;
    Ok(omega.scale(&(pairing * S::frac(1, 6))) - d.hodge(metric)?)
}

/// The model at parameter `t = s²` with all derived data.
pub struct SasakiModel<S: Scalar> {
    t: BigRational,
    s: S,
    space: CosetSpace<S>,
    metric: Metric<S>,
    phis: [Matrix<S>; 3],
    d_eta: [Form<S>; 3],
    f1: Form<S>,
    f2: Form<S>,
    omega_s: Form<S>,
    torsion: Form<S>,
    rep: CliffordRep,
    psi0: Spinor<S>,
    lc: ConnectionMap<S>,
    char_conn: ConnectionMap<S>,
    lc_curvature: OnceLock<CurvatureData<S>>,
    char_curvature: OnceLock<CurvatureData<S>>,
    holonomy: OnceLock<Result<Vec<Matrix<S>>>>,
}

impl<S: Scalar> fmt::Debug for SasakiModel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SasakiModel")
            .field("t", &self.t.to_string())
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> SasakiModel<S> {
    /// Builds the model for `t = s² > 0`.
    pub fn build(t: &BigRational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NonPositiveParameter(t.to_string()));
        }
        let s = S::sqrt_of(t);
        let space = sphere_coset(&s)?;
        let metric = space.metric()?;
        let phis = std::array::from_fn(|a| {
            Matrix::from_fn(DIM, DIM, |k, j| {
                let v = space.c(a, j, k).clone();
                if j < 3 {
                    v * S::frac(1, 2)
                } else {
                    v
                }
            })
        });
        let d_eta = [0, 1, 2].map(|a| space.d_invariant(&Form::eta(&[a + 1])).expect("dim m = 7"));
        let f1 = Form::eta(&[1, 2, 3]);
        let f2 = (0..3).fold(f1.scale(&S::from_i64(3)), |acc, a| {
            acc + Form::eta(&[a + 1]).wedge(&d_eta[a]).scale(&S::frac(1, 2))
        });
        let s3 = s.clone() * s.clone() * s.clone();
        let omega_s = f1.scale(&s3) + f2.scale(&s);
        let torsion = characteristic_torsion(&space, &omega_s, &metric)?;
        let rep = CliffordRep::build();
        let psi0 = rep.canonical_spinor(&omega_s, &metric)?;
        let lc = space.levi_civita();
        let char_conn = space.with_torsion(&lc, &torsion);
        Ok(SasakiModel {
            t: t.clone(),
            s,
            space,
            metric,
            phis,
            d_eta,
            f1,
            f2,
            omega_s,
            torsion,
            rep,
            psi0,
            lc,
            char_conn,
            lc_curvature: OnceLock::new(),
            char_curvature: OnceLock::new(),
            holonomy: OnceLock::new(),
        })
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn t_scalar(&self) -> S {
        S::from_ratio(&self.t)
    }

    pub fn s(&self) -> &S {
        &self.s
    }

    pub fn space(&self) -> &CosetSpace<S> {
        &self.space
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn phis(&self) -> &[Matrix<S>; 3] {
        &self.phis
    }

    pub fn d_eta(&self, alpha: usize) -> &Form<S> {
        &self.d_eta[alpha]
    }

    /// `(F1, F2, ω)` of the undeformed structure.
    pub fn canonical_structure(&self) -> (Form<S>, Form<S>, Form<S>) {
        (self.f1.clone(), self.f2.clone(), &self.f1 + &self.f2)
    }

    /// `(F1^s, F2^s, ω^s) = (s³F1, sF2, F1^s + F2^s)`.
    pub fn deformed_structure(&self) -> (Form<S>, Form<S>, Form<S>) {
        let s3 = self.s.clone() * self.s.clone() * self.s.clone();
        (self.f1.scale(&s3), self.f2.scale(&self.s), self.omega_s.clone())
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega_s
    }

    pub fn torsion(&self) -> &Form<S> {
        &self.torsion
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn psi0(&self) -> &Spinor<S> {
        &self.psi0
    }

    pub fn levi_civita(&self) -> &ConnectionMap<S> {
        &self.lc
    }

    pub fn characteristic_connection(&self) -> &ConnectionMap<S> {
        &self.char_conn
    }

    pub fn lc_curvature(&self) -> &CurvatureData<S> {
        self.lc_curvature.get_or_init(|| self.space.curvature(&self.lc))
    }

    pub fn char_curvature(&self) -> &CurvatureData<S> {
        self.char_curvature
            .get_or_init(|| self.space.curvature(&self.char_conn))
    }

    pub fn holonomy(&self) -> Result<&Vec<Matrix<S>>> {
        self.holonomy
            .get_or_init(|| self.space.holonomy_closure(&self.char_conn))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn d(&self, form: &Form<S>) -> Form<S> {
        self.space.d_invariant(form).expect("dim m = 7")
    }

    pub fn star(&self, form: &Form<S>) -> Form<S> {
        form.hodge(&self.metric).expect("homogeneous form")
    }

    pub fn inner(&self, a: &Form<S>, b: &Form<S>) -> Result<S> {
        a.inner(b, &self.metric)
    }

    /// `ω_1, ω_2, ω_3`: `½η_α∧dη_α − ½Σ_{β≠α} η_β∧dη_β`.
    pub fn nearly_parallel_forms(&self) -> [Form<S>; 3] {
        let half = S::frac(1, 2);
        let pieces: Vec<Form<S>> = (0..3)
            .map(|a| Form::eta(&[a + 1]).wedge(&self.d_eta[a]).scale(&half))
            .collect();
        [0, 1, 2].map(|a| {
            (0..3).fold(Form::zero(), |acc, b| {
                if a == b {
                    acc + pieces[b].clone()
                } else {
                    acc - pieces[b].clone()
                }
            })
        })
    }

    pub fn basis_vector(&self, x: usize) -> Vec<S> {
        (0..DIM).map(|i| if i == x { S::one() } else { S::zero() }).collect()
    }

    /// `e_x · ψ` for the coordinate basis vector `e_x`.
    pub fn vector_act(&self, x: usize, psi: &Spinor<S>) -> Spinor<S> {
        self.rep.vector_act(&self.basis_vector(x), psi, &self.metric)
    }

    pub fn vector_matrix(&self, x: usize) -> Matrix<S> {
        self.rep.gamma::<S>(x).scale(self.metric.weight(x))
    }

    pub fn form_act(&self, form: &Form<S>, psi: &Spinor<S>) -> Spinor<S> {
        self.rep.act_in(form, psi, &self.metric)
    }

    pub fn form_matrix(&self, form: &Form<S>) -> Matrix<S> {
        self.rep.form_matrix(form, &self.metric)
    }

    /// `∇^g_{e_x} ψ` for an isotropy-invariant spinor.
    pub fn lc_spinor_derivative(&self, psi: &Spinor<S>) -> Result<Vec<Spinor<S>>> {
        self.space.spinor_derivative_invariant(&self.lc, psi, &self.rep)
    }

    /// `D ψ = Σ_i f_i · ∇_{f_i} ψ` over the orthonormal frame `f_i = e_i / w_i`.
    pub fn dirac(&self, psi: &Spinor<S>) -> Result<Spinor<S>> {
        let derivs = self.lc_spinor_derivative(psi)?;
        Ok(derivs.iter().enumerate().fold(Spinor::zero(), |acc, (i, d)| {
            acc.add(&self.rep.unit_vector_act(i, d).scale(self.metric.inverse_weight(i)))
        }))
    }

    /// Largest residual of `∇_{e_x}ψ = c_x · e_x·ψ`.
    fn spinor_coefficients(&self, derivs: &[Spinor<S>], psi: &Spinor<S>, coeff: impl Fn(usize) -> S) -> Residual {
        Residual::all(
            derivs
                .iter()
                .enumerate()
                .map(|(x, d)| d.sub(&self.vector_act(x, psi).scale(&coeff(x)))),
        )
    }

    /// Ricci target `a·Id_h ⊕ b·Id_v` in the orthonormal frame.
    fn block_diagonal(&self, horizontal: S, vertical: S) -> Matrix<S> {
        Matrix::from_fn(DIM, DIM, |r, c| match (r == c, r < 3) {
            (true, true) => vertical.clone(),
            (true, false) => horizontal.clone(),
            _ => S::zero(),
        })
    }
}

/// Something whose vanishing is an identity.
pub trait Measure {
    fn max_abs(&self) -> f64;
    fn vanishes(&self) -> bool;
    fn describe(&self) -> String;
}

impl<S: Scalar> Measure for Form<S> {
    fn max_abs(&self) -> f64 {
        Form::max_abs(self)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl<S: Scalar> Measure for Spinor<S> {
    fn max_abs(&self) -> f64 {
        Spinor::max_abs(self)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

impl<S: Scalar> Measure for Matrix<S> {
    fn max_abs(&self) -> f64 {
        Matrix::max_abs(self)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn describe(&self) -> String {
        let nonzero: Vec<String> = (0..self.rows())
            .flat_map(|r| (0..self.cols()).map(move |c| (r, c)))
            .filter(|&rc| !self[rc].is_zero())
            .map(|(r, c)| format!("({r},{c}):{}", self[(r, c)]))
            .collect();
        format!("[{}]", nonzero.join(" "))
    }
}

impl<M: Measure + ?Sized> Measure for &M {
    fn max_abs(&self) -> f64 {
        (**self).max_abs()
    }

    fn vanishes(&self) -> bool {
        (**self).vanishes()
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl Measure for Residual {
    fn max_abs(&self) -> f64 {
        Residual::max_abs(self)
    }

    fn vanishes(&self) -> bool {
        self.is_exact_zero()
    }

    fn describe(&self) -> String {
        Residual::describe(self)
    }
}

/// Scalar wrapper so plain field elements can be measured.
pub struct Value<S>(pub S);

impl<S: Scalar> Measure for Value<S> {
    fn max_abs(&self) -> f64 {
        self.0.abs_f64()
    }

    fn vanishes(&self) -> bool {
        self.0.is_zero()
    }

    fn describe(&self) -> String {
        self.0.to_string()
    }
}

/// Outcome of one identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Size of `lhs − rhs`; `zero` is decided by the scalar backend.
    Value { max_abs: f64, zero: bool, text: String },
    /// An integer invariant such as a dimension or multiplicity.
    Count { expected: usize, got: usize },
    /// A qualitative property.
    Flag { holds: bool, text: String },
}

const DESCRIBE_LIMIT: usize = 240;

impl Residual {
    pub fn of(x: &impl Measure) -> Self {
        Self::all(std::iter::once(x))
    }

    pub fn scalar<S: Scalar>(x: S) -> Self {
        Self::of(&Value(x))
    }

    /// `lhs − rhs` for scalars.
    pub fn equal<S: Scalar>(lhs: S, rhs: S) -> Self {
        Self::scalar(lhs - rhs)
    }

    pub fn all<M: Measure>(items: impl IntoIterator<Item = M>) -> Self {
        let mut max_abs: f64 = 0.0;
        let mut zero = true;
        let mut text = String::from("0");
        for item in items {
            max_abs = max_abs.max(item.max_abs());
            if zero && !item.vanishes() {
                zero = false;
                text = item.describe();
                if text.len() > DESCRIBE_LIMIT {
                    let cut = (0..=DESCRIBE_LIMIT)
                        .rev()
                        .find(|&i| text.is_char_boundary(i))
                        .unwrap_or(0);
                    text.truncate(cut);
                    text.push('…');
                }
            }
        }
        Residual::Value { max_abs, zero, text }
    }

    pub fn count(expected: usize, got: usize) -> Self {
        Residual::Count { expected, got }
    }

    pub fn flag(holds: bool, text: impl Into<String>) -> Self {
        Residual::Flag {
            holds,
            text: text.into(),
        }
    }

    /// Pass/fail: exact zero when `tolerance` is `None`, else `max_abs ≤ tolerance`.
    pub fn passes(&self, tolerance: Option<f64>) -> bool {
        match self {
            Residual::Value { max_abs, zero, .. } => match tolerance {
                None => *zero,
                Some(tol) => *max_abs <= tol,
            },
            Residual::Count { expected, got } => expected == got,
            Residual::Flag { holds, .. } => *holds,
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Residual::Value { max_abs, .. } => *max_abs,
            Residual::Count { expected, got } => expected.abs_diff(*got) as f64,
            Residual::Flag { holds, .. } => f64::from(u8::from(!holds)),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.passes(None)
    }

    pub fn describe(&self) -> String {
        match self {
            Residual::Value { text, .. } => text.clone(),
            Residual::Count { expected, got } => format!("expected {expected}, got {got}"),
            Residual::Flag { text, .. } => text.clone(),
        }
    }
}

pub type CheckFn<S> = fn(&SasakiModel<S>) -> Result<Residual>;

/// A named identity with its residual computation.
pub struct CheckDef<S: Scalar> {
    pub id: &'static str,
    pub statement: &'static str,
    pub run: CheckFn<S>,
}

impl<S: Scalar> Clone for CheckDef<S> {
    fn clone(&self) -> Self {
        CheckDef {
            id: self.id,
            statement: self.statement,
            run: self.run,
        }
    }
}

/// An evaluated identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub statement: &'static str,
    pub residual: Residual,
}

/// Runs every check on `model`; a check that errors becomes a failing flag.
pub fn run_checks<S: Scalar>(model: &SasakiModel<S>, defs: &[CheckDef<S>]) -> Vec<Check> {
    defs.iter()
        .map(|def| Check {
            id: def.id,
            statement: def.statement,
            residual: (def.run)(model).unwrap_or_else(|e| Residual::flag(false, e.to_string())),
        })
        .collect()
}

macro_rules! check {
    ($id:literal, $statement:literal, $run:expr) => {
        CheckDef {
            id: $id,
            statement: $statement,
            run: $run,
        }
    };
}

fn e<S: Scalar>(r: usize, c: usize) -> Matrix<S> {
    Matrix::from_fn(DIM, DIM, |i, j| if (i, j) == (r, c) { S::one() } else { S::zero() })
}

fn bracket_residual<S: Scalar>(m: &SasakiModel<S>, a: usize, b: usize, c: usize) -> Residual {
    let br = m.space().bracket_m(a, b);
    let mut expected = vec![S::zero(); DIM];
    expected[c] = S::from_i64(2);
    let h = m.space().bracket_h(a, b);
    let diff: Vec<S> = br
        .iter()
        .zip(&expected)
        .map(|(x, y)| x.clone() - y.clone())
        .chain(h)
        .collect();
    Residual::all(diff.into_iter().map(Value))
}

/// `φ_a ∘ φ_b = sign·φ_c + η_b ⊗ ξ_a` (one-based labels as in the relation).
fn phi_relation<S: Scalar>(m: &SasakiModel<S>, a: usize, b: usize, c: usize, sign: i64) -> Residual {
    let p = m.phis();
    let lhs = p[a - 1].mul(&p[b - 1]);
    let rhs = p[c - 1].scale(&S::from_i64(sign)).add(&e(a - 1, b - 1));
    Residual::of(&lhs.sub(&rhs))
}

fn deta_target<S: Scalar>(alpha: usize) -> Form<S> {
    match alpha {
        0 => Form::from_terms(&[(-2, &[2, 3]), (-2, &[4, 5]), (-2, &[6, 7])]),
        1 => Form::from_terms(&[(2, &[1, 3]), (-2, &[4, 6]), (2, &[5, 7])]),
        _ => Form::from_terms(&[(-2, &[1, 2]), (-2, &[4, 7]), (-2, &[5, 6])]),
    }
}

/// Structure equations of the 3-Sasakian model at `t = 1`.
pub fn structure_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "structure.coset_valid",
            "sp(2) = sp(1) ⊕ m is a reductive pair with ad(h)-invariant metric",
            |m| {
                let report = m.space().validate();
                Ok(Residual::flag(
                    report.passed(),
                    format!("failed: {:?}", report.failures()),
                ))
            }
        ),
        check!("structure.bracket_12", "[ξ1, ξ2] = 2ξ3", |m| Ok(bracket_residual(
            m, 0, 1, 2
        ))),
        check!("structure.bracket_23", "[ξ2, ξ3] = 2ξ1", |m| Ok(bracket_residual(
            m, 1, 2, 0
        ))),
        check!("structure.bracket_31", "[ξ3, ξ1] = 2ξ2", |m| Ok(bracket_residual(
            m, 2, 0, 1
        ))),
        check!("structure.phi_squared", "φ_α² = −Id + η_α ⊗ ξ_α", |m| {
            Ok(Residual::all((0..3).map(|a| {
                let p = &m.phis()[a];
                p.mul(p)
                    .sub(&Matrix::identity(DIM).scale(&S::from_i64(-1)).add(&e(a, a)))
            })))
        }),
        check!("structure.phi_32", "φ3 ∘ φ2 = −φ1 + η2 ⊗ ξ3", |m| Ok(
            phi_relation(m, 3, 2, 1, -1)
        )),
        check!("structure.phi_23", "φ2 ∘ φ3 = φ1 + η3 ⊗ ξ2", |m| Ok(
            phi_relation(m, 2, 3, 1, 1)
        )),
        check!("structure.phi_13", "φ1 ∘ φ3 = −φ2 + η3 ⊗ ξ1", |m| Ok(
            phi_relation(m, 1, 3, 2, -1)
        )),
        check!("structure.phi_31", "φ3 ∘ φ1 = φ2 + η1 ⊗ ξ3", |m| Ok(
            phi_relation(m, 3, 1, 2, 1)
        )),
        check!("structure.phi_21", "φ2 ∘ φ1 = −φ3 + η1 ⊗ ξ2", |m| Ok(
            phi_relation(m, 2, 1, 3, -1)
        )),
        check!("structure.phi_12", "φ1 ∘ φ2 = φ3 + η2 ⊗ ξ1", |m| Ok(
            phi_relation(m, 1, 2, 3, 1)
        )),
        check!(
            "structure.phi_horizontal",
            "φ_α on T^h equals the standard quaternionic 4×4 matrices",
            |m| {
                let displayed: [[[i64; 4]; 4]; 3] = [
                    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
                    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
                    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
                ];
                Ok(Residual::all((0..3).map(|a| {
                    let block = m.phis()[a].block(&HORIZONTAL, &HORIZONTAL);
                    block.sub(&Matrix::from_fn(4, 4, |r, c| S::from_i64(displayed[a][r][c])))
                })))
            }
        ),
        check!("structure.phi_xi", "φ_α ξ_α = 0 and η_α ∘ φ_α = 0", |m| {
            Ok(Residual::all((0..3).flat_map(|a| {
                let p = &m.phis()[a];
                [Spinorless(p.column(a)), Spinorless(p.row(a).to_vec())]
            })))
        }),
        check!("structure.deta_1", "dη1 = −2(η23 + η45 + η67)", |m| Ok(
            Residual::of(&(m.d_eta(0) - &deta_target(0)))
        )),
        check!("structure.deta_2", "dη2 = 2(η13 − η46 + η57)", |m| Ok(
            Residual::of(&(m.d_eta(1) - &deta_target(1)))
        )),
        check!("structure.deta_3", "dη3 = −2(η12 + η47 + η56)", |m| Ok(
            Residual::of(&(m.d_eta(2) - &deta_target(2)))
        )),
        check!("structure.deta_phi", "dη_α(X, Y) = 2 g(X, φ_α Y)", |m| {
            let mut diffs = Vec::new();
            for a in 0..3 {
                for x in 0..DIM {
                    for y in 0..DIM {
                        let phi_y = m.phis()[a].column(y);
                        let rhs = m.space().inner_m(&m.basis_vector(x), &phi_y) * S::from_i64(2);
                        diffs.push(Value(m.d_eta(a).evaluate(&[x, y]) - rhs));
                    }
                }
            }
            Ok(Residual::all(diffs))
        }),
        check!("structure.phi_isometry", "g(φX, φY) = g(X, Y) − η(X)η(Y)", |m| {
            let g = Matrix::diagonal(&m.metric().weights().clone().map(|w| w.clone() * w));
            Ok(Residual::all((0..3).map(|a| {
                let p = &m.phis()[a];
                let lhs = p.transpose().mul(&g).mul(p);
                let w2 = g[(a, a)].clone();
                lhs.sub(&g.sub(&e(a, a).scale(&(w2.clone() * w2))))
            })))
        }),
        check!("structure.contact", "η_α ∧ (dη_α)³ ≠ 0", |m| {
            let all = (0..3).all(|a| {
                let d = m.d_eta(a);
                !Form::eta(&[a + 1]).wedge(d).wedge(d).wedge(d).is_zero()
            });
            Ok(Residual::flag(all, "η ∧ (dη)³ vanishes"))
        }),
        check!("structure.nabla_xi", "∇^g_X ξ_α = −φ_α X", |m| {
            Ok(Residual::all((0..3).flat_map(|a| {
                (0..DIM).map(move |x| {
                    let lhs = m.levi_civita().lambda(x).column(a);
                    let rhs = m.phis()[a].column(x);
                    Spinorless(lhs.iter().zip(&rhs).map(|(p, q)| p.clone() + q.clone()).collect())
                })
            })))
        }),
        check!(
            "structure.nabla_phi",
            "(∇^g_X φ_α)Y = g(X, Y)ξ_α − η_α(Y)X",
            |m| {
                Ok(Residual::all((0..3).flat_map(|a| {
                    (0..DIM).map(move |x| {
                        let lam = m.levi_civita().lambda(x);
                        let lhs = lam.commutator(&m.phis()[a]);
                        lhs.sub(&e(a, x).sub(&e(x, a)))
                    })
                })))
            }
        ),
        check!("structure.einstein", "Ric^g = 6·Id and Scal^g = 42", |m| {
            let curv = m.lc_curvature();
            let ric = curv.ricci.sub(&Matrix::identity(DIM).scale(&S::from_i64(6)));
            let scal = Value(curv.scal.clone() - S::from_i64(42));
            Ok(Residual::all([ric.into_measure(), scal.into_measure()]))
        }),
        check!("structure.sasaki_torsions", "Σ_α η_α ∧ dη_α = T^c", |m| {
            let sum = (0..3).fold(Form::zero(), |acc, a| acc + Form::eta(&[a + 1]).wedge(m.d_eta(a)));
            Ok(Residual::of(&(sum - m.torsion().clone())))
        }),
    ]
}

/// Vector residual without a spinor length restriction.
struct Spinorless<S>(Vec<S>);

impl<S: Scalar> Measure for Spinorless<S> {
    fn max_abs(&self) -> f64 {
        self.0.iter().map(S::abs_f64).fold(0.0, f64::max)
    }

    fn vanishes(&self) -> bool {
        self.0.iter().all(S::is_zero)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// Type-erased measure for mixing matrices and scalars in one residual.
struct Dyn {
    max_abs: f64,
    vanishes: bool,
    text: String,
}

impl Measure for Dyn {
    fn max_abs(&self) -> f64 {
        self.max_abs
    }

    fn vanishes(&self) -> bool {
        self.vanishes
    }

    fn describe(&self) -> String {
        self.text.clone()
    }
}

trait IntoDyn {
    fn into_measure(self) -> Dyn;
}

impl<M: Measure> IntoDyn for M {
    fn into_measure(self) -> Dyn {
        Dyn {
            max_abs: self.max_abs(),
            vanishes: self.vanishes(),
            text: self.describe(),
        }
    }
}

/// The canonical structure, its torsion and the characteristic connection at `t = 1`.
pub fn canonical_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "canonical.omega_blades",
            "ω = η123 − η145 − η167 − η246 + η257 − η347 − η356",
            |m| { Ok(Residual::of(&(m.canonical_structure().2 - standard_g2_form()))) }
        ),
        check!(
            "canonical.f2_blades",
            "F2 = −η145 − η167 − η246 + η257 − η347 − η356",
            |m| {
                Ok(Residual::of(
                    &(m.canonical_structure().1 - (standard_g2_form() - Form::eta(&[1, 2, 3]))),
                ))
            }
        ),
        check!("canonical.f1_wedge_f2", "F1 ∧ F2 = 0", |m| {
            let (f1, f2, _) = m.canonical_structure();
            Ok(Residual::of(&f1.wedge(&f2)))
        }),
        check!(
            "canonical.orientation",
            "*F1 = η4567 for the positive orientation of η1…7",
            |m| {
                Ok(Residual::of(
                    &(m.star(&m.canonical_structure().0) - Form::eta(&[4, 5, 6, 7])),
                ))
            }
        ),
        check!("canonical.dF1", "dF1 = 2·*F2", |m| {
            let (f1, f2, _) = m.canonical_structure();
            Ok(Residual::of(&(m.d(&f1) - m.star(&f2).scale(&S::from_i64(2)))))
        }),
        check!("canonical.dF2", "dF2 = 12·*F1 + 2·*F2", |m| {
            let (f1, f2, _) = m.canonical_structure();
            let rhs = m.star(&f1).scale(&S::from_i64(12)) + m.star(&f2).scale(&S::from_i64(2));
            Ok(Residual::of(&(m.d(&f2) - rhs)))
        }),
        check!("canonical.d_star_F", "d*F1 = d*F2 = 0", |m| {
            let (f1, f2, _) = m.canonical_structure();
            Ok(Residual::all([m.d(&m.star(&f1)), m.d(&m.star(&f2))]))
        }),
        check!("canonical.cocalibrated", "d*ω = 0", |m| Ok(Residual::of(
            &m.d(&m.star(m.omega()))
        ))),
        check!("canonical.star_d_omega", "*dω = 4(3F1 + F2)", |m| {
            let (f1, f2, omega) = m.canonical_structure();
            let rhs = (f1.scale(&S::from_i64(3)) + f2).scale(&S::from_i64(4));
            Ok(Residual::of(&(m.star(&m.d(&omega)) - rhs)))
        }),
        check!("canonical.pairing", "(dω, *ω) = 36", |m| {
            let omega = m.omega();
            Ok(Residual::equal(m.inner(&m.d(omega), &m.star(omega))?, S::from_i64(36)))
        }),
        check!("canonical.torsion_general", "T^c = −*dω + 6ω", |m| {
            let omega = m.omega();
            let rhs = omega.scale(&S::from_i64(6)) - m.star(&m.d(omega));
            Ok(Residual::of(&(m.torsion() - &rhs)))
        }),
        check!("canonical.torsion_blades", "T^c = −6F1 + 2F2", |m| {
            let (f1, f2, _) = m.canonical_structure();
            Ok(Residual::of(
                &(m.torsion() - &(f2.scale(&S::from_i64(2)) - f1.scale(&S::from_i64(6)))),
            ))
        }),
        check!("canonical.torsion_omega", "T^c = 2ω − 8F1", |m| {
            let (f1, _, omega) = m.canonical_structure();
            Ok(Residual::of(
                &(m.torsion() - &(omega.scale(&S::from_i64(2)) - f1.scale(&S::from_i64(8)))),
            ))
        }),
        check!("canonical.torsion_norm", "|T^c|² = 60", |m| {
            Ok(Residual::equal(m.torsion().norm_sq(m.metric())?, S::from_i64(60)))
        }),
        check!("canonical.dT", "dT^c = −4·*T^c", |m| {
            let t = m.torsion();
            Ok(Residual::of(&(m.d(t) + m.star(t).scale(&S::from_i64(4)))))
        }),
        check!("canonical.d_star_T", "d*T^c = 0", |m| Ok(Residual::of(
            &m.d(&m.star(m.torsion()))
        ))),
        check!("canonical.d_omega_laplace", "dω = ½ d*dω − 12·*ω", |m| {
            let omega = m.omega();
            let d = m.d(omega);
            let rhs = m.d(&m.star(&d)).scale(&S::frac(1, 2)) - m.star(omega).scale(&S::from_i64(12));
            Ok(Residual::of(&(d - rhs)))
        }),
        check!("canonical.type_1", "T^c_1 = (6/7)ω", |m| {
            let split = type_split(m.torsion(), m.omega(), m.metric())?;
            Ok(Residual::equal(split.p1, S::frac(6, 7)))
        }),
        check!("canonical.type_27", "T^c_27 = (8/7)(F2 − 6F1)", |m| {
            let (f1, f2, _) = m.canonical_structure();
            let split = type_split(m.torsion(), m.omega(), m.metric())?;
            let target = (f2 - f1.scale(&S::from_i64(6))).scale(&S::frac(8, 7));
            Ok(Residual::of(&(split.p27 - target)))
        }),
        check!("canonical.type_7", "the Λ³_7 part of T^c vanishes", |m| {
            Ok(Residual::of(&type_split(m.torsion(), m.omega(), m.metric())?.p7))
        }),
        check!("canonical.not_pure", "T^c is neither of pure type W1 nor W3", |m| {
            let split = type_split(m.torsion(), m.omega(), m.metric())?;
            Ok(Residual::flag(
                !split.p1.is_zero() && !split.p27.is_zero(),
                "one of the type components vanishes",
            ))
        }),
        check!(
            "canonical.interior_deta",
            "ξ1 ⨼ dη2 = 2η3 and ξ1 ⨼ dη3 = −2η2",
            |m| {
                Ok(Residual::all([
                    m.d_eta(1).interior_basis(0) - Form::from_terms(&[(2, &[3])]),
                    m.d_eta(2).interior_basis(0) - Form::from_terms(&[(-2, &[2])]),
                ]))
            }
        ),
        check!(
            "canonical.interior_torsion",
            "ξ1 ⨼ T^c = dη1 + (ξ1 ⨼ dη2) ∧ η2 + (ξ1 ⨼ dη3) ∧ η3",
            |m| {
                let rhs = m.d_eta(0).clone()
                    + m.d_eta(1).interior_basis(0).wedge(&Form::eta(&[2]))
                    + m.d_eta(2).interior_basis(0).wedge(&Form::eta(&[3]));
                Ok(Residual::of(&(m.torsion().interior_basis(0) - rhs)))
            }
        ),
    ]
}

/// Levi-Civita and characteristic connections at `t = 1`.
pub fn connection_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "connection.lc_metric_torsion_free",
            "the Nomizu map of ∇^g is metric and torsion free",
            |m| {
                let lc = m.levi_civita();
                let torsion_free = m.space().torsion_form(lc).is_some_and(|t| t.is_zero());
                Ok(Residual::flag(
                    lc.is_metric(m.space().weights()) && torsion_free,
                    "Λ^g is not metric or has torsion",
                ))
            }
        ),
        check!("connection.killing_eta", "∇^g_X η1 = ½ X ⨼ dη1", |m| {
            let derivs = m.levi_civita().covariant_derivative(&Form::eta(&[1]));
            Ok(Residual::all(
                derivs
                    .into_iter()
                    .enumerate()
                    .map(|(x, d)| d - m.d_eta(0).interior_basis(x).scale(&S::frac(1, 2))),
            ))
        }),
        check!("connection.char_torsion", "∇^c is metric with torsion T^c", |m| {
            let c = m.characteristic_connection();
            let t = m.space().torsion_form(c);
            Ok(match t {
                Some(t) if c.is_metric(m.space().weights()) => Residual::of(&(t - m.torsion().clone())),
                _ => Residual::flag(false, "torsion of Λ^c is not a 3-form or Λ^c is not metric"),
            })
        }),
        check!("connection.char_eta1", "∇^c_X η1 = 2 X ⨼ (η2 ∧ η3)", |m| {
            let eta23 = Form::eta(&[2, 3]);
            let derivs = m.characteristic_connection().covariant_derivative(&Form::eta(&[1]));
            Ok(Residual::all(
                derivs
                    .into_iter()
                    .enumerate()
                    .map(|(x, d)| d - eta23.interior_basis(x).scale(&S::from_i64(2))),
            ))
        }),
        check!("connection.char_f1", "∇^c(η1 ∧ η2 ∧ η3) = 0", |m| {
            Ok(Residual::all(
                m.characteristic_connection()
                    .covariant_derivative(&Form::eta(&[1, 2, 3])),
            ))
        }),
        check!("connection.char_omega", "∇^c ω = 0", |m| {
            Ok(Residual::all(
                m.characteristic_connection().covariant_derivative(m.omega()),
            ))
        }),
        check!("connection.char_torsion_parallel", "∇^c T^c = 0", |m| {
            Ok(Residual::all(
                m.characteristic_connection().covariant_derivative(m.torsion()),
            ))
        }),
        check!("connection.char_splitting", "∇^c preserves T^v ⊕ T^h", |m| {
            Ok(Residual::all(m.characteristic_connection().lambdas.iter().flat_map(
                |lam| [lam.block(&HORIZONTAL, &VERTICAL), lam.block(&VERTICAL, &HORIZONTAL)],
            )))
        }),
    ]
}

/// Canonical spinor identities at `t = 1`.
pub fn spinor_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "spinor.omega_spectrum",
            "ω acts with eigenvalue −7 (×1) and 1 (×7)",
            |m| {
                let w = m.form_matrix(m.omega());
                let minus = eigenspace(&w, &S::from_i64(-7)).len();
                let plus = eigenspace(&w, &S::one()).len();
                Ok(Residual::flag(
                    (minus, plus) == (1, 7),
                    format!("multiplicities {minus} and {plus}"),
                ))
            }
        ),
        check!("spinor.psi0", "ω·Ψ0 = −7Ψ0 and |Ψ0| = 1", |m| {
            let psi = m.psi0();
            Ok(Residual::all([
                m.form_act(m.omega(), psi)
                    .add(&psi.scale(&S::from_i64(7)))
                    .into_measure(),
                Value(psi.norm_sq() - S::one()).into_measure(),
            ]))
        }),
        check!("spinor.torsion_psi0", "T^c·Ψ0 = −6Ψ0", |m| {
            let psi = m.psi0();
            Ok(Residual::of(
                &m.form_act(m.torsion(), psi).add(&psi.scale(&S::from_i64(6))),
            ))
        }),
        check!("spinor.torsion_pairing", "T^c·Ψ0 = −(1/6)(dω, *ω)·Ψ0", |m| {
            let psi = m.psi0();
            let pairing = m.inner(&m.d(m.omega()), &m.star(m.omega()))?;
            let rhs = psi.scale(&(-(pairing * S::frac(1, 6))));
            Ok(Residual::of(&m.form_act(m.torsion(), psi).sub(&rhs)))
        }),
        check!(
            "spinor.torsion_vertical",
            "T^c·X·Ψ0 = 10·X·Ψ0 for X ∈ T^v",
            |m| {
                Ok(Residual::all(VERTICAL.map(|x| {
                    let xp = m.vector_act(x, m.psi0());
                    m.form_act(m.torsion(), &xp).sub(&xp.scale(&S::from_i64(10)))
                })))
            }
        ),
        check!(
            "spinor.torsion_ratio",
            "T^c·X·Ψ0 = −(5/3)·X·T^c·Ψ0 for X ∈ T^v",
            |m| {
                Ok(Residual::all(VERTICAL.map(|x| {
                    let lhs = m.form_act(m.torsion(), &m.vector_act(x, m.psi0()));
                    let rhs = m.vector_act(x, &m.form_act(m.torsion(), m.psi0()));
                    lhs.add(&rhs.scale(&S::frac(5, 3)))
                })))
            }
        ),
        check!(
            "spinor.torsion_horizontal",
            "T^c·X·Ψ0 = X·T^c·Ψ0 = −6·X·Ψ0 for X ∈ T^h",
            |m| {
                Ok(Residual::all(HORIZONTAL.iter().flat_map(|&x| {
                    let xp = m.vector_act(x, m.psi0());
                    let lhs = m.form_act(m.torsion(), &xp);
                    let mid = m.vector_act(x, &m.form_act(m.torsion(), m.psi0()));
                    [lhs.sub(&mid), mid.add(&xp.scale(&S::from_i64(6)))]
                })))
            }
        ),
        check!("spinor.char_parallel", "∇^c Ψ0 = 0", |m| {
            Ok(Residual::all(m.space().spinor_derivative_invariant(
                m.characteristic_connection(),
                m.psi0(),
                m.rep(),
            )?))
        }),
        check!("spinor.lc_torsion_form", "∇^g_X Ψ0 + ¼ (X ⨼ T^c)·Ψ0 = 0", |m| {
            let derivs = m.lc_spinor_derivative(m.psi0())?;
            Ok(Residual::all(derivs.iter().enumerate().map(|(x, d)| {
                d.add(
                    &m.form_act(&m.torsion().interior_basis(x), m.psi0())
                        .scale(&S::frac(1, 4)),
                )
            })))
        }),
        check!(
            "spinor.lc_symmetrized",
            "∇^g_X Ψ0 = ⅛ (X·T^c + T^c·X)·Ψ0",
            |m| {
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                let t = m.form_matrix(m.torsion());
                Ok(Residual::all(derivs.iter().enumerate().map(|(x, d)| {
                    let xm = m.vector_matrix(x);
                    let sym = xm.mul(&t).add(&t.mul(&xm)).scale(&S::frac(1, 8));
                    d.sub(&Spinor::new(sym.mul_vec(m.psi0().components())))
                })))
            }
        ),
        check!("spinor.lc_vertical", "∇^g_X Ψ0 = ½ X·Ψ0 for X ∈ T^v", |m| {
            let derivs = m.lc_spinor_derivative(m.psi0())?;
            Ok(m.spinor_coefficients(&derivs[..3], m.psi0(), |_| S::frac(1, 2)))
        }),
        check!(
            "spinor.lc_horizontal",
            "∇^g_X Ψ0 = −(3/2) X·Ψ0 for X ∈ T^h",
            |m| {
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                let res = m.spinor_coefficients(
                    &derivs,
                    m.psi0(),
                    |x| {
                        if x < 3 {
                            S::frac(1, 2)
                        } else {
                            S::frac(-3, 2)
                        }
                    },
                );
                Ok(res)
            }
        ),
        check!("spinor.dirac", "D^g Ψ0 = (9/2) Ψ0", |m| {
            let psi = m.psi0();
            Ok(Residual::of(&m.dirac(psi)?.sub(&psi.scale(&S::frac(9, 2)))))
        }),
        check!(
            "spinor.scalar_curvature",
            "Scal^g = (1/18)(dω, *ω)² − ½|T^c|² = 42",
            |m| {
                let pairing = m.inner(&m.d(m.omega()), &m.star(m.omega()))?;
                let t2 = m.torsion().norm_sq(m.metric())?;
                let formula = pairing.clone() * pairing * S::frac(1, 18) - t2 * S::frac(1, 2);
                Ok(Residual::all([
                    Value(formula.clone() - S::from_i64(42)),
                    Value(m.lc_curvature().scal.clone() - formula),
                ]))
            }
        ),
    ]
}

fn splitting<S: Scalar>(m: &SasakiModel<S>) -> crate::clifford::SpinorSplitting<S> {
    m.rep().split_spinor_module(m.psi0(), &VERTICAL)
}

fn acts_as<S: Scalar>(m: &SasakiModel<S>, form: &Form<S>, space: &SpinorSubspace<S>, lambda: i64) -> Residual {
    Residual::all(
        space
            .basis
            .iter()
            .map(|v| m.form_act(form, v).sub(&v.scale(&S::from_i64(lambda)))),
    )
}

/// Stacks matrices vertically.
fn stack<S: Scalar>(ms: &[Matrix<S>]) -> Matrix<S> {
    let rows: Vec<Vec<S>> = ms
        .iter()
        .flat_map(|m| (0..m.rows()).map(|r| m.row(r).to_vec()))
        .collect();
    Matrix::from_rows(rows)
}

fn holonomy_lifts<S: Scalar>(m: &SasakiModel<S>) -> Result<Vec<Matrix<S>>> {
    m.holonomy()?
        .iter()
        .map(|a| m.rep().spin_lift(&to_orthonormal(a, m.metric())))
        .collect()
}

/// Spinor splitting, torsion eigenvalues and the characteristic holonomy at `t = 1`.
pub fn holonomy_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "holonomy.splitting_dims",
            "dim Σ1 = 1, dim Σ3 = 3, dim Σ4 = 4",
            |m| {
                let dims = splitting(m).dims();
                Ok(Residual::flag(dims == (1, 3, 4), format!("got {dims:?}")))
            }
        ),
        check!(
            "holonomy.splitting_total",
            "Σ1 ⊕ Σ3 ⊕ Σ4 is the whole spin module",
            |m| {
                let sp = splitting(m);
                let sum = SpinorSubspace::direct_sum(&[&sp.sigma1, &sp.sigma3, &sp.sigma4]);
                Ok(Residual::count(SPIN_DIM, sum.dim()))
            }
        ),
        check!(
            "holonomy.splitting_orthogonal",
            "Σ1, Σ3, Σ4 are mutually orthogonal",
            |m| {
                let sp = splitting(m);
                let mut products = Vec::new();
                for (p, q) in [
                    (&sp.sigma1, &sp.sigma3),
                    (&sp.sigma1, &sp.sigma4),
                    (&sp.sigma3, &sp.sigma4),
                ] {
                    for u in &p.basis {
                        for v in &q.basis {
                            products.push(Value(u.dot(v)));
                        }
                    }
                }
                Ok(Residual::all(products))
            }
        ),
        check!(
            "holonomy.omega_identity",
            "ω acts as the identity on Σ3 ⊕ Σ4",
            |m| {
                let sp = splitting(m);
                Ok(Residual::all([
                    acts_as(m, m.omega(), &sp.sigma3, 1).into_measure(),
                    acts_as(m, m.omega(), &sp.sigma4, 1).into_measure(),
                ]))
            }
        ),
        check!("holonomy.torsion_sigma3", "T^c acts on Σ3 as 10", |m| Ok(acts_as(
            m,
            m.torsion(),
            &splitting(m).sigma3,
            10
        ))),
        check!("holonomy.torsion_sigma14", "T^c acts on Σ1 ⊕ Σ4 as −6", |m| {
            let sp = splitting(m);
            let space = SpinorSubspace::direct_sum(&[&sp.sigma1, &sp.sigma4]);
            Ok(acts_as(m, m.torsion(), &space, -6))
        }),
        check!("holonomy.casimir_value", "2 Scal^g + |T^c|² = 144", |m| {
            let v = m.lc_curvature().scal.clone() * S::from_i64(2) + m.torsion().norm_sq(m.metric())?;
            Ok(Residual::equal(v, S::from_i64(144)))
        }),
        check!(
            "holonomy.casimir_space",
            "{Ψ : 4(T^c)²Ψ = 144Ψ} = Σ1 ⊕ Σ4",
            |m| {
                let sp = splitting(m);
                let target = SpinorSubspace::direct_sum(&[&sp.sigma1, &sp.sigma4]);
                let eig = m
                    .rep()
                    .casimir_condition_eigenspace(m.torsion(), &S::from_i64(144), m.metric());
                Ok(if eig.same_as(&target) {
                    Residual::count(5, eig.dim())
                } else {
                    Residual::flag(false, format!("eigenspace of dim {} differs from Σ1 ⊕ Σ4", eig.dim()))
                })
            }
        ),
        check!("holonomy.casimir_sigma3", "4(T^c)² acts on Σ3 as 400", |m| {
            let t = m.form_matrix(m.torsion());
            let four_t2 = t.mul(&t).scale(&S::from_i64(4));
            Ok(Residual::all(splitting(m).sigma3.basis.iter().map(|v| {
                Spinor::new(four_t2.mul_vec(v.components())).sub(&v.scale(&S::from_i64(400)))
            })))
        }),
        check!("holonomy.curvature_parallel", "∇^c R^c = 0", |m| {
            let curv = m.char_curvature();
            let conn = m.characteristic_connection();
            let mut out = Vec::new();
            for lam in &conn.lambdas {
                for i in 0..DIM {
                    for j in i + 1..DIM {
                        let mut d = lam.commutator(curv.r(i, j));
                        for k in 0..DIM {
                            d = d.sub(&curv.r(k, j).scale(&lam[(k, i)]));
                            d = d.sub(&curv.r(i, k).scale(&lam[(k, j)]));
                        }
                        out.push(d);
                    }
                }
            }
            Ok(Residual::all(out))
        }),
        check!(
            "holonomy.bianchi",
            "𝔖 R^c(X,Y,Z,V) = 𝔖 g(T^c(X,Y), T^c(Z,V))",
            |m| {
                let curv = m.char_curvature();
                let w2: Vec<S> = m.space().weights().iter().map(|w| w.clone() * w.clone()).collect();
                let t = m.torsion();
                // g(T(e_x, e_y), T(e_z, e_v)) = Σ_k T_xyk T_zvk / w_k²
                let tt = |x: usize, y: usize, z: usize, v: usize| {
                    (0..DIM).fold(S::zero(), |acc, k| {
                        acc + t.evaluate(&[x, y, k]) * t.evaluate(&[z, v, k]) * w2[k].inv().expect("positive")
                    })
                };
                let r = |x: usize, y: usize, z: usize, v: usize| curv.r(x, y)[(v, z)].clone() * w2[v].clone();
                let mut out = Vec::new();
                for x in 0..DIM {
                    for y in x + 1..DIM {
                        for z in y + 1..DIM {
                            for v in 0..DIM {
                                let lhs = r(x, y, z, v) + r(y, z, x, v) + r(z, x, y, v);
                                let rhs = tt(x, y, z, v) + tt(y, z, x, v) + tt(z, x, y, v);
                                out.push(Value(lhs - rhs));
                            }
                        }
                    }
                }
                Ok(Residual::all(out))
            }
        ),
        check!("holonomy.dimension", "dim hol(∇^c) = 6", |m| Ok(Residual::count(
            6,
            m.holonomy()?.len()
        ))),
        check!("holonomy.annihilates_omega", "hol(∇^c) annihilates ω", |m| {
            Ok(Residual::all(
                m.holonomy()?.iter().map(|a| m.omega().endomorphism_action(a)),
            ))
        }),
        check!("holonomy.annihilates_psi0", "σ(hol(∇^c)) annihilates Ψ0", |m| {
            Ok(Residual::all(
                holonomy_lifts(m)?
                    .iter()
                    .map(|l| Spinor::new(l.mul_vec(m.psi0().components()))),
            ))
        }),
        check!(
            "holonomy.commutes_with_omega",
            "[σ(A), ω·] = 0 for A ∈ hol(∇^c)",
            |m| {
                let w = m.form_matrix(m.omega());
                Ok(Residual::all(holonomy_lifts(m)?.iter().map(|l| l.commutator(&w))))
            }
        ),
        check!(
            "holonomy.no_parallel_vectors",
            "no nonzero vector is annihilated by hol(∇^c)",
            |m| { Ok(Residual::count(0, stack(m.holonomy()?).kernel().len())) }
        ),
        check!(
            "holonomy.parallel_spinors",
            "the hol(∇^c)-invariant spinors are RΨ0",
            |m| {
                let kernel = stack(&holonomy_lifts(m)?).kernel();
                let contains = kernel.len() == 1 && Spinor::new(kernel[0].clone()).ratio_to(m.psi0()).is_some();
                Ok(if contains {
                    Residual::count(1, 1)
                } else {
                    Residual::count(1, kernel.len())
                })
            }
        ),
        check!("holonomy.splitting", "hol(∇^c) preserves R³ ⊕ R⁴", |m| {
            Ok(Residual::all(m.holonomy()?.iter().flat_map(|a| {
                [a.block(&HORIZONTAL, &VERTICAL), a.block(&VERTICAL, &HORIZONTAL)]
            })))
        }),
    ]
}

/// `−¼(X·dη_α − dη_α·X)Ψ0 + ⅛ ξ_α·(X·T^c + T^c·X)Ψ0 − ½ X·ξ_α·Ψ0` over all `X`.
fn killing_algebraic<S: Scalar>(m: &SasakiModel<S>, alpha: usize) -> Residual {
    let psi = m.psi0().components();
    let d = m.form_matrix(m.d_eta(alpha));
    let t = m.form_matrix(m.torsion());
    let xi = m.vector_matrix(alpha);
    Residual::all((0..DIM).map(|x| {
        let xm = m.vector_matrix(x);
        let first = xm.mul(&d).sub(&d.mul(&xm)).scale(&S::frac(-1, 4));
        let second = xi.mul(&xm.mul(&t).add(&t.mul(&xm))).scale(&S::frac(1, 8));
        let rhs = xm.mul(&xi).scale(&S::frac(1, 2));
        Spinor::new(first.add(&second).sub(&rhs).mul_vec(psi))
    }))
}

fn killing_spinor<S: Scalar>(m: &SasakiModel<S>, alpha: usize) -> Result<Residual> {
    let psi = m.vector_act(alpha, m.psi0());
    let derivs = m.lc_spinor_derivative(&psi)?;
    Ok(m.spinor_coefficients(&derivs, &psi, |_| S::frac(1, 2)))
}

fn induced_matches<S: Scalar>(m: &SasakiModel<S>, alpha: usize) -> Result<Residual> {
    let psi = m.vector_act(alpha, m.psi0());
    let induced = m.rep().induced_g2_form(&psi, m.metric())?;
    Ok(Residual::of(&(induced - m.nearly_parallel_forms()[alpha].clone())))
}

fn d_omega_alpha<S: Scalar>(m: &SasakiModel<S>, alpha: usize) -> Residual {
    let w = &m.nearly_parallel_forms()[alpha];
    Residual::of(&(m.d(w) + m.star(w).scale(&S::from_i64(4))))
}

/// Killing spinors `ξ_α·Ψ0` and the nearly parallel structures at `t = 1`.
pub fn killing_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!("killing.spinor_1", "∇^g_X(ξ1·Ψ0) = ½ X·ξ1·Ψ0", |m| {
            killing_spinor(m, 0)
        }),
        check!("killing.spinor_2", "∇^g_X(ξ2·Ψ0) = ½ X·ξ2·Ψ0", |m| {
            killing_spinor(m, 1)
        }),
        check!("killing.spinor_3", "∇^g_X(ξ3·Ψ0) = ½ X·ξ3·Ψ0", |m| {
            killing_spinor(m, 2)
        }),
        check!(
            "killing.product_rule",
            "∇^g_X(ξ1·Ψ0) = (∇^g_X ξ1)·Ψ0 + ξ1·∇^g_X Ψ0",
            |m| {
                let psi = m.psi0();
                let direct = m.lc_spinor_derivative(&m.vector_act(0, psi))?;
                let base = m.lc_spinor_derivative(psi)?;
                Ok(Residual::all(direct.iter().enumerate().map(|(x, d)| {
                    let dxi = m.levi_civita().lambda(x).column(0);
                    let lhs = m
                        .rep()
                        .vector_act(&dxi, psi, m.metric())
                        .add(&m.vector_act(0, &base[x]));
                    d.sub(&lhs)
                })))
            }
        ),
        check!(
            "killing.algebraic_1",
            "−¼(X·dη1 − dη1·X)Ψ0 + ⅛ξ1·(X·T^c + T^c·X)Ψ0 = ½X·ξ1·Ψ0",
            |m| { Ok(killing_algebraic(m, 0)) }
        ),
        check!(
            "killing.algebraic_2",
            "−¼(X·dη2 − dη2·X)Ψ0 + ⅛ξ2·(X·T^c + T^c·X)Ψ0 = ½X·ξ2·Ψ0",
            |m| { Ok(killing_algebraic(m, 1)) }
        ),
        check!(
            "killing.algebraic_3",
            "−¼(X·dη3 − dη3·X)Ψ0 + ⅛ξ3·(X·T^c + T^c·X)Ψ0 = ½X·ξ3·Ψ0",
            |m| { Ok(killing_algebraic(m, 2)) }
        ),
        check!(
            "killing.not_horizontal",
            "∇^g_X Ψ0 ≠ ½ X·Ψ0 for X ∈ T^h",
            |m| {
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                let holds = HORIZONTAL.iter().all(|&x| {
                    !derivs[x]
                        .sub(&m.vector_act(x, m.psi0()).scale(&S::frac(1, 2)))
                        .is_zero()
                });
                Ok(Residual::flag(holds, "Ψ0 satisfies the Killing equation horizontally"))
            }
        ),
        check!("killing.interior_omega", "ξ1 ⨼ ω = ½dη1 + 2η23", |m| {
            let rhs = m.d_eta(0).scale(&S::frac(1, 2)) + Form::from_terms(&[(2, &[2, 3])]);
            Ok(Residual::of(&(m.omega().interior_basis(0) - rhs)))
        }),
        check!(
            "killing.omega_alpha_general",
            "ω_α = −½Σ η_β∧dη_β − 4η123 + 2(ξ_α ⨼ ω) ∧ η_α",
            |m| {
                let base = (0..3).fold(Form::eta(&[1, 2, 3]).scale(&S::from_i64(-4)), |acc, b| {
                    acc - Form::eta(&[b + 1]).wedge(m.d_eta(b)).scale(&S::frac(1, 2))
                });
                let w = m.nearly_parallel_forms();
                Ok(Residual::all((0..3).map(|a| {
                    let rhs = base.clone()
                        + m.omega()
                            .interior_basis(a)
                            .wedge(&Form::eta(&[a + 1]))
                            .scale(&S::from_i64(2));
                    w[a].clone() - rhs
                })))
            }
        ),
        check!(
            "killing.omega1_blades",
            "ω1 = η123 − η145 − η167 + η246 − η257 + η347 + η356",
            |m| {
                let target = Form::from_terms(&[
                    (1, &[1, 2, 3]),
                    (-1, &[1, 4, 5]),
                    (-1, &[1, 6, 7]),
                    (1, &[2, 4, 6]),
                    (-1, &[2, 5, 7]),
                    (1, &[3, 4, 7]),
                    (1, &[3, 5, 6]),
                ]);
                Ok(Residual::of(&(m.nearly_parallel_forms()[0].clone() - target)))
            }
        ),
        check!("killing.d_omega_1", "dω1 = −4·*ω1", |m| Ok(d_omega_alpha(m, 0))),
        check!("killing.d_omega_2", "dω2 = −4·*ω2", |m| Ok(d_omega_alpha(m, 1))),
        check!("killing.d_omega_3", "dω3 = −4·*ω3", |m| Ok(d_omega_alpha(m, 2))),
        check!("killing.induced_psi0", "the G2-form induced by Ψ0 is ω", |m| {
            let induced = m.rep().induced_g2_form(m.psi0(), m.metric())?;
            Ok(Residual::of(&(induced - m.omega().clone())))
        }),
        check!("killing.induced_1", "the G2-form induced by ξ1·Ψ0 is ω1", |m| {
            induced_matches(m, 0)
        }),
        check!("killing.induced_2", "the G2-form induced by ξ2·Ψ0 is ω2", |m| {
            induced_matches(m, 1)
        }),
        check!("killing.induced_3", "the G2-form induced by ξ3·Ψ0 is ω3", |m| {
            induced_matches(m, 2)
        }),
        check!(
            "killing.induced_flip",
            "ω_{X·Ψ} = −ω_Ψ + 2(X ⨼ ω_Ψ) ∧ X for unit X",
            |m| {
                let base = m.rep().induced_g2_form(m.psi0(), m.metric())?;
                let mut out = Vec::new();
                for x in 0..DIM {
                    let flipped = m.rep().induced_g2_form(&m.vector_act(x, m.psi0()), m.metric())?;
                    let rhs = base
                        .interior_basis(x)
                        .wedge(&Form::eta(&[x + 1]))
                        .scale(&S::from_i64(2))
                        - base.clone();
                    out.push(flipped - rhs);
                }
                Ok(Residual::all(out))
            }
        ),
        check!(
            "killing.omega_alpha_spinor",
            "ω_α·(ξ_α·Ψ0) = −7 ξ_α·Ψ0",
            |m| {
                let w = m.nearly_parallel_forms();
                Ok(Residual::all((0..3).map(|a| {
                    let psi = m.vector_act(a, m.psi0());
                    m.form_act(&w[a], &psi).add(&psi.scale(&S::from_i64(7)))
                })))
            }
        ),
        check!(
            "killing.canonical_spinor_1",
            "the canonical spinor of ω1 spans R·ξ1·Ψ0",
            |m| {
                let psi = m.rep().canonical_spinor(&m.nearly_parallel_forms()[0], m.metric())?;
                let proportional = psi.ratio_to(&m.vector_act(0, m.psi0())).is_some();
                Ok(Residual::flag(proportional, "kernel of ω1 + 7 is not spanned by ξ1·Ψ0"))
            }
        ),
        check!("killing.torsion_proportional", "T^c(ω_α) = −(2/3) ω_α", |m| {
            let mut out = Vec::new();
            for w in m.nearly_parallel_forms() {
                let t = characteristic_torsion(m.space(), &w, m.metric())?;
                out.push(t - w.scale(&S::frac(-2, 3)));
            }
            Ok(Residual::all(out))
        }),
    ]
}

/// The squashed family at the model parameter `t = s²`.
pub fn deformation_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!("deformation.cocalibrated", "d *_s ω^s = 0", |m| Ok(Residual::of(
            &m.d(&m.star(m.omega()))
        ))),
        check!(
            "deformation.d_omega",
            "dω^s = 12s·*_s F1^s + (2s + 2/s)·*_s F2^s",
            |m| {
                let (f1, f2, omega) = m.deformed_structure();
                let s = m.s().clone();
                let c2 = (s.clone() + s.inv().expect("s > 0")) * S::from_i64(2);
                let rhs = m.star(&f1).scale(&(s * S::from_i64(12))) + m.star(&f2).scale(&c2);
                Ok(Residual::of(&(m.d(&omega) - rhs)))
            }
        ),
        check!(
            "deformation.torsion",
            "T^c_s = (2/s − 10s)(sη1)∧(sη2)∧(sη3) + 2s·ω^s",
            |m| {
                let (f1s, _, omega) = m.deformed_structure();
                let s = m.s().clone();
                let c1 = s.inv().expect("s > 0") * S::from_i64(2) - s.clone() * S::from_i64(10);
                let rhs = f1s.scale(&c1) + omega.scale(&(s * S::from_i64(2)));
                Ok(Residual::of(&(m.torsion() - &rhs)))
            }
        ),
        check!(
            "deformation.char_parallel",
            "∇^{c,s} T^c_s = 0 and ∇^{c,s} ω^s = 0",
            |m| {
                let c = m.characteristic_connection();
                Ok(Residual::all(
                    c.covariant_derivative(m.torsion())
                        .into_iter()
                        .chain(c.covariant_derivative(m.omega())),
                ))
            }
        ),
        check!(
            "deformation.ricci",
            "Ric^{g^s} = 6(2 − s²)·Id_h ⊕ ((2 + 4s⁴)/s²)·Id_v",
            |m| {
                let t = m.t_scalar();
                let h = (S::from_i64(2) - t.clone()) * S::from_i64(6);
                let v = (S::from_i64(2) + t.clone() * t.clone() * S::from_i64(4)) * t.inv().expect("t > 0");
                Ok(Residual::of(&m.lc_curvature().ricci.sub(&m.block_diagonal(h, v))))
            }
        ),
        check!("deformation.scal", "Scal^{g^s} = 6(8 + 1/s² − 2s²)", |m| {
            let t = m.t_scalar();
            let v = (S::from_i64(8) + t.inv().expect("t > 0") - t * S::from_i64(2)) * S::from_i64(6);
            Ok(Residual::equal(m.lc_curvature().scal.clone(), v))
        }),
        check!(
            "deformation.spinor",
            "∇^{g^s}_X Ψ0 = (s − 1/(2s)) X·Ψ0 on T^v and −(3/2)s X·Ψ0 on T^h",
            |m| {
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                let s = m.s().clone();
                let vertical = s.clone() - (s.clone() * S::from_i64(2)).inv().expect("s > 0");
                let horizontal = s * S::frac(-3, 2);
                Ok(m.spinor_coefficients(&derivs, m.psi0(), |x| {
                    if x < 3 {
                        vertical.clone()
                    } else {
                        horizontal.clone()
                    }
                }))
            }
        ),
        check!("deformation.char_spinor", "∇^{c,s} Ψ0 = 0", |m| {
            Ok(Residual::all(m.space().spinor_derivative_invariant(
                m.characteristic_connection(),
                m.psi0(),
                m.rep(),
            )?))
        }),
        check!("deformation.dirac", "D^{g^s} Ψ0 = (3/(2s) + 3s) Ψ0", |m| {
            let s = m.s().clone();
            let lambda = (s.clone() * S::from_i64(2)).inv().expect("s > 0") * S::from_i64(3) + s * S::from_i64(3);
            Ok(Residual::of(&m.dirac(m.psi0())?.sub(&m.psi0().scale(&lambda))))
        }),
        check!(
            "deformation.ricci_char",
            "Ric^{∇c,s} = 12(1 − s²)·Id_h ⊕ 16(1 − 2s²)·Id_v",
            |m| {
                let t = m.t_scalar();
                let h = (S::one() - t.clone()) * S::from_i64(12);
                let v = (S::one() - t * S::from_i64(2)) * S::from_i64(16);
                let ric = m
                    .space()
                    .ricci_of_torsion_connection(m.characteristic_connection(), m.torsion())?;
                Ok(Residual::of(&ric.sub(&m.block_diagonal(h, v))))
            }
        ),
    ]
}

fn model_at<S: Scalar>(numer: i64, denom: i64) -> Result<SasakiModel<S>> {
    SasakiModel::build(&BigRational::new(numer.into(), denom.into()))
}

/// Distinguished parameters `t = 1/5` and `t = 1/2`; each builds its own model.
pub fn special_point_checks<S: Scalar>() -> Vec<CheckDef<S>> {
    vec![
        check!(
            "special.nearly_parallel",
            "t = 1/5: dω^s = (12/√5)·*_s ω^s",
            |_| {
                let m = model_at::<S>(1, 5)?;
                let rhs = m.star(m.omega()).scale(&(m.s().clone() * S::from_i64(12)));
                Ok(Residual::of(&(m.d(m.omega()) - rhs)))
            }
        ),
        check!("special.einstein", "t = 1/5: Ric^{g^s} = (54/5)·Id", |_| {
            let m = model_at::<S>(1, 5)?;
            Ok(Residual::of(
                &m.lc_curvature()
                    .ricci
                    .sub(&Matrix::identity(DIM).scale(&S::frac(54, 5))),
            ))
        }),
        check!(
            "special.killing",
            "t = 1/5: ∇^{g^s}_X Ψ0 = −(3/(2√5)) X·Ψ0",
            |_| {
                let m = model_at::<S>(1, 5)?;
                let c = m.s().clone() * S::frac(-3, 2);
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                Ok(m.spinor_coefficients(&derivs, m.psi0(), |_| c.clone()))
            }
        ),
        check!("special.char_einstein", "t = 1/5: Ric^{∇c} = (48/5)·Id", |_| {
            let m = model_at::<S>(1, 5)?;
            let ric = m
                .space()
                .ricci_of_torsion_connection(m.characteristic_connection(), m.torsion())?;
            Ok(Residual::of(&ric.sub(&Matrix::identity(DIM).scale(&S::frac(48, 5)))))
        }),
        check!(
            "special.char_ricci_vertical",
            "t = 1/2: Ric^{∇c} vanishes on T^v",
            |_| {
                let m = model_at::<S>(1, 2)?;
                let ric = m
                    .space()
                    .ricci_of_torsion_connection(m.characteristic_connection(), m.torsion())?;
                Ok(Residual::of(&ric.block(&VERTICAL, &VERTICAL)))
            }
        ),
        check!(
            "special.vertical_parallel",
            "t = 1/2: ∇^{g^s}_X Ψ0 = 0 for X ∈ T^v",
            |_| {
                let m = model_at::<S>(1, 2)?;
                let derivs = m.lc_spinor_derivative(m.psi0())?;
                Ok(Residual::all(derivs[..3].iter().cloned()))
            }
        ),
        check!(
            "special.dirac_squared",
            "t = 1/2: (D^{g^s})² Ψ0 = 18 Ψ0 and Scal^{g^s} = 54",
            |_| {
                let m = model_at::<S>(1, 2)?;
                let d = m.dirac(m.psi0())?;
                let dd = m.dirac(&d)?;
                let scal = m.lc_curvature().scal.clone() * S::frac(1, 3);
                Ok(Residual::all([
                    dd.sub(&m.psi0().scale(&S::from_i64(18))).into_measure(),
                    Value(scal - S::from_i64(18)).into_measure(),
                ]))
            }
        ),
    ]
}

/// Ricci and Dirac data of one model, for parameter sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationRow<S> {
    pub scal: S,
    pub ricci_horizontal: S,
    pub ricci_vertical: S,
    pub char_ricci_horizontal: S,
    pub char_ricci_vertical: S,
    pub dirac: S,
}

impl<S: Scalar> SasakiModel<S> {
    pub fn deformation_row(&self) -> Result<DeformationRow<S>> {
        let ric = &self.lc_curvature().ricci;
        let ric_c = self.space.ricci_of_torsion_connection(&self.char_conn, &self.torsion)?;
        let d = self.dirac(&self.psi0)?;
        let dirac = d
            .components()
            .iter()
            .zip(self.psi0.components())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        Ok(DeformationRow {
            scal: self.lc_curvature().scal.clone(),
            ricci_horizontal: ric[(3, 3)].clone(),
            ricci_vertical: ric[(0, 0)].clone(),
            char_ricci_horizontal: ric_c[(3, 3)].clone(),
            char_ricci_vertical: ric_c[(0, 0)].clone(),
            dirac,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;

    fn model(n: i64, d: i64) -> SasakiModel<Surd> {
        model_at(n, d).unwrap()
    }

    fn assert_all_pass(m: &SasakiModel<Surd>, defs: Vec<CheckDef<Surd>>) {
        for check in run_checks(m, &defs) {
            assert!(
                check.residual.is_exact_zero(),
                "{}: {}",
                check.id,
                check.residual.describe()
            );
        }
    }

    #[test]
    fn structure_constants_match_quaternion_brackets() {
        let c = sp2_structure_constants();
        let at = |a: usize, b: usize, k: usize| c[(a * 10 + b) * 10 + k];
        assert_eq!(at(0, 1, 2), 2);
        assert_eq!(at(3, 4, 0), 2);
        assert_eq!(at(3, 4, 7), -2);
    }

    #[test]
    fn rejects_non_positive_parameter() {
        let err = SasakiModel::<Surd>::build(&BigRational::from_integer((-1).into())).unwrap_err();
        assert_eq!(err.to_string(), "t must be positive (got -1)");
    }

    #[test]
    fn structure_identities() {
        assert_all_pass(&model(1, 1), structure_checks());
    }

    #[test]
    fn canonical_identities() {
        assert_all_pass(&model(1, 1), canonical_checks());
        assert_all_pass(&model(1, 1), connection_checks());
    }

    #[test]
    fn spinor_identities() {
        assert_all_pass(&model(1, 1), spinor_checks());
    }

    #[test]
    fn holonomy_identities() {
        assert_all_pass(&model(1, 1), holonomy_checks());
    }

    #[test]
    fn killing_identities() {
        assert_all_pass(&model(1, 1), killing_checks());
    }

    #[test]
    fn deformation_identities() {
        for (n, d) in [(1, 5), (1, 2), (1, 1), (2, 1), (4, 1)] {
            assert_all_pass(&model(n, d), deformation_checks());
        }
        assert_all_pass(&model(1, 1), special_point_checks());
    }

    #[test]
    fn type_split_of_omega_and_seven_part() {
        let m = model(1, 1);
        let split = type_split(m.omega(), m.omega(), m.metric()).unwrap();
        assert_eq!(split.p1, Surd::one());
        assert!(split.p7.is_zero() && split.p27.is_zero());
        let seven = Form::eta(&[1]).wedge(m.omega()).hodge(m.metric()).unwrap();
        let split = type_split(&seven, m.omega(), m.metric()).unwrap();
        assert!(split.p1.is_zero() && split.p27.is_zero());
        assert_eq!(split.p7, seven);
    }

    #[test]
    fn float_backend_agrees() {
        let m = SasakiModel::<f64>::build(&BigRational::new(1.into(), 5.into())).unwrap();
        for check in run_checks(&m, &deformation_checks()) {
            assert!(
                check.residual.passes(Some(1e-9)),
                "{}: {}",
                check.id,
                check.residual.describe()
            );
        }
    }
}
