//! Instance generators and property predicates shared by the proptest suites
//! and the acceptance runner.

#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;

use sasaki7_core::clifford::{CliffordRep, Spinor, SPIN_DIM};
use sasaki7_core::coset::CosetSpace;
use sasaki7_core::exterior::{Blade, Form, Metric, DIM};
use sasaki7_core::linalg::Matrix;
use sasaki7_core::sasaki::sphere_coset;
use sasaki7_core::scalar::{Scalar, Surd};

/// A rational `numerator / denominator` with a positive denominator.
pub type Q = (i64, i64);

pub const NUMERATORS: std::ops::RangeInclusive<i64> = -6..=6;
pub const DENOMINATORS: std::ops::RangeInclusive<i64> = 1..=5;
/// Coefficients drawn per random form; enough for every grade.
pub const FORM_COEFFS: usize = 35;

pub fn rat(q: Q) -> Surd {
    Surd::frac(q.0, q.1)
}

pub fn random_q(rng: &mut impl Rng) -> Q {
    (rng.gen_range(NUMERATORS), rng.gen_range(DENOMINATORS))
}

pub fn random_qs(rng: &mut impl Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| random_q(rng)).collect()
}

pub fn blades_of_grade(k: usize) -> Vec<Blade> {
    (0u8..128).map(Blade::from_bits).filter(|b| b.grade() == k).collect()
}

/// Homogeneous form of degree `k`; surplus coefficients are ignored.
pub fn form(k: usize, coeffs: &[Q]) -> Form<Surd> {
    let mut out = Form::zero();
    for (b, &q) in blades_of_grade(k).into_iter().zip(coeffs) {
        out.add_term(b, rat(q));
    }
    out
}

pub fn vector(coeffs: &[Q]) -> Vec<Surd> {
    coeffs.iter().take(DIM).map(|&q| rat(q)).collect()
}

pub fn spinor(coeffs: &[Q]) -> Spinor<Surd> {
    Spinor::new(coeffs.iter().take(SPIN_DIM).map(|&q| rat(q)).collect())
}

/// Antisymmetric 7×7 matrix from its 21 upper-triangular entries.
pub fn antisymmetric(coeffs: &[Q]) -> Matrix<Surd> {
    let mut m = Matrix::zeros(DIM, DIM);
    let mut it = coeffs.iter();
    for i in 0..DIM {
        for j in i + 1..DIM {
            let v = rat(*it.next().expect("21 coefficients"));
            m[(i, j)] = v.clone();
            m[(j, i)] = -v;
        }
    }
    m
}

pub type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Associativity, graded commutativity, distributivity and the Leibniz rule
/// for interior products.
pub fn exterior_axioms(degrees: (usize, usize, usize), a: &[Q], b: &[Q], c: &[Q], v: &[Q]) -> Outcome {
    let (x, y, z) = (form(degrees.0, a), form(degrees.1, b), form(degrees.2, c));
    ensure(x.wedge(&y).wedge(&z) == x.wedge(&y.wedge(&z)), || {
        "associativity".into()
    })?;
    let sign = if degrees.0 * degrees.1 % 2 == 0 { 1 } else { -1 };
    ensure(x.wedge(&y) == y.wedge(&x).scale(&Surd::from_i64(sign)), || {
        "graded commutativity".into()
    })?;
    ensure(x.wedge(&(&y + &z)) == x.wedge(&y) + x.wedge(&z), || {
        "distributivity".into()
    })?;
    let v = vector(v);
    let parity = if degrees.0 % 2 == 0 { Surd::one() } else { -Surd::one() };
    let lhs = x.wedge(&y).interior(&v);
    let rhs = x.interior(&v).wedge(&y) + x.wedge(&y.interior(&v)).scale(&parity);
    ensure(lhs == rhs, || "interior Leibniz rule".into())
}

/// `** = Id` and `α ∧ *α = |α|² vol` for the squashed metric at `t`.
pub fn hodge_involution(k: usize, a: &[Q], t: Q) -> Outcome {
    let t = BigRational::new(t.0.abs().max(1).into(), t.1.into());
    let metric = Metric::squashed(Surd::sqrt(&t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let x = form(k, a);
    let star = x.hodge(&metric).map_err(|e| e.to_string())?;
    ensure(star.hodge(&metric).map_err(|e| e.to_string())? == x, || {
        "** ≠ Id".into()
    })?;
    let norm = x.norm_sq(&metric).map_err(|e| e.to_string())?;
    ensure(x.wedge(&star) == metric.volume().scale(&norm), || {
        "α ∧ *α ≠ |α|² vol".into()
    })
}

/// `u·v·ψ + v·u·ψ = −2⟨u, v⟩ψ`.
pub fn clifford_anticommutation(rep: &CliffordRep, u: &[Q], v: &[Q], psi: &[Q]) -> Outcome {
    let g = Metric::unit();
    let (u, v, psi) = (vector(u), vector(v), spinor(psi));
    let lhs = rep
        .vector_act(&u, &rep.vector_act(&v, &psi, &g), &g)
        .add(&rep.vector_act(&v, &rep.vector_act(&u, &psi, &g), &g));
    let rhs = psi.scale(&(g.vector_inner(&u, &v) * Surd::from_i64(-2)));
    ensure(lhs == rhs, || "anticommutator is not −2⟨u,v⟩".into())
}

/// `σ([A, B]) = [σ(A), σ(B)]`.
pub fn spin_lift_homomorphism(rep: &CliffordRep, a: &[Q], b: &[Q]) -> Outcome {
    let (a, b) = (antisymmetric(a), antisymmetric(b));
    let lift = |m: &Matrix<Surd>| rep.spin_lift(m).map_err(|e| e.to_string());
    let lhs = lift(&a.commutator(&b))?;
    let rhs = lift(&a)?.commutator(&lift(&b)?);
    ensure(lhs == rhs, || "σ is not a homomorphism".into())
}

/// Basis of the isotropy-invariant `k`-forms: the kernel of `α ↦ A·α` over `A ∈ ad(h)|_m`.
pub fn invariant_forms(space: &CosetSpace<Surd>, k: usize) -> Vec<Form<Surd>> {
    let blades = blades_of_grade(k);
    let isotropy = space.isotropy();
    let rows: Vec<Vec<Surd>> = isotropy
        .iter()
        .flat_map(|a| {
            let images: Vec<Form<Surd>> = blades
                .iter()
                .map(|&b| Form::blade(b, Surd::one()).endomorphism_action(a))
                .collect();
            blades
                .iter()
                .map(move |&out| images.iter().map(|img| img.coefficient(out)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .collect();
    let kernel = if rows.is_empty() {
        (0..blades.len())
            .map(|i| {
                (0..blades.len())
                    .map(|j| if i == j { Surd::one() } else { Surd::zero() })
                    .collect()
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut f = Form::zero();
            for (&b, c) in blades.iter().zip(v) {
                f.add_term(b, c);
            }
            f
        })
        .collect()
}

/// Random combination of the invariant `k`-forms.
pub fn invariant_form(space: &CosetSpace<Surd>, k: usize, coeffs: &[Q]) -> Form<Surd> {
    invariant_forms(space, k)
        .iter()
        .zip(coeffs)
        .fold(Form::zero(), |acc, (f, &q)| acc + f.scale(&rat(q)))
}

/// `d(dα) = 0` and `d(α∧β) = dα∧β + (−1)^k α∧dβ` on isotropy-invariant forms.
pub fn d_squared(space: &CosetSpace<Surd>, degrees: (usize, usize), a: &[Q], b: &[Q]) -> Outcome {
    let d = |f: &Form<Surd>| space.d_invariant(f).map_err(|e| e.to_string());
    let x = invariant_form(space, degrees.0, a);
    let y = invariant_form(space, degrees.1, b);
    let dd = d(&d(&x)?)?;
    ensure(dd.is_zero(), || format!("d²α = {dd}"))?;
    let parity = if degrees.0 % 2 == 0 { Surd::one() } else { -Surd::one() };
    let leibniz = d(&x)?.wedge(&y) + x.wedge(&d(&y)?).scale(&parity);
    ensure(d(&x.wedge(&y))? == leibniz, || "Leibniz rule".into())
}

fn bracket(space: &CosetSpace<Surd>, x: &[Surd], y: &[Surd]) -> Vec<Surd> {
    let n = space.dim_g();
    (0..n)
        .map(|c| {
            let mut acc = Surd::zero();
            for a in 0..n {
                for b in 0..n {
                    if !x[a].is_zero() && !y[b].is_zero() {
                        acc = acc + x[a].clone() * y[b].clone() * space.c(a, b, c).clone();
                    }
                }
            }
            acc
        })
        .collect()
}

/// Jacobi identity for three random elements of the full Lie algebra.
pub fn jacobi(space: &CosetSpace<Surd>, x: &[Q], y: &[Q], z: &[Q]) -> Outcome {
    let n = space.dim_g();
    let el = |q: &[Q]| q.iter().take(n).map(|&q| rat(q)).collect::<Vec<_>>();
    let (x, y, z) = (el(x), el(y), el(z));
    let terms = [
        bracket(space, &x, &bracket(space, &y, &z)),
        bracket(space, &y, &bracket(space, &z, &x)),
        bracket(space, &z, &bracket(space, &x, &y)),
    ];
    let sum: Vec<Surd> = (0..n)
        .map(|c| terms.iter().fold(Surd::zero(), |acc, t| acc + t[c].clone()))
        .collect();
    ensure(sum.iter().all(Surd::is_zero), || "Jacobi sum is nonzero".into())
}

pub fn sphere() -> CosetSpace<Surd> {
    sphere_coset(&Surd::one()).expect("sphere model")
}
