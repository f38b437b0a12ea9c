//! Reductive homogeneous spaces `G/H` from structure constants.
//!
//! Invariant objects are computed at the base point: forms on `m`, the
//! invariant exterior derivative, connections as Nomizu maps `Λ: m → gl(m)`,
//! their curvature, Ricci tensor and holonomy algebra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{to_orthonormal, CliffordRep, Spinor};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, Metric, Orientation, DIM};
use crate::linalg::{Matrix, SpanBasis};
use crate::scalar::Scalar;

/// Lie algebra `g = h ⊕ m` with a diagonal inner product on `m`.
#[derive(Clone, Debug)]
pub struct CosetSpace<S> {
    labels: Vec<String>,
    /// `c[(a·n + b)·n + c]` is the `e_c` coefficient of `[e_a, e_b]`.
    consts: Vec<S>,
    h: Vec<usize>,
    m: Vec<usize>,
    weights: Vec<S>,
    weights_sq: Vec<S>,
    orientation: Orientation,
}

/// One invariant of a [`CosetSpace`] together with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetReport {
    pub checks: Vec<InvariantCheck>,
}

impl CosetReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect()
    }
}

impl<S: Scalar> CosetSpace<S> {
    /// Assembles a space from dense structure constants. Only shapes are
    /// checked here; see [`CosetSpace::validate`] for the algebraic invariants.
    pub fn new(
        labels: Vec<String>,
        consts: Vec<S>,
        h_indices: Vec<usize>,
        weights: Vec<S>,
        orientation: Orientation,
    ) -> Result<Self> {
        let n = labels.len();
        if consts.len() != n * n * n {
            return Err(Error::InvalidCoset(format!(
                "expected {} structure constants, got {}",
                n * n * n,
                consts.len()
            )));
        }
        let mut h = h_indices;
        h.sort_unstable();
        h.dedup();
        if h.iter().any(|&i| i >= n) {
            return Err(Error::InvalidCoset("h index out of range".into()));
        }
        let m: Vec<usize> = (0..n).filter(|i| !h.contains(i)).collect();
        if weights.len() != m.len() {
            return Err(Error::InvalidCoset(format!(
                "{} metric weights for dim m = {}",
                weights.len(),
                m.len()
            )));
        }
        if weights.iter().any(|w| w.is_zero() || w.to_f64() < 0.0) {
            return Err(Error::InvalidCoset("metric weights must be positive".into()));
        }
        let weights_sq = weights.iter().map(|w| w.clone() * w.clone()).collect();
        Ok(CosetSpace {
            labels,
            consts,
            h,
            m,
            weights,
            weights_sq,
            orientation,
        })
    }

    pub fn dim_g(&self) -> usize {
        self.labels.len()
    }

    pub fn dim_m(&self) -> usize {
        self.m.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Same algebra with a different inner product on `m`.
    pub fn with_weights(&self, weights: Vec<S>) -> Result<Self> {
        Self::new(
            self.labels.clone(),
            self.consts.clone(),
            self.h.clone(),
            weights,
            self.orientation,
        )
    }

    /// The metric on `m`; forms live on 7-dimensional `m` only.
    pub fn metric(&self) -> Result<Metric<S>> {
        let weights: [S; DIM] = self
            .weights
            .clone()
            .try_into()
            .map_err(|_| Error::InvalidCoset(format!("dim m = {}, expected {DIM}", self.dim_m())))?;
        Metric::new(weights, self.orientation)
    }

    /// `e_c` coefficient of `[e_a, e_b]` in `g`.
    pub fn c(&self, a: usize, b: usize, c: usize) -> &S {
        let n = self.dim_g();
        &self.consts[(a * n + b) * n + c]
    }

    /// `[m_x, m_y]_m` in `m`-coordinates.
    pub fn bracket_m(&self, x: usize, y: usize) -> Vec<S> {
        let (a, b) = (self.m[x], self.m[y]);
        self.m.iter().map(|&k| self.c(a, b, k).clone()).collect()
    }

    /// `[m_x, m_y]_h` in `h`-coordinates.
    pub fn bracket_h(&self, x: usize, y: usize) -> Vec<S> {
        let (a, b) = (self.m[x], self.m[y]);
        self.h.iter().map(|&k| self.c(a, b, k).clone()).collect()
    }

    /// `ad(z)|_m` for an element of `g` (full index), as a matrix on `m`.
    pub fn ad_on_m(&self, z: usize) -> Matrix<S> {
        let d = self.dim_m();
        Matrix::from_fn(d, d, |k, j| self.c(z, self.m[j], self.m[k]).clone())
    }

    /// Isotropy representation: `ad(h_i)|_m` for every `h` basis vector.
    pub fn isotropy(&self) -> Vec<Matrix<S>> {
        self.h.iter().map(|&z| self.ad_on_m(z)).collect()
    }

    /// Inner product of two vectors of `m` in frame coordinates.
    pub fn inner_m(&self, u: &[S], v: &[S]) -> S {
        u.iter()
            .zip(v)
            .zip(&self.weights_sq)
            .fold(S::zero(), |acc, ((a, b), w)| acc + a.clone() * b.clone() * w.clone())
    }

    /// Checks antisymmetry, Jacobi, `[h,h] ⊆ h`, `[h,m] ⊆ m` and
    /// `ad(h)`-invariance of the metric.
    pub fn validate(&self) -> CosetReport {
        let n = self.dim_g();
        let mut checks = Vec::new();

        let asym = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| !(self.c(a, b, c).clone() + self.c(b, a, c).clone()).is_zero());
        checks.push(verdict(
            "antisymmetry",
            asym.map(|(a, b, c)| format!("c[{a}][{b}][{c}]")),
        ));

        let mut jacobi = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for e in 0..n {
                        let mut s = S::zero();
                        for d in 0..n {
                            s = s
                                + self.c(a, b, d).clone() * self.c(d, c, e).clone()
                                + self.c(b, c, d).clone() * self.c(d, a, e).clone()
                                + self.c(c, a, d).clone() * self.c(d, b, e).clone();
                        }
                        if !s.is_zero() {
                            jacobi = Some(format!("({a},{b},{c}) component {e}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(verdict("jacobi", jacobi));

        let sub = self
            .pairs(&self.h, &self.h)
            .find(|&(a, b)| self.m.iter().any(|&k| !self.c(a, b, k).is_zero()));
        checks.push(verdict("subalgebra", sub.map(|(a, b)| format!("[{a},{b}] leaves h"))));

        let red = self
            .pairs(&self.h, &self.m)
            .find(|&(a, b)| self.h.iter().any(|&k| !self.c(a, b, k).is_zero()));
        checks.push(verdict("reductive", red.map(|(a, b)| format!("[{a},{b}] leaves m"))));

        let d = self.dim_m();
        let mut inv = None;
        for &z in &self.h {
            for x in 0..d {
                for y in 0..d {
                    let lhs = self.weights_sq[y].clone() * self.c(z, self.m[x], self.m[y]).clone()
                        + self.weights_sq[x].clone() * self.c(z, self.m[y], self.m[x]).clone();
                    if inv.is_none() && !lhs.is_zero() {
                        inv = Some(format!("h element {z} on ({x},{y})"));
                    }
                }
            }
        }
        checks.push(verdict("metric_invariance", inv));
        CosetReport { checks }
    }

    fn pairs<'a>(&'a self, p: &'a [usize], q: &'a [usize]) -> impl Iterator<Item = (usize, usize)> + 'a {
        p.iter().flat_map(move |&a| q.iter().map(move |&b| (a, b)))
    }

    /// Invariant exterior derivative:
    /// `dα(X_0, …, X_k) = Σ_{i<j} (−1)^{i+j} α([X_i, X_j]_m, X_0, …, X̂_i, …, X̂_j, …, X_k)`.
    pub fn d_invariant(&self, form: &Form<S>) -> Result<Form<S>> {
        if self.dim_m() != DIM {
            return Err(Error::InvalidCoset(format!("dim m = {}, expected {DIM}", self.dim_m())));
        }
        let brackets: Vec<Vec<Vec<S>>> = (0..DIM)
            .map(|x| (0..DIM).map(|y| self.bracket_m(x, y)).collect())
            .collect();
        let mut out = Form::zero();
        for k in 0..DIM {
            let part = form.grade_project(k);
            if part.is_zero() {
                continue;
            }
            for bits in 0..1u8 << DIM {
                let target = Blade::from_bits(bits);
                if target.grade() != k + 1 {
                    continue;
                }
                let idx = target.indices();
                let mut total = S::zero();
                for i in 0..idx.len() {
                    for j in i + 1..idx.len() {
                        let rest: Vec<usize> = idx
                            .iter()
                            .enumerate()
                            .filter(|&(l, _)| l != i && l != j)
                            .map(|(_, &v)| v)
                            .collect();
                        let mut term = S::zero();
                        for (l, coeff) in brackets[idx[i]][idx[j]].iter().enumerate() {
                            if coeff.is_zero() {
                                continue;
                            }
                            let mut args = vec![l];
                            args.extend_from_slice(&rest);
                            term = term + coeff.clone() * part.evaluate(&args);
                        }
                        total = if (i + j) % 2 == 0 { total + term } else { total - term };
                    }
                }
                out.add_term(target, total);
            }
        }
        Ok(out)
    }

    /// Nomizu map of the Levi-Civita connection:
    /// `Λ(X)Y = ½[X,Y]_m + U(X,Y)` with
    /// `2⟨U(X,Y),Z⟩ = ⟨[Z,X]_m,Y⟩ + ⟨X,[Z,Y]_m⟩`.
    pub fn levi_civita(&self) -> ConnectionMap<S> {
        let d = self.dim_m();
        let half = S::frac(1, 2);
        let inv_sq: Vec<S> = self
            .weights_sq
            .iter()
            .map(|w| w.inv().expect("positive weight"))
            .collect();
        let lambdas = (0..d)
            .map(|x| {
                let mut lam = Matrix::zeros(d, d);
                for y in 0..d {
                    let br = self.bracket_m(x, y);
                    for k in 0..d {
                        let u = self.weights_sq[y].clone() * self.c(self.m[k], self.m[x], self.m[y]).clone()
                            + self.weights_sq[x].clone() * self.c(self.m[k], self.m[y], self.m[x]).clone();
                        lam[(k, y)] = half.clone() * (br[k].clone() + u * inv_sq[k].clone());
                    }
                }
                lam
            })
            .collect();
        ConnectionMap { lambdas }
    }

    /// `Λ'(X)Y = Λ(X)Y + ½ T(X,Y,·)^♯`: same geodesics, skew torsion `T`.
    pub fn with_torsion(&self, conn: &ConnectionMap<S>, torsion: &Form<S>) -> ConnectionMap<S> {
        let d = self.dim_m();
        let half = S::frac(1, 2);
        let lambdas = conn
            .lambdas
            .iter()
            .enumerate()
            .map(|(x, lam)| {
                let mut out = lam.clone();
                for y in 0..d {
                    for k in 0..d {
                        let t = torsion.evaluate(&[x, y, k]);
                        if t.is_zero() {
                            continue;
                        }
                        let v = half.clone() * t * self.weights_sq[k].inv().expect("positive weight");
                        out[(k, y)] = out[(k, y)].clone() + v;
                    }
                }
                out
            })
            .collect();
        ConnectionMap { lambdas }
    }

    /// Torsion `T(X,Y) = Λ(X)Y − Λ(Y)X − [X,Y]_m` as a 3-tensor
    /// `g(T(e_x, e_y), e_k)`, returned as a form when it is totally skew.
    pub fn torsion_form(&self, conn: &ConnectionMap<S>) -> Option<Form<S>> {
        let d = self.dim_m();
        let t = |x: usize, y: usize, k: usize| {
            let v = conn.lambdas[x][(k, y)].clone() - conn.lambdas[y][(k, x)].clone() - self.bracket_m(x, y)[k].clone();
            v * self.weights_sq[k].clone()
        };
        let mut form = Form::zero();
        for x in 0..d {
            for y in 0..d {
                for k in 0..d {
                    let v = t(x, y, k);
                    if [x, y, k].windows(2).all(|p| p[0] < p[1]) {
                        form.add_term(Blade::from_indices(&[x, y, k])?, v.clone());
                    }
                    if !(v - form.evaluate(&[x, y, k])).is_zero() {
                        return None;
                    }
                }
            }
        }
        Some(form)
    }

    /// `R(X,Y) = [Λ(X),Λ(Y)] − Λ([X,Y]_m) − ad([X,Y]_h)|_m` and its traces.
    pub fn curvature(&self, conn: &ConnectionMap<S>) -> CurvatureData<S> {
        let d = self.dim_m();
        let iso = self.isotropy();
        let mut r = Vec::with_capacity(d * d);
        for x in 0..d {
            for y in 0..d {
                let mut m = conn.lambdas[x].commutator(&conn.lambdas[y]);
                m = m.sub(&conn.apply_linear(&self.bracket_m(x, y)));
                for (z, c) in self.bracket_h(x, y).iter().enumerate() {
                    if !c.is_zero() {
                        m = m.sub(&iso[z].scale(c));
                    }
                }
                r.push(m);
            }
        }
        let ricci = Matrix::from_fn(d, d, |a, b| {
            let sum = (0..d).fold(S::zero(), |acc, i| acc + r[i * d + a][(i, b)].clone());
            let norm = (self.weights[a].clone() * self.weights[b].clone())
                .inv()
                .expect("positive weight");
            sum * norm
        });
        let scal = ricci.trace();
        CurvatureData { dim: d, r, ricci, scal }
    }

    /// Ricci tensor of a connection with parallel skew torsion `T`.
    pub fn ricci_of_torsion_connection(&self, conn: &ConnectionMap<S>, torsion: &Form<S>) -> Result<Matrix<S>> {
        if !conn.parallel(torsion) {
            return Err(Error::TorsionNotParallel);
        }
        Ok(self.curvature(conn).ricci)
    }

    /// Holonomy algebra of an invariant connection: the curvature span closed
    /// under `[Λ(X), ·]` and commutators.
    pub fn holonomy_closure(&self, conn: &ConnectionMap<S>) -> Result<Vec<Matrix<S>>> {
        let d = self.dim_m();
        let limit = d * (d - 1) / 2;
        let curv = self.curvature(conn);
        let mut span = SpanBasis::new(d * d);
        let mut basis: Vec<Matrix<S>> = Vec::new();
        let push = |m: Matrix<S>, span: &mut SpanBasis<S>, basis: &mut Vec<Matrix<S>>| -> Result<()> {
            if span.insert(m.entries()) {
                basis.push(m);
                if basis.len() > limit {
                    return Err(Error::HolonomyOverflow(d));
                }
            }
            Ok(())
        };
        for x in 0..d {
            for y in x + 1..d {
                push(curv.r(x, y).clone(), &mut span, &mut basis)?;
            }
        }
        let mut frontier = 0;
        while frontier < basis.len() {
            let end = basis.len();
            for i in frontier..end {
                for lam in &conn.lambdas {
                    let c = lam.commutator(&basis[i]);
                    push(c, &mut span, &mut basis)?;
                }
                for j in 0..i {
                    let c = basis[i].commutator(&basis[j]);
                    push(c, &mut span, &mut basis)?;
                }
            }
            frontier = end;
        }
        Ok(basis)
    }

    /// `σ(Λ(e_x))ψ` for every basis direction, after checking that `ψ` is
    /// annihilated by the lifted isotropy action.
    pub fn spinor_derivative_invariant(
        &self,
        conn: &ConnectionMap<S>,
        psi: &Spinor<S>,
        rep: &CliffordRep,
    ) -> Result<Vec<Spinor<S>>> {
        let metric = self.metric()?;
        for a in self.isotropy() {
            let lift = rep.spin_lift(&to_orthonormal(&a, &metric))?;
            if !Spinor::new(lift.mul_vec(psi.components())).is_zero() {
                return Err(Error::NotIsotropyInvariant);
            }
        }
        conn.lambdas
            .iter()
            .map(|lam| {
                let lift = rep.spin_lift(&to_orthonormal(lam, &metric))?;
                Ok(Spinor::new(lift.mul_vec(psi.components())))
            })
            .collect()
    }

    pub fn to_json(&self) -> CosetJson {
        let n = self.dim_g();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let terms: Vec<(usize, String)> = (0..n)
                    .filter(|&c| !self.c(a, b, c).is_zero())
                    .map(|c| (c, self.c(a, b, c).to_string()))
                    .collect();
                if !terms.is_empty() {
                    brackets.push((a, b, terms));
                }
            }
        }
        CosetJson {
            basis: self.labels.clone(),
            brackets,
            h_indices: self.h.clone(),
            metric_weights: self.weights.iter().map(|w| w.to_string()).collect(),
            orientation: self.orientation.sign(),
        }
    }

    /// Reads the JSON schema; pairs given in one order only are completed by
    /// antisymmetry.
    pub fn from_json(doc: &CosetJson) -> Result<Self> {
        let n = doc.basis.len();
        let mut consts = vec![S::zero(); n * n * n];
        let mut given = BTreeMap::new();
        for (a, b, terms) in &doc.brackets {
            if *a >= n || *b >= n {
                return Err(Error::InvalidCoset(format!("bracket index out of range: [{a},{b}]")));
            }
            let mut v = vec![S::zero(); n];
            for (c, coeff) in terms {
                if *c >= n {
                    return Err(Error::InvalidCoset(format!("result index {c} out of range")));
                }
                v[*c] = v[*c].clone() + S::parse(coeff)?;
            }
            given.insert((*a, *b), v);
        }
        for (&(a, b), v) in &given {
            for c in 0..n {
                consts[(a * n + b) * n + c] = v[c].clone();
                if !given.contains_key(&(b, a)) {
                    consts[(b * n + a) * n + c] = -v[c].clone();
                }
            }
        }
        let weights = doc
            .metric_weights
            .iter()
            .map(|w| S::parse(w))
            .collect::<std::result::Result<Vec<S>, _>>()?;
        Self::new(
            doc.basis.clone(),
            consts,
            doc.h_indices.clone(),
            weights,
            Orientation::from_sign(doc.orientation)?,
        )
    }
}

fn verdict(name: &'static str, failure: Option<String>) -> InvariantCheck {
    InvariantCheck {
        name,
        pass: failure.is_none(),
        detail: failure.unwrap_or_default(),
    }
}

/// Serialized structure constants: `brackets` lists `[a, b, [[c, coeff], …]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetJson {
    pub basis: Vec<String>,
    pub brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
    pub h_indices: Vec<usize>,
    pub metric_weights: Vec<String>,
    pub orientation: i64,
}

/// Invariant connection at the base point: `Λ(e_x)` for each basis vector
/// of `m`, column `y` holding `Λ(e_x)e_y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMap<S> {
    pub lambdas: Vec<Matrix<S>>,
}

impl<S: Scalar> ConnectionMap<S> {
    pub fn lambda(&self, x: usize) -> &Matrix<S> {
        &self.lambdas[x]
    }

    /// `Λ(v)` for a vector in frame coordinates.
    pub fn apply_linear(&self, v: &[S]) -> Matrix<S> {
        let d = self.lambdas.len();
        v.iter()
            .zip(&self.lambdas)
            .filter(|(c, _)| !c.is_zero())
            .fold(Matrix::zeros(d, d), |acc, (c, lam)| acc.add(&lam.scale(c)))
    }

    /// `Λ(X)` is skew for the metric with squared weights `w²`.
    pub fn is_metric(&self, weights: &[S]) -> bool {
        self.lambdas.iter().all(|lam| {
            (0..lam.rows()).all(|i| {
                (0..lam.cols()).all(|j| {
                    let wi = weights[i].clone() * weights[i].clone();
                    let wj = weights[j].clone() * weights[j].clone();
                    (wi * lam[(i, j)].clone() + wj * lam[(j, i)].clone()).is_zero()
                })
            })
        })
    }

    /// `∇_{e_x} α` for an invariant form, one entry per direction.
    pub fn covariant_derivative(&self, form: &Form<S>) -> Vec<Form<S>> {
        self.lambdas.iter().map(|lam| form.endomorphism_action(lam)).collect()
    }

    pub fn parallel(&self, form: &Form<S>) -> bool {
        self.covariant_derivative(form).iter().all(Form::is_zero)
    }
}

/// `R(e_x, e_y)` for all pairs, Ricci tensor in the orthonormal frame and
/// its trace.
#[derive(Clone, Debug)]
pub struct CurvatureData<S> {
    dim: usize,
    r: Vec<Matrix<S>>,
    pub ricci: Matrix<S>,
    pub scal: S,
}

impl<S: Scalar> CurvatureData<S> {
    pub fn r(&self, x: usize, y: usize) -> &Matrix<S> {
        &self.r[x * self.dim + y]
    }

    pub fn is_antisymmetric_in_pairs(&self) -> bool {
        (0..self.dim).all(|x| (0..self.dim).all(|y| self.r(x, y).add(self.r(y, x)).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;

    /// so(3) with trivial isotropy: [e1,e2] = e3 and cyclic.
    fn su2(weights: [i64; 3]) -> CosetSpace<Surd> {
        let mut c = vec![Surd::zero(); 27];
        for (a, b, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[(a * 3 + b) * 3 + k] = Surd::one();
            c[(b * 3 + a) * 3 + k] = -Surd::one();
        }
        CosetSpace::new(
            ["e1", "e2", "e3"].map(String::from).to_vec(),
            c,
            vec![],
            weights.map(Surd::integer).to_vec(),
            Orientation::Positive,
        )
        .unwrap()
    }

    #[test]
    fn su2_is_valid() {
        assert!(su2([1, 1, 1]).validate().passed());
    }

    #[test]
    fn broken_jacobi_is_reported() {
        let mut g = su2([1, 1, 1]);
        g.consts[(0 * 3 + 1) * 3 + 1] = Surd::one();
        g.consts[(1 * 3 + 0) * 3 + 1] = -Surd::one();
        assert!(g.validate().failures().contains(&"jacobi"));
    }

    #[test]
    fn non_reductive_split_is_reported() {
        let base = su2([1, 1, 1]);
        let g = CosetSpace::new(
            base.labels.clone(),
            base.consts.clone(),
            vec![0, 1],
            vec![Surd::one()],
            Orientation::Positive,
        )
        .unwrap();
        let report = g.validate();
        assert!(report.failures().contains(&"subalgebra"));
        assert!(report.failures().contains(&"reductive"));
    }

    #[test]
    fn bi_invariant_levi_civita_is_half_bracket() {
        let g = su2([1, 1, 1]);
        let lc = g.levi_civita();
        for x in 0..3 {
            assert_eq!(lc.lambda(x), &g.ad_on_m(x).scale(&Surd::frac(1, 2)));
        }
        assert!(lc.is_metric(g.weights()));
        // round sphere of radius 2: sectional curvature 1/4, Ric = 1/2
        let curv = g.curvature(&lc);
        assert_eq!(curv.ricci, Matrix::identity(3).scale(&Surd::frac(1, 2)));
        assert!(curv.is_antisymmetric_in_pairs());
    }

    #[test]
    fn berger_metric_is_torsion_free_and_metric() {
        let g = su2([2, 1, 1]);
        let lc = g.levi_civita();
        assert!(lc.is_metric(g.weights()));
        for x in 0..3 {
            for y in 0..3 {
                let lhs = lc.lambda(x).column(y);
                let rhs = lc.lambda(y).column(x);
                let diff: Vec<Surd> = lhs.iter().zip(&rhs).map(|(a, b)| a.clone() - b.clone()).collect();
                assert_eq!(diff, g.bracket_m(x, y));
            }
        }
    }

    #[test]
    fn flat_connection_holonomy() {
        let g = su2([1, 1, 1]);
        // Λ(X) = ad(X) is the flat Cartan connection (torsion −[X,Y])
        let flat = ConnectionMap {
            lambdas: (0..3).map(|x| g.ad_on_m(x)).collect(),
        };
        assert!(g.holonomy_closure(&flat).unwrap().is_empty());
        assert_eq!(g.holonomy_closure(&g.levi_civita()).unwrap().len(), 3);
    }

    #[test]
    fn json_round_trip_and_completion() {
        let g = su2([1, 1, 1]);
        let doc = g.to_json();
        assert_eq!(doc.brackets.len(), 3);
        let back = CosetSpace::<Surd>::from_json(&doc).unwrap();
        assert_eq!(back.consts, g.consts);
        let text = serde_json::to_string(&doc).unwrap();
        let parsed: CosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc);
    }
}
