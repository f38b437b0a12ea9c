//! Suite runner, parameter sweep, coset ingestion and JSON dumps behind the
//! `sasaki7` command line.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::clifford::CliffordRep;
use crate::coset::{CosetJson, CosetReport, CosetSpace};
use crate::error::{Error, Result};
use crate::exterior::DIM;
use crate::linalg::Matrix;
use crate::sasaki::{self, CheckDef, Residual, SasakiModel};
use crate::scalar::{Scalar, Surd};

/// Sections of the suite; each maps to one or more check groups.
pub const SECTIONS: [u8; 6] = [2, 3, 4, 5, 6, 7];

/// Float-mode tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// Which checks to run and how to judge them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub mode: Mode,
    #[serde(serialize_with = "serialize_display")]
    pub t: BigRational,
    pub tolerance: f64,
    pub sections: BTreeSet<u8>,
    pub format: Format,
}

fn serialize_display<T: fmt::Display, Ser: serde::Serializer>(
    value: &T,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.collect_str(value)
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            mode: Mode::Exact,
            t: BigRational::one(),
            tolerance: DEFAULT_TOLERANCE,
            sections: SECTIONS.into_iter().collect(),
            format: Format::Text,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.t.is_positive() {
            return Err(Error::NonPositiveParameter(self.t.to_string()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance must be positive (got {})",
                self.tolerance
            )));
        }
        if self.sections.is_empty() {
            return Err(Error::Config("no sections selected".into()));
        }
        if let Some(bad) = self.sections.iter().find(|s| !SECTIONS.contains(s)) {
            return Err(Error::Config(format!("unknown section {bad}")));
        }
        if self.format == Format::Csv {
            return Err(Error::Config("verify reports are text or json".into()));
        }
        Ok(())
    }

    /// `None` in exact mode: residuals must vanish identically.
    pub fn tolerance_for_mode(&self) -> Option<f64> {
        match self.mode {
            Mode::Exact => None,
            Mode::Float => Some(self.tolerance),
        }
    }
}

/// Parses `"2,3,7"`.
pub fn parse_sections(text: &str) -> Result<BTreeSet<u8>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u8>()
                .map_err(|_| Error::Config(format!("unknown section {s:?}")))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The identity being checked, in formula form.
    pub statement: String,
    pub section: u8,
    pub status: Status,
    /// Largest absolute entry of the residual, as `f64`.
    pub residual: f64,
    /// Whether the residual vanished identically.
    pub exact_zero: bool,
    /// Nonzero part of the residual, or the failing property.
    pub detail: String,
    pub elapsed_ms: f64,
}

/// Which model a check group runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    /// The round metric `t = 1`.
    Round,
    /// The configured parameter.
    Configured,
}

struct Group<S: Scalar> {
    section: u8,
    target: Target,
    defs: Vec<CheckDef<S>>,
}

fn registry<S: Scalar>() -> Vec<Group<S>> {
    let g = |section, target, defs| Group { section, target, defs };
    vec![
        g(2, Target::Round, sasaki::structure_checks()),
        g(3, Target::Round, sasaki::canonical_checks()),
        g(3, Target::Round, sasaki::connection_checks()),
        g(4, Target::Round, sasaki::spinor_checks()),
        g(5, Target::Round, sasaki::holonomy_checks()),
        g(6, Target::Round, sasaki::killing_checks()),
        g(7, Target::Configured, sasaki::deformation_checks()),
        g(7, Target::Configured, sasaki::special_point_checks()),
    ]
}

/// Number of registered checks per section.
pub fn check_counts() -> Vec<(u8, usize)> {
    SECTIONS
        .iter()
        .map(|&s| {
            let n = registry::<f64>()
                .iter()
                .filter(|g| g.section == s)
                .map(|g| g.defs.len())
                .sum();
            (s, n)
        })
        .collect()
}

/// Runs every selected check, in parallel, returning results in registration order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Exact => run_with::<Surd>(cfg),
        Mode::Float => run_with::<f64>(cfg),
    }
}

fn run_with<S: Scalar>(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let groups: Vec<Group<S>> = registry::<S>()
        .into_iter()
        .filter(|g| cfg.sections.contains(&g.section))
        .collect();
    let needs = |target| groups.iter().any(|g| g.target == target);
    let round = needs(Target::Round)
        .then(|| SasakiModel::<S>::build(&BigRational::one()))
        .transpose()?;
    let configured = needs(Target::Configured)
        .then(|| SasakiModel::<S>::build(&cfg.t))
        .transpose()?;
    let tolerance = cfg.tolerance_for_mode();

    let jobs: Vec<(u8, &SasakiModel<S>, &CheckDef<S>)> = groups
        .iter()
        .flat_map(|g| {
            let model = match g.target {
                Target::Round => round.as_ref(),
                Target::Configured => configured.as_ref(),
            }
            .expect("model built for every selected target");
            g.defs.iter().map(move |def| (g.section, model, def))
        })
        .collect();

    Ok(jobs
        .into_par_iter()
        .map(|(section, model, def)| {
            let start = Instant::now();
            let residual = (def.run)(model).unwrap_or_else(|e| Residual::flag(false, e.to_string()));
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            CheckResult {
                id: def.id.to_string(),
                statement: def.statement.to_string(),
                section,
                status: if residual.passes(tolerance) {
                    Status::Pass
                } else {
                    Status::Fail
                },
                residual: residual.max_abs(),
                exact_zero: residual.is_exact_zero(),
                detail: if residual.passes(tolerance) {
                    String::new()
                } else {
                    residual.describe()
                },
                elapsed_ms,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let pass = results.iter().filter(|r| r.status == Status::Pass).count();
    Summary {
        pass,
        fail: results.len() - pass,
    }
}

/// `{config, results, summary}`.
pub fn report_json(cfg: &SuiteConfig, results: &[CheckResult]) -> Json {
    json!({
        "config": cfg,
        "results": results,
        "summary": summarize(results),
    })
}

pub fn report_text(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{}  [{}] {:width$}  {}",
            r.status, r.section, r.id, r.statement
        ));
        if r.status == Status::Fail {
            out.push_str(&format!("\n      residual {:.3e}: {}", r.residual, r.detail));
        }
        out.push('\n');
    }
    let s = summarize(results);
    out.push_str(&format!("{} passed, {} failed\n", s.pass, s.fail));
    out
}

/// One row of the deformation sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub s: f64,
    pub scal: f64,
    pub ricci_horizontal: f64,
    pub ricci_vertical: f64,
    /// Eigenvalues of the Riemannian Ricci tensor, ascending.
    pub ricci_spectrum: Vec<f64>,
    pub char_ricci_horizontal: f64,
    pub char_ricci_vertical: f64,
    /// Eigenvalues of the characteristic Ricci tensor, ascending.
    pub char_ricci_spectrum: Vec<f64>,
    pub dirac: f64,
    pub dirac_squared: f64,
}

fn symmetric_spectrum(m: &Matrix<f64>) -> Vec<f64> {
    let dm = DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)]);
    let mut eig: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Evaluates the model exactly at `steps + 1` equally spaced rational values
/// of `t` in `[t_from, t_to]` and reports the results as floats.
pub fn sweep(t_from: &BigRational, t_to: &BigRational, steps: usize) -> Result<Vec<SweepRow>> {
    if !t_from.is_positive() || t_from >= t_to {
        return Err(Error::Config(format!("need 0 < t-from < t-to (got {t_from}, {t_to})")));
    }
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    let width = (t_to - t_from) / BigRational::from_integer(steps.into());
    (0..=steps)
        .into_par_iter()
        .map(|i| {
            let t = t_from + &width * BigRational::from_integer(i.into());
            let model = SasakiModel::<Surd>::build(&t)?;
            let row = model.deformation_row()?;
            let ric = model.lc_curvature().ricci.to_f64();
            let ric_c = model
                .space()
                .ricci_of_torsion_connection(model.characteristic_connection(), model.torsion())?
                .to_f64();
            let dirac = row.dirac.to_f64();
            Ok(SweepRow {
                t: t.to_f64().unwrap_or(f64::NAN),
                s: model.s().to_f64(),
                scal: row.scal.to_f64(),
                ricci_horizontal: row.ricci_horizontal.to_f64(),
                ricci_vertical: row.ricci_vertical.to_f64(),
                ricci_spectrum: symmetric_spectrum(&ric),
                char_ricci_horizontal: row.char_ricci_horizontal.to_f64(),
                char_ricci_vertical: row.char_ricci_vertical.to_f64(),
                char_ricci_spectrum: symmetric_spectrum(&ric_c),
                dirac,
                dirac_squared: dirac * dirac,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "t,s,scal,ricci_horizontal,ricci_vertical,char_ricci_horizontal,char_ricci_vertical,dirac,dirac_squared\n",
    );
    for r in rows {
        let cells = [
            r.t,
            r.s,
            r.scal,
            r.ricci_horizontal,
            r.ricci_vertical,
            r.char_ricci_horizontal,
            r.char_ricci_vertical,
            r.dirac,
            r.dirac_squared,
        ];
        let cells: Vec<String> = cells.iter().map(|x| format!("{x}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Objects available to `dump`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DumpObject {
    Omega,
    Torsion,
    Gammas,
    Phi,
    Coset,
}

impl FromStr for DumpObject {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(DumpObject::Omega),
            "torsion" => Ok(DumpObject::Torsion),
            "gammas" => Ok(DumpObject::Gammas),
            "phi" => Ok(DumpObject::Phi),
            "coset" => Ok(DumpObject::Coset),
            other => Err(Error::Config(format!("unknown object {other:?}"))),
        }
    }
}

fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Json {
    Json::from(
        (0..m.rows())
            .map(|r| m.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

/// JSON for one object of the model at parameter `t`.
pub fn dump(object: DumpObject, t: &BigRational) -> Result<Json> {
    if !t.is_positive() {
        return Err(Error::NonPositiveParameter(t.to_string()));
    }
    let to_json = |e: serde_json::Error| Error::Io(e.to_string());
    Ok(match object {
        DumpObject::Gammas => {
            let rep = CliffordRep::build();
            Json::from((0..DIM).map(|i| matrix_json(&rep.gamma::<Surd>(i))).collect::<Vec<_>>())
        }
        DumpObject::Coset => {
            serde_json::to_value(sasaki::sphere_coset(&Surd::sqrt_of(t))?.to_json()).map_err(to_json)?
        }
        DumpObject::Omega | DumpObject::Torsion | DumpObject::Phi => {
            let model = SasakiModel::<Surd>::build(t)?;
            match object {
                DumpObject::Omega => serde_json::to_value(model.omega().to_json_map()).map_err(to_json)?,
                DumpObject::Torsion => serde_json::to_value(model.torsion().to_json_map()).map_err(to_json)?,
                _ => Json::from(model.phis().iter().map(matrix_json).collect::<Vec<_>>()),
            }
        }
    })
}

/// A parsed coset file together with its invariant report.
#[derive(Debug)]
pub struct Ingested {
    pub space: CosetSpace<Surd>,
    pub report: CosetReport,
}

impl Ingested {
    pub fn to_json(&self) -> Json {
        json!({
            "basis": self.space.labels(),
            "dim_g": self.space.dim_g(),
            "dim_m": self.space.dim_m(),
            "valid": self.report.passed(),
            "checks": self.report.checks,
        })
    }
}

/// Reads a coset JSON file. Parse and shape problems are errors; algebraic
/// violations are listed in the report and turned into an
/// [`Error::InvalidCoset`] naming them.
pub fn ingest_coset(path: &Path) -> Result<Ingested> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ingest_coset_str(&text)
}

pub fn ingest_coset_str(text: &str) -> Result<Ingested> {
    let doc: CosetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let space = CosetSpace::<Surd>::from_json(&doc)?;
    let report = space.validate();
    Ok(Ingested { space, report })
}

/// Like [`ingest_coset_str`], failing unless every invariant holds.
pub fn ingest_valid(text: &str) -> Result<CosetSpace<Surd>> {
    let ingested = ingest_coset_str(text)?;
    if ingested.report.passed() {
        Ok(ingested.space)
    } else {
        Err(Error::InvalidCoset(ingested.report.failures().join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::SPIN_DIM;
    use crate::scalar::parse_rational;

    fn cfg(mode: Mode, t: (i64, i64), sections: &[u8]) -> SuiteConfig {
        SuiteConfig {
            mode,
            t: BigRational::new(t.0.into(), t.1.into()),
            sections: sections.iter().copied().collect(),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn full_exact_suite_passes() {
        let results = run_suite(&SuiteConfig::default()).unwrap();
        assert!(results.len() >= 40);
        let failures: Vec<_> = results.iter().filter(|r| r.status == Status::Fail).collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(results.iter().all(|r| r.exact_zero));
    }

    #[test]
    fn float_suite_at_nearly_parallel_point() {
        let results = run_suite(&cfg(Mode::Float, (1, 5), &[7])).unwrap();
        assert!(results.iter().all(|r| r.status == Status::Pass), "{results:#?}");
    }

    #[test]
    fn float_suite_matches_exact_everywhere() {
        let results = run_suite(&cfg(Mode::Float, (1, 1), &SECTIONS)).unwrap();
        let failures: Vec<_> = results.iter().filter(|r| r.status == Status::Fail).collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn rejects_bad_configs() {
        let err = run_suite(&cfg(Mode::Exact, (-1, 1), &[2])).unwrap_err();
        assert!(err.to_string().contains("t must be positive"));
        assert!(matches!(
            run_suite(&cfg(Mode::Exact, (1, 1), &[8])),
            Err(Error::Config(_))
        ));
        let mut c = SuiteConfig::default();
        c.tolerance = 0.0;
        assert!(run_suite(&c).is_err());
    }

    #[test]
    fn results_follow_registration_order() {
        let a = run_suite(&cfg(Mode::Exact, (2, 1), &[7])).unwrap();
        let b = run_suite(&cfg(Mode::Exact, (2, 1), &[7])).unwrap();
        let ids = |r: &[CheckResult]| r.iter().map(|c| c.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&a), ids(&b));
        assert_eq!(a[0].id, "deformation.cocalibrated");
    }

    #[test]
    fn sweep_reproduces_special_rows() {
        let rows = sweep(&parse_rational("1/5").unwrap(), &parse_rational("1").unwrap(), 8).unwrap();
        assert_eq!(rows.len(), 9);
        let first = &rows[0];
        assert!((first.ricci_horizontal - 10.8).abs() < 1e-12 && (first.ricci_vertical - 10.8).abs() < 1e-12);
        let half = rows.iter().find(|r| (r.t - 0.5).abs() < 1e-12).unwrap();
        assert!(half.char_ricci_vertical.abs() < 1e-12);
        assert!((half.dirac_squared - 18.0).abs() < 1e-9);
        let last = rows.last().unwrap();
        assert!((last.scal - 42.0).abs() < 1e-12 && (last.dirac - 4.5).abs() < 1e-12);
        assert!(last.ricci_spectrum.iter().all(|x| (x - 6.0).abs() < 1e-9));
    }

    #[test]
    fn sweep_rejects_bad_range() {
        assert!(sweep(&parse_rational("1").unwrap(), &parse_rational("1/2").unwrap(), 3).is_err());
        assert!(sweep(&parse_rational("0").unwrap(), &parse_rational("1").unwrap(), 3).is_err());
    }

    #[test]
    fn coset_dump_round_trips() {
        let dumped = dump(DumpObject::Coset, &BigRational::one()).unwrap();
        let space = ingest_valid(&dumped.to_string()).unwrap();
        let original = sasaki::sphere_coset(&Surd::one()).unwrap();
        assert_eq!(space.to_json(), original.to_json());
    }

    #[test]
    fn non_reductive_file_is_rejected() {
        // the affine line algebra [a, b] = b with h = span{b}: [h, m] lands in h
        let doc = r#"{"basis":["a","b"],"brackets":[[0,1,[[1,"1"]]]],
            "h_indices":[1],"metric_weights":["1"],"orientation":1}"#;
        let err = ingest_valid(doc).unwrap_err();
        assert!(err.to_string().contains("reductive"), "{err}");
    }

    #[test]
    fn su2_with_trivial_isotropy_is_valid() {
        let doc = r#"{"basis":["X1","X2","X3"],
            "brackets":[[0,1,[[2,"1"]]],[1,2,[[0,"1"]]],[2,0,[[1,"1"]]]],
            "h_indices":[],"metric_weights":["1","1","1"],"orientation":1}"#;
        assert_eq!(ingest_valid(doc).unwrap().dim_m(), 3);
    }

    #[test]
    fn dumps_are_well_formed() {
        let t = BigRational::one();
        let gammas = dump(DumpObject::Gammas, &t).unwrap();
        assert_eq!(gammas.as_array().unwrap().len(), DIM);
        assert_eq!(gammas[0].as_array().unwrap().len(), SPIN_DIM);
        let omega = dump(DumpObject::Omega, &t).unwrap();
        assert_eq!(omega["3"]["η123"], "1");
        assert_eq!(dump(DumpObject::Phi, &t).unwrap().as_array().unwrap().len(), 3);
    }
}
