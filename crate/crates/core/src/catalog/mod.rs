//! Structure-equation files, the built-in catalog and metric flags.

mod parser;

pub use parser::{parse_coefficient, parse_structure_file, render_coefficient, render_structure_file, ParseError, MAX_COMPLEX_DIM};

use crate::algebra::CoframeStructure;
use crate::bigrading::{AcsError, AlmostComplexStructure};
use crate::form::Frame;
use crate::hermitian::{HermitianMetric, MetricError};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, Gauss, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Complex,
}

/// A parsed structure file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    pub name: String,
    pub mode: Mode,
    pub real_dim: usize,
    /// `dφ^k` (complex mode) or `de^k` (real mode), one per coframe element.
    pub equations: Vec<crate::form::InvariantForm>,
    /// `J e_j = Σ_i J_ij e_i`, real mode only.
    pub j: Option<Matrix>,
    pub provenance: Option<String>,
}

impl ManifoldDescriptor {
    pub fn frame(&self) -> Frame {
        match self.mode {
            Mode::Complex => Frame::Complex { n: self.real_dim / 2 },
            Mode::Real => Frame::Real { dim: self.real_dim },
        }
    }

    /// Builds the almost complex structure; real-mode input is converted to
    /// complex structure equations here.
    pub fn acs(&self) -> Result<AlmostComplexStructure, AcsError> {
        match self.mode {
            Mode::Complex => AlmostComplexStructure::from_complex_equations(self.real_dim / 2, self.equations.clone()),
            Mode::Real => {
                let structure = CoframeStructure::new(self.frame(), self.equations.clone());
                let alg = structure.algebra()?;
                let j = self.j.as_ref().ok_or(AcsError::BadJShape(self.real_dim))?;
                AlmostComplexStructure::from_real(&alg, j)
            }
        }
    }

    pub fn render(&self) -> String {
        render_structure_file(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown catalog entry `{0}`")]
pub struct UnknownName(pub String);

pub const BUILTIN_NAMES: [&str; 5] = ["iwasawa", "nil4", "torus2", "torus3", "kodaira_thurston"];

pub fn builtin_source(name: &str) -> Result<&'static str, UnknownName> {
    Ok(match name {
        "iwasawa" => include_str!("data/iwasawa.alg"),
        "nil4" => include_str!("data/nil4.alg"),
        "torus2" => include_str!("data/torus2.alg"),
        "torus3" => include_str!("data/torus3.alg"),
        "kodaira_thurston" => include_str!("data/kodaira_thurston.alg"),
        other => return Err(UnknownName(other.to_string())),
    })
}

pub fn builtin(name: &str) -> Result<ManifoldDescriptor, UnknownName> {
    let src = builtin_source(name)?;
    let mut desc = parse_structure_file(src).expect("catalog sources parse");
    desc.provenance = Some(format!("builtin:{}", name));
    Ok(desc)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricParseError {
    #[error("bad metric syntax: {0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] MetricError),
}

/// Parses `diag:c1,...,cn`, `herm:h11,h12,...` (row-major) or
/// `cdiag:c1*exp(a1),...`.
pub fn parse_metric(spec: &str) -> Result<HermitianMetric, MetricParseError> {
    let syntax = |m: &str| MetricParseError::Syntax(m.to_string());
    let (kind, body) = spec.split_once(':').ok_or_else(|| syntax("expected `diag:`, `herm:` or `cdiag:`"))?;
    let items: Vec<&str> = body.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(syntax("empty entry"));
    }
    match kind.trim() {
        "diag" => {
            let entries = items
                .iter()
                .map(|s| parse_rational(s).map_err(|e| MetricParseError::Syntax(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(HermitianMetric::diagonal(&entries)?)
        }
        "herm" => {
            let n = (1..=items.len()).find(|k| k * k >= items.len()).unwrap_or(0);
            if n * n != items.len() {
                return Err(syntax("`herm:` needs n*n entries"));
            }
            let vals = items
                .iter()
                .map(|s| parse_coefficient(s).map_err(|e| MetricParseError::Syntax(format!("entry `{}`: {}", s, e))))
                .collect::<Result<Vec<Gauss>, _>>()?;
            let rows = vals.chunks(n).map(|r| r.to_vec()).collect();
            Ok(HermitianMetric::constant(Matrix::from_rows(rows))?)
        }
        "cdiag" => {
            let entries = items.iter().map(|s| conformal_entry(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(HermitianMetric::conformal_diagonal(entries)?)
        }
        other => Err(MetricParseError::Syntax(format!("unknown metric kind `{}`", other))),
    }
}

/// Flag syntax for a metric, inverse to [`parse_metric`].
pub fn render_metric(metric: &HermitianMetric) -> String {
    match metric {
        HermitianMetric::Constant { h } => {
            let n = h.rows();
            let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || h[(i, j)].is_zero()));
            if diagonal {
                let d: Vec<String> = (0..n).map(|i| render_coefficient(&h[(i, i)])).collect();
                format!("diag:{}", d.join(","))
            } else {
                let e: Vec<String> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| render_coefficient(&h[(i, j)])).collect();
                format!("herm:{}", e.join(","))
            }
        }
        HermitianMetric::ConformalDiagonal { entries } => {
            let e: Vec<String> = entries
                .iter()
                .map(|(c, a)| format!("{}*exp({})", render_coefficient(&Gauss::real(c.clone())), render_coefficient(&Gauss::real(a.clone()))))
                .collect();
            format!("cdiag:{}", e.join(","))
        }
    }
}

/// `c*exp(a)`, `exp(a)` or `c`.
fn conformal_entry(s: &str) -> Result<(Rational, Rational), MetricParseError> {
    let bad = || MetricParseError::Syntax(format!("bad conformal entry `{}`", s));
    let (c, e) = match s.split_once('*') {
        Some((c, e)) => (Some(c.trim()), Some(e.trim())),
        None if s.starts_with("exp") => (None, Some(s)),
        None => (Some(s), None),
    };
    let c = match c {
        Some(c) => parse_rational(c).map_err(|_| bad())?,
        None => Rational::from_integer(1.into()),
    };
    let a = match e {
        Some(e) => {
            let inner = e.strip_prefix("exp(").and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
            parse_rational(inner).map_err(|_| bad())?
        }
        None => Rational::from_integer(0.into()),
    };
    Ok((c, a))
}
