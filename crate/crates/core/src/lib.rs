//! Exact invariant exterior calculus on Lie algebras with almost complex
//! structures, and classification of invariant Hermitian metrics.
//!
//! All arithmetic is over Gaussian rationals. Forms may carry formal
//! coefficients built from a real function `σ`, its conformal factors
//! `e^{aσ}` and frame derivatives such as `V₃V̄₃(σ)`.

pub mod algebra;
pub mod bigrading;
pub mod catalog;
pub mod conditions;
pub mod coefficients;
pub mod form;
pub mod hermitian;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scalar;

pub use algebra::{validate_algebra, AlgebraError, FrameBracketTable, StructuredAlgebra};
pub use bigrading::{AcsError, AlmostComplexStructure, DOp, OperatorSplit, RelationReport};
pub use catalog::{builtin, parse_metric, parse_structure_file, ManifoldDescriptor, ParseError};
pub use coefficients::FormalCoefficient;
pub use conditions::{classify, MetricReport, ObstructionCertificate, Verdict};
pub use form::{Frame, InvariantForm, Word};
pub use hermitian::{HarmonicBasis, HermitianMetric, HermitianStructure, L2Value, MetricError};
pub use linalg::Matrix;
pub use scalar::{Gauss, Rational};
