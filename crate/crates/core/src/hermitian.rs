//! Hermitian metrics on an almost complex Lie algebra: fundamental form,
//! C-linear Hodge star, formal adjoints, Laplacians, invariant harmonic
//! spaces, the L² pairing and the Lee form.
//!
//! Conventions. A metric is given by a positive definite Hermitian matrix
//! `h` in the (1,0)-coframe and its fundamental form is
//! `ω = (1/2i) Σ h_{jk̄} φ^j ∧ φ̄^k`. The orientation is `vol = ωⁿ/n!` and the
//! star is characterised by `α ∧ *β̄ = ⟨α, β⟩ vol`, where `⟨,⟩` is the
//! Hermitian extension of the Riemannian metric (so `|φ^j|² = 2/h_j` for a
//! diagonal metric). Integrals of invariant top forms are reported as exact
//! multiples of the symbolic total volume `Vol = ∫ vol`; for conformal metrics
//! `Vol` refers to the invariant reference volume obtained at `σ = 0`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::bigrading::{AlmostComplexStructure, DOp};
use crate::coefficients::{FormalCoefficient, Monomial};
use crate::form::{wedge_sign, Frame, InvariantForm, Word};
use crate::linalg::Matrix;
use crate::scalar::{Gauss, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("metric matrix must be {expected}x{expected}")]
    WrongSize { expected: usize },
    #[error("metric matrix is not Hermitian")]
    NotHermitian,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("this computation requires a constant-coefficient metric")]
    RequiresConstantMetric,
}

/// Metric input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HermitianMetric {
    /// Constant Hermitian matrix `h_{jk̄}` in the (1,0)-coframe.
    Constant { h: Matrix },
    /// Diagonal entries `h_j = c_j e^{a_j σ}` with `c_j > 0`.
    ConformalDiagonal { entries: Vec<(Rational, Rational)> },
}

impl HermitianMetric {
    pub fn constant(h: Matrix) -> Result<Self, MetricError> {
        let n = h.rows();
        if h.cols() != n || n == 0 {
            return Err(MetricError::WrongSize { expected: n.max(1) });
        }
        if h.adjoint() != h {
            return Err(MetricError::NotHermitian);
        }
        // leading principal minors
        for k in 1..=n {
            let mut sub = Matrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    sub[(i, j)] = h[(i, j)].clone();
                }
            }
            let det = sub.determinant();
            if !det.is_real() || !det.re.is_positive() {
                return Err(MetricError::NotPositiveDefinite);
            }
        }
        Ok(HermitianMetric::Constant { h })
    }

    pub fn diagonal(entries: &[Rational]) -> Result<Self, MetricError> {
        let n = entries.len();
        let mut h = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            h[(i, i)] = Gauss::real(e.clone());
        }
        Self::constant(h)
    }

    pub fn identity(n: usize) -> Self {
        HermitianMetric::Constant { h: Matrix::identity(n) }
    }

    pub fn conformal_diagonal(entries: Vec<(Rational, Rational)>) -> Result<Self, MetricError> {
        if entries.is_empty() {
            return Err(MetricError::WrongSize { expected: 1 });
        }
        if entries.iter().any(|(c, _)| !c.is_positive()) {
            return Err(MetricError::NotPositiveDefinite);
        }
        Ok(HermitianMetric::ConformalDiagonal { entries })
    }

    pub fn complex_dim(&self) -> usize {
        match self {
            HermitianMetric::Constant { h } => h.rows(),
            HermitianMetric::ConformalDiagonal { entries } => entries.len(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            HermitianMetric::Constant { .. } => true,
            HermitianMetric::ConformalDiagonal { entries } => entries.iter().all(|(_, a)| a.is_zero()),
        }
    }
}

/// `h = L D L*` with `L` unit lower triangular and `D` real; `None` if some
/// pivot is not a positive rational.
pub fn ldl_decomposition(h: &Matrix) -> Option<(Matrix, Vec<Rational>)> {
    let n = h.rows();
    let mut l = Matrix::identity(n);
    let mut d: Vec<Gauss> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = h[(j, j)].clone();
        for k in 0..j {
            dj -= &(&(&l[(j, k)] * &d[k]) * &l[(j, k)].conj());
        }
        if !dj.is_real() || !dj.re.is_positive() {
            return None;
        }
        for i in j + 1..n {
            let mut v = h[(i, j)].clone();
            for k in 0..j {
                v -= &(&(&l[(i, k)] * &d[k]) * &l[(j, k)].conj());
            }
            l[(i, j)] = &v / &dj;
        }
        d.push(dj);
    }
    Some((l, d.into_iter().map(|z| z.re).collect()))
}

/// Result of an invariant L² pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum L2Value {
    /// Exact scalar multiple of `Vol`.
    Exact(Gauss),
    /// Top coefficient relative to the reference volume form; its integral
    /// requires global information about `σ`.
    RequiresGlobalIntegration(FormalCoefficient),
}

impl L2Value {
    pub fn is_zero(&self) -> bool {
        match self {
            L2Value::Exact(c) => c.is_zero(),
            L2Value::RequiresGlobalIntegration(f) => f.is_zero(),
        }
    }
}

/// Basis of the invariant solutions of `∂̄α = 0, ∂(*α) = 0` in bidegree `(p, q)`.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub bidegree: (usize, usize),
    pub forms: Vec<InvariantForm>,
}

impl HarmonicBasis {
    pub fn dimension(&self) -> usize {
        self.forms.len()
    }
}

#[derive(Clone, Debug)]
pub struct LeeForm {
    pub theta: InvariantForm,
    /// `d*θ`, a constant function.
    pub d_star_theta: Gauss,
}

enum StarData {
    /// Diagonal metric in the original coframe.
    Diagonal { two_over_h: Vec<FormalCoefficient> },
    /// Non-diagonal constant metric, diagonal in `ψ^l = Σ_j L_{jl} φ^j`.
    Congruence { two_over_d: Vec<FormalCoefficient>, to_psi: Vec<InvariantForm>, from_psi: Vec<InvariantForm>, psi_kappa: FormalCoefficient },
}

/// An almost Hermitian structure: the ACS, a metric, and derived data.
pub struct HermitianStructure<'a> {
    acs: &'a AlmostComplexStructure,
    metric: HermitianMetric,
    omega: InvariantForm,
    vol: InvariantForm,
    reference_kappa: Gauss,
    star: StarData,
    star_cache: Mutex<HashMap<Word, InvariantForm>>,
}

impl<'a> HermitianStructure<'a> {
    pub fn new(acs: &'a AlmostComplexStructure, metric: HermitianMetric) -> Result<Self, MetricError> {
        let n = acs.complex_dim();
        if metric.complex_dim() != n {
            return Err(MetricError::WrongSize { expected: n });
        }
        let frame = acs.frame();
        let omega = fundamental_form(frame, &metric);
        let vol = omega.power(n).scale(&Gauss::real(Rational::one() / factorial(n)));
        let top = frame.full_word();

        let reference_kappa = match &metric {
            HermitianMetric::Constant { .. } => vol.constant_coefficient(top),
            HermitianMetric::ConformalDiagonal { entries } => {
                let at_zero: Vec<Rational> = entries.iter().map(|(c, _)| c.clone()).collect();
                let m0 = HermitianMetric::diagonal(&at_zero)?;
                let w0 = fundamental_form(frame, &m0);
                w0.power(n).scale(&Gauss::real(Rational::one() / factorial(n))).constant_coefficient(top)
            }
        };

        let two = Gauss::from_int(2);
        let star = match &metric {
            HermitianMetric::ConformalDiagonal { entries } => StarData::Diagonal {
                two_over_h: entries
                    .iter()
                    .map(|(c, a)| FormalCoefficient::exp(Gauss::real(Rational::from_integer(2.into()) / c), -a.clone()))
                    .collect(),
            },
            HermitianMetric::Constant { h } if is_diagonal(h) => StarData::Diagonal {
                two_over_h: (0..n).map(|j| FormalCoefficient::constant(&two / &h[(j, j)])).collect(),
            },
            HermitianMetric::Constant { h } => {
                let (l, d) = ldl_decomposition(h).ok_or(MetricError::NotPositiveDefinite)?;
                let q = l.transpose().inverse().expect("unit triangular");
                let mut to_psi = Vec::with_capacity(2 * n);
                let mut from_psi = Vec::with_capacity(2 * n);
                for j in 0..n {
                    to_psi.push(one_form(frame, (0..n).map(|l_| (l_, q[(j, l_)].clone()))));
                    from_psi.push(one_form(frame, (0..n).map(|jj| (jj, l[(jj, j)].clone()))));
                }
                for j in 0..n {
                    to_psi.push(one_form(frame, (0..n).map(|l_| (n + l_, q[(j, l_)].conj()))));
                    from_psi.push(one_form(frame, (0..n).map(|jj| (n + jj, l[(jj, j)].conj()))));
                }
                let dm = HermitianMetric::diagonal(&d)?;
                let psi_vol = fundamental_form(frame, &dm).power(n).scale(&Gauss::real(Rational::one() / factorial(n)));
                StarData::Congruence {
                    two_over_d: d.iter().map(|dj| FormalCoefficient::constant(Gauss::real(Rational::from_integer(2.into()) / dj))).collect(),
                    to_psi,
                    from_psi,
                    psi_kappa: psi_vol.coefficient(top),
                }
            }
        };
        Ok(HermitianStructure { acs, metric, omega, vol, reference_kappa, star, star_cache: Mutex::new(HashMap::new()) })
    }

    pub fn acs(&self) -> &'a AlmostComplexStructure {
        self.acs
    }

    pub fn metric(&self) -> &HermitianMetric {
        &self.metric
    }

    pub fn frame(&self) -> Frame {
        self.acs.frame()
    }

    pub fn n(&self) -> usize {
        self.acs.complex_dim()
    }

    pub fn is_constant(&self) -> bool {
        self.metric.is_constant()
    }

    /// `false` on non-unimodular algebras, where integration by parts of
    /// invariant forms is not available and adjoint-based results are only
    /// formal.
    pub fn invariant_stokes(&self) -> bool {
        self.acs.algebra().unimodular
    }

    pub fn fundamental_form(&self) -> &InvariantForm {
        &self.omega
    }

    pub fn volume_form(&self) -> &InvariantForm {
        &self.vol
    }

    /// `ω^k`
    pub fn omega_power(&self, k: usize) -> InvariantForm {
        self.omega.power(k)
    }

    /// C-linear Hodge star, linear over formal coefficients.
    pub fn hodge_star(&self, alpha: &InvariantForm) -> InvariantForm {
        let mut out = InvariantForm::zero(self.frame());
        for (w, c) in alpha.terms() {
            let sw = self.star_word(*w);
            out = out.add(&sw.mul_coefficient(c));
        }
        out
    }

    fn star_word(&self, w: Word) -> InvariantForm {
        if let Some(hit) = self.star_cache.lock().unwrap().get(&w) {
            return hit.clone();
        }
        let frame = self.frame();
        let value = match &self.star {
            StarData::Diagonal { two_over_h } => diagonal_star_word(frame, w, two_over_h, &self.vol.coefficient(frame.full_word())),
            StarData::Congruence { two_over_d, to_psi, from_psi, psi_kappa } => {
                let in_psi = InvariantForm::basis(frame, w).substitute(frame, to_psi);
                let mut starred = InvariantForm::zero(frame);
                for (pw, c) in in_psi.terms() {
                    starred = starred.add(&diagonal_star_word(frame, *pw, two_over_d, psi_kappa).mul_coefficient(c));
                }
                starred.substitute(frame, from_psi)
            }
        };
        self.star_cache.lock().unwrap().insert(w, value.clone());
        value
    }

    /// Formal adjoint of `d`, `μ`, `∂`, `∂̄` or `μ̄`:
    /// `d* = -*d*`, `μ* = -*μ̄*`, `∂* = -*∂̄*`, `∂̄* = -*∂*`, `μ̄* = -*μ*`.
    pub fn adjoint_apply(&self, which: DOp, alpha: &InvariantForm) -> InvariantForm {
        let inner = match which {
            DOp::D => DOp::D,
            DOp::Mu => DOp::MuBar,
            DOp::Del => DOp::DelBar,
            DOp::DelBar => DOp::Del,
            DOp::MuBar => DOp::Mu,
        };
        self.hodge_star(&self.acs.apply(inner, &self.hodge_star(alpha))).neg()
    }

    /// `Δ = A A* + A* A` for `A ∈ {d, ∂, ∂̄}`.
    pub fn laplacian(&self, which: DOp, alpha: &InvariantForm) -> InvariantForm {
        assert!(matches!(which, DOp::D | DOp::Del | DOp::DelBar), "Laplacians are defined for d, del and delbar");
        let a_star = self.adjoint_apply(which, alpha);
        let first = self.acs.apply(which, &a_star);
        let second = self.adjoint_apply(which, &self.acs.apply(which, alpha));
        first.add(&second)
    }

    /// Invariant solutions of `∂̄α = 0` and `∂(*α) = 0` among constant
    /// (p,q)-forms. With a conformal metric both equations must vanish as
    /// formal expressions.
    pub fn harmonic_space(&self, p: usize, q: usize) -> HarmonicBasis {
        let frame = self.frame();
        let basis = frame.words_of_bidegree(p, q);
        let columns: Vec<Vec<InvariantForm>> = basis
            .iter()
            .map(|&w| {
                let b = InvariantForm::basis(frame, w);
                vec![self.acs.delbar(&b), self.acs.del(&self.hodge_star(&b))]
            })
            .collect();
        let m = stacked_matrix(&columns);
        let forms = m.kernel().iter().map(|v| InvariantForm::from_vector(frame, &basis, v)).collect();
        HarmonicBasis { bidegree: (p, q), forms }
    }

    /// `∫ α ∧ *β̄` as a multiple of `Vol` when the integrand has constant
    /// density.
    pub fn l2_pairing(&self, alpha: &InvariantForm, beta: &InvariantForm) -> L2Value {
        let top = self.frame().full_word();
        let integrand = alpha.wedge(&self.hodge_star(&beta.conjugate(self.acs.frame_brackets())));
        self.integrate_top(&integrand.coefficient(top))
    }

    /// Integral of `f · θ^{top}` relative to the reference volume.
    pub fn integrate_top(&self, top_coefficient: &FormalCoefficient) -> L2Value {
        let ratio = top_coefficient.scale(&self.reference_kappa.inv());
        match ratio.as_constant() {
            Some(c) => L2Value::Exact(c),
            None => L2Value::RequiresGlobalIntegration(ratio),
        }
    }

    /// The Lee form: the unique `θ` with `dω^{n-1} = θ ∧ ω^{n-1}`.
    pub fn lee_form(&self) -> Result<LeeForm, MetricError> {
        if !self.is_constant() {
            return Err(MetricError::RequiresConstantMetric);
        }
        let frame = self.frame();
        let n = self.n();
        let w = self.omega_power(n - 1);
        let dw = self.acs.d(&w);
        let basis = frame.words_of_degree(1);
        let target_words = frame.words_of_degree(2 * n - 1);
        let columns: Vec<Vec<Gauss>> = basis
            .iter()
            .map(|&b| InvariantForm::basis(frame, b).wedge(&w).to_vector(&target_words))
            .collect();
        let m = Matrix::from_columns(target_words.len(), &columns);
        let x = m.solve(&dw.to_vector(&target_words)).ok_or(MetricError::NotPositiveDefinite)?;
        let theta = InvariantForm::from_vector(frame, &basis, &x);
        let dst = self.adjoint_apply(DOp::D, &theta);
        let d_star_theta = dst.constant_coefficient(0);
        Ok(LeeForm { theta, d_star_theta })
    }
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as i64).product::<i64>().max(1).into())
}

fn is_diagonal(h: &Matrix) -> bool {
    (0..h.rows()).all(|i| (0..h.cols()).all(|j| i == j || h[(i, j)].is_zero()))
}

fn one_form(frame: Frame, coeffs: impl IntoIterator<Item = (usize, Gauss)>) -> InvariantForm {
    let mut f = InvariantForm::zero(frame);
    for (a, c) in coeffs {
        if !c.is_zero() {
            f = f.add(&InvariantForm::monomial(frame, 1 << a, c));
        }
    }
    f
}

/// `ω = (1/2i) Σ h_{jk̄} φ^j ∧ φ̄^k`.
pub fn fundamental_form(frame: Frame, metric: &HermitianMetric) -> InvariantForm {
    let n = frame.complex_dim();
    let over_2i = Gauss::one() / Gauss::imag(Rational::from_integer(2.into()));
    let mut omega = InvariantForm::zero(frame);
    match metric {
        HermitianMetric::Constant { h } => {
            for j in 0..n {
                for k in 0..n {
                    if !h[(j, k)].is_zero() {
                        let c = &over_2i * &h[(j, k)];
                        omega = omega.add(&InvariantForm::from_letters(frame, &[j, n + k]).scale(&c));
                    }
                }
            }
        }
        HermitianMetric::ConformalDiagonal { entries } => {
            for (j, (c, a)) in entries.iter().enumerate() {
                let coef = FormalCoefficient::exp(&over_2i * &Gauss::real(c.clone()), a.clone());
                omega = omega.add(&InvariantForm::from_letters(frame, &[j, n + j]).mul_coefficient(&coef));
            }
        }
    }
    omega
}

/// Star of a basis word for a metric diagonal in the current coframe. For
/// `γ = φ^A φ̄^B` the only partner is `α = φ^B φ̄^A`, and
/// `*γ = (-1)^{|A||B|} |α|² κ ε · φ^{B^c} φ̄^{A^c}` where `κ` is the top
/// coefficient of `vol` and `ε` the sign of `α ∧ φ^{B^c} φ̄^{A^c}`.
fn diagonal_star_word(frame: Frame, w: Word, two_over_h: &[FormalCoefficient], kappa: &FormalCoefficient) -> InvariantForm {
    let n = frame.complex_dim();
    let hol_mask = frame.holomorphic_mask();
    let a_set = w & hol_mask;
    let b_set = (w >> n) & hol_mask;
    let alpha = b_set | (a_set << n);
    let complement = (!b_set & hol_mask) | ((!a_set & hol_mask) << n);
    let eps = wedge_sign(alpha, complement).expect("complementary words");
    let mut coef = kappa.clone();
    for j in 0..n {
        if a_set >> j & 1 == 1 {
            coef = coef.mul(&two_over_h[j]);
        }
        if b_set >> j & 1 == 1 {
            coef = coef.mul(&two_over_h[j]);
        }
    }
    let sign = if (a_set.count_ones() * b_set.count_ones()) % 2 == 1 { -eps } else { eps };
    let coef = if sign < 0 { coef.neg() } else { coef };
    InvariantForm::term(frame, complement, coef)
}

/// Columns are the images of the unknowns (each a list of forms, stacked);
/// rows are indexed by every `(equation, word, monomial)` that occurs.
pub fn stacked_matrix(columns: &[Vec<InvariantForm>]) -> Matrix {
    let mut keys: BTreeMap<(usize, Word, Monomial), usize> = BTreeMap::new();
    for col in columns {
        for (e, form) in col.iter().enumerate() {
            for (w, c) in form.terms() {
                for (m, _) in c.terms() {
                    let next = keys.len();
                    keys.entry((e, *w, m.clone())).or_insert(next);
                }
            }
        }
    }
    // stable row order
    let order: BTreeMap<usize, usize> = keys.values().enumerate().map(|(row, &slot)| (slot, row)).collect();
    let mut m = Matrix::zeros(keys.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (e, form) in col.iter().enumerate() {
            for (w, c) in form.terms() {
                for (mono, v) in c.terms() {
                    let slot = keys[&(e, *w, mono.clone())];
                    m[(order[&slot], j)] = v.clone();
                }
            }
        }
    }
    m
}
