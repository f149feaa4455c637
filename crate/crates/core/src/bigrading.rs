//! Almost complex structures as bigradings, the splitting
//! `d = μ + ∂ + ∂̄ + μ̄`, and the identities implied by `d² = 0`.

use serde::Serialize;

use crate::algebra::{AlgebraError, CoframeStructure, FrameBracketTable, StructuredAlgebra};
use crate::form::{FormError, Frame, InvariantForm, Word};
use crate::linalg::Matrix;
use crate::scalar::{Gauss, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AcsError {
    #[error("d{label} must be a 2-form over the complex coframe")]
    NotTwoForm { label: String },
    #[error("expected {expected} structure equations, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("J does not square to -Id")]
    NotComplexStructure,
    #[error("J has the wrong shape for real dimension {0}")]
    BadJShape(usize),
    #[error("real dimension {0} is not even")]
    OddDimension(usize),
    #[error("the real and complex differentials disagree after the frame change")]
    InconsistentFrameChange,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The four bidegree-shifting components of `d`, or `d` itself.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DOp {
    Mu,
    Del,
    DelBar,
    MuBar,
    D,
}

impl DOp {
    /// Bidegree shift `(Δp, Δq)`; `None` for the full differential.
    pub fn shift(self) -> Option<(isize, isize)> {
        match self {
            DOp::Mu => Some((2, -1)),
            DOp::Del => Some((1, 0)),
            DOp::DelBar => Some((0, 1)),
            DOp::MuBar => Some((-1, 2)),
            DOp::D => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            DOp::Mu => "mu",
            DOp::Del => "del",
            DOp::DelBar => "delbar",
            DOp::MuBar => "mubar",
            DOp::D => "d",
        }
    }
}

/// Components of `dα` for a pure-bidegree `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSplit {
    pub mu: InvariantForm,
    pub del: InvariantForm,
    pub delbar: InvariantForm,
    pub mubar: InvariantForm,
}

impl OperatorSplit {
    pub fn sum(&self) -> InvariantForm {
        self.mu.add(&self.del).add(&self.delbar).add(&self.mubar)
    }
}

/// An invariant almost complex structure, stored through the complex
/// structure equations `dφ^k` of a (1,0)-coframe.
#[derive(Clone, Debug)]
pub struct AlmostComplexStructure {
    n: usize,
    structure: CoframeStructure,
    algebra: StructuredAlgebra,
    /// `φ^j = Σ_k P_{jk} e^k` relating the complex coframe to a real one.
    real_coframe: Matrix,
    /// `J e_j = Σ_i J_{ij} e_i` in that real basis.
    j_matrix: Matrix,
}

impl AlmostComplexStructure {
    /// Builds the structure from `dφ¹..dφⁿ`, each a 2-form over
    /// `Frame::Complex { n }` with constant coefficients. The conjugate
    /// equations are derived. The real basis is `e^{2j-1} = φ^j + φ̄^j`,
    /// `e^{2j} = -i(φ^j - φ̄^j)`, so `J e_{2j-1} = e_{2j}`.
    pub fn from_complex_equations(n: usize, dphi: Vec<InvariantForm>) -> Result<Self, AcsError> {
        let frame = Frame::Complex { n };
        if dphi.len() != n {
            return Err(AcsError::WrongCount { expected: n, got: dphi.len() });
        }
        for (k, f) in dphi.iter().enumerate() {
            let ok = f.frame() == frame && f.is_constant() && f.terms().all(|(w, _)| w.count_ones() == 2);
            if !ok {
                return Err(AcsError::NotTwoForm { label: frame.coframe_label(k) });
            }
        }
        let mut all = dphi.clone();
        all.extend(dphi.iter().map(InvariantForm::conjugate_constant));
        let structure = CoframeStructure::new(frame, all);
        let algebra = structure.algebra()?;

        let half = Gauss::real(Rational::new(1.into(), 2.into()));
        let mut p = Matrix::zeros(n, 2 * n);
        let mut j = Matrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            p[(k, 2 * k)] = half.clone();
            p[(k, 2 * k + 1)] = half.mul_i();
            j[(2 * k + 1, 2 * k)] = Gauss::one();
            j[(2 * k, 2 * k + 1)] = -Gauss::one();
        }
        Ok(AlmostComplexStructure { n, structure, algebra, real_coframe: p, j_matrix: j })
    }

    /// Converts real structure constants plus a rational `J` (columns are the
    /// images `J e_j`) into complex structure equations. The (1,0)-coframe is
    /// `φ = (α - i J*α)/2` for the first real coframe elements `α = e^k` that
    /// give independent forms.
    pub fn from_real(alg: &StructuredAlgebra, j: &Matrix) -> Result<Self, AcsError> {
        let m = alg.dim();
        if m % 2 != 0 {
            return Err(AcsError::OddDimension(m));
        }
        if j.rows() != m || j.cols() != m || (0..m).any(|r| (0..m).any(|c| !j[(r, c)].is_real())) {
            return Err(AcsError::BadJShape(m));
        }
        let mut minus_id = Matrix::identity(m);
        for i in 0..m {
            minus_id[(i, i)] = -Gauss::one();
        }
        if j.mul(j) != minus_id {
            return Err(AcsError::NotComplexStructure);
        }
        let n = m / 2;
        let half = Gauss::real(Rational::new(1.into(), 2.into()));
        // J*e^k = Σ_j J_{kj} e^j is row k of J.
        let mut rows: Vec<Vec<Gauss>> = Vec::new();
        for k in 0..m {
            let candidate: Vec<Gauss> = (0..m)
                .map(|c| {
                    let delta = if c == k { Gauss::one() } else { Gauss::zero() };
                    (&delta - &j[(k, c)].mul_i()) * &half
                })
                .collect();
            let mut trial = rows.clone();
            trial.push(candidate.clone());
            if Matrix::from_rows(trial).rank() == rows.len() + 1 {
                rows.push(candidate);
            }
            if rows.len() == n {
                break;
            }
        }
        let p = Matrix::from_rows(rows);
        let cframe = Frame::Complex { n };
        let real = alg.real_structure();
        let rframe = real.frame();

        // θ = M e with M = [P; P̄]; e = M⁻¹ θ.
        let m_mat = p.vstack(&conj_matrix(&p));
        let m_inv = m_mat.inverse().ok_or(AcsError::NotComplexStructure)?;
        let e_in_theta: Vec<InvariantForm> = (0..m).map(|k| one_form(cframe, m_inv.row(k))).collect();
        let dphi: Vec<InvariantForm> = (0..n)
            .map(|jdx| {
                let mut acc = InvariantForm::zero(rframe);
                for k in 0..m {
                    acc = acc.add(&real.d_letter(k).scale(&p[(jdx, k)]));
                }
                acc.substitute(cframe, &e_in_theta)
            })
            .collect();
        let mut acs = Self::from_complex_equations(n, dphi)?;
        acs.real_coframe = p;
        acs.j_matrix = j.clone();
        if acs.real_structure().algebra()? != *alg {
            return Err(AcsError::InconsistentFrameChange);
        }
        Ok(acs)
    }

    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> Frame {
        self.structure.frame()
    }

    pub fn structure(&self) -> &CoframeStructure {
        &self.structure
    }

    pub fn frame_brackets(&self) -> &FrameBracketTable {
        self.structure.brackets()
    }

    /// Structure constants of the complexified algebra in the frame
    /// `V₁..Vₙ, V̄₁..V̄ₙ`, with flags.
    pub fn algebra(&self) -> &StructuredAlgebra {
        &self.algebra
    }

    pub fn real_coframe(&self) -> &Matrix {
        &self.real_coframe
    }

    pub fn j_matrix(&self) -> &Matrix {
        &self.j_matrix
    }

    /// `dφ^k` for the holomorphic letters.
    pub fn dphi(&self, k: usize) -> &InvariantForm {
        self.structure.d_letter(k)
    }

    /// Real coframe `e^k` written in the complex coframe.
    pub fn real_coframe_in_complex(&self) -> Vec<InvariantForm> {
        let m_mat = self.real_coframe.vstack(&conj_matrix(&self.real_coframe));
        let m_inv = m_mat.inverse().expect("coframe change is invertible");
        (0..2 * self.n).map(|k| one_form(self.frame(), m_inv.row(k))).collect()
    }

    /// Complex coframe `θ^c` written in the real coframe.
    pub fn complex_coframe_in_real(&self) -> Vec<InvariantForm> {
        let m_mat = self.real_coframe.vstack(&conj_matrix(&self.real_coframe));
        let rframe = Frame::Real { dim: 2 * self.n };
        (0..2 * self.n).map(|c| one_form(rframe, m_mat.row(c))).collect()
    }

    /// The underlying real Lie algebra in the real basis of `real_coframe`.
    pub fn real_structure(&self) -> CoframeStructure {
        let rframe = Frame::Real { dim: 2 * self.n };
        let to_real = self.complex_coframe_in_real();
        let dreal: Vec<InvariantForm> = self
            .real_coframe_in_complex()
            .iter()
            .map(|ek| self.structure.ce_differential(ek).substitute(rframe, &to_real))
            .collect();
        CoframeStructure::new(rframe, dreal)
    }

    pub fn d(&self, alpha: &InvariantForm) -> InvariantForm {
        self.structure.ce_differential(alpha)
    }

    /// Applies one component of `d` to an arbitrary form, bidegree part by
    /// bidegree part.
    pub fn apply(&self, op: DOp, alpha: &InvariantForm) -> InvariantForm {
        let Some((dp, dq)) = op.shift() else {
            return self.d(alpha);
        };
        let mut out = InvariantForm::zero(self.frame());
        for (p, q) in alpha.bidegrees() {
            let (tp, tq) = (p as isize + dp, q as isize + dq);
            if tp < 0 || tq < 0 {
                continue;
            }
            let part = self.d(&alpha.bidegree_part(p, q));
            out = out.add(&part.bidegree_part(tp as usize, tq as usize));
        }
        out
    }

    pub fn mu(&self, a: &InvariantForm) -> InvariantForm {
        self.apply(DOp::Mu, a)
    }

    pub fn del(&self, a: &InvariantForm) -> InvariantForm {
        self.apply(DOp::Del, a)
    }

    pub fn delbar(&self, a: &InvariantForm) -> InvariantForm {
        self.apply(DOp::DelBar, a)
    }

    pub fn mubar(&self, a: &InvariantForm) -> InvariantForm {
        self.apply(DOp::MuBar, a)
    }

    /// The four components of `dα` for `α` of pure bidegree.
    pub fn split_d(&self, alpha: &InvariantForm) -> Result<OperatorSplit, FormError> {
        if alpha.is_zero() {
            let z = InvariantForm::zero(self.frame());
            return Ok(OperatorSplit { mu: z.clone(), del: z.clone(), delbar: z.clone(), mubar: z });
        }
        let (p, q) = alpha.pure_bidegree().ok_or(FormError::MixedBidegree)?;
        let d = self.d(alpha);
        let part = |dp: isize, dq: isize| {
            let (tp, tq) = (p as isize + dp, q as isize + dq);
            if tp < 0 || tq < 0 {
                InvariantForm::zero(self.frame())
            } else {
                d.bidegree_part(tp as usize, tq as usize)
            }
        };
        Ok(OperatorSplit { mu: part(2, -1), del: part(1, 0), delbar: part(0, 1), mubar: part(-1, 2) })
    }

    /// `J` is integrable iff no `dφ^k` has a (0,2) part.
    pub fn is_integrable(&self) -> bool {
        (0..self.n).all(|k| self.dphi(k).bidegree_part(0, 2).is_zero())
    }

    /// Evaluates the seven operator identities implied by `d² = 0` on every
    /// basis word of every bidegree.
    pub fn check_relations(&self) -> Result<RelationReport, AlgebraError> {
        if !self.algebra.jacobi_ok {
            return Err(AlgebraError::NotJacobi);
        }
        let frame = self.frame();
        let n = self.n;
        let mut words: Vec<Word> = Vec::new();
        for p in 0..=n {
            for q in 0..=n {
                words.extend(frame.words_of_bidegree(p, q));
            }
        }
        let identities = relation_identities()
            .into_iter()
            .map(|(name, terms)| {
                let mut result = RelationResult {
                    name: name.to_string(),
                    holds: true,
                    words_checked: words.len(),
                    counterexample: None,
                    nonvanishing_terms: Vec::new(),
                };
                let mut nonvanishing = vec![false; terms.len()];
                for &w in &words {
                    let basis = InvariantForm::basis(frame, w);
                    let mut total = InvariantForm::zero(frame);
                    for (t, (outer, inner)) in terms.iter().enumerate() {
                        let v = self.apply(*outer, &self.apply(*inner, &basis));
                        if !v.is_zero() {
                            nonvanishing[t] = true;
                        }
                        total = total.add(&v);
                    }
                    if !total.is_zero() && result.holds {
                        result.holds = false;
                        result.counterexample = Some(format!("{} -> {}", frame.render_word(w), total.render()));
                    }
                }
                result.nonvanishing_terms = terms
                    .iter()
                    .zip(nonvanishing)
                    .filter(|(_, nz)| *nz)
                    .map(|((o, i), _)| format!("{} {}", o.symbol(), i.symbol()))
                    .collect();
                result
            })
            .collect();
        Ok(RelationReport { identities })
    }
}

fn conj_matrix(m: &Matrix) -> Matrix {
    let rows = (0..m.rows()).map(|r| m.row(r).iter().map(Gauss::conj).collect()).collect();
    Matrix::from_rows(rows)
}

fn one_form(frame: Frame, coeffs: &[Gauss]) -> InvariantForm {
    let mut f = InvariantForm::zero(frame);
    for (a, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            f = f.add(&InvariantForm::monomial(frame, 1 << a, c.clone()));
        }
    }
    f
}

/// The seven identities as sums of compositions `outer ∘ inner`.
pub fn relation_identities() -> Vec<(&'static str, Vec<(DOp, DOp)>)> {
    use DOp::*;
    vec![
        ("mu^2 = 0", vec![(Mu, Mu)]),
        ("mu del + del mu = 0", vec![(Mu, Del), (Del, Mu)]),
        ("del^2 + mu delbar + delbar mu = 0", vec![(Del, Del), (Mu, DelBar), (DelBar, Mu)]),
        (
            "del delbar + delbar del + mu mubar + mubar mu = 0",
            vec![(Del, DelBar), (DelBar, Del), (Mu, MuBar), (MuBar, Mu)],
        ),
        ("delbar^2 + mubar del + del mubar = 0", vec![(DelBar, DelBar), (MuBar, Del), (Del, MuBar)]),
        ("mubar delbar + delbar mubar = 0", vec![(MuBar, DelBar), (DelBar, MuBar)]),
        ("mubar^2 = 0", vec![(MuBar, MuBar)]),
    ]
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationResult {
    pub name: String,
    pub holds: bool,
    pub words_checked: usize,
    pub counterexample: Option<String>,
    /// Individual compositions that are nonzero as operators even though the
    /// identity as a whole holds.
    pub nonvanishing_terms: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationReport {
    pub identities: Vec<RelationResult>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|r| r.holds)
    }
}

/// Rational `J` for the standard structure `J e_{2j-1} = e_{2j}`.
pub fn standard_j(real_dim: usize) -> Matrix {
    let mut j = Matrix::zeros(real_dim, real_dim);
    for k in 0..real_dim / 2 {
        j[(2 * k + 1, 2 * k)] = Gauss::one();
        j[(2 * k, 2 * k + 1)] = -Gauss::one();
    }
    j
}
