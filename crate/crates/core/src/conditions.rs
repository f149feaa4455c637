//! Metric classification: almost-Kähler, balanced, SKT, Gauduchon, strongly
//! Gauduchon (invariant level), the integral condition and its orthogonality
//! form, invariant Dolbeault cohomology and the almost-Kähler obstruction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bigrading::{AlmostComplexStructure, DOp};
use crate::coefficients::{DerivWord, FormalCoefficient, Monomial};
use crate::form::{word_indices, Frame, InvariantForm};
use crate::hermitian::{stacked_matrix, HarmonicBasis, HermitianStructure, L2Value, LeeForm};
use crate::linalg::Matrix;
use crate::scalar::{Gauss, Rational};

/// Maximal derivative order of candidate primitives in the exactness search.
pub const DERIVATIVE_ORDER_BOUND: usize = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionsError {
    #[error("the structure constants violate the Jacobi identity")]
    JacobiViolation,
    #[error("J is not integrable; Dolbeault cohomology is undefined")]
    NotIntegrable,
}

fn require_jacobi(acs: &AlmostComplexStructure) -> Result<(), ConditionsError> {
    if acs.algebra().jacobi_ok {
        Ok(())
    } else {
        Err(ConditionsError::JacobiViolation)
    }
}

#[derive(Clone, Debug)]
pub struct GauduchonCheck {
    pub verdict: Verdict,
    /// `∂∂̄ω^{n-1}`
    pub value: InvariantForm,
    /// The value depends on `σ`; a failure means "nonzero as a formal expression".
    pub formal: bool,
}

pub fn is_gauduchon(hs: &HermitianStructure) -> GauduchonCheck {
    let acs = hs.acs();
    let w = hs.omega_power(hs.n() - 1);
    let value = acs.del(&acs.delbar(&w));
    GauduchonCheck { verdict: Verdict::from_bool(value.is_zero()), formal: !value.is_constant(), value }
}

#[derive(Clone, Debug)]
pub struct StronglyGauduchonCheck {
    pub verdict: Verdict,
    /// `∂ω^{n-1}`
    pub target: InvariantForm,
    /// Invariant `(n, n-2)`-form `λ` with `∂̄λ = ∂ω^{n-1}`.
    pub witness: Option<InvariantForm>,
}

/// Solves `∂̄λ = ∂ω^{n-1}` over constant invariant `(n, n-2)`-forms, taking
/// free variables to be zero. Not Gauduchon means not strongly Gauduchon.
pub fn strongly_gauduchon_witness(hs: &HermitianStructure, gauduchon: &GauduchonCheck) -> StronglyGauduchonCheck {
    let acs = hs.acs();
    let n = hs.n();
    let frame = hs.frame();
    let target = acs.del(&hs.omega_power(n - 1));
    if gauduchon.verdict != Verdict::Holds {
        return StronglyGauduchonCheck { verdict: Verdict::Fails, target, witness: None };
    }
    if target.is_zero() {
        return StronglyGauduchonCheck { verdict: Verdict::Holds, target, witness: Some(InvariantForm::zero(frame)) };
    }
    if n < 2 {
        return StronglyGauduchonCheck { verdict: Verdict::Fails, target, witness: None };
    }
    let basis = frame.words_of_bidegree(n, n - 2);
    match solve_for(&basis, frame, |b| acs.delbar(b), &target) {
        Some(lambda) => StronglyGauduchonCheck { verdict: Verdict::Holds, target, witness: Some(lambda) },
        None if hs.is_constant() => StronglyGauduchonCheck { verdict: Verdict::Fails, target, witness: None },
        None => StronglyGauduchonCheck { verdict: Verdict::Undetermined, target, witness: None },
    }
}

/// Finds constant coefficients `x` with `Σ x_w op(φ^w) = target` as formal
/// expressions.
fn solve_for(
    basis: &[u32],
    frame: Frame,
    op: impl Fn(&InvariantForm) -> InvariantForm,
    target: &InvariantForm,
) -> Option<InvariantForm> {
    let mut columns: Vec<Vec<InvariantForm>> = basis.iter().map(|&w| vec![op(&InvariantForm::basis(frame, w))]).collect();
    columns.push(vec![target.clone()]);
    let full = stacked_matrix(&columns);
    let k = basis.len();
    let a = Matrix::from_columns(full.rows(), &(0..k).map(|j| full.column(j)).collect::<Vec<_>>());
    let x = a.solve(&full.column(k))?;
    Some(InvariantForm::from_vector(frame, basis, &x))
}

/// Integral of a top form, relative to `Vol`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralValue {
    /// Constant density: `c · Vol`.
    Exact(Gauss),
    /// The integrand vanishes identically as a formal expression.
    FormalZero,
    /// The integrand is `dβ` for the recorded invariant-frame `β`.
    ExactDifferential(InvariantForm),
    /// Nonzero formal density with no primitive found.
    Undetermined(FormalCoefficient),
}

impl IntegralValue {
    pub fn is_zero(&self) -> Option<bool> {
        match self {
            IntegralValue::Exact(c) => Some(c.is_zero()),
            IntegralValue::FormalZero | IntegralValue::ExactDifferential(_) => Some(true),
            IntegralValue::Undetermined(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegralEntry {
    pub eta: InvariantForm,
    /// Top coefficient of `∂η ∧ ω^{n-1}`.
    pub integrand: FormalCoefficient,
    pub value: IntegralValue,
}

#[derive(Clone, Debug)]
pub struct IntegralConditionCheck {
    pub verdict: Verdict,
    pub entries: Vec<IntegralEntry>,
}

/// `∫ ∂η ∧ ω^{n-1}` for a single `η`.
pub fn integral_value(hs: &HermitianStructure, eta: &InvariantForm) -> IntegralEntry {
    let acs = hs.acs();
    let n = hs.n();
    let top = hs.frame().full_word();
    let form = acs.del(eta).wedge(&hs.omega_power(n - 1));
    let integrand = form.coefficient(top);
    let value = if integrand.is_zero() {
        IntegralValue::FormalZero
    } else {
        match hs.integrate_top(&integrand) {
            L2Value::Exact(c) => IntegralValue::Exact(c),
            L2Value::RequiresGlobalIntegration(_) => match find_primitive(acs, &form.degree_part(2 * n), DERIVATIVE_ORDER_BOUND) {
                Some(beta) => IntegralValue::ExactDifferential(beta),
                None => IntegralValue::Undetermined(integrand.clone()),
            },
        }
    };
    IntegralEntry { eta: eta.clone(), integrand, value }
}

pub fn integral_condition(hs: &HermitianStructure, harmonic: &HarmonicBasis) -> IntegralConditionCheck {
    integral_condition_for(hs, &harmonic.forms)
}

pub fn integral_condition_for(hs: &HermitianStructure, etas: &[InvariantForm]) -> IntegralConditionCheck {
    let entries: Vec<IntegralEntry> = etas.iter().map(|eta| integral_value(hs, eta)).collect();
    let verdict = combine(entries.iter().map(|e| e.value.is_zero()));
    IntegralConditionCheck { verdict, entries }
}

fn combine(results: impl Iterator<Item = Option<bool>>) -> Verdict {
    let mut undetermined = false;
    for r in results {
        match r {
            Some(false) => return Verdict::Fails,
            None => undetermined = true,
            Some(true) => {}
        }
    }
    if undetermined {
        Verdict::Undetermined
    } else {
        Verdict::Holds
    }
}

/// Candidate monomials: exponents from the target, at most two factors, total
/// derivative order at most `bound`. The empty word stands for `σ` itself.
fn candidate_monomials(frame: Frame, exponents: &BTreeSet<Rational>, bound: usize) -> Vec<Monomial> {
    let letters = frame.size() as u8;
    let mut words: Vec<DerivWord> = vec![Vec::new()];
    let mut layer: Vec<DerivWord> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().copied().unwrap_or(0);
            for a in start..letters {
                let mut x = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let mut factor_sets: BTreeSet<Vec<DerivWord>> = BTreeSet::new();
    factor_sets.insert(Vec::new());
    for (i, a) in words.iter().enumerate() {
        factor_sets.insert(vec![a.clone()]);
        for b in &words[i..] {
            if a.len() + b.len() <= bound {
                let mut f = vec![a.clone(), b.clone()];
                f.sort();
                factor_sets.insert(f);
            }
        }
    }
    let mut out = Vec::new();
    for e in exponents {
        for f in &factor_sets {
            out.push(Monomial { exponent: e.clone(), factors: f.clone() });
        }
    }
    out
}

/// Searches a `(2n-1)`-form `β` with formal coefficients of bounded derivative
/// order such that `dβ` equals the given top form.
pub fn find_primitive(acs: &AlmostComplexStructure, target: &InvariantForm, bound: usize) -> Option<InvariantForm> {
    let frame = acs.frame();
    let m = frame.size();
    let exponents: BTreeSet<Rational> = target.terms().flat_map(|(_, c)| c.terms().map(|(mono, _)| mono.exponent.clone()).collect::<Vec<_>>()).collect();
    let monomials = candidate_monomials(frame, &exponents, bound);
    let words = frame.words_of_degree(m - 1);
    let mut unknowns: Vec<InvariantForm> = Vec::new();
    for &w in &words {
        for mono in &monomials {
            let mut c = FormalCoefficient::zero();
            c.add_term(mono.clone(), Gauss::one());
            unknowns.push(InvariantForm::term(frame, w, c));
        }
    }
    let mut columns: Vec<Vec<InvariantForm>> = unknowns.iter().map(|b| vec![acs.d(b)]).collect();
    columns.push(vec![target.clone()]);
    let full = stacked_matrix(&columns);
    let k = unknowns.len();
    let a = Matrix::from_columns(full.rows(), &(0..k).map(|j| full.column(j)).collect::<Vec<_>>());
    let x = a.solve(&full.column(k))?;
    let mut beta = InvariantForm::zero(frame);
    for (u, c) in unknowns.iter().zip(&x) {
        if !c.is_zero() {
            beta = beta.add(&u.scale(c));
        }
    }
    debug_assert_eq!(acs.d(&beta), *target);
    Some(beta)
}

#[derive(Clone, Debug)]
pub struct OrthogonalityCheck {
    pub verdict: Verdict,
    /// `∂*ω`
    pub del_star_omega: InvariantForm,
    /// `(η, ∂*ω)` for each harmonic basis element.
    pub pairings: Vec<L2Value>,
}

pub fn orthogonality_check(hs: &HermitianStructure, harmonic: &HarmonicBasis) -> OrthogonalityCheck {
    let del_star_omega = hs.adjoint_apply(DOp::Del, hs.fundamental_form());
    let pairings: Vec<L2Value> = harmonic.forms.iter().map(|eta| hs.l2_pairing(eta, &del_star_omega)).collect();
    let verdict = combine(pairings.iter().map(|p| match p {
        L2Value::Exact(c) => Some(c.is_zero()),
        L2Value::RequiresGlobalIntegration(f) if f.is_zero() => Some(true),
        L2Value::RequiresGlobalIntegration(_) => None,
    }));
    OrthogonalityCheck { verdict, del_star_omega, pairings }
}

/// Full classification of one metric.
#[derive(Clone, Debug)]
pub struct MetricReport {
    pub almost_kahler: Verdict,
    pub balanced: Verdict,
    pub skt: Verdict,
    pub gauduchon: GauduchonCheck,
    pub strongly_gauduchon: StronglyGauduchonCheck,
    pub integral_condition: IntegralConditionCheck,
    pub orthogonality: OrthogonalityCheck,
    pub d_omega: InvariantForm,
    pub del_omega: InvariantForm,
    pub harmonic_01: HarmonicBasis,
    pub lee: Option<LeeForm>,
    /// Dimensions of the invariant harmonic spaces, by bidegree.
    pub hpq: Vec<((usize, usize), usize)>,
    pub notes: Vec<String>,
}

impl MetricReport {
    /// Definitional implications that must hold on every run.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.strongly_gauduchon.verdict == Verdict::Holds && self.gauduchon.verdict != Verdict::Holds {
            v.push("strongly Gauduchon without Gauduchon".to_string());
        }
        if self.balanced == Verdict::Holds {
            if self.gauduchon.verdict != Verdict::Holds {
                v.push("balanced but not Gauduchon".to_string());
            }
            let zero_witness = self.strongly_gauduchon.witness.as_ref().map(InvariantForm::is_zero).unwrap_or(false);
            if self.strongly_gauduchon.verdict != Verdict::Holds || !zero_witness {
                v.push("balanced but no zero strongly Gauduchon witness".to_string());
            }
        }
        if self.almost_kahler == Verdict::Holds && self.balanced != Verdict::Holds {
            v.push("almost-Kähler but not balanced".to_string());
        }
        v
    }
}

pub fn classify(hs: &HermitianStructure) -> Result<MetricReport, ConditionsError> {
    let acs = hs.acs();
    require_jacobi(acs)?;
    let n = hs.n();
    let omega = hs.fundamental_form();
    let d_omega = acs.d(omega);
    let del_omega = acs.del(omega);
    let balanced = acs.d(&hs.omega_power(n - 1)).is_zero();
    let skt = acs.del(&acs.delbar(omega)).is_zero();
    let gauduchon = is_gauduchon(hs);
    let strongly_gauduchon = strongly_gauduchon_witness(hs, &gauduchon);
    let harmonic_01 = hs.harmonic_space(0, 1);
    let integral_condition = integral_condition(hs, &harmonic_01);
    let orthogonality = orthogonality_check(hs, &harmonic_01);
    let lee = hs.lee_form().ok();
    let mut hpq = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            hpq.push(((p, q), hs.harmonic_space(p, q).dimension()));
        }
    }

    let mut notes = vec![
        "strongly Gauduchon is decided at invariant level".to_string(),
        "harmonic spaces are the invariant part".to_string(),
    ];
    if !hs.is_constant() {
        notes.push("nonzero results are nonzero as formal expressions in sigma".to_string());
    }
    if !hs.invariant_stokes() {
        notes.push("invariant-Stokes unavailable: the algebra is not unimodular".to_string());
    }

    Ok(MetricReport {
        almost_kahler: Verdict::from_bool(d_omega.is_zero()),
        balanced: Verdict::from_bool(balanced),
        skt: Verdict::from_bool(skt),
        gauduchon,
        strongly_gauduchon,
        integral_condition,
        orthogonality,
        d_omega,
        del_omega,
        harmonic_01,
        lee,
        hpq,
        notes,
    })
}

/// Invariant Dolbeault cohomology `H^{p,q}`.
#[derive(Clone, Debug)]
pub struct DolbeaultSpace {
    pub bidegree: (usize, usize),
    pub dimension: usize,
    /// Closed forms whose classes form a basis.
    pub representatives: Vec<InvariantForm>,
}

pub fn dolbeault_cohomology(acs: &AlmostComplexStructure, p: usize, q: usize) -> Result<DolbeaultSpace, ConditionsError> {
    require_jacobi(acs)?;
    if !acs.is_integrable() {
        return Err(ConditionsError::NotIntegrable);
    }
    let frame = acs.frame();
    let basis = frame.words_of_bidegree(p, q);
    let closed_matrix = {
        let cols: Vec<Vec<InvariantForm>> = basis.iter().map(|&w| vec![acs.delbar(&InvariantForm::basis(frame, w))]).collect();
        stacked_matrix(&cols)
    };
    let closed: Vec<Vec<Gauss>> = if closed_matrix.rows() == 0 {
        (0..basis.len()).map(|j| (0..basis.len()).map(|i| if i == j { Gauss::one() } else { Gauss::zero() }).collect()).collect()
    } else {
        closed_matrix.kernel()
    };
    let exact: Vec<Vec<Gauss>> = if q == 0 {
        Vec::new()
    } else {
        frame
            .words_of_bidegree(p, q - 1)
            .iter()
            .map(|&w| acs.delbar(&InvariantForm::basis(frame, w)).to_vector(&basis))
            .collect()
    };
    let mut span: Vec<Vec<Gauss>> = exact.clone();
    let mut rank = rank_of(&span, basis.len());
    let exact_rank = rank;
    let mut representatives = Vec::new();
    for z in closed {
        span.push(z.clone());
        let r = rank_of(&span, basis.len());
        if r > rank {
            rank = r;
            representatives.push(InvariantForm::from_vector(frame, &basis, &z));
        } else {
            span.pop();
        }
    }
    Ok(DolbeaultSpace { bidegree: (p, q), dimension: rank - exact_rank, representatives })
}

fn rank_of(vectors: &[Vec<Gauss>], len: usize) -> usize {
    if vectors.is_empty() || len == 0 {
        return 0;
    }
    Matrix::from_columns(len, vectors).rank()
}

/// Result of the almost-Kähler obstruction search.
#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    /// Basis of closed `J`-compatible real invariant 2-forms, in the real coframe.
    pub solution_space: Vec<InvariantForm>,
    /// Hermitian matrices `H` with `ω = i Σ H_{jk} φ^j ∧ φ̄^k` for the same basis.
    pub hermitian_matrices: Vec<Matrix>,
    /// Real vector `v` with `ω(v, Jv) = 0` for every `ω` in the solution space.
    pub certificate: Option<Vec<Rational>>,
}

impl ObstructionCertificate {
    pub fn is_conclusive(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Evaluates a real-frame 2-form on a pair of real vectors.
pub fn evaluate_two_form(form: &InvariantForm, v: &[Gauss], w: &[Gauss]) -> Gauss {
    let mut acc = Gauss::zero();
    for (word, c) in form.terms() {
        let idx = word_indices(*word);
        let (a, b) = (idx[0], idx[1]);
        let c = c.as_constant().expect("constant form");
        acc += &(&c * &(&(&v[a] * &w[b]) - &(&v[b] * &w[a])));
    }
    acc
}

pub fn almost_kahler_obstruction(acs: &AlmostComplexStructure) -> Result<ObstructionCertificate, ConditionsError> {
    require_jacobi(acs)?;
    let n = acs.complex_dim();
    let frame = acs.frame();
    let m = 2 * n;

    // real parameters of a Hermitian matrix, each with its 2-form i H φ^j∧φ̄^k
    let mut params: Vec<(Matrix, InvariantForm)> = Vec::new();
    let unit = |j: usize, k: usize, c: Gauss| InvariantForm::from_letters(frame, &[j, n + k]).scale(&c.mul_i());
    for j in 0..n {
        let mut h = Matrix::zeros(n, n);
        h[(j, j)] = Gauss::one();
        params.push((h, unit(j, j, Gauss::one())));
        for k in j + 1..n {
            let mut h = Matrix::zeros(n, n);
            h[(j, k)] = Gauss::one();
            h[(k, j)] = Gauss::one();
            params.push((h, unit(j, k, Gauss::one()).add(&unit(k, j, Gauss::one()))));
            let mut h = Matrix::zeros(n, n);
            h[(j, k)] = Gauss::i();
            h[(k, j)] = -Gauss::i();
            params.push((h, unit(j, k, Gauss::i()).add(&unit(k, j, -Gauss::i()))));
        }
    }
    let three = frame.words_of_degree(3);
    let columns: Vec<Vec<Gauss>> = params
        .iter()
        .map(|(_, f)| {
            let v = acs.d(f).to_vector(&three);
            v.iter().map(|z| Gauss::real(z.re.clone())).chain(v.iter().map(|z| Gauss::real(z.im.clone()))).collect()
        })
        .collect();
    let system = Matrix::from_columns(2 * three.len(), &columns);
    let kernel: Vec<Vec<Gauss>> = if system.rows() == 0 {
        (0..params.len()).map(|j| (0..params.len()).map(|i| if i == j { Gauss::one() } else { Gauss::zero() }).collect()).collect()
    } else {
        system.kernel()
    };

    let to_real = acs.complex_coframe_in_real();
    let rframe = Frame::Real { dim: m };
    let mut hermitian_matrices = Vec::new();
    let mut solution_space = Vec::new();
    for x in &kernel {
        let mut h = Matrix::zeros(n, n);
        let mut form = InvariantForm::zero(frame);
        for (c, (hp, fp)) in x.iter().zip(&params) {
            for a in 0..n {
                for b in 0..n {
                    let add = &hp[(a, b)] * c;
                    h[(a, b)] += &add;
                }
            }
            form = form.add(&fp.scale(c));
        }
        hermitian_matrices.push(h);
        solution_space.push(form.substitute(rframe, &to_real));
    }

    let j = acs.j_matrix();
    // quadratic forms v ↦ ω(v, Jv), as symmetric matrices
    let quadratic: Vec<Matrix> = solution_space
        .iter()
        .map(|f| {
            let mut om = Matrix::zeros(m, m);
            for (w, c) in f.terms() {
                let idx = word_indices(*w);
                let c = c.as_constant().expect("constant form");
                om[(idx[0], idx[1])] = c.clone();
                om[(idx[1], idx[0])] = -c;
            }
            let a = om.mul(j);
            let mut s = Matrix::zeros(m, m);
            let half = Gauss::real(Rational::new(1.into(), 2.into()));
            for r in 0..m {
                for c in 0..m {
                    s[(r, c)] = &(&a[(r, c)] + &a[(c, r)]) * &half;
                }
            }
            s
        })
        .collect();

    let vanishes_everywhere = |v: &[Gauss]| {
        let jv = j.apply(v);
        solution_space.iter().all(|f| evaluate_two_form(f, v, &jv).is_zero())
    };

    let mut certificate = None;
    for i in 0..m {
        let v: Vec<Gauss> = (0..m).map(|k| if k == i { Gauss::one() } else { Gauss::zero() }).collect();
        if vanishes_everywhere(&v) {
            certificate = Some(v);
            break;
        }
    }
    if certificate.is_none() && !quadratic.is_empty() {
        let mut stacked = quadratic[0].clone();
        for q in &quadratic[1..] {
            stacked = stacked.vstack(q);
        }
        if let Some(v) = stacked.kernel().into_iter().next() {
            if vanishes_everywhere(&v) {
                certificate = Some(v);
            }
        }
    }
    let certificate = certificate.map(|v| v.into_iter().map(|z| z.re).collect());
    Ok(ObstructionCertificate { solution_space, hermitian_matrices, certificate })
}

/// `ω_H(v, Jv) = 2 Σ H_{jk} z_j z̄_k` with `z = P v`: the complex-frame
/// evaluation used to cross-check certificates.
pub fn hermitian_quadratic(acs: &AlmostComplexStructure, h: &Matrix, v: &[Rational]) -> Gauss {
    let p = acs.real_coframe();
    let vg: Vec<Gauss> = v.iter().map(|x| Gauss::real(x.clone())).collect();
    let z = p.apply(&vg);
    let n = acs.complex_dim();
    let mut acc = Gauss::zero();
    for a in 0..n {
        for b in 0..n {
            acc += &(&(&h[(a, b)] * &z[a]) * &z[b].conj());
        }
    }
    acc.scale(&Rational::from_integer(2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::hermitian::HermitianMetric;
    use crate::scalar::{int, rat};

    fn acs(name: &str) -> AlmostComplexStructure {
        builtin(name).unwrap().acs().unwrap()
    }

    #[test]
    fn nil4_identity_metric() {
        let a = acs("nil4");
        let hs = HermitianStructure::new(&a, HermitianMetric::identity(2)).unwrap();
        let f = a.frame();
        let r = classify(&hs).unwrap();
        assert_eq!(r.del_omega, InvariantForm::from_letters(f, &[0, 1, 2]).scale(&Gauss::real(rat(-1, 2))));
        assert_eq!(r.almost_kahler, Verdict::Fails);
        assert_eq!(r.gauduchon.verdict, Verdict::Holds);
        assert_eq!(r.strongly_gauduchon.verdict, Verdict::Holds);
        let lambda = r.strongly_gauduchon.witness.clone().unwrap();
        assert_eq!(a.delbar(&lambda), r.strongly_gauduchon.target);
        assert_eq!(r.integral_condition.verdict, Verdict::Holds);
        assert_eq!(r.orthogonality.verdict, Verdict::Holds);
        assert!(r.invariant_violations().is_empty());
    }

    #[test]
    fn iwasawa_sigma_metric() {
        let a = acs("iwasawa");
        let m = HermitianMetric::conformal_diagonal(vec![(int(1), int(-2)), (int(1), int(-2)), (int(1), int(2))]).unwrap();
        let hs = HermitianStructure::new(&a, m).unwrap();
        let r = classify(&hs).unwrap();
        assert_eq!(r.gauduchon.verdict, Verdict::Fails);
        assert!(r.gauduchon.formal);
        assert_eq!(r.strongly_gauduchon.verdict, Verdict::Fails);
        assert_eq!(r.integral_condition.verdict, Verdict::Holds);
        assert!(r.integral_condition.entries.iter().all(|e| e.value == IntegralValue::FormalZero));
        assert_eq!(r.orthogonality.verdict, Verdict::Holds);
    }

    #[test]
    fn torus_is_kahler() {
        let a = acs("torus2");
        let hs = HermitianStructure::new(&a, HermitianMetric::identity(2)).unwrap();
        let r = classify(&hs).unwrap();
        for v in [r.almost_kahler, r.balanced, r.skt, r.gauduchon.verdict, r.strongly_gauduchon.verdict, r.integral_condition.verdict] {
            assert_eq!(v, Verdict::Holds);
        }
        assert!(r.strongly_gauduchon.witness.unwrap().is_zero());
    }

    #[test]
    fn iwasawa_standard_metric_is_balanced() {
        let a = acs("iwasawa");
        let hs = HermitianStructure::new(&a, HermitianMetric::identity(3)).unwrap();
        let r = classify(&hs).unwrap();
        assert_eq!(r.balanced, Verdict::Holds);
        assert!(r.strongly_gauduchon.witness.as_ref().unwrap().is_zero());
        assert!(r.lee.unwrap().theta.is_zero());
    }

    #[test]
    fn dolbeault_dimensions() {
        let iw = acs("iwasawa");
        let h01 = dolbeault_cohomology(&iw, 0, 1).unwrap();
        assert_eq!(h01.dimension, 2);
        let f = iw.frame();
        assert_eq!(h01.representatives, vec![InvariantForm::coframe(f, 3), InvariantForm::coframe(f, 4)]);
        assert_eq!(dolbeault_cohomology(&iw, 1, 0).unwrap().dimension, 3);
        assert_eq!(dolbeault_cohomology(&acs("torus3"), 0, 1).unwrap().dimension, 3);
        assert_eq!(dolbeault_cohomology(&acs("nil4"), 0, 1).unwrap_err(), ConditionsError::NotIntegrable);
    }

    #[test]
    fn nil4_obstruction() {
        let a = acs("nil4");
        let ob = almost_kahler_obstruction(&a).unwrap();
        assert_eq!(ob.solution_space.len(), 2);
        let v = ob.certificate.clone().unwrap();
        assert_eq!(v, vec![int(0), int(0), int(1), int(0)]);
        for h in &ob.hermitian_matrices {
            assert!(hermitian_quadratic(&a, h, &v).is_zero());
        }
    }

    #[test]
    fn torus_obstruction_is_inconclusive() {
        let ob = almost_kahler_obstruction(&acs("torus2")).unwrap();
        assert_eq!(ob.solution_space.len(), 4);
        assert!(!ob.is_conclusive());
    }

    #[test]
    fn exactness_search_finds_primitive() {
        let a = acs("iwasawa");
        let f = a.frame();
        let sigma = FormalCoefficient::derivative_word(&[], a.frame_brackets());
        let beta = InvariantForm::term(f, f.full_word() & !1, FormalCoefficient::exp(Gauss::one(), int(-4)).mul(&sigma));
        let target = a.d(&beta);
        assert!(!target.is_zero());
        let found = find_primitive(&a, &target, 1).unwrap();
        assert_eq!(a.d(&found), target);
    }
}
