//! Lie algebras given by structure constants and the Chevalley–Eilenberg
//! differential on invariant forms.

use crate::coefficients::FormalCoefficient;
use crate::form::{word_indices, Frame, InvariantForm, Word};
use crate::linalg::Matrix;
use crate::scalar::Gauss;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constants have inconsistent shape for dimension {0}")]
    BadShape(usize),
    #[error("structure constants are not antisymmetric: c^{k}_{{{i}{j}}} != -c^{k}_{{{j}{i}}}", k = .k + 1, i = .i + 1, j = .j + 1)]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("the Jacobi identity fails; condition checks refuse non-Lie input")]
    NotJacobi,
}

/// Structure constants `c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k`, plus
/// the derived validity flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredAlgebra {
    dim: usize,
    /// Flat `c[(k * dim + i) * dim + j]`.
    constants: Vec<Gauss>,
    pub jacobi_ok: bool,
    pub unimodular: bool,
    /// Length of the lower central series; `None` when not nilpotent. The
    /// abelian algebra has step 1.
    pub nilpotency_step: Option<usize>,
}

impl StructuredAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, k: usize, i: usize, j: usize) -> &Gauss {
        &self.constants[(k * self.dim + i) * self.dim + j]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Gauss> {
        (0..self.dim).map(|k| self.c(k, i, j).clone()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Gauss::is_zero)
    }

    /// Differentials `de^k = -Σ_{i<j} c^k_{ij} e^{ij}` over the given frame.
    pub fn coframe_differentials(&self, frame: Frame) -> Vec<InvariantForm> {
        assert_eq!(frame.size(), self.dim);
        (0..self.dim)
            .map(|k| {
                let mut f = InvariantForm::zero(frame);
                for i in 0..self.dim {
                    for j in i + 1..self.dim {
                        let c = self.c(k, i, j);
                        if !c.is_zero() {
                            f = f.add(&InvariantForm::monomial(frame, (1 << i) | (1 << j), -c));
                        }
                    }
                }
                f
            })
            .collect()
    }

    /// Chevalley–Eilenberg complex of this algebra over a real coframe.
    pub fn real_structure(&self) -> CoframeStructure {
        let frame = Frame::Real { dim: self.dim };
        CoframeStructure::new(frame, self.coframe_differentials(frame))
    }
}

/// Validates a constant array `constants[k][i][j] = c^k_{ij}`.
pub fn validate_algebra(constants: Vec<Vec<Vec<Gauss>>>) -> Result<StructuredAlgebra, AlgebraError> {
    let dim = constants.len();
    if dim == 0 || constants.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
        return Err(AlgebraError::BadShape(dim));
    }
    for (k, m) in constants.iter().enumerate() {
        for i in 0..dim {
            for j in i..dim {
                if m[i][j] != -&m[j][i] {
                    return Err(AlgebraError::NotAntisymmetric { i, j, k });
                }
            }
        }
    }
    let flat: Vec<Gauss> = constants.into_iter().flatten().flatten().collect();
    let mut alg = StructuredAlgebra {
        dim,
        constants: flat,
        jacobi_ok: false,
        unimodular: false,
        nilpotency_step: None,
    };
    alg.jacobi_ok = check_jacobi(&alg);
    alg.unimodular = (0..dim).all(|j| {
        let mut tr = Gauss::zero();
        for i in 0..dim {
            tr += alg.c(i, i, j);
        }
        tr.is_zero()
    });
    alg.nilpotency_step = if alg.jacobi_ok { nilpotency_step(&alg) } else { None };
    Ok(alg)
}

/// Convenience constructor from a sparse list `(i, j, k, c)` meaning
/// `[e_i, e_j] ∋ c e_k` (0-based); antisymmetric partners are filled in.
pub fn algebra_from_brackets(dim: usize, brackets: &[(usize, usize, usize, Gauss)]) -> Result<StructuredAlgebra, AlgebraError> {
    let mut c = vec![vec![vec![Gauss::zero(); dim]; dim]; dim];
    for (i, j, k, v) in brackets {
        if *i >= dim || *j >= dim || *k >= dim {
            return Err(AlgebraError::BadShape(dim));
        }
        c[*k][*i][*j] += v;
        c[*k][*j][*i] -= v;
    }
    validate_algebra(c)
}

fn check_jacobi(a: &StructuredAlgebra) -> bool {
    let n = a.dim;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = Gauss::zero();
                    for m in 0..n {
                        s += a.c(m, i, j) * a.c(l, m, k);
                        s += a.c(m, j, k) * a.c(l, m, i);
                        s += a.c(m, k, i) * a.c(l, m, j);
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Steps of the lower central series `g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ …`.
fn nilpotency_step(a: &StructuredAlgebra) -> Option<usize> {
    let n = a.dim;
    // current term of the series as a list of spanning vectors
    let mut current: Vec<Vec<Gauss>> = (0..n)
        .map(|i| {
            let mut v = vec![Gauss::zero(); n];
            v[i] = Gauss::one();
            v
        })
        .collect();
    let mut dim = n;
    for step in 1..=n + 1 {
        let mut next = Vec::new();
        for x in 0..n {
            for v in &current {
                let mut w = vec![Gauss::zero(); n];
                for (j, vj) in v.iter().enumerate() {
                    if vj.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        let c = a.c(k, x, j);
                        if !c.is_zero() {
                            w[k] += c * vj;
                        }
                    }
                }
                if w.iter().any(|z| !z.is_zero()) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return Some(step);
        }
        let m = Matrix::from_rows(next);
        let ech = m.echelon();
        let rank = ech.pivots.len();
        if rank == dim {
            return None;
        }
        dim = rank;
        current = (0..rank).map(|r| ech.matrix.row(r).to_vec()).collect();
    }
    None
}

/// Brackets of the frame dual to a coframe: `[X_a, X_b] = Σ_c γ^c_{ab} X_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameBracketTable {
    frame: Frame,
    /// `table[a * size + b]` is the sparse list of `(c, γ^c_{ab})`.
    table: Vec<Vec<(usize, Gauss)>>,
}

impl FrameBracketTable {
    /// Reads the brackets off the coframe differentials by duality,
    /// `θ^c([X_a, X_b]) = -dθ^c(X_a, X_b)`.
    pub fn from_differentials(frame: Frame, dcoframe: &[InvariantForm]) -> Self {
        let m = frame.size();
        let mut table = vec![Vec::new(); m * m];
        for (c, dc) in dcoframe.iter().enumerate() {
            for (w, coef) in dc.terms() {
                let idx = word_indices(*w);
                assert_eq!(idx.len(), 2, "coframe differentials must be 2-forms");
                let k = coef.as_constant().expect("structure equations have constant coefficients");
                let (a, b) = (idx[0], idx[1]);
                table[a * m + b].push((c, -&k));
                table[b * m + a].push((c, k));
            }
        }
        FrameBracketTable { frame, table }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Gauss)] {
        &self.table[a * self.frame.size() + b]
    }

    /// Dense `γ^c_{ab}` as a validated algebra (used for the flags).
    pub fn to_algebra(&self) -> Result<StructuredAlgebra, AlgebraError> {
        let m = self.frame.size();
        let mut c = vec![vec![vec![Gauss::zero(); m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                for (k, g) in self.bracket(a, b) {
                    c[*k][a][b] += g;
                }
            }
        }
        validate_algebra(c)
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }
}

/// A coframe together with the differentials of its letters: everything the
/// exterior derivative of an invariant form (possibly with formal σ-dependent
/// coefficients) needs.
#[derive(Clone, Debug)]
pub struct CoframeStructure {
    frame: Frame,
    dcoframe: Vec<InvariantForm>,
    brackets: FrameBracketTable,
}

impl CoframeStructure {
    pub fn new(frame: Frame, dcoframe: Vec<InvariantForm>) -> Self {
        assert_eq!(dcoframe.len(), frame.size());
        let brackets = FrameBracketTable::from_differentials(frame, &dcoframe);
        CoframeStructure { frame, dcoframe, brackets }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn brackets(&self) -> &FrameBracketTable {
        &self.brackets
    }

    /// `dθ^a` for a single coframe letter.
    pub fn d_letter(&self, a: usize) -> &InvariantForm {
        &self.dcoframe[a]
    }

    /// Exterior derivative of a basis word via the graded Leibniz rule.
    pub fn d_word(&self, w: Word) -> InvariantForm {
        let letters = word_indices(w);
        let mut out = InvariantForm::zero(self.frame);
        for (r, &a) in letters.iter().enumerate() {
            if self.dcoframe[a].is_zero() {
                continue;
            }
            let before = letters[..r].iter().fold(0, |acc, &i| acc | (1 << i));
            let after = letters[r + 1..].iter().fold(0, |acc, &i| acc | (1 << i));
            let term = InvariantForm::basis(self.frame, before)
                .wedge(&self.dcoframe[a])
                .wedge(&InvariantForm::basis(self.frame, after));
            out = if r % 2 == 0 { out.add(&term) } else { out.sub(&term) };
        }
        out
    }

    /// `df = Σ_a X_a(f) θ^a` for a formal coefficient.
    pub fn d_coefficient(&self, f: &FormalCoefficient) -> InvariantForm {
        let mut out = InvariantForm::zero(self.frame);
        if f.is_constant() {
            return out;
        }
        for a in 0..self.frame.size() {
            out.add_term(1 << a, f.differentiate(a, &self.brackets));
        }
        out
    }

    /// The Chevalley–Eilenberg differential, extended to formal coefficients
    /// by `d(f θ^w) = df ∧ θ^w + f dθ^w`.
    pub fn ce_differential(&self, alpha: &InvariantForm) -> InvariantForm {
        assert_eq!(alpha.frame(), self.frame, "form over a different coframe");
        let mut out = InvariantForm::zero(self.frame);
        for (w, c) in alpha.terms() {
            if !c.is_constant() {
                out = out.add(&self.d_coefficient(c).wedge(&InvariantForm::basis(self.frame, *w)));
            }
            let dw = self.d_word(*w);
            if !dw.is_zero() {
                out = out.add(&dw.mul_coefficient(c));
            }
        }
        out
    }

    pub fn algebra(&self) -> Result<StructuredAlgebra, AlgebraError> {
        self.brackets.to_algebra()
    }
}
