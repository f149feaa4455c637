//! Invariant differential forms in a fixed coframe.
//!
//! Basis wedge-words are bitmasks over coframe letters. In complex mode the
//! letters `0..n` are `φ¹..φⁿ` and `n..2n` are `φ̄¹..φ̄ⁿ`, so increasing bit
//! order is exactly "holomorphic before antiholomorphic". Every stored word is
//! canonical and every sign has been absorbed into its coefficient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::FrameBracketTable;
use crate::coefficients::{split_sign, FormalCoefficient};
use num_traits::Zero;

use crate::scalar::Gauss;

/// A wedge-word: bit `a` set means coframe letter `a` is present.
pub type Word = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Real coframe `e¹..e^dim`.
    Real { dim: usize },
    /// Complex coframe `φ¹..φⁿ, φ̄¹..φ̄ⁿ`.
    Complex { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("forms live over different coframes ({0:?} vs {1:?})")]
    FrameMismatch(Frame, Frame),
    #[error("form has mixed bidegree; split it first")]
    MixedBidegree,
}

impl Frame {
    /// Number of coframe letters.
    pub fn size(&self) -> usize {
        match *self {
            Frame::Real { dim } => dim,
            Frame::Complex { n } => 2 * n,
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Frame::Complex { .. })
    }

    /// Complex dimension `n`; for a real frame, half the real dimension.
    pub fn complex_dim(&self) -> usize {
        self.size() / 2
    }

    pub fn full_word(&self) -> Word {
        ((1u64 << self.size()) - 1) as Word
    }

    pub fn holomorphic_mask(&self) -> Word {
        match *self {
            Frame::Complex { n } => ((1u64 << n) - 1) as Word,
            Frame::Real { .. } => 0,
        }
    }

    pub fn conj_letter(&self, a: usize) -> usize {
        match *self {
            Frame::Complex { n } => {
                if a < n {
                    a + n
                } else {
                    a - n
                }
            }
            Frame::Real { .. } => a,
        }
    }

    /// `(p, q)` of a word; real frames report `(degree, 0)`.
    pub fn bidegree(&self, w: Word) -> (usize, usize) {
        let h = self.holomorphic_mask();
        match self {
            Frame::Complex { .. } => ((w & h).count_ones() as usize, (w & !h).count_ones() as usize),
            Frame::Real { .. } => (w.count_ones() as usize, 0),
        }
    }

    pub fn coframe_label(&self, a: usize) -> String {
        match *self {
            Frame::Complex { n } if a >= n => format!("~phi{}", a - n + 1),
            Frame::Complex { .. } => format!("phi{}", a + 1),
            Frame::Real { .. } => format!("e{}", a + 1),
        }
    }

    pub fn vector_label(&self, a: usize) -> String {
        match *self {
            Frame::Complex { n } if a >= n => format!("Vb{}", a - n + 1),
            Frame::Complex { .. } => format!("V{}", a + 1),
            Frame::Real { .. } => format!("E{}", a + 1),
        }
    }

    /// All words of the given degree, in lexicographic order of their index
    /// sequences.
    pub fn words_of_degree(&self, k: usize) -> Vec<Word> {
        subsets(self.size(), k).into_iter().map(|s| indices_to_word(&s)).collect()
    }

    /// All words of bidegree `(p, q)`, lexicographic in the combined sequence.
    pub fn words_of_bidegree(&self, p: usize, q: usize) -> Vec<Word> {
        let n = self.complex_dim();
        assert!(self.is_complex(), "bidegrees require a complex frame");
        let mut out = Vec::new();
        for hol in subsets(n, p) {
            for anti in subsets(n, q) {
                let mut idx = hol.clone();
                idx.extend(anti.iter().map(|a| a + n));
                out.push(indices_to_word(&idx));
            }
        }
        out
    }

    pub fn render_word(&self, w: Word) -> String {
        if w == 0 {
            return "1".to_string();
        }
        word_indices(w).into_iter().map(|a| self.coframe_label(a)).collect::<Vec<_>>().join("^")
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn word_indices(w: Word) -> Vec<usize> {
    (0..32).filter(|i| w >> i & 1 == 1).collect()
}

fn indices_to_word(idx: &[usize]) -> Word {
    idx.iter().fold(0, |w, &i| w | (1 << i))
}

/// Sign of `a ∧ b` relative to the canonical word `a | b`, or `None` when the
/// words share a letter.
pub fn wedge_sign(a: Word, b: Word) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // Each letter of `b` must move left past every letter of `a` above it.
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> j).count_ones();
        rest &= rest - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Canonical word and sign for an arbitrary sequence of letters.
pub fn word_from_sequence(seq: &[usize]) -> Option<(Word, i32)> {
    let mut w: Word = 0;
    let mut sign = 1;
    for &a in seq {
        let s = wedge_sign(w, 1 << a)?;
        sign *= s;
        w |= 1 << a;
    }
    Some((w, sign))
}

/// An element of the (complexified) exterior algebra over a coframe with
/// [`FormalCoefficient`] coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InvariantForm {
    frame: Frame,
    terms: BTreeMap<Word, FormalCoefficient>,
}

impl InvariantForm {
    pub fn zero(frame: Frame) -> Self {
        InvariantForm { frame, terms: BTreeMap::new() }
    }

    pub fn one(frame: Frame) -> Self {
        Self::monomial(frame, 0, Gauss::one())
    }

    pub fn monomial(frame: Frame, w: Word, c: Gauss) -> Self {
        Self::term(frame, w, FormalCoefficient::constant(c))
    }

    pub fn term(frame: Frame, w: Word, c: FormalCoefficient) -> Self {
        let mut f = Self::zero(frame);
        f.add_term(w, c);
        f
    }

    pub fn basis(frame: Frame, w: Word) -> Self {
        Self::monomial(frame, w, Gauss::one())
    }

    /// The coframe 1-form with letter `a`.
    pub fn coframe(frame: Frame, a: usize) -> Self {
        assert!(a < frame.size(), "letter out of range");
        Self::basis(frame, 1 << a)
    }

    /// Wedge of coframe letters in the given order, e.g. `[0, 3]` is `φ¹∧φ̄¹`.
    pub fn from_letters(frame: Frame, letters: &[usize]) -> Self {
        match word_from_sequence(letters) {
            Some((w, s)) => Self::monomial(frame, w, Gauss::from_int(s as i64)),
            None => Self::zero(frame),
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FormalCoefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: Word) -> FormalCoefficient {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(FormalCoefficient::is_constant)
    }

    /// Constant coefficient of a word; panics on σ-dependent coefficients.
    pub fn constant_coefficient(&self, w: Word) -> Gauss {
        self.coefficient(w).as_constant().expect("form has a non-constant coefficient")
    }

    pub fn add_term(&mut self, w: Word, c: FormalCoefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                slot.add_assign(&c);
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// Total degree; `None` for the zero form or a form of mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|w| w.count_ones() as usize);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|&w| self.frame.bidegree(w)).collect()
    }

    pub fn pure_bidegree(&self) -> Option<(usize, usize)> {
        let b = self.bidegrees();
        (b.len() == 1).then(|| *b.iter().next().unwrap())
    }

    pub fn bidegree_part(&self, p: usize, q: usize) -> Self {
        self.filter_words(|w| self.frame.bidegree(w) == (p, q))
    }

    pub fn degree_part(&self, k: usize) -> Self {
        self.filter_words(|w| w.count_ones() as usize == k)
    }

    fn filter_words(&self, keep: impl Fn(Word) -> bool) -> Self {
        InvariantForm {
            frame: self.frame,
            terms: self.terms.iter().filter(|(w, _)| keep(**w)).map(|(w, c)| (*w, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.frame, other.frame, "adding forms over different coframes");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(FormalCoefficient::neg)
    }

    pub fn scale(&self, s: &Gauss) -> Self {
        self.map_coefficients(|c| c.scale(s))
    }

    pub fn mul_coefficient(&self, f: &FormalCoefficient) -> Self {
        self.map_coefficients(|c| c.mul(f))
    }

    pub fn map_coefficients(&self, f: impl Fn(&FormalCoefficient) -> FormalCoefficient) -> Self {
        let mut out = Self::zero(self.frame);
        for (w, c) in &self.terms {
            out.add_term(*w, f(c));
        }
        out
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self, FormError> {
        if self.frame != other.frame {
            return Err(FormError::FrameMismatch(self.frame, other.frame));
        }
        let mut out = Self::zero(self.frame);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(s) = wedge_sign(*a, *b) {
                    let c = ca.mul(cb);
                    out.add_term(a | b, if s < 0 { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Graded-commutative product. Panics on a coframe mismatch; use
    /// [`InvariantForm::try_wedge`] to get an error instead.
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge of forms over different coframes")
    }

    /// `self ∧ … ∧ self` (`k` factors); `k = 0` gives 1.
    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.frame), |acc, _| acc.wedge(self))
    }

    /// Complex conjugate. Real frames only conjugate coefficients.
    pub fn conjugate(&self, brackets: &FrameBracketTable) -> Self {
        self.conjugate_with(|c| c.conjugate(brackets))
    }

    /// Conjugate of a form with constant coefficients (no bracket table is
    /// needed since there are no derivative words to reorder).
    pub fn conjugate_constant(&self) -> Self {
        self.conjugate_with(|c| {
            FormalCoefficient::constant(c.as_constant().expect("form has a non-constant coefficient").conj())
        })
    }

    fn conjugate_with(&self, conj: impl Fn(&FormalCoefficient) -> FormalCoefficient) -> Self {
        let mut out = Self::zero(self.frame);
        for (w, c) in &self.terms {
            let letters: Vec<usize> = word_indices(*w).into_iter().map(|a| self.frame.conj_letter(a)).collect();
            let (cw, s) = word_from_sequence(&letters).expect("conjugation is a bijection on letters");
            let cc = conj(c);
            out.add_term(cw, if s < 0 { cc.neg() } else { cc });
        }
        out
    }

    /// Linear change of coframe: each source letter `a` is replaced by the
    /// 1-form `images[a]` over `target`. Coefficients must be constant.
    pub fn substitute(&self, target: Frame, images: &[InvariantForm]) -> Self {
        assert_eq!(images.len(), self.frame.size());
        let mut out = Self::zero(target);
        for (w, c) in &self.terms {
            let mut acc = Self::one(target).mul_coefficient(c);
            for a in word_indices(*w) {
                acc = acc.wedge(&images[a]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Coefficient vector on a list of basis words; panics on σ-dependence.
    pub fn to_vector(&self, basis: &[Word]) -> Vec<Gauss> {
        basis.iter().map(|&w| self.constant_coefficient(w)).collect()
    }

    pub fn from_vector(frame: Frame, basis: &[Word], v: &[Gauss]) -> Self {
        let mut out = Self::zero(frame);
        for (w, c) in basis.iter().zip(v) {
            out.add_term(*w, FormalCoefficient::constant(c.clone()));
        }
        out
    }

    /// Human-readable rendering, e.g. `-1/2 phi1^phi2^~phi1`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let word = self.frame.render_word(*w);
            let piece = match c.as_constant() {
                Some(k) => {
                    let (neg, mag) = split_sign(&k);
                    let body = if mag.is_one() && *w != 0 {
                        word
                    } else if mag.re.is_zero() || mag.im.is_zero() {
                        if *w == 0 { mag.to_string() } else { format!("{} {}", mag, word) }
                    } else if *w == 0 {
                        format!("({})", mag)
                    } else {
                        format!("({}) {}", mag, word)
                    };
                    (neg, body)
                }
                None => {
                    let body = format!("({})", c.render(&self.frame));
                    (false, if *w == 0 { body } else { format!("{} {}", body, word) })
                }
            };
            match (idx, piece.0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&piece.1);
        }
        out
    }
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvariantForm({})", self.render())
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
