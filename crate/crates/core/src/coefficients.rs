//! Formal scalar coefficients.
//!
//! A [`FormalCoefficient`] is a finite sum of terms `c · e^{aσ} · Π wⱼ(σ)` where
//! `c` is a Gaussian rational, `a` a rational exponent, and each `wⱼ` a word of
//! frame vector fields applied to the real function `σ`. Words are kept in
//! PBW normal order with respect to the frame order `V₁ < … < Vₙ < V̄₁ < … < V̄ₙ`,
//! so that two expressions are equal iff their normal forms coincide. Distinct
//! normal words are treated as algebraically independent symbols.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::FrameBracketTable;
use crate::form::Frame;
use crate::scalar::{Gauss, Rational};

/// Frame letters, outermost first: `[a, b]` is `V_a V_b (σ) = V_a(V_b(σ))`.
pub type DerivWord = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub exponent: Rational,
    /// Sorted multiset of normal-ordered derivative words.
    pub factors: Vec<DerivWord>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exponent: Rational::zero(), factors: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero() && self.factors.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        factors.sort();
        Monomial { exponent: &self.exponent + &other.exponent, factors }
    }

    /// Total number of derivative letters.
    pub fn order(&self) -> usize {
        self.factors.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FormalCoefficient {
    terms: BTreeMap<Monomial, Gauss>,
}

/// Rewrites a derivative word into PBW normal order, returning a linear
/// combination of normal-ordered words.
pub fn normalize_word(word: &[u8], brackets: &FrameBracketTable) -> BTreeMap<DerivWord, Gauss> {
    let mut out: BTreeMap<DerivWord, Gauss> = BTreeMap::new();
    let mut stack: Vec<(DerivWord, Gauss)> = vec![(word.to_vec(), Gauss::one())];
    while let Some((w, c)) = stack.pop() {
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => {
                let slot = out.entry(w).or_default();
                *slot += &c;
            }
            Some(i) => {
                let (b, a) = (w[i], w[i + 1]);
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                stack.push((swapped, c.clone()));
                // V_b V_a = V_a V_b + [V_b, V_a]
                for (k, gamma) in brackets.bracket(b as usize, a as usize) {
                    let mut shorter = w[..i].to_vec();
                    shorter.push(*k as u8);
                    shorter.extend_from_slice(&w[i + 2..]);
                    stack.push((shorter, &c * gamma));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl FormalCoefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Gauss) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial::one(), c);
        f
    }

    pub fn one() -> Self {
        Self::constant(Gauss::one())
    }

    /// `c · e^{aσ}`
    pub fn exp(c: Gauss, exponent: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial { exponent, factors: Vec::new() }, c);
        f
    }

    /// `w(σ)` for an arbitrary (possibly unordered) word, normalized.
    pub fn derivative_word(word: &[u8], brackets: &FrameBracketTable) -> Self {
        let mut f = Self::zero();
        for (w, c) in normalize_word(word, brackets) {
            f.add_term(Monomial { exponent: Rational::zero(), factors: vec![w] }, c);
        }
        f
    }

    /// Builds a coefficient from raw terms whose derivative words may be out of
    /// order, bringing every factor to normal form.
    pub fn normalize_terms<I>(terms: I, brackets: &FrameBracketTable) -> Self
    where
        I: IntoIterator<Item = (Gauss, Rational, Vec<DerivWord>)>,
    {
        let mut out = Self::zero();
        for (c, exponent, factors) in terms {
            let mut acc = Self::exp(c, exponent);
            for w in &factors {
                acc = acc.mul(&Self::derivative_word(w, brackets));
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gauss)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Gauss) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the coefficient carries no σ-dependence.
    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FormalCoefficient { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Gauss) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        FormalCoefficient { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Inverse of a single-term coefficient `c e^{aσ}`; `None` when the
    /// coefficient has derivative factors or several terms.
    pub fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !m.factors.is_empty() {
            return None;
        }
        Some(Self::exp(c.inv(), -m.exponent.clone()))
    }

    /// `V_dir(f)`: product rule with `V(e^{aσ}) = a V(σ) e^{aσ}` and
    /// `V(w(σ)) = (V w)(σ)` brought to normal order.
    pub fn differentiate(&self, dir: usize, brackets: &FrameBracketTable) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if !m.exponent.is_zero() {
                let mut factors = m.factors.clone();
                factors.push(vec![dir as u8]);
                factors.sort();
                out.add_term(
                    Monomial { exponent: m.exponent.clone(), factors },
                    c.scale(&m.exponent),
                );
            }
            for j in 0..m.factors.len() {
                let mut word = vec![dir as u8];
                word.extend_from_slice(&m.factors[j]);
                for (w, gamma) in normalize_word(&word, brackets) {
                    let mut factors = m.factors.clone();
                    factors[j] = w;
                    factors.sort();
                    out.add_term(Monomial { exponent: m.exponent.clone(), factors }, c * &gamma);
                }
            }
        }
        out
    }

    /// Complex conjugation: `σ` is real, so `e^{aσ}` is fixed, scalars are
    /// conjugated and every frame letter is replaced by its barred mirror.
    pub fn conjugate(&self, brackets: &FrameBracketTable) -> Self {
        let frame = brackets.frame();
        Self::normalize_terms(
            self.terms.iter().map(|(m, c)| {
                let factors = m
                    .factors
                    .iter()
                    .map(|w| w.iter().map(|&a| frame.conj_letter(a as usize) as u8).collect())
                    .collect();
                (c.conj(), m.exponent.clone(), factors)
            }),
            brackets,
        )
    }

    /// Textual form, e.g. `2 e^(-4 s) V3 Vb3 (s)`.
    pub fn render(&self, frame: &Frame) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = split_sign(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                if mag.re.is_zero() || mag.im.is_zero() {
                    parts.push(mag.to_string());
                } else {
                    parts.push(format!("({})", mag));
                }
            }
            if !m.exponent.is_zero() {
                parts.push(format!("e^({} s)", Gauss::real(m.exponent.clone())));
            }
            for w in &m.factors {
                let mut s = String::new();
                for &a in w {
                    let _ = write!(s, "{} ", frame.vector_label(a as usize));
                }
                s.push_str("(s)");
                parts.push(s);
            }
            out.push_str(&parts.join(" "));
        }
        out
    }
}

/// Splits a scalar into a display sign and magnitude so sums read `a - b`.
pub(crate) fn split_sign(c: &Gauss) -> (bool, Gauss) {
    let lead_negative = if !c.re.is_zero() { c.re < Rational::zero() } else { c.im < Rational::zero() };
    if lead_negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl From<Gauss> for FormalCoefficient {
    fn from(c: Gauss) -> Self {
        FormalCoefficient::constant(c)
    }
}

impl One for FormalCoefficient {
    fn one() -> Self {
        FormalCoefficient::one()
    }
}

impl std::ops::Mul for FormalCoefficient {
    type Output = FormalCoefficient;
    fn mul(self, rhs: Self) -> Self {
        FormalCoefficient::mul(&self, &rhs)
    }
}
