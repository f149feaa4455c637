//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the engine's exterior algebra, star or elimination.

#![allow(dead_code)]

use std::collections::BTreeMap;

use gauduchon_core::catalog::ManifoldDescriptor;
use gauduchon_core::form::word_indices;
use gauduchon_core::{Gauss, InvariantForm, Rational};

/// Sparse form keyed by sorted letter lists.
pub type Sparse = BTreeMap<Vec<usize>, Gauss>;

/// Sorts by adjacent transpositions; `None` on a repeated letter.
pub fn perm_sign(seq: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

pub fn add_into(acc: &mut Sparse, k: Vec<usize>, c: Gauss) {
    let e = acc.entry(k.clone()).or_insert_with(Gauss::zero);
    *e += &c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

pub fn wedge(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut seq = ka.clone();
            seq.extend_from_slice(kb);
            if let Some((k, s)) = perm_sign(&seq) {
                add_into(&mut out, k, (ca * cb) * Gauss::from_int(s));
            }
        }
    }
    out
}

pub fn scale(a: &Sparse, c: &Gauss) -> Sparse {
    let mut out = Sparse::new();
    for (k, v) in a {
        add_into(&mut out, k.clone(), v * c);
    }
    out
}

pub fn plus(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = a.clone();
    for (k, v) in b {
        add_into(&mut out, k.clone(), v.clone());
    }
    out
}

pub fn letter(a: usize) -> Sparse {
    let mut s = Sparse::new();
    s.insert(vec![a], Gauss::one());
    s
}

pub fn to_sparse(f: &InvariantForm) -> Sparse {
    let mut s = Sparse::new();
    for (w, c) in f.terms() {
        let c = c.as_constant().expect("constant coefficients");
        add_into(&mut s, word_indices(*w), c);
    }
    s
}

/// Exterior calculus on a complex coframe of `2n` letters, driven only by the
/// structure equations of the descriptor.
pub struct Oracle {
    pub n: usize,
    pub dtheta: Vec<Sparse>,
}

impl Oracle {
    pub fn new(desc: &ManifoldDescriptor) -> Self {
        let n = desc.real_dim / 2;
        let mut dtheta: Vec<Sparse> = desc.equations.iter().map(to_sparse).collect();
        let conj: Vec<Sparse> = dtheta.iter().map(|f| self_conj(n, f)).collect();
        dtheta.extend(conj);
        Oracle { n, dtheta }
    }

    pub fn conj(&self, f: &Sparse) -> Sparse {
        self_conj(self.n, f)
    }

    pub fn d(&self, f: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (k, c) in f {
            for i in 0..k.len() {
                let before: Sparse = [(k[..i].to_vec(), Gauss::one())].into_iter().collect();
                let after: Sparse = [(k[i + 1..].to_vec(), Gauss::one())].into_iter().collect();
                let sign = if i % 2 == 0 { Gauss::one() } else { -Gauss::one() };
                let piece = wedge(&wedge(&before, &self.dtheta[k[i]]), &after);
                out = plus(&out, &scale(&piece, &(c * &sign)));
            }
        }
        out
    }

    pub fn bidegree(&self, k: &[usize]) -> (usize, usize) {
        let p = k.iter().filter(|&&a| a < self.n).count();
        (p, k.len() - p)
    }

    pub fn part(&self, f: &Sparse, p: usize, q: usize) -> Sparse {
        f.iter().filter(|(k, _)| self.bidegree(k) == (p, q)).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn delbar(&self, f: &Sparse) -> Sparse {
        let (p, q) = self.bidegree(f.keys().next().expect("nonzero"));
        self.part(&self.d(f), p, q + 1)
    }

    pub fn del(&self, f: &Sparse) -> Sparse {
        match f.keys().next() {
            None => Sparse::new(),
            Some(k) => {
                let (p, q) = self.bidegree(k);
                self.part(&self.d(f), p + 1, q)
            }
        }
    }

    pub fn words(&self, p: usize, q: usize) -> Vec<Vec<usize>> {
        let hol = subsets(0..self.n, p);
        let anti = subsets(self.n..2 * self.n, q);
        let mut out = Vec::new();
        for a in &hol {
            for b in &anti {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.push(w);
            }
        }
        out
    }

    /// `ω = (1/2i) Σ h_j φ^j ∧ φ̄^j` for a diagonal metric.
    pub fn omega(&self, h: &[Rational]) -> Sparse {
        let over_2i = Gauss::one() / Gauss::imag(Rational::from_integer(2.into()));
        let mut out = Sparse::new();
        for j in 0..self.n {
            add_into(&mut out, vec![j, self.n + j], &over_2i * &Gauss::real(h[j].clone()));
        }
        out
    }

    /// Top coefficient of `ωⁿ/n!`.
    pub fn kappa(&self, h: &[Rational]) -> Gauss {
        let w = self.omega(h);
        let mut acc: Sparse = [(Vec::new(), Gauss::one())].into_iter().collect();
        let mut fact = 1i64;
        for k in 1..=self.n {
            acc = wedge(&acc, &w);
            fact *= k as i64;
        }
        let top: Vec<usize> = (0..2 * self.n).collect();
        acc.get(&top).cloned().unwrap_or_else(Gauss::zero) / Gauss::from_int(fact)
    }

    /// Star of a basis word from `α ∧ *γ = ⟨α, γ̄⟩ vol`, using orthogonality of
    /// distinct basis words and `|θ^a|² = 2/h`.
    pub fn star_word(&self, h: &[Rational], gamma: &[usize]) -> Sparse {
        let kappa = self.kappa(h);
        let all: Vec<usize> = (0..2 * self.n).collect();
        let mut gbar = Sparse::new();
        for (k, c) in self.conj(&[(gamma.to_vec(), Gauss::one())].into_iter().collect()) {
            gbar.insert(k, c);
        }
        let (alpha, conj_sign) = gbar.into_iter().next().unwrap();
        // ⟨α, γ̄⟩ = conj(conj_sign) |α|², and conj_sign is ±1
        let mut norm = Gauss::one();
        for &a in &alpha {
            norm = norm * Gauss::real(Rational::from_integer(2.into()) / h[a % self.n].clone());
        }
        let comp: Vec<usize> = all.iter().copied().filter(|a| !alpha.contains(a)).collect();
        let mut seq = alpha.clone();
        seq.extend_from_slice(&comp);
        let (_, eps) = perm_sign(&seq).unwrap();
        let coef = (&conj_sign.conj() * &norm) * kappa / Gauss::from_int(eps);
        [(comp, coef)].into_iter().collect()
    }

    pub fn star(&self, h: &[Rational], f: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (k, c) in f {
            out = plus(&out, &scale(&self.star_word(h, k), c));
        }
        out
    }
}

fn self_conj(n: usize, f: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (k, c) in f {
        let mirrored: Vec<usize> = k.iter().map(|&a| if a < n { a + n } else { a - n }).collect();
        let (s, sign) = perm_sign(&mirrored).unwrap();
        add_into(&mut out, s, c.conj() * Gauss::from_int(sign));
    }
    out
}

pub fn subsets(range: std::ops::Range<usize>, k: usize) -> Vec<Vec<usize>> {
    let items: Vec<usize> = range.collect();
    let mut out = Vec::new();
    let m = items.len();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize == k {
            out.push((0..m).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect());
        }
    }
    out
}

/// Rank by plain Gaussian elimination over Gaussian rationals.
pub fn rank(mut rows: Vec<Vec<Gauss>>) -> usize {
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= &sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// Kernel basis by elimination to reduced row echelon form.
pub fn kernel(mut rows: Vec<Vec<Gauss>>, cols: usize) -> Vec<Vec<Gauss>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for j in 0..cols {
            rows[r][j] = &rows[r][j] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Gauss::zero(); cols];
        v[free] = Gauss::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[row][free].clone();
        }
        out.push(v);
    }
    out
}

/// Dimension of `{α ∈ A^{p,q} : ∂̄α = 0, ∂(*α) = 0}` for a diagonal metric.
pub fn harmonic_dimension(o: &Oracle, h: &[Rational], p: usize, q: usize) -> usize {
    let basis = o.words(p, q);
    let mut keys: BTreeMap<(u8, Vec<usize>), usize> = BTreeMap::new();
    let mut cols: Vec<Vec<((u8, Vec<usize>), Gauss)>> = Vec::new();
    for w in &basis {
        let f: Sparse = [(w.clone(), Gauss::one())].into_iter().collect();
        let mut entries = Vec::new();
        for (k, c) in o.delbar(&f) {
            entries.push(((0u8, k), c));
        }
        for (k, c) in o.del(&o.star(h, &f)) {
            entries.push(((1u8, k), c));
        }
        for (k, _) in &entries {
            let next = keys.len();
            keys.entry(k.clone()).or_insert(next);
        }
        cols.push(entries);
    }
    let mut rows = vec![vec![Gauss::zero(); basis.len()]; keys.len()];
    for (j, entries) in cols.iter().enumerate() {
        for (k, c) in entries {
            rows[keys[k]][j] = c.clone();
        }
    }
    basis.len() - rank(rows)
}
