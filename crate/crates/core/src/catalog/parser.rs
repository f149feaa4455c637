//! Line-oriented parser and canonical renderer for `.alg` structure files.
//!
//! ```text
//! # comment
//! manifold iwasawa
//! complex_dim 3
//! d phi3 = -phi1^phi2
//! ```
//!
//! Real-mode files declare `real_dim M`, write equations over `e1..eM` and
//! list the `M` rows of `J` (with `J e_j = Σ_i J_ij e_i`) as `J a b c ...`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ManifoldDescriptor, Mode};
use crate::form::{word_from_sequence, Frame, InvariantForm};
use crate::linalg::Matrix;
use crate::scalar::{Gauss, Rational};

/// Largest supported complex dimension (words are 32-bit masks).
pub const MAX_COMPLEX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("{line}:{column}: undeclared symbol `{symbol}`")]
    UndeclaredSymbol { line: usize, column: usize, symbol: String },
    #[error("{line}:{column}: dimension mismatch: {message}")]
    DimensionMismatch { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::UndeclaredSymbol { line, column, .. }
            | ParseError::DimensionMismatch { line, column, .. } => (*line, *column),
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    /// Peek without skipping whitespace.
    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn found(&self) -> String {
        match self.chars.get(self.pos) {
            None => "end of line".to_string(),
            Some(_) => {
                let s: String = self.chars[self.pos..].iter().take_while(|c| !c.is_whitespace()).take(12).collect();
                format!("`{}`", s)
            }
        }
    }

    fn syntax(&mut self, expected: &str) -> ParseError {
        self.skip_ws();
        ParseError::Syntax { line: self.line, column: self.column(), expected: expected.to_string(), found: self.found() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{}`", c)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn identifier(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((start + 1, self.chars[start..self.pos].iter().collect()))
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    /// `INT ('/' POSINT)?` with an optional leading sign on the integer.
    fn rational(&mut self, signed: bool) -> Result<Rational, ParseError> {
        self.skip_ws();
        let mut neg = false;
        if signed {
            if self.eat('-') {
                neg = true;
            } else {
                self.eat('+');
            }
            self.skip_ws();
        }
        let num = self.digits().ok_or_else(|| self.syntax("integer"))?;
        let mut den = BigInt::one();
        let save = self.pos;
        self.skip_ws();
        if self.peek_raw() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            den = self.digits().ok_or_else(|| self.syntax("positive integer"))?;
            if den.is_zero() {
                self.pos -= 1;
                return Err(self.syntax("positive integer"));
            }
        } else {
            self.pos = save;
        }
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }
}

/// Parses one Gaussian-rational coefficient: `RAT`, `RAT i`, `i`,
/// `(RAT)`, `(RAT)i`, `(RAT ± RAT i)`, each with an optional leading sign.
pub fn parse_coefficient(text: &str) -> Result<Gauss, ParseError> {
    let mut cur = Cursor::new(text, 1);
    let neg = if cur.eat('-') {
        true
    } else {
        cur.eat('+');
        false
    };
    let c = coefficient(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.syntax("end of coefficient"));
    }
    Ok(if neg { -c } else { c })
}

fn coefficient(cur: &mut Cursor) -> Result<Gauss, ParseError> {
    match cur.peek() {
        Some('(') => {
            cur.pos += 1;
            let re = cur.rational(true)?;
            let value = match cur.peek() {
                Some('+') | Some('-') => {
                    let neg = cur.peek() == Some('-');
                    cur.pos += 1;
                    let im = cur.rational(false)?;
                    cur.expect('i')?;
                    Gauss::new(re, if neg { -im } else { im })
                }
                _ => Gauss::real(re),
            };
            cur.expect(')')?;
            if value.im.is_zero() && cur.peek_raw() == Some('i') {
                cur.pos += 1;
                return Ok(value.mul_i());
            }
            Ok(value)
        }
        Some('i') if !matches!(cur.chars.get(cur.pos + 1), Some(c) if c.is_alphanumeric()) => {
            cur.pos += 1;
            Ok(Gauss::i())
        }
        Some(c) if c.is_ascii_digit() => {
            let r = cur.rational(false)?;
            if cur.peek_raw() == Some('i') {
                cur.pos += 1;
                Ok(Gauss::imag(r))
            } else {
                Ok(Gauss::real(r))
            }
        }
        _ => Err(cur.syntax("coefficient")),
    }
}

struct Header {
    name: Option<String>,
    mode: Option<(Mode, usize, usize)>,
}

/// Atom `phiJ`, `~phiJ` (complex) or `eJ` (real), as a letter index.
fn atom(cur: &mut Cursor, frame: Frame) -> Result<usize, ParseError> {
    cur.skip_ws();
    let start = cur.column();
    let tilde = cur.eat('~');
    let (col, ident) = match cur.identifier() {
        Some(x) => x,
        None => return Err(cur.syntax("coframe symbol")),
    };
    let col = if tilde { start } else { col };
    let (prefix, digits) = match frame {
        Frame::Complex { .. } => ("phi", ident.strip_prefix("phi")),
        Frame::Real { .. } => ("e", ident.strip_prefix('e')),
    };
    let symbol = if tilde { format!("~{}", ident) } else { ident.clone() };
    let undeclared = || ParseError::UndeclaredSymbol { line: cur.line, column: col, symbol: symbol.clone() };
    let digits = match digits {
        Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => d,
        _ => {
            return Err(if ident == "phi" || ident == "e" || ident.starts_with(prefix) {
                ParseError::Syntax { line: cur.line, column: col, expected: "coframe symbol".into(), found: format!("`{}`", symbol) }
            } else {
                undeclared()
            })
        }
    };
    let k: usize = digits.parse().map_err(|_| undeclared())?;
    match frame {
        Frame::Complex { n } => {
            if k == 0 || k > n {
                return Err(undeclared());
            }
            Ok(if tilde { n + k - 1 } else { k - 1 })
        }
        Frame::Real { dim } => {
            if tilde || k == 0 || k > dim {
                return Err(undeclared());
            }
            Ok(k - 1)
        }
    }
}

fn word(cur: &mut Cursor, frame: Frame) -> Result<InvariantForm, ParseError> {
    let mut letters = vec![atom(cur, frame)?];
    while cur.eat('^') {
        letters.push(atom(cur, frame)?);
    }
    Ok(match word_from_sequence(&letters) {
        Some((w, s)) => InvariantForm::monomial(frame, w, Gauss::from_int(s as i64)),
        None => InvariantForm::zero(frame),
    })
}

fn starts_atom(cur: &mut Cursor) -> bool {
    match cur.peek() {
        Some('~') => true,
        Some(c) if c.is_alphabetic() => {
            // `i` alone is a coefficient
            !(c == 'i' && !matches!(cur.chars.get(cur.pos + 1), Some(d) if d.is_alphanumeric()))
        }
        _ => false,
    }
}

fn term(cur: &mut Cursor, frame: Frame) -> Result<InvariantForm, ParseError> {
    if starts_atom(cur) {
        return word(cur, frame);
    }
    let col = {
        cur.skip_ws();
        cur.column()
    };
    let c = coefficient(cur)?;
    if cur.eat('*') {
        if !frame.is_complex() && !c.is_real() {
            return Err(ParseError::Syntax { line: cur.line, column: col, expected: "real coefficient".into(), found: format!("`{}`", c) });
        }
        Ok(word(cur, frame)?.scale(&c))
    } else if c.is_zero() {
        Ok(InvariantForm::zero(frame))
    } else {
        Err(cur.syntax("`*`"))
    }
}

fn expression(cur: &mut Cursor, frame: Frame) -> Result<InvariantForm, ParseError> {
    let mut neg = if cur.eat('-') {
        true
    } else {
        cur.eat('+');
        false
    };
    let mut acc = InvariantForm::zero(frame);
    loop {
        let t = term(cur, frame)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        if cur.eat('+') {
            neg = false;
        } else if cur.eat('-') {
            neg = true;
        } else if cur.at_end() {
            return Ok(acc);
        } else {
            return Err(cur.syntax("`+`, `-` or end of line"));
        }
    }
}

fn dimension(cur: &mut Cursor, what: &str) -> Result<usize, ParseError> {
    cur.skip_ws();
    let col = cur.column();
    let v = cur.digits().ok_or_else(|| cur.syntax("positive integer"))?;
    if !cur.at_end() {
        return Err(cur.syntax("end of line"));
    }
    let mismatch = |m: String| ParseError::DimensionMismatch { line: cur.line, column: col, message: m };
    let v: usize = v.try_into().map_err(|_| mismatch(format!("{} is too large", what)))?;
    match what {
        "complex_dim" if v == 0 || v > MAX_COMPLEX_DIM => Err(mismatch(format!("complex_dim must be in 1..={}", MAX_COMPLEX_DIM))),
        "real_dim" if v == 0 || v % 2 == 1 || v > 2 * MAX_COMPLEX_DIM => {
            Err(mismatch(format!("real_dim must be even and in 2..={}", 2 * MAX_COMPLEX_DIM)))
        }
        _ => Ok(v),
    }
}

pub fn parse_structure_file(text: &str) -> Result<ManifoldDescriptor, ParseError> {
    let mut header = Header { name: None, mode: None };
    let mut equations: Vec<Option<InvariantForm>> = Vec::new();
    let mut j_rows: Vec<Vec<Gauss>> = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(content, line_no);
        if cur.at_end() {
            continue;
        }
        let (kw_col, kw) = cur.identifier().ok_or_else(|| cur.syntax("keyword"))?;
        match kw.as_str() {
            "manifold" => {
                if header.name.is_some() {
                    return Err(ParseError::Syntax { line: line_no, column: kw_col, expected: "a single `manifold` line".into(), found: "`manifold`".into() });
                }
                let (_, name) = cur.identifier().ok_or_else(|| cur.syntax("manifold name"))?;
                if !cur.at_end() {
                    return Err(cur.syntax("end of line"));
                }
                header.name = Some(name);
            }
            "complex_dim" | "real_dim" => {
                if header.mode.is_some() {
                    return Err(ParseError::DimensionMismatch { line: line_no, column: kw_col, message: "dimension declared twice".into() });
                }
                let v = dimension(&mut cur, &kw)?;
                let (mode, real_dim) = if kw == "complex_dim" { (Mode::Complex, 2 * v) } else { (Mode::Real, v) };
                let count = if mode == Mode::Complex { v } else { real_dim };
                equations = vec![None; count];
                header.mode = Some((mode, real_dim, line_no));
            }
            "J" => {
                let (mode, m, _) = header.mode.ok_or_else(|| ParseError::Syntax {
                    line: line_no,
                    column: kw_col,
                    expected: "`real_dim` before `J`".into(),
                    found: "`J`".into(),
                })?;
                if mode != Mode::Real {
                    return Err(ParseError::DimensionMismatch { line: line_no, column: kw_col, message: "`J` rows are only allowed in real mode".into() });
                }
                if j_rows.len() == m {
                    return Err(ParseError::DimensionMismatch { line: line_no, column: kw_col, message: format!("more than {} J rows", m) });
                }
                let mut row = Vec::new();
                while !cur.at_end() {
                    row.push(Gauss::real(cur.rational(true)?));
                }
                if row.len() != m {
                    return Err(ParseError::DimensionMismatch { line: line_no, column: kw_col, message: format!("J row has {} entries, expected {}", row.len(), m) });
                }
                j_rows.push(row);
            }
            "d" => {
                let (mode, m, _) = header.mode.ok_or_else(|| ParseError::Syntax {
                    line: line_no,
                    column: kw_col,
                    expected: "`complex_dim` or `real_dim` before equations".into(),
                    found: "`d`".into(),
                })?;
                let frame = if mode == Mode::Complex { Frame::Complex { n: m / 2 } } else { Frame::Real { dim: m } };
                cur.skip_ws();
                let lhs_col = cur.column();
                if cur.peek() == Some('~') {
                    return Err(cur.syntax("`phiK`"));
                }
                let letter = atom(&mut cur, frame)?;
                if frame.is_complex() && letter >= m / 2 {
                    return Err(ParseError::Syntax { line: line_no, column: lhs_col, expected: "`phiK`".into(), found: "conjugate symbol".into() });
                }
                cur.expect('=')?;
                let rhs = expression(&mut cur, frame)?;
                if rhs.terms().any(|(w, _)| w.count_ones() != 2) {
                    return Err(ParseError::DimensionMismatch { line: line_no, column: lhs_col, message: "right-hand side must be a 2-form".into() });
                }
                if equations[letter].is_some() {
                    return Err(ParseError::Syntax { line: line_no, column: 1, expected: "one equation per coframe element".into(), found: "duplicate equation".into() });
                }
                equations[letter] = Some(rhs);
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: kw_col,
                    expected: "`manifold`, `complex_dim`, `real_dim`, `J` or `d`".into(),
                    found: format!("`{}`", kw),
                })
            }
        }
    }

    let name = header.name.ok_or(ParseError::Syntax { line: 1, column: 1, expected: "`manifold NAME`".into(), found: "no header".into() })?;
    let (mode, real_dim, dim_line) = header.mode.ok_or(ParseError::Syntax {
        line: last_line,
        column: 1,
        expected: "`complex_dim` or `real_dim`".into(),
        found: "end of file".into(),
    })?;
    let frame = if mode == Mode::Complex { Frame::Complex { n: real_dim / 2 } } else { Frame::Real { dim: real_dim } };
    let equations: Vec<InvariantForm> = equations.into_iter().map(|e| e.unwrap_or_else(|| InvariantForm::zero(frame))).collect();
    let j = match mode {
        Mode::Complex => None,
        Mode::Real => {
            if j_rows.len() != real_dim {
                return Err(ParseError::DimensionMismatch {
                    line: dim_line,
                    column: 1,
                    message: format!("real mode needs {} J rows, found {}", real_dim, j_rows.len()),
                });
            }
            Some(Matrix::from_rows(j_rows))
        }
    };
    Ok(ManifoldDescriptor { name, mode, real_dim, equations, j, provenance: None })
}

/// Canonical coefficient spelling accepted by [`parse_coefficient`].
pub fn render_coefficient(c: &Gauss) -> String {
    fn r(x: &Rational) -> String {
        if x.is_integer() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => r(&c.re),
        (true, false) => {
            if c.im.is_integer() {
                format!("{}i", r(&c.im))
            } else if c.im.is_negative() {
                format!("-({})i", r(&-c.im.clone()))
            } else {
                format!("({})i", r(&c.im))
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            format!("({}{}{}i)", r(&c.re), sign, r(&c.im.abs()))
        }
    }
}

fn render_form(form: &InvariantForm) -> String {
    let frame = form.frame();
    if form.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (w, c)) in form.terms().enumerate() {
        let c = c.as_constant().expect("structure equations have constant coefficients");
        // a term is negative when its leading nonzero part is
        let neg = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
        let mag = if neg { -c } else { c };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let word: Vec<String> = crate::form::word_indices(*w)
            .into_iter()
            .map(|a| match frame {
                Frame::Complex { n } if a >= n => format!("~phi{}", a - n + 1),
                Frame::Complex { .. } => format!("phi{}", a + 1),
                Frame::Real { .. } => format!("e{}", a + 1),
            })
            .collect();
        if !mag.is_one() {
            out.push_str(&render_coefficient(&mag));
            out.push('*');
        }
        out.push_str(&word.join("^"));
    }
    out
}

/// Canonical text of a descriptor; `parse_structure_file` inverts it.
pub fn render_structure_file(desc: &ManifoldDescriptor) -> String {
    let mut out = String::new();
    out.push_str(&format!("manifold {}\n", desc.name));
    match desc.mode {
        Mode::Complex => out.push_str(&format!("complex_dim {}\n", desc.real_dim / 2)),
        Mode::Real => out.push_str(&format!("real_dim {}\n", desc.real_dim)),
    }
    if let Some(j) = &desc.j {
        for r in 0..j.rows() {
            let row: Vec<String> = j.row(r).iter().map(render_coefficient).collect();
            out.push_str(&format!("J {}\n", row.join(" ")));
        }
    }
    let prefix = if desc.mode == Mode::Complex { "phi" } else { "e" };
    for (k, eq) in desc.equations.iter().enumerate() {
        out.push_str(&format!("d {}{} = {}\n", prefix, k + 1, render_form(eq)));
    }
    out
}
