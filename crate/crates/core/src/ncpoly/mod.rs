//! Polynomials in the generators α, α*, β, β* of the quantum group SU_q(2).
//!
//! Every element of the polynomial algebra has a unique expansion over the
//! canonical monomials
//!
//! ```text
//!   α^k β^n β*^m   (k ≥ 0)      and      α*^k' β^n β*^m   (k' ≥ 1)
//! ```
//!
//! which [`CanonicalMonomial`] encodes with a single signed `alpha` exponent.
//! Products are reduced to this basis by the rewriting engine in [`rewrite`],
//! driven by the defining relations
//!
//! ```text
//!   α*α + β*β = 1,   αα* + q²ββ* = 1,   αβ = qβα,   αβ* = qβ*α,   β*β = ββ*.
//! ```
//!
//! The [`Algebra`] value binds `q` numerically and carries the prune threshold,
//! the degree guard and a product cache for canonical monomial pairs.

mod decompose;
mod parse;
mod rewrite;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use rewrite::{RewriteRule, RewriteStats, Word, REWRITE_RULES};

/// Coefficients with smaller magnitude are dropped after every reduction.
pub const DEFAULT_PRUNE: f64 = 1e-14;

/// Degree guard applied by [`Algebra::checked_mul`] and the parser.
pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// The deformation parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QParam(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    /// `q = 1`, the commutative algebra of functions on SU(2). Only meant for
    /// cross-checks against the classical group.
    pub fn classical() -> Self {
        QParam(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

/// A letter of the free alphabet {α, α*, β, β*}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Alpha,
    AlphaStar,
    Beta,
    BetaStar,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Alpha, Letter::AlphaStar, Letter::Beta, Letter::BetaStar];

    pub fn adjoint(self) -> Letter {
        match self {
            Letter::Alpha => Letter::AlphaStar,
            Letter::AlphaStar => Letter::Alpha,
            Letter::Beta => Letter::BetaStar,
            Letter::BetaStar => Letter::Beta,
        }
    }

    pub fn monomial(self) -> CanonicalMonomial {
        match self {
            Letter::Alpha => CanonicalMonomial::new(1, 0, 0),
            Letter::AlphaStar => CanonicalMonomial::new(-1, 0, 0),
            Letter::Beta => CanonicalMonomial::new(0, 1, 0),
            Letter::BetaStar => CanonicalMonomial::new(0, 0, 1),
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Letter::Alpha => "a",
            Letter::AlphaStar => "a'",
            Letter::Beta => "b",
            Letter::BetaStar => "b'",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::Alpha => "α",
            Letter::AlphaStar => "α*",
            Letter::Beta => "β",
            Letter::BetaStar => "β*",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: u32) -> Parity {
        if d % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// One basis element `α^k β^n β*^m` (`alpha = k > 0`), `α*^k β^n β*^m`
/// (`alpha = -k < 0`) or `β^n β*^m` (`alpha = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalMonomial {
    pub alpha: i32,
    pub beta: u32,
    pub beta_star: u32,
}

impl CanonicalMonomial {
    pub const UNIT: CanonicalMonomial = CanonicalMonomial { alpha: 0, beta: 0, beta_star: 0 };

    pub fn new(alpha: i32, beta: u32, beta_star: u32) -> Self {
        CanonicalMonomial { alpha, beta, beta_star }
    }

    pub fn degree(&self) -> u32 {
        self.alpha.unsigned_abs() + self.beta + self.beta_star
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.degree())
    }

    /// The two gradings preserved by every relation: the α-charge and the
    /// β-charge `n - m`.
    pub fn charge(&self) -> (i32, i32) {
        (self.alpha, self.beta as i32 - self.beta_star as i32)
    }

    pub fn letters(&self) -> Vec<Letter> {
        let a = if self.alpha >= 0 { Letter::Alpha } else { Letter::AlphaStar };
        let mut out = Vec::with_capacity(self.degree() as usize);
        out.extend(std::iter::repeat_n(a, self.alpha.unsigned_abs() as usize));
        out.extend(std::iter::repeat_n(Letter::Beta, self.beta as usize));
        out.extend(std::iter::repeat_n(Letter::BetaStar, self.beta_star as usize));
        out
    }

    /// All canonical monomials of total degree exactly `d`; there are `(d+1)²`.
    pub fn of_degree(d: u32) -> Vec<CanonicalMonomial> {
        let mut out = Vec::new();
        for a in 0..=d {
            let rest = d - a;
            for n in 0..=rest {
                out.push(CanonicalMonomial::new(a as i32, n, rest - n));
                if a > 0 {
                    out.push(CanonicalMonomial::new(-(a as i32), n, rest - n));
                }
            }
        }
        out.sort();
        out
    }

    /// All canonical monomials of degree at most `d`.
    pub fn up_to_degree(d: u32) -> Vec<CanonicalMonomial> {
        (0..=d).flat_map(CanonicalMonomial::of_degree).collect()
    }

    pub fn ascii(&self) -> String {
        if *self == Self::UNIT {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut push = |l: &str, e: u32| match e {
            0 => {}
            1 => parts.push(l.to_string()),
            _ => parts.push(format!("{l}^{e}")),
        };
        push(if self.alpha >= 0 { "a" } else { "a'" }, self.alpha.unsigned_abs());
        push("b", self.beta);
        push("b'", self.beta_star);
        parts.join(" ")
    }
}

// Graded order: total degree first, then the exponents. Keeps printed
// polynomials readable and gives deterministic iteration.
impl Ord for CanonicalMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.alpha.cmp(&self.alpha))
            .then_with(|| other.beta.cmp(&self.beta))
            .then_with(|| self.beta_star.cmp(&other.beta_star))
    }
}

impl PartialOrd for CanonicalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::UNIT {
            return f.write_str("1");
        }
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, l: &str, e: u32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                f.write_str(l)
            } else {
                write!(f, "{l}^{e}")
            }
        };
        emit(f, if self.alpha >= 0 { "α" } else { "α*" }, self.alpha.unsigned_abs())?;
        emit(f, "β", self.beta)?;
        emit(f, "β*", self.beta_star)
    }
}

/// A finite complex linear combination of canonical monomials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NcPoly {
    terms: BTreeMap<CanonicalMonomial, Complex64>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::monomial(CanonicalMonomial::UNIT)
    }

    pub fn constant(c: Complex64) -> Self {
        NcPoly::term(CanonicalMonomial::UNIT, c)
    }

    pub fn monomial(m: CanonicalMonomial) -> Self {
        NcPoly::term(m, Complex64::new(1.0, 0.0))
    }

    pub fn generator(l: Letter) -> Self {
        NcPoly::monomial(l.monomial())
    }

    pub fn term(m: CanonicalMonomial, c: Complex64) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (CanonicalMonomial, Complex64)>>(it: I) -> Self {
        let mut p = NcPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·m`, removing the entry if it cancels to exactly zero.
    pub fn add_term(&mut self, m: CanonicalMonomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalMonomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &CanonicalMonomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Highest total degree in the support; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// The monomial of highest order in the graded order, with its coefficient.
    pub fn leading(&self) -> Option<(CanonicalMonomial, Complex64)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Parity of the support if it is homogeneous, `None` for mixed or zero.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn scale(&self, c: Complex64) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    pub fn conj_coeffs(&self) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(m, v)| (*m, v.conj())))
    }

    pub fn pruned(mut self, threshold: f64) -> NcPoly {
        self.terms.retain(|_, c| c.norm() >= threshold);
        self
    }

    /// Largest coefficient difference over the union of the supports.
    pub fn max_abs_diff(&self, other: &NcPoly) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coeff(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &NcPoly, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// The Z₂ action `gα = -α, gβ = -β`: each monomial picks up `(-1)^degree`.
    pub fn z2_act(&self) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, c * m.parity().sign())))
    }

    /// `(x ± g x) / 2`. Each monomial is an eigenvector of `g`, so this is the
    /// parity filter on the support.
    pub fn z2_project(&self, sector: Parity) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == sector)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    pub fn ascii(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = signed_coefficient(*c);
            if i == 0 {
                if sign == '-' {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == '-' { " - " } else { " + " });
            }
            let is_one = mag == "1";
            if *m == CanonicalMonomial::UNIT {
                out.push_str(&mag);
            } else if is_one {
                out.push_str(&m.ascii());
            } else {
                out.push_str(&format!("{mag}·{}", m.ascii()));
            }
        }
        out
    }
}

fn fmt_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn signed_coefficient(c: Complex64) -> (char, String) {
    if c.im == 0.0 {
        let sign = if c.re < 0.0 { '-' } else { '+' };
        (sign, fmt_real(c.re.abs()))
    } else if c.re == 0.0 {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        let m = fmt_real(c.im.abs());
        (sign, if m == "1" { "i".to_string() } else { format!("{m}i") })
    } else {
        let op = if c.im < 0.0 { '-' } else { '+' };
        ('+', format!("({} {op} {}i)", fmt_real(c.re), fmt_real(c.im.abs())))
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.im == 0.0 {
                    format!("{}·{m}", fmt_real(c.re))
                } else {
                    format!("({}{:+}i)·{m}", fmt_real(c.re), c.im)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl std::ops::Add<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl std::ops::Sub<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl std::ops::Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// JSON form `{"q": number, "terms": [{"a", "b", "bs", "re", "im"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NcPolyJson {
    pub q: f64,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub a: i32,
    pub b: u32,
    pub bs: u32,
    pub re: f64,
    pub im: f64,
}

impl NcPoly {
    pub fn to_json(&self, q: QParam) -> NcPolyJson {
        NcPolyJson {
            q: q.value(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { a: m.alpha, b: m.beta, bs: m.beta_star, re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn from_json(j: &NcPolyJson) -> NcPoly {
        NcPoly::from_terms(
            j.terms
                .iter()
                .map(|t| (CanonicalMonomial::new(t.a, t.b, t.bs), Complex64::new(t.re, t.im))),
        )
    }
}

type ProductCache = HashMap<(CanonicalMonomial, CanonicalMonomial), Vec<(CanonicalMonomial, Complex64)>>;

/// SU_q(2) polynomial algebra with `q` bound to a number.
#[derive(Debug)]
pub struct Algebra {
    q: QParam,
    prune: f64,
    max_degree: u32,
    products: RwLock<ProductCache>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            q: self.q,
            prune: self.prune,
            max_degree: self.max_degree,
            products: RwLock::new(HashMap::new()),
        }
    }
}

impl Algebra {
    pub fn new(q: QParam) -> Self {
        Algebra {
            q,
            prune: DEFAULT_PRUNE,
            max_degree: DEFAULT_MAX_DEGREE,
            products: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_prune(mut self, prune: f64) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Reduces a free word to its canonical expansion.
    pub fn normalize(&self, w: &Word) -> NcPoly {
        self.normalize_traced(w).0
    }

    pub fn normalize_traced(&self, w: &Word) -> (NcPoly, RewriteStats) {
        let (p, stats) = rewrite::normalize(w, self.q.value());
        (p.pruned(self.prune), stats)
    }

    fn monomial_product(&self, x: CanonicalMonomial, y: CanonicalMonomial) -> Vec<(CanonicalMonomial, Complex64)> {
        if let Some(hit) = self.products.read().expect("product cache poisoned").get(&(x, y)) {
            return hit.clone();
        }
        let mut letters = x.letters();
        letters.extend(y.letters());
        let (p, _) = rewrite::normalize(&Word::new(letters), self.q.value());
        let terms: Vec<_> = p.terms().map(|(m, c)| (*m, *c)).collect();
        self.products.write().expect("product cache poisoned").insert((x, y), terms.clone());
        terms
    }

    /// The algebra product, reduced to canonical form.
    pub fn mul(&self, x: &NcPoly, y: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let c = cx * cy;
                for (m, cm) in self.monomial_product(*mx, *my) {
                    out.add_term(m, c * cm);
                }
            }
        }
        out.pruned(self.prune)
    }

    /// [`Algebra::mul`] with the degree guard enforced.
    pub fn checked_mul(&self, x: &NcPoly, y: &NcPoly) -> Result<NcPoly> {
        let degree = x.degree() + y.degree();
        if degree > self.max_degree {
            return Err(Error::DegreeOverflow { degree, max: self.max_degree });
        }
        Ok(self.mul(x, y))
    }

    pub fn pow(&self, x: &NcPoly, e: u32) -> Result<NcPoly> {
        let degree = x.degree().saturating_mul(e);
        if degree > self.max_degree {
            return Err(Error::DegreeOverflow { degree, max: self.max_degree });
        }
        let mut acc = NcPoly::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        Ok(acc)
    }

    /// Left-to-right product of several elements.
    pub fn product<'a, I: IntoIterator<Item = &'a NcPoly>>(&self, factors: I) -> NcPoly {
        factors.into_iter().fold(NcPoly::one(), |acc, f| self.mul(&acc, f))
    }

    /// The involution. `(α^s β^n β*^m)* = β^m β*^n (α^s)*`, which is then
    /// reduced (e.g. `(αβ)* = β*α* = q α*β*`).
    pub fn adjoint(&self, x: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (m, c) in x.terms() {
            let mut letters: Vec<Letter> = m.letters().into_iter().rev().map(Letter::adjoint).collect();
            if letters.is_empty() {
                out.add_term(*m, c.conj());
                continue;
            }
            letters.shrink_to_fit();
            let (p, _) = rewrite::normalize(&Word::new(letters), self.q.value());
            for (mm, cc) in p.terms() {
                out.add_term(*mm, c.conj() * cc);
            }
        }
        out.pruned(self.prune)
    }

    /// Parses and normalizes an expression; see `docs/grammar.md`.
    pub fn parse(&self, text: &str) -> Result<NcPoly> {
        parse::parse(self, text)
    }

    /// Writes an odd element as `Σ evenFactorᵢ · generatorᵢ`.
    pub fn module_decompose(&self, x: &NcPoly) -> Result<Vec<(NcPoly, Letter)>> {
        decompose::module_decompose(x)
    }

    /// Sum of `factor · generator` over a decomposition.
    pub fn reassemble(&self, parts: &[(NcPoly, Letter)]) -> NcPoly {
        parts.iter().fold(NcPoly::zero(), |acc, (f, g)| &acc + &self.mul(f, &NcPoly::generator(*g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn alg(q: f64) -> Algebra {
        Algebra::new(QParam::new(q).unwrap())
    }

    #[test]
    fn qparam_bounds() {
        assert!(QParam::new(0.5).is_ok());
        assert_eq!(QParam::new(0.0), Err(Error::InvalidQ(0.0)));
        assert!(QParam::new(1.0).is_err());
        assert!(QParam::new(f64::NAN).is_err());
        assert!(QParam::classical().is_classical());
    }

    #[test]
    fn monomial_counts_and_grading() {
        for d in 0..8 {
            assert_eq!(CanonicalMonomial::of_degree(d).len() as u32, (d + 1) * (d + 1));
        }
        let ab = CanonicalMonomial::new(1, 1, 0);
        assert_eq!(ab.charge(), (1, 1));
        assert_eq!(Letter::BetaStar.monomial().charge(), (0, -1));
        assert_eq!(ab.parity(), Parity::Even);
        assert_eq!(ab.letters(), vec![Letter::Alpha, Letter::Beta]);
    }

    #[test]
    fn mul_examples() {
        let a = alg(0.5);
        let al = NcPoly::generator(Letter::Alpha);
        let be = NcPoly::generator(Letter::Beta);
        assert_eq!(a.mul(&al, &be), NcPoly::monomial(CanonicalMonomial::new(1, 1, 0)));
        let ba = a.mul(&be, &al);
        assert_eq!(ba, NcPoly::term(CanonicalMonomial::new(1, 1, 0), c(2.0)));
    }

    #[test]
    fn adjoint_examples() {
        let a = alg(0.5);
        assert_eq!(a.adjoint(&NcPoly::generator(Letter::Alpha)), NcPoly::generator(Letter::AlphaStar));
        let cb = NcPoly::term(Letter::Beta.monomial(), Complex64::new(1.0, 2.0));
        assert_eq!(a.adjoint(&cb), NcPoly::term(Letter::BetaStar.monomial(), Complex64::new(1.0, -2.0)));
        // (αβ)* = β*α* = q α*β*
        let ab = NcPoly::monomial(CanonicalMonomial::new(1, 1, 0));
        assert_eq!(a.adjoint(&ab), NcPoly::term(CanonicalMonomial::new(-1, 0, 1), c(0.5)));
        assert_eq!(a.adjoint(&NcPoly::one()), NcPoly::one());
    }

    #[test]
    fn z2_examples() {
        let a = alg(0.5);
        let al = NcPoly::generator(Letter::Alpha);
        assert_eq!(al.z2_act(), -&al);
        let ab = NcPoly::monomial(CanonicalMonomial::new(1, 1, 0));
        assert_eq!(ab.z2_act(), ab);
        let x = &al + &ab;
        assert_eq!(x.z2_project(Parity::Even), ab);
        assert!(al.z2_project(Parity::Even).is_zero());
        let _ = a;
    }

    #[test]
    fn degree_guard() {
        let a = alg(0.5).with_max_degree(4);
        let b3 = NcPoly::monomial(CanonicalMonomial::new(0, 3, 0));
        assert_eq!(a.checked_mul(&b3, &b3), Err(Error::DegreeOverflow { degree: 6, max: 4 }));
        assert!(a.pow(&NcPoly::generator(Letter::Beta), 5).is_err());
        assert!(a.pow(&NcPoly::generator(Letter::Beta), 4).is_ok());
    }

    #[test]
    fn prune_drops_small_coefficients() {
        let p = NcPoly::from_terms([(CanonicalMonomial::UNIT, c(1e-15)), (Letter::Beta.monomial(), c(1.0))]);
        let p = p.pruned(DEFAULT_PRUNE);
        assert_eq!(p.len(), 1);
        assert!(NcPoly::zero().is_empty());
    }

    #[test]
    fn json_field_names() {
        let p = NcPoly::term(CanonicalMonomial::new(-2, 1, 3), Complex64::new(0.25, -1.0));
        let j = serde_json::to_value(p.to_json(QParam::new(0.5).unwrap())).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"q": 0.5, "terms": [{"a": -2, "b": 1, "bs": 3, "re": 0.25, "im": -1.0}]})
        );
        let back: NcPolyJson = serde_json::from_value(j).unwrap();
        assert_eq!(NcPoly::from_json(&back), p);
    }

    #[test]
    fn ascii_rendering() {
        let a = alg(0.5);
        let p = a.parse("b*a").unwrap();
        assert_eq!(p.ascii(), "2·a b");
        assert_eq!(NcPoly::one().ascii(), "1");
        assert_eq!(a.parse("a*a' ").unwrap().ascii(), "1 - 0.25·b b'");
    }
}
