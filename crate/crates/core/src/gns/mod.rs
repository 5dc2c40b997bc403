//! Haar state, GNS pairing and the orthonormal basis `e^(l)_jk`.
//!
//! The Haar state is normalized so that `h(1) = 1`:
//!
//! ```text
//!   h(a) = (1 − q²) Σ_{n ≥ 0} q^{2n} (e_n ⊗ e_0, a e_n ⊗ e_0)
//! ```
//!
//! On canonical monomials this vanishes unless the monomial is `(ββ*)^n`, where
//! it equals `(1 − q²) / (1 − q^{2(n+1)})`. Every relation preserves the charge
//! pair `(alpha exponent, β-count − β*-count)`, so the pairing `⟨a, b⟩ = h(a*b)`
//! is block diagonal over charge sectors, and the basis is built sector by
//! sector by Gram–Schmidt along the degree filtration.

pub mod jacobi;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, CanonicalMonomial, NcPoly, NcPolyJson, QParam};
use crate::rep::{diagonal_entry, TruncationSpec};

pub use jacobi::{index_region, little_jacobi, little_jacobi_coeffs, little_jacobi_value, t_matrix, t_matrix_raw, IndexRegion};

/// Largest `l` accepted by [`gram_schmidt_basis`].
pub const MAX_BASIS_L2: i32 = 8;

/// Dependent-vector threshold for Gram–Schmidt, relative to the vector's norm.
pub const GRAM_SCHMIDT_TOL: f64 = 1e-12;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(v: i32) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn neg(self) -> Self {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `(l, j, k)` with `l ≥ 0`, `|j|, |k| ≤ l` and `j ≡ k ≡ l (mod 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub l: HalfInt,
    pub j: HalfInt,
    pub k: HalfInt,
}

impl Label {
    pub fn new(l: HalfInt, j: HalfInt, k: HalfInt) -> Result<Self> {
        let (l2, j2, k2) = (l.twice(), j.twice(), k.twice());
        let ok = l2 >= 0 && j2.abs() <= l2 && k2.abs() <= l2 && (l2 - j2) % 2 == 0 && (l2 - k2) % 2 == 0;
        if ok {
            Ok(Label { l, j, k })
        } else {
            Err(Error::InvalidLabel(format!("(l, j, k) = ({l}, {j}, {k})")))
        }
    }

    pub fn from_twice(l2: i32, j2: i32, k2: i32) -> Result<Self> {
        Label::new(HalfInt(l2), HalfInt(j2), HalfInt(k2))
    }

    /// Charge sector `(c1, c2) = (−(j+k), k−j)`.
    pub fn sector(&self) -> (i32, i32) {
        let (j2, k2) = (self.j.twice(), self.k.twice());
        (-(j2 + k2) / 2, (k2 - j2) / 2)
    }

    /// Position in the degree filtration of its sector.
    pub fn depth(&self) -> usize {
        let (c1, c2) = self.sector();
        ((self.l.twice() - c1.abs() - c2.abs()) / 2) as usize
    }

    pub fn from_sector(c1: i32, c2: i32, depth: usize) -> Label {
        Label {
            l: HalfInt(c1.abs() + c2.abs() + 2 * depth as i32),
            j: HalfInt(-(c1 + c2)),
            k: HalfInt(c2 - c1),
        }
    }

    /// Every label with `l ≤ lmax`, in `(l, j, k)` order.
    pub fn all(lmax: HalfInt) -> Vec<Label> {
        let mut out = Vec::new();
        for l2 in 0..=lmax.twice() {
            for j2 in (-l2..=l2).step_by(2) {
                for k2 in (-l2..=l2).step_by(2) {
                    out.push(Label { l: HalfInt(l2), j: HalfInt(j2), k: HalfInt(k2) });
                }
            }
        }
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.j, self.k)
    }
}

/// `h((ββ*)ⁿ)`.
pub fn haar_of_x_power(n: u32, q: QParam) -> f64 {
    if q.is_classical() {
        return 1.0 / (n as f64 + 1.0);
    }
    let qsq = q.value() * q.value();
    (1.0 - qsq) / (1.0 - qsq.powi(n as i32 + 1))
}

/// Closed-form Haar state.
pub fn haar_exact(x: &NcPoly, q: QParam) -> Complex64 {
    x.terms()
        .filter(|(m, _)| m.alpha == 0 && m.beta == m.beta_star)
        .map(|(m, c)| c * haar_of_x_power(m.beta, q))
        .sum()
}

/// Haar state from the truncated representation:
/// `(1 − q²) Σ_{n < N_F} q^{2n} ρ(x)_{(n,0),(n,0)}`.
pub fn haar_numeric(x: &NcPoly, t: &TruncationSpec, q: QParam) -> Complex64 {
    let qsq = q.value() * q.value();
    (0..t.fock_dim())
        .map(|n| diagonal_entry(x, t, q, n, 0) * ((1.0 - qsq) * qsq.powi(n as i32)))
        .sum()
}

/// `⟨a, b⟩ = h(a* b)`.
///
/// For `0 < q < 1` this is evaluated sector by sector on the spectral measure
/// of `x = ββ*` (see [`SectorMeasure`]), which avoids the cancellations of
/// expanding `a* b` in the canonical basis. The classical point uses
/// [`gns_inner_expanded`].
pub fn gns_inner(alg: &Algebra, a: &NcPoly, b: &NcPoly) -> Complex64 {
    let q = alg.q();
    if q.is_classical() {
        return gns_inner_expanded(alg, a, b);
    }
    let sa = sector_components(a);
    let sb = sector_components(b);
    let mut total = Complex64::new(0.0, 0.0);
    for (sector, fa) in &sa {
        if let Some(fb) = sb.get(sector) {
            total += SectorMeasure::new(sector.0, sector.1, q).inner(fa, fb);
        }
    }
    total
}

/// `haarExact(adjoint(a) · b)` computed literally in the canonical basis.
pub fn gns_inner_expanded(alg: &Algebra, a: &NcPoly, b: &NcPoly) -> Complex64 {
    haar_exact(&alg.mul(&alg.adjoint(a), b), alg.q())
}

/// Splits `x` into sector components `m₀(c1, c2) · f(ββ*)`, returning the
/// coefficients of `f` keyed by sector.
pub fn sector_components(x: &NcPoly) -> BTreeMap<(i32, i32), Vec<Complex64>> {
    let mut out: BTreeMap<(i32, i32), Vec<Complex64>> = BTreeMap::new();
    for (m, c) in x.terms() {
        let i = m.beta.min(m.beta_star) as usize;
        let f = out.entry(m.charge()).or_default();
        if f.len() <= i {
            f.resize(i + 1, Complex64::new(0.0, 0.0));
        }
        f[i] += c;
    }
    out
}

/// Relative weight below which nodes of a [`SectorMeasure`] are dropped.
const NODE_CUTOFF: f64 = 1e-20;

/// The Haar pairing restricted to sector `(c1, c2)`.
///
/// With `m₀ = α^{c1} β^{max(c2,0)} β*^{max(−c2,0)}` (negative `c1` meaning
/// powers of α*), `m₀* m₀ = P(x) x^{|c2|}` where `P(x) = Π_{i<c1}(1 − Q^{−i}x)`
/// for `c1 ≥ 0` and `P(x) = Π_{i=1..|c1|}(1 − Q^i x)` otherwise, `Q = q²`. Hence
/// `⟨m₀ f(x), m₀ g(x)⟩ = Σ_k μ_k conj(f(Q^k)) g(Q^k)` with the nonnegative
/// weights `μ_k = (1 − Q) Q^k P(Q^k) Q^{k|c2|}`.
#[derive(Debug, Clone)]
pub struct SectorMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SectorMeasure {
    pub fn new(c1: i32, c2: i32, q: QParam) -> SectorMeasure {
        let qsq = q.value() * q.value();
        let kmax = (NODE_CUTOFF.ln() / qsq.ln()).ceil() as i32 + c1.abs();
        let mut nodes = Vec::with_capacity(kmax as usize + 1);
        let mut weights = Vec::with_capacity(kmax as usize + 1);
        for k in 0..=kmax {
            let p: f64 = if c1 >= 0 {
                (0..c1).map(|i| 1.0 - qsq.powi(k - i)).product()
            } else {
                (1..=-c1).map(|i| 1.0 - qsq.powi(k + i)).product()
            };
            let y = qsq.powi(k);
            nodes.push(y);
            weights.push((1.0 - qsq) * y * p * y.powi(c2.abs()));
        }
        SectorMeasure { nodes, weights }
    }

    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let eval = |c: &[Complex64], y: f64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ci| acc * y + ci);
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0.0)
            .map(|(y, w)| eval(f, *y).conj() * eval(g, *y) * w)
            .sum()
    }
}

pub fn charge_of(m: &CanonicalMonomial) -> (i32, i32) {
    m.charge()
}

/// The `i`-th monomial of the degree filtration of sector `(c1, c2)`.
pub fn sector_monomial(c1: i32, c2: i32, i: usize) -> CanonicalMonomial {
    CanonicalMonomial::new(c1, c2.max(0) as u32 + i as u32, (-c2).max(0) as u32 + i as u32)
}

/// Sectors `(c1, c2)` that carry a label with `l ≤ lmax`, with their depth count.
pub fn sectors(lmax: HalfInt) -> Vec<((i32, i32), usize)> {
    let l2 = lmax.twice();
    let mut out = Vec::new();
    for c1 in -l2..=l2 {
        for c2 in -(l2 - c1.abs())..=(l2 - c1.abs()) {
            let depth = ((l2 - c1.abs() - c2.abs()) / 2) as usize + 1;
            out.push(((c1, c2), depth));
        }
    }
    out
}

/// Sector Gram matrix `G_ab = h(m_a* m_b)` over the first `depth` monomials.
pub fn sector_gram(alg: &Algebra, c1: i32, c2: i32, depth: usize) -> Vec<Vec<Complex64>> {
    let ms: Vec<NcPoly> = (0..depth).map(|i| NcPoly::monomial(sector_monomial(c1, c2, i))).collect();
    ms.iter().map(|a| ms.iter().map(|b| gns_inner(alg, a, b)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisEntry {
    pub poly: NcPoly,
    /// Norm of the Gram–Schmidt residual whose top monomial has coefficient 1.
    pub norm: f64,
}

/// Orthonormal family `e^(l)_jk` for `l ≤ lmax`.
#[derive(Debug, Clone)]
pub struct GnsBasis {
    pub lmax: HalfInt,
    pub q: QParam,
    entries: BTreeMap<Label, BasisEntry>,
}

impl GnsBasis {
    pub fn get(&self, label: &Label) -> Option<&BasisEntry> {
        self.entries.get(label)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Label, &BasisEntry)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.entries.keys().copied().collect()
    }

    /// The sub-basis with `l ≤ lmax`.
    pub fn truncated(&self, lmax: HalfInt) -> GnsBasis {
        let entries = self.entries.iter().filter(|(l, _)| l.l <= lmax).map(|(l, e)| (*l, e.clone())).collect();
        GnsBasis { lmax: lmax.min(self.lmax), q: self.q, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of vectors carrying each `l`.
    pub fn counts_by_l(&self) -> BTreeMap<HalfInt, usize> {
        let mut out = BTreeMap::new();
        for label in self.entries.keys() {
            *out.entry(label.l).or_insert(0) += 1;
        }
        out
    }

    /// `max |⟨e_a, e_b⟩ − δ_ab|` over all pairs.
    pub fn orthonormality_error(&self, alg: &Algebra) -> f64 {
        let vs: Vec<&NcPoly> = self.entries.values().map(|e| &e.poly).collect();
        let mut worst: f64 = 0.0;
        for (a, va) in vs.iter().enumerate() {
            for (b, vb) in vs.iter().enumerate().skip(a) {
                let g = gns_inner(alg, va, vb);
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - want).norm());
            }
        }
        worst
    }

    pub fn to_json(&self) -> GnsBasisJson {
        GnsBasisJson {
            lmax2: self.lmax.twice(),
            entries: self
                .entries
                .iter()
                .map(|(l, e)| BasisEntryJson {
                    l2: l.l.twice(),
                    j2: l.j.twice(),
                    k2: l.k.twice(),
                    norm: e.norm,
                    poly: e.poly.to_json(self.q),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnsBasisJson {
    pub lmax2: i32,
    pub entries: Vec<BasisEntryJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisEntryJson {
    pub l2: i32,
    pub j2: i32,
    pub k2: i32,
    pub norm: f64,
    pub poly: NcPolyJson,
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Orthonormalizes the filtration `1, x, x², …` of one sector.
///
/// Vectors live in `L²(μ)` coordinates (values at the nodes scaled by `√μ_k`).
/// Step `n` takes `x · e_{n−1}`, which spans the same filtration as `xⁿ`, and
/// runs modified Gram–Schmidt against `e_0..e_{n−1}` twice. Polynomial
/// coefficients are carried along. Returns the coefficients of each `e_n` and
/// the residual norm of the monic representative.
fn orthonormalize(measure: &SectorMeasure, depth: usize, sector: (i32, i32)) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let sqrt_w: Vec<f64> = measure.weights.iter().map(|w| w.max(0.0).sqrt()).collect();
    let mut vals: Vec<Vec<f64>> = Vec::with_capacity(depth);
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(depth);
    let mut norms = Vec::with_capacity(depth);
    for n in 0..depth {
        let (mut w, mut c) = if n == 0 {
            (sqrt_w.clone(), vec![1.0])
        } else {
            let w: Vec<f64> = vals[n - 1].iter().zip(&measure.nodes).map(|(v, y)| v * y).collect();
            let mut c = vec![0.0];
            c.extend_from_slice(&coeffs[n - 1]);
            (w, c)
        };
        let start = dot(&w, &w).sqrt();
        for _pass in 0..2 {
            for (e, ec) in vals.iter().zip(&coeffs) {
                let h = dot(e, &w);
                w.iter_mut().zip(e).for_each(|(wi, ei)| *wi -= h * ei);
                c.iter_mut().zip(ec).for_each(|(ci, ei)| *ci -= h * ei);
            }
        }
        let norm = dot(&w, &w).sqrt();
        if !(norm > GRAM_SCHMIDT_TOL * start) {
            return Err(Error::SingularGram { c1: sector.0, c2: sector.1, depth: n });
        }
        w.iter_mut().for_each(|x| *x /= norm);
        c.iter_mut().for_each(|x| *x /= norm);
        norms.push(1.0 / c[n]);
        vals.push(w);
        coeffs.push(c);
    }
    Ok((coeffs, norms))
}

/// Orthonormal basis up to `lmax` by sector-wise Gram–Schmidt.
pub fn gram_schmidt_basis(alg: &Algebra, lmax: HalfInt) -> Result<GnsBasis> {
    if lmax.twice() < 0 || lmax.twice() > MAX_BASIS_L2 {
        return Err(Error::InvalidLabel(format!("lmax = {lmax} outside 0..=4")));
    }
    if alg.q().is_classical() {
        return Err(Error::InvalidQ(1.0));
    }
    let mut entries = BTreeMap::new();
    for ((c1, c2), depth) in sectors(lmax) {
        let measure = SectorMeasure::new(c1, c2, alg.q());
        let (coeffs, norms) = orthonormalize(&measure, depth, (c1, c2))?;
        for (d, (c, norm)) in coeffs.into_iter().zip(norms).enumerate() {
            let poly = NcPoly::from_terms(c.into_iter().enumerate().map(|(i, ci)| (sector_monomial(c1, c2, i), Complex64::new(ci, 0.0))));
            entries.insert(Label::from_sector(c1, c2, d), BasisEntry { poly, norm });
        }
    }
    log::debug!("Gram-Schmidt basis: {} vectors up to l = {lmax}", entries.len());
    Ok(GnsBasis { lmax, q: alg.q(), entries })
}

/// Basis assembled from the closed-form matrix coefficients.
pub fn t_matrix_basis(alg: &Algebra, lmax: HalfInt) -> Result<GnsBasis> {
    let mut entries = BTreeMap::new();
    for label in Label::all(lmax) {
        let raw = t_matrix_raw(alg, label)?;
        let (_, lead) = raw.leading().expect("nonzero coefficient");
        let poly = t_matrix(alg, label)?;
        entries.insert(label, BasisEntry { norm: lead.norm() / poly.leading().expect("nonzero").1.norm(), poly });
    }
    Ok(GnsBasis { lmax, q: alg.q(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{Letter, Parity};

    fn alg(q: f64) -> Algebra {
        Algebra::new(QParam::new(q).unwrap())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn halfint_and_labels() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        assert!(Label::from_twice(1, 1, -1).is_ok());
        assert!(Label::from_twice(1, 0, 1).is_err());
        assert!(Label::from_twice(2, 4, 0).is_err());
        let l = Label::from_twice(1, -1, -1).unwrap();
        assert_eq!(l.sector(), (1, 0));
        assert_eq!(Label::from_sector(1, 0, 0), l);
        for label in Label::all(HalfInt::from_twice(6)) {
            let (c1, c2) = label.sector();
            assert_eq!(Label::from_sector(c1, c2, label.depth()), label);
        }
    }

    #[test]
    fn haar_examples() {
        let q = QParam::new(0.5).unwrap();
        assert_eq!(haar_exact(&NcPoly::one(), q), c(1.0));
        let x = NcPoly::monomial(CanonicalMonomial::new(0, 1, 1));
        assert!((haar_exact(&x, q).re - 0.75 / (1.0 - 0.0625)).abs() < 1e-15);
        assert_eq!(haar_exact(&NcPoly::generator(Letter::Alpha), q), c(0.0));
        assert_eq!(haar_of_x_power(3, QParam::classical()), 0.25);
    }

    #[test]
    fn haar_numeric_examples() {
        let q = QParam::new(0.5).unwrap();
        let t = TruncationSpec::new(12, 4, 0).unwrap();
        let one = haar_numeric(&NcPoly::one(), &t, q);
        assert!((one.re - (1.0 - 0.25f64.powi(12))).abs() < 1e-15);
        let x = NcPoly::monomial(CanonicalMonomial::new(0, 1, 1));
        assert!((haar_numeric(&x, &t, q) - haar_exact(&x, q)).norm() <= 2.0 * 0.5f64.powi(4 * 12));
        assert_eq!(haar_numeric(&NcPoly::generator(Letter::Beta), &t, q), c(0.0));
    }

    #[test]
    fn inner_product_examples() {
        let a = alg(0.5);
        let al = NcPoly::generator(Letter::Alpha);
        let be = NcPoly::generator(Letter::Beta);
        assert_eq!(gns_inner(&a, &NcPoly::one(), &NcPoly::one()), c(1.0));
        assert_eq!(gns_inner(&a, &al, &be), c(0.0));
        assert!((gns_inner(&a, &be, &be).re - 0.75 / 0.9375).abs() < 1e-15);
    }

    #[test]
    fn charge_is_respected_by_relations() {
        let a = alg(0.3);
        assert_eq!(charge_of(&CanonicalMonomial::new(1, 1, 0)), (1, 1));
        let lhs = a.parse("a' a").unwrap();
        assert!(lhs.terms().all(|(m, _)| charge_of(m) == (0, 0)));
        assert_eq!(charge_of(&Letter::BetaStar.monomial()), (0, -1));
    }

    #[test]
    fn basis_first_vectors() {
        let a = alg(0.5);
        let b = gram_schmidt_basis(&a, HalfInt::from_twice(2)).unwrap();
        assert!(b.get(&Label::from_twice(0, 0, 0).unwrap()).unwrap().poly.approx_eq(&NcPoly::one(), 1e-15));
        let e = &b.get(&Label::from_twice(1, -1, -1).unwrap()).unwrap();
        let norm2: f64 = 1.0 - 0.75 / 0.9375;
        assert!((e.norm - norm2.sqrt()).abs() < 1e-14);
        assert_eq!(e.poly.len(), 1);
        assert_eq!(b.len(), 1 + 4 + 9);
        assert!(b.orthonormality_error(&a) < 1e-12);
    }

    #[test]
    fn too_large_lmax_rejected() {
        let a = alg(0.5);
        assert!(gram_schmidt_basis(&a, HalfInt::from_twice(9)).is_err());
    }

    #[test]
    fn singular_gram_is_reported() {
        // two nodes support at most two independent polynomials
        let m = SectorMeasure { nodes: vec![1.0, 0.5], weights: vec![0.5, 0.5] };
        assert!(orthonormalize(&m, 2, (0, 0)).is_ok());
        assert_eq!(orthonormalize(&m, 3, (0, 0)), Err(Error::SingularGram { c1: 0, c2: 0, depth: 2 }));
    }

    #[test]
    fn stable_inner_matches_expanded() {
        let a = alg(0.6);
        let ms = CanonicalMonomial::up_to_degree(4);
        for x in &ms {
            for y in &ms {
                let (px, py) = (NcPoly::monomial(*x), NcPoly::monomial(*y));
                let want = gns_inner_expanded(&a, &px, &py);
                let got = gns_inner(&a, &px, &py);
                assert!((want - got).norm() < 1e-10 * want.norm().max(1e-3), "{x} {y}: {want} vs {got}");
            }
        }
    }

    #[test]
    fn orthonormal_at_small_q() {
        for q in [0.3, 0.5, 0.9] {
            let a = alg(q);
            let b = gram_schmidt_basis(&a, HalfInt::from_twice(6)).unwrap();
            assert!(b.orthonormality_error(&a) < 1e-10, "q = {q}: {}", b.orthonormality_error(&a));
        }
    }

    #[test]
    fn basis_vectors_have_sector_parity() {
        let a = alg(0.7);
        let b = gram_schmidt_basis(&a, HalfInt::from_twice(3)).unwrap();
        for (label, e) in b.entries() {
            let want = if label.l.is_integer() { Parity::Even } else { Parity::Odd };
            assert_eq!(e.poly.parity(), Some(want));
        }
    }

    #[test]
    fn json_shape() {
        let a = alg(0.5);
        let b = gram_schmidt_basis(&a, HalfInt::from_twice(1)).unwrap();
        let j = serde_json::to_value(b.to_json()).unwrap();
        assert_eq!(j["lmax2"], 1);
        assert_eq!(j["entries"].as_array().unwrap().len(), 5);
        let e0 = &j["entries"][0];
        for key in ["l2", "j2", "k2", "norm", "poly"] {
            assert!(e0.get(key).is_some(), "{key}");
        }
        assert_eq!(e0["poly"]["q"], 0.5);
    }
}
