//! Finite compression of the faithful representation
//!
//! ```text
//!   α ↦ S√(1 − Q²) ⊗ 1,    β ↦ Q ⊗ R
//! ```
//!
//! on ℓ²(ℕ⁰)⊗ℓ²(ℤ), with `Q e_k = q^k e_k`, `S e_k = e_{k−1}` (`S e_0 = 0`) and
//! `R e_m = e_{m+1}`. The Fock index is cut to `0..N_F` and the ℤ index to
//! `−N_Z..=N_Z`. Transitions leaving the window are dropped (no cyclic wrap),
//! so identities only hold on the interior, away from both cutoffs; the
//! interior projector makes that explicit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, CanonicalMonomial, Letter, NcPoly, QParam, Word};

pub type OperatorMatrix = DMatrix<Complex64>;

/// Iteration cap for [`operator_norm`].
pub const POWER_ITERATIONS: usize = 200;
/// Relative convergence threshold for [`operator_norm`].
pub const POWER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationSpec {
    fock_dim: usize,
    z_band: usize,
    interior_margin: usize,
}

impl TruncationSpec {
    pub fn new(fock_dim: usize, z_band: usize, interior_margin: usize) -> Result<Self> {
        if fock_dim < 4 {
            return Err(Error::InvalidTruncation(format!("fock dimension {fock_dim} < 4")));
        }
        if z_band < 2 {
            return Err(Error::InvalidTruncation(format!("z band {z_band} < 2")));
        }
        if interior_margin >= fock_dim.min(z_band) {
            return Err(Error::InvalidTruncation(format!(
                "margin {interior_margin} must be below min(N_F, N_Z) = {}",
                fock_dim.min(z_band)
            )));
        }
        Ok(TruncationSpec { fock_dim, z_band, interior_margin })
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn z_band(&self) -> usize {
        self.z_band
    }

    pub fn interior_margin(&self) -> usize {
        self.interior_margin
    }

    pub fn with_margin(&self, margin: usize) -> Result<Self> {
        TruncationSpec::new(self.fock_dim, self.z_band, margin)
    }

    fn z_width(&self) -> usize {
        2 * self.z_band + 1
    }

    pub fn dim(&self) -> usize {
        self.fock_dim * self.z_width()
    }

    /// Row-major position of `e_fock ⊗ e_z`.
    pub fn index(&self, fock: usize, z: i64) -> usize {
        debug_assert!(fock < self.fock_dim && z.unsigned_abs() as usize <= self.z_band);
        fock * self.z_width() + (z + self.z_band as i64) as usize
    }

    pub fn coords(&self, idx: usize) -> (usize, i64) {
        (idx / self.z_width(), (idx % self.z_width()) as i64 - self.z_band as i64)
    }

    /// Basis indices with `fock ≤ N_F − 1 − μ` and `|z| ≤ N_Z − μ`.
    pub fn interior_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let (f, z) = self.coords(i);
                f + margin < self.fock_dim && z.unsigned_abs() as usize + margin <= self.z_band
            })
            .collect()
    }
}

/// Image of a basis vector under one generator: a scalar and a target basis
/// vector, or `None` when the compression kills it.
fn act(letter: Letter, fock: usize, z: i64, q: f64, t: &TruncationSpec) -> Option<(f64, usize, i64)> {
    let nz = t.z_band as i64;
    match letter {
        Letter::Alpha => (fock >= 1).then(|| ((1.0 - q.powi(2 * fock as i32)).sqrt(), fock - 1, z)),
        Letter::AlphaStar => {
            (fock + 1 < t.fock_dim).then(|| ((1.0 - q.powi(2 * (fock as i32 + 1))).sqrt(), fock + 1, z))
        }
        Letter::Beta => (z < nz).then(|| (q.powi(fock as i32), fock, z + 1)),
        Letter::BetaStar => (z > -nz).then(|| (q.powi(fock as i32), fock, z - 1)),
    }
}

/// Applies the word (rightmost letter first) to one basis vector.
fn act_word(letters: &[Letter], col: usize, q: f64, t: &TruncationSpec) -> Option<(f64, usize)> {
    let (mut fock, mut z) = t.coords(col);
    let mut coeff = 1.0;
    for &l in letters.iter().rev() {
        let (c, f2, z2) = act(l, fock, z, q, t)?;
        coeff *= c;
        fock = f2;
        z = z2;
    }
    (coeff != 0.0).then(|| (coeff, t.index(fock, z)))
}

fn accumulate(m: &mut OperatorMatrix, letters: &[Letter], c: Complex64, q: f64, t: &TruncationSpec) {
    for col in 0..t.dim() {
        if let Some((k, row)) = act_word(letters, col, q, t) {
            m[(row, col)] += c * k;
        }
    }
}

/// The generator matrices `(ρ(α), ρ(β))`.
pub fn build_generators(t: &TruncationSpec, q: QParam) -> (OperatorMatrix, OperatorMatrix) {
    let mut a = OperatorMatrix::zeros(t.dim(), t.dim());
    let mut b = OperatorMatrix::zeros(t.dim(), t.dim());
    let one = Complex64::new(1.0, 0.0);
    accumulate(&mut a, &[Letter::Alpha], one, q.value(), t);
    accumulate(&mut b, &[Letter::Beta], one, q.value(), t);
    (a, b)
}

/// ρ of a polynomial; each monomial maps to the ordered product of generator
/// matrices.
pub fn represent(x: &NcPoly, t: &TruncationSpec, q: QParam) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(t.dim(), t.dim());
    for (mono, c) in x.terms() {
        accumulate(&mut m, &mono.letters(), *c, q.value(), t);
    }
    m
}

/// ρ of a free word, with no relation applied.
pub fn represent_word(w: &Word, t: &TruncationSpec, q: QParam) -> OperatorMatrix {
    represent_words(std::slice::from_ref(w), t, q)
}

pub fn represent_words(ws: &[Word], t: &TruncationSpec, q: QParam) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(t.dim(), t.dim());
    for w in ws {
        accumulate(&mut m, &w.letters, w.coeff, q.value(), t);
    }
    m
}

/// Diagonal entry `(e_fock ⊗ e_z, ρ(x) e_fock ⊗ e_z)` without building ρ(x).
pub fn diagonal_entry(x: &NcPoly, t: &TruncationSpec, q: QParam, fock: usize, z: i64) -> Complex64 {
    let col = t.index(fock, z);
    x.terms()
        .filter_map(|(m, c)| act_word(&m.letters(), col, q.value(), t).filter(|(_, row)| *row == col).map(|(k, _)| c * k))
        .sum()
}

/// The orthogonal projector onto the interior with the configured margin.
pub fn interior_projector(t: &TruncationSpec) -> OperatorMatrix {
    interior_projector_with_margin(t, t.interior_margin)
}

pub fn interior_projector_with_margin(t: &TruncationSpec, margin: usize) -> OperatorMatrix {
    let mut p = OperatorMatrix::zeros(t.dim(), t.dim());
    for i in t.interior_indices(margin) {
        p[(i, i)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// `‖P A P‖` for the interior projector with the given margin.
pub fn interior_norm(a: &OperatorMatrix, t: &TruncationSpec, margin: usize) -> f64 {
    let idx = t.interior_indices(margin);
    if idx.is_empty() {
        return 0.0;
    }
    let sub = a.select_rows(&idx).select_columns(&idx);
    operator_norm(&sub)
}

/// Spectral norm by power iteration on `A*A`.
pub fn operator_norm(a: &OperatorMatrix) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let ah = a.adjoint();
    // Fixed, generic start vector so the iteration is deterministic.
    let mut v = DVector::<Complex64>::from_fn(a.ncols(), |i, _| {
        let x = (i as f64 + 1.0) * 0.618_033_988_749_895;
        Complex64::new(1.0 + (x - x.floor()), 0.25 * (2.0 * x).sin())
    });
    v /= Complex64::new(v.norm(), 0.0);
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = a * &v;
        let sigma = w.norm();
        let u = &ah * &w;
        let un = u.norm();
        if un == 0.0 {
            return sigma;
        }
        v = u / Complex64::new(un, 0.0);
        if (sigma - estimate).abs() <= POWER_TOLERANCE * sigma.max(f64::MIN_POSITIVE) {
            return sigma;
        }
        estimate = sigma;
    }
    (a * &v).norm()
}

/// `‖P(ρ(w) − ρ(normalize(w)))P‖`, with the interior margin widened by the
/// word length so that no intermediate state reaches the cutoff.
pub fn normal_form_residual(alg: &Algebra, w: &Word, t: &TruncationSpec) -> f64 {
    let q = alg.q();
    let diff = represent_word(w, t, q) - represent(&alg.normalize(w), t, q);
    interior_norm(&diff, t, t.interior_margin() + w.len())
}

/// `count` words with uniform letters and lengths in `1..=max_len`.
pub fn random_words(seed: u64, count: usize, max_len: usize) -> Vec<Word> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Word::new((0..len).map(|_| Letter::ALL[rng.gen_range(0..4)]).collect())
        })
        .collect()
}

/// One relation of the algebra written as free words, `Σ words = 0`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: &'static str,
    pub words: Vec<Word>,
    pub degree: usize,
}

/// The five defining relations, unreduced.
pub fn relations(q: QParam) -> Vec<Relation> {
    use Letter::*;
    let q = q.value();
    let w = |ls: &[Letter], c: f64| Word::with_coeff(ls.to_vec(), Complex64::new(c, 0.0));
    vec![
        Relation { name: "a'a + b'b - 1", words: vec![w(&[AlphaStar, Alpha], 1.0), w(&[BetaStar, Beta], 1.0), w(&[], -1.0)], degree: 2 },
        Relation { name: "aa' + q^2 bb' - 1", words: vec![w(&[Alpha, AlphaStar], 1.0), w(&[Beta, BetaStar], q * q), w(&[], -1.0)], degree: 2 },
        Relation { name: "ab - q ba", words: vec![w(&[Alpha, Beta], 1.0), w(&[Beta, Alpha], -q)], degree: 2 },
        Relation { name: "ab' - q b'a", words: vec![w(&[Alpha, BetaStar], 1.0), w(&[BetaStar, Alpha], -q)], degree: 2 },
        Relation { name: "b'b - bb'", words: vec![w(&[BetaStar, Beta], 1.0), w(&[Beta, BetaStar], -1.0)], degree: 2 },
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationResidual {
    pub name: &'static str,
    pub margin: usize,
    pub residual: f64,
}

/// `‖P ρ(r) P‖` for each relation, with the margin raised by the relation's
/// degree.
pub fn relation_residuals(t: &TruncationSpec, q: QParam) -> Result<Vec<RelationResidual>> {
    if t.interior_margin < 1 {
        return Err(Error::InvalidTruncation("relation residuals need margin >= 1".into()));
    }
    Ok(relations(q)
        .into_iter()
        .map(|r| {
            let margin = t.interior_margin + r.degree;
            let m = represent_words(&r.words, t, q);
            RelationResidual { name: r.name, margin, residual: interior_norm(&m, t, margin) }
        })
        .collect())
}

/// Row-major JSON dump: `{"dim": n, "re": [...], "im": [...]}`.
pub fn dump_json(m: &OperatorMatrix) -> serde_json::Value {
    let mut re = Vec::with_capacity(m.len());
    let mut im = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            re.push(m[(i, j)].re);
            im.push(m[(i, j)].im);
        }
    }
    serde_json::json!({ "dim": m.nrows(), "re": re, "im": im })
}

/// Binary dump: 16-byte header (`dim` as u32 LE, 12 reserved zero bytes),
/// then row-major complex128 entries as `(re, im)` f64 LE pairs.
pub fn dump_binary(m: &OperatorMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * m.len());
    out.extend_from_slice(&(m.nrows() as u32).to_le_bytes());
    out.extend_from_slice(&[0u8; 12]);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            out.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
    out
}

pub fn load_binary(bytes: &[u8]) -> Result<OperatorMatrix> {
    if bytes.len() < 16 {
        return Err(Error::InvalidTruncation("dump shorter than its header".into()));
    }
    let dim = u32::from_le_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
    if bytes.len() != 16 + 16 * dim * dim {
        return Err(Error::InvalidTruncation(format!("dump size does not match dim {dim}")));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[16 + 8 * k..24 + 8 * k].try_into().expect("8 bytes"));
    Ok(OperatorMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        Complex64::new(f(k), f(k + 1))
    }))
}

/// ρ of a canonical monomial.
pub fn represent_monomial(m: CanonicalMonomial, t: &TruncationSpec, q: QParam) -> OperatorMatrix {
    represent(&NcPoly::monomial(m), t, q)
}
