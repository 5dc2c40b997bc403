//! Oriented Dirac operator on the GNS space, the Z₂ covering
//! `C(SO_q(3)) ⊂ C(SU_q(2))`, and the unoriented restriction.
//!
//! `D̃ e^(l)_jk = d(l, j) e^(l)_jk` with `d(l, j) = 2l+1` for `j ≠ l` and
//! `d(l, l) = −(2l+1)`. The Z₂ generator acts on the GNS space through the
//! algebra automorphism `g(α) = −α`, `g(β) = −β`, and on `e^(l)_jk` by
//! `(−1)^{2l}`. The unoriented Hilbert space is the integer-`l` span.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gns::{gns_inner, GnsBasis, HalfInt, Label};
use crate::ncpoly::{Algebra, CanonicalMonomial, Letter, NcPoly, Parity};

/// Largest degree accepted by [`certify_covering`].
pub const MAX_COVERING_DEGREE: u32 = 10;

/// Largest `l` accepted by [`check_parity`].
pub const MAX_PARITY_L2: i32 = 5;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Diagonal Dirac operator on labels with `l ≤ lmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiracSpec {
    pub lmax: HalfInt,
}

impl DiracSpec {
    pub fn new(lmax: HalfInt) -> Self {
        DiracSpec { lmax }
    }

    /// `d(l, j)`.
    pub fn eigenvalue(label: &Label) -> i64 {
        let v = label.l.twice() as i64 + 1;
        if label.j == label.l {
            -v
        } else {
            v
        }
    }

    /// `(−1)^{2l}`.
    pub fn parity(label: &Label) -> i64 {
        if label.l.is_integer() {
            1
        } else {
            -1
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        Label::all(self.lmax)
    }

    /// Integer-`l` labels, the unoriented Hilbert space.
    pub fn even_labels(&self) -> Vec<Label> {
        self.labels().into_iter().filter(|l| l.l.is_integer()).collect()
    }

    pub fn matrix(&self, labels: &[Label]) -> DMatrix<Complex64> {
        diag(labels, |l| Self::eigenvalue(l) as f64)
    }

    /// Diagonal matrix of the Z₂ generator on the GNS space.
    pub fn parity_matrix(&self, labels: &[Label]) -> DMatrix<Complex64> {
        diag(labels, |l| Self::parity(l) as f64)
    }

    /// `(eigenvalue, multiplicity)` over all labels, ascending in eigenvalue.
    pub fn spectrum(&self) -> Vec<SpectrumEntry> {
        tally(self.labels().iter())
    }

    /// Spectrum of `D̃` restricted to the integer-`l` span.
    pub fn unoriented_spectrum(&self) -> Vec<SpectrumEntry> {
        tally(self.even_labels().iter())
    }

    /// One row per `(l, j-class, sector)` for tabular output.
    pub fn spectrum_table(&self) -> Vec<SpectrumRow> {
        let mut rows = Vec::new();
        for sector in [Sector::Oriented, Sector::Unoriented] {
            for l2 in 0..=self.lmax.twice() {
                if sector == Sector::Unoriented && l2 % 2 != 0 {
                    continue;
                }
                let v = l2 as i64 + 1;
                rows.push(SpectrumRow { l2, j_class: JClass::Top, eig: -v, mult: v as usize, sector });
                if l2 > 0 {
                    rows.push(SpectrumRow { l2, j_class: JClass::Lower, eig: v, mult: (v * (v - 1)) as usize, sector });
                }
            }
        }
        rows
    }
}

fn diag(labels: &[Label], f: impl Fn(&Label) -> f64) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(labels.len(), labels.iter().map(|l| Complex64::new(f(l), 0.0))))
}

fn tally<'a>(labels: impl Iterator<Item = &'a Label>) -> Vec<SpectrumEntry> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(DiracSpec::eigenvalue(l)).or_insert(0) += 1;
    }
    counts.into_iter().map(|(eig, mult)| SpectrumEntry { eig, mult }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eig: i64,
    pub mult: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Oriented,
    Unoriented,
}

/// Whether `j = l` (negative eigenvalue) or `j < l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JClass {
    #[serde(rename = "j=l")]
    Top,
    #[serde(rename = "j<l")]
    Lower,
}

impl JClass {
    pub fn as_str(self) -> &'static str {
        match self {
            JClass::Top => "j=l",
            JClass::Lower => "j<l",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub l2: i32,
    pub j_class: JClass,
    pub eig: i64,
    pub mult: usize,
    pub sector: Sector,
}

/// Scales a coefficient vector indexed like `labels` by `d(l, j)`.
pub fn dirac_apply(v: &[Complex64], labels: &[Label]) -> Vec<Complex64> {
    v.iter().zip(labels).map(|(c, l)| c * DiracSpec::eigenvalue(l) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityEntry {
    pub l2: i32,
    pub j2: i32,
    pub k2: i32,
    pub expected: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub entries: Vec<ParityEntry>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// Entries grouped by `(l, j)`: `(l2, j2, label count, all passed)`.
    pub fn by_l_and_j(&self) -> Vec<(i32, i32, usize, bool)> {
        let mut groups: BTreeMap<(i32, i32), (usize, bool)> = BTreeMap::new();
        for e in &self.entries {
            let g = groups.entry((e.l2, e.j2)).or_insert((0, true));
            g.0 += 1;
            g.1 &= e.pass;
        }
        groups.into_iter().map(|((l2, j2), (n, ok))| (l2, j2, n, ok)).collect()
    }
}

/// Checks `z2Act(e^(l)_jk) = (−1)^{2l} e^(l)_jk` coefficientwise, exactly.
pub fn check_parity(basis: &GnsBasis) -> Result<ParityReport> {
    if basis.lmax.twice() > MAX_PARITY_L2 {
        return Err(Error::InvalidLabel(format!("parity check limited to l ≤ 5/2, got {}", basis.lmax)));
    }
    let entries = basis
        .entries()
        .map(|(label, e)| {
            let expected = DiracSpec::parity(label);
            let pass = e.poly.z2_act() == e.poly.scale(Complex64::new(expected as f64, 0.0));
            ParityEntry { l2: label.l.twice(), j2: label.j.twice(), k2: label.k.twice(), expected, pass }
        })
        .collect();
    Ok(ParityReport { entries })
}

/// Matrix of left multiplication by `a` in the orthonormal basis. Columns are
/// the labels with `2l + deg(a) ≤ 2 lmax`, so every product stays inside the
/// span of the rows.
pub fn pi_matrix(alg: &Algebra, a: &NcPoly, basis: &GnsBasis) -> Result<(DMatrix<Complex64>, Vec<Label>, Vec<Label>)> {
    let deg = a.degree() as i32;
    let limit = basis.lmax.twice();
    if deg > limit {
        return Err(Error::DegreeGuard { degree: deg as u32, limit: format!("2·lmax = {limit}") });
    }
    let rows = basis.labels();
    let cols: Vec<Label> = rows.iter().copied().filter(|l| l.l.twice() + deg <= limit).collect();
    let mut by_sector: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, l) in rows.iter().enumerate() {
        by_sector.entry(l.sector()).or_default().push(i);
    }
    let mut m = DMatrix::from_element(rows.len(), cols.len(), ZERO);
    for (c, label) in cols.iter().enumerate() {
        let e = &basis.get(label).expect("column label in basis").poly;
        let p = alg.mul(a, e);
        let charges: BTreeSet<(i32, i32)> = p.terms().map(|(m, _)| m.charge()).collect();
        for ch in charges {
            for &r in by_sector.get(&ch).into_iter().flatten() {
                m[(r, c)] = gns_inner(alg, &basis.get(&rows[r]).expect("row label").poly, &p);
            }
        }
    }
    Ok((m, rows, cols))
}

/// `[D̃, π(a)]` restricted to the guarded columns.
pub fn commutator_matrix(alg: &Algebra, a: &NcPoly, basis: &GnsBasis) -> Result<DMatrix<Complex64>> {
    let (pi, rows, cols) = pi_matrix(alg, a, basis)?;
    let mut out = pi;
    for (r, rl) in rows.iter().enumerate() {
        let dr = DiracSpec::eigenvalue(rl) as f64;
        for (c, cl) in cols.iter().enumerate() {
            out[(r, c)] *= dr - DiracSpec::eigenvalue(cl) as f64;
        }
    }
    Ok(out)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `‖[D̃, π(a)]‖` for each requested `lmax`.
pub fn commutator_norm_scan(alg: &Algebra, a: &NcPoly, lmax2s: &[i32]) -> Result<Vec<(i32, f64)>> {
    let top = lmax2s.iter().copied().max().unwrap_or(0);
    let full = crate::gns::gram_schmidt_basis(alg, HalfInt::from_twice(top))?;
    lmax2s
        .iter()
        .map(|&l2| {
            let basis = full.truncated(HalfInt::from_twice(l2));
            Ok((l2, spectral_norm(&commutator_matrix(alg, a, &basis)?)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummabilityPoint {
    pub l2: i32,
    /// `(2l+1)² · (2l+1)^{−s}`
    pub increment: f64,
    pub partial: f64,
}

/// Partial sums of `Tr |D̃|^{−s}` over increasing `l`.
pub fn summability_scan(s: f64, lmax: HalfInt) -> Result<Vec<SummabilityPoint>> {
    if !(s > 0.0) {
        return Err(Error::InvalidModel(format!("summability exponent must be positive, got {s}")));
    }
    let mut partial = 0.0;
    Ok((0..=lmax.twice())
        .map(|l2| {
            let v = (l2 + 1) as f64;
            let increment = v * v * v.powf(-s);
            partial += increment;
            SummabilityPoint { l2, increment, partial }
        })
        .collect())
}

/// `⟨a, b⟩ = a*b + g(a*b)`, valued in the fixed-point algebra.
pub fn hilbert_module_product(alg: &Algebra, a: &NcPoly, b: &NcPoly) -> NcPoly {
    let p = alg.mul(&alg.adjoint(a), b);
    &p + &p.z2_act()
}

/// Odd monomial with its verified decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub monomial: CanonicalMonomial,
    pub parts: Vec<(NcPoly, Letter)>,
}

/// Finite generation of `C(SU_q(2))` over `C(SO_q(3))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringCert {
    pub generators: Vec<Letter>,
    pub decompositions: Vec<Decomposition>,
    /// Even monomials, which lie in the base algebra.
    pub even_count: usize,
    pub max_degree_checked: u32,
}

impl CoveringCert {
    pub fn odd_count(&self) -> usize {
        self.decompositions.len()
    }
}

/// Decomposes every odd canonical monomial of degree `≤ max_degree` as
/// `Σ (even)·generator` and re-verifies each identity by normalization.
pub fn certify_covering(alg: &Algebra, max_degree: u32) -> Result<CoveringCert> {
    if max_degree > MAX_COVERING_DEGREE {
        return Err(Error::DegreeGuard { degree: max_degree, limit: format!("{MAX_COVERING_DEGREE}") });
    }
    let mut decompositions = Vec::new();
    let mut even_count = 0;
    for m in CanonicalMonomial::up_to_degree(max_degree) {
        if m.parity() == Parity::Even {
            even_count += 1;
            continue;
        }
        let x = NcPoly::monomial(m);
        let parts = alg.module_decompose(&x)?;
        let ok = parts.iter().all(|(f, _)| f.parity() == Some(Parity::Even)) && alg.reassemble(&parts) == x;
        if !ok {
            return Err(Error::CoveringFailed(m.to_string()));
        }
        decompositions.push(Decomposition { monomial: m, parts });
    }
    log::debug!("covering certified: {} odd monomials up to degree {max_degree}", decompositions.len());
    Ok(CoveringCert { generators: Letter::ALL.to_vec(), decompositions, even_count, max_degree_checked: max_degree })
}

/// Random polynomial with unit-box complex coefficients on the canonical
/// monomials of degree `≤ max_degree` with the given parity.
pub fn random_poly(rng: &mut StdRng, max_degree: u32, parity: Option<Parity>, terms: usize) -> NcPoly {
    let pool: Vec<CanonicalMonomial> = CanonicalMonomial::up_to_degree(max_degree)
        .into_iter()
        .filter(|m| parity.map_or(true, |p| m.parity() == p))
        .collect();
    let mut out = NcPoly::zero();
    for _ in 0..terms {
        let m = pool[rng.gen_range(0..pool.len())];
        out.add_term(m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub tolerance: f64,
    pub value: f64,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64, detail: String) -> Check {
        Check { name: name.to_string(), pass: value <= tolerance, detail, tolerance, value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleReport {
    pub checks: Vec<Check>,
    pub spectrum: Vec<SpectrumEntry>,
}

impl TripleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Number of random even elements tested for invariance of the even subspace.
pub const EVEN_ACTION_SAMPLES: usize = 20;

/// Builds the unoriented triple at `lmax` and runs the condition checks.
pub fn assemble_unoriented_triple(alg: &Algebra, lmax: HalfInt, seed: u64) -> Result<TripleReport> {
    let basis = crate::gns::gram_schmidt_basis(alg, lmax)?;
    let spec = DiracSpec::new(lmax);
    let labels = basis.labels();
    let mut checks = Vec::new();

    let parity = check_parity(&basis.truncated(HalfInt::from_twice(lmax.twice().min(MAX_PARITY_L2))))?;
    let failures = parity.entries.iter().filter(|e| !e.pass).count();
    checks.push(Check::new(
        "parity",
        failures as f64,
        0.0,
        format!("z2Act(e) = (-1)^(2l) e on {} labels", parity.entries.len()),
    ));

    let d = spec.matrix(&labels);
    let g = spec.parity_matrix(&labels);
    let comm = (&g * &d - &d * &g).iter().map(|c| c.norm()).fold(0.0, f64::max);
    checks.push(Check::new("g_commutes_with_D", comm, 0.0, "max |GD - DG| entry".into()));

    let mut rng = StdRng::seed_from_u64(seed);
    let mut leak: f64 = 0.0;
    for _ in 0..EVEN_ACTION_SAMPLES {
        let a = random_poly(&mut rng, 2.min(lmax.twice() as u32), Some(Parity::Even), 4);
        let (pi, rows, cols) = pi_matrix(alg, &a, &basis)?;
        for (c, _) in cols.iter().enumerate().filter(|(_, l)| l.l.is_integer()) {
            for (r, _) in rows.iter().enumerate().filter(|(_, l)| !l.l.is_integer()) {
                leak = leak.max(pi[(r, c)].norm());
            }
        }
    }
    checks.push(Check::new(
        "even_subspace_invariant",
        leak,
        0.0,
        format!("max odd-row entry of pi(a) on even columns, {EVEN_ACTION_SAMPLES} random even a (seed {seed})"),
    ));

    let mut mismatch = 0usize;
    for _ in 0..EVEN_ACTION_SAMPLES {
        let x = random_poly(&mut rng, 4, None, 6);
        let even = x.z2_project(Parity::Even);
        let fixed = even.z2_act() == even;
        let odd = &x - &even;
        let odd_moved = odd.is_zero() || odd.z2_act() == -&odd;
        if !(fixed && odd_moved) {
            mismatch += 1;
        }
    }
    checks.push(Check::new(
        "fixed_points_are_even",
        mismatch as f64,
        0.0,
        "even projection is g-fixed and the odd remainder is g-negated".into(),
    ));

    let unoriented = spec.unoriented_spectrum();
    let bad = unoriented.iter().filter(|e| e.eig % 2 == 0).count();
    checks.push(Check::new(
        "restricted_spectrum_odd",
        bad as f64,
        0.0,
        format!("{} eigenvalues on the integer-l span", unoriented.len()),
    ));

    Ok(TripleReport { checks, spectrum: unoriented })
}
