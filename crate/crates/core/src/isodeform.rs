//! θ-deformation calculus on a finite clock-and-shift model.
//!
//! The Hilbert space is `ℂᴺ ⊗ ℂᴺ` with `p₁ = diag(0..N) ⊗ 1`, `p₂ = 1 ⊗ diag(0..N)`
//! and the torus acting by `α_s(T) = U(s) T U(s)⁻¹`, `U(s) = exp(i(s₁p₁ + s₂p₂))`,
//! at the grid points `s ∈ (2π/N)ℤ²`. An operator of bidegree `(n₁, n₂)`
//! satisfies `α_s(T) = exp(i(s₁n₁ + s₂n₂)) T`; bidegrees are taken mod `N`.
//!
//! With `λ = exp(2πiθ)`:
//!
//! ```text
//!   l(T) = Σ T̂_{n₁n₂} λ^{n₂p₁}      x * y   = λ^{n′₁n₂} xy
//!   r(T) = Σ T̂_{n₁n₂} λ^{n₁p₂}      x *ᵣ y  = λ^{n₁n′₂} xy
//! ```
//!
//! The identities `l(x)l(y) = l(x*y)` and its companions need `λᴺ = 1`, since
//! `p₁` wraps around in the cyclic model. Exact mode therefore takes
//! `θ = p/d` with `d | N`, and all λ-powers come from a table of roots of unity.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triple::Check;

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Magnitude, relative to the largest entry, below which DFT output is zero.
pub const DFT_PRUNE: f64 = 1e-13;

/// Deformation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Theta {
    /// `p/d`, reduced, `0 ≤ p < d`.
    Rational { p: i64, d: i64 },
    Real(f64),
}

impl Theta {
    pub fn rational(p: i64, d: i64) -> Result<Theta> {
        if d <= 0 {
            return Err(Error::InvalidTheta(format!("{p}/{d}: denominator must be positive")));
        }
        let g = gcd(p.rem_euclid(d), d);
        Ok(Theta::Rational { p: p.rem_euclid(d) / g, d: d / g })
    }

    pub fn value(&self) -> f64 {
        match *self {
            Theta::Rational { p, d } => p as f64 / d as f64,
            Theta::Real(t) => t,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value() == 0.0
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theta> {
        let s = s.trim();
        if let Some((p, d)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::InvalidTheta(s.to_string()))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::InvalidTheta(s.to_string()))?;
            Theta::rational(p, d)
        } else {
            let t: f64 = s.parse().map_err(|_| Error::InvalidTheta(s.to_string()))?;
            if !t.is_finite() {
                return Err(Error::InvalidTheta(s.to_string()));
            }
            Ok(Theta::Real(t))
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Rational { p, d } => write!(f, "{p}/{d}"),
            Theta::Real(t) => write!(f, "{t}"),
        }
    }
}

/// Bidegree, reduced mod `N`.
pub type Bidegree = (usize, usize);

#[derive(Debug, Clone)]
pub struct TorusModel {
    n: usize,
    theta: Theta,
    /// `λ^m` for `m mod d` in exact mode.
    lambda_table: Option<Vec<Complex64>>,
    /// `exp(2πi m/N)`.
    grid_roots: Vec<Complex64>,
}

fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|m| {
            // exact values on the axes
            match (4 * m) % (4 * d) {
                0 => ONE,
                x if x == d => Complex64::new(0.0, 1.0),
                x if x == 2 * d => Complex64::new(-1.0, 0.0),
                x if x == 3 * d => Complex64::new(0.0, -1.0),
                _ => Complex64::from_polar(1.0, TAU * m as f64 / d as f64),
            }
        })
        .collect()
}

impl TorusModel {
    pub fn new(n: usize, theta: Theta) -> Result<TorusModel> {
        if n < 2 {
            return Err(Error::InvalidModel(format!("N must be at least 2, got {n}")));
        }
        let lambda_table = match theta {
            Theta::Rational { d, .. } => {
                if n as i64 % d != 0 {
                    return Err(Error::InvalidTheta(format!("{theta}: denominator must divide N = {n}")));
                }
                Some(roots_of_unity(d as usize))
            }
            Theta::Real(_) => None,
        };
        Ok(TorusModel { n, theta, lambda_table, grid_roots: roots_of_unity(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn is_exact(&self) -> bool {
        self.lambda_table.is_some()
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// Basis index of `e_{k₁} ⊗ e_{k₂}`.
    pub fn index(&self, k1: usize, k2: usize) -> usize {
        k1 * self.n + k2
    }

    /// `(k₁, k₂)` for a basis index.
    pub fn coords(&self, i: usize) -> (usize, usize) {
        (i / self.n, i % self.n)
    }

    /// `λ^m`.
    pub fn lambda_pow(&self, m: i64) -> Complex64 {
        match (&self.lambda_table, self.theta) {
            (Some(t), Theta::Rational { p, d }) => t[(p * m).rem_euclid(d) as usize],
            _ => Complex64::from_polar(1.0, TAU * self.theta.value() * m as f64),
        }
    }

    /// Diagonal of `U(s)` at the grid point `s = 2π (m₁, m₂)/N`.
    pub fn torus_phases(&self, m1: usize, m2: usize) -> Vec<Complex64> {
        (0..self.dim())
            .map(|i| {
                let (k1, k2) = self.coords(i);
                self.grid_roots[(m1 * k1 + m2 * k2) % self.n]
            })
            .collect()
    }

    /// `α_s(T)` at the grid point `(m₁, m₂)`.
    pub fn torus_act(&self, t: &Matrix, m1: usize, m2: usize) -> Matrix {
        let ph = self.torus_phases(m1, m2);
        Matrix::from_fn(t.nrows(), t.ncols(), |a, b| ph[a] * t[(a, b)] * ph[b].conj())
    }

    /// Diagonal operator `f(k₁, k₂)`.
    pub fn diagonal(&self, f: impl Fn(usize, usize) -> Complex64) -> Matrix {
        let d = nalgebra::DVector::from_fn(self.dim(), |i, _| {
            let (k1, k2) = self.coords(i);
            f(k1, k2)
        });
        Matrix::from_diagonal(&d)
    }

    pub fn p1(&self) -> Matrix {
        self.diagonal(|k1, _| Complex64::new(k1 as f64, 0.0))
    }

    pub fn p2(&self) -> Matrix {
        self.diagonal(|_, k2| Complex64::new(k2 as f64, 0.0))
    }

    /// Operator `e_{k₁,k₂} ↦ e_{k₁+a, k₂+b}`, of bidegree `(a, b)`.
    pub fn translation(&self, a: usize, b: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            let (k1, k2) = self.coords(i);
            m[(self.index((k1 + a) % self.n, (k2 + b) % self.n), i)] = ONE;
        }
        m
    }

    /// `shift = S ⊗ 1`, bidegree `(1, 0)`.
    pub fn shift(&self) -> Matrix {
        self.translation(1, 0)
    }

    /// `clock = 1 ⊗ S`, bidegree `(0, 1)`.
    pub fn clock(&self) -> Matrix {
        self.translation(0, 1)
    }

    /// The fixed generator set used by the exhaustive scans.
    pub fn generators(&self) -> Vec<(String, BigradedOp)> {
        let n = self.n;
        let w = |k: usize| self.grid_roots[k % n];
        let ph1 = self.diagonal(|k1, _| w(k1));
        let ph2 = self.diagonal(|_, k2| w(k2));
        let list: Vec<(&str, Bidegree, Matrix)> = vec![
            ("id", (0, 0), Matrix::identity(self.dim(), self.dim())),
            ("shift", (1, 0), self.shift()),
            ("shift_inv", (n - 1, 0), self.translation(n - 1, 0)),
            ("clock", (0, 1), self.clock()),
            ("clock_inv", (0, n - 1), self.translation(0, n - 1)),
            ("phase1", (0, 0), ph1.clone()),
            ("phase2", (0, 0), ph2.clone()),
            ("shift_clock", (1, 1), self.translation(1, 1)),
            ("shift_clock_inv", (1, n - 1), self.translation(1, n - 1)),
            ("shift_phase2", (1, 0), self.shift() * &ph2),
            ("clock_phase1", (0, 1), self.clock() * &ph1),
        ];
        list.into_iter().map(|(name, deg, m)| (name.to_string(), BigradedOp::homogeneous(deg, m))).collect()
    }
}

/// `T = Σ T̂_{n₁n₂}` with each component homogeneous.
#[derive(Debug, Clone, PartialEq)]
pub struct BigradedOp {
    pub components: BTreeMap<Bidegree, Matrix>,
}

impl BigradedOp {
    pub fn homogeneous(deg: Bidegree, m: Matrix) -> BigradedOp {
        BigradedOp { components: BTreeMap::from([(deg, m)]) }
    }

    pub fn zero() -> BigradedOp {
        BigradedOp { components: BTreeMap::new() }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn add_component(&mut self, deg: Bidegree, m: Matrix) {
        match self.components.get_mut(&deg) {
            Some(c) => *c += m,
            None => {
                self.components.insert(deg, m);
            }
        }
    }

    /// `Σ T̂`.
    pub fn reconstruct(&self, dim: usize) -> Matrix {
        self.components.values().fold(Matrix::zeros(dim, dim), |acc, c| acc + c)
    }

    /// Componentwise map that keeps the bidegree.
    pub fn map(&self, f: impl Fn(Bidegree, &Matrix) -> Matrix) -> BigradedOp {
        BigradedOp { components: self.components.iter().map(|(d, m)| (*d, f(*d, m))).collect() }
    }
}

/// Harmonic analysis of `s ↦ α_s(T)` over the `N × N` torus grid.
pub fn decompose(t: &Matrix, model: &TorusModel) -> BigradedOp {
    let n = model.n;
    let dim = model.dim();
    let samples: Vec<Matrix> = (0..n * n).map(|g| model.torus_act(t, g / n, g % n)).collect();
    let scale = t.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let inv = 1.0 / (n * n) as f64;
    let mut components: BTreeMap<Bidegree, Matrix> = BTreeMap::new();
    let mut rows = vec![ZERO; n * n];
    let mut half = vec![ZERO; n * n];
    for a in 0..dim {
        for b in 0..dim {
            for (g, s) in samples.iter().enumerate() {
                rows[g] = s[(a, b)];
            }
            // separable DFT: over m₂ first, then m₁
            for m1 in 0..n {
                for n2 in 0..n {
                    half[m1 * n + n2] =
                        (0..n).map(|m2| rows[m1 * n + m2] * model.grid_roots[(n2 * m2) % n].conj()).sum();
                }
            }
            for n1 in 0..n {
                for n2 in 0..n {
                    let c: Complex64 = (0..n).map(|m1| half[m1 * n + n2] * model.grid_roots[(n1 * m1) % n].conj()).sum::<Complex64>() * inv;
                    if c.norm() > DFT_PRUNE * scale {
                        components.entry((n1, n2)).or_insert_with(|| Matrix::zeros(dim, dim))[(a, b)] = c;
                    }
                }
            }
        }
    }
    BigradedOp { components }
}

/// Largest deviation from `α_s(C) = exp(i s·n) C` over all components and
/// grid points.
pub fn homogeneity_residual(op: &BigradedOp, model: &TorusModel) -> f64 {
    let n = model.n;
    let mut worst: f64 = 0.0;
    for ((n1, n2), c) in &op.components {
        for m1 in 0..n {
            for m2 in 0..n {
                let phase = model.grid_roots[(m1 * n1 + m2 * n2) % n];
                let d = model.torus_act(c, m1, m2) - c * phase;
                worst = worst.max(max_abs(&d));
            }
        }
    }
    worst
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn scale_columns(m: &Matrix, f: impl Fn(usize) -> Complex64) -> Matrix {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= f(j);
    }
    out
}

/// `l(T) = Σ T̂_{n₁n₂} λ^{n₂p₁}`.
pub fn left_twist(t: &BigradedOp, model: &TorusModel) -> Matrix {
    let dim = model.dim();
    t.components.iter().fold(Matrix::zeros(dim, dim), |acc, ((_, n2), c)| {
        acc + scale_columns(c, |j| model.lambda_pow((*n2 * model.coords(j).0) as i64))
    })
}

/// `r(T) = Σ T̂_{n₁n₂} λ^{n₁p₂}`.
pub fn right_twist(t: &BigradedOp, model: &TorusModel) -> Matrix {
    let dim = model.dim();
    t.components.iter().fold(Matrix::zeros(dim, dim), |acc, ((n1, _), c)| {
        acc + scale_columns(c, |j| model.lambda_pow((*n1 * model.coords(j).1) as i64))
    })
}

fn graded_product(x: &BigradedOp, y: &BigradedOp, model: &TorusModel, phase: impl Fn(Bidegree, Bidegree) -> i64) -> BigradedOp {
    let n = model.n;
    let mut out = BigradedOp::zero();
    for (dx, cx) in &x.components {
        for (dy, cy) in &y.components {
            let deg = ((dx.0 + dy.0) % n, (dx.1 + dy.1) % n);
            out.add_component(deg, (cx * cy) * model.lambda_pow(phase(*dx, *dy)));
        }
    }
    out
}

/// `x * y = λ^{n′₁n₂} xy`, extended bilinearly.
pub fn star_product(x: &BigradedOp, y: &BigradedOp, model: &TorusModel) -> BigradedOp {
    graded_product(x, y, model, |dx, dy| (dy.0 * dx.1) as i64)
}

/// `x *ᵣ y = λ^{n₁n′₂} xy`.
pub fn right_star_product(x: &BigradedOp, y: &BigradedOp, model: &TorusModel) -> BigradedOp {
    graded_product(x, y, model, |dx, dy| (dx.0 * dy.1) as i64)
}

/// Untwisted product with the same bidegree bookkeeping.
pub fn plain_product(x: &BigradedOp, y: &BigradedOp, model: &TorusModel) -> BigradedOp {
    graded_product(x, y, model, |_, _| 0)
}

/// `max |l(x)r(y) − r(y)l(x) − (xy − yx) λ^{n′₁n₂} λ^{n₂p₁ + n′₁p₂}|`.
pub fn verify_lemma_a(x: &BigradedOp, y: &BigradedOp, model: &TorusModel) -> f64 {
    let (lx, ry) = (left_twist(x, model), right_twist(y, model));
    let lhs = &lx * &ry - &ry * &lx;
    let dim = model.dim();
    let mut rhs = Matrix::zeros(dim, dim);
    for ((_, n2), cx) in &x.components {
        for ((n1p, _), cy) in &y.components {
            let comm = cx * cy - cy * cx;
            let c = model.lambda_pow((n1p * n2) as i64);
            rhs += scale_columns(&comm, |j| {
                let (k1, k2) = model.coords(j);
                c * model.lambda_pow((n2 * k1 + n1p * k2) as i64)
            });
        }
    }
    max_abs(&(lhs - rhs))
}

/// Residuals of `l(x)l(y) = l(x*y)` and `r(x)r(y) = r(x *ᵣ y)`.
pub fn verify_lemma_b(x: &BigradedOp, y: &BigradedOp, model: &TorusModel) -> (f64, f64) {
    let left = left_twist(x, model) * left_twist(y, model) - left_twist(&star_product(x, y, model), model);
    let right = right_twist(x, model) * right_twist(y, model) - right_twist(&right_star_product(x, y, model), model);
    (max_abs(&left), max_abs(&right))
}

/// Group homomorphism `ℤ_N² → ℤ₂`, given on bidegrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    /// `n₁ + n₂ mod 2`
    Total,
    /// `n₁ mod 2`
    First,
    /// `n₂ mod 2`
    Second,
    /// Explicit table indexed `[n₁][n₂]`.
    Table(Vec<Vec<u8>>),
}

impl Grading {
    pub fn parity(&self, d: Bidegree) -> u8 {
        match self {
            Grading::Total => ((d.0 + d.1) % 2) as u8,
            Grading::First => (d.0 % 2) as u8,
            Grading::Second => (d.1 % 2) as u8,
            Grading::Table(t) => t[d.0][d.1] % 2,
        }
    }

    /// Exhaustive homomorphism check on `ℤ_N²`.
    pub fn check(&self, n: usize) -> Result<()> {
        if let Grading::Table(t) = self {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(Error::GradingNotHomomorphic { n, detail: "table is not N × N".into() });
            }
        }
        for a in 0..n * n {
            for b in 0..n * n {
                let (x, y) = ((a / n, a % n), (b / n, b % n));
                let sum = ((x.0 + y.0) % n, (x.1 + y.1) % n);
                if self.parity(sum) != (self.parity(x) + self.parity(y)) % 2 {
                    return Err(Error::GradingNotHomomorphic { n, detail: format!("fails at {x:?} + {y:?}") });
                }
            }
        }
        Ok(())
    }

    /// `G = (−1)^{χ(p₁, p₂)}` on the Hilbert space.
    pub fn operator(&self, model: &TorusModel) -> Matrix {
        model.diagonal(|k1, k2| Complex64::new(if self.parity((k1, k2)) == 0 { 1.0 } else { -1.0 }, 0.0))
    }
}

/// Keeps the components of even grading.
pub fn z2_twist_project(t: &BigradedOp, grading: &Grading, model: &TorusModel) -> Result<BigradedOp> {
    grading.check(model.n)?;
    Ok(BigradedOp {
        components: t.components.iter().filter(|(d, _)| grading.parity(**d) == 0).map(|(d, m)| (*d, m.clone())).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaResidual {
    pub lemma: String,
    pub x: String,
    pub y: String,
    pub residual: f64,
}

/// Lemma residuals over all ordered pairs of the generator set.
pub fn lemma_scan(model: &TorusModel) -> Vec<LemmaResidual> {
    let gens = model.generators();
    let mut out = Vec::new();
    for (xn, x) in &gens {
        for (yn, y) in &gens {
            let (b_left, b_right) = verify_lemma_b(x, y, model);
            for (lemma, residual) in [("a", verify_lemma_a(x, y, model)), ("b", b_left), ("b_right", b_right)] {
                out.push(LemmaResidual { lemma: lemma.into(), x: xn.clone(), y: yn.clone(), residual });
            }
        }
    }
    out
}

/// Largest `max |x*(y*z) − (x*y)*z|` over all generator triples.
pub fn associativity_residual(model: &TorusModel) -> f64 {
    let gens: Vec<BigradedOp> = model.generators().into_iter().map(|(_, g)| g).collect();
    let dim = model.dim();
    let mut worst: f64 = 0.0;
    for x in &gens {
        for y in &gens {
            let xy = star_product(x, y, model);
            for z in &gens {
                let lhs = star_product(x, &star_product(y, z, model), model);
                let rhs = star_product(&xy, z, model);
                let zero = Matrix::zeros(dim, dim);
                let degrees: std::collections::BTreeSet<&Bidegree> = lhs.components.keys().chain(rhs.components.keys()).collect();
                for d in degrees {
                    let l = lhs.components.get(d).unwrap_or(&zero);
                    let r = rhs.components.get(d).unwrap_or(&zero);
                    worst = worst.max(max_abs(&(l - r)));
                }
            }
        }
    }
    worst
}

/// `max |[D, l(a)] − l([D, a])|` for one element.
pub fn twisted_commutator_residual(d: &Matrix, a: &BigradedOp, model: &TorusModel) -> f64 {
    let la = left_twist(a, model);
    let da = a.map(|_, c| d * c - c * d);
    max_abs(&((d * &la - &la * d) - left_twist(&da, model)))
}

/// Runs the twisted-triple checks for a torus-invariant `D` and a grading.
pub fn twisted_triple_check(model: &TorusModel, d: &Matrix, grading: &Grading) -> Result<Vec<Check>> {
    grading.check(model.n)?;
    let dd = decompose(d, model);
    if dd.components.keys().any(|k| *k != (0, 0)) {
        return Err(Error::InvalidModel("D is not torus invariant".into()));
    }
    let gens = model.generators();
    let mut checks = Vec::new();

    let comm = gens.iter().map(|(_, a)| twisted_commutator_residual(d, a, model)).fold(0.0, f64::max);
    checks.push(Check {
        name: "dirac_twist_commutes".into(),
        pass: comm <= 1e-13,
        detail: format!("max |[D, l(a)] - l([D, a])| over {} generators", gens.len()),
        tolerance: 1e-13,
        value: comm,
    });

    let g = grading.operator(model);
    let gd = max_abs(&(&g * d - d * &g));
    checks.push(Check { name: "g_commutes_with_D".into(), pass: gd == 0.0, detail: "max |GD - DG|".into(), tolerance: 0.0, value: gd });

    let even: Vec<BigradedOp> = gens.iter().map(|(_, a)| z2_twist_project(a, grading, model)).collect::<Result<_>>()?;
    let mut odd_parts: usize = 0;
    for x in &even {
        for y in &even {
            let p = star_product(x, y, model);
            odd_parts += p.components.keys().filter(|k| grading.parity(**k) != 0).count();
        }
    }
    checks.push(Check {
        name: "even_star_closure".into(),
        pass: odd_parts == 0,
        detail: "odd components in star products of even-projected generators".into(),
        tolerance: 0.0,
        value: odd_parts as f64,
    });

    let mut leak: f64 = 0.0;
    let even_space: Vec<bool> = (0..model.dim()).map(|i| grading.parity(model.coords(i)) == 0).collect();
    for x in &even {
        let lx = left_twist(x, model);
        for (r, re) in even_space.iter().enumerate() {
            for (c, ce) in even_space.iter().enumerate() {
                if *ce && !*re {
                    leak = leak.max(lx[(r, c)].norm());
                }
            }
        }
    }
    checks.push(Check {
        name: "even_subspace_invariant".into(),
        pass: leak == 0.0,
        detail: "max odd-row entry of l(a) on even columns, a even-projected".into(),
        tolerance: 0.0,
        value: leak,
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, theta: &str) -> TorusModel {
        TorusModel::new(n, theta.parse().unwrap()).unwrap()
    }

    #[test]
    fn theta_parsing() {
        assert_eq!("1/4".parse::<Theta>().unwrap(), Theta::Rational { p: 1, d: 4 });
        assert_eq!("2/4".parse::<Theta>().unwrap(), Theta::Rational { p: 1, d: 2 });
        assert_eq!("-1/4".parse::<Theta>().unwrap(), Theta::Rational { p: 3, d: 4 });
        assert_eq!("0.3".parse::<Theta>().unwrap(), Theta::Real(0.3));
        assert!("1/0".parse::<Theta>().is_err());
        assert!("x".parse::<Theta>().is_err());
        assert!(TorusModel::new(4, "1/3".parse().unwrap()).is_err());
        assert!(TorusModel::new(1, Theta::Real(0.0)).is_err());
    }

    #[test]
    fn torus_action_examples() {
        let m = model(4, "1/4");
        let dim = m.dim();
        let u = m.torus_phases(0, 0);
        assert!(u.iter().all(|c| *c == ONE));
        let s = m.shift();
        for m1 in 0..4 {
            let got = m.torus_act(&s, m1, 3);
            assert!(max_abs(&(got - &s * m.grid_roots[m1])) < 1e-15);
        }
        let d = m.p1() + m.p2();
        assert_eq!(&d * m.p1() - m.p1() * &d, Matrix::zeros(dim, dim));
    }

    #[test]
    fn decompose_examples() {
        let m = model(4, "1/4");
        let id = decompose(&Matrix::identity(16, 16), &m);
        assert_eq!(id.components.keys().copied().collect::<Vec<_>>(), vec![(0, 0)]);
        let s = decompose(&m.shift(), &m);
        assert_eq!(s.components.keys().copied().collect::<Vec<_>>(), vec![(1, 0)]);
        assert!(max_abs(&(s.reconstruct(16) - m.shift())) < 1e-15);
    }

    #[test]
    fn decompose_random_matches_index_mask() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0);
        for n in [2, 3, 5] {
            let m = model(n, "0");
            let dim = m.dim();
            let t = Matrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let op = decompose(&t, &m);
            assert!(max_abs(&(op.reconstruct(dim) - &t)) < 1e-12);
            assert!(homogeneity_residual(&op, &m) < 1e-12);
            // oracle: entry (a, b) belongs to bidegree coords(a) − coords(b) mod N
            for a in 0..dim {
                for b in 0..dim {
                    let (a1, a2) = m.coords(a);
                    let (b1, b2) = m.coords(b);
                    let deg = ((a1 + n - b1) % n, (a2 + n - b2) % n);
                    assert!((op.components[&deg][(a, b)] - t[(a, b)]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        let m = model(4, "1/4");
        let s = BigradedOp::homogeneous((1, 0), m.shift());
        assert_eq!(left_twist(&s, &m), m.shift());
        let c = BigradedOp::homogeneous((0, 1), m.clock());
        let lc = left_twist(&c, &m);
        let lambda = Complex64::new(0.0, 1.0);
        for j in 0..16 {
            let (k1, _) = m.coords(j);
            for i in 0..16 {
                assert_eq!(lc[(i, j)], m.clock()[(i, j)] * lambda.powu(k1 as u32));
            }
        }
        let m0 = model(4, "0");
        assert_eq!(left_twist(&c, &m0), m.clock());
    }

    #[test]
    fn star_examples() {
        let m = model(4, "1/4");
        let x = BigradedOp::homogeneous((1, 0), m.shift());
        let y = BigradedOp::homogeneous((0, 1), m.clock());
        let xy = star_product(&x, &y, &m);
        assert_eq!(xy.components[&(1, 1)], m.shift() * m.clock());
        let yx = star_product(&y, &x, &m);
        assert_eq!(yx.components[&(1, 1)], m.clock() * m.shift() * Complex64::new(0.0, 1.0));
        let l = left_twist(&y, &m) * left_twist(&x, &m);
        assert!(max_abs(&(l - left_twist(&yx, &m))) < 1e-15);
    }

    #[test]
    fn lemma_examples() {
        let m = model(4, "1/4");
        let gens = m.generators();
        let find = |name: &str| gens.iter().find(|(n, _)| n == name).unwrap().1.clone();
        let (p1, p2) = (find("phase1"), find("phase2"));
        assert_eq!(max_abs(&(left_twist(&p1, &m) * right_twist(&p2, &m) - right_twist(&p2, &m) * left_twist(&p1, &m))), 0.0);
        assert!(verify_lemma_a(&find("clock"), &find("shift"), &m) <= 1e-13);
        let c = find("shift_phase2");
        assert!(verify_lemma_a(&c, &c, &m) <= 1e-13);
    }

    #[test]
    fn lemma_scans_exhaustive() {
        for (n, theta) in [(2, "1/2"), (3, "1/3"), (4, "1/4"), (6, "5/6"), (12, "7/12")] {
            let m = model(n, theta);
            let worst = lemma_scan(&m).iter().map(|r| r.residual).fold(0.0, f64::max);
            assert!(worst <= 1e-13, "N = {n}: {worst}");
        }
    }

    #[test]
    fn lemma_b_bilinear() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let m = model(4, "3/4");
        let rand_op = |rng: &mut rand::rngs::StdRng| {
            let t = Matrix::from_fn(16, 16, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            decompose(&t, &m)
        };
        let (x, y) = (rand_op(&mut rng), rand_op(&mut rng));
        let (a, b) = verify_lemma_b(&x, &y, &m);
        assert!(a <= 1e-12 && b <= 1e-12, "{a} {b}");
        assert!(verify_lemma_a(&x, &y, &m) <= 1e-12);
    }

    #[test]
    fn theta_zero_is_untwisted() {
        let m = model(6, "0");
        let gens = m.generators();
        for (_, x) in &gens {
            assert_eq!(left_twist(x, &m), x.reconstruct(36));
            assert_eq!(right_twist(x, &m), x.reconstruct(36));
            for (_, y) in &gens {
                assert_eq!(star_product(x, y, &m), plain_product(x, y, &m));
            }
        }
    }

    #[test]
    fn associativity() {
        for (n, theta) in [(2, "1/2"), (3, "2/3"), (4, "1/4")] {
            assert!(associativity_residual(&model(n, theta)) <= 1e-13);
        }
    }

    #[test]
    fn grading_homomorphism() {
        assert!(Grading::Total.check(4).is_ok());
        assert!(matches!(Grading::Total.check(3), Err(Error::GradingNotHomomorphic { n: 3, .. })));
        assert!(Grading::Second.check(6).is_ok());
        let bad = Grading::Table(vec![vec![0, 1], vec![1, 1]]);
        assert!(bad.check(2).is_err());
    }

    #[test]
    fn projection_examples() {
        let m = model(4, "1/4");
        let c = BigradedOp::homogeneous((0, 1), m.clock());
        assert!(z2_twist_project(&c, &Grading::Total, &m).unwrap().components.is_empty());
        let t = decompose(&(m.clock() + m.translation(1, 1)), &m);
        let p = z2_twist_project(&t, &Grading::Total, &m).unwrap();
        assert_eq!(z2_twist_project(&p, &Grading::Total, &m).unwrap(), p);
        assert_eq!(p.components.keys().copied().collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn twisted_triple_examples() {
        let m = model(4, "1/4");
        let zero = Matrix::zeros(16, 16);
        let clock = BigradedOp::homogeneous((0, 1), m.clock());
        assert_eq!(twisted_commutator_residual(&zero, &clock, &m), 0.0);
        let d = m.p1() + m.p2();
        assert!(twisted_commutator_residual(&d, &clock, &m) <= 1e-13);
        let checks = twisted_triple_check(&m, &d, &Grading::Total).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(twisted_triple_check(&m, &m.shift(), &Grading::Total).is_err());
    }
}
