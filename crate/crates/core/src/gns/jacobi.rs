//! Little q-Jacobi polynomials and the matrix coefficients `t^(l)_jk`.
//!
//! `p_n(y; a, b | Q) = ₂φ₁(Q⁻ⁿ, abQⁿ⁺¹; aQ; Q, Qy)`, orthogonal for the weight
//! `(bQ; Q)_k / (Q; Q)_k · (aQ)^k` at the points `y = Q^k`.
//!
//! With `x = ββ*` the Haar state is the measure `(1 − q²) Σ q^{2k} δ(x − q^{2k})`,
//! and moving the α-part of a sector vector through `x` turns it into exactly
//! that weight. Writing `Q = q²`, `c1 = −(j+k)`, `c2 = k − j`:
//!
//! ```text
//!   j+k ≤ 0, k ≥ j :  α^s β^t   · p_{l+j}(Q^{−s} x; Q^t, Q^s),   s = −(j+k), t = k−j
//!   j+k ≥ 0, k ≥ j :  p_{l−k}(Q^{−r} x; Q^t, Q^r) · β^t α*^r,    r = j+k,    t = k−j
//!   j+k ≥ 0, j ≥ k :  p_{l−j}(Q^{−r} x; Q^u, Q^r) · β*^u α*^r,   r = j+k,    u = j−k
//!   j+k < 0, j > k :  adjoint of the second form at (−j, −k)
//! ```
//!
//! The polynomial degree is always `2l`. Normalization constants are fixed
//! numerically and the phase makes the top-degree coefficient positive.

use num_complex::Complex64;

use super::{gns_inner, HalfInt, Label};
use crate::error::{Error, Result};
use crate::ncpoly::{Algebra, CanonicalMonomial, NcPoly};

/// `(a; Q)_k`.
pub fn q_pochhammer(a: f64, qsq: f64, k: usize) -> f64 {
    (0..k).map(|i| 1.0 - a * qsq.powi(i as i32)).product()
}

/// Coefficients `c_k` of `y^k` in `p_n(y; a, b | Q)`.
pub fn little_jacobi_coeffs(n: usize, a: f64, b: f64, qsq: f64) -> Vec<f64> {
    let qn = qsq.powi(-(n as i32));
    let abq = a * b * qsq.powi(n as i32 + 1);
    (0..=n)
        .map(|k| {
            q_pochhammer(qn, qsq, k) * q_pochhammer(abq, qsq, k) / (q_pochhammer(a * qsq, qsq, k) * q_pochhammer(qsq, qsq, k))
                * qsq.powi(k as i32)
        })
        .collect()
}

/// Scalar evaluation.
pub fn little_jacobi_value(n: usize, a: f64, b: f64, qsq: f64, y: f64) -> f64 {
    little_jacobi_coeffs(n, a, b, qsq).iter().rev().fold(0.0, |acc, c| acc * y + c)
}

/// `p_n(x; a, b | Q)` with an algebra element substituted for the variable.
pub fn little_jacobi(alg: &Algebra, n: usize, a: f64, b: f64, qsq: f64, x: &NcPoly) -> NcPoly {
    let coeffs = little_jacobi_coeffs(n, a, b, qsq);
    // Horner, highest coefficient first.
    coeffs.iter().rev().fold(NcPoly::zero(), |acc, c| {
        let shifted = alg.mul(&acc, x);
        &shifted + &NcPoly::constant(Complex64::new(*c, 0.0))
    })
}

/// Which closed form produces the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexRegion {
    /// j+k ≤ 0, k ≥ j
    AlphaBeta,
    /// j+k ≥ 0, k ≥ j
    BetaAlphaStar,
    /// j+k ≥ 0, j ≥ k
    BetaStarAlphaStar,
    /// j+k < 0, j > k
    Adjoint,
}

pub fn index_region(j: HalfInt, k: HalfInt) -> IndexRegion {
    let (j2, k2) = (j.twice(), k.twice());
    if j2 + k2 <= 0 && k2 >= j2 {
        IndexRegion::AlphaBeta
    } else if j2 + k2 >= 0 && k2 >= j2 {
        IndexRegion::BetaAlphaStar
    } else if j2 + k2 >= 0 {
        IndexRegion::BetaStarAlphaStar
    } else {
        IndexRegion::Adjoint
    }
}

fn x_scaled(factor: f64) -> NcPoly {
    NcPoly::term(CanonicalMonomial::new(0, 1, 1), Complex64::new(factor, 0.0))
}

/// The matrix coefficient before normalization (normalization constant 1).
pub fn t_matrix_raw(alg: &Algebra, label: Label) -> Result<NcPoly> {
    let (l2, j2, k2) = (label.l.twice(), label.j.twice(), label.k.twice());
    let qsq = alg.q().value().powi(2);
    let half = |v: i32| (v / 2) as usize;
    let out = match index_region(label.j, label.k) {
        IndexRegion::AlphaBeta => {
            let (s, t, n) = (half(-(j2 + k2)), half(k2 - j2), half(l2 + j2));
            let p = little_jacobi(alg, n, qsq.powi(t as i32), qsq.powi(s as i32), qsq, &x_scaled(qsq.powi(-(s as i32))));
            alg.mul(&NcPoly::monomial(CanonicalMonomial::new(s as i32, t as u32, 0)), &p)
        }
        IndexRegion::BetaAlphaStar => {
            let (r, t, n) = (half(j2 + k2), half(k2 - j2), half(l2 - k2));
            let p = little_jacobi(alg, n, qsq.powi(t as i32), qsq.powi(r as i32), qsq, &x_scaled(qsq.powi(-(r as i32))));
            let tail = alg.mul(&NcPoly::monomial(CanonicalMonomial::new(0, t as u32, 0)), &NcPoly::monomial(CanonicalMonomial::new(-(r as i32), 0, 0)));
            alg.mul(&p, &tail)
        }
        IndexRegion::BetaStarAlphaStar => {
            let (r, u, n) = (half(j2 + k2), half(j2 - k2), half(l2 - j2));
            let p = little_jacobi(alg, n, qsq.powi(u as i32), qsq.powi(r as i32), qsq, &x_scaled(qsq.powi(-(r as i32))));
            let tail = alg.mul(&NcPoly::monomial(CanonicalMonomial::new(0, 0, u as u32)), &NcPoly::monomial(CanonicalMonomial::new(-(r as i32), 0, 0)));
            alg.mul(&p, &tail)
        }
        IndexRegion::Adjoint => {
            let mirrored = Label::new(label.l, label.j.neg(), label.k.neg())?;
            if index_region(mirrored.j, mirrored.k) != IndexRegion::BetaAlphaStar {
                return Err(Error::InvalidLabel(format!("cannot resolve index region of {label}")));
            }
            alg.adjoint(&t_matrix_raw(alg, mirrored)?)
        }
    };
    Ok(out)
}

/// Normalized matrix coefficient `e^(l)_jk`, with positive top-degree coefficient.
pub fn t_matrix(alg: &Algebra, label: Label) -> Result<NcPoly> {
    let raw = t_matrix_raw(alg, label)?;
    let norm = gns_inner(alg, &raw, &raw).re.sqrt();
    if !(norm > 0.0) {
        return Err(Error::InvalidLabel(format!("matrix coefficient {label} has zero norm")));
    }
    let (_, lead) = raw.leading().expect("nonzero matrix coefficient");
    let phase = lead.conj() / lead.norm();
    Ok(raw.scale(phase / norm))
}
