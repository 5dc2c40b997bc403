use std::collections::BTreeMap;

use super::{CanonicalMonomial, Letter, NcPoly, Parity};
use crate::error::{Error, Result};

/// Peels one generator off the right of an odd canonical monomial, following
/// the finite-generation argument: β* if `m > 0`, else β if `n > 0`, else the
/// last α or α*. The remaining factor is canonical, of even degree, and the
/// concatenation is canonical again, so the coefficient is exactly 1.
pub fn peel(m: CanonicalMonomial) -> Option<(CanonicalMonomial, Letter)> {
    if m.beta_star > 0 {
        Some((CanonicalMonomial::new(m.alpha, m.beta, m.beta_star - 1), Letter::BetaStar))
    } else if m.beta > 0 {
        Some((CanonicalMonomial::new(m.alpha, m.beta - 1, 0), Letter::Beta))
    } else if m.alpha > 0 {
        Some((CanonicalMonomial::new(m.alpha - 1, 0, 0), Letter::Alpha))
    } else if m.alpha < 0 {
        Some((CanonicalMonomial::new(m.alpha + 1, 0, 0), Letter::AlphaStar))
    } else {
        None
    }
}

pub(super) fn module_decompose(x: &NcPoly) -> Result<Vec<(NcPoly, Letter)>> {
    let mut grouped: BTreeMap<Letter, NcPoly> = BTreeMap::new();
    for (m, c) in x.terms() {
        if m.parity() == Parity::Even {
            return Err(Error::EvenParity(m.to_string()));
        }
        let (factor, g) = peel(*m).expect("odd monomial has positive degree");
        grouped.entry(g).or_default().add_term(factor, *c);
    }
    Ok(grouped.into_iter().filter(|(_, p)| !p.is_zero()).map(|(g, p)| (p, g)).collect())
}
