//! Confluent rewriting of free words onto the canonical basis.
//!
//! The relations and their adjoints, solved for the out-of-order pair:
//!
//! ```text
//!   αβ  = q βα    ⇒  βα   → q⁻¹ αβ
//!   αβ* = q β*α   ⇒  β*α  → q⁻¹ αβ*
//!   (αβ*)* = βα*,   (qβ*α)* = q α*β    ⇒  βα*  → q α*β
//!   (αβ)*  = β*α*,  (qβα)*  = q α*β*   ⇒  β*α* → q α*β*
//!   α*α + β*β = 1   ⇒  α*α → 1 − β*β
//!   αα* + q²ββ* = 1 ⇒  αα* → 1 − q²ββ*
//!   β*β = ββ*       ⇒  β*β → ββ*
//! ```
//!
//! Contractions fire before transpositions. Each contraction removes two
//! α-letters and each transposition removes one inversion against the order
//! `α, α* < β < β*` while keeping the α-count, so the pair
//! (α-letter count, inversions) strictly decreases along every derivation.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{CanonicalMonomial, Letter, NcPoly};
use Letter::*;

/// A free word with a scalar in front. No relations are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub coeff: Complex64,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters, coeff: Complex64::new(1.0, 0.0) }
    }

    pub fn with_coeff(letters: Vec<Letter>, coeff: Complex64) -> Self {
        Word { letters, coeff }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, coeff: self.coeff * other.coeff }
    }
}

/// A left-hand side pair and its replacement `Σ coeff · word`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteRule {
    /// α*α → 1 − β*β
    ContractStarFirst,
    /// αα* → 1 − q²ββ*
    ContractAlphaFirst,
    /// β*β → ββ*
    SwapBetaStarBeta,
    /// βα → q⁻¹αβ
    BetaPastAlpha,
    /// β*α → q⁻¹αβ*
    BetaStarPastAlpha,
    /// βα* → qα*β
    BetaPastAlphaStar,
    /// β*α* → qα*β*
    BetaStarPastAlphaStar,
}

/// Every rule in priority order.
pub const REWRITE_RULES: [RewriteRule; 7] = [
    RewriteRule::ContractStarFirst,
    RewriteRule::ContractAlphaFirst,
    RewriteRule::SwapBetaStarBeta,
    RewriteRule::BetaPastAlpha,
    RewriteRule::BetaStarPastAlpha,
    RewriteRule::BetaPastAlphaStar,
    RewriteRule::BetaStarPastAlphaStar,
];

impl RewriteRule {
    pub fn lhs(self) -> [Letter; 2] {
        match self {
            RewriteRule::ContractStarFirst => [AlphaStar, Alpha],
            RewriteRule::ContractAlphaFirst => [Alpha, AlphaStar],
            RewriteRule::SwapBetaStarBeta => [BetaStar, Beta],
            RewriteRule::BetaPastAlpha => [Beta, Alpha],
            RewriteRule::BetaStarPastAlpha => [BetaStar, Alpha],
            RewriteRule::BetaPastAlphaStar => [Beta, AlphaStar],
            RewriteRule::BetaStarPastAlphaStar => [BetaStar, AlphaStar],
        }
    }

    pub fn is_contraction(self) -> bool {
        matches!(self, RewriteRule::ContractStarFirst | RewriteRule::ContractAlphaFirst)
    }

    pub fn rhs(self, q: f64) -> Vec<(Complex64, Vec<Letter>)> {
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            RewriteRule::ContractStarFirst => vec![(r(1.0), vec![]), (r(-1.0), vec![BetaStar, Beta])],
            RewriteRule::ContractAlphaFirst => vec![(r(1.0), vec![]), (r(-q * q), vec![Beta, BetaStar])],
            RewriteRule::SwapBetaStarBeta => vec![(r(1.0), vec![Beta, BetaStar])],
            RewriteRule::BetaPastAlpha => vec![(r(1.0 / q), vec![Alpha, Beta])],
            RewriteRule::BetaStarPastAlpha => vec![(r(1.0 / q), vec![Alpha, BetaStar])],
            RewriteRule::BetaPastAlphaStar => vec![(r(q), vec![AlphaStar, Beta])],
            RewriteRule::BetaStarPastAlphaStar => vec![(r(q), vec![AlphaStar, BetaStar])],
        }
    }

    fn matching(pair: [Letter; 2]) -> Option<RewriteRule> {
        REWRITE_RULES.iter().copied().find(|r| r.lhs() == pair)
    }
}

/// Counters for one normalization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewriteStats {
    /// Total rule applications over all branches.
    pub applications: usize,
    /// Longest derivation chain from the input word to a canonical word.
    pub depth: usize,
}

/// Reads a word as a canonical monomial if no rule applies.
pub(crate) fn as_canonical(letters: &[Letter]) -> Option<CanonicalMonomial> {
    let mut alpha = 0i32;
    let mut beta = 0u32;
    let mut beta_star = 0u32;
    // 0: α-block, 1: β-block, 2: β*-block
    let mut stage = 0;
    for &l in letters {
        match l {
            Alpha | AlphaStar => {
                if stage > 0 {
                    return None;
                }
                let step = if l == Alpha { 1 } else { -1 };
                if alpha != 0 && alpha.signum() != step {
                    return None;
                }
                alpha += step;
            }
            Beta => {
                if stage > 1 {
                    return None;
                }
                stage = 1;
                beta += 1;
            }
            BetaStar => {
                stage = 2;
                beta_star += 1;
            }
        }
    }
    Some(CanonicalMonomial::new(alpha, beta, beta_star))
}

/// Picks the redex: leftmost contraction if any, else the leftmost other rule.
fn select_redex(letters: &[Letter]) -> Option<(usize, RewriteRule)> {
    let pairs = || letters.windows(2).enumerate().filter_map(|(i, w)| RewriteRule::matching([w[0], w[1]]).map(|r| (i, r)));
    pairs().find(|(_, r)| r.is_contraction()).or_else(|| pairs().next())
}

/// One rewrite step on `letters`, or `None` if the word is canonical.
pub(crate) fn rewrite_once(letters: &[Letter], q: f64) -> Option<Vec<(Complex64, Vec<Letter>)>> {
    let (pos, rule) = select_redex(letters)?;
    Some(
        rule.rhs(q)
            .into_iter()
            .map(|(c, mid)| {
                let mut w = Vec::with_capacity(letters.len());
                w.extend_from_slice(&letters[..pos]);
                w.extend(mid);
                w.extend_from_slice(&letters[pos + 2..]);
                (c, w)
            })
            .collect(),
    )
}

/// Rewrites to normal form, one parallel step per round; identical words
/// produced by different branches are merged before the next round.
pub(crate) fn normalize(w: &Word, q: f64) -> (NcPoly, RewriteStats) {
    let mut out = NcPoly::zero();
    let mut stats = RewriteStats::default();
    let mut frontier: HashMap<Vec<Letter>, Complex64> = HashMap::new();
    frontier.insert(w.letters.clone(), w.coeff);
    while !frontier.is_empty() {
        let mut next: HashMap<Vec<Letter>, Complex64> = HashMap::new();
        let mut rewrote = false;
        for (letters, c) in frontier {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            match rewrite_once(&letters, q) {
                None => {
                    let m = as_canonical(&letters).expect("irreducible word is canonical");
                    out.add_term(m, c);
                }
                Some(branches) => {
                    rewrote = true;
                    stats.applications += 1;
                    for (k, nw) in branches {
                        *next.entry(nw).or_default() += c * k;
                    }
                }
            }
        }
        if rewrote {
            stats.depth += 1;
        }
        frontier = next;
    }
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn nf(letters: &[Letter], q: f64) -> NcPoly {
        normalize(&Word::new(letters.to_vec()), q).0
    }

    #[test]
    fn beta_alpha_swaps_with_inverse_q() {
        let p = nf(&[Beta, Alpha], 0.5);
        assert_eq!(p, NcPoly::term(CanonicalMonomial::new(1, 1, 0), r(2.0)));
    }

    #[test]
    fn alpha_star_alpha_contracts() {
        // α*α = 1 − β*β = 1 − ββ*
        let p = nf(&[AlphaStar, Alpha], 0.3);
        let want = NcPoly::from_terms([(CanonicalMonomial::UNIT, r(1.0)), (CanonicalMonomial::new(0, 1, 1), r(-1.0))]);
        assert_eq!(p, want);
    }

    #[test]
    fn alpha_alpha_star_contracts() {
        let q = 0.3;
        let p = nf(&[Alpha, AlphaStar], q);
        let want = NcPoly::from_terms([(CanonicalMonomial::UNIT, r(1.0)), (CanonicalMonomial::new(0, 1, 1), r(-q * q))]);
        assert_eq!(p, want);
    }

    #[test]
    fn canonical_words_are_fixed_points() {
        for m in CanonicalMonomial::up_to_degree(5) {
            let (p, stats) = normalize(&Word::new(m.letters()), 0.7);
            assert_eq!(p, NcPoly::monomial(m));
            assert_eq!(stats.applications, 0);
            assert_eq!(as_canonical(&m.letters()), Some(m));
        }
    }

    #[test]
    fn irreducible_means_canonical() {
        // exhaustive over words of length ≤ 5
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..5 {
            let mut grown = Vec::new();
            for w in &words {
                for l in Letter::ALL {
                    let mut v = w.clone();
                    v.push(l);
                    grown.push(v);
                }
            }
            for w in &grown {
                assert_eq!(select_redex(w).is_none(), as_canonical(w).is_some(), "{w:?}");
            }
            words = grown;
        }
    }

    #[test]
    fn contraction_has_priority() {
        // β α α*: the αα* contraction fires before βα.
        let (pos, rule) = select_redex(&[Beta, Alpha, AlphaStar]).unwrap();
        assert_eq!((pos, rule), (1, RewriteRule::ContractAlphaFirst));
    }

    #[test]
    fn classical_mode_commutes() {
        let p = nf(&[BetaStar, Beta, Alpha], 1.0);
        assert_eq!(p, NcPoly::monomial(CanonicalMonomial::new(1, 1, 1)));
    }
}
