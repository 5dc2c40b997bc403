//! Computational toolkit for the unoriented spectral triple over quantum SO(3).
//!
//! * [`ncpoly`]: normal forms in the SU_q(2) polynomial algebra and the Z₂ action.
//! * [`rep`]: truncated faithful representation on ℓ²(ℕ⁰)⊗ℓ²(ℤ), used as an oracle.
//! * [`gns`]: Haar state, GNS pairing and the orthonormal basis `e^(l)_jk`.
//! * [`triple`]: Dirac operator, Z₂ covering certificate, unoriented restriction.
//! * [`isodeform`]: θ-twists on a finite clock-and-shift model.

pub mod error;
pub mod ncpoly;
pub mod gns;
pub mod rep;
pub mod isodeform;
pub mod triple;

pub use error::{Error, Result};
