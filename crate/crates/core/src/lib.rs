//! Numerical toolkit for modular flows, invariant cones and wedge domains
//! on causal symmetric spaces.
//!
//! The crate is organized around a small dense-matrix kernel and a stack of
//! Lie-theoretic layers on top of it:
//!
//! - [`numkernel`]: eigendecomposition, matrix exponential and principal
//!   logarithm for small dense real/complex matrices.
//! - [`liealg`]: matrix Lie algebras with structure constants, Killing form
//!   and spectral predicates (elliptic / hyperbolic elements).
//! - [`euler`]: Euler elements, the 3-grading they induce, the involution
//!   `τ_h` and the Wick rotation `κ_h`.
//! - [`symspace`]: symmetric Lie algebras `(g, τ)`, c-duality and the
//!   embedding `x ↦ (x, τx)` into group type.
//! - [`cones`]: invariant convex cones with exact membership predicates and
//!   the derived cones `C_± = ±C ∩ g_{±1}(h)`.
//! - [`weylclass`]: signed-permutation Weyl groups, orbit and double-coset
//!   enumeration, root restriction.
//! - [`grouptype`]: the SL(2,ℝ) group-type space and the real Olshanski
//!   semigroup `S(C,h)` with its equivalent characterizations.
//! - [`adsgeo`]: anti-de Sitter space, its modular flow, tube domains and
//!   the three wedge-domain predicates.
//! - [`modular`]: finite-dimensional modular pairs `(Δ, J)` and standard
//!   subspaces `V = Fix(JΔ^{1/2})`.
//!
//! Verification suites return a [`report::VerifyReport`]; runs are
//! deterministic for a fixed master seed.

pub mod adsgeo;
pub mod cones;
pub mod euler;
pub mod grouptype;
pub mod liealg;
pub mod modular;
pub mod numkernel;
pub mod report;
pub mod symspace;
pub mod weylclass;

pub use numkernel::{eig, expm, logm_principal, Mat, NumError, SpectralData, Tolerances};
pub use report::{Mismatch, SeedStream, VerifyReport};
