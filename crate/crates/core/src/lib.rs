//! Maximally recoverable local reconstruction codes (MR LRCs) over explicit
//! finite-field towers.
//!
//! A code with parameters `(n, r, h, a)` splits its `n = g·r` symbols into `g`
//! local groups of size `r`. Each group carries `a` local parity checks and
//! the whole word obeys `h` heavy parity checks. The code is maximally
//! recoverable when it corrects every pattern of `a` erasures per group plus
//! `h` more anywhere.
//!
//! The heavy checks are built from rational functions `f(x)/p_i(x)` with
//! pairwise coprime denominators `p_i`, one per group, evaluated modulo a
//! high-degree irreducible `Q(x)`. The check columns are Moore columns
//! `(β, β^q, …, β^{q^{h−1}})` of those evaluations, so independence over the
//! big field reduces to independence of the numerators over `F_q`.
//!
//! Module map:
//! - [`gf`]: base field `F_q` and extension `F_ℓ = F_q[x]/(Q)`
//! - [`polyring`]: polynomials, irreducibility, coprime families
//! - [`innercodes`]: MDS generators and independent column families (incl. BCH)
//! - [`moore`]: Moore matrices and the `F_q`-independence test
//! - [`construct`]: parameter planning and code assembly
//! - [`verify`]: exhaustive/sampled MR checks, encoding and erasure decoding
//! - [`bounds`]: field-size calculators and comparison claims
//! - [`artifact`]: self-describing text serialization of codes and reports

pub mod acceptance;
pub mod artifact;
pub mod bounds;
pub mod combinatorics;
pub mod construct;
pub mod error;
pub mod field;
pub mod gf;
pub mod innercodes;
pub mod linalg;
pub mod moore;
pub mod oracle;
pub mod polyring;
pub mod verify;

pub use construct::{build, build_generator, build_parity, plan, CodeForm, LrcParams, MrLrcCode, Route};
pub use error::{Error, Result};
pub use field::Field;
pub use gf::{ExtElem, ExtFieldCtx, FieldCtx};
pub use polyring::Poly;
pub use verify::{ErasurePattern, VerifyMode, VerifyOptions, VerifyReport};
