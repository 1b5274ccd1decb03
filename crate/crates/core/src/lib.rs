//! Exact construction and verification of integral closures of radical towers
//! in mixed characteristic.
//!
//! The base ring is modelled as `S = Z[x1..xd]`, implicitly localized at the
//! maximal ideal `(p, x1..xd)` for a prime `p`. Given square-free, pairwise
//! coprime radicands `f_i` that are p-th powers modulo `p^2` (witnessed by
//! certificates `f_i = h_i^p + p^2*g_i`), the crate
//!
//! * does normal-form arithmetic in the tower `A = S[w1..wr]`, `w_i^p = f_i`,
//! * builds the explicit free-module basis of the integral closure of `S`
//!   in the fraction field of `A` (p-power-scaled shifted monomials),
//! * verifies ring closure and all integrality identities exactly,
//! * cross-checks membership against an independent characteristic-polynomial
//!   oracle, and
//! * runs the substitution pipelines (k-th roots of variables, monomial
//!   stripping, exponent reduction, disjoint residue blocks) that reduce more
//!   general radical extensions to the verified case.
//!
//! All arithmetic is exact over arbitrary-precision integers; nothing is
//! floating point and every check is a polynomial identity.

pub mod cli;
pub mod closure;
pub mod oracle;
pub mod ring;
pub mod tower;
pub mod transforms;
