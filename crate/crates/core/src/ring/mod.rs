//! Exact arithmetic in the base ring model `S = Z[x1..xd]`.
//!
//! Polynomials are stored in canonical form: a sorted map from monomials to
//! nonzero arbitrary-precision integer coefficients, with the graded
//! lexicographic term order (ties broken by variable index). The localization
//! at `(p, x1..xd)` is implicit; see [`is_local_unit`](predicates::is_local_unit).

mod gcd;
mod parse;
mod predicates;

pub use gcd::gcd;
pub use parse::{parse_poly, ParseError};
pub use predicates::{
    integer_square_free, is_local_unit, is_pth_power_mod_p, is_pth_power_mod_p2, is_square_free,
    pairwise_coprime, pth_root_mod_p, RadicandCertificate,
};
pub(crate) use predicates::is_prime;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The ordered list of ambient variable names. Shared by every polynomial of
/// the same ring via `Arc`.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

/// True iff `s` is a valid variable identifier: a letter or `_` followed by
/// letters, digits or `_`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarSet {
    /// Build a variable set. Panics on empty lists, invalid identifiers or
    /// duplicate names; caller-facing validation lives in the parsers.
    pub fn new<I, S>(names: I) -> Arc<VarSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert!(!names.is_empty(), "variable set must be nonempty");
        for n in &names {
            assert!(is_identifier(n), "invalid variable name {n:?}");
        }
        for i in 1..names.len() {
            assert!(
                !names[..i].contains(&names[i]),
                "duplicate variable name {:?}",
                names[i]
            );
        }
        Arc::new(VarSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector of a single monomial; length equals the ambient variable
/// count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    /// The monomial `x_i^e`.
    pub fn var_pow(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Quotient monomial; caller guarantees divisibility.
    pub fn div(&self, divisor: &Monomial) -> Monomial {
        debug_assert!(divisor.divides(self));
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&divisor.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

// Graded lexicographic: total degree first, then exponents compared from the
// first variable. BTreeMap iteration is therefore smallest-term first; display
// walks it in reverse so the leading term prints first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over the integers in canonical form: no zero
/// coefficients stored, at most one term per monomial.
#[derive(Clone)]
pub struct BasePoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for BasePoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_vars(other) && self.terms == other.terms
    }
}

impl Eq for BasePoly {}

impl BasePoly {
    pub fn zero(vars: &Arc<VarSet>) -> BasePoly {
        BasePoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VarSet>) -> BasePoly {
        BasePoly::constant(vars, BigInt::one())
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> BasePoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        BasePoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// The polynomial `x_i`.
    pub fn var(vars: &Arc<VarSet>, i: usize) -> BasePoly {
        BasePoly::var_pow(vars, i, 1)
    }

    pub fn var_pow(vars: &Arc<VarSet>, i: usize, e: u32) -> BasePoly {
        assert!(i < vars.len());
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var_pow(vars.len(), i, e), BigInt::one());
        BasePoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Build from arbitrary (monomial, coefficient) pairs, combining duplicates
    /// and dropping zeros.
    pub fn from_terms<I>(vars: &Arc<VarSet>, iter: I) -> BasePoly
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in iter {
            assert_eq!(m.exps.len(), vars.len(), "monomial arity mismatch");
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        BasePoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn same_vars(&self, other: &BasePoly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    fn assert_same_vars(&self, other: &BasePoly) {
        assert!(
            self.same_vars(other),
            "mismatched ambient variables: {:?} vs {:?}",
            self.vars.names(),
            other.vars.names()
        );
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && c == &BigInt::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// `Some(c)` iff the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Coefficient of the monomial 1 (zero if absent).
    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Leading term in the graded-lex order. Panics on zero.
    pub fn leading_term(&self) -> (&Monomial, &BigInt) {
        self.terms.iter().next_back().expect("zero polynomial")
    }

    pub fn neg(&self) -> BasePoly {
        BasePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &BasePoly) -> BasePoly {
        self.assert_same_vars(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        BasePoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &BasePoly) -> BasePoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BasePoly) -> BasePoly {
        self.assert_same_vars(other);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        BasePoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> BasePoly {
        let mut acc = BasePoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_int(&self, c: &BigInt) -> BasePoly {
        if c.is_zero() {
            return BasePoly::zero(&self.vars);
        }
        BasePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_i64(&self, c: i64) -> BasePoly {
        self.mul_int(&BigInt::from(c))
    }

    /// Multiply by the monomial `x^m`.
    pub fn mul_monomial(&self, m: &Monomial) -> BasePoly {
        BasePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn divisible_by_int(&self, c: &BigInt) -> bool {
        assert!(!c.is_zero());
        self.terms.values().all(|x| (x % c).is_zero())
    }

    /// Exact division by a nonzero integer; panics when not divisible.
    pub fn div_exact_int(&self, c: &BigInt) -> BasePoly {
        assert!(!c.is_zero(), "division by zero");
        BasePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| {
                    let (q, r) = num_integer::Integer::div_rem(x, c);
                    assert!(r.is_zero(), "coefficient {x} not divisible by {c}");
                    (m.clone(), q)
                })
                .collect(),
        }
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn mod_p(&self, p: u32) -> BasePoly {
        let p = BigInt::from(p);
        BasePoly::from_terms(
            &self.vars,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), num_integer::Integer::mod_floor(c, &p))),
        )
    }

    pub fn partial_derivative(&self, var: usize) -> BasePoly {
        assert!(var < self.vars.len());
        BasePoly::from_terms(
            &self.vars,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exp(var);
                if e == 0 {
                    return None;
                }
                let mut exps = m.exps().to_vec();
                exps[var] = e - 1;
                Some((Monomial::from_exps(exps), c * BigInt::from(e)))
            }),
        )
    }

    /// Positive gcd of all coefficients; 0 for the zero polynomial.
    pub fn integer_content(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.terms.values() {
            acc = num_integer::Integer::gcd(&acc, c);
            if acc.is_one() {
                break;
            }
        }
        acc
    }

    pub fn primitive_part(&self) -> BasePoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.integer_content();
        self.div_exact_int(&c)
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_exponent(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).min().unwrap_or(0)
    }

    /// Exact division by the monomial `x^m`; caller guarantees divisibility.
    pub fn div_monomial(&self, m: &Monomial) -> BasePoly {
        BasePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.div(m), c.clone()))
                .collect(),
        }
    }

    /// Image under `x_i -> x_i^k` for every variable (exponent scaling).
    pub fn scale_exponents(&self, k: u32) -> BasePoly {
        assert!(k >= 1);
        BasePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial::from_exps(m.exps().iter().map(|&e| e * k).collect()),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Sign-normalize: leading coefficient positive.
    pub fn normalize_sign(&self) -> BasePoly {
        if self.is_zero() {
            return self.clone();
        }
        if self.leading_term().1.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl std::ops::Add for &BasePoly {
    type Output = BasePoly;
    fn add(self, rhs: &BasePoly) -> BasePoly {
        BasePoly::add(self, rhs)
    }
}

impl std::ops::Sub for &BasePoly {
    type Output = BasePoly;
    fn sub(self, rhs: &BasePoly) -> BasePoly {
        BasePoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &BasePoly {
    type Output = BasePoly;
    fn mul(self, rhs: &BasePoly) -> BasePoly {
        BasePoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &BasePoly {
    type Output = BasePoly;
    fn neg(self) -> BasePoly {
        BasePoly::neg(self)
    }
}

/// Exact quotient `a / b` over `Z[x..]`, or `None` when `b` does not divide
/// `a`. Leading-term division in the graded-lex order: if `a = b*q` then the
/// leading term of the running remainder is always divisible by the leading
/// term of `b`, so the greedy loop is complete.
pub fn exact_divide(a: &BasePoly, b: &BasePoly) -> Option<BasePoly> {
    assert!(!b.is_zero(), "division by zero");
    a.assert_same_vars(b);
    let vars = a.vars.clone();
    let (lm, lc) = {
        let (m, c) = b.leading_term();
        (m.clone(), c.clone())
    };
    let mut rem = a.clone();
    let mut quot: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    while !rem.is_zero() {
        let (m, c) = {
            let (m, c) = rem.leading_term();
            (m.clone(), c.clone())
        };
        if !lm.divides(&m) {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(&c, &lc);
        if !r.is_zero() {
            return None;
        }
        let qm = m.div(&lm);
        let t = BasePoly {
            vars: vars.clone(),
            terms: BTreeMap::from([(qm.clone(), q.clone())]),
        };
        rem = rem.sub(&t.mul(b));
        quot.insert(qm, q);
    }
    Some(BasePoly { vars, terms: quot })
}

impl fmt::Display for BasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut printed = false;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                printed = true;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasePoly({self})")
    }
}
