//! Arithmetic predicates on base-ring elements: p-th roots modulo p,
//! p-th powers modulo p^2 with certificates, square-freeness, pairwise
//! coprimality, and the unit test in the implicit localization at (p, x..).

use super::{gcd, BasePoly, Monomial};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Witness that `f = h^p + p^2 * g` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicandCertificate {
    pub h: BasePoly,
    pub g: BasePoly,
}

impl RadicandCertificate {
    /// Re-check the defining identity against `f`.
    pub fn verifies(&self, f: &BasePoly, p: u32) -> bool {
        let p2 = BigInt::from(p) * BigInt::from(p);
        self.h.pow(p).add(&self.g.mul_int(&p2)) == *f
    }
}

/// The unique p-th root of `f` modulo `p`, if one exists: every monomial with
/// coefficient nonzero mod p must have all exponents divisible by p, and the
/// root coefficient is the residue itself (Frobenius fixes the prime field).
pub fn pth_root_mod_p(f: &BasePoly, p: u32) -> Option<BasePoly> {
    assert!(is_prime(p), "p = {p} is not prime");
    let reduced = f.mod_p(p);
    let mut terms = Vec::new();
    for (m, c) in reduced.terms() {
        if m.exps().iter().any(|&e| e % p != 0) {
            return None;
        }
        let root = Monomial::from_exps(m.exps().iter().map(|&e| e / p).collect());
        terms.push((root, c.clone()));
    }
    Some(BasePoly::from_terms(f.vars(), terms))
}

/// Membership in the p-th powers modulo `p` (no certificate beyond the root).
pub fn is_pth_power_mod_p(f: &BasePoly, p: u32) -> bool {
    pth_root_mod_p(f, p).is_some()
}

/// Decide whether `f` is a p-th power modulo `p^2` and return the certificate
/// `(h, g)` with `f = h^p + p^2*g`. The root `h` is the canonical lift (all
/// coefficients in `[0, p)`); the divisibility test does not depend on the
/// lift, since `(h + pc)^p ≡ h^p mod p^2` for p >= 3 and `(h + 2c)^2 ≡ h^2
/// mod 4` for p = 2.
pub fn is_pth_power_mod_p2(f: &BasePoly, p: u32) -> Option<RadicandCertificate> {
    let h = pth_root_mod_p(f, p)?;
    let p2 = BigInt::from(p) * BigInt::from(p);
    let diff = f.sub(&h.pow(p));
    if !diff.divisible_by_int(&p2) {
        return None;
    }
    Some(RadicandCertificate {
        h,
        g: diff.div_exact_int(&p2),
    })
}

/// Square-freeness in the UFD model `Z[x..]`: the integer content must be
/// square-free and the primitive part must share no nonconstant factor with
/// its partial derivatives.
pub fn is_square_free(f: &BasePoly) -> bool {
    assert!(!f.is_zero(), "square-freeness of 0 is undefined");
    let content = f.integer_content();
    if !integer_square_free(&content) {
        return false;
    }
    let pp = f.primitive_part();
    if pp.is_constant() {
        return true;
    }
    let mut acc = pp.clone();
    for var in 0..f.vars().len() {
        let d = pp.partial_derivative(var);
        if d.is_zero() {
            continue;
        }
        acc = gcd(&acc, &d);
        if acc.is_constant() {
            return true;
        }
    }
    acc.is_constant()
}

/// Trial-division square-freeness test for positive integers (contents in
/// this crate stay small).
pub fn integer_square_free(n: &BigInt) -> bool {
    let mut n = n.abs();
    assert!(!n.is_zero());
    let mut d = BigInt::from(2u32);
    while (&d * &d) <= n {
        if (&n % &d).is_zero() {
            n /= &d;
            if (&n % &d).is_zero() {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// All pairs have gcd 1 over `Z[x..]`; an empty or singleton list passes
/// vacuously.
pub fn pairwise_coprime(fs: &[BasePoly]) -> bool {
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            assert!(!fs[i].is_zero() && !fs[j].is_zero());
            if !gcd(&fs[i], &fs[j]).is_one() {
                return false;
            }
        }
    }
    true
}

/// Unit test in the localization of `Z[x..]` at `(p, x..)`: `u` is a unit iff
/// it lies outside the maximal ideal, i.e. its constant coefficient is not
/// divisible by `p`.
pub fn is_local_unit(u: &BasePoly, p: u32) -> bool {
    !(u.constant_term() % BigInt::from(p)).is_zero()
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, VarSet};
    use std::sync::Arc;

    fn vs() -> Arc<VarSet> {
        VarSet::new(["X", "Y"])
    }

    fn p(s: &str) -> BasePoly {
        parse_poly(&vs(), s).unwrap()
    }

    #[test]
    fn pth_root_examples() {
        assert_eq!(pth_root_mod_p(&p("X^3"), 3).unwrap(), p("X"));
        // 2^3 = 8 = 2 mod 3
        assert_eq!(
            pth_root_mod_p(&p("2*X^3 + X^6*Y^3"), 3).unwrap(),
            p("2*X + X^2*Y")
        );
        assert!(pth_root_mod_p(&p("X^2 + 1"), 3).is_none());
    }

    #[test]
    fn pth_root_satisfies_congruence() {
        let f = p("5*X^3*Y^6 + 12*X^3 + 7");
        let h = pth_root_mod_p(&f, 3).unwrap();
        assert!(f.sub(&h.pow(3)).mod_p(3).is_zero());
    }

    #[test]
    fn p_wedge_p2_examples() {
        let cert = is_pth_power_mod_p2(&p("X^3 + 9"), 3).unwrap();
        assert_eq!(cert.h, p("X"));
        assert_eq!(cert.g, p("1"));
        assert!(cert.verifies(&p("X^3 + 9"), 3));

        // Exact p-th power: g = 0.
        let cert = is_pth_power_mod_p2(&p("X^3*Y^3"), 3).unwrap();
        assert_eq!(cert.h, p("X*Y"));
        assert!(cert.g.is_zero());

        // X^3 + 3: the gap 3 is not divisible by 9.
        assert!(is_pth_power_mod_p2(&p("X^3 + 3"), 3).is_none());
    }

    #[test]
    fn p_wedge_p_but_not_p2() {
        // X^(2p) - p*X^(2p) + p^2 at p = 3: a p-th power mod p, not mod p^2.
        let f = p("X^6 - 3*X^6 + 9");
        assert!(is_pth_power_mod_p(&f, 3));
        assert!(is_pth_power_mod_p2(&f, 3).is_none());
        let f2 = p("(X*Y)^3 + 3*(X*Y)^3 + 9");
        assert!(is_pth_power_mod_p(&f2, 3));
        assert!(is_pth_power_mod_p2(&f2, 3).is_none());
    }

    #[test]
    fn square_free_examples() {
        assert!(is_square_free(&p("X^3 + 9")));
        assert!(!is_square_free(&p("(X + 1)^2")));
        assert!(!is_square_free(&p("4*X + 4")));
        assert!(is_square_free(&p("6")));
        assert!(!is_square_free(&p("12")));
        assert!(!is_square_free(&p("X^2*Y + X^2")));
    }

    #[test]
    fn coprime_examples() {
        assert!(pairwise_coprime(&[p("X^3 + 9"), p("Y^3 + 9")]));
        assert!(!pairwise_coprime(&[p("X"), p("X*Y")]));
        assert!(pairwise_coprime(&[p("X*Y^4 + 9"), p("X^4*Y + 9")]));
        assert!(pairwise_coprime(&[]));
    }

    #[test]
    fn local_unit_examples() {
        assert!(is_local_unit(&p("2"), 3));
        assert!(!is_local_unit(&p("3"), 3));
        // Nonconstant local units are accepted: the constant term decides.
        assert!(is_local_unit(&p("X + 2"), 3));
        assert!(!is_local_unit(&p("X"), 3));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(251));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
    }
}
