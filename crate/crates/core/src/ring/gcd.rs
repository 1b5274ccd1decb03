//! Multivariate gcd over `Z[x..]` by content/primitive-part recursion with a
//! primitive polynomial remainder sequence in the chosen main variable.

use super::{exact_divide, BasePoly, Monomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A greatest common divisor over `Z[x..]`, sign-normalized so the leading
/// coefficient (graded-lex) is positive. Panics when both inputs are zero.
pub fn gcd(a: &BasePoly, b: &BasePoly) -> BasePoly {
    assert!(
        !(a.is_zero() && b.is_zero()),
        "gcd of two zero polynomials is undefined"
    );
    if a.is_zero() {
        return b.normalize_sign();
    }
    if b.is_zero() {
        return a.normalize_sign();
    }
    if let (Some(ca), Some(cb)) = (a.constant_value(), b.constant_value()) {
        return BasePoly::constant(a.vars(), ca.gcd(&cb));
    }

    // Main variable: the first one occurring in either input.
    let nvars = a.vars().len();
    let var = (0..nvars)
        .find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0)
        .expect("nonconstant input must involve a variable");

    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let cont = gcd(&ca, &cb);
    let pa = exact_divide(a, &ca).expect("content divides");
    let pb = exact_divide(b, &cb).expect("content divides");
    let g = primitive_prs_gcd(&pa, &pb, var);
    cont.mul(&g).normalize_sign()
}

/// Content of `f` viewed as a univariate polynomial in `var`: the gcd of its
/// coefficient polynomials (which live in the same ambient ring with
/// `var`-exponent zero).
fn content_in(f: &BasePoly, var: usize) -> BasePoly {
    let mut acc = BasePoly::zero(f.vars());
    for c in univariate_coeffs(f, var) {
        if c.is_zero() {
            continue;
        }
        acc = if acc.is_zero() { c } else { gcd(&acc, &c) };
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Coefficients of `f` in `var`, degree 0 upward.
fn univariate_coeffs(f: &BasePoly, var: usize) -> Vec<BasePoly> {
    let deg = f.degree_in(var) as usize;
    let mut coeffs = vec![BasePoly::zero(f.vars()); deg + 1];
    for (m, c) in f.terms() {
        let e = m.exp(var) as usize;
        let mut exps = m.exps().to_vec();
        exps[var] = 0;
        let t = BasePoly::from_terms(f.vars(), [(Monomial::from_exps(exps), c.clone())]);
        coeffs[e] = coeffs[e].add(&t);
    }
    coeffs
}

fn var_pow(f: &BasePoly, var: usize, e: u32) -> BasePoly {
    f.mul_monomial(&Monomial::var_pow(f.vars().len(), var, e))
}

fn leading_coeff_in(f: &BasePoly, var: usize) -> BasePoly {
    univariate_coeffs(f, var)
        .pop()
        .expect("nonempty coefficient list")
}

/// Pseudo-remainder of `a` by `b` in `var`: the remainder of `lc(b)^(k) * a`
/// under univariate division, which needs no coefficient-ring division.
fn pseudo_rem(a: &BasePoly, b: &BasePoly, var: usize) -> BasePoly {
    let db = b.degree_in(var);
    let lb = leading_coeff_in(b, var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = leading_coeff_in(&r, var);
        // lb * r - lr * x^(dr-db) * b kills the leading term in var.
        r = r.mul(&lb).sub(&var_pow(&b.mul(&lr), var, dr - db));
    }
    r
}

/// Gcd of two polynomials that are primitive with respect to `var`, via the
/// primitive PRS (every remainder is replaced by its primitive part, so
/// coefficients stay small enough for the sizes this crate handles).
fn primitive_prs_gcd(pa: &BasePoly, pb: &BasePoly, var: usize) -> BasePoly {
    let (mut f, mut g) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa.clone(), pb.clone())
    } else {
        (pb.clone(), pa.clone())
    };
    loop {
        if g.is_zero() {
            return primitive_in(&f, var);
        }
        if g.degree_in(var) == 0 {
            // A nonzero remainder free of var: primitive inputs are coprime
            // in var, so only an integer gcd could remain - and primitivity
            // bounds it through the full content.
            let cf = full_content(&f);
            let cg = full_content(&g);
            return gcd(&cf, &cg);
        }
        let r = pseudo_rem(&f, &g, var);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            primitive_in(&r, var)
        };
    }
}

/// Primitive part with respect to `var`.
fn primitive_in(f: &BasePoly, var: usize) -> BasePoly {
    let c = content_in(f, var);
    exact_divide(f, &c).expect("content divides")
}

/// Content over all variables: gcd of `f` with the recursion bottoming out in
/// the integers.
fn full_content(f: &BasePoly) -> BasePoly {
    if f.is_constant() {
        let c: BigInt = f.constant_value().unwrap();
        return BasePoly::constant(f.vars(), if c.is_zero() { BigInt::zero() } else { c });
    }
    let nvars = f.vars().len();
    let mut acc = f.clone();
    for var in 0..nvars {
        if acc.degree_in(var) > 0 {
            acc = content_in(&acc, var);
        }
        if acc.is_constant() {
            break;
        }
    }
    if acc.is_constant() {
        acc
    } else {
        BasePoly::constant(f.vars(), BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, VarSet};

    fn p(s: &str) -> BasePoly {
        let vars = VarSet::new(["X", "Y"]);
        parse_poly(&vars, s).unwrap()
    }

    #[test]
    fn univariate_cases() {
        assert_eq!(gcd(&p("X^2 - 1"), &p("X - 1")), p("X - 1"));
        assert_eq!(gcd(&p("6*X"), &p("4*X^2")), p("2*X"));
        assert_eq!(gcd(&p("X^3 + 9"), &p("Y^3 + 9")), p("1"));
    }

    #[test]
    fn sign_normalization() {
        assert_eq!(gcd(&p("-X - 1"), &p("-X^2 - 2*X - 1")), p("X + 1"));
        assert_eq!(gcd(&p("0"), &p("-3*X")), p("3*X"));
    }

    #[test]
    fn common_factor_multivariate() {
        let c = p("X*Y + 1");
        let a = c.mul(&p("X^2 + Y"));
        let b = c.mul(&p("Y^3 - 2"));
        assert_eq!(gcd(&a, &b), c);
    }

    #[test]
    fn integer_gcd() {
        assert_eq!(gcd(&p("6"), &p("15")), p("3"));
        assert_eq!(gcd(&p("4"), &p("2*X + 2")), p("2"));
    }

    #[test]
    #[should_panic(expected = "undefined")]
    fn both_zero_panics() {
        let _ = gcd(&p("0"), &p("0"));
    }

    #[test]
    fn divides_both_inputs() {
        let a = p("X^4*Y - 3*X + Y^2").mul(&p("2*X - Y"));
        let b = p("X + 5*Y^3").mul(&p("2*X - Y"));
        let g = gcd(&a, &b);
        assert!(exact_divide(&a, &g).is_some());
        assert!(exact_divide(&b, &g).is_some());
    }
}
