//! Independent membership certification: an element of the fraction field is
//! in the closure iff the characteristic polynomial of multiplication by it
//! (on the normal-form basis) has denominator-free coefficients. This is the
//! designated cross-check for the basis reduction: soundness because a monic
//! annihilator over the base ring certifies integrality, completeness because
//! the base ring is integrally closed, so the minimal polynomial of an
//! integral element - of which the characteristic polynomial is a power -
//! already has coefficients there.
//!
//! All arithmetic tracks (numerator, p-power) pairs; denominators are always
//! pure p-powers, so no rational-function arithmetic is needed. The
//! characteristic polynomial is computed division-free (Berkowitz) after
//! clearing denominators.

use crate::closure::{ClosureElement, VBasis};
use crate::ring::BasePoly;
use crate::tower::{ExpVec, TowerCtx, TowerElement};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// Strip p-powers from a (numerator, exponent) pair.
fn canonical_entry(num: BasePoly, mut k: u32, p: u32) -> (BasePoly, u32) {
    if num.is_zero() {
        return (num, 0);
    }
    let pz = BigInt::from(p);
    let mut num = num;
    while k > 0 && num.divisible_by_int(&pz) {
        num = num.div_exact_int(&pz);
        k -= 1;
    }
    (num, k)
}

/// Matrix of multiplication by a field element on the normal-form monomial
/// basis; entries are `num / p^k` pairs with minimal `k`.
#[derive(Debug, Clone)]
pub struct MulMatrix {
    p: u32,
    dim: usize,
    entries: Vec<(BasePoly, u32)>, // row-major
}

impl MulMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &(BasePoly, u32) {
        &self.entries[row * self.dim + col]
    }

    /// Trace as a canonical (numerator, p-power) pair.
    pub fn trace(&self) -> (BasePoly, u32) {
        let kmax = (0..self.dim).map(|i| self.entry(i, i).1).max().unwrap_or(0);
        let pz = BigInt::from(self.p);
        let mut acc = None;
        for i in 0..self.dim {
            let (num, k) = self.entry(i, i);
            let scaled = num.mul_int(&pz.pow(kmax - k));
            acc = Some(match acc {
                None => scaled,
                Some(a) => BasePoly::add(&a, &scaled),
            });
        }
        canonical_entry(acc.expect("nonempty matrix"), kmax, self.p)
    }
}

/// The matrix of `y -> xi * y` on the standard monomial basis (canonical
/// exponent order). Denominators are pure p-powers since `xi = p^-k * a`.
pub fn multiplication_matrix(ctx: &TowerCtx, xi: &ClosureElement) -> MulMatrix {
    let monomials = ctx.exp_vectors();
    let dim = monomials.len();
    let row_of: BTreeMap<ExpVec, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let zero = BasePoly::zero(ctx.vars());
    let mut entries = vec![(zero.clone(), 0u32); dim * dim];
    for (col, m) in monomials.iter().enumerate() {
        let basis_elem = TowerElement::monomial(ctx, m.clone(), BasePoly::one(ctx.vars()));
        let prod = xi.num().mul(&basis_elem);
        for (e, c) in prod.coords() {
            let row = row_of[e];
            entries[row * dim + col] = canonical_entry(c.clone(), xi.k(), ctx.p());
        }
    }
    MulMatrix {
        p: ctx.p(),
        dim,
        entries,
    }
}

/// Monic characteristic polynomial with (numerator, p-power) coefficients;
/// index = power of the indeterminate.
#[derive(Debug, Clone)]
pub struct CharPoly {
    pub coeffs: Vec<(BasePoly, u32)>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True iff every coefficient is denominator-free.
    pub fn denominator_free(&self) -> bool {
        self.coeffs.iter().all(|(_, k)| *k == 0)
    }

    /// Evaluate at a field element through exact closure arithmetic.
    pub fn eval(&self, ctx: &TowerCtx, xi: &ClosureElement) -> ClosureElement {
        let mut acc = ClosureElement::zero(ctx);
        for (num, k) in self.coeffs.iter().rev() {
            let c = ClosureElement::new(*k, TowerElement::scalar(ctx, num.clone()));
            acc = acc.mul(xi).add(&c);
        }
        acc
    }
}

/// Exact characteristic polynomial of the multiplication matrix. Denominators
/// are cleared by the maximal p-power, the integer-matrix characteristic
/// polynomial is computed by the division-free Berkowitz scheme, and the
/// substitution `T -> p^K T` is undone coefficient by coefficient, so every
/// intermediate denominator stays a pure p-power.
pub fn charpoly(m: &MulMatrix) -> CharPoly {
    let n = m.dim;
    let p = m.p;
    let pz = BigInt::from(p);
    let kmax = m.entries.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let vars = m.entries[0].0.vars().clone();
    let cleared: Vec<BasePoly> = m
        .entries
        .iter()
        .map(|(num, k)| num.mul_int(&pz.pow(kmax - k)))
        .collect();
    let monic = berkowitz(n, &vars, |i, j| &cleared[i * n + j]);
    // monic[power]: char of the cleared matrix; undo the scaling
    let coeffs = monic
        .into_iter()
        .enumerate()
        .map(|(power, c)| canonical_entry(c, kmax * (n as u32 - power as u32), p))
        .collect();
    CharPoly { coeffs }
}

/// Division-free characteristic polynomial of an `n x n` matrix over the
/// polynomial ring; returns coefficients indexed by power (monic, length
/// n + 1) of `det(T*I - A)`.
fn berkowitz<'a, F>(n: usize, vars: &std::sync::Arc<crate::ring::VarSet>, a: F) -> Vec<BasePoly>
where
    F: Fn(usize, usize) -> &'a BasePoly,
{
    assert!(n > 0);
    let one = BasePoly::one(vars);

    // Column vector c_j = [1, -a_jj, -(S M^0 R), -(S M^1 R), ..] of length
    // n - j + 1, where M, R, S come from the trailing block at position j.
    let column = |j: usize| -> Vec<BasePoly> {
        let mut c = Vec::with_capacity(n - j + 1);
        c.push(one.clone());
        c.push(a(j, j).neg());
        let size = n - j - 1;
        if size > 0 {
            // w starts as the column below the pivot
            let mut w: Vec<BasePoly> = (0..size).map(|t| a(j + 1 + t, j).clone()).collect();
            for step in 0..size {
                // dot of the pivot row with w
                let mut dot = BasePoly::zero(vars);
                for t in 0..size {
                    dot = dot.add(&a(j, j + 1 + t).mul(&w[t]));
                }
                c.push(dot.neg());
                if step + 1 < size {
                    let mut next = vec![BasePoly::zero(vars); size];
                    for u in 0..size {
                        for t in 0..size {
                            next[u] = next[u].add(&a(j + 1 + u, j + 1 + t).mul(&w[t]));
                        }
                    }
                    w = next;
                }
            }
        }
        c
    };

    // Fold the Toeplitz products from the trailing block outwards.
    let mut v = column(n - 1);
    for j in (0..n - 1).rev() {
        let c = column(j);
        let mut next = vec![BasePoly::zero(vars); v.len() + 1];
        for (u, slot) in next.iter_mut().enumerate() {
            for (t, vt) in v.iter().enumerate() {
                if u >= t && u - t < c.len() {
                    *slot = slot.add(&c[u - t].mul(vt));
                }
            }
        }
        v = next;
    }
    debug_assert_eq!(v.len(), n + 1);
    // v[i] is the coefficient of T^(n-i)
    let mut coeffs = vec![BasePoly::zero(vars); n + 1];
    for (i, c) in v.into_iter().enumerate() {
        coeffs[n - i] = c;
    }
    coeffs
}

/// Integrality over the base ring: every characteristic-polynomial
/// coefficient must be denominator-free.
pub fn is_integral(ctx: &TowerCtx, xi: &ClosureElement) -> bool {
    charpoly(&multiplication_matrix(ctx, xi)).denominator_free()
}

// ---------------------------------------------------------------------------
// differential cross-check

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub index: usize,
    pub element: String,
    pub reduces: bool,
    pub integral: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub total: usize,
    pub designated: usize,
    pub integral_count: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "samples: {} ({} designated), integral on both sides: {}",
            self.total, self.designated, self.integral_count
        )?;
        if self.disagreements.is_empty() {
            write!(f, "disagreements: 0")
        } else {
            writeln!(f, "disagreements: {}", self.disagreements.len())?;
            for d in &self.disagreements {
                writeln!(
                    f,
                    "  sample {}: reduces = {}, integral = {}: {} ({})",
                    d.index, d.reduces, d.integral, d.element, d.detail
                )?;
            }
            Ok(())
        }
    }
}

/// A random field element `p^-k * a` with `k <= dims + 1` and `a` a sparse
/// combination of normal-form monomials with small polynomial coefficients.
pub fn random_element(ctx: &TowerCtx, rng: &mut ChaCha12Rng) -> ClosureElement {
    let dims = ctx.dims();
    let p = ctx.p();
    let k = rng.random_range(0..=(dims as u32 + 1));
    let ncoords = rng.random_range(1..=3usize);
    let nvars = ctx.vars().len();
    let mut coords = Vec::new();
    for _ in 0..ncoords {
        let exps: Vec<u8> = (0..dims).map(|_| rng.random_range(0..p) as u8).collect();
        let nterms = rng.random_range(1..=2usize);
        let mut poly = BasePoly::zero(ctx.vars());
        for _ in 0..nterms {
            let mexp: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=2u32)).collect();
            let mut c: i64 = rng.random_range(1..=9);
            if rng.random_range(0..2) == 1 {
                c = -c;
            }
            let term = BasePoly::from_terms(
                ctx.vars(),
                [(crate::ring::Monomial::from_exps(mexp), BigInt::from(c))],
            );
            poly = poly.add(&term);
        }
        coords.push((ExpVec::new(exps), poly));
    }
    ClosureElement::new(
        k,
        TowerElement::from_coords(ctx, crate::tower::BasisFlag::Standard, coords),
    )
}

/// Differential test of the closure basis against the characteristic
/// polynomial oracle: on every sample, basis reduction succeeds iff the
/// charpoly is denominator-free. Designated elements are checked first,
/// then `samples` random ones drawn from the seeded generator. Samples are
/// evaluated concurrently; the report order is fixed by sample index.
pub fn membership_crosscheck(
    ctx: &TowerCtx,
    basis: &VBasis,
    samples: usize,
    seed: u64,
    designated: &[ClosureElement],
) -> CrosscheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut elems: Vec<ClosureElement> = designated.to_vec();
    for _ in 0..samples {
        elems.push(random_element(ctx, &mut rng));
    }
    let results: Vec<(bool, bool, String, String)> = elems
        .par_iter()
        .map(|xi| {
            let reduce_outcome = basis.reduce(ctx, xi);
            let reduces = reduce_outcome.is_ok();
            let integral = is_integral(ctx, xi);
            let detail = match reduce_outcome {
                Ok(_) => String::new(),
                Err(w) => w.to_string(),
            };
            (reduces, integral, xi.to_string(), detail)
        })
        .collect();
    let mut report = CrosscheckReport {
        total: results.len(),
        designated: designated.len(),
        integral_count: 0,
        disagreements: Vec::new(),
    };
    for (index, (reduces, integral, element, detail)) in results.into_iter().enumerate() {
        if reduces && integral {
            report.integral_count += 1;
        }
        if reduces != integral {
            report.disagreements.push(Disagreement {
                index,
                element,
                reduces,
                integral,
                detail,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{build_v_basis, tau};
    use crate::ring::{parse_poly, VarSet};
    use crate::tower::{make_tower, RadicandSpec, TowerSpec};

    fn ctx_r1() -> TowerCtx {
        let vars = VarSet::new(["X"]);
        make_tower(&TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec::new(parse_poly(&vars, "X^3 + 9").unwrap(), 1)],
            disjoint_block: vec![],
        })
        .unwrap()
    }

    #[test]
    fn identity_matrix_charpoly() {
        let ctx = ctx_r1();
        let one = ClosureElement::one(&ctx);
        let m = multiplication_matrix(&ctx, &one);
        assert_eq!(m.dim(), 3);
        let cp = charpoly(&m);
        // (T - 1)^3 = T^3 - 3T^2 + 3T - 1
        let vals: Vec<String> = cp
            .coeffs
            .iter()
            .map(|(num, k)| format!("{num}/{k}"))
            .collect();
        assert_eq!(vals, vec!["-1/0", "3/0", "-3/0", "1/0"]);
    }

    #[test]
    fn companion_charpoly() {
        let ctx = ctx_r1();
        let w = ClosureElement::from_tower(TowerElement::generator(&ctx, 0));
        let m = multiplication_matrix(&ctx, &w);
        // companion shape: subdiagonal ones, f in the upper-right corner
        assert!(m.entry(1, 0).0.is_one());
        assert!(m.entry(2, 1).0.is_one());
        assert_eq!(m.entry(0, 2).0.to_string(), "X^3 + 9");
        assert!(m.entry(0, 0).0.is_zero());
        let cp = charpoly(&m);
        // T^3 - f
        assert_eq!(cp.coeffs[3].0.to_string(), "1");
        assert!(cp.coeffs[2].0.is_zero());
        assert!(cp.coeffs[1].0.is_zero());
        assert_eq!(cp.coeffs[0].0.to_string(), "-X^3 - 9");
        assert!(cp.denominator_free());
    }

    #[test]
    fn tau_matrix_trace_and_integrality() {
        let ctx = ctx_r1();
        let t = tau(&ctx, 0);
        let m = multiplication_matrix(&ctx, &t);
        let (tr, k) = m.trace();
        assert_eq!(k, 0);
        assert_eq!(tr.to_string(), "X^2");
        assert!(is_integral(&ctx, &t));
    }

    #[test]
    fn eta_is_integral() {
        let vars = VarSet::new(["X", "Y"]);
        let ctx = make_tower(&TowerSpec {
            p: 3,
            radicands: vec![
                RadicandSpec::new(parse_poly(&vars, "X^3 + 9").unwrap(), 1),
                RadicandSpec::new(parse_poly(&vars, "Y^3 + 9").unwrap(), 1),
            ],
            disjoint_block: vec![],
        })
        .unwrap();
        let e = crate::closure::eta(&ctx, 0, 1).unwrap();
        assert!(is_integral(&ctx, &e));
    }

    #[test]
    fn third_is_not_integral() {
        let ctx = ctx_r1();
        let third = ClosureElement::new(1, TowerElement::one(&ctx));
        assert!(!is_integral(&ctx, &third));
    }

    #[test]
    fn cayley_hamilton() {
        let ctx = ctx_r1();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..5 {
            let xi = random_element(&ctx, &mut rng);
            let cp = charpoly(&multiplication_matrix(&ctx, &xi));
            assert!(cp.eval(&ctx, &xi).is_zero());
        }
    }

    #[test]
    fn crosscheck_small() {
        let ctx = ctx_r1();
        let basis = build_v_basis(&ctx);
        let mut designated = vec![
            ClosureElement::new(1, TowerElement::one(&ctx)),
            tau(&ctx, 0),
        ];
        for i in 0..basis.len() {
            let coords = crate::closure::VCoords::unit(&ctx, &basis, i);
            designated.push(basis.to_closure_element(&ctx, &coords));
        }
        let report = membership_crosscheck(&ctx, &basis, 25, 42, &designated);
        assert!(report.passed(), "{report}");
        assert!(report.integral_count >= basis.len());
    }
}
