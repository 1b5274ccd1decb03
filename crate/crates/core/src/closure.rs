//! The explicit integral closure: the p-power-scaled shifted-monomial basis,
//! exact reduction of fraction-field elements onto it, ring-closure
//! verification, and every integrality identity certificate.
//!
//! Elements of the fraction field are written `p^-k * a` with `a` in the
//! tower algebra; scaled shifted monomials `p^-k(m) * m` with
//! `k(m) = floor(deg(m) / (p-1))` (degree over the radicand part only) form a
//! free module basis of the closure, and membership is a coordinate-wise
//! p-power divisibility test.

use crate::ring::BasePoly;
use crate::tower::{BasisFlag, ExpVec, TowerCtx, TowerElement};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("eta requires two distinct radicand indices i < j, got ({i}, {j})")]
    EtaIndices { i: usize, j: usize },
    #[error("eta is defined for p >= 3")]
    EtaRequiresOddP,
    #[error("eta({i},{j}) failed its integral equation under the tau reading")]
    EtaEquationFailed { i: usize, j: usize },
    #[error("unit degree d of radicand {index} is divisible by p")]
    PDividesUnitDegree { index: usize },

}

// ---------------------------------------------------------------------------
// elements with p-power denominators

/// `p^-k * num` with `num` in the tower algebra (standard basis). Canonical
/// form has minimal `k`: `p` does not divide `num` unless `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureElement {
    k: u32,
    num: TowerElement,
}

impl ClosureElement {
    pub fn new(k: u32, num: TowerElement) -> ClosureElement {
        let num = num.change_basis(BasisFlag::Standard);
        let mut out = ClosureElement { k, num };
        out.canonicalize();
        out
    }

    pub fn from_tower(num: TowerElement) -> ClosureElement {
        ClosureElement::new(0, num)
    }

    pub fn zero(ctx: &TowerCtx) -> ClosureElement {
        ClosureElement {
            k: 0,
            num: TowerElement::zero(ctx),
        }
    }

    pub fn one(ctx: &TowerCtx) -> ClosureElement {
        ClosureElement {
            k: 0,
            num: TowerElement::one(ctx),
        }
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        let p = BigInt::from(self.num.ctx().p());
        while self.k > 0 && self.num.divisible_by_int(&p) {
            self.num = self.num.div_exact_int(&p);
            self.k -= 1;
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num(&self) -> &TowerElement {
        &self.num
    }

    pub fn ctx(&self) -> &TowerCtx {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &ClosureElement) -> ClosureElement {
        let p = BigInt::from(self.ctx().p());
        let k = self.k.max(other.k);
        let a = self.num.mul_int(&p.pow(k - self.k));
        let b = other.num.mul_int(&p.pow(k - other.k));
        ClosureElement::new(k, a.add(&b))
    }

    pub fn neg(&self) -> ClosureElement {
        ClosureElement {
            k: self.k,
            num: self.num.neg(),
        }
    }

    pub fn sub(&self, other: &ClosureElement) -> ClosureElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ClosureElement) -> ClosureElement {
        ClosureElement::new(self.k + other.k, self.num.mul(&other.num))
    }

    pub fn mul_tower(&self, t: &TowerElement) -> ClosureElement {
        ClosureElement::new(self.k, self.num.mul(t))
    }

    pub fn mul_scalar(&self, c: &BasePoly) -> ClosureElement {
        ClosureElement::new(self.k, self.num.mul_scalar(c))
    }

    pub fn mul_int(&self, c: &BigInt) -> ClosureElement {
        ClosureElement::new(self.k, self.num.mul_int(c))
    }

    pub fn pow(&self, e: u32) -> ClosureElement {
        let mut acc = ClosureElement::one(self.ctx());
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
}

impl fmt::Display for ClosureElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}^-{} * ({})", self.ctx().p(), self.k, self.num)
        }
    }
}

// ---------------------------------------------------------------------------
// the correction polynomial C'

/// The exact quotient `C'(W) = ((W^p - h^p) - (W - h)^p) / (p (W - h))`,
/// stored by its W-coefficients, together with its image in the tower.
/// Two invariants are checked at construction: the defining product identity
/// and the congruence `C'(h) = h^(p-1) mod p`.
#[derive(Debug, Clone)]
pub struct CPrime {
    pub owner: usize,
    /// Coefficient of `W^j` at index `j`; degree at most `p - 2`.
    pub coeffs: Vec<BasePoly>,
    /// `C'` with `W` sent to the owner's generator.
    pub image: TowerElement,
}

/// Coefficients of `C'` for a given `h` (which may be any polynomial,
/// including a plain variable playing the role of a symbol). Panics if the
/// construction identities fail, which would mean arithmetic is broken.
pub fn c_prime_coeffs(h: &BasePoly, p: u32) -> Vec<BasePoly> {
    assert!(p >= 3, "C' is defined for p >= 3");
    let vars = h.vars();
    let zero = BasePoly::zero(vars);

    // D(W) = (W^p - h^p) - (W - h)^p, degree p - 1
    let binom = binomial_row(p);
    let mut d = vec![zero.clone(); p as usize + 1];
    d[p as usize] = d[p as usize].add(&BasePoly::one(vars));
    d[0] = d[0].sub(&h.pow(p));
    let minus_h = h.neg();
    for m in 0..=(p as usize) {
        // subtract C(p,m) * (-h)^(p-m) * W^m
        let term = minus_h.pow(p - m as u32).mul_int(&binom[m]);
        d[m] = d[m].sub(&term);
    }
    debug_assert!(d[p as usize].is_zero());

    // synthetic division by (W - h); remainder must vanish
    let deg = p as usize - 1;
    let mut q = vec![zero.clone(); deg];
    let mut carry = d[deg].clone();
    for m in (1..=deg).rev() {
        q[m - 1] = carry.clone();
        carry = d[m - 1].add(&carry.mul(h));
    }
    assert!(carry.is_zero(), "W - h must divide (W^p - h^p) - (W - h)^p");

    // divide by p
    let pz = BigInt::from(p);
    let coeffs: Vec<BasePoly> = q.iter().map(|c| c.div_exact_int(&pz)).collect();

    // invariant: p (W - h) C' = D, re-multiplied
    let mut recon = vec![zero.clone(); coeffs.len() + 1];
    for (j, c) in coeffs.iter().enumerate() {
        let cp = c.mul_int(&pz);
        recon[j + 1] = recon[j + 1].add(&cp);
        recon[j] = recon[j].sub(&cp.mul(h));
    }
    for (j, c) in recon.iter().enumerate() {
        assert_eq!(c, &d[j], "product identity for C' failed at W^{j}");
    }

    // invariant: C'(h) = h^(p-1) mod p
    let at_h = upoly_eval(&coeffs, h);
    assert!(
        at_h.sub(&h.pow(p - 1)).mod_p(p).is_zero(),
        "C'(h) must be congruent to h^(p-1) mod p"
    );

    coeffs
}

/// Evaluate a W-coefficient vector at a base polynomial (Horner).
fn upoly_eval(coeffs: &[BasePoly], at: &BasePoly) -> BasePoly {
    let mut acc = BasePoly::zero(at.vars());
    for c in coeffs.iter().rev() {
        acc = acc.mul(at).add(c);
    }
    acc
}

fn binomial_row(p: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1); p as usize + 1];
    for m in 1..=(p as usize) {
        // C(p, m) = C(p, m-1) * (p - m + 1) / m
        row[m] = &row[m - 1] * BigInt::from(p - m as u32 + 1) / BigInt::from(m as u32);
    }
    row
}

/// Build and verify the correction certificate for radicand `i`; `p >= 3`.
pub fn c_prime(ctx: &TowerCtx, i: usize) -> CPrime {
    assert!(ctx.p() >= 3, "C' is defined for p >= 3");
    let coeffs = c_prime_coeffs(&ctx.radicand(i).h, ctx.p());
    let image = TowerElement::from_coords(
        ctx,
        BasisFlag::Standard,
        coeffs.iter().enumerate().map(|(j, c)| {
            let mut e = vec![0u8; ctx.dims()];
            e[i] = j as u8;
            (ExpVec::new(e), c.clone())
        }),
    );
    CPrime {
        owner: i,
        coeffs,
        image,
    }
}

// ---------------------------------------------------------------------------
// the correction element tau

/// `tau_i = p^-1 * sum_j w_i^j h_i^(p-1-j)`; the identity
/// `(w_i - h_i) * tau_i = p * g_i` is verified on construction.
pub fn tau(ctx: &TowerCtx, i: usize) -> ClosureElement {
    let p = ctx.p();
    let rad = ctx.radicand(i);
    let num = TowerElement::from_coords(
        ctx,
        BasisFlag::Standard,
        (0..p).map(|j| {
            let mut e = vec![0u8; ctx.dims()];
            e[i] = j as u8;
            (ExpVec::new(e), rad.h.pow(p - 1 - j))
        }),
    );
    // (w - h) * num = w^p - h^p = p^2 g
    let w = TowerElement::generator(ctx, i);
    let shifted_gen = w.sub(&TowerElement::scalar(ctx, rad.h.clone()));
    let p2g = TowerElement::scalar(
        ctx,
        rad.g.mul_int(&(BigInt::from(p) * BigInt::from(p))),
    );
    assert_eq!(
        shifted_gen.mul(&num),
        p2g,
        "(w - h) * (w^(p-1) + .. + h^(p-1)) must equal p^2 g"
    );
    ClosureElement::new(1, num)
}

/// The cross term `eta_ij = p^-1 (w_i - h_i)^(p-2) (w_j - h_j)` for `i < j`,
/// verified against its integral equation
/// `X^(p-1) - (tau_i - c'_i)^(p-2) (tau_j - c'_j)`.
pub fn eta(ctx: &TowerCtx, i: usize, j: usize) -> Result<ClosureElement, ClosureError> {
    if ctx.p() < 3 {
        return Err(ClosureError::EtaRequiresOddP);
    }
    if i >= j || j >= ctx.num_radicands() {
        return Err(ClosureError::EtaIndices { i, j });
    }
    let p = ctx.p();
    let shifted = |idx: usize| {
        TowerElement::generator(ctx, idx)
            .sub(&TowerElement::scalar(ctx, ctx.radicand(idx).h.clone()))
    };
    let num = shifted(i).pow(p - 2).mul(&shifted(j));
    let eta = ClosureElement::new(1, num);

    let tci = tau(ctx, i).sub(&ClosureElement::from_tower(c_prime(ctx, i).image));
    let tcj = tau(ctx, j).sub(&ClosureElement::from_tower(c_prime(ctx, j).image));
    let lhs = eta.pow(p - 1);
    let rhs = tci.pow(p - 2).mul(&tcj);
    if lhs != rhs {
        return Err(ClosureError::EtaEquationFailed { i, j });
    }
    Ok(eta)
}

// ---------------------------------------------------------------------------
// the basis

/// One basis entry: `p^-k * prod (w_i - h_i)^(j_i) * prod z_l^(e_l)` encoded
/// by the exponent vector and the denominator exponent `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VEntry {
    pub k: u32,
    pub exps: ExpVec,
}

/// The ordered closure basis; entries in the canonical exponent order.
#[derive(Debug, Clone)]
pub struct VBasis {
    entries: Vec<VEntry>,
    index: BTreeMap<ExpVec, usize>,
}

/// Denominator exponent of a shifted monomial: the exponent sum over the
/// radicand part, divided by `p - 1` (rounded down).
pub fn layer_of(ctx: &TowerCtx, exps: &ExpVec) -> u32 {
    exps.degree_front(ctx.num_radicands()) / (ctx.p() - 1)
}

/// All `p^(r+t)` entries with their denominator exponents, in canonical
/// (graded) order.
pub fn build_v_basis(ctx: &TowerCtx) -> VBasis {
    let entries: Vec<VEntry> = ctx
        .exp_vectors()
        .into_iter()
        .map(|exps| VEntry {
            k: layer_of(ctx, &exps),
            exps,
        })
        .collect();
    VBasis::from_entries(entries)
}

/// A coordinate vector over a `VBasis`; coefficients always lie in the base
/// ring, never in its fraction field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VCoords {
    pub coeffs: Vec<BasePoly>,
}

impl VCoords {
    pub fn unit(ctx: &TowerCtx, basis: &VBasis, pos: usize) -> VCoords {
        let mut coeffs = vec![BasePoly::zero(ctx.vars()); basis.len()];
        coeffs[pos] = BasePoly::one(ctx.vars());
        VCoords { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(BasePoly::is_zero)
    }
}

/// Reduction failure: the first (in canonical order) shifted monomial whose
/// coefficient is not divisible by the required p-power, or which has no
/// basis entry at all.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("not in the module: monomial with exponents {exps:?} has residual coefficient {residual}")]
pub struct NotInModule {
    pub exps: ExpVec,
    pub residual: BasePoly,
}

impl VBasis {
    pub fn from_entries(entries: Vec<VEntry>) -> VBasis {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.exps.clone(), i))
            .collect();
        VBasis { entries, index }
    }

    pub fn entries(&self) -> &[VEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, exps: &ExpVec) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Entry count per denominator exponent `k = 0, 1, ..`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let kmax = self.entries.iter().map(|e| e.k).max().unwrap_or(0) as usize;
        let mut sizes = vec![0usize; kmax + 1];
        for e in &self.entries {
            sizes[e.k as usize] += 1;
        }
        sizes
    }

    /// Remove one entry (negative-control tests corrupt the basis this way).
    pub fn without_entry(&self, pos: usize) -> VBasis {
        let mut entries = self.entries.clone();
        entries.remove(pos);
        VBasis::from_entries(entries)
    }

    /// Express `p^-k * a` over this basis: convert the numerator to shifted
    /// coordinates; each coordinate must then absorb the p-power difference
    /// between `k` and the entry's layer. Fails with the first offending
    /// monomial in canonical order.
    pub fn reduce(&self, ctx: &TowerCtx, x: &ClosureElement) -> Result<VCoords, NotInModule> {
        let shifted = x.num().change_basis(BasisFlag::Shifted);
        let p = BigInt::from(ctx.p());
        let mut coeffs = vec![BasePoly::zero(ctx.vars()); self.entries.len()];
        for (e, s) in shifted.coords() {
            let pos = match self.position(e) {
                Some(pos) => pos,
                None => {
                    return Err(NotInModule {
                        exps: e.clone(),
                        residual: s.clone(),
                    })
                }
            };
            let km = self.entries[pos].k;
            let xk = x.k();
            if xk > km {
                let pw = p.pow(xk - km);
                if !s.divisible_by_int(&pw) {
                    return Err(NotInModule {
                        exps: e.clone(),
                        residual: s.clone(),
                    });
                }
                coeffs[pos] = s.div_exact_int(&pw);
            } else {
                coeffs[pos] = s.mul_int(&p.pow(km - xk));
            }
        }
        Ok(VCoords { coeffs })
    }

    /// Rebuild the field element a coordinate vector denotes.
    pub fn to_closure_element(&self, ctx: &TowerCtx, coords: &VCoords) -> ClosureElement {
        assert_eq!(coords.coeffs.len(), self.entries.len());
        let kmax = self.entries.iter().map(|e| e.k).max().unwrap_or(0);
        let p = BigInt::from(ctx.p());
        let num = TowerElement::from_coords(
            ctx,
            BasisFlag::Shifted,
            self.entries.iter().zip(&coords.coeffs).map(|(e, c)| {
                (e.exps.clone(), c.mul_int(&p.pow(kmax - e.k)))
            }),
        );
        ClosureElement::new(kmax, num)
    }

    /// One line per entry in the emitted basis file format.
    pub fn render_line(&self, ctx: &TowerCtx, pos: usize) -> String {
        let e = &self.entries[pos];
        let mut out = format!("{}^-{}", ctx.p(), e.k);
        let r = ctx.num_radicands();
        let mut any = false;
        for (i, &x) in e.exps.exps().iter().enumerate() {
            if x == 0 {
                continue;
            }
            any = true;
            if i < r {
                let h = &ctx.radicand(i).h;
                let hs = if h.num_terms() > 1 {
                    format!("({h})")
                } else {
                    format!("{h}")
                };
                out.push_str(&format!(" * (w{} - {})^{}", i + 1, hs, x));
            } else {
                out.push_str(&format!(" * z{}^{}", i - r + 1, x));
            }
        }
        if !any {
            out.push_str(" * 1");
        }
        out
    }

    pub fn render(&self, ctx: &TowerCtx) -> String {
        (0..self.entries.len())
            .map(|i| self.render_line(ctx, i))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Express an element over the canonical basis.
pub fn reduce_to_v(ctx: &TowerCtx, x: &ClosureElement) -> Result<VCoords, NotInModule> {
    build_v_basis(ctx).reduce(ctx, x)
}

/// Multiply two coordinate vectors through tower multiplication and reduce
/// back. On a validated context this never fails; a `NotInModule` outcome is
/// a diagnostic for corrupted bases or violated hypotheses.
pub fn mul_in_r(
    ctx: &TowerCtx,
    basis: &VBasis,
    a: &VCoords,
    b: &VCoords,
) -> Result<VCoords, NotInModule> {
    let ea = basis.to_closure_element(ctx, a);
    let eb = basis.to_closure_element(ctx, b);
    basis.reduce(ctx, &ea.mul(&eb))
}

// ---------------------------------------------------------------------------
// closure verification

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub rank: usize,
    pub products_checked: usize,
    pub product_failures: Vec<(usize, usize, NotInModule)>,
    pub module_checked: usize,
    pub module_failures: Vec<(String, usize, NotInModule)>,
    pub containment_checked: usize,
    pub containment_failures: Vec<(String, NotInModule)>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.product_failures.is_empty()
            && self.module_failures.is_empty()
            && self.containment_failures.is_empty()
    }
}

/// Verify that the canonical basis spans a ring containing the tower algebra.
pub fn verify_closure(ctx: &TowerCtx) -> ClosureReport {
    verify_closure_with(ctx, &build_v_basis(ctx))
}

/// Same, against a caller-supplied (possibly corrupted) basis:
/// (a) every unordered product of basis entries reduces,
/// (b) multiplication by each shifted generator `w_i - h_i` (and each block
///     generator `z_j`) maps every entry back into the module,
/// (c) `1`, every `w_i` and every `z_j` reduce.
pub fn verify_closure_with(ctx: &TowerCtx, basis: &VBasis) -> ClosureReport {
    let n = basis.len();
    let mut report = ClosureReport {
        rank: n,
        products_checked: 0,
        product_failures: Vec::new(),
        module_checked: 0,
        module_failures: Vec::new(),
        containment_checked: 0,
        containment_failures: Vec::new(),
    };

    let entry_elems: Vec<ClosureElement> = (0..n)
        .map(|i| basis.to_closure_element(ctx, &VCoords::unit(ctx, basis, i)))
        .collect();

    for i in 0..n {
        for j in i..n {
            report.products_checked += 1;
            let prod = entry_elems[i].mul(&entry_elems[j]);
            if let Err(w) = basis.reduce(ctx, &prod) {
                report.product_failures.push((i, j, w));
            }
        }
    }

    let r = ctx.num_radicands();
    let mut actions: Vec<(String, TowerElement)> = Vec::new();
    for i in 0..r {
        let shifted = TowerElement::generator(ctx, i)
            .sub(&TowerElement::scalar(ctx, ctx.radicand(i).h.clone()));
        actions.push((format!("w{} - h{}", i + 1, i + 1), shifted));
    }
    for j in 0..ctx.num_block() {
        actions.push((format!("z{}", j + 1), TowerElement::generator(ctx, r + j)));
    }
    for (name, action) in &actions {
        for (pos, elem) in entry_elems.iter().enumerate() {
            report.module_checked += 1;
            if let Err(w) = basis.reduce(ctx, &elem.mul_tower(action)) {
                report.module_failures.push((name.clone(), pos, w));
            }
        }
    }

    let mut contains: Vec<(String, ClosureElement)> = Vec::new();
    contains.push(("1".into(), ClosureElement::one(ctx)));
    for i in 0..ctx.dims() {
        contains.push((
            ctx.gen_name(i),
            ClosureElement::from_tower(TowerElement::generator(ctx, i)),
        ));
    }
    for (name, elem) in &contains {
        report.containment_checked += 1;
        if let Err(w) = basis.reduce(ctx, elem) {
            report.containment_failures.push((name.clone(), w));
        }
    }

    report
}

// ---------------------------------------------------------------------------
// integrality witnesses

#[derive(Debug, Clone)]
pub struct WitnessCheck {
    pub name: String,
    pub ok: bool,
    /// Rendered residual on failure, empty when ok.
    pub residual: String,
}

impl WitnessCheck {
    fn of(name: String, residual: ClosureElement) -> WitnessCheck {
        let ok = residual.is_zero();
        WitnessCheck {
            name,
            ok,
            residual: if ok { String::new() } else { residual.to_string() },
        }
    }

    fn plain(name: String, ok: bool, detail: String) -> WitnessCheck {
        WitnessCheck {
            name,
            ok,
            residual: detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub checks: Vec<WitnessCheck>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Verify, exactly, every integrality identity of the construction:
/// per radicand the annihilators of `tau` (quadratic, linear-in-p, linear-in-
/// (w-h)), the C' congruences, the derived signed p-th power identity
/// `(w-h)^p = p^2 g - p c' (w-h)`, and per pair the eta integral equation.
pub fn integrality_witnesses(ctx: &TowerCtx) -> WitnessReport {
    let p = ctx.p();
    let pz = BigInt::from(p);
    let mut checks = Vec::new();

    for i in 0..ctx.num_radicands() {
        let rad = ctx.radicand(i).clone();
        let label = format!("radicand {}", i + 1);
        let t = tau(ctx, i);
        let w = TowerElement::generator(ctx, i);
        let h_elem = TowerElement::scalar(ctx, rad.h.clone());
        let g_elem = TowerElement::scalar(ctx, rad.g.clone());
        let shifted = w.sub(&h_elem);

        // m(tau) = p*tau - (w^(p-1) + .. + h^(p-1))
        let power_sum = TowerElement::from_coords(
            ctx,
            BasisFlag::Standard,
            (0..p).map(|j| {
                let mut e = vec![0u8; ctx.dims()];
                e[i] = j as u8;
                (ExpVec::new(e), rad.h.pow(p - 1 - j))
            }),
        );
        let m_res = t
            .mul_int(&pz)
            .sub(&ClosureElement::from_tower(power_sum));
        checks.push(WitnessCheck::of(format!("{label}: m(tau) = 0"), m_res));

        // n(tau) = (w - h)*tau - p*g
        let n_res = t
            .mul_tower(&shifted)
            .sub(&ClosureElement::from_tower(g_elem.mul_int(&pz)));
        checks.push(WitnessCheck::of(format!("{label}: n(tau) = 0"), n_res));

        // the same identity in plain tower arithmetic: (w - h) * (p*tau) = p^2 g
        let lhs = shifted.mul(&t.num().clone());
        let rhs = g_elem.mul_int(&(&pz * &pz));
        checks.push(WitnessCheck::plain(
            format!("{label}: (w - h) * tau = p * g"),
            lhs == rhs,
            if lhs == rhs {
                String::new()
            } else {
                format!("{}", ClosureElement::from_tower(lhs.sub(&rhs)))
            },
        ));

        if p >= 3 {
            let cp = c_prime(ctx, i);
            let cp_elem = ClosureElement::from_tower(cp.image.clone());

            // l(tau) = tau^2 - c' tau - g (w - h)^(p-2)
            let l_res = t
                .mul(&t)
                .sub(&cp_elem.mul(&t))
                .sub(&ClosureElement::from_tower(
                    shifted.pow(p - 2).mul(&g_elem),
                ));
            checks.push(WitnessCheck::of(format!("{label}: l(tau) = 0"), l_res));

            // C'(h) = h^(p-1) mod p
            let at_h = upoly_eval(&cp.coeffs, &rad.h);
            let congruent = at_h.sub(&rad.h.pow(p - 1)).mod_p(p).is_zero();
            checks.push(WitnessCheck::plain(
                format!("{label}: C'(h) = h^(p-1) mod p"),
                congruent,
                String::new(),
            ));

            // C'(h) nonzero mod p, given h nonzero mod p
            let h_unit = !rad.h.mod_p(p).is_zero();
            let nonzero = !at_h.mod_p(p).is_zero();
            checks.push(WitnessCheck::plain(
                format!("{label}: C'(h) not = 0 mod p (h not in pS)"),
                h_unit && nonzero,
                String::new(),
            ));

            // derived signed identity: (w - h)^p = p^2 g - p c' (w - h)
            let lhs = shifted.pow(p);
            let rhs = g_elem
                .mul_int(&(&pz * &pz))
                .sub(&cp.image.mul(&shifted).mul_int(&pz));
            checks.push(WitnessCheck::plain(
                format!("{label}: (w - h)^p = p^2 * g - p * C' * (w - h)"),
                lhs == rhs,
                if lhs == rhs {
                    String::new()
                } else {
                    format!("{}", ClosureElement::from_tower(lhs.sub(&rhs)))
                },
            ));
        } else {
            // p = 2: tau = (w + h)/2 satisfies l0(T) = T^2 - h T - g
            let l0_res = t
                .mul(&t)
                .sub(&t.mul_scalar(&rad.h))
                .sub(&ClosureElement::from_tower(g_elem.clone()));
            checks.push(WitnessCheck::of(format!("{label}: l0(tau) = 0"), l0_res));
        }
    }

    if p >= 3 {
        for i in 0..ctx.num_radicands() {
            for j in (i + 1)..ctx.num_radicands() {
                let ok = eta(ctx, i, j).is_ok();
                checks.push(WitnessCheck::plain(
                    format!(
                        "pair ({}, {}): eta integral equation v(eta) = 0",
                        i + 1,
                        j + 1
                    ),
                    ok,
                    String::new(),
                ));
            }
        }
    }

    WitnessReport { checks }
}

// ---------------------------------------------------------------------------
// unit-degree extension

/// The product basis `{v * u1^e1 .. ur^er}` with `u_i^(d_i) = w_i`; total
/// rank `p^(r+t) * prod d_i` over the base ring.
#[derive(Debug, Clone)]
pub struct ExtendedBasis {
    pub degrees: Vec<u32>,
    /// Pairs (index into the underlying `VBasis`, unit-root exponents).
    pub entries: Vec<(usize, Vec<u32>)>,
}

impl ExtendedBasis {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }
}

/// Extend the closure basis by the unit-degree roots `u_i = w_i^(1/d_i)`.
/// Requires `p` not dividing any `d_i` (guaranteed by context validation,
/// re-checked here).
pub fn extend_by_unit_degrees(
    ctx: &TowerCtx,
    basis: &VBasis,
) -> Result<ExtendedBasis, ClosureError> {
    let degrees: Vec<u32> = ctx.radicands().iter().map(|r| r.d).collect();
    for (pos, d) in degrees.iter().enumerate() {
        if *d == 0 || d % ctx.p() == 0 {
            return Err(ClosureError::PDividesUnitDegree { index: pos + 1 });
        }
    }
    let mut entries = Vec::new();
    for base in 0..basis.len() {
        let mut e = vec![0u32; degrees.len()];
        loop {
            entries.push((base, e.clone()));
            let mut i = degrees.len();
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                e[i] += 1;
                if e[i] < degrees[i] {
                    break false;
                }
                e[i] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(ExtendedBasis { degrees, entries })
}

/// Multiply two extended elements `(v, e)` and `(v', e')`: unit exponents add
/// and reduce by `u_i^(d_i) -> w_i`; the closure parts multiply in the tower
/// and reduce over the basis.
pub fn ext_mul(
    ctx: &TowerCtx,
    basis: &VBasis,
    a: (&VCoords, &[u32]),
    b: (&VCoords, &[u32]),
    degrees: &[u32],
) -> Result<(VCoords, Vec<u32>), NotInModule> {
    let mut unit_exps = Vec::with_capacity(degrees.len());
    let mut carry = TowerElement::one(ctx);
    for (i, d) in degrees.iter().enumerate() {
        let e = a.1[i] + b.1[i];
        let q = e / d;
        unit_exps.push(e % d);
        if q > 0 {
            carry = carry.mul(&TowerElement::generator(ctx, i).pow(q));
        }
    }
    let prod = basis
        .to_closure_element(ctx, a.0)
        .mul(&basis.to_closure_element(ctx, b.0))
        .mul_tower(&carry);
    Ok((basis.reduce(ctx, &prod)?, unit_exps))
}

/// Render one extended-basis line: the underlying basis line with
/// `* u<i>^<e>` factors appended.
pub fn render_extended_line(
    ctx: &TowerCtx,
    basis: &VBasis,
    ext: &ExtendedBasis,
    pos: usize,
) -> String {
    let (base, exps) = &ext.entries[pos];
    let mut out = basis.render_line(ctx, *base);
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            out.push_str(&format!(" * u{}^{}", i + 1, e));
        }
    }
    out
}
