//! Normal-form arithmetic in the free algebra `A = S[w1..wr]` with
//! `w_i^p = f_i`, optionally extended by a disjoint residue block
//! `z_j^p = g_j`. Elements are coordinate maps over exponent vectors with all
//! entries below `p`; freeness makes the representation unique.

use crate::ring::{
    is_local_unit, is_pth_power_mod_p2, is_square_free, BasePoly, RadicandCertificate, VarSet,
};
use num_bigint::BigInt;
use num_traits::One;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Upper bound on the normal-form rank `p^(r+t)`; towers beyond this are not
/// enumerable in reasonable time anyway.
const MAX_RANK: u128 = 1 << 20;

/// One radicand of the tower: `f` with its certificate and the unit part `d`
/// of the root degree `n = p*d`.
#[derive(Debug, Clone)]
pub struct RadicandSpec {
    pub f: BasePoly,
    pub d: u32,
    /// Optional caller-supplied certificate; recomputed canonically when
    /// absent, verified exactly when present.
    pub cert: Option<RadicandCertificate>,
}

impl RadicandSpec {
    pub fn new(f: BasePoly, d: u32) -> RadicandSpec {
        RadicandSpec { f, d, cert: None }
    }
}

/// Unvalidated description of a tower; [`make_tower`] checks every hypothesis.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub p: u32,
    pub radicands: Vec<RadicandSpec>,
    /// Square-free elements adjoined by p-th roots, linearly disjoint modulo
    /// p; no certificates apply to these.
    pub disjoint_block: Vec<BasePoly>,
}

/// Validated radicand data frozen inside a context.
#[derive(Debug, Clone)]
pub struct Radicand {
    pub f: BasePoly,
    pub h: BasePoly,
    pub g: BasePoly,
    pub d: u32,
}

#[derive(Debug)]
struct CtxInner {
    p: u32,
    vars: Arc<VarSet>,
    radicands: Vec<Radicand>,
    block: Vec<BasePoly>,
}

/// A validated tower context. Cheap to clone; all operations are pure.
#[derive(Debug, Clone)]
pub struct TowerCtx {
    inner: Arc<CtxInner>,
}

/// A failed tower hypothesis, named; indices are 1-based, matching the
/// report listings.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("p = {0} is not prime")]
    NotPrime(u32),
    #[error("p = {0} exceeds the supported exponent range")]
    PrimeTooLarge(u32),
    #[error("tower must have at least one radicand or block generator")]
    Empty,
    #[error("normal-form rank p^(r+t) exceeds the supported size")]
    TooLarge,
    #[error("radicand {index} is zero")]
    ZeroRadicand { index: usize },
    #[error("radicand {index} is a unit in the local ring (constant term not divisible by p)")]
    UnitRadicand { index: usize },
    #[error("radicand {index} is not a p-th power modulo p^2")]
    NotPthPowerModP2 { index: usize },
    #[error("supplied certificate for radicand {index} does not satisfy f = h^p + p^2*g")]
    BadCertificate { index: usize },
    #[error("radicand {index} is not square-free")]
    NotSquareFree { index: usize },
    #[error("radicand {index} is divisible by p")]
    PDividesRadicand { index: usize },
    #[error("elements {i} and {j} of the joint radicand list are not coprime")]
    NotCoprime { i: usize, j: usize },
    #[error("degree unit part d of radicand {index} is divisible by p (or zero)")]
    PDividesD { index: usize },
    #[error("block generator {index} is zero")]
    ZeroBlockGen { index: usize },
    #[error("block generator {index} is a unit in the local ring")]
    UnitBlockGen { index: usize },
    #[error("block generator {index} is not square-free")]
    NotSquareFreeBlock { index: usize },
    #[error("block generator {index} vanishes modulo p")]
    BlockGenDivisibleByP { index: usize },
    #[error("disjoint block failure: product with exponents {witness:?} is a p-th power modulo p")]
    NotLinearlyDisjoint { witness: Vec<u8> },
    #[error("radicands live in different variable sets")]
    VarMismatch,
}

/// Validate every tower hypothesis by direct computation and freeze a
/// context. The first failed hypothesis is named in the error.
pub fn make_tower(spec: &TowerSpec) -> Result<TowerCtx, TowerError> {
    let p = spec.p;
    if !crate::ring::is_prime(p) {
        return Err(TowerError::NotPrime(p));
    }
    if p > 251 {
        return Err(TowerError::PrimeTooLarge(p));
    }
    if spec.radicands.is_empty() && spec.disjoint_block.is_empty() {
        return Err(TowerError::Empty);
    }
    let vars = match spec.radicands.first().map(|r| r.f.vars()) {
        Some(v) => v.clone(),
        None => spec.disjoint_block[0].vars().clone(),
    };
    for r in &spec.radicands {
        if !r.f.vars().as_ref().eq(vars.as_ref()) {
            return Err(TowerError::VarMismatch);
        }
    }
    for g in &spec.disjoint_block {
        if !g.vars().as_ref().eq(vars.as_ref()) {
            return Err(TowerError::VarMismatch);
        }
    }

    let dims = (spec.radicands.len() + spec.disjoint_block.len()) as u32;
    if (p as u128).pow(dims) > MAX_RANK {
        return Err(TowerError::TooLarge);
    }

    for (index, r) in spec.radicands.iter().enumerate() {
        if r.d == 0 || r.d % p == 0 {
            return Err(TowerError::PDividesD { index: index + 1 });
        }
    }

    let mut radicands = Vec::new();
    for (pos, r) in spec.radicands.iter().enumerate() {
        let index = pos + 1;
        if r.f.is_zero() {
            return Err(TowerError::ZeroRadicand { index });
        }
        if is_local_unit(&r.f, p) {
            return Err(TowerError::UnitRadicand { index });
        }
        let cert = match &r.cert {
            Some(c) => {
                if !c.verifies(&r.f, p) {
                    return Err(TowerError::BadCertificate { index });
                }
                c.clone()
            }
            None => is_pth_power_mod_p2(&r.f, p).ok_or(TowerError::NotPthPowerModP2 { index })?,
        };
        if !is_square_free(&r.f) {
            return Err(TowerError::NotSquareFree { index });
        }
        if r.f.mod_p(p).is_zero() {
            // Forced by square-free + p-wedge-p^2 membership; checked anyway.
            return Err(TowerError::PDividesRadicand { index });
        }
        radicands.push(Radicand {
            f: r.f.clone(),
            h: cert.h,
            g: cert.g,
            d: r.d,
        });
    }

    for (pos, g) in spec.disjoint_block.iter().enumerate() {
        let index = pos + 1;
        if g.is_zero() {
            return Err(TowerError::ZeroBlockGen { index });
        }
        if is_local_unit(g, p) {
            return Err(TowerError::UnitBlockGen { index });
        }
        if g.mod_p(p).is_zero() {
            return Err(TowerError::BlockGenDivisibleByP { index });
        }
    }

    // disjointness first: a residue that is already a p-th power is reported
    // as a disjointness failure (witness a unit vector), not as a
    // square-freeness one
    if !spec.disjoint_block.is_empty() {
        let check = crate::transforms::check_linear_disjointness(&spec.disjoint_block, p)
            .expect("block residues checked nonzero mod p above");
        if let Some(witness) = check.witness {
            return Err(TowerError::NotLinearlyDisjoint { witness });
        }
    }

    for (pos, g) in spec.disjoint_block.iter().enumerate() {
        if !is_square_free(g) {
            return Err(TowerError::NotSquareFreeBlock { index: pos + 1 });
        }
    }

    let joint: Vec<&BasePoly> = spec
        .radicands
        .iter()
        .map(|r| &r.f)
        .chain(spec.disjoint_block.iter())
        .collect();
    for i in 0..joint.len() {
        for j in (i + 1)..joint.len() {
            if !crate::ring::gcd(joint[i], joint[j]).is_one() {
                return Err(TowerError::NotCoprime { i: i + 1, j: j + 1 });
            }
        }
    }

    Ok(TowerCtx {
        inner: Arc::new(CtxInner {
            p,
            vars,
            radicands,
            block: spec.disjoint_block.clone(),
        }),
    })
}

impl TowerCtx {
    /// Construct without validation; for tests of degenerate data only.
    #[doc(hidden)]
    pub fn new_unchecked(
        p: u32,
        vars: Arc<VarSet>,
        radicands: Vec<Radicand>,
        block: Vec<BasePoly>,
    ) -> TowerCtx {
        TowerCtx {
            inner: Arc::new(CtxInner {
                p,
                vars,
                radicands,
                block,
            }),
        }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.inner.vars
    }

    /// Number of certified radicands.
    pub fn num_radicands(&self) -> usize {
        self.inner.radicands.len()
    }

    /// Number of disjoint-block generators.
    pub fn num_block(&self) -> usize {
        self.inner.block.len()
    }

    /// Total generator count `r + t`.
    pub fn dims(&self) -> usize {
        self.num_radicands() + self.num_block()
    }

    /// Normal-form rank `p^(r+t)` over the base ring.
    pub fn rank(&self) -> usize {
        (self.p() as u128).pow(self.dims() as u32) as usize
    }

    pub fn radicand(&self, i: usize) -> &Radicand {
        &self.inner.radicands[i]
    }

    pub fn radicands(&self) -> &[Radicand] {
        &self.inner.radicands
    }

    pub fn block_gen(&self, j: usize) -> &BasePoly {
        &self.inner.block[j]
    }

    pub fn block(&self) -> &[BasePoly] {
        &self.inner.block
    }

    pub fn same_ctx(&self, other: &TowerCtx) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Reduction polynomial for generator `idx`: `f_i` for radicands, `g_j`
    /// for block generators (the image of the generator's p-th power).
    pub fn reducer(&self, idx: usize) -> &BasePoly {
        let r = self.num_radicands();
        if idx < r {
            &self.inner.radicands[idx].f
        } else {
            &self.inner.block[idx - r]
        }
    }

    /// Display name of generator `idx` (`w1..wr`, then `z1..zt`).
    pub fn gen_name(&self, idx: usize) -> String {
        let r = self.num_radicands();
        if idx < r {
            format!("w{}", idx + 1)
        } else {
            format!("z{}", idx - r + 1)
        }
    }

    /// All normal-form exponent vectors in canonical order.
    pub fn exp_vectors(&self) -> Vec<ExpVec> {
        let p = self.p() as u8;
        let dims = self.dims();
        let mut out = Vec::with_capacity(self.rank());
        let mut current = vec![0u8; dims];
        'outer: loop {
            out.push(ExpVec::new(current.clone()));
            let mut i = dims;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                current[i] += 1;
                if current[i] < p {
                    break;
                }
                current[i] = 0;
            }
        }
        out.sort();
        out
    }
}

/// Exponent vector of a normal-form monomial `w1^j1..wr^jr * z1^e1..zt^et`;
/// every entry lies in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(Vec<u8>);

impl ExpVec {
    pub fn new(exps: Vec<u8>) -> ExpVec {
        ExpVec(exps)
    }

    pub fn zero(dims: usize) -> ExpVec {
        ExpVec(vec![0; dims])
    }

    pub fn unit(dims: usize, idx: usize) -> ExpVec {
        let mut e = vec![0; dims];
        e[idx] = 1;
        ExpVec(e)
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Sum of the first `r` entries (the radicand part).
    pub fn degree_front(&self, r: usize) -> u32 {
        self.0[..r].iter().map(|&e| e as u32).sum()
    }
}

// Canonical enumeration order: total degree ascending, ties broken so that
// earlier generators come first ((1,0) before (0,1)).
impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which monomial family the coordinates refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFlag {
    /// Powers of the generators themselves.
    Standard,
    /// Powers of `w_i - h_i` (block generators are never shifted).
    Shifted,
}

/// An element of the tower algebra in normal form.
#[derive(Debug, Clone)]
pub struct TowerElement {
    ctx: TowerCtx,
    basis: BasisFlag,
    coords: BTreeMap<ExpVec, BasePoly>,
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_ctx(&other.ctx) && self.basis == other.basis && self.coords == other.coords
    }
}

impl Eq for TowerElement {}

impl TowerElement {
    pub fn zero(ctx: &TowerCtx) -> TowerElement {
        TowerElement {
            ctx: ctx.clone(),
            basis: BasisFlag::Standard,
            coords: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &TowerCtx) -> TowerElement {
        TowerElement::scalar(ctx, BasePoly::one(ctx.vars()))
    }

    pub fn scalar(ctx: &TowerCtx, c: BasePoly) -> TowerElement {
        TowerElement::monomial(ctx, ExpVec::zero(ctx.dims()), c)
    }

    /// Generator `idx` as an element (`w_i` or `z_j`).
    pub fn generator(ctx: &TowerCtx, idx: usize) -> TowerElement {
        assert!(idx < ctx.dims());
        TowerElement::monomial(ctx, ExpVec::unit(ctx.dims(), idx), BasePoly::one(ctx.vars()))
    }

    /// `c * (normal-form monomial with exponents e)`, in the standard basis.
    pub fn monomial(ctx: &TowerCtx, e: ExpVec, c: BasePoly) -> TowerElement {
        TowerElement::monomial_in(ctx, BasisFlag::Standard, e, c)
    }

    pub fn monomial_in(ctx: &TowerCtx, basis: BasisFlag, e: ExpVec, c: BasePoly) -> TowerElement {
        assert_eq!(e.len(), ctx.dims());
        assert!(e.exps().iter().all(|&x| (x as u32) < ctx.p()));
        assert!(c.vars().as_ref().eq(ctx.vars().as_ref()));
        let mut coords = BTreeMap::new();
        if !c.is_zero() {
            coords.insert(e, c);
        }
        TowerElement {
            ctx: ctx.clone(),
            basis,
            coords,
        }
    }

    pub fn from_coords<I>(ctx: &TowerCtx, basis: BasisFlag, iter: I) -> TowerElement
    where
        I: IntoIterator<Item = (ExpVec, BasePoly)>,
    {
        let mut out = TowerElement {
            ctx: ctx.clone(),
            basis,
            coords: BTreeMap::new(),
        };
        for (e, c) in iter {
            out.accumulate(e, c);
        }
        out
    }

    fn accumulate(&mut self, e: ExpVec, c: BasePoly) {
        assert_eq!(e.len(), self.ctx.dims());
        if c.is_zero() {
            return;
        }
        match self.coords.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn ctx(&self) -> &TowerCtx {
        &self.ctx
    }

    pub fn basis(&self) -> BasisFlag {
        self.basis
    }

    pub fn coords(&self) -> impl Iterator<Item = (&ExpVec, &BasePoly)> {
        self.coords.iter()
    }

    pub fn coeff(&self, e: &ExpVec) -> BasePoly {
        self.coords
            .get(e)
            .cloned()
            .unwrap_or_else(|| BasePoly::zero(self.ctx.vars()))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    fn assert_compatible(&self, other: &TowerElement) {
        assert!(self.ctx.same_ctx(&other.ctx), "tower context mismatch");
        assert!(self.basis == other.basis, "basis flag mismatch");
    }

    pub fn add(&self, other: &TowerElement) -> TowerElement {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.coords {
            out.accumulate(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TowerElement {
        TowerElement {
            ctx: self.ctx.clone(),
            basis: self.basis,
            coords: self
                .coords
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TowerElement) -> TowerElement {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, c: &BasePoly) -> TowerElement {
        if c.is_zero() {
            return TowerElement {
                ctx: self.ctx.clone(),
                basis: self.basis,
                coords: BTreeMap::new(),
            };
        }
        TowerElement {
            ctx: self.ctx.clone(),
            basis: self.basis,
            coords: self
                .coords
                .iter()
                .map(|(e, x)| (e.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn mul_int(&self, c: &BigInt) -> TowerElement {
        self.mul_scalar(&BasePoly::constant(self.ctx.vars(), c.clone()))
    }

    pub fn mul_i64(&self, c: i64) -> TowerElement {
        self.mul_int(&BigInt::from(c))
    }

    /// Exact product with reduction of every generator power below `p`
    /// (`w_i^p -> f_i`, `z_j^p -> g_j`). Both factors must be in the standard
    /// basis; panics on context or basis mismatch.
    pub fn mul(&self, other: &TowerElement) -> TowerElement {
        self.assert_compatible(other);
        assert!(
            self.basis == BasisFlag::Standard,
            "normal-form multiplication requires the standard basis"
        );
        let p = self.ctx.p() as u8;
        let dims = self.ctx.dims();
        let mut out = TowerElement {
            ctx: self.ctx.clone(),
            basis: BasisFlag::Standard,
            coords: BTreeMap::new(),
        };
        for (ea, ca) in &self.coords {
            for (eb, cb) in &other.coords {
                let mut exps = Vec::with_capacity(dims);
                let mut coeff = ca.mul(cb);
                for i in 0..dims {
                    let mut s = ea.exp(i) + eb.exp(i);
                    if s >= p {
                        s -= p;
                        coeff = coeff.mul(self.ctx.reducer(i));
                    }
                    exps.push(s);
                }
                out.accumulate(ExpVec::new(exps), coeff);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> TowerElement {
        let mut acc = TowerElement::one(&self.ctx);
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

    /// True iff `n` divides every coordinate polynomial; by freeness this is
    /// exactly divisibility of the element in the module sense.
    pub fn divisible_by_int(&self, n: &BigInt) -> bool {
        self.coords.values().all(|c| c.divisible_by_int(n))
    }

    pub fn div_exact_int(&self, n: &BigInt) -> TowerElement {
        TowerElement {
            ctx: self.ctx.clone(),
            basis: self.basis,
            coords: self
                .coords
                .iter()
                .map(|(e, c)| (e.clone(), c.div_exact_int(n)))
                .collect(),
        }
    }

    /// Rewrite the same element on the other monomial family via binomial
    /// expansion; round-trip is the identity. Only the radicand coordinates
    /// shift (block generators carry no `h`).
    pub fn change_basis(&self, target: BasisFlag) -> TowerElement {
        if self.basis == target {
            return self.clone();
        }
        let r = self.ctx.num_radicands();
        let mut out = TowerElement {
            ctx: self.ctx.clone(),
            basis: target,
            coords: self.coords.clone(),
        };
        for i in 0..r {
            let h = self.ctx.radicand(i).h.clone();
            let shift = match target {
                BasisFlag::Shifted => h,        // w = (w - h) + h
                BasisFlag::Standard => h.neg(), // w - h = w + (-h)
            };
            out = out.substitute_gen(i, &shift);
        }
        out
    }

    /// Replace generator `i` by (generator + shift) and re-expand; exponents
    /// stay below `p`, so no reduction is involved.
    fn substitute_gen(&self, i: usize, shift: &BasePoly) -> TowerElement {
        let p = self.ctx.p() as usize;
        let mut shift_pows = Vec::with_capacity(p);
        shift_pows.push(BasePoly::one(self.ctx.vars()));
        for _ in 1..p {
            let last = shift_pows.last().unwrap();
            shift_pows.push(last.mul(shift));
        }
        let binom = pascal_rows(p);
        let mut out = TowerElement {
            ctx: self.ctx.clone(),
            basis: self.basis,
            coords: BTreeMap::new(),
        };
        for (e, c) in &self.coords {
            let j = e.exp(i) as usize;
            for m in 0..=j {
                let mut exps = e.exps().to_vec();
                exps[i] = m as u8;
                let coeff = c.mul(&shift_pows[j - m]).mul_int(&binom[j][m]);
                out.accumulate(ExpVec::new(exps), coeff);
            }
        }
        out
    }
}

/// Pascal's triangle rows 0..n as big integers.
fn pascal_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![BigInt::one(); j + 1];
        for m in 1..j {
            row[m] = &rows[j - 1][m - 1] + &rows[j - 1][m];
        }
        rows.push(row);
    }
    rows
}

impl fmt::Display for TowerElement {
    /// Renders in the element grammar: coordinates in canonical order, each as
    /// `coeff*w1^a*z1^b`, with multi-term coefficients parenthesized and the
    /// signs of single-term coefficients hoisted into the separators, so the
    /// output re-parses. Shifted coordinates (diagnostics only) print the
    /// `w_i - h_i` factors inline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let r = self.ctx.num_radicands();
        let mut first = true;
        for (e, c) in &self.coords {
            let (neg, body) = if c.num_terms() > 1 {
                (false, format!("({c})"))
            } else {
                let neg = c
                    .terms()
                    .next()
                    .map(|(_, coef)| num_traits::Signed::is_negative(coef))
                    .unwrap_or(false);
                let abs = if neg { c.neg() } else { c.clone() };
                (neg, abs.to_string())
            };
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
            let has_gens = e.exps().iter().any(|&x| x > 0);
            let mut printed = false;
            if !(body == "1" && has_gens) {
                write!(f, "{body}")?;
                printed = true;
            }
            for (i, &x) in e.exps().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = if self.basis == BasisFlag::Shifted && i < r {
                    format!("(w{} - ({}))", i + 1, self.ctx.radicand(i).h)
                } else {
                    self.ctx.gen_name(i)
                };
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{name}")?;
                printed = true;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn ctx_f_g() -> TowerCtx {
        let vars = VarSet::new(["X", "Y"]);
        let spec = TowerSpec {
            p: 3,
            radicands: vec![
                RadicandSpec::new(parse_poly(&vars, "X^3 + 9").unwrap(), 1),
                RadicandSpec::new(parse_poly(&vars, "Y^3 + 9").unwrap(), 1),
            ],
            disjoint_block: vec![],
        };
        make_tower(&spec).unwrap()
    }

    fn ctx_r1() -> TowerCtx {
        let vars = VarSet::new(["X"]);
        let spec = TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec::new(parse_poly(&vars, "X^3 + 9").unwrap(), 1)],
            disjoint_block: vec![],
        };
        make_tower(&spec).unwrap()
    }

    #[test]
    fn accepts_example_tower() {
        let ctx = ctx_f_g();
        assert_eq!(ctx.num_radicands(), 2);
        assert_eq!(ctx.rank(), 9);
        assert_eq!(ctx.radicand(0).h.to_string(), "X");
        assert_eq!(ctx.radicand(0).g.to_string(), "1");
    }

    #[test]
    fn rejects_duplicate_radicand() {
        let vars = VarSet::new(["X", "Y"]);
        let f = parse_poly(&vars, "X^3 + 9").unwrap();
        let spec = TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec::new(f.clone(), 1), RadicandSpec::new(f, 1)],
            disjoint_block: vec![],
        };
        assert_eq!(
            make_tower(&spec).unwrap_err(),
            TowerError::NotCoprime { i: 1, j: 2 }
        );
    }

    #[test]
    fn rejects_non_p2_power() {
        let vars = VarSet::new(["X"]);
        let spec = TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec::new(parse_poly(&vars, "X^3 + 3").unwrap(), 1)],
            disjoint_block: vec![],
        };
        assert_eq!(
            make_tower(&spec).unwrap_err(),
            TowerError::NotPthPowerModP2 { index: 1 }
        );
    }

    #[test]
    fn rejects_p_dividing_d() {
        let vars = VarSet::new(["X"]);
        let spec = TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec {
                f: parse_poly(&vars, "X^3 + 9").unwrap(),
                d: 3,
                cert: None,
            }],
            disjoint_block: vec![],
        };
        assert_eq!(
            make_tower(&spec).unwrap_err(),
            TowerError::PDividesD { index: 1 }
        );
    }

    #[test]
    fn rejects_non_prime() {
        let vars = VarSet::new(["X"]);
        let spec = TowerSpec {
            p: 4,
            radicands: vec![RadicandSpec::new(parse_poly(&vars, "X^3 + 9").unwrap(), 1)],
            disjoint_block: vec![],
        };
        assert_eq!(make_tower(&spec).unwrap_err(), TowerError::NotPrime(4));
    }

    #[test]
    fn rejects_not_square_free() {
        let vars = VarSet::new(["X"]);
        // (X + 3)^3 + 9*(...): easier: an exact cube h^p is in p-wedge-p^2
        // with g = 0 but fails square-freeness.
        let f = parse_poly(&vars, "X^3").unwrap();
        let spec = TowerSpec {
            p: 3,
            radicands: vec![RadicandSpec::new(f, 1)],
            disjoint_block: vec![],
        };
        assert_eq!(
            make_tower(&spec).unwrap_err(),
            TowerError::NotSquareFree { index: 1 }
        );
    }

    #[test]
    fn single_reduction() {
        let ctx = ctx_r1();
        let w = TowerElement::generator(&ctx, 0);
        let prod = w.mul(&w.pow(2));
        assert_eq!(
            prod,
            TowerElement::scalar(&ctx, parse_poly(ctx.vars(), "X^3 + 9").unwrap())
        );
        let one = TowerElement::one(&ctx);
        assert_eq!(one.mul(&w), w);
    }

    #[test]
    fn shifted_cube_matches_hand_expansion() {
        // (w - X)^3 = 9 - 3X^2(w - X) - 3X(w - X)^2 for p = 3, f = X^3 + 9
        let ctx = ctx_r1();
        let vars = ctx.vars();
        let w = TowerElement::generator(&ctx, 0);
        let x = TowerElement::scalar(&ctx, parse_poly(vars, "X").unwrap());
        let wmx = w.sub(&x);
        let cube = wmx.pow(3).change_basis(BasisFlag::Shifted);
        let expected = TowerElement::from_coords(
            &ctx,
            BasisFlag::Shifted,
            [
                (ExpVec::new(vec![0]), parse_poly(vars, "9").unwrap()),
                (ExpVec::new(vec![1]), parse_poly(vars, "-3*X^2").unwrap()),
                (ExpVec::new(vec![2]), parse_poly(vars, "-3*X").unwrap()),
            ],
        );
        assert_eq!(cube, expected);
    }

    #[test]
    fn change_basis_roundtrip() {
        let ctx = ctx_f_g();
        let vars = ctx.vars();
        let e = TowerElement::from_coords(
            &ctx,
            BasisFlag::Standard,
            [
                (
                    ExpVec::new(vec![2, 1]),
                    parse_poly(vars, "X*Y - 4").unwrap(),
                ),
                (ExpVec::new(vec![0, 2]), parse_poly(vars, "7").unwrap()),
                (ExpVec::new(vec![1, 0]), parse_poly(vars, "X + 1").unwrap()),
            ],
        );
        let there = e.change_basis(BasisFlag::Shifted);
        assert_eq!(there.basis(), BasisFlag::Shifted);
        let back = there.change_basis(BasisFlag::Standard);
        assert_eq!(back, e);

        // w (standard) -> (w - h) + h (shifted)
        let w = TowerElement::generator(&ctx, 0);
        let shifted = w.change_basis(BasisFlag::Shifted);
        assert_eq!(
            shifted.coeff(&ExpVec::new(vec![0, 0])),
            parse_poly(vars, "X").unwrap()
        );
        assert_eq!(
            shifted.coeff(&ExpVec::new(vec![1, 0])),
            parse_poly(vars, "1").unwrap()
        );
    }

    #[test]
    fn shifted_square_to_standard() {
        // (w - h)^2 (shifted) -> w^2 - 2hw + h^2 (standard)
        let ctx = ctx_r1();
        let vars = ctx.vars();
        let sq = TowerElement::monomial_in(
            &ctx,
            BasisFlag::Shifted,
            ExpVec::new(vec![2]),
            parse_poly(vars, "1").unwrap(),
        );
        let std = sq.change_basis(BasisFlag::Standard);
        assert_eq!(std.coeff(&ExpVec::new(vec![0])), parse_poly(vars, "X^2").unwrap());
        assert_eq!(std.coeff(&ExpVec::new(vec![1])), parse_poly(vars, "-2*X").unwrap());
        assert_eq!(std.coeff(&ExpVec::new(vec![2])), parse_poly(vars, "1").unwrap());
    }

    #[test]
    fn exp_vector_enumeration_order() {
        let ctx = ctx_f_g();
        let evs = ctx.exp_vectors();
        assert_eq!(evs.len(), 9);
        let as_vecs: Vec<Vec<u8>> = evs.iter().map(|e| e.exps().to_vec()).collect();
        assert_eq!(
            as_vecs,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2],
                vec![2, 1],
                vec![1, 2],
                vec![2, 2],
            ]
        );
    }

    #[test]
    fn coordinatewise_p_divisibility() {
        let ctx = ctx_r1();
        let vars = ctx.vars();
        let e = TowerElement::from_coords(
            &ctx,
            BasisFlag::Standard,
            [
                (ExpVec::new(vec![0]), parse_poly(vars, "3*X").unwrap()),
                (ExpVec::new(vec![2]), parse_poly(vars, "6").unwrap()),
            ],
        );
        assert!(e.divisible_by_int(&BigInt::from(3)));
        assert!(!e.divisible_by_int(&BigInt::from(9)));
    }
}
