//! Substitution pipelines: k-th root substitutions of the variables,
//! monomial-factor stripping, exponent reduction of user-factored radicands,
//! linear disjointness modulo p, and the end-to-end workflow that rebuilds a
//! non-certifiable tower over a k-th root extension where it certifies.

use crate::closure::{self, ClosureReport, ExtendedBasis, VBasis, WitnessReport};
use crate::ring::{
    gcd, is_pth_power_mod_p2, is_square_free, pth_root_mod_p, BasePoly, Monomial,
    RadicandCertificate,
};
use crate::tower::{make_tower, RadicandSpec, TowerCtx, TowerError, TowerSpec};
use thiserror::Error;

/// Indices in errors are 1-based, matching the report listings.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("k must be at least 1")]
    BadK,
    #[error("input {index}: factor product does not match the input")]
    ProductMismatch { index: usize },
    #[error("factors {i} and {j} are not coprime")]
    NonCoprimeFactors { i: usize, j: usize },
    #[error("factor {index} is not square-free")]
    NotSquareFreeFactor { index: usize },
    #[error("factor {index} is zero")]
    ZeroFactor { index: usize },
    #[error("block generator {index} vanishes modulo p")]
    BlockGenDivisibleByP { index: usize },
    #[error("degree n of input {index} must satisfy p | n and p^2 does not divide n")]
    BadDegree { index: usize },
    #[error("variable {var} divides inputs {i} and {j}; the coprimality hypothesis fails")]
    SharedVariableFactor { var: String, i: usize, j: usize },
    #[error("input {index}: no k in {tried:?} certifies the core as a p-th power modulo p^2")]
    WMembershipFailed { index: usize, tried: Vec<u32> },
    #[error("tower hypothesis failed over the substituted ring: {0}")]
    Tower(#[from] TowerError),
}

/// The variable substitution `x_i -> y_i^k`. Variable names are reused for
/// the roots: after applying the map, each symbol denotes the k-th root of
/// the original variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMap {
    pub k: u32,
}

impl SubstitutionMap {
    pub fn new(k: u32) -> Result<SubstitutionMap, TransformError> {
        if k < 1 {
            return Err(TransformError::BadK);
        }
        Ok(SubstitutionMap { k })
    }

    pub fn apply(&self, f: &BasePoly) -> BasePoly {
        f.scale_exponents(self.k)
    }
}

/// Image of `f` under `x_i -> y_i^k` for every variable; exact, multiplicative
/// and injective on canonical forms.
pub fn substitute_kth_roots(f: &BasePoly, k: u32) -> BasePoly {
    assert!(k >= 1, "k must be at least 1");
    f.scale_exponents(k)
}

/// Search the candidate list for the first `k` such that the image of `f`
/// under the k-th root substitution is a p-th power modulo p^2. The default
/// candidate list is `[p]`, which suffices in this polynomial model (the
/// residue field is perfect); callers may override it.
pub fn w_membership(
    f: &BasePoly,
    p: u32,
    k_candidates: &[u32],
) -> Option<(u32, RadicandCertificate)> {
    for &k in k_candidates {
        if k < 1 {
            continue;
        }
        let image = substitute_kth_roots(f, k);
        if let Some(cert) = is_pth_power_mod_p2(&image, p) {
            return Some((k, cert));
        }
    }
    None
}

pub fn default_k_candidates(p: u32) -> Vec<u32> {
    vec![p]
}

/// Factor out the maximal monomial dividing `f`; returns it together with the
/// core, so that `monomial * core = f` exactly and no variable divides the
/// core.
pub fn strip_monomial_factors(f: &BasePoly) -> (Monomial, BasePoly) {
    assert!(!f.is_zero(), "cannot strip the zero polynomial");
    let nvars = f.vars().len();
    let exps: Vec<u32> = (0..nvars).map(|i| f.min_exponent(i)).collect();
    let m = Monomial::from_exps(exps);
    let core = f.div_monomial(&m);
    (m, core)
}

/// Outcome of rewriting a user-supplied factorization `target = prod q_i^c_i`
/// with exponents reduced modulo `n`.
#[derive(Debug, Clone)]
pub struct ExponentReduction {
    /// Per factor: `(q, c, d, e)` with `c = d*n + e`, `0 <= e < n`.
    pub factors: Vec<(BasePoly, u32, u32, u32)>,
    /// The distinct factors with `e > 0`: the new degree-n radicand set.
    pub radicands: Vec<BasePoly>,
    /// Factors dropped from the extension because `e = 0`.
    pub dropped: Vec<BasePoly>,
}

/// Verify a user-asserted factorization (product, square-freeness and
/// pairwise coprimality of the factors; irreducibility is not proved) and
/// split each exponent `c = d*n + e`. Factors with `e = 0` contribute nothing
/// to the field extension and are dropped (but reported).
pub fn reduce_exponents(
    target: &BasePoly,
    factors: &[(BasePoly, u32)],
    n: u32,
    index: usize,
) -> Result<ExponentReduction, TransformError> {
    for (i, (q, _)) in factors.iter().enumerate() {
        if q.is_zero() {
            return Err(TransformError::ZeroFactor { index: i + 1 });
        }
        if !is_square_free(q) {
            return Err(TransformError::NotSquareFreeFactor { index: i + 1 });
        }
    }
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            if !gcd(&factors[i].0, &factors[j].0).is_one() {
                return Err(TransformError::NonCoprimeFactors { i: i + 1, j: j + 1 });
            }
        }
    }
    let mut product = BasePoly::one(target.vars());
    for (q, c) in factors {
        product = product.mul(&q.pow(*c));
    }
    if &product != target {
        return Err(TransformError::ProductMismatch { index });
    }
    let mut out = ExponentReduction {
        factors: Vec::new(),
        radicands: Vec::new(),
        dropped: Vec::new(),
    };
    for (q, c) in factors {
        let d = c / n;
        let e = c % n;
        out.factors.push((q.clone(), *c, d, e));
        if e > 0 {
            if !out.radicands.contains(q) {
                out.radicands.push(q.clone());
            }
        } else {
            out.dropped.push(q.clone());
        }
    }
    Ok(out)
}

/// Result of the linear-disjointness test: `witness` carries the first
/// nonzero exponent vector whose product of residues is a p-th power, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessCheck {
    pub witness: Option<Vec<u8>>,
}

impl DisjointnessCheck {
    pub fn is_disjoint(&self) -> bool {
        self.witness.is_none()
    }
}

/// Degree-p radical extensions of the residue field split as a tensor product
/// exactly when the residues span full rank modulo p-th powers: for every
/// nonzero exponent vector `e` in `[0,p)^t`, the product of `g_i^e_i` must
/// not be a p-th power in `F_p[x..]`. Exponent vectors are scanned in
/// ascending mixed-radix order and the first failure is the witness.
pub fn check_linear_disjointness(
    gs: &[BasePoly],
    p: u32,
) -> Result<DisjointnessCheck, TransformError> {
    for (pos, g) in gs.iter().enumerate() {
        if g.mod_p(p).is_zero() {
            return Err(TransformError::BlockGenDivisibleByP { index: pos + 1 });
        }
    }
    let t = gs.len();
    if t == 0 {
        return Ok(DisjointnessCheck { witness: None });
    }
    let mut e = vec![0u8; t];
    loop {
        // next exponent vector (mixed-radix increment on the last coordinate)
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(DisjointnessCheck { witness: None });
            }
            i -= 1;
            e[i] += 1;
            if (e[i] as u32) < p {
                break;
            }
            e[i] = 0;
        }
        let mut prod = BasePoly::one(gs[0].vars());
        for (g, &exp) in gs.iter().zip(&e) {
            if exp > 0 {
                prod = prod.mul(&g.pow(exp as u32)).mod_p(p);
            }
        }
        if pth_root_mod_p(&prod, p).is_some() {
            return Ok(DisjointnessCheck {
                witness: Some(e.clone()),
            });
        }
    }
}

/// Build and fully verify a tower that mixes certified radicands with a
/// linearly disjoint block: hypothesis validation (delegated to
/// [`make_tower`]), basis construction over the extended base, and closure
/// verification. Total rank over the original base ring is `p^(r+t)`.
pub fn mixed_tower(spec: &TowerSpec) -> Result<(TowerCtx, VBasis, ClosureReport), TransformError> {
    let ctx = make_tower(spec)?;
    let basis = closure::build_v_basis(&ctx);
    let report = closure::verify_closure_with(&ctx, &basis);
    Ok((ctx, basis, report))
}

/// One input's journey through the small Cohen-Macaulay pipeline.
#[derive(Debug, Clone)]
pub struct PipelineInputReport {
    pub original: BasePoly,
    pub n: u32,
    /// Exponent-reduction outcome when a factorization was supplied.
    pub reduction: Option<ExponentReduction>,
}

/// One working radicand (post reduction) and its certificates.
#[derive(Debug, Clone)]
pub struct PipelineCoreReport {
    /// The radicand before stripping/substitution.
    pub input: BasePoly,
    pub n: u32,
    pub stripped_monomial: Monomial,
    pub core: BasePoly,
    /// k for which the substituted core certifies.
    pub k: u32,
    /// Certificate of the core substituted at the common k.
    pub cert: RadicandCertificate,
    /// The substituted core itself (the radicand of the rebuilt tower).
    pub substituted: BasePoly,
}

/// Everything the pipeline produced; every claim is backed by re-checkable
/// data (stripped monomial times core equals the input, `h^p + p^2*g` equals
/// the substituted core, and the closure/witness reports carry their own
/// witnesses).
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub p: u32,
    pub inputs: Vec<PipelineInputReport>,
    pub cores: Vec<PipelineCoreReport>,
    /// Common substitution degree: the lcm of the per-core k values,
    /// additionally divisible by p when monomial factors were stripped.
    pub common_k: u32,
    pub ctx: TowerCtx,
    pub basis: VBasis,
    pub closure: ClosureReport,
    pub witnesses: WitnessReport,
    pub extended: ExtendedBasis,
}

impl PipelineReport {
    pub fn verified(&self) -> bool {
        self.closure.passed() && self.witnesses.passed()
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::Integer::lcm(&a, &b)
}

/// The full workflow: strip monomial factors, certify every core in a k-th
/// root extension, substitute everything into a common extension (k divisible
/// by every per-core k, and by p when anything was stripped), rebuild the
/// tower there, and verify basis, closure and integrality identities. Inputs with a supplied factorization
/// are first rewritten through [`reduce_exponents`].
pub fn small_cm_pipeline(
    inputs: &[(BasePoly, u32, Option<Vec<(BasePoly, u32)>>)],
    p: u32,
    k_candidates: &[u32],
) -> Result<PipelineReport, TransformError> {
    // degree hypothesis: n = p*d with p not dividing d
    for (pos, (_, n, _)) in inputs.iter().enumerate() {
        if *n == 0 || n % p != 0 || (n / p) % p == 0 {
            return Err(TransformError::BadDegree { index: pos + 1 });
        }
    }

    let mut input_reports = Vec::new();
    let mut working: Vec<(BasePoly, u32)> = Vec::new();
    for (index, (f, n, factors)) in inputs.iter().enumerate() {
        let reduction = match factors {
            Some(fs) => {
                let red = reduce_exponents(f, fs, *n, index + 1)?;
                for q in &red.radicands {
                    if !working.iter().any(|(w, _)| w == q) {
                        working.push((q.clone(), *n));
                    }
                }
                Some(red)
            }
            None => {
                working.push((f.clone(), *n));
                None
            }
        };
        input_reports.push(PipelineInputReport {
            original: f.clone(),
            n: *n,
            reduction,
        });
    }

    // strip monomial factors; a variable may divide at most one input
    let mut stripped: Vec<(Monomial, BasePoly)> = Vec::new();
    for (f, _) in &working {
        stripped.push(strip_monomial_factors(f));
    }
    let nvars = inputs.first().map(|(f, _, _)| f.vars().len()).unwrap_or(0);
    for v in 0..nvars {
        let holders: Vec<usize> = stripped
            .iter()
            .enumerate()
            .filter(|(_, (m, _))| m.exp(v) > 0)
            .map(|(i, _)| i)
            .collect();
        if holders.len() > 1 {
            let var = working[0].0.vars().name(v).to_string();
            return Err(TransformError::SharedVariableFactor {
                var,
                i: holders[0] + 1,
                j: holders[1] + 1,
            });
        }
    }

    // certify every core in some k-th root extension
    let candidates = if k_candidates.is_empty() {
        default_k_candidates(p)
    } else {
        k_candidates.to_vec()
    };
    let mut per_core: Vec<(u32, RadicandCertificate)> = Vec::new();
    for (pos, (_, core)) in stripped.iter().enumerate() {
        match w_membership(core, p, &candidates) {
            Some(found) => per_core.push(found),
            None => {
                return Err(TransformError::WMembershipFailed {
                    index: pos + 1,
                    tried: candidates.clone(),
                })
            }
        }
    }

    // common extension degree: divisible by every certifying k, and by p
    // whenever a variable factor was stripped (only then does rebuilding the
    // stripped monomials require p-th roots of the variables)
    let any_strip = stripped.iter().any(|(m, _)| !m.is_one());
    let mut common_k = if any_strip { p } else { 1 };
    for (k, _) in &per_core {
        common_k = lcm_u32(common_k, *k);
    }

    // rebuild the tower over the common extension
    let mut cores = Vec::new();
    let mut radicands = Vec::new();
    for (i, (f, n)) in working.iter().enumerate() {
        let substituted = substitute_kth_roots(&stripped[i].1, common_k);
        let cert = is_pth_power_mod_p2(&substituted, p)
            .expect("certificate at k implies certificate at any multiple of k");
        cores.push(PipelineCoreReport {
            input: f.clone(),
            n: *n,
            stripped_monomial: stripped[i].0.clone(),
            core: stripped[i].1.clone(),
            k: per_core[i].0,
            cert: cert.clone(),
            substituted: substituted.clone(),
        });
        radicands.push(RadicandSpec {
            f: substituted,
            d: n / p,
            cert: Some(cert),
        });
    }

    let spec = TowerSpec {
        p,
        radicands,
        disjoint_block: vec![],
    };
    let ctx = make_tower(&spec)?;
    let basis = closure::build_v_basis(&ctx);
    let closure_report = closure::verify_closure_with(&ctx, &basis);
    let witnesses = closure::integrality_witnesses(&ctx);
    let extended = closure::extend_by_unit_degrees(&ctx, &basis)
        .expect("unit degrees validated by make_tower");

    Ok(PipelineReport {
        p,
        inputs: input_reports,
        cores,
        common_k,
        ctx,
        basis,
        closure: closure_report,
        witnesses,
        extended,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, VarSet};
    use std::sync::Arc;

    fn vs() -> Arc<VarSet> {
        VarSet::new(["x", "y"])
    }

    fn p(s: &str) -> BasePoly {
        parse_poly(&vs(), s).unwrap()
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute_kth_roots(&p("x"), 3), p("x^3"));
        assert_eq!(substitute_kth_roots(&p("x*y^4 + 9"), 3), p("x^3*y^12 + 9"));
        let f = p("x^2*y - 7*x + 3");
        assert_eq!(substitute_kth_roots(&f, 1), f);
    }

    #[test]
    fn substitution_is_multiplicative() {
        let a = p("x^2 + y");
        let b = p("x - 3*y^2");
        assert_eq!(
            substitute_kth_roots(&a.mul(&b), 5),
            substitute_kth_roots(&a, 5).mul(&substitute_kth_roots(&b, 5))
        );
    }

    #[test]
    fn w_membership_examples() {
        let (k, cert) = w_membership(&p("x*y^4 + 9"), 3, &[3]).unwrap();
        assert_eq!(k, 3);
        assert_eq!(cert.h, p("x*y^4"));
        assert_eq!(cert.g, p("1"));

        let (k, cert) = w_membership(&p("x^3 + 9"), 3, &[3]).unwrap();
        assert_eq!(k, 3);
        assert_eq!(cert.h, p("x^3"));
        // k = 1 would also succeed if offered first
        let (k1, _) = w_membership(&p("x^3 + 9"), 3, &[1, 3]).unwrap();
        assert_eq!(k1, 1);

        assert!(w_membership(&p("x + 3"), 3, &[3]).is_none());
        assert!(w_membership(&p("x + 3"), 3, &[1, 2, 3, 6]).is_none());
    }

    #[test]
    fn strip_examples() {
        let (m, core) = strip_monomial_factors(&p("x*y^3 + 9*x"));
        assert_eq!(m.exps(), &[1, 0]);
        assert_eq!(core, p("y^3 + 9"));

        let (m, core) = strip_monomial_factors(&p("y^3 + 9"));
        assert!(m.is_one());
        assert_eq!(core, p("y^3 + 9"));

        let (m, core) = strip_monomial_factors(&p("x^2*y"));
        assert_eq!(m.exps(), &[2, 1]);
        assert!(core.is_one());
    }

    #[test]
    fn strip_multiply_back_is_identity() {
        for s in ["x^3*y - x^2*y^2", "x*y^4 + 9*x*y", "7*x^5"] {
            let f = p(s);
            let (m, core) = strip_monomial_factors(&f);
            assert_eq!(core.mul_monomial(&m), f);
        }
    }

    #[test]
    fn exponent_reduction_examples() {
        let q1 = p("x + 1");
        let q2 = p("y + 1");
        let g = q1.pow(5).mul(&q2.pow(7));
        let red = reduce_exponents(&g, &[(q1.clone(), 5), (q2.clone(), 7)], 6, 0).unwrap();
        assert_eq!(red.radicands, vec![q1.clone(), q2.clone()]);
        assert_eq!(red.factors[0], (q1.clone(), 5, 0, 5));
        assert_eq!(red.factors[1], (q2.clone(), 7, 1, 1));

        let g6 = q1.pow(6);
        let red = reduce_exponents(&g6, &[(q1.clone(), 6)], 6, 0).unwrap();
        assert!(red.radicands.is_empty());
        assert_eq!(red.dropped, vec![q1.clone()]);

        let err = reduce_exponents(&p("x^2*y"), &[(p("x"), 1), (p("x*y"), 1)], 3, 0).unwrap_err();
        assert_eq!(err, TransformError::NonCoprimeFactors { i: 1, j: 2 });

        let err = reduce_exponents(&p("x*y + 1"), &[(p("x"), 1)], 3, 2).unwrap_err();
        assert_eq!(err, TransformError::ProductMismatch { index: 2 });
    }

    #[test]
    fn disjointness_examples() {
        let ok = check_linear_disjointness(&[p("x"), p("y")], 3).unwrap();
        assert!(ok.is_disjoint());
        let ok5 = check_linear_disjointness(&[p("x"), p("y")], 5).unwrap();
        assert!(ok5.is_disjoint());

        // x * x^2*y^3 = (x*y)^3
        let bad = check_linear_disjointness(&[p("x"), p("x^2*y^3")], 3).unwrap();
        assert_eq!(bad.witness, Some(vec![1, 1]));

        // residue already a p-th power: witness (1)
        let cube = check_linear_disjointness(&[p("x^3")], 3).unwrap();
        assert_eq!(cube.witness, Some(vec![1]));

        let err = check_linear_disjointness(&[p("3*x")], 3).unwrap_err();
        assert_eq!(err, TransformError::BlockGenDivisibleByP { index: 1 });
    }
    #[test]
    fn mixed_tower_empty_block_is_plain_flow() {
        let vars = VarSet::new(["X"]);
        let spec = crate::tower::TowerSpec {
            p: 3,
            radicands: vec![crate::tower::RadicandSpec::new(
                parse_poly(&vars, "X^3 + 9").unwrap(),
                1,
            )],
            disjoint_block: vec![],
        };
        let (ctx, basis, report) = mixed_tower(&spec).unwrap();
        assert_eq!(ctx.rank(), 3);
        assert_eq!(basis.len(), 3);
        assert!(report.passed());
    }

    #[test]
    fn block_gen_that_is_a_pth_power_rejects_as_disjointness() {
        let vars = VarSet::new(["X", "Y"]);
        let spec = crate::tower::TowerSpec {
            p: 3,
            radicands: vec![crate::tower::RadicandSpec::new(
                parse_poly(&vars, "X^3 + 9").unwrap(),
                1,
            )],
            disjoint_block: vec![parse_poly(&vars, "Y^3").unwrap()],
        };
        assert_eq!(
            make_tower(&spec).unwrap_err(),
            TowerError::NotLinearlyDisjoint { witness: vec![1] }
        );
    }

    #[test]
    fn pipeline_plain_inputs_default_candidates() {
        // without monomial factors the common k is just the lcm of the
        // certifying k values
        let vars = VarSet::new(["x", "y"]);
        let f1 = parse_poly(&vars, "x^3 + 9").unwrap();
        let f2 = parse_poly(&vars, "y^3 + 9").unwrap();
        let inputs = vec![(f1.clone(), 3u32, None), (f2.clone(), 3u32, None)];
        let report = small_cm_pipeline(&inputs, 3, &[]).unwrap();
        assert_eq!(report.common_k, 3);
        assert_eq!(report.basis.len(), 9);
        assert!(report.verified());

        // offering k = 1 reproduces the unsubstituted tower verbatim
        let report1 = small_cm_pipeline(&inputs, 3, &[1, 3]).unwrap();
        assert_eq!(report1.common_k, 1);
        assert_eq!(report1.cores[0].substituted, f1);
        assert_eq!(report1.cores[1].substituted, f2);
        assert!(report1.verified());
    }

    #[test]
    fn pipeline_with_monomial_strip() {
        let vars = VarSet::new(["x", "y"]);
        let f = parse_poly(&vars, "x * (y^3 + 9)").unwrap();
        let report = small_cm_pipeline(&[(f, 3u32, None)], 3, &[1, 3]).unwrap();
        // the core certifies at k = 1 but stripping forces p | k
        assert_eq!(report.cores[0].stripped_monomial.exps(), &[1, 0]);
        assert_eq!(report.cores[0].core, parse_poly(&vars, "y^3 + 9").unwrap());
        assert_eq!(report.common_k, 3);
        assert_eq!(report.cores[0].substituted, parse_poly(&vars, "y^9 + 9").unwrap());
        assert!(report.verified());
    }

    #[test]
    fn pipeline_rejects_shared_variable_factor() {
        let vars = VarSet::new(["x", "y"]);
        let f1 = parse_poly(&vars, "x * (y^3 + 9)").unwrap();
        let f2 = parse_poly(&vars, "x * (y^3 + 4)").unwrap();
        let err = small_cm_pipeline(&[(f1, 3, None), (f2, 3, None)], 3, &[]).unwrap_err();
        assert_eq!(
            err,
            TransformError::SharedVariableFactor {
                var: "x".into(),
                i: 1,
                j: 2
            }
        );
    }

    #[test]
    fn pipeline_rejects_bad_degree() {
        let vars = VarSet::new(["x"]);
        let f = parse_poly(&vars, "x^3 + 9").unwrap();
        let err = small_cm_pipeline(&[(f.clone(), 9, None)], 3, &[]).unwrap_err();
        assert_eq!(err, TransformError::BadDegree { index: 1 });
        let err = small_cm_pipeline(&[(f, 5, None)], 3, &[]).unwrap_err();
        assert_eq!(err, TransformError::BadDegree { index: 1 });
    }
}

