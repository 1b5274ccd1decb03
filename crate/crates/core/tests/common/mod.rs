//! Shared helpers for the integration suites: deterministic random generation
//! of valid tower contexts.

use num_bigint::BigInt;
use radtower::ring::{BasePoly, Monomial, VarSet};
use radtower::tower::{make_tower, RadicandSpec, TowerCtx, TowerSpec};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use std::sync::Arc;

/// A random certified radicand built as `f = h^p + p^2 g` with
/// `h = x_i + p*c` (so `f` is a non-unit and `h` is a unit times `x_i`
/// modulo p) and small nonzero `g`.
#[allow(dead_code)]
pub fn random_radicand(
    vars: &Arc<VarSet>,
    main_var: usize,
    p: u32,
    rng: &mut ChaCha12Rng,
) -> BasePoly {
    let c: i64 = rng.random_range(0..3);
    let h = BasePoly::var(vars, main_var).add(&BasePoly::constant(vars, c * p as i64));
    let mut g = BasePoly::constant(vars, rng.random_range(1..5i64));
    if rng.random_range(0..2) == 1 {
        let other = rng.random_range(0..vars.len());
        g = g.add(&BasePoly::var(vars, other));
    }
    if rng.random_range(0..2) == 1 {
        g = g.neg();
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    h.pow(p).add(&g.mul_int(&p2))
}

/// A deterministic random valid context with `r` radicands (one per
/// variable), all unit parts `d = 1`. Retries until every hypothesis holds.
#[allow(dead_code)]
pub fn random_valid_ctx(p: u32, r: usize, rng: &mut ChaCha12Rng) -> TowerCtx {
    let names: Vec<String> = (0..r).map(|i| format!("x{}", i + 1)).collect();
    let vars = VarSet::new(names);
    for _ in 0..200 {
        let radicands: Vec<RadicandSpec> = (0..r)
            .map(|i| RadicandSpec::new(random_radicand(&vars, i, p, rng), 1))
            .collect();
        let spec = TowerSpec {
            p,
            radicands,
            disjoint_block: vec![],
        };
        if let Ok(ctx) = make_tower(&spec) {
            return ctx;
        }
    }
    panic!("no valid random context found for p = {p}, r = {r}");
}

/// Same, with caller-chosen unit degrees.
#[allow(dead_code)]
pub fn random_valid_ctx_with_degrees(
    p: u32,
    degrees: &[u32],
    rng: &mut ChaCha12Rng,
) -> TowerCtx {
    let r = degrees.len();
    let names: Vec<String> = (0..r).map(|i| format!("x{}", i + 1)).collect();
    let vars = VarSet::new(names);
    for _ in 0..200 {
        let radicands: Vec<RadicandSpec> = (0..r)
            .map(|i| RadicandSpec {
                f: random_radicand(&vars, i, p, rng),
                d: degrees[i],
                cert: None,
            })
            .collect();
        let spec = TowerSpec {
            p,
            radicands,
            disjoint_block: vec![],
        };
        if let Ok(ctx) = make_tower(&spec) {
            return ctx;
        }
    }
    panic!("no valid random context found for p = {p}, degrees = {degrees:?}");
}

/// A small random polynomial for property tests.
#[allow(dead_code)]
pub fn random_poly(vars: &Arc<VarSet>, rng: &mut ChaCha12Rng) -> BasePoly {
    let nterms = rng.random_range(0..4usize);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..vars.len()).map(|_| rng.random_range(0..4u32)).collect();
        let c: i64 = rng.random_range(-9..=9);
        terms.push((Monomial::from_exps(exps), BigInt::from(c)));
    }
    BasePoly::from_terms(vars, terms)
}
