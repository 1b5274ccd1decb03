//! Closure verification on heavier contexts than the unit suites exercise.

mod common;

use radtower::closure::{build_v_basis, integrality_witnesses, verify_closure_with};
use radtower::ring::{parse_poly, VarSet};
use radtower::tower::{make_tower, RadicandSpec, TowerSpec};
use radtower::transforms::mixed_tower;
use std::time::Instant;

#[test]
fn p5_rank25_closure() {
    let start = Instant::now();
    let vars = VarSet::new(["X", "Y"]);
    let ctx = make_tower(&TowerSpec {
        p: 5,
        radicands: vec![
            RadicandSpec::new(parse_poly(&vars, "X^5 + 25").unwrap(), 1),
            RadicandSpec::new(parse_poly(&vars, "Y^5 + 50").unwrap(), 1),
        ],
        disjoint_block: vec![],
    })
    .unwrap();
    let basis = build_v_basis(&ctx);
    assert_eq!(basis.len(), 25);
    assert_eq!(basis.layer_sizes(), vec![10, 14, 1]);
    let report = verify_closure_with(&ctx, &basis);
    assert_eq!(report.products_checked, 325);
    assert!(report.passed());
    assert!(integrality_witnesses(&ctx).passed());
    println!("p = 5, rank 25: closure and witnesses verified in {:?}", start.elapsed());
}

#[test]
fn mixed_rank27_closure() {
    let start = Instant::now();
    let vars = VarSet::new(["X", "Y", "Z"]);
    let spec = TowerSpec {
        p: 3,
        radicands: vec![RadicandSpec::new(
            parse_poly(&vars, "X^3 + 9").unwrap(),
            1,
        )],
        disjoint_block: vec![
            parse_poly(&vars, "Y").unwrap(),
            parse_poly(&vars, "Z").unwrap(),
        ],
    };
    let (ctx, basis, report) = mixed_tower(&spec).unwrap();
    assert_eq!(ctx.rank(), 27);
    assert_eq!(basis.len(), 27);
    assert!(report.passed());
    println!("mixed p = 3, r = 1, t = 2, rank 27: closure verified in {:?}", start.elapsed());
}

#[test]
fn p7_rank7_closure() {
    let start = Instant::now();
    let vars = VarSet::new(["X"]);
    let ctx = make_tower(&TowerSpec {
        p: 7,
        radicands: vec![RadicandSpec::new(
            parse_poly(&vars, "X^7 + 49").unwrap(),
            1,
        )],
        disjoint_block: vec![],
    })
    .unwrap();
    let basis = build_v_basis(&ctx);
    assert_eq!(basis.len(), 7);
    assert_eq!(basis.layer_sizes(), vec![6, 1]);
    let report = verify_closure_with(&ctx, &basis);
    assert!(report.passed());
    assert!(integrality_witnesses(&ctx).passed());
    println!("p = 7, rank 7: closure and witnesses verified in {:?}", start.elapsed());
}
