//! The two-strip dichotomy in T^2: the twisted diagonals {(g, a(g))} and
//! {(g, b(g))} cover T^2 exactly when the difference map of a·b^-1 is
//! surjective. Both sides of the equivalence are computed independently and
//! compared on every automorphism pair.
//!
//! Run with: cargo run --example two_strip_factorisations

use subdirect::factorisation::{orthstrip_check, product_covers, twisted_diagonal};
use subdirect::group::GroupSpec;
use subdirect::morphism::{enumerate_automorphisms, Automorphism};
use subdirect::power::DirectPower;

fn main() {
    for name in ["cyclic:3", "cyclic:5", "symmetric:3", "alternating:4"] {
        let spec: GroupSpec = name.parse().unwrap();
        let g = spec.build().unwrap();
        let report = orthstrip_check(&g, 1_000_000).unwrap();
        println!(
            "{:<4} pairs {:>4}  factorising {:>3}  uniform composites {:>3}  mismatches {}",
            report.group,
            report.pairs_checked,
            report.factorising_pairs,
            report.uniform_composites,
            report.mismatches.len()
        );
        assert!(report.mismatches.is_empty());
        assert_eq!(report.factorising_pairs, report.uniform_composites);
    }

    // the explicit covering over C3: diagonal times inversion-twisted diagonal
    let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
    let power = DirectPower::new(c3.clone(), 2).unwrap();
    let id = Automorphism::identity(&c3);
    let inv = Automorphism::new(c3.clone(), vec![0, 2, 1]).unwrap();
    let x = twisted_diagonal(&power, &id).unwrap();
    let y = twisted_diagonal(&power, &inv).unwrap();
    let verdict = product_covers(&x, &y).unwrap();
    println!(
        "\nC3 x C3 = {{(g,g)}}·{{(g,-g)}}: holds = {} (|X| = {}, |Y| = {}, |X∩Y| = {})",
        verdict.holds, verdict.x_order, verdict.y_order, verdict.intersection_order
    );

    // over A5 nothing covers; the verdict carries an explicit uncovered tuple
    let a5 = GroupSpec::Alternating { n: 5 }.build().unwrap();
    let power = DirectPower::new(a5.clone(), 2).unwrap();
    let phi = enumerate_automorphisms(&a5)[3].clone();
    let x = twisted_diagonal(&power, &Automorphism::identity(&a5)).unwrap();
    let y = twisted_diagonal(&power, &phi).unwrap();
    let verdict = product_covers(&x, &y).unwrap();
    println!(
        "A5 x A5 twisted diagonals: holds = {}, |XY| = {} of {}, uncovered tuple: {:?}",
        verdict.holds, verdict.product_order, verdict.ambient_order, verdict.witness
    );
}
