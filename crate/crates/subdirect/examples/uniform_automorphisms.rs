//! Survey of uniform automorphisms over a corpus of small groups.
//!
//! An automorphism a of G is uniform when g -> g^-1·a(g) is surjective; for
//! finite groups this happens exactly when a has no non-identity fixed
//! point. Odd-order abelian groups have the inversion map as a uniform
//! automorphism, while non-solvable groups have none at all.
//!
//! Run with: cargo run --example uniform_automorphisms

use subdirect::group::GroupSpec;
use subdirect::morphism::{enumerate_automorphisms, fixed_points, has_uniform_automorphism, uniformity};

fn main() {
    let corpus: Vec<(&str, GroupSpec)> = vec![
        ("C2", "cyclic:2".parse().unwrap()),
        ("C3", "cyclic:3".parse().unwrap()),
        ("C5", "cyclic:5".parse().unwrap()),
        ("C9", "cyclic:9".parse().unwrap()),
        ("C3xC3", "product:cyclic:3,cyclic:3".parse().unwrap()),
        ("S3", "symmetric:3".parse().unwrap()),
        (
            "D4",
            GroupSpec::Perm {
                degree: 4,
                generators: vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]],
            },
        ),
        ("A4", "alternating:4".parse().unwrap()),
        ("S4", "symmetric:4".parse().unwrap()),
        ("A5", "alternating:5".parse().unwrap()),
        ("S5", "symmetric:5".parse().unwrap()),
    ];

    println!("group   |G|  solvable  |Aut|  uniform  uniform<=>fpf");
    println!("------  ---  --------  -----  -------  -------------");
    for (label, spec) in corpus {
        let g = spec.build().expect("corpus groups are within the cap");
        let autos = enumerate_automorphisms(&g);
        let mut uniform = 0usize;
        let mut equivalent = true;
        for a in &autos {
            let report = uniformity(a);
            equivalent &= report.uniform == (fixed_points(a) == vec![0]);
            if report.uniform {
                uniform += 1;
            }
        }
        println!(
            "{label:<7} {:>3}  {:<8} {:>5}  {uniform:>7}  {equivalent}",
            g.order(),
            g.is_solvable(),
            autos.len(),
        );
        if !g.is_solvable() {
            assert_eq!(uniform, 0, "non-solvable groups admit no uniform automorphism");
        }
    }

    // the classical positive example: inversion on an odd abelian group
    let c9 = GroupSpec::Cyclic { n: 9 }.build().unwrap();
    let found = has_uniform_automorphism(&c9).expect("C9 has uniform automorphisms");
    println!(
        "\nfirst uniform automorphism of C9 (enumeration order): {:?}",
        found.map()
    );
    let report = uniformity(&found);
    println!(
        "uniform: {}, fixed points beyond the identity: {:?}",
        report.uniform, report.fixed_point
    );
}
