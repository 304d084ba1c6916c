//! The six-coordinate shape: two strips of length three against three strips
//! of length two. Covering G^6 would need a pair of automorphisms whose
//! difference maps are jointly surjective onto G x G, and |G x G| > |G| rules
//! that out for every non-trivial finite G. The report measures how far the
//! best automorphism pair falls short.
//!
//! Run with: cargo run --example g6_deficiency

use subdirect::factorisation::g6_joint_uniform_search;
use subdirect::group::GroupSpec;

fn main() {
    for name in ["cyclic:3", "symmetric:3", "alternating:4"] {
        let spec: GroupSpec = name.parse().unwrap();
        let g = spec.build().unwrap();
        let report = g6_joint_uniform_search(&g, 1_000_000).unwrap();
        println!("{}:", report.group);
        println!(
            "  cardinality certificate |GxG| > |G|: {} ({} > {})",
            report.cardinality_certificate,
            report.group_order * report.group_order,
            report.group_order
        );
        println!(
            "  best joint image over {} automorphism pairs: {} of {} needed",
            report.pairs_checked,
            report.max_joint_image,
            report.group_order * report.group_order
        );
        println!(
            "  |X| = {}, |Y| = {}, |XY| = {} of |G^6| = {}, deficiency {}",
            report.x_order,
            report.y_order,
            report.product_order,
            report.ambient_order,
            report.deficiency
        );
    }
    println!("\nwhether an infinite group can admit a jointly surjective pair is open;");
    println!("these runs certify only the finite impossibility.");
}
