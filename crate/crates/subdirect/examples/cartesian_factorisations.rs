//! Abstract cartesian factorisations of A5^k and invariance under
//! factor-transitive automorphism groups.
//!
//! The pair {K_12|3, K_13|2} of partition diagonals over A5^3 satisfies the
//! cartesian equations but is invariant under no factor-transitive group,
//! which is exactly why the full diagonal of A5^3 admits no invariant family
//! at all. Over A5^4 the compound pair {strip(1,2)xT3xT4, T1xT2xstrip(3,4)}
//! is both cartesian and invariant, with pairwise disjoint involved strips.
//!
//! Run with: cargo run --example cartesian_factorisations

use subdirect::cartesian::{
    enumerate_cartesian_over, involved_strips_pairwise_disjoint, is_invariant,
    mainstripfact_verify, verify_cartesian, CartesianFactorisation, FactorTransitiveAutGroup,
    MainStripFactStatus, PowerAutomorphism,
};
use subdirect::group::GroupSpec;
use subdirect::power::DirectPower;
use subdirect::strips::StripProduct;

fn main() {
    let a5 = GroupSpec::Alternating { n: 5 }.build().unwrap();
    let m3 = DirectPower::new(a5.clone(), 3).unwrap();

    // the boundary example over A5^3
    let k12 = StripProduct::from_supports(m3.clone(), &[vec![0, 1]], vec![2]).unwrap();
    let k13 = StripProduct::from_supports(m3.clone(), &[vec![0, 2]], vec![1]).unwrap();
    let family = vec![k12, k13];
    let verdict = verify_cartesian(&m3, &family).unwrap();
    println!(
        "{{K_12|3, K_13|2}} over A5^3: cartesian = {}, |M0| = {}, M0 subdirect = {}",
        verdict.holds, verdict.m0_order, verdict.m0_subdirect
    );

    let mut invariant_under_some_transitive = false;
    for perm in [vec![1, 2, 0], vec![2, 0, 1], vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0]] {
        let g = PowerAutomorphism::pure_permutation(&a5, perm).unwrap();
        if let Ok(g0) = FactorTransitiveAutGroup::new(3, vec![g]) {
            if is_invariant(&family, &g0).unwrap() {
                invariant_under_some_transitive = true;
            }
        }
    }
    println!("invariant under some transitive factor group: {invariant_under_some_transitive}");

    // enumeration above the full diagonal of A5^3: empty
    let diag = StripProduct::from_supports(m3.clone(), &[vec![0, 1, 2]], vec![]).unwrap();
    let rot = PowerAutomorphism::pure_permutation(&a5, vec![1, 2, 0]).unwrap();
    let g0 = FactorTransitiveAutGroup::new(3, vec![rot]).unwrap();
    let enumeration = enumerate_cartesian_over(&m3, &diag, &g0).unwrap();
    println!(
        "invariant families above diag(A5^3): {} (from {} candidates, {} subsets)",
        enumeration.families.len(),
        enumeration.candidates_considered,
        enumeration.index_sets_checked
    );

    // the compound pair over A5^4
    let m4 = DirectPower::new(a5.clone(), 4).unwrap();
    let k1 = StripProduct::from_supports(m4.clone(), &[vec![0, 1]], vec![2, 3]).unwrap();
    let k2 = StripProduct::from_supports(m4.clone(), &[vec![2, 3]], vec![0, 1]).unwrap();
    let kk = CartesianFactorisation::new(m4, vec![k1, k2]).unwrap();
    let swap = PowerAutomorphism::pure_permutation(&a5, vec![2, 3, 0, 1]).unwrap();
    let flip = PowerAutomorphism::pure_permutation(&a5, vec![1, 0, 2, 3]).unwrap();
    let g0 = FactorTransitiveAutGroup::new(4, vec![swap, flip]).unwrap();
    println!(
        "\ncompound pair over A5^4: invariant = {}, involved strips disjoint = {}",
        is_invariant(kk.factors(), &g0).unwrap(),
        involved_strips_pairwise_disjoint(&kk)
    );
    match mainstripfact_verify(&kk, &g0).unwrap().status {
        MainStripFactStatus::VacuousDisjoint => {
            println!("two-conclusion proposition: vacuous (disjoint involved strips), as it must be over A5")
        }
        other => println!("unexpected status {other:?}"),
    }
}
