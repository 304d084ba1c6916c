//! Exhaustive and sampled searches for strip-product factorisations of T^k.
//!
//! Over A5 (no uniform automorphism) no pair of strip products covers, and
//! every rejected pair carries a structural diagnosis. Over C3 the hypothesis
//! fails and factorisations exist, which the control run demonstrates.
//!
//! Run with: cargo run --example strip_search

use subdirect::factorisation::{
    diagnose_nonfactorisation, nostripfact_search, Diagnosis, SearchMode, DEFAULT_SEARCH_BUDGET,
};
use subdirect::group::GroupSpec;
use subdirect::power::DirectPower;
use subdirect::strips::StripProduct;

fn main() {
    let a5 = GroupSpec::Alternating { n: 5 }.build().unwrap();

    for k in [2usize, 3] {
        let report =
            nostripfact_search(&a5, k, SearchMode::Exhaustive, DEFAULT_SEARCH_BUDGET).unwrap();
        println!(
            "A5 k={k} exhaustive: {} candidate pairs, {} factorisations, diagnoses {:?}",
            report.candidates_checked, report.factorisations_found, report.diagnoses
        );
        assert_eq!(report.factorisations_found, 0);
    }

    for k in [4usize, 5] {
        let report = nostripfact_search(
            &a5,
            k,
            SearchMode::Sampled { n: 10_000, seed: 0 },
            DEFAULT_SEARCH_BUDGET,
        )
        .unwrap();
        println!(
            "A5 k={k} sampled(10000, seed 0): {} factorisations, diagnoses {:?}",
            report.factorisations_found, report.diagnoses
        );
        assert_eq!(report.factorisations_found, 0);
    }

    // control: C3 admits a uniform automorphism and the hypothesis is needed
    let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
    let control =
        nostripfact_search(&c3, 2, SearchMode::Exhaustive, DEFAULT_SEARCH_BUDGET).unwrap();
    println!(
        "\nC3 k=2 control: hypothesis holds = {}, factorisations found = {} of {} pairs",
        control.hypothesis_holds, control.factorisations_found, control.candidates_checked
    );
    assert!(control.factorisations_found > 0);

    // a cycle configuration and its diagnosis
    let m4 = DirectPower::new(a5.clone(), 4).unwrap();
    let x = StripProduct::from_supports(m4.clone(), &[vec![0, 1], vec![2, 3]], vec![]).unwrap();
    let y = StripProduct::from_supports(m4, &[vec![1, 2], vec![0, 3]], vec![]).unwrap();
    match diagnose_nonfactorisation(&x, &y).unwrap() {
        Diagnosis::Cycle {
            composite_uniform, ..
        } => println!(
            "\n{{01,23}} vs {{12,03}}: cycle diagnosis, composite uniform = {composite_uniform}"
        ),
        d => println!("\nunexpected diagnosis {d:?}"),
    }
}
