//! Simple versus compound diagonal type: product-action embeddings exist
//! exactly in the compound case.
//!
//! The compound action of A5^4 with strips {1,2} and {3,4} on 3600 points
//! embeds into Sym(60) wr S2 in product action, with an explicit equivariant
//! bijection. The simple action of A5^3 on 3600 points admits no invariant
//! cartesian decomposition, which certifies that no such embedding exists at
//! this scale.
//!
//! Run with: cargo run --example diagonal_embeddings

use subdirect::action::{
    build_standard_action, check_base_group_containment, check_structural_quasiprimitivity,
    embed_compound, search_invariant_cartesian_decompositions, DEFAULT_POINT_CAP,
};
use subdirect::error::Error;
use subdirect::group::GroupSpec;

fn main() {
    let a5 = GroupSpec::Alternating { n: 5 }.build().unwrap();

    // compound: A5^4 with two strips
    let compound =
        build_standard_action(&a5, 4, &[vec![0, 1], vec![2, 3]], DEFAULT_POINT_CAP).unwrap();
    println!(
        "compound action: {} points, type {:?}",
        compound.degree(),
        compound.diagonal_type()
    );
    let q = check_structural_quasiprimitivity(&compound);
    println!(
        "structural checks: M transitive {}, top factor-transitive {}, stabiliser subdirect {}",
        q.m_transitive, q.top_transitive_on_factors, q.stabiliser_subdirect
    );
    let witness = embed_compound(&compound, 0).unwrap();
    println!(
        "embedding into Sym({}) wr S{}: {} equivariance checks, {} failures",
        witness.delta_size, witness.r, witness.verification.checks, witness.verification.failures
    );
    let m_gens = compound.power().generating_tuples().len();
    let containment = check_base_group_containment(&witness, m_gens);
    println!(
        "base power in the kernel of the top projection: {} (p = {}, p^l | l! : {})",
        containment.base_generators_in_kernel,
        containment.least_prime,
        containment.prime_power_divides_ell_factorial
    );

    // simple: A5^3 with one strip
    let simple = build_standard_action(&a5, 3, &[vec![0, 1, 2]], DEFAULT_POINT_CAP).unwrap();
    println!(
        "\nsimple action: {} points, type {:?}",
        simple.degree(),
        simple.diagonal_type()
    );
    match embed_compound(&simple, 0) {
        Err(Error::SimpleTypeNoEmbedding) => {
            println!("direct embedding refused: simple diagonal type")
        }
        other => println!("unexpected outcome {other:?}"),
    }
    let search = search_invariant_cartesian_decompositions(&simple).unwrap();
    println!(
        "invariant cartesian decompositions: {} (over {} candidates)",
        search.families.len(),
        search.candidates_considered
    );

    // sanity inversion: the compound action does produce a decomposition
    let search = search_invariant_cartesian_decompositions(&compound).unwrap();
    println!(
        "compound sanity check: {} decomposition(s) found",
        search.families.len()
    );
}
