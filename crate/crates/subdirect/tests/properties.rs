//! Property tests for the structural invariants that hold on all inputs, not
//! just the curated examples.

use proptest::prelude::*;
use std::sync::Arc;

use subdirect::factorisation::{product_covers, product_covers_handles, solve_product};
use subdirect::group::{ElementId, FiniteGroup, GroupSpec};
use subdirect::morphism::{enumerate_automorphisms, Automorphism};
use subdirect::power::DirectPower;
use subdirect::strips::{FullStrip, StripProduct};
use subdirect::{ProductActionWreath, WreathElement};

fn s3() -> Arc<FiniteGroup> {
    // one shared instance so ambient checks (pointer equality) succeed across
    // independently generated values
    static S3: std::sync::OnceLock<Arc<FiniteGroup>> = std::sync::OnceLock::new();
    S3.get_or_init(|| GroupSpec::Symmetric { n: 3 }.build().unwrap())
        .clone()
}

fn strip_product_strategy(
    group: Arc<FiniteGroup>,
    k: usize,
) -> impl Strategy<Value = StripProduct> {
    let autos = enumerate_automorphisms(&group);
    // a partition of 0..k encoded as a choice vector: coordinate c joins
    // block choice[c] % (blocks so far + 1)
    (
        proptest::collection::vec(0usize..k, k),
        proptest::collection::vec(0usize..autos.len(), k),
    )
        .prop_map(move |(choices, twist_picks)| {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for (c, &choice) in choices.iter().enumerate() {
                let slot = choice % (blocks.len() + 1);
                if slot == blocks.len() {
                    blocks.push(vec![c]);
                } else {
                    blocks[slot].push(c);
                }
            }
            let power = DirectPower::new(group.clone(), k).unwrap();
            let mut strips = Vec::new();
            let mut full = Vec::new();
            for block in blocks {
                if block.len() == 1 {
                    full.push(block[0]);
                } else {
                    let twists: Vec<Automorphism> = block[1..]
                        .iter()
                        .map(|&c| autos[twist_picks[c] % autos.len()].clone())
                        .collect();
                    strips.push(FullStrip::new(group.clone(), block, twists).unwrap());
                }
            }
            StripProduct::new(power, strips, full).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The symbolic order-formula verdict agrees with the extensional one on
    /// every pair of strip products over S3^3, witnesses included.
    #[test]
    fn symbolic_and_extensional_verdicts_agree(
        x in strip_product_strategy(s3(), 3),
        y in strip_product_strategy(s3(), 3),
    ) {
        let symbolic = product_covers(&x, &y).unwrap();
        let extensional = product_covers_handles(&x.to_handle(), &y.to_handle()).unwrap();
        prop_assert_eq!(symbolic.holds, extensional.holds);
        prop_assert_eq!(symbolic.intersection_order, extensional.intersection_order);
        prop_assert_eq!(symbolic.product_order, extensional.product_order);
    }

    /// Intersections computed by coordinate unification match membership on
    /// every element of Y, and the symbolic order equals the brute count.
    #[test]
    fn intersection_membership_is_consistent(
        x in strip_product_strategy(s3(), 3),
        y in strip_product_strategy(s3(), 3),
    ) {
        let meet = x.to_diagonal_form().intersect(&y.to_diagonal_form()).unwrap();
        let mut brute = 0usize;
        for t in &y.to_handle().closure().unwrap().elements {
            let in_both = x.contains(t);
            prop_assert_eq!(meet.contains(t), in_both);
            brute += usize::from(in_both);
        }
        prop_assert_eq!(meet.order(), num_bigint::BigUint::from(brute));
    }

    /// Every pair (a, b) counted by the product solver multiplies to the
    /// target, and the count matches a brute-force sweep over X.
    #[test]
    fn product_solver_counts_match_brute_force(
        x in strip_product_strategy(s3(), 2),
        y in strip_product_strategy(s3(), 2),
        tuple in proptest::collection::vec(0u32..6, 2),
    ) {
        let solutions = solve_product(&x.to_diagonal_form(), &y.to_diagonal_form(), &tuple).unwrap();
        let power = x.power().clone();
        let xc = x.to_handle();
        let brute = xc
            .closure()
            .unwrap()
            .elements
            .iter()
            .filter(|a| y.contains(&power.mul(&power.inv(a), &tuple)))
            .count();
        prop_assert_eq!(solutions.count, num_bigint::BigUint::from(brute));
        if let Some((a, b)) = solutions.sample {
            prop_assert_eq!(power.mul(&a, &b), tuple);
            prop_assert!(x.contains(&a));
            prop_assert!(y.contains(&b));
        }
    }

    /// Same solver cross-check at k = 3, where components can chain through
    /// several coordinates before closing.
    #[test]
    fn product_solver_counts_match_brute_force_k3(
        x in strip_product_strategy(s3(), 3),
        y in strip_product_strategy(s3(), 3),
        tuple in proptest::collection::vec(0u32..6, 3),
    ) {
        let solutions = solve_product(&x.to_diagonal_form(), &y.to_diagonal_form(), &tuple).unwrap();
        let power = x.power().clone();
        let brute = x
            .to_handle()
            .closure()
            .unwrap()
            .elements
            .iter()
            .filter(|a| y.contains(&power.mul(&power.inv(a), &tuple)))
            .count();
        prop_assert_eq!(solutions.count, num_bigint::BigUint::from(brute));
        if let Some((a, b)) = solutions.sample {
            prop_assert_eq!(power.mul(&a, &b), tuple);
            prop_assert!(x.contains(&a));
            prop_assert!(y.contains(&b));
        }
    }

    /// Projection commutes with realisation: projecting the intensional
    /// strip product equals projecting its element closure.
    #[test]
    fn projection_commutes_with_realisation(
        sp in strip_product_strategy(s3(), 3),
        mask in 1u8..7,
    ) {
        let indices: Vec<usize> = (0..3).filter(|c| mask & (1 << c) != 0).collect();
        let intensional = sp.project(&indices).unwrap();
        let extensional = sp.to_handle().project(&indices).unwrap();
        prop_assert_eq!(intensional.order(), extensional.order().unwrap());
        for t in &extensional.closure().unwrap().elements {
            prop_assert!(intensional.contains(t));
        }
    }
}

fn wreath_element_strategy(gamma: usize, ell: usize) -> impl Strategy<Value = WreathElement> {
    let perm = move |n: usize| {
        proptest::collection::vec(0usize..1000, n).prop_map(move |keys| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&i| (keys[i], i));
            idx
        })
    };
    (proptest::collection::vec(perm(gamma), ell), perm(ell)).prop_map(|(base, top)| {
        WreathElement {
            base: base
                .into_iter()
                .map(|p| p.into_iter().map(|x| x as u32).collect())
                .collect(),
            top,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Acting by two wreath elements in sequence equals acting by their
    /// product, on every point of Γ^l.
    #[test]
    fn wreath_action_respects_multiplication(
        e1 in wreath_element_strategy(4, 3),
        e2 in wreath_element_strategy(4, 3),
    ) {
        let w = ProductActionWreath::build(4, 3, 1_000_000).unwrap();
        let prod = w.mul(&e1, &e2);
        for p in 0..w.degree() {
            prop_assert_eq!(w.act(w.act(p, &e1), &e2), w.act(p, &prod));
        }
    }
}

/// Strip products realise sets of the declared order.
#[test]
fn realised_order_matches_declared_order() {
    let g = s3();
    let power = DirectPower::new(g.clone(), 3).unwrap();
    let sp = StripProduct::from_supports(power, &[vec![0, 2]], vec![1]).unwrap();
    let closure = sp.to_handle();
    assert_eq!(
        num_bigint::BigUint::from(closure.closure().unwrap().len()),
        sp.order()
    );
    let every: Vec<Vec<ElementId>> = closure.closure().unwrap().elements.clone();
    for t in every {
        assert!(sp.contains(&t));
    }
}
