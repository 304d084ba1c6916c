//! Coset actions of diagonal type and wreath products in product action.
//!
//! A diagonal action is the right-coset action of M = T^k on the cosets of a
//! stabiliser that is a product of pairwise disjoint non-trivial full strips
//! covering every coordinate, extended by factor permutations that normalise
//! the strip structure. Points are canonical coset representatives: the
//! least tuple of the coset under lexicographic order, which is exactly the
//! tuple carrying the identity at each strip's least support coordinate.
//! Point ids are the mixed-radix encoding of the remaining coordinates, so
//! lookups need no hashing and reports are bit-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartesian::{
    enumerate_cartesian_over, CartesianEnumeration, FactorTransitiveAutGroup, PowerAutomorphism,
};
use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup, GroupSpec};
use crate::power::DirectPower;
use crate::rng::Xoshiro256PlusPlus;
use crate::strips::{StripProduct, StripProductJson};

/// Default cap on the number of points of a built action.
pub const DEFAULT_POINT_CAP: u128 = 1_000_000;

/// Checks budget above which equivariance verification switches from
/// exhaustive to seeded sampling.
const EQUIVARIANCE_EXHAUSTIVE_CAP: u64 = 200_000;
const EQUIVARIANCE_SAMPLE: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalType {
    Simple,
    Compound,
}

/// An element of the extended group: a base tuple followed by a factor
/// permutation (apply the tuple first, then permute coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagElement {
    pub m: Vec<ElementId>,
    pub top: Vec<usize>,
}

/// The right-coset action of T^k extended by factor permutations, with the
/// stabiliser of the base point a strip product in canonical form.
pub struct DiagonalAction {
    power: DirectPower,
    stabiliser: StripProduct,
    top_gens: Vec<Vec<usize>>,
    /// Non-leader coordinates, ascending; the mixed-radix digits of a point.
    /// Strip leaders carry the identity in every canonical representative.
    free_coords: Vec<usize>,
    degree: usize,
    m_transitive: bool,
}

impl std::fmt::Debug for DiagonalAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DiagonalAction({:?} / {:?}, {} points)",
            self.power,
            self.stabiliser
                .strips()
                .iter()
                .map(|s| s.support())
                .collect::<Vec<_>>(),
            self.degree
        )
    }
}

impl DiagonalAction {
    /// Builds the coset action. The base group must be non-abelian simple,
    /// the strips must cover every coordinate, and each top generator must
    /// normalise the stabiliser (so twists conjugate correctly).
    pub fn build(
        base: Arc<FiniteGroup>,
        stabiliser: StripProduct,
        top_gens: Vec<Vec<usize>>,
        point_cap: u128,
    ) -> Result<DiagonalAction> {
        if base.is_abelian() {
            return Err(Error::BaseNotSimple {
                name: base.name().to_string(),
                defect: "abelian".to_string(),
            });
        }
        if !base.is_simple() {
            return Err(Error::BaseNotSimple {
                name: base.name().to_string(),
                defect: "not simple".to_string(),
            });
        }
        if !Arc::ptr_eq(stabiliser.power().base(), &base) {
            return Err(Error::InvalidInput(
                "stabiliser lives over a different base group".into(),
            ));
        }
        if !stabiliser.full_coords().is_empty() {
            return Err(Error::InvalidInput(
                "the stabiliser must be a product of non-trivial strips; a full \
                 coordinate would make it contain a whole factor"
                    .into(),
            ));
        }
        if !stabiliser.is_subdirect() {
            return Err(Error::NotSubdirect {
                coordinate: stabiliser.covered().iter().position(|&c| !c).unwrap_or(0),
                projection_size: 1,
                factor_order: base.order(),
            });
        }
        let k = stabiliser.power().k();
        let r = stabiliser.strips().len();
        let n = base.order() as u128;
        let mut degree: u128 = 1;
        for _ in 0..(k - r) {
            degree = degree.checked_mul(n).ok_or(Error::PointCapExceeded {
                points: u128::MAX,
                cap: point_cap,
            })?;
        }
        if degree > point_cap {
            return Err(Error::PointCapExceeded {
                points: degree,
                cap: point_cap,
            });
        }
        for top in &top_gens {
            let id_comps: Vec<_> = (0..k)
                .map(|_| crate::morphism::Automorphism::identity(&base))
                .collect();
            let image = stabiliser.transform(top, &id_comps)?;
            if image != stabiliser {
                return Err(Error::InvalidInput(format!(
                    "factor permutation {top:?} does not normalise the strip structure"
                )));
            }
        }
        let leaders: Vec<usize> = stabiliser.strips().iter().map(|s| s.support()[0]).collect();
        let free_coords: Vec<usize> = (0..k).filter(|c| !leaders.contains(c)).collect();
        let mut action = DiagonalAction {
            power: stabiliser.power().clone(),
            stabiliser,
            top_gens,
            free_coords,
            degree: degree as usize,
            m_transitive: false,
        };
        action.m_transitive = action.orbit_of_base_is_everything();
        Ok(action)
    }

    pub fn power(&self) -> &DirectPower {
        &self.power
    }

    pub fn stabiliser(&self) -> &StripProduct {
        &self.stabiliser
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_point(&self) -> usize {
        0
    }

    pub fn diagonal_type(&self) -> DiagonalType {
        if self.stabiliser.strips().len() == 1 {
            DiagonalType::Simple
        } else {
            DiagonalType::Compound
        }
    }

    pub fn top_gens(&self) -> &[Vec<usize>] {
        &self.top_gens
    }

    /// Canonical representative of the point: identity at strip leaders, the
    /// point's mixed-radix digits at the remaining coordinates.
    pub fn rep_of(&self, point: usize) -> Vec<ElementId> {
        let n = self.power.base().order();
        let mut rep = vec![0 as ElementId; self.power.k()];
        let mut rest = point;
        for &c in self.free_coords.iter().rev() {
            rep[c] = (rest % n) as ElementId;
            rest /= n;
        }
        rep
    }

    /// The canonical representative of the coset containing `tuple`: each
    /// strip parameter is pinned so the leader coordinate becomes the
    /// identity, which yields the lexicographically least coset member.
    pub fn canonicalise(&self, tuple: &[ElementId]) -> Vec<ElementId> {
        let base = self.power.base();
        let mut rep = tuple.to_vec();
        for strip in self.stabiliser.strips() {
            let leader = strip.support()[0];
            let param = base.inv(tuple[leader]);
            for (pos, &c) in strip.support().iter().enumerate() {
                rep[c] = base.mul(strip.twist_at(pos).apply(param), tuple[c]);
            }
        }
        rep
    }

    pub fn point_of_rep(&self, rep: &[ElementId]) -> usize {
        let n = self.power.base().order();
        let mut id = 0usize;
        for &c in &self.free_coords {
            id = id * n + rep[c] as usize;
        }
        id
    }

    pub fn point_of(&self, tuple: &[ElementId]) -> usize {
        self.point_of_rep(&self.canonicalise(tuple))
    }

    /// Action of a base-tuple element (right multiplication).
    pub fn act_m(&self, point: usize, m: &[ElementId]) -> usize {
        let rep = self.rep_of(point);
        self.point_of(&self.power.mul(&rep, m))
    }

    /// Action of a factor permutation: coordinate i of the image carries the
    /// old coordinate at the permutation's preimage.
    pub fn act_top(&self, point: usize, top: &[usize]) -> usize {
        let rep = self.rep_of(point);
        let mut moved = vec![0 as ElementId; rep.len()];
        for (i, &v) in rep.iter().enumerate() {
            moved[top[i]] = v;
        }
        self.point_of(&moved)
    }

    pub fn act(&self, point: usize, g: &DiagElement) -> usize {
        let rep = self.rep_of(point);
        let mut y = self.power.mul(&rep, &g.m);
        let mut moved = vec![0 as ElementId; y.len()];
        for (i, v) in y.drain(..).enumerate() {
            moved[g.top[i]] = v;
        }
        self.point_of(&moved)
    }

    /// Product g·h in the extended group, so that acting by g then h equals
    /// acting by g.mul(h).
    pub fn mul(&self, g: &DiagElement, h: &DiagElement) -> DiagElement {
        let k = self.power.k();
        // (m1, p1)(m2, p2) = (m1 · m2^(p1^-1), p2 ∘ p1)
        let twisted: Vec<ElementId> = (0..k).map(|i| h.m[g.top[i]]).collect();
        DiagElement {
            m: self.power.mul(&g.m, &twisted),
            top: (0..k).map(|i| h.top[g.top[i]]).collect(),
        }
    }

    pub fn identity_element(&self) -> DiagElement {
        DiagElement {
            m: self.power.identity(),
            top: (0..self.power.k()).collect(),
        }
    }

    /// Generators of the extended group: base generators per coordinate, then
    /// the top permutations.
    pub fn group_generators(&self) -> Vec<DiagElement> {
        let k = self.power.k();
        let mut gens: Vec<DiagElement> = self
            .power
            .generating_tuples()
            .into_iter()
            .map(|m| DiagElement {
                m,
                top: (0..k).collect(),
            })
            .collect();
        for top in &self.top_gens {
            gens.push(DiagElement {
                m: self.power.identity(),
                top: top.clone(),
            });
        }
        gens
    }

    fn orbit_of_base_is_everything(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut count = 1usize;
        let mut stack = vec![0usize];
        let gens = self.power.generating_tuples();
        while let Some(p) = stack.pop() {
            for m in &gens {
                let q = self.act_m(p, m);
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
        count == self.degree
    }

    pub fn m_transitive(&self) -> bool {
        self.m_transitive
    }

    /// Action-axiom check: the identity fixes everything and acting by g
    /// then h matches acting by their product. Exhaustive over generator
    /// pairs and all points up to a work bound, seeded sampling above it.
    pub fn verify_action_axioms(&self) -> bool {
        let id = self.identity_element();
        let gens = self.group_generators();
        for p in 0..self.degree {
            if self.act(p, &id) != p {
                return false;
            }
        }
        let work = self.degree as u64 * (gens.len() as u64).pow(2);
        if work <= 1_000_000 {
            for g in &gens {
                for h in &gens {
                    let gh = self.mul(g, h);
                    for p in 0..self.degree {
                        if self.act(self.act(p, g), h) != self.act(p, &gh) {
                            return false;
                        }
                    }
                }
            }
        } else {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
            for _ in 0..100_000 {
                let g = &gens[rng.gen_range(gens.len() as u64) as usize];
                let h = &gens[rng.gen_range(gens.len() as u64) as usize];
                let p = rng.gen_range(self.degree as u64) as usize;
                if self.act(self.act(p, g), h) != self.act(p, &self.mul(g, h)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Structural quasiprimitivity surrogate: transitivity of the base power,
/// factor-transitivity of the top part, and subdirectness of the stabiliser.
/// Full normal-subgroup enumeration is deliberately not performed.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiprimitivityReport {
    pub m_transitive: bool,
    pub top_transitive_on_factors: bool,
    pub stabiliser_subdirect: bool,
    pub all_hold: bool,
    pub note: &'static str,
}

pub fn check_structural_quasiprimitivity(d: &DiagonalAction) -> QuasiprimitivityReport {
    let k = d.power().k();
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for top in d.top_gens() {
            let j = top[i];
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    let top_transitive = seen.into_iter().all(|s| s);
    let m_transitive = d.m_transitive();
    let stabiliser_subdirect = d.stabiliser().is_subdirect();
    QuasiprimitivityReport {
        m_transitive,
        top_transitive_on_factors: top_transitive,
        stabiliser_subdirect,
        all_hold: m_transitive && top_transitive && stabiliser_subdirect,
        note: "structural checks only; normal subgroups are not enumerated",
    }
}

/// Sym(Γ) ≀ S_l acting on Γ^l in product action. Points are mixed-radix
/// encoded with coordinate 1 most significant.
#[derive(Debug, Clone)]
pub struct ProductActionWreath {
    gamma: usize,
    ell: usize,
    degree: usize,
}

/// An element (g_1, ..., g_l; σ): base permutations of Γ and a top
/// permutation of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathElement {
    pub base: Vec<Vec<u32>>,
    pub top: Vec<usize>,
}

impl ProductActionWreath {
    pub fn build(gamma: usize, ell: usize, point_cap: u128) -> Result<ProductActionWreath> {
        if gamma < 2 || ell < 2 {
            return Err(Error::InvalidInput(
                "the product action needs |Γ| >= 2 and l >= 2".into(),
            ));
        }
        let mut degree: u128 = 1;
        for _ in 0..ell {
            degree = degree
                .checked_mul(gamma as u128)
                .ok_or(Error::PointCapExceeded {
                    points: u128::MAX,
                    cap: point_cap,
                })?;
        }
        if degree > point_cap {
            return Err(Error::PointCapExceeded {
                points: degree,
                cap: point_cap,
            });
        }
        Ok(ProductActionWreath {
            gamma,
            ell,
            degree: degree as usize,
        })
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement {
            base: (0..self.ell)
                .map(|_| (0..self.gamma as u32).collect())
                .collect(),
            top: (0..self.ell).collect(),
        }
    }

    pub fn decode(&self, point: usize) -> Vec<u32> {
        let mut digits = vec![0u32; self.ell];
        let mut rest = point;
        for i in (0..self.ell).rev() {
            digits[i] = (rest % self.gamma) as u32;
            rest /= self.gamma;
        }
        digits
    }

    pub fn encode(&self, digits: &[u32]) -> usize {
        digits
            .iter()
            .fold(0usize, |acc, &d| acc * self.gamma + d as usize)
    }

    /// Product action: coordinate i of the image is γ_{iσ^-1} moved by
    /// g_{iσ^-1}.
    pub fn act(&self, point: usize, e: &WreathElement) -> usize {
        let digits = self.decode(point);
        let mut inv_top = vec![0usize; self.ell];
        for (i, &t) in e.top.iter().enumerate() {
            inv_top[t] = i;
        }
        let image: Vec<u32> = (0..self.ell)
            .map(|i| {
                let j = inv_top[i];
                e.base[j][digits[j] as usize]
            })
            .collect();
        self.encode(&image)
    }

    /// (g; σ)(h; τ) = (j ↦ g_j then h_{jσ}; σ then τ), so that acting twice
    /// matches acting by the product.
    pub fn mul(&self, e1: &WreathElement, e2: &WreathElement) -> WreathElement {
        let base = (0..self.ell)
            .map(|j| {
                let hj = &e2.base[e1.top[j]];
                e1.base[j].iter().map(|&x| hj[x as usize]).collect()
            })
            .collect();
        let top = (0..self.ell).map(|j| e2.top[e1.top[j]]).collect();
        WreathElement { base, top }
    }

    pub fn validate(&self, e: &WreathElement) -> Result<()> {
        if e.base.len() != self.ell || e.top.len() != self.ell {
            return Err(Error::InvalidInput("wreath element has wrong arity".into()));
        }
        let mut seen = vec![false; self.ell];
        for &t in &e.top {
            if t >= self.ell || seen[t] {
                return Err(Error::InvalidInput("top permutation is not a bijection".into()));
            }
            seen[t] = true;
        }
        for g in &e.base {
            if g.len() != self.gamma {
                return Err(Error::InvalidInput("base permutation has wrong degree".into()));
            }
            let mut seen = vec![false; self.gamma];
            for &x in g {
                if x as usize >= self.gamma || seen[x as usize] {
                    return Err(Error::InvalidInput(
                        "base permutation is not a bijection".into(),
                    ));
                }
                seen[x as usize] = true;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub mode: VerificationMode,
    pub checks: u64,
    pub failures: u64,
}

/// An explicit permutational embedding of the extended diagonal group into
/// Sym(Δ) ≀ S_r in product action: the point bijection Ω → Δ^r and a wreath
/// image per group generator.
#[derive(Debug, Clone)]
pub struct EmbeddingWitness {
    pub delta_size: usize,
    pub r: usize,
    pub bijection: Vec<usize>,
    pub generators: Vec<DiagElement>,
    pub generator_images: Vec<WreathElement>,
    pub verification: EquivarianceReport,
}

/// Splits a compound diagonal action along its strips: coordinates grouped
/// by support give M = M_1 × ... × M_r with M_ω the product of the per-block
/// strips, Δ the block-1 coset space, and Ω identified with Δ^r.
pub fn embed_compound(d: &DiagonalAction, sample_seed: u64) -> Result<EmbeddingWitness> {
    if d.diagonal_type() == DiagonalType::Simple {
        return Err(Error::SimpleTypeNoEmbedding);
    }
    let strips = d.stabiliser().strips();
    let r = strips.len();
    let m = strips[0].support().len();
    if strips.iter().any(|s| s.support().len() != m) {
        return Err(Error::InvalidInput(
            "strips of different support sizes do not identify the point set \
             with a power; a factor-transitive top group forces equal sizes"
                .into(),
        ));
    }
    let base = d.power().base();
    let n = base.order();
    let delta_size = n.pow((m - 1) as u32);

    // block data: support coordinates, with the leader first
    let blocks: Vec<&[usize]> = strips.iter().map(|s| s.support()).collect();

    // δ-id of a block inside a canonical representative: mixed radix over the
    // block's non-leader coordinates in ascending order
    let delta_of = |rep: &[ElementId], b: usize| -> usize {
        blocks[b][1..]
            .iter()
            .fold(0usize, |acc, &c| acc * n + rep[c] as usize)
    };
    // writes δ digits back into a tuple over block b (leader stays identity)
    let write_delta = |tuple: &mut [ElementId], b: usize, delta: usize| {
        let mut rest = delta;
        for &c in blocks[b][1..].iter().rev() {
            tuple[c] = (rest % n) as ElementId;
            rest /= n;
        }
    };

    let wreath = ProductActionWreath::build(delta_size, r, u128::MAX)?;
    let bijection: Vec<usize> = (0..d.degree())
        .map(|p| {
            let rep = d.rep_of(p);
            let digits: Vec<u32> = (0..r).map(|b| delta_of(&rep, b) as u32).collect();
            wreath.encode(&digits)
        })
        .collect();

    // per-block canonicalisation: pin the block's strip parameter
    let canonicalise_block = |tuple: &mut [ElementId], b: usize| {
        let strip = &strips[b];
        let leader = strip.support()[0];
        let param = base.inv(tuple[leader]);
        for (pos, &c) in strip.support().iter().enumerate() {
            tuple[c] = base.mul(strip.twist_at(pos).apply(param), tuple[c]);
        }
    };

    let k = d.power().k();
    let generators = d.group_generators();
    let mut generator_images = Vec::with_capacity(generators.len());
    for g in &generators {
        // induced block permutation: block b lands where its support goes
        let mut top = vec![usize::MAX; r];
        for b in 0..r {
            let mut moved: Vec<usize> = blocks[b].iter().map(|&c| g.top[c]).collect();
            moved.sort_unstable();
            let target = blocks
                .iter()
                .position(|bb| bb == &moved.as_slice())
                .ok_or_else(|| {
                    Error::InvalidInput(
                        "a generator does not permute the strip blocks".into(),
                    )
                })?;
            top[b] = target;
        }
        // base map for source block b: transport a block rep through the
        // generator and read the δ-id at the target block
        let base_maps: Vec<Vec<u32>> = (0..r)
            .map(|b| {
                (0..delta_size as u32)
                    .map(|delta| {
                        let mut tuple = vec![0 as ElementId; k];
                        write_delta(&mut tuple, b, delta as usize);
                        // multiply by the block part of g.m, then permute
                        let mut y = vec![0 as ElementId; k];
                        for &c in blocks[b] {
                            y[g.top[c]] = base.mul(tuple[c], g.m[c]);
                        }
                        let tb = top[b];
                        canonicalise_block(&mut y, tb);
                        delta_of(&y, tb) as u32
                    })
                    .collect()
            })
            .collect();
        let image = WreathElement {
            base: base_maps,
            top,
        };
        wreath.validate(&image)?;
        generator_images.push(image);
    }

    // equivariance: bijection(p · g) = bijection(p) · image(g)
    let total_checks = (d.degree() as u64) * (generators.len() as u64);
    let verification = if total_checks <= EQUIVARIANCE_EXHAUSTIVE_CAP {
        let mut failures = 0u64;
        for p in 0..d.degree() {
            for (g, img) in generators.iter().zip(&generator_images) {
                if bijection[d.act(p, g)] != wreath.act(bijection[p], img) {
                    failures += 1;
                }
            }
        }
        EquivarianceReport {
            mode: VerificationMode::Exhaustive,
            checks: total_checks,
            failures,
        }
    } else {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(sample_seed);
        let mut failures = 0u64;
        for _ in 0..EQUIVARIANCE_SAMPLE {
            let p = rng.gen_range(d.degree() as u64) as usize;
            let gi = rng.gen_range(generators.len() as u64) as usize;
            if bijection[d.act(p, &generators[gi])]
                != wreath.act(bijection[p], &generator_images[gi])
            {
                failures += 1;
            }
        }
        EquivarianceReport {
            mode: VerificationMode::Sampled,
            checks: EQUIVARIANCE_SAMPLE,
            failures,
        }
    };
    if verification.failures > 0 {
        return Err(Error::InvalidInput(format!(
            "equivariance failed on {} of {} checks",
            verification.failures, verification.checks
        )));
    }
    Ok(EmbeddingWitness {
        delta_size,
        r,
        bijection,
        generators,
        generator_images,
        verification,
    })
}

/// Search transcript for invariant cartesian factorisations of M above the
/// stabiliser; empty for simple type, non-empty for compound.
#[derive(Debug)]
pub struct DecompositionSearch {
    pub diagonal_type: DiagonalType,
    pub candidates_considered: usize,
    pub index_sets_checked: usize,
    pub g0_generators: Vec<crate::cartesian::PowerAutomorphismJson>,
    pub families: Vec<Vec<StripProductJson>>,
}

/// Reduces product-action embeddings to invariant cartesian factorisations
/// with intersection the point stabiliser (the point-stabiliser subgroups of
/// the base coordinates of a wreath overgroup form exactly such a family),
/// then enumerates them.
pub fn search_invariant_cartesian_decompositions(d: &DiagonalAction) -> Result<DecompositionSearch> {
    let base = d.power().base();
    if d.top_gens().is_empty() {
        return Err(Error::HypothesisNotCertified(
            "the reduction needs a factor-transitive top group".into(),
        ));
    }
    let gens: Vec<PowerAutomorphism> = d
        .top_gens()
        .iter()
        .map(|p| PowerAutomorphism::pure_permutation(base, p.clone()))
        .collect::<Result<_>>()?;
    let g0 = FactorTransitiveAutGroup::new(d.power().k(), gens)?;
    let g0_generators = g0.generators().iter().map(|g| g.to_json()).collect();
    let CartesianEnumeration {
        families,
        candidates_considered,
        index_sets_checked,
    } = enumerate_cartesian_over(d.power(), d.stabiliser(), &g0)?;
    Ok(DecompositionSearch {
        diagonal_type: d.diagonal_type(),
        candidates_considered,
        index_sets_checked,
        g0_generators,
        families: families
            .iter()
            .map(|f| f.factors().iter().map(|k| k.to_json()).collect())
            .collect(),
    })
}

/// Containment of the base power in the kernel of the top projection:
/// verified directly on the generator images, and numerically through the
/// divisibility argument (p^l divides |Ω| but not l!, so a transitive M
/// cannot embed into S_l).
#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub base_generators_in_kernel: bool,
    pub least_prime: u64,
    pub ell: u64,
    pub prime_power_divides_degree: bool,
    pub prime_power_divides_ell_factorial: bool,
}

pub fn prime_power_divides_factorial(p: u64, ell: u64) -> bool {
    // exponent of p in l! by Legendre's formula
    let mut exponent = 0u64;
    let mut q = p;
    while q <= ell {
        exponent += ell / q;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    exponent >= ell
}

fn least_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

pub fn check_base_group_containment(
    witness: &EmbeddingWitness,
    m_generator_count: usize,
) -> ContainmentReport {
    let in_kernel = witness
        .generator_images
        .iter()
        .take(m_generator_count)
        .all(|img| img.top.iter().enumerate().all(|(i, &t)| i == t));
    let p = least_prime_factor(witness.delta_size as u64);
    let ell = witness.r as u64;
    // p^l | |Ω| since |Ω| = |Γ|^l
    let prime_power_divides_degree = true;
    ContainmentReport {
        base_generators_in_kernel: in_kernel,
        least_prime: p,
        ell,
        prime_power_divides_degree,
        prime_power_divides_ell_factorial: prime_power_divides_factorial(p, ell),
    }
}

/// Round-trippable serialisation of an embedding witness, self-contained for
/// `diag verify-witness`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub base: GroupSpec,
    pub k: usize,
    pub stabiliser: StripProductJson,
    pub top_generators: Vec<Vec<usize>>,
    pub delta_size: usize,
    pub r: usize,
    pub bijection: Vec<usize>,
    pub generator_images: Vec<WreathElement>,
}

impl WitnessFile {
    pub fn from_witness(
        base: &GroupSpec,
        d: &DiagonalAction,
        witness: &EmbeddingWitness,
    ) -> WitnessFile {
        WitnessFile {
            base: base.clone(),
            k: d.power().k(),
            stabiliser: d.stabiliser().to_json(),
            top_generators: d.top_gens().to_vec(),
            delta_size: witness.delta_size,
            r: witness.r,
            bijection: witness.bijection.clone(),
            generator_images: witness.generator_images.clone(),
        }
    }

    /// Rebuilds the action and re-verifies the witness: bijectivity of the
    /// point map and equivariance of every generator image on every point.
    pub fn verify(&self, point_cap: u128) -> Result<EquivarianceReport> {
        let base = self.base.build()?;
        let power = DirectPower::new(base.clone(), self.k)?;
        let stabiliser = StripProduct::from_json(&power, &self.stabiliser)?;
        let d = DiagonalAction::build(base, stabiliser, self.top_generators.clone(), point_cap)?;
        if self.bijection.len() != d.degree() {
            return Err(Error::InvalidInput(
                "bijection length differs from the degree".into(),
            ));
        }
        let wreath = ProductActionWreath::build(self.delta_size, self.r, point_cap)?;
        let mut seen = vec![false; wreath.degree()];
        for &q in &self.bijection {
            if q >= wreath.degree() || seen[q] {
                return Err(Error::InvalidInput(
                    "the point map is not a bijection onto Δ^r".into(),
                ));
            }
            seen[q] = true;
        }
        let generators = d.group_generators();
        if generators.len() != self.generator_images.len() {
            return Err(Error::InvalidInput(
                "generator image count differs from the generator count".into(),
            ));
        }
        for img in &self.generator_images {
            wreath.validate(img)?;
        }
        let mut failures = 0u64;
        let mut checks = 0u64;
        for p in 0..d.degree() {
            for (g, img) in generators.iter().zip(&self.generator_images) {
                checks += 1;
                if self.bijection[d.act(p, g)] != wreath.act(self.bijection[p], img) {
                    failures += 1;
                }
            }
        }
        if failures > 0 {
            return Err(Error::InvalidInput(format!(
                "equivariance failed on {failures} of {checks} checks"
            )));
        }
        Ok(EquivarianceReport {
            mode: VerificationMode::Exhaustive,
            checks,
            failures,
        })
    }
}

/// Convenience builder used by the CLI and the examples: identity-twisted
/// strips from supports, with the natural block-respecting top group.
pub fn build_standard_action(
    base: &Arc<FiniteGroup>,
    k: usize,
    supports: &[Vec<usize>],
    point_cap: u128,
) -> Result<DiagonalAction> {
    let power = DirectPower::new(base.clone(), k)?;
    let stabiliser = StripProduct::from_supports(power, supports, vec![])?;
    let top_gens = natural_top_generators(supports, k)?;
    DiagonalAction::build(base.clone(), stabiliser, top_gens, point_cap)
}

/// Factor permutations that preserve identity-twisted strip structure and act
/// transitively on the factors: rotations inside the first block, a block
/// rotation, and a block swap where applicable. Requires equal block sizes.
pub fn natural_top_generators(supports: &[Vec<usize>], k: usize) -> Result<Vec<Vec<usize>>> {
    if supports.is_empty() {
        return Err(Error::InvalidInput("need at least one strip".into()));
    }
    let m = supports[0].len();
    if supports.iter().any(|s| s.len() != m) {
        return Err(Error::InvalidInput(
            "the natural top group needs equal strip sizes".into(),
        ));
    }
    if supports.iter().map(|s| s.len()).sum::<usize>() != k {
        return Err(Error::InvalidInput("strips must cover all coordinates".into()));
    }
    let r = supports.len();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    // rotate every block internally in step (preserves identity twists)
    if m >= 2 {
        let mut perm: Vec<usize> = (0..k).collect();
        for block in supports {
            for (pos, &c) in block.iter().enumerate() {
                perm[c] = block[(pos + 1) % m];
            }
        }
        gens.push(perm);
    }
    // rotate the blocks
    if r >= 2 {
        let mut perm: Vec<usize> = (0..k).collect();
        for b in 0..r {
            let next = (b + 1) % r;
            for (pos, &c) in supports[b].iter().enumerate() {
                perm[c] = supports[next][pos];
            }
        }
        gens.push(perm);
    }
    Ok(gens)
}

/// Diagnosis counts keyed by class, used in reports.
pub type ClassCounts = BTreeMap<String, u64>;
