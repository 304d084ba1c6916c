//! Factorisations XY = T^k with strip products as factors.
//!
//! The central question is whether two products of pairwise disjoint full
//! strips cover the whole power, decided exactly through the subgroup order
//! formula |XY| = |X||Y| / |X∩Y| with the intersection computed symbolically.
//! When the base group has no uniform automorphism the answer is always no,
//! and [`diagnose_nonfactorisation`] reports which structural obstruction
//! applies: an isolated strip, a fat edge, a cycle (whose composite twist
//! would have to be uniform), or the terminal path contradiction.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};
use crate::morphism::{enumerate_automorphisms, has_uniform_automorphism, uniformity, Automorphism};
use crate::power::{DirectPower, SubgroupHandle};
use crate::rng::{Xoshiro256PlusPlus, ALGORITHM};
use crate::strips::{AllowedSet, CoordState, DiagonalForm, FullStrip, StripProduct, StripProductJson};

/// Default budget on per-pair verdict evaluations in searches.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1_000_000;

/// Witness searches scan at most this many tuples.
const WITNESS_SCAN_CAP: u128 = 1_000_000;

/// Verdict of the order-formula check |X||Y| = |X∩Y|·|T^k|.
#[derive(Debug, Clone)]
pub struct FactorisationVerdict {
    pub holds: bool,
    pub x_order: BigUint,
    pub y_order: BigUint,
    pub intersection_order: BigUint,
    pub product_order: BigUint,
    pub ambient_order: BigUint,
    /// A tuple outside XY, found by deterministic search when the
    /// factorisation fails (single-coordinate tuples first, then
    /// lexicographic scan, capped).
    pub witness: Option<Vec<ElementId>>,
}

/// Count (and one sample) of pairs (a, b) with a ∈ A, b ∈ B and a·b = x,
/// computed by unifying the two linked-coordinate systems.
#[derive(Debug, Clone)]
pub struct ProductSolutions {
    pub count: BigUint,
    pub sample: Option<(Vec<ElementId>, Vec<ElementId>)>,
}

/// Solves a·b = x over two diagonal forms in the same ambient power.
pub fn solve_product(a: &DiagonalForm, b: &DiagonalForm, x: &[ElementId]) -> Result<ProductSolutions> {
    if !a.power().same_ambient(b.power()) {
        return Err(Error::AmbientMismatch);
    }
    let power = a.power();
    let base = power.base();
    let n = base.order();
    let k = power.k();
    if x.len() != k {
        return Err(Error::InvalidInput("target tuple has the wrong length".into()));
    }
    let na = a.components().len();
    let vars = na + b.components().len();

    // relations var_u = map(var_v), stored per edge; pins var = value
    struct EdgeRel {
        u: usize,
        v: usize,
        // value(u) = map[value(v)]
        map: Vec<ElementId>,
    }
    let mut edges: Vec<EdgeRel> = Vec::new();
    let mut pins: Vec<(usize, ElementId)> = Vec::new();

    for (sa, (sb, &xc)) in a.coords().iter().zip(b.coords().iter().zip(x)) {
        match (sa, sb) {
            (CoordState::ForcedIdentity, CoordState::ForcedIdentity) => {
                if xc != 0 {
                    return Ok(ProductSolutions {
                        count: BigUint::zero(),
                        sample: None,
                    });
                }
            }
            (CoordState::ForcedIdentity, CoordState::Linked { comp, map }) => {
                let p = map.iter().position(|&y| y == xc).unwrap() as ElementId;
                pins.push((na + comp, p));
            }
            (CoordState::Linked { comp, map }, CoordState::ForcedIdentity) => {
                let p = map.iter().position(|&y| y == xc).unwrap() as ElementId;
                pins.push((*comp, p));
            }
            (
                CoordState::Linked { comp: ca, map: ma },
                CoordState::Linked { comp: cb, map: mb },
            ) => {
                // ma(pa) * mb(pb) = xc  =>  pa = ma^-1(xc * mb(pb)^-1)
                let mut ma_inv = vec![0 as ElementId; n];
                for (i, &v) in ma.iter().enumerate() {
                    ma_inv[v as usize] = i as ElementId;
                }
                let map: Vec<ElementId> = (0..n as ElementId)
                    .map(|pb| ma_inv[base.mul(xc, base.inv(mb[pb as usize])) as usize])
                    .collect();
                edges.push(EdgeRel {
                    u: *ca,
                    v: na + cb,
                    map,
                });
            }
        }
    }

    // adjacency
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vars]; // (edge idx, neighbour)
    for (i, e) in edges.iter().enumerate() {
        adj[e.u].push((i, e.v));
        adj[e.v].push((i, e.u));
    }

    let allowed_of = |var: usize| -> &AllowedSet {
        if var < na {
            &a.components()[var]
        } else {
            &b.components()[var - na]
        }
    };

    let mut expr: Vec<Option<Vec<ElementId>>> = vec![None; vars];
    let mut visited = vec![false; vars];
    let mut count = BigUint::one();
    let mut assignment: Vec<ElementId> = vec![0; vars];

    for root in 0..vars {
        if visited[root] {
            continue;
        }
        // BFS assigning expression maps relative to the component root
        let mut members = vec![root];
        visited[root] = true;
        expr[root] = Some((0..n as ElementId).collect());
        let mut back_edges: Vec<usize> = Vec::new();
        let mut used_edges: HashSet<usize> = HashSet::new();
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for &(ei, w) in &adj[u] {
                if used_edges.contains(&ei) {
                    continue;
                }
                if visited[w] {
                    back_edges.push(ei);
                    used_edges.insert(ei);
                    continue;
                }
                used_edges.insert(ei);
                let e = &edges[ei];
                let expr_u = expr[u].as_ref().unwrap();
                // traverse the edge to express w in terms of the root
                let expr_w: Vec<ElementId> = if e.v == w {
                    // value(u) = map(value(w)) => value(w) = map^-1(value(u))
                    let mut inv = vec![0 as ElementId; n];
                    for (i, &v) in e.map.iter().enumerate() {
                        inv[v as usize] = i as ElementId;
                    }
                    (0..n).map(|r| inv[expr_u[r] as usize]).collect()
                } else {
                    // w == e.u: value(w) = map(value(v)) with v == u
                    (0..n).map(|r| e.map[expr_u[r] as usize]).collect()
                };
                expr[w] = Some(expr_w);
                visited[w] = true;
                members.push(w);
            }
        }
        // admissible root values
        let mut comp_count = 0usize;
        let mut least: Option<ElementId> = None;
        'roots: for r in 0..n {
            for &m in &members {
                let val = expr[m].as_ref().unwrap()[r];
                if !allowed_of(m).contains(val) {
                    continue 'roots;
                }
            }
            for &(var, pin) in &pins {
                if visited[var] && members.contains(&var) && expr[var].as_ref().unwrap()[r] != pin {
                    continue 'roots;
                }
            }
            for &ei in &back_edges {
                let e = &edges[ei];
                let vu = expr[e.u].as_ref().unwrap()[r];
                let vv = expr[e.v].as_ref().unwrap()[r];
                if vu != e.map[vv as usize] {
                    continue 'roots;
                }
            }
            comp_count += 1;
            if least.is_none() {
                least = Some(r as ElementId);
                for &m in &members {
                    assignment[m] = expr[m].as_ref().unwrap()[r];
                }
            }
        }
        if comp_count == 0 {
            return Ok(ProductSolutions {
                count: BigUint::zero(),
                sample: None,
            });
        }
        count *= BigUint::from(comp_count);
    }

    // materialise the sample pair
    let eval = |form: &DiagonalForm, offset: usize| -> Vec<ElementId> {
        (0..k)
            .map(|c| match &form.coords()[c] {
                CoordState::ForcedIdentity => 0,
                CoordState::Linked { comp, map } => map[assignment[offset + comp] as usize],
            })
            .collect()
    };
    let sa = eval(a, 0);
    let sb = eval(b, na);
    debug_assert_eq!(power.mul(&sa, &sb), x);
    Ok(ProductSolutions {
        count,
        sample: Some((sa, sb)),
    })
}

fn decode_tuple(mut index: u128, k: usize, n: u128) -> Vec<ElementId> {
    let mut t = vec![0 as ElementId; k];
    for c in (0..k).rev() {
        t[c] = (index % n) as ElementId;
        index /= n;
    }
    t
}

/// Deterministic search for a tuple outside XY: single-coordinate tuples in
/// (coordinate, value) order first, then a capped lexicographic scan.
fn find_uncovered_tuple(a: &DiagonalForm, b: &DiagonalForm) -> Result<Option<Vec<ElementId>>> {
    let power = a.power();
    let n = power.base().order();
    let k = power.k();
    for c in 0..k {
        for v in 1..n as ElementId {
            let mut t = vec![0 as ElementId; k];
            t[c] = v;
            if solve_product(a, b, &t)?.count.is_zero() {
                return Ok(Some(t));
            }
        }
    }
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let scan = total.min(WITNESS_SCAN_CAP);
    for idx in 0..scan {
        let t = decode_tuple(idx, k, n as u128);
        if solve_product(a, b, &t)?.count.is_zero() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Public entry to the deterministic uncovered-tuple search over diagonal
/// forms.
pub fn solve_uncovered(a: &DiagonalForm, b: &DiagonalForm) -> Result<Option<Vec<ElementId>>> {
    find_uncovered_tuple(a, b)
}

/// Order-formula verdict for two strip products in the same ambient power.
///
/// ```
/// use subdirect::factorisation::{product_covers, twisted_diagonal};
/// use subdirect::group::GroupSpec;
/// use subdirect::morphism::Automorphism;
/// use subdirect::power::DirectPower;
///
/// let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
/// let power = DirectPower::new(c3.clone(), 2).unwrap();
/// let diagonal = twisted_diagonal(&power, &Automorphism::identity(&c3)).unwrap();
/// let inverted = twisted_diagonal(
///     &power,
///     &Automorphism::new(c3, vec![0, 2, 1]).unwrap(),
/// ).unwrap();
///
/// // the inversion twist is uniform on C3, so the two diagonals cover
/// assert!(product_covers(&diagonal, &inverted).unwrap().holds);
/// // the diagonal against itself covers only itself
/// let verdict = product_covers(&diagonal, &diagonal).unwrap();
/// assert!(!verdict.holds);
/// assert!(verdict.witness.is_some());
/// ```
pub fn product_covers(x: &StripProduct, y: &StripProduct) -> Result<FactorisationVerdict> {
    if !x.power().same_ambient(y.power()) {
        return Err(Error::AmbientMismatch);
    }
    let fa = x.to_diagonal_form();
    let fb = y.to_diagonal_form();
    let x_order = x.order();
    let y_order = y.order();
    let intersection_order = solve_product(&fa, &fb, &x.power().identity())?.count;
    let ambient_order = x.power().order();
    let product_order = &x_order * &y_order / &intersection_order;
    let holds = product_order == ambient_order;
    let witness = if holds {
        None
    } else {
        find_uncovered_tuple(&fa, &fb)?
    };
    Ok(FactorisationVerdict {
        holds,
        x_order,
        y_order,
        intersection_order,
        product_order,
        ambient_order,
        witness,
    })
}

/// Extensional analogue of [`product_covers`] for arbitrary subgroup handles;
/// closures are capped. Serves as an independent cross-check of the symbolic
/// route.
pub fn product_covers_handles(x: &SubgroupHandle, y: &SubgroupHandle) -> Result<FactorisationVerdict> {
    if !x.power().same_ambient(y.power()) {
        return Err(Error::AmbientMismatch);
    }
    let power = x.power();
    let cx = x.closure()?;
    let cy = y.closure()?;
    let mut inter = 0usize;
    let (small, big) = if cx.len() <= cy.len() { (cx, cy) } else { (cy, cx) };
    for t in &small.elements {
        if big.contains(t) {
            inter += 1;
        }
    }
    let x_order = BigUint::from(cx.len());
    let y_order = BigUint::from(cy.len());
    let intersection_order = BigUint::from(inter);
    let ambient_order = power.order();
    let product_order = &x_order * &y_order / &intersection_order;
    let holds = product_order == ambient_order;
    let witness = if holds {
        None
    } else {
        // membership test through the coset sweep: t ∈ XY iff some a ∈ X has
        // a^-1 t ∈ Y
        let in_product = |t: &[ElementId]| {
            cx.elements
                .iter()
                .any(|a| cy.contains(&power.mul(&power.inv(a), t)))
        };
        let n = power.base().order();
        let k = power.k();
        let mut found = None;
        'outer: for c in 0..k {
            for v in 1..n as ElementId {
                let mut t = vec![0 as ElementId; k];
                t[c] = v;
                if !in_product(&t) {
                    found = Some(t);
                    break 'outer;
                }
            }
        }
        if found.is_none() {
            let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            for idx in 0..total.min(WITNESS_SCAN_CAP) {
                let t = decode_tuple(idx, k, n as u128);
                if !in_product(&t) {
                    found = Some(t);
                    break;
                }
            }
        }
        found
    };
    Ok(FactorisationVerdict {
        holds,
        x_order,
        y_order,
        intersection_order,
        product_order,
        ambient_order,
        witness,
    })
}

/// The twisted diagonal {(g, a(g))} in T^2.
pub fn twisted_diagonal(power: &DirectPower, alpha: &Automorphism) -> Result<StripProduct> {
    if power.k() != 2 {
        return Err(Error::InvalidInput("twisted diagonals live in T^2".into()));
    }
    StripProduct::new(
        power.clone(),
        vec![FullStrip::new(
            power.base().clone(),
            vec![0, 1],
            vec![alpha.clone()],
        )?],
        vec![],
    )
}

/// Exhaustive biconditional check over all automorphism pairs of T:
/// {(g, a(g))}{(g, b(g))} = T^2 exactly when g -> g^-1·(b^-1(a(g))) is
/// surjective. The two sides are computed by independent routes.
#[derive(Debug, Clone)]
pub struct OrthstripReport {
    pub group: String,
    pub automorphism_count: usize,
    pub pairs_checked: u64,
    pub factorising_pairs: u64,
    pub uniform_composites: u64,
    /// Pairs where the order-formula verdict and the uniformity prediction
    /// disagree. Must be empty.
    pub mismatches: Vec<(usize, usize)>,
    pub first_factorising_pair: Option<(usize, usize)>,
}

pub fn orthstrip_check(t: &Arc<FiniteGroup>, budget: u128) -> Result<OrthstripReport> {
    let autos = enumerate_automorphisms(t);
    let pairs = (autos.len() as u128) * (autos.len() as u128);
    if pairs > budget {
        return Err(Error::BudgetExceeded {
            needed: pairs,
            budget,
            hint: String::new(),
        });
    }
    let power = DirectPower::new(t.clone(), 2)?;
    let mut report = OrthstripReport {
        group: t.name().to_string(),
        automorphism_count: autos.len(),
        pairs_checked: 0,
        factorising_pairs: 0,
        uniform_composites: 0,
        mismatches: Vec::new(),
        first_factorising_pair: None,
    };
    for (i, alpha) in autos.iter().enumerate() {
        let x = twisted_diagonal(&power, alpha)?;
        for (j, beta) in autos.iter().enumerate() {
            let y = twisted_diagonal(&power, beta)?;
            let predicted = uniformity(&alpha.then(&beta.inverse())).uniform;
            let actual = product_covers(&x, &y)?.holds;
            report.pairs_checked += 1;
            if predicted {
                report.uniform_composites += 1;
            }
            if actual {
                report.factorising_pairs += 1;
                if report.first_factorising_pair.is_none() {
                    report.first_factorising_pair = Some((i, j));
                }
            }
            if predicted != actual {
                report.mismatches.push((i, j));
            }
        }
    }
    Ok(report)
}

/// Least s with s^-1·alpha(s) = y. Errors when alpha is not uniform and y is
/// not covered by the difference map.
pub fn uniform_preimage(alpha: &Automorphism, y: ElementId) -> Result<ElementId> {
    let g = alpha.group();
    for s in 0..g.order() as ElementId {
        if g.mul(g.inv(s), alpha.apply(s)) == y {
            return Ok(s);
        }
    }
    Err(Error::InvalidInput(format!(
        "automorphism is not uniform and {y} is outside the image of the difference map"
    )))
}

/// The interleaved strip shapes of the 2d-coordinate factorisation:
/// X has strips {2i-1, 2i} twisted by alpha_i (1-based coordinates) and
/// Y has strips {2i, 2i+1} twisted by beta_i plus the wrap-around strip
/// {1, 2d} carrying beta_d.
pub fn doublestrips_shapes(
    alphas: &[Automorphism],
    betas: &[Automorphism],
) -> Result<(StripProduct, StripProduct)> {
    let d = alphas.len();
    if d == 0 || betas.len() != d {
        return Err(Error::InvalidInput(
            "need d >= 1 twist automorphisms on each side".into(),
        ));
    }
    let group = alphas[0].group().clone();
    let power = DirectPower::new(group.clone(), 2 * d)?;
    let mut x_strips = Vec::new();
    for (i, alpha) in alphas.iter().enumerate() {
        x_strips.push(FullStrip::new(
            group.clone(),
            vec![2 * i, 2 * i + 1],
            vec![alpha.clone()],
        )?);
    }
    let mut y_strips = Vec::new();
    for (i, beta) in betas.iter().enumerate().take(d - 1) {
        y_strips.push(FullStrip::new(
            group.clone(),
            vec![2 * i + 1, 2 * i + 2],
            vec![beta.clone()],
        )?);
    }
    y_strips.push(FullStrip::new(
        group.clone(),
        vec![0, 2 * d - 1],
        vec![betas[d - 1].inverse()],
    )?);
    Ok((
        StripProduct::new(power.clone(), x_strips, vec![])?,
        StripProduct::new(power, y_strips, vec![])?,
    ))
}

#[derive(Debug, Clone)]
pub enum DoublestripsOutcome {
    /// t ∈ X and s ∈ Y with t·s = x, built by the backwards recursion.
    Solved {
        t: Vec<ElementId>,
        s: Vec<ElementId>,
    },
    /// The composite twist is not uniform; the order-formula verdict (holds =
    /// false, with an uncovered tuple) is returned instead.
    NotUniform(FactorisationVerdict),
}

/// Solves t·s = x with t in the alpha-interleaved strip product and s in the
/// beta-interleaved one, provided the composite a1·b1···ad·bd is uniform.
pub fn doublestrips_solve(
    alphas: &[Automorphism],
    betas: &[Automorphism],
    x: &[ElementId],
) -> Result<DoublestripsOutcome> {
    let d = alphas.len();
    if d == 0 || betas.len() != d {
        return Err(Error::InvalidInput(
            "need d >= 1 twist automorphisms on each side".into(),
        ));
    }
    if x.len() != 2 * d {
        return Err(Error::InvalidInput("target must have 2d coordinates".into()));
    }
    let group = alphas[0].group().clone();
    let composite = {
        let mut acc = Automorphism::identity(&group);
        for i in 0..d {
            acc = acc.then(&alphas[i]).then(&betas[i]);
        }
        acc
    };
    if !composite.is_uniform() {
        let (xs, ys) = doublestrips_shapes(alphas, betas)?;
        let verdict = product_covers(&xs, &ys)?;
        return Ok(DoublestripsOutcome::NotUniform(verdict));
    }

    // suffix chains: bchain[i] applies beta_i, alpha_{i+1}, ..., alpha_d, beta_d
    // and schain[i] applies alpha_i, beta_i, ..., alpha_d, beta_d (1-based i)
    let mut bchain: Vec<Automorphism> = vec![Automorphism::identity(&group); d + 1];
    let mut schain: Vec<Automorphism> = vec![Automorphism::identity(&group); d + 1];
    for i in (0..d).rev() {
        let tail = if i + 1 < d {
            schain[i + 1].clone()
        } else {
            Automorphism::identity(&group)
        };
        bchain[i] = betas[i].then(&tail);
        schain[i] = alphas[i].then(&bchain[i]);
    }

    // right-hand side of the defining equation for s0: the product over
    // i = d down to 1 of (x_{2i}^-1 · bchain_i)(x_{2i-1} · schain_i)
    let x1b = |idx: usize| x[idx - 1]; // 1-based access
    let mut rhs = group.identity();
    for i in (1..=d).rev() {
        let term = group.mul(
            bchain[i - 1].apply(group.inv(x1b(2 * i))),
            schain[i - 1].apply(x1b(2 * i - 1)),
        );
        rhs = group.mul(rhs, term);
    }
    let s0 = uniform_preimage(&composite, rhs)?;

    // backwards recursion for s_i, t_i
    let mut s = vec![0 as ElementId; d + 1]; // 1-based
    let mut t = vec![0 as ElementId; d + 1];
    s[d] = betas[d - 1].inverse().apply(s0);
    t[d] = alphas[d - 1]
        .inverse()
        .apply(group.mul(s[d], group.inv(x1b(2 * d))));
    for i in (1..d).rev() {
        s[i] = betas[i - 1]
            .inverse()
            .apply(group.mul(t[i + 1], x1b(2 * i + 1)));
        t[i] = alphas[i - 1]
            .inverse()
            .apply(group.mul(s[i], group.inv(x1b(2 * i))));
    }

    let mut t_tuple = Vec::with_capacity(2 * d);
    for i in 1..=d {
        let ti_inv = group.inv(t[i]);
        t_tuple.push(ti_inv);
        t_tuple.push(alphas[i - 1].apply(ti_inv));
    }
    let mut s_tuple = Vec::with_capacity(2 * d);
    s_tuple.push(betas[d - 1].apply(s[d]));
    for i in 1..d {
        s_tuple.push(s[i]);
        s_tuple.push(betas[i - 1].apply(s[i]));
    }
    s_tuple.push(s[d]);

    // the recursion is trusted only through this check
    let power = DirectPower::new(group.clone(), 2 * d)?;
    let product = power.mul(&t_tuple, &s_tuple);
    assert_eq!(
        product, x,
        "backwards recursion must reproduce the target tuple"
    );
    let (xs, ys) = doublestrips_shapes(alphas, betas)?;
    assert!(xs.contains(&t_tuple) && ys.contains(&s_tuple));
    Ok(DoublestripsOutcome::Solved {
        t: t_tuple,
        s: s_tuple,
    })
}

/// The bipartite intersection graph of the strips of X and Y.
#[derive(Debug, Clone)]
pub struct StripGraph {
    pub x_count: usize,
    pub y_count: usize,
    pub edges: Vec<StripGraphEdge>,
}

#[derive(Debug, Clone)]
pub struct StripGraphEdge {
    pub x_index: usize,
    pub y_index: usize,
    pub shared: Vec<usize>,
    /// The unique shared factor when the intersection is a singleton.
    pub label: Option<usize>,
}

impl StripGraph {
    pub fn degree_x(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.x_index == i).count()
    }

    pub fn degree_y(&self, j: usize) -> usize {
        self.edges.iter().filter(|e| e.y_index == j).count()
    }
}

pub fn build_strip_graph(x: &StripProduct, y: &StripProduct) -> Result<StripGraph> {
    if !x.power().same_ambient(y.power()) {
        return Err(Error::AmbientMismatch);
    }
    if !x.full_coords().is_empty() || !y.full_coords().is_empty() {
        return Err(Error::InvalidInput(
            "strip graphs are defined for products of non-trivial strips only".into(),
        ));
    }
    let mut edges = Vec::new();
    for (i, sx) in x.strips().iter().enumerate() {
        for (j, sy) in y.strips().iter().enumerate() {
            let shared: Vec<usize> = sx
                .support()
                .iter()
                .copied()
                .filter(|c| sy.support().contains(c))
                .collect();
            if !shared.is_empty() {
                let label = if shared.len() == 1 { Some(shared[0]) } else { None };
                edges.push(StripGraphEdge {
                    x_index: i,
                    y_index: j,
                    shared,
                    label,
                });
            }
        }
    }
    Ok(StripGraph {
        x_count: x.strips().len(),
        y_count: y.strips().len(),
        edges,
    })
}

/// Which side of the bipartite strip graph a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    X,
    Y,
}

/// Structural reason a strip-product pair cannot factorise the power,
/// following the proof's case order.
#[derive(Debug, Clone)]
pub enum Diagnosis {
    /// A strip meets no strip of the other side, so the projection onto its
    /// support is a proper subgroup.
    IsolatedVertex {
        side: Side,
        index: usize,
        support: Vec<usize>,
    },
    /// Two strips share at least two support coordinates; the pairwise
    /// projection would need a two-strip factorisation of T^2.
    FatEdge {
        x_index: usize,
        y_index: usize,
        shared: Vec<usize>,
    },
    /// The strip graph contains a cycle; covering would force the composite
    /// twist around the cycle to be uniform.
    Cycle {
        x_indices: Vec<usize>,
        y_indices: Vec<usize>,
        /// Alternating edge labels around the cycle, starting with the
        /// X1-Y1 crossing.
        composite: Automorphism,
        composite_uniform: bool,
    },
    /// The graph is a forest of singleton-labelled edges; chasing the forced
    /// equations from a leaf pins everything to the identity.
    PathContradiction { witness: Option<Vec<ElementId>> },
}

/// Diagnosis classes as tallied by searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum DiagnosisClass {
    #[serde(rename = "claim1_isolated_vertex")]
    IsolatedVertex,
    #[serde(rename = "claim2_fat_edge")]
    FatEdge,
    #[serde(rename = "claim3_cycle")]
    Cycle,
    #[serde(rename = "claims4to6_path")]
    PathContradiction,
}

impl Diagnosis {
    pub fn class(&self) -> DiagnosisClass {
        match self {
            Diagnosis::IsolatedVertex { .. } => DiagnosisClass::IsolatedVertex,
            Diagnosis::FatEdge { .. } => DiagnosisClass::FatEdge,
            Diagnosis::Cycle { .. } => DiagnosisClass::Cycle,
            Diagnosis::PathContradiction { .. } => DiagnosisClass::PathContradiction,
        }
    }
}

/// Shortest cycle in the bipartite support graph, as alternating index lists
/// (x_1, y_1, ..., x_d, y_d) with x_1 ~ y_1 ~ x_2 ~ ... ~ y_d ~ x_1.
fn find_cycle(supports_x: &[&[usize]], supports_y: &[&[usize]]) -> Option<(Vec<usize>, Vec<usize>)> {
    let rx = supports_x.len();
    let adj = |xi: usize, yj: usize| supports_x[xi].iter().any(|c| supports_y[yj].contains(c));
    // vertices: 0..rx are X, rx..rx+ry are Y
    let ry = supports_y.len();
    let vertices = rx + ry;
    let neighbours = |v: usize| -> Vec<usize> {
        if v < rx {
            (0..ry).filter(|&j| adj(v, j)).map(|j| rx + j).collect()
        } else {
            (0..rx).filter(|&i| adj(i, v - rx)).collect()
        }
    };
    let mut best: Option<Vec<usize>> = None;
    for start in 0..vertices {
        // BFS tree from start; a non-tree edge closing back gives a cycle
        let mut parent = vec![usize::MAX; vertices];
        let mut depth = vec![usize::MAX; vertices];
        depth[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in neighbours(u) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && depth[w] <= depth[u] {
                    // walk both branches up to the meeting point
                    let (mut pu, mut pw) = (u, w);
                    let mut left = vec![pu];
                    let mut right = vec![pw];
                    while depth[pu] > depth[pw] {
                        pu = parent[pu];
                        left.push(pu);
                    }
                    while depth[pw] > depth[pu] {
                        pw = parent[pw];
                        right.push(pw);
                    }
                    while pu != pw {
                        pu = parent[pu];
                        left.push(pu);
                        pw = parent[pw];
                        right.push(pw);
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    let cycle = left;
                    if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    let cycle = best?;
    // rotate so an X vertex leads, then split into alternating sides
    let lead = cycle.iter().position(|&v| v < rx)?;
    let rotated: Vec<usize> = cycle[lead..].iter().chain(&cycle[..lead]).copied().collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (pos, &v) in rotated.iter().enumerate() {
        if pos % 2 == 0 {
            debug_assert!(v < rx);
            xs.push(v);
        } else {
            debug_assert!(v >= rx);
            ys.push(v - rx);
        }
    }
    Some((xs, ys))
}

/// Support-only diagnosis class, shared by the search tallies (the class of a
/// pair depends only on the two support structures, not on the twists).
pub fn diagnose_supports(supports_x: &[&[usize]], supports_y: &[&[usize]]) -> DiagnosisClass {
    for sx in supports_x {
        if !supports_y.iter().any(|sy| sx.iter().any(|c| sy.contains(c))) {
            return DiagnosisClass::IsolatedVertex;
        }
    }
    for sy in supports_y {
        if !supports_x.iter().any(|sx| sy.iter().any(|c| sx.contains(c))) {
            return DiagnosisClass::IsolatedVertex;
        }
    }
    for sx in supports_x {
        for sy in supports_y {
            if sx.iter().filter(|c| sy.contains(c)).count() >= 2 {
                return DiagnosisClass::FatEdge;
            }
        }
    }
    if find_cycle(supports_x, supports_y).is_some() {
        return DiagnosisClass::Cycle;
    }
    DiagnosisClass::PathContradiction
}

/// Full diagnosis for a pair over a base certified to have no uniform
/// automorphism. The first failing structural predicate, in proof order, is
/// reported; cycles come with the explicit composite twist.
pub fn diagnose_nonfactorisation(x: &StripProduct, y: &StripProduct) -> Result<Diagnosis> {
    let base = x.power().base();
    if has_uniform_automorphism(base).is_some() {
        return Err(Error::HypothesisNotCertified(format!(
            "{} admits a uniform automorphism; the structural case analysis does not apply",
            base.name()
        )));
    }
    let graph = build_strip_graph(x, y)?;
    if x.strips().is_empty() || y.strips().is_empty() {
        return Err(Error::InvalidInput(
            "diagnosis needs at least one strip on each side".into(),
        ));
    }

    for (i, s) in x.strips().iter().enumerate() {
        if graph.degree_x(i) == 0 {
            return Ok(Diagnosis::IsolatedVertex {
                side: Side::X,
                index: i,
                support: s.support().to_vec(),
            });
        }
    }
    for (j, s) in y.strips().iter().enumerate() {
        if graph.degree_y(j) == 0 {
            return Ok(Diagnosis::IsolatedVertex {
                side: Side::Y,
                index: j,
                support: s.support().to_vec(),
            });
        }
    }
    for e in &graph.edges {
        if e.shared.len() >= 2 {
            return Ok(Diagnosis::FatEdge {
                x_index: e.x_index,
                y_index: e.y_index,
                shared: e.shared.clone(),
            });
        }
    }

    let supports_x: Vec<&[usize]> = x.strips().iter().map(|s| s.support()).collect();
    let supports_y: Vec<&[usize]> = y.strips().iter().map(|s| s.support()).collect();
    if let Some((xs, ys)) = find_cycle(&supports_x, &supports_y) {
        // walk the cycle x_1 - y_1 - x_2 - ... - y_d - x_1 composing the
        // chain maps: through x_i from its y_{i-1} crossing to its y_i
        // crossing, then through y_i onwards
        let d = xs.len();
        let shared_coord = |sx: &[usize], sy: &[usize]| -> usize {
            *sx.iter().find(|c| sy.contains(c)).unwrap()
        };
        let mut composite = Automorphism::identity(base);
        for i in 0..d {
            let prev_y = if i == 0 { ys[d - 1] } else { ys[i - 1] };
            let enter_x = shared_coord(supports_x[xs[i]], supports_y[prev_y]);
            let exit_x = shared_coord(supports_x[xs[i]], supports_y[ys[i]]);
            let sx = &x.strips()[xs[i]];
            let from = sx.support().iter().position(|&c| c == enter_x).unwrap();
            let to = sx.support().iter().position(|&c| c == exit_x).unwrap();
            composite = composite.then(&sx.chain_map(from, to));

            let next_x = xs[(i + 1) % d];
            let enter_y = exit_x;
            let exit_y = shared_coord(supports_x[next_x], supports_y[ys[i]]);
            let sy = &y.strips()[ys[i]];
            let from = sy.support().iter().position(|&c| c == enter_y).unwrap();
            let to = sy.support().iter().position(|&c| c == exit_y).unwrap();
            composite = composite.then(&sy.chain_map(from, to));
        }
        let composite_uniform = composite.is_uniform();
        return Ok(Diagnosis::Cycle {
            x_indices: xs,
            y_indices: ys,
            composite,
            composite_uniform,
        });
    }

    // forest with singleton labels: the terminal case
    let witness = find_uncovered_tuple(&x.to_diagonal_form(), &y.to_diagonal_form())?;
    Ok(Diagnosis::PathContradiction { witness })
}

/// Candidate strip-product shapes in T^k: partitions of a subset of the
/// coordinates into blocks of size >= 2, in deterministic order.
pub fn enumerate_shapes(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut shapes = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn recurse(
        remaining: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        shapes: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if remaining.is_empty() {
            if !blocks.is_empty() {
                shapes.push(blocks.clone());
            }
            return;
        }
        let lead = remaining[0];
        let rest = &remaining[1..];
        // lead stays uncovered
        recurse(rest, blocks, shapes);
        // lead opens a block with every subset of the rest of size >= 1
        let subsets = 1usize << rest.len();
        for mask in 1..subsets {
            let mut block = vec![lead];
            let mut left = Vec::new();
            for (pos, &c) in rest.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    block.push(c);
                } else {
                    left.push(c);
                }
            }
            blocks.push(block);
            recurse(&left, blocks, shapes);
            blocks.pop();
        }
    }
    let coords: Vec<usize> = (0..k).collect();
    recurse(&coords, &mut blocks, &mut shapes);
    shapes.sort();
    shapes
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SearchMode {
    Exhaustive,
    Sampled { n: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct NostripfactReport {
    pub group: String,
    pub k: usize,
    pub mode: SearchMode,
    /// Hypothesis of the non-factorisation theorem: no uniform automorphism.
    pub hypothesis_holds: bool,
    pub candidates_checked: u128,
    pub verdicts_evaluated: u128,
    pub factorisations_found: u128,
    pub diagnoses: BTreeMap<DiagnosisClass, u128>,
    pub first_witness: Option<(StripProductJson, StripProductJson)>,
    pub rng_algorithm: Option<&'static str>,
}

/// Builds the strip product for a shape and a twist assignment index vector
/// (one automorphism index per non-leader support coordinate, blocks in
/// order).
fn shape_with_twists(
    power: &DirectPower,
    shape: &[Vec<usize>],
    autos: &[Automorphism],
    twist_indices: &[usize],
) -> StripProduct {
    let mut strips = Vec::new();
    let mut pos = 0usize;
    for block in shape {
        let twists: Vec<Automorphism> = block[1..]
            .iter()
            .map(|_| {
                let a = autos[twist_indices[pos]].clone();
                pos += 1;
                a
            })
            .collect();
        strips.push(
            FullStrip::new(power.base().clone(), block.clone(), twists)
                .expect("shape blocks are valid supports"),
        );
    }
    StripProduct::new(power.clone(), strips, vec![]).expect("shape blocks are disjoint")
}

fn twist_dims(shape: &[Vec<usize>]) -> usize {
    shape.iter().map(|b| b.len() - 1).sum()
}

/// Exhaustive or seeded-sample search for factorisations T^k = XY over
/// canonical strip-product pairs.
///
/// Exhaustive mode evaluates per-twist verdicts only for shape pairs that
/// clear the order bound |X||Y| >= |T^k| (all others cannot cover), and
/// normalises X to identity twists: a coordinatewise automorphism of T^k maps
/// the pair (X, Y) to (X0, Y') with identical verdict, so each normalised
/// verdict stands for |Aut T|^dims(X) raw pairs. Reported counts are raw.
pub fn nostripfact_search(
    t: &Arc<FiniteGroup>,
    k: usize,
    mode: SearchMode,
    budget: u128,
) -> Result<NostripfactReport> {
    if k < 2 {
        return Err(Error::InvalidInput("the search needs k >= 2".into()));
    }
    // the canonical shape space grows like the singleton-free Bell numbers
    if k > 10 {
        return Err(Error::BudgetExceeded {
            needed: u128::MAX,
            budget,
            hint: "; strip-product searches are capped at k = 10".into(),
        });
    }
    let power = DirectPower::new(t.clone(), k)?;
    let autos = enumerate_automorphisms(t);
    let aut = autos.len() as u128;
    let shapes = enumerate_shapes(k);
    let hypothesis_holds = has_uniform_automorphism(t).is_none();

    let weight = |shape: &[Vec<usize>]| -> u128 { aut.pow(twist_dims(shape) as u32) };
    let total_products: u128 = shapes.iter().map(|s| weight(s)).sum();
    let identity_twists = |shape: &[Vec<usize>]| -> StripProduct {
        let indices = vec![0usize; twist_dims(shape)];
        let id_pos = autos
            .iter()
            .position(|a| a.is_identity())
            .expect("the identity is an automorphism");
        let indices: Vec<usize> = indices.iter().map(|_| id_pos).collect();
        shape_with_twists(&power, shape, &autos, &indices)
    };

    let mut report = NostripfactReport {
        group: t.name().to_string(),
        k,
        mode: mode.clone(),
        hypothesis_holds,
        candidates_checked: 0,
        verdicts_evaluated: 0,
        factorisations_found: 0,
        diagnoses: BTreeMap::new(),
        first_witness: None,
        rng_algorithm: None,
    };

    match mode {
        SearchMode::Exhaustive => {
            report.candidates_checked = total_products
                .checked_mul(total_products)
                .ok_or(Error::BudgetExceeded {
                    needed: u128::MAX,
                    budget,
                    hint: "; use sampled mode".into(),
                })?;
            // cost: one verdict per Y twist assignment on order-feasible
            // shape pairs
            let mut needed: u128 = 0;
            for sx in &shapes {
                for sy in &shapes {
                    if sx.len() + sy.len() >= k {
                        needed += weight(sy);
                    }
                }
            }
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget,
                    hint: "; use sampled mode".into(),
                });
            }
            for sx in &shapes {
                let mult_x = weight(sx);
                let x0 = identity_twists(sx);
                for sy in &shapes {
                    let mult = mult_x * weight(sy);
                    if hypothesis_holds {
                        let sup_x: Vec<&[usize]> = sx.iter().map(|b| b.as_slice()).collect();
                        let sup_y: Vec<&[usize]> = sy.iter().map(|b| b.as_slice()).collect();
                        let class = diagnose_supports(&sup_x, &sup_y);
                        *report.diagnoses.entry(class).or_insert(0) += mult;
                    }
                    if sx.len() + sy.len() < k {
                        // |X||Y| = |T|^(r_X + r_Y) < |T^k|: cannot cover
                        continue;
                    }
                    let dims = twist_dims(sy);
                    let mut indices = vec![0usize; dims];
                    loop {
                        let y = shape_with_twists(&power, sy, &autos, &indices);
                        let verdict = product_covers(&x0, &y)?;
                        report.verdicts_evaluated += 1;
                        if verdict.holds {
                            report.factorisations_found += mult_x;
                            if report.first_witness.is_none() {
                                report.first_witness = Some((x0.to_json(), y.to_json()));
                            }
                        }
                        // odometer over twist assignments
                        let mut pos = dims;
                        loop {
                            if pos == 0 {
                                break;
                            }
                            pos -= 1;
                            indices[pos] += 1;
                            if indices[pos] < autos.len() {
                                break;
                            }
                            indices[pos] = 0;
                        }
                        if dims == 0 || indices.iter().all(|&i| i == 0) {
                            break;
                        }
                    }
                }
            }
        }
        SearchMode::Sampled { n, seed } => {
            if n as u128 > budget {
                return Err(Error::BudgetExceeded {
                    needed: n as u128,
                    budget,
                    hint: String::new(),
                });
            }
            report.rng_algorithm = Some(ALGORITHM);
            report.candidates_checked = n as u128;
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
            let sample_product = |rng: &mut Xoshiro256PlusPlus| -> StripProduct {
                let mut r = rng.gen_range_u128(total_products);
                let mut chosen = &shapes[0];
                for shape in &shapes {
                    let w = weight(shape);
                    if r < w {
                        chosen = shape;
                        break;
                    }
                    r -= w;
                }
                let dims = twist_dims(chosen);
                let indices: Vec<usize> = (0..dims)
                    .map(|_| rng.gen_range(aut as u64) as usize)
                    .collect();
                shape_with_twists(&power, chosen, &autos, &indices)
            };
            for _ in 0..n {
                let x = sample_product(&mut rng);
                let y = sample_product(&mut rng);
                let verdict = product_covers(&x, &y)?;
                report.verdicts_evaluated += 1;
                if verdict.holds {
                    report.factorisations_found += 1;
                    if report.first_witness.is_none() {
                        report.first_witness = Some((x.to_json(), y.to_json()));
                    }
                } else if hypothesis_holds {
                    let sup_x: Vec<&[usize]> =
                        x.strips().iter().map(|s| s.support()).collect();
                    let sup_y: Vec<&[usize]> =
                        y.strips().iter().map(|s| s.support()).collect();
                    let class = diagnose_supports(&sup_x, &sup_y);
                    *report.diagnoses.entry(class).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Joint-uniformity analysis in G^6: the two-strip-by-three-strip shape can
/// cover G^6 only if a pair of automorphisms has jointly surjective
/// difference maps, which the cardinality bound |G x G| > |G| rules out for
/// finite G. The report measures how far the best pair falls short.
#[derive(Debug, Clone)]
pub struct JointUniformReport {
    pub group: String,
    pub group_order: usize,
    /// |G|^2 > |G| certifies nonexistence of a jointly surjective pair.
    pub cardinality_certificate: bool,
    pub pairs_checked: u64,
    pub max_joint_image: usize,
    pub best_pair: Option<(usize, usize)>,
    pub x_order: BigUint,
    pub y_order: BigUint,
    pub product_order: BigUint,
    pub ambient_order: BigUint,
    pub deficiency: BigUint,
}

pub fn g6_joint_uniform_search(g: &Arc<FiniteGroup>, budget: u128) -> Result<JointUniformReport> {
    if g.order() <= 1 {
        return Err(Error::InvalidInput(
            "the joint-uniformity analysis needs |G| > 1".into(),
        ));
    }
    let autos = enumerate_automorphisms(g);
    let pairs = (autos.len() as u128) * (autos.len() as u128);
    if pairs > budget {
        return Err(Error::BudgetExceeded {
            needed: pairs,
            budget,
            hint: String::new(),
        });
    }
    let n = g.order();
    let mut max_joint = 0usize;
    let mut best = None;
    let mut checked = 0u64;
    for (i, a2) in autos.iter().enumerate() {
        for (j, a3) in autos.iter().enumerate() {
            let mut image: HashSet<u64> = HashSet::new();
            for t in 0..n as ElementId {
                let ti = g.inv(t);
                let u = g.mul(ti, a2.apply(t));
                let v = g.mul(ti, a3.apply(t));
                image.insert(((u as u64) << 32) | v as u64);
            }
            checked += 1;
            if image.len() > max_joint {
                max_joint = image.len();
                best = Some((i, j));
            }
        }
    }
    let (bi, bj) = best.expect("at least the identity pair was checked");
    let power = DirectPower::new(g.clone(), 6)?;
    let x = StripProduct::from_supports(power.clone(), &[vec![0, 1, 2], vec![3, 4, 5]], vec![])?;
    let y = StripProduct::new(
        power.clone(),
        vec![
            FullStrip::with_identity_twists(g.clone(), vec![0, 3])?,
            FullStrip::new(g.clone(), vec![1, 4], vec![autos[bi].clone()])?,
            FullStrip::new(g.clone(), vec![2, 5], vec![autos[bj].clone()])?,
        ],
        vec![],
    )?;
    let verdict = product_covers(&x, &y)?;
    let deficiency = &verdict.ambient_order - &verdict.product_order;
    Ok(JointUniformReport {
        group: g.name().to_string(),
        group_order: n,
        cardinality_certificate: n * n > n,
        pairs_checked: checked,
        max_joint_image: max_joint,
        best_pair: best,
        x_order: verdict.x_order,
        y_order: verdict.y_order,
        product_order: verdict.product_order,
        ambient_order: verdict.ambient_order,
        deficiency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn build(spec: GroupSpec) -> Arc<FiniteGroup> {
        spec.build().unwrap()
    }

    fn inversion(g: &Arc<FiniteGroup>) -> Automorphism {
        Automorphism::new(g.clone(), (0..g.order() as ElementId).map(|x| g.inv(x)).collect())
            .unwrap()
    }

    #[test]
    fn diagonal_against_itself_covers_only_the_diagonal() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let power = DirectPower::new(c3.clone(), 2).unwrap();
        let x = twisted_diagonal(&power, &Automorphism::identity(&c3)).unwrap();
        let verdict = product_covers(&x, &x).unwrap();
        assert!(!verdict.holds);
        assert_eq!(verdict.product_order, BigUint::from(3u32));
        let w = verdict.witness.unwrap();
        // the witness is genuinely uncovered
        assert!(solve_product(
            &x.to_diagonal_form(),
            &x.to_diagonal_form(),
            &w
        )
        .unwrap()
        .count
        .is_zero());
    }

    #[test]
    fn inversion_twisted_diagonal_covers_c3_squared() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let power = DirectPower::new(c3.clone(), 2).unwrap();
        let x = twisted_diagonal(&power, &Automorphism::identity(&c3)).unwrap();
        let y = twisted_diagonal(&power, &inversion(&c3)).unwrap();
        let verdict = product_covers(&x, &y).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.intersection_order, BigUint::from(1u32));
        // extensional cross-check
        let ext = product_covers_handles(&x.to_handle(), &y.to_handle()).unwrap();
        assert!(ext.holds);
    }

    #[test]
    fn twisted_diagonals_over_a5_never_cover() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let power = DirectPower::new(a5.clone(), 2).unwrap();
        let x = twisted_diagonal(&power, &Automorphism::identity(&a5)).unwrap();
        let autos = enumerate_automorphisms(&a5);
        for phi in autos.iter().step_by(17) {
            let y = twisted_diagonal(&power, phi).unwrap();
            assert!(!product_covers(&x, &y).unwrap().holds);
        }
    }

    #[test]
    fn orthstrip_biconditional_on_c3() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let report = orthstrip_check(&c3, 1_000_000).unwrap();
        assert_eq!(report.pairs_checked, 4);
        assert_eq!(report.factorising_pairs, 2);
        assert_eq!(report.uniform_composites, 2);
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn orthstrip_biconditional_on_s3() {
        let s3 = build(GroupSpec::Symmetric { n: 3 });
        let report = orthstrip_check(&s3, 1_000_000).unwrap();
        assert_eq!(report.pairs_checked, 36);
        assert_eq!(report.factorising_pairs, 0);
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn orthstrip_full_sweep_over_a5() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let report = orthstrip_check(&a5, 1_000_000).unwrap();
        assert_eq!(report.pairs_checked, 14_400);
        assert_eq!(report.factorising_pairs, 0);
        assert_eq!(report.uniform_composites, 0);
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn uniform_preimage_on_c9_inversion_exhaustive() {
        let c9 = build(GroupSpec::Cyclic { n: 9 });
        let inv = inversion(&c9);
        for y in 0..9 {
            let s = uniform_preimage(&inv, y).unwrap();
            assert_eq!(c9.mul(c9.inv(s), inv.apply(s)), y);
        }
        // least solution for the identity target is the identity
        assert_eq!(uniform_preimage(&inv, 0).unwrap(), 0);
    }

    #[test]
    fn doublestrips_d1_c3_exhaustive() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let alphas = vec![inversion(&c3)];
        let betas = vec![Automorphism::identity(&c3)];
        let power = DirectPower::new(c3.clone(), 2).unwrap();
        let (xs, ys) = doublestrips_shapes(&alphas, &betas).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let target = vec![a, b];
                match doublestrips_solve(&alphas, &betas, &target).unwrap() {
                    DoublestripsOutcome::Solved { t, s } => {
                        assert_eq!(power.mul(&t, &s), target);
                        assert!(xs.contains(&t));
                        assert!(ys.contains(&s));
                    }
                    DoublestripsOutcome::NotUniform(_) => panic!("composite is uniform"),
                }
            }
        }
    }

    #[test]
    fn doublestrips_not_uniform_returns_failing_verdict() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let id = Automorphism::identity(&c3);
        match doublestrips_solve(std::slice::from_ref(&id), std::slice::from_ref(&id), &[1, 0]).unwrap() {
            DoublestripsOutcome::NotUniform(verdict) => {
                assert!(!verdict.holds);
                assert!(verdict.witness.is_some());
            }
            DoublestripsOutcome::Solved { .. } => panic!("identity composite is not uniform"),
        }
    }

    #[test]
    fn doublestrips_d2_c9_uniform_composite() {
        let c9 = build(GroupSpec::Cyclic { n: 9 });
        let id = Automorphism::identity(&c9);
        let inv = inversion(&c9);
        // composite = id·id·inv·id = inversion, uniform on C9
        let alphas = vec![id.clone(), inv.clone()];
        let betas = vec![id.clone(), id.clone()];
        let power = DirectPower::new(c9.clone(), 4).unwrap();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        for _ in 0..20 {
            let target: Vec<ElementId> =
                (0..4).map(|_| rng.gen_range(9) as ElementId).collect();
            match doublestrips_solve(&alphas, &betas, &target).unwrap() {
                DoublestripsOutcome::Solved { t, s } => {
                    assert_eq!(power.mul(&t, &s), target);
                }
                DoublestripsOutcome::NotUniform(_) => panic!("composite is inversion"),
            }
        }
    }

    #[test]
    fn strip_graph_labels_and_fat_edges() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let m3 = DirectPower::new(a5.clone(), 3).unwrap();
        let x = StripProduct::from_supports(m3.clone(), &[vec![0, 1]], vec![]).unwrap();
        let y = StripProduct::from_supports(m3.clone(), &[vec![1, 2]], vec![]).unwrap();
        let graph = build_strip_graph(&x, &y).unwrap();
        assert_eq!(graph.edges.len(), 1);
        assert_eq!(graph.edges[0].label, Some(1));

        let y2 = StripProduct::from_supports(m3, &[vec![0, 1]], vec![]).unwrap();
        let graph2 = build_strip_graph(&x, &y2).unwrap();
        assert_eq!(graph2.edges[0].label, None);
        assert_eq!(graph2.edges[0].shared, vec![0, 1]);
    }

    #[test]
    fn four_cycle_diagnosis_emits_non_uniform_composite() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let m4 = DirectPower::new(a5.clone(), 4).unwrap();
        let x =
            StripProduct::from_supports(m4.clone(), &[vec![0, 1], vec![2, 3]], vec![]).unwrap();
        let y =
            StripProduct::from_supports(m4.clone(), &[vec![1, 2], vec![0, 3]], vec![]).unwrap();
        match diagnose_nonfactorisation(&x, &y).unwrap() {
            Diagnosis::Cycle {
                composite,
                composite_uniform,
                ..
            } => {
                assert!(!composite_uniform);
                assert!(!uniformity(&composite).uniform);
                // a two-strip system built on the emitted composite cannot
                // cover either
                let id = Automorphism::identity(&a5);
                match doublestrips_solve(&[composite], &[id], &[0, 0]).unwrap() {
                    DoublestripsOutcome::NotUniform(verdict) => {
                        assert!(!verdict.holds);
                        assert!(verdict.witness.is_some());
                    }
                    DoublestripsOutcome::Solved { .. } => {
                        panic!("non-uniform composite cannot admit a cover")
                    }
                }
            }
            d => panic!("expected a cycle diagnosis, got {d:?}"),
        }
        assert!(!product_covers(&x, &y).unwrap().holds);
    }

    #[test]
    fn path_diagnosis_returns_uncovered_tuple() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let m3 = DirectPower::new(a5.clone(), 3).unwrap();
        let x = StripProduct::from_supports(m3.clone(), &[vec![0, 1]], vec![]).unwrap();
        let y = StripProduct::from_supports(m3.clone(), &[vec![1, 2]], vec![]).unwrap();
        match diagnose_nonfactorisation(&x, &y).unwrap() {
            Diagnosis::PathContradiction { witness } => {
                let w = witness.expect("a witness exists at desk scale");
                assert!(solve_product(&x.to_diagonal_form(), &y.to_diagonal_form(), &w)
                    .unwrap()
                    .count
                    .is_zero());
            }
            d => panic!("expected the terminal diagnosis, got {d:?}"),
        }
    }

    #[test]
    fn isolated_vertex_diagnosis() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let m4 = DirectPower::new(a5.clone(), 4).unwrap();
        let x = StripProduct::from_supports(m4.clone(), &[vec![0, 1]], vec![]).unwrap();
        let y = StripProduct::from_supports(m4, &[vec![2, 3]], vec![]).unwrap();
        match diagnose_nonfactorisation(&x, &y).unwrap() {
            Diagnosis::IsolatedVertex { side, .. } => assert_eq!(side, Side::X),
            d => panic!("expected isolated vertex, got {d:?}"),
        }
    }

    #[test]
    fn shape_enumeration_counts() {
        // k = 2: only {0,1}; k = 3: three pairs and one triple
        assert_eq!(enumerate_shapes(2).len(), 1);
        assert_eq!(enumerate_shapes(3).len(), 4);
        // k = 4: 6 pairs + 4 triples + 1 quad + 3 pair-pairs
        assert_eq!(enumerate_shapes(4).len(), 14);
    }

    #[test]
    fn nostripfact_control_on_c3_finds_factorisations() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let report =
            nostripfact_search(&c3, 2, SearchMode::Exhaustive, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(!report.hypothesis_holds);
        assert_eq!(report.candidates_checked, 4); // |Aut C3|^2
        assert_eq!(report.factorisations_found, 2);
        assert!(report.first_witness.is_some());
    }

    #[test]
    fn nostripfact_exhaustive_a5_k2() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let report =
            nostripfact_search(&a5, 2, SearchMode::Exhaustive, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(report.hypothesis_holds);
        assert_eq!(report.candidates_checked, 14_400);
        assert_eq!(report.factorisations_found, 0);
        assert_eq!(
            report.diagnoses.get(&DiagnosisClass::FatEdge),
            Some(&14_400)
        );
    }

    #[test]
    fn nostripfact_sampled_is_deterministic() {
        let a5 = build(GroupSpec::Alternating { n: 5 });
        let mode = SearchMode::Sampled { n: 50, seed: 0 };
        let r1 = nostripfact_search(&a5, 4, mode.clone(), DEFAULT_SEARCH_BUDGET).unwrap();
        let r2 = nostripfact_search(&a5, 4, mode, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r1.factorisations_found, 0);
        assert_eq!(r1.diagnoses, r2.diagnoses);
    }

    #[test]
    fn g6_search_on_c3() {
        let c3 = build(GroupSpec::Cyclic { n: 3 });
        let report = g6_joint_uniform_search(&c3, 1_000_000).unwrap();
        assert!(report.cardinality_certificate);
        assert_eq!(report.pairs_checked, 4);
        assert!(report.max_joint_image <= 3);
        assert!(report.deficiency > BigUint::zero());
    }

    #[test]
    fn g6_rejects_trivial_group() {
        let c1 = build(GroupSpec::Cyclic { n: 1 });
        assert!(g6_joint_uniform_search(&c1, 1_000).is_err());
    }
}
