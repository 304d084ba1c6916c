//! Group homomorphisms, automorphisms, and uniformity.
//!
//! An automorphism `a` is *uniform* when `g -> g^-1 * a(g)` is surjective.
//! For finite groups this is equivalent to `a` having no non-identity fixed
//! point, and both routes are implemented independently so they can be
//! cross-checked.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};

#[derive(Clone)]
pub struct Morphism {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<ElementId>,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Morphism({} -> {}, {:?})",
            self.source.name(),
            self.target.name(),
            self.map
        )
    }
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source)
            && Arc::ptr_eq(&self.target, &other.target)
            && self.map == other.map
    }
}
impl Eq for Morphism {}

impl Morphism {
    /// Builds a morphism, verifying `map(g*h) = map(g)*map(h)` on all pairs.
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<ElementId>,
    ) -> Result<Morphism> {
        if map.len() != source.order() {
            return Err(Error::InvalidInput(
                "morphism map length differs from source order".into(),
            ));
        }
        if map.iter().any(|&y| (y as usize) >= target.order()) {
            return Err(Error::InvalidInput("morphism image out of range".into()));
        }
        let n = source.order() as ElementId;
        for g in 0..n {
            for h in 0..n {
                let lhs = map[source.mul(g, h) as usize];
                let rhs = target.mul(map[g as usize], map[h as usize]);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "not a homomorphism: map({g}*{h}) != map({g})*map({h})"
                    )));
                }
            }
        }
        Ok(Morphism { source, target, map })
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<ElementId>,
    ) -> Morphism {
        Morphism { source, target, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: ElementId) -> ElementId {
        self.map[g as usize]
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        for &y in &self.map {
            if seen[y as usize] {
                return false;
            }
            seen[y as usize] = true;
        }
        true
    }
}

/// A bijective morphism of a group to itself. Products follow the right-action
/// order: `a.then(b)` applies `a` first.
#[derive(Clone)]
pub struct Automorphism {
    group: Arc<FiniteGroup>,
    map: Vec<ElementId>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.map == other.map
    }
}
impl Eq for Automorphism {}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Automorphism({}, {:?})", self.group.name(), self.map)
    }
}

impl Automorphism {
    pub fn new(group: Arc<FiniteGroup>, map: Vec<ElementId>) -> Result<Automorphism> {
        let m = Morphism::new(group.clone(), group.clone(), map)?;
        if !m.is_bijective() {
            return Err(Error::InvalidInput("automorphism map is not a bijection".into()));
        }
        Ok(Automorphism { group, map: m.map })
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, map: Vec<ElementId>) -> Automorphism {
        Automorphism { group, map }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Automorphism {
        Automorphism {
            group: group.clone(),
            map: (0..group.order() as ElementId).collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn apply(&self, g: ElementId) -> ElementId {
        self.map[g as usize]
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &y)| i as ElementId == y)
    }

    /// Composite applying `self` first, then `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        assert!(
            Arc::ptr_eq(&self.group, &other.group),
            "composing automorphisms of different groups"
        );
        let map = self.map.iter().map(|&y| other.map[y as usize]).collect();
        Automorphism {
            group: self.group.clone(),
            map,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![0 as ElementId; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y as usize] = x as ElementId;
        }
        Automorphism {
            group: self.group.clone(),
            map,
        }
    }

    pub fn as_morphism(&self) -> Morphism {
        Morphism::new_unchecked(self.group.clone(), self.group.clone(), self.map.clone())
    }

    pub fn is_uniform(&self) -> bool {
        uniformity(self).uniform
    }
}

/// Outcome of the surjectivity test for `g -> g^-1 * a(g)`, with witnesses
/// for the failing case.
///
/// ```
/// use subdirect::group::GroupSpec;
/// use subdirect::morphism::{uniformity, Automorphism};
///
/// let c9 = GroupSpec::Cyclic { n: 9 }.build().unwrap();
/// let inversion = Automorphism::new(
///     c9.clone(),
///     (0..9).map(|x| (9 - x) % 9).collect(),
/// ).unwrap();
/// assert!(uniformity(&inversion).uniform);
/// assert!(!uniformity(&Automorphism::identity(&c9)).uniform);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    /// Least element outside the image of `g -> g^-1 * a(g)`.
    pub uncovered: Option<ElementId>,
    /// Least non-identity fixed point; exists exactly when not uniform.
    pub fixed_point: Option<ElementId>,
}

pub fn uniformity(alpha: &Automorphism) -> UniformityReport {
    let g = alpha.group();
    let n = g.order();
    let mut covered = vec![false; n];
    for x in 0..n as ElementId {
        covered[g.mul(g.inv(x), alpha.apply(x)) as usize] = true;
    }
    let uncovered = (0..n as ElementId).find(|&y| !covered[y as usize]);
    let fixed_point = (1..n as ElementId).find(|&x| alpha.apply(x) == x);
    UniformityReport {
        uniform: uncovered.is_none(),
        uncovered,
        fixed_point,
    }
}

/// All fixed points of an automorphism; always contains the identity.
pub fn fixed_points(alpha: &Automorphism) -> Vec<ElementId> {
    (0..alpha.group().order() as ElementId)
        .filter(|&x| alpha.apply(x) == x)
        .collect()
}

/// Enumerates Aut(G) by backtracking over generator images, restricted to
/// elements of matching order. The result is ordered lexicographically by the
/// tuple of generator images and cached on the group.
pub fn enumerate_automorphisms(group: &Arc<FiniteGroup>) -> Vec<Automorphism> {
    let maps = group.automorphism_maps.get_or_init(|| {
        let gens = group.generators().to_vec();
        if gens.is_empty() {
            return vec![vec![0]];
        }
        let orders = group.element_orders();
        let candidates: Vec<Vec<ElementId>> = gens
            .iter()
            .map(|&g| {
                (0..group.order() as ElementId)
                    .filter(|&h| orders[h as usize] == orders[g as usize])
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<ElementId>> = Vec::new();
        let mut images = vec![0 as ElementId; gens.len()];
        search_images(group, &gens, &candidates, 0, &mut images, &mut out);
        out
    });
    maps.iter()
        .map(|m| Automorphism::new_unchecked(group.clone(), m.clone()))
        .collect()
}

fn search_images(
    group: &FiniteGroup,
    gens: &[ElementId],
    candidates: &[Vec<ElementId>],
    pos: usize,
    images: &mut Vec<ElementId>,
    out: &mut Vec<Vec<ElementId>>,
) {
    if pos == gens.len() {
        if let Some(map) = close_generator_map(group, gens, images) {
            out.push(map);
        }
        return;
    }
    for &h in &candidates[pos] {
        images[pos] = h;
        search_images(group, gens, candidates, pos + 1, images, out);
    }
}

/// Extends `gens[i] -> images[i]` to a map on the whole group by closing the
/// graph under right multiplication by generators. Returns the full image map
/// when the graph is the graph of a bijective endomorphism.
fn close_generator_map(
    group: &FiniteGroup,
    gens: &[ElementId],
    images: &[ElementId],
) -> Option<Vec<ElementId>> {
    let n = group.order();
    let mut map = vec![ElementId::MAX; n];
    map[0] = 0;
    let mut stack: Vec<ElementId> = vec![0];
    while let Some(x) = stack.pop() {
        let fx = map[x as usize];
        for (i, &g) in gens.iter().enumerate() {
            let y = group.mul(x, g);
            let fy = group.mul(fx, images[i]);
            let slot = &mut map[y as usize];
            if *slot == ElementId::MAX {
                *slot = fy;
                stack.push(y);
            } else if *slot != fy {
                return None;
            }
        }
    }
    // generators span G, so every element was assigned
    debug_assert!(map.iter().all(|&y| y != ElementId::MAX));
    let mut seen = vec![false; n];
    for &y in &map {
        if seen[y as usize] {
            return None;
        }
        seen[y as usize] = true;
    }
    Some(map)
}

/// Capped variant of [`enumerate_automorphisms`] for callers that work with
/// groups near the construction cap.
pub fn try_enumerate_automorphisms(
    group: &Arc<FiniteGroup>,
    order_cap: usize,
) -> Result<Vec<Automorphism>> {
    if group.order() > order_cap {
        return Err(Error::OrderCapExceeded {
            order: group.order(),
            cap: order_cap,
        });
    }
    Ok(enumerate_automorphisms(group))
}

/// First uniform automorphism in enumeration order, if any.
pub fn has_uniform_automorphism(group: &Arc<FiniteGroup>) -> Option<Automorphism> {
    let idx = *group.first_uniform.get_or_init(|| {
        enumerate_automorphisms(group)
            .iter()
            .position(|a| a.is_uniform())
    });
    idx.map(|i| enumerate_automorphisms(group).swap_remove(i))
}
