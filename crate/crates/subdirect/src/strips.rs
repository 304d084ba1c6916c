//! Strips, strip products, and the linked-coordinate form used for symbolic
//! intersection and order computation.
//!
//! A full strip is a diagonal-style subgroup of T^k given intensionally by a
//! support and a tuple of twist automorphisms relative to the least support
//! coordinate. Strip products never materialise their element sets: every
//! question asked of them here (orders, intersections, projections,
//! subdirectness) is answered from the intensional data, with extensional
//! closures kept only for cross-checks under a size cap.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};
use crate::morphism::Automorphism;
use crate::power::{validate_indices, DirectPower, SubgroupHandle};

/// Extensional cross-checks (e.g. in [`scott_decompose`]) run only when the
/// subgroup has at most this many tuples.
const EXTENSIONAL_CHECK_CAP: u64 = 10_000;

/// A full strip: support coordinates strictly ascending, twists relative to
/// the first support coordinate (which implicitly carries the identity).
/// Support size 1 is allowed and denotes a whole factor.
#[derive(Clone)]
pub struct FullStrip {
    group: Arc<FiniteGroup>,
    support: Vec<usize>,
    twists: Vec<Automorphism>,
}

impl PartialEq for FullStrip {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.support == other.support
            && self.twists == other.twists
    }
}
impl Eq for FullStrip {}

impl std::fmt::Debug for FullStrip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FullStrip(support {:?})", self.support)
    }
}

impl FullStrip {
    pub fn new(
        group: Arc<FiniteGroup>,
        support: Vec<usize>,
        twists: Vec<Automorphism>,
    ) -> Result<FullStrip> {
        if support.is_empty() {
            return Err(Error::InvalidInput("strip support must be non-empty".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "strip support must be strictly ascending".into(),
            ));
        }
        if twists.len() + 1 != support.len() {
            return Err(Error::InvalidInput(
                "a strip of support size m needs m-1 twists".into(),
            ));
        }
        if twists.iter().any(|t| !Arc::ptr_eq(t.group(), &group)) {
            return Err(Error::InvalidInput(
                "strip twists must be automorphisms of the base group".into(),
            ));
        }
        Ok(FullStrip {
            group,
            support,
            twists,
        })
    }

    pub fn with_identity_twists(group: Arc<FiniteGroup>, support: Vec<usize>) -> Result<FullStrip> {
        let twists = (1..support.len())
            .map(|_| Automorphism::identity(&group))
            .collect();
        FullStrip::new(group, support, twists)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn twists(&self) -> &[Automorphism] {
        &self.twists
    }

    /// Non-trivial means the support has at least two coordinates.
    pub fn is_non_trivial(&self) -> bool {
        self.support.len() >= 2
    }

    /// The realised element set has exactly |T| tuples.
    pub fn realized_size(&self) -> usize {
        self.group.order()
    }

    /// Twist carried by the support position `pos` (position 0 is the
    /// identity).
    pub fn twist_at(&self, pos: usize) -> Automorphism {
        if pos == 0 {
            Automorphism::identity(&self.group)
        } else {
            self.twists[pos - 1].clone()
        }
    }

    /// Map from the value at support position `from` to the value at support
    /// position `to`.
    pub fn chain_map(&self, from: usize, to: usize) -> Automorphism {
        self.twist_at(from).inverse().then(&self.twist_at(to))
    }

    /// Image under the power automorphism sending coordinate `i` to
    /// `perm[i]` with componentwise twist `comps[i]`, re-normalised to
    /// canonical form.
    pub fn transform(&self, perm: &[usize], comps: &[Automorphism]) -> FullStrip {
        let mut pairs: Vec<(usize, usize)> = self
            .support
            .iter()
            .enumerate()
            .map(|(pos, &c)| (perm[c], pos))
            .collect();
        pairs.sort();
        let (leader_new, leader_pos) = pairs[0];
        let leader_old = self.support[leader_pos];
        let mut support = Vec::with_capacity(pairs.len());
        let mut twists = Vec::with_capacity(pairs.len() - 1);
        for (i, &(new_c, old_pos)) in pairs.iter().enumerate() {
            support.push(new_c);
            if i == 0 {
                debug_assert_eq!(new_c, leader_new);
                continue;
            }
            let old_c = self.support[old_pos];
            let map = comps[leader_old]
                .inverse()
                .then(&self.twist_at(leader_pos).inverse())
                .then(&self.twist_at(old_pos))
                .then(&comps[old_c]);
            twists.push(map);
        }
        FullStrip {
            group: self.group.clone(),
            support,
            twists,
        }
    }

    /// Generating tuples inside T^k: one per base generator.
    pub fn generating_tuples(&self, k: usize) -> Vec<Vec<ElementId>> {
        self.group
            .generators()
            .iter()
            .map(|&g| {
                let mut t = vec![0 as ElementId; k];
                for (pos, &c) in self.support.iter().enumerate() {
                    t[c] = self.twist_at(pos).apply(g);
                }
                t
            })
            .collect()
    }
}

/// A direct product of pairwise disjoint full strips, together with optional
/// full coordinates (factors included whole). Canonical form: strips sorted
/// by least support coordinate, twists relative to that coordinate.
#[derive(Clone)]
pub struct StripProduct {
    power: DirectPower,
    strips: Vec<FullStrip>,
    full: Vec<usize>,
}

impl PartialEq for StripProduct {
    fn eq(&self, other: &Self) -> bool {
        self.power.same_ambient(&other.power)
            && self.full == other.full
            && self.strips.len() == other.strips.len()
            && self
                .strips
                .iter()
                .zip(&other.strips)
                .all(|(a, b)| a.support() == b.support() && {
                    a.twists()
                        .iter()
                        .zip(b.twists())
                        .all(|(x, y)| x.map() == y.map())
                })
    }
}

impl std::fmt::Debug for StripProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "StripProduct({:?}, supports {:?}, full {:?})",
            self.power,
            self.strips.iter().map(|s| s.support()).collect::<Vec<_>>(),
            self.full
        )
    }
}

impl StripProduct {
    pub fn new(
        power: DirectPower,
        strips: Vec<FullStrip>,
        full: Vec<usize>,
    ) -> Result<StripProduct> {
        let k = power.k();
        let mut covered = vec![false; k];
        for s in &strips {
            if s.support().len() < 2 {
                return Err(Error::InvalidInput(
                    "strip-product strips must be non-trivial; use full coordinates for whole factors".into(),
                ));
            }
            if !Arc::ptr_eq(s.group(), power.base()) {
                return Err(Error::InvalidInput(
                    "strip base group differs from the ambient power".into(),
                ));
            }
            for &c in s.support() {
                if c >= k {
                    return Err(Error::InvalidInput("strip support out of range".into()));
                }
                if covered[c] {
                    return Err(Error::InvalidInput(
                        "strip supports must be pairwise disjoint".into(),
                    ));
                }
                covered[c] = true;
            }
        }
        for &c in &full {
            if c >= k {
                return Err(Error::InvalidInput("full coordinate out of range".into()));
            }
            if covered[c] {
                return Err(Error::InvalidInput(
                    "full coordinates must be disjoint from strip supports".into(),
                ));
            }
            covered[c] = true;
        }
        let mut strips = strips;
        strips.sort_by_key(|s| s.support()[0]);
        let mut full = full;
        full.sort_unstable();
        Ok(StripProduct {
            power,
            strips,
            full,
        })
    }

    /// Convenience constructor for products of identity-twisted strips.
    pub fn from_supports(power: DirectPower, supports: &[Vec<usize>], full: Vec<usize>) -> Result<StripProduct> {
        let strips = supports
            .iter()
            .map(|s| FullStrip::with_identity_twists(power.base().clone(), s.clone()))
            .collect::<Result<_>>()?;
        StripProduct::new(power, strips, full)
    }

    pub fn power(&self) -> &DirectPower {
        &self.power
    }

    pub fn strips(&self) -> &[FullStrip] {
        &self.strips
    }

    pub fn full_coords(&self) -> &[usize] {
        &self.full
    }

    /// |T|^(number of strips + number of full coordinates), exact.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.power.base().order())
            .pow((self.strips.len() + self.full.len()) as u32)
    }

    pub fn covered(&self) -> Vec<bool> {
        let mut covered = vec![false; self.power.k()];
        for s in &self.strips {
            for &c in s.support() {
                covered[c] = true;
            }
        }
        for &c in &self.full {
            covered[c] = true;
        }
        covered
    }

    pub fn is_subdirect(&self) -> bool {
        self.covered().iter().all(|&c| c)
    }

    pub fn contains(&self, tuple: &[ElementId]) -> bool {
        debug_assert_eq!(tuple.len(), self.power.k());
        let covered = self.covered();
        for (c, &v) in tuple.iter().enumerate() {
            if !covered[c] && v != 0 {
                return false;
            }
        }
        for s in &self.strips {
            let leader = tuple[s.support()[0]];
            for (pos, &c) in s.support().iter().enumerate() {
                if tuple[c] != s.twist_at(pos).apply(leader) {
                    return false;
                }
            }
        }
        true
    }

    pub fn generating_tuples(&self) -> Vec<Vec<ElementId>> {
        let k = self.power.k();
        let mut out = Vec::new();
        for s in &self.strips {
            out.extend(s.generating_tuples(k));
        }
        for &c in &self.full {
            for &g in self.power.base().generators() {
                let mut t = vec![0 as ElementId; k];
                t[c] = g;
                out.push(t);
            }
        }
        out
    }

    pub fn to_handle(&self) -> SubgroupHandle {
        SubgroupHandle::new(self.power.clone(), self.generating_tuples())
            .expect("generating tuples are well-formed by construction")
    }

    /// Coordinate projection onto the (ascending) index set, computed
    /// intensionally: strips restrict to their surviving support, a single
    /// surviving coordinate becomes a full coordinate, and strips that miss
    /// the index set vanish.
    pub fn project(&self, indices: &[usize]) -> Result<StripProduct> {
        validate_indices(indices, self.power.k())?;
        let reindex = |c: usize| indices.iter().position(|&i| i == c);
        let mut strips = Vec::new();
        let mut full = Vec::new();
        for s in &self.strips {
            let surviving: Vec<usize> = s
                .support()
                .iter()
                .enumerate()
                .filter_map(|(pos, &c)| reindex(c).map(|new_c| (pos, new_c)).map(|_| pos))
                .collect();
            match surviving.len() {
                0 => {}
                1 => full.push(reindex(s.support()[surviving[0]]).unwrap()),
                _ => {
                    let lead = surviving[0];
                    let support = surviving
                        .iter()
                        .map(|&pos| reindex(s.support()[pos]).unwrap())
                        .collect();
                    let twists = surviving[1..]
                        .iter()
                        .map(|&pos| s.chain_map(lead, pos))
                        .collect();
                    strips.push(FullStrip::new(s.group().clone(), support, twists)?);
                }
            }
        }
        for &c in &self.full {
            if let Some(new_c) = reindex(c) {
                full.push(new_c);
            }
        }
        StripProduct::new(
            DirectPower::new(self.power.base().clone(), indices.len())?,
            strips,
            full,
        )
    }

    /// Image under a power automorphism (factor permutation plus
    /// componentwise automorphisms), in canonical form.
    pub fn transform(&self, perm: &[usize], comps: &[Automorphism]) -> Result<StripProduct> {
        let strips = self
            .strips
            .iter()
            .map(|s| s.transform(perm, comps))
            .collect();
        let full = self.full.iter().map(|&c| perm[c]).collect();
        StripProduct::new(self.power.clone(), strips, full)
    }

    pub fn to_diagonal_form(&self) -> DiagonalForm {
        let k = self.power.k();
        let n = self.power.base().order();
        let mut coords = vec![CoordState::ForcedIdentity; k];
        let mut comps = Vec::new();
        for s in &self.strips {
            let comp = comps.len();
            for (pos, &c) in s.support().iter().enumerate() {
                coords[c] = CoordState::Linked {
                    comp,
                    map: s.twist_at(pos).map().to_vec(),
                };
            }
            comps.push(AllowedSet::Full);
        }
        for &c in &self.full {
            let comp = comps.len();
            coords[c] = CoordState::Linked {
                comp,
                map: (0..n as ElementId).collect(),
            };
            comps.push(AllowedSet::Full);
        }
        DiagonalForm {
            power: self.power.clone(),
            coords,
            comps,
        }
    }

    pub fn to_json(&self) -> StripProductJson {
        StripProductJson {
            strips: self
                .strips
                .iter()
                .map(|s| FullStripJson {
                    support: s.support().iter().map(|&c| c + 1).collect(),
                    twists: s.twists().iter().map(|t| t.map().to_vec()).collect(),
                })
                .collect(),
            full: self.full.iter().map(|&c| c + 1).collect(),
        }
    }

    pub fn from_json(power: &DirectPower, json: &StripProductJson) -> Result<StripProduct> {
        let base = power.base();
        let one_based = |c: usize| -> Result<usize> {
            if c == 0 {
                return Err(Error::InvalidInput(
                    "serialized coordinates are 1-based".into(),
                ));
            }
            Ok(c - 1)
        };
        let strips = json
            .strips
            .iter()
            .map(|s| {
                let support = s
                    .support
                    .iter()
                    .map(|&c| one_based(c))
                    .collect::<Result<Vec<_>>>()?;
                let twists = s
                    .twists
                    .iter()
                    .map(|m| Automorphism::new(base.clone(), m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                FullStrip::new(base.clone(), support, twists)
            })
            .collect::<Result<Vec<_>>>()?;
        let full = json
            .full
            .iter()
            .map(|&c| one_based(c))
            .collect::<Result<Vec<_>>>()?;
        StripProduct::new(power.clone(), strips, full)
    }
}

/// Serialized shape of a strip product; support indices are 1-based on the
/// wire, twists are automorphism image arrays.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StripProductJson {
    pub strips: Vec<FullStripJson>,
    #[serde(default)]
    pub full: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FullStripJson {
    pub support: Vec<usize>,
    pub twists: Vec<Vec<ElementId>>,
}

/// A subgroup of T^k cut out by linking coordinates through automorphisms:
/// each covered coordinate carries `map(component parameter)`, uncovered
/// coordinates are forced to the identity, and each component parameter
/// ranges over an allowed subgroup of T. Strip products are the case where
/// every allowed set is all of T; intersections introduce proper subgroups
/// (fixed-point sets of twist mismatches).
#[derive(Clone, Debug)]
pub struct DiagonalForm {
    power: DirectPower,
    coords: Vec<CoordState>,
    comps: Vec<AllowedSet>,
}

#[derive(Clone, Debug)]
pub enum CoordState {
    ForcedIdentity,
    Linked { comp: usize, map: Vec<ElementId> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AllowedSet {
    Full,
    Subgroup(Vec<ElementId>),
}

impl AllowedSet {
    pub fn len(&self, base_order: usize) -> usize {
        match self {
            AllowedSet::Full => base_order,
            AllowedSet::Subgroup(v) => v.len(),
        }
    }

    pub fn contains(&self, x: ElementId) -> bool {
        match self {
            AllowedSet::Full => true,
            AllowedSet::Subgroup(v) => v.binary_search(&x).is_ok(),
        }
    }

    pub fn iter(&self, base_order: usize) -> Box<dyn Iterator<Item = ElementId> + '_> {
        match self {
            AllowedSet::Full => Box::new(0..base_order as ElementId),
            AllowedSet::Subgroup(v) => Box::new(v.iter().copied()),
        }
    }
}

impl DiagonalForm {
    pub fn power(&self) -> &DirectPower {
        &self.power
    }

    pub fn coords(&self) -> &[CoordState] {
        &self.coords
    }

    pub fn components(&self) -> &[AllowedSet] {
        &self.comps
    }

    pub fn order(&self) -> BigUint {
        let n = self.power.base().order();
        let mut order = BigUint::from(1u32);
        for c in &self.comps {
            order *= BigUint::from(c.len(n));
        }
        order
    }

    pub fn is_subdirect(&self) -> bool {
        self.coords.iter().all(|c| matches!(c, CoordState::Linked { .. }))
            && self.comps.iter().all(|c| matches!(c, AllowedSet::Full))
    }

    pub fn contains(&self, tuple: &[ElementId]) -> bool {
        debug_assert_eq!(tuple.len(), self.power.k());
        let mut params: Vec<Option<ElementId>> = vec![None; self.comps.len()];
        for (c, state) in self.coords.iter().enumerate() {
            match state {
                CoordState::ForcedIdentity => {
                    if tuple[c] != 0 {
                        return false;
                    }
                }
                CoordState::Linked { comp, map } => {
                    // leader coordinates carry the identity map, so the first
                    // linked coordinate of each component fixes the parameter
                    match params[*comp] {
                        None => {
                            let inv_value = map.iter().position(|&y| y == tuple[c]);
                            match inv_value {
                                Some(p) => {
                                    let p = p as ElementId;
                                    if !self.comps[*comp].contains(p) {
                                        return false;
                                    }
                                    params[*comp] = Some(p);
                                }
                                None => return false,
                            }
                        }
                        Some(p) => {
                            if map[p as usize] != tuple[c] {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Exact intersection, by unifying the two linked-coordinate systems.
    pub fn intersect(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        if !self.power.same_ambient(&other.power) {
            return Err(Error::AmbientMismatch);
        }
        let n = self.power.base().order();
        let k = self.power.k();
        let na = self.comps.len();
        let vars = na + other.comps.len();

        // union-find with relation maps: value(var) = rel[var](value(root))
        let mut parent: Vec<usize> = (0..vars).collect();
        let mut rel: Vec<Vec<ElementId>> = (0..vars)
            .map(|_| (0..n as ElementId).collect())
            .collect();
        // extra constraints gathered per root: (var, required pinned value)
        let mut pins: Vec<(usize, ElementId)> = Vec::new();
        // agreement constraints: (var_a, map_a, var_b, map_b) meaning
        // map_a(value(var_a)) == map_b(value(var_b)) for an already-merged pair
        let mut agreements: Vec<(Vec<ElementId>, Vec<ElementId>)> = Vec::new();
        let mut agreement_root: Vec<usize> = Vec::new();

        fn find(parent: &mut Vec<usize>, rel: &mut Vec<Vec<ElementId>>, x: usize) -> usize {
            if parent[x] == x {
                return x;
            }
            let p = parent[x];
            let root = find(parent, rel, p);
            if parent[x] != root {
                // compose x->p with p->root
                let composed: Vec<ElementId> = (0..rel[x].len())
                    .map(|r| rel[x][rel[p][r] as usize])
                    .collect();
                rel[x] = composed;
                parent[x] = root;
            }
            root
        }

        for c in 0..k {
            let a = &self.coords[c];
            let b = &other.coords[c];
            match (a, b) {
                (CoordState::ForcedIdentity, CoordState::ForcedIdentity) => {}
                (CoordState::ForcedIdentity, CoordState::Linked { comp, map }) => {
                    let p = map.iter().position(|&y| y == 0).unwrap() as ElementId;
                    pins.push((na + comp, p));
                }
                (CoordState::Linked { comp, map }, CoordState::ForcedIdentity) => {
                    let p = map.iter().position(|&y| y == 0).unwrap() as ElementId;
                    pins.push((*comp, p));
                }
                (
                    CoordState::Linked { comp: ca, map: ma },
                    CoordState::Linked { comp: cb, map: mb },
                ) => {
                    let (x, y) = (*ca, na + cb);
                    let rx = find(&mut parent, &mut rel, x);
                    let ry = find(&mut parent, &mut rel, y);
                    if rx == ry {
                        // both already expressed via the same root:
                        // ma(rel[x](r)) must equal mb(rel[y](r))
                        let fa: Vec<ElementId> =
                            (0..n).map(|r| ma[rel[x][r] as usize]).collect();
                        let fb: Vec<ElementId> =
                            (0..n).map(|r| mb[rel[y][r] as usize]).collect();
                        agreements.push((fa, fb));
                        agreement_root.push(rx);
                    } else {
                        // value(x) = ma^-1(mb(value(y))); graft ry under rx:
                        // value(y) = rel_y_new(value(rx-root)) with
                        // rel_y_new = mb^-1 ∘ ma ∘ rel[x]
                        let mut ma_inv = vec![0 as ElementId; n];
                        for (i, &v) in ma.iter().enumerate() {
                            ma_inv[v as usize] = i as ElementId;
                        }
                        let mut mb_inv = vec![0 as ElementId; n];
                        for (i, &v) in mb.iter().enumerate() {
                            mb_inv[v as usize] = i as ElementId;
                        }
                        // new relation for the old root ry in terms of rx:
                        // value(ry) = rel[y]^-1 (mb_inv(ma(rel[x](r))))
                        let mut rel_y_inv = vec![0 as ElementId; n];
                        for (i, &v) in rel[y].iter().enumerate() {
                            rel_y_inv[v as usize] = i as ElementId;
                        }
                        let new_rel: Vec<ElementId> = (0..n)
                            .map(|r| rel_y_inv[mb_inv[ma[rel[x][r] as usize] as usize] as usize])
                            .collect();
                        parent[ry] = rx;
                        rel[ry] = new_rel;
                    }
                }
            }
        }

        // flatten all relations
        for x in 0..vars {
            find(&mut parent, &mut rel, x);
        }

        // admissible root values per class
        let mut root_allowed: Vec<Option<Vec<bool>>> = vec![None; vars];
        let touch = |root: usize, root_allowed: &mut Vec<Option<Vec<bool>>>| {
            if root_allowed[root].is_none() {
                root_allowed[root] = Some(vec![true; n]);
            }
        };
        for x in 0..vars {
            let root = parent[x];
            touch(root, &mut root_allowed);
            let allowed = if x < na { &self.comps[x] } else { &other.comps[x - na] };
            if let AllowedSet::Subgroup(_) = allowed {
                let mask = root_allowed[root].as_mut().unwrap();
                for r in 0..n {
                    if mask[r] && !allowed.contains(rel[x][r]) {
                        mask[r] = false;
                    }
                }
            }
        }
        for &(var, value) in &pins {
            let root = parent[var];
            touch(root, &mut root_allowed);
            let mask = root_allowed[root].as_mut().unwrap();
            for r in 0..n {
                if mask[r] && rel[var][r] != value {
                    mask[r] = false;
                }
            }
        }
        for (idx, (fa, fb)) in agreements.iter().enumerate() {
            // fa and fb are functions of the value of the root the agreement
            // was recorded at; that root may have been grafted since, so the
            // constraint is transported through its (now flattened) relation
            let anchor = agreement_root[idx];
            let root = parent[anchor];
            let via = rel[anchor].clone();
            touch(root, &mut root_allowed);
            let mask = root_allowed[root].as_mut().unwrap();
            for r in 0..n {
                let a = via[r] as usize;
                if mask[r] && fa[a] != fb[a] {
                    mask[r] = false;
                }
            }
        }

        // assemble the result; classes keep only coordinates that stay linked
        let mut class_coords: Vec<Vec<(usize, Vec<ElementId>)>> = vec![Vec::new(); vars];
        for c in 0..k {
            if let (CoordState::Linked { comp, map }, CoordState::Linked { .. }) =
                (&self.coords[c], &other.coords[c])
            {
                let var = *comp;
                let root = parent[var];
                // coordinate value = map(rel[var](r))
                let coord_map: Vec<ElementId> =
                    (0..n).map(|r| map[rel[var][r] as usize]).collect();
                class_coords[root].push((c, coord_map));
            }
        }

        let mut coords = vec![CoordState::ForcedIdentity; k];
        let mut comps: Vec<AllowedSet> = Vec::new();
        let mut class_order: Vec<usize> = (0..vars)
            .filter(|&v| parent[v] == v && !class_coords[v].is_empty())
            .collect();
        class_order.sort_by_key(|&v| class_coords[v][0].0);
        for root in class_order {
            let members = &class_coords[root];
            let mask = root_allowed[root]
                .clone()
                .unwrap_or_else(|| vec![true; n]);
            // re-parameterise by the leader coordinate's value
            let leader_map = &members[0].1;
            let mut leader_inv = vec![0 as ElementId; n];
            for (r, &v) in leader_map.iter().enumerate() {
                leader_inv[v as usize] = r as ElementId;
            }
            let allowed_values: Vec<ElementId> = (0..n as ElementId)
                .filter(|&u| mask[leader_inv[u as usize] as usize])
                .collect();
            debug_assert!(
                allowed_values.binary_search(&0).is_ok(),
                "an intersection of subgroups contains the identity tuple"
            );
            let allowed = if allowed_values.len() == n {
                AllowedSet::Full
            } else {
                AllowedSet::Subgroup(allowed_values)
            };
            let comp_idx = comps.len();
            for (c, coord_map) in members {
                let map: Vec<ElementId> = (0..n)
                    .map(|u| coord_map[leader_inv[u] as usize])
                    .collect();
                coords[*c] = CoordState::Linked {
                    comp: comp_idx,
                    map,
                };
            }
            comps.push(allowed);
        }
        // classes with no surviving coordinate are fully pinned and contribute
        // a single choice; nothing to record for them
        Ok(DiagonalForm {
            power: self.power.clone(),
            coords,
            comps,
        })
    }

    /// Converts back to a strip product when every component ranges over the
    /// whole base group (single-coordinate components become full factors).
    pub fn to_strip_product(&self) -> Option<StripProduct> {
        if self.comps.iter().any(|c| !matches!(c, AllowedSet::Full)) {
            return None;
        }
        let mut per_comp: Vec<Vec<(usize, Vec<ElementId>)>> = vec![Vec::new(); self.comps.len()];
        for (c, state) in self.coords.iter().enumerate() {
            if let CoordState::Linked { comp, map } = state {
                per_comp[*comp].push((c, map.clone()));
            }
        }
        let base = self.power.base().clone();
        let mut strips = Vec::new();
        let mut full = Vec::new();
        for members in per_comp {
            if members.is_empty() {
                continue;
            }
            if members.len() == 1 {
                full.push(members[0].0);
                continue;
            }
            let support: Vec<usize> = members.iter().map(|m| m.0).collect();
            let twists: Vec<Automorphism> = members[1..]
                .iter()
                .map(|(_, map)| Automorphism::new_unchecked(base.clone(), map.clone()))
                .collect();
            strips.push(FullStrip::new(base.clone(), support, twists).ok()?);
        }
        StripProduct::new(self.power.clone(), strips, full).ok()
    }
}

/// Outcome of decomposing a subdirect subgroup of T^k (T non-abelian simple)
/// into pairwise disjoint full strips.
pub fn scott_decompose(sub: &SubgroupHandle) -> Result<StripProduct> {
    let power = sub.power();
    let base = power.base();
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
    let n = base.order();
    for i in 0..power.k() {
        let proj = sub.coordinate_projection(i)?;
        if proj.len() != n {
            return Err(Error::NotSubdirect {
                coordinate: i,
                projection_size: proj.len(),
                factor_order: n,
            });
        }
    }

    // pairwise projection sizes split the coordinates into blocks
    let k = power.k();
    let mut block_of: Vec<usize> = (0..k).collect();
    let mut pair_sets: Vec<Vec<Option<Vec<ElementId>>>> = vec![vec![None; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let pairs = sub.pairwise_projection(i, j)?;
            if pairs.len() == n {
                // the projection is the graph of a bijection i -> j
                let mut map = vec![ElementId::MAX; n];
                for &code in &pairs {
                    let a = (code >> 32) as usize;
                    let b = (code & 0xffff_ffff) as ElementId;
                    if map[a] != ElementId::MAX {
                        return Err(Error::NotAStripProduct {
                            witness: format!(
                                "projection onto coordinates ({i},{j}) has {n} tuples but is not a bijection graph"
                            ),
                        });
                    }
                    map[a] = b;
                }
                pair_sets[i][j] = Some(map);
                let (bi, bj) = (block_of[i], block_of[j]);
                if bi != bj {
                    let target = bi.min(bj);
                    let source = bi.max(bj);
                    for b in block_of.iter_mut() {
                        if *b == source {
                            *b = target;
                        }
                    }
                }
            } else if pairs.len() != n * n {
                return Err(Error::NotAStripProduct {
                    witness: format!(
                        "projection onto coordinates ({i},{j}) has {} tuples; expected {} or {}",
                        pairs.len(),
                        n,
                        n * n
                    ),
                });
            }
        }
    }

    // assemble blocks in order of least coordinate
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for leader in 0..k {
        if block_of[leader] == leader {
            blocks.push((0..k).filter(|&c| block_of[c] == leader).collect());
        }
    }

    let mut strips = Vec::new();
    let mut full = Vec::new();
    for block in &blocks {
        if block.len() == 1 {
            full.push(block[0]);
            continue;
        }
        let leader = block[0];
        let mut twists = Vec::new();
        for &c in &block[1..] {
            let map = pair_sets[leader][c].clone().ok_or_else(|| {
                Error::NotAStripProduct {
                    witness: format!(
                        "coordinates {leader} and {c} were merged transitively but project onto {} tuples",
                        n * n
                    ),
                }
            })?;
            twists.push(Automorphism::new(base.clone(), map).map_err(|_| {
                Error::NotAStripProduct {
                    witness: format!(
                        "recovered twist between coordinates {leader} and {c} is not an automorphism"
                    ),
                }
            })?);
        }
        strips.push(FullStrip::new(base.clone(), block.clone(), twists)?);
    }
    let product = StripProduct::new(power.clone(), strips, full)?;

    // the generators must satisfy the recovered strip equations
    for g in sub.generators() {
        if !product.contains(g) {
            return Err(Error::NotAStripProduct {
                witness: format!("generator {g:?} escapes the recovered strip product"),
            });
        }
    }
    // extensional confirmation for small cases
    if product.order() <= BigUint::from(EXTENSIONAL_CHECK_CAP) {
        let closure = sub.closure()?;
        if BigUint::from(closure.len()) != product.order() {
            return Err(Error::NotAStripProduct {
                witness: format!(
                    "closure has {} tuples but the strip product has order {}",
                    closure.len(),
                    product.order()
                ),
            });
        }
    }
    Ok(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::morphism::enumerate_automorphisms;
    use crate::rng::Xoshiro256PlusPlus;

    fn a5() -> Arc<FiniteGroup> {
        GroupSpec::Alternating { n: 5 }.build().unwrap()
    }

    fn power(base: &Arc<FiniteGroup>, k: usize) -> DirectPower {
        DirectPower::new(base.clone(), k).unwrap()
    }

    #[test]
    fn strip_product_orders() {
        let t = a5();
        let m2 = power(&t, 2);
        let one = StripProduct::from_supports(m2, &[vec![0, 1]], vec![]).unwrap();
        assert_eq!(one.order(), BigUint::from(60u32));

        let m4 = power(&t, 4);
        let two = StripProduct::from_supports(m4, &[vec![0, 1], vec![2, 3]], vec![]).unwrap();
        assert_eq!(two.order(), BigUint::from(3600u32));

        let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
        let m3 = power(&c3, 3);
        let mixed = StripProduct::from_supports(m3, &[vec![0, 1]], vec![2]).unwrap();
        assert_eq!(mixed.order(), BigUint::from(9u32));
    }

    #[test]
    fn overlapping_supports_rejected() {
        let t = a5();
        let m = power(&t, 3);
        let err = StripProduct::from_supports(m, &[vec![0, 1], vec![1, 2]], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn projection_examples() {
        let t = a5();
        // diagonal of T^2 onto {0} is the full factor
        let m2 = power(&t, 2);
        let diag = StripProduct::from_supports(m2, &[vec![0, 1]], vec![]).unwrap();
        let p = diag.project(&[0]).unwrap();
        assert_eq!(p.order(), BigUint::from(60u32));
        assert!(p.is_subdirect());

        // strip on {0,1} in T^3 projected to {2} is trivial
        let m3 = power(&t, 3);
        let strip = StripProduct::from_supports(m3.clone(), &[vec![0, 1]], vec![]).unwrap();
        let trivial = strip.project(&[2]).unwrap();
        assert_eq!(trivial.order(), BigUint::from(1u32));

        // (strip{0,1} x T_2) onto {1,2} is T^2
        let k = StripProduct::from_supports(m3, &[vec![0, 1]], vec![2]).unwrap();
        let p = k.project(&[1, 2]).unwrap();
        assert_eq!(p.order(), BigUint::from(3600u32));
        // cross-check extensionally
        let handle = k.to_handle().project(&[1, 2]).unwrap();
        assert_eq!(handle.order().unwrap(), BigUint::from(3600u32));
    }

    #[test]
    fn a_strip_realises_base_order_and_projects_subdirectly_onto_its_support() {
        let t = a5();
        let m4 = power(&t, 4);
        let phi = enumerate_automorphisms(&t)[11].clone();
        let strip = FullStrip::new(t.clone(), vec![1, 3], vec![phi]).unwrap();
        assert_eq!(strip.realized_size(), 60);
        let sp = StripProduct::new(m4, vec![strip.clone()], vec![]).unwrap();
        assert_eq!(
            sp.to_handle().order().unwrap(),
            BigUint::from(strip.realized_size())
        );
        let onto_support = sp.project(strip.support()).unwrap();
        assert!(onto_support.is_subdirect());
    }

    #[test]
    fn subdirect_examples() {
        let t = a5();
        let m3 = power(&t, 3);
        let full_diag = StripProduct::from_supports(m3.clone(), &[vec![0, 1, 2]], vec![]).unwrap();
        assert!(full_diag.is_subdirect());
        let with_full = StripProduct::from_supports(m3.clone(), &[vec![0, 1]], vec![2]).unwrap();
        assert!(with_full.is_subdirect());
        let bare = StripProduct::from_supports(m3, &[vec![0, 1]], vec![]).unwrap();
        assert!(!bare.is_subdirect());
    }

    #[test]
    fn scott_decomposes_full_diagonal() {
        let t = a5();
        let m2 = power(&t, 2);
        let diag = StripProduct::from_supports(m2, &[vec![0, 1]], vec![]).unwrap();
        let recovered = scott_decompose(&diag.to_handle()).unwrap();
        assert_eq!(recovered, diag);
        assert!(recovered.strips()[0].twists()[0].is_identity());
    }

    #[test]
    fn scott_recovers_outer_twist_and_full_coordinate() {
        let t = a5();
        let outer = enumerate_automorphisms(&t)
            .into_iter()
            .find(|a| {
                // outer automorphisms of A5 are those that are not conjugations
                !(0..60).any(|h| {
                    (0..60).all(|x| a.apply(x) == t.conjugate(x, h))
                })
            })
            .expect("A5 has outer automorphisms");
        let m3 = power(&t, 3);
        let strip = FullStrip::new(t.clone(), vec![0, 1], vec![outer.clone()]).unwrap();
        let sp = StripProduct::new(m3, vec![strip], vec![2]).unwrap();
        let recovered = scott_decompose(&sp.to_handle()).unwrap();
        assert_eq!(recovered, sp);
        assert_eq!(recovered.full_coords(), &[2]);
        assert_eq!(recovered.strips()[0].twists()[0].map(), outer.map());
    }

    #[test]
    fn scott_rejects_abelian_and_non_subdirect() {
        let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
        let m = power(&c3, 2);
        let diag = StripProduct::from_supports(m, &[vec![0, 1]], vec![]).unwrap();
        assert!(matches!(
            scott_decompose(&diag.to_handle()),
            Err(Error::BaseNotSimple { .. })
        ));

        let t = a5();
        let m3 = power(&t, 3);
        let bare = StripProduct::from_supports(m3, &[vec![0, 1]], vec![]).unwrap();
        assert!(matches!(
            scott_decompose(&bare.to_handle()),
            Err(Error::NotSubdirect { .. })
        ));
    }

    fn random_strip_product(
        power: &DirectPower,
        autos: &[Automorphism],
        rng: &mut Xoshiro256PlusPlus,
    ) -> StripProduct {
        let k = power.k();
        // random partition of 0..k
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for c in 0..k {
            let choice = rng.gen_range(blocks.len() as u64 + 1) as usize;
            if choice == blocks.len() {
                blocks.push(vec![c]);
            } else {
                blocks[choice].push(c);
            }
        }
        let mut strips = Vec::new();
        let mut full = Vec::new();
        for block in blocks {
            if block.len() == 1 {
                full.push(block[0]);
            } else {
                let twists: Vec<Automorphism> = (1..block.len())
                    .map(|_| autos[rng.gen_range(autos.len() as u64) as usize].clone())
                    .collect();
                strips.push(FullStrip::new(power.base().clone(), block, twists).unwrap());
            }
        }
        StripProduct::new(power.clone(), strips, full).unwrap()
    }

    #[test]
    fn scott_round_trip_on_random_products() {
        let t = a5();
        let autos = enumerate_automorphisms(&t);
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(42);
        for _ in 0..25 {
            let k = 2 + rng.gen_range(4) as usize;
            let m = power(&t, k);
            let sp = random_strip_product(&m, &autos, &mut rng);
            let recovered = scott_decompose(&sp.to_handle()).unwrap();
            assert_eq!(recovered, sp);
        }
    }

    #[test]
    fn diagonal_form_intersection_of_twisted_diagonals() {
        let c3 = GroupSpec::Cyclic { n: 3 }.build().unwrap();
        let m = power(&c3, 2);
        let autos = enumerate_automorphisms(&c3);
        let inv = autos
            .iter()
            .find(|a| !a.is_identity())
            .unwrap()
            .clone();
        let x = StripProduct::from_supports(m.clone(), &[vec![0, 1]], vec![]).unwrap();
        let y = StripProduct::new(
            m.clone(),
            vec![FullStrip::new(c3.clone(), vec![0, 1], vec![inv]).unwrap()],
            vec![],
        )
        .unwrap();
        // diagonal ∩ inversion-twisted diagonal = {(g,g): g = -g} = {identity}
        let meet = x.to_diagonal_form().intersect(&y.to_diagonal_form()).unwrap();
        assert_eq!(meet.order(), BigUint::from(1u32));
        // diagonal ∩ itself = diagonal
        let self_meet = x.to_diagonal_form().intersect(&x.to_diagonal_form()).unwrap();
        assert_eq!(self_meet.order(), BigUint::from(3u32));
        assert!(self_meet.contains(&[1, 1]));
        assert!(!self_meet.contains(&[1, 2]));
    }

    #[test]
    fn intersection_survives_late_regrafting_of_an_agreed_component() {
        // X = twisted strip on {0,1} times a full coordinate, Y = a fully
        // twisted strip on {0,1,2}: the unifier records the {0,1} agreement
        // before coordinate 2 re-roots the component, which once produced a
        // correctly sized but wrongly positioned solution set
        let g = crate::group::GroupSpec::Symmetric { n: 3 }.build().unwrap();
        let autos = enumerate_automorphisms(&g);
        let m = DirectPower::new(g.clone(), 3).unwrap();
        for (pi, ci, oi) in [(1usize, 2usize, 3usize), (2, 4, 1), (5, 1, 2), (0, 3, 5)] {
            let x = StripProduct::new(
                m.clone(),
                vec![FullStrip::new(g.clone(), vec![0, 1], vec![autos[pi].clone()]).unwrap()],
                vec![2],
            )
            .unwrap();
            let y = StripProduct::new(
                m.clone(),
                vec![FullStrip::new(
                    g.clone(),
                    vec![0, 1, 2],
                    vec![autos[ci].clone(), autos[oi].clone()],
                )
                .unwrap()],
                vec![],
            )
            .unwrap();
            let meet = x.to_diagonal_form().intersect(&y.to_diagonal_form()).unwrap();
            let mut truth = 0usize;
            for t in &y.to_handle().closure().unwrap().elements {
                let expected = x.contains(t);
                assert_eq!(meet.contains(t), expected);
                truth += usize::from(expected);
            }
            assert_eq!(meet.order(), BigUint::from(truth));
        }
    }

    #[test]
    fn diagonal_form_intersection_matches_extensional_on_a5() {
        let t = a5();
        let m = power(&t, 3);
        let x = StripProduct::from_supports(m.clone(), &[vec![0, 1]], vec![2]).unwrap();
        let y = StripProduct::from_supports(m.clone(), &[vec![0, 2]], vec![1]).unwrap();
        let meet = x.to_diagonal_form().intersect(&y.to_diagonal_form()).unwrap();
        // {(t, s, u) : s = t, u = t} = full diagonal
        assert_eq!(meet.order(), BigUint::from(60u32));
        assert!(meet.is_subdirect());
        let sp = meet.to_strip_product().unwrap();
        assert_eq!(sp.strips().len(), 1);
        assert_eq!(sp.strips()[0].support(), &[0, 1, 2]);
    }

    #[test]
    fn strip_transform_normalises_leader() {
        let t = a5();
        let autos = enumerate_automorphisms(&t);
        let phi = autos[5].clone();
        let strip = FullStrip::new(t.clone(), vec![0, 1], vec![phi.clone()]).unwrap();
        // swap the two coordinates: {(t, phi(t))} -> {(phi(t), t)} =
        // {(u, phi^-1(u))}
        let id = Automorphism::identity(&t);
        let swapped = strip.transform(&[1, 0], &[id.clone(), id]);
        assert_eq!(swapped.support(), &[0, 1]);
        assert_eq!(swapped.twists()[0].map(), phi.inverse().map());
    }

    #[test]
    fn strip_json_round_trip() {
        let t = a5();
        let m = power(&t, 4);
        let autos = enumerate_automorphisms(&t);
        let sp = StripProduct::new(
            m.clone(),
            vec![
                FullStrip::new(t.clone(), vec![0, 2], vec![autos[7].clone()]).unwrap(),
            ],
            vec![1, 3],
        )
        .unwrap();
        let json = sp.to_json();
        assert_eq!(json.strips[0].support, vec![1, 3]);
        assert_eq!(json.full, vec![2, 4]);
        let back = StripProduct::from_json(&m, &json).unwrap();
        assert_eq!(back, sp);
    }
}
