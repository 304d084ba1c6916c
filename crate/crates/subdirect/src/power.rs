//! Direct powers M = T^k and extensionally-represented subgroups of them.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};

/// Cap on extensional closures, in tuples.
pub const CLOSURE_TUPLE_CAP: usize = 10_000_000;

/// The ambient group T^k with componentwise multiplication. Elements are
/// k-tuples of base ids; the full element set is never materialised.
#[derive(Clone)]
pub struct DirectPower {
    base: Arc<FiniteGroup>,
    k: usize,
}

impl std::fmt::Debug for DirectPower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.base.name(), self.k)
    }
}

impl DirectPower {
    pub fn new(base: Arc<FiniteGroup>, k: usize) -> Result<DirectPower> {
        if k == 0 {
            return Err(Error::InvalidInput("direct power needs k >= 1".into()));
        }
        Ok(DirectPower { base, k })
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.order()).pow(self.k as u32)
    }

    pub fn identity(&self) -> Vec<ElementId> {
        vec![0; self.k]
    }

    pub fn mul(&self, a: &[ElementId], b: &[ElementId]) -> Vec<ElementId> {
        debug_assert_eq!(a.len(), self.k);
        debug_assert_eq!(b.len(), self.k);
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.mul(x, y))
            .collect()
    }

    pub fn inv(&self, a: &[ElementId]) -> Vec<ElementId> {
        a.iter().map(|&x| self.base.inv(x)).collect()
    }

    pub fn same_ambient(&self, other: &DirectPower) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.k == other.k
    }

    /// Generators of the whole power: base generators embedded per coordinate.
    pub fn generating_tuples(&self) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for &g in self.base.generators() {
                let mut t = self.identity();
                t[i] = g;
                out.push(t);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ClosureData {
    pub elements: Vec<Vec<ElementId>>,
    set: HashSet<Vec<ElementId>>,
}

impl ClosureData {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, tuple: &[ElementId]) -> bool {
        self.set.contains(tuple)
    }
}

/// A subgroup of a direct power held by a generating set of tuples, with the
/// element closure computed lazily and capped. This is the container for
/// subgroups before any strip structure is recognised.
pub struct SubgroupHandle {
    power: DirectPower,
    generators: Vec<Vec<ElementId>>,
    closure: OnceLock<std::result::Result<ClosureData, Error>>,
}

impl std::fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SubgroupHandle({:?}, {} generators)",
            self.power,
            self.generators.len()
        )
    }
}

impl SubgroupHandle {
    pub fn new(power: DirectPower, generators: Vec<Vec<ElementId>>) -> Result<SubgroupHandle> {
        for g in &generators {
            if g.len() != power.k() {
                return Err(Error::InvalidInput(
                    "generating tuple length differs from k".into(),
                ));
            }
            if g.iter().any(|&x| (x as usize) >= power.base().order()) {
                return Err(Error::InvalidInput("generating tuple id out of range".into()));
            }
        }
        Ok(SubgroupHandle {
            power,
            generators,
            closure: OnceLock::new(),
        })
    }

    pub fn power(&self) -> &DirectPower {
        &self.power
    }

    pub fn generators(&self) -> &[Vec<ElementId>] {
        &self.generators
    }

    /// Breadth-first closure of the generators, capped at
    /// [`CLOSURE_TUPLE_CAP`] tuples.
    pub fn closure(&self) -> Result<&ClosureData> {
        self.closure
            .get_or_init(|| {
                let identity = self.power.identity();
                let mut elements = vec![identity.clone()];
                let mut set = HashSet::new();
                set.insert(identity);
                let mut head = 0usize;
                while head < elements.len() {
                    let current = elements[head].clone();
                    head += 1;
                    for g in &self.generators {
                        let next = self.power.mul(&current, g);
                        if !set.contains(&next) {
                            if elements.len() >= CLOSURE_TUPLE_CAP {
                                return Err(Error::ClosureCapExceeded {
                                    cap: CLOSURE_TUPLE_CAP,
                                });
                            }
                            set.insert(next.clone());
                            elements.push(next);
                        }
                    }
                }
                Ok(ClosureData { elements, set })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn order(&self) -> Result<BigUint> {
        Ok(BigUint::from(self.closure()?.len()))
    }

    pub fn contains(&self, tuple: &[ElementId]) -> Result<bool> {
        Ok(self.closure()?.contains(tuple))
    }

    /// Image under the coordinate projection onto the (0-based, strictly
    /// ascending) index set `indices`, as a subgroup of T^|indices|.
    pub fn project(&self, indices: &[usize]) -> Result<SubgroupHandle> {
        validate_indices(indices, self.power.k())?;
        let projected: Vec<Vec<ElementId>> = self
            .generators
            .iter()
            .map(|g| indices.iter().map(|&i| g[i]).collect())
            .collect();
        SubgroupHandle::new(
            DirectPower::new(self.power.base().clone(), indices.len())?,
            projected,
        )
    }

    /// Sorted element set of the projection onto a single coordinate.
    pub fn coordinate_projection(&self, i: usize) -> Result<Vec<ElementId>> {
        validate_indices(&[i], self.power.k())?;
        let seeds: Vec<ElementId> = self.generators.iter().map(|g| g[i]).collect();
        Ok(self.power.base().subgroup_closure(&seeds))
    }

    /// True when every single-coordinate projection is the full base group.
    pub fn is_subdirect(&self) -> Result<bool> {
        for i in 0..self.power.k() {
            if self.coordinate_projection(i)?.len() != self.power.base().order() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The projection onto coordinates {i, j} as a set of base-id pairs.
    /// Pairs are encoded as `a << 32 | b` for speed.
    pub fn pairwise_projection(&self, i: usize, j: usize) -> Result<HashSet<u64>> {
        if i == j || i >= self.power.k() || j >= self.power.k() {
            return Err(Error::InvalidInput("pairwise projection needs two distinct coordinates".into()));
        }
        let base = self.power.base();
        let seeds: Vec<(ElementId, ElementId)> =
            self.generators.iter().map(|g| (g[i], g[j])).collect();
        let mut set: HashSet<u64> = HashSet::new();
        let encode = |a: ElementId, b: ElementId| ((a as u64) << 32) | b as u64;
        set.insert(encode(0, 0));
        let mut stack: Vec<(ElementId, ElementId)> = vec![(0, 0)];
        while let Some((a, b)) = stack.pop() {
            for &(sa, sb) in &seeds {
                let next = (base.mul(a, sa), base.mul(b, sb));
                if set.insert(encode(next.0, next.1)) {
                    stack.push(next);
                }
            }
        }
        Ok(set)
    }
}

pub(crate) fn validate_indices(indices: &[usize], k: usize) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) || *indices.last().unwrap() >= k {
        return Err(Error::InvalidInput(
            "coordinate indices must be strictly ascending and within 0..k".into(),
        ));
    }
    Ok(())
}
