//! Finite groups with dense element ids and an explicit multiplication oracle.
//!
//! Elements are ids `0..order`, with `0` always the identity. Groups of order
//! at most 1024 are backed by a full multiplication table; larger symmetric,
//! alternating and permutation-generated groups multiply by permutation
//! composition, and large direct products multiply componentwise. Exhaustive
//! searches elsewhere in the crate rely on multiplication being O(1)-ish, so
//! the table path is taken whenever it fits.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Xoshiro256PlusPlus;

pub type ElementId = u32;

/// Default cap on group order; construction fails above it rather than
/// silently degrading.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Orders up to this bound get a dense multiplication table.
const TABLE_THRESHOLD: usize = 1024;

/// Associativity of explicit tables is checked exhaustively up to this order
/// and spot-checked with seeded random triples above it.
const EXHAUSTIVE_ASSOC_BOUND: usize = 512;

enum Backing {
    Table {
        mul: Vec<ElementId>,
    },
    Perms {
        degree: usize,
        perms: Vec<Vec<u16>>,
        index: HashMap<Vec<u16>, ElementId>,
    },
    Product {
        factors: Vec<Arc<FiniteGroup>>,
        strides: Vec<usize>,
    },
}

pub struct FiniteGroup {
    name: String,
    order: usize,
    backing: Backing,
    inv: Vec<ElementId>,
    generators: Vec<ElementId>,
    element_orders: OnceLock<Vec<u32>>,
    abelian: OnceLock<bool>,
    solvable: OnceLock<bool>,
    simple: OnceLock<bool>,
    pub(crate) automorphism_maps: OnceLock<Vec<Vec<ElementId>>>,
    pub(crate) first_uniform: OnceLock<Option<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        0..self.order as ElementId
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        debug_assert!((a as usize) < self.order && (b as usize) < self.order);
        match &self.backing {
            Backing::Table { mul } => mul[a as usize * self.order + b as usize],
            Backing::Perms {
                degree,
                perms,
                index,
            } => {
                let pa = &perms[a as usize];
                let pb = &perms[b as usize];
                let mut out = vec![0u16; *degree];
                for i in 0..*degree {
                    out[i] = pb[pa[i] as usize];
                }
                index[&out]
            }
            Backing::Product { factors, strides } => {
                let mut result = 0usize;
                let (mut ra, mut rb) = (a as usize, b as usize);
                for (f, &stride) in factors.iter().zip(strides) {
                    let (ca, cb) = (ra / stride, rb / stride);
                    ra %= stride;
                    rb %= stride;
                    result += f.mul(ca as ElementId, cb as ElementId) as usize * stride;
                }
                result as ElementId
            }
        }
    }

    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inv[a as usize]
    }

    /// g^-1 * h^-1 * g * h
    pub fn commutator(&self, g: ElementId, h: ElementId) -> ElementId {
        let gh = self.mul(g, h);
        let hg = self.mul(h, g);
        self.mul(self.inv(hg), gh)
    }

    pub fn conjugate(&self, g: ElementId, by: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(by), g), by)
    }

    pub fn order_of(&self, g: ElementId) -> u32 {
        self.element_orders()[g as usize]
    }

    pub fn element_orders(&self) -> &[u32] {
        self.element_orders.get_or_init(|| {
            (0..self.order as ElementId)
                .map(|g| {
                    let mut x = g;
                    let mut n = 1u32;
                    while x != 0 {
                        x = self.mul(x, g);
                        n += 1;
                    }
                    n
                })
                .collect()
        })
    }

    pub fn is_abelian(&self) -> bool {
        *self.abelian.get_or_init(|| {
            // commutativity on generators suffices
            self.generators
                .iter()
                .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
        })
    }

    /// Closure of the given elements under multiplication, as a sorted id list.
    pub fn subgroup_closure(&self, seeds: &[ElementId]) -> Vec<ElementId> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack: Vec<ElementId> = vec![0];
        for &s in seeds {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order as ElementId)
            .filter(|&g| seen[g as usize])
            .collect()
    }

    /// A small generating set of the subgroup given by a sorted element list,
    /// chosen greedily by ascending id (deterministic).
    pub fn small_generating_set(&self, sub: &[ElementId]) -> Vec<ElementId> {
        let mut gens: Vec<ElementId> = Vec::new();
        let mut closure: Vec<ElementId> = vec![0];
        for &g in sub {
            if !closure.binary_search(&g).is_ok() {
                gens.push(g);
                closure = self.subgroup_closure(&gens);
                if closure.len() == sub.len() {
                    break;
                }
            }
        }
        gens
    }

    /// Smallest subgroup containing `seeds` that is normalised by `normalisers`.
    pub fn normal_closure(&self, seeds: &[ElementId], normalisers: &[ElementId]) -> Vec<ElementId> {
        let mut gens: Vec<ElementId> = seeds.to_vec();
        loop {
            let sub = self.subgroup_closure(&gens);
            let mut new_gens = gens.clone();
            let mut grew = false;
            let sub_gens = self.small_generating_set(&sub);
            for &g in &sub_gens {
                for &n in normalisers {
                    let c = self.conjugate(g, n);
                    if !sub.binary_search(&c).is_ok() {
                        new_gens.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
            gens = new_gens;
        }
    }

    /// Derived subgroup of the subgroup generated by `sub_gens`.
    pub fn derived_subgroup(&self, sub_gens: &[ElementId]) -> Vec<ElementId> {
        let mut comms: Vec<ElementId> = Vec::new();
        for &a in sub_gens {
            for &b in sub_gens {
                let c = self.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        if comms.is_empty() {
            return vec![0];
        }
        self.normal_closure(&comms, sub_gens)
    }

    /// Solvability by the derived series: it must reach the trivial subgroup.
    pub fn is_solvable(&self) -> bool {
        *self.solvable.get_or_init(|| {
            let mut current: Vec<ElementId> = self.generators.to_vec();
            let mut size = self.order;
            loop {
                let derived = self.derived_subgroup(&current);
                if derived.len() == 1 {
                    return true;
                }
                if derived.len() == size {
                    return false;
                }
                size = derived.len();
                current = self.small_generating_set(&derived);
            }
        })
    }

    /// One representative per conjugacy class, ascending by least member.
    pub fn conjugacy_class_reps(&self) -> Vec<ElementId> {
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order as ElementId {
            if seen[g as usize] {
                continue;
            }
            reps.push(g);
            // orbit of g under conjugation
            let mut stack = vec![g];
            seen[g as usize] = true;
            while let Some(x) = stack.pop() {
                for &h in &self.generators {
                    let c = self.conjugate(x, h);
                    if !seen[c as usize] {
                        seen[c as usize] = true;
                        stack.push(c);
                    }
                }
            }
        }
        reps
    }

    /// True when the group has no proper non-trivial normal subgroup, decided
    /// by checking that every non-identity conjugacy class generates the whole
    /// group as a normal subgroup.
    pub fn is_simple(&self) -> bool {
        *self.simple.get_or_init(|| {
            if self.order == 1 {
                return false;
            }
            for rep in self.conjugacy_class_reps() {
                if rep == 0 {
                    continue;
                }
                if self.normal_closure(&[rep], &self.generators).len() != self.order {
                    return false;
                }
            }
            true
        })
    }
}

/// Declarative description of a finite group; the textual and JSON external
/// interface of group construction.
///
/// ```
/// use subdirect::group::GroupSpec;
///
/// let a5 = GroupSpec::Alternating { n: 5 }.build().unwrap();
/// assert_eq!(a5.order(), 60);
/// assert!(!a5.is_solvable());
///
/// let spec: GroupSpec = "product:cyclic:3,cyclic:3".parse().unwrap();
/// assert_eq!(spec.build().unwrap().order(), 9);
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Alternating { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { mul: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupSpec::Symmetric { n } => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating { n } => write!(f, "alternating:{n}"),
            GroupSpec::Product { factors } => {
                write!(f, "product:")?;
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
            GroupSpec::Table { mul } => write!(f, "table[{}]", mul.len()),
            GroupSpec::Perm { degree, generators } => {
                write!(f, "perm:deg{},gens{}", degree, generators.len())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `kind:param[,param]`, e.g. `cyclic:9`, `alternating:5`,
    /// `product:cyclic:3,cyclic:3`. Tables and permutation generators are
    /// only available through the JSON form.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("group spec `{s}` is missing `kind:`")))?;
        let parse_n = |rest: &str| -> Result<usize> {
            rest.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad parameter in group spec `{s}`")))
        };
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic { n: parse_n(rest)? }),
            "symmetric" => Ok(GroupSpec::Symmetric { n: parse_n(rest)? }),
            "alternating" => Ok(GroupSpec::Alternating { n: parse_n(rest)? }),
            "product" => {
                // one nesting level: factors are themselves `kind:n` specs
                let mut factors = Vec::new();
                for part in split_product_params(rest) {
                    factors.push(part.parse()?);
                }
                if factors.is_empty() {
                    return Err(Error::InvalidInput("product needs factors".into()));
                }
                Ok(GroupSpec::Product { factors })
            }
            _ => Err(Error::InvalidInput(format!("unknown group kind `{kind}`"))),
        }
    }
}

/// Splits `cyclic:3,cyclic:3` into factor specs. A comma starts a new factor
/// exactly when what follows looks like `kind:`, so numeric parameter lists
/// stay attached to their factor.
fn split_product_params(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in s.split(',') {
        if piece.contains(':') || out.is_empty() {
            out.push(piece.to_string());
        } else {
            let last = out.last_mut().unwrap();
            last.push(',');
            last.push_str(piece);
        }
    }
    out
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        self.build_with_cap(DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<Arc<FiniteGroup>> {
        match self {
            GroupSpec::Cyclic { n } => build_cyclic(*n, cap),
            GroupSpec::Symmetric { n } => build_symmetric(*n, cap, false),
            GroupSpec::Alternating { n } => build_symmetric(*n, cap, true),
            GroupSpec::Product { factors } => build_product(factors, cap),
            GroupSpec::Table { mul } => build_from_table(mul, cap),
            GroupSpec::Perm { degree, generators } => {
                build_from_perm_generators(*degree, generators, cap)
            }
        }
    }
}

fn finish_group(
    name: String,
    order: usize,
    backing: Backing,
    generators: Vec<ElementId>,
) -> Result<Arc<FiniteGroup>> {
    let mut g = FiniteGroup {
        name,
        order,
        backing,
        inv: Vec::new(),
        generators,
        element_orders: OnceLock::new(),
        abelian: OnceLock::new(),
        solvable: OnceLock::new(),
        simple: OnceLock::new(),
        automorphism_maps: OnceLock::new(),
        first_uniform: OnceLock::new(),
    };
    let mut inv = vec![ElementId::MAX; order];
    for a in 0..order as ElementId {
        if inv[a as usize] != ElementId::MAX {
            continue;
        }
        let mut found = false;
        for b in 0..order as ElementId {
            if g_mul(&g, a, b) == 0 {
                if g_mul(&g, b, a) != 0 {
                    return Err(Error::NotAGroup {
                        reason: format!("element {a} has a right inverse that is not a left inverse"),
                    });
                }
                inv[a as usize] = b;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NotAGroup {
                reason: format!("element {a} has no inverse"),
            });
        }
    }
    g.inv = inv;
    // the declared generators must generate everything
    let closure = g.subgroup_closure(&g.generators.clone());
    if closure.len() != order {
        return Err(Error::NotAGroup {
            reason: format!(
                "generators span {} of {} elements",
                closure.len(),
                order
            ),
        });
    }
    Ok(Arc::new(g))
}

// multiplication before `inv` is filled in
fn g_mul(g: &FiniteGroup, a: ElementId, b: ElementId) -> ElementId {
    match &g.backing {
        Backing::Table { mul } => mul[a as usize * g.order + b as usize],
        _ => g.mul(a, b),
    }
}

fn build_cyclic(n: usize, cap: usize) -> Result<Arc<FiniteGroup>> {
    if n == 0 {
        return Err(Error::InvalidInput("cyclic group needs n >= 1".into()));
    }
    if n > cap {
        return Err(Error::OrderCapExceeded { order: n, cap });
    }
    let mut mul = vec![0 as ElementId; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = ((a + b) % n) as ElementId;
        }
    }
    let generators = if n == 1 { vec![] } else { vec![1] };
    finish_group(format!("C{n}"), n, Backing::Table { mul }, generators)
}

fn perm_parity(p: &[u16]) -> bool {
    // true = even
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions.is_multiple_of(2)
}

fn all_permutations(n: usize) -> Vec<Vec<u16>> {
    // lexicographic order, so the identity comes first
    let mut current: Vec<u16> = (0..n as u16).collect();
    let mut out = vec![current.clone()];
    loop {
        // next_permutation
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && current[i - 1] >= current[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while current[j] <= current[i - 1] {
            j -= 1;
        }
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}

fn cycle_perm(n: usize, cycle: &[u16]) -> Vec<u16> {
    let mut p: Vec<u16> = (0..n as u16).collect();
    for w in 0..cycle.len() {
        p[cycle[w] as usize] = cycle[(w + 1) % cycle.len()];
    }
    p
}

fn build_symmetric(n: usize, cap: usize, alternating: bool) -> Result<Arc<FiniteGroup>> {
    let label = if alternating { "A" } else { "S" };
    if n == 0 {
        return Err(Error::InvalidInput(
            "symmetric and alternating groups need n >= 1".into(),
        ));
    }
    let mut order = 1usize;
    for i in 2..=n {
        order = order
            .checked_mul(i)
            .ok_or(Error::OrderCapExceeded { order: usize::MAX, cap })?;
        if order > cap * 2 {
            return Err(Error::OrderCapExceeded { order, cap });
        }
    }
    if alternating && n >= 2 {
        order /= 2;
    }
    if order > cap {
        return Err(Error::OrderCapExceeded { order, cap });
    }

    let perms: Vec<Vec<u16>> = all_permutations(n)
        .into_iter()
        .filter(|p| !alternating || perm_parity(p))
        .collect();
    debug_assert_eq!(perms.len(), order);
    let index: HashMap<Vec<u16>, ElementId> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as ElementId))
        .collect();

    let gen_perms: Vec<Vec<u16>> = if alternating {
        if n <= 2 {
            vec![]
        } else if n == 3 {
            vec![cycle_perm(n, &[0, 1, 2])]
        } else if n % 2 == 1 {
            vec![cycle_perm(n, &[0, 1, 2]), cycle_perm(n, &(0..n as u16).collect::<Vec<_>>())]
        } else {
            vec![cycle_perm(n, &[0, 1, 2]), cycle_perm(n, &(1..n as u16).collect::<Vec<_>>())]
        }
    } else if n == 1 {
        vec![]
    } else if n == 2 {
        vec![cycle_perm(n, &[0, 1])]
    } else {
        vec![cycle_perm(n, &[0, 1]), cycle_perm(n, &(0..n as u16).collect::<Vec<_>>())]
    };
    let generators: Vec<ElementId> = gen_perms.iter().map(|p| index[p]).collect();

    let name = format!("{label}{n}");
    let backing = if order <= TABLE_THRESHOLD {
        let mut mul = vec![0 as ElementId; order * order];
        let degree = n;
        for a in 0..order {
            for b in 0..order {
                let mut out = vec![0u16; degree];
                for i in 0..degree {
                    out[i] = perms[b][perms[a][i] as usize];
                }
                mul[a * order + b] = index[&out];
            }
        }
        Backing::Table { mul }
    } else {
        Backing::Perms {
            degree: n,
            perms,
            index,
        }
    };
    finish_group(name, order, backing, generators)
}

fn build_product(factors: &[GroupSpec], cap: usize) -> Result<Arc<FiniteGroup>> {
    if factors.is_empty() {
        return Err(Error::InvalidInput("product needs at least one factor".into()));
    }
    let built: Vec<Arc<FiniteGroup>> = factors
        .iter()
        .map(|f| f.build_with_cap(cap))
        .collect::<Result<_>>()?;
    let mut order = 1usize;
    for f in &built {
        order = order
            .checked_mul(f.order())
            .ok_or(Error::OrderCapExceeded { order: usize::MAX, cap })?;
        if order > cap {
            return Err(Error::OrderCapExceeded { order, cap });
        }
    }
    // strides for mixed-radix encoding, first factor most significant
    let mut strides = vec![1usize; built.len()];
    for i in (0..built.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * built[i + 1].order();
    }
    let mut generators: Vec<ElementId> = Vec::new();
    for (i, f) in built.iter().enumerate() {
        for &g in f.generators() {
            generators.push((g as usize * strides[i]) as ElementId);
        }
    }
    let name = built
        .iter()
        .map(|f| f.name().to_string())
        .collect::<Vec<_>>()
        .join("x");

    if order <= TABLE_THRESHOLD {
        let decode = |id: usize| -> Vec<ElementId> {
            let mut rest = id;
            strides
                .iter()
                .map(|&s| {
                    let c = rest / s;
                    rest %= s;
                    c as ElementId
                })
                .collect()
        };
        let mut mul = vec![0 as ElementId; order * order];
        for a in 0..order {
            let da = decode(a);
            for b in 0..order {
                let db = decode(b);
                let mut id = 0usize;
                for i in 0..built.len() {
                    id += built[i].mul(da[i], db[i]) as usize * strides[i];
                }
                mul[a * order + b] = id as ElementId;
            }
        }
        finish_group(name, order, Backing::Table { mul }, generators)
    } else {
        finish_group(
            name,
            order,
            Backing::Product {
                factors: built,
                strides,
            },
            generators,
        )
    }
}

fn build_from_table(rows: &[Vec<usize>], cap: usize) -> Result<Arc<FiniteGroup>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty multiplication table".into()));
    }
    if n > cap {
        return Err(Error::OrderCapExceeded { order: n, cap });
    }
    for row in rows {
        if row.len() != n || row.iter().any(|&e| e >= n) {
            return Err(Error::NotAGroup {
                reason: "table is not square over ids 0..n".into(),
            });
        }
    }
    // locate the two-sided identity
    let identity = (0..n).find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x));
    let Some(e) = identity else {
        return Err(Error::NotAGroup {
            reason: "table has no two-sided identity".into(),
        });
    };
    // relabel by swapping ids 0 and e so the identity is element 0
    let relabel = |x: usize| -> usize {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut mul = vec![0 as ElementId; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as ElementId;
        }
    }
    // associativity: exhaustive up to the bound, seeded random triples above
    if n <= EXHAUSTIVE_ASSOC_BOUND {
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::NonAssociativeTable { a, b, c });
                    }
                }
            }
        }
    } else {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
        for _ in 0..10_000 {
            let a = rng.gen_range(n as u64) as usize;
            let b = rng.gen_range(n as u64) as usize;
            let c = rng.gen_range(n as u64) as usize;
            let ab = mul[a * n + b] as usize;
            let bc = mul[b * n + c] as usize;
            if mul[ab * n + c] != mul[a * n + bc] {
                return Err(Error::NonAssociativeTable { a, b, c });
            }
        }
    }
    let backing = Backing::Table { mul };
    // greedy small generating set over the relabelled ids
    let probe = FiniteGroup {
        name: String::new(),
        order: n,
        backing,
        inv: Vec::new(),
        generators: Vec::new(),
        element_orders: OnceLock::new(),
        abelian: OnceLock::new(),
        solvable: OnceLock::new(),
        simple: OnceLock::new(),
        automorphism_maps: OnceLock::new(),
        first_uniform: OnceLock::new(),
    };
    let all: Vec<ElementId> = (0..n as ElementId).collect();
    let generators = probe.small_generating_set(&all);
    let Backing::Table { mul } = probe.backing else {
        unreachable!()
    };
    finish_group(format!("table{n}"), n, Backing::Table { mul }, generators)
}

fn build_from_perm_generators(
    degree: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<Arc<FiniteGroup>> {
    if degree == 0 || degree > u16::MAX as usize {
        return Err(Error::InvalidInput("permutation degree out of range".into()));
    }
    let mut gen_perms: Vec<Vec<u16>> = Vec::new();
    for g in generators {
        if g.len() != degree {
            return Err(Error::InvalidInput(
                "permutation generator has the wrong length".into(),
            ));
        }
        let mut seen = vec![false; degree];
        for &img in g {
            if img >= degree || seen[img] {
                return Err(Error::InvalidInput(
                    "permutation generator is not a bijection".into(),
                ));
            }
            seen[img] = true;
        }
        gen_perms.push(g.iter().map(|&x| x as u16).collect());
    }
    // breadth-first closure from the identity; discovery order fixes the ids
    let identity: Vec<u16> = (0..degree as u16).collect();
    let mut perms: Vec<Vec<u16>> = vec![identity.clone()];
    let mut index: HashMap<Vec<u16>, ElementId> = HashMap::new();
    index.insert(identity, 0);
    let mut head = 0usize;
    while head < perms.len() {
        let current = perms[head].clone();
        head += 1;
        for g in &gen_perms {
            let mut next = vec![0u16; degree];
            for i in 0..degree {
                next[i] = g[current[i] as usize];
            }
            if !index.contains_key(&next) {
                if perms.len() >= cap {
                    return Err(Error::OrderCapExceeded {
                        order: perms.len() + 1,
                        cap,
                    });
                }
                index.insert(next.clone(), perms.len() as ElementId);
                perms.push(next);
            }
        }
    }
    let order = perms.len();
    let gen_ids: Vec<ElementId> = gen_perms.iter().map(|g| index[g]).collect();
    let name = format!("perm{degree}g{}", gen_ids.len());
    if order <= TABLE_THRESHOLD {
        let mut mul = vec![0 as ElementId; order * order];
        for a in 0..order {
            for b in 0..order {
                let mut out = vec![0u16; degree];
                for i in 0..degree {
                    out[i] = perms[b][perms[a][i] as usize];
                }
                mul[a * order + b] = index[&out];
            }
        }
        finish_group(name, order, Backing::Table { mul }, gen_ids)
    } else {
        finish_group(
            name,
            order,
            Backing::Perms {
                degree,
                perms,
                index,
            },
            gen_ids,
        )
    }
}
