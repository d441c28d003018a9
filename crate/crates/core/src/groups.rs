//! Finite groups given by full multiplication tables, their subgroups,
//! conjugacy classes, transversals, and actions on finite sets.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite group. `mul[a][b]` is the index of `a * b`.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    name: String,
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl Group {
    /// Validates a multiplication table. The identity is detected, so it
    /// need not be element 0.
    pub fn from_table(name: impl Into<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let name = name.into();
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (a, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            if let Some((b, &c)) = row.iter().enumerate().find(|(_, &c)| c >= n) {
                return Err(Error::InvalidGroup(format!("entry {a}*{b} = {c} out of range")));
            }
        }
        let identity = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)).ok_or_else(|| {
            // Report the failure of the best candidate: a left identity if one exists.
            let e = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x)).unwrap_or(0);
            let x = (0..n).find(|&x| mul[e][x] != x || mul[x][e] != x).unwrap_or(0);
            Error::InvalidGroup(format!(
                "no two-sided identity; candidate {e} fails at ({e}, {x}, {})",
                if mul[e][x] != x { mul[e][x] } else { mul[x][e] }
            ))
        })?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity).ok_or_else(|| {
                Error::InvalidGroup(format!("element {a} has no inverse: ({a}, b, {identity}) has no solution b"))
            })?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Group { name, order: n, mul, identity, inv })
    }

    /// Closes a set of permutations (image lists on `0..degree`) under
    /// composition and tabulates the result. Elements are numbered in
    /// breadth-first discovery order from the identity. The product
    /// `a * b` applies `b` first.
    pub fn from_permutations(name: impl Into<String>, degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidGroup(format!("generator {i} is not a permutation of 0..{degree}")));
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(&elements[i], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let mul = elements.iter().map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect()).collect();
        Self::from_table(name, mul)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), mul)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group").renamed("trivial")
    }

    /// `(a1, b1) * (a2, b2)`, with element `(a, b)` at index `a * |B| + b`.
    pub fn direct_product(a: &Group, b: &Group) -> Self {
        let (na, nb) = (a.order, b.order);
        let mul = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        Self::from_table(format!("{}x{}", a.name, b.name), mul).expect("product of groups")
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn product(&self, elements: &[usize]) -> usize {
        elements.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x, order: self.order })
        }
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| (a..self.order).all(|b| self.commute(a, b)))
    }

    /// Elements commuting with every element.
    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&z| self.elements().all(|g| self.commute(z, g))).collect()
    }
}

/// A subgroup, held as the sorted list of parent element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<Group>,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &Arc<Group>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        for &x in &elements {
            parent.check_element(x)?;
        }
        let contains = |x: usize| elements.binary_search(&x).is_ok();
        if !contains(parent.identity()) {
            return Err(Error::InvalidSubgroup("missing the identity".into()));
        }
        for &a in &elements {
            if !contains(parent.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &elements {
                if !contains(parent.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("{a}*{b} = {} missing", parent.mul(a, b))));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elements })
    }

    pub fn whole(parent: &Arc<Group>) -> Self {
        Subgroup { parent: parent.clone(), elements: parent.elements().collect() }
    }

    pub fn trivial(parent: &Arc<Group>) -> Self {
        Subgroup { parent: parent.clone(), elements: vec![parent.identity()] }
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of a parent element inside the sorted element list.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.elements.iter().all(|&a| self.elements.iter().all(|&b| g.commute(a, b)))
    }

    /// The subgroup as a standalone group; local element `i` is parent
    /// element `elements()[i]`.
    pub fn as_group(&self) -> Group {
        let g = &self.parent;
        let mul = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| self.local_index(g.mul(a, b)).expect("closed")).collect())
            .collect();
        Group::from_table(format!("{}<{}>", g.name(), self.order()), mul).expect("subgroup is a group")
    }
}

/// Partition of the group into conjugacy classes, sorted by their smallest
/// element; each class is sorted.
pub fn conjugacy_classes(g: &Group) -> Vec<Vec<usize>> {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut classes = Vec::new();
    for x in g.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut class: Vec<usize> = g.elements().map(|h| g.conjugate(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            class_of[y] = classes.len();
        }
        classes.push(class);
    }
    classes
}

pub fn centralizer(g: &Arc<Group>, x: usize) -> Result<Subgroup> {
    g.check_element(x)?;
    Ok(Subgroup { parent: g.clone(), elements: g.elements().filter(|&h| g.commute(h, x)).collect() })
}

/// Witness that a group is not commutative-transitive: `x` is a
/// non-identity element whose centralizer contains the non-commuting pair
/// `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtWitness {
    pub x: usize,
    pub a: usize,
    pub b: usize,
}

/// Whether every non-identity element has an abelian centralizer. Returns
/// the first failing `x` (by index) and the lexicographically first
/// non-commuting pair in its centralizer.
pub fn is_commutative_transitive(g: &Arc<Group>) -> (bool, Option<CtWitness>) {
    for x in g.elements().filter(|&x| x != g.identity()) {
        let c = centralizer(g, x).expect("valid element");
        for (i, &a) in c.elements().iter().enumerate() {
            if let Some(&b) = c.elements()[i + 1..].iter().find(|&&b| !g.commute(a, b)) {
                return (false, Some(CtWitness { x, a, b }));
            }
        }
    }
    (true, None)
}

/// A left action of a group on `0..set_size`; `act[g][s]` is `g . s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAction {
    group: Arc<Group>,
    set_size: usize,
    act: Vec<Vec<usize>>,
}

impl GAction {
    pub fn new(group: &Arc<Group>, set_size: usize, act: Vec<Vec<usize>>) -> Result<Self> {
        if set_size == 0 {
            return Err(Error::InvalidAction("empty set".into()));
        }
        if act.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} rows for a group of order {}", act.len(), group.order())));
        }
        for (g, row) in act.iter().enumerate() {
            if row.len() != set_size || row.iter().any(|&s| s >= set_size) {
                return Err(Error::InvalidAction(format!("row {g} is malformed")));
            }
        }
        if let Some(s) = (0..set_size).find(|&s| act[group.identity()][s] != s) {
            return Err(Error::InvalidAction(format!("identity moves point {s}")));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if let Some(s) = (0..set_size).find(|&s| act[g][act[h][s]] != act[gh][s]) {
                    return Err(Error::InvalidAction(format!("g.(h.s) != (gh).s for g = {g}, h = {h}, s = {s}")));
                }
            }
        }
        Ok(GAction { group: group.clone(), set_size, act })
    }

    /// Left translation of the group on itself.
    pub fn regular(group: &Arc<Group>) -> Self {
        GAction { group: group.clone(), set_size: group.order(), act: group.table().to_vec() }
    }

    /// Every element fixes each of `n` points.
    pub fn trivial(group: &Arc<Group>, n: usize) -> Result<Self> {
        let row: Vec<usize> = (0..n).collect();
        Self::new(group, n, vec![row; group.order()])
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }
    pub fn set_size(&self) -> usize {
        self.set_size
    }
    pub fn table(&self) -> &[Vec<usize>] {
        &self.act
    }

    #[inline]
    pub fn apply(&self, g: usize, s: usize) -> usize {
        self.act[g][s]
    }
}

/// Conjugation action `g . x = g x g^-1` on the non-identity elements.
/// Point `i` is the `i`-th non-identity element in index order.
pub fn conjugation_action(g: &Arc<Group>) -> Result<GAction> {
    if g.order() < 2 {
        return Err(Error::InvalidAction("conjugation on G minus the identity needs a nontrivial group".into()));
    }
    let points = non_identity_elements(g);
    let point_of = |x: usize| points.binary_search(&x).expect("non-identity");
    let act = g.elements().map(|h| points.iter().map(|&x| point_of(g.conjugate(h, x))).collect()).collect();
    Ok(GAction { group: g.clone(), set_size: points.len(), act })
}

/// Non-identity elements in index order; this is the point labelling used
/// by [`conjugation_action`].
pub fn non_identity_elements(g: &Group) -> Vec<usize> {
    g.elements().filter(|&x| x != g.identity()).collect()
}

#[derive(Debug, Clone)]
pub struct OrbitDecomposition {
    pub action: GAction,
    pub representatives: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    pub stabilizers: Vec<Subgroup>,
    /// Orbit index of every point.
    pub orbit_of: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }
}

/// Orbits in order of their smallest point, which is the representative.
pub fn orbit_decompose(action: &GAction) -> Result<OrbitDecomposition> {
    let g = action.group();
    let mut orbit_of = vec![usize::MAX; action.set_size()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut representatives = Vec::new();
    let mut stabilizers = Vec::new();
    for s in 0..action.set_size() {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = g.elements().map(|h| action.apply(h, s)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &t in &orbit {
            orbit_of[t] = orbits.len();
        }
        let stab = Subgroup::new(g, g.elements().filter(|&h| action.apply(h, s) == s).collect())?;
        if orbit.len() * stab.order() != g.order() {
            return Err(Error::InvalidAction(format!("orbit-stabilizer count fails at point {s}")));
        }
        representatives.push(s);
        orbits.push(orbit);
        stabilizers.push(stab);
    }
    Ok(OrbitDecomposition { action: action.clone(), representatives, orbits, stabilizers, orbit_of })
}

/// Left coset representatives `tau` and the factor map `eta` with
/// `g = tau(gH) * eta(g)`.
#[derive(Debug, Clone)]
pub struct Transversal {
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
    tau: Vec<usize>,
    eta: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Transversal {
    /// Coset 0 is `H` itself with representative the identity; the remaining
    /// cosets are ordered by their smallest element, which represents them.
    pub fn smallest(h: &Subgroup) -> Self {
        Self::build(h, |coset| coset[0])
    }

    /// Like [`Transversal::smallest`] but with uniformly random
    /// representatives for the non-identity cosets.
    pub fn random(h: &Subgroup, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::build(h, |coset| *coset.choose(&mut rng).expect("nonempty coset"))
    }

    fn build(h: &Subgroup, mut choose: impl FnMut(&[usize]) -> usize) -> Self {
        let g = h.parent().clone();
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut tau = Vec::new();
        let mut starts = vec![g.identity()];
        starts.extend(g.elements().filter(|&x| x != g.identity()));
        for x in starts {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = h.elements().iter().map(|&k| g.mul(x, k)).collect();
            coset.sort_unstable();
            for &y in &coset {
                coset_of[y] = cosets.len();
            }
            tau.push(if cosets.is_empty() { g.identity() } else { choose(&coset) });
            cosets.push(coset);
        }
        let eta = g.elements().map(|x| g.mul(g.inv(tau[coset_of[x]]), x)).collect();
        Transversal { subgroup: h.clone(), cosets, tau, eta, coset_of }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }
    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }
    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }
    pub fn tau(&self, coset: usize) -> usize {
        self.tau[coset]
    }
    /// `eta(g)` as a parent element index (it lies in the subgroup).
    pub fn eta(&self, g: usize) -> usize {
        self.eta[g]
    }
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Coset of `g * J` for coset index `j`.
    pub fn act_on_coset(&self, g: usize, j: usize) -> usize {
        let group = self.subgroup.parent();
        self.coset_of[group.mul(g, self.tau[j])]
    }

    /// Exhaustive check of the transversal laws: `tau(J)` lies in `J`,
    /// `g = tau(gH) eta(g)`, and `eta(gh) = eta(g) h`.
    pub fn verify(&self) -> Result<()> {
        let g = self.subgroup.parent();
        for (j, &t) in self.tau.iter().enumerate() {
            if self.coset_of[t] != j {
                return Err(Error::InvalidSubgroup(format!("tau({j}) outside its coset")));
            }
        }
        for x in g.elements() {
            if !self.subgroup.contains(self.eta[x]) || g.mul(self.tau[self.coset_of[x]], self.eta[x]) != x {
                return Err(Error::InvalidSubgroup(format!("factorization fails at {x}")));
            }
            for &h in self.subgroup.elements() {
                if self.eta[g.mul(x, h)] != g.mul(self.eta[x], h) {
                    return Err(Error::InvalidSubgroup(format!("eta(gh) != eta(g)h at g = {x}, h = {h}")));
                }
            }
        }
        Ok(())
    }
}
