//! Disintegration of `H*(k[G], k(S)')` over stabilizers.
//!
//! The pipeline builds the one-sided bar resolution of `k` over each
//! stabilizer `H_x`, induces it up to `G` through a transversal, assembles
//! the resolution `P_*` of `k(S)`, applies `Hom_{k[G]}(-, k)` and compares
//! the result with `sum_x C*(k[H_x], k_eps)` through an explicit chain
//! isomorphism. The fast path computes only the latter sum; the oracle
//! computes `C*(k[G], k(S)')` directly.
//!
//! Sums over orbit representatives are finite block sums here, so cohomology
//! commutes with them. For infinite index sets that fails unless the
//! splittings are uniformly bounded; see [`crate::complexes::sniper_demo`].

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::{
    certify_split, cohomology_dims, sum_complexes, sum_homotopies, verify_chain_isomorphism, verify_chain_map,
    ChainMap, CohomologyReport, Direction, NormKind, NormedComplex, SplitCertificate,
};
use crate::error::{Error, Result};
use crate::groups::{orbit_decompose, GAction, Group, OrbitDecomposition, Subgroup, Transversal};
use crate::hochschild::{
    augmentation_bimodule, check_cap, function_dual_of_action, hochschild_cohomology, hochschild_complex, tuple_index,
    tuple_of,
};
use crate::linalg::ExactMatrix;
use crate::scalars::{Field, FieldTag};

fn is_rationals<F: Field>(f: &F) -> bool {
    f.tag() == FieldTag::Rationals
}

/// The augmented bar resolution `0 <- k <- k[H] <- k[H]^2 <- ...`.
///
/// Space `0` is `k`; space `m >= 1` is `k[H]^{(x) m}` with basis the words
/// `(h_0, ..., h_{m-1})`, `h_0` most significant. `H` acts on the left
/// through `h_0`.
#[derive(Debug, Clone)]
pub struct BarResolution<F: Field> {
    group: Arc<Group>,
    complex: NormedComplex<F>,
    certificate: SplitCertificate<F>,
}

impl<F: Field> BarResolution<F> {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }
    pub fn complex(&self) -> &NormedComplex<F> {
        &self.complex
    }
    pub fn certificate(&self) -> &SplitCertificate<F> {
        &self.certificate
    }
    /// Highest bar degree `n`; the top space is `k[H]^{(x) (n+1)}`.
    pub fn max_degree(&self) -> usize {
        self.complex.top_degree() - 1
    }

    /// `||d_n||_1` for every bar degree `n`, with `d_n` leaving words of
    /// length `n + 2`. Defined over ℚ only.
    pub fn differential_norms(&self) -> Result<Vec<BigRational>> {
        self.complex.maps()[1..].iter().map(ExactMatrix::l1_norm).collect()
    }

    /// Image of the basis vector `word` of space `m` under `h`.
    pub fn act(&self, h: usize, m: usize, word: usize) -> usize {
        if m == 0 {
            return 0;
        }
        let order = self.group.order();
        let stride = order.pow(m as u32 - 1);
        let (h0, rest) = (word / stride, word % stride);
        self.group.mul(h, h0) * stride + rest
    }
}

/// Builds the bar resolution through bar degree `max_degree` together with
/// the insert-identity homotopy, certified exactly (with norms over ℚ).
pub fn bar_resolution<F: Field>(
    h: &Arc<Group>,
    field: &F,
    max_degree: usize,
    memory_cap: u128,
) -> Result<BarResolution<F>> {
    check_cap(h.order(), max_degree, 1, memory_cap)?;
    let order = h.order();
    let top = max_degree + 1;
    let dims: Vec<usize> = (0..=top).map(|m| order.pow(m as u32)).collect();
    let one = field.one();
    let minus = field.neg(&one);
    let sign = |k: usize| if k.is_multiple_of(2) { one.clone() } else { minus.clone() };

    let mut maps = Vec::with_capacity(top);
    maps.push(ExactMatrix::from_rows(field, order, vec![(0..order).map(|c| (c, one.clone())).collect()]));
    for m in 1..top {
        // d_{m-1} : words of length m+1 -> words of length m.
        let n = m - 1;
        let columns: Vec<Vec<(usize, F::Elem)>> = (0..dims[m + 1])
            .into_par_iter()
            .map(|w| {
                let word = tuple_of(w, m + 1, order);
                let mut col: Vec<(usize, F::Elem)> = Vec::with_capacity(n + 2);
                let mut merged = Vec::with_capacity(m);
                for j in 0..=n {
                    merged.clear();
                    merged.extend_from_slice(&word[..j]);
                    merged.push(h.mul(word[j], word[j + 1]));
                    merged.extend_from_slice(&word[j + 2..]);
                    col.push((tuple_index(&merged, order), sign(j)));
                }
                col.push((tuple_index(&word[..=n], order), sign(n + 1)));
                col
            })
            .collect();
        maps.push(ExactMatrix::from_rows(field, dims[m], columns).transpose());
    }
    let complex = NormedComplex::new(field, Direction::Chain, dims.clone(), maps, vec![NormKind::L1; top + 1])?;

    let id = h.identity();
    let homotopies: Vec<ExactMatrix<F>> = (0..top)
        .map(|m| {
            let targets: Vec<usize> = (0..dims[m]).map(|w| id * dims[m] + w).collect();
            ExactMatrix::from_column_map(field, dims[m + 1], &targets)
        })
        .collect();
    let certificate = certify_split(&complex, homotopies, is_rationals(field))?;
    Ok(BarResolution { group: h.clone(), complex, certificate })
}

/// Minimal union-find for spans of differences of basis vectors.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// `k[G] (x)_H E` for a bar resolution `E` over `H`, in the coordinate
/// model `k[G/H] (x) E` with basis `(coset J, word w)`.
#[derive(Debug, Clone)]
pub struct InducedComplex<F: Field> {
    transversal: Transversal,
    complex: NormedComplex<F>,
    certificate: SplitCertificate<F>,
    /// `action[m][g][b]`: image of basis vector `b` of space `m` under `g`.
    action: Vec<Vec<Vec<usize>>>,
    bar_dims: Vec<usize>,
}

impl<F: Field> InducedComplex<F> {
    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }
    pub fn complex(&self) -> &NormedComplex<F> {
        &self.complex
    }
    pub fn certificate(&self) -> &SplitCertificate<F> {
        &self.certificate
    }
    pub fn action(&self, m: usize) -> &[Vec<usize>] {
        &self.action[m]
    }
    /// Index of the basis vector `(J, w)` in space `m`.
    pub fn index(&self, m: usize, coset: usize, word: usize) -> usize {
        coset * self.bar_dims[m] + word
    }
}

/// The `G`-action on `(J, h_0, ...)`: `g.(J, h_0, rest) = (gJ, eta(g tau_J) h_0, rest)`.
fn coordinate_action<F: Field>(t: &Transversal, bar: &BarResolution<F>, m: usize) -> Vec<Vec<usize>> {
    let h = t.subgroup();
    let g = h.parent();
    let bar_dim = bar.complex.dims()[m];
    g.elements()
        .map(|x| {
            (0..t.num_cosets() * bar_dim)
                .map(|b| {
                    let (j, w) = (b / bar_dim, b % bar_dim);
                    let target_coset = t.act_on_coset(x, j);
                    let eta = h.local_index(t.eta(g.mul(x, t.tau(j)))).expect("eta lands in the subgroup");
                    target_coset * bar_dim + bar.act(eta, m, w)
                })
                .collect()
        })
        .collect()
}

/// Induces `bar` (built over `h.as_group()`) along `t` and verifies the
/// transfer maps `T : k[G] (x) E -> k[G/H] (x) E` and `R` backwards.
pub fn induce<F: Field>(t: &Transversal, bar: &BarResolution<F>) -> Result<InducedComplex<F>> {
    t.verify()?;
    let h = t.subgroup();
    let g = h.parent();
    if bar.group.order() != h.order() {
        return Err(Error::Shape("bar resolution built over a different group".into()));
    }
    let f = bar.complex.field().clone();
    let cosets = t.num_cosets();
    let bar_dims = bar.complex.dims().to_vec();
    let dims: Vec<usize> = bar_dims.iter().map(|d| cosets * d).collect();
    let maps: Vec<ExactMatrix<F>> =
        bar.complex.maps().iter().map(|d| ExactMatrix::block_diag(&f, &vec![d; cosets])).collect();
    let kinds = vec![NormKind::L1; dims.len()];
    let complex = NormedComplex::new(&f, Direction::Chain, dims.clone(), maps, kinds)?;
    let homotopies = bar.certificate.homotopies.iter().map(|s| ExactMatrix::block_diag(&f, &vec![s; cosets])).collect();
    let certificate = certify_split(&complex, homotopies, is_rationals(&f))?;
    let action: Vec<Vec<Vec<usize>>> = (0..dims.len()).map(|m| coordinate_action(t, bar, m)).collect();

    let induced = InducedComplex { transversal: t.clone(), complex, certificate, action, bar_dims };
    verify_transfer(g, &induced, bar)?;
    Ok(induced)
}

/// Checks that `T` and `R` are chain maps between `k[G] (x) E` and the
/// coordinate model, `T R = id`, `R T = id` modulo the balancing relations
/// `e_{gh} (x) v - e_g (x) h.v`, `T` kills those relations, `T` is
/// `G`-equivariant, and both have ℓ¹ norm 1 over ℚ.
fn verify_transfer<F: Field>(g: &Arc<Group>, induced: &InducedComplex<F>, bar: &BarResolution<F>) -> Result<()> {
    let t = &induced.transversal;
    let h = t.subgroup();
    let f = bar.complex.field().clone();
    let order = g.order();
    let bar_dims = &induced.bar_dims;
    let flat_dims: Vec<usize> = bar_dims.iter().map(|d| order * d).collect();
    let flat_maps: Vec<ExactMatrix<F>> =
        bar.complex.maps().iter().map(|d| ExactMatrix::block_diag(&f, &vec![d; order])).collect();
    let flat = Arc::new(NormedComplex::from_maps_unverified(
        &f,
        Direction::Chain,
        flat_dims.clone(),
        flat_maps,
        vec![NormKind::L1; flat_dims.len()],
    )?);
    let model = Arc::new(induced.complex.clone());

    let mut t_maps = Vec::new();
    let mut r_maps = Vec::new();
    for (m, &bd) in bar_dims.iter().enumerate() {
        // T(e_x (x) w) = e_{xH} (x) eta(x).w
        let t_targets: Vec<usize> = (0..order * bd)
            .map(|b| {
                let (x, w) = (b / bd, b % bd);
                let eta = h.local_index(t.eta(x)).expect("eta in subgroup");
                induced.index(m, t.coset_of(x), bar.act(eta, m, w))
            })
            .collect();
        // R(e_J (x) w) = e_{tau J} (x) w
        let r_targets: Vec<usize> = (0..t.num_cosets() * bd)
            .map(|b| {
                let (j, w) = (b / bd, b % bd);
                t.tau(j) * bd + w
            })
            .collect();

        // T kills every relation, and R T - id lies in their span: the span
        // of differences of basis vectors is the set of vectors summing to
        // zero on each connected component.
        let mut comps = Components::new(order * bd);
        for x in g.elements() {
            for &k in h.elements() {
                let kl = h.local_index(k).expect("subgroup element");
                for w in 0..bd {
                    let a = g.mul(x, k) * bd + w;
                    let b = x * bd + bar.act(kl, m, w);
                    if t_targets[a] != t_targets[b] {
                        return Err(Error::ChainMap {
                            degree: m,
                            basis: a,
                            reason: "T does not vanish on a balancing relation".into(),
                        });
                    }
                    comps.union(a, b);
                }
            }
        }
        for (b, &tb) in t_targets.iter().enumerate() {
            if comps.find(r_targets[tb]) != comps.find(b) {
                return Err(Error::ChainMap {
                    degree: m,
                    basis: b,
                    reason: "R T differs from the identity modulo the relations".into(),
                });
            }
        }
        // Equivariance of T for left multiplication on k[G].
        for y in g.elements() {
            for (b, &tb) in t_targets.iter().enumerate() {
                let (x, w) = (b / bd, b % bd);
                if t_targets[g.mul(y, x) * bd + w] != induced.action[m][y][tb] {
                    return Err(Error::Equivariance { element: y });
                }
            }
        }
        t_maps.push(ExactMatrix::from_column_map(&f, induced.complex.dims()[m], &t_targets));
        r_maps.push(ExactMatrix::from_column_map(&f, order * bd, &r_targets));
    }
    let tm = ChainMap::new(flat.clone(), model.clone(), t_maps)?;
    let rm = ChainMap::new(model.clone(), flat, r_maps)?;
    verify_chain_map(&tm)?;
    verify_chain_map(&rm)?;
    for (m, (a, b)) in tm.components.iter().zip(&rm.components).enumerate() {
        let tr = a.mul(b)?;
        if let Some((_, basis, _)) = tr.sub(&ExactMatrix::identity(&f, model.dims()[m]))?.first_nonzero_column() {
            return Err(Error::ChainMap { degree: m, basis, reason: "T R is not the identity".into() });
        }
        if is_rationals(&f) {
            for (name, map) in [("T", a), ("R", b)] {
                let norm = map.l1_norm()?;
                if norm != BigRational::from_integer(1.into()) {
                    return Err(Error::NormBound { degree: m, norm: format!("{name}: {norm}") });
                }
            }
        }
    }
    Ok(())
}

/// How coset representatives are chosen for each stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransversalChoice {
    Smallest,
    /// Random representatives; orbit `i` uses seed `seed + i`.
    Random(u64),
}

impl TransversalChoice {
    fn build(self, h: &Subgroup, orbit: usize) -> Transversal {
        match self {
            TransversalChoice::Smallest => Transversal::smallest(h),
            TransversalChoice::Random(seed) => Transversal::random(h, seed.wrapping_add(orbit as u64)),
        }
    }
}

/// `P_* -> k(S) -> 0` with `P_n = sum_x k[G] (x)_{H_x} k[H_x]^{(x)(n+1)}`.
#[derive(Debug, Clone)]
pub struct AssembledResolution<F: Field> {
    decomposition: OrbitDecomposition,
    parts: Vec<InducedComplex<F>>,
    complex: NormedComplex<F>,
    certificate: SplitCertificate<F>,
    /// `offsets[m][x]`: start of orbit `x`'s block in space `m`.
    offsets: Vec<Vec<usize>>,
    /// Point of `S` for each basis vector of the bottom space.
    bottom_points: Vec<usize>,
}

impl<F: Field> AssembledResolution<F> {
    pub fn decomposition(&self) -> &OrbitDecomposition {
        &self.decomposition
    }
    pub fn parts(&self) -> &[InducedComplex<F>] {
        &self.parts
    }
    pub fn complex(&self) -> &NormedComplex<F> {
        &self.complex
    }
    pub fn certificate(&self) -> &SplitCertificate<F> {
        &self.certificate
    }
    pub fn bottom_points(&self) -> &[usize] {
        &self.bottom_points
    }

    /// Image of basis vector `b` of space `m` under `g`.
    pub fn act(&self, g: usize, m: usize, b: usize) -> usize {
        let x = self.offsets[m].partition_point(|&o| o <= b) - 1;
        let off = self.offsets[m][x];
        off + self.parts[x].action[m][g][b - off]
    }
}

/// Assembles `P_*` for `action` through bar degree `max_degree` and checks
/// the 1-splitting, the identification of the bottom with `k(S)` via
/// `gH_x <-> g.x`, and freeness through `(J, h_0, ...) |-> (tau_J h_0, ...)`.
pub fn assemble_resolution<F: Field>(
    action: &GAction,
    field: &F,
    max_degree: usize,
    memory_cap: u128,
    choice: TransversalChoice,
) -> Result<AssembledResolution<F>> {
    let g = action.group().clone();
    let decomposition = orbit_decompose(action)?;
    let parts: Vec<InducedComplex<F>> = decomposition
        .stabilizers
        .par_iter()
        .enumerate()
        .map(|(i, stab)| {
            check_cap(stab.order(), max_degree, g.order(), memory_cap)?;
            let bar = bar_resolution(&Arc::new(stab.as_group()), field, max_degree, memory_cap)?;
            induce(&choice.build(stab, i), &bar)
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&NormedComplex<F>> = parts.iter().map(|p| &p.complex).collect();
    let (complex, _) = sum_complexes(&refs, NormKind::L1)?;
    let hom_refs: Vec<&[ExactMatrix<F>]> = parts.iter().map(|p| p.certificate.homotopies.as_slice()).collect();
    let homotopies = sum_homotopies(field, &hom_refs)?;
    let certificate = certify_split(&complex, homotopies, is_rationals(field))?;
    let offsets: Vec<Vec<usize>> = (0..complex.dims().len())
        .map(|m| {
            let mut acc = 0;
            parts
                .iter()
                .map(|p| {
                    let o = acc;
                    acc += p.complex.dims()[m];
                    o
                })
                .collect()
        })
        .collect();

    let mut bottom_points = Vec::with_capacity(action.set_size());
    for (x, part) in parts.iter().enumerate() {
        let rep = decomposition.representatives[x];
        for j in 0..part.transversal.num_cosets() {
            bottom_points.push(action.apply(part.transversal.tau(j), rep));
        }
    }
    let mut seen = vec![false; action.set_size()];
    for &p in &bottom_points {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidAction(format!("point {p} reached by two cosets")));
        }
    }
    if bottom_points.len() != action.set_size() {
        return Err(Error::InvalidAction("cosets do not cover the set".into()));
    }
    let res = AssembledResolution { decomposition, parts, complex, certificate, offsets, bottom_points };
    for y in g.elements() {
        for b in 0..res.bottom_points.len() {
            if res.bottom_points[res.act(y, 0, b)] != action.apply(y, res.bottom_points[b]) {
                return Err(Error::Equivariance { element: y });
            }
        }
    }
    verify_freeness(&g, &res)?;
    Ok(res)
}

fn verify_freeness<F: Field>(g: &Arc<Group>, res: &AssembledResolution<F>) -> Result<()> {
    for part in &res.parts {
        let t = &part.transversal;
        let h = t.subgroup();
        let k = h.order();
        for m in 1..part.bar_dims.len() {
            let stride = part.bar_dims[m] / k;
            let witness = |b: usize| -> usize {
                let (j, w) = (b / part.bar_dims[m], b % part.bar_dims[m]);
                let (h0, rest) = (w / stride, w % stride);
                g.mul(t.tau(j), h.elements()[h0]) * stride + rest
            };
            let size = part.complex.dims()[m];
            let mut hit = vec![false; g.order() * stride];
            for b in 0..size {
                if std::mem::replace(&mut hit[witness(b)], true) {
                    return Err(Error::InvalidAction(format!("freeness witness not injective in degree {m}")));
                }
            }
            for y in g.elements() {
                for b in 0..size {
                    let (x, rest) = (witness(b) / stride, witness(b) % stride);
                    if witness(part.action[m][y][b]) != g.mul(y, x) * stride + rest {
                        return Err(Error::Equivariance { element: y });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `Hom_{k[G]}(P_*, k_eps)` in the basis of orbit indicators, together with
/// its verified isometric chain isomorphism onto `sum_x C*(k[H_x], k_eps)`.
#[derive(Debug, Clone)]
pub struct DualizedResolution<F: Field> {
    pub complex: NormedComplex<F>,
    pub target: NormedComplex<F>,
    /// Number of orbits per degree, cross-checked against the fixed-point
    /// dimension `dim ker(rho(g)^T - 1)`.
    pub orbit_counts: Vec<usize>,
    /// `None` over prime fields, where norms are undefined.
    pub isometric: Option<bool>,
}

/// Orbits of a permutation action given by all group elements; ids are
/// assigned in order of the smallest basis vector.
fn orbit_ids(perms: &[Vec<usize>], size: usize) -> (Vec<usize>, Vec<usize>) {
    let mut id = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for b in 0..size {
        if id[b] != usize::MAX {
            continue;
        }
        for p in perms {
            id[p[b]] = reps.len();
        }
        reps.push(b);
    }
    (id, reps)
}

/// Fixed-point dimension of the permutation representation, solved as the
/// nullity of the stacked `rho(g)^T - 1`.
fn invariant_dim<F: Field>(field: &F, perms: &[Vec<usize>], size: usize) -> usize {
    let one = field.one();
    let minus = field.neg(&one);
    let rows: Vec<Vec<(usize, F::Elem)>> = perms
        .iter()
        .flat_map(|p| {
            let (one, minus) = (one.clone(), minus.clone());
            // Row b of rho(g)^T - 1 is e_{p(b)} - e_b.
            (0..size).filter(move |&b| p[b] != b).map(move |b| {
                let mut r = vec![(p[b], one.clone()), (b, minus.clone())];
                r.sort_by_key(|e| e.0);
                r
            })
        })
        .collect();
    let m = ExactMatrix::from_rows(field, size, rows);
    size - m.rank()
}

/// Dualizes `P_*` (dropping the augmentation) and verifies the chain
/// isomorphism with `sum_x C*(k[H_x], k_eps)`.
pub fn dualize_resolution<F: Field>(res: &AssembledResolution<F>, memory_cap: u128) -> Result<DualizedResolution<F>> {
    let g = res.decomposition.action.group().clone();
    let field = res.complex.field().clone();
    let spaces = res.complex.dims().len();
    // Hom degree n is space m = n + 1.
    let mut ids = Vec::new();
    let mut reps = Vec::new();
    let mut orbit_counts = Vec::new();
    for m in 1..spaces {
        let size = res.complex.dims()[m];
        let perms: Vec<Vec<usize>> = g.elements().map(|y| (0..size).map(|b| res.act(y, m, b)).collect()).collect();
        let (id, rep) = orbit_ids(&perms, size);
        let fixed = invariant_dim(&field, &perms, size);
        if fixed != rep.len() {
            return Err(Error::Shape(format!(
                "degree {}: {} orbits but {fixed}-dimensional invariants",
                m - 1,
                rep.len()
            )));
        }
        orbit_counts.push(rep.len());
        ids.push(id);
        reps.push(rep);
    }
    let hom_dims = orbit_counts.clone();
    let target_degree =
        hom_dims.len().checked_sub(2).ok_or_else(|| Error::Shape("dualizing needs bar degree at least 1".into()))?;
    let mut maps = Vec::new();
    for n in 0..hom_dims.len() - 1 {
        // D[O', O] = sum over b in O of the coefficient of b in d(rep O').
        let d_cols = res.complex.map(n + 1).transpose();
        let rows: Vec<Vec<(usize, F::Elem)>> = reps[n + 1]
            .iter()
            .map(|&b| {
                let mut acc: std::collections::BTreeMap<usize, F::Elem> = Default::default();
                for (c, v) in d_cols.row(b) {
                    let o = ids[n][*c];
                    let e = acc.entry(o).or_insert_with(|| field.zero());
                    *e = field.add(e, v);
                }
                acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
            })
            .collect();
        maps.push(ExactMatrix::from_rows(&field, hom_dims[n], rows));
    }
    let complex =
        NormedComplex::new(&field, Direction::Cochain, hom_dims.clone(), maps, vec![NormKind::Linf; hom_dims.len()])?
            .with_truncated(true);

    let stab_groups: Vec<Arc<Group>> = res.decomposition.stabilizers.iter().map(|s| Arc::new(s.as_group())).collect();
    let targets: Vec<NormedComplex<F>> = stab_groups
        .iter()
        .map(|h| hochschild_complex(&augmentation_bimodule(h, &field), target_degree, memory_cap))
        .collect::<Result<_>>()?;
    let target_refs: Vec<&NormedComplex<F>> = targets.iter().collect();
    let (target, _) = sum_complexes(&target_refs, NormKind::Linf)?;

    // The orbit of (x; J = H_x, h_0 = id, h_1..h_n) corresponds to the
    // cochain coordinate (h_1..h_n) of the x-th summand.
    let mut components = Vec::new();
    for n in 0..hom_dims.len() {
        let m = n + 1;
        let mut column_target = vec![usize::MAX; hom_dims[n]];
        let mut target_offset = 0;
        for (x, h) in stab_groups.iter().enumerate() {
            let k = h.order();
            let block = k.pow(n as u32);
            let id_word = h.identity() * block;
            for tup in 0..block {
                let b = res.offsets[m][x] + res.parts[x].index(m, 0, id_word + tup);
                let o = ids[n][b];
                if column_target[o] != usize::MAX {
                    return Err(Error::ChainMap {
                        degree: n,
                        basis: o,
                        reason: "two cochain coordinates share an orbit".into(),
                    });
                }
                column_target[o] = target_offset + tup;
            }
            target_offset += block;
        }
        if let Some(o) = column_target.iter().position(|&c| c == usize::MAX) {
            return Err(Error::ChainMap { degree: n, basis: o, reason: "orbit without a cochain coordinate".into() });
        }
        components.push(ExactMatrix::from_column_map(&field, target.dims()[n], &column_target));
    }
    let source = Arc::new(complex.clone());
    let target_arc = Arc::new(target.clone());
    let inverse: Vec<ExactMatrix<F>> = components.iter().map(ExactMatrix::transpose).collect();
    let forward = ChainMap::new(source.clone(), target_arc.clone(), components)?;
    let backward = ChainMap::new(target_arc, source, inverse)?;
    let check = verify_chain_isomorphism(&forward, &backward, is_rationals(&field))?;
    Ok(DualizedResolution { complex, target, orbit_counts, isometric: check.isometric })
}

/// Fast path: cohomology of `sum_x C*(k[H_x], k_eps)`.
pub fn disintegrate<F: Field>(
    action: &GAction,
    field: &F,
    max_degree: usize,
    memory_cap: u128,
) -> Result<CohomologyReport> {
    let decomposition = orbit_decompose(action)?;
    let parts: Vec<NormedComplex<F>> = decomposition
        .stabilizers
        .iter()
        .map(|s| hochschild_complex(&augmentation_bimodule(&Arc::new(s.as_group()), field), max_degree, memory_cap))
        .collect::<Result<_>>()?;
    let refs: Vec<&NormedComplex<F>> = parts.iter().collect();
    let (sum, _) = sum_complexes(&refs, NormKind::Linf)?;
    cohomology_dims(&sum, "fast path")
}

/// Oracle: `H*(k[G], k(S)')` straight from the Hochschild complex.
pub fn brute_force_oracle<F: Field>(
    action: &GAction,
    field: &F,
    max_degree: usize,
    memory_cap: u128,
) -> Result<CohomologyReport> {
    let m = function_dual_of_action(action, field);
    let mut report = hochschild_cohomology(&m, max_degree, memory_cap)?;
    report.label = "oracle".into();
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Everything the `disintegrate` command reports.
#[derive(Debug, Clone, Serialize)]
pub struct DisintegrationReport {
    pub group: String,
    pub field: FieldTag,
    pub max_degree: usize,
    pub orbit_count: usize,
    pub stabilizer_orders: Vec<usize>,
    pub stabilizers_abelian: Vec<bool>,
    pub oracle: Vec<usize>,
    pub fast_path: Vec<usize>,
    /// Dimensions read off the dualized resolution `Hom(P_*, k)`.
    pub resolution: Vec<usize>,
    pub equal: bool,
    pub split_max_norm: String,
    pub isometric: Option<bool>,
    pub timings: Vec<StageTiming>,
}

fn timed<T>(timings: &mut Vec<StageTiming>, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    timings.push(StageTiming { stage: stage.into(), seconds: Duration::as_secs_f64(&start.elapsed()) });
    Ok(out)
}

/// Runs oracle, fast path and the full resolution pipeline and compares
/// their dimension vectors.
pub fn disintegration_report<F: Field>(
    action: &GAction,
    field: &F,
    max_degree: usize,
    memory_cap: u128,
    choice: TransversalChoice,
) -> Result<DisintegrationReport> {
    let mut timings = Vec::new();
    let oracle = timed(&mut timings, "oracle", || brute_force_oracle(action, field, max_degree, memory_cap))?;
    let fast = timed(&mut timings, "fast path", || disintegrate(action, field, max_degree, memory_cap))?;
    let res =
        timed(&mut timings, "assemble", || assemble_resolution(action, field, max_degree + 1, memory_cap, choice))?;
    let dual = timed(&mut timings, "dualize", || dualize_resolution(&res, memory_cap))?;
    let resolution = timed(&mut timings, "resolution cohomology", || cohomology_dims(&dual.complex, "resolution"))?;
    let (oracle, fast_path, resolution) = (oracle.homology_dims(), fast.homology_dims(), resolution.homology_dims());
    let stabs = &res.decomposition.stabilizers;
    Ok(DisintegrationReport {
        group: action.group().name().to_string(),
        field: field.tag(),
        max_degree,
        orbit_count: res.decomposition.num_orbits(),
        stabilizer_orders: stabs.iter().map(Subgroup::order).collect(),
        stabilizers_abelian: stabs.iter().map(Subgroup::is_abelian).collect(),
        equal: oracle == fast_path && fast_path == resolution,
        oracle,
        fast_path,
        resolution,
        split_max_norm: res.certificate.max_norm_string(),
        isometric: dual.isometric,
        timings,
    })
}
