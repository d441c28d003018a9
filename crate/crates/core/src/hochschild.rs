//! Hochschild cochain complexes `C*(k[G], M)` for explicit bimodules.
//!
//! A bimodule is given by one left and one right action matrix per group
//! element. Cochains of degree `n` are functions `G^n -> M`; the basis of
//! `C^n` is indexed by `(g_1, ..., g_n, i)`, lexicographic in the tuple with
//! the module index `i` fastest.

use std::sync::Arc;

use rayon::prelude::*;

use crate::complexes::{cohomology_dims, CohomologyReport, Direction, NormKind, NormedComplex};
use crate::error::{Error, Result};
use crate::groups::{GAction, Group};
use crate::linalg::ExactMatrix;
use crate::scalars::Field;

/// Default cap on the largest cochain space `|G|^(max_degree+1) * dim M`.
pub const DEFAULT_MEMORY_CAP: u128 = 2_000_000;

/// A finite-dimensional `k[G]`-bimodule. Vectors are columns, so
/// `left[g] * m` is `g . m` and `right[g] * m` is `m . g`.
#[derive(Debug, Clone)]
pub struct Bimodule<F: Field> {
    group: Arc<Group>,
    dim: usize,
    left: Vec<ExactMatrix<F>>,
    right: Vec<ExactMatrix<F>>,
    label: String,
}

impl<F: Field> Bimodule<F> {
    /// Validates the bimodule axioms on every pair of group elements.
    pub fn new(
        group: &Arc<Group>,
        left: Vec<ExactMatrix<F>>,
        right: Vec<ExactMatrix<F>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(group, left, right, label)?;
        m.verify()?;
        Ok(m)
    }

    fn new_unchecked(
        group: &Arc<Group>,
        left: Vec<ExactMatrix<F>>,
        right: Vec<ExactMatrix<F>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if left.len() != group.order() || right.len() != group.order() {
            return Err(Error::Bimodule { label, reason: "one action matrix per group element".into() });
        }
        let dim = left[0].rows();
        if left.iter().chain(&right).any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::Bimodule {
                label,
                reason: "action matrices must be square of the module dimension".into(),
            });
        }
        Ok(Bimodule { group: group.clone(), dim, left, right, label })
    }

    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        let fail = |reason: String| Error::Bimodule { label: self.label.clone(), reason };
        let f = self.left[0].field();
        let id = ExactMatrix::identity(f, self.dim);
        if self.left[g.identity()] != id || self.right[g.identity()] != id {
            return Err(fail("identity acts nontrivially".into()));
        }
        let bad = g.elements().into_par_iter().find_map_any(|a| {
            for b in g.elements() {
                let ab = g.mul(a, b);
                if self.left[a].mul(&self.left[b]).ok()? != self.left[ab] {
                    return Some(format!("L({a})L({b}) != L({a}{b})"));
                }
                if self.right[a].mul(&self.right[b]).ok()? != self.right[g.mul(b, a)] {
                    return Some(format!("R({a})R({b}) != R({b}{a})"));
                }
                if self.left[a].mul(&self.right[b]).ok()? != self.right[b].mul(&self.left[a]).ok()? {
                    return Some(format!("L({a}) and R({b}) do not commute"));
                }
            }
            None
        });
        match bad {
            Some(reason) => Err(fail(reason)),
            None => Ok(()),
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn left(&self, g: usize) -> &ExactMatrix<F> {
        &self.left[g]
    }
    pub fn right(&self, g: usize) -> &ExactMatrix<F> {
        &self.right[g]
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn field(&self) -> &F {
        self.left[0].field()
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The dual `M'` with adjoint actions: `(g . phi)(m) = phi(m . g)` and
    /// `(phi . g)(m) = phi(g . m)`, i.e. left action `R(g)^T` and right
    /// action `L(g)^T`.
    pub fn dualize(&self) -> Self {
        Bimodule {
            group: self.group.clone(),
            dim: self.dim,
            left: self.right.iter().map(ExactMatrix::transpose).collect(),
            right: self.left.iter().map(ExactMatrix::transpose).collect(),
            label: format!("{}'", self.label),
        }
    }

    /// Same space with left action `g . m . g^-1` and trivial right action.
    pub fn conjugation_twist(&self) -> Result<Self> {
        let g = &self.group;
        let left = g.elements().map(|x| self.left[x].mul(&self.right[g.inv(x)])).collect::<Result<Vec<_>>>()?;
        let id = ExactMatrix::identity(self.field(), self.dim);
        Self::new(g, left, vec![id; g.order()], format!("twist({})", self.label))
    }

    /// The submodule spanned by the columns of `inclusion`, expressed in
    /// those coordinates. `projection` must be a left inverse of
    /// `inclusion` and the span must be invariant on both sides.
    pub fn restrict(
        &self,
        inclusion: &ExactMatrix<F>,
        projection: &ExactMatrix<F>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let f = self.field();
        let sub_dim = inclusion.cols();
        if projection.mul(inclusion)? != ExactMatrix::identity(f, sub_dim) {
            return Err(Error::Shape("projection is not a left inverse of the inclusion".into()));
        }
        let restrict_one = |a: &ExactMatrix<F>| -> Result<ExactMatrix<F>> {
            let image = a.mul(inclusion)?;
            let coords = projection.mul(&image)?;
            if inclusion.mul(&coords)? != image {
                return Err(Error::Shape("subspace is not invariant".into()));
            }
            Ok(coords)
        };
        let left = self.left.iter().map(restrict_one).collect::<Result<Vec<_>>>()?;
        let right = self.right.iter().map(restrict_one).collect::<Result<Vec<_>>>()?;
        Self::new(&self.group, left, right, label)
    }

    /// Dimension of the centre `{m : g.m = m.g for all g}`, solved directly
    /// as the kernel of the stacked maps `L(g) - R(g)`.
    pub fn centre_dim(&self) -> Result<usize> {
        let f = self.field();
        let blocks: Vec<ExactMatrix<F>> =
            self.group.elements().map(|g| self.left[g].sub(&self.right[g])).collect::<Result<_>>()?;
        let refs: Vec<Vec<Option<&ExactMatrix<F>>>> = blocks.iter().map(|b| vec![Some(b)]).collect();
        let row_dims = vec![self.dim; blocks.len()];
        let stacked = ExactMatrix::from_blocks(f, &row_dims, &[self.dim], &refs)?;
        Ok(self.dim - stacked.rank())
    }
}

/// `k[G]` with left and right translation.
pub fn group_algebra_bimodule<F: Field>(group: &Arc<Group>, field: &F) -> Bimodule<F> {
    let n = group.order();
    let left = group.elements().map(|g| ExactMatrix::from_column_map(field, n, &group.table()[g])).collect();
    let right = group
        .elements()
        .map(|g| {
            let targets: Vec<usize> = group.elements().map(|h| group.mul(h, g)).collect();
            ExactMatrix::from_column_map(field, n, &targets)
        })
        .collect();
    Bimodule::new_unchecked(group, left, right, format!("k[{}]", group.name())).expect("regular bimodule")
}

/// The one-dimensional module on which every group element acts as 1.
pub fn augmentation_bimodule<F: Field>(group: &Arc<Group>, field: &F) -> Bimodule<F> {
    let one = ExactMatrix::identity(field, 1);
    Bimodule::new_unchecked(group, vec![one.clone(); group.order()], vec![one; group.order()], "k_eps")
        .expect("point module")
}

/// `k(S)`: left action through the permutation action, trivial right action.
pub fn left_action_bimodule<F: Field>(action: &GAction, field: &F) -> Bimodule<F> {
    let g = action.group();
    let n = action.set_size();
    let left = g.elements().map(|x| ExactMatrix::from_column_map(field, n, &action.table()[x])).collect();
    let id = ExactMatrix::identity(field, n);
    Bimodule::new_unchecked(g, left, vec![id; g.order()], "k(S)").expect("permutation module")
}

/// `k(S)'`, the dual of [`left_action_bimodule`]. Under the adjoint
/// convention its left action is trivial and its right action is
/// `(phi . g)(s) = phi(g . s)`.
pub fn function_dual_of_action<F: Field>(action: &GAction, field: &F) -> Bimodule<F> {
    left_action_bimodule(action, field).dualize()
}

pub(crate) fn check_cap(group_order: usize, max_degree: usize, dim: usize, cap: u128) -> Result<()> {
    let requested = (group_order as u128)
        .checked_pow(max_degree as u32 + 1)
        .and_then(|v| v.checked_mul(dim as u128))
        .unwrap_or(u128::MAX);
    if requested > cap {
        return Err(Error::MemoryCap { requested, cap });
    }
    Ok(())
}

/// Index of a tuple `(g_1, ..., g_n)` in lexicographic order.
pub(crate) fn tuple_index(tuple: &[usize], order: usize) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

pub(crate) fn tuple_of(mut index: usize, len: usize, order: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = index % order;
        index /= order;
    }
    t
}

/// The coboundary `C^n -> C^{n+1}`:
///
/// `(d psi)(a_1..a_{n+1}) = a_1 psi(a_2..) + sum_j (-1)^j psi(.., a_j a_{j+1}, ..)
///  + (-1)^{n+1} psi(a_1..a_n) a_{n+1}`.
pub fn coboundary<F: Field>(m: &Bimodule<F>, n: usize) -> ExactMatrix<F> {
    let g = &m.group;
    let f = m.field();
    let order = g.order();
    let d = m.dim;
    let outputs = order.pow(n as u32 + 1);
    let sign = |k: usize| if k.is_multiple_of(2) { f.one() } else { f.neg(&f.one()) };
    let rows: Vec<Vec<(usize, F::Elem)>> = (0..outputs)
        .into_par_iter()
        .flat_map_iter(|t_idx| {
            let t = tuple_of(t_idx, n + 1, order);
            let first_block = tuple_index(&t[1..], order) * d;
            let middle: Vec<(usize, F::Elem)> = (1..=n)
                .map(|j| {
                    let mut merged = Vec::with_capacity(n);
                    merged.extend_from_slice(&t[..j - 1]);
                    merged.push(g.mul(t[j - 1], t[j]));
                    merged.extend_from_slice(&t[j + 1..]);
                    (tuple_index(&merged, order) * d, sign(j))
                })
                .collect();
            let last_block = tuple_index(&t[..n], order) * d;
            let last_sign = sign(n + 1);
            let left = m.left(t[0]);
            let right = m.right(t[n]);
            (0..d).map(move |i| {
                let mut row: Vec<(usize, F::Elem)> = Vec::new();
                row.extend(left.row(i).iter().map(|(k, v)| (first_block + k, v.clone())));
                row.extend(middle.iter().map(|(block, s)| (block + i, s.clone())));
                row.extend(right.row(i).iter().map(|(k, v)| (last_block + k, f.mul(&last_sign, v))));
                row
            })
        })
        .collect();
    ExactMatrix::from_rows(f, order.pow(n as u32) * d, rows)
}

/// `C^0 -> ... -> C^{max_degree+1}`, truncated so that reports cover
/// degrees `0..=max_degree`.
pub fn hochschild_complex<F: Field>(m: &Bimodule<F>, max_degree: usize, memory_cap: u128) -> Result<NormedComplex<F>> {
    check_cap(m.group.order(), max_degree, m.dim, memory_cap)?;
    let order = m.group.order();
    let dims: Vec<usize> = (0..=max_degree + 1).map(|n| order.pow(n as u32) * m.dim).collect();
    let maps: Vec<ExactMatrix<F>> = (0..=max_degree).into_par_iter().map(|n| coboundary(m, n)).collect();
    let kinds = vec![NormKind::Linf; dims.len()];
    Ok(NormedComplex::from_maps_unverified(m.field(), Direction::Cochain, dims, maps, kinds)?.with_truncated(true))
}

pub fn hochschild_cohomology<F: Field>(
    m: &Bimodule<F>,
    max_degree: usize,
    memory_cap: u128,
) -> Result<CohomologyReport> {
    let c = hochschild_complex(m, max_degree, memory_cap)?;
    cohomology_dims(&c, format!("H*(k[{}], {})", m.group.name(), m.label))
}

/// The cochain-level map induced by a bimodule map `phi : M -> N`:
/// `psi |-> phi . psi`, block diagonal over the `|G|^n` tuples.
pub fn coefficient_map<F: Field>(phi: &ExactMatrix<F>, group_order: usize, degree: usize) -> ExactMatrix<F> {
    let copies = group_order.pow(degree as u32);
    let blocks = vec![phi; copies];
    ExactMatrix::block_diag(phi.field(), &blocks)
}
