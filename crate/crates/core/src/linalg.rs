//! Sparse exact matrices and elimination.
//!
//! Matrices are stored row-major with each row a column-sorted list of
//! nonzero entries. Every coboundary in this crate has a handful of nonzeros
//! per row, so dense storage would waste three orders of magnitude at the
//! larger corpus sizes.
//!
//! Rank over `Q` runs fraction-free over the integers: rows are cleared of
//! denominators, combined with cross-multiplication and divided by their
//! content. Arithmetic starts in checked `i64` and restarts in `BigInt` on
//! overflow. Rank over `F_p` is plain elimination with `u64` residues.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::{format_rational, Field};

pub type SparseRow<E> = Vec<(usize, E)>;

#[derive(Debug, Clone)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> PartialEq for ExactMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> ExactMatrix<F> {
    pub fn zero(field: &F, rows: usize, cols: usize) -> Self {
        ExactMatrix { field: field.clone(), rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, field.one())]).collect();
        ExactMatrix { field: field.clone(), rows: n, cols: n, data }
    }

    /// Builds a matrix from unsorted rows that may contain duplicate columns
    /// and zeros; duplicates are summed.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<(usize, F::Elem)>>) -> Self {
        let n = rows.len();
        let data = rows.into_iter().map(|r| normalize_row(field, r, cols)).collect();
        ExactMatrix { field: field.clone(), rows: n, cols, data }
    }

    pub fn from_dense(field: &F, dense: &[Vec<F::Elem>]) -> Result<Self> {
        let cols = dense.first().map_or(0, |r| r.len());
        if dense.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged dense matrix".into()));
        }
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !field.is_zero(v)).map(|(c, v)| (c, v.clone())).collect())
            .collect();
        Ok(ExactMatrix { field: field.clone(), rows: dense.len(), cols, data: rows })
    }

    pub fn from_i64(field: &F, dense: &[Vec<i64>]) -> Result<Self> {
        let converted: Vec<Vec<F::Elem>> =
            dense.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_dense(field, &converted)
    }

    pub fn from_rationals(field: &F, dense: &[Vec<BigRational>]) -> Result<Self> {
        let converted = dense
            .iter()
            .map(|r| r.iter().map(|q| field.from_rational(q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_dense(field, &converted)
    }

    pub fn diagonal(field: &F, diag: &[F::Elem]) -> Self {
        let rows = diag.iter().enumerate().map(|(i, v)| vec![(i, v.clone())]).collect();
        Self::from_rows(field, diag.len(), rows)
    }

    /// Permutation-like matrix sending basis vector `j` to `targets[j]`.
    pub fn from_column_map(field: &F, rows: usize, targets: &[usize]) -> Self {
        let mut data = vec![Vec::new(); rows];
        for (j, &t) in targets.iter().enumerate() {
            data[t].push((j, field.one()));
        }
        ExactMatrix { field: field.clone(), rows, cols: targets.len(), data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, r: usize) -> &[(usize, F::Elem)] {
        &self.data[r]
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, F::Elem)> {
        self.data.iter().enumerate().find_map(|(r, row)| row.first().map(|(c, v)| (r, *c, v.clone())))
    }

    /// First nonzero entry in column-major order, i.e. the lowest-index
    /// basis vector on which the map is nonzero.
    pub fn first_nonzero_column(&self) -> Option<(usize, usize, F::Elem)> {
        let mut best: Option<(usize, usize, F::Elem)> = None;
        for (r, row) in self.data.iter().enumerate() {
            if let Some((c, v)) = row.first() {
                if best.as_ref().is_none_or(|(_, bc, _)| c < bc) {
                    best = Some((r, *c, v.clone()));
                }
            }
        }
        best
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow<F::Elem>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        ExactMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &rhs.data[*k] {
                        let prod = f.mul(a, b);
                        acc.entry(*c).and_modify(|e| *e = f.add(e, &prod)).or_insert(prod);
                    }
                }
                acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
            })
            .collect();
        Ok(ExactMatrix { field: f.clone(), rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(f.zero(), |acc, (c, a)| f.add(&acc, &f.mul(a, &v[*c]))))
            .collect())
    }

    fn zip_with(&self, rhs: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let f = &self.field;
        let zero = f.zero();
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let ca = a.get(i).map_or(usize::MAX, |e| e.0);
                    let cb = b.get(j).map_or(usize::MAX, |e| e.0);
                    let (c, v) = if ca < cb {
                        i += 1;
                        (ca, op(&a[i - 1].1, &zero))
                    } else if cb < ca {
                        j += 1;
                        (cb, op(&zero, &b[j - 1].1))
                    } else {
                        i += 1;
                        j += 1;
                        (ca, op(&a[i - 1].1, &b[j - 1].1))
                    };
                    if !f.is_zero(&v) {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        Ok(ExactMatrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(rhs, move |a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(rhs, move |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f.mul(v, s))).filter(|(_, v)| !f.is_zero(v)).collect())
            .collect();
        ExactMatrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(field: &F, blocks: &[&Self]) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::new();
        let mut offset = 0;
        for b in blocks {
            for row in &b.data {
                data.push(row.iter().map(|(c, v)| (c + offset, v.clone())).collect());
            }
            offset += b.cols;
        }
        ExactMatrix { field: field.clone(), rows: data.len(), cols, data }
    }

    /// Assembles a block matrix. `None` blocks are zero; every block row must
    /// pin its height and every block column its width through at least one
    /// present block or through `row_dims`/`col_dims`.
    pub fn from_blocks(
        field: &F,
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: &[Vec<Option<&Self>>],
    ) -> Result<Self> {
        let mut col_off = vec![0; col_dims.len() + 1];
        for (i, d) in col_dims.iter().enumerate() {
            col_off[i + 1] = col_off[i] + d;
        }
        let mut data = Vec::new();
        for (bi, &h) in row_dims.iter().enumerate() {
            for r in 0..h {
                let mut row = Vec::new();
                for (bj, &w) in col_dims.iter().enumerate() {
                    if let Some(block) = blocks[bi][bj] {
                        if block.rows != h || block.cols != w {
                            return Err(Error::Shape(format!(
                                "block ({bi},{bj}) is {}x{}, expected {h}x{w}",
                                block.rows, block.cols
                            )));
                        }
                        row.extend(block.data[r].iter().map(|(c, v)| (c + col_off[bj], v.clone())));
                    }
                }
                data.push(row);
            }
        }
        Ok(ExactMatrix { field: field.clone(), rows: data.len(), cols: col_off[col_dims.len()], data })
    }

    pub fn rank(&self) -> usize {
        // Shorter rows mean cheaper combinations; rank is transpose-invariant.
        if self.rows >= self.cols {
            self.independent_rows().len()
        } else {
            self.transpose().independent_rows().len()
        }
    }

    /// Indices of a maximal linearly independent set of rows, ascending.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.field.pivot_rows(self.data.clone(), self.cols)
    }

    /// The matrix with the listed columns removed and the rest renumbered.
    pub fn without_columns(&self, drop: &[usize]) -> Self {
        let mut new_index = vec![Some(0); self.cols];
        for &c in drop {
            new_index[c] = None;
        }
        let mut next = 0;
        for slot in new_index.iter_mut().flatten() {
            *slot = next;
            next += 1;
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().filter_map(|(c, v)| new_index[*c].map(|n| (n, v.clone()))).collect())
            .collect();
        ExactMatrix { field: self.field.clone(), rows: self.rows, cols: next, data }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (rref, pivots) = rref(f, self.data.clone(), self.cols);
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|c| !is_pivot[*c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (row, &p) in rref.iter().zip(&pivots) {
                    if let Ok(i) = row.binary_search_by_key(&free, |e| e.0) {
                        v[p] = f.neg(&row[i].1);
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, as vectors of length `rows`.
    pub fn image_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (rref, _) = rref(f, self.transpose().data, self.rows);
        rref.into_iter().map(|r| densify(f, &r, self.rows)).collect()
    }

    /// Two-sided inverse of a square matrix, if it exists. Kernel vectors of
    /// `[M | I]` with free coordinate `e_i` in the identity block are
    /// `(-M^-1 e_i, e_i)`.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if self.cols != n {
            return None;
        }
        let f = &self.field;
        let id = Self::identity(f, n);
        let aug = Self::from_blocks(f, &[n], &[n, n], &[vec![Some(self), Some(&id)]]).ok()?;
        let ker = aug.kernel_basis();
        if ker.len() != n || ker.iter().any(|v| v[..n].iter().all(|x| f.is_zero(x))) {
            return None;
        }
        let mut cols: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n];
        for v in &ker {
            let free = (n..2 * n).find(|&c| f.is_one(&v[c]))?;
            cols[free - n] = sparsify(f, &v[..n]).into_iter().map(|(r, x)| (r, f.neg(&x))).collect();
        }
        let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n];
        for (c, col) in cols.into_iter().enumerate() {
            for (r, x) in col {
                rows[r].push((c, x));
            }
        }
        let inv = Self::from_rows(f, n, rows);
        (inv.mul(self).ok()? == id).then_some(inv)
    }

    fn norm_by(&self, column_sums: bool) -> Result<BigRational> {
        let f = &self.field;
        let n = if column_sums { self.cols } else { self.rows };
        let mut sums = vec![BigRational::zero(); n];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                let a = f.abs(v).ok_or_else(|| Error::NormUndefined(f.tag().to_string()))?;
                sums[if column_sums { *c } else { r }] += a;
            }
        }
        if f.abs(&f.one()).is_none() {
            return Err(Error::NormUndefined(f.tag().to_string()));
        }
        Ok(sums.into_iter().max().unwrap_or_else(BigRational::zero))
    }

    /// Operator norm l1 -> l1: the largest absolute column sum.
    pub fn l1_norm(&self) -> Result<BigRational> {
        self.norm_by(true)
    }

    /// Operator norm linf -> linf: the largest absolute row sum.
    pub fn linf_norm(&self) -> Result<BigRational> {
        self.norm_by(false)
    }

    /// Entries as `p/q` strings (residues for prime fields).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_dense()
            .iter()
            .map(|r| r.iter().map(|v| format_rational(&self.field.to_rational(v))).collect())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.to_strings() {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

pub fn densify<F: Field>(f: &F, row: &[(usize, F::Elem)], n: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

pub fn sparsify<F: Field>(f: &F, v: &[F::Elem]) -> SparseRow<F::Elem> {
    v.iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(c, x)| (c, x.clone())).collect()
}

fn normalize_row<F: Field>(f: &F, mut row: Vec<(usize, F::Elem)>, cols: usize) -> SparseRow<F::Elem> {
    debug_assert!(row.iter().all(|(c, _)| *c < cols));
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow<F::Elem> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = f.add(lv, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !f.is_zero(v));
    out
}

/// `target - factor * pivot` on sorted sparse rows.
fn axpy_row<F: Field>(
    f: &F,
    target: &[(usize, F::Elem)],
    factor: &F::Elem,
    pivot: &[(usize, F::Elem)],
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ct = target.get(i).map_or(usize::MAX, |e| e.0);
        let cp = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ct < cp {
            out.push(target[i].clone());
            i += 1;
        } else {
            let scaled = f.mul(factor, &pivot[j].1);
            let v = if ct == cp {
                i += 1;
                f.sub(&target[i - 1].1, &scaled)
            } else {
                f.neg(&scaled)
            };
            j += 1;
            if !f.is_zero(&v) {
                out.push((cp, v));
            }
        }
    }
    out
}

/// Incrementally maintained row echelon basis over a field. Pivot rows are
/// normalized to a leading one.
#[derive(Debug, Clone)]
pub struct EchelonBasis<F: Field> {
    field: F,
    pivots: Vec<Option<SparseRow<F::Elem>>>,
    rank: usize,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, ncols: usize) -> Self {
        EchelonBasis { field: field.clone(), pivots: vec![None; ncols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        while let Some((lead, val)) = row.first().cloned() {
            match &self.pivots[lead] {
                Some(p) => row = axpy_row(&self.field, &row, &val, p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns whether it was independent of the basis.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> bool {
        let row = self.reduce(row);
        let Some((lead, val)) = row.first().cloned() else {
            return false;
        };
        let inv = self.field.inv(&val).expect("nonzero pivot");
        let normalized = row.into_iter().map(|(c, v)| (c, self.field.mul(&v, &inv))).collect();
        self.pivots[lead] = Some(normalized);
        self.rank += 1;
        true
    }

    pub fn contains(&self, row: SparseRow<F::Elem>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref<F: Field>(f: &F, rows: Vec<SparseRow<F::Elem>>, ncols: usize) -> (Vec<SparseRow<F::Elem>>, Vec<usize>) {
    let mut basis = EchelonBasis::new(f, ncols);
    for row in rows {
        basis.insert(row);
    }
    let pivots: Vec<usize> = (0..ncols).filter(|c| basis.pivots[*c].is_some()).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // Right to left: rows with larger pivots are already clean, so clearing
    // them out of this row only introduces non-pivot columns.
    for &p in pivots.iter().rev() {
        let mut row = basis.pivots[p].take().expect("pivot row");
        while let Some((c, v)) = row[1..].iter().find(|(c, _)| is_pivot[*c]).cloned() {
            let prow = basis.pivots[c].as_ref().expect("later pivot row");
            row = axpy_row(f, &row, &v, prow);
        }
        basis.pivots[p] = Some(row);
    }
    let rows = pivots.iter().map(|p| basis.pivots[*p].clone().expect("pivot row")).collect();
    (rows, pivots)
}

/// Dimension of span(num) / span(den). Fails with the index of the first
/// `den` vector outside span(num).
pub fn quotient_dim<F: Field>(f: &F, num: &[Vec<F::Elem>], den: &[Vec<F::Elem>]) -> Result<usize> {
    let n = num.iter().chain(den).map(Vec::len).next().unwrap_or(0);
    if num.iter().chain(den).any(|v| v.len() != n) {
        return Err(Error::Shape("vectors of different lengths".into()));
    }
    let mut big = EchelonBasis::new(f, n);
    for v in num {
        big.insert(sparsify(f, v));
    }
    let mut small = EchelonBasis::new(f, n);
    for (i, v) in den.iter().enumerate() {
        let row = sparsify(f, v);
        if !big.contains(row.clone()) {
            return Err(Error::NotASubspace { index: i });
        }
        small.insert(row);
    }
    Ok(big.rank() - small.rank())
}

/// Clears one column of a sparse row using a pivot row that shares it.
trait Eliminate {
    type E: Clone;
    /// `None` when the arithmetic overflows.
    fn eliminate(
        &self,
        target: &[(usize, Self::E)],
        pivot: &[(usize, Self::E)],
        col: usize,
    ) -> Option<SparseRow<Self::E>>;
}

fn entry_at<E>(row: &[(usize, E)], col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

struct OverField<'a, F: Field>(&'a F);

impl<F: Field> Eliminate for OverField<'_, F> {
    type E = F::Elem;
    fn eliminate(
        &self,
        target: &[(usize, F::Elem)],
        pivot: &[(usize, F::Elem)],
        col: usize,
    ) -> Option<SparseRow<F::Elem>> {
        let f = self.0;
        let factor = f.mul(entry_at(target, col)?, &f.inv(entry_at(pivot, col)?)?);
        Some(axpy_row(f, target, &factor, pivot))
    }
}

struct SmallInts;
struct BigInts;

impl Eliminate for SmallInts {
    type E = i64;
    fn eliminate(&self, target: &[(usize, i64)], pivot: &[(usize, i64)], col: usize) -> Option<SparseRow<i64>> {
        let t = *entry_at(target, col)?;
        let p = *entry_at(pivot, col)?;
        let g = t.gcd(&p);
        let (a, b) = (p / g, t / g);
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ct = target.get(i).map_or(usize::MAX, |e| e.0);
            let cp = pivot.get(j).map_or(usize::MAX, |e| e.0);
            let (c, v) = if ct < cp {
                i += 1;
                (ct, target[i - 1].1.checked_mul(a)?)
            } else if cp < ct {
                j += 1;
                (cp, pivot[j - 1].1.checked_mul(b)?.checked_neg()?)
            } else {
                i += 1;
                j += 1;
                let x = target[i - 1].1.checked_mul(a)?;
                let y = pivot[j - 1].1.checked_mul(b)?;
                (ct, x.checked_sub(y)?)
            };
            if v != 0 {
                out.push((c, v));
            }
        }
        let content = out.iter().fold(0i64, |acc, (_, v)| acc.gcd(v));
        if content > 1 {
            for e in &mut out {
                e.1 /= content;
            }
        }
        Some(out)
    }
}

impl Eliminate for BigInts {
    type E = BigInt;
    fn eliminate(
        &self,
        target: &[(usize, BigInt)],
        pivot: &[(usize, BigInt)],
        col: usize,
    ) -> Option<SparseRow<BigInt>> {
        let t = entry_at(target, col)?;
        let p = entry_at(pivot, col)?;
        let g = t.gcd(p);
        let (a, b) = (p / &g, t / &g);
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ct = target.get(i).map_or(usize::MAX, |e| e.0);
            let cp = pivot.get(j).map_or(usize::MAX, |e| e.0);
            let (c, v) = if ct < cp {
                i += 1;
                (ct, &target[i - 1].1 * &a)
            } else if cp < ct {
                j += 1;
                (cp, -(&pivot[j - 1].1 * &b))
            } else {
                i += 1;
                j += 1;
                (ct, &target[i - 1].1 * &a - &pivot[j - 1].1 * &b)
            };
            if !v.is_zero() {
                out.push((c, v));
            }
        }
        let content = out.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if content > BigInt::one() {
            for e in &mut out {
                e.1 = &e.1 / &content;
            }
        }
        Some(out)
    }
}

/// Right-looking sparse elimination. Each step pivots on a column with the
/// fewest nonzeros, using the shortest row that contains it, which keeps
/// fill-in low on the structured maps built here. Returns the indices of the
/// pivot rows, a maximal linearly independent set of the input rows.
fn sparse_pivots<R: Eliminate>(r: &R, mut rows: Vec<SparseRow<R::E>>, ncols: usize) -> Option<Vec<usize>> {
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut count = vec![0usize; ncols];
    for (i, row) in rows.iter().enumerate() {
        for (c, _) in row {
            holders[*c].push(i);
            count[*c] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..ncols).filter(|&c| count[c] > 0).map(|c| Reverse((count[c], c))).collect();
    let mut pivots = Vec::new();
    while let Some(Reverse((cnt, c))) = heap.pop() {
        if cnt == 0 || count[c] != cnt {
            continue;
        }
        let mut cands = std::mem::take(&mut holders[c]);
        cands.sort_unstable();
        cands.dedup();
        cands.retain(|&i| entry_at(&rows[i], c).is_some());
        let &p = cands.iter().min_by_key(|&&i| rows[i].len())?;
        let pivot = std::mem::take(&mut rows[p]);
        for (col, _) in &pivot {
            count[*col] -= 1;
            heap.push(Reverse((count[*col], *col)));
        }
        for &i in cands.iter().filter(|&&i| i != p) {
            let new = r.eliminate(&rows[i], &pivot, c)?;
            let old = std::mem::take(&mut rows[i]);
            let (mut a, mut b) = (0, 0);
            while a < old.len() || b < new.len() {
                let co = old.get(a).map_or(usize::MAX, |e| e.0);
                let cn = new.get(b).map_or(usize::MAX, |e| e.0);
                if co == cn {
                    a += 1;
                    b += 1;
                    continue;
                }
                let col = if co < cn {
                    a += 1;
                    count[co] -= 1;
                    co
                } else {
                    b += 1;
                    count[cn] += 1;
                    holders[cn].push(i);
                    cn
                };
                heap.push(Reverse((count[col], col)));
            }
            rows[i] = new;
        }
        pivots.push(p);
    }
    pivots.sort_unstable();
    Some(pivots)
}

pub(crate) fn field_pivots<F: Field>(f: &F, rows: Vec<SparseRow<F::Elem>>, ncols: usize) -> Vec<usize> {
    sparse_pivots(&OverField(f), rows, ncols).expect("field elimination cannot overflow")
}

/// Pivot rows over `Q` by fraction-free integer elimination.
pub(crate) fn rational_pivots(rows: Vec<SparseRow<BigRational>>, ncols: usize) -> Vec<usize> {
    let int_rows: Vec<SparseRow<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
            r.into_iter().map(|(c, q)| (c, q.numer() * (&lcm / q.denom()))).collect()
        })
        .collect();
    let small: Option<Vec<SparseRow<i64>>> =
        int_rows.iter().map(|r| r.iter().map(|(c, v)| v.to_i64().map(|x| (*c, x))).collect()).collect();
    if let Some(small) = small {
        if let Some(pivots) = sparse_pivots(&SmallInts, small, ncols) {
            return pivots;
        }
    }
    sparse_pivots(&BigInts, int_rows, ncols).expect("bigint elimination cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{PrimeField, Rationals};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_examples() {
        let f = Rationals;
        assert_eq!(ExactMatrix::zero(&f, 3, 3).rank(), 0);
        assert_eq!(ExactMatrix::identity(&f, 5).rank(), 5);
        let m = ExactMatrix::from_i64(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_over_prime_field_differs() {
        let m = [vec![2, 0], vec![0, 1]];
        assert_eq!(ExactMatrix::from_i64(&Rationals, &m).unwrap().rank(), 2);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(ExactMatrix::from_i64(&f2, &m).unwrap().rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Rationals;
        assert!(ExactMatrix::identity(&f, 4).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zero(&f, 2, 3).kernel_basis().len(), 3);
        let m = ExactMatrix::from_i64(&f, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn image_basis_spans_columns() {
        let f = Rationals;
        let m = ExactMatrix::from_i64(&f, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap();
        let img = m.image_basis();
        assert_eq!(img.len(), 2);
        let cols: Vec<_> = (0..3).map(|c| m.column(c)).collect();
        assert_eq!(quotient_dim(&f, &img, &cols).unwrap(), 0);
    }

    #[test]
    fn quotient_dim_examples() {
        let f = Rationals;
        let e = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert_eq!(quotient_dim(&f, &e, &e).unwrap(), 0);
        assert_eq!(quotient_dim(&f, &e, &[]).unwrap(), 2);
        let line = vec![vec![q(1, 1), q(1, 1)]];
        let other = vec![vec![q(1, 1), q(-1, 1)]];
        assert!(matches!(quotient_dim(&f, &line, &other), Err(Error::NotASubspace { index: 0 })));
    }

    #[test]
    fn norms() {
        let f = Rationals;
        let id = ExactMatrix::identity(&f, 3);
        assert_eq!(id.l1_norm().unwrap(), q(1, 1));
        assert_eq!(id.linf_norm().unwrap(), q(1, 1));
        let m = ExactMatrix::from_i64(&f, &[vec![1, -2], vec![3, 0]]).unwrap();
        assert_eq!(m.l1_norm().unwrap(), q(4, 1));
        assert_eq!(m.linf_norm().unwrap(), q(3, 1));
        let f2 = PrimeField::new(2).unwrap();
        assert!(ExactMatrix::identity(&f2, 2).l1_norm().is_err());
    }

    #[test]
    fn rational_rank_with_fractions_and_overflow() {
        let f = Rationals;
        let m = ExactMatrix::from_rationals(&f, &[vec![q(1, 2), q(1, 3)], vec![q(3, 2), q(1, 1)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let big = i64::MAX / 3;
        let m = ExactMatrix::from_i64(&f, &[vec![big, big - 1, 1], vec![big - 7, big, 3], vec![1, 1, 1]]).unwrap();
        let expected = ExactMatrix::from_i64(&f, &[vec![big, big - 1, 1], vec![big - 7, big, 3], vec![1, 1, 1]])
            .unwrap()
            .kernel_basis();
        assert_eq!(m.rank(), 3 - expected.len());
    }

    #[test]
    fn block_assembly() {
        let f = Rationals;
        let a = ExactMatrix::identity(&f, 2);
        let b = ExactMatrix::from_i64(&f, &[vec![5]]).unwrap();
        let d = ExactMatrix::block_diag(&f, &[&a, &b]);
        assert_eq!(d.rows(), 3);
        assert_eq!(d.get(2, 2), q(5, 1));
        let blk =
            ExactMatrix::from_blocks(&f, &[2, 1], &[2, 1], &[vec![Some(&a), None], vec![None, Some(&b)]]).unwrap();
        assert_eq!(blk, d);
    }

    #[test]
    fn csv_dump() {
        let f = Rationals;
        let m = ExactMatrix::from_rationals(&f, &[vec![q(1, 2), q(-3, 1)]]).unwrap();
        assert_eq!(m.to_csv(), "1/2,-3\n");
    }
}
