//! Chain and cochain complexes of exact matrices.
//!
//! One type holds both directions. A chain complex
//! `0 <- E_0 <- E_1 <- ... <- E_N` stores `maps[n] = d_n : E_{n+1} -> E_n`;
//! a cochain complex `0 -> C^0 -> ... -> C^N` stores
//! `maps[n] = delta^n : C^n -> C^{n+1}`. A complex marked `truncated` is the
//! head of an infinite complex: its top degree has unknown neighbours and is
//! left out of homology reports.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalars::{format_rational, Field, FieldTag, Rationals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Chain,
    Cochain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    Linf,
    None,
}

#[derive(Debug, Clone)]
pub struct NormedComplex<F: Field> {
    field: F,
    direction: Direction,
    dims: Vec<usize>,
    maps: Vec<ExactMatrix<F>>,
    norm_kinds: Vec<NormKind>,
    truncated: bool,
    labels: Option<Vec<Vec<String>>>,
}

impl<F: Field> NormedComplex<F> {
    /// Shape-checked construction without the composition check; see
    /// [`verify_complex`].
    pub fn from_maps_unverified(
        field: &F,
        direction: Direction,
        dims: Vec<usize>,
        maps: Vec<ExactMatrix<F>>,
        norm_kinds: Vec<NormKind>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("complex with no degrees".into()));
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} spaces need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        if norm_kinds.len() != dims.len() {
            return Err(Error::Shape("one norm kind per degree".into()));
        }
        for (n, m) in maps.iter().enumerate() {
            let (rows, cols) = match direction {
                Direction::Chain => (dims[n], dims[n + 1]),
                Direction::Cochain => (dims[n + 1], dims[n]),
            };
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Shape(format!("map {n} is {}x{}, expected {rows}x{cols}", m.rows(), m.cols())));
            }
        }
        Ok(NormedComplex { field: field.clone(), direction, dims, maps, norm_kinds, truncated: false, labels: None })
    }

    /// Shape- and composition-checked construction.
    pub fn new(
        field: &F,
        direction: Direction,
        dims: Vec<usize>,
        maps: Vec<ExactMatrix<F>>,
        norm_kinds: Vec<NormKind>,
    ) -> Result<Self> {
        let c = Self::from_maps_unverified(field, direction, dims, maps, norm_kinds)?;
        verify_complex(&c)?;
        Ok(c)
    }

    pub fn with_truncated(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, d)| l.len() != *d) {
            return Err(Error::Shape("labels must match the degree dimensions".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn zero(field: &F, direction: Direction, dims: Vec<usize>) -> Self {
        let maps = (0..dims.len().saturating_sub(1))
            .map(|n| match direction {
                Direction::Chain => ExactMatrix::zero(field, dims[n], dims[n + 1]),
                Direction::Cochain => ExactMatrix::zero(field, dims[n + 1], dims[n]),
            })
            .collect();
        let kinds = vec![NormKind::None; dims.len()];
        NormedComplex { field: field.clone(), direction, dims, maps, norm_kinds: kinds, truncated: false, labels: None }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn direction(&self) -> Direction {
        self.direction
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }
    pub fn maps(&self) -> &[ExactMatrix<F>] {
        &self.maps
    }
    pub fn map(&self, n: usize) -> &ExactMatrix<F> {
        &self.maps[n]
    }
    pub fn norm_kinds(&self) -> &[NormKind] {
        &self.norm_kinds
    }
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }
    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Degrees whose homology is determined by the stored data.
    pub fn reportable_degrees(&self) -> usize {
        if self.truncated {
            self.top_degree()
        } else {
            self.dims.len()
        }
    }
}

/// Checks that consecutive maps compose to zero. The witness degree is the
/// middle degree of the failing composite.
pub fn verify_complex<F: Field>(c: &NormedComplex<F>) -> Result<()> {
    let f = &c.field;
    let failures: Vec<Option<Error>> = (1..c.maps.len())
        .into_par_iter()
        .map(|mid| {
            let composite = match c.direction {
                Direction::Chain => c.maps[mid - 1].mul(&c.maps[mid]),
                Direction::Cochain => c.maps[mid].mul(&c.maps[mid - 1]),
            };
            match composite {
                Err(e) => Some(e),
                Ok(m) => m.first_nonzero().map(|(row, col, v)| Error::NotAComplex {
                    degree: mid,
                    row,
                    col,
                    value: format_rational(&f.to_rational(&v)),
                }),
            }
        })
        .collect();
    match failures.into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDims {
    pub degree: usize,
    pub cycles: usize,
    pub boundaries: usize,
    pub homology: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub label: String,
    pub field: FieldTag,
    pub max_degree: usize,
    pub degrees: Vec<DegreeDims>,
}

impl CohomologyReport {
    pub fn homology_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.homology).collect()
    }

    /// Dimension vector with the label stripped, for comparing reports
    /// produced by different pipelines.
    pub fn dims_only(&self) -> (FieldTag, Vec<usize>) {
        (self.field, self.homology_dims())
    }
}

/// Per-degree dimensions of cycles, boundaries and homology.
/// For each map, a maximal independent set of its rows. The image of the map
/// projects isomorphically onto those coordinates, so the remaining
/// coordinates span a complement of it. Each map is restricted to the
/// complement of the image of the map before it, which it annihilates: the
/// rank is unchanged while the dependent columns that make elimination slow
/// drop out.
pub fn image_pivots<F: Field>(c: &NormedComplex<F>) -> Vec<Vec<usize>> {
    let order: Vec<usize> = match c.direction {
        Direction::Cochain => (0..c.maps.len()).collect(),
        Direction::Chain => (0..c.maps.len()).rev().collect(),
    };
    let mut pivots = vec![Vec::new(); c.maps.len()];
    let mut image_rows: Vec<usize> = Vec::new();
    for i in order {
        image_rows = c.maps[i].without_columns(&image_rows).independent_rows();
        pivots[i] = image_rows.clone();
    }
    pivots
}

/// Ranks of all maps.
pub fn map_ranks<F: Field>(c: &NormedComplex<F>) -> Vec<usize> {
    image_pivots(c).iter().map(Vec::len).collect()
}

pub fn cohomology_dims<F: Field>(c: &NormedComplex<F>, label: impl Into<String>) -> Result<CohomologyReport> {
    let ranks = map_ranks(c);
    let n_report = c.reportable_degrees();
    let mut degrees = Vec::with_capacity(n_report);
    for n in 0..n_report {
        let dim = c.dims[n];
        let (outgoing, incoming) = match c.direction {
            // H_n = ker(d_{n-1}) / im(d_n)
            Direction::Chain => (n.checked_sub(1).map_or(0, |k| ranks[k]), ranks.get(n).copied().unwrap_or(0)),
            // H^n = ker(delta^n) / im(delta^{n-1})
            Direction::Cochain => (ranks.get(n).copied().unwrap_or(0), n.checked_sub(1).map_or(0, |k| ranks[k])),
        };
        let cycles = dim - outgoing;
        if incoming > cycles {
            return Err(Error::NotASubspace { index: n });
        }
        degrees.push(DegreeDims { degree: n, cycles, boundaries: incoming, homology: cycles - incoming });
    }
    Ok(CohomologyReport { label: label.into(), field: c.field.tag(), max_degree: n_report.saturating_sub(1), degrees })
}

/// Contracting homotopies `s_j : E_j -> E_{j+1}` with verified identities.
#[derive(Debug, Clone)]
pub struct SplitCertificate<F: Field> {
    pub homotopies: Vec<ExactMatrix<F>>,
    /// Largest homotopy norm, when norms were checked.
    pub max_norm: Option<BigRational>,
}

impl<F: Field> SplitCertificate<F> {
    pub fn max_norm_string(&self) -> String {
        self.max_norm.as_ref().map_or_else(|| "unchecked".to_string(), format_rational)
    }
}

fn operator_norm<F: Field>(m: &ExactMatrix<F>, kind: NormKind) -> Result<BigRational> {
    match kind {
        NormKind::L1 => m.l1_norm(),
        NormKind::Linf => m.linf_norm(),
        NormKind::None => Err(Error::NormUndefined("a degree without a declared norm".into())),
    }
}

/// Verifies `d_0 s_0 = id` and `s_{j-1} d_{j-1} + d_j s_j = id` on every
/// degree where both sides are defined, and optionally `||s_j|| <= 1` in
/// the norm declared for `E_j`.
pub fn certify_split<F: Field>(
    c: &NormedComplex<F>,
    homotopies: Vec<ExactMatrix<F>>,
    check_norms: bool,
) -> Result<SplitCertificate<F>> {
    if c.direction != Direction::Chain {
        return Err(Error::Shape("splittings are certified on chain complexes".into()));
    }
    let f = &c.field;
    let top = c.top_degree();
    if homotopies.len() != top {
        return Err(Error::Shape(format!("expected {top} homotopies, got {}", homotopies.len())));
    }
    for (j, s) in homotopies.iter().enumerate() {
        if s.rows() != c.dims[j + 1] || s.cols() != c.dims[j] {
            return Err(Error::Shape(format!("homotopy {j} has the wrong shape")));
        }
    }
    for j in 0..top {
        let mut lhs = c.maps[j].mul(&homotopies[j])?;
        if j > 0 {
            lhs = lhs.add(&homotopies[j - 1].mul(&c.maps[j - 1])?)?;
        }
        let diff = lhs.sub(&ExactMatrix::identity(f, c.dims[j]))?;
        if let Some((_, basis, _)) = diff.first_nonzero_column() {
            return Err(Error::SplitIdentity { degree: j, basis });
        }
    }
    let max_norm = if check_norms {
        let mut max = BigRational::zero();
        for (j, s) in homotopies.iter().enumerate() {
            let norm = operator_norm(s, c.norm_kinds[j])?;
            if norm > BigRational::one() {
                return Err(Error::NormBound { degree: j, norm: format_rational(&norm) });
            }
            max = max.max(norm);
        }
        Some(max)
    } else {
        None
    };
    Ok(SplitCertificate { homotopies, max_norm })
}

/// Finite surrogate of a uniform bound over an index set: the largest
/// differential norm across the parts, per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformBoundReport {
    pub max_differential_norm: Vec<Option<BigRational>>,
}

/// Block-diagonal sum of complexes, all carrying the norm `mode`.
pub fn sum_complexes<F: Field>(
    parts: &[&NormedComplex<F>],
    mode: NormKind,
) -> Result<(NormedComplex<F>, UniformBoundReport)> {
    let first = parts.first().ok_or_else(|| Error::Shape("empty sum".into()))?;
    let f = first.field.clone();
    for p in parts {
        if p.field.tag() != f.tag() || p.dims.len() != first.dims.len() || p.direction != first.direction {
            return Err(Error::Shape("summands differ in field, degree range or direction".into()));
        }
    }
    let degrees = first.dims.len();
    let dims = (0..degrees).map(|n| parts.iter().map(|p| p.dims[n]).sum()).collect();
    let mut maps = Vec::with_capacity(degrees - 1);
    let mut bounds = Vec::with_capacity(degrees - 1);
    for n in 0..degrees - 1 {
        let blocks: Vec<&ExactMatrix<F>> = parts.iter().map(|p| &p.maps[n]).collect();
        maps.push(ExactMatrix::block_diag(&f, &blocks));
        let norms: Option<Vec<BigRational>> = blocks.iter().map(|b| operator_norm(b, mode).ok()).collect();
        bounds.push(norms.and_then(|v| v.into_iter().max()));
    }
    let c = NormedComplex {
        field: f,
        direction: first.direction,
        dims,
        maps,
        norm_kinds: vec![mode; degrees],
        truncated: parts.iter().any(|p| p.truncated),
        labels: None,
    };
    Ok((c, UniformBoundReport { max_differential_norm: bounds }))
}

/// Block-diagonal homotopy for a sum of split complexes.
pub fn sum_homotopies<F: Field>(field: &F, parts: &[&[ExactMatrix<F>]]) -> Result<Vec<ExactMatrix<F>>> {
    let len = parts.first().map_or(0, |p| p.len());
    if parts.iter().any(|p| p.len() != len) {
        return Err(Error::Shape("homotopy lists differ in length".into()));
    }
    Ok((0..len)
        .map(|j| {
            let blocks: Vec<&ExactMatrix<F>> = parts.iter().map(|p| &p[j]).collect();
            ExactMatrix::block_diag(field, &blocks)
        })
        .collect())
}

/// Degree-wise maps between two complexes of the same direction.
#[derive(Debug, Clone)]
pub struct ChainMap<F: Field> {
    pub source: Arc<NormedComplex<F>>,
    pub target: Arc<NormedComplex<F>>,
    pub components: Vec<ExactMatrix<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMapCheck {
    pub isomorphism: bool,
    /// `None` when isometry was not checked or norms are undefined.
    pub isometric: Option<bool>,
}

impl<F: Field> ChainMap<F> {
    pub fn new(
        source: Arc<NormedComplex<F>>,
        target: Arc<NormedComplex<F>>,
        components: Vec<ExactMatrix<F>>,
    ) -> Result<Self> {
        if source.direction != target.direction || source.dims.len() != target.dims.len() {
            return Err(Error::Shape("chain map between incompatible complexes".into()));
        }
        if components.len() != source.dims.len() {
            return Err(Error::Shape("one component per degree".into()));
        }
        for (n, m) in components.iter().enumerate() {
            if m.rows() != target.dims[n] || m.cols() != source.dims[n] {
                return Err(Error::Shape(format!("component {n} has the wrong shape")));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: Arc<NormedComplex<F>>) -> Self {
        let components = c.dims.iter().map(|&d| ExactMatrix::identity(&c.field, d)).collect();
        ChainMap { source: c.clone(), target: c, components }
    }

    /// `other . self`.
    pub fn then(&self, other: &ChainMap<F>) -> Result<ChainMap<F>> {
        if !Arc::ptr_eq(&self.target, &other.source) && self.target.dims != other.source.dims {
            return Err(Error::Shape("chain maps do not compose".into()));
        }
        let components =
            other.components.iter().zip(&self.components).map(|(b, a)| b.mul(a)).collect::<Result<Vec<_>>>()?;
        ChainMap::new(self.source.clone(), other.target.clone(), components)
    }
}

/// Checks commutation with the differentials degree by degree.
pub fn verify_chain_map<F: Field>(m: &ChainMap<F>) -> Result<()> {
    let (s, t) = (&m.source, &m.target);
    for n in 0..s.maps.len() {
        let (lhs, rhs) = match s.direction {
            // f_n d_n = d'_n f_{n+1}
            Direction::Chain => (m.components[n].mul(&s.maps[n])?, t.maps[n].mul(&m.components[n + 1])?),
            // f_{n+1} delta^n = delta'^n f_n
            Direction::Cochain => (m.components[n + 1].mul(&s.maps[n])?, t.maps[n].mul(&m.components[n])?),
        };
        if let Some((_, basis, _)) = lhs.sub(&rhs)?.first_nonzero_column() {
            let degree = match s.direction {
                Direction::Chain => n + 1,
                Direction::Cochain => n,
            };
            return Err(Error::ChainMap { degree, basis, reason: "does not commute with the differential".into() });
        }
    }
    Ok(())
}

/// Verifies that `f` is a chain map with two-sided inverse `g`, and when
/// `check_isometry` is set that every component of both has norm exactly 1.
pub fn verify_chain_isomorphism<F: Field>(
    f: &ChainMap<F>,
    g: &ChainMap<F>,
    check_isometry: bool,
) -> Result<ChainMapCheck> {
    verify_chain_map(f)?;
    verify_chain_map(g)?;
    let field = &f.source.field;
    for n in 0..f.components.len() {
        let gf = g.components[n].mul(&f.components[n])?;
        if let Some((_, basis, _)) = gf.sub(&ExactMatrix::identity(field, f.source.dims[n]))?.first_nonzero_column() {
            return Err(Error::ChainMap { degree: n, basis, reason: "g . f is not the identity".into() });
        }
        let fg = f.components[n].mul(&g.components[n])?;
        if let Some((_, basis, _)) = fg.sub(&ExactMatrix::identity(field, f.target.dims[n]))?.first_nonzero_column() {
            return Err(Error::ChainMap { degree: n, basis, reason: "f . g is not the identity".into() });
        }
    }
    let isometric = if check_isometry {
        let mut all = true;
        for n in 0..f.components.len() {
            // Zero spaces are trivially isometric.
            if f.source.dims[n] == 0 && f.target.dims[n] == 0 {
                continue;
            }
            let nf = operator_norm(&f.components[n], f.source.norm_kinds[n])?;
            let ng = operator_norm(&g.components[n], g.source.norm_kinds[n])?;
            all &= nf.is_one() && ng.is_one();
        }
        Some(all)
    } else {
        None
    };
    Ok(ChainMapCheck { isomorphism: true, isometric })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SniperReport {
    pub n: usize,
    /// Dimension of each cokernel of `f_n` = "divide by n".
    pub cokernel_dims: Vec<usize>,
    pub sum_of_cokernels: usize,
    /// `||F_N||_inf`, uniformly bounded by 1.
    pub forward_norm: String,
    /// `||F_N^{-1}||_inf`, the forced right inverse; equals `N`.
    pub inverse_norm: String,
    /// Largest differential norm across the one-step complexes.
    pub max_differential_norm: String,
}

/// The "divide by n" maps `f_n : Q -> Q`, `n <= N`, summed with the sup
/// norm. Each cokernel vanishes and the differentials are bounded by 1, but
/// the only right inverse of the sum is `diag(1, ..., N)`, whose norm grows
/// without bound. This is the finite trace of the infinite sum having a
/// nonzero cokernel: cohomology does not commute with sup-normed sums unless
/// the splittings are uniformly bounded.
pub fn sniper_demo(n: usize) -> Result<SniperReport> {
    if n == 0 {
        return Err(Error::Shape("N must be positive".into()));
    }
    let f = Rationals;
    let parts: Vec<NormedComplex<Rationals>> = (1..=n)
        .map(|k| {
            let d = ExactMatrix::diagonal(&f, &[BigRational::new(1.into(), (k as i64).into())]);
            NormedComplex::new(&f, Direction::Chain, vec![1, 1], vec![d], vec![NormKind::Linf; 2])
        })
        .collect::<Result<_>>()?;
    let cokernel_dims: Vec<usize> = parts.iter().map(|p| p.dims[0] - p.maps[0].rank()).collect();
    let refs: Vec<&NormedComplex<Rationals>> = parts.iter().collect();
    let (sum, bounds) = sum_complexes(&refs, NormKind::Linf)?;
    let big = &sum.maps[0];
    let right_inverse = forced_right_inverse(big)?;
    Ok(SniperReport {
        n,
        sum_of_cokernels: cokernel_dims.iter().sum(),
        cokernel_dims,
        forward_norm: format_rational(&big.linf_norm()?),
        inverse_norm: format_rational(&right_inverse.linf_norm()?),
        max_differential_norm: bounds.max_differential_norm[0]
            .as_ref()
            .map_or_else(|| "undefined".into(), format_rational),
    })
}

/// For a square map of full rank the right inverse is unique.
fn forced_right_inverse(m: &ExactMatrix<Rationals>) -> Result<ExactMatrix<Rationals>> {
    m.inverse().ok_or_else(|| Error::Shape("map has no right inverse".into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDump {
    pub direction: Direction,
    pub field: FieldTag,
    pub degrees: Vec<usize>,
    pub dims: Vec<usize>,
    pub norm_kinds: Vec<NormKind>,
    pub truncated: bool,
    /// Dense matrices of exact entries as `p/q` strings.
    pub matrices: Vec<Vec<Vec<String>>>,
}

impl<F: Field> NormedComplex<F> {
    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump {
            direction: self.direction,
            field: self.field.tag(),
            degrees: (0..self.dims.len()).collect(),
            dims: self.dims.clone(),
            norm_kinds: self.norm_kinds.clone(),
            truncated: self.truncated,
            matrices: self.maps.iter().map(ExactMatrix::to_strings).collect(),
        }
    }

    pub fn from_dump(field: &F, dump: &ComplexDump) -> Result<Self> {
        if dump.field != field.tag() {
            return Err(Error::Field(format!("dump is over {}, expected {}", dump.field, field.tag())));
        }
        let maps = dump
            .matrices
            .iter()
            .map(|m| {
                let entries = m
                    .iter()
                    .map(|r| r.iter().map(|s| crate::scalars::parse_rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let mat = ExactMatrix::from_rationals(field, &entries)?;
                Ok(mat)
            })
            .collect::<Result<Vec<_>>>()?;
        // Empty dense matrices lose their width; rebuild zero maps from dims.
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(n, m)| {
                let (rows, cols) = match dump.direction {
                    Direction::Chain => (dump.dims[n], dump.dims[n + 1]),
                    Direction::Cochain => (dump.dims[n + 1], dump.dims[n]),
                };
                if m.rows() == rows && m.cols() == cols {
                    m
                } else if m.is_zero() {
                    ExactMatrix::zero(field, rows, cols)
                } else {
                    m
                }
            })
            .collect();
        Ok(NormedComplex::new(field, dump.direction, dump.dims.clone(), maps, dump.norm_kinds.clone())?
            .with_truncated(dump.truncated))
    }
}
