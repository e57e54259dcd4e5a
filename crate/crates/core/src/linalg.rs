//! Exact subspace arithmetic over the rationals.
//!
//! Every quotient that shows up later (cohomology, spectral sequence pages,
//! induced differentials) is reduced to the handful of operations here. All
//! subspaces are kept in a canonical form: the basis vectors are the nonzero
//! rows of the reduced row echelon form of any spanning set, so two equal
//! subspaces compare equal with `==`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inner subspace is not contained in the outer subspace")]
    NotContained,
    #[error("induced map is not well defined: {0}")]
    IllDefined(String),
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            entries.extend(row);
        }
        Self {
            rows: n,
            cols,
            entries,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Rational) {
        let e = &mut self.entries[i * self.cols + j];
        *e += x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Restriction of this map to the columns spanned by `basis`.
    pub fn apply_to_columns(&self, vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        vectors.iter().map(|v| self.mul_vec(v)).collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Reduced row echelon form of the given rows. Returns the nonzero rows
/// (pivot entries equal to one) and their pivot columns, leftmost first.
pub(crate) fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x *= &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let f = other[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Exact rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    // eliminate along the shorter side
    if m.rows() <= m.cols() {
        rref(m.row_vectors(), m.cols()).0.len()
    } else {
        rref(m.column_vectors(), m.rows()).0.len()
    }
}

/// A linear subspace of `Q^ambient_dim` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    // rows of the reduced echelon form; pivots are implied
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("dim", &self.dim())
            .field("basis", &self.basis())
            .finish()
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect();
        Self {
            ambient_dim,
            vectors,
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors, each of length `ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "vector length mismatch");
        }
        let (vectors, pivots) = rref(vectors, ambient_dim);
        Self {
            ambient_dim,
            vectors,
            pivots,
        }
    }

    /// Span of a set of standard basis vectors.
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Self {
            ambient_dim,
            vectors: idx.iter().map(|&i| unit_vector(ambient_dim, i)).collect(),
            pivots: idx,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Canonical basis vectors (reduced echelon rows).
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Canonical basis as the columns of an `ambient_dim x dim` matrix
    /// (reduced column echelon form).
    pub fn basis(&self) -> RationalMatrix {
        RationalMatrix::from_columns(&self.vectors, self.ambient_dim)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= c * y;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.vectors.iter().all(|v| other.contains(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Null space of `m` as a subspace of `Q^cols`.
pub fn kernel(m: &RationalMatrix) -> Subspace {
    let n = m.cols();
    let (rows, pivots) = rref(m.row_vectors(), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, vectors)
}

/// Column span of `m` as a subspace of `Q^rows`.
pub fn image(m: &RationalMatrix) -> Subspace {
    Subspace::span(m.rows(), m.column_vectors())
}

/// Image of a subspace under `m`.
pub fn image_of(m: &RationalMatrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    if m.cols() != s.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.cols(),
            found: s.ambient_dim(),
        });
    }
    Ok(Subspace::span(m.rows(), m.apply_to_columns(s.vectors())))
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.check_ambient(b)?;
    let mut vectors = a.vectors.clone();
    vectors.extend(b.vectors.iter().cloned());
    Ok(Subspace::span(a.ambient_dim, vectors))
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.check_ambient(b)?;
    let n = a.ambient_dim;
    let (da, db) = (a.dim(), b.dim());
    if da == 0 || db == 0 {
        return Ok(Subspace::zero(n));
    }
    // x = A u = B w  <=>  (u, w) in ker [A | -B]
    let mut stacked = RationalMatrix::zeros(n, da + db);
    for (j, v) in a.vectors.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            stacked.set(i, j, x.clone());
        }
    }
    for (j, v) in b.vectors.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            stacked.set(i, da + j, -x.clone());
        }
    }
    let relations = kernel(&stacked);
    let vectors: Vec<Vec<Rational>> = relations
        .vectors()
        .iter()
        .map(|rel| {
            let mut x = vec![Rational::zero(); n];
            for (c, v) in rel[..da].iter().zip(&a.vectors) {
                if c.is_zero() {
                    continue;
                }
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += c * vi;
                }
            }
            x
        })
        .collect();
    let out = Subspace::span(n, vectors);
    // Grassmann: dim(a ∩ b) = dim a + dim b - dim(a + b)
    assert_eq!(
        out.dim() + sum(a, b)?.dim(),
        da + db,
        "intersection failed the Grassmann identity"
    );
    Ok(out)
}

/// `{ v : m v ∈ s }`.
pub fn preimage(m: &RationalMatrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    if m.rows() != s.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: s.ambient_dim(),
        });
    }
    // rows of `annihilator` cut out s
    let annihilator = kernel(&RationalMatrix::from_rows(
        s.vectors().to_vec(),
        s.ambient_dim(),
    ));
    let constraints = RationalMatrix::from_rows(annihilator.vectors().to_vec(), m.rows());
    Ok(kernel(&constraints.mul(m)))
}

pub fn quotient_dim(outer: &Subspace, inner: &Subspace) -> Result<usize, LinalgError> {
    outer.check_ambient(inner)?;
    if !inner.is_subspace_of(outer) {
        return Err(LinalgError::NotContained);
    }
    Ok(outer.dim() - inner.dim())
}

/// Canonical representatives of a basis of `outer / inner`: the canonical
/// basis vectors of `outer` that are independent modulo `inner` and the
/// previously chosen ones, taken in order.
pub fn quotient_basis(outer: &Subspace, inner: &Subspace) -> Result<Vec<Vec<Rational>>, LinalgError> {
    outer.check_ambient(inner)?;
    if !inner.is_subspace_of(outer) {
        return Err(LinalgError::NotContained);
    }
    let mut reducer = EchelonReducer::new(outer.ambient_dim());
    for v in inner.vectors() {
        reducer.insert(v.clone());
    }
    let mut reps = Vec::with_capacity(outer.dim() - inner.dim());
    for v in outer.vectors() {
        if reducer.insert(v.clone()) {
            reps.push(v.clone());
        }
    }
    Ok(reps)
}

/// Matrix of the map `src_outer / src_inner -> dst_outer / dst_inner`
/// induced by `m`, written in the bases returned by [`quotient_basis`].
pub fn induced_map(
    m: &RationalMatrix,
    src_outer: &Subspace,
    src_inner: &Subspace,
    dst_outer: &Subspace,
    dst_inner: &Subspace,
) -> Result<RationalMatrix, LinalgError> {
    if m.cols() != src_outer.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.cols(),
            found: src_outer.ambient_dim(),
        });
    }
    if m.rows() != dst_outer.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: dst_outer.ambient_dim(),
        });
    }
    for v in src_outer.vectors() {
        if !dst_outer.contains(&m.mul_vec(v)) {
            return Err(LinalgError::IllDefined(
                "image of the source leaves the target subspace".into(),
            ));
        }
    }
    for v in src_inner.vectors() {
        if !dst_inner.contains(&m.mul_vec(v)) {
            return Err(LinalgError::IllDefined(
                "source relations are not sent to target relations".into(),
            ));
        }
    }
    let src_reps = quotient_basis(src_outer, src_inner)?;
    let dst_reps = quotient_basis(dst_outer, dst_inner)?;
    let mut generators: Vec<Vec<Rational>> = dst_inner.vectors().to_vec();
    let offset = generators.len();
    generators.extend(dst_reps.iter().cloned());
    let images = m.apply_to_columns(&src_reps);
    let coords = solve_in_span(&generators, &images, m.rows())
        .ok_or_else(|| LinalgError::IllDefined("image not expressible in target basis".into()))?;
    let mut out = RationalMatrix::zeros(dst_reps.len(), src_reps.len());
    for (j, c) in coords.iter().enumerate() {
        for i in 0..dst_reps.len() {
            out.set(i, j, c[offset + i].clone());
        }
    }
    Ok(out)
}

/// Solves `G x = y` for each target, where the columns of `G` are the
/// linearly independent `generators`. Returns `None` if some target is not in
/// their span.
fn solve_in_span(
    generators: &[Vec<Rational>],
    targets: &[Vec<Rational>],
    n: usize,
) -> Option<Vec<Vec<Rational>>> {
    let g = generators.len();
    let t = targets.len();
    let mut rows = vec![vec![Rational::zero(); g + t]; n];
    for (j, v) in generators.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            rows[i][j] = x.clone();
        }
    }
    for (j, v) in targets.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            rows[i][g + j] = x.clone();
        }
    }
    let (reduced, pivots) = rref(rows, g + t);
    if pivots.iter().any(|&p| p >= g) {
        return None;
    }
    assert_eq!(pivots.len(), g, "generators must be independent");
    Some(
        (0..t)
            .map(|j| (0..g).map(|i| reduced[i][g + j].clone()).collect())
            .collect(),
    )
}

/// Incrementally maintained echelon basis used for independence tests.
struct EchelonReducer {
    n: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonReducer {
    fn new(n: usize) -> Self {
        Self {
            n,
            rows: Vec::new(),
        }
    }

    /// Adds `v` if it is independent of the current rows; reports whether it was.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "inverse of a non-square matrix");
    let rows = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend(unit_vector(n, i));
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, 2 * n);
    if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
        return None;
    }
    Some(RationalMatrix::from_rows(
        reduced.into_iter().map(|r| r[n..].to_vec()).collect(),
        n,
    ))
}
