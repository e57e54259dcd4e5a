//! Finite-dimensional Lie algebras given by structure constants, and their
//! Chevalley–Eilenberg cohomology.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::CochainComplex;
use crate::linalg::{inverse, rank, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("invalid Lie algebra: {0}")]
    Invalid(LieValidation),
    #[error("bracket index ({i}, {j}, {k}) outside dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("conflicting entries for the coefficient of ξ{k} in [ξ{i}, ξ{j}]")]
    ConflictingBracket { i: usize, j: usize, k: usize },
    #[error("dimension mismatch: algebra has dimension {algebra}, inner product {metric}")]
    DimensionMismatch { algebra: usize, metric: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
}

/// Structure constants `c[k][i][j]`, meaning `[ξ_i, ξ_j] = Σ_k c[k][i][j] ξ_k`.
/// Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    structure: Vec<Rational>,
    labels: Option<Vec<String>>,
}

impl LieAlgebraData {
    /// Raw constructor; `structure[k * dim * dim + i * dim + j] = c[k][i][j]`.
    /// Nothing is completed or checked here, see [`validate`].
    pub fn from_structure(dim: usize, structure: Vec<Rational>) -> Self {
        assert_eq!(structure.len(), dim * dim * dim, "structure tensor has wrong size");
        Self {
            dim,
            structure,
            labels: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_structure(dim, vec![Rational::zero(); dim * dim * dim])
    }

    /// Builds the algebra from bracket entries `(i, j, k, value)` giving the
    /// coefficient of `ξ_k` in `[ξ_i, ξ_j]`. The antisymmetric partner
    /// `[ξ_j, ξ_i]` is filled in; listing both with inconsistent values is an
    /// error.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self, LieError> {
        let mut declared: HashMap<(usize, usize, usize), Rational> = HashMap::new();
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::IndexOutOfRange { i, j, k, dim });
            }
            if let Some(prev) = declared.insert((i, j, k), v.clone()) {
                if &prev != v {
                    return Err(LieError::ConflictingBracket { i, j, k });
                }
            }
        }
        let mut g = Self::abelian(dim);
        for (&(i, j, k), v) in &declared {
            if i == j {
                // left for validate() to flag
                let a = g.idx(k, i, j);
                g.structure[a] = v.clone();
                continue;
            }
            let partner = -v.clone();
            if let Some(other) = declared.get(&(j, i, k)) {
                if other != &partner {
                    return Err(LieError::ConflictingBracket { i, j, k });
                }
            }
            let (a, b) = (g.idx(k, i, j), g.idx(k, j, i));
            g.structure[a] = v.clone();
            g.structure[b] = partner;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.dim + i) * self.dim + j
    }

    pub fn c(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.structure[self.idx(k, i, j)]
    }

    /// Coordinates of `[ξ_i, ξ_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim).map(|k| self.c(k, i, j).clone()).collect()
    }

    /// Bracket of two arbitrary elements given in coordinates.
    pub fn bracket_of(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(k, i, j);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieViolation {
    /// `c[k][i][j] != -c[k][j][i]`
    Antisymmetry { k: usize, i: usize, j: usize },
    /// Jacobi fails for `(ξ_i, ξ_j, ξ_k)` in the `ξ_l` coordinate.
    Jacobi { i: usize, j: usize, k: usize, l: usize },
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // reports use one-based indices, like the input format
        match *self {
            LieViolation::Antisymmetry { k, i, j } => {
                write!(f, "antisymmetry fails at (k={}, i={}, j={})", k + 1, i + 1, j + 1)
            }
            LieViolation::Jacobi { i, j, k, l } => write!(
                f,
                "Jacobi identity fails for (i={}, j={}, k={}) in coordinate l={}",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieValidation {
    pub violations: Vec<LieViolation>,
}

impl LieValidation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LieValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "ok");
        }
        let items: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Checks antisymmetry and the Jacobi identity exactly.
pub fn validate(g: &LieAlgebraData) -> LieValidation {
    let s = g.dim;
    let mut violations = Vec::new();
    for k in 0..s {
        for i in 0..s {
            for j in i..s {
                if g.c(k, i, j) != &-g.c(k, j, i).clone() {
                    violations.push(LieViolation::Antisymmetry { k, i, j });
                }
            }
        }
    }
    // the cyclic sum is alternating once antisymmetry holds, so i < j < k suffices
    for i in 0..s {
        for j in i + 1..s {
            for k in j + 1..s {
                for l in 0..s {
                    let mut acc = Rational::zero();
                    for m in 0..s {
                        acc += g.c(m, i, j) * g.c(l, m, k)
                            + g.c(m, j, k) * g.c(l, m, i)
                            + g.c(m, k, i) * g.c(l, m, j);
                    }
                    if !acc.is_zero() {
                        violations.push(LieViolation::Jacobi { i, j, k, l });
                    }
                }
            }
        }
    }
    LieValidation { violations }
}

fn ensure_valid(g: &LieAlgebraData) -> Result<(), LieError> {
    let report = validate(g);
    if report.passed() {
        Ok(())
    } else {
        Err(LieError::Invalid(report))
    }
}

/// Strictly increasing `q`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < q - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q <= n {
        go(0, n, q, &mut Vec::with_capacity(q), &mut out);
    }
    out
}

/// `η_a ∧ η_b = sign · η_{a ∪ b}` for sorted index lists; `None` if they overlap.
pub(crate) fn wedge(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            merged.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a's
            inversions += a.len() - i;
            merged.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((inversions % 2 == 1, merged))
}

/// Index of every subset of a given size within [`subsets`] order.
pub(crate) fn subset_index(n: usize) -> Vec<HashMap<Vec<usize>, usize>> {
    (0..=n)
        .map(|q| {
            subsets(n, q)
                .into_iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect()
        })
        .collect()
}

/// `d_g η_k = -Σ_{a<b} c[k][a][b] η_a ∧ η_b` as a list of `((a, b), coeff)`.
pub(crate) fn ce_on_generator(g: &LieAlgebraData, k: usize) -> Vec<([usize; 2], Rational)> {
    let mut out = Vec::new();
    for a in 0..g.dim {
        for b in a + 1..g.dim {
            let c = g.c(k, a, b);
            if !c.is_zero() {
                out.push(([a, b], -c.clone()));
            }
        }
    }
    out
}

/// The Chevalley–Eilenberg complex `(Λ^• g*, d_g)` on the basis of increasing
/// monomials `η_{i_1} ∧ … ∧ η_{i_q}`.
pub fn ce_complex(g: &LieAlgebraData) -> Result<CochainComplex, LieError> {
    ensure_valid(g)?;
    let s = g.dim;
    let index = subset_index(s);
    let generator_d: Vec<_> = (0..s).map(|k| ce_on_generator(g, k)).collect();
    let mut dims = Vec::with_capacity(s + 1);
    let mut differentials = Vec::with_capacity(s);
    for q in 0..=s {
        dims.push(index[q].len());
    }
    for q in 0..s {
        let sources = subsets(s, q);
        let mut d = RationalMatrix::zeros(dims[q + 1], dims[q]);
        for (col, monomial) in sources.iter().enumerate() {
            // derivation: Σ_j (-1)^j (d η_{i_j}) ∧ η_{I \ i_j}
            for (pos, &i) in monomial.iter().enumerate() {
                let mut rest = monomial.clone();
                rest.remove(pos);
                for (pair, coeff) in &generator_d[i] {
                    let Some((negative, target)) = wedge(pair, &rest) else {
                        continue;
                    };
                    let mut c = coeff.clone();
                    if negative ^ (pos % 2 == 1) {
                        c = -c;
                    }
                    d.add_to(index[q + 1][&target], col, &c);
                }
            }
        }
        differentials.push(d);
    }
    Ok(CochainComplex::new(dims, differentials).expect("d_g squares to zero for valid algebras"))
}

/// Betti numbers `b_0, …, b_s` of `H^•(g)`.
pub fn lie_cohomology(g: &LieAlgebraData) -> Result<Vec<usize>, LieError> {
    Ok(ce_complex(g)?.betti())
}

/// `dim g/[g,g]`, cross-checked against `b_1`.
pub fn abelianization_dim(g: &LieAlgebraData) -> Result<usize, LieError> {
    ensure_valid(g)?;
    let s = g.dim;
    let brackets: Vec<Vec<Rational>> = subsets(s, 2).iter().map(|p| g.bracket(p[0], p[1])).collect();
    let derived = if brackets.is_empty() {
        0
    } else {
        rank(&RationalMatrix::from_columns(&brackets, s))
    };
    let dim = s - derived;
    let b1 = lie_cohomology(g)?.get(1).copied().unwrap_or(0);
    assert_eq!(dim, b1, "b_1 disagrees with dim g/[g,g]");
    Ok(dim)
}

/// Rewrites `g` in the basis given by the columns of `p`:
/// `c'^l_{ab} = Σ (p⁻¹)_{lk} c^k_{ij} p_{ia} p_{jb}`. Returns `None` if `p` is
/// singular.
pub fn change_basis(g: &LieAlgebraData, p: &RationalMatrix) -> Option<LieAlgebraData> {
    let s = g.dim;
    assert_eq!((p.rows(), p.cols()), (s, s), "change of basis has the wrong shape");
    let p_inv = inverse(p)?;
    let basis = p.column_vectors();
    let mut structure = vec![Rational::zero(); s * s * s];
    for a in 0..s {
        for b in 0..s {
            let old = g.bracket_of(&basis[a], &basis[b]);
            for (l, x) in p_inv.mul_vec(&old).into_iter().enumerate() {
                structure[(l * s + a) * s + b] = x;
            }
        }
    }
    let mut out = LieAlgebraData::from_structure(s, structure);
    out.labels = g.labels.clone();
    Some(out)
}

/// Direct sum `g ⊕ h`, with the basis of `g` first.
pub fn direct_sum(g: &LieAlgebraData, h: &LieAlgebraData) -> LieAlgebraData {
    let (m, n) = (g.dim, h.dim);
    let mut out = LieAlgebraData::abelian(m + n);
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let x = out.idx(k, i, j);
                out.structure[x] = g.c(k, i, j).clone();
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let x = out.idx(m + k, m + i, m + j);
                out.structure[x] = h.c(k, i, j).clone();
            }
        }
    }
    out
}

/// A symmetric positive definite bilinear form on `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProductData {
    gram: RationalMatrix,
}

impl InnerProductData {
    pub fn new(gram: RationalMatrix) -> Result<Self, LieError> {
        if gram.rows() != gram.cols() {
            return Err(LieError::DimensionMismatch {
                algebra: gram.rows(),
                metric: gram.cols(),
            });
        }
        if gram != gram.transpose() {
            return Err(LieError::NotSymmetric);
        }
        if !is_positive_definite(&gram) {
            return Err(LieError::NotPositiveDefinite);
        }
        Ok(Self { gram })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            gram: RationalMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        crate::linalg::dot(x, &self.gram.mul_vec(y))
    }
}

/// Symmetric elimination without pivoting: every pivot is a ratio of
/// consecutive leading principal minors, so all must be positive.
fn is_positive_definite(m: &RationalMatrix) -> bool {
    let n = m.rows();
    let mut a = m.row_vectors();
    for c in 0..n {
        if !a[c][c].is_positive() {
            return false;
        }
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let sub = &f * &a[c][j];
                a[r][j] -= sub;
            }
        }
    }
    true
}

fn check_dims(g: &LieAlgebraData, m: &InnerProductData) -> Result<(), LieError> {
    if g.dim != m.dim() {
        return Err(LieError::DimensionMismatch {
            algebra: g.dim,
            metric: m.dim(),
        });
    }
    Ok(())
}

/// Infinitesimal bi-invariance: `⟨[x,y],z⟩ + ⟨y,[x,z]⟩ = 0` on basis triples.
pub fn check_ad_invariance(g: &LieAlgebraData, m: &InnerProductData) -> Result<bool, LieError> {
    check_dims(g, m)?;
    let s = g.dim;
    let basis = |i: usize| {
        let mut v = vec![Rational::zero(); s];
        v[i] = Rational::one();
        v
    };
    for x in 0..s {
        for y in 0..s {
            let xy = g.bracket(x, y);
            for z in 0..s {
                let xz = g.bracket(x, z);
                if !(m.eval(&xy, &basis(z)) + m.eval(&basis(y), &xz)).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Result of [`orthonormalize`]: the algebra rewritten in an orthogonal basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orthonormalized {
    pub algebra: LieAlgebraData,
    /// Columns are the new basis vectors in old coordinates.
    pub change_of_basis: RationalMatrix,
    /// Squared norms of the new basis vectors; `1` wherever the norm was a
    /// rational square and the vector could be normalized exactly.
    pub norms: Vec<Rational>,
}

impl Orthonormalized {
    pub fn is_orthonormal(&self) -> bool {
        self.norms.iter().all(One::is_one)
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Gram–Schmidt in index order, without square roots.
pub fn orthonormalize(g: &LieAlgebraData, m: &InnerProductData) -> Result<Orthonormalized, LieError> {
    check_dims(g, m)?;
    ensure_valid(g)?;
    let s = g.dim;
    let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(s);
    let mut norms = Vec::with_capacity(s);
    for k in 0..s {
        let mut u = vec![Rational::zero(); s];
        u[k] = Rational::one();
        let e = u.clone();
        for (prev, n) in basis.iter().zip(&norms) {
            let coeff = m.eval(&e, prev) / n;
            for (x, p) in u.iter_mut().zip(prev) {
                *x -= &coeff * p;
            }
        }
        let mut n = m.eval(&u, &u);
        if let Some(root) = rational_sqrt(&n) {
            for x in u.iter_mut() {
                *x /= &root;
            }
            n = Rational::one();
        }
        basis.push(u);
        norms.push(n);
    }
    let p = RationalMatrix::from_columns(&basis, s);
    let algebra = change_basis(g, &p).expect("Gram–Schmidt basis is invertible");
    ensure_valid(&algebra)?;
    Ok(Orthonormalized {
        algebra,
        change_of_basis: p,
        norms,
    })
}
