//! Finite-dimensional commutative differential graded algebras, used as
//! models for the basic complex of the orbit foliation.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::CochainComplex;
use crate::linalg::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("invalid basic model: {0}")]
    Invalid(CdgaValidation),
    #[error("a basic model needs a degree-0 unit")]
    MissingUnit,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("degree {degree} exceeds top degree {top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("expected a vector of length {expected}, found {found}")]
    Length { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }
}

/// A CDGA with a finite basis `b_0, …, b_{n-1}`. Elements are coordinate
/// vectors of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicModel {
    generators: Vec<Generator>,
    unit: usize,
    top_degree: usize,
    // product[i][j] = b_i · b_j
    product: Vec<Vec<Vec<Rational>>>,
    // column j = d(b_j)
    differential: RationalMatrix,
}

impl BasicModel {
    /// Raw constructor from a full product table. Nothing beyond shapes is
    /// checked; see [`validate_cdga`].
    pub fn new(
        generators: Vec<Generator>,
        unit: usize,
        top_degree: usize,
        product: Vec<Vec<Vec<Rational>>>,
        differential: RationalMatrix,
    ) -> Result<Self, CdgaError> {
        let n = generators.len();
        if n == 0 || unit >= n {
            return Err(CdgaError::MissingUnit);
        }
        if product.len() != n {
            return Err(CdgaError::Length {
                expected: n,
                found: product.len(),
            });
        }
        for row in &product {
            if row.len() != n {
                return Err(CdgaError::Length {
                    expected: n,
                    found: row.len(),
                });
            }
            for v in row {
                if v.len() != n {
                    return Err(CdgaError::Length {
                        expected: n,
                        found: v.len(),
                    });
                }
            }
        }
        if differential.rows() != n || differential.cols() != n {
            return Err(CdgaError::Length {
                expected: n,
                found: differential.rows(),
            });
        }
        Ok(Self {
            generators,
            unit,
            top_degree,
            product,
            differential,
        })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree(&self, i: usize) -> usize {
        self.generators[i].degree
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Basis indices of the given degree, in declaration order.
    pub fn basis_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        &self.product[i][j]
    }

    pub fn differential(&self) -> &RationalMatrix {
        &self.differential
    }

    pub fn d_of_basis(&self, i: usize) -> Vec<Rational> {
        self.differential.column(i)
    }

    pub fn d(&self, x: &[Rational]) -> Vec<Rational> {
        self.differential.mul_vec(x)
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (o, p) in out.iter_mut().zip(&self.product[i][j]) {
                    if !p.is_zero() {
                        *o += &c * p;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    /// Degree of a nonzero homogeneous element, `None` if it is zero or mixed.
    pub fn homogeneous_degree(&self, x: &[Rational]) -> Option<usize> {
        let mut deg = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degree(i)),
                Some(d) if d != self.degree(i) => return None,
                _ => {}
            }
        }
        deg
    }

    /// The basic complex `(B, d)` graded by degree.
    pub fn complex(&self) -> CochainComplex {
        let by_degree: Vec<Vec<usize>> = (0..=self.top_degree).map(|k| self.basis_of_degree(k)).collect();
        let dims = by_degree.iter().map(Vec::len).collect();
        let differentials = (0..self.top_degree)
            .map(|k| {
                let (src, dst) = (&by_degree[k], &by_degree[k + 1]);
                let mut m = RationalMatrix::zeros(dst.len(), src.len());
                for (c, &j) in src.iter().enumerate() {
                    for (r, &i) in dst.iter().enumerate() {
                        m.set(r, c, self.differential.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        CochainComplex::new(dims, differentials).expect("validated model has d∘d = 0")
    }
}

/// Graded tensor product `A ⊗ B`, with the Koszul sign
/// `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'`.
pub fn tensor(a: &BasicModel, b: &BasicModel) -> BasicModel {
    let (m, n) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| i * n + j;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let short_name = |&(i, j): &(usize, usize)| {
        let (x, y) = (&a.generators[i].name, &b.generators[j].name);
        if i == a.unit {
            y.clone()
        } else if j == b.unit {
            x.clone()
        } else {
            format!("{x}.{y}")
        }
    };
    let mut names: Vec<String> = pairs.iter().map(short_name).collect();
    let mut distinct = names.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < names.len() {
        names = pairs
            .iter()
            .map(|&(i, j)| format!("{}.{}", a.generators[i].name, b.generators[j].name))
            .collect();
    }
    let generators = pairs
        .iter()
        .zip(names)
        .map(|(&(i, j), name)| Generator::new(name, a.degree(i) + b.degree(j)))
        .collect();
    let zero = vec![Rational::zero(); m * n];
    let mut product = vec![vec![zero.clone(); m * n]; m * n];
    for i in 0..m {
        for j in 0..n {
            for k in 0..m {
                for l in 0..n {
                    let negative = b.degree(j) * a.degree(k) % 2 == 1;
                    let out = &mut product[idx(i, j)][idx(k, l)];
                    for (s, x) in a.product[i][k].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (t, y) in b.product[j][l].iter().enumerate() {
                            if y.is_zero() {
                                continue;
                            }
                            let c = x * y;
                            out[idx(s, t)] += if negative { -c } else { c };
                        }
                    }
                }
            }
        }
    }
    let mut differential = RationalMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let col = idx(i, j);
            for s in 0..m {
                let x = a.differential.get(s, i);
                if !x.is_zero() {
                    differential.add_to(idx(s, j), col, x);
                }
            }
            let negative = a.degree(i) % 2 == 1;
            for t in 0..n {
                let y = b.differential.get(t, j);
                if !y.is_zero() {
                    let y = if negative { -y.clone() } else { y.clone() };
                    differential.add_to(idx(i, t), col, &y);
                }
            }
        }
    }
    BasicModel {
        generators,
        unit: idx(a.unit, b.unit),
        top_degree: a.top_degree + b.top_degree,
        product,
        differential,
    }
}

/// Assembles a [`BasicModel`] from sparse declarations: generators,
/// products `b_i · b_j` for some ordered pairs, and differentials of some
/// generators. Undeclared products and differentials are zero, except the
/// unit products, which default to `1 · b = b · 1 = b`. A product declared
/// for `(i, j)` determines `(j, i)` by graded commutativity.
#[derive(Debug, Clone, Default)]
pub struct BasicModelBuilder {
    generators: Vec<Generator>,
    unit: Option<String>,
    top_degree: Option<usize>,
    products: Vec<(usize, usize, Vec<Rational>)>,
    differentials: Vec<(usize, Vec<Rational>)>,
}

impl BasicModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(mut self, name: &str, degree: usize) -> Self {
        self.generators.push(Generator::new(name, degree));
        self
    }

    pub fn unit(mut self, name: &str) -> Self {
        self.unit = Some(name.to_string());
        self
    }

    pub fn top_degree(mut self, top: usize) -> Self {
        self.top_degree = Some(top);
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CdgaError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| CdgaError::UnknownGenerator(name.to_string()))
    }

    /// `b_i · b_j = value`, with `value` in basis coordinates.
    pub fn product(mut self, i: usize, j: usize, value: Vec<Rational>) -> Self {
        self.products.push((i, j, value));
        self
    }

    /// `d b_i = value`.
    pub fn differential(mut self, i: usize, value: Vec<Rational>) -> Self {
        self.differentials.push((i, value));
        self
    }

    /// Convenience for integer combinations by name: `&[("ab", 1)]`.
    pub fn combination(&self, terms: &[(&str, i64)]) -> Result<Vec<Rational>, CdgaError> {
        let mut v = vec![Rational::zero(); self.generators.len()];
        for (name, c) in terms {
            v[self.index_of(name)?] += crate::linalg::q(*c);
        }
        Ok(v)
    }

    pub fn product_by_name(self, a: &str, b: &str, terms: &[(&str, i64)]) -> Result<Self, CdgaError> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let v = self.combination(terms)?;
        Ok(self.product(i, j, v))
    }

    pub fn differential_by_name(self, a: &str, terms: &[(&str, i64)]) -> Result<Self, CdgaError> {
        let i = self.index_of(a)?;
        let v = self.combination(terms)?;
        Ok(self.differential(i, v))
    }

    pub fn build(self) -> Result<BasicModel, CdgaError> {
        let n = self.generators.len();
        let mut seen = HashMap::new();
        for g in &self.generators {
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(CdgaError::DuplicateGenerator(g.name.clone()));
            }
        }
        let unit = match &self.unit {
            Some(name) => self.index_of(name)?,
            None => self
                .generators
                .iter()
                .position(|g| g.degree == 0)
                .ok_or(CdgaError::MissingUnit)?,
        };
        let top_degree = self
            .top_degree
            .unwrap_or_else(|| self.generators.iter().map(|g| g.degree).max().unwrap_or(0));
        let zero = vec![Rational::zero(); n];
        let mut table: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; n]; n];
        let mut violations = Vec::new();
        for (i, j, v) in &self.products {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || v.len() != n {
                return Err(CdgaError::Length {
                    expected: n,
                    found: v.len(),
                });
            }
            match &table[i][j] {
                Some(prev) if prev != v => violations.push(CdgaViolation::ConflictingProduct { i, j }),
                _ => table[i][j] = Some(v.clone()),
            }
        }
        let mut product = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let sign_negative = self.generators[i].degree * self.generators[j].degree % 2 == 1;
                let mirrored = table[j][i].as_ref().map(|v| {
                    if sign_negative {
                        v.iter().map(|x| -x.clone()).collect()
                    } else {
                        v.clone()
                    }
                });
                product[i][j] = match (&table[i][j], mirrored) {
                    (Some(v), Some(m)) => {
                        if i < j && v != &m {
                            violations.push(CdgaViolation::ConflictingProduct { i, j });
                        }
                        v.clone()
                    }
                    (Some(v), None) => v.clone(),
                    (None, Some(m)) => m,
                    (None, None) if i == unit => {
                        let mut e = zero.clone();
                        e[j] = Rational::one();
                        e
                    }
                    (None, None) if j == unit => {
                        let mut e = zero.clone();
                        e[i] = Rational::one();
                        e
                    }
                    (None, None) => zero.clone(),
                };
            }
        }
        let mut differential = RationalMatrix::zeros(n, n);
        let mut declared_d = vec![false; n];
        for (i, v) in &self.differentials {
            if *i >= n || v.len() != n {
                return Err(CdgaError::Length {
                    expected: n,
                    found: v.len(),
                });
            }
            if declared_d[*i] && differential.column(*i) != *v {
                violations.push(CdgaViolation::ConflictingDifferential { i: *i });
            }
            declared_d[*i] = true;
            for (r, x) in v.iter().enumerate() {
                differential.set(r, *i, x.clone());
            }
        }
        if !violations.is_empty() {
            return Err(CdgaError::Invalid(CdgaValidation {
                names: self.generators.iter().map(|g| g.name.clone()).collect(),
                violations,
            }));
        }
        BasicModel::new(self.generators, unit, top_degree, product, differential)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdgaViolation {
    UnitDegree,
    DegreeBound { i: usize },
    ProductDegree { i: usize, j: usize },
    DifferentialDegree { i: usize },
    GradedCommutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, k: usize },
    UnitLaw { i: usize },
    Leibniz { i: usize, j: usize },
    DSquared { i: usize },
    ConflictingProduct { i: usize, j: usize },
    ConflictingDifferential { i: usize },
}

/// Itemized result of [`validate_cdga`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CdgaValidation {
    names: Vec<String>,
    pub violations: Vec<CdgaViolation>,
}

impl CdgaValidation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, v: &CdgaViolation) -> String {
        let n = |i: &usize| self.names.get(*i).cloned().unwrap_or_else(|| format!("#{i}"));
        match v {
            CdgaViolation::UnitDegree => "unit is not of degree 0".into(),
            CdgaViolation::DegreeBound { i } => format!("{} exceeds the top degree", n(i)),
            CdgaViolation::ProductDegree { i, j } => {
                format!("{}·{} is not homogeneous of the expected degree", n(i), n(j))
            }
            CdgaViolation::DifferentialDegree { i } => format!("d {} does not have degree +1", n(i)),
            CdgaViolation::GradedCommutativity { i, j } => {
                format!("graded commutativity fails for ({}, {})", n(i), n(j))
            }
            CdgaViolation::Associativity { i, j, k } => {
                format!("associativity fails for ({}, {}, {})", n(i), n(j), n(k))
            }
            CdgaViolation::UnitLaw { i } => format!("unit law fails for {}", n(i)),
            CdgaViolation::Leibniz { i, j } => format!("Leibniz rule fails for ({}, {})", n(i), n(j)),
            CdgaViolation::DSquared { i } => format!("d∘d is nonzero on {}", n(i)),
            CdgaViolation::ConflictingProduct { i, j } => {
                format!("conflicting product entries for ({}, {})", n(i), n(j))
            }
            CdgaViolation::ConflictingDifferential { i } => {
                format!("conflicting differential entries for {}", n(i))
            }
        }
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| self.describe(v)).collect()
    }
}

impl fmt::Display for CdgaValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.messages().join("; "))
        }
    }
}

/// Checks every CDGA axiom exactly on the basis.
pub fn validate_cdga(b: &BasicModel) -> CdgaValidation {
    let n = b.dim();
    let mut violations = Vec::new();
    if b.degree(b.unit) != 0 {
        violations.push(CdgaViolation::UnitDegree);
    }
    for i in 0..n {
        if b.degree(i) > b.top_degree {
            violations.push(CdgaViolation::DegreeBound { i });
        }
    }
    let check_degree = |v: &[Rational], deg: usize| {
        v.iter()
            .enumerate()
            .all(|(t, c)| c.is_zero() || b.degree(t) == deg)
    };
    for i in 0..n {
        for j in 0..n {
            if !check_degree(&b.product[i][j], b.degree(i) + b.degree(j)) {
                violations.push(CdgaViolation::ProductDegree { i, j });
            }
        }
        if !check_degree(&b.d_of_basis(i), b.degree(i) + 1) {
            violations.push(CdgaViolation::DifferentialDegree { i });
        }
    }
    for i in 0..n {
        for j in i..n {
            let negative = b.degree(i) * b.degree(j) % 2 == 1;
            let expected: Vec<Rational> = b.product[j][i]
                .iter()
                .map(|x| if negative { -x.clone() } else { x.clone() })
                .collect();
            if b.product[i][j] != expected {
                violations.push(CdgaViolation::GradedCommutativity { i, j });
            }
        }
    }
    for i in 0..n {
        let e = b.basis_vector(i);
        if b.product[b.unit][i] != e || b.product[i][b.unit] != e {
            violations.push(CdgaViolation::UnitLaw { i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = &b.product[i][j];
            for k in 0..n {
                let left = b.mul(ij, &b.basis_vector(k));
                let right = b.mul(&b.basis_vector(i), &b.product[j][k]);
                if left != right {
                    violations.push(CdgaViolation::Associativity { i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        let (ei, di) = (b.basis_vector(i), b.d_of_basis(i));
        for j in 0..n {
            let (ej, dj) = (b.basis_vector(j), b.d_of_basis(j));
            let lhs = b.d(&b.product[i][j]);
            let mut rhs = b.mul(&di, &ej);
            let second = b.mul(&ei, &dj);
            let negative = b.degree(i) % 2 == 1;
            for (r, s) in rhs.iter_mut().zip(second) {
                if negative {
                    *r -= s;
                } else {
                    *r += s;
                }
            }
            if lhs != rhs {
                violations.push(CdgaViolation::Leibniz { i, j });
            }
        }
        if b.d(&di).iter().any(|x| !x.is_zero()) {
            violations.push(CdgaViolation::DSquared { i });
        }
    }
    CdgaValidation {
        names: b.generators.iter().map(|g| g.name.clone()).collect(),
        violations,
    }
}

pub(crate) fn ensure_valid(b: &BasicModel) -> Result<(), CdgaError> {
    let report = validate_cdga(b);
    if report.passed() {
        Ok(())
    } else {
        Err(CdgaError::Invalid(report))
    }
}

/// Betti numbers `b_0, …, b_{top}` of `(B, d)`.
pub fn basic_cohomology(b: &BasicModel) -> Result<Vec<usize>, CdgaError> {
    ensure_valid(b)?;
    Ok(b.complex().betti())
}

/// Whether the top basic cohomology in degree `q` is one-dimensional.
pub fn check_homological_orientability(b: &BasicModel, q: usize) -> Result<bool, CdgaError> {
    if q > b.top_degree() {
        return Err(CdgaError::DegreeOutOfRange {
            degree: q,
            top: b.top_degree(),
        });
    }
    Ok(basic_cohomology(b)?[q] == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::samples::{circle, point, sphere2, sphere3, torus2};

    fn killed_top() -> BasicModel {
        BasicModelBuilder::new()
            .generator("one", 0)
            .generator("x", 1)
            .generator("y", 2)
            .differential_by_name("x", &[("y", 1)])
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_cdga(&point()).passed());
        assert!(validate_cdga(&sphere2()).passed());
        assert!(validate_cdga(&torus2()).passed());
        assert!(validate_cdga(&sphere3()).passed());
        assert!(validate_cdga(&circle()).passed());
        assert!(validate_cdga(&killed_top()).passed());
    }

    #[test]
    fn torus_products_follow_graded_commutativity() {
        let t = torus2();
        let (a, b, ab) = (t.index_of("a").unwrap(), t.index_of("b").unwrap(), t.index_of("ab").unwrap());
        assert_eq!(t.basis_product(b, a), t.mul(&t.basis_vector(b), &t.basis_vector(a)).as_slice());
        assert_eq!(t.basis_product(b, a)[ab], q(-1));
        assert!(t.basis_product(a, a).iter().all(Zero::is_zero));
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(basic_cohomology(&sphere2()).unwrap(), vec![1, 0, 1]);
        assert_eq!(basic_cohomology(&torus2()).unwrap(), vec![1, 2, 1]);
        assert_eq!(basic_cohomology(&killed_top()).unwrap(), vec![1, 0, 0]);
        assert_eq!(basic_cohomology(&point()).unwrap(), vec![1]);
    }

    #[test]
    fn orientability_examples() {
        assert!(check_homological_orientability(&sphere2(), 2).unwrap());
        assert!(check_homological_orientability(&torus2(), 2).unwrap());
        assert!(!check_homological_orientability(&killed_top(), 2).unwrap());
        assert!(matches!(
            check_homological_orientability(&sphere2(), 3),
            Err(CdgaError::DegreeOutOfRange { degree: 3, top: 2 })
        ));
    }

    #[test]
    fn leibniz_violation_is_reported() {
        // d(1) = t breaks the Leibniz rule on (1, 1) while d∘d stays zero
        let b = BasicModelBuilder::new()
            .generator("one", 0)
            .generator("t", 1)
            .generator("v", 2)
            .generator("tv", 3)
            .product_by_name("t", "v", &[("tv", 1)])
            .unwrap()
            .differential_by_name("one", &[("t", 1)])
            .unwrap()
            .build()
            .unwrap();
        let report = validate_cdga(&b);
        assert!(report.violations.contains(&CdgaViolation::Leibniz { i: 0, j: 0 }));
        assert!(!report.violations.iter().any(|v| matches!(v, CdgaViolation::DSquared { .. })));
        assert!(report.messages().iter().any(|m| m == "Leibniz rule fails for (one, one)"));
        assert!(matches!(basic_cohomology(&b), Err(CdgaError::Invalid(_))));
    }

    #[test]
    fn raw_table_violations() {
        // b·a = +ab breaks graded commutativity for degree-1 a, b
        let t = torus2();
        let n = t.dim();
        let mut product: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|i| (0..n).map(|j| t.basis_product(i, j).to_vec()).collect())
            .collect();
        let (a, b) = (t.index_of("a").unwrap(), t.index_of("b").unwrap());
        product[b][a] = product[a][b].clone();
        let broken = BasicModel::new(t.generators().to_vec(), t.unit(), 2, product, t.differential().clone()).unwrap();
        let report = validate_cdga(&broken);
        assert!(report.violations.contains(&CdgaViolation::GradedCommutativity { i: a, j: b }));
    }

    #[test]
    fn conflicting_declarations_are_rejected() {
        let err = BasicModelBuilder::new()
            .generator("one", 0)
            .generator("a", 1)
            .generator("b", 1)
            .generator("ab", 2)
            .product_by_name("a", "b", &[("ab", 1)])
            .unwrap()
            .product_by_name("b", "a", &[("ab", 1)])
            .unwrap()
            .build();
        match err {
            Err(CdgaError::Invalid(r)) => {
                assert_eq!(r.violations, vec![CdgaViolation::ConflictingProduct { i: 1, j: 2 }])
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn empty_model_is_rejected() {
        assert_eq!(BasicModelBuilder::new().build(), Err(CdgaError::MissingUnit));
        assert_eq!(
            BasicModel::new(vec![], 0, 0, vec![], RationalMatrix::zeros(0, 0)),
            Err(CdgaError::MissingUnit)
        );
    }

    #[test]
    fn tensor_products_are_valid_and_kunneth() {
        let cases = [
            (circle(), circle()),
            (sphere2(), circle()),
            (torus2(), sphere2()),
            (killed_top(), circle()),
        ];
        for (a, b) in cases {
            let t = tensor(&a, &b);
            assert!(validate_cdga(&t).passed(), "{}", validate_cdga(&t));
            let expected = crate::complex::convolve(
                &basic_cohomology(&a).unwrap(),
                &basic_cohomology(&b).unwrap(),
            );
            assert_eq!(basic_cohomology(&t).unwrap(), expected);
        }
        let t = tensor(&circle(), &circle());
        assert_eq!(t.dim(), torus2().dim());
        assert_eq!(basic_cohomology(&t).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn zero_differential_betti_equal_dimensions() {
        for b in [point(), circle(), sphere2(), torus2(), sphere3()] {
            let dims: Vec<usize> = (0..=b.top_degree()).map(|k| b.basis_of_degree(k).len()).collect();
            assert_eq!(basic_cohomology(&b).unwrap(), dims);
            // Poincaré duality spot check
            let betti = basic_cohomology(&b).unwrap();
            let rev: Vec<usize> = betti.iter().rev().copied().collect();
            assert_eq!(betti, rev);
        }
    }
}
