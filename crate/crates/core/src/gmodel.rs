//! The total complex `Λ(η_1, …, η_s) ⊗ B` of a free isometric action.
//!
//! A [`GModel`] combines a Lie algebra `g`, a basic model `B`, and curvature
//! data `e_i ∈ B^2`. The differential on a monomial `η_I ⊗ b` is
//!
//! ```text
//! d(η_I b) = Σ_j (-1)^{j-1} (d01 η_{i_j} + e_{i_j}) η_{I \ i_j} b + (-1)^{|I|} η_I d_B b
//! ```
//!
//! where `d01 η_k = -d_g η̃_k = Σ_{a<b} c^k_{ab} η_a η_b`. The model is
//! rejected unless this squares to zero. Bidegrees are `(p, q)` with `p` the
//! basic degree and `q = |I|`; the filtration is by `p`.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cdga::{self, BasicModel, CdgaError};
use crate::complex::CochainComplex;
use crate::lie::{self, subsets, wedge, LieAlgebraData, LieError};
use crate::linalg::{Rational, RationalMatrix};
use crate::spectral::{FilteredComplex, SpectralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GModelError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error("expected {expected} curvature forms, found {found}")]
    CurvatureCount { expected: usize, found: usize },
    #[error("curvature form e{index} is not of pure degree 2")]
    CurvatureDegree { index: usize },
    #[error("curvature form e{index} has {found} coordinates, expected {expected}")]
    CurvatureLength { index: usize, expected: usize, found: usize },
    #[error("d∘d ≠ 0: d²({element}) = {value}")]
    NotAComplex { element: String, value: String },
    #[error("d has a component of bidegree ({dp}, {dq})")]
    UnexpectedComponent { dp: isize, dq: isize },
    #[error("element is not bihomogeneous")]
    NotHomogeneous,
    #[error("zero element has no filtration degree")]
    ZeroElement,
    #[error(transparent)]
    Filtration(#[from] SpectralError),
}

/// `η_I ⊗ b`; `eta` is strictly increasing and zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub eta: Vec<usize>,
    pub basic: usize,
}

/// A rational combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedElement {
    pub terms: Vec<(Monomial, Rational)>,
}

impl BigradedElement {
    pub fn monomial(eta: Vec<usize>, basic: usize) -> Self {
        Self {
            terms: vec![(Monomial { eta, basic }, Rational::from_integer(1.into()))],
        }
    }

    /// `(p, q)` shared by all nonzero terms.
    pub fn bidegree(&self, basic: &BasicModel) -> Result<(usize, usize), GModelError> {
        let mut out = None;
        for (m, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let bd = (basic.degree(m.basic), m.eta.len());
            match out {
                None => out = Some(bd),
                Some(prev) if prev != bd => return Err(GModelError::NotHomogeneous),
                _ => {}
            }
        }
        out.ok_or(GModelError::ZeroElement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModel {
    algebra: LieAlgebraData,
    basic: BasicModel,
    curvature: Vec<Vec<Rational>>,
    basis: Vec<Vec<Monomial>>,
    index: HashMap<Monomial, (usize, usize)>,
    complex: CochainComplex,
}

impl GModel {
    /// Validates the inputs and assembles the total complex. Fails if
    /// `d∘d ≠ 0`, reporting the first offending basis element.
    pub fn new(
        algebra: LieAlgebraData,
        basic: BasicModel,
        curvature: Vec<Vec<Rational>>,
    ) -> Result<Self, GModelError> {
        let report = lie::validate(&algebra);
        if !report.passed() {
            return Err(LieError::Invalid(report).into());
        }
        let report = cdga::validate_cdga(&basic);
        if !report.passed() {
            return Err(CdgaError::Invalid(report).into());
        }
        let s = algebra.dim();
        if curvature.len() != s {
            return Err(GModelError::CurvatureCount {
                expected: s,
                found: curvature.len(),
            });
        }
        for (index, e) in curvature.iter().enumerate() {
            if e.len() != basic.dim() {
                return Err(GModelError::CurvatureLength {
                    index: index + 1,
                    expected: basic.dim(),
                    found: e.len(),
                });
            }
            if e.iter().enumerate().any(|(t, c)| !c.is_zero() && basic.degree(t) != 2) {
                return Err(GModelError::CurvatureDegree { index: index + 1 });
            }
        }
        let top = s + basic.top_degree();
        let mut basis: Vec<Vec<Monomial>> = vec![Vec::new(); top + 1];
        for (k, slot) in basis.iter_mut().enumerate() {
            for p in 0..=k.min(basic.top_degree()) {
                let q = k - p;
                for eta in subsets(s, q) {
                    for b in basic.basis_of_degree(p) {
                        slot.push(Monomial { eta: eta.clone(), basic: b });
                    }
                }
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .flat_map(|(k, ms)| ms.iter().enumerate().map(move |(i, m)| (m.clone(), (k, i))))
            .collect();
        let mut model = Self {
            algebra,
            basic,
            curvature,
            basis,
            index,
            complex: CochainComplex::new(vec![1], vec![]).expect("trivial complex"),
        };
        let differentials: Vec<RationalMatrix> = (0..top).map(|k| model.assemble(k)).collect();
        for k in 0..top.saturating_sub(1) {
            let dd = differentials[k + 1].mul(&differentials[k]);
            if let Some(col) = (0..dd.cols()).find(|&j| (0..dd.rows()).any(|i| !dd.get(i, j).is_zero())) {
                return Err(GModelError::NotAComplex {
                    element: model.label(&model.basis[k][col]),
                    value: model.render(k + 2, &dd.column(col)),
                });
            }
        }
        let dims = model.basis.iter().map(Vec::len).collect();
        let bigrading = model
            .basis
            .iter()
            .map(|ms| ms.iter().map(|m| (model.basic.degree(m.basic), m.eta.len())).collect())
            .collect();
        model.complex = CochainComplex::new(dims, differentials)
            .and_then(|c| c.with_bigrading(bigrading))
            .expect("checked above");
        Ok(model)
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn basic(&self) -> &BasicModel {
        &self.basic
    }

    pub fn curvature(&self) -> &[Vec<Rational>] {
        &self.curvature
    }

    /// Basis of the total complex in degree `k`: ordered by basic degree,
    /// then `η`-subset (lexicographic), then basic basis order.
    pub fn basis(&self, k: usize) -> &[Monomial] {
        self.basis.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, m: &Monomial) -> Option<(usize, usize)> {
        self.index.get(m).copied()
    }

    pub fn label(&self, m: &Monomial) -> String {
        let eta: String = m.eta.iter().map(|i| format!("η{}", i + 1)).collect();
        let b = &self.basic.generators()[m.basic].name;
        match (eta.is_empty(), m.basic == self.basic.unit()) {
            (true, _) => b.clone(),
            (false, true) => eta,
            (false, false) => format!("{eta}·{b}"),
        }
    }

    /// Human-readable linear combination of degree-`k` basis elements.
    pub fn render(&self, k: usize, v: &[Rational]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(self.basis(k))
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| format!("{}·{}", c, self.label(m)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Vector of `x` in the degree-`k` basis.
    pub fn coordinates(&self, x: &BigradedElement) -> Result<(usize, Vec<Rational>), GModelError> {
        let (p, q) = x.bidegree(&self.basic)?;
        let k = p + q;
        let mut v = vec![Rational::zero(); self.basis(k).len()];
        for (m, c) in &x.terms {
            if c.is_zero() {
                continue;
            }
            let (_, i) = self.position(m).ok_or(GModelError::NotHomogeneous)?;
            v[i] += c;
        }
        Ok((k, v))
    }

    fn add_term(&self, out: &mut [Rational], eta: Vec<usize>, basic: &[Rational], coeff: &Rational, k: usize) {
        for (b, c) in basic.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = Monomial {
                eta: eta.clone(),
                basic: b,
            };
            let (deg, i) = self.index[&m];
            debug_assert_eq!(deg, k);
            out[i] += coeff * c;
        }
    }

    fn assemble(&self, k: usize) -> RationalMatrix {
        let src = &self.basis[k];
        let dst_dim = self.basis.get(k + 1).map_or(0, Vec::len);
        let generator_d: Vec<_> = (0..self.algebra.dim())
            .map(|i| lie::ce_on_generator(&self.algebra, i))
            .collect();
        let mut d = RationalMatrix::zeros(dst_dim, src.len());
        for (col, m) in src.iter().enumerate() {
            let mut out = vec![Rational::zero(); dst_dim];
            let b = self.basic.basis_vector(m.basic);
            for (pos, &i) in m.eta.iter().enumerate() {
                let odd = pos % 2 == 1;
                let mut rest = m.eta.clone();
                rest.remove(pos);
                // d01 η_i = -d_g η̃_i
                for (pair, coeff) in &generator_d[i] {
                    if let Some((negative, eta)) = wedge(pair, &rest) {
                        let c = if negative ^ odd { coeff.clone() } else { -coeff.clone() };
                        self.add_term(&mut out, eta, &b, &c, k + 1);
                    }
                }
                // e_i is even, so it moves past η_rest freely
                let eb = self.basic.mul(&self.curvature[i], &b);
                let sign = Rational::from_integer(if odd { (-1).into() } else { 1.into() });
                self.add_term(&mut out, rest, &eb, &sign, k + 1);
            }
            let db = self.basic.d_of_basis(m.basic);
            let sign = Rational::from_integer(if m.eta.len() % 2 == 1 { (-1).into() } else { 1.into() });
            self.add_term(&mut out, m.eta.clone(), &db, &sign, k + 1);
            for (row, x) in out.into_iter().enumerate() {
                if !x.is_zero() {
                    d.set(row, col, x);
                }
            }
        }
        d
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }
}

/// The total complex of the model (assembled and checked at construction).
pub fn build_total_complex(m: &GModel) -> &CochainComplex {
    m.complex()
}

/// The bidegree components of the total differential in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSplit {
    /// bidegree (0, 1): the Lie algebra direction
    pub d01: RationalMatrix,
    /// bidegree (1, 0): the basic differential
    pub d10: RationalMatrix,
    /// bidegree (2, -1): curvature
    pub d21: RationalMatrix,
}

impl DSplit {
    pub fn sum(&self) -> RationalMatrix {
        self.d01.add(&self.d10).add(&self.d21)
    }
}

/// Splits each `d_k` by the bidegree shift of its entries. Any entry that
/// is not of shift `(0,1)`, `(1,0)` or `(2,-1)` (in particular `(-1,2)`) is
/// an error.
pub fn decompose_d(m: &GModel) -> Result<Vec<DSplit>, GModelError> {
    let c = m.complex();
    let grading = c.bigrading().expect("total complex carries a bigrading");
    (0..c.top_degree())
        .map(|k| {
            let d = c.differential(k);
            let mut split = DSplit {
                d01: RationalMatrix::zeros(d.rows(), d.cols()),
                d10: RationalMatrix::zeros(d.rows(), d.cols()),
                d21: RationalMatrix::zeros(d.rows(), d.cols()),
            };
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let (p1, q1) = grading[k + 1][i];
                    let (p0, q0) = grading[k][j];
                    let shift = (p1 as isize - p0 as isize, q1 as isize - q0 as isize);
                    let target = match shift {
                        (0, 1) => &mut split.d01,
                        (1, 0) => &mut split.d10,
                        (2, -1) => &mut split.d21,
                        (dp, dq) => return Err(GModelError::UnexpectedComponent { dp, dq }),
                    };
                    target.set(i, j, x.clone());
                }
            }
            Ok(split)
        })
        .collect()
}

/// Filtration degree of a bihomogeneous element: its basic degree `p`. The
/// same number is recomputed from the contraction description (`x ∈ F^k`
/// iff `r - k + 1` leafwise contractions kill it) and the two must agree.
pub fn filtration_degree(m: &GModel, x: &BigradedElement) -> Result<usize, GModelError> {
    let (p, q) = x.bidegree(m.basic())?;
    let r = p + q;
    // a monomial with q η-factors survives exactly q contractions
    let max_q = x
        .terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, _)| t.eta.len())
        .max()
        .ok_or(GModelError::ZeroElement)?;
    let by_contraction = r - max_q;
    assert_eq!(by_contraction, p, "contraction filtration disagrees with basic degree");
    Ok(p)
}

/// The total complex filtered by basic degree.
pub fn as_filtered(m: &GModel) -> Result<FilteredComplex, GModelError> {
    let c = m.complex().clone();
    let levels = (0..=c.top_degree())
        .map(|k| m.basis(k).iter().map(|t| m.basic().degree(t.basic)).collect())
        .collect();
    Ok(FilteredComplex::from_basis_levels(c, levels)?)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eta: Vec<String> = self.eta.iter().map(|i| format!("η{}", i + 1)).collect();
        write!(f, "{}⊗b{}", eta.join(""), self.basic)
    }
}

/// Names the `(p, q)` cell of a monomial, for reports.
pub fn bidegree_of(m: &GModel, t: &Monomial) -> (usize, usize) {
    (m.basic().degree(t.basic), t.eta.len())
}
