//! Spectral sequence of a bounded, decreasing filtration on a cochain
//! complex, computed page by page with exact subspace arithmetic.
//!
//! For page `r` and bidegree `(p, q)`, with `k = p + q`:
//!
//! ```text
//! Z_r^{p,q} = { x ∈ F^p C^k : dx ∈ F^{p+r} C^{k+1} }
//! D_r^{p,q} = Z_r^{p,q} ∩ (F^{p+1} C^k + d(F^{p-r+1} C^{k-1}))
//! E_r^{p,q} = Z_r^{p,q} / D_r^{p,q}
//! ```
//!
//! and `d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}` is induced by `d`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::cdga::{basic_cohomology, BasicModel, CdgaError};
use crate::complex::CochainComplex;
use crate::lie::{lie_cohomology, LieAlgebraData, LieError};
use crate::linalg::{
    image_of, induced_map, intersect, preimage, quotient_basis, rank, sum, LinalgError, Rational,
    RationalMatrix, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid filtration: {0}")]
    Filtration(String),
    #[error("E_∞ does not match the cohomology of the complex: {0}")]
    ConvergenceMismatch(ConvergenceReport),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

/// A cochain complex together with subspaces `F^p C^k` for `0 ≤ p ≤ k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: CochainComplex,
    levels: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    /// `levels[k][p] = F^p C^k` for `p = 0..=k+1`. Checks that the filtration
    /// is decreasing, bounded (`F^0 = C^k`, `F^{k+1} = 0`) and preserved by `d`.
    pub fn new(complex: CochainComplex, levels: Vec<Vec<Subspace>>) -> Result<Self, SpectralError> {
        let bad = |msg: String| Err(SpectralError::Filtration(msg));
        if levels.len() != complex.top_degree() + 1 {
            return bad(format!("expected {} degrees, got {}", complex.top_degree() + 1, levels.len()));
        }
        for (k, ls) in levels.iter().enumerate() {
            let n = complex.dim(k);
            if ls.len() != k + 2 {
                return bad(format!("degree {k}: expected {} levels, got {}", k + 2, ls.len()));
            }
            if ls.iter().any(|s| s.ambient_dim() != n) {
                return bad(format!("degree {k}: level in the wrong ambient space"));
            }
            if ls[0].dim() != n {
                return bad(format!("degree {k}: F^0 is not everything"));
            }
            if !ls[k + 1].is_zero() {
                return bad(format!("degree {k}: F^{} is not zero", k + 1));
            }
            for p in 0..=k {
                if !ls[p + 1].is_subspace_of(&ls[p]) {
                    return bad(format!("degree {k}: F^{} ⊄ F^{p}", p + 1));
                }
            }
        }
        let f = Self { complex, levels };
        for k in 0..f.complex.top_degree() {
            let d = f.complex.differential(k);
            for p in 0..=k + 1 {
                let image = image_of(&d, &f.levels[k][p])?;
                if !image.is_subspace_of(&f.level(k + 1, p as isize)) {
                    return bad(format!("d(F^{p} C^{k}) ⊄ F^{p} C^{}", k + 1));
                }
            }
        }
        Ok(f)
    }

    /// Filtration in which `F^p C^k` is spanned by the basis elements whose
    /// level is at least `p`. Levels must not exceed the degree.
    pub fn from_basis_levels(complex: CochainComplex, levels: Vec<Vec<usize>>) -> Result<Self, SpectralError> {
        if levels.len() != complex.top_degree() + 1 {
            return Err(SpectralError::Filtration("level list has the wrong length".into()));
        }
        let mut subspaces = Vec::with_capacity(levels.len());
        for (k, ls) in levels.iter().enumerate() {
            if ls.len() != complex.dim(k) {
                return Err(SpectralError::Filtration(format!("degree {k}: wrong number of levels")));
            }
            if ls.iter().any(|&p| p > k) {
                return Err(SpectralError::Filtration(format!("degree {k}: level exceeds degree")));
            }
            subspaces.push(
                (0..=k + 1)
                    .map(|p| {
                        Subspace::coordinate(
                            complex.dim(k),
                            ls.iter().enumerate().filter(|(_, &l)| l >= p).map(|(i, _)| i),
                        )
                    })
                    .collect(),
            );
        }
        Self::new(complex, subspaces)
    }

    /// The trivial filtration `F^0 = C`, `F^1 = 0`.
    pub fn trivial(complex: CochainComplex) -> Self {
        let levels = (0..=complex.top_degree())
            .map(|k| complex.dims()[k..=k].iter().map(|_| 0).cycle().take(complex.dim(k)).collect())
            .collect();
        Self::from_basis_levels(complex, levels).expect("trivial filtration is valid")
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    /// `F^p C^k`, extended by `F^p = C^k` for `p < 0` and `F^p = 0` for
    /// `p > k`.
    pub fn level(&self, k: usize, p: isize) -> Subspace {
        let n = self.complex.dim(k);
        if k >= self.levels.len() {
            return Subspace::zero(n);
        }
        if p <= 0 {
            return self.levels[k][0].clone();
        }
        let p = p as usize;
        self.levels[k].get(p).cloned().unwrap_or_else(|| Subspace::zero(n))
    }
}

/// One cell `E_r^{p,q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    /// Canonical lifts of a basis of `E_r^{p,q}` to `C^{p+q}`.
    pub representatives: Vec<Vec<Rational>>,
    pub cycles: Subspace,
    pub boundaries: Subspace,
}

/// `d_r` out of one cell, in the bases given by the representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageDifferential {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub matrix: RationalMatrix,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<(usize, usize), PageEntry>,
    /// Keyed by source; only differentials whose target lies in the grid.
    pub differentials: BTreeMap<(usize, usize), PageDifferential>,
}

impl Page {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.dim)
    }

    /// Signed-index version of [`Page::dim`]; zero off the grid.
    pub fn dim_at(&self, p: isize, q: isize) -> usize {
        if p < 0 || q < 0 {
            0
        } else {
            self.dim(p as usize, q as usize)
        }
    }

    /// Rank of `d_r` leaving `(p, q)`; zero if it leaves the grid.
    pub fn rank_from(&self, p: isize, q: isize) -> usize {
        if p < 0 || q < 0 {
            return 0;
        }
        self.differentials.get(&(p as usize, q as usize)).map_or(0, |d| d.rank)
    }

    pub fn all_differentials_zero(&self) -> bool {
        self.differentials.values().all(|d| d.rank == 0)
    }

    /// `Σ_{p+q=k} dim E_r^{p,q}` for `k = 0..=top`.
    pub fn total_dims(&self, top: usize) -> Vec<usize> {
        let mut out = vec![0; top + 1];
        for e in self.entries.values() {
            out[e.p + e.q] += e.dim;
        }
        out
    }

    /// Nonzero cells, in `(p, q)` order.
    pub fn nonzero(&self) -> Vec<((usize, usize), usize)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.dim > 0)
            .map(|(&k, e)| (k, e.dim))
            .collect()
    }

    pub fn max_p(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn max_q(&self) -> usize {
        self.entries.keys().map(|k| k.1).max().unwrap_or(0)
    }
}

fn cell(f: &FilteredComplex, r: usize, p: usize, q: usize) -> Result<PageEntry, SpectralError> {
    let k = p + q;
    let (ri, pi) = (r as isize, p as isize);
    let d = f.complex.differential(k);
    let cycles = intersect(&f.level(k, pi), &preimage(&d, &f.level(k + 1, pi + ri))?)?;
    let mut relations = f.level(k, pi + 1);
    if k > 0 {
        let incoming = image_of(&f.complex.differential(k - 1), &f.level(k - 1, pi - ri + 1))?;
        relations = sum(&relations, &incoming)?;
    }
    let boundaries = intersect(&cycles, &relations)?;
    let representatives = quotient_basis(&cycles, &boundaries)?;
    Ok(PageEntry {
        p,
        q,
        dim: representatives.len(),
        representatives,
        cycles,
        boundaries,
    })
}

/// Computes `E_r` and `d_r` for every cell of the grid `p + q ≤ top`.
pub fn page(f: &FilteredComplex, r: usize) -> Result<Page, SpectralError> {
    let top = f.complex.top_degree();
    let grid: Vec<(usize, usize)> = (0..=top).flat_map(|k| (0..=k).map(move |p| (p, k - p))).collect();
    let entries: BTreeMap<(usize, usize), PageEntry> = grid
        .par_iter()
        .map(|&(p, q)| cell(f, r, p, q).map(|e| ((p, q), e)))
        .collect::<Result<_, _>>()?;
    let differentials: BTreeMap<(usize, usize), PageDifferential> = grid
        .par_iter()
        .filter(|&&(p, q)| p + q < top && q + 1 >= r)
        .map(|&(p, q)| {
            let target = (p + r, q + 1 - r);
            let (src, dst) = (&entries[&(p, q)], &entries[&target]);
            let matrix = induced_map(
                &f.complex.differential(p + q),
                &src.cycles,
                &src.boundaries,
                &dst.cycles,
                &dst.boundaries,
            )?;
            let rank = rank(&matrix);
            Ok((
                (p, q),
                PageDifferential {
                    source: (p, q),
                    target,
                    matrix,
                    rank,
                },
            ))
        })
        .collect::<Result<_, SpectralError>>()?;
    Ok(Page {
        r,
        entries,
        differentials,
    })
}

/// All pages up to stabilization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequence {
    pub pages: Vec<Page>,
    /// Smallest `r` with `d_{r'} = 0` for every `r' ≥ r`; `E_r = E_∞`.
    pub stabilization: usize,
    /// Spread of the nonzero columns of `E_0`; every `d_r` with `r` above it
    /// vanishes for degree reasons.
    pub width: usize,
    pub top_degree: usize,
}

impl SpectralSequence {
    pub fn e_infinity(&self) -> &Page {
        &self.pages[self.stabilization]
    }

    /// `E_r`, using `E_∞` past stabilization.
    pub fn page(&self, r: usize) -> &Page {
        &self.pages[r.min(self.stabilization)]
    }
}

/// Computes pages `r = 0, 1, …` until `r` exceeds the filtration width, then
/// trims to the stabilization index and checks convergence.
pub fn run(f: &FilteredComplex) -> Result<SpectralSequence, SpectralError> {
    let e0 = page(f, 0)?;
    let columns: Vec<usize> = e0.nonzero().iter().map(|((p, _), _)| *p).collect();
    let width = match (columns.iter().min(), columns.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    let mut pages = vec![e0];
    for r in 1..=width + 1 {
        pages.push(page(f, r)?);
    }
    debug_assert!(pages[width + 1].all_differentials_zero());
    let stabilization = (0..pages.len())
        .rev()
        .take_while(|&r| pages[r].all_differentials_zero())
        .last()
        .unwrap_or(pages.len() - 1);
    pages.truncate(stabilization + 1);
    let ss = SpectralSequence {
        pages,
        stabilization,
        width,
        top_degree: f.complex.top_degree(),
    };
    check_convergence(&ss, &f.complex)?;
    Ok(ss)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    /// `Σ_{p+q=k} dim E_∞^{p,q}`
    pub e_infinity: Vec<usize>,
    /// `dim H^k` of the complex
    pub cohomology: Vec<usize>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.e_infinity == self.cohomology
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_∞ totals {:?} vs H^* {:?}", self.e_infinity, self.cohomology)
    }
}

/// `Σ_{p+q=k} dim E_∞^{p,q} = dim H^k(c)` for every `k`.
pub fn check_convergence(ss: &SpectralSequence, c: &CochainComplex) -> Result<ConvergenceReport, SpectralError> {
    let report = ConvergenceReport {
        e_infinity: ss.e_infinity().total_dims(c.top_degree()),
        cohomology: c.betti(),
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(SpectralError::ConvergenceMismatch(report))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2Cell {
    pub p: usize,
    pub q: usize,
    pub computed: usize,
    /// `b_p(B) · b_q(g)`
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2ShapeReport {
    pub basic_betti: Vec<usize>,
    pub lie_betti: Vec<usize>,
    pub cells: Vec<E2Cell>,
}

impl E2ShapeReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.computed == c.expected)
    }

    pub fn mismatches(&self) -> Vec<&E2Cell> {
        self.cells.iter().filter(|c| c.computed != c.expected).collect()
    }
}

/// Compares `E_2` against the constant-coefficient tensor shape
/// `dim E_2^{p,q} = b_p(B) · b_q(g)`. A mismatch is reported, not an error.
pub fn check_e2_shape(
    ss: &SpectralSequence,
    b: &BasicModel,
    g: &LieAlgebraData,
) -> Result<E2ShapeReport, SpectralError> {
    let basic_betti = basic_cohomology(b)?;
    let lie_betti = lie_cohomology(g)?;
    let e2 = ss.page(2);
    let mut cells = Vec::new();
    for (p, bp) in basic_betti.iter().enumerate() {
        for (q, bq) in lie_betti.iter().enumerate() {
            cells.push(E2Cell {
                p,
                q,
                computed: e2.dim(p, q),
                expected: bp * bq,
            });
        }
    }
    // cells outside the tensor grid must vanish as well
    for (&(p, q), e) in &e2.entries {
        if (p >= basic_betti.len() || q >= lie_betti.len()) && e.dim > 0 {
            cells.push(E2Cell {
                p,
                q,
                computed: e.dim,
                expected: 0,
            });
        }
    }
    Ok(E2ShapeReport {
        basic_betti,
        lie_betti,
        cells,
    })
}
