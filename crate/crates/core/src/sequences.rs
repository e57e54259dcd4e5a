//! Low-codimension consequences of the spectral sequence: the splitting over
//! a circle-like basic model and the Wang-type long exact sequences over
//! `S²`- and `S³`-like basic models.
//!
//! Exactness is checked through rank arithmetic. When only the columns
//! `p = 0` and `p = c` survive to `E_2`, the only possible differential is
//! `d_c : E_c^{0,k} -> E_c^{c,k-c+1}` and
//!
//! ```text
//! dim H^k = dim ker d_c^{(0,k)} + dim coker d_c^{(0,k-1)}
//! ```

use std::fmt;

use thiserror::Error;

use crate::cdga::{basic_cohomology, CdgaError};
use crate::gmodel::{as_filtered, GModel, GModelError};
use crate::lie::{abelianization_dim, lie_cohomology, LieError};
use crate::spectral::{run, SpectralError, SpectralSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("precondition failed: {}", failed_names(.checks))]
    PreconditionFailed { checks: Vec<NamedCheck> },
    #[error("unsupported codimension {0}")]
    Codimension(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Model(#[from] GModelError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

fn failed_names(checks: &[NamedCheck]) -> String {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(NamedCheck::negated)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A named yes/no check, e.g. `b_1(B) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl NamedCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// The name with its relation negated, for failure messages.
    pub fn negated(&self) -> String {
        self.name.replacen(" = ", " ≠ ", 1)
    }
}

impl fmt::Display for NamedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "pass" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "[{mark}] {}", self.name)
        } else {
            write!(f, "[{mark}] {} ({})", self.name, self.detail)
        }
    }
}

/// One degree of the sequence.
///
/// For codimension 1, `fiber = b_k(g)`, `shifted = b_{k-1}(g)` and both ranks
/// are zero. Otherwise `fiber = dim E_c^{0,k}`, `shifted = dim E_c^{c,k-c}`,
/// `rank_out` is the rank of `d_c` leaving `(0, k)` and `rank_in` the rank of
/// `d_c` landing in `(c, k-c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangRow {
    pub degree: usize,
    pub total: usize,
    pub fiber: usize,
    pub shifted: usize,
    pub rank_out: usize,
    pub rank_in: usize,
}

impl WangRow {
    pub fn predicted(&self) -> usize {
        (self.fiber - self.rank_out) + (self.shifted - self.rank_in)
    }

    pub fn passed(&self) -> bool {
        self.total == self.predicted()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangReport {
    pub codimension: usize,
    pub preconditions: Vec<NamedCheck>,
    pub rows: Vec<WangRow>,
    /// Structural checks beyond the per-degree identity.
    pub verdicts: Vec<NamedCheck>,
    pub notes: Vec<String>,
    pub stabilization: usize,
}

impl WangReport {
    pub fn passed(&self) -> bool {
        self.preconditions.iter().all(|c| c.passed)
            && self.rows.iter().all(WangRow::passed)
            && self.verdicts.iter().all(|c| c.passed)
    }

    pub fn total_betti(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.total).collect()
    }

    /// Ranks of the connecting maps `d_c^{(0,k)}`, by `k`.
    pub fn connecting_ranks(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.rank_out).collect()
    }
}

fn require(checks: Vec<NamedCheck>) -> Result<Vec<NamedCheck>, SequenceError> {
    if checks.iter().all(|c| c.passed) {
        Ok(checks)
    } else {
        Err(SequenceError::PreconditionFailed { checks })
    }
}

fn betti_check(b: &[usize], k: usize, want: usize) -> NamedCheck {
    let got = b.get(k).copied().unwrap_or(0);
    NamedCheck::new(format!("b_{k}(B) = {want}"), got == want, format!("b_{k}(B) = {got}"))
}

fn basic_shape(m: &GModel, c: usize) -> Result<Vec<NamedCheck>, SequenceError> {
    let b = basic_cohomology(m.basic())?;
    let top = m.basic().top_degree();
    let mut checks = vec![
        NamedCheck::new(format!("top degree(B) = {c}"), top == c, format!("top degree {top}")),
        betti_check(&b, 0, 1),
    ];
    // orientability
    checks.push(betti_check(&b, c, 1));
    for k in 1..c {
        checks.push(betti_check(&b, k, 0));
    }
    Ok(checks)
}

/// Nonzero columns of a page.
fn columns(ss: &SpectralSequence, r: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = ss.page(r).nonzero().iter().map(|((p, _), _)| *p).collect();
    cols.dedup();
    cols
}

fn two_column_identity(ss: &SpectralSequence, c: usize, totals: &[usize]) -> NamedCheck {
    let e = ss.e_infinity();
    let bad: Vec<usize> = (0..totals.len())
        .filter(|&k| totals[k] != e.dim_at(0, k as isize) + e.dim_at(c as isize, k as isize - c as isize))
        .collect();
    NamedCheck::new(
        format!("dim H^k = dim E_∞^{{0,k}} + dim E_∞^{{{c},k-{c}}}"),
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("fails in degrees {bad:?}")
        },
    )
}

/// `H^k(total) = b_k(g) + b_{k-1}(g)` over a circle-like basic model, with
/// degeneration at `E_2`.
pub fn codim1_split(m: &GModel) -> Result<WangReport, SequenceError> {
    let b = basic_cohomology(m.basic())?;
    let top = m.basic().top_degree();
    let preconditions = require(vec![
        NamedCheck::new("top degree(B) = 1", top == 1, format!("top degree {top}")),
        betti_check(&b, 0, 1),
        betti_check(&b, 1, 1),
    ])?;
    let ss = run(&as_filtered(m)?)?;
    let totals = m.complex().betti();
    let lie = lie_cohomology(m.algebra())?;
    let at = |k: isize| if k < 0 { 0 } else { lie.get(k as usize).copied().unwrap_or(0) };
    let rows = (0..totals.len())
        .map(|k| WangRow {
            degree: k,
            total: totals[k],
            fiber: at(k as isize),
            shifted: at(k as isize - 1),
            rank_out: 0,
            rank_in: 0,
        })
        .collect();
    let degenerate = ss.stabilization <= 2;
    let verdicts = vec![
        NamedCheck::new(
            "d_r = 0 for r ≥ 2",
            degenerate,
            format!("stabilizes at r = {}", ss.stabilization),
        ),
        two_column_identity(&ss, 1, &totals),
    ];
    Ok(WangReport {
        codimension: 1,
        preconditions,
        rows,
        verdicts,
        notes: vec!["the sequence degenerates at E_2".into()],
        stabilization: ss.stabilization,
    })
}

struct TwoColumn {
    preconditions: Vec<NamedCheck>,
    rows: Vec<WangRow>,
    verdicts: Vec<NamedCheck>,
    stabilization: usize,
}

fn two_column(m: &GModel, c: usize) -> Result<TwoColumn, SequenceError> {
    let preconditions = require(basic_shape(m, c)?)?;
    let ss = run(&as_filtered(m)?)?;
    let totals = m.complex().betti();
    let ec = ss.page(c);
    let rows = (0..totals.len())
        .map(|k| {
            let k = k as isize;
            let ci = c as isize;
            WangRow {
                degree: k as usize,
                total: totals[k as usize],
                fiber: ec.dim_at(0, k),
                shifted: ec.dim_at(ci, k - ci),
                rank_out: ec.rank_from(0, k),
                rank_in: ec.rank_from(0, k - 1),
            }
        })
        .collect();
    let cols = columns(&ss, 2);
    let verdicts = vec![
        NamedCheck::new(
            format!("E_2 supported in columns 0 and {c}"),
            cols.iter().all(|&p| p == 0 || p == c),
            format!("columns {cols:?}"),
        ),
        NamedCheck::new(
            format!("d_r = 0 for r > {c}"),
            ss.stabilization <= c + 1,
            format!("stabilizes at r = {}", ss.stabilization),
        ),
        two_column_identity(&ss, c, &totals),
    ];
    Ok(TwoColumn {
        preconditions,
        rows,
        verdicts,
        stabilization: ss.stabilization,
    })
}

/// The codimension-2 Wang sequence
/// `… → H^k(total) → H^k(g) → H^{k-1}(g) → H^{k+1}(total) → …`
/// over an `S²`-like basic model.
pub fn codim2_les(m: &GModel) -> Result<WangReport, SequenceError> {
    let t = two_column(m, 2)?;
    Ok(WangReport {
        codimension: 2,
        preconditions: t.preconditions,
        rows: t.rows,
        verdicts: t.verdicts,
        notes: Vec::new(),
        stabilization: t.stabilization,
    })
}

/// The codimension-3 Wang sequence
/// `… → H^k(total) → H^k(g) → H^{k-2}(g) → H^{k+1}(total) → …`
/// over an `S³`-like basic model. With `strict`, `H^1(total) = 0` and
/// `H^1(g) = 0` become preconditions; otherwise their relation is reported.
pub fn codim3_les(m: &GModel, strict: bool) -> Result<WangReport, SequenceError> {
    let b1g = lie_cohomology(m.algebra())?.get(1).copied().unwrap_or(0);
    let h1 = m.complex().betti().get(1).copied().unwrap_or(0);
    if strict {
        let mut checks = basic_shape(m, 3)?;
        checks.push(NamedCheck::new("H^1(total) = 0", h1 == 0, format!("dim H^1 = {h1}")));
        checks.push(NamedCheck::new("H^1(g) = 0", b1g == 0, format!("b_1(g) = {b1g}")));
        require(checks)?;
    }
    let TwoColumn {
        mut preconditions,
        rows,
        mut verdicts,
        stabilization,
    } = two_column(m, 3)?;
    if strict {
        preconditions.push(NamedCheck::new("H^1(total) = 0", true, ""));
        preconditions.push(NamedCheck::new("H^1(g) = 0", true, ""));
    }
    let abelianization = abelianization_dim(m.algebra())?;
    verdicts.push(NamedCheck::new(
        "H^1(total) = 0 ⇒ b_1(g) = 0",
        h1 != 0 || b1g == 0,
        format!("dim H^1 = {h1}, b_1(g) = {b1g}, dim g/[g,g] = {abelianization}"),
    ));
    let mut notes = Vec::new();
    if b1g != 0 {
        notes.push(format!(
            "b_1(g) = {b1g} ≠ 0, so H^1(total) ≠ 0: an algebra with nonzero abelianization cannot act this way on a space with H^1 = 0"
        ));
    }
    Ok(WangReport {
        codimension: 3,
        preconditions,
        rows,
        verdicts,
        notes,
        stabilization,
    })
}

/// Dispatches on the codimension.
pub fn wang(m: &GModel, codimension: usize, strict: bool) -> Result<WangReport, SequenceError> {
    match codimension {
        1 => codim1_split(m),
        2 => codim2_les(m),
        3 => codim3_les(m, strict),
        c => Err(SequenceError::Codimension(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;
    use crate::samples;

    fn flat(g: LieAlgebraData, b: crate::cdga::BasicModel) -> GModel {
        let e = vec![vec![crate::linalg::q(0); b.dim()]; g.dim()];
        GModel::new(g, b, e).unwrap()
    }

    #[test]
    fn codim1_examples() {
        let cases = [
            (samples::su2_over_circle(), vec![1, 1, 0, 1, 1]),
            (samples::torus2_model(), vec![1, 2, 1]),
            (samples::h3_over_circle(), vec![1, 3, 4, 3, 1]),
        ];
        for (m, want) in cases {
            let r = codim1_split(&m).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.total_betti(), want);
        }
    }

    #[test]
    fn codim1_rejects_sphere() {
        let err = codim1_split(&samples::hopf()).unwrap_err();
        assert!(err.to_string().contains("top degree(B) ≠ 1"), "{err}");
    }

    #[test]
    fn codim2_hopf() {
        let r = codim2_les(&samples::hopf()).unwrap();
        assert!(r.passed());
        assert_eq!(r.total_betti(), vec![1, 0, 0, 1]);
        assert_eq!(r.connecting_ranks(), vec![0, 1, 0, 0]);
        let scaled = codim2_les(&samples::hopf_scaled(2)).unwrap();
        assert_eq!(scaled.total_betti(), r.total_betti());
        assert_eq!(scaled.connecting_ranks(), r.connecting_ranks());
    }

    #[test]
    fn codim2_su2_over_s2() {
        let r = codim2_les(&samples::su2_over_s2()).unwrap();
        assert!(r.passed());
        assert_eq!(r.total_betti(), vec![1, 0, 1, 1, 0, 1]);
        assert!(r.connecting_ranks().iter().all(|&x| x == 0));
    }

    #[test]
    fn codim2_rejects_b1() {
        let m = flat(LieAlgebraData::abelian(1), samples::sphere2_with_loop());
        let err = codim2_les(&m).unwrap_err();
        assert!(err.to_string().contains("b_1(B) ≠ 0"), "{err}");
    }

    #[test]
    fn codim3_examples() {
        let r = codim3_les(&samples::su2_over_s3(), true).unwrap();
        assert!(r.passed());
        assert_eq!(r.total_betti(), vec![1, 0, 0, 2, 0, 0, 1]);
        assert!(r.connecting_ranks().iter().all(|&x| x == 0));

        let ab = samples::abelian_over_s3();
        let r = codim3_les(&ab, false).unwrap();
        assert!(r.passed());
        assert_eq!(r.total_betti()[1], 1);
        assert_eq!(r.notes.len(), 1);
        let err = codim3_les(&ab, true).unwrap_err();
        assert!(err.to_string().contains("H^1(g) ≠ 0"), "{err}");
    }

    #[test]
    fn unsupported_codimension() {
        assert_eq!(wang(&samples::hopf(), 4, false), Err(SequenceError::Codimension(4)));
    }
}
