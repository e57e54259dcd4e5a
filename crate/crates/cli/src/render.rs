//! Text and structured (JSON) renderings. Everything here is a pure function
//! of the computed data, so output is byte-for-byte reproducible.

use std::fmt::Write;

use lieseq::lie::Orthonormalized;
use lieseq::sequences::{NamedCheck, WangReport};
use lieseq::spectral::{E2ShapeReport, Page, SpectralSequence};
use lieseq::{GModel, LieAlgebraData};
use serde::Serialize;
use serde_json::json;

use crate::Section;

/// Bumped whenever the structured layout changes incompatibly.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

pub(crate) fn tuple(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

pub(crate) fn validation(name: &str, sections: &[Section]) -> String {
    let mut out = format!("model: {name}\n");
    let mut valid = true;
    for s in sections {
        match &s.failures {
            None => {
                let _ = writeln!(out, "{}: skipped", s.name);
            }
            Some(f) if f.is_empty() => {
                let info = if s.info.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", s.info.join("; "))
                };
                let _ = writeln!(out, "{}: ok{info}", s.name);
            }
            Some(f) => {
                valid = false;
                let plural = if f.len() == 1 { "" } else { "s" };
                let _ = writeln!(out, "{}: {} failure{plural}", s.name, f.len());
                for item in f {
                    let _ = writeln!(out, "  - {item}");
                }
            }
        }
    }
    let _ = writeln!(out, "result: {}", if valid { "valid" } else { "invalid" });
    out
}

/// `q` rows from top to bottom, `p` columns left to right; `.` marks zero.
fn grid(page: &Page, (pmax, qmax): (usize, usize)) -> String {
    let width = page.entries.values().map(|e| e.dim.to_string().len()).max().unwrap_or(1).max(1);
    let mut out = String::new();
    for q in (0..=qmax).rev() {
        let _ = write!(out, "  q={q:<2}|");
        for p in 0..=pmax {
            let cell = match page.entries.get(&(p, q)) {
                Some(e) if e.dim > 0 => e.dim.to_string(),
                _ => ".".into(),
            };
            let _ = write!(out, " {cell:>width$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "       ");
    for _ in 0..=pmax {
        let _ = write!(out, "-{}", "-".repeat(width));
    }
    out.push('\n');
    let _ = write!(out, "    p= ");
    for p in 0..=pmax {
        let _ = write!(out, " {p:>width$}");
    }
    out.push('\n');
    out
}

fn differentials(page: &Page) -> String {
    let nonzero: Vec<String> = page
        .differentials
        .values()
        .filter(|d| d.rank > 0)
        .map(|d| {
            format!(
                "({},{}) -> ({},{}) rank {}",
                d.source.0, d.source.1, d.target.0, d.target.1, d.rank
            )
        })
        .collect();
    if nonzero.is_empty() {
        format!("d_{}: zero\n", page.r)
    } else {
        format!("d_{}: {}\n", page.r, nonzero.join(", "))
    }
}

pub(crate) fn spectral(
    name: &str,
    m: &GModel,
    ss: &SpectralSequence,
    shape: &E2ShapeReport,
    pages: Option<usize>,
    format: Format,
) -> String {
    let last = pages.map_or(ss.stabilization, |r| r.min(ss.stabilization));
    // every later page is a subquotient of E_0, so its support bounds the grid
    let support = ss.pages[0].nonzero();
    let extent = (
        support.iter().map(|((p, _), _)| *p).max().unwrap_or(0),
        support.iter().map(|((_, q), _)| *q).max().unwrap_or(0),
    );
    let e_inf = ss.e_infinity();
    let totals = e_inf.total_dims(ss.top_degree);
    let betti = m.complex().betti();
    match format {
        Format::Text => {
            let mut out = format!("model: {name}\n");
            let _ = writeln!(out, "total complex dims: {}", tuple(m.complex().dims()));
            let _ = writeln!(out, "stabilization: r = {}", ss.stabilization);
            for page in &ss.pages[..=last] {
                let _ = writeln!(out, "\nE_{}", page.r);
                out.push_str(&grid(page, extent));
                out.push_str(&differentials(page));
            }
            let _ = writeln!(out, "\nE_inf (= E_{})", ss.stabilization);
            out.push_str(&grid(e_inf, extent));
            let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "\nconvergence: E_inf totals {} vs H^* {}: {}",
                tuple(&totals),
                tuple(&betti),
                verdict(totals == betti)
            );
            let _ = writeln!(
                out,
                "E_2 tensor shape b_p(B)*b_q(g) with b(B) = {}, b(g) = {}: {}",
                tuple(&shape.basic_betti),
                tuple(&shape.lie_betti),
                verdict(shape.passed())
            );
            for c in shape.mismatches() {
                let _ = writeln!(out, "  - ({},{}): computed {}, expected {}", c.p, c.q, c.computed, c.expected);
            }
            out
        }
        Format::Structured => {
            let page_json = |page: &Page| {
                json!({
                    "r": page.r,
                    "entries": page.entries.values().map(|e| json!({"p": e.p, "q": e.q, "dim": e.dim})).collect::<Vec<_>>(),
                    "differentials": page.differentials.values().map(|d| json!({
                        "source": [d.source.0, d.source.1],
                        "target": [d.target.0, d.target.1],
                        "rank": d.rank,
                    })).collect::<Vec<_>>(),
                })
            };
            to_json(&json!({
                "format_version": FORMAT_VERSION,
                "model": name,
                "total_dims": m.complex().dims(),
                "stabilization": ss.stabilization,
                "pages": ss.pages[..=last].iter().map(page_json).collect::<Vec<_>>(),
                "e_infinity": page_json(e_inf),
                "convergence": {
                    "e_infinity_totals": totals,
                    "cohomology": betti,
                    "passed": totals == betti,
                },
                "e2_shape": {
                    "basic_betti": shape.basic_betti,
                    "lie_betti": shape.lie_betti,
                    "passed": shape.passed(),
                    "mismatches": shape.mismatches().iter().map(|c| json!({
                        "p": c.p, "q": c.q, "computed": c.computed, "expected": c.expected,
                    })).collect::<Vec<_>>(),
                },
            }))
        }
    }
}

pub(crate) fn lie(
    name: &str,
    g: &LieAlgebraData,
    betti: &[usize],
    abelianization: usize,
    metric: Option<&(bool, Orthonormalized, bool)>,
    format: Format,
) -> String {
    let b1 = betti.get(1).copied().unwrap_or(0);
    match format {
        Format::Text => {
            let mut out = format!("model: {name}\n");
            let _ = writeln!(out, "dim g: {}", g.dim());
            let _ = writeln!(out, "b(g): {}", tuple(betti));
            let _ = writeln!(out, "dim g/[g,g]: {abelianization}");
            let _ = writeln!(
                out,
                "b_1 = dim g/[g,g]: {}",
                if b1 == abelianization { "pass" } else { "FAIL" }
            );
            if let Some((invariant, o, same)) = metric {
                let _ = writeln!(out, "metric ad-invariant: {}", if *invariant { "yes" } else { "no" });
                let norms: Vec<String> = o.norms.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "orthogonalized squared norms: ({})", norms.join(", "));
                let _ = writeln!(
                    out,
                    "cohomology unchanged in the new basis: {}",
                    if *same { "pass" } else { "FAIL" }
                );
            }
            out
        }
        Format::Structured => {
            let mut v = json!({
                "format_version": FORMAT_VERSION,
                "model": name,
                "dim": g.dim(),
                "betti": betti,
                "abelianization_dim": abelianization,
                "b1_matches_abelianization": b1 == abelianization,
            });
            if let Some((invariant, o, same)) = metric {
                v["metric"] = json!({
                    "ad_invariant": invariant,
                    "squared_norms": o.norms.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "cohomology_preserved": same,
                });
            }
            to_json(&v)
        }
    }
}

fn checks(out: &mut String, title: &str, cs: &[NamedCheck]) {
    if cs.is_empty() {
        return;
    }
    let _ = writeln!(out, "{title}:");
    for c in cs {
        let _ = writeln!(out, "  {c}");
    }
}

pub(crate) fn preconditions(name: &str, codim: usize, cs: &[NamedCheck]) -> String {
    let mut out = format!("model: {name}\ncodimension: {codim}\n");
    checks(&mut out, "preconditions", cs);
    out.push_str("result: rejected\n");
    out
}

pub(crate) fn wang(name: &str, r: &WangReport, format: Format) -> String {
    let c = r.codimension;
    let (fiber, shifted) = if c == 1 {
        ("b_k(g)".to_string(), "b_{k-1}(g)".to_string())
    } else {
        (format!("E_{c}^{{0,k}}"), format!("E_{c}^{{{c},k-{c}}}"))
    };
    match format {
        Format::Text => {
            let mut out = format!("model: {name}\ncodimension: {c}\n");
            checks(&mut out, "preconditions", &r.preconditions);
            let _ = writeln!(
                out,
                "{:>3} {:>5} {:>10} {:>12} {:>8} {:>8} {:>9}  verdict",
                "k", "H^k", fiber, shifted, "rk out", "rk in", "predicted"
            );
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>5} {:>10} {:>12} {:>8} {:>8} {:>9}  {}",
                    row.degree,
                    row.total,
                    row.fiber,
                    row.shifted,
                    row.rank_out,
                    row.rank_in,
                    row.predicted(),
                    if row.passed() { "pass" } else { "FAIL" }
                );
            }
            checks(&mut out, "verdicts", &r.verdicts);
            if !r.notes.is_empty() {
                let _ = writeln!(out, "notes:");
                for n in &r.notes {
                    let _ = writeln!(out, "  {n}");
                }
            }
            let _ = writeln!(out, "result: {}", if r.passed() { "pass" } else { "FAIL" });
            out
        }
        Format::Structured => {
            let check_json = |cs: &[NamedCheck]| {
                cs.iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect::<Vec<_>>()
            };
            to_json(&json!({
                "format_version": FORMAT_VERSION,
                "model": name,
                "codimension": c,
                "preconditions": check_json(&r.preconditions),
                "rows": r.rows.iter().map(|row| json!({
                    "k": row.degree,
                    "total": row.total,
                    "fiber": row.fiber,
                    "shifted": row.shifted,
                    "rank_out": row.rank_out,
                    "rank_in": row.rank_in,
                    "predicted": row.predicted(),
                    "passed": row.passed(),
                })).collect::<Vec<_>>(),
                "verdicts": check_json(&r.verdicts),
                "notes": r.notes,
                "stabilization": r.stabilization,
                "passed": r.passed(),
            }))
        }
    }
}
