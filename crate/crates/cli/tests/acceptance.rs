//! Acceptance suite: one line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use lieseq::gmodel::as_filtered;
use lieseq::lie::{abelianization_dim, lie_cohomology};
use lieseq::samples;
use lieseq::sequences::{codim1_split, codim2_les, codim3_les, SequenceError};
use lieseq::spectral::{check_convergence, check_e2_shape, run, SpectralSequence};
use lieseq::{GModel, LieAlgebraData};
use lieseq_cli::model;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHIPPED: [&str; 8] = [
    "hopf",
    "heisenberg-nilmanifold",
    "torus2",
    "su2-point",
    "su2-over-circle",
    "su2-over-s2",
    "su2-over-s3",
    "h3-over-circle",
];

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn shipped(name: &str) -> GModel {
    let path = models_dir().join(format!("{name}.model"));
    model::read(&path)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
        .gmodel()
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn spectral(m: &GModel) -> SpectralSequence {
    run(&as_filtered(m).expect("filtration")).expect("spectral sequence")
}

/// `Ok(detail)` for a pass, `Err(reason)` for a failure.
type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<String, String> {
    let detail = format!("{:.3} s < {} s", elapsed.as_secs_f64(), limit.as_secs());
    if elapsed < limit {
        Ok(detail)
    } else {
        Err(format!("too slow: {:.3} s ≥ {} s", elapsed.as_secs_f64(), limit.as_secs()))
    }
}

fn binomials(n: usize) -> Vec<usize> {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn lie_cohomology_values() -> Verdict {
    let start = Instant::now();
    let mut cases: Vec<(String, LieAlgebraData, Vec<usize>)> = vec![
        ("su(2)".into(), samples::su2(), vec![1, 0, 0, 1]),
        ("h3".into(), samples::heisenberg(), vec![1, 2, 2, 1]),
    ];
    for s in 1..=5 {
        cases.push((format!("abelian {s}"), LieAlgebraData::abelian(s), binomials(s)));
    }
    for (name, g, want) in &cases {
        let got = lie_cohomology(g).map_err(|e| e.to_string())?;
        let independent = oracle::oracle_betti(g);
        ensure(&got == want && &independent == want, || {
            format!("{name}: engine {got:?}, oracle {independent:?}, expected {want:?}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..20 {
        let g = samples::random_lie_algebra(&mut rng, 4);
        let b = lie_cohomology(&g).map_err(|e| e.to_string())?;
        let ab = abelianization_dim(&g).map_err(|e| e.to_string())?;
        let independent = oracle::oracle_betti(&g);
        ensure(b[1] == ab && b == independent, || {
            format!("random algebra {t}: b = {b:?}, oracle {independent:?}, dim g/[g,g] = {ab}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1)).map(|t| format!("exact; 7 named + 20 random algebras; {t}"))
}

fn hopf() -> Verdict {
    let start = Instant::now();
    let m = shipped("hopf");
    let ss = spectral(&m);
    let e2 = ss.page(2);
    ensure(
        e2.nonzero() == vec![((0, 0), 1), ((0, 1), 1), ((2, 0), 1), ((2, 1), 1)],
        || format!("E_2 = {:?}", e2.nonzero()),
    )?;
    ensure(e2.rank_from(0, 1) == 1, || "d_2 rank is not 1".into())?;
    let ranks: usize = e2.differentials.values().map(|d| d.rank).sum();
    ensure(ranks == 1, || format!("total d_2 rank {ranks}"))?;
    ensure(ss.e_infinity().nonzero() == vec![((0, 0), 1), ((2, 1), 1)], || {
        format!("E_inf = {:?}", ss.e_infinity().nonzero())
    })?;
    ensure(m.complex().betti() == vec![1, 0, 0, 1], || format!("H = {:?}", m.complex().betti()))?;
    within(start.elapsed(), Duration::from_secs(1)).map(|t| format!("exact; {t}"))
}

fn heisenberg() -> Verdict {
    let start = Instant::now();
    let m = shipped("heisenberg-nilmanifold");
    let ss = spectral(&m);
    let (torus, line) = ([1, 2, 1], [1, 1]);
    let e2 = ss.page(2);
    for p in 0..3 {
        for q in 0..2 {
            ensure(e2.dim(p, q) == torus[p] * line[q], || format!("E_2^({p},{q}) = {}", e2.dim(p, q)))?;
        }
    }
    ensure(e2.total_dims(3).iter().sum::<usize>() == 8, || "E_2 has extra cells".into())?;
    ensure(ss.e_infinity().total_dims(3) == vec![1, 2, 2, 1], || {
        format!("E_inf totals {:?}", ss.e_infinity().total_dims(3))
    })?;
    check_convergence(&ss, m.complex()).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(1)).map(|t| format!("exact; {t}"))
}

fn convergence() -> Verdict {
    let start = Instant::now();
    for name in SHIPPED {
        let m = shipped(name);
        check_convergence(&spectral(&m), m.complex()).map_err(|e| format!("{name}: {e}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cells = 0;
    let mut curved = 0;
    for t in 0..50 {
        let m = samples::random_gmodel(&mut rng, 4, 8);
        let ss = spectral(&m);
        let report = check_convergence(&ss, m.complex()).map_err(|e| format!("random model {t}: {e}"))?;
        cells += report.cohomology.iter().sum::<usize>();
        if m.curvature().iter().flatten().any(|x| *x != lieseq::linalg::q(0)) {
            curved += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30)).map(|t| {
        format!("exact; 8 shipped + 50 random ({curved} with nonzero curvature, {cells} total Betti); {t}")
    })
}

fn e2_shape() -> Verdict {
    for name in SHIPPED {
        let m = shipped(name);
        let report = check_e2_shape(&spectral(&m), m.basic(), m.algebra()).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("{name}: mismatches {:?}", report.mismatches()))?;
    }
    Ok("exact; 8 shipped models".into())
}

fn codim1() -> Verdict {
    let cases = [
        ("abelian-1", samples::torus2_model(), vec![1, 2, 1]),
        ("su(2)", samples::su2_over_circle(), vec![1, 1, 0, 1, 1]),
        ("h3", samples::h3_over_circle(), vec![1, 3, 4, 3, 1]),
    ];
    for (name, m, want) in cases {
        let r = codim1_split(&m).map_err(|e| format!("{name}: {e}"))?;
        let b = oracle::oracle_betti(m.algebra());
        let split: Vec<usize> = (0..want.len())
            .map(|k| b.get(k).copied().unwrap_or(0) + if k > 0 { b.get(k - 1).copied().unwrap_or(0) } else { 0 })
            .collect();
        ensure(r.passed() && r.total_betti() == want && split == want, || {
            format!("{name}: H = {:?}, oracle split {split:?}, expected {want:?}", r.total_betti())
        })?;
        ensure(r.stabilization <= 2, || format!("{name}: no degeneration at E_2"))?;
    }
    Ok("exact; abelian-1, su(2), h3 over the circle, degenerate at E_2".into())
}

fn wang_sequences() -> Verdict {
    let hopf = codim2_les(&shipped("hopf")).map_err(|e| e.to_string())?;
    ensure(hopf.passed() && hopf.total_betti() == vec![1, 0, 0, 1], || format!("hopf: {hopf:?}"))?;
    ensure(hopf.connecting_ranks().iter().sum::<usize>() == 1, || "hopf: connecting rank".into())?;
    let scaled = codim2_les(&samples::hopf_scaled(2)).map_err(|e| e.to_string())?;
    ensure(
        scaled.passed() && scaled.connecting_ranks() == hopf.connecting_ranks(),
        || "hopf with curvature 2v differs".into(),
    )?;
    let s2 = codim2_les(&shipped("su2-over-s2")).map_err(|e| e.to_string())?;
    ensure(s2.passed() && s2.total_betti() == vec![1, 0, 1, 1, 0, 1], || format!("su2-over-s2: {s2:?}"))?;
    let s3 = codim3_les(&shipped("su2-over-s3"), true).map_err(|e| e.to_string())?;
    ensure(s3.passed() && s3.total_betti() == vec![1, 0, 0, 2, 0, 0, 1], || format!("su2-over-s3: {s3:?}"))?;
    let ab = codim3_les(&samples::abelian_over_s3(), false).map_err(|e| e.to_string())?;
    ensure(ab.passed() && !ab.notes.is_empty(), || "abelian over S^3 not flagged".into())?;

    let rejected = |r: Result<_, SequenceError>, name: &str| match r {
        Err(SequenceError::PreconditionFailed { checks }) => ensure(
            checks.iter().any(|c| !c.passed && c.negated() == name),
            || format!("wrong checks for {name}: {checks:?}"),
        ),
        other => Err(format!("expected rejection with {name}, got {other:?}")),
    };
    let loop_model = model::read(&models_dir().join("invalid/s2-with-b1.model"))
        .map_err(|e| e.to_string())?
        .gmodel()
        .map_err(|e| e.to_string())?;
    rejected(codim2_les(&loop_model), "b_1(B) ≠ 0")?;
    rejected(codim3_les(&samples::abelian_over_s3(), true), "H^1(g) ≠ 0")?;
    Ok("exact; codim 2: hopf, hopf×2, su2-over-s2; codim 3: su2-over-s3, abelian-over-s3; 2 rejections".into())
}

fn cli(args: &[&str], serial: bool) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lieseq"));
    cmd.args(args).current_dir(models_dir());
    if serial {
        cmd.env("LIESEQ_SERIAL", "1");
    } else {
        cmd.env_remove("LIESEQ_SERIAL");
    }
    cmd.output().expect("run lieseq")
}

fn negative() -> Verdict {
    let cases = [
        ("invalid/jacobi-violation.model", "Jacobi identity fails for (i=1, j=2, k=3)"),
        ("invalid/nonclosed-curvature.model", "d∘d ≠ 0"),
        ("invalid/leibniz-violation.model", "Leibniz rule fails for (one, one)"),
    ];
    for (file, needle) in cases {
        let out = cli(&["validate", file], false);
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.code() == Some(1) && text.contains(needle) && text.contains("  - "), || {
            format!("{file}: exit {:?}, output {text}", out.status.code())
        })?;
    }
    let out = cli(&["validate", "invalid/malformed.model"], false);
    ensure(out.status.code() == Some(2), || "malformed file did not exit 2".into())?;
    Ok("Jacobi, d∘d ≠ 0, Leibniz itemized with exit 1; malformed exit 2".into())
}

fn determinism() -> Verdict {
    let mut runs = 0;
    for name in SHIPPED {
        let file = format!("{name}.model");
        let commands: [Vec<&str>; 3] = [
            vec!["spectral", &file],
            vec!["spectral", "--format", "structured", &file],
            vec!["validate", &file],
        ];
        for args in &commands {
            let a = cli(args, false);
            let b = cli(args, false);
            let c = cli(args, true);
            runs += 3;
            ensure(a.status.success(), || format!("{args:?} failed"))?;
            ensure(a.stdout == b.stdout && a.stdout == c.stdout, || {
                format!("{args:?}: output differs between runs or modes")
            })?;
        }
    }
    Ok(format!("byte-identical; {runs} runs over 8 models, parallel and serial"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("Lie algebra cohomology and b_1 = dim g/[g,g]", lie_cohomology_values),
        ("Hopf model pages", hopf),
        ("Heisenberg nilmanifold pages", heisenberg),
        ("convergence on shipped and 50 random models", convergence),
        ("E_2 tensor shape on shipped models", e2_shape),
        ("codimension 1 splitting", codim1),
        ("codimension 2 and 3 Wang sequences", wang_sequences),
        ("negative inputs rejected", negative),
        ("deterministic CLI output", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name} [{detail}]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{reason}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
