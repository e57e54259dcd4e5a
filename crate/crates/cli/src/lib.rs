//! Command implementations behind the `lieseq` binary. Each command returns
//! its complete output and exit code, so the binary only prints.

pub mod model;
mod render;

use std::path::Path;

use lieseq::cdga::{validate_cdga, CdgaError};
use lieseq::gmodel::as_filtered;
use lieseq::lie::{self, abelianization_dim, check_ad_invariance, lie_cohomology, orthonormalize, LieError};
use lieseq::sequences::{wang as wang_report, SequenceError};
use lieseq::spectral::{check_e2_shape, run};
use lieseq::GModel;

use model::{BuildError, ModelDoc, ModelError};

pub use render::Format;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(e: &ModelError) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_INPUT,
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "model".into(), |s| s.to_string_lossy().into_owned())
}

/// One block of a validation report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: &'static str,
    /// `None` when skipped because an earlier block failed.
    pub failures: Option<Vec<String>>,
    pub info: Vec<String>,
}

impl Section {
    fn passed(&self) -> bool {
        self.failures.as_ref().map_or(true, Vec::is_empty)
    }
}

fn lie_failures(e: &LieError) -> Vec<String> {
    match e {
        LieError::Invalid(v) => v.violations.iter().map(ToString::to_string).collect(),
        LieError::ConflictingBracket { i, j, k } => vec![format!(
            "conflicting entries for the coefficient of e{} in [e{}, e{}]",
            k + 1,
            i + 1,
            j + 1
        )],
        other => vec![other.to_string()],
    }
}

fn cdga_failures(e: &CdgaError) -> Vec<String> {
    match e {
        CdgaError::Invalid(v) => v.messages(),
        other => vec![other.to_string()],
    }
}

/// Runs every check on a document and collects itemized results.
pub fn validation_sections(doc: &ModelDoc, need_basic: bool) -> (Vec<Section>, Option<GModel>) {
    let mut sections = Vec::new();
    let algebra = doc.algebra();
    let algebra_ok = match &algebra {
        Ok(g) => {
            let report = lie::validate(g);
            sections.push(Section {
                name: "algebra",
                failures: Some(report.violations.iter().map(ToString::to_string).collect()),
                info: vec![format!("dim {}", g.dim())],
            });
            report.passed()
        }
        Err(BuildError::Lie(e)) => {
            sections.push(Section {
                name: "algebra",
                failures: Some(lie_failures(e)),
                info: Vec::new(),
            });
            false
        }
        Err(e) => unreachable!("algebra construction only fails with Lie errors: {e}"),
    };

    if let Some(metric) = doc.metric() {
        let section = match (metric, &algebra) {
            (Err(e), _) => Section {
                name: "metric",
                failures: Some(vec![e.to_string()]),
                info: Vec::new(),
            },
            (Ok(m), Ok(g)) if algebra_ok => {
                let invariant = check_ad_invariance(g, &m).unwrap_or(false);
                Section {
                    name: "metric",
                    failures: Some(Vec::new()),
                    info: vec![format!("ad-invariant: {}", if invariant { "yes" } else { "no" })],
                }
            }
            (Ok(_), _) => Section {
                name: "metric",
                failures: Some(Vec::new()),
                info: vec!["positive definite".into()],
            },
        };
        sections.push(section);
    }

    if !need_basic || doc.basic.is_none() {
        return (sections, None);
    }

    let basic = doc.basic_model();
    let basic_ok = match &basic {
        Ok(b) => {
            let report = validate_cdga(b);
            sections.push(Section {
                name: "basic model",
                failures: Some(report.messages()),
                info: vec![format!("dim {}, top degree {}", b.dim(), b.top_degree())],
            });
            report.passed()
        }
        Err(BuildError::Cdga(e)) => {
            sections.push(Section {
                name: "basic model",
                failures: Some(cdga_failures(e)),
                info: Vec::new(),
            });
            false
        }
        Err(e) => unreachable!("basic model construction only fails with CDGA errors: {e}"),
    };

    if !(algebra_ok && basic_ok) {
        sections.push(Section {
            name: "total complex",
            failures: None,
            info: Vec::new(),
        });
        return (sections, None);
    }
    match doc.gmodel() {
        Ok(m) => {
            sections.push(Section {
                name: "total complex",
                failures: Some(Vec::new()),
                info: vec![format!("d∘d = 0, dims {}", render::tuple(m.complex().dims()))],
            });
            (sections, Some(m))
        }
        Err(e) => {
            sections.push(Section {
                name: "total complex",
                failures: Some(vec![e.to_string()]),
                info: Vec::new(),
            });
            (sections, None)
        }
    }
}

fn load(path: &Path) -> Result<ModelDoc, Outcome> {
    model::read(path).map_err(|e| Outcome::input_error(&e))
}

/// Loads and fully validates a model, or returns the failing outcome.
fn load_model(path: &Path) -> Result<GModel, Outcome> {
    let doc = load(path)?;
    if let Err(e) = doc.basic_block() {
        return Err(Outcome::input_error(&e));
    }
    let (sections, built) = validation_sections(&doc, true);
    built.ok_or_else(|| Outcome {
        stdout: render::validation(&stem(path), &sections),
        stderr: "error: model is invalid\n".into(),
        code: EXIT_FAILURE,
    })
}

/// `validate`: exit 0 iff every check passes.
pub fn validate(path: &Path) -> Outcome {
    let doc = match load(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let (sections, _) = validation_sections(&doc, true);
    let passed = sections.iter().all(Section::passed) && (doc.basic.is_none() || sections.iter().all(|s| s.failures.is_some()));
    Outcome {
        stdout: render::validation(&stem(path), &sections),
        stderr: String::new(),
        code: if passed { EXIT_OK } else { EXIT_FAILURE },
    }
}

/// `spectral`: pages up to stabilization (or `pages`), E_∞, convergence and
/// the E_2 tensor comparison.
pub fn spectral(path: &Path, pages: Option<usize>, format: Format) -> Outcome {
    let m = match load_model(path) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let result = as_filtered(&m).map_err(|e| e.to_string()).and_then(|f| run(&f).map_err(|e| e.to_string()));
    let ss = match result {
        Ok(ss) => ss,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: EXIT_FAILURE,
            }
        }
    };
    let shape = check_e2_shape(&ss, m.basic(), m.algebra()).expect("validated model");
    let stdout = render::spectral(&stem(path), &m, &ss, &shape, pages, format);
    Outcome {
        stdout,
        stderr: String::new(),
        code: if shape.passed() { EXIT_OK } else { EXIT_FAILURE },
    }
}

/// `lie`: Betti numbers and abelianization of the algebra block.
pub fn lie(path: &Path, format: Format) -> Outcome {
    let doc = match load(path) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let (sections, _) = validation_sections(&doc, false);
    if !sections.iter().all(Section::passed) {
        return Outcome {
            stdout: render::validation(&stem(path), &sections),
            stderr: "error: algebra is invalid\n".into(),
            code: EXIT_FAILURE,
        };
    }
    let g = doc.algebra().expect("validated");
    let betti = lie_cohomology(&g).expect("validated");
    let ab = abelianization_dim(&g).expect("validated");
    let metric = doc.metric().map(|m| {
        let m = m.expect("validated");
        let invariant = check_ad_invariance(&g, &m).expect("validated");
        let o = orthonormalize(&g, &m).expect("validated");
        let same = lie_cohomology(&o.algebra).expect("orthonormalized algebra is valid") == betti;
        (invariant, o, same)
    });
    let passed = betti.get(1).copied().unwrap_or(0) == ab && metric.as_ref().map_or(true, |(_, _, same)| *same);
    Outcome {
        stdout: render::lie(&stem(path), &g, &betti, ab, metric.as_ref(), format),
        stderr: String::new(),
        code: if passed { EXIT_OK } else { EXIT_FAILURE },
    }
}

/// `wang`: the codimension-specific sequence with its precondition checks.
pub fn wang(path: &Path, codim: usize, strict: bool, format: Format) -> Outcome {
    let m = match load_model(path) {
        Ok(m) => m,
        Err(o) => return o,
    };
    match wang_report(&m, codim, strict) {
        Ok(report) => Outcome {
            stdout: render::wang(&stem(path), &report, format),
            stderr: String::new(),
            code: if report.passed() { EXIT_OK } else { EXIT_FAILURE },
        },
        Err(SequenceError::PreconditionFailed { checks }) => {
            let err = SequenceError::PreconditionFailed { checks: checks.clone() };
            Outcome {
                stdout: render::preconditions(&stem(path), codim, &checks),
                stderr: format!("error: {err}\n"),
                code: EXIT_FAILURE,
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_FAILURE,
        },
    }
}
