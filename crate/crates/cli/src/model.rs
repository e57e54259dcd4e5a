//! Model files: a TOML document with `[algebra]`, `[basic]`, `[curvature]`
//! and `[metric]` blocks.
//!
//! ```toml
//! [algebra]
//! dim = 1
//! brackets = []            # [i, j, k, c]: coefficient c of e_k in [e_i, e_j], 1-based
//!
//! [basic]
//! unit = "one"
//! generators = [{ name = "one", degree = 0 }, { name = "v", degree = 2 }]
//!
//! [basic.products]         # "a*b" = expression; unit products are implied
//! [basic.differential]     # name = expression
//!
//! [curvature]
//! e1 = "v"                 # expressions in the basic generators
//! ```
//!
//! Expressions are rational combinations such as `2*ab - 1/2*v` or `0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use lieseq::cdga::{BasicModelBuilder, CdgaError};
use lieseq::lie::{InnerProductData, LieError};
use lieseq::{BasicModel, GModel, GModelError, LieAlgebraData, Rational, RationalMatrix};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Syntax(String),
    #[error("bad expression `{expr}`: {reason}")]
    Expression { expr: String, reason: String },
    #[error("unknown generator `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Structure(String),
    #[error("model file has no [basic] block")]
    MissingBasic,
}

/// Rational combination of named basis elements, merged and without zero
/// terms, in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Combination(pub Vec<(String, Rational)>);

impl Combination {
    fn push(&mut self, name: &str, c: Rational) {
        match self.0.iter_mut().find(|(n, _)| n == name) {
            Some((_, x)) => *x += c,
            None => self.0.push((name.to_string(), c)),
        }
    }

    fn normalized(mut self) -> Self {
        self.0.retain(|(_, c)| !c.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(n, _)| n.as_str())
    }

    pub fn to_vector(&self, names: &[String]) -> Result<Vec<Rational>, ModelError> {
        let mut v = vec![Rational::zero(); names.len()];
        for (n, c) in &self.0 {
            let i = names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| ModelError::UnknownName(n.clone()))?;
            v[i] += c;
        }
        Ok(v)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (t, (name, c)) in self.0.iter().enumerate() {
            let mag = c.abs();
            match (t, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Parses `[±] [c [*]] name (± [c [*]] name)*` or a bare `0`.
pub fn parse_combination(expr: &str) -> Result<Combination, ModelError> {
    let bad = |reason: &str| ModelError::Expression {
        expr: expr.to_string(),
        reason: reason.to_string(),
    };
    let chars: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(bad("empty"));
    }
    let mut out = Combination::default();
    let mut pos = 0;
    let mut first = true;
    while pos < chars.len() {
        let mut sign = Rational::one();
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if !first => return Err(bad("expected + or -")),
            _ => {}
        }
        first = false;
        let start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
            pos += 1;
        }
        let coefficient: Option<Rational> = if pos > start {
            let text: String = chars[start..pos].iter().collect();
            Some(text.parse().map_err(|_| bad("bad coefficient"))?)
        } else {
            None
        };
        if pos < chars.len() && chars[pos] == '*' {
            if coefficient.is_none() {
                return Err(bad("`*` without coefficient"));
            }
            pos += 1;
        }
        let name_start = pos;
        if pos < chars.len() && is_name_start(chars[pos]) {
            while pos < chars.len() && is_name_char(chars[pos]) {
                pos += 1;
            }
        }
        let name: String = chars[name_start..pos].iter().collect();
        let c = sign * coefficient.clone().unwrap_or_else(Rational::one);
        if name.is_empty() {
            // only a literal zero may stand without a name
            if coefficient.as_ref().is_some_and(Zero::is_zero) {
                continue;
            }
            return Err(bad("term without a generator name"));
        }
        out.push(&name, c);
    }
    Ok(out.normalized())
}

/// A number as written in TOML: integer or quoted rational.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<Rational, ModelError> {
        match self {
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
            Scalar::Text(s) => s.trim().parse().map_err(|_| ModelError::Expression {
                expr: s.clone(),
                reason: "not a rational number".into(),
            }),
        }
    }

    fn from_value(x: &Rational) -> Self {
        if x.is_integer() {
            if let Ok(n) = x.to_integer().to_string().parse::<i64>() {
                return Scalar::Int(n);
            }
        }
        Scalar::Text(x.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    algebra: RawAlgebra,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basic: Option<RawBasic>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    curvature: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<RawMetric>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    #[serde(default)]
    brackets: Vec<(usize, usize, usize, Scalar)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasic {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top_degree: Option<usize>,
    generators: Vec<RawGenerator>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    products: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    differential: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    gram: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBlock {
    pub dim: usize,
    /// `(i, j, k, c)`, one-based as in the file.
    pub brackets: Vec<(usize, usize, usize, Rational)>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicBlock {
    pub generators: Vec<(String, usize)>,
    pub unit: Option<String>,
    pub top_degree: Option<usize>,
    pub products: BTreeMap<(String, String), Combination>,
    pub differential: BTreeMap<String, Combination>,
}

impl BasicBlock {
    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// Parsed model document, with every name and index checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDoc {
    pub algebra: AlgebraBlock,
    pub basic: Option<BasicBlock>,
    /// One-based index of `e_i` to its expression.
    pub curvature: BTreeMap<usize, Combination>,
    pub metric: Option<Vec<Vec<Rational>>>,
}

pub fn read(path: &Path) -> Result<ModelDoc, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ModelDoc, ModelError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| ModelError::Syntax(e.message().to_string()))?;
    let structure = |msg: String| Err(ModelError::Structure(msg));

    let s = raw.algebra.dim;
    let mut brackets = Vec::with_capacity(raw.algebra.brackets.len());
    for (i, j, k, c) in &raw.algebra.brackets {
        if [i, j, k].iter().any(|&&x| x == 0 || x > s) {
            return structure(format!("bracket entry [{i}, {j}, {k}] outside 1..={s}"));
        }
        brackets.push((*i, *j, *k, c.value()?));
    }
    if let Some(labels) = &raw.algebra.labels {
        if labels.len() != s {
            return structure(format!("{} labels for an algebra of dimension {s}", labels.len()));
        }
    }

    let basic = match raw.basic {
        None => None,
        Some(b) => {
            let mut seen = BTreeSet::new();
            for g in &b.generators {
                if !seen.insert(g.name.as_str()) {
                    return structure(format!("duplicate generator `{}`", g.name));
                }
                if g.name.is_empty() || !g.name.starts_with(is_name_start) || !g.name.chars().all(is_name_char) {
                    return structure(format!("invalid generator name `{}`", g.name));
                }
            }
            let known = |n: &str| {
                if seen.contains(n) {
                    Ok(())
                } else {
                    Err(ModelError::UnknownName(n.to_string()))
                }
            };
            if let Some(u) = &b.unit {
                known(u)?;
            } else if !b.generators.iter().any(|g| g.degree == 0) {
                return structure("basic model has no degree-0 generator to serve as unit".into());
            }
            let mut products = BTreeMap::new();
            for (key, expr) in &b.products {
                let Some((l, r)) = key.split_once('*') else {
                    return structure(format!("product key `{key}` is not of the form `a*b`"));
                };
                let (l, r) = (l.trim().to_string(), r.trim().to_string());
                known(&l)?;
                known(&r)?;
                let value = parse_combination(expr)?;
                value.names().try_for_each(known)?;
                products.insert((l, r), value);
            }
            let mut differential = BTreeMap::new();
            for (name, expr) in &b.differential {
                known(name)?;
                let value = parse_combination(expr)?;
                value.names().try_for_each(known)?;
                differential.insert(name.clone(), value);
            }
            Some(BasicBlock {
                generators: b.generators.into_iter().map(|g| (g.name, g.degree)).collect(),
                unit: b.unit,
                top_degree: b.top_degree,
                products,
                differential,
            })
        }
    };

    let mut curvature = BTreeMap::new();
    for (key, expr) in &raw.curvature {
        let index = key
            .strip_prefix('e')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= s)
            .ok_or_else(|| ModelError::Structure(format!("curvature key `{key}` is not one of e1..e{s}")))?;
        let value = parse_combination(expr)?;
        let Some(b) = &basic else {
            return Err(ModelError::MissingBasic);
        };
        for n in value.names() {
            if !b.generators.iter().any(|(g, _)| g == n) {
                return Err(ModelError::UnknownName(n.to_string()));
            }
        }
        curvature.insert(index, value);
    }

    let metric = match raw.metric {
        None => None,
        Some(m) => {
            if m.gram.len() != s || m.gram.iter().any(|r| r.len() != s) {
                return structure(format!("gram matrix must be {s}×{s}"));
            }
            Some(
                m.gram
                    .iter()
                    .map(|r| r.iter().map(Scalar::value).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
    };

    Ok(ModelDoc {
        algebra: AlgebraBlock {
            dim: s,
            brackets,
            labels: raw.algebra.labels,
        },
        basic,
        curvature,
        metric,
    })
}

/// Canonical TOML for a document; `parse(&serialize(d)) == d`.
pub fn serialize(doc: &ModelDoc) -> String {
    let raw = RawFile {
        algebra: RawAlgebra {
            dim: doc.algebra.dim,
            brackets: doc
                .algebra
                .brackets
                .iter()
                .map(|(i, j, k, c)| (*i, *j, *k, Scalar::from_value(c)))
                .collect(),
            labels: doc.algebra.labels.clone(),
        },
        basic: doc.basic.as_ref().map(|b| RawBasic {
            unit: b.unit.clone(),
            top_degree: b.top_degree,
            generators: b
                .generators
                .iter()
                .map(|(name, degree)| RawGenerator {
                    name: name.clone(),
                    degree: *degree,
                })
                .collect(),
            products: b
                .products
                .iter()
                .map(|((l, r), v)| (format!("{l}*{r}"), v.to_string()))
                .collect(),
            differential: b.differential.iter().map(|(n, v)| (n.clone(), v.to_string())).collect(),
        }),
        curvature: doc.curvature.iter().map(|(i, v)| (format!("e{i}"), v.to_string())).collect(),
        metric: doc.metric.as_ref().map(|g| RawMetric {
            gram: g.iter().map(|r| r.iter().map(Scalar::from_value).collect()).collect(),
        }),
    };
    toml::to_string(&raw).expect("model documents always serialize")
}

/// Outcome of turning a document into engine objects. Errors here are
/// mathematical (validation) failures, not syntax problems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Model(#[from] GModelError),
}

impl ModelDoc {
    /// The Lie algebra, without validation.
    pub fn algebra(&self) -> Result<LieAlgebraData, BuildError> {
        let entries: Vec<_> = self
            .algebra
            .brackets
            .iter()
            .map(|(i, j, k, c)| (i - 1, j - 1, k - 1, c.clone()))
            .collect();
        let mut g = LieAlgebraData::from_brackets(self.algebra.dim, &entries)?;
        if let Some(labels) = &self.algebra.labels {
            g = g.with_labels(labels.clone());
        }
        Ok(g)
    }

    pub fn basic_block(&self) -> Result<&BasicBlock, ModelError> {
        self.basic.as_ref().ok_or(ModelError::MissingBasic)
    }

    /// The basic model, without the axiom checks.
    pub fn basic_model(&self) -> Result<BasicModel, BuildError> {
        let b = self.basic.as_ref().expect("checked by basic_block");
        let names = b.names();
        let vector = |c: &Combination| c.to_vector(&names).expect("names checked at parse time");
        let index = |n: &str| names.iter().position(|x| x == n).expect("names checked at parse time");
        let mut builder = b
            .generators
            .iter()
            .fold(BasicModelBuilder::new(), |acc, (n, d)| acc.generator(n, *d));
        if let Some(u) = &b.unit {
            builder = builder.unit(u);
        }
        if let Some(t) = b.top_degree {
            builder = builder.top_degree(t);
        }
        for ((l, r), v) in &b.products {
            builder = builder.product(index(l), index(r), vector(v));
        }
        for (n, v) in &b.differential {
            builder = builder.differential(index(n), vector(v));
        }
        Ok(builder.build()?)
    }

    /// Curvature vectors `e_1, …, e_s`; missing entries are zero.
    pub fn curvature_vectors(&self) -> Vec<Vec<Rational>> {
        let names = self.basic.as_ref().map(BasicBlock::names).unwrap_or_default();
        (1..=self.algebra.dim)
            .map(|i| match self.curvature.get(&i) {
                Some(c) => c.to_vector(&names).expect("names checked at parse time"),
                None => vec![Rational::zero(); names.len()],
            })
            .collect()
    }

    pub fn metric(&self) -> Option<Result<InnerProductData, LieError>> {
        self.metric
            .as_ref()
            .map(|g| InnerProductData::new(RationalMatrix::from_rows(g.clone(), self.algebra.dim)))
    }

    /// Builds and validates the whole model.
    pub fn gmodel(&self) -> Result<GModel, BuildError> {
        let g = self.algebra()?;
        let b = self.basic_model()?;
        Ok(GModel::new(g, b, self.curvature_vectors())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lieseq::linalg::{frac, q};

    #[test]
    fn expressions() {
        let c = parse_combination("2*ab - 1/2 v + t").unwrap();
        assert_eq!(
            c.0,
            vec![("ab".into(), q(2)), ("v".into(), frac(-1, 2)), ("t".into(), q(1))]
        );
        assert_eq!(c.to_string(), "2*ab - 1/2*v + t");
        assert!(parse_combination("0").unwrap().is_zero());
        assert!(parse_combination("v - v").unwrap().is_zero());
        assert_eq!(parse_combination("-x").unwrap().to_string(), "-x");
        assert!(parse_combination("").is_err());
        assert!(parse_combination("2").is_err());
        assert!(parse_combination("1/0*a").is_err());
        assert!(parse_combination("*a").is_err());
    }

    const HOPF: &str = r#"
        # circle bundle over S^2
        [algebra]
        dim = 1

        [basic]
        unit = "one"
        generators = [{ name = "one", degree = 0 }, { name = "v", degree = 2 }]

        [curvature]
        e1 = "v"
    "#;

    #[test]
    fn parses_and_round_trips() {
        let doc = parse(HOPF).unwrap();
        assert_eq!(doc.algebra.dim, 1);
        assert_eq!(doc.curvature_vectors(), vec![vec![q(0), q(1)]]);
        let again = parse(&serialize(&doc)).unwrap();
        assert_eq!(again, doc);
        assert!(doc.gmodel().is_ok());
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse("[algebra]\ndim = 2\nbrackets = [[1, 3, 1, 1]]"), Err(ModelError::Structure(_))));
        assert!(matches!(parse("[algebra]\ndim = 1\nfoo = 1"), Err(ModelError::Syntax(_))));
        let unknown = "[algebra]\ndim = 1\n[basic]\ngenerators = [{name = \"one\", degree = 0}]\n[curvature]\ne1 = \"v\"";
        assert!(matches!(parse(unknown), Err(ModelError::UnknownName(_))));
        let key = "[algebra]\ndim = 1\n[basic]\ngenerators = [{name = \"one\", degree = 0}]\n[curvature]\ne2 = \"0\"";
        assert!(matches!(parse(key), Err(ModelError::Structure(_))));
    }

    #[test]
    fn rational_brackets_and_metric() {
        let text = "[algebra]\ndim = 2\nbrackets = [[1, 2, 2, \"1/2\"]]\n[metric]\ngram = [[2, 0], [0, \"1/3\"]]";
        let doc = parse(text).unwrap();
        assert_eq!(doc.algebra.brackets[0].3, frac(1, 2));
        assert_eq!(doc.metric.as_ref().unwrap()[1][1], frac(1, 3));
        assert_eq!(parse(&serialize(&doc)).unwrap(), doc);
        assert!(doc.metric().unwrap().is_ok());
    }
}
