//! Text and JSON renderings of expansions and scalars.
//!
//! Text mirrors the usual shorthand, one term per line:
//!
//! ```text
//! + N[A(1) A(2) A(3)]
//! + <1 2> N[A(3)]
//! - <1 3> N[A(2)]
//! + <2 3> N[A(1)]
//! ```
//!
//! Positions are 1-based. T-contractions print as `T<i j>`. Evaluated terms
//! print their complex coefficient instead of a sign. JSON output carries
//! `"schema": 1`; floats always have 17 significant digits.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::algebra::{Expansion, OperatorSymbol, SignedTerm};
use crate::dsl::{Atom, AtomName};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn format_complex(c: Complex64) -> String {
    let re = format_float(c.re);
    let im = format_float(c.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Display text of each position, from symbols alone.
pub fn labels_for(product: &[OperatorSymbol], field_name: AtomName) -> Vec<String> {
    product
        .iter()
        .map(|s| Atom::from_symbol(s, field_name).to_string())
        .collect()
}

fn is_unit(c: Complex64) -> Option<char> {
    if c == Complex64::new(1.0, 0.0) {
        Some('+')
    } else if c == Complex64::new(-1.0, 0.0) {
        Some('-')
    } else {
        None
    }
}

fn term_text(term: &SignedTerm, expansion: &Expansion, labels: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    match is_unit(term.coefficient).filter(|_| !expansion.evaluated) {
        Some(sign) => parts.push(sign.to_string()),
        None => parts.push(format!("({})", format_complex(term.coefficient))),
    }
    if !expansion.evaluated && !term.contractions.is_empty() {
        let prefix = if expansion.time_ordered { "T" } else { "" };
        let pairs: String = term
            .contractions
            .iter()
            .map(|&(i, j)| format!("{prefix}<{} {}>", i + 1, j + 1))
            .collect();
        parts.push(pairs);
    }
    if !term.is_scalar() {
        let inner: Vec<&str> = term.normal_factors.iter().map(|f| labels[f.position].as_str()).collect();
        parts.push(format!("N[{}]", inner.join(" ")));
    }
    parts.join(" ")
}

/// One line per term; an empty expansion renders as `0`.
pub fn render_text(expansion: &Expansion, labels: &[String]) -> String {
    if expansion.is_empty() {
        return "0\n".to_string();
    }
    let mut out = String::new();
    for term in expansion {
        out.push_str(&term_text(term, expansion, labels));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct JsonComplex {
    re: Box<RawValue>,
    im: Box<RawValue>,
}

impl JsonComplex {
    pub fn new(c: Complex64) -> Self {
        let raw = |x: f64| RawValue::from_string(format_float(x)).expect("formatted float is valid JSON");
        JsonComplex { re: raw(c.re), im: raw(c.im) }
    }
}

#[derive(Serialize)]
struct JsonAtom<'a> {
    atom: &'a str,
    position: usize,
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    coefficient: JsonComplex,
    contractions: Vec<[usize; 2]>,
    normal: Vec<JsonAtom<'a>>,
}

#[derive(Serialize)]
struct JsonExpansion<'a> {
    schema: u32,
    command: &'a str,
    statistics: &'a str,
    model: &'a str,
    length: usize,
    evaluated: bool,
    time_ordered: bool,
    terms: Vec<JsonTerm<'a>>,
}

/// Describes where a rendering came from.
#[derive(Debug, Clone, Copy)]
pub struct Provenance<'a> {
    pub command: &'a str,
    pub model: &'a str,
}

pub fn render_json(expansion: &Expansion, labels: &[String], origin: Provenance<'_>) -> String {
    let terms = expansion
        .iter()
        .map(|t| JsonTerm {
            coefficient: JsonComplex::new(t.coefficient),
            contractions: t.contractions.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            normal: t
                .normal_factors
                .iter()
                .map(|f| JsonAtom {
                    atom: &labels[f.position],
                    position: f.position + 1,
                })
                .collect(),
        })
        .collect();
    let doc = JsonExpansion {
        schema: SCHEMA_VERSION,
        command: origin.command,
        statistics: expansion.statistics.as_str(),
        model: origin.model,
        length: expansion.original_length,
        evaluated: expansion.evaluated,
        time_ordered: expansion.time_ordered,
        terms,
    };
    let mut s = serde_json::to_string(&doc).expect("expansion serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct JsonScalar<'a, X: Serialize> {
    schema: u32,
    command: &'a str,
    model: &'a str,
    value: JsonComplex,
    #[serde(flatten)]
    extra: X,
}

/// A scalar result with extra fields merged into the top-level object.
pub fn render_json_scalar<X: Serialize>(value: Complex64, origin: Provenance<'_>, extra: X) -> String {
    let doc = JsonScalar {
        schema: SCHEMA_VERSION,
        command: origin.command,
        model: origin.model,
        value: JsonComplex::new(value),
        extra,
    };
    let mut s = serde_json::to_string(&doc).expect("scalar serializes");
    s.push('\n');
    s
}
