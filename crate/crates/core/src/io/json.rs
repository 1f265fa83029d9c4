//! Canonical JSON: sorted keys, two-space indentation, polynomials as text
//! with terms largest first, every tabulated `Sq^k` listed (zeros included).
//!
//! The JSON is read by translating it back into `.ualg` lines, so both
//! formats share one validator.

use serde::Deserialize;
use serde_json::{json, Value};

use super::dsl;
use super::text::{format_lead, format_poly};
use super::{Body, ParseError, PresentationFile};
use crate::algebra::checks::{CoherenceReport, ConfluenceReport, InstabilityReport, InstabilityViolation};
use crate::algebra::{table_powers, Presentation};
use crate::loops::Role;

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// The canonical object for a file, with an optional dimension list.
pub fn to_value(file: &PresentationFile, poincare: Option<&[u64]>) -> Value {
    let p = file.presentation();
    let roles = file.loop_presentation().map(|l| l.roles());
    let generators: Vec<Value> = p
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| match roles.map(|r| &r[i]) {
            None => json!({ "name": g.name, "degree": g.degree }),
            Some(Role::Base(s)) => json!({ "name": g.name, "degree": g.degree, "role": "base", "source": s }),
            Some(Role::Derived(s)) => {
                json!({ "name": g.name, "degree": g.degree, "role": "derived", "source": s })
            }
        })
        .collect();
    let mut sq = Vec::new();
    for (g, gen) in p.generators().iter().enumerate() {
        for k in table_powers(gen.degree) {
            let value = p.table().get(g, k).cloned().unwrap_or_default();
            sq.push(json!({ "generator": gen.name, "k": k, "value": format_poly(&value, p) }));
        }
    }
    let relations: Vec<Value> = p
        .relations()
        .iter()
        .map(|r| json!({ "lead": format_lead(&r.lead, p), "tail": format_poly(&r.tail, p) }))
        .collect();
    let mut obj = json!({
        "algebra": p.name(),
        "generators": generators,
        "sq": sq,
        "relations": relations,
    });
    let map = obj.as_object_mut().expect("object");
    if let Body::Loop(l) = &file.body {
        let eliminations: Vec<Value> = l
            .eliminations()
            .iter()
            .map(|e| {
                json!({
                    "generator": e.generator.name,
                    "degree": e.generator.degree,
                    "source": e.source,
                    "value": format_poly(&e.value, p),
                })
            })
            .collect();
        map.insert("eliminations".into(), eliminations.into());
    }
    let names: Vec<Value> =
        file.metadata.names.iter().map(|(base, (v, y))| json!({ "base": base, "v": v, "y": y })).collect();
    if !names.is_empty() {
        map.insert("loopnames".into(), names.into());
    }
    if !file.metadata.assumptions.is_empty() {
        map.insert("assumptions".into(), file.metadata.assumptions.iter().cloned().collect::<Vec<_>>().into());
    }
    if let Some(dims) = poincare {
        map.insert("poincare".into(), dims.to_vec().into());
    }
    obj
}

pub fn serialize(file: &PresentationFile) -> String {
    to_text(&to_value(file, None))
}

pub fn serialize_presentation(p: &Presentation) -> String {
    serialize(&PresentationFile::plain(p.clone()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGenerator {
    name: String,
    degree: u32,
    role: Option<String>,
    source: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSq {
    generator: String,
    k: u32,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRelation {
    lead: String,
    tail: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonElimination {
    generator: String,
    degree: u32,
    source: String,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonNames {
    base: String,
    v: String,
    y: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFile {
    algebra: String,
    generators: Vec<JsonGenerator>,
    #[serde(default)]
    sq: Vec<JsonSq>,
    #[serde(default)]
    relations: Vec<JsonRelation>,
    #[serde(default)]
    eliminations: Vec<JsonElimination>,
    #[serde(default)]
    loopnames: Vec<JsonNames>,
    #[serde(default)]
    assumptions: Vec<String>,
    #[serde(default)]
    #[allow(dead_code)]
    poincare: Vec<u64>,
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let file: JsonFile = serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    // One `.ualg` line per JSON element, remembering where each came from.
    let mut lines = Vec::new();
    let mut origin = Vec::new();
    let mut push = |line: String, path: String| {
        lines.push(line);
        origin.push(path);
    };
    push(format!("algebra {}", file.algebra), "algebra".into());
    for (i, g) in file.generators.iter().enumerate() {
        let role = match (&g.role, &g.source) {
            (None, None) => String::new(),
            (Some(r), Some(s)) if r == "base" || r == "derived" => format!(" {r} {s}"),
            _ => {
                return Err(ParseError {
                    line: 1,
                    column: 1,
                    message: format!("generators[{i}]: role must be `base` or `derived` with a source"),
                })
            }
        };
        push(format!("generator {} : {}{role}", g.name, g.degree), format!("generators[{i}]"));
    }
    for (i, n) in file.loopnames.iter().enumerate() {
        push(format!("loopnames {} {} {}", n.base, n.v, n.y), format!("loopnames[{i}]"));
    }
    for (i, a) in file.assumptions.iter().enumerate() {
        push(format!("assume {a}"), format!("assumptions[{i}]"));
    }
    for (i, s) in file.sq.iter().enumerate() {
        push(format!("sq {} {} = {}", s.k, s.generator, s.value), format!("sq[{i}]"));
    }
    for (i, r) in file.relations.iter().enumerate() {
        push(format!("relation {} = {}", r.lead, r.tail), format!("relations[{i}]"));
    }
    for (i, e) in file.eliminations.iter().enumerate() {
        push(
            format!("eliminated {} : {} derived {} = {}", e.generator, e.degree, e.source, e.value),
            format!("eliminations[{i}]"),
        );
    }
    if lines.iter().any(|l| l.contains('\n') || l.contains('#')) {
        return Err(ParseError { line: 1, column: 1, message: "strings may not contain newlines or `#`".into() });
    }
    let mut parsed = dsl::parse(&lines.join("\n")).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: format!("{}: {}", origin.get(e.line.wrapping_sub(1)).map_or("input", |s| s.as_str()), e.message),
    })?;
    // Every entry is explicit in JSON; zeros omitted by hand are still zeros.
    parsed.lints.clear();
    Ok(parsed)
}

fn names(p: &Presentation) -> Vec<&str> {
    p.generators().iter().map(|g| g.name.as_str()).collect()
}

pub fn coherence_value(p: &Presentation, r: &CoherenceReport) -> Value {
    let n = names(p);
    json!({
        "bound": r.bound,
        "passed": r.passed(),
        "adem_violations": r.violations.iter().map(|v| json!({
            "monomial": super::format_monomial(&v.monomial, &n),
            "a": v.a,
            "b": v.b,
            "lhs": format_poly(&v.lhs, p),
            "rhs": format_poly(&v.rhs, p),
        })).collect::<Vec<_>>(),
        "ideal_violations": r.ideal_violations.iter().map(|v| json!({
            "relation": format_lead(&p.relations()[v.relation].lead, p),
            "k": v.k,
            "lead_image": format_poly(&v.lead_image, p),
            "tail_image": format_poly(&v.tail_image, p),
        })).collect::<Vec<_>>(),
    })
}

pub fn confluence_value(p: &Presentation, r: &ConfluenceReport) -> Value {
    let n = names(p);
    json!({
        "bound": r.bound,
        "passed": r.passed(),
        "divergences": r.divergences.iter().map(|d| json!({
            "monomial": super::format_monomial(&d.monomial, &n),
            "reductions": d.reductions.iter().map(|(i, f)| json!({
                "relation": format_lead(&p.relations()[*i].lead, p),
                "normal_form": format_poly(f, p),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn instability_value(p: &Presentation, r: &InstabilityReport) -> Value {
    let n = names(p);
    json!({
        "bound": r.bound,
        "passed": r.passed(),
        "violations": r.violations.iter().map(|v| match v {
            InstabilityViolation::TopSquare { monomial, got, expected } => json!({
                "kind": "top-square",
                "monomial": super::format_monomial(monomial, &n),
                "got": format_poly(got, p),
                "expected": format_poly(expected, p),
            }),
            InstabilityViolation::AboveDegree { monomial, k, got } => json!({
                "kind": "above-degree",
                "monomial": super::format_monomial(monomial, &n),
                "k": k,
                "got": format_poly(got, p),
            }),
        }).collect::<Vec<_>>(),
    })
}

/// Pretty-printed with a trailing newline, as written to files.
pub fn value_to_string(v: &Value) -> String {
    to_text(v)
}
