//! The line-oriented `.ualg` format.
//!
//! ```text
//! # comment
//! algebra BSpin7
//! generator w4 : 4
//! sq 2 w4 = w6
//! relation y5^2 = y3^2*v4 + y3*v7
//! loopnames e8 f8 z7
//! assume section-commutes-with-steenrod
//! ```
//!
//! Loop presentations additionally tag generators with `base <source>` or
//! `derived <source>` and list removed suspensions as
//! `eliminated y6 : 6 derived w7 = y3^2`.

use std::collections::{BTreeMap, BTreeSet};

use super::text::{format_lead, format_poly, parse_monomial, parse_poly, TextError};
use super::{Body, Lint, Metadata, ParseError, PresentationFile};
use crate::algebra::{table_powers, AlgebraError, Generator, Monomial, Poly, Presentation, Relation, SqTable};
use crate::loops::{Elimination, LoopNames, LoopPresentation, Role};

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into() }
    }

    /// Column (1-based) of `part`, a subslice of this line.
    fn column_of(&self, part: &str) -> usize {
        let offset = part.as_ptr() as usize - self.text.as_ptr() as usize;
        self.text[..offset].chars().count() + 1
    }

    fn text_error(&self, part: &str, e: TextError) -> ParseError {
        self.error(self.column_of(part) + e.column - 1, e.message)
    }
}

fn split_eq<'a>(line: &Line<'a>, rest: &'a str) -> Result<(&'a str, &'a str), ParseError> {
    rest.split_once('=').ok_or_else(|| line.error(line.text.len() + 1, "expected `=`"))
}

fn parse_degree(line: &Line<'_>, s: &str) -> Result<u32, ParseError> {
    let t = s.trim();
    t.parse::<u32>().map_err(|_| line.error(line.column_of(t), format!("expected a degree, found `{t}`")))
}

struct PendingGenerator<'a> {
    line: Line<'a>,
    generator: Generator,
    role: Option<Role>,
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let mut name: Option<String> = None;
    let mut gens: Vec<PendingGenerator> = Vec::new();
    let mut sq_lines: Vec<(Line, u32, &str, &str)> = Vec::new();
    let mut rel_lines: Vec<(Line, &str, &str)> = Vec::new();
    let mut elim_lines: Vec<(Line, Generator, String, &str)> = Vec::new();
    let mut metadata = Metadata::default();
    let mut any_directive = false;

    for (number, raw) in text.lines().enumerate() {
        let line = Line { number: number + 1, text: raw };
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        any_directive = true;
        let keyword_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let (keyword, rest) = trimmed.split_at(keyword_len);
        let words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "algebra" => {
                if name.is_some() {
                    return Err(line.error(1, "duplicate `algebra` line"));
                }
                let [n] = words.as_slice() else {
                    return Err(line.error(1, "expected `algebra <name>`"));
                };
                name = Some(n.to_string());
            }
            "generator" => {
                let (gname, tail) =
                    rest.split_once(':').ok_or_else(|| line.error(1, "expected `generator <name> : <degree>`"))?;
                let gname = gname.trim();
                if gname.is_empty() || !is_identifier(gname) {
                    return Err(line.error(line.column_of(rest), format!("invalid generator name `{gname}`")));
                }
                let tail_words: Vec<&str> = tail.split_whitespace().collect();
                let (degree, role) = match tail_words.as_slice() {
                    [d] => (parse_degree(&line, d)?, None),
                    [d, "base", s] => (parse_degree(&line, d)?, Some(Role::Base(s.to_string()))),
                    [d, "derived", s] => (parse_degree(&line, d)?, Some(Role::Derived(s.to_string()))),
                    _ => return Err(line.error(line.column_of(tail), "expected `<degree> [base|derived <source>]`")),
                };
                if degree == 0 {
                    return Err(line.error(line.column_of(tail.trim()), "degree must be positive"));
                }
                if let Some(prev) = gens.iter().find(|g| g.generator.name == gname) {
                    return Err(line.error(
                        line.column_of(gname),
                        format!("duplicate generator `{gname}` (first declared on line {})", prev.line.number),
                    ));
                }
                gens.push(PendingGenerator { generator: Generator::new(gname, degree), role, line });
            }
            "sq" => {
                let (lhs, value) = split_eq(&line, rest)?;
                let lw: Vec<&str> = lhs.split_whitespace().collect();
                let [k, g] = lw.as_slice() else {
                    return Err(line.error(line.column_of(lhs), "expected `sq <k> <generator> = <polynomial>`"));
                };
                let k = k
                    .parse::<u32>()
                    .map_err(|_| line.error(line.column_of(k), format!("expected an integer, found `{k}`")))?;
                sq_lines.push((line, k, g, value));
            }
            "relation" => {
                let (lead, tail) = split_eq(&line, rest)?;
                rel_lines.push((line, lead, tail));
            }
            "eliminated" => {
                let (lhs, value) = split_eq(&line, rest)?;
                let (gname, spec) = lhs.split_once(':').ok_or_else(|| {
                    line.error(1, "expected `eliminated <name> : <degree> derived <source> = <polynomial>`")
                })?;
                let sw: Vec<&str> = spec.split_whitespace().collect();
                let [d, "derived", source] = sw.as_slice() else {
                    return Err(line.error(line.column_of(spec), "expected `<degree> derived <source>`"));
                };
                let degree = parse_degree(&line, d)?;
                let generator = Generator::new(gname.trim(), degree);
                elim_lines.push((line, generator, source.to_string(), value));
            }
            "loopnames" => {
                let [base, v, y] = words.as_slice() else {
                    return Err(line.error(1, "expected `loopnames <generator> <v-name> <y-name>`"));
                };
                metadata.names.insert(*base, *v, *y);
            }
            "assume" => {
                let [flag] = words.as_slice() else {
                    return Err(line.error(1, "expected `assume <flag>`"));
                };
                metadata.assumptions.insert(flag.to_string());
            }
            other => return Err(line.error(line.column_of(other), format!("unknown directive `{other}`"))),
        }
    }

    if !any_directive {
        return Err(ParseError { line: 1, column: 1, message: "no generators".into() });
    }
    let name = name.ok_or(ParseError { line: 1, column: 1, message: "missing `algebra <name>` line".into() })?;

    let generators: Vec<Generator> = gens.iter().map(|g| g.generator.clone()).collect();
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
    let index = |n: &str| names.iter().position(|x| x == n);

    let mut table = SqTable::new();
    let mut given: BTreeSet<(usize, u32)> = BTreeSet::new();
    for (line, k, g, value) in &sq_lines {
        let gi = index(g).ok_or_else(|| line.error(line.column_of(g), format!("unknown generator `{g}`")))?;
        let poly = parse_poly(value, names.as_slice()).map_err(|e| line.text_error(value, e))?;
        let gd = degrees[gi];
        if !k.is_power_of_two() && *k != 0 && *k < gd {
            return Err(line.error(line.column_of(line.text.trim_start()), format!("k = {k} is not a power of two")));
        }
        for m in poly.terms() {
            let got = m.degree(&degrees);
            if got != gd + k {
                return Err(line.error(
                    line.column_of(value.trim_start()),
                    format!("degree mismatch: expected {}, got {got}", gd + k),
                ));
            }
        }
        if !given.insert((gi, *k)) {
            return Err(line.error(1, format!("duplicate entry for Sq^{k} {g}")));
        }
        let forced: Option<Poly> = if *k == 0 {
            Some(Monomial::generator(names.len(), gi, 1).into())
        } else if *k == gd {
            Some(Monomial::generator(names.len(), gi, 2).into())
        } else if *k > gd {
            Some(Poly::zero())
        } else {
            None
        };
        match forced {
            Some(f) if f != poly => {
                return Err(line.error(
                    line.column_of(value.trim_start()),
                    format!("Sq^{k} {g} is forced by instability and cannot be `{}`", value.trim()),
                ))
            }
            Some(_) => {}
            None => {
                if !poly.is_zero() {
                    table.insert(gi, *k, poly);
                }
            }
        }
    }

    let mut relations = Vec::new();
    for (line, lead, tail) in &rel_lines {
        let lead_m = parse_monomial(lead, names.as_slice()).map_err(|e| line.text_error(lead, e))?;
        let tail_p = parse_poly(tail, names.as_slice()).map_err(|e| line.text_error(tail, e))?;
        let expected = lead_m.degree(&degrees);
        for m in tail_p.terms() {
            let got = m.degree(&degrees);
            if got != expected {
                return Err(line.error(
                    line.column_of(tail.trim_start()),
                    format!("degree mismatch: expected {expected}, got {got}"),
                ));
            }
        }
        relations.push(Relation { lead: lead_m, tail: tail_p });
    }

    let presentation = Presentation::new(&name, generators, table, relations).map_err(|e| {
        let line_of = |i: usize| rel_lines.get(i).map_or(1, |(l, _, _)| l.number);
        let line = match &e {
            AlgebraError::ConstantLead { index }
            | AlgebraError::RelationDegree { index, .. }
            | AlgebraError::LeadDividesTail { index }
            | AlgebraError::RelationOrder { index } => line_of(*index),
            _ => 1,
        };
        ParseError { line, column: 1, message: e.to_string() }
    })?;

    let mut lints = Vec::new();
    for (g, k) in presentation.defaulted_entries() {
        if !given.contains(&(g, k)) {
            lints.push(Lint::DefaultedEntry { generator: names[g].clone(), k });
        }
    }

    let has_roles = gens.iter().any(|g| g.role.is_some());
    let body =
        if has_roles || !elim_lines.is_empty() {
            let mut roles = Vec::new();
            for g in &gens {
                roles.push(g.role.clone().ok_or_else(|| {
                    g.line.error(1, "loop presentations need `base` or `derived` on every generator")
                })?);
            }
            let mut eliminations = Vec::new();
            for (line, generator, source, value) in &elim_lines {
                let v = parse_poly(value, names.as_slice()).map_err(|e| line.text_error(value, e))?;
                eliminations.push(Elimination { generator: generator.clone(), source: source.clone(), value: v });
            }
            let first = elim_lines.first().map_or(1, |(l, ..)| l.number);
            Body::Loop(LoopPresentation::new(presentation, roles, eliminations).map_err(|e| ParseError {
                line: first,
                column: 1,
                message: e.to_string(),
            })?)
        } else {
            Body::Plain(presentation)
        };
    Ok(PresentationFile { body, metadata, lints })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Writes a file back in `.ualg` form, with every tabulated entry explicit.
pub fn write(file: &PresentationFile) -> String {
    let p = file.presentation();
    let mut out = String::new();
    out.push_str(&format!("algebra {}\n", p.name()));
    let roles = file.loop_presentation().map(|l| l.roles());
    for (i, g) in p.generators().iter().enumerate() {
        match roles.map(|r| &r[i]) {
            None => out.push_str(&format!("generator {} : {}\n", g.name, g.degree)),
            Some(Role::Base(s)) => out.push_str(&format!("generator {} : {} base {s}\n", g.name, g.degree)),
            Some(Role::Derived(s)) => out.push_str(&format!("generator {} : {} derived {s}\n", g.name, g.degree)),
        }
    }
    write_names(&file.metadata.names, &mut out);
    for flag in &file.metadata.assumptions {
        out.push_str(&format!("assume {flag}\n"));
    }
    for (g, gen) in p.generators().iter().enumerate() {
        for k in table_powers(gen.degree) {
            let value = p.table().get(g, k).cloned().unwrap_or_default();
            out.push_str(&format!("sq {k} {} = {}\n", gen.name, format_poly(&value, p)));
        }
    }
    for r in p.relations() {
        out.push_str(&format!("relation {} = {}\n", format_lead(&r.lead, p), format_poly(&r.tail, p)));
    }
    if let Some(l) = file.loop_presentation() {
        for e in l.eliminations() {
            out.push_str(&format!(
                "eliminated {} : {} derived {} = {}\n",
                e.generator.name,
                e.generator.degree,
                e.source,
                format_poly(&e.value, p)
            ));
        }
    }
    out
}

fn write_names(names: &LoopNames, out: &mut String) {
    let sorted: BTreeMap<_, _> = names.iter().collect();
    for (base, (v, y)) in sorted {
        out.push_str(&format!("loopnames {base} {v} {y}\n"));
    }
}
