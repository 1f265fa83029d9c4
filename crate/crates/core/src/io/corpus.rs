//! The bundled base algebras and the expected loop presentations.

use std::collections::BTreeMap;

use super::text::{format_lead, format_poly, parse_poly};
use super::{dsl, json, ParseError, PresentationFile};
use crate::algebra::{table_powers, Poly, Presentation};
use crate::loops::{LoopPresentation, Role};

/// One base algebra and its expected derived presentation.
#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub base_file: &'static str,
    pub base_text: &'static str,
    pub golden_file: &'static str,
    pub golden_text: &'static str,
}

macro_rules! entry {
    ($name:literal, $base:literal, $golden:literal) => {
        CorpusEntry {
            name: $name,
            base_file: $base,
            base_text: include_str!(concat!("../../corpus/", $base)),
            golden_file: $golden,
            golden_text: include_str!(concat!("../../corpus/golden/", $golden)),
        }
    };
}

pub const CORPUS: [CorpusEntry; 5] = [
    entry!("BSpin7", "bspin7.ualg", "lbspin7.json"),
    entry!("BSpin8", "bspin8.ualg", "lbspin8.json"),
    entry!("BSpin9", "bspin9.ualg", "lbspin9.json"),
    entry!("BF4", "bf4.ualg", "lbf4.json"),
    entry!("BDI4", "bdi4.ualg", "lbdi4.json"),
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl CorpusEntry {
    pub fn base(&self) -> Result<PresentationFile, ParseError> {
        dsl::parse(self.base_text)
    }

    pub fn golden(&self) -> Result<PresentationFile, ParseError> {
        json::parse(self.golden_text)
    }
}

/// Moves `e` from `from` into `to` by generator name.
fn transport(e: &Poly, from: &Presentation, to: &Presentation) -> Result<Poly, String> {
    let text = format_poly(e, from);
    parse_poly(&text, to).map_err(|err| format!("`{text}`: {}", err.message))
}

/// Differences between a derived presentation and an expected one, as
/// human-readable lines; empty when they agree.
pub fn compare_golden(derived: &LoopPresentation, golden: &PresentationFile) -> Vec<String> {
    let mut diffs = Vec::new();
    let Some(expected) = golden.loop_presentation() else {
        return vec!["expected file is not a loop presentation".into()];
    };
    let d = derived.presentation();
    let g = expected.presentation();

    let describe = |p: &Presentation, roles: &[Role]| -> BTreeMap<String, (u32, Role)> {
        p.generators().iter().zip(roles).map(|(x, r)| (x.name.clone(), (x.degree, r.clone()))).collect()
    };
    let dg = describe(d, derived.roles());
    let gg = describe(g, expected.roles());
    if dg != gg {
        diffs.push(format!(
            "generators differ: derived {:?}, expected {:?}",
            dg.keys().collect::<Vec<_>>(),
            gg.keys().collect::<Vec<_>>()
        ));
        return diffs;
    }

    let elim = |l: &LoopPresentation| -> BTreeMap<String, (u32, String, String)> {
        l.eliminations()
            .iter()
            .map(|e| {
                (
                    e.generator.name.clone(),
                    (e.generator.degree, e.source.clone(), format_poly(&e.value, l.presentation())),
                )
            })
            .collect()
    };
    let (de, ge) = (elim(derived), elim(expected));
    if de.keys().collect::<Vec<_>>() != ge.keys().collect::<Vec<_>>() {
        diffs.push(format!("eliminated generators differ: derived {:?}, expected {:?}", de.keys(), ge.keys()));
    } else {
        for e in expected.eliminations() {
            let got = &derived.eliminations().iter().find(|x| x.generator.name == e.generator.name).expect("same keys");
            match transport(&e.value, g, d) {
                Ok(v) if d.normal_form(&v) == got.value && got.source == e.source => {}
                _ => diffs.push(format!(
                    "elimination {}: derived {}, expected {}",
                    e.generator.name,
                    format_poly(&got.value, d),
                    format_poly(&e.value, g)
                )),
            }
        }
    }

    let leads = |p: &Presentation| -> BTreeMap<String, Poly> {
        p.relations().iter().map(|r| (format_lead(&r.lead, p), r.tail.clone())).collect()
    };
    let (dr, gr) = (leads(d), leads(g));
    for (lead, tail) in &gr {
        match dr.get(lead) {
            None => diffs.push(format!("missing relation with lead {lead}")),
            Some(dt) => match transport(tail, g, d) {
                Ok(t) if d.normal_form(&t) == *dt => {}
                _ => diffs.push(format!(
                    "relation {lead}: derived {}, expected {}",
                    format_poly(dt, d),
                    format_poly(tail, g)
                )),
            },
        }
    }
    for lead in dr.keys().filter(|l| !gr.contains_key(*l)) {
        diffs.push(format!("unexpected relation with lead {lead}"));
    }

    for (gi, gen) in g.generators().iter().enumerate() {
        let di = d.generator_index(&gen.name).expect("same generators");
        for k in table_powers(gen.degree) {
            let want = g.table().get(gi, k).cloned().unwrap_or_default();
            let got = d.table().get(di, k).cloned().unwrap_or_default();
            match transport(&want, g, d) {
                Ok(w) if d.normal_form(&w) == got => {}
                _ => diffs.push(format!(
                    "Sq^{k} {}: derived {}, expected {}",
                    gen.name,
                    format_poly(&got, d),
                    format_poly(&want, g)
                )),
            }
        }
    }
    diffs
}
