#![allow(dead_code)]

use std::sync::OnceLock;

use loopcoh::io::corpus::{self, CORPUS};
use loopcoh::io::parse_poly;
use loopcoh::loops::{derive_unchecked, LoopPresentation};
use loopcoh::{Poly, Presentation};

pub fn base(name: &str) -> Presentation {
    corpus::entry(name).unwrap().base().unwrap().into_presentation()
}

pub fn derived(name: &str) -> LoopPresentation {
    let f = corpus::entry(name).unwrap().base().unwrap();
    derive_unchecked(f.presentation(), &f.metadata.names).unwrap()
}

pub fn bases() -> Vec<Presentation> {
    CORPUS.iter().map(|e| e.base().unwrap().into_presentation()).collect()
}

pub fn all_derived() -> Vec<LoopPresentation> {
    CORPUS.iter().map(|e| derived(e.name)).collect()
}

/// The five base algebras followed by their loop presentations.
pub fn all_presentations() -> &'static [Presentation] {
    static ALL: OnceLock<Vec<Presentation>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut out = bases();
        out.extend(all_derived().into_iter().map(|l| l.presentation().clone()));
        out
    })
}

pub fn poly(p: &Presentation, s: &str) -> Poly {
    parse_poly(s, p).unwrap_or_else(|e| panic!("{s}: {}", e.message))
}
