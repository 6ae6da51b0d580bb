//! Bundled diagrams with their provenance, parsed from `data/corpus.txt`.

use crate::pd::{LinkDiagram, PdError};

const CORPUS: &str = include_str!("../data/corpus.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    /// Entries with the same class are diagrams of the same link.
    pub class: &'static str,
    pub pd: &'static str,
    pub provenance: &'static str,
}

impl CorpusEntry {
    pub fn diagram(&self) -> Result<LinkDiagram, PdError> {
        LinkDiagram::parse(self.pd)
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&'static str> = l.splitn(4, '|').map(str::trim).collect();
            assert_eq!(f.len(), 4, "malformed corpus line: {l}");
            CorpusEntry { name: f[0], class: f[1], pd: f[2], provenance: f[3] }
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

/// Every pair of distinct entries in the same class.
pub fn equivalent_pairs() -> Vec<(CorpusEntry, CorpusEntry)> {
    let all = corpus();
    let mut out = Vec::new();
    for (a, x) in all.iter().enumerate() {
        for y in &all[a + 1..] {
            if x.class == y.class {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}
