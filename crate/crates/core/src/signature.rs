//! Double signatures: objects, horizontal and vertical generators, and
//! generating 2-cells with their four boundary words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjectId = String;
pub type HGenId = String;
pub type VGenId = String;
pub type CellGenId = String;

/// A composable word of generators anchored at its start object.
///
/// The same representation serves for horizontal and vertical words; which
/// generator table it refers to is fixed by context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Word {
    pub at: ObjectId,
    pub gens: Vec<String>,
}

pub type HWord = Word;
pub type VWord = Word;

impl Word {
    pub fn new(at: impl Into<String>, gens: &[&str]) -> Self {
        Word {
            at: at.into(),
            gens: gens.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn empty(at: impl Into<String>) -> Self {
        Word {
            at: at.into(),
            gens: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Concatenation; the caller is responsible for the chain condition.
    pub fn concat(&self, other: &Word) -> Word {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Word {
            at: self.at.clone(),
            gens,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            write!(f, "1@{}", self.at)
        } else {
            write!(f, "{}", self.gens.join("."))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    H,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellBoundary {
    pub domh: HWord,
    pub codh: HWord,
    pub domv: VWord,
    pub codv: VWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DoubleSignature {
    pub objects: BTreeSet<ObjectId>,
    pub hgens: BTreeMap<HGenId, (ObjectId, ObjectId)>,
    pub vgens: BTreeMap<VGenId, (ObjectId, ObjectId)>,
    pub cells: BTreeMap<CellGenId, CellBoundary>,
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl DoubleSignature {
    pub fn gens(&self, kind: Kind) -> &BTreeMap<String, (ObjectId, ObjectId)> {
        match kind {
            Kind::H => &self.hgens,
            Kind::V => &self.vgens,
        }
    }

    pub fn cell(&self, name: &str) -> Result<&CellBoundary> {
        self.cells
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Checks the chain condition and returns the end object.
    pub fn check_word(&self, kind: Kind, word: &Word) -> Result<ObjectId> {
        if !self.objects.contains(&word.at) {
            return Err(Error::Validation(format!("unknown object `{}`", word.at)));
        }
        let table = self.gens(kind);
        let mut cur = &word.at;
        for g in &word.gens {
            let (dom, cod) = table
                .get(g)
                .ok_or_else(|| Error::UnknownGenerator(g.clone()))?;
            if dom != cur {
                return Err(Error::Validation(format!(
                    "broken chain in word {word}: `{g}` starts at {dom}, expected {cur}"
                )));
            }
            cur = cod;
        }
        Ok(cur.clone())
    }

    pub fn word_endpoints(&self, kind: Kind, word: &Word) -> Result<(ObjectId, ObjectId)> {
        let end = self.check_word(kind, word)?;
        Ok((word.at.clone(), end))
    }

    /// The object reached after the first `i` generators of `word`.
    pub fn object_at(&self, kind: Kind, word: &Word, i: usize) -> Result<ObjectId> {
        if i > word.len() {
            return Err(Error::Range(format!(
                "cut {i} outside word of length {}",
                word.len()
            )));
        }
        if i == 0 {
            return Ok(word.at.clone());
        }
        let g = &word.gens[i - 1];
        self.gens(kind)
            .get(g)
            .map(|(_, cod)| cod.clone())
            .ok_or_else(|| Error::UnknownGenerator(g.clone()))
    }

    /// The contiguous subword of `len` generators following cut `i`.
    pub fn factor_at(&self, kind: Kind, word: &Word, i: usize, len: usize) -> Result<Word> {
        if i + len > word.len() {
            return Err(Error::Range(format!(
                "factor ({i}, {len}) outside word of length {}",
                word.len()
            )));
        }
        Ok(Word {
            at: self.object_at(kind, word, i)?,
            gens: word.gens[i..i + len].to_vec(),
        })
    }

    pub fn check_boundary(&self, name: &str, b: &CellBoundary) -> Result<()> {
        let (dh0, dh1) = self.word_endpoints(Kind::H, &b.domh)?;
        let (ch0, ch1) = self.word_endpoints(Kind::H, &b.codh)?;
        let (dv0, dv1) = self.word_endpoints(Kind::V, &b.domv)?;
        let (cv0, cv1) = self.word_endpoints(Kind::V, &b.codv)?;
        let corners = [
            (dh0, dv0, "start(domh) = start(domv)"),
            (dh1, cv0, "end(domh) = start(codv)"),
            (dv1, ch0, "end(domv) = start(codh)"),
            (ch1, cv1, "end(codh) = end(codv)"),
        ];
        for (a, b, rule) in corners {
            if a != b {
                return Err(Error::Validation(format!(
                    "corner equation {rule} fails for `{name}`: {a} vs {b}"
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for o in &self.objects {
            if !is_ident(o) {
                return Err(Error::Validation(format!("bad object name `{o}`")));
            }
        }
        for kind in [Kind::H, Kind::V] {
            for (name, (dom, cod)) in self.gens(kind) {
                if !is_ident(name) {
                    return Err(Error::Validation(format!("bad generator name `{name}`")));
                }
                for o in [dom, cod] {
                    if !self.objects.contains(o) {
                        return Err(Error::Validation(format!(
                            "unknown object `{o}` in generator `{name}`"
                        )));
                    }
                }
            }
        }
        for (name, b) in &self.cells {
            if !is_ident(name) {
                return Err(Error::Validation(format!("bad cell name `{name}`")));
            }
            self.check_boundary(name, b)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenDoc {
    name: String,
    dom: String,
    cod: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    name: String,
    domh: Word,
    codh: Word,
    domv: Word,
    codv: Word,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    objects: Vec<String>,
    hgens: Vec<GenDoc>,
    vgens: Vec<GenDoc>,
    cells: Vec<CellDoc>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        pos: e.column(),
        msg: format!("line {}: {e}", e.line()),
    }
}

pub fn load_signature(text: &str) -> Result<DoubleSignature> {
    let doc: SignatureDoc = serde_json::from_str(text).map_err(json_error)?;
    let mut sig = DoubleSignature::default();
    for o in doc.objects {
        if !sig.objects.insert(o.clone()) {
            return Err(Error::Validation(format!("duplicate object `{o}`")));
        }
    }
    for (docs, kind) in [(doc.hgens, Kind::H), (doc.vgens, Kind::V)] {
        for g in docs {
            let table = match kind {
                Kind::H => &mut sig.hgens,
                Kind::V => &mut sig.vgens,
            };
            if table.insert(g.name.clone(), (g.dom, g.cod)).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
    }
    for c in doc.cells {
        let b = CellBoundary {
            domh: c.domh,
            codh: c.codh,
            domv: c.domv,
            codv: c.codv,
        };
        if sig.cells.insert(c.name.clone(), b).is_some() {
            return Err(Error::Validation(format!("duplicate cell `{}`", c.name)));
        }
    }
    sig.validate()?;
    Ok(sig)
}

pub fn emit_signature(sig: &DoubleSignature) -> String {
    let gens = |t: &BTreeMap<String, (String, String)>| {
        t.iter()
            .map(|(name, (dom, cod))| GenDoc {
                name: name.clone(),
                dom: dom.clone(),
                cod: cod.clone(),
            })
            .collect()
    };
    let doc = SignatureDoc {
        objects: sig.objects.iter().cloned().collect(),
        hgens: gens(&sig.hgens),
        vgens: gens(&sig.vgens),
        cells: sig
            .cells
            .iter()
            .map(|(name, b)| CellDoc {
                name: name.clone(),
                domh: b.domh.clone(),
                codh: b.codh.clone(),
                domv: b.domv.clone(),
                codv: b.codv.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("signature documents always serialize")
}
