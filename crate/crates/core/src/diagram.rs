//! Layered string diagrams in the free 2-category generated by a double
//! signature: wire words, generator typings, level scans and whiskering.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::{DoubleSignature, ObjectId, Word};

/// A 1-generator of the 2-category. `H` runs dom to cod, `Vop` runs cod to dom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Wire {
    H { gen: String },
    Vop { gen: String },
}

impl Wire {
    pub fn h(g: &str) -> Self {
        Wire::H { gen: g.to_string() }
    }

    pub fn vop(g: &str) -> Self {
        Wire::Vop { gen: g.to_string() }
    }

    pub fn gen(&self) -> &str {
        match self {
            Wire::H { gen } | Wire::Vop { gen } => gen,
        }
    }

    pub fn is_h(&self) -> bool {
        matches!(self, Wire::H { .. })
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::H { gen } => write!(f, "{gen}"),
            Wire::Vop { gen } => write!(f, "{gen}^op"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireWord {
    pub at: ObjectId,
    pub wires: Vec<Wire>,
}

impl WireWord {
    pub fn empty(at: impl Into<String>) -> Self {
        WireWord {
            at: at.into(),
            wires: Vec::new(),
        }
    }

    pub fn new(at: impl Into<String>, wires: Vec<Wire>) -> Self {
        WireWord {
            at: at.into(),
            wires,
        }
    }

    pub fn len(&self) -> usize {
        self.wires.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wires.is_empty()
    }

    pub fn concat(&self, other: &WireWord) -> WireWord {
        let mut wires = self.wires.clone();
        wires.extend(other.wires.iter().cloned());
        WireWord {
            at: self.at.clone(),
            wires,
        }
    }

    /// H wires of a horizontal word.
    pub fn from_h(h: &Word) -> WireWord {
        WireWord {
            at: h.at.clone(),
            wires: h.gens.iter().map(|g| Wire::h(g)).collect(),
        }
    }
}

impl fmt::Display for WireWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.wires.is_empty() {
            return write!(f, "1@{}", self.at);
        }
        let parts: Vec<String> = self.wires.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoGenType {
    pub input: WireWord,
    pub output: WireWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    pub offset: usize,
    pub cell: String,
}

impl Level {
    pub fn new(offset: usize, cell: &str) -> Self {
        Level {
            offset,
            cell: cell.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayeredDiagram {
    pub domain: WireWord,
    pub levels: Vec<Level>,
}

impl LayeredDiagram {
    pub fn identity(w: WireWord) -> Self {
        LayeredDiagram {
            domain: w,
            levels: Vec::new(),
        }
    }

    pub fn cell_multiset(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for l in &self.levels {
            *m.entry(l.cell.as_str()).or_insert(0) += 1;
        }
        m
    }
}

/// The translated signature: wire generators plus one typing per cell.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Sig2 {
    pub hgens: BTreeMap<String, (ObjectId, ObjectId)>,
    pub vgens: BTreeMap<String, (ObjectId, ObjectId)>,
    pub types: BTreeMap<String, TwoGenType>,
}

impl Sig2 {
    pub fn ty(&self, cell: &str) -> Result<&TwoGenType> {
        self.types
            .get(cell)
            .ok_or_else(|| Error::UnknownGenerator(cell.to_string()))
    }

    /// (source, target) of a wire under the orientation convention.
    pub fn wire_ends(&self, w: &Wire) -> Result<(&ObjectId, &ObjectId)> {
        match w {
            Wire::H { gen } => self
                .hgens
                .get(gen)
                .map(|(d, c)| (d, c))
                .ok_or_else(|| Error::UnknownGenerator(gen.clone())),
            Wire::Vop { gen } => self
                .vgens
                .get(gen)
                .map(|(d, c)| (c, d))
                .ok_or_else(|| Error::UnknownGenerator(gen.clone())),
        }
    }

    /// Checks the chain condition; returns the end object.
    pub fn check_wire_word(&self, w: &WireWord) -> Result<ObjectId> {
        let mut cur = w.at.clone();
        for (i, wire) in w.wires.iter().enumerate() {
            let (s, t) = self.wire_ends(wire)?;
            if *s != cur {
                return Err(Error::Validation(format!(
                    "wire {i} ({wire}) starts at {s}, expected {cur}"
                )));
            }
            cur = t.clone();
        }
        Ok(cur)
    }

    /// Object at cut `i` of a chain-valid word.
    pub fn object_at(&self, w: &WireWord, i: usize) -> Result<ObjectId> {
        if i == 0 {
            return Ok(w.at.clone());
        }
        let wire = w
            .wires
            .get(i - 1)
            .ok_or_else(|| Error::Range(format!("cut {i} outside word of length {}", w.len())))?;
        Ok(self.wire_ends(wire)?.1.clone())
    }

    /// Reversed `Vop` wires of a vertical word, anchored at its end object.
    pub fn vop_reversal(&self, v: &Word) -> Result<WireWord> {
        let mut at = v.at.clone();
        for g in &v.gens {
            at = self
                .vgens
                .get(g)
                .ok_or_else(|| Error::UnknownGenerator(g.clone()))?
                .1
                .clone();
        }
        Ok(WireWord {
            at,
            wires: v.gens.iter().rev().map(|g| Wire::vop(g)).collect(),
        })
    }
}

impl Sig2 {
    pub fn from_signature(sig: &DoubleSignature) -> Sig2 {
        let mut s = Sig2 {
            hgens: sig.hgens.clone(),
            vgens: sig.vgens.clone(),
            types: BTreeMap::new(),
        };
        let mut types = BTreeMap::new();
        for (name, b) in &sig.cells {
            let input = s
                .vop_reversal(&b.domv)
                .expect("validated signature")
                .concat(&WireWord::from_h(&b.domh));
            let output = WireWord::from_h(&b.codh)
                .concat(&s.vop_reversal(&b.codv).expect("validated signature"));
            types.insert(name.clone(), TwoGenType { input, output });
        }
        s.types = types;
        s
    }
}

fn apply_level(sig2: &Sig2, word: &mut WireWord, level: &Level, index: usize) -> Result<()> {
    let ty = sig2.ty(&level.cell)?;
    let k = level.offset;
    let n = ty.input.len();
    if k + n > word.len() {
        return Err(Error::TypeMismatch {
            level: index,
            position: k.min(word.len()),
        });
    }
    for (j, w) in ty.input.wires.iter().enumerate() {
        if word.wires[k + j] != *w {
            return Err(Error::TypeMismatch {
                level: index,
                position: k + j,
            });
        }
    }
    if n == 0 && sig2.object_at(word, k)? != ty.input.at {
        return Err(Error::TypeMismatch {
            level: index,
            position: k,
        });
    }
    word.wires.splice(k..k + n, ty.output.wires.iter().cloned());
    if k == 0 {
        word.at = ty.output.at.clone();
    }
    Ok(())
}

/// Parses a diagram document and checks it against the signature.
pub fn load_diagram(text: &str, sig2: &Sig2) -> Result<LayeredDiagram> {
    let d: LayeredDiagram = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("line {}: {e}", e.line()),
    })?;
    validate_diagram(&d, sig2)?;
    Ok(d)
}

pub fn emit_diagram(d: &LayeredDiagram) -> String {
    serde_json::to_string_pretty(d).expect("diagram documents always serialize")
}

/// Scans the levels top to bottom and returns the codomain.
pub fn validate_diagram(d: &LayeredDiagram, sig2: &Sig2) -> Result<WireWord> {
    sig2.check_wire_word(&d.domain)?;
    let mut word = d.domain.clone();
    for (i, level) in d.levels.iter().enumerate() {
        apply_level(sig2, &mut word, level, i)?;
    }
    Ok(word)
}

/// The word between levels `k - 1` and `k`.
pub fn level_word_at(d: &LayeredDiagram, k: usize, sig2: &Sig2) -> Result<WireWord> {
    if k > d.levels.len() {
        return Err(Error::Range(format!(
            "height {k} outside diagram with {} levels",
            d.levels.len()
        )));
    }
    sig2.check_wire_word(&d.domain)?;
    let mut word = d.domain.clone();
    for (i, level) in d.levels[..k].iter().enumerate() {
        apply_level(sig2, &mut word, level, i)?;
    }
    Ok(word)
}

/// All level words, from the domain down to the codomain.
pub fn level_words(d: &LayeredDiagram, sig2: &Sig2) -> Result<Vec<WireWord>> {
    sig2.check_wire_word(&d.domain)?;
    let mut word = d.domain.clone();
    let mut out = vec![word.clone()];
    for (i, level) in d.levels.iter().enumerate() {
        apply_level(sig2, &mut word, level, i)?;
        out.push(word.clone());
    }
    Ok(out)
}

fn vop_then_h(w: &WireWord) -> bool {
    let first_h = w.wires.iter().position(Wire::is_h).unwrap_or(w.len());
    w.wires[first_h..].iter().all(Wire::is_h)
}

fn h_then_vop(w: &WireWord) -> bool {
    let first_v = w.wires.iter().position(|x| !x.is_h()).unwrap_or(w.len());
    w.wires[first_v..].iter().all(|x| !x.is_h())
}

pub fn is_admissible(d: &LayeredDiagram, sig2: &Sig2) -> bool {
    match validate_diagram(d, sig2) {
        Ok(cod) => vop_then_h(&d.domain) && h_then_vop(&cod),
        Err(_) => false,
    }
}

/// Splits an admissible word `v^op ; h` into the vertical word `v` and the
/// horizontal word `h`, both anchored at the corner object.
pub fn split_admissible_domain(w: &WireWord, sig2: &Sig2) -> Result<(Word, Word)> {
    if !vop_then_h(w) {
        return Err(Error::NotAdmissible(format!(
            "domain {w} is not of the form v^op ; h"
        )));
    }
    let nv = w.wires.iter().take_while(|x| !x.is_h()).count();
    let corner = sig2.object_at(w, nv)?;
    let v = Word {
        at: corner.clone(),
        gens: w.wires[..nv]
            .iter()
            .rev()
            .map(|x| x.gen().to_string())
            .collect(),
    };
    let h = Word {
        at: corner,
        gens: w.wires[nv..].iter().map(|x| x.gen().to_string()).collect(),
    };
    Ok((v, h))
}

pub(crate) fn juxtapose_unchecked(
    l: &LayeredDiagram,
    l_cod_len: usize,
    r: &LayeredDiagram,
) -> LayeredDiagram {
    let mut levels = l.levels.clone();
    levels.extend(r.levels.iter().map(|lv| Level {
        offset: lv.offset + l_cod_len,
        cell: lv.cell.clone(),
    }));
    LayeredDiagram {
        domain: l.domain.concat(&r.domain),
        levels,
    }
}

/// Side by side: `dl`'s levels first, then `dr`'s shifted past `codomain(dl)`.
pub fn juxtapose(dl: &LayeredDiagram, dr: &LayeredDiagram, sig2: &Sig2) -> Result<LayeredDiagram> {
    let cod = validate_diagram(dl, sig2)?;
    validate_diagram(dr, sig2)?;
    let end = sig2.check_wire_word(&dl.domain)?;
    if end != dr.domain.at {
        return Err(Error::TypeMismatch {
            level: 0,
            position: dl.domain.len(),
        });
    }
    let d = juxtapose_unchecked(dl, cod.len(), dr);
    validate_diagram(&d, sig2)?;
    Ok(d)
}

pub fn stack(top: &LayeredDiagram, bottom: &LayeredDiagram, sig2: &Sig2) -> Result<LayeredDiagram> {
    let cod = validate_diagram(top, sig2)?;
    validate_diagram(bottom, sig2)?;
    if cod != bottom.domain {
        let position = cod
            .wires
            .iter()
            .zip(&bottom.domain.wires)
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| cod.len().min(bottom.domain.len()));
        return Err(Error::TypeMismatch {
            level: top.levels.len(),
            position,
        });
    }
    let mut levels = top.levels.clone();
    levels.extend(bottom.levels.iter().cloned());
    Ok(LayeredDiagram {
        domain: top.domain.clone(),
        levels,
    })
}

/// A random valid diagram with at most `max_levels` levels whose level
/// words never exceed `max_width` wires. Deterministic in `seed`.
pub fn random_diagram(
    sig2: &Sig2,
    max_levels: usize,
    max_width: usize,
    seed: u64,
) -> Result<LayeredDiagram> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    if sig2.types.is_empty() {
        return Err(Error::Generation("signature has no cells".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tys: Vec<(&String, &TwoGenType)> = sig2.types.iter().collect();
    let all_wires: Vec<Wire> = sig2
        .hgens
        .keys()
        .map(|g| Wire::h(g))
        .chain(sig2.vgens.keys().map(|g| Wire::vop(g)))
        .collect();

    let (_, first) = tys.choose(&mut rng).expect("nonempty");
    let mut domain = first.input.clone();
    let pieces = rng.gen_range(0..4);
    for _ in 0..pieces {
        let end = sig2.check_wire_word(&domain)?;
        if rng.gen_bool(0.6) {
            let fits: Vec<&WireWord> = tys
                .iter()
                .map(|(_, t)| &t.input)
                .filter(|w| w.at == end && domain.len() + w.len() <= max_width)
                .collect();
            if let Some(w) = fits.choose(&mut rng) {
                domain = domain.concat(w);
            }
        } else if domain.len() < max_width {
            let fits: Vec<&Wire> = all_wires
                .iter()
                .filter(|w| sig2.wire_ends(w).map(|(s, _)| *s == end).unwrap_or(false))
                .collect();
            if let Some(w) = fits.choose(&mut rng) {
                domain.wires.push((*w).clone());
            }
        }
    }
    if domain.len() > max_width {
        domain = LayeredDiagram::identity(WireWord::empty(domain.at.clone())).domain;
    }

    let target = rng.gen_range(0..=max_levels);
    let mut word = domain.clone();
    let mut levels = Vec::new();
    while levels.len() < target {
        let mut options = Vec::new();
        for (name, t) in &tys {
            if word.len() - t.input.len().min(word.len()) + t.output.len() > max_width {
                continue;
            }
            for k in 0..=word.len().saturating_sub(t.input.len()) {
                if k + t.input.len() > word.len() {
                    break;
                }
                if word.wires[k..k + t.input.len()] != t.input.wires[..] {
                    continue;
                }
                if t.input.is_empty() && sig2.object_at(&word, k)? != t.input.at {
                    continue;
                }
                options.push(Level::new(k, name));
            }
        }
        let Some(level) = options.choose(&mut rng).cloned() else {
            break;
        };
        apply_level(sig2, &mut word, &level, levels.len())?;
        levels.push(level);
    }
    Ok(LayeredDiagram { domain, levels })
}
