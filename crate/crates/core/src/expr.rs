//! 2-cell expressions: syntax, boundary inference, text format and a random
//! generator used by the test suites.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signature::{CellBoundary, DoubleSignature, HWord, Kind, VWord, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellExpr {
    Gen(String),
    /// `left` beside `right`, glued along `codv(left) = domv(right)`.
    HComp(Box<CellExpr>, Box<CellExpr>),
    /// `top` above `bottom`, glued along `codh(top) = domh(bottom)`.
    VComp(Box<CellExpr>, Box<CellExpr>),
    /// Identity for horizontal composition on a vertical word.
    HId(VWord),
    /// Identity for vertical composition on a horizontal word.
    VId(HWord),
}

impl CellExpr {
    pub fn gen(name: &str) -> Self {
        CellExpr::Gen(name.to_string())
    }

    pub fn hcomp(l: CellExpr, r: CellExpr) -> Self {
        CellExpr::HComp(Box::new(l), Box::new(r))
    }

    pub fn vcomp(t: CellExpr, b: CellExpr) -> Self {
        CellExpr::VComp(Box::new(t), Box::new(b))
    }

    /// Post-order fold with an explicit stack, so deep trees do not recurse.
    pub fn fold<T>(
        &self,
        mut leaf: impl FnMut(&CellExpr) -> Result<T>,
        mut node: impl FnMut(&CellExpr, T, T) -> Result<T>,
    ) -> Result<T> {
        enum Step<'a> {
            Visit(&'a CellExpr),
            Combine(&'a CellExpr),
        }
        let mut work = vec![Step::Visit(self)];
        let mut vals: Vec<T> = Vec::new();
        while let Some(step) = work.pop() {
            match step {
                Step::Visit(e) => match e {
                    CellExpr::HComp(a, b) | CellExpr::VComp(a, b) => {
                        work.push(Step::Combine(e));
                        work.push(Step::Visit(b));
                        work.push(Step::Visit(a));
                    }
                    _ => vals.push(leaf(e)?),
                },
                Step::Combine(e) => {
                    let r = vals.pop().expect("fold stack underflow");
                    let l = vals.pop().expect("fold stack underflow");
                    vals.push(node(e, l, r)?);
                }
            }
        }
        Ok(vals.pop().expect("fold produced no value"))
    }

    pub fn leaf_count(&self) -> usize {
        self.fold(
            |e| Ok(usize::from(matches!(e, CellExpr::Gen(_)))),
            |_, l, r| Ok(l + r),
        )
        .unwrap_or(0)
    }

    pub fn cell_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        let _ = self.fold(
            |e| {
                if let CellExpr::Gen(n) = e {
                    out.push(n.clone());
                }
                Ok(())
            },
            |_, _, _| Ok(()),
        );
        out
    }
}

fn write_path(w: &Word) -> String {
    w.to_string()
}

impl fmt::Display for CellExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .fold(
                |e| {
                    Ok(match e {
                        CellExpr::Gen(n) => n.clone(),
                        CellExpr::HId(v) => format!("hid({})", write_path(v)),
                        CellExpr::VId(h) => format!("vid({})", write_path(h)),
                        _ => unreachable!(),
                    })
                },
                |e, l, r| {
                    Ok(match e {
                        CellExpr::HComp(..) => format!("({l} | {r})"),
                        _ => format!("({l} / {r})"),
                    })
                },
            )
            .map_err(|_| fmt::Error)?;
        f.write_str(&s)
    }
}

pub fn print_expr(e: &CellExpr) -> String {
    e.to_string()
}

fn identity_boundary(sig: &DoubleSignature, kind: Kind, w: &Word) -> Result<CellBoundary> {
    let (start, end) = sig.word_endpoints(kind, w)?;
    Ok(match kind {
        Kind::V => CellBoundary {
            domh: Word::empty(start),
            codh: Word::empty(end),
            domv: w.clone(),
            codv: w.clone(),
        },
        Kind::H => CellBoundary {
            domh: w.clone(),
            codh: w.clone(),
            domv: Word::empty(start),
            codv: Word::empty(end),
        },
    })
}

pub fn boundary_of(e: &CellExpr, sig: &DoubleSignature) -> Result<CellBoundary> {
    e.fold(
        |leaf| match leaf {
            CellExpr::Gen(n) => sig.cell(n).cloned(),
            CellExpr::HId(v) => identity_boundary(sig, Kind::V, v),
            CellExpr::VId(h) => identity_boundary(sig, Kind::H, h),
            _ => unreachable!(),
        },
        |node, l, r| match node {
            CellExpr::HComp(..) => {
                if l.codv != r.domv {
                    return Err(Error::Composition(format!(
                        "codv(left) = {} differs from domv(right) = {}",
                        l.codv, r.domv
                    )));
                }
                Ok(CellBoundary {
                    domh: l.domh.concat(&r.domh),
                    codh: l.codh.concat(&r.codh),
                    domv: l.domv,
                    codv: r.codv,
                })
            }
            _ => {
                if l.codh != r.domh {
                    return Err(Error::Composition(format!(
                        "codh(top) = {} differs from domh(bottom) = {}",
                        l.codh, r.domh
                    )));
                }
                Ok(CellBoundary {
                    domh: l.domh,
                    codh: r.codh,
                    domv: l.domv.concat(&r.domv),
                    codv: l.codv.concat(&r.codv),
                })
            }
        },
    )
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    Bar,
    Slash,
    Dot,
    At,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' => Tok::Bar,
            '/' => Tok::Slash,
            '.' => Tok::Dot,
            '@' => Tok::At,
            '1' => Tok::One,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a DoubleSignature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::End => "end of input".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::One => "`1`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Dot => "`.`".into(),
            Tok::At => "`@`".into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let (t, p) = self.bump();
        if t == want {
            Ok(())
        } else {
            Err(Error::parse(
                p,
                format!(
                    "expected {}, found {}",
                    Self::describe(&want),
                    Self::describe(&t)
                ),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(Error::parse(
                p,
                format!("expected identifier, found {}", Self::describe(&t)),
            )),
        }
    }

    fn path(&mut self, kind: Kind) -> Result<Word> {
        if *self.peek() == Tok::One {
            self.bump();
            self.expect(Tok::At)?;
            let (obj, p) = self.ident()?;
            if !self.sig.objects.contains(&obj) {
                return Err(Error::parse(p, format!("unknown object `{obj}`")));
            }
            return Ok(Word::empty(obj));
        }
        let mut gens = vec![self.ident()?.0];
        while *self.peek() == Tok::Dot {
            self.bump();
            gens.push(self.ident()?.0);
        }
        let first = &gens[0];
        let (dom, _) = self
            .sig
            .gens(kind)
            .get(first)
            .ok_or_else(|| Error::UnknownGenerator(first.clone()))?;
        let w = Word {
            at: dom.clone(),
            gens,
        };
        self.sig.check_word(kind, &w)?;
        Ok(w)
    }

    fn atom(&mut self, name: String) -> Result<CellExpr> {
        if (name == "hid" || name == "vid") && *self.peek() == Tok::LParen {
            self.bump();
            let kind = if name == "hid" { Kind::V } else { Kind::H };
            let w = self.path(kind)?;
            self.expect(Tok::RParen)?;
            return Ok(if kind == Kind::V {
                CellExpr::HId(w)
            } else {
                CellExpr::VId(w)
            });
        }
        Ok(CellExpr::Gen(name))
    }

    fn parse(&mut self) -> Result<CellExpr> {
        enum Frame {
            Open,
            WithOp(CellExpr, Tok),
        }
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            let mut value = loop {
                match self.bump() {
                    (Tok::LParen, _) => stack.push(Frame::Open),
                    (Tok::Ident(name), _) => break self.atom(name)?,
                    (t, p) => {
                        return Err(Error::parse(
                            p,
                            format!("expected expression, found {}", Self::describe(&t)),
                        ))
                    }
                }
            };
            loop {
                match stack.pop() {
                    None => {
                        if *self.peek() != Tok::End {
                            let t = self.peek().clone();
                            return Err(Error::parse(
                                self.here(),
                                format!("trailing input: {}", Self::describe(&t)),
                            ));
                        }
                        return Ok(value);
                    }
                    Some(Frame::Open) => {
                        let (op, p) = self.bump();
                        if op != Tok::Bar && op != Tok::Slash {
                            return Err(Error::parse(
                                p,
                                format!("expected `|` or `/`, found {}", Self::describe(&op)),
                            ));
                        }
                        stack.push(Frame::WithOp(value, op));
                        break;
                    }
                    Some(Frame::WithOp(left, op)) => {
                        self.expect(Tok::RParen)?;
                        value = if op == Tok::Bar {
                            CellExpr::hcomp(left, value)
                        } else {
                            CellExpr::vcomp(left, value)
                        };
                    }
                }
            }
        }
    }
}

/// Parses the text form. The signature resolves the anchor object of
/// identity paths and rejects undeclared generators inside them; cell
/// names are checked later by [`boundary_of`].
pub fn parse_expr(text: &str, sig: &DoubleSignature) -> Result<CellExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig };
    p.parse()
}

/// A random well-formed expression with at most `size_budget` generator
/// leaves, deterministic in `seed`.
pub fn random_expr(sig: &DoubleSignature, size_budget: usize, seed: u64) -> Result<CellExpr> {
    if sig.cells.is_empty() {
        return Err(Error::Generation("signature has no cells".into()));
    }
    if size_budget == 0 {
        return Err(Error::Generation("size budget must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<&String> = sig.cells.keys().collect();
    let start = (*names.choose(&mut rng).expect("nonempty")).clone();
    let mut e = CellExpr::Gen(start);
    let mut b = sig
        .cell(match &e {
            CellExpr::Gen(n) => n,
            _ => unreachable!(),
        })?
        .clone();
    let target = rng.gen_range(1..=size_budget);
    let mut leaves = 1;
    let mut attempts = 0;
    while leaves < target && attempts < 60 {
        attempts += 1;
        let side = rng.gen_range(0..4);
        let room = target - leaves;
        let Some((strip, n)) = build_strip(sig, &b, side, room, &mut rng)? else {
            continue;
        };
        let next = match side {
            0 => CellExpr::hcomp(e.clone(), strip),
            1 => CellExpr::hcomp(strip, e.clone()),
            2 => CellExpr::vcomp(e.clone(), strip),
            _ => CellExpr::vcomp(strip, e.clone()),
        };
        b = boundary_of(&next, sig)?;
        e = next;
        leaves += n;
    }
    if rng.gen_bool(0.15) {
        e = match rng.gen_range(0..4) {
            0 => CellExpr::hcomp(e, CellExpr::HId(b.codv.clone())),
            1 => CellExpr::hcomp(CellExpr::HId(b.domv.clone()), e),
            2 => CellExpr::vcomp(e, CellExpr::VId(b.codh.clone())),
            _ => CellExpr::vcomp(CellExpr::VId(b.domh.clone()), e),
        };
    }
    Ok(e)
}

struct Piece {
    expr: CellExpr,
    b: CellBoundary,
    leaves: usize,
}

/// Builds a strip of pieces matching one side of `b`.
///
/// side 0: right strip, whose domv must equal `b.codv`;
/// side 1: left strip, codv = `b.domv`;
/// side 2: bottom strip, domh = `b.codh`;
/// side 3: top strip, codh = `b.domh`.
fn build_strip(
    sig: &DoubleSignature,
    b: &CellBoundary,
    side: u8,
    room: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(CellExpr, usize)>> {
    let (kind, target) = match side {
        0 => (Kind::V, &b.codv),
        1 => (Kind::V, &b.domv),
        2 => (Kind::H, &b.codh),
        _ => (Kind::H, &b.domh),
    };
    for _ in 0..8 {
        if let Some(pieces) = try_strip(sig, kind, side, target, room, rng)? {
            let leaves: usize = pieces.iter().map(|p| p.leaves).sum();
            if leaves == 0 {
                return Ok(None);
            }
            let exprs: Vec<CellExpr> = pieces.into_iter().map(|p| p.expr).collect();
            let strip = nest(exprs, kind == Kind::V, rng);
            return Ok(Some((strip, leaves)));
        }
    }
    Ok(None)
}

fn nest(mut exprs: Vec<CellExpr>, vertical: bool, rng: &mut ChaCha8Rng) -> CellExpr {
    while exprs.len() > 1 {
        let i = rng.gen_range(0..exprs.len() - 1);
        let r = exprs.remove(i + 1);
        let l = exprs.remove(i);
        let joined = if vertical {
            CellExpr::vcomp(l, r)
        } else {
            CellExpr::hcomp(l, r)
        };
        exprs.insert(i, joined);
    }
    exprs.pop().expect("strip has at least one piece")
}

/// Chooses pieces covering `target` in order. For a vertical strip the
/// pieces stack top to bottom and must chain on their horizontal sides; for
/// a horizontal strip they sit left to right and chain on vertical sides.
fn try_strip(
    sig: &DoubleSignature,
    kind: Kind,
    side: u8,
    target: &Word,
    room: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Piece>>> {
    let facing = |cb: &CellBoundary| -> Word {
        match side {
            0 => cb.domv.clone(),
            1 => cb.codv.clone(),
            2 => cb.domh.clone(),
            _ => cb.codh.clone(),
        }
    };
    // `link` is the side along which consecutive pieces are glued: for a
    // vertical strip, the previous piece's codh must equal the next domh.
    let link_out = |cb: &CellBoundary| -> Word {
        if kind == Kind::V {
            cb.codh.clone()
        } else {
            cb.codv.clone()
        }
    };
    let link_in = |cb: &CellBoundary| -> Word {
        if kind == Kind::V {
            cb.domh.clone()
        } else {
            cb.domv.clone()
        }
    };
    let mut pieces: Vec<Piece> = Vec::new();
    let mut pos = 0usize;
    let mut used = 0usize;
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > 64 {
            return Ok(None);
        }
        let need_link = pieces.last().map(|p| link_out(&p.b));
        if pos == target.len() {
            match &need_link {
                Some(l) if !l.is_empty() => {
                    // close the strip with an identity carrying the link
                    let id = if kind == Kind::V {
                        CellExpr::VId(l.clone())
                    } else {
                        CellExpr::HId(l.clone())
                    };
                    let b = boundary_of(&id, sig)?;
                    if !facing(&b).is_empty() {
                        return Ok(None);
                    }
                    pieces.push(Piece {
                        expr: id,
                        b,
                        leaves: 0,
                    });
                }
                _ => {}
            }
            if pieces.is_empty() {
                return Ok(None);
            }
            return Ok(Some(pieces));
        }
        let mut options: Vec<Piece> = Vec::new();
        if used < room {
            for name in sig.cells.keys() {
                let cb = sig.cell(name)?;
                let f = facing(cb);
                if f.is_empty() && pieces.len() > 3 {
                    continue;
                }
                if pos + f.len() > target.len() || target.gens[pos..pos + f.len()] != f.gens[..] {
                    continue;
                }
                if sig.object_at(kind, target, pos)? != f.at {
                    continue;
                }
                if let Some(l) = &need_link {
                    if *l != link_in(cb) {
                        continue;
                    }
                } else if !link_in(cb).is_empty() && rng.gen_bool(0.5) {
                    continue;
                }
                options.push(Piece {
                    expr: CellExpr::Gen(name.clone()),
                    b: cb.clone(),
                    leaves: 1,
                });
            }
        }
        let link_empty = need_link.as_ref().map_or(true, |l| l.is_empty());
        if link_empty && (options.is_empty() || rng.gen_bool(0.2)) {
            // identity over one or more wires of the target
            let len = rng.gen_range(1..=target.len() - pos);
            let seg = sig.factor_at(kind, target, pos, len)?;
            let id = if kind == Kind::V {
                CellExpr::HId(seg)
            } else {
                CellExpr::VId(seg)
            };
            let b = boundary_of(&id, sig)?;
            if let Some(l) = &need_link {
                if *l != link_in(&b) {
                    return Ok(None);
                }
            }
            options.push(Piece {
                expr: id,
                b,
                leaves: 0,
            });
        }
        let Some(choice) = (if options.is_empty() {
            None
        } else {
            let i = rng.gen_range(0..options.len());
            Some(options.swap_remove(i))
        }) else {
            return Ok(None);
        };
        pos += facing(&choice.b).len();
        used += choice.leaves;
        pieces.push(choice);
    }
}
