//! Closed components: connected pieces touching neither boundary. They can
//! orbit one another, so sifting alone does not settle them. Each one is
//! normalized by itself and placed at the first gap of the face holding it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{key, sift, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edge {
    Dom(usize),
    Out(usize, usize),
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Calls `f(t, word)` with the word above each level and finally the codomain.
fn walk(domain: &[Edge], slots: &[Slot], mut f: impl FnMut(usize, &[Edge])) {
    let mut word = domain.to_vec();
    for (t, s) in slots.iter().enumerate() {
        f(t, &word);
        let outs = (0..s.outputs).map(|j| Edge::Out(s.id, j));
        word.splice(s.offset..s.offset + s.inputs, outs);
    }
    f(slots.len(), &word);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Owner {
    Anchored,
    Closed(usize),
}

/// Edge sides are numbered `2e` (left) and `2e + 1` (right); the two strip
/// borders come last.
struct Sides {
    dom: usize,
    base: Vec<usize>,
    edges: usize,
}

impl Sides {
    fn new(dom: usize, slots: &[Slot]) -> Self {
        let mut base = vec![0; slots.len()];
        let mut next = dom;
        for s in slots {
            base[s.id] = next;
            next += s.outputs;
        }
        Sides {
            dom,
            base,
            edges: next,
        }
    }

    fn edge(&self, e: Edge) -> usize {
        match e {
            Edge::Dom(i) => i,
            Edge::Out(id, j) => self.base[id] + j,
        }
    }

    fn left(&self, e: Edge) -> usize {
        2 * self.edge(e)
    }

    fn right(&self, e: Edge) -> usize {
        2 * self.edge(e) + 1
    }

    fn border_left(&self) -> usize {
        2 * self.edges
    }

    fn border_right(&self) -> usize {
        2 * self.edges + 1
    }

    fn count(&self) -> usize {
        2 * self.edges + 2
    }

    /// The side standing for gap `g` of `word`.
    fn gap(&self, word: &[Edge], g: usize) -> usize {
        if g == 0 {
            self.border_left()
        } else {
            self.right(word[g - 1])
        }
    }

    fn faces(&self, domain: &[Edge], slots: &[Slot]) -> UnionFind {
        let mut uf = UnionFind::new(self.count());
        walk(domain, slots, |_, word| {
            let mut prev = self.border_left();
            for &e in word {
                uf.union(prev, self.left(e));
                prev = self.right(e);
            }
            uf.union(prev, self.border_right());
        });
        uf
    }
}

struct Analysis<'a> {
    slots: &'a [Slot],
    sides: Sides,
    owner_of_node: Vec<Owner>,
    /// For each closed component, the faces of the whole diagram holding
    /// its children, keyed by a side of the component on that face.
    children: BTreeMap<Owner, Vec<(usize, usize)>>,
}

impl Analysis<'_> {
    fn owner(&self, e: Edge) -> Owner {
        match e {
            Edge::Dom(_) => Owner::Anchored,
            Edge::Out(id, _) => self.owner_of_node[id],
        }
    }

    /// The levels of one owner alone, offsets recomputed.
    fn restrict(&self, who: Owner) -> (Vec<Edge>, Vec<Slot>) {
        let keep = |e: &Edge| self.owner(*e) == who;
        let domain: Vec<Edge> = if who == Owner::Anchored {
            (0..self.sides.dom).map(Edge::Dom).collect()
        } else {
            Vec::new()
        };
        let mut out = Vec::new();
        walk(&domain_of(self.sides.dom), self.slots, |t, word| {
            if let Some(s) = self.slots.get(t) {
                if self.owner_of_node[s.id] == who {
                    let offset = word[..s.offset].iter().filter(|e| keep(e)).count();
                    out.push(Slot { offset, ..*s });
                }
            }
        });
        (domain, out)
    }

    fn build(&self, who: Owner) -> (Vec<Slot>, usize) {
        let (domain, mut base) = self.restrict(who);
        let mut swaps = sift(&mut base);
        let Some(kids) = self.children.get(&who) else {
            return (base, swaps);
        };
        let mut faces = self.sides.faces(&domain, &base);
        let mut groups: BTreeMap<usize, Vec<Vec<Slot>>> = BTreeMap::new();
        for &(side, child) in kids {
            let (block, s) = self.build(Owner::Closed(child));
            swaps += s;
            groups.entry(faces.find(side)).or_default().push(block);
        }
        let mut first: HashMap<usize, (usize, usize)> = HashMap::new();
        walk(&domain, &base, |t, word| {
            for g in 0..=word.len() {
                first
                    .entry(faces.find(self.sides.gap(word, g)))
                    .or_insert((t, g));
            }
        });
        let mut placed: Vec<((usize, usize), Vec<Vec<Slot>>)> = groups
            .into_iter()
            .map(|(face, mut blocks)| {
                blocks.sort_by_key(|b| key(b));
                (first[&face], blocks)
            })
            .collect();
        placed.sort_by_key(|(at, _)| *at);
        let mut out = Vec::with_capacity(self.slots.len());
        let mut pending = placed.into_iter().peekable();
        for t in 0..=base.len() {
            while let Some(((_, g), blocks)) = pending.next_if(|((at, _), _)| *at == t) {
                for block in blocks {
                    out.extend(block.into_iter().map(|s| Slot {
                        offset: s.offset + g,
                        ..s
                    }));
                }
            }
            if let Some(s) = base.get(t) {
                out.push(*s);
            }
        }
        (out, swaps)
    }
}

fn domain_of(n: usize) -> Vec<Edge> {
    (0..n).map(Edge::Dom).collect()
}

/// The normal form of a diagram with closed components, or `None` when it
/// has none.
pub(super) fn canonical(dom: usize, slots: &[Slot]) -> Option<(Vec<Slot>, usize)> {
    if !(slots.iter().any(|s| s.inputs == 0) && slots.iter().any(|s| s.outputs == 0)) {
        return None;
    }
    let n = slots.len();
    let domain = domain_of(dom);
    let mut comps = UnionFind::new(n);
    let mut touches = vec![false; n];
    walk(&domain, slots, |t, word| match slots.get(t) {
        Some(s) => {
            for e in &word[s.offset..s.offset + s.inputs] {
                match *e {
                    Edge::Dom(_) => touches[s.id] = true,
                    Edge::Out(j, _) => comps.union(s.id, j),
                }
            }
        }
        None => {
            for e in word {
                if let Edge::Out(j, _) = *e {
                    touches[j] = true;
                }
            }
        }
    });
    let mut anchored = BTreeSet::new();
    for (id, &t) in touches.iter().enumerate() {
        if t {
            anchored.insert(comps.find(id));
        }
    }
    let owner_of_node: Vec<Owner> = (0..n)
        .map(|id| {
            let r = comps.find(id);
            if anchored.contains(&r) {
                Owner::Anchored
            } else {
                Owner::Closed(r)
            }
        })
        .collect();
    if owner_of_node.iter().all(|o| *o == Owner::Anchored) {
        return None;
    }

    let sides = Sides::new(dom, slots);
    let mut faces = sides.faces(&domain, slots);

    // The topmost level of a closed component lies on its outer face.
    let mut outer: BTreeMap<usize, usize> = BTreeMap::new();
    walk(&domain, slots, |t, word| {
        if let Some(s) = slots.get(t) {
            if let Owner::Closed(r) = owner_of_node[s.id] {
                outer
                    .entry(r)
                    .or_insert_with(|| faces.find(sides.gap(word, s.offset)));
            }
        }
    });

    // Which owners bound each face, with one side of each as witness.
    let mut bounding: BTreeMap<usize, BTreeMap<Owner, usize>> = BTreeMap::new();
    let mut note = |faces: &mut UnionFind, side: usize, who: Owner| {
        bounding
            .entry(faces.find(side))
            .or_default()
            .entry(who)
            .or_insert(side);
    };
    note(&mut faces, sides.border_left(), Owner::Anchored);
    note(&mut faces, sides.border_right(), Owner::Anchored);
    let mut edges = domain.clone();
    for s in slots {
        edges.extend((0..s.outputs).map(|j| Edge::Out(s.id, j)));
    }
    for &e in &edges {
        let who = match e {
            Edge::Dom(_) => Owner::Anchored,
            Edge::Out(id, _) => owner_of_node[id],
        };
        note(&mut faces, sides.left(e), who);
        note(&mut faces, sides.right(e), who);
    }

    let mut children: BTreeMap<Owner, Vec<(usize, usize)>> = BTreeMap::new();
    for (&r, &face) in &outer {
        let around = &bounding[&face];
        let encloser = if around.contains_key(&Owner::Anchored) {
            Owner::Anchored
        } else {
            *around
                .keys()
                .find(|o| matches!(o, Owner::Closed(c) if outer[c] != face))
                .expect("every face has an enclosing owner")
        };
        children
            .entry(encloser)
            .or_default()
            .push((around[&encloser], r));
    }

    let a = Analysis {
        slots,
        sides,
        owner_of_node,
        children,
    };
    Some(a.build(Owner::Anchored))
}

#[cfg(test)]
mod tests {
    use crate::diagram::{LayeredDiagram, Level, Sig2, WireWord};
    use crate::normalize::{bfs_class, decide_eq_diagrams, normalize};
    use crate::signature::load_signature;

    fn sig() -> Sig2 {
        let cell = |name: &str, domh: &[&str], codh: &[&str]| {
            format!(
                r#"{{"name":"{name}","domh":{{"at":"A","gens":{domh:?}}},"codh":{{"at":"A","gens":{codh:?}}},
                "domv":{{"at":"A","gens":[]}},"codv":{{"at":"A","gens":[]}}}}"#
            )
        };
        let text = format!(
            r#"{{"objects":["A"],"hgens":[{{"name":"h","dom":"A","cod":"A"}}],"vgens":[],"cells":[{},{},{},{}]}}"#,
            cell("cup", &[], &["h", "h"]),
            cell("cap", &["h", "h"], &[]),
            cell("x", &[], &[]),
            cell("y", &[], &[]),
        );
        Sig2::from_signature(&load_signature(&text).unwrap())
    }

    fn d(levels: &[(usize, &str)]) -> LayeredDiagram {
        LayeredDiagram {
            domain: WireWord::empty("A"),
            levels: levels.iter().map(|(k, c)| Level::new(*k, c)).collect(),
        }
    }

    fn check_class(x: &LayeredDiagram, s: &Sig2) {
        let n = normalize(x, s).unwrap();
        let class = bfs_class(x, 100_000, s).unwrap();
        assert!(class.contains(&n.diagram));
        for y in &class {
            assert_eq!(normalize(y, s).unwrap().diagram, n.diagram, "{y:?}");
        }
        assert_eq!(normalize(&n.diagram, s).unwrap().swaps, 0);
    }

    #[test]
    fn orbiting_circles_settle() {
        let s = sig();
        let a = d(&[(0, "cup"), (0, "cap"), (0, "cup"), (1, "x"), (0, "cap")]);
        let b = d(&[(0, "cup"), (1, "x"), (0, "cap"), (0, "cup"), (0, "cap")]);
        assert!(decide_eq_diagrams(&a, &b, &s).unwrap());
        check_class(&a, &s);
    }

    #[test]
    fn inside_and_outside_a_circle_differ() {
        let s = sig();
        let inside = d(&[(0, "cup"), (1, "x"), (0, "cap")]);
        let outside = d(&[(0, "x"), (0, "cup"), (0, "cap")]);
        assert!(!decide_eq_diagrams(&inside, &outside, &s).unwrap());
        assert_eq!(bfs_class(&inside, 100, &s).unwrap().len(), 1);
        check_class(&outside, &s);
    }

    #[test]
    fn nesting_is_respected() {
        let s = sig();
        let nested = d(&[
            (0, "cup"),
            (1, "cup"),
            (2, "y"),
            (1, "cap"),
            (1, "x"),
            (0, "cap"),
        ]);
        let flat = d(&[
            (0, "cup"),
            (1, "x"),
            (1, "cup"),
            (2, "y"),
            (1, "cap"),
            (0, "cap"),
        ]);
        let apart = d(&[
            (0, "cup"),
            (1, "x"),
            (0, "cap"),
            (0, "cup"),
            (1, "y"),
            (0, "cap"),
        ]);
        assert!(decide_eq_diagrams(&nested, &flat, &s).unwrap());
        assert!(!decide_eq_diagrams(&nested, &apart, &s).unwrap());
        check_class(&nested, &s);
        check_class(&apart, &s);
    }

    #[test]
    fn scalars_sort_by_name() {
        let s = sig();
        let n = normalize(&d(&[(0, "y"), (0, "x"), (0, "y")]), &s)
            .unwrap()
            .diagram;
        assert_eq!(n, d(&[(0, "x"), (0, "y"), (0, "y")]));
    }
}
