//! Bounded saturation over the typing rules.
//!
//! Hypersequents are enumerated up to renaming: since every name occurs
//! once, a hypersequent is determined by the multiset of its sequents, each
//! a multiset of propositions. Propositions are interned, and a normalized
//! shape packs into a `u64`. Each shape records the rule that first
//! produced it, from which a witness process is rebuilt on demand.

use std::fmt;

use rustc_hash::FxHashMap as HashMap;
use smallvec::SmallVec;

use crate::syntax::{Name, Process, TypeVar};
use crate::types::{Hypersequent, Proposition as P, Sequent};
use crate::typing::{infer, Derivation, Rule};

type Id = u8;
type Seq = SmallVec<[Id; 4]>;
type Shape = SmallVec<[Seq; 4]>;
type Key = u64;

const NONE: Id = 0xFF;
const SEP: u8 = 0xFE;
const PAD: u8 = 0xFF;

/// The finite universe the saturation runs in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBounds {
    pub atoms: Vec<TypeVar>,
    /// Constants and atoms have depth 1.
    pub max_prop_depth: usize,
    /// Maximal number of channel names in a hypersequent; at most 4.
    pub max_names: usize,
}

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds { atoms: vec![Name::new("X")], max_prop_depth: 2, max_names: 4 }
    }
}

impl fmt::Display for EnumBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(
            f,
            "atoms {{{}}}, proposition depth <= {}, at most {} names",
            atoms.join(", "),
            self.max_prop_depth,
            self.max_names
        )
    }
}

/// The interned propositions of the universe, with their constructors
/// tabulated.
struct Props {
    reps: Vec<P>,
    ids: HashMap<P, Id>,
    dual: Vec<Id>,
    /// `n * n` tables indexed by `a * n + b`.
    tensor: Vec<Id>,
    par: Vec<Id>,
    of_course: Vec<Id>,
    why_not: Vec<Id>,
    why_not_inner: Vec<Id>,
    /// `(b, a + b)` for every `a`.
    plus1: Vec<Vec<(Id, Id)>>,
    /// `(b, b + a)` for every `a`.
    plus2: Vec<Vec<(Id, Id)>>,
    /// `(b, a & b)` for every `a`.
    with1: Vec<Vec<(Id, Id)>>,
    /// `(b, b & a)` for every `a`.
    with2: Vec<Vec<(Id, Id)>>,
    /// Existentials with an instance equal to `a`.
    exists: Vec<Vec<Id>>,
    /// `(all X.a, index of X)`.
    forall: Vec<Vec<(Id, u32)>>,
    /// Free atoms as a bit set over the atom pool.
    free: Vec<u64>,
    one: Id,
    bot: Id,
}

impl Props {
    fn new(bounds: &EnumBounds) -> Self {
        assert!(bounds.atoms.len() <= 64, "at most 64 atoms");
        let mut layers: Vec<Vec<P>> = vec![Vec::new(); bounds.max_prop_depth.max(1) + 1];
        layers[1] = vec![P::One, P::Bot, P::Zero, P::Top];
        for a in &bounds.atoms {
            layers[1].push(P::Atom(a.clone()));
            layers[1].push(P::DualAtom(a.clone()));
        }
        for d in 2..=bounds.max_prop_depth {
            let lower: Vec<P> = layers[1..d].iter().flatten().cloned().collect();
            let top = &layers[d - 1];
            let mut out = Vec::new();
            for a in &lower {
                for b in &lower {
                    if a.depth() == d - 1 || b.depth() == d - 1 {
                        out.push(P::tensor(a.clone(), b.clone()));
                        out.push(P::par(a.clone(), b.clone()));
                        out.push(P::plus(a.clone(), b.clone()));
                        out.push(P::with(a.clone(), b.clone()));
                    }
                }
            }
            for a in top {
                out.push(P::of_course(a.clone()));
                out.push(P::why_not(a.clone()));
                for v in &bounds.atoms {
                    out.push(P::exists(v.clone(), a.clone()));
                    out.push(P::forall(v.clone(), a.clone()));
                }
            }
            layers[d] = out;
        }
        let mut reps = Vec::new();
        let mut ids = HashMap::default();
        for p in layers.into_iter().flatten() {
            let key = p.canonical();
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(key) {
                assert!(reps.len() < SEP as usize, "the proposition universe exceeds {} entries", SEP);
                e.insert(reps.len() as Id);
                reps.push(p);
            }
        }
        let n = reps.len();
        let id = |p: &P| ids.get(&p.canonical()).copied();
        let mut props = Props {
            dual: reps.iter().map(|p| id(&p.dual()).expect("duality preserves depth")).collect(),
            tensor: vec![NONE; n * n],
            par: vec![NONE; n * n],
            of_course: vec![NONE; n],
            why_not: vec![NONE; n],
            why_not_inner: vec![NONE; n],
            plus1: vec![Vec::new(); n],
            plus2: vec![Vec::new(); n],
            with1: vec![Vec::new(); n],
            with2: vec![Vec::new(); n],
            exists: vec![Vec::new(); n],
            forall: vec![Vec::new(); n],
            free: reps
                .iter()
                .map(|p| {
                    bounds.atoms.iter().enumerate().filter(|(_, v)| p.has_free_var(v)).map(|(i, _)| 1u64 << i).sum()
                })
                .collect(),
            one: id(&P::One).expect("1 in universe"),
            bot: id(&P::Bot).expect("bot in universe"),
            reps: Vec::new(),
            ids: HashMap::default(),
        };
        for (i, p) in reps.iter().enumerate() {
            let t = i as Id;
            let sub = |q: &P| id(q).expect("subterm in universe");
            match p {
                P::Tensor(a, b) => props.tensor[sub(a) as usize * n + sub(b) as usize] = t,
                P::Par(a, b) => props.par[sub(a) as usize * n + sub(b) as usize] = t,
                P::Plus(a, b) => {
                    props.plus1[sub(a) as usize].push((sub(b), t));
                    props.plus2[sub(b) as usize].push((sub(a), t));
                }
                P::With(a, b) => {
                    props.with1[sub(a) as usize].push((sub(b), t));
                    props.with2[sub(b) as usize].push((sub(a), t));
                }
                P::OfCourse(a) => props.of_course[sub(a) as usize] = t,
                P::WhyNot(a) => {
                    props.why_not[sub(a) as usize] = t;
                    props.why_not_inner[i] = sub(a);
                }
                P::Exists(v, b) => {
                    for (j, q) in reps.iter().enumerate() {
                        if instance_of(b, v, q).is_some() {
                            props.exists[j].push(t);
                        }
                    }
                }
                P::Forall(v, b) => {
                    let var = bounds.atoms.iter().position(|a| a == v).expect("bound variable from the pool");
                    props.forall[sub(b) as usize].push((t, var as u32));
                }
                _ => {}
            }
        }
        props.reps = reps;
        props.ids = ids;
        props
    }

    fn id(&self, p: &P) -> Option<Id> {
        self.ids.get(&p.canonical()).copied()
    }

    fn get(&self, id: Id) -> &P {
        &self.reps[id as usize]
    }

    fn binop(&self, table: &[Id], a: Id, b: Id) -> Id {
        table[a as usize * self.reps.len() + b as usize]
    }
}

/// How a shape was first derived. `a` and `b` are premise entries; the
/// meaning of the small fields depends on the rule:
///
/// | rule | x | y | z | w |
/// |---|---|---|---|---|
/// | Ax | type | | | |
/// | Cut, Tensor | sequent | type | sequent | type |
/// | Par | object | subject | | |
/// | Plus1, Plus2 | subject | other branch | | |
/// | With | left subject | right subject | | |
/// | Exists, Forall | subject | result | | |
/// | Bang, Quest | object | | | |
/// | Weaken | type under `?` | | | |
/// | Contract | sequent | type | | |
///
/// Sequent positions index the premise's normalized shape.
#[derive(Clone, Copy, Debug)]
struct Step {
    rule: Rule,
    a: u32,
    b: u32,
    x: Id,
    y: Id,
    z: Id,
    w: Id,
}

impl Step {
    fn new(rule: Rule, a: usize, b: usize, x: Id, y: Id, z: Id, w: Id) -> Self {
        Step { rule, a: a as u32, b: b as u32, x, y, z, w }
    }

    fn leaf(rule: Rule, x: Id) -> Self {
        Step::new(rule, 0, 0, x, 0, 0, 0)
    }

    fn unary(rule: Rule, a: usize, x: Id, y: Id) -> Self {
        Step::new(rule, a, 0, x, y, 0, 0)
    }
}

struct Entry {
    key: Key,
    height: u8,
    step: Step,
}

/// Every hypersequent derivable within a height bound, up to renaming.
pub struct Enumeration {
    bounds: EnumBounds,
    max_height: usize,
    props: Props,
    entries: Vec<Entry>,
    index: HashMap<Key, u32>,
    /// Nonempty entries by number of names.
    by_names: Vec<Vec<u32>>,
}

/// [`enumerate_with`] under the default bounds.
pub fn enumerate(k: usize) -> Enumeration {
    enumerate_with(k, &EnumBounds::default())
}

/// All hypersequents with a derivation of height at most `k` (leaves have
/// height 0) in which every judgement respects `bounds`.
pub fn enumerate_with(k: usize, bounds: &EnumBounds) -> Enumeration {
    assert!(bounds.max_names <= 4, "shapes are packed for at most 4 names");
    let props = Props::new(bounds);
    let mut e = Enumeration {
        bounds: bounds.clone(),
        max_height: k,
        props,
        entries: Vec::new(),
        index: HashMap::default(),
        by_names: vec![Vec::new(); bounds.max_names + 1],
    };
    let mut leaves = HashMap::default();
    let mut leaf = |shape: Shape, step: Step| {
        if names(&shape) <= bounds.max_names {
            leaves.entry(pack(&normal(shape))).or_insert(step);
        }
    };
    leaf(Shape::new(), Step::leaf(Rule::Mix0, 0));
    leaf(smallvec::smallvec![smallvec::smallvec![e.props.one]], Step::leaf(Rule::One, 0));
    for a in 0..e.props.reps.len() {
        let pair = smallvec::smallvec![a as Id, e.props.dual[a]];
        leaf(smallvec::smallvec![pair], Step::leaf(Rule::Ax, a as Id));
    }
    e.admit(leaves, 0);
    let mut start = 0;
    for h in 1..=k {
        let found = e.round(start);
        if found.is_empty() {
            break;
        }
        start = e.entries.len();
        e.admit(found, h);
    }
    e
}

fn normal(mut shape: Shape) -> Shape {
    shape.retain(|s| !s.is_empty());
    for s in &mut shape {
        s.sort_unstable();
    }
    shape.sort_unstable();
    shape
}

fn names(shape: &Shape) -> usize {
    shape.iter().map(|s| s.len()).sum()
}

/// Sequents in order, separated by `SEP` and padded with `PAD`.
fn pack(shape: &Shape) -> Key {
    let mut bytes = [PAD; 8];
    let mut i = 0;
    for (k, s) in shape.iter().enumerate() {
        if k > 0 {
            bytes[i] = SEP;
            i += 1;
        }
        for &a in s {
            bytes[i] = a;
            i += 1;
        }
    }
    Key::from_be_bytes(bytes)
}

fn unpack(key: Key) -> Shape {
    let mut shape = Shape::new();
    for b in key.to_be_bytes() {
        match b {
            PAD => break,
            SEP => shape.push(Seq::new()),
            a => match shape.last_mut() {
                Some(s) => s.push(a),
                None => shape.push(smallvec::smallvec![a]),
            },
        }
    }
    shape
}

fn without(s: &[Id], i: usize) -> Seq {
    let mut out: Seq = s.into();
    out.remove(i);
    out
}

fn with(s: &[Id], extra: Id) -> Shape {
    let mut t: Seq = s.into();
    t.push(extra);
    smallvec::smallvec![t]
}

/// Positions of the distinct values of a sorted sequent.
fn distinct(s: &[Id]) -> impl Iterator<Item = (usize, Id)> + '_ {
    s.iter().enumerate().filter(move |(i, a)| *i == 0 || s[i - 1] != **a).map(|(i, a)| (i, *a))
}

impl Enumeration {
    /// Adds the shapes found at height `h`, in key order.
    fn admit(&mut self, found: HashMap<Key, Step>, h: usize) {
        let mut found: Vec<(Key, Step)> = found.into_iter().collect();
        found.sort_unstable_by_key(|(k, _)| *k);
        for (key, step) in found {
            let i = self.entries.len() as u32;
            self.index.insert(key, i);
            let n = names(&unpack(key));
            if n > 0 {
                self.by_names[n].push(i);
            }
            self.entries.push(Entry { key, height: h as u8, step });
        }
    }

    /// One saturation round: rule instances with every premise among the
    /// current entries and some premise among those from `start` on. New
    /// shapes only, each with the first instance found.
    fn round(&self, start: usize) -> HashMap<Key, Step> {
        let p = &self.props;
        let max = self.bounds.max_names;
        let mut out: HashMap<Key, Step> = HashMap::default();
        let mut offer = |shape: Shape, step: Step| {
            let key = pack(&normal(shape));
            if !self.index.contains_key(&key) {
                out.entry(key).or_insert(step);
            }
        };
        for fi in start..self.entries.len() {
            let f = unpack(self.entries[fi].key);
            let n = names(&f);
            // Mix with every entry, each unordered pair once.
            if n > 0 {
                for m in 1..=max - n {
                    for &ei in &self.by_names[m] {
                        let ei = ei as usize;
                        if ei >= start && ei < fi {
                            continue;
                        }
                        let mut shape = f.clone();
                        shape.extend(unpack(self.entries[ei].key));
                        offer(shape, Step::new(Rule::Mix, fi, ei, 0, 0, 0, 0));
                    }
                }
            }
            // Cut between two sequents.
            for (i, si) in f.iter().enumerate() {
                for (j, sj) in f.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for (x, a) in distinct(si) {
                        let b = p.dual[a as usize];
                        let Some(y) = sj.iter().position(|c| *c == b) else { continue };
                        let mut shape: Shape =
                            f.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, s)| s.clone()).collect();
                        let mut merged = without(si, x);
                        merged.extend(without(sj, y));
                        shape.push(merged);
                        offer(shape, Step::new(Rule::Cut, fi, 0, i as Id, a, j as Id, b));
                    }
                }
            }
            // Contraction, next to any other sequents.
            for (i, s) in f.iter().enumerate() {
                for (x, a) in distinct(s) {
                    if x + 1 < s.len() && s[x + 1] == a && p.why_not_inner[a as usize] != NONE {
                        let mut shape = f.clone();
                        shape[i] = without(s, x);
                        offer(shape, Step::unary(Rule::Contract, fi, i as Id, a));
                    }
                }
            }
            // Tensor on exactly two sequents.
            if f.len() == 2 {
                for (yi, xi) in [(0, 1), (1, 0)] {
                    let (ys, xs) = (&f[yi], &f[xi]);
                    for (y, a) in distinct(ys) {
                        for (x, b) in distinct(xs) {
                            let t = p.binop(&p.tensor, a, b);
                            if t == NONE {
                                continue;
                            }
                            let mut merged = without(ys, y);
                            merged.extend(without(xs, x));
                            merged.push(t);
                            let step = Step::new(Rule::Tensor, fi, 0, yi as Id, a, xi as Id, b);
                            offer(smallvec::smallvec![merged], step);
                        }
                    }
                }
            }
            if f.len() > 1 {
                continue;
            }
            // The prefix rules need a single, possibly empty, sequent.
            let s: Seq = f.first().cloned().unwrap_or_default();
            if n < max {
                offer(with(&s, p.bot), Step::unary(Rule::Bot, fi, 0, 0));
                for c in 0..p.reps.len() {
                    let q = p.why_not[c];
                    if q != NONE {
                        offer(with(&s, q), Step::unary(Rule::Weaken, fi, c as Id, 0));
                    }
                }
            }
            for (x, a) in distinct(&s) {
                let rest = without(&s, x);
                for (y, b) in distinct(&rest) {
                    let t = p.binop(&p.par, a, b);
                    if t != NONE {
                        offer(with(&without(&rest, y), t), Step::unary(Rule::Parr, fi, a, b));
                    }
                }
                for &(c, t) in &p.plus1[a as usize] {
                    offer(with(&rest, t), Step::unary(Rule::Plus1, fi, a, c));
                }
                for &(c, t) in &p.plus2[a as usize] {
                    offer(with(&rest, t), Step::unary(Rule::Plus2, fi, a, c));
                }
                for &(b, t) in &p.with1[a as usize] {
                    if let Some(&other) = self.index.get(&pack(&normal(with(&rest, b)))) {
                        offer(with(&rest, t), Step::new(Rule::With, fi, other as usize, a, b, 0, 0));
                    }
                }
                for &(b, t) in &p.with2[a as usize] {
                    if let Some(&other) = self.index.get(&pack(&normal(with(&rest, b)))) {
                        offer(with(&rest, t), Step::new(Rule::With, other as usize, fi, b, a, 0, 0));
                    }
                }
                for &r in &p.exists[a as usize] {
                    offer(with(&rest, r), Step::unary(Rule::Exists, fi, a, r));
                }
                for &(r, v) in &p.forall[a as usize] {
                    if rest.iter().all(|b| p.free[*b as usize] & (1 << v) == 0) {
                        offer(with(&rest, r), Step::unary(Rule::Forall, fi, a, r));
                    }
                }
                let t = p.of_course[a as usize];
                if t != NONE && rest.iter().all(|b| p.why_not_inner[*b as usize] != NONE) {
                    offer(with(&rest, t), Step::unary(Rule::Bang, fi, a, 0));
                }
                let t = p.why_not[a as usize];
                if t != NONE {
                    offer(with(&rest, t), Step::unary(Rule::Quest, fi, a, 0));
                }
            }
        }
        out
    }

    pub fn bounds(&self) -> &EnumBounds {
        &self.bounds
    }

    /// The height bound the enumeration was saturated to.
    pub fn max_height(&self) -> usize {
        self.max_height
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Size of the proposition universe.
    pub fn universe(&self) -> usize {
        self.props.reps.len()
    }

    fn key_of(&self, hs: &Hypersequent) -> Option<Key> {
        let mut shape = Shape::new();
        for s in hs.sequents() {
            let mut seq = Seq::new();
            for (_, a) in s.iter() {
                seq.push(self.props.id(a)?);
            }
            shape.push(seq);
        }
        let shape = normal(shape);
        (names(&shape) <= self.bounds.max_names).then(|| pack(&shape))
    }

    fn lookup(&self, hs: &Hypersequent) -> Option<&Entry> {
        let key = self.key_of(hs)?;
        self.index.get(&key).map(|&i| &self.entries[i as usize])
    }

    /// Whether `hs` is derivable within the bounds, up to renaming.
    pub fn contains(&self, hs: &Hypersequent) -> bool {
        self.lookup(hs).is_some()
    }

    /// The least height of a derivation of `hs`.
    pub fn height_of(&self, hs: &Hypersequent) -> Option<usize> {
        self.lookup(hs).map(|e| e.height as usize)
    }

    /// The rule concluding the first derivation found for `hs`.
    pub fn last_rule(&self, hs: &Hypersequent) -> Option<Rule> {
        self.lookup(hs).map(|e| e.step.rule)
    }

    /// The enumerated hypersequents, with names `x1, x2, ...`.
    pub fn hypersequents(&self) -> impl Iterator<Item = Hypersequent> + '_ {
        self.entries.iter().map(|e| self.realise(e.key))
    }

    fn realise(&self, key: Key) -> Hypersequent {
        let mut n = 0;
        let sequents = unpack(key).into_iter().map(|s| {
            s.iter()
                .map(|a| {
                    n += 1;
                    (Name::new(format!("x{n}")), self.props.get(*a).clone())
                })
                .collect::<Sequent>()
        });
        Hypersequent::from_sequents(sequents).expect("distinct names")
    }

    /// A derivation of `hs` of least height, rebuilt from the recorded
    /// rule applications. Its names differ from those of `hs`.
    pub fn witness(&self, hs: &Hypersequent) -> Option<Derivation> {
        let key = self.key_of(hs)?;
        let &i = self.index.get(&key)?;
        Some(self.build(i as usize, &mut 0))
    }

    /// A derivation for every entry, checked against the recorded shape.
    /// Returns the number of entries checked, or the first mismatch.
    pub fn check_witnesses(&self) -> Result<usize, String> {
        for (i, e) in self.entries.iter().enumerate() {
            let d = self.build(i, &mut 0);
            if self.key_of(d.hypersequent()) != Some(e.key) || d.height() > e.height as usize + 1 {
                return Err(format!(
                    "witness `{}` types as `{}`, expected `{}` at height {}",
                    d.process(),
                    d.hypersequent(),
                    self.realise(e.key),
                    e.height
                ));
            }
        }
        Ok(self.entries.len())
    }

    /// Independence of provable hypersequents: every sequent of every
    /// enumerated hypersequent is enumerated on its own. Returns the number
    /// of sequents checked, or a hypersequent with an underivable component.
    pub fn check_independence(&self) -> Result<usize, Hypersequent> {
        let mut checked = 0;
        for e in &self.entries {
            let shape = unpack(e.key);
            if shape.len() < 2 {
                continue;
            }
            for s in shape.iter() {
                checked += 1;
                if !self.index.contains_key(&pack(&smallvec::smallvec![s.clone()])) {
                    return Err(self.realise(e.key));
                }
            }
        }
        Ok(checked)
    }

    fn fresh(next: &mut usize) -> Name {
        *next += 1;
        Name::new(format!("x{next}"))
    }

    /// Sequent `i` of the shape of entry `e`.
    fn seq_of(&self, e: u32, i: Id) -> Seq {
        unpack(self.entries[e as usize].key)[i as usize].clone()
    }

    /// Rebuilds a derivation of entry `i`, taking fresh names from `next`.
    fn build(&self, i: usize, next: &mut usize) -> Derivation {
        let p = &self.props;
        let st = self.entries[i].step;
        let sub = |j: u32, next: &mut usize| self.build(j as usize, next);
        let boxed = |d: &Derivation| Box::new(d.process().clone());
        let process = match st.rule {
            Rule::Mix0 => Process::Nil,
            Rule::One => Process::Close { subject: Self::fresh(next) },
            Rule::Ax => Process::Link { ty: p.get(st.x).clone(), from: Self::fresh(next), to: Self::fresh(next) },
            Rule::Mix => {
                let l = sub(st.a, next);
                let r = sub(st.b, next);
                Process::par(l.process().clone(), r.process().clone())
            }
            Rule::Cut => {
                let d = sub(st.a, next);
                let x = self.find(d.hypersequent(), &self.seq_of(st.a, st.x), st.y, &[]);
                let y = self.find_apart(d.hypersequent(), &self.seq_of(st.a, st.z), st.w, &x);
                Process::res(x, y, d.process().clone())
            }
            Rule::Bot => {
                let d = sub(st.a, next);
                Process::Wait { subject: Self::fresh(next), cont: boxed(&d) }
            }
            Rule::Tensor => {
                let d = sub(st.a, next);
                let y = self.find(d.hypersequent(), &self.seq_of(st.a, st.x), st.y, &[]);
                let x = self.find_apart(d.hypersequent(), &self.seq_of(st.a, st.z), st.w, &y);
                Process::Send { subject: x, object: y, cont: boxed(&d) }
            }
            Rule::Parr => {
                let d = sub(st.a, next);
                let y = self.find_any(d.hypersequent(), st.x, &[]);
                let x = self.find_any(d.hypersequent(), st.y, std::slice::from_ref(&y));
                Process::Recv { subject: x, object: y, cont: boxed(&d) }
            }
            Rule::Plus1 => {
                let d = sub(st.a, next);
                let x = self.find_any(d.hypersequent(), st.x, &[]);
                Process::SelectLeft { subject: x, right: p.get(st.y).clone(), cont: boxed(&d) }
            }
            Rule::Plus2 => {
                let d = sub(st.a, next);
                let x = self.find_any(d.hypersequent(), st.x, &[]);
                Process::SelectRight { subject: x, left: p.get(st.y).clone(), cont: boxed(&d) }
            }
            Rule::With => {
                let l = sub(st.a, next);
                let r = sub(st.b, next);
                let x = self.find_any(l.hypersequent(), st.x, &[]);
                let y = self.find_any(r.hypersequent(), st.y, &[]);
                // Align the right branch's context with the left one's.
                let mut map = std::collections::BTreeMap::from([(y.clone(), x.clone())]);
                let mut used = vec![x.clone()];
                for (n, ty) in r.hypersequent().sequents().first().into_iter().flat_map(|s| s.iter()) {
                    if *n == y {
                        continue;
                    }
                    let id = p.id(ty).expect("in universe");
                    let m = self.find_any(l.hypersequent(), id, &used);
                    used.push(m.clone());
                    map.insert(n.clone(), m);
                }
                Process::Case { subject: x, left: boxed(&l), right: Box::new(r.process().rename(&map)) }
            }
            Rule::Exists => {
                let d = sub(st.a, next);
                let x = self.find_any(d.hypersequent(), st.x, &[]);
                let P::Exists(var, scheme) = p.get(st.y) else { unreachable!("recorded as existential") };
                let witness = instance_of(scheme, var, p.get(st.x)).expect("recorded as an instance");
                Process::SendType { subject: x, witness, var: var.clone(), scheme: (**scheme).clone(), cont: boxed(&d) }
            }
            Rule::Forall => {
                let d = sub(st.a, next);
                let x = self.find_any(d.hypersequent(), st.x, &[]);
                let P::Forall(var, _) = p.get(st.y) else { unreachable!("recorded as universal") };
                Process::RecvType { subject: x, var: var.clone(), cont: boxed(&d) }
            }
            Rule::Bang => {
                let d = sub(st.a, next);
                let y = self.find_any(d.hypersequent(), st.x, &[]);
                Process::Server { subject: Self::fresh(next), object: y, body: boxed(&d) }
            }
            Rule::Quest => {
                let d = sub(st.a, next);
                let y = self.find_any(d.hypersequent(), st.x, &[]);
                Process::ClientUse { subject: Self::fresh(next), object: y, cont: boxed(&d) }
            }
            Rule::Weaken => {
                let d = sub(st.a, next);
                Process::ClientDispose { subject: Self::fresh(next), ty: p.get(st.x).clone(), cont: boxed(&d) }
            }
            Rule::Contract => {
                let d = sub(st.a, next);
                let seq = self.seq_of(st.a, st.x);
                let x = self.find(d.hypersequent(), &seq, st.y, &[]);
                let copy = self.find(d.hypersequent(), &seq, st.y, std::slice::from_ref(&x));
                Process::ClientSpawn { subject: x, copy, cont: boxed(&d) }
            }
        };
        infer(&process).unwrap_or_else(|e| panic!("enumeration witness `{process}` does not type: {e}"))
    }

    /// A name of type `ty` in a sequent with contents `seq`.
    fn find(&self, hs: &Hypersequent, seq: &[Id], ty: Id, avoid: &[Name]) -> Name {
        for s in hs.sequents() {
            let ids: Option<Seq> = s.iter().map(|(_, a)| self.props.id(a)).collect();
            let Some(mut ids) = ids else { continue };
            ids.sort_unstable();
            if ids.as_slice() != seq {
                continue;
            }
            for (n, a) in s.iter() {
                if self.props.id(a) == Some(ty) && !avoid.contains(n) {
                    return n.clone();
                }
            }
        }
        panic!("no entry of the recorded type in `{hs}`")
    }

    /// As [`Self::find`], in a sequent other than the one of `apart`.
    fn find_apart(&self, hs: &Hypersequent, seq: &[Id], ty: Id, apart: &Name) -> Name {
        let avoid: Vec<Name> = hs
            .sequents()
            .iter()
            .find(|s| s.contains(apart))
            .into_iter()
            .flat_map(|s| s.iter().map(|(n, _)| n.clone()))
            .collect();
        self.find(hs, seq, ty, &avoid)
    }

    fn find_any(&self, hs: &Hypersequent, ty: Id, avoid: &[Name]) -> Name {
        hs.sequents()
            .iter()
            .flat_map(|s| s.iter())
            .find(|(n, a)| self.props.id(a) == Some(ty) && !avoid.contains(n))
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| panic!("no entry of the recorded type in `{hs}`"))
    }
}

/// A witness `W` with `scheme{W/var}` equal to `target` up to α. The
/// candidate is read off at the first free occurrence of `var`; vacuous
/// schemes take `1`.
fn instance_of(scheme: &P, var: &TypeVar, target: &P) -> Option<P> {
    let w = candidate(scheme, var, target).unwrap_or(P::One);
    scheme.subst(&w, var).alpha_eq(target).then_some(w)
}

fn candidate(s: &P, var: &TypeVar, t: &P) -> Option<P> {
    match (s, t) {
        (P::Atom(x), _) if x == var => Some(t.clone()),
        (P::DualAtom(x), _) if x == var => Some(t.dual()),
        (P::Tensor(a, b), P::Tensor(c, d))
        | (P::Par(a, b), P::Par(c, d))
        | (P::Plus(a, b), P::Plus(c, d))
        | (P::With(a, b), P::With(c, d)) => candidate(a, var, c).or_else(|| candidate(b, var, d)),
        (P::OfCourse(a), P::OfCourse(c)) | (P::WhyNot(a), P::WhyNot(c)) => candidate(a, var, c),
        (P::Exists(x, a), P::Exists(_, c)) | (P::Forall(x, a), P::Forall(_, c)) if x != var => candidate(a, var, c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_hypersequent;

    fn hs(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    #[test]
    fn leaves_at_height_one() {
        let e = enumerate(1);
        assert!(e.contains(&hs("x : 1")));
        assert!(e.contains(&Hypersequent::empty()));
        assert!(e.contains(&hs("x : ~X, y : X")));
        assert_eq!(e.height_of(&hs("x : 1")), Some(0));
        assert!(!e.contains(&hs("x : 1 * bot")));
    }

    #[test]
    fn one_tensor_bot_at_height_three() {
        let e = enumerate(3);
        let target = hs("x : 1 * bot");
        assert_eq!(e.height_of(&target), Some(3));
        assert_eq!(e.last_rule(&target), Some(Rule::Tensor));
        let d = e.witness(&target).unwrap();
        assert!(e.contains(d.hypersequent()));
        assert_eq!(d.height(), 4);
        assert!(!enumerate(2).contains(&target));
    }

    #[test]
    fn independence_and_witnesses_at_small_height() {
        let e = enumerate(2);
        assert!(e.check_independence().unwrap() > 0);
        assert_eq!(e.check_witnesses(), Ok(e.len()));
    }

    #[test]
    fn scheme_matching() {
        let x = Name::new("X");
        let a = P::tensor(P::One, P::Bot);
        assert_eq!(instance_of(&P::Atom(x.clone()), &x, &a), Some(a.clone()));
        assert_eq!(instance_of(&P::DualAtom(x.clone()), &x, &a), Some(a.dual()));
        assert_eq!(instance_of(&P::One, &x, &P::One), Some(P::One));
        assert_eq!(instance_of(&P::One, &x, &P::Bot), None);
        let s = P::par(P::Atom(x.clone()), P::DualAtom(x.clone()));
        assert_eq!(instance_of(&s, &x, &P::par(P::One, P::Bot)), Some(P::One));
        assert_eq!(instance_of(&s, &x, &P::par(P::One, P::One)), None);
    }

    #[test]
    fn bounds_are_reported() {
        assert_eq!(EnumBounds::default().to_string(), "atoms {X}, proposition depth <= 2, at most 4 names");
    }
}
