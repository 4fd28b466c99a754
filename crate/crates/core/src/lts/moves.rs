//! The transition relation computed by structural recursion over a
//! derivation. Results are relative to the subterm being visited; the caller
//! re-infers targets at the root.

use std::collections::{BTreeMap, BTreeSet};

use super::{Label, SosRule};
use crate::syntax::{Name, Process, TypeVar};
use crate::types::{Hypersequent, Proposition as P};
use crate::typing::Derivation;

use Label as L;

#[derive(Clone, Debug)]
pub(crate) struct Move {
    pub label: Label,
    pub target: Process,
    pub rules: Vec<SosRule>,
    pub spawn_map: Option<BTreeMap<Name, Name>>,
    /// Path in `target` to the continuation of a fired `dispose` prefix.
    pub anchor: Option<Vec<usize>>,
}

/// A `x(type X).P` prefix reachable through parallel composition and
/// restriction, at `path` in the visited subterm.
#[derive(Clone, Debug)]
pub(crate) struct TypeInput {
    pub subject: Name,
    pub var: TypeVar,
    pub path: Vec<usize>,
    pub rules: Vec<SosRule>,
}

impl TypeInput {
    pub fn fire(&self, p: &Process, witness: &P) -> Process {
        p.map_at_path(&self.path, |node| match node {
            Process::RecvType { var, cont, .. } => cont.subst_type(witness, var),
            other => other.clone(),
        })
    }
}

#[derive(Default)]
pub(crate) struct Moves {
    pub moves: Vec<Move>,
    pub inputs: Vec<TypeInput>,
}

/// `avoid` holds the names a label binder must not take: free names of the
/// root and names restricted above the visited node. `all` holds every
/// name of the root; fresh names are chosen outside it.
pub(crate) fn moves(d: &Derivation, avoid: &BTreeSet<Name>, all: &BTreeSet<Name>) -> Moves {
    let p = d.process();
    match p {
        Process::Par(left, right) => par(d, left, right, avoid, all),
        Process::Res { left, right, .. } => res(d, left, right, avoid, all),
        _ => Moves {
            moves: prefix(d, avoid, all),
            inputs: match p {
                Process::RecvType { subject, var, .. } => vec![TypeInput {
                    subject: subject.clone(),
                    var: var.clone(),
                    path: vec![],
                    rules: vec![SosRule::Axiom],
                }],
                _ => vec![],
            },
        },
    }
}

fn leaf(label: Label, target: Process) -> Move {
    Move { label, target, rules: vec![SosRule::Axiom], spawn_map: None, anchor: None }
}

/// Keeps the binder unless it is in `avoid`, in which case it is replaced
/// by a fresh prime throughout the continuation.
fn bind(b: &Name, cont: &Process, avoid: &BTreeSet<Name>, all: &BTreeSet<Name>) -> (Name, Process) {
    if avoid.contains(b) {
        let fresh = b.fresh_prime(all);
        let cont = cont.rename_one(b, &fresh);
        (fresh, cont)
    } else {
        (b.clone(), cont.clone())
    }
}

fn prefix(d: &Derivation, avoid: &BTreeSet<Name>, all: &BTreeSet<Name>) -> Vec<Move> {
    let hs = d.hypersequent();
    let ty = |x: &Name| hs.lookup(x).cloned();
    match d.process() {
        Process::Close { subject } => vec![leaf(L::Close(subject.clone()), Process::Nil)],
        Process::Wait { subject, cont } => vec![leaf(L::Wait(subject.clone()), (**cont).clone())],
        Process::Send { subject, object, cont } => {
            let Some(P::Tensor(a, b)) = ty(subject) else { return vec![] };
            let (object, cont) = bind(object, cont, avoid, all);
            vec![leaf(L::Send { subject: subject.clone(), object, a: *a, b: *b }, cont)]
        }
        Process::Recv { subject, object, cont } => {
            let Some(P::Par(a, b)) = ty(subject) else { return vec![] };
            let (object, cont) = bind(object, cont, avoid, all);
            vec![leaf(L::Recv { subject: subject.clone(), object, a: *a, b: *b }, cont)]
        }
        Process::SelectLeft { subject, cont, .. } => {
            let Some(P::Plus(a, b)) = ty(subject) else { return vec![] };
            vec![leaf(L::InlSel { subject: subject.clone(), a: *a, b: *b }, (**cont).clone())]
        }
        Process::SelectRight { subject, cont, .. } => {
            let Some(P::Plus(a, b)) = ty(subject) else { return vec![] };
            vec![leaf(L::InrSel { subject: subject.clone(), a: *a, b: *b }, (**cont).clone())]
        }
        Process::Case { subject, left, right } => {
            let Some(P::With(a, b)) = ty(subject) else { return vec![] };
            vec![
                leaf(L::InlOff { subject: subject.clone(), a: (*a).clone(), b: (*b).clone() }, (**left).clone()),
                leaf(L::InrOff { subject: subject.clone(), a: *a, b: *b }, (**right).clone()),
            ]
        }
        Process::SendType { subject, witness, cont, .. } => {
            vec![leaf(L::SendType { subject: subject.clone(), witness: witness.clone() }, (**cont).clone())]
        }
        Process::RecvType { .. } | Process::Nil => vec![],
        Process::Link { ty, from, to } => {
            vec![leaf(L::Link { from: from.clone(), to: to.clone(), a: ty.clone() }, Process::Nil)]
        }
        Process::Server { subject, object, body } => {
            let Some(P::OfCourse(a)) = ty(subject) else { return vec![] };
            let (used, use_body) = bind(object, body, avoid, all);
            let copy = subject.fresh_prime(all);
            let mut taken = all.clone();
            taken.insert(copy.clone());
            let mut map = BTreeMap::new();
            for z in body.free_names() {
                if z != *object {
                    let z2 = z.fresh_prime(&taken);
                    taken.insert(z2.clone());
                    map.insert(z, z2);
                }
            }
            let spawned = Process::par(p_server(subject, object, body), p_server(&copy, object, &body.rename(&map)));
            map.insert(subject.clone(), copy.clone());
            vec![
                leaf(L::UseAcc { subject: subject.clone(), object: used, a: (*a).clone() }, use_body),
                leaf(L::DispAcc { subject: subject.clone(), a: (*a).clone() }, Process::Nil),
                Move { spawn_map: Some(map), ..leaf(L::SpawnAcc { subject: subject.clone(), copy, a: *a }, spawned) },
            ]
        }
        Process::ClientUse { subject, object, cont } => {
            let Some(P::WhyNot(a)) = ty(subject) else { return vec![] };
            let (object, cont) = bind(object, cont, avoid, all);
            vec![leaf(L::UseReq { subject: subject.clone(), object, a: *a }, cont)]
        }
        Process::ClientSpawn { subject, copy, cont } => {
            let Some(P::WhyNot(a)) = ty(subject) else { return vec![] };
            let (copy, cont) = bind(copy, cont, avoid, all);
            vec![leaf(L::SpawnReq { subject: subject.clone(), copy, a: *a }, cont)]
        }
        Process::ClientDispose { subject, ty, cont } => vec![Move {
            anchor: Some(vec![]),
            ..leaf(L::DispReq { subject: subject.clone(), a: ty.clone() }, (**cont).clone())
        }],
        Process::Par(..) | Process::Res { .. } => unreachable!("handled by the caller"),
    }
}

fn p_server(subject: &Name, object: &Name, body: &Process) -> Process {
    Process::Server { subject: subject.clone(), object: object.clone(), body: Box::new(body.clone()) }
}

fn prefixed(path: &Option<Vec<usize>>, i: usize) -> Option<Vec<usize>> {
    path.as_ref().map(|p| std::iter::once(i).chain(p.iter().copied()).collect())
}

fn lift(m: Move, i: usize, wrap: impl FnOnce(Process) -> Process, rule: SosRule) -> Move {
    let mut rules = m.rules;
    rules.push(rule);
    Move { label: m.label, target: wrap(m.target), rules, spawn_map: m.spawn_map, anchor: prefixed(&m.anchor, i) }
}

fn par(d: &Derivation, left: &Process, right: &Process, avoid: &BTreeSet<Name>, all: &BTreeSet<Name>) -> Moves {
    let lm = moves(&d.premises[0], avoid, all);
    let rm = moves(&d.premises[1], avoid, all);
    let mut out = Moves::default();
    let mut synced = Vec::new();
    for a in &lm.moves {
        for b in &rm.moves {
            if let Some(m) = sync(a, b, all) {
                synced.push(m);
            }
        }
    }
    let mut typed = Vec::new();
    for (a, inputs, other, i) in [(&lm.moves, &rm.inputs, right, 1), (&rm.moves, &lm.inputs, left, 0)] {
        for m in a {
            let L::SendType { witness, .. } = &m.label else { continue };
            for c in inputs {
                let received = c.fire(other, witness);
                let target = if i == 1 {
                    Process::par(m.target.clone(), received)
                } else {
                    Process::par(received, m.target.clone())
                };
                let mut rules = m.rules.clone();
                rules.extend(c.rules.iter().copied());
                rules.push(SosRule::Syn);
                typed.push(Move {
                    label: Label::sync(
                        m.label.clone(),
                        L::RecvType { subject: c.subject.clone(), witness: witness.clone() },
                    ),
                    target,
                    rules,
                    spawn_map: None,
                    anchor: None,
                });
            }
        }
    }
    for m in lm.moves {
        if m.label.bound_names().iter().all(|b| !right.is_free(b)) {
            out.moves.push(lift(m, 0, |t| Process::par(t, right.clone()), SosRule::Par1));
        }
    }
    for m in rm.moves {
        if m.label.bound_names().iter().all(|b| !left.is_free(b)) {
            out.moves.push(lift(m, 1, |t| Process::par(left.clone(), t), SosRule::Par2));
        }
    }
    out.moves.extend(synced);
    out.moves.extend(typed);
    for (inputs, i) in [(&lm.inputs, 0), (&rm.inputs, 1)] {
        for c in inputs {
            let mut c = c.clone();
            c.path.insert(0, i);
            c.rules.push(if i == 0 { SosRule::Par1 } else { SosRule::Par2 });
            out.inputs.push(c);
        }
    }
    out
}

fn introduced(m: &Move) -> BTreeSet<Name> {
    let mut out = m.label.bound_names();
    if let Some(map) = &m.spawn_map {
        out.extend(map.values().cloned());
    }
    out
}

/// Syn on a left move `a` and right move `b`, if their labels are dual.
fn sync(a: &Move, b: &Move, all: &BTreeSet<Name>) -> Option<Move> {
    let left_out = if a.label.is_output() && b.label.is_input() && super::label::label_dual(&a.label, &b.label) {
        true
    } else if a.label.is_input() && b.label.is_output() && super::label::label_dual(&a.label, &b.label) {
        false
    } else {
        return None;
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let (ia, ib) = (introduced(&a), introduced(&b));
    if !ia.is_disjoint(&ib) {
        let taken: BTreeSet<Name> = all.iter().chain(&ia).chain(&ib).cloned().collect();
        let victim = if matches!(b.label, L::SpawnAcc { .. }) { &mut a } else { &mut b };
        let old = victim.label.binder().cloned().expect("clashing moves bind a name");
        let fresh = old.fresh_prime(&taken);
        victim.target = victim.target.rename_one(&old, &fresh);
        *victim.label.binder_mut().expect("checked") = fresh;
    }
    let target = Process::par(a.target.clone(), b.target.clone());
    let anchor = prefixed(&a.anchor, 0).or_else(|| prefixed(&b.anchor, 1));
    let spawn_map = a.spawn_map.clone().or_else(|| b.spawn_map.clone());
    let (out, inp) = if left_out { (a, b) } else { (b, a) };
    let mut rules = out.rules;
    rules.extend(inp.rules);
    rules.push(SosRule::Syn);
    Some(Move { label: Label::sync(out.label, inp.label), target, rules, spawn_map, anchor })
}

fn res(d: &Derivation, l: &Name, r: &Name, avoid: &BTreeSet<Name>, all: &BTreeSet<Name>) -> Moves {
    let mut inner = avoid.clone();
    inner.insert(l.clone());
    inner.insert(r.clone());
    let body = &d.premises[0];
    let bm = moves(body, &inner, all);
    let mut out = Moves::default();
    let mut cuts = Vec::new();
    let wrap = |q: Process| Process::res(l.clone(), r.clone(), q);
    for m in &bm.moves {
        if let Some(m) = cut(m, l, r, body, all) {
            cuts.push(m);
        }
    }
    for m in bm.moves {
        let names = m.label.names();
        // Both restricted names stay typed in the target: a disposed server
        // takes its clients with it, and a cut on one of them would dangle.
        if !names.contains(l) && !names.contains(r) && m.target.is_free(l) && m.target.is_free(r) {
            out.moves.push(lift(m, 0, wrap, SosRule::Res));
        }
    }
    out.moves.extend(cuts);
    for c in bm.inputs {
        if c.subject != *l && c.subject != *r {
            let mut c = c;
            c.path.insert(0, 0);
            c.rules.push(SosRule::Res);
            out.inputs.push(c);
        }
    }
    out
}

/// The cut rules: a sync on the two restricted names, or a link on one.
fn cut(m: &Move, l: &Name, r: &Name, body: &Derivation, all: &BTreeSet<Name>) -> Option<Move> {
    let q = m.target.clone();
    let (target, rule) = match &m.label {
        L::Sync(out, inp) => {
            let (so, si) = (out.subject()?, inp.subject()?);
            if !((so == l && si == r) || (so == r && si == l)) {
                return None;
            }
            let inner = |q: Process| -> Process {
                let (lo, ro) = if so == l { (out.binder(), inp.binder()) } else { (inp.binder(), out.binder()) };
                Process::res(lo.expect("bound").clone(), ro.expect("bound").clone(), q)
            };
            let outer = |q: Process| Process::res(l.clone(), r.clone(), q);
            match (&**out, &**inp) {
                (L::Close(_), L::Wait(_)) => (q, SosRule::CutOne),
                (L::Send { .. }, L::Recv { .. }) => (outer(inner(q)), SosRule::CutTensor),
                (L::InlSel { .. }, L::InlOff { .. }) => (outer(q), SosRule::CutPlus1),
                (L::InrSel { .. }, L::InrOff { .. }) => (outer(q), SosRule::CutPlus2),
                (L::UseReq { .. }, L::UseAcc { .. }) => (inner(q), SosRule::CutBang),
                (L::DispReq { .. }, L::DispAcc { .. }) => (weaken(m, l, r, body, all), SosRule::CutWeaken),
                (L::SpawnReq { .. }, L::SpawnAcc { subject, .. }) => {
                    let map = m.spawn_map.as_ref()?;
                    let mut t = outer(inner(q));
                    for (z, z2) in map.iter().rev() {
                        if z != subject {
                            t = Process::ClientSpawn { subject: z.clone(), copy: z2.clone(), cont: Box::new(t) };
                        }
                    }
                    (t, SosRule::CutContract)
                }
                (L::SendType { .. }, L::RecvType { .. }) => (outer(q), SosRule::CutExists),
                _ => return None,
            }
        }
        L::Link { from, to, .. } => {
            let other = |n: &Name| if n == l { r.clone() } else { l.clone() };
            if to == l || to == r {
                (q.rename_one(&other(to), from), SosRule::Ax1)
            } else if from == l || from == r {
                (q.rename_one(&other(from), to), SosRule::Ax2)
            } else {
                return None;
            }
        }
        _ => return None,
    };
    let mut rules = m.rules.clone();
    rules.push(rule);
    Some(Move { label: L::Tau, target, rules, spawn_map: None, anchor: None })
}

/// Disposes the server's clients. The prefixes go on top when the rest of
/// the state is a single sequent, and otherwise around the continuation of
/// the fired `dispose`, which is where the client's sequent lives.
fn weaken(m: &Move, l: &Name, r: &Name, body: &Derivation, all: &BTreeSet<Name>) -> Process {
    let q = &m.target;
    let fq = q.free_names();
    let hs: &Hypersequent = body.hypersequent();
    let zs: Vec<(Name, P)> = body
        .process()
        .free_names()
        .into_iter()
        .filter(|z| z != l && z != r && !fq.contains(z))
        .map(|z| {
            let a = match hs.lookup(&z) {
                Some(P::WhyNot(a)) => (**a).clone(),
                other => panic!("disposed name `{z}` has non-client type {other:?}"),
            };
            (z, a)
        })
        .collect();
    let dispose = |mut t: Process| {
        for (z, a) in zs.iter().rev() {
            t = Process::ClientDispose { subject: z.clone(), ty: a.clone(), cont: Box::new(t) };
        }
        t
    };
    match &m.anchor {
        Some(path) if hs.len() != 2 => {
            let names: BTreeSet<Name> = zs.iter().map(|(z, _)| z.clone()).collect();
            wrap_at(q, path, &dispose, &names, all)
        }
        _ => dispose(q.clone()),
    }
}

/// Applies `wrap` at `path`, first renaming restrictions on the way down
/// that would capture one of `names`.
fn wrap_at(
    p: &Process,
    path: &[usize],
    wrap: &dyn Fn(Process) -> Process,
    names: &BTreeSet<Name>,
    all: &BTreeSet<Name>,
) -> Process {
    let Some((&i, rest)) = path.split_first() else {
        return wrap(p.clone());
    };
    let mut p = p.clone();
    if let Process::Res { left, right, body } = &p {
        let taken: BTreeSet<Name> = all.iter().chain(names).chain(&body.all_names()).cloned().collect();
        let mut body = (**body).clone();
        let mut fix = |n: &Name| {
            if names.contains(n) {
                let fresh = n.fresh_prime(&taken);
                body = body.rename_one(n, &fresh);
                fresh
            } else {
                n.clone()
            }
        };
        let (left, right) = (fix(left), fix(right));
        p = Process::res(left, right, body);
    }
    p.map_at_path(&[i], |c| wrap_at(c, rest, wrap, names, all))
}
