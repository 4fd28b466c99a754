use std::collections::{BTreeMap, BTreeSet};

use smallvec::{smallvec, SmallVec};

use super::{Name, TypeVar};
use crate::types::{Canonicalizer, Proposition};

/// A process term.
///
/// Binders: the object of `Send`, `Recv`, `Server` and `ClientUse`, the copy
/// of `ClientSpawn`, both names of `Res` and the variable of `RecvType` scope
/// over the continuation only. The scheme variable of `SendType` scopes over
/// `scheme` only.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Process {
    /// `x[y].P`
    Send { subject: Name, object: Name, cont: Box<Process> },
    /// `x(y).P`
    Recv { subject: Name, object: Name, cont: Box<Process> },
    /// `x[inl: B].P`, annotated with the unused right branch.
    SelectLeft { subject: Name, right: Proposition, cont: Box<Process> },
    /// `x[inr: A].P`, annotated with the unused left branch.
    SelectRight { subject: Name, left: Proposition, cont: Box<Process> },
    /// `case x {inl: P; inr: Q}`
    Case { subject: Name, left: Box<Process>, right: Box<Process> },
    /// `x[type A as ex X.B].P`
    SendType { subject: Name, witness: Proposition, var: TypeVar, scheme: Proposition, cont: Box<Process> },
    /// `x(type X).P`
    RecvType { subject: Name, var: TypeVar, cont: Box<Process> },
    /// `close x`
    Close { subject: Name },
    /// `wait x.P`
    Wait { subject: Name, cont: Box<Process> },
    /// `link [A] x y`, typing `x : ~A, y : A`.
    Link { ty: Proposition, from: Name, to: Name },
    /// `!x(y).P`
    Server { subject: Name, object: Name, body: Box<Process> },
    /// `?x[y].P`
    ClientUse { subject: Name, object: Name, cont: Box<Process> },
    /// `spawn x[x'].P`
    ClientSpawn { subject: Name, copy: Name, cont: Box<Process> },
    /// `dispose [A] x.P`, typing `x : ?A`.
    ClientDispose { subject: Name, ty: Proposition, cont: Box<Process> },
    /// `new (x,y){P}`
    Res { left: Name, right: Name, body: Box<Process> },
    /// `P | Q`
    Par(Box<Process>, Box<Process>),
    /// `0`
    Nil,
}

use Process as Pr;

impl Process {
    pub fn par(l: Process, r: Process) -> Process {
        Pr::Par(Box::new(l), Box::new(r))
    }

    pub fn res(left: impl Into<Name>, right: impl Into<Name>, body: Process) -> Process {
        Pr::Res { left: left.into(), right: right.into(), body: Box::new(body) }
    }

    /// Immediate subterms, in left-to-right order.
    pub fn children(&self) -> SmallVec<[&Process; 2]> {
        match self {
            Pr::Send { cont, .. }
            | Pr::Recv { cont, .. }
            | Pr::SelectLeft { cont, .. }
            | Pr::SelectRight { cont, .. }
            | Pr::SendType { cont, .. }
            | Pr::RecvType { cont, .. }
            | Pr::Wait { cont, .. }
            | Pr::ClientUse { cont, .. }
            | Pr::ClientSpawn { cont, .. }
            | Pr::ClientDispose { cont, .. } => smallvec![&**cont],
            Pr::Server { body, .. } | Pr::Res { body, .. } => smallvec![&**body],
            Pr::Case { left, right, .. } => smallvec![&**left, &**right],
            Pr::Par(l, r) => smallvec![&**l, &**r],
            Pr::Close { .. } | Pr::Link { .. } | Pr::Nil => smallvec![],
        }
    }

    fn children_mut(&mut self) -> SmallVec<[&mut Process; 2]> {
        match self {
            Pr::Send { cont, .. }
            | Pr::Recv { cont, .. }
            | Pr::SelectLeft { cont, .. }
            | Pr::SelectRight { cont, .. }
            | Pr::SendType { cont, .. }
            | Pr::RecvType { cont, .. }
            | Pr::Wait { cont, .. }
            | Pr::ClientUse { cont, .. }
            | Pr::ClientSpawn { cont, .. }
            | Pr::ClientDispose { cont, .. } => smallvec![&mut **cont],
            Pr::Server { body, .. } | Pr::Res { body, .. } => smallvec![&mut **body],
            Pr::Case { left, right, .. } => smallvec![&mut **left, &mut **right],
            Pr::Par(l, r) => smallvec![&mut **l, &mut **r],
            Pr::Close { .. } | Pr::Link { .. } | Pr::Nil => smallvec![],
        }
    }

    /// The subterm reached by following child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Process> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at_path(rest),
        }
    }

    /// Replaces the subterm at `path` with `f(subterm)`. Panics on an
    /// invalid path.
    pub fn map_at_path(&self, path: &[usize], f: impl FnOnce(&Process) -> Process) -> Process {
        let mut out = self.clone();
        let mut slot = &mut out;
        for &i in path {
            slot = slot.children_mut().into_iter().nth(i).expect("valid path");
        }
        *slot = f(slot);
        out
    }

    /// Channel names bound at this node, scoping over every child.
    pub fn binders(&self) -> SmallVec<[&Name; 2]> {
        match self {
            Pr::Send { object, .. }
            | Pr::Recv { object, .. }
            | Pr::Server { object, .. }
            | Pr::ClientUse { object, .. } => smallvec![object],
            Pr::ClientSpawn { copy, .. } => smallvec![copy],
            Pr::Res { left, right, .. } => smallvec![left, right],
            _ => smallvec![],
        }
    }

    /// Channel names free at this node itself, excluding the children.
    fn own_free(&self) -> SmallVec<[&Name; 2]> {
        match self {
            Pr::Send { subject, .. }
            | Pr::Recv { subject, .. }
            | Pr::SelectLeft { subject, .. }
            | Pr::SelectRight { subject, .. }
            | Pr::Case { subject, .. }
            | Pr::SendType { subject, .. }
            | Pr::RecvType { subject, .. }
            | Pr::Close { subject }
            | Pr::Wait { subject, .. }
            | Pr::Server { subject, .. }
            | Pr::ClientUse { subject, .. }
            | Pr::ClientDispose { subject, .. } => smallvec![subject],
            Pr::ClientSpawn { subject, .. } => smallvec![subject],
            Pr::Link { from, to, .. } => smallvec![from, to],
            Pr::Res { .. } | Pr::Par(..) | Pr::Nil => smallvec![],
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
        for n in self.own_free() {
            if !bound.contains(&n) {
                out.insert(n.clone());
            }
        }
        let binders = self.binders();
        let k = binders.len();
        bound.extend(binders);
        for child in self.children() {
            child.collect_free(bound, out);
        }
        bound.truncate(bound.len() - k);
    }

    pub fn is_free(&self, name: &Name) -> bool {
        if self.own_free().contains(&name) {
            return true;
        }
        if self.binders().contains(&name) {
            return false;
        }
        self.children().iter().any(|c| c.is_free(name))
    }

    /// Every channel name occurring in the term, free or bound.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Name>) {
        out.extend(self.own_free().into_iter().cloned());
        out.extend(self.binders().into_iter().cloned());
        for c in self.children() {
            c.collect_all(out);
        }
    }

    /// `true` iff the process is `0` or a parallel composition of such.
    pub fn is_terminated(&self) -> bool {
        match self {
            Pr::Nil => true,
            Pr::Par(l, r) => l.is_terminated() && r.is_terminated(),
            _ => false,
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Capture-avoiding simultaneous renaming of free names.
    pub fn rename(&self, map: &BTreeMap<Name, Name>) -> Process {
        let map: BTreeMap<Name, Name> =
            map.iter().filter(|(k, v)| k != v).map(|(k, v)| (k.clone(), v.clone())).collect();
        if map.is_empty() {
            return self.clone();
        }
        rename_in(self, &map)
    }

    /// Renames one free name.
    pub fn rename_one(&self, from: &Name, to: &Name) -> Process {
        self.rename(&BTreeMap::from([(from.clone(), to.clone())]))
    }

    /// Replaces every free name `z` with `z` plus one prime, returning the
    /// copy together with the renaming used.
    pub fn prime_copy(&self) -> (Process, BTreeMap<Name, Name>) {
        let map: BTreeMap<Name, Name> = self
            .free_names()
            .into_iter()
            .map(|z| {
                let z2 = z.primed();
                (z, z2)
            })
            .collect();
        (self.rename(&map), map)
    }

    /// Equality up to consistent renaming of bound names and bound type
    /// variables.
    pub fn alpha_eq(&self, other: &Process) -> bool {
        self.canonical() == other.canonical()
    }

    /// The α-normal representative: bound names and bound type variables
    /// are renumbered in traversal order.
    pub fn canonical(&self) -> Process {
        let free = self.free_names();
        let free_tv = self.free_type_vars();
        let mut names = Canonicalizer::new(free.iter());
        let mut tvars = Canonicalizer::new(free_tv.iter());
        canon(self, &mut names, &mut tvars)
    }

    /// Type variables occurring free in annotations.
    pub fn free_type_vars(&self) -> BTreeSet<TypeVar> {
        let mut out = BTreeSet::new();
        self.collect_free_tv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_tv(&self, bound: &mut Vec<TypeVar>, out: &mut BTreeSet<TypeVar>) {
        match self {
            Pr::SelectLeft { right: a, cont, .. }
            | Pr::SelectRight { left: a, cont, .. }
            | Pr::ClientDispose { ty: a, cont, .. } => {
                a.collect_free_vars(bound, out);
                cont.collect_free_tv(bound, out);
            }
            Pr::Link { ty, .. } => ty.collect_free_vars(bound, out),
            Pr::SendType { witness, var, scheme, cont, .. } => {
                witness.collect_free_vars(bound, out);
                bound.push(var.clone());
                scheme.collect_free_vars(bound, out);
                bound.pop();
                cont.collect_free_tv(bound, out);
            }
            Pr::RecvType { var, cont, .. } => {
                bound.push(var.clone());
                cont.collect_free_tv(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free_tv(bound, out);
                }
            }
        }
    }

    /// Capture-avoiding substitution of `witness` for the type variable
    /// `var` in every annotation.
    pub fn subst_type(&self, witness: &Proposition, var: &TypeVar) -> Process {
        if !self.free_type_vars().contains(var) {
            return self.clone();
        }
        let s = |p: &Proposition| p.subst(witness, var);
        let k = |p: &Process| Box::new(p.subst_type(witness, var));
        match self {
            Pr::SelectLeft { subject, right, cont } => {
                Pr::SelectLeft { subject: subject.clone(), right: s(right), cont: k(cont) }
            }
            Pr::SelectRight { subject, left, cont } => {
                Pr::SelectRight { subject: subject.clone(), left: s(left), cont: k(cont) }
            }
            Pr::ClientDispose { subject, ty, cont } => {
                Pr::ClientDispose { subject: subject.clone(), ty: s(ty), cont: k(cont) }
            }
            Pr::Link { ty, from, to } => Pr::Link { ty: s(ty), from: from.clone(), to: to.clone() },
            Pr::SendType { subject, witness: w, var: bound, scheme, cont } => {
                // Reuse proposition substitution on the scheme as a binder.
                let quantified = Proposition::exists(bound.clone(), scheme.clone()).subst(witness, var);
                let Proposition::Exists(bound, scheme) = quantified else {
                    unreachable!("substitution preserves the outer connective")
                };
                Pr::SendType { subject: subject.clone(), witness: s(w), var: bound, scheme: *scheme, cont: k(cont) }
            }
            Pr::RecvType { subject, var: bound, cont } => {
                if bound == var {
                    return self.clone();
                }
                let (bound, cont) = if witness.has_free_var(bound) {
                    let mut avoid = witness.free_vars();
                    avoid.extend(cont.free_type_vars());
                    avoid.insert(var.clone());
                    let fresh = bound.fresh_prime(&avoid);
                    let renamed = cont.subst_type(&Proposition::Atom(fresh.clone()), bound);
                    (fresh, renamed)
                } else {
                    (bound.clone(), (**cont).clone())
                };
                Pr::RecvType { subject: subject.clone(), var: bound, cont: Box::new(cont.subst_type(witness, var)) }
            }
            _ => {
                let mut out = self.clone();
                for c in out.children_mut() {
                    *c = c.subst_type(witness, var);
                }
                out
            }
        }
    }
}

fn rename_name(n: &Name, map: &BTreeMap<Name, Name>) -> Name {
    map.get(n).cloned().unwrap_or_else(|| n.clone())
}

/// Handles one binder scoping over `bodies`: drops it from the map and, if
/// it would capture an image of the map, renames it.
fn enter_binder(binder: &Name, bodies: &[&Process], map: &BTreeMap<Name, Name>) -> (Name, BTreeMap<Name, Name>) {
    let mut inner = map.clone();
    inner.remove(binder);
    let captures = inner.values().any(|v| v == binder) && inner.keys().any(|k| bodies.iter().any(|b| b.is_free(k)));
    if !captures {
        return (binder.clone(), inner);
    }
    let mut avoid: BTreeSet<Name> = inner.keys().chain(inner.values()).cloned().collect();
    for b in bodies {
        avoid.extend(b.all_names());
    }
    let fresh = binder.fresh_prime(&avoid);
    inner.insert(binder.clone(), fresh.clone());
    (fresh, inner)
}

fn rename_in(p: &Process, map: &BTreeMap<Name, Name>) -> Process {
    let r = |n: &Name| rename_name(n, map);
    match p {
        Pr::Send { subject, object, cont } | Pr::Recv { subject, object, cont } => {
            let (object, inner) = enter_binder(object, &[cont], map);
            let cont = Box::new(rename_in(cont, &inner));
            if matches!(p, Pr::Send { .. }) {
                Pr::Send { subject: r(subject), object, cont }
            } else {
                Pr::Recv { subject: r(subject), object, cont }
            }
        }
        Pr::Server { subject, object, body } => {
            let (object, inner) = enter_binder(object, &[body], map);
            Pr::Server { subject: r(subject), object, body: Box::new(rename_in(body, &inner)) }
        }
        Pr::ClientUse { subject, object, cont } => {
            let (object, inner) = enter_binder(object, &[cont], map);
            Pr::ClientUse { subject: r(subject), object, cont: Box::new(rename_in(cont, &inner)) }
        }
        Pr::ClientSpawn { subject, copy, cont } => {
            let (copy, inner) = enter_binder(copy, &[cont], map);
            Pr::ClientSpawn { subject: r(subject), copy, cont: Box::new(rename_in(cont, &inner)) }
        }
        Pr::Res { left, right, body } => {
            let (left, inner) = enter_binder(left, &[body], map);
            // A freshened `left` is in the image of `inner`, so `right` avoids it.
            let (right, inner) = enter_binder(right, &[body], &inner);
            Pr::Res { left, right, body: Box::new(rename_in(body, &inner)) }
        }
        Pr::SelectLeft { subject, right, cont } => {
            Pr::SelectLeft { subject: r(subject), right: right.clone(), cont: Box::new(rename_in(cont, map)) }
        }
        Pr::SelectRight { subject, left, cont } => {
            Pr::SelectRight { subject: r(subject), left: left.clone(), cont: Box::new(rename_in(cont, map)) }
        }
        Pr::Case { subject, left, right } => Pr::Case {
            subject: r(subject),
            left: Box::new(rename_in(left, map)),
            right: Box::new(rename_in(right, map)),
        },
        Pr::SendType { subject, witness, var, scheme, cont } => Pr::SendType {
            subject: r(subject),
            witness: witness.clone(),
            var: var.clone(),
            scheme: scheme.clone(),
            cont: Box::new(rename_in(cont, map)),
        },
        Pr::RecvType { subject, var, cont } => {
            Pr::RecvType { subject: r(subject), var: var.clone(), cont: Box::new(rename_in(cont, map)) }
        }
        Pr::Close { subject } => Pr::Close { subject: r(subject) },
        Pr::Wait { subject, cont } => Pr::Wait { subject: r(subject), cont: Box::new(rename_in(cont, map)) },
        Pr::Link { ty, from, to } => Pr::Link { ty: ty.clone(), from: r(from), to: r(to) },
        Pr::ClientDispose { subject, ty, cont } => {
            Pr::ClientDispose { subject: r(subject), ty: ty.clone(), cont: Box::new(rename_in(cont, map)) }
        }
        Pr::Par(a, b) => Process::par(rename_in(a, map), rename_in(b, map)),
        Pr::Nil => Pr::Nil,
    }
}

fn canon(p: &Process, names: &mut Canonicalizer, tvars: &mut Canonicalizer) -> Process {
    let n = |c: &Canonicalizer, x: &Name| c.lookup(x);
    match p {
        Pr::Send { subject, object, cont } | Pr::Recv { subject, object, cont } => {
            let subject = n(names, subject);
            let object = names.bind(object);
            let cont = Box::new(canon(cont, names, tvars));
            names.unbind(1);
            if matches!(p, Pr::Send { .. }) {
                Pr::Send { subject, object, cont }
            } else {
                Pr::Recv { subject, object, cont }
            }
        }
        Pr::Server { subject, object, body } => {
            let subject = n(names, subject);
            let object = names.bind(object);
            let body = Box::new(canon(body, names, tvars));
            names.unbind(1);
            Pr::Server { subject, object, body }
        }
        Pr::ClientUse { subject, object, cont } => {
            let subject = n(names, subject);
            let object = names.bind(object);
            let cont = Box::new(canon(cont, names, tvars));
            names.unbind(1);
            Pr::ClientUse { subject, object, cont }
        }
        Pr::ClientSpawn { subject, copy, cont } => {
            let subject = n(names, subject);
            let copy = names.bind(copy);
            let cont = Box::new(canon(cont, names, tvars));
            names.unbind(1);
            Pr::ClientSpawn { subject, copy, cont }
        }
        Pr::Res { left, right, body } => {
            let left = names.bind(left);
            let right = names.bind(right);
            let body = Box::new(canon(body, names, tvars));
            names.unbind(2);
            Pr::Res { left, right, body }
        }
        Pr::SelectLeft { subject, right, cont } => Pr::SelectLeft {
            subject: n(names, subject),
            right: tvars.proposition(right),
            cont: Box::new(canon(cont, names, tvars)),
        },
        Pr::SelectRight { subject, left, cont } => Pr::SelectRight {
            subject: n(names, subject),
            left: tvars.proposition(left),
            cont: Box::new(canon(cont, names, tvars)),
        },
        Pr::Case { subject, left, right } => Pr::Case {
            subject: n(names, subject),
            left: Box::new(canon(left, names, tvars)),
            right: Box::new(canon(right, names, tvars)),
        },
        Pr::SendType { subject, witness, var, scheme, cont } => {
            let subject = n(names, subject);
            let witness = tvars.proposition(witness);
            let var2 = tvars.bind(var);
            let scheme = tvars.proposition(scheme);
            tvars.unbind(1);
            Pr::SendType { subject, witness, var: var2, scheme, cont: Box::new(canon(cont, names, tvars)) }
        }
        Pr::RecvType { subject, var, cont } => {
            let subject = n(names, subject);
            let var = tvars.bind(var);
            let cont = Box::new(canon(cont, names, tvars));
            tvars.unbind(1);
            Pr::RecvType { subject, var, cont }
        }
        Pr::Close { subject } => Pr::Close { subject: n(names, subject) },
        Pr::Wait { subject, cont } => {
            Pr::Wait { subject: n(names, subject), cont: Box::new(canon(cont, names, tvars)) }
        }
        Pr::Link { ty, from, to } => Pr::Link { ty: tvars.proposition(ty), from: n(names, from), to: n(names, to) },
        Pr::ClientDispose { subject, ty, cont } => Pr::ClientDispose {
            subject: n(names, subject),
            ty: tvars.proposition(ty),
            cont: Box::new(canon(cont, names, tvars)),
        },
        Pr::Par(a, b) => Process::par(canon(a, names, tvars), canon(b, names, tvars)),
        Pr::Nil => Pr::Nil,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    fn names(ns: &[&str]) -> BTreeSet<Name> {
        ns.iter().map(|n| Name::from(*n)).collect()
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<Name, Name> {
        pairs.iter().map(|(a, b)| (Name::from(*a), Name::from(*b))).collect()
    }

    #[test]
    fn free_name_examples() {
        assert!(Process::Nil.free_names().is_empty());
        assert_eq!(p("x[y].(close y | wait x.0)").free_names(), names(&["x"]));
        assert_eq!(p("link [1] x y").free_names(), names(&["x", "y"]));
        assert_eq!(p("spawn u[u'].dispose [1] u.dispose [1] u'.0").free_names(), names(&["u"]));
        assert_eq!(p("new (a,b){ close a | wait b.close c }").free_names(), names(&["c"]));
    }

    #[test]
    fn rename_examples() {
        assert_eq!(p("close z").rename(&map(&[("z", "x")])), p("close x"));
        assert_eq!(Process::Nil.rename(&map(&[("z", "x")])), Process::Nil);
        let r = p("x(y).close y").rename(&map(&[("x", "y")]));
        assert!(r.alpha_eq(&p("y(y').close y'")));
        assert_eq!(r.free_names(), names(&["y"]));
    }

    #[test]
    fn rename_under_restriction() {
        let r = p("new (a,b){ close a | wait b.close c }").rename(&map(&[("c", "a")]));
        assert_eq!(r.free_names(), names(&["a"]));
        assert!(r.alpha_eq(&p("new (a',b){ close a' | wait b.close a }")));
    }

    #[test]
    fn prime_copy_examples() {
        let (q, m) = p("close z").prime_copy();
        assert_eq!(q, p("close z'"));
        assert_eq!(m, map(&[("z", "z'")]));
        assert_eq!(Process::Nil.prime_copy(), (Process::Nil, BTreeMap::new()));
        let (q, m) = p("?u[v].link [1] v w").prime_copy();
        assert_eq!(q, p("?u'[v].link [1] v w'"));
        assert_eq!(m, map(&[("u", "u'"), ("w", "w'")]));
    }

    #[test]
    fn alpha_examples() {
        assert!(p("x(y).close y").alpha_eq(&p("x(z).close z")));
        assert!(!p("x(y).close y").alpha_eq(&p("x(y).close x")));
        assert!(p("new (a,b){close a | wait b.0}").alpha_eq(&p("new (c,d){close c | wait d.0}")));
        assert!(!p("new (a,b){close a | wait b.0}").alpha_eq(&p("new (b,a){close a | wait b.0}")));
        assert!(p("x(type X).x(w).link [X] w x").alpha_eq(&p("x(type Y).x(w).link [Y] w x")));
    }

    #[test]
    fn canonical_text_reparses() {
        let q = p("new (a,b){ a(c).close c | b[d].(wait d.0 | close b) }");
        let c = q.canonical();
        assert_eq!(parse_process(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn terminated() {
        assert!(Process::Nil.is_terminated());
        assert!(p("0 | (0 | 0)").is_terminated());
        assert!(!p("close x").is_terminated());
        assert!(!p("new (x,y){ 0 }").is_terminated());
    }

    #[test]
    fn type_substitution() {
        let q = p("x[inl: X].dispose [X * ~X] u.close x");
        let r = q.subst_type(&Proposition::One, &Name::from("X"));
        assert_eq!(r, p("x[inl: 1].dispose [1 * bot] u.close x"));
        let bound = p("x(type X).link [X] x y");
        assert_eq!(bound.subst_type(&Proposition::One, &Name::from("X")), bound);
        let capture = p("x(type Y).link [X * Y] x y");
        let r = capture.subst_type(&Proposition::atom("Y"), &Name::from("X"));
        assert!(r.alpha_eq(&p("x(type Z).link [Y * Z] x y")));
    }
}
