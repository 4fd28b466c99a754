//! Random well-typed derivations, built bottom-up from a pool.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Name, Process, TypeVar};
use crate::types::Proposition as P;
use crate::typing::{infer, Derivation, Rule};

/// Parameters of [`generate`].
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximal height of the derivation; leaves have height 1.
    pub max_depth: usize,
    /// Number of rule draws.
    pub rounds: usize,
    pub rule_weights: BTreeMap<Rule, u32>,
    pub atom_pool: Vec<TypeVar>,
}

/// Types in generated derivations have at most this depth.
pub const MAX_PROP_DEPTH: usize = 3;
/// A generated sequent holds at most this many client entries.
pub const MAX_CLIENTS: usize = 2;

impl GenConfig {
    pub fn new(seed: u64, max_depth: usize) -> Self {
        let rule_weights = [
            (Rule::Ax, 3),
            (Rule::One, 3),
            (Rule::Mix0, 1),
            (Rule::Mix, 3),
            (Rule::Cut, 7),
            (Rule::Bot, 2),
            (Rule::Tensor, 3),
            (Rule::Parr, 2),
            (Rule::Plus1, 1),
            (Rule::Plus2, 1),
            (Rule::With, 1),
            (Rule::Exists, 1),
            (Rule::Forall, 1),
            (Rule::Bang, 2),
            (Rule::Quest, 2),
            (Rule::Weaken, 2),
            (Rule::Contract, 2),
        ]
        .into_iter()
        .collect();
        GenConfig {
            seed,
            max_depth: max_depth.max(1),
            rounds: 8 * max_depth.max(1),
            rule_weights,
            atom_pool: vec![Name::new("X"), Name::new("Y")],
        }
    }
}

struct Item {
    d: Derivation,
    level: usize,
}

struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    next: usize,
    pool: Vec<Item>,
}

/// A valid derivation, determined by `cfg`.
///
/// The pool starts with leaves (axioms, `close`, `0`). Each round draws a
/// rule by weight and applies it to pool members, which are replaced by
/// the conclusion; draws that do not apply are skipped. Cuts find a
/// partner with a dual type in the pool, or else build one from an
/// η-expanded axiom or a link. The deepest member is returned.
pub fn generate(cfg: &GenConfig) -> Derivation {
    let mut g = Gen { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed), next: 0, pool: Vec::new() };
    let rules: Vec<(Rule, u32)> = cfg.rule_weights.iter().map(|(r, w)| (*r, *w)).filter(|(_, w)| *w > 0).collect();
    assert!(!rules.is_empty(), "rule weights are all zero");
    for _ in 0..2 {
        let leaf = g.leaf(Rule::Ax);
        g.push(leaf);
    }
    for _ in 0..cfg.rounds {
        let rule = rules.choose_weighted(&mut g.rng, |(_, w)| *w).expect("weights").0;
        g.apply(rule);
    }
    let best = g
        .pool
        .iter()
        .enumerate()
        .max_by_key(|(i, item)| (item.level, item.d.size(), std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .expect("pool is never empty");
    g.pool.swap_remove(best).d
}

fn derive(p: Process) -> Option<Derivation> {
    infer(&p).ok()
}

impl Gen<'_> {
    fn fresh(&mut self) -> Name {
        self.next += 1;
        Name::new(format!("x{}", self.next))
    }

    fn push(&mut self, d: Derivation) {
        let level = d.height();
        debug_assert!(level <= self.cfg.max_depth);
        self.pool.push(Item { d, level });
    }

    /// Typing of a candidate conclusion within the height bound.
    fn derive(&self, p: Process) -> Option<Derivation> {
        derive(p).filter(|d| d.height() <= self.cfg.max_depth)
    }

    fn atom(&mut self) -> TypeVar {
        self.cfg.atom_pool.choose(&mut self.rng).cloned().unwrap_or_else(|| Name::new("X"))
    }

    fn prop(&mut self, depth: usize) -> P {
        if depth <= 1 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..6) {
                0 => P::One,
                1 => P::Bot,
                2 => P::Zero,
                3 => P::Top,
                4 => P::Atom(self.atom()),
                _ => P::DualAtom(self.atom()),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 => P::tensor(self.prop(d), self.prop(d)),
            1 => P::par(self.prop(d), self.prop(d)),
            2 => P::plus(self.prop(d), self.prop(d)),
            3 => P::with(self.prop(d), self.prop(d)),
            4 => P::of_course(self.prop(d)),
            5 => P::why_not(self.prop(d)),
            6 => {
                let v = self.atom();
                P::exists(v, self.prop(d))
            }
            _ => {
                let v = self.atom();
                P::forall(v, self.prop(d))
            }
        }
    }

    fn leaf(&mut self, rule: Rule) -> Derivation {
        let p = match rule {
            Rule::One => Process::Close { subject: self.fresh() },
            Rule::Mix0 => Process::Nil,
            _ => {
                let ty = self.prop(MAX_PROP_DEPTH);
                Process::Link { ty, from: self.fresh(), to: self.fresh() }
            }
        };
        derive(p).expect("leaves type")
    }

    /// A random pool member satisfying `ok` that may still be extended.
    fn pick(&mut self, ok: impl Fn(&Derivation) -> bool) -> Option<usize> {
        let max = self.cfg.max_depth;
        let candidates: Vec<usize> =
            (0..self.pool.len()).filter(|&i| self.pool[i].level < max && ok(&self.pool[i].d)).collect();
        candidates.choose(&mut self.rng).copied()
    }

    fn take(&mut self, i: usize) -> Item {
        self.pool.remove(i)
    }

    fn apply(&mut self, rule: Rule) {
        match rule {
            Rule::Ax | Rule::One | Rule::Mix0 => {
                let leaf = self.leaf(rule);
                self.push(leaf);
            }
            Rule::Mix | Rule::Cut => self.binary(rule),
            _ => self.unary(rule),
        }
        if self.pool.is_empty() {
            let leaf = self.leaf(Rule::One);
            self.push(leaf);
        }
    }

    fn unary(&mut self, rule: Rule) {
        let single = |d: &Derivation| d.hypersequent().len() <= 1;
        let Some(i) = (match rule {
            Rule::Tensor => self.pick(|d| d.hypersequent().len() == 2),
            Rule::Parr => self.pick(|d| d.hypersequent().len() == 1 && d.hypersequent().names().len() >= 2),
            Rule::Bot | Rule::Weaken => self.pick(single),
            Rule::Contract => {
                self.pick(|d| d.hypersequent().sequents().iter().any(|s| s.iter().any(|(_, a)| a.is_why_not())))
            }
            _ => self.pick(|d| d.hypersequent().len() == 1),
        }) else {
            return;
        };
        let d = self.pool[i].d.clone();
        if let Some(out) = self.extend(rule, &d) {
            self.take(i);
            self.push(out);
        }
    }

    fn choose_name(&mut self, names: Vec<Name>) -> Option<Name> {
        names.choose(&mut self.rng).cloned()
    }

    fn extend(&mut self, rule: Rule, d: &Derivation) -> Option<Derivation> {
        let hs = d.hypersequent();
        let p = Box::new(d.process().clone());
        let seq = hs.sequents().first().cloned().unwrap_or_default();
        let names: Vec<Name> = seq.names().cloned().collect();
        let clients = |s: &crate::types::Sequent| s.iter().filter(|(_, a)| a.is_why_not()).count();
        let built = match rule {
            Rule::Bot => Process::Wait { subject: self.fresh(), cont: p },
            Rule::Tensor => {
                let (a, b) = if self.rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
                let ys: Vec<Name> = hs.sequents()[a].names().cloned().collect();
                let xs: Vec<Name> = hs.sequents()[b].names().cloned().collect();
                let object = self.choose_name(ys)?;
                let subject = self.choose_name(xs)?;
                Process::Send { subject, object, cont: p }
            }
            Rule::Parr => {
                let mut ns = names;
                ns.shuffle(&mut self.rng);
                Process::Recv { subject: ns[0].clone(), object: ns[1].clone(), cont: p }
            }
            Rule::Plus1 | Rule::Plus2 => {
                let subject = self.choose_name(names)?;
                let a = seq.get(&subject).expect("present");
                let other = self.prop(MAX_PROP_DEPTH - 1);
                if 1 + a.depth().max(other.depth()) > MAX_PROP_DEPTH {
                    return None;
                }
                if rule == Rule::Plus1 {
                    Process::SelectLeft { subject, right: other, cont: p }
                } else {
                    Process::SelectRight { subject, left: other, cont: p }
                }
            }
            Rule::With => {
                let subject = self.choose_name(names)?;
                if seq.get(&subject).expect("present").depth() >= MAX_PROP_DEPTH {
                    return None;
                }
                Process::Case { subject, left: p.clone(), right: p }
            }
            Rule::Exists => {
                let subject = self.choose_name(names)?;
                let a = seq.get(&subject).expect("present").clone();
                if a.depth() >= MAX_PROP_DEPTH {
                    return None;
                }
                let (var, scheme, witness) = self.abstraction(&a);
                Process::SendType { subject, witness, var, scheme, cont: p }
            }
            Rule::Forall => {
                let subject = self.choose_name(names)?;
                let a = seq.get(&subject).expect("present");
                if a.depth() >= MAX_PROP_DEPTH {
                    return None;
                }
                let vars: Vec<TypeVar> = a
                    .free_vars()
                    .into_iter()
                    .filter(|v| seq.iter().all(|(n, b)| *n == subject || !b.has_free_var(v)))
                    .collect();
                let var = self.choose_name(vars)?;
                Process::RecvType { subject, var, cont: p }
            }
            Rule::Bang => {
                let object = self.choose_name(names)?;
                let rest: Vec<&P> = seq.iter().filter(|(n, _)| **n != object).map(|(_, a)| a).collect();
                if rest.len() > MAX_CLIENTS || !rest.iter().all(|a| a.is_why_not()) {
                    return None;
                }
                if seq.get(&object).expect("present").depth() >= MAX_PROP_DEPTH {
                    return None;
                }
                Process::Server { subject: self.fresh(), object, body: p }
            }
            Rule::Quest => {
                let object = self.choose_name(names)?;
                let a = seq.get(&object).expect("present");
                if a.depth() >= MAX_PROP_DEPTH || clients(&seq) - usize::from(a.is_why_not()) >= MAX_CLIENTS {
                    return None;
                }
                Process::ClientUse { subject: self.fresh(), object, cont: p }
            }
            Rule::Weaken => {
                if clients(&seq) >= MAX_CLIENTS {
                    return None;
                }
                let ty = self.prop(MAX_PROP_DEPTH - 1);
                Process::ClientDispose { subject: self.fresh(), ty, cont: p }
            }
            Rule::Contract => return self.contract(d),
            _ => return None,
        };
        self.derive(built)
    }

    /// `spawn x[x'].P` on two equally typed clients of one sequent, or else
    /// on a client and a disposed copy of it.
    fn contract(&mut self, d: &Derivation) -> Option<Derivation> {
        let hs = d.hypersequent();
        let p = d.process().clone();
        let mut pairs = Vec::new();
        for s in hs.sequents() {
            for (x, a) in s.iter().filter(|(_, a)| a.is_why_not()) {
                for (y, b) in s.iter() {
                    if x < y && a.alpha_eq(b) {
                        pairs.push((x.clone(), y.clone()));
                    }
                }
            }
        }
        if let Some((x, y)) = pairs.choose(&mut self.rng).cloned() {
            return self.derive(Process::ClientSpawn { subject: x, copy: y, cont: Box::new(p) });
        }
        if hs.len() != 1 {
            return None;
        }
        let clients: Vec<(Name, P)> = hs.sequents()[0]
            .iter()
            .filter_map(|(n, a)| match a {
                P::WhyNot(inner) => Some((n.clone(), (**inner).clone())),
                _ => None,
            })
            .collect();
        let (x, inner) = clients.choose(&mut self.rng).cloned()?;
        let copy = self.fresh();
        let disposed = Process::ClientDispose { subject: copy.clone(), ty: inner, cont: Box::new(p) };
        self.derive(Process::ClientSpawn { subject: x, copy, cont: Box::new(disposed) })
    }

    /// Splits `a` as `scheme{witness/var}`, abstracting a random subterm
    /// when that is sound and otherwise using a vacuous scheme.
    fn abstraction(&mut self, a: &P) -> (TypeVar, P, P) {
        let mut var = self.atom();
        while a.has_free_var(&var) || bound_in(a, &var) {
            var = var.primed();
        }
        let mut subterms = Vec::new();
        collect_subterms(a, &mut subterms);
        let witness = subterms.choose(&mut self.rng).cloned().unwrap_or(P::One);
        let scheme = abstract_over(a, &witness, &var);
        if scheme.subst(&witness, &var) == *a {
            (var, scheme, witness)
        } else {
            let w = self.prop(2);
            (var, a.clone(), w)
        }
    }

    fn binary(&mut self, rule: Rule) {
        let Some(i) = self.pick(|_| true) else { return };
        let left = self.take(i);
        let result = if rule == Rule::Mix {
            match self.pick(|_| true) {
                Some(j) => {
                    let right = self.take(j);
                    let p = if self.rng.gen_bool(0.5) {
                        Process::par(left.d.process().clone(), right.d.process().clone())
                    } else {
                        Process::par(right.d.process().clone(), left.d.process().clone())
                    };
                    match self.derive(p) {
                        Some(d) => Ok(d),
                        None => Err(vec![left, right]),
                    }
                }
                None => Err(vec![left]),
            }
        } else {
            self.cut(left)
        };
        match result {
            Ok(d) => self.push(d),
            Err(items) => self.pool.extend(items),
        }
    }

    fn cut(&mut self, left: Item) -> Result<Derivation, Vec<Item>> {
        let entries: Vec<(Name, P)> = left
            .d
            .hypersequent()
            .sequents()
            .iter()
            .flat_map(|s| s.iter().map(|(n, a)| (n.clone(), a.clone())))
            .collect();
        let Some((x, a)) = entries.choose(&mut self.rng).cloned() else {
            return Err(vec![left]);
        };
        let want = a.dual();
        let partners: Vec<(usize, Name)> = self
            .pool
            .iter()
            .enumerate()
            .filter(|(_, it)| it.level < self.cfg.max_depth)
            .flat_map(|(j, it)| {
                it.d.hypersequent()
                    .sequents()
                    .iter()
                    .flat_map(|s| s.iter())
                    .filter(|(_, b)| b.alpha_eq(&want))
                    .map(|(n, _)| (j, n.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut taken = None;
        let (partner, y) = match partners.choose(&mut self.rng).cloned() {
            Some((j, y)) if self.rng.gen_bool(0.6) => {
                let it = self.take(j);
                let found = (it.d.process().clone(), y);
                taken = Some(it);
                found
            }
            _ => {
                let y = self.fresh();
                let z = self.fresh();
                let partner = if self.rng.gen_bool(0.7) {
                    self.eta(&a, &y, &z)
                } else {
                    Process::Link { ty: a.clone(), from: y.clone(), to: z }
                };
                (partner, y)
            }
        };
        let body = if self.rng.gen_bool(0.5) {
            Process::par(left.d.process().clone(), partner)
        } else {
            Process::par(partner, left.d.process().clone())
        };
        let p = if self.rng.gen_bool(0.5) { Process::res(x, y, body) } else { Process::res(y, x, body) };
        match self.derive(p) {
            Some(d) => Ok(d),
            None => Err(std::iter::once(left).chain(taken).collect()),
        }
    }

    /// The η-expanded axiom: a process of type `x : ~A, y : A` built from
    /// prefixes, down to links on atoms and units without rules.
    fn eta(&mut self, a: &P, x: &Name, y: &Name) -> Process {
        let (x, y) = (x.clone(), y.clone());
        match a {
            P::One => Process::Wait { subject: x, cont: Box::new(Process::Close { subject: y }) },
            P::Bot => Process::Wait { subject: y, cont: Box::new(Process::Close { subject: x }) },
            P::Tensor(b, c) => {
                let (x2, y2) = (self.fresh(), self.fresh());
                let inner = Process::par(self.eta(b, &x2, &y2), self.eta(c, &x, &y));
                Process::Recv {
                    subject: x.clone(),
                    object: x2,
                    cont: Box::new(Process::Send { subject: y, object: y2, cont: Box::new(inner) }),
                }
            }
            P::Par(b, c) => {
                let (x2, y2) = (self.fresh(), self.fresh());
                let inner = Process::par(self.eta(b, &x2, &y2), self.eta(c, &x, &y));
                Process::Recv {
                    subject: y.clone(),
                    object: y2,
                    cont: Box::new(Process::Send { subject: x, object: x2, cont: Box::new(inner) }),
                }
            }
            P::Plus(b, c) => Process::Case {
                subject: x.clone(),
                left: Box::new(Process::SelectLeft {
                    subject: y.clone(),
                    right: (**c).clone(),
                    cont: Box::new(self.eta(b, &x, &y)),
                }),
                right: Box::new(Process::SelectRight {
                    subject: y.clone(),
                    left: (**b).clone(),
                    cont: Box::new(self.eta(c, &x, &y)),
                }),
            },
            P::With(b, c) => Process::Case {
                subject: y.clone(),
                left: Box::new(Process::SelectLeft {
                    subject: x.clone(),
                    right: c.dual(),
                    cont: Box::new(self.eta(b, &x, &y)),
                }),
                right: Box::new(Process::SelectRight {
                    subject: x.clone(),
                    left: b.dual(),
                    cont: Box::new(self.eta(c, &x, &y)),
                }),
            },
            P::OfCourse(b) => {
                let (x2, y2) = (self.fresh(), self.fresh());
                Process::Server {
                    subject: y,
                    object: y2.clone(),
                    body: Box::new(Process::ClientUse {
                        subject: x,
                        object: x2.clone(),
                        cont: Box::new(self.eta(b, &x2, &y2)),
                    }),
                }
            }
            P::WhyNot(b) => {
                let (x2, y2) = (self.fresh(), self.fresh());
                Process::Server {
                    subject: x,
                    object: x2.clone(),
                    body: Box::new(Process::ClientUse {
                        subject: y,
                        object: y2.clone(),
                        cont: Box::new(self.eta(b, &x2, &y2)),
                    }),
                }
            }
            P::Exists(v, b) => Process::RecvType {
                subject: x.clone(),
                var: v.clone(),
                cont: Box::new(Process::SendType {
                    subject: y.clone(),
                    witness: P::Atom(v.clone()),
                    var: v.clone(),
                    scheme: (**b).clone(),
                    cont: Box::new(self.eta(b, &x, &y)),
                }),
            },
            P::Forall(v, b) => Process::RecvType {
                subject: y.clone(),
                var: v.clone(),
                cont: Box::new(Process::SendType {
                    subject: x.clone(),
                    witness: P::Atom(v.clone()),
                    var: v.clone(),
                    scheme: b.dual(),
                    cont: Box::new(self.eta(b, &x, &y)),
                }),
            },
            P::Zero | P::Top | P::Atom(_) | P::DualAtom(_) => Process::Link { ty: a.clone(), from: x, to: y },
        }
    }
}

fn bound_in(a: &P, var: &TypeVar) -> bool {
    match a {
        P::Exists(v, b) | P::Forall(v, b) => v == var || bound_in(b, var),
        P::Tensor(b, c) | P::Par(b, c) | P::Plus(b, c) | P::With(b, c) => bound_in(b, var) || bound_in(c, var),
        P::OfCourse(b) | P::WhyNot(b) => bound_in(b, var),
        _ => false,
    }
}

fn collect_subterms(a: &P, out: &mut Vec<P>) {
    out.push(a.clone());
    match a {
        P::Tensor(b, c) | P::Par(b, c) | P::Plus(b, c) | P::With(b, c) => {
            collect_subterms(b, out);
            collect_subterms(c, out);
        }
        P::OfCourse(b) | P::WhyNot(b) => collect_subterms(b, out),
        _ => {}
    }
}

/// Replaces occurrences of `w` by `var` and of its dual by `~var`.
fn abstract_over(a: &P, w: &P, var: &TypeVar) -> P {
    if a == w {
        return P::Atom(var.clone());
    }
    if *a == w.dual() {
        return P::DualAtom(var.clone());
    }
    let r = |b: &P| abstract_over(b, w, var);
    match a {
        P::Tensor(b, c) => P::tensor(r(b), r(c)),
        P::Par(b, c) => P::par(r(b), r(c)),
        P::Plus(b, c) => P::plus(r(b), r(c)),
        P::With(b, c) => P::with(r(b), r(c)),
        P::OfCourse(b) => P::of_course(r(b)),
        P::WhyNot(b) => P::why_not(r(b)),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::validate;

    #[test]
    fn depth_one_gives_a_leaf() {
        for seed in 0..20 {
            let d = generate(&GenConfig::new(seed, 1));
            assert!(matches!(d.rule, Rule::Ax | Rule::One | Rule::Mix0), "{}", d.process());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for seed in 0..20 {
            let a = generate(&GenConfig::new(seed, 6));
            let b = generate(&GenConfig::new(seed, 6));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn generated_derivations_validate() {
        for seed in 0..300 {
            let d = generate(&GenConfig::new(seed, 6));
            let v = validate(&d);
            assert!(v.ok, "seed {seed}: {:?}", v.diagnostics);
        }
    }

    #[test]
    fn eta_expansions_type_as_axioms() {
        let cfg = GenConfig::new(7, 4);
        let mut g = Gen { cfg: &cfg, rng: ChaCha8Rng::seed_from_u64(7), next: 0, pool: vec![] };
        for _ in 0..200 {
            let a = g.prop(MAX_PROP_DEPTH);
            let (x, y) = (Name::new("a"), Name::new("b"));
            let p = g.eta(&a, &x, &y);
            let d = infer(&p).unwrap_or_else(|e| panic!("{a}: {p}: {e}"));
            let s = &d.hypersequent().sequents()[0];
            assert!(s.get(&x).unwrap().alpha_eq(&a.dual()));
            assert!(s.get(&y).unwrap().alpha_eq(&a));
        }
    }

    #[test]
    fn every_rule_is_generated() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..500 {
            seen.extend(generate(&GenConfig::new(seed, 6)).rules());
        }
        for r in Rule::ALL {
            assert!(seen.contains(&r), "{r} never generated");
        }
    }
}
