use super::error::{TypeError, TypeErrorKind as K};
use super::{Derivation, Judgement, Rule};
use crate::syntax::{Name, Process};
use crate::types::{hs_equal, hs_merge, Hypersequent, Proposition, Sequent};

/// Synthesises the derivation of `p`.
pub fn infer(p: &Process) -> Result<Derivation, TypeError> {
    infer_at(p, &mut Vec::new())
}

/// Synthesises the derivation of `p` and compares its type with `expected`.
pub fn check(p: &Process, expected: &Hypersequent) -> Result<Derivation, TypeError> {
    let d = infer(p)?;
    if hs_equal(d.hypersequent(), expected) {
        Ok(d)
    } else {
        Err(TypeError::at(&[], K::TypeMismatch { expected: expected.clone(), actual: d.hypersequent().clone() }))
    }
}

type R<T> = Result<T, TypeError>;

fn infer_at(p: &Process, path: &mut Vec<usize>) -> R<Derivation> {
    let mut premises = Vec::new();
    for (i, child) in p.children().into_iter().enumerate() {
        path.push(i);
        premises.push(infer_at(child, path)?);
        path.pop();
    }
    let err = |kind: K| TypeError::at(path, kind);
    let rule = Rule::for_process(p);
    let hs = conclude(p, rule, &premises).map_err(err)?;
    Ok(Derivation { rule, premises, conclusion: Judgement { process: p.clone(), hypersequent: hs } })
}

/// The premise of a prefix rule must be a single (possibly empty) sequent.
fn sole_sequent(rule: Rule, hs: &Hypersequent) -> Result<Sequent, K> {
    match hs.sequents() {
        [] => Ok(Sequent::new()),
        [s] => Ok(s.clone()),
        _ => Err(K::AmbientContext { rule, premise: hs.clone() }),
    }
}

fn take(s: &mut Sequent, name: &Name) -> Result<Proposition, K> {
    s.remove(name).ok_or_else(|| K::SubjectMissing(name.clone()))
}

fn fresh_subject(s: &Sequent, name: &Name) -> Result<(), K> {
    if s.contains(name) {
        Err(K::NameClash(name.clone()))
    } else {
        Ok(())
    }
}

fn unexpected(name: &Name, expected: &str, found: Proposition) -> K {
    K::UnexpectedType { name: name.clone(), expected: expected.to_string(), found }
}

fn with_entry(mut s: Sequent, name: &Name, a: Proposition) -> Hypersequent {
    s.insert(name.clone(), a);
    Hypersequent::single(s)
}

fn conclude(p: &Process, rule: Rule, premises: &[Derivation]) -> Result<Hypersequent, K> {
    let premise = |i: usize| premises[i].hypersequent();
    match p {
        Process::Nil => Ok(Hypersequent::empty()),
        Process::Par(..) => Ok(hs_merge(premise(0).clone(), premise(1).clone())?),
        Process::Close { subject } => Ok(with_entry(Sequent::new(), subject, Proposition::One)),
        Process::Link { ty, from, to } => {
            if from == to {
                return Err(K::NameClash(from.clone()));
            }
            let s: Sequent = [(from.clone(), ty.dual()), (to.clone(), ty.clone())].into_iter().collect();
            Ok(Hypersequent::single(s))
        }
        Process::Wait { subject, .. } => {
            let s = sole_sequent(rule, premise(0))?;
            fresh_subject(&s, subject)?;
            Ok(with_entry(s, subject, Proposition::Bot))
        }
        Process::Send { subject, object, .. } => {
            let hs = premise(0);
            let (Some(iy), Some(ix)) = (hs.position(object), hs.position(subject)) else {
                let missing = if hs.position(object).is_none() { object } else { subject };
                return Err(K::SubjectMissing(missing.clone()));
            };
            if iy == ix {
                return Err(K::NotInDistinctSequents(object.clone(), subject.clone()));
            }
            if hs.len() != 2 {
                return Err(K::AmbientContext { rule, premise: hs.clone() });
            }
            let mut gamma = hs.sequents()[iy].clone();
            let mut delta = hs.sequents()[ix].clone();
            let a = take(&mut gamma, object)?;
            let b = take(&mut delta, subject)?;
            let s = gamma.merge(delta)?;
            Ok(with_entry(s, subject, Proposition::tensor(a, b)))
        }
        Process::Recv { subject, object, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let a = take(&mut s, object)?;
            let b = take(&mut s, subject)?;
            Ok(with_entry(s, subject, Proposition::par(a, b)))
        }
        Process::SelectLeft { subject, right, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let a = take(&mut s, subject)?;
            Ok(with_entry(s, subject, Proposition::plus(a, right.clone())))
        }
        Process::SelectRight { subject, left, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let b = take(&mut s, subject)?;
            Ok(with_entry(s, subject, Proposition::plus(left.clone(), b)))
        }
        Process::Case { subject, .. } => {
            let mut l = sole_sequent(rule, premise(0))?;
            let mut r = sole_sequent(rule, premise(1))?;
            let a = take(&mut l, subject)?;
            let b = take(&mut r, subject)?;
            if !l.alpha_eq(&r) {
                return Err(K::BranchMismatch { left: Hypersequent::single(l), right: Hypersequent::single(r) });
            }
            Ok(with_entry(l, subject, Proposition::with(a, b)))
        }
        Process::SendType { subject, witness, var, scheme, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let found = take(&mut s, subject)?;
            let expected = scheme.subst(witness, var);
            if !found.alpha_eq(&expected) {
                return Err(unexpected(subject, &format!("`{expected}`"), found));
            }
            Ok(with_entry(s, subject, Proposition::exists(var.clone(), scheme.clone())))
        }
        Process::RecvType { subject, var, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let b = take(&mut s, subject)?;
            if s.iter().any(|(_, a)| a.has_free_var(var)) {
                return Err(K::EigenvariableEscape { var: var.clone(), context: Hypersequent::single(s) });
            }
            Ok(with_entry(s, subject, Proposition::forall(var.clone(), b)))
        }
        Process::Server { subject, object, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let a = take(&mut s, object)?;
            fresh_subject(&s, subject)?;
            if let Some((name, ty)) = s.iter().find(|(_, ty)| !ty.is_why_not()) {
                return Err(K::NonClientContext { name: name.clone(), ty: ty.clone() });
            }
            Ok(with_entry(s, subject, Proposition::of_course(a)))
        }
        Process::ClientUse { subject, object, .. } => {
            let mut s = sole_sequent(rule, premise(0))?;
            let a = take(&mut s, object)?;
            fresh_subject(&s, subject)?;
            Ok(with_entry(s, subject, Proposition::why_not(a)))
        }
        Process::ClientDispose { subject, ty, .. } => {
            let s = sole_sequent(rule, premise(0))?;
            fresh_subject(&s, subject)?;
            Ok(with_entry(s, subject, Proposition::why_not(ty.clone())))
        }
        Process::ClientSpawn { subject, copy, .. } => {
            // Unlike the other prefix rules, contraction tolerates
            // independent sequents next to the one it acts on.
            let hs = premise(0);
            let (Some(ix), Some(ic)) = (hs.position(subject), hs.position(copy)) else {
                let missing = if hs.position(subject).is_none() { subject } else { copy };
                return Err(K::SubjectMissing(missing.clone()));
            };
            if ix != ic {
                return Err(K::NotInSameSequent(subject.clone(), copy.clone()));
            }
            let mut rest = hs.clone();
            let mut s = rest.take(ix);
            let a = take(&mut s, subject)?;
            let b = take(&mut s, copy)?;
            if !a.is_why_not() {
                return Err(unexpected(subject, "a client type `?A`", a));
            }
            if !b.alpha_eq(&a) {
                return Err(unexpected(copy, &format!("`{a}`"), b));
            }
            s.insert(subject.clone(), a);
            rest.add(s)?;
            Ok(rest)
        }
        Process::Res { left, right, .. } => {
            let hs = premise(0);
            let ix = hs.position(left).ok_or_else(|| K::UnboundName(left.clone()))?;
            let iy = hs.position(right).ok_or_else(|| K::UnboundName(right.clone()))?;
            if ix == iy {
                return Err(K::NotInDistinctSequents(left.clone(), right.clone()));
            }
            let a = hs.lookup(left).expect("present").clone();
            let b = hs.lookup(right).expect("present").clone();
            if !b.alpha_eq(&a.dual()) {
                return Err(K::NotDual { x: left.clone(), a, y: right.clone(), b });
            }
            let mut rest = Hypersequent::empty();
            let mut gamma = Sequent::new();
            let mut delta = Sequent::new();
            for (i, s) in hs.sequents().iter().enumerate() {
                if i == ix {
                    gamma = s.clone();
                } else if i == iy {
                    delta = s.clone();
                } else {
                    rest.add(s.clone())?;
                }
            }
            gamma.remove(left);
            delta.remove(right);
            rest.add(gamma.merge(delta)?)?;
            Ok(rest)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_hypersequent, parse_process};

    fn ty(src: &str) -> Hypersequent {
        infer(&parse_process(src).unwrap()).unwrap().hypersequent().clone()
    }

    fn err(src: &str) -> K {
        infer(&parse_process(src).unwrap()).unwrap_err().kind
    }

    fn hs(src: &str) -> Hypersequent {
        parse_hypersequent(src).unwrap()
    }

    #[test]
    fn leaves() {
        assert_eq!(ty("close x"), hs("x : 1"));
        assert_eq!(ty("0"), Hypersequent::empty());
        assert_eq!(ty("link [X] x y"), hs("x : ~X, y : X"));
    }

    #[test]
    fn one_tensor_bot() {
        assert_eq!(ty("x[y].(close y | wait x.0)"), hs("x : 1 * bot"));
    }

    #[test]
    fn cut_merges_sequents() {
        assert!(ty("new (x,y){ close x | wait y.0 }").is_empty());
        assert_eq!(ty("new (x,y){ close x | wait y.close z }"), hs("z : 1"));
    }

    #[test]
    fn cut_errors() {
        assert!(matches!(err("new (x,y){ x[z].(close z | close x) | wait y.0 }"), K::NotDual { .. }));
        assert!(matches!(err("new (x,y){ close x }"), K::UnboundName(_)));
        assert!(matches!(err("new (x,y){ link [1] x y }"), K::NotInDistinctSequents(..)));
    }

    #[test]
    fn mix_clash() {
        assert_eq!(err("close x | close x"), K::NameClash(Name::from("x")));
    }

    #[test]
    fn ambient_context_rejected() {
        assert!(matches!(err("wait x.(close y | close z)"), K::AmbientContext { .. }));
        assert!(matches!(err("x[y].(close y | close x | close z)"), K::AmbientContext { .. }));
    }

    #[test]
    fn exponentials() {
        assert_eq!(ty("!x(y).close y"), hs("x : !1"));
        assert_eq!(ty("?x[y].wait y.0"), hs("x : ?bot"));
        assert_eq!(ty("dispose [1] x.0"), hs("x : ?1"));
        assert_eq!(ty("spawn x[x'].dispose [1] x.dispose [1] x'.0"), hs("x : ?1"));
        assert!(matches!(err("!x(y).wait u.close y"), K::NonClientContext { .. }));
        assert!(matches!(err("spawn x[x'].dispose [1] x.dispose [bot] x'.0"), K::UnexpectedType { .. }));
    }

    #[test]
    fn contraction_tolerates_ambient_sequents() {
        assert_eq!(ty("spawn x[x'].(dispose [1] x.dispose [1] x'.0 | close z)"), hs("x : ?1 || z : 1"));
    }

    #[test]
    fn additives() {
        assert_eq!(ty("x[inl: bot].close x"), hs("x : 1 + bot"));
        assert_eq!(ty("x[inr: bot].close x"), hs("x : bot + 1"));
        assert_eq!(ty("case x {inl: close x; inr: wait x.0}"), hs("x : 1 & bot"));
        assert!(matches!(err("case x {inl: close x; inr: wait x.close z}"), K::BranchMismatch { .. }));
    }

    #[test]
    fn polymorphism() {
        assert_eq!(ty("x[type 1 as ex X.X par bot].x(y).wait x.close y"), hs("x : ex X.X par bot"));
        assert_eq!(ty("x(type X).x(w).link [X] w x"), hs("x : all X.~X par X"));
        assert!(matches!(err("x[type 1 as ex X.X].wait x.0"), K::UnexpectedType { .. }));
    }

    #[test]
    fn eigenvariable_condition() {
        // `x(type X).link [X] w x` would leave `X` free in `w : ~X`.
        assert!(matches!(err("x(type X).link [X] w x"), K::EigenvariableEscape { .. }));
    }

    #[test]
    fn check_reports_mismatch() {
        let p = parse_process("close x").unwrap();
        assert!(check(&p, &hs("x : 1")).is_ok());
        assert!(check(&parse_process("0").unwrap(), &Hypersequent::empty()).is_ok());
        assert!(matches!(check(&p, &hs("x : bot")).unwrap_err().kind, K::TypeMismatch { .. }));
    }

    #[test]
    fn error_paths_point_at_subterms() {
        let e = infer(&parse_process("close a | wait b.(close c | close d)").unwrap()).unwrap_err();
        assert_eq!(e.path, vec![1]);
    }
}
