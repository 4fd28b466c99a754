//! An independent checker for derivations. Where `infer` computes a
//! conclusion from its premises, this module decomposes each conclusion and
//! compares the result with the recorded premises.

use super::{Derivation, Rule};
use crate::syntax::{Name, Process};
use crate::types::{hs_equal, Hypersequent, Proposition as P, Sequent};

/// Outcome of [`validate`]: `ok` iff `diagnostics` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Re-checks every node of `d` against its rule schema.
pub fn validate(d: &Derivation) -> Validation {
    let mut diagnostics = Vec::new();
    walk(d, &mut Vec::new(), &mut diagnostics);
    Validation { ok: diagnostics.is_empty(), diagnostics }
}

fn walk(d: &Derivation, path: &mut Vec<usize>, out: &mut Vec<String>) {
    let mut report = |msg: String| {
        let at: Vec<String> = path.iter().map(usize::to_string).collect();
        out.push(format!("[{}] {}: {msg}", at.join("."), d.rule));
    };
    let p = d.process();
    if Rule::for_process(p) != d.rule {
        report(format!("rule does not match the process `{p}`"));
    }
    let children = p.children();
    if children.len() != d.premises.len() {
        report(format!("expected {} premises", children.len()));
    } else {
        for (c, prem) in children.iter().zip(&d.premises) {
            if *c != prem.process() {
                report(format!("premise `{}` is not the subterm `{c}`", prem.process()));
            }
        }
        let names = d.hypersequent().names();
        if p.free_names() != names {
            report("free names and typed names differ".to_string());
        }
        if let Err(msg) = local(d) {
            report(msg);
        }
    }
    for (i, prem) in d.premises.iter().enumerate() {
        path.push(i);
        walk(prem, path, out);
        path.pop();
    }
}

fn sole(hs: &Hypersequent) -> Result<Sequent, String> {
    match hs.sequents() {
        [] => Ok(Sequent::new()),
        [s] => Ok(s.clone()),
        _ => Err(format!("`{hs}` is not a single sequent")),
    }
}

/// Splits `x : A` off a single-sequent conclusion.
fn subject(hs: &Hypersequent, x: &Name) -> Result<(Sequent, P), String> {
    let mut s = sole(hs)?;
    let a = s.remove(x).ok_or_else(|| format!("conclusion does not type `{x}`"))?;
    Ok((s, a))
}

fn same(expected: Hypersequent, found: &Hypersequent) -> Result<(), String> {
    if hs_equal(&expected, found) {
        Ok(())
    } else {
        Err(format!("premise should be `{expected}`, found `{found}`"))
    }
}

fn plus(mut s: Sequent, entries: &[(&Name, P)]) -> Result<Hypersequent, String> {
    for (n, a) in entries {
        if s.insert((*n).clone(), a.clone()).is_some() {
            return Err(format!("`{n}` would occur twice"));
        }
    }
    Ok(Hypersequent::single(s))
}

fn local(d: &Derivation) -> Result<(), String> {
    let concl = d.hypersequent();
    let prem = |i: usize| d.premises[i].hypersequent();
    let bad = |what: &str, a: &P| Err(format!("expected {what}, found `{a}`"));
    match d.process() {
        Process::Nil => {
            if concl.is_empty() {
                Ok(())
            } else {
                Err("Mix0 concludes the empty hypersequent".into())
            }
        }
        Process::Par(..) => {
            let mut merged = prem(0).clone();
            for s in prem(1).sequents() {
                merged.add(s.clone()).map_err(|e| e.to_string())?;
            }
            same(merged, concl)
        }
        Process::Close { subject: x } => {
            let (rest, a) = subject(concl, x)?;
            if a != P::One || !rest.is_empty() {
                return Err(format!("expected `{x} : 1`, found `{concl}`"));
            }
            Ok(())
        }
        Process::Link { ty, from, to } => {
            let mut s = sole(concl)?;
            let a = s.remove(from);
            let b = s.remove(to);
            if from == to || !s.is_empty() || a != Some(ty.dual()) || b != Some(ty.clone()) {
                return Err(format!("`{concl}` is not an axiom on `{ty}`"));
            }
            Ok(())
        }
        Process::Wait { subject: x, .. } => {
            let (rest, a) = subject(concl, x)?;
            if a != P::Bot {
                return bad("`bot`", &a);
            }
            same(Hypersequent::single(rest), prem(0))
        }
        Process::Send { subject: x, object: y, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::Tensor(a, b) = a else { return bad("a tensor", &a) };
            let [s1, s2] = prem(0).sequents() else {
                return Err(format!("premise `{}` must have two sequents", prem(0)));
            };
            let (mut gy, mut gx) = if s1.contains(y) { (s1.clone(), s2.clone()) } else { (s2.clone(), s1.clone()) };
            if gy.remove(y).as_ref() != Some(&a) || gx.remove(x).as_ref() != Some(&b) {
                return Err(format!("premise `{}` does not split `{x} : {a} * {b}`", prem(0)));
            }
            let union = gy.merge(gx).map_err(|e| e.to_string())?;
            same(Hypersequent::single(rest), &Hypersequent::single(union))
        }
        Process::Recv { subject: x, object: y, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::Par(a, b) = a else { return bad("a par", &a) };
            same(plus(rest, &[(y, *a), (x, *b)])?, prem(0))
        }
        Process::SelectLeft { subject: x, right, .. } => {
            let (rest, a) = subject(concl, x)?;
            match a {
                P::Plus(a, b) if *b == *right => same(plus(rest, &[(x, *a)])?, prem(0)),
                a => bad("a plus with the annotated right branch", &a),
            }
        }
        Process::SelectRight { subject: x, left, .. } => {
            let (rest, a) = subject(concl, x)?;
            match a {
                P::Plus(a, b) if *a == *left => same(plus(rest, &[(x, *b)])?, prem(0)),
                a => bad("a plus with the annotated left branch", &a),
            }
        }
        Process::Case { subject: x, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::With(a, b) = a else { return bad("a with", &a) };
            same(plus(rest.clone(), &[(x, *a)])?, prem(0))?;
            same(plus(rest, &[(x, *b)])?, prem(1))
        }
        Process::SendType { subject: x, witness, var, scheme, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::Exists(v, body) = &a else { return bad("an existential", &a) };
            if v != var || **body != *scheme {
                return bad(&format!("`ex {var}.{scheme}`"), &a);
            }
            same(plus(rest, &[(x, scheme.subst(witness, var))])?, prem(0))
        }
        Process::RecvType { subject: x, var, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::Forall(v, body) = a else { return bad("a universal", &a) };
            if v != *var {
                return Err(format!("bound variable should be `{var}`"));
            }
            if rest.iter().any(|(_, c)| c.free_vars().contains(var)) {
                return Err(format!("`{var}` is free in the context"));
            }
            same(plus(rest, &[(x, *body)])?, prem(0))
        }
        Process::Server { subject: x, object: y, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::OfCourse(a) = a else { return bad("a server type", &a) };
            if let Some((n, _)) = rest.iter().find(|(_, c)| !matches!(c, P::WhyNot(_))) {
                return Err(format!("context entry `{n}` is not a client"));
            }
            same(plus(rest, &[(y, *a)])?, prem(0))
        }
        Process::ClientUse { subject: x, object: y, .. } => {
            let (rest, a) = subject(concl, x)?;
            let P::WhyNot(a) = a else { return bad("a client type", &a) };
            same(plus(rest, &[(y, *a)])?, prem(0))
        }
        Process::ClientDispose { subject: x, ty, .. } => {
            let (rest, a) = subject(concl, x)?;
            if a != P::why_not(ty.clone()) {
                return bad(&format!("`?{ty}`"), &a);
            }
            same(Hypersequent::single(rest), prem(0))
        }
        Process::ClientSpawn { subject: x, copy: x2, .. } => {
            let i = concl.position(x).ok_or_else(|| format!("conclusion does not type `{x}`"))?;
            let a = concl.lookup(x).cloned().expect("present");
            if !matches!(a, P::WhyNot(_)) {
                return bad("a client type", &a);
            }
            let mut expected = Hypersequent::empty();
            for (j, s) in concl.sequents().iter().enumerate() {
                let s = if i == j { plus(s.clone(), &[(x2, a.clone())])?.into_sequents().remove(0) } else { s.clone() };
                expected.add(s).map_err(|e| e.to_string())?;
            }
            same(expected, prem(0))
        }
        Process::Res { left: x, right: y, .. } => {
            let premise = prem(0);
            let (Some(ix), Some(iy)) = (premise.position(x), premise.position(y)) else {
                return Err("premise does not type both restricted names".into());
            };
            if ix == iy {
                return Err("restricted names share a sequent".into());
            }
            let a = premise.lookup(x).expect("present");
            let b = premise.lookup(y).expect("present");
            if !a.dual().alpha_eq(b) {
                return Err(format!("`{a}` and `{b}` are not dual"));
            }
            let mut expected = Hypersequent::empty();
            let mut joined = Sequent::new();
            for (j, s) in premise.sequents().iter().enumerate() {
                if j == ix || j == iy {
                    for (n, c) in s.iter() {
                        if n != x && n != y {
                            joined.insert(n.clone(), c.clone());
                        }
                    }
                } else {
                    expected.add(s.clone()).map_err(|e| e.to_string())?;
                }
            }
            expected.add(joined).map_err(|e| e.to_string())?;
            if hs_equal(&expected, concl) {
                Ok(())
            } else {
                Err(format!("cut should conclude `{expected}`, found `{concl}`"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;
    use crate::typing::{infer, Judgement};

    fn derive(src: &str) -> Derivation {
        infer(&parse_process(src).unwrap()).unwrap()
    }

    #[test]
    fn inferred_derivations_validate() {
        for src in [
            "x[y].(close y | wait x.0)",
            "new (x,y){ close x | wait y.0 }",
            "!x(y).close y",
            "spawn u[u'].(dispose [1] u.dispose [1] u'.0 | close z)",
            "case x {inl: close x; inr: close x}",
            "x[type 1 as ex X.X].close x",
        ] {
            let v = validate(&derive(src));
            assert!(v.ok, "{src}: {:?}", v.diagnostics);
        }
    }

    #[test]
    fn hand_built_server() {
        let body = Derivation {
            rule: Rule::One,
            premises: vec![],
            conclusion: Judgement {
                process: parse_process("close y").unwrap(),
                hypersequent: "y : 1".parse().unwrap(),
            },
        };
        let d = Derivation {
            rule: Rule::Bang,
            premises: vec![body],
            conclusion: Judgement {
                process: parse_process("!x(y).close y").unwrap(),
                hypersequent: "x : !1".parse().unwrap(),
            },
        };
        assert!(validate(&d).ok);
    }

    #[test]
    fn perturbed_premise_is_caught() {
        let mut d = derive("wait x.close y");
        d.premises[0].conclusion.hypersequent = "y : bot".parse().unwrap();
        let v = validate(&d);
        assert!(!v.ok);
        assert!(!v.diagnostics.is_empty());
    }

    #[test]
    fn wrong_rule_is_caught() {
        let mut d = derive("close x");
        d.rule = Rule::Bot;
        assert!(!validate(&d).ok);
    }
}
