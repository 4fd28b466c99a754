use super::*;
use crate::syntax::parse_process;
use crate::types::hs_equal;

fn state(src: &str) -> State {
    infer(&parse_process(src).unwrap()).unwrap()
}

fn trans(src: &str) -> Vec<(String, String)> {
    transitions(&state(src))
        .unwrap()
        .into_iter()
        .map(|t| (t.label.to_string(), t.target.process().to_string()))
        .collect()
}

fn assert_trans(src: &str, expected: &[(&str, &str)]) {
    let got = trans(src);
    let want: Vec<(String, String)> = expected.iter().map(|(l, p)| (l.to_string(), p.to_string())).collect();
    assert_eq!(got.len(), want.len(), "{src}: {got:?}");
    for ((gl, gp), (wl, wp)) in got.iter().zip(&want) {
        assert!(gl.parse::<Label>().unwrap().matches(&wl.parse().unwrap()), "{src}: label {gl} vs {wl}");
        assert!(parse_process(gp).unwrap().alpha_eq(&parse_process(wp).unwrap()), "{src}: target {gp} vs {wp}");
    }
}

fn single_tau(src: &str) -> Transition {
    let ts = transitions(&state(src)).unwrap();
    let taus: Vec<Transition> = ts.into_iter().filter(|t| t.label == Label::Tau).collect();
    assert_eq!(taus.len(), 1, "{src}");
    taus.into_iter().next().unwrap()
}

#[test]
fn prefix_axioms() {
    assert_trans("close x", &[("x[]", "0")]);
    assert_trans("0", &[]);
    assert_trans("wait x.close y", &[("x()", "close y")]);
    assert_trans("x(y).wait y.close x", &[("x(y:bot;1)", "wait y.close x")]);
    assert_trans("x[y].(close y | close x)", &[("x[y:1;1]", "close y | close x")]);
    assert_trans("x[inl: bot].close x", &[("x[inl:1 + bot]", "close x")]);
    assert_trans("x[inr: 1].wait x.0", &[("x[inr:1 + bot]", "wait x.0")]);
    assert_trans("link [1] x y", &[("x<->y:1", "0")]);
    assert_trans("dispose [1] x.0", &[("?x[-:1]", "0")]);
    assert_trans("?x[y].close y", &[("?x[y:1]", "close y")]);
}

#[test]
fn case_offers_both_branches() {
    assert_trans(
        "case x {inl: close x; inr: wait x.0}",
        &[("x(inl:1 & bot)", "close x"), ("x(inr:1 & bot)", "wait x.0")],
    );
}

#[test]
fn server_axioms() {
    let got = trans("!x(y).close y");
    assert_eq!(got[0], ("!x(y:1)".to_string(), "close y".to_string()));
    assert_eq!(got[1], ("!x(-:1)".to_string(), "0".to_string()));
    assert_eq!(got[2], ("!x(+x':1)".to_string(), "!x(y).close y | !x'(y).close y".to_string()));
    assert_eq!(got.len(), 3);
}

#[test]
fn spawn_copies_the_context() {
    let ts = transitions(&state("!x(y).?z[w].link [bot] w y")).unwrap();
    let t = ts.iter().find(|t| matches!(t.label, Label::SpawnAcc { .. })).unwrap();
    assert_eq!(t.target.process().to_string(), "!x(y).?z[w].link [bot] w y | !x'(y).?z'[w].link [bot] w y");
    let map = t.spawn_map.as_ref().unwrap();
    assert_eq!(map.get(&Name::from("z")), Some(&Name::from("z'")));
    assert_eq!(map.get(&Name::from("x")), Some(&Name::from("x'")));
}

#[test]
fn close_wait_cut() {
    assert_trans("new (x,y){ close x | wait y.0 }", &[("tau", "0 | 0")]);
    let t = single_tau("new (x,y){ close x | wait y.0 }");
    assert_eq!(t.rules, vec![SosRule::Axiom, SosRule::Axiom, SosRule::Syn, SosRule::CutOne]);
    assert!(t.target.hypersequent().is_empty());
}

#[test]
fn par_and_syn_at_top_level() {
    assert_trans("close x | wait y.0", &[("x[]", "0 | wait y.0"), ("y()", "close x | 0"), ("<x[],y()>", "0 | 0")]);
}

#[test]
fn tensor_cut_rebuilds_two_restrictions() {
    let t = single_tau("new (x,y){ x[a].(close a | close x) | y(b).wait b.wait y.0 }");
    let want = parse_process("new (x,y){ new (a,b){ (close a | close x) | wait b.wait y.0 } }").unwrap();
    assert!(t.target.process().alpha_eq(&want), "{}", t.target.process());
    assert!(t.rules.contains(&SosRule::CutTensor));
}

#[test]
fn choice_cuts() {
    let t = single_tau("new (x,y){ x[inl: bot].close x | case y {inl: wait y.0; inr: close y} }");
    assert_eq!(t.target.process().to_string(), "new (x,y){ close x | wait y.0 }");
    assert!(t.rules.contains(&SosRule::CutPlus1));
    let t = single_tau("new (x,y){ x[inr: 1].wait x.0 | case y {inl: wait y.0; inr: close y} }");
    assert_eq!(t.target.process().to_string(), "new (x,y){ wait x.0 | close y }");
    assert!(t.rules.contains(&SosRule::CutPlus2));
}

#[test]
fn link_cuts() {
    let t = single_tau("new (y,z){ link [1] x y | wait z.0 }");
    assert_eq!(t.target.process().to_string(), "0 | wait x.0");
    assert_eq!(t.rules.last(), Some(&SosRule::Ax1));
    let t = single_tau("new (w,x){ close w | link [1] x y }");
    assert_eq!(t.target.process().to_string(), "close y | 0");
    assert_eq!(t.rules.last(), Some(&SosRule::Ax2));
    let t = single_tau("new (z,y){ wait z.0 | link [1] x y }");
    assert_eq!(t.target.process().to_string(), "wait x.0 | 0");
}

#[test]
fn use_cut() {
    let t = single_tau("new (x,y){ !x(a).close a | ?y[b].wait b.0 }");
    assert_eq!(t.target.process().to_string(), "new (a,b){ close a | wait b.0 }");
    assert_eq!(t.rules.last(), Some(&SosRule::CutBang));
}

#[test]
fn dispose_cut_disposes_the_server_clients() {
    let src = "new (x,y){ !x(a).?z[c].link [bot] c a | dispose [1] y.0 }";
    let t = single_tau(src);
    assert_eq!(t.target.process().to_string(), "dispose [1] z.(0 | 0)");
    assert_eq!(t.rules.last(), Some(&SosRule::CutWeaken));
    assert!(hs_equal(t.source.hypersequent(), t.target.hypersequent()));
}

#[test]
fn dispose_cut_with_an_ambient_component() {
    let src = "new (x,y){ !x(a).?z[c].link [bot] c a | (dispose [1] y.close u | close v) }";
    let t = single_tau(src);
    assert_eq!(t.target.process().to_string(), "0 | (dispose [1] z.close u | close v)");
    assert!(hs_equal(t.source.hypersequent(), t.target.hypersequent()));
}

#[test]
fn spawn_cut_contracts_the_copies() {
    let src = "new (x,y){ !x(a).?z[c].link [bot] c a | spawn y[y'].dispose [1] y.dispose [1] y'.0 }";
    let t = single_tau(src);
    let want = parse_process(
        "spawn z[z'].new (x,y){ new (x',y'){ \
         (!x(a).?z[c].link [bot] c a | !x'(a).?z'[c].link [bot] c a) \
         | dispose [1] y.dispose [1] y'.0 } }",
    )
    .unwrap();
    assert!(t.target.process().alpha_eq(&want), "{}", t.target.process());
    assert_eq!(t.rules.last(), Some(&SosRule::CutContract));
    assert!(hs_equal(t.source.hypersequent(), t.target.hypersequent()));
}

#[test]
fn type_communication() {
    let src = "new (x,y){ x[type 1 as ex X.1].close x | y(type Y).wait y.0 }";
    let t = single_tau(src);
    assert_eq!(t.target.process().to_string(), "new (x,y){ close x | wait y.0 }");
    assert_eq!(t.rules.last(), Some(&SosRule::CutExists));
}

#[test]
fn type_inputs_are_not_listed_alone() {
    let s = state("x(type X).x(w).link [X] w x");
    assert!(transitions(&s).unwrap().is_empty());
    assert_eq!(type_inputs(&s), vec![(Name::from("x"), Name::from("X"))]);
    let t = recv_type_step(&s, &Name::from("x"), &Proposition::One).unwrap();
    assert_eq!(t.target.process().to_string(), "x(w).link [1] w x");
    assert_eq!(t.label.to_string(), "x(type 1)");
    let err = recv_type_step(&state("close x"), &Name::from("x"), &Proposition::One).unwrap_err();
    assert!(matches!(err, LtsError::NoSuchTransition { .. }));
}

#[test]
fn type_input_under_parallel() {
    let s = state("x(type X).x(w).link [X] w x | close z");
    let t = recv_type_step(&s, &Name::from("x"), &Proposition::Bot).unwrap();
    assert_eq!(t.target.process().to_string(), "x(w).link [bot] w x | close z");
}

#[test]
fn step_examples() {
    let s = step(&state("wait x.0"), &Label::Wait(Name::from("x"))).unwrap();
    assert_eq!(s.process().to_string(), "0");
    assert!(matches!(step(&state("0"), &Label::Tau), Err(LtsError::NoSuchTransition { .. })));
    let l: Label = "x(inl:1 & bot)".parse().unwrap();
    let s = step(&state("case x {inl: close x; inr: wait x.0}"), &l).unwrap();
    assert_eq!(s.process().to_string(), "close x");
}

#[test]
fn restriction_blocks_unpaired_actions() {
    assert_trans("new (x,y){ close x | wait y.close z }", &[("tau", "0 | close z")]);
    assert_trans("new (x,y){ wait z.close x | wait y.0 }", &[("z()", "new (x,y){ close x | wait y.0 }")]);
}

#[test]
fn binders_are_freshened_against_free_names() {
    // The object `z` of the output would clash with the free `z` on the right.
    let ts = transitions(&state("x[z].(close z | close x) | close z")).unwrap();
    let l = &ts[0].label;
    assert_eq!(l.to_string(), "x[z':1;1]");
    assert_eq!(ts[0].target.process().to_string(), "close z' | close x | close z");
}

#[test]
fn label_bound_names_avoid_the_other_side() {
    for src in [
        "x[z].(close z | close x) | close z",
        "new (a,b){ a[z].(close z | close a) | b(z).wait z.wait b.0 }",
        "x(y).wait y.wait x.0 | close y",
    ] {
        for t in transitions(&state(src)).unwrap() {
            if let Process::Par(l, r) = t.source.process() {
                if t.rules.last() == Some(&SosRule::Par1) {
                    assert!(t.label.bound_names().is_disjoint(&r.free_names()));
                }
                if t.rules.last() == Some(&SosRule::Par2) {
                    assert!(t.label.bound_names().is_disjoint(&l.free_names()));
                }
            }
        }
    }
}

#[test]
fn syn_separates_clashing_binders() {
    let t = single_tau("new (a,b){ a[z].(close z | close a) | b(z).wait z.wait b.0 }");
    let want = parse_process("new (a,b){ new (z,z'){ (close z | close a) | wait z'.wait b.0 } }").unwrap();
    assert!(t.target.process().alpha_eq(&want), "{}", t.target.process());
}

#[test]
fn subject_reduction_on_examples() {
    for src in [
        "new (x,y){ close x | wait y.0 }",
        "wait x.0",
        "new (x,y){ x[a].(close a | close x) | y(b).wait b.wait y.0 }",
        "new (x,y){ !x(a).?z[c].link [bot] c a | spawn y[y'].dispose [1] y.dispose [1] y'.0 }",
        "!x(y).close y",
    ] {
        let s = state(src);
        for t in transitions(&s).unwrap() {
            let same = hs_equal(s.hypersequent(), t.target.hypersequent());
            assert_eq!(t.label == Label::Tau, same, "{src} --{}-->", t.label);
        }
    }
}

use crate::syntax::Process;
