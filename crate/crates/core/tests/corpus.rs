mod common;

use ct_core::lts::SosRule;
use ct_core::typing::Rule;

#[test]
fn every_corpus_file_matches_its_expectations() {
    let cases = common::load_corpus();
    assert!(cases.len() >= 25);
    let errors: Vec<String> = cases.iter().filter_map(|c| common::check_case(c).err()).collect();
    assert!(errors.is_empty(), "{}", errors.join("\n"));
}

#[test]
fn corpus_covers_every_rule() {
    let mut typing = std::collections::BTreeSet::new();
    let mut sos = std::collections::BTreeSet::new();
    for case in common::load_corpus() {
        let o = common::check_case(&case).unwrap();
        typing.extend(o.typing_rules);
        sos.extend(o.sos_rules);
    }
    for r in Rule::ALL {
        assert!(typing.contains(&r), "typing rule {} unused", r.name());
    }
    for r in SosRule::ALL {
        assert!(sos.contains(&r), "transition rule {} unused", r.name());
    }
}

#[test]
fn corpus_files_print_and_reparse() {
    for case in common::load_corpus() {
        let text = case.process.to_string();
        let again = ct_core::syntax::parse_process(&text).unwrap();
        assert_eq!(again, case.process, "{}", case.path.display());
    }
}

#[test]
fn cp_terms_infer() {
    for src in common::CP_TERMS {
        let p = ct_core::syntax::parse_process(src).unwrap();
        assert!(ct_core::typing::infer(&p).is_ok(), "{src}");
    }
}

#[test]
fn wrong_expectations_are_rejected() {
    let mut cases = common::load_corpus();
    let mut case = cases.remove(5);
    let extra = case.expect_trans[0].clone();
    case.expect_trans.push(extra);
    assert!(common::check_case(&case).unwrap_err().contains("missing"));
    case.expect_trans.truncate(1);
    assert!(common::check_case(&case).unwrap_err().contains("unexpected"));
    case.expect_type = ct_core::syntax::parse_hypersequent("x : 1, y : bot").unwrap();
    assert!(common::check_case(&case).unwrap_err().contains("expected"));
}
