use clinsum_tree::{
    delete, extract, match_all, match_first, parse_pattern, parse_ptb, SurgeryScript, Tree,
};

const DVT_SENTENCE: &str = "Left lower ext edema : U/S was performed , no evidence of dvt .";
const DVT_TREE: &str = "(TOP (S (S (VP (VBD Left) (NP (JJR lower) (JJ ext) (NN edema)))) \
    (: :) (S (S (NP (NNP U/S)) (VP (VBD was) (VP (VBN performed)))) (, ,) \
    (S (NP (NP (DT no) (NN evidence)) (PP (IN of) (NP (NN dvt)))))) (. .)))";

fn text(t: &Tree) -> String {
    t.yield_tokens().join(" ")
}

#[test]
fn no_rule_on_the_full_dvt_tree() {
    let tree = parse_ptb(DVT_TREE).unwrap();
    assert_eq!(text(&tree), DVT_SENTENCE);
    let b = match_first(&parse_pattern("NP <<, no").unwrap(), &tree).unwrap();
    let np = tree.find(b.root).unwrap();
    assert_eq!(text(np), "no evidence of dvt");
    assert_eq!(
        extract(&tree, b.root).unwrap().to_ptb(),
        "(TOP (NP (NP (DT no) (NN evidence)) (PP (IN of) (NP (NN dvt)))))"
    );
    // No SBAR in this sentence.
    assert!(match_first(&parse_pattern("SBAR=sbar").unwrap(), &tree).is_none());
}

#[test]
fn pruned_fragment_yield() {
    let tree = parse_ptb(DVT_TREE).unwrap();
    let fragment = tree.project_leaves(9..14).unwrap();
    assert_eq!(fragment.yield_tokens(), ["no", "evidence", "of", "dvt", "."]);
}

#[test]
fn forced_sbar_removal() {
    let tree = parse_ptb(
        "(TOP (NP (NP (DT no) (JJ congestive) (NN heart) (NN failure)) \
         (SBAR (WHNP (WDT that)) (S (VP (MD would) (VP (VB explain) (NP (DT the) (NN edema))))))))",
    )
    .unwrap();
    let p = parse_pattern("NP <<, no & << SBAR=sbar").unwrap();
    let b = match_first(&p, &tree).unwrap();
    let out = SurgeryScript::parse("delete sbar").unwrap().apply(&tree, &b).unwrap();
    assert_eq!(
        out.to_ptb(),
        "(TOP (NP (NP (DT no) (JJ congestive) (NN heart) (NN failure))))"
    );
    let sbar = parse_pattern("SBAR=sbar").unwrap();
    assert_eq!(match_all(&sbar, &tree).len(), 1);
    assert!(match_all(&sbar, &out).is_empty());
}

#[test]
fn delete_leaf_keeps_sibling() {
    let tree = parse_ptb("(NP (DT no) (NN X))").unwrap();
    assert_eq!(delete(&tree, 1).unwrap().to_ptb(), "(NP (NN X))");
}

#[test]
fn two_leaves_two_bindings() {
    let tree = parse_ptb("(NP (NN a) (NN b))").unwrap();
    assert_eq!(match_all(&parse_pattern("NN=x").unwrap(), &tree).len(), 2);
    assert!(match_first(&parse_pattern("VP").unwrap(), &tree).is_none());
}

#[test]
fn dev_rule_results() {
    // (fragment tree, pattern, script, printed tree after surgery)
    let cases = [
        (
            "(TOP (NP (NP (JJ negative)) (PP (IN for) (NP (NN infiltration))) (. .)))",
            "PP=head $ /JJ|ADJP|NP/=neg <- NP=target >> TOP=t >> /S|NP/=s",
            "excise s target",
            "(TOP (NN infiltration))",
        ),
        (
            "(TOP (S (NP (NN infection)) (VP (VBZ is) (VP (VBN ruled) (PRT (RP out))))))",
            "VP=vp <<- /free|negative|absent|ruled|out|doubtful|unlikely|excluded|resolved|given/=neg $ NP=head >> TOP=t >> S=s",
            "excise s head",
            "(TOP (NN infection))",
        ),
        (
            "(TOP (S (RB not) (VP (VB exhibit) (NP (NP (DT the) (NN sign)) (PP (IN of) (NP (NN infection))))) (. .)))",
            "VP=head $ RB=neg <<, /VB*|MD/ >> TOP=t >> S=s",
            "excise s head",
            "(TOP (VB exhibit) (NP (NP (DT the) (NN sign)) (PP (IN of) (NP (NN infection)))))",
        ),
        (
            "(TOP (NP (NP (DT no) (JJ significant) (JJ congestive) (NN heart)) (NN failure) (. .)))",
            "NP=target << DT=neg <<, /no|without/ !> NP >> TOP=t",
            "delete neg",
            "(TOP (NP (NP (JJ significant) (JJ congestive) (NN heart)) (NN failure) (. .)))",
        ),
        (
            "(TOP (ADJP (JJ free) (PP (IN of) (NP (NN malignancy))) (. .)))",
            "PP=head <<, IN=neg1 < NP=target >> TOP=t >> /S|NP|ADJP/=s $ /JJ|NP/=neg2",
            "excise s target",
            "(TOP (NN malignancy))",
        ),
        (
            "(TOP (S (RB not) (VP (VB see) (NP (DT the) (NN tumor))) (. .)))",
            "VP=head $ RB=neg <<, /VB*|MD/ >> TOP=t >> S=s",
            "excise s head",
            "(TOP (VB see) (NP (DT the) (NN tumor)))",
        ),
        (
            "(TOP (S (NP (JJ renal) (NN malignancy)) (VP (VBD was) (VP (VBN ruled) (PRT (RP out))))))",
            "VP=vp <<- /free|negative|absent|ruled|out|doubtful|unlikely|excluded|resolved|given/=neg $ NP=head >> TOP=t >> S=s",
            "excise s head",
            "(TOP (JJ renal) (NN malignancy))",
        ),
    ];
    for (tree, pattern, script, expected) in cases {
        let tree = parse_ptb(tree).unwrap();
        let b = match_first(&parse_pattern(pattern).unwrap(), &tree)
            .unwrap_or_else(|| panic!("{pattern} does not match {tree}"));
        let out = SurgeryScript::parse(script).unwrap().apply(&tree, &b).unwrap();
        assert_eq!(out.to_ptb(), expected);
    }
}

#[test]
fn advp_p_rule_misses_the_odd_parse() {
    let tree = parse_ptb("(TOP (S (NP (NP (NN infection)) (RB not)) (VP (VBN seen))))").unwrap();
    let p = parse_pattern("VP=head $ RB=neg <<, /VB*|MD/=be >> TOP=t >> S=s").unwrap();
    assert!(match_first(&p, &tree).is_none());
}
