use clinsum_core::{data, format_trace, sentence_lines, TreebankProvider, UNMATCHED};
use clinsum_tree::{CharSpan, Treebank};

const SENTENCES: &str = include_str!("fixtures/dev_sentences.txt");
const TREES: &str = include_str!("fixtures/dev_trees.txt");

fn provider() -> TreebankProvider {
    TreebankProvider::new(Treebank::parse(TREES).unwrap())
}

#[test]
fn spans_and_extracted_trees() {
    let detector = data::detector();
    let p = provider();
    let expected = [
        ((29, 40), "infiltration", "(TOP (NN infiltration))"),
        ((1, 9), "infection", "(TOP (NN infection))"),
        (
            (21, 49),
            "exhibit the sign of infection",
            "(TOP (VB exhibit) (NP (NP (DT the) (NN sign)) (PP (IN of) (NP (NN infection)))))",
        ),
        ((1, 18), "infection not seen", "(TOP (S (NP (NP (NN infection)) (RB not)) (VP (VBN seen))))"),
        (
            (13, 50),
            "significant congestive heart failure .",
            "(TOP (NP (NP (JJ significant) (JJ congestive) (NN heart)) (NN failure) (. .)))",
        ),
        ((24, 33), "malignancy", "(TOP (NN malignancy))"),
        ((25, 37), "see the tumor", "(TOP (VB see) (NP (DT the) (NN tumor)))"),
        ((1, 16), "renal malignancy", "(TOP (JJ renal) (NN malignancy))"),
    ];
    let doc = sentence_lines(SENTENCES);
    let sentences = &doc.sections[0].sentences;
    assert_eq!(sentences.len(), 8);
    for (s, (span, text, tree)) in sentences.iter().zip(expected) {
        let results = detector.detect(s, &p).unwrap();
        assert_eq!(results.len(), 1, "{s}");
        let r = &results[0];
        assert_eq!(r.span, Some(CharSpan::new(span.0, span.1)), "{s}");
        assert_eq!(r.negated_tokens.join(" "), text, "{s}");
        assert_eq!(r.extracted.to_ptb(), tree, "{s}");
    }
    let unmatched = detector.detect(&sentences[3], &p).unwrap();
    assert_eq!(unmatched[0].rule_name, UNMATCHED);
}

#[test]
fn final_output_line() {
    let pipeline = data::pipeline();
    let doc = sentence_lines(SENTENCES);
    let out = pipeline.summarize_tokenized(&doc, &provider()).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].header, "History of Present Illness");
    assert_eq!(
        out[0].itemized(),
        "Infiltration(-), Communicable Diseases(-), Physical findings(-), Communicable Diseases(-), \
         Communicable Diseases(-), Heart failure(-), Malignant Neoplasms(-), Neoplasms(-), \
         Malignant Neoplasms(-)"
    );
}

#[test]
fn trace_records() {
    let pipeline = data::pipeline();
    let doc = sentence_lines(SENTENCES);
    let trace = format_trace(&pipeline.summarize_tokenized(&doc, &provider()).unwrap());
    let first = "sent: 0\n\
        original: chest x-ray is negative for infiltration .\t [NEGATED]\n\
        \n\
        neg part: negative for infiltration .\n\
        negated term: negative for\n\
        --- tregex/tsurgeon with negated type: ADJP-A\n\
        constituency tree: (TOP (NN infiltration))\n\
        >> infiltration\n\
        >> negated span: (29, 40)\n";
    assert!(trace.starts_with(first), "{trace}");
    assert!(trace.contains("negated term: was ruled out\n--- tregex/tsurgeon with negated type: VP-P\n"));
    assert!(trace.ends_with(
        "--- Final output ---\n\n--- History of Present Illness ---\n\
         Infiltration(-), Communicable Diseases(-), Physical findings(-), Communicable Diseases(-), \
         Communicable Diseases(-), Heart failure(-), Malignant Neoplasms(-), Neoplasms(-), \
         Malignant Neoplasms(-)\n"
    ));
}
