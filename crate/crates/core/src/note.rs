//! Splitting notes into sections and sentences.

pub const BODY: &str = "BODY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub header: String,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NoteDocument {
    pub sections: Vec<Section>,
}

impl NoteDocument {
    pub fn sentence_count(&self) -> usize {
        self.sections.iter().map(|s| s.sentences.len()).sum()
    }
}

/// `--- Name ---` or a whole line like `Chief Complaint:`.
pub fn section_header(line: &str) -> Option<&str> {
    let line = line.trim();
    if let Some(inner) = line.strip_prefix("---").and_then(|l| l.strip_suffix("---")) {
        let name = inner.trim();
        return (!name.is_empty()).then_some(name);
    }
    let name = line.strip_suffix(':')?.trim_end();
    let starts_upper = name.chars().next().is_some_and(char::is_uppercase);
    let plain = name
        .chars()
        .all(|c| c.is_alphanumeric() || c == ' ' || c == '/' || c == '&' || c == '-');
    (starts_upper && plain && name.len() <= 60).then_some(name)
}

/// Sections in order. Text before the first header goes to a `BODY`
/// section. Lines of a paragraph are joined; blank lines end a sentence.
pub fn split_note(text: &str) -> NoteDocument {
    let mut doc = NoteDocument::default();
    let mut header = BODY.to_string();
    let mut sentences = Vec::new();
    let mut paragraph = String::new();
    let mut seen_header = false;

    let flush_paragraph = |paragraph: &mut String, sentences: &mut Vec<String>| {
        sentences.extend(split_sentences(paragraph));
        paragraph.clear();
    };

    for line in text.lines() {
        if let Some(name) = section_header(line) {
            flush_paragraph(&mut paragraph, &mut sentences);
            if seen_header || !sentences.is_empty() {
                doc.sections.push(Section {
                    header: std::mem::take(&mut header),
                    sentences: std::mem::take(&mut sentences),
                });
            }
            header = name.to_string();
            seen_header = true;
        } else if line.trim().is_empty() {
            flush_paragraph(&mut paragraph, &mut sentences);
        } else {
            if !paragraph.is_empty() {
                paragraph.push(' ');
            }
            paragraph.push_str(line.trim());
        }
    }
    flush_paragraph(&mut paragraph, &mut sentences);
    if seen_header || !sentences.is_empty() {
        doc.sections.push(Section { header, sentences });
    }
    doc
}

/// One already-tokenized sentence per line, with `--- Name ---` lines
/// starting sections.
pub fn sentence_lines(text: &str) -> NoteDocument {
    let mut doc = NoteDocument::default();
    for line in text.lines() {
        if let Some(name) = section_header(line).filter(|_| line.trim_start().starts_with("---")) {
            doc.sections.push(Section {
                header: name.to_string(),
                sentences: Vec::new(),
            });
            continue;
        }
        let sentence = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if sentence.is_empty() {
            continue;
        }
        if doc.sections.is_empty() {
            doc.sections.push(Section {
                header: BODY.to_string(),
                sentences: Vec::new(),
            });
        }
        doc.sections.last_mut().expect("pushed above").sentences.push(sentence);
    }
    doc
}

/// Splits after `.`, `!` or `?` when whitespace follows. A single letter
/// before the period ("p." or "E.") does not end a sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for word in text.split_whitespace() {
        current.push(word);
        let ends = word.ends_with(['.', '!', '?']);
        let stem = word.trim_end_matches(['.', '!', '?']);
        let initial = stem.chars().count() == 1 && stem.chars().all(char::is_alphabetic);
        if ends && !initial {
            out.push(current.join(" "));
            current.clear();
        }
    }
    if !current.is_empty() {
        out.push(current.join(" "));
    }
    out
}

const LEADING: &[char] = &['(', '[', '{', '"', '\''];
const TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '"', '\''];

/// Separates leading and trailing punctuation into tokens of their own and
/// joins everything with single spaces.
pub fn tokenize(sentence: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for word in sentence.split_whitespace() {
        let mut w = word;
        while w.len() > 1 && w.starts_with(LEADING) {
            let c = w.chars().next().expect("nonempty");
            out.push(c.to_string());
            w = &w[c.len_utf8()..];
        }
        let mut tail = Vec::new();
        while w.len() > 1 && w.ends_with(TRAILING) {
            let c = w.chars().next_back().expect("nonempty");
            tail.push(c.to_string());
            w = &w[..w.len() - c.len_utf8()];
        }
        out.push(w.to_string());
        out.extend(tail.into_iter().rev());
    }
    out.join(" ")
}
