//! Where fragment trees come from.

use std::io::{self, BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use clinsum_tree::{normalize_whitespace, parse_ptb, ParseError, Tree, Treebank};
use thiserror::Error;

/// A fragment of a sentence that needs a tree.
#[derive(Debug, Clone, Copy)]
pub struct FragmentRequest<'a> {
    /// The whole (whitespace-tokenized) sentence.
    pub sentence: &'a str,
    pub tokens: &'a [String],
    /// Index of the fragment's first token in the sentence.
    pub offset: usize,
}

impl FragmentRequest<'_> {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("no tree for fragment `{fragment}`")]
    Missing { fragment: String },
    #[error("parser command failed: {0}")]
    Command(#[from] io::Error),
    #[error("parser command returned a bad tree for `{fragment}`: {source}")]
    BadTree {
        fragment: String,
        #[source]
        source: ParseError,
    },
    #[error("tree leaves `{leaves}` do not spell fragment `{fragment}`")]
    Mismatch { fragment: String, leaves: String },
}

pub trait TreeProvider: Send + Sync {
    fn tree(&self, request: &FragmentRequest<'_>) -> Result<Tree, ProviderError>;
}

/// Looks fragments up in a treebank. When only the full sentence is present,
/// its tree is cut down to the fragment's tokens.
#[derive(Debug, Clone, Default)]
pub struct TreebankProvider {
    bank: Treebank,
}

impl TreebankProvider {
    pub fn new(bank: Treebank) -> TreebankProvider {
        TreebankProvider { bank }
    }

    pub fn treebank(&self) -> &Treebank {
        &self.bank
    }
}

impl TreeProvider for TreebankProvider {
    fn tree(&self, request: &FragmentRequest<'_>) -> Result<Tree, ProviderError> {
        let fragment = request.text();
        if let Some(t) = self.bank.get(&fragment) {
            return Ok(t.clone());
        }
        let missing = || ProviderError::Missing {
            fragment: fragment.clone(),
        };
        let full = self.bank.get(request.sentence).ok_or_else(missing)?;
        let range = request.offset..request.offset + request.tokens.len();
        let projected = full.project_leaves(range).ok_or_else(missing)?;
        if projected.yield_tokens() != request.tokens {
            return Err(missing());
        }
        Ok(projected)
    }
}

/// Runs an external parser once and keeps it alive: one fragment per line
/// in, one bracketed tree per line out.
pub struct CommandProvider {
    command: String,
    process: Mutex<Option<Running>>,
}

struct Running {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl CommandProvider {
    pub fn new(command: impl Into<String>) -> CommandProvider {
        CommandProvider {
            command: command.into(),
            process: Mutex::new(None),
        }
    }

    fn spawn(&self) -> io::Result<Running> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(Running {
            child,
            stdin,
            stdout,
        })
    }
}

impl TreeProvider for CommandProvider {
    fn tree(&self, request: &FragmentRequest<'_>) -> Result<Tree, ProviderError> {
        let fragment = normalize_whitespace(&request.text());
        let mut guard = self.process.lock().unwrap_or_else(|e| e.into_inner());
        if guard.is_none() {
            *guard = Some(self.spawn()?);
        }
        let running = guard.as_mut().expect("spawned above");
        writeln!(running.stdin, "{fragment}")?;
        running.stdin.flush()?;
        let mut line = String::new();
        if running.stdout.read_line(&mut line)? == 0 {
            *guard = None;
            return Err(ProviderError::Command(io::Error::new(
                io::ErrorKind::UnexpectedEof,
                "parser exited",
            )));
        }
        let tree = parse_ptb(line.trim()).map_err(|source| ProviderError::BadTree {
            fragment: fragment.clone(),
            source,
        })?;
        let leaves = tree.yield_tokens();
        if !leaves.iter().copied().eq(fragment.split(' ')) {
            return Err(ProviderError::Mismatch {
                fragment,
                leaves: leaves.join(" "),
            });
        }
        Ok(tree)
    }
}

impl Drop for CommandProvider {
    fn drop(&mut self) {
        let slot = self.process.get_mut().unwrap_or_else(|e| e.into_inner());
        if let Some(mut running) = slot.take() {
            drop(running.stdin);
            let _ = running.child.wait();
        }
    }
}

/// Tries each provider in turn; the first tree wins. Missing trees fall
/// through, other errors stop the search.
pub struct ChainProvider {
    providers: Vec<Box<dyn TreeProvider>>,
}

impl ChainProvider {
    pub fn new(providers: Vec<Box<dyn TreeProvider>>) -> ChainProvider {
        ChainProvider { providers }
    }
}

impl TreeProvider for ChainProvider {
    fn tree(&self, request: &FragmentRequest<'_>) -> Result<Tree, ProviderError> {
        for p in &self.providers {
            match p.tree(request) {
                Err(ProviderError::Missing { .. }) => continue,
                other => return other,
            }
        }
        Err(ProviderError::Missing {
            fragment: request.text(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DVT: &str = "Left lower ext edema : U/S was performed , no evidence of dvt .\n\
        (TOP (S (S (VP (VBD Left) (NP (JJR lower) (JJ ext) (NN edema)))) (: :) (S (S (NP (NNP U/S)) (VP (VBD was) (VP (VBN performed)))) (, ,) (S (NP (NP (DT no) (NN evidence)) (PP (IN of) (NP (NN dvt)))))) (. .)))\n";

    fn request<'a>(sentence: &'a str, tokens: &'a [String], offset: usize) -> FragmentRequest<'a> {
        FragmentRequest {
            sentence,
            tokens,
            offset,
        }
    }

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn projects_the_sentence_tree() {
        let p = TreebankProvider::new(Treebank::parse(DVT).unwrap());
        let sentence = DVT.lines().next().unwrap();
        let frag = words("no evidence of dvt .");
        let t = p.tree(&request(sentence, &frag, 9)).unwrap();
        assert_eq!(t.yield_tokens(), ["no", "evidence", "of", "dvt", "."]);
        let wrong = words("nothing here");
        assert!(matches!(
            p.tree(&request("other sentence", &wrong, 0)),
            Err(ProviderError::Missing { .. })
        ));
    }

    #[test]
    fn fragment_entry_beats_projection() {
        let text = format!(
            "{DVT}\nno evidence of dvt .\n(TOP (NP (NP (DT no) (NN evidence)) (PP (IN of) (NP (NN dvt))) (. .)))\n"
        );
        let p = TreebankProvider::new(Treebank::parse(&text).unwrap());
        let frag = words("no evidence of dvt .");
        let t = p.tree(&request("unused", &frag, 0)).unwrap();
        assert_eq!(t.label(), "TOP");
        assert_eq!(t.children()[0].label(), "NP");
    }

    #[test]
    fn external_command_round_trip() {
        // A stand-in parser: every token becomes an NN under one NP.
        let script = r#"while read -r line; do out="(TOP (NP"; for w in $line; do out="$out (NN $w)"; done; echo "$out))"; done"#;
        let p = CommandProvider::new(script);
        let frag = words("no fever");
        let t = p.tree(&request("no fever", &frag, 0)).unwrap();
        assert_eq!(t.to_ptb(), "(TOP (NP (NN no) (NN fever)))");
        let frag = words("no chills");
        assert_eq!(p.tree(&request("", &frag, 0)).unwrap().yield_tokens(), ["no", "chills"]);
    }

    #[test]
    fn chain_falls_through_missing() {
        let empty = TreebankProvider::default();
        let full = TreebankProvider::new(Treebank::parse(DVT).unwrap());
        let chain = ChainProvider::new(vec![Box::new(empty), Box::new(full)]);
        let sentence = DVT.lines().next().unwrap();
        let frag = words("no evidence of dvt .");
        assert!(chain.tree(&request(sentence, &frag, 9)).is_ok());
    }
}
