//! Ingestion of raw or pre-tokenized text into interned token sequences.
//!
//! Words are kept as surface forms: no lemmatization or stemming, so `say`,
//! `said` and `says` are three different words. The raw-text tokenizer splits
//! on whitespace and on dash runs (em dash, en dash, `--`), then peels
//! punctuation off both ends of each piece. A single ASCII hyphen inside a
//! word is left alone, as are digits.

use std::fs;
use std::io::BufRead;
use std::path::Path;

use indexmap::IndexSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizerMode {
    #[default]
    RawText,
    PreTokenized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    pub case_folding: bool,
    /// When true, punctuation peeled off word edges is discarded. When false
    /// every peeled mark (and every dash run) becomes a token of its own.
    pub strip_punctuation: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::RawText,
            case_folding: false,
            strip_punctuation: true,
        }
    }
}

impl TokenizerConfig {
    pub fn pretokenized() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::PreTokenized,
            ..Default::default()
        }
    }
}

/// An interned word sequence `X_1 .. X_N` over a vocabulary `W`.
///
/// IDs are assigned in order of first occurrence, and the vocabulary holds
/// exactly the words that occur in the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    tokens: Vec<u32>,
    vocab: IndexSet<String>,
}

impl TokenSequence {
    /// Interns a stream of words. Fails on an empty stream.
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = IndexSet::new();
        let mut tokens = Vec::new();
        for w in words {
            let w = w.as_ref();
            let id = match vocab.get_index_of(w) {
                Some(id) => id,
                None => vocab.insert_full(w.to_owned()).0,
            };
            tokens.push(id as u32);
        }
        if tokens.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(TokenSequence { tokens, vocab })
    }

    /// Builds a sequence from IDs into an existing vocabulary, re-interning so
    /// that the result again uses first-occurrence IDs and drops unused words.
    pub(crate) fn from_ids(ids: impl IntoIterator<Item = u32>, words: &[String]) -> Result<Self> {
        let mut remap = vec![u32::MAX; words.len()];
        let mut vocab = IndexSet::new();
        let mut tokens = Vec::new();
        for id in ids {
            let slot = &mut remap[id as usize];
            if *slot == u32::MAX {
                *slot = vocab.insert_full(words[id as usize].clone()).0 as u32;
            }
            tokens.push(*slot);
        }
        if tokens.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(TokenSequence { tokens, vocab })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn ids(&self) -> &[u32] {
        &self.tokens
    }

    pub fn word(&self, id: u32) -> &str {
        &self.vocab[id as usize]
    }

    pub fn id_of(&self, word: &str) -> Option<u32> {
        self.vocab.get_index_of(word).map(|i| i as u32)
    }

    /// Vocabulary in ID order.
    pub fn words(&self) -> impl ExactSizeIterator<Item = &str> {
        self.vocab.iter().map(String::as_str)
    }

    pub(crate) fn vocab_vec(&self) -> Vec<String> {
        self.vocab.iter().cloned().collect()
    }

    /// The tokens as words, in sequence order.
    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|&id| self.word(id))
    }

    /// Appends `other` after `self`.
    pub fn concat(&self, other: &TokenSequence) -> TokenSequence {
        let mut vocab = self.vocab.clone();
        let mut tokens = self.tokens.clone();
        tokens.reserve(other.len());
        for w in other.iter() {
            let id = match vocab.get_index_of(w) {
                Some(id) => id,
                None => vocab.insert_full(w.to_owned()).0,
            };
            tokens.push(id as u32);
        }
        TokenSequence { tokens, vocab }
    }

    /// Renders the sequence in the pre-tokenized file format: single spaces
    /// between tokens, a newline after every `TOKENS_PER_LINE` tokens.
    pub fn render(&self) -> String {
        const TOKENS_PER_LINE: usize = 20;
        let mut out = String::with_capacity(self.tokens.len() * 6);
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                out.push(if i % TOKENS_PER_LINE == 0 { '\n' } else { ' ' });
            }
            out.push_str(w);
        }
        out.push('\n');
        out
    }
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

fn is_dash(c: char) -> bool {
    matches!(c, '\u{2013}' | '\u{2014}' | '\u{2015}')
}

/// Splits a whitespace-free chunk at dash runs. Dash runs are yielded as
/// separate pieces so the caller can decide whether to keep them.
fn split_dashes(chunk: &str, mut emit: impl FnMut(&str, bool)) {
    let bytes = chunk.as_bytes();
    let mut start = 0;
    let mut iter = chunk.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        let run_end = if is_dash(c) {
            let mut end = i + c.len_utf8();
            while let Some(&(j, d)) = iter.peek() {
                if !is_dash(d) {
                    break;
                }
                end = j + d.len_utf8();
                iter.next();
            }
            Some(end)
        } else if c == '-' && bytes.get(i + 1) == Some(&b'-') {
            let mut end = i + 1;
            while bytes.get(end) == Some(&b'-') {
                end += 1;
            }
            while matches!(iter.peek(), Some(&(j, _)) if j < end) {
                iter.next();
            }
            Some(end)
        } else {
            None
        };
        if let Some(end) = run_end {
            if start < i {
                emit(&chunk[start..i], false);
            }
            emit(&chunk[i..end], true);
            start = end;
        }
    }
    if start < chunk.len() {
        emit(&chunk[start..], false);
    }
}

/// Peels punctuation off both ends of `piece`, calling `emit` for the core
/// word and, when `keep` is set, for each peeled mark in text order.
fn peel(piece: &str, keep: bool, emit: &mut impl FnMut(&str)) {
    let core_start = piece
        .char_indices()
        .find(|&(_, c)| !is_punct(c))
        .map(|(i, _)| i)
        .unwrap_or(piece.len());
    let core_end = piece
        .char_indices()
        .rev()
        .find(|&(_, c)| !is_punct(c))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(core_start);
    if keep {
        for (i, c) in piece[..core_start].char_indices() {
            emit(&piece[i..i + c.len_utf8()]);
        }
    }
    if core_start < core_end {
        emit(&piece[core_start..core_end]);
    }
    if keep {
        for (i, c) in piece[core_end..].char_indices() {
            let at = core_end + i;
            emit(&piece[at..at + c.len_utf8()]);
        }
    }
}

/// Splits raw text into word strings according to `config` (mode is ignored).
pub fn split_words(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let keep = !config.strip_punctuation;
    let fold = |w: &str| {
        if config.case_folding {
            w.to_lowercase()
        } else {
            w.to_owned()
        }
    };
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        split_dashes(chunk, |piece, dash| {
            if dash {
                if keep {
                    out.push(piece.to_owned());
                }
            } else {
                peel(piece, keep, &mut |w| out.push(fold(w)));
            }
        });
    }
    out
}

/// Tokenizes a document. In pre-tokenized mode this is plain whitespace
/// splitting with no punctuation handling (case folding still applies).
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Result<TokenSequence> {
    match config.mode {
        TokenizerMode::RawText => TokenSequence::from_words(split_words(text, config)),
        TokenizerMode::PreTokenized if config.case_folding => {
            TokenSequence::from_words(text.split_ascii_whitespace().map(str::to_lowercase))
        }
        TokenizerMode::PreTokenized => TokenSequence::from_words(text.split_ascii_whitespace()),
    }
}

/// Reads whitespace-separated tokens verbatim from a line-oriented stream.
pub fn load_pretokenized<R: BufRead>(reader: R) -> Result<TokenSequence> {
    let mut vocab = IndexSet::new();
    let mut tokens = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            path: "<stream>".into(),
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        for w in line.split_ascii_whitespace() {
            let id = match vocab.get_index_of(w) {
                Some(id) => id,
                None => vocab.insert_full(w.to_owned()).0,
            };
            tokens.push(id as u32);
        }
    }
    if tokens.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(TokenSequence { tokens, vocab })
}

/// Reads and tokenizes one document from disk.
pub fn read_document(path: &Path, config: &TokenizerConfig) -> Result<TokenSequence> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    tokenize(&text, config)
}

/// Returns the body of a Project Gutenberg file, between the
/// `*** START OF ...` and `*** END OF ...` marker lines.
pub fn trim_gutenberg(text: &str) -> Result<&str> {
    fn marker(line: &str, what: &str) -> bool {
        let t = line.trim_start_matches(|c: char| c == '*' || c.is_whitespace());
        let upper = t.to_ascii_uppercase();
        upper.starts_with(&format!("{what} OF THE PROJECT GUTENBERG"))
            || upper.starts_with(&format!("{what} OF THIS PROJECT GUTENBERG"))
    }

    let mut offset = 0;
    let mut start = None;
    let mut end = None;
    for line in text.split_inclusive('\n') {
        if start.is_none() && marker(line, "START") {
            start = Some(offset + line.len());
        } else if start.is_some() && marker(line, "END") {
            end = Some(offset);
            break;
        }
        offset += line.len();
    }
    match (start, end) {
        (Some(s), Some(e)) => Ok(text[s..e].trim()),
        _ => Err(Error::NoGutenbergMarkers),
    }
}
