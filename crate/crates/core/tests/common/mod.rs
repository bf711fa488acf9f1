#![allow(dead_code)]

use std::io::Read;
use std::path::PathBuf;
use std::sync::OnceLock;

use flate2::read::GzDecoder;
use taylor_core::corpus::tokenize;
use taylor_core::{TokenSequence, TokenizerConfig};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn read_gz(name: &str) -> String {
    let file = std::fs::File::open(data_path(name)).expect("vendored test corpus");
    let mut text = String::new();
    GzDecoder::new(file)
        .read_to_string(&mut text)
        .expect("valid gzip UTF-8");
    text
}

pub fn keep_punct() -> TokenizerConfig {
    TokenizerConfig {
        strip_punctuation: false,
        ..Default::default()
    }
}

pub fn moby_text() -> &'static str {
    static TEXT: OnceLock<String> = OnceLock::new();
    TEXT.get_or_init(|| read_gz("moby_dick.txt.gz"))
}

/// Moby Dick under the default tokenizer.
pub fn moby() -> &'static TokenSequence {
    static SEQ: OnceLock<TokenSequence> = OnceLock::new();
    SEQ.get_or_init(|| tokenize(moby_text(), &TokenizerConfig::default()).unwrap())
}
