//! Reading a corpus and remapping its bytes to dense codes.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use qwt_core::Alphabet;

use crate::error::{CliError, Result};

/// A text recoded to `0..alphabet.len()`, one byte per code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub codes: Vec<u8>,
    pub alphabet: Alphabet,
}

impl Corpus {
    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// Reads at most `limit` bytes of `path`.
pub fn read_prefix(path: &Path, limit: Option<u64>) -> Result<Vec<u8>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut bytes = Vec::new();
    match limit {
        Some(l) => file.take(l).read_to_end(&mut bytes),
        None => { file }.read_to_end(&mut bytes),
    }
    .map_err(|e| CliError::io(path, e))?;
    Ok(bytes)
}

/// Reads a prefix of `path` and remaps it densely.
pub fn ingest(path: &Path, limit: Option<u64>) -> Result<Corpus> {
    let bytes = read_prefix(path, limit)?;
    if bytes.is_empty() {
        return Err(CliError::Invalid(format!("{}: empty input", path.display())));
    }
    Ok(remap(bytes))
}

/// Replaces every byte by its rank among the distinct bytes, in place.
pub fn remap(mut bytes: Vec<u8>) -> Corpus {
    let mut present = [false; 256];
    for &b in &bytes {
        present[b as usize] = true;
    }
    let decode: Vec<u16> = (0..256u16).filter(|&b| present[b as usize]).collect();
    let mut code = [0u8; 256];
    for (c, &b) in decode.iter().enumerate() {
        code[b as usize] = c as u8;
    }
    for b in bytes.iter_mut() {
        *b = code[*b as usize];
    }
    Corpus { codes: bytes, alphabet: Alphabet::from_decode_table(decode) }
}
