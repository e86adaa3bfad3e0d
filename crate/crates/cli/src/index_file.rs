//! Index files: a serialized matrix, optionally followed by the count table of a
//! backward-search index.

use std::fs;
use std::path::Path;

use qwt_core::codec::Encode;
use qwt_core::{FmCountIndex, QuadWaveletMatrix};

use crate::error::{CliError, Result};

const FM_SECTION: &[u8; 4] = b"FMCT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    /// Matrix over a corpus.
    Plain(QuadWaveletMatrix),
    /// Matrix over the BWT of a corpus plus its count table.
    Fm(FmCountIndex),
}

impl Index {
    pub fn matrix(&self) -> &QuadWaveletMatrix {
        match self {
            Self::Plain(m) => m,
            Self::Fm(ix) => ix.matrix(),
        }
    }

    pub fn matrix_mut(&mut self) -> &mut QuadWaveletMatrix {
        match self {
            Self::Plain(m) => m,
            Self::Fm(ix) => ix.matrix_mut(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Plain(_) => "plain",
            Self::Fm(_) => "fm",
        }
    }

    /// Dense code of an input byte, if it occurs.
    pub fn code(&self, byte: u8) -> Option<u32> {
        match self {
            Self::Plain(m) => m.alphabet().encode(byte as u32),
            Self::Fm(ix) => ix.code(byte),
        }
    }

    /// Input byte of a dense code; `None` for the sentinel of an FM index.
    pub fn byte(&self, code: u32) -> Option<u8> {
        let orig = self.matrix().alphabet().decode(code)?;
        match self {
            Self::Plain(_) => Some(orig as u8),
            Self::Fm(_) => orig.checked_sub(1).map(|b| b as u8),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            Self::Plain(m) => m.encode(&mut out),
            Self::Fm(ix) => ix.encode(&mut out),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut input = bytes;
        let m = QuadWaveletMatrix::decode(&mut input)?;
        if input.is_empty() {
            return Ok(Self::Plain(m));
        }
        if input.starts_with(FM_SECTION) {
            return Ok(Self::Fm(FmCountIndex::decode(&mut &bytes[..])?));
        }
        Err(CliError::Invalid("trailing data after index".into()))
    }
}

pub fn write_index(path: &Path, index: &Index) -> Result<()> {
    fs::write(path, index.to_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn read_index(path: &Path) -> Result<Index> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Index::from_bytes(&bytes)
}
