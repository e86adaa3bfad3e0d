//! Little-endian byte encoding used by the serialized structures.
//!
//! Structures append themselves to a `Vec<u8>` and are read back from a byte cursor
//! (`&mut &[u8]`). File containers are built on top of this by the IO layer.

use alloc::vec::Vec;

use crate::{Error, Result};

pub trait Encode {
    fn encode(&self, out: &mut Vec<u8>);
}

pub(crate) fn put_u8(out: &mut Vec<u8>, v: u8) {
    out.push(v);
}

pub(crate) fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u128(out: &mut Vec<u8>, v: u128) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_usize(out: &mut Vec<u8>, v: usize) {
    put_u64(out, v as u64);
}

fn take<'a>(input: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if input.len() < n {
        return Err(Error::Decode("unexpected end of data"));
    }
    let (head, tail) = input.split_at(n);
    *input = tail;
    Ok(head)
}

pub fn get_u8(input: &mut &[u8]) -> Result<u8> {
    Ok(take(input, 1)?[0])
}

pub fn get_u16(input: &mut &[u8]) -> Result<u16> {
    Ok(u16::from_le_bytes(take(input, 2)?.try_into().unwrap()))
}

pub fn get_u32(input: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_le_bytes(take(input, 4)?.try_into().unwrap()))
}

pub fn get_u64(input: &mut &[u8]) -> Result<u64> {
    Ok(u64::from_le_bytes(take(input, 8)?.try_into().unwrap()))
}

pub(crate) fn get_u128(input: &mut &[u8]) -> Result<u128> {
    Ok(u128::from_le_bytes(take(input, 16)?.try_into().unwrap()))
}

pub(crate) fn get_usize(input: &mut &[u8]) -> Result<usize> {
    usize::try_from(get_u64(input)?).map_err(|_| Error::Decode("length does not fit in usize"))
}

/// Reads a length that prefixes `elem_bytes`-sized items, refusing lengths the
/// remaining input cannot hold.
pub(crate) fn get_len(input: &mut &[u8], elem_bytes: usize) -> Result<usize> {
    let n = get_usize(input)?;
    if n.checked_mul(elem_bytes).map_or(true, |b| b > input.len()) {
        return Err(Error::Decode("length exceeds remaining data"));
    }
    Ok(n)
}
