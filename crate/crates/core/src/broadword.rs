// Word-level helpers shared by the bit and quad vectors.

const LOW_LANES: u64 = 0x5555_5555_5555_5555;

/// One bit per 2-bit lane (the lane's low bit) set iff the lane holds `symbol`.
#[inline(always)]
pub(crate) fn quad_eq_mask(word: u64, symbol: u8) -> u64 {
    let broadcast = LOW_LANES.wrapping_mul(symbol as u64 & 3);
    let x = !(word ^ broadcast);
    x & (x >> 1) & LOW_LANES
}

/// Occurrences of `symbol` among the first `lanes` quads of `word` (`lanes <= 32`).
#[inline(always)]
pub(crate) fn quad_count_prefix(word: u64, symbol: u8, lanes: usize) -> usize {
    let mask = if lanes >= 32 {
        u64::MAX
    } else {
        (1u64 << (2 * lanes)) - 1
    };
    (quad_eq_mask(word, symbol) & mask).count_ones() as usize
}

#[inline(always)]
pub(crate) fn ones_prefix(word: u64, bits: usize) -> usize {
    if bits >= 64 {
        word.count_ones() as usize
    } else {
        (word & ((1u64 << bits) - 1)).count_ones() as usize
    }
}

/// Position of the `k`-th (0-based) set bit of `word`. `k` must be below the popcount.
#[inline]
pub(crate) fn select_in_word(mut word: u64, k: usize) -> usize {
    let mut k = k;
    let mut base = 0;
    loop {
        let ones = (word & 0xFF).count_ones() as usize;
        if k < ones {
            break;
        }
        k -= ones;
        word >>= 8;
        base += 8;
    }
    for _ in 0..k {
        word &= word - 1;
    }
    base + word.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq_mask_marks_matching_lanes() {
        // lanes (low to high): 0, 1, 2, 3
        let w = 0b11_10_01_00u64;
        for s in 0..4u8 {
            assert_eq!(quad_eq_mask(w, s) & 0xFF, 1u64 << (2 * s));
        }
        assert_eq!(quad_count_prefix(0, 0, 32), 32);
        assert_eq!(quad_count_prefix(0, 0, 5), 5);
        assert_eq!(quad_count_prefix(u64::MAX, 3, 7), 7);
    }

    #[test]
    fn select_in_word_matches_scan() {
        let words = [1u64, 0x8000_0000_0000_0000, 0xF0F0_0000_1234_5678, u64::MAX];
        for &w in &words {
            let positions: std::vec::Vec<usize> = (0..64).filter(|b| w >> b & 1 == 1).collect();
            for (k, &p) in positions.iter().enumerate() {
                assert_eq!(select_in_word(w, k), p);
            }
        }
    }
}

// 128-bit counter group: absolute superblock count in the low 44 bits, then seven
// 12-bit block counts relative to the superblock (the first block is implicitly 0).

pub(crate) const SUPERBLOCK_BITS: u32 = 44;
pub(crate) const BLOCK_COUNTER_BITS: u32 = 12;
const SUPERBLOCK_MASK: u128 = (1u128 << SUPERBLOCK_BITS) - 1;
const BLOCK_MASK: u128 = (1u128 << BLOCK_COUNTER_BITS) - 1;
pub(crate) const BLOCKS_PER_GROUP: usize = 8;

#[inline(always)]
pub(crate) fn group_superblock(group: u128) -> usize {
    (group & SUPERBLOCK_MASK) as usize
}

#[inline(always)]
pub(crate) fn group_block(group: u128, block: usize) -> usize {
    // block 0 reads bits of the superblock field and is zeroed by the multiply
    let v = (group >> (32 + BLOCK_COUNTER_BITS as usize * block)) & BLOCK_MASK;
    (v * (block != 0) as u128) as usize
}

pub(crate) fn group_pack(superblock: usize, blocks: &[usize; BLOCKS_PER_GROUP]) -> u128 {
    debug_assert!((superblock as u128) <= SUPERBLOCK_MASK);
    let mut g = superblock as u128;
    for (b, &c) in blocks.iter().enumerate().skip(1) {
        debug_assert!((c as u128) <= BLOCK_MASK);
        g |= (c as u128) << (32 + BLOCK_COUNTER_BITS as usize * b);
    }
    g
}
