//! Bit-level plumbing: Elias-delta universal codes for the synthesis indices
//! and fixed-width index fields for quantizer codebooks. Bits are carried as
//! `u8` values 0/1, most significant first.

/// Number of bits in the Elias-delta code of `k ≥ 1`.
pub fn elias_delta_len(k: u64) -> usize {
    let n = 64 - k.leading_zeros() as usize; // bits of k
    let l = 64 - (n as u64).leading_zeros() as usize; // bits of n
    2 * l + n - 2
}

/// Append the Elias-delta code of `k ≥ 1`.
pub fn elias_delta_encode(k: u64, out: &mut Vec<u8>) {
    debug_assert!(k >= 1);
    let n = 64 - k.leading_zeros() as usize;
    let l = 64 - (n as u64).leading_zeros() as usize;
    for _ in 0..l - 1 {
        out.push(0);
    }
    for i in (0..l).rev() {
        out.push(((n >> i) & 1) as u8);
    }
    for i in (0..n - 1).rev() {
        out.push(((k >> i) & 1) as u8);
    }
}

/// Decode one Elias-delta code starting at `*pos`; advances `pos`.
pub fn elias_delta_decode(bits: &[u8], pos: &mut usize) -> Option<u64> {
    let mut zeros = 0;
    while *pos < bits.len() && bits[*pos] == 0 {
        zeros += 1;
        *pos += 1;
        if zeros > 63 {
            return None;
        }
    }
    if *pos >= bits.len() {
        return None;
    }
    // Read n (zeros + 1 bits, starting with the current 1 bit).
    let mut n: u64 = 0;
    for _ in 0..zeros + 1 {
        if *pos >= bits.len() {
            return None;
        }
        n = (n << 1) | bits[*pos] as u64;
        *pos += 1;
    }
    if n == 0 || n > 63 {
        return None;
    }
    let mut k: u64 = 1;
    for _ in 0..n - 1 {
        if *pos >= bits.len() {
            return None;
        }
        k = (k << 1) | bits[*pos] as u64;
        *pos += 1;
    }
    Some(k)
}

/// Append `idx` as a fixed-width big-endian field.
pub fn fixed_encode(idx: usize, width: usize, out: &mut Vec<u8>) {
    for i in (0..width).rev() {
        out.push(((idx >> i) & 1) as u8);
    }
}

/// Read a fixed-width big-endian field starting at `*pos`.
pub fn fixed_decode(bits: &[u8], pos: &mut usize, width: usize) -> Option<usize> {
    if *pos + width > bits.len() {
        return None;
    }
    let mut idx = 0;
    for _ in 0..width {
        idx = (idx << 1) | bits[*pos] as usize;
        *pos += 1;
    }
    Some(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elias_delta_roundtrip_small() {
        for k in 1..=2000u64 {
            let mut bits = Vec::new();
            elias_delta_encode(k, &mut bits);
            assert_eq!(bits.len(), elias_delta_len(k), "length of code for {k}");
            let mut pos = 0;
            assert_eq!(elias_delta_decode(&bits, &mut pos), Some(k));
            assert_eq!(pos, bits.len());
        }
    }

    #[test]
    fn elias_delta_streams_are_self_delimiting() {
        let ks = [1u64, 7, 300, 2, 65_536, 13];
        let mut bits = Vec::new();
        for &k in &ks {
            elias_delta_encode(k, &mut bits);
        }
        let mut pos = 0;
        for &k in &ks {
            assert_eq!(elias_delta_decode(&bits, &mut pos), Some(k));
        }
        assert_eq!(pos, bits.len());
    }

    #[test]
    fn truncated_code_returns_none() {
        let mut bits = Vec::new();
        elias_delta_encode(300, &mut bits);
        bits.truncate(bits.len() - 2);
        let mut pos = 0;
        assert_eq!(elias_delta_decode(&bits, &mut pos), None);
    }

    #[test]
    fn fixed_width_roundtrip() {
        let mut bits = Vec::new();
        fixed_encode(13, 6, &mut bits);
        assert_eq!(bits, vec![0, 0, 1, 1, 0, 1]);
        let mut pos = 0;
        assert_eq!(fixed_decode(&bits, &mut pos, 6), Some(13));
        assert_eq!(fixed_decode(&bits, &mut pos, 1), None);
    }
}
