//! Carry-less (GF(2)[z]) polynomial products on packed words.

/// 64×64 → 128-bit carry-less product, returned as `(lo, hi)`.
#[inline]
pub fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: feature presence checked at runtime just above.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let va = _mm_set_epi64x(0, a as i64);
    let vb = _mm_set_epi64x(0, b as i64);
    let r = _mm_clmulepi64_si128(va, vb, 0);
    let lo = _mm_cvtsi128_si64(r) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
    (lo, hi)
}

pub fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        bits &= bits - 1;
    }
    (lo, hi)
}

const KARATSUBA_CUTOFF: usize = 32;

/// Product of two polynomials given as little-endian coefficient words.
pub fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    mul_into(a, b, &mut out);
    out
}

fn mul_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.len().min(b.len()) < KARATSUBA_CUTOFF || a.len() != b.len() {
        if a.len() != b.len() && a.len().min(b.len()) >= KARATSUBA_CUTOFF {
            // pad the shorter operand so both halves line up
            let len = a.len().max(b.len());
            let mut pa = a.to_vec();
            let mut pb = b.to_vec();
            pa.resize(len, 0);
            pb.resize(len, 0);
            let mut tmp = vec![0u64; 2 * len];
            mul_into(&pa, &pb, &mut tmp);
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o ^= t;
            }
            return;
        }
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let (lo, hi) = clmul64(x, y);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        return;
    }
    // Karatsuba over GF(2): a = a0 + z^h a1, b = b0 + z^h b1
    let len = a.len();
    let h = len / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let mut p0 = vec![0u64; 2 * h];
    mul_into(a0, b0, &mut p0);
    let mut p2 = vec![0u64; 2 * (len - h)];
    mul_into(a1, b1, &mut p2);
    let mut sa = a1.to_vec();
    let mut sb = b1.to_vec();
    for (s, x) in sa.iter_mut().zip(a0) {
        *s ^= x;
    }
    for (s, x) in sb.iter_mut().zip(b0) {
        *s ^= x;
    }
    let mut p1 = vec![0u64; 2 * (len - h)];
    mul_into(&sa, &sb, &mut p1);
    for (i, v) in p0.iter().enumerate() {
        p1[i] ^= v;
    }
    for (i, v) in p2.iter().enumerate() {
        p1[i] ^= v;
    }
    for (i, v) in p0.iter().enumerate() {
        out[i] ^= v;
    }
    for (i, v) in p1.iter().enumerate() {
        out[i + h] ^= v;
    }
    for (i, v) in p2.iter().enumerate() {
        out[i + 2 * h] ^= v;
    }
}

/// Bits `[start, start + len)` of a packed word array.
pub fn extract_bits(words: &[u64], start: usize, len: usize) -> Vec<u64> {
    let nwords = len.div_ceil(64);
    let mut out = vec![0u64; nwords];
    let (w0, shift) = (start / 64, start % 64);
    for (k, o) in out.iter_mut().enumerate() {
        let lo = words.get(w0 + k).copied().unwrap_or(0);
        let hi = words.get(w0 + k + 1).copied().unwrap_or(0);
        *o = if shift == 0 {
            lo
        } else {
            (lo >> shift) | (hi << (64 - shift))
        };
    }
    if len % 64 != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u64 << (len % 64)) - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len()];
        for i in 0..a.len() * 64 {
            if (a[i / 64] >> (i % 64)) & 1 == 0 {
                continue;
            }
            for j in 0..b.len() * 64 {
                if (b[j / 64] >> (j % 64)) & 1 == 1 {
                    out[(i + j) / 64] ^= 1 << ((i + j) % 64);
                }
            }
        }
        out
    }

    #[test]
    fn hardware_and_software_clmul_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let (a, b) = (rng.gen(), rng.gen());
            assert_eq!(clmul64(a, b), clmul64_soft(a, b));
        }
        assert_eq!(clmul64_soft(0b11, 0b11), (0b101, 0));
        assert_eq!(clmul64_soft(1 << 63, 1 << 63), (0, 1 << 62));
    }

    #[test]
    fn poly_mul_matches_bitwise_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (la, lb) in [(1, 1), (3, 5), (40, 40), (33, 70), (70, 33), (64, 64)] {
            let a: Vec<u64> = (0..la).map(|_| rng.gen()).collect();
            let b: Vec<u64> = (0..lb).map(|_| rng.gen()).collect();
            assert_eq!(poly_mul(&a, &b), naive(&a, &b), "sizes {la}x{lb}");
        }
    }

    #[test]
    fn bit_extraction_across_words() {
        let words = [u64::MAX, 0, 1];
        assert_eq!(extract_bits(&words, 60, 8), vec![0b1111]);
        assert_eq!(extract_bits(&words, 128, 1), vec![1]);
        assert_eq!(extract_bits(&words, 0, 130), vec![u64::MAX, 0, 1]);
        assert_eq!(extract_bits(&words, 0, 128), vec![u64::MAX, 0]);
    }
}
