//! Naive reference implementations used to cross-check the fast paths.
//!
//! Everything here is deliberately simple and independent of the table-driven
//! code in [`crate::bch`] and [`crate::modem`]: field arithmetic is done by
//! shift-and-reduce, syndromes by direct polynomial evaluation or long
//! division, decoding by exhaustive sphere search over an explicitly
//! enumerated codeword set, LLRs by two plain sums, and error-floor
//! combinatorics by exact integer arithmetic.

/// Toy-code constants: extended BCH(32,21,2) built on GF(2^5) with the
/// primitive polynomial x^5 + x^2 + 1.
pub const TOY_M: u32 = 5;
pub const TOY_PRIM_POLY: u32 = 0b100101;
pub const TOY_BASE_N: usize = 31;
pub const TOY_K: usize = 21;
/// Generator of the base BCH(31,21,2): lcm of the minimal polynomials of
/// alpha and alpha^3.
pub fn toy_generator() -> u64 {
    let m1 = minimal_polynomial_slow(1);
    let m3 = minimal_polynomial_slow(3);
    crate::gf::poly_mul(m1, m3)
}

/// Shift-and-reduce multiplication in GF(2^5), independent of the log/antilog
/// tables.
fn gf32_mul(a: u16, b: u16) -> u16 {
    let mut acc = 0u32;
    let mut a = a as u32;
    let mut b = b as u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        if a & (1 << TOY_M) != 0 {
            a ^= TOY_PRIM_POLY;
        }
        b >>= 1;
    }
    acc as u16
}

fn gf32_pow(a: u16, mut e: usize) -> u16 {
    let mut base = a;
    let mut acc = 1u16;
    while e != 0 {
        if e & 1 == 1 {
            acc = gf32_mul(acc, base);
        }
        base = gf32_mul(base, base);
        e >>= 1;
    }
    acc
}

fn minimal_polynomial_slow(i: usize) -> u64 {
    // Conjugacy class of alpha^i under squaring.
    let alpha_i = gf32_pow(2, i);
    let mut roots = vec![];
    let mut r = alpha_i;
    loop {
        roots.push(r);
        r = gf32_mul(r, r);
        if r == alpha_i {
            break;
        }
    }
    // Expand prod (x + root) with field coefficients.
    let mut poly: Vec<u16> = vec![1];
    for &root in &roots {
        let mut next = vec![0u16; poly.len() + 1];
        for (d, &c) in poly.iter().enumerate() {
            next[d + 1] ^= c;
            next[d] ^= gf32_mul(c, root);
        }
        poly = next;
    }
    let mut bits = 0u64;
    for (d, &c) in poly.iter().enumerate() {
        assert!(c <= 1);
        if c == 1 {
            bits |= 1 << d;
        }
    }
    bits
}

/// All 2^21 codewords of the extended toy code as 32-bit words (bit `i` of
/// the `u32` is transmitted position `i`), built from the non-systematic
/// generator-multiplication construction and sorted for binary search.
pub struct ToyCodebook {
    sorted: Vec<u32>,
}

impl ToyCodebook {
    pub fn contains(&self, w: u32) -> bool {
        self.sorted.binary_search(&w).is_ok()
    }

    pub fn words(&self) -> &[u32] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

/// Enumerates the full toy codeword set. Takes a few hundred milliseconds.
pub fn toy_codeword_set() -> ToyCodebook {
    let g = toy_generator();
    let mut words = Vec::with_capacity(1 << TOY_K);
    for msg in 0u64..(1 << TOY_K) {
        // Base codeword polynomial c(x) = m(x) g(x), degree <= 30. The bit
        // at transmitted position i is the coefficient of x^(30 - i).
        let c = crate::gf::poly_mul(msg, g);
        let mut w = 0u32;
        for i in 0..TOY_BASE_N {
            if c >> (TOY_BASE_N - 1 - i) & 1 == 1 {
                w |= 1 << i;
            }
        }
        // Overall even parity in the extended position 31.
        if w.count_ones() % 2 == 1 {
            w |= 1 << 31;
        }
        words.push(w);
    }
    words.sort_unstable();
    ToyCodebook { sorted: words }
}

/// Exhaustive bounded-distance decode: returns the unique codeword within
/// Hamming distance `t` of `word`, or `None`. Panics if the sphere-packing
/// assumption (at most one such codeword) is violated.
pub fn sphere_decode(word: u32, codebook: &ToyCodebook, t: u32) -> Option<u32> {
    let mut found: Option<u32> = None;
    let mut check = |cand: u32| {
        if codebook.contains(cand) {
            assert!(
                found.is_none() || found == Some(cand),
                "two codewords within distance t"
            );
            found = Some(cand);
        }
    };
    check(word);
    if t >= 1 {
        for i in 0..32 {
            check(word ^ (1 << i));
        }
    }
    if t >= 2 {
        for i in 0..32 {
            for j in (i + 1)..32 {
                check(word ^ (1 << i) ^ (1 << j));
            }
        }
    }
    assert!(t <= 2, "oracle covers t <= 2");
    found
}

pub fn bools_to_u32(bits: &[bool]) -> u32 {
    assert!(bits.len() <= 32);
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u32::from(b) << i))
}

/// Syndrome of a 32-bit toy word by direct evaluation of the received
/// polynomial at alpha and alpha^3, plus the overall parity check.
pub fn toy_syndrome_by_evaluation(word: &[bool]) -> ([u16; 2], bool) {
    assert_eq!(word.len(), 32);
    let alpha = 2u16;
    let mut odd = [0u16; 2];
    for (j, out) in odd.iter_mut().enumerate() {
        let mult = 2 * j + 1;
        let mut acc = 0u16;
        for (i, &b) in word[..TOY_BASE_N].iter().enumerate() {
            if b {
                acc ^= gf32_pow(alpha, mult * (TOY_BASE_N - 1 - i));
            }
        }
        *out = acc;
    }
    let parity = word.iter().filter(|&&b| b).count() % 2 == 1;
    (odd, parity)
}

/// True iff the base (non-extended) part of a transmitted word leaves zero
/// remainder modulo the generator. Parent length must be at most 63 bits.
pub fn base_remainder_is_zero(base_bits: &[bool], generator: u64, shorten: usize) -> bool {
    let parent_n = base_bits.len() + shorten;
    assert!(parent_n <= 63);
    let mut poly = 0u64;
    for (i, &b) in base_bits.iter().enumerate() {
        if b {
            poly |= 1 << (parent_n - 1 - i - shorten);
        }
    }
    crate::gf::poly_rem(poly, generator) == 0
}

/// Eq.-style exact LLR by two naive sums: no log-sum-exp stabilization, no
/// factoring. `labels[i]` is the Gray label of constellation point `i`, and
/// `k` indexes the label bit from the most significant end (k = 0 is the
/// first bit of the group).
pub fn naive_llr(amps: &[f64], labels: &[u32], m_bits: u32, y: f64, rho: f64, k: u32) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (i, &a) in amps.iter().enumerate() {
        let d = y - rho.sqrt() * a;
        let w = (-d * d / 2.0).exp();
        let bit = labels[i] >> (m_bits - 1 - k) & 1;
        if bit == 1 {
            num += w;
        } else {
            den += w;
        }
    }
    num.ln() - den.ln()
}

/// Exact binomial coefficient; panics on overflow (supported parameter
/// ranges keep every intermediate below 2^127).
pub fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128).expect("binomial overflow");
        acc /= (i + 1) as u128;
    }
    acc
}

/// Number of minimal stall patterns for staircase codes:
/// C(w, t+1) * sum_{m=1}^{t+1} C(w, m) C(w, t+1-m).
pub fn stall_multiplicity_scc(w: u64, t: u64) -> u128 {
    let mut sum: u128 = 0;
    for m in 1..=(t + 1) {
        sum += binom_u128(w, m) * binom_u128(w, t + 1 - m);
    }
    binom_u128(w, t + 1) * sum
}

/// Product-code variant: C(w, t+1)^2.
pub fn stall_multiplicity_pc(w: u64, t: u64) -> u128 {
    binom_u128(w, t + 1) * binom_u128(w, t + 1)
}

/// Direct (non-log-domain) evaluation of the error-floor estimate
/// (t+1)^2 / w^2 * M_min * p^((t+1)^2). Valid while p^((t+1)^2) stays inside
/// f64 range; used as the exact-arithmetic cross-check.
pub fn error_floor_direct(w: u64, t: u64, m_min: u128, ber_pre: f64) -> f64 {
    let tp = (t + 1) as f64;
    let ww = w as f64;
    (tp * tp) / (ww * ww) * (m_min as f64) * ber_pre.powi(((t + 1) * (t + 1)) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_generator_is_degree_10() {
        assert_eq!(crate::gf::poly_degree(toy_generator()), 10);
    }

    #[test]
    fn codebook_size_and_parity() {
        let cb = toy_codeword_set();
        assert_eq!(cb.len(), 1 << 21);
        // Every extended codeword has even weight.
        for &w in &cb.words()[..1000] {
            assert_eq!(w.count_ones() % 2, 0);
        }
        assert!(cb.contains(0));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_u128(128, 3), 341_376);
        assert_eq!(binom_u128(128, 2), 8_128);
        assert_eq!(binom_u128(512, 3), 22_238_720);
        assert_eq!(binom_u128(5, 0), 1);
        assert_eq!(binom_u128(4, 5), 0);
    }

    #[test]
    fn stall_multiplicities_frozen_values() {
        // C(128,3) * (C(128,1) C(128,2) + C(128,2) C(128,1) + C(128,3) C(128,0)... )
        // with the sum running m = 1..=3:
        // sum = 128 * 8128 + 8128 * 128 + 341376 * 1 = 2_422_144.
        assert_eq!(
            stall_multiplicity_scc(128, 2),
            341_376u128 * 2_422_144u128
        );
        assert_eq!(stall_multiplicity_pc(128, 2), 341_376u128 * 341_376u128);
    }
}
