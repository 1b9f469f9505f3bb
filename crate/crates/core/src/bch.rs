//! Shortened, optionally 1-bit-extended binary BCH component codes.
//!
//! A [`ComponentCode`] owns everything needed for fast systematic encoding,
//! syndrome computation and bounded-distance decoding: GF(2^m) tables, the
//! generator polynomial, byte-sliced syndrome tables and per-position parity
//! contributions.
//!
//! Bit ordering convention, used everywhere in this crate: index 0 is the
//! first transmitted bit and corresponds to the highest-order message
//! position; parity follows the message; the extended overall-parity bit,
//! when present, occupies index `n - 1`. The `shorten` leading positions of
//! the parent code are fixed to zero and never transmitted.

use crate::bits;
use crate::gf::GfTables;
use crate::CodeError;

/// Construction parameters for a component code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentParams {
    /// Field degree; the parent code has length 2^m - 1.
    pub m: u32,
    /// Dimension of the parent (unshortened, unextended) BCH code.
    pub base_k: usize,
    /// Error-correcting capability in bits.
    pub t: usize,
    /// Number of leading information positions fixed to zero.
    pub shorten: usize,
    /// Whether one overall (even) parity bit is appended.
    pub extended: bool,
}

impl ComponentParams {
    pub const fn new(m: u32, base_k: usize, t: usize, shorten: usize, extended: bool) -> Self {
        ComponentParams {
            m,
            base_k,
            t,
            shorten,
            extended,
        }
    }
}

/// Outcome of one bounded-distance decode.
///
/// `Corrected` means the input lay within Hamming distance `t` of some
/// codeword; that codeword may differ from the transmitted one (a
/// miscorrection), which the decoder itself cannot observe. `Failure` leaves
/// the input unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BddStatus {
    Corrected,
    Failure,
}

/// Result of [`ComponentCode::bdd_decode`]: a status plus the error pattern
/// (at most `t + 1` positions, counting the extended parity bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BddOutcome {
    pub status: BddStatus,
    n_err: u8,
    pos: [u16; 3],
}

impl BddOutcome {
    pub(crate) fn failure() -> Self {
        BddOutcome {
            status: BddStatus::Failure,
            n_err: 0,
            pos: [0; 3],
        }
    }

    pub(crate) fn corrected(pos: &[u16]) -> Self {
        let mut out = BddOutcome {
            status: BddStatus::Corrected,
            n_err: pos.len() as u8,
            pos: [0; 3],
        };
        out.pos[..pos.len()].copy_from_slice(pos);
        out
    }

    /// Positions the decoder wants to flip, ascending not guaranteed.
    pub fn error_positions(&self) -> &[u16] {
        &self.pos[..self.n_err as usize]
    }

    pub fn weight(&self) -> usize {
        self.n_err as usize
    }

    /// Applies the error pattern to a packed word in place.
    pub fn apply(&self, word: &mut [u64]) {
        for &p in self.error_positions() {
            bits::flip_bit(word, p as usize);
        }
    }

    /// The decoded codeword for a given input (the input itself on failure).
    pub fn corrected_word(&self, word: &[u64]) -> Vec<u64> {
        let mut out = word.to_vec();
        self.apply(&mut out);
        out
    }
}

/// Syndrome of a received word: the odd power-sum syndromes S1, S3, ... plus
/// the overall-parity check when the code is extended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syndrome {
    /// S_{2j+1} for j < t.
    pub odd: [u16; 2],
    /// Overall parity of the received word (false = even = consistent).
    /// Always false for non-extended codes.
    pub parity: bool,
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.odd == [0, 0] && !self.parity
    }
}

/// A fully built component code.
#[derive(Debug, Clone)]
pub struct ComponentCode {
    params: ComponentParams,
    base_n: usize,
    n: usize,
    k: usize,
    d0: usize,
    gen_poly: u64,
    gen_deg: usize,
    gf: GfTables,
    /// Byte-sliced syndrome tables: `syn_tables[j][byte_pos][byte]` is the
    /// contribution of one received byte to S_{2j+1}.
    syn_tables: Vec<Vec<[u16; 256]>>,
    /// Byte-sliced encoder tables: parity remainder contribution of each
    /// message byte (generator degree is at most 2 * t * m <= 32 bits).
    enc_tables: Vec<[u32; 256]>,
    word_len: usize,
}

impl ComponentCode {
    /// Builds a component code, validating that a binary BCH code with the
    /// requested parameters exists (generator degree must match).
    pub fn build(params: ComponentParams) -> Result<ComponentCode, CodeError> {
        let ComponentParams {
            m,
            base_k,
            t,
            shorten,
            extended,
        } = params;
        if !(1..=2).contains(&t) {
            return Err(CodeError::Parameter(format!(
                "t = {t} unsupported; this implementation covers t in {{1, 2}}"
            )));
        }
        let gf = GfTables::new(m)?;
        let base_n = gf.order() as usize;
        if base_k == 0 || base_k >= base_n {
            return Err(CodeError::Parameter(format!(
                "base_k = {base_k} out of range for base length {base_n}"
            )));
        }
        if shorten >= base_k {
            return Err(CodeError::Parameter(format!(
                "shorten = {shorten} must be < base_k = {base_k}"
            )));
        }

        // Generator = product of the distinct minimal polynomials of
        // alpha, alpha^3, ..., alpha^(2t-1). Even powers share minimal
        // polynomials with odd ones and add nothing.
        let mut minpolys: Vec<u32> = vec![];
        for j in 0..t {
            let mp = gf.minimal_polynomial(2 * j + 1);
            if !minpolys.contains(&mp) {
                minpolys.push(mp);
            }
        }
        let mut gen_poly = 1u64;
        for &mp in &minpolys {
            gen_poly = crate::gf::poly_mul(gen_poly, mp as u64);
        }
        let gen_deg = crate::gf::poly_degree(gen_poly) as usize;
        if gen_deg != base_n - base_k {
            return Err(CodeError::Parameter(format!(
                "no BCH({base_n}, {base_k}, {t}) code: generator degree is {gen_deg}, \
                 expected {}",
                base_n - base_k
            )));
        }

        let n = base_n - shorten + usize::from(extended);
        let k = base_k - shorten;
        let d0 = 2 * t + 1 + usize::from(extended);
        let word_len = bits::words_for(n);
        let base_len = base_n - shorten; // transmitted bits of the base code

        // Syndrome tables. Bit i (i < base_len) sits at parent position
        // i + shorten and has locator alpha^(base_n - 1 - i - shorten).
        let mut syn_tables = Vec::with_capacity(t);
        for j in 0..t {
            let mult = 2 * j + 1;
            let nbytes = n.div_ceil(8);
            let mut tables = vec![[0u16; 256]; nbytes];
            for bp in 0..nbytes {
                let mut single = [0u16; 8];
                for (kbit, s) in single.iter_mut().enumerate() {
                    let i = bp * 8 + kbit;
                    if i < base_len {
                        let e = base_n - 1 - i - shorten;
                        *s = gf.alpha_pow(mult * e);
                    }
                }
                for byte in 0..256usize {
                    let mut acc = 0u16;
                    for (kbit, s) in single.iter().enumerate() {
                        if byte & (1 << kbit) != 0 {
                            acc ^= s;
                        }
                    }
                    tables[bp][byte] = acc;
                }
            }
            syn_tables.push(tables);
        }

        // Encoder tables: remainder of x^(base_n - 1 - p) mod g for each
        // message position, folded into byte-indexed XOR tables.
        let mut xpow_rem = vec![0u32; base_n];
        let mut r = 1u64; // x^0 mod g
        for e in 0..base_n {
            xpow_rem[e] = r as u32;
            r <<= 1;
            if crate::gf::poly_degree(r) as usize == gen_deg {
                r ^= gen_poly;
            }
        }
        let nbytes_msg = k.div_ceil(8);
        let mut enc_tables = vec![[0u32; 256]; nbytes_msg];
        for bp in 0..nbytes_msg {
            let mut single = [0u32; 8];
            for (kbit, s) in single.iter_mut().enumerate() {
                let i = bp * 8 + kbit;
                if i < k {
                    *s = xpow_rem[base_n - 1 - i - shorten];
                }
            }
            for byte in 0..256usize {
                let mut acc = 0u32;
                for (kbit, s) in single.iter().enumerate() {
                    if byte & (1 << kbit) != 0 {
                        acc ^= s;
                    }
                }
                enc_tables[bp][byte] = acc;
            }
        }

        Ok(ComponentCode {
            params,
            base_n,
            n,
            k,
            d0,
            gen_poly,
            gen_deg,
            gf,
            syn_tables,
            enc_tables,
            word_len,
        })
    }

    pub fn params(&self) -> ComponentParams {
        self.params
    }

    /// Codeword length n_c.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension k_c.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.params.t
    }

    /// Design minimum distance (2t + 1, or 2t + 2 when extended).
    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn extended(&self) -> bool {
        self.params.extended
    }

    /// Generator polynomial bit pattern, LSB = constant term.
    pub fn generator(&self) -> u64 {
        self.gen_poly
    }

    pub fn gf(&self) -> &GfTables {
        &self.gf
    }

    /// Packed words per codeword.
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// Display name in the BCH(n, k, t) convention.
    pub fn name(&self) -> String {
        format!("BCH({},{},{})", self.n, self.k, self.params.t)
    }

    /// Systematic encode of a packed `k`-bit message into a packed `n`-bit
    /// codeword: message first, BCH parity next, overall parity last.
    pub fn encode_into(&self, msg: &[u64], out: &mut [u64]) {
        debug_assert_eq!(out.len(), self.word_len);
        out.fill(0);
        // Message part.
        let msg_words = bits::words_for(self.k);
        out[..msg_words].copy_from_slice(&msg[..msg_words]);
        if self.k % 64 != 0 {
            out[msg_words - 1] &= (1u64 << (self.k % 64)) - 1;
        }
        // BCH parity from byte tables.
        let mut rem = 0u32;
        let msg_bytes: &[u8] = unsafe {
            std::slice::from_raw_parts(out.as_ptr() as *const u8, self.k.div_ceil(8))
        };
        for (bp, &byte) in msg_bytes.iter().enumerate() {
            rem ^= self.enc_tables[bp][byte as usize];
        }
        // Parity bit q (q-th transmitted parity) is the coefficient of
        // x^(gen_deg - 1 - q) in the remainder.
        for q in 0..self.gen_deg {
            if rem & (1 << (self.gen_deg - 1 - q)) != 0 {
                bits::set_bit(out, self.k + q, true);
            }
        }
        // Overall parity bit makes total codeword parity even.
        if self.params.extended {
            let par = bits::count_ones(&out[..self.word_len]) & 1;
            if par == 1 {
                bits::set_bit(out, self.n - 1, true);
            }
        }
        debug_assert!(self.syndrome(out).is_zero());
    }

    /// Convenience allocating encode.
    pub fn encode(&self, msg: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.word_len];
        self.encode_into(msg, &mut out);
        out
    }

    /// Encode from a bool-slice message (tests and small tools).
    pub fn encode_bits(&self, msg: &[bool]) -> Result<Vec<bool>, CodeError> {
        if msg.len() != self.k {
            return Err(CodeError::Usage(format!(
                "message length {} != k_c = {}",
                msg.len(),
                self.k
            )));
        }
        let out = self.encode(&bits::pack(msg));
        Ok(bits::unpack(&out, self.n))
    }

    /// Power-sum syndromes plus the overall parity check.
    pub fn syndrome(&self, word: &[u64]) -> Syndrome {
        debug_assert_eq!(word.len(), self.word_len);
        let nbytes = self.n.div_ceil(8);
        let word_bytes: &[u8] =
            unsafe { std::slice::from_raw_parts(word.as_ptr() as *const u8, nbytes) };
        let mut odd = [0u16; 2];
        for (j, tables) in self.syn_tables.iter().enumerate() {
            let mut acc = 0u16;
            for (bp, &byte) in word_bytes.iter().enumerate() {
                acc ^= tables[bp][byte as usize];
            }
            odd[j] = acc;
        }
        let parity = self.params.extended && bits::count_ones(word) & 1 == 1;
        Syndrome { odd, parity }
    }

    /// True iff the word is a codeword.
    pub fn is_codeword(&self, word: &[u64]) -> bool {
        self.syndrome(word).is_zero()
    }

    /// Bounded-distance decode: finds the unique codeword within Hamming
    /// distance `t` of `word` if one exists (success or miscorrection,
    /// indistinguishable here), otherwise reports `Failure` and leaves the
    /// word untouched.
    pub fn bdd_decode(&self, word: &[u64]) -> BddOutcome {
        let syn = self.syndrome(word);
        self.bdd_decode_with_syndrome(word, syn)
    }

    /// Same as [`ComponentCode::bdd_decode`] for callers that already have
    /// the syndrome (e.g. from a zero-syndrome cache pass).
    pub fn bdd_decode_with_syndrome(&self, _word: &[u64], syn: Syndrome) -> BddOutcome {
        let t = self.params.t;
        let s1 = syn.odd[0];

        // Base error pattern from the algebraic decoder.
        let mut base = [0u16; 2];
        let n_base: usize;
        if s1 == 0 && (t < 2 || syn.odd[1] == 0) {
            n_base = 0;
        } else if t == 1 {
            // Single-error code: s1 is the error locator.
            match self.locator_to_pos(s1) {
                Some(p) => {
                    base[0] = p;
                    n_base = 1;
                }
                None => return BddOutcome::failure(),
            }
        } else {
            // t == 2, Peterson-style direct solution.
            let s3 = syn.odd[1];
            if s1 == 0 {
                // Two or fewer errors always give s1 != 0.
                return BddOutcome::failure();
            }
            if s3 == self.gf.pow(s1, 3) {
                match self.locator_to_pos(s1) {
                    Some(p) => {
                        base[0] = p;
                        n_base = 1;
                    }
                    None => return BddOutcome::failure(),
                }
            } else {
                // sigma(x) = x^2 + s1 x + (s1^2 + s3/s1); substitute
                // x = s1 z to reach z^2 + z = d.
                let c = self.gf.mul(s1, s1) ^ self.gf.div(s3, s1);
                if c == 0 {
                    return BddOutcome::failure();
                }
                let d = self.gf.div(c, self.gf.mul(s1, s1));
                let z = match self.gf.solve_quadratic(d) {
                    Some(z) => z,
                    None => return BddOutcome::failure(),
                };
                let x1 = self.gf.mul(s1, z);
                let x2 = x1 ^ s1;
                debug_assert!(x1 != 0 && x2 != 0 && x1 != x2);
                match (self.locator_to_pos(x1), self.locator_to_pos(x2)) {
                    (Some(p1), Some(p2)) => {
                        base[0] = p1;
                        base[1] = p2;
                        n_base = 2;
                    }
                    _ => return BddOutcome::failure(),
                }
            }
        }

        if !self.params.extended {
            return BddOutcome::corrected(&base[..n_base]);
        }

        // Reconcile with the overall parity bit: the full error pattern has
        // even weight iff the received word has even parity. A mismatch
        // means the parity bit itself is also in error.
        let ext_in_error = syn.parity != (n_base % 2 == 1);
        if ext_in_error {
            if n_base + 1 > t {
                return BddOutcome::failure();
            }
            let mut full = [0u16; 3];
            full[..n_base].copy_from_slice(&base[..n_base]);
            full[n_base] = (self.n - 1) as u16;
            BddOutcome::corrected(&full[..n_base + 1])
        } else {
            BddOutcome::corrected(&base[..n_base])
        }
    }

    /// Maps an error locator alpha^e to a transmitted position, rejecting
    /// locations inside the shortened prefix.
    #[inline]
    fn locator_to_pos(&self, x: u16) -> Option<u16> {
        let e = self.gf.log(x) as usize;
        let s = self.params.shorten;
        if e + s <= self.base_n - 1 {
            Some((self.base_n - 1 - e - s) as u16)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{get_bit, pack, unpack};
    use crate::reference;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn toy() -> ComponentCode {
        ComponentCode::build(ComponentParams::new(5, 21, 2, 0, true)).unwrap()
    }

    #[test]
    fn paper_code_dimensions() {
        // BCH(228,209,2) = extended BCH(512,493,2) shortened by 284.
        let c = ComponentCode::build(ComponentParams::new(9, 493, 2, 284, true)).unwrap();
        assert_eq!((c.n(), c.k()), (228, 209));
        assert_eq!(c.d0(), 6);
        // BCH(256,239,2).
        let c = ComponentCode::build(ComponentParams::new(8, 239, 2, 0, true)).unwrap();
        assert_eq!((c.n(), c.k()), (256, 239));
        // BCH(504,485,2) = extended BCH(512,493,2) shortened by 8.
        let c = ComponentCode::build(ComponentParams::new(9, 493, 2, 8, true)).unwrap();
        assert_eq!((c.n(), c.k()), (504, 485));
        // BCH(128,113,2) product-code component.
        let c = ComponentCode::build(ComponentParams::new(7, 113, 2, 0, true)).unwrap();
        assert_eq!((c.n(), c.k()), (128, 113));
        // Toy BCH(32,21,2).
        let c = toy();
        assert_eq!((c.n(), c.k()), (32, 21));
        assert_eq!(c.d0(), 6);
    }

    #[test]
    fn rejects_impossible_parameters() {
        // No binary BCH(31, 20, 2): generator degree is 10, not 11.
        assert!(ComponentCode::build(ComponentParams::new(5, 20, 2, 0, true)).is_err());
        // t = 3 unsupported by this implementation.
        assert!(ComponentCode::build(ComponentParams::new(5, 16, 3, 0, false)).is_err());
        // Shorten must leave information bits.
        assert!(ComponentCode::build(ComponentParams::new(5, 21, 2, 21, true)).is_err());
    }

    #[test]
    fn toy_generator_divides_x31_plus_1() {
        let c = toy();
        // x^31 - 1 as a bit pattern.
        let x31_1 = (1u64 << 31) | 1;
        assert_eq!(crate::gf::poly_rem(x31_1, c.generator()), 0);
        assert_eq!(crate::gf::poly_degree(c.generator()), 10);
    }

    #[test]
    fn toy_minimum_distance_is_6() {
        // Exhaustive minimum weight over all nonzero codewords via the
        // independent non-systematic construction.
        let words = reference::toy_codeword_set();
        let min_w = words
            .words()
            .iter()
            .filter(|&&w| w != 0)
            .map(|w| w.count_ones())
            .min()
            .unwrap();
        assert_eq!(min_w, 6);
    }

    #[test]
    fn systematic_encode_matches_reference_set() {
        // The systematic encoder must generate exactly the codeword set of
        // the generator-polynomial construction.
        let c = toy();
        let words = reference::toy_codeword_set();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..2000 {
            let msg: Vec<bool> = (0..c.k()).map(|_| rng.random()).collect();
            let cw = c.encode_bits(&msg).unwrap();
            assert_eq!(&cw[..c.k()], &msg[..], "systematic prefix");
            let as_u32 = reference::bools_to_u32(&cw);
            assert!(words.contains(as_u32));
        }
    }

    #[test]
    fn encode_linearity_and_zero() {
        let c = toy();
        let zero = c.encode_bits(&vec![false; c.k()]).unwrap();
        assert!(zero.iter().all(|&b| !b));

        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..200 {
            let a: Vec<bool> = (0..c.k()).map(|_| rng.random()).collect();
            let b: Vec<bool> = (0..c.k()).map(|_| rng.random()).collect();
            let sum: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let ca = c.encode_bits(&a).unwrap();
            let cb = c.encode_bits(&b).unwrap();
            let cs = c.encode_bits(&sum).unwrap();
            let xor: Vec<bool> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
            assert_eq!(cs, xor);
        }
    }

    #[test]
    fn syndrome_matches_division_and_evaluation_oracles() {
        let c = toy();
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..500 {
            let word: Vec<bool> = (0..c.n()).map(|_| rng.random()).collect();
            let packed = pack(&word);
            let syn = c.syndrome(&packed);
            let (oracle_odd, oracle_par) = reference::toy_syndrome_by_evaluation(&word);
            assert_eq!(syn.odd, oracle_odd);
            assert_eq!(syn.parity, oracle_par);
            // Zero syndrome iff the polynomial-division remainder vanishes
            // and parity is even.
            let rem_zero = reference::base_remainder_is_zero(
                &word[..c.n() - 1],
                c.generator(),
                c.params().shorten,
            );
            assert_eq!(syn.is_zero(), rem_zero && !oracle_par);
        }
    }

    #[test]
    fn encoded_words_have_zero_syndrome_larger_codes() {
        for params in [
            ComponentParams::new(8, 239, 2, 0, true),
            ComponentParams::new(9, 493, 2, 284, true),
            ComponentParams::new(7, 113, 2, 0, true),
            ComponentParams::new(9, 493, 2, 8, true),
        ] {
            let c = ComponentCode::build(params).unwrap();
            let mut rng = StdRng::seed_from_u64(10);
            for _ in 0..50 {
                let msg: Vec<bool> = (0..c.k()).map(|_| rng.random()).collect();
                let cw = c.encode(&pack(&msg));
                assert!(c.is_codeword(&cw));
                // One flip always breaks it (d0 > 1).
                let mut bad = cw.clone();
                crate::bits::flip_bit(&mut bad, rng.random_range(0..c.n()));
                assert!(!c.is_codeword(&bad));
            }
        }
    }

    #[test]
    fn bdd_corrects_all_patterns_up_to_t() {
        let c = toy();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..400 {
            let msg: Vec<bool> = (0..c.k()).map(|_| rng.random()).collect();
            let cw = c.encode(&pack(&msg));
            // All single and a sample of double error patterns.
            let mut patterns: Vec<Vec<usize>> = vec![vec![]];
            for i in 0..c.n() {
                patterns.push(vec![i]);
            }
            for _ in 0..40 {
                let a = rng.random_range(0..c.n());
                let b = rng.random_range(0..c.n());
                if a != b {
                    patterns.push(vec![a, b]);
                }
            }
            for pat in patterns {
                let mut word = cw.clone();
                for &p in &pat {
                    crate::bits::flip_bit(&mut word, p);
                }
                let out = c.bdd_decode(&word);
                assert_eq!(out.status, BddStatus::Corrected);
                let mut got: Vec<u16> = out.error_positions().to_vec();
                got.sort_unstable();
                let mut want: Vec<u16> = pat.iter().map(|&p| p as u16).collect();
                want.sort_unstable();
                assert_eq!(got, want);
                assert_eq!(out.corrected_word(&word), cw);
            }
        }
    }

    #[test]
    fn bdd_agrees_with_sphere_search_oracle() {
        // Dense random words: exercises failures and miscorrections.
        let c = toy();
        let codewords = reference::toy_codeword_set();
        let mut rng = StdRng::seed_from_u64(12);
        let mut miscorrections = 0u32;
        for _ in 0..20_000 {
            let word_u32: u32 = rng.random();
            let word_bits: Vec<bool> = (0..32).map(|i| word_u32 >> i & 1 == 1).collect();
            let packed = pack(&word_bits);
            let out = c.bdd_decode(&packed);
            match reference::sphere_decode(word_u32, &codewords, c.t() as u32) {
                Some(cw) => {
                    assert_eq!(out.status, BddStatus::Corrected);
                    let corrected = out.corrected_word(&packed);
                    assert_eq!(
                        reference::bools_to_u32(&unpack(&corrected, 32)),
                        cw,
                        "decoded codeword must match the sphere codeword"
                    );
                    if cw != word_u32 {
                        miscorrections += 1;
                    }
                }
                None => {
                    assert_eq!(out.status, BddStatus::Failure);
                    assert!(out.error_positions().is_empty());
                }
            }
        }
        // Random 32-bit words land within distance 2 of some codeword often
        // enough that this is a meaningful miscorrection exercise.
        assert!(miscorrections > 100, "got {miscorrections}");
    }

    #[test]
    fn bdd_miscorrects_at_distance_2_from_wrong_codeword() {
        // Build a word at distance 4 from one codeword and 2 from another
        // using a weight-6 codeword: flip 4 of its support positions.
        let c = toy();
        let words = reference::toy_codeword_set();
        let w6 = words.words().iter().copied().find(|w| w.count_ones() == 6).unwrap();
        let support: Vec<usize> = (0..32).filter(|&i| w6 >> i & 1 == 1).collect();
        // transmitted = 0, received = 4 bits of the weight-6 support set.
        let mut word = vec![0u64; c.word_len()];
        for &p in &support[..4] {
            crate::bits::set_bit(&mut word, p, true);
        }
        let out = c.bdd_decode(&word);
        assert_eq!(out.status, BddStatus::Corrected);
        let corrected = out.corrected_word(&word);
        assert_eq!(reference::bools_to_u32(&unpack(&corrected, 32)), w6);
        assert_eq!(out.weight(), 2);
    }

    #[test]
    fn shortened_code_never_reports_prefix_positions() {
        // Shortened toy variant: BCH(32,21,2) shortened by 6 -> (26,15).
        let c = ComponentCode::build(ComponentParams::new(5, 21, 2, 6, true)).unwrap();
        assert_eq!((c.n(), c.k()), (26, 15));
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20_000 {
            let word: Vec<bool> = (0..c.n()).map(|_| rng.random()).collect();
            let out = c.bdd_decode(&pack(&word));
            for &p in out.error_positions() {
                assert!((p as usize) < c.n());
            }
        }
    }

    #[test]
    fn shortening_matches_parent_with_zero_prefix() {
        let parent = toy();
        let shortened = ComponentCode::build(ComponentParams::new(5, 21, 2, 6, true)).unwrap();
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..300 {
            let msg: Vec<bool> = (0..shortened.k()).map(|_| rng.random()).collect();
            let mut parent_msg = vec![false; 6];
            parent_msg.extend_from_slice(&msg);
            let cw_parent = parent.encode_bits(&parent_msg).unwrap();
            let cw_short = shortened.encode_bits(&msg).unwrap();
            assert!(cw_parent[..6].iter().all(|&b| !b));
            assert_eq!(&cw_parent[6..], &cw_short[..]);
        }
    }

    #[test]
    fn extended_parity_bit_error_is_corrected() {
        let c = toy();
        let cw = c.encode(&pack(&vec![true; c.k()]));
        let mut word = cw.clone();
        crate::bits::flip_bit(&mut word, c.n() - 1);
        let out = c.bdd_decode(&word);
        assert_eq!(out.status, BddStatus::Corrected);
        assert_eq!(out.error_positions(), &[(c.n() - 1) as u16]);
    }

    #[test]
    fn failure_leaves_word_unchanged() {
        let c = toy();
        let codewords = reference::toy_codeword_set();
        let mut rng = StdRng::seed_from_u64(15);
        let mut seen_failure = false;
        for _ in 0..5000 {
            let w: u32 = rng.random();
            if reference::sphere_decode(w, &codewords, 2).is_none() {
                let word_bits: Vec<bool> = (0..32).map(|i| w >> i & 1 == 1).collect();
                let packed = pack(&word_bits);
                let out = c.bdd_decode(&packed);
                assert_eq!(out.status, BddStatus::Failure);
                assert_eq!(out.corrected_word(&packed), packed);
                seen_failure = true;
            }
        }
        assert!(seen_failure);
    }

    #[test]
    fn wrong_message_length_is_usage_error() {
        let c = toy();
        assert!(matches!(
            c.encode_bits(&vec![false; c.k() + 1]),
            Err(CodeError::Usage(_))
        ));
    }

    #[test]
    fn bit_ordering_convention() {
        // Message bit 0 is transmitted first; parity occupies the tail and
        // the extended bit is last.
        let c = toy();
        let mut msg = vec![false; c.k()];
        msg[0] = true;
        let cw = c.encode_bits(&msg).unwrap();
        assert!(cw[0]);
        assert_eq!(cw.len(), 32);
        // Full-parity accounting: total weight is even (extended code).
        assert_eq!(cw.iter().filter(|&&b| b).count() % 2, 0);
        let _ = get_bit(&pack(&cw), 31);
    }
}
