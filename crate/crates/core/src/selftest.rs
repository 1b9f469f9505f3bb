//! Built-in self-test: cross-checks the fast decode paths against the naive
//! reference implementations on the toy code, plus a handful of exact
//! bookkeeping laws. Used by `sabm-sim selftest` and the test suite.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bch::{BddStatus, ComponentCode, ComponentParams};
use crate::bits::{self, BitMatrix};
use crate::metrics;
use crate::reference;
use crate::staircase::{self, SccEncoder, SccParams};
use crate::window::{DecodeMode, DecodingWindow};

#[derive(Debug, Clone)]
pub struct SelftestResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Toy-code parameters used throughout the self-test.
pub fn toy_params() -> ComponentParams {
    ComponentParams::new(5, 21, 2, 0, true)
}

/// BDD vs. exhaustive sphere search on `n_words` random 32-bit words:
/// status, decoded codeword and error set must all agree.
pub fn bdd_oracle_equivalence(n_words: u64, seed: u64) -> SelftestResult {
    let code = ComponentCode::build(toy_params()).expect("toy code");
    let codebook = reference::toy_codeword_set();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut mismatches = 0u64;
    let mut corrected = 0u64;
    let mut failures = 0u64;
    for _ in 0..n_words {
        let word_u32: u32 = rng.random();
        let mut word = vec![0u64; code.word_len()];
        word[0] = word_u32 as u64;
        let out = code.bdd_decode(&word);
        match reference::sphere_decode(word_u32, &codebook, code.t() as u32) {
            Some(cw) => {
                corrected += 1;
                let mut fixed = word_u32;
                for &p in out.error_positions() {
                    fixed ^= 1 << p;
                }
                if out.status != BddStatus::Corrected || fixed != cw {
                    mismatches += 1;
                }
            }
            None => {
                failures += 1;
                if out.status != BddStatus::Failure || !out.error_positions().is_empty() {
                    mismatches += 1;
                }
            }
        }
    }
    SelftestResult {
        name: "bdd_oracle_equivalence",
        pass: mismatches == 0,
        detail: format!(
            "{n_words} words, {corrected} in-sphere, {failures} failures, {mismatches} mismatches"
        ),
    }
}

/// Ten random chain blocks: every pair row must have zero syndrome and the
/// byte serialization must round-trip.
pub fn staircase_validity(seed: u64) -> SelftestResult {
    let code = ComponentCode::build(toy_params()).expect("toy code");
    let params = SccParams::for_code(&code).expect("toy staircase");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut enc = SccEncoder::new(params);
    let mut prev = BitMatrix::zero(params.w);
    let mut violations = 0u64;
    for _ in 0..10 {
        let nbits = params.info_bits_per_block();
        let mut info = vec![0u64; bits::words_for(nbits)];
        for w in info.iter_mut() {
            *w = rng.random();
        }
        if nbits % 64 != 0 {
            let last = info.len() - 1;
            info[last] &= (1u64 << (nbits % 64)) - 1;
        }
        let cur = enc.encode_next(&code, &info);
        for j in 0..params.w {
            let row = staircase::pair_row(&prev, &cur, j).expect("index in range");
            if !code.is_codeword(&row) {
                violations += 1;
            }
        }
        if BitMatrix::from_bytes(params.w, &cur.to_bytes()).as_ref() != Some(&cur) {
            violations += 1;
        }
        prev = cur;
    }
    SelftestResult {
        name: "staircase_validity",
        pass: violations == 0,
        detail: format!("10 blocks, {violations} violations"),
    }
}

/// Error-floor formulas against direct exact-combinatorics evaluation.
pub fn error_floor_check() -> SelftestResult {
    let mut worst: f64 = 0.0;
    for w in [128u64, 256, 512] {
        for ber in [1e-2, 1e-3] {
            let scc = metrics::error_floor_scc(w, 2, ber).expect("domain");
            let scc_ref =
                reference::error_floor_direct(w, 2, reference::stall_multiplicity_scc(w, 2), ber);
            worst = worst.max((scc - scc_ref).abs() / scc_ref);
            let pc = metrics::error_floor_pc(w, 2, ber).expect("domain");
            let pc_ref =
                reference::error_floor_direct(w, 2, reference::stall_multiplicity_pc(w, 2), ber);
            worst = worst.max((pc - pc_ref).abs() / pc_ref);
        }
    }
    SelftestResult {
        name: "error_floor_formulas",
        pass: worst < 1e-12,
        detail: format!("worst relative deviation {worst:.3e}"),
    }
}

/// Standard-decoder call law on a noiseless toy window.
pub fn call_count_law() -> SelftestResult {
    let code = ComponentCode::build(toy_params()).expect("toy code");
    let params = SccParams::for_code(&code).expect("toy staircase");
    let (l, iters) = (9usize, 7usize);
    let mut win =
        DecodingWindow::new(params, l, iters, DecodeMode::Standard, false).expect("window");
    let _ = win.advance(&code, BitMatrix::zero(params.w), None, None);
    let got = win.counters().last_position_calls;
    let want = metrics::n_sd(params.w as u64, l as u64, iters as u64);
    SelftestResult {
        name: "call_count_law",
        pass: got == want,
        detail: format!("{got} calls per position, law {want}"),
    }
}

/// Runs the whole suite. `quick` trims the oracle word count.
pub fn run_all(quick: bool) -> Vec<SelftestResult> {
    let words = if quick { 20_000 } else { 100_000 };
    vec![
        bdd_oracle_equivalence(words, 0xC0DE),
        staircase_validity(0x5CC),
        error_floor_check(),
        call_count_law(),
    ]
}
