//! Square product codes over a component code, with standard iterative
//! row/column decoding and the marking-based variant.
//!
//! A product array is n x n with every row and column a component codeword.
//! One decoding iteration is a full row pass followed by a full column pass.
//! In the marking variant, marks cover the whole array (each row and each
//! column carries its own ranked HUB list) and the special handling is
//! limited to the first one and a half iterations:
//!
//! - rows of iteration 1: miscorrection detection by the HRB rule alone;
//! - columns of iteration 1 and rows of iteration 2: HRB rule plus a
//!   zero-syndrome conflict check against the crossing direction, whose
//!   cache is recomputed at the start of each pass;
//! - everything afterwards: plain standard decoding.
//!
//! Bit flips retry only decoding failures (single lowest-rank HUB); detected
//! miscorrections are rejected outright, restoring the line.

use crate::bch::{BddStatus, ComponentCode};
use crate::bits::{self, BitMatrix};
use crate::sabm::SabmConfig;
use crate::CodeError;

/// Decode policy for product arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcMode {
    Standard,
    Sabm,
}

impl PcMode {
    pub fn name(&self) -> &'static str {
        match self {
            PcMode::Standard => "standard",
            PcMode::Sabm => "sabm",
        }
    }
}

/// Whole-array marks: HRB bitmap plus per-row and per-column HUB rankings.
#[derive(Debug, Clone)]
pub struct PcMarks {
    row_words: usize,
    hrb: Vec<u64>,
    row_hubs: Vec<u16>,
    col_hubs: Vec<u16>,
    hub_count: usize,
}

const NO_HUB: u16 = u16::MAX;

impl PcMarks {
    /// Marks a full array from its row-major channel LLRs.
    pub fn mark(llrs: &[f64], n: usize, cfg: &SabmConfig) -> PcMarks {
        assert_eq!(llrs.len(), n * n);
        let row_words = bits::words_for(n);
        let mut hrb = vec![0u64; n * row_words];
        let mut row_hubs = vec![NO_HUB; n * cfg.hub_count];
        let mut col_hubs = vec![NO_HUB; n * cfg.hub_count];
        let mut cand: Vec<(f64, u16)> = Vec::with_capacity(n);
        for r in 0..n {
            cand.clear();
            for c in 0..n {
                let mag = llrs[r * n + c].abs();
                if mag > cfg.delta {
                    bits::set_bit(&mut hrb[r * row_words..(r + 1) * row_words], c, true);
                } else {
                    cand.push((mag, c as u16));
                }
            }
            cand.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (rank, &(_, c)) in cand.iter().take(cfg.hub_count).enumerate() {
                row_hubs[r * cfg.hub_count + rank] = c;
            }
        }
        for c in 0..n {
            cand.clear();
            for r in 0..n {
                let mag = llrs[r * n + c].abs();
                if mag <= cfg.delta {
                    cand.push((mag, r as u16));
                }
            }
            cand.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (rank, &(_, r)) in cand.iter().take(cfg.hub_count).enumerate() {
                col_hubs[c * cfg.hub_count + rank] = r;
            }
        }
        PcMarks {
            row_words,
            hrb,
            row_hubs,
            col_hubs,
            hub_count: cfg.hub_count,
        }
    }

    #[inline]
    pub fn is_hrb(&self, r: usize, c: usize) -> bool {
        bits::get_bit(&self.hrb[r * self.row_words..(r + 1) * self.row_words], c)
    }

    fn hubs(&self, store: &[u16], line: usize) -> Vec<u16> {
        store[line * self.hub_count..(line + 1) * self.hub_count]
            .iter()
            .copied()
            .take_while(|&c| c != NO_HUB)
            .collect()
    }

    pub fn row_hubs(&self, r: usize) -> Vec<u16> {
        self.hubs(&self.row_hubs, r)
    }

    pub fn col_hubs(&self, c: usize) -> Vec<u16> {
        self.hubs(&self.col_hubs, c)
    }
}

/// Counters for product decoding; same merge semantics as the window
/// decoder's.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PcCounters {
    pub bdd_calls: u64,
    pub corrections: u64,
    pub arrays: u64,
    pub md_flags: u64,
    pub bf_attempts: u64,
    pub bf_successes: u64,
    pub restores: u64,
    pub extra_bdd_calls: u64,
    pub audit_violations: u64,
}

impl PcCounters {
    pub fn merge(&mut self, other: &PcCounters) {
        self.bdd_calls += other.bdd_calls;
        self.corrections += other.corrections;
        self.arrays += other.arrays;
        self.md_flags += other.md_flags;
        self.bf_attempts += other.bf_attempts;
        self.bf_successes += other.bf_successes;
        self.restores += other.restores;
        self.extra_bdd_calls += other.extra_bdd_calls;
        self.audit_violations += other.audit_violations;
    }
}

/// Systematic product encode: info in the top-left k x k corner, row parity
/// to the right, column parity (including parity-of-parity) at the bottom.
pub fn pc_encode(code: &ComponentCode, info: &BitMatrix) -> Result<BitMatrix, CodeError> {
    let n = code.n();
    let k = code.k();
    if info.size() != k {
        return Err(CodeError::Usage(format!(
            "info must be {k} x {k}, got {}",
            info.size()
        )));
    }
    let mut arr = BitMatrix::zero(n);
    let mut msg = vec![0u64; bits::words_for(k)];
    let mut cw = vec![0u64; code.word_len()];
    for r in 0..k {
        msg.fill(0);
        bits::copy_bits(&mut msg, 0, info.row(r), 0, k);
        code.encode_into(&msg, &mut cw);
        arr.set_row(r, &cw[..bits::words_for(n)]);
    }
    for c in 0..n {
        msg.fill(0);
        bits::copy_bits(&mut msg, 0, arr.col(c), 0, k);
        code.encode_into(&msg, &mut cw);
        arr.set_col(c, &cw[..bits::words_for(n)]);
    }
    Ok(arr)
}

/// True iff all 2n component checks pass.
pub fn pc_is_valid(code: &ComponentCode, arr: &BitMatrix) -> bool {
    let n = code.n();
    (0..n).all(|r| code.is_codeword(arr.row(r))) && (0..n).all(|c| code.is_codeword(arr.col(c)))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pass {
    Rows,
    Cols,
}

/// Iterative product decode in place. `marks` must be provided in `Sabm`
/// mode and cover this array's channel LLRs.
pub fn pc_decode(
    code: &ComponentCode,
    arr: &mut BitMatrix,
    mode: PcMode,
    iterations: usize,
    marks: Option<&PcMarks>,
    counters: &mut PcCounters,
) {
    let n = code.n();
    let mut zs_cache = vec![0u64; bits::words_for(n)];
    let mut line = vec![0u64; code.word_len()];
    let mut snap = vec![0u64; code.word_len()];
    for it in 0..iterations {
        for pass in [Pass::Rows, Pass::Cols] {
            // Marking policy is active for rows(1), cols(1), rows(2); the
            // zero-syndrome conflict rule joins from cols(1) on.
            let sabm_active = mode == PcMode::Sabm
                && (it == 0 || (it == 1 && pass == Pass::Rows));
            let zs_active = sabm_active && !(it == 0 && pass == Pass::Rows);
            if zs_active {
                refresh_crossing_cache(code, arr, pass, &mut zs_cache, &mut line);
            }
            for i in 0..n {
                match pass {
                    Pass::Rows => line.copy_from_slice(arr.row(i)),
                    Pass::Cols => line.copy_from_slice(arr.col(i)),
                }
                if sabm_active {
                    decode_line_sabm(
                        code,
                        arr,
                        pass,
                        i,
                        marks.expect("sabm mode requires marks"),
                        zs_active.then_some(&zs_cache[..]),
                        &mut line,
                        &mut snap,
                        counters,
                    );
                } else {
                    counters.bdd_calls += 1;
                    let out = code.bdd_decode(&line);
                    if out.status == BddStatus::Corrected && out.weight() > 0 {
                        for &p in out.error_positions() {
                            flip_in_pass(arr, pass, i, p as usize);
                        }
                        counters.corrections += 1;
                    }
                }
            }
        }
    }
    counters.arrays += 1;
}

fn flip_in_pass(arr: &mut BitMatrix, pass: Pass, line: usize, pos: usize) {
    match pass {
        Pass::Rows => arr.flip(line, pos),
        Pass::Cols => arr.flip(pos, line),
    }
}

/// Caches which lines of the crossing direction currently have zero
/// syndrome: columns during a row pass, rows during a column pass.
fn refresh_crossing_cache(
    code: &ComponentCode,
    arr: &BitMatrix,
    pass: Pass,
    cache: &mut [u64],
    line: &mut [u64],
) {
    let n = code.n();
    cache.fill(0);
    for i in 0..n {
        match pass {
            Pass::Rows => line.copy_from_slice(arr.col(i)),
            Pass::Cols => line.copy_from_slice(arr.row(i)),
        }
        if code.is_codeword(line) {
            bits::set_bit(cache, i, true);
        }
    }
}

fn line_is_miscorrection(
    flips: &[u16],
    pass: Pass,
    line_idx: usize,
    marks: &PcMarks,
    zs_cache: Option<&[u64]>,
) -> bool {
    for &p in flips {
        let p = p as usize;
        let (r, c) = match pass {
            Pass::Rows => (line_idx, p),
            Pass::Cols => (p, line_idx),
        };
        if marks.is_hrb(r, c) {
            return true;
        }
        if let Some(zs) = zs_cache {
            // The crossing line through this bit: its column in a row pass,
            // its row in a column pass.
            if bits::get_bit(zs, p) {
                return true;
            }
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn decode_line_sabm(
    code: &ComponentCode,
    arr: &mut BitMatrix,
    pass: Pass,
    i: usize,
    marks: &PcMarks,
    zs_cache: Option<&[u64]>,
    line: &mut [u64],
    snap: &mut [u64],
    counters: &mut PcCounters,
) {
    snap.copy_from_slice(line);
    counters.bdd_calls += 1;
    let out = code.bdd_decode(line);
    match out.status {
        BddStatus::Corrected => {
            if !line_is_miscorrection(out.error_positions(), pass, i, marks, zs_cache) {
                for &p in out.error_positions() {
                    flip_in_pass(arr, pass, i, p as usize);
                }
                if out.weight() > 0 {
                    counters.corrections += 1;
                }
            } else {
                // Reject without bit flipping; the array is untouched.
                counters.md_flags += 1;
                counters.restores += 1;
            }
        }
        BddStatus::Failure => {
            let hubs = match pass {
                Pass::Rows => marks.row_hubs(i),
                Pass::Cols => marks.col_hubs(i),
            };
            let Some(&hub) = hubs.first() else {
                return;
            };
            counters.bf_attempts += 1;
            bits::flip_bit(line, hub as usize);
            counters.bdd_calls += 1;
            counters.extra_bdd_calls += 1;
            let out2 = code.bdd_decode(line);
            if out2.status == BddStatus::Corrected {
                out2.apply(line);
                let mut flips: Vec<u16> = Vec::with_capacity(8);
                for (wi, (a, b)) in snap.iter().zip(line.iter()).enumerate() {
                    let mut d = a ^ b;
                    while d != 0 {
                        flips.push((wi * 64 + d.trailing_zeros() as usize) as u16);
                        d &= d - 1;
                    }
                }
                if !line_is_miscorrection(&flips, pass, i, marks, zs_cache) {
                    for &p in &flips {
                        flip_in_pass(arr, pass, i, p as usize);
                    }
                    counters.bf_successes += 1;
                    counters.corrections += 1;
                    return;
                }
            }
            counters.restores += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::{ComponentCode, ComponentParams};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn toy() -> ComponentCode {
        ComponentCode::build(ComponentParams::new(5, 21, 2, 0, true)).unwrap()
    }

    fn random_info(k: usize, rng: &mut StdRng) -> BitMatrix {
        let mut m = BitMatrix::zero(k);
        for r in 0..k {
            for c in 0..k {
                if rng.random() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[test]
    fn zero_info_zero_array() {
        let code = toy();
        let arr = pc_encode(&code, &BitMatrix::zero(code.k())).unwrap();
        assert_eq!(arr, BitMatrix::zero(code.n()));
    }

    #[test]
    fn encoding_satisfies_all_checks() {
        let code = toy();
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..10 {
            let info = random_info(code.k(), &mut rng);
            let arr = pc_encode(&code, &info).unwrap();
            assert!(pc_is_valid(&code, &arr));
            // Systematic corner.
            for r in 0..code.k() {
                for c in 0..code.k() {
                    assert_eq!(arr.get(r, c), info.get(r, c));
                }
            }
        }
    }

    #[test]
    fn parity_of_parity_commutes() {
        // Column-encoding the row parities equals row-encoding the column
        // parities: encode rows first (as pc_encode does), then check that
        // every parity row is itself a codeword.
        let code = toy();
        let mut rng = StdRng::seed_from_u64(52);
        let info = random_info(code.k(), &mut rng);
        let arr = pc_encode(&code, &info).unwrap();
        for r in code.k()..code.n() {
            assert!(code.is_codeword(arr.row(r)), "parity row {r}");
        }
    }

    #[test]
    fn pc_rate_value() {
        let code = ComponentCode::build(ComponentParams::new(7, 113, 2, 0, true)).unwrap();
        let rate = (code.k() as f64 / code.n() as f64).powi(2);
        assert!((rate - 0.779).abs() < 5e-4, "rate {rate}");
    }

    #[test]
    fn noiseless_decode_counts_exactly() {
        let code = toy();
        let n = code.n();
        let mut rng = StdRng::seed_from_u64(53);
        let arr0 = pc_encode(&code, &random_info(code.k(), &mut rng)).unwrap();
        for mode in [PcMode::Standard, PcMode::Sabm] {
            let mut arr = arr0.clone();
            let marks = PcMarks::mark(&vec![50.0; n * n], n, &SabmConfig::new(10.0, 4));
            let mut counters = PcCounters::default();
            pc_decode(&code, &mut arr, mode, 3, Some(&marks), &mut counters);
            assert_eq!(arr, arr0);
            assert_eq!(counters.bdd_calls, (2 * n * 3) as u64);
            assert_eq!(counters.corrections, 0);
        }
    }

    #[test]
    fn single_error_corrected_in_first_row_pass() {
        let code = toy();
        let mut rng = StdRng::seed_from_u64(54);
        let clean = pc_encode(&code, &random_info(code.k(), &mut rng)).unwrap();
        let mut arr = clean.clone();
        arr.flip(5, 9);
        let mut counters = PcCounters::default();
        pc_decode(&code, &mut arr, PcMode::Standard, 1, None, &mut counters);
        assert_eq!(arr, clean);
        assert_eq!(counters.corrections, 1);
    }

    #[test]
    fn sabm_mode_corrects_scattered_errors() {
        let code = toy();
        let n = code.n();
        let mut rng = StdRng::seed_from_u64(55);
        let clean = pc_encode(&code, &random_info(code.k(), &mut rng)).unwrap();
        let mut arr = clean.clone();
        // Two errors in one row, two in one column, all at distinct lines.
        for (r, c) in [(2, 3), (2, 17), (9, 6), (21, 6)] {
            arr.flip(r, c);
        }
        // LLRs: mildly reliable everywhere, nothing marked HRB wrongly.
        let llrs = vec![5.0; n * n];
        let marks = PcMarks::mark(&llrs, n, &SabmConfig::new(10.0, 4));
        let mut counters = PcCounters::default();
        pc_decode(&code, &mut arr, PcMode::Sabm, 3, Some(&marks), &mut counters);
        assert_eq!(arr, clean);
    }

    #[test]
    fn info_size_checked() {
        let code = toy();
        assert!(pc_encode(&code, &BitMatrix::zero(code.k() + 1)).is_err());
    }
}
