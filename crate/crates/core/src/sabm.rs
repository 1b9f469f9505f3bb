//! Soft-aided bit marking: LLR-derived marks, miscorrection detection and
//! bit-flip retries for the last pair of a staircase decoding window.
//!
//! Marks are computed once from channel LLRs when a block enters the window
//! and are never updated afterwards; only the newest block carries marks. A
//! bit is a highly reliable bit (HRB) when |llr| > delta. Per block row, the
//! `hub_count` non-HRB bits with the smallest |llr| are highly unreliable
//! bits (HUBs), ranked ascending (rank 0 = least reliable, ties broken
//! toward the lower column index).
//!
//! Decoding a last-pair row calls the component BDD at most twice: once on
//! the received row and, after a decoding failure or a detected
//! miscorrection, once more on a bit-flipped retry. A retry is accepted only
//! if it decodes successfully *and* passes miscorrection detection again;
//! otherwise the row is restored bit-exactly.

use crate::bch::{BddStatus, ComponentCode};
use crate::bits;

/// SABM tuning: the HRB threshold and the number of ranked HUBs per row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SabmConfig {
    /// |llr| threshold above which a bit is marked HRB.
    pub delta: f64,
    /// HUBs marked (and sorted) per component row; t + 2 covers the worst
    /// miscorrection retry for extended codes.
    pub hub_count: usize,
}

impl SabmConfig {
    pub fn new(delta: f64, hub_count: usize) -> SabmConfig {
        assert!(delta > 0.0, "delta must be positive");
        SabmConfig { delta, hub_count }
    }

    /// Default configuration for a component code: hub_count = t + 2.
    pub fn for_code(code: &ComponentCode, delta: f64) -> SabmConfig {
        SabmConfig::new(delta, code.t() + 2)
    }
}

/// Mark of one bit in the newest block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitMark {
    Hrb,
    /// Ascending |llr| rank among the row's HUBs; 0 is the least reliable.
    Hub(u8),
    Unmarked,
}

/// Per-bit marks for the newest window block: an HRB bitmap plus the ranked
/// HUB column list of every row.
#[derive(Debug, Clone)]
pub struct MarkedBlock {
    w: usize,
    row_words: usize,
    hrb: Vec<u64>,
    /// hubs[row * hub_count + rank] = column, u16::MAX past the row's count.
    hubs: Vec<u16>,
    hub_count: usize,
}

const NO_HUB: u16 = u16::MAX;

impl MarkedBlock {
    /// Marks a block from its row-major channel LLRs.
    pub fn mark(llrs: &[f64], w: usize, cfg: &SabmConfig) -> MarkedBlock {
        assert_eq!(llrs.len(), w * w);
        let row_words = bits::words_for(w);
        let mut hrb = vec![0u64; w * row_words];
        let mut hubs = vec![NO_HUB; w * cfg.hub_count];
        let mut cand: Vec<(f64, u16)> = Vec::with_capacity(w);
        for r in 0..w {
            cand.clear();
            for c in 0..w {
                let mag = llrs[r * w + c].abs();
                if mag > cfg.delta {
                    bits::set_bit(&mut hrb[r * row_words..(r + 1) * row_words], c, true);
                } else {
                    cand.push((mag, c as u16));
                }
            }
            cand.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (rank, &(_, c)) in cand.iter().take(cfg.hub_count).enumerate() {
                hubs[r * cfg.hub_count + rank] = c;
            }
        }
        MarkedBlock {
            w,
            row_words,
            hrb,
            hubs,
            hub_count: cfg.hub_count,
        }
    }

    pub fn size(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn is_hrb(&self, row: usize, col: usize) -> bool {
        bits::get_bit(&self.hrb[row * self.row_words..(row + 1) * self.row_words], col)
    }

    /// Ranked HUB columns of a row, least reliable first.
    pub fn hubs(&self, row: usize) -> &[u16] {
        let all = &self.hubs[row * self.hub_count..(row + 1) * self.hub_count];
        let n = all.iter().position(|&c| c == NO_HUB).unwrap_or(self.hub_count);
        &all[..n]
    }

    pub fn mark_of(&self, row: usize, col: usize) -> BitMark {
        if self.is_hrb(row, col) {
            return BitMark::Hrb;
        }
        match self.hubs(row).iter().position(|&c| c as usize == col) {
            Some(rank) => BitMark::Hub(rank as u8),
            None => BitMark::Unmarked,
        }
    }
}

/// An all-unmarked stand-in for modes that decode without soft information.
pub fn unmarked(w: usize) -> MarkedBlock {
    MarkedBlock {
        w,
        row_words: bits::words_for(w),
        hrb: vec![0; w * bits::words_for(w)],
        hubs: vec![NO_HUB; w],
        hub_count: 1,
    }
}

/// Miscorrection detection for a candidate flip set of last-pair row `row`:
/// flags the outcome when a first-half flip lands in a row of the previous
/// pair whose cached syndrome is zero, or when a second-half flip hits an
/// HRB of the newest block. An empty flip set always passes (the known
/// blind spot when the received row already is a wrong codeword).
#[inline]
pub fn detect_miscorrection(
    flips: &[u16],
    w: usize,
    row: usize,
    zero_syndrome_rows: &[u64],
    marks: &MarkedBlock,
) -> bool {
    for &p in flips {
        let p = p as usize;
        if p < w {
            if bits::get_bit(zero_syndrome_rows, p) {
                return true;
            }
        } else if marks.is_hrb(row, p - w) {
            return true;
        }
    }
    false
}

/// Flip for a decoding failure: the row's rank-0 HUB, if any. Returns the
/// flipped in-pair position, or `None` for the degenerate no-HUB case.
pub fn bit_flip_failure(word: &mut [u64], w: usize, marks: &MarkedBlock, row: usize) -> Option<u16> {
    let hubs = marks.hubs(row);
    let col = *hubs.first()?;
    bits::flip_bit(word, w + col as usize);
    Some(w as u16 + col)
}

/// Flip for a detected miscorrection: the `d0 - weight(e) - t` lowest-rank
/// HUBs. Returns the number of bits flipped; 0 means no-flip (the formula
/// came out nonpositive or the row has too few HUBs).
pub fn bit_flip_miscorrection(
    word: &mut [u64],
    w: usize,
    marks: &MarkedBlock,
    row: usize,
    err_weight: usize,
    d0: usize,
    t: usize,
) -> usize {
    let k = d0 as isize - err_weight as isize - t as isize;
    if k < 1 {
        return 0;
    }
    let k = k as usize;
    let hubs = marks.hubs(row);
    if hubs.len() < k {
        return 0;
    }
    for &col in &hubs[..k] {
        bits::flip_bit(word, w + col as usize);
    }
    k
}

/// Which retry path a row took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfKind {
    Failure,
    Miscorrection,
}

/// Outcome of one SABM row decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SabmRowOutcome {
    /// Word left holding an accepted codeword (possibly unchanged).
    pub accepted: bool,
    /// BDD invocations used (1 or 2).
    pub calls: u8,
    /// First decode was flagged as a miscorrection.
    pub md_flagged: bool,
    pub bf: Option<BfKind>,
    /// Word was restored to its input state after a rejected retry.
    pub restored: bool,
}

/// Decodes one row of the last window pair in place, per the marking flow:
/// BDD, then miscorrection detection on success or a HUB flip on failure,
/// then at most one BDD retry guarded by the same final checks.
///
/// `scratch` must hold at least `word.len()` words; it carries the
/// pre-decode snapshot used for restores.
pub fn sabm_decode_row(
    code: &ComponentCode,
    word: &mut [u64],
    w: usize,
    row: usize,
    marks: &MarkedBlock,
    zero_syndrome_rows: &[u64],
    scratch: &mut [u64],
) -> SabmRowOutcome {
    let nw = word.len();
    let (snapshot, _) = scratch.split_at_mut(nw);
    snapshot.copy_from_slice(word);

    let out1 = code.bdd_decode(word);
    let mut res = SabmRowOutcome {
        accepted: false,
        calls: 1,
        md_flagged: false,
        bf: None,
        restored: false,
    };

    match out1.status {
        BddStatus::Corrected => {
            if !detect_miscorrection(out1.error_positions(), w, row, zero_syndrome_rows, marks) {
                out1.apply(word);
                res.accepted = true;
                return res;
            }
            res.md_flagged = true;
            let flipped =
                bit_flip_miscorrection(word, w, marks, row, out1.weight(), code.d0(), code.t());
            if flipped == 0 {
                // Reject without retry; the word is untouched.
                return res;
            }
            res.bf = Some(BfKind::Miscorrection);
        }
        BddStatus::Failure => {
            if bit_flip_failure(word, w, marks, row).is_none() {
                return res;
            }
            res.bf = Some(BfKind::Failure);
        }
    }

    // Retry on the flipped word, then re-run both final checks against the
    // original row content.
    let out2 = code.bdd_decode(word);
    res.calls = 2;
    if out2.status == BddStatus::Corrected {
        out2.apply(word);
        let mut flips = [0u16; 8];
        let mut nf = 0usize;
        for (i, (a, b)) in snapshot.iter().zip(word.iter()).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                let bit = x.trailing_zeros() as usize;
                if nf < flips.len() {
                    flips[nf] = (i * 64 + bit) as u16;
                }
                nf += 1;
                x &= x - 1;
            }
        }
        if nf <= flips.len()
            && !detect_miscorrection(&flips[..nf], w, row, zero_syndrome_rows, marks)
        {
            res.accepted = true;
            return res;
        }
    }
    word.copy_from_slice(snapshot);
    res.restored = true;
    res
}
