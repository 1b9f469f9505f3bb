//! Sliding-window iterative staircase decoder.
//!
//! The window holds L hard-decision blocks. One decoding position runs up to
//! `iterations` sweeps; a sweep decodes block pairs from the bottom right to
//! the top left (s = L-1 down to 1), one component row at a time. After the
//! sweeps, the oldest block leaves the window and a fresh one enters.
//!
//! Acceptance policy per mode:
//!
//! - `Standard`: every successful BDD outcome is applied, miscorrections
//!   included.
//! - `Sabm`: pairs below the last behave as `Standard`; the last pair runs
//!   the marking flow from [`crate::sabm`] against the newest block's marks
//!   and a zero-syndrome cache of the previous pair, refreshed at the start
//!   of the last-pair decode in every sweep.
//! - `GenieMcFree`: every pair uses the miscorrection-free truth decoder.
//! - `GenieSabmBound`: pairs below the last behave as `Standard`; the last
//!   pair uses the idealized bound policy from [`crate::genie`].
//!
//! Call accounting: the BDD-call counter increments once per component
//! decode invocation (genie policies count one call per row; the bound's
//! internal classification decode is not billed separately). Zero-syndrome
//! cache refreshes are bookkeeping, not decoder calls.

use crate::bch::{BddStatus, ComponentCode};
use crate::bits::{self, BitMatrix};
use crate::genie::{self, GenieBoundDecision};
use crate::sabm::{self, BfKind, MarkedBlock};
use crate::staircase::{self, SccParams};
use crate::CodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    Standard,
    Sabm,
    GenieMcFree,
    GenieSabmBound,
}

impl DecodeMode {
    pub fn name(&self) -> &'static str {
        match self {
            DecodeMode::Standard => "standard",
            DecodeMode::Sabm => "sabm",
            DecodeMode::GenieMcFree => "genie_mcfree",
            DecodeMode::GenieSabmBound => "genie_sabm_bound",
        }
    }

    pub fn parse(s: &str) -> Result<DecodeMode, CodeError> {
        match s {
            "standard" => Ok(DecodeMode::Standard),
            "sabm" => Ok(DecodeMode::Sabm),
            "genie_mcfree" | "genie-mcfree" => Ok(DecodeMode::GenieMcFree),
            "genie_sabm_bound" | "genie-sabm-bound" => Ok(DecodeMode::GenieSabmBound),
            other => Err(CodeError::Usage(format!("unknown mode '{other}'"))),
        }
    }

    pub fn needs_truth(&self) -> bool {
        matches!(self, DecodeMode::GenieMcFree | DecodeMode::GenieSabmBound)
    }

    pub fn needs_marks(&self) -> bool {
        matches!(self, DecodeMode::Sabm)
    }
}

/// Cumulative decoder statistics. Counters merge by addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WindowCounters {
    /// Component decoder invocations.
    pub bdd_calls: u64,
    /// Accepted outcomes that changed at least one bit.
    pub corrections: u64,
    /// Window positions decoded.
    pub positions: u64,
    /// BDD calls spent on the most recent position.
    pub last_position_calls: u64,
    /// Rows processed by the marking policy (last pair, Sabm mode).
    pub sabm_rows: u64,
    pub md_flags: u64,
    pub bf_failure_attempts: u64,
    pub bf_misc_attempts: u64,
    pub bf_successes: u64,
    pub restores: u64,
    /// Second BDD calls beyond the one-per-row baseline.
    pub extra_bdd_calls: u64,
    /// Structural invariant failures observed by the built-in audit
    /// (call bound, HRB/zero-syndrome conservation, bit-exact restore).
    pub audit_violations: u64,
}

impl WindowCounters {
    pub fn merge(&mut self, other: &WindowCounters) {
        self.bdd_calls += other.bdd_calls;
        self.corrections += other.corrections;
        self.positions += other.positions;
        self.last_position_calls = other.last_position_calls;
        self.sabm_rows += other.sabm_rows;
        self.md_flags += other.md_flags;
        self.bf_failure_attempts += other.bf_failure_attempts;
        self.bf_misc_attempts += other.bf_misc_attempts;
        self.bf_successes += other.bf_successes;
        self.restores += other.restores;
        self.extra_bdd_calls += other.extra_bdd_calls;
        self.audit_violations += other.audit_violations;
    }
}

/// The L-block sliding decoder state.
#[derive(Debug)]
pub struct DecodingWindow {
    params: SccParams,
    window_len: usize,
    iterations: usize,
    mode: DecodeMode,
    early_exit: bool,
    blocks: Vec<BitMatrix>,
    truth: Option<Vec<BitMatrix>>,
    marks: Option<MarkedBlock>,
    zs_cache: Vec<u64>,
    counters: WindowCounters,
    pair_buf: Vec<u64>,
    truth_buf: Vec<u64>,
    snap_buf: Vec<u64>,
    scratch: Vec<u64>,
    diff_buf: Vec<u16>,
}

impl DecodingWindow {
    pub fn new(
        params: SccParams,
        window_len: usize,
        iterations: usize,
        mode: DecodeMode,
        early_exit: bool,
    ) -> Result<DecodingWindow, CodeError> {
        if window_len < 2 {
            return Err(CodeError::Parameter(format!(
                "window length L = {window_len} must be at least 2"
            )));
        }
        if iterations < 1 {
            return Err(CodeError::Parameter("iterations must be at least 1".into()));
        }
        let w = params.w;
        let pw = params.pair_words();
        Ok(DecodingWindow {
            params,
            window_len,
            iterations,
            mode,
            early_exit,
            blocks: (0..window_len).map(|_| BitMatrix::zero(w)).collect(),
            truth: mode
                .needs_truth()
                .then(|| (0..window_len).map(|_| BitMatrix::zero(w)).collect()),
            marks: None,
            zs_cache: vec![0u64; bits::words_for(w)],
            counters: WindowCounters::default(),
            pair_buf: vec![0u64; pw],
            truth_buf: vec![0u64; pw],
            snap_buf: vec![0u64; pw],
            scratch: vec![0u64; pw],
            diff_buf: Vec::with_capacity(16),
        })
    }

    pub fn counters(&self) -> &WindowCounters {
        &self.counters
    }

    pub fn mode(&self) -> DecodeMode {
        self.mode
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Current content of window slot `i` (0 = oldest).
    pub fn block(&self, i: usize) -> &BitMatrix {
        &self.blocks[i]
    }

    /// Shifts in a fresh hard-decision block (with its marks, and its truth
    /// for genie modes), decodes the resulting window for `iterations`
    /// sweeps, and returns the block that left the window.
    ///
    /// Bits of an emitted block are frozen: nothing written after emission.
    pub fn advance(
        &mut self,
        code: &ComponentCode,
        incoming: BitMatrix,
        marks: Option<MarkedBlock>,
        truth: Option<BitMatrix>,
    ) -> BitMatrix {
        debug_assert_eq!(incoming.size(), self.params.w);
        let emitted = self.blocks.remove(0);
        self.blocks.push(incoming);
        if let Some(tr) = self.truth.as_mut() {
            tr.remove(0);
            tr.push(truth.expect("genie modes require the transmitted block"));
        }
        if self.mode.needs_marks() {
            self.marks = Some(marks.expect("sabm mode requires marks for the incoming block"));
        }

        let calls_before = self.counters.bdd_calls;
        for _ in 0..self.iterations {
            let changed = self.window_iterate(code);
            if self.early_exit && changed == 0 {
                break;
            }
        }
        self.counters.positions += 1;
        self.counters.last_position_calls = self.counters.bdd_calls - calls_before;
        emitted
    }

    /// One full sweep over the pairs, bottom right to top left. Returns the
    /// number of bits changed.
    pub fn window_iterate(&mut self, code: &ComponentCode) -> u64 {
        let l = self.window_len;
        let mut changed = 0u64;
        for s in (1..l).rev() {
            changed += match self.mode {
                DecodeMode::Standard => self.decode_pair_standard(code, s),
                DecodeMode::GenieMcFree => self.decode_pair_mcfree(code, s),
                DecodeMode::Sabm => {
                    if s == l - 1 {
                        self.refresh_zero_syndrome_cache(code);
                        self.decode_pair_sabm(code)
                    } else {
                        self.decode_pair_standard(code, s)
                    }
                }
                DecodeMode::GenieSabmBound => {
                    if s == l - 1 {
                        self.decode_pair_genie_bound(code)
                    } else {
                        self.decode_pair_standard(code, s)
                    }
                }
            };
        }
        changed
    }

    fn decode_pair_standard(&mut self, code: &ComponentCode, s: usize) -> u64 {
        let w = self.params.w;
        let (left, right) = self.blocks.split_at_mut(s);
        let prev = &mut left[s - 1];
        let cur = &mut right[0];
        let mut changed = 0u64;
        for j in 0..w {
            staircase::assemble_pair_row(prev, cur, j, &mut self.pair_buf);
            self.counters.bdd_calls += 1;
            let out = code.bdd_decode(&self.pair_buf);
            if out.status == BddStatus::Corrected && out.weight() > 0 {
                for &p in out.error_positions() {
                    staircase::apply_pair_flip(prev, cur, j, p as usize);
                }
                self.counters.corrections += 1;
                changed += out.weight() as u64;
            }
        }
        changed
    }

    fn decode_pair_mcfree(&mut self, code: &ComponentCode, s: usize) -> u64 {
        let w = self.params.w;
        let truth = self.truth.as_ref().expect("mcfree needs truth");
        let (left, right) = self.blocks.split_at_mut(s);
        let prev = &mut left[s - 1];
        let cur = &mut right[0];
        let mut changed = 0u64;
        for j in 0..w {
            staircase::assemble_pair_row(prev, cur, j, &mut self.pair_buf);
            staircase::assemble_pair_row(&truth[s - 1], &truth[s], j, &mut self.truth_buf);
            self.counters.bdd_calls += 1;
            let out = genie::genie_bdd_mcfree(&self.pair_buf, &self.truth_buf, code.t());
            if out.status == BddStatus::Corrected && out.weight() > 0 {
                for &p in out.error_positions() {
                    staircase::apply_pair_flip(prev, cur, j, p as usize);
                }
                self.counters.corrections += 1;
                changed += out.weight() as u64;
            }
        }
        changed
    }

    /// Records which rows of pair L-2 currently hold zero syndrome; rule (a)
    /// of miscorrection detection consults this snapshot.
    fn refresh_zero_syndrome_cache(&mut self, code: &ComponentCode) {
        self.zs_cache.fill(0);
        let l = self.window_len;
        if l < 3 {
            return;
        }
        let w = self.params.w;
        let prev = &self.blocks[l - 3];
        let cur = &self.blocks[l - 2];
        for k in 0..w {
            staircase::assemble_pair_row(prev, cur, k, &mut self.pair_buf);
            if code.is_codeword(&self.pair_buf) {
                bits::set_bit(&mut self.zs_cache, k, true);
            }
        }
    }

    fn decode_pair_sabm(&mut self, code: &ComponentCode) -> u64 {
        let l = self.window_len;
        let w = self.params.w;
        let (left, right) = self.blocks.split_at_mut(l - 1);
        let prev = &mut left[l - 2];
        let cur = &mut right[0];
        let marks = self.marks.as_ref().expect("sabm needs marks");
        let mut changed = 0u64;
        for j in 0..w {
            staircase::assemble_pair_row(prev, cur, j, &mut self.pair_buf);
            self.snap_buf.copy_from_slice(&self.pair_buf);
            let out = sabm::sabm_decode_row(
                code,
                &mut self.pair_buf,
                w,
                j,
                marks,
                &self.zs_cache,
                &mut self.scratch,
            );
            self.counters.sabm_rows += 1;
            self.counters.bdd_calls += u64::from(out.calls);
            self.counters.extra_bdd_calls += u64::from(out.calls.saturating_sub(1));
            if out.md_flagged {
                self.counters.md_flags += 1;
            }
            match out.bf {
                Some(BfKind::Failure) => self.counters.bf_failure_attempts += 1,
                Some(BfKind::Miscorrection) => self.counters.bf_misc_attempts += 1,
                None => {}
            }
            if out.restored {
                self.counters.restores += 1;
            }

            // Built-in audit of the structural invariants.
            self.diff_buf.clear();
            diff_positions(&self.snap_buf, &self.pair_buf, &mut self.diff_buf);
            if !(1..=2).contains(&out.calls) {
                self.counters.audit_violations += 1;
            }
            if out.accepted {
                if out.bf.is_some() {
                    self.counters.bf_successes += 1;
                }
                for &p in self.diff_buf.iter() {
                    let p = p as usize;
                    let violation = if p < w {
                        bits::get_bit(&self.zs_cache, p)
                    } else {
                        marks.is_hrb(j, p - w)
                    };
                    if violation {
                        self.counters.audit_violations += 1;
                    }
                }
                if !self.diff_buf.is_empty() {
                    for &p in self.diff_buf.iter() {
                        staircase::apply_pair_flip(prev, cur, j, p as usize);
                    }
                    self.counters.corrections += 1;
                    changed += self.diff_buf.len() as u64;
                }
            } else if !self.diff_buf.is_empty() {
                // Rejected rows must be bit-identical to their prior state.
                self.counters.audit_violations += 1;
            }
        }
        changed
    }

    fn decode_pair_genie_bound(&mut self, code: &ComponentCode) -> u64 {
        let l = self.window_len;
        let w = self.params.w;
        let truth = self.truth.as_ref().expect("genie bound needs truth");
        let (left, right) = self.blocks.split_at_mut(l - 1);
        let prev = &mut left[l - 2];
        let cur = &mut right[0];
        let mut changed = 0u64;
        for j in 0..w {
            staircase::assemble_pair_row(prev, cur, j, &mut self.pair_buf);
            staircase::assemble_pair_row(&truth[l - 2], &truth[l - 1], j, &mut self.truth_buf);
            self.counters.bdd_calls += 1;
            match genie::genie_sabm_bound_row(code, &self.pair_buf, &self.truth_buf, w) {
                GenieBoundDecision::CorrectAll => {
                    self.diff_buf.clear();
                    diff_positions(&self.pair_buf, &self.truth_buf, &mut self.diff_buf);
                    if !self.diff_buf.is_empty() {
                        for &p in self.diff_buf.iter() {
                            staircase::apply_pair_flip(prev, cur, j, p as usize);
                        }
                        self.counters.corrections += 1;
                        changed += self.diff_buf.len() as u64;
                    }
                }
                GenieBoundDecision::Fail => {}
            }
        }
        changed
    }
}

fn diff_positions(a: &[u64], b: &[u64], out: &mut Vec<u16>) {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let mut d = x ^ y;
        while d != 0 {
            out.push((i * 64 + d.trailing_zeros() as usize) as u16);
            d &= d - 1;
        }
    }
}

/// Runs a window decoder over a block sequence, returning one emitted block
/// per input. The first L emissions are the zero-block prehistory; to drain
/// the last real blocks, feed L trailing flush blocks that continue the
/// chain (for example encoder output for all-zero information bits).
pub fn decode_stream<I>(
    code: &ComponentCode,
    params: SccParams,
    mode: DecodeMode,
    window_len: usize,
    iterations: usize,
    inputs: I,
) -> Result<(Vec<BitMatrix>, WindowCounters), CodeError>
where
    I: IntoIterator<Item = (BitMatrix, Option<MarkedBlock>, Option<BitMatrix>)>,
{
    let mut win = DecodingWindow::new(params, window_len, iterations, mode, false)?;
    let mut out = Vec::new();
    for (block, marks, truth) in inputs {
        out.push(win.advance(code, block, marks, truth));
    }
    Ok((out, *win.counters()))
}
