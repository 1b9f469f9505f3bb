//! Streaming staircase encoder and pair-row layout utilities.
//!
//! Blocks are w x w bit matrices chained so that every row of
//! [B_{i-1}^T B_i] is a component codeword: the first w message positions of
//! a row come from the previous block's column, the next w - p carry fresh
//! information bits, and the last p positions are component parity. Block
//! B_0 is all zeros.

use crate::bch::ComponentCode;
use crate::bits::{self, BitMatrix};
use crate::CodeError;

/// Staircase geometry derived from a component code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SccParams {
    /// Block side, n_c / 2.
    pub w: usize,
    /// Parity bits per component codeword, n_c - k_c.
    pub p: usize,
}

impl SccParams {
    pub fn for_code(code: &ComponentCode) -> Result<SccParams, CodeError> {
        if code.n() % 2 != 0 {
            return Err(CodeError::Parameter(format!(
                "staircase component length must be even, got {}",
                code.n()
            )));
        }
        let w = code.n() / 2;
        let p = code.n() - code.k();
        if p >= w {
            return Err(CodeError::Parameter(format!(
                "nonpositive staircase rate: p = {p} >= w = {w}"
            )));
        }
        Ok(SccParams { w, p })
    }

    /// Code rate 1 - p/w = 2 k_c / n_c - 1.
    pub fn rate(&self) -> f64 {
        1.0 - self.p as f64 / self.w as f64
    }

    /// Information bits consumed per encoded block.
    pub fn info_bits_per_block(&self) -> usize {
        self.w * (self.w - self.p)
    }

    pub fn pair_bits(&self) -> usize {
        2 * self.w
    }

    pub fn pair_words(&self) -> usize {
        bits::words_for(2 * self.w)
    }
}

/// Encodes the next block of the chain: row j of the result extends
/// (column j of `prev`, info row j) with component parity.
pub fn scc_encode_block(
    code: &ComponentCode,
    params: &SccParams,
    prev: &BitMatrix,
    info: &[u64],
) -> BitMatrix {
    let w = params.w;
    let info_cols = w - params.p;
    debug_assert_eq!(prev.size(), w);
    let mut block = BitMatrix::zero(w);
    let mut msg = vec![0u64; bits::words_for(code.k())];
    let mut cw = vec![0u64; code.word_len()];
    let mut row = vec![0u64; bits::words_for(w)];
    for j in 0..w {
        msg.fill(0);
        bits::copy_bits(&mut msg, 0, prev.col(j), 0, w);
        bits::copy_bits(&mut msg, w, info, j * info_cols, info_cols);
        code.encode_into(&msg, &mut cw);
        row.fill(0);
        bits::copy_bits(&mut row, 0, &cw, w, w);
        block.set_row(j, &row);
    }
    block
}

/// Streaming encoder state: holds the previous block of the chain.
#[derive(Debug, Clone)]
pub struct SccEncoder {
    params: SccParams,
    prev: BitMatrix,
    index: u64,
}

impl SccEncoder {
    pub fn new(params: SccParams) -> SccEncoder {
        SccEncoder {
            params,
            prev: BitMatrix::zero(params.w),
            index: 0,
        }
    }

    /// Encodes one block from packed information bits (w * (w - p) of them).
    pub fn encode_next(&mut self, code: &ComponentCode, info: &[u64]) -> BitMatrix {
        let block = scc_encode_block(code, &self.params, &self.prev, info);
        self.prev = block.clone();
        self.index += 1;
        block
    }

    /// Index of the next block to be produced (B_0 is the virtual zero block).
    pub fn next_index(&self) -> u64 {
        self.index + 1
    }
}

/// Assembles pair row j of [prev^T cur] into a packed buffer: bits 0..w are
/// prev's column j, bits w..2w are cur's row j.
pub fn assemble_pair_row(prev: &BitMatrix, cur: &BitMatrix, j: usize, buf: &mut [u64]) {
    let w = prev.size();
    buf.fill(0);
    bits::copy_bits(buf, 0, prev.col(j), 0, w);
    bits::copy_bits(buf, w, cur.row(j), 0, w);
}

/// Allocating variant of [`assemble_pair_row`] with an index check.
pub fn pair_row(prev: &BitMatrix, cur: &BitMatrix, j: usize) -> Result<Vec<u64>, CodeError> {
    let w = prev.size();
    if j >= w {
        return Err(CodeError::Usage(format!("row index {j} out of range 0..{w}")));
    }
    let mut buf = vec![0u64; bits::words_for(2 * w)];
    assemble_pair_row(prev, cur, j, &mut buf);
    Ok(buf)
}

/// Writes one in-pair bit flip back to the owning block: positions below w
/// address prev's column j, the rest address cur's row j.
#[inline]
pub fn apply_pair_flip(prev: &mut BitMatrix, cur: &mut BitMatrix, j: usize, pos: usize) {
    let w = prev.size();
    if pos < w {
        prev.flip(pos, j);
    } else {
        cur.flip(j, pos - w);
    }
}

/// Row-major bit serialization of a block, the transmit order.
pub fn block_bits_row_major(block: &BitMatrix) -> Vec<bool> {
    let w = block.size();
    let mut out = Vec::with_capacity(w * w);
    for r in 0..w {
        for c in 0..w {
            out.push(block.get(r, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::{ComponentCode, ComponentParams};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn toy() -> (ComponentCode, SccParams) {
        let code = ComponentCode::build(ComponentParams::new(5, 21, 2, 0, true)).unwrap();
        let params = SccParams::for_code(&code).unwrap();
        (code, params)
    }

    fn random_info(params: &SccParams, rng: &mut StdRng) -> Vec<u64> {
        let nbits = params.info_bits_per_block();
        let mut info = vec![0u64; crate::bits::words_for(nbits)];
        for w in info.iter_mut() {
            *w = rng.random();
        }
        if nbits % 64 != 0 {
            let last = info.len() - 1;
            info[last] &= (1u64 << (nbits % 64)) - 1;
        }
        info
    }

    #[test]
    fn paper_rate_values() {
        let code = ComponentCode::build(ComponentParams::new(8, 239, 2, 0, true)).unwrap();
        let p = SccParams::for_code(&code).unwrap();
        assert_eq!((p.w, p.p), (128, 17));
        assert!((p.rate() - (1.0 - 17.0 / 128.0)).abs() < 1e-12);
        assert!((p.rate() - 0.8672).abs() < 1e-4);

        let code = ComponentCode::build(ComponentParams::new(9, 493, 2, 284, true)).unwrap();
        let p = SccParams::for_code(&code).unwrap();
        assert_eq!((p.w, p.p), (114, 19));
        assert!((p.rate() - 0.8333).abs() < 1e-4);

        let code = ComponentCode::build(ComponentParams::new(9, 493, 2, 8, true)).unwrap();
        let p = SccParams::for_code(&code).unwrap();
        assert_eq!((p.w, p.p), (252, 19));
        assert!((p.rate() - 0.9246).abs() < 1e-4);
    }

    #[test]
    fn zero_info_encodes_to_zero_chain() {
        let (code, params) = toy();
        let mut enc = SccEncoder::new(params);
        let info = vec![0u64; crate::bits::words_for(params.info_bits_per_block())];
        for _ in 0..3 {
            let b = enc.encode_next(&code, &info);
            assert_eq!(b, BitMatrix::zero(params.w));
        }
    }

    #[test]
    fn chain_pair_rows_are_codewords() {
        let (code, params) = toy();
        let mut rng = StdRng::seed_from_u64(31);
        let mut enc = SccEncoder::new(params);
        let mut prev = BitMatrix::zero(params.w);
        for _ in 0..10 {
            let info = random_info(&params, &mut rng);
            let cur = enc.encode_next(&code, &info);
            for j in 0..params.w {
                let pr = pair_row(&prev, &cur, j).unwrap();
                assert!(code.is_codeword(&pr), "row {j} must have zero syndrome");
            }
            // Info bits sit in the leading w - p columns of the new block.
            for j in 0..params.w {
                for c in 0..(params.w - params.p) {
                    let want = crate::bits::get_bit(&info, j * (params.w - params.p) + c);
                    assert_eq!(cur.get(j, c), want);
                }
            }
            prev = cur;
        }
    }

    #[test]
    fn larger_code_chain_stays_valid() {
        let code = ComponentCode::build(ComponentParams::new(8, 239, 2, 0, true)).unwrap();
        let params = SccParams::for_code(&code).unwrap();
        let mut rng = StdRng::seed_from_u64(32);
        let mut enc = SccEncoder::new(params);
        let mut prev = BitMatrix::zero(params.w);
        for _ in 0..4 {
            let info = random_info(&params, &mut rng);
            let cur = enc.encode_next(&code, &info);
            for j in 0..params.w {
                let pr = pair_row(&prev, &cur, j).unwrap();
                assert!(code.is_codeword(&pr));
            }
            prev = cur;
        }
    }

    #[test]
    fn pair_row_addressing() {
        // Bit k < w of a pair row addresses prev[k][j]; bit w + i addresses
        // cur[j][i].
        let w = 16;
        let mut prev = BitMatrix::zero(w);
        let mut cur = BitMatrix::zero(w);
        prev.set(5, 3, true);
        cur.set(3, 9, true);
        let pr = pair_row(&prev, &cur, 3).unwrap();
        let ones: Vec<usize> = crate::bits::iter_ones(&pr).collect();
        assert_eq!(ones, vec![5, w + 9]);

        // Write-back path hits the same bits.
        let mut prev2 = BitMatrix::zero(w);
        let mut cur2 = BitMatrix::zero(w);
        apply_pair_flip(&mut prev2, &mut cur2, 3, 5);
        apply_pair_flip(&mut prev2, &mut cur2, 3, w + 9);
        assert_eq!(prev2, prev);
        assert_eq!(cur2, cur);
    }

    #[test]
    fn pair_row_index_check() {
        let b = BitMatrix::zero(8);
        assert!(pair_row(&b, &b, 8).is_err());
    }

    #[test]
    fn serialization_is_row_major() {
        let w = 8;
        let mut b = BitMatrix::zero(w);
        b.set(1, 2, true);
        let bits = block_bits_row_major(&b);
        assert!(bits[w + 2]);
        assert_eq!(bits.iter().filter(|&&x| x).count(), 1);
        // Round-trip through the byte serialization.
        let back = BitMatrix::from_bytes(w, &b.to_bytes()).unwrap();
        assert_eq!(back, b);
    }
}
