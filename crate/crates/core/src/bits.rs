//! Packed-bit utilities and the square bit matrix used for code blocks.
//!
//! Bits are packed LSB-first into `u64` words: bit `i` lives in word `i / 64`
//! at position `i % 64`. On-disk serialization uses a different convention
//! (row-major, MSB-first within bytes, see [`BitMatrix::to_bytes`]).

/// Number of `u64` words needed to hold `nbits` bits.
pub fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(64)
}

#[inline]
pub fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
pub fn set_bit(words: &mut [u64], i: usize, v: bool) {
    let (w, b) = (i / 64, i % 64);
    if v {
        words[w] |= 1 << b;
    } else {
        words[w] &= !(1 << b);
    }
}

#[inline]
pub fn flip_bit(words: &mut [u64], i: usize) {
    words[i / 64] ^= 1 << (i % 64);
}

/// Population count over a packed word slice.
pub fn count_ones(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

/// Iterates the indices of set bits in ascending order.
pub fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        std::iter::successors(
            if w == 0 { None } else { Some(w) },
            |&rem| {
                let next = rem & (rem - 1);
                if next == 0 {
                    None
                } else {
                    Some(next)
                }
            },
        )
        .map(move |rem| wi * 64 + rem.trailing_zeros() as usize)
    })
}

/// Hamming distance between two packed words of equal layout.
pub fn xor_weight(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Copies `len` bits from `src` starting at `src_off` into `dst` starting at
/// `dst_off`. Destination bits must be clear beforehand.
pub fn copy_bits(dst: &mut [u64], dst_off: usize, src: &[u64], src_off: usize, len: usize) {
    // Word-aligned fast path for the common staircase layouts.
    if dst_off % 64 == 0 && src_off % 64 == 0 {
        let full = len / 64;
        let (dw, sw) = (dst_off / 64, src_off / 64);
        dst[dw..dw + full].copy_from_slice(&src[sw..sw + full]);
        for i in full * 64..len {
            if get_bit(src, src_off + i) {
                set_bit(dst, dst_off + i, true);
            }
        }
        return;
    }
    for i in 0..len {
        if get_bit(src, src_off + i) {
            set_bit(dst, dst_off + i, true);
        }
    }
}

/// Converts a bool slice to packed words.
pub fn pack(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Expands packed words to a bool vector of length `nbits`.
pub fn unpack(words: &[u64], nbits: usize) -> Vec<bool> {
    (0..nbits).map(|i| get_bit(words, i)).collect()
}

/// A `w x w` binary matrix kept in both row-major and column-major packed
/// form so that rows and columns are equally cheap to read.
///
/// The two copies are updated together on every write; the column mirror is
/// what makes assembling staircase pair rows (one block column followed by
/// one block row) a pair of word copies instead of a bit gather.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    w: usize,
    row_words: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(w: usize) -> Self {
        let row_words = words_for(w);
        BitMatrix {
            w,
            row_words,
            rows: vec![0; w * row_words],
            cols: vec![0; w * row_words],
        }
    }

    pub fn size(&self) -> usize {
        self.w
    }

    pub fn row_words(&self) -> usize {
        self.row_words
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        get_bit(self.row(r), c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.w && c < self.w);
        set_bit(
            &mut self.rows[r * self.row_words..(r + 1) * self.row_words],
            c,
            v,
        );
        set_bit(
            &mut self.cols[c * self.row_words..(c + 1) * self.row_words],
            r,
            v,
        );
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        flip_bit(
            &mut self.rows[r * self.row_words..(r + 1) * self.row_words],
            c,
        );
        flip_bit(
            &mut self.cols[c * self.row_words..(c + 1) * self.row_words],
            r,
        );
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.rows[r * self.row_words..(r + 1) * self.row_words]
    }

    #[inline]
    pub fn col(&self, c: usize) -> &[u64] {
        &self.cols[c * self.row_words..(c + 1) * self.row_words]
    }

    /// Overwrites row `r` (and the column mirror) from a packed word slice.
    pub fn set_row(&mut self, r: usize, bits: &[u64]) {
        self.rows[r * self.row_words..(r + 1) * self.row_words].copy_from_slice(bits);
        for c in 0..self.w {
            set_bit(
                &mut self.cols[c * self.row_words..(c + 1) * self.row_words],
                r,
                get_bit(bits, c),
            );
        }
    }

    /// Overwrites column `c` (and the row mirror) from a packed word slice.
    pub fn set_col(&mut self, c: usize, bits: &[u64]) {
        self.cols[c * self.row_words..(c + 1) * self.row_words].copy_from_slice(bits);
        for r in 0..self.w {
            set_bit(
                &mut self.rows[r * self.row_words..(r + 1) * self.row_words],
                c,
                get_bit(bits, r),
            );
        }
    }

    /// Builds a matrix from row-major bits (`bits[r * w + c]`).
    pub fn from_bits(w: usize, bits: &[bool]) -> Self {
        assert_eq!(bits.len(), w * w);
        let mut m = BitMatrix::zero(w);
        for r in 0..w {
            for c in 0..w {
                if bits[r * w + c] {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Number of positions where `self` and `other` differ.
    pub fn diff_count(&self, other: &BitMatrix) -> u64 {
        xor_weight(&self.rows, &other.rows) as u64
    }

    /// Number of differing positions within columns `0..ncols` of every row.
    pub fn diff_count_prefix_cols(&self, other: &BitMatrix, ncols: usize) -> u64 {
        self.diff_count_submatrix(other, self.w, ncols)
    }

    /// Number of differing positions in the top-left `nrows x ncols` corner.
    pub fn diff_count_submatrix(&self, other: &BitMatrix, nrows: usize, ncols: usize) -> u64 {
        let mask_words = words_for(ncols);
        let mut count = 0u64;
        for r in 0..nrows {
            let a = self.row(r);
            let b = other.row(r);
            for wi in 0..mask_words {
                let mut x = a[wi] ^ b[wi];
                let top = ncols - wi * 64;
                if top < 64 {
                    x &= (1u64 << top) - 1;
                }
                count += u64::from(x.count_ones());
            }
        }
        count
    }

    /// Row-major serialization, MSB-first within each byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let total = self.w * self.w;
        let mut out = vec![0u8; total.div_ceil(8)];
        for r in 0..self.w {
            for c in 0..self.w {
                if self.get(r, c) {
                    let i = r * self.w + c;
                    out[i / 8] |= 0x80 >> (i % 8);
                }
            }
        }
        out
    }

    /// Inverse of [`BitMatrix::to_bytes`].
    pub fn from_bytes(w: usize, bytes: &[u8]) -> Option<Self> {
        let total = w * w;
        if bytes.len() != total.div_ceil(8) {
            return None;
        }
        let mut m = BitMatrix::zero(w);
        for i in 0..total {
            if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
                m.set(i / w, i % w, true);
            }
        }
        Some(m)
    }

    /// Checks that the row and column mirrors describe the same matrix.
    pub fn mirrors_consistent(&self) -> bool {
        (0..self.w).all(|r| (0..self.w).all(|c| self.get(r, c) == get_bit(self.col(c), r)))
    }
}
