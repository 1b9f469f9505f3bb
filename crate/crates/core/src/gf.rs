//! GF(2^m) arithmetic backed by log/antilog tables.
//!
//! One table set is built per component code at construction time. Elements
//! are stored as `u16` bit vectors over the polynomial basis; the primitive
//! polynomial per degree is fixed to the defaults in [`DEFAULT_PRIM_POLY`] so
//! that codeword sets are reproducible across runs and tools.

use crate::CodeError;

/// Default primitive polynomials, indexed by field degree `m` (2..=12).
/// Entry `m` is the full polynomial bit pattern including the x^m term,
/// e.g. `m = 8` is 0x11D (x^8 + x^4 + x^3 + x^2 + 1).
pub const DEFAULT_PRIM_POLY: [u32; 13] = [
    0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10001001, 0b100011101, 0b1000010001,
    0b10000001001, 0b100000000101, 0b1000001010011,
];

/// Log/antilog tables for one GF(2^m).
#[derive(Debug, Clone)]
pub struct GfTables {
    m: u32,
    /// Multiplicative order, 2^m - 1.
    n: u16,
    prim_poly: u32,
    /// exp[i] = alpha^i for i in 0..2n (doubled to skip a mod in mul).
    exp: Vec<u16>,
    /// log[x] for x in 1..=n; log[0] is a sentinel and must not be read.
    log: Vec<u16>,
    /// qsolve[d] = a solution z of z^2 + z = d, or QSOLVE_NONE if Tr(d) = 1.
    qsolve: Vec<u16>,
}

const QSOLVE_NONE: u16 = u16::MAX;

impl GfTables {
    /// Builds the tables for GF(2^m) with the default primitive polynomial.
    pub fn new(m: u32) -> Result<GfTables, CodeError> {
        if !(2..=12).contains(&m) {
            return Err(CodeError::Parameter(format!(
                "field degree m = {m} out of supported range 2..=12"
            )));
        }
        let prim_poly = DEFAULT_PRIM_POLY[m as usize];
        let n = (1u32 << m) - 1;
        let mut exp = vec![0u16; 2 * n as usize];
        let mut log = vec![0u16; (n + 1) as usize];
        let mut x = 1u32;
        for i in 0..n as usize {
            exp[i] = x as u16;
            exp[i + n as usize] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= prim_poly;
            }
        }
        debug_assert_eq!(x, 1, "alpha is primitive for the default polynomial");

        // Preimages of the linear map z -> z^2 + z. Each image has exactly
        // two preimages, z and z + 1; the table keeps the one seen first.
        let mut qsolve = vec![QSOLVE_NONE; (n + 1) as usize];
        for z in 0..=n as u16 {
            let d = Self::raw_mul(z, z, m, prim_poly) ^ z;
            if qsolve[d as usize] == QSOLVE_NONE {
                qsolve[d as usize] = z;
            }
        }

        Ok(GfTables {
            m,
            n: n as u16,
            prim_poly,
            exp,
            log,
            qsolve,
        })
    }

    fn raw_mul(a: u16, b: u16, m: u32, prim_poly: u32) -> u16 {
        let mut acc = 0u32;
        let mut a = a as u32;
        let mut b = b as u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            a <<= 1;
            if a & (1 << m) != 0 {
                a ^= prim_poly;
            }
            b >>= 1;
        }
        acc as u16
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Multiplicative order 2^m - 1.
    pub fn order(&self) -> u16 {
        self.n
    }

    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    /// alpha^i, with i reduced mod 2^m - 1.
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.exp[i % self.n as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, x: u16) -> u16 {
        debug_assert_ne!(x, 0);
        self.log[x as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        debug_assert_ne!(b, 0);
        if a == 0 {
            0
        } else {
            self.exp[self.n as usize + self.log[a as usize] as usize
                - self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u16) -> u16 {
        debug_assert_ne!(a, 0);
        self.exp[self.n as usize - self.log[a as usize] as usize]
    }

    pub fn pow(&self, a: u16, e: usize) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as usize * e) % self.n as usize;
        self.exp[l]
    }

    /// Solves z^2 + z = d. Returns one of the two solutions (the other is
    /// z + 1), or `None` when d has trace 1 and no solution exists.
    #[inline]
    pub fn solve_quadratic(&self, d: u16) -> Option<u16> {
        let z = self.qsolve[d as usize];
        if z == QSOLVE_NONE {
            None
        } else {
            Some(z)
        }
    }

    /// Minimal polynomial of alpha^i as a bit pattern (LSB = constant term).
    pub fn minimal_polynomial(&self, i: usize) -> u32 {
        // Collect the conjugacy class {i, 2i, 4i, ...} mod n and expand
        // prod (x - alpha^j) over it.
        let n = self.n as usize;
        let mut class = vec![];
        let mut j = i % n;
        loop {
            class.push(j);
            j = (2 * j) % n;
            if j == i % n {
                break;
            }
        }
        // poly holds field-element coefficients, poly[d] * x^d.
        let mut poly: Vec<u16> = vec![1];
        for &j in &class {
            let root = self.alpha_pow(j);
            let mut next = vec![0u16; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        // A minimal polynomial over GF(2) has 0/1 coefficients.
        let mut bits = 0u32;
        for (d, &c) in poly.iter().enumerate() {
            debug_assert!(c <= 1, "minimal polynomial coefficient not binary");
            if c == 1 {
                bits |= 1 << d;
            }
        }
        bits
    }
}

/// Carry-less multiplication of GF(2)[x] polynomials given as bit patterns.
pub fn poly_mul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of a mod b in GF(2)[x]; b must be nonzero.
pub fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros() as i32;
    loop {
        let da = 63 - (a.leading_zeros() as i32);
        if a == 0 || da < db {
            return a;
        }
        a ^= b << (da - db);
    }
}

pub fn poly_degree(a: u64) -> i32 {
    if a == 0 {
        -1
    } else {
        63 - a.leading_zeros() as i32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_spot_checks() {
        for m in [4u32, 5, 7, 8, 9] {
            let gf = GfTables::new(m).unwrap();
            let n = gf.order() as u16;
            // alpha^n = 1 and powers cycle
            assert_eq!(gf.alpha_pow(n as usize), 1);
            for a in 1..=n.min(200) {
                assert_eq!(gf.mul(a, gf.inv(a)), 1);
                assert_eq!(gf.div(a, a), 1);
                assert_eq!(gf.mul(a, 0), 0);
            }
        }
    }

    #[test]
    fn mul_matches_shift_and_reduce() {
        // Table-driven multiply against the direct polynomial reduction.
        let gf = GfTables::new(8).unwrap();
        for a in [1u16, 2, 3, 17, 113, 200, 255] {
            for b in [1u16, 2, 5, 90, 255] {
                assert_eq!(gf.mul(a, b), GfTables::raw_mul(a, b, 8, gf.prim_poly()));
            }
        }
    }

    #[test]
    fn quadratic_solver_all_m() {
        for m in [4u32, 5, 7, 8, 9] {
            let gf = GfTables::new(m).unwrap();
            let n = gf.order();
            let mut solvable = 0u32;
            for d in 0..=n {
                if let Some(z) = gf.solve_quadratic(d) {
                    assert_eq!(gf.mul(z, z) ^ z, d);
                    solvable += 1;
                }
            }
            // z -> z^2 + z is 2-to-1, so exactly half the field is an image.
            assert_eq!(solvable, (n as u32 + 1) / 2);
        }
    }

    #[test]
    fn minimal_polynomial_of_alpha_is_prim_poly() {
        for m in [5u32, 8, 9] {
            let gf = GfTables::new(m).unwrap();
            assert_eq!(gf.minimal_polynomial(1), gf.prim_poly());
        }
    }

    #[test]
    fn minimal_polynomial_annihilates_its_root() {
        let gf = GfTables::new(5).unwrap();
        for i in [1usize, 3, 5] {
            let p = gf.minimal_polynomial(i);
            // Evaluate p at alpha^i over the field.
            let mut acc = 0u16;
            for d in 0..32 {
                if p & (1 << d) != 0 {
                    acc ^= gf.pow(gf.alpha_pow(i), d);
                }
            }
            assert_eq!(acc, 0, "m_{i}(alpha^{i}) must vanish");
        }
    }

    #[test]
    fn poly_ops() {
        // (x+1)(x^2+x+1) = x^3+1
        assert_eq!(poly_mul(0b11, 0b111), 0b1001);
        assert_eq!(poly_rem(0b1001, 0b11), 0);
        assert_eq!(poly_degree(0b1001), 3);
        assert_eq!(poly_degree(0), -1);
    }
}
