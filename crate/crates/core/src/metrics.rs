//! Error-floor estimates, complexity accounting and BER bookkeeping.

use crate::CodeError;

/// Additive bit/block error counters for one measurement cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BerCounter {
    pub bits: u64,
    pub errors: u64,
    pub blocks: u64,
    pub block_errors: u64,
}

impl BerCounter {
    pub fn merge(&mut self, other: &BerCounter) {
        self.bits += other.bits;
        self.errors += other.errors;
        self.blocks += other.blocks;
        self.block_errors += other.block_errors;
    }

    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }
}

/// Wilson score interval for a binomial proportion at normal quantile `z`
/// (1.96 for 95%).
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// ln of the binomial coefficient, computed term by term in log domain.
fn ln_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = 0.0f64;
    for i in 0..k {
        acc += (((n - k + i + 1) as f64) / ((i + 1) as f64)).ln();
    }
    acc
}

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn check_floor_domain(w: u64, t: u64, ber_pre: f64) -> Result<(), CodeError> {
    if !(0.0..1.0).contains(&ber_pre) || ber_pre <= 0.0 {
        return Err(CodeError::Usage(format!(
            "ber_pre = {ber_pre} must lie in (0, 1)"
        )));
    }
    if w < t + 1 {
        return Err(CodeError::Usage(format!("w = {w} too small for t = {t}")));
    }
    Ok(())
}

/// Minimal-stall-pattern error-floor estimate for staircase codes:
/// (t+1)^2 / w^2 * M_min * p^((t+1)^2) with
/// M_min = C(w, t+1) * sum_{m=1}^{t+1} C(w, m) C(w, t+1-m).
/// Evaluated in log domain so that tiny channel error rates do not
/// underflow intermediate terms.
pub fn error_floor_scc(w: u64, t: u64, ber_pre: f64) -> Result<f64, CodeError> {
    check_floor_domain(w, t, ber_pre)?;
    let terms: Vec<f64> = (1..=t + 1)
        .map(|m| ln_binom(w, m) + ln_binom(w, t + 1 - m))
        .collect();
    let ln_mmin = ln_binom(w, t + 1) + ln_sum_exp(&terms);
    Ok(ln_floor_value(w, t, ber_pre, ln_mmin).exp())
}

/// Product-code variant: M_min = C(w, t+1)^2, with w the component length.
pub fn error_floor_pc(w: u64, t: u64, ber_pre: f64) -> Result<f64, CodeError> {
    check_floor_domain(w, t, ber_pre)?;
    let ln_mmin = 2.0 * ln_binom(w, t + 1);
    Ok(ln_floor_value(w, t, ber_pre, ln_mmin).exp())
}

fn ln_floor_value(w: u64, t: u64, ber_pre: f64, ln_mmin: f64) -> f64 {
    let tp = (t + 1) as f64;
    2.0 * tp.ln() - 2.0 * (w as f64).ln() + ln_mmin + tp * tp * ber_pre.ln()
}

/// Standard-decoder call budget per window position, w (L-1) l.
pub fn n_sd(w: u64, window_len: u64, iterations: u64) -> u64 {
    w * (window_len - 1) * iterations
}

/// Relative complexity increase: (avg calls per position - N_sd) / N_sd.
pub fn relative_complexity(avg_calls_per_window: f64, w: u64, window_len: u64, iterations: u64) -> f64 {
    let nsd = n_sd(w, window_len, iterations) as f64;
    (avg_calls_per_window - nsd) / nsd
}

/// One-sided paired comparison: true when the mean of `diffs` is positive
/// with the given normal quantile of confidence (1.645 for 95%), using the
/// t-statistic with a normal approximation. Degenerate zero-variance
/// samples reduce to a strict sign check.
pub fn paired_mean_positive(diffs: &[f64], z: f64) -> bool {
    let n = diffs.len() as f64;
    if diffs.is_empty() {
        return false;
    }
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    if var == 0.0 {
        return mean > 0.0;
    }
    mean > z * (var / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn floor_matches_exact_combinatorics() {
        // Cross-check against direct integer M_min evaluation at 1e-12
        // relative for the three component sizes.
        for w in [128u64, 256, 512] {
            for ber in [1e-2, 3e-3, 1e-3] {
                let scc = error_floor_scc(w, 2, ber).unwrap();
                let scc_oracle = reference::error_floor_direct(
                    w,
                    2,
                    reference::stall_multiplicity_scc(w, 2),
                    ber,
                );
                assert!(
                    (scc - scc_oracle).abs() / scc_oracle < 1e-12,
                    "scc w={w} ber={ber}: {scc} vs {scc_oracle}"
                );
                let pc = error_floor_pc(w, 2, ber).unwrap();
                let pc_oracle = reference::error_floor_direct(
                    w,
                    2,
                    reference::stall_multiplicity_pc(w, 2),
                    ber,
                );
                assert!(
                    (pc - pc_oracle).abs() / pc_oracle < 1e-12,
                    "pc w={w} ber={ber}: {pc} vs {pc_oracle}"
                );
            }
        }
    }

    #[test]
    fn floor_ratio_identity() {
        // floor_pc / floor_scc = C(w,t+1) / sum_m C(w,m) C(w,t+1-m).
        let w = 128u64;
        let ber = 2e-3;
        let ratio = error_floor_pc(w, 2, ber).unwrap() / error_floor_scc(w, 2, ber).unwrap();
        let num = reference::binom_u128(w, 3) as f64;
        let den = (reference::binom_u128(w, 1) * reference::binom_u128(w, 2) * 2
            + reference::binom_u128(w, 3)) as f64;
        assert!((ratio - num / den).abs() / (num / den) < 1e-10);
    }

    #[test]
    fn floor_is_monotone_and_underflow_safe() {
        let mut last = 0.0;
        for ber in [1e-4, 1e-3, 1e-2] {
            let v = error_floor_scc(128, 2, ber).unwrap();
            assert!(v > last);
            last = v;
        }
        // Deep-waterfall inputs underflow gracefully to zero instead of
        // poisoning intermediate terms.
        let tiny = error_floor_scc(128, 2, 1e-60).unwrap();
        assert_eq!(tiny, 0.0);
        // Log-log slope is (t+1)^2 = 9.
        let a = error_floor_scc(128, 2, 1e-3).unwrap();
        let b = error_floor_scc(128, 2, 1e-4).unwrap();
        assert!(((a / b).log10() - 9.0).abs() < 1e-9);
    }

    #[test]
    fn floor_domain_checks() {
        assert!(error_floor_scc(128, 2, 0.0).is_err());
        assert!(error_floor_scc(128, 2, 1.5).is_err());
        assert!(error_floor_scc(2, 2, 0.01).is_err());
    }

    #[test]
    fn n_sd_paper_values() {
        assert_eq!(n_sd(128, 9, 7), 7168);
        assert_eq!(n_sd(114, 9, 7), 6384);
        assert_eq!(n_sd(252, 9, 7), 14112);
    }

    #[test]
    fn eta_zero_at_baseline() {
        assert_eq!(relative_complexity(7168.0, 128, 9, 7), 0.0);
        let eta = relative_complexity(7168.0 * 1.04, 128, 9, 7);
        assert!((eta - 0.04).abs() < 1e-12);
    }

    #[test]
    fn counters_merge_commutes() {
        let a = BerCounter { bits: 10, errors: 1, blocks: 2, block_errors: 1 };
        let b = BerCounter { bits: 20, errors: 3, blocks: 4, block_errors: 2 };
        let mut ab = a;
        ab.merge(&b);
        let mut ba = b;
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.bits, 30);
        assert!((ab.ber() - 4.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn wilson_sanity() {
        let (lo, hi) = wilson_interval(10, 10_000, 1.96);
        assert!(lo < 1e-3 && 1e-3 < hi);
        assert!(lo > 0.0);
    }

    #[test]
    fn paired_test_behaviour() {
        assert!(paired_mean_positive(&[1.0, 1.1, 0.9, 1.05, 0.95], 1.645));
        assert!(!paired_mean_positive(&[0.1, -0.2, 0.05, -0.1], 1.645));
        assert!(paired_mean_positive(&[0.5, 0.5, 0.5], 1.645));
        assert!(!paired_mean_positive(&[], 1.645));
    }
}
