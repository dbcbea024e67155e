//! Moment / free-cumulant conversion through non-crossing partitions.
//!
//! Two routes are implemented: explicit enumeration of NC(n) for orders
//! up to [`EXPLICIT_NC_MAX`], and the boundary-block recursion
//! m_n = sum_s kappa_s * sum_{i_1+..+i_s = n-s} m_{i_1}..m_{i_s}
//! above it. Both compute the same sums; the explicit route doubles as a
//! cross-check against brute-force partition filtering in tests.

use super::{MomentProvenance, MomentVector, MAX_MOMENT_ORDER};
use crate::error::{Error, Result};

/// Largest order handled by literal NC-partition enumeration.
pub const EXPLICIT_NC_MAX: usize = 8;

/// All non-crossing partitions of {0, .., n-1}, each partition a list of
/// blocks with increasing elements. Generated by the block-of-the-first-
/// element recursion, so every partition appears exactly once.
pub fn enumerate_noncrossing_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn segment(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
        if lo == hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        extend(vec![lo], Vec::new(), lo + 1, hi, &mut out);
        out
    }

    // `block` is the growing block of the segment's first element; the
    // open gaps between its elements are partitioned independently, which
    // is exactly the non-crossing condition.
    fn extend(
        block: Vec<usize>,
        fixed: Vec<Vec<usize>>,
        from: usize,
        hi: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        for tail in segment(from, hi) {
            let mut p = Vec::with_capacity(1 + fixed.len() + tail.len());
            p.push(block.clone());
            p.extend(fixed.iter().cloned());
            p.extend(tail);
            out.push(p);
        }
        for next in from..hi {
            for mid in segment(from, next) {
                let mut fixed2 = fixed.clone();
                fixed2.extend(mid);
                let mut block2 = block.clone();
                block2.push(next);
                extend(block2, fixed2, next + 1, hi, out);
            }
        }
    }

    segment(0, n)
}

/// Sum over compositions of `r` into `s` nonnegative parts of the product
/// of moments (with m_0 = 1); `mm[i]` holds m_i.
fn composition_sum(mm: &[f64], s: usize, r: usize) -> f64 {
    let mut cur: Vec<f64> = mm[..=r].to_vec();
    for _ in 2..=s {
        let mut nxt = vec![0.0; r + 1];
        for (a, ca) in cur.iter().enumerate() {
            if *ca == 0.0 {
                continue;
            }
            for b in 0..=(r - a) {
                nxt[a + b] += ca * mm[b];
            }
        }
        cur = nxt;
    }
    cur[r]
}

/// Moments from free cumulants.
pub fn cumulants_to_moments(kappa: &[f64]) -> Result<MomentVector> {
    let order = kappa.len();
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::invalid(format!(
            "cumulant order must be in 1..={MAX_MOMENT_ORDER}, got {order}"
        )));
    }
    let mut mm = vec![0.0; order + 1];
    mm[0] = 1.0;
    for n in 1..=order {
        mm[n] = if n <= EXPLICIT_NC_MAX {
            enumerate_noncrossing_partitions(n)
                .iter()
                .map(|p| p.iter().map(|b| kappa[b.len() - 1]).product::<f64>())
                .sum()
        } else {
            (1..=n)
                .map(|s| kappa[s - 1] * composition_sum(&mm, s, n - s))
                .sum()
        };
    }
    MomentVector::new(mm[1..].to_vec(), MomentProvenance::Cumulant)
}

/// Free cumulants from moments, inverting the boundary-block recursion.
pub fn moments_to_cumulants(m: &MomentVector) -> Vec<f64> {
    let order = m.order();
    let mut mm = vec![1.0];
    mm.extend_from_slice(m.as_slice());
    let mut kappa = vec![0.0; order];
    for n in 1..=order {
        let mut rest = 0.0;
        for s in 1..n {
            rest += kappa[s - 1] * composition_sum(&mm, s, n - s);
        }
        kappa[n - 1] = mm[n] - rest;
    }
    kappa
}
