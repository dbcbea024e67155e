//! Root-system data and special functions for the four implemented cases.
//!
//! Everything downstream (drift fields, densities, matrix-model drifts)
//! is expressed through the data in this module: positive roots, the
//! weighted half-sum `rho`, chamber geometry, the product and
//! alternating-sum forms of the spherical functions, and numerically
//! stable `coth` / `sinh(u)/u` evaluators.

use crate::error::{Error, Result};

/// Series switch-over for `coth` and `sinh(u)/u`: below this threshold the
/// truncated Laurent/Taylor series is more accurate than the direct form.
pub const EPS_SERIES: f64 = 1e-4;

/// Rank cap for explicit Weyl-group enumeration, case A (N! terms).
pub const MAX_RANK_WEYL_A: usize = 8;
/// Rank cap for explicit Weyl-group enumeration, cases B/C/D (2^N N! terms).
pub const MAX_RANK_WEYL_BCD: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RootFamily {
    A,
    B,
    C,
    D,
}

impl RootFamily {
    pub fn min_rank(self) -> usize {
        match self {
            RootFamily::A => 1,
            _ => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RootFamily::A => "A",
            RootFamily::B => "B",
            RootFamily::C => "C",
            RootFamily::D => "D",
        }
    }
}

impl std::str::FromStr for RootFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(RootFamily::A),
            "B" => Ok(RootFamily::B),
            "C" => Ok(RootFamily::C),
            "D" => Ok(RootFamily::D),
            other => Err(Error::invalid(format!("unknown root family `{other}`"))),
        }
    }
}

/// A root-system case: family plus rank. Owns the root list, `rho`, and
/// the chamber geometry of that case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct RootCase {
    family: RootFamily,
    rank: usize,
}

impl RootCase {
    pub fn new(family: RootFamily, rank: usize) -> Result<Self> {
        if rank < family.min_rank() {
            return Err(Error::invalid(format!(
                "rank {} below minimum {} for case {}",
                rank,
                family.min_rank(),
                family.label()
            )));
        }
        Ok(RootCase { family, rank })
    }

    pub fn family(&self) -> RootFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of positive roots.
    pub fn num_positive_roots(&self) -> usize {
        let n = self.rank;
        match self.family {
            RootFamily::A => n * (n - 1) / 2,
            RootFamily::B | RootFamily::C => n * n,
            RootFamily::D => n * (n - 1),
        }
    }

    /// Full positive-root list in the standard basis, ordered
    /// lexicographically in (j, i, sign): for each pair i < j the root
    /// e_j - e_i, then (B/C/D) e_j + e_i; singleton roots last.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots = Vec::with_capacity(self.num_positive_roots());
        for j in 1..n {
            for i in 0..j {
                let mut r = vec![0i64; n];
                r[j] = 1;
                r[i] = -1;
                roots.push(r);
                if self.family != RootFamily::A {
                    let mut r = vec![0i64; n];
                    r[j] = 1;
                    r[i] = 1;
                    roots.push(r);
                }
            }
        }
        match self.family {
            RootFamily::B => {
                for i in 0..n {
                    let mut r = vec![0i64; n];
                    r[i] = 1;
                    roots.push(r);
                }
            }
            RootFamily::C => {
                for i in 0..n {
                    let mut r = vec![0i64; n];
                    r[i] = 2;
                    roots.push(r);
                }
            }
            _ => {}
        }
        roots
    }

    /// The weighted half-sum of positive roots, `rho = sum of R^+`,
    /// in exact integer arithmetic.
    pub fn rho(&self) -> Vec<i64> {
        let n = self.rank as i64;
        (1..=n)
            .map(|m| match self.family {
                RootFamily::A => 2 * m - n - 1,
                RootFamily::B => 2 * m - 1,
                RootFamily::C => 2 * m,
                RootFamily::D => 2 * m - 2,
            })
            .collect()
    }

    pub fn rho_f64(&self) -> Vec<f64> {
        self.rho().into_iter().map(|v| v as f64).collect()
    }

    /// Closed form of ||rho||^2 in exact integer arithmetic.
    pub fn rho_norm_sq(&self) -> i64 {
        let n = self.rank as i64;
        match self.family {
            RootFamily::A => (n - 1) * n * (n + 1) / 3,
            RootFamily::B => n * (2 * n - 1) * (2 * n + 1) / 3,
            RootFamily::C => 2 * n * (n + 1) * (2 * n + 1) / 3,
            RootFamily::D => 2 * n * (n - 1) * (2 * n - 1) / 3,
        }
    }

    /// Fundamental alternating polynomial: product of <alpha, lam> over
    /// the positive roots. Zero iff `lam` lies on a reflecting hyperplane.
    pub fn pi_poly(&self, lam: &[f64]) -> f64 {
        let mut p = 1.0;
        self.for_each_root_pairing(lam, |v| p *= v);
        p
    }

    /// log |pi(lam)| and its sign; -inf log for singular `lam`.
    fn pi_poly_log(&self, lam: &[f64]) -> (f64, f64) {
        let mut ln = 0.0;
        let mut sign = 1.0;
        self.for_each_root_pairing(lam, |v| {
            if v == 0.0 {
                ln = f64::NEG_INFINITY;
            } else {
                ln += v.abs().ln();
                if v < 0.0 {
                    sign = -sign;
                }
            }
        });
        (sign, ln)
    }

    /// Apply `f` to <alpha, x> for every positive root, in root order,
    /// without materializing the root list.
    fn for_each_root_pairing(&self, x: &[f64], mut f: impl FnMut(f64)) {
        let n = self.rank;
        for j in 1..n {
            for i in 0..j {
                f(x[j] - x[i]);
                if self.family != RootFamily::A {
                    f(x[j] + x[i]);
                }
            }
        }
        match self.family {
            RootFamily::B => (0..n).for_each(|i| f(x[i])),
            RootFamily::C => (0..n).for_each(|i| f(2.0 * x[i])),
            _ => {}
        }
    }

    /// Minimum pairing of `x` against the simple roots of the case.
    /// Positive iff `x` is strictly inside the open chamber; every
    /// positive-root pairing is bounded below by this value.
    pub fn simple_root_margin(&self, x: &[f64]) -> f64 {
        let n = self.rank;
        let mut m = f64::INFINITY;
        for i in 1..n {
            m = m.min(x[i] - x[i - 1]);
        }
        match self.family {
            RootFamily::A => {}
            RootFamily::B => m = m.min(x[0]),
            RootFamily::C => m = m.min(2.0 * x[0]),
            RootFamily::D => m = m.min(x[0] + x[1]),
        }
        m
    }

    pub fn is_strictly_interior(&self, x: &[f64]) -> bool {
        self.simple_root_margin(x) > 0.0
    }

    /// Canonical W-orbit representative of `x` in the closed chamber.
    pub fn chamber_project(&self, x: &[f64]) -> ChamberPoint {
        assert_eq!(x.len(), self.rank);
        match self.family {
            RootFamily::A => {
                let mut c = x.to_vec();
                c.sort_by(f64::total_cmp);
                ChamberPoint { coords: c, neg_first: false }
            }
            RootFamily::B | RootFamily::C => {
                let mut c: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                c.sort_by(f64::total_cmp);
                ChamberPoint { coords: c, neg_first: false }
            }
            RootFamily::D => {
                // Sign flips come in pairs only; an odd flip count leaves a
                // sign on the smallest coordinate, recorded as a bit. The
                // bit is immaterial when the smallest coordinate is zero.
                let negatives = x.iter().filter(|v| **v < 0.0).count();
                let mut c: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                c.sort_by(f64::total_cmp);
                let neg_first = negatives % 2 == 1 && c[0] > 0.0;
                ChamberPoint { coords: c, neg_first }
            }
        }
    }

    /// Drift field of the time-normalized coth dynamics: component i is
    /// the sum of coth pairings of x_i against the other coordinates, with
    /// the case-specific singleton term (coth x_i for B, 2 coth 2x_i for C,
    /// none for A/D). The coupling constant enters only the diffusion
    /// coefficient, never this field.
    pub fn drift_field(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.rank];
        self.drift_field_into(x, &mut out)?;
        Ok(out)
    }

    pub fn drift_field_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.rank;
        assert_eq!(x.len(), n);
        assert_eq!(out.len(), n);
        out.fill(0.0);
        for j in 1..n {
            for i in 0..j {
                let d = x[j] - x[i];
                if d == 0.0 {
                    return Err(Error::singular(format!(
                        "coordinate coincidence x[{i}] == x[{j}]"
                    )));
                }
                let c = coth_stable(d);
                out[j] += c;
                out[i] -= c;
                if self.family != RootFamily::A {
                    let s = x[j] + x[i];
                    if s == 0.0 {
                        return Err(Error::singular(format!(
                            "coordinate coincidence x[{i}] == -x[{j}]"
                        )));
                    }
                    let c = coth_stable(s);
                    out[j] += c;
                    out[i] += c;
                }
            }
        }
        match self.family {
            RootFamily::B => {
                for i in 0..n {
                    if x[i] == 0.0 {
                        return Err(Error::singular(format!("zero coordinate x[{i}]")));
                    }
                    out[i] += coth_stable(x[i]);
                }
            }
            RootFamily::C => {
                for i in 0..n {
                    if x[i] == 0.0 {
                        return Err(Error::singular(format!("zero coordinate x[{i}]")));
                    }
                    out[i] += 2.0 * coth_stable(2.0 * x[i]);
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Drift of the general-drift generator (case A only): the W-average
    /// of w.lam weighted by det(w) e^{<w.lam, x>}, log-sum-exp stabilized.
    /// At lam = rho this collapses to the coth field of `drift_field`.
    pub fn drift_field_lambda(&self, lam: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        if self.family != RootFamily::A {
            return Err(Error::invalid(
                "general-drift field is implemented for case A only".to_string(),
            ));
        }
        let n = self.rank;
        if n > MAX_RANK_WEYL_A {
            return Err(Error::UnsupportedRank(format!(
                "rank {n} exceeds Weyl-enumeration cap {MAX_RANK_WEYL_A}"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if lam[i] == lam[j] {
                    return Err(Error::singular("lambda has repeated entries".to_string()));
                }
            }
        }
        // Pass 1: maximum exponent over the group orbit.
        let mut max_e = f64::NEG_INFINITY;
        for_each_signed_permutation(n, false, false, |_, perm, _| {
            let mut e = 0.0;
            for i in 0..n {
                e += lam[perm[i]] * x[i];
            }
            if e > max_e {
                max_e = e;
            }
        });
        // Pass 2: stabilized numerator and denominator.
        let mut den = 0.0;
        let mut num = vec![0.0; n];
        for_each_signed_permutation(n, false, false, |det, perm, _| {
            let mut e = 0.0;
            for i in 0..n {
                e += lam[perm[i]] * x[i];
            }
            let w = det * (e - max_e).exp();
            den += w;
            for i in 0..n {
                num[i] += w * lam[perm[i]];
            }
        });
        if den.abs() < 1e-280 {
            return Err(Error::singular(
                "Weyl-sum denominator underflow after stabilization".to_string(),
            ));
        }
        for v in &mut num {
            *v /= den;
        }
        Ok(num)
    }

    /// Product form of the spherical function at lam = -i rho:
    /// product over positive roots of sinh<alpha,x> / <alpha,x>.
    pub fn psi_weyl(&self, x: &[f64]) -> f64 {
        let mut p = 1.0;
        self.for_each_root_pairing(x, |v| p *= sinhc(v));
        p
    }

    /// Alternating-sum form of the spherical function (real-argument
    /// version): pi(rho) / (2^|R+| pi(x) pi(lam)) * sum_W det(w) e^{<lam, w.x>}.
    pub fn psi_general(&self, lam: &[f64], x: &[f64]) -> Result<f64> {
        let n = self.rank;
        let cap = if self.family == RootFamily::A {
            MAX_RANK_WEYL_A
        } else {
            MAX_RANK_WEYL_BCD
        };
        if n > cap {
            return Err(Error::UnsupportedRank(format!(
                "rank {n} exceeds Weyl-enumeration cap {cap} for case {}",
                self.family.label()
            )));
        }
        let (sign_x, ln_pix) = self.pi_poly_log(x);
        let (sign_l, ln_pil) = self.pi_poly_log(lam);
        if !ln_pix.is_finite() || !ln_pil.is_finite() {
            return Err(Error::singular(
                "pi(x) or pi(lambda) vanishes; analytic continuation not implemented".to_string(),
            ));
        }
        let rho = self.rho_f64();
        let (_, ln_pirho) = self.pi_poly_log(&rho);
        let (sign_s, ln_s) = self.weyl_alt_sum_log(lam, x)?;
        let p = self.num_positive_roots() as f64;
        let ln = ln_pirho - p * std::f64::consts::LN_2 + ln_s - ln_pix - ln_pil;
        Ok(sign_s * sign_x * sign_l * ln.exp())
    }

    /// Signed log of the alternating Weyl sum  S = sum_W det(w) e^{<lam, w.x>}.
    /// Returns (sign(S), ln|S|).
    pub(crate) fn weyl_alt_sum_log(&self, lam: &[f64], x: &[f64]) -> Result<(f64, f64)> {
        let n = self.rank;
        let signed = self.family != RootFamily::A;
        let even_only = self.family == RootFamily::D;
        let mut max_e = f64::NEG_INFINITY;
        for_each_signed_permutation(n, signed, even_only, |_, perm, flips| {
            let mut e = 0.0;
            for i in 0..n {
                let xv = if flips & (1 << i) != 0 { -x[perm[i]] } else { x[perm[i]] };
                e += lam[i] * xv;
            }
            if e > max_e {
                max_e = e;
            }
        });
        let mut s = 0.0;
        for_each_signed_permutation(n, signed, even_only, |det, perm, flips| {
            let mut e = 0.0;
            for i in 0..n {
                let xv = if flips & (1 << i) != 0 { -x[perm[i]] } else { x[perm[i]] };
                e += lam[i] * xv;
            }
            s += det * (e - max_e).exp();
        });
        if s == 0.0 {
            return Err(Error::singular("alternating Weyl sum vanished".to_string()));
        }
        Ok((s.signum(), max_e + s.abs().ln()))
    }
}

/// Ordered particle configuration in the closed Weyl chamber of its case.
/// Coordinates are stored in the canonical chamber order; for case D the
/// canonical representative keeps |x_1| with a separate sign bit (all
/// implemented D densities are even in x_1, so the bit never affects a
/// downstream quantity).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChamberPoint {
    coords: Vec<f64>,
    neg_first: bool,
}

impl ChamberPoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn neg_first(&self) -> bool {
        self.neg_first
    }

    /// Coordinates with the D sign bit applied to the first entry.
    pub fn signed_coords(&self) -> Vec<f64> {
        let mut c = self.coords.clone();
        if self.neg_first {
            c[0] = -c[0];
        }
        c
    }

    pub(crate) fn from_interior(coords: Vec<f64>) -> Self {
        ChamberPoint { coords, neg_first: false }
    }
}

/// Enumerate the signed permutations of {0..n}: plain permutations when
/// `signed` is false, all sign patterns when true, even flip counts only
/// when `even_only` is set. The visitor receives det(w), the permutation,
/// and the flip mask.
fn for_each_signed_permutation(
    n: usize,
    signed: bool,
    even_only: bool,
    mut visit: impl FnMut(f64, &[usize], u32),
) {
    let masks: Vec<(u32, f64)> = if !signed {
        vec![(0, 1.0)]
    } else {
        (0u32..(1 << n))
            .filter(|m| !even_only || m.count_ones() % 2 == 0)
            .map(|m| (m, if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 }))
            .collect()
    };
    // Heap's algorithm; each emitted permutation differs from the previous
    // one by a single transposition, so the sign simply alternates.
    let mut idx: Vec<usize> = (0..n).collect();
    let mut ctr = vec![0usize; n];
    let mut sign = 1.0;
    for &(m, fs) in &masks {
        visit(sign * fs, &idx, m);
    }
    let mut i = 0;
    while i < n {
        if ctr[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i);
            } else {
                idx.swap(ctr[i], i);
            }
            sign = -sign;
            for &(m, fs) in &masks {
                visit(sign * fs, &idx, m);
            }
            ctr[i] += 1;
            i = 0;
        } else {
            ctr[i] = 0;
            i += 1;
        }
    }
}

/// Numerically stable coth. Exact-collision arguments are the caller's
/// responsibility to exclude; this is the checked public form.
pub fn coth_reg(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::singular("coth at exact zero".to_string()));
    }
    if !x.is_finite() {
        return Err(Error::invalid("coth of non-finite argument".to_string()));
    }
    Ok(coth_stable(x))
}

/// coth via 1/tanh, switching to the truncated Laurent series
/// 1/x + x/3 - x^3/45 below `EPS_SERIES`.
#[inline]
pub(crate) fn coth_stable(x: f64) -> f64 {
    if x.abs() < EPS_SERIES {
        1.0 / x + x / 3.0 - x * x * x / 45.0
    } else {
        1.0 / x.tanh()
    }
}

/// sinh(u)/u with the analytic value 1 at u = 0.
#[inline]
pub(crate) fn sinhc(u: f64) -> f64 {
    let a = u.abs();
    if a < EPS_SERIES {
        1.0 + u * u / 6.0 + u * u * u * u / 120.0
    } else {
        u.sinh() / u
    }
}

/// ln(sinh(u)/u), overflow-free for large |u|.
#[inline]
pub(crate) fn ln_sinhc(u: f64) -> f64 {
    let a = u.abs();
    if a < EPS_SERIES {
        (u * u / 6.0 + u * u * u * u / 120.0).ln_1p()
    } else {
        a - std::f64::consts::LN_2 - a.ln() + (-(-2.0 * a).exp()).ln_1p()
    }
}

/// ln(sinh(u)) for u > 0, overflow-free.
#[inline]
pub(crate) fn ln_sinh(u: f64) -> f64 {
    debug_assert!(u > 0.0);
    u - std::f64::consts::LN_2 + (-(-2.0 * u).exp()).ln_1p()
}
