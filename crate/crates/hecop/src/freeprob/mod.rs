//! Free-probability limit engine.
//!
//! Two independent realizations of the limit measures are kept side by
//! side so each validates the other: moment arithmetic through free
//! cumulants (non-crossing partitions), and density recovery through the
//! subordination fixed point with Stieltjes inversion. The multiplicative
//! side is reached through the moment recursion of the free positive
//! multiplicative Brownian motion.

mod cumulants;
mod subordination;

pub use cumulants::{
    cumulants_to_moments, enumerate_noncrossing_partitions, moments_to_cumulants,
};
pub use subordination::{subordination_density, GridSpec};

use crate::error::{Error, Result};

/// Maximum moment order carried by a [`MomentVector`].
pub const MAX_MOMENT_ORDER: usize = 16;

/// Provenance of a moment vector, for report bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MomentProvenance {
    Empirical,
    Recursion,
    Cumulant,
    Exact,
}

/// First L moments m_1..m_L of a measure on R or (0, inf).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MomentVector {
    moments: Vec<f64>,
    pub provenance: MomentProvenance,
}

impl MomentVector {
    pub fn new(moments: Vec<f64>, provenance: MomentProvenance) -> Result<Self> {
        if moments.is_empty() || moments.len() > MAX_MOMENT_ORDER {
            return Err(Error::invalid(format!(
                "moment order must be in 1..={MAX_MOMENT_ORDER}, got {}",
                moments.len()
            )));
        }
        Ok(MomentVector { moments, provenance })
    }

    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// m_l for l in 1..=L.
    pub fn get(&self, l: usize) -> f64 {
        assert!(l >= 1 && l <= self.order());
        self.moments[l - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.moments
    }

    /// Moments of the unit Dirac mass (all ones): the from-origin start.
    pub fn dirac_one(order: usize) -> Self {
        MomentVector { moments: vec![1.0; order], provenance: MomentProvenance::Exact }
    }

    /// Smallest eigenvalue of the Hankel matrix of order floor(L/2):
    /// nonnegativity is the probability-moment consistency check.
    pub fn hankel_min_eigenvalue(&self) -> f64 {
        let h = self.order() / 2;
        let dim = h + 1;
        let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let k = i + j;
                m[(i, j)] = if k == 0 { 1.0 } else { self.get(k) };
            }
        }
        let eig = m.symmetric_eigen();
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Moments of the semicircle distribution of radius s: the even moments
/// are Catalan numbers times (s/2)^{2l}.
pub fn moments_semicircle(radius: f64, order: usize) -> Result<MomentVector> {
    if radius <= 0.0 {
        return Err(Error::invalid("semicircle radius must be positive".to_string()));
    }
    let mut m = vec![0.0; order];
    for l in 1..=order / 2 {
        m[2 * l - 1] = catalan(l) * (radius / 2.0).powi(2 * l as i32);
    }
    MomentVector::new(m, MomentProvenance::Exact)
}

/// Moments of the uniform distribution on [-r, r].
pub fn moments_uniform(r: f64, order: usize) -> Result<MomentVector> {
    if r <= 0.0 {
        return Err(Error::invalid("uniform radius must be positive".to_string()));
    }
    let mut m = vec![0.0; order];
    for l in 1..=order / 2 {
        m[2 * l - 1] = r.powi(2 * l as i32) / (2 * l + 1) as f64;
    }
    MomentVector::new(m, MomentProvenance::Exact)
}

fn catalan(n: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..n {
        c = c * 2.0 * (2 * i + 1) as f64 / (i + 2) as f64;
    }
    c
}

/// Free additive convolution at the moment level: free cumulants add.
pub fn free_add_convolve(a: &MomentVector, b: &MomentVector) -> Result<MomentVector> {
    if a.order() != b.order() {
        return Err(Error::invalid(format!(
            "moment orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    let ka = moments_to_cumulants(a);
    let kb = moments_to_cumulants(b);
    let k: Vec<f64> = ka.iter().zip(&kb).map(|(x, y)| x + y).collect();
    let mut out = cumulants_to_moments(&k)?;
    out.provenance = MomentProvenance::Cumulant;
    Ok(out)
}

/// Report of the exponential-moment growth condition and the Carleman
/// partial sum (informational: a finite partial sum proves nothing, it is
/// recorded alongside the growth check).
#[derive(Debug, Clone, serde::Serialize)]
pub struct MomentConditionReport {
    pub pass: bool,
    /// Orders l with s_l > (gamma l)^l.
    pub violations: Vec<usize>,
    /// Partial sum of s_{2l}^{-1/(2l)} over the available even moments.
    pub carleman_partial_sum: f64,
}

/// Check s_l <= (gamma l)^l for the available orders.
pub fn moment_condition_check(nu: &MomentVector, gamma: f64) -> MomentConditionReport {
    let mut violations = Vec::new();
    for l in 1..=nu.order() {
        let bound = (gamma * l as f64).powi(l as i32);
        if nu.get(l) > bound {
            violations.push(l);
        }
    }
    let mut carleman = 0.0;
    for l in 1..=nu.order() / 2 {
        let s2l = nu.get(2 * l);
        if s2l > 0.0 {
            carleman += s2l.powf(-1.0 / (2.0 * l as f64));
        }
    }
    MomentConditionReport { pass: violations.is_empty(), violations, carleman_partial_sum: carleman }
}

/// Moments of nu boxtimes mu_t: integrates the triangular moment ODE
/// d s_l / dt = l [ s_l + sum_{k=1}^{l-1} s_k s_{l-k} ] with RK4 at a
/// fixed small step, starting from the moments of nu.
pub fn mult_bm_moments(nu: &MomentVector, t: f64, order: usize) -> Result<MomentVector> {
    if t < 0.0 {
        return Err(Error::invalid("time must be nonnegative".to_string()));
    }
    if order > nu.order() {
        return Err(Error::invalid(format!(
            "requested order {} exceeds starting moments ({})",
            order,
            nu.order()
        )));
    }
    // The growth condition holds for some gamma iff it holds for the
    // smallest gamma compatible with the data; for a measure on (0, inf)
    // that gamma exists exactly when the moments are finite and positive.
    let mut gamma_needed: f64 = 0.0;
    for l in 1..=nu.order() {
        let s = nu.get(l);
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::invalid(format!(
                "moment s_{l} = {s} is not a moment of a measure on (0, inf)"
            )));
        }
        gamma_needed = gamma_needed.max(s.powf(1.0 / l as f64) / l as f64);
    }
    if !gamma_needed.is_finite()
        || !moment_condition_check(nu, gamma_needed.max(1.0) * (1.0 + 1e-12)).pass
    {
        return Err(Error::invalid(
            "starting moments violate the exponential growth condition".to_string(),
        ));
    }
    let mut s: Vec<f64> = nu.as_slice()[..order].to_vec();
    if t == 0.0 {
        return MomentVector::new(s, MomentProvenance::Recursion);
    }
    let h_target = 1e-4 * (1.0f64).min(1.0 / order as f64);
    let steps = (t / h_target).ceil() as usize;
    let h = t / steps as f64;
    let rhs = |s: &[f64], out: &mut [f64]| {
        for l in 1..=order {
            let mut conv = 0.0;
            for k in 1..l {
                conv += s[k - 1] * s[l - k - 1];
            }
            out[l - 1] = l as f64 * (s[l - 1] + conv);
        }
    };
    let mut k1 = vec![0.0; order];
    let mut k2 = vec![0.0; order];
    let mut k3 = vec![0.0; order];
    let mut k4 = vec![0.0; order];
    let mut tmp = vec![0.0; order];
    for _ in 0..steps {
        rhs(&s, &mut k1);
        for i in 0..order {
            tmp[i] = s[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..order {
            tmp[i] = s[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..order {
            tmp[i] = s[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..order {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    MomentVector::new(s, MomentProvenance::Recursion)
}

/// Tabulated density of a measure on a uniform grid.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DensityGrid {
    pub x0: f64,
    pub dx: f64,
    pub rho: Vec<f64>,
    pub mass: f64,
    pub support: (f64, f64),
}

impl DensityGrid {
    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn trapezoid_mass(&self) -> f64 {
        trapezoid(&self.rho, self.dx)
    }

    /// Integral of f(x) rho(x) dx with composite 4-point Gauss-Legendre per
    /// cell on the linear interpolant of rho.
    pub fn quad(&self, f: impl Fn(f64) -> f64) -> f64 {
        // 4-point Gauss-Legendre nodes/weights on [-1, 1].
        const GL_X: [f64; 4] = [
            -0.8611363115940526,
            -0.3399810435848563,
            0.3399810435848563,
            0.8611363115940526,
        ];
        const GL_W: [f64; 4] = [
            0.34785484513745385,
            0.6521451548625461,
            0.6521451548625461,
            0.34785484513745385,
        ];
        let mut total = 0.0;
        for i in 0..self.len().saturating_sub(1) {
            let ra = self.rho[i];
            let rb = self.rho[i + 1];
            if ra == 0.0 && rb == 0.0 {
                continue;
            }
            let xa = self.x_at(i);
            let half = 0.5 * self.dx;
            let mid = xa + half;
            let mut cell = 0.0;
            for k in 0..4 {
                let x = mid + half * GL_X[k];
                let w = (x - xa) / self.dx;
                let rho = ra + (rb - ra) * w;
                cell += GL_W[k] * f(x) * rho;
            }
            total += cell * half;
        }
        total
    }

    /// Moments of the exp_2 pushforward x -> e^{2x}: index l holds
    /// the integral of e^{2 l x} rho(x) dx, with index 0 the mass.
    pub fn exp2_moments(&self, lmax: usize) -> Vec<f64> {
        (0..=lmax)
            .map(|l| self.quad(|x| (2.0 * l as f64 * x).exp()))
            .collect()
    }

    /// Moments of |x| under the grid density, index 0 the mass.
    pub fn abs_moments(&self, lmax: usize) -> Vec<f64> {
        (0..=lmax)
            .map(|l| self.quad(|x| x.abs().powi(l as i32)))
            .collect()
    }
}

pub(crate) fn trapezoid(y: &[f64], dx: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let inner: f64 = y[1..y.len() - 1].iter().sum();
    dx * (0.5 * (y[0] + y[y.len() - 1]) + inner)
}

/// Even moments of the absolute-value pushforward of a symmetric measure:
/// they coincide with the even moments of the measure itself. Odd entries
/// of the result are not determined by the input moments (quadrature over
/// a [`DensityGrid`] provides them, see [`DensityGrid::abs_moments`]) and
/// are set to NaN.
pub fn abs_fold_moments(m: &MomentVector) -> Result<MomentVector> {
    let tol = 1e-8;
    let scale = (1..=m.order())
        .map(|l| m.get(l).abs())
        .fold(1.0f64, f64::max);
    for l in (1..=m.order()).step_by(2) {
        if m.get(l).abs() > tol * scale {
            return Err(Error::invalid(format!(
                "odd moment m_{l} = {} of a supposedly symmetric measure",
                m.get(l)
            )));
        }
    }
    let out: Vec<f64> = (1..=m.order())
        .map(|l| if l % 2 == 0 { m.get(l) } else { f64::NAN })
        .collect();
    MomentVector::new(out, m.provenance)
}
