//! Time integrators for the coth-drift particle SDEs, their infinite-
//! coupling ODE limit, and singular-start handling from the origin.
//!
//! The scheme is Euler-Maruyama (classical RK4 for the ODE) with
//! rejection: a proposed step is rejected and the step size halved when it
//! would violate an ordering constraint or push a pairwise gap below the
//! collision margin. The step recovers multiplicatively after ten accepted
//! steps. On top of the rejection rule, each proposal is capped so the
//! drift displacement cannot overshoot the current smallest gap: stepping
//! out of the near-singular origin leaves the chamber walls repulsive but
//! makes the explicit scheme locally stiff, and no collision ever occurs
//! to trigger the rejection rule there.

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::rootsys::{ChamberPoint, RootCase, RootFamily};
use rayon::prelude::*;

/// Fraction of the smallest simple-root gap a drift displacement may cover
/// in one proposal.
const DRIFT_CAP_FRACTION: f64 = 0.25;
/// Accepted steps between multiplicative step-size recoveries.
const RECOVERY_INTERVAL: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Clock {
    /// Unit diffusion, drift scaled by the coupling k.
    Ho,
    /// Diffusion 1/sqrt(k), unit drift (the time-changed process).
    Tilde,
}

impl Clock {
    pub fn label(self) -> &'static str {
        match self {
            Clock::Ho => "HO",
            Clock::Tilde => "TILDE",
        }
    }
}

impl std::str::FromStr for Clock {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ho" => Ok(Clock::Ho),
            "tilde" => Ok(Clock::Tilde),
            other => Err(Error::invalid(format!("unknown clock `{other}`"))),
        }
    }
}

/// Integrator configuration, in process-time units.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SchemeConfig {
    /// Target step size.
    pub dt_base: f64,
    /// Floor for rejection-driven halving; falling below it is an error.
    pub dt_min: f64,
    /// Minimum allowed simple-root pairing for an accepted state.
    pub collision_margin: f64,
    /// Scale of the warm start replacing the singular origin.
    pub warm_start_delta: f64,
    /// Hard budget of proposals per trajectory.
    pub max_steps: u64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            dt_base: 1e-4,
            dt_min: 1e-9,
            collision_margin: 1e-7,
            warm_start_delta: 1e-6,
            max_steps: 5_000_000,
        }
    }
}

impl SchemeConfig {
    /// Default configuration resolving a horizon into about 2000 steps,
    /// capped at the global default step.
    pub fn for_horizon(t_end: f64) -> Self {
        let mut cfg = SchemeConfig::default();
        cfg.dt_base = (t_end / 2000.0).min(1e-4).max(cfg.dt_min);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_base > 0.0 && self.dt_min > 0.0 && self.dt_min <= self.dt_base) {
            return Err(Error::invalid(format!(
                "need 0 < dt_min <= dt_base, got dt_min = {}, dt_base = {}",
                self.dt_min, self.dt_base
            )));
        }
        if self.collision_margin <= 0.0 {
            return Err(Error::invalid("collision_margin must be positive".to_string()));
        }
        if self.warm_start_delta <= 0.0 {
            return Err(Error::invalid("warm_start_delta must be positive".to_string()));
        }
        Ok(())
    }
}

/// Particle configuration at a process time.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParticleState {
    pub coords: Vec<f64>,
    pub time: f64,
}

impl ParticleState {
    pub fn chamber_point(&self, case: &RootCase) -> ChamberPoint {
        case.chamber_project(&self.coords)
    }
}

/// Starting configuration: the singular origin (warm-started
/// automatically) or an explicit interior point.
#[derive(Debug, Clone)]
pub enum Start {
    Origin,
    Interior(Vec<f64>),
}

/// Strictly interior surrogate for a start at the chamber origin:
/// delta * rho / N, with the case-specific adjustments that clear the
/// remaining walls (the middle zero coordinate for odd-rank A, the zero
/// first coordinate for D).
pub fn warm_start(case: &RootCase, delta: f64) -> Result<ParticleState> {
    if delta <= 0.0 {
        return Err(Error::invalid("warm-start delta must be positive".to_string()));
    }
    let n = case.rank();
    let nf = n as f64;
    let mut coords: Vec<f64> = case.rho().iter().map(|&r| delta * r as f64 / nf).collect();
    match case.family() {
        RootFamily::A => {
            for c in coords.iter_mut() {
                if *c == 0.0 {
                    *c += delta / (10.0 * nf);
                }
            }
        }
        RootFamily::D => {
            coords[0] = delta / (2.0 * nf);
        }
        _ => {}
    }
    debug_assert!(case.is_strictly_interior(&coords));
    Ok(ParticleState { coords, time: 0.0 })
}

fn resolve_start(case: &RootCase, start: &Start, cfg: &SchemeConfig) -> Result<Vec<f64>> {
    match start {
        Start::Origin => Ok(warm_start(case, cfg.warm_start_delta)?.coords),
        Start::Interior(coords) => {
            if coords.len() != case.rank() {
                return Err(Error::invalid(format!(
                    "start has {} coordinates, case rank is {}",
                    coords.len(),
                    case.rank()
                )));
            }
            if coords.iter().all(|c| *c == 0.0) {
                return Ok(warm_start(case, cfg.warm_start_delta)?.coords);
            }
            if !case.is_strictly_interior(coords) {
                return Err(Error::invalid(
                    "start must be strictly interior or the zero state".to_string(),
                ));
            }
            Ok(coords.clone())
        }
    }
}

/// One replica of the particle SDE. Deterministic given (seed, replica).
#[allow(clippy::too_many_arguments)]
pub fn simulate_sde(
    case: &RootCase,
    k: f64,
    t_end: f64,
    cfg: &SchemeConfig,
    seed: u64,
    replica: u64,
    start: &Start,
    clock: Clock,
) -> Result<ParticleState> {
    cfg.validate()?;
    if !(k >= 0.5) {
        return Err(Error::invalid(format!(
            "coupling k = {k} below the strong-solution threshold 1/2"
        )));
    }
    if k.is_infinite() {
        return Err(Error::invalid(
            "infinite coupling is the ODE limit; use simulate_ode".to_string(),
        ));
    }
    if t_end <= 0.0 {
        return Err(Error::invalid("t_end must be positive".to_string()));
    }
    let x0 = resolve_start(case, start, cfg)?;
    let (drift_scale, noise_scale) = match clock {
        Clock::Ho => (k, 1.0),
        Clock::Tilde => (1.0, 1.0 / k.sqrt()),
    };
    let rng = CounterRng::new(seed, replica);
    let coords = integrate(case, x0, t_end, cfg, drift_scale, Some((noise_scale, rng)))?;
    Ok(ParticleState { coords, time: t_end })
}

/// The infinite-coupling ODE limit: classical RK4 with the same rejection
/// rule and drift cap. Deterministic.
pub fn simulate_ode(
    case: &RootCase,
    t_end: f64,
    cfg: &SchemeConfig,
    start: &Start,
) -> Result<ParticleState> {
    cfg.validate()?;
    if t_end <= 0.0 {
        return Err(Error::invalid("t_end must be positive".to_string()));
    }
    let x0 = resolve_start(case, start, cfg)?;
    let coords = integrate(case, x0, t_end, cfg, 1.0, None)?;
    Ok(ParticleState { coords, time: t_end })
}

/// Shared adaptive loop. `noise` carries (noise scale, stream) for the
/// SDE; `None` selects the deterministic RK4 path.
fn integrate(
    case: &RootCase,
    mut x: Vec<f64>,
    t_end: f64,
    cfg: &SchemeConfig,
    drift_scale: f64,
    noise: Option<(f64, CounterRng)>,
) -> Result<Vec<f64>> {
    let n = case.rank();
    let mut t = 0.0;
    let mut dt = cfg.dt_base;
    let mut accepted_run = 0u32;
    let mut attempts = 0u64;
    let mut drift = vec![0.0; n];
    let mut proposal = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];

    while t < t_end * (1.0 - 1e-14) {
        if attempts >= cfg.max_steps {
            return Err(Error::StepFailure {
                time_reached: t,
                message: format!("step budget {} exhausted", cfg.max_steps),
            });
        }
        case.drift_field_into(&x, &mut drift)
            .map_err(|e| Error::StepFailure { time_reached: t, message: e.to_string() })?;
        let max_disp = drift
            .iter()
            .map(|d| (d * drift_scale).abs())
            .fold(0.0f64, f64::max);
        let gap = case.simple_root_margin(&x);
        let drift_cap = if max_disp > 0.0 {
            DRIFT_CAP_FRACTION * gap / max_disp
        } else {
            f64::INFINITY
        };
        // Keep the per-pair noise below a sixth of the smallest gap, so a
        // collision within one step is a six-sigma event. Only binds while
        // gaps are far below the step scale (the singular-start phase).
        let noise_cap = match &noise {
            Some((ns, _)) if *ns > 0.0 => gap * gap / (72.0 * ns * ns),
            _ => f64::INFINITY,
        };
        let dt_prop = dt.min(t_end - t).min(drift_cap).min(noise_cap);
        // Above the collision margin the margin is absolute: no accepted
        // gap may drop below it. Inside it (only reachable from the warm
        // start at large rank) proposals may lose at most half the current
        // margin per step while the drift grows it.
        let gate = if gap >= cfg.collision_margin {
            cfg.collision_margin
        } else {
            0.5 * gap
        };

        let accepted = match &noise {
            Some((noise_scale, rng)) => {
                let sq = dt_prop.sqrt() * noise_scale;
                let base = attempts * n as u64;
                for i in 0..n {
                    proposal[i] = x[i]
                        + drift_scale * drift[i] * dt_prop
                        + sq * rng.normal_at(base + i as u64);
                }
                case.simple_root_margin(&proposal) >= gate
            }
            None => rk4_propose(
                case,
                &x,
                &drift,
                dt_prop,
                drift_scale,
                gate,
                &mut proposal,
                &mut stage,
                &mut k1,
                &mut k2,
                &mut k3,
                &mut k4,
            ),
        };
        attempts += 1;

        if accepted {
            std::mem::swap(&mut x, &mut proposal);
            t += dt_prop;
            debug_assert!(case.is_strictly_interior(&x));
            accepted_run += 1;
            if accepted_run >= RECOVERY_INTERVAL {
                dt = (dt * 2.0).min(cfg.dt_base);
                accepted_run = 0;
            }
        } else {
            accepted_run = 0;
            // Halving applies when the persistent step was the binding
            // constraint; cap- or remainder-limited proposals retry with
            // fresh noise at the same step state.
            if dt_prop >= dt {
                dt *= 0.5;
                if dt < cfg.dt_min {
                    return Err(Error::StepFailure {
                        time_reached: t,
                        message: format!(
                            "step size {dt:e} fell below the floor {:e}",
                            cfg.dt_min
                        ),
                    });
                }
            }
        }
    }
    Ok(x)
}

/// One classical RK4 proposal; false when any stage point or the result
/// leaves the margin-protected chamber.
#[allow(clippy::too_many_arguments)]
fn rk4_propose(
    case: &RootCase,
    x: &[f64],
    k1_drift: &[f64],
    dt: f64,
    scale: f64,
    margin: f64,
    out: &mut [f64],
    stage: &mut [f64],
    k1: &mut [f64],
    k2: &mut [f64],
    k3: &mut [f64],
    k4: &mut [f64],
) -> bool {
    let n = x.len();
    for i in 0..n {
        k1[i] = scale * k1_drift[i];
        stage[i] = x[i] + 0.5 * dt * k1[i];
    }
    if case.simple_root_margin(stage) < margin || case.drift_field_into(stage, k2).is_err() {
        return false;
    }
    for i in 0..n {
        k2[i] *= scale;
        stage[i] = x[i] + 0.5 * dt * k2[i];
    }
    if case.simple_root_margin(stage) < margin || case.drift_field_into(stage, k3).is_err() {
        return false;
    }
    for i in 0..n {
        k3[i] *= scale;
        stage[i] = x[i] + dt * k3[i];
    }
    if case.simple_root_margin(stage) < margin || case.drift_field_into(stage, k4).is_err() {
        return false;
    }
    for i in 0..n {
        k4[i] *= scale;
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    case.simple_root_margin(out) >= margin
}

/// Seeded collection of independent replica trajectories.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PathEnsemble {
    pub case: RootCase,
    pub k: f64,
    pub replicas: usize,
    pub seed: u64,
    pub clock: Clock,
    pub t_end: f64,
    pub terminal_states: Vec<ParticleState>,
}

impl PathEnsemble {
    /// Coordinate values of one replica.
    pub fn replica(&self, r: usize) -> &[f64] {
        &self.terminal_states[r].coords
    }

    /// All coordinates of all replicas, flattened.
    pub fn pooled(&self) -> Vec<f64> {
        self.terminal_states
            .iter()
            .flat_map(|s| s.coords.iter().cloned())
            .collect()
    }
}

/// Independent replicas from counter-derived streams; the result does not
/// depend on scheduling or the degree of parallelism. Infinite coupling
/// routes every replica through the deterministic ODE.
pub fn run_ensemble(
    case: &RootCase,
    k: f64,
    t_end: f64,
    cfg: &SchemeConfig,
    replicas: usize,
    seed: u64,
    clock: Clock,
) -> Result<PathEnsemble> {
    if replicas == 0 {
        return Err(Error::invalid("need at least one replica".to_string()));
    }
    let terminal_states: Vec<ParticleState> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            if k.is_infinite() {
                simulate_ode(case, t_end, cfg, &Start::Origin)
            } else {
                simulate_sde(case, k, t_end, cfg, seed, r, &Start::Origin, clock)
            }
            .map_err(|e| match e {
                Error::StepFailure { time_reached, message } => Error::StepFailure {
                    time_reached,
                    message: format!("replica {r}: {message}"),
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for s in &terminal_states {
        debug_assert!(case.is_strictly_interior(&s.coords));
    }
    Ok(PathEnsemble {
        case: *case,
        k,
        replicas,
        seed,
        clock,
        t_end,
        terminal_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(f: RootFamily, n: usize) -> RootCase {
        RootCase::new(f, n).unwrap()
    }

    #[test]
    fn warm_start_examples() {
        let ws = warm_start(&case(RootFamily::A, 3), 3e-6).unwrap();
        assert!((ws.coords[0] + 2e-6).abs() < 1e-20);
        assert!((ws.coords[1] - 1e-7).abs() < 1e-20); // delta/(10 N) nudge
        assert!((ws.coords[2] - 2e-6).abs() < 1e-20);

        let ws = warm_start(&case(RootFamily::B, 2), 2e-6).unwrap();
        assert!((ws.coords[0] - 1e-6).abs() < 1e-20);
        assert!((ws.coords[1] - 3e-6).abs() < 1e-20);

        for f in [RootFamily::A, RootFamily::B, RootFamily::C, RootFamily::D] {
            for n in f.min_rank()..=7 {
                let c = case(f, n);
                let ws = warm_start(&c, 1e-6).unwrap();
                assert!(
                    c.is_strictly_interior(&ws.coords),
                    "case {} N={n}",
                    f.label()
                );
            }
        }
    }

    #[test]
    fn single_particle_variance() {
        // N = 1 has no interaction: the TILDE-clock terminal value is
        // N(0, t/k).
        let c = case(RootFamily::A, 1);
        let k = 2.0;
        let mut cfg = SchemeConfig::default();
        cfg.dt_base = 0.01;
        let ens = run_ensemble(&c, k, 1.0, &cfg, 100_000, 41, Clock::Tilde).unwrap();
        let var: f64 = ens
            .terminal_states
            .iter()
            .map(|s| s.coords[0] * s.coords[0])
            .sum::<f64>()
            / ens.replicas as f64;
        assert!(
            (var - 1.0 / k).abs() / (1.0 / k) < 0.03,
            "variance {var} vs {}",
            1.0 / k
        );
    }

    #[test]
    fn clock_consistency_single_particle() {
        // X-tilde_t = X_{t/k}: identical laws for the interaction-free case.
        let c = case(RootFamily::A, 1);
        let k = 2.0;
        let t = 1.0;
        let mut cfg = SchemeConfig::default();
        cfg.dt_base = 0.005;
        let replicas = 20_000;
        let ho = run_ensemble(&c, k, t / k, &cfg, replicas, 7, Clock::Ho).unwrap();
        let tilde = run_ensemble(&c, k, t, &cfg, replicas, 8, Clock::Tilde).unwrap();
        let var = |e: &PathEnsemble| {
            e.terminal_states
                .iter()
                .map(|s| s.coords[0] * s.coords[0])
                .sum::<f64>()
                / e.replicas as f64
        };
        let (v1, v2) = (var(&ho), var(&tilde));
        let sigma = (t / k) * (2.0 / replicas as f64).sqrt();
        assert!(
            (v1 - v2).abs() < 4.5 * sigma,
            "HO var {v1} vs TILDE var {v2}"
        );
    }

    #[test]
    fn ordering_preserved_two_particles() {
        let c = case(RootFamily::A, 2);
        let cfg = SchemeConfig::for_horizon(0.5);
        for r in 0..50 {
            let s = simulate_sde(
                &c,
                1.0,
                0.5,
                &cfg,
                123,
                r,
                &Start::Interior(vec![-0.3, 0.3]),
                Clock::Tilde,
            )
            .unwrap();
            assert!(s.coords[1] - s.coords[0] > 0.0);
        }
    }

    #[test]
    fn ode_initial_velocity() {
        // d x_2 / dt at (-1, 1) is coth(2).
        let c = case(RootFamily::A, 2);
        let drift = c.drift_field(&[-1.0, 1.0]).unwrap();
        assert!((drift[1] - 1.0373147207275481).abs() < 1e-12);
        // Tiny-horizon RK4 reproduces it to first order.
        let cfg = SchemeConfig::for_horizon(1e-4);
        let s = simulate_ode(&c, 1e-4, &cfg, &Start::Interior(vec![-1.0, 1.0])).unwrap();
        let velocity = (s.coords[1] - 1.0) / 1e-4;
        assert!((velocity - drift[1]).abs() < 1e-3);
    }

    #[test]
    fn ode_preserves_reverse_negate_symmetry() {
        let c = case(RootFamily::A, 4);
        let cfg = SchemeConfig::for_horizon(1.0);
        let start = vec![-1.1, -0.2, 0.2, 1.1];
        let s = simulate_ode(&c, 1.0, &cfg, &Start::Interior(start)).unwrap();
        for i in 0..4 {
            assert!(
                (s.coords[i] + s.coords[3 - i]).abs() < 1e-9,
                "coords {:?}",
                s.coords
            );
        }
    }

    #[test]
    fn ode_from_origin_strictly_ordered() {
        let c = case(RootFamily::A, 3);
        let cfg = SchemeConfig::for_horizon(1.0);
        let s = simulate_ode(&c, 1.0, &cfg, &Start::Origin).unwrap();
        assert!(s.coords[0] < s.coords[1] && s.coords[1] < s.coords[2]);
    }

    #[test]
    fn large_coupling_matches_ode() {
        let c = case(RootFamily::A, 10);
        let cfg = SchemeConfig::for_horizon(0.5);
        let ode = simulate_ode(&c, 0.5, &cfg, &Start::Origin).unwrap();
        let sde = simulate_sde(&c, 1e6, 0.5, &cfg, 99, 0, &Start::Origin, Clock::Tilde).unwrap();
        let sup = ode
            .coords
            .iter()
            .zip(&sde.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 1e-2, "sup-norm gap {sup}");
    }

    #[test]
    fn determinism_and_single_replica_equivalence() {
        let c = case(RootFamily::B, 3);
        let cfg = SchemeConfig::for_horizon(0.2);
        let a = run_ensemble(&c, 1.0, 0.2, &cfg, 8, 2024, Clock::Tilde).unwrap();
        let b = run_ensemble(&c, 1.0, 0.2, &cfg, 8, 2024, Clock::Tilde).unwrap();
        for (x, y) in a.terminal_states.iter().zip(&b.terminal_states) {
            assert_eq!(x.coords, y.coords);
        }
        let single = run_ensemble(&c, 1.0, 0.2, &cfg, 1, 2024, Clock::Tilde).unwrap();
        let direct =
            simulate_sde(&c, 1.0, 0.2, &cfg, 2024, 0, &Start::Origin, Clock::Tilde).unwrap();
        assert_eq!(single.terminal_states[0].coords, direct.coords);
    }

    #[test]
    fn disjoint_seeds_agree_within_monte_carlo_error() {
        let c = case(RootFamily::A, 5);
        let cfg = SchemeConfig::for_horizon(0.3);
        let e1 = run_ensemble(&c, 1.0, 0.3, &cfg, 200, 1, Clock::Tilde).unwrap();
        let e2 = run_ensemble(&c, 1.0, 0.3, &cfg, 200, 2, Clock::Tilde).unwrap();
        let m2 = |e: &PathEnsemble| {
            let p = e.pooled();
            p.iter().map(|v| v * v).sum::<f64>() / p.len() as f64
        };
        let (a, b) = (m2(&e1), m2(&e2));
        assert!(a != b);
        assert!((a - b).abs() / a < 0.25, "m2 {a} vs {b}");
    }

    #[test]
    fn odd_moments_vanish_from_symmetric_origin() {
        // In law the case-A ensemble from 0 is reverse-negate symmetric.
        let c = case(RootFamily::A, 6);
        let cfg = SchemeConfig::for_horizon(0.3);
        let e = run_ensemble(&c, 1.0, 0.3, &cfg, 400, 31, Clock::Tilde).unwrap();
        let per_replica: Vec<f64> = e
            .terminal_states
            .iter()
            .map(|s| s.coords.iter().map(|v| v.powi(3)).sum::<f64>() / 6.0)
            .collect();
        let mean = per_replica.iter().sum::<f64>() / per_replica.len() as f64;
        let var = per_replica.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (per_replica.len() - 1) as f64;
        let stderr = (var / per_replica.len() as f64).sqrt();
        assert!(mean.abs() < 3.0 * stderr + 1e-3, "m3 {mean} +- {stderr}");
    }

    #[test]
    fn step_robustness_fourth_moment() {
        // Halving dt_base moves the fourth empirical moment by less than
        // the Monte Carlo error.
        let c = case(RootFamily::A, 50);
        let t = 0.5;
        let replicas = 200;
        let mut cfg = SchemeConfig::default();
        cfg.dt_base = 2e-4;
        let coarse = run_ensemble(&c, 1.0, t, &cfg, replicas, 5, Clock::Tilde).unwrap();
        cfg.dt_base = 1e-4;
        let fine = run_ensemble(&c, 1.0, t, &cfg, replicas, 5, Clock::Tilde).unwrap();
        let m4_per = |e: &PathEnsemble| -> Vec<f64> {
            e.terminal_states
                .iter()
                .map(|s| s.coords.iter().map(|v| v.powi(4)).sum::<f64>() / 50.0)
                .collect()
        };
        let stats = |v: &[f64]| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let var =
                v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
            (mean, (var / v.len() as f64).sqrt())
        };
        let (mc, sc) = stats(&m4_per(&coarse));
        let (mf, sf) = stats(&m4_per(&fine));
        let tol = (sc * sc + sf * sf).sqrt().max(1e-12);
        assert!(
            (mc - mf).abs() < 3.0 * tol,
            "m4 coarse {mc}+-{sc} vs fine {mf}+-{sf}"
        );
    }

    #[test]
    fn validation_errors() {
        let c = case(RootFamily::A, 2);
        let cfg = SchemeConfig::default();
        assert!(matches!(
            simulate_sde(&c, 0.3, 1.0, &cfg, 0, 0, &Start::Origin, Clock::Tilde),
            Err(Error::InvalidArgument(_))
        ));
        assert!(simulate_sde(&c, f64::INFINITY, 1.0, &cfg, 0, 0, &Start::Origin, Clock::Tilde)
            .is_err());
        assert!(matches!(
            simulate_sde(
                &c,
                1.0,
                1.0,
                &cfg,
                0,
                0,
                &Start::Interior(vec![1.0, -1.0]),
                Clock::Tilde
            ),
            Err(Error::InvalidArgument(_))
        ));
        let mut tiny = SchemeConfig::default();
        tiny.max_steps = 10;
        assert!(matches!(
            simulate_sde(&c, 1.0, 1.0, &tiny, 0, 0, &Start::Origin, Clock::Tilde),
            Err(Error::StepFailure { .. })
        ));
    }
}
