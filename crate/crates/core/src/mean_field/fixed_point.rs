use serde::{Deserialize, Serialize};

use super::oracle::nd_oracle;

/// How the bare mean coupling is turned into the exponent scale of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaScaling {
    /// `β = J0·N`; the symmetric point loses stability at `J0 = 3/N`.
    #[default]
    J0n,
    /// `β = J0`, the exponent taken literally.
    Bare,
}

impl BetaScaling {
    pub fn beta(self, j0: f64, n_firms: usize) -> f64 {
        match self {
            BetaScaling::J0n => j0 * n_firms as f64,
            BetaScaling::Bare => j0,
        }
    }
}

/// A `(p_up, q_down)` pair of the mean-field map at coupling `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldPoint {
    pub p_up: f64,
    pub q_down: f64,
    pub beta: f64,
    pub stable: bool,
    /// Spectral radius of the map's Jacobian at this point.
    pub spectral_radius: f64,
    /// `max(|p' - p|, |q' - q|)`.
    pub residual: f64,
}

impl MeanFieldPoint {
    /// Expected default fraction of an independent firm moving with these
    /// probabilities, from a uniform start over the non-default classes.
    pub fn predicted_nd_frac(&self, steps: u32, r_max: u32) -> f64 {
        nd_oracle(self.p_up, self.q_down, steps, r_max).expect("fixed point lies on the simplex")
    }
}

/// One application of the mean-field map: a softmax over the exponents
/// `β·p`, `β·q`, `β·(1 − p − q)` for up, down and stay.
pub fn mf_map(beta: f64, p_up: f64, q_down: f64) -> (f64, f64) {
    let e = [beta * p_up, beta * q_down, beta * (1.0 - p_up - q_down)];
    let m = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = e.map(|x| (x - m).exp());
    let z = w[0] + w[1] + w[2];
    (w[0] / z, w[1] / z)
}

fn residual(beta: f64, p: f64, q: f64) -> f64 {
    let (p1, q1) = mf_map(beta, p, q);
    (p1 - p).abs().max((q1 - q).abs())
}

/// Central-difference Jacobian of [`mf_map`].
pub fn jacobian(beta: f64, p: f64, q: f64, h: f64) -> [[f64; 2]; 2] {
    let (pp, qp) = mf_map(beta, p + h, q);
    let (pm, qm) = mf_map(beta, p - h, q);
    let (pq, qq) = mf_map(beta, p, q + h);
    let (pqm, qqm) = mf_map(beta, p, q - h);
    [
        [(pp - pm) / (2.0 * h), (pq - pqm) / (2.0 * h)],
        [(qp - qm) / (2.0 * h), (qq - qqm) / (2.0 * h)],
    ]
}

pub fn spectral_radius(m: [[f64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (tr / 2.0 + s).abs().max((tr / 2.0 - s).abs())
    } else {
        // complex pair: |λ|² = det
        det.sqrt()
    }
}

/// Spectral radius of the map's Jacobian at the symmetric point `(1/3, 1/3)`.
pub fn symmetric_point_radius(beta: f64) -> f64 {
    spectral_radius(jacobian(
        beta,
        1.0 / 3.0,
        1.0 / 3.0,
        FixedPointConfig::default().jacobian_step,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iter: usize,
    /// Divisions per edge of the simplex grid of starting points.
    pub grid_divisions: usize,
    pub dedup_distance: f64,
    pub jacobian_step: f64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        FixedPointConfig {
            damping: 0.5,
            tolerance: 1e-10,
            max_iter: 100_000,
            grid_divisions: 6,
            dedup_distance: 1e-6,
            jacobian_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonConvergence {
    pub start: (f64, f64),
    pub last: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSearch {
    pub beta: f64,
    pub points: Vec<MeanFieldPoint>,
    pub failures: Vec<NonConvergence>,
}

impl FixedPointSearch {
    pub fn stable(&self) -> impl Iterator<Item = &MeanFieldPoint> {
        self.points.iter().filter(|p| p.stable)
    }

    /// Default fraction averaged over the stable fixed points, each taken as
    /// equally likely.
    pub fn predicted_nd_frac(&self, steps: u32, r_max: u32) -> Option<f64> {
        let preds: Vec<f64> = self.stable().map(|p| p.predicted_nd_frac(steps, r_max)).collect();
        (!preds.is_empty()).then(|| preds.iter().sum::<f64>() / preds.len() as f64)
    }
}

/// Starting points `(i/m, j/m)` with `i + j <= m`.
fn simplex_grid(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for i in 0..=m {
        for j in 0..=(m - i) {
            out.push((i as f64 / m as f64, j as f64 / m as f64));
        }
    }
    out
}

fn iterate(beta: f64, start: (f64, f64), cfg: &FixedPointConfig) -> Result<(f64, f64), NonConvergence> {
    let (mut p, mut q) = start;
    for _ in 0..cfg.max_iter {
        let (p1, q1) = mf_map(beta, p, q);
        if (p1 - p).abs().max((q1 - q).abs()) < cfg.tolerance {
            return Ok((p, q));
        }
        p += cfg.damping * (p1 - p);
        q += cfg.damping * (q1 - q);
    }
    Err(NonConvergence {
        start,
        last: (p, q),
        residual: residual(beta, p, q),
    })
}

pub fn mf_fixed_points(beta: f64) -> FixedPointSearch {
    mf_fixed_points_with(beta, &FixedPointConfig::default())
}

/// Multi-start damped iteration over a simplex grid of starts.
///
/// Damped iteration only settles on points that are attracting along the
/// path it takes, so the exact symmetric point is always seeded too: it is a
/// fixed point for every `beta` and the only one found unstable past `beta = 3`.
pub fn mf_fixed_points_with(beta: f64, cfg: &FixedPointConfig) -> FixedPointSearch {
    assert!(beta >= 0.0 && beta.is_finite(), "beta must be finite and >= 0");
    let mut starts = vec![(1.0 / 3.0, 1.0 / 3.0)];
    starts.extend(simplex_grid(cfg.grid_divisions));

    let mut points: Vec<MeanFieldPoint> = Vec::new();
    let mut failures = Vec::new();
    for start in starts {
        match iterate(beta, start, cfg) {
            Ok((p, q)) => {
                let dup = points
                    .iter()
                    .any(|x| (x.p_up - p).hypot(x.q_down - q) < cfg.dedup_distance);
                if dup {
                    continue;
                }
                let radius = spectral_radius(jacobian(beta, p, q, cfg.jacobian_step));
                points.push(MeanFieldPoint {
                    p_up: p,
                    q_down: q,
                    beta,
                    stable: radius < 1.0,
                    spectral_radius: radius,
                    residual: residual(beta, p, q),
                });
            }
            Err(nc) => failures.push(nc),
        }
    }
    FixedPointSearch {
        beta,
        points,
        failures,
    }
}

/// Bisects for the `beta` at which the symmetric point's spectral radius
/// reaches 1.
pub fn critical_beta(lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    assert!(symmetric_point_radius(lo) < 1.0 && symmetric_point_radius(hi) > 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if symmetric_point_radius(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
