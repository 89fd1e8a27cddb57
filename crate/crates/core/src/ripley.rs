//! Ripley's K with isotropic edge correction, Monte Carlo null envelopes and
//! per-radius tests.
//!
//! K̂(t) = λ̂⁻¹ Σᵢ Σ_{j≠i} w_ij⁻¹ I(d_ij < t) / N with λ̂ = N/|A|, where w_ij is
//! the fraction of the circle about point i through point j that lies in the
//! study region. L̂(t) = √(K̂(t)/π).

use std::f64::consts::PI;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ann::Tail;
use crate::areal::ArealStructure;
use crate::error::{Error, Result};
use crate::geometry::{edge_weight_with, min_pairwise_distance, ArcMethod, Point, Region};
use crate::rng::{derive_seed, rng_from_seed, STREAM_NULL_SIM};

pub const DEFAULT_N_SIM: usize = 1000;
pub const MIN_N_SIM: usize = 100;
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-4;
const RADII_PER_GRID: usize = 5;

/// Ascending, strictly increasing radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusGrid(Vec<f64>);

impl RadiusGrid {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::Domain(format!(
                "radii must be positive and finite: {radii:?}"
            )));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidRadiusGrid {
                t_min: radii[0],
                t_max: *radii.last().unwrap(),
            });
        }
        Ok(RadiusGrid(radii))
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.0.last().expect("nonempty")
    }
}

/// Five radii from twice the minimum centroid spacing to a quarter of the
/// study area's width (x-extent), linearly spaced.
pub fn radius_grid(structure: &ArealStructure) -> Result<RadiusGrid> {
    let t_min = 2.0 * min_pairwise_distance(&structure.centroids())?;
    let t_max = structure.region().bbox().width() / 4.0;
    if !(t_min < t_max) {
        return Err(Error::InvalidRadiusGrid { t_min, t_max });
    }
    let step = (t_max - t_min) / (RADII_PER_GRID - 1) as f64;
    let mut radii: Vec<f64> = (0..RADII_PER_GRID).map(|k| t_min + k as f64 * step).collect();
    radii[RADII_PER_GRID - 1] = t_max;
    RadiusGrid::new(radii)
}

/// Denominator convention for K̂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// |A| / N², the literal estimator.
    #[default]
    NSquared,
    /// |A| / (N(N−1)).
    NNMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KOptions {
    pub normalization: Normalization,
    pub arc: ArcMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KEstimate {
    pub radii: RadiusGrid,
    pub khat: Vec<f64>,
    pub lhat: Vec<f64>,
    pub n: usize,
    pub area: f64,
    pub lambda_hat: f64,
}

pub fn k_hat(points: &[Point], region: &Region, radii: &RadiusGrid) -> Result<KEstimate> {
    k_hat_with(points, region, radii, KOptions::default())
}

pub fn k_hat_with(
    points: &[Point],
    region: &Region,
    radii: &RadiusGrid,
    opts: KOptions,
) -> Result<KEstimate> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: n });
    }
    if let Some(p) = points.iter().find(|p| !region.contains(p)) {
        return Err(Error::Domain(format!(
            "point ({}, {}) lies outside the region",
            p.x, p.y
        )));
    }
    let ts = radii.radii();
    let t_max = radii.max();
    // weight mass entering at each radius bin, prefix-summed below
    let mut bins = vec![0.0; ts.len()];
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = p.distance(q);
            if !(d < t_max) {
                continue;
            }
            let w = if d == 0.0 {
                1.0
            } else {
                edge_weight_with(p, d, region, opts.arc)?
            };
            let first = ts.partition_point(|&t| t <= d);
            bins[first] += 1.0 / w;
        }
    }
    let area = region.area();
    let nf = n as f64;
    let scale = match opts.normalization {
        Normalization::NSquared => area / (nf * nf),
        Normalization::NNMinusOne => area / (nf * (nf - 1.0)),
    };
    let mut acc = 0.0;
    let khat: Vec<f64> = bins
        .iter()
        .map(|b| {
            acc += b;
            acc * scale
        })
        .collect();
    let lhat = khat.iter().map(|k| (k / PI).sqrt()).collect();
    Ok(KEstimate {
        radii: radii.clone(),
        khat,
        lhat,
        n,
        area,
        lambda_hat: nf / area,
    })
}

/// `n` points i.i.d. uniform on `region`, by rejection from its bounding box.
pub fn sample_csr(n: usize, region: &Region, seed: u64) -> Result<Vec<Point>> {
    let bbox = region.bbox();
    let rate = region.area() / bbox.area();
    if !(rate >= MIN_ACCEPTANCE_RATE) {
        return Err(Error::SamplingInefficiency {
            rate,
            floor: MIN_ACCEPTANCE_RATE,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = Point::new(
            bbox.xmin + rng.random::<f64>() * bbox.width(),
            bbox.ymin + rng.random::<f64>() * bbox.height(),
        );
        if region.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Per-radius null distribution of K̂ for `n` CSR points.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub radii: RadiusGrid,
    pub n: usize,
    pub n_sim: usize,
    pub seed: u64,
    pub normalization: Normalization,
    /// `samples[k]` holds the sorted simulated K̂ at radius k.
    pub samples: Vec<Vec<f64>>,
    pub q025: Vec<f64>,
    pub q05: Vec<f64>,
    pub q95: Vec<f64>,
    pub q975: Vec<f64>,
}

/// The ⌈q·n⌉-th order statistic (1-based) of sorted data.
pub fn order_statistic(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    // guard against q·n landing a hair above an integer
    let rank = ((q * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    sorted[rank - 1]
}

impl Envelope {
    pub fn quantile(&self, radius_index: usize, q: f64) -> f64 {
        order_statistic(&self.samples[radius_index], q)
    }
}

pub fn mc_envelope(
    n: usize,
    region: &Region,
    radii: &RadiusGrid,
    n_sim: usize,
    seed: u64,
) -> Result<Envelope> {
    mc_envelope_with(n, region, radii, n_sim, seed, KOptions::default())
}

/// Simulation `s` draws from substream `(seed, s)`, so the result does not
/// depend on how rayon schedules the work.
pub fn mc_envelope_with(
    n: usize,
    region: &Region,
    radii: &RadiusGrid,
    n_sim: usize,
    seed: u64,
    opts: KOptions,
) -> Result<Envelope> {
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: n });
    }
    if n_sim < MIN_N_SIM {
        return Err(Error::Domain(format!(
            "n_sim must be at least {MIN_N_SIM}, got {n_sim}"
        )));
    }
    let sims: Vec<Vec<f64>> = (0..n_sim)
        .into_par_iter()
        .map(|s| {
            let sim_seed = derive_seed(seed, STREAM_NULL_SIM, s as u64);
            sample_csr(n, region, sim_seed)
                .and_then(|pts| k_hat_with(&pts, region, radii, opts))
                .map(|k| k.khat)
                .map_err(|e| Error::Simulation {
                    index: s,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    let samples: Vec<Vec<f64>> = (0..radii.len())
        .map(|k| {
            let mut col: Vec<f64> = sims.iter().map(|s| s[k]).collect();
            col.sort_by(f64::total_cmp);
            col
        })
        .collect();
    let q = |level: f64| {
        samples
            .iter()
            .map(|s| order_statistic(s, level))
            .collect::<Vec<_>>()
    };
    Ok(Envelope {
        radii: radii.clone(),
        n,
        n_sim,
        seed,
        normalization: opts.normalization,
        q025: q(0.025),
        q05: q(0.05),
        q95: q(0.95),
        q975: q(0.975),
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KTestResult {
    pub estimate: KEstimate,
    pub tail: Tail,
    /// Lower and upper critical values per radius (lower is -inf for the
    /// right-tailed test).
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub reject: Vec<bool>,
}

pub fn k_test(points: &[Point], region: &Region, envelope: &Envelope, tail: Tail) -> Result<KTestResult> {
    k_test_with(points, region, envelope, tail, 0.05, ArcMethod::default())
}

/// Right tail rejects when K̂ > q(1−α); two-sided rejects when K̂ > q(1−α/2)
/// or K̂ < q(α/2).
pub fn k_test_with(
    points: &[Point],
    region: &Region,
    envelope: &Envelope,
    tail: Tail,
    alpha: f64,
    arc: ArcMethod,
) -> Result<KTestResult> {
    if points.len() != envelope.n {
        return Err(Error::Contract(format!(
            "pattern has {} points but the envelope was built for {}",
            points.len(),
            envelope.n
        )));
    }
    let opts = KOptions {
        normalization: envelope.normalization,
        arc,
    };
    let estimate = k_hat_with(points, region, &envelope.radii, opts)?;
    decide(estimate, envelope, tail, alpha)
}

/// Apply the envelope decision rule to an existing estimate.
pub fn decide(estimate: KEstimate, envelope: &Envelope, tail: Tail, alpha: f64) -> Result<KTestResult> {
    if estimate.radii != envelope.radii || estimate.n != envelope.n {
        return Err(Error::Contract(
            "estimate and envelope disagree on radii or point count".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let m = envelope.radii.len();
    let (lower, upper): (Vec<f64>, Vec<f64>) = match tail {
        Tail::Right => (0..m)
            .map(|k| (f64::NEG_INFINITY, envelope.quantile(k, 1.0 - alpha)))
            .unzip(),
        Tail::Two => (0..m)
            .map(|k| {
                (
                    envelope.quantile(k, alpha / 2.0),
                    envelope.quantile(k, 1.0 - alpha / 2.0),
                )
            })
            .unzip(),
        Tail::Left => {
            return Err(Error::Domain(
                "the K test supports two-sided and right-tailed alternatives".into(),
            ))
        }
    };
    let reject = estimate
        .khat
        .iter()
        .zip(lower.iter().zip(&upper))
        .map(|(k, (lo, hi))| k > hi || k < lo)
        .collect();
    Ok(KTestResult {
        estimate,
        tail,
        lower,
        upper,
        reject,
    })
}
