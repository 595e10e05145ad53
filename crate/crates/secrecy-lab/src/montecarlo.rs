//! Seeded, reproducible Monte-Carlo oracle for the analytic pipeline:
//! empirical MGFs, average capacities and both secrecy-capacity estimators.
//!
//! Work is split into fixed-size chunks; chunk `c` draws from ChaCha stream
//! `c` of the user seed and partial accumulators are merged in chunk order,
//! so a run is bit-identical for a given `(seed, n)` regardless of how many
//! threads execute it.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::channel::{ChannelDraw, SystemParams};
use crate::error::{Error, Result};

/// Samples per RNG substream.
const CHUNK: u64 = 1 << 16;

/// Mean and standard error of one Monte-Carlo quantity.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Streaming mean/variance accumulator (Welford), mergeable pairwise.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.count as f64) * (other.count as f64) / n as f64;
        self.count = n;
    }

    fn estimate(&self, seed: u64) -> McEstimate {
        let se = if self.count > 1 {
            (self.m2 / (self.count as f64 - 1.0) / self.count as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: se,
            n_samples: self.count,
            seed,
        }
    }
}

/// Estimates of the four capacity quantities from a single set of draws.
///
/// `c_s_diff` is E[C_D] − E[C_E]; `c_s_max` is E[max(C_D − C_E, 0)], the
/// clamped secrecy-capacity definition.
#[derive(Debug, Clone, Copy)]
pub struct CapacityEstimates {
    pub c_d: McEstimate,
    pub c_e: McEstimate,
    pub c_s_diff: McEstimate,
    pub c_s_max: McEstimate,
}

fn chunk_bounds(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        out.push((start, end));
        start = end;
    }
    out
}

fn run_chunks<A, F>(n: u64, seed: u64, per_draw: F) -> Vec<A>
where
    A: Default + Send,
    F: Fn(&mut A, &mut ChaCha12Rng) + Sync,
{
    chunk_bounds(n)
        .into_par_iter()
        .enumerate()
        .map(|(c, (start, end))| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut acc = A::default();
            for _ in start..end {
                per_draw(&mut acc, &mut rng);
            }
            acc
        })
        .collect()
}

/// Per-draw capacities at D and E, their difference and the clamped
/// difference, over `n` channel realizations.
pub fn estimate_capacities(params: &SystemParams, n: u64, seed: u64) -> Result<CapacityEstimates> {
    if n < 1 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    params.validate()?;

    #[derive(Default)]
    struct Acc {
        c_d: Welford,
        c_e: Welford,
        diff: Welford,
        clamped: Welford,
    }

    let partials = run_chunks::<Acc, _>(n, seed, |acc, rng| {
        let draw = ChannelDraw::sample(params, rng);
        let cd = (1.0 + draw.sinr_main(params)).log2();
        let ce = (1.0 + draw.sinr_eav(params)).log2();
        acc.c_d.push(cd);
        acc.c_e.push(ce);
        acc.diff.push(cd - ce);
        acc.clamped.push((cd - ce).max(0.0));
    });

    let mut total = Acc::default();
    for p in &partials {
        total.c_d.merge(&p.c_d);
        total.c_e.merge(&p.c_e);
        total.diff.merge(&p.diff);
        total.clamped.merge(&p.clamped);
    }

    let c_d = total.c_d.estimate(seed);
    let c_e = total.c_e.estimate(seed);
    let mut c_s_diff = total.diff.estimate(seed);
    // same draws on both sides, so the mean difference is the difference of
    // means by construction
    c_s_diff.mean = c_d.mean - c_e.mean;
    let c_s_max = total.clamped.estimate(seed);

    Ok(CapacityEstimates {
        c_d,
        c_e,
        c_s_diff,
        c_s_max,
    })
}

/// Empirical MGF: sample mean of e^{−z·weight(draw)}.
pub fn estimate_mgf<W>(
    weight: W,
    z: f64,
    params: &SystemParams,
    n: u64,
    seed: u64,
) -> Result<McEstimate>
where
    W: Fn(&ChannelDraw) -> f64 + Sync,
{
    if n < 1 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("estimate_mgf requires z >= 0, got {z}")));
    }
    params.validate()?;

    let partials = run_chunks::<Welford, _>(n, seed, |acc, rng| {
        let draw = ChannelDraw::sample(params, rng);
        acc.push((-z * weight(&draw)).exp());
    });
    let mut total = Welford::default();
    for p in &partials {
        total.merge(p);
    }
    Ok(total.estimate(seed))
}

/// Cumulative interference power at D: Σ P_K g_k r_k^{−β}.
pub fn interference_weight_d(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    draw.g_int_d
        .iter()
        .zip(&draw.r_int_d)
        .map(|(&g, &r)| params.p_k * g * r.powf(-params.beta))
        .sum()
}

/// Main-link received power P_s g_D r_D^{−β}.
pub fn main_link_weight(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    params.p_s * draw.g_d * params.r_d.powf(-params.beta)
}

/// Eavesdropper-link received power P_s g_E r_E^{−β}.
pub fn eav_link_weight(draw: &ChannelDraw, params: &SystemParams) -> f64 {
    params.p_s * draw.g_e * draw.r_e.powf(-params.beta)
}
