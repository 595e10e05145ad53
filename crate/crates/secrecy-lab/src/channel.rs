//! System parameters, the stochastic channel model (double-Rayleigh gains,
//! uniform-disk distances) and instantaneous SINR / secrecy capacity.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel_k0;

/// All system-level parameters in one validated record.
///
/// Powers are in watts, distances in meters, capacities in bits/s/Hz.
/// `beta > 2` strictly: the closed-form MGFs exclude the free-space model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Source transmit power P_s (W).
    pub p_s: f64,
    /// Per-interferer transmit power P_K (W), identical across interferers.
    pub p_k: f64,
    /// Number of co-channel interferers K.
    pub k: usize,
    /// Source-to-destination distance r_D (m), fixed and known.
    pub r_d: f64,
    /// Maximum eavesdropper radius r_max (m).
    pub r_max: f64,
    /// Maximum interferer radius R (m).
    pub r_int: f64,
    /// Path-loss exponent β, strictly greater than 2.
    pub beta: f64,
    /// Noise power N_0 (W).
    pub n_0: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            p_s: 10.0,
            p_k: 10.0,
            k: 1,
            r_d: 4.0,
            r_max: 10.0,
            r_int: 20.0,
            beta: 2.7,
            n_0: 1.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("p_s", self.p_s),
            ("p_k", self.p_k),
            ("r_d", self.r_d),
            ("r_max", self.r_max),
            ("r_int", self.r_int),
            ("n_0", self.n_0),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.beta > 2.0) {
            return Err(Error::InvalidConfig(format!(
                "beta must be strictly greater than 2, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// One Monte-Carlo realization of every gain and distance for both links.
#[derive(Debug, Clone)]
pub struct ChannelDraw {
    /// Main-link double-Rayleigh gain g_D.
    pub g_d: f64,
    /// Eavesdropper-link gain g_E.
    pub g_e: f64,
    /// Eavesdropper distance r_E, uniform in the disk of radius r_max.
    pub r_e: f64,
    pub g_int_d: Vec<f64>,
    pub r_int_d: Vec<f64>,
    pub g_int_e: Vec<f64>,
    pub r_int_e: Vec<f64>,
}

impl ChannelDraw {
    /// Draws all channel variates for one realization. Interferer positions
    /// at D and E are independent disks of radius `r_int`.
    pub fn sample<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> ChannelDraw {
        let k = params.k;
        let mut draw = ChannelDraw {
            g_d: sample_double_rayleigh_gain(rng),
            g_e: sample_double_rayleigh_gain(rng),
            r_e: sample_disk_distance(params.r_max, rng),
            g_int_d: Vec::with_capacity(k),
            r_int_d: Vec::with_capacity(k),
            g_int_e: Vec::with_capacity(k),
            r_int_e: Vec::with_capacity(k),
        };
        for _ in 0..k {
            draw.g_int_d.push(sample_double_rayleigh_gain(rng));
            draw.r_int_d.push(sample_disk_distance(params.r_int, rng));
            draw.g_int_e.push(sample_double_rayleigh_gain(rng));
            draw.r_int_e.push(sample_disk_distance(params.r_int, rng));
        }
        draw
    }

    /// Instantaneous SINR at the destination.
    pub fn sinr_main(&self, params: &SystemParams) -> f64 {
        let signal = params.p_s * self.g_d * self.r_d_pathloss(params);
        let interference: f64 = self
            .g_int_d
            .iter()
            .zip(&self.r_int_d)
            .map(|(&g, &r)| params.p_k * g * r.powf(-params.beta))
            .sum();
        signal / (interference + params.n_0)
    }

    /// Instantaneous SINR at the eavesdropper.
    pub fn sinr_eav(&self, params: &SystemParams) -> f64 {
        let signal = params.p_s * self.g_e * self.r_e.powf(-params.beta);
        let interference: f64 = self
            .g_int_e
            .iter()
            .zip(&self.r_int_e)
            .map(|(&g, &r)| params.p_k * g * r.powf(-params.beta))
            .sum();
        signal / (interference + params.n_0)
    }

    fn r_d_pathloss(&self, params: &SystemParams) -> f64 {
        params.r_d.powf(-params.beta)
    }
}

/// Density g·K₀(g) of the double-Rayleigh gain; 0 at g = 0 by continuity.
pub fn double_rayleigh_pdf(g: f64) -> Result<f64> {
    if g < 0.0 {
        return Err(Error::Domain(format!(
            "double_rayleigh_pdf requires g >= 0, got {g}"
        )));
    }
    if g == 0.0 {
        return Ok(0.0);
    }
    Ok(g * bessel_k0(g)?)
}

/// Product of two independent unit-scale Rayleigh variates; the product has
/// density g·K₀(g).
pub fn sample_double_rayleigh_gain<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rayleigh(rng) * rayleigh(rng)
}

fn rayleigh<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U keeps the log argument away from zero.
    let u: f64 = rng.gen::<f64>();
    (-2.0 * (1.0 - u).ln()).sqrt()
}

/// Distance of a point uniform in a disk: r = radius·√U, density 2r/radius².
pub fn sample_disk_distance<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen::<f64>();
    radius * (1.0 - u).sqrt()
}

/// signal / (Σ interference + N₀).
pub fn sinr(signal_power: f64, interference_powers: &[f64], n_0: f64) -> Result<f64> {
    if !(n_0 > 0.0) {
        return Err(Error::Domain(format!("sinr requires n_0 > 0, got {n_0}")));
    }
    let total: f64 = interference_powers.iter().sum();
    Ok(signal_power / (total + n_0))
}

/// Received power P·g·r^{−β}.
pub fn received_power(p_tx: f64, g: f64, r: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "received_power requires r > 0, got {r}"
        )));
    }
    Ok(p_tx * g * r.powf(-beta))
}

/// max(log₂(1+γ_D) − log₂(1+γ_E), 0).
pub fn instantaneous_secrecy_capacity(gamma_d: f64, gamma_e: f64) -> f64 {
    ((1.0 + gamma_d).log2() - (1.0 + gamma_e).log2()).max(0.0)
}
