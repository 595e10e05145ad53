//! Average capacities of the main and eavesdropper links and the average
//! secrecy capacity, via the semi-infinite MGF-form integral
//!
//!   C̄ = (1/ln 2) ∫₀^∞ (1/z) e^{−zN₀} (M_int(z) − M_joint(z)) dz.
//!
//! The z → 0 endpoint carries a z^{2/β−1}-type nonsmoothness from the
//! incomplete-gamma prefactor; the first panel substitutes z = t^{β/2}
//! which flattens it to a Lipschitz integrand.

use crate::channel::SystemParams;
use crate::error::Result;
use crate::mgf::{self, MgfMethod, MgfValue};
use crate::quadrature;

/// Tolerances and panel layout of the capacity integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Boundary between the endpoint-substituted panel and the
    /// exponential-tail panel.
    pub z_split: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            z_split: 1.0,
        }
    }
}

/// Output of [`average_secrecy_capacity`].
///
/// `c_s` is the raw difference `c_d − c_e` and may be negative; the
/// max{·,0} clamp of the instantaneous definition is reported separately by
/// the Monte-Carlo estimator.
#[derive(Debug, Clone, Copy)]
pub struct CapacityResult {
    pub c_d: f64,
    pub c_e: f64,
    pub c_s: f64,
    /// Total integrand evaluations across both capacity integrals.
    pub evaluations: u64,
    /// The most expensive MGF evaluation path any integrand call used.
    pub max_method_used: MgfMethod,
}

/// Integrand of the average-capacity integral at a single z > 0.
pub fn capacity_integrand<F, G>(z: f64, mgf_int: &mut F, mgf_joint: &mut G, n_0: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<MgfValue>,
    G: FnMut(f64) -> Result<MgfValue>,
{
    let mi = mgf_int(z)?;
    let mj = mgf_joint(z)?;
    // the joint MGF carries an extra factor in (0,1], so mi >= mj up to
    // rounding; clamp the difference at zero
    Ok(((mi.value - mj.value).max(0.0) / z) * (-z * n_0).exp() / std::f64::consts::LN_2)
}

pub(crate) struct CapacityIntegral {
    pub value: f64,
    pub evaluations: u64,
    pub max_method: MgfMethod,
}

pub(crate) fn average_capacity_detailed<F, G>(
    mut mgf_int: F,
    mut mgf_joint: G,
    n_0: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<CapacityIntegral>
where
    F: FnMut(f64) -> Result<MgfValue>,
    G: FnMut(f64) -> Result<MgfValue>,
{
    let mut max_method = MgfMethod::ClosedForm;
    let ln2 = std::f64::consts::LN_2;

    let mut eval_at = |z: f64| -> Result<f64> {
        let mi = mgf_int(z)?;
        let mj = mgf_joint(z)?;
        max_method = max_method.max(mi.method).max(mj.method);
        Ok(((mi.value - mj.value).max(0.0) / z) * (-z * n_0).exp() / ln2)
    };

    // panel 1: (0, z_split] with z = t^{beta/2}
    let p = beta / 2.0;
    let t_end = cfg.z_split.powf(1.0 / p);
    let mut sub = |t: f64| -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let z = t.powf(p);
        Ok(eval_at(z)? * p * t.powf(p - 1.0))
    };
    let head = quadrature::adaptive(
        &mut sub,
        0.0,
        t_end,
        cfg.rel_tol,
        0.5 * cfg.abs_tol,
        cfg.max_subdivisions,
    )?;

    // panel 2: [z_split, z_max] where the e^{-z n0} tail is below tolerance
    let z_max = (-(cfg.abs_tol * ln2 * cfg.z_split).ln() / n_0).max(2.0 * cfg.z_split);
    let tail = quadrature::adaptive(
        &mut eval_at,
        cfg.z_split,
        z_max,
        cfg.rel_tol,
        0.5 * cfg.abs_tol,
        cfg.max_subdivisions,
    )?;

    Ok(CapacityIntegral {
        value: head.value + tail.value,
        evaluations: head.evaluations + tail.evaluations,
        max_method,
    })
}

/// ∫₀^∞ of the capacity integrand, in bits/s/Hz.
pub fn average_capacity<F, G>(
    mgf_int: F,
    mgf_joint: G,
    n_0: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<MgfValue>,
    G: FnMut(f64) -> Result<MgfValue>,
{
    Ok(average_capacity_detailed(mgf_int, mgf_joint, n_0, beta, cfg)?.value)
}

/// Average main-link capacity, eavesdropper capacity and their difference
/// for one parameter point.
pub fn average_secrecy_capacity(
    params: &SystemParams,
    cfg: &QuadratureConfig,
) -> Result<CapacityResult> {
    params.validate()?;

    let interference = |z: f64| mgf::mgf_interference(z, params, params.r_int);

    let joint_d = |z: f64| -> Result<MgfValue> {
        let link = mgf::mgf_main_link(z, params.p_s, params.r_d, params.beta)?;
        Ok(mgf::mgf_joint(&link, &interference(z)?))
    };
    let d = average_capacity_detailed(interference, joint_d, params.n_0, params.beta, cfg)?;

    let joint_e = |z: f64| -> Result<MgfValue> {
        let link = mgf::mgf_eav_link(z, params.p_s, params.r_max, params.beta)?;
        Ok(mgf::mgf_joint(&link, &interference(z)?))
    };
    let e = average_capacity_detailed(interference, joint_e, params.n_0, params.beta, cfg)?;

    Ok(CapacityResult {
        c_d: d.value,
        c_e: e.value,
        c_s: d.value - e.value,
        evaluations: d.evaluations + e.evaluations,
        max_method_used: d.max_method.max(e.max_method),
    })
}
