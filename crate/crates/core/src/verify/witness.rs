use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construction::{epsilon_for_index, select_start_index, CheeseConfig};
use crate::error::{CheeseError, Result};
use crate::geometry::{AdmissibleDiscs, Disc, DiscClass};
use crate::ratfunc::{eval_f_limit, eval_product, ln_factorial, LevelParams, ProductFunction};

/// A function of the regular layer separating `z0` from a finite set `B`.
///
/// All magnitudes are natural logs; `f_l(z) = f((z - a)/r)` for the unit
/// limit function `f` built with start index `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub l: usize,
    pub disc: Disc,
    pub exact: String,
    pub class: DiscClass,
    pub epsilon: f64,
    pub unit_epsilon: f64,
    pub m: u64,
    pub z0: Complex64,
    pub w0: Complex64,
    /// Certified bracket on `ln |f_l(z0)|`.
    pub ln_lower_at_z0: f64,
    pub ln_upper_at_z0: f64,
    /// Level of the partial product evaluated on `B`.
    pub n_eval: u64,
    /// `max_B ln |f_{l, n_eval}|` as evaluated.
    pub ln_max_on_b: f64,
    /// `max_B` of `ln((m!)^{-4} ∏ 1/(q_r - 1))`, valid outside the unit disc.
    pub ln_certified_upper_on_b: f64,
    /// `ln (n_eval + 1)!^{-4}`, the decay rate of the partial products.
    pub ln_reference_bound: f64,
    /// Whether `D_l` is among the discs the configuration materialized.
    pub within_config: bool,
}

impl Witness {
    /// The normalized function `f_l / f_l(z0)` is below one on `B`.
    pub fn separates(&self) -> bool {
        self.ln_certified_upper_on_b < self.ln_lower_at_z0
    }
}

fn clamp(x: f64) -> f64 {
    x.clamp(-f64::MAX, f64::MAX)
}

/// Upper bound for `ln |f_n(w)|` when `|w| > 1`, from `|g_r(w)| <= 1/(q_r - 1)`.
fn ln_upper_outside(f: &ProductFunction, w: Complex64) -> f64 {
    let mut acc = f.log_prefactor();
    for p in f.levels() {
        let ln_q = p.scaled_power(w).ln_abs;
        // ln(q - 1) = ln q + ln(1 - 1/q)
        acc -= ln_q + libm::log1p(-(-ln_q).exp());
    }
    acc
}

/// Searches the first `cap` admissible discs for an open `D_l ∋ z0` with
/// `B` off its closure and a finite certified lower bound at `z0`, then
/// evaluates the function at `z0` and on `B`.
pub fn regularity_witness(
    z0: Complex64,
    b: &[Complex64],
    cfg: &CheeseConfig,
    cap: usize,
    extra_levels: u64,
) -> Result<Witness> {
    if !cfg.square.contains(z0) || cfg.is_deleted(z0) {
        return Err(CheeseError::Domain(format!("z0 = {z0} is not a point of X")));
    }
    for &p in b {
        if !cfg.square.contains(p) || cfg.is_deleted(p) {
            return Err(CheeseError::Precondition(format!("{p} is not a point of X")));
        }
        if p == z0 {
            return Err(CheeseError::Precondition(format!("B contains z0 = {z0}")));
        }
    }
    let c0 = cfg.budget_c0;
    for (i, (exact, class)) in AdmissibleDiscs::new().take(cap).enumerate() {
        let l = i + 1;
        let d = exact.to_disc();
        // the limit function vanishes on and outside the unit circle
        if !d.contains_open(z0) || b.iter().any(|&p| d.contains_closed(p)) {
            continue;
        }
        let w0 = (z0 - d.center) / d.radius;
        let epsilon = epsilon_for_index(l, class, c0, &d)?;
        let unit_epsilon = epsilon * d.radius;
        let m = select_start_index(unit_epsilon)?;
        let bare = ProductFunction::new(m, m - 1)?;
        let lim = match eval_f_limit(&bare, w0) {
            Ok(v) if v.ln_lower().is_finite() => v,
            Ok(_) | Err(CheeseError::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        let n_eval = m + extra_levels;
        let f = ProductFunction::new(m, n_eval)?;
        let mut ln_max = f64::NEG_INFINITY;
        let mut ln_cert = f64::NEG_INFINITY;
        for &p in b {
            let w = (p - d.center) / d.radius;
            ln_max = ln_max.max(eval_product(&f, w)?.log_magnitude);
            ln_cert = ln_cert.max(ln_upper_outside(&f, w));
        }
        debug_assert!(f.levels().iter().all(|p: &LevelParams| p.n() >= m));
        return Ok(Witness {
            l,
            disc: d,
            exact: exact.to_string(),
            class,
            epsilon,
            unit_epsilon,
            m,
            z0,
            w0,
            ln_lower_at_z0: clamp(lim.ln_lower()),
            ln_upper_at_z0: clamp(lim.ln_upper()),
            n_eval,
            ln_max_on_b: clamp(ln_max),
            ln_certified_upper_on_b: clamp(ln_cert),
            ln_reference_bound: -4.0 * ln_factorial(n_eval + 1),
            within_config: l <= cfg.params.disc_count,
        });
    }
    Err(CheeseError::SearchExhausted(cap))
}
