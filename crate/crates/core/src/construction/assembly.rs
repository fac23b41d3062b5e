use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::config::{CheeseConfig, Deletion, Provenance, WermerLevel};
use super::regular::build_regular_cheese;
use super::Caps;
use crate::error::{CheeseError, Result};
use crate::geometry::{dist_to_square_boundary, Disc, Square};

/// `L_n = n/(n+1)`.
pub fn level_scale(n: u32) -> f64 {
    n as f64 / (n as f64 + 1.0)
}

/// `2^{-(n+1)}·C·(1 - L_n)²`.
pub fn length_budget(n: u32, c: f64) -> f64 {
    let gap = 1.0 - level_scale(n);
    libm::ldexp(c * gap * gap, -(n as i32) - 1)
}

/// Source of the domains deleted at scale `n` of the second layer.
pub trait WermerProvider: Sync {
    /// Discs inside `scale·Q` whose boundary lengths sum to less than
    /// `length_budget`.
    fn domains(&self, n: u32, scale: f64, length_budget: f64) -> Vec<Disc>;
}

/// Deletes nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyWermer;

impl WermerProvider for EmptyWermer {
    fn domains(&self, _n: u32, _scale: f64, _length_budget: f64) -> Vec<Disc> {
        Vec::new()
    }
}

/// `per_level` equal discs at pseudo-random positions, using half the
/// length budget.
#[derive(Debug, Clone, Copy)]
pub struct StubWermer {
    pub per_level: usize,
    pub seed: u64,
}

impl WermerProvider for StubWermer {
    fn domains(&self, n: u32, scale: f64, length_budget: f64) -> Vec<Disc> {
        if self.per_level == 0 {
            return Vec::new();
        }
        // large budgets would give discs wider than L_n Q
        let rho = (0.5 * length_budget / (2.0 * PI * self.per_level as f64)).min(0.25 * scale);
        let reach = scale - rho;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n as u64);
        (0..self.per_level)
            .map(|_| {
                let x = rng.random_range(-reach..reach);
                let y = rng.random_range(-reach..reach);
                Disc { center: Complex64::new(x, y), radius: rho }
            })
            .collect()
    }
}

fn inside_scaled(d: &Disc, scale: f64) -> bool {
    d.radius > 0.0 && d.center.re.abs() + d.radius <= scale && d.center.im.abs() + d.radius <= scale
}

/// `X = X_1 ∩ X_2`: the regular layer built with `C0 = C/(4π)` plus the
/// provider's domains for `n = 1..=n_levels`.
pub fn assemble_cheese(
    c: f64,
    disc_count: usize,
    n_levels: u32,
    provider: &dyn WermerProvider,
    caps: Caps,
) -> Result<CheeseConfig> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(CheeseError::Precondition(format!("C must be positive, got {c}")));
    }
    let c0 = c / (4.0 * PI);
    let mut cfg = build_regular_cheese(c0, disc_count, caps.n_cap, caps.disc_cap)?;
    cfg.budget_c = c;
    cfg.params.c = c;
    cfg.params.n_levels = n_levels;

    let sq = Square::UNIT;
    let mut wermer_total = 0.0;
    for n in 1..=n_levels {
        let scale = level_scale(n);
        let budget = length_budget(n, c);
        let discs = provider.domains(n, scale, budget);
        if let Some(bad) = discs.iter().find(|d| !inside_scaled(d, scale)) {
            return Err(CheeseError::Budget(format!("domain {bad:?} of scale {n} leaves L_n·Q")));
        }
        let length: f64 = discs.iter().map(Disc::boundary_length).sum();
        if !(length < budget) {
            return Err(CheeseError::Budget(format!(
                "scale {n} domains have length {length}, budget {budget}"
            )));
        }
        let mut boundary_sum = 0.0;
        for d in &discs {
            let s = dist_to_square_boundary(d, &sq);
            boundary_sum += d.boundary_length() / (s * s);
        }
        if cfg.deletions.len() + discs.len() > caps.disc_cap {
            return Err(CheeseError::Resource(format!("deletions exceed the cap {}", caps.disc_cap)));
        }
        cfg.ledger.wermer_levels.push(WermerLevel {
            n,
            scale,
            count: discs.len(),
            length,
            length_budget: budget,
            boundary_sum,
        });
        wermer_total += boundary_sum;
        cfg.deletions.extend(discs.into_iter().enumerate().map(|(k, disc)| Deletion {
            disc,
            provenance: Provenance::Wermer { n, k },
        }));
    }
    if let Some(per) = cfg.ledger.wermer_levels.iter().map(|w| w.count).max() {
        cfg.params.wermer_per_level = per;
    }
    cfg.ledger.wermer_boundary_sum = wermer_total;
    cfg.ledger.combined_boundary_sum = 2.0 * PI * cfg.ledger.mckissick_boundary_certified + wermer_total;
    cfg.ledger.integral_bound = 2.0 * cfg.ledger.combined_boundary_sum;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_and_budget_examples() {
        assert_eq!(level_scale(3), 0.75);
        assert_eq!(length_budget(1, 1.0), 0.0625);
        let c = 2.5;
        let total: f64 = (1..60).map(|n| length_budget(n, c) / (1.0 - level_scale(n)).powi(2)).sum();
        assert!((total - c / 2.0).abs() < 1e-15);
    }

    #[test]
    fn c_four_pi_gives_unit_c0() {
        let cfg = assemble_cheese(4.0 * PI, 4, 0, &EmptyWermer, Caps::default()).unwrap();
        assert!((cfg.budget_c0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_provider_is_regular_layer() {
        let caps = Caps { n_cap: 5, disc_cap: 1 << 22 };
        let x = assemble_cheese(4.0 * PI * 64.0, 6, 5, &EmptyWermer, caps).unwrap();
        let x1 = build_regular_cheese(64.0, 6, 5, 1 << 22).unwrap();
        assert_eq!(x.deletions, x1.deletions);
        assert_eq!(x.ledger.wermer_boundary_sum, 0.0);
        assert!(x.ledger.wermer_levels.iter().all(|w| w.count == 0 && w.boundary_sum == 0.0));
    }

    #[test]
    fn stub_respects_each_scale() {
        let c = 4.0 * PI;
        let stub = StubWermer { per_level: 3, seed: 11 };
        let cfg = assemble_cheese(c, 8, 6, &stub, Caps::default()).unwrap();
        assert_eq!(cfg.wermer().count(), 18);
        for w in &cfg.ledger.wermer_levels {
            assert!(w.length < w.length_budget);
            // s >= 1 - L_n for every domain inside L_n·Q
            assert!(w.boundary_sum <= w.length / (1.0 - w.scale).powi(2));
        }
        assert!(cfg.ledger.wermer_boundary_sum < c / 2.0);
        assert!(cfg.ledger.combined_boundary_sum < c);
    }

    #[test]
    fn single_disc_contribution() {
        let c = 1.0;
        let stub = StubWermer { per_level: 1, seed: 0 };
        let discs = stub.domains(2, level_scale(2), length_budget(2, c));
        assert_eq!(discs.len(), 1);
        let d = discs[0];
        assert!(d.boundary_length() < length_budget(2, c));
        assert!(dist_to_square_boundary(&d, &Square::UNIT) >= 1.0 - level_scale(2));
    }

    struct Greedy;
    impl WermerProvider for Greedy {
        fn domains(&self, _n: u32, _scale: f64, budget: f64) -> Vec<Disc> {
            vec![Disc { center: Complex64::new(0.0, 0.0), radius: budget / (2.0 * PI) }]
        }
    }

    #[test]
    fn overspending_provider_is_rejected() {
        let r = assemble_cheese(1.0, 1, 2, &Greedy, Caps::default());
        assert!(matches!(r, Err(CheeseError::Budget(_))));
    }

    #[test]
    fn stub_is_deterministic() {
        let s = StubWermer { per_level: 5, seed: 3 };
        assert_eq!(s.domains(4, 0.8, 0.01), s.domains(4, 0.8, 0.01));
        assert_ne!(s.domains(4, 0.8, 0.01), s.domains(5, 0.8, 0.01));
    }
}
