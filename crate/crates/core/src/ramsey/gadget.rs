//! The mod-8 norm coloring and a randomized audit of the obtuse isosceles
//! gadget it is meant to defeat.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::rng::{in_ball, random_stiefel, trial_rng};

/// `floor(2 |x|^2) mod 8`.
pub fn mod8_color(x: &[f64]) -> u8 {
    let v: f64 = 2.0 * x.iter().map(|c| c * c).sum::<f64>();
    (v.floor() as i64).rem_euclid(8) as u8
}

/// Values of `2|x|^2` this close to an integer are not trusted.
pub const BOUNDARY_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetShape {
    /// Base 2, legs `1 + xi` (apex height `sqrt(2 xi + xi^2)`).
    LegsOnePlusXi,
    /// Base 2, apex height `sqrt(xi)` (legs `sqrt(1 + xi)`).
    ApexHeightSqrtXi,
}

impl GadgetShape {
    pub fn apex_height(self, xi: f64) -> f64 {
        match self {
            GadgetShape::LegsOnePlusXi => (2.0 * xi + xi * xi).sqrt(),
            GadgetShape::ApexHeightSqrtXi => xi.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetConfig {
    pub k: f64,
    pub trials: usize,
    pub seed: u64,
    pub dim: usize,
    pub shape: GadgetShape,
}

impl GadgetConfig {
    pub fn new(k: f64, trials: usize, seed: u64) -> Self {
        Self { k, trials, seed, dim: 3, shape: GadgetShape::LegsOnePlusXi }
    }

    /// `xi = 1 / (17 K^2)`.
    pub fn xi(&self) -> f64 {
        1.0 / (17.0 * self.k * self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    /// Base endpoints `a`, `c` and apex `b`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub colors: [u8; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GadgetReport {
    pub k: f64,
    pub xi: f64,
    pub dim: usize,
    pub shape: GadgetShape,
    pub leg: f64,
    pub trials: usize,
    pub seed: u64,
    pub monochromatic: usize,
    pub boundary_flagged: usize,
    pub rejected_draws: u64,
    /// Up to ten monochromatic placements.
    pub examples: Vec<Placement>,
    pub holds: bool,
}

enum Outcome {
    Clean,
    Boundary,
    Mono(Placement),
}

const MAX_DRAWS: u64 = 1_000_000;

/// Samples `trials` rigid placements of the gadget with all vertices in the
/// ball of radius `K` and counts monochromatic ones under [`mod8_color`].
pub fn obtuse_gadget_audit(cfg: &GadgetConfig) -> Result<GadgetReport> {
    if !(cfg.k > 1.0) {
        return Err(Error::InvalidParameter(format!("K must exceed 1, got {}", cfg.k)));
    }
    if cfg.dim < 2 {
        return Err(Error::InvalidParameter("the gadget needs dimension at least 2".into()));
    }
    let xi = cfg.xi();
    let h = cfg.shape.apex_height(xi);
    let outcomes = par::map_range(cfg.trials, |i| {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let mut draws = 0u64;
        loop {
            draws += 1;
            if draws > MAX_DRAWS {
                return Err(Error::OptimizerFailed("no placement fits in the ball".into()));
            }
            let frame = random_stiefel(&mut rng, cfg.dim, 2);
            let t = in_ball(&mut rng, cfg.dim, cfg.k);
            let at = |s: f64, u: f64| -> Vec<f64> {
                (0..cfg.dim).map(|r| t[r] + s * frame[(r, 0)] + u * frame[(r, 1)]).collect()
            };
            let (a, b, c) = (at(-1.0, 0.0), at(0.0, h), at(1.0, 0.0));
            let inside = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>() <= cfg.k * cfg.k;
            if !(inside(&a) && inside(&b) && inside(&c)) {
                continue;
            }
            let near = |p: &[f64]| {
                let v = 2.0 * p.iter().map(|x| x * x).sum::<f64>();
                (v - v.round()).abs() < BOUNDARY_GAP
            };
            let outcome = if near(&a) || near(&b) || near(&c) {
                Outcome::Boundary
            } else {
                let colors = [mod8_color(&a), mod8_color(&b), mod8_color(&c)];
                if colors[0] == colors[1] && colors[1] == colors[2] {
                    Outcome::Mono(Placement { a, b, c, colors })
                } else {
                    Outcome::Clean
                }
            };
            return Ok((outcome, draws - 1));
        }
    });
    let mut report = GadgetReport {
        k: cfg.k,
        xi,
        dim: cfg.dim,
        shape: cfg.shape,
        leg: (1.0 + h * h).sqrt(),
        trials: cfg.trials,
        seed: cfg.seed,
        monochromatic: 0,
        boundary_flagged: 0,
        rejected_draws: 0,
        examples: Vec::new(),
        holds: true,
    };
    for o in outcomes {
        let (o, rejected) = o?;
        report.rejected_draws += rejected;
        match o {
            Outcome::Clean => {}
            Outcome::Boundary => report.boundary_flagged += 1,
            Outcome::Mono(p) => {
                report.monochromatic += 1;
                if report.examples.len() < 10 {
                    report.examples.push(p);
                }
            }
        }
    }
    report.holds = report.monochromatic == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p: &[f64], q: &[f64]) -> f64 {
        p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    #[test]
    fn colors() {
        assert_eq!(mod8_color(&[0.0, 0.0]), 0);
        assert_eq!(mod8_color(&[1.75f64.sqrt()]), 3);
        // 2 |x|^2 = 17 -> 1
        assert_eq!(mod8_color(&[2.0, 0.5f64.sqrt()]), 1);
    }

    #[test]
    fn legs_one_plus_xi_admit_a_monochromatic_copy() {
        // base midpoint at distance 1.7, base tangential, apex pushed outward
        let xi = 1.0 / 68.0;
        let h = GadgetShape::LegsOnePlusXi.apex_height(xi);
        let a = [1.7, -1.0];
        let c = [1.7, 1.0];
        let b = [1.7 + h, 0.0];
        assert!((dist(&a, &b) - (1.0 + xi)).abs() < 1e-12);
        assert!((dist(&a, &c) - 2.0).abs() < 1e-12);
        assert!([a, b, c].iter().all(|p| p[0] * p[0] + p[1] * p[1] <= 4.0));
        assert_eq!([mod8_color(&a), mod8_color(&b), mod8_color(&c)], [7, 7, 7]);
    }

    #[test]
    fn audit_is_seed_deterministic() {
        let mut cfg = GadgetConfig::new(2.0, 2000, 11);
        let r1 = obtuse_gadget_audit(&cfg).unwrap();
        let r2 = obtuse_gadget_audit(&cfg).unwrap();
        assert_eq!(r1, r2);
        cfg.shape = GadgetShape::ApexHeightSqrtXi;
        let r3 = obtuse_gadget_audit(&cfg).unwrap();
        assert!(r3.holds);
        assert!((r3.leg - (1.0 + cfg.xi()).sqrt()).abs() < 1e-15);
        assert!(obtuse_gadget_audit(&GadgetConfig::new(1.0, 1, 0)).is_err());
    }
}
