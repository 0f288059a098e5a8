//! Run configuration: grids, tolerances and suite sizes.
//!
//! Every tolerance used by the verification suites is a config default here,
//! overridable through a TOML file (path from `EXTRAPKIT_CONFIG` or
//! `--config`) without recompiling.

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    /// Points per decade for sup/epsilon sweeps.
    pub points_per_decade: usize,
    /// Envelope evaluation grid.
    pub envelope_points: usize,
    pub envelope_t_min: f64,
    pub envelope_t_max: f64,
    /// Largest p probed by Delta/F-functor sweeps.
    pub p_max: f64,
    /// Grid refinement multiplier (stability studies double it).
    pub refine: usize,
    /// Operator discretization: subintervals per input piece.
    pub operator_resolution: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points_per_decade: 64,
            envelope_points: 512,
            envelope_t_min: 1e-6,
            envelope_t_max: 1e6,
            p_max: 1024.0,
            refine: 1,
            operator_resolution: 16,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Criterion 1: envelope closed forms, max relative error.
    pub envelope_closed_form: f64,
    /// Criterion 2: representing-measure reconstruction, relative residual.
    pub reconstruction_residual: f64,
    /// Criterion 2: density match away from the kink, relative.
    pub density_match: f64,
    /// Criterion 3: K <= min(1, t/s) J slack.
    pub kj_slack: f64,
    /// Criterion 4: allowed suite-max gamma of the decomposition.
    pub gamma_bound: f64,
    /// Criterion 5: Fubini identity, absolute.
    pub fubini_abs: f64,
    /// Criterion 6: Delta/exp-L ratio window edge (window = [1/w, w]).
    pub delta_expl_window: f64,
    /// Criterion 6: relative drift allowed under grid refinement.
    pub delta_expl_drift: f64,
    /// Criterion 7: grand-Lebesgue equivalence window C.
    pub grand_window: f64,
    /// Criterion 7: drift under epsilon-grid refinement.
    pub grand_drift: f64,
    /// Criterion 8: lower bound quality for the Hardy operator norm.
    pub hardy_norm_quality: f64,
    /// Criterion 8: suite-max endpoint constant.
    pub yano_c_bound: f64,
    /// Criterion 9: Calderon algebra identity, sup-norm.
    pub calderon_algebra: f64,
    /// Criterion 10: closed-form convolution, absolute.
    pub conv_abs: f64,
    /// Criterion 10: suite-max bilinear endpoint constant.
    pub lagbi_c_bound: f64,
    /// Criterion 11: Matsaev ratio drift across sizes.
    pub matsaev_drift: f64,
    /// Criterion 11: non-commutative Calderon constant at n = 64.
    pub noncomm_c_bound: f64,
    /// Criterion 12 and the Marcinkiewicz check: dilation ratio floor.
    pub dilation_floor: f64,
    /// Absolute tolerance of the log-weight quadratures.
    pub quad_abs: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            envelope_closed_form: 1e-6,
            reconstruction_residual: 1e-4,
            density_match: 1e-3,
            kj_slack: 1e-12,
            gamma_bound: 8.0,
            fubini_abs: 1e-9,
            delta_expl_window: 1e2,
            delta_expl_drift: 0.05,
            grand_window: 10.0,
            grand_drift: 0.10,
            hardy_norm_quality: 0.9,
            yano_c_bound: 4.0,
            calderon_algebra: 1e-6,
            conv_abs: 1e-8,
            lagbi_c_bound: 8.0,
            matsaev_drift: 0.20,
            noncomm_c_bound: 4.0,
            dilation_floor: 1.0 / 16.0,
            quad_abs: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    /// Number of seeded random step functions in the K/J suites.
    pub n_random: usize,
    /// Pieces per random step function.
    pub max_pieces: usize,
    /// Base RNG seed; every generated input derives from it.
    pub seed: u64,
    /// K/J evaluation grid (t, s) resolution.
    pub kj_grid: usize,
    /// Matrix sizes for the Schatten suites.
    pub schatten_sizes: Vec<usize>,
    /// Random functions per grand-Lebesgue family.
    pub grand_family: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_random: 1000,
            max_pieces: 24,
            seed: 0x5eed_2024,
            kj_grid: 32,
            schatten_sizes: vec![16, 64, 256],
            grand_family: 20,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub grids: GridConfig,
    pub tolerances: ToleranceConfig,
    pub suite: SuiteConfig,
}

impl Config {
    /// Loads from a TOML file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| crate::error::Error::Format(e.to_string()))
    }

    /// Resolution order: explicit path, `EXTRAPKIT_CONFIG`, defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::from_path(p);
        }
        if let Ok(p) = std::env::var("EXTRAPKIT_CONFIG") {
            return Self::from_path(Path::new(&p));
        }
        Ok(Config::default())
    }

    /// Envelope grid from the configured bounds.
    pub fn envelope_grid(&self) -> Vec<f64> {
        crate::grid::log_grid(
            self.grids.envelope_t_min,
            self.grids.envelope_t_max,
            self.grids.envelope_points,
        )
    }

    /// A stable digest of the configuration for report headers.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let blob = toml::to_string(self).unwrap_or_default();
        let mut h = Sha256::new();
        h.update(blob.as_bytes());
        let out = h.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let c = Config::default();
        let text = toml::to_string(&c).unwrap();
        let back: Config = toml::from_str(&text).unwrap();
        assert_eq!(back.tolerances.gamma_bound, 8.0);
        assert_eq!(back.suite.n_random, 1000);
        assert_eq!(c.digest(), back.digest());
    }

    #[test]
    fn partial_file_fills_defaults() {
        let c: Config = toml::from_str("[suite]\nn_random = 5\n").unwrap();
        assert_eq!(c.suite.n_random, 5);
        assert_eq!(c.grids.points_per_decade, 64);
    }
}
