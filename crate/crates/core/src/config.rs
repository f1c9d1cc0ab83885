//! Process-wide resource caps and the seed for randomized internals.
//!
//! Library routines read the current [`Config`] when they need a cap. The CLI
//! installs its configuration once at startup; tests use the defaults.

use std::sync::RwLock;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest polynomial degree `iterate` and friends may produce.
    pub max_degree: usize,
    /// Largest coefficient size (numerator plus denominator bits).
    pub max_coeff_bits: u64,
    /// Largest degree handed to the irreducible factorization.
    pub max_factor_degree: usize,
    pub orbit_step_cap: usize,
    /// Per-element representation size at which an orbit counts as escaped.
    pub orbit_size_cap_bits: u64,
    pub root_of_unity_cap: u64,
    /// Cap on `k` in the exceptional-exponent search of the multiplicity bound.
    pub exceptional_k_cap: u64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_degree: 65536,
            max_coeff_bits: 1 << 22,
            max_factor_degree: 256,
            orbit_step_cap: 512,
            orbit_size_cap_bits: 1 << 16,
            root_of_unity_cap: 360,
            exceptional_k_cap: 64,
            seed: 0x5eed_1d6c_d17e_2a7b,
        }
    }
}

static CONFIG: RwLock<Option<Config>> = RwLock::new(None);

/// Snapshot of the active configuration.
pub fn get() -> Config {
    CONFIG
        .read()
        .map(|c| c.clone().unwrap_or_default())
        .unwrap_or_default()
}

/// Replace the active configuration.
pub fn set(config: Config) {
    if let Ok(mut guard) = CONFIG.write() {
        *guard = Some(config);
    }
}
