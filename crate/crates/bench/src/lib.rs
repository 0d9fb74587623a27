//! Shared inputs for the ptloc-core benchmarks.
use ptloc_core::operators::suite::{test_state, SuiteChart, TEST_PROFILES};
use ptloc_core::operators::WaveFunction2;
use ptloc_core::povm::{radial_gaussian_state, LocalizedStateSpec, OmegaProfile};
use ptloc_core::{ModelParams, Result, Sign};

/// Unit mass.
pub fn unit_params() -> ModelParams {
    ModelParams::new(1.0).expect("unit mass is valid")
}

/// First suite profile sampled on a `chart` grid of `n` points.
pub fn suite_state(chart: SuiteChart, n: usize) -> Result<WaveFunction2> {
    test_state(chart, n, &TEST_PROFILES[0], &unit_params())
}

/// Positive-sign radial state used for the time POVM.
pub fn time_state(tau: f64) -> Result<WaveFunction2> {
    radial_gaussian_state(-6.0, 0.8, tau, Sign::Positive, &unit_params())
}

pub fn localized_spec() -> LocalizedStateSpec {
    LocalizedStateSpec::new(OmegaProfile::CosPi, &unit_params())
}
