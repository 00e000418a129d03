//! Shared fixtures for the criterion benches.

use robprem_core::rng::seeded_stream;
use robprem_core::{LossModel, LossSample};

/// Lomax(0.6) claims, the `table1` preset model.
pub fn lomax_sample(n: usize, seed: u64) -> LossSample {
    LossModel::Lomax { gamma: 0.6 }
        .sample(n, &mut seeded_stream(seed))
        .expect("valid model")
}
