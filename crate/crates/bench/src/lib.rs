//! Benchmark fixtures shared by the criterion targets.

use logkg::standing_waves::{amplitude_for_period, shoot_wave};
use logkg::{PeriodicProfile, WaveParams};

/// The reference stable wave `p = 1, c = 0.6, L = 6.3129` on `n` nodes.
pub fn reference_profile(n: usize) -> PeriodicProfile {
    let params = WaveParams::new(1, 0.6).expect("valid parameters");
    let amplitude = amplitude_for_period(&params, 6.3129).expect("period in range");
    shoot_wave(&params, amplitude, n).expect("admissible amplitude").profile
}
