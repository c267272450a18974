//! Back-of-envelope estimates for a calcium ion leaving a presynaptic channel.
//!
//! The velocity uncertainty comes from confining the ion to the channel
//! diameter; the ion then travels ballistically at its 3D RMS thermal speed to
//! the trigger site while the packet spreads at the uncertainty velocity.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynapseParams<T> {
    /// kg
    pub ion_mass: T,
    /// K
    pub temperature: T,
    /// m
    pub channel_diameter: T,
    /// m
    pub travel_distance: T,
}

impl<T: Real> Default for SynapseParams<T> {
    /// Calcium-40 at body temperature, 1 nm channel, 50 nm to the trigger site.
    fn default() -> Self {
        Self {
            ion_mass: T::lit(6.642e-26),
            temperature: T::lit(310.0),
            channel_diameter: T::lit(1e-9),
            travel_distance: T::lit(50e-9),
        }
    }
}

impl<T: Real> SynapseParams<T> {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("ion_mass", self.ion_mass),
            ("temperature", self.temperature),
            ("channel_diameter", self.channel_diameter),
            ("travel_distance", self.travel_distance),
        ];
        for (name, v) in fields {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynapseEstimates<T> {
    /// ℏ / (m·Δx), m/s
    pub delta_v: T,
    /// √(3kT/m), m/s
    pub v_thermal: T,
    pub velocity_ratio: T,
    /// s
    pub transit_time: T,
    /// m
    pub spread: T,
    pub synapse_count: u32,
    /// log₁₀ of the 2^N firing combinations.
    pub branch_log10: T,
}

pub fn synapse_estimates<T: Real>(p: &SynapseParams<T>, synapse_count: u32) -> Result<SynapseEstimates<T>> {
    p.validate()?;
    let hbar = T::lit(HBAR);
    let k_b = T::lit(BOLTZMANN);
    let delta_v = hbar / (p.ion_mass * p.channel_diameter);
    let v_thermal = (T::lit(3.0) * k_b * p.temperature / p.ion_mass).sqrt();
    let transit_time = p.travel_distance / v_thermal;
    Ok(SynapseEstimates {
        delta_v,
        v_thermal,
        velocity_ratio: delta_v / v_thermal,
        transit_time,
        spread: delta_v * transit_time,
        synapse_count,
        branch_log10: T::from_u32(synapse_count).expect("count fits") * T::LOG10_2(),
    })
}

/// 2^N, exactly.
pub fn branch_count(synapse_count: u32) -> BigUint {
    BigUint::from(1u8) << synapse_count as usize
}
