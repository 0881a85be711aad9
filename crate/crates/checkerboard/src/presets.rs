//! Bundled detector configurations for the arrival-time pipeline.
//!
//! Both presets place the detector at X = 0 with a Gaussian packet incoming
//! from the left at v/c = λ_c·k0 ≈ 3.862×10⁻³ (k0 = 1 Å⁻¹), and differ in
//! how sharp the packet is:
//!
//! * `fig6` — broad packet: Δx = 25 Å (Δk = 0.02 Å⁻¹), centre −150 Å,
//!   sampled to 2 t0 with t0 ≈ 1.296×10⁻¹⁴ s.
//! * `fig7` — narrow packet: Δx = 2.5 Å (Δk = 0.2 Å⁻¹), centre −20 Å,
//!   sampled to 3 t0 with t0 ≈ 1.728×10⁻¹⁵ s.
//!
//! The broad packet is quasi-monochromatic, so the arrival decomposition
//! obeys the slow-packet scaling laws cleanly. The narrow packet carries a
//! momentum spread comparable to its carrier (Δk/k0 = 0.2); late arrivals
//! are dominated by the slower momentum components, which makes the
//! distribution lopsided and pushes the rescaled first-arrival and
//! interference curves systematically below Π on the tail.

use crate::arrival::{arrival_decomposition, ArrivalDecomposition, QuadratureSpec};
use crate::error::Result;
use crate::propagator::PhysicalConstants;
use crate::wavepacket::GaussianPacket;

/// A complete, laboratory-unit description of one arrival-time run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetSpec {
    /// Preset identifier.
    pub name: &'static str,
    /// Packet centre in Å (negative: left of the detector).
    pub x0_angstrom: f64,
    /// Packet position spread Δx in Å.
    pub dx_angstrom: f64,
    /// Carrier wave number in Å⁻¹.
    pub k0_per_angstrom: f64,
    /// Detector position in Å.
    pub x_obs_angstrom: f64,
    /// Analysis window length as a multiple of the classical arrival time.
    pub t_max_over_t0: f64,
    /// Number of time samples.
    pub n_t: usize,
    /// Spatial quadrature resolution.
    pub quadrature: QuadratureSpec,
}

impl PresetSpec {
    /// Broad-packet preset (Δk/k0 = 0.02).
    pub fn fig6() -> PresetSpec {
        PresetSpec {
            name: "fig6",
            x0_angstrom: -150.0,
            dx_angstrom: 25.0,
            k0_per_angstrom: 1.0,
            x_obs_angstrom: 0.0,
            t_max_over_t0: 2.0,
            n_t: 400,
            quadrature: QuadratureSpec::default(),
        }
    }

    /// Narrow-packet preset (Δk/k0 = 0.2).
    pub fn fig7() -> PresetSpec {
        PresetSpec {
            name: "fig7",
            x0_angstrom: -20.0,
            dx_angstrom: 2.5,
            k0_per_angstrom: 1.0,
            x_obs_angstrom: 0.0,
            t_max_over_t0: 3.0,
            n_t: 400,
            quadrature: QuadratureSpec::default(),
        }
    }

    /// Look a preset up by name.
    pub fn by_name(name: &str) -> Option<PresetSpec> {
        match name {
            "fig6" => Some(PresetSpec::fig6()),
            "fig7" => Some(PresetSpec::fig7()),
            _ => None,
        }
    }

    /// Packet velocity v/c = λ_c·k0.
    pub fn v_over_c(&self) -> f64 {
        PhysicalConstants::wavenumber_from_per_angstrom(self.k0_per_angstrom)
    }

    /// Momentum spread Δk = 1/(2Δx) in Å⁻¹.
    pub fn dk_per_angstrom(&self) -> f64 {
        1.0 / (2.0 * self.dx_angstrom)
    }

    /// Classical arrival time t0 = (X − x0)/v in seconds.
    pub fn t0_seconds(&self) -> f64 {
        (self.x_obs_angstrom - self.x0_angstrom)
            / (self.v_over_c() * PhysicalConstants::C_ANGSTROM_PER_SECOND)
    }

    /// The packet in natural units.
    pub fn packet(&self) -> Result<GaussianPacket> {
        GaussianPacket::new(
            PhysicalConstants::length_from_angstrom(self.x0_angstrom),
            PhysicalConstants::length_from_angstrom(self.dx_angstrom),
            PhysicalConstants::wavenumber_from_per_angstrom(self.k0_per_angstrom),
        )
    }

    /// Run the full arrival-time decomposition for this preset.
    pub fn run(&self) -> Result<ArrivalDecomposition> {
        let packet = self.packet()?;
        let t_max =
            PhysicalConstants::time_from_seconds(self.t_max_over_t0 * self.t0_seconds());
        arrival_decomposition(
            &packet,
            PhysicalConstants::length_from_angstrom(self.x_obs_angstrom),
            t_max,
            self.n_t,
            &self.quadrature,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn preset_lookup() {
        assert_eq!(PresetSpec::by_name("fig6").unwrap().name, "fig6");
        assert_eq!(PresetSpec::by_name("fig7").unwrap().name, "fig7");
        assert!(PresetSpec::by_name("fig8").is_none());
    }

    #[test]
    fn derived_quantities_match_design_values() {
        let fig6 = PresetSpec::fig6();
        assert_eq!(format!("{:.3e}", fig6.v_over_c()), "3.862e-3");
        assert_eq!(format!("{:.3e}", fig6.t0_seconds()), "1.296e-14");
        assert_relative_eq!(fig6.dk_per_angstrom(), 0.02, max_relative = 1e-15);

        let fig7 = PresetSpec::fig7();
        assert_eq!(format!("{:.3e}", fig7.t0_seconds()), "1.728e-15");
        assert_relative_eq!(fig7.dk_per_angstrom(), 0.2, max_relative = 1e-15);
    }

    #[test]
    fn packets_are_valid_and_left_of_detector() {
        for preset in [PresetSpec::fig6(), PresetSpec::fig7()] {
            let packet = preset.packet().unwrap();
            assert!(packet.x0() + 2.0 * packet.dx() <= 0.0);
            assert_relative_eq!(packet.velocity_over_c(), 3.8616e-3, max_relative = 1e-12);
        }
    }
}
