//! Gaussian spinor wave packets in the light-cone (velocity) basis.
//!
//! The initial state is a normalized Gaussian envelope carrying a plane-wave
//! phase,
//!
//! ```text
//! Ψ0(x) = (2π)^(-1/4) Δx^(-1/2) exp[ -(x - x0)²/(4Δx²) + i k0 x ]
//! ```
//!
//! split over the two chirality components as Ψ+ = -g·Ψ0, Ψ- = √(1-g²)·Ψ0.
//! The weight g fixes the packet's mean velocity through v/c = 2g² − 1; a
//! packet with carrier wave number k0 moves with v/c = λ_c·k0, so
//! g = √((1 + λ_c k0)/2). The probability density and current are
//! ρ = |Ψ+|² + |Ψ-|² and J = c(|Ψ+|² − |Ψ-|²), giving J/ρ = v exactly for
//! this family of states.
//!
//! All quantities are in natural units (lengths in λ_c, wave numbers in
//! 1/λ_c, c = 1), like the propagator layer.

use crate::error::{Error, Result};
use crate::numerics::ComplexAmplitude;

/// A right-moving Gaussian spinor packet, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    x0: f64,
    dx: f64,
    k0: f64,
    g: f64,
}

impl GaussianPacket {
    /// Build a packet centred at `x0` with position spread `dx` and carrier
    /// wave number `k0` (all natural units). The chirality weight is derived
    /// from the packet velocity v/c = λ_c·k0 = `k0`.
    ///
    /// # Errors
    ///
    /// `InvalidPacket` unless `dx > 0`, `x0` is finite and `0 ≤ k0 < 1`
    /// (the packet must move right slower than light).
    pub fn new(x0: f64, dx: f64, k0: f64) -> Result<GaussianPacket> {
        if !x0.is_finite() {
            return Err(Error::InvalidPacket {
                reason: format!("centre x0 = {x0} is not finite"),
            });
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidPacket {
                reason: format!("position spread dx = {dx} must be positive and finite"),
            });
        }
        if !(0.0..1.0).contains(&k0) {
            return Err(Error::InvalidPacket {
                reason: format!(
                    "carrier wave number k0 = {k0} must lie in [0, 1) in units of 1/lambda_c"
                ),
            });
        }
        let g = g_for_velocity(k0)?;
        Ok(GaussianPacket { x0, dx, k0, g })
    }

    /// Packet centre.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Position spread Δx.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Carrier wave number k0.
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Chirality weight g = √((1 + v/c)/2).
    pub fn g(&self) -> f64 {
        self.g
    }

    /// Minimum-uncertainty momentum spread Δk = 1/(2Δx).
    pub fn dk(&self) -> f64 {
        1.0 / (2.0 * self.dx)
    }

    /// Mean packet velocity v/c = 2g² − 1, which equals λ_c·k0 = `k0` by
    /// construction. Returned from the stored wave number so that it is
    /// exact (reconstructing it from g would round: 2·(√0.5)² − 1 ≠ 0).
    pub fn velocity_over_c(&self) -> f64 {
        self.k0
    }

    /// The scalar envelope Ψ0(x).
    pub fn envelope(&self, x: f64) -> ComplexAmplitude {
        let norm = (2.0 * std::f64::consts::PI).powf(-0.25) / self.dx.sqrt();
        let u = (x - self.x0) / (2.0 * self.dx);
        let magnitude = norm * (-u * u).exp();
        let phase = self.k0 * x;
        ComplexAmplitude::new(magnitude * phase.cos(), magnitude * phase.sin())
    }

    /// The two chirality components (Ψ+, Ψ-) = (−g·Ψ0, √(1−g²)·Ψ0) at `x`.
    pub fn initial_spinor(&self, x: f64) -> (ComplexAmplitude, ComplexAmplitude) {
        let psi0 = self.envelope(x);
        let minus_weight = (1.0 - self.g * self.g).max(0.0).sqrt();
        (-self.g * psi0, minus_weight * psi0)
    }
}

/// Chirality weight for a packet of mean velocity v/c: g = √((1 + v/c)/2).
///
/// # Errors
///
/// `VelocityOutOfRange` unless 0 ≤ v/c < 1.
pub fn g_for_velocity(v_over_c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&v_over_c) {
        return Err(Error::VelocityOutOfRange {
            v_over_c,
            constraint: "0 <= v/c < 1",
        });
    }
    Ok(((1.0 + v_over_c) / 2.0).sqrt())
}

/// Probability density ρ = |Ψ+|² + |Ψ-|² and current J = c(|Ψ+|² − |Ψ-|²)
/// for a spinor value (natural units, c = 1).
pub fn rho_and_current(
    psi_plus: ComplexAmplitude,
    psi_minus: ComplexAmplitude,
) -> (f64, f64) {
    let plus = psi_plus.norm_sqr();
    let minus = psi_minus.norm_sqr();
    (plus + minus, plus - minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_complex;
    use approx::assert_relative_eq;

    fn test_packet() -> GaussianPacket {
        GaussianPacket::new(-40.0, 6.0, 3.8616e-3).unwrap()
    }

    #[test]
    fn construction_validation() {
        assert!(GaussianPacket::new(f64::NAN, 1.0, 0.1).is_err());
        assert!(GaussianPacket::new(0.0, 0.0, 0.1).is_err());
        assert!(GaussianPacket::new(0.0, -1.0, 0.1).is_err());
        assert!(GaussianPacket::new(0.0, 1.0, 1.0).is_err());
        assert!(GaussianPacket::new(0.0, 1.0, -0.1).is_err());
        assert!(GaussianPacket::new(0.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn weight_for_velocity() {
        assert_relative_eq!(
            g_for_velocity(0.0).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-15
        );
        assert_relative_eq!(g_for_velocity(0.5).unwrap(), (0.75f64).sqrt(), max_relative = 1e-15);
        assert!(matches!(
            g_for_velocity(1.0),
            Err(Error::VelocityOutOfRange { .. })
        ));
        assert!(matches!(
            g_for_velocity(-0.2),
            Err(Error::VelocityOutOfRange { .. })
        ));
    }

    #[test]
    fn velocity_round_trip() {
        let packet = test_packet();
        assert_relative_eq!(packet.velocity_over_c(), 3.8616e-3, max_relative = 1e-12);
        assert_relative_eq!(packet.dk(), 1.0 / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn density_is_normalized() {
        let packet = test_packet();
        let total = integrate_complex(
            |x| {
                let (p, m) = packet.initial_spinor(x);
                ComplexAmplitude::new(rho_and_current(p, m).0, 0.0)
            },
            packet.x0() - 10.0 * packet.dx(),
            packet.x0() + 10.0 * packet.dx(),
            2001,
        )
        .unwrap();
        assert_relative_eq!(total.re, 1.0, max_relative = 1e-10);
        assert_eq!(total.im, 0.0);
    }

    #[test]
    fn peak_density_value() {
        let packet = test_packet();
        let (p, m) = packet.initial_spinor(packet.x0());
        let (rho, _) = rho_and_current(p, m);
        let want = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * packet.dx());
        assert_relative_eq!(rho, want, max_relative = 1e-13);
    }

    #[test]
    fn current_to_density_ratio_is_velocity() {
        let packet = GaussianPacket::new(0.0, 2.0, 0.3).unwrap();
        for x in [-3.0, -1.0, 0.0, 1.5, 4.0] {
            let (p, m) = packet.initial_spinor(x);
            let (rho, current) = rho_and_current(p, m);
            assert_relative_eq!(current / rho, 0.3, max_relative = 1e-12);
        }
    }

    #[test]
    fn spinor_weights() {
        let packet = GaussianPacket::new(0.0, 1.0, 0.5).unwrap();
        let (p, m) = packet.initial_spinor(0.25);
        let psi0 = packet.envelope(0.25);
        let g = packet.g();
        assert_relative_eq!((p / psi0).re, -g, max_relative = 1e-14);
        assert_relative_eq!((m / psi0).re, (1.0 - g * g).sqrt(), max_relative = 1e-14);
        // Spinor norm preserves the envelope density.
        assert_relative_eq!(
            p.norm_sqr() + m.norm_sqr(),
            psi0.norm_sqr(),
            max_relative = 1e-14
        );
    }
}
