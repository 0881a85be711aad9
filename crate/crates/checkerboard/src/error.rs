//! Error types shared across the crate.
//!
//! Every fallible public operation returns [`Result`]. Variants carry the
//! offending values so callers (and the CLI) can print actionable messages.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Bessel evaluation was requested for an unsupported order.
    #[error("Bessel order {order} is not supported here (supported orders: {supported})")]
    UnsupportedBesselOrder {
        /// The requested order.
        order: u32,
        /// Human-readable list of supported orders.
        supported: &'static str,
    },

    /// A Bessel argument fell outside the supported domain.
    #[error("Bessel argument z = {z} outside supported domain ({constraint})")]
    BesselArgumentOutOfRange {
        /// The offending argument.
        z: f64,
        /// The violated constraint, e.g. `0 <= z <= 1e9`.
        constraint: &'static str,
    },

    /// Simpson quadrature needs an odd node count of at least 3.
    #[error("invalid quadrature grid: n_points = {n_points} (must be odd and >= 3)")]
    InvalidQuadratureGrid {
        /// The offending node count.
        n_points: usize,
    },

    /// Integration bounds were not ordered.
    #[error("invalid integration bounds: a = {a} > b = {b}")]
    InvalidIntegrationBounds {
        /// Lower bound.
        a: f64,
        /// Upper bound.
        b: f64,
    },

    /// A lattice grid specification violated its invariants.
    #[error("invalid grid spec: {reason}")]
    InvalidGridSpec {
        /// Which invariant failed.
        reason: String,
    },

    /// Exhaustive enumeration was requested beyond the supported size.
    #[error("enumeration size N = {n} exceeds the exhaustive-walk bound N <= {max}")]
    EnumerationTooLarge {
        /// Requested number of time steps.
        n: u32,
        /// Maximum supported number of time steps.
        max: u32,
    },

    /// A reversal number had the wrong parity for the requested component.
    #[error("reversal number R = {r} has the wrong parity for the {component} component (expected {expected})")]
    ReversalParity {
        /// The offending reversal number.
        r: i64,
        /// Component name, e.g. `++`.
        component: &'static str,
        /// Expected parity description.
        expected: &'static str,
    },

    /// An operation was called with a propagator component it does not define.
    #[error("component {component} is not defined for {operation}")]
    UnsupportedComponent {
        /// Name of the offending component.
        component: &'static str,
        /// The operation that rejected it.
        operation: &'static str,
    },

    /// A spacetime interval had a nonpositive time separation.
    #[error("nonpositive time separation t_BA = {t_ba} (retarded propagation requires t_BA > 0)")]
    NonpositiveTime {
        /// The offending time separation.
        t_ba: f64,
    },

    /// A spacetime interval lay outside the light cone.
    #[error("interval (x_BA = {x_ba}, t_BA = {t_ba}) lies outside the light cone |x_BA| <= c*t_BA")]
    OutsideLightCone {
        /// Spatial separation.
        x_ba: f64,
        /// Time separation.
        t_ba: f64,
    },

    /// A first-/later-arrival quantity was requested for a non-positive spatial separation.
    #[error("x_BA = {x_ba} is not positive; arrival decompositions assume approach from the left (x_BA >= 0)")]
    NonpositiveDisplacement {
        /// The offending spatial separation.
        x_ba: f64,
    },

    /// The finite-step propagator sum was requested beyond its size cap.
    #[error("finite-N evaluation with N = {n} exceeds the supported bound N <= {max}")]
    FiniteNTooLarge {
        /// Requested step count.
        n: u64,
        /// Maximum supported step count.
        max: u64,
    },

    /// The interval does not sit on an N-step lattice (displacement not an integer
    /// number of spatial steps, or of the wrong parity).
    #[error(
        "interval (x_BA = {x_ba}, t_BA = {t_ba}) is incompatible with an N = {n} lattice: \
         x_BA/(c*dt) = {m} must be an integer with the parity of N"
    )]
    IncompatibleLattice {
        /// Requested step count.
        n: u64,
        /// Spatial separation.
        x_ba: f64,
        /// Time separation.
        t_ba: f64,
        /// The non-integral or wrong-parity step displacement.
        m: f64,
    },

    /// A velocity parameter fell outside its open domain.
    #[error("velocity v/c = {v_over_c} outside the domain {constraint}")]
    VelocityOutOfRange {
        /// The offending velocity ratio.
        v_over_c: f64,
        /// The violated constraint, e.g. `|v/c| < 1`.
        constraint: &'static str,
    },

    /// A wave-packet parameter set violated its invariants.
    #[error("invalid wave packet: {reason}")]
    InvalidPacket {
        /// Which invariant failed.
        reason: String,
    },

    /// The observation point is not safely to the right of the truncated packet.
    #[error(
        "observation point X = {x_obs} is not to the right of the packet window \
         (packet centroid {x0}, width {dx}); arrival analysis assumes the packet \
         starts left of X"
    )]
    ObserverInsidePacket {
        /// Observation point.
        x_obs: f64,
        /// Packet centroid.
        x0: f64,
        /// Packet width parameter.
        dx: f64,
    },

    /// An arrival-time grid was too coarse.
    #[error("arrival-time grid with n_T = {n_t} is too coarse (need n_T >= {min})")]
    ArrivalGridTooCoarse {
        /// Requested grid size.
        n_t: usize,
        /// Minimum supported grid size.
        min: usize,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
