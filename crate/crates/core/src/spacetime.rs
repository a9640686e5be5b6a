//! Flat 1+1-dimensional Minkowski geometry with `c = 1`: positions in
//! light-seconds, times in seconds. Signature convention `s² = Δt² − Δx²`,
//! so timelike separations have positive squared interval.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("velocity |v| = {v} is not spacelike: a flat simultaneity surface requires |v| < 1")]
    NotSpacelike { v: f64 },
    #[error("worldline coincides with the anchor position: intercept bounds degenerate")]
    CoincidentPositions,
}

/// A point `(x, t)` of the 1+1-dimensional spacetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeEvent<T> {
    pub x: T,
    pub t: T,
}

impl<T: Real> SpacetimeEvent<T> {
    pub fn new(x: T, t: T) -> Result<Self, SpacetimeError> {
        if !x.is_finite() || !t.is_finite() {
            return Err(SpacetimeError::NonFiniteCoordinate);
        }
        Ok(Self { x, t })
    }
}

/// Worldline of a stationary observer: constant position for all times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticWorldline<T> {
    pub x: T,
}

impl<T: Real> StaticWorldline<T> {
    pub fn new(x: T) -> Result<Self, SpacetimeError> {
        if !x.is_finite() {
            return Err(SpacetimeError::NonFiniteCoordinate);
        }
        Ok(Self { x })
    }
}

/// Causal character of a spacetime separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

impl std::fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IntervalClass::Timelike => "timelike",
            IntervalClass::Spacelike => "spacelike",
            IntervalClass::Lightlike => "lightlike",
        };
        f.write_str(s)
    }
}

/// Signed squared interval between two events and its classification.
///
/// `|s²|` within the algebra tolerance is classified lightlike; the band
/// absorbs rounding noise so lightcone edges are not misclassified.
pub fn interval<T: Real>(e1: SpacetimeEvent<T>, e2: SpacetimeEvent<T>) -> (T, IntervalClass) {
    let dt = e2.t - e1.t;
    let dx = e2.x - e1.x;
    let s2 = dt * dt - dx * dx;
    let class = if s2.abs() <= T::ALGEBRA_TOL {
        IntervalClass::Lightlike
    } else if s2 > T::zero() {
        IntervalClass::Timelike
    } else {
        IntervalClass::Spacelike
    };
    (s2, class)
}

/// Lorentz boost of `e` by velocity `v`, with coordinates taken relative to
/// `origin`: `t′ = γ(Δt − vΔx)`, `x′ = γ(Δx − vΔt)`, `γ = 1/√(1−v²)`.
pub fn boost<T: Real>(
    e: SpacetimeEvent<T>,
    v: T,
    origin: SpacetimeEvent<T>,
) -> Result<SpacetimeEvent<T>, SpacetimeError> {
    if !v.is_finite() || v.abs() >= T::one() {
        return Err(SpacetimeError::NotSpacelike {
            v: v.to_f64().unwrap_or(f64::NAN),
        });
    }
    let gamma = (T::one() - v * v).sqrt().recip();
    let dt = e.t - origin.t;
    let dx = e.x - origin.x;
    SpacetimeEvent::new(gamma * (dx - v * dt), gamma * (dt - v * dx))
}

/// A flat spacelike simultaneity plane: the locus
/// `t − anchor.t = v·(x − anchor.x)` for a simultaneity velocity `|v| < 1`.
/// It is the equal-time surface through `anchor` of the inertial frame
/// moving at `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatHypersurface<T> {
    anchor: SpacetimeEvent<T>,
    v: T,
}

impl<T: Real> FlatHypersurface<T> {
    pub fn new(anchor: SpacetimeEvent<T>, v: T) -> Result<Self, SpacetimeError> {
        if !v.is_finite() || v.abs() >= T::one() {
            return Err(SpacetimeError::NotSpacelike {
                v: v.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { anchor, v })
    }

    pub fn anchor(&self) -> SpacetimeEvent<T> {
        self.anchor
    }

    pub fn velocity(&self) -> T {
        self.v
    }

    /// Time at which the surface crosses a static worldline:
    /// `t = anchor.t + v·(x − anchor.x)`. The crossing event is simultaneous
    /// with the anchor in the frame moving at `v`.
    pub fn intercept_time(&self, worldline: StaticWorldline<T>) -> T {
        self.anchor.t + self.v * (worldline.x - self.anchor.x)
    }
}

/// Open interval of worldline times reachable by spacelike surfaces through
/// `anchor`: `(anchor.t − |Δx|, anchor.t + |Δx|)`. Every `|v| < 1` intercept
/// lies strictly inside; the endpoints are the lightcone crossings.
pub fn intercept_bounds<T: Real>(
    anchor: SpacetimeEvent<T>,
    worldline: StaticWorldline<T>,
) -> Result<(T, T), SpacetimeError> {
    let dx = (worldline.x - anchor.x).abs();
    if dx == T::zero() {
        return Err(SpacetimeError::CoincidentPositions);
    }
    Ok((anchor.t - dx, anchor.t + dx))
}
