//! Fractions over a coefficient module with a character denominator.
//!
//! A `LocalizedFraction` is `numerator / chi` where `chi` is an integral
//! Laurent polynomial required not to vanish at the working circle point.
//! This is the shape of every localized quantity in the crate.

use crate::error::RingError;
use crate::laurent::HalfLaurent;
use crate::point::{vanishes_at, CirclePoint};

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedFraction<T> {
    pub numerator: T,
    pub chi: HalfLaurent,
    pub point: CirclePoint,
}

impl<T> LocalizedFraction<T> {
    /// Build a fraction, rejecting characters that vanish at the point.
    pub fn new(numerator: T, chi: HalfLaurent, point: CirclePoint) -> Result<Self, RingError> {
        if chi.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        assert!(chi.is_integral(), "character denominators live in Z[g, g^-1]");
        if vanishes_at(&chi, &point) {
            return Err(RingError::ExcludedPoint);
        }
        Ok(LocalizedFraction { numerator, chi, point })
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> LocalizedFraction<U> {
        LocalizedFraction { numerator: f(self.numerator), chi: self.chi, point: self.point }
    }
}
