//! Copies `φ_k = e^{kρ}·φ` of a potential indexed by a finite cyclic deck
//! model `ℤ/m`.
//!
//! Indices are stored in `0..m`, but the scaling exponent is tracked as an
//! integer shift: acting by `j` on `k` lands on index `(k − j) mod m` with
//! shift `k − j`, so factors compose exactly for any `ρ`.

use super::grid::GridFunction;
use super::PshError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledFamily<S> {
    base: GridFunction,
    rho: S,
    order: usize,
}

/// Result of acting by a deck element on an index.
#[derive(Debug, Clone, PartialEq)]
pub struct Action<S> {
    pub index: usize,
    pub shift: i64,
    /// `log` of the factor in `η_j^* φ_k = e^{jρ}·φ_{k−j}`.
    pub log_factor: S,
}

impl<S: Scalar> ScaledFamily<S> {
    pub fn new(base: GridFunction, rho: S, order: usize) -> Result<Self, PshError> {
        if order == 0 {
            return Err(PshError::FamilyOrder(order));
        }
        Ok(Self { base, rho, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rho(&self) -> &S {
        &self.rho
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    /// `kρ` for an integer shift.
    pub fn log_factor(&self, k: i64) -> S {
        self.rho.scale(k, 1)
    }

    /// `φ_k` for `k` in `0..m`.
    pub fn member(&self, k: usize) -> GridFunction {
        self.base.scaled(libm::exp(self.log_factor(k as i64).to_f64()))
    }

    pub fn act(&self, j: i64, k: i64) -> Action<S> {
        let shift = k - j;
        Action { index: shift.rem_euclid(self.order as i64) as usize, shift, log_factor: self.log_factor(j) }
    }

    /// `log_factor(k) = jρ + log_factor(k − j)`, decided by [`Scalar::near`].
    pub fn equivariant(&self, j: i64, k: i64) -> bool {
        let a = self.act(j, k);
        a.index == (k - j).rem_euclid(self.order as i64) as usize
            && self.log_factor(k).near(&(a.log_factor + self.log_factor(a.shift)))
    }

    /// Acting by `j` then `j2` equals acting by `j + j2` with the product of
    /// the factors.
    pub fn composes(&self, j: i64, j2: i64, k: i64) -> bool {
        let first = self.act(j, k);
        let second = self.act(j2, first.shift);
        let both = self.act(j + j2, k);
        second.index == both.index
            && second.shift == both.shift
            && (first.log_factor + second.log_factor).near(&both.log_factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psh::grid::GridDomain;
    use crate::scalar::LogSum;
    use alloc::vec;

    fn base() -> GridFunction {
        let d = GridDomain::new(vec![[-1.0, 1.0, -1.0, 1.0]], 0.25).unwrap();
        GridFunction::sample(&d, |p| p[0] * p[0] + p[1] * p[1] + 1.0).unwrap()
    }

    #[test]
    fn zero_character_gives_equal_copies() {
        let fam = ScaledFamily::new(base(), 0.0f64, 3).unwrap();
        assert_eq!(fam.member(0), fam.member(2));
    }

    #[test]
    fn involution_swaps_with_factor_two() {
        let fam = ScaledFamily::new(base(), LogSum::ln_int(2).unwrap(), 2).unwrap();
        let ratio = fam.member(1).value(7) / fam.member(0).value(7);
        assert!((ratio - 2.0).abs() < 1e-12);
        let a = fam.act(1, 1);
        assert_eq!(a.index, 0);
        assert_eq!(a.log_factor, LogSum::ln_int(2).unwrap());
    }

    #[test]
    fn order_four_log_three() {
        let fam = ScaledFamily::new(base(), LogSum::ln_int(3).unwrap(), 4).unwrap();
        let a = fam.act(2, 1);
        assert_eq!(a.index, 3);
        assert_eq!(a.log_factor, LogSum::ln_int(9).unwrap());
        for j in 0..4 {
            for k in 0..4 {
                assert!(fam.equivariant(j, k));
                for j2 in 0..4 {
                    assert!(fam.composes(j, j2, k));
                }
            }
        }
    }

    #[test]
    fn zero_order_is_rejected() {
        assert_eq!(ScaledFamily::new(base(), 0.0f64, 0).unwrap_err(), PshError::FamilyOrder(0));
    }
}
