//! Laurent series in one variable with a bounded principal part.
//!
//! A localisation summand on a generic line is a Laurent series in `t` with
//! pole order at most the complex dimension of the manifold; individual
//! summands have poles, their sum does not.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::ParamPoly;
use crate::rational::Rational;
use crate::series::push_series_term;
use crate::series::univariate::PowerSeries1;
use crate::symbols::{same_context, ParamSet};

/// Coefficients for degrees `low ..= high`; `high` is the truncation order.
/// Normalised so the lowest stored coefficient is nonzero (or the series is
/// zero, stored with `low = 0` and all-zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    var: String,
    params: Arc<ParamSet>,
    low: i32,
    high: i32,
    coeffs: Vec<ParamPoly>,
}

impl LaurentSeries {
    pub fn zero(var: &str, params: &Arc<ParamSet>, high: i32) -> Self {
        LaurentSeries {
            var: var.to_string(),
            params: params.clone(),
            low: 0,
            high,
            coeffs: vec![ParamPoly::zero(params); (high.max(0) as usize) + 1],
        }
    }

    /// Build from a coefficient list starting at degree `low`.
    pub fn from_parts(var: &str, params: &Arc<ParamSet>, low: i32, coeffs: Vec<ParamPoly>) -> Self {
        let high = low + coeffs.len() as i32 - 1;
        let mut s = LaurentSeries {
            var: var.to_string(),
            params: params.clone(),
            low,
            high,
            coeffs,
        };
        s.normalize();
        s
    }

    /// A Taylor series viewed as a Laurent series (low = 0).
    pub fn from_taylor(f: &PowerSeries1) -> Self {
        Self::from_parts(f.var(), f.params(), 0, f.coeffs().to_vec())
    }

    fn normalize(&mut self) {
        while !self.coeffs.is_empty() && self.coeffs[0].is_zero() && self.low < self.high {
            self.coeffs.remove(0);
            self.low += 1;
        }
        if self.coeffs.iter().all(|c| c.is_zero()) && self.low < 0 {
            // canonical zero keeps a non-negative support window
            let high = self.high;
            self.low = 0;
            self.coeffs = vec![ParamPoly::zero(&self.params); (high.max(0) as usize) + 1];
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    /// Lowest stored degree after normalisation.
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Truncation order: coefficients are exact for degrees `<= high`.
    pub fn high(&self) -> i32 {
        self.high
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `t^deg`; zero below `low`, error above the truncation.
    pub fn coeff(&self, deg: i32) -> Result<ParamPoly> {
        if deg > self.high {
            return Err(Error::OrderError(format!(
                "coefficient of degree {deg} beyond truncation {}",
                self.high
            )));
        }
        if deg < self.low {
            return Ok(ParamPoly::zero(&self.params));
        }
        Ok(self.coeffs[(deg - self.low) as usize].clone())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.var != other.var
            || self.high != other.high
            || !same_context(&self.params, &other.params)
        {
            return Err(Error::ContractViolation(format!(
                "laurent mismatch: ({}, order {}) vs ({}, order {})",
                self.var, self.high, other.var, other.high
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let low = self.low.min(other.low);
        let mut coeffs = vec![ParamPoly::zero(&self.params); (self.high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i].add_assign_ref(c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + i].add_assign_ref(c);
        }
        Ok(Self::from_parts(&self.var, &self.params, low, coeffs))
    }

    /// Coefficient-wise sum of any number of series; principal parts are
    /// retained when they do not cancel (cancellation checking is the
    /// caller's concern).
    pub fn sum<'a, I: IntoIterator<Item = &'a LaurentSeries>>(
        var: &str,
        params: &Arc<ParamSet>,
        high: i32,
        terms: I,
    ) -> Result<Self> {
        let mut acc = Self::zero(var, params, high);
        for t in terms {
            acc = acc.try_add(t)?;
        }
        Ok(acc)
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scaled(q)).collect();
        Self::from_parts(&self.var, &self.params, self.low, coeffs)
    }

    /// Product with a Taylor series in the same variable, truncated at `high`.
    pub fn mul_taylor(&self, f: &PowerSeries1) -> Result<Self> {
        if f.var() != self.var || !same_context(self.params(), f.params()) {
            return Err(Error::ContractViolation("laurent/taylor mismatch".into()));
        }
        let needed = (self.high - self.low) as u32;
        if f.order() < needed {
            return Err(Error::OrderError(format!(
                "taylor factor order {} < needed {}",
                f.order(),
                needed
            )));
        }
        let mut coeffs = vec![ParamPoly::zero(&self.params); (self.high - self.low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..=(needed as usize).saturating_sub(i) {
                let target = i + k;
                if target < coeffs.len() {
                    coeffs[target].add_mul(c, f.coeff(k as u32));
                }
            }
        }
        Ok(Self::from_parts(&self.var, &self.params, self.low, coeffs))
    }

    /// First nonzero coefficient at negative degree, if any.
    pub fn principal_part_violation(&self) -> Option<(i32, ParamPoly)> {
        for (i, c) in self.coeffs.iter().enumerate() {
            let deg = self.low + i as i32;
            if deg >= 0 {
                break;
            }
            if !c.is_zero() {
                return Some((deg, c.clone()));
            }
        }
        None
    }

    /// First nonzero coefficient at degree >= 1, if any.
    pub fn positive_degree_violation(&self) -> Option<(i32, ParamPoly)> {
        for (i, c) in self.coeffs.iter().enumerate() {
            let deg = self.low + i as i32;
            if deg >= 1 && !c.is_zero() {
                return Some((deg, c.clone()));
            }
        }
        None
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let deg = self.low + i as i32;
            if c.is_zero() {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, deg),
            };
            push_series_term(&mut out, c, &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbols::ParamSet;

    #[test]
    fn opposite_poles_cancel() {
        let p = ParamSet::empty();
        let a = LaurentSeries::from_parts("t", &p, -1, vec![ParamPoly::one(&p)]);
        let b = a.scaled(&rat(-1));
        let s = a.try_add(&b).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.low(), 0);
    }

    #[test]
    fn sum_keeps_uncancelled_principal_part() {
        // (t^-1 + 1) + 1 = t^-1 + 2
        let p = ParamSet::empty();
        let a =
            LaurentSeries::from_parts("t", &p, -1, vec![ParamPoly::one(&p), ParamPoly::one(&p)]);
        let b =
            LaurentSeries::from_parts("t", &p, 0, vec![ParamPoly::one(&p), ParamPoly::zero(&p)]);
        // align truncations: a has high 0, b has high 1 -> mismatch is an error
        assert!(a.try_add(&b).is_err());
        let b =
            LaurentSeries::from_parts("t", &p, -1, vec![ParamPoly::zero(&p), ParamPoly::one(&p)]);
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.coeff(-1).unwrap(), ParamPoly::one(&p));
        assert_eq!(s.coeff(0).unwrap(), ParamPoly::int(&p, 2));
        assert_eq!(s.principal_part_violation().unwrap().0, -1);
        assert_eq!(s.to_string(), "t^-1 + 2");
    }

    #[test]
    fn coefficient_access_contract() {
        let p = ParamSet::empty();
        let a = LaurentSeries::from_parts("t", &p, -2, vec![ParamPoly::one(&p); 4]);
        assert_eq!(a.high(), 1);
        assert_eq!(a.coeff(-3).unwrap(), ParamPoly::zero(&p));
        assert!(a.coeff(2).is_err());
    }
}
