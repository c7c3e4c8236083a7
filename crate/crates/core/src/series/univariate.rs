//! Dense univariate truncated power series and genus exponents.
//!
//! A `PowerSeries1` of order N stores coefficients for degrees 0..=N; all
//! binary operations require the same variable, order and parameter context.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::ParamPoly;
use crate::rational::{self, Rational};
use crate::series::{push_series_term, var_power};
use crate::symbols::{same_context, ParamSet};

/// Univariate power series truncated at total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries1 {
    var: String,
    params: Arc<ParamSet>,
    order: u32,
    coeffs: Vec<ParamPoly>, // indexed by degree, len = order + 1
}

impl PowerSeries1 {
    pub fn zero(var: &str, params: &Arc<ParamSet>, order: u32) -> Self {
        PowerSeries1 {
            var: var.to_string(),
            params: params.clone(),
            order,
            coeffs: vec![ParamPoly::zero(params); order as usize + 1],
        }
    }

    pub fn one(var: &str, params: &Arc<ParamSet>, order: u32) -> Self {
        Self::monomial(var, params, order, 0, ParamPoly::one(params))
    }

    /// The series `x`.
    pub fn identity(var: &str, params: &Arc<ParamSet>, order: u32) -> Self {
        Self::monomial(var, params, order, 1, ParamPoly::one(params))
    }

    pub fn monomial(var: &str, params: &Arc<ParamSet>, order: u32, deg: u32, c: ParamPoly) -> Self {
        let mut s = Self::zero(var, params, order);
        if deg <= order {
            s.coeffs[deg as usize] = c;
        }
        s
    }

    pub fn from_coeffs(
        var: &str,
        params: &Arc<ParamSet>,
        order: u32,
        coeffs: Vec<ParamPoly>,
    ) -> Self {
        let mut s = Self::zero(var, params, order);
        for (d, c) in coeffs.into_iter().enumerate() {
            if d as u32 <= order {
                s.coeffs[d] = c;
            }
        }
        s
    }

    /// exp(a * x) = sum a^k x^k / k!.
    pub fn exp(a: &ParamPoly, var: &str, order: u32) -> Self {
        let params = a.params().clone();
        let mut s = Self::zero(var, &params, order);
        let mut pw = ParamPoly::one(&params);
        for k in 0..=order {
            s.coeffs[k as usize] = pw.scaled(&rational::inv_factorial(k));
            if k < order {
                pw = &pw * a;
            }
        }
        s
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, deg: u32) -> &ParamPoly {
        &self.coeffs[deg as usize]
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, deg: u32, c: ParamPoly) {
        self.coeffs[deg as usize] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Every even-degree coefficient vanishes.
    pub fn is_odd(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(d, c)| d % 2 == 1 || c.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.var != other.var
            || self.order != other.order
            || !same_context(&self.params, &other.params)
        {
            return Err(Error::ContractViolation(format!(
                "series mismatch: ({}, order {}) vs ({}, order {})",
                self.var, self.order, other.var, other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in other.coeffs.iter().enumerate() {
            out.coeffs[d].add_assign_ref(c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in other.coeffs.iter().enumerate() {
            out.coeffs[d].sub_assign_ref(c);
        }
        Ok(out)
    }

    /// Truncated product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.var, &self.params, self.order);
        for i in 0..=self.order {
            if self.coeffs[i as usize].is_zero() {
                continue;
            }
            for j in 0..=self.order - i {
                if other.coeffs[j as usize].is_zero() {
                    continue;
                }
                let target = &mut out.coeffs[(i + j) as usize];
                target.add_mul(&self.coeffs[i as usize], &other.coeffs[j as usize]);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.scaled(q);
        }
        out
    }

    pub fn mul_poly(&self, p: &ParamPoly) -> Self {
        let mut out = Self::zero(&self.var, &self.params, self.order);
        for (d, c) in self.coeffs.iter().enumerate() {
            out.coeffs[d] = c * p;
        }
        out
    }

    /// Multiplicative inverse; the constant term must be a nonzero
    /// parameter-free rational.
    pub fn invert_unit(&self) -> Result<Self> {
        let a0 = self.coeffs[0]
            .as_constant()
            .filter(|q| !q.is_zero())
            .ok_or_else(|| Error::NotAUnit(self.coeffs[0].to_string()))?;
        let inv_a0 = Rational::one() / a0;
        let mut out = Self::zero(&self.var, &self.params, self.order);
        out.coeffs[0] = ParamPoly::constant(&self.params, inv_a0.clone());
        let neg_inv_a0 = -inv_a0;
        for n in 1..=self.order as usize {
            let mut acc = ParamPoly::zero(&self.params);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !out.coeffs[n - k].is_zero() {
                    acc.add_mul(&self.coeffs[k], &out.coeffs[n - k]);
                }
            }
            out.coeffs[n] = acc.scaled(&neg_inv_a0);
        }
        Ok(out)
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(&self.var, &self.params, order);
        for d in 1..=self.order as usize {
            if d as u32 - 1 <= order {
                out.coeffs[d - 1] = self.coeffs[d].scaled(&rational::rat(d as i64));
            }
        }
        out
    }

    /// Composition self(inner); `inner` must have zero constant term and
    /// order at most this series' order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ContractViolation(
                "composition requires inner constant term 0".into(),
            ));
        }
        if self.order < inner.order {
            return Err(Error::OrderError(format!(
                "outer order {} < inner order {}",
                self.order, inner.order
            )));
        }
        let order = inner.order;
        let mut acc = Self::monomial(
            &inner.var,
            &self.params,
            order,
            0,
            self.coeffs[self.order as usize].clone(),
        );
        for d in (0..self.order).rev() {
            acc = acc.try_mul(inner)?;
            acc.coeffs[0].add_assign_ref(&self.coeffs[d as usize]);
        }
        Ok(acc)
    }

    /// Copy truncated to a smaller order.
    pub fn truncated(&self, order: u32) -> Self {
        assert!(order <= self.order, "cannot extend a truncated series");
        PowerSeries1 {
            var: self.var.clone(),
            params: self.params.clone(),
            order,
            coeffs: self.coeffs[..=order as usize].to_vec(),
        }
    }

    /// Substitute rationals for bound parameter symbols in every coefficient.
    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.specialize(bindings)?;
        }
        Ok(out)
    }

    /// Rename the series variable.
    pub fn with_var(&self, var: &str) -> Self {
        let mut out = self.clone();
        out.var = var.to_string();
        out
    }
}

impl fmt::Display for PowerSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                push_series_term(&mut out, c, &var_power(&self.var, d as u32));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

impl Add for &PowerSeries1 {
    type Output = PowerSeries1;
    fn add(self, rhs: &PowerSeries1) -> PowerSeries1 {
        self.try_add(rhs).unwrap()
    }
}

impl Sub for &PowerSeries1 {
    type Output = PowerSeries1;
    fn sub(self, rhs: &PowerSeries1) -> PowerSeries1 {
        self.try_sub(rhs).unwrap()
    }
}

impl Mul for &PowerSeries1 {
    type Output = PowerSeries1;
    fn mul(self, rhs: &PowerSeries1) -> PowerSeries1 {
        self.try_mul(rhs).unwrap()
    }
}

impl Neg for &PowerSeries1 {
    type Output = PowerSeries1;
    fn neg(self) -> PowerSeries1 {
        self.scaled(&-Rational::one())
    }
}

/// A genus exponent: univariate series with f(0) = 0 and f'(0) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSeries(PowerSeries1);

impl ExponentSeries {
    pub fn new(series: PowerSeries1) -> Result<Self> {
        if series.order < 1 {
            return Err(Error::InvalidExponent("order must be at least 1".into()));
        }
        if !series.coeffs[0].is_zero() {
            return Err(Error::InvalidExponent(format!(
                "f(0) = {} != 0",
                series.coeffs[0]
            )));
        }
        if series.coeffs[1].as_constant() != Some(Rational::one()) {
            return Err(Error::InvalidExponent(format!(
                "f'(0) = {} != 1",
                series.coeffs[1]
            )));
        }
        Ok(ExponentSeries(series))
    }

    /// The identity exponent `x`.
    pub fn identity(params: &Arc<ParamSet>, order: u32) -> Self {
        ExponentSeries(PowerSeries1::identity("x", params, order))
    }

    pub fn series(&self) -> &PowerSeries1 {
        &self.0
    }

    pub fn into_series(self) -> PowerSeries1 {
        self.0
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.0.params
    }

    pub fn coeff(&self, deg: u32) -> &ParamPoly {
        self.0.coeff(deg)
    }

    pub fn is_odd(&self) -> bool {
        self.0.is_odd()
    }

    pub fn truncated(&self, order: u32) -> Self {
        ExponentSeries(self.0.truncated(order))
    }

    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        ExponentSeries::new(self.0.specialize(bindings)?)
    }

    /// The unique h with h(f(x)) = f(h(x)) = x up to the truncation order.
    ///
    /// Built degree by degree: adding e·x^k to h moves f(h) at degree k by
    /// exactly e, so each defect coefficient is killed in turn.
    pub fn compositional_inverse(&self) -> Self {
        let n = self.0.order;
        let mut h = PowerSeries1::identity(&self.0.var, &self.0.params, n);
        for k in 2..=n {
            let defect = self.0.compose(&h).expect("inner constant term is zero");
            let d = defect.coeff(k).clone();
            if !d.is_zero() {
                h.coeffs[k as usize].sub_assign_ref(&d);
            }
        }
        ExponentSeries(h)
    }
}

impl fmt::Display for ExponentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn params() -> Arc<ParamSet> {
        ParamSet::standard()
    }

    fn series_from_i64(var: &str, p: &Arc<ParamSet>, order: u32, coeffs: &[i64]) -> PowerSeries1 {
        PowerSeries1::from_coeffs(
            var,
            p,
            order,
            coeffs.iter().map(|&c| ParamPoly::int(p, c)).collect(),
        )
    }

    #[test]
    fn geometric_series_inverse() {
        let p = params();
        let n = 6;
        // 1/(1 - x) = 1 + x + ... + x^N
        let one_minus_x = series_from_i64("x", &p, n, &[1, -1]);
        let inv = one_minus_x.invert_unit().unwrap();
        for d in 0..=n {
            assert_eq!(inv.coeff(d).as_constant(), Some(rat(1)));
        }
        // 1/1 = 1
        let one = PowerSeries1::one("x", &p, n);
        assert_eq!(one.invert_unit().unwrap(), one);
    }

    #[test]
    fn inverse_of_one_plus_delta_x2() {
        // 1/(1 + delta x^2) at N=4 -> 1 - delta x^2 + delta^2 x^4
        let p = params();
        let delta = ParamPoly::symbol(&p, "delta").unwrap();
        let mut s = PowerSeries1::one("x", &p, 4);
        s.set_coeff(2, delta.clone());
        let inv = s.invert_unit().unwrap();
        assert_eq!(inv.coeff(0), &ParamPoly::one(&p));
        assert!(inv.coeff(1).is_zero());
        assert_eq!(inv.coeff(2), &(-&delta));
        assert!(inv.coeff(3).is_zero());
        assert_eq!(inv.coeff(4), &(&delta * &delta));
        // Newton-style residual check: s * inv = 1 exactly.
        assert_eq!(&s * &inv, PowerSeries1::one("x", &p, 4));
    }

    #[test]
    fn non_unit_is_rejected() {
        let p = params();
        let x = PowerSeries1::identity("x", &p, 4);
        assert!(matches!(x.invert_unit(), Err(Error::NotAUnit(_))));
        // parameter constant term is not invertible either
        let mut s = PowerSeries1::one("x", &p, 4);
        s.set_coeff(0, ParamPoly::symbol(&p, "delta").unwrap());
        assert!(s.invert_unit().is_err());
    }

    #[test]
    fn derivative_basics() {
        let p = params();
        let x3 = PowerSeries1::monomial("x", &p, 5, 3, ParamPoly::one(&p));
        let d = x3.derivative();
        assert_eq!(d.order(), 4);
        assert_eq!(d.coeff(2).as_constant(), Some(rat(3)));
        let c = PowerSeries1::one("x", &p, 5);
        assert!(c.derivative().is_zero());
    }

    // Lagrange inversion: h_n = (1/n) [x^{n-1}] (x/f)^n. Independent of the
    // defect-correction path used by compositional_inverse.
    fn lagrange_inverse(f: &PowerSeries1) -> PowerSeries1 {
        let n = f.order();
        let p = f.params().clone();
        // x/f as a unit series
        let mut unit = PowerSeries1::zero(f.var(), &p, n);
        for d in 0..n {
            unit.set_coeff(d, f.coeff(d + 1).clone());
        }
        let unit_inv = unit.invert_unit().unwrap();
        let mut h = PowerSeries1::zero(f.var(), &p, n);
        let mut pw = PowerSeries1::one(f.var(), &p, n);
        for k in 1..=n {
            pw = &pw * &unit_inv; // (x/f)^k
            let c = pw.coeff(k - 1).scaled(&ratio(1, k as i64));
            h.set_coeff(k, c);
        }
        h
    }

    #[test]
    fn compositional_inverse_of_x_plus_x2() {
        // inverse(x + x^2) = x - x^2 + 2x^3 - 5x^4 + 14x^5 (signed Catalans)
        let p = params();
        let f = ExponentSeries::new(series_from_i64("x", &p, 5, &[0, 1, 1])).unwrap();
        let h = f.compositional_inverse();
        let expected = [0i64, 1, -1, 2, -5, 14];
        for (d, &e) in expected.iter().enumerate() {
            assert_eq!(h.coeff(d as u32).as_constant(), Some(rat(e)), "degree {d}");
        }
        assert_eq!(h.series(), &lagrange_inverse(f.series()));
    }

    #[test]
    fn compositional_inverse_of_todd() {
        // inverse(1 - e^{-x}) = -log(1-x) = x + x^2/2 + x^3/3 + x^4/4
        let p = params();
        let n = 4;
        let minus_one = ParamPoly::int(&p, -1);
        let e = PowerSeries1::exp(&minus_one, "x", n); // e^{-x}
        let f = ExponentSeries::new(&PowerSeries1::one("x", &p, n) - &e).unwrap();
        let h = f.compositional_inverse();
        for k in 1..=n {
            assert_eq!(h.coeff(k).as_constant(), Some(ratio(1, k as i64)), "x^{k}");
        }
    }

    #[test]
    fn inverse_of_identity_is_identity() {
        let p = params();
        let f = ExponentSeries::identity(&p, 6);
        assert_eq!(f.compositional_inverse(), f);
    }

    #[test]
    fn exponent_series_rejects_bad_input() {
        let p = params();
        let one = PowerSeries1::one("x", &p, 3);
        assert!(matches!(
            ExponentSeries::new(one),
            Err(Error::InvalidExponent(_))
        ));
        let two_x = PowerSeries1::monomial("x", &p, 3, 1, ParamPoly::int(&p, 2));
        assert!(ExponentSeries::new(two_x).is_err());
    }

    #[test]
    fn mul_requires_same_order() {
        let p = params();
        let a = PowerSeries1::one("x", &p, 3);
        let b = PowerSeries1::one("x", &p, 4);
        assert!(matches!(a.try_mul(&b), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn exp_series_coefficients() {
        let p = params();
        let alpha = ParamPoly::symbol(&p, "alpha").unwrap();
        let e = PowerSeries1::exp(&alpha, "x", 2);
        assert_eq!(e.coeff(0), &ParamPoly::one(&p));
        assert_eq!(e.coeff(1), &alpha);
        assert_eq!(e.coeff(2), &(&alpha * &alpha).scaled(&ratio(1, 2)));
    }

    #[test]
    fn display_canonical() {
        let p = params();
        let delta = ParamPoly::symbol(&p, "delta").unwrap();
        let mut s = PowerSeries1::identity("x", &p, 3);
        s.set_coeff(3, delta.scaled(&ratio(-1, 3)));
        assert_eq!(s.to_string(), "x - 1/3*delta*x^3");
    }
}
