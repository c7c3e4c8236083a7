//! Sparse polynomials over the rationals in a fixed list of parameter
//! symbols.
//!
//! Exponent vectors are packed into a `u128` (16 byte lanes, symbol 0 in the
//! most significant byte), so monomial arithmetic is word arithmetic and
//! `BTreeMap` keys need no allocation. Invariants:
//!
//! - no stored zero coefficients;
//! - all monomials refer to the polynomial's own `ParamSet`;
//! - per-symbol exponents stay below 256 (asserted; degrees in this crate
//!   stay far below that).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::symbols::{same_context, ParamSet, MAX_NAMES};

/// Packed exponent multi-index: lane `i` (byte, MSB first) is the exponent of
/// name `i` in the owning context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    #[inline]
    fn shift(lane: usize) -> u32 {
        debug_assert!(lane < MAX_NAMES);
        ((MAX_NAMES - 1 - lane) * 8) as u32
    }

    /// Single name raised to a power.
    pub fn var_pow(lane: usize, exp: u8) -> Mono {
        Mono((exp as u128) << Self::shift(lane))
    }

    pub fn from_exps(exps: &[u8]) -> Mono {
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            m |= (e as u128) << Self::shift(i);
        }
        Mono(m)
    }

    #[inline]
    pub fn exp(&self, lane: usize) -> u8 {
        ((self.0 >> Self::shift(lane)) & 0xff) as u8
    }

    /// Sum of all lane exponents.
    #[inline]
    pub fn total_degree(&self) -> u32 {
        let mut v = self.0;
        let mut sum = 0u32;
        while v != 0 {
            sum += (v & 0xff) as u32;
            v >>= 8;
        }
        sum
    }

    /// Product of monomials. Per-lane sums must not overflow a byte; total
    /// degrees in this crate are orders of magnitude below the cap.
    #[inline]
    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert!(
            (0..MAX_NAMES).all(|i| (self.exp(i) as u16 + other.exp(i) as u16) < 256),
            "monomial exponent overflow"
        );
        Mono(self.0 + other.0)
    }

    pub fn is_one(&self) -> bool {
        self.0 == 0
    }

    /// Render with the given names, e.g. `alpha^2*delta`. Empty for 1.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            let e = self.exp(i);
            if e == 1 {
                parts.push(name.clone());
            } else if e > 1 {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }
}

/// Sparse polynomial with `Rational` coefficients over a `ParamSet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    params: Arc<ParamSet>,
    terms: BTreeMap<Mono, Rational>,
}

impl ParamPoly {
    pub fn zero(params: &Arc<ParamSet>) -> Self {
        ParamPoly {
            params: params.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: &Arc<ParamSet>) -> Self {
        Self::constant(params, Rational::one())
    }

    pub fn constant(params: &Arc<ParamSet>, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Mono::ONE, q);
        }
        ParamPoly {
            params: params.clone(),
            terms,
        }
    }

    pub fn int(params: &Arc<ParamSet>, n: i64) -> Self {
        Self::constant(params, rational::rat(n))
    }

    /// The symbol `name` as a degree-one polynomial.
    pub fn symbol(params: &Arc<ParamSet>, name: &str) -> Result<Self> {
        let lane = params
            .index_of(name)
            .ok_or_else(|| Error::SpecError(format!("unknown symbol `{name}`")))?;
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var_pow(lane, 1), Rational::one());
        Ok(ParamPoly {
            params: params.clone(),
            terms,
        })
    }

    pub fn monomial(params: &Arc<ParamSet>, mono: Mono, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        ParamPoly {
            params: params.clone(),
            terms,
        }
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(q)` if the polynomial is the constant `q` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, mono: &Mono) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    fn assert_same_context(&self, other: &Self) {
        assert!(
            same_context(&self.params, &other.params),
            "parameter contexts differ"
        );
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.assert_same_context(other);
        for (m, q) in &other.terms {
            let entry = self.terms.entry(*m).or_insert_with(Rational::zero);
            *entry += q;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        self.assert_same_context(other);
        for (m, q) in &other.terms {
            let entry = self.terms.entry(*m).or_insert_with(Rational::zero);
            *entry -= q;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    /// Accumulate `other * q` into self.
    pub fn add_scaled(&mut self, other: &Self, q: &Rational) {
        self.assert_same_context(other);
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            let entry = self.terms.entry(*m).or_insert_with(Rational::zero);
            *entry += c * q;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    /// Accumulate `a * b` into self (the convolution kernel).
    pub fn add_mul(&mut self, a: &Self, b: &Self) {
        self.assert_same_context(a);
        self.assert_same_context(b);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let entry = self.terms.entry(m).or_insert_with(Rational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    self.terms.remove(&m);
                }
            }
        }
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.params);
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c * q)).collect();
        ParamPoly {
            params: self.params.clone(),
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.params);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute rationals for the bound symbols; other symbols survive.
    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        for name in bindings.keys() {
            if self.params.index_of(name).is_none() {
                return Err(Error::SpecError(format!(
                    "unknown symbol `{name}` in specialisation"
                )));
            }
        }
        let lanes: Vec<(usize, &Rational)> = bindings
            .iter()
            .map(|(name, q)| (self.params.index_of(name).unwrap(), q))
            .collect();
        let mut out = Self::zero(&self.params);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut packed = *m;
            for &(lane, q) in &lanes {
                let e = packed.exp(lane);
                if e > 0 {
                    let mut p = Rational::one();
                    for _ in 0..e {
                        p *= q;
                    }
                    coeff *= p;
                    packed = Mono(packed.0 - ((e as u128) << Mono::shift(lane)));
                }
            }
            if !coeff.is_zero() {
                let entry = out.terms.entry(packed).or_insert_with(Rational::zero);
                *entry += coeff;
                if entry.is_zero() {
                    out.terms.remove(&packed);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `sym^k` viewed as a polynomial in `sym` (remaining
    /// symbols untouched).
    pub fn coeff_of_symbol_power(&self, sym: &str, k: u8) -> Result<Self> {
        let lane = self
            .params
            .index_of(sym)
            .ok_or_else(|| Error::SpecError(format!("unknown symbol `{sym}`")))?;
        let mut out = Self::zero(&self.params);
        for (m, c) in &self.terms {
            if m.exp(lane) == k {
                let reduced = Mono(m.0 - ((k as u128) << Mono::shift(lane)));
                out.terms.insert(reduced, c.clone());
            }
        }
        Ok(out)
    }

    /// Highest power of `sym` that occurs.
    pub fn degree_in_symbol(&self, sym: &str) -> Result<u8> {
        let lane = self
            .params
            .index_of(sym)
            .ok_or_else(|| Error::SpecError(format!("unknown symbol `{sym}`")))?;
        Ok(self.terms.keys().map(|m| m.exp(lane)).max().unwrap_or(0))
    }

    /// Terms sorted for rendering: ascending total degree, then descending
    /// packed order (earlier symbols first within a degree).
    fn render_order(&self) -> Vec<(&Mono, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            a.0.total_degree()
                .cmp(&b.0.total_degree())
                .then(b.0.cmp(a.0))
        });
        v
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.params.names();
        for (i, (m, c)) in self.render_order().into_iter().enumerate() {
            let neg = rational::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = m.render(names);
            if mono.is_empty() {
                write!(f, "{}", rational::render(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rational::render(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.params);
        out.add_mul(self, rhs);
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scaled(&-Rational::one())
    }
}
