//! Genus exponents and their formal-group-law / CP^k correspondences.
//!
//! A genus with values in a Q-algebra is determined by its exponent, the
//! unique series f(x) = x + ... with f(x+y) = F(f(x), f(y)) for the
//! corresponding formal group law F. This module builds the exponents used
//! throughout the crate — elliptic sine, the Krichever b2=0 family
//! e^{alpha x} sn(x), the Todd exponent 1 - e^{-x}, and ad-hoc odd/explicit
//! families — and derives F and the CP^k coefficients from any of them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::traits::Zero;

use crate::error::{Error, Result};
use crate::poly::ParamPoly;
use crate::rational::{self, Rational};
use crate::series::multi::TruncSeries;
use crate::series::univariate::{ExponentSeries, PowerSeries1};
use crate::symbols::{ParamSet, VarSet};

/// A parameter in a genus specification: an exact rational or a free symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Rat(Rational),
    Sym(String),
}

impl ParamValue {
    pub fn zero() -> Self {
        ParamValue::Rat(Rational::zero())
    }

    pub fn to_poly(&self, params: &Arc<ParamSet>) -> Result<ParamPoly> {
        match self {
            ParamValue::Rat(q) => Ok(ParamPoly::constant(params, q.clone())),
            ParamValue::Sym(name) => ParamPoly::symbol(params, name),
        }
    }

    fn symbol_name(&self) -> Option<&str> {
        match self {
            ParamValue::Sym(name) => Some(name),
            ParamValue::Rat(_) => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Rat(q) => write!(f, "{}", rational::render(q)),
            ParamValue::Sym(s) => write!(f, "{s}"),
        }
    }
}

/// Supported genus families. `KricheverB2Zero` is the b2 = 0 reduction of the
/// Krichever genus; the full four-parameter genus (Baker–Akhiezer Phi) is out
/// of scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenusSpec {
    /// Exponent x (the augmentation genus).
    Identity,
    /// Exponent 1 - e^{-x} (Todd genus).
    Todd,
    /// The elliptic sine sn_{delta,eps}.
    EllipticSine { delta: ParamValue, eps: ParamValue },
    /// e^{alpha x} * sn_{delta,eps}(x).
    KricheverB2Zero {
        alpha: ParamValue,
        delta: ParamValue,
        eps: ParamValue,
    },
    /// e^{alpha x} * g(x) with g odd given by its odd coefficients
    /// (g1 = 1 implicit; missing degrees are zero).
    OddFamily {
        alpha: ParamValue,
        coeffs: Vec<(u32, ParamValue)>,
    },
    /// x + sum c_d x^d with explicit coefficients from degree 2 up.
    Explicit { coeffs: Vec<(u32, ParamValue)> },
}

impl GenusSpec {
    /// Free symbols referenced by this spec, in order of appearance.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: &ParamValue| {
            if let Some(name) = v.symbol_name() {
                if !out.iter().any(|n| n == name) {
                    out.push(name.to_string());
                }
            }
        };
        match self {
            GenusSpec::Identity | GenusSpec::Todd => {}
            GenusSpec::EllipticSine { delta, eps } => {
                push(delta);
                push(eps);
            }
            GenusSpec::KricheverB2Zero { alpha, delta, eps } => {
                push(alpha);
                push(delta);
                push(eps);
            }
            GenusSpec::OddFamily { alpha, coeffs } => {
                push(alpha);
                for (_, v) in coeffs {
                    push(v);
                }
            }
            GenusSpec::Explicit { coeffs } => {
                for (_, v) in coeffs {
                    push(v);
                }
            }
        }
        out
    }

    /// Parameter set covering this spec: the standard symbols plus whatever
    /// the spec declares.
    pub fn param_set(&self) -> Result<Arc<ParamSet>> {
        ParamSet::with_extras(&self.symbols())
    }
}

/// Parse the genus mini-language:
/// `id`, `todd`, `sn:delta=<q|sym>,eps=<q|sym>`,
/// `kr0:alpha=...,delta=...,eps=...`, `odd:alpha=...,g3=...,g5=...[,g7=...]`,
/// `explicit:c2=...,c3=...`. Rationals as `p/q`; bare names declare symbols.
pub fn parse_genus_spec(input: &str) -> Result<GenusSpec> {
    let input = input.trim();
    let (head, rest) = match input.split_once(':') {
        Some((h, r)) => (h.trim(), Some(r)),
        None => (input, None),
    };
    let fields = |rest: Option<&str>| -> Result<Vec<(String, ParamValue)>> {
        let Some(rest) = rest else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for piece in rest.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (k, v) = piece.split_once('=').ok_or_else(|| {
                Error::SpecError(format!("expected key=value in genus spec, got `{piece}`"))
            })?;
            out.push((k.trim().to_string(), parse_param_value(v.trim())?));
        }
        Ok(out)
    };
    let take = |fields: &mut Vec<(String, ParamValue)>, key: &str| -> Option<ParamValue> {
        fields
            .iter()
            .position(|(k, _)| k == key)
            .map(|i| fields.remove(i).1)
    };
    let no_leftovers = |fields: Vec<(String, ParamValue)>| -> Result<()> {
        if let Some((k, _)) = fields.first() {
            return Err(Error::SpecError(format!("unknown genus field `{k}`")));
        }
        Ok(())
    };
    match head {
        "id" => {
            no_leftovers(fields(rest)?)?;
            Ok(GenusSpec::Identity)
        }
        "todd" => {
            no_leftovers(fields(rest)?)?;
            Ok(GenusSpec::Todd)
        }
        "sn" => {
            let mut f = fields(rest)?;
            let delta = take(&mut f, "delta").unwrap_or_else(ParamValue::zero);
            let eps = take(&mut f, "eps").unwrap_or_else(ParamValue::zero);
            no_leftovers(f)?;
            Ok(GenusSpec::EllipticSine { delta, eps })
        }
        "kr0" => {
            let mut f = fields(rest)?;
            let alpha = take(&mut f, "alpha").unwrap_or_else(ParamValue::zero);
            let delta = take(&mut f, "delta").unwrap_or_else(ParamValue::zero);
            let eps = take(&mut f, "eps").unwrap_or_else(ParamValue::zero);
            no_leftovers(f)?;
            Ok(GenusSpec::KricheverB2Zero { alpha, delta, eps })
        }
        "odd" => {
            let mut f = fields(rest)?;
            let alpha = take(&mut f, "alpha").unwrap_or_else(ParamValue::zero);
            let mut coeffs = Vec::new();
            for (k, v) in f {
                let deg: u32 = k
                    .strip_prefix('g')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::SpecError(format!("unknown odd field `{k}`")))?;
                if deg % 2 == 0 || deg < 3 {
                    return Err(Error::SpecError(format!(
                        "odd family stores odd degrees >= 3, got g{deg}"
                    )));
                }
                coeffs.push((deg, v));
            }
            coeffs.sort_by_key(|(d, _)| *d);
            Ok(GenusSpec::OddFamily { alpha, coeffs })
        }
        "explicit" => {
            let f = fields(rest)?;
            let mut coeffs = Vec::new();
            for (k, v) in f {
                let deg: u32 = k
                    .strip_prefix('c')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::SpecError(format!("unknown explicit field `{k}`")))?;
                if deg < 2 {
                    return Err(Error::SpecError(
                        "explicit coefficients start at degree 2".into(),
                    ));
                }
                coeffs.push((deg, v));
            }
            coeffs.sort_by_key(|(d, _)| *d);
            Ok(GenusSpec::Explicit { coeffs })
        }
        other => Err(Error::SpecError(format!("unknown genus family `{other}`"))),
    }
}

fn parse_param_value(s: &str) -> Result<ParamValue> {
    if s.is_empty() {
        return Err(Error::SpecError("empty genus parameter".into()));
    }
    let first = s.chars().next().unwrap();
    if first.is_ascii_digit() || first == '-' || first == '+' {
        Ok(ParamValue::Rat(rational::parse_rational(s)?))
    } else {
        if crate::symbols::is_reserved_symbol(s) {
            return Err(Error::SpecError(format!(
                "`{s}` is reserved for series variables"
            )));
        }
        if !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::SpecError(format!("invalid symbol name `{s}`")));
        }
        Ok(ParamValue::Sym(s.to_string()))
    }
}

/// The unique odd series x + c3 x^3 + ... with
/// (f')^2 = 1 - 2 delta f^2 + eps f^4, truncated at `order`.
///
/// Solved degree by degree: the x^{2m} coefficient of the ODE residual is
/// linear in c_{2m+1} with leading factor 2(2m+1).
pub fn elliptic_sine(delta: &ParamPoly, eps: &ParamPoly, order: u32) -> ExponentSeries {
    let params = delta.params().clone();
    let mut f = PowerSeries1::identity("x", &params, order);
    let mut m = 1;
    while 2 * m + 1 <= order {
        let res = sn_ode_residual_series(&f, delta, eps);
        let r = res.coeff(2 * m).clone();
        if !r.is_zero() {
            let c = r.scaled(&rational::ratio(-1, 2 * (2 * m as i64 + 1)));
            f.set_coeff(2 * m + 1, c);
        }
        m += 1;
    }
    ExponentSeries::new(f).expect("construction keeps f(0)=0, f'(0)=1")
}

/// (f')^2 - (1 - 2 delta f^2 + eps f^4), exact to order(f) - 1.
pub fn sn_ode_residual_series(
    f: &PowerSeries1,
    delta: &ParamPoly,
    eps: &ParamPoly,
) -> PowerSeries1 {
    let n = f.order().saturating_sub(1);
    let params = f.params();
    let ft = f.truncated(n);
    let df = f.derivative();
    let f2 = &ft * &ft;
    let f4 = &f2 * &f2;
    let mut rhs = PowerSeries1::one(f.var(), params, n);
    rhs = &rhs - &f2.mul_poly(&delta.scaled(&rational::rat(2)));
    rhs = &rhs + &f4.mul_poly(eps);
    &(&df * &df) - &rhs
}

/// e^{alpha x} * sn_{delta,eps}(x), truncated at `order`.
pub fn krichever_b2zero(
    alpha: &ParamPoly,
    delta: &ParamPoly,
    eps: &ParamPoly,
    order: u32,
) -> ExponentSeries {
    let sn = elliptic_sine(delta, eps, order);
    let e = PowerSeries1::exp(alpha, "x", order);
    ExponentSeries::new(&e * sn.series()).expect("product of x+... with unit e^{alpha x}")
}

/// The Todd exponent 1 - e^{-x}.
pub fn todd_exponent(params: &Arc<ParamSet>, order: u32) -> ExponentSeries {
    let minus_one = ParamPoly::int(params, -1);
    let e = PowerSeries1::exp(&minus_one, "x", order);
    ExponentSeries::new(&PowerSeries1::one("x", params, order) - &e).expect("1 - e^{-x} = x + ...")
}

/// Build the exponent series for a genus spec over the given parameter set.
pub fn exponent_from_spec(
    spec: &GenusSpec,
    params: &Arc<ParamSet>,
    order: u32,
) -> Result<ExponentSeries> {
    if order < 1 {
        return Err(Error::SpecError("order must be at least 1".into()));
    }
    match spec {
        GenusSpec::Identity => Ok(ExponentSeries::identity(params, order)),
        GenusSpec::Todd => Ok(todd_exponent(params, order)),
        GenusSpec::EllipticSine { delta, eps } => Ok(elliptic_sine(
            &delta.to_poly(params)?,
            &eps.to_poly(params)?,
            order,
        )),
        GenusSpec::KricheverB2Zero { alpha, delta, eps } => Ok(krichever_b2zero(
            &alpha.to_poly(params)?,
            &delta.to_poly(params)?,
            &eps.to_poly(params)?,
            order,
        )),
        GenusSpec::OddFamily { alpha, coeffs } => {
            let mut g = PowerSeries1::identity("x", params, order);
            for (deg, v) in coeffs {
                if deg % 2 == 0 || *deg < 3 {
                    return Err(Error::SpecError(format!(
                        "odd family stores odd degrees >= 3, got {deg}"
                    )));
                }
                if *deg <= order {
                    g.set_coeff(*deg, v.to_poly(params)?);
                }
            }
            let e = PowerSeries1::exp(&alpha.to_poly(params)?, "x", order);
            ExponentSeries::new(&e * &g)
        }
        GenusSpec::Explicit { coeffs } => {
            let mut f = PowerSeries1::identity("x", params, order);
            for (deg, v) in coeffs {
                if *deg < 2 {
                    return Err(Error::SpecError(
                        "explicit coefficients start at degree 2".into(),
                    ));
                }
                if *deg <= order {
                    f.set_coeff(*deg, v.to_poly(params)?);
                }
            }
            ExponentSeries::new(f)
        }
    }
}

/// (phi([CP^1]), ..., phi([CP^K])): phi([CP^k]) is (k+1) times the x^{k+1}
/// coefficient of the compositional inverse of the exponent.
pub fn cpn_values(f: &ExponentSeries, k_max: u32) -> Result<Vec<ParamPoly>> {
    if f.order() < k_max + 1 {
        return Err(Error::OrderError(format!(
            "exponent order {} < K+1 = {}",
            f.order(),
            k_max + 1
        )));
    }
    let inv = f.compositional_inverse();
    Ok((1..=k_max)
        .map(|k| inv.coeff(k + 1).scaled(&rational::rat(k as i64 + 1)))
        .collect())
}

/// A formal group law: bivariate series F(x, y) with F(x,0) = x,
/// F(0,y) = y, F symmetric and associative up to the truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    series: TruncSeries,
}

impl FormalGroupLaw {
    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    /// F(x, 0) = x and F(0, y) = y.
    pub fn unit_ok(&self) -> bool {
        let vars = self.series.vars();
        let params = self.series.params();
        let n = self.series.order();
        let x = TruncSeries::variable(vars, params, n, 0);
        let y = TruncSeries::variable(vars, params, n, 1);
        self.series.eval_var_zero(1) == x && self.series.eval_var_zero(0) == y
    }

    /// F(x, y) = F(y, x).
    pub fn symmetric_ok(&self) -> bool {
        let vars = self.series.vars();
        let swapped = self
            .series
            .subst_linear(&[vec![0, 1], vec![1, 0]], vars)
            .expect("swap is a linear substitution");
        swapped == self.series
    }

    /// F(F(x,y), z) = F(x, F(y,z)) over three variables.
    pub fn associative_ok(&self) -> Result<bool> {
        let params = self.series.params();
        let n = self.series.order();
        let xyz = VarSet::from_names(&["x", "y", "z"])?;
        let x = TruncSeries::variable(&xyz, params, n, 0);
        let y = TruncSeries::variable(&xyz, params, n, 1);
        let z = TruncSeries::variable(&xyz, params, n, 2);
        let f_xy = self.series.compose(&[x.clone(), y.clone()])?;
        let f_yz = self.series.compose(&[y, z.clone()])?;
        let lhs = self.series.compose(&[f_xy, z])?;
        let rhs = self.series.compose(&[x, f_yz])?;
        Ok(lhs == rhs)
    }
}

/// F(x, y) = f(f^{-1}(x) + f^{-1}(y)) truncated at `order`.
pub fn fgl_from_exponent(f: &ExponentSeries, order: u32) -> Result<FormalGroupLaw> {
    if f.order() < order {
        return Err(Error::OrderError(format!(
            "exponent order {} < target order {}",
            f.order(),
            order
        )));
    }
    let params = f.params();
    let vars = VarSet::from_names(&["x", "y"])?;
    let f = f.truncated(order);
    let inv = f.compositional_inverse();
    let ux = TruncSeries::from_univariate(inv.series(), &vars, 0, order)?;
    let uy = TruncSeries::from_univariate(inv.series(), &vars, 1, order)?;
    let arg = ux.try_add(&uy)?;
    // Horner evaluation of f at the bivariate argument
    let mut acc = TruncSeries::constant(&vars, params, order, f.coeff(order).clone());
    for d in (0..order).rev() {
        acc = acc.try_mul(&arg)?;
        let c = f.coeff(d);
        if !c.is_zero() {
            acc = acc.try_add(&TruncSeries::constant(&vars, params, order, c.clone()))?;
        }
    }
    Ok(FormalGroupLaw { series: acc })
}

/// Substitute rationals for free symbols in an exponent series.
pub fn specialize_exponent(
    f: &ExponentSeries,
    bindings: &BTreeMap<String, Rational>,
) -> Result<ExponentSeries> {
    f.specialize(bindings)
}
