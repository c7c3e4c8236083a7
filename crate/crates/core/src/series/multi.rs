//! Sparse multivariate power series truncated by total degree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Mono, ParamPoly};
use crate::rational::{self, Rational};
use crate::series::univariate::PowerSeries1;
use crate::series::{push_series_term, var_power};
use crate::symbols::{same_context, ParamSet, VarSet};

/// Multivariate power series over `ParamPoly` coefficients, truncated at
/// total degree `order`. No stored zero coefficients, no term above `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    vars: Arc<VarSet>,
    params: Arc<ParamSet>,
    order: u32,
    terms: BTreeMap<Mono, ParamPoly>,
}

impl TruncSeries {
    pub fn zero(vars: &Arc<VarSet>, params: &Arc<ParamSet>, order: u32) -> Self {
        TruncSeries {
            vars: vars.clone(),
            params: params.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, params: &Arc<ParamSet>, order: u32, c: ParamPoly) -> Self {
        let mut s = Self::zero(vars, params, order);
        s.insert(Mono::ONE, c);
        s
    }

    pub fn one(vars: &Arc<VarSet>, params: &Arc<ParamSet>, order: u32) -> Self {
        Self::constant(vars, params, order, ParamPoly::one(params))
    }

    /// The variable with the given index.
    pub fn variable(vars: &Arc<VarSet>, params: &Arc<ParamSet>, order: u32, idx: usize) -> Self {
        let mut s = Self::zero(vars, params, order);
        s.insert(Mono::var_pow(idx, 1), ParamPoly::one(params));
        s
    }

    /// A homogeneous linear form `sum w_j x_j`.
    pub fn linear_form(vars: &Arc<VarSet>, params: &Arc<ParamSet>, order: u32, w: &[i64]) -> Self {
        assert_eq!(w.len(), vars.len(), "weight length != variable count");
        let mut s = Self::zero(vars, params, order);
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0 {
                s.insert(Mono::var_pow(j, 1), ParamPoly::int(params, wj));
            }
        }
        s
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Mono) -> ParamPoly {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(&self.params))
    }

    pub fn constant_term(&self) -> ParamPoly {
        self.coeff(&Mono::ONE)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &ParamPoly)> {
        self.terms.iter()
    }

    /// Lowest total degree with a nonzero term, with a witness.
    pub fn lowest_nonzero(&self) -> Option<(u32, Mono, &ParamPoly)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.total_degree(), *m, c))
            .min_by_key(|(d, m, _)| (*d, *m))
    }

    fn insert(&mut self, mono: Mono, c: ParamPoly) {
        if !c.is_zero() && mono.total_degree() <= self.order {
            self.terms.insert(mono, c);
        }
    }

    fn add_term(&mut self, mono: Mono, c: &ParamPoly) {
        if c.is_zero() || mono.total_degree() > self.order {
            return;
        }
        let entry = self
            .terms
            .entry(mono)
            .or_insert_with(|| ParamPoly::zero(&self.params));
        entry.add_assign_ref(c);
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_context(&self.vars, &other.vars)
            || self.order != other.order
            || !same_context(&self.params, &other.params)
        {
            return Err(Error::ContractViolation(format!(
                "series mismatch: vars {:?} order {} vs vars {:?} order {}",
                self.vars.names(),
                self.order,
                other.vars.names(),
                other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &(-c));
        }
        Ok(out)
    }

    /// Graded convolution with early cutoff at the truncation order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut a: Vec<(Mono, u32, &ParamPoly)> = self
            .terms
            .iter()
            .map(|(m, c)| (*m, m.total_degree(), c))
            .collect();
        a.sort_by_key(|(_, d, _)| *d);
        let mut b: Vec<(Mono, u32, &ParamPoly)> = other
            .terms
            .iter()
            .map(|(m, c)| (*m, m.total_degree(), c))
            .collect();
        b.sort_by_key(|(_, d, _)| *d);
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        for (ma, da, ca) in &a {
            if *da > self.order {
                break;
            }
            for (mb, db, cb) in &b {
                if da + db > self.order {
                    break;
                }
                let m = ma.mul(mb);
                let entry = out
                    .terms
                    .entry(m)
                    .or_insert_with(|| ParamPoly::zero(&self.params));
                entry.add_mul(ca, cb);
                if entry.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        for (m, c) in &self.terms {
            out.insert(*m, c.scaled(q));
        }
        out
    }

    pub fn mul_poly(&self, p: &ParamPoly) -> Self {
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        for (m, c) in &self.terms {
            out.insert(*m, c * p);
        }
        out
    }

    /// Homogeneous component of the given total degree.
    fn component(&self, degree: u32) -> Vec<(Mono, &ParamPoly)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.total_degree() == degree)
            .map(|(m, c)| (*m, c))
            .collect()
    }

    /// Multiplicative inverse; the constant term must be a nonzero
    /// parameter-free rational. Degree-graded recurrence
    /// `b_d = -(1/a_0) * sum_{e=1..d} a_e b_{d-e}`.
    pub fn invert_unit(&self) -> Result<Self> {
        let a0 = self
            .constant_term()
            .as_constant()
            .filter(|q| !q.is_zero())
            .ok_or_else(|| Error::NotAUnit(self.constant_term().to_string()))?;
        let inv_a0 = Rational::one() / a0;
        let neg_inv_a0 = -inv_a0.clone();
        let a_by_deg: Vec<Vec<(Mono, &ParamPoly)>> =
            (0..=self.order).map(|d| self.component(d)).collect();
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        out.insert(Mono::ONE, ParamPoly::constant(&self.params, inv_a0));
        let mut out_by_deg: Vec<Vec<(Mono, ParamPoly)>> = vec![Vec::new(); self.order as usize + 1];
        out_by_deg[0] = vec![(Mono::ONE, out.constant_term())];
        for d in 1..=self.order {
            let mut acc: BTreeMap<Mono, ParamPoly> = BTreeMap::new();
            for e in 1..=d {
                for (ma, ca) in &a_by_deg[e as usize] {
                    for (mb, cb) in &out_by_deg[(d - e) as usize] {
                        let m = ma.mul(mb);
                        let entry = acc
                            .entry(m)
                            .or_insert_with(|| ParamPoly::zero(&self.params));
                        entry.add_mul(ca, cb);
                    }
                }
            }
            let mut bucket = Vec::new();
            for (m, c) in acc {
                let c = c.scaled(&neg_inv_a0);
                if !c.is_zero() {
                    out.terms.insert(m, c.clone());
                    bucket.push((m, c));
                }
            }
            out_by_deg[d as usize] = bucket;
        }
        Ok(out)
    }

    /// Formal partial derivative in the given variable; order drops by one.
    pub fn derivative(&self, var_idx: usize) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = TruncSeries {
            vars: self.vars.clone(),
            params: self.params.clone(),
            order,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let e = m.exp(var_idx);
            if e > 0 {
                let mut exps: Vec<u8> = (0..self.vars.len()).map(|i| m.exp(i)).collect();
                exps[var_idx] -= 1;
                out.add_term(Mono::from_exps(&exps), &c.scaled(&rational::rat(e as i64)));
            }
        }
        out
    }

    /// Substitute each variable by a homogeneous linear form over `new_vars`:
    /// `images[i]` gives the coefficients of the form replacing variable `i`.
    /// Total degree is preserved, so exactness at the truncation order is too.
    pub fn subst_linear(&self, images: &[Vec<i64>], new_vars: &Arc<VarSet>) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::ContractViolation(
                "one image per variable required".into(),
            ));
        }
        let mut out = Self::zero(new_vars, &self.params, self.order);
        // cache powers of each image form
        let mut power_cache: Vec<Vec<TruncSeries>> = images
            .iter()
            .map(|w| {
                vec![Self::one(new_vars, &self.params, self.order), {
                    Self::linear_form(new_vars, &self.params, self.order, w)
                }]
            })
            .collect();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(new_vars, &self.params, self.order, c.clone());
            for i in 0..self.vars.len() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while power_cache[i].len() <= e {
                    let next = power_cache[i].last().unwrap().try_mul(&power_cache[i][1])?;
                    power_cache[i].push(next);
                }
                prod = prod.try_mul(&power_cache[i][e])?;
            }
            for (pm, pc) in &prod.terms {
                out.add_term(*pm, pc);
            }
        }
        Ok(out)
    }

    /// Set one variable to zero (terms with positive exponent drop out).
    pub fn eval_var_zero(&self, var_idx: usize) -> Self {
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        for (m, c) in &self.terms {
            if m.exp(var_idx) == 0 {
                out.insert(*m, c.clone());
            }
        }
        out
    }

    /// Exact division by one variable. Fails unless every term is divisible.
    pub fn div_exact_var(&self, var_idx: usize) -> Result<Self> {
        let mut out = TruncSeries {
            vars: self.vars.clone(),
            params: self.params.clone(),
            order: self.order.saturating_sub(1),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let e = m.exp(var_idx);
            if e == 0 {
                return Err(Error::IdentityViolation(format!(
                    "series not divisible by {}",
                    self.vars.name(var_idx)
                )));
            }
            let mut exps: Vec<u8> = (0..self.vars.len()).map(|i| m.exp(i)).collect();
            exps[var_idx] = e - 1;
            out.insert(Mono::from_exps(&exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficient of `var^k`, as a series in the same variable list (the
    /// extracted variable no longer occurs). The order drops by `k`.
    pub fn coeff_of_var_power(&self, var_idx: usize, k: u8) -> Self {
        let mut out = TruncSeries {
            vars: self.vars.clone(),
            params: self.params.clone(),
            order: self.order.saturating_sub(k as u32),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if m.exp(var_idx) == k {
                let mut exps: Vec<u8> = (0..self.vars.len()).map(|i| m.exp(i)).collect();
                exps[var_idx] = 0;
                out.insert(Mono::from_exps(&exps), c.clone());
            }
        }
        out
    }

    /// Inject a univariate series as a series in `vars` supported on the
    /// variable with index `var_idx`.
    pub fn from_univariate(
        f: &PowerSeries1,
        vars: &Arc<VarSet>,
        var_idx: usize,
        order: u32,
    ) -> Result<Self> {
        if f.order() < order {
            return Err(Error::OrderError(format!(
                "univariate order {} < target {}",
                f.order(),
                order
            )));
        }
        let mut out = Self::zero(vars, f.params(), order);
        for d in 0..=order {
            out.insert(Mono::var_pow(var_idx, d as u8), f.coeff(d).clone());
        }
        Ok(out)
    }

    /// Project onto a univariate series; fails if any term involves another
    /// variable.
    pub fn to_univariate(&self, var_idx: usize) -> Result<PowerSeries1> {
        let mut out = PowerSeries1::zero(self.vars.name(var_idx), &self.params, self.order);
        for (m, c) in &self.terms {
            let e = m.exp(var_idx);
            if m.total_degree() != e as u32 {
                return Err(Error::ContractViolation(format!(
                    "term {} involves variables other than {}",
                    m.render(self.vars.names()),
                    self.vars.name(var_idx)
                )));
            }
            out.set_coeff(e as u32, c.clone());
        }
        Ok(out)
    }

    /// Compose a univariate series with the linear form `sum w_j x_j`.
    pub fn compose_linear(
        f: &PowerSeries1,
        w: &[i64],
        vars: &Arc<VarSet>,
        order: u32,
    ) -> Result<Self> {
        if f.order() < order {
            return Err(Error::OrderError(format!(
                "exponent order {} < target order {}",
                f.order(),
                order
            )));
        }
        let params = f.params();
        let form = Self::linear_form(vars, params, order, w);
        let mut acc = Self::constant(vars, params, order, f.coeff(f.order()).clone());
        for d in (0..f.order()).rev() {
            acc = acc.try_mul(&form)?;
            acc.add_term(Mono::ONE, f.coeff(d));
        }
        Ok(acc)
    }

    /// `exp(alpha * <w, x>)` truncated at `order`.
    pub fn exp_linear(
        alpha: &ParamPoly,
        w: &[i64],
        vars: &Arc<VarSet>,
        order: u32,
    ) -> Result<Self> {
        let params = alpha.params();
        let form = Self::linear_form(vars, params, order, w);
        let mut out = Self::one(vars, params, order);
        let mut form_pow = Self::one(vars, params, order);
        let mut alpha_pow = ParamPoly::one(params);
        for k in 1..=order {
            form_pow = form_pow.try_mul(&form)?;
            alpha_pow = &alpha_pow * alpha;
            if form_pow.is_zero() {
                break;
            }
            let scaled = form_pow.mul_poly(&alpha_pow.scaled(&rational::inv_factorial(k)));
            out = out.try_add(&scaled)?;
        }
        Ok(out)
    }

    /// Evaluate this series at the given arguments (one per variable, each
    /// with zero constant term, all in the same target context).
    pub fn compose(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        if args.len() != self.vars.len() {
            return Err(Error::ContractViolation(
                "one argument per variable required".into(),
            ));
        }
        let target = &args[0];
        for a in args {
            target.check_compatible(a)?;
            if !a.constant_term().is_zero() {
                return Err(Error::ContractViolation(
                    "composition requires zero constant terms".into(),
                ));
            }
        }
        let mut out = Self::zero(&target.vars, &self.params, target.order);
        let mut caches: Vec<Vec<TruncSeries>> = args
            .iter()
            .map(|a| {
                vec![
                    Self::one(&target.vars, &self.params, target.order),
                    a.clone(),
                ]
            })
            .collect();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(&target.vars, &self.params, target.order, c.clone());
            for i in 0..self.vars.len() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while caches[i].len() <= e {
                    let next = caches[i].last().unwrap().try_mul(&caches[i][1])?;
                    caches[i].push(next);
                }
                prod = prod.try_mul(&caches[i][e])?;
            }
            for (pm, pc) in &prod.terms {
                out.add_term(*pm, pc);
            }
        }
        Ok(out)
    }

    /// Copy truncated to a smaller order.
    pub fn truncated(&self, order: u32) -> Self {
        assert!(order <= self.order, "cannot extend a truncated series");
        let mut out = Self::zero(&self.vars, &self.params, order);
        for (m, c) in &self.terms {
            out.insert(*m, c.clone());
        }
        out
    }

    /// Substitute rationals for bound parameter symbols in every coefficient.
    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self> {
        let mut out = Self::zero(&self.vars, &self.params, self.order);
        for (m, c) in &self.terms {
            out.insert(*m, c.specialize(bindings)?);
        }
        Ok(out)
    }

    /// Terms in canonical render order: ascending total degree, then
    /// descending packed monomial (earlier variables first).
    pub fn render_order(&self) -> Vec<(Mono, &ParamPoly)> {
        let mut v: Vec<(Mono, &ParamPoly)> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        v.sort_by(|a, b| {
            a.0.total_degree()
                .cmp(&b.0.total_degree())
                .then(b.0.cmp(&a.0))
        });
        v
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (m, c) in self.render_order() {
            let mono = (0..self.vars.len())
                .filter_map(|i| {
                    let e = m.exp(i);
                    (e > 0).then(|| var_power(self.vars.name(i), e as u32))
                })
                .collect::<Vec<_>>()
                .join("*");
            push_series_term(&mut out, c, &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_add(rhs).unwrap()
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_sub(rhs).unwrap()
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.try_mul(rhs).unwrap()
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scaled(&-Rational::one())
    }
}
