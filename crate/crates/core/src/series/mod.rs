//! Truncated series kernels: dense univariate, sparse multivariate, Laurent.
//!
//! Univariate series are dense vectors indexed by degree (composition and
//! inversion dominate there); multivariate series are sparse maps keyed by
//! packed monomials. Truncation is always by total degree in the series
//! variables; parameter symbols are never truncated.

pub mod laurent;
pub mod multi;
pub mod univariate;

use num::traits::One;

use crate::poly::ParamPoly;
use crate::rational;

/// Append one rendered series term to `out`, handling sign placement.
///
/// `mono` is the rendered variable part (empty for the constant term).
/// Single-term coefficients are inlined (`-1/3*delta*x^3`), multi-term
/// coefficients are parenthesised (`(1 + delta)*x^2`).
pub(crate) fn push_series_term(out: &mut String, poly: &ParamPoly, mono: &str) {
    debug_assert!(!poly.is_zero());
    let names = poly.params().names();
    let (neg, body) = if poly.num_terms() == 1 {
        let (m, q) = poly.iter().next().unwrap();
        let neg = rational::is_negative(q);
        let abs = if neg { -q.clone() } else { q.clone() };
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() {
            parts.push(rational::render(&abs));
        }
        let sym = m.render(names);
        if !sym.is_empty() {
            parts.push(sym);
        }
        if !mono.is_empty() {
            parts.push(mono.to_string());
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        (neg, body)
    } else if mono.is_empty() {
        (false, format!("({poly})"))
    } else {
        (false, format!("({poly})*{mono}"))
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    out.push_str(&body);
}

/// Render a variable power, e.g. `x`, `x^3`, or empty for exponent 0.
pub(crate) fn var_power(name: &str, exp: u32) -> String {
    match exp {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{exp}"),
    }
}
