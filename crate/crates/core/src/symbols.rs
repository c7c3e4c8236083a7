//! Parameter-symbol and series-variable contexts.
//!
//! Every polynomial carries an `Arc<ParamSet>` naming its parameter symbols
//! in a fixed order; every multivariate series carries an `Arc<VarSet>`
//! naming its formal variables. Arithmetic between values from different
//! contexts is a contract violation. Fixing the list per computation keeps
//! monomial order, and therefore all rendered output, deterministic.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Symbols that are always registered, in this order, so that values print
/// the same way in every run.
pub const STANDARD_SYMBOLS: [&str; 6] = ["alpha", "delta", "eps", "c", "a", "a2"];

/// Hard cap on symbols or variables per context; exponent vectors are packed
/// into a 128-bit word of 16 byte-sized lanes.
pub const MAX_NAMES: usize = 16;

fn check_names(names: &[String]) -> Result<()> {
    if names.len() > MAX_NAMES {
        return Err(Error::ContractViolation(format!(
            "at most {MAX_NAMES} names per context, got {}",
            names.len()
        )));
    }
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::SpecError(format!("invalid name `{n}`")));
        }
        if names[..i].contains(n) {
            return Err(Error::ContractViolation(format!("duplicate name `{n}`")));
        }
    }
    Ok(())
}

/// Names reserved for series variables; rejected as parameter symbols.
pub fn is_reserved_symbol(name: &str) -> bool {
    matches!(name, "t" | "y" | "z" | "s")
        || (name.starts_with('x')
            && name.len() > 1
            && name[1..].chars().all(|c| c.is_ascii_digit()))
}

/// Ordered list of parameter symbols for one computation.
#[derive(Debug, PartialEq, Eq)]
pub struct ParamSet {
    names: Vec<String>,
}

impl ParamSet {
    /// The six pre-registered symbols and nothing else.
    pub fn standard() -> Arc<Self> {
        Self::from_names(&STANDARD_SYMBOLS).unwrap()
    }

    /// No symbols at all (purely numeric coefficients).
    pub fn empty() -> Arc<Self> {
        Arc::new(ParamSet { names: Vec::new() })
    }

    /// Standard symbols followed by `extras` in declaration order.
    /// Extras already in the standard list are ignored.
    pub fn with_extras<S: AsRef<str>>(extras: &[S]) -> Result<Arc<Self>> {
        let mut names: Vec<String> = STANDARD_SYMBOLS.iter().map(|s| s.to_string()).collect();
        for e in extras {
            let e = e.as_ref();
            if is_reserved_symbol(e) {
                return Err(Error::SpecError(format!(
                    "`{e}` is reserved for series variables"
                )));
            }
            if !names.iter().any(|n| n == e) {
                names.push(e.to_string());
            }
        }
        check_names(&names)?;
        Ok(Arc::new(ParamSet { names }))
    }

    /// Exactly the given names, in the given order.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        check_names(&names)?;
        Ok(Arc::new(ParamSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Ordered list of series variables.
#[derive(Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(Error::ContractViolation("empty variable list".into()));
        }
        check_names(&names)?;
        Ok(Arc::new(VarSet { names }))
    }

    /// `x1, ..., xk`.
    pub fn standard(k: usize) -> Arc<Self> {
        let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        Self::from_names(&names).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Contexts compare by content; `Arc::ptr_eq` is only a fast path.
pub fn same_context<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_order_is_fixed() {
        let p = ParamSet::standard();
        assert_eq!(p.names(), &["alpha", "delta", "eps", "c", "a", "a2"]);
        assert_eq!(p.index_of("c"), Some(3));
    }

    #[test]
    fn extras_append_after_standard() {
        let p = ParamSet::with_extras(&["d", "e", "delta"]).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.index_of("d"), Some(6));
        assert_eq!(p.index_of("e"), Some(7));
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(ParamSet::with_extras(&["t"]).is_err());
        assert!(ParamSet::with_extras(&["x12"]).is_err());
        assert!(ParamSet::with_extras(&["y"]).is_err());
        assert!(ParamSet::with_extras(&["x"]).is_ok());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(VarSet::from_names(&["u", "u"]).is_err());
    }
}
