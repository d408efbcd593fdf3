//! Session variable table.
//!
//! Variables are identified by their index into a table that is fixed for a
//! session: declared constants first, then `t`, then geometric variables in
//! declaration order. The index order is also the variable order used by the
//! term orders in [`crate::mpoly`].

use std::sync::Arc;

pub type VarId = usize;

/// Immutable variable table. Extending a table yields a new one that shares
/// the existing indices, so values built against the old table stay valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
    n_constants: usize,
}

impl Vars {
    /// Build a table from declared constant symbols and geometric variables.
    /// `t` is always present, directly after the constants.
    pub fn new(constants: &[&str], geoms: &[&str]) -> Arc<Vars> {
        let mut names: Vec<String> = Vec::with_capacity(constants.len() + 1 + geoms.len());
        for c in constants {
            assert!(is_identifier(c), "constant name `{c}` is not an identifier");
            assert!(*c != "t", "`t` cannot be declared as a constant");
            assert!(
                !names.iter().any(|n| n == c),
                "duplicate constant name `{c}`"
            );
            names.push((*c).to_string());
        }
        let n_constants = names.len();
        names.push("t".to_string());
        let mut vars = Vars { names, n_constants };
        for g in geoms {
            vars.push_geom(g);
        }
        Arc::new(vars)
    }

    /// Standard table for plane-curve work: constants, `t`, and the
    /// geometric variables `x`, `y` and their dotted twins.
    pub fn for_curve(constants: &[&str]) -> Arc<Vars> {
        Vars::new(constants, &["x", "y", "xdot", "ydot"])
    }

    fn push_geom(&mut self, name: &str) {
        assert!(is_identifier(name), "variable name `{name}` is not an identifier");
        assert!(
            !self.names.iter().any(|n| n == name),
            "duplicate variable name `{name}`"
        );
        self.names.push(name.to_string());
    }

    /// A new table with extra geometric variables appended.
    pub fn extended(self: &Arc<Self>, extra: &[&str]) -> Arc<Vars> {
        let mut vars = (**self).clone();
        for g in extra {
            vars.push_geom(g);
        }
        Arc::new(vars)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id]
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn t(&self) -> VarId {
        self.n_constants
    }

    pub fn n_constants(&self) -> usize {
        self.n_constants
    }

    pub fn is_constant_symbol(&self, id: VarId) -> bool {
        id < self.n_constants
    }

    /// Constant symbols in canonical order.
    pub fn constants(&self) -> impl Iterator<Item = VarId> + '_ {
        0..self.n_constants
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A declared transcendental constant symbol: a name plus its position in
/// the canonical ordering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConstantSymbol {
    pub name: String,
    pub index: usize,
}

impl ConstantSymbol {
    pub fn list(vars: &Vars) -> Vec<ConstantSymbol> {
        vars.constants()
            .map(|id| ConstantSymbol {
                name: vars.name(id).to_string(),
                index: id,
            })
            .collect()
    }
}
