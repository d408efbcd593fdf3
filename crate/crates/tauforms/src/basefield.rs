//! The base differential field K = Q(c_1,...,c_k)(t) with derivation
//! d/dt: delta(t) = 1, delta(c_i) = 0, delta(q) = 0 for rational q.
//!
//! Elements are kept in canonical form (lowest terms, denominator with
//! graded-lex leading coefficient 1 over the variable order c_1,...,c_k,t),
//! so equality of values is equality of representations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::mrat::MRat;
use crate::vars::Vars;

/// An element of K. The wrapped rational function only involves the constant
/// symbols and `t`.
#[derive(Clone, Eq, Debug)]
pub struct BaseFunction {
    vars: Arc<Vars>,
    value: MRat,
}

impl PartialEq for BaseFunction {
    fn eq(&self, other: &Self) -> bool {
        // tables may differ by extension; values compare by content
        self.value == other.value
    }
}

impl BaseFunction {
    pub fn new(vars: Arc<Vars>, value: MRat) -> BaseFunction {
        debug_assert!(
            (vars.t() + 1..vars.len()).all(|v| !value.uses_var(v)),
            "base function uses a geometric variable"
        );
        BaseFunction { vars, value }
    }

    pub fn zero(vars: Arc<Vars>) -> BaseFunction {
        BaseFunction::new(vars, MRat::zero())
    }

    pub fn one(vars: Arc<Vars>) -> BaseFunction {
        BaseFunction::new(vars, MRat::one())
    }

    pub fn from_int(vars: Arc<Vars>, n: i64) -> BaseFunction {
        BaseFunction::new(vars, MRat::from_int(n))
    }

    pub fn t(vars: Arc<Vars>) -> BaseFunction {
        let t = vars.t();
        BaseFunction::new(vars, MRat::var(t))
    }

    pub fn constant_symbol(vars: Arc<Vars>, name: &str) -> Result<BaseFunction> {
        match vars.lookup(name) {
            Some(id) if vars.is_constant_symbol(id) => {
                Ok(BaseFunction::new(vars, MRat::var(id)))
            }
            _ => Err(Error::UnknownSymbol(name.to_string())),
        }
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn value(&self) -> &MRat {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn add(&self, other: &BaseFunction) -> BaseFunction {
        BaseFunction::new(self.vars.clone(), self.value.add(&other.value))
    }

    pub fn sub(&self, other: &BaseFunction) -> BaseFunction {
        BaseFunction::new(self.vars.clone(), self.value.sub(&other.value))
    }

    pub fn neg(&self) -> BaseFunction {
        BaseFunction::new(self.vars.clone(), self.value.neg())
    }

    pub fn mul(&self, other: &BaseFunction) -> BaseFunction {
        BaseFunction::new(self.vars.clone(), self.value.mul(&other.value))
    }

    pub fn scale_int(&self, n: i64) -> BaseFunction {
        self.mul(&BaseFunction::from_int(self.vars.clone(), n))
    }

    pub fn div(&self, other: &BaseFunction) -> Result<BaseFunction> {
        self.value
            .div(&other.value)
            .map(|v| BaseFunction::new(self.vars.clone(), v))
            .ok_or(Error::ZeroDenominator)
    }

    pub fn pow(&self, n: i32) -> Result<BaseFunction> {
        self.value
            .pow(n)
            .map(|v| BaseFunction::new(self.vars.clone(), v))
            .ok_or(Error::ZeroDenominator)
    }

    pub fn to_string(&self) -> String {
        self.value.to_string(&self.vars)
    }
}

/// Normalize a raw numerator/denominator pair into canonical form.
pub fn bf_normalize(vars: Arc<Vars>, num: MPoly, den: MPoly) -> Result<BaseFunction> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BaseFunction::new(vars, MRat::new(num, den)))
}

/// The derivation delta = d/dt.
pub fn bf_derive(f: &BaseFunction) -> BaseFunction {
    let t = f.vars.t();
    BaseFunction::new(f.vars.clone(), f.value.derivative(t))
}

/// Whether f lies in the constants K^delta, i.e. delta(f) = 0, i.e. the
/// canonical form is free of t.
pub fn bf_is_constant(f: &BaseFunction) -> bool {
    !f.value.uses_var(f.vars.t())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MPoly;

    fn setup() -> Arc<Vars> {
        Vars::new(&["e"], &[])
    }

    #[test]
    fn normalize_common_factor() {
        let vars = setup();
        let t = MPoly::var(vars.t());
        // (2t+2)/2 -> t+1
        let f = bf_normalize(
            vars.clone(),
            t.add(&MPoly::one()).scale(&num::BigRational::from_integer(2.into())),
            MPoly::from_int(2),
        )
        .unwrap();
        assert_eq!(f.to_string(), "t + 1");
    }

    #[test]
    fn normalize_cancellation() {
        let vars = setup();
        let t = MPoly::var(vars.t());
        // (t^2-1)/(t-1) -> t+1
        let f = bf_normalize(vars.clone(), t.pow(2).sub(&MPoly::one()), t.sub(&MPoly::one())).unwrap();
        assert_eq!(f.to_string(), "t + 1");
    }

    #[test]
    fn normalize_over_constant_field() {
        let vars = setup();
        let t = MPoly::var(vars.t());
        let e = MPoly::var(vars.lookup("e").unwrap());
        // (e*t)/t -> e
        let f = bf_normalize(vars.clone(), e.mul(&t), t).unwrap();
        assert_eq!(f.to_string(), "e");
    }

    #[test]
    fn normalize_idempotent() {
        let vars = setup();
        let t = MPoly::var(vars.t());
        let e = MPoly::var(vars.lookup("e").unwrap());
        let f = bf_normalize(vars.clone(), e.mul(&t).add(&MPoly::one()), t.pow(3).scale(&num::BigRational::from_integer(3.into()))).unwrap();
        let g = bf_normalize(vars, f.value.num().clone(), f.value.den().clone()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn zero_denominator_rejected() {
        let vars = setup();
        assert_eq!(
            bf_normalize(vars, MPoly::one(), MPoly::zero()).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn derive_power() {
        let vars = setup();
        let t = BaseFunction::t(vars);
        let t2 = t.mul(&t);
        assert_eq!(bf_derive(&t2).to_string(), "2*t");
    }

    #[test]
    fn derive_kills_constants() {
        let vars = setup();
        let e = BaseFunction::constant_symbol(vars, "e").unwrap();
        assert!(bf_derive(&e).is_zero());
    }

    #[test]
    fn derive_quotient() {
        let vars = setup();
        let t = BaseFunction::t(vars.clone());
        let inv_t = BaseFunction::one(vars).div(&t).unwrap();
        // delta(1/t) = -1/t^2
        assert_eq!(bf_derive(&inv_t).to_string(), "-1/(t^2)");
        // delta(t * 1/t) = 0
        let prod = t.mul(&inv_t);
        assert!(bf_derive(&prod).is_zero());
    }

    #[test]
    fn constant_detection() {
        let vars = setup();
        let e = BaseFunction::constant_symbol(vars.clone(), "e").unwrap();
        let t = BaseFunction::t(vars.clone());
        let three_sevenths = bf_normalize(vars.clone(), MPoly::from_int(3), MPoly::from_int(7)).unwrap();
        assert!(bf_is_constant(&three_sevenths));
        assert!(bf_is_constant(&e.add(&BaseFunction::from_int(vars.clone(), 2))));
        assert!(!bf_is_constant(&t.add(&e)));
    }
}
