//! Rational functions: normalized quotients of sparse polynomials.
//!
//! Canonical form: numerator and denominator coprime, denominator's
//! graded-lex leading coefficient equal to 1, zero represented as 0/1.
//! Equality of values is therefore identical representation.

use num::rational::BigRational;
use num::One;

use crate::mpoly::{gcd, MPoly};
use crate::vars::{VarId, Vars};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MRat {
    num: MPoly,
    den: MPoly,
}

impl MRat {
    pub fn zero() -> MRat {
        MRat { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> MRat {
        MRat { num: MPoly::one(), den: MPoly::one() }
    }

    pub fn from_poly(p: MPoly) -> MRat {
        MRat { num: p, den: MPoly::one() }
    }

    pub fn from_int(n: i64) -> MRat {
        MRat::from_poly(MPoly::from_int(n))
    }

    pub fn from_rational(q: BigRational) -> MRat {
        MRat::from_poly(MPoly::constant(q))
    }

    pub fn var(v: VarId) -> MRat {
        MRat::from_poly(MPoly::var(v))
    }

    /// Build a normalized quotient. Panics when `den` is zero; callers that
    /// take user input check for that first.
    pub fn new(num: MPoly, den: MPoly) -> MRat {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return MRat::zero();
        }
        let g = gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading_coeff_grlex();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        MRat { num, den }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_rational_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn add(&self, other: &MRat) -> MRat {
        MRat::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &MRat) -> MRat {
        MRat::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> MRat {
        MRat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &MRat) -> MRat {
        // cross-cancel before multiplying to keep intermediates small
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = other.den.exact_div(&g1).unwrap();
        let n2 = other.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        MRat::new(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Option<MRat> {
        if self.is_zero() {
            return None;
        }
        Some(MRat::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &MRat) -> Option<MRat> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, n: i32) -> Option<MRat> {
        if n >= 0 {
            Some(MRat::new(self.num.pow(n as u32), self.den.pow(n as u32)))
        } else {
            self.inv().map(|i| MRat::new(i.num.pow((-n) as u32), i.den.pow((-n) as u32)))
        }
    }

    /// Partial derivative (quotient rule).
    pub fn derivative(&self, v: VarId) -> MRat {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return MRat::new(dn, self.den.clone());
        }
        MRat::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    pub fn uses_var(&self, v: VarId) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    /// Substitute rational values for variables (simultaneously).
    pub fn subst_all(&self, assignments: &[(VarId, MRat)]) -> Option<MRat> {
        let n = eval_poly(&self.num, assignments);
        let d = eval_poly(&self.den, assignments);
        if d.is_zero() {
            return None;
        }
        n.div(&d)
    }

    pub fn to_string(&self, vars: &Vars) -> String {
        if self.den.is_one() {
            self.num.to_string(vars)
        } else {
            let n = if self.num.n_terms() > 1 {
                format!("({})", self.num.to_string(vars))
            } else {
                let s = self.num.to_string(vars);
                if s.contains('/') {
                    format!("({s})")
                } else {
                    s
                }
            };
            format!("{}/({})", n, self.den.to_string(vars))
        }
    }
}

/// Evaluate a polynomial at rational-function values, Horner-style per
/// variable occurrence.
fn eval_poly(p: &MPoly, assignments: &[(VarId, MRat)]) -> MRat {
    let mut acc = MRat::zero();
    for (exps, coeff) in p.terms() {
        let mut term = MRat::from_rational(coeff.clone());
        for (v, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let val = match assignments.iter().find(|(id, _)| *id == v) {
                Some((_, val)) => val.clone(),
                None => MRat::var(v),
            };
            term = term.mul(&val.pow(e as i32).expect("nonnegative power"));
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::Vars;

    #[test]
    fn normalization_cancels() {
        let vars = Vars::new(&[], &["x"]);
        let x = vars.lookup("x").unwrap();
        // (x^2-1)/(x-1) = x+1
        let num = MPoly::var(x).pow(2).sub(&MPoly::one());
        let den = MPoly::var(x).sub(&MPoly::one());
        let r = MRat::new(num, den);
        assert!(r.is_polynomial());
        assert_eq!(r.to_string(&vars), "x + 1");
    }

    #[test]
    fn monic_denominator() {
        let vars = Vars::new(&[], &["x"]);
        let x = vars.lookup("x").unwrap();
        // 1/(2x) -> (1/2)/x
        let r = MRat::new(MPoly::one(), MPoly::var(x).scale(&BigRational::from_integer(2.into())));
        assert_eq!(r.den(), &MPoly::var(x));
        assert_eq!(r.to_string(&vars), "(1/2)/(x)");
    }

    #[test]
    fn field_ops_roundtrip() {
        let vars = Vars::new(&["e"], &["x"]);
        let e = MRat::var(vars.lookup("e").unwrap());
        let x = MRat::var(vars.lookup("x").unwrap());
        let f = e.add(&x).div(&x.sub(&e)).unwrap();
        let back = f.mul(&x.sub(&e));
        assert_eq!(back, e.add(&x));
        assert_eq!(f.mul(&f.inv().unwrap()), MRat::one());
    }

    #[test]
    fn quotient_rule() {
        let vars = Vars::new(&[], &[]);
        let t = vars.t();
        // d/dt (1/t) = -1/t^2
        let r = MRat::new(MPoly::one(), MPoly::var(t));
        let d = r.derivative(t);
        assert_eq!(d, MRat::new(MPoly::from_int(-1), MPoly::var(t).pow(2)));
    }
}
