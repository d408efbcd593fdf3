//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Exponent vectors are keyed by [`crate::vars::VarId`] and stored with
//! trailing zeros trimmed, so the same monomial compares equal regardless of
//! which table extension it was built under. No zero coefficients are stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::vars::{VarId, Vars};

pub type Exps = SmallVec<[u16; 8]>;

fn trim(mut e: Exps) -> Exps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_at(e: &Exps, v: VarId) -> u16 {
    e.get(v).copied().unwrap_or(0)
}

fn exp_mul(a: &Exps, b: &Exps) -> Exps {
    let n = a.len().max(b.len());
    let mut out = Exps::with_capacity(n);
    for i in 0..n {
        out.push(exp_at(a, i).checked_add(exp_at(b, i)).expect("exponent overflow"));
    }
    trim(out)
}

fn exp_div(a: &Exps, b: &Exps) -> Option<Exps> {
    let mut out = Exps::with_capacity(a.len());
    for i in 0..a.len().max(b.len()) {
        let (ea, eb) = (exp_at(a, i), exp_at(b, i));
        if ea < eb {
            return None;
        }
        out.push(ea - eb);
    }
    Some(trim(out))
}

fn total_deg(e: &Exps) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// Graded-lexicographic comparison: total degree first, then exponents from
/// the first variable on. Used for canonical leading terms and printing.
pub fn grlex(a: &Exps, b: &Exps) -> Ordering {
    total_deg(a)
        .cmp(&total_deg(b))
        .then_with(|| {
            for i in 0..a.len().max(b.len()) {
                match exp_at(a, i).cmp(&exp_at(b, i)) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
}

/// Graded-reverse-lexicographic comparison, the order fixed for geometric
/// polynomial arithmetic and the Groebner engine.
pub fn grevlex(a: &Exps, b: &Exps) -> Ordering {
    total_deg(a)
        .cmp(&total_deg(b))
        .then_with(|| {
            for i in (0..a.len().max(b.len())).rev() {
                match exp_at(b, i).cmp(&exp_at(a, i)) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, BigRational>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> MPoly {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> MPoly {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Exps::new(), q);
        }
        MPoly { terms }
    }

    pub fn from_int(n: i64) -> MPoly {
        MPoly::constant(BigRational::from(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> MPoly {
        MPoly::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: u16) -> MPoly {
        if e == 0 {
            return MPoly::one();
        }
        let mut exps = Exps::new();
        exps.resize(v + 1, 0);
        exps[v] = e;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRational::one());
        MPoly { terms }
    }

    pub fn monomial(exps: Exps, coeff: BigRational) -> MPoly {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(trim(exps), coeff);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.is_empty())
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&Exps::new()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Exps, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = trim(exps);
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(exp_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> MPoly {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> MPoly {
        let mut base = self.clone();
        let mut out = MPoly::one();
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms.keys().map(|e| exp_at(e, v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(total_deg).max().unwrap_or(0)
    }

    /// Highest variable id occurring with positive exponent.
    pub fn max_var(&self) -> Option<VarId> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .max()
    }

    pub fn uses_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|e| exp_at(e, v) > 0)
    }

    /// Leading term under graded-lex.
    pub fn leading_grlex(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    pub fn leading_coeff_grlex(&self) -> BigRational {
        self.leading_grlex()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Partial derivative with respect to a variable.
    pub fn derivative(&self, v: VarId) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let k = exp_at(e, v);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] = k - 1;
            out.add_term(e2, c * BigRational::from(BigInt::from(k)));
        }
        out
    }

    /// View as a dense univariate polynomial in `v` with MPoly coefficients.
    pub fn as_univar(&self, v: VarId) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (e, c) in &self.terms {
            let k = exp_at(e, v) as usize;
            let mut e2 = e.clone();
            if v < e2.len() {
                e2[v] = 0;
            }
            out[k].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_univar(v: VarId, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = MPoly::var_pow(v, k as u16);
            out = out.add(&c.mul(&xk));
        }
        out
    }

    /// Substitute a polynomial for a variable.
    pub fn subst(&self, v: VarId, value: &MPoly) -> MPoly {
        let uni = self.as_univar(v);
        let mut out = MPoly::zero();
        let mut power = MPoly::one();
        for c in uni {
            out = out.add(&c.mul(&power));
            power = power.mul(value);
        }
        out
    }

    /// Exact division; `None` when `self` is not a polynomial multiple of `d`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        let (dle, dlc) = {
            let (e, c) = d.leading_grlex().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rle, rlc) = {
                let (e, c) = rem.leading_grlex().unwrap();
                (e.clone(), c.clone())
            };
            let q_exp = exp_div(&rle, &dle)?;
            let q_coeff = rlc / &dlc;
            let m = MPoly::monomial(q_exp, q_coeff);
            rem = rem.sub(&m.mul(d));
            quo = quo.add(&m);
        }
        Some(quo)
    }

    /// Content with respect to `v`: gcd of the univariate coefficients.
    fn content_in(&self, v: VarId) -> MPoly {
        let coeffs = self.as_univar(v);
        let mut g = MPoly::zero();
        for c in coeffs {
            if !c.is_zero() {
                g = gcd(&g, &c);
            }
        }
        g
    }

    /// Normalize so the graded-lex leading coefficient is 1.
    pub fn monic_grlex(&self) -> MPoly {
        match self.leading_grlex() {
            None => MPoly::zero(),
            Some((_, c)) => {
                let inv = BigRational::one() / c;
                self.scale(&inv)
            }
        }
    }

    pub fn to_string(&self, vars: &Vars) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Exps, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        let mut s = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -*c } else { (*c).clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.is_empty() {
                factors.push(rational_string(&abs));
            }
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    factors.push(vars.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", vars.name(v), k));
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Multivariate gcd by subresultant pseudo-remainder sequences, normalized
/// so the graded-lex leading coefficient is 1.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic_grlex();
    }
    if b.is_zero() {
        return a.monic_grlex();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    // divide-first fast paths; cheap and very common in lcm accumulation
    if b.exact_div(a).is_some() {
        return a.monic_grlex();
    }
    if a.exact_div(b).is_some() {
        return b.monic_grlex();
    }
    let v = a.max_var().unwrap().max(b.max_var().unwrap());
    if !a.uses_var(v) {
        // b uses v, a does not: gcd divides the content of b in v
        return gcd(a, &b.content_in(v));
    }
    if !b.uses_var(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let cont_gcd = gcd(&ca, &cb);
    let prim_gcd = subresultant_gcd(pa, pb, v);
    cont_gcd.mul(&prim_gcd).monic_grlex()
}

/// Subresultant PRS (Collins/Brown) on primitive inputs; keeps coefficient
/// growth polynomial where the naive sequence explodes.
fn subresultant_gcd(mut a: MPoly, mut b: MPoly, v: VarId) -> MPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let delta = (a.degree_in(v) - b.degree_in(v)) as u32;
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            let cb = b.content_in(v);
            return b.exact_div(&cb).expect("content divides");
        }
        if !r.uses_var(v) {
            return MPoly::one();
        }
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = r.exact_div(&divisor).expect("subresultant division is exact");
        let da = a.degree_in(v) as usize;
        g = a.as_univar(v)[da].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant h-update is exact"),
        };
    }
}

/// Pseudo-remainder: lc(b)^(delta+1) * a = q*b + r with deg_v r < deg_v b.
fn pseudo_rem(a: &MPoly, b: &MPoly, v: VarId) -> MPoly {
    let db = b.degree_in(v);
    let da = a.degree_in(v);
    let bu = b.as_univar(v);
    let lb = bu[db as usize].clone();
    let mut r = a.clone();
    let mut steps = 0u32;
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let ru = r.as_univar(v);
        let lr = ru[dr as usize].clone();
        // r := lb * r - lr * v^(dr-db) * b
        let shift = MPoly::var_pow(v, dr - db);
        r = lb.mul(&r).sub(&lr.mul(&shift).mul(b));
        steps += 1;
        debug_assert!(r.degree_in(v) < dr || r.is_zero());
    }
    let full = (da - db) as u32 + 1;
    if steps < full {
        r = r.mul(&lb.pow(full - steps));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::Vars;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn arithmetic_basics() {
        let vars = Vars::new(&[], &["x", "y"]);
        let x = MPoly::var(vars.lookup("x").unwrap());
        let y = MPoly::var(vars.lookup("y").unwrap());
        let p = x.add(&y).mul(&x.sub(&y));
        let expect = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expect);
        assert_eq!(p.to_string(&vars), "x^2 - y^2");
    }

    #[test]
    fn trailing_zero_canonical() {
        // x built with a longer table equals x built with a shorter one
        let a = MPoly::var(1);
        let mut e = Exps::new();
        e.extend_from_slice(&[0, 1, 0, 0]);
        let b = MPoly::monomial(e, q(1));
        assert_eq!(a, b);
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let p = x.pow(2).sub(&y.pow(2));
        let d = x.add(&y);
        let quo = p.exact_div(&d).unwrap();
        assert_eq!(quo, x.sub(&y));
        assert!(p.exact_div(&x.add(&MPoly::one())).is_none());
    }

    #[test]
    fn gcd_univariate() {
        let t = MPoly::var(0);
        // gcd(t^2-1, t-1) = t-1
        let a = t.pow(2).sub(&MPoly::one());
        let b = t.sub(&MPoly::one());
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn gcd_multivariate() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let g = x.add(&y);
        let a = g.mul(&x.pow(2).add(&MPoly::one())).scale(&q(2));
        let b = g.mul(&y.sub(&x)).scale(&q(6));
        let got = gcd(&a, &b);
        assert_eq!(got, g);
    }

    #[test]
    fn gcd_with_constants_is_one() {
        let x = MPoly::var(0);
        assert_eq!(gcd(&x.scale(&q(4)), &MPoly::from_int(2)), MPoly::one());
    }

    #[test]
    fn derivative_and_subst() {
        let vars = Vars::new(&[], &["x", "y"]);
        let xv = vars.lookup("x").unwrap();
        let yv = vars.lookup("y").unwrap();
        let x = MPoly::var(xv);
        let y = MPoly::var(yv);
        let p = x.pow(3).mul(&y).add(&y.pow(2));
        assert_eq!(p.derivative(xv), x.pow(2).mul(&y).scale(&q(3)));
        let s = p.subst(yv, &x);
        assert_eq!(s, x.pow(4).add(&x.pow(2)));
    }

    #[test]
    fn grevlex_order() {
        // x^2 y > x y^2 under grevlex with x before y
        let a: Exps = Exps::from_slice(&[2, 1]);
        let b: Exps = Exps::from_slice(&[1, 2]);
        assert_eq!(grevlex(&a, &b), Ordering::Greater);
    }
}
