//! Polynomials in geometric variables over K, plane-curve charts, and
//! function-field arithmetic K(C) = K(x)[y]/(p).
//!
//! The total derivative d/dx along the curve is f_x + f_y * (-p_x/p_y);
//! `delta_coeff` applies delta to every coefficient of the y-reduced
//! representative, treating the geometric variables as delta-killed symbols.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basefield::BaseFunction;
use crate::error::{Error, Result};
use crate::mpoly::{grevlex, Exps, MPoly};
use crate::mrat::MRat;
use crate::vars::{VarId, Vars};

/// Sparse polynomial in geometric variables with BaseFunction coefficients.
/// The term order is graded reverse lexicographic.
#[derive(Clone, Eq, Debug)]
pub struct MultiPoly {
    vars: Arc<Vars>,
    terms: BTreeMap<Exps, BaseFunction>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        // tables may differ by extension; values compare by content
        self.terms == other.terms
    }
}

fn geom_exps(vars: &Vars, exps: &Exps) -> bool {
    exps.iter().enumerate().all(|(v, &e)| e == 0 || v > vars.t())
}

impl MultiPoly {
    pub fn zero(vars: Arc<Vars>) -> MultiPoly {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(c: BaseFunction) -> MultiPoly {
        let vars = c.vars().clone();
        let mut p = MultiPoly::zero(vars);
        p.add_term(Exps::new(), c);
        p
    }

    pub fn one(vars: Arc<Vars>) -> MultiPoly {
        MultiPoly::constant(BaseFunction::one(vars))
    }

    pub fn var(vars: Arc<Vars>, v: VarId) -> MultiPoly {
        assert!(v > vars.t(), "not a geometric variable");
        let mut exps = Exps::new();
        exps.resize(v + 1, 0);
        exps[v] = 1;
        let mut p = MultiPoly::zero(vars.clone());
        p.add_term(exps, BaseFunction::one(vars));
        p
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BaseFunction)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Exps, coeff: BaseFunction) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(geom_exps(&self.vars, &exps));
        let mut key = exps;
        while key.last() == Some(&0) {
            key.pop();
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let n = ea.len().max(eb.len());
                let mut e = Exps::with_capacity(n);
                for i in 0..n {
                    e.push(
                        ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0),
                    );
                }
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &BaseFunction) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, k) in &self.terms {
            out.add_term(e.clone(), k.mul(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.vars.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms
            .keys()
            .map(|e| e.get(v).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative with respect to a geometric variable.
    pub fn derivative(&self, v: VarId) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let k = e.get(v).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] = k - 1;
            out.add_term(e2, c.mul(&BaseFunction::from_int(self.vars.clone(), k as i64)));
        }
        out
    }

    /// Coefficientwise delta; geometric variables are delta-killed.
    pub fn delta(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), crate::basefield::bf_derive(c));
        }
        out
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: VarId, k: u16) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e.get(v).copied().unwrap_or(0) == k {
                let mut e2 = e.clone();
                if v < e2.len() {
                    e2[v] = 0;
                }
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Evaluate at BaseFunction values for the geometric variables.
    pub fn eval(&self, assignments: &[(VarId, BaseFunction)]) -> Result<BaseFunction> {
        let mut acc = BaseFunction::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let val = assignments
                    .iter()
                    .find(|(id, _)| *id == v)
                    .map(|(_, val)| val.clone())
                    .ok_or_else(|| Error::invalid(format!(
                        "no value supplied for variable `{}`",
                        self.vars.name(v)
                    )))?;
                term = term.mul(&val.pow(k as i32)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Geometric variables actually occurring.
    pub fn geom_vars_used(&self) -> Vec<VarId> {
        let mut used: Vec<VarId> = Vec::new();
        for e in self.terms.keys() {
            for (v, &k) in e.iter().enumerate() {
                if k > 0 && !used.contains(&v) {
                    used.push(v);
                }
            }
        }
        used.sort_unstable();
        used
    }

    pub fn to_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Exps, &BaseFunction)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grevlex(b.0, a.0));
        let mut pieces: Vec<String> = Vec::new();
        for (e, c) in terms {
            let mut factors: Vec<String> = Vec::new();
            let cs = c.to_string();
            let plain_one = cs == "1";
            let plain_minus_one = cs == "-1";
            if !plain_one && !plain_minus_one {
                if cs.contains('+') || (cs.contains('-') && !cs.starts_with('-')) || cs.contains('/') {
                    factors.push(format!("({cs})"));
                } else {
                    factors.push(cs);
                }
            }
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    factors.push(self.vars.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", self.vars.name(v), k));
                }
            }
            if factors.is_empty() {
                factors.push(if plain_minus_one { "-1".into() } else { "1".into() });
            } else if plain_minus_one {
                factors.insert(0, "-1".into());
            }
            pieces.push(factors.join("*"));
        }
        let mut s = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                s.push_str(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest.strip_prefix("1*").unwrap_or(rest));
            } else {
                s.push_str(" + ");
                s.push_str(piece);
            }
        }
        s
    }
}

/// A plane affine curve chart p(x,y) = 0 with p monic in y. Genus and
/// simplicity of the Jacobian are user-supplied assertions recorded on the
/// chart; irreducibility of p is likewise asserted, and `ff_invert` reports
/// a `NotInvertible` failure when the assertion is violated.
#[derive(Debug)]
pub struct CurveChart {
    vars: Arc<Vars>,
    p: MultiPoly,
    x: VarId,
    y: VarId,
    deg_y: usize,
    /// p as a dense vector of K(x) coefficients by y-power; last entry is 1.
    p_coeffs: Vec<MRat>,
    pub genus: u32,
    pub simple_jacobian: bool,
}

impl PartialEq for CurveChart {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.x == other.x && self.y == other.y
    }
}

impl CurveChart {
    pub fn new(
        p: MultiPoly,
        genus: u32,
        simple_jacobian: bool,
    ) -> Result<Arc<CurveChart>> {
        let vars = p.vars().clone();
        let x = vars.lookup("x").ok_or_else(|| Error::invalid("no variable `x` in session"))?;
        let y = vars.lookup("y").ok_or_else(|| Error::invalid("no variable `y` in session"))?;
        CurveChart::with_vars(p, (x, y), genus, simple_jacobian)
    }

    /// Chart in explicitly named coordinates, e.g. (u, v) for a chart at
    /// infinity.
    pub fn with_vars(
        p: MultiPoly,
        xy: (VarId, VarId),
        genus: u32,
        simple_jacobian: bool,
    ) -> Result<Arc<CurveChart>> {
        let vars = p.vars().clone();
        let (x, y) = xy;
        if p.is_zero() {
            return Err(Error::invalid("curve polynomial is zero"));
        }
        for v in p.geom_vars_used() {
            if v != x && v != y {
                return Err(Error::invalid(format!(
                    "curve polynomial uses variable `{}` other than the chart coordinates",
                    vars.name(v)
                )));
            }
        }
        let deg_y = p.degree_in(y) as usize;
        if deg_y < 1 {
            return Err(Error::invalid("curve polynomial must have y-degree at least 1"));
        }
        let mut p_coeffs = Vec::with_capacity(deg_y + 1);
        for j in 0..=deg_y {
            p_coeffs.push(multipoly_xcoeff(&p.coeff_of(y, j as u16), x)?);
        }
        let lead = &p_coeffs[deg_y];
        if !lead.is_one() {
            return Err(Error::invalid(
                "curve polynomial must be monic in y; rescale the model first",
            ));
        }
        Ok(Arc::new(CurveChart {
            vars,
            p,
            x,
            y,
            deg_y,
            p_coeffs,
            genus,
            simple_jacobian,
        }))
    }

    /// The affine line presented as the vanishing of y.
    pub fn line(vars: Arc<Vars>) -> Arc<CurveChart> {
        let y = vars.lookup("y").expect("no variable `y` in session");
        let p = MultiPoly::var(vars, y);
        CurveChart::new(p, 0, false).unwrap()
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn x_var(&self) -> VarId {
        self.x
    }

    pub fn y_var(&self) -> VarId {
        self.y
    }

    pub fn deg_y(&self) -> usize {
        self.deg_y
    }

    pub fn p_coeffs(&self) -> &[MRat] {
        &self.p_coeffs
    }
}

/// Express a MultiPoly in x alone as a rational function in the scalar tower.
fn multipoly_xcoeff(p: &MultiPoly, x: VarId) -> Result<MRat> {
    let mut acc = MRat::zero();
    for (e, c) in p.terms() {
        for (v, &k) in e.iter().enumerate() {
            if k > 0 && v != x {
                return Err(Error::invalid("expected a polynomial in x only"));
            }
        }
        let k = e.get(x).copied().unwrap_or(0);
        let mono = MRat::from_poly(MPoly::var_pow(x, k));
        acc = acc.add(&c.value().mul(&mono));
    }
    Ok(acc)
}

/// Element of the function field K(C), stored as the unique y-reduced
/// representative: a vector of K(x) coefficients by y-power, of length
/// deg_y(p).
#[derive(Clone, Debug)]
pub struct FFElement {
    chart: Arc<CurveChart>,
    rep: Vec<MRat>,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.rep == other.rep
    }
}

impl FFElement {
    pub fn zero(chart: Arc<CurveChart>) -> FFElement {
        let rep = vec![MRat::zero(); chart.deg_y];
        FFElement { chart, rep }
    }

    pub fn one(chart: Arc<CurveChart>) -> FFElement {
        FFElement::from_mrat(chart, MRat::one())
    }

    /// An element of K(x) (no y part).
    pub fn from_mrat(chart: Arc<CurveChart>, value: MRat) -> FFElement {
        let mut rep = vec![MRat::zero(); chart.deg_y];
        rep[0] = value;
        FFElement { chart, rep }
    }

    pub fn from_base(chart: Arc<CurveChart>, value: &BaseFunction) -> FFElement {
        FFElement::from_mrat(chart, value.value().clone())
    }

    pub fn var_x(chart: Arc<CurveChart>) -> FFElement {
        let x = chart.x;
        FFElement::from_mrat(chart, MRat::var(x))
    }

    pub fn var_y(chart: Arc<CurveChart>) -> FFElement {
        let mut rep = vec![MRat::zero(); chart.deg_y];
        if chart.deg_y == 1 {
            // y reduces to -p_0 on the curve
            rep[0] = chart.p_coeffs[0].neg();
        } else {
            rep[1] = MRat::one();
        }
        FFElement { chart, rep }
    }

    pub fn from_coeffs(chart: Arc<CurveChart>, mut rep: Vec<MRat>) -> FFElement {
        assert!(rep.len() <= chart.deg_y || rep[chart.deg_y..].iter().all(|c| c.is_zero()));
        rep.resize(chart.deg_y, MRat::zero());
        FFElement { chart, rep }
    }

    pub fn chart(&self) -> &Arc<CurveChart> {
        &self.chart
    }

    pub fn rep(&self) -> &[MRat] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.rep[0].is_one() && self.rep[1..].iter().all(|c| c.is_zero())
    }

    /// Whether the element lies in K (free of both x and y).
    pub fn is_in_base(&self) -> bool {
        self.rep[1..].iter().all(|c| c.is_zero()) && !self.rep[0].uses_var(self.chart.x)
    }

    pub fn add(&self, other: &FFElement) -> FFElement {
        debug_assert_eq!(self.chart, other.chart);
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| a.add(b))
            .collect();
        FFElement { chart: self.chart.clone(), rep }
    }

    pub fn sub(&self, other: &FFElement) -> FFElement {
        debug_assert_eq!(self.chart, other.chart);
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| a.sub(b))
            .collect();
        FFElement { chart: self.chart.clone(), rep }
    }

    pub fn neg(&self) -> FFElement {
        FFElement {
            chart: self.chart.clone(),
            rep: self.rep.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &FFElement) -> FFElement {
        debug_assert_eq!(self.chart, other.chart);
        let n = self.chart.deg_y;
        let mut prod = vec![MRat::zero(); 2 * n.max(1)];
        for (i, a) in self.rep.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rep.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        reduce_coeffs(&self.chart, &mut prod);
        FFElement::from_coeffs(self.chart.clone(), prod)
    }

    pub fn scale(&self, c: &MRat) -> FFElement {
        FFElement {
            chart: self.chart.clone(),
            rep: self.rep.iter().map(|r| r.mul(c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> FFElement {
        let mut out = FFElement::one(self.chart.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at a point with BaseFunction coordinates. Errors with
    /// `EvaluationPole` when a coefficient denominator vanishes there.
    pub fn eval(&self, ax: &BaseFunction, ay: &BaseFunction) -> Result<BaseFunction> {
        let assignments = [(self.chart.x, ax.value().clone()), (self.chart.y, ay.value().clone())];
        let mut acc = MRat::zero();
        for (j, c) in self.rep.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c
                .subst_all(&assignments[..1])
                .ok_or(Error::EvaluationPole)?;
            let ypow = ay.value().pow(j as i32).ok_or(Error::EvaluationPole)?;
            acc = acc.add(&v.mul(&ypow));
        }
        Ok(BaseFunction::new(ax.vars().clone(), acc))
    }

    pub fn to_string(&self) -> String {
        let vars = &self.chart.vars;
        let y = self.chart.y;
        // assemble over a common denominator for a single readable fraction
        let mut den = MPoly::one();
        for c in &self.rep {
            let g = crate::mpoly::gcd(&den, c.den());
            den = den.mul(&c.den().exact_div(&g).unwrap());
        }
        let mut num = MPoly::zero();
        for (j, c) in self.rep.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let extra = den.exact_div(c.den()).unwrap();
            num = num.add(&c.num().mul(&extra).mul(&MPoly::var_pow(y, j as u16)));
        }
        MRat::new(num, den).to_string(vars)
    }
}

/// Reduce a dense y-coefficient vector modulo the curve polynomial.
fn reduce_coeffs(chart: &CurveChart, rep: &mut Vec<MRat>) {
    let n = chart.deg_y;
    while rep.len() > n {
        let d = rep.len() - 1;
        let top = rep.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        // y^d = y^(d-n) * (y^n) = y^(d-n) * (-(p_0 + ... + p_{n-1} y^{n-1}))
        for j in 0..n {
            let delta = top.mul(&chart.p_coeffs[j]);
            rep[d - n + j] = rep[d - n + j].sub(&delta);
        }
    }
    rep.resize(n, MRat::zero());
}

/// Reduce a polynomial in (x, y) to its y-reduced function-field form.
pub fn reduce_mod_curve(q: &MultiPoly, chart: &Arc<CurveChart>) -> Result<FFElement> {
    for v in q.geom_vars_used() {
        if v != chart.x && v != chart.y {
            return Err(Error::invalid(format!(
                "polynomial uses variable `{}` not on the chart",
                chart.vars.name(v)
            )));
        }
    }
    let dy = q.degree_in(chart.y) as usize;
    let mut rep = Vec::with_capacity(dy + 1);
    for j in 0..=dy {
        rep.push(multipoly_xcoeff(&q.coeff_of(chart.y, j as u16), chart.x)?);
    }
    reduce_coeffs(chart, &mut rep);
    Ok(FFElement::from_coeffs(chart.clone(), rep))
}

/// Multiplicative inverse in K(C). `p` irreducible is a user assertion; a
/// nontrivial gcd is surfaced as `NotInvertible` rather than ignored.
pub fn ff_invert(f: &FFElement) -> Result<FFElement> {
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    let chart = f.chart.clone();
    if f.rep[1..].iter().all(|c| c.is_zero()) {
        let inv = f.rep[0].inv().expect("nonzero");
        return Ok(FFElement::from_mrat(chart, inv));
    }
    // extended Euclid in K(x)[y] for p and f
    let p_vec: Vec<MRat> = chart.p_coeffs.clone();
    let f_vec: Vec<MRat> = f.rep.clone();
    let (g, _, r) = ext_gcd_univar(&p_vec, &f_vec);
    let gdeg = poly_deg(&g);
    match gdeg {
        None => unreachable!("gcd of nonzero polynomials is nonzero"),
        Some(0) => {
            let scale = g[0].inv().expect("nonzero gcd");
            let mut rep: Vec<MRat> = r.iter().map(|c| c.mul(&scale)).collect();
            reduce_coeffs(&chart, &mut rep);
            Ok(FFElement::from_coeffs(chart, rep))
        }
        Some(d) => Err(Error::NotInvertible(d)),
    }
}

fn poly_deg(p: &[MRat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_sub(a: &[MRat], b: &[MRat]) -> Vec<MRat> {
    let n = a.len().max(b.len());
    let zero = MRat::zero();
    (0..n)
        .map(|i| {
            a.get(i).unwrap_or(&zero).sub(b.get(i).unwrap_or(&zero))
        })
        .collect()
}

fn poly_mul(a: &[MRat], b: &[MRat]) -> Vec<MRat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![MRat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Division with remainder in K(x)[y]; returns (quotient, remainder).
fn poly_divrem(a: &[MRat], b: &[MRat]) -> (Vec<MRat>, Vec<MRat>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lb = b[db].clone();
    let mut rem: Vec<MRat> = a.to_vec();
    let mut quo = vec![MRat::zero(); a.len()];
    loop {
        match poly_deg(&rem) {
            Some(dr) if dr >= db => {
                let c = rem[dr].div(&lb).expect("nonzero leading coefficient");
                quo[dr - db] = quo[dr - db].add(&c);
                for j in 0..=db {
                    let delta = c.mul(&b[j]);
                    rem[dr - db + j] = rem[dr - db + j].sub(&delta);
                }
            }
            _ => break,
        }
    }
    (quo, rem)
}

/// Extended gcd: returns (g, s, r) with s*a + r*b = g.
fn ext_gcd_univar(a: &[MRat], b: &[MRat]) -> (Vec<MRat>, Vec<MRat>, Vec<MRat>) {
    let mut r0: Vec<MRat> = a.to_vec();
    let mut r1: Vec<MRat> = b.to_vec();
    let mut s0 = vec![MRat::one()];
    let mut s1 = vec![MRat::zero()];
    let mut t0 = vec![MRat::zero()];
    let mut t1 = vec![MRat::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divrem(&r0, &r1);
        let new_s = poly_sub(&s0, &poly_mul(&q, &s1));
        let new_t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, new_s);
        t0 = std::mem::replace(&mut t1, new_t);
    }
    (r0, s0, t0)
}

/// Total derivative d/dx along the curve: f_x + f_y * (-p_x/p_y).
pub fn total_x_derivative(f: &FFElement) -> FFElement {
    let chart = f.chart.clone();
    let x = chart.x;
    let fx = FFElement {
        chart: chart.clone(),
        rep: f.rep.iter().map(|c| c.derivative(x)).collect(),
    };
    let mut fy_rep = vec![MRat::zero(); chart.deg_y];
    for j in 1..chart.deg_y {
        fy_rep[j - 1] = f.rep[j].mul(&MRat::from_int(j as i64));
    }
    let fy = FFElement { chart: chart.clone(), rep: fy_rep };
    if fy.is_zero() {
        return fx;
    }
    fx.add(&fy.mul(&y_slope(&chart)))
}

/// dy/dx on the curve: -p_x / p_y.
pub fn y_slope(chart: &Arc<CurveChart>) -> FFElement {
    let px = partial_p(chart, true);
    let py = partial_p(chart, false);
    let py_inv = ff_invert(&py).expect("p_y is nonzero for a monic curve in characteristic zero");
    px.neg().mul(&py_inv)
}

/// p_x or p_y as elements of K(C).
pub fn partial_p(chart: &Arc<CurveChart>, with_respect_to_x: bool) -> FFElement {
    let x = chart.x;
    let mut rep: Vec<MRat> = Vec::new();
    if with_respect_to_x {
        for j in 0..=chart.deg_y {
            rep.push(chart.p_coeffs[j].derivative(x));
        }
    } else {
        for j in 1..=chart.deg_y {
            rep.push(chart.p_coeffs[j].mul(&MRat::from_int(j as i64)));
        }
    }
    reduce_coeffs(chart, &mut rep);
    FFElement::from_coeffs(chart.clone(), rep)
}

/// The coefficientwise delta-derivative p^delta of the curve polynomial.
pub fn p_delta(chart: &Arc<CurveChart>) -> FFElement {
    let t = chart.vars.t();
    let mut rep: Vec<MRat> = chart
        .p_coeffs
        .iter()
        .map(|c| c.derivative(t))
        .collect();
    reduce_coeffs(chart, &mut rep);
    FFElement::from_coeffs(chart.clone(), rep)
}

/// Coefficientwise delta on the y-reduced representative; this is the
/// partial f^delta, not the total derivation on K(C).
pub fn delta_coeff(f: &FFElement) -> FFElement {
    let t = f.chart.vars.t();
    FFElement {
        chart: f.chart.clone(),
        rep: f.rep.iter().map(|c| c.derivative(t)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_chart() -> Arc<CurveChart> {
        // p = y^2 - x^3 - t
        let vars = Vars::for_curve(&["e"]);
        let x = MultiPoly::var(vars.clone(), vars.lookup("x").unwrap());
        let y = MultiPoly::var(vars.clone(), vars.lookup("y").unwrap());
        let t = MultiPoly::constant(BaseFunction::t(vars.clone()));
        let p = y.mul(&y).sub(&x.pow(3)).sub(&t);
        CurveChart::new(p, 1, false).unwrap()
    }

    #[test]
    fn reduce_direct_substitution() {
        let chart = cubic_chart();
        let vars = chart.vars().clone();
        let y = MultiPoly::var(vars.clone(), chart.y_var());
        let x = MultiPoly::var(vars.clone(), chart.x_var());
        // y^2 -> x^3 + t
        let r = reduce_mod_curve(&y.mul(&y), &chart).unwrap();
        let t = MultiPoly::constant(BaseFunction::t(vars.clone()));
        let expect = reduce_mod_curve(&x.pow(3).add(&t), &chart).unwrap();
        assert_eq!(r, expect);
        // y^3 -> (x^3 + t) y
        let r3 = reduce_mod_curve(&y.pow(3), &chart).unwrap();
        let expect3 = expect.mul(&FFElement::var_y(chart.clone()));
        assert_eq!(r3, expect3);
        // multiply back: expect3 should equal y^2 * y
        let y_ff = FFElement::var_y(chart.clone());
        assert_eq!(y_ff.pow(3), r3);
        // x^5 unchanged
        let x5 = reduce_mod_curve(&x.pow(5), &chart).unwrap();
        assert_eq!(x5, FFElement::var_x(chart.clone()).pow(5));
    }

    #[test]
    fn invert_y() {
        let chart = cubic_chart();
        let y = FFElement::var_y(chart.clone());
        let inv = ff_invert(&y).unwrap();
        assert!(y.mul(&inv).is_one());
        // 1/y = y/(x^3+t)
        let x = FFElement::var_x(chart.clone());
        let t = FFElement::from_base(chart.clone(), &BaseFunction::t(chart.vars().clone()));
        let denom = x.pow(3).add(&t);
        assert_eq!(inv.mul(&denom), y);
        // 1 -> 1, x -> 1/x
        assert!(ff_invert(&FFElement::one(chart.clone())).unwrap().is_one());
        let xinv = ff_invert(&x).unwrap();
        assert!(x.mul(&xinv).is_one());
        assert_eq!(
            ff_invert(&FFElement::zero(chart.clone())).unwrap_err(),
            Error::ZeroElement
        );
    }

    #[test]
    fn not_invertible_on_reducible_curve() {
        // p = y^2 - x^2 factors as (y-x)(y+x)
        let vars = Vars::for_curve(&[]);
        let x = MultiPoly::var(vars.clone(), vars.lookup("x").unwrap());
        let y = MultiPoly::var(vars.clone(), vars.lookup("y").unwrap());
        let p = y.mul(&y).sub(&x.mul(&x));
        let chart = CurveChart::new(p, 0, false).unwrap();
        let f = reduce_mod_curve(&y.sub(&x), &chart).unwrap();
        assert!(matches!(ff_invert(&f), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn total_derivative_examples() {
        let chart = cubic_chart();
        // d/dx x = 1
        let x = FFElement::var_x(chart.clone());
        assert!(total_x_derivative(&x).is_one());
        // d/dx y = 3x^2/(2y)
        let y = FFElement::var_y(chart.clone());
        let dy = total_x_derivative(&y);
        let expect = x
            .pow(2)
            .scale(&MRat::from_int(3))
            .mul(&ff_invert(&y.scale(&MRat::from_int(2))).unwrap());
        assert_eq!(dy, expect);
        // d/dx of a constant
        let e = FFElement::from_base(
            chart.clone(),
            &BaseFunction::constant_symbol(chart.vars().clone(), "e").unwrap(),
        );
        assert!(total_x_derivative(&e).is_zero());
        // d/dx annihilates the curve relation: d/dx(y^2 - x^3 - t) = 0
        let t = FFElement::from_base(chart.clone(), &BaseFunction::t(chart.vars().clone()));
        let rel = y.pow(2).sub(&x.pow(3)).sub(&t);
        assert!(rel.is_zero());
        let combo = total_x_derivative(&y.pow(2)).sub(&total_x_derivative(&x.pow(3)));
        assert!(combo.is_zero());
    }

    #[test]
    fn delta_examples() {
        let chart = cubic_chart();
        let vars = chart.vars().clone();
        let x = FFElement::var_x(chart.clone());
        let t = BaseFunction::t(vars.clone());
        // delta(t x) = x
        let tx = x.scale(t.value());
        assert_eq!(delta_coeff(&tx), x);
        // delta(x^2) = 0
        assert!(delta_coeff(&x.pow(2)).is_zero());
    }

    #[test]
    fn delta_of_example_coefficient() {
        // f = (x+1+e*x)/(2tx(x+1)) has delta = -(x+1+e*x)/(2t^2 x(x+1))
        let chart = cubic_chart();
        let vars = chart.vars().clone();
        let x = FFElement::var_x(chart.clone());
        let e = FFElement::from_base(
            chart.clone(),
            &BaseFunction::constant_symbol(vars.clone(), "e").unwrap(),
        );
        let one = FFElement::one(chart.clone());
        let t = FFElement::from_base(chart.clone(), &BaseFunction::t(vars.clone()));
        let num = x.add(&one).add(&e.mul(&x));
        let den = t.scale(&MRat::from_int(2)).mul(&x).mul(&x.add(&one));
        let f = num.mul(&ff_invert(&den).unwrap());
        let expect = f
            .mul(&ff_invert(&t).unwrap())
            .neg();
        assert_eq!(delta_coeff(&f), expect);
        // Leibniz cross-check: delta(2t * f) = 2f + 2t delta(f)
        let two_t = t.scale(&MRat::from_int(2));
        let lhs = delta_coeff(&two_t.mul(&f));
        let rhs = f.scale(&MRat::from_int(2)).add(&two_t.mul(&delta_coeff(&f)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_and_total_commute_on_delta_constant_curve() {
        // The two derivations act in independent directions exactly when
        // p^delta = 0; use a t-free model of the cubic.
        let vars = Vars::for_curve(&[]);
        let x2 = MultiPoly::var(vars.clone(), vars.lookup("x").unwrap());
        let y2 = MultiPoly::var(vars.clone(), vars.lookup("y").unwrap());
        let p2 = y2.mul(&y2).sub(&x2.pow(3)).sub(&MultiPoly::one(vars.clone()));
        let chart = CurveChart::new(p2, 1, false).unwrap();
        let x = FFElement::var_x(chart.clone());
        let y = FFElement::var_y(chart.clone());
        let t = FFElement::from_base(chart.clone(), &BaseFunction::t(vars.clone()));
        let g = x.pow(2).mul(&t).add(&y.mul(&x).mul(&t).mul(&t));
        let a = delta_coeff(&total_x_derivative(&g));
        let b = total_x_derivative(&delta_coeff(&g));
        assert_eq!(a, b);
    }
}
