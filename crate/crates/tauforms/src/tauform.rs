//! Tau-forms on a curve chart: elements c0 + cx*dtx + cy*dty of the
//! extension of the Kahler differentials by the structure sheaf.
//!
//! The canonical representative eliminates dty through the curve relation
//! d^tau p = 0, i.e. p^delta + p_x dtx + p_y dty = 0 on the curve. Pairing
//! against jet points follows the vanishing convention: a point belongs to
//! the sharp set of a form exactly when the pairing value is zero, with the
//! inhomogeneity carried in the form's function part.

use std::sync::Arc;

use crate::basefield::BaseFunction;
use crate::error::{Error, Result};
use crate::geompoly::{
    delta_coeff, ff_invert, p_delta, partial_p, CurveChart, FFElement,
};
use crate::mrat::MRat;

#[derive(Clone, Debug, PartialEq)]
pub struct TauForm {
    chart: Arc<CurveChart>,
    c0: FFElement,
    cx: FFElement,
    cy: FFElement,
}

/// A jet point: curve-chart coordinates together with a velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    pub ax: BaseFunction,
    pub ay: BaseFunction,
    pub vx: BaseFunction,
    pub vy: BaseFunction,
}

impl TauForm {
    pub fn new(c0: FFElement, cx: FFElement, cy: FFElement) -> TauForm {
        let chart = c0.chart().clone();
        debug_assert!(*cx.chart() == chart && *cy.chart() == chart);
        TauForm { chart, c0, cx, cy }
    }

    /// The form dtx on a chart.
    pub fn dtx(chart: Arc<CurveChart>) -> TauForm {
        TauForm::new(
            FFElement::zero(chart.clone()),
            FFElement::one(chart.clone()),
            FFElement::zero(chart),
        )
    }

    /// The form dty on a chart.
    pub fn dty(chart: Arc<CurveChart>) -> TauForm {
        TauForm::new(
            FFElement::zero(chart.clone()),
            FFElement::zero(chart.clone()),
            FFElement::one(chart),
        )
    }

    /// The embedding of a function as a fiber-constant form.
    pub fn from_function(f: FFElement) -> TauForm {
        let chart = f.chart().clone();
        TauForm::new(f, FFElement::zero(chart.clone()), FFElement::zero(chart))
    }

    pub fn chart(&self) -> &Arc<CurveChart> {
        &self.chart
    }

    pub fn c0(&self) -> &FFElement {
        &self.c0
    }

    pub fn cx(&self) -> &FFElement {
        &self.cx
    }

    pub fn cy(&self) -> &FFElement {
        &self.cy
    }

    pub fn is_canonical(&self) -> bool {
        self.cy.is_zero()
    }

    pub fn add(&self, other: &TauForm) -> TauForm {
        TauForm::new(
            self.c0.add(&other.c0),
            self.cx.add(&other.cx),
            self.cy.add(&other.cy),
        )
    }

    pub fn scale(&self, f: &FFElement) -> TauForm {
        TauForm::new(self.c0.mul(f), self.cx.mul(f), self.cy.mul(f))
    }

    pub fn to_string(&self) -> String {
        let mut pieces: Vec<String> = Vec::new();
        for (c, sym) in [(&self.cx, Some("dtx")), (&self.cy, Some("dty")), (&self.c0, None)] {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            match sym {
                Some(sym) => {
                    if cs == "1" {
                        pieces.push(sym.to_string());
                    } else if cs == "-1" {
                        pieces.push(format!("-{sym}"));
                    } else if cs.contains('+') || cs.contains('/') || (cs.contains('-') && !cs.starts_with('-')) {
                        pieces.push(format!("({cs})*{sym}"));
                    } else {
                        pieces.push(format!("{cs}*{sym}"));
                    }
                }
                None => pieces.push(cs),
            }
        }
        if pieces.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                s.push_str(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(piece);
            }
        }
        s
    }
}

/// Eliminate the dty part through the curve relation. Idempotent, and the
/// pairing against points of the jet space is unchanged.
pub fn canonicalize(omega: &TauForm) -> TauForm {
    if omega.cy.is_zero() {
        return omega.clone();
    }
    let chart = omega.chart.clone();
    let py_inv = ff_invert(&partial_p(&chart, false)).expect("p_y nonzero");
    let px = partial_p(&chart, true);
    let pd = p_delta(&chart);
    // dty = -(p^delta + p_x dtx)/p_y
    let c0 = omega.c0.sub(&omega.cy.mul(&pd).mul(&py_inv));
    let cx = omega.cx.sub(&omega.cy.mul(&px).mul(&py_inv));
    TauForm::new(c0, cx, FFElement::zero(chart))
}

/// Fiberwise pairing: cx(a) v_x + cy(a) v_y + c0(a).
pub fn pair(omega: &TauForm, point: &JetPoint) -> Result<BaseFunction> {
    let c0 = omega.c0.eval(&point.ax, &point.ay)?;
    let cx = omega.cx.eval(&point.ax, &point.ay)?;
    let cy = omega.cy.eval(&point.ax, &point.ay)?;
    Ok(c0.add(&cx.mul(&point.vx)).add(&cy.mul(&point.vy)))
}

/// A rational map between curve charts given by component functions on the
/// source. The components satisfy the target's defining polynomial, checked
/// at construction.
#[derive(Clone, Debug)]
pub struct RationalMap {
    source: Arc<CurveChart>,
    target: Arc<CurveChart>,
    gx: FFElement,
    gy: FFElement,
}

impl RationalMap {
    pub fn new(
        source: Arc<CurveChart>,
        target: Arc<CurveChart>,
        gx: FFElement,
        gy: FFElement,
    ) -> Result<RationalMap> {
        debug_assert!(*gx.chart() == source && *gy.chart() == source);
        // evaluate the target polynomial at the components
        let mut acc = FFElement::zero(source.clone());
        for (e, c) in target.p().terms() {
            let i = e.get(target.x_var()).copied().unwrap_or(0);
            let j = e.get(target.y_var()).copied().unwrap_or(0);
            let term = FFElement::from_base(source.clone(), c)
                .mul(&gx.pow(i as u32))
                .mul(&gy.pow(j as u32));
            acc = acc.add(&term);
        }
        if !acc.is_zero() {
            return Err(Error::invalid(
                "map components do not satisfy the target curve polynomial",
            ));
        }
        Ok(RationalMap { source, target, gx, gy })
    }

    /// The identity map of a chart.
    pub fn identity(chart: Arc<CurveChart>) -> RationalMap {
        RationalMap {
            source: chart.clone(),
            target: chart.clone(),
            gx: FFElement::var_x(chart.clone()),
            gy: FFElement::var_y(chart),
        }
    }

    pub fn source(&self) -> &Arc<CurveChart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CurveChart> {
        &self.target
    }

    pub fn gx(&self) -> &FFElement {
        &self.gx
    }

    pub fn gy(&self) -> &FFElement {
        &self.gy
    }

    /// Composition g(h(.)): first `h`, then `self`.
    pub fn compose(&self, h: &RationalMap) -> Result<RationalMap> {
        if *h.target() != *self.source() {
            return Err(Error::invalid("maps are not composable"));
        }
        let gx = compose_element(&self.gx, &h.gx, &h.gy)?;
        let gy = compose_element(&self.gy, &h.gx, &h.gy)?;
        RationalMap::new(h.source.clone(), self.target.clone(), gx, gy)
    }

    /// Image of a parametrized point under the map.
    pub fn apply_point(&self, ax: &BaseFunction, ay: &BaseFunction) -> Result<(BaseFunction, BaseFunction)> {
        Ok((self.gx.eval(ax, ay)?, self.gy.eval(ax, ay)?))
    }
}

/// Substitute source elements for the chart coordinates of `c`, an element
/// on the chart whose coordinates (x', y') are being replaced by gx, gy.
fn compose_element(c: &FFElement, gx: &FFElement, gy: &FFElement) -> Result<FFElement> {
    let source = gx.chart().clone();
    let target_chart = c.chart().clone();
    let xv = target_chart.x_var();
    let mut acc = FFElement::zero(source.clone());
    let mut ypow = FFElement::one(source.clone());
    for coeff in c.rep() {
        if !coeff.is_zero() {
            let num = eval_xpoly(coeff.num(), xv, gx, &source)?;
            let den = eval_xpoly(coeff.den(), xv, gx, &source)?;
            let den_inv = ff_invert(&den).map_err(|_| Error::EvaluationPole)?;
            acc = acc.add(&num.mul(&den_inv).mul(&ypow));
        }
        ypow = ypow.mul(gy);
    }
    Ok(acc)
}

/// Evaluate a polynomial in x' (over K) at an FFElement, Horner style.
fn eval_xpoly(
    p: &crate::mpoly::MPoly,
    xv: crate::vars::VarId,
    gx: &FFElement,
    source: &Arc<CurveChart>,
) -> Result<FFElement> {
    let coeffs = p.as_univar(xv);
    let mut acc = FFElement::zero(source.clone());
    for c in coeffs.iter().rev() {
        acc = acc.mul(gx);
        acc = acc.add(&FFElement::from_mrat(source.clone(), MRat::from_poly(c.clone())));
    }
    Ok(acc)
}

/// d^tau of a function on the curve, as the non-canonical form
/// h^delta + h_x dtx + h_y dty computed on the y-reduced representative.
pub fn d_tau(h: &FFElement) -> TauForm {
    let chart = h.chart().clone();
    let x = chart.x_var();
    let hx = FFElement::from_coeffs(
        chart.clone(),
        h.rep().iter().map(|c| c.derivative(x)).collect(),
    );
    let mut hy_rep = vec![MRat::zero(); chart.deg_y()];
    for j in 1..chart.deg_y() {
        hy_rep[j - 1] = h.rep()[j].mul(&MRat::from_int(j as i64));
    }
    let hy = FFElement::from_coeffs(chart.clone(), hy_rep);
    TauForm::new(delta_coeff(h), hx, hy)
}

/// Pullback g^* omega': coefficientwise substitution plus the inhomogeneity
/// from d^tau of the components. Functorial on the nose: the pullback along
/// the identity is the identity.
pub fn pullback(g: &RationalMap, omega: &TauForm) -> Result<TauForm> {
    if *omega.chart() != *g.target() {
        return Err(Error::invalid("form does not live on the map's target"));
    }
    let source = g.source().clone();
    let c0 = compose_element(&omega.c0, &g.gx, &g.gy)?;
    let cx = compose_element(&omega.cx, &g.gx, &g.gy)?;
    let cy = compose_element(&omega.cy, &g.gx, &g.gy)?;
    let dgx = d_tau(&g.gx);
    let dgy = d_tau(&g.gy);
    let mut out = TauForm::from_function(c0);
    out = out.add(&dgx.scale(&cx));
    out = out.add(&dgy.scale(&cy));
    debug_assert!(*out.chart() == source);
    Ok(out)
}

/// Rational equivalence: eta2 = f * eta1 exactly for some f in K(C), with
/// both the dtx part and the function part scaling by the same f. Inputs
/// are canonicalized first; fiber-constant forms are rejected.
pub fn equiv(eta1: &TauForm, eta2: &TauForm) -> Result<Option<FFElement>> {
    let e1 = canonicalize(eta1);
    let e2 = canonicalize(eta2);
    if e1.cx.is_zero() || e2.cx.is_zero() {
        return Err(Error::FiberConstantForm);
    }
    let f = e2.cx.mul(&ff_invert(&e1.cx).expect("nonzero dtx part"));
    if e2.c0 == f.mul(&e1.c0) {
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

/// Scale to the canonical representative of the rational equivalence class:
/// dtx coefficient 1. Two forms are equivalent exactly when their class
/// representatives are equal.
pub fn class_canonical(omega: &TauForm) -> Result<TauForm> {
    let c = canonicalize(omega);
    if c.cx.is_zero() {
        return Err(Error::FiberConstantForm);
    }
    let inv = ff_invert(&c.cx).expect("nonzero dtx part");
    Ok(c.scale(&inv))
}

/// The derivation on the chart coordinates induced by a form: the unique
/// velocity making the pairing vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveDerivation {
    pub dx: FFElement,
    pub dy: FFElement,
}

/// From a form to its ODE data: delta_omega(x) = -c0/cx, and delta_omega(y)
/// from the canonicalized dty expression at that velocity.
pub fn ode_from_form(omega: &TauForm) -> Result<CurveDerivation> {
    let c = canonicalize(omega);
    if c.cx.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let chart = c.chart.clone();
    let dx = c.c0.neg().mul(&ff_invert(&c.cx).expect("nonzero"));
    // dty = -(p^delta + p_x dtx)/p_y evaluated at dtx = dx
    let py_inv = ff_invert(&partial_p(&chart, false)).expect("p_y nonzero");
    let dy = p_delta(&chart)
        .add(&partial_p(&chart, true).mul(&dx))
        .neg()
        .mul(&py_inv);
    Ok(CurveDerivation { dx, dy })
}

/// From derivation data to a form inducing it: dtx - iota(d(x)), after
/// checking the derivation is consistent with the curve relation
/// p^delta + p_x d(x) + p_y d(y) = 0.
pub fn form_from_derivation(d: &CurveDerivation, chart: &Arc<CurveChart>) -> Result<TauForm> {
    let check = p_delta(chart)
        .add(&partial_p(chart, true).mul(&d.dx))
        .add(&partial_p(chart, false).mul(&d.dy));
    if !check.is_zero() {
        return Err(Error::InconsistentDerivation);
    }
    Ok(TauForm::new(
        d.dx.neg(),
        FFElement::one(chart.clone()),
        FFElement::zero(chart.clone()),
    ))
}
