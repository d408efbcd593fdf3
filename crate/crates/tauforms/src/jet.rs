//! First jet spaces of affine presentations.
//!
//! Prolongation adjoins a dotted twin for each variable and the generators
//! delta(f_i), expanded by the Leibniz rules with delta(x_j) = xdot_j and
//! delta on coefficients the base derivation. `exp1` sends a parametrized
//! point to the pair (coordinates, coordinate derivatives); sharp-set
//! membership of a witness against a form is vanishing of the pairing
//! against exp1.

use std::sync::Arc;

use crate::basefield::{bf_derive, BaseFunction};
use crate::error::{Error, Result};
use crate::geompoly::{CurveChart, MultiPoly};
use crate::tauform::{pair, JetPoint, TauForm};
use crate::vars::{VarId, Vars};

/// An affine presentation Spec K[x_1,...,x_n]/(f_1,...,f_e).
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePresentation {
    vars: Arc<Vars>,
    variables: Vec<VarId>,
    generators: Vec<MultiPoly>,
}

impl AffinePresentation {
    pub fn new(vars: Arc<Vars>, variables: Vec<VarId>, generators: Vec<MultiPoly>) -> Result<AffinePresentation> {
        for g in &generators {
            if g.is_zero() {
                return Err(Error::invalid("presentation generator is zero"));
            }
            for v in g.geom_vars_used() {
                if !variables.contains(&v) {
                    return Err(Error::invalid(format!(
                        "generator uses variable `{}` not listed in the presentation",
                        vars.name(v)
                    )));
                }
            }
        }
        Ok(AffinePresentation { vars, variables, generators })
    }

    /// The presentation of a curve chart: variables (x, y), generator p.
    pub fn from_chart(chart: &Arc<CurveChart>) -> AffinePresentation {
        AffinePresentation {
            vars: chart.vars().clone(),
            variables: vec![chart.x_var(), chart.y_var()],
            generators: vec![chart.p().clone()],
        }
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn variables(&self) -> &[VarId] {
        &self.variables
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }
}

/// A prolonged presentation: base generators plus their deltas in the
/// dotted variables.
#[derive(Clone, Debug)]
pub struct JetPresentation {
    base: AffinePresentation,
    /// extended table containing the dotted variables
    vars: Arc<Vars>,
    dotted: Vec<VarId>,
    prolonged: Vec<MultiPoly>,
}

impl JetPresentation {
    pub fn base(&self) -> &AffinePresentation {
        &self.base
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn dotted(&self) -> &[VarId] {
        &self.dotted
    }

    /// The added generators delta(f_1), ..., delta(f_e).
    pub fn prolonged_generators(&self) -> &[MultiPoly] {
        &self.prolonged
    }

    /// All 2e generators of the jet presentation.
    pub fn all_generators(&self) -> Vec<MultiPoly> {
        let mut out = self.base.generators.to_vec();
        out.extend(self.prolonged.iter().cloned());
        out
    }
}

/// Compute the first prolongation of a presentation.
pub fn prolong(pres: &AffinePresentation) -> JetPresentation {
    let mut vars = pres.vars.clone();
    let mut dotted = Vec::with_capacity(pres.variables.len());
    for &v in &pres.variables {
        let dot_name = format!("{}dot", vars.name(v));
        let id = match vars.lookup(&dot_name) {
            Some(id) => id,
            None => {
                vars = vars.extended(&[dot_name.as_str()]);
                vars.lookup(&dot_name).unwrap()
            }
        };
        dotted.push(id);
    }
    let prolonged = pres
        .generators
        .iter()
        .map(|f| {
            let mut df = f.delta();
            for (&v, &vd) in pres.variables.iter().zip(&dotted) {
                let partial = f.derivative(v);
                if !partial.is_zero() {
                    df = df.add(&partial.mul(&MultiPoly::var(vars.clone(), vd)));
                }
            }
            df
        })
        .collect();
    JetPresentation { base: pres.clone(), vars, dotted, prolonged }
}

/// A parametrized point: one BaseFunction coordinate per presentation
/// variable. Membership in the presentation is checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint {
    pres: Arc<AffinePresentation>,
    coords: Vec<BaseFunction>,
}

impl ParamPoint {
    pub fn new(pres: Arc<AffinePresentation>, coords: Vec<BaseFunction>) -> Result<ParamPoint> {
        if coords.len() != pres.variables.len() {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                pres.variables.len(),
                coords.len()
            )));
        }
        let assignments: Vec<(VarId, BaseFunction)> = pres
            .variables
            .iter()
            .copied()
            .zip(coords.iter().cloned())
            .collect();
        for g in &pres.generators {
            if !g.eval(&assignments)?.is_zero() {
                return Err(Error::PointNotOnCurve);
            }
        }
        Ok(ParamPoint { pres, coords })
    }

    /// A point on a curve chart.
    pub fn on_chart(chart: &Arc<CurveChart>, ax: BaseFunction, ay: BaseFunction) -> Result<ParamPoint> {
        ParamPoint::new(Arc::new(AffinePresentation::from_chart(chart)), vec![ax, ay])
    }

    pub fn presentation(&self) -> &Arc<AffinePresentation> {
        &self.pres
    }

    pub fn coords(&self) -> &[BaseFunction] {
        &self.coords
    }
}

/// The section exp1: coordinates together with their t-derivatives. The
/// image satisfies every prolonged generator (delta of a vanishing identity
/// vanishes); this is asserted as a runtime check.
pub fn exp1_eval(point: &ParamPoint) -> (Vec<BaseFunction>, Vec<BaseFunction>) {
    let derivs: Vec<BaseFunction> = point.coords.iter().map(bf_derive).collect();
    let jet = prolong(&point.pres);
    let mut assignments: Vec<(VarId, BaseFunction)> = point
        .pres
        .variables
        .iter()
        .copied()
        .zip(point.coords.iter().cloned())
        .collect();
    assignments.extend(jet.dotted.iter().copied().zip(derivs.iter().cloned()));
    for g in &jet.prolonged {
        let v = g.eval(&assignments).expect("polynomial evaluation");
        assert!(v.is_zero(), "exp1 image violates a prolonged generator");
    }
    (point.coords.clone(), derivs)
}

/// Membership of a witness in the sharp set (C, omega)#: the pairing of the
/// canonical form against exp1 of the point vanishes.
pub fn sharp_membership(point: &ParamPoint, chart: &Arc<CurveChart>, omega: &TauForm) -> Result<bool> {
    if !omega.is_canonical() {
        return Err(Error::FormNotCanonical);
    }
    if point.coords.len() != 2 {
        return Err(Error::invalid("sharp membership needs a plane-curve point"));
    }
    // ensure the point lies on this chart's curve
    let assignments = [
        (chart.x_var(), point.coords[0].clone()),
        (chart.y_var(), point.coords[1].clone()),
    ];
    if !chart.p().eval(&assignments)?.is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let (coords, derivs) = exp1_eval(point);
    let jp = JetPoint {
        ax: coords[0].clone(),
        ay: coords[1].clone(),
        vx: derivs[0].clone(),
        vy: derivs[1].clone(),
    };
    Ok(pair(omega, &jp)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geompoly::FFElement;

    fn mk(vars: &Arc<Vars>, name: &str) -> MultiPoly {
        MultiPoly::var(vars.clone(), vars.lookup(name).unwrap())
    }

    #[test]
    fn prolong_cubic() {
        // {y^2 - x^3 - t} -> adds 2 y ydot - 3 x^2 xdot - 1
        let vars = Vars::for_curve(&[]);
        let x = mk(&vars, "x");
        let y = mk(&vars, "y");
        let t = MultiPoly::constant(BaseFunction::t(vars.clone()));
        let p = y.pow(2).sub(&x.pow(3)).sub(&t);
        let pres = AffinePresentation::new(
            vars.clone(),
            vec![vars.lookup("x").unwrap(), vars.lookup("y").unwrap()],
            vec![p],
        )
        .unwrap();
        let jet = prolong(&pres);
        assert_eq!(jet.prolonged_generators().len(), 1);
        let xdot = mk(&vars, "xdot");
        let ydot = mk(&vars, "ydot");
        let two = BaseFunction::from_int(vars.clone(), 2);
        let three = BaseFunction::from_int(vars.clone(), 3);
        let expect = y
            .mul(&ydot)
            .scale(&two)
            .sub(&x.pow(2).mul(&xdot).scale(&three))
            .sub(&MultiPoly::one(vars.clone()));
        assert_eq!(jet.prolonged_generators()[0], expect);
        assert_eq!(jet.all_generators().len(), 2);
    }

    #[test]
    fn prolong_constant_symbol_and_product() {
        let vars = Vars::new(&["c"], &["x"]);
        let x = mk(&vars, "x");
        let c = MultiPoly::constant(BaseFunction::constant_symbol(vars.clone(), "c").unwrap());
        // {x - c} -> adds xdot
        let pres = AffinePresentation::new(
            vars.clone(),
            vec![vars.lookup("x").unwrap()],
            vec![x.sub(&c)],
        )
        .unwrap();
        let jet = prolong(&pres);
        let xdot = MultiPoly::var(jet.vars().clone(), jet.vars().lookup("xdot").unwrap());
        assert_eq!(jet.prolonged_generators()[0], xdot);
        // {t x} -> adds x + t xdot
        let t = MultiPoly::constant(BaseFunction::t(vars.clone()));
        let pres2 = AffinePresentation::new(
            vars.clone(),
            vec![vars.lookup("x").unwrap()],
            vec![t.mul(&x)],
        )
        .unwrap();
        let jet2 = prolong(&pres2);
        let expect = x.add(&t.mul(&xdot));
        assert_eq!(jet2.prolonged_generators()[0], expect);
    }

    #[test]
    fn exp1_examples() {
        let vars = Vars::for_curve(&[]);
        // line: a = t + 5 -> ((t+5), (1))
        let line = CurveChart::line(vars.clone());
        let t = BaseFunction::t(vars.clone());
        let a = t.add(&BaseFunction::from_int(vars.clone(), 5));
        let pt = ParamPoint::on_chart(&line, a.clone(), BaseFunction::zero(vars.clone())).unwrap();
        let (coords, derivs) = exp1_eval(&pt);
        assert_eq!(coords[0], a);
        assert!(derivs[0].is_one());
        // graph curve p = y - x^2 with a = (t, t^2) -> ((t,t^2),(1,2t))
        let x = mk(&vars, "x");
        let y = mk(&vars, "y");
        let chart = CurveChart::new(y.sub(&x.pow(2)), 0, false).unwrap();
        let pt2 = ParamPoint::on_chart(&chart, t.clone(), t.mul(&t)).unwrap();
        let (_, derivs2) = exp1_eval(&pt2);
        assert!(derivs2[0].is_one());
        assert_eq!(derivs2[1], t.scale_int(2));
        // constant point a = (3) on the line -> ((3),(0))
        let pt3 = ParamPoint::on_chart(
            &line,
            BaseFunction::from_int(vars.clone(), 3),
            BaseFunction::zero(vars.clone()),
        )
        .unwrap();
        let (_, derivs3) = exp1_eval(&pt3);
        assert!(derivs3[0].is_zero());
    }

    #[test]
    fn point_membership_checked() {
        let vars = Vars::for_curve(&[]);
        let x = mk(&vars, "x");
        let y = mk(&vars, "y");
        let chart = CurveChart::new(y.sub(&x.pow(2)), 0, false).unwrap();
        let t = BaseFunction::t(vars.clone());
        // (t, t^3) is not on y = x^2
        assert_eq!(
            ParamPoint::on_chart(&chart, t.clone(), t.pow(3).unwrap()).unwrap_err(),
            Error::PointNotOnCurve
        );
    }

    #[test]
    fn sharp_membership_line_examples() {
        let vars = Vars::for_curve(&[]);
        let line = CurveChart::line(vars.clone());
        let t = BaseFunction::t(vars.clone());
        let zero = BaseFunction::zero(vars.clone());
        // omega = dtx - 1
        let omega = TauForm::new(
            FFElement::from_base(line.clone(), &BaseFunction::from_int(vars.clone(), -1)),
            FFElement::one(line.clone()),
            FFElement::zero(line.clone()),
        );
        let member = ParamPoint::on_chart(&line, t.add(&BaseFunction::from_int(vars.clone(), 5)), zero.clone()).unwrap();
        assert!(sharp_membership(&member, &line, &omega).unwrap());
        let non = ParamPoint::on_chart(&line, t.mul(&t), zero.clone()).unwrap();
        assert!(!sharp_membership(&non, &line, &omega).unwrap());
        // omega2 = dtx + 2t - 1 (pullback of dtx - 1 under x + t^2), a = t - t^2
        let omega2 = TauForm::new(
            FFElement::from_base(
                line.clone(),
                &t.scale_int(2).sub(&BaseFunction::one(vars.clone())),
            ),
            FFElement::one(line.clone()),
            FFElement::zero(line.clone()),
        );
        let a = t.sub(&t.mul(&t));
        let w = ParamPoint::on_chart(&line, a.clone(), zero.clone()).unwrap();
        assert!(sharp_membership(&w, &line, &omega2).unwrap());
        // image g(a) = t satisfies dtx - 1
        let ga = a.add(&t.mul(&t));
        let wim = ParamPoint::on_chart(&line, ga, zero.clone()).unwrap();
        assert!(sharp_membership(&wim, &line, &omega).unwrap());
    }

    #[test]
    fn non_canonical_form_rejected() {
        let vars = Vars::for_curve(&[]);
        let line = CurveChart::line(vars.clone());
        let omega = TauForm::dty(line.clone());
        let pt = ParamPoint::on_chart(
            &line,
            BaseFunction::t(vars.clone()),
            BaseFunction::zero(vars.clone()),
        )
        .unwrap();
        assert_eq!(
            sharp_membership(&pt, &line, &omega).unwrap_err(),
            Error::FormNotCanonical
        );
    }
}
