//! Coefficient-system construction: clear denominators of a criterion
//! identity, reduce in K(C), and extract (x,y,t)-monomial coefficients into
//! polynomial equations over Q(c_1,...,c_k) in the ansatz unknowns.
//!
//! The unknowns are adjoined to the session variable table as inert
//! symbols, so the whole identity is assembled with the ordinary
//! function-field arithmetic and stays exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::geompoly::{delta_coeff, total_x_derivative, CurveChart, FFElement, MultiPoly};
use crate::groebner::GPoly;
use crate::mpoly::{Exps, MPoly};
use crate::mrat::MRat;
use crate::vars::Vars;

use super::{AnsatzBounds, SearchCase, TrivialityVerdict, UniRational};
use crate::basefield::BaseFunction;

/// Discrete part of the ansatz: the power of t in f's denominator and the
/// degree of the monic denominator (of a, or of the univariate g in the pde
/// case).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenomShape {
    pub l: u16,
    pub den_deg: u16,
}

impl DenomShape {
    pub fn enumerate(case: SearchCase, bounds: &AnsatzBounds) -> Vec<DenomShape> {
        let den_max = match case {
            SearchCase::Additive | SearchCase::Multiplicative => bounds.deg_a_den,
            SearchCase::Pde => bounds.deg_g,
        };
        let mut out = Vec::new();
        for l in 0..=bounds.deg_t_den {
            for den_deg in 0..=den_max {
                out.push(DenomShape { l, den_deg });
            }
        }
        out
    }
}

/// Slot bookkeeping for one ansatz instantiation.
#[derive(Clone, Debug)]
pub struct AnsatzLayout {
    pub case: SearchCase,
    pub shape: DenomShape,
    /// (x-exp, y-exp, t-exp) per numerator unknown of f
    pub n_slots: Vec<(u16, u16, u16)>,
    /// unknown index ranges for the remaining blocks
    pub a_num: std::ops::Range<usize>,
    pub a_den: std::ops::Range<usize>,
    /// pde blocks: coefficient (w-degree, t-degree) slots
    pub u_slots: Vec<(u16, u16)>,
    pub v_slots: Vec<(u16, u16)>,
    pub u_base: usize,
    pub v_base: usize,
    pub n_unknowns: usize,
}

/// Numerator slots (x-exp, y-exp, t-exp) for the unknown f, shared between
/// the Groebner builder and the linear fast path.
pub fn numerator_slots(chart: &CurveChart, bounds: &AnsatzBounds) -> Vec<(u16, u16, u16)> {
    let by = bounds.deg_y.min(chart.deg_y() as u16 - 1);
    let mut n_slots = Vec::new();
    for xe in 0..=bounds.deg_x {
        for ye in 0..=by {
            for te in 0..=bounds.deg_t_num {
                n_slots.push((xe, ye, te));
            }
        }
    }
    n_slots
}

impl AnsatzLayout {
    fn new(case: SearchCase, chart: &CurveChart, bounds: &AnsatzBounds, shape: DenomShape) -> AnsatzLayout {
        let n_slots = numerator_slots(chart, bounds);
        let mut next = n_slots.len();
        let (a_num, a_den, u_slots, v_slots, u_base, v_base);
        match case {
            SearchCase::Additive | SearchCase::Multiplicative => {
                a_num = next..next + bounds.deg_a_num as usize + 1;
                next = a_num.end;
                a_den = next..next + shape.den_deg as usize;
                next = a_den.end;
                u_slots = Vec::new();
                v_slots = Vec::new();
                u_base = next;
                v_base = next;
            }
            SearchCase::Pde => {
                a_num = 0..0;
                a_den = 0..0;
                let mut us = Vec::new();
                for w in 0..=bounds.deg_g {
                    for te in 0..=bounds.deg_a_num {
                        us.push((w, te));
                    }
                }
                let mut vs = Vec::new();
                for w in 0..shape.den_deg {
                    for te in 0..=bounds.deg_a_den {
                        vs.push((w, te));
                    }
                }
                u_base = next;
                next += us.len();
                v_base = next;
                next += vs.len();
                u_slots = us;
                v_slots = vs;
            }
        }
        AnsatzLayout {
            case,
            shape,
            n_slots,
            a_num,
            a_den,
            u_slots,
            v_slots,
            u_base,
            v_base,
            n_unknowns: next,
        }
    }

    /// Indices of numerator slots with geometric content (x or y power).
    pub fn xy_slots(&self) -> Vec<usize> {
        self.n_slots
            .iter()
            .enumerate()
            .filter(|(_, (xe, ye, _))| *xe > 0 || *ye > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The extracted polynomial system. Solutions over Q(c_1,...,c_k)
/// correspond exactly to witnesses within the ansatz bounds (for the given
/// denominator shape).
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    pub layout: AnsatzLayout,
    pub equations: Vec<GPoly>,
    pub n_unknowns: usize,
    chart: Arc<CurveChart>,
}

impl CoefficientSystem {
    /// Normalization cells: the witness set is a cone in f's coefficients,
    /// so existence is decided per cell "slot beta is the highest nonzero
    /// geometric slot, scaled to 1". The union of the cells covers every
    /// admissible witness exactly once up to scaling.
    pub fn normalization_cells(&self) -> Vec<Vec<GPoly>> {
        let xy = self.layout.xy_slots();
        let mut cells = Vec::new();
        for (pos, &beta) in xy.iter().enumerate().rev() {
            let mut constraints = Vec::new();
            constraints.push(GPoly::var(beta).sub(&GPoly::one()));
            for &gamma in &xy[pos + 1..] {
                constraints.push(GPoly::var(gamma));
            }
            cells.push(constraints);
        }
        cells
    }

    /// Build the witness encoded by a solution point. Returns `None` when
    /// the point is degenerate (zero geometric part, or an identically zero
    /// pde denominator).
    pub fn materialize_witness(&self, point: &[MRat]) -> Result<Option<TrivialityVerdict>> {
        let chart = &self.chart;
        let vars = chart.vars().clone();
        let t = vars.t();
        let x = chart.x_var();
        let layout = &self.layout;
        // f = N / t^l
        let mut rep = vec![MRat::zero(); chart.deg_y()];
        let tl = MRat::from_poly(MPoly::var_pow(t, layout.shape.l));
        let mut has_xy = false;
        for (i, &(xe, ye, te)) in layout.n_slots.iter().enumerate() {
            let v = &point[i];
            if v.is_zero() {
                continue;
            }
            if xe > 0 || ye > 0 {
                has_xy = true;
            }
            let mono = MRat::from_poly(MPoly::var_pow(x, xe).mul(&MPoly::var_pow(t, te)));
            rep[ye as usize] = rep[ye as usize].add(&v.mul(&mono).div(&tl).unwrap());
        }
        if !has_xy {
            return Ok(None);
        }
        let f = FFElement::from_coeffs(chart.clone(), rep);
        match layout.case {
            SearchCase::Additive | SearchCase::Multiplicative => {
                let mut a_num = MRat::zero();
                for (k, i) in layout.a_num.clone().enumerate() {
                    a_num = a_num.add(&point[i].mul(&MRat::from_poly(MPoly::var_pow(t, k as u16))));
                }
                let mut a_den = MRat::from_poly(MPoly::var_pow(t, layout.shape.den_deg));
                for (k, i) in layout.a_den.clone().enumerate() {
                    a_den = a_den.add(&point[i].mul(&MRat::from_poly(MPoly::var_pow(t, k as u16))));
                }
                if a_den.is_zero() {
                    return Ok(None);
                }
                let a = BaseFunction::new(vars.clone(), a_num.div(&a_den).unwrap());
                Ok(Some(match layout.case {
                    SearchCase::Additive => TrivialityVerdict::AdditiveWitness { f, a },
                    _ => TrivialityVerdict::MultiplicativeWitness { f, a },
                }))
            }
            SearchCase::Pde => {
                let dgu = {
                    let max_w = layout.u_slots.iter().map(|s| s.0).max().unwrap_or(0);
                    max_w as usize
                };
                let mut num = vec![MRat::zero(); dgu + 1];
                for (slot, i) in layout.u_slots.iter().zip(layout.u_base..) {
                    let (w, te) = *slot;
                    num[w as usize] = num[w as usize]
                        .add(&point[i].mul(&MRat::from_poly(MPoly::var_pow(t, te))));
                }
                let dgd = layout.shape.den_deg as usize;
                let mut den = vec![MRat::zero(); dgd + 1];
                den[dgd] = MRat::one();
                for (slot, i) in layout.v_slots.iter().zip(layout.v_base..) {
                    let (w, te) = *slot;
                    den[w as usize] = den[w as usize]
                        .add(&point[i].mul(&MRat::from_poly(MPoly::var_pow(t, te))));
                }
                let g = UniRational {
                    num: num
                        .into_iter()
                        .map(|v| BaseFunction::new(vars.clone(), v))
                        .collect(),
                    den: den
                        .into_iter()
                        .map(|v| BaseFunction::new(vars.clone(), v))
                        .collect(),
                };
                Ok(Some(TrivialityVerdict::PdeWitness { f, g }))
            }
        }
    }
}

/// Assemble the cleared criterion identity for one denominator shape and
/// extract its coefficient equations.
pub fn build_coefficient_system(
    case: SearchCase,
    g: &FFElement,
    chart: &Arc<CurveChart>,
    bounds: &AnsatzBounds,
    shape: &DenomShape,
) -> Result<CoefficientSystem> {
    let layout = AnsatzLayout::new(case, chart, bounds, *shape);
    let vars = chart.vars().clone();
    let z_names: Vec<String> = (0..layout.n_unknowns).map(|i| format!("__u{i}")).collect();
    let z_refs: Vec<&str> = z_names.iter().map(|s| s.as_str()).collect();
    let vars_ext = vars.extended(&z_refs);
    let z_base = vars_ext.lookup(&z_names[0]).unwrap();

    let chart_ext = retable_chart(chart, &vars_ext)?;
    let g_ext = FFElement::from_coeffs(chart_ext.clone(), g.rep().to_vec());

    let t = vars_ext.t();
    let x = chart_ext.x_var();
    let t_rat = MRat::var(t);
    let zvar = |i: usize| MRat::var(z_base + i);

    // N as a symbolic function-field element
    let mut n_rep = vec![MRat::zero(); chart_ext.deg_y()];
    for (i, &(xe, ye, te)) in layout.n_slots.iter().enumerate() {
        let mono = MRat::from_poly(MPoly::var_pow(x, xe).mul(&MPoly::var_pow(t, te)));
        n_rep[ye as usize] = n_rep[ye as usize].add(&zvar(i).mul(&mono));
    }
    let n_elem = FFElement::from_coeffs(chart_ext.clone(), n_rep);

    // numerators of f^delta and d/dx f over t^(l+1) and t^l
    let l = layout.shape.l;
    let fdelta_num = delta_coeff(&n_elem)
        .scale(&t_rat)
        .sub(&n_elem.scale(&MRat::from_int(l as i64)));
    let df_num = total_x_derivative(&n_elem);

    let t_poly = |coeffs: &[(usize, u16)]| -> FFElement {
        // sum of z_i * t^te
        let mut acc = MRat::zero();
        for &(i, te) in coeffs {
            acc = acc.add(&zvar(i).mul(&MRat::from_poly(MPoly::var_pow(t, te))));
        }
        FFElement::from_coeffs(chart_ext.clone(), vec![acc])
    };

    let zform = match case {
        SearchCase::Additive | SearchCase::Multiplicative => {
            let a_num = t_poly(
                &layout
                    .a_num
                    .clone()
                    .enumerate()
                    .map(|(k, i)| (i, k as u16))
                    .collect::<Vec<_>>(),
            );
            let mut b_den = t_poly(
                &layout
                    .a_den
                    .clone()
                    .enumerate()
                    .map(|(k, i)| (i, k as u16))
                    .collect::<Vec<_>>(),
            );
            b_den = b_den.add(&FFElement::from_mrat(
                chart_ext.clone(),
                MRat::from_poly(MPoly::var_pow(t, layout.shape.den_deg)),
            ));
            let t_pow = FFElement::from_mrat(
                chart_ext.clone(),
                MRat::from_poly(MPoly::var_pow(t, l + 1)),
            );
            let inner = match case {
                SearchCase::Additive => fdelta_num.mul(&b_den).sub(&a_num.mul(&t_pow)),
                _ => fdelta_num
                    .mul(&b_den)
                    .sub(&a_num.mul(&n_elem).scale(&t_rat)),
            };
            let lhs = g_ext.mul(&inner);
            let rhs = df_num.scale(&t_rat).mul(&b_den);
            lhs.sub(&rhs)
        }
        SearchCase::Pde => {
            let dgu = bounds.deg_g;
            let dgd = layout.shape.den_deg;
            // U-hat = sum u_i(t) N^i t^(l(dgu-i)), V-hat likewise with the
            // monic leading term N^dgd
            let mut u_hat = FFElement::zero(chart_ext.clone());
            for w in 0..=dgu {
                let coeffs: Vec<(usize, u16)> = layout
                    .u_slots
                    .iter()
                    .zip(layout.u_base..)
                    .filter(|((sw, _), _)| *sw == w)
                    .map(|((_, te), i)| (i, *te))
                    .collect();
                let ci = t_poly(&coeffs);
                let term = ci.mul(&n_elem.pow(w as u32)).scale(&MRat::from_poly(
                    MPoly::var_pow(t, l * (dgu - w)),
                ));
                u_hat = u_hat.add(&term);
            }
            let mut v_hat = n_elem.pow(dgd as u32);
            for w in 0..dgd {
                let coeffs: Vec<(usize, u16)> = layout
                    .v_slots
                    .iter()
                    .zip(layout.v_base..)
                    .filter(|((sw, _), _)| *sw == w)
                    .map(|((_, te), i)| (i, *te))
                    .collect();
                let ci = t_poly(&coeffs);
                let term = ci.mul(&n_elem.pow(w as u32)).scale(&MRat::from_poly(
                    MPoly::var_pow(t, l * (dgd - w)),
                ));
                v_hat = v_hat.add(&term);
            }
            // h (fdelta_num V-hat t^E + U-hat t^(l+1+max(l(dgd-dgu),0)))
            //   = df_num t^(1+E) V-hat,  E = max(0, l(dgu-dgd))
            let e_adj = (l as i32) * (dgu as i32 - dgd as i32);
            let e = e_adj.max(0) as u16;
            let u_pow = (l as i32 + 1 + (-e_adj).max(0)) as u16;
            let te_pow = |p: u16| {
                FFElement::from_mrat(
                    chart_ext.clone(),
                    MRat::from_poly(MPoly::var_pow(t, p)),
                )
            };
            let lhs = g_ext.mul(
                &fdelta_num
                    .mul(&v_hat)
                    .mul(&te_pow(e))
                    .add(&u_hat.mul(&te_pow(u_pow))),
            );
            let rhs = df_num.mul(&v_hat).mul(&te_pow(1 + e));
            lhs.sub(&rhs)
        }
    };

    // extract equations from the numerators of the reduced representative
    let n_constants = vars_ext.n_constants();
    let mut eq_map: BTreeMap<(usize, Exps), GPoly> = BTreeMap::new();
    for (slot, entry) in zform.rep().iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        for (exps, coeff) in entry.num().terms() {
            let mut c_part = Exps::new();
            let mut xt_part = Exps::new();
            let mut z_part = Exps::new();
            for (v, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if v < n_constants {
                    if c_part.len() <= v {
                        c_part.resize(v + 1, 0);
                    }
                    c_part[v] = k;
                } else if v >= z_base {
                    let zi = v - z_base;
                    if z_part.len() <= zi {
                        z_part.resize(zi + 1, 0);
                    }
                    z_part[zi] = k;
                } else {
                    if xt_part.len() <= v {
                        xt_part.resize(v + 1, 0);
                    }
                    xt_part[v] = k;
                }
            }
            let key = (slot, xt_part);
            let mono = MRat::from_poly(MPoly::monomial(c_part, coeff.clone()));
            eq_map
                .entry(key)
                .or_insert_with(GPoly::zero)
                .add_term(z_part, mono);
        }
    }
    let equations: Vec<GPoly> = eq_map.into_values().filter(|e| !e.is_zero()).collect();
    Ok(CoefficientSystem {
        n_unknowns: layout.n_unknowns,
        layout,
        equations,
        chart: chart.clone(),
    })
}

/// Rebuild a chart over an extended variable table.
fn retable_chart(chart: &Arc<CurveChart>, vars_ext: &Arc<Vars>) -> Result<Arc<CurveChart>> {
    let mut p = MultiPoly::zero(vars_ext.clone());
    for (e, c) in chart.p().terms() {
        p.add_term(e.clone(), c.clone());
    }
    CurveChart::with_vars(
        p,
        (chart.x_var(), chart.y_var()),
        chart.genus,
        chart.simple_jacobian,
    )
}
