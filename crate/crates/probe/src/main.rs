use tauforms::basefield::BaseFunction;
use tauforms::geompoly::{CurveChart, FFElement, MultiPoly, ff_invert};
use tauforms::mrat::MRat;
use tauforms::triviality::*;
use tauforms::vars::Vars;

fn main() {
    let vars = Vars::for_curve(&["e"]);
    let x = MultiPoly::var(vars.clone(), vars.lookup("x").unwrap());
    let y = MultiPoly::var(vars.clone(), vars.lookup("y").unwrap());
    let one = MultiPoly::one(vars.clone());
    let p = y.mul(&y).sub(&x.pow(5)).sub(&x).sub(&one);
    let chart = CurveChart::new(p, 2, true).unwrap();
    // g = (x + 1 + e x) / (2 t x (x+1))
    let xf = FFElement::var_x(chart.clone());
    let ef = FFElement::from_base(chart.clone(), &BaseFunction::constant_symbol(vars.clone(), "e").unwrap());
    let tf = FFElement::from_base(chart.clone(), &BaseFunction::t(vars.clone()));
    let onef = FFElement::one(chart.clone());
    let num = xf.add(&onef).add(&ef.mul(&xf));
    let den = tf.scale(&MRat::from_int(2)).mul(&xf).mul(&xf.add(&onef));
    let g = num.mul(&ff_invert(&den).unwrap());

    let config = SearchConfig { bounds: AnsatzBounds::uniform(3), ..Default::default() };
    let t0 = std::time::Instant::now();
    let add = additive_search(&g, &chart, &config).unwrap();
    println!("additive: {:?} -> {}", t0.elapsed(), verdict_str(&add));
    let t1 = std::time::Instant::now();
    let mult = multiplicative_search(&g, &chart, &config).unwrap();
    println!("multiplicative: {:?} -> {}", t1.elapsed(), verdict_str(&mult));
    let t2 = std::time::Instant::now();
    let pde = pde_search(&g, &chart, &config).unwrap();
    println!("pde: {:?} -> {}", t2.elapsed(), verdict_str(&pde));
}

fn verdict_str(v: &TrivialityVerdict) -> String {
    match v {
        TrivialityVerdict::NoneUpToBound { .. } => "none_up_to_bound".into(),
        TrivialityVerdict::NotApplicable { reason } => format!("not_applicable: {reason}"),
        other => format!("{other:?}").chars().take(120).collect(),
    }
}
