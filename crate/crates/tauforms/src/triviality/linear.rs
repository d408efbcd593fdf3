//! Linear fast path for the additive criterion.
//!
//! The condition "there are f and a with g (f^delta - a) = d/dx f" is
//! equivalent to E(f) := f^delta - (d/dx f)/g lying in K, with a read off
//! as that value. E is linear over the constants of the derivation, so for
//! f ranging over the span of the ansatz monomials the condition is a
//! homogeneous linear system in f's coefficients; a carries no bound at
//! all on this path.

use std::sync::Arc;

use crate::basefield::BaseFunction;
use crate::error::Result;
use crate::geompoly::{delta_coeff, ff_invert, total_x_derivative, CurveChart, FFElement};
use crate::mpoly::{gcd, Exps, MPoly};
use crate::mrat::MRat;

use super::system::numerator_slots;
use super::AnsatzBounds;

/// Search for an additive witness; returns the materialized (f, a) pair.
pub fn additive_search_linear(
    g: &FFElement,
    chart: &Arc<CurveChart>,
    bounds: &AnsatzBounds,
) -> Result<Option<(FFElement, BaseFunction)>> {
    let g_inv = ff_invert(g)?;
    let vars = chart.vars().clone();
    let t = vars.t();
    let x = chart.x_var();

    let slots = numerator_slots(chart, bounds);
    for l in 0..=bounds.deg_t_den {
        let tl = MRat::from_poly(MPoly::var_pow(t, l));
        // basis elements m_i = x^xe y^ye t^te / t^l and their images
        let mut basis: Vec<FFElement> = Vec::with_capacity(slots.len());
        let mut images: Vec<FFElement> = Vec::with_capacity(slots.len());
        let mut dfs: Vec<FFElement> = Vec::with_capacity(slots.len());
        for &(xe, ye, te) in &slots {
            let mono = MRat::from_poly(MPoly::var_pow(x, xe).mul(&MPoly::var_pow(t, te)))
                .div(&tl)
                .unwrap();
            let mut rep = vec![MRat::zero(); chart.deg_y()];
            rep[ye as usize] = mono;
            let m = FFElement::from_coeffs(chart.clone(), rep);
            let dm = total_x_derivative(&m);
            let e = delta_coeff(&m).sub(&dm.mul(&g_inv));
            basis.push(m);
            images.push(e);
            dfs.push(dm);
        }

        let rows = condition_rows(&images, chart);
        let kernel = kernel_basis(&rows, slots.len());
        if kernel.is_empty() {
            continue;
        }

        let xy_cols: Vec<usize> = slots
            .iter()
            .enumerate()
            .filter(|(_, (xe, ye, _))| *xe > 0 || *ye > 0)
            .map(|(i, _)| i)
            .collect();
        let in_b1 = |v: &[MRat]| xy_cols.iter().all(|&i| v[i].is_zero());
        let in_b2 = |v: &[MRat]| {
            let mut df = FFElement::zero(chart.clone());
            for (vi, d) in v.iter().zip(&dfs) {
                if !vi.is_zero() {
                    df = df.add(&d.scale(vi));
                }
            }
            df.is_zero()
        };

        let chosen = pick_avoiding(&kernel, &in_b1, &in_b2);
        let v = match chosen {
            Some(v) => v,
            None => continue,
        };

        let mut f = FFElement::zero(chart.clone());
        let mut e_val = FFElement::zero(chart.clone());
        for ((vi, m), e) in v.iter().zip(&basis).zip(&images) {
            if !vi.is_zero() {
                f = f.add(&m.scale(vi));
                e_val = e_val.add(&e.scale(vi));
            }
        }
        assert!(e_val.is_in_base(), "kernel image must land in K");
        let a = BaseFunction::new(vars.clone(), e_val.rep()[0].clone());
        return Ok(Some((f, a)));
    }
    Ok(None)
}

/// Linear conditions for "the combination lies in K": the y-coefficients of
/// the reduced representative vanish, and the y^0 part is x-free.
fn condition_rows(images: &[FFElement], chart: &Arc<CurveChart>) -> Vec<Vec<MRat>> {
    let n = images.len();
    let t = chart.vars().t();
    let x = chart.x_var();
    let n_constants = chart.vars().n_constants();
    let mut rows: Vec<Vec<MRat>> = Vec::new();

    for slot in 0..chart.deg_y() {
        // common denominator across the column
        let mut delta = MPoly::one();
        for img in images {
            let den = img.rep()[slot].den();
            let g = gcd(&delta, den);
            delta = delta.mul(&den.exact_div(&g).unwrap());
        }
        let cleared: Vec<MPoly> = images
            .iter()
            .map(|img| {
                let r = &img.rep()[slot];
                r.num().mul(&delta.exact_div(r.den()).unwrap())
            })
            .collect();
        if slot >= 1 {
            // every (x,t)-coefficient of the combination vanishes
            extract_rows(&mut rows, &cleared, &[x, t], n_constants, n);
        } else {
            // proportionality to delta in x: eliminate the read-off value
            let max_x = cleared
                .iter()
                .map(|p| p.degree_in(x))
                .chain(std::iter::once(delta.degree_in(x)))
                .max()
                .unwrap_or(0);
            let d_coeffs = delta.as_univar(x);
            let eps = delta.degree_in(x) as usize;
            let d_eps = &d_coeffs[eps];
            for kappa in 0..=max_x as usize {
                if kappa == eps {
                    continue;
                }
                let d_kappa = d_coeffs.get(kappa).cloned().unwrap_or_else(MPoly::zero);
                let g_row: Vec<MPoly> = cleared
                    .iter()
                    .map(|w| {
                        let wu = w.as_univar(x);
                        let w_kappa = wu.get(kappa).cloned().unwrap_or_else(MPoly::zero);
                        let w_eps = wu.get(eps).cloned().unwrap_or_else(MPoly::zero);
                        w_kappa.mul(d_eps).sub(&w_eps.mul(&d_kappa))
                    })
                    .collect();
                extract_rows(&mut rows, &g_row, &[t], n_constants, n);
            }
        }
    }
    rows
}

/// Extract coefficient rows over Q(c_1,...,c_k) by splitting off the listed
/// structural variables.
fn extract_rows(
    rows: &mut Vec<Vec<MRat>>,
    cleared: &[MPoly],
    structural: &[usize],
    n_constants: usize,
    n: usize,
) {
    use std::collections::BTreeMap;
    let mut by_key: BTreeMap<Exps, Vec<MRat>> = BTreeMap::new();
    for (i, p) in cleared.iter().enumerate() {
        for (exps, coeff) in p.terms() {
            let mut key = Exps::new();
            let mut c_part = Exps::new();
            for (v, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if structural.contains(&v) {
                    if key.len() <= v {
                        key.resize(v + 1, 0);
                    }
                    key[v] = k;
                } else {
                    debug_assert!(v < n_constants, "unexpected variable in extraction");
                    if c_part.len() <= v {
                        c_part.resize(v + 1, 0);
                    }
                    c_part[v] = k;
                }
            }
            let row = by_key.entry(key).or_insert_with(|| vec![MRat::zero(); n]);
            row[i] = row[i].add(&MRat::from_poly(MPoly::monomial(c_part, coeff.clone())));
        }
    }
    rows.extend(by_key.into_values().filter(|r| r.iter().any(|e| !e.is_zero())));
}

/// Kernel basis of a homogeneous system by reduced row echelon form.
pub fn kernel_basis(rows: &[Vec<MRat>], ncols: usize) -> Vec<Vec<MRat>> {
    let mut mat: Vec<Vec<MRat>> = rows.iter().filter(|r| r.iter().any(|e| !e.is_zero())).cloned().collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot_row = (rank..mat.len()).find(|&r| !mat[r][col].is_zero());
        let Some(pr) = pivot_row else { continue };
        mat.swap(rank, pr);
        let inv = mat[rank][col].inv().unwrap();
        for e in mat[rank].iter_mut() {
            *e = e.mul(&inv);
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for cc in 0..ncols {
                    let delta = factor.mul(&mat[rank][cc]);
                    mat[r][cc] = mat[r][cc].sub(&delta);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut kernel = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![MRat::zero(); ncols];
        v[free] = MRat::one();
        for (col, pr) in pivot_of_col.iter().enumerate() {
            if let Some(pr) = pr {
                v[col] = mat[*pr][free].neg();
            }
        }
        kernel.push(v);
    }
    kernel
}

/// Pick a kernel vector avoiding two proper subspaces (tests given as
/// membership closures). Deterministic: basis vectors, then u + w and
/// u + 2w combinations.
fn pick_avoiding(
    kernel: &[Vec<MRat>],
    in_b1: &dyn Fn(&[MRat]) -> bool,
    in_b2: &dyn Fn(&[MRat]) -> bool,
) -> Option<Vec<MRat>> {
    let u = kernel.iter().find(|v| !in_b1(v))?;
    if !in_b2(u) {
        return Some(u.clone());
    }
    let w = kernel.iter().find(|v| !in_b2(v))?;
    for lambda in [1i64, 2] {
        let cand: Vec<MRat> = u
            .iter()
            .zip(w)
            .map(|(a, b)| a.add(&b.mul(&MRat::from_int(lambda))))
            .collect();
        if !in_b1(&cand) && !in_b2(&cand) {
            return Some(cand);
        }
    }
    None
}
