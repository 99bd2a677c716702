//! Bony decomposition on the torus, transport commutators and empirical
//! probes of the product estimates.
//!
//! Dyadic pieces act on fluctuations `f' = f - mean(f)`; the mean channel is
//! carried by [`mean_corrections`], so that
//! `T_f g + T_g f + R(f, g) + mean_corrections(f, g) = f g` on the dealiased
//! band.

mod probe;

pub use probe::{estimate_probe, static_ratio, FieldSampler, LemmaId, ProbeParams, ProbeReport, ProbeTrial};

use crate::error::{Error, Result};
use crate::lp_spectral::{dyadic_block, low_cut, Domain, SpectralField, Truncation, VectorField};
use crate::operators::{transport, SymbolOp};

/// `sum_i a_i b_i` evaluated exactly on the 3/2-padded grid, dealiased.
fn sum_of_products(dom: &std::sync::Arc<Domain>, pairs: &[(SpectralField, SpectralField)]) -> SpectralField {
    let m = dom.quadratic_size();
    let mut acc = vec![0.0; m.pow(dom.d() as u32)];
    for (a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let phys = dom.physical(&[a.coeffs(), b.coeffs()], m);
        for (s, (x, y)) in acc.iter_mut().zip(phys[0].iter().zip(&phys[1])) {
            *s += x * y;
        }
    }
    let coeffs = dom.spectral(&[acc], m, Truncation::Dealias).remove(0);
    SpectralField::from_coeffs(dom, coeffs).expect("length matches")
}

/// `T_f g = sum_j S_{j-3} f' Delta_j g'`.
pub fn para_t(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_same_grid(g)?;
    let dom = f.domain();
    let pairs = dom
        .bank()
        .js()
        .map(|j| Ok((low_cut(f, j - 3), dyadic_block(g, j)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_of_products(dom, &pairs))
}

/// `R(f, g) = sum_{|j - j'| <= 2} Delta_j f' Delta_j' g'`.
pub fn para_r(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_same_grid(g)?;
    let dom = f.domain();
    let bank = dom.bank();
    let gblocks = bank.js().map(|j| dyadic_block(g, j)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for j in bank.js() {
        let mut near = SpectralField::zeros(dom);
        for jj in (j - 2).max(bank.j_min())..=(j + 2).min(bank.j_max()) {
            near += &gblocks[(jj - bank.j_min()) as usize];
        }
        pairs.push((dyadic_block(f, j)?, near));
    }
    Ok(sum_of_products(dom, &pairs))
}

/// `mean(f) g + f' mean(g)`, the part of `f g` that the dyadic pieces omit.
pub fn mean_corrections(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_same_grid(g)?;
    let mut out = g.dealias().scale(f.mean());
    out.axpy(g.mean(), &f.without_mean().dealias());
    Ok(out)
}

/// Sum of every Bony piece, equal to the dealiased product `f g`.
pub fn bony_reconstruct(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let mut out = para_t(f, g)?;
    out += &para_t(g, f)?;
    out += &para_r(f, g)?;
    out += &mean_corrections(f, g)?;
    Ok(out)
}

/// Single term `S_{j-3} f' Delta_j g'` of the paraproduct, dealiased.
pub fn para_t_term(f: &SpectralField, g: &SpectralField, j: i32) -> Result<SpectralField> {
    f.check_same_grid(g)?;
    let dom = f.domain();
    Ok(sum_of_products(dom, &[(low_cut(f, j - 3), dyadic_block(g, j)?)]))
}

fn apply_eta_block(a: &VectorField, j: i32, eta: &SymbolOp) -> Result<VectorField> {
    let blocks = VectorField::from_components(
        a.comps()
            .iter()
            .map(|c| dyadic_block(c, j))
            .collect::<Result<Vec<_>>>()?,
    )?;
    eta.apply_vector(&blocks)
}

/// `[v . grad, eta(D) Delta_j] a = v . grad(eta(D) Delta_j a) - eta(D) Delta_j (v . grad a)`,
/// applied componentwise to a multi-component `a`.
pub fn commutator_transport(v: &VectorField, a: &VectorField, j: i32, eta: &SymbolOp) -> Result<VectorField> {
    if v.len() != v.domain().d() {
        return Err(Error::InvalidArgument("transport field needs d components".into()));
    }
    let first = apply_eta_block(a, j, eta)?;
    let first = VectorField::from_components(
        first
            .comps()
            .iter()
            .map(|c| transport(v, c))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let advected = VectorField::from_components(
        a.comps()
            .iter()
            .map(|c| transport(v, c))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let second = apply_eta_block(&advected, j, eta)?;
    Ok(&first - &second)
}

/// Scalar form of [`commutator_transport`]; `eta` must be a scalar symbol.
pub fn commutator_transport_scalar(
    v: &VectorField,
    a: &SpectralField,
    j: i32,
    eta: &SymbolOp,
) -> Result<SpectralField> {
    if eta.is_matrix() {
        return Err(Error::InvalidArgument(format!(
            "{} acts on vector fields only",
            eta.name
        )));
    }
    let a = VectorField::from_components(vec![a.clone()])?;
    Ok(commutator_transport(v, &a, j, eta)?.into_comps().remove(0))
}

/// Fraction of the energy of `f` outside `lo <= |xi| <= hi`.
pub fn energy_outside(f: &SpectralField, lo: f64, hi: f64) -> f64 {
    let dom = f.domain();
    let mut total = 0.0;
    let mut outside = 0.0;
    for (idx, c) in f.coeffs().iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        let r = dom.xi_norm(idx);
        if r < lo || r > hi {
            outside += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_spectral::Grid;
    use std::f64::consts::PI;

    fn domain() -> std::sync::Arc<Domain> {
        Domain::new(Grid::new(2, 64, 2.0 * PI).unwrap()).unwrap()
    }

    #[test]
    fn constant_left_factor_gives_zero_paraproduct() {
        let dom = domain();
        let c = SpectralField::from_fn(&dom, |_| 3.0);
        let g = SpectralField::from_fn(&dom, |x| (5.0 * x[0]).sin());
        assert!(para_t(&c, &g).unwrap().max_coeff() < 1e-15);
        let corr = mean_corrections(&c, &g).unwrap();
        assert!(corr.max_coeff_diff(&g.scale(3.0)) < 1e-14);
    }

    #[test]
    fn separated_low_high_pair_is_pure_paraproduct() {
        let dom = domain();
        let f = SpectralField::from_fn(&dom, |x| x[0].cos());
        let g = SpectralField::from_fn(&dom, |x| (16.0 * x[1]).cos());
        let fg = f.product(&g).unwrap();
        let t = para_t(&f, &g).unwrap();
        assert!(t.max_coeff_diff(&fg) < 1e-14);
        assert!(para_t(&g, &f).unwrap().max_coeff() < 1e-15);
        assert!(para_r(&f, &g).unwrap().max_coeff() < 1e-15);
    }
}
