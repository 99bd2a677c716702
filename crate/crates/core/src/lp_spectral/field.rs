use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use super::fft::{transform, FftCache};
use super::filters::{bank_from_table, LpFilterBank};
use super::grid::{Grid, ModeTable};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which modes survive a transform back from physical space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Every mode of the native grid except the Nyquist planes.
    Full,
    /// Only modes with `|k_a| <= n/3` on every axis.
    Dealias,
}

/// A grid together with its mode tables, filter bank and FFT plans.
/// Fields hold an `Arc<Domain>`; fields on equal grids are compatible.
pub struct Domain {
    grid: Grid,
    table: ModeTable,
    bank: LpFilterBank,
    ffts: FftCache,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain")
            .field("grid", &self.grid)
            .field("j_min", &self.bank.j_min())
            .field("j_max", &self.bank.j_max())
            .finish()
    }
}

impl Domain {
    pub fn new(grid: Grid) -> Result<Arc<Domain>> {
        let bank = super::filters::build_filter_bank(&grid)?;
        let table = ModeTable::new(&grid);
        Ok(Arc::new(Domain {
            grid,
            table,
            bank,
            ffts: FftCache::new(),
        }))
    }

    /// Same grid, explicit dyadic range.
    pub fn with_bank_range(grid: Grid, j_min: i32, j_max: i32) -> Result<Arc<Domain>> {
        grid.validate()?;
        if j_max < j_min + 2 {
            return Err(Error::InvalidGrid(format!(
                "filter bank needs at least 3 dyadic shells, got [{j_min}, {j_max}]"
            )));
        }
        let table = ModeTable::new(&grid);
        let bank = bank_from_table(&table, j_min, j_max);
        Ok(Arc::new(Domain {
            grid,
            table,
            bank,
            ffts: FftCache::new(),
        }))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn bank(&self) -> &LpFilterBank {
        &self.bank
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn d(&self) -> usize {
        self.grid.d
    }

    pub fn mode(&self, idx: usize) -> [i64; 3] {
        self.table.modes[idx]
    }

    pub fn xi(&self, idx: usize) -> [f64; 3] {
        self.table.xi[idx]
    }

    pub fn xi_norm(&self, idx: usize) -> f64 {
        self.table.xi_norm[idx]
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.table.nyquist[idx]
    }

    pub fn is_dealiased(&self, idx: usize) -> bool {
        self.table.dealiased[idx]
    }

    pub fn negated(&self, idx: usize) -> usize {
        self.table.negated[idx]
    }

    /// Evaluation size for quadratic products (3/2 zero padding).
    pub fn quadratic_size(&self) -> usize {
        3 * self.grid.n / 2
    }

    /// Evaluation size for non-polynomial compositions (2x oversampling).
    pub fn composition_size(&self) -> usize {
        2 * self.grid.n
    }

    pub fn same_grid(&self, other: &Domain) -> bool {
        self.grid == other.grid
    }

    /// Physical values on an `m^d` grid for each set of coefficients.
    /// Coefficients must be Hermitian; two fields share one complex transform.
    pub fn physical(&self, coeffs: &[&[Complex64]], m: usize) -> Vec<Vec<f64>> {
        assert!(m >= self.grid.n, "evaluation grid coarser than the native grid");
        let plan = self.ffts.plan(&self.grid, m);
        let d = self.grid.d;
        let pts = plan.points(d);
        let mut out = Vec::with_capacity(coeffs.len());
        for pair in coeffs.chunks(2) {
            let mut buf = vec![Complex64::default(); pts];
            for (idx, &target) in plan.map.iter().enumerate() {
                if target == usize::MAX {
                    continue;
                }
                let mut z = pair[0][idx];
                if pair.len() == 2 {
                    z += I * pair[1][idx];
                }
                buf[target] = z;
            }
            transform(&mut buf, m, d, &plan.inverse);
            out.push(buf.iter().map(|z| z.re).collect());
            if pair.len() == 2 {
                out.push(buf.iter().map(|z| z.im).collect());
            }
        }
        out
    }

    /// Fourier coefficients of real values sampled on an `m^d` grid, restricted
    /// to the native grid and then to `trunc`.
    pub fn spectral(&self, values: &[Vec<f64>], m: usize, trunc: Truncation) -> Vec<Vec<Complex64>> {
        let plan = self.ffts.plan(&self.grid, m);
        let d = self.grid.d;
        let pts = plan.points(d);
        let scale = 1.0 / pts as f64;
        let mut out = Vec::with_capacity(values.len());
        for pair in values.chunks(2) {
            let mut buf: Vec<Complex64> = if pair.len() == 2 {
                pair[0]
                    .iter()
                    .zip(&pair[1])
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect()
            } else {
                pair[0].iter().map(|&a| Complex64::new(a, 0.0)).collect()
            };
            assert_eq!(buf.len(), pts, "value array does not match evaluation grid");
            transform(&mut buf, m, d, &plan.forward);
            let mut first = vec![Complex64::default(); self.len()];
            let mut second = vec![Complex64::default(); if pair.len() == 2 { self.len() } else { 0 }];
            for idx in 0..self.len() {
                let target = plan.map[idx];
                if target == usize::MAX || (trunc == Truncation::Dealias && !self.table.dealiased[idx]) {
                    continue;
                }
                let zk = buf[target] * scale;
                let zm = buf[plan.map[self.table.negated[idx]]].conj() * scale;
                first[idx] = (zk + zm) * 0.5;
                if pair.len() == 2 {
                    second[idx] = (zk - zm) * Complex64::new(0.0, -0.5);
                }
            }
            out.push(first);
            if pair.len() == 2 {
                out.push(second);
            }
        }
        out
    }

    /// Evaluates `f` pointwise on the `m^d` grid and returns the dealiased
    /// spectral fields of its `n_out` outputs.
    pub fn evaluate<F>(self: &Arc<Self>, inputs: &[&SpectralField], m: usize, n_out: usize, f: F) -> Vec<SpectralField>
    where
        F: Fn(&[f64], &mut [f64]) + Sync,
    {
        let coeffs: Vec<&[Complex64]> = inputs.iter().map(|s| s.coeffs()).collect();
        let phys = self.physical(&coeffs, m);
        let pts = m.pow(self.grid.d as u32);
        let n_in = inputs.len();
        let mut outs = vec![vec![0.0; pts]; n_out];
        const CHUNK: usize = 4096;
        let mut out_chunks: Vec<Vec<&mut [f64]>> = Vec::new();
        {
            let mut iters: Vec<_> = outs.iter_mut().map(|o| o.chunks_mut(CHUNK)).collect();
            loop {
                let row: Vec<&mut [f64]> = iters.iter_mut().filter_map(|it| it.next()).collect();
                if row.len() < n_out || n_out == 0 {
                    break;
                }
                out_chunks.push(row);
            }
        }
        out_chunks.into_par_iter().enumerate().for_each(|(c, mut row)| {
            let start = c * CHUNK;
            let len = row[0].len();
            let mut x = vec![0.0; n_in];
            let mut y = vec![0.0; n_out];
            for p in 0..len {
                for (slot, field) in x.iter_mut().zip(&phys) {
                    *slot = field[start + p];
                }
                f(&x, &mut y);
                for (o, v) in row.iter_mut().zip(&y) {
                    o[p] = *v;
                }
            }
        });
        self.spectral(&outs, m, Truncation::Dealias)
            .into_iter()
            .map(|c| SpectralField {
                domain: self.clone(),
                coeffs: c,
            })
            .collect()
    }
}

/// Real scalar field on the torus, stored as Fourier coefficients `f_k` with
/// `f(x) = sum_k f_k exp(i xi_k . x)`.
#[derive(Clone)]
pub struct SpectralField {
    domain: Arc<Domain>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralField")
            .field("grid", &self.domain.grid)
            .field("l2", &self.l2_norm())
            .finish()
    }
}

impl SpectralField {
    pub fn zeros(domain: &Arc<Domain>) -> Self {
        SpectralField {
            domain: domain.clone(),
            coeffs: vec![Complex64::default(); domain.len()],
        }
    }

    pub fn from_coeffs(domain: &Arc<Domain>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != domain.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a grid of {} modes",
                coeffs.len(),
                domain.len()
            )));
        }
        Ok(SpectralField {
            domain: domain.clone(),
            coeffs,
        })
    }

    /// Samples on the native grid; the Nyquist planes are dropped.
    pub fn from_physical(domain: &Arc<Domain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidArgument("physical sample count mismatch".into()));
        }
        let n = domain.grid.n;
        let coeffs = domain.spectral(&[values], n, Truncation::Full).remove(0);
        Ok(SpectralField {
            domain: domain.clone(),
            coeffs,
        })
    }

    pub fn from_fn(domain: &Arc<Domain>, f: impl Fn([f64; 3]) -> f64) -> Self {
        let n = domain.grid.n;
        let values = (0..domain.len()).map(|i| f(domain.grid.point_on(i, n))).collect();
        Self::from_physical(domain, values).expect("sample count matches grid")
    }

    /// Builds a field from `(mode, coefficient)` pairs; the conjugate partner
    /// of each mode is filled in so the field stays real.
    pub fn from_modes(domain: &Arc<Domain>, modes: &[([i64; 3], Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(domain);
        for &(k, c) in modes {
            let idx = domain
                .grid
                .index_of(k)
                .ok_or_else(|| Error::InvalidArgument(format!("mode {k:?} not representable")))?;
            let neg = domain.negated(idx);
            if neg == idx {
                f.coeffs[idx] += Complex64::new(c.re, 0.0);
            } else {
                f.coeffs[idx] += c;
                f.coeffs[neg] += c.conj();
            }
        }
        Ok(f)
    }

    /// Random real field with coefficients on `k_min <= |k| <= k_max`
    /// (integer-mode radius), each drawn uniformly from the unit square and
    /// weighted by `|k|^-slope`. Modes are visited in index order, so a seeded
    /// generator gives a reproducible field.
    pub fn random_band<R: Rng>(domain: &Arc<Domain>, rng: &mut R, k_min: f64, k_max: f64, slope: f64) -> Self {
        let mut f = Self::zeros(domain);
        for idx in 1..domain.len() {
            let neg = domain.negated(idx);
            if neg < idx || domain.is_nyquist(idx) {
                continue;
            }
            let k = domain.mode(idx);
            let r = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
            if r < k_min || r > k_max {
                continue;
            }
            let w = r.powf(-slope);
            let re = rng.gen_range(-1.0..1.0) * w;
            let im = if neg == idx { 0.0 } else { rng.gen_range(-1.0..1.0) * w };
            f.coeffs[idx] = Complex64::new(re, im);
            f.coeffs[neg] = Complex64::new(re, -im);
        }
        f
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn grid(&self) -> &Grid {
        &self.domain.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.domain.same_grid(&other.domain) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Spatial mean (the zero mode).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = Complex64::default();
        f
    }

    /// Applies a per-mode multiplier `m(idx)`.
    pub fn map_modes(&self, m: impl Fn(usize) -> Complex64 + Sync) -> Self {
        let coeffs = self
            .coeffs
            .par_iter()
            .enumerate()
            .map(|(idx, &c)| c * m(idx))
            .collect();
        SpectralField {
            domain: self.domain.clone(),
            coeffs,
        }
    }

    /// Multiplier that only depends on the physical wave vector.
    pub fn multiply_symbol(&self, m: impl Fn(&[f64; 3]) -> Complex64 + Sync) -> Self {
        let dom = self.domain.clone();
        self.map_modes(|idx| m(&dom.table.xi[idx]))
    }

    /// `d/dx_axis`.
    pub fn partial(&self, axis: usize) -> Self {
        self.multiply_symbol(|xi| Complex64::new(0.0, xi[axis]))
    }

    pub fn laplacian(&self) -> Self {
        let dom = self.domain.clone();
        self.map_modes(|idx| {
            let r = dom.table.xi_norm[idx];
            Complex64::new(-r * r, 0.0)
        })
    }

    pub fn gradient(&self) -> VectorField {
        VectorField::from_components((0..self.domain.d()).map(|a| self.partial(a)).collect())
            .expect("gradient components share a grid")
    }

    pub fn to_physical(&self) -> Vec<f64> {
        self.domain.physical(&[&self.coeffs], self.domain.grid.n).remove(0)
    }

    pub fn to_physical_on(&self, m: usize) -> Vec<f64> {
        self.domain.physical(&[&self.coeffs], m).remove(0)
    }

    /// `sqrt(L^d sum_k |f_k|^2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.domain.grid.volume() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_coeff_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::default())
    }

    /// Zeroes every mode outside the 2/3-rule cube.
    pub fn dealias(&self) -> Self {
        let dom = self.domain.clone();
        self.map_modes(|idx| {
            if dom.table.dealiased[idx] {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(idx, c)| self.domain.table.dealiased[idx] || *c == Complex64::default())
    }

    /// `max_k |f_k - conj(f_-k)| / max_k |f_k|`; zero for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            let neg = self.domain.table.negated[idx];
            worst = worst.max((c - self.coeffs[neg].conj()).norm());
        }
        worst / scale
    }

    /// Dealiased product, computed exactly on the 3/2-padded grid.
    pub fn product(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_same_grid(other)?;
        let m = self.domain.quadratic_size();
        Ok(self.domain.evaluate(&[self, other], m, 1, |x, y| y[0] = x[0] * x[1]).remove(0))
    }

    pub fn scale(&self, s: f64) -> Self {
        self * s
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }
}

impl<'a> Add<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        debug_assert!(self.domain.same_grid(&rhs.domain));
        SpectralField {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        debug_assert!(self.domain.same_grid(&rhs.domain));
        SpectralField {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, s: f64) -> SpectralField {
        SpectralField {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

/// A list of scalar fields on one grid; `d` components for velocities, any
/// count for generic multi-component data.
#[derive(Clone, Debug)]
pub struct VectorField {
    comps: Vec<SpectralField>,
}

impl VectorField {
    pub fn zeros(domain: &Arc<Domain>) -> Self {
        VectorField {
            comps: (0..domain.d()).map(|_| SpectralField::zeros(domain)).collect(),
        }
    }

    pub fn from_components(comps: Vec<SpectralField>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::InvalidArgument("vector field without components".into()));
        }
        for c in &comps[1..] {
            comps[0].check_same_grid(c)?;
        }
        Ok(VectorField { comps })
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.comps[0].domain()
    }

    pub fn comps(&self) -> &[SpectralField] {
        &self.comps
    }

    pub fn comps_mut(&mut self) -> &mut [SpectralField] {
        &mut self.comps
    }

    pub fn into_comps(self) -> Vec<SpectralField> {
        self.comps
    }

    pub fn comp(&self, i: usize) -> &SpectralField {
        &self.comps[i]
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn coeff_slices(&self) -> Vec<&[Complex64]> {
        self.comps.iter().map(|c| c.coeffs()).collect()
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        VectorField {
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn divergence(&self) -> SpectralField {
        let mut acc = SpectralField::zeros(self.domain());
        for (a, c) in self.comps.iter().enumerate() {
            acc += &c.partial(a);
        }
        acc
    }

    /// `partial_i v_j - partial_j v_i` for every `i < j`.
    pub fn curl_components(&self) -> Vec<SpectralField> {
        let d = self.comps.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                out.push(&self.comps[j].partial(i) - &self.comps[i].partial(j));
            }
        }
        out
    }

    pub fn mean(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.mean()).collect()
    }

    /// `sqrt(sum_i ||v_i||_{L^2}^2)`.
    pub fn l2_norm(&self) -> f64 {
        self.comps.iter().map(|c| c.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_coeff(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_coeff()))
    }

    pub fn max_coeff_diff(&self, other: &VectorField) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .fold(0.0, |m, (a, b)| m.max(a.max_coeff_diff(b)))
    }

    pub fn dealias(&self) -> Self {
        self.map(|c| c.dealias())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c * s)
    }

    pub fn axpy(&mut self, s: f64, other: &VectorField) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.axpy(s, b);
        }
    }

    /// Pointwise max of the Euclidean magnitude on the native grid.
    pub fn max_magnitude(&self) -> f64 {
        let n = self.domain().grid().n;
        let phys = self.domain().physical(&self.coeff_slices(), n);
        (0..phys[0].len())
            .map(|p| phys.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &VectorField {
    type Output = VectorField;
    fn mul(self, s: f64) -> VectorField {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn domain(d: usize, n: usize) -> Arc<Domain> {
        Domain::new(Grid::new(d, n, 2.0 * PI).unwrap()).unwrap()
    }

    #[test]
    fn physical_round_trip() {
        let dom = domain(2, 16);
        let f = SpectralField::from_fn(&dom, |x| (x[0]).sin() + 0.5 * (2.0 * x[1] + x[0]).cos());
        let back = SpectralField::from_physical(&dom, f.to_physical()).unwrap();
        assert!(f.max_coeff_diff(&back) < 1e-14);
        let k = dom.grid().index_of([1, 0, 0]).unwrap();
        assert!((f.coeffs()[k] - Complex64::new(0.0, -0.5)).norm() < 1e-14);
        assert!(f.hermitian_defect() < 1e-14);
    }

    #[test]
    fn paired_evaluation_matches_single() {
        let dom = domain(3, 8);
        let f = SpectralField::from_fn(&dom, |x| (x[0] + x[2]).cos());
        let g = SpectralField::from_fn(&dom, |x| (x[1]).sin() * (x[2]).cos());
        let both = dom.physical(&[f.coeffs(), g.coeffs()], 16);
        let single = dom.physical(&[g.coeffs()], 16);
        for (a, b) in both[1].iter().zip(&single[0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn product_is_exact_and_dealiased() {
        let dom = domain(2, 32);
        let f = SpectralField::from_fn(&dom, |x| (3.0 * x[0]).cos());
        let g = SpectralField::from_fn(&dom, |x| (4.0 * x[0] + x[1]).sin());
        let fg = f.product(&g).unwrap();
        let want = SpectralField::from_fn(&dom, |x| (3.0 * x[0]).cos() * (4.0 * x[0] + x[1]).sin());
        assert!(fg.max_coeff_diff(&want) < 1e-14);
        let hi = SpectralField::from_fn(&dom, |x| (9.0 * x[0]).cos());
        let sq = hi.product(&hi).unwrap();
        assert!(sq.is_dealiased());
        // cos^2(9x) = (1 + cos 18x)/2 and 18 > 32/3 is cut
        assert!((sq.mean() - 0.5).abs() < 1e-14);
        assert!(sq.without_mean().max_coeff() < 1e-14);
    }

    #[test]
    fn derivative_of_sine() {
        let dom = domain(2, 16);
        let f = SpectralField::from_fn(&dom, |x| (2.0 * x[1]).sin());
        let df = f.partial(1);
        let want = SpectralField::from_fn(&dom, |x| 2.0 * (2.0 * x[1]).cos());
        assert!(df.max_coeff_diff(&want) < 1e-13);
    }
}
