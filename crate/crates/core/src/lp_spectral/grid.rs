use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the box `[0, L)^d`.
///
/// Coefficients are stored row-major with axis 0 slowest. Index `i` along an
/// axis carries the integer mode `i` for `i < n/2` and `i - n` otherwise, so
/// the Nyquist plane has mode `-n/2`. Physical wave vectors are
/// `(2 pi / L) k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, box_length: f64) -> Result<Self> {
        let g = Grid { d, n, box_length };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d != 2 && self.d != 3 {
            return Err(Error::InvalidGrid(format!("d = {} (expected 2 or 3)", self.d)));
        }
        if self.n < 8 || !self.n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {} (expected a power of two >= 8)",
                self.n
            )));
        }
        if !(self.box_length > 0.0 && self.box_length.is_finite()) {
            return Err(Error::InvalidGrid(format!("box length {}", self.box_length)));
        }
        Ok(())
    }

    /// Total number of grid points (and of Fourier coefficients).
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn wavenumber_unit(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.d as i32)
    }

    /// Largest retained integer mode per axis under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Integer mode for a per-axis index.
    #[inline]
    pub fn axis_mode(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Integer wave vector of a flat index. Unused axes are zero.
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let mut k = [0i64; 3];
        let mut rem = idx;
        for a in (0..self.d).rev() {
            k[a] = self.axis_mode(rem % self.n);
            rem /= self.n;
        }
        k
    }

    /// Flat index of an integer wave vector, if it is representable on a grid
    /// with `m` points per axis (Nyquist excluded).
    pub fn index_on(&self, k: [i64; 3], m: usize) -> Option<usize> {
        let half = (m / 2) as i64;
        let mut idx = 0usize;
        for &ka in k.iter().take(self.d) {
            if ka.abs() >= half {
                return None;
            }
            idx = idx * m + ka.rem_euclid(m as i64) as usize;
        }
        Some(idx)
    }

    pub fn index_of(&self, k: [i64; 3]) -> Option<usize> {
        self.index_on(k, self.n)
    }

    /// Physical coordinates of grid point `idx` on a grid with `m` points per axis.
    pub fn point_on(&self, idx: usize, m: usize) -> [f64; 3] {
        let h = self.box_length / m as f64;
        let mut x = [0.0; 3];
        let mut rem = idx;
        for a in (0..self.d).rev() {
            x[a] = (rem % m) as f64 * h;
            rem /= m;
        }
        x
    }
}

/// Per-mode lookup tables shared by every field on a grid.
#[derive(Debug)]
pub(crate) struct ModeTable {
    pub modes: Vec<[i64; 3]>,
    pub xi: Vec<[f64; 3]>,
    pub xi_norm: Vec<f64>,
    pub nyquist: Vec<bool>,
    pub dealiased: Vec<bool>,
    /// Flat index of `-k` for every `k`.
    pub negated: Vec<usize>,
}

impl ModeTable {
    pub fn new(grid: &Grid) -> Self {
        let len = grid.len();
        let unit = grid.wavenumber_unit();
        let half = (grid.n / 2) as i64;
        let cut = grid.dealias_cutoff();
        let mut modes = Vec::with_capacity(len);
        let mut xi = Vec::with_capacity(len);
        let mut xi_norm = Vec::with_capacity(len);
        let mut nyquist = Vec::with_capacity(len);
        let mut dealiased = Vec::with_capacity(len);
        let mut negated = Vec::with_capacity(len);
        for idx in 0..len {
            let k = grid.mode(idx);
            let w = [k[0] as f64 * unit, k[1] as f64 * unit, k[2] as f64 * unit];
            modes.push(k);
            xi.push(w);
            xi_norm.push((w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt());
            let nyq = k.iter().take(grid.d).any(|&ka| ka == -half);
            nyquist.push(nyq);
            dealiased.push(k.iter().take(grid.d).all(|&ka| ka.abs() <= cut));
            let neg = if nyq {
                idx
            } else {
                grid.index_of([-k[0], -k[1], -k[2]]).expect("negated mode representable")
            };
            negated.push(neg);
        }
        ModeTable {
            modes,
            xi,
            xi_norm,
            nyquist,
            dealiased,
            negated,
        }
    }
}
