//! Dyadic Littlewood-Paley filters sampled on the grid modes.

use super::grid::{Grid, ModeTable};
use crate::error::{Error, Result};

/// Transition profile: 1 on `r <= 1`, 0 on `r >= 2`, and the C^3 septic
/// smoothstep `1 - (35 s^4 - 84 s^5 + 70 s^6 - 20 s^7)`, `s = r - 1`, between.
pub fn theta(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let s = r - 1.0;
        let s4 = s * s * s * s;
        1.0 - s4 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)))
    }
}

/// `phi_j(xi) = theta(2^-j |xi|) - theta(2^(1-j) |xi|)`, supported in
/// `2^(j-1) <= |xi| <= 2^(j+1)`.
pub fn filter_value(j: i32, xi_norm: f64) -> f64 {
    theta(xi_norm * 2f64.powi(-j)) - theta(xi_norm * 2f64.powi(1 - j))
}

#[derive(Debug, Clone)]
pub struct Shell {
    pub j: i32,
    /// `(flat index, filter weight)` for every mode with nonzero weight.
    pub entries: Vec<(usize, f64)>,
}

/// The family `{phi_j}` for `j_min <= j <= j_max`. The mean mode belongs to
/// its own channel and never to a shell.
#[derive(Debug, Clone)]
pub struct LpFilterBank {
    j_min: i32,
    j_max: i32,
    shells: Vec<Shell>,
}

impl LpFilterBank {
    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn js(&self) -> impl Iterator<Item = i32> + Clone {
        self.j_min..=self.j_max
    }

    pub fn len(&self) -> usize {
        self.shells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shells.is_empty()
    }

    pub fn contains(&self, j: i32) -> bool {
        j >= self.j_min && j <= self.j_max
    }

    pub fn check(&self, j: i32) -> Result<()> {
        if self.contains(j) {
            Ok(())
        } else {
            Err(Error::BlockOutOfRange {
                j,
                j_min: self.j_min,
                j_max: self.j_max,
            })
        }
    }

    pub fn shell(&self, j: i32) -> Result<&Shell> {
        self.check(j)?;
        Ok(&self.shells[(j - self.j_min) as usize])
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    /// Always true: the mean mode is isolated in its own channel.
    pub fn mean_channel(&self) -> bool {
        true
    }
}

/// Builds the bank covering every resolvable nonzero mode of `grid`.
pub fn build_filter_bank(grid: &Grid) -> Result<LpFilterBank> {
    grid.validate()?;
    let unit = grid.wavenumber_unit();
    let kmax = (grid.n / 2 - 1) as f64;
    let xi_min = unit;
    let xi_max = unit * kmax * (grid.d as f64).sqrt();
    let mut j_min = xi_min.log2().floor() as i32;
    while 2f64.powi(j_min) > xi_min {
        j_min -= 1;
    }
    while 2f64.powi(j_min + 1) <= xi_min {
        j_min += 1;
    }
    let mut j_max = xi_max.log2().ceil() as i32;
    while 2f64.powi(j_max) < xi_max {
        j_max += 1;
    }
    bank_with_range(grid, j_min, j_max)
}

/// Builds a bank with an explicit dyadic range.
pub fn bank_with_range(grid: &Grid, j_min: i32, j_max: i32) -> Result<LpFilterBank> {
    if j_max < j_min + 2 {
        return Err(Error::InvalidGrid(format!(
            "filter bank needs at least 3 dyadic shells, got [{j_min}, {j_max}]"
        )));
    }
    let table = ModeTable::new(grid);
    Ok(bank_from_table(&table, j_min, j_max))
}

pub(crate) fn bank_from_table(table: &ModeTable, j_min: i32, j_max: i32) -> LpFilterBank {
    let mut shells: Vec<Shell> = (j_min..=j_max)
        .map(|j| Shell {
            j,
            entries: Vec::new(),
        })
        .collect();
    for (idx, &r) in table.xi_norm.iter().enumerate() {
        if r == 0.0 || table.nyquist[idx] {
            continue;
        }
        let lo = ((r.log2().floor() as i32) - 1).max(j_min);
        let hi = ((r.log2().ceil() as i32) + 1).min(j_max);
        for j in lo..=hi {
            let w = filter_value(j, r);
            if w > 0.0 {
                shells[(j - j_min) as usize].entries.push((idx, w));
            }
        }
    }
    LpFilterBank {
        j_min,
        j_max,
        shells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn theta_profile_endpoints_and_monotone() {
        assert_eq!(theta(0.3), 1.0);
        assert_eq!(theta(1.0), 1.0);
        assert_eq!(theta(2.0), 0.0);
        assert_eq!(theta(7.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = theta(1.0 + i as f64 / 1000.0);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
        // continuous at r = 2
        assert!(theta(2.0 - 1e-12).abs() < 1e-9);
    }

    #[test]
    fn n64_bank_range_and_telescoping() {
        let g = Grid::new(2, 64, 2.0 * PI).unwrap();
        let bank = build_filter_bank(&g).unwrap();
        assert!(bank.j_min() <= 0 && bank.j_max() >= 4);
        for k in 2..=16 {
            let r = k as f64;
            let sum: f64 = bank.js().map(|j| filter_value(j, r)).sum();
            assert!((sum - 1.0).abs() < 1e-15, "|k| = {k}: {sum}");
        }
    }

    #[test]
    fn mean_excluded_from_every_shell() {
        for j in -3..8 {
            assert_eq!(filter_value(j, 0.0), 0.0);
        }
    }

    #[test]
    fn radius_three_hits_only_shells_one_and_two() {
        for j in -2..8 {
            let w = filter_value(j, 3.0);
            if j == 1 || j == 2 {
                assert!(w > 0.0);
            } else {
                assert_eq!(w, 0.0, "j = {j}");
            }
        }
    }

    #[test]
    fn explicit_range_too_small_is_rejected() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        assert!(bank_with_range(&g, 0, 1).is_err());
        assert!(bank_with_range(&g, 0, 2).is_ok());
    }
}
