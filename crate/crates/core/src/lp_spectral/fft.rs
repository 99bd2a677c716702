//! N-dimensional complex FFTs over row-major cubes, plus the padding maps
//! between the native grid and the oversampled evaluation grids.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::grid::Grid;

/// Plans and index maps for one evaluation size `m`.
pub(crate) struct PadPlan {
    pub m: usize,
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
    /// Native flat index -> flat index on the `m` grid (`usize::MAX` for Nyquist).
    pub map: Vec<usize>,
}

impl PadPlan {
    pub fn points(&self, d: usize) -> usize {
        self.m.pow(d as u32)
    }
}

pub(crate) struct FftCache {
    planner: Mutex<FftPlanner<f64>>,
    plans: Mutex<HashMap<usize, Arc<PadPlan>>>,
}

impl FftCache {
    pub fn new() -> Self {
        FftCache {
            planner: Mutex::new(FftPlanner::new()),
            plans: Mutex::new(HashMap::new()),
        }
    }

    pub fn plan(&self, grid: &Grid, m: usize) -> Arc<PadPlan> {
        if let Some(p) = self.plans.lock().unwrap().get(&m) {
            return p.clone();
        }
        let (forward, inverse) = {
            let mut planner = self.planner.lock().unwrap();
            (planner.plan_fft_forward(m), planner.plan_fft_inverse(m))
        };
        let map = (0..grid.len())
            .map(|idx| grid.index_on(grid.mode(idx), m).unwrap_or(usize::MAX))
            .collect();
        let plan = Arc::new(PadPlan {
            m,
            forward,
            inverse,
            map,
        });
        self.plans.lock().unwrap().insert(m, plan.clone());
        plan
    }
}

/// In-place unnormalized transform of a `[m; d]` cube along every axis.
pub(crate) fn transform(data: &mut [Complex64], m: usize, d: usize, fft: &Arc<dyn Fft<f64>>) {
    debug_assert_eq!(data.len(), m.pow(d as u32));
    for axis in 0..d {
        transform_axis(data, m, d, axis, fft);
    }
}

const LINES_PER_TASK: usize = 32;

fn transform_axis(data: &mut [Complex64], m: usize, d: usize, axis: usize, fft: &Arc<dyn Fft<f64>>) {
    if axis == d - 1 {
        data.par_chunks_mut(m * LINES_PER_TASK)
            .for_each(|chunk| fft.process(chunk));
        return;
    }
    // Lines along `axis` have stride `s`; each block of `m * s` holds `s`
    // interleaved lines. Transpose blocks so lines become contiguous.
    let s = m.pow((d - 1 - axis) as u32);
    let block = m * s;
    data.par_chunks_mut(block).for_each(|blk| {
        let mut buf = vec![Complex64::default(); block];
        for t in 0..m {
            let row = &blk[t * s..(t + 1) * s];
            for (inner, v) in row.iter().enumerate() {
                buf[inner * m + t] = *v;
            }
        }
        fft.process(&mut buf);
        for t in 0..m {
            let row = &mut blk[t * s..(t + 1) * s];
            for (inner, v) in row.iter_mut().enumerate() {
                *v = buf[inner * m + t];
            }
        }
    });
}
