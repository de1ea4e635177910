use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Default cap on the total number of grid points (2^24, about 256 MiB per
/// complex field pair).
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;

pub const MIN_POINTS_PER_AXIS: usize = 4;

/// Periodic uniform tensor grid on `[-L, L)^n`.
///
/// Spectral arrays are stored in FFT order along every axis: index `i`
/// carries the integer offset `m = i` for `i < N/2` and `m = i - N` otherwise,
/// so the Nyquist offset `-N/2` sits on the negative side. Multi-dimensional
/// arrays are row-major with the last axis fastest.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
    spacing: f64,
    axis_wavenumbers: Vec<f64>,
    k_squared: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points_per_axis", &self.points_per_axis)
            .field("half_width", &self.half_width)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.points_per_axis == other.points_per_axis
            && self.half_width == other.half_width
    }
}

/// Builds a grid with the default memory cap.
pub fn make_grid(dim: usize, points_per_axis: usize, half_width: f64) -> Result<Arc<Grid>> {
    Grid::new(dim, points_per_axis, half_width, DEFAULT_MAX_POINTS)
}

impl Grid {
    pub fn new(
        dim: usize,
        points_per_axis: usize,
        half_width: f64,
        max_points: usize,
    ) -> Result<Arc<Grid>> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if points_per_axis % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even, got {points_per_axis}"
            )));
        }
        if points_per_axis < MIN_POINTS_PER_AXIS {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be at least {MIN_POINTS_PER_AXIS}, got {points_per_axis}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        let total = points_per_axis
            .checked_pow(dim as u32)
            .ok_or(Error::GridTooLarge {
                points: usize::MAX,
                cap: max_points,
            })?;
        if total > max_points {
            return Err(Error::GridTooLarge {
                points: total,
                cap: max_points,
            });
        }

        let n = points_per_axis;
        let dk = PI / half_width;
        let axis_wavenumbers: Vec<f64> = (0..n).map(|i| dk * mode_offset(i, n) as f64).collect();
        let axis_k2: Vec<f64> = axis_wavenumbers.iter().map(|k| k * k).collect();
        let mut k_squared = vec![0.0; total];
        for (flat, slot) in k_squared.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0.0;
            for _ in 0..dim {
                acc += axis_k2[rem % n];
                rem /= n;
            }
            *slot = acc;
        }

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        Ok(Arc::new(Grid {
            dim,
            points_per_axis: n,
            half_width,
            spacing: 2.0 * half_width / n as f64,
            axis_wavenumbers,
            k_squared,
            forward,
            inverse,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of points, `N^n`.
    pub fn len(&self) -> usize {
        self.k_squared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_squared.is_empty()
    }

    /// Volume element `dx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Box volume `(2L)^n`.
    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    /// Wavenumbers along one axis, in FFT storage order.
    pub fn axis_wavenumbers(&self) -> &[f64] {
        &self.axis_wavenumbers
    }

    /// `|k|^2` for every spectral index, in storage order.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_squared
    }

    /// Coordinates of grid point `x_j = -L + j dx` along one axis.
    pub fn axis_coordinates(&self) -> Vec<f64> {
        (0..self.points_per_axis)
            .map(|j| -self.half_width + j as f64 * self.spacing)
            .collect()
    }

    /// `|x|^2` at every physical point, row-major.
    pub fn radius_squared(&self) -> Vec<f64> {
        let x2: Vec<f64> = self.axis_coordinates().iter().map(|x| x * x).collect();
        let n = self.points_per_axis;
        (0..self.len())
            .map(|flat| {
                let mut rem = flat;
                let mut acc = 0.0;
                for _ in 0..self.dim {
                    acc += x2[rem % n];
                    rem /= n;
                }
                acc
            })
            .collect()
    }

    /// Integer lattice offsets of a spectral index, one per axis (outermost first).
    pub fn mode_offsets(&self, flat: usize) -> Vec<i64> {
        let n = self.points_per_axis;
        let mut out = vec![0; self.dim];
        let mut rem = flat;
        for slot in out.iter_mut().rev() {
            *slot = mode_offset(rem % n, n);
            rem /= n;
        }
        out
    }

    /// Unnormalized multi-dimensional DFT in place.
    pub(crate) fn fft_in_place(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let plan = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let n = self.points_per_axis;
        let total = self.len();
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        // Last axis is contiguous.
        plan.process_with_scratch(data, &mut scratch);
        if self.dim == 1 {
            return;
        }
        let mut lane = vec![Complex64::default(); n];
        let mut stride = n;
        for _ in 1..self.dim {
            let block = stride * n;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    for (i, v) in lane.iter_mut().enumerate() {
                        *v = data[base + offset + i * stride];
                    }
                    plan.process_with_scratch(&mut lane, &mut scratch);
                    for (i, v) in lane.iter().enumerate() {
                        data[base + offset + i * stride] = *v;
                    }
                }
            }
            stride = block;
        }
    }

    /// Parity `(-1)^(m_1 + ... + m_n)` of a spectral index. Equals the phase
    /// `exp(i k·L)` picked up from the grid origin at `-L`.
    pub(crate) fn origin_parity(&self, flat: usize) -> f64 {
        let n = self.points_per_axis;
        let mut rem = flat;
        let mut sum = 0usize;
        for _ in 0..self.dim {
            sum += rem % n;
            rem /= n;
        }
        if sum % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn mode_offset(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_lattice() {
        let grid = make_grid(1, 8, PI).unwrap();
        assert!((grid.spacing() - PI / 4.0).abs() < 1e-15);
        let mut ks: Vec<f64> = grid.axis_wavenumbers().to_vec();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_dimensional_lattice() {
        let grid = make_grid(2, 4, 1.0).unwrap();
        assert_eq!(grid.len(), 16);
        let mut ks = grid.axis_wavenumbers().to_vec();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![-2.0 * PI, -PI, 0.0, PI]);
        assert_eq!(grid.mode_offsets(4 + 3), vec![1, -1]);
        assert_eq!(grid.k_squared()[4 + 3], 2.0 * PI * PI);
    }

    #[test]
    fn spacing_times_points_is_box_width() {
        for &(n, l) in &[(8usize, 1.0), (256, 10.0), (64, 7.3)] {
            let grid = make_grid(1, n, l).unwrap();
            assert!((grid.spacing() * n as f64 - 2.0 * l).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(make_grid(1, 2, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(1, 7, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(1, 8, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(4, 8, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(
            Grid::new(3, 64, 1.0, 1000),
            Err(Error::GridTooLarge { points: 262144, .. })
        ));
    }

    #[test]
    fn grid_is_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Grid>();
    }
}
