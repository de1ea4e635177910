use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Complex samples on a [`Grid`], tagged with the space they live in.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    repr: Representation,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && *self.grid == *other.grid && self.values == other.values
    }
}

impl Field {
    /// Wraps raw values; fails if the length is wrong or any entry is not finite.
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>, repr: Representation) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values, grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        check_finite("field", &values)?;
        Ok(Field { grid, values, repr })
    }

    pub(crate) fn from_parts_unchecked(
        grid: Arc<Grid>,
        values: Vec<Complex64>,
        repr: Representation,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Field { grid, values, repr }
    }

    pub fn zeros(grid: Arc<Grid>, repr: Representation) -> Self {
        let values = vec![Complex64::default(); grid.len()];
        Field { grid, values, repr }
    }

    /// Samples `f(x)` at every grid point; `f` receives the coordinate vector.
    pub fn from_fn(grid: Arc<Grid>, mut f: impl FnMut(&[f64]) -> Complex64) -> Result<Self> {
        let axis = grid.axis_coordinates();
        let n = grid.points_per_axis();
        let dim = grid.dim();
        let mut x = vec![0.0; dim];
        let mut values = Vec::with_capacity(grid.len());
        for flat in 0..grid.len() {
            let mut rem = flat;
            for slot in x.iter_mut().rev() {
                *slot = axis[rem % n];
                rem /= n;
            }
            values.push(f(&x));
        }
        Field::new(grid, values, Representation::Physical)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            repr: self.repr,
        }
    }

    /// `self - other`; both must share grid and representation.
    pub fn difference(&self, other: &Field) -> Result<Field> {
        self.ensure_compatible(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            repr: self.repr,
        })
    }

    pub(crate) fn ensure_compatible(&self, other: &Field) -> Result<()> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::GridMismatch);
        }
        if self.repr != other.repr {
            return Err(Error::RepresentationMismatch {
                expected: self.repr,
                found: other.repr,
            });
        }
        Ok(())
    }

    /// Returns the field in physical space, transforming if needed.
    pub fn to_physical(&self) -> Field {
        match self.repr {
            Representation::Physical => self.clone(),
            Representation::Spectral => {
                let mut out = self.clone();
                inverse_in_place(&self.grid, &mut out.values);
                out.repr = Representation::Physical;
                out
            }
        }
    }

    /// Returns the field in spectral space, transforming if needed.
    pub fn to_spectral(&self) -> Field {
        match self.repr {
            Representation::Spectral => self.clone(),
            Representation::Physical => {
                let mut out = self.clone();
                forward_in_place(&self.grid, &mut out.values);
                out.repr = Representation::Spectral;
                out
            }
        }
    }
}

pub(crate) fn check_finite(what: &'static str, values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}

/// `amplitude * exp(-|x|^2 / 2)` sampled on the grid.
pub fn gaussian_initial(grid: &Arc<Grid>, amplitude: f64) -> Result<Field> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::param(
            "amplitude",
            format!("must be >= 0, got {amplitude}"),
        ));
    }
    let values = grid
        .radius_squared()
        .into_iter()
        .map(|r2| Complex64::new(amplitude * (-0.5 * r2).exp(), 0.0))
        .collect();
    Field::new(grid.clone(), values, Representation::Physical)
}

/// Forward: `û_k = dx^n Σ_j u(x_j) e^{-i k·x_j}`. Inverse is its exact discrete inverse.
pub fn spectral_transform(field: &Field, direction: Direction) -> Result<Field> {
    let expected = match direction {
        Direction::Forward => Representation::Physical,
        Direction::Inverse => Representation::Spectral,
    };
    if field.repr != expected {
        return Err(Error::RepresentationMismatch {
            expected,
            found: field.repr,
        });
    }
    Ok(match direction {
        Direction::Forward => field.to_spectral(),
        Direction::Inverse => field.to_physical(),
    })
}

pub(crate) fn forward_in_place(grid: &Grid, values: &mut [Complex64]) {
    grid.fft_in_place(values, false);
    let scale = grid.cell_volume();
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= scale * grid.origin_parity(flat);
    }
}

pub(crate) fn inverse_in_place(grid: &Grid, values: &mut [Complex64]) {
    let scale = 1.0 / grid.box_volume();
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= scale * grid.origin_parity(flat);
    }
    grid.fft_in_place(values, true);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use proptest::prelude::*;

    fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn gaussian_values() {
        let grid = make_grid(1, 256, 10.0).unwrap();
        let zero = gaussian_initial(&grid, 0.0).unwrap();
        assert!(zero.values().iter().all(|v| *v == Complex64::default()));
        let g = gaussian_initial(&grid, 1.0).unwrap();
        // x = 0 sits at index N/2
        assert_eq!(g.values()[128], Complex64::new(1.0, 0.0));
        assert!(gaussian_initial(&grid, -1.0).is_err());
    }

    #[test]
    fn constant_field_is_pure_dc() {
        for dim in 1..=3 {
            let grid = make_grid(dim, 8, 1.5).unwrap();
            let c = Complex64::new(0.7, -0.2);
            let f = Field::from_fn(grid.clone(), |_| c).unwrap();
            let hat = spectral_transform(&f, Direction::Forward).unwrap();
            let expected = c * grid.box_volume();
            assert!((hat.values()[0] - expected).norm() < 1e-13);
            assert!(hat.values()[1..].iter().all(|v| v.norm() < 1e-13));
        }
    }

    #[test]
    fn single_mode_is_orthogonal() {
        let grid = make_grid(2, 16, 2.0).unwrap();
        let (kx, ky) = (grid.axis_wavenumbers()[3], grid.axis_wavenumbers()[13]);
        let f = Field::from_fn(grid.clone(), |x| {
            Complex64::from_polar(1.0, kx * x[0] + ky * x[1])
        })
        .unwrap();
        let hat = f.to_spectral();
        let target = 3 * 16 + 13;
        for (i, v) in hat.values().iter().enumerate() {
            if i == target {
                assert!((v.norm() - grid.box_volume()).abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12, "leak at {i}: {v}");
            }
        }
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let grid = make_grid(1, 8, 1.0).unwrap();
        let f = Field::zeros(grid, Representation::Spectral);
        assert!(matches!(
            spectral_transform(&f, Direction::Forward),
            Err(Error::RepresentationMismatch { .. })
        ));
        let g = f.to_physical();
        assert!(spectral_transform(&g, Direction::Inverse).is_err());
    }

    #[test]
    fn non_finite_values_rejected() {
        let grid = make_grid(1, 8, 1.0).unwrap();
        let mut v = vec![Complex64::default(); 8];
        v[5] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            Field::new(grid, v, Representation::Physical),
            Err(Error::NonFinite { index: 5, .. })
        ));
    }

    proptest! {
        #[test]
        fn transform_roundtrip(
            dim in 1usize..=3,
            exp in 2u32..=4,
            seed in proptest::collection::vec(-1.0f64..1.0, 128),
        ) {
            let n = 1usize << exp;
            let grid = make_grid(dim, n, 3.0).unwrap();
            let vals: Vec<Complex64> = (0..grid.len())
                .map(|i| Complex64::new(seed[i % 128], seed[(7 * i + 3) % 128]))
                .collect();
            let f = Field::new(grid, vals, Representation::Physical).unwrap();
            let back = spectral_transform(&spectral_transform(&f, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
            prop_assert!(rel_diff(back.values(), f.values()) < 1e-13);
        }
    }
}
