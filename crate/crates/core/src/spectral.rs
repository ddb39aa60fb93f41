//! Dirichlet sine eigenbasis of `-d²/dx²` on `(0, L)`.
//!
//! Eigenfunctions are normalised in `L²`: `e_j(x) = sqrt(2/L) sin(jπx/L)` with
//! eigenvalue `λ_j = (jπ/L)²`. Physical-space values live on the interior grid
//! `x_k = kL/(Q+1)`, `k = 1..=Q`, where the sine functions are discretely
//! orthogonal with quadrature weight `L/(Q+1)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mode coefficients `γ_j` of `u = Σ γ_j e_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralState<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> SpectralState<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); modes],
        }
    }

    /// The `j`-th eigenfunction (1-based), scaled by `amplitude`.
    pub fn mode(modes: usize, j: usize, amplitude: T) -> Self {
        assert!(j >= 1 && j <= modes, "mode index {j} outside 1..={modes}");
        let mut s = Self::zeros(modes);
        s.coeffs[j - 1] = amplitude;
        s
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ γ_j²`, the squared `H` norm.
    pub fn norm_sq(&self) -> T {
        self.coeffs.iter().map(|&g| g * g).sum()
    }

    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.len(), other.len());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    pub fn add_scaled(&self, other: &Self, scale: T) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + scale * b)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|g| g.is_finite())
    }
}

/// Values of a function at the interior grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Squared `H` and `V` norms of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevNorms<T> {
    /// `‖u‖² = Σ γ_j²`
    pub h_sq: T,
    /// `‖u‖_V² = Σ λ_j γ_j²`
    pub v_sq: T,
}

#[derive(Debug, Clone)]
pub struct Basis<T> {
    length: T,
    modes: usize,
    grid: usize,
    eigenvalues: Vec<T>,
    // row-major `grid × modes`, entry (k, j) = e_{j+1}(x_{k+1})
    table: Vec<T>,
    weight: T,
}

impl<T: Scalar> Basis<T> {
    /// Builds the first `modes` eigenpairs with a `grid`-point quadrature.
    pub fn new(length: T, modes: usize, grid: usize) -> Result<Self> {
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidConfiguration(format!(
                "domain length must be positive and finite, got {length}"
            )));
        }
        if modes == 0 {
            return Err(Error::InvalidConfiguration(
                "mode count must be at least 1".into(),
            ));
        }
        if grid < 2 * modes {
            return Err(Error::InvalidConfiguration(format!(
                "grid size {grid} must be at least twice the mode count {modes}"
            )));
        }
        let pi = T::PI();
        let eigenvalues = (1..=modes)
            .map(|j| {
                let k = T::count(j) * pi / length;
                k * k
            })
            .collect();
        let amp = (T::lit(2.0) / length).sqrt();
        let denom = T::count(grid + 1);
        let mut table = Vec::with_capacity(grid * modes);
        for k in 1..=grid {
            for j in 1..=modes {
                // reduce j*k mod 2(Q+1) so the sine argument stays in [0, 2π)
                let phase = (j * k) % (2 * (grid + 1));
                table.push(amp * (pi * T::count(phase) / denom).sin());
            }
        }
        Ok(Self {
            length,
            modes,
            grid,
            eigenvalues,
            table,
            weight: length / denom,
        })
    }

    /// Basis with the default quadrature `Q = 4N`.
    pub fn with_default_grid(length: T, modes: usize) -> Result<Self> {
        Self::new(length, modes, 4 * modes)
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `λ_1 = (π/L)²`, the Poincaré constant.
    pub fn first_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// Quadrature weight `L/(Q+1)`.
    pub fn weight(&self) -> T {
        self.weight
    }

    /// Interior node `x_k`, `k = 1..=Q`.
    pub fn node(&self, k: usize) -> T {
        T::count(k) * self.length / T::count(self.grid + 1)
    }

    /// `e_j(x)` for 1-based `j`.
    pub fn eigenfunction(&self, j: usize, x: T) -> T {
        (T::lit(2.0) / self.length).sqrt() * (T::count(j) * T::PI() * x / self.length).sin()
    }

    fn check_state(&self, len: usize) -> Result<()> {
        if len != self.modes {
            return Err(Error::Dimension {
                expected: self.modes,
                found: len,
            });
        }
        Ok(())
    }

    /// Grid values `u(x_k) = Σ_j γ_j e_j(x_k)`.
    pub fn synthesize(&self, state: &SpectralState<T>) -> Result<GridFunction<T>> {
        self.check_state(state.len())?;
        let values = self
            .table
            .chunks_exact(self.modes)
            .map(|row| row.iter().zip(state.coeffs()).map(|(&e, &g)| e * g).sum())
            .collect();
        Ok(GridFunction::new(values))
    }

    /// Discrete `L²` projection onto the first `N` modes:
    /// `γ_j = L/(Q+1) Σ_k g(x_k) e_j(x_k)`.
    pub fn analyze(&self, g: &GridFunction<T>) -> Result<SpectralState<T>> {
        if g.values().len() != self.grid {
            return Err(Error::Dimension {
                expected: self.grid,
                found: g.values().len(),
            });
        }
        let mut coeffs = vec![T::zero(); self.modes];
        for (row, &v) in self.table.chunks_exact(self.modes).zip(g.values()) {
            for (c, &e) in coeffs.iter_mut().zip(row) {
                *c = *c + v * e;
            }
        }
        for c in &mut coeffs {
            *c = *c * self.weight;
        }
        Ok(SpectralState::new(coeffs))
    }

    /// Quadrature approximation of `∫ g²`.
    pub fn grid_norm_sq(&self, g: &GridFunction<T>) -> T {
        self.weight * g.values().iter().map(|&v| v * v).sum::<T>()
    }

    /// Quadrature approximation of `∫ g₁ g₂`.
    pub fn grid_dot(&self, a: &GridFunction<T>, b: &GridFunction<T>) -> T {
        self.weight
            * a.values()
                .iter()
                .zip(b.values())
                .map(|(&x, &y)| x * y)
                .sum::<T>()
    }

    pub fn sobolev_norms(&self, state: &SpectralState<T>) -> SobolevNorms<T> {
        assert_eq!(state.len(), self.modes, "state/basis dimension mismatch");
        let mut h_sq = T::zero();
        let mut v_sq = T::zero();
        for (&g, &l) in state.coeffs().iter().zip(&self.eigenvalues) {
            h_sq = h_sq + g * g;
            v_sq = v_sq + l * g * g;
        }
        SobolevNorms { h_sq, v_sq }
    }

    /// `‖Δu‖² = Σ λ_j² γ_j²`.
    pub fn laplacian_norm_sq(&self, state: &SpectralState<T>) -> T {
        assert_eq!(state.len(), self.modes, "state/basis dimension mismatch");
        state
            .coeffs()
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&g, &l)| l * l * g * g)
            .sum()
    }

    /// `V*` norm squared of the functional with Riesz coefficients `w`:
    /// `Σ w_j² / λ_j`.
    pub fn dual_norm_sq(&self, w: &[T]) -> T {
        assert_eq!(w.len(), self.modes, "functional/basis dimension mismatch");
        w.iter()
            .zip(&self.eigenvalues)
            .map(|(&c, &l)| c * c / l)
            .sum()
    }

    /// `Σ λ_j a_j b_j = (∇u, ∇v)`.
    pub fn v_dot(&self, a: &SpectralState<T>, b: &SpectralState<T>) -> T {
        assert_eq!(a.len(), self.modes);
        assert_eq!(b.len(), self.modes);
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .zip(&self.eigenvalues)
            .map(|((&x, &y), &l)| l * x * y)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn eigenvalues_on_unit_domains() {
        let b = Basis::new(PI, 3, 8).unwrap();
        for (l, want) in b.eigenvalues().iter().zip([1.0, 4.0, 9.0]) {
            assert!((l - want).abs() < 1e-14);
        }
        let b = Basis::new(2.0 * PI, 2, 4).unwrap();
        assert!((b.eigenvalues()[0] - 0.25).abs() < 1e-15);
        assert!((b.eigenvalues()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_configurations() {
        assert!(matches!(
            Basis::new(PI, 0, 4),
            Err(Error::InvalidConfiguration(_))
        ));
        assert!(matches!(
            Basis::new(PI, 3, 5),
            Err(Error::InvalidConfiguration(_))
        ));
        assert!(Basis::new(-1.0, 3, 8).is_err());
    }

    #[test]
    fn first_mode_synthesis() {
        let b = Basis::new(PI, 3, 12).unwrap();
        let g = b
            .synthesize(&SpectralState::new(vec![1.0, 0.0, 0.0]))
            .unwrap();
        for (k, v) in g.values().iter().enumerate() {
            let x = b.node(k + 1);
            assert!((v - (2.0 / PI).sqrt() * x.sin()).abs() < 1e-14);
        }
        let z = b.synthesize(&SpectralState::zeros(3)).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn round_trip() {
        let b = Basis::new(1.7, 5, 10).unwrap();
        let s = SpectralState::new(vec![0.3f64, -1.2, 2.0, 0.0, 5.5]);
        let back = b.analyze(&b.synthesize(&s).unwrap()).unwrap();
        for (x, y) in s.coeffs().iter().zip(back.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * 5.5);
        }
    }

    #[test]
    fn dimension_errors() {
        let b = Basis::new(PI, 3, 8).unwrap();
        assert_eq!(
            b.synthesize(&SpectralState::zeros(2)),
            Err(Error::Dimension {
                expected: 3,
                found: 2
            })
        );
        assert!(b.analyze(&GridFunction::new(vec![0.0; 7])).is_err());
    }

    #[test]
    fn norms() {
        let b = Basis::new(PI, 3, 8).unwrap();
        let n = b.sobolev_norms(&SpectralState::new(vec![1.0, 0.0, 0.0]));
        assert!((n.h_sq - 1.0).abs() < 1e-14 && (n.v_sq - 1.0).abs() < 1e-14);
        let b2 = Basis::new(PI, 2, 4).unwrap();
        let n = b2.sobolev_norms(&SpectralState::new(vec![1.0, 1.0]));
        assert!((n.h_sq - 2.0).abs() < 1e-14 && (n.v_sq - 5.0).abs() < 1e-13);
        let n = b2.sobolev_norms(&SpectralState::zeros(2));
        assert_eq!((n.h_sq, n.v_sq), (0.0, 0.0));
    }

    #[test]
    fn dual_norm() {
        let b = Basis::new(PI, 2, 4).unwrap();
        assert!((b.dual_norm_sq(&[2.0, 0.0]) - 4.0).abs() < 1e-13);
        assert!((b.dual_norm_sq(&[0.0, 2.0]) - 1.0).abs() < 1e-13);
        assert_eq!(b.dual_norm_sq(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn works_in_single_precision() {
        let b = Basis::<f32>::new(std::f32::consts::PI, 4, 16).unwrap();
        let s = SpectralState::new(vec![1.0f32, -0.5, 0.25, 2.0]);
        let back = b.analyze(&b.synthesize(&s).unwrap()).unwrap();
        for (x, y) in s.coeffs().iter().zip(back.coeffs()) {
            assert!((x - y).abs() < 1e-5);
        }
    }
}
