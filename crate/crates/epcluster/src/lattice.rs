//! One-dimensional non-Hermitian tight-binding lattices.
//!
//! A lattice of `N` sites carries a forward hopping amplitude `t_n` on the
//! bond leaving site `n` toward `n+1`, a backward amplitude `t'_n` on the
//! same bond in the opposite direction, and an on-site gain/loss strength
//! `γ_n` that enters the Hamiltonian as `i·γ_n` on the diagonal:
//!
//! ```text
//! H[n][n+1] = t_n      H[n+1][n] = t'_n      H[n][n] = i γ_n
//! ```
//!
//! Sites and profile entries are 1-based in documentation and output files;
//! in-memory storage is 0-based. With ring boundaries the closing bond uses
//! the N-th entries of both hopping profiles: `H[N][1] = t_N`, `H[1][N] = t'_N`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmatrix::CMat;
use crate::real::Real;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("n_sites must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("{field} has length {got}, expected n_sites = {expected}")]
    LengthMismatch {
        field: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("sin_squared profile requires a nonzero divisor")]
    ZeroDivisor,
    #[error("lattice parameters must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Ring,
}

/// Full parametrization of a lattice: three length-`N` real profiles plus
/// the boundary condition. With open boundaries the N-th entries of both
/// hopping profiles are ignored (treated as zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSpec<T> {
    pub n_sites: usize,
    pub forward_hops: Vec<T>,
    pub backward_hops: Vec<T>,
    pub gain_loss: Vec<T>,
    pub boundary: Boundary,
}

impl<T: Real> LatticeSpec<T> {
    /// Uniform-hopping lattice, the most common starting point in tests.
    pub fn uniform(n: usize, t: T, t_back: T, gamma: T, boundary: Boundary) -> Self {
        Self {
            n_sites: n,
            forward_hops: profile_uniform(n, t),
            backward_hops: profile_uniform(n, t_back),
            gain_loss: profile_uniform(n, gamma),
            boundary,
        }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.n_sites < 2 {
            return Err(LatticeError::TooSmall(self.n_sites));
        }
        for (field, arr) in [
            ("forward_hops", &self.forward_hops),
            ("backward_hops", &self.backward_hops),
            ("gain_loss", &self.gain_loss),
        ] {
            if arr.len() != self.n_sites {
                return Err(LatticeError::LengthMismatch {
                    field,
                    got: arr.len(),
                    expected: self.n_sites,
                });
            }
            if arr.iter().any(|x| !x.is_finite()) {
                return Err(LatticeError::NonFinite);
            }
        }
        Ok(())
    }
}

/// Dense `N×N` complex Hamiltonian matrix. Tridiagonal except for the two
/// corner entries of a ring; the diagonal is purely imaginary (`i·γ_n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T> {
    mat: CMat<T>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// 0-based entry access.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.mat[(i, j)]
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn from_matrix(mat: CMat<T>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.frobenius_norm()
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.mat.matvec(x)
    }

    pub fn trace(&self) -> Complex<T> {
        let mut tr = Complex::new(T::zero(), T::zero());
        for i in 0..self.dim() {
            tr += self.mat[(i, i)];
        }
        tr
    }
}

/// Assemble the Hamiltonian matrix from a lattice specification.
pub fn build_hamiltonian<T: Real>(spec: &LatticeSpec<T>) -> Result<Hamiltonian<T>, LatticeError> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut mat = CMat::zeros(n, n);
    for i in 0..n - 1 {
        mat[(i, i + 1)] = Complex::new(spec.forward_hops[i], T::zero());
        mat[(i + 1, i)] = Complex::new(spec.backward_hops[i], T::zero());
    }
    for i in 0..n {
        mat[(i, i)] = Complex::new(T::zero(), spec.gain_loss[i]);
    }
    if spec.boundary == Boundary::Ring {
        mat[(n - 1, 0)] = Complex::new(spec.forward_hops[n - 1], T::zero());
        mat[(0, n - 1)] = Complex::new(spec.backward_hops[n - 1], T::zero());
    }
    Ok(Hamiltonian { mat })
}

// ── named parameter profiles ────────────────────────────────────────

/// Constant profile: `n` copies of `value`.
pub fn profile_uniform<T: Real>(n: usize, value: T) -> Vec<T> {
    vec![value; n]
}

/// `offset + sin²(m / divisor)` at 1-based entry `m`, in radians.
pub fn profile_sin_squared<T: Real>(n: usize, offset: T, divisor: T) -> Result<Vec<T>, LatticeError> {
    if divisor == T::zero() {
        return Err(LatticeError::ZeroDivisor);
    }
    Ok((1..=n)
        .map(|m| {
            let s = (T::from_f64(m as f64) / divisor).sin();
            offset + s * s
        })
        .collect())
}

/// Staggered gain/loss: `(-1)^m · gamma` at 1-based entry `m`.
pub fn profile_staggered<T: Real>(n: usize, gamma: T) -> Vec<T> {
    (1..=n)
        .map(|m| if m % 2 == 0 { gamma } else { -gamma })
        .collect()
}

// ── JSON-facing configuration ───────────────────────────────────────

/// Profile description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile<T> {
    Uniform { value: T },
    SinSquared { offset: T, divisor: T },
    Staggered { gamma: T },
}

impl<T: Real> Profile<T> {
    pub fn materialize(&self, n: usize) -> Result<Vec<T>, LatticeError> {
        match *self {
            Profile::Uniform { value } => Ok(profile_uniform(n, value)),
            Profile::SinSquared { offset, divisor } => profile_sin_squared(n, offset, divisor),
            Profile::Staggered { gamma } => Ok(profile_staggered(n, gamma)),
        }
    }
}

/// A per-site array in a configuration file: either explicit values or a
/// named profile object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SiteArray<T> {
    Profile(Profile<T>),
    Explicit(Vec<T>),
}

impl<T: Real> SiteArray<T> {
    pub fn materialize(&self, n: usize) -> Result<Vec<T>, LatticeError> {
        match self {
            SiteArray::Explicit(values) => Ok(values.clone()),
            SiteArray::Profile(p) => p.materialize(n),
        }
    }
}

/// JSON document describing a lattice. `materialize` expands profiles into
/// the explicit arrays of a [`LatticeSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig<T> {
    pub n_sites: usize,
    pub boundary: Boundary,
    pub forward_hops: SiteArray<T>,
    pub backward_hops: SiteArray<T>,
    pub gain_loss: SiteArray<T>,
}

impl<T: Real> LatticeConfig<T> {
    pub fn materialize(&self) -> Result<LatticeSpec<T>, LatticeError> {
        let spec = LatticeSpec {
            n_sites: self.n_sites,
            forward_hops: self.forward_hops.materialize(self.n_sites)?,
            backward_hops: self.backward_hops.materialize(self.n_sites)?,
            gain_loss: self.gain_loss.materialize(self.n_sites)?,
            boundary: self.boundary,
        };
        spec.validate()?;
        Ok(spec)
    }
}
