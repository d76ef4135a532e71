//! Pairwise eigenstate fidelities and the fidelity feature space.
//!
//! The fidelity of two states is their normalized squared overlap
//!
//! ```text
//! F(v, w) = |⟨v|w⟩|² / (⟨v|v⟩ ⟨w|w⟩)
//! ```
//!
//! which is 0 for orthogonal states, approaches 1 for indistinguishable
//! ones, and is invariant under rescaling and phase rotation of either
//! argument. A nearly-orthogonal subset of eigenstates (the reference set)
//! spans a feature space: state `n` is described by the vector of its
//! fidelities against each reference.

use num_complex::Complex;
use thiserror::Error;

use crate::cmatrix::dot;
use crate::eigen::Spectrum;
use crate::io::fmt_real;
use crate::real::Real;

#[derive(Debug, Error)]
pub enum FidelityError {
    #[error("fidelity of a zero vector is undefined")]
    ZeroVector,
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("reference index {index} out of range for {dim} states")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("reference set must be nonempty")]
    EmptyReferences,
}

/// Default orthogonality threshold for reference selection.
pub fn default_epsilon<T: Real>() -> T {
    T::from_f64(0.05)
}

/// Fidelity of two nonzero complex vectors.
pub fn fidelity<T: Real>(v: &[Complex<T>], w: &[Complex<T>]) -> Result<T, FidelityError> {
    if v.len() != w.len() {
        return Err(FidelityError::LengthMismatch(v.len(), w.len()));
    }
    let vv = dot(v, v).re;
    let ww = dot(w, w).re;
    if vv == T::zero() || ww == T::zero() {
        return Err(FidelityError::ZeroVector);
    }
    Ok(dot(v, w).norm_sqr() / (vv * ww))
}

/// Symmetric matrix of all pairwise eigenstate fidelities, unit diagonal.
/// Each unordered pair is computed once and mirrored, so `F[n][m]` and
/// `F[m][n]` are the same float.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityMatrix<T> {
    dim: usize,
    values: Vec<T>,
}

impl<T: Real> FidelityMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 0-based entry access.
    pub fn get(&self, n: usize, m: usize) -> T {
        self.values[n * self.dim + m]
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "not square");
        Self {
            dim,
            values: rows.iter().flatten().copied().collect(),
        }
    }

    /// Largest off-diagonal entry (0 for a 1×1 matrix).
    pub fn max_offdiagonal(&self) -> T {
        let mut max = T::zero();
        for n in 0..self.dim {
            for m in n + 1..self.dim {
                max = max.max(self.get(n, m));
            }
        }
        max
    }

    /// CSV rendering: `dim` rows × `dim` columns under a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.dim).map(|m| format!("state_{m}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for n in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|m| fmt_real(self.get(n, m))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// All `N(N−1)/2` fidelities between sorted eigenstates.
pub fn fidelity_matrix<T: Real>(s: &Spectrum<T>) -> FidelityMatrix<T> {
    let n = s.dim;
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        values[i * n + i] = T::one();
    }
    for i in 0..n {
        for j in i + 1..n {
            // Eigenvectors are unit norm but we keep the full normalized
            // form; fidelity must not depend on that convention.
            let f = fidelity(&s.eigenvectors[i], &s.eigenvectors[j])
                .expect("spectrum eigenvectors are nonzero");
            values[i * n + j] = f;
            values[j * n + i] = f;
        }
    }
    FidelityMatrix { dim: n, values }
}

/// The `N(N−1)/2` entries `F[n][m]` with `n < m` in lexicographic `(n, m)`
/// order.
pub fn offdiagonal_set<T: Real>(f: &FidelityMatrix<T>) -> Vec<T> {
    let n = f.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(f.get(i, j));
        }
    }
    out
}

/// Greedy maximal nearly-orthogonal reference set: scan states in spectrum
/// order, admit state `n` when its fidelity with every already-admitted
/// reference is at most `epsilon`. State 0 is always admitted. Returns
/// 0-based indices in ascending order.
pub fn select_references<T: Real>(f: &FidelityMatrix<T>, epsilon: T) -> Vec<usize> {
    let mut refs = vec![0usize];
    for n in 1..f.dim() {
        if refs.iter().all(|&a| f.get(n, a) <= epsilon) {
            refs.push(n);
        }
    }
    refs
}

/// Per-state fidelity feature vectors against a reference set.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace<T> {
    /// 0-based indices of the reference states in the sorted spectrum.
    pub reference_indices: Vec<usize>,
    /// `features[n][a] = F(ψ_n, ψ_{ref a})`, one row per eigenstate.
    pub features: Vec<Vec<T>>,
    /// Achieved orthogonality of the reference set: the maximum pairwise
    /// fidelity among references (0 for a single reference).
    pub orthogonality_threshold: T,
}

impl<T: Real> FeatureSpace<T> {
    pub fn n_states(&self) -> usize {
        self.features.len()
    }

    pub fn n_references(&self) -> usize {
        self.reference_indices.len()
    }

    /// CSV rendering: `state` column (1-based) plus one `ref_a` column per
    /// reference; `extra` appends an optional labeled integer column.
    pub fn to_csv(&self, extra: Option<(&str, &[usize])>) -> String {
        let mut out = String::new();
        let mut header = vec!["state".to_string()];
        header.extend((1..=self.n_references()).map(|a| format!("ref_{a}")));
        if let Some((name, _)) = extra {
            header.push(name.to_string());
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for (n, row) in self.features.iter().enumerate() {
            let mut cells = vec![(n + 1).to_string()];
            cells.extend(row.iter().map(|x| fmt_real(*x)));
            if let Some((_, col)) = extra {
                cells.push(col[n].to_string());
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Build the feature space for a given reference set (0-based indices).
pub fn feature_vectors<T: Real>(
    f: &FidelityMatrix<T>,
    refs: &[usize],
) -> Result<FeatureSpace<T>, FidelityError> {
    if refs.is_empty() {
        return Err(FidelityError::EmptyReferences);
    }
    for &r in refs {
        if r >= f.dim() {
            return Err(FidelityError::IndexOutOfRange {
                index: r,
                dim: f.dim(),
            });
        }
    }
    let features = (0..f.dim())
        .map(|n| refs.iter().map(|&a| f.get(n, a)).collect())
        .collect();
    let mut worst = T::zero();
    for (i, &a) in refs.iter().enumerate() {
        for &b in &refs[i + 1..] {
            worst = worst.max(f.get(a, b));
        }
    }
    Ok(FeatureSpace {
        reference_indices: refs.to_vec(),
        features,
        orthogonality_threshold: worst,
    })
}
