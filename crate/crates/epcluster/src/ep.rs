//! Proximity diagnostics for exceptional points.
//!
//! An N-th order exceptional point is signalled by a nilpotent Hamiltonian:
//! `H^m = 0` for some `m ≤ N`, with a single surviving eigenvector (the
//! kernel of `H`). Away from one, proximity shows up as a shrinking
//! eigenvalue gap and pairwise fidelities piling up near 1. The base state
//! is the common vector all eigenstates cluster around: at an exceptional
//! point it is the kernel vector; nearby it is estimated as the
//! phase-aligned mean of the eigenvectors.

use num_complex::Complex;

use crate::cmatrix::{dot, fix_phase, normalize, Lu};
use crate::eigen::Spectrum;
use crate::fidelity::FidelityMatrix;
use crate::lattice::Hamiltonian;
use crate::real::Real;

/// Summary of how close a system sits to an exceptional point.
#[derive(Debug, Clone, PartialEq)]
pub struct EpReport<T> {
    /// Smallest `m` with `‖H^m‖_F ≤ tol·‖H^{m-1}‖_F·‖H‖_F`, absent when no
    /// power up to `N` vanishes.
    pub nilpotency_index: Option<usize>,
    /// Minimum pairwise eigenvalue distance `|λ_i − λ_j|`.
    pub min_eigenvalue_gap: T,
    /// Largest off-diagonal fidelity.
    pub max_pair_fidelity: T,
    /// Unit-norm estimate of the clustering (base) state.
    pub base_state: Vec<Complex<T>>,
}

impl<T: Real> EpReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nilpotency_index": self.nilpotency_index,
            "min_eigenvalue_gap": self.min_eigenvalue_gap.to_f64(),
            "max_pair_fidelity": self.max_pair_fidelity.to_f64(),
            "base_state": self.base_state.iter()
                .map(|z| serde_json::json!([z.re.to_f64(), z.im.to_f64()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Default tolerance for the nilpotency test (1e-12 for `f64`).
pub fn default_nilpotency_tol<T: Real>() -> T {
    T::from_f64(1e-12).max(T::epsilon())
}

/// Smallest `m ≤ N` with `‖H^m‖_F ≤ tol·‖H^{m-1}‖_F·‖H‖_F`, i.e. the first
/// power that collapses relative to the size one more multiplication could
/// sustain. The two-sided normalization is exactly scale-invariant
/// (`H → αH` multiplies both sides by `|α|^m`) and stays meaningful for the
/// sub-unit-norm lattices used throughout, where absolute thresholds would
/// misfire.
pub fn nilpotency_index<T: Real>(h: &Hamiltonian<T>, tol: T) -> Option<usize> {
    assert!(tol > T::zero(), "nilpotency tolerance must be positive");
    let n = h.dim();
    let h_norm = h.frobenius_norm();
    let mut previous_norm = T::from_f64(n as f64).sqrt(); // ‖I‖_F
    let mut power = h.matrix().clone();
    for m in 1..=n {
        let norm = power.frobenius_norm();
        if norm <= tol * previous_norm * h_norm {
            return Some(m);
        }
        if m < n {
            power = power.matmul(h.matrix());
            previous_norm = norm;
        }
    }
    None
}

/// Eigenvalue-gap and fidelity coalescence metrics.
pub fn coalescence_metrics<T: Real>(s: &Spectrum<T>, f: &FidelityMatrix<T>) -> (T, T) {
    assert_eq!(s.dim, f.dim(), "dimension mismatch");
    let mut gap = T::infinity();
    for i in 0..s.dim {
        for j in i + 1..s.dim {
            gap = gap.min((s.eigenvalues[i] - s.eigenvalues[j]).norm());
        }
    }
    if !gap.is_finite() {
        gap = T::zero(); // single eigenvalue: no pair to separate
    }
    (gap, f.max_offdiagonal())
}

/// Estimate the base state: the kernel vector of `H` when the system is
/// nilpotent, otherwise the normalized entrywise mean of the eigenvectors
/// after rotating each so its overlap with eigenvector 0 is real
/// non-negative.
pub fn base_state_estimate<T: Real>(h: &Hamiltonian<T>, s: &Spectrum<T>) -> Vec<Complex<T>> {
    let n = h.dim();
    if nilpotency_index(h, default_nilpotency_tol()).is_some() {
        let mut kernel = Lu::factor(h.matrix()).null_vector();
        fix_phase(&mut kernel);
        return kernel;
    }
    let reference = &s.eigenvectors[0];
    let zero = Complex::new(T::zero(), T::zero());
    let mut mean = vec![zero; n];
    for v in &s.eigenvectors {
        let overlap = dot(reference, v);
        let mag = overlap.norm();
        let phase = if mag > T::zero() {
            overlap.conj() / mag
        } else {
            Complex::new(T::one(), T::zero())
        };
        for (m, &z) in mean.iter_mut().zip(v) {
            *m += z * phase;
        }
    }
    normalize(&mut mean);
    fix_phase(&mut mean);
    mean
}

/// Assemble the full report from precomputed spectrum and fidelities.
pub fn ep_report<T: Real>(
    h: &Hamiltonian<T>,
    s: &Spectrum<T>,
    f: &FidelityMatrix<T>,
    tol: T,
) -> EpReport<T> {
    let (gap, max_fid) = coalescence_metrics(s, f);
    EpReport {
        nilpotency_index: nilpotency_index(h, tol),
        min_eigenvalue_gap: gap,
        max_pair_fidelity: max_fid,
        base_state: base_state_estimate(h, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMat;
    use crate::eigen::eig_default;
    use crate::fidelity::{fidelity, fidelity_matrix};
    use crate::lattice::{build_hamiltonian, Boundary, LatticeSpec};
    use num_complex::Complex;

    fn forward_chain(n: usize, t: f64) -> Hamiltonian<f64> {
        let mut spec = LatticeSpec::uniform(n, t, 0.0, 0.0, Boundary::Open);
        spec.backward_hops = vec![0.0; n];
        build_hamiltonian(&spec).unwrap()
    }

    fn ep_dimer() -> Hamiltonian<f64> {
        build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![1.0, 0.0],
            backward_hops: vec![1.0, 0.0],
            gain_loss: vec![1.0, -1.0],
            boundary: Boundary::Open,
        })
        .unwrap()
    }

    #[test]
    fn nilpotency_of_triangular_chain() {
        assert_eq!(nilpotency_index(&forward_chain(3, 1.0), 1e-12), Some(3));
    }

    #[test]
    fn hermitian_dimer_not_nilpotent() {
        let h =
            build_hamiltonian(&LatticeSpec::uniform(2, 1.0, 1.0, 0.0, Boundary::Open)).unwrap();
        assert_eq!(nilpotency_index(&h, 1e-12), None);
    }

    #[test]
    fn ep_dimer_squares_to_zero() {
        assert_eq!(nilpotency_index(&ep_dimer(), 1e-12), Some(2));
    }

    #[test]
    fn nilpotency_index_is_n_for_forward_chains() {
        for n in [3usize, 8, 20] {
            let h = forward_chain(n, 0.3);
            assert_eq!(nilpotency_index(&h, 1e-12), Some(n), "N = {n}");
            let s = eig_default(&h).unwrap();
            let base = base_state_estimate(&h, &s);
            // base state is e_1 up to phase
            assert!((base[0].norm() - 1.0).abs() < 1e-10);
            for z in &base[1..] {
                assert!(z.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn nilpotency_invariant_under_scaling() {
        for alpha in [0.01, 0.5, 3.0, 40.0] {
            let h = forward_chain(5, 1.0);
            let mut m = CMat::zeros(5, 5);
            for i in 0..5 {
                for j in 0..5 {
                    m[(i, j)] = h.entry(i, j) * Complex::new(alpha, 0.0);
                }
            }
            let scaled = Hamiltonian::from_matrix(m);
            assert_eq!(nilpotency_index(&scaled, 1e-12), Some(5), "alpha {alpha}");
        }
    }

    #[test]
    fn metrics_of_hermitian_three_chain() {
        let h =
            build_hamiltonian(&LatticeSpec::uniform(3, 1.0, 1.0, 0.0, Boundary::Open)).unwrap();
        let s = eig_default(&h).unwrap();
        let f = fidelity_matrix(&s);
        let (gap, max_fid) = coalescence_metrics(&s, &f);
        // spectrum {-√2, 0, √2}: smallest pair distance √2
        assert!((gap - 2f64.sqrt()).abs() < 1e-10);
        assert!(max_fid <= 1e-10);
    }

    #[test]
    fn metrics_near_ep_dimer() {
        let (t, g): (f64, f64) = (1.0, 0.999);
        let h = build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![t, 0.0],
            backward_hops: vec![t, 0.0],
            gain_loss: vec![g, -g],
            boundary: Boundary::Open,
        })
        .unwrap();
        let s = eig_default(&h).unwrap();
        let f = fidelity_matrix(&s);
        let (gap, max_fid) = coalescence_metrics(&s, &f);
        let expected_gap = 2.0 * (t * t - g * g).sqrt();
        assert!((gap - expected_gap).abs() < 1e-8, "{gap} vs {expected_gap}");
        assert!(max_fid > 0.99);
    }

    #[test]
    fn metrics_exactly_at_ep() {
        let h = ep_dimer();
        let s = eig_default(&h).unwrap();
        let f = fidelity_matrix(&s);
        let (gap, max_fid) = coalescence_metrics(&s, &f);
        assert!(gap <= 1e-10, "gap {gap}");
        assert!((max_fid - 1.0).abs() < 1e-8, "fidelity {max_fid}");
    }

    #[test]
    fn ep_dimer_kernel_vector() {
        let h = ep_dimer();
        let s = eig_default(&h).unwrap();
        let base = base_state_estimate(&h, &s);
        // kernel of [[i,1],[1,-i]] is (1, -i)/√2, phase-fixed
        let r = 1.0 / 2f64.sqrt();
        assert!((base[0] - Complex::new(r, 0.0)).norm() < 1e-10);
        assert!((base[1] - Complex::new(0.0, -r)).norm() < 1e-10);
    }

    #[test]
    fn hermitian_base_state_is_no_cluster_center() {
        let h =
            build_hamiltonian(&LatticeSpec::uniform(6, 0.5, 0.5, 0.0, Boundary::Open)).unwrap();
        let s = eig_default(&h).unwrap();
        let base = base_state_estimate(&h, &s);
        for v in &s.eigenvectors {
            let f = fidelity(&base, v).unwrap();
            assert!(f < 1.0 - 1e-6, "orthogonal basis has no common direction, F = {f}");
        }
    }

    #[test]
    fn max_fidelity_grows_toward_the_ep() {
        // backward hops t' = c·t with c shrinking toward the exceptional
        // point at c = 0: the fidelity ceiling must not decrease
        let mut previous = -1.0;
        for c in [0.5, 0.2, 0.1, 0.05] {
            let h = build_hamiltonian(&LatticeSpec::uniform(
                10,
                0.1,
                0.1 * c,
                0.0,
                Boundary::Open,
            ))
            .unwrap();
            let s = eig_default(&h).unwrap();
            let f = fidelity_matrix(&s);
            let (_, max_fid) = coalescence_metrics(&s, &f);
            assert!(
                max_fid >= previous,
                "c = {c}: {max_fid} < previous {previous}"
            );
            previous = max_fid;
        }
    }

    #[test]
    fn report_is_consistent() {
        let h = ep_dimer();
        let s = eig_default(&h).unwrap();
        let f = fidelity_matrix(&s);
        let report = ep_report(&h, &s, &f, 1e-12);
        assert_eq!(report.nilpotency_index, Some(2));
        assert!((report.max_pair_fidelity - f.max_offdiagonal()).abs() < 1e-12);
        let json = report.to_json();
        assert_eq!(json["nilpotency_index"], 2);
    }
}
