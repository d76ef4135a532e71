//! Full eigendecomposition of dense complex non-Hermitian matrices.
//!
//! The pipeline is the classical dense one: unitary reduction to upper
//! Hessenberg form (complex Householder reflectors), implicitly shifted
//! single-shift QR with Wilkinson shifts and deflation down to a Schur form
//! `T = Q^H H Q`, then right eigenvectors by back-substitution through the
//! triangular factor, with an inverse-iteration fallback when a computed
//! vector fails its residual check. Everything is sequential and free of
//! hidden state, so identical inputs give bit-identical output.
//!
//! Near an exceptional point the eigenvector basis is genuinely defective;
//! the solver still returns `N` vectors (which then nearly coincide) and
//! reports per-vector residuals rather than failing.

use num_complex::Complex;
use thiserror::Error;

use crate::cmatrix::{fix_phase, norm2, normalize, CMat, Lu};
use crate::lattice::Hamiltonian;
use crate::real::{cmp_finite, Real};
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum EigError {
    #[error("deflation tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("QR iteration exceeded {budget} sweeps with {remaining} eigenvalues undeflated")]
    NonConvergence { budget: usize, remaining: usize },
}

/// Eigenvalue paired with its right eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

/// Sorted eigendecomposition: eigenvalues ascending by real part with
/// imaginary-part tie-break, unit-norm right eigenvectors (vector `j` pairs
/// with eigenvalue `j`), and the 2-norm residual `‖H v_j − λ_j v_j‖` of
/// every pair.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub dim: usize,
    pub eigenvalues: Vec<Complex<T>>,
    pub eigenvectors: Vec<Vec<Complex<T>>>,
    pub residuals: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Eigenvectors as the columns of an `N×N` matrix.
    pub fn vector_matrix(&self) -> CMat<T> {
        let n = self.dim;
        let mut v = CMat::zeros(n, n);
        for (j, vec) in self.eigenvectors.iter().enumerate() {
            for i in 0..n {
                v[(i, j)] = vec[i];
            }
        }
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |z: &Complex<T>| serde_json::json!([z.re.to_f64(), z.im.to_f64()]);
        serde_json::json!({
            "dim": self.dim,
            "eigenvalues": self.eigenvalues.iter().map(pair).collect::<Vec<_>>(),
            "eigenvectors": self.eigenvectors.iter()
                .map(|v| v.iter().map(pair).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|r| r.to_f64()).collect::<Vec<_>>(),
        })
    }
}

/// Residual bound certified by [`eig`]: `factor · max(1, ‖H‖_F)` with
/// `factor = 1e-8` for `f64` (widened proportionally for narrower types).
pub fn residual_bound<T: Real>(h_norm: T) -> T {
    let factor = T::from_f64(1e-8).max(T::epsilon() * T::from_f64(50.0));
    factor * h_norm.max(T::one())
}

/// Default QR deflation tolerance: a few machine epsilons. Looser values
/// inject a backward error of the same size into every eigenpair, so the
/// default keeps deflation at roundoff scale.
pub fn default_deflation_tol<T: Real>() -> T {
    T::epsilon() * T::from_f64(8.0)
}

const SWEEPS_PER_DIM: usize = 30;

/// Eigendecomposition with the default deflation tolerance.
pub fn eig_default<T: Real>(h: &Hamiltonian<T>) -> Result<Spectrum<T>, EigError> {
    eig(h, default_deflation_tol())
}

/// Full eigendecomposition of `h`. `tol` is the relative QR deflation
/// threshold; the iteration budget is `30·N` sweeps.
pub fn eig<T: Real>(h: &Hamiltonian<T>, tol: T) -> Result<Spectrum<T>, EigError> {
    if !(tol > T::zero()) {
        return Err(EigError::BadTolerance(tol.to_f64()));
    }
    if !h.matrix().is_finite() {
        return Err(EigError::NonFinite);
    }
    let n = h.dim();
    let h_norm = h.frobenius_norm();

    let mut t = h.matrix().clone();
    let mut z = CMat::identity(n);
    hessenberg(&mut t, &mut z);
    schur(&mut t, &mut z, tol, SWEEPS_PER_DIM * n)?;

    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let mut vector = triangular_eigenvector(&t, &z, j);
        let value = t[(j, j)];
        let mut res = eigen_residual(h, value, &vector);
        if res > residual_bound(h_norm) {
            if let Some(better) = inverse_iteration(h, value, j as u64) {
                let better_res = eigen_residual(h, value, &better);
                if better_res < res {
                    vector = better;
                    res = better_res;
                }
            }
        }
        let _ = res;
        pairs.push(EigenPair { value, vector });
    }

    let pairs = sort_states(pairs);
    let eigenvalues: Vec<_> = pairs.iter().map(|p| p.value).collect();
    let eigenvectors: Vec<_> = pairs.into_iter().map(|p| p.vector).collect();
    let mut spectrum = Spectrum {
        dim: n,
        eigenvalues,
        eigenvectors,
        residuals: vec![T::zero(); n],
    };
    spectrum.residuals = residual_check(h, &spectrum);
    Ok(spectrum)
}

/// Order eigenpairs ascending by real part, ties broken ascending by
/// imaginary part. Stable, so exactly tied eigenvalues keep their
/// deterministic deflation order.
pub fn sort_states<T: Real>(mut pairs: Vec<EigenPair<T>>) -> Vec<EigenPair<T>> {
    pairs.sort_by(|a, b| {
        cmp_finite(a.value.re, b.value.re).then_with(|| cmp_finite(a.value.im, b.value.im))
    });
    pairs
}

/// Independently recompute `‖H v_j − λ_j v_j‖₂` for every eigenpair.
/// This touches only the original matrix, never the factorization, so it
/// serves as the acceptance oracle for the solver.
pub fn residual_check<T: Real>(h: &Hamiltonian<T>, s: &Spectrum<T>) -> Vec<T> {
    assert_eq!(h.dim(), s.dim, "dimension mismatch");
    (0..s.dim)
        .map(|j| eigen_residual(h, s.eigenvalues[j], &s.eigenvectors[j]))
        .collect()
}

fn eigen_residual<T: Real>(h: &Hamiltonian<T>, value: Complex<T>, vector: &[Complex<T>]) -> T {
    let mut r = h.matvec(vector);
    for (ri, vi) in r.iter_mut().zip(vector) {
        *ri -= value * *vi;
    }
    norm2(&r)
}

// ── Hessenberg reduction ────────────────────────────────────────────

/// Reduce `a` to upper Hessenberg form by complex Householder reflectors,
/// accumulating the unitary transform into `q` (from the right).
fn hessenberg<T: Real>(a: &mut CMat<T>, q: &mut CMat<T>) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        // Reflector zeroing column k below the subdiagonal.
        let m = n - k - 1;
        let mut v: Vec<Complex<T>> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = norm2(&v);
        let tail_norm = norm2(&v[1..]);
        if tail_norm == T::zero() {
            continue;
        }
        let alpha = v[0];
        let beta = if alpha.norm() > T::zero() {
            -(alpha / alpha.norm()) * xnorm
        } else {
            Complex::new(-xnorm, T::zero())
        };
        v[0] -= beta;
        let vsq = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |x, y| x + y);
        if vsq == T::zero() {
            continue;
        }
        let two_over = T::from_f64(2.0) / vsq;

        // A ← P A (rows k+1..n)
        for j in k..n {
            let mut w = Complex::new(T::zero(), T::zero());
            for i in 0..m {
                w += v[i].conj() * a[(k + 1 + i, j)];
            }
            w = w * two_over;
            for i in 0..m {
                let sub = v[i] * w;
                a[(k + 1 + i, j)] -= sub;
            }
        }
        // A ← A P (columns k+1..n)
        for i in 0..n {
            let mut w = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                w += a[(i, k + 1 + j)] * v[j];
            }
            w = w * two_over;
            for j in 0..m {
                let sub = w * v[j].conj();
                a[(i, k + 1 + j)] -= sub;
            }
        }
        // Q ← Q P
        for i in 0..n {
            let mut w = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                w += q[(i, k + 1 + j)] * v[j];
            }
            w = w * two_over;
            for j in 0..m {
                let sub = w * v[j].conj();
                q[(i, k + 1 + j)] -= sub;
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in k + 2..n {
            a[(i, k)] = Complex::new(T::zero(), T::zero());
        }
        a[(k + 1, k)] = beta;
    }
}

// ── QR iteration to Schur form ──────────────────────────────────────

/// Complex Givens rotation: returns `(c, s)` with `c` real so that
/// `[c s; -s̄ c]·[f; g] = [r; 0]`.
fn givens<T: Real>(f: Complex<T>, g: Complex<T>) -> (T, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    if g == zero {
        return (T::one(), zero);
    }
    let gn = g.norm();
    let fn_ = f.norm();
    if fn_ == T::zero() {
        return (T::zero(), g.conj() / gn);
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * g.conj() / d;
    (c, s)
}

fn rot_rows<T: Real>(
    m: &mut CMat<T>,
    i1: usize,
    i2: usize,
    c: T,
    s: Complex<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let a = m[(i1, j)];
        let b = m[(i2, j)];
        m[(i1, j)] = a * c + s * b;
        m[(i2, j)] = b * c - s.conj() * a;
    }
}

fn rot_cols<T: Real>(
    m: &mut CMat<T>,
    j1: usize,
    j2: usize,
    c: T,
    s: Complex<T>,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let a = m[(i, j1)];
        let b = m[(i, j2)];
        m[(i, j1)] = a * c + s.conj() * b;
        m[(i, j2)] = b * c - s * a;
    }
}

/// Wilkinson shift: the eigenvalue of the trailing 2×2 block closer to its
/// bottom-right entry.
fn wilkinson_shift<T: Real>(t: &CMat<T>, hi: usize) -> Complex<T> {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let c = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let half = T::from_f64(0.5);
    let mid = (a + d) * half;
    let delta = (a - d) * half;
    let disc = (delta * delta + b * c).sqrt();
    let m1 = mid + disc;
    let m2 = mid - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Drive a Hessenberg matrix to upper triangular (Schur) form in place,
/// accumulating the unitary transform into `z`.
fn schur<T: Real>(t: &mut CMat<T>, z: &mut CMat<T>, tol: T, budget: usize) -> Result<(), EigError> {
    let n = t.nrows();
    if n < 2 {
        return Ok(());
    }
    let fro = t.frobenius_norm();
    let zero = Complex::new(T::zero(), T::zero());
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    while hi > 0 {
        // Deflation scan: find the start of the active trailing window.
        let mut lo = hi;
        while lo > 0 {
            let scale = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            let scale = if scale > T::zero() { scale } else { fro };
            if t[(lo, lo - 1)].norm() <= tol * scale {
                t[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > budget {
            return Err(EigError::NonConvergence {
                budget,
                remaining: hi + 1,
            });
        }
        stalled += 1;
        let shift = if stalled % 10 == 0 {
            // Exceptional shift to break rare cycling.
            t[(hi, hi)] + Complex::new(T::from_f64(0.75) * t[(hi, hi - 1)].norm(), T::zero())
        } else {
            wilkinson_shift(t, hi)
        };

        // Implicit single-shift sweep over the window [lo, hi].
        let mut x = t[(lo, lo)] - shift;
        let mut y = t[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let row_start = if k > lo { k - 1 } else { lo };
            rot_rows(t, k, k + 1, c, s, row_start..n);
            rot_cols(t, k, k + 1, c, s, 0..(hi.min(k + 2) + 1));
            rot_cols(z, k, k + 1, c, s, 0..n);
            if k > lo {
                t[(k + 1, k - 1)] = zero;
            }
            if k < hi - 1 {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
    }
    Ok(())
}

// ── eigenvectors ────────────────────────────────────────────────────

/// Right eigenvector for the `j`-th diagonal entry of the Schur factor:
/// back-substitution through the triangular system, guarded against tiny
/// pivots (defective eigenvalues) and overflow, then rotated back with `z`.
fn triangular_eigenvector<T: Real>(t: &CMat<T>, z: &CMat<T>, j: usize) -> Vec<Complex<T>> {
    let n = t.nrows();
    let zero = Complex::new(T::zero(), T::zero());
    let lambda = t[(j, j)];
    let smin = (T::epsilon() * t.frobenius_norm()).max(T::min_positive_value());
    let big = T::max_value().sqrt();

    let mut x = vec![zero; n];
    x[j] = Complex::new(T::one(), T::zero());
    for i in (0..j).rev() {
        let mut num = zero;
        for k in i + 1..=j {
            num += t[(i, k)] * x[k];
        }
        let mut den = t[(i, i)] - lambda;
        if den.norm() < smin {
            den = Complex::new(smin, T::zero());
        }
        x[i] = -num / den;
        let mag = x[i].norm();
        if mag > big {
            let scale = T::one() / mag;
            for value in x.iter_mut().take(j + 1) {
                *value = *value * scale;
            }
        }
    }

    let mut v = vec![zero; n];
    for (k, xk) in x.iter().enumerate().take(j + 1) {
        if *xk == zero {
            continue;
        }
        for i in 0..n {
            v[i] += z[(i, k)] * *xk;
        }
    }
    normalize(&mut v);
    fix_phase(&mut v);
    v
}

/// Inverse iteration refinement: a few solves against `H - (λ+δ)I` from a
/// seeded pseudo-random start. Deterministic (the start vector depends only
/// on the eigenvalue index).
fn inverse_iteration<T: Real>(
    h: &Hamiltonian<T>,
    lambda: Complex<T>,
    index: u64,
) -> Option<Vec<Complex<T>>> {
    let n = h.dim();
    let h_norm = h.frobenius_norm().max(T::min_positive_value());
    let mut delta = h_norm * T::epsilon() * T::from_f64(16.0);
    let mut rng = SplitMix64::new(0x5EED_0000_u64 ^ index);
    let mut v: Vec<Complex<T>> = (0..n)
        .map(|_| {
            Complex::new(
                T::from_f64(rng.next_f64() - 0.5),
                T::from_f64(rng.next_f64() - 0.5),
            )
        })
        .collect();
    normalize(&mut v);

    for _attempt in 0..2 {
        let mut shifted = h.matrix().clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda + Complex::new(delta, T::zero());
        }
        let lu = Lu::factor(&shifted);
        if lu.min_pivot() == T::zero() {
            delta = delta * T::from_f64(1e3);
            continue;
        }
        let mut w = v.clone();
        for _ in 0..4 {
            match lu.solve(&w) {
                Some(next) => {
                    w = next;
                    normalize(&mut w);
                }
                None => return None,
            }
        }
        fix_phase(&mut w);
        return Some(w);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::dot;
    use crate::lattice::{build_hamiltonian, Boundary, LatticeSpec};
    use num_complex::Complex;

    type C = Complex<f64>;

    fn dimer(gamma1: f64, gamma2: f64, t: f64) -> Hamiltonian<f64> {
        build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![t, 0.0],
            backward_hops: vec![t, 0.0],
            gain_loss: vec![gamma1, gamma2],
            boundary: Boundary::Open,
        })
        .unwrap()
    }

    #[test]
    fn ep_dimer_double_zero() {
        // [[i, 1], [1, -i]]: characteristic polynomial λ² = 0.
        let h = dimer(1.0, -1.0, 1.0);
        let s = eig_default(&h).unwrap();
        for lam in &s.eigenvalues {
            assert!(lam.norm() < 1e-12, "eigenvalue {lam} should be 0");
        }
        for r in &s.residuals {
            assert!(*r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn hermitian_three_site_chain() {
        // open uniform chain, t = 1: eigenvalues 2 cos(kπ/4) = {-√2, 0, √2}
        let h = build_hamiltonian(&LatticeSpec::uniform(3, 1.0, 1.0, 0.0, Boundary::Open)).unwrap();
        let s = eig_default(&h).unwrap();
        let expected = [-(2f64).sqrt(), 0.0, (2f64).sqrt()];
        for (lam, want) in s.eigenvalues.iter().zip(expected) {
            assert!((lam.re - want).abs() < 1e-12, "{} vs {}", lam.re, want);
            assert!(lam.im.abs() < 1e-12);
        }
    }

    #[test]
    fn nonreciprocal_chain_matches_similarity_oracle() {
        // diag(r^n) with r = sqrt(t'/t) maps the open chain to a Hermitian
        // chain with hopping sqrt(t·t'): eigenvalues 2·sqrt(t t')·cos(kπ/(N+1)).
        let n = 12;
        let (t, tp): (f64, f64) = (0.1, 0.05);
        let h = build_hamiltonian(&LatticeSpec::uniform(n, t, tp, 0.0, Boundary::Open)).unwrap();
        let s = eig_default(&h).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (t * tp).sqrt() * (k as f64 * std::f64::consts::PI / 13.0).cos())
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (lam, want) in s.eigenvalues.iter().zip(&expected) {
            assert!((lam.re - want).abs() < 1e-8, "{} vs {}", lam.re, want);
            assert!(lam.im.abs() < 1e-10);
        }
        // lowest-lying state pairs with the most negative band energy
        let lowest = 2.0 * 0.005f64.sqrt() * (12.0 * std::f64::consts::PI / 13.0).cos();
        assert!((s.eigenvalues[0].re - lowest).abs() < 1e-10);
        assert!(lowest < 0.0);
    }

    #[test]
    fn sort_orders_by_real_then_imaginary() {
        let mk = |re, im| EigenPair {
            value: C::new(re, im),
            vector: vec![C::new(1.0, 0.0)],
        };
        let sorted = sort_states(vec![mk(1.0, 0.0), mk(-1.0, 0.0), mk(0.0, 0.0)]);
        let got: Vec<f64> = sorted.iter().map(|p| p.value.re).collect();
        assert_eq!(got, vec![-1.0, 0.0, 1.0]);

        let sorted = sort_states(vec![mk(0.0, 1.0), mk(0.0, -1.0)]);
        assert_eq!(sorted[0].value.im, -1.0);
        assert_eq!(sorted[1].value.im, 1.0);
    }

    #[test]
    fn residual_check_detects_corruption() {
        let h = build_hamiltonian(&LatticeSpec::uniform(6, 0.3, 0.2, 0.1, Boundary::Ring)).unwrap();
        let s = eig_default(&h).unwrap();
        let clean = residual_check(&h, &s);
        assert!(clean.iter().all(|r| *r < 1e-12));

        let mut bad = s.clone();
        for (i, z) in bad.eigenvectors[0].iter_mut().enumerate() {
            *z += C::new(0.1, 0.0) * C::new((i as f64).sin(), (i as f64).cos());
        }
        let dirty = residual_check(&h, &bad);
        assert!(dirty[0] > 1e-3, "perturbation not detected: {}", dirty[0]);
    }

    #[test]
    fn trace_and_determinant_identities() {
        let spec = LatticeSpec {
            n_sites: 8,
            forward_hops: vec![0.4, -0.2, 0.7, 0.1, -0.5, 0.3, 0.9, 0.6],
            backward_hops: vec![0.1, 0.8, -0.3, 0.2, 0.6, -0.1, 0.4, 0.2],
            gain_loss: vec![0.2, -0.4, 0.1, 0.0, 0.3, -0.2, 0.5, -0.1],
            boundary: Boundary::Ring,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let s = eig_default(&h).unwrap();

        let sum: C = s.eigenvalues.iter().sum();
        let tr = h.trace();
        assert!((sum - tr).norm() < 1e-8, "trace identity: {} vs {}", sum, tr);

        let prod = s
            .eigenvalues
            .iter()
            .fold(C::new(1.0, 0.0), |acc, lam| acc * lam);
        let det = Lu::factor(h.matrix()).det();
        assert!(
            (prod - det).norm() <= 1e-6 * det.norm().max(1e-30),
            "det identity: {} vs {}",
            prod,
            det
        );
    }

    #[test]
    fn hermitian_spectrum_real_and_orthogonal() {
        let spec: LatticeSpec<f64> = LatticeSpec {
            n_sites: 7,
            forward_hops: vec![0.4, 0.2, 0.7, 0.1, 0.5, 0.3, 0.0],
            backward_hops: vec![0.4, 0.2, 0.7, 0.1, 0.5, 0.3, 0.0],
            gain_loss: vec![0.0; 7],
            boundary: Boundary::Open,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let s = eig_default(&h).unwrap();
        for lam in &s.eigenvalues {
            assert!(lam.im.abs() < 1e-10);
        }
        for i in 0..7 {
            for j in i + 1..7 {
                let ov = dot(&s.eigenvectors[i], &s.eigenvectors[j]).norm();
                assert!(ov < 1e-8, "states {i},{j} overlap {ov}");
            }
        }
    }

    #[test]
    fn unit_norm_and_residual_bound() {
        let h = build_hamiltonian(&LatticeSpec::<f64>::uniform(20, 0.1, 0.01, 0.0, Boundary::Open))
            .unwrap();
        let s = eig_default(&h).unwrap();
        let bound = residual_bound(h.frobenius_norm());
        for j in 0..20 {
            assert!((norm2(&s.eigenvectors[j]) - 1.0).abs() < 1e-12);
            assert!(s.residuals[j] <= bound, "residual {} > {}", s.residuals[j], bound);
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let spec = LatticeSpec {
            n_sites: 10,
            forward_hops: vec![0.3, -0.1, 0.6, 0.2, 0.5, -0.4, 0.1, 0.8, 0.2, 0.7],
            backward_hops: vec![0.2, 0.4, -0.2, 0.1, 0.3, 0.5, -0.3, 0.2, 0.6, 0.1],
            gain_loss: vec![0.1, -0.2, 0.3, 0.0, -0.1, 0.2, -0.3, 0.1, 0.0, 0.4],
            boundary: Boundary::Ring,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let a = eig_default(&h).unwrap();
        let b = eig_default(&h).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        assert_eq!(a.residuals, b.residuals);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = dimer(0.0, 0.0, 1.0);
        assert!(matches!(eig(&h, 0.0), Err(EigError::BadTolerance(_))));
        assert!(matches!(eig(&h, -1.0), Err(EigError::BadTolerance(_))));

        let mut m = h.matrix().clone();
        m[(0, 0)] = C::new(f64::NAN, 0.0);
        let bad = Hamiltonian::from_matrix(m);
        assert!(matches!(eig_default(&bad), Err(EigError::NonFinite)));
    }
}
