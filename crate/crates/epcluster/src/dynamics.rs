//! Wave-packet evolution in the (generally non-orthogonal) eigenbasis.
//!
//! An initial packet `Ψ(0)` is expanded as `Ψ(0) = Σ c_n ψ_n` by solving
//! the linear system against the eigenvector matrix; time evolution is then
//! exact, `Ψ(t) = Σ c_n e^{-i E_n t} ψ_n`. With complex eigenvalues the
//! component with the largest imaginary part grows exponentially and
//! dominates the packet at late times.

use num_complex::Complex;
use thiserror::Error;

use crate::cluster::{classify, ClusterError, ClusterModel};
use crate::cmatrix::{norm2, Lu};
use crate::eigen::Spectrum;
use crate::fidelity::{fidelity, FeatureSpace, FidelityError};
use crate::real::Real;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("wave packet has zero amplitude")]
    ZeroPacket,
    #[error("packet length {got} does not match system dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("eigenbasis is numerically singular (condition estimate {cond:.3e})")]
    SingularBasis { cond: f64 },
    #[error("time evolution would overflow: |Im E|·t = {0:.3e}")]
    Overflow(f64),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

/// Site-basis amplitudes at a given time (inverse-energy units).
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket<T> {
    pub amplitudes: Vec<Complex<T>>,
    pub time: T,
}

impl<T: Real> WavePacket<T> {
    pub fn at_time_zero(amplitudes: Vec<Complex<T>>) -> Self {
        Self {
            amplitudes,
            time: T::zero(),
        }
    }

    /// Packet fully localized on a single 0-based site.
    pub fn site(dim: usize, site: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[site] = Complex::new(T::one(), T::zero());
        Self::at_time_zero(amplitudes)
    }

    /// Uniform packet `(1, …, 1)/√N`.
    pub fn uniform(dim: usize) -> Self {
        let a = T::one() / T::from_f64(dim as f64).sqrt();
        Self::at_time_zero(vec![Complex::new(a, T::zero()); dim])
    }

    pub fn norm(&self) -> T {
        norm2(&self.amplitudes)
    }

    pub fn densities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Condition-estimate ceiling beyond which the eigenbasis is treated as
/// numerically defective.
fn condition_limit<T: Real>() -> T {
    T::from_f64(1e12)
}

/// Expand a packet in the eigenbasis: solve `V c = Ψ(0)` by LU with partial
/// pivoting. Fails loudly near an exceptional point, where the basis is
/// defective.
pub fn expand<T: Real>(
    psi0: &WavePacket<T>,
    s: &Spectrum<T>,
) -> Result<Vec<Complex<T>>, DynamicsError> {
    if psi0.amplitudes.len() != s.dim {
        return Err(DynamicsError::DimensionMismatch {
            got: psi0.amplitudes.len(),
            expected: s.dim,
        });
    }
    let psi_norm = psi0.norm();
    if psi_norm == T::zero() {
        return Err(DynamicsError::ZeroPacket);
    }
    let v = s.vector_matrix();
    let lu = Lu::factor(&v);
    let cond = lu.cond_estimate();
    if !(cond < condition_limit()) {
        return Err(DynamicsError::SingularBasis {
            cond: cond.to_f64(),
        });
    }
    let c = lu.solve(&psi0.amplitudes).ok_or(DynamicsError::SingularBasis {
        cond: f64::INFINITY,
    })?;
    // reconstruction certificate
    let mut r = v.matvec(&c);
    for (ri, ai) in r.iter_mut().zip(&psi0.amplitudes) {
        *ri -= *ai;
    }
    let rel = norm2(&r) / psi_norm;
    if rel > T::from_f64(1e-8).max(T::epsilon() * T::from_f64(100.0)) {
        return Err(DynamicsError::SingularBasis {
            cond: cond.to_f64(),
        });
    }
    Ok(c)
}

/// Propagate expansion coefficients: `c_n(t) = c_n e^{-i E_n t}`.
pub fn evolve_coefficients<T: Real>(
    s: &Spectrum<T>,
    c: &[Complex<T>],
    t: T,
) -> Result<Vec<Complex<T>>, DynamicsError> {
    if c.len() != s.dim {
        return Err(DynamicsError::DimensionMismatch {
            got: c.len(),
            expected: s.dim,
        });
    }
    let limit = T::from_f64(700.0).min(T::max_value().ln() - T::from_f64(5.0));
    let mut out = Vec::with_capacity(s.dim);
    for (cn, lambda) in c.iter().zip(&s.eigenvalues) {
        let growth = lambda.im * t;
        if growth.abs() > limit {
            return Err(DynamicsError::Overflow(growth.abs().to_f64()));
        }
        // e^{-i(a+ib)t} = e^{bt} e^{-iat}
        let factor = Complex::from_polar(growth.exp(), -lambda.re * t);
        out.push(*cn * factor);
    }
    Ok(out)
}

/// Reconstruct the site-basis packet `Σ c_n ψ_n` at time `t`.
pub fn reconstruct<T: Real>(s: &Spectrum<T>, c: &[Complex<T>], t: T) -> WavePacket<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut amplitudes = vec![zero; s.dim];
    for (cn, vec) in c.iter().zip(&s.eigenvectors) {
        if *cn == zero {
            continue;
        }
        for (a, &v) in amplitudes.iter_mut().zip(vec) {
            *a += *cn * v;
        }
    }
    WavePacket { amplitudes, time: t }
}

/// Evolve expansion coefficients to time `t` and reassemble the packet.
pub fn evolve<T: Real>(
    s: &Spectrum<T>,
    c: &[Complex<T>],
    t: T,
) -> Result<WavePacket<T>, DynamicsError> {
    let ct = evolve_coefficients(s, c, t)?;
    Ok(reconstruct(s, &ct, t))
}

/// Classify a packet against a fitted cluster model: compute its fidelity
/// feature vector against the reference states and return the nearest
/// centroid together with the features.
pub fn classify_packet<T: Real>(
    psi0: &WavePacket<T>,
    s: &Spectrum<T>,
    features: &FeatureSpace<T>,
    model: &ClusterModel<T>,
) -> Result<(usize, Vec<T>), DynamicsError> {
    if psi0.amplitudes.len() != s.dim {
        return Err(DynamicsError::DimensionMismatch {
            got: psi0.amplitudes.len(),
            expected: s.dim,
        });
    }
    if psi0.norm() == T::zero() {
        return Err(DynamicsError::ZeroPacket);
    }
    let mut feature = Vec::with_capacity(features.n_references());
    for &r in &features.reference_indices {
        feature.push(fidelity(&psi0.amplitudes, &s.eigenvectors[r])?);
    }
    let cluster = classify(model, &feature)?;
    Ok((cluster, feature))
}

/// One sampled instant of an evolved packet.
#[derive(Debug, Clone)]
pub struct TraceRow<T> {
    pub time: T,
    pub norm: T,
    pub densities: Vec<T>,
    /// Fidelity of the packet against each requested eigenstate.
    pub fidelities: Vec<T>,
}

/// Evolve a coefficient vector over a grid of times, reporting site
/// densities, norm, and (optionally) fidelities against selected
/// eigenstates.
pub fn time_trace<T: Real>(
    s: &Spectrum<T>,
    c: &[Complex<T>],
    times: &[T],
    fidelity_states: &[usize],
) -> Result<Vec<TraceRow<T>>, DynamicsError> {
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let packet = evolve(s, c, t)?;
        let mut fidelities = Vec::with_capacity(fidelity_states.len());
        for &j in fidelity_states {
            fidelities.push(fidelity(&packet.amplitudes, &s.eigenvectors[j])?);
        }
        rows.push(TraceRow {
            time: t,
            norm: packet.norm(),
            densities: packet.densities(),
            fidelities,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{kmeans, KmeansParams};
    use crate::cmatrix::{dot, CMat};
    use crate::eigen::eig_default;
    use crate::fidelity::{feature_vectors, fidelity_matrix};
    use crate::lattice::{build_hamiltonian, Boundary, LatticeSpec};
    use num_complex::Complex;

    type C = Complex<f64>;

    fn skin_chain(n: usize) -> Spectrum<f64> {
        let h = build_hamiltonian(&LatticeSpec::uniform(n, 0.1, 0.05, 0.0, Boundary::Open))
            .unwrap();
        eig_default(&h).unwrap()
    }

    fn hermitian_chain(n: usize) -> Spectrum<f64> {
        let h =
            build_hamiltonian(&LatticeSpec::uniform(n, 0.5, 0.5, 0.0, Boundary::Open)).unwrap();
        eig_default(&h).unwrap()
    }

    #[test]
    fn eigenvector_expands_to_unit_coefficient() {
        let s = skin_chain(8);
        for j in [0usize, 3, 7] {
            let packet = WavePacket::at_time_zero(s.eigenvectors[j].clone());
            let c = expand(&packet, &s).unwrap();
            for (i, ci) in c.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ci - C::new(want, 0.0)).norm() < 1e-10,
                    "c[{i}] = {ci} for eigenvector {j}"
                );
            }
        }
    }

    #[test]
    fn hermitian_expansion_matches_projection() {
        let s = hermitian_chain(9);
        let packet = WavePacket::site(9, 2);
        let c = expand(&packet, &s).unwrap();
        for (j, cj) in c.iter().enumerate() {
            let proj = dot(&s.eigenvectors[j], &packet.amplitudes);
            assert!((cj - proj).norm() < 1e-10, "state {j}: {cj} vs {proj}");
        }
    }

    #[test]
    fn expansion_matches_normal_equations_oracle() {
        // independent least-squares route: (V^H V) c = V^H ψ
        let s = skin_chain(12);
        let packet = WavePacket::site(12, 0);
        let c = expand(&packet, &s).unwrap();

        let v = s.vector_matrix();
        let vh = v.conj_transpose();
        let gram = vh.matmul(&v);
        let rhs = vh.matvec(&packet.amplitudes);
        let oracle = Lu::factor(&gram).solve(&rhs).unwrap();
        for (a, b) in c.iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_time_reconstructs_packet() {
        let s = skin_chain(10);
        let packet = WavePacket::uniform(10);
        let c = expand(&packet, &s).unwrap();
        let back = evolve(&s, &c, 0.0).unwrap();
        let mut diff = 0.0f64;
        for (a, b) in back.amplitudes.iter().zip(&packet.amplitudes) {
            diff += (a - b).norm_sqr();
        }
        assert!(diff.sqrt() / packet.norm() < 1e-8);
    }

    #[test]
    fn hermitian_norm_is_conserved() {
        let s = hermitian_chain(10);
        let packet = WavePacket::site(10, 4);
        let c = expand(&packet, &s).unwrap();
        for t in [0.5, 10.0, 35.0, 100.0] {
            let evolved = evolve(&s, &c, t).unwrap();
            assert!(
                (evolved.norm() - 1.0).abs() < 1e-8,
                "norm drift {} at t = {t}",
                evolved.norm()
            );
        }
    }

    #[test]
    fn time_composition() {
        let h = build_hamiltonian(&LatticeSpec {
            n_sites: 6,
            forward_hops: vec![0.4, 0.3, 0.5, 0.2, 0.6, 0.0],
            backward_hops: vec![0.1, 0.4, 0.2, 0.5, 0.3, 0.0],
            gain_loss: vec![0.05, -0.02, 0.01, -0.04, 0.03, -0.03],
            boundary: Boundary::Open,
        })
        .unwrap();
        let s = eig_default(&h).unwrap();
        let packet = WavePacket::uniform(6);
        let c = expand(&packet, &s).unwrap();

        let (t1, t2) = (3.7, 8.1);
        let step = evolve_coefficients(&s, &c, t1).unwrap();
        let two_step = evolve_coefficients(&s, &step, t2).unwrap();
        let direct = evolve_coefficients(&s, &c, t1 + t2).unwrap();
        let a = reconstruct(&s, &two_step, t1 + t2);
        let b = reconstruct(&s, &direct, t1 + t2);
        let mut diff = 0.0f64;
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            diff += (x - y).norm_sqr();
        }
        assert!(diff.sqrt() / b.norm() < 1e-8);
    }

    #[test]
    fn gain_dominated_packet_converges_to_top_state() {
        // dimer with γ = 2 > t = 1: eigenvalues ±i√3, unique maximal Im
        let h = build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![1.0, 0.0],
            backward_hops: vec![1.0, 0.0],
            gain_loss: vec![2.0, -2.0],
            boundary: Boundary::Open,
        })
        .unwrap();
        let s = eig_default(&h).unwrap();
        let top = s
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.im.partial_cmp(&b.1.im).unwrap())
            .unwrap()
            .0;
        let gap = s.eigenvalues[top].im
            - s.eigenvalues
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != top)
                .map(|(_, l)| l.im)
                .fold(f64::NEG_INFINITY, f64::max);
        let t = 11.0 / gap;
        let packet = WavePacket::site(2, 0);
        let c = expand(&packet, &s).unwrap();
        let evolved = evolve(&s, &c, t).unwrap();
        let f = fidelity(&evolved.amplitudes, &s.eigenvectors[top]).unwrap();
        assert!(f > 0.999, "dominance fidelity {f}");
    }

    #[test]
    fn overflow_guard_trips() {
        let h = build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![1.0, 0.0],
            backward_hops: vec![1.0, 0.0],
            gain_loss: vec![2.0, -2.0],
            boundary: Boundary::Open,
        })
        .unwrap();
        let s = eig_default(&h).unwrap();
        let c = vec![C::new(1.0, 0.0), C::new(1.0, 0.0)];
        // |Im E| = √3 ≈ 1.73: t = 500 pushes |Im E|·t past 700
        assert!(matches!(
            evolve(&s, &c, 500.0),
            Err(DynamicsError::Overflow(_))
        ));
        assert!(evolve(&s, &c, 100.0).is_ok());
    }

    #[test]
    fn expand_fails_at_exceptional_point() {
        let h = build_hamiltonian(&LatticeSpec {
            n_sites: 2,
            forward_hops: vec![1.0, 0.0],
            backward_hops: vec![1.0, 0.0],
            gain_loss: vec![1.0, -1.0],
            boundary: Boundary::Open,
        })
        .unwrap();
        let s = eig_default(&h).unwrap();
        let packet = WavePacket::site(2, 0);
        assert!(matches!(
            expand(&packet, &s),
            Err(DynamicsError::SingularBasis { .. })
        ));
    }

    #[test]
    fn zero_packet_rejected() {
        let s = skin_chain(4);
        let packet = WavePacket::at_time_zero(vec![C::new(0.0, 0.0); 4]);
        assert!(matches!(expand(&packet, &s), Err(DynamicsError::ZeroPacket)));
    }

    #[test]
    fn nonreciprocal_real_spectrum_norm_stays_bounded() {
        let s = skin_chain(10);
        let v = s.vector_matrix();
        let cond = Lu::factor(&v).cond_estimate();
        let packet = WavePacket::site(10, 0);
        let c = expand(&packet, &s).unwrap();
        for t in [1.0, 50.0, 200.0, 1000.0] {
            let evolved = evolve(&s, &c, t).unwrap();
            assert!(
                evolved.norm() <= 10.0 * cond,
                "norm {} at t = {t} (cond {cond})",
                evolved.norm()
            );
        }
    }

    #[test]
    fn packet_classification_consistency() {
        let s = skin_chain(20);
        let f = fidelity_matrix(&s);
        let features = feature_vectors(&f, &[0, 19]).unwrap();
        let model = kmeans(&features, 4, 7, KmeansParams::default()).unwrap();

        // a reference state lands in its own cluster
        for &r in &features.reference_indices {
            let packet = WavePacket::at_time_zero(s.eigenvectors[r].clone());
            let (cluster, feature) = classify_packet(&packet, &s, &features, &model).unwrap();
            assert_eq!(cluster, model.assignments[r]);
            // its feature vector reproduces its training row
            for (a, b) in feature.iter().zip(&features.features[r]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        // every eigenstate lands in its own training cluster
        for n in 0..20 {
            let packet = WavePacket::at_time_zero(s.eigenvectors[n].clone());
            let (cluster, _) = classify_packet(&packet, &s, &features, &model).unwrap();
            assert_eq!(cluster, model.assignments[n], "state {n}");
        }
        // brute-force nearest-centroid check for an arbitrary packet
        let packet = WavePacket::uniform(20);
        let (cluster, feature) = classify_packet(&packet, &s, &features, &model).unwrap();
        let mut best = (0usize, f64::INFINITY);
        for (j, centroid) in model.centroids.iter().enumerate() {
            let d: f64 = centroid
                .iter()
                .zip(&feature)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d < best.1 {
                best = (j, d);
            }
        }
        assert_eq!(cluster, best.0);
    }

    #[test]
    fn trace_rows_are_complete() {
        let s = hermitian_chain(6);
        let packet = WavePacket::site(6, 0);
        let c = expand(&packet, &s).unwrap();
        let times: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let rows = time_trace(&s, &c, &times, &[0, 5]).unwrap();
        assert_eq!(rows.len(), 11);
        for row in &rows {
            assert_eq!(row.densities.len(), 6);
            assert_eq!(row.fidelities.len(), 2);
            let total: f64 = row.densities.iter().sum();
            assert!((total - row.norm * row.norm).abs() < 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch_detected() {
        let s = skin_chain(4);
        let packet = WavePacket::site(5, 0);
        assert!(matches!(
            expand(&packet, &s),
            Err(DynamicsError::DimensionMismatch { got: 5, expected: 4 })
        ));
        let _ = CMat::<f64>::zeros(1, 1);
    }
}
