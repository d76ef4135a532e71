//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs: matrix products, Frobenius norms, and LU with partial
//! pivoting (linear solves, determinants, kernel vectors).

use num_complex::Complex;

use crate::real::Real;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

// ── vector helpers ──────────────────────────────────────────────────

/// Conjugated inner product `⟨v|w⟩ = Σ conj(v_i) w_i`.
pub fn dot<T: Real>(v: &[Complex<T>], w: &[Complex<T>]) -> Complex<T> {
    assert_eq!(v.len(), w.len());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in v.iter().zip(w) {
        acc += a.conj() * *b;
    }
    acc
}

pub fn norm2<T: Real>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

pub fn normalize<T: Real>(v: &mut [Complex<T>]) {
    let n = norm2(v);
    if n > T::zero() {
        for z in v.iter_mut() {
            *z = *z / n;
        }
    }
}

/// Rotate a vector so its first largest-magnitude entry is real positive.
/// Gives a deterministic representative of the ray {e^{iθ} v}.
pub fn fix_phase<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_mag = T::neg_infinity();
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    let pivot = v[best];
    let mag = pivot.norm();
    if mag > T::zero() {
        let phase = pivot.conj() / mag;
        for z in v.iter_mut() {
            *z = *z * phase;
        }
    }
}

// ── LU with partial pivoting ────────────────────────────────────────

/// LU factorization `P·A = L·U` of a square complex matrix. Zero pivots are
/// tolerated and recorded so the factorization doubles as a rank probe
/// (determinants, kernel vectors of singular matrices).
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: CMat<T>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &CMat<T>) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "LU requires a square matrix");
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut max = lu[(k, k)].norm_sqr();
            for i in k + 1..n {
                let m = lu[(i, k)].norm_sqr();
                if m > max {
                    max = m;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot.norm_sqr() == T::zero() {
                // Structurally singular column: leave the zero pivot in place.
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Self { lu, perm, swaps }
    }

    pub fn det(&self) -> Complex<T> {
        let n = self.lu.nrows();
        let mut d = Complex::new(T::one(), T::zero());
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Crude condition estimate: ratio of extreme pivot magnitudes.
    /// Infinite when a pivot vanished.
    pub fn cond_estimate(&self) -> T {
        let n = self.lu.nrows();
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for i in 0..n {
            let m = self.lu[(i, i)].norm();
            lo = lo.min(m);
            hi = hi.max(m);
        }
        if lo == T::zero() {
            T::infinity()
        } else {
            hi / lo
        }
    }

    pub fn min_pivot(&self) -> T {
        let n = self.lu.nrows();
        (0..n)
            .map(|i| self.lu[(i, i)].norm())
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// Solve `A x = b`. Returns `None` when a pivot is exactly zero.
    pub fn solve(&self, b: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        if self.min_pivot() == T::zero() {
            return None;
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for k in 0..i {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        Some(x)
    }

    /// Unit-norm approximate kernel vector: back-substitution through `U`
    /// anchored at the smallest pivot. For genuinely singular input this is
    /// a null vector of `A` up to roundoff.
    pub fn null_vector(&self) -> Vec<Complex<T>> {
        let n = self.lu.nrows();
        let mut k = 0;
        let mut min = T::infinity();
        for i in 0..n {
            let m = self.lu[(i, i)].norm();
            if m < min {
                min = m;
                k = i;
            }
        }
        let mut x = vec![Complex::new(T::zero(), T::zero()); n];
        x[k] = Complex::new(T::one(), T::zero());
        let tiny = T::epsilon() * self.lu.frobenius_norm().max(T::one());
        for i in (0..k).rev() {
            let mut num = Complex::new(T::zero(), T::zero());
            for j in i + 1..=k {
                num += self.lu[(i, j)] * x[j];
            }
            let mut den = self.lu[(i, i)];
            if den.norm() < tiny {
                den = Complex::new(tiny, T::zero());
            }
            x[i] = -num / den;
        }
        normalize(&mut x);
        x
    }
}
