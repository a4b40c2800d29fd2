//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Everything here is sized for few-qubit problems (dimensions up to a few
//! dozen), where plain O(n^3) dense routines are fast enough and simple
//! enough to audit line by line. Matrices are row-major over `Complex64`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity required of a density matrix: max |m - m†| entry.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace slack for a density matrix.
pub const DENSITY_TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for positive semidefiniteness; small negatives from
/// round-off are accepted down to this value.
pub const DENSITY_EIGENVALUE_FLOOR: f64 = -1e-10;
/// Hermiticity accepted by the eigensolver input check.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal magnitude below which a Jacobi sweep considers the matrix
/// diagonalized.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-14;
/// Hard sweep cap for the Jacobi iteration; convergence is quadratic so this
/// is never approached at the sizes used here.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Taylor series for the matrix exponential stops once a term's Frobenius
/// norm drops below this.
pub const EXPM_TERM_TOL: f64 = 1e-16;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data. Errors if the element count does
    /// not match the shape.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c(1.0, 0.0));
        }
        m
    }

    /// 2x2 matrix from its four entries, row-major.
    pub fn from2x2(a: C64, b: C64, cc: C64, d: C64) -> Self {
        Self { rows: 2, cols: 2, data: vec![a, b, cc, d] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(|z| z.conj()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn scale(&self, factor: C64) -> Self {
        let data = self.data.iter().map(|z| z * factor).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max row sum of entry magnitudes (the induced infinity norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        self.hermitian_deviation() <= tolerance
    }

    /// Max entry of |m - m†|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let product = &self.adjoint() * self;
        product.approx_eq(&Self::identity(self.rows), tolerance)
    }

    /// Entrywise comparison: max |a - b| entry at most `tolerance`.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a - b).norm() <= tolerance)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Kronecker product, first factor most significant: the (i,j) block of the
/// result is a[i][j] * b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let f = a.get(ia, ja);
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.set(ia * b.rows + ib, ja * b.cols + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Outer product |u><v| of two vectors.
pub fn outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(u.len(), v.len());
    for (i, a) in u.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            out.set(i, j, a * b.conj());
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order, orthonormal eigenvectors as the columns of `vectors` in the same
/// order.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Hermitian eigensolver: closed form for 2x2, cyclic Jacobi above that.
/// Rejects non-Hermitian input.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > EIGEN_HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_deviation: deviation });
    }
    match m.rows() {
        0 => Err(Error::Dimension("empty matrix".into())),
        1 => Ok(Eigendecomposition {
            values: vec![m.get(0, 0).re],
            vectors: ComplexMatrix::identity(1),
        }),
        2 => Ok(eigen_2x2(m)),
        _ => jacobi_eigen(m),
    }
}

fn eigen_2x2(m: &ComplexMatrix) -> Eigendecomposition {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    // Hermitize the off-diagonal so tiny asymmetry within tolerance cannot
    // skew the result.
    let b = (m.get(0, 1) + m.get(1, 0).conj()).scale(0.5);
    let delta = 0.5 * (a - d);
    let h = (delta * delta + b.norm_sqr()).sqrt();
    let mean = 0.5 * (a + d);
    let (lo, hi) = (mean - h, mean + h);

    if b.norm() == 0.0 {
        // Already diagonal; order the basis vectors by eigenvalue.
        let (v_hi, v_lo) = if a >= d { (0, 1) } else { (1, 0) };
        let mut vectors = ComplexMatrix::zeros(2, 2);
        vectors.set(v_hi, 0, c(1.0, 0.0));
        vectors.set(v_lo, 1, c(1.0, 0.0));
        return Eigendecomposition { values: vec![hi, lo], vectors };
    }

    // p = h + |delta| avoids cancellation in the eigenvector components.
    let p = h + delta.abs();
    let (v_plus, v_minus): ([C64; 2], [C64; 2]) = if delta >= 0.0 {
        ([c(p, 0.0), b.conj()], [-b, c(p, 0.0)])
    } else {
        ([b, c(p, 0.0)], [c(-p, 0.0), b.conj()])
    };
    let norm = (p * p + b.norm_sqr()).sqrt();
    let mut vectors = ComplexMatrix::zeros(2, 2);
    vectors.set(0, 0, v_plus[0] / norm);
    vectors.set(1, 0, v_plus[1] / norm);
    vectors.set(0, 1, v_minus[0] / norm);
    vectors.set(1, 1, v_minus[1] / norm);
    Eigendecomposition { values: vec![hi, lo], vectors }
}

fn cscale(z: C64, f: f64) -> C64 {
    C64::new(z.re * f, z.im * f)
}

fn jacobi_eigen(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    let n = m.rows();
    let mut a = m.clone();
    // Hermitize to kill drift from input asymmetry within tolerance.
    for i in 0..n {
        for j in 0..n {
            let sym = (a.get(i, j) + a.get(j, i).conj()).scale(0.5);
            a.set(i, j, sym);
            a.set(j, i, sym.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= JACOBI_OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= JACOBI_OFF_DIAGONAL_TOL {
                    continue;
                }
                let phase = apq / mag;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // tan(2*theta) = 2|apq| / (app - aqq), standard stable form.
                let (cos_t, sin_t) = if app == aqq {
                    (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
                } else {
                    let tau = (app - aqq) / (2.0 * mag);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let cos_t = 1.0 / (1.0 + t * t).sqrt();
                    (cos_t, t * cos_t)
                };
                // Rotation block [[c, -s*phase], [s*conj(phase), c]] at (p,q).
                let gpq = cscale(-phase, sin_t);
                let gqp = cscale(phase.conj(), sin_t);
                // Columns: a <- a * g, v <- v * g.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, cscale(aip, cos_t) + aiq * gqp);
                    a.set(i, q, aip * gpq + cscale(aiq, cos_t));
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, cscale(vip, cos_t) + viq * gqp);
                    v.set(i, q, vip * gpq + cscale(viq, cos_t));
                }
                // Rows: a <- g† * a.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, cscale(apj, cos_t) + gqp.conj() * aqj);
                    a.set(q, j, gpq.conj() * apj + cscale(aqj, cos_t));
                }
            }
        }
    }

    // Descending eigenvalue order with matching columns.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new_col, v.get(i, old_col));
        }
    }
    Ok(Eigendecomposition { values, vectors })
}

/// Partial trace over the factors NOT listed in `keep`. `dims` gives the
/// tensor factor dimensions in order (first factor most significant, matching
/// `kron`); `keep` must be strictly increasing. The kept factors stay in
/// their original order. An empty `keep` yields the 1x1 total trace.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::Dimension(format!(
            "matrix is {}x{} but factor dims multiply to {}",
            m.rows(),
            m.cols(),
            total
        )));
    }
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::Dimension("zero-dimensional tensor factor".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Dimension("keep indices must be strictly increasing".into()));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension("keep index out of range".into()));
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    // Row-major strides: factor i advances by the product of later dims.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let dim_keep: usize = keep.iter().map(|&i| dims[i]).product();
    let dim_traced: usize = traced.iter().map(|&i| dims[i]).product();

    // Flat offset contributed by a mixed-radix multi-index over `factors`.
    let offset = |factors: &[usize], flat: usize| -> usize {
        let mut rest = flat;
        let mut off = 0;
        for &f in factors.iter().rev() {
            off += (rest % dims[f]) * strides[f];
            rest /= dims[f];
        }
        off
    };

    let mut out = ComplexMatrix::zeros(dim_keep, dim_keep);
    for row_k in 0..dim_keep {
        let row_base = offset(keep, row_k);
        for col_k in 0..dim_keep {
            let col_base = offset(keep, col_k);
            let mut acc = c(0.0, 0.0);
            for t in 0..dim_traced {
                let t_off = offset(&traced, t);
                acc += m.get(row_base + t_off, col_base + t_off);
            }
            out.set(row_k, col_k, acc);
        }
    }
    Ok(out)
}

/// Series-based propagator exp(-i * m * t), computed by scaling-and-squaring
/// with a Taylor series truncated when a term's norm drops below
/// [`EXPM_TERM_TOL`]. Deliberately naive and kept independent of the
/// closed-form evolution paths so it can serve as a cross-check reference.
pub fn expm_oracle(m: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain("non-finite time".into()));
    }
    let n = m.rows();
    let a = m.scale(c(0.0, -t));
    let norm = a.inf_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let b = a.scale(c(0.5f64.powi(squarings as i32), 0.0));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=300 {
        term = &term * &b;
        term = term.scale(c(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.frobenius_norm() < EXPM_TERM_TOL {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite
/// within the documented tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a candidate density matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidDensityMatrix("not square".into()));
        }
        if !mat.all_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        let dev = mat.hermitian_deviation();
        if dev > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity deviation {dev:.3e}"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > DENSITY_TRACE_TOL || trace.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} + {}i is not 1",
                trace.re, trace.im
            )));
        }
        let eigen = hermitian_eigen(&mat)?;
        if let Some(&min) = eigen.values.last() {
            if min < DENSITY_EIGENVALUE_FLOOR {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { mat })
    }

    /// |psi><psi| / <psi|psi> for a nonzero state vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 || !norm_sqr.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite state".into()));
        }
        let mat = outer(psi, psi).scale(c(1.0 / norm_sqr, 0.0));
        Self::new(mat)
    }

    /// Computational basis state |k><k| in the given dimension.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Dimension(format!("basis index {k} >= dim {dim}")));
        }
        let mut psi = vec![c(0.0, 0.0); dim];
        psi[k] = c(1.0, 0.0);
        Self::from_pure(&psi)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("zero-dimensional space".into()));
        }
        let mat = ComplexMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0));
        Self::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat.get(i, j) * self.mat.get(j, i)).re;
            }
        }
        acc
    }

    /// Partial trace over the factors not in `keep`; see [`partial_trace`].
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        Self::new(partial_trace(&self.mat, dims, keep)?)
    }
}
