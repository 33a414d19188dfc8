//! Small dense linear-algebra helpers shared by the certification stages.
//!
//! Everything here operates on 4x4 matrices, so the routines favor
//! explicitness over generality: full-pivot elimination for null vectors,
//! Schur-based eigenvalues with a Durand-Kerner fallback, scaled-and-squared
//! series for the matrix exponential.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

pub type Mat4 = Matrix4<f64>;
pub type Vec4 = Vector4<f64>;
pub type CMat4 = Matrix4<Complex64>;
pub type CVec4 = Vector4<Complex64>;

/// Lift a real matrix into the complex field.
pub fn to_complex(m: &Mat4) -> CMat4 {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Largest absolute entry.
pub fn entry_inf_norm(m: &Mat4) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest entrywise deviation from symmetry, `max |m_ij - m_ji|`.
pub fn symmetry_residual(m: &Mat4) -> f64 {
    let mut r = 0.0_f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            r = r.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    r
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// The input is symmetrized explicitly so that tiny asymmetries from
/// round-off do not leak into the decomposition.
pub fn symmetric_eigenvalues(m: &Mat4) -> [f64; 4] {
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut vals = [0.0; 4];
    for (i, v) in eig.eigenvalues.iter().enumerate() {
        vals[i] = *v;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_symmetric_eigenvalue(m: &Mat4) -> f64 {
    symmetric_eigenvalues(m)[0]
}

/// Coefficients of `det(x I - M) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0`
/// via the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &CMat4) -> [Complex64; 4] {
    let id = CMat4::identity();
    let mut mk = *m;
    let c3 = -mk.trace();
    mk = m * (mk + id * c3);
    let c2 = -mk.trace() / Complex64::new(2.0, 0.0);
    mk = m * (mk + id * c2);
    let c1 = -mk.trace() / Complex64::new(3.0, 0.0);
    mk = m * (mk + id * c1);
    let c0 = -mk.trace() / Complex64::new(4.0, 0.0);
    [c0, c1, c2, c3]
}

/// Durand-Kerner (Weierstrass) iteration for the roots of a monic quartic.
fn quartic_roots(c: &[Complex64; 4]) -> [Complex64; 4] {
    let eval = |z: Complex64| (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
    // Radius bound and non-real, non-unit-modulus starting points.
    let radius = 1.0 + c.iter().map(|x| x.norm()).fold(0.0_f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots = [
        seed * radius,
        seed * seed * radius,
        seed * seed * seed * radius,
        seed * seed * seed * seed * radius,
    ];
    for _ in 0..200 {
        let mut max_step = 0.0_f64;
        for i in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Eigenvalues of a complex 4x4 matrix.
///
/// Uses the complex Schur decomposition and falls back to Durand-Kerner on
/// the characteristic polynomial if the QR iteration fails to converge.
pub fn complex_eigenvalues(m: &CMat4) -> [Complex64; 4] {
    if let Some(schur) = m.try_schur(1e-14, 200) {
        if let Some(vals) = schur.eigenvalues() {
            let mut out = [Complex64::new(0.0, 0.0); 4];
            for (i, v) in vals.iter().enumerate() {
                out[i] = *v;
            }
            return out;
        }
    }
    quartic_roots(&characteristic_polynomial(m))
}

/// A unit null vector of a (numerically) singular complex matrix, found by
/// full-pivot Gaussian elimination with the last pivoted variable left free.
pub fn null_vector(a: &CMat4) -> CVec4 {
    let mut m = *a;
    let mut perm = [0usize, 1, 2, 3];
    for k in 0..3 {
        // full pivoting over the trailing submatrix
        let (mut pi, mut pj, mut pv) = (k, k, 0.0_f64);
        for i in k..4 {
            for j in k..4 {
                let v = m[(i, j)].norm();
                if v > pv {
                    pv = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if pv == 0.0 {
            break;
        }
        m.swap_rows(k, pi);
        m.swap_columns(k, pj);
        perm.swap(k, pj);
        for i in (k + 1)..4 {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..4 {
                let sub = f * m[(k, j)];
                m[(i, j)] -= sub;
            }
        }
    }
    // back-substitution with the last permuted variable set to 1
    let mut y = [Complex64::new(0.0, 0.0); 4];
    y[3] = Complex64::new(1.0, 0.0);
    for k in (0..3).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for j in (k + 1)..4 {
            s += m[(k, j)] * y[j];
        }
        y[k] = if m[(k, k)].norm() > 0.0 {
            -s / m[(k, k)]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let mut v = CVec4::zeros();
    for k in 0..4 {
        v[perm[k]] = y[k];
    }
    let n = v.norm();
    if n > 0.0 {
        v / Complex64::new(n, 0.0)
    } else {
        v
    }
}

/// Eigendecomposition `M = V diag(values) V^{-1}` of a complex 4x4 matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub values: [Complex64; 4],
    pub vectors: CMat4,
    pub inverse: CMat4,
    /// Frobenius condition number of the eigenvector matrix.
    pub cond: f64,
}

/// Diagonalize `m`, returning `None` when the eigenvector matrix is singular
/// or its condition number exceeds `max_cond` (defective or near-defective
/// spectrum).
pub fn eigen_decompose(m: &CMat4, max_cond: f64) -> Option<EigenDecomp> {
    let values = complex_eigenvalues(m);
    let mut vectors = CMat4::zeros();
    for (i, lam) in values.iter().enumerate() {
        let shifted = m - CMat4::identity() * *lam;
        vectors.set_column(i, &null_vector(&shifted));
    }
    let inverse = vectors.try_inverse()?;
    let cond = vectors.norm() * inverse.norm();
    if !cond.is_finite() || cond > max_cond {
        return None;
    }
    Some(EigenDecomp {
        values,
        vectors,
        inverse,
        cond,
    })
}

/// Matrix exponential by scaling and squaring of the Taylor series.
pub fn matrix_exp(m: &CMat4) -> CMat4 {
    let norm = m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm())) * 4.0;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / Complex64::new(2.0_f64.powi(s as i32), 0.0);
    let mut sum = CMat4::identity();
    let mut term = CMat4::identity();
    for k in 1..=24 {
        term = (term * scaled) / Complex64::new(k as f64, 0.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}
