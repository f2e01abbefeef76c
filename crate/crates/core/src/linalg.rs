//! Fixed-size 3D real linear algebra: symmetric forms, Sylvester signatures,
//! eigenstructure of 3×3 operators and a small least-squares solver.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

/// Coordinates of a vector in a declared basis.
pub type Vec3 = Vector3<f64>;

/// An endomorphism acting on column coordinates.
pub type Endo3 = Matrix3<f64>;

/// Default relative tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `max_abs(m)`, or 1 when the matrix is identically zero.
pub fn scale_of(m: &Matrix3<f64>) -> f64 {
    let s = max_abs(m);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Matrix as row-major nested arrays (the JSON layout).
pub fn to_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

pub fn from_rows(rows: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rows[i][j])
}

/// A symmetric bilinear form, stored as a full symmetric matrix.
///
/// Every constructor produces an exactly symmetric matrix. Serializes as
/// row-major nested arrays; deserialization reads the lower triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 3]; 3]", from = "[[f64; 3]; 3]")]
pub struct SymForm3(Matrix3<f64>);

impl From<SymForm3> for [[f64; 3]; 3] {
    fn from(s: SymForm3) -> Self {
        to_rows(&s.0)
    }
}

impl From<[[f64; 3]; 3]> for SymForm3 {
    fn from(rows: [[f64; 3]; 3]) -> Self {
        SymForm3::from_lower(&from_rows(&rows))
    }
}

impl SymForm3 {
    /// Reads the lower triangle of `m` and mirrors it.
    pub fn from_lower(m: &Matrix3<f64>) -> Self {
        Self(Matrix3::from_fn(
            |i, j| if i >= j { m[(i, j)] } else { m[(j, i)] },
        ))
    }

    /// Symmetric part `(m + mᵗ)/2`.
    pub fn symmetrized(m: &Matrix3<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Self(Matrix3::from_diagonal(&Vector3::new(a, b, c)))
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn eval(&self, u: &Vec3, v: &Vec3) -> f64 {
        u.dot(&(self.0 * v))
    }

    /// Congruence `PᵗGP`.
    pub fn congruent(&self, p: &Endo3) -> Self {
        Self::symmetrized(&(p.transpose() * self.0 * p))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// Sylvester counts of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: u8,
    pub n_minus: u8,
    pub n_zero: u8,
}

impl Signature {
    pub const fn new(n_plus: u8, n_minus: u8, n_zero: u8) -> Self {
        Self {
            n_plus,
            n_minus,
            n_zero,
        }
    }

    pub const LORENTZIAN: Signature = Signature::new(2, 1, 0);
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let e = SymmetricEigen::new(*m).eigenvalues;
    let mut v = [e[0], e[1], e[2]];
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Counts eigenvalues above `tol·scale`, below `−tol·scale` and in between,
/// with `scale` the largest absolute entry (1 for the zero form).
pub fn sylvester_signature(form: &SymForm3, tol: f64) -> Signature {
    signature_with_threshold(form, tol * scale_of(form.matrix()))
}

/// Sylvester counts with an absolute zero threshold, for forms whose natural
/// scale is set elsewhere (a Ricci form that vanishes up to rounding).
pub fn signature_with_threshold(form: &SymForm3, thr: f64) -> Signature {
    let mut sig = Signature::new(0, 0, 0);
    for ev in symmetric_eigenvalues(form.matrix()) {
        if ev > thr {
            sig.n_plus += 1;
        } else if ev < -thr {
            sig.n_minus += 1;
        } else {
            sig.n_zero += 1;
        }
    }
    sig
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    ThreeReal,
    RealPlusComplexPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealEigenvalue {
    pub value: f64,
    pub algebraic: u8,
    pub geometric: u8,
}

/// Complex conjugate pair `α ± iβ`, `β > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEigenvalue {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData3 {
    pub kind: SpectrumKind,
    /// Distinct real eigenvalues, ascending.
    pub real: Vec<RealEigenvalue>,
    pub complex: Option<ComplexEigenvalue>,
    /// Scale the decisions were made against (largest absolute entry).
    pub scale: f64,
    /// Smallest relative distance between a computed decision quantity and
    /// its threshold. Small values flag inputs close to a type boundary.
    pub margin: f64,
}

impl EigenData3 {
    pub fn algebraic_total(&self) -> u8 {
        self.real.iter().map(|e| e.algebraic).sum::<u8>()
            + if self.complex.is_some() { 2 } else { 0 }
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.complex.is_none() && self.real.iter().all(|e| e.algebraic == e.geometric)
    }
}

/// Roots of the normalized depressed cubic `τ³ + pτ + q`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum CubicRoots {
    Triple,
    /// (double root, simple root)
    Double(f64, f64),
    Distinct([f64; 3]),
    /// (real root, α, β)
    Complex(f64, f64, f64),
}

fn newton_polish(p: f64, q: f64, t: f64) -> f64 {
    let f = t * t * t + p * t + q;
    let df = 3.0 * t * t + p;
    if df.abs() > 1e-300 {
        let next = t - f / df;
        // near a double root the derivative vanishes and the step can overshoot
        if next.is_finite() && (next * next * next + p * next + q).abs() < f.abs() {
            return next;
        }
    }
    t
}

/// Solves `τ³ + pτ + q = 0` for coefficients already normalized to unit scale.
/// Returns the roots and the relative margin of the discriminant decision.
fn depressed_cubic(p: f64, q: f64, tol: f64) -> (CubicRoots, f64) {
    if p.abs() <= tol && q.abs() <= tol {
        return (CubicRoots::Triple, (tol - p.abs().max(q.abs())) / tol);
    }
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let margin = (disc.abs() - tol).abs() / tol;
    let roots = separated_roots(p, q, disc);
    if disc.abs() <= tol {
        // All three roots may cluster well inside the unit scale, which
        // makes the discriminant tiny although no two roots coincide. Merge
        // only when two roots are closer than the √tol they are pinned to.
        let sep = root_separation(&roots);
        let thr = tol.sqrt();
        if sep > thr {
            return (roots, (sep - thr) / thr);
        }
        // p < 0 here: a double root forces p = -3r², away from zero.
        let double = -1.5 * q / p;
        let simple = 3.0 * q / p;
        return (
            CubicRoots::Double(double, simple),
            margin.min((thr - sep) / thr),
        );
    }
    (roots, margin)
}

fn separated_roots(p: f64, q: f64, disc: f64) -> CubicRoots {
    if disc > 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, root) in r.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *root = newton_polish(p, q, t);
        }
        r.sort_by(|a, b| a.total_cmp(b));
        CubicRoots::Distinct(r)
    } else {
        let d = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let t = (-q / 2.0 + d).cbrt() + (-q / 2.0 - d).cbrt();
        let t = newton_polish(p, q, t);
        let alpha = -t / 2.0;
        let beta = (3.0 * t * t / 4.0 + p).max(0.0).sqrt();
        CubicRoots::Complex(t, alpha, beta)
    }
}

fn root_separation(r: &CubicRoots) -> f64 {
    match *r {
        CubicRoots::Distinct(r) => (r[1] - r[0]).min(r[2] - r[1]),
        CubicRoots::Complex(t, alpha, beta) => (2.0 * beta).min((t - alpha).hypot(beta)),
        _ => 0.0,
    }
}

/// Singular values of a 3×3 matrix, descending.
pub fn singular_values(m: &Matrix3<f64>) -> [f64; 3] {
    let sv = m.svd(false, false).singular_values;
    let mut v = [sv[0], sv[1], sv[2]];
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Orthonormal (Euclidean) basis of the numerical kernel of `m`, computed
/// from the `dim` smallest right singular vectors.
pub fn kernel_basis(m: &Matrix3<f64>, dim: usize) -> Vec<Vec3> {
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut idx: Vec<usize> = (0..3).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    idx.iter()
        .take(dim)
        .map(|&k| vt.row(k).transpose())
        .collect()
}

/// Number of singular values of `m` at or below `thr`, and the relative gap
/// between that decision and the threshold.
fn kernel_dim(m: &Matrix3<f64>, thr: f64, scale: f64) -> (u8, f64) {
    let sv = singular_values(m);
    let dim = sv.iter().filter(|&&s| s <= thr).count() as u8;
    let margin = sv
        .iter()
        .map(|s| (s - thr).abs() / scale)
        .fold(f64::INFINITY, f64::min);
    (dim, margin)
}

/// Eigen-data of a 3×3 real operator.
///
/// The characteristic cubic is depressed and normalized by the largest
/// absolute entry `s`. The discriminant decides between three real roots, a
/// complex pair and a repeated root; repeated roots are read off in closed
/// form, which avoids the `√ε` splitting that Jordan blocks cause in iterative
/// solvers. Geometric multiplicities are kernel dimensions of `op − λI`.
/// Merged roots are only pinned to within `√tol·s`, so the kernel test for
/// them uses the matching threshold `√tol·s`.
pub fn eigenstructure(op: &Endo3, tol: f64) -> EigenData3 {
    let s = max_abs(op);
    if s == 0.0 {
        return EigenData3 {
            kind: SpectrumKind::ThreeReal,
            real: vec![RealEigenvalue {
                value: 0.0,
                algebraic: 3,
                geometric: 3,
            }],
            complex: None,
            scale: 1.0,
            margin: 1.0,
        };
    }
    let shift = op.trace() / 3.0;
    let m = (op - Matrix3::identity() * shift) / s;
    let p = -0.5 * (m * m).trace();
    let q = -m.determinant();
    let (roots, cubic_margin) = depressed_cubic(p, q, tol);
    let rank_thr = tol.sqrt() * s;
    let geo = |lambda: f64| kernel_dim(&(op - Matrix3::identity() * lambda), rank_thr, s);
    match roots {
        CubicRoots::Triple => {
            let (g, km) = geo(shift);
            EigenData3 {
                kind: SpectrumKind::ThreeReal,
                real: vec![RealEigenvalue {
                    value: shift,
                    algebraic: 3,
                    geometric: g.clamp(1, 3),
                }],
                complex: None,
                scale: s,
                margin: cubic_margin.min(km),
            }
        }
        CubicRoots::Double(d, single) => {
            let ld = shift + s * d;
            let ls = shift + s * single;
            let (g, km) = geo(ld);
            let mut real = vec![
                RealEigenvalue {
                    value: ld,
                    algebraic: 2,
                    geometric: g.clamp(1, 2),
                },
                RealEigenvalue {
                    value: ls,
                    algebraic: 1,
                    geometric: 1,
                },
            ];
            real.sort_by(|a, b| a.value.total_cmp(&b.value));
            EigenData3 {
                kind: SpectrumKind::ThreeReal,
                real,
                complex: None,
                scale: s,
                margin: cubic_margin.min(km),
            }
        }
        CubicRoots::Distinct(r) => EigenData3 {
            kind: SpectrumKind::ThreeReal,
            real: r
                .iter()
                .map(|t| RealEigenvalue {
                    value: shift + s * t,
                    algebraic: 1,
                    geometric: 1,
                })
                .collect(),
            complex: None,
            scale: s,
            margin: cubic_margin,
        },
        CubicRoots::Complex(t, alpha, beta) => EigenData3 {
            kind: SpectrumKind::RealPlusComplexPair,
            real: vec![RealEigenvalue {
                value: shift + s * t,
                algebraic: 1,
                geometric: 1,
            }],
            complex: Some(ComplexEigenvalue {
                alpha: shift + s * alpha,
                beta: s * beta,
            }),
            scale: s,
            margin: cubic_margin,
        },
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquares {
    pub x: Vec<f64>,
    pub residual: f64,
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Minimum-norm least-squares solution of `Ax = b` via SVD.
///
/// Singular values below `tol·σ_max` are treated as zero and set the
/// rank-deficiency flag.
pub fn solve_linear(rows: &[Vec<f64>], b: &[f64], tol: f64) -> LeastSquares {
    assert!(!rows.is_empty(), "solve_linear needs at least one row");
    assert_eq!(rows.len(), b.len(), "row count must match right-hand side");
    let n = rows[0].len();
    assert!(
        rows.iter().all(|r| r.len() == n),
        "rows must have equal length"
    );
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    let cutoff = tol * if smax > 0.0 { smax } else { 1.0 };
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let x = if rank == 0 {
        DVector::zeros(n)
    } else {
        svd.solve(&rhs, cutoff).expect("u and v_t were computed")
    };
    let residual = (&a * &x - &rhs).norm();
    LeastSquares {
        x: x.iter().copied().collect(),
        residual,
        rank,
        rank_deficient: rank < n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn signature_examples() {
        let tol = DEFAULT_TOL;
        assert_eq!(
            sylvester_signature(&SymForm3::diag(1.0, 1.0, -1.0), tol),
            Signature::new(2, 1, 0)
        );
        assert_eq!(
            sylvester_signature(&SymForm3::zero(), tol),
            Signature::new(0, 0, 3)
        );
        assert_eq!(
            sylvester_signature(&SymForm3::diag(6.0, 6.0, 2.0), tol),
            Signature::new(3, 0, 0)
        );
    }

    #[test]
    fn from_lower_mirrors() {
        let m = Matrix3::new(1.0, 9.0, 9.0, 2.0, 3.0, 9.0, 4.0, 5.0, 6.0);
        let f = SymForm3::from_lower(&m);
        assert_eq!(
            *f.matrix(),
            Matrix3::new(1.0, 2.0, 4.0, 2.0, 3.0, 5.0, 4.0, 5.0, 6.0)
        );
    }

    #[test]
    fn eigen_diag_distinct() {
        let e = eigenstructure(
            &Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0)),
            DEFAULT_TOL,
        );
        assert_eq!(e.kind, SpectrumKind::ThreeReal);
        let vals: Vec<f64> = e.real.iter().map(|r| r.value).collect();
        assert_eq!(e.real.len(), 3);
        for (v, want) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*v, want, epsilon = 1e-12);
        }
        assert!(e.real.iter().all(|r| r.algebraic == 1 && r.geometric == 1));
    }

    #[test]
    fn eigen_rotation_block() {
        // characteristic polynomial (x² + 1)(x − 5)
        let m = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 5.0);
        let e = eigenstructure(&m, DEFAULT_TOL);
        assert_eq!(e.kind, SpectrumKind::RealPlusComplexPair);
        assert_abs_diff_eq!(e.real[0].value, 5.0, epsilon = 1e-12);
        let c = e.complex.unwrap();
        assert_abs_diff_eq!(c.alpha, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.beta, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigen_jordan_block() {
        let m = Matrix3::new(1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0);
        let e = eigenstructure(&m, DEFAULT_TOL);
        assert_eq!(e.kind, SpectrumKind::ThreeReal);
        assert_eq!(e.real.len(), 2);
        assert_abs_diff_eq!(e.real[0].value, 1.0, epsilon = 1e-12);
        assert_eq!((e.real[0].algebraic, e.real[0].geometric), (2, 1));
        assert_abs_diff_eq!(e.real[1].value, 2.0, epsilon = 1e-12);
        assert!(!e.is_diagonalizable());
    }

    #[test]
    fn eigen_repeated_diagonalizable() {
        let e = eigenstructure(
            &Matrix3::from_diagonal(&Vector3::new(4.0, 4.0, -1.0)),
            DEFAULT_TOL,
        );
        assert_eq!(e.real.len(), 2);
        let d = e.real.iter().find(|r| r.algebraic == 2).unwrap();
        assert_abs_diff_eq!(d.value, 4.0, epsilon = 1e-12);
        assert_eq!(d.geometric, 2);
        assert!(e.is_diagonalizable());
    }

    #[test]
    fn eigen_triple_jordan_and_scalar() {
        let j = Matrix3::new(2.0, 1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 2.0);
        let e = eigenstructure(&j, DEFAULT_TOL);
        assert_eq!(e.real.len(), 1);
        assert_eq!((e.real[0].algebraic, e.real[0].geometric), (3, 1));
        assert_abs_diff_eq!(e.real[0].value, 2.0, epsilon = 1e-12);

        let e = eigenstructure(&(Matrix3::identity() * -3.0), DEFAULT_TOL);
        assert_eq!((e.real[0].algebraic, e.real[0].geometric), (3, 3));

        let e = eigenstructure(&Matrix3::zeros(), DEFAULT_TOL);
        assert_eq!((e.real[0].algebraic, e.real[0].geometric), (3, 3));
    }

    #[test]
    fn eigen_jordan_conjugated() {
        // Jordan structure survives a generic change of basis.
        let j = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let p = Matrix3::new(1.0, 2.0, 0.5, -1.0, 0.3, 2.0, 0.7, -0.4, 1.1);
        let m = p * j * p.try_inverse().unwrap();
        let e = eigenstructure(&m, DEFAULT_TOL);
        assert_eq!(e.real.len(), 1);
        assert_eq!((e.real[0].algebraic, e.real[0].geometric), (3, 2));
    }

    #[test]
    fn lstsq_examples() {
        let id = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let r = solve_linear(&id, &[1.0, 2.0, 3.0], DEFAULT_TOL);
        assert_abs_diff_eq!(r.residual, 0.0, epsilon = 1e-14);
        for (x, want) in r.x.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*x, want, epsilon = 1e-14);
        }
        assert!(!r.rank_deficient);

        let dup = vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
        let r = solve_linear(&dup, &[1.0, 1.0], DEFAULT_TOL);
        assert!(r.rank_deficient);
        assert_abs_diff_eq!(r.residual, 0.0, epsilon = 1e-14);
        for (x, want) in r.x.iter().zip([1.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*x, want, epsilon = 1e-14);
        }

        // closed form: x₁ = mean(1, 0) = ½, residual √(¼ + ¼)
        let inc = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        let r = solve_linear(&inc, &[1.0, 0.0], DEFAULT_TOL);
        assert_abs_diff_eq!(r.residual, 0.5_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.x[0], 0.5, epsilon = 1e-14);
    }
}
