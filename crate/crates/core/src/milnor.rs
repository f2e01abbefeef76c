//! The Lorentzian cross product, the operator `L` with `[u,v] = L(u×v)`, its
//! four normal-form types and pseudo-orthonormal frames realizing them.

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra3, MetricForm};
use crate::linalg::{
    eigenstructure, kernel_basis, max_abs, scale_of, EigenData3, Endo3, SpectrumKind, Vec3,
};
use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Positive => "+",
            Orientation::Negative => "-",
        })
    }
}

/// `w` with `⟨w, z⟩ = o·vol(u, v, z)`, where `vol` is the coordinate
/// determinant scaled by `√(−det G)`.
pub fn cross(u: &Vec3, v: &Vec3, g: &MetricForm, o: Orientation) -> Vec3 {
    let vol = (-g.matrix().determinant()).sqrt();
    g.inverse() * u.cross(v) * (o.sign() * vol)
}

/// `L` for a metric and orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilnorOperator {
    l: Endo3,
    metric: MetricForm,
    orientation: Orientation,
}

impl MilnorOperator {
    /// Wraps an endomorphism, checking self-adjointness: `GL` must be
    /// symmetric to within `√tol` of its scale.
    pub fn new(l: Endo3, metric: MetricForm, orientation: Orientation, tol: f64) -> Result<Self> {
        if !l.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let gl = metric.matrix() * l;
        let defect = max_abs(&(gl - gl.transpose()));
        let scale = max_abs(metric.matrix()) * max_abs(&l);
        if defect > tol.sqrt() * scale {
            return Err(Error::NotSelfAdjoint(defect));
        }
        Ok(Self {
            l,
            metric,
            orientation,
        })
    }

    pub fn matrix(&self) -> &Endo3 {
        &self.l
    }

    pub fn metric(&self) -> &MetricForm {
        &self.metric
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The operator for the opposite orientation, `−L`.
    pub fn flipped(&self) -> Self {
        Self {
            l: -self.l,
            metric: self.metric,
            orientation: self.orientation.flipped(),
        }
    }
}

const PAIRS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

/// Solves `[Xᵢ,Xⱼ] = L(Xᵢ×Xⱼ)` for `L`. Fails with
/// [`Error::NotSelfAdjoint`] on non-unimodular algebras.
pub fn milnor_operator(
    alg: &LieAlgebra3,
    g: &MetricForm,
    o: Orientation,
    tol: f64,
) -> Result<MilnorOperator> {
    let e = |i| Vec3::ith(i, 1.0);
    let mut c = Matrix3::zeros();
    let mut b = Matrix3::zeros();
    for (col, &(i, j)) in PAIRS.iter().enumerate() {
        c.set_column(col, &cross(&e(i), &e(j), g, o));
        b.set_column(col, &alg.structure(i, j));
    }
    let c_inv = c.try_inverse().ok_or(Error::Singular)?;
    MilnorOperator::new(b * c_inv, *g, o, tol)
}

/// The four normal forms of a self-adjoint operator on a Lorentzian 3-space,
/// in a frame with `⟨e₁,e₁⟩ = ⟨e₂,e₂⟩ = 1`, `⟨e₃,e₃⟩ = −1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum OperatorType {
    /// `Lеᵢ` = a e₁, b e₂, c e₃ (e₃ timelike).
    DiagonalReal { a: f64, b: f64, c: f64 },
    /// `Le₁ = a e₁`, `Le₂ = αe₂ − βe₃`, `Le₃ = βe₂ + αe₃`.
    ComplexPair { a: f64, alpha: f64, beta: f64 },
    /// `Le₁ = a e₁` plus a 2×2 Jordan block at `b` on a null direction.
    DoubleRoot { a: f64, b: f64 },
    /// A 3×3 Jordan block at `a`.
    TripleRoot { a: f64 },
}

impl OperatorType {
    /// Matrix of `L` in the frame (columns `Le₁, Le₂, Le₃`).
    pub fn normal_form_matrix(&self) -> Endo3 {
        match *self {
            OperatorType::DiagonalReal { a, b, c } => Matrix3::from_diagonal(&Vec3::new(a, b, c)),
            OperatorType::ComplexPair { a, alpha, beta } => {
                Matrix3::new(a, 0.0, 0.0, 0.0, alpha, beta, 0.0, -beta, alpha)
            }
            OperatorType::DoubleRoot { a, b } => {
                Matrix3::new(a, 0.0, 0.0, 0.0, b + 0.5, -0.5, 0.0, 0.5, b - 0.5)
            }
            OperatorType::TripleRoot { a } => Matrix3::new(
                a,
                FRAC_1_SQRT_2,
                0.0,
                FRAC_1_SQRT_2,
                a,
                -FRAC_1_SQRT_2,
                0.0,
                FRAC_1_SQRT_2,
                a,
            ),
        }
    }

    /// Brackets of the frame: `[e₂,e₃] = Le₁`, `[e₃,e₁] = Le₂`,
    /// `[e₁,e₂] = −Le₃`.
    pub fn bracket_algebra(&self) -> LieAlgebra3 {
        let m = self.normal_form_matrix();
        let col = |j: usize| {
            let c = m.column(j);
            [c[0], c[1], c[2]]
        };
        let neg = |v: [f64; 3]| v.map(|x| -x);
        LieAlgebra3::from_brackets(&[(1, 2, col(0)), (2, 0, col(1)), (0, 1, neg(col(2)))])
            .with_basis(["e1", "e2", "e3"])
    }

    /// Type tag in the usual notation, e.g. `{abc}` or `{a z z̄}`.
    pub fn label(&self) -> &'static str {
        match self {
            OperatorType::DiagonalReal { .. } => "{abc}",
            OperatorType::ComplexPair { .. } => "{a z z̄}",
            OperatorType::DoubleRoot { .. } => "{ab2}",
            OperatorType::TripleRoot { .. } => "{a3}",
        }
    }

    pub fn kind(&self) -> TypeKind {
        match self {
            OperatorType::DiagonalReal { .. } => TypeKind::DiagonalReal,
            OperatorType::ComplexPair { .. } => TypeKind::ComplexPair,
            OperatorType::DoubleRoot { .. } => TypeKind::DoubleRoot,
            OperatorType::TripleRoot { .. } => TypeKind::TripleRoot,
        }
    }

    /// The same type for `−L` (frame re-chosen so that `β > 0` stays
    /// positive and Jordan blocks keep their coefficients).
    pub fn negated(&self) -> Option<Self> {
        match *self {
            OperatorType::DiagonalReal { a, b, c } => Some(OperatorType::DiagonalReal {
                a: -a,
                b: -b,
                c: -c,
            }),
            OperatorType::ComplexPair { a, alpha, beta } => Some(OperatorType::ComplexPair {
                a: -a,
                alpha: -alpha,
                beta,
            }),
            OperatorType::TripleRoot { a } => Some(OperatorType::TripleRoot { a: -a }),
            // −L has the Jordan block with the opposite sign of ε
            OperatorType::DoubleRoot { .. } => None,
        }
    }
}

impl fmt::Display for OperatorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OperatorType::DiagonalReal { a, b, c } => write!(f, "{{abc}} a={a} b={b} c={c}"),
            OperatorType::ComplexPair { a, alpha, beta } => {
                write!(f, "{{a z z̄}} a={a} α={alpha} β={beta}")
            }
            OperatorType::DoubleRoot { a, b } => write!(f, "{{ab2}} a={a} b={b}"),
            OperatorType::TripleRoot { a } => write!(f, "{{a3}} a={a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeKind {
    DiagonalReal,
    ComplexPair,
    DoubleRoot,
    TripleRoot,
}

/// Result of classifying a self-adjoint operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeClassification {
    #[serde(rename = "operator_type")]
    pub ty: OperatorType,
    /// +1 when the operator itself has the normal form `ty`, −1 when its
    /// negative does. Only Jordan blocks of the form `bI − ½n⟨n,·⟩` need −1.
    pub sign: i8,
    pub eigen: EigenData3,
    /// Relative distance of the type decision from its thresholds.
    pub margin: f64,
    /// Largest deviation of the frame from orthonormality and of the
    /// conjugated operator from its normal form.
    pub frame_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoOrthonormalBasis {
    pub e: [Vec3; 3],
}

impl PseudoOrthonormalBasis {
    /// Columns `e₁, e₂, e₃`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&self.e)
    }

    /// Largest deviation of the Gram matrix from `diag(1,1,−1)`.
    pub fn gram_defect(&self, g: &MetricForm) -> f64 {
        let eta = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        let m = self.matrix();
        max_abs(&(m.transpose() * g.matrix() * m - eta))
    }

    /// `o·det(E)·√(−det G)`, which is ±1 for an orthonormal frame.
    pub fn orientation_sign(&self, g: &MetricForm, o: Orientation) -> f64 {
        o.sign() * self.matrix().determinant() * (-g.matrix().determinant()).sqrt()
    }

    /// Structure constants of `alg` re-expressed in this frame.
    pub fn brackets_in_frame(&self, alg: &LieAlgebra3) -> Result<LieAlgebra3> {
        let m = self.matrix();
        let inv = m.try_inverse().ok_or(Error::Singular)?;
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let b = inv * alg.bracket(&self.e[i], &self.e[j]);
                c[i][j] = [b[0], b[1], b[2]];
            }
        }
        Ok(LieAlgebra3::from_constants(c).with_basis(["e1", "e2", "e3"]))
    }
}

fn unit(v: Vec3, g: &MetricForm) -> Vec3 {
    v / g.inner(&v, &v).abs().sqrt()
}

/// Pseudo-orthonormal basis of a nondegenerate subspace spanned by the
/// columns of `k`, diagonalizing the restricted Gram matrix.
fn orthonormal_in(k: &[Vec3], g: &MetricForm) -> Vec<Vec3> {
    let n = k.len();
    let gram = nalgebra::DMatrix::from_fn(n, n, |i, j| g.inner(&k[i], &k[j]));
    let eig = SymmetricEigen::new(gram);
    (0..n)
        .map(|c| {
            let mut v = Vec3::zeros();
            for (i, ki) in k.iter().enumerate() {
                v += ki * eig.eigenvectors[(i, c)];
            }
            unit(v, g)
        })
        .collect()
}

/// Basis of the `g`-orthogonal complement of `v`.
fn complement(v: &Vec3, g: &MetricForm) -> Vec<Vec3> {
    let gv = g.matrix() * v;
    let row = Matrix3::from_rows(&[
        gv.transpose(),
        Vec3::zeros().transpose(),
        Vec3::zeros().transpose(),
    ]);
    kernel_basis(&row, 2)
}

struct Frame {
    e: [Vec3; 3],
    sign: i8,
}

fn diagonal_frame(op: &Endo3, g: &MetricForm, eig: &EigenData3) -> Result<Frame> {
    let mut vecs: Vec<(f64, Vec3)> = Vec::new();
    for ev in &eig.real {
        let shifted = op - Matrix3::identity() * ev.value;
        let k = kernel_basis(&shifted, ev.geometric as usize);
        for v in orthonormal_in(&k, g) {
            vecs.push((ev.value, v));
        }
    }
    let (time, space): (Vec<_>, Vec<_>) = vecs.into_iter().partition(|(_, v)| g.inner(v, v) < 0.0);
    if time.len() != 1 || space.len() != 2 {
        return Err(Error::DegenerateFrame(f64::NAN));
    }
    let mut space = space;
    space.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Frame {
        e: [space[0].1, space[1].1, time[0].1],
        sign: 1,
    })
}

fn complex_frame(op: &Endo3, g: &MetricForm, eig: &EigenData3) -> Result<Frame> {
    let z = eig.complex.expect("complex pair present");
    let a = eig.real[0].value;
    let id = Matrix3::identity();
    let e1 = unit(kernel_basis(&(op - id * a), 1)[0], g);
    let shifted = op - id * z.alpha;
    let plane = shifted * shifted + id * (z.beta * z.beta);
    let x = kernel_basis(&plane, 2)[0];
    let y = shifted * x / z.beta;
    let (xx, yy, xy) = (g.inner(&x, &x), g.inner(&y, &y), g.inner(&x, &y));
    let theta = 0.5 * (2.0 * xy).atan2(xx - yy);
    let (s, c) = theta.sin_cos();
    let (mut x, mut y) = (x * c + y * s, y * c - x * s);
    if g.inner(&x, &x) < 0.0 {
        // multiply the eigenvector x − iy by i
        let (nx, ny) = (y, -x);
        x = nx;
        y = ny;
    }
    let norm = g.inner(&x, &x).abs().sqrt();
    Ok(Frame {
        e: [e1, x / norm, -y / norm],
        sign: 1,
    })
}

/// Null vectors `n` and `n₂` with `⟨n, n₂⟩ = 2` turned into `e₂ = (n+n₂)/2`,
/// `e₃ = (n−n₂)/2`, where `N = L − bI = ε/2·n⟨n,·⟩` on `e₁^⊥`.
fn double_root_frame(op: &Endo3, g: &MetricForm, eig: &EigenData3) -> Result<Frame> {
    let id = Matrix3::identity();
    let (double, simple) = if eig.real.len() == 1 {
        (eig.real[0].value, eig.real[0].value)
    } else {
        let d = eig
            .real
            .iter()
            .find(|r| r.algebraic == 2)
            .expect("double root");
        let s = eig
            .real
            .iter()
            .find(|r| r.algebraic == 1)
            .expect("simple root");
        (d.value, s.value)
    };
    let e1 = if eig.real.len() == 1 {
        let k = kernel_basis(&(op - id * simple), 2);
        let gram = Matrix2::new(
            g.inner(&k[0], &k[0]),
            g.inner(&k[0], &k[1]),
            g.inner(&k[1], &k[0]),
            g.inner(&k[1], &k[1]),
        );
        let eg = SymmetricEigen::new(gram);
        let top = if eg.eigenvalues[0] >= eg.eigenvalues[1] {
            0
        } else {
            1
        };
        k[0] * eg.eigenvectors[(0, top)] + k[1] * eg.eigenvectors[(1, top)]
    } else {
        kernel_basis(&(op - id * simple), 1)[0]
    };
    if g.inner(&e1, &e1) <= 0.0 {
        return Err(Error::DegenerateFrame(g.inner(&e1, &e1)));
    }
    let e1 = unit(e1, g);
    let n_op = op - id * double;
    let w_basis = complement(&e1, g);
    let w = if (n_op * w_basis[0]).norm() >= (n_op * w_basis[1]).norm() {
        w_basis[0]
    } else {
        w_basis[1]
    };
    let m = n_op * w;
    let s = g.inner(&m, &w);
    if s == 0.0 {
        return Err(Error::DegenerateFrame(0.0));
    }
    let eps: i8 = if s > 0.0 { 1 } else { -1 };
    let n = m * (2.0 / s.abs()).sqrt();
    let nw = g.inner(&n, &w);
    let w_null = w - n * (g.inner(&w, &w) / (2.0 * nw));
    let n2 = w_null * (2.0 / nw);
    Ok(Frame {
        e: [e1, (n + n2) * 0.5, (n - n2) * 0.5],
        sign: eps,
    })
}

fn triple_root_frame(op: &Endo3, g: &MetricForm, eig: &EigenData3) -> Result<Frame> {
    let a = eig.real[0].value;
    let n_op = op - Matrix3::identity() * a;
    let n2_op = n_op * n_op;
    let cols = [0, 1, 2].map(|i| (n2_op * Vec3::ith(i, 1.0)).norm());
    let k = (0..3)
        .max_by(|&i, &j| cols[i].total_cmp(&cols[j]))
        .expect("three columns");
    let w = Vec3::ith(k, 1.0);
    let q = g.inner(&w, &(n2_op * w));
    if q <= 0.0 {
        return Err(Error::DegenerateFrame(q));
    }
    let w1 = w / (2.0 * q).sqrt();
    let nw1 = n_op * w1;
    let s = -g.inner(&w1, &nw1);
    let t = 1.0 - g.inner(&w1, &w1) - 2.0 * s * g.inner(&w1, &nw1) - s * s / 2.0;
    let e1 = w1 + nw1 * s + n2_op * w1 * t;
    let e2 = n_op * e1 * std::f64::consts::SQRT_2;
    let e3 = n2_op * e1 * 2.0 - e1;
    Ok(Frame {
        e: [e1, e2, e3],
        sign: 1,
    })
}

/// Reads the normal-form parameters off `E⁻¹LE` (times the sign).
fn read_params(kind: TypeKind, m: &Endo3) -> OperatorType {
    match kind {
        TypeKind::DiagonalReal => OperatorType::DiagonalReal {
            a: m[(0, 0)],
            b: m[(1, 1)],
            c: m[(2, 2)],
        },
        TypeKind::ComplexPair => OperatorType::ComplexPair {
            a: m[(0, 0)],
            alpha: 0.5 * (m[(1, 1)] + m[(2, 2)]),
            beta: 0.5 * (m[(1, 2)] - m[(2, 1)]),
        },
        TypeKind::DoubleRoot => OperatorType::DoubleRoot {
            a: m[(0, 0)],
            b: 0.5 * (m[(1, 1)] + m[(2, 2)]),
        },
        TypeKind::TripleRoot => OperatorType::TripleRoot { a: m.trace() / 3.0 },
    }
}

/// Frame residuals up to this multiple of `√tol` are accepted; Jordan data
/// is only determined to about `√ε`.
const FRAME_SLACK: f64 = 10.0;

/// Type of a self-adjoint operator together with a frame realizing it.
///
/// The frame is pseudo-orthonormal with orientation `sign` relative to the
/// operator's orientation, so that the algebra's brackets in the frame are
/// exactly those of [`OperatorType::bracket_algebra`].
pub fn canonical_frame(
    m: &MilnorOperator,
    tol: f64,
) -> Result<(PseudoOrthonormalBasis, TypeClassification)> {
    let op = m.matrix();
    let g = m.metric();
    let eig = eigenstructure(op, tol);
    let kind = match eig.kind {
        SpectrumKind::RealPlusComplexPair => TypeKind::ComplexPair,
        SpectrumKind::ThreeReal => {
            if eig.is_diagonalizable() {
                TypeKind::DiagonalReal
            } else if eig.real.len() == 1 && eig.real[0].geometric == 1 {
                TypeKind::TripleRoot
            } else {
                TypeKind::DoubleRoot
            }
        }
    };
    let frame = match kind {
        TypeKind::DiagonalReal => diagonal_frame(op, g, &eig)?,
        TypeKind::ComplexPair => complex_frame(op, g, &eig)?,
        TypeKind::DoubleRoot => double_root_frame(op, g, &eig)?,
        TypeKind::TripleRoot => triple_root_frame(op, g, &eig)?,
    };
    let mut basis = PseudoOrthonormalBasis { e: frame.e };
    let target = f64::from(frame.sign);
    if basis.orientation_sign(g, m.orientation()) * target < 0.0 {
        match kind {
            TypeKind::TripleRoot => basis.e = basis.e.map(|v| -v),
            _ => basis.e[0] = -basis.e[0],
        }
    }
    let e = basis.matrix();
    let inv = e
        .try_inverse()
        .ok_or(Error::DegenerateFrame(f64::INFINITY))?;
    let conj = inv * op * e * target;
    let ty = read_params(kind, &conj);
    let scale = scale_of(op);
    let residual = (max_abs(&(conj - ty.normal_form_matrix())) / scale).max(basis.gram_defect(g));
    if !residual.is_finite() || residual > FRAME_SLACK * tol.sqrt() {
        return Err(Error::DegenerateFrame(residual));
    }
    let margin = eig.margin;
    Ok((
        basis,
        TypeClassification {
            ty,
            sign: frame.sign,
            eigen: eig,
            margin,
            frame_residual: residual,
        },
    ))
}

pub fn classify_operator(m: &MilnorOperator, tol: f64) -> Result<TypeClassification> {
    canonical_frame(m, tol).map(|(_, c)| c)
}

/// Classifies an arbitrary `g`-self-adjoint endomorphism, e.g. a Ricci
/// operator, with the positive orientation.
pub fn classify_self_adjoint(op: &Endo3, g: &MetricForm, tol: f64) -> Result<TypeClassification> {
    classify_operator(
        &MilnorOperator::new(*op, *g, Orientation::Positive, tol)?,
        tol,
    )
}
