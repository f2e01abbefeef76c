//! Curvature properties: flat, constant curvature, Einstein, locally
//! symmetric, semi-symmetric, Ricci solitons, Ricci signature and type.
//!
//! Flatness is tested against `m²`, `m` being the largest entry of the
//! Levi-Civita table. Once the curvature is known to be nonzero, the other
//! tests are relative to its own size `κ` (largest entry of any `K(Xᵢ,Xⱼ)`):
//! `κ` for constant curvature, `|Ric|` for Einstein, `m·κ` for `∇K` and `κ²`
//! for the semi-symmetry defect. Scaling those by powers of `m` instead
//! would accept everything in a badly conditioned basis, where `m` can
//! exceed `√κ` by orders of magnitude.

use crate::curvature::{constant_curvature_fit, CurvatureData, LeviCivitaTable};
use crate::lie::{LieAlgebra3, MetricForm};
use crate::linalg::{max_abs, signature_with_threshold, solve_linear, Signature, Vec3};
use crate::milnor::{classify_self_adjoint, OperatorType};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

fn e(i: usize) -> Vec3 {
    Vec3::ith(i, 1.0)
}

pub fn is_flat(data: &CurvatureData, lc: &LeviCivitaTable, tol: f64) -> bool {
    let m = lc.scale();
    data.max_entry() <= tol * m * m
}

/// `λ` with `Ric = λ·Id`.
pub fn is_einstein(data: &CurvatureData, lc: &LeviCivitaTable, tol: f64) -> Option<f64> {
    if is_flat(data, lc, tol) {
        return Some(0.0);
    }
    let (lambda, defect) = einstein_fit(data);
    (defect <= tol * max_abs(&data.ric_op)).then_some(lambda)
}

fn kappa(data: &CurvatureData) -> f64 {
    let k = data.max_entry();
    if k > 0.0 {
        k
    } else {
        1.0
    }
}

fn einstein_fit(data: &CurvatureData) -> (f64, f64) {
    let lambda = data.ric_op.trace() / 3.0;
    (
        lambda,
        max_abs(&(data.ric_op - Matrix3::identity() * lambda)),
    )
}

/// Worst entry of `[L_u, K(v,w)] − K(L_u v, w) − K(v, L_u w)` over basis
/// triples.
pub fn nabla_k_defect(lc: &LeviCivitaTable, data: &CurvatureData) -> f64 {
    let mut d = 0.0_f64;
    for u in 0..3 {
        let lu = lc.basis_operator(u);
        for v in 0..3 {
            for w in 0..3 {
                let k = data.basis_operator(v, w);
                let x = lu * k
                    - k * lu
                    - data.operator(&(lu * e(v)), &e(w))
                    - data.operator(&e(v), &(lu * e(w)));
                d = d.max(max_abs(&x));
            }
        }
    }
    d
}

pub fn is_locally_symmetric(lc: &LeviCivitaTable, data: &CurvatureData, tol: f64) -> bool {
    is_flat(data, lc, tol) || nabla_k_defect(lc, data) <= tol * lc.scale() * kappa(data)
}

/// Worst entry of `[K(u,v),K(a,b)] − K(K(u,v)a, b) − K(a, K(u,v)b)` over
/// basis quadruples.
pub fn semi_symmetry_defect(data: &CurvatureData) -> f64 {
    let mut d = 0.0_f64;
    for u in 0..3 {
        for v in 0..3 {
            let kuv = data.basis_operator(u, v);
            for a in 0..3 {
                for b in 0..3 {
                    let kab = data.basis_operator(a, b);
                    let x = kuv * kab
                        - kab * kuv
                        - data.operator(&(kuv * e(a)), &e(b))
                        - data.operator(&e(a), &(kuv * e(b)));
                    d = d.max(max_abs(&x));
                }
            }
        }
    }
    d
}

pub fn is_semi_symmetric(data: &CurvatureData, lc: &LeviCivitaTable, tol: f64) -> bool {
    let k = kappa(data);
    is_flat(data, lc, tol) || semi_symmetry_defect(data) <= tol * k * k
}

/// `(L_X h)(Xᵢ,Xⱼ) = −⟨[X,Xᵢ],Xⱼ⟩ − ⟨Xᵢ,[X,Xⱼ]⟩` for left-invariant `X`.
pub fn lie_derivative_metric(alg: &LieAlgebra3, g: &MetricForm, x: &Vec3) -> Matrix3<f64> {
    let ad = alg.ad(x);
    let m = g.matrix() * ad;
    -(m + m.transpose())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolitonClass {
    Steady,
    Shrinking,
    Expanding,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonCertificate {
    pub x: [f64; 3],
    pub c: f64,
    pub class: SolitonClass,
    pub residual: f64,
}

/// Least-squares solution of `L_X h + ric = c·h` before thresholding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonFit {
    pub x: [f64; 3],
    pub c: f64,
    /// Largest entry of `L_X h + ric − c·h`.
    pub residual: f64,
    pub rank: usize,
    /// Largest absolute entry of `ric`, or 1 when it vanishes.
    pub scale: f64,
}

fn ric_scale(data: &CurvatureData) -> f64 {
    let s = max_abs(data.ric.matrix());
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Largest entry of `L_X h + ric − c·h`.
pub fn soliton_residual(
    alg: &LieAlgebra3,
    g: &MetricForm,
    data: &CurvatureData,
    x: &Vec3,
    c: f64,
) -> f64 {
    max_abs(&(lie_derivative_metric(alg, g, x) + data.ric.matrix() - g.matrix() * c))
}

/// Solves the six equations `i ≤ j` of `L_X h + ric = c·h` for `(X, c)` in
/// the minimum-norm least-squares sense.
pub fn soliton_fit(
    alg: &LieAlgebra3,
    g: &MetricForm,
    data: &CurvatureData,
    tol: f64,
) -> SolitonFit {
    let lx: Vec<Matrix3<f64>> = (0..3)
        .map(|k| lie_derivative_metric(alg, g, &e(k)))
        .collect();
    let mut rows = Vec::with_capacity(6);
    let mut rhs = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            rows.push(vec![
                lx[0][(i, j)],
                lx[1][(i, j)],
                lx[2][(i, j)],
                -g.matrix()[(i, j)],
            ]);
            rhs.push(-data.ric.matrix()[(i, j)]);
        }
    }
    let sol = solve_linear(&rows, &rhs, tol);
    let x = Vec3::new(sol.x[0], sol.x[1], sol.x[2]);
    let c = sol.x[3];
    SolitonFit {
        x: [x[0], x[1], x[2]],
        c,
        residual: soliton_residual(alg, g, data, &x, c),
        rank: sol.rank,
        scale: ric_scale(data),
    }
}

/// A certificate when the fit residual is at most `tol` times the Ricci
/// scale. Einstein metrics yield the trivial certificate `X = 0`.
pub fn ricci_soliton(
    alg: &LieAlgebra3,
    g: &MetricForm,
    data: &CurvatureData,
    tol: f64,
) -> Option<SolitonCertificate> {
    let fit = soliton_fit(alg, g, data, tol);
    (fit.residual <= tol * fit.scale).then(|| SolitonCertificate {
        x: fit.x,
        c: fit.c,
        class: soliton_class(fit.c, tol * fit.scale),
        residual: fit.residual,
    })
}

pub fn soliton_class(c: f64, thr: f64) -> SolitonClass {
    if c.abs() <= thr {
        SolitonClass::Steady
    } else if c < 0.0 {
        SolitonClass::Shrinking
    } else {
        SolitonClass::Expanding
    }
}

/// Signature of `ric` with zero threshold `tol·|ric|`; `(0,0,3)` when flat.
pub fn ricci_signature(data: &CurvatureData, lc: &LeviCivitaTable, tol: f64) -> Signature {
    if is_flat(data, lc, tol) {
        return Signature::new(0, 0, 3);
    }
    signature_with_threshold(&data.ric, tol * max_abs(data.ric.matrix()))
}

/// Normal-form type of `Ric`. A Ricci operator below `tol·m²` is reported as
/// the zero operator.
pub fn ricci_operator_type(
    data: &CurvatureData,
    lc: &LeviCivitaTable,
    g: &MetricForm,
    tol: f64,
) -> crate::error::Result<OperatorType> {
    let m = lc.scale();
    if max_abs(&data.ric_op) <= tol * m * m {
        return Ok(OperatorType::DiagonalReal {
            a: 0.0,
            b: 0.0,
            c: 0.0,
        });
    }
    classify_self_adjoint(&data.ric_op, g, tol).map(|c| {
        if c.sign < 0 {
            // Ric itself is the negative of the reported Jordan form; record
            // its own eigenvalues.
            match c.ty {
                OperatorType::DoubleRoot { a, b } => OperatorType::DoubleRoot { a: -a, b: -b },
                other => other,
            }
        } else {
            c.ty
        }
    })
}

/// Raw defect values behind the property flags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyDefects {
    /// Largest entry of the Levi-Civita table (the scale `m`).
    pub scale: f64,
    pub curvature: f64,
    pub constant_curvature: f64,
    pub einstein: f64,
    pub nabla_k: f64,
    pub semi_symmetry: f64,
    pub soliton: f64,
    /// Largest entry of `Ric²`.
    pub ric_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub flat: bool,
    pub constant_curvature: Option<f64>,
    pub einstein: Option<f64>,
    pub locally_symmetric: bool,
    pub semi_symmetric: bool,
    pub ricci_signature: Signature,
    /// `None` when the Ricci operator sits too close to a type boundary to
    /// build a frame.
    pub ricci_type: Option<OperatorType>,
    pub soliton: Option<SolitonCertificate>,
    pub defects: PropertyDefects,
    /// Implications of the flag chain that the raw tests missed and that
    /// were filled in, e.g. "flat => constant curvature".
    pub chain_violations: Vec<String>,
}

/// Runs every detector and enforces
/// flat ⇒ constant curvature ⇒ Einstein ⇒ locally symmetric ⇒ semi-symmetric.
pub fn analyze(
    alg: &LieAlgebra3,
    g: &MetricForm,
    lc: &LeviCivitaTable,
    data: &CurvatureData,
    tol: f64,
) -> PropertyReport {
    let m = lc.scale();
    let m2 = m * m;
    let cc_fit = constant_curvature_fit(data, g);
    let (e_lambda, e_defect) = einstein_fit(data);
    let nabla = nabla_k_defect(lc, data);
    let semi = semi_symmetry_defect(data);
    let fit = soliton_fit(alg, g, data, tol);
    let ric_sq = max_abs(&(data.ric_op * data.ric_op));

    let kappa = kappa(data);
    let flat = data.max_entry() <= tol * m2;
    let mut constant_curvature = (cc_fit.residual <= tol * kappa).then_some(cc_fit.lambda);
    let mut einstein = (e_defect <= tol * max_abs(&data.ric_op)).then_some(e_lambda);
    let mut locally_symmetric = nabla <= tol * m * kappa;
    let mut semi_symmetric = semi <= tol * kappa * kappa;
    let mut chain_violations = Vec::new();

    if flat {
        // relative tests are meaningless on rounding noise
        constant_curvature = Some(0.0);
        einstein = Some(0.0);
        locally_symmetric = true;
        semi_symmetric = true;
    }
    if let Some(l) = constant_curvature {
        if einstein.is_none() {
            einstein = Some(2.0 * l);
            chain_violations.push("constant curvature => Einstein".to_string());
        }
    }
    if einstein.is_some() && !locally_symmetric {
        locally_symmetric = true;
        chain_violations.push("Einstein => locally symmetric".to_string());
    }
    if locally_symmetric && !semi_symmetric {
        semi_symmetric = true;
        chain_violations.push("locally symmetric => semi-symmetric".to_string());
    }

    PropertyReport {
        flat,
        constant_curvature,
        einstein,
        locally_symmetric,
        semi_symmetric,
        ricci_signature: ricci_signature(data, lc, tol),
        ricci_type: ricci_operator_type(data, lc, g, tol).ok(),
        soliton: (fit.residual <= tol * fit.scale).then(|| SolitonCertificate {
            x: fit.x,
            c: fit.c,
            class: soliton_class(fit.c, tol * fit.scale),
            residual: fit.residual,
        }),
        defects: PropertyDefects {
            scale: m,
            curvature: data.max_entry(),
            constant_curvature: cc_fit.residual,
            einstein: e_defect,
            nabla_k: nabla,
            semi_symmetry: semi,
            soliton: fit.residual,
            ric_squared: ric_sq,
        },
        chain_violations,
    }
}
