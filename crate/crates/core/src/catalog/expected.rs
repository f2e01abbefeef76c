//! Closed-form Ricci data, signature rules, Ricci-operator types and special
//! loci for every family.
//!
//! [`expected_curvature`] holds the corrected closed forms;
//! [`tabulated_curvature`] keeps the tabulated expressions so that the
//! discrepancies listed in [`errata`] stay measurable.

use super::{family_matrix, FamilyId, FamilyParams};
use crate::linalg::{from_rows, Signature, SymForm3, Vec3};
use crate::milnor::TypeKind;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCurvature {
    /// Matrix of the Ricci tensor in the model basis.
    pub ric: SymForm3,
    pub scalar: f64,
}

fn sym(rows: [[f64; 3]; 3]) -> SymForm3 {
    SymForm3::from_lower(&from_rows(&rows))
}

/// Tabulated Ricci data, as tabulated.
pub fn tabulated_curvature(p: &FamilyParams) -> ExpectedCurvature {
    let v = &p.values;
    let (ric, scalar) = match p.family {
        FamilyId::N1 => {
            let l = v[0];
            (SymForm3::diag(l / 2.0, l / 2.0, l * l / 2.0), l / 2.0)
        }
        FamilyId::N2 => {
            let l = v[0];
            (SymForm3::diag(0.5, 0.5 / l, 0.5 / l), 0.5 / l)
        }
        FamilyId::N0 | FamilyId::SOL03 | FamilyId::SOL0B2 | FamilyId::SOL0ZZ0 => {
            return expected_curvature(p)
        }
        FamilyId::SU2 | FamilyId::SL2D1 | FamilyId::SL2D2 => return expected_curvature(p),
        FamilyId::SL2AZZP => {
            let (a, al, be) = (v[0], v[1], v[2]);
            let mut e = azz_plus(a, al, be);
            let r2 = al * al + be * be;
            let mut m = *e.ric.matrix();
            m[(2, 2)] = -2.0 * (a.powi(4) - 4.0 * be * be) / r2;
            e.ric = SymForm3::from_lower(&m);
            return e;
        }
        FamilyId::SL2AZZM => {
            let (a, al, be) = (v[0], v[1], v[2]);
            let mut e = azz_minus(a, al, be);
            e.scalar = a.powi(4) / 2.0 + 2.0 * a * a * al - 2.0 * be * be;
            return e;
        }
        FamilyId::E2A02 => {
            let u = v[0];
            (
                sym([
                    [1.0, u / 2.0, 0.0],
                    [u / 2.0, 0.0, 0.0],
                    [0.0, 0.0, -u / 2.0],
                ]),
                u / 2.0,
            )
        }
        _ => return expected_curvature(p),
    };
    ExpectedCurvature { ric, scalar }
}

fn azz_plus(a: f64, al: f64, be: f64) -> ExpectedCurvature {
    let a2 = a * a;
    let a4 = a2 * a2;
    let r2 = al * al + be * be;
    let r = r2.sqrt();
    let x = 2.0 * (a4 - 4.0 * al * al) * be / (a2 * al * r);
    let r11 =
        2.0 * (a2 - 2.0 * al) * (a2 * (be * be - al * al) + 4.0 * al * be * be) / (a2 * al * r2);
    let ric = sym([
        [r11, x, 0.0],
        [x, 2.0 * (a2 - 2.0 * al) / al, 0.0],
        [0.0, 0.0, -2.0 * (a4 + 4.0 * be * be) / r2],
    ]);
    ExpectedCurvature {
        ric,
        scalar: a4 / 2.0 - 2.0 * a2 * al - 2.0 * be * be,
    }
}

fn azz_minus(a: f64, al: f64, be: f64) -> ExpectedCurvature {
    let a2 = a * a;
    let a4 = a2 * a2;
    let r2 = al * al + be * be;
    let r = r2.sqrt();
    let x = 2.0 * (a4 - 4.0 * al * al) * be / (a2 * al * r);
    let r33 =
        -2.0 * (a2 - 2.0 * al) * (a2 * (be * be - al * al) + 4.0 * al * be * be) / (a2 * al * r2);
    let ric = sym([
        [2.0 * (2.0 * al - a2) / al, 0.0, x],
        [0.0, -2.0 * (a4 + 4.0 * be * be) / r2, 0.0],
        [x, 0.0, r33],
    ]);
    ExpectedCurvature {
        ric,
        scalar: a4 / 2.0 - 2.0 * a2 * al - 2.0 * be * be,
    }
}

/// Ricci tensor and scalar curvature of the family at `p`.
pub fn expected_curvature(p: &FamilyParams) -> ExpectedCurvature {
    let v = &p.values;
    let (ric, scalar) = match p.family {
        FamilyId::N1 => {
            let l = v[0];
            (SymForm3::diag(l / 2.0, l / 2.0, l * l / 2.0), l / 2.0)
        }
        FamilyId::N2 => {
            let l = v[0];
            (SymForm3::diag(l / 2.0, -l / 2.0, -l * l / 2.0), l / 2.0)
        }
        FamilyId::N0 => (SymForm3::zero(), 0.0),
        FamilyId::SU2 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            let s = m1 + m2 + m3;
            let d = m1 - m2 - m3;
            let e = m1 - m2 + m3;
            (
                SymForm3::diag(
                    -2.0 * d * s / (m2 * m3),
                    2.0 * s * e / (m1 * m3),
                    -2.0 * d * e / (m1 * m2),
                ),
                2.0 * ((m1.sqrt() + m2.sqrt()).powi(2) + m3)
                    * ((m1.sqrt() - m2.sqrt()).powi(2) + m3)
                    / (m1 * m2 * m3),
            )
        }
        FamilyId::SL2D1 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            (
                SymForm3::diag(
                    2.0 * (m1 * m1 - (m2 - m3).powi(2)) / (m2 * m3),
                    -2.0 * (m2 * m2 - (m1 - m3).powi(2)) / (m1 * m3),
                    -2.0 * (m3 * m3 - (m2 - m1).powi(2)) / (m1 * m2),
                ),
                2.0 * ((m1.sqrt() + m2.sqrt()).powi(2) - m3)
                    * ((m1.sqrt() - m2.sqrt()).powi(2) - m3)
                    / (m1 * m2 * m3),
            )
        }
        FamilyId::SL2D2 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            let s = m1 + m2 + m3;
            let d = m1 - m2 - m3;
            let e = m1 - m2 + m3;
            (
                SymForm3::diag(
                    -2.0 * d * s / (m2 * m3),
                    -2.0 * s * e / (m1 * m3),
                    2.0 * d * e / (m1 * m2),
                ),
                2.0 * ((m1.sqrt() + m2.sqrt()).powi(2) + m3)
                    * ((m1.sqrt() - m2.sqrt()).powi(2) + m3)
                    / (m1 * m2 * m3),
            )
        }
        FamilyId::SL2AZZP => return azz_plus(v[0], v[1], v[2]),
        FamilyId::SL2AZZM => return azz_minus(v[0], v[1], v[2]),
        FamilyId::SL2AZZ0 => {
            let (u, w) = (v[0], v[1]);
            let k = 4.0 * w / (w - u);
            (
                sym([
                    [k, 0.0, k],
                    [0.0, 16.0 * w / (u - w), 0.0],
                    [k, 0.0, 4.0 * (w - 2.0 * u) / (u - w)],
                ]),
                u / 2.0,
            )
        }
        FamilyId::SL2AB2 => {
            let (a, b) = (v[0], v[1]);
            let f = 1.0 / (4.0 * b);
            let off = f * (4.0 * b * b - a * a);
            (
                sym([
                    [f * (a + 2.0 * b - 8.0) * (a - 2.0 * b), off, 0.0],
                    [off, f * (a + 2.0 * b + 8.0) * (a - 2.0 * b), 0.0],
                    [0.0, 0.0, -2.0 * a * a / (b * b)],
                ]),
                a * (a - 4.0 * b) / 2.0,
            )
        }
        FamilyId::SL2A3 => {
            let a = v[0];
            let a2 = a * a;
            let q = 1.0 + 2.0 * a2;
            let sq = q.sqrt();
            let r12 = -(6.0 * a2 + 9.0) / (a2 * sq);
            let r13 = -6.0 * SQRT_2 / (sq * a);
            let r23 = -(6.0 * a2 + 6.0) * SQRT_2 / (a * q);
            (
                sym([
                    [(2.0 * a2 - 9.0) / a2, r12, r13],
                    [r12, -(4.0 * a2 * a2 + 14.0 * a2 + 9.0) / (a2 * q), r23],
                    [r13, r23, -(4.0 * a2 + 8.0) / q],
                ]),
                -1.5 * a2,
            )
        }
        FamilyId::SOLD1 => {
            let (u, w) = (v[0], v[1]);
            (
                sym([
                    [2.0 * w * w / (u * u - w * w), 0.0, 0.0],
                    [0.0, -u * u / 2.0, -u * w / 2.0],
                    [0.0, -u * w / 2.0, -u * u / 2.0],
                ]),
                w * w / 2.0,
            )
        }
        FamilyId::SOLD2 => {
            let (u, w) = (v[0], v[1]);
            (
                sym([
                    [2.0 * u * u / (w * w - u * u), 0.0, 0.0],
                    [0.0, -u * w / 2.0, u * u / 2.0],
                    [0.0, u * u / 2.0, -u * w / 2.0],
                ]),
                u * u / 2.0,
            )
        }
        FamilyId::SOL0ZZ => {
            let (u, w) = (v[0], v[1]);
            (
                sym([
                    [-2.0 * w / (w + u), 0.0, 0.0],
                    [0.0, 2.0 * w, 2.0 * w],
                    [0.0, 2.0 * w, -2.0 * u],
                ]),
                -2.0 * w,
            )
        }
        FamilyId::SOL0ZZ0 => (SymForm3::diag(-2.0, 0.0, 0.0), -2.0 * v[0]),
        FamilyId::SOLA02 => {
            let b = v[0];
            let h = -b * b / 2.0;
            (sym([[-2.0, b, 0.0], [b, h, h], [0.0, h, h]]), b * b / 2.0)
        }
        FamilyId::SOL0B2 => (SymForm3::diag(0.0, -2.0 / v[0], 0.0), 0.0),
        FamilyId::SOL03 => (SymForm3::diag(-2.0, 0.0, 0.0), 0.0),
        FamilyId::E2D1 => {
            let (u, w) = (v[0], v[1]);
            let off = (w * w - u * u) / (2.0 * w);
            (
                sym([
                    [(w - u) / w, off, 0.0],
                    [off, u * off, 0.0],
                    [0.0, 0.0, (u * u - w * w) / 2.0],
                ]),
                (u - w).powi(2) / (2.0 * w),
            )
        }
        FamilyId::E2D2 => {
            let (u, w) = (v[0], v[1]);
            let off = (u * u - w * w) / (2.0 * w);
            (
                sym([
                    [(w + u) / w, off, 0.0],
                    [off, u * off, 0.0],
                    [0.0, 0.0, (u * u - w * w) / 2.0],
                ]),
                (u + w).powi(2) / (2.0 * w),
            )
        }
        FamilyId::E2A02 => {
            let u = v[0];
            (
                sym([
                    [1.0, u / 2.0, 0.0],
                    [u / 2.0, 0.0, 0.0],
                    [0.0, 0.0, -u * u / 2.0],
                ]),
                u / 2.0,
            )
        }
    };
    ExpectedCurvature { ric, scalar }
}

/// A tabulated statement that the computation contradicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub family: FamilyId,
    pub item: &'static str,
    pub tabulated: &'static str,
    pub corrected: &'static str,
    /// How the correction is established independently of this library.
    pub evidence: &'static str,
}

const ERRATA: &[Erratum] = &[
    Erratum {
        family: FamilyId::N2,
        item: "metric matrix",
        tabulated: "diag(λ, 1, −1)",
        corrected: "diag(1, −1, λ)",
        evidence: "the tabulated matrix makes the center timelike, so it is N1 at 1/λ; \
                   the stated map X→e2, Y→e3, Z→√λ e1 pulls η back to diag(1, −1, λ)",
    },
    Erratum {
        family: FamilyId::N2,
        item: "ric, s and signature",
        tabulated: "ric = ½diag(1, 1/λ, 1/λ), s = 1/(2λ), (+,+,+)",
        corrected: "ric = ½diag(λ, −λ, −λ²), s = λ/2, (+,−,−)",
        evidence: "Heisenberg metric diag(A, B, C) has ric = diag(−C/2B, −C/2A, C²/2AB)",
    },
    Erratum {
        family: FamilyId::SL2AZZP,
        item: "ric₃₃",
        tabulated: "−2(a⁴ − 4β²)/(α² + β²)",
        corrected: "−2(a⁴ + 4β²)/(α² + β²)",
        evidence: "the corrected entry makes tr(G⁻¹ric) equal the tabulated s",
    },
    Erratum {
        family: FamilyId::SL2AZZM,
        item: "s",
        tabulated: "a⁴/2 + 2a²α − 2β²",
        corrected: "a⁴/2 − 2a²α − 2β²",
        evidence: "tr(G⁻¹ric) of the tabulated ric",
    },
    Erratum {
        family: FamilyId::E2A02,
        item: "ric₃₃",
        tabulated: "−u/2",
        corrected: "−u²/2",
        evidence: "the corrected entry makes tr(G⁻¹ric) equal the tabulated s = u/2",
    },
    Erratum {
        family: FamilyId::SL2D2,
        item: "signature at μ₁ = μ₂ − μ₃",
        tabulated: "(−,0,0)",
        corrected: "(+,0,0)",
        evidence: "there ric₂₂ = ric₃₃ = 0 and ric₁₁ = 4(μ₁ + μ₂ + μ₃)/μ₂ > 0",
    },
    Erratum {
        family: FamilyId::E2D1,
        item: "signature for u < v",
        tabulated: "(+,+,−)",
        corrected: "(+,−,−)",
        evidence: "the 2×2 block has negative determinant and ric₃₃ < 0",
    },
    Erratum {
        family: FamilyId::SL2AZZ0,
        item: "Ricci operator type",
        tabulated: "diagonalizable",
        corrected: "{a z z̄}",
        evidence: "G⁻¹ric of the tabulated ric has a pair of complex eigenvalues",
    },
    Erratum {
        family: FamilyId::SL2AB2,
        item: "Ricci operator type",
        tabulated: "diagonalizable",
        corrected: "{ab2} for a ≠ 2b, diagonal at a = 2b",
        evidence: "G⁻¹ric of the tabulated ric has a double eigenvalue with a one-dimensional eigenspace",
    },
    Erratum {
        family: FamilyId::SOLD1,
        item: "signature for −v < u < 0",
        tabulated: "(−,−,+) and (−,−,−)",
        corrected: "(+,−,−)",
        evidence: "the block [[−u²/2, −uv/2], [−uv/2, −u²/2]] has eigenvalues u(±v − u)/2 of opposite signs",
    },
];

/// Tabulated statements that disagree with the computation.
pub fn errata() -> &'static [Erratum] {
    ERRATA
}

/// What the signature of `ric` should be at a parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignatureRule {
    Exact {
        signature: Signature,
    },
    /// The reference table is ambiguous here; the computed value is
    /// reported but not asserted.
    Ambiguous {
        computed_hint: Signature,
        note: String,
    },
}

impl SignatureRule {
    pub fn expected(&self) -> Signature {
        match self {
            SignatureRule::Exact { signature } => *signature,
            SignatureRule::Ambiguous { computed_hint, .. } => *computed_hint,
        }
    }
}

fn near(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

fn sign3(x: f64, scale: f64, tol: f64) -> i8 {
    if x.abs() <= tol * scale.max(1.0) {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

const S300: Signature = Signature::new(3, 0, 0);
const S120: Signature = Signature::new(1, 2, 0);
const S102: Signature = Signature::new(1, 0, 2);
const S012: Signature = Signature::new(0, 1, 2);
const S003: Signature = Signature::new(0, 0, 3);

/// Signature of `ric` from the sign analysis of the closed forms.
pub fn expected_signature(p: &FamilyParams, tol: f64) -> SignatureRule {
    let v = &p.values;
    let exact = |s| SignatureRule::Exact { signature: s };
    match p.family {
        FamilyId::N1 => exact(S300),
        FamilyId::N2 => exact(S120),
        FamilyId::N0 | FamilyId::SOL03 => exact(if p.family == FamilyId::N0 { S003 } else { S012 }),
        FamilyId::SU2 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            exact(match sign3(m1 - m2 - m3, m1 + m2 + m3, tol) {
                -1 => S300,
                0 => S102,
                _ => S120,
            })
        }
        FamilyId::SL2D1 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            let s = m1 + m2 + m3;
            let a = sign3(m1 - m2 + m3, s, tol);
            let b = sign3(m2 + m3 - m1, s, tol);
            exact(match (a, b) {
                (1, 1) | (-1, _) => S120,
                (1, -1) => S300,
                (1, 0) => S102,
                _ => S012,
            })
        }
        FamilyId::SL2D2 => {
            let (m1, m2, m3) = (v[0], v[1], v[2]);
            let s = m1 + m2 + m3;
            let d = sign3(m1 - m2 - m3, s, tol);
            let e = sign3(m1 - m2 + m3, s, tol);
            exact(match (d, e) {
                (0, _) => S012,
                (-1, 0) => S102,
                (-1, -1) => S300,
                _ => S120,
            })
        }
        FamilyId::SL2AZZP => {
            let (a, al) = (v[0], v[1]);
            exact(if near(a * a, 2.0 * al, tol) {
                S012
            } else {
                S120
            })
        }
        FamilyId::SL2AZZM | FamilyId::SL2AZZ0 | FamilyId::SL2A3 => exact(S120),
        FamilyId::SL2AB2 => exact(if near(v[0], 2.0 * v[1], tol) {
            S012
        } else {
            S120
        }),
        FamilyId::SOLD1 => {
            let (u, w) = (v[0], v[1]);
            match sign3(u, w, tol) {
                0 => exact(S012),
                1 => exact(S120),
                _ => SignatureRule::Ambiguous {
                    computed_hint: S120,
                    note: "the reference table lists both (−,−,+) and (−,−,−) for −v < u < 0"
                        .to_string(),
                },
            }
        }
        FamilyId::SOLD2 => exact(match sign3(v[0], v[1], tol) {
            0 => S003,
            1 => S120,
            _ => S300,
        }),
        FamilyId::SOL0ZZ | FamilyId::SOLA02 | FamilyId::E2A02 => exact(S120),
        FamilyId::SOL0ZZ0 => exact(S012),
        FamilyId::SOL0B2 => exact(if v[0] > 0.0 { S012 } else { S102 }),
        FamilyId::E2D1 => exact(if near(v[0], v[1], tol) { S003 } else { S120 }),
        FamilyId::E2D2 => {
            let (u, w) = (v[0], v[1]);
            exact(match sign3(u - w, u + w, tol) {
                0 => S102,
                1 => S300,
                _ => S120,
            })
        }
    }
}

/// Expected conjugacy type of the Ricci operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RicciKindRule {
    Diagonalizable,
    ComplexPair,
    DoubleRoot,
    /// Double root with `Ric² = 0`.
    NilpotentDoubleRoot,
    TripleRoot,
}

impl RicciKindRule {
    pub fn matches(self, kind: TypeKind) -> bool {
        match self {
            RicciKindRule::Diagonalizable => kind == TypeKind::DiagonalReal,
            RicciKindRule::ComplexPair => kind == TypeKind::ComplexPair,
            RicciKindRule::DoubleRoot | RicciKindRule::NilpotentDoubleRoot => {
                kind == TypeKind::DoubleRoot
            }
            RicciKindRule::TripleRoot => kind == TypeKind::TripleRoot,
        }
    }
}

pub fn expected_ricci_kind(p: &FamilyParams, tol: f64) -> RicciKindRule {
    let v = &p.values;
    match p.family {
        FamilyId::SL2AZZP if near(v[0] * v[0], 2.0 * v[1], tol) => RicciKindRule::Diagonalizable,
        FamilyId::SL2AZZP | FamilyId::SL2AZZM | FamilyId::SL2AZZ0 | FamilyId::SOL0ZZ => {
            RicciKindRule::ComplexPair
        }
        FamilyId::SL2AB2 if near(v[0], 2.0 * v[1], tol) => RicciKindRule::Diagonalizable,
        FamilyId::SL2AB2 | FamilyId::SOLA02 | FamilyId::E2A02 => RicciKindRule::DoubleRoot,
        FamilyId::SOL0B2 | FamilyId::SOL03 => RicciKindRule::NilpotentDoubleRoot,
        FamilyId::SL2A3 => RicciKindRule::TripleRoot,
        _ => RicciKindRule::Diagonalizable,
    }
}

/// Which special-curvature statements apply at a parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialLoci {
    pub flat: bool,
    /// Sectional curvature when constant.
    pub constant_curvature: Option<f64>,
    pub semi_symmetric_not_locally_symmetric: bool,
    /// `(X, c)` with `L_X h + ric = c h` for the non-Einstein solitons.
    pub soliton: Option<([f64; 3], f64)>,
}

pub fn special_loci(p: &FamilyParams, tol: f64) -> SpecialLoci {
    let v = &p.values;
    let flat = match p.family {
        FamilyId::N0 => true,
        FamilyId::SOLD2 => v[0].abs() <= tol * v[1],
        FamilyId::E2D1 => near(v[0], v[1], tol),
        _ => false,
    };
    let constant_curvature = if flat {
        Some(0.0)
    } else if p.family == FamilyId::SL2D1 && near(v[0], v[1], tol) && near(v[1], v[2], tol) {
        Some(-1.0 / v[0])
    } else {
        None
    };
    SpecialLoci {
        flat,
        constant_curvature,
        semi_symmetric_not_locally_symmetric: matches!(
            p.family,
            FamilyId::SOL0B2 | FamilyId::SOL03
        ),
        soliton: soliton_witness(p, tol),
    }
}

/// The tabulated soliton vector field and constant, where one exists.
pub fn soliton_witness(p: &FamilyParams, tol: f64) -> Option<([f64; 3], f64)> {
    let v = &p.values;
    match p.family {
        FamilyId::SOL0B2 => Some(([-1.0 / (v[0] * v[0]), 0.0, 0.0], 0.0)),
        FamilyId::SOL03 => Some(([0.0, 0.0, -1.0], 0.0)),
        FamilyId::SL2AB2 if near(v[0], v[1], tol) => {
            let b = v[1];
            Some(([0.0, 0.0, b * b / 4.0], -b * b / 2.0))
        }
        FamilyId::SL2A3 => {
            let a = v[0];
            let sq = (2.0 * a * a + 1.0).sqrt();
            Some((
                [
                    a / (2.0 * SQRT_2),
                    (2.0 * a * a * a - a) * SQRT_2 / (4.0 * sq),
                    -a * a / sq,
                ],
                -a * a / 2.0,
            ))
        }
        _ => None,
    }
}

/// `tr(G⁻¹ ric)` of a closed form, used to cross-check scalars.
pub(crate) fn trace_scalar(p: &FamilyParams, ric: &SymForm3) -> f64 {
    let g = family_matrix(p);
    g.matrix()
        .try_inverse()
        .map_or(f64::NAN, |gi| (gi * ric.matrix()).trace())
}

pub(crate) fn vec3(x: [f64; 3]) -> Vec3 {
    Vec3::new(x[0], x[1], x[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{symmetric_eigenvalues, DEFAULT_TOL};

    fn fp(f: FamilyId, v: &[f64]) -> FamilyParams {
        FamilyParams::new(f, v).unwrap()
    }

    #[test]
    fn tabulated_examples() {
        let e = tabulated_curvature(&fp(FamilyId::N2, &[4.0]));
        assert_eq!(e.ric, SymForm3::diag(0.5, 0.125, 0.125));
        assert_eq!(e.scalar, 0.125);
        let e = expected_curvature(&fp(FamilyId::SOL0ZZ, &[1.0, 1.0]));
        assert_eq!(
            e.ric,
            sym([[-1.0, 0.0, 0.0], [0.0, 2.0, 2.0], [0.0, 2.0, -2.0]])
        );
        assert_eq!(e.scalar, -2.0);
        let e = expected_curvature(&fp(FamilyId::N0, &[]));
        assert_eq!(e.ric, SymForm3::zero());
        assert_eq!(e.scalar, 0.0);
        let e = expected_curvature(&fp(FamilyId::SU2, &[1.0, 1.0, 1.0]));
        assert_eq!(e.ric, SymForm3::diag(6.0, 6.0, 2.0));
        assert_eq!(e.scalar, 10.0);
    }

    /// Heisenberg metric diag(A, B, C): ric = diag(−C/2B, −C/2A, C²/2AB).
    #[test]
    fn n2_matches_general_heisenberg_formula() {
        for l in [0.25, 1.0, 3.0] {
            let (a, b, c) = (1.0, -1.0, l);
            let e = expected_curvature(&fp(FamilyId::N2, &[l]));
            let want = SymForm3::diag(-c / (2.0 * b), -c / (2.0 * a), c * c / (2.0 * a * b));
            assert_eq!(e.ric, want);
        }
    }

    #[test]
    fn corrected_scalars_equal_trace() {
        let pts: &[(FamilyId, &[f64])] = &[
            (FamilyId::SL2AZZP, &[1.3, 0.7, 0.9]),
            (FamilyId::SL2AZZM, &[1.3, -0.7, 0.9]),
            (FamilyId::E2A02, &[1.7]),
            (FamilyId::SL2A3, &[0.8]),
            (FamilyId::E2D1, &[0.5, 2.0]),
        ];
        for (f, v) in pts {
            let p = fp(*f, v);
            let e = expected_curvature(&p);
            let t = trace_scalar(&p, &e.ric);
            assert!(
                (t - e.scalar).abs() < 1e-12 * e.scalar.abs().max(1.0),
                "{f}: {t} vs {}",
                e.scalar
            );
        }
    }

    #[test]
    fn tabulated_errata_are_inconsistent_with_trace() {
        let p = fp(FamilyId::SL2AZZM, &[1.3, -0.7, 0.9]);
        let e = tabulated_curvature(&p);
        assert!((trace_scalar(&p, &e.ric) - e.scalar).abs() > 0.1);
        let p = fp(FamilyId::E2A02, &[1.7]);
        let e = tabulated_curvature(&p);
        assert!((trace_scalar(&p, &e.ric) - e.scalar).abs() > 0.1);
    }

    /// The signature rules agree with the eigenvalue signs of the closed
    /// forms (an eigen-solver independent of the sign analysis).
    #[test]
    fn rules_match_closed_form_eigenvalues() {
        let pts: &[(FamilyId, &[f64])] = &[
            (FamilyId::SU2, &[3.0, 1.0, 1.0]),
            (FamilyId::SU2, &[2.0, 1.0, 1.0]),
            (FamilyId::SU2, &[1.0, 1.0, 1.0]),
            (FamilyId::SL2D1, &[1.0, 3.0, 1.0]),
            (FamilyId::SL2D1, &[3.0, 1.0, 1.0]),
            (FamilyId::SL2D1, &[2.0, 1.0, 1.0]),
            (FamilyId::SL2D1, &[2.0, 3.0, 1.0]),
            (FamilyId::SL2D2, &[1.0, 2.0, 1.0]),
            (FamilyId::SL2D2, &[0.5, 2.0, 1.0]),
            (FamilyId::SL2D2, &[3.0, 1.0, 1.0]),
            (FamilyId::SL2AZZP, &[2.0, 2.0, 1.0]),
            (FamilyId::SL2A3, &[0.7]),
            (FamilyId::SOLD2, &[-0.5, 1.0]),
            (FamilyId::E2D1, &[0.5, 2.0]),
            (FamilyId::E2D2, &[2.0, 2.0]),
            (FamilyId::E2D2, &[3.0, 2.0]),
            (FamilyId::SOLA02, &[1.5]),
        ];
        for (f, v) in pts {
            let p = fp(*f, v);
            let ev = symmetric_eigenvalues(expected_curvature(&p).ric.matrix());
            let m = ev.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            let count = |pred: &dyn Fn(f64) -> bool| ev.iter().filter(|x| pred(**x)).count() as u8;
            let thr = 1e-9 * m;
            let sig = Signature::new(
                count(&|x| x > thr),
                count(&|x| x < -thr),
                count(&|x| x.abs() <= thr),
            );
            assert_eq!(
                expected_signature(&p, DEFAULT_TOL).expected(),
                sig,
                "{f} {v:?}"
            );
        }
    }

    #[test]
    fn sold1_negative_u_is_ambiguous() {
        let r = expected_signature(&fp(FamilyId::SOLD1, &[-0.5, 1.0]), DEFAULT_TOL);
        assert!(matches!(r, SignatureRule::Ambiguous { .. }));
    }
}
