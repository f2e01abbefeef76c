//! Structure constants of 3D real Lie algebras, the Killing form, group
//! identification, automorphism checks and metric pullbacks.

use crate::error::{Error, Result};
use crate::linalg::{
    max_abs, scale_of, sylvester_signature, symmetric_eigenvalues, Endo3, Signature, SymForm3,
    Vec3, DEFAULT_TOL,
};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// `[Xᵢ,Xⱼ] = Σₖ c[i][j][k] Xₖ` in a declared basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra3 {
    c: [[[f64; 3]; 3]; 3],
    basis: [String; 3],
}

fn default_basis() -> [String; 3] {
    ["X1".to_string(), "X2".to_string(), "X3".to_string()]
}

impl LieAlgebra3 {
    /// Builds constants from the brackets of pairs `(i, j)` (0-based); the
    /// pair `(j, i)` is filled by antisymmetry and omitted pairs are zero.
    pub fn from_brackets(pairs: &[(usize, usize, [f64; 3])]) -> Self {
        let mut c = [[[0.0; 3]; 3]; 3];
        for &(i, j, v) in pairs {
            assert!(
                i < 3 && j < 3 && i != j,
                "bracket indices must be distinct and < 3"
            );
            for k in 0..3 {
                c[i][j][k] = v[k];
                c[j][i][k] = -v[k];
            }
        }
        Self {
            c,
            basis: default_basis(),
        }
    }

    /// Raw constants, stored without enforcing antisymmetry so that
    /// [`validate_algebra`] can report on arbitrary input.
    pub fn from_constants(c: [[[f64; 3]; 3]; 3]) -> Self {
        Self {
            c,
            basis: default_basis(),
        }
    }

    pub fn with_basis(mut self, names: [&str; 3]) -> Self {
        self.basis = names.map(str::to_string);
        self
    }

    pub fn basis(&self) -> &[String; 3] {
        &self.basis
    }

    pub fn constants(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.c
    }

    pub fn structure(&self, i: usize, j: usize) -> Vec3 {
        Vec3::from(self.c[i][j])
    }

    pub fn bracket(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let w = u[i] * v[j];
                if w != 0.0 {
                    out += self.structure(i, j) * w;
                }
            }
        }
        out
    }

    /// Matrix of `ad_u = [u, ·]`.
    pub fn ad(&self, u: &Vec3) -> Endo3 {
        let mut m = Matrix3::zeros();
        for j in 0..3 {
            m.set_column(j, &self.bracket(u, &Vec3::ith(j, 1.0)));
        }
        m
    }

    /// Largest absolute structure constant.
    pub fn scale(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().flatten().flatten().all(|x| x.is_finite())
    }

    pub fn heisenberg() -> Self {
        Self::from_brackets(&[(0, 1, [0.0, 0.0, 1.0])]).with_basis(["X", "Y", "Z"])
    }

    pub fn su2() -> Self {
        Self::from_brackets(&[
            (0, 1, [0.0, 0.0, 2.0]),
            (1, 2, [2.0, 0.0, 0.0]),
            (2, 0, [0.0, 2.0, 0.0]),
        ])
        .with_basis(["σx", "σy", "σz"])
    }

    pub fn sl2r() -> Self {
        Self::from_brackets(&[
            (0, 1, [0.0, 0.0, 2.0]),
            (2, 0, [0.0, 2.0, 0.0]),
            (2, 1, [2.0, 0.0, 0.0]),
        ])
    }

    pub fn sol() -> Self {
        Self::from_brackets(&[(0, 1, [0.0, 1.0, 0.0]), (0, 2, [0.0, 0.0, -1.0])])
    }

    pub fn e2() -> Self {
        Self::from_brackets(&[(0, 1, [0.0, 0.0, 1.0]), (0, 2, [0.0, -1.0, 0.0])])
    }

    pub fn abelian() -> Self {
        Self::from_brackets(&[])
    }

    pub fn model(group: GroupId) -> Self {
        match group {
            GroupId::Nil => Self::heisenberg(),
            GroupId::SU2 => Self::su2(),
            GroupId::PSL2R => Self::sl2r(),
            GroupId::Sol => Self::sol(),
            GroupId::E2tilde => Self::e2(),
            GroupId::Abelian => Self::abelian(),
        }
    }

    /// Largest difference between the constants of two algebras.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    d = d.max((self.c[i][j][k] - other.c[i][j][k]).abs());
                }
            }
        }
        d
    }
}

/// The five simply connected 3D unimodular non-abelian groups, plus the
/// abelian one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupId {
    #[serde(rename = "nil")]
    Nil,
    #[serde(rename = "su2")]
    SU2,
    #[serde(rename = "psl2r")]
    PSL2R,
    #[serde(rename = "sol")]
    Sol,
    #[serde(rename = "e2")]
    E2tilde,
    #[serde(rename = "abelian")]
    Abelian,
}

impl GroupId {
    pub const NON_ABELIAN: [GroupId; 5] = [
        GroupId::Nil,
        GroupId::SU2,
        GroupId::PSL2R,
        GroupId::Sol,
        GroupId::E2tilde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupId::Nil => "nil",
            GroupId::SU2 => "su2",
            GroupId::PSL2R => "psl2r",
            GroupId::Sol => "sol",
            GroupId::E2tilde => "e2",
            GroupId::Abelian => "abelian",
        }
    }

    /// Killing signature of the model algebra.
    pub fn killing_signature(self) -> Signature {
        match self {
            GroupId::Nil | GroupId::Abelian => Signature::new(0, 0, 3),
            GroupId::SU2 => Signature::new(0, 3, 0),
            GroupId::PSL2R => Signature::new(2, 1, 0),
            GroupId::Sol => Signature::new(1, 0, 2),
            GroupId::E2tilde => Signature::new(0, 1, 2),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nil" | "heisenberg" => Ok(GroupId::Nil),
            "su2" | "su(2)" => Ok(GroupId::SU2),
            "sl2" | "sl2r" | "psl2r" | "sl(2,r)" => Ok(GroupId::PSL2R),
            "sol" => Ok(GroupId::Sol),
            "e2" | "e2tilde" | "e0(2)" => Ok(GroupId::E2tilde),
            "abelian" => Ok(GroupId::Abelian),
            other => Err(Error::Parse(format!("unknown group '{other}'"))),
        }
    }
}

/// A symmetric form of signature (2,1,0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricForm(SymForm3);

impl MetricForm {
    pub fn new(form: SymForm3) -> Result<Self> {
        Self::with_tol(form, DEFAULT_TOL)
    }

    pub fn with_tol(form: SymForm3, tol: f64) -> Result<Self> {
        if !form.is_finite() {
            return Err(Error::NonFinite);
        }
        let sig = sylvester_signature(&form, tol);
        if sig != Signature::LORENTZIAN {
            return Err(Error::NotLorentzian(sig));
        }
        Ok(Self(form))
    }

    /// Symmetric part of `m`, checked for Lorentzian signature.
    pub fn from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        Self::new(SymForm3::symmetrized(m))
    }

    pub fn minkowski() -> Self {
        Self(SymForm3::diag(1.0, 1.0, -1.0))
    }

    pub fn form(&self) -> &SymForm3 {
        &self.0
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        self.0.matrix()
    }

    pub fn inner(&self, u: &Vec3, v: &Vec3) -> f64 {
        self.0.eval(u, v)
    }

    pub fn inverse(&self) -> Matrix3<f64> {
        self.matrix()
            .try_inverse()
            .expect("a Lorentzian form is nondegenerate")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    pub worst: f64,
}

impl Check {
    fn new(worst: f64, thr: f64) -> Self {
        Self {
            pass: worst <= thr,
            worst,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraValidation {
    pub antisymmetry: Check,
    pub jacobi: Check,
    pub unimodular: Check,
}

impl AlgebraValidation {
    pub fn ok(&self) -> bool {
        self.antisymmetry.pass && self.jacobi.pass && self.unimodular.pass
    }
}

/// Antisymmetry, Jacobi and unimodularity checks with worst violations.
pub fn validate_algebra(alg: &LieAlgebra3, tol: f64) -> AlgebraValidation {
    let c = alg.constants();
    let s = alg.scale().max(f64::MIN_POSITIVE);
    let mut anti = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                anti = anti.max((c[i][j][k] + c[j][i][k]).abs());
            }
        }
    }
    let e = |i| Vec3::ith(i, 1.0);
    // in dimension 3 the Jacobi identity reduces to the single triple (X1, X2, X3)
    let (x, y, z) = (e(0), e(1), e(2));
    let jac = (alg.bracket(&alg.bracket(&x, &y), &z)
        + alg.bracket(&alg.bracket(&y, &z), &x)
        + alg.bracket(&alg.bracket(&z, &x), &y))
    .amax();
    let mut uni = 0.0_f64;
    for i in 0..3 {
        uni = uni.max(alg.ad(&e(i)).trace().abs());
    }
    AlgebraValidation {
        antisymmetry: Check::new(anti, tol * s),
        jacobi: Check::new(jac, tol * s * s),
        unimodular: Check::new(uni, tol * s),
    }
}

/// `K(u,v) = tr(ad_u ∘ ad_v)` on the basis.
pub fn killing_form(alg: &LieAlgebra3) -> SymForm3 {
    let ads: Vec<Endo3> = (0..3).map(|i| alg.ad(&Vec3::ith(i, 1.0))).collect();
    let m = Matrix3::from_fn(|i, j| (ads[i] * ads[j]).trace());
    SymForm3::symmetrized(&m)
}

/// Identifies the group from the Killing signature. Eigenvalues that are
/// neither clearly zero (≤ tol·scale) nor clearly nonzero (> √tol·scale) are
/// refused rather than guessed.
pub fn identify_group(alg: &LieAlgebra3, tol: f64) -> Result<GroupId> {
    if !alg.is_finite() {
        return Err(Error::NonFinite);
    }
    if alg.scale() <= tol {
        return Ok(GroupId::Abelian);
    }
    let v = validate_algebra(alg, tol);
    if !v.ok() {
        return Err(Error::InvalidAlgebra(format!(
            "antisymmetry {:e}, Jacobi {:e}, trace(ad) {:e}",
            v.antisymmetry.worst, v.jacobi.worst, v.unimodular.worst
        )));
    }
    let k = killing_form(alg);
    let scale = max_abs(k.matrix()).max(alg.scale() * alg.scale());
    for ev in symmetric_eigenvalues(k.matrix()) {
        let r = ev.abs() / scale;
        if r > tol && r <= tol.sqrt() {
            return Err(Error::NearBoundary { value: ev });
        }
    }
    let thr = tol * scale;
    let mut sig = Signature::new(0, 0, 0);
    for ev in symmetric_eigenvalues(k.matrix()) {
        if ev > thr {
            sig.n_plus += 1;
        } else if ev < -thr {
            sig.n_minus += 1;
        } else {
            sig.n_zero += 1;
        }
    }
    GroupId::NON_ABELIAN
        .into_iter()
        .find(|g| g.killing_signature() == sig)
        .ok_or(Error::UnknownGroup(sig))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismCheck {
    pub holds: bool,
    pub invertible: bool,
    /// Largest entry of `P[Xᵢ,Xⱼ] − [PXᵢ,PXⱼ]'` over basis pairs.
    pub defect: f64,
}

/// Checks that `P` maps the brackets of `from` onto those of `to`:
/// `P[Xᵢ,Xⱼ] = [PXᵢ,PXⱼ]'`.
pub fn is_homomorphism(p: &Endo3, from: &LieAlgebra3, to: &LieAlgebra3, tol: f64) -> MorphismCheck {
    let mut defect = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let lhs = p * from.structure(i, j);
            let rhs = to.bracket(&p.column(i).into(), &p.column(j).into());
            defect = defect.max((lhs - rhs).amax());
        }
    }
    let ps = scale_of(p);
    let cs = from.scale().max(to.scale()).max(1.0);
    let invertible = p.determinant().abs() > tol * ps * ps * ps;
    MorphismCheck {
        holds: defect <= tol * cs * ps * ps.max(1.0),
        invertible,
        defect,
    }
}

/// Automorphism test: invertible and bracket-preserving.
pub fn is_automorphism(p: &Endo3, alg: &LieAlgebra3, tol: f64) -> MorphismCheck {
    let mut r = is_homomorphism(p, alg, alg, tol);
    r.holds = r.holds && r.invertible;
    r
}

/// `PᵗGP`.
pub fn pullback_metric(p: &Endo3, g: &MetricForm) -> Result<MetricForm> {
    let ps = scale_of(p);
    if p.determinant().abs() <= 1e-14 * ps * ps * ps {
        return Err(Error::Singular);
    }
    Ok(MetricForm(g.form().congruent(p)))
}
