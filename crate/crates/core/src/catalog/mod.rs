//! The 21 canonical metric families, their parameter domains and builders,
//! expected curvature data, the classifier and the automorphism witnesses.

mod classify;
mod expected;
mod verify;
mod witness;

pub use classify::{classify_metric, classify_metric_with, Classification};
pub use expected::{
    errata, expected_curvature, expected_ricci_kind, expected_signature, soliton_witness,
    special_loci, tabulated_curvature, Erratum, ExpectedCurvature, RicciKindRule, SignatureRule,
    SpecialLoci,
};
pub use verify::{
    family_grid, verify_all, verify_family, verify_grid, FamilyVerification, ItemCheck,
    VerifyReport, VerifySummary, WitnessSummary,
};
pub use witness::{witness_check, StageCheck, WitnessCase, WitnessReport, WitnessStatus};

use crate::error::{Error, Result};
use crate::lie::{GroupId, MetricForm};
use crate::linalg::{from_rows, SymForm3};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    N1,
    N2,
    N0,
    SU2,
    SL2D1,
    SL2D2,
    #[serde(rename = "SL2AZZ_P")]
    SL2AZZP,
    #[serde(rename = "SL2AZZ_M")]
    SL2AZZM,
    #[serde(rename = "SL2AZZ_0")]
    SL2AZZ0,
    SL2AB2,
    SL2A3,
    SOLD1,
    SOLD2,
    SOL0ZZ,
    SOL0ZZ0,
    SOLA02,
    SOL0B2,
    SOL03,
    E2D1,
    E2D2,
    E2A02,
}

/// Static description of a family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyInfo {
    pub id: FamilyId,
    pub name: &'static str,
    /// Short lowercase key, also accepted on input.
    pub key: &'static str,
    pub group: GroupId,
    pub params: &'static [&'static str],
    /// Parameter names for display (`λ`, `μ1`, `α`, ...).
    pub symbols: &'static [&'static str],
    pub domain: &'static str,
    /// Type of `L` for the normalized orientation.
    pub operator_type: &'static str,
}

#[allow(clippy::too_many_arguments)]
const fn info(
    id: FamilyId,
    name: &'static str,
    key: &'static str,
    group: GroupId,
    params: &'static [&'static str],
    symbols: &'static [&'static str],
    domain: &'static str,
    operator_type: &'static str,
) -> FamilyInfo {
    FamilyInfo {
        id,
        name,
        key,
        group,
        params,
        symbols,
        domain,
        operator_type,
    }
}

const LAMBDA: &[&str] = &["lambda"];
const LAMBDA_S: &[&str] = &["λ"];
const MU: &[&str] = &["mu1", "mu2", "mu3"];
const MU_S: &[&str] = &["μ1", "μ2", "μ3"];
const AZZ: &[&str] = &["a", "alpha", "beta"];
const AZZ_S: &[&str] = &["a", "α", "β"];
const UV: &[&str] = &["u", "v"];
const U: &[&str] = &["u"];
const AB: &[&str] = &["a", "b"];
const A: &[&str] = &["a"];
const B: &[&str] = &["b"];
const NONE: &[&str] = &[];

static INFOS: [FamilyInfo; 21] = [
    info(
        FamilyId::N1,
        "N1",
        "n1",
        GroupId::Nil,
        LAMBDA,
        LAMBDA_S,
        "λ>0",
        "diag(0,0,√λ)",
    ),
    info(
        FamilyId::N2,
        "N2",
        "n2",
        GroupId::Nil,
        LAMBDA,
        LAMBDA_S,
        "λ>0",
        "diag(√λ,0,0)",
    ),
    info(
        FamilyId::N0,
        "N0",
        "n0",
        GroupId::Nil,
        NONE,
        NONE,
        "",
        "{002}",
    ),
    info(
        FamilyId::SU2,
        "SU2",
        "su2",
        GroupId::SU2,
        MU,
        MU_S,
        "μ₁≥μ₂>0, μ₃>0",
        "diag(a,b,c), a,b>0>c",
    ),
    info(
        FamilyId::SL2D1,
        "SL2D1",
        "sl2d1",
        GroupId::PSL2R,
        MU,
        MU_S,
        "μ₁>0, μ₂≥μ₃>0",
        "diag(a,b,c), a,b,c>0",
    ),
    info(
        FamilyId::SL2D2,
        "SL2D2",
        "sl2d2",
        GroupId::PSL2R,
        MU,
        MU_S,
        "μ₁>0, μ₂>0, μ₃>0",
        "diag(a,b,c), a<0<b, c<0",
    ),
    info(
        FamilyId::SL2AZZP,
        "SL2AZZ_P",
        "sl2azz+",
        GroupId::PSL2R,
        AZZ,
        AZZ_S,
        "a≠0, α>0, β>0",
        "{a² z z̄}",
    ),
    info(
        FamilyId::SL2AZZM,
        "SL2AZZ_M",
        "sl2azz-",
        GroupId::PSL2R,
        AZZ,
        AZZ_S,
        "a≠0, α<0, β>0",
        "{a² z z̄}",
    ),
    info(
        FamilyId::SL2AZZ0,
        "SL2AZZ_0",
        "sl2azz0",
        GroupId::PSL2R,
        UV,
        UV,
        "v>|u|",
        "{a² z z̄}, α=0",
    ),
    info(
        FamilyId::SL2AB2,
        "SL2AB2",
        "sl2ab2",
        GroupId::PSL2R,
        AB,
        AB,
        "a≠0, b≠0",
        "{ab2}",
    ),
    info(
        FamilyId::SL2A3,
        "SL2A3",
        "sl2a3",
        GroupId::PSL2R,
        A,
        A,
        "a≠0",
        "{a3}",
    ),
    info(
        FamilyId::SOLD1,
        "SOLD1",
        "sold1",
        GroupId::Sol,
        UV,
        UV,
        "v>0, |u|<v",
        "diag(α,β,0), α>0>β",
    ),
    info(
        FamilyId::SOLD2,
        "SOLD2",
        "sold2",
        GroupId::Sol,
        UV,
        UV,
        "v>0, |u|<v",
        "diag(β,0,−α), α<0<β",
    ),
    info(
        FamilyId::SOL0ZZ,
        "SOL0ZZ",
        "sol0zz",
        GroupId::Sol,
        UV,
        UV,
        "u>0, v>0",
        "{0 z z̄}, α≠0",
    ),
    info(
        FamilyId::SOL0ZZ0,
        "SOL0ZZ0",
        "sol0zz0",
        GroupId::Sol,
        U,
        U,
        "u>0",
        "{0 z z̄}, α=0",
    ),
    info(
        FamilyId::SOLA02,
        "SOLA02",
        "sola02",
        GroupId::Sol,
        B,
        B,
        "b>0",
        "{a02}, a<0",
    ),
    info(
        FamilyId::SOL0B2,
        "SOL0B2",
        "sol0b2",
        GroupId::Sol,
        LAMBDA,
        LAMBDA_S,
        "λ≠0",
        "{0b2}",
    ),
    info(
        FamilyId::SOL03,
        "SOL03",
        "sol03",
        GroupId::Sol,
        NONE,
        NONE,
        "",
        "{03}",
    ),
    info(
        FamilyId::E2D1,
        "E2D1",
        "e2d1",
        GroupId::E2tilde,
        UV,
        UV,
        "u>0, v>0",
        "diag(α,β,0), α,β>0",
    ),
    info(
        FamilyId::E2D2,
        "E2D2",
        "e2d2",
        GroupId::E2tilde,
        UV,
        UV,
        "u>0, v>0",
        "diag(β,0,−α), α,β>0",
    ),
    info(
        FamilyId::E2A02,
        "E2A02",
        "e2a02",
        GroupId::E2tilde,
        U,
        U,
        "u>0",
        "{a02}, a>0",
    ),
];

impl FamilyId {
    pub const ALL: [FamilyId; 21] = [
        FamilyId::N1,
        FamilyId::N2,
        FamilyId::N0,
        FamilyId::SU2,
        FamilyId::SL2D1,
        FamilyId::SL2D2,
        FamilyId::SL2AZZP,
        FamilyId::SL2AZZM,
        FamilyId::SL2AZZ0,
        FamilyId::SL2AB2,
        FamilyId::SL2A3,
        FamilyId::SOLD1,
        FamilyId::SOLD2,
        FamilyId::SOL0ZZ,
        FamilyId::SOL0ZZ0,
        FamilyId::SOLA02,
        FamilyId::SOL0B2,
        FamilyId::SOL03,
        FamilyId::E2D1,
        FamilyId::E2D2,
        FamilyId::E2A02,
    ];

    pub fn info(self) -> &'static FamilyInfo {
        &INFOS[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }

    pub fn group(self) -> GroupId {
        self.info().group
    }

    pub fn arity(self) -> usize {
        self.info().params.len()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' ') || *c == '-' && s.trim().ends_with('-'))
            .collect();
        let norm = match norm.as_str() {
            "sl2azzp" | "sl2azz+" => "sl2azz+".to_string(),
            "sl2azzm" | "sl2azz-" => "sl2azz-".to_string(),
            "s0l03" => "sol03".to_string(),
            other => other.to_string(),
        };
        FamilyId::ALL
            .into_iter()
            .find(|f| f.info().key == norm || f.info().name.to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))
    }
}

/// Parameters of a family, in the order of [`FamilyInfo::params`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: FamilyId,
    pub values: Vec<f64>,
}

impl FamilyParams {
    /// Checks arity and the domain predicate.
    pub fn new(family: FamilyId, values: &[f64]) -> Result<Self> {
        if values.len() != family.arity() {
            return Err(Error::Arity {
                family: family.name().to_string(),
                expected: family.arity(),
                got: values.len(),
            });
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let p = Self {
            family,
            values: values.to_vec(),
        };
        check_domain(&p)?;
        Ok(p)
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `name=value` pairs joined by spaces, e.g. `λ=4` or `u=1 v=2`.
    pub fn display(&self) -> String {
        self.family
            .info()
            .symbols
            .iter()
            .zip(&self.values)
            .map(|(n, v)| format!("{n}={}", fmt_num(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Compact number formatting: integers without a fractional part, other
/// values with up to ten significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == x.round() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        let s = format!("{:.10}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

fn domain_error(f: FamilyId) -> Error {
    Error::Domain {
        family: f.name().to_string(),
        predicate: f.info().domain.to_string(),
    }
}

fn check_domain(p: &FamilyParams) -> Result<()> {
    let v = &p.values;
    let ok = match p.family {
        FamilyId::N1 | FamilyId::N2 => v[0] > 0.0,
        FamilyId::N0 | FamilyId::SOL03 => true,
        FamilyId::SU2 => v[0] >= v[1] && v[1] > 0.0 && v[2] > 0.0,
        FamilyId::SL2D1 => v[0] > 0.0 && v[1] >= v[2] && v[2] > 0.0,
        FamilyId::SL2D2 => v.iter().all(|x| *x > 0.0),
        FamilyId::SL2AZZP => v[0] != 0.0 && v[1] > 0.0 && v[2] > 0.0,
        FamilyId::SL2AZZM => v[0] != 0.0 && v[1] < 0.0 && v[2] > 0.0,
        FamilyId::SL2AZZ0 | FamilyId::SOLD1 | FamilyId::SOLD2 => v[1] > v[0].abs(),
        FamilyId::SL2AB2 => v[0] != 0.0 && v[1] != 0.0,
        FamilyId::SL2A3 => v[0] != 0.0,
        FamilyId::SOL0ZZ | FamilyId::E2D1 | FamilyId::E2D2 => v[0] > 0.0 && v[1] > 0.0,
        FamilyId::SOL0ZZ0 | FamilyId::SOLA02 | FamilyId::E2A02 => v[0] > 0.0,
        FamilyId::SOL0B2 => v[0] != 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(domain_error(p.family))
    }
}

/// Representative of the isometry class that the classifier returns.
///
/// Several families carry a redundant sign or ordering: the metric depends
/// only on `a²` for the complex-pair families and `SL2A3`, `SOLD1` at `u`
/// and `−u` are isometric, and `E2D1` at `(u, v)` with `v < u` is isometric
/// to `(u, u²/v)` (the two spacelike eigenvalues of `L` swap roles).
pub fn canonical(p: &FamilyParams) -> FamilyParams {
    let mut v = p.values.clone();
    match p.family {
        FamilyId::SL2AZZP | FamilyId::SL2AZZM | FamilyId::SL2A3 => v[0] = v[0].abs(),
        FamilyId::SOLD1 => v[0] = v[0].abs(),
        FamilyId::E2D1 if v[1] < v[0] => v[1] = v[0] * v[0] / v[1],
        _ => {}
    }
    FamilyParams {
        family: p.family,
        values: v,
    }
}

fn sym(rows: [[f64; 3]; 3]) -> SymForm3 {
    SymForm3::from_lower(&from_rows(&rows))
}

/// Gram matrix of the family in the model basis, without the Lorentzian
/// check.
pub fn family_matrix(p: &FamilyParams) -> SymForm3 {
    let v = &p.values;
    match p.family {
        FamilyId::N1 => SymForm3::diag(1.0, 1.0, -v[0]),
        FamilyId::N2 => SymForm3::diag(1.0, -1.0, v[0]),
        FamilyId::N0 => sym([[1.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 0.0]]),
        FamilyId::SU2 => SymForm3::diag(v[0], v[1], -v[2]),
        FamilyId::SL2D1 => SymForm3::diag(-v[0], v[1], v[2]),
        FamilyId::SL2D2 => SymForm3::diag(v[0], -v[1], v[2]),
        FamilyId::SL2AZZP => {
            let (a, al, be) = (v[0], v[1], v[2]);
            let r = al.hypot(be);
            let f = 4.0 / (a * a * al * r);
            sym([
                [f * (be * be - al * al) / r, f * be, 0.0],
                [f * be, f * r, 0.0],
                [0.0, 0.0, f * a * a * al / r],
            ])
        }
        FamilyId::SL2AZZM => {
            let (a, al, be) = (v[0], v[1], v[2]);
            let r = al.hypot(be);
            let f = 4.0 / (a * a * al * r);
            sym([
                [-f * r, 0.0, f * be],
                [0.0, f * a * a * al / r, 0.0],
                [f * be, 0.0, f * (al * al - be * be) / r],
            ])
        }
        FamilyId::SL2AZZ0 => {
            let (u, w) = (v[0], v[1]);
            let f = 16.0 / (w * w - u * u);
            sym([
                [f * u, 0.0, f * w],
                [0.0, 2.0 * f * (u + w), 0.0],
                [f * w, 0.0, f * u],
            ])
        }
        FamilyId::SL2AB2 => {
            let (a, b) = (v[0], v[1]);
            let f = 1.0 / (2.0 * a * b);
            sym([
                [f * (a - 8.0), -f * a, 0.0],
                [-f * a, f * (a + 8.0), 0.0],
                [0.0, 0.0, f * 8.0 * a / b],
            ])
        }
        FamilyId::SL2A3 => {
            let a = v[0];
            let a2 = a * a;
            let a4 = a2 * a2;
            let q = 1.0 + 2.0 * a2;
            let f = 2.0 / (a4 * q);
            let q32 = q * q.sqrt();
            let m = 2.0 * a2 * a * std::f64::consts::SQRT_2;
            sym([
                [f * (1.0 - 4.0 * a4), f * q32, 0.0],
                [f * q32, f * (4.0 * a4 + 6.0 * a2 + 1.0), f * m],
                [0.0, f * m, f * 4.0 * a4],
            ])
        }
        FamilyId::SOLD1 => {
            let (u, w) = (v[0], v[1]);
            sym([
                [4.0 / (u * u - w * w), 0.0, 0.0],
                [0.0, 1.0, u / w],
                [0.0, u / w, 1.0],
            ])
        }
        FamilyId::SOLD2 => {
            let (u, w) = (v[0], v[1]);
            sym([
                [4.0 / (w * w - u * u), 0.0, 0.0],
                [0.0, u / w, -1.0],
                [0.0, -1.0, u / w],
            ])
        }
        FamilyId::SOL0ZZ => {
            let (u, w) = (v[0], v[1]);
            sym([
                [1.0 / (u + w), 0.0, 0.0],
                [0.0, -w / u, 1.0],
                [0.0, 1.0, 1.0],
            ])
        }
        FamilyId::SOL0ZZ0 => SymForm3::diag(1.0 / v[0], -1.0, 1.0),
        FamilyId::SOLA02 => {
            let b = v[0];
            sym([[0.0, 0.0, -2.0 / b], [0.0, 1.0, 1.0], [-2.0 / b, 1.0, 1.0]])
        }
        FamilyId::SOL0B2 => {
            let l = v[0];
            sym([[l * l, 0.0, 0.0], [0.0, l, 1.0], [0.0, 1.0, 0.0]])
        }
        FamilyId::SOL03 => sym([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]),
        FamilyId::E2D1 => sym([[0.0, 1.0, 0.0], [1.0, v[0], 0.0], [0.0, 0.0, v[1]]]),
        FamilyId::E2D2 => sym([[0.0, -1.0, 0.0], [-1.0, -v[0], 0.0], [0.0, 0.0, v[1]]]),
        FamilyId::E2A02 => sym([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, v[0]]]),
    }
}

/// The family's metric in the model basis of its group.
pub fn build_metric(p: &FamilyParams) -> Result<(GroupId, MetricForm)> {
    check_domain(p)?;
    let g = MetricForm::new(family_matrix(p))?;
    Ok((p.family.group(), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names_and_keys() {
        assert_eq!("sl2azz+".parse::<FamilyId>().unwrap(), FamilyId::SL2AZZP);
        assert_eq!("SL2AZZ_M".parse::<FamilyId>().unwrap(), FamilyId::SL2AZZM);
        assert_eq!("sl2azz0".parse::<FamilyId>().unwrap(), FamilyId::SL2AZZ0);
        assert_eq!("s0l03".parse::<FamilyId>().unwrap(), FamilyId::SOL03);
        assert_eq!("su2".parse::<FamilyId>().unwrap(), FamilyId::SU2);
        assert!("xyz".parse::<FamilyId>().is_err());
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
            assert_eq!(f.info().key.parse::<FamilyId>().unwrap(), f);
            assert_eq!(f.info().id, f);
        }
    }

    #[test]
    fn builder_examples() {
        let (grp, g) = build_metric(&FamilyParams::new(FamilyId::N1, &[2.0]).unwrap()).unwrap();
        assert_eq!(grp, GroupId::Nil);
        assert_eq!(g.form(), &SymForm3::diag(1.0, 1.0, -2.0));
        let (grp, g) = build_metric(&FamilyParams::new(FamilyId::SOL03, &[]).unwrap()).unwrap();
        assert_eq!(grp, GroupId::Sol);
        assert_eq!(
            g.form(),
            &sym([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
        );
        let (grp, g) = build_metric(&FamilyParams::new(FamilyId::E2A02, &[1.0]).unwrap()).unwrap();
        assert_eq!(grp, GroupId::E2tilde);
        assert_eq!(
            g.form(),
            &sym([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        );
    }

    #[test]
    fn domain_violations_name_predicate() {
        let e = FamilyParams::new(FamilyId::SU2, &[1.0, 2.0, 1.0]).unwrap_err();
        assert_eq!(
            e,
            Error::Domain {
                family: "SU2".into(),
                predicate: "μ₁≥μ₂>0, μ₃>0".into()
            }
        );
        assert!(matches!(
            FamilyParams::new(FamilyId::N1, &[1.0, 2.0]),
            Err(Error::Arity {
                expected: 1,
                got: 2,
                ..
            })
        ));
        assert!(FamilyParams::new(FamilyId::SOL0B2, &[0.0]).is_err());
        assert!(FamilyParams::new(FamilyId::SL2AZZ0, &[-2.0, 1.0]).is_err());
    }

    #[test]
    fn display_params() {
        let p = FamilyParams::new(FamilyId::E2D2, &[1.0, 2.0]).unwrap();
        assert_eq!(p.display(), "u=1 v=2");
        let p = FamilyParams::new(FamilyId::N1, &[4.0]).unwrap();
        assert_eq!(p.display(), "λ=4");
        assert_eq!(fmt_num(0.25), "0.25");
    }
}
