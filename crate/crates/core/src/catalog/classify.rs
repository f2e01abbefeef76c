//! Maps an arbitrary metric on a model algebra to its catalog family.

use super::{FamilyId, FamilyParams};
use crate::error::{Error, Result};
use crate::lie::{identify_group, GroupId, LieAlgebra3, MetricForm};
use crate::linalg::scale_of;
use crate::milnor::{
    classify_operator, milnor_operator, OperatorType, Orientation, TypeClassification,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub family: FamilyId,
    pub params: FamilyParams,
    /// Orientation in which `L` has the family's normal form.
    pub orientation: Orientation,
    /// Type of `L` in that orientation.
    pub operator: OperatorType,
    pub margin: f64,
    pub warnings: Vec<String>,
}

type Match = Option<(FamilyId, Vec<f64>)>;

fn nil(ty: &OperatorType, zero: &dyn Fn(f64) -> bool) -> Match {
    match *ty {
        OperatorType::DiagonalReal { a, b, c } => {
            if zero(a) && zero(b) && !zero(c) {
                Some((FamilyId::N1, vec![c * c]))
            } else if zero(c) && (zero(a) != zero(b)) {
                let x = if zero(a) { b } else { a };
                Some((FamilyId::N2, vec![x * x]))
            } else {
                None
            }
        }
        OperatorType::DoubleRoot { a, b } if zero(a) && zero(b) => Some((FamilyId::N0, vec![])),
        _ => None,
    }
}

fn su2(ty: &OperatorType, zero: &dyn Fn(f64) -> bool) -> Match {
    match *ty {
        OperatorType::DiagonalReal { a, b, c } if a > 0.0 && b > 0.0 && c < 0.0 => {
            if zero(a) || zero(b) || zero(c) {
                return None;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            Some((
                FamilyId::SU2,
                vec![4.0 / (-c * lo), 4.0 / (-c * hi), 4.0 / (a * b)],
            ))
        }
        _ => None,
    }
}

fn sl2(ty: &OperatorType, zero: &dyn Fn(f64) -> bool) -> Match {
    match *ty {
        OperatorType::DiagonalReal { a, b, c } => {
            if zero(a) || zero(b) || zero(c) {
                return None;
            }
            if a > 0.0 && b > 0.0 && c > 0.0 {
                let (lo, hi) = (a.min(b), a.max(b));
                Some((
                    FamilyId::SL2D1,
                    vec![4.0 / (lo * hi), 4.0 / (c * lo), 4.0 / (hi * c)],
                ))
            } else if c < 0.0 && a * b < 0.0 {
                let (neg, pos) = (a.min(b), a.max(b));
                Some((
                    FamilyId::SL2D2,
                    vec![4.0 / (-c * pos), 4.0 / (-neg * pos), 4.0 / (neg * c)],
                ))
            } else {
                None
            }
        }
        OperatorType::ComplexPair { a, alpha, beta } if a > 0.0 && !zero(a) && beta > 0.0 => {
            if zero(alpha) {
                let (a2, b2) = (a * a, 4.0 * beta * beta);
                Some((FamilyId::SL2AZZ0, vec![a2 - b2, a2 + b2]))
            } else if alpha > 0.0 {
                Some((FamilyId::SL2AZZP, vec![a.sqrt(), alpha, beta]))
            } else {
                Some((FamilyId::SL2AZZM, vec![a.sqrt(), alpha, beta]))
            }
        }
        OperatorType::DoubleRoot { a, b } if !zero(a) && !zero(b) => {
            Some((FamilyId::SL2AB2, vec![a, b]))
        }
        OperatorType::TripleRoot { a } if a > 0.0 && !zero(a) => Some((FamilyId::SL2A3, vec![a])),
        _ => None,
    }
}

fn sol(ty: &OperatorType, zero: &dyn Fn(f64) -> bool) -> Match {
    match *ty {
        OperatorType::DiagonalReal { a, b, c } => {
            if zero(c) && !zero(a) && !zero(b) && a * b < 0.0 {
                let (neg, pos) = (a.min(b), a.max(b));
                (pos >= -neg).then(|| (FamilyId::SOLD1, vec![pos + neg, pos - neg]))
            } else if !zero(c) && c > 0.0 && (zero(a) != zero(b)) {
                let be = if zero(a) { b } else { a };
                let al = -c;
                (be > 0.0).then(|| (FamilyId::SOLD2, vec![al + be, be - al]))
            } else {
                None
            }
        }
        OperatorType::ComplexPair { a, alpha, beta } if zero(a) && beta > 0.0 => {
            if zero(alpha) {
                Some((FamilyId::SOL0ZZ0, vec![beta * beta]))
            } else {
                Some((FamilyId::SOL0ZZ, vec![alpha * alpha, beta * beta]))
            }
        }
        OperatorType::DoubleRoot { a, b } => {
            if zero(b) && !zero(a) && a < 0.0 {
                Some((FamilyId::SOLA02, vec![-a]))
            } else if zero(a) && !zero(b) {
                Some((FamilyId::SOL0B2, vec![1.0 / b]))
            } else {
                None
            }
        }
        OperatorType::TripleRoot { a } if zero(a) => Some((FamilyId::SOL03, vec![])),
        _ => None,
    }
}

fn e2(ty: &OperatorType, zero: &dyn Fn(f64) -> bool) -> Match {
    match *ty {
        OperatorType::DiagonalReal { a, b, c } => {
            if zero(c) && !zero(a) && !zero(b) && a > 0.0 && b > 0.0 {
                let (al, be) = (a.min(b), a.max(b));
                Some((FamilyId::E2D1, vec![al * be, be * be]))
            } else if !zero(c) && c < 0.0 && (zero(a) != zero(b)) {
                let be = if zero(a) { b } else { a };
                (be > 0.0).then(|| (FamilyId::E2D2, vec![-c * be, be * be]))
            } else {
                None
            }
        }
        OperatorType::DoubleRoot { a, b } if zero(b) && !zero(a) && a > 0.0 => {
            Some((FamilyId::E2A02, vec![a * a]))
        }
        _ => None,
    }
}

/// Classifies `g` on `alg`, which must be one of the five model algebras.
///
/// `L` is computed for both orientations; the family is the one whose
/// normal-form conventions one of them satisfies. Values below
/// `√tol · max|L|` count as zero.
pub fn classify_metric(alg: &LieAlgebra3, g: &MetricForm, tol: f64) -> Result<Classification> {
    classify_metric_with(alg, g, tol, None)
}

/// [`classify_metric`] restricted to one orientation when `only` is set.
pub fn classify_metric_with(
    alg: &LieAlgebra3,
    g: &MetricForm,
    tol: f64,
    only: Option<Orientation>,
) -> Result<Classification> {
    let group = identify_group(alg, tol)?;
    if group == GroupId::Abelian {
        return Err(Error::Classification(
            "the abelian algebra carries no catalog family".into(),
        ));
    }
    let model = LieAlgebra3::model(group);
    if alg.distance(&model) > tol * model.scale() {
        return Err(Error::Classification(format!(
            "the structure constants are not those of the {} model basis",
            group.name()
        )));
    }

    let op = milnor_operator(alg, g, Orientation::Positive, tol)?;
    let tried: Vec<(Orientation, Result<TypeClassification>)> = [
        (Orientation::Positive, op),
        (Orientation::Negative, op.flipped()),
    ]
    .into_iter()
    .filter(|(o, _)| only.is_none_or(|x| x == *o))
    .map(|(o, m)| (o, classify_operator(&m, tol)))
    .collect();
    let matcher: fn(&OperatorType, &dyn Fn(f64) -> bool) -> Match = match group {
        GroupId::Nil => nil,
        GroupId::SU2 => su2,
        GroupId::PSL2R => sl2,
        GroupId::Sol => sol,
        GroupId::E2tilde => e2,
        GroupId::Abelian => unreachable!("handled above"),
    };

    let mut first_err = None;
    for (o, res) in &tried {
        let tc = match res {
            Ok(tc) => tc,
            Err(e) => {
                first_err.get_or_insert_with(|| e.clone());
                continue;
            }
        };
        if tc.sign != 1 {
            continue;
        }
        // zero relative to the eigen-data, not to the entries of L, which
        // can be far larger in a badly conditioned basis
        let thr = tol.sqrt() * scale_of(&tc.ty.normal_form_matrix());
        let zero = |x: f64| x.abs() <= thr;
        let Some((family, values)) = matcher(&tc.ty, &zero) else {
            continue;
        };
        let params = FamilyParams::new(family, &values)?;
        let mut warnings = Vec::new();
        if tc.margin < tol {
            warnings.push(format!(
                "fragile classification: type decision margin {:.3e} is below the tolerance",
                tc.margin
            ));
        }
        return Ok(Classification {
            family,
            params,
            orientation: *o,
            operator: tc.ty,
            margin: tc.margin,
            warnings,
        });
    }
    let detail = tried
        .iter()
        .map(|(o, r)| match r {
            Ok(tc) => format!("orientation {o}: {}", tc.ty),
            Err(e) => format!("orientation {o}: {e}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    match first_err {
        Some(e) if tried.iter().all(|(_, r)| r.is_err()) => Err(e),
        _ => Err(Error::Classification(format!(
            "{} metric with {detail}",
            group.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_metric, canonical};
    use crate::linalg::{SymForm3, DEFAULT_TOL};

    fn classify(group: GroupId, g: SymForm3) -> Classification {
        classify_metric(
            &LieAlgebra3::model(group),
            &MetricForm::new(g).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn nil_examples() {
        let c = classify(GroupId::Nil, SymForm3::diag(1.0, 1.0, -4.0));
        assert_eq!(c.family, FamilyId::N1);
        assert!((c.params.values[0] - 4.0).abs() < 1e-12);
        let c = classify(
            GroupId::Nil,
            SymForm3::from_lower(&crate::linalg::from_rows(&[
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.5],
                [0.0, 0.5, 0.0],
            ])),
        );
        assert_eq!(c.family, FamilyId::N0);
        let c = classify(GroupId::Nil, SymForm3::diag(1.0, -1.0, 9.0));
        assert_eq!(c.family, FamilyId::N2);
        assert!((c.params.values[0] - 9.0).abs() < 1e-12);
    }

    /// The tabulated N2 matrix has a timelike center and lands in N1.
    #[test]
    fn tabulated_n2_matrix_is_n1() {
        let c = classify(GroupId::Nil, SymForm3::diag(9.0, 1.0, -1.0));
        assert_eq!(c.family, FamilyId::N1);
        assert!((c.params.values[0] - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_samples() {
        let pts: &[(FamilyId, &[f64])] = &[
            (FamilyId::SU2, &[3.0, 1.5, 0.7]),
            (FamilyId::SL2D1, &[1.3, 2.1, 0.7]),
            (FamilyId::SL2D2, &[1.3, 2.1, 0.7]),
            (FamilyId::SL2AZZP, &[-1.3, 0.7, 0.9]),
            (FamilyId::SL2AZZM, &[1.3, -0.7, 0.9]),
            (FamilyId::SL2AZZ0, &[-0.5, 1.0]),
            (FamilyId::SL2AB2, &[1.3, -0.7]),
            (FamilyId::SL2A3, &[-0.8]),
            (FamilyId::SOLD1, &[-0.5, 1.7]),
            (FamilyId::SOLD2, &[0.5, 1.7]),
            (FamilyId::SOL0ZZ, &[0.6, 1.3]),
            (FamilyId::SOL0ZZ0, &[0.6]),
            (FamilyId::SOLA02, &[0.64]),
            (FamilyId::SOL0B2, &[-1.5]),
            (FamilyId::SOL03, &[]),
            (FamilyId::E2D1, &[2.0, 1.0]),
            (FamilyId::E2D2, &[1.0, 2.0]),
            (FamilyId::E2A02, &[1.7]),
        ];
        for (f, v) in pts {
            let p = FamilyParams::new(*f, v).unwrap();
            let (grp, g) = build_metric(&p).unwrap();
            let c = classify_metric(&LieAlgebra3::model(grp), &g, DEFAULT_TOL).unwrap();
            let want = canonical(&p);
            assert_eq!(c.family, *f);
            for (x, y) in c.params.values.iter().zip(&want.values) {
                assert!(
                    (x - y).abs() <= 1e-9 * y.abs().max(1.0),
                    "{f}: {:?} vs {:?}",
                    c.params.values,
                    want.values
                );
            }
        }
    }

    #[test]
    fn non_model_basis_rejected() {
        let alg = LieAlgebra3::from_brackets(&[(0, 1, [0.0, 0.0, 2.0])]);
        let g = MetricForm::new(SymForm3::diag(1.0, 1.0, -1.0)).unwrap();
        assert!(matches!(
            classify_metric(&alg, &g, DEFAULT_TOL),
            Err(Error::Classification(_))
        ));
    }
}
