//! Batch verification of the catalog: every family is run through the full
//! pipeline on a parameter grid and compared with its expected data.

use super::expected::{trace_scalar, vec3};
use super::witness::{WitnessReport, WitnessStatus};
use super::{
    build_metric, canonical, classify_metric, expected_curvature, expected_ricci_kind,
    expected_signature, special_loci, witness_check, Classification, FamilyId, FamilyParams,
    RicciKindRule, SignatureRule,
};
use crate::curvature::{curvature_with, levi_civita};
use crate::lie::LieAlgebra3;
use crate::linalg::max_abs;
use crate::properties::{analyze, soliton_residual, PropertyReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Relative parameter accuracy demanded of the classifier.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// Levi-Civita compatibility and torsion, relative to the table scale.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemCheck {
    pub item: String,
    pub deviation: f64,
    pub limit: f64,
    pub pass: bool,
    /// False for items that are reported only (ambiguous table rows).
    pub asserted: bool,
    pub note: Option<String>,
}

impl ItemCheck {
    fn measure(item: &str, deviation: f64, limit: f64) -> Self {
        Self {
            item: item.to_string(),
            deviation,
            limit,
            pass: deviation.is_finite() && deviation <= limit,
            asserted: true,
            note: None,
        }
    }

    fn flag(item: &str, pass: bool, note: Option<String>) -> Self {
        Self {
            item: item.to_string(),
            deviation: if pass { 0.0 } else { 1.0 },
            limit: 0.0,
            pass,
            asserted: true,
            note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerification {
    pub family: FamilyId,
    pub params: Vec<f64>,
    pub items: Vec<ItemCheck>,
    pub properties: Option<PropertyReport>,
    pub classification: Option<Classification>,
}

impl FamilyVerification {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass || !i.asserted)
    }

    pub fn item(&self, name: &str) -> Option<&ItemCheck> {
        self.items.iter().find(|i| i.item == name)
    }
}

fn geometric(n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|k| 0.25 * 16f64.powf(k as f64 / (n - 1) as f64))
        .collect()
}

fn ratios(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -1.0 + 2.0 * (k + 1) as f64 / (n + 1) as f64)
        .collect()
}

/// The design grid: geometric samples in `[¼, 4]` per axis, clipped to the
/// domain, plus the boundary loci of the signature and type tables.
pub fn family_grid(f: FamilyId, n: usize) -> Vec<FamilyParams> {
    let xs = geometric(n);
    let signed: Vec<f64> = xs.iter().flat_map(|x| [*x, -*x]).collect();
    let mut pts: Vec<Vec<f64>> = Vec::new();
    let cube = |pts: &mut Vec<Vec<f64>>, a: &[f64], b: &[f64], c: &[f64]| {
        for x in a {
            for y in b {
                for z in c {
                    pts.push(vec![*x, *y, *z]);
                }
            }
        }
    };
    let square = |pts: &mut Vec<Vec<f64>>, a: &[f64], b: &[f64]| {
        for x in a {
            for y in b {
                pts.push(vec![*x, *y]);
            }
        }
    };
    match f {
        FamilyId::N0 | FamilyId::SOL03 => pts.push(vec![]),
        FamilyId::N1 | FamilyId::N2 | FamilyId::SOL0ZZ0 | FamilyId::SOLA02 | FamilyId::E2A02 => {
            pts.extend(xs.iter().map(|x| vec![*x]))
        }
        FamilyId::SOL0B2 | FamilyId::SL2A3 => pts.extend(signed.iter().map(|x| vec![*x])),
        FamilyId::SU2 => {
            cube(&mut pts, &xs, &xs, &xs);
            for y in &xs {
                for z in &xs {
                    pts.push(vec![y + z, *y, *z]);
                }
            }
        }
        FamilyId::SL2D1 | FamilyId::SL2D2 => {
            cube(&mut pts, &xs, &xs, &xs);
            for y in &xs {
                for z in &xs {
                    pts.push(vec![y + z, *y, *z]);
                    pts.push(vec![y - z, *y, *z]);
                }
            }
        }
        FamilyId::SL2AZZP => {
            cube(&mut pts, &xs, &xs, &xs);
            for a in &xs {
                for b in &xs {
                    pts.push(vec![*a, a * a / 2.0, *b]);
                }
            }
        }
        FamilyId::SL2AZZM => {
            let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
            cube(&mut pts, &xs, &neg, &xs);
        }
        FamilyId::SL2AZZ0 | FamilyId::SOLD1 | FamilyId::SOLD2 => {
            for v in &xs {
                for t in ratios(n) {
                    pts.push(vec![t * v, *v]);
                }
            }
        }
        FamilyId::SL2AB2 => {
            square(&mut pts, &signed, &signed);
            for b in &signed {
                pts.push(vec![2.0 * b, *b]);
            }
        }
        FamilyId::SOL0ZZ | FamilyId::E2D1 | FamilyId::E2D2 => square(&mut pts, &xs, &xs),
    }
    let mut out: Vec<FamilyParams> = Vec::new();
    for v in pts {
        if let Ok(p) = FamilyParams::new(f, &v) {
            if !out.iter().any(|q| q.values == p.values) {
                out.push(p);
            }
        }
    }
    out
}

/// Largest parameter error relative to the largest parameter magnitude, so
/// that a parameter at zero is judged on the family's own scale.
fn rel_params(got: &[f64], want: &[f64]) -> f64 {
    let scale = want
        .iter()
        .fold(0.0_f64, |m, y| m.max(y.abs()))
        .max(f64::MIN_POSITIVE);
    got.iter()
        .zip(want)
        .map(|(x, y)| (x - y).abs() / scale)
        .fold(0.0, f64::max)
}

/// Runs build, curvature, detectors and classification at `p` and compares
/// each result with the expected data.
pub fn verify_family(p: &FamilyParams, tol: f64) -> FamilyVerification {
    let mut items = Vec::new();
    let (group, g) = match build_metric(p) {
        Ok(x) => x,
        Err(e) => {
            items.push(ItemCheck::flag("lorentzian", false, Some(e.to_string())));
            return FamilyVerification {
                family: p.family,
                params: p.values.clone(),
                items,
                properties: None,
                classification: None,
            };
        }
    };
    items.push(ItemCheck::flag("lorentzian", true, None));
    let alg = LieAlgebra3::model(group);
    let lc = levi_civita(&alg, &g);
    let data = curvature_with(&alg, &lc);
    let report = analyze(&alg, &g, &lc, &data, tol);
    let m = lc.scale();
    let m2 = m * m;

    let gs = max_abs(g.matrix()).max(1.0);
    items.push(ItemCheck::measure(
        "levi-civita",
        (lc.compatibility_defect() / (gs * m)).max(lc.torsion_defect(&alg) / m.max(alg.scale())),
        STRUCTURE_TOL,
    ));

    let exp = expected_curvature(p);
    let ric_ref = max_abs(exp.ric.matrix());
    let ric_den = if ric_ref > 0.0 { ric_ref } else { m2 };
    items.push(ItemCheck::measure(
        "ric",
        max_abs(&(data.ric.matrix() - exp.ric.matrix())) / ric_den,
        tol,
    ));
    let s_den = exp
        .scalar
        .abs()
        .max(max_abs(&data.ric_op))
        .max(if ric_ref > 0.0 { 0.0 } else { m2 });
    items.push(ItemCheck::measure(
        "scalar",
        (data.scalar - exp.scalar).abs() / s_den,
        tol,
    ));
    let table_s = trace_scalar(p, &exp.ric);
    items.push(ItemCheck::measure(
        "scalar table consistency",
        (table_s - exp.scalar).abs() / s_den,
        tol,
    ));

    match expected_signature(p, tol) {
        SignatureRule::Exact { signature } => items.push(ItemCheck::flag(
            "signature",
            report.ricci_signature == signature,
            Some(format!(
                "computed {} expected {}",
                report.ricci_signature, signature
            )),
        )),
        SignatureRule::Ambiguous {
            computed_hint,
            note,
        } => items.push(ItemCheck {
            item: "signature".into(),
            deviation: 0.0,
            limit: 0.0,
            pass: report.ricci_signature == computed_hint,
            asserted: false,
            note: Some(format!(
                "ambiguous row: {note}; computed {}",
                report.ricci_signature
            )),
        }),
    }

    let rule = expected_ricci_kind(p, tol);
    let ty_ok = report.ricci_type.is_some_and(|t| rule.matches(t.kind()));
    items.push(ItemCheck::flag(
        "ricci type",
        ty_ok,
        Some(format!(
            "computed {} expected {:?}",
            report
                .ricci_type
                .map_or("none".to_string(), |t| t.label().to_string()),
            rule
        )),
    ));
    if rule == RicciKindRule::NilpotentDoubleRoot {
        items.push(ItemCheck::measure(
            "ric squared",
            report.defects.ric_squared / (m2 * m2),
            tol,
        ));
    }

    let loci = special_loci(p, tol);
    items.push(ItemCheck::flag("flat", report.flat == loci.flat, None));
    let cc_ok = match (report.constant_curvature, loci.constant_curvature) {
        (Some(x), Some(y)) => (x - y).abs() <= tol * y.abs().max(m2),
        (None, None) => true,
        _ => false,
    };
    items.push(ItemCheck::flag(
        "constant curvature",
        cc_ok,
        Some(format!(
            "computed {:?} expected {:?}",
            report.constant_curvature, loci.constant_curvature
        )),
    ));
    let equiv = report.einstein.is_some() == report.locally_symmetric
        && report.locally_symmetric == report.constant_curvature.is_some();
    items.push(ItemCheck::flag(
        "einstein ⇔ locally symmetric ⇔ constant curvature",
        equiv,
        None,
    ));
    items.push(ItemCheck::flag(
        "flag chain",
        report.chain_violations.is_empty(),
        (!report.chain_violations.is_empty()).then(|| report.chain_violations.join(", ")),
    ));
    items.push(ItemCheck::flag(
        "semi-symmetric not locally symmetric",
        (report.semi_symmetric && !report.locally_symmetric)
            == loci.semi_symmetric_not_locally_symmetric,
        None,
    ));

    let ric_scale = max_abs(data.ric.matrix());
    let ric_scale = if ric_scale > 0.0 { ric_scale } else { 1.0 };
    match loci.soliton {
        Some((x, c)) => {
            let r = soliton_residual(&alg, &g, &data, &vec3(x), c);
            items.push(ItemCheck::measure(
                "soliton (tabulated X, c)",
                r / ric_scale,
                tol,
            ));
            let fit_ok = report
                .soliton
                .as_ref()
                .is_some_and(|s| (s.c - c).abs() <= tol * c.abs().max(1.0));
            items.push(ItemCheck::flag(
                "soliton (detector)",
                fit_ok,
                Some(format!(
                    "detector {:?}",
                    report.soliton.as_ref().map(|s| (s.c, s.residual))
                )),
            ));
        }
        None if report.einstein.is_none() => items.push(ItemCheck::flag(
            "no soliton",
            report.soliton.is_none(),
            Some(format!("fit residual {:.3e}", report.defects.soliton)),
        )),
        None => {}
    }

    let classification = match classify_metric(&alg, &g, tol) {
        Ok(c) => {
            let want = canonical(p);
            let same = c.family == p.family;
            let dev = if same {
                rel_params(&c.params.values, &want.values)
            } else {
                f64::INFINITY
            };
            let mut it = ItemCheck::measure("classification", dev, CLASSIFY_TOL);
            if !same {
                it.note = Some(format!("classified as {} {}", c.family, c.params.display()));
            }
            items.push(it);
            Some(c)
        }
        Err(e) => {
            items.push(ItemCheck::flag(
                "classification",
                false,
                Some(e.to_string()),
            ));
            None
        }
    };

    FamilyVerification {
        family: p.family,
        params: p.values.clone(),
        items,
        properties: Some(report),
        classification,
    }
}

pub fn verify_grid(f: FamilyId, n: usize, tol: f64) -> Vec<FamilyVerification> {
    family_grid(f, n)
        .par_iter()
        .map(|p| verify_family(p, tol))
        .collect()
}

/// Per-family digest of a grid run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub family: FamilyId,
    pub samples: usize,
    pub passed: usize,
    /// Largest `deviation / limit` per measured item.
    pub worst: BTreeMap<String, f64>,
    /// `item at params: note` for every asserted failure.
    pub failures: Vec<String>,
    /// Reported but unasserted observations (ambiguous table rows).
    pub notes: Vec<String>,
    /// Item names checked on every sample, in order.
    pub checks: Vec<String>,
    /// Distinct Ricci operator types seen over the grid.
    pub ricci_types: Vec<String>,
    pub witness_cases: Vec<WitnessSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub case: String,
    pub status: WitnessStatus,
    pub samples: usize,
    pub worst_deviation: f64,
    pub note: Option<String>,
}

impl VerifySummary {
    /// Every asserted catalog item holds on every sample. Witness maps are
    /// audited separately, see [`VerifySummary::witnesses_pass`].
    pub fn pass(&self) -> bool {
        self.passed == self.samples
    }

    pub fn witnesses_pass(&self) -> bool {
        self.witness_cases
            .iter()
            .all(|w| w.status != WitnessStatus::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tol: f64,
    pub grid: usize,
    pub evaluations: usize,
    pub families: Vec<VerifySummary>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.families.iter().all(VerifySummary::pass)
    }

    pub fn witnesses_pass(&self) -> bool {
        self.families.iter().all(VerifySummary::witnesses_pass)
    }
}

fn summarize_witnesses(reports: &[WitnessReport]) -> Vec<WitnessSummary> {
    let mut out: Vec<WitnessSummary> = Vec::new();
    for r in reports {
        for c in &r.cases {
            let worst = c
                .stages
                .iter()
                .filter(|s| !s.pass)
                .map(|s| s.deviation)
                .fold(0.0, f64::max);
            match out.iter_mut().find(|w| w.case == c.name) {
                Some(w) => {
                    w.samples += 1;
                    w.worst_deviation = w.worst_deviation.max(worst);
                    if c.status == WitnessStatus::Fail {
                        w.status = WitnessStatus::Fail;
                    }
                }
                None => out.push(WitnessSummary {
                    case: c.name.clone(),
                    status: c.status,
                    samples: 1,
                    worst_deviation: worst,
                    note: c.note.clone(),
                }),
            }
        }
    }
    out
}

fn summarize(
    f: FamilyId,
    runs: &[FamilyVerification],
    witnesses: &[WitnessReport],
) -> VerifySummary {
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let mut checks: Vec<String> = Vec::new();
    let mut ricci_types: Vec<String> = Vec::new();
    for r in runs {
        if let Some(t) = r.properties.as_ref().and_then(|p| p.ricci_type) {
            if !ricci_types.iter().any(|x| x == t.label()) {
                ricci_types.push(t.label().to_string());
            }
        }
        let at = FamilyParams {
            family: f,
            values: r.params.clone(),
        }
        .display();
        for it in &r.items {
            if !checks.contains(&it.item) {
                checks.push(it.item.clone());
            }
            if it.limit > 0.0 {
                let e = worst.entry(it.item.clone()).or_insert(0.0);
                *e = e.max(it.deviation / it.limit);
            }
            if !it.asserted {
                notes.push(format!(
                    "{} at {at}: {}",
                    it.item,
                    it.note.clone().unwrap_or_default()
                ));
            } else if !it.pass {
                let detail = it.note.clone().unwrap_or_else(|| {
                    format!("deviation {:.3e} > {:.1e}", it.deviation, it.limit)
                });
                failures.push(format!("{} at {at}: {detail}", it.item));
            }
        }
    }
    VerifySummary {
        family: f,
        samples: runs.len(),
        passed: runs.iter().filter(|r| r.pass()).count(),
        worst,
        failures,
        notes,
        checks,
        ricci_types,
        witness_cases: summarize_witnesses(witnesses),
    }
}

/// Verifies the given families (all when empty) on grids of `n` points per
/// axis, including the automorphism witnesses at every grid point.
pub fn verify_all(families: &[FamilyId], n: usize, tol: f64) -> VerifyReport {
    let fams: Vec<FamilyId> = if families.is_empty() {
        FamilyId::ALL.to_vec()
    } else {
        families.to_vec()
    };
    let per_family: Vec<(VerifySummary, usize)> = fams
        .par_iter()
        .map(|&f| {
            let grid = family_grid(f, n);
            let runs: Vec<FamilyVerification> =
                grid.par_iter().map(|p| verify_family(p, tol)).collect();
            let wit: Vec<WitnessReport> = grid.iter().map(|p| witness_check(p, tol)).collect();
            (summarize(f, &runs, &wit), runs.len())
        })
        .collect();
    VerifyReport {
        tol,
        grid: n,
        evaluations: per_family.iter().map(|(_, k)| k).sum(),
        families: per_family.into_iter().map(|(s, _)| s).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;

    #[test]
    fn grid_sizes() {
        let total: usize = FamilyId::ALL.iter().map(|f| family_grid(*f, 5).len()).sum();
        assert!(total < 2000, "{total}");
        assert_eq!(family_grid(FamilyId::N0, 5).len(), 1);
        assert_eq!(family_grid(FamilyId::N1, 5).len(), 5);
        assert!(family_grid(FamilyId::SU2, 5)
            .iter()
            .any(|p| p.values[0] == p.values[1] + p.values[2]));
    }

    #[test]
    fn verify_examples() {
        let r = verify_family(
            &FamilyParams::new(FamilyId::SU2, &[1.0, 1.0, 1.0]).unwrap(),
            DEFAULT_TOL,
        );
        assert!(r.pass(), "{:#?}", r.items);
        let r = verify_family(
            &FamilyParams::new(FamilyId::SL2D1, &[1.0, 1.0, 1.0]).unwrap(),
            DEFAULT_TOL,
        );
        assert!(r.pass(), "{:#?}", r.items);
        let cc = r.properties.unwrap().constant_curvature.unwrap();
        assert!((cc + 1.0).abs() < 1e-12);
        let r = verify_family(
            &FamilyParams::new(FamilyId::SOLD2, &[0.0, 1.0]).unwrap(),
            DEFAULT_TOL,
        );
        assert!(r.pass(), "{:#?}", r.items);
        assert!(r.properties.unwrap().flat);
    }

    #[test]
    fn sold1_negative_u_is_reported_not_asserted() {
        let r = verify_family(
            &FamilyParams::new(FamilyId::SOLD1, &[-0.5, 1.0]).unwrap(),
            DEFAULT_TOL,
        );
        let s = r.item("signature").unwrap();
        assert!(!s.asserted);
        assert!(s.note.as_ref().unwrap().starts_with("ambiguous row"));
    }
}
