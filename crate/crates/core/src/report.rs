//! Input parsing and the JSON report document that bundles the whole
//! pipeline for one metric.

use crate::catalog::{build_metric, classify_metric_with, Classification, FamilyParams};
use crate::curvature::{curvature_with, levi_civita};
use crate::error::{Error, Result};
use crate::lie::{identify_group, validate_algebra, GroupId, LieAlgebra3, MetricForm};
use crate::linalg::{from_rows, to_rows, EigenData3, SymForm3};
use crate::milnor::{classify_operator, milnor_operator, OperatorType, Orientation};
use crate::properties::{analyze, PropertyReport};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::time::Instant;

/// Which orientation(s) the classifier may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationChoice {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[default]
    #[serde(rename = "auto")]
    Auto,
}

impl OrientationChoice {
    pub fn restriction(self) -> Option<Orientation> {
        match self {
            OrientationChoice::Positive => Some(Orientation::Positive),
            OrientationChoice::Negative => Some(Orientation::Negative),
            OrientationChoice::Auto => None,
        }
    }
}

impl FromStr for OrientationChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "positive" => Ok(OrientationChoice::Positive),
            "-" | "negative" => Ok(OrientationChoice::Negative),
            "auto" => Ok(OrientationChoice::Auto),
            other => Err(Error::Parse(format!(
                "orientation must be +, - or auto, got '{other}'"
            ))),
        }
    }
}

/// Parses `"a,b,c;d,e,f;g,h,i"` into rows. Only the lower triangle is used
/// by [`SymForm3::from_lower`]; the caller decides what to do with an
/// asymmetric upper triangle.
pub fn parse_rows(s: &str) -> Result<[[f64; 3]; 3]> {
    let rows: Vec<&str> = s.trim().split(';').collect();
    if rows.len() != 3 {
        return Err(Error::Parse(format!(
            "expected 3 rows separated by ';', found {}",
            rows.len()
        )));
    }
    let mut out = [[0.0; 3]; 3];
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 3 {
            return Err(Error::Parse(format!(
                "row {}: expected 3 entries separated by ',', found {}",
                i + 1,
                cells.len()
            )));
        }
        for (j, c) in cells.iter().enumerate() {
            let c = c.trim();
            out[i][j] = c.parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "row {}, column {}: '{c}' is not a number",
                    i + 1,
                    j + 1
                ))
            })?;
            if !out[i][j].is_finite() {
                return Err(Error::NonFinite);
            }
        }
    }
    Ok(out)
}

/// Parses comma-separated family parameters, e.g. `"1,2"`.
pub fn parse_params(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .enumerate()
        .map(|(k, c)| {
            let c = c.trim();
            c.parse::<f64>()
                .map_err(|_| Error::Parse(format!("parameter {}: '{c}' is not a number", k + 1)))
        })
        .collect()
}

/// One bracket `[X_i, X_j] = Σ c_k X_k` of a user-supplied algebra (indices
/// from 1 as in the usual notation).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub value: [f64; 3],
}

/// The JSON input file: a metric with either a model group or explicit
/// brackets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub brackets: Option<Vec<BracketSpec>>,
    pub metric: [[f64; 3]; 3],
}

/// A resolved metric input.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricInput {
    pub algebra: LieAlgebra3,
    /// `None` for explicit brackets until the group is identified.
    pub group: Option<GroupId>,
    pub rows: [[f64; 3]; 3],
    pub family: Option<FamilyParams>,
}

impl MetricInput {
    pub fn model(group: GroupId, rows: [[f64; 3]; 3]) -> Self {
        Self {
            algebra: LieAlgebra3::model(group),
            group: Some(group),
            rows,
            family: None,
        }
    }

    pub fn family(p: FamilyParams) -> Result<Self> {
        let (group, g) = build_metric(&p)?;
        Ok(Self {
            algebra: LieAlgebra3::model(group),
            group: Some(group),
            rows: to_rows(g.matrix()),
            family: Some(p),
        })
    }

    pub fn from_file(f: &MetricFile) -> Result<Self> {
        match (&f.group, &f.brackets) {
            (Some(g), None) => Ok(Self::model(g.parse()?, f.metric)),
            (None, Some(b)) => {
                let mut pairs = Vec::with_capacity(b.len());
                for s in b {
                    if !(1..=3).contains(&s.i) || !(1..=3).contains(&s.j) || s.i == s.j {
                        return Err(Error::Parse(format!(
                            "bracket [X{}, X{}]: indices must be distinct and in 1..=3",
                            s.i, s.j
                        )));
                    }
                    pairs.push((s.i - 1, s.j - 1, s.value));
                }
                Ok(Self {
                    algebra: LieAlgebra3::from_brackets(&pairs),
                    group: None,
                    rows: f.metric,
                    family: None,
                })
            }
            _ => Err(Error::Parse(
                "give exactly one of \"group\" and \"brackets\"".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub group: GroupId,
    /// Structure constants `[[X_i, X_j]]` in the input basis.
    pub structure: [[[f64; 3]; 3]; 3],
    pub metric: SymForm3,
    pub family: Option<FamilyParams>,
    pub tol: f64,
    pub orientation: OrientationChoice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSummary {
    pub orientation: Orientation,
    pub matrix: [[f64; 3]; 3],
    pub eigen: Option<EigenData3>,
    pub operator_type: Option<OperatorType>,
    /// +1 when `L` itself has the normal form, −1 when `−L` does.
    pub sign: Option<i8>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    /// `levi_civita[i]` is the matrix of `L_{X_{i+1}}`.
    pub levi_civita: [[[f64; 3]; 3]; 3],
    /// `K(X_i, X_j)` for `i < j`, in the order (1,2), (1,3), (2,3).
    pub curvature: [[[f64; 3]; 3]; 3],
    pub ric: SymForm3,
    pub ric_operator: [[f64; 3]; 3],
    pub scalar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: InputEcho,
    pub milnor: Vec<OperatorSummary>,
    pub curvature: CurvatureSummary,
    pub properties: PropertyReport,
    pub classification: Option<Classification>,
    pub warnings: Vec<String>,
    /// Wall-clock milliseconds, only when requested; leaving it out keeps
    /// the document byte-for-byte reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn finite_or_max(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

/// Runs the full pipeline. Errors are input problems (non-Lorentzian metric,
/// invalid algebra); a failed classification is recorded as a warning.
pub fn build_report(
    input: &MetricInput,
    tol: f64,
    orientation: OrientationChoice,
    timing: bool,
) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let g = MetricForm::with_tol(SymForm3::from_lower(&from_rows(&input.rows)), tol)?;
    if input.rows[0][1] != input.rows[1][0]
        || input.rows[0][2] != input.rows[2][0]
        || input.rows[1][2] != input.rows[2][1]
    {
        warnings.push("asymmetric metric input: the upper triangle was ignored".to_string());
    }
    let alg = &input.algebra;
    let check = validate_algebra(alg, tol);
    if !check.ok() {
        return Err(Error::InvalidAlgebra(format!(
            "antisymmetry defect {:.3e}, Jacobi defect {:.3e}, largest |tr ad| {:.3e}",
            check.antisymmetry.worst, check.jacobi.worst, check.unimodular.worst
        )));
    }
    let group = match input.group {
        Some(gr) => gr,
        None => identify_group(alg, tol)?,
    };

    let orientations: Vec<Orientation> = match orientation.restriction() {
        Some(o) => vec![o],
        None => vec![Orientation::Positive, Orientation::Negative],
    };
    let mut milnor = Vec::new();
    for o in orientations {
        match milnor_operator(alg, &g, o, tol) {
            Ok(m) => {
                let (eigen, ty, sign, error) = match classify_operator(&m, tol) {
                    Ok(c) => (Some(c.eigen), Some(c.ty), Some(c.sign), None),
                    Err(e) => (None, None, None, Some(e.to_string())),
                };
                milnor.push(OperatorSummary {
                    orientation: o,
                    matrix: to_rows(m.matrix()),
                    eigen,
                    operator_type: ty,
                    sign,
                    error,
                });
            }
            Err(e @ Error::NotSelfAdjoint(_)) => return Err(Error::InvalidAlgebra(e.to_string())),
            Err(e) => return Err(e),
        }
    }

    let lc = levi_civita(alg, &g);
    let data = curvature_with(alg, &lc);
    let properties = analyze(alg, &g, &lc, &data, tol);
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let curvature = CurvatureSummary {
        levi_civita: std::array::from_fn(|i| to_rows(lc.basis_operator(i))),
        curvature: std::array::from_fn(|k| to_rows(data.basis_operator(pairs[k].0, pairs[k].1))),
        ric: data.ric,
        ric_operator: to_rows(&data.ric_op),
        scalar: data.scalar,
    };

    let classification = match classify_metric_with(alg, &g, tol, orientation.restriction()) {
        Ok(c) => {
            warnings.extend(c.warnings.iter().cloned());
            Some(c)
        }
        Err(e) => {
            warnings.push(format!("classification failed: {e}"));
            None
        }
    };

    let structure = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let v = alg.structure(i, j);
            [v[0], v[1], v[2]]
        })
    });
    let mut doc = ReportDocument {
        input: InputEcho {
            group,
            structure,
            metric: *g.form(),
            family: input.family.clone(),
            tol,
            orientation,
        },
        milnor,
        curvature,
        properties,
        classification,
        warnings,
        timing_ms: None,
    };
    // residuals of degenerate fits can be non-finite; JSON has no encoding for them
    let d = &mut doc.properties.defects;
    for x in [
        &mut d.curvature,
        &mut d.constant_curvature,
        &mut d.einstein,
        &mut d.nabla_k,
        &mut d.semi_symmetry,
        &mut d.soliton,
        &mut d.ric_squared,
    ] {
        *x = finite_or_max(*x);
    }
    if timing {
        doc.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(doc)
}
