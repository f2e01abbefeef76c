//! Shared fixtures for the benchmarks.

use lorentz3::catalog::family_grid;
use lorentz3::{build_metric, FamilyId, FamilyParams, GroupId, LieAlgebra3, MetricForm};

/// The middle grid point of each family, with its model algebra and metric.
pub fn samples() -> Vec<(FamilyParams, LieAlgebra3, MetricForm)> {
    FamilyId::ALL
        .iter()
        .map(|&f| {
            let grid = family_grid(f, 5);
            let p = grid[grid.len() / 2].clone();
            let (group, g) = build_metric(&p).expect("family metric");
            (p, LieAlgebra3::model(group), g)
        })
        .collect()
}

pub fn sample(group: GroupId) -> (FamilyParams, LieAlgebra3, MetricForm) {
    samples()
        .into_iter()
        .find(|(p, _, _)| p.family.group() == group)
        .expect("every model has a family")
}
