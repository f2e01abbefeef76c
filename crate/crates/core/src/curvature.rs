//! Levi-Civita product from Koszul's formula, curvature operators, Ricci
//! tensor and operator, scalar curvature.

use crate::lie::{LieAlgebra3, MetricForm};
use crate::linalg::{max_abs, Endo3, SymForm3, Vec3};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

fn e(i: usize) -> Vec3 {
    Vec3::ith(i, 1.0)
}

/// `L_{Xᵢ}` as matrices: column `j` of `ops[i]` is `L_{Xᵢ}Xⱼ`.
///
/// The table is solved in double-double arithmetic and `lo` keeps the
/// low-order parts, so curvature can be formed without the cancellation
/// that an ill-conditioned basis would otherwise cause (`K` is quadratic in
/// entries that may be orders of magnitude larger than `K` itself).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeviCivitaTable {
    ops: [Endo3; 3],
    lo: [Endo3; 3],
    metric: MetricForm,
}

impl LeviCivitaTable {
    pub fn operator(&self, u: &Vec3) -> Endo3 {
        self.ops[0] * u[0] + self.ops[1] * u[1] + self.ops[2] * u[2]
    }

    pub fn basis_operator(&self, i: usize) -> &Endo3 {
        &self.ops[i]
    }

    pub fn product(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        self.operator(u) * v
    }

    pub fn metric(&self) -> &MetricForm {
        &self.metric
    }

    /// Largest absolute entry over all `L_{Xᵢ}`, or 1 if the table is zero.
    pub fn scale(&self) -> f64 {
        let m = self.ops.iter().map(max_abs).fold(0.0_f64, f64::max);
        if m > 0.0 {
            m
        } else {
            1.0
        }
    }

    /// Worst `|⟨L_u v, w⟩ + ⟨v, L_u w⟩|` over basis triples.
    pub fn compatibility_defect(&self) -> f64 {
        let g = self.metric.matrix();
        // GL_u must be antisymmetric
        self.ops
            .iter()
            .map(|op| {
                let m = g * op;
                max_abs(&(m + m.transpose()))
            })
            .fold(0.0, f64::max)
    }

    /// Worst `|L_u v − L_v u − [u,v]|` over basis pairs.
    pub fn torsion_defect(&self, alg: &LieAlgebra3) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let t = self.ops[i].column(j) - self.ops[j].column(i) - alg.structure(i, j);
                d = d.max(t.amax());
            }
        }
        d
    }

    fn extended(&self, i: usize) -> Dd3 {
        std::array::from_fn(|r| {
            std::array::from_fn(|c| TwoFloat::new_add(self.ops[i][(r, c)], self.lo[i][(r, c)]))
        })
    }
}

type Dd3 = [[TwoFloat; 3]; 3];

fn dd(m: &Matrix3<f64>) -> Dd3 {
    std::array::from_fn(|r| std::array::from_fn(|c| TwoFloat::from(m[(r, c)])))
}

fn dd_zero() -> Dd3 {
    [[TwoFloat::from(0.0); 3]; 3]
}

fn dd_mul(a: &Dd3, b: &Dd3) -> Dd3 {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c])
    })
}

fn dd_inverse(g: &Dd3) -> Dd3 {
    let cof = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]
    };
    let det = g[0][0] * cof(0, 0) + g[0][1] * cof(0, 1) + g[0][2] * cof(0, 2);
    std::array::from_fn(|r| std::array::from_fn(|c| cof(c, r) / det))
}

fn split(m: &Dd3) -> (Endo3, Endo3) {
    (
        Matrix3::from_fn(|r, c| m[r][c].hi()),
        Matrix3::from_fn(|r, c| m[r][c].lo()),
    )
}

/// Solves `2⟨L_u v, w⟩ = ⟨[u,v],w⟩ + ⟨[w,u],v⟩ + ⟨[w,v],u⟩` on the basis.
pub fn levi_civita(alg: &LieAlgebra3, g: &MetricForm) -> LeviCivitaTable {
    let gm = dd(g.matrix());
    let g_inv = dd_inverse(&gm);
    // ⟨c, e_j⟩ for a structure vector c
    let inner = |c: &Vec3, j: usize| -> TwoFloat {
        (0..3).fold(TwoFloat::from(0.0), |acc, a| acc + gm[a][j] * c[a])
    };
    let mut ops = [Matrix3::zeros(); 3];
    let mut lo = [Matrix3::zeros(); 3];
    for i in 0..3 {
        let mut op = dd_zero();
        for j in 0..3 {
            let cij = alg.structure(i, j);
            let r: [TwoFloat; 3] = std::array::from_fn(|k| {
                inner(&cij, k) + inner(&alg.structure(k, i), j) + inner(&alg.structure(k, j), i)
            });
            for a in 0..3 {
                op[a][j] = (g_inv[a][0] * r[0] + g_inv[a][1] * r[1] + g_inv[a][2] * r[2]) * 0.5;
            }
        }
        (ops[i], lo[i]) = split(&op);
    }
    LeviCivitaTable {
        ops,
        lo,
        metric: *g,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureData {
    /// `k[i][j] = K(Xᵢ,Xⱼ)`, antisymmetric in `(i, j)`.
    k: [[Endo3; 3]; 3],
    pub ric: SymForm3,
    pub ric_op: Endo3,
    pub scalar: f64,
}

impl CurvatureData {
    pub fn basis_operator(&self, i: usize, j: usize) -> &Endo3 {
        &self.k[i][j]
    }

    pub fn operator(&self, u: &Vec3, v: &Vec3) -> Endo3 {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let w = u[i] * v[j];
                if w != 0.0 {
                    m += self.k[i][j] * w;
                }
            }
        }
        m
    }

    /// Largest absolute entry of any `K(Xᵢ,Xⱼ)`.
    pub fn max_entry(&self) -> f64 {
        self.k.iter().flatten().map(max_abs).fold(0.0, f64::max)
    }

    /// Worst `K(u,v)w + K(v,w)u + K(w,u)v` over basis triples.
    pub fn bianchi_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for u in 0..3 {
            for v in 0..3 {
                for w in 0..3 {
                    let s =
                        self.k[u][v].column(w) + self.k[v][w].column(u) + self.k[w][u].column(v);
                    d = d.max(s.amax());
                }
            }
        }
        d
    }

    /// Worst `⟨K(u,v)w, z⟩ − ⟨K(w,z)u, v⟩` over basis quadruples.
    pub fn pair_symmetry_defect(&self, g: &MetricForm) -> f64 {
        let mut d = 0.0_f64;
        for u in 0..3 {
            for v in 0..3 {
                for w in 0..3 {
                    for z in 0..3 {
                        let a = g.inner(&self.k[u][v].column(w).into(), &e(z));
                        let b = g.inner(&self.k[w][z].column(u).into(), &e(v));
                        d = d.max((a - b).abs());
                    }
                }
            }
        }
        d
    }
}

/// `K(u,v) = L_{[u,v]} − [L_u, L_v]`, `ric(u,v) = tr(w ↦ K(u,w)v)`,
/// `Ric = G⁻¹·ric`, `s = tr Ric`.
pub fn curvature(alg: &LieAlgebra3, g: &MetricForm) -> CurvatureData {
    curvature_with(alg, &levi_civita(alg, g))
}

pub fn curvature_with(alg: &LieAlgebra3, lc: &LeviCivitaTable) -> CurvatureData {
    let l: [Dd3; 3] = std::array::from_fn(|i| lc.extended(i));
    let mut kd = [[dd_zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let c = alg.structure(i, j);
            let (ab, ba) = (dd_mul(&l[i], &l[j]), dd_mul(&l[j], &l[i]));
            kd[i][j] = std::array::from_fn(|r| {
                std::array::from_fn(|s| {
                    l[0][r][s] * c[0] + l[1][r][s] * c[1] + l[2][r][s] * c[2]
                        - (ab[r][s] - ba[r][s])
                })
            });
        }
    }
    let ric_d: Dd3 = std::array::from_fn(|a| {
        std::array::from_fn(|b| (0..3).fold(TwoFloat::from(0.0), |acc, w| acc + kd[a][w][w][b]))
    });
    let ric_sym: Dd3 =
        std::array::from_fn(|a| std::array::from_fn(|b| (ric_d[a][b] + ric_d[b][a]) * 0.5));
    let ric_op_d = dd_mul(&dd_inverse(&dd(lc.metric().matrix())), &ric_sym);
    let scalar = (ric_op_d[0][0] + ric_op_d[1][1] + ric_op_d[2][2]).hi();
    let k = kd.map(|row| row.map(|m| split(&m).0));
    CurvatureData {
        k,
        ric: SymForm3::from_lower(&split(&ric_sym).0),
        ric_op: split(&ric_op_d).0,
        scalar,
    }
}

/// Result of [`constant_curvature`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantCurvatureFit {
    pub lambda: f64,
    pub residual: f64,
}

/// Least-squares fit of the sectional curvature `λ` over basis triples.
///
/// `K` here is `L_{[u,v]} − [L_u, L_v]`, the negative of the curvature
/// operator whose constant-curvature form is `λ(⟨v,w⟩u − ⟨u,w⟩v)`, so the
/// fitted identity is `K(u,v)w = λ(⟨u,w⟩v − ⟨v,w⟩u)`. With this sign
/// `ric = 2λ·h`, matching the Einstein constant `2λ`.
pub fn constant_curvature_fit(data: &CurvatureData, g: &MetricForm) -> ConstantCurvatureFit {
    let (mut num, mut den) = (0.0, 0.0);
    let model =
        |u: usize, v: usize, w: usize| e(v) * g.inner(&e(u), &e(w)) - e(u) * g.inner(&e(v), &e(w));
    for u in 0..3 {
        for v in 0..3 {
            for w in 0..3 {
                let m = model(u, v, w);
                let k: Vec3 = data.k[u][v].column(w).into();
                num += m.dot(&k);
                den += m.dot(&m);
            }
        }
    }
    let lambda = if den > 0.0 { num / den } else { 0.0 };
    let mut residual = 0.0_f64;
    for u in 0..3 {
        for v in 0..3 {
            for w in 0..3 {
                let r = data.k[u][v].column(w) - model(u, v, w) * lambda;
                residual = residual.max(r.amax());
            }
        }
    }
    ConstantCurvatureFit { lambda, residual }
}

/// `Some(λ)` when the fit residual is at most `tol·scale`.
pub fn constant_curvature(
    data: &CurvatureData,
    g: &MetricForm,
    tol: f64,
    scale: f64,
) -> Option<f64> {
    let fit = constant_curvature_fit(data, g);
    (fit.residual <= tol * scale).then_some(fit.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;

    fn metric(rows: [[f64; 3]; 3]) -> MetricForm {
        MetricForm::new(SymForm3::from_lower(&from_rows(&rows))).unwrap()
    }

    #[test]
    fn abelian_products_vanish() {
        let g = metric([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, -3.0]]);
        let lc = levi_civita(&LieAlgebra3::abelian(), &g);
        for i in 0..3 {
            assert_eq!(*lc.basis_operator(i), Matrix3::zeros());
        }
    }

    #[test]
    fn heisenberg_products() {
        // direct expansion: 2⟨L_X Y, Z⟩ = ⟨Z, Z⟩ = −1 so L_X Y = ½Z
        let lc = levi_civita(&LieAlgebra3::heisenberg(), &MetricForm::minkowski());
        let p = |i, j| lc.product(&e(i), &e(j));
        assert_eq!(p(0, 1), e(2) * 0.5);
        assert_eq!(p(1, 0), e(2) * -0.5);
        assert_eq!(p(0, 2), e(1) * 0.5);
        assert_eq!(p(2, 0), e(1) * 0.5);
        assert_eq!(lc.torsion_defect(&LieAlgebra3::heisenberg()), 0.0);
        assert_eq!(lc.compatibility_defect(), 0.0);
    }

    #[test]
    fn nil_timelike_ricci() {
        let g = metric([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -2.0]]);
        let d = curvature(&LieAlgebra3::heisenberg(), &g);
        let want = SymForm3::diag(1.0, 1.0, 2.0);
        assert!(max_abs(&(d.ric.matrix() - want.matrix())) < 1e-14);
        assert_abs_diff_eq!(d.scalar, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn nil_null_center_flat() {
        let g = metric([[1.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 0.0]]);
        let d = curvature(&LieAlgebra3::heisenberg(), &g);
        assert!(d.max_entry() < 1e-14);
    }

    #[test]
    fn su2_unit_ricci() {
        // independent check: s = tr(G⁻¹ ric) = 6 + 6 − 2
        let d = curvature(&LieAlgebra3::su2(), &MetricForm::minkowski());
        assert!(max_abs(&(d.ric.matrix() - SymForm3::diag(6.0, 6.0, 2.0).matrix())) < 1e-13);
        assert_abs_diff_eq!(d.scalar, 10.0, epsilon = 1e-13);
    }

    #[test]
    fn constant_curvature_examples() {
        let g = metric([[1.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 0.0]]);
        let d = curvature(&LieAlgebra3::heisenberg(), &g);
        assert_eq!(constant_curvature(&d, &g, DEFAULT_TOL, 1.0), Some(0.0));

        for mu in [0.5, 1.0, 3.0] {
            let g = metric([[-mu, 0.0, 0.0], [0.0, mu, 0.0], [0.0, 0.0, mu]]);
            let d = curvature(&LieAlgebra3::sl2r(), &g);
            let lam = constant_curvature(&d, &g, DEFAULT_TOL, 1.0).unwrap();
            assert_abs_diff_eq!(lam, -1.0 / mu, epsilon = 1e-12);
        }

        let g = metric([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
        let d = curvature(&LieAlgebra3::heisenberg(), &g);
        assert_eq!(constant_curvature(&d, &g, DEFAULT_TOL, 1.0), None);
    }

    #[test]
    fn curvature_identities_on_models() {
        let g = metric([[1.5, 0.2, 0.1], [0.2, 0.8, -0.3], [0.1, -0.3, -1.2]]);
        for grp in crate::lie::GroupId::NON_ABELIAN {
            let alg = LieAlgebra3::model(grp);
            let lc = levi_civita(&alg, &g);
            assert!(lc.torsion_defect(&alg) < 1e-13);
            assert!(lc.compatibility_defect() < 1e-13);
            let d = curvature_with(&alg, &lc);
            assert!(d.bianchi_defect() < 1e-12, "{grp}");
            assert!(d.pair_symmetry_defect(&g) < 1e-12, "{grp}");
        }
    }
}
