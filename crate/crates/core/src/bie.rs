//! Nyström discretization of the density equations
//! `μ(p) - λ ∫_Γ K(s → p) μ(s) dS = f(p)`, `K = B_ν[q]`, with collocation at the
//! quadrature nodes.
//!
//! The weakly singular diagonal is handled by subtracting the density value at
//! the collocation point and adding it back times the exact unit-density flux
//! on `Γ`: `-1/2` for `Q1` and `i(p) - 1/2` for `Q2`. So row `i` reads
//!
//! ```text
//! A[i][j] = -λ w_j K_ij                (j ≠ i)
//! A[i][i] = 1 - λ (C_i - Σ_{j≠i} w_j K_ij)
//! ```
//!
//! and `A·1 = 1 - λ C` holds exactly.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{PlanarRegion, QuadratureGrid};
use crate::kernels::{KernelKind, Kernels};
use crate::par;
use crate::potentials::{plane_flux_exact, DensityVector};

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: alloc::vec![0.0; n * n] }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: data.len() });
        }
        Ok(DenseMatrix { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let mut cols = alloc::vec![0.0; self.n];
        for i in 0..self.n {
            for (c, a) in cols.iter_mut().zip(self.row(i)) {
                *c += a.abs();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

/// LU factors with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

/// Factor `a`; fails with an infinite condition estimate on an exactly zero pivot.
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    let n = a.n;
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut p, mut best) = (k, 0.0);
        for i in k..n {
            let v = lu[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return Err(Error::SingularSystem { condition: f64::INFINITY });
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let (top, bottom) = lu.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n..];
        let pivot = pivot_row[k];
        par::for_each_row(bottom, n, |_, row| {
            let l = row[k] / pivot;
            row[k] = l;
            if l != 0.0 {
                for j in k + 1..n {
                    row[j] -= l * pivot_row[j];
                }
            }
        });
    }
    Ok(LuFactors { n, lu, perm })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: f64 = row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// Solve `Aᵀ x = b`.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        // Uᵀ y = b
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.lu[k * n + i] * y[k];
            }
            y[i] = s / self.lu[i * n + i];
        }
        // Lᵀ z = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.lu[k * n + i] * y[k];
            }
            y[i] = s;
        }
        let mut x = alloc::vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }
}

/// Estimate of `‖A⁻¹‖₁` (Hager's method with Higham's extra test vector).
pub fn inverse_norm1_estimate(lu: &LuFactors) -> f64 {
    let n = lu.n;
    if n == 0 {
        return 0.0;
    }
    let mut x = alloc::vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = lu.solve(&x);
        est = y.iter().map(|v| v.abs()).sum::<f64>();
        let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = lu.solve_transpose(&xi);
        let (j, zmax) = z.iter().enumerate().fold((0, 0.0), |b, (i, v)| if v.abs() > b.1 { (i, v.abs()) } else { b });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zmax <= ztx || j == last_j {
            break;
        }
        last_j = j;
        x = alloc::vec![0.0; n];
        x[j] = 1.0;
    }
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let y = lu.solve(&alt);
    let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    est.max(alt_est)
}

/// Condition numbers above this are reported as a singular system.
pub const MAX_CONDITION: f64 = 1e13;

/// Discretized operator `μ ↦ μ - λ ∫ K μ` on a surface grid.
#[derive(Clone, Debug)]
pub struct NystromSystem {
    kind: KernelKind,
    lambda: f64,
    matrix: DenseMatrix,
    /// Exact unit-density flux on `Γ` at each node.
    closure: Vec<f64>,
    /// `Σ_{j≠i} w_j K_ij`.
    off_diagonal_sums: Vec<f64>,
}

/// Assemble the Nyström matrix. `region` is the planar part `X`, needed for
/// the `Q2` diagonal closure.
pub fn assemble(
    k: &Kernels,
    kind: KernelKind,
    grid: &QuadratureGrid,
    region: &PlanarRegion,
    lambda: f64,
) -> Result<NystromSystem> {
    let n = grid.len();
    let nodes = grid.nodes();
    let sp = k.params();
    let rows = par::map_indices(n, |i| -> Result<(Vec<f64>, f64, f64)> {
        let target = &nodes[i].point;
        let mut row = alloc::vec![0.0; n];
        let mut off = 0.0;
        for (j, src) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            let kij = k.conormal(kind, &src.point, src.normal, target).map_err(|e| match e {
                Error::Singularity(_) => Error::CoincidentNodes(j, i),
                other => other,
            })?;
            let wk = src.weight * kij;
            off += wk;
            row[j] = -lambda * wk;
        }
        let closure = match kind {
            KernelKind::Q1 => -0.5,
            KernelKind::Q2 => plane_flux_exact(region, target, sp) - 0.5,
        };
        row[i] = 1.0 - lambda * (closure - off);
        Ok((row, closure, off))
    });
    let mut data = Vec::with_capacity(n * n);
    let mut closure = Vec::with_capacity(n);
    let mut off_diagonal_sums = Vec::with_capacity(n);
    for r in rows {
        let (row, c, o) = r?;
        data.extend_from_slice(&row);
        closure.push(c);
        off_diagonal_sums.push(o);
    }
    Ok(NystromSystem { kind, lambda, matrix: DenseMatrix { n, data }, closure, off_diagonal_sums })
}

impl NystromSystem {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }
    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    /// Row sums of the discretized integral operator `∫ K ·`, recovered from
    /// the assembled matrix as `(1 - Σ_j A_ij)/λ`.
    pub fn operator_row_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| (1.0 - self.matrix.row(i).iter().sum::<f64>()) / self.lambda).collect()
    }

    /// `Σ_{j≠i} w_j K_ij`, the raw quadrature of the unit-density flux at node `i`.
    pub fn off_diagonal_sums(&self) -> &[f64] {
        &self.off_diagonal_sums
    }

    /// The exact unit-density flux used as diagonal closure.
    pub fn closure_values(&self) -> &[f64] {
        &self.closure
    }

    pub fn is_eigenvalue_case(&self) -> bool {
        self.kind == KernelKind::Q1 && (self.lambda + 2.0).abs() < 1e-12
    }

    pub fn factorize(&self) -> Result<FactorizedSystem> {
        if self.is_eigenvalue_case() {
            return Err(Error::EigenvalueCase);
        }
        let lu = lu_factor(&self.matrix)?;
        let condition = self.matrix.norm1() * inverse_norm1_estimate(&lu);
        if !(condition < MAX_CONDITION) {
            return Err(Error::SingularSystem { condition });
        }
        Ok(FactorizedSystem { matrix: self.matrix.clone(), lu, condition })
    }

    /// 1-norm condition estimate (factorizes the matrix).
    pub fn condition_estimate(&self) -> Result<f64> {
        let lu = lu_factor(&self.matrix)?;
        Ok(self.matrix.norm1() * inverse_norm1_estimate(&lu))
    }
}

/// A factorized Nyström system, reusable for many right-hand sides.
#[derive(Clone, Debug)]
pub struct FactorizedSystem {
    matrix: DenseMatrix,
    lu: LuFactors,
    condition: f64,
}

impl FactorizedSystem {
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Direct solve plus one step of iterative refinement.
    pub fn solve(&self, rhs: &DensityVector) -> Result<DensityVector> {
        let n = self.matrix.n;
        if rhs.len() != n {
            return Err(Error::Dimension { expected: n, got: rhs.len() });
        }
        let b = rhs.values();
        let mut x = self.lu.solve(b);
        let r: Vec<f64> = self.matrix.matvec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
        let dx = self.lu.solve(&r);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        let res = self.matrix.matvec(&x).iter().zip(b).fold(0.0, |m: f64, (ax, bi)| m.max((ax - bi).abs()));
        let bmax = rhs.max_abs();
        if res > 1e-10 * bmax {
            log::warn!("density solve residual {res:e} exceeds 1e-10 * |rhs| = {:e}", 1e-10 * bmax);
        }
        Ok(DensityVector::from_raw(x))
    }
}

/// Solve `A μ = rhs` for a freshly factorized system.
pub fn solve_density(system: &NystromSystem, rhs: &DensityVector) -> Result<DensityVector> {
    system.factorize()?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = DenseMatrix::from_rows(3, alloc::vec![2.0, 1.0, 1.0, 4.0, -6.0, 0.0, -2.0, 7.0, 2.0]).unwrap();
        let lu = lu_factor(&a).unwrap();
        let x = lu.solve(&[5.0, -2.0, 9.0]);
        for (got, want) in x.iter().zip([1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let xt = lu.solve_transpose(&[1.0, 2.0, 3.0]);
        let at = DenseMatrix::from_rows(3, alloc::vec![2.0, 4.0, -2.0, 1.0, -6.0, 7.0, 1.0, 0.0, 2.0]).unwrap();
        let back = at.matvec(&xt);
        for (got, want) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_is_detected() {
        let a = DenseMatrix::from_rows(2, alloc::vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(lu_factor(&a), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn condition_estimate_of_diagonal_matrix_is_exact() {
        let mut a = DenseMatrix::zeros(4);
        for (i, d) in [1.0, 10.0, 0.1, 5.0].iter().enumerate() {
            a.set(i, i, *d);
        }
        let lu = lu_factor(&a).unwrap();
        let k = a.norm1() * inverse_norm1_estimate(&lu);
        assert!((k - 100.0).abs() < 1e-10);
    }
}
