//! Exact band-matrix model on `ℓ²(ℕ)`.
//!
//! `t = ρ^{1/2} ℓ + ρ^{-1/2} ℓ*` is never built (it needs square roots);
//! everything goes through `t*t = ℓ² + ℓ*² + (ρ + ρ⁻¹) − ρ⁻¹ p₀`, whose
//! entries are rational. The general model `t = aℓ + bℓ*` gives
//! `t*t = ab(ℓ² + ℓ*²) + (a² + b²) − b² p₀`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{is_positive, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("truncation of size {got} is too small, need at least {need}")]
    TooSmall { got: usize, need: usize },
    #[error("rho must be positive")]
    NonPositiveRho,
    #[error("a and b must not both vanish")]
    DegenerateGenerator,
    #[error("moment of order {order} needs a truncation larger than {bound} (dimension {dim}, bandwidth {bandwidth})")]
    TruncationReached {
        order: usize,
        bound: usize,
        dim: usize,
        bandwidth: usize,
    },
}

/// Square `N × N` matrix with entries only within `bandwidth` of the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandedOperator {
    dim: usize,
    bandwidth: usize,
    /// `rows[i][d]` holds entry `(i, i + d − bandwidth)`.
    rows: Vec<Vec<Rational>>,
}

impl BandedOperator {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        BandedOperator {
            dim,
            bandwidth,
            rows: vec![vec![Rational::zero(); 2 * bandwidth + 1]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        if i >= self.dim || j >= self.dim || i.abs_diff(j) > self.bandwidth {
            return Rational::zero();
        }
        self.rows[i][j + self.bandwidth - i].clone()
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(
            i < self.dim && j < self.dim && i.abs_diff(j) <= self.bandwidth,
            "({i}, {j}) outside band"
        );
        self.rows[i][j + self.bandwidth - i] = value;
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let lo = i.saturating_sub(self.bandwidth);
                let hi = (i + self.bandwidth).min(self.dim - 1);
                let mut acc = Rational::zero();
                for (j, xj) in x.iter().enumerate().take(hi + 1).skip(lo) {
                    if !xj.is_zero() {
                        acc += &self.rows[i][j + self.bandwidth - i] * xj;
                    }
                }
                acc
            })
            .collect()
    }

    /// Restriction to the given basis indices (the matrix `(op[idx_i, idx_j])`).
    pub fn compress(&self, idx: &[usize]) -> Self {
        let bw = (0..idx.len())
            .flat_map(|i| (0..idx.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(idx[i], idx[j]).is_zero())
            .map(|(i, j)| i.abs_diff(j))
            .max()
            .unwrap_or(0);
        let mut out = Self::zeros(idx.len(), bw);
        for i in 0..idx.len() {
            for j in i.saturating_sub(bw)..(i + bw + 1).min(idx.len()) {
                out.set(i, j, self.get(idx[i], idx[j]));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn basis_vector(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[k] = Rational::one();
        v
    }
}

/// Smallest truncation for which `⟨opⁿ δ₀, δ₀⟩` cannot feel the boundary.
pub fn required_dimension(bandwidth: usize, order: usize) -> usize {
    bandwidth * order + 2
}

/// Pentadiagonal `t*t` for `t = aℓ + bℓ*`, truncated to indices `0..n`.
pub fn build_general_tstar_t(a: &Rational, b: &Rational, n: usize) -> Result<BandedOperator, FockError> {
    if a.is_zero() && b.is_zero() {
        return Err(FockError::DegenerateGenerator);
    }
    if n < 3 {
        return Err(FockError::TooSmall { got: n, need: 3 });
    }
    let mut op = BandedOperator::zeros(n, 2);
    let (a2, b2, ab) = (a * a, b * b, a * b);
    for k in 0..n {
        op.set(k, k, if k == 0 { a2.clone() } else { &a2 + &b2 });
        if k + 2 < n {
            op.set(k, k + 2, ab.clone());
            op.set(k + 2, k, ab.clone());
        }
    }
    Ok(op)
}

/// `t*t = ℓ² + ℓ*² + (ρ + ρ⁻¹) − ρ⁻¹ p₀`, truncated to indices `0..n`.
pub fn build_tstar_t(rho: &Rational, n: usize) -> Result<BandedOperator, FockError> {
    if !is_positive(rho) {
        return Err(FockError::NonPositiveRho);
    }
    if n < 3 {
        return Err(FockError::TooSmall { got: n, need: 3 });
    }
    let mut op = BandedOperator::zeros(n, 2);
    let diag = rho + rho.recip();
    for k in 0..n {
        op.set(k, k, if k == 0 { rho.clone() } else { diag.clone() });
        if k + 2 < n {
            op.set(k, k + 2, Rational::one());
            op.set(k + 2, k, Rational::one());
        }
    }
    Ok(op)
}

fn tridiagonal(n: usize, corner: Rational, diag: Rational) -> BandedOperator {
    let mut op = BandedOperator::zeros(n, 1);
    for k in 0..n {
        op.set(k, k, if k == 0 { corner.clone() } else { diag.clone() });
        if k + 1 < n {
            op.set(k, k + 1, Rational::one());
            op.set(k + 1, k, Rational::one());
        }
    }
    op
}

/// `t*t` on `span{δ₀, δ₂, δ₄, ...}`: `ℓ + ℓ* + (ρ + ρ⁻¹) − ρ⁻¹ p₀`.
pub fn build_even_restriction(rho: &Rational, n: usize) -> Result<BandedOperator, FockError> {
    if !is_positive(rho) {
        return Err(FockError::NonPositiveRho);
    }
    if n < 2 {
        return Err(FockError::TooSmall { got: n, need: 2 });
    }
    Ok(tridiagonal(n, rho.clone(), rho + rho.recip()))
}

/// `t*t` on `span{δ₁, δ₃, ...}`: `ℓ + ℓ* + (ρ + ρ⁻¹)`.
pub fn build_odd_restriction(rho: &Rational, n: usize) -> Result<BandedOperator, FockError> {
    if !is_positive(rho) {
        return Err(FockError::NonPositiveRho);
    }
    if n < 2 {
        return Err(FockError::TooSmall { got: n, need: 2 });
    }
    let d = rho + rho.recip();
    Ok(tridiagonal(n, d.clone(), d))
}

/// Exact `⟨opⁿ δ₀, δ₀⟩`. Errors unless `dim > n · bandwidth`, which makes the
/// value that of the untruncated operator.
pub fn vacuum_moment(op: &BandedOperator, n: usize) -> Result<Rational, FockError> {
    let bound = n * op.bandwidth;
    if op.dim <= bound {
        return Err(FockError::TruncationReached {
            order: n,
            bound,
            dim: op.dim,
            bandwidth: op.bandwidth,
        });
    }
    let mut x = op.basis_vector(0);
    for _ in 0..n {
        x = op.apply(&x);
    }
    Ok(x[0].clone())
}

/// `⟨(t*t)ᵏ δ₀, δ₀⟩` for `k = 0..=max_order`, with the truncation sized to the request.
pub fn tstar_t_moments(rho: &Rational, max_order: usize) -> Result<Vec<Rational>, FockError> {
    let op = build_tstar_t(rho, required_dimension(2, max_order).max(3))?;
    (0..=max_order).map(|k| vacuum_moment(&op, k)).collect()
}

/// `⟨(t*t)ⁿ δ₀, δ₀⟩` for `t = aℓ + bℓ*`.
pub fn general_t_moments(a: &Rational, b: &Rational, n: usize) -> Result<Rational, FockError> {
    let op = build_general_tstar_t(a, b, required_dimension(2, n).max(3))?;
    vacuum_moment(&op, n)
}

/// Rank of a dense rational matrix by fraction-exact Gaussian elimination.
pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[r][c..]) {
                *x -= &f * y;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Columns `δ₀, op δ₀, ..., op^{N−1} δ₀`, as rows.
pub fn krylov_matrix(op: &BandedOperator) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(op.dim);
    let mut x = op.basis_vector(0);
    for _ in 0..op.dim {
        let next = op.apply(&x);
        out.push(std::mem::replace(&mut x, next));
    }
    out
}

/// Symmetric positive semidefiniteness by exact `LDLᵀ` with diagonal pivoting.
pub fn is_positive_semidefinite(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a = m.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i] < Rational::zero()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) else {
            // every remaining diagonal entry is zero; PSD forces the block to vanish
            return active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = active.remove(pos);
        let d = a[p][p].clone();
        for &i in &active {
            let f = &a[i][p] / &d;
            for &j in &active {
                let sub = &f * &a[p][j];
                a[i][j] -= sub;
            }
        }
    }
    true
}
