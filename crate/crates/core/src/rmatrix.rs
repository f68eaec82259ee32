//! The trigonometric R-matrix of the vector representation and its
//! normalized variants.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{swap_op, DenseOperator, Gate, TensorShape};

fn qinv(q: &Scalar) -> Result<Scalar> {
    q.inv().map_err(|_| Error::degenerate("q = 0"))
}

/// `R(u,v)` on `C^N ⊗ C^N`:
///
/// ```text
/// R(u,v) = (qu - q⁻¹v)/(u - v) Σ e_ii⊗e_ii + Σ_{i≠j} e_ii⊗e_jj
///        + (q - q⁻¹)/(u - v) Σ_{i<j} (v e_ij⊗e_ji + u e_ji⊗e_ij)
/// ```
pub fn r_matrix(n: usize, q: &Scalar, u: &Scalar, v: &Scalar) -> Result<DenseOperator> {
    if n < 2 {
        return Err(Error::ConfigInvalid(format!("R-matrix needs N >= 2, got {n}")));
    }
    let qi = qinv(q)?;
    let diff = u - v;
    let denom = diff.inv().map_err(|_| Error::degenerate("R(u,v) at u = v"))?;
    let diag = (q * u - &qi * v) * &denom;
    let dq = q - &qi;
    let upper = &dq * v * &denom;
    let lower = &dq * u * &denom;

    let mut r = DenseOperator::zero(n * n);
    let at = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        for j in 0..n {
            let value = if i == j { diag.clone() } else { Scalar::one() };
            r.set(at(i, j), at(i, j), value);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            // e_ij ⊗ e_ji sends e_j ⊗ e_i to e_i ⊗ e_j
            r.set(at(i, j), at(j, i), upper.clone());
            // e_ji ⊗ e_ij sends e_i ⊗ e_j to e_j ⊗ e_i
            r.set(at(j, i), at(i, j), lower.clone());
        }
    }
    Ok(r)
}

/// `R⁺(u,v) = (u - v)/(qu - q⁻¹v) · R(u,v)`; fixes `e_i ⊗ e_i`.
pub fn r_plus(n: usize, q: &Scalar, u: &Scalar, v: &Scalar) -> Result<DenseOperator> {
    let r = r_matrix(n, q, u, v)?;
    let qi = qinv(q)?;
    let norm = (u - v).checked_div(&(q * u - &qi * v)).map_err(|_| Error::degenerate("R+(u,v) at qu = q⁻¹v"))?;
    Ok(r.scalar_mul(&norm))
}

/// `R⁻(u,v) = P · R⁺(v,u)⁻¹ · P`, the slot-swapped inverse.
pub fn r_minus(n: usize, q: &Scalar, u: &Scalar, v: &Scalar) -> Result<DenseOperator> {
    let inv = r_plus(n, q, v, u)?.inverse().map_err(|_| Error::degenerate("R+(v,u) is singular"))?;
    let p = swap_op(n);
    p.compose(&inv)?.compose(&p)
}

/// Slot pairs `(j, i)`, 1-based, of the ordered product
/// `𝕽^{(M,…,1)} = ∏_{1≤i<j≤M} R^{(ji)}(u_j, u_i)`, leftmost factor first:
/// `R^{(ji)}` stands left of `R^{(ml)}` iff `j > m`, or `j = m` and `i > l`.
pub fn r_product_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (1..=m).flat_map(|j| (1..j).map(move |i| (j, i))).collect();
    pairs.sort_by(|a, b| b.cmp(a));
    pairs
}

/// Gates of `𝕽^{(M,…,1)}(u_M,…,u_1)` acting on slots `offset .. offset+M`
/// of `shape`, leftmost factor first (see [`crate::tensor::apply_product`]).
pub fn r_product_gates(n: usize, q: &Scalar, u: &[Scalar], shape: &TensorShape, offset: usize) -> Result<Vec<Gate>> {
    r_product_pairs(u.len())
        .into_iter()
        .map(|(j, i)| {
            let r = r_matrix(n, q, &u[j - 1], &u[i - 1])?;
            Gate::pair(&r, offset + j - 1, offset + i - 1, shape)
        })
        .collect()
}

/// `𝕽^{(M,…,1)}(u_M,…,u_1)` as a dense operator on `(C^N)^{⊗M}`.
pub fn ordered_r_product(n: usize, q: &Scalar, u: &[Scalar]) -> Result<DenseOperator> {
    let shape = TensorShape::uniform(n, u.len());
    let mut acc = DenseOperator::identity(shape.total_dim());
    for (j, i) in r_product_pairs(u.len()) {
        let r = r_matrix(n, q, &u[j - 1], &u[i - 1])?;
        let g = Gate::pair(&r, j - 1, i - 1, &shape)?.as_dense(&shape)?;
        acc = acc.compose(&g)?;
    }
    Ok(acc)
}
