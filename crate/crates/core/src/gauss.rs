//! Gauss coordinates of an operator-valued L-matrix,
//! `L = (1 + Σ F_ij e_ij) · (Σ K_i e_ii) · (1 + Σ E_ji e_ji)`,
//! and the zero mode `F_i[0]` of the lowering current.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evaluation::{zero_mode_l_minus, AuxMatrix, ModuleShape};
use crate::tensor::DenseOperator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussData {
    n: usize,
    f: BTreeMap<(usize, usize), DenseOperator>,
    k: Vec<DenseOperator>,
    e: BTreeMap<(usize, usize), DenseOperator>,
}

impl GaussData {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// `F_ij`, `i < j`, 1-based.
    pub fn f(&self, i: usize, j: usize) -> Result<&DenseOperator> {
        self.f.get(&(i, j)).ok_or_else(|| Error::IndexOutOfRange(format!("F_({i},{j}) with N = {}", self.n)))
    }

    /// `K_i`, 1-based.
    pub fn k(&self, i: usize) -> Result<&DenseOperator> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(format!("K_{i} with N = {}", self.n)));
        }
        Ok(&self.k[i - 1])
    }

    /// `E_ji`, `i < j`, 1-based.
    pub fn e(&self, j: usize, i: usize) -> Result<&DenseOperator> {
        self.e.get(&(j, i)).ok_or_else(|| Error::IndexOutOfRange(format!("E_({j},{i}) with N = {}", self.n)))
    }

    /// Multiply the three triangular factors back together.
    pub fn reconstruct(&self) -> Result<AuxMatrix> {
        let n = self.n;
        let dim = self.k[0].dim();
        let mut entries = Vec::with_capacity(n * n);
        for a in 1..=n {
            for b in 1..=n {
                let mut acc = DenseOperator::zero(dim);
                for c in a.max(b)..=n {
                    let mut term = self.k[c - 1].clone();
                    if c > b {
                        term = term.compose(&self.e[&(c, b)])?;
                    }
                    if c > a {
                        term = self.f[&(a, c)].compose(&term)?;
                    }
                    acc = acc.add(&term)?;
                }
                entries.push(acc);
            }
        }
        AuxMatrix::new(n, entries)
    }
}

/// Bottom-right corner elimination. Operator order is kept as written since
/// the entries do not commute.
pub fn gauss(l: &AuxMatrix) -> Result<GaussData> {
    let n = l.rank();
    let mut work: Vec<DenseOperator> = l.entries().to_vec();
    let at = |a: usize, b: usize| (a - 1) * n + (b - 1);
    let mut f = BTreeMap::new();
    let mut e = BTreeMap::new();
    let mut k = vec![DenseOperator::zero(l.module_dim()); n];
    for c in (1..=n).rev() {
        let kc = work[at(c, c)].clone();
        let kinv = kc.inverse().map_err(|_| Error::SingularCorner(c))?;
        for a in 1..c {
            f.insert((a, c), work[at(a, c)].compose(&kinv)?);
            e.insert((c, a), kinv.compose(&work[at(c, a)])?);
        }
        // F_ac K_c E_cb = F_ac L_cb
        for a in 1..c {
            for b in 1..c {
                let d = f[&(a, c)].compose(&work[at(c, b)])?;
                work[at(a, b)] = work[at(a, b)].sub(&d)?;
            }
        }
        k[c - 1] = kc;
    }
    Ok(GaussData { n, f, k, e })
}

/// `F⁺_ij` of `L`.
pub fn f_plus(l: &AuxMatrix, i: usize, j: usize) -> Result<DenseOperator> {
    if !(1 <= i && i < j && j <= l.rank()) {
        return Err(Error::IndexOutOfRange(format!("F_({i},{j}) with N = {}", l.rank())));
    }
    Ok(gauss(l)?.f(i, j)?.clone())
}

/// `F_i[0] = -L⁻_{i,i+1}(0) · L⁻_{i+1,i+1}(0)^{-1}`.
pub fn screening_zero_mode(module: &ModuleShape, i: usize) -> Result<DenseOperator> {
    if i == 0 || i >= module.rank() {
        return Err(Error::IndexOutOfRange(format!("F_{i}[0] with N = {}", module.rank())));
    }
    let z = zero_mode_l_minus(module)?;
    let kinv = z.get(i + 1, i + 1).inverse().map_err(|_| Error::SingularCorner(i + 1))?;
    Ok(z.get(i, i + 1).compose(&kinv)?.scalar_mul(&-crate::Scalar::one()))
}
