//! Dense exact linear algebra on tensor-product spaces.
//!
//! Basis convention: the basis index of a tensor product is the mixed-radix
//! number of the factor indices with the FIRST factor most significant. Every
//! place that maps between multi-indices and flat indices goes through
//! [`TensorShape`]. Slots are 0-based.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorShape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::shape("tensor factor of dimension 0"));
        }
        let mut strides = vec![1usize; dims.len()];
        for s in (0..dims.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        Ok(TensorShape { dims, strides })
    }

    /// `count` copies of a `dim`-dimensional factor.
    pub fn uniform(dim: usize, count: usize) -> Self {
        // dim > 0 is checked by every caller that builds spaces from N >= 2
        Self::new(vec![dim.max(1); count]).expect("nonzero dims")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_slots(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn stride(&self, slot: usize) -> usize {
        self.strides[slot]
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (s, &st) in self.strides.iter().enumerate() {
            out[s] = flat / st;
            flat %= st;
        }
        out
    }

    pub fn digit(&self, flat: usize, slot: usize) -> usize {
        (flat / self.strides[slot]) % self.dims[slot]
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.dims.len() {
            return Err(Error::shape(format!("slot {slot} out of range for {} factors", self.dims.len())));
        }
        Ok(())
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &TensorShape) -> TensorShape {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        TensorShape::new(dims).expect("nonzero dims")
    }
}

/// Square matrix of exact scalars, row-major, rows are output indices.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Scalar>,
}

impl std::fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseOperator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseOperator {
    pub fn zero(dim: usize) -> Self {
        DenseOperator { dim, entries: vec![Scalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Scalar::one();
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::shape(format!("{} entries for a {dim}x{dim} operator", entries.len())));
        }
        Ok(DenseOperator { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        DenseOperator { dim, entries }
    }

    /// Operator whose `c`-th column is `columns[c]`.
    pub fn from_columns(columns: &[KetVector]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zero(dim);
        for (c, col) in columns.iter().enumerate() {
            if col.dim() != dim {
                return Err(Error::shape("column length differs from column count"));
            }
            for (r, x) in col.entries().iter().enumerate() {
                m.entries[r * dim + c] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn column(&self, col: usize) -> KetVector {
        KetVector::new((0..self.dim).map(|r| self.get(r, col).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    fn check_same(&self, other: &DenseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::shape(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// `self · other`. Zero entries of `self` are skipped, which makes
    /// products with embedded few-slot operators cheap.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same(other)?;
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = &self.entries[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[l * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += &(a * b);
                    }
                }
            }
        }
        Ok(DenseOperator { dim: n, entries: out })
    }

    pub fn apply(&self, v: &KetVector) -> Result<KetVector> {
        if v.dim() != self.dim {
            return Err(Error::shape(format!("operator {} on vector {}", self.dim, v.dim())));
        }
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for (j, x) in v.entries().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.entries[i * n + j];
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        Ok(KetVector::new(out))
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(DenseOperator { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(DenseOperator { dim: self.dim, entries })
    }

    pub fn scalar_mul(&self, c: &Scalar) -> DenseOperator {
        DenseOperator { dim: self.dim, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> DenseOperator {
        Self::from_fn(self.dim, |r, c| self.get(c, r).clone())
    }

    /// Exact Gauss–Jordan inverse. A singular matrix reports `DivisionByZero`.
    pub fn inverse(&self) -> Result<DenseOperator> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::DivisionByZero)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].inv()?;
            for j in 0..n {
                a[col * n + j] *= &p;
                inv[col * n + j] *= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    if !a[col * n + j].is_zero() {
                        let d = &f * &a[col * n + j];
                        a[r * n + j] -= &d;
                    }
                    if !inv[col * n + j].is_zero() {
                        let d = &f * &inv[col * n + j];
                        inv[r * n + j] -= &d;
                    }
                }
            }
        }
        Ok(DenseOperator { dim: n, entries: inv })
    }

    /// First entry (row-major) where the two operators differ.
    pub fn first_mismatch(&self, other: &DenseOperator) -> Option<(usize, Scalar, Scalar)> {
        if self.dim != other.dim {
            return Some((usize::MAX, Scalar::zero(), Scalar::zero()));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|i| (i, self.entries[i].clone(), other.entries[i].clone()))
    }
}

/// `e_{ij}` in `End(C^N)`, with 1-based `i, j`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> Result<DenseOperator> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange(format!("e_({i},{j}) with N = {n}")));
    }
    let mut m = DenseOperator::zero(n);
    m.set(i - 1, j - 1, Scalar::one());
    Ok(m)
}

/// Kronecker product, first operator most significant.
pub fn kron(ops: &[DenseOperator]) -> DenseOperator {
    let mut acc = DenseOperator::identity(1);
    for op in ops {
        let (da, db) = (acc.dim, op.dim);
        let d = da * db;
        let mut out = vec![Scalar::zero(); d * d];
        for i in 0..da {
            for j in 0..da {
                let a = acc.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        let b = op.get(k, l);
                        if !b.is_zero() {
                            out[(i * db + k) * d + (j * db + l)] = a * b;
                        }
                    }
                }
            }
        }
        acc = DenseOperator { dim: d, entries: out };
    }
    acc
}

/// `op` acting on `slot` of `shape`, identity elsewhere.
pub fn embed(op: &DenseOperator, slot: usize, shape: &TensorShape) -> Result<DenseOperator> {
    shape.check_slot(slot)?;
    if op.dim() != shape.dims()[slot] {
        return Err(Error::shape(format!("operator of dim {} on slot of dim {}", op.dim(), shape.dims()[slot])));
    }
    let gate = Gate::single(op, slot, shape)?;
    gate.as_dense(shape)
}

/// Two-slot operator `op` (on `C^{d_a} ⊗ C^{d_b}`, first factor to `slot_a`).
pub fn embed_pair(op: &DenseOperator, slot_a: usize, slot_b: usize, shape: &TensorShape) -> Result<DenseOperator> {
    Gate::pair(op, slot_a, slot_b, shape)?.as_dense(shape)
}

/// Operator exchanging tensor slots `a` and `b`.
pub fn permutation_op(shape: &TensorShape, a: usize, b: usize) -> Result<DenseOperator> {
    shape.check_slot(a)?;
    shape.check_slot(b)?;
    if shape.dims()[a] != shape.dims()[b] {
        return Err(Error::shape(format!("cannot swap slots {a} and {b} of unequal dimension")));
    }
    let d = shape.total_dim();
    let mut m = DenseOperator::zero(d);
    for col in 0..d {
        let mut idx = shape.multi_index(col);
        idx.swap(a, b);
        m.set(shape.flat_index(&idx), col, Scalar::one());
    }
    Ok(m)
}

/// Swap of two `n`-dimensional factors, `P = Σ e_ij ⊗ e_ji`.
pub fn swap_op(n: usize) -> DenseOperator {
    permutation_op(&TensorShape::uniform(n, 2), 0, 1).expect("equal dims")
}

/// Trace over `traced` slots. Returns the operator on the remaining slots
/// (in their original order) together with their shape; tracing everything
/// yields a 1x1 operator.
pub fn partial_trace(
    op: &DenseOperator,
    shape: &TensorShape,
    traced: &[usize],
) -> Result<(DenseOperator, TensorShape)> {
    if op.dim() != shape.total_dim() {
        return Err(Error::shape("operator dimension differs from shape"));
    }
    for &s in traced {
        shape.check_slot(s)?;
    }
    let kept: Vec<usize> = (0..shape.num_slots()).filter(|s| !traced.contains(s)).collect();
    let kept_shape = TensorShape::new(kept.iter().map(|&s| shape.dims()[s]).collect())?;
    let traced_shape = TensorShape::new(traced.iter().map(|&s| shape.dims()[s]).collect())?;
    let dk = kept_shape.total_dim();
    let mut out = DenseOperator::zero(dk);
    let mut full = vec![0usize; shape.num_slots()];
    let compose_index = |full: &mut Vec<usize>, kept_flat: usize, traced_flat: usize| {
        for (k, &s) in kept.iter().enumerate() {
            full[s] = kept_shape.digit(kept_flat, k);
        }
        for (k, &s) in traced.iter().enumerate() {
            full[s] = traced_shape.digit(traced_flat, k);
        }
        shape.flat_index(full)
    };
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = Scalar::zero();
            for t in 0..traced_shape.total_dim() {
                let row = compose_index(&mut full, r, t);
                let col = compose_index(&mut full, c, t);
                acc += op.get(row, col);
            }
            out.set(r, c, acc);
        }
    }
    Ok((out, kept_shape))
}

#[derive(Clone, PartialEq, Eq)]
pub struct KetVector {
    entries: Vec<Scalar>,
}

impl std::fmt::Debug for KetVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.entries.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| format!("{i}: {x}")).collect();
        write!(f, "Ket[{}; {}]", self.entries.len(), parts.join(", "))
    }
}

impl KetVector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        KetVector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        KetVector { entries: vec![Scalar::zero(); dim] }
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.entries[index] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> KetVector {
        KetVector { entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &KetVector) -> Result<KetVector> {
        if self.dim() != other.dim() {
            return Err(Error::shape(format!("vector {} + {}", self.dim(), other.dim())));
        }
        Ok(KetVector { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn add_scaled(&mut self, other: &KetVector, c: &Scalar) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::shape(format!("vector {} + {}", self.dim(), other.dim())));
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
        Ok(())
    }

    /// `self ⊗ other`, first factor most significant.
    pub fn kron(&self, other: &KetVector) -> KetVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        KetVector { entries: out }
    }

    /// If `self = c · other` for a scalar `c`, return `c`.
    pub fn ratio_to(&self, other: &KetVector) -> Option<Scalar> {
        if self.dim() != other.dim() {
            return None;
        }
        let pivot = other.entries.iter().position(|x| !x.is_zero())?;
        let c = self.entries[pivot].checked_div(&other.entries[pivot]).ok()?;
        (*self == other.scale(&c)).then_some(c)
    }

    pub fn first_mismatch(&self, other: &KetVector) -> Option<(usize, Scalar, Scalar)> {
        if self.dim() != other.dim() {
            return Some((usize::MAX, Scalar::zero(), Scalar::zero()));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|i| (i, self.entries[i].clone(), other.entries[i].clone()))
    }
}

/// A one- or two-slot operator prepared for repeated application to vectors
/// of a fixed [`TensorShape`]. Only the nonzero entries of each local column
/// are kept, so applying an R-matrix to a vector costs `O(nnz · dim)`.
#[derive(Debug, Clone)]
pub struct Gate {
    slots: Vec<usize>,
    local_dims: Vec<usize>,
    /// For every local input index: the nonzero (local output index, value) pairs.
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl Gate {
    pub fn single(op: &DenseOperator, slot: usize, shape: &TensorShape) -> Result<Self> {
        shape.check_slot(slot)?;
        if op.dim() != shape.dims()[slot] {
            return Err(Error::shape("single-slot gate dimension"));
        }
        Ok(Self::build(op, vec![slot], vec![shape.dims()[slot]]))
    }

    pub fn pair(op: &DenseOperator, slot_a: usize, slot_b: usize, shape: &TensorShape) -> Result<Self> {
        shape.check_slot(slot_a)?;
        shape.check_slot(slot_b)?;
        if slot_a == slot_b {
            return Err(Error::shape("two-slot gate on a single slot"));
        }
        let (da, db) = (shape.dims()[slot_a], shape.dims()[slot_b]);
        if op.dim() != da * db {
            return Err(Error::shape(format!("gate of dim {} on slots {da}x{db}", op.dim())));
        }
        Ok(Self::build(op, vec![slot_a, slot_b], vec![da, db]))
    }

    fn build(op: &DenseOperator, slots: Vec<usize>, local_dims: Vec<usize>) -> Self {
        let d = op.dim();
        let columns = (0..d)
            .map(|c| (0..d).filter(|&r| !op.get(r, c).is_zero()).map(|r| (r, op.get(r, c).clone())).collect())
            .collect();
        Gate { slots, local_dims, columns }
    }

    fn local_index(&self, shape: &TensorShape, flat: usize) -> usize {
        self.slots.iter().zip(&self.local_dims).fold(0, |acc, (&s, &d)| acc * d + shape.digit(flat, s))
    }

    fn offset(&self, shape: &TensorShape, local: usize) -> usize {
        let mut rem = local;
        let mut off = 0;
        for (k, &s) in self.slots.iter().enumerate().rev() {
            let d = self.local_dims[k];
            off += (rem % d) * shape.stride(s);
            rem /= d;
        }
        off
    }

    pub fn apply(&self, shape: &TensorShape, v: &KetVector) -> Result<KetVector> {
        if v.dim() != shape.total_dim() {
            return Err(Error::shape("gate applied to vector of wrong dimension"));
        }
        let mut out = vec![Scalar::zero(); v.dim()];
        for (x, c) in v.entries().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let local_in = self.local_index(shape, x);
            let base = x - self.offset(shape, local_in);
            for (local_out, a) in &self.columns[local_in] {
                out[base + self.offset(shape, *local_out)] += &(a * c);
            }
        }
        Ok(KetVector::new(out))
    }

    pub fn as_dense(&self, shape: &TensorShape) -> Result<DenseOperator> {
        let d = shape.total_dim();
        let cols: Result<Vec<KetVector>> = (0..d).map(|c| self.apply(shape, &KetVector::basis(d, c))).collect();
        DenseOperator::from_columns(&cols?)
    }
}

/// Apply a sequence of gates, rightmost (last) first, i.e. the product
/// `gates[0] · gates[1] · … · gates[n-1]` acting on `v`.
pub fn apply_product(gates: &[Gate], shape: &TensorShape, v: &KetVector) -> Result<KetVector> {
    let mut acc = v.clone();
    for g in gates.iter().rev() {
        acc = g.apply(shape, &acc)?;
    }
    Ok(acc)
}
