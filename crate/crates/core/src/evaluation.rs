//! Tensor products of evaluation vector representations `V(z_1) ⊗ … ⊗ V(z_n)`.
//!
//! On a single factor `L^±(u)` acts as `R^±(u, z)` with the auxiliary space as
//! the first tensor slot. On a tensor product the coproduct
//! `Δ(L_ij) = Σ_k L_kj ⊗ L_ik` (first coproduct slot on the first module
//! factor) becomes the auxiliary-space product
//! `R^{(0,n)}(u, z_n) ⋯ R^{(0,1)}(u, z_1)`.

use crate::error::{Error, Result};
use crate::rmatrix::{r_minus, r_plus};
use crate::scalar::Scalar;
use crate::tensor::{apply_product, DenseOperator, Gate, KetVector, TensorShape};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleShape {
    n: usize,
    q: Scalar,
    z: Vec<Scalar>,
}

impl ModuleShape {
    pub fn new(n: usize, q: Scalar, z: Vec<Scalar>) -> Result<Self> {
        if n < 2 {
            return Err(Error::ConfigInvalid(format!("N must be at least 2, got {n}")));
        }
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::degenerate("q in {0, 1, -1}"));
        }
        let mut sorted = z.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::degenerate("evaluation parameters not distinct"));
        }
        Ok(ModuleShape { n, q, z })
    }

    /// The one-dimensional unit module (no factors).
    pub fn trivial(n: usize, q: Scalar) -> Result<Self> {
        Self::new(n, q, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn z(&self) -> &[Scalar] {
        &self.z
    }

    pub fn num_factors(&self) -> usize {
        self.z.len()
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.z.len() as u32)
    }

    pub fn tensor_shape(&self) -> TensorShape {
        TensorShape::uniform(self.n, self.z.len())
    }

    /// Module built from factors `range` of this one.
    pub fn factors(&self, range: std::ops::Range<usize>) -> ModuleShape {
        ModuleShape { n: self.n, q: self.q.clone(), z: self.z[range].to_vec() }
    }

    /// `(V_1, V_2 ⊗ … ⊗ V_n)`.
    pub fn split_first(&self) -> (ModuleShape, ModuleShape) {
        let k = self.z.len().min(1);
        (self.factors(0..k), self.factors(k..self.z.len()))
    }

    /// `(V_1 ⊗ … ⊗ V_{n-1}, V_n)`.
    pub fn split_last(&self) -> (ModuleShape, ModuleShape) {
        let k = self.z.len().saturating_sub(1);
        (self.factors(0..k), self.factors(k..self.z.len()))
    }
}

/// Which of the two L-operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `N × N` grid of operators on a module: `L(u) = Σ e_ij ⊗ L_ij(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxMatrix {
    n: usize,
    dim: usize,
    entries: Vec<DenseOperator>,
}

impl AuxMatrix {
    pub fn new(n: usize, entries: Vec<DenseOperator>) -> Result<Self> {
        if entries.len() != n * n || entries.is_empty() {
            return Err(Error::shape(format!("{} entries for an {n}x{n} grid", entries.len())));
        }
        let dim = entries[0].dim();
        if entries.iter().any(|e| e.dim() != dim) {
            return Err(Error::shape("grid entries of different dimension"));
        }
        Ok(AuxMatrix { n, dim, entries })
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { DenseOperator::identity(dim) } else { DenseOperator::zero(dim) })
            .collect();
        AuxMatrix { n, dim, entries }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &DenseOperator {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entries(&self) -> &[DenseOperator] {
        &self.entries
    }

    /// Grid product with operator entries kept in written order.
    pub fn compose(&self, other: &AuxMatrix) -> Result<AuxMatrix> {
        if self.n != other.n || self.dim != other.dim {
            return Err(Error::shape("aux matrices of different shapes"));
        }
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                let mut acc = DenseOperator::zero(self.dim);
                for k in 1..=self.n {
                    acc = acc.add(&self.get(i, k).compose(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        AuxMatrix::new(self.n, entries)
    }
}

fn local_r(sign: Sign, n: usize, q: &Scalar, u: &Scalar, z: &Scalar) -> Result<DenseOperator> {
    match sign {
        Sign::Plus => r_plus(n, q, u, z),
        Sign::Minus => r_minus(n, q, u, z),
    }
}

/// Gates of `L^{(aux)}(u)` inside a larger space: `R^±_{aux,m+n-1}(u,z_n) ⋯ R^±_{aux,m}(u,z_1)`
/// where the module occupies slots `module_offset ..`. Leftmost factor first.
pub fn l_gates(
    module: &ModuleShape,
    sign: Sign,
    u: &Scalar,
    aux_slot: usize,
    module_offset: usize,
    space: &TensorShape,
) -> Result<Vec<Gate>> {
    module
        .z
        .iter()
        .enumerate()
        .rev()
        .map(|(a, z)| {
            let r = local_r(sign, module.n, &module.q, u, z)?;
            Gate::pair(&r, aux_slot, module_offset + a, space)
        })
        .collect()
}

fn l_operator(module: &ModuleShape, sign: Sign, u: &Scalar) -> Result<AuxMatrix> {
    let n = module.n;
    let dim = module.dim();
    let space = TensorShape::uniform(n, 1).concat(&module.tensor_shape());
    let gates = l_gates(module, sign, u, 0, 1, &space)?;
    let mut entries = vec![DenseOperator::zero(dim); n * n];
    for j in 0..n {
        for x in 0..dim {
            let out = apply_product(&gates, &space, &KetVector::basis(n * dim, j * dim + x))?;
            for (y, c) in out.entries().iter().enumerate() {
                if !c.is_zero() {
                    let (i, row) = (y / dim, y % dim);
                    entries[i * n + j].set(row, x, c.clone());
                }
            }
        }
    }
    AuxMatrix::new(n, entries)
}

/// `L⁺(u)` on the module.
pub fn l_plus(module: &ModuleShape, u: &Scalar) -> Result<AuxMatrix> {
    l_operator(module, Sign::Plus, u)
}

/// `L⁻(u)` on the module.
pub fn l_minus(module: &ModuleShape, u: &Scalar) -> Result<AuxMatrix> {
    l_operator(module, Sign::Minus, u)
}

/// `L⁻(0)`: for evaluation modules the zero mode is the value at `u = 0`.
pub fn zero_mode_l_minus(module: &ModuleShape) -> Result<AuxMatrix> {
    l_minus(module, &Scalar::zero())
}

/// `v = e_1 ⊗ … ⊗ e_1`, basis index 0.
pub fn singular_vector(module: &ModuleShape) -> KetVector {
    KetVector::basis(module.dim(), 0)
}

/// `Λ_i(u) = ∏_a Λ_i^{(a)}(u)` with `Λ_1 = 1` and
/// `Λ_k = (u - z)/(qu - q⁻¹z)` for `k ≥ 2` on each factor.
pub fn weight_series(module: &ModuleShape, i: usize, u: &Scalar) -> Result<Scalar> {
    if i == 0 || i > module.n {
        return Err(Error::IndexOutOfRange(format!("weight index {i} with N = {}", module.n)));
    }
    if i == 1 {
        return Ok(Scalar::one());
    }
    let qi = module.q.inv()?;
    let mut acc = Scalar::one();
    for z in &module.z {
        let f = (u - z)
            .checked_div(&(&module.q * u - &qi * z))
            .map_err(|_| Error::degenerate("weight series pole at qu = q⁻¹z"))?;
        acc *= &f;
    }
    Ok(acc)
}

/// Both sides of `R(u,v)·(L^a(u)⊗1)·(1⊗L^b(v)) = (1⊗L^b(v))·(L^a(u)⊗1)·R(u,v)`
/// as operators on `C^N ⊗ C^N ⊗ V`.
pub fn rll_sides(
    module: &ModuleShape,
    first: Sign,
    u: &Scalar,
    second: Sign,
    v: &Scalar,
) -> Result<(DenseOperator, DenseOperator)> {
    let n = module.n;
    let space = TensorShape::uniform(n, 2).concat(&module.tensor_shape());
    let r = Gate::pair(&crate::rmatrix::r_matrix(n, &module.q, u, v)?, 0, 1, &space)?;
    let l1 = l_gates(module, first, u, 0, 2, &space)?;
    let l2 = l_gates(module, second, v, 1, 2, &space)?;
    let mut lhs = vec![r.clone()];
    lhs.extend(l1.iter().cloned());
    lhs.extend(l2.iter().cloned());
    let mut rhs = l2;
    rhs.extend(l1);
    rhs.push(r);
    Ok((dense_product(&lhs, &space)?, dense_product(&rhs, &space)?))
}

/// Dense matrix of a gate product.
pub fn dense_product(gates: &[Gate], space: &TensorShape) -> Result<DenseOperator> {
    let d = space.total_dim();
    let cols: Result<Vec<KetVector>> = (0..d).map(|c| apply_product(gates, space, &KetVector::basis(d, c))).collect();
    DenseOperator::from_columns(&cols?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::sample_point;

    fn module(n: usize, seed: u64, factors: usize) -> (ModuleShape, Vec<Scalar>) {
        let p = sample_point(seed, factors, 3).unwrap();
        (ModuleShape::new(n, p.q, p.z).unwrap(), p.t)
    }

    #[test]
    fn single_factor_entries() {
        let (m, t) = module(2, 3, 1);
        let l = l_plus(&m, &t[0]).unwrap();
        let v = singular_vector(&m);
        assert_eq!(l.get(1, 1).apply(&v).unwrap(), v);
        let (q, u, z) = (m.q(), &t[0], &m.z()[0]);
        let qi = q.inv().unwrap();
        let coeff = ((q - &qi) * z).checked_div(&(q * u - &qi * z)).unwrap();
        assert_eq!(l.get(1, 2).apply(&v).unwrap(), KetVector::basis(2, 1).scale(&coeff));
    }

    #[test]
    fn trivial_module_is_identity_grid() {
        let q = Scalar::new(3, 2).unwrap();
        let m = ModuleShape::trivial(3, q).unwrap();
        let u = Scalar::new(5, 7).unwrap();
        assert_eq!(l_plus(&m, &u).unwrap(), AuxMatrix::identity(3, 1));
        assert_eq!(l_minus(&m, &u).unwrap(), AuxMatrix::identity(3, 1));
        assert_eq!(weight_series(&m, 2, &u).unwrap(), Scalar::one());
        assert_eq!(singular_vector(&m), KetVector::basis(1, 0));
    }

    #[test]
    fn l_minus_lower_entry_differs() {
        let (m, t) = module(2, 4, 1);
        let v = singular_vector(&m);
        let lm = l_minus(&m, &t[0]).unwrap();
        let lp = l_plus(&m, &t[0]).unwrap();
        assert!(!lm.get(2, 1).is_zero());
        assert!(lp.get(2, 1).apply(&v).unwrap().is_zero());
    }

    #[test]
    fn zero_mode_structure() {
        let (m, _) = module(2, 6, 1);
        let z0 = zero_mode_l_minus(&m).unwrap();
        assert!(z0.get(2, 1).is_zero());
        for i in 1..=2 {
            assert!(z0.get(i, i).inverse().is_ok());
        }
        let (m3, _) = module(3, 6, 2);
        let z0 = zero_mode_l_minus(&m3).unwrap();
        for i in 1..=3 {
            for j in 1..i {
                assert!(z0.get(i, j).is_zero(), "({i},{j})");
            }
            assert!(z0.get(i, i).inverse().is_ok());
        }
        let lm = l_minus(&m3, &Scalar::zero()).unwrap();
        assert_eq!(z0.get(1, 2), lm.get(1, 2));
    }

    #[test]
    fn triangularity_and_weights() {
        for n in 2..=4 {
            for factors in 0..=3 {
                let (m, t) = module(n, 10 + factors as u64, factors);
                let v = singular_vector(&m);
                let l = l_plus(&m, &t[0]).unwrap();
                for i in 1..=n {
                    for j in 1..i {
                        assert!(l.get(i, j).apply(&v).unwrap().is_zero(), "N={n} ({i},{j})");
                    }
                    let lam = weight_series(&m, i, &t[0]).unwrap();
                    assert_eq!(l.get(i, i).apply(&v).unwrap(), v.scale(&lam));
                }
            }
        }
    }

    #[test]
    fn weight_series_two_factors() {
        let (m, t) = module(3, 21, 2);
        let (q, u) = (m.q().clone(), &t[1]);
        let qi = q.inv().unwrap();
        let f = |z: &Scalar| (u - z).checked_div(&(&q * u - &qi * z)).unwrap();
        let expected = f(&m.z()[0]) * f(&m.z()[1]);
        assert_eq!(weight_series(&m, 2, u).unwrap(), expected);
        assert_eq!(weight_series(&m, 3, u).unwrap(), expected);
        assert_eq!(weight_series(&m, 1, u).unwrap(), Scalar::one());
        assert!(weight_series(&m, 4, u).is_err());
    }

    #[test]
    fn coproduct_is_aux_product() {
        // L on V1 ⊗ V2 equals L^{(2)} · L^{(1)} in the auxiliary index.
        let (m, t) = module(3, 8, 2);
        let l = l_plus(&m, &t[0]).unwrap();
        let (a, b) = m.split_first();
        let la = l_plus(&a, &t[0]).unwrap();
        let lb = l_plus(&b, &t[0]).unwrap();
        let n = 3;
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = DenseOperator::zero(9);
                for k in 1..=n {
                    let term = crate::tensor::kron(&[la.get(k, j).clone(), lb.get(i, k).clone()]);
                    acc = acc.add(&term).unwrap();
                }
                assert_eq!(&acc, l.get(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn coassociativity() {
        let (m, t) = module(2, 12, 3);
        let l = l_plus(&m, &t[0]).unwrap();
        // group (1,2) + 3 and 1 + (2,3): both equal the aux-ordered product, so
        // compare against the explicit three-fold sum.
        let singles: Vec<AuxMatrix> = (0..3).map(|k| l_plus(&m.factors(k..k + 1), &t[0]).unwrap()).collect();
        let n = 2;
        let left = m.factors(0..2);
        let l12 = l_plus(&left, &t[0]).unwrap();
        let right = m.factors(1..3);
        let l23 = l_plus(&right, &t[0]).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let mut g1 = DenseOperator::zero(8);
                let mut g2 = DenseOperator::zero(8);
                for k in 1..=n {
                    g1 = g1.add(&crate::tensor::kron(&[l12.get(k, j).clone(), singles[2].get(i, k).clone()])).unwrap();
                    g2 = g2.add(&crate::tensor::kron(&[singles[0].get(k, j).clone(), l23.get(i, k).clone()])).unwrap();
                }
                assert_eq!(&g1, l.get(i, j));
                assert_eq!(&g2, l.get(i, j));
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let q = Scalar::new(2, 1).unwrap();
        assert!(ModuleShape::new(1, q.clone(), vec![]).is_err());
        assert!(ModuleShape::new(2, Scalar::one(), vec![]).is_err());
        let z = Scalar::new(3, 1).unwrap();
        assert!(ModuleShape::new(2, q, vec![z.clone(), z]).is_err());
    }

    #[test]
    fn rll_relations() {
        for n in 2..=3 {
            for factors in 1..=2 {
                let (m, t) = module(n, 30 + factors as u64, factors);
                let (a, b) = rll_sides(&m, Sign::Plus, &t[0], Sign::Plus, &t[1]).unwrap();
                assert_eq!(a, b, "plus-plus N={n}");
                let (a, b) = rll_sides(&m, Sign::Minus, &t[0], Sign::Minus, &t[1]).unwrap();
                assert_eq!(a, b, "minus-minus N={n}");
                let (a, b) = rll_sides(&m, Sign::Plus, &t[0], Sign::Minus, &t[1]).unwrap();
                assert_eq!(a, b, "plus-minus N={n}");
            }
        }
    }

    #[test]
    fn rll_fails_for_wrong_order() {
        let (m, t) = module(2, 40, 1);
        let (a, _) = rll_sides(&m, Sign::Plus, &t[0], Sign::Plus, &t[1]).unwrap();
        let (_, b) = rll_sides(&m, Sign::Plus, &t[1], Sign::Plus, &t[0]).unwrap();
        assert_ne!(a, b);
    }
}
