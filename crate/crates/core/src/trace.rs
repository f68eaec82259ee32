//! The nested Bethe ansatz side: the monodromy `𝕋`, the trace formula `𝔹`,
//! the partial operators `𝔹_[l,k]` and the modified weight function `𝐰^𝔹`.

use crate::error::{Error, Result};
use crate::evaluation::{dense_product, l_gates, l_plus, singular_vector, ModuleShape, Sign};
use crate::gauss::gauss;
use crate::multiset::{canonical_sort, pullback_tilde, PiMultiset};
use crate::rmatrix::{r_matrix, r_product_gates};
use crate::scalar::Scalar;
use crate::tensor::{apply_product, matrix_unit, partial_trace, DenseOperator, Gate, KetVector, TensorShape};

/// Multiplicities `n_a` of the colours `a = 1..N-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarN {
    counts: Vec<usize>,
}

impl BarN {
    pub fn new(counts: Vec<usize>, n: usize) -> Result<Self> {
        if counts.len() + 1 != n {
            return Err(Error::shape(format!("{} multiplicities for N = {n}", counts.len())));
        }
        Ok(BarN { counts })
    }

    /// `n_a = 1` for `a ≤ k`, zero above.
    pub fn staircase(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange(format!("staircase of length {k} with N = {n}")));
        }
        Ok(BarN { counts: (1..n).map(|a| usize::from(a <= k)).collect() })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `M = Σ n_a`.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Colour of each auxiliary slot: `n_1` ones, then `n_2` twos, …
    pub fn colours(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(a, &c)| std::iter::repeat_n(a + 1, c)).collect()
    }
}

/// Which of the two equal expressions for `𝕋` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `L^{(1)}(u_1)⋯L^{(M)}(u_M) · 𝕽^{(M,…,1)}`
    Left,
    /// `𝕽^{(M,…,1)} · L^{(M)}(u_M)⋯L^{(1)}(u_1)`
    Right,
}

/// `(C^N)^{⊗M} ⊗ V`, auxiliary slots first.
pub fn monodromy_space(module: &ModuleShape, m: usize) -> TensorShape {
    TensorShape::uniform(module.rank(), m).concat(&module.tensor_shape())
}

/// Gates of `𝕋_[M](u)`, leftmost factor first.
pub fn monodromy_gates(module: &ModuleShape, u: &[Scalar], variant: Variant) -> Result<Vec<Gate>> {
    let m = u.len();
    let space = monodromy_space(module, m);
    let r = r_product_gates(module.rank(), module.q(), u, &space, 0)?;
    let ls: Vec<Vec<Gate>> =
        u.iter().enumerate().map(|(k, uk)| l_gates(module, Sign::Plus, uk, k, m, &space)).collect::<Result<_>>()?;
    Ok(match variant {
        Variant::Left => ls.into_iter().flatten().chain(r).collect(),
        Variant::Right => r.into_iter().chain(ls.into_iter().rev().flatten()).collect(),
    })
}

/// `𝕋_[M](u_1, …, u_M)` as a dense operator on `(C^N)^{⊗M} ⊗ V`.
pub fn monodromy_t(module: &ModuleShape, u: &[Scalar], variant: Variant) -> Result<DenseOperator> {
    dense_product(&monodromy_gates(module, u, variant)?, &monodromy_space(module, u.len()))
}

/// Gate lists of both sides of
/// `P^{(i,i+1)}R^{(i,i+1)}(u_i,u_{i+1})·𝕋(…,u_i,u_{i+1},…) = 𝕋(…,u_{i+1},u_i,…)·P^{(i+1,i)}R^{(i+1,i)}(u_{i+1},u_i)`,
/// with `i` 1-based.
pub fn exchange_gates(module: &ModuleShape, u: &[Scalar], i: usize) -> Result<(Vec<Gate>, Vec<Gate>)> {
    let m = u.len();
    if i == 0 || i >= m {
        return Err(Error::IndexOutOfRange(format!("exchange of slots {i},{} with M = {m}", i + 1)));
    }
    let n = module.rank();
    let space = monodromy_space(module, m);
    let p = Gate::pair(&crate::tensor::swap_op(n), i - 1, i, &space)?;
    let r_left = Gate::pair(&r_matrix(n, module.q(), &u[i - 1], &u[i])?, i - 1, i, &space)?;
    let r_right = Gate::pair(&r_matrix(n, module.q(), &u[i], &u[i - 1])?, i, i - 1, &space)?;
    let mut swapped = u.to_vec();
    swapped.swap(i - 1, i);
    let mut lhs = vec![p.clone(), r_left];
    lhs.extend(monodromy_gates(module, u, Variant::Left)?);
    let mut rhs = monodromy_gates(module, &swapped, Variant::Left)?;
    rhs.extend([p, r_right]);
    Ok((lhs, rhs))
}

/// [`exchange_gates`] multiplied out.
pub fn exchange_sides(module: &ModuleShape, u: &[Scalar], i: usize) -> Result<(DenseOperator, DenseOperator)> {
    let space = monodromy_space(module, u.len());
    let (lhs, rhs) = exchange_gates(module, u, i)?;
    Ok((dense_product(&lhs, &space)?, dense_product(&rhs, &space)?))
}

/// `∏_a ∏_{i<j≤n_a} (t^a_i - t^a_j)/(q⁻¹t^a_i - q t^a_j)`.
fn trace_prefactor(q: &Scalar, nbar: &BarN, t: &[Scalar]) -> Result<Scalar> {
    let qi = q.inv()?;
    let mut acc = Scalar::one();
    let mut start = 0;
    for &c in nbar.counts() {
        let seg = &t[start..start + c];
        for a in 0..c {
            for b in a + 1..c {
                acc *= &(&seg[a] - &seg[b])
                    .checked_div(&(&qi * &seg[a] - q * &seg[b]))
                    .map_err(|_| Error::degenerate("trace prefactor pole"))?;
            }
        }
        start += c;
    }
    Ok(acc)
}

/// `⟨out| G |in⟩ ⊗ id_V` applied to `v`, for aux basis indices given per slot
/// (0-based) and a gate product `G` on `(C^N)^{⊗M} ⊗ V`.
fn aux_block_apply(
    gates: &[Gate],
    space: &TensorShape,
    aux_in: &[usize],
    aux_out: &[usize],
    v: &KetVector,
) -> Result<KetVector> {
    let dim_v = v.dim();
    let aux_shape = TensorShape::uniform(space.dims().first().copied().unwrap_or(1), aux_in.len());
    let (a_in, a_out) = (aux_shape.flat_index(aux_in), aux_shape.flat_index(aux_out));
    let mut start = vec![Scalar::zero(); space.total_dim()];
    for (x, c) in v.entries().iter().enumerate() {
        start[a_in * dim_v + x] = c.clone();
    }
    let out = apply_product(gates, space, &KetVector::new(start))?;
    Ok(KetVector::new(out.entries()[a_out * dim_v..(a_out + 1) * dim_v].to_vec()))
}

fn check_arity(nbar: &BarN, module: &ModuleShape, t: &[Scalar]) -> Result<()> {
    if nbar.counts().len() + 1 != module.rank() {
        return Err(Error::shape("multiplicities do not match N"));
    }
    if t.len() != nbar.total() {
        return Err(Error::shape(format!("{} variables for M = {}", t.len(), nbar.total())));
    }
    Ok(())
}

/// `𝔹_n̄(t̄)` applied to `v`. Variables are ordered colour by colour.
///
/// Since `e_{c+1,c}` maps `|c⟩` to `|c+1⟩`, the trace against
/// `⊗ e_{c_k+1,c_k}` is the auxiliary block `⟨c_1…c_M| 𝕋 |c_1+1…c_M+1⟩`.
pub fn bethe_b_apply(module: &ModuleShape, nbar: &BarN, t: &[Scalar], v: &KetVector) -> Result<KetVector> {
    check_arity(nbar, module, t)?;
    let colours = nbar.colours();
    if colours.is_empty() {
        return Ok(v.clone());
    }
    let space = monodromy_space(module, colours.len());
    let gates = monodromy_gates(module, t, Variant::Left)?;
    let aux_in: Vec<usize> = colours.clone();
    let aux_out: Vec<usize> = colours.iter().map(|c| c - 1).collect();
    let out = aux_block_apply(&gates, &space, &aux_in, &aux_out, v)?;
    Ok(out.scale(&trace_prefactor(module.q(), nbar, t)?))
}

/// `𝔹_n̄(t̄) v` on the singular vector.
pub fn bethe_b(module: &ModuleShape, nbar: &BarN, t: &[Scalar]) -> Result<KetVector> {
    bethe_b_apply(module, nbar, t, &singular_vector(module))
}

/// `𝔹_n̄(t̄)` as an operator on `V` through the dense partial trace.
/// Much slower than [`bethe_b_apply`]; kept as an independent route.
pub fn bethe_b_dense(module: &ModuleShape, nbar: &BarN, t: &[Scalar]) -> Result<DenseOperator> {
    check_arity(nbar, module, t)?;
    let colours = nbar.colours();
    let m = colours.len();
    let n = module.rank();
    let space = monodromy_space(module, m);
    let mut ops: Vec<DenseOperator> = colours.iter().map(|&c| matrix_unit(n, c + 1, c)).collect::<Result<_>>()?;
    ops.push(DenseOperator::identity(module.dim()));
    let e = crate::tensor::kron(&ops);
    let tm = monodromy_t(module, t, Variant::Left)?.compose(&e)?;
    let (traced, _) = partial_trace(&tm, &space, &(0..m).collect::<Vec<_>>())?;
    Ok(traced.scalar_mul(&trace_prefactor(module.q(), nbar, t)?))
}

fn check_partial_range(module: &ModuleShape, l: usize, k: usize, t: &[Scalar]) -> Result<()> {
    if l == 0 || l > k + 1 || k + 1 > module.rank() {
        return Err(Error::IndexOutOfRange(format!("B[{l},{k}] with N = {}", module.rank())));
    }
    if t.len() != k + 1 - l {
        return Err(Error::shape(format!("{} variables for B[{l},{k}]", t.len())));
    }
    Ok(())
}

/// `𝔹_[l,k](t^l, …, t^k)` applied to `v`: trace of
/// `𝕽 · L^{(k-l+1)}(t^k)⋯L^{(1)}(t^l) · e_{k+1,k} ⊗ ⋯ ⊗ e_{l+1,l}` over the
/// auxiliary slots. `𝔹_[k+1,k]` is the identity.
pub fn bethe_partial_apply(module: &ModuleShape, l: usize, k: usize, t: &[Scalar], v: &KetVector) -> Result<KetVector> {
    check_partial_range(module, l, k, t)?;
    if l == k + 1 {
        return Ok(v.clone());
    }
    let colours: Vec<usize> = (l..=k).collect();
    let space = monodromy_space(module, colours.len());
    let gates = monodromy_gates(module, t, Variant::Right)?;
    let aux_out: Vec<usize> = colours.iter().map(|c| c - 1).collect();
    aux_block_apply(&gates, &space, &colours, &aux_out, v)
}

/// `𝔹_[l,k]` as an operator on `V`.
pub fn bethe_partial(module: &ModuleShape, l: usize, k: usize, t: &[Scalar]) -> Result<DenseOperator> {
    let d = module.dim();
    let cols: Vec<KetVector> =
        (0..d).map(|c| bethe_partial_apply(module, l, k, t, &KetVector::basis(d, c))).collect::<Result<_>>()?;
    DenseOperator::from_columns(&cols)
}

/// Right-hand side of the recurrence for `𝔹_[l,k] v` on a singular vector:
/// `Σ_{m=l+1}^{k+1} 𝔹_[m,k] · F⁺_{l,m}(t^{m-1}) · L_{mm}(t^{m-1})⋯L_{l+1,l+1}(t^l) v · ∏_{j=l+1}^{m-1} (q-q⁻¹)t^j/(t^j-t^{j-1})`,
/// with `t = (t^l, …, t^k)`.
pub fn partial_recurrence_rhs(
    module: &ModuleShape,
    l: usize,
    k: usize,
    t: &[Scalar],
    v: &KetVector,
) -> Result<KetVector> {
    check_partial_range(module, l, k, t)?;
    let var = |j: usize| &t[j - l];
    let q = module.q();
    let qq = q - q.inv()?;
    let mut acc = KetVector::zero(v.dim());
    for m in l + 1..=k + 1 {
        let mut c = Scalar::one();
        for j in l + 1..m {
            c *= &(&qq * var(j))
                .checked_div(&(var(j) - var(j - 1)))
                .map_err(|_| Error::degenerate("recurrence coefficient pole"))?;
        }
        let mut x = v.clone();
        for j in l..m {
            x = l_plus(module, var(j))?.get(j + 1, j + 1).apply(&x)?;
        }
        let lm = l_plus(module, var(m - 1))?;
        x = gauss(&lm)?.f(l, m)?.apply(&x)?;
        x = bethe_partial_apply(module, m, k, &t[m - l..], &x)?;
        acc.add_scaled(&x, &c)?;
    }
    Ok(acc)
}

/// `𝐰^𝔹_{V,I}(t)`: sort `I` into the special multiset, evaluate the trace
/// formula there, pull back along the sorting map with `γ̃`.
pub fn w_b(module: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<KetVector> {
    if t.len() != i.len() {
        return Err(Error::shape("one variable per multiset element"));
    }
    if let Some(c) = i.colours().iter().find(|&&c| c >= module.rank()) {
        return Err(Error::ConfigInvalid(format!("colour {c} with N = {}", module.rank())));
    }
    let (_, sigma) = canonical_sort(i);
    pullback_tilde(module.q(), &sigma, i, t, |j, tj| {
        let nbar = BarN::new(j.counts(module.rank()), module.rank())?;
        bethe_b(module, &nbar, tj)
    })
}
