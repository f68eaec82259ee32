//! Ordered coloured multisets, the kernels `γ`, `γ̃`, `β`, and the operations
//! that move weight-function values between orderings and tensor factors.
//!
//! Elements are identified by position `0..len`; a value assignment `t` is a
//! slice indexed by position.

use crate::error::{Error, Result};
use crate::evaluation::{weight_series, ModuleShape};
use crate::scalar::Scalar;
use crate::tensor::KetVector;

/// Ordered sequence of colours in `1..N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PiMultiset {
    colours: Vec<usize>,
}

impl PiMultiset {
    pub fn new(colours: Vec<usize>) -> Result<Self> {
        if colours.contains(&0) {
            return Err(Error::ConfigInvalid("colour 0".into()));
        }
        Ok(PiMultiset { colours })
    }

    /// Like [`PiMultiset::new`] and additionally checks every colour is below `n`.
    pub fn for_rank(colours: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(c) = colours.iter().find(|&&c| c == 0 || c >= n) {
            return Err(Error::ConfigInvalid(format!("colour {c} outside 1..{}", n - 1)));
        }
        Ok(PiMultiset { colours })
    }

    pub fn empty() -> Self {
        PiMultiset::default()
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    pub fn colour(&self, pos: usize) -> usize {
        self.colours[pos]
    }

    /// Ordered submultiset on the given positions.
    pub fn restrict(&self, positions: &[usize]) -> PiMultiset {
        PiMultiset { colours: positions.iter().map(|&p| self.colours[p]).collect() }
    }

    /// `Ī`: same elements, opposite order.
    pub fn reversed(&self) -> PiMultiset {
        PiMultiset { colours: self.colours.iter().rev().copied().collect() }
    }

    /// Multiplicity of each colour `1..n`.
    pub fn counts(&self, n: usize) -> Vec<usize> {
        (1..n).map(|a| self.colours.iter().filter(|&&c| c == a).count()).collect()
    }

    /// `Some(k)` if the colours are `1, 2, …, k` in this order.
    pub fn staircase_len(&self) -> Option<usize> {
        self.colours.iter().enumerate().all(|(p, &c)| c == p + 1).then_some(self.colours.len())
    }

    /// Every ordered multiset of length `len` with colours in `1..n`,
    /// in lexicographic order.
    pub fn all_patterns(n: usize, len: usize) -> Vec<PiMultiset> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (1..n).map(move |c| {
                        let mut x = p.clone();
                        x.push(c);
                        x
                    })
                })
                .collect();
        }
        out.into_iter().map(|colours| PiMultiset { colours }).collect()
    }
}

/// Order-preserving decomposition `I = I_1 ⊔ I_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Position bijection `σ: I → J`; `mapping[i]` is the position of `σ(i)` in `J`.
/// The colours of `J` are carried over, so `σ` always intertwines colourings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourPermutation {
    mapping: Vec<usize>,
}

impl ColourPermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::ConfigInvalid(format!("{mapping:?} is not a bijection")));
            }
        }
        Ok(ColourPermutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        ColourPermutation { mapping: (0..n).collect() }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        ColourPermutation { mapping: inv }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &ColourPermutation) -> Self {
        ColourPermutation { mapping: other.mapping.iter().map(|&m| self.mapping[m]).collect() }
    }

    /// `J = σ(I)`: `J[σ(i)] = I[i]`.
    pub fn image(&self, i: &PiMultiset) -> PiMultiset {
        let mut colours = vec![0; i.len()];
        for (p, &m) in self.mapping.iter().enumerate() {
            colours[m] = i.colour(p);
        }
        PiMultiset { colours }
    }

    /// Move values from `I`-positions to `J`-positions.
    pub fn push_values(&self, t: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); t.len()];
        for (p, &m) in self.mapping.iter().enumerate() {
            out[m] = t[p].clone();
        }
        out
    }

    /// Restriction to the ordered subset `positions` of `I`, relabelled as a
    /// bijection from `0..k` onto the image subset ordered as in `J`.
    pub fn restrict(&self, positions: &[usize]) -> ColourPermutation {
        let mut images: Vec<usize> = positions.iter().map(|&p| self.mapping[p]).collect();
        let targets = images.clone();
        images.sort_unstable();
        ColourPermutation { mapping: targets.iter().map(|m| images.binary_search(m).expect("present")).collect() }
    }

    /// Pairs `i ≺ j` with `σ(j) ≺ σ(i)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.mapping.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.mapping[j] < self.mapping[i])
            .collect()
    }

    /// All permutations of `n` positions in lexicographic order.
    pub fn all(n: usize) -> Vec<ColourPermutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<ColourPermutation>) {
            if prefix.len() == used.len() {
                out.push(ColourPermutation { mapping: prefix.clone() });
                return;
            }
            for k in 0..used.len() {
                if !used[k] {
                    used[k] = true;
                    prefix.push(k);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[k] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

fn ratio(num: Scalar, den: Scalar, what: &str) -> Result<Scalar> {
    num.checked_div(&den).map_err(|_| Error::degenerate(what.to_string()))
}

/// `γ(t_i, t_j)` for elements of colours `ci`, `cj`.
pub fn gamma(q: &Scalar, ti: &Scalar, tj: &Scalar, ci: usize, cj: usize) -> Result<Scalar> {
    let qi = q.inv()?;
    if ci == cj + 1 {
        ratio(q * ti - &qi * tj, ti - tj, "gamma pole")
    } else if cj == ci + 1 {
        ratio(ti - tj, &qi * ti - q * tj, "gamma pole")
    } else if ci == cj {
        ratio(&qi * ti - q * tj, q * ti - &qi * tj, "gamma pole")
    } else {
        Ok(Scalar::one())
    }
}

/// `γ̃(t_i, t_j)`.
pub fn gamma_tilde(q: &Scalar, ti: &Scalar, tj: &Scalar, ci: usize, cj: usize) -> Result<Scalar> {
    let qi = q.inv()?;
    if ci == cj + 1 {
        ratio(ti - tj, q * ti - &qi * tj, "gamma-tilde pole")
    } else if cj == ci + 1 {
        ratio(&qi * ti - q * tj, ti - tj, "gamma-tilde pole")
    } else {
        Ok(Scalar::one())
    }
}

/// `β(t_i, t_j)`.
pub fn beta(q: &Scalar, ti: &Scalar, tj: &Scalar, ci: usize, cj: usize) -> Result<Scalar> {
    if ci == cj {
        let qi = q.inv()?;
        ratio(&qi * ti - q * tj, ti - tj, "beta pole")
    } else {
        Ok(Scalar::one())
    }
}

/// Which kernel a pullback uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Gamma,
    GammaTilde,
}

impl Kernel {
    pub fn eval(self, q: &Scalar, ti: &Scalar, tj: &Scalar, ci: usize, cj: usize) -> Result<Scalar> {
        match self {
            Kernel::Gamma => gamma(q, ti, tj, ci, cj),
            Kernel::GammaTilde => gamma_tilde(q, ti, tj, ci, cj),
        }
    }
}

/// All `2^n` splits; position `p` goes left iff bit `p` of the counter is 0.
pub fn splits(n: usize) -> Vec<Split> {
    (0..1usize << n)
        .map(|mask| {
            let (left, right) = (0..n).partition(|p| mask >> p & 1 == 0);
            Split { left, right }
        })
        .collect()
}

/// `Φ = ∏_{i∈I_1, j∈I_2, i≺j} γ(t_i, t_j)`.
pub fn phi(q: &Scalar, split: &Split, i: &PiMultiset, t: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for &a in &split.left {
        for &b in split.right.iter().filter(|&&b| a < b) {
            acc *= &gamma(q, &t[a], &t[b], i.colour(a), i.colour(b))?;
        }
    }
    Ok(acc)
}

/// `Φ̃ = ∏_{i∈I_1, j∈I_2} β(t_i, t_j) · ∏_{i∈I_2, j∈I_1, i≺j} γ̃(t_i, t_j)`.
pub fn phi_tilde(q: &Scalar, split: &Split, i: &PiMultiset, t: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for &a in &split.left {
        for &b in &split.right {
            acc *= &beta(q, &t[a], &t[b], i.colour(a), i.colour(b))?;
        }
    }
    for &a in &split.right {
        for &b in split.left.iter().filter(|&&b| a < b) {
            acc *= &gamma_tilde(q, &t[a], &t[b], i.colour(a), i.colour(b))?;
        }
    }
    Ok(acc)
}

/// Stable sort by colour. Returns the sorted multiset and `σ` with
/// `σ(i)` the new position of `i`.
pub fn canonical_sort(i: &PiMultiset) -> (PiMultiset, ColourPermutation) {
    let mut order: Vec<usize> = (0..i.len()).collect();
    order.sort_by_key(|&p| i.colour(p));
    let mut mapping = vec![0; i.len()];
    for (new, &old) in order.iter().enumerate() {
        mapping[old] = new;
    }
    let sigma = ColourPermutation { mapping };
    (sigma.image(i), sigma)
}

/// The scalar factor `∏_{i≺j, σ(j)≺σ(i)} κ(t_i, t_j)` of a pullback.
pub fn pullback_factor(
    kernel: Kernel,
    q: &Scalar,
    sigma: &ColourPermutation,
    i: &PiMultiset,
    t: &[Scalar],
) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for (a, b) in sigma.inversions() {
        acc *= &kernel.eval(q, &t[a], &t[b], i.colour(a), i.colour(b))?;
    }
    Ok(acc)
}

fn pullback<F>(
    kernel: Kernel,
    q: &Scalar,
    sigma: &ColourPermutation,
    i: &PiMultiset,
    t: &[Scalar],
    w: F,
) -> Result<KetVector>
where
    F: FnOnce(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    if sigma.len() != i.len() || t.len() != i.len() {
        return Err(Error::shape("pullback arity"));
    }
    let value = w(&sigma.image(i), &sigma.push_values(t))?;
    if value.is_zero() {
        return Ok(value);
    }
    Ok(value.scale(&pullback_factor(kernel, q, sigma, i, t)?))
}

/// `^{σ,γ}w(t_i) = w_J(t_{σ(i)}) · ∏_{i≺j, σ(j)≺σ(i)} γ(t_i, t_j)` where `w`
/// evaluates the collection on `J = σ(I)`.
pub fn pullback_gamma<F>(q: &Scalar, sigma: &ColourPermutation, i: &PiMultiset, t: &[Scalar], w: F) -> Result<KetVector>
where
    F: FnOnce(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    pullback(Kernel::Gamma, q, sigma, i, t, w)
}

/// Same as [`pullback_gamma`] with `γ̃`.
pub fn pullback_tilde<F>(q: &Scalar, sigma: &ColourPermutation, i: &PiMultiset, t: &[Scalar], w: F) -> Result<KetVector>
where
    F: FnOnce(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    pullback(Kernel::GammaTilde, q, sigma, i, t, w)
}

fn lambda_shift(module: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for (p, tp) in t.iter().enumerate() {
        acc *= &weight_series(module, i.colour(p) + 1, tp)?;
    }
    Ok(acc)
}

/// Modified value from an ordinary weight function:
/// `𝐰_I(t) = w_Ī(t̄) · ∏_{i≺j} β(t_i, t_j) · ∏_i Λ_{ι(i)+1}(t_i)`.
pub fn modify<F>(module: &ModuleShape, i: &PiMultiset, t: &[Scalar], w: F) -> Result<KetVector>
where
    F: FnOnce(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    let q = module.q();
    let rev_t: Vec<Scalar> = t.iter().rev().cloned().collect();
    let value = w(&i.reversed(), &rev_t)?;
    let mut f = lambda_shift(module, i, t)?;
    for a in 0..i.len() {
        for b in a + 1..i.len() {
            f *= &beta(q, &t[a], &t[b], i.colour(a), i.colour(b))?;
        }
    }
    Ok(value.scale(&f))
}

/// Inverse of [`modify`]:
/// `w_I(t) = 𝐰_Ī(t̄) · ∏_{i≺j} β(t_j, t_i)^{-1} · ∏_i Λ_{ι(i)+1}(t_i)^{-1}`.
pub fn unmodify<F>(module: &ModuleShape, i: &PiMultiset, t: &[Scalar], w: F) -> Result<KetVector>
where
    F: FnOnce(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    let q = module.q();
    let rev_t: Vec<Scalar> = t.iter().rev().cloned().collect();
    let value = w(&i.reversed(), &rev_t)?;
    let mut f = lambda_shift(module, i, t)?;
    for a in 0..i.len() {
        for b in a + 1..i.len() {
            f *= &beta(q, &t[b], &t[a], i.colour(b), i.colour(a))?;
        }
    }
    let f = f.inv().map_err(|_| Error::degenerate("unmodify factor vanishes"))?;
    Ok(value.scale(&f))
}

/// Right-hand side of the modified comultiplication rule on `V_1 ⊗ V_2`:
/// `Σ 𝐰_{V_1,I_1} ⊗ 𝐰_{V_2,I_2} · Φ̃ · ∏_{I_1} Λ^{(2)}_{ι} · ∏_{I_2} Λ^{(1)}_{ι+1}`.
pub fn modified_coproduct<F1, F2>(
    v1: &ModuleShape,
    v2: &ModuleShape,
    i: &PiMultiset,
    t: &[Scalar],
    w1: F1,
    w2: F2,
) -> Result<KetVector>
where
    F1: Fn(&PiMultiset, &[Scalar]) -> Result<KetVector>,
    F2: Fn(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    let q = v1.q();
    let mut acc = KetVector::zero(v1.dim() * v2.dim());
    for split in splits(i.len()) {
        let (i1, t1) = (i.restrict(&split.left), pick(t, &split.left));
        let a = w1(&i1, &t1)?;
        if a.is_zero() {
            continue;
        }
        let (i2, t2) = (i.restrict(&split.right), pick(t, &split.right));
        let b = w2(&i2, &t2)?;
        if b.is_zero() {
            continue;
        }
        let mut f = phi_tilde(q, &split, i, t)?;
        for &p in &split.left {
            f *= &weight_series(v2, i.colour(p), &t[p])?;
        }
        for &p in &split.right {
            f *= &weight_series(v1, i.colour(p) + 1, &t[p])?;
        }
        acc.add_scaled(&a.kron(&b), &f)?;
    }
    Ok(acc)
}

/// Right-hand side of the ordinary comultiplication rule on `V_1 ⊗ V_2`:
/// `Σ w_{V_1,I_1} ⊗ w_{V_2,I_2} · Φ · ∏_{I_1} Λ^{(2)}_{ι} / Λ^{(2)}_{ι+1}`.
pub fn coproduct<F1, F2>(
    v1: &ModuleShape,
    v2: &ModuleShape,
    i: &PiMultiset,
    t: &[Scalar],
    w1: F1,
    w2: F2,
) -> Result<KetVector>
where
    F1: Fn(&PiMultiset, &[Scalar]) -> Result<KetVector>,
    F2: Fn(&PiMultiset, &[Scalar]) -> Result<KetVector>,
{
    let q = v1.q();
    let mut acc = KetVector::zero(v1.dim() * v2.dim());
    for split in splits(i.len()) {
        let (i1, t1) = (i.restrict(&split.left), pick(t, &split.left));
        let a = w1(&i1, &t1)?;
        if a.is_zero() {
            continue;
        }
        let (i2, t2) = (i.restrict(&split.right), pick(t, &split.right));
        let b = w2(&i2, &t2)?;
        if b.is_zero() {
            continue;
        }
        let mut f = phi(q, &split, i, t)?;
        for &p in &split.left {
            let c = i.colour(p);
            let den = weight_series(v2, c + 1, &t[p])?;
            f *= &ratio(weight_series(v2, c, &t[p])?, den, "weight ratio pole")?;
        }
        acc.add_scaled(&a.kron(&b), &f)?;
    }
    Ok(acc)
}

/// Values of `t` at the given positions.
pub fn pick(t: &[Scalar], positions: &[usize]) -> Vec<Scalar> {
    positions.iter().map(|&p| t[p].clone()).collect()
}
