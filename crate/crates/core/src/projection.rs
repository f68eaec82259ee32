//! The current-projection side. Projections of composed currents are replaced
//! by Gauss coordinates, `P(F_{l,m}(t)) = (q - q⁻¹)^{m-l-1} F⁺_{l,m}(t)`, and the
//! staircase projection is built by the recurrence
//!
//! `W(l,k) = Σ_{m=l+1}^{k+1} W(m,k) · (q-q⁻¹)^{m-l-1} F⁺_{l,m}(t^{m-1}) · ∏_{j=l+1}^{m-1} t^j/(t^j - t^{j-1})`
//!
//! with `W(k+1,k) = 1`. General multisets and modules are reached through the
//! sorting pullback and the comultiplication rule.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evaluation::{l_plus, singular_vector, weight_series, ModuleShape};
use crate::gauss::{gauss, GaussData};
use crate::multiset::{canonical_sort, modified_coproduct, pullback_tilde, PiMultiset};
use crate::scalar::Scalar;
use crate::tensor::{DenseOperator, KetVector};

/// `W(l,k)` for `t = (t^l, …, t^k)`; `W(k+1,k)` is the identity.
pub fn projected_staircase(module: &ModuleShape, l: usize, k: usize, t: &[Scalar]) -> Result<DenseOperator> {
    let n = module.rank();
    if l == 0 || l > k + 1 || k + 1 > n {
        return Err(Error::IndexOutOfRange(format!("W({l},{k}) with N = {n}")));
    }
    if t.len() != k + 1 - l {
        return Err(Error::shape(format!("{} variables for W({l},{k})", t.len())));
    }
    let var = |j: usize| &t[j - l];
    let q = module.q();
    let qq = q - q.inv()?;
    let mut gd: BTreeMap<usize, GaussData> = BTreeMap::new();
    for j in l..=k {
        gd.insert(j, gauss(&l_plus(module, var(j))?)?);
    }
    let mut w: BTreeMap<usize, DenseOperator> = BTreeMap::new();
    w.insert(k + 1, DenseOperator::identity(module.dim()));
    for a in (l..=k).rev() {
        let mut acc = DenseOperator::zero(module.dim());
        for m in a + 1..=k + 1 {
            let mut c = qq.pow((m - a - 1) as i32)?;
            for j in a + 1..m {
                c *= &var(j)
                    .checked_div(&(var(j) - var(j - 1)))
                    .map_err(|_| Error::degenerate("staircase coefficient pole"))?;
            }
            let f = gd[&(m - 1)].f(a, m)?;
            acc = acc.add(&w[&m].compose(f)?.scalar_mul(&c))?;
        }
        w.insert(a, acc);
    }
    Ok(w.remove(&l).expect("filled"))
}

/// `W(1,k) · L_{k+1,k+1}(t^k) ⋯ L_{2,2}(t^1) · v`.
pub fn staircase_with_diagonal(module: &ModuleShape, t: &[Scalar], v: &KetVector) -> Result<KetVector> {
    let k = t.len();
    let mut x = v.clone();
    for j in 1..=k {
        x = l_plus(module, &t[j - 1])?.get(j + 1, j + 1).apply(&x)?;
    }
    projected_staircase(module, 1, k, t)?.apply(&x)
}

/// `𝐰^P` on the staircase `(1, …, k)` computed directly on the whole module:
/// `W(1,k) v · ∏_j Λ_{j+1}(t^j)`.
pub fn staircase_direct(module: &ModuleShape, t: &[Scalar]) -> Result<KetVector> {
    let v = singular_vector(module);
    let mut lam = Scalar::one();
    for (j, tj) in t.iter().enumerate() {
        lam *= &weight_series(module, j + 2, tj)?;
    }
    Ok(projected_staircase(module, 1, t.len(), t)?.apply(&v)?.scale(&lam))
}

fn check_colours(module: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<()> {
    if t.len() != i.len() {
        return Err(Error::shape("one variable per multiset element"));
    }
    if let Some(c) = i.colours().iter().find(|&&c| c >= module.rank()) {
        return Err(Error::ConfigInvalid(format!("colour {c} with N = {}", module.rank())));
    }
    Ok(())
}

/// `𝐰^P` on at most one factor. A single vector representation only carries
/// the colours `{1, …, k}`, each once; anything else vanishes by weight.
pub fn w_p_single(module: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<KetVector> {
    check_colours(module, i, t)?;
    if module.num_factors() > 1 {
        return Err(Error::shape("w_p_single on more than one factor"));
    }
    let v = singular_vector(module);
    if i.is_empty() {
        return Ok(v);
    }
    let (sorted, sigma) = canonical_sort(i);
    if sorted.staircase_len().is_none() || module.num_factors() == 0 {
        return Ok(KetVector::zero(module.dim()));
    }
    pullback_tilde(module.q(), &sigma, i, t, |_, tj| staircase_direct(module, tj))
}

/// How the coproduct is nested over the module factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nesting {
    /// `V_1 ⊗ (V_2 ⊗ (⋯))`
    Left,
    /// `((⋯) ⊗ V_{n-1}) ⊗ V_n`
    Right,
}

/// `𝐰^P_{V,I}(t)` assembled from single-factor values by the modified
/// comultiplication rule.
pub fn w_p(module: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<KetVector> {
    w_p_nested(module, i, t, Nesting::Left)
}

pub fn w_p_nested(module: &ModuleShape, i: &PiMultiset, t: &[Scalar], nesting: Nesting) -> Result<KetVector> {
    check_colours(module, i, t)?;
    if module.num_factors() <= 1 {
        return w_p_single(module, i, t);
    }
    match nesting {
        Nesting::Left => {
            let (a, b) = module.split_first();
            modified_coproduct(&a, &b, i, t, |x, y| w_p_single(&a, x, y), |x, y| w_p_nested(&b, x, y, nesting))
        }
        Nesting::Right => {
            let (a, b) = module.split_last();
            modified_coproduct(&a, &b, i, t, |x, y| w_p_nested(&a, x, y, nesting), |x, y| w_p_single(&b, x, y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::f_plus;
    use crate::scalar::sample_point;
    use crate::trace::{bethe_b, bethe_partial_apply, w_b, BarN};

    fn module(n: usize, seed: u64, factors: usize, vars: usize) -> (ModuleShape, Vec<Scalar>) {
        let p = sample_point(seed, factors, vars).unwrap();
        (ModuleShape::new(n, p.q, p.z).unwrap(), p.t)
    }

    fn ms(c: &[usize]) -> PiMultiset {
        PiMultiset::new(c.to_vec()).unwrap()
    }

    #[test]
    fn single_step_is_gauss_coordinate() {
        let (m, t) = module(3, 1, 2, 1);
        for k in 1..=2 {
            let w = projected_staircase(&m, k, k, &t).unwrap();
            assert_eq!(w, f_plus(&l_plus(&m, &t[0]).unwrap(), k, k + 1).unwrap());
        }
        assert!(projected_staircase(&m, 3, 2, &[]).unwrap().is_identity());
    }

    #[test]
    fn two_step_worked_example() {
        let (m, t) = module(4, 2, 1, 2);
        let q = m.q();
        let qq = q - q.inv().unwrap();
        let k = 3;
        let (tk1, tk) = (&t[0], &t[1]);
        let fk = f_plus(&l_plus(&m, tk).unwrap(), k, k + 1).unwrap();
        let fk1 = f_plus(&l_plus(&m, tk1).unwrap(), k - 1, k).unwrap();
        let fwide = f_plus(&l_plus(&m, tk).unwrap(), k - 1, k + 1).unwrap();
        let c = qq * tk.checked_div(&(tk - tk1)).unwrap();
        let expected = fk.compose(&fk1).unwrap().add(&fwide.scalar_mul(&c)).unwrap();
        assert_eq!(projected_staircase(&m, k - 1, k, &t).unwrap(), expected);
    }

    #[test]
    fn singular_vector_recurrence() {
        for n in 2..=4 {
            for factors in 1..=2 {
                let (m, t) = module(n, 3 + factors as u64, factors, n - 1);
                let v = singular_vector(&m);
                for k in 1..n {
                    let lhs = bethe_partial_apply(&m, 1, k, &t[..k], &v).unwrap();
                    let rhs = staircase_with_diagonal(&m, &t[..k], &v).unwrap();
                    assert_eq!(lhs, rhs, "N={n} factors={factors} k={k}");
                }
            }
        }
    }

    #[test]
    fn single_factor_values() {
        let (m, t) = module(2, 4, 1, 2);
        let (q, z) = (m.q().clone(), m.z()[0].clone());
        let qi = q.inv().unwrap();
        let coeff = ((&q - &qi) * &z).checked_div(&(&q * &t[0] - &qi * &z)).unwrap();
        assert_eq!(w_p_single(&m, &ms(&[1]), &t[..1]).unwrap(), KetVector::basis(2, 1).scale(&coeff));
        assert!(w_p_single(&m, &ms(&[1, 1]), &t).unwrap().is_zero());
        assert_eq!(w_p_single(&m, &PiMultiset::empty(), &[]).unwrap(), singular_vector(&m));
        assert!(w_p_single(&m, &ms(&[2]), &t[..1]).is_err());
    }

    #[test]
    fn two_factor_single_colour_expansion() {
        let (m, t) = module(2, 5, 2, 1);
        let (a, b) = m.split_first();
        let i = ms(&[1]);
        let x = w_p_single(&a, &i, &t).unwrap().kron(&singular_vector(&b));
        let y = singular_vector(&a).kron(&w_p_single(&b, &i, &t).unwrap());
        let lam_b = weight_series(&b, 1, &t[0]).unwrap();
        let lam_a = weight_series(&a, 2, &t[0]).unwrap();
        let expected = x.scale(&lam_b).add(&y.scale(&lam_a)).unwrap();
        assert_eq!(w_p(&m, &i, &t).unwrap(), expected);
    }

    #[test]
    fn staircase_routes_agree() {
        for n in 2..=3 {
            let (m, t) = module(n, 6, 2, n - 1);
            for k in 0..n {
                let i = PiMultiset::new((1..=k).collect()).unwrap();
                let direct = staircase_direct(&m, &t[..k]).unwrap();
                assert_eq!(w_p(&m, &i, &t[..k]).unwrap(), direct, "N={n} k={k}");
                let nbar = BarN::staircase(k, n).unwrap();
                assert_eq!(bethe_b(&m, &nbar, &t[..k]).unwrap(), direct);
            }
        }
    }

    #[test]
    fn nestings_agree() {
        let (m, t) = module(3, 7, 3, 3);
        for i in [ms(&[1, 2]), ms(&[2, 1, 2]), ms(&[1, 1])] {
            let k = i.len();
            let a = w_p_nested(&m, &i, &t[..k], Nesting::Left).unwrap();
            let b = w_p_nested(&m, &i, &t[..k], Nesting::Right).unwrap();
            assert_eq!(a, b, "{:?}", i.colours());
        }
    }

    #[test]
    fn agrees_with_trace_side() {
        for n in 2..=3 {
            for factors in 1..=2 {
                let (m, t) = module(n, 8, factors, 3);
                for len in 0..=3 {
                    for i in PiMultiset::all_patterns(n, len) {
                        let a = w_p(&m, &i, &t[..len]).unwrap();
                        let b = w_b(&m, &i, &t[..len]).unwrap();
                        assert_eq!(a, b, "N={n} factors={factors} {:?}", i.colours());
                    }
                }
            }
        }
    }
}
