use proptest::prelude::*;

use bethe_weights::evaluation::ModuleShape;
use bethe_weights::multiset::{modify, unmodify, PiMultiset};
use bethe_weights::projection::{w_p_nested, Nesting};
use bethe_weights::scalar::sample_point;
use bethe_weights::trace::w_b;

fn setup(
    n: usize,
    factors: usize,
    colours: &[usize],
    seed: u64,
) -> Option<(ModuleShape, PiMultiset, Vec<bethe_weights::Scalar>)> {
    let colours: Vec<usize> = colours.iter().map(|c| 1 + c % (n - 1)).collect();
    let p = sample_point(seed, factors, colours.len()).ok()?;
    let m = ModuleShape::new(n, p.q, p.z).ok()?;
    Some((m, PiMultiset::new(colours).ok()?, p.t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_matches_trace(n in 2usize..=3, factors in 1usize..=2, colours in prop::collection::vec(0usize..4, 0..=2), seed in any::<u64>()) {
        let Some((m, i, t)) = setup(n, factors, &colours, seed) else { return Ok(()) };
        match (w_b(&m, &i, &t), w_p_nested(&m, &i, &t, Nesting::Right)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(e), _) | (_, Err(e)) => prop_assume!(e.is_degenerate()),
        }
    }

    #[test]
    fn modify_inverts_unmodify(n in 2usize..=3, factors in 1usize..=2, colours in prop::collection::vec(0usize..4, 0..=3), seed in any::<u64>()) {
        let Some((m, i, t)) = setup(n, factors, &colours, seed) else { return Ok(()) };
        let Ok(w) = w_b(&m, &i, &t) else { return Ok(()) };
        let rev_t: Vec<_> = t.iter().rev().cloned().collect();
        let Ok(plain) = unmodify(&m, &i.reversed(), &rev_t, |j, s| w_b(&m, j, s)) else { return Ok(()) };
        prop_assert_eq!(modify(&m, &i, &t, |_, _| Ok(plain)).unwrap(), w);
    }
}
