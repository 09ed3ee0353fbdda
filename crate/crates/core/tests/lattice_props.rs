use jkpencil::invsub::{direct_sum_subspace, enumerate_invariant_subspaces, invariant_subspace_count, HeightProfile};
use jkpencil::jk::{canonical_pencil, jk_invariants, JKBlockSpec, JKInvariants, Mode};
use jkpencil::sample::{random_assembly, random_unimodular};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn profile() -> impl Strategy<Value = HeightProfile> {
    prop::collection::vec(1usize..=5, 1..=4).prop_map(|s| HeightProfile::from_sizes(&s).unwrap())
}

/// Tuples below the heights with `0 ≤ m_i − m_{i+1} ≤ k_i − k_{i+1}`, by
/// brute force over the whole box.
fn brute_force(h: &HeightProfile) -> Vec<Vec<usize>> {
    let k = h.heights();
    let mut out = vec![Vec::new()];
    for &ki in k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..=ki).map(move |m| {
                    let mut t = t.clone();
                    t.push(m);
                    t
                })
            })
            .collect();
    }
    out.retain(|t| (1..t.len()).all(|i| t[i - 1] >= t[i] && t[i - 1] - t[i] <= k[i - 1] - k[i]));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(h in profile()) {
        let listed: Vec<Vec<usize>> = enumerate_invariant_subspaces(&h).into_iter().map(|t| t.0).collect();
        let mut want = brute_force(&h);
        want.sort();
        prop_assert_eq!(invariant_subspace_count(&h), want.len() as u128);
        prop_assert_eq!(listed, want);
    }

    #[test]
    fn subspace_dimension(h in profile()) {
        for t in enumerate_invariant_subspaces(&h) {
            let w = direct_sum_subspace(&h, &t).unwrap();
            let want: usize = t.0.iter().zip(h.mults()).map(|(m, l)| 2 * m * l).sum();
            prop_assert_eq!(w.dim(), want);
        }
    }

    #[test]
    fn generic_rank_counts_kronecker_blocks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let specs = random_assembly(&mut rng, 8, 2, 2);
        let canon = canonical_pencil(&specs).unwrap();
        let p = canon.congruence(&random_unimodular(&mut rng, canon.dim()));
        let inv = jk_invariants(&p, Mode::Complex).unwrap();
        prop_assert_eq!(&inv, &JKInvariants::new(specs.clone()));
        // A + tB at a value off every eigenvalue has corank equal to the number
        // of Kronecker blocks.
        let kron = specs.iter().filter(|b| matches!(b, JKBlockSpec::Kronecker { .. })).count();
        let t = jkpencil::exactalg::rat(97);
        let m = p.a.add(&p.b.scale(&t));
        prop_assert_eq!(p.dim() - m.rank(), kron);
    }
}
