use jkpencil::invsub::{
    all_tuples, direct_sum_subspace, enumerate_invariant_subspaces, invariant_subspace_count, is_invariant,
    subspace_from_tuple, HeightProfile, Verdict,
};
use jkpencil::jk::jk_basis;
use jkpencil::pencil::Subspace;

/// Every multiset of block sizes with the given total.
fn partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn profiles(max_half_dim: usize) -> Vec<HeightProfile> {
    (1..=max_half_dim).flat_map(|t| partitions(t, t)).map(|sizes| HeightProfile::from_sizes(&sizes).unwrap()).collect()
}

#[test]
fn count_matches_enumeration_up_to_dim_16() {
    for h in profiles(8) {
        let list = enumerate_invariant_subspaces(&h);
        assert_eq!(list.len() as u128, invariant_subspace_count(&h), "{h:?}");
        let admissible: Vec<_> = all_tuples(&h).into_iter().filter(|t| t.satisfies(&h)).collect();
        assert_eq!(admissible.len(), list.len());
    }
}

#[test]
fn admissible_tuples_pass_and_violating_tuples_fail() {
    for h in profiles(6) {
        let d = jk_basis(&h.canonical()).unwrap();
        for t in all_tuples(&h) {
            if t.satisfies(&h) {
                let w = subspace_from_tuple(&d, &t).unwrap();
                let v = is_invariant(&w, &d, 200, 17).unwrap();
                assert_eq!(v, Verdict::InvariantConsistent { trials: 200 }, "{h:?} {t}");
            } else {
                let w = direct_sum_subspace(&h, &t).unwrap();
                match is_invariant(&w, &d, 200, 17).unwrap() {
                    Verdict::NotInvariant { witness, .. } => assert!(!w.is_invariant_under(&witness)),
                    v => panic!("{h:?} {t}: {v:?}"),
                }
            }
        }
    }
}

#[test]
fn chain_top_in_equal_heights_is_moved() {
    let h = HeightProfile::new(vec![2], vec![2]).unwrap();
    let d = jk_basis(&h.canonical()).unwrap();
    let n = h.dim();
    let mut top = vec![jkpencil::exactalg::rat(0); n];
    top[0] = jkpencil::exactalg::rat(1);
    let w = Subspace::span(n, &[top]);
    assert!(!is_invariant(&w, &d, 50, 1).unwrap().is_invariant());
    assert!(is_invariant(&Subspace::whole(n), &d, 50, 1).unwrap().is_invariant());
}
