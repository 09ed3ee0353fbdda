use jkpencil::jk::{canonical_pencil, jk_basis, jk_invariants, verify_canonical, JKInvariants, Mode};
use jkpencil::sample::{random_assembly, random_invertible, random_unimodular};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_assemblies_recovered_with_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let specs = random_assembly(&mut rng, 12, 3, 2);
        let canon = canonical_pencil(&specs).unwrap();
        let c = random_unimodular(&mut rng, canon.dim());
        let p = canon.congruence(&c);
        let want = JKInvariants::new(specs.clone());
        assert_eq!(jk_invariants(&p, Mode::Complex).unwrap(), want, "case {case}: {specs:?}");
        let d = jk_basis(&p).unwrap_or_else(|e| panic!("case {case}: {specs:?}: {e}"));
        assert!(verify_canonical(&d, &p));
    }
}

#[test]
fn invariants_survive_any_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let specs = random_assembly(&mut rng, 8, 2, 1);
        let p = canonical_pencil(&specs).unwrap();
        let q = p.congruence(&random_invertible(&mut rng, p.dim()));
        assert_eq!(jk_invariants(&p, Mode::Complex).unwrap(), jk_invariants(&q, Mode::Complex).unwrap());
    }
}
