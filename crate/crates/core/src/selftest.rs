//! The acceptance criteria as runnable checks, shared by the `acceptance`
//! test target and the `selftest` command.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exactalg::rational::rat;
use crate::exactalg::{Matrix, RatFunc, Rational};
use crate::geometry::{
    compatibility_check, exterior_derivative, involutivity_check, jk_invariants_at_point, lie_bracket, nijenhuis,
    Chart, DiffForm, GeomError, OperatorField, VectorField,
};
use crate::invsub::{
    all_tuples, complex_jordan_sizes, complex_structure, direct_sum_subspace, enumerate_invariant_subspaces,
    invariant_subspace_count, is_invariant, subspace_from_tuple, HeightProfile, Verdict,
};
use crate::jk::{canonical_pencil, jk_basis, jk_invariants, verify_canonical, JKBlockSpec, JKInvariants, Mode};
use crate::pencil::{recursion_operator, EigenvalueClass};
use crate::sample::{random_assembly, random_flat_blocks, random_poly, random_quadratic_blocks, random_unimodular};
use crate::turiel::{
    build_flat, build_normal_form, check_forms, check_frames, flat_distribution, integrability_verdict,
    product_verdicts, regular_factor, DistributionSpec, Factor, FlatSpec, Structure, TurielError, TurielSignature,
};

/// Sizes of the sweeps. `full` meets every stated minimum; `quick` is a
/// smaller subset for interactive use.
#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub roundtrip_cases: usize,
    /// Count check for profiles of half-dimension up to this.
    pub lattice_half_dim: usize,
    /// Witness and refutation sweep for profiles of half-dimension up to this.
    pub refute_half_dim: usize,
    pub automorphism_trials: usize,
    pub quadratic_instances: usize,
    pub max_n: usize,
    pub max_k: usize,
    pub points: usize,
    pub flat_specs: usize,
    pub products: usize,
    pub kernel_instances: usize,
}

impl Config {
    pub fn full(seed: u64) -> Self {
        Config {
            seed,
            roundtrip_cases: 200,
            lattice_half_dim: 8,
            refute_half_dim: 6,
            automorphism_trials: 200,
            quadratic_instances: 20,
            max_n: 3,
            max_k: 3,
            points: 3,
            flat_specs: 10,
            products: 5,
            kernel_instances: 50,
        }
    }

    pub fn quick(seed: u64) -> Self {
        Config {
            seed,
            roundtrip_cases: 40,
            lattice_half_dim: 6,
            refute_half_dim: 4,
            automorphism_trials: 40,
            quadratic_instances: 6,
            max_n: 2,
            max_k: 2,
            points: 1,
            flat_specs: 4,
            products: 2,
            kernel_instances: 15,
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} {status} {}: {} ({:.1} s",
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(l) = self.limit {
            write!(f, ", limit {} s", l.as_secs())?;
        }
        write!(f, ")")
    }
}

pub const NAMES: [&str; 9] = [
    "JK roundtrip",
    "canonical basis",
    "subspace lattice",
    "complexification",
    "normal form identities",
    "distribution verdicts",
    "flat case",
    "products",
    "geometry kernel",
];

const LIMITS: [Option<u64>; 9] = [Some(60), None, Some(120), None, Some(300), None, None, None, None];

/// Runs criterion `id` (1 to 9).
pub fn run(id: u8, cfg: &Config) -> CriterionResult {
    assert!((1..=9).contains(&id), "criteria are numbered 1 to 9");
    let start = Instant::now();
    let (ok, detail) = match id {
        1 => roundtrip(cfg),
        2 => canonical_bases(cfg),
        3 => lattice(cfg),
        4 => complexification(cfg),
        5 => normal_forms(cfg),
        6 => distributions(cfg),
        7 => flat(cfg),
        8 => products(cfg),
        _ => kernel(cfg),
    };
    let elapsed = start.elapsed();
    let limit = LIMITS[id as usize - 1].map(Duration::from_secs);
    let passed = ok && limit.is_none_or(|l| elapsed <= l);
    CriterionResult { id, name: NAMES[id as usize - 1], passed, detail, elapsed, limit }
}

pub fn run_all(cfg: &Config) -> Vec<CriterionResult> {
    (1..=9).map(|id| run(id, cfg)).collect()
}

fn rng_for(cfg: &Config, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id)
}

fn verdict(ok: usize, total: usize, what: &str) -> (bool, String) {
    (ok == total, format!("{ok}/{total} {what}"))
}

fn roundtrip_cases(cfg: &Config) -> Vec<(Vec<JKBlockSpec>, crate::pencil::SkewPencil)> {
    let mut rng = rng_for(cfg, 1);
    (0..cfg.roundtrip_cases)
        .map(|_| {
            let specs = random_assembly(&mut rng, 12, 3, 2);
            let canon = canonical_pencil(&specs).expect("sampled blocks are realizable");
            let c = random_unimodular(&mut rng, canon.dim());
            (specs, canon.congruence(&c))
        })
        .collect()
}

fn roundtrip(cfg: &Config) -> (bool, String) {
    let cases = roundtrip_cases(cfg);
    let ok = cases
        .par_iter()
        .filter(|(specs, p)| jk_invariants(p, Mode::Complex).ok() == Some(JKInvariants::new(specs.clone())))
        .count();
    verdict(ok, cases.len(), "assemblies recovered")
}

fn canonical_bases(cfg: &Config) -> (bool, String) {
    let cases: Vec<_> =
        roundtrip_cases(cfg).into_iter().filter(|(s, _)| JKInvariants::new(s.clone()).realizable()).collect();
    let ok = cases.par_iter().filter(|(_, p)| jk_basis(p).is_ok_and(|d| verify_canonical(&d, p))).count();
    verdict(ok, cases.len(), "bases verified")
}

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

fn lattice(cfg: &Config) -> (bool, String) {
    let all = profiles(cfg.lattice_half_dim);
    let counted = all
        .par_iter()
        .filter(|h| enumerate_invariant_subspaces(h).len() as u128 == invariant_subspace_count(h))
        .count();
    // (enumerated subspaces confirmed, enumerated, violators refuted, violators)
    let trials = cfg.automorphism_trials;
    let sweep: Vec<(usize, usize, usize, usize)> = profiles(cfg.refute_half_dim)
        .par_iter()
        .enumerate()
        .map(|(pi, h)| {
            let canon = h.canonical();
            let Ok(d) = jk_basis(&canon) else { return (0, 1, 0, 0) };
            let mut r = (0, 0, 0, 0);
            for (ti, t) in all_tuples(h).into_iter().enumerate() {
                let seed = cfg.seed ^ ((pi as u64) << 32) ^ ti as u64;
                if t.satisfies(h) {
                    r.1 += 1;
                    let w = subspace_from_tuple(&d, &t).unwrap();
                    if is_invariant(&w, &d, trials, seed).is_ok_and(|v| v.is_invariant()) {
                        r.0 += 1;
                    }
                } else {
                    r.3 += 1;
                    let w = direct_sum_subspace(h, &t).unwrap();
                    if let Ok(Verdict::NotInvariant { witness, trial: Some(_) }) = is_invariant(&w, &d, trials, seed) {
                        if canon.congruence(&witness) == canon && !w.is_invariant_under(&witness) {
                            r.2 += 1;
                        }
                    }
                }
            }
            r
        })
        .collect();
    let s = sweep.iter().fold((0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));
    let ok = counted == all.len() && s.0 == s.1 && s.2 == s.3;
    let detail = format!(
        "{counted}/{} counts match, {}/{} subspaces pass {trials} trials, {}/{} violators refuted",
        all.len(),
        s.0,
        s.1,
        s.2,
        s.3
    );
    (ok, detail)
}

fn complexification(cfg: &Config) -> (bool, String) {
    let mut rng = rng_for(cfg, 4);
    let cases: Vec<_> = (0..cfg.quadratic_instances)
        .map(|_| {
            let blocks = random_quadratic_blocks(&mut rng, 8);
            let canon = canonical_pencil(&blocks).expect("rational beta");
            let c = random_unimodular(&mut rng, canon.dim());
            (blocks, canon.congruence(&c))
        })
        .collect();
    let ok = cases
        .par_iter()
        .filter(|(blocks, p)| {
            let Ok(cs) = complex_structure(p) else { return false };
            let Ok(op) = recursion_operator(p) else { return false };
            let n = p.dim();
            let j = &cs.j;
            let mut sizes: Vec<usize> = blocks
                .iter()
                .map(|b| match b {
                    JKBlockSpec::Jordan { size, .. } => *size,
                    JKBlockSpec::Kronecker { .. } => 0,
                })
                .collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            j.mul(j) == Matrix::identity(n).neg()
                && p.a.mul(j).is_skew()
                && p.b.mul(j).is_skew()
                && j.mul(&op) == op.mul(j)
                && complex_jordan_sizes(p, &cs) == sizes
        })
        .count();
    verdict(ok, cases.len(), "quadratic instances")
}

fn signatures(cfg: &Config) -> Vec<TurielSignature> {
    TurielSignature::all_up_to(cfg.max_n, cfg.max_k)
}

fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()
}

/// Invariants at a random point off the zero set of `domain`, skipping poles
/// and degenerate points; `None` if no usable point turned up.
fn invariants_at<R: Rng>(
    st: &Structure,
    domain: Option<&RatFunc>,
    rng: &mut R,
) -> Option<(Vec<Rational>, JKInvariants)> {
    for _ in 0..32 {
        let x = random_point(rng, st.chart.dim());
        if domain.is_some_and(|d| d.eval(&x).is_none_or(|v| num_traits::Zero::is_zero(&v))) {
            continue;
        }
        match jk_invariants_at_point(&st.omega0, &st.omega1, &x) {
            Ok(inv) => return Some((x, inv)),
            Err(GeomError::PoleAtPoint) | Err(GeomError::DegenerateForm) => continue,
            Err(_) => return None,
        }
    }
    None
}

fn jordan_at(sizes: &[usize], lambda: &Rational) -> JKInvariants {
    JKInvariants::new(
        sizes
            .iter()
            .map(|&size| JKBlockSpec::Jordan { class: EigenvalueClass::Finite(lambda.clone()), size })
            .collect(),
    )
}

fn normal_form_holds(sig: &TurielSignature, points: usize, seed: u64) -> bool {
    if !check_forms(sig).is_ok_and(|c| c.all()) || !check_frames(sig).all() {
        return false;
    }
    let st = build_normal_form(sig);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = regular_factor(sig);
    (0..points).all(|_| match invariants_at(&st, Some(&domain), &mut rng) {
        Some((x, inv)) => inv == jordan_at(&sig.block_sizes(), &x[sig.dim() - 1]),
        None => false,
    })
}

fn normal_forms(cfg: &Config) -> (bool, String) {
    let sigs = signatures(cfg);
    let ok =
        sigs.par_iter().enumerate().filter(|(i, s)| normal_form_holds(s, cfg.points, cfg.seed ^ *i as u64)).count();
    verdict(ok, sigs.len(), "signatures")
}

fn distributions(cfg: &Config) -> (bool, String) {
    let sigs = signatures(cfg);
    let cases: Vec<(TurielSignature, DistributionSpec)> =
        sigs.iter().flat_map(|s| DistributionSpec::all(s).into_iter().map(move |d| (s.clone(), d))).collect();
    let results: Vec<(bool, bool)> = cases
        .par_iter()
        .map(|(s, d)| match integrability_verdict(s, d) {
            Ok(v) => (v.agrees(), v.integrable()),
            Err(_) => (false, true),
        })
        .collect();
    let agree = results.iter().filter(|r| r.0).count();
    let failing = results.iter().filter(|r| !r.1).count();
    let images = sigs
        .par_iter()
        .filter(|s| {
            let top = s.ks()[0] + 1;
            DistributionSpec::ker_im(s, top, 1).and_then(|d| integrability_verdict(s, &d)).is_ok_and(|v| v.integrable())
        })
        .count();
    let ok = agree == cases.len() && images == sigs.len();
    let detail = format!(
        "{agree}/{} verdicts agree ({failing} non-integrable with witness), image integrable in {images}/{}",
        cases.len(),
        sigs.len()
    );
    (ok, detail)
}

fn flat_spec<R: Rng>(rng: &mut R, max_dim: usize, max_size: usize) -> FlatSpec {
    FlatSpec::new(JKInvariants::new(random_flat_blocks(rng, max_dim, max_size))).expect("constant Jordan data")
}

fn flat(cfg: &Config) -> (bool, String) {
    let mut rng = rng_for(cfg, 7);
    let specs: Vec<FlatSpec> = (0..cfg.flat_specs).map(|_| flat_spec(&mut rng, 8, 3)).collect();
    let results: Vec<(usize, usize, bool)> = specs
        .par_iter()
        .map(|f| {
            let st = build_flat(f);
            let compatible = compatibility_check(&st.omega0, &st.omega1).is_ok_and(|r| r.all());
            let choices = f.tuple_choices();
            let ok = choices
                .iter()
                .filter(|c| {
                    flat_distribution(f, &st, c)
                        .and_then(|g| Ok(involutivity_check(&g)?))
                        .is_ok_and(|v| v.is_involutive())
                })
                .count();
            (ok, choices.len(), compatible)
        })
        .collect();
    let ok: usize = results.iter().map(|r| r.0).sum();
    let total: usize = results.iter().map(|r| r.1).sum();
    let compatible = results.iter().filter(|r| r.2).count();
    let detail = format!("{ok}/{total} distributions involutive over {compatible}/{} compatible specs", specs.len());
    (ok == total && compatible == specs.len(), detail)
}

fn random_factor<R: Rng>(rng: &mut R) -> Factor {
    const SMALL: [&[usize]; 3] = [&[1], &[2], &[1, 1]];
    if rng.gen_bool(0.5) {
        let ks = SMALL[rng.gen_range(0..SMALL.len())];
        Factor::Turiel(TurielSignature::new(ks.to_vec()).unwrap())
    } else {
        Factor::Flat(flat_spec(rng, 4, 2))
    }
}

/// Outcome of one product: (points matching, points, verdicts matching, verdicts).
fn one_product<R: Rng>(rng: &mut R, points: usize) -> Result<(usize, usize, usize, usize), TurielError> {
    let (factors, report) = loop {
        let factors = [random_factor(rng), random_factor(rng)];
        match product_verdicts(&factors) {
            Ok(r) => break (factors, r),
            Err(TurielError::NonCoprimeFactors(..)) => continue,
            Err(e) => return Err(e),
        }
    };
    let domains: Vec<Option<RatFunc>> = factors
        .iter()
        .map(|f| match f {
            Factor::Turiel(s) => Some(regular_factor(s)),
            Factor::Flat(_) => None,
        })
        .collect();
    let (a, b) = (&report.factors[0], &report.factors[1]);
    let p = &report.product;
    let mut r = (0, 0, 0, 0);
    let mut tries = 0;
    while r.1 < points && tries < 64 {
        tries += 1;
        let (Some((xa, ia)), Some((xb, ib))) =
            (invariants_at(a, domains[0].as_ref(), rng), invariants_at(b, domains[1].as_ref(), rng))
        else {
            continue;
        };
        let ca = ia.jordan_sizes();
        if ib.jordan_sizes().keys().any(|k| ca.contains_key(k)) {
            continue;
        }
        r.1 += 1;
        let x: Vec<Rational> = xa.into_iter().chain(xb).collect();
        let want = JKInvariants::new(ia.blocks.into_iter().chain(ib.blocks).collect());
        if jk_invariants_at_point(&p.omega0, &p.omega1, &x).ok() == Some(want) {
            r.0 += 1;
        }
    }
    r.2 = report.rows.iter().filter(|row| row.agrees()).count();
    r.3 = report.rows.len();
    Ok(r)
}

fn products(cfg: &Config) -> (bool, String) {
    let seeds: Vec<u64> = {
        let mut rng = rng_for(cfg, 8);
        (0..cfg.products).map(|_| rng.gen()).collect()
    };
    let results: Vec<_> =
        seeds.par_iter().map(|&s| one_product(&mut ChaCha8Rng::seed_from_u64(s), cfg.points.max(1))).collect();
    let built = results.iter().filter(|r| r.is_ok()).count();
    let s = results.iter().flatten().fold((0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));
    let ok = built == seeds.len() && s.1 > 0 && s.0 == s.1 && s.2 == s.3;
    let detail = format!(
        "{built}/{} products built, {}/{} point invariants are unions, {}/{} verdicts are conjunctions",
        seeds.len(),
        s.0,
        s.1,
        s.2,
        s.3
    );
    (ok, detail)
}

fn random_fn<R: Rng>(rng: &mut R, n: usize, deg: u32) -> RatFunc {
    random_poly(rng, n, deg, 3).into()
}

fn random_field<R: Rng>(rng: &mut R, chart: &Chart, deg: u32) -> VectorField {
    let comps = (0..chart.dim()).map(|_| random_fn(rng, chart.dim(), deg)).collect();
    VectorField::new(chart, comps).unwrap()
}

fn kernel(cfg: &Config) -> (bool, String) {
    let chart = Chart::new(["a", "b", "c", "d"]).unwrap();
    let n = chart.dim();
    let mut rng = rng_for(cfg, 9);
    let count = cfg.kernel_instances;
    let mut dd = 0;
    let mut jacobi = 0;
    let mut linear = 0;
    for _ in 0..count {
        let mut w = DiffForm::zero(&chart, 1);
        for i in 0..n {
            w.add_term(&[i], &random_fn(&mut rng, n, 3)).unwrap();
        }
        let f = DiffForm::from_function(&chart, random_fn(&mut rng, n, 3));
        let twice =
            |w: &DiffForm| exterior_derivative(w).and_then(|d| exterior_derivative(&d)).is_ok_and(|d| d.is_zero());
        if twice(&w) && twice(&f) {
            dd += 1;
        }

        let [x, y, z] = [0; 3].map(|_| random_field(&mut rng, &chart, 2));
        let br = |u: &VectorField, v: &VectorField| lie_bracket(u, v).unwrap();
        let sum = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
        if sum.is_zero() {
            jacobi += 1;
        }

        let m = Matrix::from_fn(n, n, |_, _| random_fn(&mut rng, n, 1));
        let p = OperatorField::new(&chart, m).unwrap();
        let g = random_fn(&mut rng, n, 2);
        let nxy = nijenhuis(&p, &x, &y).unwrap();
        let left = nijenhuis(&p, &x.scale(&g), &y).unwrap();
        let right = nijenhuis(&p, &x, &y.scale(&g)).unwrap();
        let scaled = nxy.scale(&g);
        if left == scaled && right == scaled {
            linear += 1;
        }
    }
    let ok = dd == count && jacobi == count && linear == count;
    (ok, format!("d∘d = 0 in {dd}/{count}, Jacobi in {jacobi}/{count}, Nijenhuis linear in {linear}/{count}"))
}
