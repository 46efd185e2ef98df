//! Exit gate: the eleven acceptance checks. Each test prints exactly one
//! `criterion N PASS: …` or `criterion N FAIL: …` line, and the timed
//! criteria enforce their budgets as part of the check.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cohomotopy_core::cohomotopy::{compute, cross_check, g24, pi3_n2_general, CohomotopyResult};
use cohomotopy_core::manifold::{Coefficients, ManifoldDescriptor, TorsionGroup};
use cohomotopy_core::splitting::{
    block_schema, normalize, orbit_oracle, suspension_splitting, AttachingVector, OrbitOptions,
};
use cohomotopy_core::stable::{
    corollary34, taylor_pi_n, two_torsion_epsilon, CorollaryValue, SplitStatus, StableInput,
};
use cohomotopy_core::{FgAbGroup, GroupHom, IntMatrix};

fn criterion<F>(number: u32, body: F)
where
    F: FnOnce() -> String,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(summary) => println!("criterion {number} PASS: {summary}"),
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked without a message".to_string());
            println!("criterion {number} FAIL: {message}");
            resume_unwind(payload);
        }
    }
}

fn within(budget: Duration, start: Instant, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{what} exceeded its time budget: {elapsed:?} > {budget:?}"
    );
}

fn descriptor(n: u32, l: u32, k: u32, c: u32, torsion: Vec<(u64, u32)>) -> ManifoldDescriptor {
    let mut d = ManifoldDescriptor {
        n,
        l,
        k,
        torsion: TorsionGroup::new(torsion),
        spin: true,
        c,
        attach: AttachingVector::default(),
        steenrod: None,
    };
    d.attach = AttachingVector::zero(&block_schema(&d));
    d
}

/// A descriptor with one block filled in; the spin flag follows the
/// obstruction class for six-manifolds.
fn block_case(
    n: u32,
    l: u32,
    k: u32,
    c: u32,
    t3: usize,
    fill: impl FnOnce(&mut AttachingVector),
) -> ManifoldDescriptor {
    let mut d = descriptor(n, l, k, c, vec![(3, 1); t3]);
    fill(&mut d.attach);
    if n == 2 {
        d.spin = d.attach.y.iter().all(|&v| v == 0);
    }
    let violations = d.validate();
    assert!(violations.is_empty(), "fixture is invalid: {violations:?}");
    d
}

const TORSION_CHOICES: [&[(u64, u32)]; 5] =
    [&[], &[(3, 1)], &[(3, 2)], &[(5, 1)], &[(3, 1), (7, 1)]];

/// The full descriptor grid for one `n`: `l, k ≤ 4`, `c ≤ l`, five torsion
/// choices, zero attaching vector.
fn grid(n: u32) -> Vec<ManifoldDescriptor> {
    let mut all = Vec::new();
    for l in 0..=4u32 {
        for k in 0..=4u32 {
            if n == 2 && k % 2 != 0 {
                continue;
            }
            for c in 0..=l {
                for choice in TORSION_CHOICES {
                    all.push(descriptor(n, l, k, c, choice.to_vec()));
                }
            }
        }
    }
    all
}

/// A deterministic, evenly spaced sample of exactly `want` descriptors.
fn stride_sample(all: &[ManifoldDescriptor], want: usize) -> Vec<ManifoldDescriptor> {
    assert!(all.len() >= want);
    (0..want)
        .map(|i| all[i * all.len() / want].clone())
        .collect()
}

fn exact_group(result: &CohomotopyResult) -> &FgAbGroup {
    match result {
        CohomotopyResult::ExactGroup { group, .. } => group,
        other => panic!("expected an exact group, got {other:?}"),
    }
}

/// Degree-3 group of a ten-manifold assembled from nothing but the shape
/// numbers: `(Z/2)^{k+l−c} ⊕ (Z/12)^{l−c} ⊕ (Z/6)^c ⊕ (T ⊗ Z/3)`.
fn independent_degree_three(d: &ManifoldDescriptor) -> FgAbGroup {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for _ in 0..(d.k + d.l - d.c) {
        factors.push((2, 1));
    }
    for _ in 0..(d.l - d.c) {
        factors.push((2, 2));
        factors.push((3, 1));
    }
    for _ in 0..d.c {
        factors.push((2, 1));
        factors.push((3, 1));
    }
    for &(p, _) in d.torsion.factors() {
        if p == 3 {
            factors.push((3, 1));
        }
    }
    FgAbGroup::from_prime_powers(0, factors)
}

#[test]
fn criterion_01_degree_three_closed_form_on_ten_manifolds() {
    criterion(1, || {
        let start = Instant::now();
        let sample = stride_sample(&grid(4), 50);
        for d in &sample {
            let expected = independent_degree_three(d);
            let result = compute(d, 3).unwrap();
            assert_eq!(
                exact_group(&result),
                &expected,
                "closed form mismatch at l={} k={} c={} T={}",
                d.l,
                d.k,
                d.c,
                d.torsion.as_group().display_primary()
            );
        }
        within(Duration::from_secs(1), start, "criterion 1");
        format!(
            "degree-3 closed form matches the independent group assembly on {} ten-manifold descriptors in {:.0?}",
            sample.len(),
            start.elapsed()
        )
    });
}

#[test]
fn criterion_02_rank_one_eight_manifold_table() {
    criterion(2, || {
        for x in 0..24u64 {
            let mut d = descriptor(3, 0, 1, 0, Vec::new());
            d.attach.x[0] = x;
            let expected = if x % 2 == 1 {
                FgAbGroup::from_prime_powers(0, vec![(2, 1)])
            } else if x % 4 == 0 {
                FgAbGroup::from_prime_powers(0, vec![(2, 1), (2, 1)])
            } else {
                FgAbGroup::from_prime_powers(0, vec![(2, 2)])
            };
            let result = compute(&d, 3).unwrap();
            assert_eq!(
                exact_group(&result),
                &expected,
                "wrong degree-3 group for attaching coefficient {x}"
            );
        }
        "all 24 attaching residues give the pinned rank-one degree-3 groups".to_string()
    });
}

/// Minimal valid descriptor with the requested spin type; non-spin
/// six-manifolds need a nonzero obstruction class.
fn spin_case(n: u32, spin: bool) -> ManifoldDescriptor {
    if n == 2 && !spin {
        let mut d = descriptor(2, 1, 0, 0, Vec::new());
        d.attach.y[0] = 1;
        d.spin = false;
        d
    } else {
        let mut d = descriptor(n, 1, 1, 0, Vec::new());
        if n == 2 {
            d.k = 0;
            d = descriptor(2, 1, 0, 0, Vec::new());
        }
        d.spin = spin;
        d
    }
}

#[test]
fn criterion_03_stable_range_degrees() {
    criterion(3, || {
        for n in 2..=4u32 {
            for spin in [true, false] {
                let d = spin_case(n, spin);
                let expected = two_torsion_epsilon(d.epsilon());
                let result = compute(&d, 2 * n + 1).unwrap();
                assert_eq!(
                    exact_group(&result),
                    &expected,
                    "top-degree two-torsion wrong for n={n}, spin={spin}"
                );
            }
        }
        for n in [3u32, 4] {
            for spin in [true, false] {
                let d = spin_case(n, spin);
                let result = compute(&d, 2 * n).unwrap();
                assert_eq!(
                    exact_group(&result),
                    &FgAbGroup::from_prime_powers(0, vec![(2, 1)]),
                    "degree 2n group wrong for n={n}, spin={spin}"
                );
            }
        }
        // Degree 2n−1 is a split sequence over the manifold's own
        // (2n−1)-cohomology.
        let mut witnesses = vec![
            descriptor(3, 1, 2, 0, vec![(3, 1)]),
            descriptor(3, 0, 1, 0, Vec::new()),
            descriptor(4, 2, 1, 1, vec![(3, 2)]),
            descriptor(4, 0, 0, 0, Vec::new()),
        ];
        witnesses[0].attach.x = vec![3, 6];
        witnesses[1].attach.x = vec![5];
        for d in &witnesses {
            let degree = 2 * d.n - 1;
            let table = corollary34(d).unwrap();
            match table.get(&degree) {
                Some(CorollaryValue::Ses(ses)) => {
                    assert_eq!(
                        ses.split,
                        SplitStatus::Yes,
                        "degree {degree} sequence does not split for n={}",
                        d.n
                    );
                    assert_eq!(
                        ses.quot,
                        d.cohomology(degree, Coefficients::Integral),
                        "degree {degree} quotient is not the manifold cohomology"
                    );
                    if let Some(candidates) = compute(d, degree).unwrap().candidate_groups() {
                        let allowed = ses.middle.candidates();
                        assert!(
                            candidates.is_subset(&allowed),
                            "unstable degree-{degree} value falls outside the split sequence"
                        );
                    }
                }
                other => panic!("expected a sequence in degree {degree}, got {other:?}"),
            }
        }
        "two-torsion top degrees, the degree-2n group, and the split degree-(2n−1) sequence all check out".to_string()
    });
}

#[test]
fn criterion_04_gcd_form_matches_cokernels() {
    criterion(4, || {
        let start = Instant::now();
        let mut compared = 0;
        for x in 0..24u64 {
            for u in 0..3u64 {
                for w in 0..3u64 {
                    let s = (x + 8 * u + 8 * w) % 24;
                    // Z/24 has primary generators of orders 8 and 3; the map
                    // out of Z sends the generator to s on both.
                    let hom = GroupHom::new(
                        FgAbGroup::free(1),
                        FgAbGroup::cyclic(24).unwrap(),
                        IntMatrix::from_i64(&[&[s as i64], &[s as i64]]),
                    )
                    .unwrap();
                    assert_eq!(
                        g24(x, u, w),
                        hom.cokernel().unwrap(),
                        "gcd form disagrees with the cokernel at ({x}, {u}, {w})"
                    );
                    compared += 1;
                }
            }
        }
        assert_eq!(compared, 216);
        within(Duration::from_secs(1), start, "criterion 4");
        format!(
            "gcd closed form equals the explicit cokernel on all 216 triples in {:.0?}",
            start.elapsed()
        )
    });
}

#[test]
fn criterion_05_smith_normal_form_properties() {
    criterion(5, || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5311f);
        for round in 0..500 {
            let rows = rng.gen_range(0..=5usize);
            let cols = rng.gen_range(0..=5usize);
            let entries: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect())
                .collect();
            let slices: Vec<&[i64]> = entries.iter().map(|r| r.as_slice()).collect();
            let a = IntMatrix::from_i64(&slices);
            let snf = a.smith_normal_form();
            assert_eq!(
                snf.u.mul(&a).mul(&snf.v),
                snf.d,
                "U·A·V ≠ D in round {round}"
            );
            assert!(snf.u.is_unimodular(), "U not unimodular in round {round}");
            assert!(snf.v.is_unimodular(), "V not unimodular in round {round}");
            let diag = snf.diagonal();
            for i in 0..diag.len() {
                assert!(diag[i] >= 0.into(), "negative diagonal in round {round}");
                if i + 1 < diag.len() && diag[i + 1] != 0.into() {
                    assert!(
                        diag[i] != 0.into() && (&diag[i + 1] % &diag[i]) == 0.into(),
                        "divisibility chain broken in round {round}"
                    );
                }
            }
        }
        within(Duration::from_secs(5), start, "criterion 5");
        format!(
            "500 random matrices factor correctly in {:.0?}",
            start.elapsed()
        )
    });
}

#[test]
fn criterion_06_extension_middles_match_brute_force() {
    criterion(6, || {
        let start = Instant::now();
        let table = common::ExtensionTable::build(64);
        let classes: Vec<FgAbGroup> = table.classes().cloned().collect();
        let bound = num_bigint::BigInt::from(64);
        let mut pairs = 0;
        for sub in &classes {
            for quot in &classes {
                if sub.torsion_order() * quot.torsion_order() > bound {
                    continue;
                }
                let computed = cohomotopy_core::extension::middle_groups(sub, quot).unwrap();
                assert_eq!(
                    computed,
                    table.middles(sub, quot),
                    "middle classification differs for sub={} quot={}",
                    sub.display_primary(),
                    quot.display_primary()
                );
                pairs += 1;
            }
        }
        within(Duration::from_secs(60), start, "criterion 6");
        format!(
            "extension middles match the subgroup-search oracle on {pairs} pairs (orders up to 64) in {:.0?}",
            start.elapsed()
        )
    });
}

/// Certify one fixture: the canonical form must be the colexicographic
/// minimum of the full move orbit, and re-normalizing orbit states must
/// reproduce it. Large orbits get an evenly spaced sample of states (the
/// paired-block normalizer runs its own search per call, so a full sweep
/// would be quadratic); the minimum itself is always included.
fn certify(d: &ManifoldDescriptor, label: &str) -> usize {
    let orbit = orbit_oracle(&d.attach, d, &OrbitOptions::default())
        .unwrap_or_else(|e| panic!("{label}: oracle refused: {e}"));
    let norm = normalize(&d.attach, d);
    let minimum = orbit
        .iter()
        .min_by_key(|v| v.colex_key())
        .cloned()
        .expect("orbit contains its seed");
    assert_eq!(
        norm.vector, minimum,
        "{label}: canonical form is not the orbit minimum"
    );
    let stride = if orbit.len() > 20_000 {
        orbit.len() / 8
    } else {
        1
    };
    for v in orbit.iter().step_by(stride) {
        assert_eq!(
            normalize(v, d).vector,
            norm.vector,
            "{label}: normal form varies over the orbit"
        );
    }
    orbit.len()
}

#[test]
fn criterion_07_normal_form_idempotence_and_orbit_certification() {
    criterion(7, || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f01d);
        let mut idempotent = 0;
        for n in 2..=4u32 {
            for _ in 0..1000 {
                let d = common::random_descriptor_with(n, &mut rng, 2);
                let first = normalize(&d.attach, &d);
                let second = normalize(&first.vector, &d);
                assert_eq!(first, second, "normalize is not idempotent (n={n})");
                assert!(
                    first.vector.colex_key() <= d.attach.colex_key(),
                    "canonical form is not minimal for its input (n={n})"
                );
                idempotent += 1;
            }
        }
        // The paired ten-manifold blocks have their own search-based
        // normalizer; exercise it directly, including one full-module case.
        for seed in 0..30u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut d = descriptor(4, 3, 0, 3, Vec::new());
            d.attach.z = (0..3).map(|_| 4 * rng.gen_range(0..6u64)).collect();
            d.attach.z2 = (0..3).map(|_| rng.gen_range(0..2u64)).collect();
            let first = normalize(&d.attach, &d);
            let second = normalize(&first.vector, &d);
            assert_eq!(
                first, second,
                "paired normalize not idempotent (seed {seed})"
            );
            idempotent += 1;
        }
        let mut full = descriptor(4, 3, 0, 3, Vec::new());
        full.attach.z = vec![1, 5, 7];
        full.attach.z2 = vec![1, 0, 1];
        let first = normalize(&full.attach, &full);
        assert_eq!(
            first,
            normalize(&first.vector, &full),
            "paired normalize not idempotent on a full module"
        );
        idempotent += 1;

        // Orbit certification, block by block, every block type at three
        // entries or fewer.
        let cases: Vec<(ManifoldDescriptor, &str)> = vec![
            (
                block_case(2, 3, 0, 0, 0, |a| a.x = vec![2, 6, 9]),
                "six-manifold x block",
            ),
            (
                block_case(2, 3, 0, 0, 0, |a| a.y = vec![1, 0, 1]),
                "six-manifold y block",
            ),
            (
                block_case(2, 0, 0, 0, 3, |a| a.z = vec![1, 2, 0]),
                "six-manifold z block",
            ),
            (
                block_case(2, 3, 0, 3, 0, |a| a.w = vec![2, 3, 5]),
                "six-manifold w block",
            ),
            (
                block_case(3, 0, 3, 0, 0, |a| a.x = vec![1, 6, 15]),
                "eight-manifold x block",
            ),
            (
                block_case(3, 3, 0, 0, 0, |a| a.y = vec![1, 1, 0]),
                "eight-manifold y block",
            ),
            (
                block_case(3, 3, 0, 3, 0, |a| a.z = vec![1, 0, 1]),
                "eight-manifold z block",
            ),
            (
                block_case(3, 0, 0, 0, 3, |a| a.u = vec![1, 2, 2]),
                "eight-manifold u block",
            ),
            (
                block_case(3, 0, 0, 0, 3, |a| a.w = vec![2, 1, 0]),
                "eight-manifold w block",
            ),
            (
                block_case(4, 3, 0, 0, 0, |a| a.x = vec![1, 6, 15]),
                "ten-manifold x block",
            ),
            (
                block_case(4, 3, 0, 0, 0, |a| a.y = vec![1, 1, 0]),
                "ten-manifold y block",
            ),
            (
                block_case(4, 0, 0, 0, 3, |a| a.w = vec![1, 2, 0]),
                "ten-manifold w block",
            ),
            (
                block_case(4, 2, 0, 2, 0, |a| {
                    a.z = vec![1, 3];
                    a.z2 = vec![0, 1];
                }),
                "ten-manifold paired block, two pairs",
            ),
            (
                block_case(4, 3, 0, 3, 0, |a| {
                    a.z = vec![8, 16, 8];
                    a.z2 = vec![1, 1, 0];
                }),
                "ten-manifold paired block, proper submodule",
            ),
            (
                block_case(4, 4, 0, 3, 0, |a| {
                    a.y = vec![1];
                    a.z = vec![1, 5, 7];
                    a.z2 = vec![1, 0, 1];
                }),
                "ten-manifold paired block with obstruction class",
            ),
            (
                block_case(4, 3, 0, 3, 0, |a| {
                    a.z = vec![1, 5, 7];
                    a.z2 = vec![1, 0, 1];
                }),
                "ten-manifold paired block, full module",
            ),
            // One mixed vector per manifold dimension: every block at once.
            (
                block_case(2, 2, 2, 1, 1, |a| {
                    a.x = vec![7];
                    a.y = vec![1];
                    a.z = vec![2];
                    a.w = vec![4];
                }),
                "six-manifold mixed vector",
            ),
            (
                block_case(3, 2, 2, 1, 1, |a| {
                    a.x = vec![3, 6];
                    a.y = vec![1];
                    a.z = vec![1];
                    a.u = vec![2];
                    a.w = vec![1];
                }),
                "eight-manifold mixed vector",
            ),
            (
                block_case(4, 2, 0, 1, 1, |a| {
                    a.x = vec![6];
                    a.y = vec![1];
                    a.z = vec![4];
                    a.z2 = vec![1];
                    a.w = vec![2];
                }),
                "ten-manifold mixed vector",
            ),
        ];
        let mut states = 0;
        for (d, label) in &cases {
            states += certify(d, label);
        }
        within(Duration::from_secs(120), start, "criterion 7");
        format!(
            "normal form idempotent on {idempotent} vectors; canonical forms certified against {states} oracle orbit states over {} block fixtures in {:.0?}",
            cases.len(),
            start.elapsed()
        )
    });
}

#[test]
fn criterion_08_wedge_homology_matches_the_manifold() {
    criterion(8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
        let mut checked = 0;
        for n in 2..=4u32 {
            for _ in 0..100 {
                let d = common::random_descriptor_with(n, &mut rng, 2);
                let wedge = suspension_splitting(&d);
                let mismatches = wedge.homology_check(&d);
                assert!(
                    mismatches.is_empty(),
                    "wedge homology mismatch (n={n}, l={}, k={}, c={}): {mismatches:?}",
                    d.l,
                    d.k,
                    d.c
                );
                checked += 1;
            }
        }
        format!("suspension splitting reproduces the manifold homology for {checked} random descriptors")
    });
}

#[test]
fn criterion_09_unstable_and_stable_engines_agree() {
    criterion(9, || {
        let mut descriptors = 0;
        let mut comparisons = 0;
        for n in 2..=4u32 {
            for d in stride_sample(&grid(n), 50) {
                for check in cross_check(&d).unwrap() {
                    assert!(
                        check.agrees,
                        "engines disagree at n={n}, degree {}: {}",
                        check.degree, check.detail
                    );
                    comparisons += 1;
                }
                descriptors += 1;
            }
        }
        format!("both engines agree on {comparisons} overlapping degree computations across {descriptors} descriptors")
    });
}

#[test]
fn criterion_10_split_detection_both_directions() {
    criterion(10, || {
        let n = 9u32;
        let build = |sq2_z: &[&[i64]], sq2: &[&[i64]], p: usize, p2: usize, b: usize| {
            let mut input = StableInput::default();
            input.n = n;
            input.dim_bound = n + 1;
            input.integral.insert(n - 1, FgAbGroup::free(p));
            input.integral.insert(n, FgAbGroup::free(1));
            input
                .mod2
                .insert(n - 1, FgAbGroup::from_prime_powers(0, vec![(2, 1); p2]));
            input
                .mod2
                .insert(n + 1, FgAbGroup::from_prime_powers(0, vec![(2, 1); b]));
            let target = input.mod2[&(n + 1)].clone();
            input.sq2_z.insert(
                n - 1,
                GroupHom::new(
                    input.integral[&(n - 1)].clone(),
                    target.clone(),
                    IntMatrix::from_i64(sq2_z),
                )
                .unwrap(),
            );
            input.sq2.insert(
                n - 1,
                GroupHom::new(
                    input.mod2[&(n - 1)].clone(),
                    target,
                    IntMatrix::from_i64(sq2),
                )
                .unwrap(),
            );
            taylor_pi_n(&input).unwrap()
        };
        // Equal images on both operations: the sequence splits.
        let equal = build(&[&[1, 0], &[0, 0]], &[&[1], &[0]], 2, 1, 2);
        assert_eq!(equal.split, SplitStatus::Yes, "equal images must split");
        // Integral image properly inside the mod-2 image: no splitting.
        let smaller_integral = build(&[&[0], &[0]], &[&[1], &[0]], 1, 1, 2);
        assert_eq!(
            smaller_integral.split,
            SplitStatus::No,
            "a strictly smaller integral image must not split"
        );
        // Mod-2 image properly inside the integral image: no splitting.
        let smaller_mod2 = build(&[&[1], &[0]], &[&[0], &[0]], 1, 1, 2);
        assert_eq!(
            smaller_mod2.split,
            SplitStatus::No,
            "a strictly smaller mod-2 image must not split"
        );
        "split detection accepts equal operation images and rejects proper inclusions either way"
            .to_string()
    });
}

#[test]
fn criterion_11_pure_torsion_six_manifolds() {
    criterion(11, || {
        let twelve = FgAbGroup::from_prime_powers(0, vec![(2, 2), (3, 1)]);
        for choice in [vec![(3, 1)], vec![(5, 1)], vec![(3, 2), (7, 1)]] {
            let d = descriptor(2, 0, 0, 0, choice);
            let expected = d.torsion.as_group().direct_sum(&twelve);
            let result = compute(&d, 3).unwrap();
            assert_eq!(
                exact_group(&result),
                &expected,
                "pure-torsion degree-3 group is not T ⊕ Z/12 for T={}",
                d.torsion.as_group().display_primary()
            );
            let general = pi3_n2_general(&d).unwrap();
            let candidates: BTreeSet<FgAbGroup> = general.middle.candidates();
            assert!(
                candidates.contains(&expected),
                "collapsed value missing from the general candidate set for T={}",
                d.torsion.as_group().display_primary()
            );
        }
        "pure-torsion six-manifolds collapse to T ⊕ Z/12, consistent with the general sequence"
            .to_string()
    });
}
