//! Acceptance suite: one test per release criterion, so the test harness
//! prints one pass/fail line for each.
//!
//! The counts asserted here are the historically reported values for these
//! reference systems. Where exact recomputation disagrees with a reported
//! value, the test still asserts the reported number and its failure message
//! documents the recomputed value and why it differs, so the discrepancy
//! stays visible instead of being silently rebaselined.

mod common;

use std::collections::BTreeSet;
use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use quasilattice::analysis::{
    check_neighbor_law, covering_radius_estimate, cyclic_components, decoration_stats,
};
use quasilattice::ifs::{compute_bounds, make_ifs, IfsSpec};
use quasilattice::pipeline::{
    build_model_set, determine_n, enumerate_core, extend, membership_oracle, prune_core,
    BuildOptions, WindowVariant, RHO_EPS,
};
use quasilattice::ring::{FieldSpec, RingElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    basic_ifs, coherent_ifs, hmv_ifs, negative_ifs, pentagonal_field, scaled_ifs, small_t,
    windowb_ifs, windowb_seeds, GOLDEN,
};

fn coord_set<'a>(elems: impl IntoIterator<Item = &'a RingElement>) -> BTreeSet<Vec<i64>> {
    elems.into_iter().map(|x| x.coords().to_vec()).collect()
}

/// All lattice points of the box [-n, n]^degree.
fn box_candidates(f: &Arc<FieldSpec>, n: i64) -> Vec<RingElement> {
    let d = f.degree();
    let mut out = Vec::new();
    let mut coords = vec![-n; d];
    loop {
        out.push(f.from_coords(&coords).unwrap());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= n {
                break;
            }
            coords[i] = -n;
        }
    }
}

#[test]
fn criterion_01_pentagonal_basic_core_cycles_and_pattern() {
    let start = Instant::now();
    let ifs = basic_ifs();
    let report = build_model_set(&ifs, 30.0, WindowVariant::Compact, &BuildOptions::default())
        .unwrap();
    assert!(
        start.elapsed() < Duration::from_secs(10),
        "runtime target exceeded: {:?}",
        start.elapsed()
    );

    assert_eq!(report.n, 2, "search box stabilizes at N = 2");
    assert_eq!(report.f0.len(), 91, "candidate core");
    assert_eq!(report.f1.len(), 71, "pruned core");
    assert!(
        report.pattern.len() > 8000,
        "pattern within radius 30 has more than 8000 points, got {}",
        report.pattern.len()
    );
    assert_eq!(report.pattern.len(), 18036, "exact pattern count at rho = 30");

    // The small cycles are genuine: -2z - z^3 and -1 - 2z^2 swap under the
    // maps with translations z and z^2.
    let f = ifs.field();
    let a = f.from_coords(&[0, -2, 0, -1]).unwrap();
    let b = f.from_coords(&[-1, 0, -2, 0]).unwrap();
    assert_eq!(ifs.apply(0, &a).coords(), b.coords());
    assert_eq!(ifs.apply(1, &b).coords(), a.coords());
    assert!(
        report
            .cycles
            .components
            .iter()
            .any(|c| c.len() == 2 && c.iter().any(|x| x.coords() == a.coords())),
        "the pair (-2z - z^3, -1 - 2z^2) forms a 2-cycle component"
    );

    let mut sorted = report.cycles.component_sizes.clone();
    sorted.sort_unstable();
    let sizes: BTreeSet<usize> = sorted.iter().copied().collect();
    assert_eq!(
        sizes,
        BTreeSet::from([10, 26]),
        "historically reported cyclic-component sizes are {{10, 26}}, but exact \
         recomputation of the strongly connected components of the successor \
         relation on F1 yields sizes {sorted:?} (five fixed points, five \
         2-cycles, one 5-cycle and one 26-point component; 46 cyclic points in \
         total), and merging those components into connected networks yields \
         sizes {:?}; no grouping of the recomputed cyclic part produces a \
         component of size 10. The small cycles are genuine, as the 2-cycle \
         verified above shows, so they cannot be discarded to reach 10.",
        report.cycles.network_sizes
    );
}

#[test]
fn criterion_02_hmv_decagonal_cycles_are_the_fixed_points() {
    let start = Instant::now();
    let ifs = hmv_ifs();
    let report = build_model_set(&ifs, 50.0, WindowVariant::Compact, &BuildOptions::default())
        .unwrap();
    assert!(
        start.elapsed() < Duration::from_secs(5),
        "runtime target exceeded: {:?}",
        start.elapsed()
    );

    assert_eq!(report.n, 1, "search box stabilizes at N = 1");
    assert_eq!(report.cycles.cyclic_count, 11);
    assert_eq!(report.cycles.fixed_points.len(), 11);
    assert!(
        report.cycles.components.iter().all(|c| c.len() == 1),
        "every cyclic component is a single fixed point"
    );

    // The fixed point of x -> tau^2 x + w is w / (1 - tau^2) = -t w, so the
    // eleven translations {0, +-z^k} give exactly {0, -+t z^k}.
    let f = ifs.field();
    let t = small_t(&f);
    let mut expected = BTreeSet::new();
    expected.insert(f.zero().coords().to_vec());
    for k in 1..=5 {
        let tz = t.try_mul(&f.generator_pow(k)).unwrap();
        expected.insert(tz.coords().to_vec());
        expected.insert(tz.neg().coords().to_vec());
    }
    let actual = coord_set(report.cycles.components.iter().flatten());
    assert_eq!(actual, expected, "cyclic part is exactly {{0, +-t z^k}}");
}

#[test]
fn criterion_03_coherent_core_prunes_points_outside_the_window() {
    let start = Instant::now();
    let ifs = coherent_ifs();
    let bounds = compute_bounds(&ifs);
    let n = determine_n(&ifs, &bounds, &BuildOptions::default()).unwrap();
    let f0 = enumerate_core(&ifs, &bounds, n).unwrap();
    let (f1, _) = prune_core(&f0, &ifs);
    assert!(
        start.elapsed() < Duration::from_secs(10),
        "runtime target exceeded: {:?}",
        start.elapsed()
    );

    assert_eq!(f0.len(), 21, "candidate core");
    assert_eq!(f1.len(), 16, "pruned core");

    let survivors = coord_set(&f1);
    let removed: Vec<&RingElement> = f0
        .iter()
        .filter(|x| !survivors.contains(x.coords()))
        .collect();
    assert_eq!(removed.len(), 5);

    // Pruned points sit clearly outside the attractor: each internal image
    // has larger modulus than most (and in particular some) surviving point.
    let member_moduli: Vec<f64> = f1.iter().map(|x| x.internal(0).norm()).collect();
    for r in &removed {
        let rm = r.internal(0).norm();
        assert!(rm >= 2.6, "removed point {r} has internal modulus {rm:.4}");
        let exceeded = member_moduli.iter().filter(|&&m| m < rm).count();
        assert!(
            exceeded >= 11,
            "removed point {r} (internal modulus {rm:.4}) exceeds only {exceeded} member moduli"
        );
    }
}

#[test]
fn criterion_04_scaled_core_counts() {
    let start = Instant::now();
    let ifs = scaled_ifs();
    let bounds = compute_bounds(&ifs);
    let n = determine_n(&ifs, &bounds, &BuildOptions::default()).unwrap();
    assert_eq!(n, 5, "search box stabilizes at N = 5");
    let side = 2 * u64::from(n) + 1;
    assert_eq!(side.pow(4), 14641, "lattice size at N = 5");

    let f0 = enumerate_core(&ifs, &bounds, n).unwrap();
    let (f1, _) = prune_core(&f0, &ifs);
    assert!(
        start.elapsed() < Duration::from_secs(60),
        "runtime target exceeded: {:?}",
        start.elapsed()
    );

    assert!(
        (900..1000).contains(&f0.len()),
        "candidate core is almost 1000 points, got {}",
        f0.len()
    );
    assert_eq!(f0.len(), 991, "exact candidate count");

    assert_eq!(
        f1.len(),
        900,
        "historically reported pruned-core size is 900 of the almost-1000 \
         candidates; exact recomputation confirms |F0| = 991 but iterated \
         removal of predecessor-free points converges to |F1| = {} after \
         removing 155 candidates rather than 91. Re-pruning the surviving set \
         removes nothing further, so the smaller count is self-consistent: \
         every survivor retains an infinite predecessor chain inside the core.",
        f1.len()
    );
}

#[test]
fn criterion_05_negative_factor_core_counts() {
    let start = Instant::now();
    let basic = basic_ifs();
    let negative = negative_ifs();

    let basic_bounds = compute_bounds(&basic);
    let neg_bounds = compute_bounds(&negative);
    assert!((neg_bounds.c - GOLDEN).abs() < 1e-9, "c = tau");
    assert!(
        (neg_bounds.c_internal[0] - GOLDEN * GOLDEN).abs() < 1e-9,
        "c' = tau^2"
    );
    assert!((neg_bounds.c - basic_bounds.c).abs() < 1e-12);
    assert!((neg_bounds.c_internal[0] - basic_bounds.c_internal[0]).abs() < 1e-12);

    let n_basic = determine_n(&basic, &basic_bounds, &BuildOptions::default()).unwrap();
    let n_neg = determine_n(&negative, &neg_bounds, &BuildOptions::default()).unwrap();
    let f0_basic = enumerate_core(&basic, &basic_bounds, n_basic).unwrap();
    let f0_neg = enumerate_core(&negative, &neg_bounds, n_neg).unwrap();
    assert_eq!(f0_neg.len(), 91, "candidate core matches the basic system");
    assert_eq!(coord_set(&f0_basic), coord_set(&f0_neg), "same candidates");

    let (f1_basic, _) = prune_core(&f0_basic, &basic);
    let (f1_neg, _) = prune_core(&f0_neg, &negative);
    assert!(
        start.elapsed() < Duration::from_secs(10),
        "runtime target exceeded: {:?}",
        start.elapsed()
    );

    // The sign flip changes the surviving set in both directions: the five
    // points t^2 z^k are gained, while the ten members of the five 2-cycles
    // of the positive-factor system lose their predecessor chains.
    let basic_set = coord_set(&f1_basic);
    let neg_set = coord_set(&f1_neg);
    let gained: BTreeSet<Vec<i64>> = neg_set.difference(&basic_set).cloned().collect();
    let lost: BTreeSet<Vec<i64>> = basic_set.difference(&neg_set).cloned().collect();

    let f = basic.field();
    let t2 = small_t(&f).pow(2);
    let expected_gain: BTreeSet<Vec<i64>> = (1..=5)
        .map(|k| t2.try_mul(&f.generator_pow(k)).unwrap().coords().to_vec())
        .collect();
    assert_eq!(gained, expected_gain, "gained points are t^2 z^k");

    let basic_cycles = cyclic_components(&f1_basic, &basic);
    let two_cycle_members: BTreeSet<Vec<i64>> = basic_cycles
        .components
        .iter()
        .filter(|c| c.len() == 2)
        .flatten()
        .map(|x| x.coords().to_vec())
        .collect();
    assert_eq!(two_cycle_members.len(), 10);
    assert_eq!(lost, two_cycle_members, "lost points are the ten 2-cycle members");

    assert_eq!(
        f1_neg.len(),
        76,
        "historically reported pruned-core size is 76, read as five more \
         points than the positive-factor system's 71, and the five gained \
         points t^2 z^k verified above are real; but exact recomputation also \
         finds that the ten 2-cycle members of the positive-factor core stop \
         being cyclic once beta = -tau, so the count is 71 + 5 - 10 = {}. The \
         reported value accounts for the gain and not the loss.",
        f1_neg.len()
    );
}

#[test]
fn criterion_06_minimum_distance_is_t_cubed() {
    let ifs = basic_ifs();
    let report = build_model_set(&ifs, 30.0, WindowVariant::Compact, &BuildOptions::default())
        .unwrap();
    let stats = decoration_stats(&report.pattern);
    let t = GOLDEN - 1.0;
    assert!(
        (stats.min_distance - t.powi(3)).abs() < 1e-9,
        "minimum distance {} differs from t^3 = {}",
        stats.min_distance,
        t.powi(3)
    );
}

#[test]
fn criterion_07_neighbor_law_holds_and_corruption_is_detected() {
    let systems: [(&str, Arc<IfsSpec>); 5] = [
        ("pentagonal-basic", basic_ifs()),
        ("pentagonal-scaled-2", scaled_ifs()),
        ("pentagonal-negative", negative_ifs()),
        ("hmv-decagonal", hmv_ifs()),
        ("coherent-decagonal", coherent_ifs()),
    ];
    for (name, ifs) in &systems {
        let report =
            build_model_set(ifs, 30.0, WindowVariant::Compact, &BuildOptions::default()).unwrap();
        let violations = check_neighbor_law(&report.pattern);
        assert!(
            violations.is_empty(),
            "{name}: {} neighbor-law violations, first: {:?}",
            violations.len(),
            violations.first()
        );
    }

    // Negative control: overstating a predecessor count must be caught.
    let ifs = basic_ifs();
    let report = build_model_set(&ifs, 20.0, WindowVariant::Compact, &BuildOptions::default())
        .unwrap();
    let mut pattern = report.pattern;
    let stats = decoration_stats(&pattern);
    let threshold = stats.min_distance * ifs.beta().physical().norm() * (1.0 - 1e-9);
    let bounds = compute_bounds(&ifs);
    let max_z = ifs
        .translations()
        .iter()
        .map(|z| z.physical().norm())
        .fold(0.0_f64, f64::max);
    let interior = pattern.rho() - (bounds.c + max_z);
    let m = ifs.map_count() as u32;

    let recs = pattern.points();
    let mut victim = None;
    'search: for (i, r) in recs.iter().enumerate() {
        if r.phys.norm() > interior || r.pred_count == m {
            continue;
        }
        for (j, s) in recs.iter().enumerate() {
            if i != j && (r.phys - s.phys).norm() < threshold {
                victim = Some(i);
                break 'search;
            }
        }
    }
    let victim = victim.expect("an interior point with a close neighbor exists");
    pattern.points_mut()[victim].pred_count = m;
    assert!(
        !check_neighbor_law(&pattern).is_empty(),
        "corrupting a predecessor count must produce a violation"
    );
}

#[test]
fn criterion_08_conjugacy_identity_is_exact() {
    // The pentagonal systems share one internal plane; the seventh
    // cyclotomic field adds a two-plane case. beta = 1 + z + z^6 there has
    // physical value 1 + 2cos(2pi/7) and is a Pisot unit.
    let f7 = FieldSpec::cyclotomic(7).unwrap();
    let beta7 = f7
        .one()
        .try_add(&f7.generator())
        .unwrap()
        .try_add(&f7.generator_pow(6))
        .unwrap();
    let maps7 = (1..=7).map(|k| f7.generator_pow(k)).collect();
    let seventh = make_ifs(&f7, beta7, maps7).unwrap();

    let systems = [
        basic_ifs(),
        scaled_ifs(),
        negative_ifs(),
        hmv_ifs(),
        coherent_ifs(),
        seventh,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for ifs in &systems {
        let f = ifs.field();
        for _ in 0..1000 {
            let coords: Vec<i64> = (0..f.degree()).map(|_| rng.gen_range(-20..=20)).collect();
            let x = f.from_coords(&coords).unwrap();
            for j in 0..f.internal_planes() {
                let conj = ifs.conjugate_ifs(j).unwrap();
                let sigma_x = f.apply_automorphism(&x, j).unwrap();
                for k in 0..ifs.map_count() {
                    let lhs = f.apply_automorphism(&ifs.apply(k, &x), j).unwrap();
                    let rhs = conj.apply(k, &sigma_x);
                    assert_eq!(
                        lhs.coords(),
                        rhs.coords(),
                        "conjugating after the map must equal mapping the conjugate"
                    );
                }
            }
        }
    }
}

#[test]
fn criterion_09_membership_oracle_matches_the_extension() {
    for ifs in [basic_ifs(), hmv_ifs()] {
        let bounds = compute_bounds(&ifs);
        let n = determine_n(&ifs, &bounds, &BuildOptions::default()).unwrap();
        let f0 = enumerate_core(&ifs, &bounds, n).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        let cycles = cyclic_components(&f1, &ifs);
        let cyclic_coords: HashSet<Vec<i64>> = cycles
            .components
            .iter()
            .flatten()
            .map(|x| x.coords().to_vec())
            .collect();

        // Extend far enough that membership below radius 8 is decided
        // exactly, then compare against the direct inverse-orbit search.
        let max_z = ifs
            .translations()
            .iter()
            .map(|z| z.physical().norm())
            .fold(0.0_f64, f64::max);
        let radius = 8.0 * ifs.beta().physical().norm() + max_z;
        let pattern = extend(&f1, &ifs, radius, 10_000_000).unwrap();

        for x in box_candidates(ifs.field(), i64::from(n)) {
            if x.physical().norm() > 8.0 {
                continue;
            }
            let by_oracle = membership_oracle(&x, &ifs, &cyclic_coords);
            let by_extension = pattern.contains(&x);
            assert_eq!(
                by_oracle, by_extension,
                "oracle and extension disagree at {x}"
            );
        }
    }
}

#[test]
fn criterion_10_closure_and_predecessor_exactness() {
    let f = pentagonal_field();
    let jobs: Vec<(&str, Arc<IfsSpec>, WindowVariant)> = vec![
        ("pentagonal-basic", basic_ifs(), WindowVariant::Compact),
        ("pentagonal-scaled-2", scaled_ifs(), WindowVariant::Compact),
        ("pentagonal-negative", negative_ifs(), WindowVariant::Compact),
        ("hmv-decagonal", hmv_ifs(), WindowVariant::Compact),
        ("coherent-decagonal", coherent_ifs(), WindowVariant::Compact),
        (
            "hmv-open-window",
            hmv_ifs(),
            WindowVariant::Seeds(vec![f.zero()]),
        ),
        (
            "coherent-decagonal-windowB",
            windowb_ifs(),
            WindowVariant::Seeds(windowb_seeds()),
        ),
    ];

    for (name, ifs, variant) in jobs {
        let report =
            build_model_set(&ifs, 20.0, variant, &BuildOptions::default()).unwrap();
        let pattern = &report.pattern;
        let cutoff = pattern.rho() * (1.0 + RHO_EPS);
        for rec in pattern.points() {
            for k in 0..ifs.map_count() {
                let y = ifs.apply(k, &rec.elem);
                if y.physical().norm() <= cutoff {
                    assert!(
                        pattern.contains(&y),
                        "{name}: pattern is not closed at {} -> {y}",
                        rec.elem
                    );
                }
            }
            let recount = (0..ifs.map_count())
                .filter(|&k| pattern.contains(&ifs.apply_inverse(k, &rec.elem)))
                .count() as u32;
            assert_eq!(
                rec.pred_count, recount,
                "{name}: predecessor count mismatch at {}",
                rec.elem
            );
        }
    }
}

#[test]
fn criterion_11_desk_scale_proxies_for_excluded_properties() {
    // Diffraction spectra, attractor areas and overlap fractions, and
    // tiling-class identification all need measure-theoretic computation
    // beyond a point-set library. Their finite stand-ins are checked here:
    // uniform discreteness (a positive minimum distance) and relative
    // density (a finite covering radius) of the constructed pattern.
    let ifs = basic_ifs();
    let report = build_model_set(&ifs, 30.0, WindowVariant::Compact, &BuildOptions::default())
        .unwrap();
    let stats = decoration_stats(&report.pattern);
    assert!(
        stats.min_distance > 0.2,
        "uniform discreteness proxy: min distance {}",
        stats.min_distance
    );
    let covering = covering_radius_estimate(&report.pattern, 0.05);
    assert!(
        covering.is_finite() && covering > 0.1 && covering < 1.0,
        "relative density proxy: covering radius estimate {covering}"
    );
}
