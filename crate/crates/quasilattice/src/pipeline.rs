//! The three-step pattern construction:
//!
//! 1. **Enumerate** the candidate core F0: lattice vectors in a box whose
//!    physical image lies in the cycle ball B_c and whose internal images lie
//!    in the attractor balls B_(c_j).
//! 2. **Prune** F0 to F1 by repeatedly discarding points without a predecessor
//!    in the successor graph restricted to B_c; what survives is exactly the
//!    intersection of F0 with the maximal self-similar point set.
//! 3. **Extend** F1 (or user seeds) under the expanding maps out to radius
//!    rho, deduplicating by exact coordinates and tracking the number of
//!    predecessors of every retained point.
//!
//! All identity decisions are made on exact integer coordinates; floating
//! moduli are used only against radius thresholds with an inclusive tolerance,
//! because cycle points routinely sit exactly on the bounding circles.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{cyclic_components, CycleReport};
use crate::error::{Error, Result};
use crate::ifs::{compute_bounds, Bounds, IfsSpec};
use crate::ring::RingElement;

/// Inclusive slack for radius filters: a point at distance r is kept when
/// r <= bound * (1 + RADIUS_EPS). Cycle points lie exactly on |x| = c and
/// window boundaries, so strict comparisons would silently drop them.
pub const RADIUS_EPS: f64 = 1e-9;

/// Slack for the extension cutoff radius rho.
pub const RHO_EPS: f64 = 1e-12;

/// Default maximum candidate-lattice size (2N+1)^d before `Intractable`.
pub const DEFAULT_LATTICE_BUDGET: u64 = 100_000_000;

/// Default maximum number of pattern points before `BudgetExceeded`.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// Tunable limits and overrides for a pipeline run.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Skip the stabilization search and use this box half-width.
    pub n_override: Option<u32>,
    /// Number of consecutive equal counts required to accept stabilization.
    pub n_confirm: u32,
    /// Maximum candidate-lattice size for enumeration.
    pub lattice_budget: u64,
    /// Maximum pattern size for extension.
    pub point_budget: u64,
    /// In seeds mode, reject seeds that fail the membership oracle.
    pub strict_seeds: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            n_override: None,
            n_confirm: 1,
            lattice_budget: DEFAULT_LATTICE_BUDGET,
            point_budget: DEFAULT_POINT_BUDGET,
            strict_seeds: false,
        }
    }
}

/// How the extension step was seeded.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedMode {
    /// Seeded with all of F1 — produces the maximal pattern (compact window).
    AllCycles,
    /// Seeded with an explicit list — produces a sub-pattern (restricted window).
    Seeds(Vec<RingElement>),
}

/// Window selection for [`build_model_set`].
#[derive(Debug, Clone)]
pub enum WindowVariant {
    /// Use the whole attractor as the window: extend from F1.
    Compact,
    /// Extend from the given seeds only.
    Seeds(Vec<RingElement>),
}

/// One pattern point: exact element, cached physical position, number of
/// predecessors among the retained points, and structural flags.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub elem: RingElement,
    pub phys: Complex64,
    pub pred_count: u32,
    pub is_core: bool,
    pub is_cyclic: bool,
}

/// A finished, deduplicated point pattern within radius rho.
#[derive(Debug)]
pub struct PatternSet {
    ifs: Arc<IfsSpec>,
    rho: f64,
    seed_mode: SeedMode,
    points: Vec<PointRecord>,
    index: HashMap<Vec<i64>, usize>,
}

impl PatternSet {
    /// Assemble a pattern from prebuilt records (used by the importers).
    /// Records with duplicate coordinates are rejected.
    pub(crate) fn from_parts(
        ifs: Arc<IfsSpec>,
        rho: f64,
        seed_mode: SeedMode,
        points: Vec<PointRecord>,
    ) -> Result<PatternSet> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, rec) in points.iter().enumerate() {
            if index.insert(rec.elem.coords().to_vec(), i).is_some() {
                return Err(Error::Format(format!(
                    "duplicate point {} in imported pattern",
                    rec.elem
                )));
            }
        }
        Ok(PatternSet {
            ifs,
            rho,
            seed_mode,
            points,
            index,
        })
    }

    pub fn ifs(&self) -> &Arc<IfsSpec> {
        &self.ifs
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn seed_mode(&self) -> &SeedMode {
        &self.seed_mode
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointRecord] {
        &self.points
    }

    /// Mutable record access for diagnostics and negative-control experiments
    /// (e.g. deliberately corrupting a predecessor count). The exact
    /// coordinates of a record must not be changed: the lookup index is keyed
    /// on them and is not rebuilt.
    pub fn points_mut(&mut self) -> &mut [PointRecord] {
        &mut self.points
    }

    /// Look up a point by its exact coordinates.
    pub fn get(&self, coords: &[i64]) -> Option<&PointRecord> {
        self.index.get(coords).map(|&i| &self.points[i])
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        self.index.contains_key(x.coords())
    }

    /// Flag the given elements as core (F1) members where present.
    pub fn mark_core<'a>(&mut self, core: impl IntoIterator<Item = &'a RingElement>) {
        for x in core {
            if let Some(&i) = self.index.get(x.coords()) {
                self.points[i].is_core = true;
            }
        }
    }

    /// Flag the given elements as cyclic where present.
    pub fn mark_cyclic<'a>(&mut self, cyclic: impl IntoIterator<Item = &'a RingElement>) {
        for x in cyclic {
            if let Some(&i) = self.index.get(x.coords()) {
                self.points[i].is_cyclic = true;
            }
        }
    }
}

/// The successor relation x -> g_k(x) restricted to a fixed vertex list;
/// vertex i's successors are indices into `elements`.
#[derive(Debug)]
pub struct SuccessorGraph {
    pub elements: Vec<RingElement>,
    pub successors: Vec<Vec<usize>>,
}

/// The complete outcome of [`build_model_set`].
#[derive(Debug)]
pub struct BuildReport {
    pub n: u32,
    pub bounds: Bounds,
    pub f0: Vec<RingElement>,
    pub f1: Vec<RingElement>,
    pub cycles: CycleReport,
    pub pattern: PatternSet,
}

fn lattice_size(degree: usize, n: u32) -> u128 {
    let side = 2 * u128::from(n) + 1;
    let mut total = 1u128;
    for _ in 0..degree {
        total = total.saturating_mul(side);
    }
    total
}

/// Decode lattice index -> coordinate vector in [-n, n]^d, first coordinate
/// most significant, so ascending indices enumerate vectors lexicographically.
fn decode_lattice_index(mut idx: u64, degree: usize, n: u32) -> Vec<i64> {
    let side = u64::from(2 * n + 1);
    let mut coords = vec![0i64; degree];
    for k in (0..degree).rev() {
        coords[k] = (idx % side) as i64 - i64::from(n);
        idx /= side;
    }
    coords
}

fn candidate_filter(ifs: &IfsSpec, bounds: &Bounds, x: &RingElement) -> bool {
    if x.physical().norm() > bounds.c * (1.0 + RADIUS_EPS) {
        return false;
    }
    (0..ifs.field().internal_planes())
        .all(|j| x.internal(j).norm() <= bounds.c_internal[j] * (1.0 + RADIUS_EPS))
}

fn filtered_count(ifs: &Arc<IfsSpec>, bounds: &Bounds, n: u32, budget: u64) -> Result<u64> {
    let degree = ifs.field().degree();
    let total = lattice_size(degree, n);
    if total > u128::from(budget) {
        return Err(Error::Intractable {
            lattice: total,
            budget,
        });
    }
    let count = (0..total as u64)
        .into_par_iter()
        .filter(|&idx| {
            let coords = decode_lattice_index(idx, degree, n);
            let x = ifs.field().from_coords(&coords).expect("degree matches");
            candidate_filter(ifs, bounds, &x)
        })
        .count();
    Ok(count as u64)
}

/// Find the smallest box half-width N whose candidate count is unchanged when
/// N increases by one (`n_confirm` consecutive equal counts when configured).
///
/// For the pentagonal field the result is additionally cross-checked in debug
/// builds against the closed-form quadratic-form bound of
/// [`quadratic_form_bound`].
pub fn determine_n(ifs: &Arc<IfsSpec>, bounds: &Bounds, opts: &BuildOptions) -> Result<u32> {
    let confirm = opts.n_confirm.max(1);
    let mut prev = filtered_count(ifs, bounds, 1, opts.lattice_budget)?;
    let mut run = 0u32;
    let mut n = 1u32;
    loop {
        n += 1;
        let cur = filtered_count(ifs, bounds, n, opts.lattice_budget)?;
        if cur == prev {
            run += 1;
            if run >= confirm {
                let stabilized = n - run;
                if let Some(qf) = quadratic_form_bound(ifs, bounds) {
                    debug_assert!(
                        stabilized <= qf,
                        "stabilized N = {stabilized} exceeds quadratic-form bound {qf}"
                    );
                }
                return Ok(stabilized);
            }
        } else {
            run = 0;
        }
        prev = cur;
    }
}

/// Closed-form coordinate bound for the pentagonal field (degree 4): every
/// candidate satisfies Q(u) = sum u_i^2 + sum_(i<j) (u_i - u_j)^2
/// <= 2(c^2 + c'^2) over the totient coordinates, and minimizing Q for a fixed
/// leading coordinate v gives Q >= v^2 (d+1)/2. Returns the largest admissible
/// integer coordinate, or `None` for other fields.
pub fn quadratic_form_bound(ifs: &Arc<IfsSpec>, bounds: &Bounds) -> Option<u32> {
    if ifs.field().cyclotomic_order() != Some(5) {
        return None;
    }
    let rhs = 2.0
        * (bounds.c * bounds.c
            + bounds
                .c_internal
                .iter()
                .map(|c| c * c)
                .sum::<f64>());
    let d = ifs.field().degree() as f64;
    Some((rhs / ((d + 1.0) / 2.0)).sqrt().floor() as u32)
}

/// Step 1: enumerate the candidate core F0 over the box [-n, n]^d, in
/// deterministic lexicographic order.
pub fn enumerate_core(
    ifs: &Arc<IfsSpec>,
    bounds: &Bounds,
    n: u32,
) -> Result<Vec<RingElement>> {
    enumerate_core_with_budget(ifs, bounds, n, DEFAULT_LATTICE_BUDGET)
}

/// [`enumerate_core`] with an explicit lattice budget.
pub fn enumerate_core_with_budget(
    ifs: &Arc<IfsSpec>,
    bounds: &Bounds,
    n: u32,
    budget: u64,
) -> Result<Vec<RingElement>> {
    let degree = ifs.field().degree();
    let total = lattice_size(degree, n);
    if total > u128::from(budget) {
        return Err(Error::Intractable {
            lattice: total,
            budget,
        });
    }
    let elements: Vec<RingElement> = (0..total as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let coords = decode_lattice_index(idx, degree, n);
            let x = ifs.field().from_coords(&coords).expect("degree matches");
            candidate_filter(ifs, bounds, &x).then_some(x)
        })
        .collect();
    Ok(elements)
}

/// Step 2: prune F0 to F1 by iterated removal of points without predecessors.
///
/// The successor graph keeps an edge x -> g_k(x) whenever the image stays in
/// the ball of radius c; removing a zero-predecessor point first decrements
/// the counts of its successors, and removal repeats until every remaining
/// point has at least one predecessor. The returned graph is the successor
/// relation restricted to the surviving set F1.
pub fn prune_core(f0: &[RingElement], ifs: &IfsSpec) -> (Vec<RingElement>, SuccessorGraph) {
    let bounds = compute_bounds(ifs);
    let limit = bounds.c * (1.0 + RADIUS_EPS);

    let index: HashMap<&[i64], usize> = f0
        .iter()
        .enumerate()
        .map(|(i, x)| (x.coords(), i))
        .collect();

    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); f0.len()];
    let mut pred_count = vec![0u32; f0.len()];
    for (i, x) in f0.iter().enumerate() {
        for k in 0..ifs.map_count() {
            let y = ifs.apply(k, x);
            if y.physical().norm() <= limit {
                if let Some(&j) = index.get(y.coords()) {
                    successors[i].push(j);
                    pred_count[j] += 1;
                }
            }
        }
    }

    let mut alive = vec![true; f0.len()];
    let mut queue: VecDeque<usize> = (0..f0.len()).filter(|&i| pred_count[i] == 0).collect();
    while let Some(i) = queue.pop_front() {
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        for &j in &successors[i] {
            pred_count[j] -= 1;
            if pred_count[j] == 0 && alive[j] {
                queue.push_back(j);
            }
        }
    }

    let mut new_index = vec![usize::MAX; f0.len()];
    let mut f1 = Vec::new();
    for (i, x) in f0.iter().enumerate() {
        if alive[i] {
            new_index[i] = f1.len();
            f1.push(x.clone());
        }
    }
    let graph_successors = (0..f0.len())
        .filter(|&i| alive[i])
        .map(|i| {
            successors[i]
                .iter()
                .filter(|&&j| alive[j])
                .map(|&j| new_index[j])
                .collect()
        })
        .collect();

    (
        f1.clone(),
        SuccessorGraph {
            elements: f1,
            successors: graph_successors,
        },
    )
}

/// Step 3: close the seeds under all forward maps out to radius rho.
///
/// Every retained point's `pred_count` ends up equal to the number of indices
/// k with g_k^(-1)(point) in the pattern, because each retained point is
/// processed exactly once and each in-radius image records one incoming edge.
pub fn extend(
    seeds: &[RingElement],
    ifs: &Arc<IfsSpec>,
    rho: f64,
    point_budget: u64,
) -> Result<PatternSet> {
    extend_tagged(seeds, ifs, rho, point_budget, SeedMode::Seeds(seeds.to_vec()))
}

fn extend_tagged(
    seeds: &[RingElement],
    ifs: &Arc<IfsSpec>,
    rho: f64,
    point_budget: u64,
    seed_mode: SeedMode,
) -> Result<PatternSet> {
    if rho <= 0.0 {
        return Err(Error::InvalidIfs(format!("rho must be positive, got {rho}")));
    }
    let limit = rho * (1.0 + RHO_EPS);
    let mut points: Vec<PointRecord> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let insert = |points: &mut Vec<PointRecord>,
                      index: &mut HashMap<Vec<i64>, usize>,
                      queue: &mut VecDeque<usize>,
                      x: RingElement|
     -> Result<Option<usize>> {
        if let Some(&i) = index.get(x.coords()) {
            return Ok(Some(i));
        }
        let phys = x.physical();
        if phys.norm() > limit {
            return Ok(None);
        }
        if points.len() as u64 >= point_budget {
            return Err(Error::BudgetExceeded {
                points: points.len() as u64 + 1,
                budget: point_budget,
            });
        }
        let i = points.len();
        index.insert(x.coords().to_vec(), i);
        points.push(PointRecord {
            elem: x,
            phys,
            pred_count: 0,
            is_core: false,
            is_cyclic: false,
        });
        queue.push_back(i);
        Ok(Some(i))
    };

    for seed in seeds {
        insert(&mut points, &mut index, &mut queue, seed.clone())?;
    }
    while let Some(i) = queue.pop_front() {
        let x = points[i].elem.clone();
        for k in 0..ifs.map_count() {
            let y = ifs.apply(k, &x);
            if let Some(j) = insert(&mut points, &mut index, &mut queue, y)? {
                points[j].pred_count += 1;
            }
        }
    }

    Ok(PatternSet {
        ifs: Arc::clone(ifs),
        rho,
        seed_mode,
        points,
        index,
    })
}

/// Decide whether `x` belongs to the maximal self-similar set by searching for
/// an inverse-map word from `x` into the cyclic set.
///
/// The search prunes any state whose internal image leaves an attractor ball
/// (inverse words only expand internal moduli, so such a branch can never
/// return) and deduplicates visited states; the remaining state space is a
/// finite set of lattice points, so termination is guaranteed.
pub fn membership_oracle(
    x: &RingElement,
    ifs: &IfsSpec,
    cyclic_set: &HashSet<Vec<i64>>,
) -> bool {
    if cyclic_set.contains(x.coords()) {
        return true;
    }
    let bounds = compute_bounds(ifs);
    let phys_cap = x.physical().norm().max(bounds.c) * (1.0 + RADIUS_EPS);
    let within = |y: &RingElement| -> bool {
        if y.physical().norm() > phys_cap {
            return false;
        }
        (0..ifs.field().internal_planes())
            .all(|j| y.internal(j).norm() <= bounds.c_internal[j] * (1.0 + RADIUS_EPS))
    };
    if !within(x) {
        return false;
    }

    let mut visited: HashSet<Vec<i64>> = HashSet::new();
    visited.insert(x.coords().to_vec());
    let mut stack = vec![x.clone()];
    while let Some(s) = stack.pop() {
        for k in 0..ifs.map_count() {
            let p = ifs.apply_inverse(k, &s);
            if cyclic_set.contains(p.coords()) {
                return true;
            }
            if within(&p) && visited.insert(p.coords().to_vec()) {
                stack.push(p);
            }
        }
    }
    false
}

/// Run the full pipeline: stabilize N (unless overridden), enumerate F0,
/// prune to F1, analyze the cyclic structure, and extend to radius rho from
/// either F1 (compact window) or explicit seeds.
pub fn build_model_set(
    ifs: &Arc<IfsSpec>,
    rho: f64,
    variant: WindowVariant,
    opts: &BuildOptions,
) -> Result<BuildReport> {
    let bounds = compute_bounds(ifs);
    let n = match opts.n_override {
        Some(n) => n.max(1),
        None => determine_n(ifs, &bounds, opts)?,
    };
    let f0 = enumerate_core_with_budget(ifs, &bounds, n, opts.lattice_budget)?;
    let (f1, _) = prune_core(&f0, ifs);
    let cycles = cyclic_components(&f1, ifs);

    let cyclic_coords: HashSet<Vec<i64>> = cycles
        .components
        .iter()
        .flatten()
        .map(|x| x.coords().to_vec())
        .collect();

    let mut pattern = match &variant {
        WindowVariant::Compact => {
            extend_tagged(&f1, ifs, rho, opts.point_budget, SeedMode::AllCycles)?
        }
        WindowVariant::Seeds(seeds) => {
            if opts.strict_seeds {
                for s in seeds {
                    if !membership_oracle(s, ifs, &cyclic_coords) {
                        return Err(Error::InvalidIfs(format!(
                            "seed {s} fails the membership oracle"
                        )));
                    }
                }
            }
            extend_tagged(seeds, ifs, rho, opts.point_budget, SeedMode::Seeds(seeds.clone()))?
        }
    };
    pattern.mark_core(&f1);
    pattern.mark_cyclic(cycles.components.iter().flatten());

    Ok(BuildReport {
        n,
        bounds,
        f0,
        f1,
        cycles,
        pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::make_ifs;
    use crate::ring::FieldSpec;

    const GOLDEN: f64 = 1.618033988749895;

    fn pentagonal_basic() -> Arc<IfsSpec> {
        let f = FieldSpec::cyclotomic(5).unwrap();
        let beta = f.reduce(&[1, 1, 0, 0, 1]);
        let maps = (1..=5).map(|k| f.generator_pow(k)).collect();
        make_ifs(&f, beta, maps).unwrap()
    }

    #[test]
    fn stabilization_finds_n_two_for_pentagonal_basic() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let n = determine_n(&ifs, &bounds, &BuildOptions::default()).unwrap();
        assert_eq!(n, 2);
        // Confirm-twice agrees.
        let opts = BuildOptions {
            n_confirm: 2,
            ..BuildOptions::default()
        };
        assert_eq!(determine_n(&ifs, &bounds, &opts).unwrap(), 2);
    }

    #[test]
    fn quadratic_form_bound_matches_stabilization() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        assert_eq!(quadratic_form_bound(&ifs, &bounds), Some(2));
    }

    #[test]
    fn tiny_budget_reports_intractable() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let opts = BuildOptions {
            lattice_budget: 100,
            ..BuildOptions::default()
        };
        match determine_n(&ifs, &bounds, &opts) {
            Err(Error::Intractable { lattice, budget }) => {
                assert_eq!(lattice, 625); // (2*2+1)^4 at N = 2
                assert_eq!(budget, 100);
            }
            other => panic!("expected Intractable, got {other:?}"),
        }
    }

    #[test]
    fn candidate_core_has_ninety_one_points() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        assert_eq!(f0.len(), 91);
        // The box boundary matters: N = 1 misses some candidates.
        let f0_small = enumerate_core(&ifs, &bounds, 1).unwrap();
        assert_eq!(f0_small.len(), 53);
    }

    #[test]
    fn pruning_keeps_seventy_one_points() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, graph) = prune_core(&f0, &ifs);
        assert_eq!(f1.len(), 71);
        assert_eq!(graph.elements.len(), 71);
        // Every survivor has a predecessor inside the graph.
        let mut preds = vec![0u32; f1.len()];
        for succ in &graph.successors {
            for &j in succ {
                preds[j] += 1;
            }
        }
        assert!(preds.iter().all(|&p| p >= 1));
    }

    #[test]
    fn extension_from_f1_at_radius_c_adds_nothing() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        let pattern = extend(&f1, &ifs, bounds.c, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(pattern.len(), f1.len());
        for x in &f1 {
            assert!(pattern.contains(x));
        }
    }

    #[test]
    fn extension_counts_grow_with_radius() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        let p10 = extend(&f1, &ifs, 10.0, DEFAULT_POINT_BUDGET).unwrap();
        let p20 = extend(&f1, &ifs, 20.0, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(p10.len(), 2036);
        assert_eq!(p20.len(), 8056);
    }

    #[test]
    fn pred_counts_are_exact() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        let pattern = extend(&f1, &ifs, 12.0, DEFAULT_POINT_BUDGET).unwrap();
        for rec in pattern.points() {
            let brute = (0..ifs.map_count())
                .filter(|&k| pattern.contains(&ifs.apply_inverse(k, &rec.elem)))
                .count() as u32;
            assert_eq!(rec.pred_count, brute, "pred count mismatch at {}", rec.elem);
        }
    }

    #[test]
    fn extension_budget_is_enforced() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        match extend(&f1, &ifs, 30.0, 1000) {
            Err(Error::BudgetExceeded { budget, .. }) => assert_eq!(budget, 1000),
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn single_seed_extension_is_sparse() {
        let ifs = pentagonal_basic();
        let f = ifs.field();
        // The fixed point of g_5: -tau.
        let tau = f.reduce(&[1, 1, 0, 0, 1]);
        let pattern = extend(&[tau.neg()], &ifs, 20.0, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(pattern.len(), 364);
    }

    #[test]
    fn oracle_accepts_cycles_and_their_images() {
        let ifs = pentagonal_basic();
        let bounds = compute_bounds(&ifs);
        let f0 = enumerate_core(&ifs, &bounds, 2).unwrap();
        let (f1, _) = prune_core(&f0, &ifs);
        let cycles = cyclic_components(&f1, &ifs);
        let cyclic: HashSet<Vec<i64>> = cycles
            .components
            .iter()
            .flatten()
            .map(|x| x.coords().to_vec())
            .collect();

        let zero = ifs.field().zero();
        assert!(membership_oracle(&zero, &ifs, &cyclic));
        let image = ifs.apply(2, &ifs.apply(0, &zero));
        assert!(membership_oracle(&image, &ifs, &cyclic));
        // A candidate removed by pruning is rejected.
        let removed = f0.iter().find(|x| !f1.contains(x)).unwrap();
        assert!(!membership_oracle(removed, &ifs, &cyclic));
    }

    #[test]
    fn build_report_for_pentagonal_basic() {
        let ifs = pentagonal_basic();
        let report = build_model_set(
            &ifs,
            10.0,
            WindowVariant::Compact,
            &BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(report.n, 2);
        assert_eq!(report.f0.len(), 91);
        assert_eq!(report.f1.len(), 71);
        assert_eq!(report.pattern.len(), 2036);
        assert!((report.bounds.c - GOLDEN).abs() < 1e-9);
        // Core flags are set exactly on F1 members.
        let cores = report
            .pattern
            .points()
            .iter()
            .filter(|p| p.is_core)
            .count();
        assert_eq!(cores, 71);
    }

    #[test]
    fn strict_seed_validation() {
        let ifs = pentagonal_basic();
        let f = ifs.field();
        let opts = BuildOptions {
            strict_seeds: true,
            ..BuildOptions::default()
        };
        // 0 is cyclic: accepted.
        assert!(build_model_set(
            &ifs,
            5.0,
            WindowVariant::Seeds(vec![f.zero()]),
            &opts
        )
        .is_ok());
        // The integer 3 has internal image 3, far outside the attractor
        // ball of radius tau^2: rejected.
        let bad = f.reduce(&[3]);
        assert!(matches!(
            build_model_set(&ifs, 5.0, WindowVariant::Seeds(vec![bad]), &opts),
            Err(Error::InvalidIfs(_))
        ));
    }

    #[test]
    fn degenerate_small_radius_keeps_only_origin() {
        let ifs = pentagonal_basic();
        let report = build_model_set(
            &ifs,
            0.1,
            WindowVariant::Compact,
            &BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(report.pattern.len(), 1);
        assert!(report.pattern.contains(&ifs.field().zero()));
    }
}
