//! Structural diagnostics over pruned cores and finished patterns: cyclic
//! components of the successor graph, decoration statistics (predecessor-count
//! histogram, minimum distances), the neighbor-distance law, and an empirical
//! covering-radius estimate.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::ifs::{compute_bounds, IfsSpec};
use crate::pipeline::PatternSet;
use crate::ring::RingElement;

/// Relative slack used when comparing floating distances against thresholds.
const DIST_EPS: f64 = 1e-9;

/// The cyclic structure of a pruned core.
///
/// `components` are the strongly connected components of the successor
/// relation x -> g_k(x) restricted to F1 that actually contain a directed
/// cycle: size >= 2, or a single vertex with a self-loop (a fixed point of
/// some map). `networks` groups those components further into weakly
/// connected clusters of the successor relation restricted to the cyclic
/// vertices, which is how cycle diagrams are usually drawn. Both lists are
/// deterministically ordered by their minimal coordinate key, and every
/// member list is sorted by coordinates.
#[derive(Debug, Clone)]
pub struct CycleReport {
    pub components: Vec<Vec<RingElement>>,
    pub component_sizes: Vec<usize>,
    pub networks: Vec<Vec<RingElement>>,
    pub network_sizes: Vec<usize>,
    /// Pairs (k, x) with g_k(x) = x exactly, k a zero-based map index.
    pub fixed_points: Vec<(usize, RingElement)>,
    /// Total number of cyclic points.
    pub cyclic_count: usize,
}

/// Decoration statistics of a pattern.
#[derive(Debug, Clone)]
pub struct DecorationStats {
    /// Number of points per predecessor-count value.
    pub histogram: BTreeMap<u32, u64>,
    /// Minimum pairwise distance delta (infinite for patterns of size < 2).
    pub min_distance: f64,
    /// Per predecessor-count class, the minimum nearest-neighbor distance.
    pub per_class_min: BTreeMap<u32, f64>,
}

/// One failure of the neighbor-distance law: an interior point with
/// predecessor count m - allowed has more than `allowed` neighbors strictly
/// closer than the threshold delta * |beta|.
#[derive(Debug, Clone)]
pub struct Violation {
    pub elem: RingElement,
    pub pred_count: u32,
    pub allowed: u32,
    pub found: u32,
    pub nearest: f64,
}

fn tarjan_sccs(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = successors.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut sccs: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        // Explicit frames (vertex, next child position) instead of recursion:
        // cores can be large and the successor graph is deep in places.
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.1 == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if frame.1 < successors[v].len() {
                let w = successors[v][frame.1];
                frame.1 += 1;
                if index[w] == UNSET {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    sccs.push(comp);
                }
                frames.pop();
                if let Some(parent) = frames.last() {
                    let pv = parent.0;
                    low[pv] = low[pv].min(low[v]);
                }
            }
        }
    }
    sccs
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = i;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn sort_groups(mut groups: Vec<Vec<RingElement>>) -> Vec<Vec<RingElement>> {
    for g in &mut groups {
        g.sort_by(|a, b| a.coords().cmp(b.coords()));
    }
    groups.sort_by(|a, b| a[0].coords().cmp(b[0].coords()));
    groups
}

/// Identify the cyclic part of a pruned core F1.
///
/// Builds the successor relation x -> g_k(x) restricted to F1, extracts its
/// strongly connected components, and keeps those containing a directed
/// cycle. Fixed points are detected by exact equality g_k(x) = x.
pub fn cyclic_components(f1: &[RingElement], ifs: &IfsSpec) -> CycleReport {
    let index: HashMap<&[i64], usize> = f1
        .iter()
        .enumerate()
        .map(|(i, x)| (x.coords(), i))
        .collect();

    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); f1.len()];
    let mut fixed_points: Vec<(usize, RingElement)> = Vec::new();
    for (i, x) in f1.iter().enumerate() {
        for k in 0..ifs.map_count() {
            let y = ifs.apply(k, x);
            if y == *x {
                fixed_points.push((k, x.clone()));
            }
            if let Some(&j) = index.get(y.coords()) {
                successors[i].push(j);
            }
        }
    }

    let sccs = tarjan_sccs(&successors);
    let mut cyclic_sccs: Vec<Vec<usize>> = Vec::new();
    for scc in sccs {
        let is_cyclic = scc.len() >= 2 || successors[scc[0]].contains(&scc[0]);
        if is_cyclic {
            cyclic_sccs.push(scc);
        }
    }

    // Weakly connected clusters of the successor relation restricted to the
    // cyclic vertices.
    let mut scc_of: HashMap<usize, usize> = HashMap::new();
    for (c, scc) in cyclic_sccs.iter().enumerate() {
        for &v in scc {
            scc_of.insert(v, c);
        }
    }
    let mut uf = UnionFind::new(cyclic_sccs.len());
    for (&v, &c) in &scc_of {
        for &w in &successors[v] {
            if let Some(&cw) = scc_of.get(&w) {
                uf.union(c, cw);
            }
        }
    }
    let mut network_members: HashMap<usize, Vec<RingElement>> = HashMap::new();
    for (c, scc) in cyclic_sccs.iter().enumerate() {
        let root = uf.find(c);
        network_members
            .entry(root)
            .or_default()
            .extend(scc.iter().map(|&v| f1[v].clone()));
    }

    let components = sort_groups(
        cyclic_sccs
            .iter()
            .map(|scc| scc.iter().map(|&v| f1[v].clone()).collect())
            .collect(),
    );
    let networks = sort_groups(network_members.into_values().collect());
    let component_sizes = components.iter().map(Vec::len).collect();
    let network_sizes = networks.iter().map(Vec::len).collect();
    let cyclic_count = components.iter().map(Vec::len).sum();
    fixed_points.sort_by(|(ka, a), (kb, b)| ka.cmp(kb).then_with(|| a.coords().cmp(b.coords())));

    CycleReport {
        components,
        component_sizes,
        networks,
        network_sizes,
        fixed_points,
        cyclic_count,
    }
}

/// Uniform-grid spatial index over the physical plane. Cell size is half the
/// current minimum-distance estimate, and queries walk outward in Chebyshev
/// rings of cells until no closer point can exist.
struct NnIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Complex64>,
    span: i64,
}

impl NnIndex {
    fn build(points: Vec<Complex64>, estimate: f64) -> NnIndex {
        let cell = (estimate.max(1e-6)) / 2.0;
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut min_ix = i64::MAX;
        let mut max_ix = i64::MIN;
        let mut min_iy = i64::MAX;
        let mut max_iy = i64::MIN;
        for (i, p) in points.iter().enumerate() {
            let key = ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64);
            min_ix = min_ix.min(key.0);
            max_ix = max_ix.max(key.0);
            min_iy = min_iy.min(key.1);
            max_iy = max_iy.max(key.1);
            cells.entry(key).or_default().push(i);
        }
        let span = if points.is_empty() {
            0
        } else {
            (max_ix - min_ix).max(max_iy - min_iy) + 1
        };
        NnIndex {
            cell,
            cells,
            points,
            span,
        }
    }

    /// Distance from `w` to the nearest indexed point, skipping index
    /// `skip` (pass usize::MAX to skip nothing). Infinite if no point qualifies.
    fn nearest(&self, w: Complex64, skip: usize) -> f64 {
        let cx = (w.re / self.cell).floor() as i64;
        let cy = (w.im / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            // Any point in a cell at Chebyshev ring r is at least (r-1)*cell
            // away; once that lower bound exceeds the best find, stop.
            if ring > 0 && (ring - 1) as f64 * self.cell > best {
                break;
            }
            if ring > self.span {
                break;
            }
            self.for_ring(cx, cy, ring, |i| {
                if i != skip {
                    let d = (self.points[i] - w).norm();
                    if d < best {
                        best = d;
                    }
                }
            });
            ring += 1;
        }
        best
    }

    /// Indices of points strictly within `radius` of `w`, skipping `skip`.
    fn within(&self, w: Complex64, radius: f64, skip: usize) -> Vec<usize> {
        let cx = (w.re / self.cell).floor() as i64;
        let cy = (w.im / self.cell).floor() as i64;
        let max_ring = (radius / self.cell).ceil() as i64 + 1;
        let mut found = Vec::new();
        for ring in 0..=max_ring.min(self.span) {
            self.for_ring(cx, cy, ring, |i| {
                if i != skip && (self.points[i] - w).norm() < radius {
                    found.push(i);
                }
            });
        }
        found
    }

    fn for_ring(&self, cx: i64, cy: i64, ring: i64, mut visit: impl FnMut(usize)) {
        let mut scan = |key: (i64, i64)| {
            if let Some(list) = self.cells.get(&key) {
                for &i in list {
                    visit(i);
                }
            }
        };
        if ring == 0 {
            scan((cx, cy));
            return;
        }
        for dx in -ring..=ring {
            scan((cx + dx, cy - ring));
            scan((cx + dx, cy + ring));
        }
        for dy in (1 - ring)..ring {
            scan((cx - ring, cy + dy));
            scan((cx + ring, cy + dy));
        }
    }
}

/// Brute-force minimum pairwise distance over a sample of the first points,
/// used to pick the grid cell size.
fn estimate_min_distance(points: &[Complex64]) -> f64 {
    let sample = points.len().min(1000);
    let mut best = f64::INFINITY;
    for i in 0..sample {
        for j in (i + 1)..sample {
            let d = (points[i] - points[j]).norm();
            if d < best {
                best = d;
            }
        }
    }
    best
}

fn pattern_index(pattern: &PatternSet) -> NnIndex {
    let phys: Vec<Complex64> = pattern.points().iter().map(|p| p.phys).collect();
    let estimate = estimate_min_distance(&phys).min(1.0);
    NnIndex::build(phys, estimate.max(1e-6))
}

/// Histogram of predecessor counts, the minimum pairwise distance delta, and
/// per-class nearest-neighbor minima.
pub fn decoration_stats(pattern: &PatternSet) -> DecorationStats {
    let index = pattern_index(pattern);
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut per_class_min: BTreeMap<u32, f64> = BTreeMap::new();
    let mut min_distance = f64::INFINITY;

    for (i, rec) in pattern.points().iter().enumerate() {
        *histogram.entry(rec.pred_count).or_insert(0) += 1;
        let nn = index.nearest(rec.phys, i);
        if nn < min_distance {
            min_distance = nn;
        }
        let class = per_class_min.entry(rec.pred_count).or_insert(f64::INFINITY);
        if nn < *class {
            *class = nn;
        }
    }

    DecorationStats {
        histogram,
        min_distance,
        per_class_min,
    }
}

/// Check the neighbor-distance law on the interior of a pattern.
///
/// With delta the pattern's minimum distance, m the number of maps, and
/// y an interior point (|y| <= rho - (c + max |z_k|), where predecessor
/// counts are guaranteed exact): a point with m - j predecessors may have at
/// most j neighbors strictly closer than delta * |beta|. Distances are
/// compared against the deflated threshold delta * |beta| * (1 - 1e-9): pairs
/// at exactly the critical distance — which occur throughout these patterns —
/// satisfy the law and must not be flagged by floating rounding.
pub fn check_neighbor_law(pattern: &PatternSet) -> Vec<Violation> {
    let ifs = pattern.ifs();
    if pattern.len() < 2 {
        return Vec::new();
    }
    let index = pattern_index(pattern);
    let mut delta = f64::INFINITY;
    for (i, rec) in pattern.points().iter().enumerate() {
        let nn = index.nearest(rec.phys, i);
        if nn < delta {
            delta = nn;
        }
    }
    if !delta.is_finite() {
        return Vec::new();
    }

    let bounds = compute_bounds(ifs);
    let maxz = ifs
        .translations()
        .iter()
        .map(|z| z.physical().norm())
        .fold(0.0f64, f64::max);
    let interior = pattern.rho() - (bounds.c + maxz);
    let m = ifs.map_count() as u32;
    let beta_mod = ifs.beta().physical().norm();
    let threshold = delta * beta_mod * (1.0 - DIST_EPS);

    let mut violations = Vec::new();
    for (i, rec) in pattern.points().iter().enumerate() {
        if rec.phys.norm() > interior {
            continue;
        }
        let allowed = m.saturating_sub(rec.pred_count);
        let close = index.within(rec.phys, threshold, i);
        if close.len() as u32 > allowed {
            let nearest = close
                .iter()
                .map(|&j| (index.points[j] - rec.phys).norm())
                .fold(f64::INFINITY, f64::min);
            violations.push(Violation {
                elem: rec.elem.clone(),
                pred_count: rec.pred_count,
                allowed,
                found: close.len() as u32,
                nearest,
            });
        }
    }
    violations
}

/// Empirical covering radius: the largest distance from any probe position in
/// the disk of radius rho - (c + max |z_k|) to its nearest pattern point,
/// sampled on a square grid of the given step.
pub fn covering_radius_estimate(pattern: &PatternSet, step: f64) -> f64 {
    if pattern.is_empty() {
        return f64::INFINITY;
    }
    let ifs = pattern.ifs();
    let bounds = compute_bounds(ifs);
    let maxz = ifs
        .translations()
        .iter()
        .map(|z| z.physical().norm())
        .fold(0.0f64, f64::max);
    let interior = pattern.rho() - (bounds.c + maxz);
    if interior <= 0.0 {
        return 0.0;
    }
    let index = pattern_index(pattern);
    let steps = (interior / step).floor() as i64;
    let mut worst = 0.0f64;
    for gy in -steps..=steps {
        for gx in -steps..=steps {
            let w = Complex64::new(gx as f64 * step, gy as f64 * step);
            if w.norm() > interior {
                continue;
            }
            let d = index.nearest(w, usize::MAX);
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}
