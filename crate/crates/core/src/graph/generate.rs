//! Seeded benchmark graph generators.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the spec's seed, so a
//! spec string fully determines the output graph.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GraphError, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// `side × side` grid, weights `2^h` by hop distance `h` to the far corner.
    Grid { side: usize },
    /// Unit-weight uniform spanning tree of a random geometric graph plus one
    /// unit non-tree edge; every other edge is heavy.
    LightTree { n: usize },
    ErdosRenyi { n: usize, p: f64 },
    BarabasiAlbert { n: usize, m: usize },
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    SingleCycle { n: usize },
    Complete { n: usize },
    /// Greedy planar proximity graph on random points: shortest non-crossing
    /// segments first, stopping at `m` edges.
    Proximity { n: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Unit,
    /// Uniform integers in `lo..=hi`.
    Integer { lo: u32, hi: u32 },
    /// Uniform reals in `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSpec {
    pub kind: GeneratorKind,
    /// Ignored by the grid and light-tree kinds, which fix their own weights.
    pub weights: WeightSpec,
    pub seed: Option<u64>,
}

/// Generator internals worth checking against.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct GenMeta {
    pub tree_edges: Vec<(usize, usize)>,
    pub light_non_tree_edge: Option<(usize, usize)>,
    pub heavy_weight: Option<f64>,
    /// Length of the planted minimum cycle when the generator knows it.
    pub planted_gamma: Option<f64>,
    pub far_corner: Option<usize>,
}

impl GraphSpec {
    pub fn new(kind: GeneratorKind) -> Self {
        GraphSpec {
            kind,
            weights: WeightSpec::Unit,
            seed: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn weights(mut self, weights: WeightSpec) -> Self {
        self.weights = weights;
        self
    }

    /// Whether the output depends on the seed.
    pub fn is_random(&self) -> bool {
        let random_weights = !matches!(self.weights, WeightSpec::Unit)
            && !matches!(self.kind, GeneratorKind::Grid { .. } | GeneratorKind::LightTree { .. });
        random_weights
            || matches!(
                self.kind,
                GeneratorKind::LightTree { .. }
                    | GeneratorKind::ErdosRenyi { .. }
                    | GeneratorKind::BarabasiAlbert { .. }
                    | GeneratorKind::WattsStrogatz { .. }
                    | GeneratorKind::Proximity { .. }
            )
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::Grid { side } => write!(f, "grid:{side}")?,
            GeneratorKind::LightTree { n } => write!(f, "light-tree:{n}")?,
            GeneratorKind::ErdosRenyi { n, p } => write!(f, "er:{n}:{p}")?,
            GeneratorKind::BarabasiAlbert { n, m } => write!(f, "ba:{n}:{m}")?,
            GeneratorKind::WattsStrogatz { n, k, beta } => write!(f, "ws:{n}:{k}:{beta}")?,
            GeneratorKind::SingleCycle { n } => write!(f, "cycle:{n}")?,
            GeneratorKind::Complete { n } => write!(f, "complete:{n}")?,
            GeneratorKind::Proximity { n, m } => write!(f, "proximity:{n}:{m}")?,
        }
        match self.weights {
            WeightSpec::Unit => {}
            WeightSpec::Integer { lo, hi } => write!(f, ":weights=int-{lo}-{hi}")?,
            WeightSpec::Uniform { lo, hi } => write!(f, ":weights=uniform-{lo}-{hi}")?,
        }
        if let Some(seed) = self.seed {
            write!(f, ":seed={seed}")?;
        }
        Ok(())
    }
}

fn bad(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidSpec(msg.into())
}

fn num<T: FromStr>(tokens: &[&str], i: usize, what: &str) -> Result<T, GraphError> {
    let tok = tokens
        .get(i)
        .ok_or_else(|| bad(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| bad(format!("{what}: cannot parse {tok:?}")))
}

impl FromStr for WeightSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('-').collect();
        match parts.as_slice() {
            ["unit"] => Ok(WeightSpec::Unit),
            ["int", lo, hi] => {
                let lo: u32 = lo.parse().map_err(|_| bad("int weights: bad lower bound"))?;
                let hi: u32 = hi.parse().map_err(|_| bad("int weights: bad upper bound"))?;
                if lo == 0 || hi < lo {
                    return Err(bad("int weights need 1 <= lo <= hi"));
                }
                Ok(WeightSpec::Integer { lo, hi })
            }
            ["uniform", lo, hi] => {
                let lo: f64 = lo.parse().map_err(|_| bad("uniform weights: bad lower bound"))?;
                let hi: f64 = hi.parse().map_err(|_| bad("uniform weights: bad upper bound"))?;
                if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                    return Err(bad("uniform weights need 0 < lo < hi"));
                }
                Ok(WeightSpec::Uniform { lo, hi })
            }
            _ => Err(bad(format!("unknown weight spec {s:?}"))),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    /// Parses `kind:param:...[:weights=...][:seed=N]`, e.g. `er:100:0.05:seed=3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut positional = Vec::new();
        let mut seed = None;
        let mut weights = WeightSpec::Unit;
        for tok in s.split(':') {
            match tok.split_once('=') {
                Some(("seed", v)) => {
                    seed = Some(v.parse().map_err(|_| bad(format!("bad seed {v:?}")))?)
                }
                Some(("weights" | "w", v)) => weights = v.parse()?,
                Some((k, _)) => return Err(bad(format!("unknown option {k:?}"))),
                None => positional.push(tok),
            }
        }
        let kind = match positional.first().copied() {
            Some("grid") => GeneratorKind::Grid { side: num(&positional, 1, "grid side")? },
            Some("light-tree") => GeneratorKind::LightTree { n: num(&positional, 1, "vertex count")? },
            Some("er") => GeneratorKind::ErdosRenyi {
                n: num(&positional, 1, "vertex count")?,
                p: num(&positional, 2, "edge probability")?,
            },
            Some("ba") => GeneratorKind::BarabasiAlbert {
                n: num(&positional, 1, "vertex count")?,
                m: num(&positional, 2, "attachment count")?,
            },
            Some("ws") => GeneratorKind::WattsStrogatz {
                n: num(&positional, 1, "vertex count")?,
                k: num(&positional, 2, "ring degree")?,
                beta: num(&positional, 3, "rewiring probability")?,
            },
            Some("cycle") => GeneratorKind::SingleCycle { n: num(&positional, 1, "cycle length")? },
            Some("complete" | "k") => GeneratorKind::Complete { n: num(&positional, 1, "vertex count")? },
            Some("proximity") => GeneratorKind::Proximity {
                n: num(&positional, 1, "vertex count")?,
                m: num(&positional, 2, "edge count")?,
            },
            Some(other) => return Err(bad(format!("unknown generator {other:?}"))),
            None => return Err(bad("empty spec")),
        };
        let spec = GraphSpec { kind, weights, seed };
        validate(&spec)?;
        Ok(spec)
    }
}

fn validate(spec: &GraphSpec) -> Result<(), GraphError> {
    match spec.kind {
        GeneratorKind::Grid { side } if side < 2 => Err(bad("grid side must be >= 2")),
        GeneratorKind::LightTree { n } if n < 3 => Err(bad("light-tree needs n >= 3")),
        GeneratorKind::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
            Err(bad("edge probability must lie in [0, 1]"))
        }
        GeneratorKind::BarabasiAlbert { n, m } if m == 0 || n <= m => {
            Err(bad("barabasi-albert needs 1 <= m < n"))
        }
        GeneratorKind::WattsStrogatz { n, k, beta } if k % 2 == 1 || k < 2 || k >= n || !(0.0..=1.0).contains(&beta) => {
            Err(bad("watts-strogatz needs even 2 <= k < n and beta in [0, 1]"))
        }
        GeneratorKind::SingleCycle { n } if n < 3 => Err(bad("cycle needs n >= 3")),
        GeneratorKind::Proximity { n, m } if n < 3 || m > 3 * n - 6 => {
            Err(bad("proximity needs n >= 3 and m <= 3n - 6"))
        }
        _ => Ok(()),
    }
}

pub fn generate(spec: &GraphSpec) -> Result<WeightedGraph, GraphError> {
    generate_with_meta(spec).map(|(g, _)| g)
}

pub fn generate_with_meta(spec: &GraphSpec) -> Result<(WeightedGraph, GenMeta), GraphError> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
    let mut meta = GenMeta::default();
    let (n, pairs, fixed_weights) = match spec.kind {
        GeneratorKind::Grid { side } => {
            let (pairs, weights, corner) = grid(side);
            meta.far_corner = Some(corner);
            meta.planted_gamma = Some(6.0);
            (side * side, pairs, Some(weights))
        }
        GeneratorKind::LightTree { n } => {
            let (pairs, weights) = light_tree(n, &mut rng, &mut meta);
            (n, pairs, Some(weights))
        }
        GeneratorKind::ErdosRenyi { n, p } => (n, erdos_renyi(n, p, &mut rng), None),
        GeneratorKind::BarabasiAlbert { n, m } => (n, barabasi_albert(n, m, &mut rng), None),
        GeneratorKind::WattsStrogatz { n, k, beta } => (n, watts_strogatz(n, k, beta, &mut rng), None),
        GeneratorKind::SingleCycle { n } => (n, (0..n).map(|i| (i, (i + 1) % n)).collect(), None),
        GeneratorKind::Complete { n } => {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            (n, pairs, None)
        }
        GeneratorKind::Proximity { n, m } => {
            let points = random_points(n, &mut rng);
            (n, greedy_planar(&points, m), None)
        }
    };
    let weights = match fixed_weights {
        Some(w) => w,
        None => pairs.iter().map(|_| draw_weight(spec.weights, &mut rng)).collect(),
    };
    let graph = WeightedGraph::from_edges(
        n,
        pairs.iter().zip(&weights).map(|(&(u, v), &w)| (u, v, w)),
    )?;
    Ok((graph, meta))
}

fn draw_weight(spec: WeightSpec, rng: &mut ChaCha8Rng) -> f64 {
    match spec {
        WeightSpec::Unit => 1.0,
        WeightSpec::Integer { lo, hi } => rng.gen_range(lo..=hi) as f64,
        WeightSpec::Uniform { lo, hi } => rng.gen_range(lo..hi),
    }
}

/// Returns edge pairs, weights and the label of the far corner.
fn grid(side: usize) -> (Vec<(usize, usize)>, Vec<f64>, usize) {
    let cell = |i: usize, j: usize| i * side + j;
    let steps = |i: usize, j: usize| {
        let mut out = Vec::with_capacity(4);
        if i > 0 {
            out.push((i - 1, j));
        }
        if i + 1 < side {
            out.push((i + 1, j));
        }
        if j > 0 {
            out.push((i, j - 1));
        }
        if j + 1 < side {
            out.push((i, j + 1));
        }
        out
    };

    // labels follow BFS discovery order from the (0, 0) corner
    let mut label = vec![usize::MAX; side * side];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    label[0] = 0;
    let mut next = 1;
    while let Some((i, j)) = queue.pop_front() {
        for (a, b) in steps(i, j) {
            if label[cell(a, b)] == usize::MAX {
                label[cell(a, b)] = next;
                next += 1;
                queue.push_back((a, b));
            }
        }
    }

    let hops = |i: usize, j: usize| (side - 1 - i) + (side - 1 - j);
    let mut by_label = vec![(0, 0); side * side];
    for i in 0..side {
        for j in 0..side {
            by_label[label[cell(i, j)]] = (i, j);
        }
    }
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    for (u, &(i, j)) in by_label.iter().enumerate() {
        for (a, b) in steps(i, j) {
            let v = label[cell(a, b)];
            if v > u {
                pairs.push((u, v));
                let h = hops(i, j).min(hops(a, b));
                weights.push((1u64 << h) as f64);
            }
        }
    }
    (pairs, weights, label[cell(side - 1, side - 1)])
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Starts from a clique on `m + 1` vertices; each newcomer attaches to `m`
/// distinct vertices picked proportionally to degree.
fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut endpoints = Vec::new();
    for i in 0..=m {
        for j in i + 1..=m {
            pairs.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        targets.sort_unstable();
        for t in targets {
            pairs.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    pairs
}

fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 1..=k / 2 {
        for u in 0..n {
            pairs.push((u, (u + j) % n));
        }
    }
    let mut present: HashSet<(usize, usize)> = pairs.iter().map(|&(a, b)| norm(a, b)).collect();
    for pair in pairs.iter_mut() {
        if rng.gen::<f64>() >= beta {
            continue;
        }
        let (u, old) = *pair;
        // skip saturated vertices instead of looping forever
        let candidates: Vec<usize> = (0..n)
            .filter(|&w| w != u && !present.contains(&norm(u, w)))
            .collect();
        if let Some(&w) = candidates.choose(rng) {
            present.remove(&norm(u, old));
            present.insert(norm(u, w));
            *pair = (u, w);
        }
    }
    pairs
}

fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect()
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Proper crossing of segments `ab` and `cd`; touching at a shared endpoint is allowed.
fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let (d1, d2) = (orient(a, b, c), orient(a, b, d));
    let (d3, d4) = (orient(c, d, a), orient(c, d, b));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn greedy_planar(points: &[(f64, f64)], m: usize) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut candidates: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (dist2(points[i], points[j]), i, j))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(m);
    for &(_, i, j) in &candidates {
        if chosen.len() == m {
            break;
        }
        let crosses = chosen.iter().any(|&(a, b)| {
            a != i && a != j && b != i && b != j
                && segments_cross(points[i], points[j], points[a], points[b])
        });
        if !crosses {
            chosen.push((i, j));
        }
    }
    chosen
}

/// Euclidean minimum spanning tree by Prim's algorithm on the complete graph.
fn euclidean_mst(points: &[(f64, f64)]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, 0usize); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        for v in 0..n {
            if !in_tree[v] {
                let d = dist2(points[current], points[v]);
                if d < best[v].0 {
                    best[v] = (d, current);
                }
            }
        }
        let next = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0))
            .unwrap();
        in_tree[next] = true;
        edges.push((best[next].1, next));
        current = next;
    }
    edges
}

fn light_tree(n: usize, rng: &mut ChaCha8Rng, meta: &mut GenMeta) -> (Vec<(usize, usize)>, Vec<f64>) {
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let points = random_points(n, rng);
    let radius2 = 2.0 * (n as f64).ln() / (std::f64::consts::PI * n as f64);
    let mut set: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if dist2(points[i], points[j]) <= radius2 {
                set.insert((i, j));
            }
        }
    }
    for (a, b) in euclidean_mst(&points) {
        set.insert(norm(a, b));
    }
    // make sure at least one non-tree edge exists
    if set.len() < n {
        let mut extra: Vec<(f64, usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|p| !set.contains(p))
            .map(|(i, j)| (dist2(points[i], points[j]), i, j))
            .collect();
        extra.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(_, i, j) in extra.iter().take(n - set.len()) {
            set.insert((i, j));
        }
    }
    let mut pairs: Vec<(usize, usize)> = set.into_iter().collect();
    pairs.sort_unstable();

    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in &pairs {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let tree = wilson_spanning_tree(&adjacency, rng);
    let tree_set: HashSet<(usize, usize)> = tree.iter().map(|&(a, b)| norm(a, b)).collect();
    let non_tree: Vec<(usize, usize)> = pairs.iter().copied().filter(|p| !tree_set.contains(p)).collect();
    let light = *non_tree.choose(rng).expect("base graph has a non-tree edge");

    let heavy = (n + 1) as f64;
    let weights = pairs
        .iter()
        .map(|p| if tree_set.contains(p) || *p == light { 1.0 } else { heavy })
        .collect();

    let path_len = tree_path_hops(n, &tree, light.0, light.1);
    let mut tree_edges: Vec<(usize, usize)> = tree_set.into_iter().collect();
    tree_edges.sort_unstable();
    meta.tree_edges = tree_edges;
    meta.light_non_tree_edge = Some(light);
    meta.heavy_weight = Some(heavy);
    meta.planted_gamma = Some(path_len as f64 + 1.0);
    (pairs, weights)
}

/// Uniform spanning tree of a connected graph via loop-erased random walks.
fn wilson_spanning_tree(adjacency: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = adjacency.len();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[rng.gen_range(0..n)] = true;
    let mut edges = Vec::with_capacity(n - 1);
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            next[u] = *adjacency[u].choose(rng).expect("connected graph");
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            edges.push((u, next[u]));
            u = next[u];
        }
    }
    edges
}

fn tree_path_hops(n: usize, tree: &[(usize, usize)], from: usize, to: usize) -> usize {
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in tree {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut hops = vec![usize::MAX; n];
    hops[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if hops[v] == usize::MAX {
                hops[v] = hops[u] + 1;
                queue.push_back(v);
            }
        }
    }
    hops[to]
}
