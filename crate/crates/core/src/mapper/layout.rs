use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::graph::BallMapperGraph;
use crate::rng::SplitMix64;

pub type Position = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutConfig {
    /// Target drawing distance between adjacent balls.
    pub rest_length: f64,
    /// Majorization sweeps per component.
    pub iterations: usize,
    /// Horizontal space left between component bounding boxes.
    pub component_gap: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig { rest_length: 1.0, iterations: 300, component_gap: 1.0 }
    }
}

/// Deterministic 2D positions, one per ball (indexed by `id - 1`).
pub fn layout(graph: &BallMapperGraph, seed: u64) -> Vec<Position> {
    layout_with(graph, seed, &LayoutConfig::default())
}

/// Each connected component is drawn by stress majorization towards
/// `rest_length * hop distance`, starting from seeded random positions.
/// Components are then placed left to right in component order, each
/// vertically centred on `y = 0`, so their bounding boxes never overlap.
/// The first component starts at `x = 0`; a lone ball sits at the origin.
pub fn layout_with(graph: &BallMapperGraph, seed: u64, config: &LayoutConfig) -> Vec<Position> {
    let adj = graph.adjacency();
    let mut rng = SplitMix64::new(seed);
    let mut positions = vec![[0.0, 0.0]; graph.ball_count()];
    let mut cursor = 0.0;
    for comp in graph.components() {
        let nodes: Vec<usize> = comp.iter().map(|&id| id as usize - 1).collect();
        let local = majorize(&nodes, &adj, &mut rng, config);
        let (min, max) = bounds(&local);
        let dy = -(min[1] + max[1]) / 2.0;
        for (k, &v) in nodes.iter().enumerate() {
            positions[v] = [local[k][0] - min[0] + cursor, local[k][1] + dy];
        }
        cursor += max[0] - min[0] + config.component_gap;
    }
    positions
}

fn bounds(points: &[Position]) -> (Position, Position) {
    points.iter().fold(([f64::INFINITY, f64::INFINITY], [f64::NEG_INFINITY, f64::NEG_INFINITY]), |(lo, hi), p| {
        ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
    })
}

fn majorize(nodes: &[usize], adj: &[Vec<u32>], rng: &mut SplitMix64, config: &LayoutConfig) -> Vec<Position> {
    let n = nodes.len();
    if n == 1 {
        return vec![[0.0, 0.0]];
    }
    let mut local_index = vec![usize::MAX; adj.len()];
    for (k, &v) in nodes.iter().enumerate() {
        local_index[v] = k;
    }
    // All-pairs hop counts by BFS from each node.
    let mut hops = vec![0usize; n * n];
    for s in 0..n {
        let row = &mut hops[s * n..(s + 1) * n];
        row.fill(usize::MAX);
        row[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[nodes[v]] {
                let w = local_index[w as usize - 1];
                if row[w] == usize::MAX {
                    row[w] = row[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    let spread = config.rest_length * libm::sqrt(n as f64);
    let mut pos: Vec<Position> = (0..n).map(|_| [rng.next_f64() * spread, rng.next_f64() * spread]).collect();

    for _ in 0..config.iterations {
        for i in 0..n {
            let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let target = config.rest_length * hops[i * n + j] as f64;
                let w = 1.0 / (target * target);
                let (dx, dy) = (pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]);
                let dist = libm::sqrt(dx * dx + dy * dy);
                let (ux, uy) = if dist > 0.0 { (dx / dist, dy / dist) } else { (0.0, 0.0) };
                sx += w * (pos[j][0] + target * ux);
                sy += w * (pos[j][1] + target * uy);
                sw += w;
            }
            pos[i] = [sx / sw, sy / sw];
        }
    }
    pos
}
