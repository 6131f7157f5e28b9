use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::net::EpsilonNet;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::pointcloud::PointCloud;

/// One vertex of the graph: a closed ball of radius epsilon around a landmark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    /// 1-based id in landmark discovery order.
    pub id: u32,
    pub landmark: usize,
    /// Rows inside the ball, ascending.
    pub members: Vec<usize>,
}

impl Ball {
    /// Member count; the vertex weight.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, row: usize) -> bool {
        self.members.binary_search(&row).is_ok()
    }
}

/// The Ball Mapper graph of a cloud at one radius.
///
/// Rows may belong to several balls. Two balls are joined exactly when they
/// share a row. Edges are stored as `(a, b)` with `a < b`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMapperGraph {
    epsilon: f64,
    seed: u64,
    metric: Metric,
    axis_names: Vec<String>,
    n_rows: usize,
    balls: Vec<Ball>,
    edges: Vec<(u32, u32)>,
}

/// Balls and edges of `cloud` for the landmarks of `net`.
///
/// Candidate pairs are restricted to landmarks at most `2 * epsilon` apart,
/// since two closed balls whose centres are farther apart cannot share a
/// row. Each candidate pair is then tested by probing the smaller member
/// list against a hash set of the larger one.
pub fn build_graph(cloud: &PointCloud, net: &EpsilonNet) -> Result<BallMapperGraph> {
    if net.n_rows != cloud.len() {
        return Err(Error::Consistency(alloc::format!(
            "net was built over {} rows, cloud has {}",
            net.n_rows,
            cloud.len()
        )));
    }
    if let Some(&bad) = net.landmarks.iter().find(|&&r| r >= cloud.len()) {
        return Err(Error::Consistency(alloc::format!("landmark row {bad} out of range")));
    }
    let (eps, metric) = (net.epsilon, net.metric);

    let balls: Vec<Ball> = net
        .landmarks
        .iter()
        .enumerate()
        .map(|(i, &landmark)| {
            let centre = cloud.row(landmark);
            let members = (0..cloud.len()).filter(|&r| metric.distance(cloud.row(r), centre) <= eps).collect();
            Ball { id: i as u32 + 1, landmark, members }
        })
        .collect();

    let sets: Vec<HashSet<usize>> = balls.iter().map(|b| b.members.iter().copied().collect()).collect();
    let mut edges = Vec::new();
    for i in 0..balls.len() {
        let ci = cloud.row(balls[i].landmark);
        for j in i + 1..balls.len() {
            if metric.distance(ci, cloud.row(balls[j].landmark)) > 2.0 * eps {
                continue;
            }
            let (small, large) = if balls[i].size() <= balls[j].size() { (i, j) } else { (j, i) };
            if balls[small].members.iter().any(|r| sets[large].contains(r)) {
                edges.push((balls[i].id, balls[j].id));
            }
        }
    }

    Ok(BallMapperGraph {
        epsilon: eps,
        seed: net.seed,
        metric,
        axis_names: cloud.axis_names().to_vec(),
        n_rows: cloud.len(),
        balls,
        edges,
    })
}

/// Edges implied by shared membership, computed row by row.
fn edges_from_members(balls: &[Ball], n_rows: usize) -> Vec<(u32, u32)> {
    let mut owners: Vec<Vec<u32>> = vec![Vec::new(); n_rows];
    for ball in balls {
        for &r in &ball.members {
            owners[r].push(ball.id);
        }
    }
    let mut edges = BTreeSet::new();
    for ids in &owners {
        for (k, &a) in ids.iter().enumerate() {
            for &b in &ids[k + 1..] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    edges.into_iter().collect()
}

impl BallMapperGraph {
    /// Rebuild a graph from serialised parts, checking every structural
    /// invariant: ids `1..=n` in order, non-empty sorted in-range member
    /// lists containing their landmark, full row coverage, and an edge list
    /// equal to the one implied by shared membership.
    pub fn from_parts(
        epsilon: f64,
        seed: u64,
        metric: Metric,
        axis_names: Vec<String>,
        n_rows: usize,
        balls: Vec<Ball>,
        edges: Vec<(u32, u32)>,
    ) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("epsilon must be positive, got {epsilon}")));
        }
        let mut covered = vec![false; n_rows];
        for (i, ball) in balls.iter().enumerate() {
            if ball.id as usize != i + 1 {
                return Err(Error::Consistency(alloc::format!("ball at position {i} has id {}", ball.id)));
            }
            if ball.members.is_empty() || !ball.members.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Consistency(alloc::format!("ball {} members are empty or unsorted", ball.id)));
            }
            if *ball.members.last().unwrap() >= n_rows || !ball.contains(ball.landmark) {
                return Err(Error::Consistency(alloc::format!("ball {} members do not fit the cloud", ball.id)));
            }
            for &r in &ball.members {
                covered[r] = true;
            }
        }
        if let Some(r) = covered.iter().position(|c| !c) {
            return Err(Error::Consistency(alloc::format!("row {r} is not covered by any ball")));
        }
        let mut sorted: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != edges_from_members(&balls, n_rows) {
            return Err(Error::Consistency("edge list does not match shared membership".into()));
        }
        Ok(BallMapperGraph { epsilon, seed, metric, axis_names, n_rows, balls, edges: sorted })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    /// Rows of the cloud the graph covers.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn ball_count(&self) -> usize {
        self.balls.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ball(&self, id: u32) -> Result<&Ball> {
        if id == 0 {
            return Err(Error::UnknownBall(id));
        }
        self.balls.get(id as usize - 1).ok_or(Error::UnknownBall(id))
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Neighbour lists indexed by `id - 1`.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.balls.len()];
        for &(a, b) in &self.edges {
            adj[a as usize - 1].push(b);
            adj[b as usize - 1].push(a);
        }
        adj
    }

    /// Connected components as sorted id lists, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.balls.len()];
        let mut out = Vec::new();
        for start in 0..self.balls.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v as u32 + 1);
                for &w in &adj[v] {
                    let w = w as usize - 1;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `E - V + C`, the number of independent cycles.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.balls.len()
    }

    /// Sum of ball sizes; at least the row count since balls overlap.
    pub fn total_membership(&self) -> usize {
        self.balls.iter().map(Ball::size).sum()
    }

    /// Distinct rows covered by the listed balls, ascending.
    pub fn group_rows(&self, ids: &[u32]) -> Result<Vec<usize>> {
        if ids.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let mut rows = BTreeSet::new();
        for &id in ids {
            rows.extend(self.ball(id)?.members.iter().copied());
        }
        Ok(rows.into_iter().collect())
    }

    pub(crate) fn check_cloud(&self, cloud: &PointCloud) -> Result<()> {
        if cloud.len() != self.n_rows {
            return Err(Error::Consistency(alloc::format!(
                "graph covers {} rows, cloud has {}",
                self.n_rows,
                cloud.len()
            )));
        }
        if cloud.axis_names() != self.axis_names.as_slice() {
            return Err(Error::Consistency("graph and cloud axes differ".into()));
        }
        Ok(())
    }
}
