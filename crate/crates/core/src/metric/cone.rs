use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{describe, FiniteMetricSpace, MetricError};
use crate::group::{Ball, Group};

const UNREACHED: u32 = u32::MAX;

/// Multi-source BFS distances in an unweighted graph.
pub fn distances_from(adj: &[Vec<usize>], sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHED; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == UNREACHED {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeOff {
    /// Shortest-path metric of the augmented graph.
    pub space: FiniteMetricSpace<f64>,
    /// Added edges `(x, y)` with `x < y`.
    pub new_edges: Vec<(usize, usize)>,
    /// Distance from each vertex to the orbit in the original graph.
    pub orbit_distance: Vec<u32>,
    /// Pairs left unjoined although some geodesic between them runs through
    /// the outer sphere; a longer ball could change their verdict.
    pub boundary_pairs: usize,
}

impl ConeOff {
    pub fn boundary_warning(&self) -> bool {
        self.boundary_pairs > 0
    }
}

/// Joins every pair `x, y` by an edge when some geodesic from `x` to `y`
/// avoids the closed `a`-neighborhood of the orbit.
///
/// Existence is decided exactly: `y` is joined to `x` iff it is reachable
/// from `x` inside the geodesic DAG of `x` restricted to allowed vertices.
/// The graph must be connected; `outer` marks the vertices on the outer
/// sphere of the ball (may be empty).
pub fn cone_off(
    adj: &[Vec<usize>],
    orbit: &[usize],
    a: f64,
    outer: &[bool],
) -> Result<ConeOff, MetricError> {
    let n = adj.len();
    if n == 0 {
        return Err(MetricError::EmptyDomain);
    }
    if let Some(&bad) = orbit.iter().find(|&&o| o >= n) {
        return Err(MetricError::DomainMiss(describe(&[&bad])));
    }
    let rows: Vec<Vec<u32>> = (0..n).map(|x| distances_from(adj, &[x])).collect();
    if rows[0].contains(&UNREACHED) {
        return Err(MetricError::DomainMiss("graph is not connected".into()));
    }
    let orbit_distance = if orbit.is_empty() {
        vec![UNREACHED; n]
    } else {
        distances_from(adj, orbit)
    };
    let allowed: Vec<bool> = orbit_distance.iter().map(|&d| d as f64 > a).collect();
    let is_outer = |v: usize| outer.get(v).copied().unwrap_or(false);

    let mut extra: Vec<Vec<usize>> = adj.to_vec();
    let mut new_edges = Vec::new();
    let mut boundary_pairs = 0;
    let mut order: Vec<usize> = (0..n).collect();
    for x in 0..n {
        let dx = &rows[x];
        order.sort_by_key(|&v| dx[v]);
        // good[v]: an allowed geodesic from x reaches v
        // touches[v]: some geodesic from x to v has an interior outer vertex
        let mut good = vec![false; n];
        let mut touches = vec![false; n];
        good[x] = allowed[x];
        for &u in &order {
            for &v in &adj[u] {
                if dx[v] == dx[u] + 1 {
                    if good[u] && allowed[v] {
                        good[v] = true;
                    }
                    if touches[u] || (u != x && is_outer(u)) {
                        touches[v] = true;
                    }
                }
            }
        }
        for y in x + 1..n {
            if dx[y] < 2 {
                continue;
            }
            if good[y] {
                new_edges.push((x, y));
                extra[x].push(y);
                extra[y].push(x);
            } else if touches[y] {
                boundary_pairs += 1;
            }
        }
    }
    let space = if new_edges.is_empty() {
        FiniteMetricSpace::from_fn_unchecked(n, |i, j| rows[i][j] as f64)
    } else {
        let rows: Vec<Vec<u32>> = (0..n).map(|x| distances_from(&extra, &[x])).collect();
        FiniteMetricSpace::from_fn_unchecked(n, |i, j| rows[i][j] as f64)
    };
    Ok(ConeOff {
        space,
        new_edges,
        orbit_distance,
        boundary_pairs,
    })
}

/// [`cone_off`] on the Cayley graph of a ball, with `orbit` given as elements.
pub fn cone_off_ball<G: Group>(
    group: &G,
    ball: &Ball<G::Element>,
    orbit: &[G::Element],
    a: f64,
) -> Result<ConeOff, MetricError> {
    let mut idx = Vec::with_capacity(orbit.len());
    for o in orbit {
        idx.push(
            ball.index_of(o)
                .ok_or_else(|| MetricError::DomainMiss(group.render(o)))?,
        );
    }
    let outer: Vec<bool> = (0..ball.len())
        .map(|i| ball.layer(i) == ball.radius())
        .collect();
    cone_off(&ball.graph(group), &idx, a, &outer)
}
