use petgraph::graph::DiGraph;

use crate::rational::Rational;
use crate::space::PointId;
use crate::system::SystemMap;

/// The δ-step relation `x → y` iff `d(f(x), y) < δ`, as sorted adjacency
/// lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepGraph {
    delta: Rational,
    succ: Vec<Vec<PointId>>,
}

pub fn build_step_graph(f: &SystemMap, delta: &Rational) -> StepGraph {
    let space = f.space();
    let succ = space
        .points()
        .map(|x| {
            let fx = f.apply(x);
            space.points().filter(|&y| space.dist(fx, y) < delta).collect()
        })
        .collect();
    StepGraph {
        delta: delta.clone(),
        succ,
    }
}

impl StepGraph {
    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Successors of `x` in ascending order.
    pub fn successors(&self, x: PointId) -> &[PointId] {
        &self.succ[x]
    }

    pub fn has_edge(&self, x: PointId, y: PointId) -> bool {
        self.succ[x].binary_search(&y).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// Whether `seq` follows edges of the graph.
    pub fn is_walk(&self, seq: &[PointId]) -> bool {
        seq.iter().all(|&p| p < self.len()) && seq.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Points reachable from `p` by walks of length ≥ 1, ascending.
    pub fn reach(&self, p: PointId) -> Vec<PointId> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<PointId> = self.succ[p].clone();
        for &y in &stack {
            seen[y] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.len()).filter(|&y| seen[y]).collect()
    }

    /// Strongly connected components, each sorted, ordered by least member.
    pub fn components(&self) -> Vec<Vec<PointId>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.len(), self.edge_count());
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (x, y) in self.edges() {
            g.add_edge(nodes[x], nodes[y], ());
        }
        let mut sccs: Vec<Vec<PointId>> = petgraph::algo::tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<PointId> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        sccs.sort_unstable_by_key(|c| c[0]);
        sccs
    }
}
