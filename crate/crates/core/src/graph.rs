//! Small graph routines shared by the kernel and skew-product analyses.
//!
//! Every structural predicate in this crate is decided on zero/non-zero
//! patterns, so the graphs here carry no weights.

/// Strongly connected components of a digraph given as adjacency lists.
///
/// Iterative Tarjan; components come out in reverse topological order of the
/// condensation (sinks first). Vertices inside a component are sorted.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;

    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0usize;

    // (vertex, position in its adjacency list)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }

            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// True iff the digraph has exactly one strongly connected component.
/// The empty graph is not strongly connected.
pub fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    !adj.is_empty() && strongly_connected_components(adj).len() == 1
}

/// Components with no edge leaving them.
pub fn closed_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let components = strongly_connected_components(adj);
    let mut owner = vec![0usize; adj.len()];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            owner[v] = c;
        }
    }
    let mut closed: Vec<Vec<usize>> = components
        .iter()
        .enumerate()
        .filter(|(c, comp)| comp.iter().all(|&v| adj[v].iter().all(|&w| owner[w] == *c)))
        .map(|(_, comp)| comp.clone())
        .collect();
    closed.sort_by_key(|comp| comp[0]);
    closed
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Groups of the given vertices that share a representative.
    pub fn groups(&mut self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut by_root: Vec<(usize, usize)> = vertices.iter().map(|&v| (self.find(v), v)).collect();
        by_root.sort_unstable();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut last_root = None;
        for (root, v) in by_root {
            if last_root != Some(root) {
                out.push(Vec::new());
                last_root = Some(root);
            }
            out.last_mut().unwrap().push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_plus_sink() {
        // 0 <-> 1 -> 2, 2 self-loop
        let adj = vec![vec![1], vec![0, 2], vec![2]];
        let mut sccs = strongly_connected_components(&adj);
        sccs.sort();
        assert_eq!(sccs, vec![vec![0, 1], vec![2]]);
        assert_eq!(closed_components(&adj), vec![vec![2]]);
        assert!(!is_strongly_connected(&adj));
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let mut adj: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n]).collect();
        assert!(is_strongly_connected(&adj));
        adj[n - 1].clear();
        assert_eq!(strongly_connected_components(&adj).len(), n);
    }

    #[test]
    fn empty_graph() {
        assert!(strongly_connected_components(&[]).is_empty());
        assert!(!is_strongly_connected(&[]));
    }

    #[test]
    fn union_find_groups() {
        let mut dsu = DisjointSets::new(5);
        dsu.union(0, 3);
        dsu.union(4, 1);
        let mut groups = dsu.groups(&[0, 1, 2, 3, 4]);
        groups.sort();
        assert_eq!(groups, vec![vec![0, 3], vec![1, 4], vec![2]]);
    }
}
