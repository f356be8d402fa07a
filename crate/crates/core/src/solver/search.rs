use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    node: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties broken by node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra, stopping at the first target settled. Returns the
/// distance and the node sequence from a source to that target.
pub(crate) fn shortest_path(
    adj: &[Vec<(u32, f64)>],
    sources: &[u32],
    is_target: &[bool],
) -> Option<(f64, Vec<u32>)> {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![u32::MAX; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s as usize] = 0.0;
        heap.push(Entry { dist: 0.0, node: s });
    }
    while let Some(Entry { dist: d, node }) = heap.pop() {
        let u = node as usize;
        if d > dist[u] {
            continue;
        }
        if is_target[u] {
            let mut path = vec![node];
            let mut cur = u;
            while prev[cur] != u32::MAX {
                cur = prev[cur] as usize;
                path.push(cur as u32);
            }
            path.reverse();
            return Some((d, path));
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                prev[v as usize] = node;
                heap.push(Entry { dist: nd, node: v });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_cheapest_of_several_sources() {
        // 0 -1- 2 -1- 3 ; 1 -5- 3
        let adj = vec![
            vec![(2, 1.0)],
            vec![(3, 5.0)],
            vec![(0, 1.0), (3, 1.0)],
            vec![(2, 1.0), (1, 5.0)],
        ];
        let target = [false, false, false, true];
        let (d, p) = shortest_path(&adj, &[0, 1], &target).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(p, vec![0, 2, 3]);
    }

    #[test]
    fn unreachable_target() {
        let adj = vec![vec![], vec![]];
        assert!(shortest_path(&adj, &[0], &[false, true]).is_none());
    }
}
