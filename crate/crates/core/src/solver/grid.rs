//! Boundary-graded quadtree and its visibility graph.
//!
//! Works in normalized coordinates: the root cell is the unit square
//! `[-1/2, 1/2] × [0, 1]` (upper half-plane) or `[-1/2, 1/2]²` (full plane).
//! Cell corners live on an integer lattice of spacing `2^-UNIT_BITS`, so node
//! identity is exact.

use std::collections::{HashMap, HashSet};

use crate::density::DensityField;
use crate::domain::GapDomain;
use crate::PlanePoint;

pub(crate) const UNIT_BITS: u32 = 40;
const ROOT: i64 = 1 << UNIT_BITS;
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cell {
    x: i64,
    y: i64,
    size: i64,
}

pub(crate) struct GridParams<'a> {
    pub domain: &'a GapDomain,
    pub half_plane: bool,
    pub theta: f64,
    pub s_min: f64,
    /// Cells containing one of these points are refined to `θ·δ(p)`.
    pub points: &'a [PlanePoint],
    pub sixteen: bool,
}

pub(crate) struct Grid {
    oy: f64,
    axis: i64,
    pub nodes: Vec<PlanePoint>,
    keys: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), u32>,
    rows: HashMap<i64, Vec<i64>>,
    cols: HashMap<i64, Vec<i64>>,
    leaves: Vec<Cell>,
    pub adj: Vec<Vec<(u32, f64)>>,
    pub edges: usize,
}

fn unit(k: i64) -> f64 {
    k as f64 / ROOT as f64
}

impl Grid {
    pub fn build(params: &GridParams<'_>, field: &DensityField<'_>) -> Grid {
        let (oy, axis) = if params.half_plane {
            (0.0, 0)
        } else {
            (-0.5, ROOT / 2)
        };
        let mut grid = Grid {
            oy,
            axis,
            nodes: Vec::new(),
            keys: Vec::new(),
            index: HashMap::new(),
            rows: HashMap::new(),
            cols: HashMap::new(),
            leaves: Vec::new(),
            adj: Vec::new(),
            edges: 0,
        };
        grid.subdivide(params);
        grid.collect_nodes(params);
        grid.connect(field);
        grid
    }

    fn rect(&self, c: Cell) -> (f64, f64, f64, f64) {
        (
            unit(c.x) - 0.5,
            unit(c.x + c.size) - 0.5,
            unit(c.y) + self.oy,
            unit(c.y + c.size) + self.oy,
        )
    }

    fn point(&self, (ix, iy): (i64, i64)) -> PlanePoint {
        PlanePoint::new(unit(ix) - 0.5, unit(iy) + self.oy)
    }

    fn should_split(&self, p: &GridParams<'_>, c: Cell, level: u32) -> bool {
        if level < MIN_LEVEL {
            return true;
        }
        if level + 1 >= UNIT_BITS {
            return false;
        }
        let s = unit(c.size);
        if s <= p.s_min {
            return false;
        }
        let (x0, x1, y0, y1) = self.rect(c);
        for q in p.points {
            if x0 <= q.re && q.re <= x1 && y0 <= q.im && q.im <= y1 && s > p.theta * p.domain.delta_value(*q) {
                return true;
            }
        }
        let d = p.domain.rect_distance(x0, x1, y0, y1);
        if d > 0.0 {
            s > p.theta * (d + 0.5 * s)
        } else {
            // resting on the boundary: only resolve the approach to the gaps
            s > p.theta * p.domain.interval_distance_to_gaps(x0, x1)
        }
    }

    fn subdivide(&mut self, p: &GridParams<'_>) {
        let mut stack = vec![(
            Cell {
                x: 0,
                y: 0,
                size: ROOT,
            },
            0u32,
        )];
        while let Some((c, level)) = stack.pop() {
            if self.should_split(p, c, level) {
                let h = c.size / 2;
                // pushed in reverse so leaves come out in a fixed order
                for (dx, dy) in [(h, h), (0, h), (h, 0), (0, 0)] {
                    stack.push((
                        Cell {
                            x: c.x + dx,
                            y: c.y + dy,
                            size: h,
                        },
                        level + 1,
                    ));
                }
            } else {
                self.leaves.push(c);
            }
        }
    }

    fn add_node(&mut self, key: (i64, i64), domain: &GapDomain) {
        if self.index.contains_key(&key) {
            return;
        }
        let z = self.point(key);
        if key.1 == self.axis && !domain.contains(PlanePoint::new(z.re, 0.0)) {
            return;
        }
        let id = self.nodes.len() as u32;
        self.index.insert(key, id);
        self.keys.push(key);
        self.nodes.push(if key.1 == self.axis {
            PlanePoint::new(z.re, 0.0)
        } else {
            z
        });
        self.rows.entry(key.1).or_default().push(key.0);
        self.cols.entry(key.0).or_default().push(key.1);
    }

    fn collect_nodes(&mut self, p: &GridParams<'_>) {
        let leaves = std::mem::take(&mut self.leaves);
        for c in &leaves {
            let (x0, y0, s) = (c.x, c.y, c.size);
            let (x1, y1) = (x0 + s, y0 + s);
            for key in [(x0, y0), (x1, y0), (x0, y1), (x1, y1)] {
                self.add_node(key, p.domain);
            }
            if p.sixteen {
                let (xm, ym) = (x0 + s / 2, y0 + s / 2);
                for key in [(xm, y0), (xm, y1), (x0, ym), (x1, ym)] {
                    self.add_node(key, p.domain);
                }
            }
        }
        self.leaves = leaves;
        for v in self.rows.values_mut() {
            v.sort_unstable();
        }
        for v in self.cols.values_mut() {
            v.sort_unstable();
        }
        self.adj = vec![Vec::new(); self.nodes.len()];
    }

    /// Nodes on the four sides of a cell, each side in increasing order.
    fn sides(&self, c: Cell) -> [Vec<u32>; 4] {
        let (x0, y0) = (c.x, c.y);
        let (x1, y1) = (x0 + c.size, y0 + c.size);
        let along = |map: &HashMap<i64, Vec<i64>>, line: i64, lo: i64, hi: i64, horizontal: bool| -> Vec<u32> {
            let Some(v) = map.get(&line) else {
                return Vec::new();
            };
            let i = v.partition_point(|&t| t < lo);
            v[i..]
                .iter()
                .take_while(|&&t| t <= hi)
                .map(|&t| {
                    let key = if horizontal { (t, line) } else { (line, t) };
                    self.index[&key]
                })
                .collect()
        };
        [
            along(&self.rows, y0, x0, x1, true),
            along(&self.rows, y1, x0, x1, true),
            along(&self.cols, x0, y0, y1, false),
            along(&self.cols, x1, y0, y1, false),
        ]
    }

    fn connect(&mut self, field: &DensityField<'_>) {
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        let leaves = std::mem::take(&mut self.leaves);
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for &c in &leaves {
            let sides = self.sides(c);
            let mut mask: Vec<(u32, u8)> = Vec::new();
            for (k, side) in sides.iter().enumerate() {
                for &id in side {
                    match mask.iter_mut().find(|(n, _)| *n == id) {
                        Some(e) => e.1 |= 1 << k,
                        None => mask.push((id, 1 << k)),
                    }
                }
                for w in side.windows(2) {
                    pairs.push((w[0], w[1]));
                }
            }
            for (i, &(u, mu)) in mask.iter().enumerate() {
                for &(v, mv) in &mask[i + 1..] {
                    if mu & mv == 0 {
                        pairs.push((u, v));
                    }
                }
            }
            for (u, v) in pairs.drain(..) {
                let key = if u < v { (u, v) } else { (v, u) };
                if !seen.insert(key) {
                    continue;
                }
                self.link(key.0, key.1, field);
            }
        }
        self.leaves = leaves;
    }

    fn link(&mut self, u: u32, v: u32, field: &DensityField<'_>) {
        let (a, b) = (self.nodes[u as usize], self.nodes[v as usize]);
        if !field.domain().segment_in_domain(a, b) {
            return;
        }
        let w = field.edge_weight(a, b);
        if !w.is_finite() {
            return;
        }
        self.adj[u as usize].push((v, w));
        self.adj[v as usize].push((u, w));
        self.edges += 1;
    }

    /// Add `z` as a node joined to every node on the boundary of the leaves
    /// containing it. Returns the node id.
    pub fn attach_point(&mut self, z: PlanePoint, field: &DensityField<'_>) -> u32 {
        let kx = (z.re + 0.5) * ROOT as f64;
        let ky = (z.im - self.oy) * ROOT as f64;
        if kx.fract() == 0.0 && ky.fract() == 0.0 {
            if let Some(&id) = self.index.get(&(kx as i64, ky as i64)) {
                return id;
            }
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(z);
        self.adj.push(Vec::new());
        let hosts: Vec<Cell> = self
            .leaves
            .iter()
            .copied()
            .filter(|&c| {
                let (x0, x1, y0, y1) = self.rect(c);
                x0 <= z.re && z.re <= x1 && y0 <= z.im && z.im <= y1
            })
            .collect();
        let mut targets: Vec<u32> = hosts.iter().flat_map(|&c| self.sides(c).concat()).collect();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            self.link(id, t, field);
        }
        id
    }

    /// Lattice nodes on the real axis whose coordinate satisfies `keep`.
    pub fn axis_nodes(&self, keep: impl Fn(f64) -> bool) -> Vec<u32> {
        self.keys
            .iter()
            .enumerate()
            .filter(|(_, k)| k.1 == self.axis)
            .map(|(i, _)| i as u32)
            .filter(|&i| keep(self.nodes[i as usize].re))
            .collect()
    }
}
