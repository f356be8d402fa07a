//! Polyline shortening by coordinate descent.
//!
//! Each vertex tries small moves along the local normal and tangent (or along
//! the real axis for endpoints constrained to a gap) and keeps a move only if
//! it lowers the summed length of its two segments. Every level ends by
//! inserting segment midpoints, so later levels resolve finer detail.

use crate::density::DensityField;
use crate::PlanePoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum EndRule {
    Fixed,
    /// Slide along the real axis inside the open interval `(lo, hi)`.
    Slide { lo: f64, hi: f64 },
}

pub(crate) struct Refiner<'a, 'b> {
    pub field: &'a DensityField<'b>,
    pub tol: f64,
    pub half_plane: bool,
    pub iters: usize,
    pub seed_vertices: usize,
    pub max_vertices: usize,
    pub start: EndRule,
    pub end: EndRule,
}

pub(crate) struct Refined {
    pub vertices: Vec<PlanePoint>,
    pub length: f64,
    /// Path length after every sweep, one list per subdivision level.
    pub levels: Vec<Vec<f64>>,
}

const LEVEL_RTOL: f64 = 1e-7;
const STEP_FLOOR: f64 = 1e-7;

impl Refiner<'_, '_> {
    pub fn run(&self, seed: &[PlanePoint]) -> Option<Refined> {
        let mut v = self.resample(seed);
        let mut seg = self.lengths(&v)?;
        let mut levels: Vec<Vec<f64>> = Vec::new();
        loop {
            let rec = self.relax(&mut v, &mut seg);
            let cur = *rec.last().unwrap();
            let prev = levels.last().map(|r| *r.last().unwrap());
            levels.push(rec);
            if v.len() >= self.max_vertices {
                break;
            }
            if let Some(p) = prev {
                if p - cur <= LEVEL_RTOL * cur {
                    break;
                }
            }
            self.subdivide(&mut v, &mut seg)?;
        }
        Some(Refined {
            length: seg.iter().sum(),
            vertices: v,
            levels,
        })
    }

    fn seg_len(&self, a: PlanePoint, b: PlanePoint) -> Option<f64> {
        self.field.segment_length(a, b, self.tol)
    }

    fn lengths(&self, v: &[PlanePoint]) -> Option<Vec<f64>> {
        v.windows(2).map(|w| self.seg_len(w[0], w[1])).collect()
    }

    /// Pick about `seed_vertices` seed vertices evenly spaced in metric arc
    /// length, keeping intermediate vertices wherever a chord would leave the
    /// domain.
    fn resample(&self, seed: &[PlanePoint]) -> Vec<PlanePoint> {
        let count = self.seed_vertices.max(2);
        if seed.len() <= count {
            return seed.to_vec();
        }
        let mut cum = vec![0.0];
        for w in seed.windows(2) {
            let last = *cum.last().unwrap();
            cum.push(last + self.field.edge_weight(w[0], w[1]));
        }
        let total = *cum.last().unwrap();
        let mut picks = vec![0usize];
        for k in 1..count - 1 {
            let target = total * k as f64 / (count - 1) as f64;
            let i = cum.partition_point(|&c| c < target).min(seed.len() - 1);
            let i = if i > 0 && target - cum[i - 1] < cum[i] - target {
                i - 1
            } else {
                i
            };
            if i > *picks.last().unwrap() && i < seed.len() - 1 {
                picks.push(i);
            }
        }
        picks.push(seed.len() - 1);
        let domain = self.field.domain();
        let mut out = vec![seed[0]];
        for w in picks.windows(2) {
            let (p, q) = (w[0], w[1]);
            if domain.segment_in_domain(seed[p], seed[q]) {
                out.push(seed[q]);
            } else {
                out.extend_from_slice(&seed[p + 1..=q]);
            }
        }
        out
    }

    fn subdivide(&self, v: &mut Vec<PlanePoint>, seg: &mut Vec<f64>) -> Option<()> {
        let mut nv = Vec::with_capacity(2 * v.len());
        let mut ns = Vec::with_capacity(2 * seg.len());
        for w in v.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            nv.push(w[0]);
            if m != w[0] && m != w[1] {
                nv.push(m);
                ns.push(self.seg_len(w[0], m)?);
                ns.push(self.seg_len(m, w[1])?);
            } else {
                ns.push(self.seg_len(w[0], w[1])?);
            }
        }
        nv.push(*v.last().unwrap());
        *v = nv;
        *seg = ns;
        Some(())
    }

    fn rule(&self, i: usize, n: usize) -> Option<EndRule> {
        if i == 0 {
            Some(self.start)
        } else if i == n - 1 {
            Some(self.end)
        } else {
            None
        }
    }

    fn initial_step(v: &[PlanePoint], i: usize) -> f64 {
        let n = v.len();
        let left = if i > 0 { (v[i] - v[i - 1]).norm() } else { f64::INFINITY };
        let right = if i + 1 < n { (v[i + 1] - v[i]).norm() } else { f64::INFINITY };
        0.25 * left.min(right)
    }

    /// Cost of the segments touching vertex `i` if it moved to `c`.
    fn local_cost(&self, v: &[PlanePoint], i: usize, c: PlanePoint) -> Option<(Option<f64>, Option<f64>)> {
        let n = v.len();
        let left = if i > 0 { Some(self.seg_len(v[i - 1], c)?) } else { None };
        let right = if i + 1 < n { Some(self.seg_len(c, v[i + 1])?) } else { None };
        Some((left, right))
    }

    fn relax(&self, v: &mut [PlanePoint], seg: &mut [f64]) -> Vec<f64> {
        let n = v.len();
        let mut record = vec![seg.iter().sum::<f64>()];
        if n < 2 {
            return record;
        }
        let mut step: Vec<f64> = (0..n).map(|i| Refiner::initial_step(v, i)).collect();
        for _ in 0..self.iters {
            let mut active = false;
            for i in 0..n {
                let rule = self.rule(i, n);
                if rule == Some(EndRule::Fixed) {
                    continue;
                }
                let floor = STEP_FLOOR * Refiner::initial_step(v, i) * 4.0;
                if step[i].partial_cmp(&floor) != Some(std::cmp::Ordering::Greater) {
                    continue;
                }
                active = true;
                let h = step[i];
                let candidates: Vec<PlanePoint> = match rule {
                    Some(EndRule::Slide { lo, hi }) => [v[i].re + h, v[i].re - h]
                        .into_iter()
                        .filter(|&x| lo < x && x < hi)
                        .map(|x| PlanePoint::new(x, 0.0))
                        .collect(),
                    _ => {
                        let t = v[i + 1] - v[i - 1];
                        let t = t / t.norm();
                        let nrm = PlanePoint::new(-t.im, t.re);
                        [v[i] + nrm * h, v[i] - nrm * h, v[i] + t * h, v[i] - t * h]
                            .into_iter()
                            .map(|c| {
                                if self.half_plane && c.im < 0.0 {
                                    PlanePoint::new(c.re, 0.0)
                                } else {
                                    c
                                }
                            })
                            .collect()
                    }
                };
                let old = (if i > 0 { seg[i - 1] } else { 0.0 }) + (if i + 1 < n { seg[i] } else { 0.0 });
                let mut moved = false;
                for c in candidates {
                    if c == v[i] {
                        continue;
                    }
                    let Some((l, r)) = self.local_cost(v, i, c) else {
                        continue;
                    };
                    if l.unwrap_or(0.0) + r.unwrap_or(0.0) < old {
                        v[i] = c;
                        if let Some(l) = l {
                            seg[i - 1] = l;
                        }
                        if let Some(r) = r {
                            seg[i] = r;
                        }
                        moved = true;
                        break;
                    }
                }
                step[i] = if moved {
                    (2.0 * h).min(Refiner::initial_step(v, i).max(h))
                } else {
                    0.5 * h
                };
            }
            record.push(seg.iter().sum());
            if !active {
                break;
            }
        }
        record
    }
}
