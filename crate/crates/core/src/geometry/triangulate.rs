use crate::error::{Error, Result};

use super::{orient, Point, SimplePolygon};

/// Ear-clipping triangulation of a simple polygon. Triangles are listed
/// counterclockwise by polygon vertex index; `adjacent[t][j]` is the triangle
/// across the edge from corner `j` to corner `j + 1`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub points: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub adjacent: Vec<[Option<usize>; 3]>,
}

fn in_closed_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

fn in_open_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    orient(a, b, p) > 0.0 && orient(b, c, p) > 0.0 && orient(c, a, p) > 0.0
}

impl Triangulation {
    pub fn new(polygon: &SimplePolygon) -> Result<Self> {
        let pts = polygon.vertices().to_vec();
        let m = pts.len();
        let mut next: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let mut prev: Vec<usize> = (0..m).map(|i| (i + m - 1) % m).collect();
        let mut alive = vec![true; m];
        let mut remaining = m;
        let mut triangles = Vec::with_capacity(m);

        // straight boundary vertices carry no triangle
        let mut v = 0;
        let mut stall = 0;
        while remaining > 3 && stall <= remaining {
            if orient(pts[prev[v]], pts[v], pts[next[v]]) == 0.0 {
                let (a, c) = (prev[v], next[v]);
                next[a] = c;
                prev[c] = a;
                alive[v] = false;
                remaining -= 1;
                v = a;
                stall = 0;
            } else {
                v = next[v];
                stall += 1;
            }
        }

        let is_ear = |v: usize, next: &[usize], prev: &[usize], strict: bool| -> bool {
            let (a, b, c) = (pts[prev[v]], pts[v], pts[next[v]]);
            if orient(a, b, c) <= 0.0 {
                return false;
            }
            let (lx, hx) = (a.x.min(b.x).min(c.x), a.x.max(b.x).max(c.x));
            let (ly, hy) = (a.y.min(b.y).min(c.y), a.y.max(b.y).max(c.y));
            let mut w = next[next[v]];
            while w != prev[v] {
                let p = pts[w];
                if p.x >= lx && p.x <= hx && p.y >= ly && p.y <= hy {
                    let hit = if strict { in_open_triangle(a, b, c, p) } else { in_closed_triangle(a, b, c, p) };
                    if hit && p != a && p != c {
                        return false;
                    }
                }
                w = next[w];
            }
            true
        };

        let mut v = (0..m).find(|&i| alive[i]).unwrap_or(0);
        let mut stall = 0;
        let mut strict = false;
        while remaining > 3 {
            let flat = orient(pts[prev[v]], pts[v], pts[next[v]]) == 0.0;
            if flat || is_ear(v, &next, &prev, strict) {
                let (a, c) = (prev[v], next[v]);
                triangles.push([a, v, c]);
                next[a] = c;
                prev[c] = a;
                alive[v] = false;
                remaining -= 1;
                v = a;
                stall = 0;
                strict = false;
                continue;
            }
            v = next[v];
            stall += 1;
            if stall > remaining {
                if strict {
                    return Err(Error::Degenerate("no ear found while triangulating".into()));
                }
                strict = true;
                stall = 0;
            }
        }
        let v = (0..m).find(|&i| alive[i]).unwrap();
        triangles.push([prev[v], v, next[v]]);

        let mut edges: std::collections::HashMap<(usize, usize), (usize, usize)> = std::collections::HashMap::with_capacity(triangles.len() * 3);
        let mut adjacent = vec![[None; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for j in 0..3 {
                let (u, w) = (tri[j], tri[(j + 1) % 3]);
                if let Some((s, k)) = edges.remove(&(w, u)) {
                    adjacent[t][j] = Some(s);
                    adjacent[s][k] = Some(t);
                } else {
                    edges.insert((u, w), (t, j));
                }
            }
        }
        Ok(Triangulation { points: pts, triangles, adjacent })
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    fn degenerate(&self, t: usize) -> bool {
        let [a, b, c] = self.corners(t);
        orient(a, b, c) == 0.0
    }

    /// A triangle containing `p`, or the nearest one if rounding left `p`
    /// just outside every triangle.
    pub fn locate(&self, p: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for t in 0..self.triangles.len() {
            if self.degenerate(t) {
                continue;
            }
            let [a, b, c] = self.corners(t);
            if in_closed_triangle(a, b, c, p) {
                return t;
            }
            let d = segment_distance(a, b, p).min(segment_distance(b, c, p)).min(segment_distance(c, a, p));
            if d < best.0 {
                best = (d, t);
            }
        }
        best.1
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.corners(t);
                (b - a).cross(c - a) / 2.0
            })
            .sum()
    }
}

pub(crate) fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return a.dist(p);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    a.lerp(b, t).dist(p)
}
