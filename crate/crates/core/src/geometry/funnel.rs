use std::collections::VecDeque;

use crate::error::{invalid, Result};

use super::triangulate::{segment_distance, Triangulation};
use super::{orient, Location, Point, SimplePolygon};

/// A shortest path inside a polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub points: Vec<Point>,
    pub length: f64,
    pub complexity: usize,
}

impl GeodesicPath {
    fn from_points(points: Vec<Point>) -> Self {
        let length = crate::spanner::polyline_length(&points);
        let complexity = points.len().saturating_sub(1);
        GeodesicPath { points, length, complexity }
    }
}

/// Answers shortest path queries in one polygon with a triangulation and
/// the funnel algorithm.
#[derive(Debug, Clone)]
pub struct PathFinder {
    polygon: SimplePolygon,
    tri: Triangulation,
    slack: f64,
}

impl PathFinder {
    pub fn new(polygon: &SimplePolygon) -> Result<Self> {
        let (lo, hi) = polygon.bounds();
        Ok(PathFinder {
            polygon: polygon.clone(),
            tri: Triangulation::new(polygon)?,
            slack: 1e-9 * lo.dist(hi).max(1.0),
        })
    }

    pub fn polygon(&self) -> &SimplePolygon {
        &self.polygon
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// Accepts points in the closed polygon and points within rounding
    /// distance of its boundary.
    fn admit(&self, p: Point) -> Result<()> {
        if self.polygon.locate(p) != Location::Outside {
            return Ok(());
        }
        let d = (0..self.polygon.len())
            .map(|i| {
                let (a, b) = self.polygon.edge(i);
                segment_distance(a, b, p)
            })
            .fold(f64::INFINITY, f64::min);
        if d <= self.slack {
            Ok(())
        } else {
            invalid(format!("point ({p}) is outside the polygon"))
        }
    }

    fn sleeve(&self, from: usize, to: usize) -> Vec<(Point, Point)> {
        let n = self.tri.triangles.len();
        let mut back = vec![usize::MAX; n];
        back[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(t) = queue.pop_front() {
            if t == to {
                break;
            }
            for s in self.tri.adjacent[t].iter().flatten() {
                if back[*s] == usize::MAX {
                    back[*s] = t;
                    queue.push_back(*s);
                }
            }
        }
        let mut chain = vec![to];
        while *chain.last().unwrap() != from {
            chain.push(back[*chain.last().unwrap()]);
        }
        chain.reverse();
        chain
            .windows(2)
            .map(|w| {
                let j = (0..3).find(|&j| self.tri.adjacent[w[0]][j] == Some(w[1])).unwrap();
                let tri = self.tri.triangles[w[0]];
                (self.tri.points[tri[(j + 1) % 3]], self.tri.points[tri[j]])
            })
            .collect()
    }

    pub fn shortest_path(&self, p: Point, q: Point) -> Result<GeodesicPath> {
        self.admit(p)?;
        self.admit(q)?;
        if p == q {
            return Ok(GeodesicPath { points: vec![p], length: 0.0, complexity: 0 });
        }
        let tp = self.tri.locate(p);
        let tq = self.tri.locate(q);
        let mut portals = vec![(p, p)];
        if tp != tq {
            portals.extend(self.sleeve(tp, tq));
        }
        portals.push((q, q));
        Ok(GeodesicPath::from_points(tidy(funnel(&portals))))
    }
}

/// Shortest path between two points of `polygon`.
pub fn geodesic_path(polygon: &SimplePolygon, p: Point, q: Point) -> Result<GeodesicPath> {
    PathFinder::new(polygon)?.shortest_path(p, q)
}

/// String pulling over a sequence of `(left, right)` portals.
fn funnel(portals: &[(Point, Point)]) -> Vec<Point> {
    let mut path = vec![portals[0].0];
    let mut apex = portals[0].0;
    let (mut left, mut right) = portals[0];
    let (mut left_i, mut right_i) = (0, 0);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = portals[i];
        if orient(apex, right, r) >= 0.0 {
            if apex == right || orient(apex, left, r) < 0.0 {
                right = r;
                right_i = i;
            } else {
                path.push(left);
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        if orient(apex, left, l) <= 0.0 {
            if apex == left || orient(apex, right, l) > 0.0 {
                left = l;
                left_i = i;
            } else {
                path.push(right);
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    let last = portals[portals.len() - 1].0;
    if *path.last().unwrap() != last {
        path.push(last);
    }
    path
}

/// Drops repeated points and exactly straight interior points.
fn tidy(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if orient(a, b, p) == 0.0 && (b - a).dot(p - b) >= 0.0 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(f64, f64)]) -> SimplePolygon {
        SimplePolygon::new(c.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn convex_gives_segment() {
        let p = poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 3.0), (0.0, 3.0)]);
        let g = geodesic_path(&p, Point::new(0.0, 0.0), Point::new(4.0, 3.0)).unwrap();
        assert_eq!(g.complexity, 1);
        assert_eq!(g.length, 5.0);
        let z = geodesic_path(&p, Point::new(1.0, 1.0), Point::new(1.0, 1.0)).unwrap();
        assert_eq!((z.length, z.complexity), (0.0, 0));
    }

    #[test]
    fn l_shape_bends_at_reflex_corner() {
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let g = geodesic_path(&p, Point::new(1.8, 0.8), Point::new(0.8, 1.8)).unwrap();
        assert_eq!(g.points, vec![Point::new(1.8, 0.8), Point::new(1.0, 1.0), Point::new(0.8, 1.8)]);
        assert_eq!(g.complexity, 2);
        assert!(geodesic_path(&p, Point::new(1.5, 1.5), Point::new(0.5, 0.5)).is_err());
    }
}
