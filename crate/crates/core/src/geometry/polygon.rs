use crate::error::{invalid, Result};

use super::{on_segment, orient, properly_cross, segments_touch, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon given by its vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
    min: Point,
    max: Point,
}

fn bbox_overlap(a: Point, b: Point, c: Point, d: Point) -> bool {
    a.x.min(b.x) <= c.x.max(d.x) && c.x.min(d.x) <= a.x.max(b.x) && a.y.min(b.y) <= c.y.max(d.y) && c.y.min(d.y) <= a.y.max(b.y)
}

impl SimplePolygon {
    /// Validates simplicity, orientation and the absence of repeated
    /// consecutive vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return invalid(format!("polygon needs at least 3 vertices, got {m}"));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return invalid("polygon has a non-finite coordinate");
        }
        for i in 0..m {
            if vertices[i] == vertices[(i + 1) % m] {
                return invalid(format!("vertex {i} repeats its successor"));
            }
        }
        let mut min = vertices[0];
        let mut max = vertices[0];
        for p in &vertices {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        let poly = SimplePolygon { vertices, min, max };
        poly.check_simple()?;
        let area = poly.signed_area();
        if area <= 0.0 {
            return invalid(if area == 0.0 {
                "polygon has zero area".to_string()
            } else {
                "polygon is clockwise".to_string()
            });
        }
        Ok(poly)
    }

    fn check_simple(&self) -> Result<()> {
        let m = self.len();
        let mut order: Vec<usize> = (0..m).collect();
        let lo = |i: usize| {
            let (a, b) = self.edge(i);
            a.x.min(b.x)
        };
        let hi = |i: usize| {
            let (a, b) = self.edge(i);
            a.x.max(b.x)
        };
        order.sort_by(|&i, &j| lo(i).total_cmp(&lo(j)));
        for (pos, &i) in order.iter().enumerate() {
            let (a, b) = self.edge(i);
            for &j in &order[pos + 1..] {
                if lo(j) > hi(i) {
                    break;
                }
                let (c, d) = self.edge(j);
                if !bbox_overlap(a, b, c, d) {
                    continue;
                }
                let adjacent = (i + 1) % m == j || (j + 1) % m == i;
                let bad = if !adjacent {
                    segments_touch(a, b, c, d)
                } else if (i + 1) % m == j {
                    orient(a, b, d) == 0.0 && (on_segment(a, b, d) || on_segment(c, d, a))
                } else {
                    orient(c, d, b) == 0.0 && (on_segment(c, d, b) || on_segment(a, b, c))
                };
                if bad {
                    return invalid(format!("edges {i} and {j} intersect"));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertices[i], self.vertices[(i + 1) % self.len()])
    }

    pub fn bounds(&self) -> (Point, Point) {
        (self.min, self.max)
    }

    pub fn signed_area(&self) -> f64 {
        let m = self.len();
        let o = self.vertices[0];
        (1..m - 1).map(|i| (self.vertices[i] - o).cross(self.vertices[i + 1] - o)).sum::<f64>() / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| {
            let (a, b) = self.edge(i);
            a.dist(b)
        }).sum()
    }

    /// Interior angle at vertex `i` exceeds 180 degrees.
    pub fn is_reflex(&self, i: usize) -> bool {
        let m = self.len();
        orient(self.vertices[(i + m - 1) % m], self.vertices[i], self.vertices[(i + 1) % m]) < 0.0
    }

    pub fn reflex_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_reflex(i)).collect()
    }

    pub fn locate(&self, p: Point) -> Location {
        if p.x < self.min.x || p.x > self.max.x || p.y < self.min.y || p.y > self.max.y {
            return Location::Outside;
        }
        let mut winding = 0i32;
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            if on_segment(a, b, p) {
                return Location::Boundary;
            }
            if a.y <= p.y {
                if b.y > p.y && orient(a, b, p) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= p.y && orient(a, b, p) < 0.0 {
                winding -= 1;
            }
        }
        if winding != 0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// `p` lies in the closed polygon.
    pub fn contains(&self, p: Point) -> bool {
        self.locate(p) != Location::Outside
    }

    /// The closed segment `ab` lies in the closed polygon.
    pub fn segment_inside(&self, a: Point, b: Point) -> bool {
        if a == b {
            return self.contains(a);
        }
        let mut cuts = vec![(0.0, a), (1.0, b)];
        let d = b - a;
        let len2 = d.dot(d);
        for i in 0..self.len() {
            let (u, v) = self.edge(i);
            if !bbox_overlap(a, b, u, v) {
                continue;
            }
            if properly_cross(a, b, u, v) {
                return false;
            }
            if on_segment(a, b, u) {
                cuts.push(((u - a).dot(d) / len2, u));
            }
        }
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
        cuts.dedup_by(|x, y| x.1 == y.1);
        for w in cuts.windows(2) {
            let (s0, s1) = (w[0].1, w[1].1);
            if self.along_boundary(s0, s1) {
                continue;
            }
            if !self.heads_inside(s0, s1) {
                return false;
            }
        }
        true
    }

    /// The open segment `pq`, known to meet no vertex and cross no edge,
    /// lies in the interior. Decided exactly from the position of `p`.
    fn heads_inside(&self, p: Point, q: Point) -> bool {
        let m = self.len();
        if let Some(i) = self.vertices.iter().position(|&v| v == p) {
            let prev = self.vertices[(i + m - 1) % m];
            let next = self.vertices[(i + 1) % m];
            let out_left = orient(p, next, q) > 0.0;
            let in_left = orient(prev, p, q) > 0.0;
            return if self.is_reflex(i) { out_left || in_left } else { out_left && in_left };
        }
        for i in 0..m {
            let (u, v) = self.edge(i);
            if on_segment(u, v, p) {
                return orient(u, v, q) > 0.0;
            }
        }
        self.contains(p)
    }

    /// Segment `pq` is covered by a single boundary edge.
    fn along_boundary(&self, p: Point, q: Point) -> bool {
        (0..self.len()).any(|i| {
            let (u, v) = self.edge(i);
            on_segment(u, v, p) && on_segment(u, v, q)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pts(c: &[(f64, f64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn l_shape() -> SimplePolygon {
        SimplePolygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)])).is_err(), "clockwise");
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])).is_err(), "bowtie");
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).is_err());
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).is_err());
        assert!(SimplePolygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)])).is_err(), "backtrack");
        let sq = SimplePolygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        assert_eq!(sq.area(), 1.0);
    }

    #[test]
    fn point_location() {
        let p = l_shape();
        assert_eq!(p.locate(Point::new(0.5, 0.5)), Location::Inside);
        assert_eq!(p.locate(Point::new(1.5, 1.5)), Location::Outside);
        assert_eq!(p.locate(Point::new(1.0, 1.5)), Location::Boundary);
        assert_eq!(p.locate(Point::new(2.0, 0.0)), Location::Boundary);
        assert_eq!(p.reflex_vertices(), vec![3]);
    }

    #[test]
    fn segments() {
        let p = l_shape();
        assert!(p.segment_inside(Point::new(0.5, 0.5), Point::new(1.5, 0.5)));
        assert!(!p.segment_inside(Point::new(1.8, 0.5), Point::new(0.5, 1.8)));
        assert!(p.segment_inside(Point::new(1.5, 0.5), Point::new(0.5, 1.5)), "touches the reflex corner");
        assert!(p.segment_inside(Point::new(1.5, 0.5), Point::new(1.0, 1.0)));
        assert!(p.segment_inside(Point::new(2.0, 1.0), Point::new(0.0, 1.0)), "grazes the reflex corner");
        assert!(p.segment_inside(Point::new(0.0, 0.0), Point::new(0.0, 2.0)), "boundary edge");
        assert!(!p.segment_inside(Point::new(2.0, 0.5), Point::new(0.5, 2.0)));
        assert!(p.segment_inside(Point::new(1.0, 2.0), Point::new(1.0, 1.0)));
        assert!(!p.segment_inside(Point::new(2.0, 1.0), Point::new(1.0, 2.0)));
    }
}
