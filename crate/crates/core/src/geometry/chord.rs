use crate::error::{invalid, Error, Result};

use super::spt::ChordField;
use super::triangulate::segment_distance;
use super::{Location, Point, SimplePolygon};

/// A vertical segment whose endpoints lie on the polygon boundary and whose
/// interior lies inside the polygon. The endpoints sit on edges
/// `lower_edge` and `upper_edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub x: f64,
    pub lower: Point,
    pub upper: Point,
    pub lower_edge: usize,
    pub upper_edge: usize,
}

impl Chord {
    /// Builds a chord from two endpoints, locating the boundary edges they
    /// lie on.
    pub fn new(polygon: &SimplePolygon, lower: Point, upper: Point) -> Result<Self> {
        if lower.x != upper.x || !(lower.y < upper.y) {
            return invalid("chord must be vertical with lower below upper");
        }
        let (lo, hi) = polygon.bounds();
        let slack = 1e-9 * lo.dist(hi).max(1.0);
        let nearest = |p: Point| -> Result<usize> {
            let (d, e) = (0..polygon.len())
                .map(|i| {
                    let (a, b) = polygon.edge(i);
                    (segment_distance(a, b, p), i)
                })
                .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc });
            if d > slack {
                return invalid(format!("chord endpoint ({p}) is not on the boundary"));
            }
            Ok(e)
        };
        let chord = Chord { x: lower.x, lower, upper, lower_edge: nearest(lower)?, upper_edge: nearest(upper)? };
        if polygon.locate(lower.lerp(upper, 0.5)) != Location::Inside {
            return invalid("chord interior is not inside the polygon");
        }
        Ok(chord)
    }

    pub fn length(&self) -> f64 {
        self.upper.y - self.lower.y
    }

    /// Closest point of the chord to `p` in the plane.
    pub fn foot(&self, p: Point) -> Point {
        if p.y <= self.lower.y {
            self.lower
        } else if p.y >= self.upper.y {
            self.upper
        } else {
            Point::new(self.x, p.y)
        }
    }
}

/// All chords on the vertical line through `x`. The line must avoid every
/// polygon vertex.
pub fn chords_at(polygon: &SimplePolygon, x: f64) -> Vec<Chord> {
    let mut hits: Vec<(f64, usize)> = Vec::new();
    for i in 0..polygon.len() {
        let (a, b) = polygon.edge(i);
        if (a.x < x && b.x > x) || (a.x > x && b.x < x) {
            let y = a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
            hits.push((y, i));
        }
    }
    hits.sort_by(|p, q| p.0.total_cmp(&q.0));
    hits.chunks_exact(2)
        .filter(|h| h[0].0 < h[1].0)
        .map(|h| Chord {
            x,
            lower: Point::new(x, h[0].0),
            upper: Point::new(x, h[1].0),
            lower_edge: h[0].1,
            upper_edge: h[1].1,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitSide {
    Left,
    Right,
}

/// The two pieces of a polygon cut along a chord. `origin` maps every
/// piece vertex to the vertex of the cut polygon it copies, or `None` for
/// the chord endpoints.
#[derive(Debug, Clone)]
pub struct Split {
    pub left: SimplePolygon,
    pub right: SimplePolygon,
    pub left_origin: Vec<Option<usize>>,
    pub right_origin: Vec<Option<usize>>,
}

impl Split {
    /// Side of a point; points on the chord count as left.
    pub fn side(&self, p: Point) -> SplitSide {
        if self.right.locate(p) == Location::Inside {
            SplitSide::Right
        } else {
            SplitSide::Left
        }
    }

    pub fn piece(&self, side: SplitSide) -> (&SimplePolygon, &[Option<usize>]) {
        match side {
            SplitSide::Left => (&self.left, &self.left_origin),
            SplitSide::Right => (&self.right, &self.right_origin),
        }
    }
}

pub(crate) fn split_indexed(polygon: &SimplePolygon, chord: &Chord) -> Result<Split> {
    let m = polygon.len();
    let (a, b) = (chord.lower_edge, chord.upper_edge);
    if a >= m || b >= m || a == b {
        return invalid("chord edges are not valid boundary edges");
    }
    let walk = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut i = (from + 1) % m;
        loop {
            out.push(i);
            if i == to {
                break;
            }
            i = (i + 1) % m;
        }
        out
    };
    let mut right = vec![chord.lower];
    let mut right_origin = vec![None];
    for i in walk(a, b) {
        right.push(polygon.vertex(i));
        right_origin.push(Some(i));
    }
    right.push(chord.upper);
    right_origin.push(None);
    let mut left = vec![chord.upper];
    let mut left_origin = vec![None];
    for i in walk(b, a) {
        left.push(polygon.vertex(i));
        left_origin.push(Some(i));
    }
    left.push(chord.lower);
    left_origin.push(None);
    let piece = |v: Vec<Point>| {
        SimplePolygon::new(v).map_err(|e| Error::Degenerate(format!("cutting along the chord failed: {e}")))
    };
    Ok(Split { left: piece(left)?, right: piece(right)?, left_origin, right_origin })
}

/// Cuts the polygon along `chord` into its (left, right) pieces.
pub fn split_polygon(polygon: &SimplePolygon, chord: &Chord) -> Result<(SimplePolygon, SimplePolygon)> {
    let s = split_indexed(polygon, chord)?;
    Ok((s.left, s.right))
}

/// Chord used to cut the site set, together with the cut itself.
pub(crate) fn separator_with_split(polygon: &SimplePolygon, sites: &[Point]) -> Result<(Chord, Split)> {
    let n = sites.len();
    if n < 2 {
        return Err(Error::Degenerate(format!("separator needs two sites, found {n}")));
    }
    let mut xs: Vec<f64> = polygon.vertices().iter().chain(sites).map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut sorted: Vec<f64> = sites.iter().map(|p| p.x).collect();
    sorted.sort_by(f64::total_cmp);
    let mut candidates: Vec<(usize, f64)> = xs
        .windows(2)
        .map(|w| (w[0], w[1], w[0] + (w[1] - w[0]) / 2.0))
        .filter(|&(a, b, c)| c > a && c < b)
        .filter(|&(_, _, c)| c > sorted[0] && c < sorted[n - 1])
        .map(|(_, _, c)| {
            let left = sorted.partition_point(|&x| x < c);
            (left.abs_diff(n - left), c)
        })
        .collect();
    candidates.sort_by(|p, q| p.0.cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let half = n.div_ceil(2);
    let limit = (2 * n).div_ceil(3);
    let mut best: Option<(usize, Chord, Split)> = None;
    let mut after_good = 0;
    for &(_, x) in &candidates {
        for chord in chords_at(polygon, x) {
            let Ok(split) = split_indexed(polygon, &chord) else { continue };
            let right = sites.iter().filter(|&&p| split.side(p) == SplitSide::Right).count();
            let worst = right.max(n - right);
            if worst == n {
                continue;
            }
            if best.as_ref().is_none_or(|b| worst < b.0) {
                best = Some((worst, chord, split));
            }
        }
        if let Some(b) = &best {
            if b.0 <= half {
                break;
            }
            if b.0 <= limit {
                after_good += 1;
                if after_good > 8 {
                    break;
                }
            }
        }
    }
    best.map(|(_, c, s)| (c, s)).ok_or_else(|| Error::Degenerate("no vertical chord separates the sites".into()))
}

/// Vertical chord splitting the sites so that neither side holds more than
/// `⌈2n/3⌉` of them whenever such a chord exists among the candidates.
pub fn vertical_separator(polygon: &SimplePolygon, sites: &[Point]) -> Result<Chord> {
    Ok(separator_with_split(polygon, sites)?.0)
}

/// Geodesically closest point of the chord to `p`.
pub fn project_to_chord(polygon: &SimplePolygon, p: Point, chord: &Chord) -> Result<Point> {
    if !polygon.contains(p) {
        return invalid(format!("point ({p}) is outside the polygon"));
    }
    if p.x == chord.x && p.y >= chord.lower.y && p.y <= chord.upper.y {
        return Ok(p);
    }
    let split = split_indexed(polygon, chord)?;
    let (piece, _) = split.piece(split.side(p));
    let field = ChordField::new(piece, chord);
    Ok(field.reach(p).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> SimplePolygon {
        SimplePolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)])
            .unwrap()
    }

    #[test]
    fn unit_square_halves() {
        let p = square();
        let c = Chord::new(&p, Point::new(0.5, 0.0), Point::new(0.5, 1.0)).unwrap();
        let (l, r) = split_polygon(&p, &c).unwrap();
        assert_eq!(l.area(), 0.5);
        assert_eq!(r.area(), 0.5);
        assert!(l.len() + r.len() <= p.len() + 4);
        assert!(Chord::new(&p, Point::new(0.5, 0.2), Point::new(0.5, 1.0)).is_err());
    }

    #[test]
    fn projection_sees_chord() {
        let p = square();
        let c = Chord::new(&p, Point::new(0.5, 0.0), Point::new(0.5, 1.0)).unwrap();
        assert_eq!(project_to_chord(&p, Point::new(0.1, 0.3), &c).unwrap(), Point::new(0.5, 0.3));
        assert_eq!(project_to_chord(&p, Point::new(0.5, 0.3), &c).unwrap(), Point::new(0.5, 0.3));
    }

    #[test]
    fn separator_balances_rectangle() {
        let p = square();
        let sites: Vec<Point> = (0..7).map(|i| Point::new(0.05 + 0.13 * i as f64, 0.1 + 0.1 * i as f64)).collect();
        let (chord, split) = separator_with_split(&p, &sites).unwrap();
        let right = sites.iter().filter(|&&s| split.side(s) == SplitSide::Right).count();
        assert_eq!(right.max(7 - right), 4);
        assert!(chord.x > sites[2].x && chord.x < sites[4].x);
    }
}
