//! Line-oriented text formats for trees, forests, polygons and spanners.
//!
//! ```text
//! tree n=2 m=3 root=0
//! edge 0 1 1.5
//! edge 0 2 2
//! site 1
//! site 2
//! ```
//!
//! Forests are trees separated by `---` lines. Polygons are written as
//! `polygon m=<count>` followed by `v <x> <y>` and `site <x> <y>` lines.
//! Spanners start with `spanner metric=<tree|forest|polygon>` followed by
//! `node` and `link` lines. Blank lines and lines starting with `#` are
//! ignored everywhere. Numbers are written in shortest round-trip form.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Point, SimplePolygon};
use crate::spanner::{Host, Link, LinkPath, Metric, Node, NodeKind, SpannerGraph};
use crate::tree::{EdgeWeightedTree, Forest, TreeBuilder};

/// Largest vertex, site, node or link count a file may declare.
pub const MAX_COUNT: usize = 1 << 20;

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number<T: FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().or_else(|_| err(line, format!("bad {what} {s:?}")))
}

fn real(line: usize, s: &str, what: &str) -> Result<f64> {
    let v: f64 = number(line, s, what)?;
    if !v.is_finite() {
        return err(line, format!("{what} {s:?} is not finite"));
    }
    Ok(v)
}

/// Largest coordinate magnitude accepted, keeping orientation tests finite.
pub const MAX_COORD: f64 = 1e15;

fn coord(line: usize, s: &str, what: &str) -> Result<f64> {
    let v = real(line, s, what)?;
    if v.abs() > MAX_COORD {
        return err(line, format!("{what} {v} exceeds the coordinate limit"));
    }
    Ok(v)
}

fn count(line: usize, s: &str, what: &str) -> Result<usize> {
    let v: usize = number(line, s, what)?;
    if v > MAX_COUNT {
        return err(line, format!("{what} {v} exceeds the limit {MAX_COUNT}"));
    }
    Ok(v)
}

/// Value of `key=value` among `tokens`.
fn field<'a>(line: usize, tokens: &[&'a str], key: &str) -> Result<&'a str> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .map_or_else(|| err(line, format!("missing {key}=")), Ok)
}

fn optional_field<'a>(tokens: &[&'a str], key: &str) -> Option<&'a str> {
    tokens.iter().find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

fn with_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line, message: other.to_string() },
    })
}

fn parse_tree_lines<'a, I>(header: (usize, &'a str), body: I) -> Result<EdgeWeightedTree>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (hl, h) = header;
    let tokens: Vec<&str> = h.split_whitespace().collect();
    if tokens.first() != Some(&"tree") {
        return err(hl, "expected a tree header");
    }
    let n = count(hl, field(hl, &tokens, "n")?, "site count")?;
    let m = count(hl, field(hl, &tokens, "m")?, "vertex count")?;
    let root = count(hl, field(hl, &tokens, "root")?, "root")?;
    let mut b = TreeBuilder::new(m, root);
    let (mut edges, mut sites) = (0usize, 0usize);
    let mut last = hl;
    for (ln, l) in body {
        last = ln;
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.as_slice() {
            ["edge", p, c, w] => {
                edges += 1;
                if edges >= m.max(1) {
                    return err(ln, format!("more than {} edges", m.saturating_sub(1)));
                }
                let (p, c) = (count(ln, p, "vertex")?, count(ln, c, "vertex")?);
                let w = real(ln, w, "weight")?;
                if !(w > 0.0) {
                    return err(ln, format!("edge weight {w} is not positive"));
                }
                b.edge(p, c, w);
            }
            ["site", v] => {
                sites += 1;
                if sites > n {
                    return err(ln, format!("more than {n} sites"));
                }
                b.site(count(ln, v, "vertex")?);
            }
            _ => return err(ln, format!("unexpected line {l:?}")),
        }
    }
    if sites != n {
        return err(last, format!("header declares {n} sites, found {sites}"));
    }
    with_line(hl, b.build())
}

pub fn parse_tree(text: &str) -> Result<EdgeWeightedTree> {
    let mut it = lines(text);
    let header = it.next().map_or_else(|| err(0, "empty input"), Ok)?;
    parse_tree_lines(header, it)
}

pub fn parse_forest(text: &str) -> Result<Forest> {
    let all: Vec<(usize, &str)> = lines(text).collect();
    if all.is_empty() {
        return err(0, "empty input");
    }
    let mut trees = Vec::new();
    for block in all.split(|(_, l)| *l == "---") {
        let Some((&header, body)) = block.split_first() else {
            return err(0, "empty tree between separators");
        };
        if trees.len() >= MAX_COUNT {
            return err(header.0, "too many trees");
        }
        trees.push(parse_tree_lines(header, body.iter().copied())?);
    }
    Ok(Forest::new(trees))
}

pub fn write_tree(tree: &EdgeWeightedTree) -> Result<String> {
    let mut s = String::new();
    write_tree_into(&mut s, tree)?;
    Ok(s)
}

fn write_tree_into(s: &mut String, tree: &EdgeWeightedTree) -> Result<()> {
    let _ = writeln!(s, "tree n={} m={} root={}", tree.site_count(), tree.vertex_count(), tree.root());
    for e in tree.edges() {
        if e.synthetic {
            return Err(Error::Unsupported("trees with synthetic edges cannot be written".into()));
        }
        let _ = writeln!(s, "edge {} {} {}", e.parent, e.child, e.weight);
    }
    for v in tree.sites() {
        let _ = writeln!(s, "site {v}");
    }
    Ok(())
}

pub fn write_forest(forest: &Forest) -> Result<String> {
    let mut s = String::new();
    for (i, t) in forest.trees.iter().enumerate() {
        if i > 0 {
            s.push_str("---\n");
        }
        write_tree_into(&mut s, t)?;
    }
    Ok(s)
}

pub fn parse_polygon(text: &str) -> Result<(SimplePolygon, Vec<Point>)> {
    let mut it = lines(text);
    let (hl, h) = it.next().map_or_else(|| err(0, "empty input"), Ok)?;
    let tokens: Vec<&str> = h.split_whitespace().collect();
    if tokens.first() != Some(&"polygon") {
        return err(hl, "expected a polygon header");
    }
    let m = count(hl, field(hl, &tokens, "m")?, "vertex count")?;
    let mut vertices = Vec::with_capacity(m.min(4096));
    let mut sites = Vec::new();
    let mut last = hl;
    for (ln, l) in it {
        last = ln;
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.as_slice() {
            ["v", x, y] => {
                if !sites.is_empty() {
                    return err(ln, "vertex after the first site");
                }
                if vertices.len() >= m {
                    return err(ln, format!("more than {m} vertices"));
                }
                vertices.push(Point::new(coord(ln, x, "x")?, coord(ln, y, "y")?));
            }
            ["site", x, y] => {
                if sites.len() >= MAX_COUNT {
                    return err(ln, "too many sites");
                }
                sites.push(Point::new(coord(ln, x, "x")?, coord(ln, y, "y")?));
            }
            _ => return err(ln, format!("unexpected line {l:?}")),
        }
    }
    if vertices.len() != m {
        return err(last, format!("header declares {m} vertices, found {}", vertices.len()));
    }
    let polygon = with_line(hl, SimplePolygon::new(vertices))?;
    Ok((polygon, sites))
}

pub fn write_polygon(polygon: &SimplePolygon, sites: &[Point]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "polygon m={}", polygon.len());
    for p in polygon.vertices() {
        let _ = writeln!(s, "v {} {}", p.x, p.y);
    }
    for p in sites {
        let _ = writeln!(s, "site {} {}", p.x, p.y);
    }
    s
}

fn parse_point(line: usize, s: &str) -> Result<Point> {
    let Some((x, y)) = s.split_once(',') else {
        return err(line, format!("bad point {s:?}"));
    };
    Ok(Point::new(coord(line, x, "x")?, coord(line, y, "y")?))
}

fn parse_host(line: usize, metric: Metric, s: &str) -> Result<Host> {
    match metric {
        Metric::Polygon => Ok(Host::Point(parse_point(line, s)?)),
        Metric::Tree => Ok(Host::Vertex { tree: 0, vertex: count(line, s, "vertex")? }),
        Metric::Forest => {
            let Some((t, v)) = s.split_once(':') else {
                return err(line, format!("bad forest host {s:?}"));
            };
            Ok(Host::Vertex { tree: count(line, t, "tree")?, vertex: count(line, v, "vertex")? })
        }
    }
}

fn parse_path(line: usize, metric: Metric, s: &str) -> Result<LinkPath> {
    if metric == Metric::Polygon {
        let pts: Result<Vec<Point>> = s.split(';').map(|p| parse_point(line, p)).collect();
        return Ok(LinkPath::Points(pts?));
    }
    let ids: Result<Vec<usize>> = s.split(',').map(|v| count(line, v, "vertex")).collect();
    Ok(LinkPath::Vertices(ids?))
}

pub fn parse_spanner(text: &str) -> Result<SpannerGraph> {
    let mut it = lines(text);
    let (hl, h) = it.next().map_or_else(|| err(0, "empty input"), Ok)?;
    let tokens: Vec<&str> = h.split_whitespace().collect();
    if tokens.first() != Some(&"spanner") {
        return err(hl, "expected a spanner header");
    }
    let metric = match field(hl, &tokens, "metric")? {
        "tree" => Metric::Tree,
        "forest" => Metric::Forest,
        "polygon" => Metric::Polygon,
        other => return err(hl, format!("unknown metric {other:?}")),
    };
    let mut g = SpannerGraph::new(metric);
    for (ln, l) in it {
        let t: Vec<&str> = l.split_whitespace().collect();
        match t.first() {
            Some(&"node") => {
                if !g.links.is_empty() {
                    return err(ln, "node after the first link");
                }
                let id = count(ln, t.get(1).copied().unwrap_or(""), "node id")?;
                if id != g.nodes.len() {
                    return err(ln, format!("expected node {}, found {id}", g.nodes.len()));
                }
                if id >= MAX_COUNT {
                    return err(ln, "too many nodes");
                }
                let kind = match field(ln, &t, "kind")? {
                    "site" => NodeKind::Site,
                    "steiner" => NodeKind::Steiner,
                    other => return err(ln, format!("unknown node kind {other:?}")),
                };
                let host = parse_host(ln, metric, field(ln, &t, "host")?)?;
                g.nodes.push(Node { kind, host });
            }
            Some(&"link") => {
                if g.links.len() >= MAX_COUNT {
                    return err(ln, "too many links");
                }
                let a = count(ln, t.get(1).copied().unwrap_or(""), "node id")?;
                let b = count(ln, t.get(2).copied().unwrap_or(""), "node id")?;
                if a >= g.nodes.len() || b >= g.nodes.len() {
                    return err(ln, "link references an unknown node");
                }
                let length = real(ln, field(ln, &t, "len")?, "length")?;
                let complexity = count(ln, field(ln, &t, "cx")?, "complexity")?;
                let path = match optional_field(&t, "path") {
                    Some(p) => parse_path(ln, metric, p)?,
                    None if metric == Metric::Polygon => LinkPath::Points(Vec::new()),
                    None => return err(ln, "tree links need a path"),
                };
                g.links.push(Link { a, b, length, complexity, path, origins: Vec::new() });
            }
            _ => return err(ln, format!("unexpected line {l:?}")),
        }
    }
    Ok(g)
}

/// Writes a spanner. Polygon link paths are written only with
/// `emit_paths`; tree paths are always written.
pub fn write_spanner(g: &SpannerGraph, emit_paths: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "spanner metric={}", g.metric.as_str());
    for (i, n) in g.nodes.iter().enumerate() {
        let kind = match n.kind {
            NodeKind::Site => "site",
            NodeKind::Steiner => "steiner",
        };
        let host = match (g.metric, n.host) {
            (Metric::Tree, Host::Vertex { vertex, .. }) => vertex.to_string(),
            (_, Host::Vertex { tree, vertex }) => format!("{tree}:{vertex}"),
            (_, Host::Point(p)) => p.to_string(),
        };
        let _ = writeln!(s, "node {i} kind={kind} host={host}");
    }
    for l in &g.links {
        let _ = write!(s, "link {} {} len={} cx={}", l.a, l.b, l.length, l.complexity);
        match &l.path {
            LinkPath::Vertices(v) => {
                let ids: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                let _ = write!(s, " path={}", ids.join(","));
            }
            LinkPath::Points(p) if emit_paths && !p.is_empty() => {
                let pts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                let _ = write!(s, " path={}", pts.join(";"));
            }
            LinkPath::Points(_) => {}
        }
        s.push('\n');
    }
    s
}
