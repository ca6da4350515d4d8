//! Path graph over parsed rail segments: endpoint snapping, Dijkstra with a
//! deterministic tie-break, and the spatial queries the rest of the
//! simulator needs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};

use super::{PathSegment, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub segment: PathSegment,
}

impl Edge {
    pub fn length(&self) -> f64 {
        self.segment.length()
    }

    /// The vertex at the other end of the edge.
    pub fn opposite(&self, v: VertexId) -> VertexId {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Undirected graph whose edges carry polyline geometry. Vertices are the
/// snapped segment endpoints; interior polyline points stay inside edges.
#[derive(Debug, Clone)]
pub struct MapGraph {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
}

/// Merges endpoints within `snap_tolerance` into shared vertices and links
/// segments into a graph. Segments whose geometry collapses after snapping
/// are discarded.
pub fn build_graph(segments: &[PathSegment], snap_tolerance: f64) -> Result<MapGraph> {
    if snap_tolerance < 0.0 {
        return Err(Error::map_format(0, format!("negative snap tolerance {snap_tolerance}")));
    }
    if segments.is_empty() {
        return Err(Error::map_format(0, "no segments to build a graph from"));
    }

    let mut snapper = Snapper::new(snap_tolerance);
    let mut edges: Vec<Edge> = Vec::with_capacity(segments.len());
    for seg in segments {
        let a = snapper.resolve(seg.first());
        let b = snapper.resolve(seg.last());
        let snapped = seg.with_endpoints(snapper.point(a), snapper.point(b));
        match snapped {
            Some(segment) => edges.push(Edge { a, b, segment }),
            // Whole segment shorter than the tolerance: nothing left once
            // both endpoints land on the same vertex.
            None => continue,
        }
    }

    let vertices = snapper.into_points();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e.a.0 as usize].push(EdgeId(i as u32));
        if e.b != e.a {
            adjacency[e.b.0 as usize].push(EdgeId(i as u32));
        }
    }
    Ok(MapGraph { vertices, edges, adjacency })
}

/// Greedy endpoint merger: the first endpoint seen in a neighbourhood fixes
/// the canonical vertex coordinate.
struct Snapper {
    tolerance: f64,
    cell: f64,
    points: Vec<Point>,
    cells: HashMap<(i64, i64), Vec<u32>>,
}

impl Snapper {
    fn new(tolerance: f64) -> Self {
        Snapper {
            tolerance,
            cell: tolerance.max(1e-9),
            points: Vec::new(),
            cells: HashMap::new(),
        }
    }

    fn cell_of(&self, p: &Point) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn resolve(&mut self, p: Point) -> VertexId {
        let (cx, cy) = self.cell_of(&p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        if self.points[id as usize].distance(&p) <= self.tolerance {
                            return VertexId(id);
                        }
                    }
                }
            }
        }
        let id = self.points.len() as u32;
        self.points.push(p);
        self.cells.entry((cx, cy)).or_default().push(id);
        VertexId(id)
    }

    fn point(&self, v: VertexId) -> Point {
        self.points[v.0 as usize]
    }

    fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl MapGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: VertexId) -> Point {
        self.vertices[v.0 as usize]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0 as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v.0 as usize]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    /// Vertex nearest to `p`; ties resolve to the lowest id.
    pub fn nearest_vertex(&self, p: &Point) -> VertexId {
        let mut best = VertexId(0);
        let mut best_d = f64::INFINITY;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = v.distance(p);
            if d < best_d {
                best_d = d;
                best = VertexId(i as u32);
            }
        }
        best
    }

    /// Shortest distance from `p` to any edge polyline.
    pub fn distance_to_tracks(&self, p: &Point) -> f64 {
        self.edges
            .iter()
            .map(|e| e.segment.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.vertices.len()];
        let mut components = 0;
        let mut stack = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(VertexId(start as u32));
            while let Some(v) = stack.pop() {
                for &e in self.incident(v) {
                    let w = self.edge(e).opposite(v);
                    if !seen[w.0 as usize] {
                        seen[w.0 as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    /// Minimal-length path between two vertices. Among equal-length paths the
    /// one whose next vertex is lexicographically smallest by (x, y) wins.
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Result<(Vec<VertexId>, f64)> {
        let (vertices, edges) = self.shortest_path_edges(from, to)?;
        let total = edges.iter().map(|&e| self.edge(e).length()).sum();
        Ok((vertices, total))
    }

    /// Path as (vertex list, edge list); `from == to` yields a single-vertex
    /// path with no edges.
    pub fn shortest_path_edges(
        &self,
        from: VertexId,
        to: VertexId,
    ) -> Result<(Vec<VertexId>, Vec<EdgeId>)> {
        assert!((from.0 as usize) < self.vertices.len(), "unknown vertex {from:?}");
        assert!((to.0 as usize) < self.vertices.len(), "unknown vertex {to:?}");
        if from == to {
            return Ok((vec![from], Vec::new()));
        }
        let dist_to_target = self.dijkstra(to);
        if !dist_to_target[from.0 as usize].is_finite() {
            return Err(Error::NoPath { from: from.0, to: to.0 });
        }

        let mut vertices = vec![from];
        let mut edges = Vec::new();
        let mut u = from;
        // dist_to_target strictly decreases along the walk, so it terminates.
        for _ in 0..=self.vertices.len() {
            if u == to {
                return Ok((vertices, edges));
            }
            let du = dist_to_target[u.0 as usize];
            let mut best: Option<(Point, VertexId, EdgeId)> = None;
            for &eid in self.incident(u) {
                let e = self.edge(eid);
                let v = e.opposite(u);
                if v == u {
                    continue;
                }
                let dv = dist_to_target[v.0 as usize];
                if !dv.is_finite() {
                    continue;
                }
                let through = e.length() + dv;
                if (through - du).abs() > 1e-9 * du.max(1.0) {
                    continue;
                }
                let key = self.vertex(v);
                let better = match &best {
                    None => true,
                    Some((bk, bv, be)) => {
                        lex_cmp(&key, bk) == Ordering::Less
                            || (key == *bk && (v, eid) < (*bv, *be))
                    }
                };
                if better {
                    best = Some((key, v, eid));
                }
            }
            let (_, v, eid) = best.expect("shortest-path walk lost the gradient");
            vertices.push(v);
            edges.push(eid);
            u = v;
        }
        unreachable!("shortest-path walk exceeded vertex count");
    }

    /// Plain Dijkstra from `source` over edge lengths. Pop order ties break
    /// on the vertex coordinate so runs are reproducible.
    fn dijkstra(&self, source: VertexId) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.vertices.len()];
        dist[source.0 as usize] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { dist: 0.0, key: self.vertex(source), v: source });
        while let Some(HeapEntry { dist: d, v, .. }) = heap.pop() {
            if d > dist[v.0 as usize] {
                continue;
            }
            for &eid in self.incident(v) {
                let e = self.edge(eid);
                let w = e.opposite(v);
                let nd = d + e.length();
                if nd < dist[w.0 as usize] {
                    dist[w.0 as usize] = nd;
                    heap.push(HeapEntry { dist: nd, key: self.vertex(w), v: w });
                }
            }
        }
        dist
    }
}

fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a.x.partial_cmp(&b.x)
        .unwrap()
        .then(a.y.partial_cmp(&b.y).unwrap())
}

struct HeapEntry {
    dist: f64,
    key: Point,
    v: VertexId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest first.
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| lex_cmp(&other.key, &self.key))
            .then_with(|| other.v.cmp(&self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_wkt;
    use super::*;

    fn two_unit_segments() -> Vec<PathSegment> {
        parse_wkt("LINESTRING (0 0, 1 0)\nLINESTRING (0 0, 0 1)").unwrap()
    }

    #[test]
    fn shared_endpoint_is_merged() {
        let g = build_graph(&two_unit_segments(), 0.001).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.component_count(), 1);
    }

    #[test]
    fn single_segment_graph() {
        let segs = parse_wkt("LINESTRING (0 0, 3 4)").unwrap();
        let g = build_graph(&segs, 1.0).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn endpoints_within_tolerance_are_one_vertex() {
        let segs =
            parse_wkt("LINESTRING (0 0, 5 0)\nLINESTRING (0.0005 0, 0 5)").unwrap();
        let g = build_graph(&segs, 0.001).unwrap();
        assert_eq!(g.vertex_count(), 3);
        // Canonical coordinate is the first endpoint seen.
        assert_eq!(g.vertex(VertexId(0)), Point::new(0.0, 0.0));
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        let err = build_graph(&two_unit_segments(), -1.0).unwrap_err();
        assert!(matches!(err, Error::MapFormat { .. }));
    }

    #[test]
    fn rebuild_is_identical() {
        let segs = two_unit_segments();
        let a = build_graph(&segs, 0.001).unwrap();
        let b = build_graph(&segs, 0.001).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(
            a.edges.iter().map(|e| (e.a, e.b)).collect::<Vec<_>>(),
            b.edges.iter().map(|e| (e.a, e.b)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn shortest_path_via_shared_vertex() {
        let g = build_graph(&two_unit_segments(), 0.001).unwrap();
        let from = g.nearest_vertex(&Point::new(1.0, 0.0));
        let to = g.nearest_vertex(&Point::new(0.0, 1.0));
        let (path, len) = g.shortest_path(from, to).unwrap();
        assert_eq!(len, 2.0);
        assert_eq!(path.len(), 3);
        assert_eq!(g.vertex(path[1]), Point::new(0.0, 0.0));
    }

    #[test]
    fn identity_path_has_zero_length() {
        let g = build_graph(&two_unit_segments(), 0.001).unwrap();
        let v = g.nearest_vertex(&Point::new(1.0, 0.0));
        let (path, len) = g.shortest_path(v, v).unwrap();
        assert_eq!(path, vec![v]);
        assert_eq!(len, 0.0);
    }

    #[test]
    fn disjoint_components_have_no_path() {
        let segs = parse_wkt("LINESTRING (0 0, 1 0)\nLINESTRING (100 100, 101 100)").unwrap();
        let g = build_graph(&segs, 0.001).unwrap();
        assert_eq!(g.component_count(), 2);
        let a = g.nearest_vertex(&Point::new(0.0, 0.0));
        let b = g.nearest_vertex(&Point::new(100.0, 100.0));
        assert!(matches!(g.shortest_path(a, b), Err(Error::NoPath { .. })));
    }

    #[test]
    fn path_length_is_symmetric() {
        let wkt = "LINESTRING (0 0, 10 0, 10 10)\nLINESTRING (0 0, 0 10, 10 10)\nLINESTRING (10 10, 20 10)";
        let g = build_graph(&parse_wkt(wkt).unwrap(), 0.001).unwrap();
        for a in g.vertex_ids() {
            for b in g.vertex_ids() {
                let fwd = g.shortest_path(a, b).unwrap().1;
                let back = g.shortest_path(b, a).unwrap().1;
                assert!((fwd - back).abs() <= 1e-9 * fwd.max(1.0));
            }
        }
    }

    #[test]
    fn equal_length_tie_breaks_on_next_vertex() {
        // Two equal-length two-edge routes from (0,0) to (2,0), turning at
        // (1,1) or (1,-1). The lexicographically smaller next vertex wins.
        let wkt = "LINESTRING (0 0, 1 1)\nLINESTRING (1 1, 2 0)\nLINESTRING (0 0, 1 -1)\nLINESTRING (1 -1, 2 0)";
        let g = build_graph(&parse_wkt(wkt).unwrap(), 0.001).unwrap();
        let from = g.nearest_vertex(&Point::new(0.0, 0.0));
        let to = g.nearest_vertex(&Point::new(2.0, 0.0));
        let (path, _) = g.shortest_path(from, to).unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(g.vertex(path[1]), Point::new(1.0, -1.0));
    }

    #[test]
    fn parallel_edges_resolve_to_the_first_parsed() {
        let wkt = "LINESTRING (0 0, 1 1, 2 0)\nLINESTRING (0 0, 1 -1, 2 0)";
        let g = build_graph(&parse_wkt(wkt).unwrap(), 0.001).unwrap();
        let from = g.nearest_vertex(&Point::new(0.0, 0.0));
        let to = g.nearest_vertex(&Point::new(2.0, 0.0));
        let (_, edges) = g.shortest_path_edges(from, to).unwrap();
        assert_eq!(edges, vec![EdgeId(0)]);
    }
}
