//! Rail geometry: WKT ingestion, the path graph trains move on, and the
//! spatial grid used for density heatmaps.
//!
//! Coordinates are planar metres. Geographic sources must be projected
//! before ingestion; this module is geometry-only.

mod graph;
mod grid;
mod wkt;

pub use graph::{EdgeId, MapGraph, VertexId};
pub use grid::GridIndex;
pub use wkt::parse_wkt;

/// A planar map coordinate in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Ordered polyline with its precomputed arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSegment {
    points: Vec<Point>,
    /// Cumulative arc length up to each point; last entry is the total.
    cum: Vec<f64>,
}

impl PathSegment {
    /// Builds a segment from raw points, dropping consecutive duplicates.
    /// Returns `None` if fewer than two distinct points remain.
    pub fn new(points: Vec<Point>) -> Option<Self> {
        let mut dedup: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if dedup.last() != Some(&p) {
                dedup.push(p);
            }
        }
        if dedup.len() < 2 {
            return None;
        }
        let mut cum = Vec::with_capacity(dedup.len());
        let mut total = 0.0;
        cum.push(0.0);
        for w in dedup.windows(2) {
            total += w[0].distance(&w[1]);
            cum.push(total);
        }
        Some(PathSegment { points: dedup, cum })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        *self.points.last().unwrap()
    }

    /// Point at arc distance `d` from the segment start, clamped to the ends.
    pub fn point_at(&self, d: f64) -> Point {
        if d <= 0.0 {
            return self.first();
        }
        if d >= self.length() {
            return self.last();
        }
        // Index of the first cumulative value strictly greater than d.
        let i = match self.cum.binary_search_by(|c| c.partial_cmp(&d).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let a = self.points[i - 1];
        let b = self.points[i];
        let seg = self.cum[i] - self.cum[i - 1];
        let t = (d - self.cum[i - 1]) / seg;
        Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
    }

    /// Shortest distance from `p` to the polyline.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.points
            .windows(2)
            .map(|w| point_segment_distance(p, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Rebuilds the segment with both endpoints replaced. Used when graph
    /// construction snaps endpoints onto shared vertices. Returns `None` if
    /// the geometry collapses to a single point.
    pub(crate) fn with_endpoints(&self, first: Point, last: Point) -> Option<Self> {
        let mut pts = self.points.clone();
        *pts.first_mut().unwrap() = first;
        *pts.last_mut().unwrap() = last;
        PathSegment::new(pts)
    }
}

/// Distance from `p` to the line segment `a`-`b`.
pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Point::new(a.x + t * dx, a.y + t * dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_length_is_sum_of_chords() {
        let seg = PathSegment::new(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 4.0),
            Point::new(3.0, 10.0),
        ])
        .unwrap();
        assert_eq!(seg.length(), 11.0);
    }

    #[test]
    fn consecutive_duplicates_are_dropped() {
        let seg = PathSegment::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(seg.points().len(), 2);
    }

    #[test]
    fn degenerate_segment_is_rejected() {
        assert!(PathSegment::new(vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0)]).is_none());
        assert!(PathSegment::new(vec![Point::new(1.0, 1.0)]).is_none());
    }

    #[test]
    fn point_at_interpolates_across_vertices() {
        let seg = PathSegment::new(vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 5.0),
        ])
        .unwrap();
        assert_eq!(seg.point_at(6.0), Point::new(6.0, 0.0));
        assert_eq!(seg.point_at(12.0), Point::new(10.0, 2.0));
        assert_eq!(seg.point_at(0.0), Point::new(0.0, 0.0));
        assert_eq!(seg.point_at(15.0), Point::new(10.0, 5.0));
    }

    #[test]
    fn distance_to_polyline() {
        let seg =
            PathSegment::new(vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)]).unwrap();
        assert!((seg.distance_to(&Point::new(5.0, 3.0)) - 3.0).abs() < 1e-12);
        assert!((seg.distance_to(&Point::new(-4.0, 3.0)) - 5.0).abs() < 1e-12);
    }
}
