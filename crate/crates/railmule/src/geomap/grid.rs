//! Spatial occupancy grid backing the node-density heatmap.

use std::collections::BTreeMap;

use super::Point;

/// Counts presence samples per square cell. Cell assignment is half-open:
/// a point lands in `(floor((x-ox)/s), floor((y-oy)/s))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridIndex {
    cell_size: f64,
    origin: Point,
    counts: BTreeMap<(i64, i64), u64>,
}

impl GridIndex {
    pub fn new(cell_size: f64, origin: Point) -> Self {
        assert!(cell_size > 0.0, "cell size must be positive");
        GridIndex { cell_size, origin, counts: BTreeMap::new() }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cell_of(&self, p: &Point) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.cell_size).floor() as i64,
            ((p.y - self.origin.y) / self.cell_size).floor() as i64,
        )
    }

    /// Increments the cell containing `p` by one.
    pub fn accumulate(&mut self, p: &Point) {
        let cell = self.cell_of(p);
        *self.counts.entry(cell).or_insert(0) += 1;
    }

    pub fn count(&self, cell: (i64, i64)) -> u64 {
        self.counts.get(&cell).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Nonzero cells in ascending (ix, iy) order.
    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }
}
