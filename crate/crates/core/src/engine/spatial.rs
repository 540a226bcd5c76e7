//! Uniform grid for exact nearest-neighbor queries over centroids.

use crate::mesh::Point3;

/// Points bucketed into a dense uniform grid (CSR layout).
///
/// Queries search Chebyshev shells of cells outward from the query cell and
/// stop once no unvisited cell can hold anything closer than the best found.
/// The returned distance is computed with [`Point3::distance`], so it is the
/// same float a brute-force scan over all points would produce.
pub struct CentroidGrid<'a> {
    points: &'a [Point3],
    origin: Point3,
    cell: f64,
    dims: [i64; 3],
    starts: Vec<u32>,
    order: Vec<u32>,
}

impl<'a> CentroidGrid<'a> {
    pub fn new(points: &'a [Point3]) -> Self {
        assert!(!points.is_empty(), "grid needs at least one point");
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        let ext = hi - lo;
        let max_ext = ext.x.max(ext.y).max(ext.z);
        let n = points.len() as f64;
        // Roughly one cell per point over the (padded) bounding volume.
        let floor = (max_ext * 1e-3).max(f64::MIN_POSITIVE.sqrt());
        let vol = ext.x.max(floor) * ext.y.max(floor) * ext.z.max(floor);
        let mut cell = (vol / n).cbrt();
        if !(cell.is_finite() && cell > 0.0) {
            cell = 1.0;
        }
        // Keep the dense table bounded for very flat or sparse clouds.
        let cells_along = |c: f64| [ext.x, ext.y, ext.z].map(|e| (e / c).floor() as i64 + 1);
        while cells_along(cell).iter().product::<i64>() > 4 * points.len() as i64 + 64 {
            cell *= 1.25;
        }
        let dims = cells_along(cell);

        let mut grid = CentroidGrid {
            points,
            origin: lo,
            cell,
            dims,
            starts: Vec::new(),
            order: Vec::new(),
        };
        let total = (dims[0] * dims[1] * dims[2]) as usize;
        let keys: Vec<usize> = points
            .iter()
            .map(|&p| grid.flat(grid.cell_of(p)).expect("point inside grid"))
            .collect();
        let mut counts = vec![0u32; total + 1];
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for i in 0..total {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut order = vec![0u32; points.len()];
        for (i, &k) in keys.iter().enumerate() {
            order[fill[k] as usize] = i as u32;
            fill[k] += 1;
        }
        grid.starts = counts;
        grid.order = order;
        grid
    }

    fn cell_of(&self, p: Point3) -> [i64; 3] {
        let d = p - self.origin;
        [d.x, d.y, d.z].map(|c| (c / self.cell).floor() as i64)
    }

    fn flat(&self, c: [i64; 3]) -> Option<usize> {
        if (0..3).any(|a| c[a] < 0 || c[a] >= self.dims[a]) {
            return None;
        }
        Some(((c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]) as usize)
    }

    fn scan_cell(&self, flat: usize, q: Point3, best: &mut (f64, u32)) {
        for &i in &self.order[self.starts[flat] as usize..self.starts[flat + 1] as usize] {
            let d = q.distance(self.points[i as usize]);
            if d < best.0 || (d == best.0 && i < best.1) {
                *best = (d, i);
            }
        }
    }

    /// Distance to, and index of, the nearest point. Ties go to the lowest index.
    pub fn nearest(&self, q: Point3) -> (f64, usize) {
        let c = self.cell_of(q);
        let mut best = (f64::INFINITY, u32::MAX);
        // Shells closer than this cannot intersect the grid.
        let outside = (0..3)
            .map(|a| (-c[a]).max(c[a] - (self.dims[a] - 1)).max(0))
            .max()
            .unwrap();
        let reach = (0..3)
            .map(|a| c[a].abs().max((self.dims[a] - 1 - c[a]).abs()))
            .max()
            .unwrap();
        let slack = 1e-9 * self.cell;
        for k in outside..=reach {
            self.scan_shell(c, k, q, &mut best);
            // Anything in shell k+1 or beyond is at least k cells away.
            if best.0 <= (k as f64) * self.cell - slack * (k as f64 + 1.0) {
                break;
            }
        }
        (best.0, best.1 as usize)
    }

    fn scan_shell(&self, c: [i64; 3], k: i64, q: Point3, best: &mut (f64, u32)) {
        let range = |a: usize| {
            let lo = (c[a] - k).max(0);
            let hi = (c[a] + k).min(self.dims[a] - 1);
            lo..=hi
        };
        for x in range(0) {
            let x_edge = (x - c[0]).abs() == k;
            for y in range(1) {
                let y_edge = (y - c[1]).abs() == k;
                if x_edge || y_edge {
                    for z in range(2) {
                        if let Some(f) = self.flat([x, y, z]) {
                            self.scan_cell(f, q, best);
                        }
                    }
                } else {
                    for z in [c[2] - k, c[2] + k] {
                        if let Some(f) = self.flat([x, y, z]) {
                            self.scan_cell(f, q, best);
                        }
                        if k == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }
}
