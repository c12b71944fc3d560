use std::collections::HashMap;

/// Floating-point bounding box, padded so that exact geometry never
/// leaves it. Only used as a filter in front of exact predicates.
#[derive(Clone, Debug, PartialEq)]
pub struct BBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

const PAD: f64 = 1e-9;

impl BBox {
    pub fn padded(lo: Vec<f64>, hi: Vec<f64>) -> BBox {
        let pad = |v: f64| PAD * (1.0 + v.abs());
        BBox {
            lo: lo.iter().map(|&v| v - pad(v)).collect(),
            hi: hi.iter().map(|&v| v + pad(v)).collect(),
        }
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.lo.iter().zip(&o.hi).all(|(a, b)| a <= b) && o.lo.iter().zip(&self.hi).all(|(a, b)| a <= b)
    }

    /// Largest side length over the first two axes.
    pub fn diameter(&self) -> f64 {
        (self.hi[0] - self.lo[0]).max(self.hi[1] - self.lo[1])
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            lo: self.lo.iter().zip(&o.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&o.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }
}

/// Uniform bucket grid over the first two coordinates.
///
/// Cell side is the median box diameter, so bounded-overlap inputs touch
/// O(1) cells each. Boxes spanning too many cells go to a separate list
/// scanned on every query.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    cell: f64,
    origin: [f64; 2],
    cells: HashMap<(i64, i64), Vec<u32>>,
    oversize: Vec<u32>,
    boxes: Vec<BBox>,
}

const MAX_CELLS_PER_BOX: i64 = 64;

impl SpatialGrid {
    pub fn new(boxes: Vec<BBox>) -> SpatialGrid {
        let mut diam: Vec<f64> = boxes.iter().map(BBox::diameter).filter(|d| d.is_finite()).collect();
        diam.sort_by(f64::total_cmp);
        let median = diam.get(diam.len() / 2).copied().unwrap_or(1.0);
        let cell = if median > 0.0 && median.is_finite() { median } else { 1.0 };
        let origin = boxes.iter().fold([f64::INFINITY; 2], |o, b| [o[0].min(b.lo[0]), o[1].min(b.lo[1])]);
        let origin = if origin[0].is_finite() { origin } else { [0.0; 2] };
        let mut grid = SpatialGrid {
            cell,
            origin,
            cells: HashMap::with_capacity(boxes.len()),
            oversize: Vec::new(),
            boxes: Vec::new(),
        };
        for (i, b) in boxes.iter().enumerate() {
            let (x0, y0, x1, y1) = grid.span(b);
            if (x1 - x0 + 1).saturating_mul(y1 - y0 + 1) > MAX_CELLS_PER_BOX {
                grid.oversize.push(i as u32);
                continue;
            }
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    grid.cells.entry((cx, cy)).or_default().push(i as u32);
                }
            }
        }
        grid.boxes = boxes;
        grid
    }

    fn span(&self, b: &BBox) -> (i64, i64, i64, i64) {
        let f = |v: f64, o: f64| ((v - o) / self.cell).floor().clamp(-1e15, 1e15) as i64;
        (
            f(b.lo[0], self.origin[0]),
            f(b.lo[1], self.origin[1]),
            f(b.hi[0], self.origin[0]),
            f(b.hi[1], self.origin[1]),
        )
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn bbox(&self, i: usize) -> &BBox {
        &self.boxes[i]
    }

    /// Indices whose boxes overlap `q`, sorted, without duplicates.
    pub fn query(&self, q: &BBox) -> Vec<usize> {
        let (x0, y0, x1, y1) = self.span(q);
        let ncells = (x1 - x0 + 1).saturating_mul(y1 - y0 + 1);
        let mut out: Vec<usize> = Vec::new();
        if ncells as usize > self.cells.len().max(16) {
            for (key, v) in &self.cells {
                if (x0..=x1).contains(&key.0) && (y0..=y1).contains(&key.1) {
                    out.extend(v.iter().map(|&i| i as usize));
                }
            }
        } else {
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    if let Some(v) = self.cells.get(&(cx, cy)) {
                        out.extend(v.iter().map(|&i| i as usize));
                    }
                }
            }
        }
        out.extend(self.oversize.iter().map(|&i| i as usize));
        out.sort_unstable();
        out.dedup();
        out.retain(|&i| self.boxes[i].overlaps(q));
        out
    }
}
