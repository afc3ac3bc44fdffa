//! 8-connected component labeling.
//!
//! Classic two-pass labeling over a union-find forest: the first raster pass
//! assigns provisional labels from the already-visited neighbors (W, NW, N,
//! NE) and records equivalences, the second pass resolves each provisional
//! label to a dense id in order of first raster appearance.

use super::BinaryMask;

/// One connected foreground region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Dense 0-based id in raster-scan discovery order.
    pub id: usize,
    pub pixel_count: usize,
    /// Inclusive `(min_x, min_y, max_x, max_y)`.
    pub bbox: (usize, usize, usize, usize),
}

impl Component {
    pub fn bbox_width(&self) -> usize {
        self.bbox.2 - self.bbox.0 + 1
    }

    pub fn bbox_height(&self) -> usize {
        self.bbox.3 - self.bbox.1 + 1
    }
}

/// Per-pixel component ids together with the component list.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub width: usize,
    pub height: usize,
    /// `None` for background, otherwise the owning component's id.
    pub labels: Vec<Option<usize>>,
    pub components: Vec<Component>,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new() -> Self {
        Self { parent: Vec::new() }
    }

    fn make(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Label every foreground pixel with its 8-connected component.
pub fn label_components(mask: &BinaryMask) -> Labeling {
    let (w, h) = (mask.width(), mask.height());
    let bits = mask.bits();
    let mut provisional = vec![usize::MAX; w * h];
    let mut sets = DisjointSet::new();

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !bits[i] {
                continue;
            }
            let mut label = usize::MAX;
            let mut neighbors = [usize::MAX; 4];
            if x > 0 {
                neighbors[0] = provisional[i - 1];
            }
            if y > 0 {
                let up = i - w;
                if x > 0 {
                    neighbors[1] = provisional[up - 1];
                }
                neighbors[2] = provisional[up];
                if x + 1 < w {
                    neighbors[3] = provisional[up + 1];
                }
            }
            for &n in neighbors.iter().filter(|&&n| n != usize::MAX) {
                if label == usize::MAX {
                    label = n;
                } else {
                    sets.union(label, n);
                }
            }
            if label == usize::MAX {
                label = sets.make();
            }
            provisional[i] = label;
        }
    }

    let mut dense = vec![usize::MAX; sets.parent.len()];
    let mut components: Vec<Component> = Vec::new();
    let mut labels = vec![None; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if provisional[i] == usize::MAX {
                continue;
            }
            let root = sets.find(provisional[i]);
            if dense[root] == usize::MAX {
                dense[root] = components.len();
                components.push(Component {
                    id: components.len(),
                    pixel_count: 0,
                    bbox: (x, y, x, y),
                });
            }
            let id = dense[root];
            let c = &mut components[id];
            c.pixel_count += 1;
            c.bbox.0 = c.bbox.0.min(x);
            c.bbox.1 = c.bbox.1.min(y);
            c.bbox.2 = c.bbox.2.max(x);
            c.bbox.3 = c.bbox.3.max(y);
            labels[i] = Some(id);
        }
    }

    Labeling {
        width: w,
        height: h,
        labels,
        components,
    }
}

/// Components of the mask under 8-connectivity, ordered by first raster-scan encounter.
pub fn connected_components(mask: &BinaryMask) -> Vec<Component> {
    label_components(mask).components
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_separate_squares() {
        let m = BinaryMask::from_fn(12, 5, |x, y| y < 3 && (x < 3 || (5..8).contains(&x)));
        let cs = connected_components(&m);
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.pixel_count == 9));
        assert_eq!(cs[0].bbox, (0, 0, 2, 2));
        assert_eq!(cs[1].bbox, (5, 0, 7, 2));
    }

    #[test]
    fn empty_mask_has_no_components() {
        assert!(connected_components(&BinaryMask::empty(8, 8)).is_empty());
        assert!(connected_components(&BinaryMask::empty(0, 0)).is_empty());
    }

    #[test]
    fn diagonal_touch_is_one_component() {
        let mut m = BinaryMask::empty(4, 4);
        m.set(1, 1, true);
        m.set(2, 2, true);
        assert_eq!(connected_components(&m).len(), 1);
        let mut m = BinaryMask::empty(4, 4);
        m.set(2, 1, true);
        m.set(1, 2, true);
        assert_eq!(connected_components(&m).len(), 1);
    }

    #[test]
    fn u_shape_merges_late_and_keeps_discovery_order() {
        // Two arms that only join at the bottom row; a separate dot appears
        // between the arms' first pixels in raster order.
        let rows = ["#.#.#", "#...#", "#####"];
        let m = BinaryMask::from_fn(5, 3, |x, y| rows[y].as_bytes()[x] == b'#');
        let cs = connected_components(&m);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].pixel_count, 9);
        assert_eq!(cs[0].bbox, (0, 0, 4, 2));
        assert_eq!(cs[1].pixel_count, 1);
        assert_eq!(cs[1].bbox, (2, 0, 2, 0));
    }

    #[test]
    fn labels_match_components() {
        let rows = ["##..#", "....#", "#.#.."];
        let m = BinaryMask::from_fn(5, 3, |x, y| rows[y].as_bytes()[x] == b'#');
        let lab = label_components(&m);
        assert_eq!(lab.components.len(), 4);
        for (i, &bit) in m.bits().iter().enumerate() {
            assert_eq!(bit, lab.labels[i].is_some());
        }
        assert_eq!(lab.labels[0], Some(0));
        assert_eq!(lab.labels[4], Some(1));
        assert_eq!(lab.labels[10], Some(2));
        assert_eq!(lab.labels[12], Some(3));
    }
}
