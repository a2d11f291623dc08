use super::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullShape {
    Polygon,
    Segment,
    Point,
}

/// Convex hull of points in the complex plane, vertices counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HullBoundary {
    pub vertices: Vec<C64>,
    pub shape: HullShape,
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Middle point `a` is not a strict left turn, up to distance `tol` from line o-p.
fn dominated(o: C64, a: C64, p: C64, tol: f64) -> bool {
    cross(o, a, p) <= tol * (p - o).norm()
}

/// Andrew's monotone chain. Near-collinear triples (relative to the point
/// cloud's extent) are dropped, so real Ritz values give a `Segment`.
pub fn complex_convex_hull(points: &[C64]) -> HullBoundary {
    assert!(!points.is_empty(), "convex hull of an empty point set");
    let mut pts: Vec<C64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    pts.dedup_by(|a, b| (*a - *b).norm() <= tol);
    if pts.len() == 1 {
        return HullBoundary {
            vertices: pts,
            shape: HullShape::Point,
        };
    }
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && dominated(lower[lower.len() - 2], lower[lower.len() - 1], p, tol) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && dominated(upper[upper.len() - 2], upper[upper.len() - 1], p, tol) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut vertices = lower;
    if vertices.len() <= 2 {
        // collinear: keep the two extreme points
        let first = pts[0];
        let last = pts[pts.len() - 1];
        vertices = vec![first, last];
        return HullBoundary {
            vertices,
            shape: HullShape::Segment,
        };
    }
    vertices.dedup_by(|a, b| (*a - *b).norm() <= tol);
    HullBoundary {
        vertices,
        shape: HullShape::Polygon,
    }
}

impl HullBoundary {
    /// Samples the boundary with `per_edge` points per edge, starting at each vertex.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<C64> {
        let per_edge = per_edge.max(1);
        match self.shape {
            HullShape::Point => self.vertices.clone(),
            HullShape::Segment => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                (0..=per_edge).map(|j| a + (b - a) * (j as f64 / per_edge as f64)).collect()
            }
            HullShape::Polygon => {
                let m = self.vertices.len();
                let mut out = Vec::with_capacity(m * per_edge);
                for i in 0..m {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % m];
                    out.extend((0..per_edge).map(|j| a + (b - a) * (j as f64 / per_edge as f64)));
                }
                out
            }
        }
    }

    /// Like [`Self::boundary_samples`], but every edge is first split at those of `points`
    /// lying on it (within `1e-8` of the hull's extent), and each piece gets `per_edge`
    /// samples. For a hull of nearly collinear points this keeps clusters of small points
    /// from being stepped over by one long edge.
    pub fn boundary_samples_through(&self, points: &[C64], per_edge: usize) -> Vec<C64> {
        let per_edge = per_edge.max(1);
        let scale = self.vertices.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = 1e-8 * scale;
        let edges: Vec<(C64, C64)> = match self.shape {
            HullShape::Point => return self.vertices.clone(),
            HullShape::Segment => vec![(self.vertices[0], self.vertices[1])],
            HullShape::Polygon => {
                let m = self.vertices.len();
                (0..m).map(|i| (self.vertices[i], self.vertices[(i + 1) % m])).collect()
            }
        };
        let mut out = Vec::new();
        for &(a, b) in &edges {
            let d = b - a;
            let mut ts: Vec<f64> = points
                .iter()
                .filter_map(|&p| {
                    let t = ((p - a) * d.conj()).re / d.norm_sqr();
                    (t > 0.0 && t < 1.0 && (a + d * t - p).norm() <= tol).then_some(t)
                })
                .collect();
            ts.push(0.0);
            ts.push(1.0);
            ts.sort_by(f64::total_cmp);
            ts.dedup_by(|x, y| (*x - *y).abs() * d.norm() <= tol);
            for w in ts.windows(2) {
                let (p, q) = (a + d * w[0], a + d * w[1]);
                out.extend((0..per_edge).map(|j| p + (q - p) * (j as f64 / per_edge as f64)));
            }
        }
        if self.shape == HullShape::Segment {
            out.push(self.vertices[1]);
        }
        out
    }

    /// Point-in-hull test with absolute tolerance `tol`.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        match self.shape {
            HullShape::Point => (z - self.vertices[0]).norm() <= tol,
            HullShape::Segment => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let d = b - a;
                let t = ((z - a) * d.conj()).re / d.norm_sqr();
                let t = t.clamp(0.0, 1.0);
                (a + d * t - z).norm() <= tol
            }
            HullShape::Polygon => {
                let m = self.vertices.len();
                (0..m).all(|i| {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % m];
                    cross(a, b, z) >= -tol * (b - a).norm()
                })
            }
        }
    }
}
