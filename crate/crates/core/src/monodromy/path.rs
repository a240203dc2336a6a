use num_complex::Complex64;

/// A piecewise-linear path in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Complex64>,
}

/// Endpoints closer than this are treated as equal when concatenating and
/// when deciding whether a path is closed.
pub const JOIN_TOLERANCE: f64 = 1e-12;

impl Polyline {
    /// # Panics
    /// If `points` is empty.
    pub fn new(points: Vec<Complex64>) -> Self {
        assert!(!points.is_empty(), "a polyline needs at least one point");
        Polyline { points }
    }

    pub fn constant(z: Complex64) -> Self {
        Polyline { points: vec![z] }
    }

    pub fn segment(a: Complex64, b: Complex64) -> Self {
        Polyline { points: vec![a, b] }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn start(&self) -> Complex64 {
        self.points[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.points.last().expect("non-empty")
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() <= JOIN_TOLERANCE
    }

    pub fn reversed(&self) -> Polyline {
        Polyline {
            points: self.points.iter().rev().copied().collect(),
        }
    }

    /// Path `self` followed by `other`; the joint point is kept once.
    pub fn then(&self, other: &Polyline) -> Polyline {
        let mut points = self.points.clone();
        let skip = usize::from((self.end() - other.start()).norm() <= JOIN_TOLERANCE);
        points.extend_from_slice(&other.points[skip..]);
        Polyline { points }
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Smallest distance from the path to `p`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        if self.points.len() == 1 {
            return (self.points[0] - p).norm();
        }
        self.points
            .windows(2)
            .map(|w| segment_distance(w[0], w[1], p).0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Distance from `p` to the segment `[a, b]` and the parameter of the
/// closest point.
pub(crate) fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return ((p - a).norm(), 0.0);
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    ((a + d * s - p).norm(), s)
}
