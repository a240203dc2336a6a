//! Default basepoint, generator loops and connecting paths for `z² + c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::path::{segment_distance, Polyline};
use super::poly::{PolynomialMap, ORBIT_TOLERANCE};
use crate::error::{Error, Result};

/// Which side of a postcritical point a straight path detours around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetourSide {
    /// Positive imaginary side.
    Above,
    /// Negative imaginary side.
    Below,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeometryOptions {
    pub basepoint: Option<Complex64>,
    pub detour: Option<DetourSide>,
    /// Overrides `0.1 · min gap` as the loop and detour radius.
    pub loop_radius: Option<f64>,
    pub postcritical: Option<Vec<Complex64>>,
}

/// Fraction of the minimum gap in `P ∪ {t}` used as the loop radius.
pub const LOOP_RADIUS_FACTOR: f64 = 0.1;
const CIRCLE_POINTS: usize = 96;
const ARC_POINTS: usize = 48;

#[derive(Debug, Clone)]
pub struct Geometry {
    pub basepoint: Complex64,
    pub postcritical: Vec<Complex64>,
    pub radius: f64,
    /// One loop per postcritical point, in the order of `postcritical`.
    pub loops: Vec<Polyline>,
    /// `connecting[x]` runs from the basepoint to the preimage labelled `x`.
    pub connecting: Vec<Polyline>,
}

impl Geometry {
    pub fn preimage(&self, x: usize) -> Complex64 {
        self.connecting[x].end()
    }

    /// Generator names `a, b, …` in loop order.
    pub fn generator_names(&self) -> Vec<String> {
        generator_names(self.loops.len())
    }

    /// JSON dump of all paths as `[re, im]` pairs.
    pub fn to_json(&self) -> String {
        let pt = |z: &Complex64| json!([z.re, z.im]);
        let line = |p: &Polyline| p.points().iter().map(pt).collect::<Vec<_>>();
        let names = self.generator_names();
        let value = json!({
            "basepoint": pt(&self.basepoint),
            "postcritical": self.postcritical.iter().map(pt).collect::<Vec<_>>(),
            "radius": self.radius,
            "loops": self.loops.iter().enumerate().map(|(i, l)| json!({
                "generator": names[i],
                "around": pt(&self.postcritical[i]),
                "points": line(l),
            })).collect::<Vec<_>>(),
            "connecting": self.connecting.iter().enumerate().map(|(x, l)| json!({
                "letter": x,
                "points": line(l),
            })).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&value).expect("serializable")
    }
}

pub(crate) fn generator_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

/// Builds the default geometry for a quadratic `z² + c`.
///
/// * Basepoint: the fixed point `(1 − √(1−4c))/2`, or `(1 + √(1−4c))/2` when
///   the first lies in `P`, unless overridden.
/// * Loops: for each `p ∈ P` a straight spoke from `t` to the circle of
///   radius `r` about `p`, the circle once counterclockwise, and back.
/// * Connecting paths: if `t` is fixed, `ℓ_0` is constant and `ℓ_1` runs to
///   `−t`; otherwise `ℓ_0`, `ℓ_1` run to `±√(t − c)`.
///
/// Straight pieces detour along semicircles of radius `r` around
/// postcritical points they pass within `r` of.
pub fn default_geometry(f: &PolynomialMap, opts: &GeometryOptions) -> Result<Geometry> {
    let c = f.quadratic_parameter().ok_or_else(|| {
        Error::Geometry("default geometry is only available for z^2 + c".into())
    })?;
    let postcritical = match &opts.postcritical {
        Some(p) => p.clone(),
        None => f.postcritical_set()?,
    };
    let in_p = |z: Complex64| postcritical.iter().any(|p| (p - z).norm() <= ORBIT_TOLERANCE);
    let basepoint = match opts.basepoint {
        Some(t) => {
            if in_p(t) {
                return Err(Error::Geometry(format!("basepoint {t} is postcritical")));
            }
            t
        }
        None => {
            let s = (Complex64::new(1.0, 0.0) - c * 4.0).sqrt();
            let candidates = [(1.0 - s) / 2.0, (1.0 + s) / 2.0];
            *candidates.iter().find(|&&t| !in_p(t)).ok_or_else(|| {
                Error::Geometry("both fixed points are postcritical; supply a basepoint".into())
            })?
        }
    };
    let mut marks = postcritical.clone();
    marks.push(basepoint);
    let mut gap = f64::INFINITY;
    for i in 0..marks.len() {
        for j in 0..i {
            gap = gap.min((marks[i] - marks[j]).norm());
        }
    }
    let radius = opts.loop_radius.unwrap_or(LOOP_RADIUS_FACTOR * gap);
    if !(radius > 0.0 && radius < gap / 2.0) {
        return Err(Error::Geometry(format!(
            "loop radius {radius} must be positive and below half the minimum gap {gap}"
        )));
    }
    let side = opts.detour.unwrap_or(DetourSide::Above);

    let mut loops = Vec::with_capacity(postcritical.len());
    for (i, &p) in postcritical.iter().enumerate() {
        let others: Vec<Complex64> = postcritical
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &q)| q)
            .collect();
        let dir = (basepoint - p) / (basepoint - p).norm();
        let q = p + dir * radius;
        let spoke = detour_segment(basepoint, q, &others, radius, side)?;
        let theta0 = dir.arg();
        let circle = Polyline::new(
            (0..=CIRCLE_POINTS)
                .map(|k| {
                    if k == CIRCLE_POINTS {
                        q
                    } else {
                        p + Complex64::from_polar(radius, theta0 + 2.0 * PI * k as f64 / CIRCLE_POINTS as f64)
                    }
                })
                .collect(),
        );
        loops.push(spoke.then(&circle).then(&spoke.reversed()));
    }

    let t = basepoint;
    let fixed = (f.eval(t) - t).norm() <= 1e-12 * (1.0 + t.norm());
    let connecting = if fixed {
        vec![Polyline::constant(t), detour_segment(t, -t, &postcritical, radius, side)?]
    } else {
        let s = (t - c).sqrt();
        vec![
            detour_segment(t, s, &postcritical, radius, side)?,
            detour_segment(t, -s, &postcritical, radius, side)?,
        ]
    };
    for path in loops.iter().chain(&connecting) {
        for &p in &postcritical {
            let d = path.distance_to(p);
            if d < radius * 0.99 {
                return Err(Error::Clearance(format!(
                    "path comes within {d:e} of {p} (radius {radius:e})"
                )));
            }
        }
    }
    Ok(Geometry {
        basepoint,
        postcritical,
        radius,
        loops,
        connecting,
    })
}

/// Straight segment from `a` to `b`, replacing each stretch within `r` of a
/// point of `avoid` by an arc of the circle of radius `r` about that point.
pub fn detour_segment(
    a: Complex64,
    b: Complex64,
    avoid: &[Complex64],
    r: f64,
    side: DetourSide,
) -> Result<Polyline> {
    let d = b - a;
    let len = d.norm();
    let mut hits: Vec<(f64, Complex64, f64)> = Vec::new();
    for &p in avoid {
        let (dist, s) = segment_distance(a, b, p);
        if dist < r && len > 0.0 {
            let half = (r * r - dist * dist).sqrt() / len;
            hits.push((s, p, half));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut points = vec![a];
    let mut last = 0.0;
    for &(s, p, half) in &hits {
        let (s_in, s_out) = (s - half, s + half);
        if s_in <= last || s_out >= 1.0 {
            return Err(Error::Clearance(format!(
                "cannot detour around {p}: it is within {r:e} of an endpoint or another detour"
            )));
        }
        let entry = a + d * s_in;
        let exit = a + d * s_out;
        points.push(entry);
        let t_in = (entry - p).arg();
        let t_out = (exit - p).arg();
        let mut ccw = (t_out - t_in).rem_euclid(2.0 * PI);
        if ccw == 0.0 {
            ccw = 2.0 * PI;
        }
        let cw = ccw - 2.0 * PI;
        let mid_above = |sweep: f64| (t_in + sweep / 2.0).sin();
        let sweep = match side {
            DetourSide::Above => {
                if mid_above(ccw) >= mid_above(cw) {
                    ccw
                } else {
                    cw
                }
            }
            DetourSide::Below => {
                if mid_above(ccw) < mid_above(cw) {
                    ccw
                } else {
                    cw
                }
            }
        };
        for k in 1..ARC_POINTS {
            points.push(p + Complex64::from_polar(r, t_in + sweep * k as f64 / ARC_POINTS as f64));
        }
        points.push(exit);
        last = s_out;
    }
    if points.len() == 1 && len == 0.0 {
        return Ok(Polyline::constant(a));
    }
    points.push(b);
    Ok(Polyline::new(points))
}
