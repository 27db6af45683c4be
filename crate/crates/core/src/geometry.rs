//! Double-precision boundary analysis of rational maps of the disk: traces,
//! starlikeness and close-to-convexity margins, Kaplan's integral, the
//! class-U functional, SVG figures and a summary report.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::poly::{complex_roots, Poly};
use crate::reconstruct::{lookup, RationalFn, REPRESENTATIVES};
use crate::{Error, Result};

/// Angular exclusion around boundary poles.
pub const POLE_EXCLUSION: f64 = 1e-9;
/// Denominator roots this close to the unit circle count as boundary poles.
const ON_CIRCLE: f64 = 1e-6;
pub const DEFAULT_CLIP: f64 = 6.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Near a boundary pole the polynomials are evaluated in `u = z - zeta`,
/// which avoids the cancellation in `Q(z)` close to its root.
#[derive(Clone, Debug)]
struct Center {
    angle: f64,
    zeta: Complex64,
    p: [Vec<Complex64>; 3],
    q: [Vec<Complex64>; 3],
}

/// `f = P/Q` with float coefficients and its first two derivatives.
#[derive(Clone, Debug)]
struct FloatFn {
    p: [Vec<f64>; 3],
    q: [Vec<f64>; 3],
    poles: Vec<f64>,
    centers: Vec<Center>,
}

/// Radius around a boundary pole inside which shifted evaluation is used.
const SHIFT_RADIUS: f64 = 0.5;

fn deriv(cs: &[f64]) -> Vec<f64> {
    cs.iter().enumerate().skip(1).map(|(i, x)| x * i as f64).collect()
}

fn horner<T: Copy>(cs: &[T], z: Complex64) -> Complex64
where
    Complex64: std::ops::Add<T, Output = Complex64>,
{
    cs.iter().rev().fold(c(0.0, 0.0), |acc, x| acc * z + *x)
}

/// Coefficients of `p(zeta + u)` in powers of `u`.
fn taylor_shift(cs: &[f64], zeta: Complex64) -> Vec<Complex64> {
    let mut d: Vec<Complex64> = cs.iter().map(|x| c(*x, 0.0)).collect();
    let n = d.len();
    for k in 0..n.saturating_sub(1) {
        for j in (k..n - 1).rev() {
            let next = d[j + 1];
            d[j] += zeta * next;
        }
    }
    d
}

/// Arguments in `[0, 2pi)` of the distinct roots of `q` on the unit circle;
/// `z = 1` and `z = -1` are detected exactly.
fn boundary_roots(q: &Poly) -> Vec<f64> {
    let square_free = q.div_rem(&q.gcd(&q.derivative())).expect("gcd divides").0;
    let mut out = Vec::new();
    let mut rest = square_free;
    for (root, angle) in [(1i64, 0.0), (-1, PI)] {
        let lin = Poly::from_ints(&[-root, 1]);
        let (quot, rem) = rest.div_rem(&lin).expect("nonzero divisor");
        if rem.is_zero() {
            out.push(angle);
            rest = quot;
        }
    }
    out.extend(
        rest.roots()
            .into_iter()
            .filter(|z| (z.norm() - 1.0).abs() < ON_CIRCLE)
            .map(|z| z.arg().rem_euclid(TAU)),
    );
    out.sort_by(f64::total_cmp);
    out
}

impl FloatFn {
    fn new(r: &RationalFn) -> FloatFn {
        let conv =
            |cs: &[num_bigint::BigInt]| -> Vec<f64> { cs.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect() };
        let p = conv(r.numerator());
        let q = conv(r.denominator());
        let (p1, q1) = (deriv(&p), deriv(&q));
        let (p2, q2) = (deriv(&p1), deriv(&q1));
        let poles = boundary_roots(&r.q());
        let centers = poles
            .iter()
            .map(|&angle| {
                let zeta = Complex64::from_polar(1.0, angle);
                let shift = |cs: &Vec<f64>| taylor_shift(cs, zeta);
                Center {
                    angle,
                    zeta,
                    p: [shift(&p), shift(&p1), shift(&p2)],
                    q: [shift(&q), shift(&q1), shift(&q2)],
                }
            })
            .collect();
        FloatFn {
            p: [p, p1, p2],
            q: [q, q1, q2],
            poles,
            centers,
        }
    }

    /// `P, P', P'', Q, Q', Q''` at `r e^{i theta}`.
    fn parts(&self, r: f64, theta: f64) -> [Complex64; 6] {
        let near = self
            .centers
            .iter()
            .map(|cn| (cn, (theta - cn.angle + PI).rem_euclid(TAU) - PI))
            .filter(|(_, d)| d.abs() < SHIFT_RADIUS && (1.0 - r) < SHIFT_RADIUS)
            .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));
        match near {
            Some((cn, d)) => {
                // r e^{i d} - 1 without cancellation
                let half = (0.5 * d).sin();
                let w = c((r - 1.0) - 2.0 * r * half * half, r * d.sin());
                let u = cn.zeta * w;
                let [p, p1, p2] = cn.p.each_ref().map(|cs| horner(cs, u));
                let [q, q1, q2] = cn.q.each_ref().map(|cs| horner(cs, u));
                [p, p1, p2, q, q1, q2]
            }
            None => {
                let z = Complex64::from_polar(r, theta);
                let [p, p1, p2] = self.p.each_ref().map(|cs| horner(cs, z));
                let [q, q1, q2] = self.q.each_ref().map(|cs| horner(cs, z));
                [p, p1, p2, q, q1, q2]
            }
        }
    }

    /// `(f, f', f'')` at `r e^{i theta}`.
    fn eval(&self, r: f64, theta: f64) -> (Complex64, Complex64, Complex64) {
        let [p, p1, p2, q, q1, q2] = self.parts(r, theta);
        let f = p / q;
        let num1 = p1 * q - p * q1;
        let f1 = num1 / (q * q);
        let f2 = (p2 * q - p * q2) / (q * q) - 2.0 * q1 * num1 / (q * q * q);
        (f, f1, f2)
    }

    fn value(&self, r: f64, theta: f64) -> Complex64 {
        self.eval(r, theta).0
    }

    /// Zeros of `f'` and poles of `f`, where the Kaplan integrand is singular.
    fn critical_points(&self) -> Vec<Complex64> {
        let (p, p1) = (&self.p[0], &self.p[1]);
        let (q, q1) = (&self.q[0], &self.q[1]);
        let mul = |x: &[f64], y: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; x.len() + y.len().max(1) - 1];
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        };
        let (a, b) = (mul(p1, q), mul(p, q1));
        let n = a.len().max(b.len());
        let num: Vec<f64> = (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
            .collect();
        let mut out = complex_roots(&num);
        out.extend(complex_roots(q));
        out
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Samples `w = f(r e^{i theta})` on a uniform grid, skipping angles near
/// boundary poles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub r: f64,
    pub samples: Vec<(f64, [f64; 2])>,
    /// Angles of the excluded poles.
    pub gaps: Vec<f64>,
}

impl BoundaryTrace {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|(_, [x, y])| c(*x, *y))
    }

    /// Polylines for plotting: broken at poles and wherever `|w| > clip`.
    /// A gap-free unclipped trace is closed by repeating its first point.
    pub fn segments(&self, clip: f64) -> Vec<Vec<Complex64>> {
        let mut segs: Vec<Vec<Complex64>> = Vec::new();
        let mut cur: Vec<Complex64> = Vec::new();
        let mut broken = false;
        let mut prev_theta: Option<f64> = None;
        for (theta, [x, y]) in &self.samples {
            let w = c(*x, *y);
            let pole_between = prev_theta.is_some_and(|p| self.gaps.iter().any(|g| *g > p && *g < *theta));
            if pole_between || !w.is_finite() || w.norm() > clip {
                broken = true;
                if !cur.is_empty() {
                    segs.push(std::mem::take(&mut cur));
                }
            }
            if w.is_finite() && w.norm() <= clip {
                cur.push(w);
            }
            prev_theta = Some(*theta);
        }
        if !cur.is_empty() {
            segs.push(cur);
        }
        let first_theta = self.samples.first().map(|s| s.0);
        let last_theta = self.samples.last().map(|s| s.0);
        let wrap_gap = match (first_theta, last_theta) {
            (Some(f), Some(l)) => self.gaps.iter().any(|g| *g > l || *g < f),
            _ => false,
        };
        if !broken && !wrap_gap && segs.len() == 1 {
            let first = segs[0][0];
            segs[0].push(first);
        } else if segs.len() > 1 && !wrap_gap {
            let ends_open = |s: &[Complex64], w: Option<Complex64>| match w {
                Some(w) => s.last() == Some(&w) || s.first() == Some(&w),
                None => false,
            };
            let first_w = self.points().next();
            let last_w = self.points().last();
            // join across theta = 0 when both ends were kept
            if ends_open(&segs[segs.len() - 1], last_w) && ends_open(&segs[0], first_w) {
                let head = segs.remove(0);
                segs.last_mut().expect("nonempty").extend(head);
            }
        }
        segs
    }
}

fn check_radius(r: f64, closed: bool) -> Result<()> {
    let ok = r > 0.0 && if closed { r <= 1.0 } else { r < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::Geometry(format!("radius {r} out of range")))
    }
}

pub fn boundary_trace(f: &RationalFn, r: f64, n: usize) -> Result<BoundaryTrace> {
    check_radius(r, true)?;
    if n < 16 {
        return Err(Error::Geometry(format!("need at least 16 samples, got {n}")));
    }
    let ff = FloatFn::new(f);
    let gaps = ff.poles.clone();
    let samples = (0..n)
        .map(|k| TAU * k as f64 / n as f64)
        .filter(|t| gaps.iter().all(|g| circular_distance(*t, *g) >= POLE_EXCLUSION))
        .map(|t| {
            let w = ff.value(r, t);
            (t, [w.re, w.im])
        })
        .collect();
    Ok(BoundaryTrace { r, samples, gaps })
}

/// `n` uniform angles plus a cluster around each boundary pole, spread over
/// multiples of `1 - r`.
fn probe_angles(poles: &[f64], r: f64, n: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let scale = (1.0 - r).max(1e-12);
    for &p in poles {
        for j in -20..=20 {
            let off = scale * 2f64.powf(j as f64 / 2.0);
            out.push((p + off).rem_euclid(TAU));
            out.push((p - off).rem_euclid(TAU));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn min_over(angles: &[f64], g: impl Fn(f64) -> Complex64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for &t in angles {
        let v = g(t).re;
        if v.is_nan() {
            return Err(Error::Geometry(format!("undefined value at theta = {t}")));
        }
        best = best.min(v);
    }
    Ok(best)
}

/// `min Re[z f'(z) / f(z)]` on `|z| = r`.
pub fn starlike_margin(f: &RationalFn, r: f64, n: usize) -> Result<f64> {
    check_radius(r, false)?;
    let ff = FloatFn::new(f);
    let angles = probe_angles(&ff.poles, r, n);
    min_over(&angles, |t| {
        let (w, w1, _) = ff.eval(r, t);
        Complex64::from_polar(r, t) * w1 / w
    })
}

/// `min Re[z f'(z) / g(z)]` on `|z| = r`.
pub fn ctc_margin(f: &RationalFn, g: &RationalFn, r: f64, n: usize) -> Result<f64> {
    check_radius(r, false)?;
    let ff = FloatFn::new(f);
    let gg = FloatFn::new(g);
    let mut poles = ff.poles.clone();
    poles.extend(gg.poles.iter().copied());
    let angles = probe_angles(&poles, r, n);
    min_over(&angles, |t| {
        let (_, w1, _) = ff.eval(r, t);
        Complex64::from_polar(r, t) * w1 / gg.value(r, t)
    })
}

const QUAD_TOL: f64 = 1e-8;
const QUAD_MAX_EVALS: usize = 20_000_000;

struct Quad<'a> {
    g: &'a dyn Fn(f64) -> f64,
    evals: usize,
}

impl Quad<'_> {
    fn eval(&mut self, t: f64) -> Result<f64> {
        self.evals += 1;
        if self.evals > QUAD_MAX_EVALS {
            return Err(Error::Geometry("quadrature did not converge".into()));
        }
        let v = (self.g)(t);
        if !v.is_finite() {
            return Err(Error::Geometry(format!("integrand not finite at theta = {t}")));
        }
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn simpson(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (self.eval(lm)?, self.eval(rm)?);
        let h = (b - a) / 12.0;
        let left = h * (fa + 4.0 * flm + fm);
        let right = h * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // below this the samples are rounding noise
        let floor = 1e-14 * h.abs() * (fa.abs() + 4.0 * fm.abs() + fb.abs());
        let narrow = b - a <= 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        if delta.abs() <= 15.0 * tol || delta.abs() <= floor || narrow {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Geometry("quadrature did not converge".into()));
        }
        Ok(self.simpson(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + self.simpson(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
    }

    fn integrate(&mut self, breaks: &[f64], tol: f64) -> Result<f64> {
        let total = breaks[breaks.len() - 1] - breaks[0];
        let mut sum = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a)?, self.eval(b)?);
            let fm = self.eval(0.5 * (a + b))?;
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            sum += self.simpson(a, b, fa, fm, fb, whole, tol * (b - a) / total, 48)?;
        }
        Ok(sum)
    }
}

/// `int_{theta1}^{theta2} Re[1 + z f''(z)/f'(z)] d theta` with
/// `z = r e^{i theta}`, i.e. the increase of the tangent angle along the arc.
pub fn kaplan_gap(f: &RationalFn, r: f64, theta1: f64, theta2: f64) -> Result<f64> {
    check_radius(r, false)?;
    if !(theta1 < theta2) || !theta1.is_finite() || !theta2.is_finite() {
        return Err(Error::Geometry(format!("bad arc [{theta1}, {theta2}]")));
    }
    let ff = FloatFn::new(f);
    let integrand = |t: f64| {
        let (_, f1, f2) = ff.eval(r, t);
        (1.0 + Complex64::from_polar(r, t) * f2 / f1).re
    };
    // Coarse grid, refined geometrically around nearby singularities.
    let mut breaks: Vec<f64> = Vec::new();
    let coarse = ((theta2 - theta1) / 0.05).ceil().max(1.0) as usize;
    breaks.extend((0..=coarse).map(|k| theta1 + (theta2 - theta1) * k as f64 / coarse as f64));
    for z in ff.critical_points() {
        let dist = (z.norm() - r).abs().max(1e-14);
        if dist > 0.5 || z.norm() < 1e-12 {
            continue;
        }
        let phi = z.arg();
        for turn in [-TAU, 0.0, TAU, 2.0 * TAU] {
            let center = phi + turn;
            if center < theta1 - 1.0 || center > theta2 + 1.0 {
                continue;
            }
            let mut off = dist / 8.0;
            while off < 0.5 {
                for x in [center - off, center + off] {
                    if x > theta1 && x < theta2 {
                        breaks.push(x);
                    }
                }
                off *= 2.0;
            }
            if center > theta1 && center < theta2 {
                breaks.push(center);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut q = Quad {
        g: &integrand,
        evals: 0,
    };
    q.integrate(&breaks, QUAD_TOL)
}

/// `|z^2 f'(z) / f(z)^2 - 1|^2`.
pub fn u_functional_sq(f: &RationalFn, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Ok(0.0);
    }
    let (w, w1, _) = FloatFn::new(f).eval(z.norm(), z.arg());
    if w.norm() == 0.0 || !w.is_finite() {
        return Err(Error::Geometry(format!("f has a zero or pole at {z}")));
    }
    Ok((z * z * w1 / (w * w) - 1.0).norm_sqr())
}

/// SVG 1.1 document, one polyline per segment, with the view box fitted to
/// the kept points plus a 5% margin. The y axis points up.
pub fn svg_string(traces: &[BoundaryTrace], clip: f64) -> Result<String> {
    if traces.is_empty() {
        return Err(Error::Geometry("no traces to render".into()));
    }
    let segs: Vec<Vec<Complex64>> = traces.iter().flat_map(|t| t.segments(clip)).collect();
    let pts = || segs.iter().flatten();
    if pts().next().is_none() {
        return Err(Error::Geometry("every sample was clipped".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for w in pts() {
        x0 = x0.min(w.re);
        x1 = x1.max(w.re);
        y0 = y0.min(-w.im);
        y1 = y1.max(-w.im);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.05 * span;
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"{:.0}\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\">",
        (480.0 * vh / vw).clamp(48.0, 4800.0)
    );
    let stroke = span * 0.004;
    for seg in &segs {
        let _ = write!(
            s,
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\" points=\""
        );
        for (i, w) in seg.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.6},{:.6}", w.re, -w.im);
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_svg(traces: &[BoundaryTrace], path: &Path) -> Result<()> {
    let s = svg_string(traces, DEFAULT_CLIP)?;
    std::fs::write(path, s)?;
    Ok(())
}

/// Starlike comparison functions used as close-to-convexity witnesses.
pub const CTC_WITNESSES: &[(&str, &str)] = &[
    ("f2", "koebe"),
    ("f3", "friedman_05"),
    ("f4", "friedman_05"),
    ("f5", "koebe"),
];

/// Arc on which the Kaplan integral of `f6` drops below `-pi`.
pub fn f6_kaplan_arc() -> (f64, f64, f64) {
    (0.99999, PI / 3.0 + 0.05, 5.0 * PI / 3.0 - 0.05)
}

const BOUNDARY_NOTES: &[(&str, &str)] = &[
    ("f1", "cardioid; bounded closed curve"),
    ("f2", "unbounded; one boundary pole at z = 1"),
    ("f3", "unbounded; boundary poles at z = 1 and z = -1"),
    ("f4", "plane minus two slits on Re w = -1/4, |Im w| >= sqrt(3)/4"),
    (
        "f5",
        "parabola x + 2y^2 + 3/8 = 0 (concave, opening angle 2pi: not checked)",
    ),
    ("f6", "unbounded; boundary poles at exp(+-i pi/3); 2 Im w = sin(theta)"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CtcWitness {
    pub g: String,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KaplanViolation {
    pub r: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub catalog_id: String,
    pub function: String,
    pub starlike: bool,
    pub starlike_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctc_witness: Option<CtcWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kaplan_violation: Option<KaplanViolation>,
    pub class_u: bool,
    /// Largest sampled `|z^2 f'/f^2 - 1|^2` and where it occurs.
    pub u_sup: f64,
    pub u_sup_at: [f64; 2],
    pub boundary: String,
}

pub const REPORT_RADIUS: f64 = 0.9999;
pub const REPORT_SAMPLES: usize = 4096;

fn u_sup(f: &RationalFn) -> (f64, Complex64) {
    let mut best = (f64::NEG_INFINITY, c(0.0, 0.0));
    let radii = [0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 1.0];
    for &r in &radii {
        for k in 0..720 {
            let z = Complex64::from_polar(r, TAU * k as f64 / 720.0);
            if let Ok(v) = u_functional_sq(f, z) {
                if v.is_finite() && v > best.0 {
                    best = (v, z);
                }
            }
        }
    }
    best
}

/// One row for a representative id (`f1`..`f6`).
pub fn report_row(id: &str) -> Result<ReportRow> {
    let entry = lookup(id)?;
    let f = &entry.function;
    let starlike_margin = starlike_margin(f, REPORT_RADIUS, REPORT_SAMPLES)?;
    let starlike = starlike_margin > 0.0;
    let ctc_witness = match CTC_WITNESSES.iter().find(|(s, _)| *s == id) {
        Some((_, g)) => {
            let g_entry = lookup(g)?;
            let margin = ctc_margin(f, &g_entry.function, REPORT_RADIUS, REPORT_SAMPLES)?;
            Some(CtcWitness { g: g_entry.id, margin })
        }
        None => None,
    };
    let kaplan_violation = if id == "f6" {
        let (r, theta1, theta2) = f6_kaplan_arc();
        Some(KaplanViolation {
            r,
            theta1,
            theta2,
            gap: kaplan_gap(f, r, theta1, theta2)?,
        })
    } else {
        None
    };
    let (u, at) = u_sup(f);
    let boundary = BOUNDARY_NOTES
        .iter()
        .find(|(s, _)| *s == id)
        .map(|(_, d)| d.to_string())
        .unwrap_or_default();
    Ok(ReportRow {
        id: id.to_string(),
        catalog_id: entry.id,
        function: f.to_string(),
        starlike,
        starlike_margin,
        ctc_witness,
        kaplan_violation,
        class_u: u <= 1.0 + 1e-9,
        u_sup: u,
        u_sup_at: [at.re, at.im],
        boundary,
    })
}

pub fn report_rows() -> Result<Vec<ReportRow>> {
    REPRESENTATIVES.iter().map(|(id, _)| report_row(id)).collect()
}

pub fn report_markdown(rows: &[ReportRow]) -> String {
    let mut s = String::new();
    s.push_str("# Geometry of the half-integer representatives\n\n");
    let _ = writeln!(
        s,
        "Margins sampled on |z| = {REPORT_RADIUS} with {REPORT_SAMPLES} uniform angles plus pole clusters.\n"
    );
    s.push_str("| id | f | starlike (min Re zf'/f) | close-to-convex | class U (sup |z^2f'/f^2-1|^2) | boundary |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for r in rows {
        let star = format!("{} ({:.6})", if r.starlike { "yes" } else { "no" }, r.starlike_margin);
        let ctc = match (&r.ctc_witness, &r.kaplan_violation) {
            _ if r.starlike => "yes (starlike)".to_string(),
            (Some(w), _) => format!("yes, g = {} (min Re zf'/g = {:.6})", w.g, w.margin),
            (None, Some(k)) => format!(
                "no: Kaplan gap {:.6} < -pi on [{:.6}, {:.6}], r = {}",
                k.gap, k.theta1, k.theta2, k.r
            ),
            (None, None) => "unknown".to_string(),
        };
        let u = format!(
            "{} ({:.6} at {:.6}{:+.6}i)",
            if r.class_u { "yes" } else { "no" },
            r.u_sup,
            r.u_sup_at[0],
            r.u_sup_at[1]
        );
        let _ = writeln!(
            s,
            "| {} | `{}` | {} | {} | {} | {} |",
            r.id, r.function, star, ctc, u, r.boundary
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_function;

    fn f(s: &str) -> RationalFn {
        parse_function(s).unwrap()
    }

    #[test]
    fn identity_trace_is_unit_circle() {
        let t = boundary_trace(&f("z"), 1.0, 64).unwrap();
        assert_eq!(t.samples.len(), 64);
        assert!(t.gaps.is_empty());
        for w in t.points() {
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
        let segs = t.segments(DEFAULT_CLIP);
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].first(), segs[0].last());
    }

    #[test]
    fn poles_are_excluded() {
        let t = boundary_trace(&f("z/(1-z^2)"), 1.0, 64).unwrap();
        assert_eq!(t.gaps.len(), 2);
        assert_eq!(t.samples.len(), 62);
        assert!(t.points().all(|w| w.is_finite()));
    }

    #[test]
    fn bad_arguments() {
        assert!(boundary_trace(&f("z"), 0.0, 64).is_err());
        assert!(boundary_trace(&f("z"), 1.0, 8).is_err());
        assert!(starlike_margin(&f("z"), 1.0, 64).is_err());
        assert!(kaplan_gap(&f("z"), 0.5, 1.0, 1.0).is_err());
        assert!(svg_string(&[], DEFAULT_CLIP).is_err());
    }

    #[test]
    fn kaplan_identity_is_arc_length() {
        let g = kaplan_gap(&f("z"), 0.7, 0.3, 2.9).unwrap();
        assert!((g - 2.6).abs() < 1e-8);
    }

    #[test]
    fn u_functional_examples() {
        assert_eq!(u_functional_sq(&f("z"), c(0.3, 0.4)).unwrap(), 0.0);
        let k = u_functional_sq(&f("z/(1-z)^2"), c(0.5, 0.0)).unwrap();
        assert!((k - 0.0625).abs() < 1e-12);
        assert!(u_functional_sq(&f("z/(1-z)"), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn svg_has_polylines() {
        let t = boundary_trace(&f("z+z^2/2"), 1.0, 256).unwrap();
        let s = svg_string(&[t], DEFAULT_CLIP).unwrap();
        assert!(s.starts_with("<?xml"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
