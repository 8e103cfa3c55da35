//! Adaptive Gauss-Kronrod integration.
//!
//! Infinite endpoints are truncated at `±TAIL_CUTOFF`, which is enough for
//! every integrand in this crate (all decay at least like `exp(-x²/6)`).
//! Integrable power-law singularities of order up to `|x|^{-2/3}` are
//! handled by [`integrate_with_singularity`], which splits the domain at the
//! singular point and maps each side through `x = p ± w·t³`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Integration domain with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::Domain(format!(
                "interval requires lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Interval { lower, upper })
    }

    pub fn real_line() -> Self {
        Interval {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// The interval with infinite endpoints replaced by `±TAIL_CUTOFF`.
    pub fn truncated(&self) -> (f64, f64) {
        (
            self.lower.max(-TAIL_CUTOFF),
            self.upper.min(TAIL_CUTOFF),
        )
    }
}

/// Where infinite domains are cut. `exp(-40²/6) < e^{-266}`.
pub const TAIL_CUTOFF: f64 = 40.0;

const MAX_SUBINTERVALS: usize = 4000;

/// Absolute and relative stopping tolerances; refinement stops once the
/// error estimate falls below the larger of the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs.max(self.rel * estimate.abs())
    }
}

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes, at QUADPACK's printed
// precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One application of the 15-point Kronrod rule on `[a, b]`.
///
/// Returns `(estimate, error_estimate)`. The endpoints are never evaluated.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (value, err, _) = gk15(f, a, b);
    (value, err)
}

/// [`gauss_kronrod_15`] plus the rule's estimate of ∫|f|.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err, res_abs)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs: f64,
}

/// Each rule's error estimate is floored at 50ε·∫|f|; once the total error
/// is within twice that floor, further bisection only reshuffles roundoff.
fn converged(tol: Tolerance, estimate: f64, err: f64, abs_integral: f64) -> bool {
    err <= tol.target(estimate) || err <= 100.0 * f64::EPSILON * abs_integral
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integration of `f` over `[points[0], points[last]]`,
/// starting from the partition given by the increasing `points`. Starting
/// from several cells keeps one 15-point rule from missing a narrow peak
/// and reporting a near-zero error for it.
fn adaptive<F: Fn(f64) -> f64>(f: &F, points: &[f64], tol: Tolerance) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (value, err, abs) = gk15(f, a, b);
        if !value.is_finite() {
            return Err(Error::Divergence(format!(
                "non-finite quadrature estimate on [{a}, {b}]"
            )));
        }
        total += value;
        total_err += err;
        total_abs += abs;
        heap.push(Segment { a, b, value, err, abs });
    }
    if converged(tol, total, total_err, total_abs) {
        return Ok(total);
    }
    while heap.len() < MAX_SUBINTERVALS {
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1, a1) = gk15(f, worst.a, mid);
        let (v2, e2, a2) = gk15(f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::Divergence(format!(
                "non-finite quadrature estimate near x = {mid}"
            )));
        }
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        total_abs += a1 + a2 - worst.abs;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1, abs: a1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2, abs: a2 });
        if converged(tol, total, total_err, total_abs) {
            // re-sum to shed the drift of the running updates
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.err).sum();
            total_abs = heap.iter().map(|s| s.abs).sum();
            if converged(tol, total, total_err, total_abs) {
                return Ok(total);
            }
        }
    }
    let estimate: f64 = heap.iter().map(|s| s.value).sum();
    let error_bound: f64 = heap.iter().map(|s| s.err).sum();
    let abs_integral: f64 = heap.iter().map(|s| s.abs).sum();
    if converged(tol, estimate, error_bound, abs_integral) {
        return Ok(estimate);
    }
    Err(Error::NonConvergence {
        estimate,
        error_bound,
    })
}

/// Integrates `f` over `domain` to absolute accuracy `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Interval, abs_tol: f64) -> Result<f64> {
    integrate_tol(f, domain, Tolerance::absolute(abs_tol))
}

/// Like [`integrate`] with an explicit absolute/relative tolerance pair.
pub fn integrate_tol<F: Fn(f64) -> f64>(f: F, domain: Interval, tol: Tolerance) -> Result<f64> {
    check_tolerance(tol)?;
    let (a, b) = domain.truncated();
    if a >= b {
        return Ok(0.0);
    }
    adaptive(&f, &initial_partition(domain, a, b), tol)
}

/// Four equal cells on a finite domain; on a truncated side, cells that
/// double in width away from the origin.
fn initial_partition(domain: Interval, a: f64, b: f64) -> Vec<f64> {
    if domain.is_finite() {
        return (0..=4).map(|i| if i == 4 { b } else { a + (b - a) * i as f64 / 4.0 }).collect();
    }
    let mut points = vec![a, b];
    for k in 0..6 {
        let r = f64::from(1u32 << k);
        points.extend([-r, r]);
    }
    points.push(0.0);
    points.retain(|&x| a <= x && x <= b);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Integrates `f` over `domain` where `f` may have an integrable
/// singularity at `point` (inside or on the boundary of the domain).
///
/// Each side of `point` is mapped through `x = point ± w·t³` on `t ∈ [0, 1]`,
/// which turns a `|x - point|^{-2/3}` blow-up into a bounded integrand.
pub fn integrate_with_singularity<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    point: f64,
    abs_tol: f64,
) -> Result<f64> {
    integrate_with_singularity_tol(f, domain, point, Tolerance::absolute(abs_tol))
}

pub fn integrate_with_singularity_tol<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    point: f64,
    tol: Tolerance,
) -> Result<f64> {
    check_tolerance(tol)?;
    if !domain.contains(point) {
        return Err(Error::Domain(format!(
            "singular point {point} outside [{}, {}]",
            domain.lower(),
            domain.upper()
        )));
    }
    let (a, b) = domain.truncated();
    let side_tol = Tolerance {
        abs: 0.5 * tol.abs,
        rel: tol.rel,
    };
    let mut total = 0.0;
    if b > point {
        let w = b - point;
        let g = |t: f64| {
            let t2 = t * t;
            let v = f(point + w * t2 * t);
            if t2 == 0.0 { 0.0 } else { 3.0 * w * t2 * v }
        };
        total += adaptive(&g, &UNIT_CELLS, side_tol)?;
    }
    if a < point {
        let w = point - a;
        let g = |t: f64| {
            let t2 = t * t;
            let v = f(point - w * t2 * t);
            if t2 == 0.0 { 0.0 } else { 3.0 * w * t2 * v }
        };
        total += adaptive(&g, &UNIT_CELLS, side_tol)?;
    }
    Ok(total)
}

const UNIT_CELLS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn check_tolerance(tol: Tolerance) -> Result<()> {
    if !(tol.abs >= 0.0 && tol.rel >= 0.0) || (tol.abs == 0.0 && tol.rel == 0.0) {
        return Err(Error::Precondition(format!(
            "integration tolerance must be positive, got {tol:?}"
        )));
    }
    Ok(())
}
