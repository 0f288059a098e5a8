//! Adaptive Gauss-Legendre quadrature.
//!
//! A fixed 16-point rule drives an adaptive bisection; the error estimate on
//! a segment is the difference between the one-panel value and the sum over
//! the two half panels. Integrands coming from step-function data are smooth
//! within a piece, so the rule converges very quickly once the piece
//! boundaries are used as initial segmentation points.

const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_8,
    0.062_253_523_938_647_9,
    0.027_152_459_411_754_1,
];

/// One 16-point Gauss-Legendre panel on `[a, b]`.
pub fn gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let dx = h * GL16_X[i];
        acc += GL16_W[i] * (f(c - dx) + f(c + dx));
    }
    acc * h
}

fn adaptive_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl16(f, a, m);
    let right = gl16(f, m, b);
    let err = (left + right - whole).abs();
    // stop on the requested tolerance, on relative convergence at rounding
    // level, or when the panel cannot be split further
    if err <= tol
        || err <= 1e-14 * (left.abs() + right.abs())
        || depth == 0
        || (b - a) < 1e-14 * (a.abs() + b.abs() + 1e-300)
        || !err.is_finite()
    {
        return left + right;
    }
    adaptive_rec(f, a, m, left, 0.5 * tol, depth - 1)
        + adaptive_rec(f, m, b, right, 0.5 * tol, depth - 1)
}

/// Adaptive integral of `f` over `[a, b]` with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl16(&f, a, b);
    adaptive_rec(&f, a, b, whole, tol.max(1e-300), 28)
}

/// Adaptive integral over a segmented interval; `points` are interior
/// breakpoints of the integrand (kinks, jumps of a step factor).
pub fn integrate_segmented<F: Fn(f64) -> f64>(f: F, mut points: Vec<f64>, tol: f64) -> f64 {
    points.retain(|x| x.is_finite());
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    let mut acc = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            acc += integrate(&f, w[0], w[1], tol / (points.len() as f64));
        }
    }
    acc
}

/// Integral of `f` over `(0, b]` for integrands with an integrable
/// singularity at 0 (e.g. powers of `log(1/t)`): dyadic subdivision towards
/// the origin down to `cut`, where the remaining tail is negligible for the
/// weights used in this crate.
pub fn integrate_to_zero<F: Fn(f64) -> f64>(f: F, b: f64, tol: f64) -> f64 {
    assert!(b > 0.0);
    let cut = 1e-280 * b;
    let mut acc = 0.0;
    let mut hi = b;
    let mut quiet = 0u32;
    while hi > cut {
        let lo = (0.5 * hi).max(cut);
        let seg = integrate(&f, lo, hi, (tol * (hi / b) / 4.0).max(tol * 1e-6));
        acc += seg;
        // stop once deep segments stay below the tolerance budget
        if hi < b * 1e-6 && seg.abs() < tol * 1e-3 {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        hi = lo;
    }
    acc
}
