//! Bilinear extrapolation machinery: the multiplicative convolution of
//! K-curves with respect to `(R^+, dt/t)`, the bilinear Calderon transform,
//! bilinear K/J inequality checks, and the endpoint bounds of the bilinear
//! Yano example.
//!
//! All convolutions of piecewise-linear inputs are evaluated by exact
//! per-segment antiderivatives; quadrature appears only when a density
//! measure is integrated against them.

use crate::envelope::{Envelope, RepresentingMeasure, SegKind};
use crate::error::{Error, Result};
use crate::grid::per_decade_grid;
use crate::norms;
use crate::stepfn::{KCurve, StepFn};

/// How a tabulated function continues beyond its breakpoint range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extend {
    Zero,
    Constant,
}

/// A piecewise-linear function on `(0, inf)` given by breakpoints, with
/// explicit extension behavior on both sides. K-curves start at `(0, 0)` and
/// saturate to a constant on the right.
#[derive(Debug, Clone)]
pub struct TabFn {
    xs: Vec<f64>,
    ys: Vec<f64>,
    left: Extend,
    right: Extend,
}

impl TabFn {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, left: Extend, right: Extend) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Validation("TabFn needs at least two matching breakpoints".into()));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Validation("TabFn breakpoints must increase".into()));
        }
        if xs[0] < 0.0 {
            return Err(Error::Validation("TabFn lives on (0, inf)".into()));
        }
        Ok(TabFn { xs, ys, left, right })
    }

    pub fn from_k_curve(curve: &KCurve) -> Self {
        let (ts, ks) = curve.breakpoints();
        TabFn { xs: ts.to_vec(), ys: ks.to_vec(), left: Extend::Zero, right: Extend::Constant }
    }

    /// `min(1, x)` as a two-segment curve saturating at 1.
    pub fn min_one() -> Self {
        TabFn { xs: vec![0.0, 1.0], ys: vec![0.0, 1.0], left: Extend::Zero, right: Extend::Constant }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] {
            return match self.left {
                Extend::Zero => 0.0,
                Extend::Constant => self.ys[0],
            };
        }
        if x >= self.xs[n - 1] {
            return match self.right {
                Extend::Zero => 0.0,
                Extend::Constant => self.ys[n - 1],
            };
        }
        let i = self.xs.partition_point(|&b| b <= x).max(1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Affine coefficients `(a, b)` with `F(x) = a + b x` on the segment
    /// containing `x` (including the extension regions).
    fn affine_at(&self, x: f64) -> (f64, f64) {
        let n = self.xs.len();
        if x < self.xs[0] {
            return match self.left {
                Extend::Zero => (0.0, 0.0),
                Extend::Constant => (self.ys[0], 0.0),
            };
        }
        if x >= self.xs[n - 1] {
            return match self.right {
                Extend::Zero => (0.0, 0.0),
                Extend::Constant => (self.ys[n - 1], 0.0),
            };
        }
        let i = self.xs.partition_point(|&b| b <= x).max(1);
        let b = (self.ys[i] - self.ys[i - 1]) / (self.xs[i] - self.xs[i - 1]);
        (self.ys[i - 1] - b * self.xs[i - 1], b)
    }
}

/// Exact `int_(lo, hi) F(t/u) G(u) du/u` for piecewise-linear `F`, `G`;
/// `hi` may be infinite. Divergent tails return infinity.
pub fn mult_convolution_partial(f: &TabFn, g: &TabFn, t: f64, lo: f64, hi: f64) -> f64 {
    assert!(t > 0.0 && lo >= 0.0 && hi > lo);
    // u-cuts: breakpoints of G and preimages t/x of breakpoints of F
    let mut cuts: Vec<f64> = g.xs.iter().copied().filter(|&u| u > 0.0).collect();
    cuts.extend(f.xs.iter().filter(|&&x| x > 0.0).map(|&x| t / x));
    cuts.retain(|&u| u > lo && u < hi && u.is_finite());
    cuts.push(lo);
    if hi.is_finite() {
        cuts.push(hi);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut acc = 0.0;
    let segments = cuts.len() - 1 + usize::from(!hi.is_finite());
    for s in 0..segments {
        let u0 = cuts[s];
        let u1 = if s + 1 < cuts.len() { cuts[s + 1] } else { f64::INFINITY };
        let mid = if u0 == 0.0 {
            u1 * 0.5
        } else if u1.is_finite() {
            (u0 * u1).sqrt()
        } else {
            u0 * 2.0
        };
        let (ag, bg) = g.affine_at(mid);
        let (af, bf) = f.affine_at(t / mid);
        // integrand: (af + bf t/u)(ag + bg u)/u
        let c_log = af * ag + bf * t * bg; // * 1/u
        let c_const = af * bg; // * 1
        let c_inv2 = bf * t * ag; // * 1/u^2
        if u0 == 0.0 && (c_log != 0.0 || c_inv2 != 0.0) {
            return f64::INFINITY;
        }
        if u1.is_infinite() && (c_log != 0.0 || c_const != 0.0) {
            return f64::INFINITY;
        }
        if c_log != 0.0 {
            acc += c_log * (u1 / u0).ln();
        }
        if c_const != 0.0 {
            acc += c_const * (u1 - u0);
        }
        if c_inv2 != 0.0 {
            acc += c_inv2 * (1.0 / u0 - if u1.is_finite() { 1.0 / u1 } else { 0.0 });
        }
    }
    acc
}

/// Exact `int_0^inf F(t/u) G(u) du/u`.
pub fn mult_convolution(f: &TabFn, g: &TabFn, t: f64) -> f64 {
    mult_convolution_partial(f, g, t, 0.0, f64::INFINITY)
}

/// `int int K(t/u, f) K(u/r, g) dnu(r) du/u`: for each atom the inner
/// integral is the convolution at `t/r`; density parts integrate it by
/// adaptive quadrature in `log r`.
pub fn bilinear_calderon(f: &StepFn, g: &StepFn, t: f64, nu: &RepresentingMeasure) -> f64 {
    let kf = TabFn::from_k_curve(&f.k_curve());
    let kg = TabFn::from_k_curve(&g.k_curve());
    let conv = |x: f64| mult_convolution(&kf, &kg, x);
    let mut acc = 0.0;
    for &(r, m) in &nu.atoms {
        acc += m * conv(t / r);
    }
    for s in &nu.segments {
        let hi = if s.hi.is_finite() { s.hi } else { t * 1e9 + 1e9 };
        let lo = s.lo.max(hi * 1e-18);
        let w = |r: f64| match s.kind {
            SegKind::Const(c) => c,
            SegKind::InvR(c) => c / r,
        };
        // integrate in x = log r
        acc += crate::quad::integrate(
            |x: f64| {
                let r = x.exp();
                w(r) * conv(t / r) * r
            },
            lo.ln(),
            hi.ln(),
            1e-8 * (1.0 + acc.abs()),
        );
    }
    for c in &nu.cells {
        acc += c.mass * conv(t / (c.lo * c.hi).sqrt());
    }
    acc
}

/// Result of a bilinear K/J sweep.
#[derive(Debug, Clone, Copy)]
pub struct KjReport {
    /// Minimal constant `c` with
    /// `K(t, T(f,g)) <= c tau(t/(s h)) J(s, f) J(h, g)` over the grid.
    pub c: f64,
    pub worst: (f64, f64, f64),
}

/// The model bilinear map: pointwise product of decreasing rearrangements.
pub fn model_product(f: &StepFn, g: &StepFn) -> Result<StepFn> {
    f.decreasing_rearrangement().mul(&g.decreasing_rearrangement())
}

/// Checks the bilinear K/J inequality for the model product map against a
/// given envelope `tau` over `(t, s, h)` grids.
pub fn bilinear_kj_check(f: &StepFn, g: &StepFn, tau: &Envelope) -> Result<KjReport> {
    let prod = model_product(f, g)?;
    let k_prod = prod.k_curve();
    let grid = per_decade_grid(1e-3, 1e3, 8);
    let mut rep = KjReport { c: 0.0, worst: (1.0, 1.0, 1.0) };
    for &t in &grid {
        let k = k_prod.eval(t);
        if k == 0.0 {
            continue;
        }
        for &s in &grid {
            let jf = f.j_functional(s)?;
            for &h in &grid {
                let jg = g.j_functional(h)?;
                let bound = tau.eval(t / (s * h)) * jf * jg;
                if bound > 0.0 && k / bound > rep.c {
                    rep.c = k / bound;
                    rep.worst = (t, s, h);
                }
            }
        }
    }
    Ok(rep)
}

/// `sup_(0 < t < 1) K(t) / (t (1 + log(1/t)))`.
pub fn exp_pair_norm(curve: &KCurve) -> f64 {
    let weight = |t: f64| t * (1.0 + (1.0 / t).ln());
    let val = |t: f64| curve.eval(t) / weight(t);
    let mut cands: Vec<f64> = per_decade_grid(1e-9, 1.0 - 1e-9, 64);
    cands.extend(curve.breakpoints().0.iter().copied().filter(|&t| t > 0.0 && t < 1.0));
    let mut best: f64 = 0.0;
    let mut best_t = 0.5;
    for &t in &cands {
        let v = val(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    best.max(norms::golden_max(val, best_t * 0.9, (best_t * 1.1).min(1.0 - 1e-12)))
}

/// The endpoint bounds of the bilinear Yano example, with the three proof
/// addends reported individually at the worst grid point.
#[derive(Debug, Clone)]
pub struct LagbiReport {
    /// Constant in `conv(1) <= c ||f||_(0,1;K) ||g||_(0,1;K)`.
    pub c_zero_pair: f64,
    /// Constant in `sup conv(t)/(t(1+log 1/t)) <= c ||f||_inf ||g||_inf`.
    pub c_exp_pair: f64,
    /// Worst-case ratios of the three split addends to their displayed
    /// bounds `t ||f||_1 ||g||_inf`, `t log(1/t) ||f||_inf ||g||_inf`,
    /// `t ||f||_inf ||g||_1`.
    pub addend_ratios: [f64; 3],
    pub pass: bool,
}

pub fn lagbi_bounds(f: &StepFn, g: &StepFn, c_bound: f64) -> Result<LagbiReport> {
    let kf = TabFn::from_k_curve(&f.k_curve());
    let kg = TabFn::from_k_curve(&g.k_curve());
    let (nf1, nfs) = (f.integral(), f.sup());
    let (ng1, ngs) = (g.integral(), g.sup());
    if nf1 == 0.0 || ng1 == 0.0 {
        return Ok(LagbiReport {
            c_zero_pair: 0.0,
            c_exp_pair: 0.0,
            addend_ratios: [0.0; 3],
            pass: true,
        });
    }
    // (i): conv at t = 1 against the product of <.>_(0,1;K) norms
    let zero_f = f.k_curve().integral_over_u(0.0, 1.0);
    let zero_g = g.k_curve().integral_over_u(0.0, 1.0);
    let c_zero_pair = mult_convolution(&kf, &kg, 1.0) / (zero_f * zero_g);
    // (ii): the exp-pair norm of the bilinear K-curve, plus the three addends
    let mut c_exp_pair: f64 = 0.0;
    let mut addend_ratios = [0.0f64; 3];
    for &t in per_decade_grid(1e-8, 1.0 - 1e-9, 16).iter() {
        let i1 = mult_convolution_partial(&kf, &kg, t, 0.0, t);
        let i2 = mult_convolution_partial(&kf, &kg, t, t, 1.0);
        let i3 = mult_convolution_partial(&kf, &kg, t, 1.0, f64::INFINITY);
        let weight = t * (1.0 + (1.0 / t).ln());
        c_exp_pair = c_exp_pair.max((i1 + i2 + i3) / (weight * nfs * ngs));
        addend_ratios[0] = addend_ratios[0].max(i1 / (t * nf1 * ngs));
        if t < 1.0 {
            let b2 = t * (1.0 / t).ln() * nfs * ngs;
            if b2 > 0.0 {
                addend_ratios[1] = addend_ratios[1].max(i2 / b2);
            }
        }
        addend_ratios[2] = addend_ratios[2].max(i3 / (t * nfs * ng1));
    }
    let pass = c_exp_pair <= c_bound && addend_ratios.iter().all(|&r| r <= 1.0 + 1e-9);
    Ok(LagbiReport { c_zero_pair, c_exp_pair, addend_ratios, pass })
}
