//! Model operators for the extrapolation hypotheses: the averaging operator
//! `P`, its dual `Q`, the Calderon operator `S = P + Q`, diagonal
//! multipliers, certified operator-norm lower bounds over power test
//! families, and the endpoint rearrangement inequalities.
//!
//! Step functions are extended by zero beyond their domain; composite
//! transforms (`PQ`, `QP`) are evaluated through exact piecewise closed
//! forms, never through the discretized output, so the operator algebra can
//! be checked to rounding accuracy.

use crate::error::{Error, Result};
use crate::grid::per_decade_grid;
use crate::norms;
use crate::quad;
use crate::stepfn::StepFn;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// `P f(t) = (1/t) int_0^t f`.
    HardyP,
    /// `Q f(t) = int_t^inf f(s) ds/s` (zero-extended `f`).
    DualHardyQ,
    /// `S = P + Q`.
    CalderonS,
    Identity,
    /// Multiplies the n-th piece of the input by the n-th factor.
    DiagonalMultiplier(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    /// Subintervals per input piece in the discretized output.
    pub resolution: usize,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Refinement(format!(
                "operator resolution must be at least 2 points per piece, got {resolution}"
            )));
        }
        Ok(OperatorSpec { kind, resolution })
    }
}

/// Exact pointwise evaluators for the Hardy-type transforms of a step
/// function (which is treated as zero beyond its domain).
pub struct HardyEval<'a> {
    f: &'a StepFn,
    /// Right endpoints of the pieces.
    bps: Vec<f64>,
    /// `F(b_i) = int_0^(b_i) f`.
    cum: Vec<f64>,
    /// `Q f(b_i)` (suffix log sums).
    qtail: Vec<f64>,
    /// `int_0^(b_i) Q f(s) ds`.
    qint: Vec<f64>,
    /// suffix of `int_(b_i)^L F(s)/s^2 ds`.
    fsuf: Vec<f64>,
    /// `int_0^(b_i) F(s)/s ds`.
    pint: Vec<f64>,
}

impl<'a> HardyEval<'a> {
    pub fn new(f: &'a StepFn) -> Self {
        let n = f.pieces().len();
        let bps = f.breakpoints();
        let mut cum = vec![0.0; n + 1];
        for (i, p) in f.pieces().iter().enumerate() {
            cum[i + 1] = cum[i] + p.len * p.value;
        }
        // Q f at the right endpoints, from the top down
        let mut qtail = vec![0.0; n + 1];
        for i in (0..n).rev() {
            qtail[i] = qtail[i + 1] + f.pieces()[i].value * (bps[i] / piece_lo(&bps, i)).ln();
        }
        // int_0^(b_i) Q f: per piece Qf(s) = v_i ln(b_i / s) + qtail[i + 1]
        let mut qint = vec![0.0; n + 1];
        for i in 0..n {
            let (lo, hi) = (piece_lo(&bps, i), bps[i]);
            let v = f.pieces()[i].value;
            let anti = |s: f64| {
                if s == 0.0 {
                    0.0
                } else {
                    v * (s * (hi / s).ln() + s) + qtail[i + 1] * s
                }
            };
            qint[i + 1] = qint[i] + anti(hi) - anti(lo);
        }
        // suffix integrals int_(b_i)^L F(s)/s^2 ds, F(s) = c + v s per piece
        let mut fsuf = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let (lo, hi) = (piece_lo(&bps, i), bps[i]);
            let v = f.pieces()[i].value;
            let c = cum[i] - v * lo;
            let mut seg = v * (hi / lo.max(1e-300)).ln();
            if c != 0.0 {
                seg += c * (1.0 / lo - 1.0 / hi);
            }
            if v == 0.0 && c == 0.0 {
                seg = 0.0;
            }
            fsuf[i] = fsuf[i + 1] + seg;
        }
        // prefix integrals int_0^(b_i) F(s)/s ds (c = 0 on the first piece)
        let mut pint = vec![0.0; n + 1];
        for i in 0..n {
            let (lo, hi) = (piece_lo(&bps, i), bps[i]);
            let v = f.pieces()[i].value;
            let c = cum[i] - v * lo;
            let mut seg = v * (hi - lo);
            if c != 0.0 {
                seg += c * (hi / lo).ln();
            }
            pint[i + 1] = pint[i] + seg;
        }
        HardyEval { f, bps, cum, qtail, qint, fsuf, pint }
    }

    /// `int_0^t P f(s) ds = int_0^t F(s)/s ds`, with `P f(s) = F(L)/s`
    /// beyond the domain.
    pub fn int_p(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        let l = self.f.domain_length();
        let n = self.bps.len();
        if t >= l {
            return self.pint[n] + self.cum[n] * (t / l).ln();
        }
        let i = self.locate(t);
        let lo = piece_lo(&self.bps, i);
        let v = self.f.pieces()[i].value;
        let c = self.cum[i] - v * lo;
        let mut partial = v * (t - lo);
        if c != 0.0 {
            partial += c * (t / lo).ln();
        }
        self.pint[i] + partial
    }

    fn locate(&self, t: f64) -> usize {
        self.bps.partition_point(|&b| b < t).min(self.bps.len() - 1)
    }

    /// `F(t) = int_0^t f` with saturation.
    pub fn cumulative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let l = self.f.domain_length();
        if t >= l {
            return self.cum[self.bps.len()];
        }
        let i = self.locate(t);
        let lo = piece_lo(&self.bps, i);
        self.cum[i] + self.f.pieces()[i].value * (t - lo)
    }

    pub fn p_at(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        self.cumulative(t) / t
    }

    pub fn q_at(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        if t >= self.f.domain_length() {
            return 0.0;
        }
        let i = self.locate(t);
        self.f.pieces()[i].value * (self.bps[i] / t).ln() + self.qtail[i + 1]
    }

    pub fn s_at(&self, t: f64) -> f64 {
        self.p_at(t) + self.q_at(t)
    }

    /// `P(Q f)(t) = (1/t) int_0^t Q f(s) ds`, through the independent
    /// antiderivative of `Q f`.
    pub fn pq_at(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        let l = self.f.domain_length();
        if t >= l {
            return self.qint[self.bps.len()] / t;
        }
        let i = self.locate(t);
        let lo = piece_lo(&self.bps, i);
        let hi = self.bps[i];
        let v = self.f.pieces()[i].value;
        let anti = |s: f64| {
            if s == 0.0 {
                0.0
            } else {
                v * (s * (hi / s).ln() + s) + self.qtail[i + 1] * s
            }
        };
        (self.qint[i] + anti(t) - anti(lo)) / t
    }

    /// `Q(P f)(t) = int_t^inf F(s)/s^2 ds`, using the zero extension of `f`
    /// (so that `P f(s) = F(L)/s` beyond the domain).
    pub fn qp_at(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        let l = self.f.domain_length();
        let total = self.cum[self.bps.len()];
        if t >= l {
            return total / t;
        }
        let i = self.locate(t);
        let hi = self.bps[i];
        let v = self.f.pieces()[i].value;
        let lo_piece = piece_lo(&self.bps, i);
        let c = self.cum[i] - v * lo_piece;
        let mut partial = v * (hi / t).ln();
        if c != 0.0 {
            partial += c * (1.0 / t - 1.0 / hi);
        }
        partial + self.fsuf[i + 1] + total / l
    }

    pub fn eval(&self, kind: &OperatorKind, t: f64) -> f64 {
        match kind {
            OperatorKind::HardyP => self.p_at(t),
            OperatorKind::DualHardyQ => self.q_at(t),
            OperatorKind::CalderonS => self.s_at(t),
            OperatorKind::Identity => self.f.value_at(t.min(self.f.domain_length())),
            OperatorKind::DiagonalMultiplier(d) => {
                let i = self.locate(t);
                self.f.pieces()[i].value * d.get(i).copied().unwrap_or(1.0)
            }
        }
    }
}

fn piece_lo(bps: &[f64], i: usize) -> f64 {
    if i == 0 {
        0.0
    } else {
        bps[i - 1]
    }
}

/// Discretization of an operator output.
#[derive(Debug, Clone)]
pub struct ApplyOutcome {
    pub f: StepFn,
    /// Certified sup-error of the discretization over the cells where the
    /// transform is bounded.
    pub sup_error: f64,
    /// `Q`/`S` diverge logarithmically at 0; the head cell cannot carry an
    /// upper bound and is flagged instead.
    pub unbounded_head: bool,
}

/// Applies the operator and returns a per-cell upper bound StepFn on the
/// input domain: the discretization error is one-sided, which keeps every
/// downstream `<=` check conservative.
pub fn apply(spec: &OperatorSpec, f: &StepFn) -> Result<ApplyOutcome> {
    if spec.resolution < 2 {
        return Err(Error::Refinement("resolution too coarse".into()));
    }
    match &spec.kind {
        OperatorKind::Identity => {
            Ok(ApplyOutcome { f: f.clone(), sup_error: 0.0, unbounded_head: false })
        }
        OperatorKind::DiagonalMultiplier(d) => {
            let pieces: Vec<(f64, f64)> = f
                .pieces()
                .iter()
                .enumerate()
                .map(|(i, p)| (p.len, p.value * d.get(i).copied().unwrap_or(1.0)))
                .collect();
            Ok(ApplyOutcome {
                f: StepFn::new(f.domain_length(), pieces)?,
                sup_error: 0.0,
                unbounded_head: false,
            })
        }
        kind => {
            let ev = HardyEval::new(f);
            let bps = f.breakpoints();
            let mut cells: Vec<(f64, f64)> = Vec::new();
            let mut lo = 0.0;
            let mut sup_error: f64 = 0.0;
            let mut unbounded_head = false;
            let log_diverges = matches!(kind, OperatorKind::DualHardyQ | OperatorKind::CalderonS)
                && f.pieces()[0].value > 0.0;
            for &b in &bps {
                let step = (b - lo) / spec.resolution as f64;
                for k in 0..spec.resolution {
                    let (a, c) = (lo + step * k as f64, lo + step * (k + 1) as f64);
                    let head = a == 0.0;
                    let (val, err) = cell_sup(&ev, kind, a, c, head && log_diverges);
                    if head && log_diverges {
                        unbounded_head = true;
                    } else {
                        sup_error = sup_error.max(err);
                    }
                    cells.push((c - a, val));
                }
                lo = b;
            }
            Ok(ApplyOutcome { f: StepFn::new(f.domain_length(), cells)?, sup_error, unbounded_head })
        }
    }
}

/// Sup of the transform over the cell `(a, c]`, exact through the closed
/// forms: on a cell inside one input piece the transform is
/// `C + D/t - v log t`, whose only interior critical point is `t = -D/v`.
fn cell_sup(ev: &HardyEval, kind: &OperatorKind, a: f64, c: f64, head_div: bool) -> (f64, f64) {
    let probe_lo = if a == 0.0 {
        if head_div {
            // logarithmically divergent head: report the near-right value
            c * 1e-6
        } else {
            c * 1e-12
        }
    } else {
        a
    };
    let mut cands = vec![probe_lo, c];
    // interior critical point of S on the cell
    if matches!(kind, OperatorKind::CalderonS) && a > 0.0 {
        let i = ev.locate(c.min(ev.f.domain_length() * (1.0 - 1e-15)));
        let v = ev.f.pieces()[i].value;
        let lo_piece = piece_lo(&ev.bps, i);
        let d = ev.cum[i] - v * lo_piece; // P = v + d/t on the piece
        if v > 0.0 && d < 0.0 {
            let t_star = -d / v;
            if t_star > a && t_star < c {
                cands.push(t_star);
            }
        }
    }
    let vals: Vec<f64> = cands.iter().map(|&t| ev.eval(kind, t)).collect();
    let hi = vals.iter().cloned().fold(0.0, f64::max);
    let lo_val = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    (hi, hi - lo_val)
}

/// Result of a certified operator-norm lower bound sweep.
#[derive(Debug, Clone, Copy)]
pub struct NormLowerReport {
    pub lower: f64,
    /// `lower * (p-1)/p`, the quality indicator against the Hardy norm `p'`.
    pub quality: f64,
    pub best_delta: f64,
}

/// `||T f||_p / ||f||_p` maximized over the truncated power family
/// `f = t^(-1/p + delta) chi_((a, 1])` (step-discretized on a log grid);
/// the transform norms are evaluated through the exact piecewise closed
/// forms, so the quotient is a certified lower bound for the operator norm
/// on `L^p(0, 1)`.
///
/// The cutoff must sit very deep: the extremal quotient converges to `p'`
/// only like `1 - c_p / log(1/a)`, so `a = 1e-80` buys the 0.9-quality bound
/// even at `p = 1.1`.
pub fn operator_norm_lower(kind: &OperatorKind, p: f64) -> Result<NormLowerReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("norm sweep needs 1 < p < inf, got {p}")));
    }
    let cutoff = 1e-80;
    let grid = crate::grid::per_decade_grid(cutoff, 1.0, 12);
    let mut best = NormLowerReport { lower: 0.0, quality: 0.0, best_delta: f64::NAN };
    for &delta in &[0.0, 0.002, 0.01, 0.05] {
        let expo = -1.0 / p + delta;
        let mut pieces: Vec<(f64, f64)> = vec![(cutoff, 0.0)];
        for w in grid.windows(2) {
            pieces.push((w[1] - w[0], (w[0] * w[1]).sqrt().powf(expo)));
        }
        let f = StepFn::new(1.0, pieces)?;
        let num = transform_lp_norm(&f, kind, p)?;
        let den = norms::lp_norm(&f, p)?;
        if den > 0.0 && num / den > best.lower {
            best = NormLowerReport {
                lower: num / den,
                quality: num / den * (p - 1.0) / p,
                best_delta: delta,
            };
        }
    }
    Ok(best)
}

/// `||T f||_(L^p(0, L))` by exact per-piece quadrature of the closed-form
/// transform.
pub fn transform_lp_norm(f: &StepFn, kind: &OperatorKind, p: f64) -> Result<f64> {
    let ev = HardyEval::new(f);
    let mut cuts = f.breakpoints();
    cuts.insert(0, 0.0);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let g = |t: f64| ev.eval(kind, t).powf(p);
        acc += if w[0] == 0.0 {
            quad::integrate_to_zero(g, w[1], norms::QUAD_TOL)
        } else {
            quad::integrate(g, w[0], w[1], norms::QUAD_TOL)
        };
    }
    Ok(acc.powf(1.0 / p))
}

/// Constants measured by the endpoint rearrangement checks.
#[derive(Debug, Clone, Copy)]
pub struct YanoReport {
    /// `(Tf)**(t) <= (C/t) int_0^t f**`.
    pub c_averaged: f64,
    /// `(Tf)**(t)/log(2/t) <= C (f**(e t) + ||f||_1 e^-1 / log(2/t))`.
    pub c_log: f64,
    /// `t (Tf)**(t) <= C (int_0^t f** ds + t int_t^inf f** ds/s)`.
    pub c_two_sided: f64,
    pub pass: bool,
}

/// Evaluates the three endpoint inequalities on a `t`-grid in `(0, L]`,
/// using the conservative (upper) discretization of `T f`.
pub fn yano_endpoint_check(spec: &OperatorSpec, f: &StepFn, c_bound: f64) -> Result<YanoReport> {
    let tf = apply(spec, f)?.f;
    let tf_curve = tf.k_curve();
    let f_curve = f.decreasing_rearrangement().k_curve();
    let l = f.domain_length();
    let norm1 = f.integral();
    let mut c_averaged: f64 = 0.0;
    let mut c_log: f64 = 0.0;
    let mut c_two_sided: f64 = 0.0;
    for &t in per_decade_grid(l * 1e-6, l, 24).iter() {
        let tf_dd = tf_curve.eval(t) / t;
        // averaged form
        let rhs_a = f_curve.integral_over_u(0.0, t) / t;
        if rhs_a > 0.0 {
            c_averaged = c_averaged.max(tf_dd / rhs_a);
        }
        // log form (stated on (0, 1); rescale through l)
        let log2t = (2.0 * l / t).ln();
        let et = std::f64::consts::E * t;
        let f_dd_et = f_curve.eval(et.min(l * 1e12)) / et;
        let rhs_l = f_dd_et + norm1 * (-1.0f64).exp() / log2t;
        if rhs_l > 0.0 {
            c_log = c_log.max(tf_dd / log2t / rhs_l);
        }
        // two-sided form
        let rhs_t = f_curve.integral_over_u(0.0, t) + t * f_curve.integral_over_u2(t, f64::INFINITY);
        if rhs_t > 0.0 {
            c_two_sided = c_two_sided.max(t * tf_dd / rhs_t);
        }
    }
    Ok(YanoReport { c_averaged, c_log, c_two_sided, pass: c_averaged <= c_bound })
}

/// `int_0^t g* <= int_0^t f*` at every breakpoint of either curve (hence
/// everywhere, both being piecewise linear).
pub fn rearrangement_majorization(f: &StepFn, g: &StepFn) -> bool {
    let kf = f.k_curve();
    let kg = g.k_curve();
    let mut ts: Vec<f64> = kf.breakpoints().0.to_vec();
    ts.extend_from_slice(kg.breakpoints().0);
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    ts.iter().all(|&t| kg.eval(t) <= kf.eval(t) * (1.0 + 1e-12) + 1e-300)
}

/// The four log-gain quantities at one time `t`:
/// `a0 = int_0^t g*`, `a1 = int_0^t f* log(t/s) ds`, `a2` the same for `g`,
/// `a3 = int_0^t f* log^2(t/s) ds`; all exact on pieces.
#[derive(Debug, Clone, Copy)]
pub struct LogGain {
    pub t: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

fn log_moment(f: &StepFn, t: f64, power: u32) -> f64 {
    let g = f.decreasing_rearrangement();
    // antiderivatives of log(t/s) and log^2(t/s)
    let anti1 = |s: f64| {
        if s == 0.0 {
            0.0
        } else {
            s * (t / s).ln() + s
        }
    };
    let anti2 = |s: f64| {
        if s == 0.0 {
            0.0
        } else {
            let u = (t / s).ln();
            s * (u * u + 2.0 * u + 2.0)
        }
    };
    let mut acc = 0.0;
    let mut lo = 0.0;
    for p in g.pieces() {
        let hi = (lo + p.len).min(t);
        if hi <= lo {
            break;
        }
        acc += p.value
            * match power {
                0 => hi - lo,
                1 => anti1(hi) - anti1(lo),
                2 => anti2(hi) - anti2(lo),
                _ => unreachable!(),
            };
        lo = hi;
    }
    acc
}

pub fn log_gain_quantities(f: &StepFn, g: &StepFn, ts: &[f64]) -> Vec<LogGain> {
    ts.iter()
        .map(|&t| LogGain {
            t,
            a0: log_moment(g, t, 0),
            a1: log_moment(f, t, 1),
            a2: log_moment(g, t, 1),
            a3: log_moment(f, t, 2),
        })
        .collect()
}
