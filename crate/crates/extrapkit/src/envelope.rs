//! Concave envelopes `tau(t) = inf_theta M(theta) t^theta`, their
//! representing measures `tau(x) = int min(1, x/r) dmu(r)`, and the
//! Calderon-type transform `t -> int K(t/r, f) dmu(r)` the measure induces.
//!
//! For the power family `M(theta) = coeff * theta^(-a) (1-theta)^(-b)` the
//! minimization has a closed form (the stationarity condition is a quadratic
//! in theta), so envelope values are exact to rounding. Tabulated weights
//! fall back to a grid scan plus golden-section refinement.

use crate::error::{Error, Result};
use crate::grid::log_grid;
use crate::stepfn::{KCurve, StepFn};

/// A positive weight over `theta in (0, 1)` (equivalently over `p in (1, inf)`
/// through `theta = 1/p'`).
#[derive(Debug, Clone)]
pub enum WeightSpec {
    /// `coeff * theta^(-a) * (1 - theta)^(-b)` with `a, b >= 0`.
    ThetaPower { coeff: f64, a: f64, b: f64 },
    /// `omega(p) = psi(e^(-p))` with `psi(u) = u^alpha`; a non-tempered
    /// family used by the tempered-weight checks.
    PsiExpNeg { alpha: f64 },
    /// Values tabulated on a strictly increasing theta grid.
    Tabulated { thetas: Vec<f64>, values: Vec<f64> },
}

impl WeightSpec {
    /// The constant weight `M == c`.
    pub fn constant(c: f64) -> Self {
        WeightSpec::ThetaPower { coeff: c, a: 0.0, b: 0.0 }
    }

    /// `theta^(-a) (1-theta)^(-b)`.
    pub fn theta_power(a: f64, b: f64) -> Self {
        WeightSpec::ThetaPower { coeff: 1.0, a, b }
    }

    /// `p^a (p')^b` in the `p`-parameterization; `p = 1/(1-theta)` and
    /// `p' = 1/theta`, so this is `theta^(-b) (1-theta)^(-a)`.
    pub fn p_form(a: f64, b: f64) -> Self {
        WeightSpec::ThetaPower { coeff: 1.0, a: b, b: a }
    }

    /// The weight `p` of the elementary extrapolation example.
    pub fn yano() -> Self {
        Self::p_form(1.0, 0.0)
    }

    /// Evaluate at interior `theta in (0, 1)`.
    pub fn eval_theta(&self, theta: f64) -> f64 {
        match self {
            WeightSpec::ThetaPower { coeff, a, b } => {
                coeff * theta.powf(-a) * (1.0 - theta).powf(-b)
            }
            WeightSpec::PsiExpNeg { alpha } => {
                let p = 1.0 / (1.0 - theta);
                (-alpha * p).exp()
            }
            WeightSpec::Tabulated { thetas, values } => {
                let n = thetas.len();
                if theta <= thetas[0] {
                    return values[0];
                }
                if theta >= thetas[n - 1] {
                    return values[n - 1];
                }
                let i = thetas.partition_point(|&x| x <= theta);
                let w = (theta - thetas[i - 1]) / (thetas[i] - thetas[i - 1]);
                (values[i - 1].ln() * (1.0 - w) + values[i].ln() * w).exp()
            }
        }
    }

    /// Evaluate in the `p`-parameterization, `p in (1, inf)`.
    pub fn eval_p(&self, p: f64) -> f64 {
        self.eval_theta(1.0 - 1.0 / p)
    }

    /// Exact infimum `inf_(theta in [0,1]) M(theta) t^theta`, boundary values
    /// taken as limits.
    pub fn envelope_at(&self, t: f64) -> f64 {
        assert!(t > 0.0, "envelope needs t > 0");
        match self {
            WeightSpec::ThetaPower { coeff, a, b } => {
                let l = t.ln();
                let mut best = f64::INFINITY;
                if *a == 0.0 {
                    best = best.min(*coeff);
                }
                if *b == 0.0 {
                    best = best.min(coeff * t);
                }
                let value = |theta: f64| {
                    coeff * t.powf(theta) * theta.powf(-a) * (1.0 - theta).powf(-b)
                };
                if l == 0.0 {
                    if a + b > 0.0 {
                        best = best.min(value(a / (a + b)));
                    }
                } else {
                    // stationarity: l theta^2 - B theta + a = 0 with
                    // B = l + a + b; pair the roots through the product
                    // a/l so that neither suffers cancellation as l -> 0
                    let bb = l + a + b;
                    let disc = bb * bb - 4.0 * a * l;
                    if disc >= 0.0 {
                        let sq = disc.sqrt();
                        let u = 0.5 * (bb + bb.signum() * sq);
                        let roots = if u != 0.0 { [u / l, a / u] } else { [bb / l, f64::NAN] };
                        for root in roots {
                            if root > 0.0 && root < 1.0 {
                                best = best.min(value(root));
                            }
                        }
                    }
                }
                best
            }
            _ => {
                // grid scan + golden refinement in the log domain
                let g = |theta: f64| self.eval_theta(theta).ln() + theta * t.ln();
                let n = 129;
                let mut best_i = 0;
                let mut best = f64::INFINITY;
                let thetas: Vec<f64> =
                    (0..=n).map(|i| (i as f64 + 0.5) / (n as f64 + 1.0)).collect();
                for (i, &th) in thetas.iter().enumerate() {
                    let v = g(th);
                    if v < best {
                        best = v;
                        best_i = i;
                    }
                }
                let lo = if best_i == 0 { 1e-12 } else { thetas[best_i - 1] };
                let hi = if best_i + 1 == thetas.len() { 1.0 - 1e-12 } else { thetas[best_i + 1] };
                let refined = -crate::norms::golden_max(|th| -g(th), lo, hi);
                refined.min(best).exp()
            }
        }
    }
}

/// Closed forms for envelopes that the verification suites compare against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `min(1, t)` (constant weight).
    MinOne,
    /// `e t log(1/t)` on `(0, 1/e)`, `1` beyond (the weight `p`).
    YanoLog,
    /// `2t + t log(1/t)` for `t <= 1`, `2 + log t` beyond (the kernel
    /// integral `int min(1, t/n) min(1, n) dn/n`).
    TwoLog,
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ClosedForm::MinOne => t.min(1.0),
            ClosedForm::YanoLog => {
                if t < (-1.0f64).exp() {
                    std::f64::consts::E * t * (1.0 / t).ln()
                } else {
                    1.0
                }
            }
            ClosedForm::TwoLog => {
                if t <= 1.0 {
                    2.0 * t + t * (1.0 / t).ln()
                } else {
                    2.0 + t.ln()
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum EnvSource {
    Weight(WeightSpec),
    Closed(ClosedForm),
    Table,
}

/// A concave, increasing function `tau` on `(0, inf)` with `tau(t)/t`
/// non-increasing, tabulated on a log grid and evaluable everywhere.
#[derive(Debug, Clone)]
pub struct Envelope {
    source: EnvSource,
    ts: Vec<f64>,
    values: Vec<f64>,
}

/// The default evaluation grid shared by the verification suites.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 512)
}

/// `tau(t) = inf_theta M(theta) t^theta` on the given grid.
pub fn concave_envelope(weight: &WeightSpec, t_grid: &[f64]) -> Result<Envelope> {
    if t_grid.len() < 8 {
        return Err(Error::Parameter("envelope grid needs at least 8 points".into()));
    }
    let values: Vec<f64> = t_grid.iter().map(|&t| weight.envelope_at(t)).collect();
    for (&t, &v) in t_grid.iter().zip(&values) {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Parameter(format!(
                "weight produces a degenerate envelope: tau({t}) = {v}"
            )));
        }
    }
    let env =
        Envelope { source: EnvSource::Weight(weight.clone()), ts: t_grid.to_vec(), values };
    env.validate()?;
    Ok(env)
}

impl Envelope {
    pub fn from_closed_form(form: ClosedForm, t_grid: &[f64]) -> Self {
        let values = t_grid.iter().map(|&t| form.eval(t)).collect();
        Envelope { source: EnvSource::Closed(form), ts: t_grid.to_vec(), values }
    }

    pub fn from_table(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ts.len() != values.len() || ts.len() < 8 {
            return Err(Error::Validation("envelope table needs matching grids".into()));
        }
        let env = Envelope { source: EnvSource::Table, ts, values };
        env.validate()?;
        Ok(env)
    }

    pub fn grid(&self) -> (&[f64], &[f64]) {
        (&self.ts, &self.values)
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        match self.source {
            EnvSource::Closed(c) => Some(c),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let slack = 1e-7;
        for (t, v) in self.ts.windows(2).zip(self.values.windows(2)) {
            if v[1] < v[0] * (1.0 - slack) {
                return Err(Error::Validation(format!("envelope not increasing near t = {}", t[0])));
            }
            if v[1] / t[1] > (v[0] / t[0]) * (1.0 + slack) {
                return Err(Error::Validation(format!(
                    "envelope not quasi-concave near t = {}",
                    t[0]
                )));
            }
        }
        // concavity of the chords
        let mut prev = f64::INFINITY;
        for i in 0..self.ts.len() - 1 {
            let s = (self.values[i + 1] - self.values[i]) / (self.ts[i + 1] - self.ts[i]);
            if s > prev * (1.0 + 1e-6) + 1e-12 {
                return Err(Error::Validation(format!(
                    "envelope not concave near t = {}",
                    self.ts[i]
                )));
            }
            prev = s.max(0.0);
        }
        Ok(())
    }

    /// Evaluate anywhere on `(0, inf)`; weight- and closed-form sources are
    /// exact, tables interpolate linearly (a chord of a concave function)
    /// and extend by the edge behavior.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.source {
            EnvSource::Weight(w) => w.envelope_at(t),
            EnvSource::Closed(c) => c.eval(t),
            EnvSource::Table => {
                let n = self.ts.len();
                if t <= self.ts[0] {
                    return self.values[0] * t / self.ts[0];
                }
                if t >= self.ts[n - 1] {
                    let slope = (self.values[n - 1] - self.values[n - 2])
                        / (self.ts[n - 1] - self.ts[n - 2]);
                    return self.values[n - 1] + slope.max(0.0) * (t - self.ts[n - 1]);
                }
                let i = self.ts.partition_point(|&x| x <= t);
                let w = (t - self.ts[i - 1]) / (self.ts[i] - self.ts[i - 1]);
                self.values[i - 1] * (1.0 - w) + self.values[i] * w
            }
        }
    }
}

/// An analytic density segment of a representing measure.
#[derive(Debug, Clone, Copy)]
pub struct DensitySegment {
    pub lo: f64,
    pub hi: f64,
    pub kind: SegKind,
}

#[derive(Debug, Clone, Copy)]
pub enum SegKind {
    /// `w(r) = c` on the segment.
    Const(f64),
    /// `w(r) = c / r` on the segment.
    InvR(f64),
}

/// One cell of a numerically extracted measure with its exact mass
/// `int_cell (-r) d tau'(r)`.
#[derive(Debug, Clone, Copy)]
pub struct MassCell {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

/// Representing measure of a concave envelope:
/// `tau(t) = alpha + beta t + int min(1, t/r) dmu(r)`, with `dmu` split into
/// detected atoms, analytic density segments and numeric mass cells.
#[derive(Debug, Clone)]
pub struct RepresentingMeasure {
    pub atoms: Vec<(f64, f64)>,
    pub segments: Vec<DensitySegment>,
    pub cells: Vec<MassCell>,
    pub alpha: f64,
    pub beta: f64,
}

impl RepresentingMeasure {
    /// A single unit atom at `r = 1` (`tau = min(1, t)`).
    pub fn dirac(r: f64, mass: f64) -> Self {
        RepresentingMeasure { atoms: vec![(r, mass)], segments: vec![], cells: vec![], alpha: 0.0, beta: 0.0 }
    }

    pub fn zero() -> Self {
        RepresentingMeasure { atoms: vec![], segments: vec![], cells: vec![], alpha: 0.0, beta: 0.0 }
    }

    pub fn total_mass(&self) -> f64 {
        let atom: f64 = self.atoms.iter().map(|a| a.1).sum();
        let seg: f64 = self
            .segments
            .iter()
            .map(|s| match s.kind {
                SegKind::Const(c) => c * (s.hi - s.lo),
                SegKind::InvR(c) => {
                    if s.hi.is_finite() {
                        c * (s.hi / s.lo).ln()
                    } else {
                        f64::INFINITY
                    }
                }
            })
            .sum();
        let cell: f64 = self.cells.iter().map(|c| c.mass).sum();
        atom + seg + cell
    }

    /// Average density per numeric cell, `(r_mid, mass / cell length)` rows.
    pub fn density_table(&self) -> Vec<(f64, f64)> {
        self.cells
            .iter()
            .map(|c| ((c.lo * c.hi).sqrt(), c.mass / (c.hi - c.lo)))
            .collect()
    }

    /// Density value at `r`, averaging numeric cells and evaluating
    /// analytic segments.
    pub fn density_at(&self, r: f64) -> f64 {
        for s in &self.segments {
            if r >= s.lo && r < s.hi {
                return match s.kind {
                    SegKind::Const(c) => c,
                    SegKind::InvR(c) => c / r,
                };
            }
        }
        for c in &self.cells {
            if r >= c.lo && r < c.hi {
                return c.mass / (c.hi - c.lo);
            }
        }
        0.0
    }

    /// `int min(1, t/r) dmu(r)`, exact per atom/segment/cell.
    pub fn kernel_integral(&self, t: f64) -> f64 {
        let mut acc = self.alpha + self.beta * t;
        for &(r, m) in &self.atoms {
            acc += m * (t / r).min(1.0);
        }
        for s in &self.segments {
            acc += match s.kind {
                SegKind::Const(c) => {
                    // int_lo^hi min(1, t/r) dr: the part with r <= t
                    // contributes its length, the rest t log(hi/max(lo, t))
                    let below = (t.min(s.hi) - s.lo).max(0.0);
                    let above = if s.hi > t {
                        let lo = s.lo.max(t);
                        if s.hi.is_finite() {
                            t * (s.hi / lo).ln()
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        0.0
                    };
                    c * (below + above)
                }
                SegKind::InvR(c) => {
                    let below = if t > s.lo { (t.min(s.hi) / s.lo).ln() } else { 0.0 };
                    let above = if s.hi > t {
                        let lo = s.lo.max(t);
                        t * (1.0 / lo - if s.hi.is_finite() { 1.0 / s.hi } else { 0.0 })
                    } else {
                        0.0
                    };
                    c * (below + above)
                }
            };
        }
        for c in &self.cells {
            acc += c.mass * cell_kernel_average(c, t);
        }
        acc
    }
}

/// `(1/|cell|) int_cell min(1, t/r) dr`.
fn cell_kernel_average(c: &MassCell, t: f64) -> f64 {
    if t >= c.hi {
        1.0
    } else if t <= c.lo {
        t * (c.hi / c.lo).ln() / (c.hi - c.lo)
    } else {
        ((t - c.lo) + t * (c.hi / t).ln()) / (c.hi - c.lo)
    }
}

/// Options for the numeric extraction.
#[derive(Debug, Clone, Copy)]
pub struct MeasureOpts {
    /// Cells per decade of the internal differentiation grid.
    pub cells_per_decade: usize,
    /// How far beyond the envelope grid the measure support is probed.
    pub pad_decades: f64,
    /// Slope-jump threshold for atom detection (relative to the maximal slope).
    pub atom_threshold: f64,
}

impl Default for MeasureOpts {
    fn default() -> Self {
        MeasureOpts { cells_per_decade: 512, pad_decades: 5.0, atom_threshold: 1e-6 }
    }
}

/// Extracts the representing measure with the normalization
/// `dmu(r) = -r dtau'(r)`: per-cell masses from the by-parts identity
/// `int_cell -r dtau' = r_lo tau'(r_lo) - r_hi tau'(r_hi) + tau(r_hi) - tau(r_lo)`,
/// atoms at slope discontinuities, affine part from the grid edges.
pub fn representing_measure_numeric(env: &Envelope, opts: MeasureOpts) -> Result<RepresentingMeasure> {
    let (ts, _) = env.grid();
    let pad = 10f64.powf(opts.pad_decades);
    let r_lo = ts[0] / pad;
    let r_hi = ts[ts.len() - 1] * pad;
    let decades = (r_hi / r_lo).log10();
    let n_cells = ((decades * opts.cells_per_decade as f64).ceil() as usize).clamp(1024, 1 << 17);
    let h = (r_hi / r_lo).ln() / n_cells as f64;

    // slopes at the n_cells + 1 cell edges, Richardson-extrapolated central
    // secants in the log variable
    let edge = |j: usize| r_lo * ((j as f64) * h).exp();
    let slope_at = |r: f64| -> f64 {
        let d = |delta: f64| {
            let (a, b) = (r * (-delta).exp(), r * delta.exp());
            (env.eval(b) - env.eval(a)) / (b - a)
        };
        let d1 = d(0.5 * h);
        let d2 = d(0.25 * h);
        (4.0 * d2 - d1) / 3.0
    };
    let n_edges = n_cells + 1;
    let mut slopes = Vec::with_capacity(n_edges);
    let mut taus = Vec::with_capacity(n_edges);
    for j in 0..n_edges {
        let r = edge(j);
        slopes.push(slope_at(r));
        taus.push(env.eval(r));
    }

    let mut cells: Vec<MassCell> = Vec::with_capacity(n_cells);
    for j in 0..n_cells {
        let (lo, hi) = (edge(j), edge(j + 1));
        let mass =
            (lo * slopes[j] - hi * slopes[j + 1] + taus[j + 1] - taus[j]).max(0.0);
        cells.push(MassCell { lo, hi, mass });
    }

    // atom detection: slope jump across a cell that dwarfs the local
    // curvature background
    let max_slope = slopes.iter().cloned().fold(0.0, f64::max);
    let jump = |j: usize| (slopes[j] - slopes[j + 1]).max(0.0);
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut j = 2;
    while j + 3 < n_cells {
        let here = jump(j);
        let background = jump(j.saturating_sub(2))
            .max(jump(j.saturating_sub(3)))
            .max(jump(j + 2))
            .max(jump(j + 3));
        if here > opts.atom_threshold * max_slope && here > 20.0 * background + 1e-14 * max_slope {
            // tangent-intersection refinement using clean edges two cells away
            let (ja, jb) = (j - 2, j + 3);
            let (ra, rb) = (edge(ja), edge(jb));
            let (sa, sb) = (slopes[ja], slopes[jb]);
            if sa - sb > 1e-14 * max_slope {
                let r_star = (taus[jb] - taus[ja] + sa * ra - sb * rb) / (sa - sb);
                let mass = r_star * (sa - sb);
                if r_star.is_finite() && r_star > 0.0 && mass > 0.0 {
                    atoms.push((r_star, mass));
                    // the atom's mass was spread over cells ja..jb; remove it
                    let excess: f64 =
                        cells[ja..jb].iter().map(|c| c.mass).sum::<f64>() - mass;
                    for c in cells[ja..jb].iter_mut() {
                        c.mass = 0.0;
                    }
                    if excess > 0.0 {
                        // return the smooth remainder to the outer cells
                        let half = 0.5 * excess;
                        cells[ja].mass = half;
                        cells[jb - 1].mass = half;
                    }
                    j = jb + 2;
                    continue;
                }
            }
        }
        j += 1;
    }

    let alpha = (taus[0] - edge(0) * slopes[0]).max(0.0);
    let beta = slopes[n_edges - 1].max(0.0);
    cells.retain(|c| c.mass > 0.0);
    Ok(RepresentingMeasure { atoms, segments: vec![], cells, alpha, beta })
}

/// Representing measure, using exact analytic forms for recognized closed
/// shapes and the numeric extractor otherwise.
pub fn representing_measure(env: &Envelope) -> Result<RepresentingMeasure> {
    match env.closed_form() {
        Some(ClosedForm::MinOne) => Ok(RepresentingMeasure::dirac(1.0, 1.0)),
        Some(ClosedForm::YanoLog) => Ok(RepresentingMeasure {
            atoms: vec![],
            segments: vec![DensitySegment {
                lo: 0.0,
                hi: (-1.0f64).exp(),
                kind: SegKind::Const(std::f64::consts::E),
            }],
            cells: vec![],
            alpha: 0.0,
            beta: 0.0,
        }),
        Some(ClosedForm::TwoLog) => Ok(RepresentingMeasure {
            atoms: vec![],
            segments: vec![
                DensitySegment { lo: 0.0, hi: 1.0, kind: SegKind::Const(1.0) },
                DensitySegment { lo: 1.0, hi: f64::INFINITY, kind: SegKind::InvR(1.0) },
            ],
            cells: vec![],
            alpha: 0.0,
            beta: 0.0,
        }),
        None => representing_measure_numeric(env, MeasureOpts::default()),
    }
}

/// Maximal relative deviation of the measure's kernel integral from the
/// envelope over the envelope's grid.
pub fn reconstruction_residual(env: &Envelope, mu: &RepresentingMeasure) -> f64 {
    let (ts, vals) = env.grid();
    let mut worst: f64 = 0.0;
    for (&t, &v) in ts.iter().zip(vals) {
        let rec = mu.kernel_integral(t);
        worst = worst.max((rec - v).abs() / v.max(1e-300));
    }
    worst
}

/// `int_0^inf K(t/r, f; L^1, L^inf) dmu(r)`: atoms exactly, analytic
/// segments by the change of variables `u = t/r` against the piecewise
/// linear K-curve, numeric cells by a Simpson average.
pub fn calderon_transform(f: &StepFn, mu: &RepresentingMeasure, t: f64) -> f64 {
    calderon_transform_curve(&f.k_curve(), mu, t)
}

pub fn calderon_transform_curve(curve: &KCurve, mu: &RepresentingMeasure, t: f64) -> f64 {
    assert!(t > 0.0);
    // the affine part of tau corresponds to the two ends of the scale:
    // alpha to K(inf, f) = ||f||_1 and beta t to t ||f||_inf
    let mut acc = mu.alpha * curve.total() + mu.beta * t * curve.initial_slope();
    for &(r, m) in &mu.atoms {
        acc += m * curve.eval(t / r);
    }
    for s in &mu.segments {
        let (u_lo, u_hi) = (if s.hi.is_finite() { t / s.hi } else { 0.0 }, if s.lo > 0.0 { t / s.lo } else { f64::INFINITY });
        acc += match s.kind {
            SegKind::Const(c) => c * t * curve.integral_over_u2(u_lo, u_hi),
            SegKind::InvR(c) => c * curve.integral_over_u(u_lo, u_hi),
        };
    }
    for c in &mu.cells {
        let mid = (c.lo * c.hi).sqrt();
        let avg = (curve.eval(t / c.lo) + 4.0 * curve.eval(t / mid) + curve.eval(t / c.hi)) / 6.0;
        acc += c.mass * avg;
    }
    acc
}

/// Report of an adequacy check: how well
/// `int int min(1, t/n) min(1, n/r) dnu(r) dn/n` reproduces `tau`.
#[derive(Debug, Clone)]
pub struct AdequacyReport {
    pub max_rel_residual: f64,
    pub max_abs_residual: f64,
    pub worst_t: f64,
}

/// The inner kernel `int_0^inf min(1, x/n) min(1, n) dn/n` in closed form
/// (`x = t/r`); this is exactly [`ClosedForm::TwoLog`].
pub fn double_kernel(x: f64) -> f64 {
    ClosedForm::TwoLog.eval(x)
}

/// Evaluates the double-kernel integral for the candidate measure `nu`
/// against `tau` on the grid of `tau`.
pub fn adequate_decompose_check(tau: &Envelope, nu: &RepresentingMeasure) -> AdequacyReport {
    let (ts, vals) = tau.grid();
    let mut rep = AdequacyReport { max_rel_residual: 0.0, max_abs_residual: 0.0, worst_t: ts[0] };
    for (&t, &v) in ts.iter().zip(vals) {
        let mut a = 0.0;
        for &(r, m) in &nu.atoms {
            a += m * double_kernel(t / r);
        }
        for s in &nu.segments {
            let hi = if s.hi.is_finite() { s.hi } else { ts[ts.len() - 1] * 1e6 };
            let g = |r: f64| match s.kind {
                SegKind::Const(c) => c * double_kernel(t / r),
                SegKind::InvR(c) => c / r * double_kernel(t / r),
            };
            a += crate::quad::integrate_segmented(
                g,
                vec![s.lo.max(hi * 1e-18), t.clamp(s.lo.max(hi * 1e-18), hi), hi],
                1e-9 * v,
            );
        }
        for c in &nu.cells {
            a += c.mass * double_kernel(t / (c.lo * c.hi).sqrt());
        }
        let abs = (a - v).abs();
        let rel = abs / v.max(1e-300);
        if rel > rep.max_rel_residual {
            rep.max_rel_residual = rel;
            rep.worst_t = t;
        }
        rep.max_abs_residual = rep.max_abs_residual.max(abs);
    }
    rep
}
