//! The verification harness: each suite certifies one numbered acceptance
//! criterion at its pinned tolerance and reports one pass/fail line per
//! check. `run` executes a single suite or all of them and collects a
//! deterministic report (given config and seed).

use crate::bilinear::{self, TabFn};
use crate::config::Config;
use crate::envelope::{
    concave_envelope, representing_measure_numeric, ClosedForm, MeasureOpts, WeightSpec,
};
use crate::error::{Error, Result};
use crate::functors::{self, ScaleKind, ScaleSpec};
use crate::grid::log_grid;
use crate::norms::{self, QuasiConcaveFn};
use crate::operators::{self, HardyEval, OperatorKind, OperatorSpec};
use crate::report::{CheckReport, RunReport, SuiteReport};
use crate::schatten::{self, SingularSpectrum};
use crate::stepfn::StepFn;
use crate::testfn;

pub const SUITES: [&str; 10] = [
    "envelope",
    "kj",
    "fubini",
    "delta-expl",
    "grand",
    "hardy",
    "calderon",
    "bilinear",
    "schatten",
    "dilation",
];

pub fn list_suites() -> Vec<&'static str> {
    SUITES.to_vec()
}

pub fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport> {
    match name {
        "envelope" => Ok(suite_envelope(cfg)),
        "kj" => Ok(suite_kj(cfg)),
        "fubini" => Ok(suite_fubini(cfg)),
        "delta-expl" => Ok(suite_delta_expl(cfg)),
        "grand" => Ok(suite_grand(cfg)),
        "hardy" => Ok(suite_hardy(cfg)),
        "calderon" => Ok(suite_calderon(cfg)),
        "bilinear" => Ok(suite_bilinear(cfg)),
        "schatten" => Ok(suite_schatten(cfg)),
        "dilation" => Ok(suite_dilation(cfg)),
        other => Err(Error::Parameter(format!(
            "unknown suite '{other}'; available: {}",
            SUITES.join(", ")
        ))),
    }
}

/// Runs one suite or all of them.
pub fn run(which: Option<&str>, cfg: &Config) -> Result<RunReport> {
    let suites = match which {
        None | Some("all") => {
            let mut out = Vec::new();
            for name in SUITES {
                out.push(run_suite(name, cfg)?);
            }
            out
        }
        Some(name) => vec![run_suite(name, cfg)?],
    };
    Ok(RunReport::new(cfg.digest(), cfg.suite.seed, suites))
}

fn max_rel_err(grid: &[f64], got: impl Fn(f64) -> f64, want: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut worst = 0.0;
    let mut at = grid[0];
    for &t in grid {
        let w = want(t);
        let e = (got(t) - w).abs() / w.abs().max(1e-300);
        if e > worst {
            worst = e;
            at = t;
        }
    }
    (worst, at)
}

/// Criteria 1 and 2: envelope closed forms and representing-measure
/// reconstruction.
fn suite_envelope(cfg: &Config) -> SuiteReport {
    let tol = cfg.tolerances.envelope_closed_form;
    let grid = cfg.envelope_grid();
    let mut checks = Vec::new();

    let cases: [(&str, WeightSpec, ClosedForm); 3] = [
        ("1a", WeightSpec::constant(1.0), ClosedForm::MinOne),
        ("1b", WeightSpec::yano(), ClosedForm::YanoLog),
        ("1c", WeightSpec::theta_power(1.0, 1.0), ClosedForm::TwoLog),
    ];
    for (id, weight, form) in &cases {
        let (err, at) = max_rel_err(&grid, |t| weight.envelope_at(t), |t| form.eval(t));
        let mut check = CheckReport::new(
            id,
            &format!("infimum envelope reproduces the {form:?} closed form"),
            tol,
            err <= tol,
        )
        .with("max_rel_err", err)
        .with("worst_t", at);
        if *id == "1c" {
            // the infimum and the kernel form are equivalent, not equal; the
            // measured ratio window is recorded alongside the failure
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for &t in &grid {
                let r = weight.envelope_at(t) / form.eval(t);
                lo = lo.min(r);
                hi = hi.max(r);
            }
            check = check.with("ratio_min", lo).with("ratio_max", hi).detail(
                "the infimum over theta of theta^-1 (1-theta)^-1 t^theta equals 4 at t = 1 \
                 while the kernel form equals 2; the two are equivalent within [1, e], \
                 see check 1c-kernel for the exact identity",
            );
        }
        checks.push(check);
    }

    // the identity that does hold exactly: the kernel integral
    // int min(1, t/n) min(1, n) dn/n (evaluated independently as a
    // piecewise-linear multiplicative convolution) equals the two-log form
    let m1 = TabFn::min_one();
    let (err, at) = max_rel_err(
        &grid,
        |t| bilinear::mult_convolution(&m1, &m1, t),
        |t| ClosedForm::TwoLog.eval(t),
    );
    checks.push(
        CheckReport::new(
            "1c-kernel",
            "kernel integral of min-kernels equals the two-log closed form",
            tol,
            err <= tol,
        )
        .with("max_rel_err", err)
        .with("worst_t", at),
    );

    // criterion 2: numeric measure extraction reconstructs each envelope
    let rec_tol = cfg.tolerances.reconstruction_residual;
    for (id, weight, _) in &cases {
        let env = concave_envelope(weight, &grid).expect("envelopes of the test weights exist");
        let mu = representing_measure_numeric(&env, MeasureOpts::default())
            .expect("measure extraction is total on concave envelopes");
        let res = crate::envelope::reconstruction_residual(&env, &mu);
        checks.push(
            CheckReport::new(
                &format!("2-reconstruct-{id}"),
                "representing measure reconstructs its envelope",
                rec_tol,
                res <= rec_tol,
            )
            .with("max_rel_residual", res)
            .with("atoms", mu.atoms.len() as f64),
        );
    }

    // criterion 2: the extracted density for the p-weight envelope matches
    // e * chi_(0, 1/e) away from the kink
    let den_tol = cfg.tolerances.density_match;
    let env = concave_envelope(&WeightSpec::yano(), &grid).unwrap();
    let mu = representing_measure_numeric(&env, MeasureOpts::default()).unwrap();
    let kink = (-1.0f64).exp();
    let mut worst = 0.0f64;
    for (r, w) in mu.density_table() {
        if r > 1e-5 && r < kink * 0.98 {
            worst = worst.max((w - std::f64::consts::E).abs() / std::f64::consts::E);
        }
        if r > kink * 1.02 && r < 1e4 {
            worst = worst.max(w / std::f64::consts::E);
        }
    }
    checks.push(
        CheckReport::new(
            "2-density",
            "extracted density matches e * chi_(0, 1/e) away from the kink",
            den_tol,
            worst <= den_tol,
        )
        .with("max_rel_err", worst),
    );

    SuiteReport::new("envelope", checks)
}

/// Criteria 3 and 4: the pointwise K/J inequality and the truncation
/// decomposition bounds.
fn suite_kj(cfg: &Config) -> SuiteReport {
    let suite = testfn::random_suite(cfg.suite.seed, cfg.suite.n_random, cfg.suite.max_pieces);
    let ts = log_grid(1e-3, 10.0, cfg.suite.kj_grid);
    let ss = ts.clone();
    let slack = cfg.tolerances.kj_slack;
    let mut worst_violation = 0.0f64;
    let mut gamma: f64 = 0.0;
    let mut lower_ok = true;
    let mut worst_reconstruct = 0.0f64;
    for f in &suite {
        let curve = f.k_curve();
        let (l1, sup) = (f.integral(), f.sup());
        for &t in &ts {
            let k = curve.eval(t);
            for &s in &ss {
                let j = l1.max(s * sup);
                let bound = (1.0f64).min(t / s) * j;
                if k > bound {
                    worst_violation = worst_violation.max((k - bound) / j.max(1e-300));
                }
            }
        }
        // decomposition: exact reconstruction and two-sided J-sum bounds
        let slices = f.truncation_slices(2.0).expect("suite functions are nontrivial");
        let mut sums = vec![0.0f64; f.pieces().len()];
        for s in &slices {
            for (acc, p) in sums.iter_mut().zip(s.part.pieces()) {
                *acc += p.value;
            }
        }
        for (acc, p) in sums.iter().zip(f.pieces()) {
            worst_reconstruct = worst_reconstruct.max((acc - p.value).abs());
        }
        let parts: Vec<(f64, f64, f64)> = slices
            .iter()
            .map(|s| (s.scale, s.part.integral(), s.part.sup()))
            .collect();
        for &t in &ts {
            let k = curve.eval(t);
            let jsum: f64 =
                parts.iter().map(|&(sc, l1, su)| (1.0f64).min(t / sc) * l1.max(sc * su)).sum();
            if k > jsum * (1.0 + 1e-12) {
                lower_ok = false;
            }
            if k > 1e-12 {
                gamma = gamma.max(jsum / k);
            }
        }
    }
    let checks = vec![
        CheckReport::new(
            "3",
            "K(t, f) <= min(1, t/s) J(s, f) pointwise over the random suite",
            slack,
            worst_violation <= slack,
        )
        .with("max_violation", worst_violation)
        .with("suite_size", suite.len() as f64),
        CheckReport::new(
            "4-lower",
            "K(t, f) <= sum min(1, t/2^n) J(2^n, u_n) (subadditivity side)",
            1e-12,
            lower_ok,
        )
        .with("max_reconstruction_err", worst_reconstruct),
        CheckReport::new(
            "4-gamma",
            "J-sum of the truncation slices stays within gamma * K",
            cfg.tolerances.gamma_bound,
            gamma <= cfg.tolerances.gamma_bound,
        )
        .with("suite_max_gamma", gamma),
    ];
    SuiteReport::new("kj", checks)
}

/// Criterion 5: the Fubini identity tying the two Zygmund-space forms.
fn suite_fubini(cfg: &Config) -> SuiteReport {
    let suite = testfn::random_suite(cfg.suite.seed, cfg.suite.n_random, cfg.suite.max_pieces);
    let mut worst = 0.0f64;
    for f in &suite {
        let lhs = f.k_curve().integral_over_u(0.0, 1.0);
        let g = f.decreasing_rearrangement();
        let mut rhs = 0.0;
        let mut lo = 0.0;
        let prim = |t: f64| if t == 0.0 { 0.0 } else { t - t * t.ln() };
        for p in g.pieces() {
            let hi = lo + p.len;
            rhs += p.value * (prim(hi) - prim(lo));
            lo = hi;
        }
        worst = worst.max((lhs - rhs).abs());
    }
    let tol = cfg.tolerances.fubini_abs;
    SuiteReport::new(
        "fubini",
        vec![CheckReport::new(
            "5",
            "int_0^1 f** dt equals int_0^1 f* log(1/s) ds on the suite",
            tol,
            worst <= tol,
        )
        .with("max_abs_err", worst)],
    )
}

/// Criterion 6: the weighted sup-functor over the L^p scale against the
/// exp-L norm on log-power discretizations.
fn suite_delta_expl(cfg: &Config) -> SuiteReport {
    let mut checks = Vec::new();
    let window = cfg.tolerances.delta_expl_window;
    let drift_tol = cfg.tolerances.delta_expl_drift;
    let ppd = cfg.grids.points_per_decade;
    let delta_sup = |f: &StepFn, alpha: f64| -> f64 {
        let w = WeightSpec::ThetaPower { coeff: 1.0, a: 0.0, b: -alpha }; // (1-theta)^alpha = p^-alpha
        let spec = ScaleSpec::new(ScaleKind::Lp, w, cfg.grids.p_max, ppd).unwrap();
        functors::delta_functor_norm(f, &spec).unwrap().value
    };
    for alpha in [1.0, 2.0] {
        // matched growth beta = alpha: ratio window plus grid stability
        let f = testfn::generate(&testfn::Family::LogPow { beta: alpha, t_min: 1e-9 }, 1000).unwrap();
        let ratio = delta_sup(&f, alpha) / norms::exp_l_alpha_norm(&f, alpha).unwrap();
        let f2 = testfn::generate(&testfn::Family::LogPow { beta: alpha, t_min: 1e-9 }, 2000).unwrap();
        let ratio2 = delta_sup(&f2, alpha) / norms::exp_l_alpha_norm(&f2, alpha).unwrap();
        let drift = (ratio2 / ratio - 1.0).abs();
        checks.push(
            CheckReport::new(
                &format!("6-window-a{alpha}"),
                "sup_p p^-alpha ||f||_p comparable to the exp-L norm at beta = alpha",
                window,
                ratio >= 1.0 / window && ratio <= window && drift <= drift_tol,
            )
            .with("ratio", ratio)
            .with("refined_ratio", ratio2)
            .with("drift", drift),
        );
        // beta > alpha: both sides must blow up as the discretization digs
        // deeper; beta < alpha: both stay bounded
        let grow = |beta: f64, t_min: f64| -> (f64, f64) {
            let f = testfn::generate(&testfn::Family::LogPow { beta, t_min }, 1000).unwrap();
            (delta_sup(&f, alpha), norms::exp_l_alpha_norm(&f, alpha).unwrap())
        };
        let (d_shallow, e_shallow) = grow(alpha + 1.0, 1e-4);
        let (d_deep, e_deep) = grow(alpha + 1.0, 1e-16);
        let diverging = d_deep / d_shallow >= 1.3 && e_deep / e_shallow >= 1.3;
        let (db_shallow, eb_shallow) = grow((alpha - 0.5).max(0.25), 1e-4);
        let (db_deep, eb_deep) = grow((alpha - 0.5).max(0.25), 1e-16);
        let stable = db_deep / db_shallow <= 1.15 && eb_deep / eb_shallow <= 1.15;
        checks.push(
            CheckReport::new(
                &format!("6-dichotomy-a{alpha}"),
                "both norms diverge for beta > alpha and stay bounded for beta < alpha",
                1.3,
                diverging && stable,
            )
            .with("delta_growth_above", d_deep / d_shallow)
            .with("expl_growth_above", e_deep / e_shallow)
            .with("delta_growth_below", db_deep / db_shallow)
            .with("expl_growth_below", eb_deep / eb_shallow),
        );
    }
    SuiteReport::new("delta-expl", checks)
}

/// Criterion 7: grand Lebesgue norm against its rearranged form.
fn suite_grand(cfg: &Config) -> SuiteReport {
    let mut family: Vec<StepFn> =
        testfn::random_suite(cfg.suite.seed.wrapping_add(7000), cfg.suite.grand_family - 4, 18);
    family.push(testfn::generate(&testfn::Family::Indicator { a: 0.3 }, 0).unwrap());
    family.push(testfn::generate(&testfn::Family::Indicator { a: 1.0 }, 0).unwrap());
    family.push(testfn::generate(&testfn::Family::LogPow { beta: 1.0, t_min: 1e-9 }, 400).unwrap());
    family.push(testfn::generate(&testfn::Family::Power { a: 0.25, t_min: 1e-9 }, 400).unwrap());
    let ppd = cfg.grids.points_per_decade;
    // the global window, and the uniformity of the ratio across the family
    // at each fixed (p, alpha) - the part of the equivalence that does not
    // depend on the function
    let window = |ppd: usize| -> (f64, f64) {
        let mut c: f64 = 1.0;
        let mut uniformity: f64 = 1.0;
        for p in [1.5, 2.0, 3.0, 4.0] {
            for alpha in [1.0, 2.0] {
                let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
                for f in &family {
                    if f.integral() == 0.0 {
                        continue;
                    }
                    let g = norms::grand_lebesgue_norm_with(f, p, alpha, ppd).unwrap();
                    let fk = norms::grand_lebesgue_fk_norm_with(f, p, alpha, ppd).unwrap();
                    let r = g / fk;
                    c = c.max(r.max(1.0 / r));
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
                uniformity = uniformity.max(hi / lo);
            }
        }
        (c, uniformity)
    };
    let (c, uniformity) = window(ppd);
    let (c_refined, _) = window(ppd * 2);
    let drift = (c_refined / c - 1.0).abs();
    let bound = cfg.tolerances.grand_window;
    // the indicator alone pins the window from below at (p, alpha) = (4, 2):
    // its sup form equals (p-1)^alpha = 9 at the eps = p-1 end while the
    // rearranged form stays below 1, so the window necessarily exceeds 10
    let chi = StepFn::indicator(1.0, 1.0).unwrap();
    let chi_ratio = norms::grand_lebesgue_norm_with(&chi, 4.0, 2.0, ppd).unwrap()
        / norms::grand_lebesgue_fk_norm_with(&chi, 4.0, 2.0, ppd).unwrap();
    SuiteReport::new(
        "grand",
        vec![CheckReport::new(
            "7",
            "grand Lebesgue and rearranged forms agree within one window",
            bound,
            c <= bound && drift <= cfg.tolerances.grand_drift,
        )
        .with("window_c", c)
        .with("refined_c", c_refined)
        .with("drift", drift)
        .with("chi_ratio_p4_a2", chi_ratio)
        .with("family_uniformity", uniformity)
        .detail(
            "the equivalence constant of the two forms grows with p and alpha: already for \
             the indicator at p = 4, alpha = 2 the ratio is about 14, so no test family can \
             land the whole sweep inside [1/10, 10]; the window is measured and the grid \
             stability clause holds",
        )],
    )
}

/// Criterion 8: Hardy operator norm lower bounds and the endpoint
/// inequality over the suite.
fn suite_hardy(cfg: &Config) -> SuiteReport {
    let mut checks = Vec::new();
    let quality_floor = cfg.tolerances.hardy_norm_quality;
    let mut worst_quality = f64::INFINITY;
    for p in [1.1, 1.5, 2.0, 4.0] {
        let rep = operators::operator_norm_lower(&OperatorKind::HardyP, p).unwrap();
        worst_quality = worst_quality.min(rep.quality);
    }
    checks.push(
        CheckReport::new(
            "8-norm",
            "power-family lower bounds reach 0.9 of the Hardy norm p'",
            quality_floor,
            worst_quality >= quality_floor,
        )
        .with("min_quality", worst_quality),
    );
    let spec = OperatorSpec::new(OperatorKind::HardyP, cfg.grids.operator_resolution).unwrap();
    let suite = testfn::random_suite(
        cfg.suite.seed.wrapping_add(100),
        cfg.suite.n_random.min(200),
        cfg.suite.max_pieces,
    );
    let mut c_max = 0.0f64;
    for f in &suite {
        if f.integral() == 0.0 {
            continue;
        }
        let rep = operators::yano_endpoint_check(&spec, f, cfg.tolerances.yano_c_bound).unwrap();
        c_max = c_max.max(rep.c_averaged);
    }
    checks.push(
        CheckReport::new(
            "8-endpoint",
            "averaged endpoint inequality for the Hardy operator over the suite",
            cfg.tolerances.yano_c_bound,
            c_max <= cfg.tolerances.yano_c_bound,
        )
        .with("suite_max_c", c_max),
    );
    SuiteReport::new("hardy", checks)
}

/// Criterion 9: the Calderon operator algebra S = P + Q = PQ = QP.
fn suite_calderon(cfg: &Config) -> SuiteReport {
    let suite = testfn::random_suite(
        cfg.suite.seed.wrapping_add(300),
        cfg.suite.n_random.min(200),
        cfg.suite.max_pieces,
    );
    let ts = log_grid(1e-4, 10.0, 64);
    let mut worst_pq = 0.0f64;
    let mut worst_qp = 0.0f64;
    for f in &suite {
        let ev = HardyEval::new(f);
        for &t in &ts {
            let s = ev.s_at(t);
            worst_pq = worst_pq.max((s - ev.pq_at(t)).abs());
            worst_qp = worst_qp.max((ev.pq_at(t) - ev.qp_at(t)).abs());
        }
    }
    let tol = cfg.tolerances.calderon_algebra;
    SuiteReport::new(
        "calderon",
        vec![
            CheckReport::new("9-pq", "||(P + Q) f - P Q f||_inf on the suite", tol, worst_pq <= tol)
                .with("max_abs", worst_pq),
            CheckReport::new("9-qp", "||P Q f - Q P f||_inf on the suite", tol, worst_qp <= tol)
                .with("max_abs", worst_qp),
        ],
    )
}

/// Criterion 10: closed-form convolution value and the bilinear endpoint
/// bounds with their three addends.
fn suite_bilinear(cfg: &Config) -> SuiteReport {
    let m1 = TabFn::min_one();
    let conv_val = bilinear::mult_convolution(&m1, &m1, 1.0);
    let conv_err = (conv_val - 2.0).abs();
    let mut checks = vec![CheckReport::new(
        "10-conv",
        "multiplicative convolution of min-kernels at t = 1 equals 2",
        cfg.tolerances.conv_abs,
        conv_err <= cfg.tolerances.conv_abs,
    )
    .with("value", conv_val)
    .with("abs_err", conv_err)];

    let suite = testfn::random_suite(
        cfg.suite.seed.wrapping_add(500),
        cfg.suite.n_random.min(100),
        cfg.suite.max_pieces,
    );
    let mut c_max = 0.0f64;
    let mut addends_ok = true;
    let mut worst_addend = 0.0f64;
    for pair in suite.chunks(2) {
        if pair.len() < 2 || pair[0].sup() == 0.0 || pair[1].sup() == 0.0 {
            continue;
        }
        let f = pair[0].scale(1.0 / pair[0].sup());
        let g = pair[1].scale(1.0 / pair[1].sup());
        let rep = bilinear::lagbi_bounds(&f, &g, cfg.tolerances.lagbi_c_bound).unwrap();
        c_max = c_max.max(rep.c_exp_pair);
        for r in rep.addend_ratios {
            worst_addend = worst_addend.max(r);
            if r > 1.0 + 1e-9 {
                addends_ok = false;
            }
        }
    }
    checks.push(
        CheckReport::new(
            "10-lagbi",
            "bilinear endpoint constant and the three split addends",
            cfg.tolerances.lagbi_c_bound,
            c_max <= cfg.tolerances.lagbi_c_bound && addends_ok,
        )
        .with("suite_max_c", c_max)
        .with("worst_addend_ratio", worst_addend),
    );
    SuiteReport::new("bilinear", checks)
}

/// Criterion 11: Matsaev-type endpoint ratios across sizes and the
/// non-commutative averaging inequality with the Hardy-matrix witness.
fn suite_schatten(cfg: &Config) -> SuiteReport {
    let mut checks = Vec::new();
    let mut ratios = Vec::new();
    for &n in &cfg.suite.schatten_sizes {
        let sigma =
            SingularSpectrum::new((1..=n).map(|j| 1.0 / j as f64).collect()).unwrap();
        let rep = schatten::matsaev_delta_check(&sigma, 1.0, 16.0, 32).unwrap();
        ratios.push((n, rep.ratio));
    }
    let r_min = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let r_max = ratios.iter().map(|r| r.1).fold(0.0f64, f64::max);
    let spread = r_max / r_min - 1.0;
    let mut check = CheckReport::new(
        "11-matsaev",
        "endpoint ratio stable across matrix sizes",
        cfg.tolerances.matsaev_drift,
        spread <= cfg.tolerances.matsaev_drift,
    )
    .with("spread", spread);
    for (n, r) in &ratios {
        check = check.with(&format!("ratio_n{n}"), *r);
    }
    checks.push(check);

    use nalgebra::{Complex, DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.suite.seed.wrapping_add(900));
    let n = 64;
    let h = schatten::hardy_matrix(n);
    let mut c_max = 0.0f64;
    for _ in 0..6 {
        let diag: Vec<f64> =
            (0..n).map(|i| rng.gen_range(0.25..1.0) / (i + 1) as f64).collect();
        let a = DMatrix::from_diagonal(&DVector::from_vec(
            diag.iter().map(|&d| Complex::new(d, 0.0)).collect(),
        ));
        let ta = &h * &a;
        let sig_a = schatten::s_numbers(&a).unwrap();
        let sig_ta = schatten::s_numbers(&ta).unwrap();
        let rep = schatten::noncomm_calderon_check(&sig_a, &sig_ta).unwrap();
        c_max = c_max.max(rep.c);
    }
    checks.push(
        CheckReport::new(
            "11-noncomm",
            "averaging inequality with the Hardy-matrix witness at n = 64",
            cfg.tolerances.noncomm_c_bound,
            c_max <= cfg.tolerances.noncomm_c_bound,
        )
        .with("suite_max_c", c_max),
    );
    SuiteReport::new("schatten", checks)
}

/// Criterion 12: the dilation criterion separates the exp-L fundamental
/// function from the square root.
fn suite_dilation(cfg: &Config) -> SuiteReport {
    let floor = cfg.tolerances.dilation_floor;
    let exp_l = QuasiConcaveFn::log_power(0.0, -1.0).unwrap();
    let pass_rep = functors::strong_extrap_check(&exp_l, floor);
    let sqrt = QuasiConcaveFn::power(0.5).unwrap();
    let fail_rep = functors::strong_extrap_check(&sqrt, floor);
    SuiteReport::new(
        "dilation",
        vec![
            CheckReport::new(
                "12-pass",
                "phi = (1 + log(1/t))^-1 satisfies phi(t^2) ~ phi(t)",
                floor,
                pass_rep.pass,
            )
            .with("min_ratio", pass_rep.min_ratio),
            CheckReport::new(
                "12-fail",
                "phi = t^(1/2) violates the dilation criterion",
                floor,
                !fail_rep.pass,
            )
            .with("min_ratio", fail_rep.min_ratio),
        ],
    )
}
