//! Non-commutative specialization on finite matrices: s-numbers through the
//! singular value decomposition, Schatten and Matsaev-type ideal norms, the
//! Schatten K-functional, and the endpoint identity checks for the scale of
//! Schatten classes.
//!
//! Singular spectra are reused as step functions (piece length 1), so all
//! averaging inequalities run through the same exact machinery as the
//! commutative case.

use crate::error::{Error, Result};
use crate::operators::HardyEval;
use crate::stepfn::StepFn;
pub use nalgebra::{Complex, DMatrix};

pub type CMatrix = DMatrix<Complex<f64>>;

/// Largest admissible matrix side.
pub const MAX_DIM: usize = 1024;

/// A non-increasing sequence of singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum(Vec<f64>);

impl SingularSpectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("spectrum needs at least one value".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation("singular values must be finite and >= 0".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(SingularSpectrum(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trace_norm(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, c: f64) -> SingularSpectrum {
        SingularSpectrum(self.0.iter().map(|v| v * c).collect())
    }

    /// The spectrum as a step function on `(0, n]` with unit piece lengths.
    pub fn as_step_fn(&self) -> Result<StepFn> {
        StepFn::new(self.len() as f64, self.0.iter().map(|&v| (1.0, v)).collect())
    }
}

/// Singular values via the SVD, sorted non-increasing, with a reconstruction
/// residual check at `1e-10 ||A||`.
pub fn s_numbers(a: &CMatrix) -> Result<SingularSpectrum> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::Validation(format!(
            "expected a nonempty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() > MAX_DIM {
        return Err(Error::Validation(format!("matrices are capped at {MAX_DIM}")));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Validation("matrix entries must be finite".into()));
    }
    let svd = a.clone().svd(true, true);
    let (u, vt) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
    let sigma = DMatrix::from_diagonal(&svd.singular_values.map(|s| Complex::new(s, 0.0)));
    let residual = (u * sigma * vt - a).norm();
    let scale = a.norm();
    if residual > 1e-10 * scale.max(1e-300) {
        return Err(Error::Validation(format!(
            "SVD reconstruction residual {residual} exceeds 1e-10 * {scale}"
        )));
    }
    SingularSpectrum::new(svd.singular_values.iter().copied().collect())
}

/// `(sum s_j^p)^(1/p)`, `p >= 1` or infinity (the operator norm `s_1`).
pub fn schatten_norm(sigma: &SingularSpectrum, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("Schatten norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(sigma.0[0]);
    }
    Ok(sigma.0.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// `sum_j log^(alpha-1)(e j) s_j / j`.
pub fn matsaev_norm(sigma: &SingularSpectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(sigma
        .0
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let j = (i + 1) as f64;
            (std::f64::consts::E * j).ln().powf(alpha - 1.0) * s / j
        })
        .sum())
}

/// `sup_n sum_(j <= n) s_j / log^alpha(e n)`.
pub fn matsaev_dual_norm(sigma: &SingularSpectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    let mut acc = 0.0;
    let mut best: f64 = 0.0;
    for (i, &s) in sigma.0.iter().enumerate() {
        acc += s;
        let n = (i + 1) as f64;
        best = best.max(acc / (std::f64::consts::E * n).ln().powf(alpha));
    }
    Ok(best)
}

/// `K(t; S^1, S^inf) = sum_(j <= floor(t)) s_j + frac(t) s_(ceil(t))`,
/// the piecewise-linear concave interpolation of the partial sums.
pub fn schatten_k(t: f64, sigma: &SingularSpectrum) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let n = sigma.len();
    if t >= n as f64 {
        return sigma.trace_norm();
    }
    let whole = t.floor() as usize;
    let head: f64 = sigma.0[..whole].iter().sum();
    head + (t - whole as f64) * sigma.0[whole]
}

/// Report of the endpoint identity for the weighted sup over the Schatten
/// scale against the dual Matsaev norm.
#[derive(Debug, Clone, Copy)]
pub struct MatsaevDeltaReport {
    pub sup_value: f64,
    pub dual_norm: f64,
    /// `sup_p (p-1)^alpha ||.||_p` divided by the dual Matsaev norm;
    /// NaN when both vanish.
    pub ratio: f64,
    pub degenerate: bool,
}

pub fn matsaev_delta_check(
    sigma: &SingularSpectrum,
    alpha: f64,
    p0: f64,
    ppd: usize,
) -> Result<MatsaevDeltaReport> {
    if !(p0 > 1.0) {
        return Err(Error::Parameter(format!("p0 must exceed 1, got {p0}")));
    }
    let dual = matsaev_dual_norm(sigma, alpha)?;
    if dual == 0.0 {
        return Ok(MatsaevDeltaReport {
            sup_value: 0.0,
            dual_norm: 0.0,
            ratio: f64::NAN,
            degenerate: true,
        });
    }
    let mut grid: Vec<f64> = crate::grid::per_decade_grid(1e-8, p0 - 1.0, ppd)
        .into_iter()
        .map(|d| 1.0 + d)
        .collect();
    grid.push(p0);
    let mut sup_value: f64 = 0.0;
    for &p in &grid {
        sup_value = sup_value.max((p - 1.0).powf(alpha) * schatten_norm(sigma, p)?);
    }
    Ok(MatsaevDeltaReport { sup_value, dual_norm: dual, ratio: sup_value / dual, degenerate: false })
}

/// The lower-triangular averaging (Hardy) matrix `H[i][j] = 1/(i+1)` for
/// `j <= i`, the concrete contraction witness with `p/(p-1)`-type norm
/// growth on the Schatten scale.
pub fn hardy_matrix(n: usize) -> CMatrix {
    DMatrix::from_fn(n, n, |i, j| {
        if j <= i {
            Complex::new(1.0 / (i + 1) as f64, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

/// Report of the non-commutative averaging inequality
/// `(1/t) int_0^t mu(s, TA) ds <= C (1/t) int_0^t S(mu(., A))(s) ds`.
#[derive(Debug, Clone, Copy)]
pub struct NonCommReport {
    pub c: f64,
    pub worst_t: f64,
    pub degenerate: bool,
}

pub fn noncomm_calderon_check(
    sigma_a: &SingularSpectrum,
    sigma_ta: &SingularSpectrum,
) -> Result<NonCommReport> {
    if sigma_a.trace_norm() == 0.0 {
        return Ok(NonCommReport {
            c: if sigma_ta.trace_norm() == 0.0 { 0.0 } else { f64::INFINITY },
            worst_t: 0.0,
            degenerate: true,
        });
    }
    let mu_a = sigma_a.as_step_fn()?;
    let mu_ta = sigma_ta.as_step_fn()?;
    let k_ta = mu_ta.k_curve();
    let ev = HardyEval::new(&mu_a);
    let n = sigma_a.len() as f64;
    let mut c: f64 = 0.0;
    let mut worst_t = 1.0;
    for &t in crate::grid::per_decade_grid(0.5, n, 48).iter() {
        let lhs = k_ta.eval(t) / t;
        // int_0^t S mu = int_0^t P mu + int_0^t Q mu
        let rhs = (ev.int_p(t) + t * ev.pq_at(t)) / t;
        if rhs > 0.0 && lhs / rhs > c {
            c = lhs / rhs;
            worst_t = t;
        }
    }
    Ok(NonCommReport { c, worst_t, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::{Rng, SeedableRng};

    fn random_matrix(seed: u64, n: usize) -> CMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_spectrum(seed: u64, n: usize) -> SingularSpectrum {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        SingularSpectrum::new((0..n).map(|_| rng.gen_range(0.0..3.0)).collect()).unwrap()
    }

    #[test]
    fn s_numbers_of_simple_matrices() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(s_numbers(&id).unwrap().values(), &[1.0, 1.0, 1.0]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex::new(3.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(2.0, 0.0),
        ]));
        assert_eq!(s_numbers(&d).unwrap().values(), &[3.0, 2.0, 1.0]);
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 0)] = Complex::new(f64::NAN, 0.0);
        assert!(s_numbers(&bad).is_err());
    }

    #[test]
    fn s_numbers_match_eigen_oracle() {
        let a = random_matrix(5, 16);
        let sigma = s_numbers(&a).unwrap();
        // eigenvalues of A* A are the squared singular values
        let gram = a.adjoint() * &a;
        let mut eig: Vec<f64> =
            SymmetricEigen::new(gram).eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (s, e) in sigma.values().iter().zip(&eig) {
            assert!((s - e).abs() < 1e-9 * (1.0 + e), "{s} vs {e}");
        }
    }

    #[test]
    fn norm_examples() {
        let one = SingularSpectrum::new(vec![1.0, 0.0, 0.0]).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            assert!((matsaev_norm(&one, alpha).unwrap() - 1.0).abs() < 1e-15);
        }
        let ones4 = SingularSpectrum::new(vec![1.0; 4]).unwrap();
        let expect = 4.0 / (4.0 * std::f64::consts::E).ln();
        assert!((matsaev_dual_norm(&ones4, 1.0).unwrap() - expect).abs() < 1e-14);
        // p = 2 is the Frobenius norm
        let a = random_matrix(2, 8);
        let sigma = s_numbers(&a).unwrap();
        assert!((schatten_norm(&sigma, 2.0).unwrap() - a.norm()).abs() < 1e-10 * a.norm());
    }

    #[test]
    fn matsaev_alpha_one_is_weighted_sum() {
        let sigma = random_spectrum(9, 20);
        let expect: f64 =
            sigma.values().iter().enumerate().map(|(i, &s)| s / (i + 1) as f64).sum();
        assert_eq!(matsaev_norm(&sigma, 1.0).unwrap(), expect);
    }

    #[test]
    fn schatten_k_shape() {
        let sigma = random_spectrum(3, 12);
        assert_eq!(schatten_k(0.0, &sigma), 0.0);
        assert!((schatten_k(12.0, &sigma) - sigma.trace_norm()).abs() < 1e-12);
        // concavity: slopes are the ordered singular values
        let mut prev = f64::INFINITY;
        for j in 0..12 {
            let slope = schatten_k(j as f64 + 1.0, &sigma) - schatten_k(j as f64, &sigma);
            assert!(slope <= prev + 1e-12);
            prev = slope;
        }
    }

    #[test]
    fn schatten_norm_monotone_in_p() {
        let mut sigma = random_spectrum(4, 15);
        sigma = sigma.scale(1.0 / sigma.values()[0]); // s_1 = 1
        let mut prev = f64::INFINITY;
        for p in [1.0, 1.5, 2.0, 4.0, 16.0] {
            let n = schatten_norm(&sigma, p).unwrap();
            assert!(n <= prev + 1e-12);
            assert!(n >= sigma.values()[0] - 1e-12);
            prev = n;
        }
        // dual Matsaev norm never exceeds the trace norm
        assert!(matsaev_dual_norm(&sigma, 1.0).unwrap() <= sigma.trace_norm() + 1e-12);
    }

    #[test]
    fn matsaev_delta_rank_one() {
        let one = SingularSpectrum::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let rep = matsaev_delta_check(&one, 1.0, 3.0, 32).unwrap();
        // sup (p-1) * 1 over (1, 3] is 2; the dual norm is 1
        assert!((rep.ratio - 2.0).abs() < 1e-12, "{rep:?}");
        let zero = SingularSpectrum::new(vec![0.0; 4]).unwrap();
        assert!(matsaev_delta_check(&zero, 1.0, 3.0, 32).unwrap().degenerate);
    }

    #[test]
    fn matsaev_delta_scale_invariance() {
        let sigma = random_spectrum(11, 32);
        let a = matsaev_delta_check(&sigma, 1.0, 16.0, 32).unwrap();
        let b = matsaev_delta_check(&sigma.scale(7.5), 1.0, 16.0, 32).unwrap();
        assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio);
    }

    #[test]
    fn noncomm_identity_bounded_by_one() {
        let sigma = random_spectrum(6, 32);
        let rep = noncomm_calderon_check(&sigma, &sigma).unwrap();
        assert!(rep.c <= 1.0 + 1e-10, "{rep:?}");
    }

    #[test]
    fn noncomm_hardy_witness() {
        let n = 64;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let diag: Vec<f64> = (0..n).map(|i| 1.0 / (i + 1) as f64 * rng.gen_range(0.5..1.5)).collect();
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            diag.iter().map(|&d| Complex::new(d, 0.0)).collect(),
        ));
        let ta = hardy_matrix(n) * &a;
        let sig_a = s_numbers(&a).unwrap();
        let sig_ta = s_numbers(&ta).unwrap();
        let rep = noncomm_calderon_check(&sig_a, &sig_ta).unwrap();
        assert!(rep.c <= 4.0, "{rep:?}");
        // the zero operator input degenerates
        let zero = SingularSpectrum::new(vec![0.0; 4]).unwrap();
        assert!(noncomm_calderon_check(&zero, &zero).unwrap().degenerate);
    }
}
