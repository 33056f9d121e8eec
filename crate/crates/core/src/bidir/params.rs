use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-level push thresholds `θ_i` and sampling granularities `γ_i`, for
/// levels `0..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSchedule {
    pub levels: usize,
    pub theta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl LevelSchedule {
    pub fn uniform(levels: usize, theta: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![theta; levels + 1], vec![gamma; levels + 1])
    }

    /// Arbitrary per-level values; both vectors hold `L + 1` entries.
    pub fn new(theta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if theta.len() < 2 || theta.len() != gamma.len() {
            return Err(Error::InvalidArgument(
                "schedule needs matching theta/gamma vectors for at least levels 0 and 1".into(),
            ));
        }
        if theta.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidArgument("every theta_i must be positive".into()));
        }
        if gamma.iter().any(|&g| !(g > 0.0 && g <= 1.0)) {
            return Err(Error::InvalidArgument("every gamma_i must lie in (0,1]".into()));
        }
        Ok(Self { levels: theta.len() - 1, theta, gamma })
    }

    /// `θ = Σ_i θ_i`.
    pub fn theta_sum(&self) -> f64 {
        self.theta.iter().sum()
    }

    /// `θ' = min_i γ_i θ_i`.
    pub fn theta_floor(&self) -> f64 {
        (0..=self.levels).map(|i| self.granularity(i)).fold(f64::INFINITY, f64::min)
    }

    /// Increment size `γ_i θ_i` used for residue arriving at level `i`.
    #[inline]
    pub fn granularity(&self, level: usize) -> f64 {
        self.gamma[level] * self.theta[level]
    }
}

/// Constant factors standing in for the unspecified constants of the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Multipliers {
    pub c_theta: f64,
    pub c_l: f64,
    pub c_gamma: f64,
    pub c_nr: f64,
    pub c_ns: f64,
    pub c_tau: f64,
}

impl Default for Multipliers {
    fn default() -> Self {
        Self { c_theta: 1.0, c_l: 1.0, c_gamma: 1.0, c_nr: 1.0, c_ns: 1.0, c_tau: 1.0 }
    }
}

/// Fully resolved parameters of [`super::single_pair_ppr`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewAlgoParams {
    pub alpha: f64,
    pub delta: f64,
    pub eps: f64,
    pub p_f: f64,
    pub schedule: LevelSchedule,
    pub n_r: usize,
    pub n_s: usize,
    pub tau: f64,
    pub multipliers: Multipliers,
}

impl NewAlgoParams {
    /// Parameters with a hand-picked schedule, bypassing the derivation.
    #[allow(clippy::too_many_arguments)]
    pub fn manual(
        alpha: f64,
        delta: f64,
        eps: f64,
        p_f: f64,
        schedule: LevelSchedule,
        n_r: usize,
        n_s: usize,
        tau: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if n_r == 0 || n_s == 0 || !(tau > 0.0) {
            return Err(Error::InvalidArgument("n_r, n_s and tau must be positive".into()));
        }
        Ok(Self { alpha, delta, eps, p_f, schedule, n_r, n_s, tau, multipliers: Multipliers::default() })
    }
}

/// One checked inequality: `lhs ≥ rhs` must hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub id: u8,
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Outcome of checking the five parameter constraints with unit constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

fn ln_inv(x: f64) -> f64 {
    (1.0 / x).ln()
}

/// Evaluates the five constraints for `params` on an `n`-node graph:
///
/// 1. `γ_i θ_i ≥ θ'` for every level;
/// 2. `γ_i ≤ ε² / (L² ln(nL))`;
/// 3. `L ≥ ln(1/θ_L) / α`;
/// 4. `n_r ≥ θ ln(1/p_f) / (εδ)`;
/// 5. `n_r n_s / τ ≥ ln(1/p_f) / (αεδ)`.
pub fn check_constraints(params: &NewAlgoParams, n: usize) -> ConstraintReport {
    let s = &params.schedule;
    let l = s.levels as f64;
    let tol = 1.0 + 1e-9;
    let mut checks = Vec::new();
    let mut push = |id: u8, description: &str, lhs: f64, rhs: f64| {
        checks.push(ConstraintCheck {
            id,
            description: description.to_string(),
            lhs,
            rhs,
            satisfied: lhs * tol >= rhs,
        });
    };
    let floor = s.theta_floor();
    let min_granularity = (0..=s.levels).map(|i| s.granularity(i)).fold(f64::INFINITY, f64::min);
    push(1, "gamma_i*theta_i >= theta_floor", min_granularity, floor);
    let log_nl = ((n as f64) * l).ln();
    let gamma_cap = if log_nl > 0.0 { params.eps * params.eps / (l * l * log_nl) } else { 1.0 };
    let gamma_max = s.gamma.iter().copied().fold(0.0, f64::max);
    push(2, "gamma_i <= eps^2/(L^2 ln(nL))", gamma_cap.min(1.0), gamma_max);
    push(3, "L >= ln(1/theta_L)/alpha", l, ln_inv(s.theta[s.levels]) / params.alpha);
    let lf = ln_inv(params.p_f);
    push(4, "n_r >= theta*ln(1/p_f)/(eps*delta)", params.n_r as f64, s.theta_sum() * lf / (params.eps * params.delta));
    push(
        5,
        "n_r*n_s/tau >= ln(1/p_f)/(alpha*eps*delta)",
        params.n_r as f64 * params.n_s as f64 / params.tau,
        lf / (params.alpha * params.eps * params.delta),
    );
    ConstraintReport { checks }
}

/// Derives the full schedule from accuracy targets:
///
/// * `θ_i = c_θ δ^{2/3}` on every level;
/// * `L = max(1, ⌈c_L ln(1/θ_L)/α⌉)`;
/// * `γ_i = min(1, c_γ ε²α²/(ln²(1/δ) ln(nL)), c_γ ε²/(L² ln(nL)))`;
/// * `n_r = ⌈c_nr · max(ln(1/δ) ln(1/p_f)/(δ^{1/3} εα), θ ln(1/p_f)/(εδ))⌉`;
/// * `n_s = ⌈c_ns / δ^{1/3}⌉`;
/// * `τ = c_τ n_r n_s αεδ / ln(1/p_f)`.
///
/// Fails with `ConstraintViolation` when the multipliers break one of the
/// constraints of [`check_constraints`].
pub fn derive_params(alpha: f64, delta: f64, eps: f64, p_f: f64, n: usize, m: Multipliers) -> Result<NewAlgoParams> {
    derive_params_with_report(alpha, delta, eps, p_f, n, m).map(|(p, _)| p)
}

/// [`derive_params`] also returning the constraint report.
pub fn derive_params_with_report(
    alpha: f64,
    delta: f64,
    eps: f64,
    p_f: f64,
    n: usize,
    m: Multipliers,
) -> Result<(NewAlgoParams, ConstraintReport)> {
    for (name, x) in [("alpha", alpha), ("eps", eps), ("p_f", p_f)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidArgument(format!("{name} must lie in (0,1), got {x}")));
        }
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0,1], got {delta}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("graph must have at least one node".into()));
    }
    let mults = [m.c_theta, m.c_l, m.c_gamma, m.c_nr, m.c_ns, m.c_tau];
    if mults.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::InvalidArgument("multipliers must be positive".into()));
    }
    let theta = (m.c_theta * delta.powf(2.0 / 3.0)).min(1.0);
    let levels = ((m.c_l * ln_inv(theta) / alpha).ceil() as usize).max(1);
    let l = levels as f64;
    let log_nl = ((n as f64) * l).ln();
    let log_d = ln_inv(delta);
    let mut gamma = 1.0f64;
    if log_nl > 0.0 {
        gamma = gamma.min(m.c_gamma * eps * eps / (l * l * log_nl));
        if log_d > 0.0 {
            gamma = gamma.min(m.c_gamma * eps * eps * alpha * alpha / (log_d * log_d * log_nl));
        }
    }
    let schedule = LevelSchedule::uniform(levels, theta, gamma)?;
    let lf = ln_inv(p_f);
    let cube = delta.cbrt();
    let walks = (log_d * lf / (cube * eps * alpha)).max(schedule.theta_sum() * lf / (eps * delta));
    let n_r = ((m.c_nr * walks).ceil() as usize).max(1);
    let n_s = ((m.c_ns / cube).ceil() as usize).max(1);
    let tau = m.c_tau * n_r as f64 * n_s as f64 * alpha * eps * delta / lf;
    let params = NewAlgoParams { alpha, delta, eps, p_f, schedule, n_r, n_s, tau, multipliers: m };
    let report = check_constraints(&params, n);
    if let Some(bad) = report.checks.iter().find(|c| !c.satisfied) {
        return Err(Error::ConstraintViolation(format!(
            "constraint {} ({}) fails: {} < {}",
            bad.id, bad.description, bad.lhs, bad.rhs
        )));
    }
    Ok((params, report))
}
