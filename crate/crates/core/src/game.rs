//! Payoff and strategy-frequency data types plus the matrix objects built
//! from them: the frequency matrix `X`, the skew generator `Λ`, the flow
//! matrix `Θ = [Λ, X]`, fitness reports, and a Nash verification predicate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ x_i = 1` accepted without renormalization.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Largest simplex violation that is silently repaired (with a flag) rather
/// than rejected.
pub const SIMPLEX_REPAIR_WINDOW: f64 = 1e-9;

/// Square matrix of per-encounter payoffs; entry `(i, j)` is the payoff to
/// strategy `i` against strategy `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    a: DMatrix<f64>,
}

impl PayoffMatrix {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
        }
        if a.nrows() == 0 {
            return Err(Error::InvalidParameter {
                name: "payoff",
                reason: "must have at least one strategy".into(),
            });
        }
        if let Some((index, &value)) = a.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { a })
    }

    /// Build from row slices, e.g. `&[&[3.0, 0.0], &[5.0, 1.0]]`.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: rows[i].len() });
            }
        }
        Ok(Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))?)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    /// Parse the plain-text format: first line the strategy count `n`, then
    /// `n` whitespace-separated rows of `n` entries.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty payoff file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad strategy count: {e}")))?;
        if n == 0 {
            return Err(Error::Parse("strategy count must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for tok in tokens.by_ref().take(n * n) {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("bad payoff entry `{tok}`: {e}")))?;
            entries.push(v);
        }
        if entries.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {} payoff entries, found {}",
                n * n,
                entries.len()
            )));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after payoff entries".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| entries[i * n + j]))
    }

    /// Emit the same plain-text format accepted by [`PayoffMatrix::from_text`].
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = format!("{n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{}", self.a[(i, j)])).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn read_from(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

/// Point on the probability simplex: relative frequencies of the strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyDistribution {
    x: DVector<f64>,
    renormalized: bool,
}

impl StrategyDistribution {
    /// Validate and construct. Inputs off the simplex by at most
    /// [`SIMPLEX_REPAIR_WINDOW`] (drift from integration) are clamped and
    /// renormalized with [`was_renormalized`](Self::was_renormalized) set;
    /// larger violations are rejected.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParameter {
                name: "x",
                reason: "must have at least one entry".into(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value < -SIMPLEX_REPAIR_WINDOW {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let clamped: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
        let clamp_dev: f64 = x.iter().map(|&v| (-v).max(0.0)).sum();
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_REPAIR_WINDOW || sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        let needs_repair = (sum - 1.0).abs() > SIMPLEX_TOL || clamp_dev > 0.0;
        let v = if needs_repair {
            DVector::from_vec(clamped.iter().map(|&v| v / sum).collect())
        } else {
            DVector::from_vec(clamped)
        };
        Ok(Self { x: v, renormalized: needs_repair })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            x: DVector::from_element(n, 1.0 / n as f64),
            renormalized: false,
        }
    }

    /// Pure strategy `i` (a vertex of the simplex).
    pub fn vertex(n: usize, i: usize) -> Self {
        let mut x = DVector::zeros(n);
        x[i] = 1.0;
        Self { x, renormalized: false }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        self.x.as_slice()
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn get(&self, i: usize) -> f64 {
        self.x[i]
    }

    /// True when construction had to clamp or renormalize the input.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }
}

/// Symmetric rank-one matrix with entries `√(x_i x_j)`; a projector onto the
/// amplitude vector `(√x_1, ..., √x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMatrix {
    x: DMatrix<f64>,
}

impl FrequencyMatrix {
    pub fn from_distribution(dist: &StrategyDistribution) -> Self {
        let amps: Vec<f64> = dist.probs().iter().map(|&p| p.sqrt()).collect();
        let n = amps.len();
        Self {
            x: DMatrix::from_fn(n, n, |i, j| amps[i] * amps[j]),
        }
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// The diagonal, which is the underlying strategy distribution.
    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.x[(i, i)]).collect()
    }
}

/// Per-strategy fitnesses `f = A·x`, population mean `⟨f⟩ = xᵀA x`, and the
/// excess fitnesses `u_i = f_i − ⟨f⟩` driving the replicator flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessReport {
    pub f: DVector<f64>,
    pub mean: f64,
    pub u: DVector<f64>,
}

/// Fitness of every strategy against population state `x`.
pub fn fitness(a: &PayoffMatrix, x: &StrategyDistribution) -> Result<FitnessReport> {
    check_dims(a, x)?;
    let f = a.matrix() * x.vector();
    let mean = x.vector().dot(&f);
    let u = f.map(|fi| fi - mean);
    Ok(FitnessReport { f, mean, u })
}

/// The frequency matrix `X` with `X_ij = √(x_i x_j)`.
pub fn frequency_matrix(x: &StrategyDistribution) -> FrequencyMatrix {
    FrequencyMatrix::from_distribution(x)
}

/// Antisymmetric generator with entries `½ (f_i − f_j) √(x_i x_j)`; the
/// commutator of `diag(f)/2` with the frequency matrix.
pub fn lambda_matrix(a: &PayoffMatrix, x: &StrategyDistribution) -> Result<DMatrix<f64>> {
    let report = fitness(a, x)?;
    let xm = frequency_matrix(x);
    let n = x.len();
    let mut lambda = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (report.f[i] - report.f[j]) * xm.matrix()[(i, j)];
            lambda[(i, j)] = v;
            lambda[(j, i)] = -v;
        }
    }
    Ok(lambda)
}

/// The flow matrix `Θ` by its element formula
/// `Θ_ij = ½ f_i X_ij + ½ f_j X_ji − ⟨f⟩ X_ij`; its diagonal is the
/// replicator field `u_i x_i` and the full matrix equals the commutator
/// `[Λ, X]`.
pub fn theta_matrix(a: &PayoffMatrix, x: &StrategyDistribution) -> Result<DMatrix<f64>> {
    let report = fitness(a, x)?;
    let xm = frequency_matrix(x);
    let n = x.len();
    let mut theta = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            theta[(i, j)] = 0.5 * report.f[i] * xm.matrix()[(i, j)]
                + 0.5 * report.f[j] * xm.matrix()[(j, i)]
                - report.mean * xm.matrix()[(i, j)];
        }
    }
    Ok(theta)
}

/// One strategy's contribution to a failed Nash check.
#[derive(Debug, Clone, PartialEq)]
pub struct NashViolation {
    pub strategy: usize,
    /// `f_i − ⟨f⟩`; positive means a profitable deviation, negative means an
    /// underperforming strategy that is nonetheless played.
    pub excess: f64,
    /// True when the violation is an underperforming supported strategy
    /// rather than a profitable unplayed deviation.
    pub in_support: bool,
}

/// Outcome of [`is_nash`] with per-strategy diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub is_nash: bool,
    pub violations: Vec<NashViolation>,
}

/// Verify the symmetric-equilibrium support condition: no strategy earns
/// more than the population average, and every strategy actually played
/// earns the average.
pub fn is_nash(a: &PayoffMatrix, x: &StrategyDistribution, tol: f64) -> Result<NashReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be > 0, got {tol}"),
        });
    }
    let report = fitness(a, x)?;
    let mut violations = Vec::new();
    for i in 0..x.len() {
        let excess = report.f[i] - report.mean;
        if excess > tol {
            violations.push(NashViolation { strategy: i, excess, in_support: false });
        } else if x.get(i) > tol && excess < -tol {
            violations.push(NashViolation { strategy: i, excess, in_support: true });
        }
    }
    Ok(NashReport { is_nash: violations.is_empty(), violations })
}

fn check_dims(a: &PayoffMatrix, x: &StrategyDistribution) -> Result<()> {
    if a.n() != x.len() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: x.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pd() -> PayoffMatrix {
        PayoffMatrix::from_rows(&[&[3.0, 0.0], &[5.0, 1.0]]).unwrap()
    }

    fn rps() -> PayoffMatrix {
        PayoffMatrix::from_rows(&[&[0.0, -1.0, 1.0], &[1.0, 0.0, -1.0], &[-1.0, 1.0, 0.0]])
            .unwrap()
    }

    #[test]
    fn fitness_zero_game() {
        let a = PayoffMatrix::from_rows(&[&[0.0, 0.0], &[0.0, 0.0]]).unwrap();
        let x = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        let r = fitness(&a, &x).unwrap();
        assert_eq!(r.f.as_slice(), &[0.0, 0.0]);
        assert_eq!(r.mean, 0.0);
    }

    #[test]
    fn fitness_rps_uniform() {
        let x = StrategyDistribution::uniform(3);
        let r = fitness(&rps(), &x).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(r.f[i], 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(r.mean, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fitness_pd_half() {
        let x = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        let r = fitness(&pd(), &x).unwrap();
        assert_abs_diff_eq!(r.f[0], 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.f[1], 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.mean, 2.25, epsilon = 1e-15);
        // excess fitness weighted by x sums to zero
        assert_abs_diff_eq!(x.vector().dot(&r.u), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn fitness_rejects_dim_mismatch() {
        let x = StrategyDistribution::uniform(3);
        assert!(matches!(
            fitness(&pd(), &x),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn frequency_matrix_vertex_and_uniform() {
        let v = StrategyDistribution::vertex(2, 0);
        let xm = frequency_matrix(&v);
        assert_eq!(xm.matrix()[(0, 0)], 1.0);
        assert_eq!(xm.matrix()[(0, 1)], 0.0);
        assert_eq!(xm.matrix()[(1, 1)], 0.0);

        let u = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        let xu = frequency_matrix(&u);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(xu.matrix()[(i, j)], 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn frequency_matrix_off_diagonal() {
        let x = StrategyDistribution::new(vec![0.25, 0.75]).unwrap();
        let xm = frequency_matrix(&x);
        assert_abs_diff_eq!(xm.matrix()[(0, 1)], 0.1875_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(xm.matrix()[(0, 1)], 0.43301270189, epsilon = 1e-10);
    }

    #[test]
    fn lambda_vanishes_at_uniform_rps() {
        let x = StrategyDistribution::uniform(3);
        let l = lambda_matrix(&rps(), &x).unwrap();
        assert!(l.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn lambda_pd_half() {
        let x = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        let l = lambda_matrix(&pd(), &x).unwrap();
        assert_abs_diff_eq!(l[(0, 1)], -0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(l[(1, 0)], 0.375, epsilon = 1e-15);
        assert_eq!(l[(0, 0)], 0.0);
    }

    #[test]
    fn theta_diagonal_is_replicator_field() {
        let x = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        let th = theta_matrix(&pd(), &x).unwrap();
        assert_abs_diff_eq!(th[(0, 0)], -0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(th[(1, 1)], 0.375, epsilon = 1e-15);
    }

    #[test]
    fn theta_vanishes_at_fixed_points() {
        let th = theta_matrix(&rps(), &StrategyDistribution::uniform(3)).unwrap();
        assert!(th.iter().all(|&v| v.abs() < 1e-14));
        // vertex of PD is a fixed point too
        let th = theta_matrix(&pd(), &StrategyDistribution::vertex(2, 1)).unwrap();
        assert!(th.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn nash_examples() {
        let tol = 1e-9;
        assert!(is_nash(&rps(), &StrategyDistribution::uniform(3), tol).unwrap().is_nash);
        assert!(is_nash(&pd(), &StrategyDistribution::vertex(2, 1), tol).unwrap().is_nash);
        let r = is_nash(&pd(), &StrategyDistribution::vertex(2, 0), tol).unwrap();
        assert!(!r.is_nash);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].strategy, 1);
        assert_abs_diff_eq!(r.violations[0].excess, 2.0, epsilon = 1e-15);
        assert!(!r.violations[0].in_support);
    }

    #[test]
    fn simplex_repair_window() {
        // within strict tolerance: untouched
        let x = StrategyDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!(!x.was_renormalized());
        // small drift: repaired and flagged
        let x = StrategyDistribution::new(vec![0.5, 0.5 + 3e-10]).unwrap();
        assert!(x.was_renormalized());
        assert_abs_diff_eq!(x.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        // large drift: rejected
        assert!(matches!(
            StrategyDistribution::new(vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
        // tiny negative: clamped and flagged
        let x = StrategyDistribution::new(vec![1.0 + 1e-12, -1e-12]).unwrap();
        assert!(x.was_renormalized());
        assert_eq!(x.get(1), 0.0);
        // real negative: rejected
        assert!(matches!(
            StrategyDistribution::new(vec![1.1, -0.1]),
            Err(Error::NegativeProbability { index: 1, .. })
        ));
    }

    #[test]
    fn payoff_text_round_trip() {
        let a = pd();
        let parsed = PayoffMatrix::from_text(&a.to_text()).unwrap();
        assert_eq!(a, parsed);
        assert!(PayoffMatrix::from_text("2\n1 2 3\n").is_err());
        assert!(PayoffMatrix::from_text("").is_err());
        assert!(PayoffMatrix::from_text("2\n1 2 3 4 5\n").is_err());
    }

    #[test]
    fn payoff_rejects_bad_shapes() {
        assert!(matches!(
            PayoffMatrix::new(DMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(PayoffMatrix::new(DMatrix::from_element(1, 1, f64::NAN)).is_err());
    }
}
