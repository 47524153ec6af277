use super::design::DesignMatrix;

/// Numerically stable `1 / (1 + exp(-x))`.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + exp(x))` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Bernoulli log-likelihood of a design as a function of the coefficients.
#[derive(Debug, Clone, Copy)]
pub struct LogLikelihood<'a> {
    design: &'a DesignMatrix,
}

impl<'a> LogLikelihood<'a> {
    pub fn new(design: &'a DesignMatrix) -> Self {
        Self { design }
    }

    pub fn n_params(&self) -> usize {
        self.design.n_vars() + 1
    }

    fn eta(row: &[bool], beta: &[f64]) -> f64 {
        row.iter()
            .zip(&beta[1..])
            .filter(|(&x, _)| x)
            .fold(beta[0], |acc, (_, b)| acc + b)
    }

    /// Σ y·η − ln(1 + e^η).
    pub fn value(&self, beta: &[f64]) -> f64 {
        self.design
            .rows()
            .iter()
            .zip(self.design.outcome())
            .map(|(row, &y)| {
                let eta = Self::eta(row, beta);
                if y {
                    eta - softplus(eta)
                } else {
                    -softplus(eta)
                }
            })
            .sum()
    }

    /// Score vector Σ (y − p)·x̃ with x̃ = (1, x).
    pub fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; self.n_params()];
        for (row, &y) in self.design.rows().iter().zip(self.design.outcome()) {
            let resid = f64::from(u8::from(y)) - logistic(Self::eta(row, beta));
            grad[0] += resid;
            for (j, _) in row.iter().enumerate().filter(|(_, &x)| x) {
                grad[j + 1] += resid;
            }
        }
        grad
    }

    /// Observed information Σ p(1 − p)·x̃x̃ᵀ (the negated Hessian), row-major.
    pub fn information(&self, beta: &[f64]) -> Vec<Vec<f64>> {
        let k = self.n_params();
        let mut info = vec![vec![0.0; k]; k];
        let mut active = Vec::with_capacity(k);
        for row in self.design.rows() {
            let p = logistic(Self::eta(row, beta));
            let w = p * (1.0 - p);
            active.clear();
            active.push(0);
            active.extend(row.iter().enumerate().filter(|(_, &x)| x).map(|(j, _)| j + 1));
            for (a, &i) in active.iter().enumerate() {
                for &j in &active[a..] {
                    info[i][j] += w;
                }
            }
        }
        for i in 1..k {
            let (upper, lower) = info.split_at_mut(i);
            for (j, row) in upper.iter().enumerate() {
                lower[0][j] = row[i];
            }
        }
        info
    }

    /// Hessian of `value`, i.e. the negated information.
    pub fn hessian(&self, beta: &[f64]) -> Vec<Vec<f64>> {
        self.information(beta)
            .into_iter()
            .map(|row| row.into_iter().map(|v| -v).collect())
            .collect()
    }
}
