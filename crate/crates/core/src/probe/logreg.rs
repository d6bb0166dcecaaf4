use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::ProbeError;

pub const MAX_ITERATIONS: usize = 2000;
pub const MIN_IMPROVEMENT: f64 = 1e-7;
const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Multinomial logistic regression weights.
#[derive(Clone, Debug, PartialEq)]
pub struct LogReg {
    /// `num_classes × dim`.
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    /// Objective value before each step, ending with the final value.
    pub loss_history: Vec<f64>,
}

impl LogReg {
    pub fn zeros(num_classes: usize, dim: usize) -> Self {
        LogReg {
            weights: Array2::zeros((num_classes, dim)),
            bias: Array1::zeros(num_classes),
            loss_history: Vec::new(),
        }
    }

    pub fn probabilities(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut p = x.dot(&self.weights.t()) + &self.bias;
        softmax_rows(&mut p);
        p
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<usize> {
        let logits = x.dot(&self.weights.t()) + &self.bias;
        logits
            .rows()
            .into_iter()
            .map(|row| {
                // First maximum wins, so ties resolve to the lowest class.
                let mut best = 0;
                for (j, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = j;
                    }
                }
                best
            })
            .collect()
    }

    pub fn accuracy(&self, x: ArrayView2<f64>, y: &[usize]) -> f64 {
        if y.is_empty() {
            return 0.0;
        }
        let hits = self.predict(x).iter().zip(y).filter(|(p, t)| p == t).count();
        hits as f64 / y.len() as f64
    }
}

fn softmax_rows(m: &mut Array2<f64>) {
    for mut row in m.rows_mut() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let s = row.sum();
        row /= s;
    }
}

/// Mean softmax cross-entropy plus `(λ/2)‖W‖²`, with gradients for `W` and `b`.
/// The bias is not regularized.
pub fn loss_and_gradient(
    x: ArrayView2<f64>,
    y: &[usize],
    lambda: f64,
    weights: &Array2<f64>,
    bias: &Array1<f64>,
) -> (f64, Array2<f64>, Array1<f64>) {
    let n = x.nrows() as f64;
    let mut logits = x.dot(&weights.t()) + bias;
    let mut nll = 0.0;
    for (mut row, &label) in logits.rows_mut().into_iter().zip(y) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        nll += lse - row[label];
        row.mapv_inplace(|v| (v - lse).exp());
        row[label] -= 1.0;
    }
    // `logits` now holds P - Y.
    let reg = 0.5 * lambda * weights.iter().map(|w| w * w).sum::<f64>();
    let grad_w = logits.t().dot(&x) / n + weights * lambda;
    let grad_b = logits.sum_axis(Axis(0)) / n;
    (nll / n + reg, grad_w, grad_b)
}

fn loss_only(x: ArrayView2<f64>, y: &[usize], lambda: f64, w: &Array2<f64>, b: &Array1<f64>) -> f64 {
    let logits = x.dot(&w.t()) + b;
    let mut nll = 0.0;
    for (row, &label) in logits.rows().into_iter().zip(y) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        nll += lse - row[label];
    }
    nll / x.nrows() as f64 + 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>()
}

/// Full-batch gradient descent with Armijo backtracking from zero weights.
/// Stops when an accepted step improves the objective by less than 1e-7, or
/// after 2000 iterations.
pub fn train_logreg(
    x: ArrayView2<f64>,
    y: &[usize],
    num_classes: usize,
    lambda: f64,
) -> Result<LogReg, ProbeError> {
    if let Some(&bad) = y.iter().find(|&&l| l >= num_classes) {
        return Err(ProbeError::LabelOutOfRange { label: bad, num_classes });
    }
    if x.nrows() != y.len() {
        return Err(ProbeError::ShapeMismatch {
            rows: x.nrows(),
            labels: y.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ProbeError::NonFiniteLoss);
    }
    let mut model = LogReg::zeros(num_classes, x.ncols());
    let mut step = 1.0;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(x, y, lambda, &model.weights, &model.bias);
    for _ in 0..MAX_ITERATIONS {
        if !loss.is_finite() {
            return Err(ProbeError::NonFiniteLoss);
        }
        model.loss_history.push(loss);
        let g2 = gw.iter().chain(gb.iter()).map(|g| g * g).sum::<f64>();
        if g2 == 0.0 {
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let w = &model.weights - &(&gw * step);
            let b = &model.bias - &(&gb * step);
            let trial = loss_only(x, y, lambda, &w, &b);
            if trial.is_finite() && trial <= loss - ARMIJO_C * step * g2 {
                accepted = Some((w, b, trial));
                break;
            }
            step *= 0.5;
        }
        let Some((w, b, new_loss)) = accepted else { break };
        debug_assert!(new_loss <= loss);
        let improvement = loss - new_loss;
        model.weights = w;
        model.bias = b;
        loss = new_loss;
        if improvement < MIN_IMPROVEMENT {
            break;
        }
        (_, gw, gb) = loss_and_gradient(x, y, lambda, &model.weights, &model.bias);
        step *= 2.0;
    }
    model.loss_history.push(loss);
    Ok(model)
}
