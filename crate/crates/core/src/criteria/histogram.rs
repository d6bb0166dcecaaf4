use serde::{Deserialize, Serialize};

/// Cumulative margin counts: `cumulative_counts[i]` is the number of margins
/// strictly greater than `epsilon_grid[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginHistogram {
    pub epsilon_grid: Vec<f64>,
    pub cumulative_counts: Vec<usize>,
    pub total: usize,
}

/// −0.30 to +0.30 in steps of 0.05 (13 points).
pub fn default_epsilon_grid() -> Vec<f64> {
    (0..=12).map(|i| (i * 5 - 30) as f64 / 100.0).collect()
}

pub fn is_ascending(grid: &[f64]) -> bool {
    grid.iter().all(|e| e.is_finite()) && grid.windows(2).all(|w| w[0] < w[1])
}

impl MarginHistogram {
    /// `grid` must be strictly ascending.
    pub fn from_margins(margins: &[f64], grid: &[f64]) -> Self {
        let mut sorted = margins.to_vec();
        sorted.sort_by(f64::total_cmp);
        let cumulative_counts = grid
            .iter()
            .map(|&eps| sorted.len() - sorted.partition_point(|&m| m <= eps))
            .collect();
        MarginHistogram {
            epsilon_grid: grid.to_vec(),
            cumulative_counts,
            total: margins.len(),
        }
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.cumulative_counts
            .iter()
            .map(|&c| if self.total == 0 { 0.0 } else { c as f64 / self.total as f64 })
            .collect()
    }

    /// Fraction of margins above `eps`, read at the grid point equal to `eps`
    /// (within 1e-9) or else the first grid point above it.
    pub fn pass_fraction_at(&self, eps: f64) -> Option<f64> {
        let i = self
            .epsilon_grid
            .iter()
            .position(|&g| (g - eps).abs() <= 1e-9)
            .or_else(|| self.epsilon_grid.iter().position(|&g| g >= eps))?;
        self.fractions().get(i).copied()
    }

    pub fn is_monotone(&self) -> bool {
        self.cumulative_counts.windows(2).all(|w| w[0] >= w[1])
            && self.cumulative_counts.iter().all(|&c| c <= self.total)
    }
}
