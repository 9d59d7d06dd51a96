use serde::{Deserialize, Serialize};

use super::GridError;

/// Extent of the `x2` direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum X2Domain {
    /// `x2 ∈ (0, L2]`, nodes clustered towards the axis by the stretch map.
    HalfLine,
    /// `x2 ∈ [−L2, L2]` on a uniform grid; only meaningful without the
    /// `k/x2²` barrier.
    FullLine,
}

/// Tensor grid for the scalar sector.
///
/// `x1` nodes are `−L1 + i·h1`, `h1 = 2L1/(M1+1)`, `i = 1..M1`. On the half
/// line, `x2` nodes are `L2·t_jᵖ` with `t_j = j/(M2+1)` and `p = stretch`;
/// `p = 1` gives the uniform nodes `j·L2/(M2+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m1: usize,
    pub m2: usize,
    pub l1: f64,
    pub l2: f64,
    pub stretch: f64,
    pub x2_domain: X2Domain,
    /// Largest Dirac dimension accepted before building anything.
    pub max_dirac_dim: usize,
}

pub const DEFAULT_BOX: f64 = 6.0;
pub const DEFAULT_STRETCH: f64 = 3.0;
pub const DEFAULT_MAX_DIRAC_DIM: usize = 2 * 64 * 64;

impl GridSpec {
    /// Square grid `M × M` on the default box.
    pub fn square(m: usize) -> Self {
        Self {
            m1: m,
            m2: m,
            l1: DEFAULT_BOX,
            l2: DEFAULT_BOX,
            stretch: DEFAULT_STRETCH,
            x2_domain: X2Domain::HalfLine,
            max_dirac_dim: DEFAULT_MAX_DIRAC_DIM,
        }
    }

    pub fn with_box(mut self, l1: f64, l2: f64) -> Self {
        self.l1 = l1;
        self.l2 = l2;
        self
    }

    pub fn with_stretch(mut self, stretch: f64) -> Self {
        self.stretch = stretch;
        self
    }

    pub fn with_domain(mut self, domain: X2Domain) -> Self {
        self.x2_domain = domain;
        self
    }

    pub fn scalar_dim(&self) -> usize {
        self.m1 * self.m2
    }

    pub fn dirac_dim(&self) -> usize {
        2 * self.scalar_dim()
    }

    pub fn h1(&self) -> f64 {
        2.0 * self.l1 / (self.m1 + 1) as f64
    }

    pub fn validate(&self) -> Result<(), GridError> {
        for (name, m) in [("M1", self.m1), ("M2", self.m2)] {
            if m < 8 || m % 2 != 0 {
                return Err(GridError::InvalidSpec(format!("{name} = {m} must be even and at least 8")));
            }
        }
        if !(self.l1 > 0.0 && self.l2 > 0.0 && self.l1.is_finite() && self.l2.is_finite()) {
            return Err(GridError::InvalidSpec(format!(
                "box half-widths must be positive (L1 = {}, L2 = {})",
                self.l1, self.l2
            )));
        }
        if !(self.stretch >= 1.0 && self.stretch.is_finite()) {
            return Err(GridError::InvalidSpec(format!("stretch {} must be at least 1", self.stretch)));
        }
        if self.dirac_dim() > self.max_dirac_dim {
            return Err(GridError::TooLarge {
                dim: self.dirac_dim(),
                cap: self.max_dirac_dim,
            });
        }
        Ok(())
    }

    pub fn x1_nodes(&self) -> Vec<f64> {
        let h = self.h1();
        (1..=self.m1).map(|i| -self.l1 + i as f64 * h).collect()
    }

    pub fn x2_nodes(&self) -> Vec<f64> {
        match self.x2_domain {
            X2Domain::HalfLine => {
                let n = (self.m2 + 1) as f64;
                (1..=self.m2)
                    .map(|j| self.l2 * (j as f64 / n).powf(self.stretch))
                    .collect()
            }
            X2Domain::FullLine => {
                let h = 2.0 * self.l2 / (self.m2 + 1) as f64;
                (1..=self.m2).map(|j| -self.l2 + j as f64 * h).collect()
            }
        }
    }
}
