//! Physical configuration: layer densities and unperturbed interface depths.

use crate::error::ModelError;

/// A stably stratified stack of `n + 1` fluid layers separated by `n` flat
/// interfaces at depths `d_1 < ... < d_n`, with densities `rho_0 > ... > rho_n`
/// from bottom layer to top.
///
/// Construction validates both strict orderings; a value of this type is
/// always a valid (Rayleigh-Taylor stable) configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidConfig {
    densities: Vec<f64>,
    depths: Vec<f64>,
}

impl FluidConfig {
    pub fn new(densities: Vec<f64>, depths: Vec<f64>) -> Result<Self, ModelError> {
        if densities.len() < 2 {
            return Err(ModelError::TooFewLayers {
                densities: densities.len(),
            });
        }
        if densities.len() != depths.len() + 1 {
            return Err(ModelError::LayerCountMismatch {
                densities: densities.len(),
                depths: depths.len(),
            });
        }
        for w in 0..densities.len() - 1 {
            if !(densities[w] > densities[w + 1]) {
                return Err(ModelError::OrderingViolation {
                    field: "densities",
                    expected: "decreasing",
                    first: w,
                    second: w + 1,
                    a: densities[w],
                    b: densities[w + 1],
                });
            }
        }
        for w in 0..depths.len().saturating_sub(1) {
            if !(depths[w] < depths[w + 1]) {
                return Err(ModelError::OrderingViolation {
                    field: "depths",
                    expected: "increasing",
                    first: w,
                    second: w + 1,
                    a: depths[w],
                    b: depths[w + 1],
                });
            }
        }
        Ok(Self { densities, depths })
    }

    /// Number of interfaces.
    pub fn n(&self) -> usize {
        self.depths.len()
    }

    /// Densities `rho_0 ..= rho_n`, bottom layer first.
    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// Unperturbed interface depths `d_1 ..= d_n`.
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Density jumps `rho_{k-1} - rho_k` across each interface; all positive.
    pub fn jumps(&self) -> Vec<f64> {
        (0..self.n())
            .map(|k| self.densities[k] - self.densities[k + 1])
            .collect()
    }

    /// Jump across interface `k` (0-based).
    pub fn jump(&self, k: usize) -> f64 {
        self.densities[k] - self.densities[k + 1]
    }

    /// Gaps `d_{k+1} - d_k` between adjacent depths; all positive.
    pub fn gaps(&self) -> Vec<f64> {
        self.depths.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Smallest gap between adjacent interfaces; the whole depth span for n = 1
    /// has no internal gap, so this returns `f64::INFINITY` there.
    pub fn min_gap(&self) -> f64 {
        self.gaps().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Total density contrast `rho_0 - rho_n`.
    pub fn total_jump(&self) -> f64 {
        self.densities[0] - self.densities[self.n()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_ordered_reference_config() {
        let cfg = FluidConfig::new(vec![2.0, 1.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(cfg.n(), 2);
        assert_eq!(cfg.jumps(), vec![1.0, 1.0]);
        assert_eq!(cfg.gaps(), vec![1.0]);
    }

    #[test]
    fn rejects_reversed_densities() {
        let err = FluidConfig::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0]).unwrap_err();
        match err {
            ModelError::OrderingViolation { field, first, second, .. } => {
                assert_eq!(field, "densities");
                assert_eq!((first, second), (0, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_unsorted_depths() {
        let err = FluidConfig::new(vec![3.0, 2.0, 1.0], vec![1.0, 0.0]).unwrap_err();
        match err {
            ModelError::OrderingViolation { field, .. } => assert_eq!(field, "depths"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn single_interface_is_valid() {
        let cfg = FluidConfig::new(vec![3.0, 1.0], vec![0.0]).unwrap();
        assert_eq!(cfg.n(), 1);
        assert_eq!(cfg.jumps(), vec![2.0]);
        assert!(cfg.min_gap().is_infinite());
    }

    #[test]
    fn equal_densities_rejected() {
        assert!(FluidConfig::new(vec![1.0, 1.0], vec![0.0]).is_err());
    }
}
