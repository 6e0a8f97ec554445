use serde::{Deserialize, Serialize};

/// Relative gap below which neighbouring eigenvalues are grouped.
pub const CLUSTER_RELATIVE_GAP: f64 = 1e-6;

/// A run of (numerically) equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Index of the first member in the sorted eigenvalue list.
    pub start: usize,
    pub size: usize,
    /// Mean of the members.
    pub value: f64,
    /// Angular index `l` for closed-form ball spectra.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub angular_index: Option<u32>,
}

/// Interior and boundary node counts of a quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSizes {
    pub radial: usize,
    pub angular: usize,
    pub boundary: usize,
}

impl Default for QuadratureSizes {
    fn default() -> Self {
        Self { radial: 64, angular: 256, boundary: 1024 }
    }
}

/// Sorted eigenvalue list with multiplicities and discretization metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quadrature: Option<QuadratureSizes>,
    /// Relative residual `|A x - lambda M x| / (|A x| + |lambda M x|)` per eigenpair.
    #[serde(default)]
    pub residuals: Vec<f64>,
    /// Ritz coefficient vectors in the monomial basis, one per eigenvalue.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ritz_vectors: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Spectrum {
    /// Build from an already sorted list, clustering by relative gap.
    pub fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        let clusters = cluster_sorted(&eigenvalues, CLUSTER_RELATIVE_GAP);
        Self {
            eigenvalues,
            clusters,
            degree: None,
            quadrature: None,
            residuals: Vec::new(),
            ritz_vectors: None,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `k`-th eigenvalue, counted from 1 (so `lambda(1) == 0`).
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i).copied())
    }

    /// Cluster containing the eigenvalue with 1-based index `k`.
    pub fn cluster_of(&self, k: usize) -> Option<&Cluster> {
        let i = k.checked_sub(1)?;
        self.clusters.iter().find(|c| c.start <= i && i < c.start + c.size)
    }
}

/// Group consecutive values whose gap is within `rel_gap` of their magnitude.
pub fn cluster_sorted(values: &[f64], rel_gap: f64) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let joins = match clusters.last() {
            Some(_) => {
                let prev = values[i - 1];
                (v - prev).abs() <= rel_gap * v.abs().max(prev.abs())
            }
            None => false,
        };
        if joins {
            let c = clusters.last_mut().unwrap();
            c.size += 1;
            sum += v;
            c.value = sum / c.size as f64;
        } else {
            sum = v;
            clusters.push(Cluster { start: i, size: 1, value: v, angular_index: None });
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_by_relative_gap() {
        let c = cluster_sorted(&[0.0, 1.0, 1.0 + 1e-9, 2.0, 2.1], 1e-6);
        let sizes: Vec<_> = c.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 2, 1, 1]);
        assert_eq!(c[2].start, 3);
    }

    #[test]
    fn zero_is_isolated() {
        let c = cluster_sorted(&[0.0, 0.0, 1.0], 1e-6);
        // exact zeros are equal, so they group
        assert_eq!(c[0].size, 2);
        let s = Spectrum::from_sorted(vec![0.0, 3.0, 3.0]);
        assert_eq!(s.cluster_of(3).unwrap().size, 2);
        assert_eq!(s.lambda(1), Some(0.0));
        assert_eq!(s.lambda(0), None);
    }
}
