use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::params::ModelParams;
use crate::error::{Error, Result};

/// Dense symmetric interaction matrix with zero diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    entries: Vec<f64>,
}

fn alloc_square(n: usize) -> Result<Vec<f64>> {
    let len = n.checked_mul(n).ok_or(Error::Allocation { n_firms: n })?;
    let mut entries = Vec::new();
    entries
        .try_reserve_exact(len)
        .map_err(|_| Error::Allocation { n_firms: n })?;
    entries.resize(len, 0.0);
    Ok(entries)
}

impl CouplingMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        Ok(CouplingMatrix {
            n,
            entries: alloc_square(n)?,
        })
    }

    /// Every off-diagonal entry equal to `value`.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.entries[i * n + j] = value;
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries, checking symmetry and the zero diagonal.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Precondition(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = CouplingMatrix { n, entries };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::Precondition(format!(
                    "diagonal entry ({i},{i}) is not zero"
                )));
            }
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Precondition(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Sets `J_ij = J_ji = value`.
    pub fn set_pair(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j, "diagonal couplings are fixed at zero");
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Couplings of firm `i` to every firm (including the zero self-coupling).
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0)
    }

    /// Strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| self.get(i, j)))
    }
}

/// Draws `J_ij ~ N(j0, sigma_j^2)` independently for `i < j` and mirrors it.
///
/// Draw order is row-major over the strict upper triangle, which fixes the
/// matrix for a given RNG state.
pub fn sample_couplings<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<CouplingMatrix> {
    params.validate()?;
    let n = params.n_firms;
    let mut m = CouplingMatrix::zeros(n)?;
    let normal =
        Normal::new(params.j0, params.sigma_j).map_err(|e| Error::param("sigma_j", e.to_string()))?;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = normal.sample(rng);
            m.entries[i * n + j] = v;
            m.entries[j * n + i] = v;
        }
    }
    Ok(m)
}
