//! Time meshes. Uniform by default; power-graded and geometric meshes are
//! used where the integrands carry t^{alpha-1}-type layers near t = 0.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
}

impl TimeMesh {
    /// Uniform mesh with `steps` cells on [0, t_end].
    pub fn uniform(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::mesh(format!("t_end must be positive, got {t_end}")));
        }
        if steps < 2 {
            return Err(Error::mesh("a time mesh needs at least 3 nodes"));
        }
        let nodes = (0..=steps)
            .map(|i| t_end * i as f64 / steps as f64)
            .collect();
        Ok(TimeMesh { nodes })
    }

    /// Power-graded mesh t_i = t_end (i/steps)^r, r >= 1.
    pub fn graded(t_end: f64, steps: usize, r: f64) -> Result<Self> {
        if !(r >= 1.0) {
            return Err(Error::mesh(format!("grading exponent must be >= 1, got {r}")));
        }
        if steps < 2 {
            return Err(Error::mesh("a time mesh needs at least 3 nodes"));
        }
        let nodes = (0..=steps)
            .map(|i| t_end * (i as f64 / steps as f64).powf(r))
            .collect();
        Ok(TimeMesh { nodes })
    }

    /// Geometric mesh: 0, t_min, t_min q, ..., t_end with constant ratio q.
    /// Resolves transients many decades below t_end at O(steps) cost.
    pub fn geometric(t_end: f64, steps: usize, t_min: f64) -> Result<Self> {
        if !(t_min > 0.0 && t_min < t_end) {
            return Err(Error::mesh(format!(
                "geometric mesh needs 0 < t_min < t_end, got t_min={t_min}, t_end={t_end}"
            )));
        }
        if steps < 2 {
            return Err(Error::mesh("a time mesh needs at least 3 nodes"));
        }
        let ratio = (t_end / t_min).powf(1.0 / (steps as f64 - 1.0));
        let mut nodes = Vec::with_capacity(steps + 1);
        nodes.push(0.0);
        for i in 0..steps {
            nodes.push(t_min * ratio.powi(i as i32));
        }
        let last = nodes.len() - 1;
        nodes[last] = t_end;
        Ok(TimeMesh { nodes })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::mesh("a time mesh needs at least 3 nodes"));
        }
        if nodes[0] != 0.0 {
            return Err(Error::mesh("time mesh must start at 0"));
        }
        if !nodes.windows(2).all(|w| w[1] > w[0] && w[1].is_finite()) {
            return Err(Error::mesh("time mesh nodes must be strictly increasing"));
        }
        Ok(TimeMesh { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn t_end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Number of cells (nodes() has len steps()+1).
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_uniform(&self) -> bool {
        let h = self.nodes[1] - self.nodes[0];
        self.nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.max(1.0))
    }

    /// Trapezoid weights over (0, t_end] assigned to nodes 1..=steps; the
    /// weight of node 0 is folded into node 1 (integrands may be singular
    /// or undefined at t = 0).
    pub fn quad_weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut w = vec![0.0; n];
        for j in 1..n {
            let left = self.nodes[j - 1];
            let right = if j + 1 < n { self.nodes[j + 1] } else { self.nodes[j] };
            w[j] = 0.5 * (right - left);
        }
        w[1] += 0.5 * (self.nodes[1] - self.nodes[0]);
        w
    }

    /// Discrete L1 norm of a node series over (0, t_end].
    pub fn l1_norm(&self, values: &[f64]) -> f64 {
        let w = self.quad_weights();
        values
            .iter()
            .zip(w.iter())
            .skip(1)
            .map(|(v, w)| v.abs() * w)
            .sum()
    }

    /// Discrete L2 norm over [0, t_end] (trapezoid in time).
    pub fn l2_norm(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for j in 1..self.nodes.len() {
            let dt = self.nodes[j] - self.nodes[j - 1];
            acc += 0.5 * dt * (values[j - 1] * values[j - 1] + values[j] * values[j]);
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh_basics() {
        let m = TimeMesh::uniform(2.0, 4).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(m.is_uniform());
        assert_eq!(m.steps(), 4);
    }

    #[test]
    fn rejects_degenerate_meshes() {
        assert!(TimeMesh::uniform(0.0, 4).is_err());
        assert!(TimeMesh::uniform(1.0, 1).is_err());
        assert!(TimeMesh::from_nodes(vec![0.0, 1.0]).is_err());
        assert!(TimeMesh::from_nodes(vec![0.1, 0.5, 1.0]).is_err());
        assert!(TimeMesh::from_nodes(vec![0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn geometric_mesh_reaches_depth() {
        let m = TimeMesh::geometric(1.0, 100, 1e-12).unwrap();
        assert_eq!(m.nodes()[0], 0.0);
        assert!((m.nodes()[1] - 1e-12).abs() < 1e-24);
        assert_eq!(m.t_end(), 1.0);
        assert!(!m.is_uniform());
    }

    #[test]
    fn l1_weights_sum_to_interval() {
        let m = TimeMesh::graded(1.0, 64, 3.0).unwrap();
        let total: f64 = m.quad_weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
