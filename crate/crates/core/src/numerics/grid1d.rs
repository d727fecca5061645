use crate::error::{Error, Result};

/// Ordered nodes in x₃ over `[0, M]` with one node placed exactly at the hair-zone top `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    interface_index: usize,
    spacing: Vec<f64>,
}

impl Grid1D {
    /// Uniform cells on each side of `l`, `n_cells` in total, split in proportion to the lengths.
    pub fn piecewise_uniform(l: f64, m: f64, n_cells: usize) -> Result<Self> {
        if !(l > 0.0 && l < m) {
            return Err(Error::Geometry(format!("need 0 < L < M, got L={l}, M={m}")));
        }
        if n_cells < 2 {
            return Err(Error::Geometry("at least two cells are needed".into()));
        }
        let n_low = ((n_cells as f64 * l / m).round() as usize).clamp(1, n_cells - 1);
        let n_high = n_cells - n_low;
        let mut nodes = Vec::with_capacity(n_cells + 1);
        let h_low = l / n_low as f64;
        for i in 0..n_low {
            nodes.push(i as f64 * h_low);
        }
        nodes.push(l);
        let h_high = (m - l) / n_high as f64;
        for i in 1..n_high {
            nodes.push(l + i as f64 * h_high);
        }
        nodes.push(m);
        Self::from_nodes(nodes, n_low)
    }

    /// Uniform grid on `[0, length]`; the interface sits at the last node.
    pub fn uniform(length: f64, n_cells: usize) -> Result<Self> {
        if !(length > 0.0) || n_cells == 0 {
            return Err(Error::Geometry(format!(
                "uniform grid needs positive length and cells, got {length}, {n_cells}"
            )));
        }
        let h = length / n_cells as f64;
        let mut nodes: Vec<f64> = (0..n_cells).map(|i| i as f64 * h).collect();
        nodes.push(length);
        Self::from_nodes(nodes, n_cells)
    }

    pub fn from_nodes(nodes: Vec<f64>, interface_index: usize) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Geometry("grid needs at least two nodes".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::Geometry("first node must be 0".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Geometry("nodes must be strictly increasing".into()));
        }
        if interface_index >= nodes.len() {
            return Err(Error::Geometry("interface index out of range".into()));
        }
        let spacing = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            nodes,
            interface_index,
            spacing,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn interface_index(&self) -> usize {
        self.interface_index
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn interface(&self) -> f64 {
        self.nodes[self.interface_index]
    }

    pub fn h_max(&self) -> f64 {
        self.spacing.iter().cloned().fold(0.0, f64::max)
    }

    /// The hair-zone part `[0, L]`, with the interface at its last node.
    pub fn truncated(&self) -> Grid1D {
        let nodes = self.nodes[..=self.interface_index].to_vec();
        let k = nodes.len() - 1;
        Self::from_nodes(nodes, k).expect("sub-grid of a valid grid")
    }

    /// Control-volume length of every node (half cells at the ends).
    pub fn dual_volumes(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut v = vec![0.0; n];
        for (i, h) in self.spacing.iter().enumerate() {
            v[i] += 0.5 * h;
            v[i + 1] += 0.5 * h;
        }
        v
    }

    /// Piecewise-linear interpolation; `x` is clamped to the grid.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        assert_eq!(values.len(), self.nodes.len());
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return values[0];
        }
        if x >= self.nodes[n - 1] {
            return values[n - 1];
        }
        let k = self.nodes.partition_point(|&p| p <= x) - 1;
        let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
        let t = (x - x0) / (x1 - x0);
        if t == 0.0 {
            return values[k];
        }
        values[k] + t * (values[k + 1] - values[k])
    }

    /// One-sided second-order derivative at the interface node, using the two nodes below it.
    pub fn interface_derivative_below(&self, values: &[f64]) -> f64 {
        let k = self.interface_index;
        assert!(k >= 2, "need two nodes below the interface");
        one_sided_derivative(
            [self.nodes[k - 2], self.nodes[k - 1], self.nodes[k]],
            [values[k - 2], values[k - 1], values[k]],
        )
    }
}

/// Derivative at `x[2]` of the quadratic through three points.
pub fn one_sided_derivative(x: [f64; 3], u: [f64; 3]) -> f64 {
    let h1 = x[2] - x[1];
    let h2 = x[1] - x[0];
    let w2 = (2.0 * h1 + h2) / (h1 * (h1 + h2));
    let w1 = -(h1 + h2) / (h1 * h2);
    let w0 = h1 / (h2 * (h1 + h2));
    w2 * u[2] + w1 * u[1] + w0 * u[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interface_node_is_exact() {
        let g = Grid1D::piecewise_uniform(0.5, 1.0, 37).unwrap();
        assert_eq!(g.interface(), 0.5);
        assert_eq!(g.length(), 1.0);
        assert_eq!(g.len(), 38);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(Grid1D::piecewise_uniform(1.5, 1.0, 10).is_err());
        assert!(Grid1D::from_nodes(vec![0.0, 0.5, 0.5], 1).is_err());
    }

    #[test]
    fn truncation_and_volumes() {
        let g = Grid1D::piecewise_uniform(0.25, 1.0, 8).unwrap();
        let t = g.truncated();
        assert_eq!(t.length(), 0.25);
        assert_eq!(t.interface_index(), t.len() - 1);
        let total: f64 = g.dual_volumes().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_sided_derivative_exact_on_quadratics() {
        let f = |x: f64| 3.0 * x * x - x + 2.0;
        let x = [0.1, 0.25, 0.3];
        let d = one_sided_derivative(x, [f(x[0]), f(x[1]), f(x[2])]);
        assert!((d - (6.0 * 0.3 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn interpolation_hits_nodes() {
        let g = Grid1D::uniform(1.0, 4).unwrap();
        let v = [0.0, 1.0, 4.0, 9.0, 16.0];
        assert_eq!(g.interpolate(&v, 0.5), 4.0);
        assert_eq!(g.interpolate(&v, 0.625), 6.5);
        assert_eq!(g.interpolate(&v, 2.0), 16.0);
    }
}
