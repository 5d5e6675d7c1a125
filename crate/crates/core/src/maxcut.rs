//! Weighted Max-Cut instances and their `sum C_ij Z_i Z_j` cost Hamiltonian.
//!
//! Bit `b` of a node maps to the spin `z = (-1)^b`, so cut edges contribute
//! `-C_ij` and uncut edges `+C_ij`.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::statevector::{DensityMatrix, StateVector, MAX_PURE_QUBITS};

/// Bundled seven-node instance used by every experiment.
pub const TABLE1_JSON: &str = include_str!("../data/table1.json");

/// Relative tolerance when collecting degenerate optima.
const GROUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Undirected graph with nonzero finite edge weights; edges are stored with
/// `i < j`, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (k, (a, b, w)) in edges.into_iter().enumerate() {
            if a == b {
                return Err(Error::InvalidGraph(format!("edge {k}: self-loop on node {a}")));
            }
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge {k}: node index out of range for {num_nodes} nodes ({a}, {b})"
                )));
            }
            if !w.is_finite() || w == 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {k}: weight must be finite and nonzero (got {w})"
                )));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("edge {k}: duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, weight: w });
        }
        out.sort_by_key(|e| (e.i, e.j));
        Ok(Self {
            num_nodes,
            edges: out,
        })
    }

    /// The bundled seven-node, nine-edge bipartite instance.
    pub fn table1() -> Self {
        crate::io::parse_graph(TABLE1_JSON).expect("bundled graph is valid")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn sum_squared_weights(&self) -> f64 {
        self.edges.iter().map(|e| e.weight * e.weight).sum()
    }
}

/// `H_p = sum_edges C_ij Z_i Z_j`, diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemHamiltonian {
    num_qubits: usize,
    terms: Vec<(usize, usize, f64)>,
}

pub fn problem_hamiltonian(graph: &WeightedGraph) -> ProblemHamiltonian {
    ProblemHamiltonian {
        num_qubits: graph.num_nodes(),
        terms: graph.edges().iter().map(|e| (e.i, e.j, e.weight)).collect(),
    }
}

impl ProblemHamiltonian {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(usize, usize, f64)] {
        &self.terms
    }

    /// Energy of the basis state `|index>` (bit `q` of `index` is qubit `q`).
    pub fn energy_of_index(&self, index: usize) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, w)| {
                if ((index >> i) ^ (index >> j)) & 1 == 1 {
                    -w
                } else {
                    w
                }
            })
            .sum()
    }

    /// All `2^m` diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.num_qubits)
            .map(|z| self.energy_of_index(z))
            .collect()
    }
}

/// `sum C_ij z_i z_j` for an explicit assignment, `bits[q]` being node `q`.
pub fn energy_of_bitstring(h: &ProblemHamiltonian, bits: &[bool]) -> Result<f64> {
    if bits.len() != h.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: h.num_qubits,
            got: bits.len(),
        });
    }
    let index = bits
        .iter()
        .enumerate()
        .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
    Ok(h.energy_of_index(index))
}

/// States whose computational-basis distribution is available.
pub trait BasisDistribution {
    fn num_qubits(&self) -> usize;
    fn basis_probabilities(&self) -> Vec<f64>;
}

impl BasisDistribution for StateVector {
    fn num_qubits(&self) -> usize {
        StateVector::num_qubits(self)
    }
    fn basis_probabilities(&self) -> Vec<f64> {
        self.probabilities()
    }
}

impl BasisDistribution for DensityMatrix {
    fn num_qubits(&self) -> usize {
        DensityMatrix::num_qubits(self)
    }
    fn basis_probabilities(&self) -> Vec<f64> {
        self.diagonal()
    }
}

/// `<H_p>` for a pure state or `Tr(rho H_p)` for a density matrix.
pub fn exact_expectation<S: BasisDistribution>(state: &S, h: &ProblemHamiltonian) -> Result<f64> {
    if state.num_qubits() != h.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: h.num_qubits,
            got: state.num_qubits(),
        });
    }
    Ok(state
        .basis_probabilities()
        .iter()
        .zip(h.diagonal())
        .map(|(p, e)| p * e)
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Optimal assignments as basis indices, ascending.
    pub optima: Vec<usize>,
    pub num_nodes: usize,
}

impl GroundState {
    /// Bits of an optimum, node 0 first.
    pub fn bits(&self, index: usize) -> Vec<bool> {
        (0..self.num_nodes).map(|q| (index >> q) & 1 == 1).collect()
    }

    /// Node sets `(bit 0, bit 1)` of an optimum.
    pub fn partition(&self, index: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.num_nodes).partition(|q| (index >> q) & 1 == 0)
    }

    /// Total weight of cut edges at the ground state.
    pub fn cut_value(&self, graph: &WeightedGraph) -> f64 {
        (graph.total_weight() - self.energy) / 2.0
    }
}

/// Exhaustive minimum of the cost over all `2^m` assignments.
pub fn brute_force_ground(graph: &WeightedGraph) -> Result<GroundState> {
    let m = graph.num_nodes();
    if m > MAX_PURE_QUBITS {
        return Err(Error::Size {
            got: m,
            max: MAX_PURE_QUBITS,
        });
    }
    let h = problem_hamiltonian(graph);
    let energy = (0..1usize << m)
        .into_par_iter()
        .map(|z| h.energy_of_index(z))
        .reduce(|| f64::INFINITY, f64::min);
    let tol = GROUND_TOL * energy.abs().max(1.0);
    let optima = (0..1usize << m)
        .into_par_iter()
        .filter(|&z| h.energy_of_index(z) <= energy + tol)
        .collect();
    Ok(GroundState {
        energy,
        optima,
        num_nodes: m,
    })
}
