//! Dataset-scale smoke tests; slow, so ignored by default.
//!
//! Run with: cargo test --release -p flowattack --test scale_smoke -- --ignored

use flowattack::electrical::ComponentSolver;
use flowattack::generate::{assign_random_integer_weights, generate, GeneratorSpec, GraphModel};
use flowattack::{anf, gomory_hu_tree, max_flow};

// Transmission-grid scale: ~1500 nodes, ~2300 edges, sparse.
const N: usize = 1500;
const M: usize = 2300;

fn grid_scale_graph() -> flowattack::graph::WeightedGraph {
    let topology =
        generate(&GeneratorSpec::new(GraphModel::WattsStrogatz, N, M, 42).connected()).unwrap();
    assign_random_integer_weights(&topology, 66, 500, 43).unwrap()
}

#[test]
#[ignore]
fn dense_solver_handles_grid_scale_components() {
    let g = grid_scale_graph();
    let solver = ComponentSolver::new(&g).unwrap();
    // The factorization is reused across pairs; every solve is
    // residual-checked internally, so success here is the assertion.
    let nodes: Vec<_> = g.nodes().collect();
    for (s, t) in [(0usize, N - 1), (1, N / 2), (7, 13)] {
        let r = solver.effective_resistance(nodes[s], nodes[t]).unwrap();
        assert!(r > 0.0 && r.is_finite());
    }
    let inv = solver.grounded_inverse().unwrap();
    assert_eq!(inv.len(), N * N);
}

#[test]
#[ignore]
fn flow_kernels_handle_grid_scale_graphs() {
    let g = grid_scale_graph();
    let f = max_flow(&g, 0, (N - 1) as u32).unwrap();
    assert!(f > 0.0);
    let tree = gomory_hu_tree(&g).unwrap();
    assert_eq!(tree.edges().len(), N - 1);
    assert!((tree.flow_between(0, (N - 1) as u32).unwrap() - f).abs() < 1e-9);
    assert!(anf(&g) > 0.0);
}
