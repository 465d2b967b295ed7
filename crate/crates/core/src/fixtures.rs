//! Small matrices with known spark and stopping distance.

use rand::Rng;

use crate::geometry::{Geometry, GeometryKind};
use crate::incidence::{build_incidence, BinaryMatrix, MatrixType};

/// Vertex-edge incidence of the complete graph on four vertices. Edges are
/// ordered 01, 02, 03, 12, 13, 23.
pub fn k4_incidence() -> BinaryMatrix {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let supports: Vec<Vec<usize>> = (0..4)
        .map(|v| (0..6).filter(|&e| edges[e].0 == v || edges[e].1 == v).collect())
        .collect();
    BinaryMatrix::from_row_supports(4, 6, &supports).expect("K4 incidence is valid")
}

/// Parity-check matrix of the binary Hamming code of length 2^m − 1; column
/// `c` holds the binary digits of `c + 1`.
pub fn hamming(m: usize) -> BinaryMatrix {
    assert!((2..=10).contains(&m), "Hamming order {m} out of range");
    let n = (1usize << m) - 1;
    let supports: Vec<Vec<usize>> = (0..m).map(|bit| (0..n).filter(|c| (c + 1) >> bit & 1 == 1).collect()).collect();
    BinaryMatrix::from_row_supports(m, n, &supports).expect("Hamming matrix is valid")
}

/// Lines over points of EG(2,2): 6×4, every column pair meets in one row.
pub fn eg_2_2_lines() -> BinaryMatrix {
    let g = Geometry::new(GeometryKind::Euclidean, 2, 2).expect("EG(2,2)");
    build_incidence(&g, 0, 1, MatrixType::I).expect("EG(2,2) incidence")
}

/// Uniform random 0/1 matrix, redrawing any column that comes out all zero.
pub fn random_binary<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BinaryMatrix {
    let mut dense = vec![vec![0u8; cols]; rows];
    for j in 0..cols {
        loop {
            for row in dense.iter_mut() {
                row[j] = rng.random_range(0..2);
            }
            if dense.iter().any(|row| row[j] == 1) {
                break;
            }
        }
    }
    BinaryMatrix::from_dense(&dense).expect("no zero columns")
}
