use super::CssPair;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Hypergraph product of two classical parity-check matrices.
///
/// With `h1: m1 × n1` and `h2: m2 × n2`:
///
/// ```text
/// H_X = [ h1 ⊗ I_n2 | I_m1 ⊗ h2ᵀ ]     (m1·n2 rows)
/// H_Z = [ I_n1 ⊗ h2 | h1ᵀ ⊗ I_m2 ]     (n1·m2 rows)
/// ```
///
/// on `n1·n2 + m1·m2` qubits.
pub fn hypergraph_product(h1: &BitMatrix, h2: &BitMatrix) -> Result<CssPair> {
    for h in [h1, h2] {
        if h.rows() == 0 || h.cols() == 0 {
            return Err(Error::EmptyMatrix {
                rows: h.rows(),
                cols: h.cols(),
            });
        }
    }
    let (m1, n1) = (h1.rows(), h1.cols());
    let (m2, n2) = (h2.rows(), h2.cols());
    let h_x = h1
        .kron(&BitMatrix::identity(n2))
        .hstack(&BitMatrix::identity(m1).kron(&h2.transpose()))?;
    let h_z = BitMatrix::identity(n1)
        .kron(h2)
        .hstack(&h1.transpose().kron(&BitMatrix::identity(m2)))?;
    CssPair::new(h_x, h_z)
}
