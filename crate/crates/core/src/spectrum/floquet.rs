use nalgebra::DMatrix;
use rayon::prelude::*;

use super::float::band_function;
use super::SpectrumError;
use crate::jacobi::CoefficientVector;
use crate::scalar::Scalar;

/// Eigenvalues of the Floquet matrix `J(theta)`, from a dense symmetric
/// eigensolve of its real `2p x 2p` embedding `[[Re, -Im], [Im, Re]]`.
pub fn floquet_eigenvalues<S: Scalar>(c: &CoefficientVector<S>, theta: f64) -> Vec<f64> {
    let c = c.to_float();
    let p = c.period();
    let mut re = DMatrix::<f64>::zeros(p, p);
    let mut im = DMatrix::<f64>::zeros(p, p);
    for i in 0..p {
        re[(i, i)] += c.v()[i];
    }
    for i in 0..p.saturating_sub(1) {
        re[(i, i + 1)] += c.a()[i];
        re[(i + 1, i)] += c.a()[i];
    }
    // corner entries e^{-2 pi i theta} a_p (top right) and its conjugate
    let phase = 2.0 * std::f64::consts::PI * theta;
    let ap = c.a()[p - 1];
    re[(0, p - 1)] += ap * phase.cos();
    im[(0, p - 1)] -= ap * phase.sin();
    re[(p - 1, 0)] += ap * phase.cos();
    im[(p - 1, 0)] += ap * phase.sin();

    let mut big = DMatrix::<f64>::zeros(2 * p, 2 * p);
    for i in 0..p {
        for j in 0..p {
            big[(i, j)] = re[(i, j)];
            big[(i + p, j + p)] = re[(i, j)];
            big[(i, j + p)] = -im[(i, j)];
            big[(i + p, j)] = im[(i, j)];
        }
    }
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    // each eigenvalue of J(theta) appears twice in the embedding
    ev.into_iter().step_by(2).collect()
}

/// Largest `|lambda_j(theta) - band_function_j(theta)|` over the grid.
pub fn floquet_crosscheck<S: Scalar>(c: &CoefficientVector<S>, thetas: &[f64]) -> Result<f64, SpectrumError> {
    let c = c.to_float();
    thetas
        .par_iter()
        .map(|&t| {
            let direct = floquet_eigenvalues(&c, t);
            let via_d = band_function(&c, t)?;
            Ok(direct.iter().zip(&via_d).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
