//! Explicit 2x2 pairs at which the constants √2 (on `‖|X*|+|Y*|‖`) and
//! `√((√2+1)/2)` (on `‖X+Y‖`) are attained.

use serde::Serialize;

use crate::geometry::hs_norm;
use crate::inequality::lee_constant;
use crate::matrix::Matrix;
use crate::spectral::{abs_adjoint, abs_op};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproQuantity {
    pub name: &'static str,
    pub value: f64,
    pub target: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl ReproQuantity {
    fn new(name: &'static str, value: f64, target: f64, tolerance: f64) -> Self {
        let deviation = (value - target).abs();
        Self {
            name,
            value,
            target,
            deviation,
            tolerance,
            ok: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub x: Matrix<f64>,
    pub y: Matrix<f64>,
    pub z: Matrix<f64>,
    pub quantities: Vec<ReproQuantity>,
    pub all_ok: bool,
}

/// `X = [[0,0],[−1,0]]`, `Y = diag(0,1)`, `Z = [[0,0],[1−√2, √(√8−2)]]`.
pub fn witnesses() -> (Matrix<f64>, Matrix<f64>, Matrix<f64>) {
    let x = Matrix::from_real(2, 2, &[0.0, 0.0, -1.0, 0.0]).expect("finite");
    let y = Matrix::diag_real(&[0.0, 1.0]);
    let z = Matrix::from_real(
        2,
        2,
        &[0.0, 0.0, 1.0 - std::f64::consts::SQRT_2, (8f64.sqrt() - 2.0).sqrt()],
    )
    .expect("finite");
    (x, y, z)
}

/// Evaluates both sides of the two sharpness witnesses.
pub fn repro_remark_3_8() -> ReproReport {
    let (x, y, z) = witnesses();
    let abs = |m: &Matrix<f64>| abs_op(m).expect("square input");
    let abs_adj = |m: &Matrix<f64>| abs_adjoint(m).expect("square input");

    let sum_left = hs_norm(&(&abs_adj(&x) + &abs_adj(&y)));
    let sum_right = std::f64::consts::SQRT_2 * hs_norm(&(&abs(&x) + &abs(&y)));
    let xz = hs_norm(&(&x + &z));
    let xz_abs = lee_constant::<f64>() * hs_norm(&(&abs(&x) + &abs(&z)));
    let root = 8f64.powf(0.25);

    let quantities = vec![
        ReproQuantity::new("norm_abs_adj_x_plus_abs_adj_y", sum_left, 2.0, 1e-12),
        ReproQuantity::new("sqrt2_norm_abs_x_plus_abs_y", sum_right, 2.0, 1e-12),
        ReproQuantity::new("norm_x_plus_z", xz, root, 1e-9),
        ReproQuantity::new("lee_norm_abs_x_plus_abs_z", xz_abs, root, 1e-9),
    ];
    let all_ok = quantities.iter().all(|q| q.ok);
    ReproReport {
        x,
        y,
        z,
        quantities,
        all_ok,
    }
}
