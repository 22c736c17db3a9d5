use num_complex::Complex64;

use super::{ComplexMatrix, ONE, ZERO};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `R_Z(φ) = diag(e^{-iφ/2}, e^{iφ/2})`: a Bloch-sphere rotation by `φ`.
pub fn rz(angle: f64) -> ComplexMatrix {
    let h = 0.5 * angle;
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0, -h).exp(), ZERO, ZERO, c(0.0, h).exp()])
}

/// `R_Y(φ) = exp(-iφY/2)` with the standard `Y = [[0, -i], [i, 0]]`.
pub fn ry(angle: f64) -> ComplexMatrix {
    let (s, co) = (0.5 * angle).sin_cos();
    ComplexMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// Generic single-qubit gate
///
/// ```text
/// U3(Θ, Φ, Λ) = [ cos(Θ/2)          -e^{iΛ} sin(Θ/2)     ]
///               [ e^{iΦ} sin(Θ/2)    e^{i(Φ+Λ)} cos(Θ/2) ]
/// ```
pub fn u3(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, co) = (0.5 * theta).sin_cos();
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c(co, 0.0),
            -c(0.0, lambda).exp() * s,
            c(0.0, phi).exp() * s,
            c(0.0, phi + lambda).exp() * co,
        ],
    )
}

/// CNOT with qubit 0 (the left factor) as control.
pub fn cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Principal matrix power `CNOT^p`.
///
/// CNOT is an involution, so it splits into the projectors `(I ± CNOT)/2`
/// with eigenvalues `1` and `-1 = e^{iπ}`; the power only rephases the second.
pub fn cnot_power(p: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(4, 4);
    let cx = cnot();
    let plus = (&id + &cx).scale(0.5);
    let minus = (&id - &cx).scale(0.5);
    plus + minus * half_turn_phase(p)
}

/// `e^{iπp}`, exact at multiples of a quarter turn.
fn half_turn_phase(p: f64) -> Complex64 {
    let r = p.rem_euclid(2.0);
    match r {
        0.0 => c(1.0, 0.0),
        0.5 => c(0.0, 1.0),
        1.0 => c(-1.0, 0.0),
        1.5 => c(0.0, -1.0),
        _ => {
            let (s, co) = (std::f64::consts::PI * r).sin_cos();
            c(co, s)
        }
    }
}
