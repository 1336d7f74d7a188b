use super::{solve_linear, ComplexMatrix};
use crate::{Error, Result};

// Degree-13 diagonal Padé coefficients and the 1-norm bound below which
// the unscaled approximant meets double precision (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn add_scaled(acc: &mut ComplexMatrix, m: &ComplexMatrix, s: f64) {
    *acc = &*acc + &m.scale_real(s);
}

/// `exp(t·B)` by scaling and squaring around a degree-13 Padé approximant.
pub fn matrix_exponential(b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = b.square_dim()?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t} is not finite")));
    }
    let a = b.scale_real(t);
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let c = &PADE13;

    let mut inner_u = a6.scale_real(c[13]);
    add_scaled(&mut inner_u, &a4, c[11]);
    add_scaled(&mut inner_u, &a2, c[9]);
    let mut u = a6.matmul(&inner_u);
    add_scaled(&mut u, &a6, c[7]);
    add_scaled(&mut u, &a4, c[5]);
    add_scaled(&mut u, &a2, c[3]);
    add_scaled(&mut u, &id, c[1]);
    let u = a.matmul(&u);

    let mut inner_v = a6.scale_real(c[12]);
    add_scaled(&mut inner_v, &a4, c[10]);
    add_scaled(&mut inner_v, &a2, c[8]);
    let mut v = a6.matmul(&inner_v);
    add_scaled(&mut v, &a6, c[6]);
    add_scaled(&mut v, &a4, c[4]);
    add_scaled(&mut v, &a2, c[2]);
    add_scaled(&mut v, &id, c[0]);

    let mut r = solve_linear(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
        if !r.is_finite() {
            return Err(Error::Overflow(format!("exp(tB) overflows at t = {t}")));
        }
    }
    if !r.is_finite() {
        return Err(Error::Overflow(format!("exp(tB) overflows at t = {t}")));
    }
    Ok(r)
}
