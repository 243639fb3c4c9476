use super::{dense_capped, ldu_defining, DefiningMatrix, DenseMatrix, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::exact::RingValue;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Shape {
    Lower,
    Upper,
}

fn shape_of(m: &DefiningMatrix) -> Result<Shape> {
    if m.is_lower_triangular() {
        Ok(Shape::Lower)
    } else if m.is_upper_triangular() {
        Ok(Shape::Upper)
    } else {
        Err(Error::NotTriangular)
    }
}

fn check_diagonal(m: &DefiningMatrix) -> Result<()> {
    match (0..m.base()).find(|&i| !m.get(i, i).is_invertible()) {
        Some(i) => Err(Error::SingularDiagonal(i)),
        None => Ok(()),
    }
}

/// Defining matrix of the product of two triangular self-similar matrices.
///
/// Non-degenerate lower (or upper) triangular self-similar matrices form a
/// group, and the product is again self-similar with defining matrix
/// `r * t`.
pub fn compose_triangular(r: &DefiningMatrix, t: &DefiningMatrix) -> Result<DefiningMatrix> {
    if r.base() != t.base() {
        return Err(Error::ShapeMismatch(format!(
            "bases {} and {}",
            r.base(),
            t.base()
        )));
    }
    if r.tag() != t.tag() {
        return Err(Error::RingMismatch(format!("{} and {}", r.tag(), t.tag())));
    }
    let (sr, st) = (shape_of(r)?, shape_of(t)?);
    // Diagonal matrices count as both shapes.
    let compatible = sr == st || r.is_diagonal() || t.is_diagonal();
    if !compatible {
        return Err(Error::NotTriangular);
    }
    check_diagonal(r)?;
    check_diagonal(t)?;
    r.matmul(t)
}

/// Defining matrix of the inverse of a triangular self-similar matrix,
/// by substitution on the `b x b` block.
pub fn invert_triangular(m: &DefiningMatrix) -> Result<DefiningMatrix> {
    let shape = shape_of(m)?;
    check_diagonal(m)?;
    let lower = match shape {
        Shape::Lower => m.clone(),
        Shape::Upper => m.transpose(),
    };
    let b = m.base();
    let tag = m.tag();
    // Column by column forward substitution: lower * x = e_j.
    let mut inv = vec![RingValue::zero_in(tag); b * b];
    let diag_inv: Vec<RingValue> = (0..b)
        .map(|i| lower.get(i, i).inv().expect("checked invertible"))
        .collect();
    for j in 0..b {
        inv[j * b + j] = diag_inv[j].clone();
        for i in j + 1..b {
            let s = (j..i).fold(RingValue::zero_in(tag), |acc, k| {
                acc.add(&lower.get(i, k).mul(&inv[k * b + j]))
            });
            inv[i * b + j] = s.neg().mul(&diag_inv[i]);
        }
    }
    let out = DefiningMatrix::from_flat(b, inv)?;
    Ok(match shape {
        Shape::Lower => out,
        Shape::Upper => out.transpose(),
    })
}

/// `M(n)^{-1}` assembled as `U(n)^{-1} D(n)^{-1} L(n)^{-1}` from the
/// inverses of the LDU factors of the defining matrix.
pub fn inverse_dense(m: &DefiningMatrix, n: u64) -> Result<DenseMatrix> {
    let f = ldu_defining(m)?;
    let l_inv = invert_triangular(&f.lower)?;
    let u_inv = invert_triangular(&f.upper)?;
    let tag = m.tag();
    let d_inv = DefiningMatrix::from_fn(m.base(), |i, j| {
        if i == j {
            f.d[i]
                .inv()
                .expect("pivots of a successful LDU are invertible")
        } else {
            RingValue::zero_in(tag)
        }
    })?;
    let u = dense_capped(&u_inv, n, DEFAULT_DENSE_CAP)?;
    let l = dense_capped(&l_inv, n, DEFAULT_DENSE_CAP)?;
    let diag: Vec<RingValue> = (0..n).map(|k| d_inv.entry(k, k)).collect();
    u.scale_columns(&diag).mul(&l)
}
