//! Integer matrix sets used as regression examples.

use crate::linalg::{Matrix, MatrixAlphabet};

fn alphabet(ms: &[&[&[f64]]]) -> MatrixAlphabet {
    let ms = ms
        .iter()
        .map(|m| {
            let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
            Matrix::from_rows(&rows).expect("fixture matrices are well formed")
        })
        .collect();
    MatrixAlphabet::new(ms).expect("fixture matrices share a dimension")
}

/// Four 3×3 matrices whose quartic SOS bound changes under transposition.
pub fn ex41() -> MatrixAlphabet {
    alphabet(&[
        &[&[10., -6., -1.], &[8., 1., -16.], &[-8., 0., 17.]],
        &[&[-5., 9., -14.], &[1., 5., 10.], &[3., 2., 16.]],
        &[&[-14., 1., 0.], &[-15., -8., -12.], &[-1., -6., 7.]],
        &[&[1., -8., -2.], &[1., 16., 3.], &[16., 11., 14.]],
    ])
}

/// Two 2×2 matrices with JSR 1 where the common quadratic bound is `√2`.
pub fn ex52() -> MatrixAlphabet {
    alphabet(&[&[&[1., 0.], &[1., 0.]], &[&[0., 1.], &[0., -1.]]])
}

/// Three 5×5 integer matrices.
pub fn ex53() -> MatrixAlphabet {
    alphabet(&[
        &[
            &[0., -2., 2., 2., 4.],
            &[0., 0., -4., -1., -6.],
            &[2., 6., 0., -8., 0.],
            &[-2., -2., -3., 1., -3.],
            &[-1., -5., 2., 6., -4.],
        ],
        &[
            &[-5., -2., -4., 6., -1.],
            &[1., 1., 4., 3., -5.],
            &[-2., 3., -2., 8., -1.],
            &[0., 8., -6., 2., 5.],
            &[-1., -5., 1., 7., -4.],
        ],
        &[
            &[3., -8., -3., 2., -4.],
            &[-2., -2., -9., 4., -1.],
            &[2., 2., -5., -8., 6.],
            &[-4., -1., 4., -3., 0.],
            &[0., 5., 0., -3., 5.],
        ],
    ])
}

pub fn by_name(name: &str) -> Option<MatrixAlphabet> {
    match name {
        "ex4.1" => Some(ex41()),
        "ex5.2" => Some(ex52()),
        "ex5.3" => Some(ex53()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!((ex41().n(), ex41().m()), (3, 4));
        assert_eq!((ex52().n(), ex52().m()), (2, 2));
        assert_eq!((ex53().n(), ex53().m()), (5, 3));
        assert!(by_name("ex9").is_none());
    }
}
