//! Dense complex matrix exponential: scaling and squaring with a
//! degree-13 Padé approximant (Higham 2005).

use ndarray::{Array2, Zip};
use num_complex::Complex64;

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

/// Largest 1-norm for which the unscaled degree-13 approximant meets unit roundoff.
const THETA13: f64 = 5.371920351148152;

pub(crate) fn norm_1(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

/// `a·x + b·y` with real coefficients.
fn axpby(a: f64, x: &Array2<Complex64>, b: f64, y: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = x * a;
    Zip::from(&mut out).and(y).for_each(|o, &v| *o += v * b);
    out
}

/// Solve `Q X = P` by LU factorization with partial pivoting.
fn solve(mut q: Array2<Complex64>, mut p: Array2<Complex64>) -> Array2<Complex64> {
    let n = q.nrows();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &l| q[[i, k]].norm().total_cmp(&q[[l, k]].norm()))
            .unwrap_or(k);
        if pivot != k {
            for c in 0..n {
                q.swap([k, c], [pivot, c]);
            }
            for c in 0..p.ncols() {
                p.swap([k, c], [pivot, c]);
            }
        }
        let d = q[[k, k]];
        for i in (k + 1)..n {
            let f = q[[i, k]] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            q[[i, k]] = f;
            for c in (k + 1)..n {
                let v = q[[k, c]];
                q[[i, c]] -= f * v;
            }
            for c in 0..p.ncols() {
                let v = p[[k, c]];
                p[[i, c]] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        let d = q[[k, k]];
        for c in 0..p.ncols() {
            let mut acc = p[[k, c]];
            for l in (k + 1)..n {
                acc -= q[[k, l]] * p[[l, c]];
            }
            p[[k, c]] = acc / d;
        }
    }
    p
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    let norm = norm_1(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * 2f64.powi(-squarings);
    let b = &PADE13;
    let ident = identity(n);

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let inner_u = axpby(b[13], &a6, b[11], &a4) + &(&a2 * b[9]);
    let u_sum = a6.dot(&inner_u) + &(&a6 * b[7]) + &(&a4 * b[5]) + &(&a2 * b[3]) + &(&ident * b[1]);
    let u = a.dot(&u_sum);

    let inner_v = axpby(b[12], &a6, b[10], &a4) + &(&a2 * b[8]);
    let v = a6.dot(&inner_v) + &(&a6 * b[6]) + &(&a4 * b[4]) + &(&a2 * b[2]) + &(&ident * b[0]);

    let mut r = solve(&v - &u, &v + &u);
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let z = Array2::<Complex64>::zeros((4, 4));
        assert_eq!(expm(&z), identity(4));
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let a = Array2::from_diag(&ndarray::arr1(&[c(1.0, 0.5), c(-2.0, 3.0), c(0.0, -7.0)]));
        let e = expm(&a);
        for k in 0..3 {
            assert!((e[[k, k]] - a[[k, k]].exp()).norm() < 1e-13 * a[[k, k]].exp().norm().max(1.0));
        }
        assert!(e[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, −t], [t, 0]]) is a rotation by t; large t forces squarings
        for &t in &[0.3, 4.0, 40.0] {
            let a = array![[c(0.0, 0.0), c(-t, 0.0)], [c(t, 0.0), c(0.0, 0.0)]];
            let e = expm(&a);
            assert!((e[[0, 0]] - c(t.cos(), 0.0)).norm() < 1e-12);
            assert!((e[[1, 0]] - c(t.sin(), 0.0)).norm() < 1e-12);
            assert!((e[[0, 1]] + c(t.sin(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_is_finite_series() {
        let a = array![
            [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        ];
        let want = &identity(3) + &a + &(a.dot(&a) * 0.5);
        let got = expm(&a);
        Zip::from(&got)
            .and(&want)
            .for_each(|g, w| assert!((g - w).norm() < 1e-13));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let q = array![[c(0.0, 1.0), c(2.0, 0.0)], [c(1.0, 0.0), c(1.0, -1.0)]];
        let x = array![[c(1.0, 2.0)], [c(-0.5, 0.25)]];
        let p = q.dot(&x);
        let got = solve(q, p);
        Zip::from(&got)
            .and(&x)
            .for_each(|g, w| assert!((g - w).norm() < 1e-14));
    }
}
