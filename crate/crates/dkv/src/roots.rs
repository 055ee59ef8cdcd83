//! Polynomial root finding: companion matrix, balancing, shifted QR for
//! Hessenberg eigenvalues, and Newton polishing.
//!
//! Coefficient slices are ordered low to high: `coeffs[k]` multiplies `z^k`.

// Index loops follow the textbook matrix recurrences.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Evaluates a polynomial at a complex point by Horner's rule.
pub fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Evaluates the derivative at a complex point.
pub fn horner_deriv(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
}

/// Newton-polishes a root estimate; keeps the iterate with the smallest
/// backward error. Stalls (tiny derivative) end the iteration early.
pub fn polish_root(coeffs: &[f64], start: Complex64) -> Complex64 {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let mut best = start;
    let mut best_err = horner(coeffs, start).norm();
    let mut z = start;
    for _ in 0..40 {
        let p = horner(coeffs, z);
        let dp = horner_deriv(coeffs, z);
        if dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp;
        z -= step;
        let err = horner(coeffs, z).norm();
        if err < best_err {
            best = z;
            best_err = err;
        }
        if step.norm() <= 1e-16 * z.norm().max(1.0) || err <= 1e-300 * scale {
            break;
        }
    }
    best
}

/// All complex roots of a real-coefficient polynomial via the balanced
/// companion matrix, sorted by real part then imaginary part.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let degree = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(d) => d,
        None => return Err(Error::InvalidParams("zero polynomial has no roots".into())),
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParams("polynomial coefficients must be finite".into()));
    }
    let lead = coeffs[degree];
    let mut roots = match degree {
        0 => Vec::new(),
        1 => vec![Complex64::new(-coeffs[0] / lead, 0.0)],
        2 => quadratic_roots(coeffs[2], coeffs[1], coeffs[0]).to_vec(),
        _ => {
            // Monic companion in upper Hessenberg form: first row carries the
            // negated coefficients, ones on the subdiagonal.
            let n = degree;
            let mut m = vec![vec![0.0f64; n + 1]; n + 1];
            for j in 1..=n {
                m[1][j] = -coeffs[degree - j] / lead;
            }
            for i in 2..=n {
                m[i][i - 1] = 1.0;
            }
            balance(&mut m, n);
            hessenberg_eigenvalues(&mut m, n)?
        }
    };
    for r in roots.iter_mut() {
        *r = polish_root(coeffs, *r);
    }
    roots.sort_by(|p, q| {
        p.re.partial_cmp(&q.re)
            .unwrap()
            .then(p.im.partial_cmp(&q.im).unwrap())
    });
    Ok(roots)
}

/// Roots of `a z^2 + b z + c`, `a != 0`, stable against cancellation.
fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + disc.sqrt().copysign(b));
        let r0 = if q != 0.0 { c / q } else { 0.0 };
        let r1 = if a != 0.0 && q != 0.0 { q / a } else { -b / a - r0 };
        [Complex64::new(r0, 0.0), Complex64::new(r1, 0.0)]
    } else {
        let re = -0.5 * b / a;
        let im = 0.5 * (-disc).sqrt() / a.abs();
        [Complex64::new(re, -im), Complex64::new(re, im)]
    }
}

/// Similarity-balances rows and columns of `a[1..=n][1..=n]` (radix scaling).
fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 1..=n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let s = c + r;
                let mut c = c;
                let g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                let g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Eigenvalues of the upper Hessenberg matrix `a[1..=n][1..=n]` by the
/// implicit double-shift QR iteration. Destroys `a`.
fn hessenberg_eigenvalues(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex64>> {
    let mut eig: Vec<Complex64> = Vec::with_capacity(n);
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a negligible subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                eig.push(Complex64::new(x + t, 0.0));
                nn -= 1;
                break;
            }
            let mut y = a[nn - 1][nn - 1];
            let mut w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let first = x + z;
                    let second = if z != 0.0 { x - w / z } else { first };
                    eig.push(Complex64::new(first, 0.0));
                    eig.push(Complex64::new(second, 0.0));
                } else {
                    eig.push(Complex64::new(x + p, z));
                    eig.push(Complex64::new(x + p, -z));
                }
                nn -= 2;
                break;
            }
            if its == 30 {
                return Err(Error::NoConvergence(
                    "QR iteration exceeded 30 sweeps per eigenvalue".into(),
                ));
            }
            if its == 10 || its == 20 {
                // Exceptional shift to break limit cycles.
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Find two consecutive small subdiagonals for the implicit start.
            let mut m = nn - 2;
            let mut p = 0.0;
            let mut q = 0.0;
            let mut r = 0.0;
            while m >= l {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            // Double QR step on rows l..=nn, columns m..=nn.
            for k in m..=nn - 1 {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nn - 1 { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
            }
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Expands a conjugate-closed root multiset into real coefficients.
    fn poly_from_roots(roots: &[Complex64]) -> Vec<f64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        c.iter().map(|z| z.re).collect()
    }

    fn assert_root_multiset(coeffs: &[f64], expected: &[Complex64], tol: f64) {
        let got = companion_roots(coeffs).unwrap();
        assert_eq!(got.len(), expected.len());
        let mut exp = expected.to_vec();
        exp.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap().then(p.im.partial_cmp(&q.im).unwrap()));
        for (g, e) in got.iter().zip(exp.iter()) {
            assert!(
                (g - e).norm() < tol,
                "root {g} differs from expected {e} in {coeffs:?}"
            );
        }
    }

    #[test]
    fn solves_factored_cubic() {
        // (z-1)(z-2)(z-3): low-to-high coefficients.
        assert_root_multiset(
            &[-6.0, 11.0, -6.0, 1.0],
            &[1.0, 2.0, 3.0].map(|r| Complex64::new(r, 0.0)),
            1e-12,
        );
    }

    #[test]
    fn solves_cube_root_of_eight() {
        let s3 = 3.0f64.sqrt();
        assert_root_multiset(
            &[-8.0, 0.0, 0.0, 1.0],
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(-1.0, s3),
                Complex64::new(-1.0, -s3),
            ],
            1e-12,
        );
    }

    #[test]
    fn solves_level_condition_cubic() {
        // t^3 - 9.75 t^2 + 39.0625, the first-level root condition of the
        // reference parameter point.
        assert_root_multiset(
            &[39.0625, 0.0, -9.75, 1.0],
            &[
                Complex64::new(-1.8361589591212466, 0.0),
                Complex64::new(2.2879774436830647, 0.0),
                Complex64::new(9.29818151543818, 0.0),
            ],
            1e-10,
        );
    }

    #[test]
    fn handles_low_degrees() {
        assert!(companion_roots(&[0.0]).is_err());
        assert!(companion_roots(&[3.0]).unwrap().is_empty());
        assert_root_multiset(&[-3.0, 2.0], &[Complex64::new(1.5, 0.0)], 1e-14);
        assert_root_multiset(
            &[2.0, -3.0, 1.0],
            &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            1e-12,
        );
        assert_root_multiset(
            &[1.0, 0.0, 1.0],
            &[Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)],
            1e-12,
        );
    }

    #[test]
    fn recovers_scattered_real_roots() {
        let roots: Vec<Complex64> = [-7.5, -2.0, -0.25, 0.75, 3.0, 11.0, 40.0]
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect();
        let coeffs = poly_from_roots(&roots);
        assert_root_multiset(&coeffs, &roots, 1e-7);
    }

    #[test]
    fn recovers_mixed_complex_roots() {
        let roots = vec![
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.5, 2.0),
            Complex64::new(0.5, -2.0),
            Complex64::new(4.0, 1.0),
            Complex64::new(4.0, -1.0),
        ];
        let coeffs = poly_from_roots(&roots);
        assert_root_multiset(&coeffs, &roots, 1e-8);
    }

    #[test]
    fn polishing_reduces_backward_error() {
        let coeffs = [39.0625, 0.0, -9.75, 1.0];
        let rough = Complex64::new(2.29, 0.0);
        let polished = polish_root(&coeffs, rough);
        assert!(horner(&coeffs, polished).norm() < 1e-12);
    }

    #[test]
    fn ignores_trailing_zero_coefficients() {
        let got = companion_roots(&[-6.0, 11.0, -6.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(got.len(), 3);
    }
}
