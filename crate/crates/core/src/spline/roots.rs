//! Closed-form real roots of low-degree polynomials.
//!
//! Coefficients are always passed highest degree first. Roots are returned
//! sorted ascending; repeated roots may appear twice.

use arrayvec::ArrayVec;

/// Imaginary parts below `IMAG_TOL * max(1, |re|)` are treated as numerical noise.
pub const IMAG_TOL: f64 = 1e-10;

pub type Roots = ArrayVec<f64, 3>;

fn polish(coeffs: &[f64], x: f64) -> f64 {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    if dp != 0.0 {
        let next = x - p / dp;
        if next.is_finite() {
            return next;
        }
    }
    x
}

fn sorted(mut roots: Roots) -> Roots {
    roots.sort_unstable_by(f64::total_cmp);
    roots
}

/// Real roots of `a x^2 + b x + c`, with a linear fallback when `a == 0`.
pub fn real_roots_quadratic(a: f64, b: f64, c: f64) -> Roots {
    let mut out = Roots::new();
    if a == 0.0 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return out;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        if im <= IMAG_TOL * re.abs().max(1.0) {
            out.push(re);
            out.push(re);
        }
        return out;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        // b == 0 and c == 0
        out.push(0.0);
        out.push(0.0);
        return out;
    }
    out.push(q / a);
    out.push(c / q);
    sorted(out)
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`.
///
/// Uses the trigonometric form when all three roots are real and Cardano's
/// formula otherwise. A conjugate pair whose imaginary part is within
/// [`IMAG_TOL`] is reported as a double real root. Every root receives one
/// Newton step on the original polynomial.
pub fn real_roots_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Roots {
    if c3 == 0.0 {
        return real_roots_quadratic(c2, c1, c0);
    }
    if c0 == 0.0 {
        let mut out = real_roots_quadratic(c3, c2, c1);
        out.push(0.0);
        return sorted(out);
    }
    let coeffs = [c3, c2, c1, c0];
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    let shift = a / 3.0;
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let q3 = q * q * q;
    let mut out = Roots::new();
    if r * r < q3 {
        let theta = (r / q3.sqrt()).clamp(-1.0, 1.0).acos();
        let m = -2.0 * q.sqrt();
        let two_pi = 2.0 * std::f64::consts::PI;
        out.push(m * (theta / 3.0).cos() - shift);
        out.push(m * ((theta + two_pi) / 3.0).cos() - shift);
        out.push(m * ((theta - two_pi) / 3.0).cos() - shift);
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q3).sqrt()).cbrt();
        let big_b = if big_a != 0.0 { q / big_a } else { 0.0 };
        out.push(big_a + big_b - shift);
        let re = -0.5 * (big_a + big_b) - shift;
        let im = 0.5 * 3f64.sqrt() * (big_a - big_b).abs();
        if im <= IMAG_TOL * re.abs().max(1.0) {
            out.push(re);
            out.push(re);
        }
    }
    for x in out.iter_mut() {
        *x = polish(&coeffs, *x);
    }
    sorted(out)
}

/// Smallest strictly positive real root of the cubic, if any.
///
/// All-zero coefficients return `None`; the caller treats that as a
/// degenerate segment.
pub fn solve_cubic_min_positive(c3: f64, c2: f64, c1: f64, c0: f64) -> Option<f64> {
    real_roots_cubic(c3, c2, c1, c0)
        .into_iter()
        .find(|&x| x > 0.0 && x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_cubic() {
        assert!((solve_cubic_min_positive(1.0, -6.0, 11.0, -6.0).unwrap() - 1.0).abs() < 1e-12);
        let all = real_roots_cubic(1.0, -6.0, 11.0, -6.0);
        assert_eq!(all.len(), 3);
        for (got, want) in all.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn only_negative_root() {
        assert_eq!(solve_cubic_min_positive(1.0, 0.0, 0.0, 1.0), None);
    }

    #[test]
    fn quadratic_fallback() {
        assert!((solve_cubic_min_positive(0.0, 1.0, -3.0, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_zero_is_none() {
        assert_eq!(solve_cubic_min_positive(0.0, 0.0, 0.0, 0.0), None);
    }

    #[test]
    fn double_root_survives_noise() {
        // (x - 1)^2 (x + 2)
        let r = real_roots_cubic(1.0, 0.0, -3.0, 2.0);
        assert_eq!(r.len(), 3);
        assert!((r[1] - 1.0).abs() < 1e-7 && (r[2] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn zero_constant_term_deflates() {
        // x (x - 2)(x - 5)
        let r = real_roots_cubic(1.0, -7.0, 10.0, 0.0);
        assert_eq!(r.as_slice(), &[0.0, 2.0, 5.0]);
        assert_eq!(solve_cubic_min_positive(1.0, -7.0, 10.0, 0.0), Some(2.0));
    }

    #[test]
    fn roots_match_random_factored_cubics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let mut want = [
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
            ];
            want.sort_by(f64::total_cmp);
            if want[1] - want[0] < 1e-3 || want[2] - want[1] < 1e-3 {
                continue;
            }
            let k: f64 = rng.gen_range(0.1..5.0);
            let c2 = -k * (want[0] + want[1] + want[2]);
            let c1 = k * (want[0] * want[1] + want[1] * want[2] + want[0] * want[2]);
            let c0 = -k * want[0] * want[1] * want[2];
            let got = real_roots_cubic(k, c2, c1, c0);
            assert_eq!(got.len(), 3);
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-8 * w.abs().max(1.0), "{got:?} vs {want:?}");
            }
        }
    }
}
