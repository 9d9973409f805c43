//! Special functions.

pub use statrs::function::gamma::gamma;

/// Scaled complementary error function `exp(x^2) erfc(x)`, finite for
/// all x > -26.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    if x < 1.0 {
        // e^{x^2} erf(x) = (2/sqrt(pi)) sum_n 2^n x^{2n+1} / (2n+1)!!
        let mut term = x;
        let mut sum = 0.0;
        let mut n = 0.0;
        while term > 1e-18 * sum || sum == 0.0 {
            sum += term;
            n += 1.0;
            term *= 2.0 * x * x / (2.0 * n + 1.0);
            if x == 0.0 {
                break;
            }
        }
        return (x * x).exp() - 2.0 * inv_sqrt_pi * sum;
    }
    // 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let depth = if x >= 3.0 { 60 } else if x >= 1.5 { 120 } else { 240 };
    let mut f = x;
    for k in (1..=depth).rev() {
        f = x + 0.5 * k as f64 / f;
    }
    inv_sqrt_pi / f
}
