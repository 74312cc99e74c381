use std::f64::consts::PI;

/// Below this value of `|n d|` the kernel is evaluated from its Taylor
/// expansion around the removable singularity.
const SERIES_SWITCH: f64 = 1e-4;

/// Fejér kernel `F_n(x) = (1/n) sin²(n x / 2) / sin²(x / 2)`, with
/// `F_n(2πk) = n`.
pub fn fejer_kernel(x: f64, n: u64) -> f64 {
    fejer_cycles(x / (2.0 * PI), n)
}

/// `F_n(2π d)` for a phase `d` measured in turns.
///
/// Both sines are evaluated on reduced arguments, so the numerator stays
/// accurate for large `n` when `n` is a power of two.
pub fn fejer_cycles(d: f64, n: u64) -> f64 {
    assert!(n >= 1, "kernel order must be positive");
    let nf = n as f64;
    let d = d - d.round();
    let nd = nf * d;
    if nd.abs() < SERIES_SWITCH {
        // sin(n u) / sin(u) = n (1 − (n² − 1) u² / 6 + O(n⁴u⁴)), u = π d.
        let u = PI * d;
        return nf * (1.0 - (nf * nf - 1.0) * u * u / 3.0);
    }
    let num = (PI * (nd - nd.round())).sin();
    let den = (PI * d).sin();
    num * num / (den * den * nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removable_singularity() {
        assert_eq!(fejer_kernel(0.0, 16), 16.0);
        assert_eq!(fejer_kernel(2.0 * PI, 16), 16.0);
        assert_eq!(fejer_kernel(0.3, 1), 1.0);
    }

    #[test]
    fn zeros_on_the_grid() {
        for k in 1..16 {
            assert!(fejer_kernel(2.0 * PI * k as f64 / 16.0, 16) < 1e-28);
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        let n = 1u64 << 10;
        let d = SERIES_SWITCH / n as f64;
        let below = fejer_cycles(d * (1.0 - 1e-9), n);
        let above = fejer_cycles(d * (1.0 + 1e-9), n);
        assert!((below - above).abs() / above < 1e-12);
    }

    #[test]
    fn symmetric_and_periodic() {
        for &x in &[0.1, 1.3, 2.9] {
            assert!((fejer_kernel(x, 7) - fejer_kernel(-x, 7)).abs() < 1e-13);
            assert!((fejer_kernel(x, 7) - fejer_kernel(x + 2.0 * PI, 7)).abs() < 1e-12);
        }
    }
}
