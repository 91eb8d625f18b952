//! Log-space tail arithmetic for the discretized noise generators.
//!
//! Grid cells far from a row's center carry masses like e^{−2000}; they
//! underflow f64 but their *logarithms* drive posterior and likelihood-ratio
//! computations, so cell masses are produced directly in log space by
//! differencing two same-side tail values.

/// ln(e^la − e^lb) for la ≥ lb.
pub(crate) fn log_sub_exp(la: f64, lb: f64) -> f64 {
    debug_assert!(la >= lb);
    if lb == f64::NEG_INFINITY {
        return la;
    }
    la + (-((lb - la).exp())).ln_1p()
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Φ̄(z): log of the standard normal upper tail.
///
/// For z ≤ 36 the tail is representable and `erfc` is accurate; beyond that
/// a four-term asymptotic expansion of Mills' ratio takes over (relative
/// error < 1e-12 at the switch point and shrinking in z).
pub(crate) fn log_phi_bar(z: f64) -> f64 {
    if z <= 36.0 {
        (0.5 * libm::erfc(z / std::f64::consts::SQRT_2)).ln()
    } else {
        let zi = 1.0 / (z * z);
        let series = -zi * (1.0 - zi * (3.0 - zi * (15.0 - 105.0 * zi)));
        -0.5 * z * z - z.ln() - LN_SQRT_2PI + series.ln_1p()
    }
}

/// The noise shapes supported by the discretized generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    /// Density ∝ exp(−|y|/scale).
    Laplace,
    /// Density ∝ exp(−y²/(2·scale²)).
    Gaussian,
}

impl Shape {
    /// ln F(x) where F is the CDF of the centered noise with the given scale.
    pub(crate) fn log_cdf(self, scale: f64, x: f64) -> f64 {
        match self {
            Shape::Laplace => {
                if x <= 0.0 {
                    x / scale - std::f64::consts::LN_2
                } else {
                    (-0.5 * (-x / scale).exp()).ln_1p()
                }
            }
            Shape::Gaussian => log_phi_bar(-x / scale),
        }
    }

    /// ln (1 − F(x)); both shapes are symmetric so this is ln F(−x).
    pub(crate) fn log_sf(self, scale: f64, x: f64) -> f64 {
        self.log_cdf(scale, -x)
    }

    /// ln of the mass on the interval [a, b] (a < b), differencing same-side
    /// tails so far-away cells keep full log accuracy.
    pub(crate) fn log_interval_mass(self, scale: f64, a: f64, b: f64) -> f64 {
        if b <= 0.0 {
            log_sub_exp(self.log_cdf(scale, b), self.log_cdf(scale, a))
        } else if a >= 0.0 {
            log_sub_exp(self.log_sf(scale, a), self.log_sf(scale, b))
        } else {
            // straddles the center: both tails are <= 1/2, no cancellation risk
            let mass = 1.0 - self.log_cdf(scale, a).exp() - self.log_sf(scale, b).exp();
            mass.max(f64::MIN_POSITIVE).ln()
        }
    }

    /// Half-width W such that each untruncated tail beyond W carries at most
    /// `tail_mass / 2`.
    pub(crate) fn half_width(self, scale: f64, tail_mass: f64) -> f64 {
        let target = (tail_mass / 2.0).ln();
        match self {
            Shape::Laplace => {
                // ½ e^{−W/λ} = tail/2  ⇒  W = λ·ln(1/tail)
                -scale * (tail_mass.ln())
            }
            Shape::Gaussian => {
                let mut lo = 0.0;
                let mut hi = 200.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if log_phi_bar(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                scale * 0.5 * (lo + hi)
            }
        }
    }
}
