// Copyright 2026 The nanorod-lifshitz developers
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Modified Bessel functions of the second kind, orders 0, 1 and 2.
//!
//! K₀ and K₁ come from the ascending series for `x <= 2` and from Steed's
//! continued fraction (Temme's CF2) above. K₂ follows from the upward
//! recurrence K₂(x) = K₀(x) + 2K₁(x)/x, which is stable for K.
//!
//! Relative accuracy is better than 1e-12 on [1e-8, 700]. Above roughly
//! x = 745 the values underflow and zero is returned.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments at or below this use the ascending series.
pub(crate) const SERIES_SWITCH: f64 = 2.0;

/// Past this point `exp(-x)` is zero in double precision.
const UNDERFLOW: f64 = 746.0;

/// Order of a modified Bessel function of the second kind.
///
/// The rod kernel only ever needs K₀, K₁ and K₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BesselOrder {
    Zero,
    One,
    Two,
}

impl BesselOrder {
    pub fn index(self) -> usize {
        match self {
            BesselOrder::Zero => 0,
            BesselOrder::One => 1,
            BesselOrder::Two => 2,
        }
    }
}

impl TryFrom<u32> for BesselOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            2 => Ok(BesselOrder::Two),
            n => Err(Error::domain(format!(
                "Bessel K of order {n} is not supported (orders 0, 1, 2 only)"
            ))),
        }
    }
}

/// K_order(x) for x > 0.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("Bessel K requires x > 0, got {x}")));
    }
    Ok(bessel_k012(x)[order.index()])
}

/// Same as [`bessel_k`] with the order given as an integer.
pub fn bessel_k_int(order: u32, x: f64) -> Result<f64> {
    bessel_k(BesselOrder::try_from(order)?, x)
}

/// `[K₀(x), K₁(x), K₂(x)]` without argument checks. `x` must be positive.
#[inline]
pub(crate) fn bessel_k012(x: f64) -> [f64; 3] {
    debug_assert!(x > 0.0);
    let (k0, k1) = if x <= SERIES_SWITCH {
        k01_series(x)
    } else if x >= UNDERFLOW {
        return [0.0; 3];
    } else {
        let (k0e, k1e) = k01_scaled_continued_fraction(x);
        let e = (-x).exp();
        (k0e * e, k1e * e)
    };
    [k0, k1, k0 + 2.0 * k1 / x]
}

/// Ascending series for K₀ and K₁, accurate for 0 < x <= 2.
pub(crate) fn k01_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // term0 = t^k / (k!)^2, term1 = t^k / (k! (k+1)!), harmonic = H_k
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 0.0;
    let mut digamma0 = 0.0;
    let mut i1 = 0.0;
    let mut digamma1 = 0.0;
    for k in 0..64 {
        if k > 0 {
            let kf = k as f64;
            term0 *= t / (kf * kf);
            term1 *= t / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        let harmonic_next = harmonic + 1.0 / (k as f64 + 1.0);
        i0 += term0;
        digamma0 += harmonic * term0;
        i1 += term1;
        // psi(k+1) + psi(k+2)
        digamma1 += (harmonic + harmonic_next - 2.0 * EULER_GAMMA) * term1;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + digamma0;
    let k1 = 1.0 / x + log_half * (0.5 * x * i1) - 0.25 * x * digamma1;
    (k0, k1)
}

/// Exponentially scaled `(K₀(x)eˣ, K₁(x)eˣ)` from Steed's method on CF2.
/// Converges quickly for x >= 2.
pub(crate) fn k01_scaled_continued_fraction(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // mpmath at 40 digits, see tests/oracles/bessel_reference.py
    const REFERENCE: &[(f64, [f64; 3])] = &[
        (1e-8, [18.536_612_259_610_778_409_369_958_159_1, 99_999_999.999_999_904_816_938_701_946_1, 1.999_999_999_999_999_95e16]),
        (1e-6, [13.931_442_073_626_419_413_437_074_672_2, 999_999.999_992_784_278_963_187_707_883, 1_999_999_999_999.500_000_000_001_835_18]),
        (1.0, [0.421_024_438_240_708_333_335_627_379_213, 0.601_907_230_197_234_574_737_540_001_536, 1.624_838_898_635_177_482_810_707_382_28]),
        (2.0, [0.113_893_872_749_533_435_652_719_574_932, 0.139_865_881_816_522_427_284_598_807_035, 0.253_759_754_566_055_862_937_318_381_968]),
        (5.0, [0.003_691_098_334_042_594_274_735_261_007_46, 0.004_044_613_445_452_164_208_365_021_837_54, 0.005_308_943_712_223_459_958_081_269_742_47]),
        (50.0, [3.410_167_749_789_495_513_920_675_512_35e-23, 3.444_102_226_717_555_612_591_853_035_91e-23, 3.547_931_838_858_197_738_424_349_633_79e-23]),
        (700.0, [4.669_776_431_685_376_880_985_627_636_44e-306, 4.673_110_796_707_966_109_075_718_458_51e-306, 4.683_128_176_818_828_212_725_843_974_9e-306]),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(x, expect) in REFERENCE {
            for (order, want) in expect.iter().enumerate() {
                let got = bessel_k_int(order as u32, x).unwrap();
                assert!(rel(got, *want) < 1e-12, "K{order}({x}) = {got}, want {want}");
            }
        }
    }

    #[test]
    fn recurrence_at_one() {
        let k0 = bessel_k(BesselOrder::Zero, 1.0).unwrap();
        let k1 = bessel_k(BesselOrder::One, 1.0).unwrap();
        let k2 = bessel_k(BesselOrder::Two, 1.0).unwrap();
        assert!(rel(k2, k0 + 2.0 * k1) < 1e-12);
    }

    #[test]
    fn leading_asymptotic_at_fifty() {
        let x = 50.0;
        let lead = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        let ratio = bessel_k(BesselOrder::Zero, x).unwrap() / lead;
        assert!((ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn series_and_continued_fraction_agree_at_seam() {
        let x = SERIES_SWITCH;
        let (s0, s1) = k01_series(x);
        let (c0, c1) = k01_scaled_continued_fraction(x);
        let e = (-x).exp();
        assert!(rel(s0, c0 * e) < 1e-13, "{s0} vs {}", c0 * e);
        assert!(rel(s1, c1 * e) < 1e-13, "{s1} vs {}", c1 * e);
    }

    #[test]
    fn small_argument_limit() {
        let x = 1e-6;
        let v = x * bessel_k(BesselOrder::One, x).unwrap();
        assert!((v - 1.0).abs() < 1e-5);
    }

    #[test]
    fn underflow_is_zero() {
        for order in 0..3 {
            assert_eq!(bessel_k_int(order, 800.0).unwrap(), 0.0);
            assert_eq!(bessel_k_int(order, 1e6).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_k(BesselOrder::Zero, 0.0).is_err());
        assert!(bessel_k(BesselOrder::One, -1.0).is_err());
        assert!(bessel_k(BesselOrder::Two, f64::NAN).is_err());
        assert!(bessel_k_int(3, 1.0).is_err());
    }

    #[test]
    fn decreasing_and_positive() {
        let mut prev = [f64::INFINITY; 3];
        for i in 0..=4000 {
            let x = 1e-8 * 10f64.powf(i as f64 * 10.845 / 4000.0);
            let k = bessel_k012(x);
            for o in 0..3 {
                assert!(k[o] > 0.0, "K{o}({x}) not positive");
                assert!(k[o] < prev[o], "K{o} not decreasing at {x}");
            }
            prev = k;
        }
    }
}
