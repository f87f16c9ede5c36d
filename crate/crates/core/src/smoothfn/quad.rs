//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use alloc::vec::Vec;

use crate::error::{Error, Result};

// Nodes and weights are the published 30-digit values.

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Maximum number of interval bisections before giving up.
pub const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One (7, 15) panel on `[a, b]`.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sample = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Integrand { x })
        }
    };
    let fc = sample(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = sample(c - dx)? + sample(c + dx)?;
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Ok(Estimate {
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    })
}

/// Integrates `f` over `[a, b]` until the summed error estimate is ≤ `tol`.
///
/// Intervals are bisected in order of largest error, so the result is
/// deterministic for fixed inputs. `b < a` integrates with reversed sign.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "quadrature tolerance {tol} must be > 0"
        )));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if b < a {
        let e = integrate(f, b, a, tol)?;
        return Ok(Estimate {
            value: -e.value,
            error: e.error,
        });
    }
    struct Panel {
        a: f64,
        b: f64,
        est: Estimate,
    }
    let first = gk15(&mut f, a, b)?;
    let mut panels = Vec::with_capacity(64);
    panels.push(Panel { a, b, est: first });
    let mut total_err = first.error;
    let mut splits = 0;
    while total_err > tol {
        if splits >= MAX_SUBDIVISIONS {
            let value = panels.iter().map(|p| p.est.value).sum();
            return Err(Error::QuadratureBudget {
                a,
                b,
                tol,
                estimate: value,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.est.error.total_cmp(&y.1.est.error))
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Interval exhausted at machine resolution; accept what we have.
            panels.push(p);
            break;
        }
        let left = gk15(&mut f, p.a, m)?;
        let right = gk15(&mut f, m, p.b)?;
        panels.push(Panel {
            a: p.a,
            b: m,
            est: left,
        });
        panels.push(Panel {
            a: m,
            b: p.b,
            est: right,
        });
        total_err = panels.iter().map(|q| q.est.error).sum();
        splits += 1;
    }
    // Sum in abscissa order so the result does not depend on panel bookkeeping.
    panels.sort_unstable_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.est.value).sum();
    Ok(Estimate {
        value,
        error: total_err,
    })
}
