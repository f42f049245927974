//! Wigner `d`- and `D`-matrices of SO(3).
//!
//! Conventions: `D^ℓ_{m'm}(α,β,γ) = e^{-im'α} d^ℓ_{m'm}(β) e^{-imγ}` for the
//! rotation `Rz(α) Ry(β) Rz(γ)`; rows and columns are indexed by `m + ℓ`.
//! The `d`-matrices are generated by the three-term recurrence in `ℓ` at fixed
//! `(m', m)`, seeded at `ℓ = max(|m|,|m'|)` where the Wigner sum has a single
//! term.

use nalgebra::{DMatrix, UnitQuaternion};
use num_complex::Complex64;

use crate::CMatrix;

fn factorial(n: i64) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Single entry of `d^ℓ_{m'm}(β)` from the explicit Wigner sum.
///
/// Accurate for small `ℓ`; cancellation makes it unusable beyond `ℓ ≈ 15`.
pub fn small_d_entry_sum(l: i64, mp: i64, m: i64, beta: f64) -> f64 {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pre = (factorial(l + mp) * factorial(l - mp) * factorial(l + m) * factorial(l - m)).sqrt();
    let lo = 0.max(m - mp);
    let hi = (l + m).min(l - mp);
    let mut acc = 0.0;
    for k in lo..=hi {
        let sign = if (mp - m + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let denom = factorial(l + m - k) * factorial(k) * factorial(mp - m + k) * factorial(l - mp - k);
        acc += sign * pre / denom
            * c.powi((2 * l + m - mp - 2 * k) as i32)
            * s.powi((mp - m + 2 * k) as i32);
    }
    acc
}

/// All `d^ℓ(β)` for `ℓ = 0..=lmax`.
pub fn small_d_all(lmax: u32, beta: f64) -> Vec<DMatrix<f64>> {
    let big_l = lmax as i64;
    let mut out: Vec<DMatrix<f64>> = (0..=lmax)
        .map(|l| DMatrix::zeros(2 * l as usize + 1, 2 * l as usize + 1))
        .collect();
    let cb = beta.cos();
    let top = (4 * big_l + 2) as usize;
    let fact: Vec<f64> = (0..=top as i64).map(factorial).collect();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let powers = |x: f64| -> Vec<f64> {
        std::iter::successors(Some(1.0), |p| Some(p * x)).take(top + 1).collect()
    };
    let (cp, sp) = (powers(c), powers(s));
    // the Wigner sum at ℓ = max(|m|,|m'|) has the single index k = max(0, m − m')
    let seed = |l: i64, mp: i64, m: i64| -> f64 {
        let k = 0.max(m - mp);
        let f = |i: i64| fact[i as usize];
        let sign = if (mp - m + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * (f(l + mp) * f(l - mp) * f(l + m) * f(l - m)).sqrt()
            / (f(l + m - k) * f(k) * f(mp - m + k) * f(l - mp - k))
            * cp[(2 * l + m - mp - 2 * k) as usize]
            * sp[(mp - m + 2 * k) as usize]
    };
    // d_{m'm} = (−1)^{m−m'} d_{mm'} = (−1)^{m−m'} d_{−m',−m}: one chain per orbit
    let mut put = |l: i64, mp: i64, m: i64, v: f64| {
        let sv = if (m - mp).rem_euclid(2) == 0 { v } else { -v };
        let o = &mut out[l as usize];
        let ix = |a: i64| (a + l) as usize;
        o[(ix(mp), ix(m))] = v;
        o[(ix(m), ix(mp))] = sv;
        o[(ix(-mp), ix(-m))] = sv;
        o[(ix(-m), ix(-mp))] = v;
    };
    for mp in -big_l..=big_l {
        for m in mp.max(-mp)..=big_l {
            let l0 = mp.abs().max(m.abs());
            let mut prev = 0.0;
            let mut cur = seed(l0, mp, m);
            put(l0, mp, m, cur);
            let (mpf, mf) = (mp as f64, m as f64);
            for j in l0..big_l {
                let jf = j as f64;
                let j1 = jf + 1.0;
                let a = ((j1 * j1 - mpf * mpf) * (j1 * j1 - mf * mf)).sqrt();
                let shift = if j == 0 { 0.0 } else { mpf * mf / (jf * j1) };
                let mut next = j1 * (2.0 * jf + 1.0) / a * (cb - shift) * cur;
                if j > l0 {
                    let b = ((jf * jf - mpf * mpf) * (jf * jf - mf * mf)).sqrt();
                    next -= b * j1 / (jf * a) * prev;
                }
                prev = cur;
                cur = next;
                put(j + 1, mp, m, cur);
            }
        }
    }
    out
}

/// ZYZ Euler angles `(α, β, γ)` of a unit quaternion.
///
/// Computed from half-angle combinations so that `α+γ` stays accurate near
/// `β = 0` and `α−γ` near `β = π`.
pub fn zyz_angles(q: &UnitQuaternion<f64>) -> (f64, f64, f64) {
    let (w, x, y, z) = (q.w, q.i, q.j, q.k);
    let half_sum = z.atan2(w);
    let half_diff = (-x).atan2(y);
    let beta = 2.0 * (x * x + y * y).sqrt().atan2((w * w + z * z).sqrt());
    (half_sum + half_diff, beta, half_sum - half_diff)
}

/// Rotation `Rz(α) Ry(β) Rz(γ)`.
pub fn rotation_from_zyz(alpha: f64, beta: f64, gamma: f64) -> UnitQuaternion<f64> {
    let z = nalgebra::Vector3::z_axis();
    let y = nalgebra::Vector3::y_axis();
    UnitQuaternion::from_axis_angle(&z, alpha)
        * UnitQuaternion::from_axis_angle(&y, beta)
        * UnitQuaternion::from_axis_angle(&z, gamma)
}

fn assemble(l: usize, alpha: f64, gamma: f64, d: &DMatrix<f64>) -> CMatrix {
    let n = 2 * l + 1;
    let lf = l as f64;
    CMatrix::from_fn(n, n, |r, c| {
        let mp = r as f64 - lf;
        let m = c as f64 - lf;
        Complex64::from_polar(d[(r, c)], -(mp * alpha + m * gamma))
    })
}

/// `D^ℓ(q)` for every `ℓ = 0..=lmax`.
pub fn big_d_all(lmax: u32, q: &UnitQuaternion<f64>) -> Vec<CMatrix> {
    let (alpha, beta, gamma) = zyz_angles(q);
    let big_l = lmax as usize;
    let phases = |t: f64| -> Vec<Complex64> {
        (0..=2 * big_l).map(|i| Complex64::from_polar(1.0, -((i as f64) - lmax as f64) * t)).collect()
    };
    let (pa, pg) = (phases(alpha), phases(gamma));
    small_d_all(lmax, beta)
        .iter()
        .enumerate()
        .map(|(l, d)| {
            let off = big_l - l;
            CMatrix::from_fn(2 * l + 1, 2 * l + 1, |r, c| pa[r + off] * pg[c + off] * d[(r, c)])
        })
        .collect()
}

/// `D^ℓ(q)` for a single `ℓ`.
pub fn big_d(l: u32, q: &UnitQuaternion<f64>) -> CMatrix {
    let (alpha, beta, gamma) = zyz_angles(q);
    let d = small_d_all(l, beta).pop().expect("non-empty");
    assemble(l as usize, alpha, gamma, &d)
}
