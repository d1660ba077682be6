//! The smooth cutoff `chi` and the small-divisor quotient `phi`.
//!
//! `chi` is built from the standard exponential mollifier: with
//! `s(u) = exp(-1/u)` for `u > 0` (else 0) and
//! `step(u) = s(1-u) / (s(1-u) + s(u))`,
//!
//! ```text
//! chi(t) = 1            for |t| <= 1/2,
//! chi(t) = step(2|t|-1) for 1/2 < |t| < 1,
//! chi(t) = 0            for |t| >= 1.
//! ```
//!
//! `phi(t) = (1 - chi(t)) / t` extended by `phi(0) = 0`; it vanishes on the
//! plateau, equals `1/t` outside the unit interval and satisfies `|phi| <= 2`.
//! First and second derivatives are analytic (chain rule through the
//! mollifier); higher orders are not provided here.

/// Inner plateau radius of the cutoff.
pub const PLATEAU_RADIUS: f64 = 0.5;
/// Outer support radius of the cutoff.
pub const SUPPORT_RADIUS: f64 = 1.0;

fn mollifier(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

fn mollifier_d1(u: f64) -> f64 {
    if u > 0.0 {
        mollifier(u) / (u * u)
    } else {
        0.0
    }
}

fn mollifier_d2(u: f64) -> f64 {
    if u > 0.0 {
        mollifier(u) * (1.0 - 2.0 * u) / (u * u * u * u)
    } else {
        0.0
    }
}

/// step(u): 1 for u <= 0, 0 for u >= 1, strictly decreasing in between.
fn step(u: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        let a = mollifier(1.0 - u);
        let b = mollifier(u);
        a / (a + b)
    }
}

fn step_d1(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let a = mollifier(1.0 - u);
    let b = mollifier(u);
    let da = -mollifier_d1(1.0 - u);
    let db = mollifier_d1(u);
    let denom = a + b;
    (da * b - a * db) / (denom * denom)
}

fn step_d2(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let a = mollifier(1.0 - u);
    let b = mollifier(u);
    let da = -mollifier_d1(1.0 - u);
    let db = mollifier_d1(u);
    let dda = mollifier_d2(1.0 - u);
    let ddb = mollifier_d2(u);
    let denom = a + b;
    (dda * b - a * ddb) / (denom * denom)
        - 2.0 * (da * b - a * db) * (da + db) / (denom * denom * denom)
}

/// The cutoff itself: symmetric, values in [0, 1], identically 1 on the
/// plateau and identically 0 outside the support.
pub fn chi(t: f64) -> f64 {
    let a = t.abs();
    if a <= PLATEAU_RADIUS {
        1.0
    } else if a >= SUPPORT_RADIUS {
        0.0
    } else {
        step(2.0 * a - 1.0)
    }
}

/// n-th derivative of `chi` for n in 0..=2.
pub fn chi_deriv(t: f64, order: u32) -> f64 {
    let a = t.abs();
    match order {
        0 => chi(t),
        _ if a <= PLATEAU_RADIUS || a >= SUPPORT_RADIUS => 0.0,
        1 => step_d1(2.0 * a - 1.0) * 2.0 * t.signum(),
        2 => step_d2(2.0 * a - 1.0) * 4.0,
        _ => panic!("chi derivatives available up to order 2, requested {order}"),
    }
}

/// phi(t) = (1 - chi(t)) / t with phi(0) = 0; equals 1/t for |t| >= 1 and
/// vanishes identically on the plateau.
pub fn phi(t: f64) -> f64 {
    let a = t.abs();
    if a <= PLATEAU_RADIUS {
        0.0
    } else if a >= SUPPORT_RADIUS {
        1.0 / t
    } else {
        (1.0 - chi(t)) / t
    }
}

/// n-th derivative of `phi` for n in 0..=2.
pub fn phi_deriv(t: f64, order: u32) -> f64 {
    let a = t.abs();
    match order {
        0 => phi(t),
        _ if a <= PLATEAU_RADIUS => 0.0,
        1 => {
            if a >= SUPPORT_RADIUS {
                -1.0 / (t * t)
            } else {
                -chi_deriv(t, 1) / t - (1.0 - chi(t)) / (t * t)
            }
        }
        2 => {
            if a >= SUPPORT_RADIUS {
                2.0 / (t * t * t)
            } else {
                -chi_deriv(t, 2) / t + 2.0 * chi_deriv(t, 1) / (t * t)
                    + 2.0 * (1.0 - chi(t)) / (t * t * t)
            }
        }
        _ => panic!("phi derivatives available up to order 2, requested {order}"),
    }
}
