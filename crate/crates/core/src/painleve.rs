//! Fourth Painlevé equation
//!
//! ```text
//! q'' = q'²/(2q) + 3q³/2 + 4z q² + 2(z² − A) q + B/q
//! ```
//!
//! The discrete orbit maps onto P_IV through `x_n = −√2/q(z)`, `t = 2z`, with
//! `(A, B) = (1 + 2n + α, −2α²)`. First derivatives of q are analytic (via
//! [`xn_derivative`]); second derivatives always come from central
//! differences with step h/2 in z (h in t), so every residual that involves
//! q'' carries an O(h²) floor.

use crate::discrete::{run_discrete, DiscreteState};
use crate::error::{Error, Result};
use crate::numerics::ExtReal;
use crate::toda::xn_derivative;

/// Parameters (A, B) of P_IV.
#[derive(Clone, Debug, PartialEq)]
pub struct P4Params {
    pub a: ExtReal,
    pub b: ExtReal,
}

/// A point on a P_IV solution: value and first two z-derivatives.
#[derive(Clone, Debug)]
pub struct P4Point {
    pub z: ExtReal,
    pub q: ExtReal,
    pub q1: ExtReal,
    pub q2: ExtReal,
    pub params: P4Params,
}

/// ε or μ in a Bäcklund transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `(A, B) = (1 + 2n + α, −2α²)`
pub fn laguerre_p4_params(n: usize, alpha: &ExtReal) -> P4Params {
    P4Params {
        a: alpha + (1 + 2 * n) as f64,
        b: alpha.square() * -2.0,
    }
}

/// q and dq/dz from one orbit state at t: `q = −√2/x`, `q' = 2√2 x'/x²`.
pub fn q_from_state(state: &DiscreteState, t: &ExtReal) -> Result<(ExtReal, ExtReal)> {
    if state.x.is_zero() {
        return Err(Error::Pole("x_n"));
    }
    let sqrt2 = ExtReal::sqrt2(state.x.prec());
    let x1 = xn_derivative(&state.x, &state.y, t);
    let q = -(&sqrt2 / &state.x);
    let q1 = sqrt2 * 2.0 * x1 / state.x.square();
    Ok((q, q1))
}

/// P_IV points for n = 0..=n_max at z, all from one discrete orbit per t.
pub fn q_orbit_points(alpha: &ExtReal, n_max: usize, z: &ExtReal, h: &ExtReal, prec: u32) -> Result<Vec<P4Point>> {
    let orbit = |t: &ExtReal| -> Result<Vec<DiscreteState>> {
        let params = crate::moments::WeightParams::new(alpha.clone(), t.clone())?;
        Ok(run_discrete(&params, n_max.max(1), prec)?.states)
    };
    let t = z * 2.0;
    let t_plus = &t + h;
    let t_minus = &t - h;
    let center = orbit(&t)?;
    let plus = orbit(&t_plus)?;
    let minus = orbit(&t_minus)?;
    (0..=n_max)
        .map(|n| {
            let (q, q1) = q_from_state(&center[n], &t)?;
            let (_, q1_plus) = q_from_state(&plus[n], &t_plus)?;
            let (_, q1_minus) = q_from_state(&minus[n], &t_minus)?;
            // z-step is h/2 on each side
            let q2 = (q1_plus - q1_minus) / h;
            Ok(P4Point {
                z: z.with_prec(q.prec()),
                q,
                q1,
                q2,
                params: laguerre_p4_params(n, alpha),
            })
        })
        .collect()
}

/// The P_IV point for index n at z.
pub fn q_from_orbit(alpha: &ExtReal, n: usize, z: &ExtReal, h: &ExtReal, prec: u32) -> Result<P4Point> {
    Ok(q_orbit_points(alpha, n, z, h, prec)?.swap_remove(n))
}

/// Right-hand side of P_IV.
pub fn p4_rhs(q: &ExtReal, q1: &ExtReal, z: &ExtReal, p: &P4Params) -> Result<ExtReal> {
    if q.is_zero() {
        return Err(Error::Pole("q"));
    }
    Ok(q1.square() / (q * 2.0) + q.powi(3) * 1.5 + z * q.square() * 4.0 + (z.square() - &p.a) * q * 2.0
        + &p.b / q)
}

/// `q'' − rhs(q, q', z)`
pub fn p4_residual(p: &P4Point) -> Result<ExtReal> {
    Ok(&p.q2 - p4_rhs(&p.q, &p.q1, &p.z, &p.params)?)
}

/// `q' + q² + 2zq − 2α`
pub fn riccati_residual(q: &ExtReal, q1: &ExtReal, z: &ExtReal, alpha: &ExtReal) -> ExtReal {
    q1 + q.square() + z * q * 2.0 - alpha * 2.0
}

fn sqrt_minus_2b(p: &P4Params) -> Result<ExtReal> {
    if p.b.is_positive() {
        return Err(Error::Domain(format!(
            "Backlund transformation needs B <= 0, got {}",
            p.b.to_f64()
        )));
    }
    Ok((&p.b * -2.0).sqrt())
}

/// Parameter map of T_{ε,μ}:
/// `Ã = (2μ − 2A + 3με√(−2B))/4`, `B̃ = −(1 + Aμ + ε√(−2B)/2)²/2`.
pub fn backlund_params(p: &P4Params, eps: Sign, mu: Sign) -> Result<P4Params> {
    let s = sqrt_minus_2b(p)?;
    let (e, m) = (eps.value(), mu.value());
    let a = (&p.a * -2.0 + 2.0 * m + &s * (3.0 * m * e)) * 0.25;
    let b = (&p.a * m + 1.0 + &s * (0.5 * e)).square() * -0.5;
    Ok(P4Params { a, b })
}

/// T_{ε,μ} q = (q' − μq² − 2μzq − ε√(−2B)) / (2μq), with the new parameters.
pub fn backlund(q: &ExtReal, q1: &ExtReal, z: &ExtReal, p: &P4Params, eps: Sign, mu: Sign) -> Result<(ExtReal, P4Params)> {
    if q.is_zero() {
        return Err(Error::Pole("q"));
    }
    let s = sqrt_minus_2b(p)?;
    let (e, m) = (eps.value(), mu.value());
    let num = q1 - q.square() * m - z * q * (2.0 * m) - s * e;
    Ok((num / (q * (2.0 * m)), backlund_params(p, eps, mu)?))
}

/// T_{ε,μ} together with the analytic derivative of the image, using q''
/// from P_IV itself. Lets transformations be composed without differencing.
pub fn backlund_with_derivative(
    q: &ExtReal,
    q1: &ExtReal,
    z: &ExtReal,
    p: &P4Params,
    eps: Sign,
    mu: Sign,
) -> Result<(ExtReal, ExtReal, P4Params)> {
    let (image, params) = backlund(q, q1, z, p, eps, mu)?;
    let q2 = p4_rhs(q, q1, z, p)?;
    let s = sqrt_minus_2b(p)?;
    let (e, m) = (eps.value(), mu.value());
    let num = q1 - q.square() * m - z * q * (2.0 * m) - s * e;
    let num1 = &q2 - q * q1 * (2.0 * m) - q * (2.0 * m) - z * q1 * (2.0 * m);
    let den = q * (2.0 * m);
    let den1 = q1 * (2.0 * m);
    let image1 = (num1 * &den - num * den1) / den.square();
    Ok((image, image1, params))
}

fn checked_denominator(den: ExtReal, n: usize) -> Result<ExtReal> {
    let floor = ExtReal::pow2(16 - den.prec() as i32, den.prec());
    if den.abs() <= floor {
        return Err(Error::LadderSingularity { n });
    }
    Ok(den)
}

/// q_{n+1} from q_n:
/// `(2α + 2zq + q² − q')(2α − 2zq − q² + q') / (2q (q² + 2zq − q' − 4 − 4n − 2α))`.
pub fn ladder_up(q: &ExtReal, q1: &ExtReal, z: &ExtReal, n: usize, alpha: &ExtReal) -> Result<ExtReal> {
    if q.is_zero() {
        return Err(Error::Pole("q"));
    }
    let core = z * q * 2.0 + q.square() - q1;
    let two_alpha = alpha * 2.0;
    let num = (&two_alpha + &core) * (&two_alpha - &core);
    let den = checked_denominator(q * 2.0 * (&core - 4.0 - (4 * n) as f64 - &two_alpha), n)?;
    Ok(num / den)
}

/// q_{n−1} from q_n:
/// `−(q' + q² + 2zq − 2α)(q' + q² + 2zq + 2α) / (2q (q' + q² + 2zq − 2(2n + α)))`.
///
/// At n = 0 the first factor is the Riccati residual, and on a Riccati
/// solution the denominator factor coincides with it, so the expression is
/// 0/0 and reported as a [`Error::LadderSingularity`]. No n = −1 object exists.
pub fn ladder_down(q: &ExtReal, q1: &ExtReal, z: &ExtReal, n: usize, alpha: &ExtReal) -> Result<ExtReal> {
    if q.is_zero() {
        return Err(Error::Pole("q"));
    }
    let core = q1 + q.square() + z * q * 2.0;
    let two_alpha = alpha * 2.0;
    let num = (&core - &two_alpha) * (&core + &two_alpha);
    let den = checked_denominator(q * 2.0 * (&core - (alpha + (2 * n) as f64) * 2.0), n)?;
    Ok(-(num / den))
}

/// Three consecutive orbit states (n−1, n, n+1) at t = 2z checked against
/// the ladder: `max(|up(q_n) − q_{n+1}|, |down(q_n) − q_{n−1}|)`.
pub fn relation_e_from_states(states: &[DiscreteState; 3], z: &ExtReal, alpha: &ExtReal) -> Result<ExtReal> {
    let t = z * 2.0;
    let n = states[1].n;
    let (q_prev, _) = q_from_state(&states[0], &t)?;
    let (q, q1) = q_from_state(&states[1], &t)?;
    let (q_next, _) = q_from_state(&states[2], &t)?;
    let up = ladder_up(&q, &q1, z, n, alpha)?;
    let down = ladder_down(&q, &q1, z, n, alpha)?;
    Ok((up - q_next).abs().max((down - q_prev).abs()))
}

/// Ladder consistency of the discrete orbit at index n ≥ 1.
pub fn relation_e_check(alpha: &ExtReal, n: usize, z: &ExtReal, prec: u32) -> Result<ExtReal> {
    if n < 1 {
        return Err(Error::Domain("relation E needs n >= 1".into()));
    }
    let params = crate::moments::WeightParams::new(alpha.clone(), z * 2.0)?;
    let run = run_discrete(&params, n + 1, prec)?;
    let states = [run.states[n - 1].clone(), run.states[n].clone(), run.states[n + 1].clone()];
    relation_e_from_states(&states, z, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::abs_diff;
    use crate::toda::default_step;

    const PREC: u32 = 256;

    fn r(v: f64) -> ExtReal {
        ExtReal::from_f64(v, PREC)
    }

    #[test]
    fn laguerre_parameters() {
        assert_eq!(laguerre_p4_params(0, &r(1.0)), P4Params { a: r(2.0), b: r(-2.0) });
        assert_eq!(laguerre_p4_params(0, &r(0.0)), P4Params { a: r(1.0), b: r(0.0) });
        assert_eq!(laguerre_p4_params(3, &r(0.5)), P4Params { a: r(7.5), b: r(-0.5) });
    }

    #[test]
    fn orbit_point_closed_form() {
        let pt = q_from_orbit(&r(1.0), 0, &r(0.0), &default_step(PREC), PREC).unwrap();
        let pi = ExtReal::pi(PREC);
        assert!(abs_diff(&pt.q, &pi.sqrt()) < 1e-75);
        assert!(abs_diff(&pt.q1, &(2.0 - &pi)) < 1e-75);
        assert!(pt.q1.to_decimal(18).starts_with("-1.1415926535897932"));
        // q · x_0 = −√2
        let params = crate::moments::WeightParams::from_f64(1.0, 0.0, PREC).unwrap();
        let x0 = crate::discrete::initial_state(&params, PREC).unwrap().x;
        assert!(abs_diff(&(&pt.q * x0), &-ExtReal::sqrt2(PREC)) < 1e-75);
    }

    #[test]
    fn p4_residual_on_orbit() {
        let h = default_step(PREC);
        for alpha in [0.5, 1.0, 2.5] {
            for z in [-1.0, 0.0, 0.5, 1.5] {
                for pt in q_orbit_points(&r(alpha), 10, &r(z), &h, PREC).unwrap() {
                    let res = p4_residual(&pt).unwrap();
                    assert!(res.abs() < 1e-12, "alpha={alpha} z={z}: {}", res.to_f64());
                }
            }
        }
    }

    #[test]
    fn p4_residual_is_linear_in_q2() {
        let mut pt = q_from_orbit(&r(2.5), 2, &r(0.5), &default_step(PREC), PREC).unwrap();
        let before = p4_residual(&pt).unwrap();
        let delta = r(0.125);
        pt.q2 += &delta;
        let after = p4_residual(&pt).unwrap();
        assert_eq!(after - before, delta);
        pt.q = ExtReal::zero(PREC);
        assert!(matches!(p4_residual(&pt), Err(Error::Pole(_))));
    }

    #[test]
    fn riccati_at_base_orbit() {
        let pi = ExtReal::pi(PREC);
        let exact = riccati_residual(&pi.sqrt(), &(2.0 - &pi), &r(0.0), &r(1.0));
        assert!(exact.abs() < 1e-75);
        assert!(riccati_residual(&r(0.0), &r(0.0), &r(0.0), &r(0.0)).is_zero());
        assert_eq!(riccati_residual(&r(1.0), &r(0.0), &r(0.0), &r(1.0)), -1.0);

        let h = default_step(PREC);
        for alpha in [0.5, 1.0, 2.5] {
            for z in [-1.0, 0.0, 1.5] {
                let pt = q_from_orbit(&r(alpha), 0, &r(z), &h, PREC).unwrap();
                assert!(riccati_residual(&pt.q, &pt.q1, &pt.z, &r(alpha)).abs() < 1e-60);
            }
        }
    }

    #[test]
    fn backlund_parameter_map() {
        let p = P4Params { a: r(2.0), b: r(-2.0) };
        let up = backlund_params(&p, Sign::Plus, Sign::Plus).unwrap();
        assert_eq!(up, P4Params { a: r(1.0), b: r(-8.0) });
        let down = backlund_params(&p, Sign::Minus, Sign::Plus).unwrap();
        assert_eq!(down, P4Params { a: r(-2.0), b: r(-2.0) });
        let bad = P4Params { a: r(1.0), b: r(0.5) };
        assert!(matches!(backlund_params(&bad, Sign::Plus, Sign::Plus), Err(Error::Domain(_))));
        assert!(matches!(
            backlund(&r(0.0), &r(1.0), &r(0.0), &p, Sign::Plus, Sign::Plus),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn backlund_image_solves_p4() {
        // Transform the n = 0 orbit and difference the image in z.
        let alpha = r(1.0);
        let z = r(0.0);
        let h = default_step(PREC);
        let dz = &h * 0.5;
        for (eps, mu) in [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Minus)] {
            let image = |z: &ExtReal| {
                let pt = q_from_orbit(&alpha, 0, z, &h, PREC).unwrap();
                backlund(&pt.q, &pt.q1, z, &pt.params, eps, mu).unwrap()
            };
            let (qc, params) = image(&z);
            if qc.abs() < 1e-10 {
                continue;
            }
            let (qp, _) = image(&(&z + &dz));
            let (qm, _) = image(&(&z - &dz));
            let q1 = (&qp - &qm) / (&dz * 2.0);
            let q2 = (qp - &qc * 2.0 + qm) / dz.square();
            let pt = P4Point { z: z.clone(), q: qc, q1, q2, params };
            let res = p4_residual(&pt).unwrap();
            assert!(res.abs() < 1e-12, "{eps:?},{mu:?}: {}", res.to_f64());
        }
    }

    #[test]
    fn parameter_map_composes_consistently() {
        // two applications agree with the closed form written out here
        let signs = [Sign::Plus, Sign::Minus];
        for a in [-1.5, 0.0, 2.0, 7.5] {
            for b in [-0.5, -2.0, -8.0] {
                let p = P4Params { a: r(a), b: r(b) };
                for &e1 in &signs {
                    for &m1 in &signs {
                        for &e2 in &signs {
                            for &m2 in &signs {
                                let twice = backlund_params(&backlund_params(&p, e1, m1).unwrap(), e2, m2).unwrap();
                                let step = |a: f64, b: f64, e: f64, m: f64| {
                                    let s = (-2.0 * b).sqrt();
                                    ((2.0 * m - 2.0 * a + 3.0 * m * e * s) / 4.0, -0.5 * (1.0 + a * m + 0.5 * e * s).powi(2))
                                };
                                let (a1, b1) = step(a, b, e1.value(), m1.value());
                                let (a2, b2) = step(a1, b1, e2.value(), m2.value());
                                assert!((twice.a.to_f64() - a2).abs() < 1e-12);
                                assert!((twice.b.to_f64() - b2).abs() < 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_matches_orbit() {
        let h = default_step(PREC);
        for alpha in [0.5, 1.0, 2.5] {
            for z in [-1.0, 0.0, 0.7, 1.5] {
                let pts = q_orbit_points(&r(alpha), 11, &r(z), &h, PREC).unwrap();
                for n in 0..=10 {
                    let up = ladder_up(&pts[n].q, &pts[n].q1, &pts[n].z, n, &r(alpha)).unwrap();
                    assert!(abs_diff(&up, &pts[n + 1].q) < 1e-20, "up alpha={alpha} z={z} n={n}");
                    if n >= 1 {
                        let down = ladder_down(&pts[n].q, &pts[n].q1, &pts[n].z, n, &r(alpha)).unwrap();
                        assert!(abs_diff(&down, &pts[n - 1].q) < 1e-20, "down n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_round_trip() {
        // down(up(q)) with the derivative of up(q) differenced in z
        let alpha = r(2.5);
        let h = default_step(PREC);
        let dz = &h * 0.5;
        let z = r(0.7);
        for n in [0usize, 3] {
            let up_at = |z: &ExtReal| {
                let pt = q_from_orbit(&alpha, n, z, &h, PREC).unwrap();
                ladder_up(&pt.q, &pt.q1, z, n, &alpha).unwrap()
            };
            let q_up = up_at(&z);
            let q_up1 = (up_at(&(&z + &dz)) - up_at(&(&z - &dz))) / (&dz * 2.0);
            let back = ladder_down(&q_up, &q_up1, &z, n + 1, &alpha).unwrap();
            let q = q_from_orbit(&alpha, n, &z, &h, PREC).unwrap().q;
            assert!(abs_diff(&back, &q) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn ladder_degenerate_cases() {
        // 2α = 0 and 2zq + q² − q' = 0: both factors vanish
        let q = r(1.0);
        let z = r(0.25);
        let q1 = &z * &q * 2.0 + q.square();
        assert!(ladder_up(&q, &q1, &z, 0, &r(0.0)).unwrap().is_zero());
        // denominator q² + 2zq − q' − 4 − 4n − 2α vanishes
        let q1 = q.square() + &z * &q * 2.0 - 4.0 - 2.0;
        assert!(matches!(
            ladder_up(&q, &q1, &z, 0, &r(1.0)),
            Err(Error::LadderSingularity { n: 0 })
        ));
        // at n = 0 numerator and denominator both carry the Riccati residual
        let pt = q_from_orbit(&r(1.0), 0, &r(0.5), &default_step(PREC), PREC).unwrap();
        assert!(matches!(
            ladder_down(&pt.q, &pt.q1, &pt.z, 0, &r(1.0)),
            Err(Error::LadderSingularity { n: 0 })
        ));
        // off the Riccati curve the n = 0 value is finite
        let bumped = &pt.q1 + 1e-3;
        assert!(ladder_down(&pt.q, &bumped, &pt.z, 0, &r(1.0)).unwrap().is_finite());
    }

    #[test]
    fn ladder_down_is_continuous_near_orbit() {
        let alpha = r(1.0);
        let pt = q_from_orbit(&alpha, 2, &r(0.3), &default_step(PREC), PREC).unwrap();
        let base = ladder_down(&pt.q, &pt.q1, &pt.z, 2, &alpha).unwrap();
        let mut last = 0.0;
        for k in 1..=6 {
            let eps = r(10f64.powi(-k));
            let bumped = ladder_down(&(&pt.q + &eps), &pt.q1, &pt.z, 2, &alpha).unwrap();
            let change = abs_diff(&bumped, &base);
            assert!(change < 1e3 * eps.to_f64());
            if k > 1 {
                assert!(change < last);
            }
            last = change;
        }
    }

    #[test]
    fn triple_backlund_composition_raises_index() {
        // T_{1,1} ∘ T_{1,−1} ∘ T_{1,1} applied to q_n reproduces q_{n+1}
        let alpha = r(1.0);
        let h = default_step(PREC);
        let z = r(0.4);
        let pts = q_orbit_points(&alpha, 4, &z, &h, PREC).unwrap();
        for n in 0..4 {
            let pt = &pts[n];
            let (q, q1, p) = backlund_with_derivative(&pt.q, &pt.q1, &z, &pt.params, Sign::Plus, Sign::Plus).unwrap();
            let (q, q1, p) = backlund_with_derivative(&q, &q1, &z, &p, Sign::Plus, Sign::Minus).unwrap();
            let (q, _, p) = backlund_with_derivative(&q, &q1, &z, &p, Sign::Plus, Sign::Plus).unwrap();
            let ladder = ladder_up(&pt.q, &pt.q1, &z, n, &alpha).unwrap();
            assert!(abs_diff(&q, &ladder) < 1e-40, "n={n}: {} vs {}", q.to_f64(), ladder.to_f64());
            assert_eq!(p, laguerre_p4_params(n + 1, &alpha));
        }
    }

    #[test]
    fn relation_e_on_orbit_and_under_fault() {
        let e = relation_e_check(&r(1.0), 1, &r(0.0), PREC).unwrap();
        assert!(e < 1e-20);
        let e = relation_e_check(&r(2.5), 3, &r(0.7), PREC).unwrap();
        assert!(e < 1e-20);
        assert!(relation_e_check(&r(1.0), 0, &r(0.0), PREC).is_err());

        let params = crate::moments::WeightParams::from_f64(2.5, 1.4, PREC).unwrap();
        let run = run_discrete(&params, 4, PREC).unwrap();
        let mut states = [run.states[2].clone(), run.states[3].clone(), run.states[4].clone()];
        states[1].y += 1e-6;
        let faulty = relation_e_from_states(&states, &r(0.7), &r(2.5)).unwrap();
        assert!(faulty > 1e-9, "{}", faulty.to_f64());
    }
}
