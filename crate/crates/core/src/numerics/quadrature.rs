//! Globally adaptive Gauss–Legendre quadrature on (0, ∞).
//!
//! The half-line is split at `c = max(1, split)`. The finite part (0, c] is
//! integrated directly; the tail [c, ∞) is mapped to u ∈ [0, 1) through
//! `x = c + u/(1-u)`. Each panel carries a Gauss rule of order `m` and `2m`;
//! their difference is the panel error estimate, and the panel with the
//! largest estimate is bisected until the total falls below the tolerance.
//!
//! This is an oracle for cross-checks, never part of a primary route.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{compensated_sum, ExtReal};
use crate::error::{Error, Result};

const MAX_PANELS: usize = 6000;

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: ExtReal,
    /// Sum of the panel error estimates.
    pub error: ExtReal,
    pub panels: usize,
}

type Rule = Arc<Vec<(ExtReal, ExtReal)>>;

fn rule_cache() -> &'static Mutex<HashMap<(usize, u32), Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on [-1, 1].
fn gauss_legendre(order: usize, prec: u32) -> Rule {
    if let Some(rule) = rule_cache().lock().unwrap().get(&(order, prec)) {
        return rule.clone();
    }
    let work = prec + 32;
    let one = ExtReal::one(work);
    let stop = ExtReal::pow2(-(prec as i32) - 8, work);
    let mut rule = Vec::with_capacity(order);
    for i in 0..order.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut x = ExtReal::from_f64(guess, work);
        let mut dp = one.clone();
        for _ in 0..200 {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
            let mut p_prev = one.clone();
            let mut p = x.clone();
            for k in 1..order {
                let next = (&x * &p * (2 * k + 1) as f64 - &p_prev * k as f64) / (k + 1) as f64;
                p_prev = p;
                p = next;
            }
            dp = (&x * &p - &p_prev) * order as f64 / (&x * &x - 1.0);
            let dx = &p / &dp;
            x -= &dx;
            if dx.abs() < stop {
                break;
            }
        }
        let w = 2.0 / ((1.0 - &x * &x) * &dp * &dp);
        rule.push((x.with_prec(prec), w.with_prec(prec)));
    }
    let mut full: Vec<(ExtReal, ExtReal)> = rule.iter().map(|(x, w)| (-x, w.clone())).collect();
    let mirrored = rule.iter().rev().skip(order % 2).cloned();
    full.extend(mirrored);
    let rule: Rule = Arc::new(full);
    rule_cache()
        .lock()
        .unwrap()
        .insert((order, prec), rule.clone());
    rule
}

fn apply_rule<F: Fn(&ExtReal) -> ExtReal>(f: &F, rule: &Rule, a: &ExtReal, b: &ExtReal) -> ExtReal {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let prec = mid.prec();
    let terms: Vec<ExtReal> = rule
        .iter()
        .map(|(x, w)| w * f(&(&mid + &half * x)))
        .collect();
    compensated_sum(terms.iter(), prec) * half
}

struct Panel {
    tail: bool,
    a: ExtReal,
    b: ExtReal,
    value: ExtReal,
    error: ExtReal,
}

/// Integrates `f` over (0, ∞), splitting at `max(1, split)`.
///
/// `f` must decay fast enough for the mapped tail to be bounded; integrable
/// singularities at the origin are resolved by repeated bisection.
pub fn quad_halfline<F>(f: F, split: &ExtReal, abs_tol: &ExtReal, prec: u32) -> Result<QuadResult>
where
    F: Fn(&ExtReal) -> ExtReal,
{
    let order = 12 + (prec as usize) / 32;
    let coarse = gauss_legendre(order, prec);
    let fine = gauss_legendre(2 * order, prec);

    let c = split.with_prec(prec).max(ExtReal::one(prec));
    let head = |x: &ExtReal| f(x);
    let tail = |u: &ExtReal| {
        let gap = 1.0 - u;
        let x = &c + u / &gap;
        f(&x) / gap.square()
    };

    // Panels on (0, c] live in x; panels on [0, 1) live in u.
    let eval = |is_tail: bool, a: &ExtReal, b: &ExtReal| -> Panel {
        let (lo, hi) = if is_tail {
            (apply_rule(&tail, &coarse, a, b), apply_rule(&tail, &fine, a, b))
        } else {
            (apply_rule(&head, &coarse, a, b), apply_rule(&head, &fine, a, b))
        };
        Panel {
            tail: is_tail,
            a: a.clone(),
            b: b.clone(),
            error: (&hi - &lo).abs(),
            value: hi,
        }
    };

    let zero = ExtReal::zero(prec);
    let one = ExtReal::one(prec);
    let mut heap = BinaryHeap::new();
    let mut running_error = ExtReal::zero(prec);
    for panel in [eval(false, &zero, &c), eval(true, &zero, &one)] {
        running_error += &panel.error;
        heap.push(Ranked(panel));
    }

    loop {
        if running_error <= *abs_tol || heap.len() >= MAX_PANELS || !running_error.is_finite() {
            let error = compensated_sum(heap.iter().map(|p| &p.0.error), prec);
            if error <= *abs_tol {
                let value = compensated_sum(heap.iter().map(|p| &p.0.value), prec);
                return Ok(QuadResult {
                    value,
                    error,
                    panels: heap.len(),
                });
            }
            if heap.len() >= MAX_PANELS || !error.is_finite() {
                return Err(Error::Convergence {
                    requested: abs_tol.to_f64(),
                    achieved: error.to_f64(),
                });
            }
            running_error = error;
        }
        let Ranked(panel) = heap.pop().expect("panel heap is never empty");
        running_error -= &panel.error;
        let mid = (&panel.a + &panel.b) * 0.5;
        for child in [eval(panel.tail, &panel.a, &mid), eval(panel.tail, &mid, &panel.b)] {
            running_error += &child.error;
            heap.push(Ranked(child));
        }
    }
}

/// Heap entry ordered by panel error estimate.
struct Ranked(Panel);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .partial_cmp(&other.0.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Default absolute tolerance `2^(-prec/2)`.
pub fn default_tolerance(prec: u32) -> ExtReal {
    ExtReal::pow2(-((prec / 2) as i32), prec)
}

/// ∫₀^∞ x^s e^(-x²+tx) dx with an explicit absolute tolerance.
pub fn integrate_halfline_tol(s: &ExtReal, t: &ExtReal, abs_tol: &ExtReal, prec: u32) -> Result<QuadResult> {
    if s <= &-1.0 {
        return Err(Error::DivergentIntegral { s: s.to_f64() });
    }
    let s = s.with_prec(prec);
    let t = t.with_prec(prec);
    let integrand = |x: &ExtReal| {
        let exponent = &s * x.ln() - x.square() + &t * x;
        exponent.exp()
    };
    quad_halfline(integrand, &t, abs_tol, prec)
}

/// ∫₀^∞ x^s e^(-x²+tx) dx at the default tolerance `2^(-prec/2)`.
pub fn integrate_halfline(s: &ExtReal, t: &ExtReal, prec: u32) -> Result<ExtReal> {
    integrate_halfline_tol(s, t, &default_tolerance(prec), prec).map(|r| r.value)
}
